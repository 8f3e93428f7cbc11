use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::record::{fmt_f64, Csv, RunRecord, Timing};
use super::{CalibrateArgs, CliError, EvalArgs, OracleArgs, Outcome, SearchArgs, UnitsArgs, VerifyArgs};
use super::{EXIT_FAILED, EXIT_OK};
use crate::calibration::{gate_chain, ideal_chain, tau_sweep, theta_sweep, CurvePoint};
use crate::fock::FockVector;
use crate::jc::{oracle_deviation, AtomPrep, DiagonalKraus};
use crate::metrics::{coeffs, success_probability, GateSolution, Step, DEFAULT_WEIGHT};
use crate::reference::verify_tables;
use crate::search::{search_pipeline, RefineTarget, SearchConfig};
use crate::units::{interaction_time, kappa, parse_frequency, PhysicalParams};

const ORACLE_TOL: f64 = 1e-10;
const DEFAULT_ORACLE_TAUS: [f64; 5] = [0.1, 6.5064, 37.73742, 219.918, 477.60911391];
const DEFAULT_UNIT_TAUS: [f64; 3] = [6.5064, 37.73742, 219.918];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn record(argv: &[String], config: Value, seed: Option<u64>, payload: Value, notes: &[(&str, &str)]) -> RunRecord {
    let mut metadata = BTreeMap::new();
    for (k, v) in notes {
        metadata.insert((*k).to_string(), (*v).to_string());
    }
    RunRecord {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: argv.to_vec(),
        config,
        seed,
        metadata,
        payload,
        timing: Timing { started_unix: 0.0, finished_unix: 0.0, wall_seconds: 0.0 },
    }
}

const OBJECTIVE_NOTE: &str = "E = |A1/A0 - 1|^2 + |A2/A0 + 1|^2 + w (1 - |A0|)^2; chosen penalty, w configurable";
const REFINE_NOTE: &str = "pattern-match: one free time solves A2 = -A1, two solve A1 = A0 and A2 = -A0";
const PC_NOTE: &str = "ideal coincidence probability P_c = cos^2(theta/2), null at theta = pi";

pub(super) fn parse_preps(text: &str) -> Result<Vec<AtomPrep>, CliError> {
    text.split(',').map(|s| s.parse::<AtomPrep>().map_err(CliError::from)).collect()
}

fn default_preps(n: usize) -> Result<Vec<AtomPrep>, CliError> {
    match n {
        1 | 2 => Ok(SearchConfig::for_atoms(n).preps),
        _ => Err(usage(format!("give --prep explicitly for {n} atoms"))),
    }
}

fn solution_csv(solutions: &[GateSolution], atoms: usize) -> String {
    let mut header: Vec<String> = (1..=atoms).map(|i| format!("tau_{i}")).collect();
    for h in ["A_0", "A_1", "A_2", "fidelity", "objective", "success_prob"] {
        header.push(h.to_string());
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header_refs);
    for s in solutions {
        let mut cells: Vec<String> = s.steps.iter().map(|st| fmt_f64(st.tau)).collect();
        // heralded sequences have real amplitudes
        cells.extend(s.a.iter().map(|c| fmt_f64(c.re)));
        cells.push(fmt_f64(s.fidelity));
        cells.push(fmt_f64(s.objective));
        cells.push(fmt_f64(s.success_prob_uniform));
        csv.row(&cells);
    }
    csv.finish()
}

pub(super) fn search(a: &SearchArgs, default_atoms: usize, argv: &[String]) -> Result<Outcome, CliError> {
    let atoms = a.atoms.map(usize::from).unwrap_or(default_atoms);
    let mut cfg = SearchConfig::for_atoms(atoms);
    if let Some(p) = &a.prep {
        cfg.preps = parse_preps(p)?;
    }
    macro_rules! set {
        ($field:ident, $arg:expr) => {
            if let Some(v) = $arg {
                cfg.$field = v;
            }
        };
    }
    set!(tau_max, a.tau_max);
    set!(grid_step, a.step);
    set!(ensemble_size, a.ensemble_size);
    set!(t0, a.t0);
    set!(alpha, a.alpha);
    set!(sweeps_per_t, a.sweeps);
    set!(sigma0, a.sigma0);
    set!(t_floor, a.t_floor);
    set!(top_k, a.top_k);
    set!(weight, a.weight);
    cfg.seed = a.seed;
    if let Some(r) = &a.refine {
        cfg.refine = match r.as_str() {
            "pattern-match" => RefineTarget::PatternMatch,
            "objective" => RefineTarget::Objective,
            other => return Err(usage(format!("unknown refine target {other:?}"))),
        };
    }
    cfg.validate()?;

    let ranked = search_pipeline(&cfg)?;
    let mut summary = format!(
        "{} solutions from {} candidates ({} atom{}, tau_max = {})\n",
        ranked.solutions.len(),
        ranked.candidates,
        atoms,
        if atoms == 1 { "" } else { "s" },
        cfg.tau_max
    );
    for (rank, s) in ranked.solutions.iter().enumerate() {
        let taus: Vec<String> = s.steps.iter().map(|st| format!("{:.8}", st.tau)).collect();
        let _ = writeln!(
            summary,
            "{:>3}  tau = ({})  A = ({:+.10}, {:+.10}, {:+.10})  F = {:.8}  E = {:.3e}  P = {:.6}",
            rank + 1,
            taus.join(", "),
            s.a[0].re,
            s.a[1].re,
            s.a[2].re,
            s.fidelity,
            s.objective,
            s.success_prob_uniform
        );
    }
    let csv = solution_csv(&ranked.solutions, atoms);
    let payload = serde_json::to_value(&ranked).expect("solutions serialize");
    let config = serde_json::to_value(&cfg).expect("config serializes");
    let record = record(
        argv,
        config,
        Some(cfg.seed),
        payload,
        &[("objective", OBJECTIVE_NOTE), ("refine", REFINE_NOTE), ("rng", crate::search::RNG_NAME)],
    );
    Ok(Outcome { record, summary, csv: Some(csv), exit: EXIT_OK })
}

fn parse_amps(text: &str) -> Result<Vec<Complex64>, CliError> {
    let amps: Vec<Complex64> = text
        .split(',')
        .map(|s| s.trim().parse::<Complex64>().map_err(|_| usage(format!("cannot parse amplitude {s:?}"))))
        .collect::<Result<_, _>>()?;
    if amps.len() != 3 {
        return Err(usage(format!("expected three amplitudes c0,c1,c2, got {}", amps.len())));
    }
    Ok(amps)
}

pub(super) fn eval(a: &EvalArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let preps = match &a.prep {
        Some(p) => parse_preps(p)?,
        None => default_preps(a.taus.len())?,
    };
    if preps.len() != a.taus.len() {
        return Err(usage(format!("{} interaction times but {} preparations", a.taus.len(), preps.len())));
    }
    let weight = a.weight.unwrap_or(DEFAULT_WEIGHT);
    let steps: Vec<Step> = a.taus.iter().zip(&preps).map(|(&t, &p)| Step::heralded(t, p)).collect();
    let sol = GateSolution::evaluate(steps, weight)?;
    let input = match &a.amps {
        Some(text) => FockVector::new(parse_amps(text)?)
            .and_then(|v| v.normalize())
            .map_err(|e| usage(format!("bad input amplitudes: {e}")))?,
        None => FockVector::uniform(2),
    };
    let p = success_probability(&sol.a, &input)?;

    let mut summary = String::new();
    for (n, c) in sol.a.iter().enumerate() {
        let _ = writeln!(summary, "A_{n} = {}", fmt_complex(*c));
    }
    let _ = writeln!(summary, "fidelity = {}", fmt_f64(sol.fidelity));
    let _ = writeln!(summary, "objective = {}", fmt_f64(sol.objective));
    let _ = writeln!(summary, "success probability = {}", fmt_f64(p));

    let mut csv = Csv::new(&["n", "A_re", "A_im"]);
    for (n, c) in sol.a.iter().enumerate() {
        csv.row(&[n.to_string(), fmt_f64(c.re), fmt_f64(c.im)]);
    }
    let payload = json!({
        "solution": sol,
        "input": input.amps(),
        "success_probability": p,
    });
    let config = json!({ "taus": a.taus, "preps": preps, "weight": weight });
    let record = record(argv, config, None, payload, &[("objective", OBJECTIVE_NOTE)]);
    Ok(Outcome { record, summary, csv: Some(csv.finish()), exit: EXIT_OK })
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        fmt_f64(c.re)
    } else {
        format!("{}{}{}i", fmt_f64(c.re), if c.im < 0.0 { "" } else { "+" }, fmt_f64(c.im))
    }
}

pub(super) fn verify(a: &VerifyArgs, argv: &[String]) -> Result<Outcome, CliError> {
    if let Some(t) = a.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage("tolerance must be non-negative"));
        }
    }
    let cells = verify_tables(a.tolerance, a.perturb)?;
    let mut summary = String::new();
    let mut csv = Csv::new(&["table", "row", "column", "expected", "computed", "tolerance", "pass"]);
    for c in &cells {
        let diff = c.computed - c.expected;
        let _ = writeln!(
            summary,
            "{} {:<11} row {} {}: expected {:+.10} computed {:+.10} diff {:+.2e} tol {:.0e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.table,
            c.row,
            c.column,
            c.expected,
            c.computed,
            diff,
            c.tolerance
        );
        csv.row(&[
            c.table.clone(),
            c.row.to_string(),
            c.column.clone(),
            fmt_f64(c.expected),
            fmt_f64(c.computed),
            fmt_f64(c.tolerance),
            c.pass.to_string(),
        ]);
    }
    let all = cells.iter().all(|c| c.pass);
    let rows = cells.len() / 3;
    let failed_rows = cells.chunks(3).filter(|r| r.iter().any(|c| !c.pass)).count();
    let _ = writeln!(summary, "{} of {rows} rows pass", rows - failed_rows);
    let payload = json!({ "cells": cells, "all_pass": all });
    let config = json!({ "tolerance": a.tolerance, "perturb": a.perturb });
    let record = record(argv, config, None, payload, &[]);
    Ok(Outcome { record, summary, csv: Some(csv.finish()), exit: if all { EXIT_OK } else { EXIT_FAILED } })
}

/// Parses "pi", "-pi/2", "3pi/4", "2*pi" or a plain number.
pub(super) fn parse_angle(text: &str) -> Result<f64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || usage(format!("cannot parse angle {text:?}"));
    if !s.contains("pi") {
        return s.parse().map_err(|_| bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(bad)?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / den)
}

fn curve_csv(points: &[CurvePoint]) -> String {
    let mut csv = Csv::new(&["x", "p_c", "branch_probability"]);
    for p in points {
        csv.row(&[fmt_f64(p.x), fmt_f64(p.p_c), fmt_f64(p.branch_probability)]);
    }
    csv.finish()
}

pub(super) fn calibrate(a: &CalibrateArgs, argv: &[String]) -> Result<Outcome, CliError> {
    if a.points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    let mut summary = String::new();
    let mut exit = EXIT_OK;
    let (mode, points, extra) = if let Some(theta) = &a.theta {
        let theta = parse_angle(theta)?;
        let p = CurvePoint { x: theta, p_c: ideal_chain(theta), branch_probability: 1.0 };
        let _ = writeln!(summary, "ideal phase {theta}: P_c = {}", fmt_f64(p.p_c));
        ("ideal-point", vec![p], json!({}))
    } else if !a.taus.is_empty() {
        let preps = match &a.prep {
            Some(p) => parse_preps(p)?,
            None => default_preps(a.taus.len())?,
        };
        if preps.len() != a.taus.len() {
            return Err(usage("one preparation per interaction time"));
        }
        let steps: Vec<Step> = a.taus.iter().zip(&preps).map(|(&t, &p)| Step::heralded(t, p)).collect();
        let k = DiagonalKraus::new(coeffs(&steps)?.to_vec(), 0)?;
        let (p_c, branch) = gate_chain(&k)?;
        let _ = writeln!(summary, "gate in arm: P_c = {}  branch probability = {}", fmt_f64(p_c), fmt_f64(branch));
        ("gate", vec![CurvePoint { x: a.taus[0], p_c, branch_probability: branch }], json!({ "taus": a.taus, "preps": preps }))
    } else if let Some(range) = &a.sweep_tau {
        let (lo, hi) = range
            .split_once(':')
            .and_then(|(l, h)| Some((l.parse::<f64>().ok()?, h.parse::<f64>().ok()?)))
            .ok_or_else(|| usage(format!("expected lo:hi, got {range:?}")))?;
        let prep = match &a.prep {
            Some(p) => *parse_preps(p)?.first().ok_or_else(|| usage("empty --prep"))?,
            None => AtomPrep::Ground,
        };
        let pts = tau_sweep(lo, hi, a.points, prep)?;
        let best = pts.iter().min_by(|x, y| x.p_c.total_cmp(&y.p_c));
        if let Some(b) = best {
            let _ = writeln!(summary, "{} points; deepest null P_c = {} at tau = {}", pts.len(), fmt_f64(b.p_c), fmt_f64(b.x));
        }
        ("tau-sweep", pts, json!({ "lo": lo, "hi": hi, "prep": prep }))
    } else {
        let pts = theta_sweep(a.points);
        let max_dev = pts.iter().map(|p| (p.p_c - (p.x / 2.0).cos().powi(2)).abs()).fold(0.0, f64::max);
        let at_pi = ideal_chain(PI);
        let ok = max_dev < 1e-12 && at_pi < 1e-12;
        if !ok {
            exit = EXIT_FAILED;
        }
        let _ = writeln!(
            summary,
            "{} phases: max |P_c - cos^2(theta/2)| = {:.3e}, P_c(pi) = {:.3e} [{}]",
            pts.len(),
            max_dev,
            at_pi,
            if ok { "PASS" } else { "FAIL" }
        );
        ("ideal-sweep", pts, json!({ "max_deviation": max_dev, "p_c_at_pi": at_pi }))
    };
    let csv = curve_csv(&points);
    let payload = json!({ "mode": mode, "points": points, "details": extra });
    let config = json!({ "mode": mode, "points": a.points });
    let record = record(argv, config, None, payload, &[("p_c", PC_NOTE)]);
    Ok(Outcome { record, summary, csv: Some(csv), exit })
}

pub(super) fn units(a: &UnitsArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let params = PhysicalParams::new(
        parse_frequency(&a.g, a.hz)?,
        parse_frequency(&a.omega, a.hz)?,
        parse_frequency(&a.delta, a.hz)?,
    )?;
    let k = kappa(&params)?;
    let taus: Vec<f64> = if a.taus.is_empty() { DEFAULT_UNIT_TAUS.to_vec() } else { a.taus.clone() };
    let mut summary = format!("kappa = {} rad/s (2pi x {} Hz)\n", fmt_f64(k), fmt_f64(k / (2.0 * PI)));
    let mut csv = Csv::new(&["tau", "seconds"]);
    let mut times = Vec::new();
    for &tau in &taus {
        let t = interaction_time(tau, &params)?;
        let _ = writeln!(summary, "tau = {tau}: t = {t:.4e} s");
        csv.row(&[fmt_f64(tau), fmt_f64(t)]);
        times.push(json!({ "tau": tau, "seconds": t }));
    }
    let warning = params.regime_warning();
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }
    let payload = json!({ "kappa": k, "times": times, "warning": warning });
    let config = serde_json::to_value(params).expect("params serialize");
    let record = record(argv, config, None, payload, &[("units", "angular frequencies in rad/s, times in s")]);
    Ok(Outcome { record, summary, csv: Some(csv.finish()), exit: EXIT_OK })
}

pub(super) fn oracle_check(a: &OracleArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let taus: Vec<f64> = if a.taus.is_empty() { DEFAULT_ORACLE_TAUS.to_vec() } else { a.taus.clone() };
    let mut summary = String::new();
    let mut csv = Csv::new(&["tau", "max_deviation"]);
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &tau in &taus {
        let d = oracle_deviation(tau, a.n_max)?;
        worst = worst.max(d);
        let _ = writeln!(summary, "tau = {tau}: max deviation {d:.3e}");
        csv.row(&[fmt_f64(tau), fmt_f64(d)]);
        rows.push(json!({ "tau": tau, "deviation": d }));
    }
    let pass = worst <= ORACLE_TOL;
    let _ = writeln!(summary, "n_max = {}: worst {worst:.3e} [{}]", a.n_max, if pass { "PASS" } else { "FAIL" });
    let payload = json!({ "rows": rows, "max_deviation": worst, "tolerance": ORACLE_TOL, "pass": pass });
    let config = json!({ "n_max": a.n_max, "taus": taus });
    let record = record(argv, config, None, payload, &[]);
    Ok(Outcome { record, summary, csv: Some(csv.finish()), exit: if pass { EXIT_OK } else { EXIT_FAILED } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn amplitude_triples() {
        let a = parse_amps("1, 0.5+0.5i, -0.2i").unwrap();
        assert_eq!(a[1], Complex64::new(0.5, 0.5));
        assert!(parse_amps("1,2").is_err());
        assert!(parse_amps("1,x,2").is_err());
    }
}
