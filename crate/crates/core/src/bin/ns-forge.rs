fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(ns_forge::cli::run(args));
}
