fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(ger_kit::cli::run(&argv));
}
