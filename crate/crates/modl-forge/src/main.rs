fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(modl_forge::cli::run(&args));
}
