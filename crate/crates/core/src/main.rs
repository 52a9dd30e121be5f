fn main() {
    let code = shuffled_dp::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
