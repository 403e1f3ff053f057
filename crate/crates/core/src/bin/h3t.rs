fn main() {
    let code = hypertournament::cli::run(std::env::args_os());
    std::process::exit(code);
}
