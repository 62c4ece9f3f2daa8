fn main() {
    let code = patternlab::cli::run(std::env::args_os());
    std::process::exit(code);
}
