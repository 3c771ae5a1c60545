fn main() {
    let (code, out) = toricloci::cli::run(std::env::args_os());
    if code == toricloci::cli::EXIT_INPUT {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
