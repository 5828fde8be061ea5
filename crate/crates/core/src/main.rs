fn main() {
    let (code, out) = wblow::cli::run(std::env::args_os());
    if code == wblow::cli::EXIT_USAGE {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
