fn main() {
    let (code, out) = continua::cli::run_args(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
