use std::io::Write;

fn main() {
    let (code, text) = gamma_cli::run(std::env::args_os().skip(1));
    let _ = writeln!(std::io::stdout(), "{text}");
    std::process::exit(code);
}
