use std::io;
use std::process;

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = bell_symmetry::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    process::exit(code);
}
