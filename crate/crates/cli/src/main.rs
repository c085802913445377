use std::io::{stderr, stdout};

fn main() {
    let code = normtrace_cli::execute(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
