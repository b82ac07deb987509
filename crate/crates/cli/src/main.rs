use std::io::{self, IsTerminal};

fn main() {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let code = betlogic_cli::run(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
        interactive,
    );
    std::process::exit(code);
}
