use std::io;
use std::process::ExitCode;

use clap::Parser;

use tilecoh_cli::app::{run, style_for_stdout, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = style_for_stdout();
    let code = run(
        cli,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
        style,
    );
    ExitCode::from(code as u8)
}
