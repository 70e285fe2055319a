use std::process::ExitCode;

use clap::Parser;
use qttdft_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut echo = String::from("qttdft");
    for a in &args[1..] {
        echo.push(' ');
        echo.push_str(a);
    }
    let mut stdout = std::io::stdout().lock();
    match run(cli, &echo, &mut stdout) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
