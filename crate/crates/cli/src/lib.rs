//! Command-line front end for quasi-exactly solvable models.

pub mod args;
pub mod commands;
pub mod io;
pub mod presets;

use std::ffi::OsString;
use std::fs;

use clap::Parser;

use args::{Cli, Command};
use commands::{Report, EXIT_INPUT, EXIT_OK};

/// What a run prints and returns.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn error(msg: String) -> Self {
        Outcome { stdout: String::new(), stderr: msg, code: EXIT_INPUT }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<(Report, Option<&std::path::Path>)> {
    Ok(match &cli.command {
        Command::Classify(a) => (commands::classify(a)?, a.output.out.as_deref()),
        Command::Build(a) => (commands::build(a)?, a.output.out.as_deref()),
        Command::Solve(a) => (commands::solve(a)?, a.model.output.out.as_deref()),
        Command::Verify(a) => (commands::verify(a)?, a.model.output.out.as_deref()),
        Command::States(a) => (commands::states(a)?, a.solve.model.output.out.as_deref()),
        Command::Extended(a) => (commands::extended(a)?, a.model.output.out.as_deref()),
        Command::PlotData(a) => (commands::plot_data(a)?, a.solve.model.output.out.as_deref()),
        Command::Presets(a) => (commands::list_presets(a)?, a.out.as_deref()),
    })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::error(text)
            } else {
                Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    match dispatch(&cli) {
        Ok((report, Some(path))) => match fs::write(path, &report.text) {
            Ok(()) => Outcome { stdout: String::new(), stderr: String::new(), code: report.code },
            Err(e) => Outcome::error(format!("error: writing {}: {e}\n", path.display())),
        },
        Ok((report, None)) => Outcome { stdout: report.text, stderr: String::new(), code: report.code },
        Err(e) => Outcome::error(format!("error: {e:#}\n")),
    }
}
