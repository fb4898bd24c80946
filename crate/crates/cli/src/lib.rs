pub mod atlas;
pub mod cli;
pub mod commands;
pub mod io;
pub mod report;
pub mod verify;

use clap::Parser;

use cli::{Cli, Cmd};
use commands::CliError;

/// Runs one invocation and returns the process exit code: 0 on success,
/// 1 when a check fails, 2 on usage or domain errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let c = &cli.common;
    let result = match &cli.cmd {
        Cmd::Witt(w) => commands::witt(c, w),
        Cmd::Lattice(l) => commands::lattice(c, l),
        Cmd::Ore(o) => commands::ore(c, o),
        Cmd::Plin(p) => commands::plin(c, p),
        Cmd::Rla(r) => commands::rla(c, r),
        Cmd::Verify { which } => commands::run_verify(c, which),
        Cmd::Atlas => atlas::atlas(c),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let kind = if matches!(e, CliError::Usage(_)) { "usage" } else { "error" };
            eprintln!("{kind}: {e}");
            return 2;
        }
    };
    if let Some(path) = &c.out {
        if let Err(e) = std::fs::write(path, report.machine_text()) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    }
    if c.json {
        print!("{}", report.machine_text());
    } else {
        print!("{}", report.human());
    }
    if report.passed() {
        0
    } else {
        1
    }
}
