//! `chaoslab` command-line front end.
//!
//! Every subcommand takes `--key value` flags and an optional `--config` file
//! of `key = value` lines using the same key names (flags win). Artifacts go
//! to `--out` (default `out/`); a JSON summary is written to
//! `summary.json` and echoed to stdout.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

use commands::{write_summary, Ctx, Subcommand, SUBCOMMANDS};
use settings::{canonical, CliError, CliResult, Settings};

const PARAM_KEYS: [&str; 8] = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"];

fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

fn value_arg(key: &'static str, help: &'static str) -> Arg {
    Arg::new(key)
        .long(flag_name(key))
        .value_name("VALUE")
        .help(help)
        .allow_hyphen_values(true)
        .action(ArgAction::Set)
}

fn subcommand(sc: &Subcommand) -> Command {
    let mut cmd = Command::new(sc.name)
        .about(sc.about)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value settings file"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .value_name("DIR")
                .default_value("out")
                .help("output directory"),
        )
        .arg(
            Arg::new("threads")
                .long("threads")
                .value_name("N")
                .env("CHAOSLAB_THREADS")
                .value_parser(clap::value_parser!(usize))
                .help("worker threads for parallel sections"),
        )
        .arg(
            Arg::new("plot")
                .long("plot")
                .action(ArgAction::SetTrue)
                .help("also write a gnuplot script"),
        );
    for key in PARAM_KEYS {
        cmd = cmd.arg(value_arg(key, "system coefficient override"));
    }
    for (key, help) in sc.keys {
        cmd = cmd.arg(value_arg(key, help));
    }
    cmd
}

fn cli() -> Command {
    let mut cmd = Command::new("chaoslab")
        .about("Simulation and analysis of a multistable quadratic chaotic system")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for sc in SUBCOMMANDS {
        cmd = cmd.subcommand(subcommand(sc));
    }
    cmd
}

fn run(sc: &Subcommand, m: &ArgMatches) -> CliResult<()> {
    if let Some(&n) = m.get_one::<usize>("threads") {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let allowed: Vec<&str> = PARAM_KEYS
        .iter()
        .copied()
        .chain(sc.keys.iter().map(|(k, _)| *k))
        .collect();
    let flags: Vec<(String, String)> = allowed
        .iter()
        .filter_map(|k| m.get_one::<String>(k).map(|v| (canonical(k), v.clone())))
        .collect();
    let config = m.get_one::<String>("config").map(PathBuf::from);
    let settings = Settings::build(&allowed, config.as_deref(), flags)?;

    let out = PathBuf::from(m.get_one::<String>("out").expect("has default"));
    std::fs::create_dir_all(&out)?;
    let ctx = Ctx {
        out: &out,
        plot: m.get_flag("plot"),
    };
    let summary = (sc.run)(&settings, &ctx)?;
    write_summary(&ctx, &summary)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).map_err(std::io::Error::other)?
    );
    Ok(())
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let sc = SUBCOMMANDS
        .iter()
        .find(|s| s.name == name)
        .expect("registered subcommand");
    match run(sc, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chaoslab {name}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_table_is_consistent() {
        cli().debug_assert();
    }
}
