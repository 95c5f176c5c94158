use clap::Parser;
use deligne_lab::cli::{run_file, run_named_suite, RunOptions, EXIT_INVALID};
use std::path::PathBuf;
use std::process::ExitCode;

/// Metrized Deligne pairings on families of plane curves.
///
/// Runs one task from a JSON config (or a named suite), writes CSV and
/// JSON into the output directory and prints a short summary.
#[derive(Parser, Debug)]
#[command(name = "dlab", version, about)]
struct Args {
    /// task config (JSON)
    #[arg(long, value_name = "PATH", conflicts_with = "suite")]
    config: Option<PathBuf>,
    /// output directory (overrides the config's `output.dir`)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// worker threads
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// run a named suite: `acceptance` or `quick`
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("error: invalid input `--threads`: must be at least 1");
            return ExitCode::from(EXIT_INVALID as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: invalid input `--threads`: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    }
    let opts = RunOptions { out_dir: args.out };
    let outcome = match (&args.config, &args.suite) {
        (Some(path), None) => run_file(path, &opts),
        (None, Some(name)) => run_named_suite(name, &opts),
        _ => {
            eprintln!("error: invalid input `--config`: give --config <PATH> or --suite <NAME>");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    if outcome.exit_code == 0 || outcome.exit_code == 4 {
        print!("{}", outcome.summary);
        for f in &outcome.files {
            println!("wrote {}", f.display());
        }
    } else {
        eprintln!("{}", outcome.summary.trim_end());
    }
    ExitCode::from(outcome.exit_code as u8)
}
