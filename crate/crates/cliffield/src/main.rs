use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cliffield::presets::{list_presets, preset};
use cliffield::{run_scenario, RunError, ScenarioConfig, EXIT_CONFIG, REPORT_FILE};

/// Environment variable overriding the output directory of the config.
const OUT_ENV: &str = "CLIFFIELD_OUT";

#[derive(Parser, Debug)]
#[command(name = "cliffield", version, about = "Run Hamiltonian-constraint field-theory scenarios")]
struct Args {
    /// Scenario TOML file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario name (see --list-presets).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory; beats CLIFFIELD_OUT and the config's output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    list_presets: bool,
    /// Print every check and artifact.
    #[arg(long, short)]
    verbose: bool,
}

fn load(args: &Args) -> Result<ScenarioConfig, RunError> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => ScenarioConfig::from_path(path)?,
        (None, Some(name)) => preset(name).ok_or_else(|| RunError::Config(format!("unknown preset `{name}`")))?,
        (None, None) => return Err(RunError::Config("one of --config or --preset is required".into())),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_dir(args: &Args, cfg: &ScenarioConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("cliffield-out").join(&cfg.name))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_presets {
        print!("{}", list_presets());
        return ExitCode::SUCCESS;
    }
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cliffield: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let dir = out_dir(&args, &cfg);
    match run_scenario(&cfg, &dir) {
        Ok(report) => {
            if args.verbose {
                print!("{}", report.summary());
                for a in &report.artifacts {
                    println!("  artifact {} ({} bytes)", dir.join(&a.path).display(), a.bytes);
                }
                println!("  report {}", dir.join(REPORT_FILE).display());
                println!("  wall clock {:.3} s", report.wall_clock_seconds);
            } else {
                let failed = report.checks.iter().filter(|c| !c.pass).count();
                println!(
                    "{}: {:?} ({} checks, {failed} failed)",
                    cfg.name,
                    report.status,
                    report.checks.len()
                );
                if let Some(e) = &report.error {
                    println!("  error: {e}");
                }
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("cliffield: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
