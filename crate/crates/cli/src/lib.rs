//! Command dispatch for the `periflow` binary.
//!
//! Verbs:
//!
//! - `run <config|preset>` — integrate a scenario, write CSV/SVG/summary
//! - `verify-transforms` — the Chebyshev transform property suite
//! - `verify-operator <config|preset>` — oracle/scheme checks and
//!   self-convergence across a resolution ladder
//! - `sweep <config|preset>` — vary the horizon or the kernel family
//! - `presets list` / `presets show <name>`
//!
//! Exit codes: 0 success, 2 config/usage error, 3 I/O error, 4 instability
//! (blow-up or clamp-counter growth), 5 verification failure.

use periflow::config::{
    load_config, parse_config, preset, preset_names, serialize_config, SimConfig,
};
use periflow::output::{to_csv, to_summary, to_svg, TrajectoryRecord};
use periflow::scenario::run_scenario;
use periflow::verify::{verify_operator, verify_transforms, TransformSuiteOptions};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INSTABILITY: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

/// Clamp-counter level past which a completed run is reported as unstable.
pub const CLAMP_INSTABILITY_THRESHOLD: u64 = 1000;

/// Environment variable naming the output root directory.
pub const OUTPUT_ENV: &str = "PERIFLOW_OUT";

const USAGE: &str = "\
periflow - nonlocal (peridynamic) Richards' equation simulator

USAGE:
    periflow run <config-file|preset> [--snapshots K] [--out DIR]
                 [--kernel FAMILY] [--delta D] [--n-modes N]
    periflow verify-transforms [--max-degree N]
    periflow verify-operator <config-file|preset> [--n-list A,B,C]
    periflow sweep <config-file|preset> (--deltas A,B,C | --families A,B)
                   [--out DIR]
    periflow presets list
    periflow presets show <name>

Output root: --out, else $PERIFLOW_OUT, else ./out
";

pub fn main_with_args(args: &[String]) -> i32 {
    let mut it = args.iter();
    match it.next().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("verify-transforms") => cmd_verify_transforms(&args[1..]),
        Some("verify-operator") => cmd_verify_operator(&args[1..]),
        Some("sweep") => cmd_sweep(&args[1..]),
        Some("presets") => cmd_presets(&args[1..]),
        Some("help") | Some("--help") | Some("-h") | None => {
            println!("{USAGE}");
            if args.is_empty() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            }
        }
        Some(other) => {
            eprintln!("unknown command '{other}'\n\n{USAGE}");
            EXIT_CONFIG
        }
    }
}

struct Flags {
    positional: Vec<String>,
    options: Vec<(String, String)>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut positional = Vec::new();
    let mut options = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--") {
            let value = it
                .next()
                .ok_or_else(|| format!("flag --{name} needs a value"))?;
            options.push((name.to_string(), value.clone()));
        } else {
            positional.push(arg.clone());
        }
    }
    Ok(Flags {
        positional,
        options,
    })
}

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.options
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    fn unknown_flags(&self, allowed: &[&str]) -> Option<String> {
        self.options
            .iter()
            .find(|(k, _)| !allowed.contains(&k.as_str()))
            .map(|(k, _)| k.clone())
    }
}

/// A preset name or a path to a config file.
fn resolve_config(spec: &str) -> Result<SimConfig, String> {
    if preset_names().contains(&spec) {
        return preset(spec).map_err(|e| e.to_string());
    }
    let path = Path::new(spec);
    if path.exists() {
        return load_config(path).map_err(|e| format!("{spec}: {e}"));
    }
    Err(format!(
        "'{spec}' is neither a preset ({}) nor an existing config file",
        preset_names().join(", ")
    ))
}

fn output_root(flag: Option<&str>) -> PathBuf {
    if let Some(dir) = flag {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var(OUTPUT_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("out")
}

fn apply_overrides(config: &mut SimConfig, flags: &Flags) -> Result<(), String> {
    if let Some(k) = flags.get("snapshots") {
        config.snapshots = k.parse().map_err(|_| format!("bad --snapshots '{k}'"))?;
    }
    if let Some(f) = flags.get("kernel") {
        config.kernel_family = f.parse().map_err(|e| format!("{e}"))?;
    }
    if let Some(d) = flags.get("delta") {
        config.delta = d.parse().map_err(|_| format!("bad --delta '{d}'"))?;
    }
    if let Some(n) = flags.get("n-modes") {
        config.n_modes = n.parse().map_err(|_| format!("bad --n-modes '{n}'"))?;
    }
    Ok(())
}

/// Write outputs for one finished scenario; returns the directory used.
fn write_outputs(
    record: &TrajectoryRecord,
    config: &SimConfig,
    root: &Path,
) -> std::io::Result<PathBuf> {
    let dir = match &config.outputs.dir {
        Some(d) => PathBuf::from(d),
        None => root.join(&config.label),
    };
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("config.txt"), &record.config_echo)?;
    if config.outputs.csv {
        std::fs::write(dir.join("profile.csv"), to_csv(record))?;
    }
    if config.outputs.svg {
        std::fs::write(dir.join("profile.svg"), to_svg(record))?;
    }
    if config.outputs.summary {
        std::fs::write(dir.join("summary.json"), to_summary(record))?;
    }
    Ok(dir)
}

fn run_one(config: &SimConfig, root: &Path) -> i32 {
    let outcome = match run_scenario(config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let d = &outcome.record.diagnostics;
    match write_outputs(&outcome.record, config, root) {
        Ok(dir) => println!("wrote {}", dir.display()),
        Err(e) => {
            eprintln!("i/o error: {e}");
            return EXIT_IO;
        }
    }
    println!(
        "{}: steps {} snapshots {} clamps {} theta [{:.6}, {:.6}]",
        config.label,
        d.steps,
        outcome.record.snapshots.len(),
        d.clamp_count,
        d.theta_min,
        d.theta_max
    );
    if let Some(failure) = &outcome.failure {
        eprintln!("instability: {failure} (partial outputs flagged in summary)");
        return EXIT_INSTABILITY;
    }
    if d.clamp_count >= CLAMP_INSTABILITY_THRESHOLD {
        eprintln!(
            "instability: clamp counter reached {} (threshold {})",
            d.clamp_count, CLAMP_INSTABILITY_THRESHOLD
        );
        return EXIT_INSTABILITY;
    }
    EXIT_OK
}

fn cmd_run(args: &[String]) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(f) = flags.unknown_flags(&["snapshots", "out", "kernel", "delta", "n-modes"]) {
        eprintln!("error: unknown flag --{f}");
        return EXIT_CONFIG;
    }
    let Some(spec) = flags.positional.first() else {
        eprintln!("error: run needs a config file or preset name\n\n{USAGE}");
        return EXIT_CONFIG;
    };
    let mut config = match resolve_config(spec) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = apply_overrides(&mut config, &flags) {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    run_one(&config, &output_root(flags.get("out")))
}

fn cmd_verify_transforms(args: &[String]) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(f) = flags.unknown_flags(&["max-degree"]) {
        eprintln!("error: unknown flag --{f}");
        return EXIT_CONFIG;
    }
    let max_degree = match flags.get("max-degree") {
        None => 256,
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n >= 2 => n,
            _ => {
                eprintln!("error: bad --max-degree '{v}'");
                return EXIT_CONFIG;
            }
        },
    };
    let report = verify_transforms(TransformSuiteOptions {
        max_degree,
        inject_fault: false,
    });
    print!("{}", report.render());
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_verify_operator(args: &[String]) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(f) = flags.unknown_flags(&["n-list"]) {
        eprintln!("error: unknown flag --{f}");
        return EXIT_CONFIG;
    }
    let Some(spec) = flags.positional.first() else {
        eprintln!("error: verify-operator needs a config file or preset name");
        return EXIT_CONFIG;
    };
    let config = match resolve_config(spec) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let n_list: Vec<usize> = match flags.get("n-list") {
        None => vec![32, 64, 128],
        Some(v) => {
            let parsed: Result<Vec<usize>, _> =
                v.split(',').map(|s| s.trim().parse::<usize>()).collect();
            match parsed {
                Ok(list) if list.windows(2).all(|w| w[0] < w[1]) && !list.is_empty() => list,
                _ => {
                    eprintln!("error: --n-list expects ascending integers, got '{v}'");
                    return EXIT_CONFIG;
                }
            }
        }
    };
    let report = verify_operator(&config, &n_list);
    print!("{}", report.render());
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_sweep(args: &[String]) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(f) = flags.unknown_flags(&["deltas", "families", "out"]) {
        eprintln!("error: unknown flag --{f}");
        return EXIT_CONFIG;
    }
    let Some(spec) = flags.positional.first() else {
        eprintln!("error: sweep needs a config file or preset name");
        return EXIT_CONFIG;
    };
    let base = match resolve_config(spec) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let mut variants: Vec<SimConfig> = Vec::new();
    match (flags.get("deltas"), flags.get("families")) {
        (Some(list), None) => {
            for item in list.split(',') {
                let delta: f64 = match item.trim().parse() {
                    Ok(d) => d,
                    Err(_) => {
                        eprintln!("error: bad delta '{item}'");
                        return EXIT_CONFIG;
                    }
                };
                let mut c = base.clone();
                c.delta = delta;
                c.label = format!("{}-delta-{}", base.label, item.trim());
                c.outputs.dir = None;
                variants.push(c);
            }
        }
        (None, Some(list)) => {
            for item in list.split(',') {
                let family = match item.trim().parse() {
                    Ok(f) => f,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_CONFIG;
                    }
                };
                let mut c = base.clone();
                c.kernel_family = family;
                c.label = format!("{}-{}", base.label, item.trim());
                c.outputs.dir = None;
                variants.push(c);
            }
        }
        _ => {
            eprintln!("error: sweep needs exactly one of --deltas or --families");
            return EXIT_CONFIG;
        }
    }
    let root = output_root(flags.get("out"));
    let mut worst = EXIT_OK;
    for config in &variants {
        let code = run_one(config, &root);
        // keep going; report the most severe outcome
        worst = worst.max(code);
    }
    worst
}

fn cmd_presets(args: &[String]) -> i32 {
    match args.first().map(String::as_str) {
        Some("list") => {
            for name in preset_names() {
                println!("{name}");
            }
            EXIT_OK
        }
        Some("show") => match args.get(1) {
            Some(name) => match preset(name) {
                Ok(c) => {
                    print!("{}", serialize_config(&c));
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_CONFIG
                }
            },
            None => {
                eprintln!("error: presets show needs a name");
                EXIT_CONFIG
            }
        },
        _ => {
            eprintln!("error: presets subcommands are 'list' and 'show <name>'");
            EXIT_CONFIG
        }
    }
}

/// Round-trip helper used by tests: parse text, reserialize.
pub fn reserialize(text: &str) -> Result<String, String> {
    parse_config(text)
        .map(|c| serialize_config(&c))
        .map_err(|e| e.to_string())
}
