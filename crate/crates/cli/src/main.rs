use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cogrowth::counting::{ball_counts, delta_estimate, growth_estimate, ln_big, loop_counts};
use cogrowth::geometry::{
    boundary_count, core, default_candidates, euler_boundary_check, injectivity_radius, isoperimetric_lower_planar,
    isoperimetric_upper, Core,
};
use cogrowth::lab::{emit_report, emit_sweep, theorem_trend_sweep, verify, Format, MeasureOptions, SweepOptions};
use cogrowth::planar::check_quotient_planarity;
use cogrowth::schreier::{ball, read_dump, todd_coxeter, truncated_quotient, write_dump, Preset, TruncateOptions};
use cogrowth::spectral::{power_iteration_rho, rayleigh_estimate, return_probability_estimate};
use cogrowth::words::{parse_relators, Rank};
use cogrowth::{Exec, SchreierGraph};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cogrowth", version, about = "Quotients of the free-group Cayley tree and their cogrowth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a quotient graph and write it in dump format.
    Build(BuildArgs),
    /// Ball or loop counts at the basepoint.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: CountMode,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
    },
    /// Spectral radius bounds.
    Spectral {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "power")]
        method: SpectralMethod,
        #[arg(long, default_value_t = 100_000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Cores, girth, isoperimetric bounds and the Euler boundary identity.
    Geometry {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        op: GeometryOp,
        /// Ball radius; defaults to the certified radius.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Planarity of a ball around the basepoint.
    Planar {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Experiments: sweeps over the power family and invariant checks.
    Lab {
        #[command(subcommand)]
        command: LabCommand,
    },
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// File of relators, whitespace separated; `-` reads stdin.
    #[arg(long, conflicts_with = "preset")]
    relators: Option<PathBuf>,
    /// `powers K`, `commutator`, `surface G` or `mod2`.
    #[arg(long)]
    preset: Option<String>,
    /// Window radius; without it the quotient is enumerated exactly.
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Coset cap for exact enumeration, row cap for windows.
    #[arg(long)]
    max_cosets: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LabCommand {
    Sweep {
        #[arg(long, default_value = "powers")]
        preset: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Range `A..B` (inclusive) or a comma-separated list.
        #[arg(long)]
        k: String,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMode {
    Balls,
    Loops,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectralMethod {
    Power,
    Return,
    Rayleigh,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryOp {
    Core,
    Girth,
    IsoUpper,
    IsoLower,
    EulerCheck,
}

fn load(path: &Path) -> Result<SchreierGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(read_dump(&text)?)
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn default_radius(g: &SchreierGraph) -> usize {
    g.certified_radius()
        .unwrap_or_else(|| g.distances().into_iter().flatten().max().unwrap_or(0))
}

fn parse_ks(s: &str) -> Result<Vec<u32>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse()?;
        let b: u32 = b.trim_start_matches('=').trim().parse()?;
        if a > b {
            bail!("empty range {s}");
        }
        Ok((a..=b).collect())
    } else {
        s.split(',').map(|x| Ok(x.trim().parse()?)).collect()
    }
}

fn build(a: BuildArgs) -> Result<()> {
    let rank = Rank::new(a.rank)?;
    let rels = match (&a.relators, &a.preset) {
        (Some(path), None) => parse_relators(rank, &read_input(path)?)?,
        (None, Some(p)) => p.parse::<Preset>()?.relators(rank)?,
        _ => bail!("give exactly one of --relators or --preset"),
    };
    let g = match a.radius {
        Some(r) => {
            let mut opts = TruncateOptions::new(r, a.depth);
            if let Some(m) = a.max_cosets {
                opts = opts.with_max_vertices(m);
            }
            let (g, diag) = truncated_quotient(rank, &rels, opts)?;
            eprintln!("{}", serde_json::to_string(&diag)?);
            g
        }
        None => todd_coxeter(rank, &rels, a.max_cosets.unwrap_or(1_000_000))?,
    };
    emit(a.out.as_deref(), write_dump(&g).as_bytes())
}

fn count(input: &Path, mode: CountMode, radius: usize, format: DataFormat) -> Result<()> {
    let g = load(input)?;
    let rows: Vec<(usize, String, Option<f64>)> = match mode {
        CountMode::Balls => {
            let b = ball_counts(&g, radius)?;
            let roots = growth_estimate(&b);
            b.counts
                .iter()
                .enumerate()
                .map(|(r, c)| (r, c.to_string(), roots.iter().find(|x| x.0 == r).map(|x| x.1)))
                .collect()
        }
        CountMode::Loops => {
            let l = loop_counts(&g, radius)?;
            l.counts
                .iter()
                .enumerate()
                .map(|(r, c)| (r, c.to_string(), (r > 0).then(|| ln_big(c) / r as f64)))
                .collect()
        }
    };
    match format {
        DataFormat::Csv => {
            println!("r,count,root_or_rate");
            for (r, c, x) in rows {
                println!("{r},{c},{}", x.map(|v| v.to_string()).unwrap_or_default());
            }
            Ok(())
        }
        DataFormat::Json => {
            let mut v = json!({
                "mode": match mode { CountMode::Balls => "balls", CountMode::Loops => "loops" },
                "rows": rows.iter().map(|(r, c, x)| json!({"r": r, "count": c, "root_or_rate": x})).collect::<Vec<_>>(),
            });
            if let CountMode::Loops = mode {
                let d = delta_estimate(&loop_counts(&g, radius)?, g.rank());
                v["delta_estimate"] = json!(d.estimate);
                v["eta"] = json!(d.eta);
            }
            print_json(&v)
        }
    }
}

fn geometry(input: &Path, op: GeometryOp, radius: Option<usize>) -> Result<()> {
    let g = load(input)?;
    let r = radius.unwrap_or_else(|| default_radius(&g));
    let v = match op {
        GeometryOp::Core => json!({ "radius": r, "core": core(&ball(&g, r)?)? }),
        GeometryOp::Girth => json!(injectivity_radius(&g)),
        GeometryOp::IsoUpper => json!(isoperimetric_upper(&g, &default_candidates(&g))?),
        GeometryOp::IsoLower => json!(isoperimetric_lower_planar(&g, r, &injectivity_radius(&g))?),
        GeometryOp::EulerCheck => {
            // interior ball, so every boundary edge is certified
            let r = radius.unwrap_or_else(|| default_radius(&g).saturating_sub(1));
            let b = ball(&g, r)?;
            let boundary = boundary_count(&b)?;
            match core(&b)? {
                Core::Trivial => json!({ "radius": r, "ball_boundary": boundary, "core": "trivial" }),
                Core::Graph(c) => json!({
                    "radius": r,
                    "ball_boundary": boundary,
                    "core_vertices": c.vertex_count(),
                    "core_boundary": c.boundary,
                    "chi": c.chi,
                    "holds": euler_boundary_check(&c, g.rank()),
                }),
            }
        }
    };
    print_json(&v)
}

fn lab(cmd: LabCommand) -> Result<ExitCode> {
    match cmd {
        LabCommand::Sweep {
            preset,
            n,
            k,
            radius,
            depth,
            out,
            format,
        } => {
            if preset != "powers" {
                bail!("sweeps are defined for the powers preset only");
            }
            let format: Format = format.parse()?;
            let mut opts = SweepOptions::new(Rank::new(n)?, parse_ks(&k)?);
            opts.radius = radius;
            opts.depth = depth;
            let reports = theorem_trend_sweep(Exec::default(), &opts)?;
            let ext = match format {
                Format::Json => "json",
                Format::Csv => "csv",
                Format::Text => "txt",
            };
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    for r in &reports {
                        fs::write(dir.join(format!("{}.{ext}", r.id)), emit_report(r, format)?)?;
                    }
                    fs::write(dir.join(format!("summary.{ext}")), emit_sweep(&reports, format)?)?;
                    eprint!("{}", String::from_utf8(emit_sweep(&reports, Format::Text)?)?);
                }
                None => emit(None, &emit_sweep(&reports, format)?)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        LabCommand::Verify { input, format } => {
            let format: Format = format.parse()?;
            let g = load(&input)?;
            let outcome = verify(&g, &MeasureOptions::default());
            match &outcome {
                cogrowth::lab::VerifyOutcome::Passed(r) => emit(None, &emit_report(r, format)?)?,
                cogrowth::lab::VerifyOutcome::Violation(m) => eprintln!("invariant violated: {m}"),
                cogrowth::lab::VerifyOutcome::ResourceCap(m) => eprintln!("resource cap: {m}"),
            }
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build(a) => build(a)?,
        Command::Count {
            input,
            mode,
            radius,
            format,
        } => count(&input, mode, radius, format)?,
        Command::Spectral {
            input,
            method,
            iters,
            tol,
        } => {
            let g = load(&input)?;
            let e = match method {
                SpectralMethod::Power => power_iteration_rho(&g, iters, tol)?,
                SpectralMethod::Return => return_probability_estimate(&g, iters)?,
                SpectralMethod::Rayleigh => rayleigh_estimate(&g)?,
            };
            print_json(&json!(e))?
        }
        Command::Geometry { input, op, radius } => geometry(&input, op, radius)?,
        Command::Planar { input, radius } => {
            let g = load(&input)?;
            let r = radius.unwrap_or_else(|| default_radius(&g));
            print_json(&json!(check_quotient_planarity(&g, r)?))?
        }
        Command::Lab { command } => return lab(command),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let capped = e.downcast_ref::<cogrowth::Error>().is_some_and(|e| {
                matches!(e, cogrowth::Error::ResourceCap { .. } | cogrowth::Error::Overflow { .. })
            });
            ExitCode::from(if capped { 2 } else { 1 })
        }
    }
}
