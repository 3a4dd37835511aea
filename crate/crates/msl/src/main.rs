//! `msl`: build and check moduli spaces of rational tropical stable maps
//! to a smooth tropical curve.
//!
//! Exit codes: 0 success (balanced / smooth), 1 domain failure (not
//! smooth, unbalanced, unrealizable input), 2 input error (parse,
//! schema), 3 resource bound exceeded.

use clap::{Args, Parser, Subcommand};
use msl::complex::{build_complex, check_global_balancing};
use msl::hurwitz::{hurwitz_number, HurwitzProblem};
use msl::io;
use msl::localfan;
use msl::stablemap::EnumerateOptions;
use msl::target::TargetCurve;
use num_traits::ToPrimitive;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_DOMAIN: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(
    name = "msl",
    version,
    about = "moduli of tropical stable maps to a curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BuildOpts {
    /// job configuration file (JSON, schema msl-fan/1)
    #[arg(long)]
    config: PathBuf,
    /// reject covering degrees above this bound
    #[arg(long)]
    max_d: Option<u64>,
    /// abort once this many cells have been enumerated
    #[arg(long)]
    max_cells: Option<usize>,
    /// log per-cell details to standard error
    #[arg(long)]
    verbose: bool,
    /// write the JSON result here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a target-curve file describes a smooth tropical curve
    ValidateTarget { path: PathBuf },
    /// Print the marked cover count for a degree and ramification profiles
    Hurwitz {
        degree: usize,
        /// profiles as bracketed part lists, e.g. "[2],[1,1],[2]"
        profiles: String,
    },
    /// Print the one-dimensional local fan of a vertex star
    LocalFan {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the moduli complex and compute cell weights
    Build(BuildOpts),
    /// Verify the balancing condition of a built or configured complex
    CheckBalance {
        /// a complex JSON file produced by `build` (weights may be edited)
        path: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_file(path: &PathBuf) -> Result<String, (u8, String)> {
    std::fs::read_to_string(path)
        .map_err(|e| (EXIT_INPUT, format!("cannot read {}: {}", path.display(), e)))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), (u8, String)> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            (
                EXIT_INPUT,
                format!("cannot write {}: {}", path.display(), e),
            )
        }),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn classify(err: String) -> (u8, String) {
    if err.starts_with("bound exceeded") {
        (EXIT_BOUND, err)
    } else {
        (EXIT_DOMAIN, err)
    }
}

fn load_config(
    path: &PathBuf,
) -> Result<(TargetCurve, msl::stablemap::DegreeSpec, io::ConfigDto), (u8, String)> {
    let text = read_file(path)?;
    let cfg: io::ConfigDto = serde_json::from_str(&text)
        .map_err(|e| (EXIT_INPUT, format!("config parse error: {}", e)))?;
    if cfg.schema != io::SCHEMA {
        return Err((EXIT_INPUT, format!("unsupported schema {:?}", cfg.schema)));
    }
    let target_dto = match (&cfg.target, &cfg.target_file) {
        (Some(t), _) => t.clone(),
        (None, Some(f)) => {
            let base = path.parent().map(PathBuf::from).unwrap_or_default();
            let tpath = base.join(f);
            let ttext = read_file(&tpath)?;
            serde_json::from_str(&ttext)
                .map_err(|e| (EXIT_INPUT, format!("target parse error: {}", e)))?
        }
        (None, None) => {
            return Err((
                EXIT_INPUT,
                "config has neither target nor target_file".into(),
            ))
        }
    };
    let l = target_dto.to_curve().map_err(|e| (EXIT_INPUT, e))?;
    let violations = l.validate_smooth();
    if !violations.is_empty() {
        return Err((
            EXIT_DOMAIN,
            format!("target is not smooth: {}", violations.join("; ")),
        ));
    }
    let deg = cfg.degree.to_spec();
    Ok((l, deg, cfg))
}

fn parse_profiles(s: &str) -> Result<Vec<Vec<u64>>, String> {
    let mut out = Vec::new();
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let Some(stripped) = rest.strip_prefix('[') else {
            return Err(format!("expected '[' at {:?}", rest));
        };
        let Some((body, tail)) = stripped.split_once(']') else {
            return Err("unterminated '['".into());
        };
        let parts: Vec<u64> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|p| {
                    p.parse::<u64>()
                        .map_err(|e| format!("bad part {:?}: {}", p, e))
                })
                .collect::<Result<_, _>>()?
        };
        out.push(parts);
        rest = tail.strip_prefix(',').unwrap_or(tail);
        if tail.is_empty() {
            break;
        }
        if !tail.starts_with(',') && !tail.is_empty() {
            return Err(format!("expected ',' between profiles near {:?}", tail));
        }
    }
    Ok(out)
}

fn run() -> Result<u8, (u8, String)> {
    // The environment variable caps worker threads; all computations are
    // performed in a deterministic order regardless of its value.
    if let Ok(v) = std::env::var("MSL_THREADS") {
        v.parse::<usize>().map_err(|_| {
            (
                EXIT_INPUT,
                format!("MSL_THREADS must be a number, got {:?}", v),
            )
        })?;
    }
    let cli = Cli::parse();
    match cli.command {
        Command::ValidateTarget { path } => {
            let text = read_file(&path)?;
            let dto: io::TargetDto = serde_json::from_str(&text)
                .map_err(|e| (EXIT_INPUT, format!("target parse error: {}", e)))?;
            let l = dto.to_curve().map_err(|e| (EXIT_INPUT, e))?;
            let violations = l.validate_smooth();
            if violations.is_empty() {
                println!("smooth");
                Ok(EXIT_OK)
            } else {
                for v in &violations {
                    println!("violation: {}", v);
                }
                Ok(EXIT_DOMAIN)
            }
        }
        Command::Hurwitz { degree, profiles } => {
            let profiles = parse_profiles(&profiles).map_err(|e| (EXIT_INPUT, e))?;
            let p = HurwitzProblem {
                d: degree,
                profiles,
            };
            p.validate().map_err(|e| (EXIT_DOMAIN, e))?;
            println!("{}", io::rat_to_string(&hurwitz_number(&p)));
            Ok(EXIT_OK)
        }
        Command::LocalFan { path, out } => {
            let text = read_file(&path)?;
            let dto: io::StarDto = serde_json::from_str(&text)
                .map_err(|e| (EXIT_INPUT, format!("star parse error: {}", e)))?;
            let star = dto.to_star();
            star.degree().map_err(|e| (EXIT_DOMAIN, e))?;
            if star.rdim() != 1 {
                return Err((
                    EXIT_DOMAIN,
                    format!("star has deformation dimension {} (need 1)", star.rdim()),
                ));
            }
            let fan = localfan::build_local_fan(&star).map_err(|e| (EXIT_DOMAIN, e))?;
            let balanced = localfan::check_balanced_local(&star).map_err(|e| (EXIT_DOMAIN, e))?;
            let dto = io::local_fan_dto(&star, &fan, balanced).map_err(|e| (EXIT_DOMAIN, e))?;
            let json = serde_json::to_string_pretty(&dto).unwrap();
            emit(&out, &json)?;
            Ok(if balanced { EXIT_OK } else { EXIT_DOMAIN })
        }
        Command::Build(b) => {
            let (l, deg, cfg) = load_config(&b.config)?;
            let max_d = b.max_d.or(cfg.max_d);
            if let Some(md) = max_d {
                let d = deg.covering_degree(&l).map_err(classify)?;
                if d.to_u64().map_or(true, |d| d > md) {
                    return Err((EXIT_BOUND, format!("bound exceeded: degree {} > {}", d, md)));
                }
            }
            let opts = EnumerateOptions {
                max_cells: b.max_cells.or(cfg.max_cells),
                dimension_filter: None,
            };
            let m = build_complex(&l, &deg, &opts).map_err(classify)?;
            if b.verbose {
                for (i, t) in m.types.iter().enumerate() {
                    eprintln!(
                        "cell {}: dim {} weight {}",
                        i,
                        t.dimension,
                        m.weights[i]
                            .as_ref()
                            .map(io::rat_to_string)
                            .unwrap_or_else(|| "-".into())
                    );
                }
            }
            let dto = io::complex_dto(&l, &deg, &m).map_err(|e| (EXIT_DOMAIN, e))?;
            let weights: Vec<String> = m.weights.iter().flatten().map(io::rat_to_string).collect();
            eprintln!(
                "dim {}, {} maximal cells, weights {}",
                m.max_dim,
                weights.len(),
                weights.join(",")
            );
            let json = serde_json::to_string_pretty(&dto).unwrap();
            emit(&b.out, &json)?;
            Ok(EXIT_OK)
        }
        Command::CheckBalance {
            path,
            config,
            verbose,
            out,
        } => {
            let (l, deg, m) = match (path, config) {
                (Some(p), _) => {
                    let text = read_file(&p)?;
                    let dto: io::ComplexDto = serde_json::from_str(&text)
                        .map_err(|e| (EXIT_INPUT, format!("complex parse error: {}", e)))?;
                    io::complex_from_dto(&dto).map_err(|e| (EXIT_INPUT, e))?
                }
                (None, Some(c)) => {
                    let (l, deg, cfg) = load_config(&c)?;
                    let opts = EnumerateOptions {
                        max_cells: cfg.max_cells,
                        dimension_filter: None,
                    };
                    let m = build_complex(&l, &deg, &opts).map_err(classify)?;
                    (l, deg, m)
                }
                (None, None) => {
                    return Err((
                        EXIT_INPUT,
                        "check-balance needs a complex file or --config".into(),
                    ));
                }
            };
            let report = check_global_balancing(&l, &deg, &m, &m.weights);
            if verbose {
                for f in &report.facets {
                    eprintln!(
                        "facet cell {}: {} adjacent, {}",
                        f.tau_index,
                        f.adjacent.len(),
                        if f.balanced { "balanced" } else { "UNBALANCED" }
                    );
                }
            }
            let dto = io::balance_dto(&report);
            let json = serde_json::to_string_pretty(&dto).unwrap();
            emit(&out, &json)?;
            Ok(if report.balanced {
                EXIT_OK
            } else {
                EXIT_DOMAIN
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(code)
        }
    }
}
