mod datum_file;
mod render;
mod spectral_cmd;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use cone_morse::examples::{projective_space, synthetic_from_ranks, torus, truncated_identity, Pairing, TorusConvention};
use cone_morse::inequalities::cone_report;
use cone_morse::morse::{morse_complex, product, stabilize, validate_datum};
use cone_morse::spectral::SpectralError;
use cone_morse::{MorseDatum, RationalMatrix};

use render::Format;

#[derive(Parser)]
#[command(name = "cone-morse", version, about = "Cone Morse complexes, their inequalities and a Witten-deformed cone Laplacian")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Print nothing to stdout.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in datum.
    Example {
        #[command(subcommand)]
        family: Family,
    },
    /// Ranks, cone cohomology and inequality slacks of a datum.
    Analyze { input: PathBuf },
    /// Cone cohomology by the rank decomposition and directly.
    Cone { input: PathBuf },
    /// Check ∂² = 0, ∂c = c∂ and the index bookkeeping of a datum.
    Validate { input: PathBuf },
    /// Low spectrum of the deformed cone Laplacian on the flat 2-torus.
    Spectral(SpectralArgs),
}

#[derive(Subcommand)]
enum Family {
    /// Torus T^{2n} with f = 2 − ½Σcos 2πx_i.
    Torus {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "adjacent")]
        pairing: Pairing,
    },
    /// Complex projective space CP^n with the height function.
    Cpn {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
    },
    /// Perfect datum with given Betti numbers and ranks of ω^{p+1} on cohomology.
    Synthetic {
        /// Betti numbers b_0,…,b_{2n}.
        #[arg(long, value_delimiter = ',', required = true)]
        betti: Vec<usize>,
        /// Rank of ω^{p+1} : H^k → H^{k+2p+2} for k = 0,1,…; missing entries are 0.
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value = "synthetic")]
        name: String,
    },
    /// Product of two data.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Add a cancelling pair of critical points in indices k and k+1.
    Stabilize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "s")]
        label: String,
    },
}

#[derive(Args)]
struct SpectralArgs {
    /// Deformation parameter; repeat for several values.
    #[arg(long = "t", required = true)]
    t: Vec<f64>,
    /// Fourier cutoff N; defaults to ⌈2√t⌉ + 6.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Cone degrees: "all" or a comma-separated list.
    #[arg(long, default_value = "all")]
    degrees: String,
    /// Scale a in f = a(2 − ½cos 2πx − ½cos 2πy).
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Use −f in place of f.
    #[arg(long)]
    reversed: bool,
    /// Fit the spectral gap against t over all four degrees.
    #[arg(long)]
    gap_growth: bool,
    /// Write every eigenvalue to this CSV file.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Write the "# t gap" table here (with --gap-growth).
    #[arg(long)]
    gap_file: Option<PathBuf>,
}

/// Error with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self { code, error: error.into() }
    }
}

const VALIDATION: u8 = 1;
const USAGE: u8 = 2;
const ANOMALY: u8 = 3;
const ADEQUACY: u8 = 4;

fn load(path: &Path) -> Result<MorseDatum, Failure> {
    datum_file::read(path).map_err(|e| Failure::new(USAGE, e))
}

fn load_valid(path: &Path) -> Result<MorseDatum, Failure> {
    let d = load(path)?;
    validate_datum(&d).map_err(|e| Failure::new(VALIDATION, anyhow::Error::new(e).context(path.display().to_string())))?;
    Ok(d)
}

struct Sink<'a> {
    cli: &'a Cli,
}

impl Sink<'_> {
    fn emit(&self, text: &str) -> Result<(), Failure> {
        if let Some(path) = &self.cli.output {
            write_file(path, text)?;
        } else if !self.cli.quiet {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::new(USAGE, e))?;
        }
        Ok(())
    }

    fn note(&self, text: &str) {
        if !self.cli.quiet {
            eprintln!("{text}");
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| Failure::new(USAGE, e))
}

fn example(family: &Family) -> Result<MorseDatum, Failure> {
    let usage = |e: anyhow::Error| Failure::new(USAGE, e);
    match family {
        Family::Torus { n, pairing } => torus(TorusConvention::new(*n, *pairing)).map_err(|e| usage(e.into())),
        Family::Cpn { n, p } => projective_space(*n, *p).map_err(|e| usage(e.into())),
        Family::Synthetic { betti, ranks, p, name } => {
            let shift = 2 * p + 2;
            let dim = |k: usize| betti.get(k).copied().unwrap_or(0);
            let maps: Vec<RationalMatrix> = (0..betti.len())
                .map(|k| {
                    let rank = ranks.get(k).copied().unwrap_or(0);
                    truncated_identity(dim(k + shift), dim(k), rank)
                })
                .collect();
            if let Some(k) = (0..ranks.len()).find(|&k| ranks[k] > dim(k).min(dim(k + shift))) {
                return Err(usage(anyhow::anyhow!(
                    "rank {} at degree {k} exceeds min(b_{k}, b_{}) = {}",
                    ranks[k],
                    k + shift,
                    dim(k).min(dim(k + shift))
                )));
            }
            let mut d = synthetic_from_ranks(betti, &maps, *p).map_err(|e| usage(e.into()))?;
            d.name = name.clone();
            Ok(d)
        }
        Family::Product { left, right } => {
            let (l, r) = (load_valid(left)?, load_valid(right)?);
            product(&l, &r).map_err(|e| usage(e.into()))
        }
        Family::Stabilize { input, degree, label } => {
            stabilize(&load_valid(input)?, *degree, label).map_err(|e| usage(e.into()))
        }
    }
}

fn parse_degrees(s: &str) -> Result<Vec<usize>, Failure> {
    if s == "all" {
        return Ok(vec![0, 1, 2, 3]);
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("invalid degree {x:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::new(USAGE, e))
}

fn spectral_failure(e: SpectralError) -> Failure {
    let code = match e {
        SpectralError::Adequacy { .. } => ADEQUACY,
        SpectralError::Solver(_) => VALIDATION,
        _ => USAGE,
    };
    Failure::new(code, e)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let sink = Sink { cli };
    match &cli.command {
        Command::Example { family } => {
            let d = example(family)?;
            sink.emit(&datum_file::emit(&d))
        }
        Command::Validate { input } => {
            let d = load_valid(input)?;
            let counts: Vec<String> = d.critical_counts().iter().map(ToString::to_string).collect();
            sink.emit(&format!("{}: ok (critical points per index {})\n", input.display(), counts.join(",")))
        }
        Command::Analyze { input } => {
            let d = load_valid(input)?;
            let rep = cone_report(&d).map_err(|e| Failure::new(VALIDATION, e))?;
            sink.emit(&render::analyze(&rep, cli.format))?;
            if rep.has_negative() {
                return Err(Failure::new(ANOMALY, anyhow::anyhow!("negative slack in {}", input.display())));
            }
            Ok(())
        }
        Command::Cone { input } => {
            let d = load_valid(input)?;
            let phi = morse_complex(&d).map_err(|e| Failure::new(VALIDATION, e))?;
            let cone = phi.mapping_cone().map_err(|e| Failure::new(VALIDATION, e))?;
            let cmp = render::ConeComparison {
                name: d.name.clone(),
                degrees: phi.cone_degrees().collect(),
                cone_dims: cone.dims().to_vec(),
                direct: cone.cohomology().map_err(|e| Failure::new(VALIDATION, e))?.dims(),
                decomposition: phi.cone_cohomology_by_decomposition().map_err(|e| Failure::new(VALIDATION, e))?,
            };
            sink.emit(&render::cone(&cmp, cli.format))?;
            if !cmp.agrees() {
                return Err(Failure::new(VALIDATION, anyhow::anyhow!("decomposition disagrees with the direct cone")));
            }
            Ok(())
        }
        Command::Spectral(args) => {
            let req = spectral_cmd::Request {
                t_values: args.t.clone(),
                cutoff: args.cutoff,
                degrees: parse_degrees(&args.degrees)?,
                morse_scale: args.scale,
                reversed: args.reversed,
                gap_growth: args.gap_growth,
            };
            let out = spectral_cmd::run(&req).map_err(spectral_failure)?;
            let text = match cli.format {
                Format::Csv => spectral_cmd::eigenvalue_csv(&out).map_err(|e| Failure::new(USAGE, e))?,
                f => spectral_cmd::render(&out, f),
            };
            sink.emit(&text)?;
            if let Some(path) = &args.emit {
                write_file(path, &spectral_cmd::eigenvalue_csv(&out).map_err(|e| Failure::new(USAGE, e))?)?;
                sink.note(&format!("eigenvalues written to {}", path.display()));
            }
            if let (Some(path), Some(fit)) = (&args.gap_file, &out.fit) {
                write_file(path, &spectral_cmd::gap_file(fit))?;
            }
            match out.inadequate {
                Some(e) => Err(spectral_failure(e)),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
