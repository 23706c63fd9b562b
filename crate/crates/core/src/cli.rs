//! Batch command-line front end.
//!
//! Every subcommand writes one artifact (JSON by default, CSV with
//! `--format csv`) to stdout or `--output`. Failures print a JSON error
//! record on stderr and exit with 2 (bad input) or 3 (numerical failure).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::convex::{mixed_volume, Body, Polytope};
use crate::ellipsoids::{body_ellipsoid, ellipsoid_volume, newton_ellipsoid};
use crate::error::{Error, Result};
use crate::expsum::{count_zeros_disk, density_slope, ExpSum1D};
use crate::kac;
use crate::mc_lab;
use crate::output::{to_json, Cell, Table};
use crate::spectra::{range_spectrum, Spectrum};
use crate::zerofan::{self, ComplexPolytope};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "kacfta", version, about = "Real-root statistics of random Laurent polynomials and zero densities of exponential sums")]
pub struct Cli {
    /// Seed of every random stream (also read from KACFTA_SEED)
    #[arg(long, global = true, env = "KACFTA_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo sample count
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Write the artifact here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (results do not depend on it)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Spectra given inline as integer ranges `a..b` (dimension 1) or as files
/// in the `n <dim>` text format.
#[derive(Debug, Args)]
pub struct SpectraArgs {
    /// One-dimensional spectrum `a..b` (inclusive), repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub spectrum: Vec<String>,
    /// Spectrum file, repeatable
    #[arg(long)]
    pub spectrum_file: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected number of real roots of a random real Laurent polynomial in
    /// one variable: 2·sqrt((1/#Λ)·Σλ²)
    #[command(name = "expected-roots-1d")]
    ExpectedRoots1d(SpectraArgs),
    /// Probability that a root is real: n!·V(Ell(Λ_1..Λ_n)) divided by the
    /// BKK count n!·V(conv Λ_1..conv Λ_n)
    ProbReal(SpectraArgs),
    /// Expected number of roots on the torus: n!·V(Ell(Λ_1), ..., Ell(Λ_n))
    /// with Ell(Λ) the ellipsoid of the form (1/#Λ)·Σλλᵀ
    ExpectedRoots(SpectraArgs),
    /// Generic number of torus roots n!·V(conv Λ_1, ..., conv Λ_n)
    Bkk(SpectraArgs),
    /// Table of β_n = ∫ x²(1-x²)^((n-1)/2) dx over [-1, 1] in exact form
    BetaTable {
        #[arg(long, default_value_t = 20)]
        max_n: u32,
    },
    /// Limit of the real-root probability for lattice points of dilated
    /// balls: ((σ_{n-1}/σ_n)·β_n)^(n/2)
    AsymptoteBall {
        #[arg(long)]
        n: u32,
    },
    /// Limit of the real-root probability for dilated bodies:
    /// V(Ell(Δ_1)..Ell(Δ_n)) / V(Δ_1..Δ_n), Ell(Δ) from second moments
    AsymptoteBodies {
        /// Body JSON ({"dim","vertices"} or {"dim","radius"}), repeatable
        #[arg(long, required = true)]
        body_file: Vec<PathBuf>,
    },
    /// Monte Carlo count of real roots on the circle (compare with
    /// expected-roots-1d)
    #[command(name = "mc-1d")]
    Mc1d(SpectraArgs),
    /// Monte Carlo count of common roots of two random polynomials on the
    /// 2-torus (compare with expected-roots)
    #[command(name = "mc-2d")]
    Mc2d(SpectraArgs),
    /// Checks |Θ(θ)|² = #Λ and |Θ'(θ)|² = Σλ² for the evaluation map Θ
    Identities {
        #[command(flatten)]
        spectra: SpectraArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Crofton check: mean hyperplane crossings of Θ/|Θ| against length/π
    Crofton(SpectraArgs),
    /// Zeros of an exponential sum in |z| < r by the argument principle,
    /// next to (r/2π)·perimeter of the Newton polygon
    ExpsumCount {
        /// Terms, one per line: re(λ) im(λ) re(c) im(c)
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        r: f64,
    },
    /// Least-squares slope of zero counts against the radius
    ExpsumSlope {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated increasing radii (at least 4)
        #[arg(long, value_delimiter = ',', default_values_t = vec![10.0, 20.0, 30.0, 40.0, 50.0])]
        radii: Vec<f64>,
    },
    /// Zero-carrying rays (outward side normals) with density length/(2π)
    RayDensity {
        #[arg(long)]
        file: PathBuf,
    },
    /// Pseudovolume Σ c(Γ)·vol_n(Γ)·vol_n(K_Γ∩B)/σ_n of a polytope in C^n
    Pvol {
        /// ComplexPolytope JSON {"n","vertices"}
        #[arg(long)]
        file: PathBuf,
    },
    /// Mixed volume V(A_1, ..., A_n) of n polytopes in R^n, n <= 3
    MixedVolume {
        /// Polytope JSON {"dim","vertices"}, repeatable
        #[arg(long, required = true)]
        polytope_file: Vec<PathBuf>,
    },
    /// Ellipsoid of a spectrum ((1/#Λ)·Σλλᵀ) or of a body (second moments)
    Ellipsoid {
        #[command(flatten)]
        spectra: SpectraArgs,
        #[arg(long)]
        body_file: Option<PathBuf>,
    },
}

/// The result of one subcommand: a JSON document and, when a natural
/// tabular form exists, its CSV table.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub json: Value,
    pub table: Option<Table>,
}

impl Artifact {
    fn new<T: Serialize>(v: &T) -> Self {
        Artifact { json: serde_json::to_value(v).expect("serializable"), table: None }
    }

    fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(&self.json),
            Format::Csv => self.table.clone().unwrap_or_else(|| Table::from_object(&self.json)).to_csv(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse { line: e.line(), message: format!("{}: {e}", path.display()) })
}

fn parse_range(s: &str) -> Result<Spectrum> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::invalid(format!("expected a range a..b, got `{s}`")))?;
    let lo: i64 = a.trim().parse().map_err(|_| Error::invalid(format!("bad range start `{a}`")))?;
    let hi: i64 = b.trim().parse().map_err(|_| Error::invalid(format!("bad range end `{b}`")))?;
    range_spectrum(lo, hi)
}

impl SpectraArgs {
    fn load(&self) -> Result<Vec<Spectrum>> {
        let mut out = self.spectrum.iter().map(|s| parse_range(s)).collect::<Result<Vec<_>>>()?;
        for p in &self.spectrum_file {
            out.push(read(p)?.parse().map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", p.display()) },
                other => other,
            })?);
        }
        if out.is_empty() {
            return Err(Error::invalid("no spectrum given (use --spectrum a..b or --spectrum-file)"));
        }
        Ok(out)
    }

    fn one(&self) -> Result<Spectrum> {
        let mut v = self.load()?;
        if v.len() != 1 {
            return Err(Error::invalid(format!("expected one spectrum, got {}", v.len())));
        }
        Ok(v.remove(0))
    }
}

fn counts_table(counts: &[usize]) -> Table {
    let mut t = Table::new(&["sample_index", "root_count"]);
    t.rows = counts.iter().enumerate().map(|(i, &c)| vec![Cell::Int(i as i64), Cell::Int(c as i64)]).collect();
    t
}

/// Runs a parsed command and returns its artifact.
pub fn execute(cli: &Cli) -> Result<Artifact> {
    let (seed, samples) = (cli.seed, cli.samples);
    Ok(match &cli.command {
        Command::ExpectedRoots1d(a) => {
            let s = a.one()?;
            Artifact::new(&json!({
                "expected_real_roots": kac::expected_real_roots_1d(&s)?,
                "spectrum": s.digest(),
            }))
        }
        Command::ProbReal(a) => Artifact::new(&kac::prob_real(&a.load()?, samples, seed)?),
        Command::ExpectedRoots(a) => {
            let spectra = a.load()?;
            let e = kac::expected_real_roots(&spectra, samples, seed)?;
            Artifact::new(&json!({
                "expected_real_roots": e.mean,
                "stderr": e.stderr,
                "n_samples": e.n_samples,
                "seed": e.seed,
                "spectra": spectra.iter().map(Spectrum::digest).collect::<Vec<_>>(),
            }))
        }
        Command::Bkk(a) => {
            let spectra = a.load()?;
            Artifact::new(&json!({
                "total_roots": kac::bkk_count(&spectra)?,
                "spectra": spectra.iter().map(Spectrum::digest).collect::<Vec<_>>(),
            }))
        }
        Command::BetaTable { max_n } => {
            let mut t = Table::new(&["n", "beta_exact", "beta"]);
            let mut rows = Vec::new();
            for n in 1..=*max_n {
                let b = kac::beta_exact(n)?;
                t.rows.push(vec![Cell::Int(n as i64), Cell::Text(b.to_string()), Cell::Float(b.value())]);
                rows.push(json!({"n": n, "beta_exact": b.to_string(), "beta": b.value()}));
            }
            Artifact::new(&json!({ "rows": rows })).with_table(t)
        }
        Command::AsymptoteBall { n } => Artifact::new(&json!({
            "n": n,
            "prob_real_limit": kac::asymptotic_prob_ball(*n)?,
            "beta": kac::beta_n(*n),
        })),
        Command::AsymptoteBodies { body_file } => {
            let bodies = body_file.iter().map(|p| read_json::<Body>(p)).collect::<Result<Vec<_>>>()?;
            let e = kac::asymptotic_prob_bodies(&bodies, samples, seed)?;
            Artifact::new(&json!({
                "prob_real_limit": e.mean,
                "stderr": e.stderr,
                "n_samples": e.n_samples,
                "seed": e.seed,
            }))
        }
        Command::Mc1d(a) => {
            let s = a.one()?;
            if samples < mc_lab::MIN_SAMPLES {
                return Err(Error::invalid(format!("need at least {} samples", mc_lab::MIN_SAMPLES)));
            }
            let counts = mc_lab::sample_counts_1d(&s, samples, seed)?;
            let mut m = crate::mc::Moments::default();
            counts.iter().for_each(|&k| m.push(k as f64));
            let mut doc = serde_json::to_value(m.estimate(seed)).expect("serializable");
            doc["predicted"] = json!(kac::expected_real_roots_1d(&s)?);
            Artifact { json: doc, table: Some(counts_table(&counts)) }
        }
        Command::Mc2d(a) => {
            let spectra = a.load()?;
            if spectra.len() != 2 {
                return Err(Error::invalid(format!("mc-2d needs two spectra, got {}", spectra.len())));
            }
            if samples < mc_lab::MIN_SAMPLES {
                return Err(Error::invalid(format!("need at least {} samples", mc_lab::MIN_SAMPLES)));
            }
            let c = mc_lab::sample_counts_2d(&spectra[0], &spectra[1], samples, seed)?;
            let mut m = crate::mc::Moments::default();
            c.counts.iter().for_each(|&k| m.push(k as f64));
            let mut doc = serde_json::to_value(m.estimate(seed)).expect("serializable");
            doc["redraws"] = json!(c.redraws);
            Artifact { json: doc, table: Some(counts_table(&c.counts)) }
        }
        Command::Identities { spectra, trials } => Artifact::new(&mc_lab::evaluation_identities(&spectra.one()?, *trials, seed)?),
        Command::Crofton(a) => Artifact::new(&mc_lab::crofton_check(&a.one()?, samples, seed)?),
        Command::ExpsumCount { file, r } => {
            let f: ExpSum1D = read(file)?.parse()?;
            Artifact::new(&count_zeros_disk(&f, *r)?)
        }
        Command::ExpsumSlope { file, radii } => {
            let f: ExpSum1D = read(file)?.parse()?;
            let rep = density_slope(&f, radii)?;
            let mut t = Table::new(&["r", "count", "predicted"]);
            t.rows = rep.counts.iter().map(|c| vec![Cell::Float(c.r), Cell::Int(c.count as i64), Cell::Float(c.predicted)]).collect();
            Artifact::new(&rep).with_table(t)
        }
        Command::RayDensity { file } => {
            let f: ExpSum1D = read(file)?.parse()?;
            let rays = zerofan::ray_density_1d(&f)?;
            let mut t = Table::new(&["direction_re", "direction_im", "density"]);
            t.rows = rays.iter().map(|r| vec![Cell::Float(r.direction[0]), Cell::Float(r.direction[1]), Cell::Float(r.density)]).collect();
            let total: f64 = rays.iter().map(|r| r.density).sum();
            Artifact::new(&json!({ "rays": rays, "total_density": total })).with_table(t)
        }
        Command::Pvol { file } => {
            let p: ComplexPolytope = read_json(file)?;
            let faces = zerofan::enumerate_n_faces(&p)?;
            let mut t = Table::new(&["face_id", "cosine", "n_volume", "cone_fraction"]);
            let mut rows = Vec::new();
            for (i, f) in faces.iter().enumerate() {
                t.rows.push(vec![Cell::Int(i as i64), Cell::Float(f.cosine), Cell::Float(f.n_volume), Cell::Float(f.cone_fraction)]);
                rows.push(json!({"face_id": i, "vertices": f.vertices, "cosine": f.cosine, "n_volume": f.n_volume, "cone_fraction": f.cone_fraction}));
            }
            let pvol: f64 = faces.iter().map(|f| f.cosine * f.n_volume * f.cone_fraction).sum();
            Artifact::new(&json!({ "pseudovolume": pvol, "faces": rows })).with_table(t)
        }
        Command::MixedVolume { polytope_file } => {
            let ps = polytope_file.iter().map(|p| read_json::<Polytope>(p)).collect::<Result<Vec<_>>>()?;
            Artifact::new(&json!({ "mixed_volume": mixed_volume(&ps)? }))
        }
        Command::Ellipsoid { spectra, body_file } => {
            let e = match (body_file, spectra.spectrum.is_empty() && spectra.spectrum_file.is_empty()) {
                (Some(p), true) => body_ellipsoid(&read_json::<Body>(p)?)?,
                (None, false) => newton_ellipsoid(&spectra.one()?)?,
                _ => return Err(Error::invalid("give exactly one of a spectrum or --body-file")),
            };
            Artifact::new(&json!({ "dim": e.dim(), "form": e.form(), "volume": ellipsoid_volume(&e) }))
        }
    })
}

/// Structured error record written to stderr.
pub fn error_record(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": exit_code(e) } })
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        2
    } else {
        3
    }
}

fn run_parsed(cli: &Cli) -> Result<String> {
    let artifact = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(|| execute(cli))?,
        None => execute(cli)?,
    };
    Ok(artifact.render(cli.format))
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok(text) => match &cli.output {
            Some(path) => match fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let err = Error::invalid(format!("{}: {e}", path.display()));
                    eprint!("{}", to_json(&error_record(&err)));
                    2
                }
            },
            None => {
                print!("{text}");
                0
            }
        },
        Err(e) => {
            eprint!("{}", to_json(&error_record(&e)));
            exit_code(&e)
        }
    }
}
