//! Command-line front end: `analyze` and `bench-mge`.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codelib::{self, BuiltinParams, BUILTIN_NAMES};
use crate::error::{Error, Result};
use crate::matrixlab::{mge, CoeffMatrix, Layout, Region};
use crate::oracle::{instantiate_torus, torus_gsd, verify_string_endpoints};
use crate::pipeline::{analyze, Analysis, Options};
use crate::symplectic::{PauliVector, StabilizerCode, Syndrome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_TOPOLOGICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "stabtopo",
    version,
    about = "Anyon data of 2D translation-invariant Pauli stabilizer codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check topological order and extract fusion, spins and braiding.
    Analyze(AnalyzeArgs),
    /// Time modified Gaussian elimination on random matrices.
    BenchMge(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// builtin code name or path to a code file
    pub source: String,
    /// qudit dimension for toric, toric2 and trivial
    #[arg(long)]
    pub d: Option<u32>,
    /// shift for shifted_double_semion
    #[arg(long)]
    pub l: Option<i32>,
    /// truncation half-width in both directions
    #[arg(long)]
    pub k: Option<usize>,
    /// truncation half-width along x, overrides --k
    #[arg(long)]
    pub kx: Option<usize>,
    /// truncation half-width along y, overrides --k
    #[arg(long)]
    pub ky: Option<usize>,
    /// translation range of syndrome duplicates
    #[arg(long)]
    pub m: Option<usize>,
    /// translation range of stabilizer duplicates
    #[arg(long)]
    pub mprime: Option<usize>,
    /// largest string step tried
    #[arg(long)]
    pub nmax: Option<usize>,
    /// first string extension for spins
    #[arg(long)]
    pub q: Option<usize>,
    /// cross-check against a brute-force L×L torus
    #[arg(long, value_name = "L")]
    pub oracle: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// row counts, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "64,128,256,512,1024,2048"
    )]
    pub rows: Vec<usize>,
    #[arg(long, default_value_t = 1024)]
    pub cols: usize,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 8)]
    pub d: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeInfo {
    pub name: String,
    pub d: u32,
    pub w: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub kx: usize,
    pub ky: usize,
    pub m: usize,
    pub mprime: usize,
    pub nmax: usize,
    pub q: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToSection {
    pub holds: bool,
    pub witnesses: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonEntry {
    pub anyon: Vec<String>,
    pub order: u32,
    pub nx: usize,
    pub px: Vec<String>,
    pub ny: usize,
    pub py: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    pub e: Vec<i64>,
    pub m: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    pub torus: usize,
    pub gsd: String,
    pub anyon_count: String,
    pub gsd_matches: bool,
    /// torus size used for the endpoint checks
    pub endpoint_torus: usize,
    pub endpoints: Vec<bool>,
}

/// Serializable summary of an analysis run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub code: CodeInfo,
    pub parameters: Parameters,
    pub to_condition: ToSection,
    pub counts: Vec<usize>,
    pub chosen_n: Option<usize>,
    pub anyons: Vec<AnyonEntry>,
    pub spins: Vec<u32>,
    pub braiding: Vec<Vec<u32>>,
    pub q_stable: Option<usize>,
    pub em_pairs: Option<Vec<PairEntry>>,
    pub em_note: Option<String>,
    pub oracle: Option<OracleSection>,
}

fn poly_strings(v: &PauliVector) -> Vec<String> {
    v.entries().iter().map(|f| f.to_string()).collect()
}

fn syndrome_strings(s: &Syndrome) -> Vec<String> {
    s.entries().iter().map(|f| f.to_string()).collect()
}

impl AnalysisReport {
    pub fn new(name: &str, code: &StabilizerCode, a: &Analysis) -> Self {
        let r = a.options.region;
        let theory = a.theory.as_ref();
        AnalysisReport {
            code: CodeInfo {
                name: name.to_string(),
                d: code.d(),
                w: code.w(),
                t: code.t(),
            },
            parameters: Parameters {
                kx: r.kx,
                ky: r.ky,
                m: r.m,
                mprime: r.mprime,
                nmax: a.options.nmax,
                q: a.options.q,
            },
            to_condition: ToSection {
                holds: a.to_condition.holds,
                witnesses: a.to_condition.witnesses.iter().map(poly_strings).collect(),
            },
            counts: a.counts.clone(),
            chosen_n: a.chosen_n,
            anyons: theory
                .map(|t| {
                    t.basis
                        .iter()
                        .map(|b| AnyonEntry {
                            anyon: syndrome_strings(&b.string.anyon),
                            order: b.order,
                            nx: b.string.nx,
                            px: poly_strings(&b.string.px),
                            ny: b.string.ny,
                            py: poly_strings(&b.string.py),
                        })
                        .collect()
                })
                .unwrap_or_default(),
            spins: theory.map(|t| t.spins.clone()).unwrap_or_default(),
            braiding: theory.map(|t| t.braiding.clone()).unwrap_or_default(),
            q_stable: theory.map(|t| t.q),
            em_pairs: a.em.as_ref().map(|em| {
                em.pairs
                    .iter()
                    .map(|p| PairEntry {
                        e: p.e.clone(),
                        m: p.m.clone(),
                    })
                    .collect()
            }),
            em_note: a.em_note.clone(),
            oracle: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("report JSON: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.code;
        let p = &self.parameters;
        let _ = writeln!(s, "code {} (d = {}, w = {}, t = {})", c.name, c.d, c.w, c.t);
        let _ = writeln!(
            s,
            "parameters kx = {} ky = {} m = {} m' = {} nmax = {} q = {}",
            p.kx, p.ky, p.m, p.mprime, p.nmax, p.q
        );
        let verdict = if self.to_condition.holds {
            "holds"
        } else {
            "fails"
        };
        let _ = writeln!(s, "topological order condition {verdict}");
        for w in &self.to_condition.witnesses {
            let _ = writeln!(s, "  witness [{}]", w.join(", "));
        }
        if !self.counts.is_empty() {
            let counts: Vec<String> = self.counts.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(
                s,
                "anyon counts for n = 1..{}: {}",
                self.counts.len(),
                counts.join(" ")
            );
        }
        if let Some(n) = self.chosen_n {
            let _ = writeln!(s, "chosen n = {n}");
        }
        for (i, a) in self.anyons.iter().enumerate() {
            let _ = writeln!(
                s,
                "v{} order {} anyon [{}]",
                i + 1,
                a.order,
                a.anyon.join(", ")
            );
            let _ = writeln!(s, "  px (nx = {}) [{}]", a.nx, a.px.join(", "));
            let _ = writeln!(s, "  py (ny = {}) [{}]", a.ny, a.py.join(", "));
        }
        if !self.spins.is_empty() {
            let spins: Vec<String> = self.spins.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "spin exponents (mod {}): {}", c.d, spins.join(" "));
            let _ = writeln!(s, "braiding exponents (mod {}):", c.d);
            for row in &self.braiding {
                let row: Vec<String> = row.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(s, "  {}", row.join(" "));
            }
        }
        if let Some(q) = self.q_stable {
            let _ = writeln!(s, "stable from q = {q}");
        }
        if let Some(pairs) = &self.em_pairs {
            for (i, pr) in pairs.iter().enumerate() {
                let _ = writeln!(s, "pair {}: e = {:?} m = {:?}", i + 1, pr.e, pr.m);
            }
        }
        if let Some(note) = &self.em_note {
            let _ = writeln!(s, "{note}");
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                s,
                "oracle L = {}: gsd {} vs anyon count {} ({})",
                o.torus,
                o.gsd,
                o.anyon_count,
                if o.gsd_matches { "match" } else { "MISMATCH" }
            );
            let ends: Vec<&str> = o
                .endpoints
                .iter()
                .map(|&b| if b { "ok" } else { "FAIL" })
                .collect();
            let _ = writeln!(
                s,
                "string endpoints on L = {}: {}",
                o.endpoint_torus,
                ends.join(" ")
            );
        }
        s
    }
}

/// Resolves a builtin name or reads a code file.
pub fn load_code(source: &str, params: BuiltinParams) -> Result<StabilizerCode> {
    if BUILTIN_NAMES.contains(&source) {
        return codelib::builtin_with(source, params);
    }
    let path = Path::new(source);
    if path.exists() {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{source}: {e}")))?;
        return codelib::parse_code_file(&text);
    }
    Err(Error::UnknownCode(source.to_string()))
}

pub fn options_from(args: &AnalyzeArgs, code: &StabilizerCode) -> Result<Options> {
    let mut opts = Options::for_code(code);
    let r = opts.region;
    let kx = args.kx.or(args.k).unwrap_or(r.kx);
    let ky = args.ky.or(args.k).unwrap_or(r.ky);
    opts.region = Region::new(
        kx,
        ky,
        args.m.unwrap_or(r.m),
        args.mprime.unwrap_or(r.mprime),
    )?;
    if let Some(n) = args.nmax {
        opts.nmax = n;
    }
    if let Some(q) = args.q {
        opts.q = q;
    }
    Ok(opts)
}

/// Smallest torus for endpoint checks of length-3 strings.
fn endpoint_torus(a: &Analysis, at_least: usize) -> usize {
    let mut l = at_least;
    if let Some(t) = &a.theory {
        for b in &t.basis {
            let s = &b.string;
            let ext =
                s.px.entries()
                    .iter()
                    .map(|f| f.extent().0 as usize)
                    .max()
                    .unwrap_or(0);
            let span = 3 * s.nx;
            l = l
                .max(2 * span + 1)
                .max(2 * ext + span + 1)
                .max(span + 2 * s.anyon.range() as usize + 1);
        }
    }
    l
}

pub fn oracle_section(
    code: &StabilizerCode,
    a: &Analysis,
    l: usize,
) -> Result<Option<OracleSection>> {
    let Some(theory) = &a.theory else {
        return Ok(None);
    };
    let inst = instantiate_torus(code, l)?;
    let gsd = torus_gsd(&inst);
    let count = theory.anyon_count();
    let le = endpoint_torus(a, l);
    let inst_e = if le == l {
        inst
    } else {
        instantiate_torus(code, le)?
    };
    let endpoints = theory
        .basis
        .iter()
        .map(|b| verify_string_endpoints(&inst_e, &b.string, 3))
        .collect::<Result<Vec<bool>>>()?;
    Ok(Some(OracleSection {
        torus: l,
        gsd: gsd.to_string(),
        anyon_count: count.to_string(),
        gsd_matches: gsd == count,
        endpoint_torus: le,
        endpoints,
    }))
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalysisReport> {
    let params = BuiltinParams {
        d: args.d,
        l: args.l,
    };
    let code = load_code(&args.source, params)?;
    let opts = options_from(args, &code)?;
    let analysis = analyze(&code, &opts)?;
    let mut report = AnalysisReport::new(&args.source, &code, &analysis);
    if let Some(l) = args.oracle {
        report.oracle = oracle_section(&code, &analysis, l)?;
    }
    Ok(report)
}

/// One benchmark line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub r: usize,
    pub c: usize,
    pub d: u32,
    pub samples: usize,
    pub mean_ms: f64,
    pub stddev_ms: f64,
}

/// Uniformly random `r × c` matrix over Z_d.
pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, d: u32) -> CoeffMatrix {
    let rows = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(0..d)).collect())
        .collect();
    CoeffMatrix::new(d, Layout::flat(c), rows).expect("valid sizes")
}

pub fn bench_mge(rows: &[usize], cols: usize, samples: usize, d: u32, seed: u64) -> Vec<BenchRow> {
    if samples == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rows.iter()
        .map(|&r| {
            let times: Vec<f64> = (0..samples)
                .map(|_| {
                    let m = random_matrix(&mut rng, r, cols, d);
                    let t0 = Instant::now();
                    std::hint::black_box(mge(&m));
                    t0.elapsed().as_secs_f64() * 1e3
                })
                .collect();
            let mean = times.iter().sum::<f64>() / samples as f64;
            let var = if samples > 1 {
                times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (samples - 1) as f64
            } else {
                0.0
            };
            BenchRow {
                r,
                c: cols,
                d,
                samples,
                mean_ms: mean,
                stddev_ms: var.sqrt(),
            }
        })
        .collect()
}

/// Least-squares slope of `ln(mean_ms)` against `ln(r)`.
pub fn loglog_slope(rows: &[&BenchRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|b| b.mean_ms > 0.0)
        .map(|b| ((b.r as f64).ln(), b.mean_ms.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slopes in the `r < c` and `r > c` regimes.
pub fn regime_slopes(rows: &[BenchRow]) -> (Option<f64>, Option<f64>) {
    let below: Vec<&BenchRow> = rows.iter().filter(|b| b.r < b.c).collect();
    let above: Vec<&BenchRow> = rows.iter().filter(|b| b.r > b.c).collect();
    (loglog_slope(&below), loglog_slope(&above))
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("r,c,d,samples,mean_ms,stddev_ms\n");
    for b in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.3},{:.3}",
            b.r, b.c, b.d, b.samples, b.mean_ms, b.stddev_ms
        );
    }
    s
}

/// Runs the CLI and returns the process exit code.
/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Analyze(args) => match cmd_analyze(&args) {
            Ok(report) => {
                match args.format {
                    Format::Json => emit(&format!("{}\n", report.to_json())),
                    Format::Text => emit(&report.to_text()),
                }
                if report.to_condition.holds {
                    EXIT_OK
                } else {
                    EXIT_NOT_TOPOLOGICAL
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                if matches!(e, Error::RegionTooSmall(_)) {
                    eprintln!("hint: increase --k (or --kx/--ky)");
                }
                EXIT_USAGE
            }
        },
        Command::BenchMge(b) => {
            if b.d < 2
                || b.d > crate::matrixlab::MAX_MODULUS
                || b.cols == 0
                || b.rows.contains(&0)
            {
                eprintln!(
                    "error: sizes must be positive and 2 <= d <= {}",
                    crate::matrixlab::MAX_MODULUS
                );
                return EXIT_USAGE;
            }
            let rows = bench_mge(&b.rows, b.cols, b.samples, b.d, b.seed);
            emit(&bench_csv(&rows));
            let (lo, hi) = regime_slopes(&rows);
            let show = |s: Option<f64>| s.map_or("n/a".to_string(), |v| format!("{v:.2}"));
            eprintln!("log-log slope r < c: {}  r > c: {}", show(lo), show(hi));
            EXIT_OK
        }
    }
}
