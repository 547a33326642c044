use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use conelab::acceptance::{run_all, run_criterion, CRITERIA};
use conelab::cones::{member, verify_certificate_with, ConeId, Status, ToleranceConfig};
use conelab::free::{kraus_from_psd, pairing_bipartite, search_minmax_gap, PolyhedralCone};
use conelab::hermitian::{wire::RectWire, BipartiteOperator, Sampler};
use conelab::slice::{
    boundary_margin, discriminant, exact_region, in_region, in_s1, in_s2, lift_equivalence_check,
    matrix_m, psd_slice, scan, write_csv, ScanGrid, SlicePoint,
};

const EXIT_OUT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "conelab",
    version,
    about = "Membership oracles and slice analysis for operator-system cones"
)]
struct Cli {
    /// psd tolerance, relative to max(1, ‖H‖_F)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, env = "CONELAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 lets rayon decide
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Operand {
    /// Bipartite operator as JSON: {"d", "s", "mat": {"n", "entries"}}
    #[arg(long, conflicts_with = "slice")]
    input: Option<PathBuf>,
    /// Use M(a, b)
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    slice: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of an operator in a cone
    Membership {
        #[arg(long)]
        cone: ConeId,
        #[command(flatten)]
        operand: Operand,
    },
    /// Label every point of a grid over the (a, b) plane and write CSV
    Scan {
        #[arg(long, num_args = 6, value_names = ["AMIN", "AMAX", "BMIN", "BMAX", "NA", "NB"], allow_negative_numbers = true)]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Region data for a single slice point
    Slice {
        #[arg(allow_negative_numbers = true)]
        a: f64,
        #[arg(allow_negative_numbers = true)]
        b: f64,
    },
    /// Sampled free self-duality and Sep-Bpsd pairings
    DualityTest {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Kraus operators of the map with a given psd Choi matrix
    Kraus {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Decomp verdicts on M(a, b) and on its lift
    LiftCheck {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
        /// JSON list of [a, b] pairs
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Search for an element of C^max outside C^min
    Minmax {
        /// Polyhedral cone as JSON: {"dim", "rays", "dual_rays", "order_unit"}; defaults to the square cone
        #[arg(long)]
        cone: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Run the acceptance suite
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=CRITERIA as i64))]
        criterion: Option<u8>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<conelab::Error> for Failure {
    fn from(e: conelab::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn status_code(s: Status) -> u8 {
    match s {
        Status::In => 0,
        Status::Out => EXIT_OUT,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn emit(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::input(format!("cannot serialize output: {e}")))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::input(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, bytes),
        None => std::io::stdout().write_all(bytes),
    };
    res.map_err(|e| Failure::input(format!("cannot write output: {e}")))
}

fn operand(op: &Operand) -> Result<BipartiteOperator, Failure> {
    match (&op.input, &op.slice) {
        (Some(path), None) => read_json(path),
        (None, Some(ab)) => {
            let p = SlicePoint::new(ab[0], ab[1]);
            if !p.is_finite() {
                return Err(Failure::input("slice coordinates must be finite"));
            }
            Ok(matrix_m(p))
        }
        _ => Err(Failure::input("give exactly one of --input or --slice")),
    }
}

fn membership(cone: ConeId, op: &Operand, cfg: &ToleranceConfig) -> Outcome {
    let x = operand(op)?;
    let verdict = member(cone, &x, cfg)?;
    if verdict.status != Status::Inconclusive && !verify_certificate_with(&x, &verdict, cfg) {
        emit(&verdict)?;
        eprintln!("certificate failed independent verification");
        return Ok(EXIT_VERIFY);
    }
    emit(&verdict)?;
    Ok(status_code(verdict.status))
}

fn parse_grid(values: &[f64]) -> Result<ScanGrid, Failure> {
    let count = |v: f64, name: &str| {
        if v.fract() == 0.0 && (2.0..=1e6).contains(&v) {
            Ok(v as usize)
        } else {
            Err(Failure::input(format!(
                "{name} must be an integer >= 2, got {v}"
            )))
        }
    };
    let grid = ScanGrid {
        a_min: values[0],
        a_max: values[1],
        b_min: values[2],
        b_max: values[3],
        na: count(values[4], "NA")?,
        nb: count(values[5], "NB")?,
    };
    grid.validate()?;
    Ok(grid)
}

fn run_scan(grid: Option<&[f64]>, out: Option<&Path>, cfg: &ToleranceConfig) -> Outcome {
    let grid = match grid {
        Some(v) => parse_grid(v)?,
        None => ScanGrid::default(),
    };
    let rows = scan(&grid, cfg)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write_out(out, &buf)?;
    if let Some(path) = out {
        let count = |s: Status| rows.iter().filter(|r| r.decomp == s).count();
        emit(&json!({
            "out": path,
            "rows": rows.len(),
            "decomp_in": count(Status::In),
            "decomp_out": count(Status::Out),
            "decomp_inconclusive": count(Status::Inconclusive),
        }))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct SliceInfo {
    a: f64,
    b: f64,
    region: &'static str,
    in_s1: bool,
    in_s2: bool,
    psd: bool,
    discriminant: f64,
    boundary_margin: f64,
}

fn slice_info(a: f64, b: f64) -> Outcome {
    let p = SlicePoint::new(a, b);
    if !p.is_finite() {
        return Err(Failure::input("slice coordinates must be finite"));
    }
    emit(&SliceInfo {
        a,
        b,
        region: exact_region(p).code(),
        in_s1: in_s1(p),
        in_s2: in_s2(p),
        psd: psd_slice(p),
        discriminant: discriminant(p),
        boundary_margin: boundary_margin(p),
    })?;
    Ok(0)
}

fn duality_test(count: usize, seed: u64) -> Outcome {
    let mut sampler = Sampler::new(seed);
    let (mut self_dual_failures, mut sep_failures) = (0, 0);
    let mut min_eigenvalue = f64::INFINITY;
    let mut check = |b: &BipartiteOperator, a: &BipartiteOperator| -> Result<bool, Failure> {
        let p = pairing_bipartite(b, a)?;
        min_eigenvalue = min_eigenvalue.min(p.min_eigenvalue());
        Ok(p.is_psd(1e-9))
    };
    for _ in 0..count {
        let (d, s, t) = (
            1 + sampler.index(3),
            1 + sampler.index(3),
            1 + sampler.index(3),
        );
        let a = sampler.bipartite_psd(d, s);
        let b = sampler.bipartite_psd(d, t);
        let plain = check(&b, &a)?;
        let gamma = check(&b.partial_transpose(), &a.partial_transpose())?;
        self_dual_failures += !(plain && gamma) as usize;

        let p = loop {
            let q = SlicePoint::new(sampler.uniform(-5.0, 5.0), sampler.uniform(-1.0, 11.0));
            if in_region(q) {
                break q;
            }
        };
        let terms = 1 + sampler.index(4);
        let x = sampler.separable(2, 2, terms);
        sep_failures += !check(&matrix_m(p), &x)? as usize;
    }
    emit(&json!({
        "count": count,
        "self_duality_failures": self_dual_failures,
        "sep_bpsd_failures": sep_failures,
        "min_eigenvalue": min_eigenvalue,
    }))?;
    Ok(if self_dual_failures + sep_failures == 0 {
        0
    } else {
        EXIT_VERIFY
    })
}

fn kraus(input: &Path, out: Option<&Path>, cfg: &ToleranceConfig) -> Outcome {
    let c: BipartiteOperator = read_json(input)?;
    let ops = kraus_from_psd(&c, cfg.psd_tol)?;
    let wires: Vec<RectWire> = ops.iter().map(RectWire::from).collect();
    let value = json!({ "d": c.d(), "s": c.s(), "kraus": wires });
    let text = serde_json::to_string_pretty(&value)
        .map_err(|e| Failure::input(format!("cannot serialize output: {e}")))?;
    write_out(out, format!("{text}\n").as_bytes())?;
    Ok(0)
}

fn lift_check(d: usize, s: usize, points: Option<&Path>, cfg: &ToleranceConfig) -> Outcome {
    if d < 2 || s < 2 {
        return Err(Failure::input("lift targets need d >= 2 and s >= 2"));
    }
    let pairs: Vec<[f64; 2]> = match points {
        Some(path) => read_json(path)?,
        None => vec![[0.0, 1.0], [1.5, 0.3], [3.0, 0.0], [-3.0, 1.0]],
    };
    let points: Vec<SlicePoint> = pairs.iter().map(|&[a, b]| SlicePoint::new(a, b)).collect();
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Failure::input("slice coordinates must be finite"));
    }
    let report = lift_equivalence_check(&points, d, s, cfg)?;
    emit(&report)?;
    Ok(if report.passed { 0 } else { EXIT_VERIFY })
}

fn minmax(cone: Option<&Path>, count: usize, level: usize, cfg: &ToleranceConfig) -> Outcome {
    if level == 0 {
        return Err(Failure::input("level must be positive"));
    }
    let cone = match cone {
        Some(path) => read_json(path)?,
        None => PolyhedralCone::square(),
    };
    match search_minmax_gap(&cone, level, cfg.seed, count, cfg)? {
        Some(w) => {
            emit(&w)?;
            Ok(0)
        }
        None => {
            emit(&json!({ "attempts": count, "found": false }))?;
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn verify(criterion: Option<u8>, cfg: &ToleranceConfig) -> Outcome {
    let outcomes = match criterion {
        Some(id) => run_criterion(id as usize, cfg).into_iter().collect(),
        None => run_all(cfg),
    };
    for o in &outcomes {
        eprintln!("{o}");
    }
    emit(&outcomes)?;
    Ok(if outcomes.iter().all(|o| o.passed) {
        0
    } else {
        EXIT_VERIFY
    })
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = ToleranceConfig {
        seed: cli.seed,
        ..ToleranceConfig::default()
    };
    if let Some(tol) = cli.tol {
        cfg.psd_tol = tol;
    }
    cfg.validate()?;
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::input(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::Membership { cone, operand } => membership(cone, &operand, &cfg),
        Command::Scan { grid, out } => run_scan(grid.as_deref(), out.as_deref(), &cfg),
        Command::Slice { a, b } => slice_info(a, b),
        Command::DualityTest { count } => duality_test(count, cfg.seed),
        Command::Kraus { input, out } => kraus(&input, out.as_deref(), &cfg),
        Command::LiftCheck { d, s, points } => lift_check(d, s, points.as_deref(), &cfg),
        Command::Minmax { cone, count, level } => minmax(cone.as_deref(), count, level, &cfg),
        Command::Verify { criterion } => verify(criterion, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
