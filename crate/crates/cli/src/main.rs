//! `mukai-walls`: run lattice, wall and certificate computations from the shell.

mod plot;
mod report;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use mukai_core::cases::{build_case_a, build_case_b, Case};
use mukai_core::lattice::{enumerate_roots_in_box, project, MukaiVector, SurfaceParams};
use mukai_core::num::fmt_q;
use mukai_core::plane::{HalfInt, PlanePoint};
use mukai_core::region::Region;
use mukai_core::Error;

use plot::FigureKind;
use report::{check_report, classify, Disposition, Report, Status};
use verify::Context;

const USAGE_EXIT: u8 = 2;

#[derive(Parser)]
#[command(name = "mukai-walls", version, about = "Exact wall-crossing computations on Picard rank one K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List roots (classes of square -2) in a box, with their projections.
    Roots {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Keep roots projecting into the open rectangle X0,Y0,X1,Y1.
        #[arg(long, value_parser = parse_rect)]
        region: Option<[BigRational; 4]>,
    },
    /// Run a verification target and emit its certificate.
    Verify {
        target: Target,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Region index (integer or half-integer such as 13/2).
        #[arg(long, value_parser = parse_half)]
        n: Option<HalfInt>,
        #[arg(long, value_parser = parse_half)]
        m: Option<HalfInt>,
        #[arg(long, value_parser = parse_half)]
        eps: Option<HalfInt>,
        /// A Mukai vector R,C,S for the first-wall and h0 targets.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        vector: Option<MukaiVector>,
    },
    /// Render a figure.
    Plot {
        figure: FigureKind,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_parser = parse_half)]
        n: Option<HalfInt>,
    },
    /// Re-decide every claim of a stored JSON report.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(64..))]
        precision: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    URegion,
    CompositeRegion,
    CaseA,
    CaseB,
    FirstWall,
    H0,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::URegion => "u-region",
            Target::CompositeRegion => "composite-region",
            Target::CaseA => "case-a",
            Target::CaseB => "case-b",
            Target::FirstWall => "first-wall",
            Target::H0 => "h0",
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SurfaceArgs {
    /// Degree H^2 of the polarization (positive, even).
    #[arg(long)]
    h2: Option<i64>,
    /// Family A with rank R and parameter S (H^2 = 2RS).
    #[arg(long, num_args = 2, value_names = ["R", "S"])]
    case_a: Option<Vec<i64>>,
    /// Family B with odd P (H^2 = 2P).
    #[arg(long, value_name = "P")]
    case_b: Option<i64>,
}

#[derive(Args)]
struct RunArgs {
    /// Search bound for enumerations.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bounds: Option<u64>,
    /// Interval precision cap in bits.
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(64..))]
    precision: u32,
    /// Seed for randomized cross-checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON (default for roots and verify).
    #[arg(long, conflicts_with = "svg")]
    json: bool,
    /// Emit SVG (default for plot).
    #[arg(long)]
    svg: bool,
}

fn parse_q(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s}"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s}"))?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in {s}"));
            }
            Ok(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| format!("not a rational: {s}")),
    }
}

fn parse_half(s: &str) -> Result<HalfInt, String> {
    HalfInt::from_rational(&parse_q(s)?).map_err(|e| e.to_string())
}

fn parse_vector(s: &str) -> Result<MukaiVector, String> {
    let parts: Vec<BigInt> = s
        .split(',')
        .map(|p| p.trim().parse::<BigInt>().map_err(|_| format!("not an integer: {p}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [r, c, s] => Ok(MukaiVector::new(r.clone(), c.clone(), s.clone())),
        _ => Err("expected R,C,S".into()),
    }
}

fn parse_rect(s: &str) -> Result<[BigRational; 4], String> {
    let parts: Vec<BigRational> = s.split(',').map(parse_q).collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected X0,Y0,X1,Y1".to_string())
}

fn resolve(args: &SurfaceArgs) -> Result<(SurfaceParams, Option<Case>), Error> {
    if let Some(ra) = &args.case_a {
        let case: Case = build_case_a(ra[0], ra[1])?.into();
        return Ok((case.surface().clone(), Some(case)));
    }
    if let Some(p) = args.case_b {
        let case: Case = build_case_b(p)?.into();
        return Ok((case.surface().clone(), Some(case)));
    }
    let h2 = args.h2.expect("clap requires one surface option");
    Ok((SurfaceParams::new(h2)?, None))
}

fn surface_params(args: &SurfaceArgs, run: &RunArgs, map: &mut Map<String, Value>) {
    if let Some(ra) = &args.case_a {
        map.insert("case_a".into(), json!({ "r": ra[0], "s": ra[1] }));
    }
    if let Some(p) = args.case_b {
        map.insert("case_b".into(), json!({ "p": p }));
    }
    if let Some(h2) = args.h2 {
        map.insert("h2".into(), json!(h2));
    }
    if let Some(b) = run.bounds {
        map.insert("bounds".into(), json!(b));
    }
    map.insert("precision".into(), json!(run.precision));
    map.insert("seed".into(), json!(run.seed));
}

fn emit(out: Option<&Path>, text: &str) -> ExitCode {
    let res = match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}

fn emit_report(out: Option<&Path>, report: &Report) -> ExitCode {
    let text = serde_json::to_string_pretty(report).expect("serializable") + "\n";
    let code = emit(out, &text);
    if code != ExitCode::SUCCESS {
        return code;
    }
    report.status.exit_code()
}

fn usage_error(err: &impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(USAGE_EXIT)
}

fn run_roots(surface: SurfaceArgs, run: RunArgs, rect: Option<[BigRational; 4]>) -> ExitCode {
    let (surf, _) = match resolve(&surface) {
        Ok(x) => x,
        Err(e) => return usage_error(&e),
    };
    let bound = run.bounds.unwrap_or(3);
    let region = match &rect {
        None => Region::whole_plane(),
        Some([x0, y0, x1, y1]) => {
            match Region::rectangle(PlanePoint::new(x0.clone(), y0.clone()), PlanePoint::new(x1.clone(), y1.clone())) {
                Ok(r) => r,
                Err(e) => return usage_error(&e),
            }
        }
    };
    let roots = enumerate_roots_in_box(&surf, bound, bound, bound, &region);
    let list: Vec<Value> = roots
        .iter()
        .map(|v| {
            let proj = project(v).ok().map(|p| serde_json::to_value(p).expect("serializable"));
            json!({ "vector": v, "projection": proj })
        })
        .collect();
    let mut params = Map::new();
    surface_params(&surface, &run, &mut params);
    if let Some(r) = &rect {
        params.insert("region".into(), json!(r.iter().map(fmt_q).collect::<Vec<_>>()));
    }
    let result = json!({ "bound": bound, "count": list.len(), "roots": list });
    emit_report(run.out.as_deref(), &Report::new(surf.h2().to_string(), "roots", params, result, Vec::new()))
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    target: Target,
    surface: SurfaceArgs,
    run: RunArgs,
    n: Option<HalfInt>,
    m: Option<HalfInt>,
    eps: Option<HalfInt>,
    vector: Option<MukaiVector>,
) -> ExitCode {
    let (surf, case) = match resolve(&surface) {
        Ok(x) => x,
        Err(e) => return usage_error(&e),
    };
    let mut params = Map::new();
    params.insert("target".into(), json!(target.name()));
    surface_params(&surface, &run, &mut params);
    for (key, val) in [("n", n), ("m", m), ("eps", eps)] {
        if let Some(v) = val {
            params.insert(key.into(), json!(v.to_string()));
        }
    }
    if let Some(v) = &vector {
        params.insert("vector".into(), serde_json::to_value(v).expect("serializable"));
    }
    let h2 = surf.h2().to_string();
    let ctx = Context { surf, case, bounds: run.bounds, precision: run.precision, seed: run.seed, n, m, eps, vector };
    let outcome = match target {
        Target::URegion => verify::u_region(&ctx),
        Target::CompositeRegion => verify::composite_region(&ctx),
        Target::CaseA => verify::case_a(&ctx),
        Target::CaseB => verify::case_b(&ctx),
        Target::FirstWall => verify::first_wall(&ctx),
        Target::H0 => verify::h0(&ctx),
    };
    let command = format!("verify {}", target.name());
    let report = match outcome {
        Ok((result, claims)) => Report::new(h2, &command, params, result, claims),
        Err(e) => match classify(&e) {
            Disposition::Usage => return usage_error(&e),
            Disposition::Status(status) => Report::aborted(h2, &command, params, &e, status),
        },
    };
    emit_report(run.out.as_deref(), &report)
}

fn run_plot(figure: FigureKind, surface: SurfaceArgs, run: RunArgs, n: Option<HalfInt>) -> ExitCode {
    let (surf, case) = match resolve(&surface) {
        Ok(x) => x,
        Err(e) => return usage_error(&e),
    };
    let holes = run.bounds.unwrap_or(mukai_core::no_roots::DEFAULT_SCAN_BOUND);
    let fig = match (figure, &case) {
        (FigureKind::Regions, _) => plot::regions_figure(&surf, case.as_ref(), n, holes),
        (FigureKind::Walls, Some(c)) => plot::walls_figure(&surf, c, holes),
        (FigureKind::Polygon, Some(c)) => plot::polygon_figure(c),
        (_, None) => Err(Error::CaseParameter("this figure needs --case-a R S or --case-b P".into())),
    };
    let fig = match fig {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let text = if run.json {
        serde_json::to_string_pretty(&fig).expect("serializable") + "\n"
    } else {
        plot::render_svg(&fig)
    };
    emit(run.out.as_deref(), &text)
}

fn run_check(file: PathBuf, precision: u32) -> ExitCode {
    let text = match fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("{}: {e}", file.display())),
    };
    let report: Report = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(e) => return usage_error(&format!("{}: {e}", file.display())),
    };
    let summary = check_report(&report, precision);
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    if summary.recorded_status != Status::Ok && summary.claims == 0 {
        return ExitCode::from(1);
    }
    summary.exit_code()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE_EXIT) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Roots { surface, run, region } => run_roots(surface, run, region),
        Command::Verify { target, surface, run, n, m, eps, vector } => run_verify(target, surface, run, n, m, eps, vector),
        Command::Plot { figure, surface, run, n } => run_plot(figure, surface, run, n),
        Command::Check { file, precision } => run_check(file, precision),
    }
}
