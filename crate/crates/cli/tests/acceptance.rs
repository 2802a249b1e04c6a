//! Acceptance run: one PASS/FAIL line per criterion, executed in sequence so
//! the wall-clock limits are meaningful.

use std::cmp::Ordering;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mukai_core::brill_noether::h0_bound_polygon;
use mukai_core::cases::{
    build_case_a, build_case_b, case_a_f1, case_a_grid, case_b_gap_raw, case_b_grid, certify_case_regions,
    exclude_root_at_point, gap_certificate_a, gap_certificate_b, named_points, verify_first_wall, Case, RootExclusion,
};
use mukai_core::lattice::{enumerate_roots_in_box, pairing, project, square, MukaiVector, SurfaceParams};
use mukai_core::no_roots::{certify_no_roots_u, DEFAULT_SCAN_BOUND};
use mukai_core::plane::{
    compare_phase, hole_segment, kernel_point, params_from_point, ChargeValue, HalfInt, HoleSegment, PlanePoint,
    StabilityParams,
};
use mukai_core::radical::DEFAULT_MAX_BITS;
use mukai_core::region::{make_u_region, Region};

/// Float tolerance for the phase comparison away from ties.
const PHASE_TIE_GAP: f64 = 1e-9;
/// Required separation of the two sides of the family-B gap at p = 13.
const CASE_B_SEPARATION: (i64, i64) = (1, 100);
const SEED: u64 = 0;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn surf(h2: i64) -> SurfaceParams {
    SurfaceParams::new(h2).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_vector(rng: &mut ChaCha8Rng) -> MukaiVector {
    MukaiVector::new(rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50))
}

fn lattice_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10_000 {
        let s = surf(2 * rng.gen_range(1i64..=20));
        let (a, b, c) = (small_vector(&mut rng), small_vector(&mut rng), small_vector(&mut rng));
        let k = BigInt::from(rng.gen_range(-9i64..=9));
        ensure(pairing(&a, &b, &s) == pairing(&b, &a, &s), || format!("symmetry at {a}, {b}"))?;
        let lhs = pairing(&a.scale(&k).add(&b), &c, &s);
        let rhs = &k * pairing(&a, &c, &s) + pairing(&b, &c, &s);
        ensure(lhs == rhs, || format!("bilinearity at {a}, {b}, {c}"))?;
    }
    for h2 in (2..=40).step_by(2) {
        ensure(square(&MukaiVector::new(1, 0, 1), &surf(h2)) == BigInt::from(-2), || format!("(1,0,1) at H^2 = {h2}"))?;
    }
    let mut count = 0;
    for (r, s) in case_a_grid(20) {
        let case: Case = build_case_a(r, s).map_err(|e| e.to_string())?.into();
        ensure(square(case.vbar(), case.surface()).is_zero(), || format!("vbar^2 at A({r},{s})"))?;
        count += 1;
    }
    for p in case_b_grid(199) {
        let case: Case = build_case_b(p).map_err(|e| e.to_string())?.into();
        ensure(square(case.vbar(), case.surface()).is_zero(), || format!("vbar^2 at B({p})"))?;
        count += 1;
    }
    Ok(format!("10000 triples, 20 surfaces, {count} isotropic classes"))
}

fn root_oracle() -> Check {
    const MAX: i64 = 8;
    let mut boxes = 0;
    for h2 in [2i64, 10, 20, 26] {
        let s = surf(h2);
        let mut oracle = Vec::new();
        for r in -MAX..=MAX {
            for c in -MAX..=MAX {
                for t in -MAX..=MAX {
                    let v = MukaiVector::new(r, c, t);
                    if square(&v, &s) == BigInt::from(-2) {
                        oracle.push((r, c, t, v));
                    }
                }
            }
        }
        let rect = Region::rectangle(PlanePoint::new(q(-1, 2), qi(0)), PlanePoint::new(q(1, 2), qi(2))).unwrap();
        for br in 1..=MAX {
            for bc in 1..=MAX {
                for bs in 1..=MAX {
                    for region in [Region::whole_plane(), rect.clone()] {
                        let mut expected: Vec<MukaiVector> = oracle
                            .iter()
                            .filter(|(r, c, t, v)| {
                                r.abs() <= br
                                    && c.abs() <= bc
                                    && t.abs() <= bs
                                    && project(v).map(|p| region.contains(&p)).unwrap_or(false)
                            })
                            .map(|x| x.3.clone())
                            .collect();
                        expected.sort();
                        let got = enumerate_roots_in_box(&s, br as u64, bc as u64, bs as u64, &region);
                        ensure(got == expected, || format!("H^2 = {h2}, box ({br},{bc},{bs})"))?;
                        boxes += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{boxes} boxes"))
}

fn u_regions() -> Check {
    let mut n_checked = 0;
    for h2 in [10i64, 20, 26, 40] {
        let s = surf(h2);
        for twice in 1..=h2 as u64 {
            let n = HalfInt::from_twice(twice).unwrap();
            let outcome = certify_no_roots_u(n, &s, DEFAULT_SCAN_BOUND);
            ensure(outcome.certificate().is_some(), || format!("U_{n} at H^2 = {h2}: {outcome:?}"))?;
            let b = DEFAULT_SCAN_BOUND;
            let roots = enumerate_roots_in_box(&s, b, b, b, &make_u_region(n, &s));
            ensure(roots.is_empty(), || format!("U_{n} at H^2 = {h2} contains {}", roots[0]))?;
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} regions, scan bound {DEFAULT_SCAN_BOUND}"))
}

fn composite_regions() -> Check {
    let mut checks = 0;
    let cases: Vec<Case> = case_a_grid(20)
        .into_iter()
        .map(|(r, s)| build_case_a(r, s).unwrap().into())
        .chain(case_b_grid(199).into_iter().map(|p| build_case_b(p).unwrap().into()))
        .collect();
    for case in &cases {
        let (m, n, eps) = case.region_parameters();
        let expected = match case {
            Case::A(c) => (HalfInt::from_int(c.r as u64).unwrap(), HalfInt::from_int((c.s * (c.r - 1)) as u64).unwrap(), HalfInt::from_int(1).unwrap()),
            Case::B(c) => (HalfInt::from_int(2).unwrap(), HalfInt::from_twice(c.p as u64).unwrap(), HalfInt::from_twice(1).unwrap()),
        };
        ensure((m, n, eps) == expected, || format!("parameters at {}", case.label()))?;
        let cert = certify_case_regions(case).map_err(|e| format!("{}: {e}", case.label()))?;
        for c in &cert.cover {
            ensure(c.holds && c.x_k < c.limit, || format!("x_k at k = {} for {}", c.k, case.label()))?;
            checks += 1;
        }
    }
    Ok(format!("{} instantiations, {checks} exact cover checks", cases.len()))
}

fn bn_floor() -> Check {
    let mut count = 0;
    for (r, s) in case_a_grid(20) {
        let case: Case = build_case_a(r, s).unwrap().into();
        let b = h0_bound_polygon(case.v(), &case.triangle(), case.surface()).map_err(|e| e.to_string())?;
        ensure(b.floor_value() == &BigInt::from(r + s), || format!("A({r},{s}) floor {}", b.floor_value()))?;
        count += 1;
    }
    for p in case_b_grid(199) {
        let case: Case = build_case_b(p).unwrap().into();
        let b = h0_bound_polygon(case.v(), &case.triangle(), case.surface()).map_err(|e| e.to_string())?;
        ensure(b.floor_value() == &BigInt::from(p + 4), || format!("B({p}) floor {}", b.floor_value()))?;
        count += 1;
    }
    Ok(format!("{count} floors exact"))
}

fn case_a_gaps() -> Check {
    ensure(case_a_f1(2, 5) == q(75, 120), || format!("f1(2,5) = {}", case_a_f1(2, 5)))?;
    let mut count = 0;
    for (r, s) in case_a_grid(20) {
        let cert = gap_certificate_a(&build_case_a(r, s).unwrap()).map_err(|e| format!("A({r},{s}): {e}"))?;
        for label in ["f1 + f2 >= 0.69", "2eps <= 0.686", "l - l_in > 2eps"] {
            let claim = cert.all_claims().find(|c| c.label == label).ok_or_else(|| format!("missing {label}"))?;
            let rechecked = claim.recheck(DEFAULT_MAX_BITS).map_err(|e| e.to_string())?;
            ensure(claim.holds && rechecked, || format!("A({r},{s}): {claim}"))?;
        }
        count += 1;
    }
    Ok(format!("f1(2,5) = 15/24, {count} grid points certified"))
}

fn case_b_gaps() -> Check {
    let mut count = 0;
    for p in case_b_grid(199) {
        let cert = gap_certificate_b(&build_case_b(p).unwrap()).map_err(|e| format!("B({p}): {e}"))?;
        ensure(cert.verdict.recheck(DEFAULT_MAX_BITS) == Ok(true), || format!("B({p}) recheck"))?;
        count += 1;
    }
    let at13 = gap_certificate_b(&build_case_b(13).unwrap()).map_err(|e| e.to_string())?;
    let sep = q(CASE_B_SEPARATION.0, CASE_B_SEPARATION.1);
    ensure(at13.margin > sep, || format!("p = 13 margin {}", at13.margin))?;
    let control = case_b_gap_raw(5).map_err(|e| e.to_string())?;
    let reversed = !control.verdict.holds;
    ensure(reversed, || "p = 5 control unexpectedly satisfies the inequality".into())?;
    Ok(format!(
        "{count} values certified; margin at 13 = {:.4} > {:.2}; p = 5 control reversed (margin {:.4})",
        mukai_core::num::to_f64(&at13.margin),
        mukai_core::num::to_f64(&sep),
        mukai_core::num::to_f64(&control.margin)
    ))
}

fn first_walls() -> Check {
    let mut cases: Vec<Case> = [(2, 5), (2, 6), (3, 5), (3, 6)]
        .into_iter()
        .map(|(r, s)| build_case_a(r, s).unwrap().into())
        .collect();
    cases.extend([13, 15, 17].into_iter().map(|p| Case::from(build_case_b(p).unwrap())));
    for case in &cases {
        let cert = verify_first_wall(case).map_err(|e| format!("{}: {e}", case.label()))?;
        ensure(cert.first_wall.witnesses == vec![case.vbar().clone()], || format!("witness at {}", case.label()))?;
        ensure(cert.first_wall.wall.line.contains(&project(case.vbar()).unwrap()), || format!("line at {}", case.label()))?;
        ensure(cert.first_wall.candidates_below().is_empty(), || format!("candidates below at {}", case.label()))?;
    }
    Ok(format!("{} parameter sets", cases.len()))
}

fn random_q(rng: &mut ChaCha8Rng, positive: bool) -> BigRational {
    let n = if positive { rng.gen_range(1i64..=200) } else { rng.gen_range(-200i64..=200) };
    q(n, rng.gen_range(1i64..=60))
}

fn geometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10_000 {
        let s = surf(2 * rng.gen_range(1i64..=25));
        let (b, w2) = (random_q(&mut rng, false), random_q(&mut rng, true));
        let pt = kernel_point(&StabilityParams::new(b.clone(), w2.clone()).unwrap(), &s);
        ensure(pt.x == &b * &pt.y, || format!("kernel point off x = b y at b = {b}"))?;
        let back = params_from_point(&pt, &s).map_err(|e| e.to_string())?;
        ensure(back.b() == &b && back.w2() == &w2, || format!("round trip at b = {b}, w^2 = {w2}"))?;
    }
    let mut holes = 0;
    for h2 in [2i64, 10, 20, 26] {
        let s = surf(h2);
        for root in enumerate_roots_in_box(&s, 8, 8, 8, &Region::whole_plane()) {
            if !root.r.is_positive() {
                continue;
            }
            let near = project(&root).unwrap();
            match hole_segment(&root, &s).map_err(|e| e.to_string())? {
                HoleSegment::Segment { from, to } => {
                    ensure(from == near, || format!("hole start of {root}"))?;
                    ensure(to.y == s.h2_q() / qi(2) * &to.x * &to.x, || format!("hole end of {root} off parabola"))?;
                    ensure(to.y > near.y && &to.x * &near.y == &to.y * &near.x, || format!("hole end of {root}"))?;
                }
                HoleSegment::VerticalRay { from } => ensure(from == near, || format!("ray of {root}"))?,
            }
            holes += 1;
        }
    }
    let mut compared = 0;
    for _ in 0..10_000 {
        let (a, b, c, d) = (
            rng.gen_range(-1000i64..=1000),
            rng.gen_range(1i64..=1000),
            rng.gen_range(-1000i64..=1000),
            rng.gen_range(1i64..=1000),
        );
        let phi = |re: f64, im: f64| (std::f64::consts::FRAC_PI_2 - (re / im).atan()) / std::f64::consts::PI;
        let (p1, p2) = (phi(a as f64, b as f64), phi(c as f64, d as f64));
        if (p1 - p2).abs() <= PHASE_TIE_GAP {
            continue;
        }
        let exact = compare_phase(&ChargeValue::from_ints(a, b), &ChargeValue::from_ints(c, d)).map_err(|e| e.to_string())?;
        ensure(exact == p1.partial_cmp(&p2).unwrap_or(Ordering::Equal), || format!("phase at ({a},{b}) vs ({c},{d})"))?;
        compared += 1;
    }
    Ok(format!("10000 kernel points, {holes} holes, {compared} phase comparisons"))
}

fn root_exclusion() -> Check {
    // Closed forms of the candidate points, tied to the named points at the
    // ends of each range.
    let t_a = |s: i64| PlanePoint::new(q(-1, 3), q(s - 1, 3));
    let t_b = |p: i64| PlanePoint::new(q(-2, 5), q(p - 1, 5));
    for s in [5, 50] {
        ensure(named_points(&build_case_a(2, s).unwrap().into())["t"] == t_a(s), || format!("t at A(2,{s})"))?;
    }
    for p in [15, 199] {
        ensure(named_points(&build_case_b(p).unwrap().into())["t"] == t_b(p), || format!("t at B({p})"))?;
    }
    for s in 5..=50i64 {
        let ex = exclude_root_at_point(&t_a(s), &surf(4 * s));
        ensure(ex.is_excluded(), || format!("A(2,{s}): {ex:?}"))?;
    }
    let mut count = 0;
    for p in (15..=199i64).step_by(2) {
        let ex = exclude_root_at_point(&t_b(p), &surf(2 * p));
        ensure(ex.is_excluded(), || format!("B({p}): {ex:?}"))?;
        count += 1;
    }
    let control = exclude_root_at_point(&PlanePoint::new(qi(0), qi(1)), &surf(2));
    ensure(
        control == RootExclusion::Root { root: MukaiVector::new(1, 0, 1) },
        || format!("control gave {control:?}"),
    )?;
    Ok(format!("46 family-A points, {count} family-B points, control finds (1,0,1)"))
}

fn run(args: &[&str], out: Option<&Path>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mukai-walls"));
    cmd.args(args);
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().expect("binary runs");
    (o.status.code().unwrap_or(-1), o.stdout)
}

fn cli() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let codes = [
        (vec!["verify", "case-a", "--case-a", "2", "5"], 0),
        (vec!["verify", "case-b", "--case-b", "13"], 0),
        (vec!["verify", "case-a", "--case-a", "2", "4"], 2),
    ];
    for (args, want) in &codes {
        let (got, _) = run(args, None);
        ensure(got == *want, || format!("{} exited {got}, expected {want}", args.join(" ")))?;
    }
    for (name, args) in [("a.json", ["verify", "case-a", "--case-a", "2", "5"].as_slice()), ("b.json", &["verify", "case-b", "--case-b", "13"])] {
        let path = dir.path().join(name);
        let (code, _) = run(args, Some(&path));
        ensure(code == 0, || format!("{name} run exited {code}"))?;
        let (code, out) = run(&["check", path.to_str().unwrap()], None);
        let summary: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        ensure(code == 0 && summary["reproduced"] == true, || format!("check of {name}: {summary}"))?;
    }
    let (p1, p2) = (dir.path().join("w1.svg"), dir.path().join("w2.svg"));
    let args = ["plot", "walls", "--case-a", "2", "5"];
    ensure(run(&args, Some(&p1)).0 == 0 && run(&args, Some(&p2)).0 == 0, || "plot failed".into())?;
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    ensure(a == b, || "SVG differs between runs".into())?;
    let svg = String::from_utf8(a).map_err(|e| e.to_string())?;
    ensure(svg.contains(r#"<path id="parabola""#), || "no parabola path".into())?;
    ensure(
        svg.contains(r#"id="first-wall""#) && svg.contains(r#"data-p1="-1/5,2/5" data-p2="1/5,2/5""#),
        || "no wall segment through (1/5, 2/5)".into(),
    )?;
    Ok("exit codes 0/0/2, two reports reproduced, SVG stable".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("lattice suite", lattice_suite, 5),
        ("root oracle equivalence", root_oracle, 10),
        ("U_n certificates", u_regions, 30),
        ("composite region certificates", composite_regions, 10),
        ("Brill-Noether floors", bn_floor, 1),
        ("family A gap replay", case_a_gaps, 10),
        ("family B gap replay", case_b_gaps, 10),
        ("first-wall uniqueness", first_walls, 60),
        ("geometry invariants", geometry, 5),
        ("root exclusion points", root_exclusion, 1),
        ("command line", cli, 5),
    ];
    let mut failures = Vec::new();
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let within = took <= Duration::from_secs(*limit);
        let (verdict, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("criterion {:>2} {verdict}: {name} ({:.2}s / {limit}s) {detail}", i + 1, took.as_secs_f64());
        if verdict == "FAIL" {
            failures.push(i + 1);
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
