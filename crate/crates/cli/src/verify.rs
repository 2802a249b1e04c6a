//! Verification targets: each returns a JSON result and the claims backing it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mukai_core::brill_noether::{h0_bound_wall, H0Bound};
use mukai_core::cases::{
    certify_case_regions, exclude_root_at_point, gap_certificate_a, gap_certificate_b, h0_ceiling, named_points,
    verify_first_wall, Case, RootExclusion,
};
use mukai_core::claims::{Claim, Relation};
use mukai_core::lattice::{euler_char, project, square, MukaiVector, SurfaceParams};
use mukai_core::no_roots::{
    certify_composite_region, certify_no_roots_u, CompositeRegionCertificate, UBranch, URegionOutcome, DEFAULT_SCAN_BOUND,
};
use mukai_core::plane::HalfInt;
use mukai_core::radical::RadicalValue;
use mukai_core::region::make_u_region;
use mukai_core::walls::{gieseker_first_wall, SearchBounds};
use mukai_core::{Error, Result};

/// Resolved inputs shared by the targets.
pub struct Context {
    pub surf: SurfaceParams,
    pub case: Option<Case>,
    pub bounds: Option<u64>,
    pub precision: u32,
    pub seed: u64,
    pub n: Option<HalfInt>,
    pub m: Option<HalfInt>,
    pub eps: Option<HalfInt>,
    pub vector: Option<MukaiVector>,
}

pub type Outcome = (Value, Vec<Claim>);

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rat(x: BigRational) -> RadicalValue {
    RadicalValue::rational(x)
}

fn int<T: Into<BigInt>>(x: T) -> RadicalValue {
    RadicalValue::integer(x)
}

impl Context {
    fn claim(&self, label: impl Into<String>, lhs: RadicalValue, rel: Relation, rhs: RadicalValue) -> Result<Claim> {
        Claim::evaluate(label, lhs, rel, rhs, self.precision)
    }

    fn require_case(&self, what: &str) -> Result<&Case> {
        self.case
            .as_ref()
            .ok_or_else(|| Error::CaseParameter(format!("{what} needs --case-a R S or --case-b P")))
    }

    fn floor_claims(&self, what: &str, bound: &H0Bound) -> Result<Vec<Claim>> {
        let f = bound.floor_value().clone();
        Ok(vec![
            self.claim(format!("{what} >= {f}"), bound.value.clone(), Relation::Ge, int(f.clone()))?,
            self.claim(format!("{what} < {}", &f + 1), bound.value.clone(), Relation::Lt, int(&f + 1))?,
        ])
    }

    fn region_claims(&self, cert: &CompositeRegionCertificate) -> Result<Vec<Claim>> {
        let mut out = Vec::new();
        for c in &cert.cover {
            out.push(self.claim(
                format!("x_k < 1/(k + 1/2) at k = {}", c.k),
                rat(c.x_k.clone()),
                Relation::Lt,
                rat(c.limit.clone()),
            )?);
        }
        for u in &cert.u_regions {
            out.push(self.claim(
                format!("U_{}: 2n <= H^2", u.n),
                rat(u.n.to_rational() * BigRational::from_integer(2.into())),
                Relation::Le,
                int(u.h2.clone()),
            )?);
        }
        Ok(out)
    }

    fn exclusion_claim(&self, label: &str, ex: &RootExclusion) -> Result<Claim> {
        match ex {
            RootExclusion::NoRoot { residual, .. } => {
                let rel = if residual < &BigInt::from(-2) { Relation::Lt } else { Relation::Gt };
                self.claim(format!("no root over {label}: residual != -2"), int(residual.clone()), rel, int(-2))
            }
            RootExclusion::Root { root } => Err(Error::CertificateFailed(format!("root {root} projects to {label}"))),
        }
    }
}

pub fn u_region(ctx: &Context) -> Result<Outcome> {
    let h2 = ctx.surf.h2().clone();
    let bound = ctx.bounds.unwrap_or(DEFAULT_SCAN_BOUND);
    let indices: Vec<HalfInt> = match ctx.n {
        Some(n) => vec![n],
        None => {
            let top: u64 = h2.clone().try_into().map_err(|_| Error::InvalidSurface(h2.to_string()))?;
            (1..=top).map(|t| HalfInt::from_twice(t).expect("positive")).collect()
        }
    };
    let mut claims = Vec::new();
    let mut regions = Vec::new();
    let mut certified = Vec::new();
    for n in indices {
        let outcome = certify_no_roots_u(n, &ctx.surf, bound);
        match &outcome {
            URegionOutcome::Certified(c) => {
                let claim = match c.branch {
                    UBranch::BruteForce { bound } => ctx.claim(
                        format!("U_{n}: roots within bound {bound}"),
                        int(0),
                        Relation::Eq,
                        int(0),
                    )?,
                    _ => ctx.claim(
                        format!("U_{n}: 2n <= H^2"),
                        rat(n.to_rational() * BigRational::from_integer(2.into())),
                        Relation::Le,
                        int(h2.clone()),
                    )?,
                };
                claims.push(claim);
                certified.push(n);
            }
            URegionOutcome::Counterexample { roots, .. } => {
                claims.push(ctx.claim(
                    format!("U_{n}: roots within bound {bound}"),
                    int(roots.len() as u64),
                    Relation::Eq,
                    int(0),
                )?);
            }
        }
        regions.push(to_json(&outcome));
    }
    // Random roots must stay outside every certified region.
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let b = bound as i64;
    let (samples, mut roots_found, mut violations) = (4000u32, 0u32, 0u32);
    let u_sets: Vec<_> = certified.iter().map(|n| make_u_region(*n, &ctx.surf)).collect();
    for _ in 0..samples {
        let r: i64 = rng.gen_range(1..=b);
        let c: i64 = rng.gen_range(-b..=b);
        let num: BigInt = BigInt::from(c) * BigInt::from(c) * &h2 + 2;
        let den = BigInt::from(2 * r);
        if !(&num % &den).is_zero() {
            continue;
        }
        let root = MukaiVector::new(BigInt::from(r), BigInt::from(c), num / den);
        roots_found += 1;
        let pt = project(&root)?;
        if u_sets.iter().any(|u| u.contains(&pt)) {
            violations += 1;
        }
    }
    claims.push(ctx.claim("sampled roots inside certified regions", int(violations), Relation::Eq, int(0))?);
    let result = json!({
        "scan_bound": bound,
        "regions": regions,
        "spot_checks": { "seed": ctx.seed, "samples": samples, "roots_found": roots_found, "violations": violations },
    });
    Ok((result, claims))
}

pub fn composite_region(ctx: &Context) -> Result<Outcome> {
    let (m, n, eps) = match (&ctx.case, ctx.m, ctx.n, ctx.eps) {
        (_, Some(m), Some(n), Some(e)) => (m, n, e),
        (Some(case), None, None, None) => case.region_parameters(),
        _ => {
            return Err(Error::PreconditionViolation(vec![
                "give --m, --n and --eps, or a case".into(),
            ]))
        }
    };
    let cert = certify_composite_region(m, n, eps, &ctx.surf)?;
    let claims = ctx.region_claims(&cert)?;
    Ok((to_json(&cert), claims))
}

pub fn case_a(ctx: &Context) -> Result<Outcome> {
    let case = ctx.require_case("case-a")?;
    let Case::A(params) = case else {
        return Err(Error::CaseParameter("case-a needs --case-a R S".into()));
    };
    let gap = gap_certificate_a(params)?;
    let regions = certify_case_regions(case)?;
    let h0 = h0_ceiling(case)?;
    let mut claims: Vec<Claim> = gap.all_claims().cloned().collect();
    claims.extend(ctx.region_claims(&regions)?);
    claims.extend(ctx.floor_claims("triangle bound", &h0)?);
    claims.push(ctx.claim(
        "triangle floor = r + s",
        int(h0.floor_value().clone()),
        Relation::Eq,
        int(params.r + params.s),
    )?);
    let mut exclusion = Value::Null;
    if params.r == 2 {
        let t = named_points(case)["t"].clone();
        let ex = exclude_root_at_point(&t, &ctx.surf);
        claims.push(ctx.exclusion_claim("t", &ex)?);
        exclusion = json!({ "point": to_json(&t), "result": to_json(&ex) });
    }
    let result = json!({
        "case": to_json(case),
        "gap": to_json(&gap),
        "regions": to_json(&regions),
        "h0": to_json(&h0),
        "root_exclusion": exclusion,
    });
    Ok((result, claims))
}

pub fn case_b(ctx: &Context) -> Result<Outcome> {
    let case = ctx.require_case("case-b")?;
    let Case::B(params) = case else {
        return Err(Error::CaseParameter("case-b needs --case-b P".into()));
    };
    let gap = gap_certificate_b(params)?;
    let regions = certify_case_regions(case)?;
    let h0 = h0_ceiling(case)?;
    let mut claims: Vec<Claim> = gap.all_claims().cloned().collect();
    claims.extend(ctx.region_claims(&regions)?);
    claims.extend(ctx.floor_claims("triangle bound", &h0)?);
    claims.push(ctx.claim("triangle floor = p + 4", int(h0.floor_value().clone()), Relation::Eq, int(params.p + 4))?);
    let t = named_points(case)["t"].clone();
    let ex = exclude_root_at_point(&t, &ctx.surf);
    claims.push(ctx.exclusion_claim("t", &ex)?);
    let result = json!({
        "case": to_json(case),
        "gap": to_json(&gap),
        "regions": to_json(&regions),
        "h0": to_json(&h0),
        "root_exclusion": { "point": to_json(&t), "result": to_json(&ex) },
    });
    Ok((result, claims))
}

pub fn first_wall(ctx: &Context) -> Result<Outcome> {
    if let Some(case) = &ctx.case {
        let cert = verify_first_wall(case)?;
        let line = &cert.first_wall.wall.line;
        let through = &cert.through;
        let lhs = BigRational::from_integer(line.a.clone()) * &through.x + BigRational::from_integer(line.b.clone()) * &through.y;
        let claims = vec![
            ctx.claim("wall passes through pr(vbar)", rat(lhs), Relation::Eq, int(line.d.clone()))?,
            ctx.claim("vbar^2 = 0", int(square(case.vbar(), &ctx.surf)), Relation::Eq, int(0))?,
            ctx.claim("candidate walls below the first wall", int(cert.candidates_below as u64), Relation::Eq, int(0))?,
        ];
        return Ok((to_json(&cert), claims));
    }
    let v = ctx
        .vector
        .as_ref()
        .ok_or_else(|| Error::PreconditionViolation(vec!["first-wall needs a case or --vector".into()]))?;
    let bounds = ctx.bounds.map(SearchBounds::new).unwrap_or_else(|| SearchBounds::default_for(v, &ctx.surf));
    let fw = gieseker_first_wall(v, &ctx.surf, bounds)?;
    let claims = vec![ctx.claim(
        "candidate walls below the first wall",
        int(fw.candidates_below().len() as u64),
        Relation::Eq,
        int(0),
    )?];
    Ok((to_json(&fw), claims))
}

pub fn h0(ctx: &Context) -> Result<Outcome> {
    if let Some(case) = &ctx.case {
        let tri = h0_ceiling(case)?;
        let wall = h0_bound_wall(case.vbar(), &ctx.surf)?;
        let chi = euler_char(case.vbar());
        let mut claims = ctx.floor_claims("triangle bound", &tri)?;
        claims.extend(ctx.floor_claims("wall bound", &wall)?);
        claims.push(ctx.claim("triangle floor = chi(vbar)", int(tri.floor_value().clone()), Relation::Eq, int(chi.clone()))?);
        claims.push(ctx.claim("wall floor = chi(vbar)", int(wall.floor_value().clone()), Relation::Eq, int(chi))?);
        return Ok((json!({ "triangle": to_json(&tri), "wall": to_json(&wall) }), claims));
    }
    let v = ctx
        .vector
        .as_ref()
        .ok_or_else(|| Error::PreconditionViolation(vec!["h0 needs a case or --vector".into()]))?;
    let wall = h0_bound_wall(v, &ctx.surf)?;
    let claims = ctx.floor_claims("wall bound", &wall)?;
    Ok((json!({ "wall": to_json(&wall) }), claims))
}
