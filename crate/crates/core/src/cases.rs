//! The two families of Brill-Noether examples: their classes, named points,
//! root-free regions, first walls and the section-count contradictions.
//!
//! Family A: `H² = 2rs` with `r ≥ 2`, `s ≥ max(r, 5)`, `v̄ = (r, 1, s)` and
//! `v = (0, r, 2rs − r²s)`.
//! Family B: `H² = 2p` with odd `p ≥ 13`, `v̄ = (4, 2, p)` and `v = (0, 4, 0)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::brill_noether::{chain_mass, h0_bound_polygon, polygon_mass, zbar, H0Bound, HNPolygon};
use crate::claims::{Claim, Relation};
use crate::error::{Error, Result};
use crate::lattice::{euler_char, project, square, MukaiVector, SurfaceParams};
use crate::no_roots::{certify_composite_region, CompositeRegionCertificate};
use crate::num::{q, qi};
use crate::plane::{line_intersection, ChargeValue, HalfInt, PlanePoint};
use crate::radical::{RadicalValue, DEFAULT_MAX_BITS, DEFAULT_PRECISION};
use crate::walls::{gieseker_first_wall, FirstWall, SearchBounds};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseAParams {
    pub r: i64,
    pub s: i64,
    pub genus: i64,
    pub surface: SurfaceParams,
    pub v: MukaiVector,
    pub vbar: MukaiVector,
    /// Class of the cone of the evaluation map of `v̄`.
    pub w_e: MukaiVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBParams {
    pub p: i64,
    pub genus: i64,
    pub surface: SurfaceParams,
    pub v: MukaiVector,
    pub vbar: MukaiVector,
    pub w_e: MukaiVector,
}

pub fn build_case_a(r: i64, s: i64) -> Result<CaseAParams> {
    if r < 2 {
        return Err(Error::CaseParameter(format!("r >= 2 fails: r = {r}")));
    }
    if s < r.max(5) {
        return Err(Error::CaseParameter(format!("s >= max(r, 5) fails: r = {r}, s = {s}")));
    }
    let surface = SurfaceParams::new(2 * r * s)?;
    let vbar = MukaiVector::new(r, 1, s);
    debug_assert!(square(&vbar, &surface).is_zero());
    Ok(CaseAParams {
        r,
        s,
        genus: r * s + 1,
        v: MukaiVector::new(0, r, 2 * r * s - r * r * s),
        w_e: MukaiVector::new(-s, 1, -r),
        vbar,
        surface,
    })
}

pub fn build_case_b(p: i64) -> Result<CaseBParams> {
    if p < 13 || p % 2 == 0 {
        return Err(Error::CaseParameter(format!("p odd and >= 13 fails: p = {p}")));
    }
    let surface = SurfaceParams::new(2 * p)?;
    let vbar = MukaiVector::new(4, 2, p);
    debug_assert!(square(&vbar, &surface).is_zero());
    Ok(CaseBParams {
        p,
        genus: p + 1,
        v: MukaiVector::new(0, 4, 0),
        w_e: MukaiVector::new(-p, 2, -4),
        vbar,
        surface,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Case {
    A(CaseAParams),
    B(CaseBParams),
}

impl Case {
    pub fn surface(&self) -> &SurfaceParams {
        match self {
            Case::A(c) => &c.surface,
            Case::B(c) => &c.surface,
        }
    }

    pub fn v(&self) -> &MukaiVector {
        match self {
            Case::A(c) => &c.v,
            Case::B(c) => &c.v,
        }
    }

    pub fn vbar(&self) -> &MukaiVector {
        match self {
            Case::A(c) => &c.vbar,
            Case::B(c) => &c.vbar,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Case::A(c) => format!("A(r={}, s={})", c.r, c.s),
            Case::B(c) => format!("B(p={})", c.p),
        }
    }

    /// `(m, n, ε)` for the composite root-free region.
    pub fn region_parameters(&self) -> (HalfInt, HalfInt, HalfInt) {
        match self {
            Case::A(c) => (
                HalfInt::from_int(c.r as u64).expect("positive"),
                HalfInt::from_int((c.s * (c.r - 1)) as u64).expect("positive"),
                HalfInt::from_int(1).expect("positive"),
            ),
            Case::B(c) => (
                HalfInt::from_int(2).expect("positive"),
                HalfInt::from_twice(c.p as u64).expect("positive"),
                HalfInt::from_twice(1).expect("positive"),
            ),
        }
    }

    /// The triangle `o, Z̄(v̄), Z̄(v)`.
    pub fn triangle(&self) -> HNPolygon {
        HNPolygon::new(vec![ChargeValue::from_ints(0, 0), zbar(self.vbar()), zbar(self.v())])
            .expect("case triangles are convex")
    }

    /// The polygon inside the triangle through the lattice points next to
    /// its first edge.
    pub fn inner_polygon(&self) -> HNPolygon {
        HNPolygon::new(self.inner_vertices()).expect("inner polygons are convex")
    }

    fn inner_vertices(&self) -> Vec<ChargeValue> {
        let mut pts = vec![ChargeValue::from_ints(0, 0)];
        match self {
            Case::A(c) => {
                let (r, s) = (c.r, c.s);
                pts.push(ChargeValue::from_ints(r - s + 1, 1));
                pts.push(ChargeValue::new(qi(s * (r - 2) + r) - q(r, r - 1), qi(2)));
            }
            Case::B(c) => {
                let p = c.p;
                pts.push(ChargeValue::new(q(4 - p, 2), qi(1)));
                pts.push(ChargeValue::from_ints(5 - p, 2));
                pts.push(ChargeValue::new(q(4 - p, 2), qi(3)));
            }
        }
        let end = zbar(self.v());
        if pts.last() != Some(&end) {
            pts.push(end);
        }
        pts
    }
}

fn pt(x: BigRational, y: BigRational) -> PlanePoint {
    PlanePoint::new(x, y)
}

fn meet(a1: &PlanePoint, a2: &PlanePoint, b1: &PlanePoint, b2: &PlanePoint) -> PlanePoint {
    line_intersection(a1, a2, b1, b2).expect("named lines are not parallel")
}

/// Labelled points used in the arguments and figures.
pub fn named_points(case: &Case) -> BTreeMap<String, PlanePoint> {
    let mut out = BTreeMap::new();
    let o = PlanePoint::origin();
    let y_axis = pt(qi(0), qi(1));
    out.insert("o".into(), o.clone());
    out.insert("o'".into(), y_axis.clone());
    let (m, n, eps) = case.region_parameters();
    let region = certify_composite_region(m, n, eps, case.surface()).expect("case regions are valid");
    out.insert("e".into(), region.ray_point_mirror.clone());
    out.insert("t".into(), region.vertical_point_mirror.clone());
    out.insert("gamma_m".into(), region.gamma_m.clone());
    out.insert("gamma_n".into(), region.gamma_n.clone());
    out.insert("gamma_-m".into(), region.gamma_m.mirrored());
    out.insert("gamma_-n".into(), region.gamma_n.mirrored());
    match case {
        Case::A(c) => {
            let (r, s) = (c.r, c.s);
            let qv = project(&c.vbar).expect("s > 0");
            let pv = project(&c.v.sub(&c.vbar)).expect("s(v - vbar) != 0");
            let qp = project(&c.w_e).expect("s(W_E) != 0");
            let b3 = if r > 2 { q(-(r - 2), r - 1) } else { q(-1, 3) };
            out.insert("o~".into(), meet(&pv, &qv, &o, &y_axis));
            out.insert("e'".into(), meet(&qp, &pv, &o, &pt(b3, qi(1))));
            out.insert("t'".into(), meet(&qp, &pv, &o, &pt(qi(1), qi(1 - s))));
            out.insert("p".into(), pv);
            out.insert("q".into(), qv);
            out.insert("q'".into(), qp);
        }
        Case::B(c) => {
            let p = c.p;
            let qv = project(&c.vbar).expect("p > 0");
            let sp = project(&c.w_e).expect("s(W_E) != 0");
            out.insert("s".into(), project(&c.v.sub(&c.vbar)).expect("s(v - vbar) != 0"));
            out.insert("o~".into(), pt(qi(0), q(4, p)));
            out.insert("t'".into(), meet(&sp, &qv, &o, &pt(qi(-2), qi(p + 1))));
            out.insert("q".into(), qv);
            out.insert("s'".into(), sp);
        }
    }
    out
}

/// The composite root-free region for the case's `(m, n, ε)`.
pub fn certify_case_regions(case: &Case) -> Result<CompositeRegionCertificate> {
    let (m, n, eps) = case.region_parameters();
    let cert = certify_composite_region(m, n, eps, case.surface())?;
    if !cert.holds() {
        return Err(Error::CertificateFailed(format!("cover checks for {}", case.label())));
    }
    Ok(cert)
}

/// Whether some root projects to a given rational point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootExclusion {
    /// With `L` the common denominator of the point, any root over it is
    /// `k·(L·y, L·x, L)` and has square `k²·residual`; `residual ≠ −2`
    /// rules it out.
    NoRoot {
        #[serde(with = "crate::num::serde_z")]
        denominator: BigInt,
        #[serde(with = "crate::num::serde_z")]
        residual: BigInt,
    },
    Root { root: MukaiVector },
}

impl RootExclusion {
    pub fn is_excluded(&self) -> bool {
        matches!(self, RootExclusion::NoRoot { .. })
    }
}

pub fn exclude_root_at_point(point: &PlanePoint, surf: &SurfaceParams) -> RootExclusion {
    let l = point.x.denom().lcm(point.y.denom());
    let a = (&point.x * BigRational::from_integer(l.clone())).to_integer();
    let b = (&point.y * BigRational::from_integer(l.clone())).to_integer();
    let residual = &a * &a * surf.h2() - BigInt::from(2) * &b * &l;
    if residual == BigInt::from(-2) {
        let root = MukaiVector::new(b, a, l);
        let root = if root.r.is_negative() { root.neg() } else { root };
        RootExclusion::Root { root }
    } else {
        RootExclusion::NoRoot { denominator: l, residual }
    }
}

/// Exact values behind the section-count contradiction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub case: String,
    /// Mass of the triangle.
    pub l: RadicalValue,
    /// Mass of the inner polygon.
    pub l_in: RadicalValue,
    /// Excess of the triangle bound over the expected section count.
    pub eps: RadicalValue,
    /// Lower bound on `(l − l_in) − 2ε` from enclosures.
    #[serde(with = "crate::num::serde_q")]
    pub margin: BigRational,
    pub claims: Vec<Claim>,
    pub verdict: Claim,
}

impl GapCertificate {
    pub fn all_claims(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().chain(std::iter::once(&self.verdict))
    }
}

fn sqrt_q(x: BigRational) -> RadicalValue {
    RadicalValue::sqrt_rational(&x).expect("non-negative radicand")
}

fn margin(lhs: &RadicalValue, rhs: &RadicalValue) -> BigRational {
    lhs.enclosure(DEFAULT_PRECISION).lower() - rhs.enclosure(DEFAULT_PRECISION).upper()
}

fn masses(case: &Case) -> (RadicalValue, RadicalValue, RadicalValue) {
    let surf = case.surface();
    let l = polygon_mass(&case.triangle(), surf);
    // Outside the families the inner chain need not be convex.
    let l_in = chain_mass(&case.inner_vertices(), surf);
    let (expected, chi) = match case {
        Case::A(c) => (qi(c.r + c.s), BigRational::from_integer(euler_char(&c.v))),
        Case::B(c) => (qi(c.p + 4), BigRational::from_integer(euler_char(&c.v))),
    };
    let half = q(1, 2);
    let eps = l.scale(&half).add_rational(&(chi * &half - expected));
    (l, l_in, eps)
}

/// The first factor of the lower bound on `l − l_in`, in its displayed form
/// `(s·r(r−1)² − 1.5r + 0.5)/(s·r(r−1)² + r)`.
pub fn case_a_f1(r: i64, s: i64) -> BigRational {
    let t = s * r * (r - 1) * (r - 1);
    (qi(t) - q(3 * r, 2) + q(1, 2)) / qi(t + r)
}

/// `(s − r − ½)/√(4rs + 4 + (r − s)²)`.
pub fn case_a_f2(r: i64, s: i64) -> RadicalValue {
    sqrt_q(qi((r + s) * (r + s) + 4))
        .recip()
        .expect("nonzero")
        .scale(&(qi(s - r) - q(1, 2)))
}

/// `(x − ½)/√(x² + 4rs + 4)` with `x = s(r−1) − r/(r−1)`: the edge from
/// `Z̄(v̄)` to the second inner vertex contributes at least this.
pub fn case_a_f1_edge(r: i64, s: i64) -> RadicalValue {
    let x = qi(s * (r - 1)) - q(r, r - 1);
    sqrt_q(&x * &x + qi(4 * r * s + 4))
        .recip()
        .expect("nonzero")
        .scale(&(x - q(1, 2)))
}

pub fn gap_certificate_a(case: &CaseAParams) -> Result<GapCertificate> {
    let (r, s) = (case.r, case.s);
    let wrapped = Case::A(case.clone());
    let (l, l_in, eps) = masses(&wrapped);
    let diff = l.sub(&l_in);
    let two_eps = eps.scale(&qi(2));
    let f1 = RadicalValue::rational(case_a_f1(r, s));
    let f2 = case_a_f2(r, s);
    let t = s * (r - 1) * (r - 1) + r;
    let closed = sqrt_q(qi((r + s) * (r + s) + 4))
        .add_rational(&qi(r + s))
        .recip()?
        .scale(&qi(4))
        .add(
            &sqrt_q(qi(t * t + 4 * (r - 1) * (r - 1)))
                .add_rational(&qi(t))
                .recip()?
                .scale(&qi(4 * (r - 1) * (r - 1))),
        );
    let mb = DEFAULT_MAX_BITS;
    let claims = vec![
        Claim::evaluate("f1 + f2 >= 0.69", f1.add(&f2), Relation::Ge, RadicalValue::rational(q(69, 100)), mb)?,
        Claim::evaluate("2eps <= 0.686", two_eps.clone(), Relation::Le, RadicalValue::rational(q(686, 1000)), mb)?,
        Claim::evaluate("2eps closed form", two_eps.clone(), Relation::Eq, closed, mb)?,
        Claim::evaluate("l - l_in >= 0.69", diff.clone(), Relation::Ge, RadicalValue::rational(q(69, 100)), mb)?,
        Claim::evaluate(
            "l - l_in >= f1_edge + f2",
            diff.clone(),
            Relation::Ge,
            case_a_f1_edge(r, s).add(&f2),
            mb,
        )?,
    ];
    for c in &claims {
        if !c.holds {
            return Err(Error::CertificateFailed(format!("{} at {}", c, wrapped.label())));
        }
    }
    let verdict = Claim::evaluate("l - l_in > 2eps", diff.clone(), Relation::Gt, two_eps.clone(), mb)?.require()?;
    Ok(GapCertificate {
        case: wrapped.label(),
        margin: margin(&diff, &two_eps),
        l,
        l_in,
        eps,
        claims,
        verdict,
    })
}

/// Family-B gap computation at any odd `p ≥ 3`, without requiring the
/// verdict to hold.
pub fn case_b_gap_raw(p: i64) -> Result<GapCertificate> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::CaseParameter(format!("p odd and >= 3 fails: p = {p}")));
    }
    let case = Case::B(CaseBParams {
        p,
        genus: p + 1,
        surface: SurfaceParams::new(2 * p)?,
        v: MukaiVector::new(0, 4, 0),
        vbar: MukaiVector::new(4, 2, p),
        w_e: MukaiVector::new(-p, 2, -4),
    });
    let (l, l_in, eps) = masses(&case);
    let diff = l.sub(&l_in);
    let two_eps = eps.scale(&qi(2));
    let outer = sqrt_q(qi((p + 4) * (p + 4) + 16));
    let inner = sqrt_q(qi((p + 2) * (p + 2) + 48));
    let diff_closed = outer.add(&inner).recip()?.scale(&qi(4 * (p - 5)));
    let eps_closed = outer.add_rational(&qi(p + 4)).recip()?.scale(&qi(32));
    let mb = DEFAULT_MAX_BITS;
    let claims = vec![
        Claim::evaluate("l closed form", l.clone(), Relation::Eq, outer.scale(&qi(2)), mb)?,
        Claim::evaluate("l - l_in closed form", diff.clone(), Relation::Eq, diff_closed, mb)?,
        Claim::evaluate("2eps closed form", two_eps.clone(), Relation::Eq, eps_closed, mb)?,
    ];
    for c in &claims {
        if !c.holds {
            return Err(Error::CertificateFailed(format!("{} at {}", c, case.label())));
        }
    }
    let verdict = Claim::evaluate("l - l_in > 2eps", diff.clone(), Relation::Gt, two_eps.clone(), mb)?;
    Ok(GapCertificate {
        case: case.label(),
        margin: margin(&diff, &two_eps),
        l,
        l_in,
        eps,
        claims,
        verdict,
    })
}

pub fn gap_certificate_b(case: &CaseBParams) -> Result<GapCertificate> {
    let cert = case_b_gap_raw(case.p)?;
    if !cert.verdict.holds {
        return Err(Error::CertificateFailed(cert.verdict.to_string()));
    }
    Ok(cert)
}

pub fn gap_certificate(case: &Case) -> Result<GapCertificate> {
    match case {
        Case::A(c) => gap_certificate_a(c),
        Case::B(c) => gap_certificate_b(c),
    }
}

/// The first wall of `v` together with the checks that pin it down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstWallCertificate {
    pub first_wall: FirstWall,
    /// `pr(v̄)`, which the wall passes through.
    pub through: PlanePoint,
    /// Candidate walls strictly below the first wall; always zero.
    pub candidates_below: usize,
}

pub fn verify_first_wall(case: &Case) -> Result<FirstWallCertificate> {
    let surf = case.surface();
    let vbar = case.vbar();
    if !square(vbar, surf).is_zero() {
        return Err(Error::WallMismatch(format!("{vbar} is not isotropic")));
    }
    let fw = gieseker_first_wall(case.v(), surf, SearchBounds::default_for(case.v(), surf))?;
    let through = project(vbar)?;
    if !fw.wall.line.contains(&through) {
        return Err(Error::WallMismatch(format!("wall {} misses {}", fw.wall.line, through)));
    }
    if fw.witnesses != vec![vbar.clone()] {
        let found: Vec<String> = fw.witnesses.iter().map(|w| w.to_string()).collect();
        return Err(Error::WallMismatch(format!("witnesses [{}], expected {vbar}", found.join(", "))));
    }
    let below = fw.candidates_below().len();
    if below != 0 {
        return Err(Error::WallMismatch(format!("{below} candidate walls below the first wall")));
    }
    Ok(FirstWallCertificate { first_wall: fw, through, candidates_below: below })
}

/// The triangle bound on sections, with its certified floor equal to `χ(v̄)`.
pub fn h0_ceiling(case: &Case) -> Result<H0Bound> {
    let bound = h0_bound_polygon(case.v(), &case.triangle(), case.surface())?;
    let expected = euler_char(case.vbar());
    if bound.floor_value() != &expected {
        return Err(Error::CertificateFailed(format!(
            "floor {} of the triangle bound differs from {expected}",
            bound.floor_value()
        )));
    }
    Ok(bound)
}

/// Grid of family-A parameters: `2 ≤ r ≤ s ≤ max_s`, `s ≥ 5`.
pub fn case_a_grid(max_s: i64) -> Vec<(i64, i64)> {
    (2..=max_s)
        .flat_map(|r| (r.max(5)..=max_s).map(move |s| (r, s)))
        .collect()
}

/// Odd `p` with `13 ≤ p ≤ max_p`.
pub fn case_b_grid(max_p: i64) -> Vec<i64> {
    (13..=max_p).step_by(2).collect()
}

impl From<CaseAParams> for Case {
    fn from(c: CaseAParams) -> Self {
        Case::A(c)
    }
}

impl From<CaseBParams> for Case {
    fn from(c: CaseBParams) -> Self {
        Case::B(c)
    }
}
