//! Wall lines, their segments inside the valid region, and finite searches
//! for destabilizing classes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_roots_in_box, project, square, MukaiVector, SurfaceParams};
use crate::no_roots::DEFAULT_SCAN_BOUND;
use crate::num::{ceil, floor, fmt_q, lcm_den};
use crate::plane::{
    central_charge, hole_segment, is_valid_stability_point, params_from_point, HoleSegment, PlanePoint,
};
use crate::radical::{compare_radicals, RadicalValue, DEFAULT_MAX_BITS};
use crate::region::Region;

/// `a·x + b·y = d` with coprime integer coefficients and the first nonzero
/// of `(a, b)` positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Line {
    #[serde(with = "crate::num::serde_z")]
    pub a: BigInt,
    #[serde(with = "crate::num::serde_z")]
    pub b: BigInt,
    #[serde(with = "crate::num::serde_z")]
    pub d: BigInt,
}

impl Line {
    /// Normalize `a·x + b·y = d` with rational coefficients.
    pub fn from_rational(a: &BigRational, b: &BigRational, d: &BigRational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateRegion("line with zero normal".into()));
        }
        let l = lcm_den([a, b, d]);
        let lq = BigRational::from_integer(l);
        let (mut a, mut b, mut d) = (
            (a * &lq).to_integer(),
            (b * &lq).to_integer(),
            (d * &lq).to_integer(),
        );
        let g = a.gcd(&b).gcd(&d);
        a /= &g;
        b /= &g;
        d /= &g;
        let lead = if a.is_zero() { &b } else { &a };
        if lead.is_negative() {
            a = -a;
            b = -b;
            d = -d;
        }
        Ok(Line { a, b, d })
    }

    pub fn through(p: &PlanePoint, q: &PlanePoint) -> Result<Self> {
        let dir = PlanePoint::new(&q.x - &p.x, &q.y - &p.y);
        Self::through_with_direction(p, &dir)
    }

    pub fn through_with_direction(p: &PlanePoint, dir: &PlanePoint) -> Result<Self> {
        let a = dir.y.clone();
        let b = -dir.x.clone();
        let d = &a * &p.x + &b * &p.y;
        Self::from_rational(&a, &b, &d)
    }

    pub fn horizontal(y: BigRational) -> Self {
        Self::from_rational(&BigRational::zero(), &BigRational::one(), &y).expect("nonzero normal")
    }

    pub fn vertical(x: BigRational) -> Self {
        Self::from_rational(&BigRational::one(), &BigRational::zero(), &x).expect("nonzero normal")
    }

    pub fn contains(&self, pt: &PlanePoint) -> bool {
        self.eval(pt).is_zero()
    }

    /// `a·x + b·y − d`.
    pub fn eval(&self, pt: &PlanePoint) -> BigRational {
        BigRational::from_integer(self.a.clone()) * &pt.x + BigRational::from_integer(self.b.clone()) * &pt.y
            - BigRational::from_integer(self.d.clone())
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    fn aq(&self) -> BigRational {
        BigRational::from_integer(self.a.clone())
    }

    fn bq(&self) -> BigRational {
        BigRational::from_integer(self.b.clone())
    }

    fn dq(&self) -> BigRational {
        BigRational::from_integer(self.d.clone())
    }

    /// Coordinate used to order points: `x`, or `y` on vertical lines.
    pub fn param(&self, pt: &PlanePoint) -> BigRational {
        if self.is_vertical() {
            pt.y.clone()
        } else {
            pt.x.clone()
        }
    }

    pub fn point_at(&self, t: &BigRational) -> PlanePoint {
        if self.is_vertical() {
            PlanePoint::new(self.dq() / self.aq(), t.clone())
        } else {
            PlanePoint::new(t.clone(), (self.dq() - self.aq() * t) / self.bq())
        }
    }

    /// Value at `x = 0` on a non-vertical line.
    pub fn y_intercept(&self) -> Option<BigRational> {
        (!self.is_vertical()).then(|| self.dq() / self.bq())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.d)
    }
}

/// An end of a wall segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentEnd {
    /// A rational point: on the parabola, or where a hole cuts the line.
    Point { point: PlanePoint },
    /// An irrational point of the parabola.
    Parabola { x: RadicalValue, y: RadicalValue },
    AtInfinity,
}

impl SegmentEnd {
    pub fn approx(&self) -> Option<(f64, f64)> {
        match self {
            SegmentEnd::Point { point } => Some((crate::num::to_f64(&point.x), crate::num::to_f64(&point.y))),
            SegmentEnd::Parabola { x, y } => Some((x.to_f64(), y.to_f64())),
            SegmentEnd::AtInfinity => None,
        }
    }

    pub fn as_point(&self) -> Option<&PlanePoint> {
        match self {
            SegmentEnd::Point { point } => Some(point),
            _ => None,
        }
    }
}

/// A wall: an open segment of a line, with a class producing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub line: Line,
    /// `(v₁, v − v₁)`.
    pub witness: (MukaiVector, MukaiVector),
    pub segment: (SegmentEnd, SegmentEnd),
}

/// The line along which `v` and `v1` have equal phase.
pub fn wall_line(v: &MukaiVector, v1: &MukaiVector, _surf: &SurfaceParams) -> Result<Line> {
    if v.is_proportional(v1) {
        return Err(Error::ProportionalClasses);
    }
    let dir = |u: &MukaiVector| {
        PlanePoint::new(
            BigRational::from_integer(u.c.clone()),
            BigRational::from_integer(u.r.clone()),
        )
    };
    match (v.s.is_zero(), v1.s.is_zero()) {
        (false, false) => Line::through(&project(v)?, &project(v1)?),
        (false, true) => Line::through_with_direction(&project(v)?, &dir(v1)),
        (true, false) => Line::through_with_direction(&project(v1)?, &dir(v)),
        (true, true) => Err(Error::UnderdeterminedWall),
    }
}

/// Sufficient test that the line `x = b₀·y` meets no wall for `v`:
/// `n·c − m·r = ±1` for `b₀ = m/n`. `false` is inconclusive.
pub fn no_wall_at_b(v: &MukaiVector, b0_num: &BigInt, b0_den: &BigInt) -> Result<bool> {
    if b0_den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let t = b0_den * &v.c - b0_num * &v.r;
    Ok(t.abs().is_one())
}

/// Bounds on the slopes of the extremal factors along a wall segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeWindow {
    #[serde(with = "crate::num::serde_q")]
    pub lower: BigRational,
    #[serde(with = "crate::num::serde_q")]
    pub upper: BigRational,
}

impl SlopeWindow {
    pub fn new(lower: BigRational, upper: BigRational) -> Result<Self> {
        if lower > upper {
            return Err(Error::EmptySlopeWindow {
                lower: fmt_q(&lower),
                upper: fmt_q(&upper),
            });
        }
        Ok(SlopeWindow { lower, upper })
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

/// Per-component bound on enumerated classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_abs: u64,
}

impl SearchBounds {
    pub fn new(max_abs: u64) -> Self {
        SearchBounds { max_abs }
    }

    /// `4·(|r| + |s| + c·H²)`.
    pub fn default_for(v: &MukaiVector, surf: &SurfaceParams) -> Self {
        let b: BigInt = (v.r.abs() + v.s.abs() + v.c.abs() * surf.h2()) * 4;
        SearchBounds { max_abs: b.to_u64().unwrap_or(u64::MAX).max(1) }
    }

    fn as_i64(&self) -> i64 {
        self.max_abs.min(i64::MAX as u64) as i64
    }
}

/// A closed interval of line parameters removed by a hole.
struct Cut {
    lo: BigRational,
    hi: Option<BigRational>,
}

fn hole_cut(line: &Line, hole: &HoleSegment) -> Option<Cut> {
    match hole {
        HoleSegment::VerticalRay { from } => {
            if line.is_vertical() {
                let x0 = line.dq() / line.aq();
                (x0 == from.x).then(|| Cut { lo: from.y.clone(), hi: None })
            } else {
                let y0 = line.y_intercept()?;
                (y0 >= from.y && from.x.is_zero()).then(|| Cut { lo: BigRational::zero(), hi: Some(BigRational::zero()) })
            }
        }
        HoleSegment::Segment { from, to } => {
            let fa = line.eval(from);
            let fb = line.eval(to);
            if fa.is_zero() && fb.is_zero() {
                let (p, q) = (line.param(from), line.param(to));
                let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
                return Some(Cut { lo, hi: Some(hi) });
            }
            if (fa.is_positive() && fb.is_positive()) || (fa.is_negative() && fb.is_negative()) {
                return None;
            }
            let t = &fa / (&fa - &fb);
            let p = line.param(&from.lerp(to, &t));
            Some(Cut { lo: p.clone(), hi: Some(p) })
        }
    }
}

/// Where a non-vertical line meets the parabola, as `(left, right)` x-values.
fn parabola_params(line: &Line, surf: &SurfaceParams) -> Result<(RadicalValue, RadicalValue)> {
    let h2 = surf.h2_q();
    let ab = line.aq() / line.bq();
    let db = line.dq() / line.bq();
    let disc = &ab * &ab + BigRational::from_integer(2.into()) * &h2 * &db;
    if !disc.is_positive() {
        return Err(Error::LineMissesRegion);
    }
    let root = RadicalValue::sqrt_rational(&disc)?;
    let centre = RadicalValue::rational(-&ab);
    let inv = h2.recip();
    Ok((centre.sub(&root).scale(&inv), centre.add(&root).scale(&inv)))
}

fn end_from_param(line: &Line, t: &RadicalValue) -> SegmentEnd {
    match t.as_rational() {
        Some(q) => SegmentEnd::Point { point: line.point_at(q) },
        None => {
            let y = t
                .scale(&-(line.aq() / line.bq()))
                .add_rational(&(line.dq() / line.bq()));
            SegmentEnd::Parabola { x: t.clone(), y }
        }
    }
}

fn less(a: &RadicalValue, b: &RadicalValue) -> Result<bool> {
    Ok(compare_radicals(a, b, DEFAULT_MAX_BITS)?.ordering == Ordering::Less)
}

/// Root holes that can cut lines in a bounded window.
pub fn holes_within(surf: &SurfaceParams, bound: u64) -> Vec<HoleSegment> {
    enumerate_roots_in_box(surf, bound, bound, bound, &Region::whole_plane())
        .into_iter()
        .filter(|d| d.r.is_positive())
        .map(|d| hole_segment(&d, surf).expect("enumerated roots are roots"))
        .collect()
}

/// The connected component of `line ∩ V(X)` containing `reference`, with
/// holes taken from `holes`.
pub fn wall_component(
    line: &Line,
    reference: &PlanePoint,
    surf: &SurfaceParams,
    holes: &[HoleSegment],
) -> Result<(SegmentEnd, SegmentEnd)> {
    if !line.contains(reference) || !is_valid_stability_point(reference, surf) {
        return Err(Error::InvalidReferencePoint(reference.to_string()));
    }
    let u0 = line.param(reference);
    let u0r = RadicalValue::rational(u0.clone());
    let (mut left, mut right): (RadicalValue, Option<RadicalValue>) = if line.is_vertical() {
        let x0 = line.dq() / line.aq();
        let floor_y = surf.h2_q() * &x0 * &x0 / BigRational::from_integer(2.into());
        (RadicalValue::rational(floor_y), None)
    } else {
        let (l, r) = parabola_params(line, surf)?;
        (l, Some(r))
    };
    for hole in holes {
        let Some(cut) = hole_cut(line, hole) else { continue };
        let below = cut.hi.as_ref().is_some_and(|hi| hi < &u0);
        let above = cut.lo > u0;
        if !below && !above {
            return Err(Error::InvalidReferencePoint(reference.to_string()));
        }
        if below {
            let hi = RadicalValue::rational(cut.hi.unwrap());
            if less(&left, &hi)? && less(&hi, &u0r)? {
                left = hi;
            }
        } else {
            let lo = RadicalValue::rational(cut.lo);
            let closer = match &right {
                Some(r) => less(&lo, r)?,
                None => true,
            };
            if closer {
                right = Some(lo);
            }
        }
    }
    let left_end = if line.is_vertical() {
        SegmentEnd::Point { point: line.point_at(left.as_rational().expect("rational floor")) }
    } else {
        end_from_param(line, &left)
    };
    let right_end = match right {
        None => SegmentEnd::AtInfinity,
        Some(r) if line.is_vertical() => SegmentEnd::Point { point: line.point_at(r.as_rational().expect("rational cut")) },
        Some(r) => end_from_param(line, &r),
    };
    Ok((left_end, right_end))
}

/// A rational point of `line ∩ V(X)`, if one is found near the top of the
/// line's arc above the parabola.
pub fn sample_point(line: &Line, surf: &SurfaceParams) -> Option<PlanePoint> {
    let h2 = surf.h2_q();
    let mut tries = Vec::new();
    if line.is_vertical() {
        let x0 = line.dq() / line.aq();
        let base = &h2 * &x0 * &x0 / BigRational::from_integer(2.into());
        for k in 1..40u32 {
            let step = BigRational::new(BigInt::one(), BigInt::one() << k);
            tries.push(PlanePoint::new(x0.clone(), &base + step));
        }
    } else {
        // Vertex of the arc: where y − (H²/2)x² is largest.
        let centre = -(line.aq() / (line.bq() * &h2));
        tries.push(line.point_at(&centre));
        for k in 1..40u32 {
            let step = BigRational::new(BigInt::one(), BigInt::one() << k) / &h2;
            tries.push(line.point_at(&(&centre + &step)));
            tries.push(line.point_at(&(&centre - &step)));
        }
    }
    tries.into_iter().find(|p| is_valid_stability_point(p, surf))
}

/// A rational point strictly inside the segment near `end`, moving toward
/// `toward`.
fn inner_point(line: &Line, end: &SegmentEnd, toward: &PlanePoint) -> Option<PlanePoint> {
    match end {
        SegmentEnd::Point { point } => Some(point.clone()),
        SegmentEnd::AtInfinity => None,
        SegmentEnd::Parabola { x, .. } => {
            let iv = x.enclosure(96);
            let t = if line.param(toward) > iv.upper() { iv.upper() } else { iv.lower() };
            Some(line.point_at(&t))
        }
    }
}

fn ratio(pt: &PlanePoint, line: &Line) -> Option<BigRational> {
    if pt.y.is_zero() {
        // The origin: a line through it has constant x/y.
        if line.b.is_zero() || line.a.is_zero() {
            return None;
        }
        return Some(-line.bq() / line.aq());
    }
    Some(&pt.x / &pt.y)
}

/// Slope bounds `(x₁/y₁, x₂/y₂)` from the ends of a wall segment.
pub fn window_from_segment(line: &Line, segment: &(SegmentEnd, SegmentEnd), inside: &PlanePoint) -> Result<SlopeWindow> {
    let a = inner_point(line, &segment.0, inside).and_then(|p| ratio(&p, line));
    let b = inner_point(line, &segment.1, inside).and_then(|p| ratio(&p, line));
    match (a, b) {
        (Some(a), Some(b)) => {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            SlopeWindow::new(lo, hi)
        }
        _ => Err(Error::DegenerateRegion("unbounded wall segment".into())),
    }
}

fn require_push_forward(v: &MukaiVector) -> Result<()> {
    if !v.r.is_zero() || !v.c.is_positive() {
        return Err(Error::NotPushForward(v.to_string()));
    }
    Ok(())
}

/// Numeric constraints on a torsion-free subobject `v1` of a push-forward
/// class `v`, with quotient `v − v1` whose degree-zero cohomology vanishes:
/// rank at least `c(v)`, slope of `v1` at least the window's upper end,
/// slope of the shifted quotient at most its lower end, and the
/// discriminant bounds on both sides (the quotient taken stable).
fn passes_numeric_chain(v: &MukaiVector, v1: &MukaiVector, window: &SlopeWindow, surf: &SurfaceParams) -> bool {
    let r1 = BigRational::from_integer(v1.r.clone());
    if v1.r < v.c {
        return false;
    }
    if BigRational::from_integer(v1.c.clone()) < &window.upper * &r1 {
        return false;
    }
    if BigRational::from_integer(&v1.c - &v.c) > &window.lower * &r1 {
        return false;
    }
    let v2 = v.sub(v1);
    let two = BigInt::from(2);
    square(v1, surf) >= -&two * &v1.c * &v1.c
        && square(&v2, surf) >= -&two * &v2.c * &v2.c
        && square(&v2, surf) >= -two
}

fn positive_imaginary(v: &MukaiVector, v1: &MukaiVector, at: &PlanePoint, surf: &SurfaceParams) -> Result<bool> {
    let sp = params_from_point(at, surf)?;
    let z1 = central_charge(v1, &sp, surf);
    let z2 = central_charge(&v.sub(v1), &sp, surf);
    Ok(z1.im.is_positive() && z2.im.is_positive())
}

/// Classes `v1` whose wall for the push-forward class `v` is `probe`, with
/// positive imaginary parts on both sides, slopes inside `window`, and both
/// discriminant bounds, sorted by class.
pub fn enumerate_destabilizer_candidates(
    v: &MukaiVector,
    probe: &Line,
    window: &SlopeWindow,
    surf: &SurfaceParams,
    bounds: SearchBounds,
) -> Result<Vec<(MukaiVector, Wall)>> {
    require_push_forward(v)?;
    SlopeWindow::new(window.lower.clone(), window.upper.clone())?;
    let sample = sample_point(probe, surf).ok_or(Error::LineMissesRegion)?;
    let holes = holes_within(surf, DEFAULT_SCAN_BOUND);
    let segment = wall_component(probe, &sample, surf, &holes)?;
    let b = bounds.as_i64();
    let c = v.c.to_i64().unwrap_or(i64::MAX);
    let mut out = Vec::new();
    for r1 in c..=b {
        let r1q = BigRational::from_integer(r1.into());
        let c_lo = ceil(&(&window.upper * &r1q)).to_i64().unwrap_or(i64::MAX).max(-b);
        let c_hi = floor(&(&window.lower * &r1q + BigRational::from_integer(v.c.clone())))
            .to_i64()
            .unwrap_or(i64::MIN)
            .min(b);
        for c1 in c_lo..=c_hi {
            for s1 in candidate_s(probe, r1, c1, b) {
                let v1 = MukaiVector::new(r1, c1, s1);
                if v1.is_proportional(v) || wall_line(v, &v1, surf).ok().as_ref() != Some(probe) {
                    continue;
                }
                if !positive_imaginary(v, &v1, &sample, surf)? || !passes_numeric_chain(v, &v1, window, surf) {
                    continue;
                }
                let wall = Wall {
                    line: probe.clone(),
                    witness: (v1.clone(), v.sub(&v1)),
                    segment: segment.clone(),
                };
                out.push((v1, wall));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Values of `s` placing `pr(r, c, s)` on the line, or giving it the line's
/// direction when `s = 0`.
fn candidate_s(line: &Line, r: i64, c: i64, bound: i64) -> Vec<i64> {
    let num = &line.a * BigInt::from(c) + &line.b * BigInt::from(r);
    let mut out = Vec::new();
    if line.d.is_zero() {
        if num.is_zero() {
            out.extend((-bound..=bound).filter(|s| *s != 0));
        }
    } else {
        let (s, rem) = num.div_rem(&line.d);
        if rem.is_zero() && !s.is_zero() {
            if let Some(s) = s.to_i64().filter(|s| s.abs() <= bound) {
                out.push(s);
            }
        }
    }
    if num.is_zero() {
        out.push(0);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Classes `(r₁, c₁, s₁)` with `0 < c₁ ≤ c(v)`, `r₁s₁ ≤ c₁²(H²/2 + 1)`, and
/// when `r₁s₁ ≤ 0` also `max(|r₁|, |s₁|) < 2|r(v)| + |s(v)|`.
pub fn enumerate_hn_factor_candidates(
    v: &MukaiVector,
    surf: &SurfaceParams,
    bounds: SearchBounds,
) -> Result<Vec<MukaiVector>> {
    if !v.c.is_positive() {
        return Err(Error::PreconditionViolation(vec![format!("c(v) > 0 fails for {v}")]));
    }
    let b = bounds.as_i64();
    let cmax = v.c.to_i64().unwrap_or(i64::MAX).min(b);
    let mixed: i64 = (BigInt::from(2) * v.r.abs() + v.s.abs()).to_i64().unwrap_or(i64::MAX);
    let half_h2: i64 = (surf.h2() / BigInt::from(2)).to_i64().unwrap_or(i64::MAX);
    let mut out = Vec::new();
    for c1 in 1..=cmax {
        let k = c1.saturating_mul(c1).saturating_mul(half_h2.saturating_add(1));
        // r₁s₁ > 0: both bounded by k.
        let top = k.min(b);
        for r1 in 1..=top {
            let smax = (k / r1).min(b);
            for s1 in 1..=smax {
                out.push(MukaiVector::new(r1, c1, s1));
                out.push(MukaiVector::new(-r1, c1, -s1));
            }
        }
        // r₁s₁ ≤ 0: both strictly below the mixed bound.
        let m = (mixed - 1).min(b);
        for r1 in -m..=m {
            for s1 in -m..=m {
                if r1.saturating_mul(s1) <= 0 {
                    out.push(MukaiVector::new(r1, c1, s1));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A candidate wall met by the vertical probe `x = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCandidate {
    pub class: MukaiVector,
    pub line: Line,
    pub crossing: PlanePoint,
    pub window: SlopeWindow,
}

/// The wall closest to the Gieseker chamber along `x = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstWall {
    pub wall: Wall,
    pub witnesses: Vec<MukaiVector>,
    pub crossing: PlanePoint,
    /// Every candidate met by the probe, sorted by crossing height.
    pub candidates: Vec<WallCandidate>,
}

impl FirstWall {
    /// Candidates crossing the probe strictly closer to the origin.
    pub fn candidates_below(&self) -> Vec<&WallCandidate> {
        self.candidates.iter().filter(|c| c.crossing.y < self.crossing.y).collect()
    }
}

/// Search the segment `(o, o′)` of the vertical line `x = 0` for walls of the
/// push-forward class `v` and return the lowest one, which bounds the
/// chamber containing points near the origin.
///
/// For each class the crossing height is solved from the equal-phase
/// condition at `b = 0`, the wall segment through the crossing yields the
/// slope window, and the numeric constraints of
/// [`enumerate_destabilizer_candidates`] are applied.
pub fn gieseker_first_wall(v: &MukaiVector, surf: &SurfaceParams, bounds: SearchBounds) -> Result<FirstWall> {
    require_push_forward(v)?;
    let holes = holes_within(surf, DEFAULT_SCAN_BOUND);
    let b = bounds.as_i64();
    let c = v.c.to_i64().unwrap_or(i64::MAX);
    let h2 = surf.h2().to_i64().unwrap_or(i64::MAX);
    let sv = v.s.to_i64().ok_or_else(|| Error::PreconditionViolation(vec!["s(v) too large".into()]))?;
    let mut candidates = Vec::new();
    let mut walls = Vec::new();
    // Im Z at b = 0 is c, so 0 < c₁ < c(v).
    for c1 in 1..c {
        for r1 in c..=b {
            // Crossing height y₀ = r₁c/(s₁c − s_v c₁) must lie in (0, 1).
            let s_lo: BigInt = floor(
                &(BigRational::from_integer(BigInt::from(r1)) + BigRational::new(BigInt::from(sv * c1), BigInt::from(c))),
            ) + 1;
            let cap1 = (c1 * c1 * (h2 + 2)).div_euclid(2 * r1);
            let cap2 = sv + ((c - c1) * (c - c1) * h2 + 2).div_euclid(2 * r1);
            let s_hi = cap1.min(cap2).min(b);
            let s_lo = s_lo.to_i64().unwrap_or(i64::MAX).max(-b);
            for s1 in s_lo..=s_hi {
                let v1 = MukaiVector::new(r1, c1, s1);
                if v1.is_proportional(v) {
                    continue;
                }
                let line = wall_line(v, &v1, surf)?;
                let Some(y0) = line.y_intercept() else { continue };
                let crossing = PlanePoint::new(BigRational::zero(), y0);
                if !is_valid_stability_point(&crossing, surf) || !positive_imaginary(v, &v1, &crossing, surf)? {
                    continue;
                }
                let segment = wall_component(&line, &crossing, surf, &holes)?;
                let window = window_from_segment(&line, &segment, &crossing)?;
                if !passes_numeric_chain(v, &v1, &window, surf) {
                    continue;
                }
                candidates.push(WallCandidate {
                    class: v1.clone(),
                    line: line.clone(),
                    crossing,
                    window,
                });
                walls.push(Wall {
                    line,
                    witness: (v1.clone(), v.sub(&v1)),
                    segment,
                });
            }
        }
    }
    let lowest = candidates
        .iter()
        .map(|c| c.crossing.y.clone())
        .min()
        .ok_or(Error::NoWallFound)?;
    let at_lowest: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i].crossing.y == lowest).collect();
    let line = candidates[at_lowest[0]].line.clone();
    if at_lowest.iter().any(|&i| candidates[i].line != line) {
        return Err(Error::ConflictingWitnesses(
            at_lowest.iter().map(|&i| candidates[i].class.to_string()).collect::<Vec<_>>().join(", "),
        ));
    }
    let mut witnesses: Vec<MukaiVector> = at_lowest.iter().map(|&i| candidates[i].class.clone()).collect();
    witnesses.sort();
    let primary = at_lowest
        .iter()
        .copied()
        .min_by(|&i, &j| candidates[i].class.cmp(&candidates[j].class))
        .expect("nonempty");
    let wall = walls[primary].clone();
    let crossing = candidates[primary].crossing.clone();
    candidates.sort_by(|a, b| a.crossing.y.cmp(&b.crossing.y).then_with(|| a.class.cmp(&b.class)));
    Ok(FirstWall { wall, witnesses, crossing, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};
    use crate::plane::compare_phase;

    fn surf(h2: i64) -> SurfaceParams {
        SurfaceParams::new(h2).unwrap()
    }

    fn mv(r: i64, c: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, c, s)
    }

    #[test]
    fn line_normalisation() {
        let l = Line::from_rational(&qi(-2), &qi(4), &qi(-6)).unwrap();
        assert_eq!((l.a, l.b, l.d), (BigInt::from(1), BigInt::from(-2), BigInt::from(3)));
        let h = Line::horizontal(q(4, 13));
        assert_eq!((h.a, h.b, h.d), (BigInt::from(0), BigInt::from(13), BigInt::from(4)));
        assert!(Line::from_rational(&qi(0), &qi(0), &qi(1)).is_err());
    }

    #[test]
    fn wall_line_examples() {
        let p = 13;
        let s = surf(2 * p);
        let l = wall_line(&mv(0, 4, 0), &mv(4, 2, p), &s).unwrap();
        assert_eq!(l, Line::horizontal(q(4, p)));
        assert!(l.contains(&PlanePoint::new(q(-2, p), q(4, p))));

        let (r, ss) = (3i64, 5i64);
        let s = surf(2 * r * ss);
        let v = mv(0, r, 2 * r * ss - r * r * ss);
        let l = wall_line(&v, &mv(r, 1, ss), &s).unwrap();
        assert!(l.contains(&PlanePoint::new(q(1, ss), q(r, ss))));
        assert!(l.contains(&PlanePoint::new(q(-1, ss * (r - 1)), q(r, ss * (r - 1) * (r - 1)))));
        assert_eq!(wall_line(&v, &v.scale(&BigInt::from(2)), &s), Err(Error::ProportionalClasses));
        assert_eq!(wall_line(&mv(1, 1, 0), &mv(2, 1, 0), &s), Err(Error::UnderdeterminedWall));
    }

    #[test]
    fn no_wall_examples() {
        let z = |n: i64| BigInt::from(n);
        assert!(no_wall_at_b(&mv(3, 1, 7), &z(0), &z(1)).unwrap());
        assert!(!no_wall_at_b(&mv(4, 2, 13), &z(0), &z(1)).unwrap());
        for p in [13i64, 15, 199] {
            assert!(no_wall_at_b(&mv(-p, 2, -4), &z(-1), &z((p + 1) / 2)).unwrap());
        }
        assert_eq!(no_wall_at_b(&mv(1, 0, 1), &z(1), &z(0)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn destabilizers_case_a_smallest() {
        let s = surf(20);
        let v = mv(0, 2, 0);
        let window = SlopeWindow::new(q(-1, 2), q(1, 2)).unwrap();
        let probe = Line::horizontal(q(2, 5));
        let found = enumerate_destabilizer_candidates(&v, &probe, &window, &s, SearchBounds::default_for(&v, &s)).unwrap();
        let classes: Vec<_> = found.iter().map(|(c, _)| c.clone()).collect();
        assert_eq!(classes, vec![mv(2, 1, 5)]);
        let wall = &found[0].1;
        assert_eq!(wall.segment.0.as_point(), Some(&PlanePoint::new(q(-1, 5), q(2, 5))));
        assert_eq!(wall.segment.1.as_point(), Some(&PlanePoint::new(q(1, 5), q(2, 5))));
    }

    #[test]
    fn destabilizers_case_b() {
        let p = 13;
        let s = surf(2 * p);
        let v = mv(0, 4, 0);
        let bounds = SearchBounds::default_for(&v, &s);
        let window = SlopeWindow::new(q(-1, 2), q(1, 2)).unwrap();
        let found = enumerate_destabilizer_candidates(&v, &Line::horizontal(q(4, p)), &window, &s, bounds).unwrap();
        assert_eq!(found.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(), vec![mv(4, 2, p)]);
        for y in [q(2, 7), q(4, 14), q(1, 5), q(3, 13)] {
            let probe = Line::horizontal(y);
            let pt = sample_point(&probe, &s).unwrap();
            let holes = holes_within(&s, 20);
            let seg = wall_component(&probe, &pt, &s, &holes).unwrap();
            let w = window_from_segment(&probe, &seg, &pt).unwrap();
            assert!(enumerate_destabilizer_candidates(&v, &probe, &w, &s, bounds).unwrap().is_empty());
            assert!(enumerate_destabilizer_candidates(&v, &probe, &window, &s, bounds).unwrap().is_empty());
        }
    }

    #[test]
    fn empty_window_rejected() {
        assert!(matches!(SlopeWindow::new(qi(1), qi(0)), Err(Error::EmptySlopeWindow { .. })));
    }

    #[test]
    fn component_of_horizontal_line() {
        let s = surf(20);
        let line = Line::horizontal(q(1, 2));
        let pt = PlanePoint::new(qi(0), q(1, 2));
        let seg = wall_component(&line, &pt, &s, &holes_within(&s, 20)).unwrap();
        // 10x² = 1/2 has irrational roots.
        assert!(matches!(seg.0, SegmentEnd::Parabola { .. }));
        let (x, _) = seg.1.approx().unwrap();
        assert!((x - (0.05f64).sqrt()).abs() < 1e-12);
        // A vertical line has an unbounded component, cut by the y-axis hole.
        let v = Line::vertical(qi(0));
        let seg = wall_component(&v, &PlanePoint::new(qi(0), q(1, 3)), &s, &holes_within(&s, 5)).unwrap();
        assert_eq!(seg.1.as_point(), Some(&PlanePoint::new(qi(0), qi(1))));
        assert_eq!(seg.0.as_point(), Some(&PlanePoint::origin()));
    }

    #[test]
    fn hole_cuts_line_through_root_ray() {
        // The line y = x meets the hole of (1,1,2) on H² = 2 along [1/2, 1].
        let s = surf(2);
        let line = Line::through(&PlanePoint::origin(), &PlanePoint::new(qi(1), qi(1))).unwrap();
        let seg = wall_component(&line, &PlanePoint::new(q(1, 3), q(1, 3)), &s, &holes_within(&s, 10)).unwrap();
        assert_eq!(seg.1.as_point(), Some(&PlanePoint::new(q(1, 2), q(1, 2))));
    }

    #[test]
    fn hn_candidates_include_isotropic_class() {
        let s = surf(20);
        let v = mv(0, 2, 0);
        let list = enumerate_hn_factor_candidates(&v, &s, SearchBounds::default_for(&v, &s)).unwrap();
        assert!(list.contains(&mv(2, 1, 5)));
        assert!(list.contains(&mv(-2, 1, -5)));
        // Independent count: box scan with the raw inequalities.
        let mut count = 0;
        for c1 in 1..=2i64 {
            for r1 in -300i64..=300 {
                for s1 in -300i64..=300 {
                    let ok13 = r1 * s1 <= c1 * c1 * 11;
                    let ok14 = r1 * s1 > 0 || r1.abs().max(s1.abs()) < 0;
                    if ok13 && ok14 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(list.len(), count);
        assert!(enumerate_hn_factor_candidates(&mv(1, 0, 1), &s, SearchBounds::new(10)).is_err());
    }

    #[test]
    fn first_wall_case_a_smallest() {
        let s = surf(20);
        let v = mv(0, 2, 0);
        let fw = gieseker_first_wall(&v, &s, SearchBounds::default_for(&v, &s)).unwrap();
        assert_eq!(fw.witnesses, vec![mv(2, 1, 5)]);
        assert_eq!(fw.wall.line, Line::horizontal(q(2, 5)));
        assert!(fw.candidates_below().is_empty());
        // Witnesses share a phase with v along their wall.
        for cand in &fw.candidates {
            let pt = &cand.crossing;
            let sp = params_from_point(pt, &s).unwrap();
            let z1 = central_charge(&cand.class, &sp, &s);
            let z = central_charge(&v, &sp, &s);
            assert_eq!(compare_phase(&z1, &z).unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn first_wall_requires_push_forward() {
        let s = surf(20);
        assert!(matches!(gieseker_first_wall(&mv(1, 2, 0), &s, SearchBounds::new(10)), Err(Error::NotPushForward(_))));
    }
}
