//! The `(b, w)` family of stability conditions, its central charges and the
//! projection of kernels into the `(x, y)` plane.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{is_root, project, MukaiVector, SurfaceParams};
use crate::num::fmt_q;

/// A point `σ_(b,w)`; `w` is kept as its square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityParams {
    #[serde(with = "crate::num::serde_q")]
    b: BigRational,
    #[serde(with = "crate::num::serde_q")]
    w2: BigRational,
}

impl StabilityParams {
    pub fn new(b: BigRational, w2: BigRational) -> Result<Self> {
        if !w2.is_positive() {
            return Err(Error::NonPositiveVolume(fmt_q(&w2)));
        }
        Ok(StabilityParams { b, w2 })
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn w2(&self) -> &BigRational {
        &self.w2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanePoint {
    #[serde(with = "crate::num::serde_q")]
    pub x: BigRational,
    #[serde(with = "crate::num::serde_q")]
    pub y: BigRational,
}

impl PlanePoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        PlanePoint { x, y }
    }

    pub fn origin() -> Self {
        PlanePoint::new(BigRational::zero(), BigRational::zero())
    }

    pub fn mirrored(&self) -> Self {
        PlanePoint::new(-&self.x, self.y.clone())
    }

    pub fn lerp(&self, other: &Self, t: &BigRational) -> Self {
        PlanePoint::new(
            &self.x + (&other.x - &self.x) * t,
            &self.y + (&other.y - &self.y) * t,
        )
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", fmt_q(&self.x), fmt_q(&self.y))
    }
}

/// A value of a central charge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChargeValue {
    #[serde(with = "crate::num::serde_q")]
    pub re: BigRational,
    #[serde(with = "crate::num::serde_q")]
    pub im: BigRational,
}

impl ChargeValue {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ChargeValue { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ChargeValue::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        ChargeValue::new(&self.re - &other.re, &self.im - &other.im)
    }

    /// `re₁·im₂ − im₁·re₂`; zero iff the two charges are real-proportional.
    pub fn cross(&self, other: &Self) -> BigRational {
        &self.re * &other.im - &self.im * &other.re
    }
}

impl fmt::Display for ChargeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", fmt_q(&self.re), fmt_q(&self.im))
    }
}

/// `Z_(b,w)(v) = bcH² − s − (H²/2) r (b² − w²) + i(c − br)`.
pub fn central_charge(v: &MukaiVector, sp: &StabilityParams, surf: &SurfaceParams) -> ChargeValue {
    let h2 = surf.h2_q();
    let r = BigRational::from_integer(v.r.clone());
    let c = BigRational::from_integer(v.c.clone());
    let s = BigRational::from_integer(v.s.clone());
    let b = &sp.b;
    let re = b * &c * &h2 - &s - &h2 / BigRational::from_integer(2.into()) * &r * (b * b - &sp.w2);
    let im = c - b * r;
    ChargeValue::new(re, im)
}

/// Order the phases of two charges in the closed upper half-plane minus the
/// origin. The negative real axis has phase one, the maximum.
pub fn compare_phase(z1: &ChargeValue, z2: &ChargeValue) -> Result<Ordering> {
    for z in [z1, z2] {
        if z.re.is_zero() && z.im.is_zero() {
            return Err(Error::DegenerateCharge);
        }
        if z.im.is_negative() || (z.im.is_zero() && z.re.is_positive()) {
            return Err(Error::OutsideUpperHalfPlane(z.to_string()));
        }
    }
    Ok(match (z1.im.is_zero(), z2.im.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        // Larger phase means smaller cotangent re/im.
        (false, false) => (&z2.re * &z1.im).cmp(&(&z1.re * &z2.im)),
    })
}

/// `k(b,w) = (2b/(H²(b²+w²)), 2/(H²(b²+w²)))`.
pub fn kernel_point(sp: &StabilityParams, surf: &SurfaceParams) -> PlanePoint {
    let d = surf.h2_q() * (&sp.b * &sp.b + &sp.w2);
    let two = BigRational::from_integer(2.into());
    PlanePoint::new(&two * &sp.b / &d, two / d)
}

/// True when `y > (H²/2)x²`.
pub fn above_parabola(pt: &PlanePoint, surf: &SurfaceParams) -> bool {
    let half = surf.h2_q() / BigRational::from_integer(2.into());
    pt.y > half * &pt.x * &pt.x
}

/// Inverse of [`kernel_point`]: `b = x/y`, `w² = 2/(H²y) − b²`.
pub fn params_from_point(pt: &PlanePoint, surf: &SurfaceParams) -> Result<StabilityParams> {
    if !pt.y.is_positive() || !above_parabola(pt, surf) {
        return Err(Error::BelowParabola(pt.to_string()));
    }
    let b = &pt.x / &pt.y;
    let w2 = BigRational::from_integer(2.into()) / (surf.h2_q() * &pt.y) - &b * &b;
    StabilityParams::new(b, w2)
}

/// The closed set removed from the region above the parabola by a root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HoleSegment {
    /// Closed segment from `pr(δ)` to the parabola.
    Segment { from: PlanePoint, to: PlanePoint },
    /// Closed vertical ray `{(0, y) : y ≥ from.y}`, unbounded above.
    VerticalRay { from: PlanePoint },
}

impl HoleSegment {
    pub fn contains(&self, pt: &PlanePoint) -> bool {
        match self {
            HoleSegment::VerticalRay { from } => pt.x == from.x && pt.y >= from.y,
            HoleSegment::Segment { from, to } => {
                let d = PlanePoint::new(&to.x - &from.x, &to.y - &from.y);
                let e = PlanePoint::new(&pt.x - &from.x, &pt.y - &from.y);
                if &d.x * &e.y != &d.y * &e.x {
                    return false;
                }
                let dot = &d.x * &e.x + &d.y * &e.y;
                let len = &d.x * &d.x + &d.y * &d.y;
                !dot.is_negative() && dot <= len
            }
        }
    }
}

/// `I_δ` for a root `δ` of positive rank.
pub fn hole_segment(delta: &MukaiVector, surf: &SurfaceParams) -> Result<HoleSegment> {
    if !is_root(delta, surf) {
        return Err(Error::NotARoot(delta.to_string()));
    }
    if !delta.r.is_positive() {
        return Err(Error::NonPositiveRank(delta.to_string()));
    }
    let from = project(delta)?;
    if delta.c.is_zero() {
        return Ok(HoleSegment::VerticalRay { from });
    }
    let h2 = surf.h2_q();
    let r = BigRational::from_integer(delta.r.clone());
    let c = BigRational::from_integer(delta.c.clone());
    let two = BigRational::from_integer(2.into());
    let to = PlanePoint::new(&two * &r / (&h2 * &c), two * &r * &r / (h2 * &c * &c));
    Ok(HoleSegment::Segment { from, to })
}

/// Membership in `V(X)`: strictly above the parabola and on no hole.
///
/// A point on a hole shares its ray from the origin with `pr(δ)`, so
/// `(c, r) = k·(c₀, r₀)` where `c₀/r₀ = x/y` in lowest terms; the hole's far
/// end bounds `k`, leaving finitely many candidates to test.
pub fn is_valid_stability_point(pt: &PlanePoint, surf: &SurfaceParams) -> bool {
    if !above_parabola(pt, surf) {
        return false;
    }
    if pt.x.is_zero() {
        return pt.y < BigRational::one();
    }
    let ratio = &pt.x / &pt.y;
    let (c0, r0) = (ratio.numer().clone(), ratio.denom().clone());
    let mu = &pt.y / BigRational::from_integer(r0.clone());
    // t_far = 2 r0 / (H² k c0²) ≥ mu bounds k from above.
    let h2 = surf.h2_q();
    let c0sq = BigRational::from_integer(&c0 * &c0);
    let kmax = crate::num::floor(
        &(BigRational::from_integer(BigInt::from(2) * &r0) / (&h2 * &c0sq * &mu)),
    );
    let mut k = BigInt::one();
    while k <= kmax {
        let r = &k * &r0;
        let c = &k * &c0;
        let num: BigInt = &c * &c * surf.h2() + 2;
        let (s, rem) = num.div_rem(&(BigInt::from(2) * &r));
        if rem.is_zero() {
            // Near end of the hole is pr(δ) = (k/s)(c0, r0).
            let t_near = BigRational::new(k.clone(), s);
            if t_near <= mu {
                return false;
            }
        }
        k += 1;
    }
    true
}

/// Intersection of the lines through `(a1, a2)` and `(b1, b2)`, if they are
/// not parallel.
pub fn line_intersection(
    a1: &PlanePoint,
    a2: &PlanePoint,
    b1: &PlanePoint,
    b2: &PlanePoint,
) -> Option<PlanePoint> {
    let da = PlanePoint::new(&a2.x - &a1.x, &a2.y - &a1.y);
    let db = PlanePoint::new(&b2.x - &b1.x, &b2.y - &b1.y);
    let den = &da.x * &db.y - &da.y * &db.x;
    if den.is_zero() {
        return None;
    }
    let w = PlanePoint::new(&b1.x - &a1.x, &b1.y - &a1.y);
    let t = (&w.x * &db.y - &w.y * &db.x) / den;
    Some(a1.lerp(a2, &t))
}

/// A positive half-integer stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    pub twice: u64,
}

impl HalfInt {
    pub fn from_twice(twice: u64) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidIndex("index must be positive".into()));
        }
        Ok(HalfInt { twice })
    }

    pub fn from_int(n: u64) -> Result<Self> {
        Self::from_twice(2 * n)
    }

    /// Accepts a positive rational with denominator 1 or 2.
    pub fn from_rational(x: &BigRational) -> Result<Self> {
        let doubled = x * BigRational::from_integer(2.into());
        if !doubled.is_integer() || !doubled.is_positive() {
            return Err(Error::InvalidIndex(fmt_q(x)));
        }
        use num_traits::ToPrimitive;
        let twice = doubled
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::InvalidIndex(fmt_q(x)))?;
        Self::from_twice(twice)
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_multiple_of(2)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `γ_n = (1/n, H²/(2n²))`, on the parabola.
pub fn gamma(n: &BigRational, surf: &SurfaceParams) -> PlanePoint {
    let x = n.recip();
    let y = surf.h2_q() / (BigRational::from_integer(2.into()) * n * n);
    PlanePoint::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};
    use proptest::prelude::*;

    fn surf(h2: i64) -> SurfaceParams {
        SurfaceParams::new(h2).unwrap()
    }

    fn sp(b: BigRational, w2: BigRational) -> StabilityParams {
        StabilityParams::new(b, w2).unwrap()
    }

    #[test]
    fn central_charge_examples() {
        for h2 in [2i64, 10, 26] {
            let z = central_charge(&MukaiVector::new(1, 0, 1), &sp(qi(0), q(2, h2)), &surf(h2));
            assert_eq!(z, ChargeValue::from_ints(0, 0));
        }
        let (r, s) = (3i64, 5i64);
        let v = MukaiVector::new(0, r, 2 * r * s - r * r * s);
        for w2 in [q(1, 7), qi(3)] {
            let z = central_charge(&v, &sp(qi(0), w2), &surf(2 * r * s));
            assert_eq!(z, ChargeValue::from_ints(r * r * s - 2 * r * s, r));
        }
        let p = 13;
        let z = central_charge(&MukaiVector::new(4, 2, p), &sp(qi(0), q(1, p)), &surf(2 * p));
        assert_eq!(z, ChargeValue::from_ints(4 - p, 2));
    }

    #[test]
    fn phase_examples() {
        let z = |a, b| ChargeValue::from_ints(a, b);
        assert_eq!(compare_phase(&z(-1, 0), &z(5, 1)).unwrap(), Ordering::Greater);
        assert_eq!(compare_phase(&z(0, 2), &z(3, 1)).unwrap(), Ordering::Greater);
        assert_eq!(compare_phase(&z(2, 1), &z(4, 2)).unwrap(), Ordering::Equal);
        assert_eq!(compare_phase(&z(-1, 0), &z(-7, 0)).unwrap(), Ordering::Equal);
        assert_eq!(compare_phase(&z(0, 0), &z(1, 1)), Err(Error::DegenerateCharge));
        assert!(matches!(compare_phase(&z(1, 0), &z(1, 1)), Err(Error::OutsideUpperHalfPlane(_))));
        assert!(matches!(compare_phase(&z(1, 1), &z(1, -1)), Err(Error::OutsideUpperHalfPlane(_))));
    }

    #[test]
    fn kernel_point_examples() {
        for h2 in [2i64, 20] {
            assert_eq!(kernel_point(&sp(qi(0), q(2, h2)), &surf(h2)), PlanePoint::new(qi(0), qi(1)));
        }
        assert_eq!(kernel_point(&sp(qi(1), qi(1)), &surf(2)), PlanePoint::new(q(1, 2), q(1, 2)));
        assert!(StabilityParams::new(qi(0), qi(0)).is_err());
    }

    #[test]
    fn params_from_point_examples() {
        let p = params_from_point(&PlanePoint::new(qi(0), qi(1)), &surf(2)).unwrap();
        assert_eq!((p.b().clone(), p.w2().clone()), (qi(0), qi(1)));
        let p = params_from_point(&PlanePoint::new(q(1, 2), q(1, 2)), &surf(2)).unwrap();
        assert_eq!((p.b().clone(), p.w2().clone()), (qi(1), qi(1)));
        assert!(params_from_point(&PlanePoint::new(qi(1), qi(1)), &surf(2)).is_err());
        assert!(params_from_point(&PlanePoint::new(qi(0), qi(-1)), &surf(2)).is_err());
    }

    #[test]
    fn hole_examples() {
        let h = hole_segment(&MukaiVector::new(1, 1, 2), &surf(2)).unwrap();
        assert_eq!(
            h,
            HoleSegment::Segment {
                from: PlanePoint::new(q(1, 2), q(1, 2)),
                to: PlanePoint::new(qi(1), qi(1)),
            }
        );
        assert_eq!(
            hole_segment(&MukaiVector::new(1, 0, 1), &surf(8)).unwrap(),
            HoleSegment::VerticalRay { from: PlanePoint::new(qi(0), qi(1)) }
        );
        if let HoleSegment::Segment { from, to } = hole_segment(&MukaiVector::new(2, 1, 1), &surf(2)).unwrap() {
            assert_eq!(&from.x * &to.y, &from.y * &to.x);
        } else {
            panic!("expected a segment");
        }
        assert!(matches!(hole_segment(&MukaiVector::new(2, 1, 5), &surf(20)), Err(Error::NotARoot(_))));
        assert!(matches!(hole_segment(&MukaiVector::new(-1, 0, -1), &surf(20)), Err(Error::NonPositiveRank(_))));
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_stability_point(&PlanePoint::new(qi(0), q(1, 2)), &surf(2)));
        for h2 in [2i64, 10, 40] {
            assert!(!is_valid_stability_point(&PlanePoint::new(qi(0), qi(1)), &surf(h2)));
            assert!(!is_valid_stability_point(&PlanePoint::new(qi(0), qi(3)), &surf(h2)));
        }
        assert!(!is_valid_stability_point(&PlanePoint::new(q(1, 2), q(1, 2)), &surf(2)));
        assert!(!is_valid_stability_point(&PlanePoint::new(q(3, 4), q(3, 4)), &surf(2)));
        assert!(!is_valid_stability_point(&PlanePoint::new(qi(1), qi(1)), &surf(2)));
        assert!(is_valid_stability_point(&PlanePoint::new(q(1, 3), q(1, 3)), &surf(2)));
    }

    #[test]
    fn half_int_round_trip() {
        let n = HalfInt::from_rational(&q(13, 2)).unwrap();
        assert_eq!(n.twice, 13);
        assert!(!n.is_integer());
        assert_eq!(n.to_rational(), q(13, 2));
        assert!(HalfInt::from_rational(&q(1, 3)).is_err());
        assert!(HalfInt::from_rational(&qi(0)).is_err());
    }

    fn small_q() -> impl Strategy<Value = BigRational> {
        (-60i64..60, 1i64..40).prop_map(|(n, d)| q(n, d))
    }

    fn pos_q() -> impl Strategy<Value = BigRational> {
        (1i64..60, 1i64..40).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn kernel_point_on_slope_line(b in small_q(), w2 in pos_q(), h in 1i64..25) {
            let s = surf(2 * h);
            let pt = kernel_point(&sp(b.clone(), w2.clone()), &s);
            prop_assert_eq!(&pt.x, &(&b * &pt.y));
            prop_assert!(pt.y.is_positive());
            prop_assert!(above_parabola(&pt, &s));
            let back = params_from_point(&pt, &s).unwrap();
            prop_assert_eq!(back.b(), &b);
            prop_assert_eq!(back.w2(), &w2);
        }

        #[test]
        fn kernel_point_descends_in_w(b in small_q(), w2 in pos_q(), dw in pos_q(), h in 1i64..25) {
            let s = surf(2 * h);
            let lo = kernel_point(&sp(b.clone(), w2.clone()), &s);
            let hi = kernel_point(&sp(b, w2 + dw), &s);
            prop_assert!(hi.y < lo.y);
        }

        #[test]
        fn phase_matches_float_cotangent(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let (z1, z2) = (ChargeValue::from_ints(a, b), ChargeValue::from_ints(c, d));
            let phi = |re: f64, im: f64| (std::f64::consts::FRAC_PI_2 - (re / im).atan()) / std::f64::consts::PI;
            let (p1, p2) = (phi(a as f64, b as f64), phi(c as f64, d as f64));
            let exact = compare_phase(&z1, &z2).unwrap();
            if (p1 - p2).abs() > 1e-9 {
                prop_assert_eq!(exact, p1.partial_cmp(&p2).unwrap());
            } else {
                prop_assert!(exact == Ordering::Equal || (p1 - p2).abs() < 1e-6);
            }
        }
    }
}
