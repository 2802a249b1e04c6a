//! Rational regions of the projection plane.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SurfaceParams;
use crate::plane::{HalfInt, PlanePoint};

/// `a·x + b·y < d` (strict) or `≤ d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halfplane {
    #[serde(with = "crate::num::serde_q")]
    pub a: BigRational,
    #[serde(with = "crate::num::serde_q")]
    pub b: BigRational,
    #[serde(with = "crate::num::serde_q")]
    pub d: BigRational,
    pub strict: bool,
}

impl Halfplane {
    pub fn strict(a: BigRational, b: BigRational, d: BigRational) -> Self {
        Halfplane { a, b, d, strict: true }
    }

    pub fn contains(&self, pt: &PlanePoint) -> bool {
        let lhs = &self.a * &pt.x + &self.b * &pt.y;
        if self.strict {
            lhs < self.d
        } else {
            lhs <= self.d
        }
    }
}

/// Shapes are open; halfplane lists carry their own strictness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Rectangle { lo: PlanePoint, hi: PlanePoint },
    /// `{apex + s·dir1 + t·dir2 : s, t > 0}` with the two directions independent.
    Cone { apex: PlanePoint, dir1: PlanePoint, dir2: PlanePoint },
    Triangle { vertices: [PlanePoint; 3] },
    Halfplanes { halfplanes: Vec<Halfplane> },
    /// Open segment between two distinct points.
    Segment { from: PlanePoint, to: PlanePoint },
    Union { parts: Vec<Region> },
}

fn cross(o: &PlanePoint, a: &PlanePoint, b: &PlanePoint) -> BigRational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

impl Region {
    pub fn whole_plane() -> Self {
        Region::Halfplanes { halfplanes: Vec::new() }
    }

    pub fn rectangle(lo: PlanePoint, hi: PlanePoint) -> Result<Self> {
        if lo.x >= hi.x || lo.y >= hi.y {
            return Err(Error::DegenerateRegion(format!("rectangle [{lo}] to [{hi}]")));
        }
        Ok(Region::Rectangle { lo, hi })
    }

    pub fn cone(apex: PlanePoint, dir1: PlanePoint, dir2: PlanePoint) -> Result<Self> {
        if (&dir1.x * &dir2.y - &dir1.y * &dir2.x).is_zero() {
            return Err(Error::DegenerateRegion("cone with parallel rays".into()));
        }
        Ok(Region::Cone { apex, dir1, dir2 })
    }

    pub fn triangle(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> Result<Self> {
        if cross(&a, &b, &c).is_zero() {
            return Err(Error::DegenerateRegion("collinear triangle".into()));
        }
        Ok(Region::Triangle { vertices: [a, b, c] })
    }

    pub fn segment(from: PlanePoint, to: PlanePoint) -> Result<Self> {
        if from == to {
            return Err(Error::DegenerateRegion("zero-length segment".into()));
        }
        Ok(Region::Segment { from, to })
    }

    pub fn contains(&self, pt: &PlanePoint) -> bool {
        match self {
            Region::Rectangle { lo, hi } => lo.x < pt.x && pt.x < hi.x && lo.y < pt.y && pt.y < hi.y,
            Region::Cone { apex, dir1, dir2 } => {
                let v = PlanePoint::new(&pt.x - &apex.x, &pt.y - &apex.y);
                let det = &dir1.x * &dir2.y - &dir1.y * &dir2.x;
                // Coordinates of v in the basis (dir1, dir2), scaled by det.
                let s = &v.x * &dir2.y - &v.y * &dir2.x;
                let t = &dir1.x * &v.y - &dir1.y * &v.x;
                if det.is_positive() {
                    s.is_positive() && t.is_positive()
                } else {
                    s.is_negative() && t.is_negative()
                }
            }
            Region::Triangle { vertices: [a, b, c] } => {
                let orient = cross(a, b, c).signum();
                [cross(a, b, pt), cross(b, c, pt), cross(c, a, pt)]
                    .iter()
                    .all(|k| k.signum() == orient)
            }
            Region::Halfplanes { halfplanes } => halfplanes.iter().all(|h| h.contains(pt)),
            Region::Segment { from, to } => {
                if !cross(from, to, pt).is_zero() {
                    return false;
                }
                let d = PlanePoint::new(&to.x - &from.x, &to.y - &from.y);
                let dot = (&pt.x - &from.x) * &d.x + (&pt.y - &from.y) * &d.y;
                dot.is_positive() && dot < &d.x * &d.x + &d.y * &d.y
            }
            Region::Union { parts } => parts.iter().any(|p| p.contains(pt)),
        }
    }
}

/// `U_n = {0 < |x| < 1/n, (H²/2n)|x| < |y|}` as a union of four open
/// quadrant pieces.
pub fn make_u_region(n: HalfInt, surf: &SurfaceParams) -> Region {
    let n = n.to_rational();
    let zero = BigRational::zero();
    let k = surf.h2_q() / (BigRational::from_integer(2.into()) * &n);
    let mut parts = Vec::with_capacity(4);
    for sx in [1i64, -1] {
        for sy in [1i64, -1] {
            let sx_q = BigRational::from_integer(sx.into());
            let sy_q = BigRational::from_integer(sy.into());
            parts.push(Region::Halfplanes {
                halfplanes: vec![
                    Halfplane::strict(-&sx_q, zero.clone(), zero.clone()),
                    Halfplane::strict(sx_q.clone(), zero.clone(), n.recip()),
                    Halfplane::strict(&k * &sx_q, -sy_q, zero.clone()),
                ],
            });
        }
    }
    Region::Union { parts }
}
