//! The rank-three Mukai lattice of a K3 surface with Picard group generated
//! by an ample class `H`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::PlanePoint;
use crate::region::Region;

/// A polarised K3 surface reduced to the self-intersection `H²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceParams {
    #[serde(with = "crate::num::serde_z")]
    h2: BigInt,
}

impl SurfaceParams {
    pub fn new<T: Into<BigInt>>(h2: T) -> Result<Self> {
        let h2 = h2.into();
        if h2 < BigInt::from(2) || h2.is_odd() {
            return Err(Error::InvalidSurface(h2.to_string()));
        }
        Ok(SurfaceParams { h2 })
    }

    pub fn h2(&self) -> &BigInt {
        &self.h2
    }

    pub fn h2_q(&self) -> BigRational {
        BigRational::from_integer(self.h2.clone())
    }

    /// Genus of a smooth curve in `|H|`.
    pub fn genus(&self) -> BigInt {
        &self.h2 / 2 + 1
    }
}

/// The class `(r, cH, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MukaiVector {
    #[serde(with = "crate::num::serde_z")]
    pub r: BigInt,
    #[serde(with = "crate::num::serde_z")]
    pub c: BigInt,
    #[serde(with = "crate::num::serde_z")]
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new<A: Into<BigInt>, B: Into<BigInt>, C: Into<BigInt>>(r: A, c: B, s: C) -> Self {
        MukaiVector {
            r: r.into(),
            c: c.into(),
            s: s.into(),
        }
    }

    pub fn neg(&self) -> Self {
        MukaiVector {
            r: -&self.r,
            c: -&self.c,
            s: -&self.s,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        MukaiVector {
            r: &self.r + &other.r,
            c: &self.c + &other.c,
            s: &self.s + &other.s,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        MukaiVector {
            r: &self.r * k,
            c: &self.c * k,
            s: &self.s * k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.c.is_zero() && self.s.is_zero()
    }

    /// True when one class is a rational multiple of the other.
    pub fn is_proportional(&self, other: &Self) -> bool {
        &self.r * &other.c == &self.c * &other.r
            && &self.r * &other.s == &self.s * &other.r
            && &self.c * &other.s == &self.s * &other.c
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.c, self.s)
    }
}

/// `⟨a, b⟩ = c_a c_b H² − r_a s_b − r_b s_a`.
pub fn pairing(a: &MukaiVector, b: &MukaiVector, surf: &SurfaceParams) -> BigInt {
    &a.c * &b.c * surf.h2() - &a.r * &b.s - &b.r * &a.s
}

pub fn square(v: &MukaiVector, surf: &SurfaceParams) -> BigInt {
    pairing(v, v, surf)
}

pub fn is_root(v: &MukaiVector, surf: &SurfaceParams) -> bool {
    square(v, surf) == BigInt::from(-2)
}

/// `χ = r + s`.
pub fn euler_char(v: &MukaiVector) -> BigInt {
    &v.r + &v.s
}

/// Slope `c/r`, with rank-zero classes sent to `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Slope {
    Finite {
        #[serde(with = "crate::num::serde_q")]
        value: BigRational,
    },
    Infinite,
}

pub fn slope(v: &MukaiVector) -> Slope {
    if v.r.is_zero() {
        Slope::Infinite
    } else {
        Slope::Finite {
            value: BigRational::new(v.c.clone(), v.r.clone()),
        }
    }
}

/// `pr(r, cH, s) = (c/s, r/s)`.
pub fn project(v: &MukaiVector) -> Result<PlanePoint> {
    if v.s.is_zero() {
        return Err(Error::UndefinedProjection(v.to_string()));
    }
    Ok(PlanePoint::new(
        BigRational::new(v.c.clone(), v.s.clone()),
        BigRational::new(v.r.clone(), v.s.clone()),
    ))
}

/// All roots with `|r| ≤ bound_r`, `|c| ≤ bound_c`, `|s| ≤ bound_s` whose
/// projection lies in `region`, sorted lexicographically by `(r, c, s)`.
///
/// Iterates over `(r, c)` and solves `s = (c²H² + 2)/(2r)`. Rank-zero classes
/// never square to `−2`, and neither do classes with `s = 0`, so every root
/// has a projection.
pub fn enumerate_roots_in_box(
    surf: &SurfaceParams,
    bound_r: u64,
    bound_c: u64,
    bound_s: u64,
    region: &Region,
) -> Vec<MukaiVector> {
    let bs = BigInt::from(bound_s);
    let mut out = Vec::new();
    let (br, bc) = (bound_r as i64, bound_c as i64);
    for r in -br..=br {
        if r == 0 {
            continue;
        }
        let r = BigInt::from(r);
        for c in -bc..=bc {
            let c = BigInt::from(c);
            let num: BigInt = &c * &c * surf.h2() + 2;
            let den = BigInt::from(2) * &r;
            let (s, rem) = num.div_rem(&den);
            if !rem.is_zero() || s.abs() > bs {
                continue;
            }
            let v = MukaiVector::new(r.clone(), c, s);
            let pt = project(&v).expect("roots have s != 0");
            if region.contains(&pt) {
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;
    use proptest::prelude::*;

    fn surf(h2: i64) -> SurfaceParams {
        SurfaceParams::new(h2).unwrap()
    }

    fn mv(r: i64, c: i64, s: i64) -> MukaiVector {
        MukaiVector::new(r, c, s)
    }

    #[test]
    fn surface_rejects_odd_and_small() {
        assert!(SurfaceParams::new(0).is_err());
        assert!(SurfaceParams::new(3).is_err());
        assert!(SurfaceParams::new(-2).is_err());
        assert_eq!(surf(20).genus(), BigInt::from(11));
    }

    #[test]
    fn pairing_examples() {
        for h2 in [2, 4, 20, 26] {
            assert_eq!(square(&mv(1, 0, 1), &surf(h2)), BigInt::from(-2));
        }
        for (r, s) in [(2, 5), (3, 7), (5, 5)] {
            assert_eq!(square(&mv(r, 1, s), &surf(2 * r * s)), BigInt::from(0));
        }
        let p = 13;
        assert_eq!(square(&mv(4, 2, p), &surf(2 * p)), BigInt::from(0));
        assert_eq!(square(&mv(0, 4, 0), &surf(2 * p)), BigInt::from(32 * p));
        let n = 7;
        assert_eq!(square(&mv(1, 1, n + 1), &surf(2 * n)), BigInt::from(-2));
    }

    #[test]
    fn euler_and_slope() {
        assert_eq!(euler_char(&mv(1, 0, 1)), BigInt::from(2));
        assert_eq!(euler_char(&mv(4, 2, 13)), BigInt::from(17));
        assert_eq!(slope(&mv(0, 4, 0)), Slope::Infinite);
        assert_eq!(slope(&mv(3, 1, 5)), Slope::Finite { value: q(1, 3) });
        assert_eq!(slope(&mv(-3, 2, 7)), Slope::Finite { value: q(-2, 3) });
    }

    #[test]
    fn projection_examples() {
        let (r, s) = (3i64, 5i64);
        assert_eq!(project(&mv(r, 1, s)).unwrap(), PlanePoint::new(q(1, s), q(r, s)));
        // v − v̄ for case A
        let v = mv(0, r, 2 * r * s - r * r * s);
        let p = project(&v.sub(&mv(r, 1, s))).unwrap();
        assert_eq!(p, PlanePoint::new(q(-1, s * (r - 1)), q(r, s * (r - 1) * (r - 1))));
        let pp = 13;
        assert_eq!(project(&mv(-pp, 2, -4)).unwrap(), PlanePoint::new(q(-1, 2), q(pp, 4)));
        assert!(matches!(project(&mv(0, 4, 0)), Err(Error::UndefinedProjection(_))));
    }

    #[test]
    fn small_root_enumeration() {
        let roots = enumerate_roots_in_box(&surf(2), 3, 3, 3, &Region::whole_plane());
        assert!(roots.contains(&mv(1, 0, 1)));
        assert!(roots.contains(&mv(1, 1, 2)));
        assert!(roots.iter().all(|v| is_root(v, &surf(2))));
        let mut sorted = roots.clone();
        sorted.sort();
        assert_eq!(roots, sorted);
    }

    #[test]
    fn rectangle_around_isotropic_point_has_no_roots() {
        let eps = q(1, 100);
        let rect = Region::rectangle(
            PlanePoint::new(q(1, 5) - &eps, q(2, 5) - &eps),
            PlanePoint::new(q(1, 5) + &eps, q(2, 5) + &eps),
        )
        .unwrap();
        assert!(enumerate_roots_in_box(&surf(20), 6, 6, 6, &rect).is_empty());
    }

    proptest! {
        #[test]
        fn pairing_symmetric_and_bilinear(
            a in (-50i64..50, -50i64..50, -50i64..50),
            b in (-50i64..50, -50i64..50, -50i64..50),
            c in (-50i64..50, -50i64..50, -50i64..50),
            h in 1i64..30,
        ) {
            let s = surf(2 * h);
            let (a, b, c) = (mv(a.0, a.1, a.2), mv(b.0, b.1, b.2), mv(c.0, c.1, c.2));
            prop_assert_eq!(pairing(&a, &b, &s), pairing(&b, &a, &s));
            prop_assert_eq!(pairing(&a.add(&c), &b, &s), pairing(&a, &b, &s) + pairing(&c, &b, &s));
            let sq = &a.c * &a.c * s.h2() - BigInt::from(2) * &a.r * &a.s;
            prop_assert_eq!(square(&a, &s), sq);
        }
    }
}
