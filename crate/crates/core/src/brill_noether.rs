//! Upper bounds on global sections from the weighted norm of central charges.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{euler_char, MukaiVector, SurfaceParams};
use crate::plane::ChargeValue;
use crate::radical::{certified_floor, FloorCertificate, RadicalValue, DEFAULT_MAX_BITS};

/// `Z̄(v) = (r − s) + i·c`.
pub fn zbar(v: &MukaiVector) -> ChargeValue {
    ChargeValue::new(
        BigRational::from_integer(&v.r - &v.s),
        BigRational::from_integer(v.c.clone()),
    )
}

/// `√(re² + (2H² + 4)·im²)`.
pub fn bn_norm(re: &BigRational, im: &BigRational, surf: &SurfaceParams) -> RadicalValue {
    let weight = BigRational::from_integer(surf.h2() * BigInt::from(2) + 4);
    let radicand = re * re + weight * im * im;
    RadicalValue::sqrt_rational(&radicand).expect("non-negative radicand")
}

pub fn charge_norm(z: &ChargeValue, surf: &SurfaceParams) -> RadicalValue {
    bn_norm(&z.re, &z.im, surf)
}

/// An exact upper bound on `h⁰` with its certified floor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H0Bound {
    pub value: RadicalValue,
    pub floor: FloorCertificate,
}

impl H0Bound {
    fn from_value(value: RadicalValue) -> Result<Self> {
        let floor = certified_floor(&value, DEFAULT_MAX_BITS)?;
        Ok(H0Bound { value, floor })
    }

    pub fn floor_value(&self) -> &BigInt {
        &self.floor.floor
    }
}

/// `χ(v)/2 + ‖Z̄(v)‖/2`.
pub fn h0_bound_wall(v: &MukaiVector, surf: &SurfaceParams) -> Result<H0Bound> {
    let half = BigRational::new(1.into(), 2.into());
    let value = charge_norm(&zbar(v), surf)
        .scale(&half)
        .add_rational(&(BigRational::from_integer(euler_char(v)) * &half));
    H0Bound::from_value(value)
}

/// A convex chain of charges from the origin, imaginary parts strictly
/// increasing, every turn clockwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HNPolygon {
    vertices: Vec<ChargeValue>,
}

impl HNPolygon {
    pub fn new(vertices: Vec<ChargeValue>) -> Result<Self> {
        let fail = |why: &str| Err(Error::InvalidPolygon(why.to_string()));
        if vertices.len() < 2 {
            return fail("needs at least two vertices");
        }
        if !vertices[0].re.is_zero() || !vertices[0].im.is_zero() {
            return fail("must start at the origin");
        }
        let edges: Vec<ChargeValue> = vertices.windows(2).map(|w| w[1].sub(&w[0])).collect();
        if edges.iter().any(|e| !e.im.is_positive()) {
            return fail("imaginary parts must increase strictly");
        }
        if edges.windows(2).any(|e| !e[0].cross(&e[1]).is_negative()) {
            return fail("chain is not strictly convex");
        }
        Ok(HNPolygon { vertices })
    }

    pub fn vertices(&self) -> &[ChargeValue] {
        &self.vertices
    }

    pub fn last(&self) -> &ChargeValue {
        self.vertices.last().expect("at least two vertices")
    }

    pub fn edges(&self) -> impl Iterator<Item = ChargeValue> + '_ {
        self.vertices.windows(2).map(|w| w[1].sub(&w[0]))
    }
}

/// Sum of the weighted norms of the polygon's edges.
pub fn polygon_mass(poly: &HNPolygon, surf: &SurfaceParams) -> RadicalValue {
    chain_mass(poly.vertices(), surf)
}

/// Sum of the weighted norms along any chain of charges.
pub fn chain_mass(vertices: &[ChargeValue], surf: &SurfaceParams) -> RadicalValue {
    vertices
        .windows(2)
        .fold(RadicalValue::zero(), |acc, w| acc.add(&charge_norm(&w[1].sub(&w[0]), surf)))
}

/// `χ(v)/2 + mass/2` for a polygon ending at `Z̄(v)`.
pub fn h0_bound_polygon(v: &MukaiVector, poly: &HNPolygon, surf: &SurfaceParams) -> Result<H0Bound> {
    let end = zbar(v);
    if poly.last() != &end {
        return Err(Error::EndpointMismatch {
            expected: end.to_string(),
            found: poly.last().to_string(),
        });
    }
    let half = BigRational::new(1.into(), 2.into());
    let value = polygon_mass(poly, surf)
        .scale(&half)
        .add_rational(&(BigRational::from_integer(euler_char(v)) * &half));
    H0Bound::from_value(value)
}
