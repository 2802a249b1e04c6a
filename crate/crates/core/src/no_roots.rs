//! Certificates that certain plane regions contain no projected roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_roots_in_box, MukaiVector, SurfaceParams};
use crate::num::{ceil, fmt_q};
use crate::plane::{gamma, line_intersection, HalfInt, PlanePoint};
use crate::region::{make_u_region, Region};

/// Default per-coordinate bound for brute-force root scans.
pub const DEFAULT_SCAN_BOUND: u64 = 50;

/// How a `U_n` certificate was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UBranch {
    /// `n c` is an integer strictly inside `(|s| − 1/|r|, |s|)`, impossible.
    IntegerIndex,
    /// `n c ∈ ½ℤ` forces `|r| = 1`, then `H²|c| < 2n` forces `c = 0`.
    HalfIntegerIndex {
        #[serde(with = "crate::num::serde_z")]
        max_abs_c: BigInt,
    },
    /// `n > H²/2`: exhaustive scan found nothing within the bound.
    BruteForce { bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct URegionCertificate {
    pub n: HalfInt,
    #[serde(with = "crate::num::serde_z")]
    pub h2: BigInt,
    pub branch: UBranch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum URegionOutcome {
    Certified(URegionCertificate),
    Counterexample { n: HalfInt, bound: u64, roots: Vec<MukaiVector> },
}

impl URegionOutcome {
    pub fn certificate(&self) -> Option<&URegionCertificate> {
        match self {
            URegionOutcome::Certified(c) => Some(c),
            URegionOutcome::Counterexample { .. } => None,
        }
    }
}

/// Certify that no root projects into `U_n`.
///
/// For `n ≤ H²/2` a root in `U_n` would satisfy
/// `|s − 1/r| < n|c| < |s|` and `H²|c| < 2n|r|`. Writing `n c ∈ (1/d)ℤ` with
/// `d` the denominator of `n`, the open window of width at most `1/|r|` below
/// the integer `|s|` meets `(1/d)ℤ` only when `|r| < d`; each admissible rank
/// then bounds `|c|` below one. Larger `n` falls back to a scan with the
/// given bound.
pub fn certify_no_roots_u(n: HalfInt, surf: &SurfaceParams, scan_bound: u64) -> URegionOutcome {
    let two_n = BigInt::from(n.twice);
    if &two_n <= surf.h2() {
        let branch = if n.is_integer() {
            UBranch::IntegerIndex
        } else {
            // Only |r| = 1 is admissible; H²|c| < 2n.
            let max_abs_c: BigInt = ceil(&BigRational::new(two_n, surf.h2().clone())) - 1;
            debug_assert!(max_abs_c.is_zero());
            UBranch::HalfIntegerIndex { max_abs_c }
        };
        return URegionOutcome::Certified(URegionCertificate {
            n,
            h2: surf.h2().clone(),
            branch,
        });
    }
    let region = make_u_region(n, surf);
    let roots = enumerate_roots_in_box(surf, scan_bound, scan_bound, scan_bound, &region);
    if roots.is_empty() {
        URegionOutcome::Certified(URegionCertificate {
            n,
            h2: surf.h2().clone(),
            branch: UBranch::BruteForce { bound: scan_bound },
        })
    } else {
        URegionOutcome::Counterexample { n, bound: scan_bound, roots }
    }
}

/// One covering step: `x_k < 1/(k + ½)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCheck {
    pub k: HalfInt,
    #[serde(with = "crate::num::serde_q")]
    pub x_k: BigRational,
    #[serde(with = "crate::num::serde_q")]
    pub limit: BigRational,
    pub holds: bool,
}

/// The region bounded by the chord `γ_m γ_n`, the ray through `γ_{n−ε}` and
/// the vertical `x = 1/(m+ε)`, together with its mirror image, is covered by
/// root-free sets `U_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeRegionCertificate {
    pub m: HalfInt,
    pub n: HalfInt,
    pub eps: HalfInt,
    #[serde(with = "crate::num::serde_z")]
    pub h2: BigInt,
    pub gamma_m: PlanePoint,
    pub gamma_n: PlanePoint,
    /// Chord `γ_m γ_n` meets the ray `o γ_{n−ε}`.
    pub ray_point: PlanePoint,
    /// Chord `γ_m γ_n` meets `x = 1/(m+ε)`.
    pub vertical_point: PlanePoint,
    pub ray_point_mirror: PlanePoint,
    pub vertical_point_mirror: PlanePoint,
    pub cover: Vec<CoverCheck>,
    pub u_regions: Vec<URegionCertificate>,
}

impl CompositeRegionCertificate {
    pub fn holds(&self) -> bool {
        self.cover.iter().all(|c| c.holds)
    }

    /// Union of the certified `U_k`.
    pub fn cover_region(&self, surf: &SurfaceParams) -> Region {
        Region::Union {
            parts: self.u_regions.iter().map(|u| make_u_region(u.n, surf)).collect(),
        }
    }
}

/// `x_k = (1/(mn)) / (1/m + 1/n − 1/k)`, the abscissa where the chord
/// `γ_m γ_n` meets the ray `o γ_k`.
pub fn chord_ray_abscissa(m: &BigRational, n: &BigRational, k: &BigRational) -> BigRational {
    (m * n).recip() / (m.recip() + n.recip() - k.recip())
}

fn chord_height(m: &BigRational, n: &BigRational, x: &BigRational, surf: &SurfaceParams) -> BigRational {
    let half = surf.h2_q() / BigRational::from_integer(2.into());
    half * ((m.recip() + n.recip()) * x - (m * n).recip())
}

pub fn certify_composite_region(
    m: HalfInt,
    n: HalfInt,
    eps: HalfInt,
    surf: &SurfaceParams,
) -> Result<CompositeRegionCertificate> {
    let (mq, nq, eq) = (m.to_rational(), n.to_rational(), eps.to_rational());
    let half = BigRational::new(1.into(), 2.into());
    let h2 = surf.h2_q();
    let mut failed = Vec::new();
    if mq >= nq {
        failed.push(format!("m < n fails: m = {m}, n = {n}"));
    }
    if &eq + &half >= nq {
        failed.push(format!("eps + 1/2 < n fails: eps = {eps}, n = {n}"));
    }
    if nq > &h2 / BigRational::from_integer(2.into()) {
        failed.push(format!("n <= H^2/2 fails: n = {n}, H^2 = {}", surf.h2()));
    }
    let two_e = BigRational::from_integer(2.into()) * &eq;
    let rhs = &two_e / (&two_e + BigRational::one()) * &nq - &eq;
    if mq >= rhs {
        failed.push(format!(
            "m < (2 eps/(2 eps + 1)) n - eps fails: m = {m}, bound = {}",
            fmt_q(&rhs)
        ));
    }
    if !failed.is_empty() {
        return Err(Error::PreconditionViolation(failed));
    }

    let gamma_m = gamma(&mq, surf);
    let gamma_n = gamma(&nq, surf);
    let ray_end = gamma(&(&nq - &eq), surf);
    let ray_point = line_intersection(&gamma_m, &gamma_n, &PlanePoint::origin(), &ray_end)
        .expect("chord and ray are not parallel");
    let vx = (&mq + &eq).recip();
    let vertical_point = PlanePoint::new(vx.clone(), chord_height(&mq, &nq, &vx, surf));

    let mut cover = Vec::new();
    let mut k = m.twice + eps.twice;
    while k + eps.twice < n.twice {
        let kh = HalfInt::from_twice(k)?;
        let kq = kh.to_rational();
        let x_k = chord_ray_abscissa(&mq, &nq, &kq);
        let limit = (&kq + &half).recip();
        let holds = x_k.is_positive() && x_k < limit;
        cover.push(CoverCheck { k: kh, x_k, limit, holds });
        k += 1;
    }

    let mut u_regions = Vec::new();
    for twice in (m.twice + eps.twice)..=n.twice {
        match certify_no_roots_u(HalfInt::from_twice(twice)?, surf, DEFAULT_SCAN_BOUND) {
            URegionOutcome::Certified(c) => u_regions.push(c),
            URegionOutcome::Counterexample { roots, .. } => {
                return Err(Error::CertificateFailed(format!(
                    "U_{} contains root projections: {}",
                    HalfInt::from_twice(twice)?,
                    roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
                )))
            }
        }
    }

    Ok(CompositeRegionCertificate {
        m,
        n,
        eps,
        h2: surf.h2().clone(),
        ray_point_mirror: ray_point.mirrored(),
        vertical_point_mirror: vertical_point.mirrored(),
        gamma_m,
        gamma_n,
        ray_point,
        vertical_point,
        cover,
        u_regions,
    })
}
