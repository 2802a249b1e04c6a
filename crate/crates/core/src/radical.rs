//! Exact sums of square roots with certified dyadic enclosures.
//!
//! A value is `a + Σ qᵢ√dᵢ` with rational `a`, `qᵢ` and distinct squarefree
//! integers `dᵢ > 1`. Square roots of distinct squarefree integers are
//! linearly independent over ℚ, so zero-testing such a value is exact.
//! Square roots that cannot be denested are kept as a nested term
//! `k·√X` with `X` itself flat.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{exact_sqrt, fmt_q};

/// Initial enclosure precision in fractional bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Precision at which comparisons give up.
pub const DEFAULT_MAX_BITS: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadicalValue {
    rational: BigRational,
    terms: BTreeMap<BigInt, BigRational>,
    nested: Vec<(BigRational, RadicalValue)>,
}

/// Split `n > 0` as `k²·m` with `m` squarefree.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut rem = n.clone();
    let mut k = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p * &p <= rem {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            k *= &p;
        }
        if (&rem % &p).is_zero() {
            rem /= &p;
            m *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    // At most two prime factors remain, both above the cube root.
    match exact_sqrt(&rem) {
        Some(t) => k *= t,
        None => m *= rem,
    }
    (k, m)
}

/// Refine a list of integers > 1 into pairwise coprime factors.
fn coprime_base(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    xs.retain(|x| !x.is_one());
    xs.sort();
    xs.dedup();
    loop {
        let mut split = None;
        'outer: for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                let g = xs[i].gcd(&xs[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { return xs };
        let (a, b) = (&xs[i] / &g, &xs[j] / &g);
        xs.remove(j);
        xs.remove(i);
        xs.extend([a, b, g]);
        xs.retain(|x| !x.is_one());
        xs.sort();
        xs.dedup();
    }
}

impl RadicalValue {
    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn rational(q: BigRational) -> Self {
        RadicalValue {
            rational: q,
            terms: BTreeMap::new(),
            nested: Vec::new(),
        }
    }

    pub fn integer<T: Into<BigInt>>(n: T) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `q·√d` for an integer `d ≥ 0`.
    pub fn sqrt_term(q: BigRational, d: &BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::UnsupportedRadical(format!("sqrt of negative {d}")));
        }
        if d.is_zero() || q.is_zero() {
            return Ok(Self::zero());
        }
        let (k, m) = square_part(d);
        let coeff = q * BigRational::from_integer(k);
        if m.is_one() {
            return Ok(Self::rational(coeff));
        }
        let mut terms = BTreeMap::new();
        terms.insert(m, coeff);
        Ok(RadicalValue {
            rational: BigRational::zero(),
            terms,
            nested: Vec::new(),
        })
    }

    /// `√q` for a rational `q ≥ 0`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::UnsupportedRadical(format!("sqrt of negative {}", fmt_q(q))));
        }
        // √(n/d) = √(n·d)/d
        Self::sqrt_term(BigRational::new(BigInt::one(), q.denom().clone()), &(q.numer() * q.denom()))
    }

    pub fn is_flat(&self) -> bool {
        self.nested.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.terms.is_empty() && self.nested.is_empty()).then_some(&self.rational)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    /// `(radicand, coefficient)` pairs of the flat part.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &BigRational)> {
        self.terms.iter()
    }

    pub fn nested_terms(&self) -> &[(BigRational, RadicalValue)] {
        &self.nested
    }

    /// Number of radical terms, nested ones included.
    pub fn radical_count(&self) -> usize {
        self.terms.len() + self.nested.len()
    }

    /// Exact zero test; `None` when nested terms make it undecidable here.
    pub fn is_zero_exact(&self) -> Option<bool> {
        if self.nested.is_empty() {
            Some(self.rational.is_zero() && self.terms.is_empty())
        } else {
            None
        }
    }

    fn add_term(terms: &mut BTreeMap<BigInt, BigRational>, d: BigInt, q: BigRational) {
        let entry = terms.entry(d.clone()).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            terms.remove(&d);
        }
    }

    fn add_nested(nested: &mut Vec<(BigRational, RadicalValue)>, q: BigRational, x: RadicalValue) {
        if let Some(slot) = nested.iter_mut().find(|(_, y)| *y == x) {
            slot.0 += q;
        } else {
            nested.push((q, x));
        }
        nested.retain(|(k, _)| !k.is_zero());
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (d, q) in &other.terms {
            Self::add_term(&mut out.terms, d.clone(), q.clone());
        }
        for (k, x) in &other.nested {
            Self::add_nested(&mut out.nested, k.clone(), x.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadicalValue {
            rational: &self.rational * q,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * q)).collect(),
            nested: self.nested.iter().map(|(k, x)| (k * q, x.clone())).collect(),
        }
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        let mut out = self.clone();
        out.rational += q;
        out
    }

    /// Product of two values; at most one side may carry nested terms, and
    /// then only if the other side is rational.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        if !self.is_flat() || !other.is_flat() {
            return Err(Error::UnsupportedRadical("product involving nested radicals".into()));
        }
        let mut out = Self::rational(&self.rational * &other.rational);
        for (d, q) in &other.terms {
            Self::add_term(&mut out.terms, d.clone(), &self.rational * q);
        }
        for (d, q) in &self.terms {
            Self::add_term(&mut out.terms, d.clone(), &other.rational * q);
        }
        for (d1, q1) in &self.terms {
            for (d2, q2) in &other.terms {
                // √d1·√d2 = g·√((d1/g)(d2/g)) for squarefree d1, d2.
                let g = d1.gcd(d2);
                let m = (d1 / &g) * (d2 / &g);
                let coeff = q1 * q2 * BigRational::from_integer(g);
                if m.is_one() {
                    out.rational += coeff;
                } else {
                    Self::add_term(&mut out.terms, m, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Flip the sign of every `√d` with `b | d`; a field automorphism when
    /// all radicands factor over a coprime base containing `b`.
    fn conjugate(&self, b: &BigInt) -> Self {
        let mut out = self.clone();
        for (d, q) in out.terms.iter_mut() {
            if (d % b).is_zero() {
                *q = -q.clone();
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        if !self.is_flat() {
            return Err(Error::UnsupportedRadical("reciprocal of a nested radical".into()));
        }
        if self.is_zero_exact() == Some(true) {
            return Err(Error::ZeroDenominator);
        }
        let base = coprime_base(self.terms.keys().cloned().collect());
        let mut current = self.clone();
        let mut factor = Self::integer(1);
        for b in &base {
            let conj = current.conjugate(b);
            factor = factor.mul(&conj)?;
            current = current.mul(&conj)?;
        }
        let norm = current
            .as_rational()
            .cloned()
            .expect("product over all conjugates is rational");
        Ok(factor.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    /// Non-negative square root. Rationals go to a single term, `a + b√m`
    /// is denested when `a² − b²m` is a rational square, anything else
    /// becomes a nested term.
    pub fn sqrt(&self) -> Result<Self> {
        if let Some(q) = self.as_rational() {
            return Self::sqrt_rational(q);
        }
        if self.sign(DEFAULT_MAX_BITS)?.0 == Ordering::Less {
            return Err(Error::UnsupportedRadical(format!("sqrt of negative {self}")));
        }
        if !self.is_flat() {
            return Err(Error::UnsupportedRadical("sqrt of a nested radical".into()));
        }
        if self.terms.len() == 1 {
            let (m, b) = self.terms.iter().next().unwrap();
            let a = &self.rational;
            let disc = a * a - b * b * BigRational::from_integer(m.clone());
            if let Some(c) = rational_sqrt(&disc) {
                let half = BigRational::new(1.into(), 2.into());
                let u = Self::sqrt_rational(&((a + &c) * &half))?;
                let v = Self::sqrt_rational(&((a - &c) * &half))?;
                return Ok(if b.is_negative() { u.sub(&v) } else { u.add(&v) });
            }
        }
        let nested = vec![(BigRational::one(), self.clone())];
        Ok(RadicalValue {
            rational: BigRational::zero(),
            terms: BTreeMap::new(),
            nested,
        })
    }

    /// Certified enclosure with `bits` fractional bits.
    pub fn enclosure(&self, bits: u32) -> Interval {
        let scale = BigInt::one() << bits;
        let mut lo = (&self.rational * BigRational::from_integer(scale.clone())).floor().to_integer();
        let mut hi = (&self.rational * BigRational::from_integer(scale.clone())).ceil().to_integer();
        let add_scaled = |lo: &mut BigInt, hi: &mut BigInt, q: &BigRational, root: &Interval| {
            // q·[root.lo, root.hi] / den, with root at the same scale.
            let a = q.numer() * &root.lo;
            let b = q.numer() * &root.hi;
            let (mn, mx) = if a <= b { (a, b) } else { (b, a) };
            let den = q.denom();
            *lo += mn.div_floor(den);
            *hi += -((-mx).div_floor(den));
        };
        for (d, q) in &self.terms {
            let root = sqrt_enclosure_int(d, bits);
            add_scaled(&mut lo, &mut hi, q, &root);
        }
        for (k, x) in &self.nested {
            let inner = x.enclosure(bits + 2);
            let root = inner.sqrt();
            // root is at scale bits+2; shift down conservatively.
            let root = Interval {
                lo: root.lo.div_floor(&BigInt::from(4)),
                hi: -((-root.hi).div_floor(&BigInt::from(4))),
                bits,
            };
            add_scaled(&mut lo, &mut hi, k, &root);
        }
        Interval { lo, hi, bits }
    }

    /// Sign of the value with a certificate.
    pub fn sign(&self, max_bits: u32) -> Result<(Ordering, SignCertificate)> {
        if let Some(true) = self.is_zero_exact() {
            return Ok((Ordering::Equal, SignCertificate::ExactIdentity));
        }
        if self.nested.len() == 1 {
            let (k, x) = &self.nested[0];
            let flat = RadicalValue {
                rational: self.rational.clone(),
                terms: self.terms.clone(),
                nested: Vec::new(),
            };
            let k_sign = if k.is_positive() { Ordering::Greater } else { Ordering::Less };
            if flat.is_zero_exact() == Some(true) {
                return Ok((k_sign, SignCertificate::Squaring { residual_sign: k_sign }));
            }
            let (f_sign, _) = flat.sign(max_bits)?;
            if f_sign == k_sign {
                return Ok((k_sign, SignCertificate::Squaring { residual_sign: k_sign }));
            }
            // |F| vs |k|√X through F² − k²X, which is flat.
            let residual = flat.mul(&flat)?.sub(&x.scale(&(k * k)));
            let (r_sign, _) = residual.sign(max_bits)?;
            let sign = match r_sign {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => f_sign,
                Ordering::Less => k_sign,
            };
            return Ok((sign, SignCertificate::Squaring { residual_sign: r_sign }));
        }
        let mut bits = DEFAULT_PRECISION.min(max_bits);
        loop {
            let iv = self.enclosure(bits);
            if iv.lo.is_positive() {
                return Ok((Ordering::Greater, SignCertificate::Interval(iv)));
            }
            if iv.hi.is_negative() {
                return Ok((Ordering::Less, SignCertificate::Interval(iv)));
            }
            if bits >= max_bits {
                return Err(Error::Undecided { bits });
            }
            bits = (bits * 2).min(max_bits);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let iv = self.enclosure(64);
        let mid = BigRational::new(iv.lo + iv.hi, BigInt::one() << (iv.bits + 1));
        crate::num::to_f64(&mid)
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    Some(BigRational::new(exact_sqrt(q.numer())?, exact_sqrt(q.denom())?))
}

/// Enclosure of `√d` with `bits` fractional bits.
fn sqrt_enclosure_int(d: &BigInt, bits: u32) -> Interval {
    let scaled = d << (2 * bits);
    let lo = scaled.sqrt();
    let hi = if &lo * &lo == scaled { lo.clone() } else { &lo + 1 };
    Interval { lo, hi, bits }
}

/// `[lo, hi] / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::num::serde_z")]
    pub lo: BigInt,
    #[serde(with = "crate::num::serde_z")]
    pub hi: BigInt,
    pub bits: u32,
}

impl Interval {
    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.bits)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.bits)
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    fn sqrt(&self) -> Interval {
        let lo = if self.lo.is_positive() { (&self.lo << self.bits).sqrt() } else { BigInt::zero() };
        let hi_scaled = if self.hi.is_positive() { &self.hi << self.bits } else { BigInt::zero() };
        let hi_root = hi_scaled.sqrt();
        let hi = if &hi_root * &hi_root == hi_scaled { hi_root } else { hi_root + 1 };
        Interval { lo, hi, bits: self.bits }
    }
}

/// Evidence for the sign of a value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignCertificate {
    /// Every coefficient cancels.
    ExactIdentity,
    /// Decided by squaring away the single nested radical.
    Squaring {
        #[serde(with = "ordering_serde")]
        residual_sign: Ordering,
    },
    /// A dyadic enclosure excluding zero.
    Interval(Interval),
}

/// Ordering of two values with supporting evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    #[serde(with = "ordering_serde")]
    pub ordering: Ordering,
    /// Evidence for the sign of `a − b`.
    pub certificate: SignCertificate,
}

/// Compare `a` and `b`, refining enclosures up to `max_bits`.
pub fn compare_radicals(a: &RadicalValue, b: &RadicalValue, max_bits: u32) -> Result<Comparison> {
    if a.radical_count() <= 2 && b.radical_count() <= 2 && (!a.is_flat() || !b.is_flat()) {
        if let Some(c) = compare_by_squaring(a, b, max_bits)? {
            return Ok(c);
        }
    }
    let (ordering, certificate) = a.sub(b).sign(max_bits)?;
    Ok(Comparison { ordering, certificate })
}

/// Compare a lone nested root against another lone root or a flat value by
/// squaring both (non-negative) sides.
fn compare_by_squaring(a: &RadicalValue, b: &RadicalValue, max_bits: u32) -> Result<Option<Comparison>> {
    fn square_if_root(v: &RadicalValue) -> Option<RadicalValue> {
        if v.nested.len() == 1 && v.terms.is_empty() && v.rational.is_zero() && v.nested[0].0.is_positive() {
            let (k, x) = &v.nested[0];
            return Some(x.scale(&(k * k)));
        }
        None
    }
    let a2 = match square_if_root(a) {
        Some(s) => s,
        None if a.is_flat() => {
            if a.sign(max_bits)?.0 == Ordering::Less {
                return Ok(None);
            }
            a.mul(a)?
        }
        None => return Ok(None),
    };
    let b2 = match square_if_root(b) {
        Some(s) => s,
        None if b.is_flat() => {
            if b.sign(max_bits)?.0 == Ordering::Less {
                return Ok(None);
            }
            b.mul(b)?
        }
        None => return Ok(None),
    };
    if !a2.is_flat() || !b2.is_flat() {
        return Ok(None);
    }
    let (ordering, _) = a2.sub(&b2).sign(max_bits)?;
    Ok(Some(Comparison {
        ordering,
        certificate: SignCertificate::Squaring { residual_sign: ordering },
    }))
}

/// `f ≤ value < f + 1`, each side backed by a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorCertificate {
    #[serde(with = "crate::num::serde_z")]
    pub floor: BigInt,
    pub lower: Comparison,
    pub upper: Comparison,
}

pub fn certified_floor(v: &RadicalValue, max_bits: u32) -> Result<FloorCertificate> {
    let guess = match v.as_rational() {
        Some(q) => q.floor().to_integer(),
        None => {
            let mut bits = DEFAULT_PRECISION.min(max_bits);
            loop {
                let iv = v.enclosure(bits);
                let f_lo = iv.lower().floor().to_integer();
                let f_hi = iv.upper().floor().to_integer();
                if f_lo == f_hi && iv.upper() != BigRational::from_integer(f_hi.clone()) {
                    break f_lo;
                }
                if bits >= max_bits {
                    return Err(Error::Undecided { bits });
                }
                bits = (bits * 2).min(max_bits);
            }
        }
    };
    let f = RadicalValue::integer(guess.clone());
    let f1 = RadicalValue::integer(&guess + 1);
    let lower = compare_radicals(v, &f, max_bits)?;
    let upper = compare_radicals(v, &f1, max_bits)?;
    if lower.ordering == Ordering::Less || upper.ordering != Ordering::Less {
        return Err(Error::CertificateFailed(format!("floor {guess} of {v}")));
    }
    Ok(FloorCertificate { floor: guess, lower, upper })
}

impl fmt::Display for RadicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() || (self.terms.is_empty() && self.nested.is_empty()) {
            parts.push(fmt_q(&self.rational));
        }
        for (d, q) in &self.terms {
            parts.push(format!("{}*sqrt({})", fmt_q(q), d));
        }
        for (k, x) in &self.nested {
            parts.push(format!("{}*sqrt({})", fmt_q(k), x));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

mod ordering_serde {
    use std::cmp::Ordering;

    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(o: &Ordering, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match o {
            Ordering::Less => "less",
            Ordering::Equal => "equal",
            Ordering::Greater => "greater",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ordering, D::Error> {
        match String::deserialize(d)?.as_str() {
            "less" => Ok(Ordering::Less),
            "equal" => Ok(Ordering::Equal),
            "greater" => Ok(Ordering::Greater),
            other => Err(D::Error::custom(format!("unknown ordering {other}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "crate::num::serde_q")]
    coeff: BigRational,
    radicand: String,
}

#[derive(Serialize, Deserialize)]
struct NestedRepr {
    #[serde(with = "crate::num::serde_q")]
    coeff: BigRational,
    value: RadicalValue,
}

#[derive(Serialize, Deserialize)]
struct RadicalRepr {
    #[serde(with = "crate::num::serde_q")]
    rational: BigRational,
    terms: Vec<TermRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    nested: Vec<NestedRepr>,
}

impl Serialize for RadicalValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RadicalRepr {
            rational: self.rational.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, q)| TermRepr { coeff: q.clone(), radicand: d.to_string() })
                .collect(),
            nested: self
                .nested
                .iter()
                .map(|(k, x)| NestedRepr { coeff: k.clone(), value: x.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadicalValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RadicalRepr::deserialize(d)?;
        let mut out = RadicalValue::rational(repr.rational);
        for t in repr.terms {
            let radicand: BigInt = t.radicand.parse().map_err(D::Error::custom)?;
            let term = RadicalValue::sqrt_term(t.coeff, &radicand).map_err(D::Error::custom)?;
            out = out.add(&term);
        }
        for n in repr.nested {
            if !n.value.is_flat() {
                return Err(D::Error::custom("doubly nested radical"));
            }
            RadicalValue::add_nested(&mut out.nested, n.coeff, n.value);
        }
        Ok(out)
    }
}

impl Interval {
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }
}

impl From<BigRational> for RadicalValue {
    fn from(q: BigRational) -> Self {
        RadicalValue::rational(q)
    }
}
