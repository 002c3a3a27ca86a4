//! Exact arithmetic in Z[zeta_p] and Q(zeta_p) for an odd prime p,
//! in the power basis 1, zeta, ..., zeta^{p-2}.
//!
//! Elements are coefficient vectors of length p-1 over BigInt; the relation
//! zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}) keeps everything canonical,
//! so equality is plain coefficient equality.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_prime_u64, modinv_u64, powmod};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CycError {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("mixed primes: {0} vs {1}")]
    MixedPrimes(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("galois index {0} is not invertible mod {1}")]
    BadGaloisIndex(u64, u64),
    #[error("element is not fixed by complex conjugation")]
    NotReal,
    #[error("q = {q} divides a denominator: exceptional prime for this element")]
    ExceptionalPrime { q: u64 },
    #[error("q = {q} is not a completely split prime for p = {p}")]
    NotSplit { p: u64, q: u64 },
    #[error("no further split primes up to ceiling {ceiling}; found {found} of {wanted}")]
    SplitSearchExhausted { ceiling: u64, found: usize, wanted: usize },
    #[error("malformed serialized element: {0}")]
    Malformed(String),
}

/// An element of Z[zeta_p], coefficients indexed by zeta^0 .. zeta^{p-2}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(p={}; {:?})", self.p, self.coeffs)
    }
}

fn check_p(p: u64) -> Result<(), CycError> {
    if p < 3 || !is_prime_u64(p) {
        return Err(CycError::BadPrime(p));
    }
    Ok(())
}

impl CyclotomicInt {
    pub fn zero(p: u64) -> Self {
        CyclotomicInt { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn one(p: u64) -> Self {
        Self::from_integer(p, BigInt::one())
    }

    pub fn from_integer(p: u64, n: BigInt) -> Self {
        let mut c = vec![BigInt::zero(); (p - 1) as usize];
        c[0] = n;
        CyclotomicInt { p, coeffs: c }
    }

    /// Build from coefficients on zeta^0..zeta^{p-2}; length must be exactly p-1.
    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Result<Self, CycError> {
        check_p(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(CycError::Malformed(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CyclotomicInt { p, coeffs })
    }

    /// zeta^k for any integer k (reduced mod p, exponent p-1 folded into the basis).
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let e = k.rem_euclid(p as i64) as u64;
        let mut out = Self::zero(p);
        if e == p - 1 {
            for c in out.coeffs.iter_mut() {
                *c = -BigInt::one();
            }
        } else {
            out.coeffs[e as usize] = BigInt::one();
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Is this a rational integer (all basis coefficients beyond 1 vanish)?
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn assert_same(&self, rhs: &Self) {
        assert_eq!(self.p, rhs.p, "mixed cyclotomic primes {} vs {}", self.p, rhs.p);
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInt { p: self.p, coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicInt { p: self.p, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        let p = self.p as usize;
        // accumulate on exponents mod p, then fold exponent p-1
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j) % p] += a * b;
            }
        }
        Self::fold(self.p, acc)
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * n).collect() }
    }

    /// Reduce a length-p exponent vector (coefficients of zeta^0..zeta^{p-1})
    /// to the power basis using zeta^{p-1} = -(1+zeta+...+zeta^{p-2}).
    fn fold(p: u64, mut acc: Vec<BigInt>) -> Self {
        let top = acc.pop().expect("exponent vector of length p");
        if !top.is_zero() {
            for c in acc.iter_mut() {
                *c -= &top;
            }
        }
        CyclotomicInt { p, coeffs: acc }
    }

    /// The Galois automorphism zeta -> zeta^j, for j invertible mod p.
    pub fn galois_apply(&self, j: u64) -> Result<Self, CycError> {
        let jm = j % self.p;
        if jm == 0 {
            return Err(CycError::BadGaloisIndex(j, self.p));
        }
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc[(i * jm as usize) % p] += a;
            }
        }
        Ok(Self::fold(self.p, acc))
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conjugate(&self) -> Self {
        self.galois_apply(self.p - 1).expect("p-1 is invertible mod p")
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// gcd of all coefficients (non-negative); zero element gives 0.
    fn content(&self) -> BigUint {
        let mut g = BigUint::zero();
        for c in &self.coeffs {
            g = g.gcd(c.magnitude());
            if g.is_one() {
                break;
            }
        }
        g
    }
}

/// An element of Q(zeta_p): numerator in Z[zeta_p] over a positive integer
/// denominator, kept content-reduced so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicRat {
    num: CyclotomicInt,
    den: BigUint,
}

impl fmt::Debug for CyclotomicRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycRat(p={}; {:?} / {})", self.num.p, self.num.coeffs, self.den)
    }
}

impl CyclotomicRat {
    pub fn new(num: CyclotomicInt, den: BigInt) -> Result<Self, CycError> {
        if den.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let (num, den) = if den.is_negative() {
            (num.neg(), den.magnitude().clone())
        } else {
            (num, den.magnitude().clone())
        };
        Ok(Self::reduce_content(num, den))
    }

    fn reduce_content(num: CyclotomicInt, den: BigUint) -> Self {
        if num.is_zero() {
            return CyclotomicRat { num, den: BigUint::one() };
        }
        let g = num.content().gcd(&den);
        if g.is_one() {
            return CyclotomicRat { num, den };
        }
        let gi = BigInt::from(g.clone());
        let coeffs = num.coeffs.iter().map(|c| c / &gi).collect();
        CyclotomicRat { num: CyclotomicInt { p: num.p, coeffs }, den: den / g }
    }

    pub fn from_int(x: CyclotomicInt) -> Self {
        CyclotomicRat { num: x, den: BigUint::one() }
    }

    pub fn from_integer(p: u64, n: i64) -> Self {
        Self::from_int(CyclotomicInt::from_integer(p, BigInt::from(n)))
    }

    pub fn zero(p: u64) -> Self {
        Self::from_int(CyclotomicInt::zero(p))
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(CyclotomicInt::one(p))
    }

    pub fn zeta_pow(p: u64, k: i64) -> Self {
        Self::from_int(CyclotomicInt::zeta_pow(p, k))
    }

    pub fn p(&self) -> u64 {
        self.num.p
    }

    pub fn numerator(&self) -> &CyclotomicInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.as_integer().map_or(false, |n| n.is_one())
    }

    /// Is this a rational number (numerator a rational integer)?
    pub fn as_rational(&self) -> Option<(&BigInt, &BigUint)> {
        self.num.as_integer().map(|n| (n, &self.den))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let lden = BigInt::from(self.den.clone());
        let rden = BigInt::from(rhs.den.clone());
        let num = self.num.mul_int(&rden).add(&rhs.num.mul_int(&lden));
        Self::reduce_content(num, &self.den * &rhs.den)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicRat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::reduce_content(self.num.mul(&rhs.num), &self.den * &rhs.den)
    }

    pub fn galois_apply(&self, j: u64) -> Result<Self, CycError> {
        Ok(CyclotomicRat { num: self.num.galois_apply(j)?, den: self.den.clone() })
    }

    pub fn conjugate(&self) -> Self {
        CyclotomicRat { num: self.num.conjugate(), den: self.den.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real()
    }

    /// Multiplicative inverse via the Galois-conjugate product: the norm
    /// N(x) = prod_j sigma_j(x) is a rational integer, so
    /// x^{-1} = den * prod_{j>=2} sigma_j(num) / N(num). No polynomial gcd needed.
    pub fn inverse(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let p = self.p();
        let mut prod = CyclotomicInt::one(p);
        for j in 2..p {
            prod = prod.mul(&self.num.galois_apply(j)?);
        }
        let norm_elt = self.num.mul(&prod);
        let norm = norm_elt
            .as_integer()
            .expect("Galois-conjugate product of a nonzero element is a rational integer")
            .clone();
        assert!(!norm.is_zero(), "nonzero element has nonzero norm");
        let num = prod.mul_int(&BigInt::from(self.den.clone()));
        Self::new(num, norm)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, CycError> {
        Ok(self.mul(&rhs.inverse()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.p());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// An element of the real subfield k = Q(zeta_p + zeta_p^{-1}), stored as a
/// conjugation-fixed element of Q(zeta_p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealSubfieldElem(CyclotomicRat);

impl RealSubfieldElem {
    pub fn new(x: CyclotomicRat) -> Result<Self, CycError> {
        if !x.is_real() {
            return Err(CycError::NotReal);
        }
        Ok(RealSubfieldElem(x))
    }

    pub fn as_cyclotomic(&self) -> &CyclotomicRat {
        &self.0
    }

    /// t = zeta + zeta^{-1}, a generator of the real subfield over Q.
    pub fn t(p: u64) -> Self {
        RealSubfieldElem(CyclotomicRat::zeta_pow(p, 1).add(&CyclotomicRat::zeta_pow(p, -1)))
    }

    /// Size of the orbit under the Galois group of Q(zeta_p)/Q; for elements
    /// of k this divides (p-1)/2.
    pub fn galois_orbit_size(&self) -> usize {
        let p = self.0.p();
        let mut orbit: Vec<CyclotomicRat> = Vec::new();
        for j in 1..p {
            let img = self.0.galois_apply(j).expect("unit index");
            if !orbit.contains(&img) {
                orbit.push(img);
            }
        }
        orbit.len()
    }
}

/// A completely split prime q = 1 (mod p), together with the canonical
/// primitive p-th root of unity in F_q: the image of the smallest primitive
/// root of F_q^* under x -> x^{(q-1)/p}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPrime {
    pub p: u64,
    pub q: u64,
    pub root: u64,
}

impl SplitPrime {
    pub fn new(p: u64, q: u64) -> Result<Self, CycError> {
        check_p(p)?;
        if q == p || q % p != 1 || !is_prime_u64(q) {
            return Err(CycError::NotSplit { p, q });
        }
        let g = smallest_primitive_root(q);
        let root = powmod(g, (q - 1) / p, q);
        debug_assert!(root != 1 && powmod(root, p, q) == 1);
        Ok(SplitPrime { p, q, root })
    }

    /// Reduce an integral element along zeta -> root (Horner evaluation mod q).
    pub fn reduce_int(&self, x: &CyclotomicInt) -> Result<u64, CycError> {
        if x.p() != self.p {
            return Err(CycError::MixedPrimes(x.p(), self.p));
        }
        let q = BigInt::from(self.q);
        let mut acc = BigInt::zero();
        for c in x.coeffs().iter().rev() {
            acc = (acc * BigInt::from(self.root) + c).mod_floor(&q);
        }
        Ok(acc.to_biguint().expect("mod_floor output is non-negative").to_u64_digits().first().copied().unwrap_or(0))
    }

    /// Reduce a rational element; fails when q divides the denominator.
    pub fn reduce(&self, x: &CyclotomicRat) -> Result<u64, CycError> {
        let num = self.reduce_int(x.numerator())?;
        let den = (x.denominator() % self.q).to_u64_digits().first().copied().unwrap_or(0);
        if den == 0 {
            return Err(CycError::ExceptionalPrime { q: self.q });
        }
        Ok(crate::arith::mulmod(num, modinv_u64(den, self.q), self.q))
    }
}

fn smallest_primitive_root(q: u64) -> u64 {
    let factors: Vec<u64> = crate::arith::factorize(&BigUint::from(q - 1))
        .into_iter()
        .map(|(f, _)| f.to_u64_digits()[0])
        .collect();
    'cand: for g in 2..q {
        for f in &factors {
            if powmod(g, (q - 1) / f, q) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime field has a primitive root")
}

/// The first `count` completely split primes q = 1 (mod p) with q >= min_q,
/// scanning no further than `ceiling`.
pub fn find_split_primes(
    p: u64,
    count: usize,
    min_q: u64,
    ceiling: u64,
) -> Result<Vec<SplitPrime>, CycError> {
    check_p(p)?;
    let mut out = Vec::new();
    let mut k = if min_q <= p + 1 { 1 } else { (min_q - 1 + p - 1) / p };
    loop {
        let q = match p.checked_mul(k).and_then(|kp| kp.checked_add(1)) {
            Some(q) => q,
            None => return Err(CycError::SplitSearchExhausted { ceiling, found: out.len(), wanted: count }),
        };
        if q > ceiling {
            return Err(CycError::SplitSearchExhausted { ceiling, found: out.len(), wanted: count });
        }
        if is_prime_u64(q) {
            out.push(SplitPrime::new(p, q)?);
            if out.len() == count {
                return Ok(out);
            }
        }
        k += 1;
    }
}

/// Write x in Q(zeta_p) as a + b*zeta with a, b in the real subfield k:
/// b = (x - conj(x)) / (zeta - zeta^{-1}), a = x - b*zeta.
pub fn real_decompose(x: &CyclotomicRat) -> (CyclotomicRat, CyclotomicRat) {
    let p = x.p();
    let dz = CyclotomicRat::zeta_pow(p, 1).sub(&CyclotomicRat::zeta_pow(p, -1));
    let b = x.sub(&x.conjugate()).div(&dz).expect("zeta - zeta^{-1} is nonzero");
    let a = x.sub(&b.mul(&CyclotomicRat::zeta_pow(p, 1)));
    debug_assert!(a.is_real() && b.is_real());
    (a, b)
}

/// Restriction of scalars from K = Q(zeta_p) down to its real subfield k:
/// each entry x = a + b*zeta becomes the 2x2 block [[a, -b], [b, a + b*t]]
/// of multiplication by x on the k-basis {1, zeta}, where t = zeta + zeta^{-1}.
/// Requires an invertible input; the output has determinant
/// N_{K/k}(det M) = det(M) * conj(det M).
pub fn restrict_scalars(
    m: &crate::linalg::Matrix<CyclotomicRat>,
) -> Result<crate::linalg::Matrix<CyclotomicRat>, CycError> {
    use crate::linalg::FieldScalar;
    if !m.is_square() {
        return Err(CycError::Malformed("restrict_scalars expects a square matrix".into()));
    }
    if m.det().inv().is_none() {
        return Err(CycError::DivisionByZero);
    }
    let p = m.sample().p();
    let t = RealSubfieldElem::t(p).as_cyclotomic().clone();
    let n = m.rows();
    let zero = CyclotomicRat::zero(p);
    let mut out = crate::linalg::Matrix::filled(2 * n, 2 * n, zero);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = real_decompose(m.get(i, j));
            out.set(2 * i, 2 * j, a.clone());
            out.set(2 * i, 2 * j + 1, b.neg());
            out.set(2 * i + 1, 2 * j, b.clone());
            out.set(2 * i + 1, 2 * j + 1, a.add(&b.mul(&t)));
        }
    }
    Ok(out)
}

// ---- serialization ----
//
// CyclotomicInt:  {"p": 7, "basis": "power", "coeffs": ["1","0","0","0","0","0"]}
// CyclotomicRat:  {"p": 7, "basis": "power", "num": [...], "den": "3"}
// Coefficients are decimal strings, little-endian in the power basis, so the
// encoding is independent of platform integer width.

impl Serialize for CyclotomicInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CyclotomicInt", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("basis", "power")?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct CycIntWire {
    p: u64,
    basis: String,
    coeffs: Vec<String>,
}

fn parse_bigint<E: DeError>(s: &str) -> Result<BigInt, E> {
    s.parse::<BigInt>()
        .map_err(|_| E::custom(format!("bad integer literal {s:?}")))
}

impl<'de> Deserialize<'de> for CyclotomicInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = CycIntWire::deserialize(d)?;
        if w.basis != "power" {
            return Err(D::Error::custom(format!("unsupported basis {:?}", w.basis)));
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| parse_bigint::<D::Error>(s))
            .collect::<Result<Vec<_>, _>>()?;
        CyclotomicInt::from_coeffs(w.p, coeffs).map_err(D::Error::custom)
    }
}

impl Serialize for CyclotomicRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CyclotomicRat", 4)?;
        st.serialize_field("p", &self.p())?;
        st.serialize_field("basis", "power")?;
        let num: Vec<String> = self.num.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("num", &num)?;
        st.serialize_field("den", &self.den.to_string())?;
        st.end()
    }
}

#[derive(Deserialize)]
struct CycRatWire {
    p: u64,
    basis: String,
    num: Vec<String>,
    den: String,
}

impl<'de> Deserialize<'de> for CyclotomicRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = CycRatWire::deserialize(d)?;
        if w.basis != "power" {
            return Err(D::Error::custom(format!("unsupported basis {:?}", w.basis)));
        }
        let num = w
            .num
            .iter()
            .map(|s| parse_bigint::<D::Error>(s))
            .collect::<Result<Vec<_>, _>>()?;
        let num = CyclotomicInt::from_coeffs(w.p, num).map_err(D::Error::custom)?;
        let den = parse_bigint::<D::Error>(&w.den)?;
        let out = CyclotomicRat::new(num, den.clone()).map_err(D::Error::custom)?;
        // round-trip canonicality: reject non-reduced or negative-denominator input
        if BigInt::from(out.den.clone()) != den || out.num != num_back(&out) {
            return Err(D::Error::custom("element is not in reduced canonical form"));
        }
        Ok(out)
    }
}

fn num_back(x: &CyclotomicRat) -> CyclotomicInt {
    x.num.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(p: u64, cs: &[i64]) -> CyclotomicInt {
        CyclotomicInt::from_coeffs(p, cs.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    #[test]
    fn zeta_powers_fold() {
        // zeta^6 = -(1+zeta+...+zeta^5) at p = 7
        let z6 = CyclotomicInt::zeta_pow(7, 6);
        assert_eq!(z6, cyc(7, &[-1, -1, -1, -1, -1, -1]));
        // zeta^7 = 1
        assert_eq!(CyclotomicInt::zeta_pow(7, 7), CyclotomicInt::one(7));
        assert_eq!(CyclotomicInt::zeta_pow(7, -1), CyclotomicInt::zeta_pow(7, 6));
    }

    #[test]
    fn sum_of_all_powers_is_zero() {
        for p in [3u64, 7, 11] {
            let mut s = CyclotomicInt::zero(p);
            for k in 0..p {
                s = s.add(&CyclotomicInt::zeta_pow(p, k as i64));
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn galois_composition() {
        // sigma_2 then sigma_4 is sigma_8 = sigma_1 = id at p = 7
        let x = cyc(7, &[3, -1, 4, 1, -5, 9]);
        let y = x.galois_apply(2).unwrap().galois_apply(4).unwrap();
        assert_eq!(y, x);
        // and conjugation is an involution
        assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn galois_rejects_zero_index() {
        let x = CyclotomicInt::one(7);
        assert_eq!(x.galois_apply(7).unwrap_err(), CycError::BadGaloisIndex(7, 7));
    }

    #[test]
    fn real_elements() {
        let t = RealSubfieldElem::t(7);
        assert!(t.as_cyclotomic().is_real());
        assert!(!CyclotomicRat::zeta_pow(7, 1).is_real());
        assert!(RealSubfieldElem::new(CyclotomicRat::zeta_pow(7, 1)).is_err());
        // t has full orbit (p-1)/2 = 3
        assert_eq!(t.galois_orbit_size(), 3);
    }

    #[test]
    fn inverse_of_unit_and_rational() {
        // (1 + zeta)^{-1} at p = 7: 1 + zeta is a unit times ... just check x * x^{-1} = 1
        let x = CyclotomicRat::from_int(cyc(7, &[1, 1, 0, 0, 0, 0]));
        let xi = x.inverse().unwrap();
        assert!(x.mul(&xi).is_one());
        // rational: (2/3)^{-1} = 3/2
        let r = CyclotomicRat::new(CyclotomicInt::from_integer(7, BigInt::from(2)), BigInt::from(3)).unwrap();
        let ri = r.inverse().unwrap();
        assert_eq!(ri.as_rational().unwrap().0, &BigInt::from(3));
        assert_eq!(ri.as_rational().unwrap().1, &BigUint::from(2u32));
        assert!(CyclotomicRat::zero(7).inverse().is_err());
    }

    #[test]
    fn canonical_reduction() {
        // 2/4 reduces to 1/2; -x/2 keeps positive denominator
        let r = CyclotomicRat::new(CyclotomicInt::from_integer(7, BigInt::from(2)), BigInt::from(4)).unwrap();
        assert_eq!(r.denominator(), &BigUint::from(2u32));
        let s = CyclotomicRat::new(CyclotomicInt::one(7), BigInt::from(-2)).unwrap();
        assert_eq!(s.denominator(), &BigUint::from(2u32));
        assert_eq!(s.numerator().as_integer().unwrap(), &BigInt::from(-1));
    }

    #[test]
    fn split_primes_for_7_and_11() {
        let qs: Vec<u64> = find_split_primes(7, 3, 2, 1_000_000)
            .unwrap()
            .iter()
            .map(|s| s.q)
            .collect();
        assert_eq!(qs, vec![29, 43, 71]);
        let qs11: Vec<u64> = find_split_primes(11, 1, 2, 1_000_000)
            .unwrap()
            .iter()
            .map(|s| s.q)
            .collect();
        assert_eq!(qs11, vec![23]);
        // ceiling respected
        let err = find_split_primes(7, 4, 2, 50).unwrap_err();
        assert_eq!(err, CycError::SplitSearchExhausted { ceiling: 50, found: 2, wanted: 4 });
    }

    #[test]
    fn split_prime_reduction_is_a_homomorphism() {
        let sp = SplitPrime::new(7, 29).unwrap();
        assert_eq!(powmod(sp.root, 7, 29), 1);
        assert_ne!(sp.root, 1);
        let x = CyclotomicRat::from_int(cyc(7, &[2, -3, 0, 1, 4, -1]));
        let y = CyclotomicRat::new(cyc(7, &[0, 5, 1, -2, 3, 7]), BigInt::from(4)).unwrap();
        let lhs = sp.reduce(&x.mul(&y)).unwrap();
        let rhs = crate::arith::mulmod(sp.reduce(&x).unwrap(), sp.reduce(&y).unwrap(), 29);
        assert_eq!(lhs, rhs);
        let lhs = sp.reduce(&x.add(&y)).unwrap();
        let rhs = (sp.reduce(&x).unwrap() + sp.reduce(&y).unwrap()) % 29;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exceptional_prime_detected() {
        let sp = SplitPrime::new(7, 29).unwrap();
        let x = CyclotomicRat::new(CyclotomicInt::one(7), BigInt::from(29)).unwrap();
        assert_eq!(sp.reduce(&x).unwrap_err(), CycError::ExceptionalPrime { q: 29 });
    }

    #[test]
    fn not_split_rejected() {
        assert!(SplitPrime::new(7, 31).is_err()); // 31 = 3 mod 7
        assert!(SplitPrime::new(7, 28).is_err()); // not prime
    }

    #[test]
    fn restrict_scalars_on_zeta() {
        use crate::linalg::Matrix;
        let p = 7u64;
        let t = RealSubfieldElem::t(p).as_cyclotomic().clone();
        let one = CyclotomicRat::one(p);
        let zero = CyclotomicRat::zero(p);
        // multiplication by zeta on the k-basis {1, zeta}: [[0, -1], [1, t]]
        let z = Matrix::from_rows(vec![vec![CyclotomicRat::zeta_pow(p, 1)]]).unwrap();
        let rz = restrict_scalars(&z).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![zero.clone(), one.neg()],
            vec![one.clone(), t.clone()],
        ])
        .unwrap();
        assert_eq!(rz, expect);
        // and by conj(zeta): [[t, 1], [-1, 0]]
        let zc = Matrix::from_rows(vec![vec![CyclotomicRat::zeta_pow(p, -1)]]).unwrap();
        let rzc = restrict_scalars(&zc).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![t.clone(), one.clone()],
            vec![one.neg(), zero.clone()],
        ])
        .unwrap();
        assert_eq!(rzc, expect);
        // the two blocks are inverse up to nothing: L_z * L_zbar = L_1 = Id
        assert!(rz.mul(&rzc).is_identity());
    }

    #[test]
    fn restrict_scalars_is_multiplicative_with_norm_determinant() {
        use crate::linalg::{FieldScalar, Matrix};
        let p = 7u64;
        let e = |k: i64| CyclotomicRat::zeta_pow(p, k);
        let a = Matrix::from_rows(vec![
            vec![e(1).add(&e(3)), e(0)],
            vec![e(5).neg(), e(2).add(&CyclotomicRat::from_integer(p, 2))],
        ])
        .unwrap();
        let b = Matrix::from_rows(vec![
            vec![e(4), e(6).sub(&e(1))],
            vec![e(0), e(2).neg()],
        ])
        .unwrap();
        let lhs = restrict_scalars(&a.mul(&b)).unwrap();
        let rhs = restrict_scalars(&a).unwrap().mul(&restrict_scalars(&b).unwrap());
        assert_eq!(lhs, rhs);
        // det of the restriction = Norm_{K/k}(det) = det * conj(det)
        let d = a.det();
        assert_eq!(restrict_scalars(&a).unwrap().det(), d.mul(&d.conjugate()));
        // all entries land in the real subfield
        let ra = restrict_scalars(&a).unwrap();
        for i in 0..ra.rows() {
            for j in 0..ra.cols() {
                assert!(ra.get(i, j).is_real());
            }
        }
        // singular matrices are rejected
        let s = Matrix::from_rows(vec![
            vec![e(1), e(1)],
            vec![e(1), e(1)],
        ])
        .unwrap();
        assert!(restrict_scalars(&s).is_err());
        let _ = s.det().inv();
    }

    #[test]
    fn serialization_round_trip() {
        let x = CyclotomicRat::new(cyc(7, &[-3, 0, 12, 0, 0, 5]), BigInt::from(7)).unwrap();
        let js = serde_json::to_string(&x).unwrap();
        assert!(js.contains("\"basis\":\"power\""));
        let back: CyclotomicRat = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
        // non-canonical input rejected
        let bad = r#"{"p":7,"basis":"power","num":["2","0","0","0","0","0"],"den":"4"}"#;
        assert!(serde_json::from_str::<CyclotomicRat>(bad).is_err());
    }

    // naive polynomial oracle: multiply in Z[x]/(x^p - 1), then reduce by
    // the relation x^{p-1} = -(1 + ... + x^{p-2}) a different way (repeated
    // substitution), to cross-check the fused implementation.
    fn naive_mul(a: &CyclotomicInt, b: &CyclotomicInt) -> CyclotomicInt {
        let p = a.p() as usize;
        let mut full = vec![BigInt::zero(); 2 * p];
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                full[i + j] += x * y;
            }
        }
        // reduce x^k for k >= p via x^p = 1
        for k in (p..2 * p).rev() {
            let c = std::mem::take(&mut full[k]);
            full[k - p] += c;
        }
        full.truncate(p);
        // substitute x^{p-1}
        let top = full.pop().unwrap();
        for c in full.iter_mut() {
            *c -= &top;
        }
        CyclotomicInt::from_coeffs(a.p(), full).unwrap()
    }

    proptest! {
        #[test]
        fn ring_axioms_against_oracle(
            a in proptest::collection::vec(-20i64..20, 6),
            b in proptest::collection::vec(-20i64..20, 6),
            c in proptest::collection::vec(-20i64..20, 6),
        ) {
            let a = cyc(7, &a);
            let b = cyc(7, &b);
            let c = cyc(7, &c);
            prop_assert_eq!(a.mul(&b), naive_mul(&a, &b));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn galois_is_a_ring_map(
            a in proptest::collection::vec(-20i64..20, 6),
            b in proptest::collection::vec(-20i64..20, 6),
            j in 1u64..7,
        ) {
            let a = cyc(7, &a);
            let b = cyc(7, &b);
            prop_assert_eq!(a.mul(&b).galois_apply(j).unwrap(),
                            a.galois_apply(j).unwrap().mul(&b.galois_apply(j).unwrap()));
            prop_assert_eq!(a.add(&b).galois_apply(j).unwrap(),
                            a.galois_apply(j).unwrap().add(&b.galois_apply(j).unwrap()));
        }

        #[test]
        fn inverse_round_trip(
            a in proptest::collection::vec(-9i64..9, 6),
            d in 1i64..40,
        ) {
            let n = cyc(7, &a);
            prop_assume!(!n.is_zero());
            let x = CyclotomicRat::new(n, BigInt::from(d)).unwrap();
            let xi = x.inverse().unwrap();
            prop_assert!(x.mul(&xi).is_one());
        }

        #[test]
        fn reduction_respects_products(
            a in proptest::collection::vec(-9i64..9, 6),
            b in proptest::collection::vec(-9i64..9, 6),
        ) {
            let sp = SplitPrime::new(7, 43).unwrap();
            let x = CyclotomicRat::from_int(cyc(7, &a));
            let y = CyclotomicRat::from_int(cyc(7, &b));
            let lhs = sp.reduce(&x.mul(&y)).unwrap();
            let rhs = crate::arith::mulmod(sp.reduce(&x).unwrap(), sp.reduce(&y).unwrap(), 43);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
