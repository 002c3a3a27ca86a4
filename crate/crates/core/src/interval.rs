//! Certified complex embedding: dyadic interval arithmetic with outward
//! rounding, enough to pin down signs and verify positivity rigorously.
//! No floating point is involved anywhere in a proof path.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::{CycError, CyclotomicRat};

pub const MIN_PRECISION: u32 = 64;

/// m * 2^e with arbitrary-precision mantissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Down,
    Up,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { m: BigInt::from(n), e: 0 }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic { m: n, e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn neg(&self) -> Self {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let e = self.e.min(rhs.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &rhs.m << (rhs.e - e) as usize;
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Dyadic { m: &self.m * &rhs.m, e: self.e + rhs.e }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Dyadic { m: &self.m * n, e: self.e }
    }

    pub fn cmp(&self, rhs: &Self) -> std::cmp::Ordering {
        let e = self.e.min(rhs.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &rhs.m << (rhs.e - e) as usize;
        a.cmp(&b)
    }

    pub fn is_positive(&self) -> bool {
        self.m.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    fn round(&self, prec: u32, dir: Dir) -> Self {
        let bits = self.m.magnitude().bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let q = floor_shift(&self.m, shift);
        let exact = (&q << shift) == self.m;
        let m = match (dir, exact) {
            (Dir::Down, _) | (Dir::Up, true) => q,
            (Dir::Up, false) => q + 1,
        };
        Dyadic { m, e: self.e + shift as i64 }
    }

    /// Divide by a positive integer, rounding in `dir`, keeping ~prec bits.
    fn div_int(&self, d: &BigInt, prec: u32, dir: Dir) -> Self {
        assert!(d.is_positive(), "div_int expects a positive divisor");
        let extra = prec as usize + 2;
        let num = &self.m << extra;
        let q = num.div_floor(d);
        let exact = &q * d == num;
        let m = match (dir, exact) {
            (Dir::Down, _) | (Dir::Up, true) => q,
            (Dir::Up, false) => q + 1,
        };
        Dyadic { m, e: self.e - extra as i64 }.round(prec, dir)
    }

    /// 2^k as a dyadic.
    pub fn pow2(k: i64) -> Self {
        Dyadic { m: BigInt::one(), e: k }
    }

    /// Lossy conversion for display and tests only.
    pub fn to_f64(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(self.e.clamp(-1074, 1024) as i32)
    }
}

/// floor(m / 2^k) for any sign of m.
fn floor_shift(m: &BigInt, k: usize) -> BigInt {
    if m.is_negative() {
        let mag = m.magnitude();
        let q = mag >> k;
        let exact = (&q << k) == *mag;
        let q = BigInt::from_biguint(num_bigint::Sign::Minus, q);
        if exact {
            q
        } else {
            q - 1
        }
    } else {
        BigInt::from_biguint(num_bigint::Sign::Plus, m.magnitude() >> k)
    }
}

/// Closed interval [lo, hi] with dyadic endpoints.
#[derive(Clone, Debug)]
pub struct RealInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RealInterval {
    pub fn exact(d: Dyadic) -> Self {
        RealInterval { lo: d.clone(), hi: d }
    }

    pub fn from_int(n: i64) -> Self {
        Self::exact(Dyadic::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    fn valid(&self) -> bool {
        self.lo.cmp(&self.hi) != std::cmp::Ordering::Greater
    }

    pub fn add(&self, rhs: &Self, prec: u32) -> Self {
        let out = RealInterval {
            lo: self.lo.add(&rhs.lo).round(prec, Dir::Down),
            hi: self.hi.add(&rhs.hi).round(prec, Dir::Up),
        };
        debug_assert!(out.valid());
        out
    }

    pub fn neg(&self) -> Self {
        RealInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn sub(&self, rhs: &Self, prec: u32) -> Self {
        self.add(&rhs.neg(), prec)
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp(&lo) == std::cmp::Ordering::Less {
                lo = c.clone();
            }
            if c.cmp(&hi) == std::cmp::Ordering::Greater {
                hi = c.clone();
            }
        }
        let out = RealInterval { lo: lo.round(prec, Dir::Down), hi: hi.round(prec, Dir::Up) };
        debug_assert!(out.valid());
        out
    }

    pub fn mul_int(&self, n: &BigInt, prec: u32) -> Self {
        let a = self.lo.mul_int(n);
        let b = self.hi.mul_int(n);
        if n.is_negative() {
            RealInterval { lo: b.round(prec, Dir::Down), hi: a.round(prec, Dir::Up) }
        } else {
            RealInterval { lo: a.round(prec, Dir::Down), hi: b.round(prec, Dir::Up) }
        }
    }

    pub fn div_uint(&self, d: &BigUint, prec: u32) -> Self {
        let d = BigInt::from(d.clone());
        RealInterval {
            lo: self.lo.div_int(&d, prec, Dir::Down),
            hi: self.hi.div_int(&d, prec, Dir::Up),
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Is `other` a subset of `self`?
    pub fn contains(&self, other: &Self) -> bool {
        self.lo.cmp(&other.lo) != std::cmp::Ordering::Greater
            && other.hi.cmp(&self.hi) != std::cmp::Ordering::Greater
    }

    /// Upper bound on |x| over the interval.
    fn abs_upper(&self) -> Dyadic {
        let a = self.lo.neg();
        if a.cmp(&self.hi) == std::cmp::Ordering::Greater {
            a
        } else {
            self.hi.clone()
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }
}

#[derive(Clone, Debug)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn zero() -> Self {
        ComplexInterval { re: RealInterval::zero(), im: RealInterval::zero() }
    }

    pub fn add(&self, rhs: &Self, prec: u32) -> Self {
        ComplexInterval { re: self.re.add(&rhs.re, prec), im: self.im.add(&rhs.im, prec) }
    }

    pub fn mul(&self, rhs: &Self, prec: u32) -> Self {
        let re = self.re.mul(&rhs.re, prec).sub(&self.im.mul(&rhs.im, prec), prec);
        let im = self.re.mul(&rhs.im, prec).add(&self.im.mul(&rhs.re, prec), prec);
        ComplexInterval { re, im }
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }
}

/// Enclosure of pi by Machin's formula: pi = 16 atan(1/5) - 4 atan(1/239).
pub fn pi(prec: u32) -> RealInterval {
    let w = prec + 16;
    let a5 = atan_recip(5, w);
    let a239 = atan_recip(239, w);
    a5.mul_int(&BigInt::from(16), w)
        .sub(&a239.mul_int(&BigInt::from(4), w), w)
}

/// atan(1/x) for integer x >= 2 via the alternating Taylor series; the
/// partial-sum error is bounded by the first omitted term.
fn atan_recip(x: u64, prec: u32) -> RealInterval {
    let w = prec + 8;
    let xb = BigInt::from(x);
    let x2 = &xb * &xb;
    let mut denom_pow = xb.clone(); // x^{2k+1}
    let mut k = 0u64;
    let mut sum = RealInterval::zero();
    loop {
        let d = &denom_pow * BigInt::from(2 * k + 1);
        let term = RealInterval {
            lo: Dyadic::from_int(1).div_int(&d, w, Dir::Down),
            hi: Dyadic::from_int(1).div_int(&d, w, Dir::Up),
        };
        let signed = if k % 2 == 0 { term.clone() } else { term.neg() };
        sum = sum.add(&signed, w);
        // stop when the next term is below the target; it also bounds the tail
        let next_d = &denom_pow * &x2 * BigInt::from(2 * k + 3);
        let tail = Dyadic::from_int(1).div_int(&next_d, w, Dir::Up);
        if tail.cmp(&Dyadic::pow2(-(prec as i64 + 4))) == std::cmp::Ordering::Less {
            let pad = RealInterval { lo: tail.neg(), hi: tail };
            return sum.add(&pad, w);
        }
        denom_pow *= &x2;
        k += 1;
    }
}

/// cos over an interval with |x| <= 8, by interval Taylor summation; the
/// Lagrange remainder |x|^{2K}/(2K)! is valid unconditionally since every
/// derivative of cos is bounded by 1.
pub fn cos_interval(x: &RealInterval, prec: u32) -> RealInterval {
    sin_cos_taylor(x, prec, false)
}

pub fn sin_interval(x: &RealInterval, prec: u32) -> RealInterval {
    sin_cos_taylor(x, prec, true)
}

fn sin_cos_taylor(x: &RealInterval, prec: u32, is_sin: bool) -> RealInterval {
    let w = prec + 32;
    assert!(
        x.abs_upper().cmp(&Dyadic::from_int(8)) != std::cmp::Ordering::Greater,
        "Taylor evaluation expects |x| <= 8"
    );
    let x2 = x.mul(x, w);
    let mut term = if is_sin { x.clone() } else { RealInterval::from_int(1) };
    let mut sum = term.clone();
    let mut n: u64 = if is_sin { 1 } else { 0 }; // current power
    let u = x.abs_upper().round(w, Dir::Up);
    // upper bound on u^{n}, maintained incrementally
    let mut upow = if is_sin { u.clone() } else { Dyadic::from_int(1) };
    loop {
        // next term: multiply by -x^2 / ((n+1)(n+2))
        let d = BigInt::from((n + 1) * (n + 2));
        term = term.mul(&x2, w).neg();
        term = RealInterval {
            lo: term.lo.div_int(&d, w, Dir::Down),
            hi: term.hi.div_int(&d, w, Dir::Up),
        };
        sum = sum.add(&term, w);
        n += 2;
        upow = upow.mul(&u).mul(&u).div_int(&d, w, Dir::Up).round(w, Dir::Up);
        // remainder after including power n: next power is n+2
        let rd = BigInt::from((n + 1) * (n + 2));
        let rem = upow.mul(&u).mul(&u).div_int(&rd, w, Dir::Up);
        if rem.cmp(&Dyadic::pow2(-(prec as i64 + 4))) == std::cmp::Ordering::Less {
            let pad = RealInterval { lo: rem.neg(), hi: rem };
            return sum.add(&pad, w);
        }
        assert!(n < 10_000, "Taylor series failed to converge");
    }
}

/// Certified enclosure of the image of x under zeta_p -> exp(2 pi i m / p)
/// with m = (p+1)/2, the embedding where the quantum parameter A = -zeta^{(p+1)/2}
/// is a primitive 2p-th root of unity.
pub fn complex_embed(x: &CyclotomicRat, precision: u32) -> Result<ComplexInterval, CycError> {
    if precision < MIN_PRECISION {
        return Err(CycError::Malformed(format!(
            "precision {precision} below minimum {MIN_PRECISION}"
        )));
    }
    let p = x.p();
    let m = (p + 1) / 2;
    // headroom for summing p terms with large integer coefficients
    let coeff_bits: u64 = x
        .numerator()
        .coeffs()
        .iter()
        .map(|c| c.magnitude().bits())
        .max()
        .unwrap_or(0);
    let w = precision + 48 + coeff_bits as u32;
    let two_pi = pi(w).mul_int(&BigInt::from(2), w);
    let mut out = ComplexInterval::zero();
    for (j, c) in x.numerator().coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = (m as u128 * j as u128 % p as u128) as u64;
        let angle = two_pi
            .mul_int(&BigInt::from(k), w)
            .div_uint(&BigUint::from(p), w);
        let re = cos_interval(&angle, w).mul_int(c, w);
        let im = sin_interval(&angle, w).mul_int(c, w);
        out = out.add(&ComplexInterval { re, im }, w);
    }
    Ok(ComplexInterval {
        re: out.re.div_uint(x.denominator(), w),
        im: out.im.div_uint(x.denominator(), w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rounding_directions() {
        // 7 = 111_2 rounded to 2 bits: down -> 6, up -> 8
        let d = Dyadic::from_int(7);
        assert_eq!(d.round(2, Dir::Down), Dyadic { m: BigInt::from(3), e: 1 });
        assert_eq!(d.round(2, Dir::Up), Dyadic { m: BigInt::from(4), e: 1 });
        let n = Dyadic::from_int(-7);
        assert_eq!(n.round(2, Dir::Down), Dyadic { m: BigInt::from(-4), e: 1 });
        assert_eq!(n.round(2, Dir::Up), Dyadic { m: BigInt::from(-3), e: 1 });
    }

    #[test]
    fn pi_matches_reference() {
        let p = pi(128);
        assert!(!p.contains_zero());
        let mid = p.to_f64_mid();
        assert!((mid - std::f64::consts::PI).abs() < 1e-12);
        assert!(p.width().to_f64() < 1e-35);
        // tighter precision gives a narrower interval
        let p2 = pi(256);
        assert!(p.contains(&p2));
        assert!(p2.width().cmp(&p.width()) == std::cmp::Ordering::Less);
    }

    #[test]
    fn sin_cos_reference_values() {
        let w = 96;
        let third_pi = pi(w).div_uint(&BigUint::from(3u32), w);
        // cos(pi/3) = 1/2 exactly
        let c = cos_interval(&third_pi, w);
        let half = Dyadic { m: BigInt::one(), e: -1 };
        assert!(c.lo.cmp(&half) == std::cmp::Ordering::Less);
        assert!(c.hi.cmp(&half) == std::cmp::Ordering::Greater);
        assert!(c.width().to_f64() < 1e-25);
        // sin(pi) contains 0
        let s = sin_interval(&pi(w), w);
        assert!(s.contains_zero());
        assert!(s.width().to_f64() < 1e-25);
    }

    #[test]
    fn embedding_of_zeta_7() {
        // zeta_7 -> exp(2 pi i * 4/7) = exp(8 pi i / 7):
        // re = -cos(pi/7) ~ -0.9009688679, im = -sin(pi/7) ~ -0.4338837391
        let z = CyclotomicRat::zeta_pow(7, 1);
        let e = complex_embed(&z, 96).unwrap();
        assert!((e.re.to_f64_mid() + 0.9009688679024191).abs() < 1e-12);
        assert!((e.im.to_f64_mid() + 0.43388373911755823).abs() < 1e-12);
        assert!(e.re.is_negative() && e.im.is_negative());
    }

    #[test]
    fn embedding_rejects_low_precision() {
        let z = CyclotomicRat::zeta_pow(7, 1);
        assert!(complex_embed(&z, 32).is_err());
    }

    #[test]
    fn embedding_respects_products() {
        // embed(x*y) at higher precision sits inside embed(x)*embed(y)
        let x = CyclotomicRat::zeta_pow(7, 3).add(&CyclotomicRat::from_integer(7, 2));
        let y = CyclotomicRat::zeta_pow(7, 5).sub(&CyclotomicRat::from_integer(7, 1));
        let prod = complex_embed(&x.mul(&y), 192).unwrap();
        let ex = complex_embed(&x, 96).unwrap();
        let ey = complex_embed(&y, 96).unwrap();
        assert!(ex.mul(&ey, 96).contains(&prod));
    }

    #[test]
    fn real_element_embeds_on_axis() {
        let t = CyclotomicRat::zeta_pow(7, 1).add(&CyclotomicRat::zeta_pow(7, -1));
        let e = complex_embed(&t, 96).unwrap();
        assert!(e.im.contains_zero());
        // t = 2 cos(8 pi / 7) ~ -1.8019377358
        assert!((e.re.to_f64_mid() + 1.8019377358048383).abs() < 1e-12);
    }

    #[test]
    fn width_shrinks_with_precision() {
        let x = CyclotomicRat::zeta_pow(11, 7).add(&CyclotomicRat::from_integer(11, 3));
        let a = complex_embed(&x, 64).unwrap();
        let b = complex_embed(&x, 160).unwrap();
        assert!(b.re.width().cmp(&a.re.width()) == std::cmp::Ordering::Less);
        assert!(a.contains(&b));
    }
}
