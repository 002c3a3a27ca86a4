//! Small integer utilities: deterministic primality, factorization, modular arithmetic.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic Miller-Rabin for u64 (the 12 smallest primes as witnesses
/// cover the full 64-bit range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn modinv_u64(a: u64, q: u64) -> u64 {
    // q prime in all our uses
    powmod(a % q, q - 2, q)
}

/// Legendre symbol (a/p) for odd prime p, returned as +1, -1 or 0.
pub fn legendre(a: u64, p: u64) -> i32 {
    let r = powmod(a % p, (p - 1) / 2, p);
    if r == 0 {
        0
    } else if r == 1 {
        1
    } else {
        -1
    }
}

/// Prime factorization of a BigUint with small trial division plus Pollard rho.
/// Returns (prime, exponent) pairs sorted by prime.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut factors: Vec<BigUint> = Vec::new();
    let mut stack = vec![n.clone()];
    while let Some(mut m) = stack.pop() {
        if m.is_one() || m.is_zero() {
            continue;
        }
        // trial division
        let mut d = 2u64;
        while d < 100_000 && BigUint::from(d) * BigUint::from(d) <= m {
            while (&m % d).is_zero() {
                factors.push(BigUint::from(d));
                m /= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if m.is_one() {
            continue;
        }
        if let Some(v) = m.to_u64_digits().first().copied().filter(|_| m.bits() <= 64) {
            if is_prime_u64(v) {
                factors.push(m);
                continue;
            }
        } else if is_probable_prime_big(&m) {
            factors.push(m);
            continue;
        }
        if m.bits() <= 64 {
            let v = m.to_u64_digits()[0];
            if is_prime_u64(v) {
                factors.push(m);
                continue;
            }
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    factors.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for f in factors {
        match out.last_mut() {
            Some((p, e)) if *p == f => *e += 1,
            _ => out.push((f, 1)),
        }
    }
    out
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    // Miller-Rabin with fixed witnesses; our inputs stay well below 128 bits,
    // where these witnesses are a trustworthy battery.
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    if n.bit(0) == false {
        return *n == two;
    }
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::from(1u32);
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = num_integer::Integer::gcd(&diff, n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += &one;
    }
}
