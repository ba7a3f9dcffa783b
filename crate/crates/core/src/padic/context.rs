use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Prime and precision cap shared by a family of p-adic values.
#[derive(Clone)]
pub struct PadicContext {
    p: u64,
    n: u32,
    pows: Arc<Vec<BigInt>>,
}

impl PadicContext {
    pub fn new(p: u64, n: u32) -> Self {
        assert!(p > 3 && is_prime(p), "p must be a prime > 3, got {p}");
        assert!(n >= 1, "precision must be positive");
        let mut pows = Vec::with_capacity(2 * n as usize + 2);
        let pb = BigInt::from(p);
        let mut acc = BigInt::one();
        for _ in 0..=(2 * n as usize + 1) {
            pows.push(acc.clone());
            acc *= &pb;
        }
        PadicContext { p, n, pows: Arc::new(pows) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// p^k for k >= 0.
    pub fn pow(&self, k: i64) -> BigInt {
        assert!(k >= 0);
        let k = k as usize;
        if k < self.pows.len() {
            self.pows[k].clone()
        } else {
            num_traits::pow(BigInt::from(self.p), k)
        }
    }

    pub fn modulus(&self) -> BigInt {
        self.pow(self.n as i64)
    }

    /// Same prime, different cap.
    pub fn with_precision(&self, n: u32) -> Self {
        if n == self.n {
            self.clone()
        } else {
            PadicContext::new(self.p, n)
        }
    }

    /// Largest k with p^k | x; None for x = 0.
    pub fn val_of(&self, x: &BigInt) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let pb = BigInt::from(self.p);
        let mut v = 0;
        let mut y = x.clone();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&y, &pb);
            if !r.is_zero() {
                return Some(v);
            }
            y = q;
            v += 1;
        }
    }

    /// x / p^v(x) and v(x), for nonzero x.
    pub fn split_val(&self, x: &BigInt) -> (i64, BigInt) {
        let v = self.val_of(x).expect("split_val of zero");
        let u = x / self.pow(v);
        (v, u)
    }
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}

impl Eq for PadicContext {}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Qp(p={}, N={})", self.p, self.n)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut q = n + 1;
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// Non-negative remainder.
pub fn modp(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x % m;
    if r < BigInt::zero() {
        r + m
    } else {
        r
    }
}

/// Inverse of a unit modulo m.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = modp(a, m);
    let e = num_integer::Integer::extended_gcd(&a, m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(modp(&e.x, m))
}
