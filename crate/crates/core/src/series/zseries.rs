//! Integral power series with fixed absolute precision: coefficients live in Z/p^R.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::padic::{inv_mod, modp, PadicContext};

#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries {
    pub c: Vec<BigInt>,
}

/// Arithmetic of truncated series over Z/p^R, length-capped at `len` terms.
#[derive(Clone, Debug)]
pub struct ZRing {
    pub ctx: PadicContext,
    pub modulus: BigInt,
    pub digits: i64,
    pub len: usize,
}

impl ZRing {
    pub fn new(ctx: &PadicContext, digits: i64, len: usize) -> Self {
        ZRing { ctx: ctx.clone(), modulus: ctx.pow(digits), digits, len }
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        modp(x, &self.modulus)
    }

    pub fn from_coeffs(&self, c: &[BigInt]) -> ZSeries {
        let mut v: Vec<BigInt> = c.iter().take(self.len).map(|x| self.reduce(x)).collect();
        v.resize(self.len, BigInt::zero());
        ZSeries { c: v }
    }

    pub fn zero(&self) -> ZSeries {
        ZSeries { c: vec![BigInt::zero(); self.len] }
    }

    pub fn constant(&self, a: &BigInt) -> ZSeries {
        let mut s = self.zero();
        if self.len > 0 {
            s.c[0] = self.reduce(a);
        }
        s
    }

    /// The series t.
    pub fn t(&self) -> ZSeries {
        let mut s = self.zero();
        if self.len > 1 {
            s.c[1] = BigInt::one();
        }
        s
    }

    pub fn add(&self, a: &ZSeries, b: &ZSeries) -> ZSeries {
        ZSeries { c: a.c.iter().zip(b.c.iter()).map(|(x, y)| self.reduce(&(x + y))).collect() }
    }

    pub fn sub(&self, a: &ZSeries, b: &ZSeries) -> ZSeries {
        ZSeries { c: a.c.iter().zip(b.c.iter()).map(|(x, y)| self.reduce(&(x - y))).collect() }
    }

    pub fn scale(&self, a: &ZSeries, s: &BigInt) -> ZSeries {
        ZSeries { c: a.c.iter().map(|x| self.reduce(&(x * s))).collect() }
    }

    pub fn mul(&self, a: &ZSeries, b: &ZSeries) -> ZSeries {
        let n = self.len;
        let mut out = vec![BigInt::zero(); n];
        let bl = b.c.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..bl.min(n - i) {
                if !b.c[j].is_zero() {
                    out[i + j] += x * &b.c[j];
                }
            }
        }
        ZSeries { c: out.iter().map(|x| self.reduce(x)).collect() }
    }

    pub fn pow(&self, a: &ZSeries, k: u64) -> ZSeries {
        let mut acc = self.constant(&BigInt::one());
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse of a series with unit constant term.
    pub fn inverse(&self, a: &ZSeries) -> ZSeries {
        let a0 = inv_mod(&a.c[0], &self.modulus).expect("constant term must be a unit");
        let n = self.len;
        let mut out = vec![BigInt::zero(); n];
        out[0] = a0.clone();
        for k in 1..n {
            let mut s = BigInt::zero();
            for j in 1..=k {
                if !a.c[j].is_zero() {
                    s += &a.c[j] * &out[k - j];
                }
            }
            out[k] = self.reduce(&(-s * &a0));
        }
        ZSeries { c: out }
    }

    /// Evaluate an integer polynomial at a series.
    pub fn compose_poly(&self, f: &[BigInt], s: &ZSeries) -> ZSeries {
        let mut acc = self.zero();
        for c in f.iter().rev() {
            acc = self.mul(&acc, s);
            acc.c[0] = self.reduce(&(&acc.c[0] + c));
        }
        acc
    }

    /// The cube root of a series with constant term 1 congruent to 1 mod p or with unit
    /// constant term whose cube root `r0` is supplied.
    pub fn cube_root(&self, a: &ZSeries, r0: &BigInt) -> ZSeries {
        // Coefficientwise recursion: y^3 = a, y_0 = r0, 3 y0^2 y_k = a_k - [t^k](y^3 without y_k terms).
        let n = self.len;
        let three_y02 = self.reduce(&(BigInt::from(3) * r0 * r0));
        let inv = inv_mod(&three_y02, &self.modulus).expect("3*y0^2 must be a unit");
        let mut y = self.zero();
        y.c[0] = self.reduce(r0);
        let mut y2 = self.zero(); // y^2 so far
        y2.c[0] = self.reduce(&(r0 * r0));
        for k in 1..n {
            // [t^k] y^3 with y_k = 0 equals sum_{j=1}^{k-1} y_j * y2_{k-j} + y_0 * y2'_k
            // where y2'_k excludes y_k; y2'_k = sum_{j=1}^{k-1} y_j y_{k-j}.
            let mut y2k = BigInt::zero();
            for j in 1..k {
                y2k += &y.c[j] * &y.c[k - j];
            }
            let mut cube = r0 * &y2k;
            for j in 1..k {
                cube += &y.c[j] * &y2.c[k - j];
            }
            let yk = self.reduce(&((&a.c[k] - cube) * &inv));
            y.c[k] = yk.clone();
            y2.c[k] = self.reduce(&(y2k + BigInt::from(2) * r0 * &yk));
        }
        y
    }

    pub fn derivative(&self, a: &ZSeries) -> ZSeries {
        let mut s = self.zero();
        for i in 1..self.len {
            s.c[i - 1] = self.reduce(&(&a.c[i] * BigInt::from(i)));
        }
        s
    }

    /// Substitute t -> t^k.
    pub fn inflate(&self, a: &ZSeries, k: usize) -> ZSeries {
        let mut s = self.zero();
        for (i, x) in a.c.iter().enumerate() {
            if i * k < self.len {
                s.c[i * k] = x.clone();
            } else {
                break;
            }
        }
        s
    }

    /// Multiply by t^k (k >= 0), dropping overflow.
    pub fn shift(&self, a: &ZSeries, k: usize) -> ZSeries {
        let mut s = self.zero();
        for i in 0..self.len.saturating_sub(k) {
            s.c[i + k] = a.c[i].clone();
        }
        s
    }

    /// Evaluate at an integer t (exact arithmetic mod p^R).
    pub fn eval(&self, a: &ZSeries, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in a.c.iter().rev() {
            acc = self.reduce(&(acc * t + c));
        }
        acc
    }

    pub fn resize(&self, a: &ZSeries) -> ZSeries {
        self.from_coeffs(&a.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_and_inverse() {
        let ctx = PadicContext::new(7, 10);
        let r = ZRing::new(&ctx, 10, 12);
        let a = r.from_coeffs(&[BigInt::from(8), BigInt::from(3), BigInt::from(5)]);
        let y = r.cube_root(&a, &BigInt::from(2));
        assert_eq!(r.pow(&y, 3), a);
        let ai = r.inverse(&a);
        assert_eq!(r.mul(&a, &ai), r.constant(&BigInt::one()));
    }
}
