//! Laurent series in f with coefficients of degree < 4: sum_K d_K(x) f^K, over Z/p^R.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::padic::modp;

pub type Digit = [BigInt; 4];

fn zero_digit() -> Digit {
    [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]
}

#[derive(Clone, Debug)]
pub struct FRing {
    pub f: [BigInt; 5],
    pub modulus: BigInt,
}

#[derive(Clone, Debug)]
pub struct FLaurent {
    pub low: i64,
    pub d: Vec<Digit>,
}

impl FLaurent {
    pub fn high(&self) -> i64 {
        self.low + self.d.len() as i64 - 1
    }

    pub fn digit(&self, k: i64) -> Option<&Digit> {
        if k < self.low || k > self.high() {
            None
        } else {
            Some(&self.d[(k - self.low) as usize])
        }
    }

    pub fn shift(&self, k: i64) -> FLaurent {
        FLaurent { low: self.low + k, d: self.d.clone() }
    }
}

impl FRing {
    pub fn new(f: &[BigInt], modulus: BigInt) -> Self {
        assert_eq!(f.len(), 5);
        FRing { f: [f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone(), f[4].clone()], modulus }
    }

    fn red(&self, x: &BigInt) -> BigInt {
        modp(x, &self.modulus)
    }

    pub fn one(&self) -> FLaurent {
        let mut d = zero_digit();
        d[0] = BigInt::from(1);
        FLaurent { low: 0, d: vec![d] }
    }

    /// Split polynomials of arbitrary degree placed at positions low.. into f-adic digits.
    fn carry(&self, low: i64, mut acc: Vec<Vec<BigInt>>) -> FLaurent {
        let mut out: Vec<Digit> = Vec::with_capacity(acc.len() + 2);
        let mut k = 0;
        while k < acc.len() {
            let mut poly = std::mem::take(&mut acc[k]);
            for c in poly.iter_mut() {
                *c = self.red(c);
            }
            let mut q: Vec<BigInt> = vec![];
            if poly.len() > 4 {
                q = vec![BigInt::zero(); poly.len() - 4];
                for j in (4..poly.len()).rev() {
                    let c = poly[j].clone();
                    if c.is_zero() {
                        continue;
                    }
                    q[j - 4] = c.clone();
                    for i in 0..5 {
                        let t = &poly[j - 4 + i] - &c * &self.f[i];
                        poly[j - 4 + i] = t;
                    }
                }
            }
            let mut d = zero_digit();
            for (i, slot) in d.iter_mut().enumerate() {
                if let Some(c) = poly.get(i) {
                    *slot = self.red(c);
                }
            }
            out.push(d);
            if q.iter().any(|c| !self.red(c).is_zero()) {
                if k + 1 == acc.len() {
                    acc.push(vec![]);
                }
                let nxt = &mut acc[k + 1];
                if nxt.len() < q.len() {
                    nxt.resize(q.len(), BigInt::zero());
                }
                for (i, c) in q.into_iter().enumerate() {
                    nxt[i] += c;
                }
            }
            k += 1;
        }
        let mut r = FLaurent { low, d: out };
        self.trim(&mut r);
        r
    }

    fn trim(&self, a: &mut FLaurent) {
        while a.d.len() > 1 && a.d.last().unwrap().iter().all(|c| c.is_zero()) {
            a.d.pop();
        }
        while a.d.len() > 1 && a.d[0].iter().all(|c| c.is_zero()) {
            a.d.remove(0);
            a.low += 1;
        }
    }

    pub fn from_poly(&self, p: &[BigInt]) -> FLaurent {
        self.carry(0, vec![p.to_vec()])
    }

    pub fn mul(&self, a: &FLaurent, b: &FLaurent) -> FLaurent {
        let n = a.d.len() + b.d.len() - 1;
        let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); 7]; n];
        for (i, da) in a.d.iter().enumerate() {
            for (j, db) in b.d.iter().enumerate() {
                let slot = &mut acc[i + j];
                for (u, x) in da.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (v, y) in db.iter().enumerate() {
                        if !y.is_zero() {
                            slot[u + v] += x * y;
                        }
                    }
                }
            }
        }
        self.carry(a.low + b.low, acc)
    }

    pub fn add(&self, a: &FLaurent, b: &FLaurent) -> FLaurent {
        let low = a.low.min(b.low);
        let high = a.high().max(b.high());
        let mut d = Vec::with_capacity((high - low + 1) as usize);
        for k in low..=high {
            let mut digit = zero_digit();
            for src in [a.digit(k), b.digit(k)].into_iter().flatten() {
                for i in 0..4 {
                    digit[i] += &src[i];
                }
            }
            for c in digit.iter_mut() {
                *c = self.red(c);
            }
            d.push(digit);
        }
        let mut r = FLaurent { low, d };
        self.trim(&mut r);
        r
    }

    pub fn scale(&self, a: &FLaurent, s: &BigInt) -> FLaurent {
        let d = a.d.iter().map(|dg| [self.red(&(&dg[0] * s)), self.red(&(&dg[1] * s)), self.red(&(&dg[2] * s)), self.red(&(&dg[3] * s))]).collect();
        FLaurent { low: a.low, d }
    }

    /// Multiply by x.
    pub fn mul_x(&self, a: &FLaurent) -> FLaurent {
        let mut d: Vec<Digit> = Vec::with_capacity(a.d.len() + 1);
        let mut carry = BigInt::zero();
        for dg in a.d.iter() {
            let top = dg[3].clone();
            let mut nd = zero_digit();
            nd[0] = self.red(&(&carry - &top * &self.f[0]));
            for i in 1..4 {
                nd[i] = self.red(&(&dg[i - 1] - &top * &self.f[i]));
            }
            d.push(nd);
            carry = top;
        }
        if !carry.is_zero() {
            let mut nd = zero_digit();
            nd[0] = carry;
            d.push(nd);
        }
        FLaurent { low: a.low, d }
    }

    pub fn mul_x_pow(&self, a: &FLaurent, k: usize) -> FLaurent {
        let mut r = a.clone();
        for _ in 0..k {
            r = self.mul_x(&r);
        }
        r
    }

    /// sum_{K >= 0} d_K f^K as a polynomial.
    pub fn nonnegative_part(&self, a: &FLaurent) -> Vec<BigInt> {
        let mut acc: Vec<BigInt> = vec![];
        for k in (0.max(a.low)..=a.high()).rev() {
            // acc = acc * f + d_k
            let mut next = vec![BigInt::zero(); acc.len() + 4];
            for (i, c) in acc.iter().enumerate() {
                for j in 0..5 {
                    next[i + j] += c * &self.f[j];
                }
            }
            let dg = a.digit(k).unwrap();
            if next.len() < 4 {
                next.resize(4, BigInt::zero());
            }
            for i in 0..4 {
                next[i] += &dg[i];
            }
            acc = next.iter().map(|c| self.red(c)).collect();
        }
        acc
    }

    /// Reduce all coefficients to a smaller modulus.
    pub fn reduce_to(&self, a: &FLaurent, m: &BigInt) -> FLaurent {
        let d = a.d.iter().map(|dg| [modp(&dg[0], m), modp(&dg[1], m), modp(&dg[2], m), modp(&dg[3], m)]).collect();
        FLaurent { low: a.low, d }
    }
}
