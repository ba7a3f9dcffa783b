//! Local coordinates on residue disks and expansions of the basis forms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CurvePoint, PicardCurve};
use crate::error::{Error, Result};
use crate::padic::{modp, PadicContext, PadicElement, RamifiedElement};
use crate::series::{PadicSeries, ZRing, ZSeries};

#[derive(Clone, Debug)]
pub enum LocalKind {
    /// x = x0 + t, y = y(t).
    Good { x0: BigInt, y: ZSeries },
    /// y = t, x = a + X(t^3).
    BadFinite { a: BigInt, xs: ZSeries },
    /// x = t^-3, y = t^-4 u(t^3).
    Infinity { u: ZSeries },
}

/// Expansion of the coordinates in a uniformizer t, coefficients mod p^digits.
#[derive(Clone, Debug)]
pub struct LocalCoordinates {
    pub ring: ZRing,
    pub kind: LocalKind,
}

/// sum_j c_j t^(offset + step*j), integral coefficients mod p^digits.
#[derive(Clone, Debug)]
pub struct SparseLaurent {
    pub offset: i64,
    pub step: usize,
    pub c: Vec<BigInt>,
}

impl SparseLaurent {
    pub fn exponent(&self, j: usize) -> i64 {
        self.offset + (self.step * j) as i64
    }

    /// Dense power series, when there are no negative powers.
    pub fn to_dense(&self, len: usize) -> Option<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); len];
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.exponent(j);
            if n < 0 {
                return None;
            }
            if (n as usize) < len {
                out[n as usize] = c.clone();
            }
        }
        Some(out)
    }

    pub fn add_scaled(&self, other: &SparseLaurent, s: &BigInt, m: &BigInt) -> SparseLaurent {
        assert_eq!(self.step, other.step);
        let off = self.offset.min(other.offset);
        assert_eq!((self.offset - off) % self.step as i64, 0);
        assert_eq!((other.offset - off) % self.step as i64, 0);
        let sa = ((self.offset - off) / self.step as i64) as usize;
        let sb = ((other.offset - off) / self.step as i64) as usize;
        let len = (self.c.len() + sa).max(other.c.len() + sb);
        let mut c = vec![BigInt::zero(); len];
        for (j, x) in self.c.iter().enumerate() {
            c[j + sa] += x;
        }
        for (j, x) in other.c.iter().enumerate() {
            c[j + sb] += x * s;
        }
        SparseLaurent { offset: off, step: self.step, c: c.iter().map(|x| modp(x, m)).collect() }
    }
}

fn ring_len_for(ctx: &PadicContext, digits: i64, len: usize) -> ZRing {
    ZRing::new(ctx, digits, len)
}

impl LocalCoordinates {
    /// Good disk around an affine Z_p-point (x0, y0) with y0 a unit.
    pub fn good(curve: &PicardCurve, x0: &PadicElement, y0: &PadicElement, len: usize, digits: i64) -> Self {
        let ring = ring_len_for(x0.ctx(), digits, len);
        let x0r = x0.residue(digits);
        let y0r = y0.residue(digits);
        let xs = ring.add(&ring.constant(&x0r), &ring.t());
        let fx = ring.compose_poly(curve.f(), &xs);
        let y = ring.cube_root(&fx, &y0r);
        LocalCoordinates { ring, kind: LocalKind::Good { x0: x0r, y } }
    }

    /// Bad finite disk around the ramification point (a, 0); `len` counts powers of t^3.
    pub fn bad_finite(curve: &PicardCurve, a: &PadicElement, len: usize, digits: i64) -> Self {
        let ring = ring_len_for(a.ctx(), digits, len);
        let ar = a.residue(digits);
        let m = &ring.modulus;
        // Taylor coefficients d_j = f^(j)(a)/j!
        let f = curve.f();
        let mut d = vec![BigInt::zero(); 5];
        for (j, dj) in d.iter_mut().enumerate() {
            let mut s = BigInt::zero();
            for (i, c) in f.iter().enumerate().skip(j) {
                s += c * binom(i, j) * ar.modpow(&BigInt::from(i - j), m);
            }
            *dj = modp(&s, m);
        }
        let d1inv = crate::padic::inv_mod(&d[1], m).expect("f'(a) is a unit");
        let mut x = vec![BigInt::zero(); len];
        let mut x2 = vec![BigInt::zero(); len];
        let mut x3 = vec![BigInt::zero(); len];
        let mut x4 = vec![BigInt::zero(); len];
        for n in 1..len {
            let mut s2 = BigInt::zero();
            for i in 1..n {
                s2 += &x[i] * &x[n - i];
            }
            x2[n] = modp(&s2, m);
            let mut s3 = BigInt::zero();
            for i in 1..n {
                s3 += &x[i] * &x2[n - i];
            }
            x3[n] = modp(&s3, m);
            let mut s4 = BigInt::zero();
            for i in 1..n {
                s4 += &x[i] * &x3[n - i];
            }
            x4[n] = modp(&s4, m);
            let rhs = if n == 1 { BigInt::one() } else { BigInt::zero() } - &d[2] * &x2[n] - &d[3] * &x3[n] - &d[4] * &x4[n];
            x[n] = modp(&(rhs * &d1inv), m);
            // the new x[n] feeds x2, x3, x4 at higher indices only
        }
        LocalCoordinates { ring, kind: LocalKind::BadFinite { a: ar, xs: ZSeries { c: x } } }
    }

    /// Disk at infinity; `len` counts powers of t^3.
    pub fn infinity(curve: &PicardCurve, ctx: &PadicContext, len: usize, digits: i64) -> Self {
        let ring = ring_len_for(ctx, digits, len);
        let f = curve.f();
        // t^12 f(t^-3) = sum_i c_i s^(4-i) with s = t^3
        let rev: Vec<BigInt> = (0..5).map(|j| f[4 - j].clone()).collect();
        let g = ring.from_coeffs(&rev);
        let u = ring.cube_root(&g, &BigInt::one());
        LocalCoordinates { ring, kind: LocalKind::Infinity { u } }
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ring.ctx
    }

    pub fn digits(&self) -> i64 {
        self.ring.digits
    }

    /// x(t) and y(t) as Laurent data (dense over the t-variable, with offsets for infinity).
    pub fn x_series(&self) -> SparseLaurent {
        match &self.kind {
            LocalKind::Good { x0, .. } => SparseLaurent { offset: 0, step: 1, c: vec![x0.clone(), BigInt::one()] },
            LocalKind::BadFinite { a, xs } => {
                let mut c = xs.c.clone();
                c[0] = a.clone();
                SparseLaurent { offset: 0, step: 3, c }
            }
            LocalKind::Infinity { .. } => SparseLaurent { offset: -3, step: 3, c: vec![BigInt::one()] },
        }
    }

    pub fn y_series(&self) -> SparseLaurent {
        match &self.kind {
            LocalKind::Good { y, .. } => SparseLaurent { offset: 0, step: 1, c: y.c.clone() },
            LocalKind::BadFinite { .. } => SparseLaurent { offset: 1, step: 3, c: vec![BigInt::one()] },
            LocalKind::Infinity { u } => SparseLaurent { offset: -4, step: 3, c: u.c.clone() },
        }
    }

    /// Expansion of x^a dx / y^k in t.
    pub fn form(&self, a: u32, k: u32) -> SparseLaurent {
        let r = &self.ring;
        match &self.kind {
            LocalKind::Good { x0, y } => {
                let xs = r.add(&r.constant(x0), &r.t());
                let xa = r.pow(&xs, a as u64);
                let yinv = r.inverse(y);
                let yk = r.pow(&yinv, k as u64);
                SparseLaurent { offset: 0, step: 1, c: r.mul(&xa, &yk).c }
            }
            LocalKind::BadFinite { a: a0, xs } => {
                // x' dt = 3 t^2 X'(s) dt, so the form is 3 t^(2-k) (a0 + X)^a X'(s) dt.
                let mut xfull = xs.clone();
                xfull.c[0] = a0.clone();
                let xa = r.pow(&xfull, a as u64);
                let dx = r.derivative(xs);
                let body = r.scale(&r.mul(&xa, &dx), &BigInt::from(3));
                SparseLaurent { offset: 2 - k as i64, step: 3, c: body.c }
            }
            LocalKind::Infinity { u } => {
                let uinv = r.inverse(u);
                let uk = r.pow(&uinv, k as u64);
                let body = r.scale(&uk, &BigInt::from(-3));
                SparseLaurent { offset: 4 * k as i64 - 4 - 3 * a as i64, step: 3, c: body.c }
            }
        }
    }

    /// Evaluate a Laurent expansion at a Q_p value of t.
    pub fn eval(&self, s: &SparseLaurent, t: &PadicElement) -> PadicElement {
        let ctx = self.ctx();
        let d = self.digits();
        let step = t.pow(s.step as i64).expect("t^step");
        let mut acc = PadicElement::zero_to(ctx, i64::MAX / 4);
        for c in s.c.iter().rev() {
            acc = acc.mul(&step).add(&PadicElement::from_fixed(ctx, c, 0, d));
        }
        acc.mul(&t.pow(s.offset).expect("t^offset"))
    }

    /// Evaluate at a ramified value of t.
    pub fn eval_ramified(&self, s: &SparseLaurent, t: &RamifiedElement) -> RamifiedElement {
        let ctx = self.ctx();
        let e = t.e();
        let d = self.digits();
        let step = t.pow(s.step as i64).expect("t^step");
        let shift_only = step.offset_only();
        let mut acc = RamifiedElement::zero_to(ctx, e, i64::MAX / 4);
        for c in s.c.iter().rev() {
            acc = match shift_only {
                Some(k) => acc.shift_pi(k),
                None => acc.mul(&step),
            };
            acc = acc.add(&RamifiedElement::from_padic(&PadicElement::from_fixed(ctx, c, 0, d), e));
        }
        acc.mul(&t.pow(s.offset).expect("t^offset"))
    }

    pub fn point_at(&self, t: &PadicElement) -> CurvePoint {
        if t.is_zero() {
            if let LocalKind::Infinity { .. } = self.kind {
                return CurvePoint::Infinity;
            }
        }
        CurvePoint::Affine { x: self.eval(&self.x_series(), t), y: self.eval(&self.y_series(), t) }
    }

    pub fn point_at_ramified(&self, t: &RamifiedElement) -> CurvePoint {
        CurvePoint::Ramified { x: self.eval_ramified(&self.x_series(), t), y: self.eval_ramified(&self.y_series(), t) }
    }

    /// Integral of a regular expansion from t1 to t2.
    pub fn integrate(&self, s: &SparseLaurent, t1: &PadicElement, t2: &PadicElement) -> Result<PadicElement> {
        let anti = self.antiderivative(s)?;
        Ok(anti.eval_at(self, t2).sub(&anti.eval_at(self, t1)))
    }

    pub fn integrate_ramified(&self, s: &SparseLaurent, t1: &RamifiedElement, t2: &RamifiedElement) -> Result<RamifiedElement> {
        let anti = self.antiderivative(s)?;
        Ok(anti.eval_at_ramified(self, t2).sub(&anti.eval_at_ramified(self, t1)))
    }

    pub fn antiderivative(&self, s: &SparseLaurent) -> Result<Antiderivative> {
        let ctx = self.ctx();
        let d = self.digits();
        let mut terms = Vec::with_capacity(s.c.len());
        for (j, c) in s.c.iter().enumerate() {
            let n = s.exponent(j);
            if n == -1 {
                if !modp(c, &self.ring.modulus).is_zero() {
                    return Err(Error::PoleInDisk);
                }
                terms.push(PadicElement::zero_to(ctx, d));
                continue;
            }
            terms.push(PadicElement::from_fixed(ctx, c, 0, d).div_int(n + 1));
        }
        Ok(Antiderivative { offset: s.offset + 1, step: s.step, terms })
    }

    /// Dense PadicSeries of a regular expansion, for root finding.
    pub fn to_padic_series(&self, s: &SparseLaurent, len: usize) -> Result<PadicSeries> {
        let dense = s.to_dense(len).ok_or(Error::PoleInDisk)?;
        Ok(PadicSeries::from_fixed(self.ctx(), &ZSeries { c: dense }, self.digits()))
    }

    /// Check y(t)^3 = f(x(t)) on the stored expansion; returns the first failing degree.
    pub fn identity_defect(&self, curve: &PicardCurve) -> Option<usize> {
        let r = &self.ring;
        match &self.kind {
            LocalKind::Good { x0, y } => {
                let xs = r.add(&r.constant(x0), &r.t());
                let lhs = r.pow(y, 3);
                let rhs = r.compose_poly(curve.f(), &xs);
                (0..r.len).find(|&i| lhs.c[i] != rhs.c[i])
            }
            LocalKind::BadFinite { a, xs } => {
                let mut x = xs.clone();
                x.c[0] = a.clone();
                let fx = r.compose_poly(curve.f(), &x);
                let mut target = r.zero();
                if r.len > 1 {
                    target.c[1] = BigInt::one();
                }
                (0..r.len).find(|&i| fx.c[i] != target.c[i])
            }
            LocalKind::Infinity { u } => {
                let f = curve.f();
                let rev: Vec<BigInt> = (0..5).map(|j| f[4 - j].clone()).collect();
                let g = r.from_coeffs(&rev);
                let u3 = r.pow(u, 3);
                (0..r.len).find(|&i| u3.c[i] != g.c[i])
            }
        }
    }
}

/// sum_j terms_j t^(offset + step*j) with Q_p coefficients.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    pub offset: i64,
    pub step: usize,
    pub terms: Vec<PadicElement>,
}

impl Antiderivative {
    pub fn eval_at(&self, lc: &LocalCoordinates, t: &PadicElement) -> PadicElement {
        let ctx = lc.ctx();
        if t.is_zero() && self.offset >= 0 {
            // every exponent is positive for a regular form
            let first = self.terms.iter().position(|c| !c.is_zero());
            return match first {
                Some(j) if self.offset + (self.step * j) as i64 == 0 => self.terms[j].clone(),
                _ => PadicElement::zero_to(ctx, t.abs_prec().max(0) + self.offset),
            };
        }
        let step = t.pow(self.step as i64).expect("t^step");
        let mut acc = PadicElement::zero_to(ctx, i64::MAX / 4);
        for c in self.terms.iter().rev() {
            acc = acc.mul(&step).add(c);
        }
        acc.mul(&t.pow(self.offset).expect("t^offset"))
    }

    pub fn eval_at_ramified(&self, _lc: &LocalCoordinates, t: &RamifiedElement) -> RamifiedElement {
        let ctx = t.ctx();
        let e = t.e();
        let step = t.pow(self.step as i64).expect("t^step");
        let shift_only = step.offset_only();
        let mut acc = RamifiedElement::zero_to(ctx, e, i64::MAX / 4);
        for c in self.terms.iter().rev() {
            acc = match shift_only {
                Some(k) => acc.shift_pi(k),
                None => acc.mul(&step),
            };
            acc = acc.add(&RamifiedElement::from_padic(&c.with_context(ctx), e));
        }
        acc.mul(&t.pow(self.offset).expect("t^offset"))
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
