use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::context::{inv_mod, modp, PadicContext};
use super::element::PadicElement;
use crate::error::{Error, Result};

/// Element of Q_p(pi) with pi^e = p.
///
/// Stored as `pi^val * sum c_i pi^i` (0 <= i < e) with the c_i taken mod p^N,
/// known modulo pi^prec. Precision and valuations are in pi-units.
#[derive(Clone)]
pub struct RamifiedElement {
    ctx: PadicContext,
    e: u32,
    val: i64,
    c: Vec<BigInt>,
    prec: i64,
}

fn p_val_capped(ctx: &PadicContext, x: &BigInt, cap: i64) -> i64 {
    if x.is_zero() {
        return cap;
    }
    ctx.val_of(x).unwrap().min(cap)
}

impl RamifiedElement {
    pub fn zero_to(ctx: &PadicContext, e: u32, prec: i64) -> Self {
        assert!(e >= 1);
        RamifiedElement { ctx: ctx.clone(), e, val: prec, c: vec![BigInt::zero(); e as usize], prec }
    }

    pub fn zero(ctx: &PadicContext, e: u32) -> Self {
        Self::zero_to(ctx, e, e as i64 * ctx.n() as i64)
    }

    pub fn one(ctx: &PadicContext, e: u32) -> Self {
        Self::from_padic(&PadicElement::one(ctx), e)
    }

    /// The uniformizer pi.
    pub fn pi(ctx: &PadicContext, e: u32) -> Self {
        Self::pi_power(ctx, e, 1)
    }

    pub fn pi_power(ctx: &PadicContext, e: u32, k: i64) -> Self {
        let mut c = vec![BigInt::zero(); e as usize];
        c[0] = BigInt::one();
        let rn = e as i64 * ctx.n() as i64;
        RamifiedElement { ctx: ctx.clone(), e, val: k, c, prec: k + rn }
    }

    pub fn from_int(ctx: &PadicContext, e: u32, n: i64) -> Self {
        Self::from_padic(&PadicElement::from_int(ctx, n), e)
    }

    pub fn from_padic(a: &PadicElement, e: u32) -> Self {
        let ctx = a.ctx().clone();
        let ei = e as i64;
        if a.is_zero() {
            return Self::zero_to(&ctx, e, a.abs_prec() * ei);
        }
        let mut c = vec![BigInt::zero(); e as usize];
        c[0] = modp(a.unit(), &ctx.modulus());
        let v = a.val_or_prec();
        RamifiedElement { ctx, e, val: v * ei, c, prec: a.abs_prec() * ei }
    }

    /// Build from raw coefficients: value `pi^val * sum c_i pi^i`, known mod pi^prec.
    pub fn from_coeffs(ctx: &PadicContext, e: u32, val: i64, c: Vec<BigInt>, prec: i64) -> Self {
        assert_eq!(c.len(), e as usize);
        let m = ctx.modulus();
        let c = c.iter().map(|x| modp(x, &m)).collect();
        let cap = val + e as i64 * ctx.n() as i64;
        let mut r = RamifiedElement { ctx: ctx.clone(), e, val, c, prec: prec.min(cap) };
        r.normalize();
        r
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.c
    }

    pub fn offset(&self) -> i64 {
        self.val
    }

    /// Some(k) when the value is exactly pi^k to its full precision.
    pub fn offset_only(&self) -> Option<i64> {
        if self.prec < self.val + self.rn() {
            return None;
        }
        if self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.val)
        } else {
            None
        }
    }

    /// Coefficient of pi^i (0 <= i < e) in the expansion of the value, as an element of Q_p.
    pub fn coefficient(&self, i: usize) -> PadicElement {
        let ei = self.e as i64;
        // value = sum_j c_j pi^(val+j); collect the terms with val+j = i + e*q.
        let mut acc = PadicElement::zero_to(&self.ctx, Integer::div_floor(&(self.prec - i as i64), &ei));
        for (j, cj) in self.c.iter().enumerate() {
            let t = self.val + j as i64 - i as i64;
            if t.mod_floor(&ei) == 0 {
                let q = t / ei;
                let digits = self.ctx.n() as i64;
                let term = PadicElement::from_fixed(&self.ctx, cj, q, digits);
                acc = acc.add(&term);
            }
        }
        acc
    }

    fn rn(&self) -> i64 {
        self.e as i64 * self.ctx.n() as i64
    }

    /// pi-adic valuation of the coefficient vector (ignoring the offset).
    fn inner_val(&self) -> i64 {
        let ei = self.e as i64;
        let cap = self.ctx.n() as i64;
        let mut best = ei * cap;
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            if (i as i64) >= best {
                break;
            }
            let v = ei * p_val_capped(&self.ctx, ci, cap) + i as i64;
            if v < best {
                best = v;
            }
        }
        best
    }

    pub fn is_zero(&self) -> bool {
        self.val + self.inner_val() >= self.prec
    }

    /// Valuation in pi-units, None when zero to precision.
    pub fn valuation_pi(&self) -> Option<i64> {
        let v = self.val + self.inner_val();
        if v >= self.prec {
            None
        } else {
            Some(v)
        }
    }

    /// Valuation normalized so that v(p) = 1.
    pub fn valuation(&self) -> Option<BigRational> {
        self.valuation_pi().map(|v| BigRational::new(v.into(), (self.e as i64).into()))
    }

    /// Multiply coefficient vector by pi^d, d >= 0, reducing pi^e -> p.
    fn shifted_coeffs(&self, d: i64) -> Vec<BigInt> {
        if d == 0 {
            return self.c.clone();
        }
        let e = self.e as usize;
        let m = self.ctx.modulus();
        let mut out = vec![BigInt::zero(); e];
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let t = i as i64 + d;
            let q = t / e as i64;
            let r = (t % e as i64) as usize;
            if q >= self.ctx.n() as i64 {
                continue;
            }
            out[r] = modp(&(&out[r] + ci * self.ctx.pow(q)), &m);
        }
        out
    }

    /// Move common powers of pi out of the coefficients into the offset.
    pub fn normalize(&mut self) {
        let w = self.inner_val();
        if self.val + w >= self.prec {
            *self = Self::zero_to(&self.ctx, self.e, self.prec);
            return;
        }
        if w == 0 {
            return;
        }
        let ei = self.e as i64;
        let q = (w + ei - 1) / ei;
        let up = ei * q - w;
        let shifted = self.shifted_coeffs(up);
        let pq = self.ctx.pow(q);
        self.c = shifted.into_iter().map(|x| x / &pq).collect();
        self.val += w;
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ctx.p() != o.ctx.p() {
            return Err(Error::ContextMismatch(self.ctx.p(), o.ctx.p()));
        }
        if self.e != o.e {
            return Err(Error::Invalid(format!("ramification mismatch {} vs {}", self.e, o.e)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            let mut r = o.clone();
            r.prec = r.prec.min(prec);
            r.normalize();
            return Ok(r);
        }
        if o.is_zero() {
            let mut r = self.clone();
            r.prec = r.prec.min(prec);
            r.normalize();
            return Ok(r);
        }
        let v0 = self.val.min(o.val);
        let a = self.shifted_coeffs(self.val - v0);
        let b = o.shifted_coeffs(o.val - v0);
        let m = self.ctx.modulus();
        let c = a.iter().zip(b.iter()).map(|(x, y)| modp(&(x + y), &m)).collect();
        let mut r = RamifiedElement {
            ctx: self.ctx.clone(),
            e: self.e,
            val: v0,
            c,
            prec: prec.min(v0 + self.rn()),
        };
        r.normalize();
        Ok(r)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("ramified add")
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.modulus();
        let mut r = self.clone();
        r.c = r.c.iter().map(|x| modp(&(-x), &m)).collect();
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let va = self.valuation_pi();
        let vb = o.valuation_pi();
        let (va, vb) = match (va, vb) {
            (Some(a), Some(b)) => (a, b),
            (None, Some(b)) => return Ok(Self::zero_to(&self.ctx, self.e, self.prec + b)),
            (Some(a), None) => return Ok(Self::zero_to(&self.ctx, self.e, o.prec + a)),
            (None, None) => return Ok(Self::zero_to(&self.ctx, self.e, self.prec + o.prec)),
        };
        let e = self.e as usize;
        let m = self.ctx.modulus();
        let p = self.ctx.p_big();
        let mut acc = vec![BigInt::zero(); 2 * e];
        for (i, ai) in self.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in o.c.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                acc[i + j] += ai * bj;
            }
        }
        let mut c = Vec::with_capacity(e);
        for k in 0..e {
            c.push(modp(&(&acc[k] + &acc[k + e] * &p), &m));
        }
        let val = self.val + o.val;
        let prec = (self.prec + vb).min(o.prec + va).min(val + self.rn());
        let mut r = RamifiedElement { ctx: self.ctx.clone(), e: self.e, val, c, prec };
        r.normalize();
        Ok(r)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("ramified mul")
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        let mut a = self.clone();
        a.normalize();
        if a.is_zero() {
            return Err(Error::DivisionByZeroPrecision);
        }
        let m = self.ctx.modulus();
        let e = self.e;
        let rel = a.prec - a.val;
        // a = pi^val * A with A(0) a unit.
        let unit_a = RamifiedElement { ctx: a.ctx.clone(), e, val: 0, c: a.c.clone(), prec: self.rn() };
        let mut x = vec![BigInt::zero(); e as usize];
        x[0] = inv_mod(&a.c[0], &m).expect("leading coefficient is a unit");
        let mut x = RamifiedElement { ctx: a.ctx.clone(), e, val: 0, c: x, prec: self.rn() };
        let two = Self::from_int(&a.ctx, e, 2);
        let mut correct = 1i64;
        while correct < self.rn() {
            let ax = unit_a.mul_raw(&x);
            x = x.mul_raw(&two.sub_raw(&ax));
            correct *= 2;
        }
        x.val = -a.val;
        x.prec = -a.val + rel;
        x.normalize();
        Ok(x)
    }

    // Coefficient arithmetic at offset 0 without precision bookkeeping.
    fn mul_raw(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.prec = self.rn();
        let mut b = o.clone();
        b.prec = o.rn();
        let mut out = r.mul(&b);
        if out.val != 0 {
            let c = out.shifted_coeffs(out.val);
            out.c = c;
            out.val = 0;
        }
        out.prec = self.rn();
        out
    }

    fn sub_raw(&self, o: &Self) -> Self {
        let m = self.ctx.modulus();
        let c = self.c.iter().zip(o.c.iter()).map(|(x, y)| modp(&(x - y), &m)).collect();
        RamifiedElement { ctx: self.ctx.clone(), e: self.e, val: 0, c, prec: self.rn() }
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul(&o.inverse()?))
    }

    pub fn div(&self, o: &Self) -> Self {
        self.try_div(o).expect("ramified div")
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx, self.e);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }

    /// Multiply by pi^k.
    pub fn shift_pi(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.val += k;
        r.prec += k;
        r
    }

    /// Multiply by an integer, tracking any factor of p exactly.
    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero_to(&self.ctx, self.e, self.prec);
        }
        let (v, u) = self.ctx.split_val(n);
        let m = self.ctx.modulus();
        let mut r = self.clone();
        r.c = r.c.iter().map(|x| modp(&(x * &u), &m)).collect();
        let ev = v * self.e as i64;
        r.val += ev;
        r.prec += ev;
        r
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul_bigint(&BigInt::from(n))
    }

    pub fn div_bigint(&self, n: &BigInt) -> Self {
        let (v, u) = self.ctx.split_val(n);
        let m = self.ctx.modulus();
        let ui = inv_mod(&u, &m).expect("unit");
        let mut r = self.clone();
        r.c = r.c.iter().map(|x| modp(&(x * &ui), &m)).collect();
        let ev = v * self.e as i64;
        r.val -= ev;
        r.prec -= ev;
        r
    }

    pub fn div_int(&self, n: i64) -> Self {
        self.div_bigint(&BigInt::from(n))
    }

    pub fn mul_padic(&self, a: &PadicElement) -> Self {
        self.mul(&Self::from_padic(a, self.e))
    }

    /// Cap the precision at `prec` pi-units.
    pub fn truncate(&self, prec: i64) -> Self {
        let mut r = self.clone();
        r.prec = r.prec.min(prec);
        r.normalize();
        r
    }

    /// Split into the Q_p part and the largest pi-valuation of the remaining components.
    /// The second value is `None` when the remainder vanishes to precision.
    pub fn project_to_qp(&self) -> (PadicElement, Option<i64>) {
        let q = self.coefficient(0);
        let back = Self::from_padic(&q, self.e);
        let rest = self.sub(&back);
        (q, rest.valuation_pi())
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl PartialEq for RamifiedElement {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && self.sub(other).is_zero()
    }
}

impl fmt::Debug for RamifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi^{} * [", self.val)?;
        for (i, c) in self.c.iter().enumerate().filter(|(_, c)| !c.is_zero()).take(4) {
            write!(f, "{}*pi^{} ", c, i)?;
        }
        write!(f, "] + O(pi^{}) (e={})", self.prec, self.e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramified_valuation_in_fractional_units() {
        let ctx = PadicContext::new(5, 6);
        let pi3 = RamifiedElement::pi_power(&ctx, 4, 3);
        assert_eq!(pi3.valuation(), Some(BigRational::new(3.into(), 4.into())));
        let p = RamifiedElement::pi(&ctx, 4).pow(4).unwrap();
        assert!(p.agrees_with(&RamifiedElement::from_int(&ctx, 4, 5)));
    }

    #[test]
    fn inverse_identity() {
        let ctx = PadicContext::new(7, 8);
        let pi = RamifiedElement::pi(&ctx, 5);
        let a = RamifiedElement::from_int(&ctx, 5, 3).add(&pi.pow(2).unwrap()).add(&pi.pow(7).unwrap());
        let b = a.inverse().unwrap();
        assert!(a.mul(&b).agrees_with(&RamifiedElement::one(&ctx, 5)));
        let c = pi.pow(3).unwrap().mul(&a);
        let d = c.inverse().unwrap();
        assert_eq!(d.valuation_pi(), Some(-3));
        assert!(c.mul(&d).agrees_with(&RamifiedElement::one(&ctx, 5)));
    }

    #[test]
    fn q_p_projection() {
        let ctx = PadicContext::new(11, 6);
        let a = RamifiedElement::from_int(&ctx, 3, 13).shift_pi(6);
        let (q, rest) = a.project_to_qp();
        assert!(q.agrees_with(&PadicElement::from_int(&ctx, 13 * 121)));
        assert_eq!(rest, None);
    }
}
