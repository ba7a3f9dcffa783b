mod hensel;
mod solve;
pub mod zseries;

pub use hensel::{hensel_system_of_roots, RootRecord};
pub use solve::{solve_zeros_in_disk, solve_zeros_raw, DiskSolution};
pub use zseries::{ZRing, ZSeries};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicElement, Valuation};

/// Power series sum a_i t^i known modulo t^(T+1), coefficients in Q_p.
#[derive(Clone, Debug)]
pub struct PadicSeries {
    ctx: PadicContext,
    coeffs: Vec<PadicElement>,
    order: usize,
}

impl PadicSeries {
    /// Coefficients beyond `order` are dropped; missing ones are exact zeros.
    pub fn new(ctx: &PadicContext, mut coeffs: Vec<PadicElement>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        while coeffs.len() < order + 1 {
            coeffs.push(PadicElement::zero(ctx));
        }
        PadicSeries { ctx: ctx.clone(), coeffs, order }
    }

    pub fn from_ints(ctx: &PadicContext, c: &[i64], order: usize) -> Self {
        Self::new(ctx, c.iter().map(|&x| PadicElement::from_int(ctx, x)).collect(), order)
    }

    /// Lift an integral fixed-point series known mod p^digits.
    pub fn from_fixed(ctx: &PadicContext, s: &ZSeries, digits: i64) -> Self {
        let coeffs = s.c.iter().map(|x| PadicElement::from_fixed(ctx, x, 0, digits)).collect::<Vec<_>>();
        let order = coeffs.len().saturating_sub(1);
        Self::new(ctx, coeffs, order)
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[PadicElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| PadicElement::zero(&self.ctx))
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let c = (0..=order).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect();
        Self::new(&self.ctx, c, order)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let c = (0..=order).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect();
        Self::new(&self.ctx, c, order)
    }

    pub fn scale(&self, s: &PadicElement) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| c.mul(s)).collect(), self.order)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut c = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = PadicElement::zero_to(&self.ctx, i64::MAX / 4);
            for i in 0..=k {
                acc = acc.add(&self.coeffs[i].mul(&o.coeffs[k - i]));
            }
            c.push(acc);
        }
        Self::new(&self.ctx, c, order)
    }

    pub fn derivative(&self) -> Self {
        if self.order == 0 {
            return Self::new(&self.ctx, vec![], 0);
        }
        let c = (1..=self.order).map(|i| self.coeffs[i].mul_int(i as i64)).collect();
        Self::new(&self.ctx, c, self.order - 1)
    }

    /// Formal antiderivative with constant `c`; also returns the precision loss
    /// delta = max v_p(i+1) over the retained terms.
    pub fn antiderivative(&self, c: &PadicElement) -> (Self, i64) {
        let p = self.ctx.p() as i64;
        let mut out = Vec::with_capacity(self.order + 2);
        out.push(c.clone());
        let mut delta = 0;
        for (i, a) in self.coeffs.iter().enumerate() {
            let k = (i + 1) as i64;
            let mut v = 0;
            let mut kk = k;
            while kk % p == 0 {
                kk /= p;
                v += 1;
            }
            if !a.is_zero() {
                delta = delta.max(v);
            }
            out.push(a.div_int(k));
        }
        (Self::new(&self.ctx, out, self.order + 1), delta)
    }

    pub fn eval(&self, t: &PadicElement) -> PadicElement {
        let mut acc = PadicElement::zero_to(&self.ctx, i64::MAX / 4);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(a);
        }
        acc
    }

    /// Minimum absolute precision over the coefficients.
    pub fn min_abs_prec(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs_prec()).min().unwrap_or(i64::MAX)
    }
}

/// F(x) = f(px) / p^lambda with integral coefficients, one of them a unit.
#[derive(Clone, Debug)]
pub struct NormalizedSeries {
    pub series: PadicSeries,
    pub lambda: i64,
}

pub fn normalize(f: &PadicSeries) -> Result<NormalizedSeries> {
    let c0 = &f.coeffs()[0];
    if let Valuation::Finite(v) = c0.valuation() {
        if v < 0 {
            return Err(Error::NoRootsGuaranteed);
        }
    }
    let mut lambda: Option<i64> = None;
    for (i, a) in f.coeffs().iter().enumerate() {
        if let Valuation::Finite(v) = a.valuation() {
            let w = v + i as i64;
            lambda = Some(lambda.map_or(w, |l| l.min(w)));
        }
    }
    let lambda = lambda.ok_or_else(|| Error::PrecisionExhausted("series vanishes to precision".into()))?;
    let c = f.coeffs().iter().enumerate().map(|(i, a)| a.shift(i as i64 - lambda)).collect();
    Ok(NormalizedSeries { series: PadicSeries::new(f.ctx(), c, f.order()), lambda })
}

/// Smallest m >= 1 with m - lambda - log_p(m) > n, decided exactly as p^(m-lambda-n) > m.
pub fn truncation_bound(n: i64, lambda: i64, p: u64) -> i64 {
    let mut m: i64 = 1.max(n + lambda);
    loop {
        let e = m - lambda - n;
        if e > 0 {
            let lhs = num_traits::pow(BigInt::from(p), e as usize);
            if lhs > BigInt::from(m) {
                return m;
            }
        }
        m += 1;
    }
}
