use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::context::{inv_mod, modp, PadicContext};
use crate::error::{Error, Result};

/// Valuation of a p-adic value; zero-to-precision reads as infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Element of Q_p with capped relative precision.
///
/// Nonzero values are `p^val * unit` with the unit known mod `p^rel`.
/// The zero sentinel has `rel == 0` and means "zero mod p^val".
#[derive(Clone)]
pub struct PadicElement {
    ctx: PadicContext,
    val: i64,
    unit: BigInt,
    rel: u32,
}

impl PadicElement {
    /// Zero known modulo p^abs.
    pub fn zero_to(ctx: &PadicContext, abs: i64) -> Self {
        PadicElement { ctx: ctx.clone(), val: abs, unit: BigInt::zero(), rel: 0 }
    }

    pub fn zero(ctx: &PadicContext) -> Self {
        Self::zero_to(ctx, ctx.n() as i64)
    }

    pub fn one(ctx: &PadicContext) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &PadicContext, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    /// Exact integer, carrying full relative precision.
    pub fn from_bigint(ctx: &PadicContext, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(ctx);
        }
        let (v, u) = ctx.split_val(n);
        Self::from_unit(ctx, v, u, ctx.n())
    }

    pub fn from_rational(ctx: &PadicContext, q: &BigRational) -> Self {
        let num = Self::from_bigint(ctx, q.numer());
        let den = Self::from_bigint(ctx, q.denom());
        num.div(&den)
    }

    pub fn from_ratio(ctx: &PadicContext, num: i64, den: i64) -> Self {
        Self::from_rational(ctx, &BigRational::new(num.into(), den.into()))
    }

    /// The value `p^shift * x` where x is known modulo p^digits.
    pub fn from_fixed(ctx: &PadicContext, x: &BigInt, shift: i64, digits: i64) -> Self {
        if digits <= 0 {
            return Self::zero_to(ctx, shift + digits.max(0));
        }
        let m = ctx.pow(digits);
        let r = modp(x, &m);
        if r.is_zero() {
            return Self::zero_to(ctx, shift + digits);
        }
        let (v, u) = ctx.split_val(&r);
        let rel = (digits - v).min(ctx.n() as i64) as u32;
        Self::from_unit(ctx, shift + v, u, rel)
    }

    fn from_unit(ctx: &PadicContext, val: i64, unit: BigInt, rel: u32) -> Self {
        let rel = rel.min(ctx.n());
        if rel == 0 {
            return Self::zero_to(ctx, val);
        }
        let unit = modp(&unit, &ctx.pow(rel as i64));
        PadicElement { ctx: ctx.clone(), val, unit, rel }
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.val)
        }
    }

    /// Valuation for nonzero values, absolute precision for the zero sentinel.
    pub fn val_or_prec(&self) -> i64 {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    /// The value is known modulo p^abs_prec.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.rel as i64
    }

    /// Drop digits beyond absolute precision `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.val {
            return Self::zero_to(&self.ctx, abs);
        }
        Self::from_unit(&self.ctx, self.val, self.unit.clone(), (abs - self.val) as u32)
    }

    pub fn with_context(&self, ctx: &PadicContext) -> Self {
        assert_eq!(ctx.p(), self.ctx.p());
        if self.is_zero() {
            return Self::zero_to(ctx, self.val);
        }
        Self::from_unit(ctx, self.val, self.unit.clone(), self.rel)
    }

    /// Integer representative of an integral element modulo p^k.
    pub fn residue(&self, k: i64) -> BigInt {
        if k <= 0 || self.is_zero() || self.val >= k {
            return BigInt::zero();
        }
        assert!(self.val >= 0, "residue of a non-integral element");
        modp(&(&self.unit * self.ctx.pow(self.val)), &self.ctx.pow(k))
    }

    /// The scaled integer `self * p^shift` reduced mod p^k; requires integrality after scaling.
    pub fn scaled_residue(&self, shift: i64, k: i64) -> BigInt {
        if self.is_zero() || self.val + shift >= k {
            return BigInt::zero();
        }
        assert!(self.val + shift >= 0, "scaled residue of a non-integral element");
        modp(&(&self.unit * self.ctx.pow(self.val + shift)), &self.ctx.pow(k))
    }

    /// Symmetric integer lift of an integral element using all known digits.
    pub fn lift_symmetric(&self) -> BigInt {
        let k = self.abs_prec();
        let r = self.residue(k);
        let m = self.ctx.pow(k.max(0));
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.p() != other.ctx.p() {
            Err(Error::ContextMismatch(self.ctx.p(), other.ctx.p()))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let abs = self.abs_prec().min(other.abs_prec());
        if self.is_zero() {
            return Ok(other.truncate_abs(abs));
        }
        if other.is_zero() {
            return Ok(self.truncate_abs(abs));
        }
        let v0 = self.val.min(other.val);
        if abs <= v0 {
            return Ok(Self::zero_to(&self.ctx, abs));
        }
        let a = &self.unit * self.ctx.pow(self.val - v0);
        let b = &other.unit * self.ctx.pow(other.val - v0);
        Ok(Self::from_fixed(&self.ctx, &(a + b), v0, abs - v0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.ctx.pow(self.rel as i64);
        PadicElement {
            ctx: self.ctx.clone(),
            val: self.val,
            unit: modp(&(-&self.unit), &m),
            rel: self.rel,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ok(Self::zero_to(&self.ctx, self.val + other.val)),
            (true, false) => Ok(Self::zero_to(&self.ctx, self.val + other.val)),
            (false, true) => Ok(Self::zero_to(&self.ctx, self.val + other.val)),
            (false, false) => {
                let rel = self.rel.min(other.rel);
                Ok(Self::from_unit(&self.ctx, self.val + other.val, &self.unit * &other.unit, rel))
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroPrecision);
        }
        let m = self.ctx.pow(self.rel as i64);
        let u = inv_mod(&self.unit, &m).expect("unit part is invertible");
        Ok(PadicElement { ctx: self.ctx.clone(), val: -self.val, unit: u, rel: self.rel })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        if k == 0 {
            return Ok(Self::one(&self.ctx));
        }
        if self.is_zero() {
            return Ok(Self::zero_to(&self.ctx, self.val * k));
        }
        let m = self.ctx.pow(self.rel as i64);
        let u = self.unit.modpow(&BigInt::from(k), &m);
        Ok(Self::from_unit(&self.ctx, self.val * k, u, self.rel))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("p-adic add")
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("p-adic sub")
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("p-adic mul")
    }
    pub fn div(&self, o: &Self) -> Self {
        self.try_div(o).expect("p-adic div")
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(&self.ctx, n))
    }

    pub fn div_int(&self, n: i64) -> Self {
        self.div(&Self::from_int(&self.ctx, n))
    }

    /// Multiply by p^k.
    pub fn shift(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.val += k;
        r
    }

    /// True if the two values agree to their joint precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Number of digits to which the two values agree (absolute).
    pub fn agreement(&self, other: &Self) -> i64 {
        self.sub(other).val
    }

    /// Exact rational value of the stored representative.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let u = BigRational::from_integer(self.unit.clone());
        if self.val >= 0 {
            u * BigRational::from_integer(self.ctx.pow(self.val))
        } else {
            u / BigRational::from_integer(self.ctx.pow(-self.val))
        }
    }

    /// p-adic digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rel as usize);
        let pb = self.ctx.p_big();
        let mut u = self.unit.clone();
        for _ in 0..self.rel {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u64().unwrap_or(0));
            u = q;
        }
        out
    }
}

impl PartialEq for PadicElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p()
            && self.val == other.val
            && self.rel == other.rel
            && self.unit == other.unit
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.ctx.p(), self.val);
        }
        let u = if self.unit.is_negative() { -&self.unit } else { self.unit.clone() };
        if self.val == 0 {
            write!(f, "{} + O({}^{})", u, self.ctx.p(), self.abs_prec())
        } else {
            write!(f, "{}^{} * {} + O({}^{})", self.ctx.p(), self.val, u, self.ctx.p(), self.abs_prec())
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a PadicElement> for &'a PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: &'a PadicElement) -> PadicElement {
                self.$f(rhs).expect(concat!("p-adic ", stringify!($m)))
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl<'a> Neg for &'a PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        self.neg_ref()
    }
}
