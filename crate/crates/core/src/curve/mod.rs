mod local;
mod search;

pub use local::{Antiderivative, LocalCoordinates, LocalKind, SparseLaurent};
pub use search::{rational_point_search, RationalPoint};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{cube_roots, hensel_lift_root, is_prime, modp, PadicContext, PadicElement, RamifiedElement};
use crate::poly::{self, IntPoly};

/// Picard curve y^3 = f(x) with f monic quartic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardCurve {
    f: IntPoly,
    disc_f: BigInt,
    delta: Option<BigInt>,
    pub label: Option<String>,
}

impl PicardCurve {
    /// Validate and build from coefficients c0..c4.
    pub fn new(coeffs: &[BigInt], delta: Option<BigInt>) -> Result<Self> {
        let f = poly::trim(coeffs.to_vec());
        let deg = poly::degree(&f).unwrap_or(0);
        if deg != 4 {
            return Err(Error::WrongDegree(deg));
        }
        if f[4] != BigInt::from(1) {
            return Err(Error::NotMonic);
        }
        let disc_f = poly::discriminant(&f);
        if disc_f.is_zero() {
            return Err(Error::NotSquarefree);
        }
        Ok(PicardCurve { f, disc_f, delta, label: None })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(&poly::from_i64(coeffs), None)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn with_delta(mut self, delta: BigInt) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn f(&self) -> &[BigInt] {
        &self.f
    }

    pub fn df(&self) -> IntPoly {
        poly::derivative(&self.f)
    }

    pub fn disc_f(&self) -> &BigInt {
        &self.disc_f
    }

    pub fn delta(&self) -> Option<&BigInt> {
        self.delta.as_ref()
    }

    pub const GENUS: usize = 3;

    pub fn eval_f(&self, x: &PadicElement) -> PadicElement {
        let ctx = x.ctx();
        let mut acc = PadicElement::zero_to(ctx, i64::MAX / 4);
        for c in self.f.iter().rev() {
            acc = acc.mul(x).add(&PadicElement::from_bigint(ctx, c));
        }
        acc
    }

    pub fn eval_f_ramified(&self, x: &RamifiedElement) -> RamifiedElement {
        let ctx = x.ctx();
        let mut acc = RamifiedElement::zero_to(ctx, x.e(), i64::MAX / 4);
        for c in self.f.iter().rev() {
            acc = acc.mul(x).add(&RamifiedElement::from_padic(&PadicElement::from_bigint(ctx, c), x.e()));
        }
        acc
    }

    /// Why p is not a good prime, if it is not.
    pub fn prime_obstruction(&self, p: u64) -> Option<String> {
        if p <= 3 || !is_prime(p) {
            return Some("p must be a prime greater than 3".into());
        }
        let pb = BigInt::from(p);
        if (&self.disc_f * 3u32).is_multiple_of(&pb) {
            return Some("p divides 3*disc(f)".into());
        }
        if let Some(d) = &self.delta {
            if d.is_multiple_of(&pb) {
                return Some("p divides the discriminant".into());
            }
        }
        None
    }

    /// First good prime >= min_prime; with a split polynomial, also require it to split into
    /// distinct linear factors mod p.
    pub fn good_prime(&self, min_prime: u64, split_poly: Option<&[BigInt]>) -> u64 {
        let mut p = min_prime.max(5);
        loop {
            if self.prime_obstruction(p).is_none() && split_poly.is_none_or(|g| splits_mod(g, p)) {
                return p;
            }
            p += 1;
        }
    }

    pub fn points_over_fp(&self, p: u64) -> Vec<FpPoint> {
        let pb = BigInt::from(p);
        let mut out = vec![];
        for x in 0..p {
            let fx = modp(&poly::eval(&self.f, &BigInt::from(x)), &pb).to_u64().unwrap();
            for y in 0..p {
                if (y * y % p) * y % p == fx {
                    out.push(FpPoint::Affine(x, y));
                }
            }
        }
        out.push(FpPoint::Infinity);
        out
    }

    pub fn classify_disks(&self, p: u64) -> Vec<ResidueDisk> {
        self.points_over_fp(p)
            .into_iter()
            .map(|pt| match pt {
                FpPoint::Infinity => ResidueDisk { reduction: pt, kind: DiskKind::BadInfinite, ramification_index: 3 },
                FpPoint::Affine(_, 0) => ResidueDisk { reduction: pt, kind: DiskKind::BadFinite, ramification_index: 3 },
                FpPoint::Affine(_, _) => ResidueDisk { reduction: pt, kind: DiskKind::Good, ramification_index: 1 },
            })
            .collect()
    }

    /// Distinguished Z_p-point of the disk: a Hensel-lifted ramification point, infinity,
    /// or for a good disk the point with x = x0 in [0, p).
    pub fn disk_center(&self, disk: &ResidueDisk, ctx: &PadicContext) -> CurvePoint {
        match disk.reduction {
            FpPoint::Infinity => CurvePoint::Infinity,
            FpPoint::Affine(x0, y0) => {
                let p = ctx.p();
                if disk.kind == DiskKind::BadFinite {
                    let a = hensel_lift_root(&self.f, x0, ctx).expect("f is separable mod p");
                    CurvePoint::Affine { x: a, y: PadicElement::zero(ctx) }
                } else {
                    let x = PadicElement::from_int(ctx, x0 as i64);
                    let ys = cube_roots(&self.eval_f(&x)).expect("unit");
                    let y = ys
                        .into_iter()
                        .find(|y| y.residue(1) == BigInt::from(y0))
                        .expect("lift of the F_p point");
                    let _ = p;
                    CurvePoint::Affine { x, y }
                }
            }
        }
    }

    /// All Q_p points with the given x-coordinate.
    pub fn lift_point(&self, x: &PadicElement) -> Vec<CurvePoint> {
        let fx = self.eval_f(x);
        match cube_roots(&fx) {
            Ok(ys) => ys.into_iter().map(|y| CurvePoint::Affine { x: x.clone(), y }).collect(),
            Err(_) => vec![],
        }
    }

    /// Residue disk containing a point.
    pub fn disk_of(&self, pt: &CurvePoint, p: u64) -> Result<ResidueDisk> {
        let disks = self.classify_disks(p);
        let red = pt.reduction(p)?;
        disks.into_iter().find(|d| d.reduction == red).ok_or(Error::WrongDisk)
    }
}

pub fn splits_mod(g: &[BigInt], p: u64) -> bool {
    let d = poly::degree(g).unwrap_or(0);
    let pb = BigInt::from(p);
    if modp(&g[d], &pb).is_zero() {
        return false;
    }
    crate::padic::roots_mod_p(g, p).len() == d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FpPoint {
    Affine(u64, u64),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiskKind {
    Good,
    BadFinite,
    BadInfinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueDisk {
    pub reduction: FpPoint,
    pub kind: DiskKind,
    pub ramification_index: u32,
}

/// A point of X over Q_p or over Q_p(pi).
#[derive(Clone, Debug)]
pub enum CurvePoint {
    Infinity,
    Affine { x: PadicElement, y: PadicElement },
    Ramified { x: RamifiedElement, y: RamifiedElement },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// The integral basis values b = [1, y, y^2] at an affine Q_p point.
    pub fn b(&self) -> Option<[PadicElement; 3]> {
        match self {
            CurvePoint::Affine { x, y } => Some([PadicElement::one(x.ctx()), y.clone(), y.mul(y)]),
            _ => None,
        }
    }

    pub fn x(&self) -> Option<&PadicElement> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn y(&self) -> Option<&PadicElement> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            _ => None,
        }
    }

    pub fn reduction(&self, p: u64) -> Result<FpPoint> {
        match self {
            CurvePoint::Infinity => Ok(FpPoint::Infinity),
            CurvePoint::Affine { x, y } => {
                if x.valuation().finite().is_some_and(|v| v < 0) {
                    return Ok(FpPoint::Infinity);
                }
                let xr = x.residue(1).to_u64().unwrap();
                let yr = y.residue(1).to_u64().unwrap();
                let _ = p;
                Ok(FpPoint::Affine(xr, yr))
            }
            CurvePoint::Ramified { x, y } => {
                if x.valuation_pi().is_some_and(|v| v < 0) {
                    return Ok(FpPoint::Infinity);
                }
                let xr = x.coefficient(0).residue(1).to_u64().unwrap();
                let yr = y.coefficient(0).residue(1).to_u64().unwrap();
                Ok(FpPoint::Affine(xr, yr))
            }
        }
    }

    /// y^3 - f(x) valuation check for affine points.
    pub fn on_curve(&self, curve: &PicardCurve) -> bool {
        match self {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y.pow(3).unwrap().sub(&curve.eval_f(x)).is_zero(),
            CurvePoint::Ramified { x, y } => y.pow(3).unwrap().sub(&curve.eval_f_ramified(x)).is_zero(),
        }
    }
}
