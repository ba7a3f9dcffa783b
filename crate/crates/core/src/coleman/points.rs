use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curve::{CurvePoint, PicardCurve};
use crate::error::{Error, Result};
use crate::padic::{cube_roots, hensel_lift_root, roots_mod_p, PadicContext, PadicElement};
use crate::poly::IntPoly;

/// D = sum m_i P_i - n * infinity.
#[derive(Clone, Debug)]
pub struct DivisorSpec {
    pub points: Vec<(CurvePoint, i64)>,
    pub base_multiple: i64,
}

impl DivisorSpec {
    /// P - infinity.
    pub fn point_minus_infinity(pt: CurvePoint) -> Self {
        DivisorSpec { points: vec![(pt, 1)], base_multiple: 1 }
    }

    /// P_1 + ... + P_d - d infinity.
    pub fn sum_minus_infinity(pts: Vec<CurvePoint>) -> Self {
        let d = pts.len() as i64;
        DivisorSpec { points: pts.into_iter().map(|p| (p, 1)).collect(), base_multiple: d }
    }

    pub fn check_degree(&self) -> Result<()> {
        let s: i64 = self.points.iter().map(|(_, m)| m).sum();
        if s != self.base_multiple {
            return Err(Error::Invalid(format!("divisor has degree {} - {}", s, self.base_multiple)));
        }
        Ok(())
    }
}

/// How y is chosen over each root of g.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YRule {
    /// y = h(x)
    Poly(#[serde(with = "crate::io::bigint_vec")] IntPoly),
    /// Residue of y mod p for each root of g, roots taken in increasing residue order.
    Branches(Vec<u64>),
    /// The unique cube root, available when p = 2 mod 3.
    Unique,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberFieldPointSpec {
    #[serde(with = "crate::io::bigint_vec")]
    pub g: IntPoly,
    pub y_rule: YRule,
}

fn eval(c: &[BigInt], x: &PadicElement) -> PadicElement {
    let mut acc = PadicElement::zero(x.ctx());
    for a in c.iter().rev() {
        acc = acc.mul(x).add(&PadicElement::from_bigint(x.ctx(), a));
    }
    acc
}

/// The deg(g) points over the roots of g in Z_p, for p completely split in Q[x]/(g).
pub fn realize_nf_points(spec: &NumberFieldPointSpec, curve: &PicardCurve, ctx: &PadicContext) -> Result<Vec<CurvePoint>> {
    let p = ctx.p();
    let deg = crate::poly::degree(&spec.g).unwrap_or(0);
    let roots = roots_mod_p(&spec.g, p);
    if roots.len() != deg || deg == 0 {
        return Err(Error::NotSplit(p));
    }
    let mut out = vec![];
    for (i, r0) in roots.iter().enumerate() {
        let x = hensel_lift_root(&spec.g, *r0, ctx).map_err(|_| Error::NotSplit(p))?;
        let fx = curve.eval_f(&x);
        let y = match &spec.y_rule {
            YRule::Poly(h) => {
                let y = eval(h, &x);
                if !y.pow(3)?.sub(&fx).is_zero() {
                    return Err(Error::BadYRule);
                }
                y
            }
            YRule::Branches(sel) => {
                let want = BigInt::from(*sel.get(i).ok_or(Error::BadYRule)?);
                cube_roots(&fx)
                    .map_err(|_| Error::BadYRule)?
                    .into_iter()
                    .find(|y| y.residue(1) == want)
                    .ok_or(Error::BadYRule)?
            }
            YRule::Unique => {
                if p % 3 != 2 {
                    return Err(Error::BadYRule);
                }
                let ys = cube_roots(&fx).map_err(|_| Error::BadYRule)?;
                if ys.len() != 1 {
                    return Err(Error::BadYRule);
                }
                ys.into_iter().next().unwrap()
            }
        };
        out.push(CurvePoint::Affine { x, y });
    }
    Ok(out)
}
