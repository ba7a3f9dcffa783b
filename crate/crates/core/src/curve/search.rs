use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{CurvePoint, PicardCurve};
use crate::padic::{PadicContext, PadicElement};

/// Exact rational point of X.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RationalPoint {
    Infinity,
    Affine {
        #[serde(with = "rational_str")]
        x: BigRational,
        #[serde(with = "rational_str")]
        y: BigRational,
    },
}

impl RationalPoint {
    pub fn affine(x: (i64, i64), y: (i64, i64)) -> Self {
        RationalPoint::Affine {
            x: BigRational::new(x.0.into(), x.1.into()),
            y: BigRational::new(y.0.into(), y.1.into()),
        }
    }

    pub fn to_padic(&self, ctx: &PadicContext) -> CurvePoint {
        match self {
            RationalPoint::Infinity => CurvePoint::Infinity,
            RationalPoint::Affine { x, y } => CurvePoint::Affine {
                x: PadicElement::from_rational(ctx, x),
                y: PadicElement::from_rational(ctx, y),
            },
        }
    }

    pub fn on_curve(&self, curve: &PicardCurve) -> bool {
        match self {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => {
                let mut fx = BigRational::zero();
                for c in curve.f().iter().rev() {
                    fx = fx * x + BigRational::from_integer(c.clone());
                }
                y * y * y == fx
            }
        }
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RationalPoint::Infinity => write!(f, "oo"),
            RationalPoint::Affine { x, y } => write!(f, "({}, {})", x, y),
        }
    }
}

pub mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn icbrt(n: i128) -> Option<i128> {
    let neg = n < 0;
    let m = n.unsigned_abs();
    let mut r = (m as f64).cbrt().round() as i128;
    for cand in [r - 1, r, r + 1] {
        if cand >= 0 && (cand as u128).checked_pow(3) == Some(m) {
            r = cand;
            return Some(if neg { -r } else { r });
        }
    }
    None
}

/// All affine points (a/b, y) with gcd(a, b) = 1, max(|a|, b) <= h, plus infinity.
pub fn rational_point_search(curve: &PicardCurve, h: i64) -> Vec<RationalPoint> {
    let c: Vec<i128> = curve.f().iter().map(|x| x.to_i128().expect("coefficients fit in i128")).collect();
    // residues of cubes mod 7, 9, 13 for quick rejection
    let cube_mod = |m: i128| -> Vec<bool> {
        let mut t = vec![false; m as usize];
        for x in 0..m {
            t[(x * x * x % m) as usize] = true;
        }
        t
    };
    let (c7, c9, c13) = (cube_mod(7), cube_mod(9), cube_mod(13));
    let mut out = vec![RationalPoint::Infinity];
    for b in 1..=h as i128 {
        let b2 = b * b;
        let b3 = b2 * b;
        let b4 = b3 * b;
        for a in -(h as i128)..=(h as i128) {
            if a.gcd(&b) != 1 {
                continue;
            }
            let a2 = a * a;
            let fab = a2 * a2 + c[3] * a2 * a * b + c[2] * a2 * b2 + c[1] * a * b3 + c[0] * b4;
            let n = fab * b2;
            if !c7[n.rem_euclid(7) as usize] || !c9[n.rem_euclid(9) as usize] || !c13[n.rem_euclid(13) as usize] {
                continue;
            }
            if let Some(y) = icbrt(n) {
                out.push(RationalPoint::Affine {
                    x: BigRational::new(BigInt::from(a), BigInt::from(b)),
                    y: BigRational::new(BigInt::from(y), BigInt::from(b2)),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_searches() {
        let c = PicardCurve::from_i64(&[-64, -48, 0, 6, 1]).unwrap();
        let pts = rational_point_search(&c, 50);
        assert!(pts.contains(&RationalPoint::Infinity));
        assert!(pts.contains(&RationalPoint::affine((-3, 1), (-1, 1))));
        assert!(pts.iter().all(|p| p.on_curve(&c)));

        let c = PicardCurve::from_i64(&[-40, 0, 0, 0, 1]).unwrap();
        let pts = rational_point_search(&c, 20);
        assert!(pts.contains(&RationalPoint::affine((4, 1), (6, 1))));
        assert!(pts.contains(&RationalPoint::affine((-4, 1), (6, 1))));
    }
}
