//! Recognition of the points of X(Q_p)_1.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::algdep::algdep;
use crate::coleman::ColemanEngine;
use crate::curve::{CurvePoint, RationalPoint};
use crate::io::PadicRecord;
use crate::padic::PadicElement;
use crate::poly::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum PointTag {
    Rational { point: RationalPoint },
    Ramification,
    TorsionCandidate,
    /// n * (int_infinity^Q omega_i) = m * (int_D omega_i) for divisor number `divisor`.
    LinearRelation { n: i64, m: i64, divisor: usize },
    RecognizedAlgebraic {
        #[serde(with = "opt_poly")]
        x_minpoly: Option<IntPoly>,
        #[serde(with = "opt_poly")]
        y_minpoly: Option<IntPoly>,
    },
    Unrecognized,
}

mod opt_poly {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()).transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClassification {
    pub tag: PointTag,
    pub x: Option<PadicRecord>,
    pub y: Option<PadicRecord>,
    /// int_infinity^Q omega_i for the three regular forms.
    pub integrals: Vec<PadicRecord>,
    #[serde(with = "opt_poly", default)]
    pub x_minpoly: Option<IntPoly>,
    #[serde(with = "opt_poly", default)]
    pub y_minpoly: Option<IntPoly>,
}

pub struct ClassifyContext<'a> {
    pub engine: &'a ColemanEngine,
    pub divisor_integrals: &'a [Vec<PadicElement>],
    /// Bound on |n| and |m| in the linear relation search.
    pub relation_bound: i64,
    pub algdep_degree: usize,
    pub height_bound: BigInt,
    /// Minimum number of digits for a relation or a vanishing integral to count.
    pub min_digits: i64,
}

fn vanishes(v: &[PadicElement], min_digits: i64) -> bool {
    v.iter().all(|a| a.is_zero() && a.abs_prec() >= min_digits)
}

fn find_relation(ctx: &ClassifyContext, iq: &[PadicElement]) -> Option<(i64, i64, usize)> {
    for n in 1..=ctx.relation_bound {
        for (r, d) in ctx.divisor_integrals.iter().enumerate() {
            for m in (-ctx.relation_bound..=ctx.relation_bound).filter(|&m| m != 0) {
                let diff: Vec<PadicElement> = iq.iter().zip(d).map(|(a, b)| a.mul_int(n).sub(&b.mul_int(m))).collect();
                if vanishes(&diff, ctx.min_digits) {
                    return Some((n, m, r));
                }
            }
        }
    }
    None
}

fn rational_point(x: &PadicElement, y: &PadicElement, ctx: &ClassifyContext) -> Option<RationalPoint> {
    let c = |a: &PadicElement| algdep(a, 1, &ctx.height_bound).map(|c| BigRational::new(-c[0].clone(), c[1].clone()));
    let pt = RationalPoint::Affine { x: c(x)?, y: c(y)? };
    pt.on_curve(&ctx.engine.curve).then_some(pt)
}

/// Tag a point of X(Q_p)_1, testing in order: rational, ramification, torsion candidate,
/// linear relation with a divisor, algebraic coordinates.
pub fn classify_point(q: &CurvePoint, ctx: &ClassifyContext) -> PointClassification {
    let (x, y) = match q {
        CurvePoint::Affine { x, y } => (x, y),
        _ => {
            let zero = PadicRecord::from_element(&PadicElement::zero_to(&ctx.engine.ctx, ctx.engine.reported_precision()));
            return PointClassification {
                tag: PointTag::Rational { point: RationalPoint::Infinity },
                x: None,
                y: None,
                integrals: vec![zero; 3],
                x_minpoly: None,
                y_minpoly: None,
            };
        }
    };
    let integrals = ctx.engine.integrals_from_infinity(q).unwrap_or_default();
    let x_minpoly = algdep(x, ctx.algdep_degree, &ctx.height_bound);
    let y_minpoly = if y.is_zero() { None } else { algdep(y, ctx.algdep_degree, &ctx.height_bound) };
    let tag = if let Some(pt) = rational_point(x, y, ctx) {
        PointTag::Rational { point: pt }
    } else if y.is_zero() {
        PointTag::Ramification
    } else if !integrals.is_empty() && vanishes(&integrals, ctx.min_digits) {
        PointTag::TorsionCandidate
    } else if let Some((n, m, divisor)) = (!integrals.is_empty()).then(|| find_relation(ctx, &integrals)).flatten() {
        PointTag::LinearRelation { n, m, divisor }
    } else if x_minpoly.is_some() || y_minpoly.is_some() {
        PointTag::RecognizedAlgebraic { x_minpoly: x_minpoly.clone(), y_minpoly: y_minpoly.clone() }
    } else {
        PointTag::Unrecognized
    };
    PointClassification {
        tag,
        x: Some(PadicRecord::from_element(x)),
        y: Some(PadicRecord::from_element(y)),
        integrals: integrals.iter().map(PadicRecord::from_element).collect(),
        x_minpoly,
        y_minpoly,
    }
}

impl PointClassification {
    pub fn name(&self) -> &'static str {
        match self.tag {
            PointTag::Rational { .. } => "rational",
            PointTag::Ramification => "ramification",
            PointTag::TorsionCandidate => "torsion_candidate",
            PointTag::LinearRelation { .. } => "linear_relation",
            PointTag::RecognizedAlgebraic { .. } => "recognized_algebraic",
            PointTag::Unrecognized => "unrecognized",
        }
    }
}
