use super::*;
use crate::chabauty::pipeline::{CurveRecord, GeneratorSpec, PipelineParams};
use crate::poly;

fn quadratic_generator_curve() -> CurveRecord {
    let mut r = CurveRecord::from_i64(&[2, 5, 6, 2, 1]);
    r.generators.push(GeneratorSpec { g: poly::from_i64(&[-1, 1, 1]), h: Some(poly::from_i64(&[2])), branches: None });
    r
}

#[test]
fn quadratic_generator_curve_has_two_points() {
    let params = PipelineParams { precision: 10, prime: Some(11), ..Default::default() };
    let rep = run_pipeline(&quadratic_generator_curve(), &params);
    assert!(rep.is_success(), "{:?}", rep.status);
    assert_eq!(rep.vanishing_dimension, 2);
    assert_eq!(rep.set_size(), 2, "{:#?}", rep.t);
    assert_eq!(rep.s, vec![crate::curve::RationalPoint::Infinity]);
    match &rep.t[0].classification.tag {
        PointTag::RecognizedAlgebraic { x_minpoly, y_minpoly } => {
            assert_eq!(x_minpoly.as_deref(), Some(&poly::from_i64(&[1, 2])[..]));
            assert_eq!(y_minpoly.as_deref(), Some(&poly::from_i64(&[-13, 0, 0, 16])[..]));
        }
        other => panic!("{other:?}"),
    }
}
