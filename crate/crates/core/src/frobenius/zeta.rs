use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::FrobeniusData;
use crate::curve::PicardCurve;
use crate::padic::PadicElement;

/// det(T - A) by Berkowitz (division free). Coefficients from T^n down to T^0.
pub fn characteristic_polynomial(a: &[Vec<PadicElement>]) -> Vec<PadicElement> {
    let n = a.len();
    let ctx = a[0][0].ctx().clone();
    let one = PadicElement::one(&ctx);
    let zero = PadicElement::zero(&ctx);
    let mut v = vec![one.clone()];
    for r in 0..n {
        // q = [1, -a_rr, -R C, -R A C, ...] where A is the leading r x r block
        let mut q = vec![one.clone(), a[r][r].neg_ref()];
        let mut col: Vec<PadicElement> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut rc = zero.clone();
            for (j, c) in col.iter().enumerate() {
                rc = rc.add(&a[r][j].mul(c));
            }
            q.push(rc.neg_ref());
            col = (0..r)
                .map(|i| {
                    let mut s = zero.clone();
                    for (j, c) in col.iter().enumerate() {
                        s = s.add(&a[i][j].mul(c));
                    }
                    s
                })
                .collect();
        }
        let mut w = vec![zero.clone(); r + 2];
        for (i, slot) in w.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < q.len() {
                    *slot = slot.add(&q[i - j].mul(vj));
                }
            }
        }
        v = w;
    }
    v
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZetaCheck {
    /// Integer characteristic polynomial of Frobenius, T^6 first.
    #[serde(with = "crate::io::bigint_vec")]
    pub charpoly: Vec<BigInt>,
    pub determinant_ok: bool,
    pub functional_equation_ok: bool,
    pub point_count: usize,
    pub point_count_ok: bool,
    /// Digits of the coefficients that agree with the recognized integers.
    pub digits: i64,
}

impl ZetaCheck {
    pub fn passed(&self) -> bool {
        self.determinant_ok && self.functional_equation_ok && self.point_count_ok
    }
}

/// Recognize det(T - M) as an integer polynomial and test det = p^3, the functional
/// equation T^6 chi(p/T) = p^3 chi(T), and #X(F_p) = p + 1 - tr(M).
pub fn zeta_consistency_check(data: &FrobeniusData, curve: &PicardCurve) -> ZetaCheck {
    let p = data.ctx.p();
    let pb = BigInt::from(p);
    let chi = characteristic_polynomial(&data.matrix);
    let digits = chi.iter().map(|c| c.abs_prec()).min().unwrap_or(0);
    let coeffs: Vec<BigInt> = chi.iter().map(|c| c.lift_symmetric()).collect();
    // coeffs[j] multiplies T^(6-j)
    let det_ok = coeffs[6] == pb.pow(3);
    let mut fe = true;
    for j in 0..=6usize {
        // coeffs[6 - j] is the coefficient of T^j
        if &coeffs[6 - j] * pb.pow(j as u32) != &coeffs[j] * pb.pow(3) {
            fe = false;
        }
    }
    let count = curve.points_over_fp(p).len();
    let trace = -&coeffs[1];
    let count_ok = BigInt::from(count) == BigInt::from(p + 1) - &trace;
    let bounded = coeffs.iter().all(|c| c.abs() < pb.pow(digits.max(0) as u32) / 2 || c.is_zero());
    ZetaCheck {
        charpoly: coeffs,
        determinant_ok: det_ok && bounded,
        functional_equation_ok: fe && bounded,
        point_count: count,
        point_count_ok: count_ok,
        digits,
    }
}
