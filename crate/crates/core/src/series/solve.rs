use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::hensel::{hensel_system_of_roots, RootRecord};
use super::{normalize, truncation_bound, PadicSeries};
use crate::error::{Error, Result};
use crate::padic::{modp, PadicElement, Valuation};
use crate::poly;

/// Zeros of t -> c + integral_0^t f'(s) ds on t in pZ_p, as x = t/p roots of the
/// normalized truncated polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiskSolution {
    pub roots: Vec<RootRecord>,
    /// Normalized truncated polynomial F_M, coefficients mod p^precision.
    #[serde(with = "crate::io::bigint_vec")]
    pub poly: Vec<BigInt>,
    pub precision: i64,
    pub lambda: i64,
    pub truncation: i64,
    pub delta: i64,
    /// True when the constant term alone rules out zeros.
    pub empty_by_valuation: bool,
}

impl DiskSolution {
    fn empty() -> Self {
        DiskSolution {
            roots: vec![],
            poly: vec![],
            precision: 0,
            lambda: 0,
            truncation: 0,
            delta: 0,
            empty_by_valuation: true,
        }
    }

    /// Does F vanish at the residue r to min(precision, digits) digits?
    pub fn vanishes_at(&self, ctx: &crate::padic::PadicContext, r: &BigInt, digits: i64) -> bool {
        if self.empty_by_valuation {
            return false;
        }
        let k = digits.min(self.precision);
        if k <= 0 {
            return true;
        }
        let m = ctx.pow(k);
        modp(&poly::eval(&self.poly, r), &m).is_zero()
    }

    pub fn all_simple(&self) -> bool {
        self.roots.iter().all(|r| r.certified_simple)
    }
}

fn vp(mut i: i64, p: i64) -> i64 {
    let mut v = 0;
    while i != 0 && i % p == 0 {
        i /= p;
        v += 1;
    }
    v
}

/// Like `solve_zeros_in_disk` but keeps uncertified roots instead of failing.
/// Requires the coefficients of `fprime` to be integral, including the unknown tail.
pub fn solve_zeros_raw(fprime: &PadicSeries, c: &PadicElement, cap: Option<i64>) -> Result<DiskSolution> {
    let ctx = fprime.ctx().clone();
    let p = ctx.p() as i64;
    if let Valuation::Finite(v) = c.valuation() {
        if v < 0 {
            return Ok(DiskSolution::empty());
        }
    }
    let (f, delta) = fprime.antiderivative(c);
    let norm = match normalize(&f) {
        Ok(n) => n,
        Err(Error::NoRootsGuaranteed) => return Ok(DiskSolution::empty()),
        Err(e) => return Err(e),
    };
    let lambda = norm.lambda;
    let big_t = f.order() as i64;
    let mut prec = norm.series.min_abs_prec();
    for i in (big_t + 1)..(big_t + 1 + p * p + 2) {
        prec = prec.min(i - vp(i, p) - lambda);
    }
    if let Some(cap) = cap {
        prec = prec.min(cap);
    }
    if prec <= 0 {
        return Err(Error::PrecisionExhausted(format!(
            "disk series known to {prec} digits after normalization (lambda = {lambda}, delta = {delta})"
        )));
    }
    let m_bound = truncation_bound(prec, lambda, ctx.p());
    let keep = (m_bound.min(big_t + 1)) as usize;
    let coeffs: Vec<BigInt> = norm.series.coeffs()[..keep].iter().map(|a| a.residue(prec)).collect();
    let fm = poly::trim(coeffs);
    if fm.is_empty() || fm.iter().all(|c| ctx.val_of(c).is_some_and(|v| v > 0)) {
        return Err(Error::PrecisionExhausted("normalized series vanishes mod p".into()));
    }
    let roots = hensel_system_of_roots(&fm, &ctx, prec as u32);
    Ok(DiskSolution {
        roots,
        poly: fm,
        precision: prec,
        lambda,
        truncation: m_bound,
        delta,
        empty_by_valuation: false,
    })
}

/// Zeros in pZ_p of the integral with derivative `fprime` and value `c` at t = 0.
/// Every root must be certified simple.
pub fn solve_zeros_in_disk(fprime: &PadicSeries, c: &PadicElement, cap: Option<i64>) -> Result<DiskSolution> {
    let sol = solve_zeros_raw(fprime, c, cap)?;
    if !sol.all_simple() {
        return Err(Error::DoubleRoot(format!("{} roots, precision {}", sol.roots.len(), sol.precision)));
    }
    Ok(sol)
}
