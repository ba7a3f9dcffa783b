//! Vanishing differentials, per-disk zeros and assembly of X(Q_p)_1.

pub mod algdep;
pub mod classify;
pub mod pipeline;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coleman::{ColemanEngine, DivisorSpec};
use crate::curve::{CurvePoint, DiskKind, FpPoint};
use crate::error::{Error, Result};
use crate::padic::{linalg, PadicElement};
use crate::series::{solve_zeros_raw, DiskSolution, PadicSeries};

pub use algdep::algdep;
pub use classify::{classify_point, ClassifyContext, PointClassification, PointTag};
pub use pipeline::{run_pipeline, ChabautyReport, CurveRecord, GeneratorSpec, PipelineParams, RunStatus};

/// Basis of the differentials whose integrals over every supplied divisor vanish.
#[derive(Clone, Debug)]
pub struct VanishingBasis {
    pub vectors: Vec<Vec<PadicElement>>,
    /// Digits to which the vectors are known.
    pub precision: i64,
    /// Integral vectors (int_D omega_i) of the divisors.
    pub divisor_integrals: Vec<Vec<PadicElement>>,
    /// Digits lost to the kernel computation.
    pub delta: i64,
}

pub fn vanishing_differentials(engine: &ColemanEngine, divisors: &[DivisorSpec]) -> Result<VanishingBasis> {
    if divisors.is_empty() || divisors.len() > 2 {
        return Err(Error::Invalid(format!("{} divisors; 1 or 2 expected", divisors.len())));
    }
    let rows: Vec<Vec<PadicElement>> = divisors.iter().map(|d| engine.divisor_integral(d)).collect::<Result<_>>()?;
    let base = engine.reported_precision();
    let rows: Vec<Vec<PadicElement>> = rows.into_iter().map(|r| r.into_iter().map(|a| a.truncate_abs(base)).collect()).collect();
    let vectors = linalg::kernel(&rows)?;
    let known = vectors.iter().flatten().map(|a| a.abs_prec()).min().unwrap_or(base).min(base);
    let delta = base - known;
    if known <= 0 {
        return Err(Error::PrecisionExhausted("N - ord_p(det(M - I)) - delta < 0".into()));
    }
    Ok(VanishingBasis { vectors, precision: known, divisor_integrals: rows, delta })
}

/// A point of X(Q_p)_1 with its disk and the digits certified by the root finder.
#[derive(Clone, Debug)]
pub struct ChabautyPoint {
    pub point: CurvePoint,
    pub disk: FpPoint,
    pub disk_kind: DiskKind,
    /// Uniformizer value t = p * r in the disk's local coordinate.
    pub t: PadicElement,
    pub certified_digits: u32,
}

/// Per-disk solver output, kept for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskSummary {
    pub disk: FpPoint,
    pub roots: usize,
    pub precision: i64,
    pub lambda: Vec<i64>,
}

fn dot(v: &[PadicElement], w: &[PadicElement]) -> PadicElement {
    v.iter().zip(w).fold(PadicElement::zero(v[0].ctx()), |s, (a, b)| s.add(&a.mul(b)))
}

fn disk_series(engine: &ColemanEngine, idx: usize, v: &[PadicElement]) -> Result<PadicSeries> {
    let d = &engine.disks[idx];
    let len = d.forms.iter().map(|f| f.exponent(f.c.len()).max(0) as usize).min().unwrap_or(0);
    let mut acc: Option<PadicSeries> = None;
    for (i, vi) in v.iter().enumerate() {
        let s = d.local.to_padic_series(&d.forms[i], len)?.scale(vi);
        acc = Some(match acc {
            None => s,
            Some(a) => a.add(&s),
        });
    }
    Ok(acc.expect("three forms"))
}

/// Residues r (t = p r) of the accepted common zeros in one disk.
fn intersect(sols: &[DiskSolution], ctx: &crate::padic::PadicContext) -> Result<Vec<(BigInt, u32)>> {
    let mut out: Vec<(BigInt, u32)> = vec![];
    let mut double = false;
    for (j, sol) in sols.iter().enumerate() {
        for root in &sol.roots {
            let digits = root.known_digits as i64;
            let common = sols.iter().enumerate().all(|(l, other)| l == j || other.vanishes_at(ctx, &root.residue, digits));
            if !common {
                continue;
            }
            let m = ctx.pow(digits.max(1));
            if out.iter().any(|(r, _)| crate::padic::modp(&(r - &root.residue), &m) == BigInt::ZERO) {
                continue;
            }
            // the root must be simple in some series where it occurs
            let simple = sols.iter().any(|s| {
                s.roots.iter().any(|r2| {
                    r2.certified_simple
                        && crate::padic::modp(&(&r2.residue - &root.residue), &ctx.pow((r2.known_digits as i64).min(digits).max(1)))
                            == BigInt::ZERO
                })
            });
            if simple {
                out.push((root.residue.clone(), root.known_digits));
            } else {
                double = true;
            }
        }
    }
    if double {
        return Err(Error::DoubleRoot("common zero is a multiple root of every vanishing differential".into()));
    }
    Ok(out)
}

/// X(Q_p)_1: the common zeros of int_infinity^Q v over every residue disk.
pub fn chabauty_set(engine: &ColemanEngine, basis: &VanishingBasis) -> Result<(Vec<ChabautyPoint>, Vec<DiskSummary>)> {
    if basis.precision <= 0 {
        return Err(Error::PrecisionExhausted("vanishing basis has no precision".into()));
    }
    let p = engine.p();
    let expected = engine.curve.points_over_fp(p).len();
    assert_eq!(engine.disks.len(), expected, "every residue disk is scanned");
    let ctx = &engine.ctx;
    let mut points = vec![];
    let mut summaries = vec![];
    for idx in 0..engine.disks.len() {
        let constants = engine.disk_constant(idx)?;
        let mut sols = vec![];
        for v in &basis.vectors {
            let series = disk_series(engine, idx, v)?;
            let c = dot(v, &constants);
            sols.push(solve_zeros_raw(&series, &c, Some(basis.precision))?);
        }
        let roots = intersect(&sols, ctx)?;
        let d = &engine.disks[idx];
        summaries.push(DiskSummary {
            disk: d.disk.reduction,
            roots: roots.len(),
            precision: sols.iter().map(|s| s.precision).min().unwrap_or(0),
            lambda: sols.iter().map(|s| s.lambda).collect(),
        });
        for (r, digits) in roots {
            let t = PadicElement::from_bigint(ctx, &r).truncate_abs(digits as i64).shift(1);
            points.push(ChabautyPoint {
                point: d.local.point_at(&t),
                disk: d.disk.reduction,
                disk_kind: d.disk.kind,
                t,
                certified_digits: digits,
            });
        }
    }
    Ok((points, summaries))
}

#[cfg(test)]
mod tests;
