//! Dense linear algebra over Q_p with valuation pivoting.

use super::{PadicContext, PadicElement};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<PadicElement>>;

pub fn identity(ctx: &PadicContext, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { PadicElement::one(ctx) } else { PadicElement::zero(ctx) }).collect())
        .collect()
}

fn pivot_row(a: &Matrix, col: usize, from: usize) -> Option<usize> {
    (from..a.len())
        .filter(|&r| !a[r][col].is_zero())
        .min_by_key(|&r| a[r][col].val_or_prec())
}

/// Determinant by elimination; the result carries the precision the pivots allow.
pub fn determinant(m: &Matrix) -> PadicElement {
    let n = m.len();
    let ctx = m[0][0].ctx().clone();
    let mut a = m.clone();
    let mut det = PadicElement::one(&ctx);
    for col in 0..n {
        let Some(piv) = pivot_row(&a, col, col) else {
            let prec = (col..n).map(|r| a[r][col].abs_prec()).min().unwrap_or(0);
            return PadicElement::zero_to(&ctx, prec + det.val_or_prec());
        };
        if piv != col {
            a.swap(piv, col);
            det = det.neg_ref();
        }
        det = det.mul(&a[col][col]);
        let pinv = a[col][col].inverse().expect("nonzero pivot");
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let s = a[r][col].mul(&pinv);
            for j in col..n {
                let t = a[r][j].sub(&s.mul(&a[col][j]));
                a[r][j] = t;
            }
        }
    }
    det
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let ctx = m[0][0].ctx().clone();
    let mut a = m.clone();
    let mut b = identity(&ctx, n);
    for col in 0..n {
        let piv = pivot_row(&a, col, col).ok_or(Error::DivisionByZeroPrecision)?;
        a.swap(piv, col);
        b.swap(piv, col);
        let pinv = a[col][col].inverse()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pinv);
            b[col][j] = b[col][j].mul(&pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let s = a[r][col].clone();
            for j in 0..n {
                let t = a[r][j].sub(&s.mul(&a[col][j]));
                a[r][j] = t;
                let t = b[r][j].sub(&s.mul(&b[col][j]));
                b[r][j] = t;
            }
        }
    }
    Ok(b)
}

pub fn mat_vec(m: &Matrix, v: &[PadicElement]) -> Vec<PadicElement> {
    m.iter()
        .map(|row| {
            let mut s = PadicElement::zero(v[0].ctx());
            for (a, b) in row.iter().zip(v) {
                s = s.add(&a.mul(b));
            }
            s
        })
        .collect()
}

/// Right kernel of a k x n matrix. Each basis vector has a 1 in its own free coordinate,
/// zeros in the other free coordinates, and integral entries elsewhere.
pub fn kernel(m: &Matrix) -> Result<Vec<Vec<PadicElement>>> {
    let k = m.len();
    let n = m[0].len();
    let ctx = m[0][0].ctx().clone();
    let mut a = m.clone();
    let mut pivots: Vec<(usize, usize)> = vec![];
    let mut used_cols = vec![false; n];
    for row in 0..k {
        // full pivoting: smallest valuation among remaining rows and unused columns
        let mut best: Option<(usize, usize, i64)> = None;
        for r in row..k {
            for c in 0..n {
                if used_cols[c] || a[r][c].is_zero() {
                    continue;
                }
                let v = a[r][c].val_or_prec();
                if best.is_none_or(|b| v < b.2) {
                    best = Some((r, c, v));
                }
            }
        }
        let Some((r, c, _)) = best else {
            return Err(Error::DegenerateDivisor);
        };
        a.swap(r, row);
        let pinv = a[row][c].inverse()?;
        for j in 0..n {
            a[row][j] = a[row][j].mul(&pinv);
        }
        for rr in 0..k {
            if rr != row && !a[rr][c].is_zero() {
                let s = a[rr][c].clone();
                for j in 0..n {
                    let t = a[rr][j].sub(&s.mul(&a[row][j]));
                    a[rr][j] = t;
                }
            }
        }
        used_cols[c] = true;
        pivots.push((row, c));
    }
    let mut out = vec![];
    for free in (0..n).filter(|&c| !used_cols[c]) {
        let mut v = vec![PadicElement::zero(&ctx); n];
        v[free] = PadicElement::one(&ctx);
        for &(row, c) in &pivots {
            v[c] = a[row][free].neg_ref();
        }
        out.push(v);
    }
    Ok(out)
}
