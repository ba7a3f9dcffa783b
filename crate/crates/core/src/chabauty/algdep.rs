//! Integer relations for p-adic numbers by lattice reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::padic::{PadicElement, Valuation};
use crate::poly::{self, IntPoly};

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let rows: Vec<Vec<BigRational>> =
        b.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&rows[i], &star[j]) / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (star, mu, norms)
}

fn round(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (q.numer() * &two + q.denom()).div_floor(&(q.denom() * &two))
}

/// LLL reduction with delta = 3/4 in exact arithmetic. Meant for the handful of
/// dimensions algdep needs; Gram-Schmidt is recomputed after each change.
pub fn lll(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    let (_, mut mu, mut norms) = gram_schmidt(&b);
    while k < n {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                (_, mu, norms) = gram_schmidt(&b);
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (_, mu, norms) = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    b
}

fn primitive(mut c: IntPoly) -> IntPoly {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in c.iter_mut() {
            *x /= &g;
        }
    }
    c = poly::trim(c);
    if c.last().is_some_and(|l| l.is_negative()) {
        for x in c.iter_mut() {
            *x = -&*x;
        }
    }
    c
}

/// Shortest integer relation of exact degree `degree` for an integral alpha, using `digits` digits.
fn relation(alpha: &PadicElement, degree: usize, digits: i64) -> Option<IntPoly> {
    let ctx = alpha.ctx();
    let modulus = ctx.pow(digits);
    let n = degree + 1;
    // rows (p^k, 0, ..., 0) and (-alpha^i mod p^k, e_i)
    let mut rows = vec![];
    let mut first = vec![BigInt::zero(); n];
    first[0] = modulus.clone();
    rows.push(first);
    let mut pw = PadicElement::one(ctx);
    for i in 1..n {
        pw = pw.mul(alpha);
        let mut r = vec![BigInt::zero(); n];
        r[0] = -pw.residue(digits);
        r[i] = BigInt::one();
        rows.push(r);
    }
    let reduced = lll(rows);
    let best = reduced.into_iter().min_by_key(|r| r.iter().map(|x| x.abs()).max().unwrap())?;
    let c = primitive(best);
    if poly::degree(&c) != Some(degree) {
        return None;
    }
    Some(c)
}

/// Max absolute value of the coefficients.
pub fn height(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x.abs()).max().unwrap_or_default()
}

fn eval(c: &[BigInt], x: &PadicElement) -> PadicElement {
    let mut acc = PadicElement::zero(x.ctx());
    for a in c.iter().rev() {
        acc = acc.mul(x).add(&PadicElement::from_bigint(x.ctx(), a));
    }
    acc
}

/// Smallest degree integer polynomial of degree <= `degree`, height <= `height_bound`, with
/// c(alpha) = 0. The search uses all but two of the known digits; a candidate is kept only if
/// it vanishes to full precision and is short enough that a chance relation is unlikely.
pub fn algdep(alpha: &PadicElement, degree: usize, height_bound: &BigInt) -> Option<IntPoly> {
    let v = match alpha.valuation() {
        Valuation::Infinite => return Some(vec![BigInt::zero(), BigInt::one()]),
        Valuation::Finite(v) => v,
    };
    if v < 0 {
        // relation for 1/alpha, then reverse
        let inv = alpha.inverse().ok()?;
        let mut c = algdep(&inv, degree, height_bound)?;
        let d = poly::degree(&c)?;
        c.resize(d + 1, BigInt::zero());
        c.reverse();
        return Some(primitive(c));
    }
    let digits = alpha.abs_prec();
    let search = digits - 2;
    if search < 2 {
        return None;
    }
    let p = alpha.ctx().p() as f64;
    for d in 1..=degree {
        let Some(c) = relation(alpha, d, search) else { continue };
        let h = height(&c);
        if &h > height_bound {
            continue;
        }
        // a random lattice of this shape has shortest vectors near p^(search / (d + 1))
        let bits = h.bits().max(1) as f64;
        if bits * std::f64::consts::LN_2 * (d as f64 + 1.0) > (search as f64 - 1.0) * p.ln() {
            continue;
        }
        let r = eval(&c, alpha);
        if r.is_zero() {
            return Some(c);
        }
    }
    None
}

/// Exact rational value of alpha when it satisfies a linear relation.
pub fn recognize_rational(alpha: &PadicElement, height_bound: &BigInt) -> Option<BigRational> {
    let c = algdep(alpha, 1, height_bound)?;
    Some(BigRational::new(-c[0].clone(), c[1].clone()))
}
