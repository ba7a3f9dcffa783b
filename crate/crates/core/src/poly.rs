//! Dense integer polynomials, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn from_i64(c: &[i64]) -> IntPoly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn trim(mut a: IntPoly) -> IntPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &[BigInt]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn eval(a: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(a: &[BigInt]) -> IntPoly {
    a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn scale(a: &[BigInt], s: &BigInt) -> IntPoly {
    trim(a.iter().map(|c| c * s).collect())
}

/// Quotient and remainder by a monic divisor.
pub fn divrem_monic(a: &[BigInt], m: &[BigInt]) -> (IntPoly, IntPoly) {
    let dm = degree(m).expect("nonzero divisor");
    assert!(m[dm].is_one(), "divisor must be monic");
    let mut r: IntPoly = a.to_vec();
    if r.len() <= dm {
        return (vec![], trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - dm];
    for k in (dm..r.len()).rev() {
        let c = r[k].clone();
        if c.is_zero() {
            continue;
        }
        q[k - dm] = c.clone();
        for j in 0..=dm {
            r[k - dm + j] -= &c * &m[j];
        }
    }
    r.truncate(dm);
    (trim(q), trim(r))
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = degree(a).unwrap_or(0);
    let n = degree(b).unwrap_or(0);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            s[i][i + j] = a[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[n + i][i + j] = b[n - j].clone();
        }
    }
    det_bareiss(s)
}

/// Discriminant of a polynomial with leading coefficient dividing the resultant.
pub fn discriminant(a: &[BigInt]) -> BigInt {
    let n = degree(a).expect("nonzero polynomial");
    let r = resultant(a, &derivative(a));
    let s = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    s * r / &a[n]
}

pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(a: &[BigInt]) -> IntPoly {
    let a = trim(a.to_vec());
    let g = content(&a);
    if g.is_zero() {
        return a;
    }
    let mut out: IntPoly = a.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|c| c.is_negative()) {
        out = out.iter().map(|c| -c).collect();
    }
    out
}

pub fn to_string(a: &[BigInt], var: &str) -> String {
    let mut parts = vec![];
    for (i, c) in a.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let body = match i {
            0 => mag.to_string(),
            1 if mag.is_one() => var.to_string(),
            1 => format!("{}*{}", mag, var),
            _ if mag.is_one() => format!("{}^{}", var, i),
            _ => format!("{}*{}^{}", mag, var, i),
        };
        parts.push((sign, body));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (sign, body)) in parts.iter().enumerate() {
        if k == 0 {
            if *sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(if *sign == "-" { " - " } else { " + " });
        }
        s.push_str(body);
    }
    s
}
