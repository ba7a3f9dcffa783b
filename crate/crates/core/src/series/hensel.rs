use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::padic::{modp, PadicContext};
use crate::poly;

/// Approximate root r of F mod p^N, correct to `known_digits` digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRecord {
    #[serde(with = "crate::io::bigint_str")]
    pub residue: BigInt,
    pub known_digits: u32,
    pub certified_simple: bool,
    pub derivative_valuation: u32,
}

/// f(a + p^i s) reduced mod p^n.
fn taylor_shift(f: &[BigInt], a: &BigInt, step: &BigInt, m: &BigInt) -> Vec<BigInt> {
    let lin = vec![a.clone(), step.clone()];
    let mut acc: Vec<BigInt> = vec![];
    for c in f.iter().rev() {
        acc = poly::mul(&acc, &lin);
        if acc.is_empty() {
            acc.push(BigInt::zero());
        }
        acc[0] += c;
        acc = acc.iter().map(|x| modp(x, m)).collect();
    }
    poly::trim(acc)
}

fn roots_mod(g: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    (0..p).filter(|&b| modp(&poly::eval(g, &BigInt::from(b)), &pb).is_zero()).collect()
}

/// Depth-first lifting of roots of F in Z/p^N: every returned (r, k) has F(r + p^k s) = 0
/// identically mod p^N, with k minimal along its branch.
pub fn hensel_system_of_roots(f: &[BigInt], ctx: &PadicContext, n: u32) -> Vec<RootRecord> {
    let p = ctx.p();
    let pb = BigInt::from(p);
    let m = ctx.pow(n as i64);
    let f: Vec<BigInt> = poly::trim(f.iter().map(|c| modp(c, &m)).collect());
    let df = poly::derivative(&f);

    let mut stack: Vec<(BigInt, u32)> = roots_mod(&f, p).into_iter().rev().map(|b| (BigInt::from(b), 1)).collect();
    let mut out = vec![];
    while let Some((a, i)) = stack.pop() {
        let step = ctx.pow(i as i64);
        let g0 = taylor_shift(&f, &a, &step, &m);
        if g0.is_empty() {
            let dv = modp(&poly::eval(&df, &a), &m);
            let v = ctx.val_of(&dv).map_or(n, |v| (v as u32).min(n));
            out.push(RootRecord {
                residue: a,
                known_digits: i,
                certified_simple: 2 * v < n,
                derivative_valuation: v,
            });
            continue;
        }
        let v = g0.iter().filter(|c| !c.is_zero()).map(|c| ctx.val_of(c).unwrap()).min().unwrap();
        let pv = ctx.pow(v);
        let g: Vec<BigInt> = g0.iter().map(|c| modp(&(c / &pv), &pb)).collect();
        let bs = roots_mod(&g, p);
        // prepend: the first new candidate is processed next
        for b in bs.into_iter().rev() {
            stack.push((&a + &step * BigInt::from(b), i + 1));
        }
    }
    out
}
