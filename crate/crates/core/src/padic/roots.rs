use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::context::{inv_mod, modp, PadicContext};
use super::element::PadicElement;
use crate::error::{Error, Result};
use crate::poly;

/// Residues r in [0, p) with g(r) = 0 mod p.
pub fn roots_mod_p(g: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let gm: Vec<BigInt> = g.iter().map(|c| modp(c, &pb)).collect();
    (0..p)
        .filter(|&r| modp(&poly::eval(&gm, &BigInt::from(r)), &pb).is_zero())
        .collect()
}

/// Cube roots of unity in F_p (one or three of them).
pub fn cube_roots_of_unity_mod_p(p: u64) -> Vec<u64> {
    (1..p).filter(|&z| (z * z % p) * z % p == 1).collect()
}

/// Newton iteration for a simple root, on integers mod p^n.
fn newton_lift(g: &[BigInt], r0: &BigInt, ctx: &PadicContext, n: i64) -> BigInt {
    let dg = poly::derivative(g);
    let mut r = r0.clone();
    let mut k = 1i64;
    while k < n {
        k = (2 * k).min(n);
        let m = ctx.pow(k);
        let gv = modp(&poly::eval(g, &r), &m);
        let dv = modp(&poly::eval(&dg, &r), &m);
        let inv = inv_mod(&dv, &m).expect("derivative is a unit");
        r = modp(&(&r - gv * inv), &m);
    }
    r
}

/// The unique root in Z_p of g congruent to r0 mod p, to the context precision.
pub fn hensel_lift_root(g: &[BigInt], r0: u64, ctx: &PadicContext) -> Result<PadicElement> {
    let p = ctx.p_big();
    let r = BigInt::from(r0);
    let gv = modp(&poly::eval(g, &r), &p);
    let dv = modp(&poly::eval(&poly::derivative(g), &r), &p);
    if !gv.is_zero() || dv.is_zero() {
        return Err(Error::NotSimpleRoot);
    }
    let n = ctx.n() as i64;
    let lifted = newton_lift(g, &r, ctx, n);
    Ok(PadicElement::from_fixed(ctx, &lifted, 0, n))
}

/// All y in Q_p with y^3 = a, to the precision of a.
pub fn cube_roots(a: &PadicElement) -> Result<Vec<PadicElement>> {
    let ctx = a.ctx();
    if a.is_zero() {
        return Ok(vec![a.clone()]);
    }
    let v = a.val_or_prec();
    if v.rem_euclid(3) != 0 {
        return Err(Error::NoCubeRoot(v));
    }
    let p = ctx.p();
    let rel = a.relative_precision() as i64;
    let u = a.unit().clone();
    let u0 = modp(&u, &ctx.p_big()).to_u64().unwrap();
    let residues: Vec<u64> = (1..p).filter(|&y| (y * y % p) * y % p == u0).collect();
    let g = vec![-u, BigInt::zero(), BigInt::zero(), BigInt::from(1)];
    let mut out = Vec::with_capacity(residues.len());
    for y0 in residues {
        let y = newton_lift(&g, &BigInt::from(y0), ctx, rel);
        out.push(PadicElement::from_fixed(ctx, &y, v / 3, rel));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cube_root_of_32_at_11() {
        let ctx = PadicContext::new(11, 5);
        let roots = cube_roots(&PadicElement::from_int(&ctx, 32)).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].residue(1), BigInt::from(10));
        let cube = roots[0].pow(3).unwrap();
        assert!(cube.agrees_with(&PadicElement::from_int(&ctx, 32)));
        assert_eq!(cube.abs_prec(), 5);
    }

    #[test]
    fn cube_roots_of_5_at_13() {
        let ctx = PadicContext::new(13, 4);
        let roots = cube_roots(&PadicElement::from_int(&ctx, 5)).unwrap();
        let residue = (1..13u64).any(|y| y * y * y % 13 == 5);
        assert_eq!(roots.len(), if residue { 3 } else { 0 });
    }

    #[test]
    fn cube_root_edge_cases() {
        let ctx = PadicContext::new(7, 4);
        assert_eq!(cube_roots(&PadicElement::zero(&ctx)).unwrap().len(), 1);
        assert_eq!(cube_roots(&PadicElement::from_int(&ctx, 7)), Err(Error::NoCubeRoot(1)));
        let r = cube_roots(&PadicElement::from_int(&ctx, 343 * 6)).unwrap();
        assert!(r.iter().all(|y| y.valuation().finite() == Some(1)));
    }

    #[test]
    fn hensel_examples() {
        let ctx = PadicContext::new(5, 3);
        let r = hensel_lift_root(&big(&[-3, 1]), 3, &ctx).unwrap();
        assert_eq!(r.residue(3), BigInt::from(3));
        let r = hensel_lift_root(&big(&[-1, 0, 1]), 4, &ctx).unwrap();
        assert_eq!(r.residue(3), BigInt::from(124));
        assert_eq!(hensel_lift_root(&big(&[0, 0, 1]), 0, &ctx), Err(Error::NotSimpleRoot));

        let ctx = PadicContext::new(11, 4);
        let g = big(&[-1, 1, 1]);
        for r0 in roots_mod_p(&g, 11) {
            let r = hensel_lift_root(&g, r0, &ctx).unwrap().residue(4);
            assert!(modp(&poly::eval(&g, &r), &BigInt::from(14641)).is_zero());
        }
    }
}
