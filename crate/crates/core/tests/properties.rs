use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use picard_core::chabauty::algdep::{algdep, recognize_rational};
use picard_core::chabauty::CurveRecord;
use picard_core::io::{parse_record, PadicRecord};
use picard_core::padic::{PadicContext, PadicElement, RamifiedElement, Valuation};
use picard_core::poly;
use picard_core::series::{hensel_system_of_roots, normalize, PadicSeries};

const PRIMES: [u64; 4] = [5, 7, 11, 13];

fn ratio(ctx: &PadicContext, n: i64, d: i64) -> PadicElement {
    PadicElement::from_ratio(ctx, n, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_identities(pi in 0usize..4, a in -10_000i64..10_000, b in -10_000i64..10_000, c in -10_000i64..10_000, d in 1i64..500) {
        let ctx = PadicContext::new(PRIMES[pi], 12);
        let (x, y, z) = (ratio(&ctx, a, d), PadicElement::from_int(&ctx, b), PadicElement::from_int(&ctx, c));
        prop_assert!(x.add(&y).sub(&y).agrees_with(&x));
        prop_assert!(x.mul(&y.add(&z)).agrees_with(&x.mul(&y).add(&x.mul(&z))));
        prop_assert!(x.mul(&y).agrees_with(&y.mul(&x)));
        if b != 0 {
            prop_assert!(x.mul(&y).div(&y).agrees_with(&x));
        }
    }

    #[test]
    fn rational_representative_is_congruent(pi in 0usize..4, n in -100_000i64..100_000, d in 1i64..1000) {
        let ctx = PadicContext::new(PRIMES[pi], 10);
        let x = ratio(&ctx, n, d);
        let back = PadicElement::from_rational(&ctx, &x.to_rational());
        prop_assert!(back.agrees_with(&x));
        let rec = PadicRecord::from_element(&x);
        prop_assert!(rec.to_element(&ctx).unwrap().agrees_with(&x));
        prop_assert_eq!(rec.to_element(&ctx).unwrap().abs_prec(), x.abs_prec());
    }

    #[test]
    fn valuation_is_additive(pi in 0usize..4, a in 1i64..100_000, b in 1i64..100_000) {
        let ctx = PadicContext::new(PRIMES[pi], 10);
        let (x, y) = (PadicElement::from_int(&ctx, a), PadicElement::from_int(&ctx, b));
        match (x.valuation(), y.valuation(), x.mul(&y).valuation()) {
            (Valuation::Finite(u), Valuation::Finite(v), Valuation::Finite(w)) => prop_assert_eq!(u + v, w),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn ramified_embedding_is_a_homomorphism(pi in 0usize..2, e in 2u32..9, a in -5000i64..5000, b in 1i64..5000) {
        let ctx = PadicContext::new(PRIMES[pi], 8);
        let (x, y) = (PadicElement::from_int(&ctx, a), PadicElement::from_int(&ctx, b));
        let lhs = RamifiedElement::from_padic(&x, e).mul(&RamifiedElement::from_padic(&y, e));
        let rhs = RamifiedElement::from_padic(&x.mul(&y), e);
        prop_assert!(lhs.sub(&rhs).is_zero());
        let pi_e = RamifiedElement::pi(&ctx, e).pow(e as i64).unwrap();
        let p = RamifiedElement::from_int(&ctx, e, PRIMES[pi] as i64);
        prop_assert!(pi_e.sub(&p).is_zero());
    }

    #[test]
    fn normalization_has_a_unit_coefficient(c in proptest::collection::vec(-500i64..500, 1..10)) {
        prop_assume!(c.iter().any(|&x| x != 0));
        let ctx = PadicContext::new(5, 12);
        let f = PadicSeries::from_ints(&ctx, &c, c.len() - 1);
        let n = normalize(&f).unwrap();
        let vals: Vec<i64> = n.series.coeffs().iter().filter_map(|a| a.valuation().finite()).collect();
        prop_assert_eq!(vals.iter().min().copied(), Some(0));
    }

    #[test]
    fn hensel_residues_are_roots(pi in 0usize..2, n in 1u32..5, c in proptest::collection::vec(-300i64..300, 1..7)) {
        prop_assume!(c.iter().any(|&x| x != 0));
        let p = PRIMES[pi];
        let ctx = PadicContext::new(p, n);
        let f = poly::from_i64(&c);
        let m = BigInt::from(p).pow(n);
        for r in hensel_system_of_roots(&f, &ctx, n) {
            let v = poly::eval(&f, &r.residue);
            prop_assert_eq!(((v % &m) + &m) % &m, BigInt::from(0));
            prop_assert!(r.known_digits <= n);
        }
    }

    #[test]
    fn algdep_recovers_small_rationals(a in -60i64..60, b in 1i64..60) {
        prop_assume!(b % 7 != 0 && a != 0);
        let ctx = PadicContext::new(7, 30);
        let x = ratio(&ctx, a, b);
        let q = recognize_rational(&x, &BigInt::from(1000)).unwrap();
        prop_assert_eq!(q, BigRational::new(BigInt::from(a), BigInt::from(b)));
        let rel = algdep(&x, 1, &BigInt::from(1000)).unwrap();
        prop_assert_eq!(poly::eval(&rel, &BigInt::from(0)) * BigInt::from(b) + &rel[1] * BigInt::from(a), BigInt::from(0));
    }

    #[test]
    fn curve_record_round_trips(f in proptest::collection::vec(-50i64..50, 4..5), label in "[a-z]{1,8}") {
        let mut coeffs = f.clone();
        coeffs.push(1);
        let mut rec = CurveRecord::from_i64(&coeffs);
        rec.label = Some(label);
        prop_assume!(rec.curve().is_ok());
        let text = serde_json::to_string(&rec).unwrap();
        let back = parse_record(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
