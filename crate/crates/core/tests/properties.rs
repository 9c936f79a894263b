use std::cmp::Ordering;

use proptest::prelude::*;

use hecke_core::{are_conjugate, cyclic_reduce, evaluate, matrix_to_word, Letter, RingContext, Sign, Word};

fn coeffs(degree: usize) -> impl Strategy<Value = Vec<i128>> {
    proptest::collection::vec(-1000i128..=1000, degree)
}

fn degree(p: u32) -> usize {
    RingContext::new(p).unwrap().degree()
}

fn word(p: u32, max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..p, 0..=max)
        .prop_map(move |ks| Word::reduce(p, ks.into_iter().map(|k| if k == 0 { Letter::Iota } else { Letter::Gamma(k) })))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws((p, x, y, z) in (3u32..=9).prop_flat_map(|p| {
        let d = degree(p);
        (Just(p), coeffs(d), coeffs(d), coeffs(d))
    })) {
        let ctx = RingContext::new(p).unwrap();
        let (x, y, z) = (ctx.elem(&x).unwrap(), ctx.elem(&y).unwrap(), ctx.elem(&z).unwrap());
        prop_assert_eq!(ctx.mul(&x, &y), ctx.mul(&y, &x));
        prop_assert_eq!(ctx.mul(&ctx.mul(&x, &y), &z), ctx.mul(&x, &ctx.mul(&y, &z)));
        prop_assert_eq!(ctx.mul(&x, &ctx.add(&y, &z)), ctx.add(&ctx.mul(&x, &y), &ctx.mul(&x, &z)));
        prop_assert_eq!(ctx.sub(&ctx.add(&x, &y), &y), x.clone());
        // sign agrees with the float embedding away from zero
        let a = ctx.approx(&x);
        if a.abs() > 1e-6 {
            prop_assert_eq!(ctx.sign(&x), if a > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        prop_assert_eq!(ctx.sign(&ctx.mul(&x, &x)) == Sign::Negative, false);
        prop_assert_eq!(ctx.cmp_real(&x, &y), ctx.cmp_real(&y, &x).reverse());
    }

    #[test]
    fn pseudo_divide_remainder_bound(p in 3u32..=8, a in coeffs(4), b in coeffs(4)) {
        let ctx = RingContext::new(p).unwrap();
        let d = ctx.degree();
        let (a, b) = (ctx.elem(&a[..d]).unwrap(), ctx.elem(&b[..d]).unwrap());
        prop_assume!(!b.is_zero());
        let (n, r) = ctx.pseudo_divide(&a, &b).unwrap();
        // a = b·nλ + r
        let q = ctx.scale(&ctx.mul_lambda(&b), n as i128);
        prop_assert_eq!(ctx.add(&q, &r), a);
        let twice_r = ctx.abs(&ctx.scale(&r, 2));
        let bl = ctx.abs(&ctx.mul_lambda(&b));
        prop_assert_ne!(ctx.cmp_real(&twice_r, &bl), Ordering::Greater);
    }

    #[test]
    fn words_round_trip(w in (3u32..=8).prop_flat_map(|p| word(p, 14))) {
        let ctx = RingContext::new(w.p()).unwrap();
        let g = evaluate(&ctx, &w);
        prop_assert_eq!(matrix_to_word(&g).unwrap(), w.clone());
        prop_assert!(evaluate(&ctx, &w.concat(&w.inverse())).is_identity());
        let (c, conj) = cyclic_reduce(&w);
        prop_assert_eq!(evaluate(&ctx, &conj.concat(c.as_word()).concat(&conj.inverse())), g);
        prop_assert!(are_conjugate(&w, c.as_word()));
    }

    #[test]
    fn theta_is_power_invariant(w in (3u32..=7).prop_flat_map(|p| word(p, 10)), n in prop::sample::select(vec![-3i64, -2, -1, 2, 3])) {
        let ctx = RingContext::new(w.p()).unwrap();
        let g = evaluate(&ctx, &w);
        prop_assume!(g.is_hyperbolic());
        let theta = g.fixed_point_ratio();
        prop_assert!(g.pow(n).fixed_point_ratio().same_as(&ctx, &theta));
    }
}
