use dilog_core::padic::{plog, Branch, PadicNumber};
use dilog_core::{coeff, del, five_term, inversion, Context, RationalFunction, WedgeElement};
use num_rational::BigRational;
use proptest::prelude::*;

fn univariate(ctx: &Context, coeffs: &[i64]) -> RationalFunction {
    let t = ctx.var("t");
    let mut f = ctx.int(0);
    let mut power = ctx.int(1);
    for &c in coeffs {
        f = &f + &(&ctx.int(c) * &power);
        power = &power * &t;
    }
    f
}

/// A nonconstant polynomial in t with small integer coefficients.
fn poly() -> impl Strategy<Value = Vec<i64>> {
    (prop::collection::vec(-4i64..=4, 1..=3), 1i64..=3).prop_map(|(mut v, lead)| {
        v.push(lead);
        v
    })
}

fn unit_rational() -> impl Strategy<Value = BigRational> {
    (1i64..500, 1i64..500)
        .prop_filter("5-adic unit", |(a, b)| a % 5 != 0 && b % 5 != 0)
        .prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relations_have_zero_boundary(f in poly(), g in poly(), h in poly()) {
        let ctx = Context::rational(&["t"]);
        let x = univariate(&ctx, &f);
        let y = (&univariate(&ctx, &g) / &univariate(&ctx, &h)).unwrap();
        if let Ok(r) = five_term(&ctx, &x, &y) {
            prop_assert!(del(&r).unwrap().is_zero());
        }
        prop_assert!(del(&inversion(&ctx, &x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_antisymmetric(f in poly(), g in poly()) {
        let ctx = Context::rational(&["t"]);
        let (a, b) = (univariate(&ctx, &f), univariate(&ctx, &g));
        let w = WedgeElement::from_pairs(&ctx, [(coeff(1), a.clone(), b.clone()), (coeff(1), b, a)]).unwrap();
        prop_assert!(w.is_zero());
    }

    #[test]
    fn wedge_is_bilinear(f in poly(), g in poly(), h in poly(), k in -3i64..=3) {
        let ctx = Context::rational(&["t"]);
        let (a, b, c) = (univariate(&ctx, &f), univariate(&ctx, &g), univariate(&ctx, &h));
        let lhs = WedgeElement::from_pairs(&ctx, [(coeff(k), &a * &b, c.clone())]).unwrap();
        let rhs = WedgeElement::from_pairs(&ctx, [(coeff(k), a, c.clone()), (coeff(k), b, c)]).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn padic_log_is_a_homomorphism(x in unit_rational(), y in unit_rational(), e in -3i64..=3) {
        let p = 5;
        let branch = Branch::iwasawa(p);
        let y = y * BigRational::from_integer(5.into()).pow(e as i32);
        let (px, py) = (PadicNumber::from_rational(&x, p, 30), PadicNumber::from_rational(&y, p, 30));
        let lhs = plog(&px.mul(&py), &branch).unwrap();
        let rhs = plog(&px, &branch).unwrap().add(&plog(&py, &branch).unwrap());
        prop_assert!(lhs.agrees_to(&rhs, 28), "{} vs {}", lhs, rhs);
    }
}
