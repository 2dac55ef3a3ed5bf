//! `render(parse(e))` parses back to the same rational function.

use dilog_core::syntax::parse_expression;
use dilog_core::{CoeffMode, Context, FieldMode};
use proptest::prelude::*;

fn expr(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![
        (-9i64..10).prop_map(|k| k.to_string()),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(String::from),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = expr(depth - 1);
    prop_oneof![
        2 => leaf,
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
        1 => (sub, 0i64..4).prop_map(|(a, e)| format!("({a})^{e}")),
    ]
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rendered_expressions_reparse(src in expr(3)) {
        let ctx = Context::new(&["x", "y", "z"], FieldMode::Rational, CoeffMode::Integer);
        // division by a constant zero is a legitimate parse error
        if let Ok(f) = parse_expression(&src, &ctx) {
            let again = parse_expression(&f.render(ctx.vars()), &ctx).unwrap();
            prop_assert_eq!(again, f);
        }
    }

    #[test]
    fn gaussian_expressions_reparse(a in -5i64..6, b in -5i64..6, e in 0i64..3) {
        let ctx = Context::new(&["z"], FieldMode::Gaussian, CoeffMode::Integer);
        let src = format!("({a} + {b}*i)*z^{e} - i/({a}*z + 1 + i)");
        let f = parse_expression(&src, &ctx).unwrap();
        prop_assert_eq!(parse_expression(&f.render(ctx.vars()), &ctx).unwrap(), f);
    }
}
