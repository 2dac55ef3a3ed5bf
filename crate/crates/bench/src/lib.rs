//! Fixtures shared by the benchmark targets.

use dilog_core::{five_term, parse_document, Context, FormalSum, IdentityDoc};

/// The five-term relation in two free variables.
pub fn five_term_xy() -> FormalSum {
    let ctx = Context::rational(&["x", "y"]);
    five_term(&ctx, &ctx.var("x"), &ctx.var("y")).expect("generic five-term relation")
}

/// The five-term relation at x = t^2 + 1, y = t/(t - 2): heavier gcds in one variable.
pub fn five_term_composite() -> FormalSum {
    let ctx = Context::rational(&["t"]);
    let t = ctx.var("t");
    let x = &(&t * &t) + &ctx.int(1);
    let y = (&t / &(&t - &ctx.int(2))).expect("nonzero denominator");
    five_term(&ctx, &x, &y).expect("generic five-term relation")
}

pub const DOCUMENT: &str = "dilog-identity 1
name: bench
field: rational
variables: x, y
terms:
  [x] - [y] + [y/x]
  + [(1 - x)/(1 - y)]
  - [(1 - 1/x)/(1 - 1/y)]
";

pub fn document() -> IdentityDoc {
    parse_document(DOCUMENT).expect("fixture parses")
}
