//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use dilog_core::algebra::MultiPoly;
use dilog_core::bloch_fq::{self, oracle, WedgeFp};
use dilog_core::numerics::{bloch_wigner, rl_bar, rogers, ModPiSqHalf, RealPoint};
use dilog_core::padic::{bracket, branch_diff, dp_disc, Branch, PadicNumber};
use dilog_core::wedge::wedge_specialize;
use dilog_core::{
    c_element, check_constant, coeff, del, five_term, inversion, iterate, naive_eval, numeric_probe, sp,
    Context, ExtendedFormalSum, FormalSum, ProbeDomain, RationalFunction, Scalar, SpecPlan, SpecStep, Substituted,
    WedgeElement,
};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(a: i64, b: i64) -> Scalar {
    Scalar::from_ratio(a, b)
}

fn konst(ctx: &Context, s: Scalar) -> RationalFunction {
    RationalFunction::constant(ctx.nvars(), s)
}

// ---------------------------------------------------------------- random input

fn rand_poly(rng: &mut ChaCha8Rng, ctx: &Context, max_deg: u32) -> RationalFunction {
    let mut f = ctx.int(rng.gen_range(-3..=3));
    for _ in 0..rng.gen_range(1..=2) {
        let mut m = ctx.int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        for v in ctx.vars() {
            let e = rng.gen_range(0..=max_deg);
            m = &m * &ctx.var(v).pow(e as i64).expect("nonnegative power");
        }
        f = &f + &m;
    }
    f
}

/// A random nonconstant rational function, not 0 or 1.
fn rand_function(rng: &mut ChaCha8Rng, ctx: &Context) -> RationalFunction {
    loop {
        let n = rand_poly(rng, ctx, 2);
        let d = if rng.gen_bool(0.5) { ctx.int(1) } else { rand_poly(rng, ctx, 1) };
        if let Ok(f) = &n / &d {
            if !f.is_constant() {
                return f;
            }
        }
    }
}

fn rand_five_term(rng: &mut ChaCha8Rng, ctx: &Context) -> FormalSum {
    loop {
        let (x, y) = (rand_function(rng, ctx), rand_function(rng, ctx));
        if let Ok(r) = five_term(ctx, &x, &y) {
            return r;
        }
    }
}

// ---------------------------------------------------------------- criterion 1

fn golden_specializations() -> Check {
    let ctx = Context::rational(&["t"]);
    let t = ctx.var("t");
    let alpha =
        FormalSum::from_terms(&ctx, [(coeff(1), &t * &t), (coeff(-2), t.clone()), (coeff(-2), -&t)]).unwrap();
    let at_one = sp(&alpha, &SpecStep::new(&ctx, "t", Substituted::Finite(ctx.int(1)), None).unwrap()).unwrap();
    ensure(at_one.render() == "-2[-1]", || format!("t -> 1 gave {at_one}"))?;
    for c in [2, 3, -5] {
        let cf = ctx.int(c);
        let at_inf = sp(&alpha, &SpecStep::new(&ctx, "t", Substituted::Infinity, Some(cf.clone())).unwrap()).unwrap();
        let want = c_element(&ctx, &cf).unwrap().scale(&coeff(3));
        ensure(at_inf == want, || format!("t -> inf, c = {c} gave {at_inf}"))?;
    }
    let ctx3 = Context::rational(&["t1", "t2", "t3"]);
    let (t1, t2, t3) = (ctx3.var("t1"), ctx3.var("t2"), ctx3.var("t3"));
    let a = FormalSum::symbol(&ctx3, &(&t1 + &t2) + &t3).unwrap();
    let s1 = SpecStep::new(&ctx3, "t2", Substituted::Finite(-&(&t1 + &t3)), Some(&t1 + &(&t3 * &t3))).unwrap();
    let s2 = SpecStep::new(&ctx3, "t1", Substituted::Finite(-&(&t3 * &t3)), Some(t3.clone())).unwrap();
    let got = iterate(&a, &SpecPlan::new(&ctx3, vec![s1, s2]).unwrap()).unwrap();
    let want = c_element(&ctx3, &t3).unwrap();
    ensure(got == want, || format!("three-variable plan gave {got}"))?;
    Ok("sp at 1, at inf (3 choices of c), three-variable plan".into())
}

// ---------------------------------------------------------------- criterion 2

fn ext(ctx: &Context, c0: i64, c1: i64, cinf: i64, ordinary: &[(i64, Scalar)]) -> ExtendedFormalSum {
    let mut e = ExtendedFormalSum::zero(ctx);
    e.c0 = coeff(c0);
    e.c1 = coeff(c1);
    e.c_inf = coeff(cinf);
    for (a, s) in ordinary {
        e.ordinary.add_term(coeff(*a), konst(ctx, s.clone())).unwrap();
    }
    e
}

fn specialization_table() -> Check {
    let ctx = Context::rational(&["t"]);
    let t = ctx.var("t");
    let one = ctx.int(1);
    let inv = |f: &RationalFunction| f.inv().unwrap();
    // witnesses at t = 0: x(0) ∈ {0, 1, ∞, c = 3}, y(0) ∈ {0, 1, ∞, d = 5}
    let xs = [("0", t.clone()), ("1", &one + &t), ("inf", inv(&t)), ("c", &ctx.int(3) + &t)];
    let two_t = &ctx.int(2) * &t;
    let ys = [("0", two_t.clone()), ("1", &one + &two_t), ("inf", inv(&two_t)), ("d", &ctx.int(5) + &t)];
    let (c, d) = (q(3, 1), q(5, 1));
    let expected = |xn: &str, yn: &str| -> ExtendedFormalSum {
        match (xn, yn) {
            ("0", "0") | ("1", _) => ext(&ctx, 0, 1, 0, &[]),
            ("0", "1") => ext(&ctx, 1, -1, 1, &[]),
            ("0", "inf") => ext(&ctx, 2, 0, -1, &[]),
            // [0] − [d] + [(1 − d)⁻¹]
            ("0", "d") => ext(&ctx, 1, 0, 0, &[(-1, d.clone()), (1, q(-1, 4))]),
            ("inf", "0") => ext(&ctx, -1, 0, 2, &[]),
            ("inf", "1") => ext(&ctx, 1, -1, 1, &[]),
            // 2[∞] + [0] − [d] − [(1 − d⁻¹)⁻¹]
            ("inf", "d") => ext(&ctx, 1, 0, 2, &[(-1, d.clone()), (-1, q(5, 4))]),
            // [c] + [1 − c] − [0]
            ("c", "0") => ext(&ctx, -1, 0, 0, &[(1, c.clone()), (1, q(-2, 1))]),
            // [c] − [1] + [c⁻¹]
            ("c", "1") => ext(&ctx, 0, -1, 0, &[(1, c.clone()), (1, q(1, 3))]),
            // [c] + [0] − [1 − c⁻¹]
            ("c", "inf") => ext(&ctx, 1, 0, 0, &[(1, c.clone()), (-1, q(2, 3))]),
            _ => unreachable!(),
        }
    };
    let zero = Substituted::Finite(ctx.int(0));
    let mut cells = 0;
    for (xn, x) in &xs {
        for (yn, y) in &ys {
            let got = naive_eval(&five_term(&ctx, x, y).unwrap(), 0, &zero);
            let want = match (*xn, *yn) {
                ("inf", "inf") => continue,
                ("c", "d") => {
                    let r = five_term(&ctx, &konst(&ctx, c.clone()), &konst(&ctx, d.clone())).unwrap();
                    ExtendedFormalSum { ordinary: r, ..ExtendedFormalSum::zero(&ctx) }
                }
                _ => expected(xn, yn),
            };
            ensure(got == want, || format!("cell x={xn}, y={yn}: got {}, want {}", got.render(), want.render()))?;
            cells += 1;
        }
    }
    // x(0) = y(0) = c
    let got = naive_eval(&five_term(&ctx, &(&ctx.int(3) + &t), &(&ctx.int(3) + &two_t)).unwrap(), 0, &zero);
    ensure(got == ext(&ctx, 0, 1, 0, &[]), || format!("cell x=y=c: got {}", got.render()))?;
    // (∞, ∞), keyed by r = lim y/x
    let r5 = q(5, 1);
    let sub_cases = [
        ("r=1", inv(&t), &inv(&t) + &one, ext(&ctx, 0, 1, 0, &[])),
        ("r=0", inv(&(&t * &t)), inv(&t), ext(&ctx, 1, -1, 1, &[])),
        ("r=inf", inv(&t), inv(&(&t * &t)), ext(&ctx, 1, -1, 1, &[])),
        ("r=5", inv(&t), (&ctx.int(5) / &t).unwrap(), ext(&ctx, 0, -1, 0, &[(1, r5), (1, q(1, 5))])),
    ];
    for (name, x, y, want) in sub_cases {
        let got = naive_eval(&five_term(&ctx, &x, &y).unwrap(), 0, &zero);
        ensure(got == want, || format!("cell (inf, inf) {name}: got {}, want {}", got.render(), want.render()))?;
        cells += 1;
    }
    Ok(format!("{} cells (15 + c = d + 4 sub-cases of (inf, inf)) match", cells + 1))
}

// ---------------------------------------------------------------- criterion 3

fn relation_kernel() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts = [0usize; 2];
    for (k, vars) in [vec!["t"], vec!["t1", "t2"]].iter().enumerate() {
        let ctx = Context::rational(vars);
        for i in 0..200 {
            let r = rand_five_term(&mut rng, &ctx);
            ensure(del(&r).unwrap().is_zero(), || format!("del(five_term) ≠ 0 for {r}"))?;
            let x = rand_function(&mut rng, &ctx);
            let inv = inversion(&ctx, &x).unwrap();
            ensure(del(&inv).unwrap().is_zero(), || format!("del(inversion) ≠ 0 for {inv}"))?;
            counts[k] = i + 1;
        }
    }
    Ok(format!("{} five-term and {} inversion instances in 1 and 2 variables", counts[0] + counts[1], counts[0] + counts[1]))
}

// ---------------------------------------------------------------- criterion 4

fn diagram_commutes() -> Check {
    let ctx = Context::rational(&["t"]);
    let t = ctx.var("t");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let factors: Vec<RationalFunction> =
        (-2..=2).map(|r| &t - &ctx.int(r)).chain([&(&t * &t) + &ctx.int(1)]).collect();
    let targets: Vec<Substituted> = [q(-2, 1), q(-1, 1), q(0, 1), q(1, 1), q(2, 1), q(1, 2)]
        .into_iter()
        .map(|s| Substituted::Finite(konst(&ctx, s)))
        .chain([Substituted::Infinity])
        .collect();
    let auxes = [q(2, 1), q(3, 1), q(-1, 1), q(1, 2)];
    let mut done = 0;
    let mut degenerate = 0;
    while done < 100 {
        let mut alpha = FormalSum::zero(&ctx);
        for _ in 0..rng.gen_range(1..=4) {
            let mut f = konst(&ctx, q(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3)));
            for g in &factors {
                let e = [0, 0, 0, 1, 2, -1][rng.gen_range(0..6)];
                f = &f * &g.pow(e).unwrap();
            }
            if f.is_zero() || f.is_one() {
                continue;
            }
            alpha.add_term(coeff(rng.gen_range(-3..=3)), f).unwrap();
        }
        if alpha.is_zero() {
            continue;
        }
        let b = targets[rng.gen_range(0..targets.len())].clone();
        let c = konst(&ctx, auxes[rng.gen_range(0..auxes.len())].clone());
        let step = SpecStep::new(&ctx, "t", b.clone(), Some(c)).unwrap();
        let n = naive_eval(&alpha, 0, &b);
        if !(n.c0 == coeff(0) && n.c1 == coeff(0) && n.c_inf == coeff(0)) {
            degenerate += 1;
        }
        let left = del(&sp(&alpha, &step).unwrap()).unwrap();
        let right = wedge_specialize(&del(&alpha).unwrap(), 0, &b).unwrap();
        ensure(left.equals(&right).unwrap(), || {
            format!("alpha = {alpha}, b = {b:?}: del(sp) = {}, sp'(del) = {}", left.render(), right.render())
        })?;
        done += 1;
    }
    Ok(format!("{done} random sums ({degenerate} hit 0, 1 or inf)"))
}

// ---------------------------------------------------------------- criterion 5

fn criterion_smoke() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0f64;
    for i in 0..50 {
        let vars: &[&str] = if i % 2 == 0 { &["t"] } else { &["t1", "t2"] };
        let ctx = Context::rational(vars);
        let mut alpha = FormalSum::zero(&ctx);
        for _ in 0..rng.gen_range(1..=3) {
            let g = match rng.gen_range(0..3) {
                0 => rand_five_term(&mut rng, &ctx),
                1 => inversion(&ctx, &rand_function(&mut rng, &ctx)).unwrap(),
                _ => c_element(&ctx, &rand_function(&mut rng, &ctx))
                    .unwrap()
                    .minus(&c_element(&ctx, &rand_function(&mut rng, &ctx)).unwrap())
                    .unwrap(),
            };
            alpha = alpha.plus(&g.scale(&coeff(rng.gen_range(-3..=3)))).unwrap();
        }
        for _ in 0..rng.gen_range(0..=2) {
            let c = konst(&ctx, q(rng.gen_range(2..=12), rng.gen_range(1..=7)));
            if !c.is_one() {
                alpha.add_term(coeff(rng.gen_range(-3..=3)), c).unwrap();
            }
        }
        let cert = check_constant(&alpha).unwrap();
        ensure(cert.is_constant(), || format!("{alpha} judged not constant"))?;
        if alpha.is_zero() {
            continue;
        }
        let rep = numeric_probe(&alpha, &ProbeDomain::Complex, 100, 500 + i).unwrap();
        ensure(rep.points_used >= 100 && rep.max_deviation <= 1e-9, || {
            format!("{alpha}: probe deviation {:e}", rep.max_deviation)
        })?;
        worst = worst.max(rep.max_deviation);
    }
    let mut least = f64::INFINITY;
    let one = Context::rational(&["t"]);
    let t = one.var("t");
    let zz = Context::rational(&["z", "zb"]);
    let negatives = [
        FormalSum::symbol(&one, t.clone()).unwrap(),
        FormalSum::from_terms(&one, [(coeff(1), t.clone()), (coeff(1), &t * &t)]).unwrap(),
        FormalSum::symbol(&zz, &zz.var("z") + &zz.var("zb")).unwrap(),
    ];
    for (i, alpha) in negatives.iter().enumerate() {
        let cert = check_constant(alpha).unwrap();
        ensure(!cert.is_constant(), || format!("{alpha} judged constant"))?;
        let rep = numeric_probe(alpha, &ProbeDomain::Complex, 100, 900 + i as u64).unwrap();
        ensure(rep.max_deviation >= 1e-3, || format!("{alpha}: probe deviation only {:e}", rep.max_deviation))?;
        least = least.min(rep.max_deviation);
    }
    Ok(format!("50 constant (max dev {worst:.1e}), 3 not constant (min dev {least:.2})"))
}

// ---------------------------------------------------------------- criterion 6

fn gcd_free_basis() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let one = Context::rational(&["t"]);
    let two = Context::rational(&["t1", "t2"]);
    let parse = |ctx: &Context, srcs: &[&str]| -> Vec<RationalFunction> {
        srcs.iter().map(|s| dilog_core::parse_expression(s, ctx).unwrap()).collect()
    };
    let families = [
        (one.clone(), parse(&one, &["t", "t - 1", "t + 1", "t + 2", "t^2 + 1", "t^2 + t + 1", "t^2 - 2", "t^3 - t - 1"])),
        (two.clone(), parse(&two, &["t1", "t2", "t1 + t2", "t1 - t2 + 1", "t1*t2 + 1", "t1^2 + t2", "t2^2 + t1 + 1"])),
    ];
    for case in 0..100 {
        let (ctx, irr) = &families[case % 2];
        let k = irr.len();
        let mut terms = Vec::new();
        let mut want = vec![vec![0i64; k]; k];
        for _ in 0..rng.gen_range(1..=4) {
            let gen = |rng: &mut ChaCha8Rng| -> (RationalFunction, Vec<i64>) {
                let mut f = konst(ctx, q(rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 }, 1));
                let mut e = vec![0i64; k];
                for (j, p) in irr.iter().enumerate() {
                    e[j] = [0, 0, 0, 1, 2, -1][rng.gen_range(0..6)];
                    f = &f * &p.pow(e[j]).unwrap();
                }
                (f, e)
            };
            let (f, ef) = gen(&mut rng);
            let (g, eg) = gen(&mut rng);
            let a = rng.gen_range(-3..=3);
            for p in 0..k {
                for r in 0..k {
                    want[p][r] += a * (ef[p] * eg[r] - ef[r] * eg[p]);
                }
            }
            terms.push((coeff(a), f, g));
        }
        let w = WedgeElement::from_pairs(ctx, terms).unwrap();
        // exponents of each basis element over the irreducibles
        let factor = |b: &MultiPoly| -> Result<Vec<i64>, String> {
            let mut rest = b.clone();
            let mut e = vec![0i64; k];
            for (j, p) in irr.iter().enumerate() {
                while let Some(quot) = rest.div_exact(p.num()) {
                    if p.num().is_constant() {
                        break;
                    }
                    rest = quot;
                    e[j] += 1;
                }
            }
            ensure(rest.is_constant(), || format!("basis element {} does not factor", b.render(ctx.vars())))?;
            Ok(e)
        };
        let basis = w.basis().to_vec();
        let exps: Vec<Vec<i64>> = basis.iter().map(factor).collect::<Result<_, _>>()?;
        let mut got = vec![vec![0i64; k]; k];
        for (i, b) in basis.iter().enumerate() {
            for (j, b2) in basis.iter().enumerate() {
                let tv = w.t_pair(b, b2).unwrap();
                ensure(tv.is_integer(), || "non-integral pairing".into())?;
                let tv: i64 = tv.to_integer().try_into().unwrap();
                for p in 0..k {
                    for r in 0..k {
                        got[p][r] += exps[i][p] * exps[j][r] * tv;
                    }
                }
            }
        }
        ensure(got == want, || format!("case {case}: pairing matrices differ for {}", w.render()))?;
    }
    Ok("100 constructed inputs in 1 and 2 variables".into())
}

// ---------------------------------------------------------------- criterion 7

fn numerics() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = |z: Complex64| bloch_wigner(z).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let mut worst = [0f64; 7];
    let mut n = 0;
    let ok = |z: Complex64| z.norm() > 1e-3 && (one - z).norm() > 1e-3 && z.norm() < 1e3;
    while n < 1000 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let y = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let args = [z, y, y / z, (one - z) / (one - y), (one - one / z) / (one - one / y)];
        if !args.iter().all(|&a| ok(a)) {
            continue;
        }
        worst[0] = worst[0].max((d(z) + d(one / z)).abs());
        worst[1] = worst[1].max((d(z) + d(one - z)).abs());
        worst[2] = worst[2].max((d(z) + d(z.conj())).abs());
        worst[3] = worst[3].max((d(args[0]) - d(args[1]) + d(args[2]) + d(args[3]) - d(args[4])).abs());
        // real points for RL̄
        let (x, w) = (rng.gen_range(-3.0..3.0f64), rng.gen_range(-3.0..3.0f64));
        let rargs = [x, w, w / x, (1.0 - x) / (1.0 - w), (1.0 - 1.0 / x) / (1.0 - 1.0 / w)];
        if rargs.iter().all(|a| a.abs() > 1e-3 && (1.0 - a).abs() > 1e-3 && a.abs() < 1e3) {
            let rl = |v: f64| rl_bar(RealPoint::Finite(v));
            let l = ModPiSqHalf::new(PI * PI / 6.0);
            worst[4] = worst[4].max((rl(x) + rl(1.0 - x) + l).distance_to_zero());
            worst[5] = worst[5].max((rl(x) + rl(1.0 / x)).distance_to_zero());
            let five = rl(rargs[0]) - rl(rargs[1]) + rl(rargs[2]) + rl(rargs[3]) - rl(rargs[4]);
            worst[6] = worst[6].max(five.distance_to_zero());
        }
        n += 1;
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    ensure(max <= 1e-9, || format!("identity deviations {worst:?}"))?;
    // Catalan's constant by the alternating series, averaged at the tail
    let mut catalan = 0.0;
    let terms = 2_000_000;
    for k in (0..terms).rev() {
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        catalan += s / ((2 * k + 1) as f64).powi(2);
    }
    catalan += 0.5 / ((2 * terms + 1) as f64).powi(2) * if terms % 2 == 0 { 1.0 } else { -1.0 };
    let di = d(Complex64::new(0.0, 1.0));
    ensure((di - catalan).abs() <= 1e-10, || format!("D(i) = {di}, series {catalan}"))?;
    let l1 = rogers(1.0);
    ensure((l1 - PI * PI / 6.0).abs() <= 1e-12, || format!("L(1) = {l1}"))?;
    Ok(format!("1000 points, worst deviation {max:.1e}; D(i) error {:.1e}", (di - catalan).abs()))
}

// ---------------------------------------------------------------- criterion 8

fn padic_branches() -> Check {
    const P: u64 = 5;
    const N: u32 = 32;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ctx = Context::rational(&["t"]);
    let t = ctx.var("t");
    let keys = [t.clone(), &t * &t, (&t / &(&ctx.int(1) + &t)).unwrap()];
    let rat = |rng: &mut ChaCha8Rng, scale: i64| -> BigRational {
        let mut b = rng.gen_range(1..=999i64);
        while b % 5 == 0 {
            b += 1;
        }
        BigRational::new((scale * rng.gen_range(1..=999i64)).into(), b.into())
    };
    let branches: Vec<(Branch, Branch)> = (0..5)
        .map(|i| {
            let mk = |q: BigRational| Branch::new(PadicNumber::from_rational(&q, P, N));
            (mk(rat(&mut rng, if i % 2 == 0 { 1 } else { 5 })), mk(rat(&mut rng, 1)))
        })
        .collect();
    let mut min_digits = i64::MAX;
    for i in 0..50 {
        let z = rat(&mut rng, 5);
        let coeffs: Vec<i64> = (0..keys.len()).map(|_| rng.gen_range(-3..=3)).collect();
        let alpha = FormalSum::from_terms(&ctx, keys.iter().zip(&coeffs).map(|(k, &a)| (coeff(a), k.clone()))).unwrap();
        let w = del(&alpha).unwrap();
        let point = [Scalar::from_rational(z.clone())];
        let (a, b) = &branches[i % branches.len()];
        let mut direct = PadicNumber::exact_zero(P);
        for (f, c) in alpha.terms() {
            let v = f.eval(&point).unwrap();
            let v = PadicNumber::from_rational(v.re(), P, N);
            let diff = dp_disc(&v, a).unwrap().sub(&dp_disc(&v, b).unwrap());
            direct = direct.add(&diff.scale_rational(c));
        }
        let formula = branch_diff(&w, &point, a, b, N).unwrap();
        ensure(direct.agrees_to(&formula, 30), || format!("z = {z}: dp difference {direct}, formula {formula}"))?;
        min_digits = min_digits.min(direct.sub(&formula).valuation());
    }
    // the bracket does not see the branch
    for _ in 0..50 {
        let (sf, sg) = ([1, 5, 25][rng.gen_range(0..3)], [1, 5, 125][rng.gen_range(0..3)]);
        let f = PadicNumber::from_rational(&rat(&mut rng, sf), P, N);
        let g = PadicNumber::from_rational(&rat(&mut rng, sg), P, N);
        let vals: Vec<PadicNumber> =
            branches.iter().flat_map(|(a, b)| [a, b]).map(|br| bracket(&f, &g, br).unwrap()).collect();
        for v in &vals[1..] {
            let digits = v.absolute_precision().min(vals[0].absolute_precision());
            ensure(v.agrees_to(&vals[0], digits), || format!("bracket differs: {v} vs {}", vals[0]))?;
        }
    }
    Ok(format!("50 disc points x 5 branch pairs agree to >= {} digits", min_digits.min(1 << 20)))
}

// ---------------------------------------------------------------- criterion 9

fn finite_fields() -> Check {
    let mut groups = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let pr = bloch_fq::relations_matrix(p).map_err(|e| e.to_string())?;
        let w = WedgeFp::new(p).map_err(|e| e.to_string())?;
        ensure(pr.relations.iter().all(|r| w.del(r) == 0), || format!("p = {p}: a relation row has ∂ ≠ 0"))?;
        let facts = bloch_fq::check_c_facts(p).map_err(|e| e.to_string())?;
        ensure(facts.passed(), || format!("p = {p}: {:?}", facts.failures))?;
        let (pb, mb) = (bloch_fq::pre_bloch(p).unwrap(), bloch_fq::modified_bloch(p).unwrap());
        if p <= 7 {
            ensure(oracle::pre_bloch_by_minors(p).unwrap() == pb, || format!("p = {p}: minors oracle differs"))?;
            let (opb, omb) = oracle::enumerate(p, 1_000_000).unwrap().ok_or("oracle: group not finite")?;
            ensure(opb == pb && omb == mb, || format!("p = {p}: enumeration oracle differs"))?;
        }
        groups.push(format!("p={p}: {pb} / {mb}"));
    }
    Ok(groups.join("; "))
}

// ---------------------------------------------------------------- criterion 10

fn cli_end_to_end() -> Check {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../identities");
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_dilog")).args(args).output().unwrap();
    let five = root.join("five_term.dil");
    let five = five.to_str().unwrap();
    let o = run(&["check", five, "--seed", "11"]);
    let out = String::from_utf8_lossy(&o.stdout).to_string();
    ensure(o.status.code() == Some(0), || format!("five-term exit {:?}", o.status.code()))?;
    let constant = out.lines().find_map(|l| l.strip_prefix("constant: ")).ok_or("no constant line")?;
    let (v, bound) = constant.split_once(" ± ").ok_or("bad constant")?;
    ensure(v == "0" && bound.parse::<f64>().is_ok_and(|b| b <= 1e-9), || format!("constant {constant}"))?;
    ensure(run(&["check", five, "--seed", "11"]).stdout == o.stdout, || "report not deterministic".into())?;
    let j = run(&["check", five, "--seed", "11", "--json"]);
    ensure(j.stdout == run(&["check", five, "--seed", "11", "--json"]).stdout, || "JSON not deterministic".into())?;
    let sym = root.join("symbol_t.dil");
    let o = run(&["check", sym.to_str().unwrap()]);
    ensure(o.status.code() == Some(1), || format!("[t] exit {:?}", o.status.code()))?;
    let out = String::from_utf8_lossy(&o.stdout);
    ensure(out.contains("witness: (t, t - 1) -> 1"), || format!("[t] report:\n{out}"))?;
    Ok("five-term exits 0 with constant 0, [t] exits 1 with witness (t, t - 1)".into())
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "golden specializations", budget: Some(Duration::from_secs(1)), run: golden_specializations },
        Criterion { id: 2, title: "specialization table", budget: Some(Duration::from_secs(5)), run: specialization_table },
        Criterion { id: 3, title: "relation kernel", budget: Some(Duration::from_secs(30)), run: relation_kernel },
        Criterion { id: 4, title: "del commutes with specialization", budget: Some(Duration::from_secs(30)), run: diagram_commutes },
        Criterion { id: 5, title: "criterion smoke", budget: Some(Duration::from_secs(120)), run: criterion_smoke },
        Criterion { id: 6, title: "gcd-free basis soundness", budget: None, run: gcd_free_basis },
        Criterion { id: 7, title: "numerics", budget: None, run: numerics },
        Criterion { id: 8, title: "p-adic branches", budget: Some(Duration::from_secs(30)), run: padic_branches },
        Criterion { id: 9, title: "finite fields", budget: Some(Duration::from_secs(60)), run: finite_fields },
        Criterion { id: 10, title: "cli end-to-end", budget: None, run: cli_end_to_end },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({elapsed:.2?}): {detail}", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({elapsed:.2?}): {why}", c.id, c.title);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
