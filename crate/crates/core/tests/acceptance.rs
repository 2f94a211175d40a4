//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use coxforge::classify::{classify, Kind};
use coxforge::cli;
use coxforge::coxeter::{CoxeterMatrix, Label};
use coxforge::recognize::{affine_catalog, recognize, spherical_catalog, NamedType};
use coxforge::repr::{
    dihedral_order, enumerate_ball, reflection, verify_reduced_faithful, BallOptions, ReprError, ViolationKind,
};
use coxforge::scalar::{FieldContext, Scalar};
use coxforge::search::{default_alphabet, enumerate};
use coxforge::tits::{gram, inertia_by_charpoly, kernel, signature, Signature};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use Label::{Finite as F, Infinity as Inf};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sig_of(m: &CoxeterMatrix) -> Signature {
    signature(&gram(m).expect("labels fit the field"))
}

/// Exact signature, cross-checked against the characteristic polynomial
/// route and, where it can call it, the float eigenvalue oracle.
fn checked_sig(m: &CoxeterMatrix) -> Result<Signature, String> {
    let g = gram(m).map_err(|e| e.to_string())?;
    let s = signature(&g);
    let c = inertia_by_charpoly(g.entries());
    ensure(s == c, || format!("{m}: elimination {s} vs charpoly {c}"))?;
    if let Some((p, q, r)) = float_signature(m) {
        ensure((s.p, s.q, s.r) == (p, q, r), || format!("{m}: exact {s} vs float ({p},{q},{r})"))?;
    }
    Ok(s)
}

fn criterion_1() -> Outcome {
    let expect = |m: &CoxeterMatrix, want: Signature, what: &str| -> Result<(), String> {
        let got = checked_sig(m)?;
        ensure(got == want, || format!("{what}: got {got}, want {want}"))
    };
    expect(&fixture("triangle_inf"), Signature::new(2, 1, 0), "triangle-inf")?;
    expect(&fixture("hexagon_inf"), Signature::new(3, 1, 2), "hexagon-inf")?;
    let mut family = 0;
    for a in [F(2), F(3), Inf, F(7)] {
        for b in [F(2), F(3), Inf, F(7)] {
            for c in [F(3), F(5)] {
                for d in [F(3), F(5)] {
                    expect(
                        &five_vertex(a, b, c, d),
                        Signature::new(3, 1, 1),
                        &format!("five-vertex a={a} b={b} c={c} d={d}"),
                    )?;
                    family += 1;
                }
            }
        }
    }
    for n in 1..=5 {
        expect(&a_tilde(n), Signature::new(n, 0, 1), &format!("Ã_{n}"))?;
    }
    let catalog = spherical_catalog(8, 12);
    for (name, m) in &catalog {
        expect(m, Signature::new(m.rank(), 0, 0), &name.to_string())?;
    }
    Ok(format!(
        "triangle, hexagon, {family} five-vertex diagrams, Ã_1..Ã_5, {} spherical templates",
        catalog.len()
    ))
}

/// Largest finite group in the n <= 4 space is H_4, of order 14400, and its
/// longest element has length 60.
const CLOSURE_RADIUS: usize = 64;
const CLOSURE_BUDGET: usize = 16384;

fn closes(m: &CoxeterMatrix) -> Result<bool, String> {
    let opts = BallOptions {
        budget: CLOSURE_BUDGET,
        parallel: false,
    };
    match enumerate_ball(&gram(m).map_err(|e| e.to_string())?, CLOSURE_RADIUS, opts) {
        Ok(b) => Ok(b.closed),
        Err(ReprError::BudgetExceeded { .. }) => Ok(false),
        Err(e) => Err(e.to_string()),
    }
}

fn criterion_2() -> Outcome {
    let alphabet = default_alphabet();
    let mut total = 0;
    let mut finite = 0;
    let mut affine = 0;
    for n in 1..=4 {
        for m in enumerate(n, &alphabet, 1).map_err(|e| e.to_string())? {
            let s = sig_of(&m);
            let spherical = s.q == 0 && s.r == 0;
            let closed = closes(&m)?;
            ensure(spherical == closed, || {
                format!("{}: signature {s} but closure = {closed}", m.upper_triangle_string())
            })?;
            let is_affine_sig = s.q == 0 && s.r == 1;
            let name = recognize(&m);
            ensure(is_affine_sig == name.is_affine(), || {
                format!("{}: signature {s} but recognized as {name}", m.upper_triangle_string())
            })?;
            total += 1;
            finite += closed as usize;
            affine += is_affine_sig as usize;
        }
    }
    Ok(format!("{total} classes: {finite} finite, {affine} affine"))
}

trait UpperString {
    fn upper_triangle_string(&self) -> String;
}

impl UpperString for CoxeterMatrix {
    fn upper_triangle_string(&self) -> String {
        let parts: Vec<String> = self.upper_triangle().iter().map(|l| l.to_string()).collect();
        format!("n={} [{}]", self.rank(), parts.join(" "))
    }
}

fn criterion_3() -> Outcome {
    let alphabet = default_alphabet();
    let mut counts = Vec::new();
    for (n, min_p) in [(3, 2), (4, 3)] {
        let all = enumerate(n, &alphabet, 1).map_err(|e| e.to_string())?;
        for m in &all {
            let s = checked_sig(m)?;
            ensure(s.p >= min_p, || format!("{}: p = {} < {min_p}", m.upper_triangle_string(), s.p))?;
        }
        counts.push(all.len());
    }
    Ok(format!("n=3: {} classes with p >= 2; n=4: {} classes with p >= 3", counts[0], counts[1]))
}

fn criterion_4() -> Outcome {
    let opts = BallOptions {
        budget: 1_000_000,
        parallel: false,
    };
    let mut notes = Vec::new();
    for name in NON_AFFINE {
        let start = Instant::now();
        let m = fixture(name);
        let g = gram(&m).map_err(|e| e.to_string())?;
        let r = verify_reduced_faithful(&g, &kernel(&g), 8, opts).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.violations.is_empty(), || format!("{name}: violations {:?}", r.violations))?;
        let secs = start.elapsed().as_secs_f64();
        ensure(secs < 120.0, || format!("{name}: took {secs:.1}s"))?;
        notes.push(format!("{name} {} elements", r.checked + 1));
    }
    let m = fixture("a_tilde_1");
    let g = gram(&m).map_err(|e| e.to_string())?;
    let r = verify_reduced_faithful(&g, &kernel(&g), 2, opts).map_err(|e| e.to_string())?;
    ensure(
        r.violations
            .iter()
            .any(|v| v.word == [0, 1] && v.kind == ViolationKind::Identity),
        || format!("Ã_1: `st` missing from {:?}", r.violations),
    )?;
    let m = fixture("a_tilde_2");
    let g = gram(&m).map_err(|e| e.to_string())?;
    let k = kernel(&g);
    let first = (1..=6)
        .find(|&l| {
            verify_reduced_faithful(&g, &k, l, opts)
                .map(|r| !r.violations.is_empty())
                .unwrap_or(false)
        })
        .ok_or("Ã_2: no violation up to L = 6")?;
    notes.push(format!("Ã_1 flags st at L=2, Ã_2 first flags at L={first}"));
    Ok(notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut matrices: Vec<(String, CoxeterMatrix)> = FIXTURES.iter().map(|n| (n.to_string(), fixture(n))).collect();
    for (name, m) in spherical_catalog(6, 8).into_iter().chain(affine_catalog(6)) {
        matrices.push((name.to_string(), m));
    }
    for m in 2..=8 {
        matrices.push((format!("I_2({m})"), path(&[F(m)])));
    }
    let mut orders = 0;
    for (name, m) in &matrices {
        let g = gram(m).map_err(|e| e.to_string())?;
        let k = kernel(&g);
        for s in 0..m.rank() {
            let r = reflection(s, &g);
            ensure(r.preserves_form(&g), || format!("{name}: r_{s} does not preserve the form"))?;
            ensure(r.fixes_kernel(&k), || format!("{name}: r_{s} moves the kernel"))?;
            for t in s + 1..m.rank() {
                if let F(want) = m.label(s, t) {
                    if want <= 8 {
                        let got = dihedral_order(&g, s, t, 16);
                        ensure(got == Some(want as usize), || {
                            format!("{name}: order of r_{s} r_{t} is {got:?}, want {want}")
                        })?;
                        orders += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{} matrices, {orders} dihedral orders", matrices.len()))
}

fn criterion_6() -> Outcome {
    let cases: [(&str, CoxeterMatrix, usize); 4] = [
        ("A_2", path(&[F(3)]), 6),
        ("B_2", path(&[F(4)]), 8),
        ("A_3", path(&[F(3), F(3)]), 24),
        ("H_3", fixture("h3"), 120),
    ];
    for (name, m, want) in cases {
        let b = enumerate_ball(&gram(&m).map_err(|e| e.to_string())?, 64, BallOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(b.closed && b.len() == want, || {
            format!("{name}: closed={} size={}, want {want}", b.closed, b.len())
        })?;
    }
    let g = gram(&fixture("a_tilde_1")).map_err(|e| e.to_string())?;
    for l in 0..=10 {
        let b = enumerate_ball(&g, l, BallOptions::default()).map_err(|e| e.to_string())?;
        ensure(b.len() == 2 * l + 1 && !b.closed, || {
            format!("Ã_1 L={l}: size {}, closed={}", b.len(), b.closed)
        })?;
    }
    Ok("A_2=6, B_2=8, A_3=24, H_3=120; Ã_1 balls 2L+1 for L<=10".into())
}

fn criterion_7() -> Outcome {
    let rep = classify(&fixture("product")).map_err(|e| e.to_string())?;
    let mut radical: Vec<String> = rep.amenable_radical_factors.iter().map(|c| c.name.to_string()).collect();
    radical.sort();
    ensure(radical == ["A_2", "Ã_2"], || format!("product radical {radical:?}"))?;
    ensure(!rep.cstar.simple, || "product reported C*-simple".into())?;
    ensure(!rep.primitive.primitive, || "product reported primitive".into())?;
    for name in NON_AFFINE {
        let rep = classify(&fixture(name)).map_err(|e| e.to_string())?;
        ensure(rep.components.len() == 1 && rep.components[0].kind == Kind::NonAffine, || {
            format!("{name}: not a single non-affine factor")
        })?;
        ensure(rep.amenable_radical_factors.is_empty(), || format!("{name}: nonempty radical"))?;
        ensure(rep.cstar.simple && rep.cstar.unique_trace, || format!("{name}: not C*-simple"))?;
        ensure(rep.primitive.primitive, || format!("{name}: not primitive"))?;
    }
    use coxforge::recognize::Family::*;
    let table: [(NamedType, bool); 8] = [
        (NamedType::new(A, 4), true),
        (NamedType::new(D, 5), true),
        (NamedType::new(E, 6), true),
        (NamedType::dihedral(7), true),
        (NamedType::dihedral(9), false),
        (NamedType::new(B, 3), false),
        (NamedType::new(F, 4), false),
        (NamedType::new(H, 3), false),
    ];
    for (name, want) in table {
        let m = name.template().ok_or_else(|| format!("no template for {name}"))?;
        let rep = classify(&m).map_err(|e| e.to_string())?;
        ensure(rep.components[0].name == name, || format!("{name} recognized as {}", rep.components[0].name))?;
        ensure(rep.primitive.primitive == want, || format!("{name}: primitive = {}", rep.primitive.primitive))?;
    }
    Ok("product, 4 non-affine fixtures, 8-entry primitivity table".into())
}

fn random_scalar(rng: &mut ChaCha8Rng, ctx: &Arc<FieldContext>) -> Scalar {
    let coeffs = (0..ctx.degree())
        .map(|_| {
            let num = rng.gen_range(-20i64..=20);
            let den = rng.gen_range(1i64..=6);
            BigRational::new(num.into(), den.into())
        })
        .collect();
    Scalar::from_coeffs(ctx, coeffs)
}

fn oracle_value(x: &Scalar, gamma: &Fixed) -> Fixed {
    let coeffs: Vec<(BigInt, BigInt)> = x.coeffs().iter().map(|c| (c.numer().clone(), c.denom().clone())).collect();
    eval_coeffs(&coeffs, gamma)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let contexts: Vec<Arc<FieldContext>> = (1..=12).map(|n| FieldContext::for_order(n).unwrap()).collect();
    let gammas: Vec<Fixed> = (1..=12).map(two_cos_pi_over).collect();
    for i in 0..10_000 {
        let ctx = &contexts[rng.gen_range(0..12)];
        let (a, b, c) = (random_scalar(&mut rng, ctx), random_scalar(&mut rng, ctx), random_scalar(&mut rng, ctx));
        let zero = Scalar::zero(ctx);
        let one = Scalar::one(ctx);
        let ok = &(&a + &b) + &c == &a + &(&b + &c)
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &b == &b * &a
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a + &zero == a
            && &a * &one == a
            && (&a + &(-&a)).is_zero()
            && a.inv().map_or(a.is_zero(), |inv| (&a * &inv).is_one());
        ensure(ok, || format!("ring axioms fail at sample {i}: a={a:?} b={b:?} c={c:?}"))?;
    }
    let mut signs = 0;
    while signs < 1000 {
        let k = rng.gen_range(0..12);
        let x = random_scalar(&mut rng, &contexts[k]);
        if x.is_zero() {
            continue;
        }
        let v = oracle_value(&x, &gammas[k]);
        let numeric = v.sign_at(50);
        ensure(numeric != Ordering::Equal, || format!("{x:?} is below 1e-50 numerically"))?;
        ensure(x.sign() == numeric, || format!("{x:?}: exact {:?} vs numeric {numeric:?}", x.sign()))?;
        signs += 1;
    }
    // Telescoping sums and products of random terms, evaluated term by term
    // in fixed point; the exact result must be zero and the numeric one tiny.
    let mut zeros = 0;
    for _ in 0..200 {
        let k = rng.gen_range(0..12);
        let ctx = &contexts[k];
        let gamma = &gammas[k];
        let terms: Vec<Scalar> = (0..6).map(|_| random_scalar(&mut rng, ctx)).collect();
        let mut exact = Scalar::zero(ctx);
        let mut numeric = Fixed::from_int(0);
        for w in terms.windows(2) {
            exact = &exact + &(&w[0] - &w[1]);
            numeric = numeric.add(&oracle_value(&w[0], gamma).sub(&oracle_value(&w[1], gamma)));
        }
        exact = &exact - &(&terms[0] - &terms[5]);
        numeric = numeric.sub(&oracle_value(&terms[0], gamma).sub(&oracle_value(&terms[5], gamma)));
        let x = &terms[1];
        if let Some(inv) = x.inv() {
            // x * x^-1 - 1, numerically with the oracle's own division
            let e = &(x * &inv) - &Scalar::one(ctx);
            let nv = oracle_value(x, gamma).mul(&Fixed::from_int(1).div(&oracle_value(x, gamma)));
            let n = nv.sub(&Fixed::from_int(1));
            ensure(e.is_zero() && n.sign_at(40) == Ordering::Equal, || format!("inverse identity for {x:?}"))?;
        }
        ensure(exact.is_zero() && numeric.sign_at(40) == Ordering::Equal, || "telescoping sum".to_string())?;
        // A perturbed sum is nonzero both ways.
        let bump = Scalar::from_rational(ctx, BigRational::new(1.into(), BigInt::from(10).pow(30)));
        let moved = &exact + &bump;
        let nm = numeric.add(&Fixed::from_ratio(&1.into(), &BigInt::from(10).pow(30)));
        ensure(!moved.is_zero() && nm.sign_at(40) == Ordering::Greater && moved.sign() == Ordering::Greater, || {
            "perturbed telescoping sum".to_string()
        })?;
        zeros += 1;
    }
    // Chebyshev: gamma^2 - 2 is 2cos(2 pi / N).
    for (k, ctx) in contexts.iter().enumerate().skip(2) {
        let n = (k + 1) as u64;
        let gamma = Scalar::gamma(ctx);
        let lhs = &(&gamma * &gamma) - &Scalar::from_integer(ctx, 2);
        let rhs = Scalar::from_integer_coeffs(ctx, &ctx.two_cos_multiple(2));
        let numeric = gammas[k].mul(&gammas[k]).sub(&Fixed::from_int(2)).sub(&{
            let x = Fixed(pi().0 * 2 / BigInt::from(n));
            Fixed(cos(&x).0 * 2)
        });
        ensure((&lhs - &rhs).is_zero() && numeric.sign_at(40) == Ordering::Equal, || format!("Chebyshev at N={n}"))?;
    }
    Ok(format!("10000 ring checks, {signs} signs at 50 digits, {zeros} zero tests"))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut args_full = vec!["coxforge"];
    args_full.extend_from_slice(args);
    let code = cli::run(args_full, &mut std::io::empty(), &mut out, &mut err);
    (code, out)
}

fn criterion_9() -> Outcome {
    let mut runs = 0;
    for name in FIXTURES {
        let path = fixture_path(name);
        let path = path.to_str().unwrap();
        let mut cmds: Vec<Vec<&str>> = vec![
            vec!["classify", path],
            vec!["signature", path],
            vec!["repr", path, "--max-length", "4"],
        ];
        if *name != "hexagon_inf" && *name != "five_vertex" && *name != "product" {
            cmds.push(vec!["verify-faithful", path, "--max-length", "5"]);
        }
        for cmd in cmds {
            let (c1, o1) = run_cli(&cmd);
            let (c2, o2) = run_cli(&cmd);
            ensure(c1 == 0 && c2 == 0, || format!("{cmd:?} exited {c1}/{c2}"))?;
            ensure(o1 == o2, || format!("{cmd:?} output differs between runs"))?;
            runs += 1;
        }
    }
    let search = |workers: &str| run_cli(&["search", "--n", "2-4", "--alphabet", "2,3,5,inf", "--workers", workers]);
    let (c1, o1) = search("1");
    let (c4, o4) = search("4");
    let (c4b, o4b) = search("4");
    ensure(c1 == 0 && c4 == 0 && c4b == 0, || "search failed".into())?;
    ensure(o1 == o4 && o4 == o4b, || "search output depends on worker count".into())?;
    ensure(!o1.is_empty(), || "search printed nothing".into())?;
    Ok(format!("{runs} fixture commands twice each; search with 1 and 4 workers identical"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("signature fixtures", criterion_1),
        ("closure and affine equivalence, n <= 4", criterion_2),
        ("positive inertia bounds, n = 3 and 4", criterion_3),
        ("ball verification of the reduced representation", criterion_4),
        ("representation algebra", criterion_5),
        ("group-order oracles", criterion_6),
        ("group verdicts and primitivity table", criterion_7),
        ("exact-scalar soundness", criterion_8),
        ("determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|s| id.ends_with(s.as_str()) || title.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id}: {title} ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id}: {title}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
