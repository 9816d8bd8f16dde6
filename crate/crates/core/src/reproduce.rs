//! The built-in check corpus behind `fresco reproduce`: chain and
//! annihilator identities of the four-monomial example, Bernstein
//! polynomials, bounds, theme profiles, certificates, seeded property
//! checks and truncation stability.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use rand::rngs::StdRng;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use crate::ab::AbElement;
use crate::case::{run_case, CaseFile, CaseOutcome, RunOptions};
use crate::euler::{
    annihilator, bernstein_bound, build_matrix, chain, chain_state, example_germ, first_step_factors, resolve_check, rhs_pattern, right_hand_side, step,
    Generator, MonomialGerm,
};
use crate::linalg::Matrix;
use crate::parse::{parse_ab, parse_ab_rational};
use crate::poly::UniPoly;
use crate::scalar::{int, rat, ParamScalar, Rational, Scalar};
use crate::theme::{lemma_missing_check, pole_certificate, recover_generator, FullBernstein, Verdict, TOP_LOG};
use crate::xi::{kth_bernstein_from_generator, leading_transfer, Coefficient, LogExpansion, Space};

/// Number of random instances per property check.
pub const PROPERTY_INSTANCES: usize = 100;
/// Seed of every property check.
pub const PROPERTY_SEED: u64 = 0x5eed_f4e5;

pub const CASE_NAMES: [&str; 4] = ["omega1", "omega2", "omega3", "omega4"];

pub fn case_source(name: &str) -> Option<&'static str> {
    match name {
        "omega1" => Some(include_str!("../../../cases/omega1.json")),
        "omega2" => Some(include_str!("../../../cases/omega2.json")),
        "omega3" => Some(include_str!("../../../cases/omega3.json")),
        "omega4" => Some(include_str!("../../../cases/omega4.json")),
        _ => None,
    }
}

type CheckFn = Box<dyn Fn() -> std::result::Result<String, String> + Send + Sync>;

pub struct Check {
    pub criterion: u8,
    pub name: String,
    run: CheckFn,
}

impl Check {
    pub fn new(criterion: u8, name: impl Into<String>, run: impl Fn() -> std::result::Result<String, String> + Send + Sync + 'static) -> Self {
        Check { criterion, name: name.into(), run: Box::new(run) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Outcome = std::result::Result<Arc<CaseOutcome>, String>;

/// Case outcomes are shared between checks.
fn outcome(name: &str, truncation: usize) -> Outcome {
    static CACHE: OnceLock<Mutex<BTreeMap<(String, usize), Arc<OnceLock<Outcome>>>>> = OnceLock::new();
    let slot = {
        let mut map = CACHE.get_or_init(Default::default).lock().expect("cache lock");
        map.entry((name.to_string(), truncation)).or_default().clone()
    };
    slot.get_or_init(|| {
        let src = case_source(name).ok_or_else(|| format!("unknown case {name}"))?;
        let case = CaseFile::from_json(src).map_err(|e| e.to_string())?;
        let out = run_case(&case, &RunOptions { truncation: Some(truncation), lambda: None }).map_err(|e| e.to_string())?;
        if let Some(e) = &out.report.error {
            return Err(format!("{} failed: {}", e.stage, e.message));
        }
        Ok(Arc::new(out))
    })
    .clone()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ab(text: &str) -> AbElement<ParamScalar> {
    parse_ab(text).unwrap_or_else(|e| panic!("corpus expression {text}: {e}"))
}

fn shifts(v: &[Rational]) -> UniPoly<Rational> {
    UniPoly::from_shifts(v)
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn factored(p: &UniPoly<Rational>) -> String {
    p.render_factored()
}

/// `chain(seed, word)` for the example germ equals `expected`.
pub fn chain_check(name: &str, seed: [u32; 3], word: Vec<usize>, expected: &str) -> Check {
    let expected = expected.to_string();
    Check::new(1, name, move || {
        let g = example_germ();
        let m = build_matrix(&g).map_err(|e| e.to_string())?;
        let got = chain(&g, &m, &seed, &word).map_err(|e| e.to_string())?;
        let want = ab(&expected);
        ensure(got == want, || format!("chain{word:?} = {got}, expected {want}"))?;
        Ok(format!("chain{word:?} = {got}"))
    })
}

fn criterion1() -> Vec<Check> {
    vec![
        Check::new(1, "appendix.omega1.first_step", || {
            let g = example_germ();
            let m = build_matrix(&g).map_err(|e| e.to_string())?;
            let f = first_step_factors(&g, &m, &[0, 0, 0]).map_err(|e| e.to_string())?;
            let minus = ab("-(a-b)");
            ensure(f[0] == minus && f[1] == minus && f[2] == minus, || format!("m1, m2, m3 = {}, {}, {}", f[0], f[1], f[2]))?;
            ensure(f[3] == ab("4a-3b"), || format!("m4 = {}", f[3]))?;
            Ok(format!("m1 = m2 = m3 = {minus}, m4 = {}", f[3]))
        }),
        chain_check("appendix.omega1.m1_squared", [0, 0, 0], vec![1, 1], "(a-3b)(a-b)"),
        chain_check("appendix.omega1.chain_123", [0, 0, 0], vec![1, 2, 3], "-(a-3b)(a-2b)(a-b)"),
        chain_check("appendix.omega1.chain_4444", [0, 0, 0], vec![4, 4, 4, 4], "4^4(a-3b)(a-9/4b)(a-3/2b)(a-3/4b)"),
        Check::new(1, "appendix.omega1.annihilator", || {
            let g = example_germ();
            let m = build_matrix(&g).map_err(|e| e.to_string())?;
            let ann = annihilator(&g, &m, &[0, 0, 0]).map_err(|e| e.to_string())?;
            let want = ab("(a-3b)(a-2b)(a-b) + 4^4/L^4*(a-13/4b)(a-5/2b)(a-7/4b)a");
            ensure(ann.main == want || ann.main == -want.clone(), || format!("annihilator {}", ann.main))?;
            ensure(ann.permutation_differences.is_empty(), || "orderings of the relation word disagree".into())?;
            Ok(format!("annihilator {}", ann.main))
        }),
    ]
}

fn criterion2() -> Vec<Check> {
    let goldens: [(&str, &str, Vec<Rational>); 5] = [
        ("bpoly.p3", "(a-3b)(a-2b)(a-b)", ints(&[1, 1, 1])),
        ("bpoly.p4", "(a-13/4b)(a-5/2b)(a-7/4b)a", vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4)]),
        ("bpoly.omega2_lowest", "(a-4b)(a-4b)(a-3b)", ints(&[2, 3, 3])),
        ("bpoly.omega4_lowest", "(a-4b)(a-3b)(a-3b)", ints(&[2, 2, 3])),
        ("bpoly.omega3_route", "(a-11/4b)(a-3b)(a-b)", vec![rat(3, 4), int(2), int(1)]),
    ];
    goldens
        .into_iter()
        .map(|(name, expr, roots)| {
            Check::new(2, name, move || {
                let p = parse_ab_rational(expr).map_err(|e| e.to_string())?;
                let got = p.bernstein_poly().map_err(|e| e.to_string())?;
                let want = shifts(&roots);
                ensure(got == want, || format!("B = {}, expected {}", factored(&got), factored(&want)))?;
                Ok(format!("B = {}", factored(&got)))
            })
        })
        .collect()
}

fn criterion3() -> Vec<Check> {
    vec![Check::new(3, "factorization.p4", || {
        let l = ab("4^4(a-3b)(a-9/4b)(a-3/2b)(a-3/4b)");
        let r = ab("4^4(a-13/4b)(a-5/2b)(a-7/4b)a");
        ensure(l == r, || format!("{l} != {r}"))?;
        Ok(l.render())
    })]
}

fn expected_bound(case: &str) -> Vec<Rational> {
    match case {
        "omega1" => ints(&[1, 1, 1]),
        "omega2" => ints(&[2, 3, 3]),
        "omega3" => ints(&[2, 3, 5]),
        _ => ints(&[2, 2, 3]),
    }
}

fn seed_of(case: &str) -> [u32; 3] {
    match case {
        "omega1" => [0, 0, 0],
        "omega2" => [0, 3, 2],
        "omega3" => [0, 7, 0],
        _ => [1, 3, 0],
    }
}

fn criterion4() -> Vec<Check> {
    CASE_NAMES
        .iter()
        .map(|&case| {
            Check::new(4, format!("bound.{case}"), move || {
                let g = example_germ();
                let m = build_matrix(&g).map_err(|e| e.to_string())?;
                let b = bernstein_bound(&g, &m, &seed_of(case)).map_err(|e| e.to_string())?;
                let want = shifts(&expected_bound(case));
                ensure(b.bound == want, || format!("bound {}, expected {}", factored(&b.bound), factored(&want)))?;
                Ok(format!("{} by the {:?} rule", factored(&b.bound), b.rule))
            })
        })
        .collect()
}

/// Expected second Bernstein polynomial shift and full Bernstein
/// polynomial (one entry when determined, the candidate set otherwise).
fn expected_profile(case: &str) -> (i64, Vec<Vec<i64>>) {
    match case {
        "omega1" => (1, vec![vec![1, 1]]),
        "omega2" => (3, vec![vec![2, 3], vec![3, 3]]),
        "omega3" => (5, vec![vec![3, 5]]),
        _ => (3, vec![vec![2, 3]]),
    }
}

fn profile_check(case: &'static str, criterion: u8, truncation: usize) -> Check {
    Check::new(criterion, format!("theme.{case}.n{truncation}"), move || {
        let out = outcome(case, truncation)?;
        let p = &out.analysis.as_ref().ok_or("no theme analysis")?.profile;
        let (b2, full) = expected_profile(case);
        ensure(p.second.poly == UniPoly::linear(int(b2)), || format!("B^2 = {}, expected x+{b2}", factored(&p.second.poly)))?;
        let want: Vec<UniPoly<Rational>> = full.iter().map(|s| shifts(&ints(s))).collect();
        let render = |v: &[UniPoly<Rational>]| v.iter().map(factored).collect::<Vec<_>>().join(", ");
        match (&p.full, want.len()) {
            (FullBernstein::Determined(b), 1) => ensure(*b == want[0], || format!("B = {}, expected {}", factored(b), factored(&want[0])))?,
            (FullBernstein::Candidates(cs), n) if n > 1 => {
                let mut got = cs.clone();
                got.sort_by_key(|q| q.coeffs().to_vec());
                let mut w = want.clone();
                w.sort_by_key(|q| q.coeffs().to_vec());
                ensure(got == w, || format!("B in {{{}}}, expected {{{}}}", render(&got), render(&w)))?
            }
            (FullBernstein::Determined(b), _) => return Err(format!("B = {} resolved, expected the set {{{}}}", factored(b), render(&want))),
            (FullBernstein::Candidates(cs), _) => return Err(format!("B in {{{}}}, expected {}", render(cs), render(&want))),
        }
        let full = if want.len() == 1 { render(&want) } else { format!("{{{}}}", render(&want)) };
        Ok(format!("B^2 = {}, B = {full}", factored(&p.second.poly)))
    })
}

fn nu_check(truncation: usize, criterion: u8) -> Check {
    Check::new(criterion, format!("theme.nu_transfer.n{truncation}"), move || {
        let space = Space::theta(truncation);
        let p = ab("(a-Lb)(a-2b)(a-b)");
        let x = LogExpansion::term(&space, 1, TOP_LOG, 0, ParamScalar::one()).apply_op(&p);
        let got = x.coeff(4, TOP_LOG, 0);
        let want = (ParamScalar::from_i64(4) - ParamScalar::lambda()).checked_div(&ParamScalar::from_i64(24)).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("coefficient {got}, expected {want}"))?;
        for m in 0..4 {
            ensure(x.coeff(m, TOP_LOG, 0).is_zero(), || format!("unexpected top-log term at index {m}"))?;
        }
        Ok(format!("top-log coefficient at s^4 is {got}"))
    })
}

fn generator_check(truncation: usize, criterion: u8) -> Check {
    Check::new(criterion, format!("theme.generator.n{truncation}"), move || {
        let a = parse_ab_rational("(a-3b)(a-2b)(a-b) + 4^4*(a-13/4b)(a-5/2b)(a-7/4b)a").map_err(|e| e.to_string())?;
        let e = recover_generator(&a, &Space::theta(truncation)).map_err(|e| e.to_string())?;
        let u = e.coeff(0, TOP_LOG, 0);
        let v = e.coeff(1, TOP_LOG, 0);
        let w = e.coeff(2, TOP_LOG, 0);
        ensure(u == Coefficient::Forced(int(1)), || format!("u = {u:?}"))?;
        ensure(v.is_forced_nonzero() && w.is_forced_nonzero(), || format!("v = {v:?}, w = {w:?}"))?;
        let show = |c: &Coefficient<Rational>| match c {
            Coefficient::Forced(x) => x.to_string(),
            Coefficient::Free => "free".into(),
        };
        Ok(format!("u = 1, v = {}, w = {}", show(&v), show(&w)))
    })
}

fn omega3_image_check(truncation: usize, criterion: u8) -> Check {
    Check::new(criterion, format!("theme.omega3_image.n{truncation}"), move || {
        let out = outcome("omega3", truncation)?;
        let img = out.image.as_ref().ok_or("no route image")?;
        let top = img.coeff(5, TOP_LOG, 0);
        let log1 = img.coeff(3, 1, 0);
        ensure(top.is_forced_nonzero(), || format!("s^5 (Log s)^2 coefficient {top:?}"))?;
        ensure(log1.is_forced_nonzero(), || format!("s^3 Log s coefficient {log1:?}"))?;
        Ok("nonzero s^5 (Log s)^2 and s^3 Log s terms".into())
    })
}

fn criterion5() -> Vec<Check> {
    CASE_NAMES.iter().map(|&c| profile_check(c, 5, 12)).collect()
}

fn criterion6() -> Vec<Check> {
    vec![nu_check(12, 6), generator_check(12, 6), omega3_image_check(12, 6)]
}

fn criterion8() -> Vec<Check> {
    let roots = [-1, -3, -5, -3];
    let mut out: Vec<Check> = CASE_NAMES
        .iter()
        .map(|&case| {
            Check::new(8, format!("lemma_missing.{case}"), move || {
                let o = outcome(case, 12)?;
                let p = &o.analysis.as_ref().ok_or("no theme analysis")?.profile;
                let (v, detail) = lemma_missing_check(p, &p.alpha);
                ensure(v == Verdict::Pass, || format!("{v}: {detail}"))?;
                Ok(detail)
            })
        })
        .collect();
    out.extend(CASE_NAMES.iter().zip(roots).map(|(&case, root)| {
        Check::new(8, format!("certificate.{case}"), move || {
            let o = outcome(case, 12)?;
            let p = &o.analysis.as_ref().ok_or("no theme analysis")?.profile;
            let c = pole_certificate(p, case).map_err(|e| e.to_string())?;
            ensure(c.root == int(root) && c.pole_order == 2, || format!("root {}, order {}", c.root, c.pole_order))?;
            Ok(format!("double pole at {}", c.root))
        })
    }));
    out
}

/// The profile at truncation 16 agrees with the one at 12.
fn stability_check(case: &'static str) -> Check {
    Check::new(9, format!("stability.{case}.n16"), move || {
        let lo = outcome(case, 12)?;
        let hi = outcome(case, 16)?;
        let (lo, hi) = match (&lo.analysis, &hi.analysis) {
            (Some(a), Some(b)) => (&a.profile, &b.profile),
            _ => return Err("no theme analysis".into()),
        };
        ensure(lo.second == hi.second, || format!("B^2 {} at 12, {} at 16", factored(&lo.second.poly), factored(&hi.second.poly)))?;
        ensure(lo.first == hi.first && lo.full == hi.full, || "first or full Bernstein polynomial changes".into())?;
        ensure(lo.kernel_free_first == hi.kernel_free_first, || "kernel-free first Bernstein polynomial changes".into())?;
        Ok(format!("B^2 = {} at 12 and 16", factored(&hi.second.poly)))
    })
}

fn criterion9() -> Vec<Check> {
    let mut out: Vec<Check> = CASE_NAMES.iter().map(|&c| stability_check(c)).collect();
    out.extend([nu_check(16, 9), generator_check(16, 9), omega3_image_check(16, 9)]);
    out
}

fn rng(salt: u64) -> StdRng {
    StdRng::seed_from_u64(PROPERTY_SEED ^ salt)
}

fn small_rational(r: &mut StdRng) -> Rational {
    rat(r.gen_range(-9..=9), r.gen_range(1..=4))
}

fn random_element(r: &mut StdRng, max_degree: u32) -> AbElement<Rational> {
    let mut terms = Vec::new();
    for _ in 0..r.gen_range(1..=4) {
        let d = r.gen_range(0..=max_degree);
        let bi = r.gen_range(0..=d);
        terms.push((crate::ab::AbMonomial::new(bi, d - bi), small_rational(r)));
    }
    AbElement::from_terms(terms)
}

fn random_roots(r: &mut StdRng, p: usize) -> Vec<Rational> {
    (0..p).map(|_| small_rational(r)).collect()
}

fn random_expansion(r: &mut StdRng, space: &Space, max_index: usize) -> LogExpansion<Rational> {
    let mut x = LogExpansion::zero(space);
    for _ in 0..r.gen_range(1..=5) {
        let m = r.gen_range(0..=max_index);
        let j = r.gen_range(space.min_log()..=space.log_bound);
        let v = r.gen_range(0..space.dim_v);
        x = x.add(&LogExpansion::term(space, m, j, v, small_rational(r)));
    }
    x
}

fn property(name: &str, salt: u64, body: impl Fn(&mut StdRng, usize) -> std::result::Result<(), String> + Send + Sync + 'static) -> Check {
    Check::new(7, format!("property.{name}"), move || {
        let mut r = rng(salt);
        for i in 0..PROPERTY_INSTANCES {
            body(&mut r, i).map_err(|e| format!("instance {i}: {e}"))?;
        }
        Ok(format!("{PROPERTY_INSTANCES} instances"))
    })
}

fn rational_germ() -> MonomialGerm<Rational> {
    let g = example_germ();
    let gens = g.generators().iter().map(|x| Generator { coeff: x.coeff.eval_at(&int(1)).expect("no pole"), exponents: x.exponents.clone() }).collect();
    MonomialGerm::new(2, gens).expect("well-formed germ")
}

fn random_germ(r: &mut StdRng) -> Option<MonomialGerm<Rational>> {
    let gens: Vec<Generator<Rational>> = (0..4)
        .map(|_| Generator { coeff: small_rational(r) + int(10), exponents: (0..3).map(|_| r.gen_range(0..=4)).collect() })
        .collect();
    let g = MonomialGerm::new(2, gens).ok()?;
    build_matrix(&g).ok().map(|_| g)
}

fn criterion7() -> Vec<Check> {
    let a = AbElement::<Rational>::a;
    let b = AbElement::<Rational>::b;
    vec![
        property("commutator_algebra", 1, move |r, _| {
            let p = random_element(r, 3);
            let c = a() * b() - b() * a();
            ensure(c.clone() * p.clone() == b() * b() * p.clone(), || format!("left product with {p}"))?;
            ensure(p.clone() * c == p.clone() * b() * b(), || format!("right product with {p}"))
        }),
        property("commutator_module", 2, |r, i| {
            let quotient = i % 2 == 0;
            let space = Space::new(int(1) + rat((i % 3) as i64, 3), 2, 12, 1 + i % 2, quotient);
            let x = random_expansion(r, &space, 6);
            let lhs = x.apply_b().apply_a().sub(&x.apply_a().apply_b());
            ensure(lhs == x.apply_b().apply_b(), || format!("on {}", x.render()))
        }),
        property("root_formula", 3, |r, _| {
            let p = r.gen_range(1..=4);
            let roots = random_roots(r, p);
            let e = AbElement::from_linear_factors(&roots, int(1));
            let got = e.bernstein_poly().map_err(|e| e.to_string())?;
            let formula: Vec<Rational> = roots.iter().enumerate().map(|(i, l)| l.clone() - int((p - 1 - i) as i64)).collect();
            ensure(got == shifts(&formula), || format!("roots {roots:?}: {}", factored(&got)))
        }),
        property("right_divide", 4, |r, _| {
            let (np, nd) = (r.gen_range(2..=4), r.gen_range(1..=2));
            let p = AbElement::from_linear_factors(&random_roots(r, np), int(1)) + random_element(r, 2);
            let d = AbElement::from_linear_factors(&random_roots(r, nd), int(1));
            let (q, rem) = p.right_divide(&d).map_err(|e| e.to_string())?;
            ensure(q * d.clone() + rem.clone() == p, || format!("{p} by {d}"))?;
            ensure(rem.a_degree().is_none_or(|k| k < d.a_degree().unwrap_or(0)), || format!("remainder {rem}"))
        }),
        property("leading_transfer", 5, |r, _| {
            let space = Space::theta(14);
            let deg = r.gen_range(1..=4);
            let p = AbElement::from_linear_factors(&random_roots(r, deg), int(1));
            let i = r.gen_range(0..6);
            let img = LogExpansion::term(&space, i, TOP_LOG, 0, int(1)).apply_op(&p);
            let t = leading_transfer(&p, i, &space.alpha).map_err(|e| e.to_string())?;
            ensure(img.coeff(i + deg, TOP_LOG, 0) == t, || format!("{p} at index {i}"))
        }),
        property("v_basis_invariance", 6, |r, _| {
            let space = Space::new(int(1), 2, 12, 2, true);
            let e = random_expansion(r, &space, 8).add(&LogExpansion::term(&space, r.gen_range(0..4), 2, 0, int(1)));
            let g = loop {
                let g = Matrix::from_rows(vec![vec![small_rational(r), small_rational(r)], vec![small_rational(r), small_rational(r)]]);
                if !g.determinant().is_zero() {
                    break g;
                }
            };
            let before = kth_bernstein_from_generator(&e, 2).map_err(|e| e.to_string())?;
            let after = kth_bernstein_from_generator(&e.change_v_basis(&g), 2).map_err(|e| e.to_string())?;
            ensure(before.poly == after.poly, || format!("{} vs {}", before.poly, after.poly))
        }),
        property("step_resolve", 7, |r, i| {
            let germ = if i % 2 == 0 { Some(rational_germ()) } else { random_germ(r) };
            let Some(germ) = germ else { return Ok(()) };
            let m = build_matrix(&germ).map_err(|e| e.to_string())?;
            let seed: Vec<u32> = (0..3).map(|_| r.gen_range(0..=5)).collect();
            let word: Vec<usize> = (0..r.gen_range(0..=2)).map(|_| r.gen_range(1..=4)).collect();
            let state = chain_state(&germ, &m, &seed, &word).map_err(|e| e.to_string())?;
            ensure(resolve_check(&m, &state, &step(&germ, &m, &state)), || format!("seed {seed:?} word {word:?}"))
        }),
        Check::new(7, "property.seven_right_hand_sides", || {
            let g = example_germ();
            let m = build_matrix(&g).map_err(|e| e.to_string())?;
            let p = 3u32;
            let systems: [(&str, [u32; 3], Vec<usize>, [i64; 3]); 7] = [
                ("1", [0, 0, 0], vec![], [1, 1, 1]),
                ("m1", [0, 0, 0], vec![1], [2, 4, 1]),
                ("m1m2", [0, 0, 0], vec![1, 2], [2, 5, 4]),
                ("m4^p", [0, 0, 0], vec![4; p as usize], [p as i64 + 1; 3]),
                ("y3z2", [0, 3, 2], vec![], [1, 4, 3]),
                ("y7", [0, 7, 0], vec![], [1, 8, 1]),
                ("m1^2", [0, 0, 0], vec![1, 1], [3, 7, 1]),
            ];
            for (name, seed, word, want) in systems {
                let st = chain_state(&g, &m, &seed, &word).map_err(|e| e.to_string())?;
                let pattern = rhs_pattern(&st.mu_exponents);
                let expected: Vec<(i64, i64)> = std::iter::once((1, 0)).chain(want.iter().map(|&c| (0, c))).collect();
                ensure(pattern == expected, || format!("{name}: {pattern:?}"))?;
                let rhs = right_hand_side(&st);
                let built: Vec<AbElement<ParamScalar>> = std::iter::once(AbElement::a() * st.op.clone())
                    .chain(want.iter().map(|&c| AbElement::b().scale(&ParamScalar::from_i64(c)) * st.op.clone()))
                    .collect();
                ensure(rhs == built, || format!("{name}: right-hand side differs"))?;
            }
            Ok("7 systems".into())
        }),
    ]
}

/// The full corpus in table order.
pub fn corpus() -> Vec<Check> {
    let mut v = Vec::new();
    v.extend(criterion1());
    v.extend(criterion2());
    v.extend(criterion3());
    v.extend(criterion4());
    v.extend(criterion5());
    v.extend(criterion6());
    v.extend(criterion7());
    v.extend(criterion8());
    v.extend(criterion9());
    v
}

/// Runs checks in parallel; results keep the input order.
pub fn run_corpus(checks: &[Check]) -> Vec<CheckResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(move || (c.run)())).collect();
        checks
            .iter()
            .zip(handles)
            .map(|(c, h)| {
                let res = h.join().unwrap_or_else(|_| Err("panicked".into()));
                let (passed, detail) = match res {
                    Ok(d) => (true, d),
                    Err(d) => (false, d),
                };
                CheckResult { criterion: c.criterion, name: c.name.clone(), passed, detail }
            })
            .collect()
    })
}

/// Runs the checks whose name contains `filter`.
pub fn run_checks(filter: Option<&str>) -> Vec<CheckResult> {
    let checks: Vec<Check> = corpus().into_iter().filter(|c| filter.is_none_or(|f| c.name.contains(f))).collect();
    run_corpus(&checks)
}

pub fn render_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(4);
    let mut s = String::new();
    for r in results {
        let _ = writeln!(s, "{:>2}  {:<width$}  {}  {}", r.criterion, r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(s, "{} checks, {} failed", results.len(), failed);
    s
}
