//! Rank-two themes inside `Theta = Xi_1^(2) / Xi_1^(0)`: recovering a
//! generator's expansion from an annihilator, transporting it along operator
//! identities, and reading off first and second Bernstein polynomials.

use std::fmt;

use num_traits::Zero;

use crate::ab::AbElement;
use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{int, Rational, Scalar};
use crate::xi::{
    joint_kernel, kernel_of_operator, leading_transfer, log_filtration_intersect, solve_equations, span_submodule, Equation, AffineExpansion, Coefficient, Leading,
    LogExpansion, Space,
};

/// Log degree carrying the top of a rank-two theme in `Theta`.
pub const TOP_LOG: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), holds, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport<S> {
    pub checks: Vec<Check>,
    /// `nu` in `P = (a - nu b)(a - 2b)(a - b)`.
    pub nu: Option<S>,
}

impl<S> HypothesisReport<S> {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

/// Checks the hypotheses under which `P + cQ` has a kernel element with
/// nonzero coefficients at `(Log s)^2`, `s(Log s)^2` and `s^2(Log s)^2`.
pub fn verify_gen_theme_hypotheses<S: Scalar>(p: &AbElement<S>, q: &AbElement<S>, c: &S) -> HypothesisReport<S> {
    let mut checks = vec![
        Check::new("deg P = 3", p.degree() == Some(3) && p.is_homogeneous(), format!("P = {p}")),
        Check::new("deg Q = 4", q.degree() == Some(4) && q.is_homogeneous(), format!("Q = {q}")),
        Check::new("P monic in a", p.is_monic_in_a(), ""),
        Check::new("Q monic in a", q.is_monic_in_a(), ""),
        Check::new("c nonzero", !c.is_zero(), format!("c = {c}")),
    ];
    match q.bernstein_poly() {
        Ok(bq) => {
            for r in [1, 2] {
                let v = bq.eval(&S::from_i64(-r));
                checks.push(Check::new(&format!("B_Q(-{r}) nonzero"), !v.is_zero(), format!("B_Q = {bq}, B_Q(-{r}) = {v}")));
            }
        }
        Err(e) => checks.push(Check::new("B_Q defined", false, e.to_string())),
    }
    let nu = p_shape(p);
    checks.push(Check::new(
        "P = (a - nu b)(a - 2b)(a - b)",
        nu.is_some(),
        nu.as_ref().map(|n| format!("nu = {n}")).unwrap_or_else(|| "P is not right divisible by (a-2b)(a-b) with a linear quotient".into()),
    ));
    HypothesisReport { checks, nu }
}

fn p_shape<S: Scalar>(p: &AbElement<S>) -> Option<S> {
    let two = AbElement::linear_factor(&S::from_i64(2)) * AbElement::linear_factor(&S::one());
    let (quot, rem) = p.right_divide(&two).ok()?;
    if !rem.is_zero() || quot.degree() != Some(1) || !quot.is_homogeneous() || !quot.coeff(0, 1).is_one() {
        return None;
    }
    Some(-quot.coeff(1, 0))
}

/// Kernel of `A` in the space, normalized so that the coefficient of
/// `(Log s)^2` is 1. Kernel elements without that term become directions.
pub fn recover_generator<S: Scalar>(a: &AbElement<S>, space: &Space) -> Result<AffineExpansion<S>> {
    let kernel = kernel_of_operator(a, space);
    if kernel.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let Some(pos) = kernel.iter().position(|k| !k.coeff(0, TOP_LOG, 0).is_zero()) else {
        return Err(Error::HypothesisFailure("no kernel element has a (Log s)^2 term".into()));
    };
    let u = kernel[pos].coeff(0, TOP_LOG, 0);
    let particular = kernel[pos].scale(&u.inv()?);
    let directions = kernel
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .map(|(_, k)| k.sub(&particular.scale(&k.coeff(0, TOP_LOG, 0))))
        .filter(|d| !d.is_zero())
        .collect();
    Ok(AffineExpansion { particular, directions }.reduced())
}

/// The coefficients `u, v, w` of `(Log s)^2, s(Log s)^2, s^2(Log s)^2` and
/// the compensation identity at index 1.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorReport<S> {
    pub u: Coefficient<S>,
    pub v: Coefficient<S>,
    pub w: Coefficient<S>,
    /// `transfer(P,1) v + c transfer(Q,0) u`, which must vanish.
    pub compensation: Option<S>,
}

impl<S: Scalar> GeneratorReport<S> {
    pub fn shape_holds(&self) -> bool {
        self.u == Coefficient::Forced(S::one()) && self.v.is_forced_nonzero() && self.w.is_forced_nonzero()
    }
}

pub fn generator_report<S: Scalar>(e: &AffineExpansion<S>, p: &AbElement<S>, q: &AbElement<S>, c: &S) -> GeneratorReport<S> {
    let u = e.coeff(0, TOP_LOG, 0);
    let v = e.coeff(1, TOP_LOG, 0);
    let w = e.coeff(2, TOP_LOG, 0);
    let alpha = e.space().alpha.clone();
    let compensation = match (&u, &v, leading_transfer(p, 1, &alpha), leading_transfer(q, 0, &alpha)) {
        (Coefficient::Forced(u), Coefficient::Forced(v), Ok(tp), Ok(tq)) => Some(tp * v.clone() + c.clone() * tq * u.clone()),
        _ => None,
    };
    GeneratorReport { u, v, w, compensation }
}

/// An identity `post (eta) = r (e)` between the target expansion `eta` and
/// the base generator `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteIdentity<S> {
    pub r: AbElement<S>,
    pub post: AbElement<S>,
}

/// How the target form's expansion is obtained from the base generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Transport<S> {
    pub identities: Vec<RouteIdentity<S>>,
    /// Extra equations `A (eta) = 0`.
    pub target_annihilators: Vec<AbElement<S>>,
}

impl<S: Scalar> Transport<S> {
    pub fn identity() -> Self {
        Self::single(AbElement::one(), AbElement::one())
    }

    pub fn single(r: AbElement<S>, post: AbElement<S>) -> Self {
        Transport { identities: vec![RouteIdentity { r, post }], target_annihilators: Vec::new() }
    }

    pub fn max_degree(&self) -> usize {
        self.identities
            .iter()
            .flat_map(|i| [&i.r, &i.post])
            .chain(&self.target_annihilators)
            .filter_map(|x| x.degree())
            .max()
            .unwrap_or(0) as usize
    }

    fn direct(&self) -> Option<&AbElement<S>> {
        match self.identities.as_slice() {
            [only] if only.post == AbElement::one() => Some(&only.r),
            _ => None,
        }
    }
}

/// All solutions `eta` of the route equations; the free parameters of `e`
/// are shared by all identities.
pub fn transport<S: Scalar>(e: &AffineExpansion<S>, route: &Transport<S>) -> Result<AffineExpansion<S>> {
    if let Some(r) = route.direct() {
        return Ok(e.apply_op(r));
    }
    let space = e.space();
    let k = e.directions.len();
    let mut eqs: Vec<Equation<S>> = route
        .identities
        .iter()
        .map(|i| Equation { op: i.post.clone(), rhs: e.apply_op_keeping_parameters(&i.r) })
        .collect();
    let zero = AffineExpansion { particular: LogExpansion::zero(space), directions: vec![LogExpansion::zero(space); k] };
    for ann in &route.target_annihilators {
        eqs.push(Equation { op: ann.clone(), rhs: zero.clone() });
    }
    solve_equations(space, &eqs, true)
}

/// Common kernel of the route operators acting on `eta`: the part of
/// `eta` that no route equation sees.
pub fn route_kernel<S: Scalar>(space: &Space, route: &Transport<S>) -> Vec<LogExpansion<S>> {
    if route.direct().is_some() {
        return Vec::new();
    }
    let ops: Vec<AbElement<S>> = route.identities.iter().map(|i| i.post.clone()).chain(route.target_annihilators.iter().cloned()).collect();
    joint_kernel(&ops, space)
}

/// [`transport`] restricted to solutions without a component along the
/// route kernel, with the kernel basis.
pub fn transport_kernel_free<S: Scalar>(e: &AffineExpansion<S>, route: &Transport<S>) -> Result<(AffineExpansion<S>, Vec<LogExpansion<S>>)> {
    let eta = transport(e, route)?;
    let kernel = route_kernel(e.space(), route);
    Ok((eta.normalized_against(&kernel), kernel))
}

/// Exponent indices whose coefficients are trusted: the last `degree`
/// indices are contaminated by truncation.
pub fn reliable_limit(space: &Space, degree: usize) -> usize {
    space.truncation.saturating_sub(degree.max(1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecondBernstein {
    pub poly: UniPoly<Rational>,
    pub leading_index: usize,
}

fn shifted_linear(space: &Space, m: usize, shift: i64) -> UniPoly<Rational> {
    UniPoly::linear(space.alpha.clone() + int(m as i64) + int(shift))
}

/// `x + alpha + m` for the least exponent index `m` at which the top-log
/// coefficient is forced nonzero.
pub fn second_bernstein<S: Scalar>(eta: &AffineExpansion<S>, limit: usize) -> Result<SecondBernstein> {
    match eta.leading_index(TOP_LOG, limit) {
        Leading::Forced(m) => Ok(SecondBernstein { poly: shifted_linear(eta.space(), m, 0), leading_index: m }),
        Leading::Undetermined(m) => Err(Error::Undetermined(format!("the top-log coefficient at index {m} depends on free parameters"))),
        Leading::Absent => Err(Error::TruncationTooSmall(format!("no top-log term below index {limit}"))),
    }
}

/// Applies `r` to `e`, solves `post (eta) = r e`, and reads the second
/// Bernstein polynomial of the result.
pub fn second_bernstein_of_image<S: Scalar>(r: &AbElement<S>, e: &AffineExpansion<S>, post: &AbElement<S>) -> Result<SecondBernstein> {
    let route = Transport::single(r.clone(), post.clone());
    let eta = transport(e, &route)?;
    second_bernstein(&eta, reliable_limit(e.space(), route.max_degree()))
}

/// First Bernstein polynomial of the theme generated by `eta`.
#[derive(Clone, Debug, PartialEq)]
pub enum FirstBernstein {
    Determined { poly: UniPoly<Rational>, s1_index: usize },
    /// The least index of `S_1` depends on free parameters; `s1_index` is
    /// the first index where it may start.
    Undetermined { s1_index: usize },
}

impl FirstBernstein {
    pub fn poly(&self) -> Option<&UniPoly<Rational>> {
        match self {
            FirstBernstein::Determined { poly, .. } => Some(poly),
            FirstBernstein::Undetermined { .. } => None,
        }
    }
}

/// Normalizes the top-log series of `eta` to a single power: returns
/// `W eta` with `W` a unit of `C[[b]]`, so that the top-log part is exactly
/// `s^(alpha+m-1) (Log s)^2`, together with `m`.
fn normalize_top<S: Scalar>(eta: &AffineExpansion<S>, limit: usize) -> Result<(AffineExpansion<S>, usize)> {
    let space = eta.space().clone();
    let m2 = match eta.leading_index(TOP_LOG, limit) {
        Leading::Forced(m) => m,
        Leading::Undetermined(m) => return Err(Error::Undetermined(format!("top-log leading index {m} depends on free parameters"))),
        Leading::Absent => return Err(Error::TruncationTooSmall("no top-log term".into())),
    };
    let Coefficient::Forced(lead) = eta.coeff(m2, TOP_LOG, 0) else {
        unreachable!("leading coefficient is forced")
    };
    let base = eta.scale(&lead.inv()?);
    let mut zeta = base.clone();
    let mut b_pow = base.clone();
    let mut rho = S::one();
    for k in 1..limit.saturating_sub(m2) {
        b_pow = b_pow.apply_op(&AbElement::b());
        rho = rho * S::from_rational(&(space.exponent(m2) + int(k as i64)).recip());
        let c = match zeta.coeff(m2 + k, TOP_LOG, 0) {
            Coefficient::Forced(c) => c,
            Coefficient::Free => return Err(Error::Undetermined(format!("top-log coefficient at index {} is free", m2 + k))),
        };
        if !c.is_zero() {
            let f = c.checked_div(&rho)?;
            zeta = AffineExpansion {
                particular: zeta.particular.sub(&b_pow.particular.scale(&f)),
                directions: zeta.directions.clone(),
            };
        }
    }
    Ok((zeta, m2))
}

/// Generator of `S_1 = (A eta) ∩ (log degree <= 1)`: `(a - (alpha+m) b) W eta`.
pub fn s1_generator<S: Scalar>(eta: &AffineExpansion<S>, limit: usize) -> Result<AffineExpansion<S>> {
    let (zeta, m2) = normalize_top(eta, limit)?;
    let lam = S::from_rational(&(eta.space().alpha.clone() + int(m2 as i64)));
    Ok(zeta.apply_op(&AbElement::linear_factor(&lam)))
}

/// `B^1 = x + alpha + m - 1` where `m` is the least exponent index of `S_1`.
pub fn first_bernstein<S: Scalar>(eta: &AffineExpansion<S>, limit: usize) -> Result<FirstBernstein> {
    let g = s1_generator(eta, limit)?;
    match g.leading_index(1, limit) {
        Leading::Forced(m) => Ok(FirstBernstein::Determined { poly: shifted_linear(eta.space(), m, -1), s1_index: m }),
        Leading::Undetermined(m) => Ok(FirstBernstein::Undetermined { s1_index: m }),
        Leading::Absent => Err(Error::TruncationTooSmall("S_1 has no term below the reliable limit".into())),
    }
}

/// Least exponent index of `S_1` computed from the span of a fixed
/// expansion; used as a cross-check of [`s1_generator`].
pub fn s1_index_from_span<S: Scalar>(eta: &LogExpansion<S>, degree_cap: u32, limit: usize) -> Option<usize> {
    let span = span_submodule(eta, degree_cap);
    let s1 = log_filtration_intersect(&span, 1);
    s1.basis.iter().filter_map(|b| b.leading_index(1)).filter(|&m| m < limit).min()
}

#[derive(Clone, Debug, PartialEq)]
pub enum FullBernstein {
    Determined(UniPoly<Rational>),
    Candidates(Vec<UniPoly<Rational>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThemeProfile {
    pub rank: usize,
    pub nilpotent_order: usize,
    pub alpha: Rational,
    pub second: SecondBernstein,
    pub first: FirstBernstein,
    /// `B^1` of the solution without component along the route kernel,
    /// when that kernel is nontrivial below the reliable limit.
    pub kernel_free_first: Option<FirstBernstein>,
    pub full: FullBernstein,
    pub caveats: Vec<String>,
}

impl ThemeProfile {
    /// Candidate first Bernstein polynomials: the determined one, or the
    /// cofactors of the second one in the full candidates.
    pub fn first_candidates(&self) -> Vec<UniPoly<Rational>> {
        if let Some(p) = self.first.poly() {
            return vec![p.clone()];
        }
        match &self.full {
            FullBernstein::Determined(b) => b.div_rem(&self.second.poly).map(|(q, _)| vec![q]).unwrap_or_default(),
            FullBernstein::Candidates(cs) => cs.iter().filter_map(|b| b.div_rem(&self.second.poly).ok().map(|(q, _)| q)).collect(),
        }
    }
}

fn root_index(p: &UniPoly<Rational>, alpha: &Rational) -> Option<Rational> {
    if p.degree() != Some(1) {
        return None;
    }
    let root = -p.coeff(0) / p.coeff(1);
    Some(-root - alpha.clone())
}

/// Assembles the profile. `bound` is the divisibility bound for the full
/// Bernstein polynomial; it yields the candidates when `B^1` is not
/// determined.
pub fn theme_profile<S: Scalar>(eta: &AffineExpansion<S>, limit: usize, bound: &UniPoly<Rational>, rank: usize) -> Result<ThemeProfile> {
    let space = eta.space();
    let second = second_bernstein(eta, limit)?;
    let first = first_bernstein(eta, limit)?;
    let mut caveats = Vec::new();
    if space.truncation < limit + 2 {
        caveats.push(format!("coefficients at indices >= {limit} were not read"));
    }
    if let (FirstBernstein::Determined { s1_index, .. }, true) = (&first, eta.directions.is_empty()) {
        if let Some(m) = s1_index_from_span(&eta.particular, 4, limit) {
            if m != *s1_index {
                caveats.push(format!("span cross-check gives S_1 index {m}, generator gives {s1_index}"));
            }
        }
    }
    let full = match first.poly() {
        Some(b1) => FullBernstein::Determined(b1.clone() * second.poly.clone()),
        None => {
            let m2 = int(second.leading_index as i64);
            let (rest, rem) = bound.div_rem(&second.poly)?;
            if !rem.is_zero() {
                return Err(Error::HypothesisFailure(format!(
                    "second Bernstein polynomial {} does not divide the bound {}",
                    second.poly.render_factored(),
                    bound.render_factored()
                )));
            }
            let mut cands = Vec::new();
            if let Some((roots, _)) = rest.rational_roots() {
                for (r, _) in roots {
                    let lin = UniPoly::linear(-r);
                    let ok = root_index(&lin, &space.alpha).is_some_and(|m| m >= Rational::zero() && m <= m2 && m.is_integer());
                    let cand = lin * second.poly.clone();
                    if ok && !cands.contains(&cand) {
                        cands.push(cand);
                    }
                }
            }
            cands.sort_by_key(|p| p.coeffs().to_vec());
            caveats.push("first Bernstein polynomial depends on free parameters".into());
            FullBernstein::Candidates(cands)
        }
    };
    Ok(ThemeProfile { rank, nilpotent_order: TOP_LOG, alpha: space.alpha.clone(), second, first, kernel_free_first: None, full, caveats })
}

/// Everything computed for one target form.
#[derive(Clone, Debug, PartialEq)]
pub struct ThemeAnalysis<S> {
    pub eta: AffineExpansion<S>,
    /// Route-kernel elements with leading index below `limit`.
    pub route_kernel: Vec<LogExpansion<S>>,
    pub limit: usize,
    pub profile: ThemeProfile,
}

/// Transports `e` along `route` and assembles the profile.
pub fn analyze_theme<S: Scalar>(e: &AffineExpansion<S>, route: &Transport<S>, bound: &UniPoly<Rational>, rank: usize) -> Result<ThemeAnalysis<S>> {
    let space = e.space();
    let limit = reliable_limit(space, route.max_degree().max(4));
    let eta = transport(e, route)?;
    let mut profile = theme_profile(&eta, limit, bound, rank)?;
    let kernel: Vec<LogExpansion<S>> = route_kernel(space, route)
        .into_iter()
        .filter(|k| k.terms().next().is_some_and(|(t, _)| t.m < limit))
        .collect();
    if !kernel.is_empty() {
        let free = eta.normalized_against(&kernel);
        let kf = first_bernstein(&free, limit)?;
        let listing = kernel.iter().map(|k| k.render()).collect::<Vec<_>>().join(", ");
        profile.caveats.push(format!("the route equations do not see {listing}; its coefficient is a free parameter"));
        if let Some(p) = kf.poly() {
            profile.caveats.push(format!(
                "without that component the first Bernstein polynomial would be {}",
                p.render_factored()
            ));
        }
        profile.kernel_free_first = Some(kf);
    }
    Ok(ThemeAnalysis { eta, route_kernel: kernel, limit, profile })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

/// Each lower Bernstein polynomial must have a root `-alpha - m_j` with
/// `0 <= m_j <= m`, where `-alpha - m` is the root of the top one. When
/// `B^1` is not determined, every candidate is checked.
pub fn lemma_missing_check(profile: &ThemeProfile, alpha: &Rational) -> (Verdict, String) {
    let Some(m) = root_index(&profile.second.poly, alpha) else {
        return (Verdict::Inapplicable, "second Bernstein polynomial is not linear".into());
    };
    let cands = profile.first_candidates();
    if cands.is_empty() {
        return (Verdict::Inapplicable, "no first Bernstein polynomial available".into());
    }
    let mut notes = Vec::new();
    for c in &cands {
        let ok = c.rational_roots().is_some_and(|(roots, rest)| {
            rest.degree() == Some(0)
                && roots.iter().any(|(r, _)| {
                    let mj = -r.clone() - alpha.clone();
                    mj.is_integer() && mj >= Rational::zero() && mj <= m
                })
        });
        notes.push(format!("{}: {}", c.render_factored(), if ok { "ok" } else { "violates" }));
        if !ok {
            return (Verdict::Fail, notes.join("; "));
        }
    }
    (Verdict::Pass, format!("m = {m}; {}", notes.join("; ")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleCertificate {
    pub case_name: String,
    pub root: Rational,
    pub pole_order: u32,
    pub statement: String,
}

pub fn pole_certificate(profile: &ThemeProfile, case_name: &str) -> Result<PoleCertificate> {
    let p = &profile.second.poly;
    if p.degree() != Some(1) {
        return Err(Error::UndeterminedSecondBernstein);
    }
    let root = -p.coeff(0) / p.coeff(1);
    let statement = format!(
        "The second Bernstein polynomial of the fresco of {case_name} is {}. For some integer h and some germ omega', \
         the meromorphic extension of F_h^(omega,omega') has a double pole at {root}.",
        p.render_factored()
    );
    Ok(PoleCertificate { case_name: case_name.to_string(), root, pole_order: 2, statement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ab_rational;
    use crate::scalar::rat;

    type E = AbElement<Rational>;

    fn op(text: &str) -> E {
        parse_ab_rational(text).unwrap()
    }

    fn p3() -> E {
        op("(a-3b)(a-2b)(a-b)")
    }

    fn p4() -> E {
        op("(a-13/4b)(a-5/2b)(a-7/4b)a")
    }

    #[test]
    fn hypotheses_hold_for_the_example() {
        let h = verify_gen_theme_hypotheses(&p3(), &p4(), &int(256));
        assert!(h.all_hold(), "{:?}", h.failures());
        assert_eq!(h.nu, Some(int(3)));
    }

    #[test]
    fn hypotheses_fail_when_q_vanishes_at_minus_two() {
        let q = op("(a-5b)(a-b)(a-b)a");
        assert_eq!(q.bernstein_poly().unwrap().eval(&int(-2)), int(0));
        let h = verify_gen_theme_hypotheses(&p3(), &q, &int(1));
        assert!(h.failures().iter().any(|c| c.name.contains("B_Q(-2)")));
    }

    #[test]
    fn generator_of_the_example() {
        let a = p3() + p4().scale(&int(256));
        let e = recover_generator(&a, &Space::theta(12)).unwrap();
        let g = generator_report(&e, &p3(), &p4(), &int(256));
        assert!(g.shape_holds());
        assert_eq!(g.v, Coefficient::Forced(int(-24)));
        assert_eq!(g.w, Coefficient::Forced(int(2520)));
        assert_eq!(g.compensation, Some(int(0)));
    }

    #[test]
    fn generator_needs_a_top_log_kernel_element() {
        let e = recover_generator(&op("a-b"), &Space::theta(8));
        assert!(matches!(e, Err(Error::HypothesisFailure(_)) | Err(Error::EmptyKernel)));
    }

    #[test]
    fn direct_profile_of_the_base() {
        let a = p3() + p4().scale(&int(256));
        let e = recover_generator(&a, &Space::theta(12)).unwrap();
        let bound = UniPoly::from_shifts(&[int(1), int(1), int(1)]);
        let t = analyze_theme(&e, &Transport::identity(), &bound, 2).unwrap();
        assert_eq!(t.profile.second.poly, UniPoly::linear(int(1)));
        assert_eq!(t.profile.first.poly(), Some(&UniPoly::linear(int(1))));
        assert_eq!(t.profile.full, FullBernstein::Determined(UniPoly::from_shifts(&[int(1), int(1)])));
        let (v, _) = lemma_missing_check(&t.profile, &t.profile.alpha);
        assert_eq!(v, Verdict::Pass);
        let c = pole_certificate(&t.profile, "base").unwrap();
        assert_eq!(c.root, int(-1));
        assert_eq!(c.pole_order, 2);
    }

    #[test]
    fn second_bernstein_of_a_simple_image() {
        let a = p3() + p4().scale(&int(256));
        let e = recover_generator(&a, &Space::theta(12)).unwrap();
        let b = second_bernstein_of_image(&op("-(a-b)"), &e, &E::one()).unwrap();
        assert_eq!(b.poly, UniPoly::linear(int(3)));
        assert_eq!(b.leading_index, 2);
    }

    #[test]
    fn lemma_check_detects_a_violation() {
        let profile = ThemeProfile {
            rank: 2,
            nilpotent_order: 2,
            alpha: int(1),
            second: SecondBernstein { poly: UniPoly::linear(int(2)), leading_index: 1 },
            first: FirstBernstein::Determined { poly: UniPoly::linear(int(4)), s1_index: 4 },
            kernel_free_first: None,
            full: FullBernstein::Determined(UniPoly::from_shifts(&[int(2), int(4)])),
            caveats: Vec::new(),
        };
        assert_eq!(lemma_missing_check(&profile, &int(1)).0, Verdict::Fail);
    }

    #[test]
    fn certificate_needs_a_linear_second_polynomial() {
        let mut profile = ThemeProfile {
            rank: 2,
            nilpotent_order: 2,
            alpha: int(1),
            second: SecondBernstein { poly: UniPoly::linear(rat(3, 2)), leading_index: 0 },
            first: FirstBernstein::Undetermined { s1_index: 0 },
            kernel_free_first: None,
            full: FullBernstein::Candidates(Vec::new()),
            caveats: Vec::new(),
        };
        assert_eq!(pole_certificate(&profile, "x").unwrap().root, rat(-3, 2));
        profile.second.poly = UniPoly::from_shifts(&[int(1), int(2)]);
        assert_eq!(pole_certificate(&profile, "x").unwrap_err(), Error::UndeterminedSecondBernstein);
    }
}
