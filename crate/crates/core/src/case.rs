//! Case files and the end-to-end pipeline: germ, system matrix, chains,
//! annihilator, bounds, generator expansion, theme profile and certificate.
//!
//! Reports serialize through [`serde_json::Value`], whose maps keep keys
//! sorted, so the bytes depend only on the inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ab::AbElement;
use crate::error::{Error, Result};
use crate::euler::{annihilator, bernstein_bound, build_matrix, chain, chain_state, first_step_factors, Generator, MonomialGerm};
use crate::parse::{parse_ab, parse_rational, parse_scalar};
use crate::poly::UniPoly;
use crate::scalar::{ParamScalar, Rational, Scalar};
use crate::theme::{
    analyze_theme, generator_report, lemma_missing_check, pole_certificate, recover_generator, reliable_limit, verify_gen_theme_hypotheses, FirstBernstein,
    FullBernstein, ThemeAnalysis, Transport, TOP_LOG,
};
use crate::xi::{AffineExpansion, Coefficient, Leading, Space};

pub use crate::xi::DEFAULT_TRUNCATION;
pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GeneratorSpec {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AssumedRank {
    pub value: usize,
    #[serde(default)]
    pub note: String,
}

/// `post (eta) = c * chain(baseSeed, baseWord) (e)` where `post` is
/// `chain(seedExponents, postWord)` and `c` the ratio of coefficient
/// products along the two words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RouteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<Vec<u32>>,
    #[serde(default)]
    pub base_word: Vec<usize>,
    #[serde(default)]
    pub post_word: Vec<usize>,
    /// Expected value of `chain(baseSeed, baseWord)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_factor: Option<String>,
    /// Expected value of `chain(seedExponents, postWord)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post_factor: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CaseFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
    pub variables: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    pub seed_exponents: Vec<u32>,
    #[serde(default = "symbolic")]
    pub lambda_value: String,
    pub assumed_rank: AssumedRank,
    #[serde(default)]
    pub route: RouteSpec,
    /// Copied into the report's caveats.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
}

fn symbolic() -> String {
    "symbolic".into()
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

impl CaseFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidCase(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidCase(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `None` for a symbolic parameter.
    pub fn lambda(&self) -> Result<Option<Rational>> {
        let text = self.lambda_value.trim();
        if text == "symbolic" {
            return Ok(None);
        }
        let v = parse_rational(text).map_err(|e| Error::InvalidCase(format!("lambdaValue: {e}")))?;
        if v == Rational::from_integer(0.into()) {
            return Err(Error::InvalidCase("lambdaValue 0 is not allowed".into()));
        }
        Ok(Some(v))
    }

    pub fn base_seed(&self) -> Vec<u32> {
        self.route.base_seed.clone().unwrap_or_else(|| vec![0; self.variables.len()])
    }

    pub fn germ(&self) -> Result<MonomialGerm<ParamScalar>> {
        if self.variables.is_empty() {
            return Err(Error::InvalidCase("no variables".into()));
        }
        let lambda = self.lambda()?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (j, g) in self.generators.iter().enumerate() {
            let mut c = parse_scalar(&g.coeff).map_err(|e| Error::InvalidCase(format!("generator {} coefficient: {e}", j + 1)))?;
            if let Some(t) = &lambda {
                c = ParamScalar::constant(c.eval_at(t)?);
            }
            gens.push(Generator { coeff: c, exponents: g.exponents.clone() });
        }
        let germ = MonomialGerm::new(self.variables.len() - 1, gens)?;
        germ.word_exponents(&self.seed_exponents, &[])?;
        germ.word_exponents(&self.base_seed(), &[])?;
        Ok(germ)
    }

    fn validate(&self) -> Result<MonomialGerm<ParamScalar>> {
        if self.truncation < 6 {
            return Err(Error::InvalidCase(format!("truncation {} is below the minimum 6", self.truncation)));
        }
        let germ = self.germ()?;
        let via_base = germ.word_exponents(&self.base_seed(), &self.route.base_word)?;
        let via_post = germ.word_exponents(&self.seed_exponents, &self.route.post_word)?;
        if via_base != via_post {
            return Err(Error::InvalidCase(format!(
                "route words reach different monomials: {via_base:?} from the base, {via_post:?} from the seed"
            )));
        }
        for text in [&self.route.base_factor, &self.route.post_factor].into_iter().flatten() {
            parse_ab(text)?;
        }
        Ok(germ)
    }
}

/// Overrides from the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub truncation: Option<usize>,
    pub lambda: Option<String>,
}

impl RunOptions {
    pub fn apply(&self, case: &CaseFile) -> CaseFile {
        let mut c = case.clone();
        if let Some(n) = self.truncation {
            c.truncation = n;
        }
        if let Some(l) = &self.lambda {
            c.lambda_value = l.clone();
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PolyText {
    pub factored: String,
    pub expanded: String,
}

impl PolyText {
    pub fn of(p: &UniPoly<Rational>) -> Self {
        PolyText { factored: p.render_factored(), expanded: p.render("x") }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MatrixSection {
    pub m: Vec<Vec<String>>,
    pub inverse: Vec<Vec<String>>,
    pub determinant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepSection {
    pub word: Vec<usize>,
    pub exponents: Vec<u32>,
    pub operator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationSection {
    pub u: Vec<String>,
    pub plus_word: Vec<usize>,
    pub minus_word: Vec<usize>,
    pub kappa: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnihilatorSection {
    pub main: String,
    pub homogeneous_parts: Vec<String>,
    pub permutation_differences: Vec<String>,
    pub relation: RelationSection,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundSection {
    pub bound: PolyText,
    pub rule: crate::euler::BoundRule,
    pub lowest_part: PolyText,
    pub right_factors: Option<PolyText>,
    pub first_step_factors: Vec<String>,
    pub first_factor_roots: Vec<String>,
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckSection {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratorSection {
    pub base_seed: Vec<u32>,
    pub p: String,
    pub q: String,
    pub c: String,
    pub nu: Option<String>,
    pub hypotheses: Vec<CheckSection>,
    pub u: String,
    pub v: String,
    pub w: String,
    pub compensation: Option<String>,
    pub shape_holds: bool,
    pub free_parameters: usize,
    pub expansion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TermSection {
    pub exponent: String,
    pub log: usize,
    pub coeff: String,
}

/// The base generator under the route operator, before solving for the
/// target expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ImageSection {
    pub top_log_leading_exponent: Option<String>,
    pub top_log_leading_coeff: Option<String>,
    /// Forced nonzero terms below the reliable limit.
    pub forced_terms: Vec<TermSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RouteSection {
    pub r: String,
    pub post: String,
    pub target_annihilators: usize,
    pub image: ImageSection,
    pub kernel: Vec<String>,
    pub reliable_limit: usize,
    pub expansion: String,
    pub free_parameters: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaSection {
    pub verdict: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThemeSection {
    pub rank: usize,
    pub rank_note: String,
    pub nilpotent_order: usize,
    pub alpha: String,
    pub second: PolyText,
    pub second_leading_index: usize,
    pub first: Option<PolyText>,
    pub first_s1_index: usize,
    pub kernel_free_first: Option<PolyText>,
    pub full_determined: bool,
    pub full: Vec<PolyText>,
    pub lemma_missing: LemmaSection,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateSection {
    pub root: String,
    pub pole_order: u32,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorSection {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseReport {
    pub input: CaseFile,
    pub matrix: Option<MatrixSection>,
    pub steps: Vec<StepSection>,
    pub annihilator: Option<AnnihilatorSection>,
    pub bounds: Option<BoundSection>,
    pub generator: Option<GeneratorSection>,
    pub route: Option<RouteSection>,
    pub theme: Option<ThemeSection>,
    pub certificate: Option<CertificateSection>,
    pub caveats: Vec<String>,
    pub error: Option<ErrorSection>,
    pub versions: BTreeMap<String, String>,
}

impl CaseReport {
    fn new(input: CaseFile) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("fresco-core".to_string(), env!("CARGO_PKG_VERSION").to_string());
        versions.insert("report-format".to_string(), REPORT_FORMAT.to_string());
        CaseReport {
            input,
            matrix: None,
            steps: Vec::new(),
            annihilator: None,
            bounds: None,
            generator: None,
            route: None,
            theme: None,
            certificate: None,
            caveats: Vec::new(),
            error: None,
            versions,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        render_text(self)
    }
}

fn matrix_text(m: &crate::linalg::Matrix<Rational>) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn coefficient_text<S: Scalar>(c: &Coefficient<S>) -> String {
    match c {
        Coefficient::Forced(v) => v.to_string(),
        Coefficient::Free => "free".into(),
    }
}

fn affine_text<S: Scalar>(e: &AffineExpansion<S>) -> String {
    let mut out = e.particular.render();
    for (k, d) in e.directions.iter().enumerate() {
        let _ = write!(out, " + t{}*({})", k + 1, d.render());
    }
    out
}

fn image_section<S: Scalar>(image: &AffineExpansion<S>, limit: usize) -> ImageSection {
    let space = image.space().clone();
    let (exp, coeff) = match image.leading_index(TOP_LOG, limit) {
        Leading::Forced(m) => (Some(space.exponent(m).to_string()), Some(coefficient_text(&image.coeff(m, TOP_LOG, 0)))),
        _ => (None, None),
    };
    let mut forced_terms = Vec::new();
    for m in 0..limit {
        for j in (space.min_log()..=space.log_bound).rev() {
            if let c @ Coefficient::Forced(_) = image.coeff(m, j, 0) {
                if c.is_forced_nonzero() {
                    forced_terms.push(TermSection { exponent: space.exponent(m).to_string(), log: j, coeff: coefficient_text(&c) });
                }
            }
        }
    }
    ImageSection { top_log_leading_exponent: exp, top_log_leading_coeff: coeff, forced_terms }
}

fn factor_check(label: &str, expected: &Option<String>, computed: &AbElement<ParamScalar>) -> Result<()> {
    if let Some(text) = expected {
        let e = parse_ab(text)?;
        if &e != computed {
            return Err(Error::HypothesisFailure(format!("{label} is {computed}, the case file expects {text}")));
        }
    }
    Ok(())
}

/// Splits an annihilator `k_P P + k_Q Q` into monic `P`, monic `Q` and
/// `c = k_Q / k_P`.
pub fn split_annihilator<S: Scalar>(main: &AbElement<S>) -> Result<(AbElement<S>, AbElement<S>, S)> {
    let parts = main.homogeneous_parts();
    let [low, high] = parts.as_slice() else {
        return Err(Error::HypothesisFailure(format!("annihilator has {} homogeneous parts, expected 2", parts.len())));
    };
    let (kp, p) = low.monic_normalized()?;
    let (kq, q) = high.monic_normalized()?;
    Ok((p, q, kq.checked_div(&kp)?))
}

/// Route operators for a validated case: `r` scaled by the coefficient
/// ratio, `post`, and the target's annihilators when the route is not a
/// direct image.
pub fn build_route(case: &CaseFile, germ: &MonomialGerm<ParamScalar>) -> Result<Transport<ParamScalar>> {
    let matrix = build_matrix(germ)?;
    let base = case.base_seed();
    let raw_r = chain(germ, &matrix, &base, &case.route.base_word)?;
    factor_check("the base chain", &case.route.base_factor, &raw_r)?;
    let post = chain(germ, &matrix, &case.seed_exponents, &case.route.post_word)?;
    factor_check("the post chain", &case.route.post_factor, &post)?;
    let ratio = germ.coeff_product(&case.route.post_word)?.checked_div(&germ.coeff_product(&case.route.base_word)?)?;
    let r = raw_r.scale(&ratio);
    if post == AbElement::one() {
        return Ok(Transport::single(r, post));
    }
    let mut route = Transport::single(r, post);
    route.target_annihilators = annihilator(germ, &matrix, &case.seed_exponents)?.all();
    Ok(route)
}

struct Stage<'a> {
    report: &'a mut CaseReport,
}

impl Stage<'_> {
    fn run<T>(&mut self, name: &str, f: impl FnOnce(&mut CaseReport) -> Result<T>) -> Option<T> {
        if self.report.error.is_some() {
            return None;
        }
        match f(self.report) {
            Ok(v) => Some(v),
            Err(e) => {
                self.report.error = Some(ErrorSection { stage: name.to_string(), message: e.to_string() });
                None
            }
        }
    }
}

/// The typed results behind a report.
pub struct CaseOutcome {
    pub report: CaseReport,
    pub analysis: Option<ThemeAnalysis<ParamScalar>>,
    pub generator: Option<AffineExpansion<ParamScalar>>,
    pub image: Option<AffineExpansion<ParamScalar>>,
}

/// Runs the pipeline. Validation failures are returned as errors; pipeline
/// failures produce a partial report with `error` set.
pub fn run_case(case: &CaseFile, options: &RunOptions) -> Result<CaseOutcome> {
    let case = options.apply(case);
    let germ = case.validate()?;
    let mut report = CaseReport::new(case.clone());
    let seed = case.seed_exponents.clone();
    let base = case.base_seed();
    let space = Space::theta(case.truncation);
    let mut st = Stage { report: &mut report };

    let matrix = st.run("matrix", |rep| {
        let m = build_matrix(&germ)?;
        rep.matrix = Some(MatrixSection { m: matrix_text(&m.m), inverse: matrix_text(&m.minv), determinant: m.m.determinant().to_string() });
        Ok(m)
    });
    let ann = matrix.as_ref().and_then(|matrix| {
        st.run("annihilator", |rep| {
            let ann = annihilator(&germ, matrix, &seed)?;
            for word in [ann.relation.plus_word(), ann.relation.minus_word()] {
                for k in 1..=word.len() {
                    let s = chain_state(&germ, matrix, &seed, &word[..k])?;
                    let step = StepSection { word: s.word.clone(), exponents: s.mu_exponents.clone(), operator: s.op.render() };
                    if !rep.steps.contains(&step) {
                        rep.steps.push(step);
                    }
                }
            }
            rep.annihilator = Some(AnnihilatorSection {
                main: ann.main.render(),
                homogeneous_parts: ann.main.homogeneous_parts().iter().map(|p| p.render()).collect(),
                permutation_differences: ann.permutation_differences.iter().map(|p| p.render()).collect(),
                relation: RelationSection {
                    u: ann.relation.u.iter().map(|x| x.to_string()).collect(),
                    plus_word: ann.relation.plus_word(),
                    minus_word: ann.relation.minus_word(),
                    kappa: ann.relation.kappa.to_string(),
                },
            });
            Ok(ann)
        })
    });
    let bound = ann.as_ref().and_then(|_| {
        let matrix = matrix.as_ref().expect("matrix precedes annihilator");
        st.run("bounds", |rep| {
            let b = bernstein_bound(&germ, matrix, &seed)?;
            let factors = first_step_factors(&germ, matrix, &seed)?;
            rep.bounds = Some(BoundSection {
                bound: PolyText::of(&b.bound),
                rule: b.rule,
                lowest_part: PolyText::of(&b.lowest_part),
                right_factors: b.right_factors.as_ref().map(PolyText::of),
                first_step_factors: factors.iter().map(|f| f.render()).collect(),
                first_factor_roots: b.first_factor_roots.iter().map(|r| r.to_string()).collect(),
                evidence: b.evidence.clone(),
            });
            Ok(b)
        })
    });
    let generator = bound.as_ref().and_then(|_| {
        let matrix = matrix.as_ref().expect("matrix precedes bounds");
        st.run("generator", |rep| {
            let base_ann = annihilator(&germ, matrix, &base)?;
            let (p, q, c) = split_annihilator(&base_ann.main)?;
            let hyp = verify_gen_theme_hypotheses(&p, &q, &c);
            let hypotheses = hyp.checks.iter().map(|c| CheckSection { name: c.name.clone(), holds: c.holds, detail: c.detail.clone() }).collect();
            if !hyp.all_hold() {
                let names: Vec<_> = hyp.failures().iter().map(|c| c.name.clone()).collect();
                rep.generator = Some(GeneratorSection {
                    base_seed: base.clone(),
                    p: p.render(),
                    q: q.render(),
                    c: c.to_string(),
                    nu: hyp.nu.as_ref().map(|n| n.to_string()),
                    hypotheses,
                    u: String::new(),
                    v: String::new(),
                    w: String::new(),
                    compensation: None,
                    shape_holds: false,
                    free_parameters: 0,
                    expansion: String::new(),
                });
                return Err(Error::HypothesisFailure(names.join(", ")));
            }
            let e = recover_generator(&base_ann.main, &space)?;
            let g = generator_report(&e, &p, &q, &c);
            rep.generator = Some(GeneratorSection {
                base_seed: base.clone(),
                p: p.render(),
                q: q.render(),
                c: c.to_string(),
                nu: hyp.nu.as_ref().map(|n| n.to_string()),
                hypotheses,
                u: coefficient_text(&g.u),
                v: coefficient_text(&g.v),
                w: coefficient_text(&g.w),
                compensation: g.compensation.as_ref().map(|x| x.to_string()),
                shape_holds: g.shape_holds(),
                free_parameters: e.free_count(),
                expansion: affine_text(&e),
            });
            Ok(e)
        })
    });
    let analysis = generator.as_ref().and_then(|e| {
        let bound = bound.as_ref().expect("bounds precede the generator");
        st.run("theme", |rep| {
            let route = build_route(&case, &germ)?;
            let analysis = analyze_theme(e, &route, &bound.bound, case.assumed_rank.value)?;
            let r = &route.identities[0].r;
            let image = e.apply_op(r);
            let limit = reliable_limit(&space, route.max_degree().max(4));
            rep.route = Some(RouteSection {
                r: r.render(),
                post: route.identities[0].post.render(),
                target_annihilators: route.target_annihilators.len(),
                image: image_section(&image, limit),
                kernel: analysis.route_kernel.iter().map(|k| k.render()).collect(),
                reliable_limit: analysis.limit,
                expansion: affine_text(&analysis.eta),
                free_parameters: analysis.eta.free_count(),
            });
            let p = &analysis.profile;
            let (verdict, detail) = lemma_missing_check(p, &p.alpha);
            let (first, first_s1_index) = match &p.first {
                FirstBernstein::Determined { poly, s1_index } => (Some(PolyText::of(poly)), *s1_index),
                FirstBernstein::Undetermined { s1_index } => (None, *s1_index),
            };
            let (full_determined, full) = match &p.full {
                FullBernstein::Determined(b) => (true, vec![PolyText::of(b)]),
                FullBernstein::Candidates(cs) => (false, cs.iter().map(PolyText::of).collect()),
            };
            rep.theme = Some(ThemeSection {
                rank: p.rank,
                rank_note: case.assumed_rank.note.clone(),
                nilpotent_order: p.nilpotent_order,
                alpha: p.alpha.to_string(),
                second: PolyText::of(&p.second.poly),
                second_leading_index: p.second.leading_index,
                first,
                first_s1_index,
                kernel_free_first: p.kernel_free_first.as_ref().and_then(|k| k.poly()).map(PolyText::of),
                full_determined,
                full,
                lemma_missing: LemmaSection { verdict: verdict.to_string(), detail },
            });
            rep.caveats.extend(p.caveats.iter().cloned());
            Ok((analysis, image))
        })
    });
    if let Some((analysis, _)) = &analysis {
        st.run("certificate", |rep| {
            let c = pole_certificate(&analysis.profile, &case.name)?;
            rep.certificate = Some(CertificateSection { root: c.root.to_string(), pole_order: c.pole_order, statement: c.statement });
            Ok(())
        });
    }
    if let Some((analysis, _)) = &analysis {
        let _ = st.run("stability", |rep| {
            let wider = RunOptions { truncation: Some(case.truncation + 2), lambda: None };
            if let Some(msg) = stability_difference(&case, &wider, &analysis.profile)? {
                rep.caveats.push(msg);
            }
            Ok(())
        });
    }
    report.caveats.extend(case.notes.iter().cloned());
    let (analysis, image) = analysis.map_or((None, None), |(a, i)| (Some(a), Some(i)));
    Ok(CaseOutcome { report, analysis, generator, image })
}

fn stability_difference(case: &CaseFile, wider: &RunOptions, profile: &crate::theme::ThemeProfile) -> Result<Option<String>> {
    let wide_case = wider.apply(case);
    let germ = wide_case.germ()?;
    let matrix = build_matrix(&germ)?;
    let space = Space::theta(wide_case.truncation);
    let base_ann = annihilator(&germ, &matrix, &wide_case.base_seed())?;
    let e = recover_generator(&base_ann.main, &space)?;
    let bound = bernstein_bound(&germ, &matrix, &wide_case.seed_exponents)?;
    let route = build_route(&wide_case, &germ)?;
    let wide = analyze_theme(&e, &route, &bound.bound, wide_case.assumed_rank.value)?.profile;
    if wide.second != profile.second || wide.first != profile.first || wide.full != profile.full {
        return Ok(Some(format!("results change at truncation {}", wide_case.truncation)));
    }
    Ok(None)
}

/// Loads and runs a case file.
pub fn analyze_file(path: &Path, options: &RunOptions) -> Result<CaseReport> {
    let case = CaseFile::load(path)?;
    Ok(run_case(&case, options)?.report)
}

fn render_text(r: &CaseReport) -> String {
    let mut s = String::new();
    let inp = &r.input;
    let _ = writeln!(s, "case {}", inp.name);
    if !inp.description.is_empty() {
        let _ = writeln!(s, "  {}", inp.description);
    }
    let _ = writeln!(s, "seed exponents {:?}, lambda {}, truncation {}", inp.seed_exponents, inp.lambda_value, inp.truncation);
    if let Some(m) = &r.matrix {
        let _ = writeln!(s, "\nmatrix M (det {})", m.determinant);
        for row in &m.m {
            let _ = writeln!(s, "  [{}]", row.join(", "));
        }
    }
    if !r.steps.is_empty() {
        let _ = writeln!(s, "\nchains");
        for st in &r.steps {
            let w: Vec<String> = st.word.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "  ({}) -> {}", w.join(","), st.operator);
        }
    }
    if let Some(a) = &r.annihilator {
        let _ = writeln!(s, "\nrelation u = ({}), kappa = {}", a.relation.u.join(", "), a.relation.kappa);
        let _ = writeln!(s, "annihilator {}", a.main);
        for d in &a.permutation_differences {
            let _ = writeln!(s, "  also {d}");
        }
    }
    if let Some(b) = &r.bounds {
        let _ = writeln!(s, "\nfirst-step factors {}", b.first_step_factors.join(", "));
        let _ = writeln!(s, "bound {} ({})", b.bound.factored, serde_json::to_value(b.rule).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
        let _ = writeln!(s, "  lowest part {}", b.lowest_part.factored);
        if let Some(rf) = &b.right_factors {
            let _ = writeln!(s, "  right factors {}", rf.factored);
        }
    }
    if let Some(g) = &r.generator {
        let _ = writeln!(s, "\nP = {}", g.p);
        let _ = writeln!(s, "Q = {}", g.q);
        let _ = writeln!(s, "c = {}", g.c);
        for h in &g.hypotheses {
            let _ = writeln!(s, "  [{}] {}", if h.holds { "ok" } else { "no" }, h.name);
        }
        let _ = writeln!(s, "u = {}, v = {}, w = {}", g.u, g.v, g.w);
    }
    if let Some(rt) = &r.route {
        let _ = writeln!(s, "\nroute {} = ({}) e", rt.post, rt.r);
        if let (Some(e), Some(c)) = (&rt.image.top_log_leading_exponent, &rt.image.top_log_leading_coeff) {
            let _ = writeln!(s, "  image leads with {c}*s^{e}*Log^2");
        }
    }
    if let Some(t) = &r.theme {
        let _ = writeln!(s, "\nB^2 = {}", t.second.factored);
        match &t.first {
            Some(f) => {
                let _ = writeln!(s, "B^1 = {}", f.factored);
            }
            None => {
                let _ = writeln!(s, "B^1 undetermined");
            }
        }
        let full: Vec<&str> = t.full.iter().map(|p| p.factored.as_str()).collect();
        if t.full_determined {
            let _ = writeln!(s, "B = {}", full.join(""));
        } else {
            let _ = writeln!(s, "B in {{{}}}", full.join(", "));
        }
        let _ = writeln!(s, "lemma check: {} ({})", t.lemma_missing.verdict, t.lemma_missing.detail);
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(s, "\ncertificate: {}", c.statement);
    }
    if !r.caveats.is_empty() {
        let _ = writeln!(s, "\ncaveats");
        for c in &r.caveats {
            let _ = writeln!(s, "  - {c}");
        }
    }
    if let Some(e) = &r.error {
        let _ = writeln!(s, "\nerror in {}: {}", e.stage, e.message);
    }
    s
}
