//! The linear system attached to a germ with `n+2` monomials: monomial
//! multiples of a monomial form are expressed as elements of the
//! `(a,b)`-algebra applied to the class of the form.
//!
//! Generators are numbered from 1, as in words such as `(1,2,3)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::ab::AbElement;
use crate::error::{Error, Result};
use crate::linalg::{primitive_integer_vector, Matrix};
use crate::poly::UniPoly;
use crate::scalar::{int, ParamScalar, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Generator<S> {
    pub coeff: S,
    pub exponents: Vec<u32>,
}

/// `f = sum_j c_j x^(E_j)` with exactly `n+2` terms in `n+1` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialGerm<S> {
    n: usize,
    generators: Vec<Generator<S>>,
}

impl<S: Scalar> MonomialGerm<S> {
    pub fn new(n: usize, generators: Vec<Generator<S>>) -> Result<Self> {
        if generators.len() != n + 2 {
            return Err(Error::InvalidGerm(format!("expected {} generators, got {}", n + 2, generators.len())));
        }
        for (j, g) in generators.iter().enumerate() {
            if g.exponents.len() != n + 1 {
                return Err(Error::InvalidGerm(format!("generator {} has {} exponents, expected {}", j + 1, g.exponents.len(), n + 1)));
            }
            if g.coeff.is_zero() {
                return Err(Error::InvalidGerm(format!("generator {} has a zero coefficient", j + 1)));
            }
            if generators[..j].iter().any(|h| h.exponents == g.exponents) {
                return Err(Error::InvalidGerm(format!("generator {} repeats an exponent vector", j + 1)));
            }
        }
        Ok(MonomialGerm { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variables(&self) -> usize {
        self.n + 1
    }

    pub fn generators(&self) -> &[Generator<S>] {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> Result<&Generator<S>> {
        j.checked_sub(1)
            .and_then(|k| self.generators.get(k))
            .ok_or_else(|| Error::InvalidGerm(format!("no generator numbered {j}")))
    }

    /// Product of the coefficients along a word.
    pub fn coeff_product(&self, word: &[usize]) -> Result<S> {
        word.iter().try_fold(S::one(), |acc, &j| Ok(acc * self.generator(j)?.coeff.clone()))
    }

    /// Exponent vector of `seed * prod_{j in word} x^(E_j)`.
    pub fn word_exponents(&self, seed: &[u32], word: &[usize]) -> Result<Vec<u32>> {
        self.check_seed(seed)?;
        let mut e = seed.to_vec();
        for &j in word {
            for (x, y) in e.iter_mut().zip(&self.generator(j)?.exponents) {
                *x += y;
            }
        }
        Ok(e)
    }

    fn check_seed(&self, seed: &[u32]) -> Result<()> {
        if seed.len() != self.variables() {
            return Err(Error::InvalidGerm(format!("seed has {} exponents, expected {}", seed.len(), self.variables())));
        }
        Ok(())
    }
}

/// `xy^3 + yz^3 + zx^3 + lambda*xyz` with `lambda` symbolic.
pub fn example_germ() -> MonomialGerm<ParamScalar> {
    let one = ParamScalar::one();
    let g = |c: ParamScalar, e: [u32; 3]| Generator { coeff: c, exponents: e.to_vec() };
    MonomialGerm::new(
        2,
        vec![g(one.clone(), [1, 3, 0]), g(one.clone(), [0, 1, 3]), g(one, [3, 0, 1]), g(ParamScalar::lambda(), [1, 1, 1])],
    )
    .expect("well-formed germ")
}

/// Row 0 is all ones; row `i` holds the `i`-th exponent of each generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemMatrix {
    pub m: Matrix<Rational>,
    pub minv: Matrix<Rational>,
}

pub fn build_matrix<S: Scalar>(germ: &MonomialGerm<S>) -> Result<SystemMatrix> {
    let size = germ.n + 2;
    let mut m = Matrix::zeros(size, size);
    for (j, g) in germ.generators.iter().enumerate() {
        m.set(0, j, Rational::one());
        for (i, e) in g.exponents.iter().enumerate() {
            m.set(i + 1, j, int(*e as i64));
        }
    }
    let minv = m.inverse()?;
    Ok(SystemMatrix { m, minv })
}

/// `mu * [omega] = op [omega]`, reached from the seed along `word`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierState<S> {
    pub mu_exponents: Vec<u32>,
    pub op: AbElement<S>,
    pub word: Vec<usize>,
}

impl<S: Scalar> MultiplierState<S> {
    pub fn seed(exponents: &[u32]) -> Self {
        MultiplierState { mu_exponents: exponents.to_vec(), op: AbElement::one(), word: Vec::new() }
    }
}

/// Right-hand side `(a L, (1+mu_1) b L, ..., (1+mu_{n+1}) b L)`.
pub fn right_hand_side<S: Scalar>(state: &MultiplierState<S>) -> Vec<AbElement<S>> {
    let mut r = vec![AbElement::a() * state.op.clone()];
    for e in &state.mu_exponents {
        r.push(AbElement::scalar(S::from_i64(1 + *e as i64)) * AbElement::b() * state.op.clone());
    }
    r
}

/// The `(a,b)`-coefficients `(c_a, c_b)` of a right-hand side entry `c_a a + c_b b`,
/// as a compact description of a step; used when checking against printed systems.
pub fn rhs_pattern(mu_exponents: &[u32]) -> Vec<(i64, i64)> {
    std::iter::once((1, 0)).chain(mu_exponents.iter().map(|e| (0, 1 + *e as i64))).collect()
}

fn combine<S: Scalar>(row: &[Rational], rhs: &[AbElement<S>]) -> AbElement<S> {
    row.iter()
        .zip(rhs)
        .filter(|(c, _)| !c.is_zero())
        .fold(AbElement::zero(), |acc, (c, r)| acc + r.scale(&S::from_rational(c)))
}

/// All `n+2` successors of `state`: successor `j` multiplies by generator `j`.
pub fn step<S: Scalar>(germ: &MonomialGerm<S>, matrix: &SystemMatrix, state: &MultiplierState<S>) -> Vec<MultiplierState<S>> {
    let rhs = right_hand_side(state);
    (1..=germ.n + 2).map(|j| successor(germ, matrix, state, &rhs, j)).collect()
}

fn successor<S: Scalar>(
    germ: &MonomialGerm<S>,
    matrix: &SystemMatrix,
    state: &MultiplierState<S>,
    rhs: &[AbElement<S>],
    j: usize,
) -> MultiplierState<S> {
    let mut mu = state.mu_exponents.clone();
    for (x, y) in mu.iter_mut().zip(&germ.generators[j - 1].exponents) {
        *x += y;
    }
    let mut word = state.word.clone();
    word.push(j);
    MultiplierState { mu_exponents: mu, op: combine(matrix.minv.row(j - 1), rhs), word }
}

/// Checks `M X = rhs` for the operators produced by [`step`].
pub fn resolve_check<S: Scalar>(matrix: &SystemMatrix, state: &MultiplierState<S>, successors: &[MultiplierState<S>]) -> bool {
    let rhs = right_hand_side(state);
    let xs: Vec<AbElement<S>> = successors.iter().map(|s| s.op.clone()).collect();
    (0..rhs.len()).all(|i| combine(matrix.m.row(i), &xs) == rhs[i])
}

/// Operator expressing `seed * prod_{j in word} g_j` applied to the seed form.
pub fn chain<S: Scalar>(germ: &MonomialGerm<S>, matrix: &SystemMatrix, seed: &[u32], word: &[usize]) -> Result<AbElement<S>> {
    Ok(chain_state(germ, matrix, seed, word)?.op)
}

pub fn chain_state<S: Scalar>(germ: &MonomialGerm<S>, matrix: &SystemMatrix, seed: &[u32], word: &[usize]) -> Result<MultiplierState<S>> {
    germ.check_seed(seed)?;
    let mut state = MultiplierState::seed(seed);
    for &j in word {
        germ.generator(j)?;
        let rhs = right_hand_side(&state);
        state = successor(germ, matrix, &state, &rhs, j);
    }
    Ok(state)
}

/// Degree-1 operators `L_(g_j * seed)` for every generator.
pub fn first_step_factors<S: Scalar>(germ: &MonomialGerm<S>, matrix: &SystemMatrix, seed: &[u32]) -> Result<Vec<AbElement<S>>> {
    germ.check_seed(seed)?;
    Ok(step(germ, matrix, &MultiplierState::seed(seed)).into_iter().map(|s| s.op).collect())
}

/// `g^(u+) = kappa * g^(u-)` as monomial functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationData<S> {
    pub u: Vec<BigInt>,
    pub u_plus: Vec<u32>,
    pub u_minus: Vec<u32>,
    pub kappa: S,
}

impl<S> RelationData<S> {
    pub fn plus_word(&self) -> Vec<usize> {
        word_of(&self.u_plus)
    }

    pub fn minus_word(&self) -> Vec<usize> {
        word_of(&self.u_minus)
    }
}

/// Generator `j` repeated `v_j` times, ascending.
pub fn word_of(v: &[u32]) -> Vec<usize> {
    v.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(j + 1, k as usize)).collect()
}

/// Primitive integer relations among the exponent vectors, one per kernel
/// basis vector. Relations with an empty side are discarded.
pub fn find_relations<S: Scalar>(germ: &MonomialGerm<S>) -> Result<Vec<RelationData<S>>> {
    let rows: Vec<Vec<Rational>> = (0..germ.variables())
        .map(|i| germ.generators.iter().map(|g| int(g.exponents[i] as i64)).collect())
        .collect();
    let kernel = Matrix::from_rows(rows).nullspace();
    if kernel.is_empty() {
        return Err(Error::NoRelation);
    }
    let rels: Vec<RelationData<S>> = kernel
        .iter()
        .map(|v| relation_from(germ, primitive_integer_vector(v)))
        .collect::<Result<_>>()?;
    let proper: Vec<RelationData<S>> = rels.into_iter().filter(|r| r.u_plus.iter().any(|&x| x > 0)).collect();
    if proper.is_empty() {
        return Err(Error::NoRelation);
    }
    Ok(proper)
}

pub fn find_relation<S: Scalar>(germ: &MonomialGerm<S>) -> Result<RelationData<S>> {
    Ok(find_relations(germ)?.remove(0))
}

fn relation_from<S: Scalar>(germ: &MonomialGerm<S>, mut u: Vec<BigInt>) -> Result<RelationData<S>> {
    let plus: BigInt = u.iter().filter(|x| x.is_positive()).sum();
    let minus: BigInt = u.iter().filter(|x| x.is_negative()).map(|x| -x).sum();
    let first_negative = u.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if minus < plus || (minus == plus && first_negative) {
        u = u.into_iter().map(|x| -x).collect();
    }
    let to_u32 = |x: &BigInt| -> Result<u32> { u32::try_from(x).map_err(|_| Error::InvalidGerm("relation exponent too large".into())) };
    let u_plus = u.iter().map(|x| if x.is_positive() { to_u32(x) } else { Ok(0) }).collect::<Result<Vec<_>>>()?;
    let u_minus = u.iter().map(|x| if x.is_negative() { to_u32(&-x) } else { Ok(0) }).collect::<Result<Vec<_>>>()?;
    let num = germ.coeff_product(&word_of(&u_plus))?;
    let den = germ.coeff_product(&word_of(&u_minus))?;
    Ok(RelationData { kappa: num.checked_div(&den)?, u, u_plus, u_minus })
}

/// Distinct orderings of a word, in lexicographic order.
pub fn permutations(word: &[usize]) -> Vec<Vec<usize>> {
    let mut w = word.to_vec();
    w.sort_unstable();
    let mut out = vec![w.clone()];
    loop {
        let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
            return out;
        };
        let k = (i..w.len()).rev().find(|&k| w[k] > w[i - 1]).expect("exists");
        w.swap(i - 1, k);
        w[i..].reverse();
        out.push(w.clone());
    }
}

/// Annihilators of the seed form's class.
#[derive(Clone, Debug, PartialEq)]
pub struct Annihilator<S> {
    /// `chain(seed, u+) - kappa * chain(seed, u-)`, ascending words.
    pub main: AbElement<S>,
    pub relation: RelationData<S>,
    /// Nonzero differences `chain(seed, w') - chain(seed, w)` over orderings
    /// `w'` of the same word.
    pub permutation_differences: Vec<AbElement<S>>,
}

impl<S: Scalar> Annihilator<S> {
    pub fn all(&self) -> Vec<AbElement<S>> {
        std::iter::once(self.main.clone()).chain(self.permutation_differences.iter().cloned()).collect()
    }
}

pub fn annihilator<S: Scalar>(germ: &MonomialGerm<S>, matrix: &SystemMatrix, seed: &[u32]) -> Result<Annihilator<S>> {
    let relation = find_relation(germ)?;
    let plus = chain(germ, matrix, seed, &relation.plus_word())?;
    let minus = chain(germ, matrix, seed, &relation.minus_word())?;
    let main = plus.clone() - minus.scale(&relation.kappa);
    let mut diffs = Vec::new();
    for (word, base) in [(relation.plus_word(), &plus), (relation.minus_word(), &minus)] {
        for perm in permutations(&word).into_iter().skip(1) {
            let d = chain(germ, matrix, seed, &perm)? - base.clone();
            if !d.is_zero() && !diffs.contains(&d) {
                diffs.push(d);
            }
        }
    }
    Ok(Annihilator { main, relation, permutation_differences: diffs })
}

/// Which rule produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRule {
    LowestHomogeneousPart,
    RightFactors,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    /// The bound used downstream: the right-factor bound when that rule
    /// applies, otherwise the lowest-part bound.
    pub bound: UniPoly<Rational>,
    pub rule: BoundRule,
    pub lowest_part: UniPoly<Rational>,
    pub right_factors: Option<UniPoly<Rational>>,
    /// Distinct monic first-step factors `a - lambda b` across orderings,
    /// listed by `lambda`.
    pub first_factor_roots: Vec<Rational>,
    pub evidence: Vec<String>,
}

fn rational_poly<S: Scalar>(p: &UniPoly<S>) -> Result<UniPoly<Rational>> {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| c.to_rational().ok_or_else(|| Error::HypothesisFailure(format!("bound depends on the parameter: {p}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Divisibility bounds for the Bernstein polynomial of the seed form's fresco.
pub fn bernstein_bound<S: Scalar>(germ: &MonomialGerm<S>, matrix: &SystemMatrix, seed: &[u32]) -> Result<BoundReport> {
    let ann = annihilator(germ, matrix, seed)?;
    let parts = ann.main.homogeneous_parts();
    let low = parts.first().ok_or(Error::NoRelation)?;
    let (_, monic) = low.monic_normalized()?;
    let lowest_part = rational_poly(&monic.bernstein_poly()?)?;
    let mut evidence = vec![format!(
        "lowest homogeneous part (degree {}) {} has Bernstein polynomial {}",
        low.degree().unwrap_or(0),
        monic.render(),
        lowest_part.render_factored()
    )];

    let word = ann.relation.plus_word();
    let d = word.len();
    let firsts = first_step_factors(germ, matrix, seed)?;
    let mut roots = BTreeSet::new();
    let mut all_linear = true;
    for perm in permutations(&word) {
        let f = &firsts[perm[0] - 1];
        match linear_root(f) {
            Some(r) => {
                roots.insert(r);
            }
            None => all_linear = false,
        }
    }
    let first_factor_roots: Vec<Rational> = roots.into_iter().collect();
    let right_factors = if all_linear && first_factor_roots.len() == d {
        let p = UniPoly::from_shifts(&first_factor_roots);
        evidence.push(format!(
            "{} distinct right factors {} across orderings of {:?} give {}",
            d,
            first_factor_roots.iter().map(|r| format!("(a-{r}b)")).collect::<Vec<_>>().join(", "),
            word,
            p.render_factored()
        ));
        Some(p)
    } else {
        evidence.push(format!(
            "{} distinct right factor(s) for chain degree {}: right-factor rule not applicable",
            first_factor_roots.len(),
            d
        ));
        None
    };
    let (bound, rule) = match &right_factors {
        Some(p) => (p.clone(), BoundRule::RightFactors),
        None => (lowest_part.clone(), BoundRule::LowestHomogeneousPart),
    };
    Ok(BoundReport { bound, rule, lowest_part, right_factors, first_factor_roots, evidence })
}

/// `lambda` when `f` is a nonzero multiple of `a - lambda b`.
pub fn linear_root<S: Scalar>(f: &AbElement<S>) -> Option<Rational> {
    if f.degree() != Some(1) || !f.is_homogeneous() {
        return None;
    }
    let ca = f.coeff(0, 1);
    if ca.is_zero() {
        return None;
    }
    (-f.coeff(1, 0)).checked_div(&ca).ok()?.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type E = AbElement<ParamScalar>;

    fn setup() -> (MonomialGerm<ParamScalar>, SystemMatrix) {
        let g = example_germ();
        let m = build_matrix(&g).unwrap();
        (g, m)
    }

    fn factors(l: &[Rational], lead: i64) -> E {
        let l: Vec<ParamScalar> = l.iter().map(ParamScalar::from_rational).collect();
        E::from_linear_factors(&l, ParamScalar::from_i64(lead))
    }

    #[test]
    fn matrix_rows() {
        let (_, sm) = setup();
        let expected: Vec<Vec<Rational>> = [[1, 1, 1, 1], [1, 0, 3, 1], [3, 1, 0, 1], [0, 3, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        assert_eq!(sm.m.row_vecs(), expected);
    }

    #[test]
    fn invalid_germs() {
        let g = |e: [u32; 2]| Generator { coeff: Rational::one(), exponents: e.to_vec() };
        let dup = MonomialGerm::new(1, vec![g([2, 0]), g([0, 2]), g([2, 0])]);
        assert!(matches!(dup, Err(Error::InvalidGerm(_))));
        let short = MonomialGerm::new(1, vec![g([2, 0]), g([0, 2])]);
        assert!(matches!(short, Err(Error::InvalidGerm(_))));
        let singular = MonomialGerm::new(1, vec![g([2, 0]), g([0, 2]), g([1, 1])]).unwrap();
        assert_eq!(build_matrix(&singular), Err(Error::SingularSystem));
    }

    #[test]
    fn first_step_at_one() {
        let (g, sm) = setup();
        let f = first_step_factors(&g, &sm, &[0, 0, 0]).unwrap();
        let m1 = -factors(&[int(1)], 1);
        assert_eq!(f[0], m1);
        assert_eq!(f[1], m1);
        assert_eq!(f[2], m1);
        assert_eq!(f[3], factors(&[rat(3, 4)], 4));
    }

    #[test]
    fn chains() {
        let (g, sm) = setup();
        assert_eq!(chain(&g, &sm, &[0, 0, 0], &[1, 2]).unwrap(), factors(&[int(2), int(1)], 1));
        assert_eq!(chain(&g, &sm, &[0, 0, 0], &[1, 1]).unwrap(), factors(&[int(3), int(1)], 1));
        assert_eq!(chain(&g, &sm, &[0, 0, 0], &[1, 2, 3]).unwrap(), -factors(&[int(3), int(2), int(1)], 1));
        assert_eq!(chain(&g, &sm, &[0, 3, 2], &[1, 2, 3]).unwrap(), -factors(&[int(4), int(4), int(3)], 1));
        assert_eq!(
            chain(&g, &sm, &[0, 0, 0], &[4, 4, 4, 4]).unwrap(),
            factors(&[int(3), rat(9, 4), rat(3, 2), rat(3, 4)], 256)
        );
        assert_eq!(chain(&g, &sm, &[0, 0, 0], &[1, 1, 4]).unwrap(), factors(&[rat(11, 4), int(3), int(1)], 4));
    }

    #[test]
    fn relation() {
        let (g, _) = setup();
        let r = find_relation(&g).unwrap();
        assert_eq!(r.u, [1, 1, 1, -4].map(BigInt::from).to_vec());
        assert_eq!(r.kappa, ParamScalar::lambda().powi(-4).unwrap());
        let h = |e: [u32; 3]| Generator { coeff: Rational::one(), exponents: e.to_vec() };
        let flat = MonomialGerm::new(2, vec![h([1, 0, 0]), h([0, 1, 0]), h([0, 0, 1]), h([0, 0, 0])]).unwrap();
        assert_eq!(find_relation(&flat), Err(Error::NoRelation));
    }

    #[test]
    fn annihilator_at_one() {
        let (g, sm) = setup();
        let ann = annihilator(&g, &sm, &[0, 0, 0]).unwrap();
        let p3 = factors(&[int(3), int(2), int(1)], 1);
        let p4 = factors(&[rat(13, 4), rat(5, 2), rat(7, 4), int(0)], 1);
        let c = ParamScalar::from_i64(256) * ParamScalar::lambda().powi(-4).unwrap();
        assert_eq!(ann.main, -(p3 + p4.scale(&c)));
        assert!(ann.permutation_differences.is_empty());
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(permutations(&[1, 1, 4]), vec![vec![1, 1, 4], vec![1, 4, 1], vec![4, 1, 1]]);
        assert_eq!(permutations(&[4, 4, 4, 4]).len(), 1);
        assert_eq!(word_of(&[1, 0, 2]), vec![1, 3, 3]);
    }

    #[test]
    fn step_resolves() {
        let (g, sm) = setup();
        let s = chain_state(&g, &sm, &[0, 0, 0], &[1]).unwrap();
        let succ = step(&g, &sm, &s);
        assert!(resolve_check(&sm, &s, &succ));
    }
}
