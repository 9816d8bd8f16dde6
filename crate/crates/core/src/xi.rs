//! Truncated expansions `sum c * s^(alpha+m-1) (Log s)^j (x) v_r` with the
//! actions `a` = multiplication by `s` and `b` = primitive vanishing at 0.
//!
//! Exponent indices `m` run over `0..truncation`; anything pushed to
//! `m >= truncation` is dropped and the result is flagged as truncated.
//! In quotient mode the log-degree-0 part is identified with zero, which
//! models `Xi^(k) / Xi^(0)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::ab::AbElement;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::UniPoly;
use crate::scalar::{int, Rational, Scalar};

/// Default number of exponent indices kept.
pub const DEFAULT_TRUNCATION: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub alpha: Rational,
    pub log_bound: usize,
    pub truncation: usize,
    pub dim_v: usize,
    pub quotient: bool,
}

impl Space {
    pub fn new(alpha: Rational, log_bound: usize, truncation: usize, dim_v: usize, quotient: bool) -> Self {
        assert!(alpha > Rational::zero(), "alpha must be positive");
        assert!(dim_v > 0, "dim_v must be positive");
        Space { alpha, log_bound, truncation, dim_v, quotient }
    }

    /// `Xi_1^(2) / Xi_1^(0)` with a one-dimensional `V`.
    pub fn theta(truncation: usize) -> Self {
        Self::new(int(1), 2, truncation, 1, true)
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        Space { truncation, ..self.clone() }
    }

    pub fn min_log(&self) -> usize {
        usize::from(self.quotient)
    }

    fn log_count(&self) -> usize {
        self.log_bound + 1 - self.min_log()
    }

    pub fn dimension(&self) -> usize {
        self.truncation * self.log_count() * self.dim_v
    }

    pub fn contains(&self, t: &BasisTerm) -> bool {
        t.m < self.truncation && t.j <= self.log_bound && t.j >= self.min_log() && t.r < self.dim_v
    }

    /// Flat index: `m` ascending, then `j` descending, then `r`.
    pub fn index(&self, t: &BasisTerm) -> usize {
        debug_assert!(self.contains(t));
        let jpos = self.log_bound - t.j;
        (t.m * self.log_count() + jpos) * self.dim_v + t.r
    }

    pub fn term(&self, idx: usize) -> BasisTerm {
        let r = idx % self.dim_v;
        let rest = idx / self.dim_v;
        let jpos = rest % self.log_count();
        let m = rest / self.log_count();
        BasisTerm { m, j: self.log_bound - jpos, r }
    }

    /// Real exponent `alpha + m - 1` of the basis term at index `m`.
    pub fn exponent(&self, m: usize) -> Rational {
        self.alpha.clone() + int(m as i64) - int(1)
    }
}

/// The basis element `s^(alpha+m-1) (Log s)^j (x) v_r`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BasisTerm {
    pub m: usize,
    pub j: usize,
    pub r: usize,
}

impl BasisTerm {
    pub fn new(m: usize, j: usize, r: usize) -> Self {
        BasisTerm { m, j, r }
    }
}

impl Ord for BasisTerm {
    fn cmp(&self, o: &Self) -> Ordering {
        self.m.cmp(&o.m).then(o.j.cmp(&self.j)).then(self.r.cmp(&o.r))
    }
}

impl PartialOrd for BasisTerm {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogExpansion<S> {
    space: Space,
    coeffs: BTreeMap<BasisTerm, S>,
    truncated: bool,
}

impl<S: Scalar> LogExpansion<S> {
    pub fn zero(space: &Space) -> Self {
        LogExpansion { space: space.clone(), coeffs: BTreeMap::new(), truncated: false }
    }

    /// `c * s^(alpha+m-1) (Log s)^j (x) v_r`.
    pub fn term(space: &Space, m: usize, j: usize, r: usize, c: S) -> Self {
        let mut out = Self::zero(space);
        out.add_term(BasisTerm::new(m, j, r), c);
        out
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisTerm, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: usize, j: usize, r: usize) -> S {
        self.coeffs.get(&BasisTerm::new(m, j, r)).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `c` at `t`; terms outside the truncation are dropped (and
    /// flagged), log-degree-0 terms vanish in quotient mode.
    pub fn add_term(&mut self, t: BasisTerm, c: S) {
        if c.is_zero() {
            return;
        }
        assert!(t.j <= self.space.log_bound && t.r < self.space.dim_v, "basis term outside the space");
        if t.m >= self.space.truncation {
            self.truncated = true;
            return;
        }
        if t.j < self.space.min_log() {
            return;
        }
        match self.coeffs.get_mut(&t) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.coeffs.remove(&t);
                } else {
                    *v = s;
                }
            }
            None => {
                self.coeffs.insert(t, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.space, o.space, "mismatched spaces");
        let mut out = self.clone();
        out.truncated |= o.truncated;
        for (t, c) in &o.coeffs {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.space);
        out.truncated = self.truncated;
        if c.is_zero() {
            return out;
        }
        for (t, v) in &self.coeffs {
            out.coeffs.insert(*t, v.clone() * c.clone());
        }
        out
    }

    /// Same coefficients in another truncation (coefficients past the new
    /// bound are dropped).
    pub fn retruncate(&self, truncation: usize) -> Self {
        let space = self.space.with_truncation(truncation);
        let mut out = Self::zero(&space);
        out.truncated = self.truncated;
        for (t, c) in &self.coeffs {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn apply_a(&self) -> Self {
        let mut out = Self::zero(&self.space);
        out.truncated = self.truncated;
        for (t, c) in &self.coeffs {
            out.add_term(BasisTerm::new(t.m + 1, t.j, t.r), c.clone());
        }
        out
    }

    /// `b(s^beta (Log s)^j) = sum_i (-1)^i j!/(j-i)! (beta+1)^-(i+1) s^(beta+1) (Log s)^(j-i)`.
    pub fn apply_b(&self) -> Self {
        let mut out = Self::zero(&self.space);
        out.truncated = self.truncated;
        for (t, c) in &self.coeffs {
            let beta1 = self.space.exponent(t.m) + int(1);
            let inv = S::from_rational(&beta1.recip());
            let mut factor = inv.clone();
            let mut falling = S::one();
            for i in 0..=t.j {
                let sign = if i % 2 == 0 { S::one() } else { -S::one() };
                let coef = sign * falling.clone() * factor.clone();
                out.add_term(BasisTerm::new(t.m + 1, t.j - i, t.r), c.clone() * coef);
                falling = falling * S::from_i64((t.j - i) as i64);
                factor = factor * inv.clone();
            }
        }
        out
    }

    /// Action of an element of the `(a,b)`-algebra: `b^i a^j` acts as
    /// `b` applied `i` times after `a` applied `j` times.
    pub fn apply_op(&self, p: &AbElement<S>) -> Self {
        let mut out = Self::zero(&self.space);
        out.truncated = self.truncated;
        let max_a = p.a_degree().unwrap_or(0) as usize;
        let mut a_pows = vec![self.clone()];
        for _ in 0..max_a {
            let next = a_pows.last().expect("nonempty").apply_a();
            a_pows.push(next);
        }
        for (mono, c) in p.terms() {
            let mut x = a_pows[mono.a as usize].clone();
            for _ in 0..mono.b {
                x = x.apply_b();
            }
            out = out.add(&x.scale(c));
        }
        out
    }

    pub fn to_vec(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.space.dimension()];
        for (t, c) in &self.coeffs {
            v[self.space.index(t)] = c.clone();
        }
        v
    }

    pub fn from_vec(space: &Space, v: &[S]) -> Self {
        assert_eq!(v.len(), space.dimension());
        let mut out = Self::zero(space);
        for (i, c) in v.iter().enumerate() {
            out.add_term(space.term(i), c.clone());
        }
        out
    }

    /// Highest log degree carrying a nonzero coefficient.
    pub fn top_log_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|t| t.j).max()
    }

    /// Least exponent index with a nonzero coefficient in log degree `j`.
    pub fn leading_index(&self, j: usize) -> Option<usize> {
        self.coeffs.keys().filter(|t| t.j == j).map(|t| t.m).min()
    }

    /// Coefficient vector (over `V`) at exponent index `m`, log degree `j`.
    pub fn vector_at(&self, m: usize, j: usize) -> Vec<S> {
        (0..self.space.dim_v).map(|r| self.coeff(m, j, r)).collect()
    }

    /// Replaces every coefficient vector by `g * vector` for a matrix `g`
    /// acting on `V`.
    pub fn change_v_basis(&self, g: &Matrix<S>) -> Self {
        assert_eq!(g.cols(), self.space.dim_v);
        let mut out = Self::zero(&self.space);
        out.truncated = self.truncated;
        for m in 0..self.space.truncation {
            for j in self.space.min_log()..=self.space.log_bound {
                let v = self.vector_at(m, j);
                if v.iter().all(|c| c.is_zero()) {
                    continue;
                }
                for (r, c) in g.mul_vec(&v).into_iter().enumerate() {
                    out.add_term(BasisTerm::new(m, j, r), c);
                }
            }
        }
        out
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<LogExpansion<T>> {
        let mut out = LogExpansion::zero(&self.space);
        out.truncated = self.truncated;
        for (t, c) in &self.coeffs {
            out.add_term(*t, f(c)?);
        }
        Ok(out)
    }

    /// Terms `c * s^e * Log^j [(x) v_r]`, `m` ascending then `j` descending.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (t, c) in &self.coeffs {
            let (neg, mag) = c.signed_parts();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            let e = self.space.exponent(t.m);
            let has_s = !e.is_zero();
            let has_log = t.j > 0;
            if mag != "1" || (!has_s && !has_log) {
                parts.push(mag);
            }
            if has_s {
                if e.is_one() {
                    parts.push("s".to_string());
                } else if e.is_integer() {
                    parts.push(format!("s^{e}"));
                } else {
                    parts.push(format!("s^({e})"));
                }
            }
            if has_log {
                parts.push(format!("Log^{}", t.j));
            }
            out.push_str(&parts.join("*"));
            if self.space.dim_v > 1 {
                out.push_str(&format!(" ⊗ v_{}", t.r + 1));
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for LogExpansion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Matrix of `p` acting on the truncated space; column `k` is the image of
/// the `k`-th basis vector.
pub fn operator_matrix<S: Scalar>(p: &AbElement<S>, space: &Space) -> Matrix<S> {
    let n = space.dimension();
    let mut m = Matrix::zeros(n, n);
    for k in 0..n {
        let t = space.term(k);
        let img = LogExpansion::term(space, t.m, t.j, t.r, S::one()).apply_op(p);
        for (tt, c) in img.terms() {
            m.set(space.index(tt), k, c.clone());
        }
    }
    m
}

/// The factor carrying the top-log coefficient at exponent index `i` to
/// index `i + p` under a homogeneous monic `p` of degree `p`:
/// `(-1)^p B_P(-(alpha+i)) / prod_{q<p} (alpha+i+q)`.
pub fn leading_transfer<S: Scalar>(p: &AbElement<S>, i: usize, alpha: &Rational) -> Result<S> {
    let bp = p.bernstein_poly()?;
    let deg = p.degree().expect("monic element is nonzero");
    let base = alpha.clone() + int(i as i64);
    let value = bp.eval(&S::from_rational(&-base.clone()));
    let denom = (0..deg).fold(Rational::one(), |acc, q| acc * (base.clone() + int(q as i64)));
    let sign = if deg.is_multiple_of(2) { S::one() } else { -S::one() };
    (sign * value).checked_div(&S::from_rational(&denom))
}

/// Basis of `{xi : p(xi) = 0 in every computed exponent index}`.
pub fn kernel_of_operator<S: Scalar>(p: &AbElement<S>, space: &Space) -> Vec<LogExpansion<S>> {
    operator_matrix(p, space).nullspace().into_iter().map(|v| LogExpansion::from_vec(space, &v)).collect()
}

/// Basis of the common kernel of several operators, row-reduced so that
/// each element has a distinct leading basis term (least exponent index
/// first); the leading coefficients are 1.
pub fn joint_kernel<S: Scalar>(ops: &[AbElement<S>], space: &Space) -> Vec<LogExpansion<S>> {
    let n = space.dimension();
    let mut stacked = Matrix::zeros(n * ops.len(), n);
    for (e, op) in ops.iter().enumerate() {
        let om = operator_matrix(op, space);
        for i in 0..n {
            for k in 0..n {
                let v = om.get(i, k);
                if !v.is_zero() {
                    stacked.set(e * n + i, k, v.clone());
                }
            }
        }
    }
    let kernel = stacked.nullspace();
    if kernel.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(kernel);
    let rank = m.rref().len();
    (0..rank).map(|r| LogExpansion::from_vec(space, m.row(r))).collect()
}

/// An affine family `particular + sum t_k directions[k]` of expansions; the
/// `t_k` are free parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineExpansion<S> {
    pub particular: LogExpansion<S>,
    pub directions: Vec<LogExpansion<S>>,
}

/// Value of one coefficient across an affine family.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient<S> {
    /// Same value for every choice of the free parameters.
    Forced(S),
    /// Depends on the free parameters.
    Free,
}

impl<S: Scalar> Coefficient<S> {
    pub fn is_forced_zero(&self) -> bool {
        matches!(self, Coefficient::Forced(c) if c.is_zero())
    }

    pub fn is_forced_nonzero(&self) -> bool {
        matches!(self, Coefficient::Forced(c) if !c.is_zero())
    }
}

/// Outcome of a leading-index scan over an affine family.
#[derive(Clone, Debug, PartialEq)]
pub enum Leading {
    /// Lowest index not forced to vanish, with a forced nonzero coefficient.
    Forced(usize),
    /// The lowest index not forced to vanish depends on the parameters.
    Undetermined(usize),
    /// Every coefficient is forced to vanish.
    Absent,
}

impl<S: Scalar> AffineExpansion<S> {
    pub fn fixed(e: LogExpansion<S>) -> Self {
        AffineExpansion { particular: e, directions: Vec::new() }
    }

    pub fn space(&self) -> &Space {
        self.particular.space()
    }

    pub fn free_count(&self) -> usize {
        self.directions.len()
    }

    /// Row-reduces the directions to an independent set.
    pub fn reduced(mut self) -> Self {
        if self.directions.is_empty() {
            return self;
        }
        let space = self.space().clone();
        let mut m = Matrix::from_rows(self.directions.iter().map(|d| d.to_vec()).collect());
        let rank = m.rref().len();
        self.directions = (0..rank).map(|r| LogExpansion::from_vec(&space, m.row(r))).collect();
        self
    }

    pub fn coeff(&self, m: usize, j: usize, r: usize) -> Coefficient<S> {
        if self.directions.iter().any(|d| !d.coeff(m, j, r).is_zero()) {
            Coefficient::Free
        } else {
            Coefficient::Forced(self.particular.coeff(m, j, r))
        }
    }

    pub fn apply_op(&self, p: &AbElement<S>) -> Self {
        self.apply_op_keeping_parameters(p).reduced()
    }

    /// Like [`AffineExpansion::apply_op`], but direction `k` of the result
    /// is the image of direction `k`, so parameters keep their meaning.
    pub fn apply_op_keeping_parameters(&self, p: &AbElement<S>) -> Self {
        AffineExpansion {
            particular: self.particular.apply_op(p),
            directions: self.directions.iter().map(|d| d.apply_op(p)).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        AffineExpansion {
            particular: self.particular.scale(c),
            directions: self.directions.clone(),
        }
    }

    /// Restricts the family to members whose coefficient vanishes at the
    /// leading term of every element of `kernel` (a row-reduced basis as
    /// returned by [`joint_kernel`]), and drops those kernel directions.
    pub fn normalized_against(&self, kernel: &[LogExpansion<S>]) -> Self {
        let project = |x: &LogExpansion<S>| {
            kernel.iter().fold(x.clone(), |acc, k| {
                let (t, lead) = k.terms().next().expect("kernel elements are nonzero");
                let c = acc.coeff(t.m, t.j, t.r);
                if c.is_zero() {
                    acc
                } else {
                    acc.sub(&k.scale(&c.checked_div(lead).expect("nonzero leading coefficient")))
                }
            })
        };
        AffineExpansion {
            particular: project(&self.particular),
            directions: self.directions.iter().map(project).filter(|d| !d.is_zero()).collect(),
        }
        .reduced()
    }

    pub fn specialize(&self, params: &[S]) -> LogExpansion<S> {
        assert_eq!(params.len(), self.directions.len());
        self.directions
            .iter()
            .zip(params)
            .fold(self.particular.clone(), |acc, (d, t)| acc.add(&d.scale(t)))
    }

    /// Scans exponent indices `m < limit` in log degree `j`.
    pub fn leading_index(&self, j: usize, limit: usize) -> Leading {
        let space = self.space();
        for m in 0..limit.min(space.truncation) {
            let coeffs: Vec<Coefficient<S>> = (0..space.dim_v).map(|r| self.coeff(m, j, r)).collect();
            if coeffs.iter().all(|c| c.is_forced_zero()) {
                continue;
            }
            if coeffs.iter().any(|c| c.is_forced_nonzero()) {
                return Leading::Forced(m);
            }
            return Leading::Undetermined(m);
        }
        Leading::Absent
    }
}

/// One equation `op (eta) = rhs` of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation<S> {
    pub op: AbElement<S>,
    pub rhs: AffineExpansion<S>,
}

/// Solves `op_e (eta) = rhs_e` for all equations simultaneously. When
/// `shared` is true the right-hand sides must have the same number of
/// directions and direction `k` of every right-hand side carries the same
/// parameter; otherwise each right-hand side has its own parameters.
/// Returns the affine family of solutions `eta`.
pub fn solve_equations<S: Scalar>(space: &Space, equations: &[Equation<S>], shared: bool) -> Result<AffineExpansion<S>> {
    let n = space.dimension();
    let counts: Vec<usize> = equations.iter().map(|e| e.rhs.directions.len()).collect();
    if shared && counts.windows(2).any(|w| w[0] != w[1]) {
        panic!("shared parameters need equal direction counts");
    }
    let extra: usize = if shared { counts.first().copied().unwrap_or(0) } else { counts.iter().sum() };
    let rows = n * equations.len();
    let mut mat = Matrix::zeros(rows, n + extra);
    let mut rhs = vec![S::zero(); rows];
    let mut col = n;
    for (e, eq) in equations.iter().enumerate() {
        assert_eq!(eq.rhs.space(), space, "right-hand side lives in another space");
        let om = operator_matrix(&eq.op, space);
        for i in 0..n {
            for k in 0..n {
                let v = om.get(i, k);
                if !v.is_zero() {
                    mat.set(e * n + i, k, v.clone());
                }
            }
        }
        for (t, c) in eq.rhs.particular.terms() {
            rhs[e * n + space.index(t)] = c.clone();
        }
        if shared {
            col = n;
        }
        for d in &eq.rhs.directions {
            for (t, c) in d.terms() {
                mat.set(e * n + space.index(t), col, -c.clone());
            }
            col += 1;
        }
    }
    let Some((x, kernel)) = mat.solve(&rhs) else {
        return Err(Error::Inconsistent(first_inconsistent_index(space, &mat, &rhs, equations.len())));
    };
    let particular = LogExpansion::from_vec(space, &x[..n]);
    let directions = kernel
        .into_iter()
        .map(|v| LogExpansion::from_vec(space, &v[..n]))
        .filter(|d| !d.is_zero())
        .collect();
    Ok(AffineExpansion { particular, directions }.reduced())
}

/// [`solve_equations`] with independent parameters per right-hand side.
pub fn solve_system<S: Scalar>(space: &Space, equations: &[(AbElement<S>, AffineExpansion<S>)]) -> Result<AffineExpansion<S>> {
    let eqs: Vec<Equation<S>> = equations.iter().map(|(op, rhs)| Equation { op: op.clone(), rhs: rhs.clone() }).collect();
    solve_equations(space, &eqs, false)
}

fn first_inconsistent_index<S: Scalar>(space: &Space, mat: &Matrix<S>, rhs: &[S], blocks: usize) -> usize {
    let n = space.dimension();
    for m in 0..space.truncation {
        let keep: Vec<usize> = (0..blocks)
            .flat_map(|e| (0..n).filter(move |&i| space.term(i).m <= m).map(move |i| e * n + i))
            .collect();
        let sub = Matrix::from_rows(keep.iter().map(|&i| mat.row(i).to_vec()).collect());
        let sub_rhs: Vec<S> = keep.iter().map(|&i| rhs[i].clone()).collect();
        if sub.solve(&sub_rhs).is_none() {
            return m;
        }
    }
    space.truncation
}

/// General solution of `(a - lambda b) eta = zeta` in the truncation.
pub fn solve_factor<S: Scalar>(factor: &AbElement<S>, zeta: &AffineExpansion<S>) -> Result<(AffineExpansion<S>, usize)> {
    let sol = solve_system(zeta.space(), &[(factor.clone(), zeta.clone())])?;
    let free = sol.free_count();
    Ok((sol, free))
}

/// Exact span of `{b^i a^j e : i + j <= cap}` in the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmoduleSpan<S> {
    pub space: Space,
    pub generators: Vec<LogExpansion<S>>,
    /// Row-reduced basis, ordered by leading basis term.
    pub basis: Vec<LogExpansion<S>>,
    /// Module rank: the largest number of independent leading terms
    /// sharing one exponent index.
    pub rank: usize,
    pub truncation_caveat: bool,
}

impl<S: Scalar> SubmoduleSpan<S> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn from_rows(space: &Space, generators: Vec<LogExpansion<S>>, rows: Vec<Vec<S>>) -> Self {
        let n = space.dimension();
        let (basis, rank) = if rows.is_empty() {
            (Vec::new(), 0)
        } else {
            let mut m = Matrix::from_rows(rows);
            let order: Vec<usize> = (0..n).collect();
            let pivots = m.rref_with_order(&order);
            let mut per_index: BTreeMap<usize, usize> = BTreeMap::new();
            for p in &pivots {
                *per_index.entry(space.term(*p).m).or_default() += 1;
            }
            let rank = per_index.values().copied().max().unwrap_or(0);
            let basis = (0..pivots.len()).map(|r| LogExpansion::from_vec(space, m.row(r))).collect();
            (basis, rank)
        };
        SubmoduleSpan { space: space.clone(), generators, basis, rank, truncation_caveat: false }
    }

    /// Basis element with the least leading exponent index.
    pub fn lowest_element(&self) -> Option<&LogExpansion<S>> {
        self.basis.iter().min_by_key(|e| e.terms().next().map(|(t, _)| *t))
    }
}

fn span_rows<S: Scalar>(e: &LogExpansion<S>, cap: u32) -> Vec<LogExpansion<S>> {
    let mut out = Vec::new();
    let mut a_pow = e.clone();
    for j in 0..=cap {
        let mut x = a_pow.clone();
        for _ in 0..=(cap - j) {
            out.push(x.clone());
            x = x.apply_b();
        }
        a_pow = a_pow.apply_a();
    }
    out
}

pub fn span_submodule<S: Scalar>(e: &LogExpansion<S>, degree_cap: u32) -> SubmoduleSpan<S> {
    let gens = span_rows(e, degree_cap);
    let rows = gens.iter().filter(|g| !g.is_zero()).map(|g| g.to_vec()).collect();
    let mut span = SubmoduleSpan::from_rows(e.space(), gens, rows);
    let wider = e.retruncate(e.space().truncation + 2);
    let wider_rows: Vec<Vec<S>> = span_rows(&wider, degree_cap).iter().filter(|g| !g.is_zero()).map(|g| g.to_vec()).collect();
    let wider_span = SubmoduleSpan::from_rows(wider.space(), Vec::new(), wider_rows);
    span.truncation_caveat = wider_span.rank != span.rank;
    span
}

/// Intersection of the span with the subspace of log degree `<= jmax`.
pub fn log_filtration_intersect<S: Scalar>(span: &SubmoduleSpan<S>, jmax: usize) -> SubmoduleSpan<S> {
    let space = &span.space;
    let n = space.dimension();
    if span.basis.is_empty() {
        return SubmoduleSpan::from_rows(space, Vec::new(), Vec::new());
    }
    let high: Vec<usize> = (0..n).filter(|&i| space.term(i).j > jmax).collect();
    let low: Vec<usize> = (0..n).filter(|&i| space.term(i).j <= jmax).collect();
    let order: Vec<usize> = high.iter().chain(low.iter()).copied().collect();
    let mut m = Matrix::from_rows(span.basis.iter().map(|b| b.to_vec()).collect());
    let pivots = m.rref_with_order(&order);
    let rows: Vec<Vec<S>> = pivots
        .iter()
        .enumerate()
        .filter(|(_, p)| space.term(**p).j <= jmax)
        .map(|(r, _)| m.row(r).to_vec())
        .collect();
    let mut out = SubmoduleSpan::from_rows(space, Vec::new(), rows);
    out.truncation_caveat = span.truncation_caveat;
    out
}

/// Result of [`kth_bernstein_from_generator`].
#[derive(Clone, Debug, PartialEq)]
pub struct HigherBernstein<S> {
    pub poly: UniPoly<S>,
    pub exponents: Vec<usize>,
    pub caveat: bool,
}

/// Scans the log-degree-`top_log` coefficient vectors by increasing
/// exponent index and keeps each index whose vector is independent of the
/// vectors kept so far; returns `prod (x + alpha + m)` over kept indices.
pub fn kth_bernstein_from_generator<S: Scalar>(e: &LogExpansion<S>, top_log: usize) -> Result<HigherBernstein<S>> {
    let space = e.space();
    if e.leading_index(top_log).is_none() {
        return Err(Error::NoTopLogTerm);
    }
    let mut kept_vectors: Vec<Vec<S>> = Vec::new();
    let mut exponents = Vec::new();
    for m in 0..space.truncation {
        let v = e.vector_at(m, top_log);
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut trial = kept_vectors.clone();
        trial.push(v);
        if Matrix::from_rows(trial.clone()).rank() == trial.len() {
            kept_vectors = trial;
            exponents.push(m);
            if kept_vectors.len() == space.dim_v {
                break;
            }
        }
    }
    let shifts: Vec<S> = exponents.iter().map(|&m| S::from_rational(&(space.alpha.clone() + int(m as i64)))).collect();
    let caveat = exponents.len() < space.dim_v && exponents.last().is_some_and(|&m| m + 2 >= space.truncation);
    Ok(HigherBernstein { poly: UniPoly::from_shifts(&shifts), exponents, caveat })
}

/// [`kth_bernstein_from_generator`] at the highest log degree present.
pub fn top_bernstein<S: Scalar>(e: &LogExpansion<S>) -> Result<HigherBernstein<S>> {
    let top = e.top_log_degree().ok_or(Error::NoTopLogTerm)?;
    kth_bernstein_from_generator(e, top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ParamScalar};

    type E = AbElement<Rational>;
    type X = LogExpansion<Rational>;

    fn theta() -> Space {
        Space::theta(DEFAULT_TRUNCATION)
    }

    fn full() -> Space {
        Space::new(int(1), 2, DEFAULT_TRUNCATION, 1, false)
    }

    fn lin(l: i64) -> E {
        E::linear_factor(&int(l))
    }

    #[test]
    fn a_shifts_exponents() {
        let x = X::term(&theta(), 0, 2, 0, int(1)).apply_a();
        assert_eq!(x, X::term(&theta(), 1, 2, 0, int(1)));
        let y = X::term(&theta(), 2, 1, 0, int(1)).apply_a();
        assert_eq!(y, X::term(&theta(), 3, 1, 0, int(1)));
    }

    #[test]
    fn a_at_boundary_truncates() {
        let n = DEFAULT_TRUNCATION;
        let x = X::term(&theta(), n - 1, 2, 0, int(1)).apply_a();
        assert!(x.is_zero());
        assert!(x.is_truncated());
    }

    #[test]
    fn b_on_log() {
        let full_b = X::term(&full(), 0, 1, 0, int(1)).apply_b();
        let expected = X::term(&full(), 1, 1, 0, int(1)).add(&X::term(&full(), 1, 0, 0, int(-1)));
        assert_eq!(full_b, expected);
        let q = X::term(&theta(), 0, 1, 0, int(1)).apply_b();
        assert_eq!(q, X::term(&theta(), 1, 1, 0, int(1)));
    }

    #[test]
    fn b_on_log_squared() {
        let full_b = X::term(&full(), 0, 2, 0, int(1)).apply_b();
        let expected = X::term(&full(), 1, 2, 0, int(1))
            .add(&X::term(&full(), 1, 1, 0, int(-2)))
            .add(&X::term(&full(), 1, 0, 0, int(2)));
        assert_eq!(full_b, expected);
        let q = X::term(&theta(), 0, 2, 0, int(1)).apply_b();
        assert_eq!(q, X::term(&theta(), 1, 2, 0, int(1)).add(&X::term(&theta(), 1, 1, 0, int(-2))));
    }

    #[test]
    fn b_on_powers() {
        let sp = Space::new(int(1), 0, DEFAULT_TRUNCATION, 1, false);
        for m in 0..5 {
            let x = X::term(&sp, m, 0, 0, int(1)).apply_b();
            assert_eq!(x, X::term(&sp, m + 1, 0, 0, rat(1, m as i64 + 1)));
        }
    }

    #[test]
    fn two_factor_kills_log_squared() {
        let p = lin(2) * lin(1);
        assert!(X::term(&theta(), 0, 2, 0, int(1)).apply_op(&p).is_zero());
    }

    #[test]
    fn cubic_on_s_log_squared_symbolic_nu() {
        type P = ParamScalar;
        let nu = P::lambda();
        let p = AbElement::<P>::linear_factor(&nu) * AbElement::linear_factor(&P::from_i64(2)) * AbElement::linear_factor(&P::from_i64(1));
        let x = LogExpansion::<P>::term(&theta(), 1, 2, 0, P::one()).apply_op(&p);
        let expected = (P::from_i64(4) - nu).checked_div(&P::from_i64(24)).unwrap();
        assert_eq!(x.coeff(4, 2, 0), expected);
        for (t, _) in x.terms() {
            assert!(t.m == 4, "only index 4 is reached");
        }
    }

    #[test]
    fn transfer_values() {
        let p = lin(2) * lin(1);
        assert_eq!(leading_transfer(&p, 0, &int(1)).unwrap(), int(0));
        assert_eq!(leading_transfer(&p, 1, &int(1)).unwrap(), rat(1, 6));
        let p3 = lin(3) * lin(2) * lin(1);
        assert_eq!(leading_transfer(&p3, 1, &int(1)).unwrap(), rat(1, 24));
        assert_eq!(leading_transfer(&E::b(), 0, &int(1)), Err(Error::NotMonicInA));
    }

    #[test]
    fn kernel_examples() {
        let p = lin(2) * lin(1);
        let ker = kernel_of_operator(&p, &theta());
        let m = Matrix::from_rows(ker.iter().map(|k| k.to_vec()).collect());
        let target = X::term(&theta(), 0, 2, 0, int(1)).to_vec();
        let mut with = m.row_vecs();
        with.push(target);
        assert_eq!(Matrix::from_rows(with).rank(), m.rank(), "(Log s)^2 lies in the kernel");
        assert!(kernel_of_operator(&E::one(), &theta()).is_empty());
    }

    #[test]
    fn solve_factor_of_zero_is_the_kernel() {
        let z = AffineExpansion::fixed(X::zero(&theta()));
        let (eta, free) = solve_factor(&lin(1), &z).unwrap();
        assert!(eta.particular.is_zero());
        assert_eq!(free, kernel_of_operator(&lin(1), &theta()).len());
    }

    #[test]
    fn solve_factor_round_trip() {
        let zeta = X::term(&theta(), 1, 1, 0, int(1));
        let (eta, _) = solve_factor(&lin(1), &AffineExpansion::fixed(zeta.clone())).unwrap();
        assert_eq!(eta.particular.apply_op(&lin(1)), zeta);
        for d in &eta.directions {
            assert!(d.apply_op(&lin(1)).is_zero());
        }
    }

    #[test]
    fn solve_factor_inconsistent() {
        // nothing maps onto exponent index 0
        let zeta = X::term(&theta(), 0, 1, 0, int(1));
        assert_eq!(solve_factor(&lin(1), &AffineExpansion::fixed(zeta)).unwrap_err(), Error::Inconsistent(0));
    }

    #[test]
    fn span_ranks() {
        let sp = span_submodule(&X::term(&theta(), 0, 2, 0, int(1)), 4);
        assert_eq!(sp.rank, 2);
        let sp1 = span_submodule(&X::term(&theta(), 1, 1, 0, int(1)), 4);
        assert_eq!(sp1.rank, 1);
        let sp0 = span_submodule(&X::zero(&theta()), 4);
        assert_eq!(sp0.rank, 0);
        assert!(!sp.truncation_caveat);
    }

    #[test]
    fn filtration_intersections() {
        let sp = span_submodule(&X::term(&theta(), 0, 2, 0, int(1)), 4);
        let s1 = log_filtration_intersect(&sp, 1);
        assert_eq!(s1.rank, 1);
        assert!(s1.basis.iter().all(|b| b.top_log_degree() == Some(1)));
        let same = log_filtration_intersect(&sp, 2);
        assert_eq!(same.basis, sp.basis);
        let zero = log_filtration_intersect(&span_submodule(&X::zero(&theta()), 3), 1);
        assert_eq!(zero.rank, 0);
    }

    #[test]
    fn higher_bernstein_examples() {
        let e = X::term(&theta(), 0, 2, 0, int(1)).add(&X::term(&theta(), 3, 1, 0, int(5)));
        assert_eq!(top_bernstein(&e).unwrap().poly, UniPoly::linear(int(1)));
        let e2 = X::term(&theta(), 2, 2, 0, int(7)).add(&X::term(&theta(), 3, 2, 0, int(1)));
        assert_eq!(top_bernstein(&e2).unwrap().poly, UniPoly::linear(int(3)));
        let sp = Space::new(rat(1, 3), 1, DEFAULT_TRUNCATION, 2, false);
        let single = X::term(&sp, 4, 1, 1, int(1));
        assert_eq!(top_bernstein(&single).unwrap().poly, UniPoly::linear(rat(13, 3)));
        assert_eq!(top_bernstein(&X::zero(&theta())), Err(Error::NoTopLogTerm));
    }

    #[test]
    fn rendering() {
        let x = X::term(&theta(), 1, 1, 0, int(1));
        assert_eq!(x.render(), "s*Log^1");
        let y = X::term(&theta(), 4, 2, 0, rat(1, 24)).add(&X::term(&theta(), 4, 1, 0, int(-3)));
        assert_eq!(y.render(), "1/24*s^4*Log^2 - 3*s^4*Log^1");
        assert_eq!(X::term(&theta(), 0, 2, 0, int(1)).render(), "Log^2");
    }
}
