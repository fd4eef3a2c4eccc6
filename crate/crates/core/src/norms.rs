//! Diagonalizable ultrametric norms on `F^d`, stored on the `-log` scale.
//!
//! A [`DiagNorm`] is a basis `(s_i)` together with weights `α_i`, meaning
//! `‖Σ a_i s_i‖ = max_i |a_i| e^{-α_i}`. [`DiagNorm::evaluate`] returns
//! `-log ‖v‖ = min_i (v(a_i) + α_i)`, so a larger value means a smaller norm.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use serde_json::{json, Value};

use crate::field::{Backend, Field, RatFunc, Scalar, Valuation};
use crate::linalg::{smith_dvr, Matrix, Subspace};
use crate::rational::{self, Q};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct DiagNorm<F: Field> {
    basis: Arc<Matrix<F>>,
    inverse: Arc<Matrix<F>>,
    weights: Vec<Q>,
}

impl<F: Field> DiagNorm<F> {
    /// `basis` holds the diagonalizing vectors as columns.
    pub fn new(basis: Matrix<F>, weights: Vec<Q>) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch { expected: basis.rows(), got: basis.cols() });
        }
        if weights.len() != basis.cols() {
            return Err(Error::DimensionMismatch { expected: basis.cols(), got: weights.len() });
        }
        let inverse = basis.inverse()?;
        Ok(DiagNorm { basis: Arc::new(basis), inverse: Arc::new(inverse), weights })
    }

    pub fn from_vectors(vectors: &[Vec<F>], weights: Vec<Q>) -> Result<Self> {
        Self::new(Matrix::from_columns(vectors)?, weights)
    }

    /// Norm diagonal in the standard basis.
    pub fn diagonal(weights: Vec<Q>) -> Self {
        let d = weights.len();
        let id = Arc::new(Matrix::identity(d));
        DiagNorm { basis: id.clone(), inverse: id, weights }
    }

    pub fn trivial(d: usize) -> Self {
        Self::diagonal(vec![Q::zero(); d])
    }

    /// Reuses an already inverted basis; `inverse` must be the inverse of `basis`.
    pub(crate) fn from_parts(basis: Arc<Matrix<F>>, inverse: Arc<Matrix<F>>, weights: Vec<Q>) -> Self {
        debug_assert_eq!(basis.cols(), weights.len());
        DiagNorm { basis, inverse, weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn vector(&self, i: usize) -> Vec<F> {
        self.basis.column(i)
    }

    pub fn vectors(&self) -> Vec<Vec<F>> {
        self.basis.columns()
    }

    pub fn coordinates(&self, v: &[F]) -> Result<Vec<F>> {
        self.inverse.mul_vec(v)
    }

    /// `-log` of the norm of `v`; `+inf` exactly for `v = 0`.
    pub fn evaluate(&self, v: &[F]) -> Result<Valuation> {
        let a = self.coordinates(v)?;
        Ok(a.iter()
            .zip(&self.weights)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, w)| x.valuation().plus(w))
            .min()
            .unwrap_or(Valuation::Infinite))
    }

    /// `self ≤ other` pointwise as norms, i.e. `evaluate(self) ≥ evaluate(other)` everywhere.
    ///
    /// By the ultrametric inequality it suffices to test on a diagonal basis of `other`.
    pub fn le(&self, other: &DiagNorm<F>) -> Result<bool> {
        self.check_dim(other)?;
        for (i, w) in other.weights.iter().enumerate() {
            if self.evaluate(&other.vector(i))? < Valuation::Finite(w.clone()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn norm_eq(&self, other: &DiagNorm<F>) -> Result<bool> {
        Ok(self.le(other)? && other.le(self)?)
    }

    fn check_dim(&self, other: &DiagNorm<F>) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    fn same_basis(&self, other: &DiagNorm<F>) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis
    }

    pub fn with_weights(&self, weights: Vec<Q>) -> Result<Self> {
        if weights.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: weights.len() });
        }
        Ok(Self::from_parts(self.basis.clone(), self.inverse.clone(), weights))
    }

    /// Adds `c` to every weight (rescales the norm by `e^{-c}`).
    pub fn shift(&self, c: &Q) -> Self {
        let w = self.weights.iter().map(|x| x + c).collect();
        Self::from_parts(self.basis.clone(), self.inverse.clone(), w)
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> =
            self.vectors().iter().map(|v| Value::Array(v.iter().map(|x| x.to_scalar().to_json()).collect())).collect();
        json!({ "dim": self.dim(), "basis": basis, "weights": rational::qvec_to_json(&self.weights) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let weights =
            rational::qvec_from_json(v.get("weights").ok_or_else(|| Error::Parse("norm needs \"weights\"".into()))?)?;
        let d = weights.len();
        if let Some(dim) = v.get("dim") {
            let dim = dim.as_u64().ok_or_else(|| Error::Parse("\"dim\" must be an integer".into()))?;
            if dim as usize != d {
                return Err(Error::DimensionMismatch { expected: dim as usize, got: d });
            }
        }
        let Some(basis) = v.get("basis") else {
            return Ok(Self::diagonal(weights));
        };
        let rows = basis.as_array().ok_or_else(|| Error::Parse("\"basis\" must be an array".into()))?;
        let mut vectors = Vec::with_capacity(rows.len());
        for row in rows {
            let items = row.as_array().ok_or_else(|| Error::Parse("basis vector must be an array".into()))?;
            let vec = items.iter().map(|s| F::from_scalar(&Scalar::from_json(s)?)).collect::<Result<Vec<F>>>()?;
            vectors.push(vec);
        }
        if vectors.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: vectors.len() });
        }
        Self::from_vectors(&vectors, weights)
    }
}

/// A norm over either backend, as read from JSON.
#[derive(Clone, Debug)]
pub enum AnyNorm {
    Q(DiagNorm<Q>),
    T(DiagNorm<RatFunc>),
}

impl AnyNorm {
    pub fn from_json(v: &Value) -> Result<Self> {
        let tadic = v
            .get("basis")
            .and_then(|b| b.as_array())
            .and_then(|rows| rows.iter().flat_map(|r| r.as_array().into_iter().flatten()).next())
            .is_some_and(|s| s.get("t").is_some());
        if tadic {
            Ok(AnyNorm::T(DiagNorm::from_json(v)?))
        } else {
            Ok(AnyNorm::Q(DiagNorm::from_json(v)?))
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            AnyNorm::Q(_) => Backend::TrivialQ,
            AnyNorm::T(_) => Backend::TAdic,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyNorm::Q(n) => n.to_json(),
            AnyNorm::T(n) => n.to_json(),
        }
    }
}

/// A basis diagonalizing two norms simultaneously, with the weights of each.
#[derive(Clone, Debug)]
pub struct Codiagonal<F: Field> {
    pub basis: Arc<Matrix<F>>,
    pub inverse: Arc<Matrix<F>>,
    pub weights0: Vec<Q>,
    pub weights1: Vec<Q>,
}

impl<F: Field> Codiagonal<F> {
    pub fn first(&self) -> DiagNorm<F> {
        DiagNorm::from_parts(self.basis.clone(), self.inverse.clone(), self.weights0.clone())
    }

    pub fn second(&self) -> DiagNorm<F> {
        DiagNorm::from_parts(self.basis.clone(), self.inverse.clone(), self.weights1.clone())
    }
}

pub fn codiagonalize<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Result<Codiagonal<F>> {
    n0.check_dim(n1)?;
    if n0.same_basis(n1) {
        return Ok(Codiagonal {
            basis: n0.basis.clone(),
            inverse: n0.inverse.clone(),
            weights0: n0.weights.clone(),
            weights1: n1.weights.clone(),
        });
    }
    let triples = match F::backend() {
        Backend::TrivialQ => split_filtrations(n0, n1),
        Backend::TAdic => lattice_codiagonal(n0, n1)?,
    };
    finish_codiagonal(triples)
}

/// Normalizes each vector to leading coefficient 1 and sorts by `(weight0, weight1)`.
fn finish_codiagonal<F: Field>(mut triples: Vec<(Vec<F>, Q, Q)>) -> Result<Codiagonal<F>> {
    for (v, w0, w1) in triples.iter_mut() {
        let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("zero basis vector");
        let shift = lead.valuation();
        let inv = F::one() / lead;
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        if let Some(s) = shift.finite() {
            *w0 -= s;
            *w1 -= s;
        }
    }
    triples.sort_by(|a, b| (&a.1, &a.2).cmp(&(&b.1, &b.2)));
    let cols: Vec<Vec<F>> = triples.iter().map(|t| t.0.clone()).collect();
    let basis = Matrix::from_columns(&cols)?;
    let inverse = basis.inverse()?;
    Ok(Codiagonal {
        basis: Arc::new(basis),
        inverse: Arc::new(inverse),
        weights0: triples.iter().map(|t| t.1.clone()).collect(),
        weights1: triples.iter().map(|t| t.2.clone()).collect(),
    })
}

fn jumps(w: &[Q]) -> Vec<Q> {
    let mut j = w.to_vec();
    j.sort_by(|a, b| b.cmp(a));
    j.dedup();
    j
}

/// `{v : -log n(v) ≥ s}` (or `> s` when `strict`), a subspace for trivially valued fields.
fn filtration_step<F: Field>(n: &DiagNorm<F>, s: &Q, strict: bool) -> Subspace<F> {
    let vecs: Vec<Vec<F>> = (0..n.dim())
        .filter(|&i| match n.weights[i].cmp(s) {
            Ordering::Greater => true,
            Ordering::Equal => !strict,
            Ordering::Less => false,
        })
        .map(|i| n.vector(i))
        .collect();
    Subspace::span(n.dim(), &vecs)
}

/// Common splitting of the two filtrations, larger jumps first.
fn split_filtrations<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Vec<(Vec<F>, Q, Q)> {
    let d = n0.dim();
    let mut out = Vec::with_capacity(d);
    let j0 = jumps(&n0.weights);
    let j1 = jumps(&n1.weights);
    let f: Vec<(Subspace<F>, Subspace<F>)> =
        j0.iter().map(|s| (filtration_step(n0, s, false), filtration_step(n0, s, true))).collect();
    let g: Vec<(Subspace<F>, Subspace<F>)> =
        j1.iter().map(|t| (filtration_step(n1, t, false), filtration_step(n1, t, true))).collect();
    for (s, (fs, fs_strict)) in j0.iter().zip(&f) {
        for (t, (gt, gt_strict)) in j1.iter().zip(&g) {
            let cell = fs.intersect(gt);
            if cell.dim() == 0 {
                continue;
            }
            let lower = fs_strict.intersect(gt).sum(&fs.intersect(gt_strict));
            if lower.dim() == cell.dim() {
                continue;
            }
            for v in lower.extend_with(cell.basis()) {
                out.push((v, s.clone(), t.clone()));
            }
            if out.len() == d {
                return out;
            }
        }
    }
    out
}

fn integer_weights(w: &[Q]) -> Result<Vec<i64>> {
    w.iter()
        .map(|q| {
            if !rational::is_integer(q) {
                return Err(Error::Unsupported(format!("t-adic codiagonalization needs integer weights, got {q}")));
            }
            num_traits::ToPrimitive::to_i64(&q.to_integer())
                .ok_or_else(|| Error::Unsupported(format!("weight {q} out of range")))
        })
        .collect()
}

/// Unit-ball lattice basis `B · diag(t^{-α})`.
fn lattice<F: Field>(n: &DiagNorm<F>) -> Result<Matrix<F>> {
    let w = integer_weights(&n.weights)?;
    let mut scale = Vec::with_capacity(w.len());
    for e in w {
        scale.push(F::uniformizer_pow(-e).ok_or_else(|| Error::Unsupported("no uniformizer".into()))?);
    }
    n.basis.mul(&Matrix::diagonal(&scale))
}

/// Codiagonalization of two lattice norms via Smith form of the relative change of basis.
fn lattice_codiagonal<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Result<Vec<(Vec<F>, Q, Q)>> {
    let m0 = lattice(n0)?;
    let m1 = lattice(n1)?;
    let c = m0.inverse()?.mul(&m1)?;
    let snf = smith_dvr(&c)?;
    let s = m0.mul(&snf.u)?;
    Ok(snf.exponents.iter().enumerate().map(|(i, &e)| (s.column(i), Q::zero(), rational::int(-e))).collect())
}

/// Increasingly sorted relative spectrum `λ_i = α⁰_i − α¹_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    values: Vec<Q>,
}

/// Exponent of a `d_p` distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => match other.parse::<u32>() {
                Ok(p) if p >= 1 => Ok(Exponent::Finite(p)),
                _ => Err(Error::OutOfRange(format!("exponent must be an integer ≥ 1 or inf, got {s:?}"))),
            },
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Spectrum {
    pub fn from_weights(w0: &[Q], w1: &[Q]) -> Self {
        let mut values: Vec<Q> = w0.iter().zip(w1).map(|(a, b)| a - b).collect();
        values.sort();
        Spectrum { values }
    }

    pub fn from_values(mut values: Vec<Q>) -> Self {
        values.sort();
        Spectrum { values }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `d⁻¹ Σ|λ|^p` for finite `p` (the `p`-th power of `d_p`), `max |λ|` for `p = ∞`.
    pub fn distance(&self, p: Exponent) -> Q {
        match p {
            Exponent::Finite(p) => {
                if self.values.is_empty() {
                    return Q::zero();
                }
                let s: Q = self.values.iter().map(|l| rational::abs_pow(l, p)).sum();
                s / rational::int(self.values.len() as i64)
            }
            Exponent::Infinity => self.values.iter().map(|l| l.abs()).max().unwrap_or_else(Q::zero),
        }
    }

    pub fn volume(&self) -> Q {
        self.values.iter().sum()
    }
}

pub fn spectrum<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Result<Spectrum> {
    let c = codiagonalize(n0, n1)?;
    Ok(Spectrum::from_weights(&c.weights0, &c.weights1))
}

pub fn distance<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>, p: Exponent) -> Result<Q> {
    Ok(spectrum(n0, n1)?.distance(p))
}

pub fn volume<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Result<Q> {
    Ok(spectrum(n0, n1)?.volume())
}

/// The max norm `‖·‖₀ ∨ ‖·‖₁`.
pub fn join<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Result<DiagNorm<F>> {
    let c = codiagonalize(n0, n1)?;
    let w = c.weights0.iter().zip(&c.weights1).map(|(a, b)| a.min(b).clone()).collect();
    Ok(DiagNorm::from_parts(c.basis, c.inverse, w))
}

/// Determinant norm on `Λ^d F^d ≅ F`, diagonal on `s_1 ∧ … ∧ s_d`.
pub fn det<F: Field>(n: &DiagNorm<F>) -> Result<DiagNorm<F>> {
    let d = n.basis.det()?;
    let w: Q = n.weights.iter().sum();
    DiagNorm::new(Matrix::from_rows(&[vec![d]])?, vec![w])
}

/// Exponent vectors of degree-`m` monomials in `d` variables, lexicographically decreasing
/// (`x_1^m` first).
pub fn monomial_exponents(d: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, m: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == d {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=m).rev() {
            prefix.push(e);
            rec(d, m - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        if m == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(d, m, &mut Vec::new(), &mut out);
    out
}

/// Polynomial in `d` variables as a coefficient vector over [`monomial_exponents`].
fn expand_product<F: Field>(
    factors: &[Vec<F>],
    d: usize,
    index: &std::collections::HashMap<Vec<usize>, usize>,
) -> Vec<F> {
    let mut terms: Vec<(Vec<usize>, F)> = vec![(vec![0; d], F::one())];
    for f in factors {
        let mut next: std::collections::BTreeMap<Vec<usize>, F> = std::collections::BTreeMap::new();
        for (e, c) in &terms {
            for (j, x) in f.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[j] += 1;
                let add = c.clone() * x.clone();
                let slot = next.entry(e2).or_insert_with(F::zero);
                *slot = slot.clone() + add;
            }
        }
        terms = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    let mut out = vec![F::zero(); index.len()];
    for (e, c) in terms {
        out[index[&e]] = c;
    }
    out
}

/// `m`-th symmetric power, diagonal on the monomials `s^I` with weights `Σ_{j∈I} α_j`.
/// Coordinates are taken in the monomial basis of [`monomial_exponents`]`(d, m)`.
pub fn sym<F: Field>(n: &DiagNorm<F>, m: usize) -> Result<DiagNorm<F>> {
    let d = n.dim();
    let exps = monomial_exponents(d, m);
    let index: std::collections::HashMap<Vec<usize>, usize> =
        exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let vectors = n.vectors();
    let mut cols = Vec::with_capacity(exps.len());
    let mut weights = Vec::with_capacity(exps.len());
    for e in &exps {
        let factors: Vec<Vec<F>> =
            e.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(vectors[j].clone(), k)).collect();
        cols.push(expand_product(&factors, d, &index));
        weights.push(e.iter().zip(&n.weights).map(|(&k, w)| w * rational::int(k as i64)).sum());
    }
    DiagNorm::from_vectors(&cols, weights)
}

/// Tensor product norm on `F^d ⊗ F^e` (coordinates `i·e + j`), diagonal on `s_i ⊗ s'_j`.
pub fn tensor<F: Field>(a: &DiagNorm<F>, b: &DiagNorm<F>) -> Result<DiagNorm<F>> {
    let (va, vb) = (a.vectors(), b.vectors());
    let mut cols = Vec::with_capacity(va.len() * vb.len());
    let mut weights = Vec::with_capacity(va.len() * vb.len());
    for (x, wa) in va.iter().zip(&a.weights) {
        for (y, wb) in vb.iter().zip(&b.weights) {
            cols.push(x.iter().flat_map(|p| y.iter().map(move |q| p.clone() * q.clone())).collect());
            weights.push(wa + wb);
        }
    }
    DiagNorm::from_vectors(&cols, weights)
}

/// Quotient norm on `F^d / W`, identified with `F^{d-r}` through [`QuotientNorm::projection`].
#[derive(Clone, Debug)]
pub struct QuotientNorm<F: Field> {
    pub norm: DiagNorm<F>,
    /// `(d-r) x d` matrix with kernel exactly `W`.
    pub projection: Matrix<F>,
}

impl<F: Field> QuotientNorm<F> {
    pub fn project(&self, v: &[F]) -> Result<Vec<F>> {
        self.projection.mul_vec(v)
    }
}

/// Linear map `F^d → F^{d-r}` with kernel `W`: reduce by the echelon basis of `W`, keep non-pivot coordinates.
fn quotient_projection<F: Field>(w: &Subspace<F>) -> Matrix<F> {
    let d = w.ambient();
    let free: Vec<usize> = (0..d).filter(|c| !w.pivots().contains(c)).collect();
    let mut p = Matrix::zeros(free.len(), d);
    for (r, &f) in free.iter().enumerate() {
        p[(r, f)] = F::one();
        for (b, &piv) in w.basis().iter().zip(w.pivots()) {
            // coordinate f of (v - Σ v_piv b) picks up -b_f from v_piv
            if !b[f].is_zero() {
                p[(r, piv)] = p[(r, piv)].clone() - b[f].clone();
            }
        }
    }
    p
}

pub fn quotient<F: Field>(n: &DiagNorm<F>, spanning: &[Vec<F>]) -> Result<QuotientNorm<F>> {
    let d = n.dim();
    for v in spanning {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
    }
    let w = Subspace::span(d, spanning);
    if spanning.is_empty() || w.dim() == 0 {
        return Err(Error::BadSubspace("quotient needs a nonzero spanning set".into()));
    }
    let projection = quotient_projection(&w);
    let adapted: Vec<(Vec<F>, Q, bool)> = match F::backend() {
        Backend::TrivialQ => {
            let mut vecs = w.basis().to_vec();
            let mut aux_w = vec![rational::int(1); vecs.len()];
            for v in w.extend_with(&Matrix::<F>::identity(d).columns()) {
                vecs.push(v);
                aux_w.push(Q::zero());
            }
            let aux = DiagNorm::from_vectors(&vecs, aux_w)?;
            let c = codiagonalize(n, &aux)?;
            (0..d).map(|i| (c.basis.column(i), c.weights0[i].clone(), c.weights1[i] > Q::zero())).collect()
        }
        Backend::TAdic => {
            let m = lattice(n)?;
            let x = m.inverse()?.mul(&Matrix::from_columns(w.basis())?)?;
            let snf = smith_dvr(&x)?;
            let s = m.mul(&snf.u)?;
            (0..d).map(|i| (s.column(i), Q::zero(), i < w.dim())).collect()
        }
    };
    let mut cols = Vec::with_capacity(d - w.dim());
    let mut weights = Vec::with_capacity(d - w.dim());
    for (v, wt, in_w) in adapted {
        if !in_w {
            cols.push(projection.mul_vec(&v)?);
            weights.push(wt);
        }
    }
    if cols.len() != d - w.dim() {
        return Err(Error::Inconsistent("adapted basis does not split the subspace".into()));
    }
    let norm = if cols.is_empty() { DiagNorm::diagonal(vec![]) } else { DiagNorm::from_vectors(&cols, weights)? };
    Ok(QuotientNorm { norm, projection })
}

/// Functorial constructions, for dispatch from configuration files.
#[derive(Clone, Debug)]
pub enum Functorial<F: Field> {
    Det,
    Sym(usize),
    Quotient(Vec<Vec<F>>),
    Tensor(DiagNorm<F>),
}

pub fn functorial<F: Field>(n: &DiagNorm<F>, kind: &Functorial<F>) -> Result<DiagNorm<F>> {
    match kind {
        Functorial::Det => det(n),
        Functorial::Sym(m) => sym(n, *m),
        Functorial::Quotient(w) => Ok(quotient(n, w)?.norm),
        Functorial::Tensor(o) => tensor(n, o),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Poly;
    use crate::rational::{frac, int};
    use num_traits::One;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn cross_pair() -> (DiagNorm<Q>, DiagNorm<Q>) {
        let n0 = DiagNorm::diagonal(qv(&[0, 1]));
        let n1 = DiagNorm::from_vectors(&[qv(&[1, 1]), qv(&[1, 0])], qv(&[0, 1])).unwrap();
        (n0, n1)
    }

    #[test]
    fn evaluate_examples() {
        let t = DiagNorm::<Q>::trivial(2);
        assert_eq!(t.evaluate(&qv(&[1, 5])).unwrap(), Valuation::zero());
        let n = DiagNorm::<Q>::diagonal(qv(&[0, 1]));
        assert_eq!(n.evaluate(&qv(&[0, 1])).unwrap(), Valuation::Finite(int(1)));
        assert_eq!(n.evaluate(&qv(&[1, 1])).unwrap(), Valuation::zero());
        assert_eq!(n.evaluate(&qv(&[0, 0])).unwrap(), Valuation::Infinite);
        assert!(matches!(n.evaluate(&qv(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn codiagonalize_identity_case() {
        let t = DiagNorm::<Q>::trivial(3);
        let c = codiagonalize(&t, &t).unwrap();
        assert_eq!(c.weights0, qv(&[0, 0, 0]));
        assert_eq!(c.weights1, qv(&[0, 0, 0]));
    }

    #[test]
    fn codiagonalize_cross_basis() {
        let (n0, n1) = cross_pair();
        let c = codiagonalize(&n0, &n1).unwrap();
        assert_eq!(c.basis.columns(), vec![qv(&[1, 0]), qv(&[0, 1])]);
        assert_eq!(c.weights0, qv(&[0, 1]));
        assert_eq!(c.weights1, qv(&[1, 0]));
        for i in 0..2 {
            let v = c.basis.column(i);
            assert_eq!(n0.evaluate(&v).unwrap(), Valuation::Finite(c.weights0[i].clone()));
            assert_eq!(n1.evaluate(&v).unwrap(), Valuation::Finite(c.weights1[i].clone()));
        }
        assert!(c.first().norm_eq(&n0).unwrap());
        assert!(c.second().norm_eq(&n1).unwrap());
    }

    #[test]
    fn codiagonalize_tadic_lattice() {
        let t = RatFunc::t();
        let (o, z) = (RatFunc::one(), RatFunc::zero());
        let n0 = DiagNorm::<RatFunc>::trivial(2);
        let n1 = DiagNorm::from_vectors(&[vec![t, z.clone()], vec![z, o]], qv(&[0, 0])).unwrap();
        let c = codiagonalize(&n0, &n1).unwrap();
        assert_eq!(
            c.basis.columns(),
            vec![vec![RatFunc::one(), RatFunc::zero()], vec![RatFunc::zero(), RatFunc::one()]]
        );
        assert_eq!(c.weights0, qv(&[0, 0]));
        assert_eq!(c.weights1, qv(&[-1, 0]));
        assert!(c.second().norm_eq(&n1).unwrap());
        assert_eq!(spectrum(&n0, &n1).unwrap().values(), &qv(&[0, 1])[..]);
    }

    #[test]
    fn tadic_rejects_fractional_weights() {
        let t = RatFunc::t();
        let (o, z) = (RatFunc::one(), RatFunc::zero());
        let n0 = DiagNorm::<RatFunc>::diagonal(vec![frac(1, 2), int(0)]);
        let n1 = DiagNorm::from_vectors(&[vec![t, o.clone()], vec![z, o]], qv(&[0, 0])).unwrap();
        assert!(matches!(codiagonalize(&n0, &n1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tadic_valuation_enters_evaluate() {
        let n = DiagNorm::<RatFunc>::trivial(2);
        let v = vec![RatFunc::t_pow(2), RatFunc::from_poly(Poly::from_i64(&[0, 3, 1]))];
        assert_eq!(n.evaluate(&v).unwrap(), Valuation::Finite(int(1)));
    }

    #[test]
    fn spectrum_distance_volume_examples() {
        let n0 = DiagNorm::<Q>::diagonal(qv(&[0, 0]));
        let n1 = DiagNorm::<Q>::diagonal(qv(&[1, 2]));
        assert_eq!(spectrum(&n0, &n0).unwrap().values(), &qv(&[0, 0])[..]);
        assert_eq!(spectrum(&n0, &n1).unwrap().values(), &qv(&[-2, -1])[..]);
        assert_eq!(distance(&n0, &n1, Exponent::Finite(1)).unwrap(), frac(3, 2));
        assert_eq!(distance(&n0, &n1, Exponent::Infinity).unwrap(), int(2));
        assert_eq!(distance(&n0, &n0, Exponent::Finite(1)).unwrap(), int(0));
        assert_eq!(volume(&n0, &n1).unwrap(), int(-3));
        assert_eq!(volume(&n1, &n1).unwrap(), int(0));
        let (a, b) = cross_pair();
        assert_eq!(spectrum(&a, &b).unwrap().values(), &qv(&[-1, 1])[..]);
    }

    #[test]
    fn join_examples() {
        let n = DiagNorm::<Q>::diagonal(qv(&[0, 3]));
        assert!(join(&n, &n).unwrap().norm_eq(&n).unwrap());
        let m = DiagNorm::<Q>::diagonal(qv(&[2, 1]));
        assert_eq!(join(&n, &m).unwrap().weights(), &qv(&[0, 1])[..]);
        let (a, b) = cross_pair();
        let j = join(&a, &b).unwrap();
        assert_eq!(j.weights(), &qv(&[0, 0])[..]);
        assert_eq!(j.vectors(), vec![qv(&[1, 0]), qv(&[0, 1])]);
    }

    #[test]
    fn functorial_examples() {
        let n = DiagNorm::<Q>::diagonal(qv(&[1, 2, 3]));
        assert_eq!(det(&n).unwrap().weights(), &qv(&[6])[..]);
        let s = sym(&DiagNorm::<Q>::diagonal(qv(&[0, 1])), 2).unwrap();
        assert_eq!(s.weights(), &qv(&[0, 1, 2])[..]);
        assert_eq!(s.vectors(), vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1])]);
        let q = quotient(&DiagNorm::<Q>::trivial(2), &[qv(&[1, 1])]).unwrap();
        assert_eq!(q.norm.dim(), 1);
        assert_eq!(q.norm.weights(), &qv(&[0])[..]);
        assert_eq!(q.project(&qv(&[1, 1])).unwrap(), qv(&[0]));
        assert!(matches!(quotient(&n, &[qv(&[0, 0, 0])]), Err(Error::BadSubspace(_))));
        let t = tensor(&DiagNorm::<Q>::diagonal(qv(&[0, 1])), &DiagNorm::<Q>::diagonal(qv(&[2, 5]))).unwrap();
        assert_eq!(t.weights(), &qv(&[2, 5, 3, 6])[..]);
    }

    #[test]
    fn sym_in_a_skew_basis() {
        let n = DiagNorm::from_vectors(&[qv(&[1, 1]), qv(&[0, 1])], qv(&[3, 0])).unwrap();
        let s = sym(&n, 2).unwrap();
        // (e1 + e2)^2 = x1^2 + 2 x1 x2 + x2^2
        assert_eq!(s.vector(0), qv(&[1, 2, 1]));
        assert_eq!(s.weights(), &qv(&[6, 3, 0])[..]);
    }

    #[test]
    fn quotient_by_heavy_line() {
        // W = span(e2) carries weight 0; e1 + e2 has weight 5: coset of e1 has best rep e1 + e2.
        let n = DiagNorm::from_vectors(&[qv(&[1, 1]), qv(&[0, 1])], qv(&[5, 0])).unwrap();
        let q = quotient(&n, &[qv(&[0, 1])]).unwrap();
        assert_eq!(q.norm.weights(), &qv(&[5])[..]);
    }

    #[test]
    fn quotient_tadic() {
        let t = RatFunc::t();
        let (o, z) = (RatFunc::one(), RatFunc::zero());
        // unit ball spanned by t^2 e1 and e2; quotient by span(e1 + t e2)
        let n =
            DiagNorm::from_vectors(&[vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]], qv(&[-2, 0])).unwrap();
        let q = quotient(&n, &[vec![o.clone(), t.clone()]]).unwrap();
        let img = q.project(&[z.clone(), o.clone()]).unwrap();
        let brute = (-4..=4)
            .map(|e| {
                let c = RatFunc::t_pow(e);
                n.evaluate(&[c.clone(), o.clone() + c * t.clone()]).unwrap()
            })
            .chain(std::iter::once(n.evaluate(&[z.clone(), o.clone()]).unwrap()))
            .max()
            .unwrap();
        assert_eq!(q.norm.evaluate(&img).unwrap(), brute);
    }

    #[test]
    fn json_round_trip() {
        let (_, b) = cross_pair();
        let j = b.to_json();
        let back = DiagNorm::<Q>::from_json(&j).unwrap();
        assert!(back.norm_eq(&b).unwrap());
        assert!(matches!(AnyNorm::from_json(&j).unwrap(), AnyNorm::Q(_)));
    }
}
