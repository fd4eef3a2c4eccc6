//! Dense exact linear algebra over a [`Field`]: row reduction, subspaces, and the
//! Smith normal form over the valuation ring of a discretely valued field.

use std::fmt;

use crate::field::{Field, Valuation};
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<F>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn diagonal(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: o.rows });
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += f * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, f: &F) {
        for c in 0..self.cols {
            let s = self[(src, c)].clone();
            if !s.is_zero() {
                self[(dst, c)] = self[(dst, c)].clone() + f.clone() * s;
            }
        }
    }

    /// `col[dst] += f * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, f: &F) {
        for r in 0..self.rows {
            let s = self[(r, src)].clone();
            if !s.is_zero() {
                self[(r, dst)] = self[(r, dst)].clone() + s * f.clone();
            }
        }
    }

    fn scale_row(&mut self, r: usize, f: &F) {
        for c in 0..self.cols {
            if !self[(r, c)].is_zero() {
                self[(r, c)] = self[(r, c)].clone() * f.clone();
            }
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = F::one() / m[(r, c)].clone();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = -m[(i, c)].clone();
                    m.add_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(F::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = -(m[(i, c)].clone() / piv.clone());
                    m.add_row(i, c, &f);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix<F>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = F::one();
        }
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::SingularBasis);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Ok(inv)
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<F>> {
        let (red, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (r, &p) in piv.iter().enumerate() {
                    x[p] = -red[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Matrix<F> {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m[(r, j)] = self[(r, c)].clone();
            }
        }
        m
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

/// Linear subspace of `F^n`, stored as the nonzero rows of a reduced row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &Matrix::<F>::identity(ambient).row_vecs())
    }

    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors).expect("ragged vectors");
        let (red, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, o: &Subspace<F>) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace<F>) -> Subspace<F> {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Self::span(self.ambient, &all)
    }

    pub fn intersect(&self, o: &Subspace<F>) -> Subspace<F> {
        if self.dim() == 0 || o.dim() == 0 {
            return Self::zero(self.ambient);
        }
        if self.dim() == self.ambient {
            return o.clone();
        }
        if o.dim() == o.ambient {
            return self.clone();
        }
        // x A = y B  with x, y coefficient rows  <=>  [A; -B]^T (x, y)^T = 0
        let a = self.dim();
        let mut cols: Vec<Vec<F>> = self.basis.clone();
        cols.extend(o.basis.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let system = Matrix::from_columns(&cols).expect("ragged");
        let vecs: Vec<Vec<F>> = system
            .null_space()
            .into_iter()
            .map(|coef| {
                let mut v = vec![F::zero(); self.ambient];
                for (c, b) in coef[..a].iter().zip(&self.basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = x.clone() + c.clone() * y.clone();
                    }
                }
                v
            })
            .collect();
        Self::span(self.ambient, &vecs)
    }

    /// Vectors from `candidates` that extend `self` to a basis of `self + span(candidates)`.
    pub fn extend_with(&self, candidates: &[Vec<F>]) -> Vec<Vec<F>> {
        let mut cur = self.clone();
        let mut out = Vec::new();
        for c in candidates {
            if !cur.contains(c) {
                out.push(c.clone());
                cur = cur.sum(&Subspace::span(self.ambient, std::slice::from_ref(c)));
            }
        }
        out
    }
}

/// Smith form `C = U · diag(t^{e_i}) · V` with `U, V` invertible over the valuation ring.
#[derive(Clone, Debug)]
pub struct SmithForm<F: Field> {
    /// `C = U · D · V` with `D` the `rows x cols` diagonal of `t^{exponents}`.
    pub u: Matrix<F>,
    pub exponents: Vec<i64>,
    pub v: Matrix<F>,
}

/// Smith normal form over the valuation ring of a discretely valued field of a
/// matrix of full column rank with at least as many rows as columns (entries may
/// have negative valuation). `u` is `rows x rows`, `v` is `cols x cols`.
pub fn smith_dvr<F: Field>(c: &Matrix<F>) -> Result<SmithForm<F>> {
    if c.rows() < c.cols() {
        return Err(Error::DimensionMismatch { expected: c.rows(), got: c.cols() });
    }
    let (rows, cols) = (c.rows(), c.cols());
    // Maintain  L · C · R = D  with L, R invertible over the valuation ring.
    let mut d = c.clone();
    let mut l = Matrix::<F>::identity(rows);
    let mut r = Matrix::<F>::identity(cols);
    let mut exps = Vec::with_capacity(cols);
    for k in 0..cols {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = d[(i, j)].valuation();
                if !v.is_infinite() && best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else {
            return Err(Error::SingularBasis);
        };
        d.swap_rows(k, pi);
        l.swap_rows(k, pi);
        d.swap_cols(k, pj);
        r.swap_cols(k, pj);
        let piv = d[(k, k)].clone();
        for i in k + 1..rows {
            if !d[(i, k)].is_zero() {
                let f = -(d[(i, k)].clone() / piv.clone());
                d.add_row(i, k, &f);
                l.add_row(i, k, &f);
            }
        }
        for j in k + 1..cols {
            if !d[(k, j)].is_zero() {
                let f = -(d[(k, j)].clone() / piv.clone());
                d.add_col(j, k, &f);
                r.add_col(j, k, &f);
            }
        }
        let e = val
            .finite()
            .filter(|q| crate::rational::is_integer(q))
            .and_then(|q| num_traits::ToPrimitive::to_i64(&q.to_integer()))
            .ok_or_else(|| Error::Unsupported("non-discrete valuation in Smith form".into()))?;
        let target = F::uniformizer_pow(e)
            .ok_or_else(|| Error::Unsupported("Smith form needs a discretely valued backend".into()))?;
        let unit = target / piv;
        d.scale_row(k, &unit);
        l.scale_row(k, &unit);
        exps.push(e);
    }
    // C = L^{-1} D R^{-1}
    Ok(SmithForm { u: l.inverse()?, exponents: exps, v: r.inverse()? })
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Poly, RatFunc};
    use crate::rational::{frac, int, Q};
    use num_traits::{One, Zero};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let a = qm(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det().unwrap(), int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(qm(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::SingularBasis));
        assert_eq!(qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]).det().unwrap(), int(-3));
    }

    #[test]
    fn subspace_ops() {
        let x = Subspace::span(3, &[vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]]);
        let y = Subspace::span(3, &[vec![int(0), int(1), int(1)], vec![int(1), int(1), int(0)]]);
        let z = x.intersect(&y);
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&[int(1), int(1), int(0)]));
        assert_eq!(x.sum(&y).dim(), 3);
        assert!(!x.contains(&[int(0), int(0), frac(1, 2)]));
    }

    #[test]
    fn smith_of_diag_t() {
        let t = RatFunc::t();
        let c = Matrix::from_rows(&[vec![t.clone(), RatFunc::zero()], vec![RatFunc::zero(), RatFunc::one()]]).unwrap();
        let s = smith_dvr(&c).unwrap();
        let mut e = s.exponents.clone();
        e.sort();
        assert_eq!(e, vec![0, 1]);
        let d = Matrix::diagonal(&s.exponents.iter().map(|&x| RatFunc::t_pow(x)).collect::<Vec<_>>());
        assert_eq!(s.u.mul(&d).unwrap().mul(&s.v).unwrap(), c);
    }

    #[test]
    fn smith_mixed_valuations() {
        let f = |n: &[i64], d: &[i64]| RatFunc::new(Poly::from_i64(n), Poly::from_i64(d)).unwrap();
        let c = Matrix::from_rows(&[
            vec![f(&[0, 1], &[1]), f(&[1], &[0, 1])],
            vec![f(&[1, 1], &[1]), f(&[0, 0, 2], &[1, -1])],
        ])
        .unwrap();
        let s = smith_dvr(&c).unwrap();
        for x in [&s.u, &s.v] {
            for i in 0..2 {
                for j in 0..2 {
                    assert!(x[(i, j)].valuation() >= Valuation::zero());
                }
            }
            assert_eq!(x.det().unwrap().valuation(), Valuation::zero());
        }
        let d = Matrix::diagonal(&s.exponents.iter().map(|&x| RatFunc::t_pow(x)).collect::<Vec<_>>());
        assert_eq!(s.u.mul(&d).unwrap().mul(&s.v).unwrap(), c);
    }
}
