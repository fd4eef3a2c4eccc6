//! Exact two-phase simplex method over the rationals (dense tableau, Bland's rule).

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// A linear constraint `a · x (≤ | ≥ | =) b`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub a: Vec<Q>,
    pub cmp: Cmp,
    pub b: Q,
}

impl Constraint {
    pub fn le(a: Vec<Q>, b: Q) -> Self {
        Constraint { a, cmp: Cmp::Le, b }
    }
    pub fn ge(a: Vec<Q>, b: Q) -> Self {
        Constraint { a, cmp: Cmp::Ge, b }
    }
    pub fn eq(a: Vec<Q>, b: Q) -> Self {
        Constraint { a, cmp: Cmp::Eq, b }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Q>,
        value: Q,
    },
    Infeasible,
    /// The objective grows without bound along `point + λ·direction`, `λ ≥ 0`.
    Unbounded {
        point: Vec<Q>,
        direction: Vec<Q>,
    },
}

/// Linear program over free variables `x ∈ Q^n`.
#[derive(Clone, Debug)]
pub struct Lp {
    n: usize,
    constraints: Vec<Constraint>,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            let inv = Q::one() / p;
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · x` over the current feasible basis, entering only `allowed` columns.
    fn optimize(&mut self, obj: &[Q], allowed: &[bool]) -> Step {
        loop {
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut r = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !obj[b].is_zero() && !self.rows[i][j].is_zero() {
                        r -= &obj[b] * &self.rows[i][j];
                    }
                }
                if r.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(Q, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((best, _, bidx)) => ratio < *best || (ratio == *best && self.basis[i] < *bidx),
                    };
                    if better {
                        leave = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match leave {
                None => return Step::Unbounded(j),
                Some((_, i, _)) => self.pivot(i, j),
            }
        }
    }

    fn value_of(&self, col: usize) -> Q {
        self.basis.iter().position(|&b| b == col).map_or_else(Q::zero, |i| self.rhs[i].clone())
    }
}

impl Lp {
    pub fn new(n: usize) -> Self {
        Lp { n, constraints: Vec::new() }
    }

    pub fn with_constraints(n: usize, constraints: Vec<Constraint>) -> Self {
        Lp { n, constraints }
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert_eq!(c.a.len(), self.n);
        self.constraints.push(c);
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn maximize(&self, obj: &[Q]) -> LpOutcome {
        self.solve(obj)
    }

    pub fn minimize(&self, obj: &[Q]) -> LpOutcome {
        let neg: Vec<Q> = obj.iter().map(|x| -x).collect();
        match self.solve(&neg) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        match self.solve(&vec![Q::zero(); self.n]) {
            LpOutcome::Optimal { x, .. } => Some(x),
            LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
        }
    }

    fn solve(&self, obj: &[Q]) -> LpOutcome {
        let n = self.n;
        let m = self.constraints.len();
        let n_slack = self.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
        // columns: x+ (n), x- (n), slacks, artificials (m)
        let art0 = 2 * n + n_slack;
        let cols = art0 + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut slack = 2 * n;
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![Q::zero(); cols];
            for (j, a) in c.a.iter().enumerate() {
                row[j] = a.clone();
                row[n + j] = -a;
            }
            match c.cmp {
                Cmp::Le => {
                    row[slack] = Q::one();
                    slack += 1;
                }
                Cmp::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            let mut b = c.b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            row[art0 + i] = Q::one();
            rows.push(row);
            rhs.push(b);
        }
        let mut tab = Tableau { rows, rhs, basis: (art0..art0 + m).collect(), cols };

        let mut phase1 = vec![Q::zero(); cols];
        for x in phase1[art0..].iter_mut() {
            *x = -Q::one();
        }
        let all = vec![true; cols];
        if let Step::Unbounded(_) = tab.optimize(&phase1, &all) {
            unreachable!("phase one is bounded");
        }
        if tab.rhs.iter().zip(&tab.basis).any(|(v, &b)| b >= art0 && v.is_positive()) {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-valued) artificials out of the basis
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art0 {
                if let Some(c) = (0..art0).find(|&c| !tab.rows[r][c].is_zero()) {
                    tab.pivot(r, c);
                } else {
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        let mut phase2 = vec![Q::zero(); cols];
        phase2[..n].clone_from_slice(obj);
        for j in 0..n {
            phase2[n + j] = -&obj[j];
        }
        let mut allowed = vec![true; cols];
        for a in allowed[art0..].iter_mut() {
            *a = false;
        }
        let step = tab.optimize(&phase2, &allowed);
        let point: Vec<Q> = (0..n).map(|j| tab.value_of(j) - tab.value_of(n + j)).collect();
        match step {
            Step::Optimal => {
                let value = crate::rational::dot(obj, &point);
                LpOutcome::Optimal { x: point, value }
            }
            Step::Unbounded(j) => {
                let mut d = vec![Q::zero(); cols];
                d[j] = Q::one();
                for (i, &b) in tab.basis.iter().enumerate() {
                    d[b] = -tab.rows[i][j].clone();
                }
                let direction = (0..n).map(|k| &d[k] - &d[n + k]).collect();
                LpOutcome::Unbounded { point, direction }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // max x + y  s.t. x + 2y ≤ 4, 3x + y ≤ 6, x, y ≥ 0
        let lp = Lp::with_constraints(
            2,
            vec![
                Constraint::le(qv(&[1, 2]), int(4)),
                Constraint::le(qv(&[3, 1]), int(6)),
                Constraint::ge(qv(&[1, 0]), int(0)),
                Constraint::ge(qv(&[0, 1]), int(0)),
            ],
        );
        match lp.maximize(&qv(&[1, 1])) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, frac(14, 5));
                assert_eq!(x, vec![frac(8, 5), frac(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = Lp::with_constraints(1, vec![Constraint::ge(qv(&[1]), int(2)), Constraint::le(qv(&[1]), int(1))]);
        assert_eq!(lp.maximize(&qv(&[1])), LpOutcome::Infeasible);
        let lp = Lp::with_constraints(2, vec![Constraint::ge(qv(&[1, -1]), int(-3))]);
        match lp.maximize(&qv(&[1, 0])) {
            LpOutcome::Unbounded { point, direction } => {
                assert!(crate::rational::dot(&qv(&[1, 0]), &direction) > int(0));
                for lam in [0, 1, 10] {
                    let p: Vec<Q> = point.iter().zip(&direction).map(|(a, b)| a + b * int(lam)).collect();
                    assert!(p[0].clone() - p[1].clone() >= int(-3));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x subject to x = y - 3, y ≥ -1  → x = -4
        let lp =
            Lp::with_constraints(2, vec![Constraint::eq(qv(&[1, -1]), int(-3)), Constraint::ge(qv(&[0, 1]), int(-1))]);
        match lp.minimize(&qv(&[1, 0])) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(-4)),
            other => panic!("{other:?}"),
        }
    }
}
