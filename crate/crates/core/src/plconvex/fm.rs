//! Fourier–Motzkin elimination with LP-based redundancy removal.

use num_traits::{Signed, Zero};

use super::lp::{Constraint, Lp, LpOutcome};
use super::polytope::HRep;
use crate::rational::Q;

/// Projects `{x : a·x ≤ b}` along coordinate `var`; the result lives in `dim − 1` coordinates.
///
/// Equalities are not supported here; callers encode them as two inequalities.
pub fn eliminate(h: &HRep, var: usize) -> HRep {
    let n = h.dim;
    let drop =
        |a: &[Q]| -> Vec<Q> { a.iter().enumerate().filter(|(i, _)| *i != var).map(|(_, x)| x.clone()).collect() };
    let mut out = HRep::new(n - 1);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut rows: Vec<(Vec<Q>, Q)> = h.ineqs.clone();
    for (a, b) in &h.eqs {
        rows.push((a.clone(), b.clone()));
        rows.push((a.iter().map(|x| -x).collect(), -b));
    }
    for (a, b) in rows {
        let c = a[var].clone();
        if c.is_zero() {
            out.ineqs.push((drop(&a), b));
        } else if c.is_positive() {
            upper.push((a, b, c));
        } else {
            lower.push((a, b, c));
        }
    }
    for (au, bu, cu) in &upper {
        for (al, bl, cl) in &lower {
            // (−cl)·(au, bu) + cu·(al, bl) cancels var
            let s = -cl;
            let a: Vec<Q> = au.iter().zip(al).map(|(x, y)| &s * x + cu * y).collect();
            let b = &s * bu + cu * bl;
            out.ineqs.push((drop(&a), b));
        }
    }
    remove_redundant(&out)
}

/// Drops trivially true rows, duplicates, and rows implied by the remaining ones.
pub fn remove_redundant(h: &HRep) -> HRep {
    let n = h.dim;
    let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
    for (a, b) in &h.ineqs {
        if a.iter().all(|x| x.is_zero()) {
            if b.is_negative() {
                // infeasible system: keep a witness row
                return HRep { dim: n, ineqs: vec![(a.clone(), b.clone())], eqs: h.eqs.clone() };
            }
            continue;
        }
        let (a, b) = normalize(a, b);
        if !rows.contains(&(a.clone(), b.clone())) {
            rows.push((a, b));
        }
    }
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        let mut lp = Lp::new(n);
        for (j, (a, b)) in rows.iter().enumerate() {
            if j != i && keep[j] {
                lp.push(Constraint::le(a.clone(), b.clone()));
            }
        }
        for (a, b) in &h.eqs {
            lp.push(Constraint::eq(a.clone(), b.clone()));
        }
        // redundant iff max a_i·x ≤ b_i over the others (Farkas)
        let redundant = match lp.maximize(&rows[i].0) {
            LpOutcome::Optimal { value, .. } => value <= rows[i].1,
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded { .. } => false,
        };
        if redundant {
            keep[i] = false;
        }
    }
    let mut out = HRep::new(n);
    out.eqs = h.eqs.clone();
    out.ineqs = rows.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect();
    out.ineqs.sort();
    out
}

/// Scales a row so its first nonzero coefficient has absolute value 1.
fn normalize(a: &[Q], b: &Q) -> (Vec<Q>, Q) {
    let lead = a.iter().find(|x| !x.is_zero()).map(|x| x.abs()).expect("nonzero row");
    (a.iter().map(|x| x / &lead).collect(), b / &lead)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn row(a: &[i64], b: i64) -> (Vec<Q>, Q) {
        (a.iter().map(|&x| int(x)).collect(), int(b))
    }

    #[test]
    fn project_triangle() {
        // triangle x ≥ 0, y ≥ 0, x + y ≤ 2; eliminate y  →  0 ≤ x ≤ 2
        let h = HRep { dim: 2, ineqs: vec![row(&[-1, 0], 0), row(&[0, -1], 0), row(&[1, 1], 2)], eqs: vec![] };
        let p = eliminate(&h, 1);
        assert_eq!(p.ineqs, vec![row(&[-1], 0), row(&[1], 2)]);
    }

    #[test]
    fn redundancy_removed() {
        let h = HRep {
            dim: 1,
            ineqs: vec![row(&[1], 2), row(&[2], 10), row(&[-1], 0), (vec![frac(1, 2)], int(1))],
            eqs: vec![],
        };
        assert_eq!(remove_redundant(&h).ineqs, vec![row(&[-1], 0), row(&[1], 2)]);
    }
}
