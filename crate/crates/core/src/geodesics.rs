//! Norm geodesics: affine interpolation of weights in a codiagonalizing basis.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::field::Field;
use crate::norms::{codiagonalize, Codiagonal, DiagNorm};
use crate::rational::{self, Q};
use crate::{Error, Result};

/// `t ↦ ‖·‖_t` with `‖s_i‖_t = ‖s_i‖_0^{1-t} ‖s_i‖_1^t` on a common diagonal basis.
#[derive(Clone, Debug)]
pub struct NormGeodesic<F: Field> {
    codiag: Codiagonal<F>,
}

pub fn geodesic<F: Field>(n0: &DiagNorm<F>, n1: &DiagNorm<F>) -> Result<NormGeodesic<F>> {
    Ok(NormGeodesic { codiag: codiagonalize(n0, n1)? })
}

pub(crate) fn check_t(t: &Q) -> Result<()> {
    if *t < Q::zero() || *t > Q::one() {
        return Err(Error::OutOfRange(format!("t = {t} not in [0, 1]")));
    }
    Ok(())
}

/// `(1 - t) a + t b`, componentwise.
pub fn interpolate(a: &[Q], b: &[Q], t: &Q) -> Vec<Q> {
    let s = Q::one() - t;
    a.iter().zip(b).map(|(x, y)| &s * x + t * y).collect()
}

impl<F: Field> NormGeodesic<F> {
    pub fn codiagonal(&self) -> &Codiagonal<F> {
        &self.codiag
    }

    pub fn weights0(&self) -> &[Q] {
        &self.codiag.weights0
    }

    pub fn weights1(&self) -> &[Q] {
        &self.codiag.weights1
    }

    pub fn weights_at(&self, t: &Q) -> Result<Vec<Q>> {
        check_t(t)?;
        Ok(interpolate(&self.codiag.weights0, &self.codiag.weights1, t))
    }

    pub fn eval_at(&self, t: &Q) -> Result<DiagNorm<F>> {
        let w = self.weights_at(t)?;
        Ok(DiagNorm::from_parts(self.codiag.basis.clone(), self.codiag.inverse.clone(), w))
    }

    pub fn dump(&self, ts: &[Q]) -> Result<Value> {
        let mut rows = Vec::with_capacity(ts.len());
        for t in ts {
            rows.push(json!({ "t": rational::render(t), "norm": self.eval_at(t)?.to_json() }));
        }
        Ok(Value::Array(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Valuation;
    use crate::norms::{distance, Exponent};
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn constant_geodesic() {
        let n = DiagNorm::<Q>::diagonal(qv(&[1, -2]));
        let g = geodesic(&n, &n).unwrap();
        for t in [int(0), frac(1, 3), int(1)] {
            assert!(g.eval_at(&t).unwrap().norm_eq(&n).unwrap());
        }
    }

    #[test]
    fn same_basis_interpolation() {
        let g = geodesic(&DiagNorm::<Q>::diagonal(qv(&[0, 0])), &DiagNorm::diagonal(qv(&[0, 2]))).unwrap();
        assert_eq!(g.eval_at(&frac(1, 2)).unwrap().weights(), &qv(&[0, 1])[..]);
        let h = geodesic(&DiagNorm::<Q>::diagonal(qv(&[0, 4])), &DiagNorm::diagonal(qv(&[2, 0]))).unwrap();
        assert_eq!(h.eval_at(&frac(1, 4)).unwrap().weights(), &[frac(1, 2), int(3)][..]);
    }

    #[test]
    fn cross_basis_midpoint() {
        let n0 = DiagNorm::<Q>::diagonal(qv(&[0, 1]));
        let n1 = DiagNorm::from_vectors(&[qv(&[1, 1]), qv(&[1, 0])], qv(&[0, 1])).unwrap();
        let g = geodesic(&n0, &n1).unwrap();
        let mid = g.eval_at(&frac(1, 2)).unwrap();
        assert_eq!(mid.weights(), &[frac(1, 2), frac(1, 2)][..]);
        assert_eq!(mid.vectors(), vec![qv(&[1, 0]), qv(&[0, 1])]);
        assert!(g.eval_at(&int(0)).unwrap().norm_eq(&n0).unwrap());
        assert!(g.eval_at(&int(1)).unwrap().norm_eq(&n1).unwrap());
        assert_eq!(mid.evaluate(&qv(&[1, 1])).unwrap(), Valuation::Finite(frac(1, 2)));
        let d = distance(&n0, &n1, Exponent::Finite(1)).unwrap();
        let half = distance(&n0, &mid, Exponent::Finite(1)).unwrap();
        assert_eq!(half, d / int(2));
    }

    #[test]
    fn rejects_t_outside_unit_interval() {
        let n = DiagNorm::<Q>::trivial(1);
        let g = geodesic(&n, &n).unwrap();
        assert!(matches!(g.eval_at(&frac(5, 4)), Err(Error::OutOfRange(_))));
    }
}
