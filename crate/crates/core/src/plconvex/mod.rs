//! Exact polyhedral calculus of convex piecewise-linear functions.
//!
//! Everything is rational: linear programs are solved by an exact simplex method,
//! convex hulls and vertex enumeration go through the double description method,
//! and integrals are sums over triangulations.

pub mod dd;
pub mod envelope;
pub mod fm;
pub mod integrate;
pub mod lp;
pub mod maxaffine;
pub mod polytope;
pub mod profile;

pub use envelope::{envelope_constrained, marginal_min, t_breakpoints};
pub use maxaffine::{compare, exceeds, le, Comparison, MaxAffine, Piece};
pub use polytope::{HRep, Polytope, VRep};
pub use profile::ConcaveProfile;

use crate::rational::Q;
use crate::Result;

/// `−f*` on the convex hull of the gradients of `f`.
pub fn conjugate(f: &MaxAffine) -> ConcaveProfile {
    f.conjugate()
}

pub fn eval(f: &MaxAffine, v: &[Q]) -> Result<Q> {
    f.eval(v)
}

/// `∫_P q` for a concave profile over a polytope inside its domain.
pub fn integrate_simplex(q: &ConcaveProfile, p: &Polytope) -> Result<Q> {
    q.integrate(Some(p))
}

/// `∫_P f` for a convex PL function over a polytope.
pub fn integrate_max_affine(f: &MaxAffine, p: &Polytope) -> Q {
    let pieces: Vec<(Vec<Q>, Q)> = f.pieces().iter().map(|x| (x.g.clone(), x.c.clone())).collect();
    profile::cells_of(p, &pieces, false).iter().map(|(cell, (a, b))| integrate::integrate_affine(cell, a, b)).sum()
}
