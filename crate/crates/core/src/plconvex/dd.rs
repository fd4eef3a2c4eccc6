//! Double description method for polyhedral cones `{x : A x ≥ 0}` with exact
//! integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::Q;

pub type IVec = Vec<BigInt>;

/// Generators of a cone: `cone = span(lines) + cone(rays)`, rays extreme.
#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub lines: Vec<IVec>,
    pub rays: Vec<IVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        if i / 64 >= self.0.len() {
            self.0.resize(i / 64 + 1, 0);
        }
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(o.0.iter().chain(std::iter::repeat(&0))).all(|(a, b)| a & !b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

pub fn primitive(v: IVec) -> IVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g == BigInt::from(1) {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn to_integer(v: &[Q]) -> IVec {
    let l = crate::rational::common_denominator(v);
    primitive(v.iter().map(|q| (q * Q::from_integer(l.clone())).to_integer()).collect())
}

pub fn to_rational(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `p·x − q·y`, reduced to a primitive vector.
fn combine(p: &BigInt, x: &[BigInt], q: &BigInt, y: &[BigInt]) -> IVec {
    primitive(x.iter().zip(y).map(|(a, b)| p * a - q * b).collect())
}

/// Extreme rays and lineality space of `{x ∈ Q^dim : a · x ≥ 0 for all a ∈ rows}`.
pub fn cone_generators(dim: usize, rows: &[IVec]) -> ConeGenerators {
    let mut lines: Vec<IVec> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<(IVec, Bits)> = Vec::new();
    let nrows = rows.len();
    for (k, a) in rows.iter().enumerate() {
        if a.iter().all(|x| x.is_zero()) {
            for (_, z) in rays.iter_mut() {
                z.set(k);
            }
            continue;
        }
        if let Some(li) = lines.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l = lines.swap_remove(li);
            let mut al = idot(a, &l);
            if al.is_negative() {
                l = l.into_iter().map(|x| -x).collect();
                al = -al;
            }
            for other in lines.iter_mut() {
                let ao = idot(a, other);
                if !ao.is_zero() {
                    *other = combine(&al, other, &ao, &l);
                }
            }
            for (r, z) in rays.iter_mut() {
                let ar = idot(a, r);
                if !ar.is_zero() {
                    *r = combine(&al, r, &ar, &l);
                }
                z.set(k);
            }
            let mut z = Bits::new(nrows);
            for j in 0..k {
                z.set(j);
            }
            rays.push((l, z));
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| idot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    z.set(k);
                }
            }
            continue;
        }
        let need = (dim - lines.len()).saturating_sub(2);
        let mut fresh: Vec<(IVec, Bits)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if common.count() < need {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| r == p || r == q || !common.subset_of(&rays[r].1));
                if !adjacent {
                    continue;
                }
                let v = combine(&vals[p], &rays[q].0, &vals[q], &rays[p].0);
                let mut z = common;
                z.set(k);
                fresh.push((v, z));
            }
        }
        let mut next: Vec<(IVec, Bits)> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                z.set(k);
            }
            next.push((r, z));
        }
        next.extend(fresh);
        rays = next;
    }
    ConeGenerators { lines, rays: rays.into_iter().map(|(r, _)| r).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn positive_orthant() {
        let g = cone_generators(3, &[iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[0, 0, 1])]);
        assert!(g.lines.is_empty());
        let mut r = g.rays.clone();
        r.sort();
        assert_eq!(r, vec![iv(&[0, 0, 1]), iv(&[0, 1, 0]), iv(&[1, 0, 0])]);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square |x| ≤ z, |y| ≤ z
        let rows = [iv(&[1, 0, 1]), iv(&[-1, 0, 1]), iv(&[0, 1, 1]), iv(&[0, -1, 1])];
        let g = cone_generators(3, &rows);
        assert!(g.lines.is_empty());
        let mut r = g.rays.clone();
        r.sort();
        assert_eq!(r, vec![iv(&[-1, -1, 1]), iv(&[-1, 1, 1]), iv(&[1, -1, 1]), iv(&[1, 1, 1])]);
    }

    #[test]
    fn halfspace_keeps_lines() {
        let g = cone_generators(3, &[iv(&[1, 1, 0])]);
        assert_eq!(g.lines.len(), 2);
        assert_eq!(g.rays.len(), 1);
        for l in &g.lines {
            assert!(idot(&iv(&[1, 1, 0]), l).is_zero());
        }
    }
}
