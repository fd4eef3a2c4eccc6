//! Exact integration of affine and piecewise-affine functions over rational polytopes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::polytope::{affine_dim, HRep, Polytope};
use crate::linalg::Matrix;
use crate::rational::{self, Q};

/// Triangulates a full-dimensional polytope into simplices (`dim + 1` vertices each),
/// by coning from a vertex over the facets that avoid it, recursively.
pub fn triangulate(p: &Polytope) -> Vec<Vec<Vec<Q>>> {
    let n = p.dim();
    if p.affine_dim() < n || p.vertices.is_empty() {
        return Vec::new();
    }
    let idx: Vec<usize> = (0..p.vertices.len()).collect();
    let mut out = Vec::new();
    tri(&p.h, &p.vertices, &idx, n, &mut Vec::new(), &mut out);
    out
}

fn tri(h: &HRep, verts: &[Vec<Q>], face: &[usize], k: usize, apex: &mut Vec<usize>, out: &mut Vec<Vec<Vec<Q>>>) {
    if k == 0 {
        let mut s: Vec<Vec<Q>> = apex.iter().map(|&i| verts[i].clone()).collect();
        s.push(verts[face[0]].clone());
        out.push(s);
        return;
    }
    if face.len() == k + 1 {
        let mut s: Vec<Vec<Q>> = apex.iter().map(|&i| verts[i].clone()).collect();
        s.extend(face.iter().map(|&i| verts[i].clone()));
        out.push(s);
        return;
    }
    let v0 = face[0];
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for (a, b) in &h.ineqs {
        let sub: Vec<usize> = face.iter().copied().filter(|&i| rational::dot(a, &verts[i]) == *b).collect();
        if sub.is_empty() || sub.contains(&v0) || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<Vec<Q>> = sub.iter().map(|&i| verts[i].clone()).collect();
        if affine_dim(&pts) != Some(k - 1) {
            continue;
        }
        seen.push(sub.clone());
        apex.push(v0);
        tri(h, verts, &sub, k - 1, apex, out);
        apex.pop();
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Lebesgue volume of a simplex given by `dim + 1` vertices.
pub fn simplex_volume(s: &[Vec<Q>]) -> Q {
    let n = s.len() - 1;
    if n == 0 {
        return Q::one();
    }
    let rows: Vec<Vec<Q>> = s[1..].iter().map(|v| v.iter().zip(&s[0]).map(|(a, b)| a - b).collect()).collect();
    let d = Matrix::from_rows(&rows).expect("ragged").det().expect("square");
    d.abs() / Q::from_integer(factorial(n))
}

/// Complete homogeneous symmetric polynomial `h_p(x_0, …, x_n)`.
fn complete_homogeneous(x: &[Q], p: u32) -> Q {
    // h_p via the recursion over variables: H_j(t) = H_{j-1}(t) / (1 - x_j t)
    let mut h = vec![Q::zero(); p as usize + 1];
    h[0] = Q::one();
    for xi in x {
        for d in 1..=p as usize {
            let prev = h[d - 1].clone();
            h[d] += xi * prev;
        }
    }
    h[p as usize].clone()
}

/// `∫_S ℓ^p` over a simplex, `ℓ` given by its values at the vertices.
pub fn simplex_power_integral(s: &[Vec<Q>], values: &[Q], p: u32) -> Q {
    let n = s.len() - 1;
    let vol = simplex_volume(s);
    let coef = Q::new(factorial(p as usize) * factorial(n), factorial(n + p as usize));
    vol * coef * complete_homogeneous(values, p)
}

/// `∫_P (⟨g, y⟩ + c) dy`.
pub fn integrate_affine(p: &Polytope, g: &[Q], c: &Q) -> Q {
    integrate_affine_power(p, g, c, 1)
}

/// `∫_P (⟨g, y⟩ + c)^k dy`.
pub fn integrate_affine_power(p: &Polytope, g: &[Q], c: &Q, k: u32) -> Q {
    triangulate(p)
        .iter()
        .map(|s| {
            let vals: Vec<Q> = s.iter().map(|v| rational::dot(g, v) + c).collect();
            simplex_power_integral(s, &vals, k)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn segment_and_triangle() {
        let seg = Polytope::from_vertices(1, &[qv(&[0]), qv(&[1])]).unwrap();
        assert_eq!(integrate_affine(&seg, &qv(&[2]), &int(0)), int(1));
        assert_eq!(integrate_affine_power(&seg, &qv(&[1]), &int(0), 2), frac(1, 3));
        let tri = Polytope::simplex(2, &int(1));
        // ∫ x over the unit triangle = 1/6, ∫ x^2 = 1/12
        assert_eq!(integrate_affine(&tri, &qv(&[1, 0]), &int(0)), frac(1, 6));
        assert_eq!(integrate_affine_power(&tri, &qv(&[1, 0]), &int(0), 2), frac(1, 12));
    }

    #[test]
    fn cube_triangulation_volume() {
        let mut pts = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    pts.push(qv(&[a, b, c]));
                }
            }
        }
        let cube = Polytope::from_vertices(3, &pts).unwrap();
        let t = triangulate(&cube);
        assert!(t.iter().all(|s| s.len() == 4));
        assert_eq!(cube.volume(), int(1));
        // ∫ (x + y + z) = 3/2
        assert_eq!(integrate_affine(&cube, &qv(&[1, 1, 1]), &int(0)), frac(3, 2));
    }

    #[test]
    fn hexagon_area() {
        let pts = vec![qv(&[2, 0]), qv(&[1, 2]), qv(&[-1, 2]), qv(&[-2, 0]), qv(&[-1, -2]), qv(&[1, -2])];
        let hex = Polytope::from_vertices(2, &pts).unwrap();
        assert_eq!(hex.volume(), int(12));
    }
}
