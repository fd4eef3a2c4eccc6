//! Convex piecewise-linear functions `f(v) = max_i (⟨g_i, v⟩ + c_i)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::lp::{Constraint, Lp, LpOutcome};
use super::profile::{upper_hull, ConcaveProfile};
use crate::rational::{self, Q};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece {
    pub g: Vec<Q>,
    pub c: Q,
}

impl Piece {
    pub fn new(g: Vec<Q>, c: Q) -> Self {
        Piece { g, c }
    }

    pub fn eval(&self, v: &[Q]) -> Q {
        rational::dot(&self.g, v) + &self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxAffine {
    n: usize,
    pieces: Vec<Piece>,
}

/// Outcome of [`compare`]. Witnesses are points of strict inequality.
#[derive(Clone, Debug, PartialEq)]
pub enum Comparison {
    Equal,
    /// `f ≤ g` everywhere, strictly at `g_greater_at`.
    Below {
        g_greater_at: Vec<Q>,
    },
    /// `f ≥ g` everywhere, strictly at `f_greater_at`.
    Above {
        f_greater_at: Vec<Q>,
    },
    Incomparable {
        f_greater_at: Vec<Q>,
        g_greater_at: Vec<Q>,
    },
}

impl Comparison {
    pub fn is_le(&self) -> bool {
        matches!(self, Comparison::Equal | Comparison::Below { .. })
    }

    pub fn is_ge(&self) -> bool {
        matches!(self, Comparison::Equal | Comparison::Above { .. })
    }

    pub fn is_eq(&self) -> bool {
        matches!(self, Comparison::Equal)
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Comparison::Equal => "=",
            Comparison::Below { .. } => "<=",
            Comparison::Above { .. } => ">=",
            Comparison::Incomparable { .. } => "incomparable",
        }
    }

    pub fn to_json(&self) -> Value {
        let w = |v: &Vec<Q>| rational::qvec_to_json(v);
        match self {
            Comparison::Equal => json!({ "relation": "=" }),
            Comparison::Below { g_greater_at } => json!({ "relation": "<=", "g_greater_at": w(g_greater_at) }),
            Comparison::Above { f_greater_at } => json!({ "relation": ">=", "f_greater_at": w(f_greater_at) }),
            Comparison::Incomparable { f_greater_at, g_greater_at } => json!({
                "relation": "incomparable",
                "f_greater_at": w(f_greater_at),
                "g_greater_at": w(g_greater_at),
            }),
        }
    }
}

impl MaxAffine {
    pub fn new(n: usize, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Malformed("a max-affine function needs at least one piece".into()));
        }
        for p in &pieces {
            if p.g.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.g.len() });
            }
        }
        Ok(MaxAffine { n, pieces })
    }

    pub fn from_pairs(n: usize, pairs: Vec<(Vec<Q>, Q)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().map(|(g, c)| Piece::new(g, c)).collect())
    }

    pub fn affine(g: Vec<Q>, c: Q) -> Self {
        MaxAffine { n: g.len(), pieces: vec![Piece::new(g, c)] }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Self::affine(vec![Q::zero(); n], c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, v: &[Q]) -> Result<Q> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[Q]) -> Q {
        self.pieces.iter().map(|p| p.eval(v)).max().expect("nonempty")
    }

    /// Indices of pieces attaining the max at `v`.
    pub fn active(&self, v: &[Q]) -> Vec<usize> {
        let m = self.eval_unchecked(v);
        (0..self.pieces.len()).filter(|&i| self.pieces[i].eval(v) == m).collect()
    }

    pub fn max(&self, o: &MaxAffine) -> Result<MaxAffine> {
        if o.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: o.n });
        }
        let mut p = self.pieces.clone();
        p.extend(o.pieces.iter().cloned());
        Ok(MaxAffine { n: self.n, pieces: p })
    }

    pub fn max_all(fs: &[MaxAffine]) -> Result<MaxAffine> {
        let (first, rest) = fs.split_first().ok_or_else(|| Error::Malformed("empty max".into()))?;
        let mut acc = first.clone();
        for f in rest {
            acc = acc.max(f)?;
        }
        Ok(acc)
    }

    /// Pointwise sum (pieces are all pairwise sums).
    pub fn add(&self, o: &MaxAffine) -> Result<MaxAffine> {
        if o.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: o.n });
        }
        let mut p = Vec::with_capacity(self.pieces.len() * o.pieces.len());
        for a in &self.pieces {
            for b in &o.pieces {
                p.push(Piece::new(a.g.iter().zip(&b.g).map(|(x, y)| x + y).collect(), &a.c + &b.c));
            }
        }
        Ok(MaxAffine { n: self.n, pieces: p })
    }

    /// `λ · f` for `λ ≥ 0`.
    pub fn scale(&self, lambda: &Q) -> MaxAffine {
        debug_assert!(!lambda.is_negative());
        MaxAffine {
            n: self.n,
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::new(p.g.iter().map(|x| x * lambda).collect(), &p.c * lambda))
                .collect(),
        }
    }

    pub fn add_constant(&self, c: &Q) -> MaxAffine {
        MaxAffine { n: self.n, pieces: self.pieces.iter().map(|p| Piece::new(p.g.clone(), &p.c + c)).collect() }
    }

    /// Adds the linear form `⟨a, v⟩`.
    pub fn add_linear(&self, a: &[Q]) -> MaxAffine {
        MaxAffine {
            n: self.n,
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::new(p.g.iter().zip(a).map(|(x, y)| x + y).collect(), p.c.clone()))
                .collect(),
        }
    }

    /// Legendre dual `q = −f*` on `conv(g_i)`.
    pub fn conjugate(&self) -> ConcaveProfile {
        ConcaveProfile::from_points(self.n, self.pieces.iter().map(|p| (p.g.clone(), p.c.clone())).collect())
    }

    /// Drops pieces that are nowhere strictly active; canonical piece order.
    pub fn pruned(&self) -> MaxAffine {
        if self.pieces.len() == 1 {
            return self.clone();
        }
        let pts: Vec<(Vec<Q>, Q)> = self.pieces.iter().map(|p| (p.g.clone(), p.c.clone())).collect();
        let hull = upper_hull(self.n, &pts);
        let mut pieces: Vec<Piece> = hull.vertices.into_iter().map(|(g, c)| Piece::new(g, c)).collect();
        pieces.sort();
        MaxAffine { n: self.n, pieces }
    }

    pub fn gradients(&self) -> Vec<Vec<Q>> {
        self.pieces.iter().map(|p| p.g.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let pieces: Vec<Value> = self
            .pieces
            .iter()
            .map(|p| json!({ "g": rational::qvec_to_json(&p.g), "c": rational::render(&p.c) }))
            .collect();
        json!({ "pieces": pieces })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let pieces = v
            .get("pieces")
            .and_then(|p| p.as_array())
            .ok_or_else(|| Error::Parse("max-affine needs a \"pieces\" array".into()))?;
        let mut out = Vec::with_capacity(pieces.len());
        for p in pieces {
            let g = rational::qvec_from_json(p.get("g").ok_or_else(|| Error::Parse("piece needs \"g\"".into()))?)?;
            let c = rational::q_from_json(p.get("c").ok_or_else(|| Error::Parse("piece needs \"c\"".into()))?)?;
            out.push(Piece::new(g, c));
        }
        let n = out.first().map_or(0, |p| p.g.len());
        Self::new(n, out)
    }
}

impl fmt::Display for MaxAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |i: usize| if self.n == 1 { "v".to_string() } else { format!("v{}", i + 1) };
        let terms: Vec<String> = self
            .pieces
            .iter()
            .map(|p| {
                let mut s = String::new();
                for (i, g) in p.g.iter().enumerate() {
                    if g.is_zero() {
                        continue;
                    }
                    let sign = if g.is_negative() {
                        "-"
                    } else if s.is_empty() {
                        ""
                    } else {
                        "+"
                    };
                    let a = g.abs();
                    if a.is_one() {
                        s.push_str(&format!("{sign}{}", var(i)));
                    } else {
                        s.push_str(&format!("{sign}{a}{}", var(i)));
                    }
                }
                if s.is_empty() {
                    s = p.c.to_string();
                } else if p.c.is_positive() {
                    s.push_str(&format!("+{}", p.c));
                } else if p.c.is_negative() {
                    s.push_str(&format!("{}", p.c));
                }
                s
            })
            .collect();
        write!(f, "max({})", terms.join(", "))
    }
}

/// A point where `piece > g`, or `None` when `piece ≤ g` everywhere.
fn piece_exceeds(piece: &Piece, g: &MaxAffine) -> Option<Vec<Q>> {
    let n = g.n;
    // variables (v, s): minimize s − ⟨p, v⟩ subject to s ≥ ⟨g_j, v⟩ + c_j
    let mut lp = Lp::new(n + 1);
    for q in &g.pieces {
        let mut a: Vec<Q> = q.g.iter().map(|x| -x).collect();
        a.push(Q::one());
        lp.push(Constraint::ge(a, q.c.clone()));
    }
    let mut obj: Vec<Q> = piece.g.iter().map(|x| -x).collect();
    obj.push(Q::one());
    match lp.minimize(&obj) {
        LpOutcome::Optimal { x, value } => (value < piece.c).then(|| x[..n].to_vec()),
        LpOutcome::Unbounded { point, direction } => {
            let mut lam = Q::one();
            loop {
                let v: Vec<Q> = point[..n].iter().zip(&direction[..n]).map(|(a, d)| a + d * &lam).collect();
                if piece.eval(&v) > g.eval_unchecked(&v) {
                    return Some(v);
                }
                lam *= rational::int(2);
            }
        }
        LpOutcome::Infeasible => unreachable!("epigraph of a max-affine function is nonempty"),
    }
}

/// A point where `f > g`, or `None` when `f ≤ g` everywhere.
pub fn exceeds(f: &MaxAffine, g: &MaxAffine) -> Option<Vec<Q>> {
    f.pieces.iter().find_map(|p| piece_exceeds(p, g))
}

pub fn le(f: &MaxAffine, g: &MaxAffine) -> bool {
    exceeds(f, g).is_none()
}

/// Exact comparison by linear programming; sound and complete.
pub fn compare(f: &MaxAffine, g: &MaxAffine) -> Result<Comparison> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch { expected: f.n, got: g.n });
    }
    let fg = exceeds(f, g);
    let gf = exceeds(g, f);
    Ok(match (fg, gf) {
        (None, None) => Comparison::Equal,
        (None, Some(w)) => Comparison::Below { g_greater_at: w },
        (Some(w), None) => Comparison::Above { f_greater_at: w },
        (Some(a), Some(b)) => Comparison::Incomparable { f_greater_at: a, g_greater_at: b },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    pub(crate) fn ma(pairs: &[(&[i64], Q)]) -> MaxAffine {
        let n = pairs[0].0.len();
        MaxAffine::from_pairs(n, pairs.iter().map(|(g, c)| (g.iter().map(|&x| int(x)).collect(), c.clone())).collect())
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = ma(&[(&[0], int(0)), (&[1], int(0))]);
        assert_eq!(f.eval(&[int(-3)]).unwrap(), int(0));
        assert_eq!(f.eval(&[int(2)]).unwrap(), int(2));
        let g = ma(&[(&[0], int(0)), (&[1], int(5)), (&[2], int(0))]);
        assert_eq!(g.eval(&[int(1)]).unwrap(), int(6));
        assert!(f.eval(&[int(1), int(2)]).is_err());
    }

    #[test]
    fn compare_examples() {
        let f = ma(&[(&[0], int(0)), (&[1], int(0))]);
        assert_eq!(compare(&f, &f).unwrap(), Comparison::Equal);
        let g = ma(&[(&[0], int(0)), (&[1], int(-2))]);
        let c = compare(&f, &g).unwrap();
        assert!(c.is_ge() && !c.is_le());
        let h = MaxAffine::affine(vec![frac(1, 2)], frac(1, 2));
        match compare(&f, &h).unwrap() {
            Comparison::Incomparable { f_greater_at, g_greater_at } => {
                assert!(f.eval(&f_greater_at).unwrap() > h.eval(&f_greater_at).unwrap());
                assert!(f.eval(&g_greater_at).unwrap() < h.eval(&g_greater_at).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let at = |x: i64| (f.eval(&[int(x)]).unwrap(), h.eval(&[int(x)]).unwrap());
        // g lies above f exactly on (-1, 1)
        assert!(at(0).0 < at(0).1 && at(2).0 > at(2).1 && at(-2).0 > at(-2).1);
    }

    #[test]
    fn pruning_drops_inactive_pieces() {
        let f = ma(&[(&[0], int(0)), (&[1], int(-5)), (&[2], int(0)), (&[2], int(-1))]);
        let p = f.pruned();
        assert_eq!(p, ma(&[(&[0], int(0)), (&[2], int(0))]));
        assert_eq!(compare(&f, &p).unwrap(), Comparison::Equal);
    }

    #[test]
    fn display_and_json() {
        let f = ma(&[(&[0], int(0)), (&[1], int(-1))]);
        assert_eq!(f.to_string(), "max(0, v-1)");
        assert_eq!(MaxAffine::from_json(&f.to_json()).unwrap(), f);
    }
}
