//! Seeded random instances for property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graded::SectionRing;
use crate::linalg::Matrix;
use crate::norms::DiagNorm;
use crate::rational::{self, Q};
use crate::segments::FSSegment;
use crate::toric::{fs_from_weights, ToricMetric};

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer in `[lo, hi]`.
pub fn int(rng: &mut Rng64, lo: i64, hi: i64) -> Q {
    rational::int(rng.gen_range(lo..=hi))
}

/// `n / den` with `n ∈ [lo·den, hi·den]` and `den` drawn from `1..=max_den`.
pub fn small_q(rng: &mut Rng64, lo: i64, hi: i64, max_den: i64) -> Q {
    let den = rng.gen_range(1..=max_den);
    rational::frac(rng.gen_range(lo * den..=hi * den), den)
}

pub fn weights(rng: &mut Rng64, d: usize, lo: i64, hi: i64, max_den: i64) -> Vec<Q> {
    (0..d).map(|_| small_q(rng, lo, hi, max_den)).collect()
}

/// Weights from a small set, so that jumps repeat and filtrations have multiplicities.
pub fn clustered_weights(rng: &mut Rng64, d: usize) -> Vec<Q> {
    let pool: Vec<Q> = (0..3).map(|_| small_q(rng, -3, 3, 2)).collect();
    (0..d).map(|_| pool.choose(rng).expect("nonempty").clone()).collect()
}

/// Random invertible matrix with small integer entries.
pub fn invertible(rng: &mut Rng64, d: usize) -> Matrix<Q> {
    loop {
        let rows: Vec<Vec<Q>> = (0..d).map(|_| (0..d).map(|_| int(rng, -2, 2)).collect()).collect();
        let m = Matrix::from_rows(&rows).expect("square");
        if m.rank() == d {
            return m;
        }
    }
}

/// Another diagonalizing basis of the same norm: each basis vector gets added multiples of
/// vectors whose weight is at least its own; any invertible such change keeps orthogonality.
pub fn rebase(rng: &mut Rng64, n: &DiagNorm<Q>) -> DiagNorm<Q> {
    let d = n.dim();
    let vs = n.vectors();
    let w = n.weights();
    loop {
        let mut out = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = vs[j].clone();
            for i in 0..d {
                if i != j && w[i] >= w[j] && rng.gen_bool(0.5) {
                    let c = int(rng, -2, 2);
                    for (x, y) in v.iter_mut().zip(&vs[i]) {
                        *x += &c * y;
                    }
                }
            }
            out.push(v);
        }
        if let Ok(m) = DiagNorm::from_vectors(&out, w.to_vec()) {
            return m;
        }
    }
}

/// A pair codiagonal in a random basis `C`, with `n0` presented in `C` and `n1` in a
/// rebased basis (or the roles swapped), so the union of the presented bases contains `C`.
pub fn codiagonal_pair(rng: &mut Rng64, d: usize) -> (DiagNorm<Q>, DiagNorm<Q>) {
    let c = invertible(rng, d);
    let w0 = clustered_weights(rng, d);
    let w1 = clustered_weights(rng, d);
    let n0 = DiagNorm::new(c.clone(), w0).expect("invertible");
    let n1 = DiagNorm::new(c, w1).expect("invertible");
    if rng.gen_bool(0.5) {
        let n1 = rebase(rng, &n1);
        (n0, n1)
    } else {
        let n0 = rebase(rng, &n0);
        (n0, n1)
    }
}

/// Norms diagonal in one shared random basis.
pub fn shared_basis(rng: &mut Rng64, d: usize, count: usize) -> Vec<DiagNorm<Q>> {
    let c = invertible(rng, d);
    (0..count).map(|_| DiagNorm::new(c.clone(), weights(rng, d, -3, 3, 3)).expect("invertible")).collect()
}

pub fn vector(rng: &mut Rng64, d: usize) -> Vec<Q> {
    loop {
        let v: Vec<Q> = (0..d).map(|_| int(rng, -2, 2)).collect();
        if v.iter().any(|x| *x != rational::zero()) {
            return v;
        }
    }
}

/// Integer monomial weights at level `k`.
pub fn fs_weights(rng: &mut Rng64, ring: SectionRing, k: usize, lo: i64, hi: i64) -> Vec<Q> {
    (0..ring.h0(k)).map(|_| int(rng, lo, hi)).collect()
}

pub fn fs_metric(rng: &mut Rng64, ring: SectionRing, k: usize) -> ToricMetric {
    fs_from_weights(ring, k, &fs_weights(rng, ring, k, -3, 3)).expect("full support")
}

pub fn fs_segment(rng: &mut Rng64, ring: SectionRing, k: usize) -> FSSegment {
    FSSegment::new(ring, k, fs_weights(rng, ring, k, -3, 3), fs_weights(rng, ring, k, -3, 3)).expect("full support")
}

/// `ℙ¹` with `m ∈ {1, 2}` or `ℙ²` with `m = 1`.
pub fn small_ring(rng: &mut Rng64) -> SectionRing {
    match rng.gen_range(0..3) {
        0 => SectionRing { n: 1, m: 1 },
        1 => SectionRing { n: 1, m: 2 },
        _ => SectionRing { n: 2, m: 1 },
    }
}

pub fn p1_ring(rng: &mut Rng64) -> SectionRing {
    SectionRing { n: 1, m: rng.gen_range(1..=2) }
}

pub fn pick_t(rng: &mut Rng64) -> Q {
    let ds = [2i64, 3, 4];
    let d = *ds.choose(rng).expect("nonempty");
    rational::frac(rng.gen_range(0..=d), d)
}
