//! Seeded random instance generators for the verification harnesses:
//! symmetric integer Gram matrices, unimodular lattices of mixed signature,
//! and integer coordinate matrices for embeddings.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::scalar;
use crate::linalg::ExactMatrix;
use crate::symform::GramMatrix;

/// Deterministic RNG; the same seed reproduces every randomized run exactly.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric integer matrix with entries in `[lo, hi]`, any signature.
pub fn random_symmetric_gram(rng: &mut ChaCha8Rng, size: usize, lo: i64, hi: i64) -> GramMatrix {
    let mut m = ExactMatrix::zero(size, size);
    for i in 0..size {
        for j in 0..=i {
            let v = scalar(rng.random_range(lo..=hi));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    GramMatrix::new(m).expect("constructed symmetric")
}

/// Like [`random_symmetric_gram`] but resampled until the determinant is
/// nonzero.
pub fn random_nonsingular_symmetric_gram(
    rng: &mut ChaCha8Rng,
    size: usize,
    lo: i64,
    hi: i64,
) -> GramMatrix {
    loop {
        let g = random_symmetric_gram(rng, size, lo, hi);
        if !g.det().expect("square").is_zero() {
            return g;
        }
    }
}

/// Gram matrix of a random unimodular lattice of the given rank: an
/// orthogonal sum of hyperbolic planes and unit vectors of both signs,
/// conjugated by a random unimodular change of basis with entries kept in
/// `[-2, 2]`. Indefinite whenever the rank allows it.
pub fn random_unimodular_gram(rng: &mut ChaCha8Rng, rank: usize) -> GramMatrix {
    assert!(rank >= 1);
    let hyperbolic = rng.random_range(0..=rank / 2);
    let rest = rank - 2 * hyperbolic;
    let plus = if rest == 0 {
        0
    } else {
        rng.random_range(0..=rest)
    };

    let mut d = ExactMatrix::zero(rank, rank);
    for h in 0..hyperbolic {
        d.set(2 * h, 2 * h + 1, scalar(1));
        d.set(2 * h + 1, 2 * h, scalar(1));
    }
    for i in 0..rest {
        let sign = if i < plus { 1 } else { -1 };
        d.set(2 * hyperbolic + i, 2 * hyperbolic + i, scalar(sign));
    }

    let s = random_unimodular_matrix(rng, rank, 2, 6 * rank);
    let m = s.mul(&d).unwrap().mul(&s.transpose()).unwrap();
    GramMatrix::new(m).expect("congruent to a symmetric matrix")
}

/// Random unimodular integer matrix built from elementary row operations,
/// accepting a shear only if all entries stay within `[-bound, bound]`.
pub fn random_unimodular_matrix(
    rng: &mut ChaCha8Rng,
    n: usize,
    bound: i64,
    steps: usize,
) -> ExactMatrix {
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut done = 0;
    let mut attempts = 0;
    while done < steps && attempts < 40 * steps {
        attempts += 1;
        match rng.random_range(0..3u8) {
            0 if n >= 2 => {
                // row_i += c * row_j
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n);
                if i == j {
                    j = (j + 1) % n;
                }
                let c: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
                let candidate: Vec<i64> = rows[i]
                    .iter()
                    .zip(&rows[j])
                    .map(|(a, b)| a + c * b)
                    .collect();
                if candidate.iter().all(|x| x.abs() <= bound) {
                    rows[i] = candidate;
                    done += 1;
                }
            }
            1 if n >= 2 => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                rows.swap(i, j);
                done += 1;
            }
            _ => {
                let i = rng.random_range(0..n);
                for x in rows[i].iter_mut() {
                    *x = -*x;
                }
                done += 1;
            }
        }
    }
    ExactMatrix::from_int_rows(&rows).expect("rectangular")
}

/// `r x n` integer matrix with entries in `[-bound, bound]`, resampled until
/// the rows are linearly independent.
pub fn random_full_rank_rows(
    rng: &mut ChaCha8Rng,
    r: usize,
    n: usize,
    bound: i64,
) -> ExactMatrix {
    assert!(r <= n);
    loop {
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.random_range(-bound..=bound)).collect())
            .collect();
        let m = ExactMatrix::from_int_rows(&rows).expect("rectangular");
        if m.rank().expect("integer matrix") == r {
            return m;
        }
    }
}

/// Square integer matrix with `0 < |det| <= det_cap`: the coordinate matrix
/// of a finite-index sublattice.
pub fn random_finite_index_transform(
    rng: &mut ChaCha8Rng,
    n: usize,
    bound: i64,
    det_cap: u64,
) -> ExactMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-bound..=bound)).collect())
            .collect();
        let m = ExactMatrix::from_int_rows(&rows).expect("rectangular");
        let det = m.det_exact().expect("square");
        if !det.is_zero() && det.numer().magnitude() <= &num_bigint::BigUint::from(det_cap) {
            return m;
        }
    }
}
