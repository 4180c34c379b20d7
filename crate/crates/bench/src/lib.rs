//! Shared input builders for the kernel benchmarks. Inputs are seeded so
//! that runs are comparable across machines and commits.

use symlat::linalg::ExactMatrix;
use symlat::randmat::{
    random_full_rank_rows, random_nonsingular_symmetric_gram, random_symmetric_gram,
    rng_from_seed,
};
use symlat::symform::GramMatrix;

/// Symmetric integer matrix of the given even dimension with entries in
/// `[-9, 9]`: a hafnian workload.
pub fn hafnian_input(dim: usize, seed: u64) -> ExactMatrix {
    let mut rng = rng_from_seed(seed);
    random_symmetric_gram(&mut rng, dim, -9, 9).matrix().clone()
}

/// Nonsingular symmetric integer Gram matrix with entries in `[-5, 5]`.
pub fn gram_input(rank: usize, seed: u64) -> GramMatrix {
    let mut rng = rng_from_seed(seed);
    random_nonsingular_symmetric_gram(&mut rng, rank, -5, 5)
}

/// Dense square integer matrix of full rank with entries in `[-9, 9]`.
pub fn int_matrix_input(n: usize, seed: u64) -> ExactMatrix {
    let mut rng = rng_from_seed(seed);
    random_full_rank_rows(&mut rng, n, n, 9)
}
