//! Constructive decompositions into sums of idempotents.

mod bounds;
mod cert;
mod cyclic;
mod prime4;
mod small;

pub use bounds::{decompose_best, decompose_with, sn_bounds, Mode, SnBounds};
pub use cert::{matrix_digest, merge_block_diag, verify_cert, DecompCert, Sign};
pub use cyclic::{
    cyclicfit_blocks, cyclicfit_solve, decompose_cyclic, decompose_sum5, is_sum_of_idempotents,
};
pub use small::{decompose_char23_4, decompose_small_field3};
pub use prime4::{
    decompose_prime4, embed_nilfit, nilfit_max_padding, prime4_composite, prime4_threshold,
    scalar_4comp, scalar_classes, scalar_threshold, semigroup_frobenius, semigroup_represent,
    tracefit_diff, tracefit_sum,
};
