//! Clause operators, Pauli algebra, random extra terms and the path
//! Hamiltonian.

mod matrix;
mod path;
mod pauli;
mod perturb;

pub use matrix::{
    clause_hb, clause_hp, format_matrix, negate_bits, parse_matrix, ClauseMatrix, HERMITIAN_TOL,
};
pub(crate) use matrix::{hermitian_defect, transverse_projector_sum};
pub use path::{
    apply_path, materialize_dense, PathHamiltonian, Schedule, APPLY_MAX_BITS, DENSE_MAX_BITS,
};
pub use pauli::{pauli_decompose, Pauli, PauliDecomposition, PauliWord};
pub use perturb::{
    random_clause_matrix, sample_perturbation, sample_perturbation_with, EntryDistribution,
    EntryKind, Perturbation, PerturbationConfig, Proposal,
};

/// The hand-picked 8x8 extra term whose Pauli expansion is
/// `-(xz0 + x0z + zx0 + 0xz + z0x + 0zx)`; on the symmetric instance it turns
/// the effective-potential failure into a success.
pub fn eq30_matrix() -> ClauseMatrix {
    const A: [[f64; 8]; 8] = [
        [0., -2., -2., 0., -2., 0., 0., 0.],
        [-2., 0., 0., 0., 0., 0., 0., 0.],
        [-2., 0., 0., 0., 0., 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., 0., 2.],
        [-2., 0., 0., 0., 0., 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., 0., 2.],
        [0., 0., 0., 0., 0., 0., 0., 2.],
        [0., 0., 0., 2., 0., 2., 2., 0.],
    ];
    let rows: Vec<&[f64]> = A.iter().map(|r| r.as_slice()).collect();
    ClauseMatrix::from_real_rows(&rows).expect("constant matrix is symmetric")
}
