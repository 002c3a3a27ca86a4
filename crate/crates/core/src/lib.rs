//! Exact skein-theoretic representations of surface mapping class groups over
//! cyclotomic integers, with reduction at completely split primes and
//! machine-checkable certificates for the finite images.
//!
//! The crate is organized bottom-up:
//! - [`cyclotomic`]: exact arithmetic in Z[zeta_p] / Q(zeta_p), Galois action,
//!   split primes and reduction maps;
//! - [`interval`]: certified complex embeddings via dyadic interval arithmetic;
//! - [`linalg`]: dense exact matrices, generic over the scalar;
//! - [`skein`]: quantum integers, admissibility, theta/tetrahedron networks,
//!   recoupling coefficients and basis counts;
//! - [`tqft_rep`]: twist and curve-operator matrices on a colored spine basis,
//!   the invariant Hermitian form, and their structural checks;
//! - [`finite_groups`]: matrix groups over F_q, Schreier-Sims order
//!   certification, irreducibility testing, surjectivity certificates;
//! - [`involvement`]: finite groups into PSL(N, q) through Cayley embeddings,
//!   with verified injectivity and certificate composition.

pub mod arith;
pub mod cyclotomic;
pub mod finite_groups;
pub mod interval;
pub mod involvement;
pub mod linalg;
pub mod skein;
pub mod tqft_rep;

pub use cyclotomic::{
    find_split_primes, restrict_scalars, CycError, CyclotomicInt, CyclotomicRat,
    RealSubfieldElem, SplitPrime,
};
pub use interval::complex_embed;
pub use linalg::{FieldScalar, Matrix, Scalar};
pub use involvement::{
    embed_into_psl, involvement_certificate, GroupInput, InvolvementCertificate,
};
pub use skein::SkeinParams;
pub use tqft_rep::{
    adjoint_trace, form_positive, form_positive_with_ceiling, genus1_matrices, hermitian_form,
    normalize_det, verify_unitary, Curve, Genus1Data, Rep,
};

/// Matrices over the cyclotomic field Q(zeta_p).
pub type CycMatrix = linalg::Matrix<cyclotomic::CyclotomicRat>;
/// Matrices over a prime field F_q.
pub type FqMatrix = linalg::Matrix<finite_groups::Fq>;

/// Identifies every normalization choice that affects serialized output:
/// the root zeta -> exp(2 pi i (p+1)/(2p)) behind the quantum parameter
/// A = -zeta^{(p+1)/2}, even colors 0..p-3, twist mu_c = (-1)^c A^{c(c+2)},
/// loop-chain spine bases in lexicographic order, and the positive-embedding
/// normalization of the S-matrix scale. Certificates and caches embed this
/// string so artifacts from incompatible conventions never mix.
pub const CONVENTION: &str = "so3-even-colors-v1";

/// Schema version stamped into every serialized certificate and cache file.
pub const SCHEMA_VERSION: u32 = 1;
