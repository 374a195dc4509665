//! Protected points of self-adjoint pencils.
//!
//! For a real symmetric `A` and a positive semi-definite `B ≠ 0`, a real `λ` is
//! *protected* when it stays in the resolvent set of `A + tB` for every real
//! `t`. The protected set is always discrete, and it is characterized by the
//! operator identity `B (A - λ)⁻¹ B = 0`. This crate
//!
//! * detects and certifies protected points of a given pair ([`protection`]),
//! * builds pairs with a prescribed protected set ([`realization`]),
//! * and provides the dense symmetric kernels both rely on ([`linalg`]).

pub mod linalg;
pub mod protection;
pub mod realization;

pub use linalg::{LinalgError, Matrix, SpectralDecomposition, SpectralGap, SymmetricMatrix};
pub use protection::{ProtectionError, ProtectionReport};
pub use realization::{PolePair, RealizeError, RealizedPair};
