//! Symmetries of the Kac-Peterson modular matrices of (A_{r_1} + ... + A_{r_s})^(1).
//!
//! The crate computes the modular data (S, T, q-dimensions, Galois action)
//! and the fusion rules of these affine algebras at any level, constructs
//! the automorphism invariants built from simple currents, conjugations and
//! factor permutations, and cross-checks that list against an exhaustive
//! search for every permutation commuting with S and T.
//!
//! Module map:
//!
//! * [`weights`]: level-k weights, the bilinear form, J/C, Weyl folding.
//! * [`modular`]: S, T, q-dimensions, character ratios, Galois symmetry.
//! * [`fusion`]: Freudenthal multiplicities, tensor products, Verlinde and
//!   Kac-Walton fusion coefficients.
//! * [`autoinv`]: σ_m, σ_π, σ_a, the closed-form classification.
//! * [`search`]: the brute-force oracle.
//! * [`cli`]: the `kpsym` command line.

pub mod autoinv;
pub mod cli;
pub mod export;
pub mod fusion;
pub mod modular;
pub mod perm;
pub mod search;
pub mod weights;

pub use perm::Permutation;
pub use weights::{AlgebraSpec, Factor, Weight, WeightTable};

/// Numeric tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Equality of S entries and unitarity checks.
    pub unitary: f64,
    /// Character ratios against S-entry ratios.
    pub character: f64,
    /// Verlinde integrality.
    pub fusion: f64,
}

impl Tolerances {
    pub const UNITARY: f64 = 1e-9;
    pub const CHARACTER: f64 = 1e-8;
    pub const FUSION: f64 = 1e-6;
    /// Width used to cluster q-dimensions into search classes.
    pub const Q_CLASS: f64 = 1e-7;
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary: Self::UNITARY,
            character: Self::CHARACTER,
            fusion: Self::FUSION,
        }
    }
}
