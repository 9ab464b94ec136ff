//! Automorphism invariants: permutations σ of the level-k weights with
//! S_{σλ,σμ} = S_{λμ} and T_{σλ} = T_λ.
//!
//! Every invariant of a sum of A-type algebras has the form σ_π∘C^c∘σ_a,
//! with σ_π a permutation of equal factors, C^c a product of conjugations
//! and σ_a a simple-current twist by an integer matrix a. For one factor the
//! list collapses to C^a σ_m, with m running over certain divisors of r+1.

mod action;
mod classify;
mod sigma;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modular::ModularData;
use crate::perm::Permutation;
use crate::weights::{Rational, WeightError};

pub(crate) use action::Actions;
pub use classify::{
    classify, classify_bounded, classify_general, count_remark1, generate_group,
    theorem3_generators, theorem3_permutations,
    Classification, Classified, Family, Generator, SingleLabel, DEFAULT_CANDIDATE_BOUND,
};
pub use sigma::{
    check_a_conditions, compose_a, enumerate_sigma_m, inverse_a, realize, sigma_a, sigma_m,
    sigma_m_exponent, sigma_pi, Violation,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AutoInvError {
    #[error("the single-factor construction needs s = 1, got s = {0}")]
    NotSingleFactor(usize),
    #[error("m = {m} does not divide r+1 = {rbar}")]
    NotDivisor { m: i64, rbar: i64 },
    #[error("m·k̃ = {m}·{ktilde} is odd")]
    OddProduct { m: i64, ktilde: i64 },
    #[error("gcd(r̄/m, m·k̃/2) = {gcd} for m = {m}")]
    NotCoprime { m: i64, gcd: i64 },
    #[error("factor permutation has length {got}, expected {expected}")]
    PiLength { expected: usize, got: usize },
    #[error("factor {i} ({ri},{ki}) cannot be sent to factor {j} ({rj},{kj})")]
    PiBlock {
        i: usize,
        j: usize,
        ri: u32,
        ki: u32,
        rj: u32,
        kj: u32,
    },
    #[error("matrix must be {s}x{s}")]
    MatrixShape { s: usize },
    #[error("conjugation bits have length {got}, expected {expected}")]
    CLength { expected: usize, got: usize },
    #[error("matrix violates {}", fmt_violations(.0))]
    Conditions(Vec<Violation>),
    #[error("{count} candidate matrices exceed the bound {bound}")]
    TooManyCandidates { count: u128, bound: u128 },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// The triple (π, c, a) naming σ_π∘C^c∘σ_a.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutoInvForm {
    pub pi: Permutation,
    pub c: Vec<u8>,
    pub a: Vec<Vec<i64>>,
}

impl AutoInvForm {
    pub fn identity(s: usize) -> Self {
        AutoInvForm {
            pi: Permutation::identity(s),
            c: vec![0; s],
            a: vec![vec![0; s]; s],
        }
    }

    pub fn from_a(a: Vec<Vec<i64>>) -> Self {
        let s = a.len();
        AutoInvForm {
            pi: Permutation::identity(s),
            c: vec![0; s],
            a,
        }
    }

    pub fn c_bits(&self) -> Vec<bool> {
        self.c.iter().map(|&x| x % 2 == 1).collect()
    }
}

/// Why a permutation is not an automorphism invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Size { expected: usize, got: usize },
    T { lambda: usize, image: usize, from: Rational, to: Rational },
    S { lambda: usize, mu: usize, defect: f64 },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Size { expected, got } => {
                write!(f, "permutation has length {got}, expected {expected}")
            }
            Witness::T { lambda, image, from, to } => {
                write!(f, "T exponent of {lambda} is {from}, of its image {image} is {to}")
            }
            Witness::S { lambda, mu, defect } => {
                write!(f, "|S_(σ{lambda},σ{mu}) - S_({lambda},{mu})| = {defect:e}")
            }
        }
    }
}

/// Checks T exactly, then S within `tol` over all pairs.
pub fn is_automorphism_invariant(
    md: &ModularData,
    p: &Permutation,
    tol: f64,
) -> Result<(), Witness> {
    let n = md.n();
    if p.len() != n {
        return Err(Witness::Size {
            expected: n,
            got: p.len(),
        });
    }
    for l in 0..n {
        let (from, to) = (md.t_exp(l), md.t_exp(p.apply(l)));
        if !(from - to).is_zero() {
            return Err(Witness::T {
                lambda: l,
                image: p.apply(l),
                from,
                to,
            });
        }
    }
    for l in 0..n {
        let sl = md.s_row(l);
        let sg = md.s_row(p.apply(l));
        for m in l..n {
            let defect = (sg[p.apply(m)] - sl[m]).norm();
            if defect > tol {
                return Err(Witness::S { lambda: l, mu: m, defect });
            }
        }
    }
    Ok(())
}
