//! Fusion coefficients N_{λμ}^ν by two independent routes: the Verlinde
//! sum over S, and finite tensor products (Racah-Speiser) folded into the
//! level-k alcove (Kac-Walton).

mod table;
mod weight_system;

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::modular::ModularData;
use crate::weights::{finite_fold, AlgebraSpec, Fold, Weight, WeightError};

pub use table::FusionTable;
pub use weight_system::{
    weight_multiplicities, weight_multiplicities_bounded, weyl_dimension, WeightSystem,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("finite weight has {got} labels, expected {expected}")]
    BadFiniteWeight { expected: usize, got: usize },
    #[error("module dimension {dim} exceeds the bound {bound}")]
    ModuleTooLarge { dim: u128, bound: u64 },
    #[error("Verlinde sum {re}+{im}i is not a nonnegative integer within {tol}")]
    NonIntegral { re: f64, im: f64, tol: f64 },
    #[error("Kac-Walton accumulated {value} at {nu}; the fold is broken")]
    NegativeCoefficient { nu: Weight, value: i64 },
    #[error("weight {0} is not in the table")]
    UnknownWeight(Weight),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// Decomposition of L̄(λ̄) ⊗ L̄(μ̄) for factor `i`, keyed by the finite
/// highest weights ν̄ that occur.
pub fn tensor_product(
    spec: &AlgebraSpec,
    i: usize,
    lambda_bar: &[u32],
    mu_bar: &[u32],
) -> Result<BTreeMap<Vec<u32>, u64>, FusionError> {
    let f = spec.factor(i)?;
    for x in [lambda_bar, mu_bar] {
        if x.len() != f.r as usize {
            return Err(FusionError::BadFiniteWeight {
                expected: f.r as usize,
                got: x.len(),
            });
        }
    }
    // expand the smaller module
    let (small, other) = if weyl_dimension(lambda_bar) <= weyl_dimension(mu_bar) {
        (lambda_bar, mu_bar)
    } else {
        (mu_bar, lambda_bar)
    };
    let system = weight_multiplicities(spec, i, small)?;
    Ok(racah_speiser(&system, other))
}

pub(crate) fn racah_speiser(system: &WeightSystem, other: &[u32]) -> BTreeMap<Vec<u32>, u64> {
    let mut acc: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut shifted = vec![0i64; other.len()];
    for (beta, &m) in system.iter() {
        for (j, s) in shifted.iter_mut().enumerate() {
            *s = other[j] as i64 + beta[j] + 1;
        }
        if let Fold::Chamber { labels, sign } = finite_fold(&shifted) {
            *acc.entry(labels).or_default() += sign as i64 * m as i64;
        }
    }
    acc.into_iter()
        .filter_map(|(nu, v)| {
            debug_assert!(v >= 0, "Racah-Speiser produced a negative multiplicity");
            (v > 0).then_some((nu, v as u64))
        })
        .collect()
}

/// mult of L̄(ν̄) in L̄(λ̄) ⊗ L̄(μ̄).
pub fn tensor_multiplicity(
    spec: &AlgebraSpec,
    i: usize,
    lambda_bar: &[u32],
    mu_bar: &[u32],
    nu_bar: &[u32],
) -> Result<u64, FusionError> {
    Ok(tensor_product(spec, i, lambda_bar, mu_bar)?
        .get(nu_bar)
        .copied()
        .unwrap_or(0))
}

/// Σ_β S_λβ S_μβ conj(S_νβ) / S_0β, unrounded.
pub fn verlinde_raw(md: &ModularData, lambda: usize, mu: usize, nu: usize) -> Complex64 {
    let s0 = md.s_row(0);
    let sl = md.s_row(lambda);
    let sm = md.s_row(mu);
    let sn = md.s_row(nu);
    (0..md.n())
        .map(|b| sl[b] * sm[b] * sn[b].conj() / s0[b])
        .sum()
}

/// The Verlinde coefficient, which must be within `tol` of a nonnegative
/// integer with vanishing imaginary part.
pub fn fusion_verlinde(
    md: &ModularData,
    lambda: &Weight,
    mu: &Weight,
    nu: &Weight,
    tol: f64,
) -> Result<f64, FusionError> {
    let idx = |w: &Weight| {
        md.table()
            .index_of(w)
            .ok_or_else(|| FusionError::UnknownWeight(w.clone()))
    };
    let z = verlinde_raw(md, idx(lambda)?, idx(mu)?, idx(nu)?);
    if z.im.abs() > tol || (z.re - z.re.round()).abs() > tol || z.re.round() < 0.0 {
        return Err(FusionError::NonIntegral {
            re: z.re,
            im: z.im,
            tol,
        });
    }
    Ok(z.re)
}

/// All N_{λμ}^ν for fixed λ, μ via Kac-Walton, keyed by ν.
pub fn fusion_kac_walton(
    spec: &AlgebraSpec,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Weight, u64>, FusionError> {
    lambda.validate(spec)?;
    mu.validate(spec)?;
    let ft = FusionTable::new(crate::weights::WeightTable::new(spec.clone()));
    let l = ft.table().index_of(lambda).expect("validated");
    let m = ft.table().index_of(mu).expect("validated");
    Ok(ft
        .products(l, m)?
        .iter()
        .map(|(&nu, &v)| (ft.table().weight(nu).clone(), v))
        .collect())
}
