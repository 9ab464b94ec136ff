//! Weight multiplicities of finite-dimensional A_r modules (Freudenthal).

use std::collections::{BTreeMap, HashMap};

use super::FusionError;
use crate::weights::{form_scaled, simple_root, AlgebraSpec};

/// All weights β̄ of the irreducible module L̄(λ̄) with multiplicities.
/// Weights are in Dynkin coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    r: u32,
    base: Vec<i64>,
    mults: BTreeMap<Vec<i64>, u64>,
}

impl WeightSystem {
    pub fn rank(&self) -> u32 {
        self.r
    }

    /// Highest weight λ̄.
    pub fn base(&self) -> &[i64] {
        &self.base
    }

    pub fn mult(&self, beta: &[i64]) -> u64 {
        self.mults.get(beta).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &u64)> {
        self.mults.iter()
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    /// Σ of multiplicities.
    pub fn dimension(&self) -> u64 {
        self.mults.values().sum()
    }
}

/// Positive roots of A_r in Dynkin coordinates with their heights.
pub(crate) fn positive_roots(r: u32) -> Vec<(Vec<i64>, i64)> {
    let mut out = Vec::new();
    for a in 1..=r as usize {
        let mut acc = vec![0i64; r as usize];
        for b in a..=r as usize {
            for (x, y) in acc.iter_mut().zip(simple_root(r, b)) {
                *x += y;
            }
            out.push((acc.clone(), (b - a + 1) as i64));
        }
    }
    out
}

/// Weyl dimension formula, exact. `None` on overflow.
pub fn weyl_dimension(highest: &[u32]) -> Option<u128> {
    let x: Vec<u128> = highest.iter().map(|&v| v as u128 + 1).collect();
    let r = x.len();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for a in 0..r {
        let mut sum = 0u128;
        for b in a..r {
            sum += x[b];
            num = num.checked_mul(sum)?;
            den = den.checked_mul((b - a + 1) as u128)?;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    Some(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Weight system of the finite module with highest weight `lambda_bar` for
/// factor `i`, with the default size guard.
pub fn weight_multiplicities(
    spec: &AlgebraSpec,
    i: usize,
    lambda_bar: &[u32],
) -> Result<WeightSystem, FusionError> {
    weight_multiplicities_bounded(spec, i, lambda_bar, crate::modular::DEFAULT_MODULE_BOUND)
}

/// As [`weight_multiplicities`], refusing modules of dimension above `bound`.
pub fn weight_multiplicities_bounded(
    spec: &AlgebraSpec,
    i: usize,
    lambda_bar: &[u32],
    bound: u64,
) -> Result<WeightSystem, FusionError> {
    let f = spec.factor(i)?;
    if lambda_bar.len() != f.r as usize {
        return Err(FusionError::BadFiniteWeight {
            expected: f.r as usize,
            got: lambda_bar.len(),
        });
    }
    let dim = weyl_dimension(lambda_bar).unwrap_or(u128::MAX);
    if dim > bound as u128 {
        return Err(FusionError::ModuleTooLarge { dim, bound });
    }
    Ok(freudenthal(f.r, lambda_bar))
}

/// Freudenthal's recursion, processed by depth below the highest weight:
///
/// ((λ+ρ|λ+ρ) - (μ+ρ|μ+ρ)) m(μ) = 2 Σ_{α>0} Σ_{j>=1} m(μ+jα) (μ+jα|α)
///
/// Every weight of depth d has a weight of depth d-1 one simple root
/// above it, so candidates are generated from the previous layer.
pub(crate) fn freudenthal(r: u32, lambda_bar: &[u32]) -> WeightSystem {
    let rn = r as usize;
    let base: Vec<i64> = lambda_bar.iter().map(|&v| v as i64).collect();
    let rho = vec![1i64; rn];
    let shift = |v: &[i64]| -> Vec<i64> { v.iter().zip(&rho).map(|(a, b)| a + b).collect() };
    let top = {
        let s = shift(&base);
        form_scaled(r, &s, &s)
    };
    let roots = positive_roots(r);
    let simple: Vec<Vec<i64>> = (1..=rn).map(|j| simple_root(r, j)).collect();

    let mut mults: HashMap<Vec<i64>, u64> = HashMap::new();
    mults.insert(base.clone(), 1);
    let mut layer = vec![base.clone()];
    let mut depth = 0i64;
    while !layer.is_empty() {
        depth += 1;
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        for mu in &layer {
            for a in &simple {
                let c: Vec<i64> = mu.iter().zip(a).map(|(x, y)| x - y).collect();
                candidates.push(c);
            }
        }
        candidates.sort();
        candidates.dedup();
        let mut next = Vec::new();
        for mu in candidates {
            let s = shift(&mu);
            let denom = top - form_scaled(r, &s, &s);
            let mut numer = 0i64;
            for (alpha, height) in &roots {
                let mut j = 1;
                while j * height <= depth {
                    let up: Vec<i64> = mu.iter().zip(alpha).map(|(x, y)| x + j * y).collect();
                    if let Some(&m) = mults.get(&up) {
                        numer += 2 * m as i64 * form_scaled(r, &up, alpha);
                    }
                    j += 1;
                }
            }
            if denom == 0 {
                debug_assert_eq!(numer, 0);
                continue;
            }
            debug_assert_eq!(numer % denom, 0, "Freudenthal quotient must be integral");
            let m = numer / denom;
            if m > 0 {
                mults.insert(mu.clone(), m as u64);
                next.push(mu);
            }
        }
        layer = next;
    }
    WeightSystem {
        r,
        base,
        mults: mults.into_iter().collect(),
    }
}
