use std::fmt;

use num_integer::Integer;

use super::{Actions, AutoInvError, AutoInvForm};
use crate::perm::Permutation;
use crate::weights::{Rational, WeightTable};

fn single_factor(table: &WeightTable) -> Result<crate::weights::Factor, AutoInvError> {
    let spec = table.spec();
    if spec.len() != 1 {
        return Err(AutoInvError::NotSingleFactor(spec.len()));
    }
    Ok(spec.factor(0)?)
}

/// The J-exponent multiplier -v·m of σ_m, reduced mod r̄, after checking
/// that m is admissible. v is the least positive solution of
/// v·m·k̃/2 ≡ 1 (mod r̄/m).
pub fn sigma_m_exponent(table: &WeightTable, m: i64) -> Result<i64, AutoInvError> {
    let f = single_factor(table)?;
    let (rbar, kt) = (f.rbar(), f.ktilde());
    if m <= 0 || rbar % m != 0 {
        return Err(AutoInvError::NotDivisor { m, rbar });
    }
    if (m * kt) % 2 != 0 {
        return Err(AutoInvError::OddProduct { m, ktilde: kt });
    }
    let modulus = rbar / m;
    let half = m * kt / 2;
    let g = modulus.gcd(&half);
    if g != 1 {
        return Err(AutoInvError::NotCoprime { m, gcd: g });
    }
    let v = (1..=modulus)
        .find(|v| (v * half - 1).rem_euclid(modulus) == 0)
        .expect("a unit has an inverse");
    Ok((-v * m).rem_euclid(rbar))
}

/// σ_m λ = J^{-v·m·t(λ)} λ.
pub fn sigma_m(table: &WeightTable, m: i64) -> Result<Permutation, AutoInvError> {
    let e = sigma_m_exponent(table, m)?;
    Ok(Actions::new(table).sigma_a(&[vec![e]]))
}

/// Every admissible divisor m of r̄ with its permutation, dropping
/// permutations already produced by a smaller m.
pub fn enumerate_sigma_m(table: &WeightTable) -> Result<Vec<(i64, Permutation)>, AutoInvError> {
    let f = single_factor(table)?;
    let mut out: Vec<(i64, Permutation)> = Vec::new();
    for m in 1..=f.rbar() {
        if let Ok(p) = sigma_m(table, m) {
            if !out.iter().any(|(_, q)| *q == p) {
                out.push((m, p));
            }
        }
    }
    Ok(out)
}

fn check_pi(table: &WeightTable, pi: &Permutation) -> Result<(), AutoInvError> {
    let spec = table.spec();
    if pi.len() != spec.len() {
        return Err(AutoInvError::PiLength {
            expected: spec.len(),
            got: pi.len(),
        });
    }
    for (i, fi) in spec.factors().iter().enumerate() {
        let j = pi.apply(i);
        let fj = spec.factors()[j];
        if *fi != fj {
            return Err(AutoInvError::PiBlock {
                i,
                j,
                ri: fi.r,
                ki: fi.k,
                rj: fj.r,
                kj: fj.k,
            });
        }
    }
    Ok(())
}

/// (σ_π λ)_(i) = λ_(π i); π may only exchange factors of equal rank and level.
pub fn sigma_pi(table: &WeightTable, pi: &Permutation) -> Result<Permutation, AutoInvError> {
    check_pi(table, pi)?;
    Ok(Actions::new(table).pi(pi))
}

/// A failed integrality, parity or cross condition on the matrix a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// a_ij·r̄_i/r̄_j is not an integer.
    Integrality { i: usize, j: usize },
    /// 2a_ii/r̄_i + Σ_j k_j a_ij²/r̄_j - Σ_j k_j a_ij is not even.
    Parity { i: usize },
    /// a_ij/r̄_j + a_ji/r̄_i + Σ_l k_l a_il a_jl/r̄_l is not an integer.
    Cross { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Integrality { i, j } => write!(f, "integrality at ({i},{j})"),
            Violation::Parity { i } => write!(f, "parity at row {i}"),
            Violation::Cross { i, j } => write!(f, "cross condition at ({i},{j})"),
        }
    }
}

fn check_shape(s: usize, a: &[Vec<i64>]) -> Result<(), AutoInvError> {
    if a.len() != s || a.iter().any(|row| row.len() != s) {
        return Err(AutoInvError::MatrixShape { s });
    }
    Ok(())
}

/// Evaluates the three congruence families exactly; empty iff a is admissible.
pub fn check_a_conditions(table: &WeightTable, a: &[Vec<i64>]) -> Result<Vec<Violation>, AutoInvError> {
    let spec = table.spec();
    let s = spec.len();
    check_shape(s, a)?;
    let rbar: Vec<i64> = spec.factors().iter().map(|f| f.rbar()).collect();
    let k: Vec<i64> = spec.factors().iter().map(|f| f.k()).collect();
    Ok(violations(&rbar, &k, a))
}

pub(crate) fn violations(rbar: &[i64], k: &[i64], a: &[Vec<i64>]) -> Vec<Violation> {
    let s = rbar.len();
    let q = |num: i64, den: i64| Rational::new(num, den);
    let mut out = Vec::new();
    for i in 0..s {
        for j in 0..s {
            if (a[i][j] * rbar[i]) % rbar[j] != 0 {
                out.push(Violation::Integrality { i, j });
            }
        }
    }
    for i in 0..s {
        let mut lhs = q(2 * a[i][i], rbar[i]);
        let mut rhs = 0i64;
        for j in 0..s {
            lhs += q(k[j] * a[i][j] * a[i][j], rbar[j]);
            rhs += k[j] * a[i][j];
        }
        let diff = (lhs - Rational::from_integer(rhs)) / Rational::from_integer(2);
        if !diff.is_integer() {
            out.push(Violation::Parity { i });
        }
    }
    for i in 0..s {
        for j in i..s {
            let mut x = q(a[i][j], rbar[j]) + q(a[j][i], rbar[i]);
            for l in 0..s {
                x += q(k[l] * a[i][l] * a[j][l], rbar[l]);
            }
            if !x.is_integer() {
                out.push(Violation::Cross { i, j });
            }
        }
    }
    out
}

/// σ_a λ: factor j is rotated by J^{Σ_i a_ij t(λ_(i))}.
pub fn sigma_a(table: &WeightTable, a: &[Vec<i64>]) -> Result<Permutation, AutoInvError> {
    let v = check_a_conditions(table, a)?;
    if !v.is_empty() {
        return Err(AutoInvError::Conditions(v));
    }
    Ok(Actions::new(table).sigma_a(a))
}

/// σ_b∘σ_a = σ_c with c_ij = a_ij + b_ij + Σ_l k_l a_il b_lj (mod r̄_j).
pub fn compose_a(table: &WeightTable, a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, AutoInvError> {
    let spec = table.spec();
    let s = spec.len();
    check_shape(s, a)?;
    check_shape(s, b)?;
    let rbar: Vec<i64> = spec.factors().iter().map(|f| f.rbar()).collect();
    let k: Vec<i64> = spec.factors().iter().map(|f| f.k()).collect();
    Ok((0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    let cross: i64 = (0..s).map(|l| k[l] * a[i][l] * b[l][j]).sum();
                    (a[i][j] + b[i][j] + cross).rem_euclid(rbar[j])
                })
                .collect()
        })
        .collect())
}

/// The matrix b of σ_a⁻¹: b_ij = r̄_j a_ji / r̄_i.
pub fn inverse_a(table: &WeightTable, a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, AutoInvError> {
    let spec = table.spec();
    let s = spec.len();
    check_shape(s, a)?;
    let rbar: Vec<i64> = spec.factors().iter().map(|f| f.rbar()).collect();
    let mut b = vec![vec![0; s]; s];
    for i in 0..s {
        for j in 0..s {
            let num = rbar[j] * a[j][i];
            if num % rbar[i] != 0 {
                return Err(AutoInvError::Conditions(vec![Violation::Integrality { i: j, j: i }]));
            }
            b[i][j] = (num / rbar[i]).rem_euclid(rbar[j]);
        }
    }
    Ok(b)
}

/// The permutation σ_π∘C^c∘σ_a named by a form.
pub fn realize(table: &WeightTable, form: &AutoInvForm) -> Result<Permutation, AutoInvError> {
    let s = table.spec().len();
    if form.c.len() != s {
        return Err(AutoInvError::CLength {
            expected: s,
            got: form.c.len(),
        });
    }
    let sa = sigma_a(table, &form.a)?;
    let sp = sigma_pi(table, &form.pi)?;
    let acts = Actions::new(table);
    let c = acts.c(&form.c_bits());
    Ok(sp.compose(&c.compose(&sa)))
}
