//! Kac-Peterson S and T matrices, q-dimensions and character ratios.
//!
//! S is evaluated numerically (f64). The Weyl-group sum of each factor is
//! rewritten as an (r+1)×(r+1) determinant in orthogonal coordinates,
//! which costs O(r̄³) per entry instead of O(r̄!·r̄). T is diagonal and is
//! stored exactly: T_λλ = exp(iπ·e(λ)) with e(λ) a rational in [0, 2).

mod galois;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::fusion::{weight_multiplicities_bounded, FusionError};
use crate::perm::Permutation;
use crate::weights::{
    apply_c, form_scaled, rho_norm, AlgebraSpec, Factor, FactorTable, Rational, Weight,
    WeightError, WeightTable,
};

pub use galois::{conductor, galois_action, GaloisAction};

/// Default cap on the dimension of a finite module whose weight system is
/// expanded for a character value.
pub const DEFAULT_MODULE_BOUND: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularError {
    #[error("weight {0} is not in the table")]
    UnknownWeight(Weight),
    #[error("ell = {ell} is not coprime to the conductor {conductor}")]
    NotCoprime { ell: i64, conductor: i64 },
    #[error("Galois fold of {weight} hit an alcove wall (ell = {ell})")]
    GaloisWall { weight: Weight, ell: i64 },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

/// Orthogonal coordinates of λ̄ + ρ̄: l_a = Σ_{j>=a} (λ_j + 1), a = 1..r+1.
/// Not centred; the last coordinate is 0.
pub(crate) fn shifted_coords(labels: &[u32]) -> Vec<i64> {
    let r = labels.len() - 1;
    let mut l = vec![0i64; r + 1];
    let mut acc = 0i64;
    for a in (1..=r).rev() {
        acc += labels[a] as i64 + 1;
        l[a - 1] = acc;
    }
    l
}

fn unit(num: i64, den: i64) -> Complex64 {
    let p = num.rem_euclid(den) as f64 / den as f64;
    Complex64::from_polar(1.0, 2.0 * PI * p)
}

fn determinant(mut m: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a * n + col].norm().total_cmp(&m[b * n + col].norm()))
            .unwrap();
        if m[pivot * n + col].norm() == 0.0 {
            return Complex64::zero();
        }
        if pivot != col {
            for j in 0..n {
                m.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = m[col * n + j];
                m[row * n + j] -= factor * v;
            }
        }
    }
    det
}

/// S for a single factor, row-major over the factor table.
fn factor_s_matrix(ft: &FactorTable) -> Vec<Complex64> {
    let f = ft.factor();
    let rbar = f.rbar();
    let kbar = f.kbar();
    let m = ft.len();
    let nodes = f.nodes();
    let coords: Vec<Vec<i64>> = ft.iter().map(shifted_coords).collect();
    let sums: Vec<i64> = coords.iter().map(|l| l.iter().sum()).collect();
    // ζ^p with ζ = exp(-2πi/k̄)
    let zeta: Vec<Complex64> = (0..kbar).map(|p| unit(-p, kbar)).collect();
    let prefactor = unit((f.r as i64 * rbar).rem_euclid(8), 8)
        / ((kbar as f64).powf(f.r as f64 / 2.0) * (rbar as f64).sqrt());

    let mut s = vec![Complex64::zero(); m * m];
    s.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        let li = &coords[i];
        let mut mat = vec![Complex64::zero(); nodes * nodes];
        for (j, out) in row.iter_mut().enumerate() {
            let lj = &coords[j];
            for a in 0..nodes {
                for b in 0..nodes {
                    mat[a * nodes + b] = zeta[(li[a] * lj[b]).rem_euclid(kbar) as usize];
                }
            }
            let centre = unit(sums[i] * sums[j], rbar * kbar);
            *out = prefactor * centre * determinant(mat.clone(), nodes);
        }
    });
    s
}

/// e(λ) = (λ+ρ|λ+ρ)/k̄ - (ρ|ρ)/h∨ for one factor, unreduced.
pub(crate) fn factor_t_exponent(f: Factor, labels: &[u32]) -> Rational {
    let x: Vec<i64> = labels[1..].iter().map(|&v| v as i64 + 1).collect();
    let norm = Rational::new(form_scaled(f.r, &x, &x), f.rbar());
    norm / f.kbar() - rho_norm(f.r) / f.dual_coxeter()
}

pub(crate) fn reduce_mod2(x: Rational) -> Rational {
    let two = Rational::from_integer(2);
    let q = (x / two).floor();
    x - q * two
}

/// Positive-root sine product for one factor.
pub(crate) fn factor_q_dimension(f: Factor, labels: &[u32]) -> f64 {
    let l = shifted_coords(labels);
    let kbar = f.kbar() as f64;
    let mut q = 1.0;
    for a in 0..l.len() {
        for b in a + 1..l.len() {
            q *= (PI * (l[a] - l[b]) as f64 / kbar).sin() / (PI * (b - a) as f64 / kbar).sin();
        }
    }
    q
}

/// Modular data of an algebra at a fixed level.
#[derive(Debug, Clone)]
pub struct ModularData {
    table: WeightTable,
    factor_s: Vec<Vec<Complex64>>,
    s: Vec<Complex64>,
    t_exp: Vec<Rational>,
    anomaly: Vec<Rational>,
    q: Vec<f64>,
    conj: Permutation,
}

/// Computes S, T and the q-dimensions for every weight of `table`.
pub fn build_modular_data(table: WeightTable) -> ModularData {
    let n = table.len();
    let factor_s: Vec<Vec<Complex64>> = table.factor_tables().iter().map(factor_s_matrix).collect();
    let locals: Vec<Vec<usize>> = (0..n).map(|t| table.local_indices(t)).collect();

    let mut s = vec![Complex64::zero(); n * n];
    s.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, out) in row.iter_mut().enumerate() {
            let mut v = Complex64::new(1.0, 0.0);
            for (f, fs) in factor_s.iter().enumerate() {
                let m = table.factor_table(f).len();
                v *= fs[locals[i][f] * m + locals[j][f]];
            }
            *out = v;
        }
    });

    let spec = table.spec().clone();
    let mut t_exp = Vec::with_capacity(n);
    let mut anomaly = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    let mut conj = Vec::with_capacity(n);
    let all_c = vec![true; spec.len()];
    for w in table.weights() {
        let e: Rational = spec
            .factors()
            .iter()
            .zip(w.labels())
            .map(|(&f, labels)| factor_t_exponent(f, labels))
            .sum();
        t_exp.push(reduce_mod2(e));
        anomaly.push(e / 2);
        q.push(
            spec.factors()
                .iter()
                .zip(w.labels())
                .map(|(&f, labels)| factor_q_dimension(f, labels))
                .product(),
        );
        conj.push(table.index_of(&apply_c(&spec, w, &all_c)).expect("C preserves the level"));
    }

    ModularData {
        table,
        factor_s,
        s,
        t_exp,
        anomaly,
        q,
        conj: Permutation::from_image(conj).expect("C is an involution"),
    }
}

impl ModularData {
    pub fn new(spec: &AlgebraSpec) -> Self {
        build_modular_data(WeightTable::new(spec.clone()))
    }

    pub fn table(&self) -> &WeightTable {
        &self.table
    }

    pub fn spec(&self) -> &AlgebraSpec {
        self.table.spec()
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn s(&self, i: usize, j: usize) -> Complex64 {
        self.s[i * self.n() + j]
    }

    pub fn s_row(&self, i: usize) -> &[Complex64] {
        let n = self.n();
        &self.s[i * n..(i + 1) * n]
    }

    /// Row-major n×n S matrix.
    pub fn s_matrix(&self) -> &[Complex64] {
        &self.s
    }

    /// S of factor `f` alone, row-major over that factor's table.
    pub fn factor_s(&self, f: usize) -> &[Complex64] {
        &self.factor_s[f]
    }

    /// e(λ) in [0, 2) with T_λλ = exp(iπ e(λ)).
    pub fn t_exp(&self, i: usize) -> Rational {
        self.t_exp[i]
    }

    pub fn t_exps(&self) -> &[Rational] {
        &self.t_exp
    }

    pub fn t_phase(&self, i: usize) -> Complex64 {
        let e = self.t_exp[i];
        Complex64::from_polar(1.0, PI * (*e.numer() as f64) / (*e.denom() as f64))
    }

    /// Modular anomaly m_λ = e(λ)/2, unreduced.
    pub fn anomaly(&self, i: usize) -> Rational {
        self.anomaly[i]
    }

    /// Q(λ) from the sine product.
    pub fn q(&self, i: usize) -> f64 {
        self.q[i]
    }

    pub fn q_dims(&self) -> &[f64] {
        &self.q
    }

    /// The conjugation C as a permutation of indices.
    pub fn conjugation(&self) -> &Permutation {
        &self.conj
    }

    pub fn index_of(&self, w: &Weight) -> Result<usize, ModularError> {
        self.table
            .index_of(w)
            .ok_or_else(|| ModularError::UnknownWeight(w.clone()))
    }

    /// max |(S S†)_{ij} - δ_ij|
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let ri = self.s_row(i);
                (0..n)
                    .map(|j| {
                        let rj = self.s_row(j);
                        let dot: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        (dot - want).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// max |S_ij - S_ji|
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.s(i, j) - self.s(j, i)).norm());
            }
        }
        worst
    }

    /// max |(S²)_{λμ} - δ_{μ,Cλ}|
    pub fn charge_conjugation_defect(&self) -> f64 {
        let n = self.n();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let ri = self.s_row(i);
                (0..n)
                    .map(|j| {
                        let v: Complex64 = (0..n).map(|b| ri[b] * self.s(b, j)).sum();
                        let want = if self.conj.apply(i) == j { 1.0 } else { 0.0 };
                        (v - want).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Q(λ) computed directly from the positive-root sine product.
pub fn q_dimension(md: &ModularData, w: &Weight) -> Result<f64, ModularError> {
    Ok(md.q(md.index_of(w)?))
}

/// ch_λ̄ evaluated at -2πi ν^{-1}(μ̄+ρ̄)/k̄, from the weight system of λ̄.
pub fn char_ratio(md: &ModularData, lambda: &Weight, mu: &Weight) -> Result<Complex64, ModularError> {
    char_ratio_bounded(md, lambda, mu, DEFAULT_MODULE_BOUND)
}

/// As [`char_ratio`], refusing modules of dimension above `bound`.
pub fn char_ratio_bounded(
    md: &ModularData,
    lambda: &Weight,
    mu: &Weight,
    bound: u64,
) -> Result<Complex64, ModularError> {
    md.index_of(lambda)?;
    md.index_of(mu)?;
    let spec = md.spec();
    let mut value = Complex64::new(1.0, 0.0);
    for (i, f) in spec.factors().iter().enumerate() {
        let system = weight_multiplicities_bounded(spec, i, lambda.finite(i), bound)?;
        let y: Vec<i64> = mu.finite(i).iter().map(|&v| v as i64 + 1).collect();
        let modulus = f.rbar() * f.kbar();
        let mut acc = Complex64::zero();
        for (beta, &mult) in system.iter() {
            acc += unit(-form_scaled(f.r, beta, &y), modulus) * mult as f64;
        }
        value *= acc;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(r: u32, k: u32) -> ModularData {
        ModularData::new(&AlgebraSpec::simple(r, k).unwrap())
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn a1_level1_s_matrix() {
        let m = md(1, 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [[h, h], [h, -h]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m.s(i, j), Complex64::new(want[i][j], 0.0), 1e-12), "{i}{j}: {}", m.s(i, j));
            }
        }
    }

    #[test]
    fn a1_level1_vacuum_t() {
        let m = md(1, 1);
        // e = -1/12, reduced into [0,2)
        assert_eq!(m.t_exp(0), Rational::new(23, 12));
        assert_eq!(m.anomaly(0), Rational::new(-1, 24));
        // central charge c = 1: T_00 = exp(-2πi c/24)
        assert!(close(m.t_phase(0), Complex64::from_polar(1.0, -2.0 * PI / 24.0), 1e-14));
    }

    #[test]
    fn vacuum_row_has_unit_norm() {
        for (r, k) in [(1, 3), (2, 2), (3, 2), (2, 4)] {
            let m = md(r, k);
            let norm: f64 = m.s_row(0).iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn q_dimension_examples() {
        let m = md(1, 2);
        let omega = m.spec().omega(0, 1).unwrap();
        assert!((q_dimension(&m, &m.spec().vacuum()).unwrap() - 1.0).abs() < 1e-15);
        assert!((q_dimension(&m, &omega).unwrap() - 2f64.sqrt()).abs() < 1e-12);

        let m = md(3, 4);
        let omega = m.spec().omega(0, 1).unwrap();
        let want = (PI * 4.0 / 8.0).sin() / (PI / 8.0).sin();
        assert!((q_dimension(&m, &omega).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn q_matches_s_ratio() {
        let m = ModularData::new(&AlgebraSpec::from_pairs(&[(2, 3), (1, 2)]).unwrap());
        for i in 0..m.n() {
            let ratio = m.s(i, 0) / m.s(0, 0);
            assert!((ratio - Complex64::new(m.q(i), 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn char_ratio_examples() {
        let m = md(1, 2);
        let vac = m.spec().vacuum();
        for mu in m.table().weights() {
            assert!(close(char_ratio(&m, &vac, mu).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
        }
        let omega = m.spec().omega(0, 1).unwrap();
        let q = m.q(m.index_of(&omega).unwrap());
        assert!(close(char_ratio(&m, &omega, &vac).unwrap(), Complex64::new(q, 0.0), 1e-12));

        let lam = Weight::new(vec![vec![0, 2]]);
        let mu = Weight::new(vec![vec![1, 1]]);
        let (li, mi) = (m.index_of(&lam).unwrap(), m.index_of(&mu).unwrap());
        let want = m.s(li, mi) / m.s(0, mi);
        assert!(close(char_ratio(&m, &lam, &mu).unwrap(), want, 1e-9));
    }

    #[test]
    fn char_ratio_respects_bound() {
        let m = md(2, 4);
        let big = Weight::new(vec![vec![0, 2, 2]]);
        // dim L(2,2) = 27
        assert!(char_ratio_bounded(&m, &big, &m.spec().vacuum(), 26).is_err());
        assert!(char_ratio_bounded(&m, &big, &m.spec().vacuum(), 27).is_ok());
    }

    #[test]
    fn unknown_weight_is_an_error() {
        let m = md(1, 2);
        let bad = Weight::new(vec![vec![3, 0]]);
        assert!(matches!(q_dimension(&m, &bad), Err(ModularError::UnknownWeight(_))));
    }

    #[test]
    fn determinant_small() {
        let m = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(4.0, 0.0),
        ];
        assert!(close(determinant(m, 2), Complex64::new(-2.0, 0.0), 1e-14));
    }
}
