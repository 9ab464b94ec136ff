//! Independent reference computations for the integration tests.
//!
//! Weights are embedded in R^{r+1} through ε-coordinates, the Weyl group
//! acts by permuting coordinates, and every sum is taken literally. Nothing
//! here calls into the library beyond reading weight labels.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use kpsym::modular::ModularData;
use kpsym::{AlgebraSpec, Permutation, Weight};
use num_complex::Complex64;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// The confirmation grid of single-factor (r, k) pairs.
pub fn grid() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for (r, kmax) in [(1, 16), (2, 8), (3, 6), (4, 5)] {
        for k in 1..=kmax {
            out.push((r, k));
        }
    }
    out
}

pub fn spec(pairs: &[(u32, u32)]) -> AlgebraSpec {
    AlgebraSpec::from_pairs(pairs).unwrap()
}

pub fn modular(pairs: &[(u32, u32)]) -> ModularData {
    ModularData::new(&spec(pairs))
}

/// Calls `f(p, sign)` for every permutation p of 0..n (Heap's algorithm).
pub fn for_each_permutation<F: FnMut(&[usize], i32) -> bool>(n: usize, mut f: F) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1;
    if !f(&p, sign) {
        return;
    }
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            sign = -sign;
            if !f(&p, sign) {
                return;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// ε-coordinates of λ̄ + ρ̄ for affine labels (λ_0, ..., λ_r).
pub fn shifted_eps(labels: &[u32]) -> Vec<i64> {
    let r = labels.len() - 1;
    let mut v = vec![0i64; r + 1];
    for i in (0..r).rev() {
        v[i] = v[i + 1] + labels[i + 1] as i64 + 1;
    }
    v
}

/// r̄ (x|y) for ε-vectors, an integer.
fn scaled_inner(x: &[i64], y: &[i64]) -> i64 {
    let rbar = x.len() as i64;
    let dot: i64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    rbar * dot - x.iter().sum::<i64>() * y.iter().sum::<i64>()
}

/// One factor's S entry straight from the Weyl-group sum.
pub fn factor_s(k: u32, a: &[u32], b: &[u32]) -> Complex64 {
    let r = a.len() - 1;
    let rbar = (r + 1) as f64;
    let kbar = (k as usize + r + 1) as f64;
    let x = shifted_eps(a);
    let y = shifted_eps(b);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut wx = vec![0i64; r + 1];
    for_each_permutation(r + 1, |p, sign| {
        for (i, &pi) in p.iter().enumerate() {
            wx[i] = x[pi];
        }
        let phase = -2.0 * PI * scaled_inner(&wx, &y) as f64 / (rbar * kbar);
        acc += Complex64::from_polar(sign as f64, phase);
        true
    });
    let pre = Complex64::from_polar(1.0, PI * r as f64 * rbar / 4.0)
        / (kbar.powf(r as f64 / 2.0) * rbar.sqrt());
    pre * acc
}

/// Full S matrix (row-major) in the library's weight order.
pub fn s_matrix(md: &ModularData) -> Vec<Complex64> {
    let spec = md.spec();
    let weights = md.table().weights();
    let n = weights.len();
    let mut cache: HashMap<(usize, Vec<u32>, Vec<u32>), Complex64> = HashMap::new();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, wl) in weights.iter().enumerate() {
        for (j, wm) in weights.iter().enumerate() {
            let mut z = Complex64::new(1.0, 0.0);
            for (f, fac) in spec.factors().iter().enumerate() {
                let key = (f, wl.factor(f).to_vec(), wm.factor(f).to_vec());
                let v = *cache
                    .entry(key)
                    .or_insert_with(|| factor_s(fac.k, wl.factor(f), wm.factor(f)));
                z *= v;
            }
            out[i * n + j] = z;
        }
    }
    out
}

/// T exponent of a weight in [0, 2): Σ_i (λ+ρ|λ+ρ)/k̄ - (ρ|ρ)/h∨.
pub fn t_exponent(spec: &AlgebraSpec, w: &Weight) -> Q {
    let mut e = Q::from_integer(0);
    for (f, fac) in spec.factors().iter().enumerate() {
        let r = fac.r as i64;
        let rbar = r + 1;
        let kbar = fac.k as i64 + rbar;
        let v = shifted_eps(w.factor(f));
        let rho = shifted_eps(&vec![0; r as usize + 1]);
        e += Q::new(scaled_inner(&v, &v), rbar * kbar) - Q::new(scaled_inner(&rho, &rho), rbar * rbar);
    }
    reduce2(e)
}

/// x mod 2 in [0, 2).
pub fn reduce2(x: Q) -> Q {
    let two = Q::from_integer(2);
    let q = (x / two).floor();
    x - two * q
}

/// t(λ) = Σ j λ_j for one factor's labels.
pub fn t_of(labels: &[u32]) -> i64 {
    labels.iter().enumerate().map(|(j, &l)| j as i64 * l as i64).sum()
}

/// J^a on one factor: the label at node j moves to node j + a.
pub fn rotate(labels: &[u32], a: i64) -> Vec<u32> {
    let n = labels.len() as i64;
    let mut out = vec![0; labels.len()];
    for (j, &l) in labels.iter().enumerate() {
        out[(j as i64 + a).rem_euclid(n) as usize] = l;
    }
    out
}

/// C on one factor: node j goes to node -j.
pub fn reflect(labels: &[u32]) -> Vec<u32> {
    let n = labels.len();
    (0..n).map(|j| labels[(n - j) % n]).collect()
}

/// Applies a per-factor label map to a weight.
pub fn map_factors(w: &Weight, mut f: impl FnMut(usize, &[u32]) -> Vec<u32>) -> Weight {
    Weight::new(
        w.labels()
            .iter()
            .enumerate()
            .map(|(i, l)| f(i, l))
            .collect(),
    )
}

/// Largest entrywise distance between two matrices.
pub fn max_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Every permutation σ of the weights with T_σλ = T_λ exactly and
/// |S_{σλ,σμ} - S_{λμ}| ≤ tol, found by walking all n! permutations.
pub fn brute_force_invariants(md: &ModularData, tol: f64) -> Vec<Permutation> {
    let n = md.n();
    let s = s_matrix(md);
    let t: Vec<Q> = md
        .table()
        .weights()
        .iter()
        .map(|w| t_exponent(md.spec(), w))
        .collect();
    let mut out = Vec::new();
    for_each_permutation(n, |p, _| {
        let ok = (0..n).all(|l| t[p[l]] == t[l])
            && (0..n).all(|l| (0..n).all(|m| (s[p[l] * n + p[m]] - s[l * n + m]).norm() <= tol));
        if ok {
            out.push(Permutation::from_image(p.to_vec()).unwrap());
        }
        true
    });
    out.sort();
    out
}

pub fn sorted(mut v: Vec<Permutation>) -> Vec<Permutation> {
    v.sort();
    v.dedup();
    v
}
