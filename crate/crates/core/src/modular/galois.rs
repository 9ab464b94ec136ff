//! Galois symmetry of S.
//!
//! For ℓ coprime to the conductor, the Galois automorphism ζ ↦ ζ^ℓ sends
//! S_{λμ} to ε(λ) S_{λ^g,μ} up to a global sign, where λ^g + ρ is the alcove
//! representative of ℓ(λ + ρ) and ε(λ) is the parity of the folding word.

use num_integer::Integer;

use super::{ModularData, ModularError};
use crate::perm::Permutation;
use crate::weights::{affine_fold, AlgebraSpec, Fold, Weight};

/// lcm over factors of 4·k̄·r̄. A multiple of the order of the cyclotomic
/// field containing every S entry.
pub fn conductor(spec: &AlgebraSpec) -> i64 {
    spec.factors()
        .iter()
        .fold(1i64, |acc, f| acc.lcm(&(4 * f.kbar() * f.rbar())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisAction {
    pub ell: i64,
    pub conductor: i64,
    pub image: Permutation,
    pub signs: Vec<i32>,
}

impl GaloisAction {
    /// max over λ, μ of |ε(λ) S_{λ^g,μ} - ε(μ) S_{λ,μ^g}|.
    pub fn identity_defect(&self, md: &ModularData) -> f64 {
        let n = md.n();
        let mut worst: f64 = 0.0;
        for l in 0..n {
            let lg = self.image.apply(l);
            for m in 0..n {
                let mg = self.image.apply(m);
                let lhs = md.s(lg, m) * self.signs[l] as f64;
                let rhs = md.s(l, mg) * self.signs[m] as f64;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }
}

/// λ ↦ λ^g and ε_g for the Galois element ζ ↦ ζ^ℓ.
pub fn galois_action(md: &ModularData, ell: i64) -> Result<GaloisAction, ModularError> {
    let spec = md.spec();
    let m = conductor(spec);
    let reduced = ell.rem_euclid(m);
    if reduced.gcd(&m) != 1 {
        return Err(ModularError::NotCoprime { ell, conductor: m });
    }
    let table = md.table();
    // per factor: local image index and sign
    let mut per_factor: Vec<Vec<(usize, i32)>> = Vec::with_capacity(spec.len());
    for (i, ft) in table.factor_tables().iter().enumerate() {
        let mut out = Vec::with_capacity(ft.len());
        for labels in ft.iter() {
            let shifted: Vec<i64> = labels.iter().map(|&v| reduced * (v as i64 + 1)).collect();
            match affine_fold(spec, i, &shifted)? {
                Fold::Wall => {
                    let mut w = spec.vacuum();
                    w.0[i] = labels.to_vec();
                    return Err(ModularError::GaloisWall {
                        weight: Weight::new(w.0),
                        ell,
                    });
                }
                Fold::Chamber { labels: img, sign } => {
                    let idx = ft.index_of(&img).expect("alcove fold lands in the table");
                    out.push((idx, sign));
                }
            }
        }
        per_factor.push(out);
    }
    let n = table.len();
    let mut image = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for t in 0..n {
        let local = table.local_indices(t);
        let mut img = Vec::with_capacity(local.len());
        let mut sign = 1;
        for (f, &li) in local.iter().enumerate() {
            let (j, s) = per_factor[f][li];
            img.push(j);
            sign *= s;
        }
        image.push(table.global_index(&img));
        signs.push(sign);
    }
    Ok(GaloisAction {
        ell,
        conductor: m,
        image: Permutation::from_image(image).expect("Galois action permutes the weights"),
        signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(r: u32, k: u32) -> ModularData {
        ModularData::new(&AlgebraSpec::simple(r, k).unwrap())
    }

    #[test]
    fn conductor_values() {
        assert_eq!(conductor(&AlgebraSpec::simple(1, 1).unwrap()), 24);
        assert_eq!(conductor(&AlgebraSpec::from_pairs(&[(1, 1), (2, 1)]).unwrap()), 48);
    }

    #[test]
    fn ell_one_is_trivial() {
        let m = md(2, 3);
        for ell in [1, 1 + conductor(m.spec())] {
            let g = galois_action(&m, ell).unwrap();
            assert!(g.image.is_identity());
            assert!(g.signs.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn a1_level1_ell2_example() {
        // ℓ = 2 is not coprime to 24; the documented fold is still the
        // affine fold of 2·(λ+ρ): shifted value 2 in the alcove {1, 2}
        let spec = AlgebraSpec::simple(1, 1).unwrap();
        let fold = affine_fold(&spec, 0, &[0, 2]).unwrap();
        assert_eq!(fold, Fold::Chamber { labels: vec![0, 1], sign: 1 });
        let m = md(1, 1);
        assert!(matches!(
            galois_action(&m, 2),
            Err(ModularError::NotCoprime { ell: 2, conductor: 24 })
        ));
    }

    #[test]
    fn identity_holds_and_is_bijective() {
        let m = md(2, 2);
        let cond = conductor(m.spec());
        for ell in 1..cond {
            if ell.gcd(&cond) != 1 {
                continue;
            }
            let g = galois_action(&m, ell).unwrap();
            assert!(g.identity_defect(&m) < 1e-9, "ell={ell}");
        }
    }

    #[test]
    fn negative_ell_is_reduced() {
        let m = md(1, 3);
        let a = galois_action(&m, -1).unwrap();
        let b = galois_action(&m, conductor(m.spec()) - 1).unwrap();
        assert_eq!(a.image, b.image);
        assert_eq!(a.signs, b.signs);
    }
}
