//! The invariant bilinear form of A_r, normalized so roots have norm 2.
//!
//! Vectors are given in fundamental-weight (Dynkin) coordinates of the
//! finite part. The Gram matrix of the fundamental weights is the inverse
//! Cartan matrix, F_ab = min(a,b) - ab/(r+1).

use num_rational::Ratio;

use super::{AlgebraSpec, WeightError};

pub type Rational = Ratio<i64>;

/// (r+1)·(x|y) for one A_r factor. Always an integer.
pub fn form_scaled(r: u32, x: &[i64], y: &[i64]) -> i64 {
    debug_assert_eq!(x.len(), r as usize);
    debug_assert_eq!(y.len(), r as usize);
    let rbar = r as i64 + 1;
    let mut acc = 0i64;
    for (a, &xa) in x.iter().enumerate() {
        if xa == 0 {
            continue;
        }
        let a1 = a as i64 + 1;
        for (b, &yb) in y.iter().enumerate() {
            let b1 = b as i64 + 1;
            acc += xa * yb * (rbar * a1.min(b1) - a1 * b1);
        }
    }
    acc
}

/// Exact (x|y), summed over factors.
pub fn inner_product(
    spec: &AlgebraSpec,
    x: &[Vec<i64>],
    y: &[Vec<i64>],
) -> Result<Rational, WeightError> {
    if x.len() != spec.len() || y.len() != spec.len() {
        return Err(WeightError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut total = Rational::from_integer(0);
    for ((f, xi), yi) in spec.factors().iter().zip(x).zip(y) {
        if xi.len() != f.r as usize || yi.len() != f.r as usize {
            return Err(WeightError::DimensionMismatch {
                left: xi.len(),
                right: yi.len(),
            });
        }
        total += Rational::new(form_scaled(f.r, xi, yi), f.rbar());
    }
    Ok(total)
}

/// Simple root α_j (1-based) of A_r in Dynkin coordinates: row j of the
/// Cartan matrix.
pub fn simple_root(r: u32, j: usize) -> Vec<i64> {
    assert!(j >= 1 && j <= r as usize);
    let mut v = vec![0; r as usize];
    v[j - 1] = 2;
    if j >= 2 {
        v[j - 2] = -1;
    }
    if j < r as usize {
        v[j] = -1;
    }
    v
}

/// (ρ̄|ρ̄) for A_r, from the form itself.
pub fn rho_norm(r: u32) -> Rational {
    let rho = vec![1i64; r as usize];
    Rational::new(form_scaled(r, &rho, &rho), r as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single(r: u32) -> AlgebraSpec {
        AlgebraSpec::simple(r, 1).unwrap()
    }

    #[test]
    fn a1_fundamental_norm() {
        let spec = single(1);
        assert_eq!(
            inner_product(&spec, &[vec![1]], &[vec![1]]).unwrap(),
            Rational::new(1, 2)
        );
    }

    #[test]
    fn a2_rho_norm_is_two() {
        assert_eq!(rho_norm(2), Rational::from_integer(2));
    }

    #[test]
    fn strange_formula() {
        // (ρ̄|ρ̄) = h∨ · dim / 12 with dim = r(r+2)
        for r in 1..=8u32 {
            let h = r as i64 + 1;
            let dim = (r as i64) * (r as i64 + 2);
            assert_eq!(rho_norm(r), Rational::new(h * dim, 12), "r={r}");
        }
    }

    #[test]
    fn simple_roots_have_norm_two() {
        for r in 1..=7u32 {
            for j in 1..=r as usize {
                let a = simple_root(r, j);
                assert_eq!(Rational::new(form_scaled(r, &a, &a), r as i64 + 1), 2.into());
            }
        }
    }

    #[test]
    fn fundamental_weights_dual_to_roots() {
        for r in 1..=6u32 {
            for a in 1..=r as usize {
                for b in 1..=r as usize {
                    let mut lam = vec![0; r as usize];
                    lam[a - 1] = 1;
                    let got = Rational::new(form_scaled(r, &lam, &simple_root(r, b)), r as i64 + 1);
                    let want = if a == b { 1 } else { 0 };
                    assert_eq!(got, want.into());
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let spec = single(2);
        assert!(inner_product(&spec, &[vec![1]], &[vec![1, 0]]).is_err());
        assert!(inner_product(&spec, &[], &[vec![1, 0]]).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_and_bilinear(
            r in 1u32..6,
            seed in proptest::collection::vec(-5i64..6, 18),
            c in -4i64..5,
        ) {
            let n = r as usize;
            let x = &seed[0..n];
            let y = &seed[6..6 + n];
            let z = &seed[12..12 + n];
            prop_assert_eq!(form_scaled(r, x, y), form_scaled(r, y, x));
            let xz: Vec<i64> = x.iter().zip(z).map(|(a, b)| c * a + b).collect();
            prop_assert_eq!(
                form_scaled(r, &xz, y),
                c * form_scaled(r, x, y) + form_scaled(r, z, y)
            );
        }
    }
}
