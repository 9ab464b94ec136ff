//! Folding shifted weights into the dominant chamber (finite Weyl group)
//! or the fundamental alcove (affine Weyl group at level k̄).
//!
//! Both work directly on Dynkin labels: the simple reflection at node j is
//! x -> x - x_j α_j, i.e. x_j flips sign and x_j is added to each
//! neighbouring label. A shifted weight with a zero label is fixed by a
//! reflection and contributes nothing.

use super::{AlgebraSpec, WeightError};

/// Outcome of folding a shifted weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fold {
    /// The orbit meets a wall; the weight is dropped.
    Wall,
    /// Dominant representative (ρ already subtracted) and the parity of the
    /// reflection word.
    Chamber { labels: Vec<u32>, sign: i32 },
}

impl Fold {
    pub fn sign(&self) -> i32 {
        match self {
            Fold::Wall => 0,
            Fold::Chamber { sign, .. } => *sign,
        }
    }

    pub fn labels(&self) -> Option<&[u32]> {
        match self {
            Fold::Wall => None,
            Fold::Chamber { labels, .. } => Some(labels),
        }
    }
}

/// Reflection at node `j` of a cyclic (affine) or linear (finite) Dynkin diagram.
fn reflect(x: &mut [i64], j: usize, cyclic: bool) {
    let n = x.len();
    let v = x[j];
    x[j] = -v;
    if cyclic {
        if n == 2 {
            // A_1^(1): the two nodes are joined by a double bond
            x[1 - j] += 2 * v;
        } else {
            x[(j + 1) % n] += v;
            x[(j + n - 1) % n] += v;
        }
    } else {
        if j + 1 < n {
            x[j + 1] += v;
        }
        if j >= 1 {
            x[j - 1] += v;
        }
    }
}

/// Repeatedly reflects at the most negative label. Returns the sign of the
/// word, or 0 if a zero label turns up.
fn fold_in_place(x: &mut [i64], cyclic: bool) -> i32 {
    let mut sign = 1;
    loop {
        let mut worst = None;
        for (j, &v) in x.iter().enumerate() {
            if v == 0 {
                return 0;
            }
            if v < 0 && worst.is_none_or(|(_, w)| v < w) {
                worst = Some((j, v));
            }
        }
        match worst {
            None => return sign,
            Some((j, _)) => {
                reflect(x, j, cyclic);
                sign = -sign;
            }
        }
    }
}

/// Folds shifted finite labels (λ̄ + ρ̄ in Dynkin coordinates) into the
/// dominant chamber of A_r.
pub fn finite_fold(shifted: &[i64]) -> Fold {
    let mut x = shifted.to_vec();
    let sign = fold_in_place(&mut x, false);
    if sign == 0 {
        return Fold::Wall;
    }
    Fold::Chamber {
        labels: x.iter().map(|&v| (v - 1) as u32).collect(),
        sign,
    }
}

/// Folds the shifted weight ν + ρ of factor `i` into the fundamental alcove
/// at level k̄_i.
///
/// `shifted` holds all r+1 shifted labels; label 0 is recomputed from the
/// finite ones so that the total is k̄ (weights live mod Cδ).
pub fn affine_fold(spec: &AlgebraSpec, i: usize, shifted: &[i64]) -> Result<Fold, WeightError> {
    let f = spec.factor(i)?;
    if shifted.len() != f.nodes() {
        return Err(WeightError::LabelCount {
            index: i,
            expected: f.nodes(),
            got: shifted.len(),
        });
    }
    let mut x = shifted.to_vec();
    x[0] = f.kbar() - x[1..].iter().sum::<i64>();
    Ok(affine_fold_level(&mut x))
}

/// Alcove fold of a full shifted label vector whose sum is already k̄.
pub(crate) fn affine_fold_level(x: &mut [i64]) -> Fold {
    let sign = fold_in_place(x, true);
    if sign == 0 {
        return Fold::Wall;
    }
    Fold::Chamber {
        labels: x.iter().map(|&v| (v - 1) as u32).collect(),
        sign,
    }
}
