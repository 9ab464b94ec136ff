//! Level-k highest weights of (A_{r_1} + ... + A_{r_s})^(1).
//!
//! A weight is stored as its Dynkin labels, one label vector per simple
//! factor, taken modulo the imaginary root. Everything in this module is
//! exact integer or rational arithmetic.

mod fold;
mod form;
mod table;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fold::{affine_fold, finite_fold, Fold};
pub use form::{form_scaled, inner_product, rho_norm, simple_root, Rational};
pub use table::{enumerate_weights, FactorTable, WeightTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("an algebra needs at least one simple factor")]
    NoFactors,
    #[error("factor {index}: rank must be >= 1 (got {r})")]
    BadRank { index: usize, r: u32 },
    #[error("factor {index}: level must be >= 1 (got {k})")]
    BadLevel { index: usize, k: u32 },
    #[error("{algs} algebra factors but {levels} levels")]
    LevelCountMismatch { algs: usize, levels: usize },
    #[error("cannot parse algebra factor `{0}` (expected a<rank>, e.g. a2)")]
    BadAlgebraToken(String),
    #[error("cannot parse level `{0}`")]
    BadLevelToken(String),
    #[error("factor index {index} out of range for {len} factors")]
    FactorOutOfRange { index: usize, len: usize },
    #[error("weight has {got} factors, algebra has {expected}")]
    FactorCount { expected: usize, got: usize },
    #[error("factor {index}: expected {expected} Dynkin labels, got {got}")]
    LabelCount {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("factor {index}: labels sum to {sum}, level is {k}")]
    WrongLevel { index: usize, sum: u64, k: u32 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// One simple summand A_r at level k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub r: u32,
    pub k: u32,
}

impl Factor {
    pub fn new(r: u32, k: u32) -> Self {
        Factor { r, k }
    }

    /// r + 1, which is also the dual Coxeter number.
    pub fn rbar(&self) -> i64 {
        self.r as i64 + 1
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.rbar()
    }

    pub fn k(&self) -> i64 {
        self.k as i64
    }

    /// Shifted level k + r + 1.
    pub fn kbar(&self) -> i64 {
        self.k() + self.rbar()
    }

    /// The level that enters the simple-current monodromy: k̄ when r and
    /// k̄ are both even, k otherwise.
    pub fn ktilde(&self) -> i64 {
        if self.r.is_multiple_of(2) && self.kbar() % 2 == 0 {
            self.kbar()
        } else {
            self.k()
        }
    }

    /// Number of labels, r + 1.
    pub fn nodes(&self) -> usize {
        self.r as usize + 1
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}@{}", self.r, self.k)
    }
}

/// The algebra/level pair ((r_1,k_1),...,(r_s,k_s)).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct AlgebraSpec {
    factors: Vec<Factor>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    factors: Vec<Factor>,
}

impl TryFrom<SpecRepr> for AlgebraSpec {
    type Error = WeightError;
    fn try_from(repr: SpecRepr) -> Result<Self, Self::Error> {
        AlgebraSpec::new(repr.factors)
    }
}

impl From<AlgebraSpec> for SpecRepr {
    fn from(spec: AlgebraSpec) -> Self {
        SpecRepr {
            factors: spec.factors,
        }
    }
}

impl AlgebraSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self, WeightError> {
        if factors.is_empty() {
            return Err(WeightError::NoFactors);
        }
        for (index, f) in factors.iter().enumerate() {
            if f.r == 0 {
                return Err(WeightError::BadRank { index, r: f.r });
            }
            if f.k == 0 {
                return Err(WeightError::BadLevel { index, k: f.k });
            }
        }
        Ok(AlgebraSpec { factors })
    }

    /// Single factor A_r at level k.
    pub fn simple(r: u32, k: u32) -> Result<Self, WeightError> {
        Self::new(vec![Factor::new(r, k)])
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self, WeightError> {
        Self::new(pairs.iter().map(|&(r, k)| Factor::new(r, k)).collect())
    }

    /// Parses the command-line syntax `a1,a2` / `3,4`.
    pub fn parse(algs: &str, levels: &str) -> Result<Self, WeightError> {
        let ranks = algs
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.strip_prefix(['a', 'A'])
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| WeightError::BadAlgebraToken(tok.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ks = levels
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| WeightError::BadLevelToken(tok.trim().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ranks.len() != ks.len() {
            return Err(WeightError::LevelCountMismatch {
                algs: ranks.len(),
                levels: ks.len(),
            });
        }
        Self::new(ranks.into_iter().zip(ks).map(|(r, k)| Factor::new(r, k)).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Result<Factor, WeightError> {
        self.factors
            .get(i)
            .copied()
            .ok_or(WeightError::FactorOutOfRange {
                index: i,
                len: self.factors.len(),
            })
    }

    /// Number of simple factors s.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Π_i C(k_i + r_i, r_i).
    pub fn weight_count(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| binomial(f.k as u64 + f.r as u64, f.r as u64))
            .product()
    }

    /// kΛ_0: all of every level on node 0.
    pub fn vacuum(&self) -> Weight {
        Weight(
            self.factors
                .iter()
                .map(|f| {
                    let mut v = vec![0; f.nodes()];
                    v[0] = f.k;
                    v
                })
                .collect(),
        )
    }

    /// ω^i_l: the vacuum with one unit moved from node 0 to node l of factor i.
    pub fn omega(&self, i: usize, l: usize) -> Result<Weight, WeightError> {
        let f = self.factor(i)?;
        assert!(l >= 1 && l <= f.r as usize, "omega index out of range");
        let mut w = self.vacuum();
        w.0[i][0] -= 1;
        w.0[i][l] += 1;
        Ok(w)
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let algs: Vec<String> = self.factors.iter().map(|x| format!("a{}", x.r)).collect();
        let levels: Vec<String> = self.factors.iter().map(|x| x.k.to_string()).collect();
        write!(f, "{} level {}", algs.join(","), levels.join(","))
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dynkin labels of a level-k weight, one vector per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<Vec<u32>>);

impl Weight {
    pub fn new(labels: Vec<Vec<u32>>) -> Self {
        Weight(labels)
    }

    /// Builds a weight and checks it against `spec`.
    pub fn checked(spec: &AlgebraSpec, labels: Vec<Vec<u32>>) -> Result<Self, WeightError> {
        let w = Weight(labels);
        w.validate(spec)?;
        Ok(w)
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.0
    }

    pub fn factor(&self, i: usize) -> &[u32] {
        &self.0[i]
    }

    /// Finite projection (λ_1, ..., λ_r) of factor i.
    pub fn finite(&self, i: usize) -> &[u32] {
        &self.0[i][1..]
    }

    pub fn validate(&self, spec: &AlgebraSpec) -> Result<(), WeightError> {
        if self.0.len() != spec.len() {
            return Err(WeightError::FactorCount {
                expected: spec.len(),
                got: self.0.len(),
            });
        }
        for (index, (labels, f)) in self.0.iter().zip(spec.factors()).enumerate() {
            if labels.len() != f.nodes() {
                return Err(WeightError::LabelCount {
                    index,
                    expected: f.nodes(),
                    got: labels.len(),
                });
            }
            let sum: u64 = labels.iter().map(|&x| x as u64).sum();
            if sum != f.k as u64 {
                return Err(WeightError::WrongLevel { index, sum, k: f.k });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|v| {
                let xs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// t(λ_(i)) = Σ_j j·λ_(i)j.
pub fn t_charge(spec: &AlgebraSpec, w: &Weight, i: usize) -> Result<i64, WeightError> {
    spec.factor(i)?;
    Ok(labels_t(&w.0[i]))
}

pub(crate) fn labels_t(labels: &[u32]) -> i64 {
    labels
        .iter()
        .enumerate()
        .map(|(j, &x)| j as i64 * x as i64)
        .sum()
}

/// Label at node j moves to node j + b (mod r + 1).
pub(crate) fn rotate_labels(labels: &[u32], b: i64) -> Vec<u32> {
    let n = labels.len() as i64;
    let shift = b.rem_euclid(n) as usize;
    let mut out = vec![0; labels.len()];
    for (j, &x) in labels.iter().enumerate() {
        out[(j + shift) % labels.len()] = x;
    }
    out
}

/// Keeps node 0, reverses nodes 1..r.
pub(crate) fn conjugate_labels(labels: &[u32]) -> Vec<u32> {
    let mut out = labels.to_vec();
    out[1..].reverse();
    out
}

/// J^b: rotates factor i by b_i nodes. Exponents are taken mod r_i + 1.
pub fn apply_j(spec: &AlgebraSpec, w: &Weight, b: &[i64]) -> Weight {
    debug_assert_eq!(b.len(), spec.len());
    Weight(
        w.0.iter()
            .zip(b)
            .map(|(labels, &bi)| rotate_labels(labels, bi))
            .collect(),
    )
}

/// C^c: conjugates every factor whose bit is set.
pub fn apply_c(spec: &AlgebraSpec, w: &Weight, c: &[bool]) -> Weight {
    debug_assert_eq!(c.len(), spec.len());
    Weight(
        w.0.iter()
            .zip(c)
            .map(|(labels, &ci)| {
                if ci {
                    conjugate_labels(labels)
                } else {
                    labels.clone()
                }
            })
            .collect(),
    )
}

/// The orbit of `w` under every C^c J^b.
pub fn orbit(spec: &AlgebraSpec, w: &Weight) -> BTreeSet<Weight> {
    let mut per_factor: Vec<BTreeSet<Vec<u32>>> = Vec::with_capacity(spec.len());
    for (labels, f) in w.0.iter().zip(spec.factors()) {
        let mut set = BTreeSet::new();
        for b in 0..f.rbar() {
            let rotated = rotate_labels(labels, b);
            set.insert(conjugate_labels(&rotated));
            set.insert(rotated);
        }
        per_factor.push(set);
    }
    // the diagram automorphisms act factor by factor, so the orbit is a product
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for set in &per_factor {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for labels in set {
                let mut p = prefix.clone();
                p.push(labels.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(Weight).collect()
}

/// Number of strictly positive labels of factor i.
pub fn o_count(w: &Weight, i: usize) -> usize {
    w.0[i].iter().filter(|&&x| x > 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(labels: &[&[u32]]) -> Weight {
        Weight(labels.iter().map(|v| v.to_vec()).collect())
    }

    #[test]
    fn parse_spec() {
        let spec = AlgebraSpec::parse("a1,a2", "2,3").unwrap();
        assert_eq!(spec.factors(), &[Factor::new(1, 2), Factor::new(2, 3)]);
        assert!(matches!(
            AlgebraSpec::parse("a1,a2", "2"),
            Err(WeightError::LevelCountMismatch { .. })
        ));
        assert!(matches!(
            AlgebraSpec::parse("b2", "2"),
            Err(WeightError::BadAlgebraToken(_))
        ));
        assert!(matches!(
            AlgebraSpec::parse("a0", "2"),
            Err(WeightError::BadRank { .. })
        ));
        assert!(matches!(
            AlgebraSpec::parse("a1", "0"),
            Err(WeightError::BadLevel { .. })
        ));
    }

    #[test]
    fn ktilde_rule() {
        // r even and k̄ even: r=2, k=1 gives k̄=4
        assert_eq!(Factor::new(2, 1).ktilde(), 4);
        assert_eq!(Factor::new(2, 2).ktilde(), 2);
        assert_eq!(Factor::new(1, 6).ktilde(), 6);
        assert_eq!(Factor::new(4, 2).ktilde(), 2);
    }

    #[test]
    fn t_charge_examples() {
        let spec = AlgebraSpec::simple(2, 1).unwrap();
        assert_eq!(t_charge(&spec, &w(&[&[0, 1, 0]]), 0).unwrap(), 1);
        assert_eq!(t_charge(&spec, &spec.vacuum(), 0).unwrap(), 0);
        assert!(t_charge(&spec, &spec.vacuum(), 1).is_err());

        let spec = AlgebraSpec::simple(2, 3).unwrap();
        let lam = w(&[&[3, 0, 0]]);
        let jl = apply_j(&spec, &lam, &[1]);
        assert_eq!(jl, w(&[&[0, 3, 0]]));
        let t = t_charge(&spec, &jl, 0).unwrap();
        assert_eq!(t, 3);
        assert_eq!((t - (3 + 0)).rem_euclid(3), 0);
    }

    #[test]
    fn j_and_c_examples() {
        let spec = AlgebraSpec::simple(2, 3).unwrap();
        assert_eq!(apply_j(&spec, &w(&[&[3, 0, 0]]), &[1]), w(&[&[0, 3, 0]]));
        assert_eq!(apply_j(&spec, &w(&[&[1, 2, 0]]), &[3]), w(&[&[1, 2, 0]]));
        assert_eq!(apply_j(&spec, &w(&[&[1, 2, 0]]), &[-1]), w(&[&[2, 0, 1]]));
        let spec1 = AlgebraSpec::simple(1, 6).unwrap();
        assert_eq!(apply_j(&spec1, &w(&[&[1, 5]]), &[1]), w(&[&[5, 1]]));

        assert_eq!(apply_c(&spec, &w(&[&[1, 2, 0]]), &[true]), w(&[&[1, 0, 2]]));
        assert_eq!(apply_c(&spec, &w(&[&[1, 2, 0]]), &[false]), w(&[&[1, 2, 0]]));
        assert_eq!(apply_c(&spec1, &w(&[&[1, 5]]), &[true]), w(&[&[1, 5]]));
    }

    #[test]
    fn orbit_examples() {
        let spec = AlgebraSpec::simple(2, 1).unwrap();
        let orb = orbit(&spec, &spec.vacuum());
        assert_eq!(orb.len(), 3);
        assert!(orb.iter().all(|x| o_count(x, 0) == 1));

        let spec = AlgebraSpec::simple(1, 2).unwrap();
        let orb = orbit(&spec, &w(&[&[1, 1]]));
        assert_eq!(orb.into_iter().collect::<Vec<_>>(), vec![w(&[&[1, 1]])]);

        let spec = AlgebraSpec::simple(2, 2).unwrap();
        let orb = orbit(&spec, &spec.omega(0, 1).unwrap());
        // C(1,1,0) = (1,0,1) is already a rotation
        assert_eq!(orb.len(), 3);

        let spec = AlgebraSpec::simple(2, 3).unwrap();
        assert_eq!(orbit(&spec, &w(&[&[1, 2, 0]])).len(), 6);
    }

    #[test]
    fn o_count_examples() {
        let spec = AlgebraSpec::simple(2, 3).unwrap();
        assert_eq!(o_count(&spec.vacuum(), 0), 1);
        assert_eq!(o_count(&spec.omega(0, 1).unwrap(), 0), 2);
        assert_eq!(o_count(&w(&[&[1, 1, 1]]), 0), 3);
    }

    #[test]
    fn validate_rejects_bad_weights() {
        let spec = AlgebraSpec::simple(2, 3).unwrap();
        assert!(Weight::checked(&spec, vec![vec![1, 1, 1]]).is_ok());
        assert!(matches!(
            Weight::checked(&spec, vec![vec![1, 1]]),
            Err(WeightError::LabelCount { .. })
        ));
        assert!(matches!(
            Weight::checked(&spec, vec![vec![1, 1, 0]]),
            Err(WeightError::WrongLevel { .. })
        ));
        assert!(matches!(
            Weight::checked(&spec, vec![vec![1, 1, 1], vec![1, 0]]),
            Err(WeightError::FactorCount { .. })
        ));
    }

    #[test]
    fn serde_shapes() {
        let spec = AlgebraSpec::from_pairs(&[(2, 3), (1, 1)]).unwrap();
        assert_eq!(
            serde_json::to_string(&spec).unwrap(),
            r#"{"factors":[{"r":2,"k":3},{"r":1,"k":1}]}"#
        );
        let back: AlgebraSpec = serde_json::from_str(r#"{"factors":[{"r":2,"k":3}]}"#).unwrap();
        assert_eq!(back, AlgebraSpec::simple(2, 3).unwrap());
        assert!(serde_json::from_str::<AlgebraSpec>(r#"{"factors":[]}"#).is_err());
        let wt = w(&[&[2, 0, 1], &[1, 1]]);
        assert_eq!(serde_json::to_string(&wt).unwrap(), "[[2,0,1],[1,1]]");
    }
}
