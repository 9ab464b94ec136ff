//! Exhaustive search for every permutation σ with S_{σλ,σμ} = S_{λμ} and
//! T_{σλ} = T_λ, by backtracking over signature classes. Knows nothing
//! about the closed-form classification and serves as its oracle.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fusion::{FusionError, FusionTable};
use crate::modular::ModularData;
use crate::perm::Permutation;
use crate::weights::Rational;
use crate::Tolerances;

/// Default cap on the number of weights.
pub const DEFAULT_SEARCH_BOUND: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("{n} weights exceed the search bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

/// Partition of the weights into classes that every invariant preserves.
///
/// The key is (T exponent, q-dimension, fusion degree). The fusion degree
/// of λ is Σ_{μ ∈ M} Σ_ν N_{λμ}^ν where M is the set of weights of least
/// q-dimension above 1; M is σ-stable and σ preserves N, so the degree is
/// an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureClasses {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl SignatureClasses {
    pub fn new(md: &ModularData) -> Result<Self, SearchError> {
        let n = md.n();
        let q_cluster = cluster(md.q_dims(), Tolerances::Q_CLASS);
        let degree = fusion_degrees(md, &q_cluster)?;
        let mut keys: BTreeMap<(Rational, usize, u64), Vec<usize>> = BTreeMap::new();
        for l in 0..n {
            keys.entry((md.t_exp(l), q_cluster[l], degree[l]))
                .or_default()
                .push(l);
        }
        let mut classes: Vec<Vec<usize>> = keys.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (id, c) in classes.iter().enumerate() {
            for &l in c {
                class_of[l] = id;
            }
        }
        Ok(SignatureClasses { class_of, classes })
    }

    pub fn class_of(&self, l: usize) -> usize {
        self.class_of[l]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn members(&self, l: usize) -> &[usize] {
        &self.classes[self.class_of[l]]
    }
}

/// Cluster ids for values grouped by chains of gaps at most `width`,
/// numbered in increasing order of value.
fn cluster(values: &[f64], width: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0; values.len()];
    let mut id = 0;
    for w in 0..order.len() {
        if w > 0 && values[order[w]] - values[order[w - 1]] > width {
            id += 1;
        }
        out[order[w]] = id;
    }
    out
}

fn fusion_degrees(md: &ModularData, q_cluster: &[usize]) -> Result<Vec<u64>, SearchError> {
    let n = md.n();
    let vac = q_cluster[md.table().vacuum_index()];
    let next = (0..n).map(|l| q_cluster[l]).filter(|&c| c > vac).min();
    let Some(next) = next else {
        return Ok(vec![0; n]);
    };
    let m: Vec<usize> = (0..n).filter(|&l| q_cluster[l] == next).collect();
    let ft = FusionTable::new(md.table().clone());
    (0..n)
        .into_par_iter()
        .map(|l| {
            m.iter()
                .map(|&mu| ft.row_sum(l, mu))
                .sum::<Result<u64, FusionError>>()
                .map_err(SearchError::from)
        })
        .collect()
}

/// Every automorphism invariant, sorted by image array.
pub fn search_all(md: &ModularData, tol: f64) -> Result<Vec<Permutation>, SearchError> {
    search_all_bounded(md, tol, DEFAULT_SEARCH_BOUND)
}

pub fn search_all_bounded(
    md: &ModularData,
    tol: f64,
    bound: usize,
) -> Result<Vec<Permutation>, SearchError> {
    let n = md.n();
    if n > bound {
        return Err(SearchError::TooLarge { n, bound });
    }
    let classes = SignatureClasses::new(md)?;
    let vac = md.table().vacuum_index();

    // σ(kΛ_0) = kΛ_0: the vacuum row is the only strictly positive row of S
    let mut order: Vec<usize> = (0..n).filter(|&l| l != vac).collect();
    order.sort_by_key(|&l| (classes.members(l).len(), l));

    let mut start = vec![usize::MAX; n];
    start[vac] = vac;
    let assigned = vec![vac];
    let mut used = vec![false; n];
    used[vac] = true;

    let Some((&first, rest)) = order.split_first() else {
        return Ok(vec![Permutation::identity(n)]);
    };
    let ctx = Ctx {
        md,
        tol,
        classes: &classes,
        order: rest,
    };
    let mut found: Vec<Vec<usize>> = classes
        .members(first)
        .par_iter()
        .flat_map_iter(|&x| {
            let mut sigma = start.clone();
            let mut used = used.clone();
            let mut assigned = assigned.clone();
            let mut out = Vec::new();
            if ctx.consistent(&sigma, &assigned, first, x) {
                sigma[first] = x;
                used[x] = true;
                assigned.push(first);
                ctx.extend(0, &mut sigma, &mut used, &mut assigned, &mut out);
            }
            out
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found
        .into_iter()
        .map(|image| Permutation::from_image(image).expect("backtracking yields bijections"))
        .collect())
}

struct Ctx<'a> {
    md: &'a ModularData,
    tol: f64,
    classes: &'a SignatureClasses,
    order: &'a [usize],
}

impl Ctx<'_> {
    /// Whether σ(l) = x agrees with S against every assigned weight and itself.
    fn consistent(&self, sigma: &[usize], assigned: &[usize], l: usize, x: usize) -> bool {
        let row = self.md.s_row(l);
        let img = self.md.s_row(x);
        if (img[x] - row[l]).norm() > self.tol {
            return false;
        }
        assigned
            .iter()
            .all(|&mu| (img[sigma[mu]] - row[mu]).norm() <= self.tol)
    }

    fn extend(
        &self,
        depth: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        assigned: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(&l) = self.order.get(depth) else {
            out.push(sigma.clone());
            return;
        };
        for &x in self.classes.members(l) {
            if used[x] || !self.consistent(sigma, assigned, l, x) {
                continue;
            }
            sigma[l] = x;
            used[x] = true;
            assigned.push(l);
            self.extend(depth + 1, sigma, used, assigned, out);
            assigned.pop();
            used[x] = false;
            sigma[l] = usize::MAX;
        }
    }
}

/// Symmetric difference between the search result and the classification.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    /// Found by the search but absent from the classification.
    pub unexplained: Vec<Permutation>,
    /// Classified but not found by the search.
    pub not_found: Vec<Permutation>,
}

impl SearchReport {
    pub fn is_empty(&self) -> bool {
        self.unexplained.is_empty() && self.not_found.is_empty()
    }
}

pub fn search_report(results: &[Permutation], classified: &[Permutation]) -> SearchReport {
    let a: BTreeSet<&Permutation> = results.iter().collect();
    let b: BTreeSet<&Permutation> = classified.iter().collect();
    SearchReport {
        unexplained: a.difference(&b).map(|&p| p.clone()).collect(),
        not_found: b.difference(&a).map(|&p| p.clone()).collect(),
    }
}
