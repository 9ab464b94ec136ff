use std::collections::HashMap;

use serde::Serialize;

use super::{AlgebraSpec, Factor, Weight};

/// Canonical list of P_+^{r,k} for one simple factor.
#[derive(Debug, Clone)]
pub struct FactorTable {
    factor: Factor,
    order: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FactorTable {
    pub fn new(factor: Factor) -> Self {
        let mut order = Vec::new();
        let mut cur = Vec::with_capacity(factor.nodes());
        compositions(factor.k, factor.nodes(), &mut cur, &mut order);
        let index = order
            .iter()
            .enumerate()
            .map(|(t, v)| (v.clone(), t))
            .collect();
        FactorTable {
            factor,
            order,
            index,
        }
    }

    pub fn factor(&self) -> Factor {
        self.factor
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn labels(&self, t: usize) -> &[u32] {
        &self.order[t]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.order.iter().map(|v| v.as_slice())
    }

    pub fn index_of(&self, labels: &[u32]) -> Option<usize> {
        self.index.get(labels).copied()
    }
}

/// Lexicographically decreasing compositions of `k` into `parts` parts.
fn compositions(k: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        cur.push(k);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for first in (0..=k).rev() {
        cur.push(first);
        compositions(k - first, parts - 1, cur, out);
        cur.pop();
    }
}

/// Canonical indexing of all level-k weights.
///
/// Factors are ordered lexicographically decreasing (label 0 first) and
/// combined as a product with the first factor most significant, so index 0
/// is kΛ_0 and the global index is a mixed-radix number in the per-factor
/// indices.
#[derive(Debug, Clone)]
pub struct WeightTable {
    spec: AlgebraSpec,
    factors: Vec<FactorTable>,
    order: Vec<Weight>,
    index: HashMap<Weight, usize>,
}

/// All weights of `spec` in canonical order.
pub fn enumerate_weights(spec: &AlgebraSpec) -> WeightTable {
    WeightTable::new(spec.clone())
}

impl WeightTable {
    pub fn new(spec: AlgebraSpec) -> Self {
        let factors: Vec<FactorTable> = spec.factors().iter().map(|&f| FactorTable::new(f)).collect();
        let n: usize = factors.iter().map(FactorTable::len).product();
        let mut order = Vec::with_capacity(n);
        for t in 0..n {
            let local = decode(&factors, t);
            order.push(Weight(
                local
                    .iter()
                    .zip(&factors)
                    .map(|(&li, ft)| ft.labels(li).to_vec())
                    .collect(),
            ));
        }
        let index = order.iter().enumerate().map(|(t, w)| (w.clone(), t)).collect();
        WeightTable {
            spec,
            factors,
            order,
            index,
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.order
    }

    pub fn weight(&self, t: usize) -> &Weight {
        &self.order[t]
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Index of kΛ_0 (always 0).
    pub fn vacuum_index(&self) -> usize {
        0
    }

    pub fn factor_table(&self, i: usize) -> &FactorTable {
        &self.factors[i]
    }

    pub fn factor_tables(&self) -> &[FactorTable] {
        &self.factors
    }

    /// Per-factor indices of global index `t`.
    pub fn local_indices(&self, t: usize) -> Vec<usize> {
        decode(&self.factors, t)
    }

    /// Global index from per-factor indices.
    pub fn global_index(&self, local: &[usize]) -> usize {
        local
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&li, ft)| acc * ft.len() + li)
    }
}

fn decode(factors: &[FactorTable], mut t: usize) -> Vec<usize> {
    let mut local = vec![0; factors.len()];
    for (slot, ft) in local.iter_mut().zip(factors).rev() {
        *slot = t % ft.len();
        t /= ft.len();
    }
    local
}

/// JSON form: the spec header followed by the ordered weights.
#[derive(Serialize)]
pub(crate) struct TableRepr<'a> {
    pub spec: &'a AlgebraSpec,
    pub weights: &'a [Weight],
}

impl WeightTable {
    pub(crate) fn repr(&self) -> TableRepr<'_> {
        TableRepr {
            spec: &self.spec,
            weights: &self.order,
        }
    }
}
