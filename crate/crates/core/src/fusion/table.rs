use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::{racah_speiser, weight_multiplicities, FusionError, WeightSystem};
use crate::weights::{affine_fold, Fold, WeightTable};

type Products = BTreeMap<usize, u64>;

/// Lazily filled Kac-Walton fusion table.
///
/// Per-factor products are cached once per (λ_(i), μ_(i)) pair and the
/// product over factors is cached once per global (λ, μ). Filling is
/// idempotent, so concurrent readers may race to compute an entry.
#[derive(Debug)]
pub struct FusionTable {
    table: WeightTable,
    systems: Vec<Mutex<HashMap<usize, Arc<WeightSystem>>>>,
    factor_products: Vec<Vec<OnceLock<Result<Products, FusionError>>>>,
    products: Vec<OnceLock<Result<Products, FusionError>>>,
}

impl FusionTable {
    pub fn new(table: WeightTable) -> Self {
        let n = table.len();
        let systems = table.factor_tables().iter().map(|_| Mutex::new(HashMap::new())).collect();
        let factor_products = table
            .factor_tables()
            .iter()
            .map(|ft| (0..ft.len() * ft.len()).map(|_| OnceLock::new()).collect())
            .collect();
        FusionTable {
            table,
            systems,
            factor_products,
            products: (0..n * n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn table(&self) -> &WeightTable {
        &self.table
    }

    fn system(&self, f: usize, local: usize) -> Result<Arc<WeightSystem>, FusionError> {
        if let Some(ws) = self.systems[f].lock().unwrap().get(&local) {
            return Ok(ws.clone());
        }
        let ft = self.table.factor_table(f);
        let ws = Arc::new(weight_multiplicities(self.table.spec(), f, &ft.labels(local)[1..])?);
        self.systems[f].lock().unwrap().insert(local, ws.clone());
        Ok(ws)
    }

    /// Per-factor fusion of local weights `a`, `b`, keyed by local ν.
    fn factor_products(&self, f: usize, a: usize, b: usize) -> Result<&Products, FusionError> {
        let ft = self.table.factor_table(f);
        let cell = &self.factor_products[f][a * ft.len() + b];
        cell.get_or_init(|| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let la = &ft.labels(a)[1..];
            let lb = &ft.labels(b)[1..];
            let dim_a = super::weyl_dimension(la);
            let dim_b = super::weyl_dimension(lb);
            let (small, other) = if dim_a <= dim_b { (a, lb) } else { (b, la) };
            let system = self.system(f, small)?;
            let finite = racah_speiser(&system, other);

            let kbar = ft.factor().kbar();
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (nu, mult) in finite {
                let mut shifted: Vec<i64> = Vec::with_capacity(nu.len() + 1);
                shifted.push(0);
                shifted.extend(nu.iter().map(|&v| v as i64 + 1));
                shifted[0] = kbar - shifted[1..].iter().sum::<i64>();
                if let Fold::Chamber { labels, sign } =
                    affine_fold(self.table.spec(), f, &shifted)?
                {
                    let idx = ft.index_of(&labels).expect("alcove weights are in the table");
                    *acc.entry(idx).or_default() += sign as i64 * mult as i64;
                }
            }
            let mut out = Products::new();
            for (idx, v) in acc {
                if v < 0 {
                    let mut nu = self.table.spec().vacuum();
                    nu.0[f] = ft.labels(idx).to_vec();
                    return Err(FusionError::NegativeCoefficient { nu, value: v });
                }
                if v > 0 {
                    out.insert(idx, v as u64);
                }
            }
            Ok(out)
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    /// Every nonzero N_{λμ}^ν for fixed λ, μ, keyed by ν.
    pub fn products(&self, lambda: usize, mu: usize) -> Result<&Products, FusionError> {
        let n = self.table.len();
        self.products[lambda * n + mu]
            .get_or_init(|| {
                let la = self.table.local_indices(lambda);
                let lm = self.table.local_indices(mu);
                let mut acc: Vec<(Vec<usize>, u64)> = vec![(Vec::new(), 1)];
                for f in 0..la.len() {
                    let fp = self.factor_products(f, la[f], lm[f])?;
                    let mut next = Vec::with_capacity(acc.len() * fp.len());
                    for (prefix, v) in &acc {
                        for (&idx, &m) in fp {
                            let mut p = prefix.clone();
                            p.push(idx);
                            next.push((p, v * m));
                        }
                    }
                    acc = next;
                }
                Ok(acc
                    .into_iter()
                    .map(|(local, v)| (self.table.global_index(&local), v))
                    .collect())
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn coefficient(&self, lambda: usize, mu: usize, nu: usize) -> Result<u64, FusionError> {
        Ok(self.products(lambda, mu)?.get(&nu).copied().unwrap_or(0))
    }

    /// Σ_ν N_{λμ}^ν
    pub fn row_sum(&self, lambda: usize, mu: usize) -> Result<u64, FusionError> {
        Ok(self.products(lambda, mu)?.values().sum())
    }

    /// All nonzero (λ, μ, ν, N) in canonical order. Materializes n² pairs.
    pub fn nonzero_entries(&self) -> Result<Vec<(usize, usize, usize, u64)>, FusionError> {
        let n = self.table.len();
        let mut out = Vec::new();
        for l in 0..n {
            for m in 0..n {
                for (&nu, &v) in self.products(l, m)? {
                    out.push((l, m, nu, v));
                }
            }
        }
        Ok(out)
    }
}
