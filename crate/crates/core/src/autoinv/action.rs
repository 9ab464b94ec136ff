use crate::perm::Permutation;
use crate::weights::{conjugate_labels, labels_t, rotate_labels, WeightTable};

/// Per-factor lookup tables for J, C and t on local weight indices, so that
/// building a permutation of the full table costs O(n·s).
#[derive(Debug, Clone)]
pub(crate) struct Actions<'a> {
    table: &'a WeightTable,
    rbar: Vec<i64>,
    t: Vec<Vec<i64>>,
    /// jpow[f][local][b] = J^b of the local weight
    jpow: Vec<Vec<Vec<usize>>>,
    conj: Vec<Vec<usize>>,
}

impl<'a> Actions<'a> {
    pub fn new(table: &'a WeightTable) -> Self {
        let mut rbar = Vec::new();
        let mut t = Vec::new();
        let mut jpow = Vec::new();
        let mut conj = Vec::new();
        for ft in table.factor_tables() {
            let rb = ft.factor().rbar();
            rbar.push(rb);
            t.push(ft.iter().map(|l| labels_t(l).rem_euclid(rb)).collect());
            jpow.push(
                ft.iter()
                    .map(|l| {
                        (0..rb)
                            .map(|b| ft.index_of(&rotate_labels(l, b)).expect("J preserves the level"))
                            .collect()
                    })
                    .collect(),
            );
            conj.push(
                ft.iter()
                    .map(|l| ft.index_of(&conjugate_labels(l)).expect("C preserves the level"))
                    .collect(),
            );
        }
        Actions {
            table,
            rbar,
            t,
            jpow,
            conj,
        }
    }

    fn build(&self, f: impl Fn(&[usize]) -> Vec<usize>) -> Permutation {
        let image = (0..self.table.len())
            .map(|g| self.table.global_index(&f(&self.table.local_indices(g))))
            .collect();
        Permutation::from_image(image).expect("construction is a bijection")
    }

    /// λ ↦ Σ_j J^{Σ_i a_ij t(λ_(i))} λ_(j)
    pub fn sigma_a(&self, a: &[Vec<i64>]) -> Permutation {
        let s = self.rbar.len();
        self.build(|local| {
            (0..s)
                .map(|j| {
                    let e: i64 = (0..s).map(|i| a[i][j] * self.t[i][local[i]]).sum();
                    self.jpow[j][local[j]][e.rem_euclid(self.rbar[j]) as usize]
                })
                .collect()
        })
    }

    pub fn c(&self, bits: &[bool]) -> Permutation {
        self.build(|local| {
            local
                .iter()
                .enumerate()
                .map(|(f, &l)| if bits[f] { self.conj[f][l] } else { l })
                .collect()
        })
    }

    /// out_(i) = λ_(π i). Assumes π respects the factor types.
    pub fn pi(&self, pi: &Permutation) -> Permutation {
        self.build(|local| (0..local.len()).map(|i| local[pi.apply(i)]).collect())
    }
}
