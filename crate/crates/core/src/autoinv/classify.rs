use std::collections::{BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::sigma::{enumerate_sigma_m, sigma_m_exponent, violations};
use super::{is_automorphism_invariant, realize, Actions, AutoInvError, AutoInvForm, Witness};
use crate::modular::ModularData;
use crate::perm::Permutation;
use crate::weights::{AlgebraSpec, Rational, WeightTable};

/// Cap on the number of a-matrices scanned by the general classification.
pub const DEFAULT_CANDIDATE_BOUND: u128 = 5_000_000;

/// The single-factor name C^c σ_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SingleLabel {
    #[serde(rename = "a")]
    pub c: u8,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classified {
    pub form: AutoInvForm,
    pub permutation: Permutation,
    pub label: Option<SingleLabel>,
}

/// The duplicate-free list of predicted invariants in enumeration order.
/// Candidates that fail verification are kept apart with their witness.
#[derive(Debug, Clone)]
pub struct Classification {
    table: WeightTable,
    items: Vec<Classified>,
    rejected: Vec<(AutoInvForm, Witness)>,
    index: HashMap<Permutation, usize>,
}

impl Classification {
    pub fn items(&self) -> &[Classified] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn rejected(&self) -> &[(AutoInvForm, Witness)] {
        &self.rejected
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        self.items.iter().map(|c| c.permutation.clone()).collect()
    }

    pub fn find(&self, p: &Permutation) -> Option<&Classified> {
        self.index.get(p).map(|&i| &self.items[i])
    }

    /// The listed entry equal to A∘B as a permutation, if any.
    pub fn compose_forms(
        &self,
        a: &AutoInvForm,
        b: &AutoInvForm,
    ) -> Result<Option<&Classified>, AutoInvError> {
        let pa = realize(&self.table, a)?;
        let pb = realize(&self.table, b)?;
        Ok(self.find(&pa.compose(&pb)))
    }
}

/// 2^{c+p+t}: the predicted number of invariants of A_r at level k.
pub fn count_remark1(r: u32, k: u32) -> u64 {
    let c: i32 = if r == 1 && k == 2 {
        -1
    } else if r == 1 || k <= 2 {
        0
    } else {
        1
    };
    let rbar = r as u64 + 1;
    let p = odd_primes(rbar).into_iter().filter(|q| !(k as u64).is_multiple_of(*q)).count() as i32;
    let t = if r.is_multiple_of(2) || k.is_multiple_of(4) || (k % 2 == 1 && r % 4 == 1) {
        0
    } else {
        1
    };
    1u64 << (c + p + t)
}

fn odd_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            if q != 2 {
                out.push(q);
            }
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 2 {
        out.push(n);
    }
    out
}

fn primes(n: i64) -> Vec<i64> {
    (2..=n).filter(|&p| n % p == 0 && (2..p).all(|d| p % d != 0)).collect()
}

/// Every automorphism invariant predicted by the closed-form classification,
/// each verified against S and T within `tol`.
pub fn classify(md: &ModularData, tol: f64) -> Result<Classification, AutoInvError> {
    classify_bounded(md, tol, DEFAULT_CANDIDATE_BOUND)
}

pub fn classify_bounded(
    md: &ModularData,
    tol: f64,
    bound: u128,
) -> Result<Classification, AutoInvError> {
    let candidates = if md.spec().len() == 1 {
        single_candidates(md.table())?
    } else {
        general_candidates(md.table(), bound)?
    };
    Ok(finish(md, tol, candidates))
}

/// The general σ_π∘C^c∘σ_a enumeration, also for s = 1.
pub fn classify_general(
    md: &ModularData,
    tol: f64,
    bound: u128,
) -> Result<Classification, AutoInvError> {
    let candidates = general_candidates(md.table(), bound)?;
    Ok(finish(md, tol, candidates))
}

type Candidate = (AutoInvForm, Permutation, Option<SingleLabel>);

fn finish(md: &ModularData, tol: f64, candidates: Vec<Candidate>) -> Classification {
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    let mut unique = Vec::new();
    for c in candidates {
        if seen.insert(c.1.clone(), ()).is_none() {
            unique.push(c);
        }
    }
    let verdicts: Vec<Result<(), Witness>> = unique
        .par_iter()
        .map(|(_, p, _)| is_automorphism_invariant(md, p, tol))
        .collect();
    let mut items = Vec::new();
    let mut rejected = Vec::new();
    let mut index = HashMap::new();
    for ((form, permutation, label), verdict) in unique.into_iter().zip(verdicts) {
        match verdict {
            Ok(()) => {
                index.insert(permutation.clone(), items.len());
                items.push(Classified {
                    form,
                    permutation,
                    label,
                });
            }
            Err(w) => rejected.push((form, w)),
        }
    }
    Classification {
        table: md.table().clone(),
        items,
        rejected,
        index,
    }
}

fn single_candidates(table: &WeightTable) -> Result<Vec<Candidate>, AutoInvError> {
    let acts = Actions::new(table);
    let conj = acts.c(&[true]);
    let sigmas = enumerate_sigma_m(table)?;
    let mut out = Vec::new();
    for c in 0..=1u8 {
        for (m, p) in &sigmas {
            let e = sigma_m_exponent(table, *m)?;
            let perm = if c == 1 { conj.compose(p) } else { p.clone() };
            out.push((
                AutoInvForm {
                    pi: Permutation::identity(1),
                    c: vec![c],
                    a: vec![vec![e]],
                },
                perm,
                Some(SingleLabel { c, m: *m }),
            ));
        }
    }
    Ok(out)
}

/// Factor permutations respecting (r, k) and fixing level-1 factors,
/// in lexicographic order of their image arrays.
fn block_permutations(spec: &AlgebraSpec) -> Vec<Permutation> {
    let s = spec.len();
    let f = spec.factors();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(s);
    let mut used = vec![false; s];
    fn rec(
        f: &[crate::weights::Factor],
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Permutation>,
    ) {
        let i = current.len();
        if i == f.len() {
            out.push(Permutation::from_image(current.clone()).expect("bijection"));
            return;
        }
        for j in 0..f.len() {
            if used[j] || f[j] != f[i] || (f[i].k == 1 && j != i) {
                continue;
            }
            used[j] = true;
            current.push(j);
            rec(f, current, used, out);
            current.pop();
            used[j] = false;
        }
    }
    rec(f, &mut current, &mut used, &mut out);
    out
}

/// Every a with entries reduced mod r̄_j satisfying the three conditions,
/// in lexicographic row-major order.
fn admissible_matrices(spec: &AlgebraSpec, bound: u128) -> Result<Vec<Vec<Vec<i64>>>, AutoInvError> {
    let s = spec.len();
    let rbar: Vec<i64> = spec.factors().iter().map(|f| f.rbar()).collect();
    let k: Vec<i64> = spec.factors().iter().map(|f| f.k()).collect();
    // the integrality condition restricts a_ij to multiples of r̄_j / gcd(r̄_i, r̄_j)
    let choices: Vec<Vec<i64>> = (0..s * s)
        .map(|e| {
            let (i, j) = (e / s, e % s);
            let step = rbar[j] / rbar[i].gcd(&rbar[j]);
            (0..rbar[j]).step_by(step as usize).collect()
        })
        .collect();
    let count = choices.iter().map(|c| c.len() as u128).product::<u128>();
    if count > bound {
        return Err(AutoInvError::TooManyCandidates { count, bound });
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; s * s];
    'outer: loop {
        let a: Vec<Vec<i64>> = (0..s)
            .map(|i| (0..s).map(|j| choices[i * s + j][digits[i * s + j]]).collect())
            .collect();
        if violations(&rbar, &k, &a).is_empty() {
            out.push(a);
        }
        for e in (0..s * s).rev() {
            digits[e] += 1;
            if digits[e] < choices[e].len() {
                continue 'outer;
            }
            digits[e] = 0;
        }
        break;
    }
    Ok(out)
}

fn general_candidates(table: &WeightTable, bound: u128) -> Result<Vec<Candidate>, AutoInvError> {
    let spec = table.spec();
    let s = spec.len();
    let acts = Actions::new(table);
    let allowed: Vec<bool> = spec.factors().iter().map(|f| f.r > 1 && f.k > 2).collect();
    let free: Vec<usize> = (0..s).filter(|&i| allowed[i]).collect();
    let mut cs: Vec<Vec<u8>> = Vec::new();
    for mask in 0..(1u64 << free.len()) {
        let mut c = vec![0u8; s];
        for (bit, &i) in free.iter().enumerate() {
            // first free factor is the most significant bit
            if mask >> (free.len() - 1 - bit) & 1 == 1 {
                c[i] = 1;
            }
        }
        cs.push(c);
    }
    let pis = block_permutations(spec);
    let mats = admissible_matrices(spec, bound)?;

    let pi_perms: Vec<Permutation> = pis.iter().map(|p| acts.pi(p)).collect();
    let c_perms: Vec<Permutation> = cs
        .iter()
        .map(|c| acts.c(&c.iter().map(|&x| x == 1).collect::<Vec<_>>()))
        .collect();
    let a_perms: Vec<Permutation> = mats.par_iter().map(|a| acts.sigma_a(a)).collect();

    let mut out = Vec::with_capacity(pis.len() * cs.len() * mats.len());
    for (pi, pp) in pis.iter().zip(&pi_perms) {
        for (c, cp) in cs.iter().zip(&c_perms) {
            let left = pp.compose(cp);
            for (a, ap) in mats.iter().zip(&a_perms) {
                out.push((
                    AutoInvForm {
                        pi: pi.clone(),
                        c: c.clone(),
                        a: a.clone(),
                    },
                    left.compose(ap),
                    None,
                ));
            }
        }
    }
    Ok(out)
}

/// The four generator families built from simple currents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// σ[J^m]
    Current { m: Vec<i64> },
    /// σ[p; l, m]
    Prime { p: i64, l: usize, m: usize },
    /// σ[l, m, n]
    Triple { l: usize, m: usize, n: usize },
    /// σ[l, m, n, o]
    Quadruple { l: usize, m: usize, n: usize, o: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub family: Family,
    pub a: Vec<Vec<i64>>,
}

impl Generator {
    pub fn form(&self) -> AutoInvForm {
        AutoInvForm::from_a(self.a.clone())
    }
}

/// Every instance of the four families whose matrix is admissible, with
/// duplicate matrices removed.
pub fn theorem3_generators(spec: &AlgebraSpec) -> Vec<Generator> {
    let rbar: Vec<i64> = spec.factors().iter().map(|f| f.rbar()).collect();
    let k: Vec<i64> = spec.factors().iter().map(|f| f.k()).collect();
    let mut out: Vec<Generator> = Vec::new();
    let mut seen = BTreeSet::new();
    for g in generator_candidates(spec) {
        if violations(&rbar, &k, &g.a).is_empty() && seen.insert(g.a.clone()) {
            out.push(g);
        }
    }
    out
}

pub(crate) fn generator_candidates(spec: &AlgebraSpec) -> Vec<Generator> {
    let s = spec.len();
    let rbar: Vec<i64> = spec.factors().iter().map(|f| f.rbar()).collect();
    let k: Vec<i64> = spec.factors().iter().map(|f| f.k()).collect();
    let kt: Vec<i64> = spec.factors().iter().map(|f| f.ktilde()).collect();
    let reduce = |mut a: Vec<Vec<i64>>| {
        for row in a.iter_mut() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = x.rem_euclid(rbar[j]);
            }
        }
        a
    };
    let mut out = Vec::new();

    // σ[J^m] for every m with 0 <= m_i < r̄_i
    let mut m = vec![0i64; s];
    'current: loop {
        let u: Rational = (0..s)
            .map(|i| Rational::new(kt[i] * m[i] * (rbar[i] - m[i]), rbar[i]))
            .fold(Rational::from_integer(0), |x, y| x + y);
        let n = (0..s).fold(1i64, |acc, i| acc.lcm(&(rbar[i] / m[i].gcd(&rbar[i]))));
        let nu = u * Rational::from_integer(n);
        if nu.is_integer() && nu.to_integer() % 2 == 0 {
            let half = nu.to_integer() / 2;
            if half.gcd(&n) == 1 {
                let v = (1..=n)
                    .find(|v| (v * half - 1).rem_euclid(n) == 0)
                    .expect("unit mod N");
                let a = (0..s)
                    .map(|i| (0..s).map(|j| v * (n * m[i] / rbar[i]) * m[j]).collect())
                    .collect();
                out.push(Generator {
                    family: Family::Current { m: m.clone() },
                    a: reduce(a),
                });
            }
        }
        for i in (0..s).rev() {
            m[i] += 1;
            if m[i] < rbar[i] {
                continue 'current;
            }
            m[i] = 0;
        }
        break;
    }

    let zero = || vec![vec![0i64; s]; s];
    for l in 0..s {
        for mm in l + 1..s {
            let g = rbar[l].gcd(&k[l]).gcd(&rbar[mm].gcd(&k[mm]));
            for p in primes(g) {
                if p == 2 && ((rbar[l] * k[l]) % 8 != 0 || (rbar[mm] * k[mm]) % 8 != 0) {
                    continue;
                }
                let mut a = zero();
                a[l][mm] = rbar[mm] / p;
                a[mm][l] = -rbar[l] / p;
                out.push(Generator {
                    family: Family::Prime { p, l, m: mm },
                    a: reduce(a),
                });
            }
        }
    }

    let two_mod_four = |i: usize| rbar[i] % 4 == 2;
    let odd = |i: usize| k[i] % 2 == 1;
    for l in 0..s {
        for mm in l + 1..s {
            for n in 0..s {
                if n == l || n == mm {
                    continue;
                }
                if odd(l)
                    && odd(mm)
                    && k[n] % 4 == 0
                    && two_mod_four(l)
                    && two_mod_four(mm)
                    && two_mod_four(n)
                    && (k[l] * rbar[l] + k[mm] * rbar[mm]) % 8 == 0
                {
                    let mut a = zero();
                    a[l][n] = rbar[n] / 2;
                    a[mm][n] = rbar[n] / 2;
                    a[n][l] = rbar[l] / 2;
                    a[n][mm] = rbar[mm] / 2;
                    out.push(Generator {
                        family: Family::Triple { l, m: mm, n },
                        a: reduce(a),
                    });
                }
            }
        }
    }

    for l in 0..s {
        for mm in 0..s {
            for n in 0..s {
                for o in 0..s {
                    let idx = [l, mm, n, o];
                    let distinct = (0..4).all(|x| (x + 1..4).all(|y| idx[x] != idx[y]));
                    if !distinct || !idx.iter().all(|&i| odd(i) && two_mod_four(i)) {
                        continue;
                    }
                    if (k[mm] * rbar[mm] + k[n] * rbar[n]) % 8 != 0
                        || (k[l] * rbar[l] + k[o] * rbar[o]) % 8 != 0
                    {
                        continue;
                    }
                    let mut a = zero();
                    a[l][mm] = rbar[mm] / 2;
                    a[o][mm] = rbar[mm] / 2;
                    a[l][n] = rbar[n] / 2;
                    a[o][n] = rbar[n] / 2;
                    a[mm][l] = rbar[l] / 2;
                    a[n][l] = rbar[l] / 2;
                    a[mm][o] = rbar[o] / 2;
                    a[n][o] = rbar[o] / 2;
                    out.push(Generator {
                        family: Family::Quadruple { l, m: mm, n, o },
                        a: reduce(a),
                    });
                }
            }
        }
    }
    out
}

/// Conjugation of each factor, transpositions of equal factors, and every
/// generator of the four families, as permutations.
pub fn theorem3_permutations(table: &WeightTable) -> Vec<Permutation> {
    let spec = table.spec();
    let s = spec.len();
    let acts = Actions::new(table);
    let mut out = Vec::new();
    for i in 0..s {
        let mut bits = vec![false; s];
        bits[i] = true;
        out.push(acts.c(&bits));
    }
    for i in 0..s {
        for j in i + 1..s {
            if spec.factors()[i] == spec.factors()[j] {
                let mut image: Vec<usize> = (0..s).collect();
                image.swap(i, j);
                out.push(acts.pi(&Permutation::from_image(image).expect("transposition")));
            }
        }
    }
    for g in theorem3_generators(spec) {
        out.push(acts.sigma_a(&g.a));
    }
    out
}

/// The group generated by `gens` acting on n points, sorted by image array.
pub fn generate_group(n: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(n);
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}
