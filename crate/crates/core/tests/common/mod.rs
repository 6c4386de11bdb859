//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use special_graphs::realization::{GraphFunction, VertexSet};
use special_graphs::{DistanceMatrix, SpecialForm};

/// Cayley–Dickson product on `R^{2^k}`: `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.
pub fn cd_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let sub = |u: Vec<i64>, v: Vec<i64>| u.iter().zip(&v).map(|(p, q)| p - q).collect::<Vec<_>>();
    let add = |u: Vec<i64>, v: Vec<i64>| u.iter().zip(&v).map(|(p, q)| p + q).collect::<Vec<_>>();
    let mut out = sub(cd_mul(a, c), cd_mul(&conj(d), b));
    out.extend(add(cd_mul(d, a), cd_mul(b, &conj(c))));
    out
}

pub fn conj(x: &[i64]) -> Vec<i64> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| if i == 0 { v } else { -v })
        .collect()
}

fn unit(i: usize) -> Vec<i64> {
    let mut v = vec![0; 8];
    v[i] = 1;
    v
}

/// `⟨e_i, e_j e_k⟩` on the imaginary octonions, as a 3-form on `R^7`.
pub fn octonion_three_form() -> SpecialForm {
    let mut terms: Vec<(Vec<usize>, i8)> = Vec::new();
    for i in 1..=7 {
        for j in i + 1..=7 {
            for k in j + 1..=7 {
                let c = cd_mul(&unit(j), &unit(k))[i];
                assert!(c.abs() <= 1);
                if c != 0 {
                    terms.push((vec![i, j, k], c as i8));
                }
            }
        }
    }
    let refs: Vec<(&[usize], i8)> = terms.iter().map(|(s, c)| (s.as_slice(), *c)).collect();
    SpecialForm::from_terms(7, 3, &refs).unwrap()
}

/// Number of set partitions of `{0..m}`, by listing restricted growth strings.
pub fn count_partitions(m: usize) -> u128 {
    fn rec(pos: usize, m: usize, max: usize) -> u128 {
        if pos == m {
            return 1;
        }
        (0..=max + 1).map(|b| rec(pos + 1, m, max.max(b))).sum()
    }
    if m == 0 {
        1
    } else {
        rec(1, m, 0)
    }
}

/// All graph functions on `r` vertices in degree `p`, grouped by the
/// distance matrix they produce. Values on subsets of size ≥ 2 are
/// enumerated freely in `[0, p]`; singletons are then fixed by
/// `Σ_{S ∋ v} f(S) = p`.
pub fn brute_force_graph_functions(
    r: usize,
    p: u32,
) -> BTreeMap<Vec<Vec<u32>>, BTreeSet<BTreeMap<Vec<usize>, u32>>> {
    let full = (1u32 << r) - 1;
    let multi: Vec<u32> = (1..full).filter(|s| s.count_ones() >= 2).collect();
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    let mut values = vec![0u32; multi.len()];
    loop {
        let mut single = vec![p as i64; r];
        for (&s, &v) in multi.iter().zip(&values) {
            for (w, slot) in single.iter_mut().enumerate() {
                if s >> w & 1 == 1 {
                    *slot -= v as i64;
                }
            }
        }
        if single.iter().all(|&x| x >= 0) {
            let mut f: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
            for (&s, &v) in multi.iter().zip(&values) {
                if v > 0 {
                    f.insert((0..r).filter(|w| s >> w & 1 == 1).collect(), v);
                }
            }
            for (w, &x) in single.iter().enumerate() {
                if x > 0 {
                    f.insert(vec![w], x as u32);
                }
            }
            let m: Vec<Vec<u32>> = (0..r)
                .map(|v| {
                    (0..r)
                        .map(|w| {
                            if v == w {
                                0
                            } else {
                                let shared: u32 = f
                                    .iter()
                                    .filter(|(s, _)| s.contains(&v) && s.contains(&w))
                                    .map(|(_, &x)| x)
                                    .sum();
                                p - shared
                            }
                        })
                        .collect()
                })
                .collect();
            out.entry(m).or_default().insert(f);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == values.len() {
                return out;
            }
            values[k] += 1;
            if values[k] <= p {
                break;
            }
            values[k] = 0;
            k += 1;
        }
    }
}

/// Graph function as a plain map keyed by sorted 0-based vertex lists.
pub fn as_plain(f: &GraphFunction) -> BTreeMap<Vec<usize>, u32> {
    f.values()
        .iter()
        .map(|(s, &v)| (s.vertices().collect(), v))
        .collect()
}

pub fn vertex_set(vs: &[usize]) -> VertexSet {
    VertexSet::from_vertices(vs.iter().copied())
}

/// Every symmetric `r × r` matrix with off-diagonal entries in `1..=max`.
pub fn all_matrices(r: usize, max: u32) -> Vec<DistanceMatrix> {
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let mut vals = vec![1u32; pairs.len()];
    loop {
        let mut e = vec![vec![0; r]; r];
        for (&(i, j), &v) in pairs.iter().zip(&vals) {
            e[i][j] = v;
            e[j][i] = v;
        }
        out.push(DistanceMatrix::new(e).unwrap());
        let mut k = 0;
        loop {
            if k == vals.len() {
                return out;
            }
            vals[k] += 1;
            if vals[k] <= max {
                break;
            }
            vals[k] = 1;
            k += 1;
        }
    }
}
