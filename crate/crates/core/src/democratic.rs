//! Families of predemocratic and democratic distance matrices, the counting
//! of symmetry families by set partitions, and exhaustive classification at
//! small prime `r`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{is_prime, prime_factors};
use crate::error::{Error, Result};
use crate::graphs::{
    find_isomorphism, is_admissible, is_democratic, is_democratic_with_cap, predemocratic_counts,
    DistanceMatrix, VertexPermutation, DEFAULT_SYMMETRY_MAX_R,
};
use crate::realization::{solve_with, GraphFunction, SolveOptions};

/// Default cap on `r` for [`classify_small`].
pub const DEFAULT_CLASSIFY_MAX_R: usize = 7;

/// The odd circulant `M^[r]`, `r = 2n + 1`, with
/// `M_ij = d_{min(|i-j|, r-|i-j|)}`.
pub fn circulant_matrix(n: usize, distances: &[u32]) -> Result<DistanceMatrix> {
    if n == 0 {
        return Err(Error::domain("circulant needs n ≥ 1"));
    }
    if distances.len() != n {
        return Err(Error::domain(format!(
            "expected {n} distances, got {}",
            distances.len()
        )));
    }
    if distances.contains(&0) {
        return Err(Error::domain("distances must be positive"));
    }
    let r = 2 * n + 1;
    DistanceMatrix::from_fn(r, |i, j| {
        let k = j - i;
        distances[k.min(r - k) - 1]
    })
}

/// The even-`r` predemocratic example: with `d_0 ≡ d_{r-1}`,
/// `d(v_i, v_j) = d_{(i+j-2) mod (r-1)}` for `i, j < r` and
/// `d(v_i, v_r) = d_{(2i-2) mod (r-1)}` (1-based vertices).
pub fn even_example_matrix(r: usize, distances: &[u32]) -> Result<DistanceMatrix> {
    if r % 2 == 1 || r < 4 {
        return Err(Error::domain(format!(
            "even example needs even r ≥ 4, got {r}"
        )));
    }
    if distances.len() != r - 1 {
        return Err(Error::domain(format!(
            "expected {} distances, got {}",
            r - 1,
            distances.len()
        )));
    }
    if distances.contains(&0) {
        return Err(Error::domain("distances must be positive"));
    }
    let d = |k: usize| -> u32 {
        match k % (r - 1) {
            0 => distances[r - 2],
            k => distances[k - 1],
        }
    };
    DistanceMatrix::from_fn(r, |a, b| {
        // 1-based labels, a < b
        let (i, j) = (a + 1, b + 1);
        if j == r {
            d(2 * i - 2)
        } else {
            d(i + j - 2)
        }
    })
}

/// A factorisation `r = r_1 ⋯ r_k` with `r_1 ≥ … ≥ r_k > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Factorization(Vec<usize>);

impl TryFrom<Vec<usize>> for Factorization {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Factorization::new(v)
    }
}

impl From<Factorization> for Vec<usize> {
    fn from(f: Factorization) -> Vec<usize> {
        f.0
    }
}

impl Factorization {
    pub fn new(mut factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("factorisation needs at least one factor"));
        }
        if factors.iter().any(|&x| x < 2) {
            return Err(Error::domain(format!("factors must exceed 1: {factors:?}")));
        }
        factors.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Factorization(factors))
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.iter().product()
    }

    /// Vertex tuple of a straightened index (last factor varies fastest).
    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let mut t = vec![0; self.0.len()];
        for (slot, &f) in t.iter_mut().zip(&self.0).rev() {
            *slot = index % f;
            index /= f;
        }
        t
    }

    /// Straightened index of a vertex tuple; for two factors this is
    /// `i_2 + r_2 · i_1` (0-based).
    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&i, &f)| acc * f + i)
    }

    /// `(t - s) mod r_A` componentwise.
    fn difference(&self, s: &[usize], t: &[usize]) -> Vec<usize> {
        s.iter()
            .zip(t)
            .zip(&self.0)
            .map(|((&a, &b), &f)| (b + f - a) % f)
            .collect()
    }

    fn negate(&self, delta: &[usize]) -> Vec<usize> {
        delta
            .iter()
            .zip(&self.0)
            .map(|(&x, &f)| (f - x) % f)
            .collect()
    }

    /// Representative of `{δ, -δ}`: the lexicographically smaller one.
    pub fn difference_class(&self, delta: &[usize]) -> Vec<usize> {
        let neg = self.negate(delta);
        if neg < delta.to_vec() {
            neg
        } else {
            delta.to_vec()
        }
    }

    /// All non-zero difference classes, sorted. One distance is assigned
    /// to each.
    pub fn difference_classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (1..self.r())
            .map(|i| self.difference_class(&self.tuple(i)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The generators `P^[A]`: shift coordinate `A` by one.
    pub fn generators(&self) -> Vec<VertexPermutation> {
        (0..self.0.len())
            .map(|a| {
                let images = (0..self.r())
                    .map(|i| {
                        let mut t = self.tuple(i);
                        t[a] = (t[a] + 1) % self.0[a];
                        self.index(&t)
                    })
                    .collect();
                VertexPermutation::new(images).expect("coordinate shift is a bijection")
            })
            .collect()
    }
}

/// Distances for [`product_matrix`], keyed by difference class.
pub type DistanceAssignment = BTreeMap<Vec<usize>, u32>;

/// The matrix with `d(v^i, v^j) = d_{j - i}`, vertices straightened as in
/// [`Factorization::index`].
pub fn product_matrix(
    fact: &Factorization,
    assignment: &DistanceAssignment,
) -> Result<DistanceMatrix> {
    let classes = fact.difference_classes();
    for c in &classes {
        match assignment.get(c) {
            None => {
                return Err(Error::domain(format!(
                    "no distance assigned to difference {c:?}"
                )))
            }
            Some(0) => return Err(Error::domain("distances must be positive")),
            Some(_) => {}
        }
    }
    if let Some(extra) = assignment.keys().find(|k| !classes.contains(k)) {
        return Err(Error::domain(format!(
            "{extra:?} is not a difference class"
        )));
    }
    DistanceMatrix::from_fn(fact.r(), |i, j| {
        let delta = fact.difference(&fact.tuple(i), &fact.tuple(j));
        assignment[&fact.difference_class(&delta)]
    })
}

/// [`product_matrix`] with distances listed in the order of
/// [`Factorization::difference_classes`].
pub fn product_matrix_from_values(fact: &Factorization, values: &[u32]) -> Result<DistanceMatrix> {
    let classes = fact.difference_classes();
    if values.len() != classes.len() {
        return Err(Error::domain(format!(
            "factorisation {:?} has {} difference classes, got {} distances",
            fact.factors(),
            classes.len(),
            values.len()
        )));
    }
    product_matrix(
        fact,
        &classes.into_iter().zip(values.iter().copied()).collect(),
    )
}

/// Bell number `B_m` via `B_{m+1} = Σ_k C(m, k) B_k`.
pub fn bell(m: usize) -> u128 {
    let mut bells: Vec<u128> = vec![1];
    for n in 0..m {
        let mut binom: u128 = 1;
        let mut next = 0u128;
        for (k, &b) in bells.iter().enumerate().take(n + 1) {
            next += binom * b;
            binom = binom * (n - k) as u128 / (k + 1) as u128;
        }
        bells.push(next);
    }
    bells[m]
}

/// All factorisations of `r` into non-increasing factors greater than 1.
pub fn factorizations(r: usize) -> Vec<Factorization> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Factorization>) {
        if rest == 1 {
            out.push(Factorization(cur.clone()));
            return;
        }
        for f in (2..=max.min(rest)).rev() {
            if rest.is_multiple_of(f) {
                cur.push(f);
                rec(rest / f, f, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if r >= 2 {
        rec(r, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of symmetry families `Z_{r_1} × ⋯ × Z_{r_k}` of democratic
/// graphs on `r` vertices: the distinct multisets `{r_A}` obtained by
/// grouping the prime factors of `r` into blocks.
pub fn count_symmetry_families(r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::domain(format!("need r ≥ 2, got {r}")));
    }
    Ok(factorizations(r).len())
}

/// True iff `r` has no repeated prime factor; returns the factor count.
pub fn squarefree_prime_count(r: usize) -> Option<usize> {
    let ps = prime_factors(r as u64);
    ps.windows(2).all(|w| w[0] != w[1]).then_some(ps.len())
}

/// One isomorphism class of democratic matrices found by [`classify_small`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    /// `d_1, …, d_n` of the circulant in this class (lexicographically first).
    pub circulant_distances: Vec<u32>,
    pub circulant: DistanceMatrix,
    /// How many labeled matrices of the enumeration fall in this class.
    pub labeled_count: usize,
    /// First labeled matrix of the class, and `π` with `example.relabeled(π) == circulant`.
    pub example: DistanceMatrix,
    pub witness: VertexPermutation,
    /// Graph functions of the circulant in degree `p` invariant under the
    /// cyclic shift; `None` when the circulant is not admissible.
    pub shift_invariant_solutions: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub r: usize,
    pub p: u32,
    pub alphabet: Vec<u32>,
    /// Labeled matrices with `n_a = 2` for all `a` and all distances distinct.
    pub candidates: usize,
    pub democratic: usize,
    pub entries: Vec<CatalogEntry>,
    /// Democratic matrices equivalent to no circulant.
    pub counterexamples: Vec<DistanceMatrix>,
    pub theorem_verified: bool,
}

/// Enumerates every labeled symmetric matrix on `r` vertices (odd prime)
/// with entries in `1..=max_distance` in which each vertex sees each of its
/// `(r-1)/2` distinct distances exactly twice, keeps the democratic ones
/// and checks each against the circulants `M^[r]`.
pub fn classify_small(r: usize, p: u32, max_distance: u32) -> Result<Catalog> {
    let alphabet: Vec<u32> = (1..=max_distance).collect();
    classify_with_alphabet(r, p, &alphabet, DEFAULT_CLASSIFY_MAX_R)
}

/// [`classify_small`] over an arbitrary set of distances.
pub fn classify_with_alphabet(r: usize, p: u32, alphabet: &[u32], max_r: usize) -> Result<Catalog> {
    if r.is_multiple_of(2) || !is_prime(r as u64) {
        return Err(Error::domain(format!("r = {r} is not an odd prime")));
    }
    Error::check_cap("r", r, max_r)?;
    let mut alphabet = alphabet.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    if alphabet.is_empty() || alphabet[0] == 0 {
        return Err(Error::domain("alphabet must be non-empty and positive"));
    }
    if let Some(&big) = alphabet.iter().find(|&&x| x > p) {
        return Err(Error::precondition(format!(
            "distance {big} exceeds p = {p}"
        )));
    }
    let n = (r - 1) / 2;

    let candidates = enumerate_two_regular(r, &alphabet, None);
    let democratic: Vec<DistanceMatrix> = candidates
        .par_iter()
        .filter(|m| is_democratic(m).unwrap_or(false))
        .cloned()
        .collect();

    // every ordering of every n-subset of the alphabet, in lex order
    let mut tuples: Vec<Vec<u32>> = crate::combinatorics::k_subsets(alphabet.len(), n)
        .into_iter()
        .flat_map(|s| permutations(&s.into_iter().map(|k| alphabet[k - 1]).collect::<Vec<_>>()))
        .collect();
    tuples.sort();
    let circulants: Vec<(Vec<u32>, DistanceMatrix)> = tuples
        .into_iter()
        .map(|t| {
            let m = circulant_matrix(n, &t)?;
            Ok((t, m))
        })
        .collect::<Result<_>>()?;

    let matches: Vec<Option<(usize, VertexPermutation)>> = democratic
        .par_iter()
        .map(|m| {
            circulants
                .iter()
                .enumerate()
                .find_map(|(k, (_, c))| find_isomorphism(c, m).map(|pi| (k, pi)))
        })
        .collect();

    let mut entries: BTreeMap<usize, CatalogEntry> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for (m, found) in democratic.iter().zip(matches) {
        match found {
            None => counterexamples.push(m.clone()),
            Some((k, pi)) => {
                entries
                    .entry(k)
                    .and_modify(|e| e.labeled_count += 1)
                    .or_insert_with(|| CatalogEntry {
                        circulant_distances: circulants[k].0.clone(),
                        circulant: circulants[k].1.clone(),
                        labeled_count: 1,
                        example: m.clone(),
                        witness: pi,
                        shift_invariant_solutions: None,
                    });
            }
        }
    }
    let mut entries: Vec<CatalogEntry> = entries.into_values().collect();
    for e in &mut entries {
        if is_admissible(&e.circulant) {
            e.shift_invariant_solutions = Some(
                invariant_solutions(&e.circulant, p, &[VertexPermutation::cyclic_shift(r)])?.len(),
            );
        }
    }
    Ok(Catalog {
        r,
        p,
        alphabet,
        candidates: candidates.len(),
        democratic: democratic.len(),
        theorem_verified: counterexamples.is_empty(),
        entries,
        counterexamples,
    })
}

/// Default cap on `r` for [`check_families`].
pub const DEFAULT_FAMILY_CHECK_MAX_R: usize = 9;

/// Outcome of [`check_families`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub r: usize,
    pub alphabet: Vec<u32>,
    /// Matrices enumerated with a normalised first row.
    pub candidates: usize,
    pub democratic: usize,
    /// Democratic matrices per matching family, keyed by factorisation.
    pub matched: BTreeMap<Factorization, usize>,
    pub unmatched: Vec<DistanceMatrix>,
    pub verified: bool,
}

/// Checks, for odd `r`, whether every democratic matrix with `n_a = 2` and
/// distinct distances from `alphabet` is a relabeling of a
/// [`product_matrix`] for some factorisation of `r`.
///
/// Any such matrix can be relabeled so that its first row reads
/// `0, d_1, d_1, d_2, d_2, …` with `d_1 < d_2 < …`, so only those are
/// enumerated.
pub fn check_families(r: usize, alphabet: &[u32], max_r: usize) -> Result<FamilyCheck> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(Error::domain(format!("r = {r} must be odd and at least 3")));
    }
    Error::check_cap("r", r, max_r)?;
    let mut alphabet = alphabet.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    if alphabet.contains(&0) {
        return Err(Error::domain("distances must be positive"));
    }
    let n = (r - 1) / 2;
    let value_sets: Vec<Vec<u32>> = crate::combinatorics::k_subsets(alphabet.len(), n)
        .into_iter()
        .map(|s| s.into_iter().map(|k| alphabet[k - 1]).collect())
        .collect();

    let mut candidates = Vec::new();
    for set in &value_sets {
        let row: Vec<u32> = set.iter().flat_map(|&x| [x, x]).collect();
        candidates.extend(enumerate_two_regular(r, &alphabet, Some(&row)));
    }
    let democratic: Vec<DistanceMatrix> = candidates
        .par_iter()
        .filter(|m| is_democratic_with_cap(m, r.max(DEFAULT_SYMMETRY_MAX_R)).unwrap_or(false))
        .cloned()
        .collect();

    // every family matrix, tagged by factorisation and value set
    let mut families: Vec<(Factorization, Vec<u32>, DistanceMatrix)> = Vec::new();
    for fact in factorizations(r) {
        for set in &value_sets {
            for values in permutations(set) {
                families.push((
                    fact.clone(),
                    set.clone(),
                    product_matrix_from_values(&fact, &values)?,
                ));
            }
        }
    }
    let found: Vec<Option<Factorization>> = democratic
        .par_iter()
        .map(|m| {
            let set = m.distinct_distances();
            families
                .iter()
                .filter(|(_, s, _)| *s == set)
                .find(|(_, _, fm)| find_isomorphism(fm, m).is_some())
                .map(|(f, _, _)| f.clone())
        })
        .collect();

    let mut matched = BTreeMap::new();
    let mut unmatched = Vec::new();
    for (m, f) in democratic.iter().zip(found) {
        match f {
            Some(f) => *matched.entry(f).or_insert(0) += 1,
            None => unmatched.push(m.clone()),
        }
    }
    Ok(FamilyCheck {
        r,
        alphabet,
        candidates: candidates.len(),
        democratic: democratic.len(),
        verified: unmatched.is_empty(),
        matched,
        unmatched,
    })
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Graph functions of `m` in degree `p` invariant under the group
/// generated by `generators`. `m` must be admissible with entries ≤ `p`.
pub fn invariant_solutions(
    m: &DistanceMatrix,
    p: u32,
    generators: &[VertexPermutation],
) -> Result<Vec<GraphFunction>> {
    solve_with(
        m,
        p,
        &SolveOptions {
            invariant_under: generators.to_vec(),
            ..SolveOptions::default()
        },
    )
}

/// Symmetric matrices over `alphabet` where every vertex sees exactly
/// `(r-1)/2` distinct values, each exactly twice. Lexicographic order of
/// the upper triangle. `first_row`, if given, fixes the entries
/// `(v_1, v_2), …, (v_1, v_r)`.
fn enumerate_two_regular(
    r: usize,
    alphabet: &[u32],
    first_row: Option<&[u32]>,
) -> Vec<DistanceMatrix> {
    struct State<'a> {
        r: usize,
        alphabet: &'a [u32],
        first_row: Option<&'a [u32]>,
        pairs: Vec<(usize, usize)>,
        entries: Vec<Vec<u32>>,
        // counts[v][k]: occurrences of alphabet[k] in row v
        counts: Vec<Vec<u8>>,
        out: Vec<DistanceMatrix>,
    }

    impl State<'_> {
        fn rec(&mut self, at: usize) {
            let Some(&(i, j)) = self.pairs.get(at) else {
                let m = DistanceMatrix::new(self.entries.clone()).expect("valid by construction");
                self.out.push(m);
                return;
            };
            for k in 0..self.alphabet.len() {
                if self.counts[i][k] == 2 || self.counts[j][k] == 2 {
                    continue;
                }
                if i == 0
                    && self
                        .first_row
                        .is_some_and(|row| row[j - 1] != self.alphabet[k])
                {
                    continue;
                }
                self.counts[i][k] += 1;
                self.counts[j][k] += 1;
                self.entries[i][j] = self.alphabet[k];
                self.entries[j][i] = self.alphabet[k];
                // row i is complete once (i, r-1) is placed
                if j == self.r - 1 && !self.row_ok(i) {
                    self.counts[i][k] -= 1;
                    self.counts[j][k] -= 1;
                    continue;
                }
                if i == self.r - 2 && !self.row_ok(self.r - 1) {
                    self.counts[i][k] -= 1;
                    self.counts[j][k] -= 1;
                    continue;
                }
                self.rec(at + 1);
                self.counts[i][k] -= 1;
                self.counts[j][k] -= 1;
            }
            self.entries[i][j] = 0;
            self.entries[j][i] = 0;
        }

        fn row_ok(&self, v: usize) -> bool {
            let shape: Vec<bool> = self.counts[v].iter().map(|&c| c == 2).collect();
            self.counts[v].iter().all(|&c| c == 0 || c == 2)
                && shape == self.counts[0].iter().map(|&c| c == 2).collect::<Vec<_>>()
        }
    }

    let pairs = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .collect();
    let mut state = State {
        r,
        alphabet,
        first_row,
        pairs,
        entries: vec![vec![0; r]; r],
        counts: vec![vec![0; alphabet.len()]; r],
        out: Vec::new(),
    };
    state.rec(0);
    state.out
}

/// A uniformly random composition `(n_1, …, n_A)` of `r - 1` into
/// `alphabet` non-negative parts, with no parity restriction.
pub fn random_profile<R: Rng + ?Sized>(rng: &mut R, r: usize, alphabet: usize) -> Vec<usize> {
    assert!(r >= 2 && alphabet >= 1);
    // stars and bars
    let slots = r - 1 + alphabet - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, alphabet - 1).into_vec();
    bars.sort_unstable();
    let mut profile = Vec::with_capacity(alphabet);
    let mut prev = 0;
    for &b in &bars {
        profile.push(b - prev);
        prev = b + 1;
    }
    profile.push(slots - prev);
    profile
}

/// Random search for a predemocratic matrix on `r` vertices over
/// distances `1..=alphabet`, toward a [`random_profile`].
pub fn random_predemocratic<R: Rng + ?Sized>(
    rng: &mut R,
    r: usize,
    alphabet: usize,
    max_steps: usize,
) -> Option<DistanceMatrix> {
    let profile = random_profile(rng, r, alphabet);
    predemocratic_toward(rng, r, &profile, max_steps)
}

/// Min-conflicts local search for a symmetric matrix in which every vertex
/// sees distance `a + 1` exactly `profile[a]` times. Returns `None` when
/// the step budget runs out.
pub fn predemocratic_toward<R: Rng + ?Sized>(
    rng: &mut R,
    r: usize,
    profile: &[usize],
    max_steps: usize,
) -> Option<DistanceMatrix> {
    let alphabet = profile.len();
    assert!(r >= 2 && profile.iter().sum::<usize>() == r - 1);
    let target: Vec<i64> = profile.iter().map(|&n| n as i64).collect();

    let pool: Vec<usize> = target
        .iter()
        .enumerate()
        .flat_map(|(a, &n)| std::iter::repeat_n(a, n as usize))
        .collect();
    let mut value = vec![vec![0usize; r]; r];
    let mut counts = vec![vec![0i64; alphabet]; r];
    for i in 0..r {
        for j in i + 1..r {
            let a = pool[rng.random_range(0..pool.len())];
            value[i][j] = a;
            value[j][i] = a;
            counts[i][a] += 1;
            counts[j][a] += 1;
        }
    }
    let cost_of = |counts: &[Vec<i64>]| -> i64 {
        counts
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&target)
                    .map(|(c, t)| (c - t).abs())
                    .sum::<i64>()
            })
            .sum()
    };
    let mut cost = cost_of(&counts);
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .collect();
    for _ in 0..max_steps {
        if cost == 0 {
            break;
        }
        let conflicted: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(i, j)| {
                let a = value[i][j];
                counts[i][a] > target[a] || counts[j][a] > target[a]
            })
            .collect();
        let (i, j) = conflicted[rng.random_range(0..conflicted.len())];
        let a = value[i][j];
        let delta = |b: usize| -> i64 {
            if b == a {
                return 0;
            }
            let mut d = 0;
            for v in [i, j] {
                d += (counts[v][a] - 1 - target[a]).abs() - (counts[v][a] - target[a]).abs();
                d += (counts[v][b] + 1 - target[b]).abs() - (counts[v][b] - target[b]).abs();
            }
            d
        };
        let b = if rng.random_bool(0.1) {
            rng.random_range(0..alphabet)
        } else {
            let best = (0..alphabet).map(delta).min().unwrap();
            let ties: Vec<usize> = (0..alphabet).filter(|&b| delta(b) == best).collect();
            ties[rng.random_range(0..ties.len())]
        };
        cost += delta(b);
        for v in [i, j] {
            counts[v][a] -= 1;
            counts[v][b] += 1;
        }
        value[i][j] = b;
        value[j][i] = b;
    }
    if cost != 0 {
        return None;
    }
    let m = DistanceMatrix::from_fn(r, |i, j| value[i][j] as u32 + 1).ok()?;
    debug_assert!(predemocratic_counts(&m).is_some());
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{curve_decomposition, is_predemocratic, symmetries};

    #[test]
    fn circulant_examples() {
        let m = circulant_matrix(2, &[1, 2]).unwrap();
        for i in 0..5 {
            let row: Vec<u32> = (0..5).map(|k| m.get(i, (i + k) % 5)).collect();
            assert_eq!(row, vec![0, 1, 2, 2, 1]);
        }
        let m3 = circulant_matrix(1, &[2]).unwrap();
        assert!(m3.off_diagonal().all(|(_, _, x)| x == 2));
        let m7 = circulant_matrix(3, &[3, 1, 2]).unwrap();
        let counts = predemocratic_counts(&m7).unwrap();
        assert!(counts.values().all(|&n| n == 2));
        assert!(VertexPermutation::cyclic_shift(7).preserves(&m7));
        assert!(circulant_matrix(2, &[1, 0]).is_err());
        assert!(circulant_matrix(2, &[1]).is_err());
    }

    #[test]
    fn even_example_r4() {
        let m = even_example_matrix(4, &[1, 2, 3]).unwrap();
        // evaluate the index formula directly (1-based; d_0 = d_3)
        let d = |k: usize| [3, 1, 2][k % 3];
        for i in 1..=4usize {
            for j in 1..=4usize {
                if i == j {
                    continue;
                }
                let want = if j == 4 {
                    d(2 * i - 2)
                } else if i == 4 {
                    d(2 * j - 2)
                } else {
                    d(i + j - 2)
                };
                assert_eq!(m.get(i - 1, j - 1), want, "({i},{j})");
            }
        }
        let counts = predemocratic_counts(&m).unwrap();
        assert_eq!(counts, BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        // each distance appears exactly twice in the upper triangle
        for x in 1..=3 {
            assert_eq!(m.off_diagonal().filter(|e| e.2 == x).count(), 2);
        }
        assert!(is_democratic(&m).unwrap());
        assert!(even_example_matrix(5, &[1, 2, 3, 4]).is_err());
    }

    #[test]
    fn even_example_r6_not_democratic() {
        let m = even_example_matrix(6, &[1, 2, 3, 4, 5]).unwrap();
        assert!(is_predemocratic(&m));
        assert!(!is_democratic(&m).unwrap());
    }

    #[test]
    fn factorization_layout() {
        let f = Factorization::new(vec![5, 3]).unwrap();
        assert_eq!(f.factors(), &[5, 3]);
        let g = Factorization::new(vec![3, 5]).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.index(&[1, 2]), 2 + 3);
        assert_eq!(f.tuple(5), vec![1, 2]);
        assert!(Factorization::new(vec![1, 3]).is_err());
    }

    #[test]
    fn single_factor_is_circulant() {
        let f = Factorization::new(vec![5]).unwrap();
        assert_eq!(f.difference_classes(), vec![vec![1], vec![2]]);
        assert_eq!(
            product_matrix_from_values(&f, &[1, 2]).unwrap(),
            circulant_matrix(2, &[1, 2]).unwrap()
        );
    }

    #[test]
    fn block_circulant_3x5() {
        let f = Factorization::new(vec![3, 5]).unwrap();
        let classes = f.difference_classes();
        // (r1*r2 - 1) / 2 classes for odd factors
        assert_eq!(classes.len(), 7);
        let values: Vec<u32> = (1..=7).collect();
        let m = product_matrix_from_values(&f, &values).unwrap();
        assert_eq!(m.r(), 15);
        // diagonal blocks are M^[3] built from the (0, δ) classes
        let d_of = |c: &[usize]| values[classes.iter().position(|x| x == c).unwrap()];
        let inner = circulant_matrix(1, &[d_of(&[0, 1])]).unwrap();
        for block in 0..5 {
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(m.get(3 * block + a, 3 * block + b), inner.get(a, b));
                }
            }
        }
        for g in f.generators() {
            assert!(g.preserves(&m));
        }
        assert!(symmetries(&m).is_err());
        assert!(
            crate::graphs::symmetries_with_cap(&m, 15)
                .unwrap()
                .transitive
        );
    }

    #[test]
    fn missing_assignment() {
        let f = Factorization::new(vec![3, 3]).unwrap();
        assert!(product_matrix(&f, &DistanceAssignment::new()).is_err());
        assert!(product_matrix_from_values(&f, &[1, 2]).is_err());
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(bell(0), 1);
        assert_eq!(bell(2), 2);
        assert_eq!(bell(4), 15);
        assert_eq!(bell(10), 115_975);
    }

    #[test]
    fn family_counts() {
        assert_eq!(count_symmetry_families(6).unwrap(), 2);
        assert_eq!(count_symmetry_families(30).unwrap(), 5);
        assert_eq!(count_symmetry_families(4).unwrap(), 2);
        assert_eq!(count_symmetry_families(7).unwrap(), 1);
        assert!(count_symmetry_families(1).is_err());
        let fams: Vec<Vec<usize>> = factorizations(30).into_iter().map(Vec::from).collect();
        assert_eq!(
            fams,
            vec![
                vec![30],
                vec![15, 2],
                vec![10, 3],
                vec![6, 5],
                vec![5, 3, 2]
            ]
        );
    }

    #[test]
    fn classify_r3_and_r5() {
        let c3 = classify_small(3, 2, 2).unwrap();
        assert!(c3.theorem_verified);
        // the two constant matrices
        assert_eq!(c3.democratic, 2);
        assert!(c3.entries.iter().all(|e| e
            .circulant
            .off_diagonal()
            .all(|x| x.2 == e.circulant_distances[0])));

        let c5 = classify_small(5, 2, 2).unwrap();
        assert!(c5.theorem_verified);
        assert_eq!(c5.candidates, c5.democratic);
        // M^[5](1,2) and M^[5](2,1) are relabelings of each other
        assert_eq!(c5.entries.len(), 1);
        assert_eq!(c5.entries[0].circulant_distances, vec![1, 2]);
        let e = &c5.entries[0];
        assert_eq!(e.example.relabeled(&e.witness), e.circulant);
        assert!(classify_small(9, 3, 3).is_err());
        assert!(classify_small(11, 5, 5).is_err());
        assert!(classify_small(5, 1, 2).is_err());
    }

    #[test]
    fn random_generator_emits_predemocratic() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut found = 0;
        for _ in 0..200 {
            if let Some(m) = random_predemocratic(&mut rng, 7, 3, 2000) {
                let counts = predemocratic_counts(&m).unwrap();
                assert!(counts.values().all(|n| n % 2 == 0));
                found += 1;
            }
        }
        assert!(found > 20, "only {found} matrices generated");
    }

    #[test]
    fn curves_of_product() {
        // Z3 × Z3: the (0,1) class only joins vertices within a Z3 coset
        let f = Factorization::new(vec![3, 3]).unwrap();
        let classes = f.difference_classes();
        assert_eq!(
            classes,
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        let m = product_matrix_from_values(&f, &[1, 2, 3, 4]).unwrap();
        let dec = curve_decomposition(&m).unwrap();
        let c1 = dec.curves.iter().find(|c| c.distance == 1).unwrap();
        assert_eq!(c1.pathlengths, vec![3, 3, 3]);
        assert!(dec.all_equal_pieces());
    }
}
