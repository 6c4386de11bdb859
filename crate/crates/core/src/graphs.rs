//! Complete graphs with integer edge labels ("distances"), as produced by
//! the support of a special form, together with admissibility, symmetry
//! (automorphism) search and the democratic/predemocratic predicates.
//!
//! Vertices are 0-based in the API and 1-based (`v1..vr`) in JSON and DOT.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{subset_distance, SpecialForm};

/// Default cap on `r` for automorphism searches.
pub const DEFAULT_SYMMETRY_MAX_R: usize = 12;

/// Hard limit: group orders must fit in a `u64`.
pub const MAX_SYMMETRY_R: usize = 20;

pub(crate) mod one_based {
    use serde::{Serialize, Serializer};

    pub mod nested {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Vec<usize>], s: S) -> Result<S::Ok, S::Error> {
            v.iter()
                .map(|c| c.iter().map(|&i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s)
        }
    }
}

/// Symmetric `r × r` matrix of vertex distances: zero diagonal, every
/// off-diagonal entry at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct DistanceMatrix {
    r: usize,
    entries: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    r: usize,
    entries: Vec<Vec<u32>>,
}

impl TryFrom<MatrixJson> for DistanceMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.entries.len() != j.r {
            return Err(Error::domain(format!(
                "r = {} but {} rows given",
                j.r,
                j.entries.len()
            )));
        }
        DistanceMatrix::new(j.entries)
    }
}

impl From<DistanceMatrix> for MatrixJson {
    fn from(m: DistanceMatrix) -> Self {
        MatrixJson {
            r: m.r,
            entries: m.entries,
        }
    }
}

impl DistanceMatrix {
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::domain("distance matrix needs at least one vertex"));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != r {
                return Err(Error::domain(format!(
                    "row {} has {} entries, expected {r}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j && x != 0 {
                    return Err(Error::domain(format!(
                        "diagonal entry ({0},{0}) is {x}",
                        i + 1
                    )));
                }
                if i != j && x == 0 {
                    return Err(Error::domain(format!(
                        "off-diagonal entry ({},{}) is 0",
                        i + 1,
                        j + 1
                    )));
                }
                if entries[j][i] != x {
                    return Err(Error::domain(format!(
                        "matrix not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(DistanceMatrix { r, entries })
    }

    /// Builds the matrix from a distance function on pairs `i < j`.
    pub fn from_fn(r: usize, mut dist: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        let mut entries = vec![vec![0; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                let x = dist(i, j);
                entries[i][j] = x;
                entries[j][i] = x;
            }
        }
        Self::new(entries)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.entries
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().flatten().copied().max().unwrap_or(0)
    }

    /// The distinct off-diagonal values, ascending.
    pub fn distinct_distances(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.off_diagonal().map(|(_, _, x)| x).collect();
        set.into_iter().collect()
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.r).flat_map(move |i| (i + 1..self.r).map(move |j| (i, j, self.entries[i][j])))
    }

    /// Checks that every entry is at most `p`, as any realisation requires.
    pub fn check_degree(&self, p: u32) -> Result<()> {
        match self.off_diagonal().find(|&(_, _, x)| x > p) {
            Some((i, j, x)) => Err(Error::precondition(format!(
                "entry ({},{}) = {x} exceeds p = {p}",
                i + 1,
                j + 1
            ))),
            None => Ok(()),
        }
    }

    /// The matrix seen through the relabeling `perm`: entry `(i, j)` of the
    /// result is entry `(perm(i), perm(j))` of `self`.
    pub fn relabeled(&self, perm: &VertexPermutation) -> DistanceMatrix {
        let entries = (0..self.r)
            .map(|i| {
                (0..self.r)
                    .map(|j| self.get(perm.image(i), perm.image(j)))
                    .collect()
            })
            .collect();
        DistanceMatrix { r: self.r, entries }
    }

    fn sorted_row(&self, i: usize) -> Vec<u32> {
        let mut row = self.entries[i].clone();
        row.sort_unstable();
        row
    }
}

/// A permutation of the vertex set, stored 0-based and written 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexPermutation(Vec<usize>);

impl TryFrom<Vec<usize>> for VertexPermutation {
    type Error = Error;

    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::domain("vertex labels are 1-based"));
        }
        VertexPermutation::new(one_based.into_iter().map(|i| i - 1).collect())
    }
}

impl From<VertexPermutation> for Vec<usize> {
    fn from(p: VertexPermutation) -> Vec<usize> {
        p.0.into_iter().map(|i| i + 1).collect()
    }
}

impl VertexPermutation {
    /// `images[i]` is the image of vertex `i` (0-based).
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let r = images.len();
        let mut seen = vec![false; r];
        for &x in &images {
            if x >= r || seen[x] {
                return Err(Error::domain(format!(
                    "{images:?} is not a permutation of 0..{r}"
                )));
            }
            seen[x] = true;
        }
        Ok(VertexPermutation(images))
    }

    pub fn identity(r: usize) -> Self {
        VertexPermutation((0..r).collect())
    }

    /// The shift `i ↦ i + 1 mod r`.
    pub fn cyclic_shift(r: usize) -> Self {
        VertexPermutation((0..r).map(|i| (i + 1) % r).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &VertexPermutation) -> VertexPermutation {
        VertexPermutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> VertexPermutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        VertexPermutation(inv)
    }

    pub fn order(&self) -> u64 {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }

    /// True iff `m[σ(i)][σ(j)] == m[i][j]` for all `i, j`.
    pub fn preserves(&self, m: &DistanceMatrix) -> bool {
        self.len() == m.r()
            && (0..m.r()).all(|i| (0..m.r()).all(|j| m.get(self.0[i], self.0[j]) == m.get(i, j)))
    }
}

/// Full automorphism group of a distance matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryGroupReport {
    /// Generating set, sorted.
    pub generators: Vec<VertexPermutation>,
    pub order: u64,
    pub transitive: bool,
}

/// The complete labeled graph on the support of `form`, vertices in term order.
pub fn graph_of_form(form: &SpecialForm) -> Result<DistanceMatrix> {
    if form.is_empty() {
        return Err(Error::domain("the zero form has no graph"));
    }
    let support: Vec<_> = form.support().collect();
    let r = support.len();
    let mut entries = vec![vec![0; r]; r];
    for i in 0..r {
        for j in 0..r {
            entries[i][j] = subset_distance(support[i], support[j])? as u32;
        }
    }
    DistanceMatrix::new(entries)
}

/// Every off-diagonal entry is positive and every triangle satisfies the
/// triangle inequality in all three directions.
pub fn is_admissible(m: &DistanceMatrix) -> bool {
    let r = m.r();
    if m.off_diagonal().any(|(_, _, x)| x < 1) {
        return false;
    }
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let (a, b, c) = (m.get(i, j), m.get(j, k), m.get(i, k));
                if a > b + c || b > a + c || c > a + b {
                    return false;
                }
            }
        }
    }
    true
}

/// If every vertex sees the same multiset of distances, returns the common
/// counts `n_a` keyed by distance value.
pub fn predemocratic_counts(m: &DistanceMatrix) -> Option<BTreeMap<u32, usize>> {
    let profile = |i: usize| -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for j in (0..m.r()).filter(|&j| j != i) {
            *counts.entry(m.get(i, j)).or_insert(0) += 1;
        }
        counts
    };
    let first = profile(0);
    if (1..m.r()).any(|i| profile(i) != first) {
        return None;
    }
    debug_assert_eq!(first.values().sum::<usize>(), m.r() - 1);
    Some(first)
}

pub fn is_predemocratic(m: &DistanceMatrix) -> bool {
    predemocratic_counts(m).is_some()
}

/// Transitivity of the automorphism group, with the default size cap.
pub fn is_democratic(m: &DistanceMatrix) -> Result<bool> {
    is_democratic_with_cap(m, DEFAULT_SYMMETRY_MAX_R)
}

pub fn is_democratic_with_cap(m: &DistanceMatrix, max_r: usize) -> Result<bool> {
    check_symmetry_cap(m.r(), max_r)?;
    if !is_predemocratic(m) {
        return Ok(false);
    }
    let search = MapSearch::new(m, m);
    Ok((1..m.r()).all(|j| search.find(&[(0, j)]).is_some()))
}

fn check_symmetry_cap(r: usize, max_r: usize) -> Result<()> {
    Error::check_cap("r", r, max_r.min(MAX_SYMMETRY_R))
}

pub fn symmetries(m: &DistanceMatrix) -> Result<SymmetryGroupReport> {
    symmetries_with_cap(m, DEFAULT_SYMMETRY_MAX_R)
}

/// Automorphism group via a stabilizer chain on the base `0, 1, …, r-1`.
///
/// Level `i` is the pointwise stabilizer of `0..i`; its orbit on `i` is
/// grown from the generators already known and completed by explicit
/// backtracking searches. Levels are processed from the deepest up, so
/// every generator found so far lies in the current stabilizer and the
/// group order is the product of the level orbit sizes.
pub fn symmetries_with_cap(m: &DistanceMatrix, max_r: usize) -> Result<SymmetryGroupReport> {
    check_symmetry_cap(m.r(), max_r)?;
    let r = m.r();
    let search = MapSearch::new(m, m);
    let mut generators: Vec<VertexPermutation> = Vec::new();
    let mut order: u64 = 1;
    let mut transitive = r == 1;
    for level in (0..r).rev() {
        let fixed: Vec<(usize, usize)> = (0..level).map(|v| (v, v)).collect();
        let mut orbit = orbit_of(level, &generators, r);
        for target in level + 1..r {
            if orbit[target] {
                continue;
            }
            let mut pinned = fixed.clone();
            pinned.push((level, target));
            if let Some(g) = search.find(&pinned) {
                generators.push(g);
                orbit = orbit_of(level, &generators, r);
            }
        }
        let size = orbit.iter().filter(|&&b| b).count();
        order *= size as u64;
        if level == 0 {
            transitive = size == r;
        }
    }
    generators.sort();
    Ok(SymmetryGroupReport {
        generators,
        order,
        transitive,
    })
}

fn orbit_of(start: usize, generators: &[VertexPermutation], r: usize) -> Vec<bool> {
    let mut seen = vec![false; r];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// A relabeling `π` with `b[π(i)][π(j)] == a[i][j]`, i.e. `b.relabeled(π) == a`.
pub fn find_isomorphism(a: &DistanceMatrix, b: &DistanceMatrix) -> Option<VertexPermutation> {
    if a.r() != b.r() {
        return None;
    }
    let mut pa: Vec<Vec<u32>> = (0..a.r()).map(|i| a.sorted_row(i)).collect();
    let mut pb: Vec<Vec<u32>> = (0..b.r()).map(|i| b.sorted_row(i)).collect();
    pa.sort();
    pb.sort();
    if pa != pb {
        return None;
    }
    MapSearch::new(a, b).find(&[])
}

/// All elements of the group generated by `generators`, or `None` if the
/// group has more than `limit` elements.
pub fn enumerate_group(
    generators: &[VertexPermutation],
    r: usize,
    limit: usize,
) -> Option<Vec<VertexPermutation>> {
    let id = VertexPermutation::identity(r);
    let mut seen: BTreeSet<VertexPermutation> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// Backtracking search for distance-preserving maps `a → b`, pruning by
/// per-vertex sorted distance profiles and by consistency with all
/// previously mapped vertices.
struct MapSearch<'a> {
    a: &'a DistanceMatrix,
    b: &'a DistanceMatrix,
    // candidates[i]: vertices of b with the same profile as vertex i of a
    candidates: Vec<Vec<usize>>,
}

impl<'a> MapSearch<'a> {
    fn new(a: &'a DistanceMatrix, b: &'a DistanceMatrix) -> Self {
        let pb: Vec<Vec<u32>> = (0..b.r()).map(|j| b.sorted_row(j)).collect();
        let candidates = (0..a.r())
            .map(|i| {
                let pi = a.sorted_row(i);
                (0..b.r()).filter(|&j| pb[j] == pi).collect()
            })
            .collect();
        MapSearch { a, b, candidates }
    }

    fn find(&self, pinned: &[(usize, usize)]) -> Option<VertexPermutation> {
        let r = self.a.r();
        let mut image = vec![usize::MAX; r];
        let mut used = vec![false; r];
        let mut order: Vec<usize> = Vec::with_capacity(r);
        for &(x, y) in pinned {
            if !self.candidates[x].contains(&y) || used[y] {
                return None;
            }
            image[x] = y;
            used[y] = true;
            order.push(x);
        }
        for &x in &order {
            for &z in &order {
                if self.b.get(image[x], image[z]) != self.a.get(x, z) {
                    return None;
                }
            }
        }
        let free: Vec<usize> = (0..r).filter(|&x| image[x] == usize::MAX).collect();
        let mut mapped = order;
        if self.extend(&free, 0, &mut image, &mut used, &mut mapped) {
            Some(VertexPermutation(image))
        } else {
            None
        }
    }

    fn extend(
        &self,
        free: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        mapped: &mut Vec<usize>,
    ) -> bool {
        let Some(&x) = free.get(depth) else {
            return true;
        };
        for &y in &self.candidates[x] {
            if used[y] {
                continue;
            }
            if mapped
                .iter()
                .any(|&z| self.b.get(y, image[z]) != self.a.get(x, z))
            {
                continue;
            }
            image[x] = y;
            used[y] = true;
            mapped.push(x);
            if self.extend(free, depth + 1, image, used, mapped) {
                return true;
            }
            mapped.pop();
            used[y] = false;
            image[x] = usize::MAX;
        }
        false
    }
}

/// The cycles formed by the edges of one distance value when every vertex
/// has exactly two such edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Curve {
    pub distance: u32,
    #[serde(with = "one_based::nested")]
    pub cycles: Vec<Vec<usize>>,
    pub pathlengths: Vec<usize>,
    /// All pieces share one pathlength `L`, which then divides `r`.
    pub equal_pieces: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveDecomposition {
    pub curves: Vec<Curve>,
}

impl CurveDecomposition {
    /// Every curve splits into pieces of one common length.
    pub fn all_equal_pieces(&self) -> bool {
        self.curves.iter().all(|c| c.equal_pieces)
    }
}

/// Decomposes each distance class into cycles. Requires a predemocratic
/// matrix with `n_a = 2` for every distance.
pub fn curve_decomposition(m: &DistanceMatrix) -> Result<CurveDecomposition> {
    let counts = predemocratic_counts(m)
        .ok_or_else(|| Error::precondition("curve decomposition needs a predemocratic matrix"))?;
    if let Some((d, n)) = counts.iter().find(|(_, &n)| n != 2) {
        return Err(Error::precondition(format!(
            "distance {d} occurs {n} times per vertex, expected 2"
        )));
    }
    let r = m.r();
    let curves = counts
        .keys()
        .map(|&dist| {
            let neighbours: Vec<[usize; 2]> = (0..r)
                .map(|i| {
                    let ns: Vec<usize> =
                        (0..r).filter(|&j| j != i && m.get(i, j) == dist).collect();
                    [ns[0], ns[1]]
                })
                .collect();
            let mut visited = vec![false; r];
            let mut cycles = Vec::new();
            for start in 0..r {
                if visited[start] {
                    continue;
                }
                let mut cycle = vec![start];
                visited[start] = true;
                let (mut prev, mut cur) = (start, neighbours[start][0]);
                while cur != start {
                    cycle.push(cur);
                    visited[cur] = true;
                    let [n0, n1] = neighbours[cur];
                    let next = if n0 != prev { n0 } else { n1 };
                    prev = cur;
                    cur = next;
                }
                cycles.push(cycle);
            }
            let pathlengths: Vec<usize> = cycles.iter().map(Vec::len).collect();
            let equal_pieces = pathlengths.windows(2).all(|w| w[0] == w[1]);
            Curve {
                distance: dist,
                cycles,
                pathlengths,
                equal_pieces,
            }
        })
        .collect();
    Ok(CurveDecomposition { curves })
}

/// Graphviz rendering: vertices `v1..vr`, every edge with distance below
/// `p` labeled `d=K`; distance-`p` edges are left out.
pub fn to_dot(m: &DistanceMatrix, p: u32) -> String {
    let mut out = String::from("graph G {\n");
    for i in 0..m.r() {
        let _ = writeln!(out, "  v{};", i + 1);
    }
    for (i, j, x) in m.off_diagonal() {
        if x < p {
            let _ = writeln!(out, "  v{} -- v{} [label=\"d={x}\"];", i + 1, j + 1);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(rows: &[&[u32]]) -> DistanceMatrix {
        DistanceMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn circulant5() -> DistanceMatrix {
        DistanceMatrix::from_fn(5, |i, j| {
            let k = j - i;
            [0, 1, 2, 2, 1][k]
        })
        .unwrap()
    }

    #[test]
    fn matrix_validation() {
        assert!(DistanceMatrix::new(vec![vec![0, 1], vec![2, 0]]).is_err());
        assert!(DistanceMatrix::new(vec![vec![1, 1], vec![1, 0]]).is_err());
        assert!(DistanceMatrix::new(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(DistanceMatrix::new(vec![vec![0, 1]]).is_err());
        assert!(DistanceMatrix::new(vec![]).is_err());
        let bad_r = r#"{"r":3,"entries":[[0,1],[1,0]]}"#;
        assert!(serde_json::from_str::<DistanceMatrix>(bad_r).is_err());
    }

    #[test]
    fn graph_examples() {
        let f = SpecialForm::from_terms(4, 2, &[(&[1, 2], 1), (&[3, 4], 1)]).unwrap();
        assert_eq!(graph_of_form(&f).unwrap(), dm(&[&[0, 2], &[2, 0]]));
        let tri =
            SpecialForm::from_terms(3, 2, &[(&[1, 2], 1), (&[2, 3], 1), (&[1, 3], 1)]).unwrap();
        let g = graph_of_form(&tri).unwrap();
        assert!(g.off_diagonal().all(|(_, _, x)| x == 1));
        let zero = SpecialForm::new(3, 2, vec![]).unwrap();
        assert!(graph_of_form(&zero).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&dm(&[&[0, 1], &[1, 0]])));
        assert!(!is_admissible(&dm(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]])));
        assert!(is_admissible(&dm(&[&[0, 2, 2], &[2, 0, 2], &[2, 2, 0]])));
    }

    #[test]
    fn symmetry_examples() {
        let two = symmetries(&dm(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(two.order, 2);
        assert!(two.transitive);

        let c5 = circulant5();
        let rep = symmetries(&c5).unwrap();
        // dihedral group of the pentagon
        assert_eq!(rep.order, 10);
        assert!(rep.transitive);
        let group = enumerate_group(&rep.generators, 5, 100).unwrap();
        assert_eq!(group.len() as u64, rep.order);
        assert!(group.contains(&VertexPermutation::cyclic_shift(5)));

        let rigid = dm(&[&[0, 1, 2, 3], &[1, 0, 2, 2], &[2, 2, 0, 3], &[3, 2, 3, 0]]);
        let rep = symmetries(&rigid).unwrap();
        assert_eq!(rep.order, 1);
        assert!(rep.generators.is_empty());
        assert!(!rep.transitive);
    }

    #[test]
    fn symmetric_group_order() {
        let all2 = DistanceMatrix::from_fn(7, |_, _| 2).unwrap();
        let rep = symmetries(&all2).unwrap();
        assert_eq!(rep.order, 5040);
        for g in &rep.generators {
            assert!(g.preserves(&all2));
        }
    }

    #[test]
    fn symmetry_capacity() {
        let big = DistanceMatrix::from_fn(13, |_, _| 1).unwrap();
        assert!(matches!(symmetries(&big), Err(Error::Capacity { .. })));
        assert_eq!(symmetries_with_cap(&big, 13).unwrap().order, 6_227_020_800);
    }

    #[test]
    fn predemocracy_examples() {
        let counts = predemocratic_counts(&circulant5()).unwrap();
        assert_eq!(counts, BTreeMap::from([(1, 2), (2, 2)]));
        assert!(!is_predemocratic(&dm(&[
            &[0, 1, 1],
            &[1, 0, 2],
            &[1, 2, 0]
        ])));
        assert!(is_democratic(&circulant5()).unwrap());
        assert!(!is_democratic(&dm(&[&[0, 1, 1], &[1, 0, 2], &[1, 2, 0]])).unwrap());
    }

    #[test]
    fn curves_of_pentagon() {
        let dec = curve_decomposition(&circulant5()).unwrap();
        assert_eq!(dec.curves.len(), 2);
        assert_eq!(dec.curves[0].distance, 1);
        assert_eq!(dec.curves[0].cycles, vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(dec.curves[1].cycles, vec![vec![0, 2, 4, 1, 3]]);
        assert!(dec.all_equal_pieces());
        assert!(curve_decomposition(&dm(&[&[0, 1], &[1, 0]])).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let a = circulant5();
        let perm = VertexPermutation::new(vec![3, 0, 4, 1, 2]).unwrap();
        let b = a.relabeled(&perm);
        let pi = find_isomorphism(&a, &b).unwrap();
        assert_eq!(b.relabeled(&pi), a);
        let c = DistanceMatrix::from_fn(5, |_, _| 1).unwrap();
        assert!(find_isomorphism(&a, &c).is_none());
    }

    #[test]
    fn dot_omits_distance_p() {
        let m = dm(&[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]]);
        let dot = to_dot(&m, 2);
        assert!(dot.contains("v1 -- v2 [label=\"d=1\"]"));
        assert!(!dot.contains("d=2"));
        assert!(dot.contains("v3;"));
    }

    #[test]
    fn permutation_json_is_one_based() {
        let p = VertexPermutation::cyclic_shift(3);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,3,1]");
        let back: VertexPermutation = serde_json::from_str("[2,3,1]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<VertexPermutation>("[0,1,2]").is_err());
        assert_eq!(p.order(), 3);
    }
}
