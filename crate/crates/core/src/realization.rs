//! Graph functions and realisations.
//!
//! A graph function `f` assigns to every vertex subset `S` the number of
//! indices shared by exactly the vertices of `S`. A distance matrix `m` is
//! realised by `f` iff, for all vertices `v, w`,
//!
//! ```text
//! m[v][w] = p - Σ_{S ⊇ {v, w}} f(S)        (and the sum is p when v = w)
//! ```
//!
//! with `f(∅) = f(V) = 0`. [`solve`] enumerates every non-negative integer
//! solution; [`realize`] turns one into explicit oriented p-subsets, and
//! [`forms_of`] lists the special forms they carry up to index flips.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{subset_distance, OrientedSubset, Sign, SpecialForm, Term};
use crate::gf2::{BitRow, EchelonBasis};
use crate::graphs::{enumerate_group, is_admissible, DistanceMatrix, VertexPermutation};

/// Default cap on `r` for [`solve`]; the unknowns number `2^r - 2`.
pub const DEFAULT_SOLVER_MAX_R: usize = 8;

/// Default cap on `r` for [`forms_of`].
pub const DEFAULT_SIGN_MAX_R: usize = 24;

/// Vertex subsets are bit masks, so `r` is limited to this.
pub const MAX_R: usize = 31;

/// A set of vertices, ordered lexicographically as a sorted vertex list
/// (`{1} < {1,2} < {1,2,3} < {1,3} < {2} < …`). Written 1-based in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(r: usize) -> VertexSet {
        VertexSet(((1u64 << r) - 1) as u32)
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = usize>) -> VertexSet {
        VertexSet(vertices.into_iter().fold(0, |m, v| m | 1 << v))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn from_bits(bits: u32) -> VertexSet {
        VertexSet(bits)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&v| self.contains(v))
    }

    pub fn image(self, perm: &VertexPermutation) -> VertexSet {
        VertexSet::from_vertices(self.vertices().map(|v| perm.image(v)))
    }

    fn max_vertex(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices()
            .map(|v| v + 1)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        let mut set = VertexSet::EMPTY;
        for v in labels {
            if v == 0 || v > MAX_R {
                return Err(serde::de::Error::custom(format!(
                    "vertex label {v} outside [1, {MAX_R}]"
                )));
            }
            if set.contains(v - 1) {
                return Err(serde::de::Error::custom(format!("vertex {v} repeated")));
            }
            set.0 |= 1 << (v - 1);
        }
        Ok(set)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().map(|v| format!("v{}", v + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Non-negative integer weights on the proper non-empty vertex subsets,
/// with every vertex covered exactly `p` times. Only non-zero values are
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphFunctionJson", into = "GraphFunctionJson")]
pub struct GraphFunction {
    r: usize,
    p: u32,
    values: BTreeMap<VertexSet, u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphFunctionJson {
    r: usize,
    p: u32,
    values: Vec<ValueJson>,
}

#[derive(Serialize, Deserialize)]
struct ValueJson {
    subset: VertexSet,
    f: u32,
}

impl TryFrom<GraphFunctionJson> for GraphFunction {
    type Error = Error;

    fn try_from(j: GraphFunctionJson) -> Result<Self> {
        let mut values = BTreeMap::new();
        for v in j.values {
            if values.insert(v.subset, v.f).is_some() {
                return Err(Error::domain(format!("subset {} listed twice", v.subset)));
            }
        }
        GraphFunction::new(j.r, j.p, values)
    }
}

impl From<GraphFunction> for GraphFunctionJson {
    fn from(g: GraphFunction) -> Self {
        GraphFunctionJson {
            r: g.r,
            p: g.p,
            values: g
                .values
                .into_iter()
                .map(|(subset, f)| ValueJson { subset, f })
                .collect(),
        }
    }
}

impl GraphFunction {
    pub fn new(r: usize, p: u32, values: BTreeMap<VertexSet, u32>) -> Result<Self> {
        if r == 0 || r > MAX_R {
            return Err(Error::domain(format!(
                "vertex count r = {r} outside [1, {MAX_R}]"
            )));
        }
        let values: BTreeMap<VertexSet, u32> = values.into_iter().filter(|&(_, f)| f > 0).collect();
        let full = VertexSet::full(r);
        for &s in values.keys() {
            if s.max_vertex().is_some_and(|v| v >= r) {
                return Err(Error::domain(format!(
                    "subset {s} mentions a vertex beyond r = {r}"
                )));
            }
            if s.is_empty() || s == full {
                return Err(Error::precondition(format!(
                    "f must vanish on the empty set and on V, got f({s}) > 0"
                )));
            }
        }
        let f = GraphFunction { r, p, values };
        for v in 0..r {
            let cover = f.cover(v, v);
            if cover != p {
                return Err(Error::precondition(format!(
                    "vertex v{} is covered {cover} times, expected p = {p}",
                    v + 1
                )));
            }
        }
        Ok(f)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn get(&self, s: VertexSet) -> u32 {
        self.values.get(&s).copied().unwrap_or(0)
    }

    /// Non-zero values in lexicographic subset order.
    pub fn values(&self) -> &BTreeMap<VertexSet, u32> {
        &self.values
    }

    /// Total index count `d = Σ_S f(S)`.
    pub fn d(&self) -> u32 {
        self.values.values().sum()
    }

    /// `Σ_{S ∋ v, w} f(S)`.
    fn cover(&self, v: usize, w: usize) -> u32 {
        self.values
            .iter()
            .filter(|(s, _)| s.contains(v) && s.contains(w))
            .map(|(_, &f)| f)
            .sum()
    }

    /// `p - Σ_{S ⊇ {v, w}} f(S)`.
    pub fn distance(&self, v: usize, w: usize) -> u32 {
        self.p - self.cover(v, w)
    }

    /// The distance matrix this function realises.
    pub fn distance_matrix(&self) -> Result<DistanceMatrix> {
        DistanceMatrix::from_fn(self.r, |v, w| self.distance(v, w))
    }

    /// `f(σS) = f(S)` for every subset `S`.
    pub fn is_invariant_under(&self, sigma: &VertexPermutation) -> bool {
        sigma.len() == self.r
            && self
                .values
                .iter()
                .all(|(&s, &f)| self.get(s.image(sigma)) == f)
    }
}

/// Options for [`solve_with`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Keep only solutions with `Σ f = d`.
    pub d_filter: Option<u32>,
    /// Keep only solutions with `f(σS) = f(S)` for every listed `σ`.
    pub invariant_under: Vec<VertexPermutation>,
    pub max_r: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            d_filter: None,
            invariant_under: Vec::new(),
            max_r: DEFAULT_SOLVER_MAX_R,
        }
    }
}

/// All graph functions realising `m` in degree `p`, sorted.
pub fn solve(m: &DistanceMatrix, p: u32, d_filter: Option<u32>) -> Result<Vec<GraphFunction>> {
    solve_with(
        m,
        p,
        &SolveOptions {
            d_filter,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_with(m: &DistanceMatrix, p: u32, opts: &SolveOptions) -> Result<Vec<GraphFunction>> {
    Error::check_cap("r", m.r(), opts.max_r.min(MAX_R))?;
    if !is_admissible(m) {
        return Err(Error::precondition("distance matrix is not admissible"));
    }
    m.check_degree(p)?;
    for sigma in &opts.invariant_under {
        if !sigma.preserves(m) {
            return Err(Error::precondition(format!(
                "{:?} is not a symmetry of the distance matrix",
                Vec::<usize>::from(sigma.clone())
            )));
        }
    }
    let mut solver = Solver::new(m, p, &opts.invariant_under);
    solver.run();
    let mut out: Vec<GraphFunction> = solver
        .solutions
        .into_iter()
        .map(|values| GraphFunction::new(m.r(), p, values))
        .collect::<Result<_>>()?;
    if let Some(d) = opts.d_filter {
        out.retain(|f| f.d() == d);
    }
    out.sort();
    Ok(out)
}

/// One unknown of the search: the common value of `f` on an orbit of
/// subsets (a single subset when no invariance is imposed).
struct Unknown {
    members: Vec<VertexSet>,
    size: usize,
    // (vertex, number of members containing it)
    vertex_coeffs: Vec<(usize, u32)>,
    // (pair index, number of members containing both)
    pair_coeffs: Vec<(usize, u32)>,
}

/// Depth-first search over the unknowns, largest subsets first, tracking
/// the remaining per-vertex budget `p - Σ_{S∋v} f(S)` and per-pair budget
/// `p - m[v][w] - Σ_{S⊇{v,w}} f(S)`. A budget must hit zero by the last
/// unknown touching it, and a vertex can still absorb at most
/// `(s - 1) · budget(v)` pair units when the largest remaining subset
/// has `s` elements.
struct Solver {
    r: usize,
    unknowns: Vec<Unknown>,
    vertex_budget: Vec<i64>,
    pair_budget: Vec<i64>,
    // Σ_w pair_budget(v, w)
    pair_load: Vec<i64>,
    pair_vertices: Vec<(usize, usize)>,
    // constraints closed after unknown k
    closes_vertices: Vec<Vec<usize>>,
    closes_pairs: Vec<Vec<usize>>,
    feasible_from_start: bool,
    values: Vec<u32>,
    solutions: Vec<BTreeMap<VertexSet, u32>>,
}

impl Solver {
    fn new(m: &DistanceMatrix, p: u32, group: &[VertexPermutation]) -> Self {
        let r = m.r();
        let full = VertexSet::full(r);
        let pair_vertices: Vec<(usize, usize)> = (0..r)
            .flat_map(|v| (v + 1..r).map(move |w| (v, w)))
            .collect();
        let pair_index = |v: usize, w: usize| -> usize {
            let (v, w) = (v.min(w), v.max(w));
            // row-major index into the strict upper triangle
            v * (2 * r - v - 1) / 2 + (w - v - 1)
        };

        let mut seen = vec![false; 1 << r];
        let mut orbits: Vec<Vec<VertexSet>> = Vec::new();
        for bits in 1..full.bits() {
            if seen[bits as usize] {
                continue;
            }
            let mut orbit = vec![VertexSet(bits)];
            seen[bits as usize] = true;
            let mut k = 0;
            while k < orbit.len() {
                for g in group {
                    let img = orbit[k].image(g);
                    if !seen[img.bits() as usize] {
                        seen[img.bits() as usize] = true;
                        orbit.push(img);
                    }
                }
                k += 1;
            }
            orbit.sort();
            orbits.push(orbit);
        }
        // largest pair coverage first; lexicographic among equals
        orbits.sort_by(|a, b| b[0].len().cmp(&a[0].len()).then_with(|| a[0].cmp(&b[0])));

        let unknowns: Vec<Unknown> = orbits
            .into_iter()
            .map(|members| {
                let mut vc = vec![0u32; r];
                let mut pc: BTreeMap<usize, u32> = BTreeMap::new();
                for s in &members {
                    let vs: Vec<usize> = s.vertices().collect();
                    for (a, &v) in vs.iter().enumerate() {
                        vc[v] += 1;
                        for &w in &vs[a + 1..] {
                            *pc.entry(pair_index(v, w)).or_insert(0) += 1;
                        }
                    }
                }
                Unknown {
                    size: members[0].len(),
                    members,
                    vertex_coeffs: vc.into_iter().enumerate().filter(|&(_, c)| c > 0).collect(),
                    pair_coeffs: pc.into_iter().collect(),
                }
            })
            .collect();

        let n = unknowns.len();
        let mut last_vertex = vec![None; r];
        let mut last_pair = vec![None; pair_vertices.len()];
        for (k, u) in unknowns.iter().enumerate() {
            for &(v, _) in &u.vertex_coeffs {
                last_vertex[v] = Some(k);
            }
            for &(q, _) in &u.pair_coeffs {
                last_pair[q] = Some(k);
            }
        }
        let mut closes_vertices = vec![Vec::new(); n];
        let mut closes_pairs = vec![Vec::new(); n];
        let vertex_budget = vec![p as i64; r];
        let pair_budget: Vec<i64> = pair_vertices
            .iter()
            .map(|&(v, w)| p as i64 - m.get(v, w) as i64)
            .collect();
        let mut feasible_from_start = true;
        for (v, last) in last_vertex.iter().enumerate() {
            match last {
                Some(k) => closes_vertices[*k].push(v),
                None => feasible_from_start &= vertex_budget[v] == 0,
            }
        }
        for (q, last) in last_pair.iter().enumerate() {
            match last {
                Some(k) => closes_pairs[*k].push(q),
                None => feasible_from_start &= pair_budget[q] == 0,
            }
        }
        let mut pair_load = vec![0i64; r];
        for (q, &(v, w)) in pair_vertices.iter().enumerate() {
            pair_load[v] += pair_budget[q];
            pair_load[w] += pair_budget[q];
        }

        Solver {
            r,
            values: vec![0; n],
            unknowns,
            vertex_budget,
            pair_budget,
            pair_load,
            pair_vertices,
            closes_vertices,
            closes_pairs,
            feasible_from_start,
            solutions: Vec::new(),
        }
    }

    fn run(&mut self) {
        if self.feasible_from_start {
            self.descend(0);
        }
    }

    fn descend(&mut self, k: usize) {
        if k == self.unknowns.len() {
            self.record();
            return;
        }
        let u = &self.unknowns[k];
        let mut upper = i64::MAX;
        for &(v, c) in &u.vertex_coeffs {
            upper = upper.min(self.vertex_budget[v] / c as i64);
        }
        for &(q, c) in &u.pair_coeffs {
            upper = upper.min(self.pair_budget[q] / c as i64);
        }
        if upper < 0 {
            return;
        }
        let mut lower = 0;
        // a constraint closing here pins the value
        let pinned = self.closes_vertices[k]
            .iter()
            .map(|&v| {
                let c = u.vertex_coeffs.iter().find(|x| x.0 == v).unwrap().1 as i64;
                (self.vertex_budget[v], c)
            })
            .chain(self.closes_pairs[k].iter().map(|&q| {
                let c = u.pair_coeffs.iter().find(|x| x.0 == q).unwrap().1 as i64;
                (self.pair_budget[q], c)
            }))
            .next();
        if let Some((budget, c)) = pinned {
            if budget % c != 0 || budget / c > upper {
                return;
            }
            lower = budget / c;
            upper = lower;
        }
        for val in lower..=upper {
            self.shift(k, val);
            if self.consistent(k) {
                self.values[k] = val as u32;
                self.descend(k + 1);
                self.values[k] = 0;
            }
            self.shift(k, -val);
        }
    }

    fn shift(&mut self, k: usize, val: i64) {
        if val == 0 {
            return;
        }
        let u = &self.unknowns[k];
        for &(v, c) in &u.vertex_coeffs {
            self.vertex_budget[v] -= val * c as i64;
        }
        for &(q, c) in &u.pair_coeffs {
            self.pair_budget[q] -= val * c as i64;
            let (v, w) = self.pair_vertices[q];
            self.pair_load[v] -= val * c as i64;
            self.pair_load[w] -= val * c as i64;
        }
    }

    fn consistent(&self, k: usize) -> bool {
        if self.closes_vertices[k]
            .iter()
            .any(|&v| self.vertex_budget[v] != 0)
            || self.closes_pairs[k]
                .iter()
                .any(|&q| self.pair_budget[q] != 0)
        {
            return false;
        }
        let u = &self.unknowns[k];
        if u.vertex_coeffs
            .iter()
            .any(|&(v, _)| self.vertex_budget[v] < 0)
            || u.pair_coeffs.iter().any(|&(q, _)| self.pair_budget[q] < 0)
        {
            return false;
        }
        let next_size = self.unknowns.get(k + 1).map_or(0, |n| n.size) as i64;
        (0..self.r).all(|v| self.pair_load[v] <= (next_size - 1).max(0) * self.vertex_budget[v])
    }

    fn record(&mut self) {
        let mut values = BTreeMap::new();
        for (u, &val) in self.unknowns.iter().zip(&self.values) {
            if val > 0 {
                for &s in &u.members {
                    values.insert(s, val);
                }
            }
        }
        self.solutions.push(values);
    }
}

/// An assignment of oriented p-subsets to the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RealizationJson", into = "RealizationJson")]
pub struct Realization {
    p: usize,
    d: usize,
    assignment: Vec<OrientedSubset>,
    // F(S): indices carried by exactly the vertices of S
    blocks: BTreeMap<VertexSet, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RealizationJson {
    r: usize,
    p: usize,
    d: usize,
    vertices: Vec<OrientedSubset>,
    blocks: Vec<BlockJson>,
    form: SpecialForm,
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    subset: VertexSet,
    indices: Vec<usize>,
}

impl TryFrom<RealizationJson> for Realization {
    type Error = Error;

    fn try_from(j: RealizationJson) -> Result<Self> {
        let real = Realization::from_subsets(j.d, j.vertices)?;
        let blocks: BTreeMap<VertexSet, Vec<usize>> = j
            .blocks
            .into_iter()
            .map(|b| (b.subset, b.indices))
            .collect();
        if j.r != real.r() || j.p != real.p || blocks != real.blocks {
            return Err(Error::domain(
                "realization blocks disagree with vertex subsets",
            ));
        }
        if j.form != real.positive_form()? {
            return Err(Error::domain(
                "realization form disagrees with vertex subsets",
            ));
        }
        Ok(real)
    }
}

impl From<Realization> for RealizationJson {
    fn from(real: Realization) -> Self {
        let form = real
            .positive_form()
            .expect("serialized realizations have distinct subsets");
        RealizationJson {
            r: real.r(),
            p: real.p,
            d: real.d,
            blocks: real
                .blocks
                .iter()
                .map(|(&subset, indices)| BlockJson {
                    subset,
                    indices: indices.clone(),
                })
                .collect(),
            vertices: real.assignment,
            form,
        }
    }
}

impl Realization {
    /// Wraps explicit vertex subsets; blocks are recomputed from them.
    pub fn from_subsets(d: usize, assignment: Vec<OrientedSubset>) -> Result<Self> {
        let r = assignment.len();
        if r == 0 || r > MAX_R {
            return Err(Error::domain(format!(
                "vertex count r = {r} outside [1, {MAX_R}]"
            )));
        }
        let p = assignment[0].degree();
        if let Some(s) = assignment.iter().find(|s| s.degree() != p) {
            return Err(Error::domain(format!(
                "subset {s} has degree {}, expected {p}",
                s.degree()
            )));
        }
        if let Some(s) = assignment.iter().find(|s| s.max_index() > d) {
            return Err(Error::domain(format!(
                "subset {s} has an index above d = {d}"
            )));
        }
        let mut blocks: BTreeMap<VertexSet, Vec<usize>> = BTreeMap::new();
        for mu in 1..=d {
            let owners = VertexSet::from_vertices((0..r).filter(|&v| assignment[v].contains(mu)));
            blocks.entry(owners).or_default().push(mu);
        }
        Ok(Realization {
            p,
            d,
            assignment,
            blocks,
        })
    }

    pub fn r(&self) -> usize {
        self.assignment.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn subsets(&self) -> &[OrientedSubset] {
        &self.assignment
    }

    pub fn blocks(&self) -> &BTreeMap<VertexSet, Vec<usize>> {
        &self.blocks
    }

    /// Block sizes `#F(S)` for every subset `S` with a non-empty block.
    pub fn block_sizes(&self) -> BTreeMap<VertexSet, usize> {
        self.blocks.iter().map(|(&s, b)| (s, b.len())).collect()
    }

    /// The form `Σ_v e_{s_v}` with every sign positive.
    pub fn positive_form(&self) -> Result<SpecialForm> {
        self.signed_form(&vec![Sign::Plus; self.r()])
    }

    /// The form `Σ_v ε_v e_{s_v}`.
    pub fn signed_form(&self, signs: &[Sign]) -> Result<SpecialForm> {
        let terms = self
            .assignment
            .iter()
            .zip(signs)
            .map(|(s, &sign)| Term {
                subset: s.clone(),
                sign,
            })
            .collect();
        SpecialForm::new(self.d, self.p, terms)
    }
}

/// Builds the realisation of `f`: blocks `F(S)` of size `f(S)` take
/// consecutive indices in lexicographic order of `S`, and
/// `s_v = ⋃_{S ∋ v} F(S)`.
pub fn realize(f: &GraphFunction) -> Result<Realization> {
    let r = f.r();
    let d = f.d() as usize;
    let mut next = 1;
    let mut blocks = BTreeMap::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); r];
    for (&s, &size) in f.values() {
        let block: Vec<usize> = (next..next + size as usize).collect();
        next += size as usize;
        for v in s.vertices() {
            members[v].extend_from_slice(&block);
        }
        blocks.insert(s, block);
    }
    let assignment = members
        .into_iter()
        .map(|mut ix| {
            ix.sort_unstable();
            OrientedSubset::new(ix)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Realization {
        p: f.p() as usize,
        d,
        assignment,
        blocks,
    })
}

/// Outcome of [`verify`]; `defects` is empty iff the check passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub defects: Vec<String>,
}

/// Checks that `real` reproduces `m` and that its subsets cover `{1..d}`
/// with empty common intersection.
pub fn verify(real: &Realization, m: &DistanceMatrix) -> Verification {
    let mut defects = Vec::new();
    let r = real.r();
    if m.r() != r {
        defects.push(format!(
            "realization has {r} vertices, matrix has {}",
            m.r()
        ));
    } else {
        for (v, w, want) in m.off_diagonal() {
            let got = subset_distance(&real.assignment[v], &real.assignment[w])
                .map(|x| x as u32)
                .unwrap_or(u32::MAX);
            if got != want {
                defects.push(format!(
                    "distance(v{}, v{}) is {got}, matrix says {want}",
                    v + 1,
                    w + 1
                ));
            }
        }
    }
    if let Some(missing) = real.blocks.get(&VertexSet::EMPTY) {
        defects.push(format!("indices {missing:?} are used by no vertex"));
    }
    if let Some(common) = real.blocks.get(&VertexSet::full(r)) {
        defects.push(format!("indices {common:?} are shared by every vertex"));
    }
    Verification {
        ok: defects.is_empty(),
        defects,
    }
}

/// Equivalence under index permutations with the vertex correspondence
/// held fixed: holds iff every block `F(S)` has the same size in both.
pub fn equivalent(a: &Realization, b: &Realization) -> bool {
    equivalence_witness(a, b).is_some()
}

/// An index permutation `π` (1-based images) with `π(s^a_v) = s^b_v` for all `v`.
pub fn equivalence_witness(a: &Realization, b: &Realization) -> Option<IndexPermutation> {
    if (a.r(), a.p, a.d) != (b.r(), b.p, b.d) || a.block_sizes() != b.block_sizes() {
        return None;
    }
    let mut images = vec![0; a.d];
    for (s, block) in &a.blocks {
        for (&x, &y) in block.iter().zip(&b.blocks[s]) {
            images[x - 1] = y;
        }
    }
    Some(IndexPermutation(images))
}

/// One special form per class of sign choices `ε ∈ {±1}^r`, modulo the
/// index flips `ε_v ↦ ε_v · Π_{μ ∈ s_v} η_μ`. Each class is represented by
/// its lexicographically least sign vector, so the first vertex always
/// carries `+1`.
pub fn forms_of(real: &Realization) -> Result<Vec<SpecialForm>> {
    forms_of_with_cap(real, DEFAULT_SIGN_MAX_R)
}

pub fn forms_of_with_cap(real: &Realization, max_r: usize) -> Result<Vec<SpecialForm>> {
    let r = real.r();
    Error::check_cap("r", r, max_r)?;
    let flips: Vec<BitRow> = (1..=real.d)
        .map(|mu| BitRow::from_indices(r, (0..r).filter(|&v| real.assignment[v].contains(mu))))
        .collect();
    let basis = EchelonBasis::from_generators(r, &flips);
    basis
        .coset_representatives()
        .into_iter()
        .map(|eps| {
            let signs: Vec<Sign> = (0..r).map(|v| Sign::from_odd(eps.get(v))).collect();
            real.signed_form(&signs)
        })
        .collect()
}

/// Number of sign classes, `2^(r - rank)` for the incidence map over GF(2).
pub fn sign_class_count(real: &Realization) -> u64 {
    let r = real.r();
    let flips: Vec<BitRow> = (1..=real.d)
        .map(|mu| BitRow::from_indices(r, (0..r).filter(|&v| real.assignment[v].contains(mu))))
        .collect();
    1u64 << (r - EchelonBasis::from_generators(r, &flips).rank())
}

/// A permutation of the indices `1..=d`, written as 1-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexPermutation(Vec<usize>);

impl IndexPermutation {
    pub fn identity(d: usize) -> Self {
        IndexPermutation((1..=d).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, mu: usize) -> usize {
        self.0[mu - 1]
    }

    pub fn apply(&self, s: &OrientedSubset) -> OrientedSubset {
        let mut ix: Vec<usize> = s.indices().iter().map(|&mu| self.image(mu)).collect();
        ix.sort_unstable();
        OrientedSubset::new(ix).expect("permutation images are distinct")
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn order(&self) -> u64 {
        let d = self.0.len();
        let mut seen = vec![false; d];
        let mut order = 1u64;
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] - 1;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Lifts a vertex symmetry `σ` with `f(σS) = f(S)` to the index
/// permutation sending block `F(S)` of [`realize`]`(f)` onto `F(σS)`,
/// order-preservingly. It maps `s_v` onto `s_{σ(v)}`.
pub fn lift_symmetry(f: &GraphFunction, sigma: &VertexPermutation) -> Result<IndexPermutation> {
    if sigma.len() != f.r() {
        return Err(Error::domain(format!(
            "permutation acts on {} vertices, f on {}",
            sigma.len(),
            f.r()
        )));
    }
    if !f.is_invariant_under(sigma) {
        return Err(Error::precondition(
            "f is not invariant under the given permutation",
        ));
    }
    let real = realize(f)?;
    let mut images = vec![0; real.d];
    for (s, block) in &real.blocks {
        for (&x, &y) in block.iter().zip(&real.blocks[&s.image(sigma)]) {
            images[x - 1] = y;
        }
    }
    Ok(IndexPermutation(images))
}

/// Every element of the group generated by `generators` (capped at
/// `limit`) that leaves `f` invariant.
pub fn invariant_symmetries(
    f: &GraphFunction,
    generators: &[VertexPermutation],
    limit: usize,
) -> Option<Vec<VertexPermutation>> {
    let group = enumerate_group(generators, f.r(), limit)?;
    Some(
        group
            .into_iter()
            .filter(|g| f.is_invariant_under(g))
            .collect(),
    )
}

/// Distinct graph functions among `fs` up to the action of `group`, keeping
/// the least member of each class.
pub fn orbit_representatives(
    fs: &[GraphFunction],
    group: &[VertexPermutation],
) -> Vec<GraphFunction> {
    let mut seen: BTreeSet<GraphFunction> = BTreeSet::new();
    let mut reps = Vec::new();
    for f in fs {
        if seen.contains(f) {
            continue;
        }
        for g in group {
            let values = f.values().iter().map(|(&s, &v)| (s.image(g), v)).collect();
            if let Ok(img) = GraphFunction::new(f.r(), f.p(), values) {
                seen.insert(img);
            }
        }
        seen.insert(f.clone());
        reps.push(f.clone());
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(vs.iter().map(|v| v - 1))
    }

    fn dm(rows: &[&[u32]]) -> DistanceMatrix {
        DistanceMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn constant(r: usize, x: u32) -> DistanceMatrix {
        DistanceMatrix::from_fn(r, |_, _| x).unwrap()
    }

    #[test]
    fn vertex_set_order_is_lexicographic() {
        let mut sets = [set(&[3]),
            set(&[1, 3]),
            set(&[2]),
            set(&[1, 2, 3]),
            set(&[1]),
            set(&[2, 3]),
            set(&[1, 2])];
        sets.sort();
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            shown,
            [
                "{v1}",
                "{v1,v2}",
                "{v1,v2,v3}",
                "{v1,v3}",
                "{v2}",
                "{v2,v3}",
                "{v3}"
            ]
        );
    }

    #[test]
    fn two_vertices() {
        let m = dm(&[&[0, 2], &[2, 0]]);
        let sols = solve(&m, 2, None).unwrap();
        assert_eq!(sols.len(), 1);
        let f = &sols[0];
        assert_eq!(f.get(set(&[1])), 2);
        assert_eq!(f.get(set(&[2])), 2);
        assert_eq!(f.get(set(&[1, 2])), 0);
        assert_eq!(f.d(), 4);
        let real = realize(f).unwrap();
        assert_eq!(real.subsets()[0].indices(), &[1, 2]);
        assert_eq!(real.subsets()[1].indices(), &[3, 4]);
        assert!(verify(&real, &m).ok);
        // distance 1 would need f(V) = 1
        assert!(solve(&dm(&[&[0, 1], &[1, 0]]), 2, None).unwrap().is_empty());
    }

    #[test]
    fn triangle() {
        let m = constant(3, 1);
        let sols = solve(&m, 2, None).unwrap();
        assert_eq!(sols.len(), 1);
        let f = &sols[0];
        for pair in [[1, 2], [1, 3], [2, 3]] {
            assert_eq!(f.get(set(&pair)), 1);
        }
        for v in 1..=3 {
            assert_eq!(f.get(set(&[v])), 0);
        }
        assert_eq!(f.d(), 3);
        let real = realize(f).unwrap();
        let subsets: Vec<&[usize]> = real.subsets().iter().map(|s| s.indices()).collect();
        assert_eq!(subsets, vec![&[1, 2][..], &[1, 3], &[2, 3]]);
        assert_eq!(real.blocks()[&set(&[1, 2])], vec![1]);
        assert_eq!(real.blocks()[&set(&[1, 3])], vec![2]);
        assert_eq!(real.blocks()[&set(&[2, 3])], vec![3]);
        assert!(verify(&real, &m).ok);
    }

    #[test]
    fn d_filter() {
        let m = constant(4, 2);
        let all = solve(&m, 3, None).unwrap();
        let ds: BTreeSet<u32> = all.iter().map(|f| f.d()).collect();
        assert!(ds.len() > 1);
        for d in ds {
            let some = solve(&m, 3, Some(d)).unwrap();
            assert!(some.iter().all(|f| f.d() == d));
            assert_eq!(some.len(), all.iter().filter(|f| f.d() == d).count());
        }
    }

    #[test]
    fn solver_preconditions() {
        let bad = dm(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]);
        assert!(matches!(solve(&bad, 3, None), Err(Error::Precondition(_))));
        assert!(matches!(
            solve(&constant(3, 3), 2, None),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            solve(&constant(9, 1), 2, None),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn verify_detects_defects() {
        let m = dm(&[&[0, 2], &[2, 0]]);
        let real = realize(&solve(&m, 2, None).unwrap()[0]).unwrap();
        // index 4 dropped from the space
        let short = Realization::from_subsets(
            5,
            vec![
                OrientedSubset::new(vec![1, 2]).unwrap(),
                OrientedSubset::new(vec![3, 4]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!verify(&short, &m).ok);
        assert!(!verify(&real, &dm(&[&[0, 1], &[1, 0]])).ok);
        let shared = Realization::from_subsets(
            3,
            vec![
                OrientedSubset::new(vec![1, 2]).unwrap(),
                OrientedSubset::new(vec![1, 3]).unwrap(),
            ],
        )
        .unwrap();
        let report = verify(&shared, &dm(&[&[0, 1], &[1, 0]]));
        assert!(!report.ok);
        assert_eq!(report.defects.len(), 1);
    }

    #[test]
    fn equivalence() {
        let m = constant(3, 1);
        let real = realize(&solve(&m, 2, None).unwrap()[0]).unwrap();
        // relabel indices by the 3-cycle 1→2→3→1
        let moved: Vec<OrientedSubset> = real
            .subsets()
            .iter()
            .map(|s| IndexPermutation(vec![2, 3, 1]).apply(s))
            .collect();
        let other = Realization::from_subsets(3, moved).unwrap();
        assert!(equivalent(&real, &other));
        let pi = equivalence_witness(&real, &other).unwrap();
        for (s, t) in real.subsets().iter().zip(other.subsets()) {
            assert_eq!(pi.apply(s), *t);
        }

        let two = realize(&solve(&dm(&[&[0, 2], &[2, 0]]), 2, None).unwrap()[0]).unwrap();
        let swapped =
            Realization::from_subsets(4, vec![two.subsets()[1].clone(), two.subsets()[0].clone()])
                .unwrap();
        // v1 and v2 trade blocks; the index swap 1↔3, 2↔4 still maps one onto the other
        assert!(equivalent(&two, &swapped));
        let overlapping = Realization::from_subsets(
            4,
            vec![
                OrientedSubset::new(vec![1, 2]).unwrap(),
                OrientedSubset::new(vec![2, 3]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!equivalent(&two, &overlapping));
    }

    #[test]
    fn sign_classes_two_vertices() {
        let real = realize(&solve(&dm(&[&[0, 2], &[2, 0]]), 2, None).unwrap()[0]).unwrap();
        let forms = forms_of(&real).unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].to_string(), "e12+e34");
        assert_eq!(sign_class_count(&real), 1);
    }

    #[test]
    fn sign_classes_match_brute_force() {
        for (m, p) in [
            (constant(3, 1), 2u32),
            (constant(3, 2), 2),
            (constant(4, 2), 3),
            (constant(4, 2), 2),
        ] {
            for f in solve(&m, p, None).unwrap() {
                let real = realize(&f).unwrap();
                let forms = forms_of(&real).unwrap();
                let r = real.r();
                let d = real.d();
                let flip_of = |eps: u32, eta: u32| -> u32 {
                    (0..r).fold(eps, |acc, v| {
                        let k = real.subsets()[v]
                            .indices()
                            .iter()
                            .filter(|&&mu| eta >> (mu - 1) & 1 == 1)
                            .count();
                        acc ^ ((k as u32 & 1) << v)
                    })
                };
                let mut class_of = vec![usize::MAX; 1 << r];
                let mut classes = 0;
                for eps in 0..(1u32 << r) {
                    if class_of[eps as usize] != usize::MAX {
                        continue;
                    }
                    for eta in 0..(1u32 << d) {
                        class_of[flip_of(eps, eta) as usize] = classes;
                    }
                    classes += 1;
                }
                assert_eq!(forms.len(), classes);
                let reps: BTreeSet<usize> = forms
                    .iter()
                    .map(|form| {
                        assert_eq!(form.terms()[0].sign, Sign::Plus);
                        let eps = real.subsets().iter().enumerate().fold(0u32, |acc, (v, s)| {
                            let t = form.terms().iter().find(|t| t.subset == *s).unwrap();
                            acc | (t.sign.is_minus() as u32) << v
                        });
                        class_of[eps as usize]
                    })
                    .collect();
                assert_eq!(reps.len(), classes);
            }
        }
    }

    #[test]
    fn lifting() {
        let f = &solve(&constant(3, 1), 2, None).unwrap()[0];
        assert!(lift_symmetry(f, &VertexPermutation::identity(3))
            .unwrap()
            .is_identity());
        let cycle = VertexPermutation::cyclic_shift(3);
        let lifted = lift_symmetry(f, &cycle).unwrap();
        assert_eq!(lifted.order(), 3);
        let real = realize(f).unwrap();
        for v in 0..3 {
            assert_eq!(
                lifted.apply(&real.subsets()[v]),
                real.subsets()[cycle.image(v)]
            );
        }

        let asym = GraphFunction::new(
            3,
            2,
            BTreeMap::from([
                (set(&[1, 2]), 1),
                (set(&[1]), 1),
                (set(&[2]), 1),
                (set(&[3]), 2),
            ]),
        )
        .unwrap();
        assert!(matches!(
            lift_symmetry(&asym, &cycle),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn invariant_solving() {
        let m = constant(3, 2);
        let shift = VertexPermutation::cyclic_shift(3);
        let opts = SolveOptions {
            invariant_under: vec![shift.clone()],
            ..SolveOptions::default()
        };
        let inv = solve_with(&m, 2, &opts).unwrap();
        let filtered: Vec<_> = solve(&m, 2, None)
            .unwrap()
            .into_iter()
            .filter(|f| f.is_invariant_under(&shift))
            .collect();
        assert_eq!(inv, filtered);
        let not_sym = dm(&[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]]);
        assert!(solve_with(&not_sym, 2, &opts).is_err());
    }

    #[test]
    fn graph_function_validation() {
        assert!(GraphFunction::new(2, 2, BTreeMap::from([(set(&[1]), 2)])).is_err());
        assert!(GraphFunction::new(2, 1, BTreeMap::from([(set(&[1, 2]), 1)])).is_err());
        assert!(GraphFunction::new(2, 1, BTreeMap::from([(set(&[1, 3]), 1)])).is_err());
        let json = r#"{"r":2,"p":2,"values":[{"subset":[1],"f":2},{"subset":[2],"f":2}]}"#;
        let f: GraphFunction = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), json);
    }

    #[test]
    fn realization_json_round_trip() {
        let real = realize(&solve(&constant(3, 1), 2, None).unwrap()[0]).unwrap();
        let text = serde_json::to_string(&real).unwrap();
        let back: Realization = serde_json::from_str(&text).unwrap();
        assert_eq!(back, real);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
