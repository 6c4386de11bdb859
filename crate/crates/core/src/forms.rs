//! Special p-forms: sparse forms on R^d whose coordinate components all lie
//! in {-1, 0, 1}, together with the action of the signed permutation group
//! S_d ⋉ Z_2^d ≅ O(d, Z) on them.
//!
//! Indices are 1-based throughout, matching the usual `e_1, ..., e_d` naming.
//! A form stores only its support: a sorted list of oriented p-subsets, each
//! with a sign. Every other component is implicitly zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitRow, EchelonBasis};

/// Default cap on `d` for [`canonicalize`].
pub const DEFAULT_CANON_MAX_D: usize = 10;

/// Largest dimension representable at all (index sets are `u64` masks).
pub const MAX_D: usize = 64;

/// Sign of a stored component. `Plus` orders before `Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_odd(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;

    fn try_from(v: i8) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::domain(format!("sign must be 1 or -1, got {v}"))),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_odd(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// Parity of the permutation sorting `seq` (entries assumed distinct).
pub(crate) fn sorting_parity(seq: &[usize]) -> Sign {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Sign::from_odd(inversions % 2 == 1)
}

/// A strictly increasing tuple of 1-based indices, standing for the
/// coordinate plane `e_{μ1} ∧ ... ∧ e_{μp}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct OrientedSubset(Vec<usize>);

impl OrientedSubset {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::domain("oriented subset must be non-empty"));
        }
        if indices[0] == 0 {
            return Err(Error::domain("indices are 1-based"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!(
                "indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(OrientedSubset(indices))
    }

    /// Sorts `indices`, returning the subset and the parity of the sort.
    pub fn from_unsorted(indices: &[usize]) -> Result<(Self, Sign)> {
        let parity = sorting_parity(indices);
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        Ok((Self::new(sorted)?, parity))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn max_index(&self) -> usize {
        *self.0.last().expect("non-empty")
    }

    pub fn intersection_len(&self, other: &OrientedSubset) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub(crate) fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &i| m | 1 << (i - 1))
    }
}

impl TryFrom<Vec<usize>> for OrientedSubset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        OrientedSubset::new(v)
    }
}

impl From<OrientedSubset> for Vec<usize> {
    fn from(s: OrientedSubset) -> Vec<usize> {
        s.0
    }
}

impl fmt::Display for OrientedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.max_index() < 10 {
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// Distance `p - #(s ∩ t)` between two oriented p-subsets.
pub fn subset_distance(s: &OrientedSubset, t: &OrientedSubset) -> Result<usize> {
    if s.degree() != t.degree() {
        return Err(Error::domain(format!(
            "degree mismatch: {} vs {}",
            s.degree(),
            t.degree()
        )));
    }
    Ok(s.degree() - s.intersection_len(t))
}

/// One monomial `sign · e_s` of a special form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "indices")]
    pub subset: OrientedSubset,
    pub sign: Sign,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    d: usize,
    p: usize,
    terms: Vec<Term>,
}

/// A special p-form on R^d, stored by its signed support.
///
/// Terms are kept sorted by subset. Forms are totally ordered by `(d, p)`,
/// then the sequence of subsets, then the sequence of signs; the orbit
/// minimum under this order is the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormJson", into = "FormJson")]
pub struct SpecialForm {
    d: usize,
    p: usize,
    terms: Vec<Term>,
}

impl TryFrom<FormJson> for SpecialForm {
    type Error = Error;

    fn try_from(j: FormJson) -> Result<Self> {
        SpecialForm::new(j.d, j.p, j.terms)
    }
}

impl From<SpecialForm> for FormJson {
    fn from(f: SpecialForm) -> FormJson {
        FormJson {
            d: f.d,
            p: f.p,
            terms: f.terms,
        }
    }
}

impl SpecialForm {
    pub fn new(d: usize, p: usize, mut terms: Vec<Term>) -> Result<Self> {
        if d == 0 || d > MAX_D {
            return Err(Error::domain(format!(
                "dimension d = {d} outside [1, {MAX_D}]"
            )));
        }
        if p == 0 || p > d {
            return Err(Error::domain(format!(
                "degree p = {p} outside [1, d = {d}]"
            )));
        }
        for t in &terms {
            if t.subset.degree() != p {
                return Err(Error::domain(format!(
                    "term {} has degree {}, expected {p}",
                    t.subset,
                    t.subset.degree()
                )));
            }
            if t.subset.max_index() > d {
                return Err(Error::domain(format!(
                    "term {} has index above d = {d}",
                    t.subset
                )));
            }
        }
        terms.sort_by(|a, b| a.subset.cmp(&b.subset));
        if let Some(w) = terms.windows(2).find(|w| w[0].subset == w[1].subset) {
            return Err(Error::domain(format!("duplicate term {}", w[0].subset)));
        }
        Ok(SpecialForm { d, p, terms })
    }

    /// Builds a form from `(indices, ±1)` pairs. Indices may be given in any
    /// order; the stored sign absorbs the sorting parity.
    pub fn from_terms(d: usize, p: usize, terms: &[(&[usize], i8)]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|(idx, s)| {
                let (subset, parity) = OrientedSubset::from_unsorted(idx)?;
                Ok(Term {
                    subset,
                    sign: Sign::try_from(*s)? * parity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SpecialForm::new(d, p, terms)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The weight `|φ|`, i.e. the size of the support.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &OrientedSubset> {
        self.terms.iter().map(|t| &t.subset)
    }

    /// The component `φ(e_{i1}, ..., e_{ip})`.
    pub fn component(&self, tuple: &[usize]) -> Result<i8> {
        if tuple.len() != self.p {
            return Err(Error::domain(format!(
                "expected {} indices, got {}",
                self.p,
                tuple.len()
            )));
        }
        if let Some(&bad) = tuple.iter().find(|&&i| i == 0 || i > self.d) {
            return Err(Error::domain(format!(
                "index {bad} outside [1, {}]",
                self.d
            )));
        }
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(0);
        }
        let found = self
            .terms
            .binary_search_by(|t| t.subset.indices().cmp(&sorted[..]));
        Ok(match found {
            Ok(k) => (self.terms[k].sign * sorting_parity(tuple)).value(),
            Err(_) => 0,
        })
    }

    fn with_signs(&self, signs: impl Fn(usize) -> Sign) -> SpecialForm {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| Term {
                subset: t.subset.clone(),
                sign: signs(k),
            })
            .collect();
        SpecialForm {
            d: self.d,
            p: self.p,
            terms,
        }
    }

    pub(crate) fn sign_row(&self) -> BitRow {
        BitRow::from_indices(
            self.weight(),
            self.terms
                .iter()
                .enumerate()
                .filter(|(_, t)| t.sign.is_minus())
                .map(|(k, _)| k),
        )
    }
}

impl Ord for SpecialForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, self.p)
            .cmp(&(other.d, other.p))
            .then_with(|| self.support().cmp(other.support()))
            .then_with(|| {
                self.terms
                    .iter()
                    .map(|t| t.sign)
                    .cmp(other.terms.iter().map(|t| t.sign))
            })
    }
}

impl PartialOrd for SpecialForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SpecialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            match (k, t.sign) {
                (0, Sign::Plus) => {}
                (_, Sign::Plus) => write!(f, "+")?,
                (_, Sign::Minus) => write!(f, "-")?,
            }
            write!(f, "e{}", t.subset)?;
        }
        Ok(())
    }
}

/// An element `(σ, η)` of S_d ⋉ Z_2^d acting on special forms by
/// `φ_{i1…ip} ↦ η_{i1}⋯η_{ip} φ_{σ(i1)…σ(ip)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignedPermutationJson", into = "SignedPermutationJson")]
pub struct SignedPermutation {
    // sigma[i - 1] = σ(i), 1-based images
    sigma: Vec<usize>,
    eta: Vec<Sign>,
}

#[derive(Serialize, Deserialize)]
struct SignedPermutationJson {
    sigma: Vec<usize>,
    eta: Vec<Sign>,
}

impl TryFrom<SignedPermutationJson> for SignedPermutation {
    type Error = Error;

    fn try_from(j: SignedPermutationJson) -> Result<Self> {
        SignedPermutation::new(j.sigma, j.eta)
    }
}

impl From<SignedPermutation> for SignedPermutationJson {
    fn from(g: SignedPermutation) -> Self {
        SignedPermutationJson {
            sigma: g.sigma,
            eta: g.eta,
        }
    }
}

impl SignedPermutation {
    /// `sigma` lists the 1-based images `σ(1), …, σ(d)`.
    pub fn new(sigma: Vec<usize>, eta: Vec<Sign>) -> Result<Self> {
        let d = sigma.len();
        if eta.len() != d {
            return Err(Error::domain(format!(
                "sigma has length {d} but eta has length {}",
                eta.len()
            )));
        }
        let mut seen = vec![false; d];
        for &s in &sigma {
            if s == 0 || s > d || seen[s - 1] {
                return Err(Error::domain(format!(
                    "sigma {sigma:?} is not a permutation of 1..={d}"
                )));
            }
            seen[s - 1] = true;
        }
        Ok(SignedPermutation { sigma, eta })
    }

    pub fn identity(d: usize) -> Self {
        SignedPermutation {
            sigma: (1..=d).collect(),
            eta: vec![Sign::Plus; d],
        }
    }

    pub fn permutation(sigma: Vec<usize>) -> Result<Self> {
        let d = sigma.len();
        Self::new(sigma, vec![Sign::Plus; d])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        let mut sigma: Vec<usize> = (1..=d).collect();
        sigma.shuffle(rng);
        let eta = (0..d).map(|_| Sign::from_odd(rng.random())).collect();
        SignedPermutation { sigma, eta }
    }

    pub fn d(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn eta(&self) -> &[Sign] {
        &self.eta
    }

    /// `σ(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    fn sigma_inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv[s - 1] = i + 1;
        }
        inv
    }

    /// The element `g ∘ h` with `apply(g ∘ h, φ) = apply(g, apply(h, φ))`.
    pub fn compose(&self, h: &SignedPermutation) -> Result<SignedPermutation> {
        if self.d() != h.d() {
            return Err(Error::domain(
                "cannot compose signed permutations of different d",
            ));
        }
        // (g∘h)φ_i = η^g_i (hφ)_{σg(i)} = η^g_i η^h_{σg(i)} φ_{σh(σg(i))}
        let sigma = self.sigma.iter().map(|&s| h.sigma[s - 1]).collect();
        let eta = self
            .sigma
            .iter()
            .zip(&self.eta)
            .map(|(&s, &e)| e * h.eta[s - 1])
            .collect();
        Ok(SignedPermutation { sigma, eta })
    }

    pub fn inverse(&self) -> SignedPermutation {
        let inv = self.sigma_inverse();
        let eta = inv.iter().map(|&j| self.eta[j - 1]).collect();
        SignedPermutation { sigma: inv, eta }
    }
}

/// Applies `g` to `form`. The result is again special with the same weight.
pub fn apply(g: &SignedPermutation, form: &SpecialForm) -> Result<SpecialForm> {
    if g.d() != form.d {
        return Err(Error::domain(format!(
            "signed permutation acts on d = {}, form has d = {}",
            g.d(),
            form.d
        )));
    }
    let inv = g.sigma_inverse();
    let terms = form
        .terms
        .iter()
        .map(|t| {
            // new indices u = σ⁻¹(t); component at sorted u reads φ at (σ(u1), …, σ(up))
            let mut pairs: Vec<(usize, usize)> = t
                .subset
                .indices()
                .iter()
                .map(|&i| (inv[i - 1], i))
                .collect();
            pairs.sort_unstable();
            let images: Vec<usize> = pairs.iter().map(|&(_, i)| i).collect();
            let flips = pairs
                .iter()
                .fold(Sign::Plus, |acc, &(u, _)| acc * g.eta[u - 1]);
            Term {
                subset: OrientedSubset(pairs.iter().map(|&(u, _)| u).collect()),
                sign: t.sign * sorting_parity(&images) * flips,
            }
        })
        .collect();
    SpecialForm::new(form.d, form.p, terms)
}

/// Orbit minimum of `form` under S_d ⋉ Z_2^d, using the default cap on `d`.
pub fn canonicalize(form: &SpecialForm) -> Result<SpecialForm> {
    canonicalize_with_cap(form, DEFAULT_CANON_MAX_D)
}

pub fn canonicalize_with_cap(form: &SpecialForm, max_d: usize) -> Result<SpecialForm> {
    Ok(canonical_witness(form, max_d)?.0)
}

/// Returns the canonical form together with a group element `g` such that
/// `apply(g, form)` equals it.
pub fn canonical_witness(
    form: &SpecialForm,
    max_d: usize,
) -> Result<(SpecialForm, SignedPermutation)> {
    Error::check_cap("d", form.d, max_d)?;
    let mut search = LabelSearch::new(form);
    search.run();
    let mut best: Option<(SpecialForm, SignedPermutation)> = None;
    for order in &search.leaves {
        let perm = SignedPermutation::permutation(order.clone())?;
        let relabeled = apply(&perm, form)?;
        let (signed, flips) = minimize_signs(&relabeled);
        let candidate = apply(&flips, &relabeled)?;
        debug_assert_eq!(candidate, signed);
        if best.as_ref().is_none_or(|(b, _)| candidate < *b) {
            best = Some((candidate, flips.compose(&perm)?));
        }
    }
    Ok(best.expect("at least one labeling"))
}

/// Lex-least sign pattern reachable from `form` by index flips alone,
/// with the flip that reaches it.
fn minimize_signs(form: &SpecialForm) -> (SpecialForm, SignedPermutation) {
    let w = form.weight();
    let flip_rows: Vec<BitRow> = (1..=form.d)
        .map(|mu| {
            BitRow::from_indices(
                w,
                form.terms
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.subset.contains(mu))
                    .map(|(k, _)| k),
            )
        })
        .collect();
    let basis = EchelonBasis::from_generators(w, &flip_rows);
    let (reduced, tag) = basis.reduce(&form.sign_row());
    let eta = (0..form.d).map(|i| Sign::from_odd(tag.get(i))).collect();
    let g = SignedPermutation {
        sigma: (1..=form.d).collect(),
        eta,
    };
    (form.with_signs(|k| Sign::from_odd(reduced.get(k))), g)
}

/// True iff `a` and `b` lie in the same O(d, Z) orbit.
pub fn orbit_equivalent(a: &SpecialForm, b: &SpecialForm) -> Result<bool> {
    orbit_equivalent_with_cap(a, b, DEFAULT_CANON_MAX_D)
}

pub fn orbit_equivalent_with_cap(a: &SpecialForm, b: &SpecialForm, max_d: usize) -> Result<bool> {
    Ok(orbit_witness(a, b, max_d)?.is_some())
}

/// A group element mapping `a` onto `b`, if one exists.
pub fn orbit_witness(
    a: &SpecialForm,
    b: &SpecialForm,
    max_d: usize,
) -> Result<Option<SignedPermutation>> {
    if (a.d, a.p) != (b.d, b.p) {
        return Err(Error::domain(format!(
            "forms live in different spaces: (d, p) = ({}, {}) vs ({}, {})",
            a.d, a.p, b.d, b.p
        )));
    }
    if a.weight() != b.weight() {
        return Ok(None);
    }
    let (ca, ga) = canonical_witness(a, max_d)?;
    let (cb, gb) = canonical_witness(b, max_d)?;
    if ca != cb {
        return Ok(None);
    }
    Ok(Some(gb.inverse().compose(&ga)?))
}

/// Branch-and-prune search for the relabelings of the indices that give
/// the lexicographically least sorted support.
///
/// New labels 1, 2, … are handed out in order; at each depth the child
/// bound replaces every not-yet-labelled slot of a term by the smallest
/// labels still available, which never exceeds the final tuple.
struct LabelSearch {
    d: usize,
    p: usize,
    term_masks: Vec<u64>,
    // twin class of each old index (indices lying in exactly the same terms)
    twin_class: Vec<usize>,
    used: Vec<bool>,
    label_of: Vec<usize>, // 0 = unlabeled, otherwise the new label
    order: Vec<usize>,    // order[k] = old index carrying new label k + 1
    best: Option<Vec<u128>>,
    leaves: Vec<Vec<usize>>,
}

const LABEL_BITS: usize = 7;

impl LabelSearch {
    fn new(form: &SpecialForm) -> Self {
        let d = form.d;
        let term_masks: Vec<u64> = form.terms.iter().map(|t| t.subset.mask()).collect();
        let membership: Vec<Vec<usize>> = (0..d)
            .map(|i| {
                (0..term_masks.len())
                    .filter(|&k| term_masks[k] >> i & 1 == 1)
                    .collect()
            })
            .collect();
        let mut twin_class = vec![0; d];
        let mut reps: Vec<&Vec<usize>> = Vec::new();
        for i in 0..d {
            twin_class[i] = match reps.iter().position(|m| **m == membership[i]) {
                Some(c) => c,
                None => {
                    reps.push(&membership[i]);
                    reps.len() - 1
                }
            };
        }
        let used = membership.iter().map(|m| !m.is_empty()).collect();
        LabelSearch {
            d,
            p: form.p,
            term_masks,
            twin_class,
            used,
            label_of: vec![0; d],
            order: Vec::with_capacity(d),
            best: None,
            leaves: Vec::new(),
        }
    }

    fn bound(&self) -> Vec<u128> {
        let next = self.order.len() + 1;
        let mut keys: Vec<u128> = self
            .term_masks
            .iter()
            .map(|&m| {
                let mut labels: Vec<usize> = (0..self.d)
                    .filter(|&i| m >> i & 1 == 1 && self.label_of[i] != 0)
                    .map(|i| self.label_of[i])
                    .collect();
                labels.sort_unstable();
                let known = labels.len();
                labels.extend((0..self.p - known).map(|k| next + k));
                labels
                    .iter()
                    .fold(0u128, |key, &l| key << LABEL_BITS | l as u128)
            })
            .collect();
        keys.sort_unstable();
        keys
    }

    fn run(&mut self) {
        self.descend();
    }

    fn descend(&mut self) {
        let candidates: Vec<usize> = (0..self.d)
            .filter(|&i| self.used[i] && self.label_of[i] == 0)
            .filter(|&i| {
                // twins are interchangeable up to an index flip; take the first free one
                (0..i).all(|j| self.twin_class[j] != self.twin_class[i] || self.label_of[j] != 0)
            })
            .collect();

        if candidates.is_empty() {
            self.leaf();
            return;
        }

        let mut children: Vec<(Vec<u128>, usize)> = candidates
            .into_iter()
            .map(|i| {
                self.assign(i);
                let b = self.bound();
                self.unassign(i);
                (b, i)
            })
            .collect();
        children.sort();
        for (bound, i) in children {
            if self.best.as_ref().is_some_and(|best| bound > *best) {
                break;
            }
            self.assign(i);
            self.descend();
            self.unassign(i);
        }
    }

    fn assign(&mut self, i: usize) {
        self.order.push(i);
        self.label_of[i] = self.order.len();
    }

    fn unassign(&mut self, i: usize) {
        self.order.pop();
        self.label_of[i] = 0;
    }

    fn leaf(&mut self) {
        // unused indices take the remaining labels in ascending order
        let mut order = self.order.clone();
        order.extend((0..self.d).filter(|&i| !self.used[i]));
        let keys = self.bound();
        match self.best.as_ref().map(|b| keys.cmp(b)) {
            Some(Ordering::Greater) => return,
            Some(Ordering::Less) | None => {
                self.best = Some(keys);
                self.leaves.clear();
            }
            Some(Ordering::Equal) => {}
        }
        // σ maps new label k + 1 to the old index order[k]
        self.leaves.push(order.iter().map(|&i| i + 1).collect());
    }
}
