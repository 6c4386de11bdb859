//! Linear algebra over the two-element field.
//!
//! Coordinate 0 is the most significant position for lexicographic order,
//! so "lex-least" means "zero at the earliest possible coordinate".

/// Fixed-length bit vector over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub(crate) fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub(crate) fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in ones {
            row.set(i, true);
        }
        row
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub(crate) fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    #[cfg(test)]
    pub(crate) fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    #[cfg(test)]
    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// Reduced row-echelon basis of a subspace, each row carrying a tag that
/// records which generators were combined to produce it.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    len: usize,
    tag_len: usize,
    // (pivot, row, tag), sorted by pivot
    rows: Vec<(usize, BitRow, BitRow)>,
}

impl EchelonBasis {
    pub(crate) fn new(len: usize, tag_len: usize) -> Self {
        EchelonBasis {
            len,
            tag_len,
            rows: Vec::new(),
        }
    }

    /// Builds the span of `generators`; the tag of generator `k` is the unit vector `k`.
    pub(crate) fn from_generators(len: usize, generators: &[BitRow]) -> Self {
        let mut basis = Self::new(len, generators.len());
        for (k, g) in generators.iter().enumerate() {
            basis.insert(g.clone(), BitRow::from_indices(generators.len(), [k]));
        }
        basis
    }

    /// Adds `v` (with tag) to the span. Returns false if it was already in it.
    pub(crate) fn insert(&mut self, mut v: BitRow, mut tag: BitRow) -> bool {
        debug_assert_eq!(v.len, self.len);
        debug_assert_eq!(tag.len, self.tag_len);
        for (pivot, row, row_tag) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                tag.xor_assign(row_tag);
            }
        }
        let Some(pivot) = v.first_one() else {
            return false;
        };
        for (_, row, row_tag) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
                row_tag.xor_assign(&tag);
            }
        }
        let at = self.rows.partition_point(|(p, _, _)| *p < pivot);
        self.rows.insert(at, (pivot, v, tag));
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn is_pivot(&self, coord: usize) -> bool {
        self.rows.iter().any(|(p, _, _)| *p == coord)
    }

    /// Lex-least element of the coset `v + span`, together with the tag of
    /// the span element that was added. The result vanishes on every pivot.
    pub(crate) fn reduce(&self, v: &BitRow) -> (BitRow, BitRow) {
        let mut v = v.clone();
        let mut tag = BitRow::zeros(self.tag_len);
        for (pivot, row, row_tag) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                tag.xor_assign(row_tag);
            }
        }
        (v, tag)
    }

    /// All coset representatives of GF(2)^len / span, in increasing lex order.
    pub(crate) fn coset_representatives(&self) -> Vec<BitRow> {
        let free: Vec<usize> = (0..self.len).filter(|&i| !self.is_pivot(i)).collect();
        let k = free.len();
        assert!(k < 63, "too many coset representatives");
        (0u64..(1u64 << k))
            .map(|code| {
                // earliest free coordinate is the most significant bit of `code`
                BitRow::from_indices(
                    self.len,
                    free.iter()
                        .enumerate()
                        .filter(|&(j, _)| code >> (k - 1 - j) & 1 == 1)
                        .map(|(_, &i)| i),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &[usize], len: usize) -> BitRow {
        BitRow::from_indices(len, bits.iter().copied())
    }

    fn lex_key(v: &BitRow) -> Vec<bool> {
        (0..v.len).map(|i| v.get(i)).collect()
    }

    #[test]
    fn reduce_is_lex_min_of_coset() {
        let gens = [row(&[1, 2], 4), row(&[0, 1, 3], 4), row(&[2, 3], 4)];
        let basis = EchelonBasis::from_generators(4, &gens);
        for code in 0..16usize {
            let v = row(
                &(0..4).filter(|i| code >> i & 1 == 1).collect::<Vec<_>>(),
                4,
            );
            let mut best = v.clone();
            for c in 0..8usize {
                let mut w = v.clone();
                for (j, g) in gens.iter().enumerate() {
                    if c >> j & 1 == 1 {
                        w.xor_assign(g);
                    }
                }
                if lex_key(&w) < lex_key(&best) {
                    best = w;
                }
            }
            let (reduced, tag) = basis.reduce(&v);
            assert_eq!(reduced, best);
            // tag reproduces the span element that was added
            let mut check = v.clone();
            for j in tag.ones() {
                check.xor_assign(&gens[j]);
            }
            assert_eq!(check, reduced);
        }
    }

    #[test]
    fn rank_and_dependence() {
        let mut b = EchelonBasis::new(3, 0);
        assert!(b.insert(row(&[0, 1], 3), BitRow::zeros(0)));
        assert!(b.insert(row(&[1, 2], 3), BitRow::zeros(0)));
        assert!(!b.insert(row(&[0, 2], 3), BitRow::zeros(0)));
        assert_eq!(b.rank(), 2);
        assert_eq!(b.coset_representatives().len(), 2);
    }

    #[test]
    fn wide_rows() {
        let mut r = BitRow::zeros(130);
        r.set(129, true);
        r.set(64, true);
        assert_eq!(r.first_one(), Some(64));
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![64, 129]);
        r.xor_assign(&BitRow::from_indices(130, [64]));
        assert_eq!(r.first_one(), Some(129));
        assert!(!r.is_zero());
    }
}
