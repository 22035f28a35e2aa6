use std::collections::BTreeMap;

/// A fixed-length vector over F₂.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn set(&mut self, i: usize, b: bool) {
        if self.get(i) != b {
            self.flip(i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, o: &BitVector) {
        debug_assert_eq!(self.len, o.len);
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    /// Highest set index.
    pub fn top(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Highest set index strictly below `limit`.
    pub fn top_below(&self, limit: usize) -> Option<usize> {
        if limit == 0 {
            return None;
        }
        let last = (limit - 1) / 64;
        let rem = (limit - 1) % 64;
        let mask = if rem == 63 { u64::MAX } else { (1u64 << (rem + 1)) - 1 };
        let w = self.words[last] & mask;
        if w != 0 {
            return Some(last * 64 + 63 - w.leading_zeros() as usize);
        }
        self.words[..last]
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
struct Row {
    v: BitVector,
    combo: BitVector,
}

/// Incrementally built span of vectors over F₂ in echelon form. Each stored
/// row's pivot is its highest index, so reduction clears high indices first.
/// Every row also records which inserted vectors sum to it.
#[derive(Clone, Debug)]
pub struct Gf2Span {
    dim: usize,
    inserted: usize,
    capacity: usize,
    rows: BTreeMap<usize, Row>,
}

impl Gf2Span {
    /// A span in F₂^dim able to record up to `capacity` inserted vectors.
    pub fn new(dim: usize, capacity: usize) -> Self {
        Self {
            dim,
            inserted: 0,
            capacity,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, mut v: BitVector, mut combo: BitVector) -> (BitVector, BitVector) {
        let mut limit = self.dim;
        while let Some(t) = v.top_below(limit) {
            match self.rows.get(&t) {
                Some(r) => {
                    v.xor_assign(&r.v);
                    combo.xor_assign(&r.combo);
                }
                None => limit = t,
            }
        }
        (v, combo)
    }

    /// The fully reduced remainder of `v`: zero iff `v` lies in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        self.reduce_tracked(v.clone(), BitVector::zeros(self.capacity)).0
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts the next vector. Returns `None` when it was independent, and
    /// otherwise the dependency: a set of inserted indices (including this one)
    /// whose vectors sum to zero.
    pub fn insert(&mut self, v: BitVector) -> Option<BitVector> {
        assert_eq!(v.len(), self.dim);
        assert!(self.inserted < self.capacity, "Gf2Span capacity exceeded");
        let mut combo = BitVector::zeros(self.capacity);
        combo.flip(self.inserted);
        self.inserted += 1;
        let (r, combo) = self.reduce_tracked(v, combo);
        match r.top() {
            None => Some(combo),
            Some(t) => {
                self.rows.insert(t, Row { v: r, combo });
                None
            }
        }
    }

    /// Some combination of inserted vectors summing to `target`, if any.
    pub fn express(&self, target: &BitVector) -> Option<BitVector> {
        let (r, combo) = self.reduce_tracked(target.clone(), BitVector::zeros(self.capacity));
        r.is_zero().then_some(combo)
    }
}

/// Solves Σ xⱼ·colⱼ = target over F₂. Returns one solution and a basis of the
/// solution space of the homogeneous system.
pub fn gf2_solve(dim: usize, cols: &[BitVector], target: &BitVector) -> (Option<BitVector>, Vec<BitVector>) {
    let mut span = Gf2Span::new(dim, cols.len());
    let mut kernel = Vec::new();
    for c in cols {
        if let Some(k) = span.insert(c.clone()) {
            kernel.push(k);
        }
    }
    (span.express(target), kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(len: usize, ones: &[usize]) -> BitVector {
        BitVector::from_indices(len, ones.iter().copied())
    }

    #[test]
    fn bit_basics() {
        let mut v = BitVector::zeros(130);
        assert!(v.is_zero());
        v.flip(129);
        v.flip(3);
        assert_eq!(v.top(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(v.count_ones(), 2);
    }

    #[test]
    fn span_membership_and_dependencies() {
        let mut s = Gf2Span::new(4, 4);
        assert!(s.insert(bv(4, &[0, 1])).is_none());
        assert!(s.insert(bv(4, &[1, 2])).is_none());
        let dep = s.insert(bv(4, &[0, 2])).unwrap();
        assert_eq!(dep, bv(4, &[0, 1, 2]));
        assert!(s.contains(&bv(4, &[0, 2])));
        assert!(!s.contains(&bv(4, &[3])));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn reduction_keeps_non_pivot_high_bits() {
        let mut s = Gf2Span::new(4, 1);
        s.insert(bv(4, &[0, 1]));
        assert_eq!(s.reduce(&bv(4, &[3, 1])), bv(4, &[3, 0]));
    }

    #[test]
    fn solve_small_system() {
        let cols = [bv(3, &[0]), bv(3, &[0, 1]), bv(3, &[1])];
        let (x, k) = gf2_solve(3, &cols, &bv(3, &[1]));
        let x = x.unwrap();
        let mut sum = BitVector::zeros(3);
        for j in x.ones() {
            sum.xor_assign(&cols[j]);
        }
        assert_eq!(sum, bv(3, &[1]));
        assert_eq!(k.len(), 1);
        assert!(gf2_solve(3, &cols, &bv(3, &[2])).0.is_none());
    }
}
