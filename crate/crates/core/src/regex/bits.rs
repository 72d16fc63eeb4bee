/// A set of character positions `0..len` of one input string.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PosSet {
    len: usize,
    words: Box<[u64]>,
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

impl PosSet {
    pub fn new(len: usize) -> Self {
        PosSet {
            len,
            words: vec![0; words_for(len)].into_boxed_slice(),
        }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = PosSet::new(len);
        for i in 0..len {
            if f(i) {
                s.set(i);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union(&self, other: &PosSet) -> PosSet {
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a | b)
            .collect();
        PosSet {
            len: self.len,
            words,
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// A relation over string positions `0..=n`: `(i, j)` is present iff the
/// substring `s[i..j]` is accepted.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SpanSet {
    n: usize,
    w: usize,
    bits: Box<[u64]>,
}

impl SpanSet {
    pub fn empty(n: usize) -> Self {
        let w = words_for(n + 1);
        SpanSet {
            n,
            w,
            bits: vec![0; w * (n + 1)].into_boxed_slice(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = SpanSet::empty(n);
        for i in 0..=n {
            s.set(i, i);
        }
        s
    }

    /// Single-character spans `(p, p+1)` for every `p` in `pos`.
    pub fn from_positions(pos: &PosSet) -> Self {
        let mut s = SpanSet::empty(pos.len());
        for p in pos.ones() {
            s.set(p, p + 1);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.w + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.w + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.w..(i + 1) * self.w]
    }

    fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Whether the whole string is accepted.
    pub fn accepts_all(&self) -> bool {
        self.get(0, self.n)
    }

    pub fn union_with(&mut self, other: &SpanSet) {
        for (a, b) in self.bits.iter_mut().zip(other.bits.iter()) {
            *a |= b;
        }
    }

    /// Relational composition: `(i, k)` iff `(i, j) ∈ self` and `(j, k) ∈ other`.
    pub fn compose(&self, other: &SpanSet) -> SpanSet {
        let mut out = SpanSet::empty(self.n);
        for i in 0..=self.n {
            let base = i * self.w;
            for j in self.row_ones(i) {
                let src = other.row(j);
                for (k, &word) in src.iter().enumerate() {
                    out.bits[base + k] |= word;
                }
            }
        }
        out
    }

    /// Reflexive-transitive closure.
    pub fn star(&self) -> SpanSet {
        let mut out = SpanSet::empty(self.n);
        for i in (0..=self.n).rev() {
            out.set(i, i);
            let ones: Vec<usize> = self.row_ones(i).collect();
            for j in ones {
                out.set(i, j);
                if j > i {
                    for k in 0..self.w {
                        let v = out.bits[j * self.w + k];
                        out.bits[i * self.w + k] |= v;
                    }
                }
            }
        }
        out
    }

    /// `self^k`, iterating until `k`, the empty relation or a fixpoint.
    pub fn power(&self, k: usize) -> SpanSet {
        let mut p = SpanSet::identity(self.n);
        for _ in 0..k {
            let next = p.compose(self);
            if next == p || next.is_empty() {
                return next;
            }
            p = next;
        }
        p
    }

    /// Union of `self^k` for `k` in `lo..=hi`.
    pub fn repeat(&self, lo: usize, hi: usize) -> SpanSet {
        let mut acc = SpanSet::empty(self.n);
        if lo > hi {
            return acc;
        }
        let mut p = SpanSet::identity(self.n);
        if lo == 0 {
            acc.union_with(&p);
        }
        let mut k = 0usize;
        while k < hi {
            k += 1;
            let next = p.compose(self);
            if next.is_empty() {
                break;
            }
            let stable = next == p;
            if k >= lo || stable {
                acc.union_with(&next);
            }
            if stable {
                break;
            }
            p = next;
        }
        acc
    }
}
