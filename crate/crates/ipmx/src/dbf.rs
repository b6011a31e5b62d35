//! Dictionary of basic factors, built level by level through doubling and
//! consumed as a stream during index construction.
//!
//! Identifiers at level k name the distinct words of length 2^k: before the
//! random permutation they are the ranks 1..=m_k in lexicographic order of
//! the factors, so two positions share an identifier exactly when their
//! k-basic fragments are equal.

use crate::rng::Rng;
use crate::text::Text;

/// One level of the dictionary. `ids[i]` (1-based `i`) is the permuted
/// identifier ID_k of the k-basic fragment at `i`.
#[derive(Debug, Clone)]
pub struct DbfLevel {
    pub k: u32,
    /// Permuted identifiers, index 0 unused.
    ids: Vec<u32>,
    /// Number of distinct identifiers.
    m: usize,
    /// Occurrence buckets in CSR form: bucket of `id` is
    /// `positions[heads[id]..heads[id + 1]]`.
    bucket_heads: Vec<u32>,
    bucket_positions: Vec<u32>,
}

impl DbfLevel {
    /// Number of k-basic fragments.
    pub fn nk(&self) -> usize {
        self.ids.len() - 1
    }

    /// ID_k at 1-based position `i`.
    #[inline]
    pub fn id(&self, i: usize) -> u32 {
        self.ids[i]
    }

    /// All positions whose k-basic fragment carries `id`, ascending; empty
    /// for an unknown identifier.
    pub fn occurrences(&self, id: u32) -> &[u32] {
        if id == 0 || id as usize > self.m {
            return &[];
        }
        let lo = self.bucket_heads[id as usize] as usize;
        let hi = self.bucket_heads[id as usize + 1] as usize;
        &self.bucket_positions[lo..hi]
    }

    /// m_k, the number of distinct k-basic factors.
    pub fn count(&self) -> usize {
        self.m
    }

    fn from_ranks(k: u32, ids: Vec<u32>, m: usize) -> DbfLevel {
        let nk = ids.len() - 1;
        let mut heads = vec![0u32; m + 2];
        for &id in &ids[1..] {
            heads[id as usize + 1] += 1;
        }
        for i in 1..heads.len() {
            heads[i] += heads[i - 1];
        }
        let mut cursor = heads.clone();
        let mut positions = vec![0u32; nk];
        for i in 1..=nk {
            let id = ids[i] as usize;
            positions[cursor[id] as usize] = i as u32;
            cursor[id] += 1;
        }
        DbfLevel {
            k,
            ids,
            m,
            bucket_heads: heads,
            bucket_positions: positions,
        }
    }
}

/// Streams the levels 0, 1, ..., floor(log2 n) of the dictionary, holding
/// only the rank table needed to double to the next one.
pub struct DbfStream<'t> {
    text: &'t Text,
    deterministic: bool,
    rng: Rng,
    next_k: u32,
    prev_ranks: Vec<u32>,
    prev_m: usize,
}

impl<'t> DbfStream<'t> {
    pub fn new(text: &'t Text, rng: Rng, deterministic: bool) -> Self {
        DbfStream {
            text,
            deterministic,
            rng,
            next_k: 0,
            prev_ranks: Vec::new(),
            prev_m: 0,
        }
    }

    /// Produces the next level, or None once 2^k exceeds the text length.
    pub fn next_level(&mut self) -> Option<DbfLevel> {
        let n = self.text.len();
        let k = self.next_k;
        if n == 0 || (1usize << k) > n {
            return None;
        }
        let (ranks, m) = if k == 0 {
            self.first_ranks()
        } else {
            self.double(k)
        };
        let ids = self.permute(&ranks, m);
        self.prev_ranks = ranks;
        self.prev_m = m;
        self.next_k += 1;
        Some(DbfLevel::from_ranks(k, ids, m))
    }

    fn permute(&mut self, ranks: &[u32], m: usize) -> Vec<u32> {
        if self.deterministic {
            return ranks.to_vec();
        }
        let perm = self.rng.permutation_1based(m);
        let mut ids = vec![0u32; ranks.len()];
        for (i, &r) in ranks.iter().enumerate().skip(1) {
            ids[i] = perm[r as usize];
        }
        ids
    }

    fn first_ranks(&self) -> (Vec<u32>, usize) {
        let n = self.text.len();
        let mut present = [false; 256];
        for &b in self.text.bytes() {
            present[b as usize] = true;
        }
        let mut rank_of_byte = [0u32; 256];
        let mut m = 0u32;
        for b in 0..256 {
            if present[b] {
                m += 1;
                rank_of_byte[b] = m;
            }
        }
        let mut ranks = vec![0u32; n + 1];
        for i in 1..=n {
            ranks[i] = rank_of_byte[self.text.at(i) as usize];
        }
        (ranks, m as usize)
    }

    /// Ranks of level k via radix sorting pairs
    /// (rank_{k-1}(i), rank_{k-1}(i + 2^{k-1})).
    fn double(&self, k: u32) -> (Vec<u32>, usize) {
        let n = self.text.len();
        let half = 1usize << (k - 1);
        let nk = n - (1usize << k) + 1;
        let prev = &self.prev_ranks;
        let buckets = self.prev_m + 1;

        // Counting sort by second component...
        let mut tmp = vec![0u32; nk];
        {
            let mut count = vec![0u32; buckets + 1];
            for i in 1..=nk {
                count[prev[i + half] as usize] += 1;
            }
            let mut acc = 0u32;
            for c in count.iter_mut() {
                let v = *c;
                *c = acc;
                acc += v;
            }
            for i in 1..=nk {
                let key = prev[i + half] as usize;
                tmp[count[key] as usize] = i as u32;
                count[key] += 1;
            }
        }
        // ...then stable by first.
        let mut order = vec![0u32; nk];
        {
            let mut count = vec![0u32; buckets + 1];
            for i in 1..=nk {
                count[prev[i] as usize] += 1;
            }
            let mut acc = 0u32;
            for c in count.iter_mut() {
                let v = *c;
                *c = acc;
                acc += v;
            }
            for &i in &tmp {
                let key = prev[i as usize] as usize;
                order[count[key] as usize] = i;
                count[key] += 1;
            }
        }

        let mut ranks = vec![0u32; nk + 1];
        let mut m = 0u32;
        let mut last = (u32::MAX, u32::MAX);
        for &i in &order {
            let key = (prev[i as usize], prev[i as usize + half]);
            if key != last {
                m += 1;
                last = key;
            }
            ranks[i as usize] = m;
        }
        (ranks, m as usize)
    }
}
