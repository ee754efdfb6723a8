//! The index sequence `(n_k)` that selects which digit feeds each term of a
//! Salem-type function.
//!
//! Sequences are a finite prefix followed by a shifted identity tail:
//! `n_k = prefix[k]` for `k ≤ L`, `n_k = k + d` afterwards.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSequence {
    prefix: Vec<usize>,
    offset: usize,
    hats: Vec<usize>,
}

impl IndexSequence {
    pub fn new(prefix: Vec<usize>, offset: usize) -> Result<Self> {
        let bound = prefix.len() + offset;
        for (k, &n) in prefix.iter().enumerate() {
            if n == 0 {
                return Err(Error::IndexSequence(format!(
                    "n_{} = 0; indices start at 1",
                    k + 1
                )));
            }
            if n > bound {
                return Err(Error::IndexSequence(format!(
                    "n_{} = {n} exceeds L + d = {bound} and would collide with the tail",
                    k + 1
                )));
            }
            if prefix[..k].contains(&n) {
                return Err(Error::IndexSequence(format!(
                    "n_{} = {n} repeats an earlier index",
                    k + 1
                )));
            }
        }
        let hats = (0..prefix.len())
            .map(|k| prefix[k] - prefix[..k].iter().filter(|&&e| e < prefix[k]).count())
            .collect();
        Ok(Self {
            prefix,
            offset,
            hats,
        })
    }

    /// `n_k = k`.
    pub fn identity() -> Self {
        Self {
            prefix: Vec::new(),
            offset: 0,
            hats: Vec::new(),
        }
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn is_identity(&self) -> bool {
        self.offset == 0 && self.prefix.iter().enumerate().all(|(k, &n)| n == k + 1)
    }

    /// `n_k` for `k ≥ 1`.
    pub fn n_at(&self, k: usize) -> usize {
        assert!(k >= 1, "sequence positions start at 1");
        if k <= self.prefix.len() {
            self.prefix[k - 1]
        } else {
            k + self.offset
        }
    }

    /// `n̂_k = n_k - #{j < k : n_j < n_k}`. Past the prefix every earlier
    /// value is smaller, so the tail is the constant `d + 1`.
    pub fn hat_n(&self, k: usize) -> usize {
        assert!(k >= 1, "sequence positions start at 1");
        if k <= self.hats.len() {
            self.hats[k - 1]
        } else {
            self.offset + 1
        }
    }

    /// Position of original digit `n_j` once `n_1, …, n_{level-1}` have
    /// been deleted. Requires `level ≤ j`.
    pub fn position_after_deletions(&self, j: usize, level: usize) -> usize {
        debug_assert!(1 <= level && level <= j);
        let n = self.n_at(j);
        if j > self.prefix.len() {
            return n - (level - 1);
        }
        n - self.prefix[..level - 1].iter().filter(|&&e| e < n).count()
    }

    /// The `k` with `n_k = value`, if the sequence reaches `value`.
    pub fn index_of(&self, value: usize) -> Option<usize> {
        if value == 0 {
            return None;
        }
        if value > self.prefix.len() + self.offset {
            return Some(value - self.offset);
        }
        self.prefix.iter().position(|&n| n == value).map(|k| k + 1)
    }

    /// Every natural number is some `n_k`.
    pub fn is_surjective(&self) -> bool {
        self.offset == 0
    }

    /// `{1, …, m}` lies in the range of the sequence.
    pub fn covers(&self, m: usize) -> bool {
        (1..=m.min(self.prefix.len() + self.offset)).all(|v| self.prefix.contains(&v))
    }

    /// The continuity criterion at a branch point of rank `m`:
    /// (a) with `k_0 = max{k : n_k ≤ m}`, `n_{k_0} = m` and all earlier
    /// indices are below `m`; (b) `n_k ≡ k (mod 2)` for every `k > k_0`.
    pub fn continuity_condition(&self, m: usize) -> bool {
        if m == 0 || !self.covers(m) {
            return false;
        }
        let k0 = (1..=m)
            .filter_map(|v| self.index_of(v))
            .max()
            .expect("m ≥ 1 and covered");
        if self.n_at(k0) != m || (1..k0).any(|k| self.n_at(k) >= m) {
            return false;
        }
        let prefix_parity = (k0 + 1..=self.prefix.len()).all(|k| (self.n_at(k) + k) % 2 == 0);
        prefix_parity && self.offset % 2 == 0
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() && self.offset == 0 {
            return write!(f, "id");
        }
        let list: Vec<String> = self.prefix.iter().map(|n| n.to_string()).collect();
        write!(f, "{}|+{}", list.join(","), self.offset)
    }
}

impl FromStr for IndexSequence {
    type Err = Error;

    /// `id`, or `n_1,…,n_L|+d` (the `|+d` part defaults to `+0`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "id" {
            return Ok(Self::identity());
        }
        let (list, offset) = match s.split_once('|') {
            Some((list, tail)) => {
                let tail = tail.trim();
                let digits = tail.strip_prefix('+').unwrap_or(tail);
                let offset = digits
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad tail offset {tail:?}: {e}")))?;
                (list, offset)
            }
            None => (s, 0),
        };
        let prefix = if list.trim().is_empty() {
            Vec::new()
        } else {
            list.split(',')
                .map(|item| {
                    item.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad index {item:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(prefix, offset)
    }
}
