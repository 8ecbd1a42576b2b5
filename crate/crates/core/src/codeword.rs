//! Codewords as 64-bit neuron sets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of neurons drawn from `[1, 64]`. Neuron `i` is bit `i - 1`.
///
/// Codewords order lexicographically as ascending index lists, so
/// `∅ < 1 < 12 < 123 < 13 < 2 < 23 < 3`. Serialized codes rely on this order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Codeword(u64);

impl Codeword {
    pub const MAX_NEURONS: usize = 64;
    pub const EMPTY: Codeword = Codeword(0);

    pub const fn from_bits(bits: u64) -> Self {
        Codeword(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `[1, n]` as a codeword.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= Self::MAX_NEURONS);
        if n == Self::MAX_NEURONS {
            Codeword(u64::MAX)
        } else {
            Codeword((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=Self::MAX_NEURONS).contains(&i));
        Codeword(1u64 << (i - 1))
    }

    /// Builds a codeword from 1-based indices. Indices must lie in `[1, 64]`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Option<Self> {
        let mut bits = 0u64;
        for i in indices {
            if !(1..=Self::MAX_NEURONS).contains(&i) {
                return None;
            }
            bits |= 1u64 << (i - 1);
        }
        Some(Codeword(bits))
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i + 1)
            }
        })
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Largest neuron index, or 0 for the empty codeword.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=Self::MAX_NEURONS).contains(&i) && self.0 & (1u64 << (i - 1)) != 0
    }

    pub fn is_subset(self, other: Codeword) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Codeword) -> Codeword {
        Codeword(self.0 & other.0)
    }

    pub fn union(self, other: Codeword) -> Codeword {
        Codeword(self.0 | other.0)
    }

    pub fn difference(self, other: Codeword) -> Codeword {
        Codeword(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Codeword {
        self.union(Codeword::singleton(i))
    }

    pub fn without(self, i: usize) -> Codeword {
        self.difference(Codeword::singleton(i))
    }

    /// Relabels neurons: neuron `i` becomes `perm[i - 1]`. Neurons beyond the
    /// table are dropped.
    pub fn relabel(self, perm: &[usize]) -> Codeword {
        let mut bits = 0u64;
        for i in self.indices() {
            if let Some(&j) = perm.get(i - 1) {
                if j > 0 {
                    bits |= 1u64 << (j - 1);
                }
            }
        }
        Codeword(bits)
    }
}

impl Ord for Codeword {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // Both lists agree below the smallest differing neuron. Whoever owns
        // that neuron is smaller unless the other list ends right there.
        let pos = diff.trailing_zeros();
        let above = |bits: u64| if pos == 63 { 0 } else { bits >> (pos + 1) };
        if self.0 & (1u64 << pos) != 0 {
            if above(other.0) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if above(self.0) != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Codeword {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        if self.max_index() <= 9 {
            for i in self.indices() {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Codeword {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(deserializer)?;
        Codeword::from_indices(raw.iter().copied()).ok_or_else(|| {
            serde::de::Error::custom(format!("neuron indices must lie in [1, {}], got {raw:?}", Codeword::MAX_NEURONS))
        })
    }
}

/// Shorthand for tests and examples: `cw(&[1, 2])` is the codeword 12.
pub fn cw(indices: &[usize]) -> Codeword {
    Codeword::from_indices(indices.iter().copied()).expect("index in [1, 64]")
}
