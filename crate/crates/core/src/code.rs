//! Codes, trunks and intersection-completion.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::codeword::Codeword;
use crate::error::{Error, Result};

/// Identity of a code, used to tie trunks to the code they were taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeId(u64);

/// A combinatorial neural code over the neurons `[1, n]`.
///
/// Codewords are kept sorted in [`Codeword`] order without duplicates, and
/// the empty codeword is always present.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCode")]
pub struct Code {
    n: usize,
    #[serde(rename = "codewords")]
    words: Vec<Codeword>,
}

#[derive(Deserialize)]
struct RawCode {
    n: usize,
    codewords: Vec<Vec<usize>>,
}

impl TryFrom<RawCode> for Code {
    type Error = Error;

    fn try_from(raw: RawCode) -> Result<Code> {
        Code::from_index_lists(raw.n, &raw.codewords)
    }
}

impl Code {
    /// Validates and normalizes a code given as codeword bitsets.
    pub fn new<I: IntoIterator<Item = Codeword>>(n: usize, words: I) -> Result<Code> {
        if n > Codeword::MAX_NEURONS {
            return Err(Error::TooManyNeurons(n));
        }
        let full = Codeword::full(n);
        let mut words: Vec<Codeword> = words.into_iter().collect();
        for &w in &words {
            if !w.is_subset(full) {
                return Err(Error::IndexOutOfRange { index: w.difference(full).max_index(), n });
            }
        }
        words.sort_unstable();
        words.dedup();
        if words.first() != Some(&Codeword::EMPTY) {
            return Err(Error::MissingEmptyCodeword);
        }
        Ok(Code { n, words })
    }

    /// Validates a code given as lists of 1-based neuron indices.
    pub fn from_index_lists<L: AsRef<[usize]>>(n: usize, raw: &[L]) -> Result<Code> {
        if n > Codeword::MAX_NEURONS {
            return Err(Error::TooManyNeurons(n));
        }
        let mut words = Vec::with_capacity(raw.len());
        for list in raw {
            let mut bits = 0u64;
            for &i in list.as_ref() {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
                bits |= 1u64 << (i - 1);
            }
            words.push(Codeword::from_bits(bits));
        }
        Code::new(n, words)
    }

    /// The code `{∅}` over no neurons.
    pub fn trivial() -> Code {
        Code { n: 0, words: vec![Codeword::EMPTY] }
    }

    /// Builds a code from words already known to be valid.
    pub(crate) fn from_sorted_unchecked(n: usize, words: Vec<Codeword>) -> Code {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(words.first(), Some(&Codeword::EMPTY));
        Code { n, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false: the empty codeword is present.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, c: Codeword) -> bool {
        self.index_of(c).is_some()
    }

    pub fn index_of(&self, c: Codeword) -> Option<usize> {
        self.words.binary_search(&c).ok()
    }

    pub fn id(&self) -> CodeId {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        CodeId(h.finish())
    }

    /// Union of all codewords.
    pub fn support(&self) -> Codeword {
        self.words.iter().fold(Codeword::EMPTY, |acc, &w| acc.union(w))
    }

    fn check_sigma(&self, sigma: Codeword) -> Result<()> {
        let full = Codeword::full(self.n);
        if sigma.is_subset(full) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: sigma.difference(full).max_index(), n: self.n })
        }
    }

    /// `Tk(σ)`: all codewords containing `σ`. May be empty.
    pub fn trunk(&self, sigma: Codeword) -> Result<Trunk> {
        self.check_sigma(sigma)?;
        Ok(self.trunk_unchecked(sigma))
    }

    pub(crate) fn trunk_unchecked(&self, sigma: Codeword) -> Trunk {
        Trunk { base: sigma, members: self.trunk_bits(sigma), owner: self.id() }
    }

    /// Member set of `Tk(σ)` indexed by codeword position.
    pub fn trunk_bits(&self, sigma: Codeword) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.words.len());
        for (k, w) in self.words.iter().enumerate() {
            if sigma.is_subset(*w) {
                bits.insert(k);
            }
        }
        bits
    }

    /// Simple trunk `Tk(i)`.
    pub fn simple_trunk(&self, i: usize) -> Result<Trunk> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(self.trunk_unchecked(Codeword::singleton(i)))
    }

    /// Interprets a member list as a trunk of this code.
    pub fn trunk_from_members(&self, members: &[Codeword]) -> Result<Trunk> {
        let mut bits = FixedBitSet::with_capacity(self.words.len());
        for &m in members {
            let k = self.index_of(m).ok_or(Error::NotACodeword(m))?;
            bits.insert(k);
        }
        self.trunk_from_bits(bits).ok_or(Error::NotATrunk)
    }

    /// Returns the trunk with exactly these members, if the set is a trunk.
    pub fn trunk_from_bits(&self, bits: FixedBitSet) -> Option<Trunk> {
        debug_assert_eq!(bits.len(), self.words.len());
        let base = if bits.is_clear() {
            // Only an index set contained in no codeword has an empty trunk.
            let full = Codeword::full(self.n);
            if self.contains(full) {
                return None;
            }
            full
        } else {
            self.meet_of(&bits)
        };
        if self.trunk_bits(base) == bits {
            Some(Trunk { base, members: bits, owner: self.id() })
        } else {
            None
        }
    }

    /// Intersection of the codewords at the given positions; `[n]` for none.
    pub fn meet_of(&self, bits: &FixedBitSet) -> Codeword {
        bits.ones().fold(Codeword::full(self.n), |acc, k| acc.intersection(self.words[k]))
    }

    pub fn members_of(&self, bits: &FixedBitSet) -> Vec<Codeword> {
        bits.ones().map(|k| self.words[k]).collect()
    }

    /// The distinct nonempty trunks, including `Tk(∅)`, in canonical order.
    ///
    /// Nonempty trunks correspond one-to-one with the codewords of the
    /// intersection-completion through `ρ ↦ Tk(ρ)`.
    pub fn distinct_nonempty_trunks(&self) -> Vec<Trunk> {
        let mut trunks: Vec<Trunk> =
            self.intersection_completion().words.iter().map(|&rho| self.trunk_unchecked(rho)).collect();
        trunks.sort();
        trunks
    }

    /// Number of distinct nonempty trunks.
    pub fn trunk_count(&self) -> usize {
        self.intersection_completion().len()
    }

    /// Nonempty trunks other than the whole code.
    pub fn proper_trunks(&self) -> Vec<Trunk> {
        let all = self.words.len();
        self.distinct_nonempty_trunks().into_iter().filter(|t| t.members.count_ones(..) != all).collect()
    }

    pub fn is_intersection_complete(&self) -> bool {
        let present: HashSet<Codeword> = self.words.iter().copied().collect();
        self.words
            .iter()
            .enumerate()
            .all(|(k, &a)| self.words[k + 1..].iter().all(|&b| present.contains(&a.intersection(b))))
    }

    /// Smallest superset closed under pairwise intersection.
    pub fn intersection_completion(&self) -> Code {
        let mut seen: HashSet<Codeword> = self.words.iter().copied().collect();
        let mut queue: VecDeque<Codeword> = self.words.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &c in &self.words {
                let y = x.intersection(c);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut words: Vec<Codeword> = seen.into_iter().collect();
        words.sort_unstable();
        Code::from_sorted_unchecked(self.n, words)
    }

    /// Applies a codeword map and collects the result over `[new_n]`.
    pub fn map_words<F: Fn(Codeword) -> Codeword>(&self, new_n: usize, f: F) -> Result<Code> {
        Code::new(new_n, self.words.iter().map(|&w| f(w)))
    }

    /// Relabels neuron `i` as `perm[i - 1]`; `perm` must be a permutation of `[1, n]`.
    pub fn permute(&self, perm: &[usize]) -> Code {
        debug_assert_eq!(perm.len(), self.n);
        let mut words: Vec<Codeword> = self.words.iter().map(|w| w.relabel(perm)).collect();
        words.sort_unstable();
        Code::from_sorted_unchecked(self.n, words)
    }

    /// Deletes neuron `i` and shifts the neurons above it down by one.
    pub fn delete_neuron(&self, i: usize) -> Code {
        debug_assert!(i >= 1 && i <= self.n);
        let low = Codeword::full(i - 1).bits();
        let mut words: Vec<Codeword> = self
            .words
            .iter()
            .map(|w| {
                let b = w.bits();
                let high = if i == 64 { 0 } else { (b >> i) << (i - 1) };
                Codeword::from_bits((b & low) | high)
            })
            .collect();
        words.sort_unstable();
        words.dedup();
        Code::from_sorted_unchecked(self.n - 1, words)
    }

    /// For a nontrivial neuron `i`, the largest `σ ⊆ [n] \ {i}` with
    /// `Tk(σ) ⊇ Tk(i)`. Neuron `i` is redundant exactly when that trunk
    /// equals `Tk(i)`, in which case the witness is returned.
    pub fn redundancy_witness(&self, i: usize) -> Option<Codeword> {
        let ti = self.trunk_bits(Codeword::singleton(i));
        if ti.is_clear() {
            return None;
        }
        let sigma = self.meet_of(&ti).without(i);
        (self.trunk_bits(sigma) == ti).then_some(sigma)
    }

    /// Drops trivial and redundant neurons, relabelling survivors in order.
    /// The result is isomorphic to `self`.
    pub fn reduced(&self) -> Code {
        let support = self.support();
        let mut perm = vec![0usize; self.n];
        for (label, i) in support.indices().enumerate() {
            perm[i - 1] = label + 1;
        }
        let mut words: Vec<Codeword> = self.words.iter().map(|w| w.relabel(&perm)).collect();
        words.sort_unstable();
        let mut code = Code::from_sorted_unchecked(support.len(), words);
        'outer: loop {
            for i in 1..=code.n {
                if code.redundancy_witness(i).is_some() {
                    code = code.delete_neuron(i);
                    continue 'outer;
                }
            }
            return code;
        }
    }

    /// `{∅} ∪ S` over the same neurons, for any subset `S` of the codewords.
    pub fn with_empty(&self, bits: &FixedBitSet) -> Code {
        let mut words = vec![Codeword::EMPTY];
        words.extend(bits.ones().map(|k| self.words[k]));
        words.sort_unstable();
        words.dedup();
        Code::from_sorted_unchecked(self.n, words)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, w) in self.words.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}} over [{}]", self.n)
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A trunk `Tk(σ)` of a particular code.
///
/// Trunks are identified by their member set: `Tk(1)` and `Tk(12)` are the
/// same trunk whenever they select the same codewords.
#[derive(Clone)]
pub struct Trunk {
    base: Codeword,
    members: FixedBitSet,
    owner: CodeId,
}

impl Trunk {
    /// The `σ` this trunk was built from. Trunks returned by enumeration
    /// carry the intersection of their members.
    pub fn base(&self) -> Codeword {
        self.base
    }

    pub fn owner(&self) -> CodeId {
        self.owner
    }

    /// Member set indexed by codeword position in the owning code.
    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains_index(&self, k: usize) -> bool {
        self.members.contains(k)
    }

    pub fn members(&self, code: &Code) -> Vec<Codeword> {
        debug_assert_eq!(code.id(), self.owner);
        code.members_of(&self.members)
    }

    /// A trunk is proper when it is nonempty and not the whole code.
    pub fn is_proper(&self) -> bool {
        let n = self.len();
        n > 0 && n < self.members.len()
    }

    pub fn is_subset(&self, other: &Trunk) -> bool {
        self.members.is_subset(&other.members)
    }

    /// `Tk(σ) ∩ Tk(τ) = Tk(σ ∪ τ)`.
    pub fn intersection(&self, other: &Trunk) -> Trunk {
        debug_assert_eq!(self.owner, other.owner);
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Trunk { base: self.base.union(other.base), members, owner: self.owner }
    }
}

impl PartialEq for Trunk {
    fn eq(&self, other: &Self) -> bool {
        self.owner == other.owner && self.members == other.members
    }
}

impl Eq for Trunk {}

impl Hash for Trunk {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.owner.hash(state);
        self.members.hash(state);
    }
}

impl Ord for Trunk {
    fn cmp(&self, other: &Self) -> Ordering {
        self.owner.cmp(&other.owner).then_with(|| canonical_member_order(&self.members, &other.members))
    }
}

impl PartialOrd for Trunk {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Trunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tk({}){:?}", self.base, self.members.ones().collect::<Vec<_>>())
    }
}

/// Larger member sets first, then lexicographic by member position.
pub fn canonical_member_order(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    b.count_ones(..).cmp(&a.count_ones(..)).then_with(|| a.ones().cmp(b.ones()))
}
