//! Morphisms of neural codes.
//!
//! A morphism `C → 2^[m]` is stored by its determining trunks: column `j`
//! is the member set `T_j ⊆ C`, and a codeword `c` maps to `{ j | c ∈ T_j }`.
//! Columns built from user-supplied trunks are always proper trunks. Columns
//! recovered from an explicit map may also be empty, which happens exactly
//! when the target code has a trivial neuron `j`.

use std::collections::{BTreeMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_key;
use crate::code::{Code, Trunk};
use crate::codeword::Codeword;
use crate::error::{Error, Result};

/// An explicit map between codes, keyed by source codeword.
pub type CodeMap = BTreeMap<Codeword, Codeword>;

/// Default number of search nodes before [`find_surjective_morphism`] gives up.
pub const SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MorphismJson", try_from = "MorphismJson")]
pub struct Morphism {
    source: Code,
    columns: Vec<FixedBitSet>,
    table: Vec<Codeword>,
}

impl Morphism {
    /// The morphism determined by a list of proper trunks of `source`.
    pub fn from_trunks(source: &Code, trunks: &[Trunk]) -> Result<Morphism> {
        let id = source.id();
        for (j, t) in trunks.iter().enumerate() {
            if t.owner() != id {
                return Err(Error::ForeignTrunk);
            }
            if !t.is_proper() {
                return Err(Error::NotAProperTrunk(j + 1));
            }
        }
        Morphism::from_columns(source, trunks.iter().map(|t| t.bits().clone()).collect())
    }

    /// Columns must be trunks of `source`; empty columns are allowed.
    pub(crate) fn from_columns(source: &Code, columns: Vec<FixedBitSet>) -> Result<Morphism> {
        if columns.len() > Codeword::MAX_NEURONS {
            return Err(Error::TooManyNeurons(columns.len()));
        }
        let table = (0..source.len())
            .map(|k| {
                let bits = columns
                    .iter()
                    .enumerate()
                    .filter(|(_, col)| col.contains(k))
                    .fold(0u64, |acc, (j, _)| acc | (1u64 << j));
                Codeword::from_bits(bits)
            })
            .collect();
        Ok(Morphism { source: source.clone(), columns, table })
    }

    /// Rebuilds the morphism whose mapping is `table` (aligned with the
    /// source codewords), if that mapping is determined by trunks.
    pub fn from_table(source: &Code, target_n: usize, table: &[Codeword]) -> Result<Morphism> {
        if target_n > Codeword::MAX_NEURONS {
            return Err(Error::TooManyNeurons(target_n));
        }
        debug_assert_eq!(table.len(), source.len());
        let mut columns = Vec::with_capacity(target_n);
        for j in 1..=target_n {
            let mut col = FixedBitSet::with_capacity(source.len());
            for (k, img) in table.iter().enumerate() {
                if img.contains(j) {
                    col.insert(k);
                }
            }
            let proper_or_empty =
                col.is_clear() || (col.count_ones(..) < source.len() && source.trunk_from_bits(col.clone()).is_some());
            if !proper_or_empty {
                return Err(Error::NotAMorphism);
            }
            columns.push(col);
        }
        Morphism::from_columns(source, columns)
    }

    /// `c ↦ c`, determined by the simple trunks.
    pub fn identity(code: &Code) -> Morphism {
        let columns = (1..=code.n()).map(|i| code.trunk_bits(Codeword::singleton(i))).collect();
        Morphism::from_columns(code, columns).expect("n fits")
    }

    pub fn source(&self) -> &Code {
        &self.source
    }

    pub fn target_n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[FixedBitSet] {
        &self.columns
    }

    /// The determining trunk of target neuron `j`, or `None` for an empty column.
    pub fn trunk(&self, j: usize) -> Option<Trunk> {
        let col = self.columns.get(j.checked_sub(1)?)?;
        if col.is_clear() {
            None
        } else {
            self.source.trunk_from_bits(col.clone())
        }
    }

    /// Images of the source codewords, in source order.
    pub fn table(&self) -> &[Codeword] {
        &self.table
    }

    pub fn apply(&self, c: Codeword) -> Option<Codeword> {
        self.source.index_of(c).map(|k| self.table[k])
    }

    pub fn to_map(&self) -> CodeMap {
        self.source.words().iter().copied().zip(self.table.iter().copied()).collect()
    }

    /// Preimage of a set of target codewords, as source positions.
    pub fn preimage(&self, targets: &HashSet<Codeword>) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.source.len());
        for (k, img) in self.table.iter().enumerate() {
            if targets.contains(img) {
                bits.insert(k);
            }
        }
        bits
    }

    /// `{ f(c) | c ∈ source }` over `[m]`.
    pub fn image(&self) -> Code {
        let mut words = self.table.clone();
        words.sort_unstable();
        words.dedup();
        Code::from_sorted_unchecked(self.target_n(), words)
    }

    /// `g ∘ self`. The source of `g` must be the image of `self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if g.source != self.image() {
            return Err(Error::SourceMismatch);
        }
        let table: Vec<Codeword> = self.table.iter().map(|&c| g.apply(c).expect("image lies in g's source")).collect();
        Morphism::from_table(&self.source, g.target_n(), &table)
    }
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pairs: Vec<String> = self.source.words().iter().zip(&self.table).map(|(c, d)| format!("{c}↦{d}")).collect();
        write!(f, "Morphism[{}]", pairs.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
pub struct MorphismJson {
    pub source: Code,
    pub target_n: usize,
    pub trunks: Vec<Vec<Codeword>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(Codeword, Codeword)>>,
}

impl From<Morphism> for MorphismJson {
    fn from(f: Morphism) -> Self {
        MorphismJson {
            trunks: f.columns.iter().map(|col| f.source.members_of(col)).collect(),
            table: Some(f.source.words().iter().copied().zip(f.table.iter().copied()).collect()),
            target_n: f.target_n(),
            source: f.source,
        }
    }
}

impl TryFrom<MorphismJson> for Morphism {
    type Error = Error;

    fn try_from(raw: MorphismJson) -> Result<Morphism> {
        if raw.trunks.len() != raw.target_n {
            return Err(Error::Inconsistent(format!(
                "target_n is {} but {} trunks were listed",
                raw.target_n,
                raw.trunks.len()
            )));
        }
        let mut columns = Vec::with_capacity(raw.trunks.len());
        for (j, members) in raw.trunks.iter().enumerate() {
            if members.is_empty() {
                columns.push(FixedBitSet::with_capacity(raw.source.len()));
                continue;
            }
            let t = raw.source.trunk_from_members(members)?;
            if !t.is_proper() {
                return Err(Error::NotAProperTrunk(j + 1));
            }
            columns.push(t.bits().clone());
        }
        let f = Morphism::from_columns(&raw.source, columns)?;
        if let Some(table) = raw.table {
            let expected = f.to_map();
            let given: CodeMap = table.into_iter().collect();
            if given != expected {
                return Err(Error::Inconsistent("table disagrees with the listed trunks".into()));
            }
        }
        Ok(f)
    }
}

pub fn morphism_from_trunks(code: &Code, trunks: &[Trunk]) -> Result<Morphism> {
    Morphism::from_trunks(code, trunks)
}

fn check_map(c: &Code, d: &Code, f: &CodeMap) -> Result<()> {
    for &w in c.words() {
        let img = *f.get(&w).ok_or(Error::NotTotal(w))?;
        if !d.contains(img) {
            return Err(Error::ValueOutsideTarget(img));
        }
    }
    Ok(())
}

/// True iff the preimage of every proper trunk of `d` is a proper trunk of `c`.
pub fn is_morphism(c: &Code, d: &Code, f: &CodeMap) -> Result<bool> {
    check_map(c, d, f)?;
    for t in d.proper_trunks() {
        let targets: HashSet<Codeword> = t.members(d).into_iter().collect();
        let mut pre = FixedBitSet::with_capacity(c.len());
        for (k, w) in c.words().iter().enumerate() {
            if targets.contains(&f[w]) {
                pre.insert(k);
            }
        }
        let proper = !pre.is_clear() && pre.count_ones(..) < c.len() && c.trunk_from_bits(pre).is_some();
        if !proper {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The morphism with `T_j = f⁻¹(Tk_D(j))`, whose mapping agrees with `f`.
pub fn recover_determining_trunks(c: &Code, d: &Code, f: &CodeMap) -> Result<Morphism> {
    if !is_morphism(c, d, f)? {
        return Err(Error::NotAMorphism);
    }
    let table: Vec<Codeword> = c.words().iter().map(|w| f[w]).collect();
    Morphism::from_table(c, d.n(), &table)
}

pub fn image(f: &Morphism) -> Code {
    f.image()
}

/// `{∅} ∪ Tk(σ)` together with the map fixing the trunk and sending every
/// other codeword to `∅`.
pub fn trunk_minor(c: &Code, sigma: Codeword) -> Result<(Code, CodeMap)> {
    let t = c.trunk(sigma)?;
    let minor = c.with_empty(t.bits());
    let map = c
        .words()
        .iter()
        .enumerate()
        .map(|(k, &w)| (w, if t.contains_index(k) { w } else { Codeword::EMPTY }))
        .collect();
    Ok((minor, map))
}

/// True iff `target` is an intersection of some subfamily of `family`.
/// The empty intersection is the whole code.
pub fn is_generated(target: &Trunk, family: &[Trunk]) -> Result<bool> {
    if family.iter().any(|t| t.owner() != target.owner()) {
        return Err(Error::ForeignTrunk);
    }
    let cols: Vec<&FixedBitSet> = family.iter().map(|t| t.bits()).collect();
    Ok(generated_bits(target.bits(), &cols))
}

/// The smallest generated set containing `target` is the intersection of
/// every member of `family` that contains it.
pub(crate) fn generated_bits(target: &FixedBitSet, family: &[&FixedBitSet]) -> bool {
    let mut acc = FixedBitSet::with_capacity(target.len());
    acc.insert_range(..);
    for col in family.iter().filter(|col| target.is_subset(col)) {
        acc.intersect_with(col);
    }
    acc == *target
}

/// Whether `g = h ∘ f` for some surjective `h` between the images.
pub fn factor_exists(f: &Morphism, g: &Morphism) -> Result<bool> {
    if f.source != g.source {
        return Err(Error::SourceMismatch);
    }
    let family: Vec<&FixedBitSet> = f.columns.iter().collect();
    Ok(g.columns.iter().all(|col| generated_bits(col, &family)))
}

/// A surjective morphism onto `d` is an isomorphism iff trunk counts agree.
pub fn is_isomorphism(f: &Morphism, d: &Code) -> Result<bool> {
    if f.image() != *d {
        return Err(Error::NotSurjective);
    }
    Ok(f.source.trunk_count() == d.trunk_count())
}

pub fn find_surjective_morphism(c: &Code, d: &Code) -> Result<Option<Morphism>> {
    find_surjective_morphism_with_budget(c, d, SEARCH_BUDGET)
}

/// Searches for a morphism with image exactly `d`.
///
/// Target neurons are assigned proper trunks of `c` in order of decreasing
/// `|Tk_D(j)|`. After each assignment the partial images, restricted to the
/// neurons assigned so far, must coincide with the codewords of `d`
/// restricted the same way.
pub fn find_surjective_morphism_with_budget(c: &Code, d: &Code, budget: u64) -> Result<Option<Morphism>> {
    let c_trunks = c.trunk_count();
    let d_trunks = d.trunk_count();
    if c_trunks < d_trunks || c.len() < d.len() {
        return Ok(None);
    }
    let iso = c_trunks == d_trunks;
    let m = d.n();
    let target_sizes: Vec<usize> = (1..=m).map(|j| d.trunk_bits(Codeword::singleton(j)).count_ones(..)).collect();
    let mut order: Vec<usize> = (1..=m).filter(|&j| target_sizes[j - 1] > 0).collect();
    order.sort_by(|&a, &b| target_sizes[b - 1].cmp(&target_sizes[a - 1]).then(a.cmp(&b)));

    let candidates: Vec<FixedBitSet> = c.proper_trunks().into_iter().map(|t| t.bits().clone()).collect();
    let mut search = Search {
        c,
        d,
        order: &order,
        sizes: &target_sizes,
        candidates: &candidates,
        iso,
        partial: vec![0u64; c.len()],
        chosen: vec![None; m],
        nodes: 0,
        budget,
    };
    if !search.descend(0)? {
        return Ok(None);
    }
    let columns = search
        .chosen
        .iter()
        .map(|slot| match slot {
            Some(idx) => candidates[*idx].clone(),
            None => FixedBitSet::with_capacity(c.len()),
        })
        .collect();
    let f = Morphism::from_columns(c, columns)?;
    if f.image() != *d {
        return Err(Error::Inconsistent("search produced a morphism with the wrong image".into()));
    }
    Ok(Some(f))
}

struct Search<'a> {
    c: &'a Code,
    d: &'a Code,
    order: &'a [usize],
    sizes: &'a [usize],
    candidates: &'a [FixedBitSet],
    iso: bool,
    partial: Vec<u64>,
    chosen: Vec<Option<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(self.projections_agree(depth));
        }
        let j = self.order[depth];
        let need = self.sizes[j - 1];
        for (idx, cand) in self.candidates.iter().enumerate() {
            let size = cand.count_ones(..);
            if size < need || (self.iso && size != need) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::CapExceeded(self.budget));
            }
            let bit = 1u64 << (j - 1);
            for k in cand.ones() {
                self.partial[k] |= bit;
            }
            self.chosen[j - 1] = Some(idx);
            if self.projections_agree(depth + 1) && self.descend(depth + 1)? {
                return Ok(true);
            }
            for k in cand.ones() {
                self.partial[k] &= !bit;
            }
            self.chosen[j - 1] = None;
        }
        Ok(false)
    }

    fn projections_agree(&self, assigned: usize) -> bool {
        let mask = self.order[..assigned].iter().fold(0u64, |acc, &j| acc | (1u64 << (j - 1)));
        let mut have: Vec<u64> = self.partial.clone();
        have.sort_unstable();
        have.dedup();
        let mut want: Vec<u64> = self.d.words().iter().map(|w| w.bits() & mask).collect();
        want.sort_unstable();
        want.dedup();
        debug_assert!(self.c.len() == self.partial.len());
        have == want
    }
}

/// Isomorphism test; equal canonical keys decide quickly, otherwise a
/// surjection between codes with equal trunk counts is searched for.
pub fn is_isomorphic(c: &Code, d: &Code) -> Result<bool> {
    if c.len() != d.len() || c.trunk_count() != d.trunk_count() {
        return Ok(false);
    }
    if canonical_key(c) == canonical_key(d) {
        return Ok(true);
    }
    Ok(find_surjective_morphism(c, d)?.is_some())
}

/// The unique extension of `f` to the intersection-completions.
///
/// Each determining trunk `T_j` is replaced by the smallest trunk of the
/// completion containing it, `Tk(∩ T_j)`.
pub fn extend_to_completion(f: &Morphism) -> Morphism {
    let hat = f.source.intersection_completion();
    let columns =
        f.columns
            .iter()
            .map(|col| {
                if col.is_clear() {
                    FixedBitSet::with_capacity(hat.len())
                } else {
                    hat.trunk_bits(f.source.meet_of(col))
                }
            })
            .collect();
    Morphism::from_columns(&hat, columns).expect("same number of columns")
}
