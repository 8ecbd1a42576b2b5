//! Downward covering: the codes a given code covers, and the minor relation.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::canon::canonical_form;
use crate::code::{canonical_member_order, Code};
use crate::codeword::Codeword;
use crate::error::{Error, Result};
use crate::morphism::{find_surjective_morphism, generated_bits, is_isomorphic, Morphism};

/// Default node budget for [`is_minor`].
pub const MINOR_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NeuronStatus {
    Trivial,
    Redundant,
    Essential,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeuronClassification {
    pub neuron: usize,
    pub status: NeuronStatus,
    /// For a redundant neuron `i`, some `σ ∌ i` with `Tk(σ) = Tk(i)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Codeword>,
}

pub fn classify_neurons(c: &Code) -> Vec<NeuronClassification> {
    let simple: Vec<FixedBitSet> = (1..=c.n()).map(|i| c.trunk_bits(Codeword::singleton(i))).collect();
    (1..=c.n())
        .map(|i| {
            let ti = &simple[i - 1];
            if ti.is_clear() {
                return NeuronClassification { neuron: i, status: NeuronStatus::Trivial, witness: None };
            }
            let others: Vec<&FixedBitSet> =
                simple.iter().enumerate().filter(|(j, _)| *j != i - 1).map(|(_, t)| t).collect();
            if generated_bits(ti, &others) {
                let witness = (1..=c.n())
                    .filter(|&j| j != i && ti.is_subset(&simple[j - 1]))
                    .fold(Codeword::EMPTY, |acc, j| acc.with(j));
                debug_assert_eq!(c.redundancy_witness(i), Some(witness));
                NeuronClassification { neuron: i, status: NeuronStatus::Redundant, witness: Some(witness) }
            } else {
                NeuronClassification { neuron: i, status: NeuronStatus::Essential, witness: None }
            }
        })
        .collect()
}

pub fn essential_neurons(c: &Code) -> Vec<usize> {
    classify_neurons(c).into_iter().filter(|k| k.status == NeuronStatus::Essential).map(|k| k.neuron).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveredCode {
    pub neuron: usize,
    pub code: Code,
    pub morphism: Morphism,
}

/// The `i`th covered code `C^(i)`: the image of `C` under the morphism
/// determined by `{T_j | T_j ≠ T_i} ∪ {T_j ∩ T_i | T_j ∩ T_i ≠ T_i}`.
///
/// Empty trunks are left out of the collection, and the remaining distinct
/// trunks are labelled `1..m` in canonical order (larger first, then
/// lexicographic by members).
pub fn covered_code(c: &Code, i: usize) -> Result<CoveredCode> {
    if i == 0 || i > c.n() {
        return Err(Error::IndexOutOfRange { index: i, n: c.n() });
    }
    let simple: Vec<FixedBitSet> = (1..=c.n()).map(|j| c.trunk_bits(Codeword::singleton(j))).collect();
    let ti = &simple[i - 1];
    if ti.is_clear() {
        return Err(Error::TrivialNeuron(i));
    }
    let mut family: Vec<FixedBitSet> = Vec::new();
    for tj in &simple {
        if tj != ti {
            family.push(tj.clone());
        }
        let mut meet = tj.clone();
        meet.intersect_with(ti);
        if meet != *ti {
            family.push(meet);
        }
    }
    family.retain(|t| !t.is_clear());
    family.sort_by(canonical_member_order);
    family.dedup();
    let morphism = Morphism::from_columns(c, family)?;
    Ok(CoveredCode { neuron: i, code: morphism.image(), morphism })
}

/// `C^(i)` for every essential neuron, one per isomorphism class. The
/// smallest neuron of each class is kept as provenance.
pub fn all_covered_codes(c: &Code) -> Result<Vec<CoveredCode>> {
    let mut out: Vec<CoveredCode> = Vec::new();
    for i in essential_neurons(c) {
        let cc = covered_code(c, i)?;
        let mut seen = false;
        for kept in &out {
            if is_isomorphic(&kept.code, &cc.code)? {
                seen = true;
                break;
            }
        }
        if !seen {
            out.push(cc);
        }
    }
    Ok(out)
}

/// Whether `c` covers `d`.
///
/// Decided by enumerating covered codes, and cross-checked against the
/// criterion "a surjection exists and `c` has exactly one more trunk".
pub fn covers(c: &Code, d: &Code) -> Result<bool> {
    let mut by_enumeration = false;
    for cc in all_covered_codes(c)? {
        if is_isomorphic(&cc.code, d)? {
            by_enumeration = true;
            break;
        }
    }
    let by_criterion = c.trunk_count() == d.trunk_count() + 1 && find_surjective_morphism(c, d)?.is_some();
    if by_enumeration != by_criterion {
        return Err(Error::Inconsistent(format!(
            "covering of {d} by {c}: enumeration says {by_enumeration}, trunk criterion says {by_criterion}"
        )));
    }
    Ok(by_enumeration)
}

/// Whether `d ≤ c`, i.e. `d` is a minor of `c`.
pub fn is_minor(c: &Code, d: &Code) -> Result<bool> {
    is_minor_with_budget(c, d, MINOR_BUDGET)
}

/// Memoized descent: `d ≤ c` iff `d ≅ c` or `d ≤ c^(i)` for an essential
/// neuron `i`. Codes are reduced first so every nontrivial neuron is
/// essential, and visited codes are keyed by canonical form.
pub fn is_minor_with_budget(c: &Code, d: &Code, budget: u64) -> Result<bool> {
    let target = canonical_form(d).code;
    let mut search =
        MinorSearch { target_trunks: target.trunk_count(), target, memo: HashMap::new(), nodes: 0, budget };
    search.visit(c)
}

struct MinorSearch {
    target: Code,
    target_trunks: usize,
    memo: HashMap<String, bool>,
    nodes: u64,
    budget: u64,
}

impl MinorSearch {
    fn visit(&mut self, code: &Code) -> Result<bool> {
        let canon = canonical_form(code);
        if let Some(&known) = self.memo.get(&canon.key) {
            return Ok(known);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CapExceeded(self.budget));
        }
        let trunks = canon.code.trunk_count();
        let result = if trunks < self.target_trunks || canon.code.len() < self.target.len() {
            false
        } else if trunks == self.target_trunks {
            is_isomorphic(&canon.code, &self.target)?
        } else {
            let mut found = false;
            for i in 1..=canon.code.n() {
                let cc = covered_code(&canon.code, i)?;
                if self.visit(&cc.code)? {
                    found = true;
                    break;
                }
            }
            found
        };
        self.memo.insert(canon.key, result);
        Ok(result)
    }
}
