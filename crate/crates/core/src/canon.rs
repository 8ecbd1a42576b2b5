//! Canonical forms of codes up to isomorphism.
//!
//! A code is first reduced (trivial and redundant neurons removed), then
//! relabelled so that its sorted codeword list is lexicographically minimal
//! among all relabellings. Neurons are split by colour refinement on the
//! neuron/codeword incidence structure before any permutation is tried.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::code::Code;
use crate::codeword::Codeword;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub code: Code,
    pub key: String,
}

pub fn canonical_form(code: &Code) -> CanonicalForm {
    let reduced = code.reduced();
    let code = canonical_relabel(&reduced);
    let key = key_of(&code);
    CanonicalForm { code, key }
}

pub fn canonical_key(code: &Code) -> String {
    canonical_form(code).key
}

/// `n:{..},{..}` with codewords in serialization order.
pub fn key_of(code: &Code) -> String {
    let mut s = format!("{}:", code.n());
    for (k, w) in code.words().iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push('{');
        for (j, i) in w.indices().enumerate() {
            if j > 0 {
                s.push(',');
            }
            write!(s, "{i}").unwrap();
        }
        s.push('}');
    }
    s
}

/// Lexicographically minimal relabelling of `code` among all neuron
/// permutations that respect the refined colouring.
fn canonical_relabel(code: &Code) -> Code {
    let n = code.n();
    if n == 0 {
        return code.clone();
    }
    let colours = refine(code, vec![0; n]);
    let mut best: Option<Vec<Codeword>> = None;
    search(code, colours, &mut best);
    Code::from_sorted_unchecked(n, best.expect("at least one leaf"))
}

fn search(code: &Code, colours: Vec<usize>, best: &mut Option<Vec<Codeword>>) {
    let n = colours.len();
    let mut class_sizes = vec![0usize; n];
    for &c in &colours {
        class_sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| class_sizes[c] > 1) else {
        let perm: Vec<usize> = colours.iter().map(|&c| c + 1).collect();
        let mut words: Vec<Codeword> = code.words().iter().map(|w| w.relabel(&perm)).collect();
        words.sort_unstable();
        if best.as_ref().is_none_or(|b| words < *b) {
            *best = Some(words);
        }
        return;
    };
    for v in (0..n).filter(|&v| colours[v] == target) {
        let split: Vec<(usize, bool)> = colours.iter().enumerate().map(|(u, &c)| (c, u != v)).collect();
        search(code, refine(code, rank(&split)), best);
    }
}

/// Iterated colour refinement; each round splits neuron classes by the
/// multiset of codeword colours they appear in.
fn refine(code: &Code, mut colours: Vec<usize>) -> Vec<usize> {
    let n = colours.len();
    let mut classes = count_classes(&colours);
    loop {
        let word_sigs: Vec<Vec<usize>> = code
            .words()
            .iter()
            .map(|w| {
                let mut s: Vec<usize> = w.indices().map(|i| colours[i - 1]).collect();
                s.sort_unstable();
                s
            })
            .collect();
        let word_colours = rank(&word_sigs);
        let neuron_sigs: Vec<(usize, Vec<usize>)> = (1..=n)
            .map(|i| {
                let mut s: Vec<usize> =
                    code.words().iter().zip(&word_colours).filter(|(w, _)| w.contains(i)).map(|(_, &c)| c).collect();
                s.sort_unstable();
                (colours[i - 1], s)
            })
            .collect();
        colours = rank(&neuron_sigs);
        let now = count_classes(&colours);
        if now == classes {
            return colours;
        }
        classes = now;
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut order: BTreeMap<T, usize> = sigs.iter().cloned().map(|s| (s, 0)).collect();
    for (r, v) in order.values_mut().enumerate() {
        *v = r;
    }
    sigs.iter().map(|s| order[s]).collect()
}

fn count_classes(colours: &[usize]) -> usize {
    colours.iter().copied().max().map_or(0, |m| m + 1)
}
