//! Invariant suite run by `ncp verify` on a single code.

use std::collections::HashSet;

use ncp_core::ascent::{all_covering_codes, pullback_chain, verify_cover_completion};
use ncp_core::descent::{classify_neurons, covered_code, covers, essential_neurons};
use ncp_core::morphism::{extend_to_completion, is_isomorphic};
use ncp_core::{canonical_key, Code, Codeword, Morphism, NeuronStatus, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const RANDOM_PERMUTATIONS: usize = 8;
const RANDOM_MORPHISMS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub code: Code,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
    pub all_pass: bool,
}

type Check = fn(&Code, &mut ChaCha8Rng) -> Result<Option<String>>;

const CHECKS: &[(&str, Check)] = &[
    ("trunk_intersection_closure", trunk_intersection_closure),
    ("completion_closure", completion_closure),
    ("trunk_count_is_completion_size", trunk_count_is_completion_size),
    ("codeword_trunk_bijection", codeword_trunk_bijection),
    ("canonical_key_permutation_invariance", canonical_key_permutation_invariance),
    ("redundant_deletion_isomorphism", redundant_deletion_isomorphism),
    ("covered_codes_lose_one_trunk", covered_codes_lose_one_trunk),
    ("covering_codes_round_trip", covering_codes_round_trip),
    ("morphism_axioms", morphism_axioms),
    ("extension_pullback", extension_pullback),
    ("essential_neuron_minimal_codeword", essential_neuron_minimal_codeword),
];

/// Runs every check; a check passes when it returns no counterexample.
pub fn verify(code: &Code, seed: u64) -> Result<VerifyReport> {
    let mut properties = Vec::with_capacity(CHECKS.len());
    for (k, &(name, check)) in CHECKS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let (pass, detail) = match check(code, &mut rng) {
            Ok(None) => (true, None),
            Ok(Some(why)) => (false, Some(why)),
            Err(e) => (false, Some(format!("error: {e}"))),
        };
        properties.push(PropertyResult { name, pass, detail });
    }
    let all_pass = properties.iter().all(|p| p.pass);
    Ok(VerifyReport { code: code.clone(), seed, properties, all_pass })
}

fn fail(msg: String) -> Result<Option<String>> {
    Ok(Some(msg))
}

/// Bases whose trunks can be nonempty: ∅, singletons and codewords.
fn interesting_bases(c: &Code) -> Vec<Codeword> {
    let mut out: Vec<Codeword> = (1..=c.n()).map(Codeword::singleton).chain(c.words().iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn trunk_intersection_closure(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    let bases = interesting_bases(c);
    for &a in &bases {
        for &b in &bases {
            let meet = c.trunk(a)?.intersection(&c.trunk(b)?);
            if meet.bits() != c.trunk(a.union(b))?.bits() {
                return fail(format!("Tk({a}) ∩ Tk({b}) ≠ Tk({})", a.union(b)));
            }
        }
    }
    Ok(None)
}

fn completion_closure(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    let hat = c.intersection_completion();
    if !hat.is_intersection_complete() || hat.intersection_completion() != hat {
        return fail("completion is not a fixed point".into());
    }
    if let Some(w) = c.words().iter().find(|&&w| !hat.contains(w)) {
        return fail(format!("completion drops {w}"));
    }
    for &w in hat.words().iter().filter(|&&w| !c.contains(w)) {
        let smaller = Code::new(hat.n(), hat.words().iter().copied().filter(|&x| x != w))?;
        if smaller.is_intersection_complete() {
            return fail(format!("added codeword {w} is unnecessary"));
        }
    }
    Ok(None)
}

fn trunk_count_is_completion_size(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    let hat = c.intersection_completion();
    if c.trunk_count() != hat.len() || hat.distinct_nonempty_trunks().len() != hat.len() {
        return fail(format!("{} trunks, completion has {} codewords", c.trunk_count(), hat.len()));
    }
    Ok(None)
}

fn codeword_trunk_bijection(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    let images: HashSet<Vec<usize>> = c.words().iter().map(|&w| c.trunk_bits(w).ones().collect()).collect();
    let bijective = images.len() == c.len() && images.len() == c.trunk_count();
    if bijective != c.is_intersection_complete() {
        return fail(format!("bijective = {bijective}, intersection-complete = {}", !bijective));
    }
    Ok(None)
}

fn canonical_key_permutation_invariance(c: &Code, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let key = canonical_key(c);
    for _ in 0..RANDOM_PERMUTATIONS {
        let mut perm: Vec<usize> = (1..=c.n()).collect();
        perm.shuffle(rng);
        if canonical_key(&c.permute(&perm)) != key {
            return fail(format!("permutation {perm:?} changes the key"));
        }
    }
    Ok(None)
}

fn redundant_deletion_isomorphism(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    for k in classify_neurons(c).into_iter().filter(|k| k.status == NeuronStatus::Redundant) {
        if !is_isomorphic(c, &c.delete_neuron(k.neuron))? {
            return fail(format!("deleting redundant neuron {} is not an isomorphism", k.neuron));
        }
    }
    Ok(None)
}

fn covered_codes_lose_one_trunk(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    for i in essential_neurons(c) {
        let cc = covered_code(c, i)?;
        if cc.code.trunk_count() + 1 != c.trunk_count() {
            return fail(format!("covered code of neuron {i} has {} trunks", cc.code.trunk_count()));
        }
    }
    Ok(None)
}

fn covering_codes_round_trip(d: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    for cc in all_covering_codes(d)? {
        let c = &cc.result;
        if c.trunk_count() != d.trunk_count() + 1 || !covers(c, d)? {
            return fail(format!("{c} does not cover the input"));
        }
        if !verify_cover_completion(d, &cc) {
            return fail(format!("completion of {c} is not the completed cover"));
        }
        let mut back = false;
        for i in essential_neurons(c) {
            if is_isomorphic(&covered_code(c, i)?.code, d)? {
                back = true;
                break;
            }
        }
        if !back {
            return fail(format!("no covered code of {c} is isomorphic to the input"));
        }
    }
    Ok(None)
}

fn random_morphisms(c: &Code, rng: &mut ChaCha8Rng) -> Result<Vec<Morphism>> {
    let proper = c.proper_trunks();
    (0..RANDOM_MORPHISMS)
        .map(|_| {
            let m = if proper.is_empty() { 0 } else { rng.gen_range(1..=proper.len().min(4)) };
            let trunks: Vec<_> = (0..m).map(|_| proper.choose(rng).unwrap().clone()).collect();
            Morphism::from_trunks(c, &trunks)
        })
        .collect()
}

fn morphism_axioms(c: &Code, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    for f in random_morphisms(c, rng)? {
        if f.apply(Codeword::EMPTY) != Some(Codeword::EMPTY) {
            return fail("∅ is not fixed".into());
        }
        for &a in c.words() {
            for &b in c.words() {
                let m = a.intersection(b);
                if c.contains(m) && f.apply(m) != Some(f.apply(a).unwrap().intersection(f.apply(b).unwrap())) {
                    return fail(format!("f({a} ∩ {b}) ≠ f({a}) ∩ f({b})"));
                }
            }
        }
        let d = f.image();
        let g = extend_to_completion(&f);
        if g.image() != d.intersection_completion() || c.words().iter().any(|&w| g.apply(w) != f.apply(w)) {
            return fail("extension to completions is not a surjective extension".into());
        }
    }
    Ok(None)
}

fn extension_pullback(c: &Code, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    for f in random_morphisms(c, rng)? {
        let chain = pullback_chain(&f)?;
        if !chain.agrees() {
            return fail(format!("covering statements disagree: {chain:?}"));
        }
    }
    Ok(None)
}

fn essential_neuron_minimal_codeword(c: &Code, _: &mut ChaCha8Rng) -> Result<Option<String>> {
    if !c.is_intersection_complete() {
        return Ok(None);
    }
    for i in essential_neurons(c) {
        let mu = c.meet_of(&c.trunk_bits(Codeword::singleton(i)));
        let below = mu.without(i);
        if !c.contains(below) {
            return fail(format!("{below} is not a codeword (neuron {i})"));
        }
        let f = covered_code(c, i)?.morphism;
        if f.apply(mu) != f.apply(below) {
            return fail(format!("covered morphism separates {mu} and {below}"));
        }
    }
    Ok(None)
}
