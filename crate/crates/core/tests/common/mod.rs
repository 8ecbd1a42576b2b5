//! Brute-force oracles built from definitions only.
//!
//! Codewords of a code are addressed by position in `code.words()`, and
//! sets of codewords are `u32` masks over those positions. Nothing here
//! calls into the trunk, morphism, canonical-form or search code of the
//! library; only `Code::new`, `Code::words` and `Codeword` bit access.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ncp_core::{Code, Codeword};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn code(n: usize, words: &[&[usize]]) -> Code {
    Code::new(n, words.iter().map(|w| ncp_core::cw(w))).unwrap()
}

pub fn code_from_bits(n: usize, bits: impl IntoIterator<Item = u64>) -> Code {
    Code::new(n, bits.into_iter().map(Codeword::from_bits).chain([Codeword::EMPTY])).unwrap()
}

/// Every code on exactly `n` neurons (always containing ∅).
pub fn all_codes(n: usize) -> Vec<Code> {
    let words = 1u64 << n;
    (0..1u64 << (words - 1)).map(|mask| code_from_bits(n, (1..words).filter(|w| mask >> (w - 1) & 1 == 1))).collect()
}

/// Every code on at most `n` neurons, each listed on its own ambient set.
pub fn all_codes_up_to(n: usize) -> Vec<Code> {
    (0..=n).flat_map(all_codes).collect()
}

pub fn random_code(rng: &mut ChaCha8Rng, max_n: usize) -> Code {
    let n = rng.gen_range(0..=max_n);
    let words = 1u64 << n;
    let density: f64 = rng.gen_range(0.1..0.9);
    code_from_bits(n, (1..words).filter(|_| rng.gen_bool(density)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bits(c: &Code) -> Vec<u64> {
    c.words().iter().map(|w| w.bits()).collect()
}

/// `Tk_C(σ)` as a position mask.
pub fn trunk_mask(c: &Code, sigma: u64) -> u32 {
    bits(c).iter().enumerate().filter(|(_, &w)| w & sigma == sigma).fold(0, |acc, (k, _)| acc | 1 << k)
}

pub fn full_mask(c: &Code) -> u32 {
    if c.len() == 32 {
        u32::MAX
    } else {
        (1u32 << c.len()) - 1
    }
}

/// Nonempty trunks, from every σ ⊆ [n].
pub fn trunk_family(c: &Code) -> BTreeSet<u32> {
    (0..1u64 << c.n()).map(|s| trunk_mask(c, s)).filter(|&t| t != 0).collect()
}

pub fn proper_trunk_family(c: &Code) -> BTreeSet<u32> {
    let full = full_mask(c);
    trunk_family(c).into_iter().filter(|&t| t != full).collect()
}

pub fn members(c: &Code, mask: u32) -> Vec<Codeword> {
    (0..c.len()).filter(|k| mask >> k & 1 == 1).map(|k| c.words()[k]).collect()
}

pub fn mask_of(c: &Code, words: &[Codeword]) -> u32 {
    words.iter().fold(0, |acc, w| acc | 1 << c.words().iter().position(|x| x == w).unwrap())
}

pub fn is_intersection_complete(c: &Code) -> bool {
    let ws = bits(c);
    ws.iter().all(|a| ws.iter().all(|b| ws.contains(&(a & b))))
}

pub fn completion(c: &Code) -> Code {
    let mut ws: BTreeSet<u64> = bits(c).into_iter().collect();
    loop {
        let meets: BTreeSet<u64> = ws.iter().flat_map(|a| ws.iter().map(move |b| a & b)).collect();
        if meets.is_subset(&ws) {
            return code_from_bits(c.n(), ws);
        }
        ws.extend(meets);
    }
}

/// `f` maps positions of `c` to positions of `d`. Checked against the
/// definition: every proper trunk of `d` pulls back to a proper trunk of `c`.
pub fn is_morphism_positions(c: &Code, d: &Code, f: &[usize]) -> bool {
    let pc = proper_trunk_family(c);
    proper_trunk_family(d).iter().all(|&t| {
        let pre = (0..c.len()).filter(|&k| t >> f[k] & 1 == 1).fold(0u32, |acc, k| acc | 1 << k);
        pc.contains(&pre)
    })
}

/// Calls `visit` on every map `c → d` sending ∅ to ∅ (positions).
pub fn for_each_map(c: &Code, d: &Code, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut f = vec![0usize; c.len()];
    loop {
        if !visit(&f) {
            return;
        }
        let mut k = 1;
        loop {
            if k >= c.len() {
                return;
            }
            f[k] += 1;
            if f[k] < d.len() {
                break;
            }
            f[k] = 0;
            k += 1;
        }
    }
}

/// Whether some surjective morphism `c → d` exists, by enumerating maps.
pub fn has_surjection(c: &Code, d: &Code) -> bool {
    if c.len() < d.len() {
        return false;
    }
    let pc = proper_trunk_family(c);
    let pd: Vec<u32> = proper_trunk_family(d).into_iter().collect();
    let full_d = full_mask(d);
    let mut found = false;
    for_each_map(c, d, |f| {
        let hit = f.iter().fold(0u32, |acc, &j| acc | 1 << j);
        if hit == full_d {
            let ok = pd.iter().all(|&t| {
                let pre = (0..c.len()).filter(|&k| t >> f[k] & 1 == 1).fold(0u32, |acc, k| acc | 1 << k);
                pc.contains(&pre)
            });
            if ok {
                found = true;
                return false;
            }
        }
        true
    });
    found
}

/// Isomorphism invariant that is complete: the lexicographically least
/// relabelling of the nonempty trunk family over codeword bijections that
/// fix ∅. Two codes are isomorphic exactly when these agree.
pub fn iso_class(c: &Code) -> (usize, Vec<u32>) {
    let n = c.len();
    assert!(n <= 10, "oracle isomorphism is factorial in the code size");
    let family: Vec<u32> = trunk_family(c).into_iter().collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u32>> = None;
    permute_from(1, &mut perm, &mut |p| {
        let mut img: Vec<u32> =
            family.iter().map(|&t| (0..n).filter(|&k| t >> k & 1 == 1).fold(0u32, |acc, k| acc | 1 << p[k])).collect();
        img.sort_unstable();
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    });
    (n, best.unwrap())
}

fn permute_from(k: usize, perm: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if k + 1 >= perm.len() {
        visit(perm);
        return;
    }
    for j in k..perm.len() {
        perm.swap(k, j);
        permute_from(k + 1, perm, visit);
        perm.swap(k, j);
    }
}

/// One representative per isomorphism class, in first-seen order.
pub fn iso_representatives(codes: impl IntoIterator<Item = Code>) -> Vec<(Code, (usize, Vec<u32>))> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in codes {
        let k = iso_class(&c);
        if seen.insert(k.clone()) {
            out.push((c, k));
        }
    }
    out
}

/// Isolation per the pairwise formulation: `I` is nonempty and closed under
/// intersection, and no codeword outside `I` contains a non-minimal member.
pub fn is_isolated_pairwise(host: &Code, set: &[u64]) -> bool {
    if set.is_empty() || !set.iter().all(|a| set.iter().all(|b| set.contains(&(a & b)))) {
        return false;
    }
    let mu = set.iter().fold(u64::MAX, |acc, w| acc & w);
    bits(host).iter().filter(|s| !set.contains(s)).all(|&s| set.iter().filter(|&&t| t != mu).all(|&t| t & s != t))
}

/// Deletes neuron `i` from every codeword, shifting higher labels down.
pub fn delete_neuron(c: &Code, i: usize) -> Code {
    let low = (1u64 << (i - 1)) - 1;
    code_from_bits(c.n() - 1, bits(c).into_iter().map(|w| (w & low) | ((w >> i) << (i - 1))))
}
