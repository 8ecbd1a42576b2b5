mod common;

use common::*;
use ncp_core::descent::{classify_neurons, covered_code, covers, essential_neurons, is_minor};
use ncp_core::morphism::is_isomorphic;
use ncp_core::{Code, Codeword, NeuronStatus};

fn oracle_status(c: &Code, i: usize) -> NeuronStatus {
    let ti = trunk_mask(c, 1 << (i - 1));
    if ti == 0 {
        return NeuronStatus::Trivial;
    }
    let others = ((1u64 << c.n()) - 1) & !(1 << (i - 1));
    let generated = (0..=others).filter(|s| s & !others == 0).any(|s| trunk_mask(c, s) == ti);
    if generated {
        NeuronStatus::Redundant
    } else {
        NeuronStatus::Essential
    }
}

#[test]
fn classification_matches_brute_force() {
    for c in all_codes_up_to(3) {
        for k in classify_neurons(&c) {
            assert_eq!(k.status, oracle_status(&c, k.neuron), "{c} neuron {}", k.neuron);
            if let Some(w) = k.witness {
                assert!(!w.contains(k.neuron));
                assert_eq!(trunk_mask(&c, w.bits()), trunk_mask(&c, 1 << (k.neuron - 1)));
            }
        }
    }
}

#[test]
fn covered_codes_lose_exactly_one_trunk() {
    let mut r = rng(3);
    let codes: Vec<Code> = all_codes_up_to(3).into_iter().chain((0..200).map(|_| random_code(&mut r, 4))).collect();
    for c in codes {
        for i in essential_neurons(&c) {
            let cc = covered_code(&c, i).unwrap();
            assert_eq!(trunk_family(&cc.code).len() + 1, trunk_family(&c).len(), "{c} i={i}");
            let pos: Vec<usize> =
                c.words().iter().map(|&w| cc.code.index_of(cc.morphism.apply(w).unwrap()).unwrap()).collect();
            assert!(is_morphism_positions(&c, &cc.code, &pos));
        }
    }
}

#[test]
fn deleting_a_redundant_neuron_is_an_isomorphism() {
    for c in all_codes_up_to(3) {
        for k in classify_neurons(&c).into_iter().filter(|k| k.status == NeuronStatus::Redundant) {
            let smaller = delete_neuron(&c, k.neuron);
            assert!(is_isomorphic(&c, &smaller).unwrap());
            assert_eq!(iso_class(&c), iso_class(&smaller), "{c} without {}", k.neuron);
        }
    }
}

/// Isomorphism classes of codes on at most three neurons, with the minor
/// relation between them decided by map enumeration.
struct SmallPoset {
    reps: Vec<Code>,
    classes: Vec<(usize, Vec<u32>)>,
    below: Vec<Vec<bool>>,
}

impl SmallPoset {
    fn new() -> SmallPoset {
        let (reps, classes): (Vec<Code>, Vec<_>) = iso_representatives(all_codes_up_to(3)).into_iter().unzip();
        let below = reps.iter().map(|c| reps.iter().map(|d| has_surjection(c, d)).collect()).collect();
        SmallPoset { reps, classes, below }
    }

    /// Strictly below `c`, strictly above `d`, with no code in between.
    /// Intermediate codes are searched among all images of `c`, which may
    /// need more neurons than `c` itself.
    fn covers(&self, c: usize, d: usize) -> bool {
        if c == d || !self.below[c][d] {
            return false;
        }
        let (code, target) = (&self.reps[c], &self.reps[d]);
        !images(code)
            .into_iter()
            .map(|e| (iso_class(&e), e))
            .any(|(k, e)| k != self.classes[c] && k != self.classes[d] && has_surjection(&e, target))
    }
}

/// Every image of `c` under a morphism, one per set of proper trunks.
fn images(c: &Code) -> Vec<Code> {
    let proper: Vec<u32> = proper_trunk_family(c).into_iter().collect();
    (0..1u64 << proper.len())
        .map(|chosen| {
            let columns: Vec<u32> = (0..proper.len()).filter(|j| chosen >> j & 1 == 1).map(|j| proper[j]).collect();
            let word = |k: usize| {
                columns.iter().enumerate().filter(|(_, &t)| t >> k & 1 == 1).fold(0u64, |acc, (j, _)| acc | 1 << j)
            };
            let e = code_from_bits(columns.len(), (0..c.len()).map(word));
            let pos: Vec<usize> = (0..c.len()).map(|k| e.index_of(Codeword::from_bits(word(k))).unwrap()).collect();
            assert!(is_morphism_positions(c, &e, &pos));
            e
        })
        .collect()
}

#[test]
fn covering_matches_the_definition() {
    let p = SmallPoset::new();
    assert!(p.reps.len() > 20);
    for (a, c) in p.reps.iter().enumerate() {
        for (b, d) in p.reps.iter().enumerate() {
            assert_eq!(covers(c, d).unwrap(), p.covers(a, b), "{c} over {d}");
        }
    }
}

#[test]
fn minor_relation_matches_the_definition() {
    let p = SmallPoset::new();
    for (a, c) in p.reps.iter().enumerate() {
        for (b, d) in p.reps.iter().enumerate() {
            assert_eq!(is_minor(c, d).unwrap(), p.below[a][b], "{d} <= {c}");
        }
    }
}

#[test]
fn minor_is_a_partial_order_up_to_isomorphism() {
    let codes = all_codes_up_to(2);
    let leq: Vec<Vec<bool>> = codes.iter().map(|c| codes.iter().map(|d| is_minor(c, d).unwrap()).collect()).collect();
    for a in 0..codes.len() {
        assert!(leq[a][a]);
        for b in 0..codes.len() {
            if leq[a][b] && leq[b][a] {
                assert!(is_isomorphic(&codes[a], &codes[b]).unwrap());
            }
            for c in 0..codes.len() {
                if leq[a][b] && leq[b][c] {
                    assert!(leq[a][c]);
                }
            }
        }
    }
}

#[test]
fn essential_neurons_of_complete_codes_drop_from_the_minimal_codeword() {
    for c in all_codes_up_to(3).into_iter().filter(is_intersection_complete) {
        for i in essential_neurons(&c) {
            let mu =
                c.words().iter().filter(|w| w.contains(i)).fold(Codeword::full(c.n()), |acc, &w| acc.intersection(w));
            assert!(c.contains(mu));
            let below = mu.without(i);
            assert!(c.contains(below), "{c}: {mu} minus {i}");
            let f = covered_code(&c, i).unwrap().morphism;
            assert_eq!(f.apply(mu), f.apply(below));
        }
    }
}

#[test]
fn trunks_are_minors() {
    for c in all_codes_up_to(3) {
        for s in 0..1u64 << c.n() {
            let t = c.trunk(Codeword::from_bits(s)).unwrap();
            let minor = c.with_empty(t.bits());
            assert!(is_minor(&c, &minor).unwrap());
            assert!(has_surjection(&c, &minor));
        }
    }
}
