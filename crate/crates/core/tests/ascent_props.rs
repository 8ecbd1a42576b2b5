mod common;

use std::collections::BTreeSet;

use common::*;
use ncp_core::ascent::{
    all_covering_codes, int_comp_cover, is_isolated, isolated_subsets, pullback_chain, verify_cover_completion,
};
use ncp_core::descent::{covered_code, covers, essential_neurons};
use ncp_core::morphism::is_isomorphic;
use ncp_core::{Code, Codeword, CoverConstruction, Morphism};
use rand::seq::SliceRandom;
use rand::Rng;

fn complete_codes() -> Vec<Code> {
    all_codes_up_to(3).into_iter().filter(is_intersection_complete).collect()
}

fn subsets(c: &Code) -> impl Iterator<Item = Vec<Codeword>> + '_ {
    (1u32..1 << c.len()).map(move |m| members(c, m))
}

#[test]
fn isolation_formulations_agree() {
    for host in complete_codes() {
        let listed: BTreeSet<Vec<Codeword>> =
            isolated_subsets(&host).unwrap().iter().map(|i| i.members().to_vec()).collect();
        let mut brute = BTreeSet::new();
        for s in subsets(&host) {
            let bits: Vec<u64> = s.iter().map(|w| w.bits()).collect();
            let pairwise = is_isolated_pairwise(&host, &bits);
            assert_eq!(is_isolated(&host, &s).unwrap().is_some(), pairwise, "{host}: {s:?}");
            if pairwise {
                brute.insert(s);
            }
        }
        assert_eq!(listed, brute, "{host}");
    }
}

#[test]
fn removing_an_isolated_subset_keeps_completeness() {
    for host in complete_codes() {
        for iso in isolated_subsets(&host).unwrap() {
            let rest = host.words().iter().copied().filter(|&w| !iso.contains(w)).chain([iso.mu()]);
            assert!(is_intersection_complete(&Code::new(host.n(), rest).unwrap()));
        }
    }
}

/// Pairwise meets of `C_[I]`, split by where the two codewords come from.
fn check_meets(pick: impl Fn(bool, bool) -> bool) {
    for host in complete_codes() {
        for iso in isolated_subsets(&host).unwrap() {
            let cover = int_comp_cover(&host, &iso).unwrap();
            let alpha = host.n() + 1;
            for &a in cover.words() {
                for &b in cover.words() {
                    if pick(a.contains(alpha), b.contains(alpha)) {
                        assert!(cover.contains(a.intersection(b)), "{cover}: {a} ∩ {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn meets_outside_the_lifted_part_stay_in_the_cover() {
    check_meets(|a, b| !a && !b);
}

#[test]
fn meets_inside_the_lifted_part_stay_in_the_cover() {
    check_meets(|a, b| a && b);
}

#[test]
fn mixed_meets_stay_in_the_cover() {
    check_meets(|a, b| a != b);
}

#[test]
fn completed_covers_cover_their_base() {
    for host in complete_codes() {
        for iso in isolated_subsets(&host).unwrap() {
            let cover = int_comp_cover(&host, &iso).unwrap();
            assert!(covers(&cover, &host).unwrap(), "{cover} over {host}");
            assert_eq!(trunk_family(&cover).len(), trunk_family(&host).len() + 1);
        }
    }
}

fn check_construction(d: &Code, cc: &CoverConstruction) {
    let c = &cc.result;
    assert!(covers(c, d).unwrap(), "{c} over {d}");
    assert_eq!(c.trunk_count(), d.trunk_count() + 1);
    let p = cc.projection().unwrap();
    assert_eq!(&p.image(), d);
    let pos: Vec<usize> = c.words().iter().map(|&w| d.index_of(w.without(cc.alpha)).unwrap()).collect();
    assert!(is_morphism_positions(c, d, &pos));
    assert!(verify_cover_completion(d, cc));
    assert_eq!(c.intersection_completion(), int_comp_cover(&cc.completion, &cc.isolated).unwrap());
    let back = essential_neurons(c).into_iter().any(|i| is_isomorphic(&covered_code(c, i).unwrap().code, d).unwrap());
    assert!(back, "{c} has no covered code isomorphic to {d}");
}

#[test]
fn constructions_cover_their_base() {
    let mut r = rng(11);
    let bases: Vec<Code> = all_codes_up_to(3).into_iter().chain((0..60).map(|_| random_code(&mut r, 4))).collect();
    for d in bases {
        for cc in all_covering_codes(&d).unwrap() {
            check_construction(&d, &cc);
        }
    }
}

#[test]
fn constructions_are_pairwise_non_isomorphic() {
    for d in all_codes_up_to(2) {
        let all = all_covering_codes(&d).unwrap();
        for (k, a) in all.iter().enumerate() {
            for b in &all[k + 1..] {
                assert!(!is_isomorphic(&a.result, &b.result).unwrap());
            }
        }
    }
}

#[test]
fn constructions_find_every_cover_on_three_neurons() {
    let candidates = iso_representatives(all_codes(3));
    for d in all_codes(2) {
        let want = trunk_family(&d).len() + 1;
        let oracle: BTreeSet<_> = candidates
            .iter()
            .filter(|(c, _)| trunk_family(c).len() == want && has_surjection(c, &d))
            .map(|(_, k)| k.clone())
            .collect();
        let built: BTreeSet<_> = all_covering_codes(&d).unwrap().iter().map(|cc| iso_class(&cc.result)).collect();
        assert_eq!(built, oracle, "{d}");
    }
}

#[test]
fn covers_of_complete_codes_are_completed_covers() {
    let reps: Vec<Code> = iso_representatives(complete_codes()).into_iter().map(|(c, _)| c).collect();
    for c in &reps {
        for d in &reps {
            let built = isolated_subsets(d)
                .unwrap()
                .iter()
                .any(|iso| is_isomorphic(c, &int_comp_cover(d, iso).unwrap()).unwrap());
            assert_eq!(covers(c, d).unwrap(), built, "{c} over {d}");
        }
    }
}

#[test]
fn completions_pull_back_covering() {
    let mut r = rng(17);
    for _ in 0..200 {
        let c = random_code(&mut r, 4);
        let proper = c.proper_trunks();
        let m = if proper.is_empty() { 0 } else { r.gen_range(1..=4) };
        let trunks: Vec<_> = (0..m).map(|_| proper.choose(&mut r).unwrap().clone()).collect();
        let f = Morphism::from_trunks(&c, &trunks).unwrap();
        let chain = pullback_chain(&f).unwrap();
        assert!(chain.agrees(), "{c} via {m} trunks: {chain:?}");
    }
}
