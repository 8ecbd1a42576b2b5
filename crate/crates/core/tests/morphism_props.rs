mod common;

use std::collections::HashSet;

use common::*;
use ncp_core::morphism::{
    extend_to_completion, find_surjective_morphism, is_isomorphic, is_morphism, recover_determining_trunks,
};
use ncp_core::{Code, Codeword, Morphism};
use rand::seq::SliceRandom;
use rand::Rng;

fn random_morphism(seed: u64) -> Morphism {
    let mut r = rng(seed);
    let c = random_code(&mut r, 4);
    let proper = c.proper_trunks();
    let m = if proper.is_empty() { 0 } else { r.gen_range(1..=3) };
    let trunks: Vec<_> = (0..m).map(|_| proper.choose(&mut r).unwrap().clone()).collect();
    Morphism::from_trunks(&c, &trunks).unwrap()
}

fn positions(f: &Morphism, target: &Code) -> Vec<usize> {
    f.source().words().iter().map(|&w| target.index_of(f.apply(w).unwrap()).unwrap()).collect()
}

#[test]
fn random_morphisms_satisfy_the_definition() {
    for seed in 0..300 {
        let f = random_morphism(seed);
        let c = f.source();
        let d = f.image();
        assert_eq!(f.apply(Codeword::EMPTY), Some(Codeword::EMPTY));
        assert!(is_morphism_positions(c, &d, &positions(&f, &d)), "seed {seed}");
        assert!(is_morphism(c, &d, &f.to_map()).unwrap());
        let back = recover_determining_trunks(c, &d, &f.to_map()).unwrap();
        assert_eq!(back.table(), f.table());
    }
}

#[test]
fn preimages_respect_intersections() {
    for seed in 0..300 {
        let f = random_morphism(seed);
        let d = f.image();
        let family: Vec<u32> = trunk_family(&d).into_iter().collect();
        let pre = |mask: u32| -> Vec<usize> {
            let set: HashSet<Codeword> = members(&d, mask).into_iter().collect();
            f.preimage(&set).ones().collect()
        };
        for &s in &family {
            for &t in &family {
                let both: Vec<usize> = pre(s).into_iter().filter(|k| pre(t).contains(k)).collect();
                assert_eq!(pre(s & t), both);
                // preimages of trunks are trunks or empty
                let p = pre(s).iter().fold(0u32, |acc, k| acc | 1 << k);
                assert!(p == 0 || trunk_family(f.source()).contains(&p));
            }
        }
    }
}

#[test]
fn images_respect_intersections() {
    for seed in 0..300 {
        let f = random_morphism(seed);
        let c = f.source();
        for &a in c.words() {
            for &b in c.words() {
                if c.contains(a.intersection(b)) {
                    let lhs = f.apply(a.intersection(b)).unwrap();
                    assert_eq!(lhs, f.apply(a).unwrap().intersection(f.apply(b).unwrap()));
                }
            }
        }
        if c.is_intersection_complete() {
            assert!(f.image().is_intersection_complete());
        }
    }
}

#[test]
fn extension_to_completions_is_unique() {
    let mut checked = 0;
    for seed in 0..400 {
        let f = random_morphism(seed);
        let c = f.source();
        let d = f.image();
        let g = extend_to_completion(&f);
        let (hc, hd) = (completion(c), completion(&d));
        assert_eq!(g.source(), &hc);
        assert_eq!(g.image(), hd, "surjectivity is preserved");
        for &w in c.words() {
            assert_eq!(g.apply(w), f.apply(w));
        }
        let gp = positions(&g, &hd);
        assert!(is_morphism_positions(&hc, &hd, &gp));
        if hc.len() > 8 {
            continue;
        }
        checked += 1;
        let fixed: Vec<Option<usize>> =
            hc.words().iter().map(|&w| f.apply(w).map(|v| hd.index_of(v).unwrap())).collect();
        let mut alternatives = 0;
        for_each_map(&hc, &hd, |h| {
            let agrees = fixed.iter().zip(h).all(|(x, &y)| x.is_none_or(|x| x == y));
            if agrees && is_morphism_positions(&hc, &hd, h) {
                alternatives += 1;
                assert_eq!(h, &gp[..], "seed {seed}");
            }
            true
        });
        assert_eq!(alternatives, 1, "seed {seed}");
    }
    assert!(checked > 100);
}

#[test]
fn surjection_search_matches_map_enumeration() {
    let sources = all_codes_up_to(3);
    let targets = all_codes_up_to(2);
    for c in &sources {
        for d in &targets {
            let found = find_surjective_morphism(c, d).unwrap();
            assert_eq!(found.is_some(), has_surjection(c, d), "{c} -> {d}");
            if let Some(f) = found {
                assert_eq!(&f.image(), d);
                assert!(is_morphism_positions(c, d, &positions(&f, d)));
            }
        }
    }
}

#[test]
fn isomorphism_matches_oracle_on_three_neurons() {
    let codes = all_codes_up_to(3);
    let classes: Vec<_> = codes.iter().map(iso_class).collect();
    for (a, ka) in codes.iter().zip(&classes) {
        for (b, kb) in codes.iter().zip(&classes) {
            assert_eq!(is_isomorphic(a, b).unwrap(), ka == kb, "{a} vs {b}");
        }
    }
}

#[test]
fn composition_matches_tables() {
    for seed in 0..200 {
        let f = random_morphism(seed);
        let d = f.image();
        let proper = d.proper_trunks();
        let mut r = rng(seed + 10_000);
        let m = if proper.is_empty() { 0 } else { r.gen_range(1..=3) };
        let trunks: Vec<_> = (0..m).map(|_| proper.choose(&mut r).unwrap().clone()).collect();
        let g = Morphism::from_trunks(&d, &trunks).unwrap();
        let h = f.then(&g).unwrap();
        for &w in f.source().words() {
            assert_eq!(h.apply(w), g.apply(f.apply(w).unwrap()));
        }
    }
}
