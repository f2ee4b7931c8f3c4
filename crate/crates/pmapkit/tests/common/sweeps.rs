//! Randomized sweeps comparing Stallings graphs and windowed factors with
//! the oracles. Each returns how many instances the oracle could decide.

use std::collections::{BTreeMap, BTreeSet};

use pmapkit::freegrp::{Aut, ArmLayout, Corank, StallingsGraph, WindowedFactor, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::*;

pub const ALPHABET: [i32; 3] = [-1, 0, 1];

pub fn membership_sweep(seed: u64, rounds: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = all_words(&ALPHABET, 4);
    let mut checked = 0;
    for _ in 0..rounds {
        let gens: Vec<Raw> = (0..rng.gen_range(1..=3)).map(|_| random_raw(&mut rng, &ALPHABET, 6)).collect();
        let Some(basis) = nielsen(&gens) else { continue };
        checked += 1;
        let g = StallingsGraph::from_generators(&gens.iter().map(|w| word(w)).collect::<Vec<_>>());
        assert_eq!(g.rank(), basis.len(), "{gens:?}");
        let inside = members(&basis, 4);
        for w in &words {
            assert_eq!(g.contains(&word(w)), inside.contains(w), "{w:?} in {gens:?}");
        }
    }
    checked
}

pub fn intersection_sweep(seed: u64, rounds: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = all_words(&ALPHABET, 4);
    let mut checked = 0;
    for _ in 0..rounds {
        let h: Vec<Raw> = (0..rng.gen_range(1..=3)).map(|_| random_raw(&mut rng, &ALPHABET, 6)).collect();
        let k: Vec<Raw> = (0..rng.gen_range(1..=3)).map(|_| random_raw(&mut rng, &ALPHABET, 6)).collect();
        let (Some(bh), Some(bk)) = (nielsen(&h), nielsen(&k)) else { continue };
        checked += 1;
        let gh = StallingsGraph::from_generators(&h.iter().map(|w| word(w)).collect::<Vec<_>>());
        let gk = StallingsGraph::from_generators(&k.iter().map(|w| word(w)).collect::<Vec<_>>());
        let meet = gh.intersect(&gk);
        let (mh, mk) = (members(&bh, 4), members(&bk, 4));
        for w in &words {
            assert_eq!(meet.contains(&word(w)), mh.contains(w) && mk.contains(w), "{w:?}: {h:?} ∩ {k:?}");
        }
        assert!(meet.is_subgroup_of(&gh) && meet.is_subgroup_of(&gk));
    }
    checked
}

/// A random automorphism supported on the window: a product of Nielsen
/// moves `a ↦ a b^{±1}` or `a ↦ b^{±1} a`.
fn random_aut(rng: &mut impl Rng, letters: &[i32]) -> Aut {
    let mut phi = Aut::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let a = *letters.choose(rng).unwrap();
        let b = *letters.iter().filter(|&&x| x != a).collect::<Vec<_>>().choose(rng).unwrap();
        let bw = Word::from_pairs(&[(*b, rng.gen_bool(0.5))]);
        let img = if rng.gen_bool(0.5) { Word::gen(a).mul(&bw) } else { bw.mul(&Word::gen(a)) };
        let step = Aut::from_images(BTreeMap::from([(a, img)])).unwrap();
        phi = step.compose(&phi);
    }
    phi
}

fn finite_gens(f: &WindowedFactor, cut: u32) -> Vec<Raw> {
    let f = f.recut(cut).unwrap();
    f.gens().iter().map(|w| w.letters().iter().map(|l| (l.gen, l.inv)).collect()).collect()
}

fn rank_oracle(f: &WindowedFactor, cut: u32) -> Option<usize> {
    nielsen(&finite_gens(f, cut)).map(|b| b.len())
}

/// `φ(⟨letters⟩ * tails)` at `cut`, with `φ` supported on the window.
fn image_factor(layout: ArmLayout, cut: u32, tails: &BTreeSet<u32>, letters: &[i32], phi: &Aut) -> WindowedFactor {
    let src = WindowedFactor::subgraph(layout, cut, tails.clone(), letters.iter().copied()).unwrap();
    let gens = src.gens().iter().map(|w| phi.apply(w)).collect();
    WindowedFactor::image_of(&src, cut, gens).unwrap()
}

pub fn windowed_sweep(seed: u64, rounds: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = ArmLayout::ladder();
    let cut = 1;
    let window: Vec<i32> = layout.window(cut).into_iter().collect();
    let wide: Vec<i32> = layout.window(2 * cut).into_iter().collect();
    let words = all_words(&wide, 3);
    let mut checked = 0;
    for _ in 0..rounds {
        let phi = random_aut(&mut rng, &window);
        let big: Vec<i32> = window.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
        let small: Vec<i32> = big.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let tails: BTreeSet<u32> = [0, 1].into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let sub_tails: BTreeSet<u32> = tails.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let a = image_factor(layout, cut, &tails, &big, &phi);
        let a_small = image_factor(layout, cut, &sub_tails, &small, &phi);
        let b_letters: Vec<i32> = window.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let b_tails: BTreeSet<u32> = [0, 1].into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let b = WindowedFactor::subgraph(layout, cut, b_tails.clone(), b_letters.clone()).unwrap();

        // Corank of nested images against the rank oracle, and its additivity.
        let top = WindowedFactor::subgraph(layout, cut, [0, 1].into(), window.iter().copied()).unwrap();
        let expected = if sub_tails == tails { Corank::Finite((big.len() - small.len()) as u64) } else { Corank::Infinite };
        assert_eq!(WindowedFactor::cork(&a, &a_small).unwrap(), expected);
        if let (Some(ra), Some(rs)) = (rank_oracle(&a, 2 * cut), rank_oracle(&a_small, 2 * cut)) {
            if sub_tails == tails {
                assert_eq!(expected, Corank::Finite((ra - rs) as u64));
            }
        }
        if tails == BTreeSet::from([0, 1]) && sub_tails == tails {
            let whole = WindowedFactor::cork(&top, &a_small).unwrap();
            let parts = (WindowedFactor::cork(&top, &a).unwrap(), WindowedFactor::cork(&a, &a_small).unwrap());
            match (whole, parts) {
                (Corank::Finite(w), (Corank::Finite(x), Corank::Finite(y))) => assert_eq!(w, x + y),
                other => panic!("nested factors with equal tails gave {other:?}"),
            }
        }

        // Intersection membership against the oracle on the doubled window.
        let meet = a.intersect(&b).unwrap();
        let (Some(ba), Some(bb)) = (nielsen(&finite_gens(&a, 2 * cut)), nielsen(&finite_gens(&b, 2 * cut))) else {
            continue;
        };
        checked += 1;
        let (ma, mb) = (members(&ba, 3), members(&bb, 3));
        let doubled = a.recut(2 * cut).unwrap().intersect(&b.recut(2 * cut).unwrap()).unwrap();
        for w in &words {
            let oracle = ma.contains(w) && mb.contains(w);
            assert_eq!(meet.contains(&word(w)).unwrap(), oracle, "{w:?}");
            assert_eq!(doubled.contains(&word(w)).unwrap(), oracle, "{w:?}");
        }

        // Corank of the intersection in `b` is the same at both cuts.
        let c1 = WindowedFactor::cork(&b, &meet).unwrap();
        let c2 = WindowedFactor::cork(&b.recut(2 * cut).unwrap(), &doubled).unwrap();
        assert_eq!(c1, c2);
        if let (Corank::Finite(c), Some(rb), Some(rm)) = (c1, rank_oracle(&b, 2 * cut), rank_oracle(&meet, 2 * cut)) {
            assert_eq!(c as usize, rb - rm);
        }
    }
    checked
}

