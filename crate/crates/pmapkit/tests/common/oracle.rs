//! Independent oracles shared by the integration and acceptance tests.

use std::collections::BTreeSet;

use pmapkit::blueprint::truncate;
use pmapkit::freegrp::{StallingsGraph, Word};
use pmapkit::mcg::{parse_element, Family, MappingClass};
use rand::seq::SliceRandom;
use rand::Rng;

/// Independent membership check for `V_K`: recovers the frame change from
/// `a_n` by peeling matching outer letters, then checks every loop and ray.
pub fn fixes_window(g: &MappingClass, n: u32) -> bool {
    let k = n as i32;
    let img = g.core().image(k);
    let letters = img.letters();
    let len = letters.len();
    if len % 2 == 0 {
        return false;
    }
    let half = len / 2;
    let p = Word::from_letters(letters[..half].iter().copied());
    if p.mul(&Word::gen(k)).mul(&p.inverse()) != img {
        return false;
    }
    let beyond = |w: &Word| w.gens().iter().all(|&x| x > k);
    let c = p.inverse();
    beyond(&c)
        && (1..=k).all(|i| c.mul(&g.core().image(i)).mul(&p) == Word::gen(i))
        && g.core().touched().into_iter().filter(|&i| i > k).all(|i| beyond(&g.core().image(i)))
        && (1..=4u32).filter(|&r| g.family().has_ray(r)).all(|r| {
            let near = matches!(g.family(), Family::Hungry(_)) || r <= n;
            if near { g.ray_word(r) == c } else { beyond(&g.ray_word(r)) }
        })
}

/// Corank of `f_*(A_n)` in `A_m` on the ladder computed in a plain finite
/// truncation: images of `a_{-N}..a_n` generate a factor whose lowest letter
/// fixes where the truncation of `A_m` starts.
pub fn oracle_flux(f: &MappingClass, m: i64, n: i64) -> i64 {
    let big_n = 30i64;
    let imgs: Vec<Word> = (-big_n..=n).map(|i| f.image(i as i32)).collect();
    let lowest = imgs.iter().filter_map(|w| w.min_gen()).min().unwrap() as i64;
    let am = StallingsGraph::from_generators(&(lowest..=m).map(|i| Word::gen(i as i32)).collect::<Vec<_>>());
    let img = StallingsGraph::from_generators(&imgs);
    assert!(img.is_subgroup_of(&am));
    let cork_img = (m - lowest + 1) - img.rank() as i64;
    let cork_n = m - n;
    cork_n - cork_img
}

pub const TEETH: u32 = 6;

/// A random element on the comb: tooth word maps on teeth `1..=TEETH`,
/// loop word maps, loop swaps and Nielsen moves.
pub fn random_comb(rng: &mut impl Rng) -> (String, MappingClass) {
    loop {
        let k = rng.gen_range(1..=3);
        let atoms: Vec<String> = (0..k)
            .map(|_| match rng.gen_range(0..5) {
                0 | 1 => format!("W({}, R{}.0)", super::random_word(rng, 3, 3), rng.gen_range(1..=TEETH)),
                2 => format!("W({}, L{}.0)", super::random_word(rng, 3, 2), rng.gen_range(1..=3)),
                3 => "LS(1,1,2)".to_string(),
                _ => format!("C(a{} -> a{} a{})", 1, 1, rng.gen_range(2..=3)),
            })
            .collect();
        let text = if rng.gen_bool(0.2) { "Id".to_string() } else { atoms.join(" * ") };
        if let Ok(g) = parse_element(Family::Comb, &text) {
            return (text, g);
        }
    }
}

/// Enumerates the lines of the comb between two tooth ends or a tooth end
/// and the spine end on a truncation, reads off each line's distance to the
/// core from the truncation, and takes one more than the farthest line that
/// is moved. A line is moved when its two ends pick up different words.
pub fn oracle_length(g: &MappingClass) -> u32 {
    let radius = TEETH + 3;
    let t = truncate(&Family::Comb.blueprint(), radius).unwrap();
    let dist = |label: &str| t.vertices.iter().find(|v| v.label == label).unwrap_or_else(|| panic!("{label}")).distance;
    let line_distance = |i: u32, j: Option<u32>| {
        let top = j.unwrap_or(radius);
        let mut labels: Vec<String> = (i..=top).map(|m| format!("b.s{m}")).collect();
        labels.push(format!("b.t{i}.r0.1"));
        if let Some(j) = j {
            labels.push(format!("b.t{j}.r0.1"));
        }
        labels.iter().map(|l| dist(l)).min().unwrap()
    };
    let end_word = |i: Option<u32>| i.map(|i| g.ray_word(i)).unwrap_or_default();
    let mut worst = None;
    for i in 1..=TEETH + 1 {
        let others = (i + 1..=TEETH + 1).map(Some).chain([None]);
        for j in others {
            if end_word(Some(i)) != end_word(j) {
                let d = line_distance(i, j);
                worst = Some(worst.map_or(d, |w: u32| w.max(d)));
            }
        }
    }
    worst.map_or(0, |w| w + 1)
}

/// Oracle words: a letter is `(generator, inverted)`, free reduction done
/// here rather than by the library.
pub type Raw = Vec<(i32, bool)>;

pub fn reduce(w: &[(i32, bool)]) -> Raw {
    let mut out: Raw = vec![];
    for &l in w {
        if out.last() == Some(&(l.0, !l.1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn inv(w: &[(i32, bool)]) -> Raw {
    w.iter().rev().map(|&(g, i)| (g, !i)).collect()
}

pub fn cat(a: &[(i32, bool)], b: &[(i32, bool)]) -> Raw {
    reduce(&[a, b].concat())
}

pub fn word(w: &[(i32, bool)]) -> Word {
    Word::from_pairs(w)
}

/// Shortens generators with `u ← u v^{±1}` and `u ← v^{±1} u` until no
/// move helps, then checks the three-factor cancellation condition. A set
/// passing both is a basis in which a reduced product of `k` factors has
/// length at least `k`. Returns `None` when the condition fails.
pub fn nielsen(gens: &[Raw]) -> Option<Vec<Raw>> {
    let mut s: Vec<Raw> = gens.iter().map(|g| reduce(g)).filter(|g| !g.is_empty()).collect();
    'outer: loop {
        s.retain(|g| !g.is_empty());
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i == j {
                    continue;
                }
                for v in [s[j].clone(), inv(&s[j])] {
                    for cand in [cat(&s[i], &v), cat(&v, &s[i])] {
                        if cand.len() < s[i].len() {
                            s[i] = cand;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        break;
    }
    let sym: Vec<Raw> = s.iter().flat_map(|g| [g.clone(), inv(g)]).collect();
    for u in &sym {
        for v in &sym {
            if *u == inv(v) {
                continue;
            }
            for w in &sym {
                if *v == inv(w) {
                    continue;
                }
                let uvw = cat(&cat(u, v), w);
                if uvw.len() as i64 <= u.len() as i64 - v.len() as i64 + w.len() as i64 {
                    return None;
                }
            }
        }
    }
    Some(s)
}

/// Every element of `⟨basis⟩` of length at most `max`, by enumerating
/// reduced products of at most `max` factors.
pub fn members(basis: &[Raw], max: usize) -> BTreeSet<Raw> {
    let sym: Vec<Raw> = basis.iter().flat_map(|g| [g.clone(), inv(g)]).collect();
    let mut out = BTreeSet::from([vec![]]);
    let mut frontier: Vec<(Raw, Option<usize>)> = vec![(vec![], None)];
    for _ in 0..max {
        let mut next = vec![];
        for (w, last) in &frontier {
            for (k, x) in sym.iter().enumerate() {
                if last.is_some_and(|l| l ^ 1 == k) {
                    continue;
                }
                let p = cat(w, x);
                if p.len() <= max {
                    out.insert(p.clone());
                }
                next.push((p, Some(k)));
            }
        }
        frontier = next;
    }
    out
}

pub fn all_words(alphabet: &[i32], max: usize) -> Vec<Raw> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Raw> = vec![vec![]];
    for _ in 0..max {
        let mut next = vec![];
        for w in &layer {
            for &g in alphabet {
                for i in [false, true] {
                    if w.last() != Some(&(g, !i)) {
                        let mut x = w.clone();
                        x.push((g, i));
                        next.push(x);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn random_raw(rng: &mut impl Rng, alphabet: &[i32], max: usize) -> Raw {
    let n = rng.gen_range(1..=max);
    let mut w = vec![];
    while w.len() < n {
        w = reduce(&[w, vec![(*alphabet.choose(rng).unwrap(), rng.gen_bool(0.5))]].concat());
    }
    w
}


/// Points labeled by digit strings of length 3; the distance is `base`
/// plus the length of the unshared suffix, an ultrametric.
pub fn hierarchical(rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let mut codes = BTreeSet::new();
    let size = rng.gen_range(3..9);
    while codes.len() < size {
        codes.insert((0..3).map(|_| rng.gen_range(0u8..3)).collect::<Vec<_>>());
    }
    let base = rng.gen_range(1i64..5);
    codes
        .iter()
        .map(|a| {
            codes
                .iter()
                .map(|b| {
                    let shared = a.iter().zip(b).take_while(|(x, y)| x == y).count() as i64;
                    if shared == 3 { 0 } else { base + 3 - shared }
                })
                .collect()
        })
        .collect()
}

/// Whether some triple breaks `d(x, z) ≤ max(d(x, y), d(y, z))`.
pub fn violates(d: &[Vec<f64>]) -> bool {
    let n = d.len();
    (0..n).any(|x| (0..n).any(|y| (0..n).any(|z| d[x][z] > d[x][y].max(d[y][z]))))
}
