#![allow(dead_code)]

pub mod golden;
pub mod oracle;
pub mod sweeps;

use pmapkit::mcg::{parse_element, Family, MappingClass};
use rand::Rng;

/// A random reduced word over `a_1..a_max` of length at most `len`.
pub fn random_word(rng: &mut impl Rng, max: i32, len: usize) -> String {
    let n = rng.gen_range(1..=len);
    let mut out: Vec<String> = vec![];
    let mut last = 0i32;
    while out.len() < n {
        let g = rng.gen_range(1..=max) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if g == -last {
            continue;
        }
        last = g;
        out.push(if g > 0 { format!("a{g}") } else { format!("A{}", -g) });
    }
    out.join(" ")
}

fn atom(rng: &mut impl Rng, family: Family, window: i32, len: usize) -> String {
    let rays: Vec<u32> = (1..=4).filter(|&k| family.has_ray(k)).collect();
    match rng.gen_range(0..5) {
        0 => {
            let i = rng.gen_range(1..=window);
            format!("W({}, L{i}.{})", random_word(rng, window, len), rng.gen_range(0..2))
        }
        1 if !rays.is_empty() => {
            let k = rays[rng.gen_range(0..rays.len())];
            format!("W({}, R{k}.0)", random_word(rng, window, len))
        }
        2 => {
            let n = rng.gen_range(1..=window / 2);
            let m1 = rng.gen_range(1..=window - 2 * n + 1);
            let m2 = rng.gen_range(m1 + n..=window - n + 1);
            format!("LS({n},{m1},{m2})")
        }
        3 => {
            let i = rng.gen_range(1..=window);
            let mut j = rng.gen_range(1..=window);
            while j == i {
                j = rng.gen_range(1..=window);
            }
            let t = if rng.gen_bool(0.5) { format!("a{j}") } else { format!("A{j}") };
            if rng.gen_bool(0.5) {
                format!("C(a{i} -> {t} a{i})")
            } else {
                format!("C(a{i} -> a{i} {t})")
            }
        }
        _ => format!("W({}, E{})", random_word(rng, window, len), rng.gen_range(1..window)),
    }
}

/// A random element with loop support in `a_1..a_window`, built from one to
/// three atoms, together with its expression text.
pub fn random_element(rng: &mut impl Rng, family: Family, window: i32, len: usize) -> (String, MappingClass) {
    loop {
        let k = rng.gen_range(1..=3);
        let text = (0..k).map(|_| atom(rng, family, window, len)).collect::<Vec<_>>().join(" * ");
        if let Ok(g) = parse_element(family, &text) {
            return (text, g);
        }
    }
}
