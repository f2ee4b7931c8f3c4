//! One PASS or FAIL line per acceptance criterion. The test fails if any
//! criterion fails, after every line has been printed.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pmapkit::cbwitness::{full_witness, power_bound, sinfty_factorize, FinitePerm, Membership};
use pmapkit::fluxdim::{admissible_pair, flux, flux_at, flux_family, zk_embedding_check, EndPartition};
use pmapkit::freegrp::Word;
use pmapkit::lengthtree::*;
use pmapkit::mcg::{parse_element, Family, MappingClass};
use pmapkit::HalfInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle::*;
use common::sweeps::*;

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn classification_table() -> Outcome {
    let start = Instant::now();
    let rows = common::golden::table();
    ensure(rows.len() >= 16, || format!("only {} rows", rows.len()))?;
    for row in &rows {
        common::golden::check_row(row)?;
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{} graphs", rows.len()))
}

fn witness_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let families = [Family::LochNess, Family::Hungry(2), Family::Millipede];
    let mut max_power = BTreeMap::new();
    for i in 0..200 {
        let family = families[i % 3];
        let (text, g) = common::random_element(&mut rng, family, 8, 6);
        let n = rng.gen_range(1..=3);
        let fac = full_witness(&g, n).map_err(|e| format!("{text}: {e}"))?;
        fac.verify().map_err(|e| format!("{text}: {e}"))?;
        let product = fac.factors.iter().try_fold(MappingClass::identity(family), |acc, x| acc.compose(&x.element));
        ensure(product.as_ref() == Ok(&g), || format!("{text}: product differs"))?;
        let bound = power_bound(family, n).map_err(|e| e.to_string())?;
        ensure(fac.power <= bound, || format!("{text}: power {} > {bound}", fac.power))?;
        for x in &fac.factors {
            if let Membership::InVK(_) = x.membership {
                ensure(fixes_window(&x.element, n), || format!("{text}: {} leaves V_K", x.name))?;
            }
        }
        let e = max_power.entry(family.to_string()).or_insert(0);
        *e = (*e).max(fac.power);
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("200 elements, largest powers {max_power:?}"))
}

fn sinfty() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..100 {
        let size = rng.gen_range(1..=12u32);
        let mut img: Vec<u32> = (1..=size).collect();
        img.shuffle(&mut rng);
        let sigma = FinitePerm::from_map(img.iter().enumerate().map(|(i, &j)| (i as u32 + 1, j)).collect())
            .ok_or("not a bijection")?;
        let n = rng.gen_range(1..=5);
        let fac = sinfty_factorize(&sigma, n);
        let product = fac.factors.iter().fold(FinitePerm::identity(), |acc, x| acc.compose(&x.perm));
        ensure(product == sigma, || format!("{sigma:?}: product differs"))?;
        ensure(fac.power <= 3, || format!("{sigma:?}: power {}", fac.power))?;
        ensure(fac.verify(), || format!("{sigma:?}: certificate refused"))?;
    }
    Ok("100 permutations".into())
}

fn ladder_atom(rng: &mut impl Rng, shifts: bool) -> String {
    match rng.gen_range(if shifts { 0 } else { 1 }..3) {
        0 => format!("H({})", rng.gen_range(-3..=3)),
        1 => {
            let n = rng.gen_range(1..=2);
            let m1 = rng.gen_range(-4..=2);
            format!("LS({n},{m1},{})", m1 + n + rng.gen_range(0..=2))
        }
        _ => {
            let i = rng.gen_range(-4..=4);
            let j = loop {
                let j = rng.gen_range(-4..=4);
                if j != i {
                    break j;
                }
            };
            let t = if rng.gen_bool(0.5) { format!("A{j}") } else { format!("a{j}") };
            if rng.gen_bool(0.5) { format!("C(a{i} -> {t} a{i})") } else { format!("C(a{i} -> a{i} {t})") }
        }
    }
}

fn ladder_element(rng: &mut impl Rng, shifts: bool) -> MappingClass {
    loop {
        let text = (0..rng.gen_range(1..=4)).map(|_| ladder_atom(rng, shifts)).collect::<Vec<_>>().join(" * ");
        if let Ok(g) = parse_element(Family::Ladder, &text) {
            return g;
        }
    }
}

fn flux_criterion() -> Outcome {
    let p = EndPartition::ladder();
    let fx = |g: &MappingClass| flux(g, &p).map(|v| v.value).map_err(|e| e.to_string());
    let el = |s: &str| parse_element(Family::Ladder, s).map_err(|e| e.to_string());
    ensure(fx(&el("H(1)")?)? == 1, || "H(1) does not have flux 1".into())?;
    for e in -4..=4i64 {
        let h = el(&format!("H({e})"))?;
        let v = flux(&h, &p).map_err(|e| e.to_string())?;
        ensure(v.value == e && oracle_flux(&h, v.m, v.n) == e, || format!("H({e}) gives {}", v.value))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..50 {
        let g = ladder_element(&mut rng, false);
        ensure(fx(&g)? == 0, || format!("{g} has nonzero flux"))?;
    }
    for _ in 0..30 {
        let g = ladder_element(&mut rng, true);
        let v = fx(&g)?;
        for n in [-2i64, 0, 3] {
            let m = admissible_pair(&g, &p, n).map_err(|e| e.to_string())?;
            ensure(flux_at(&g, &p, m + 2, n) == Ok(Some(v)), || format!("{g}: pair ({}, {n}) disagrees", m + 2))?;
            ensure(oracle_flux(&g, m, n) == v, || format!("{g}: oracle disagrees at ({m}, {n})"))?;
        }
    }
    for _ in 0..100 {
        let (f, g) = (ladder_element(&mut rng, true), ladder_element(&mut rng, true));
        let fg = f.compose(&g).map_err(|e| e.to_string())?;
        ensure(fx(&fg)? == fx(&f)? + fx(&g)?, || format!("flux is not additive on {f} and {g}"))?;
    }
    Ok("shift powers, 50 compact elements, 30 × 3 pairs, 100 products".into())
}

fn flux_family_criterion() -> Outcome {
    let fam = flux_family(Family::Star(3)).map_err(|e| e.to_string())?;
    ensure(fam.matrix == vec![vec![1, 0], vec![0, 1]], || format!("pairing {:?}", fam.matrix))?;
    Ok("2 × 2 identity".into())
}

fn zk_criterion() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for k in 1..=3 {
        let r = zk_embedding_check(k, 3).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("k = {k}: {:?}", r.failures))?;
        total += r.checked;
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{total} vectors"))
}

fn length_tree_criterion() -> Outcome {
    let ctx = CombContext::for_family(Family::Comb).map_err(|e| e.to_string())?;
    let len = |g: &MappingClass| ctx.length(g).map_err(|e| e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..500 {
        let ((s, g), (t, h)) = (random_comb(&mut rng), random_comb(&mut rng));
        let (lg, lh) = (len(&g)?, len(&h)?);
        let lgh = len(&g.compose(&h).map_err(|e| e.to_string())?)?;
        ensure(lgh <= lg.max(lh), || format!("ℓ({s} * {t}) = {lgh}"))?;
        ensure(lg == lh || lgh == lg.max(lh), || format!("ℓ({s} * {t}) = {lgh} below the max"))?;
        ensure(len(&g.inverse())? == lg && lg == oracle_length(&g), || format!("ℓ({s}) disagrees"))?;
    }

    let mut els: Vec<(String, MappingClass)> = (0..10).map(|_| random_comb(&mut rng)).collect();
    els.push(("Id".into(), MappingClass::identity(Family::Comb)));
    let tree = ultratree(&ctx, &els).map_err(|e| e.to_string())?;
    let n = els.len();
    let d: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| oracle_length(&els[i].1.inverse().compose(&els[j].1).unwrap()) as i64).collect())
        .collect();
    let mut leaves_hold = vec![0; n];
    for leaf in tree.leaves() {
        for &p in &tree.nodes[leaf].points {
            leaves_hold[p] += 1;
        }
    }
    ensure(leaves_hold.iter().all(|&c| c == 1), || "inputs are not leaves".into())?;
    for x in 0..n {
        for y in 0..n {
            ensure(tree.leaf_distance(x, y).twice() == 2 * d[x][y], || format!("tree distance ({x}, {y})"))?;
        }
    }
    let reps: Vec<usize> = (0..n).filter(|&i| (0..i).all(|j| d[i][j] != 0)).collect();
    let classes: Vec<Vec<i64>> = reps.iter().map(|&i| reps.iter().map(|&j| d[i][j]).collect()).collect();
    let delta = delta_exact(&classes).map_err(|e| e.to_string())?;
    ensure(delta == HalfInt::ZERO, || format!("delta {delta}"))?;

    for _ in 0..200 {
        let ((_, phi), (_, psi)) = (random_comb(&mut rng), random_comb(&mut rng));
        let v = random_vertex(&mut rng);
        let lhs = v.act(&psi.compose(&phi).unwrap()).map_err(|e| e.to_string())?;
        let rhs = v.act(&phi).and_then(|w| w.act(&psi)).map_err(|e| e.to_string())?;
        ensure(lhs == rhs && lhs.level == v.level, || format!("action law fails on {v}"))?;
    }
    for _ in 0..50 {
        let v = random_vertex(&mut rng);
        let w = transitivity_witness(&v).map_err(|e| e.to_string())?;
        let image = LeveledVertex::base(v.level).and_then(|b| b.act(&w)).map_err(|e| e.to_string())?;
        ensure(image == v, || format!("witness misses {v}"))?;
    }
    Ok(format!("500 pairs, tree with {} leaves, 200 triples, 50 orbits", tree.leaves().len()))
}

fn random_vertex(rng: &mut impl Rng) -> LeveledVertex {
    let level = rng.gen_range(1..=4);
    let words: BTreeMap<u32, Word> = (0..rng.gen_range(0..=3))
        .map(|_| (rng.gen_range(level..=TEETH), common::random_word(rng, 3, 3).parse().unwrap()))
        .collect();
    LeveledVertex::new(level, words).unwrap()
}

fn appendix_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let to_f = |d: &[Vec<i64>]| d.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<Vec<f64>>>();
    for _ in 0..200 {
        let d = hierarchical(&mut rng);
        let delta = hyperbolicity_delta(&to_f(&d)).map_err(|e| e.to_string())?;
        ensure(delta == 0.0 && delta_exact(&d) == Ok(HalfInt::ZERO), || format!("delta {delta} on {d:?}"))?;
    }
    let mut flagged = 0;
    for _ in 0..200 {
        let d = hierarchical(&mut rng);
        let mut f: Vec<Vec<f64>> = to_f(&d).iter().map(|r| r.iter().map(|&x| if x > 0.0 { x + 1.0 } else { x }).collect()).collect();
        let n = f.len();
        let (i, j) = loop {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                break (i, j);
            }
        };
        let v = f[i][j] + rng.gen_range(-0.95..0.95);
        f[i][j] = v;
        f[j][i] = v;
        let ultra = is_ultrametric(&f).map_err(|e| e.to_string())?;
        ensure(ultra == !violates(&f), || format!("is_ultrametric = {ultra} on {f:?}"))?;
        flagged += usize::from(!ultra);
    }
    let r = 2f64.sqrt();
    let square = vec![vec![0.0, 1.0, r, 1.0], vec![1.0, 0.0, 1.0, r], vec![r, 1.0, 0.0, 1.0], vec![1.0, r, 1.0, 0.0]];
    let delta = hyperbolicity_delta(&square).map_err(|e| e.to_string())?;
    ensure(!is_ultrametric(&square).unwrap(), || "the square passes as an ultrametric".into())?;
    let expected = (2.0 - r) / 2.0;
    ensure((delta - expected).abs() < 1e-12, || {
        format!(
            "unit square: four-point delta is {delta:.12} (√2 − 1), expected {expected:.12}; \
             200 ultrametrics gave 0 and {flagged} of 200 perturbed metrics were flagged"
        )
    })?;
    Ok(format!("{flagged} of 200 perturbations flagged"))
}

fn bounded_geometry_criterion() -> Outcome {
    let ctx = CombContext::for_family(Family::Comb).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for n in 1..=4u32 {
        for _ in 0..25 {
            let fs: Vec<MappingClass> = (0..rng.gen_range(0..=8))
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        let w = vec!["a1"; rng.gen_range(1..=4)].join(" ");
                        parse_element(Family::Comb, &format!("W({w}, R{n}.0)")).unwrap()
                    } else {
                        random_comb(&mut rng).1
                    }
                })
                .collect();
            let g = bounded_geometry_witness(&ctx, n, &fs).map_err(|e| format!("n = {n}: {e}"))?;
            ensure(oracle_length(&g) == n + 1, || format!("n = {n}: ℓ(g) = {}", oracle_length(&g)))?;
            for f in &fs {
                let d = oracle_length(&f.inverse().compose(&g).unwrap());
                ensure(d > n, || format!("n = {n}: g ∈ {f} H_n"))?;
            }
        }
    }
    Ok("100 sets F".into())
}

fn oracle_criterion() -> Outcome {
    let a = membership_sweep(110, 200);
    let b = intersection_sweep(111, 150);
    let c = windowed_sweep(112, 60);
    ensure(a >= 150 && b >= 100 && c >= 40, || format!("oracle decided only {a}, {b}, {c} instances"))?;
    Ok(format!("{a} memberships, {b} intersections, {c} windowed instances"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classification table", classification_table),
        ("witness soundness", witness_soundness),
        ("finitary permutations", sinfty),
        ("flux", flux_criterion),
        ("flux family", flux_family_criterion),
        ("displacement and ℤ^k", zk_criterion),
        ("length and trees", length_tree_criterion),
        ("ultrametrics and hyperbolicity", appendix_criterion),
        ("bounded geometry", bounded_geometry_criterion),
        ("oracle equivalence", oracle_criterion),
    ];
    let mut failed = vec![];
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({t:.1?})", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} ({t:.1?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
