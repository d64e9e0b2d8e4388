//! Acceptance suite: one PASS or FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use laminar::analysis::{
    dynamical_core, fixed_cutpoint_search, invariant_closure, is_outward_edge, omega_limit,
    verdict_stability, verify_recurrence_theorems, FixedSearch, Seed, Theorem, VerifyParams,
};
use laminar::circle::Precision;
use laminar::dendrite::{build_dendrite, point_kind, TreeMap};
use laminar::lamination::{check_axioms, Lamination};
use laminar::markov::{
    center_vs_periodic_closure, exact_periods, random_interval_map, sh_set_contains,
    sharkovskiy_less, stefan_map, tent, truncated_tent, uniform_samples, MarkovTreeMap, Rat,
    SharkType,
};
use laminar::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axiom_suite() -> Outcome {
    let start = Instant::now();
    let lam = common::misiurewicz(10);
    let report = check_axioms(&lam);
    let elapsed = start.elapsed();
    ensure(report.violations.is_empty(), || {
        format!("{} violations, first: {}", report.violations.len(), report.violations[0].note)
    })?;
    let linked = common::linked_pairs(&lam);
    ensure(linked.is_empty(), || format!("brute force finds {} linked pairs", linked.len()))?;
    ensure(elapsed < Duration::from_secs(30), || format!("closure and audit took {elapsed:?}"))?;
    Ok(format!("{} classes at depth 10, closure and audit in {elapsed:.2?}", lam.len()))
}

fn quotient_suite() -> Outcome {
    let triangle = common::class("{1/7,2/7,4/7}");
    let mut sizes = Vec::new();
    for depth in 6..=10 {
        let d = build_dendrite(&common::misiurewicz(depth)).map_err(|e| e.to_string())?;
        let tree = d.tree();
        ensure(tree.edges().len() + 1 == tree.len(), || {
            format!("depth {depth}: {} edges on {} vertices", tree.edges().len(), tree.len())
        })?;
        let mut seen = vec![false; tree.len()];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(tree.neighbors(v));
            }
        }
        ensure(seen.iter().all(|&s| s), || format!("depth {depth}: tree is disconnected"))?;
        for v in 0..d.len() {
            let c = d.class(v);
            let valence = point_kind(c).valence;
            ensure(valence == c.len() && valence == c.holes().len(), || {
                format!("depth {depth}: valence of {c} is {valence}")
            })?;
            // neighbours are separated by the class, so each sits in its own hole
            ensure(tree.degree(v) <= valence, || {
                format!("depth {depth}: {c} has degree {} above its valence", tree.degree(v))
            })?;
        }
        let t = d.vertex_of(&triangle).ok_or("the fixed triangle is not stored")?;
        ensure(tree.degree(t) == 3, || format!("depth {depth}: triangle has degree {}", tree.degree(t)))?;
        sizes.push(d.len());
    }
    Ok(format!("trees on {sizes:?} vertices for depths 6..=10"))
}

fn exact_limit_sets() -> Outcome {
    let lam = common::misiurewicz(10);
    let seeds: Vec<Seed> = lam
        .classes()
        .iter()
        .filter(|s| s.class.len() >= 2)
        .filter(|s| laminar::lamination::is_persistent_cutpoint(&s.class, 2) == Ok(true))
        .map(|s| Seed::Exact(s.class.clone()))
        .collect();
    let params = VerifyParams {
        max_periods: vec![4, 8, 12],
        budget: 100,
        precision: Precision(20),
    };
    let report = verify_recurrence_theorems(&lam, Theorem::Limdend, &seeds, &params, Exec::default())
        .map_err(|e| e.to_string())?;
    let records: usize = report.seeds.iter().map(|s| s.records.len()).sum();
    let uncovered = report
        .seeds
        .iter()
        .flat_map(|s| &s.records)
        .filter(|r| r.class_period.is_none_or(|p| p > 12))
        .count();
    ensure(report.exact_failures == 0, || {
        let first = report.seeds.iter().find_map(|s| s.exact_failures.first()).unwrap();
        format!("{} exact failures, first: {first}", report.exact_failures)
    })?;
    ensure(uncovered == 0, || format!("{uncovered} limit classes have period above 12"))?;
    ensure(!seeds.is_empty(), || "no persistent seeds".into())?;
    Ok(format!("{} persistent seeds, {records} limit classes, all at distance 0", seeds.len()))
}

fn stream_limit_sets() -> Outcome {
    let lam = common::chebyshev(6);
    let params = VerifyParams {
        max_periods: vec![4, 8, 12],
        budget: 2000,
        precision: Precision(20),
    };
    let mut notes = Vec::new();
    for (rho, flip) in [("1/7", "6/7"), ("1/3", "2/3"), ("2/5", "3/5")] {
        let text = format!("{{sturmian(alpha=4181/6765,rho={rho}),sturmian(alpha=2584/6765,rho={flip})}}");
        let seed: Seed = text.parse().map_err(|e: laminar::analysis::AnalysisError| e.to_string())?;
        let report =
            verify_recurrence_theorems(&lam, Theorem::Limdend, &[seed.clone()], &params, Exec::default())
                .map_err(|e| e.to_string())?;
        let s = &report.seeds[0];
        ensure(!s.records.is_empty(), || format!("rho={rho}: no limit clusters"))?;
        ensure(s.records.iter().all(|r| r.monotone), || format!("rho={rho}: distances increase"))?;
        let stability = verdict_stability(&lam, &seed, 2000, Precision(20), Exec::default())
            .map_err(|e| e.to_string())?;
        ensure(stability.stable(), || {
            format!(
                "rho={rho}: {} matched, disagreements {:?}",
                stability.matched, stability.disagreements
            )
        })?;
        notes.push(format!("rho={rho}: {} clusters", s.records.len()));
    }
    Ok(notes.join(", "))
}

fn fixed_point_search() -> Outcome {
    let dendrites = [
        build_dendrite(&common::misiurewicz(8)).map_err(|e| e.to_string())?,
        build_dendrite(&common::chebyshev(6)).map_err(|e| e.to_string())?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut fixed, mut below, mut frontier) = (0, 0, 0);
    for trial in 0..100 {
        let d = &dendrites[trial % 2];
        let k = rng.gen_range(1..=3);
        let seeds: Vec<usize> = (0..k).map(|_| rng.gen_range(0..d.len())).collect();
        let hull = invariant_closure(d, &seeds);
        match fixed_cutpoint_search(&hull.vertices(), d).map_err(|e| e.to_string())? {
            FixedSearch::Fixed { vertex, .. } => {
                ensure(d.image(vertex) == Some(vertex), || format!("{} is not fixed", d.label(vertex)))?;
                fixed += 1;
            }
            FixedSearch::BelowDepth { edge: (a, b) } => {
                ensure(is_outward_edge(d, a, b), || format!("edge ({a}, {b}) does not map outward"))?;
                below += 1;
            }
            FixedSearch::NotFound { frontier: f } => {
                ensure(!f.is_empty(), || format!("no fixed point and no frontier from seeds {seeds:?}"))?;
                frontier += 1;
            }
        }
    }
    Ok(format!("{fixed} fixed, {below} below depth, {frontier} frontier"))
}

fn core_suite() -> Outcome {
    let mut notes = Vec::new();
    for (name, lam) in [("critical-leaf", common::misiurewicz(10)), ("vertical", common::chebyshev(8))] {
        let d = build_dendrite(&lam).map_err(|e| e.to_string())?;
        let core = dynamical_core(&d);
        ensure(core.stable, || format!("{name}: core grows under one more closure step"))?;
        let failures = core.failures();
        ensure(failures.is_empty(), || {
            format!("{name}: {} orbits never reach the core, first {}", failures.len(), failures[0].class)
        })?;
        notes.push(format!(
            "{name}: {} core vertices, {} cutpoint orbits",
            core.vertices.len(),
            core.absorption.len()
        ));
    }
    Ok(notes.join("; "))
}

fn realized(f: &MarkovTreeMap, bound: u32) -> Result<Vec<u64>, String> {
    Ok(exact_periods(f, bound).map_err(|e| e.to_string())?.realized)
}

fn sharkovskiy_suite() -> Outcome {
    let start = Instant::now();
    let mut all: Vec<SharkType> = (1..=1000).map(SharkType::Finite).collect();
    all.push(SharkType::TwoInfinity);
    let mut wins = Vec::new();
    for &m in &all {
        let mut count = 0;
        for &n in &all {
            let less = sharkovskiy_less(m, n);
            ensure(m != n || !less, || format!("{m} precedes itself"))?;
            ensure(m == n || less != sharkovskiy_less(n, m), || format!("{m}, {n} not ordered once"))?;
            count += less as usize;
        }
        wins.push(count);
    }
    wins.sort_unstable();
    ensure(wins.iter().copied().eq(0..all.len()), || "order is not transitive".into())?;

    let three = realized(&stefan_map(3).map_err(|e| e.to_string())?, 10)?;
    ensure(three == (1..=10).collect::<Vec<_>>(), || format!("stefan 3 realizes {three:?}"))?;
    let five = realized(&stefan_map(5).map_err(|e| e.to_string())?, 10)?;
    ensure(five == vec![1, 2, 4, 5, 6, 7, 8, 9, 10], || format!("stefan 5 realizes {five:?}"))?;
    let sh5: Vec<u64> = (1..=10).filter(|&n| sh_set_contains(SharkType::Finite(5), n)).collect();
    ensure(five == sh5, || format!("Sh(5) is {sh5:?}"))?;

    let mut maps = vec![tent(), stefan_map(7).map_err(|e| e.to_string())?];
    for h in ["1/2", "3/4", "5/6", "9/11", "47/57", "9/10"] {
        maps.push(truncated_tent(&h.parse::<Rat>().unwrap()).map_err(|e| e.to_string())?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let n = rng.gen_range(3..=6);
        maps.push(random_interval_map(&mut rng, n, 2));
    }
    for f in &maps {
        let ps = exact_periods(f, 10).map_err(|e| e.to_string())?;
        ensure(ps.is_down_set(), || {
            format!("{:?} is not a down-set for\n{}", ps.realized, laminar::markov::write_markov_toml(f))
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("suite took {elapsed:?}"))?;
    Ok(format!("{} maps with down-set period sets, {elapsed:.2?}", maps.len()))
}

fn center_suite() -> Outcome {
    let eps = Rat::new(1.into(), 256.into());
    let periods = [4, 8, 12];
    let run = |f: &MarkovTreeMap| {
        let samples = uniform_samples(f, 100).map_err(|e| e.to_string())?;
        center_vs_periodic_closure(f, &samples, &eps, &periods, 1000, Exec::default())
            .map_err(|e| e.to_string())
    };
    let t = run(&tent())?;
    let top = t.rows.last().ok_or("no rows")?;
    ensure(t.within_eps, || format!("tent: {} at P = 12", top.approx))?;
    ensure(t.monotone, || "tent: distances increase".into())?;
    let mut maps = vec![stefan_map(3), stefan_map(5), stefan_map(7)]
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    for h in ["3/4", "9/11", "5/6"] {
        maps.push(truncated_tent(&h.parse::<Rat>().unwrap()).map_err(|e| e.to_string())?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        maps.push(random_interval_map(&mut rng, 4, 1));
    }
    for f in &maps {
        let r = run(f)?;
        ensure(r.monotone, || {
            format!("distances {:?} increase for\n{}", r.rows, laminar::markov::write_markov_toml(f))
        })?;
    }
    Ok(format!(
        "tent at P = 12: {:.3e} < 2^-8 ({} of 100 orbits closed); {} more maps monotone",
        top.approx,
        t.closed_orbits,
        maps.len()
    ))
}

fn least_periods_from_roots(roots: &[Vec<f64>]) -> Vec<u64> {
    let near = |x: f64, set: &[f64]| set.iter().any(|y| (x - y).abs() < 1e-9);
    (1..=roots.len())
        .filter(|&p| {
            roots[p - 1]
                .iter()
                .any(|&x| !(1..p).filter(|q| p % q == 0).any(|q| near(x, &roots[q - 1])))
        })
        .map(|p| p as u64)
        .collect()
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut maps, mut skipped, mut roots_seen) = (0, 0, 0);
    'maps: while maps < 50 {
        let n = rng.gen_range(3..=5);
        let f = random_interval_map(&mut rng, n, 2);
        let g = common::FloatGraph::of(&f);
        let mut exact_all = Vec::new();
        let mut float_all = Vec::new();
        for p in 1..=6 {
            let Some(exact) = common::exact_roots(&f, p) else {
                skipped += 1;
                continue 'maps;
            };
            let approx = g.roots(p);
            common::roots_agree(&exact, &approx, 1e-12).map_err(|e| {
                format!("p = {p}: {e} for\n{}", laminar::markov::write_markov_toml(&f))
            })?;
            roots_seen += exact.len();
            exact_all.push(exact);
            float_all.push(approx);
        }
        let periods = realized(&f, 6)?;
        let by_roots = least_periods_from_roots(&float_all);
        ensure(periods == by_roots, || format!("least periods {periods:?} vs {by_roots:?}"))?;
        maps += 1;
    }

    let mut classes = 0;
    for lam in [common::misiurewicz(8), common::chebyshev(6)] {
        classes += omega_matches_iteration(&lam)?;
    }
    Ok(format!(
        "{maps} maps ({skipped} with fixed segments skipped), {roots_seen} roots at 1e-12; {classes} exact seeds"
    ))
}

fn omega_matches_iteration(lam: &Lamination) -> Result<usize, String> {
    let mut checked = 0;
    for id in 0..lam.len() {
        let c = lam.class(id);
        let Ok(records) = omega_limit(lam, &Seed::Exact(c.clone()), 100, Precision(20)) else {
            continue;
        };
        let targets: BTreeSet<_> = records.into_iter().map(|r| r.target).collect();
        let brute = common::cycle_by_iteration(c, lam.degree(), 10_000);
        ensure(targets == brute, || format!("seed {c}: {targets:?} vs {brute:?}"))?;
        checked += 1;
    }
    Ok(checked)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom suite", axiom_suite),
        ("quotient suite", quotient_suite),
        ("exact limit sets", exact_limit_sets),
        ("stream limit sets", stream_limit_sets),
        ("fixed point search", fixed_point_search),
        ("dynamical core", core_suite),
        ("sharkovskiy suite", sharkovskiy_suite),
        ("center vs periodic closure", center_suite),
        ("oracle agreement", oracle_agreement),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} [{elapsed:.2?}]: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
