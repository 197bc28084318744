//! Acceptance gate: nine desk-scale property checks, one test per
//! criterion, each printing a single pass/fail line (visible with
//! `cargo test -- --nocapture`). Tolerances are pinned in the assertions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftlab_core::dynamics::{
    build_chain_constant_weight, chain_escape_test, concatenate_chains, decay_chain_to_zero,
    li_yorke_check, orbit_trace, uniform_bound_probe, verify_chain, EscapeVerdict,
    LiYorkeVerdict,
};
use shiftlab_core::entropy::{max_separated, SearchMode, SeparationQuery};
use shiftlab_core::space::{GridFunction, Mode, Representation, SpaceSpec};
use shiftlab_core::weights::{
    certify_admissibility, classify_tier, sup_ratio, Tier, WeightFunction,
};
use shiftlab_core::witness::{
    build_nonvanishing_witness, build_periodic_witness, build_separated_family,
    build_windowed_witness, find_escape_sequences, rate_increasing_schedule,
    verify_nonvanishing,
};

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn report(criterion: usize, name: &str, result: Result<(), String>) {
    match &result {
        Ok(()) => println!("ACCEPTANCE {criterion} ({name}): PASS"),
        Err(why) => println!("ACCEPTANCE {criterion} ({name}): FAIL - {why}"),
    }
    if let Err(why) = result {
        panic!("acceptance criterion {criterion} failed: {why}");
    }
}

fn certified(v: WeightFunction, x_max: f64, step: f64) -> WeightFunction {
    let cert = certify_admissibility(&v, x_max, step).expect("builtin certifies");
    v.with_certificate(cert)
}

/// Random positive weight given as log-space random walk nodes.
fn random_tabulated(rng: &mut ChaCha8Rng, x_max: f64) -> WeightFunction {
    let nodes = rng.gen_range(8..24);
    let mut xs = Vec::with_capacity(nodes + 1);
    let mut vs = Vec::with_capacity(nodes + 1);
    let mut log_v: f64 = rng.gen_range(-1.0..1.0);
    for i in 0..=nodes {
        xs.push(x_max * i as f64 / nodes as f64);
        vs.push(log_v.exp());
        log_v += rng.gen_range(-0.8..0.8);
    }
    WeightFunction::tabulated(xs, vs).expect("valid samples")
}

#[test]
fn criterion_1_tier_classifier() {
    let run = || -> Result<(), String> {
        let x_max = 100.0;
        let step = 0.01;
        let expected = [
            (certified(WeightFunction::integrable_exp(), x_max, step), Tier::TopTier),
            (certified(WeightFunction::rational_decay(), x_max, step), Tier::MiddleTier),
            (
                certified(WeightFunction::spike_train(6.0, 6.0, 15).unwrap(), x_max, step),
                Tier::InfiniteEntropyOnly,
            ),
            (certified(WeightFunction::constant(1.0).unwrap(), x_max, step), Tier::Tame),
            (certified(WeightFunction::exponential(2.0).unwrap(), x_max, step), Tier::Tame),
        ];
        for (v, want) in &expected {
            let rep = classify_tier(v, x_max, step).map_err(|e| e.to_string())?;
            check!(
                rep.tier == *want,
                "{:?} classified {:?}, expected {:?}",
                v.kind(),
                rep.tier,
                want
            );
            check!(rep.evidence_chain_holds(), "chain violated for {:?}", v.kind());
        }

        // evidence chain must survive 50 randomized tabulated weights
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut classified = 0usize;
        let mut attempts = 0usize;
        while classified < 50 {
            attempts += 1;
            check!(attempts <= 500, "only {classified} random weights classified");
            let v = random_tabulated(&mut rng, 30.0);
            let Ok(cert) = certify_admissibility(&v, 30.0, 0.01) else {
                continue;
            };
            match classify_tier(&v.with_certificate(cert), 30.0, 0.01) {
                Ok(rep) => {
                    check!(
                        rep.evidence_chain_holds(),
                        "evidence chain violated on random weight {classified}"
                    );
                    classified += 1;
                }
                Err(_) => continue, // honest inconclusives carry no chain to violate
            }
        }
        Ok(())
    };
    report(1, "tier classifier on built-ins", run());
}

#[test]
fn criterion_2_nonvanishing_witness() {
    let run = || -> Result<(), String> {
        let cases = [
            (WeightFunction::spike_train(6.0, 6.0, 15).unwrap(), 100.0),
            (WeightFunction::integrable_exp(), 30.0),
        ];
        for (raw, x_max) in cases {
            let step = 0.01;
            let v = certified(raw, x_max, step);
            let cert = *v.certificate().unwrap();
            let seq = find_escape_sequences(&v, &cert, 4, x_max, step)
                .map_err(|e| e.to_string())?;
            let (m, gamma) = (cert.big_m, cert.gamma);
            for p in [1.0, 2.0] {
                for repr in [Representation::PiecewiseConstant, Representation::PiecewiseLinear] {
                    let spec = SpaceSpec::new(v.clone(), Mode::Lp { p }, repr, x_max, step)
                        .map_err(|e| e.to_string())?;
                    let f = build_nonvanishing_witness(&seq, &spec).map_err(|e| e.to_string())?;
                    let rep = verify_nonvanishing(&f, &seq, &spec).map_err(|e| e.to_string())?;
                    check!(
                        rep.norm.powf(p) <= 2.0 * m * gamma * 1.01,
                        "p={p} {repr:?}: norm^p {} above 2Mgamma",
                        rep.norm.powf(p)
                    );
                    for row in &rep.levels {
                        check!(
                            row.translated_norm.powf(p) >= gamma / (2.0 * m) * 0.95,
                            "p={p} {repr:?} level {}: translated norm^p {}",
                            row.level,
                            row.translated_norm.powf(p)
                        );
                    }
                }
            }
            let spec = SpaceSpec::new(
                v.clone(),
                Mode::C0v,
                Representation::PiecewiseLinear,
                x_max,
                step,
            )
            .map_err(|e| e.to_string())?;
            let f = build_nonvanishing_witness(&seq, &spec).map_err(|e| e.to_string())?;
            let rep = verify_nonvanishing(&f, &seq, &spec).map_err(|e| e.to_string())?;
            check!(rep.norm <= m * 1.01, "sup-mode norm {} above M", rep.norm);
            for row in &rep.levels {
                check!(
                    row.translated_norm >= 1.0 / (2.0 * m) * 0.95,
                    "sup-mode level {}: translated norm {}",
                    row.level,
                    row.translated_norm
                );
            }
        }
        Ok(())
    };
    report(2, "non-vanishing witness bounds", run());
}

#[test]
fn criterion_3_separated_family() {
    let run = || -> Result<(), String> {
        let (x_max, step) = (100.0, 0.004);
        let v = certified(WeightFunction::spike_train(6.0, 6.0, 15).unwrap(), x_max, step);
        let cert = *v.certificate().unwrap();
        let seq =
            find_escape_sequences(&v, &cert, 4, x_max, step).map_err(|e| e.to_string())?;
        let a = rate_increasing_schedule(&seq, 24).map_err(|e| e.to_string())?;
        let spec = SpaceSpec::new(
            v,
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            x_max,
            step,
        )
        .map_err(|e| e.to_string())?;
        let family =
            build_separated_family(&seq, &a, 0, 0, &spec).map_err(|e| e.to_string())?;
        let epsilon = 0.5 * (seq.gamma / seq.big_m);
        let mut prev_rate = -1.0f64;
        for n in 0..4 {
            let members: Vec<GridFunction> = family
                .level_members(n)
                .into_iter()
                .map(|mem| mem.f.clone())
                .collect();
            check!(members.len() == a[n], "level {n} materialized {}", members.len());
            let q = SeparationQuery::new(&members, seq.t[n], epsilon, &spec)
                .map_err(|e| e.to_string())?;
            let (count, _) =
                max_separated(&q, &spec, SearchMode::Exact).map_err(|e| e.to_string())?;
            check!(
                count == a[n],
                "level {n}: exact count {count}, schedule {}",
                a[n]
            );
            let rate = (a[n] as f64).ln() / seq.t[n];
            check!(
                rate > prev_rate,
                "rate column not strictly increasing at level {n}: {rate} <= {prev_rate}"
            );
            prev_rate = rate;
            // pairwise p-th power distances after the level shift
            for i in 0..members.len() {
                let fi = spec.translate(&members[i], seq.t[n]).map_err(|e| e.to_string())?;
                for member_j in members.iter().skip(i + 1) {
                    let fj = spec.translate(member_j, seq.t[n]).map_err(|e| e.to_string())?;
                    let d = spec.distance(&fi, &fj);
                    check!(
                        d >= (seq.gamma / seq.big_m) * 0.95,
                        "level {n}: pairwise distance {d} below gamma/M"
                    );
                }
            }
        }
        Ok(())
    };
    report(3, "separated family counts and rates", run());
}

#[test]
fn criterion_4_bounded_ratio_regime() {
    let run = || -> Result<(), String> {
        let (x_max, step) = (40.0, 0.01);
        let v = WeightFunction::integrable_exp();
        let ratio = sup_ratio(&v, x_max, step).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for p in [1.0, 2.0] {
            let spec = SpaceSpec::new(
                v.clone(),
                Mode::Lp { p },
                Representation::PiecewiseConstant,
                x_max,
                step,
            )
            .map_err(|e| e.to_string())?;
            let probes: Vec<GridFunction> = (0..20)
                .map(|_| {
                    let mut f = spec.zero();
                    for _ in 0..rng.gen_range(1..4) {
                        let a = rng.gen_range(0.0..9.0);
                        let w = rng.gen_range(0.2..1.0);
                        let amp = rng.gen_range(0.2..3.0);
                        f = f.add(&spec.indicator(a, a + w, amp));
                    }
                    f
                })
                .collect();
            let t_list: Vec<f64> = (1..=40).map(|k| k as f64 * 0.5).collect();
            let rep =
                uniform_bound_probe(&spec, &t_list, &probes).map_err(|e| e.to_string())?;
            let bound = ratio.value.powf(1.0 / p) * 1.01;
            check!(
                rep.max_ratio <= bound,
                "p={p}: stretch {} above B^(1/p) = {bound}",
                rep.max_ratio
            );
            // compact probes vanish by half the horizon
            for f in &probes {
                let trace =
                    orbit_trace(f, &spec, &[x_max / 2.0], None).map_err(|e| e.to_string())?;
                check!(
                    trace.norms[0] < 1e-6 * spec.norm(f),
                    "p={p}: orbit norm {} has not decayed by x_max/2",
                    trace.norms[0]
                );
            }
        }
        Ok(())
    };
    report(4, "bounded-ratio stretch and decay", run());
}

#[test]
fn criterion_5_constant_weight_chains() {
    let run = || -> Result<(), String> {
        let spec = SpaceSpec::new(
            WeightFunction::constant(1.0).unwrap(),
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            20.0,
            1.0 / 128.0,
        )
        .map_err(|e| e.to_string())?;
        let g = spec.indicator(0.0, 1.0, 1.0);
        check!(spec.norm(&g) == 1.0, "unit norm not exact: {}", spec.norm(&g));
        let chain =
            build_chain_constant_weight(&g, &spec, 0.25, 0.3).map_err(|e| e.to_string())?;
        check!(chain.len() == 5, "expected n = 4 steps, got {}", chain.len() - 1);
        let errors = verify_chain(&chain, &spec).map_err(|e| e.to_string())?;
        for (i, err) in errors.iter().enumerate() {
            check!(
                (err - 0.25).abs() <= 1e-12,
                "step {i} error {err} differs from 0.25"
            );
        }
        // f -> 0 -> g concatenation
        let f = spec.indicator(0.0, 2.0, 0.7);
        let down = decay_chain_to_zero(&f, &spec, 0.25, 0.3).map_err(|e| e.to_string())?;
        let full = concatenate_chains(&down, &chain).map_err(|e| e.to_string())?;
        verify_chain(&full, &spec).map_err(|e| e.to_string())?;
        check!(
            full.points.first().unwrap().values() == f.values()
                && full.points.last().unwrap().values() == g.values(),
            "concatenated chain does not run f to g"
        );
        Ok(())
    };
    report(5, "constant-weight chain construction", run());
}

#[test]
fn criterion_6_contraction_no_escape() {
    let run = || -> Result<(), String> {
        let spec = SpaceSpec::new(
            WeightFunction::exponential(std::f64::consts::E).unwrap(),
            Mode::Lp { p: 2.0 },
            Representation::PiecewiseConstant,
            30.0,
            1.0 / 64.0,
        )
        .map_err(|e| e.to_string())?;
        let factor = (-0.5f64).exp();
        // direct contraction measurement on a mid-grid pair
        let h = spec.indicator(10.0, 12.0, 1.0).sub(&spec.indicator(15.0, 16.5, 0.7));
        let moved = spec.translate(&h, 1.0).map_err(|e| e.to_string())?;
        let measured = spec.norm(&moved) / spec.norm(&h);
        check!(
            (measured - factor).abs() <= 1e-6,
            "contraction {measured} differs from e^-1/2 = {factor}"
        );
        let raw = spec.indicator(14.0, 15.0, 1.0);
        let f = raw.scale(1.0 / spec.norm(&raw));
        let epsilon = 0.9 * (0.5 - 0.5 * factor) * spec.norm(&f);
        match chain_escape_test(&spec, 1.0, &f, epsilon, 10_000, 7).map_err(|e| e.to_string())? {
            EscapeVerdict::NoEscape { steps, max_norm } => {
                check!(steps == 10_000, "search stopped early at {steps}");
                check!(
                    max_norm < 0.5 * spec.norm(&f),
                    "ball invariant violated: reached {max_norm}"
                );
            }
            EscapeVerdict::Escaped { at_step, norm } => {
                check!(false, "escaped at step {at_step} with norm {norm}");
            }
        }
        Ok(())
    };
    report(6, "exponential-weight contraction", run());
}

#[test]
fn criterion_7_scrambled_pairs_never_decay() {
    let run = || -> Result<(), String> {
        let hole = WeightFunction::tabulated(
            vec![0.0, 29.0, 30.0, 40.0, 41.0, 60.0],
            vec![1.0, 1.0, 1e-20, 1e-20, 1.0, 1.0],
        )
        .unwrap();
        let hole_spec = SpaceSpec::new(
            hole,
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            60.0,
            0.01,
        )
        .map_err(|e| e.to_string())?;
        let exp_spec = SpaceSpec::new(
            WeightFunction::integrable_exp(),
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            40.0,
            0.01,
        )
        .map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(314);
        let mut scrambled = 0usize;
        for trial in 0..30 {
            let (spec, f, g) = if trial < 15 {
                let a = rng.gen_range(45.0..53.0);
                let w = rng.gen_range(0.5..2.0);
                let f = hole_spec.indicator(a, a + w, rng.gen_range(0.5..2.0));
                (&hole_spec, f, hole_spec.zero())
            } else {
                let f = exp_spec.indicator(
                    rng.gen_range(1.0..8.0),
                    rng.gen_range(9.0..15.0),
                    rng.gen_range(0.5..2.0),
                );
                let g = exp_spec.indicator(
                    rng.gen_range(1.0..8.0),
                    rng.gen_range(9.0..15.0),
                    rng.gen_range(0.5..2.0),
                );
                (&exp_spec, f, g)
            };
            let t_list: Vec<f64> = (0..=440).map(|k| k as f64 * 0.1).collect();
            let d0 = spec.distance(&f, &g);
            let delta = 0.1 * d0.max(1e-6);
            let rep =
                li_yorke_check(&f, &g, spec, &t_list, delta).map_err(|e| e.to_string())?;
            if rep.verdict == LiYorkeVerdict::Scrambled {
                scrambled += 1;
                // independent recomputation of the difference orbit
                let h = f.sub(&g);
                let trace = orbit_trace(&h, spec, &t_list[t_list.len() / 2..], None)
                    .map_err(|e| e.to_string())?;
                let trailing_sup = trace.norms.iter().cloned().fold(0.0, f64::max);
                check!(
                    trailing_sup > rep.tol_zero,
                    "trial {trial}: scrambled verdict but difference orbit decayed \
                     (trailing sup {trailing_sup} <= tol {})",
                    rep.tol_zero
                );
            }
        }
        check!(scrambled >= 5, "only {scrambled}/30 pairs scrambled; suite is vacuous");
        Ok(())
    };
    report(7, "scrambled pairs keep separating", run());
}

#[test]
fn criterion_8_oracle_equivalences() {
    let run = || -> Result<(), String> {
        // greedy never beats exact
        let flat = SpaceSpec::new(
            WeightFunction::constant(1.0).unwrap(),
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            10.0,
            0.01,
        )
        .map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        for trial in 0..20 {
            let size = rng.gen_range(3..13);
            let fam: Vec<GridFunction> = (0..size)
                .map(|_| {
                    let a = rng.gen_range(0.0..8.0);
                    flat.indicator(a, a + rng.gen_range(0.2..1.5), rng.gen_range(0.2..2.0))
                })
                .collect();
            let eps = rng.gen_range(0.05..1.0);
            let t = rng.gen_range(1..50) as f64 * 0.01;
            let q = SeparationQuery::new(&fam, t, eps, &flat).map_err(|e| e.to_string())?;
            let (exact, _) =
                max_separated(&q, &flat, SearchMode::Exact).map_err(|e| e.to_string())?;
            let (greedy, _) =
                max_separated(&q, &flat, SearchMode::Greedy).map_err(|e| e.to_string())?;
            check!(greedy <= exact, "trial {trial}: greedy {greedy} > exact {exact}");
        }

        // suffix-minimum ratio sweep against the quadratic brute force over
        // every ordered pair; both exponentiate a log gap, so the maxima
        // must agree exactly
        for trial in 0..10 {
            let v = random_tabulated(&mut rng, 2.0);
            let (x_max, step) = (2.0, 0.01); // 200 cells
            let fast = sup_ratio(&v, x_max, step).map_err(|e| e.to_string())?;
            let n = (x_max / step).round() as usize;
            let logs: Vec<f64> = (0..=n).map(|i| v.value(i as f64 * step).ln()).collect();
            let mut gap = f64::NEG_INFINITY;
            for i in 0..=n {
                for lv in &logs[i..] {
                    gap = gap.max(logs[i] - lv);
                }
            }
            let brute = gap.exp();
            check!(
                fast.value == brute,
                "trial {trial}: suffix-min {} vs brute {brute}",
                fast.value
            );
        }

        // norm quadrature against a 10x refined grid, on every witness kind
        let spike = certified(WeightFunction::spike_train(6.0, 6.0, 15).unwrap(), 100.0, 0.01);
        let cert = *spike.certificate().unwrap();
        let seq =
            find_escape_sequences(&spike, &cert, 4, 100.0, 0.01).map_err(|e| e.to_string())?;
        let mut witnesses: Vec<(SpaceSpec, GridFunction, &str)> = Vec::new();
        for p in [1.0, 2.0] {
            for repr in [Representation::PiecewiseConstant, Representation::PiecewiseLinear] {
                let spec = SpaceSpec::new(spike.clone(), Mode::Lp { p }, repr, 100.0, 0.01)
                    .map_err(|e| e.to_string())?;
                let f = build_nonvanishing_witness(&seq, &spec).map_err(|e| e.to_string())?;
                witnesses.push((spec.clone(), f, "nonvanishing"));
                let fam = build_separated_family(&seq, &[1, 2, 2, 3], 2, 17, &spec)
                    .map_err(|e| e.to_string())?;
                witnesses.push((spec, fam.members.last().unwrap().f.clone(), "family member"));
            }
        }
        let exp_spec = SpaceSpec::new(
            WeightFunction::integrable_exp(),
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            30.0,
            0.01,
        )
        .map_err(|e| e.to_string())?;
        let shape = exp_spec.indicator(0.0, 1.0, 1.0);
        let periodic =
            build_periodic_witness(&exp_spec, 2.0, &shape).map_err(|e| e.to_string())?;
        witnesses.push((exp_spec, periodic, "periodic"));
        let rat_spec = SpaceSpec::new(
            WeightFunction::rational_decay(),
            Mode::Lp { p: 1.0 },
            Representation::PiecewiseConstant,
            40.0,
            0.01,
        )
        .map_err(|e| e.to_string())?;
        let windowed =
            build_windowed_witness(&rat_spec, 1.0, 5).map_err(|e| e.to_string())?;
        witnesses.push((rat_spec, windowed.f, "windowed"));

        for (spec, f, kind) in &witnesses {
            let fine = SpaceSpec::new(
                spec.weight().clone(),
                spec.mode(),
                spec.representation(),
                spec.x_max(),
                spec.step() / 10.0,
            )
            .map_err(|e| e.to_string())?;
            let f_fine = fine.from_fn(|x| spec.value_at(f, x));
            let (coarse_norm, fine_norm) = (spec.norm(f), fine.norm(&f_fine));
            check!(
                (coarse_norm - fine_norm).abs() <= 0.01 * fine_norm,
                "{kind}: coarse {coarse_norm} vs refined {fine_norm}"
            );
        }
        Ok(())
    };
    report(8, "independent oracles agree", run());
}

#[test]
fn criterion_9_entropy_monotonicity() {
    let run = || -> Result<(), String> {
        let flat = SpaceSpec::new(
            WeightFunction::constant(1.0).unwrap(),
            Mode::Lp { p: 2.0 },
            Representation::PiecewiseConstant,
            10.0,
            0.01,
        )
        .map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        for trial in 0..20 {
            let size = rng.gen_range(4..9);
            let fam: Vec<GridFunction> = (0..size)
                .map(|_| {
                    let mut f = flat.zero();
                    for _ in 0..rng.gen_range(1..3) {
                        let a = rng.gen_range(0.0..8.0);
                        f = f.add(&flat.indicator(
                            a,
                            a + rng.gen_range(0.3..1.5),
                            rng.gen_range(0.2..2.0),
                        ));
                    }
                    f
                })
                .collect();
            let t_list = [0.1, 0.4, 1.0];
            let eps_list = [0.08, 0.3, 0.9];
            // s(t, eps) along both axes
            let mut counts = [[0usize; 3]; 3];
            for (ei, &eps) in eps_list.iter().enumerate() {
                for (ti, &t) in t_list.iter().enumerate() {
                    let q =
                        SeparationQuery::new(&fam, t, eps, &flat).map_err(|e| e.to_string())?;
                    let (c, _) = max_separated(&q, &flat, SearchMode::Exact)
                        .map_err(|e| e.to_string())?;
                    counts[ei][ti] = c;
                }
            }
            for ei in 0..3 {
                for ti in 1..3 {
                    check!(
                        counts[ei][ti] >= counts[ei][ti - 1],
                        "trial {trial}: count fell along t at eps index {ei}"
                    );
                }
            }
            for ti in 0..3 {
                for ei in 1..3 {
                    check!(
                        counts[ei][ti] <= counts[ei - 1][ti],
                        "trial {trial}: count rose along eps at t index {ti}"
                    );
                }
            }
            // coarsening the time grid cannot raise the count
            let eps = rng.gen_range(0.1..0.6);
            let fine = SeparationQuery::new(&fam, 1.0, eps, &flat).map_err(|e| e.to_string())?;
            let coarse_grid: Vec<f64> = (0..=4).map(|k| k as f64 * 0.25).collect();
            let coarse = SeparationQuery::with_time_grid(&fam, 1.0, eps, coarse_grid)
                .map_err(|e| e.to_string())?;
            let (fine_count, _) =
                max_separated(&fine, &flat, SearchMode::Exact).map_err(|e| e.to_string())?;
            let (coarse_count, _) =
                max_separated(&coarse, &flat, SearchMode::Exact).map_err(|e| e.to_string())?;
            check!(
                coarse_count <= fine_count,
                "trial {trial}: coarse {coarse_count} > fine {fine_count}"
            );
        }
        Ok(())
    };
    report(9, "separated counts are monotone", run());
}
