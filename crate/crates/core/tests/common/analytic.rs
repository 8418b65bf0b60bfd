//! Worked examples for every module, each checked against an exact value or
//! an independent oracle.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use isle::algorithms::{
    compass, de, mbh, multistart, nelder_mead, pso, sa_corana, sga, Algorithm, CompassParams, IhsParams,
    MbhParams, NelderMeadParams, PsoParams, SgaParams,
};
use isle::archipelago::{Archipelago, ArchipelagoSpec, Island, IslandSpec, ALGORITHM_STREAM};
use isle::migration::{
    apply_immigrants, select_emigrants, Batch, Mailbox, ReplacementPolicy, SelectionPolicy,
};
use isle::population::{random_individual, Individual};
use isle::problems;
use isle::rng::{mix_seed, Rng};
use isle::strategy::{
    multistart_campaign, prune_bounds, pruned_problem, pruning_cycles, run_seed, ChampionArchive, PruningParams,
};
use isle::topology::{self, Topology, TopologySpec};
use isle::{Bounds, Error, Population, Problem};

use super::{anchors, close, fixture, floats, fx, knapsack_fixture, median, ok, sign_test_p, Check};
use crate::ensure;

macro_rules! checks {
    ($($name:ident),* $(,)?) => {
        pub const CHECKS: &[(&str, Check)] = &[$((stringify!($name), $name as Check)),*];
    };
}

checks!(
    rosenbrock_at_ones,
    rastrigin2_at_origin,
    himmelblau_at_origin,
    random_individual_degenerate_bounds,
    random_individual_deterministic,
    random_individual_mean,
    population_size_zero,
    population_deterministic,
    population_in_bounds,
    champion_examples,
    rastrigin_values,
    rosenbrock_values,
    schwefel_values,
    griewank_values,
    branin_values,
    himmelblau_values,
    knapsack_penalty_rule,
    knapsack12_enumeration,
    de_mutant_arithmetic,
    de_full_crossover,
    de_rosenbrock_improves,
    sa_zero_temperature_is_greedy,
    sa_ties_always_accepted,
    sa_beats_random_search,
    pso_frozen_swarm,
    pso_velocity_reduces_to_inertia,
    pso_griewank_reduction,
    sga_identity_configuration,
    sga_tournament_prefers_fitter,
    sga_knapsack12,
    ihs_pure_recombination,
    ihs_bandwidth_endpoints,
    ihs_rastrigin,
    compass_stationary_at_minimizer,
    compass_first_poll,
    compass_rosenbrock_anchor,
    nelder_mead_1d_anchor,
    nelder_mead_reflection,
    nelder_mead_at_minimizer,
    mbh_single_trial,
    mbh_zero_perturbation,
    mbh_rastrigin,
    monte_carlo_zero_budget,
    monte_carlo_knapsack4,
    monte_carlo_monotone,
    multistart_single_start,
    multistart_identity_inner,
    multistart_himmelblau,
    ring_examples,
    fully_connected_examples,
    hypercube_examples,
    rim_examples,
    barabasi_albert_counts,
    barabasi_albert_heavy_tail,
    watts_strogatz_examples,
    erdos_renyi_extremes,
    erdos_renyi_statistics,
    custom_topology_examples,
    neighbor_examples,
    emigrant_selection,
    immigrant_replacement,
    mailbox_post_semantics,
    mailbox_drain_semantics,
    mailbox_concurrent_drain,
    push_back_examples,
    push_back_while_evolving,
    push_back_mismatched_problem,
    evolve_zero_iterations,
    single_island_matches_sequential_loop,
    join_examples,
    two_rounds_match_one,
    best_examples,
    best_while_evolving,
    reset_examples,
    snapshot_examples,
    campaign_examples,
    campaign_order_statistics,
    prune_degenerate_and_identity,
    prune_synthetic_top_decile,
    pruned_problem_examples,
    narrowed_rastrigin_sign_test,
    single_cycle_matches_campaign_and_prune,
    pruning_bounds_nested,
    pruning_griewank_three_cycles,
    cli_rim7,
    cli_unknown_algorithm,
    cli_lockstep_reproducible,
    cli_list,
    cli_export,
);

// ---------------------------------------------------------------- helpers

fn eval(p: &Problem, x: &[f64]) -> Result<f64, String> {
    ok(p.evaluate(x))
}

fn line(lo: f64, hi: f64) -> Problem {
    Problem::from_fn("line", Bounds::uniform(1, lo, hi).unwrap(), 0, |x| x[0]).unwrap()
}

fn bowl(dim: usize) -> Problem {
    Problem::from_fn("bowl", Bounds::uniform(dim, -1.0, 1.0).unwrap(), 0, |x| {
        x.iter().map(|v| v * v).sum()
    })
    .unwrap()
}

fn pop_of(p: &Problem, xs: &[&[f64]]) -> Population {
    Population::from_vectors(p, xs.iter().map(|x| x.to_vec()).collect()).unwrap()
}

fn line_pop(fs: &[f64]) -> Population {
    Population::from_vectors(&line(-100.0, 100.0), fs.iter().map(|&f| vec![f]).collect()).unwrap()
}

fn fixed_island(p: &Problem, values: &[f64]) -> Island {
    let pop = Population::from_vectors(p, values.iter().map(|&v| vec![v]).collect()).unwrap();
    Island::from_population(pop, Algorithm::Null, 0).unwrap()
}

fn run_alg(alg: &Algorithm, pop: &mut Population, seed: u64) -> Result<f64, String> {
    ok(alg.evolve(pop, &mut Rng::new(seed)))?;
    Ok(ok(pop.champion())?.f())
}

fn champion_f(pop: &Population) -> f64 {
    pop.champion().unwrap().f()
}

/// A problem on `[0,1]` whose objective sleeps for `ms` milliseconds.
fn sleepy_line(ms: u64) -> Problem {
    Problem::from_fn("sleepy", Bounds::uniform(1, 0.0, 1.0).unwrap(), 0, move |x| {
        std::thread::sleep(Duration::from_millis(ms));
        x[0]
    })
    .unwrap()
}

fn small_spec(topo: TopologySpec, islands: usize, gens: usize, size: usize) -> ArchipelagoSpec {
    let mut s = ArchipelagoSpec::new(topo, vec![IslandSpec::new(Algorithm::de(gens, 0.8, 0.9), size).times(islands)]);
    s.lockstep = true;
    s
}

// ---------------------------------------------------------------- core

fn rosenbrock_at_ones() -> Result<(), String> {
    let f = eval(&ok(problems::rosenbrock(2))?, &[1.0, 1.0])?;
    ensure!(f == 0.0, "rosenbrock(1,1) = {f}");
    Ok(())
}

fn rastrigin2_at_origin() -> Result<(), String> {
    let f = eval(&ok(problems::rastrigin(2))?, &[0.0, 0.0])?;
    ensure!(f == 0.0, "rastrigin(0,0) = {f}");
    Ok(())
}

fn himmelblau_at_origin() -> Result<(), String> {
    let f = eval(&ok(problems::himmelblau())?, &[0.0, 0.0])?;
    ensure!(f == 170.0, "himmelblau(0,0) = {f}");
    Ok(())
}

fn random_individual_degenerate_bounds() -> Result<(), String> {
    let b = ok(Bounds::new(vec![0.0, 5.0], vec![0.0, 5.0]))?;
    let p = ok(Problem::from_fn("fixed", b, 0, |x| x[0] + x[1]))?;
    let mut rng = Rng::new(3);
    for _ in 0..10 {
        let ind = ok(random_individual(&p, &mut rng))?;
        ensure!(ind.x() == [0.0, 5.0], "drew {:?}", ind.x());
    }
    Ok(())
}

fn random_individual_deterministic() -> Result<(), String> {
    let p = bowl(2);
    let a = ok(random_individual(&p, &mut Rng::new(11)))?;
    let b = ok(random_individual(&p, &mut Rng::new(11)))?;
    ensure!(a == b, "{a:?} != {b:?}");
    Ok(())
}

fn random_individual_mean() -> Result<(), String> {
    let p = line(0.0, 1.0);
    let mut rng = Rng::new(5);
    let mut sum = 0.0;
    for _ in 0..10_000 {
        sum += ok(random_individual(&p, &mut rng))?.x()[0];
    }
    let mean = sum / 10_000.0;
    ensure!(close(mean, 0.5, 0.02), "mean {mean}");
    Ok(())
}

fn population_size_zero() -> Result<(), String> {
    let pop = ok(Population::random(&bowl(2), 0, 1))?;
    ensure!(pop.is_empty(), "not empty");
    ensure!(matches!(pop.champion(), Err(Error::EmptyPopulation)), "champion of empty population");
    Ok(())
}

fn population_deterministic() -> Result<(), String> {
    let p = ok(problems::rastrigin(10))?;
    let a = ok(Population::random(&p, 20, 42))?;
    let b = ok(Population::random(&p, 20, 42))?;
    ensure!(a == b, "populations differ");
    Ok(())
}

fn population_in_bounds() -> Result<(), String> {
    let p = ok(problems::rastrigin(10))?;
    let pop = ok(Population::random(&p, 20, 42))?;
    ensure!(pop.len() == 20, "size {}", pop.len());
    for ind in pop.individuals() {
        ensure!(ind.x().iter().all(|v| (-5.12..=5.12).contains(v)), "out of box: {:?}", ind.x());
    }
    Ok(())
}

fn champion_examples() -> Result<(), String> {
    ensure!(line_pop(&[3.0, 1.0, 2.0]).champion_index() == Some(1), "[3,1,2]");
    ensure!(line_pop(&[1.0, 1.0]).champion_index() == Some(0), "tie");
    let single = line_pop(&[4.0]);
    ensure!(ok(single.champion())?.x() == [4.0], "single");
    Ok(())
}

// ---------------------------------------------------------------- problems

fn rastrigin_values() -> Result<(), String> {
    let p2 = ok(problems::rastrigin(2))?;
    ensure!(eval(&p2, &[0.0, 0.0])? == 0.0, "origin");
    let f = eval(&p2, &[1.0, 1.0])?;
    ensure!(close(f, 2.0, 1e-12), "(1,1) -> {f}");
    let f = eval(&ok(problems::rastrigin(1))?, &[0.5])?;
    ensure!(close(f, 20.25, 1e-12), "(0.5) -> {f}");
    Ok(())
}

fn rosenbrock_values() -> Result<(), String> {
    ensure!(eval(&ok(problems::rosenbrock(5))?, &[1.0; 5])? == 0.0, "ones");
    ensure!(eval(&ok(problems::rosenbrock(2))?, &[0.0, 0.0])? == 1.0, "origin");
    let f = eval(&ok(problems::rosenbrock(3))?, &[1.0, 2.0, 4.0])?;
    ensure!(f == 101.0, "(1,2,4) -> {f}");
    Ok(())
}

fn schwefel_values() -> Result<(), String> {
    let f = eval(&ok(problems::schwefel(2))?, &[0.0, 0.0])?;
    ensure!(f == 837.965_774_544_867_8, "origin -> {f}");
    let p1 = ok(problems::schwefel(1))?;
    let at = eval(&p1, &[420.9687])?;
    ensure!(at <= 1e-4, "f(420.9687) = {at}");
    ensure!(close(at, fx("schwefel_at_420_9687"), 1e-9), "oracle {}", fx("schwefel_at_420_9687"));
    // the grid-scan minimizer really is a minimizer of the Rust objective
    let xs = fx("schwefel_minimizer");
    let fmin = eval(&p1, &[xs])?;
    ensure!(fmin <= 1e-9, "f(x*) = {fmin}");
    ensure!(close(xs, 420.9687, 1e-4), "x* = {xs}");
    let neg = eval(&p1, &[-420.9687])?;
    ensure!(close(neg, 837.9659, 1e-3), "f(-420.9687) = {neg}");
    ensure!(close(neg, fx("schwefel_at_minus_420_9687"), 1e-9), "oracle mismatch {neg}");
    Ok(())
}

fn griewank_values() -> Result<(), String> {
    ensure!(eval(&ok(problems::griewank(4))?, &[0.0; 4])? == 0.0, "origin");
    let pi = std::f64::consts::PI;
    let f = eval(&ok(problems::griewank(1))?, &[pi])?;
    ensure!(close(f, pi * pi / 4000.0 + 2.0, 1e-12) && close(f, 2.002467, 1e-6), "(pi) -> {f}");
    let f = eval(&ok(problems::griewank(2))?, &[0.0, 600.0])?;
    ensure!(close(f, fx("griewank_0_600"), 1e-12), "(0,600) -> {f}");
    Ok(())
}

fn branin_values() -> Result<(), String> {
    let p = ok(problems::branin())?;
    let pi = std::f64::consts::PI;
    for (x, key) in [([pi, 2.275], "branin_pi_2_275"), ([-pi, 12.275], "branin_minus_pi_12_275")] {
        let f = eval(&p, &x)?;
        ensure!(close(f, 0.397887, 1e-6) && close(f, fx(key), 1e-12), "{x:?} -> {f}");
    }
    let f = eval(&p, &[0.0, 0.0])?;
    ensure!(close(f, 55.602113, 1e-6) && close(f, fx("branin_origin"), 1e-12), "origin -> {f}");
    Ok(())
}

fn himmelblau_values() -> Result<(), String> {
    let p = ok(problems::himmelblau())?;
    ensure!(eval(&p, &[3.0, 2.0])? == 0.0, "(3,2)");
    ensure!(eval(&p, &[0.0, 0.0])? == 170.0, "origin");
    let listed = [-2.805118, 3.131312];
    let f = eval(&p, &listed)?;
    ensure!(f <= 1e-8, "listed point -> {f}");
    // Newton-refined minimizer near the listed point
    let refined = floats(&fixture()["himmelblau_minimizers"][1]);
    ensure!(
        close(refined[0], listed[0], 1e-6) && close(refined[1], listed[1], 1e-6),
        "refined {refined:?}"
    );
    ensure!(eval(&p, &refined)? <= 1e-20, "refined point is not a minimizer");
    Ok(())
}

fn knapsack_penalty_rule() -> Result<(), String> {
    let fits = ok(problems::KnapsackInstance::new(vec![1.0, 1.0], vec![1.0, 1.0], 2.0))?;
    ensure!(eval(&ok(problems::knapsack(fits))?, &[1.0, 1.0])? == -2.0, "all fit");
    let over = ok(problems::KnapsackInstance::new(vec![1.0, 1.0], vec![2.0, 2.0], 3.0))?;
    ensure!(eval(&ok(problems::knapsack(over))?, &[1.0, 1.0])? == 1.0, "penalty");
    Ok(())
}

fn knapsack12_enumeration() -> Result<(), String> {
    let (p, optimum) = knapsack_fixture("knapsack12");
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << 12) {
        let x: Vec<f64> = (0..12).map(|i| (mask >> i & 1) as f64).collect();
        best = best.min(eval(&p, &x)?);
    }
    ensure!(best == -optimum, "enumeration {best} vs oracle {optimum}");
    let argmax = floats(&fixture()["knapsack12"]["argmax"]);
    ensure!(eval(&p, &argmax)? == -optimum, "oracle argmax");
    Ok(())
}

// ---------------------------------------------------------------- algorithms

fn de_mutant_arithmetic() -> Result<(), String> {
    let m = de::rand1_mutant(&[1.0, 1.0], &[2.0, 0.0], &[0.0, 0.0], 0.8);
    ensure!(close(m[0], 2.6, 1e-15) && m[1] == 1.0, "mutant {m:?}");
    Ok(())
}

fn de_full_crossover() -> Result<(), String> {
    let mut rng = Rng::new(9);
    for forced in 0..4 {
        let t = de::binomial_crossover(&[0.0; 4], &[1.0, 2.0, 3.0, 4.0], 1.0, forced, &mut rng);
        ensure!(t == [1.0, 2.0, 3.0, 4.0], "trial {t:?}");
    }
    Ok(())
}

fn de_rosenbrock_improves() -> Result<(), String> {
    let p = ok(problems::rosenbrock(10))?;
    let alg = Algorithm::de(500, 0.8, 0.9);
    let mut strict = 0;
    for seed in 0..100 {
        let mut pop = ok(Population::random(&p, 20, seed))?;
        let before = champion_f(&pop);
        let after = run_alg(&alg, &mut pop, seed)?;
        ensure!(after <= before, "seed {seed}: {after} > {before}");
        if after < before {
            strict += 1;
        } else if seed == 7 {
            return Err("seed 7 did not improve".into());
        }
    }
    ensure!(strict >= 99, "strict improvement in {strict}/100");
    Ok(())
}

fn sa_zero_temperature_is_greedy() -> Result<(), String> {
    let mut rng = Rng::new(1);
    for k in 0..10_000 {
        let delta = 1e-9 * (1 + k % 7) as f64;
        ensure!(!sa_corana::metropolis(delta, 1e-300, &mut rng), "accepted a worsening at T->0");
    }
    Ok(())
}

fn sa_ties_always_accepted() -> Result<(), String> {
    let mut rng = Rng::new(2);
    for t in [1e-300, 1e-3, 1.0, 1e6] {
        for _ in 0..1000 {
            ensure!(sa_corana::metropolis(0.0, t, &mut rng), "tie rejected at T={t}");
        }
    }
    Ok(())
}

fn sa_beats_random_search() -> Result<(), String> {
    let p = ok(problems::rastrigin(4))?;
    let (mut sa, mut rs) = (Vec::new(), Vec::new());
    for seed in 0..50 {
        let mut pop = ok(Population::random(&p, 1, seed))?;
        sa.push(run_alg(&Algorithm::sa_corana(10_000, 1.0, 0.01), &mut pop, seed + 1000)?);
        let mut pop = ok(Population::random(&p, 1, seed))?;
        rs.push(run_alg(&Algorithm::monte_carlo(10_000), &mut pop, seed + 1000)?);
    }
    let (ms, mr) = (median(sa), median(rs));
    ensure!(ms < mr, "SA median {ms} vs random {mr}");
    Ok(())
}

fn pso_frozen_swarm() -> Result<(), String> {
    let p = ok(problems::griewank(3))?;
    let mut params = PsoParams::new(20);
    params.inertia = 0.0;
    params.cognitive = 0.0;
    params.social = 0.0;
    let mut pop = ok(Population::random(&p, 8, 4))?;
    let before = pop.clone();
    ok(Algorithm::Pso(params).evolve(&mut pop, &mut Rng::new(4)))?;
    ensure!(pop == before, "swarm moved");
    Ok(())
}

fn pso_velocity_reduces_to_inertia() -> Result<(), String> {
    let p = PsoParams::new(1);
    for (v, u1, u2) in [(0.3, 0.1, 0.9), (-2.0, 0.5, 0.5), (0.0, 1.0, 0.0)] {
        let got = pso::velocity(&p, v, 1.5, 1.5, 1.5, u1, u2);
        ensure!(got == p.inertia * v, "v={v} -> {got}");
    }
    Ok(())
}

fn pso_griewank_reduction() -> Result<(), String> {
    let p = ok(problems::griewank(10))?;
    let (mut initial, mut fin) = (Vec::new(), Vec::new());
    for seed in 0..50 {
        let mut pop = ok(Population::random(&p, 30, seed))?;
        initial.push(champion_f(&pop));
        fin.push(run_alg(&Algorithm::Pso(PsoParams::new(200)), &mut pop, seed + 1000)?);
    }
    let (mi, mf) = (median(initial), median(fin));
    ensure!(mf <= 0.1 * mi, "median final {mf} vs initial {mi}");
    Ok(())
}

fn sga_identity_configuration() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let mut params = SgaParams::new(10);
    params.mutation_prob = 0.0;
    params.crossover_prob = 0.0;
    params.elitism_count = 12;
    let mut pop = ok(Population::random(&p, 12, 8))?;
    let before = pop.clone();
    ok(Algorithm::Sga(params).evolve(&mut pop, &mut Rng::new(8)))?;
    ensure!(pop == before, "population changed");
    Ok(())
}

fn sga_tournament_prefers_fitter() -> Result<(), String> {
    let fitness = [1.0, 5.0];
    let mut both = 0;
    for seed in 0..200 {
        let mut probe = Rng::new(seed);
        let draws = (probe.below(2), probe.below(2));
        let winner = sga::tournament(&fitness, 2, &mut Rng::new(seed));
        if draws.0 != draws.1 {
            both += 1;
            ensure!(winner == 0, "seed {seed}: f=5 beat f=1");
        }
    }
    ensure!(both > 50, "only {both} tournaments drew both");
    Ok(())
}

fn sga_knapsack12() -> Result<(), String> {
    let (p, optimum) = knapsack_fixture("knapsack12");
    let mut hits = 0;
    for seed in 0..50 {
        let mut pop = ok(Population::random(&p, 50, seed))?;
        // one expected bit flip per child
        let mut params = SgaParams::new(100);
        params.mutation_prob = 1.0 / 12.0;
        let f = run_alg(&Algorithm::Sga(params), &mut pop, seed)?;
        ensure!(f >= -optimum, "seed {seed}: {f} beats the oracle {optimum}");
        if f == -optimum {
            hits += 1;
        }
    }
    ensure!(hits >= 45, "optimum in {hits}/50 seeds");
    Ok(())
}

fn ihs_pure_recombination() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let mut params = IhsParams::new(300);
    params.hmcr = 1.0 - f64::EPSILON;
    params.par_min = f64::MIN_POSITIVE;
    params.par_max = f64::MIN_POSITIVE;
    let mut pop = ok(Population::random(&p, 6, 3))?;
    let seen: Vec<BTreeSet<u64>> = (0..3)
        .map(|j| pop.individuals().iter().map(|ind| ind.x()[j].to_bits()).collect())
        .collect();
    ok(Algorithm::Ihs(params).evolve(&mut pop, &mut Rng::new(3)))?;
    for ind in pop.individuals() {
        for (j, v) in ind.x().iter().enumerate() {
            ensure!(seen[j].contains(&v.to_bits()), "coordinate {j} = {v} not from memory");
        }
    }
    Ok(())
}

fn ihs_bandwidth_endpoints() -> Result<(), String> {
    let p = IhsParams::new(1000);
    let (par0, bw0) = isle::algorithms::ihs::schedule(&p, 0, 1000);
    let (par1, bw1) = isle::algorithms::ihs::schedule(&p, 1000, 1000);
    ensure!(bw0 == p.bw_max && par0 == p.par_min, "start ({par0}, {bw0})");
    ensure!(close(bw1, p.bw_min, 1e-15) && close(par1, p.par_max, 1e-15), "end ({par1}, {bw1})");
    Ok(())
}

fn ihs_rastrigin() -> Result<(), String> {
    let p = ok(problems::rastrigin(5))?;
    let (mut ihs, mut rs) = (Vec::new(), Vec::new());
    for seed in 0..30 {
        let mut pop = ok(Population::random(&p, 20, seed))?;
        ihs.push(run_alg(&Algorithm::Ihs(IhsParams::new(20_000)), &mut pop, seed + 1000)?);
        let mut pop = ok(Population::random(&p, 1, seed))?;
        rs.push(run_alg(&Algorithm::monte_carlo(20_000), &mut pop, seed + 1000)?);
    }
    let (mi, mr) = (median(ihs), median(rs));
    ensure!(mi < 1.0, "IHS median {mi}");
    ensure!(mr >= 10.0 * mi, "random median {mr} not 10x IHS median {mi}");
    Ok(())
}

fn compass_stationary_at_minimizer() -> Result<(), String> {
    let p = bowl(2).with_fresh_counter();
    let start = ok(Individual::evaluate(&p, vec![0.0, 0.0]))?;
    let params = CompassParams::new(100_000);
    let end = ok(compass::search(&params, &p, start.clone()))?;
    ensure!(end == start, "moved to {:?}", end.x());
    // 0.3 / 2^12 < 1e-4 <= 0.3 / 2^11: twelve unsuccessful polls of four points
    ensure!(p.evaluations() == 1 + 48, "evaluations {}", p.evaluations());
    Ok(())
}

fn compass_first_poll() -> Result<(), String> {
    let log = Arc::new(Mutex::new(Vec::new()));
    let sink = Arc::clone(&log);
    let p = ok(Problem::from_fn("sq", Bounds::uniform(1, -1.0, 1.0).unwrap(), 0, move |x| {
        sink.lock().unwrap().push(x[0]);
        x[0] * x[0]
    }))?;
    let start = ok(Individual::evaluate(&p, vec![0.5]))?;
    log.lock().unwrap().clear();
    let mut params = CompassParams::new(2);
    params.start_step = 0.3;
    let end = ok(compass::search(&params, &p, start))?;
    let seen = log.lock().unwrap().clone();
    ensure!(seen.len() == 2 && seen[0] == 1.0 && close(seen[1], -0.1, 1e-15), "polled {seen:?}");
    ensure!(close(end.x()[0], -0.1, 1e-15) && close(end.f(), 0.01, 1e-15), "accepted {:?}", end.x());
    Ok(())
}

fn compass_rosenbrock_anchor() -> Result<(), String> {
    let p = ok(problems::rosenbrock(2))?;
    let mut pop = pop_of(&p, &[&[-1.2, 1.0]]);
    let f = run_alg(&Algorithm::compass(100_000), &mut pop, 0)?;
    ensure!(f < 1e-2, "final f {f}");
    let anchor = anchors()["compass_rosenbrock2"].as_f64().ok_or("missing anchor")?;
    ensure!(f == anchor, "final f {f:e} differs from anchor {anchor:e}");
    Ok(())
}

fn nelder_mead_1d_anchor() -> Result<(), String> {
    let p = ok(Problem::from_fn("shifted", Bounds::uniform(1, 0.0, 5.0).unwrap(), 0, |x| {
        (x[0] - 2.0).powi(2)
    }))?;
    let start = ok(Individual::evaluate(&p, vec![0.0]))?;
    let params = NelderMeadParams {
        iterations: 200,
        tolerance: 1e-9,
    };
    let end = ok(nelder_mead::search(&params, &p, start))?;
    let x = end.x()[0];
    ensure!((x - 2.0).abs() < 1e-4, "x = {x}");
    let anchor = anchors()["nelder_mead_shifted_square_x"].as_f64().ok_or("missing anchor")?;
    ensure!(x == anchor, "x = {x:e} differs from anchor {anchor:e}");
    Ok(())
}

fn nelder_mead_reflection() -> Result<(), String> {
    let p = ok(Problem::from_fn("sq", Bounds::uniform(2, -2.0, 2.0).unwrap(), 0, |x| {
        x[0] * x[0] + x[1] * x[1]
    }))?;
    let mut s = ok(nelder_mead::Simplex::from_points(
        &p,
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
    ))?;
    let mv = ok(s.step())?;
    ensure!(mv == nelder_mead::Move::Reflect, "move {mv:?}");
    ensure!(s.best().x() == [0.0, 0.0] && s.best().f() == 0.0, "best {:?}", s.best().x());
    ensure!(!s.vertices().iter().any(|v| v.x() == [1.0, 1.0]), "worst vertex kept");
    Ok(())
}

fn nelder_mead_at_minimizer() -> Result<(), String> {
    let p = bowl(2);
    let mut pop = pop_of(&p, &[&[0.0, 0.0]]);
    for _ in 0..3 {
        let f = run_alg(&Algorithm::nelder_mead(50, 1e-8), &mut pop, 0)?;
        ensure!(f == 0.0, "champion rose to {f}");
    }
    ensure!(ok(pop.champion())?.x() == [0.0, 0.0], "champion moved");
    Ok(())
}

fn mbh_single_trial() -> Result<(), String> {
    let p = bowl(2);
    let mut params = MbhParams::new(Algorithm::Null);
    params.stop_after = 1;
    let mut pop = ok(Population::random(&p, 1, 2))?;
    let before = champion_f(&pop);
    let trials = ok(mbh::run(&params, &mut pop, &mut Rng::new(2)))?;
    // the single trial can only succeed by luck; then a second (failing) trial must follow
    if champion_f(&pop) == before {
        ensure!(trials == 1, "{trials} trials");
    }
    let mut params = MbhParams::new(Algorithm::Null);
    params.stop_after = 1;
    params.perturbation = 0.0;
    let trials = ok(mbh::run(&params, &mut pop, &mut Rng::new(3)))?;
    ensure!(trials == 1, "{trials} trials with a fixed point");
    Ok(())
}

fn mbh_zero_perturbation() -> Result<(), String> {
    let p = ok(problems::rastrigin(2))?;
    let mut params = MbhParams::new(Algorithm::Null);
    params.perturbation = 0.0;
    params.stop_after = 7;
    let mut pop = ok(Population::random(&p, 3, 1))?;
    let before = pop.clone();
    let trials = ok(mbh::run(&params, &mut pop, &mut Rng::new(1)))?;
    ensure!(trials == 7, "{trials} trials");
    ensure!(pop == before, "population changed");
    Ok(())
}

fn mbh_rastrigin() -> Result<(), String> {
    let p = ok(problems::rastrigin(2))?;
    let mut inner = CompassParams::new(10_000);
    inner.stop_step = 1e-8;
    let mut params = MbhParams::new(Algorithm::Compass(inner));
    params.stop_after = 50;
    params.perturbation = 0.1;
    let alg = Algorithm::Mbh(params);
    let mut solved = 0;
    for seed in 0..30 {
        let mut pop = ok(Population::random(&p, 1, seed))?;
        let f = run_alg(&alg, &mut pop, seed)?;
        ensure!(f >= 0.0, "negative rastrigin {f}");
        if f < 1e-6 {
            solved += 1;
        }
    }
    ensure!(solved >= 27, "solved {solved}/30");
    Ok(())
}

fn monte_carlo_zero_budget() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let mut pop = ok(Population::random(&p, 4, 6))?;
    let before = pop.clone();
    run_alg(&Algorithm::monte_carlo(0), &mut pop, 6)?;
    ensure!(pop == before, "population changed");
    Ok(())
}

fn monte_carlo_knapsack4() -> Result<(), String> {
    let (p, optimum) = knapsack_fixture("knapsack4");
    for seed in 0..10 {
        let mut pop = ok(Population::random(&p, 1, seed))?;
        let f = run_alg(&Algorithm::monte_carlo(1000), &mut pop, seed)?;
        ensure!(f == -optimum, "seed {seed}: {f} vs optimum {optimum}");
    }
    Ok(())
}

fn monte_carlo_monotone() -> Result<(), String> {
    let p = ok(problems::griewank(4))?;
    let mut pop = ok(Population::random(&p, 3, 2))?;
    let mut rng = Rng::new(2);
    let mut last = champion_f(&pop);
    for _ in 0..20 {
        ok(Algorithm::monte_carlo(25).evolve(&mut pop, &mut rng))?;
        let f = champion_f(&pop);
        ensure!(f <= last, "champion rose {last} -> {f}");
        last = f;
    }
    Ok(())
}

fn multistart_single_start() -> Result<(), String> {
    let p = ok(problems::rosenbrock(3))?;
    let inner = Algorithm::de(20, 0.8, 0.9);
    let mut pop = ok(Population::random(&p, 10, 1))?;
    let champs = ok(multistart::evolve(&inner, 1, &mut pop, &mut Rng::new(77)))?;

    let mut rng = Rng::new(77);
    let drawn = (0..10)
        .map(|_| random_individual(&p, &mut rng))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut reference = ok(Population::from_individuals(&p, drawn))?;
    ok(inner.evolve(&mut reference, &mut rng))?;
    ensure!(champs.len() == 1, "{} champions", champs.len());
    ensure!(&champs[0] == ok(reference.champion())?, "single start differs from one inner run");
    Ok(())
}

fn multistart_identity_inner() -> Result<(), String> {
    let p = ok(problems::rastrigin(2))?;
    let mut pop = ok(Population::random(&p, 1, 5))?;
    let start = champion_f(&pop);
    ok(multistart::evolve(&Algorithm::Null, 30, &mut pop, &mut Rng::new(12)))?;
    let mut rng = Rng::new(12);
    let mut best = start;
    for _ in 0..30 {
        best = best.min(ok(random_individual(&p, &mut rng))?.f());
    }
    ensure!(champion_f(&pop) == best, "{} vs best draw {best}", champion_f(&pop));
    Ok(())
}

fn multistart_himmelblau() -> Result<(), String> {
    let p = ok(problems::himmelblau())?;
    let minima: Vec<Vec<f64>> = (0..4)
        .map(|k| floats(&fixture()["himmelblau_minimizers"][k]))
        .collect();
    let inner = Algorithm::nelder_mead(200, 1e-6);
    let mut good = 0;
    for seed in 0..20 {
        let mut pop = ok(Population::random(&p, 1, seed))?;
        let champs = ok(multistart::evolve(&inner, 20, &mut pop, &mut Rng::new(seed)))?;
        let found = minima
            .iter()
            .filter(|m| {
                champs
                    .iter()
                    .any(|c| close(c.x()[0], m[0], 1e-2) && close(c.x()[1], m[1], 1e-2))
            })
            .count();
        if found >= 3 {
            good += 1;
        }
    }
    ensure!(good >= 18, "at least 3 minimizers in {good}/20 seeds");
    Ok(())
}

// ---------------------------------------------------------------- topology

fn edge_set(t: &Topology) -> BTreeSet<(usize, usize)> {
    t.edges().collect()
}

fn ring_examples() -> Result<(), String> {
    let r = topology::ring(4);
    ensure!(r.edge_count() == 8 && (0..4).all(|i| r.out_degree(i) == 2), "ring(4)");
    ensure!(topology::ring(1).edge_count() == 0, "ring(1)");
    ensure!(edge_set(&topology::ring(2)) == BTreeSet::from([(0, 1), (1, 0)]), "ring(2)");
    Ok(())
}

fn fully_connected_examples() -> Result<(), String> {
    ensure!(topology::fully_connected(3).edge_count() == 6, "fc(3)");
    ensure!(topology::fully_connected(1).edge_count() == 0, "fc(1)");
    let t = topology::fully_connected(5);
    ensure!((0..5).all(|i| t.in_degree(i) == 4 && t.out_degree(i) == 4), "fc(5) degrees");
    Ok(())
}

fn hypercube_examples() -> Result<(), String> {
    let h = topology::hypercube(8);
    ensure!(h.edge_count() == 24 && (0..8).all(|i| h.out_degree(i) == 3), "hypercube(8)");
    ensure!(edge_set(&topology::hypercube(2)) == BTreeSet::from([(0, 1), (1, 0)]), "hypercube(2)");
    let h5 = topology::hypercube(5);
    ensure!(ok(h5.neighbors_out(4))? == vec![0] && h5.in_degree(4) == 1, "hypercube(5) node 4");
    Ok(())
}

fn rim_examples() -> Result<(), String> {
    ensure!(topology::rim(7).edge_count() == 24, "rim(7) = {}", topology::rim(7).edge_count());
    let r3 = topology::rim(3);
    ensure!(
        edge_set(&r3) == BTreeSet::from([(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]),
        "rim(3) = {:?}",
        edge_set(&r3)
    );
    ensure!(topology::rim(1).edge_count() == 0, "rim(1)");
    Ok(())
}

fn barabasi_albert_counts() -> Result<(), String> {
    for m in 1..5 {
        let t = ok(topology::barabasi_albert(m + 1, m, 3))?;
        ensure!(edge_set(&t) == edge_set(&topology::fully_connected(m + 1)), "n=m+1={}", m + 1);
    }
    for seed in 0..10 {
        let t = ok(topology::barabasi_albert(10, 2, seed))?;
        ensure!(t.edge_count() == 34, "BA(10,2) seed {seed}: {}", t.edge_count());
    }
    Ok(())
}

fn barabasi_albert_heavy_tail() -> Result<(), String> {
    let mut ratio = 0.0;
    for seed in 0..100 {
        let t = ok(topology::barabasi_albert(200, 3, seed))?;
        let degrees: Vec<f64> = (0..200).map(|i| t.out_degree(i) as f64).collect();
        let max = degrees.iter().cloned().fold(0.0, f64::max);
        ratio += max / median(degrees);
    }
    ratio /= 100.0;
    ensure!(ratio >= 3.0, "mean max/median degree {ratio}");
    Ok(())
}

fn watts_strogatz_examples() -> Result<(), String> {
    let t = ok(topology::watts_strogatz(10, 4, 0.0, 1))?;
    ensure!((0..10).all(|i| t.out_degree(i) == 4), "lattice degrees");
    let t = ok(topology::watts_strogatz(6, 2, 0.0, 1))?;
    ensure!(edge_set(&t) == edge_set(&topology::ring(6)), "WS(6,2,0) != ring(6)");
    for seed in 0..5 {
        let t = ok(topology::watts_strogatz(100, 4, 1.0, seed))?;
        ensure!(t.is_symmetric() && t.edge_count() == 400, "WS(100,4,1) undirected {}", t.edge_count() / 2);
    }
    Ok(())
}

fn erdos_renyi_extremes() -> Result<(), String> {
    ensure!(ok(topology::erdos_renyi(9, 1.0, 1))?.edge_count() == 72, "p=1");
    ensure!(ok(topology::erdos_renyi(9, 0.0, 1))?.edge_count() == 0, "p=0");
    Ok(())
}

fn erdos_renyi_statistics() -> Result<(), String> {
    let mut total = 0.0;
    for seed in 0..100 {
        let t = ok(topology::erdos_renyi(100, 0.1, seed))?;
        ensure!(t.is_symmetric(), "asymmetric");
        total += (t.edge_count() / 2) as f64;
    }
    let mean = total / 100.0;
    let sigma = (4950.0f64 * 0.1 * 0.9).sqrt();
    ensure!((mean - 495.0).abs() <= 3.0 * sigma, "mean undirected edges {mean}");
    Ok(())
}

fn custom_topology_examples() -> Result<(), String> {
    let mut t = Topology::custom(0);
    for _ in 0..3 {
        t.add_node();
    }
    ok(t.add_edge(0, 1))?;
    ensure!(t.node_count() == 3 && t.edge_count() == 1, "3 nodes, 1 edge");
    ensure!(t.add_edge(0, 0).is_err(), "self loop accepted");
    ok(t.add_edge(0, 1))?;
    ensure!(t.edge_count() == 1, "duplicate edge added");
    Ok(())
}

fn neighbor_examples() -> Result<(), String> {
    ensure!(ok(topology::ring(4).neighbors_out(0))? == vec![1, 3], "ring(4) node 0");
    ensure!(ok(topology::fully_connected(3).neighbors_out(1))? == vec![0, 2], "fc(3) node 1");
    ensure!(ok(Topology::custom(3).neighbors_out(2))?.is_empty(), "edgeless");
    Ok(())
}

// ---------------------------------------------------------------- migration

fn fs(inds: &[Individual]) -> Vec<f64> {
    inds.iter().map(Individual::f).collect()
}

fn emigrant_selection() -> Result<(), String> {
    let p = line_pop(&[3.0, 1.0, 2.0]);
    ensure!(fs(&select_emigrants(&p, SelectionPolicy::Best, 1)) == [1.0], "rate 1");
    ensure!(fs(&select_emigrants(&p, SelectionPolicy::Best, 5)) == [1.0, 2.0, 3.0], "rate 5");
    ensure!(select_emigrants(&p, SelectionPolicy::Best, 0).is_empty(), "rate 0");
    Ok(())
}

fn immigrant_replacement() -> Result<(), String> {
    let mut rng = Rng::new(0);
    for (incoming, policy, expect) in [
        (7.0, ReplacementPolicy::ConditionalWorst, [1.0, 5.0, 7.0]),
        (12.0, ReplacementPolicy::ConditionalWorst, [1.0, 5.0, 9.0]),
        (12.0, ReplacementPolicy::UnconditionalWorst, [1.0, 5.0, 12.0]),
    ] {
        let mut pop = line_pop(&[1.0, 5.0, 9.0]);
        let imm = line_pop(&[incoming]).individuals().to_vec();
        ok(apply_immigrants(&mut pop, &imm, policy, 1.0, &mut rng))?;
        ensure!(pop.fitnesses() == expect, "{incoming} {policy:?} -> {:?}", pop.fitnesses());
    }
    Ok(())
}

fn batch(fs: &[f64]) -> Batch {
    Batch {
        origin_iteration: 0,
        individuals: line_pop(fs).individuals().to_vec(),
    }
}

fn mailbox_post_semantics() -> Result<(), String> {
    let m = Mailbox::new();
    m.post(0, batch(&[1.0]));
    m.post(0, batch(&[2.0]));
    let d = m.drain();
    ensure!(d.len() == 1 && fs(&d[0].1.individuals) == [2.0], "overwrite");
    m.post(0, batch(&[1.0]));
    m.post(1, batch(&[2.0]));
    ensure!(m.drain().len() == 2, "two sources");
    m.post(2, batch(&[]));
    let d = m.drain();
    ensure!(d.len() == 1 && d[0].0 == 2 && d[0].1.individuals.is_empty(), "empty batch");
    let mut pop = line_pop(&[1.0]);
    let acc = ok(apply_immigrants(&mut pop, &[], ReplacementPolicy::UnconditionalWorst, 1.0, &mut Rng::new(0)))?;
    ensure!(!acc && pop.fitnesses() == [1.0], "empty batch changed the population");
    Ok(())
}

fn mailbox_drain_semantics() -> Result<(), String> {
    let m = Mailbox::new();
    ensure!(m.drain().is_empty(), "empty inbox");
    m.post(4, batch(&[1.0]));
    ensure!(m.drain().len() == 1, "first drain");
    ensure!(m.drain().is_empty(), "second drain");
    Ok(())
}

fn mailbox_concurrent_drain() -> Result<(), String> {
    let m = Mailbox::new();
    let posted = 5000usize;
    let mut seen = Vec::new();
    std::thread::scope(|s| {
        let poster = s.spawn(|| {
            for k in 0..posted {
                m.post(k, batch(&[1.0]));
            }
        });
        while !poster.is_finished() {
            seen.extend(m.drain().into_iter().map(|(src, _)| src));
        }
    });
    seen.extend(m.drain().into_iter().map(|(src, _)| src));
    seen.sort_unstable();
    ensure!(seen == (0..posted).collect::<Vec<_>>(), "lost or duplicated batches");
    Ok(())
}

// ---------------------------------------------------------------- archipelago

fn push_back_examples() -> Result<(), String> {
    let mut a = Archipelago::new(TopologySpec::Ring);
    let i = ok(a.push_back(fixed_island(&line(0.0, 10.0), &[1.0])))?;
    ensure!(i == 0 && a.len() == 1, "index {i}, len {}", a.len());
    ensure!(ok(a.island(0))?.index() == Some(0), "island index");
    Ok(())
}

fn push_back_while_evolving() -> Result<(), String> {
    let p = sleepy_line(5);
    let mut a = Archipelago::new(TopologySpec::Ring);
    ok(a.push_back(ok(Island::new(&p, Algorithm::monte_carlo(2), 1, 0))?))?;
    ok(a.evolve(3))?;
    let e = a.push_back(ok(Island::new(&p, Algorithm::Null, 1, 1))?);
    ok(a.join())?;
    ensure!(matches!(e, Err(Error::Evolving)), "push during evolve gave {e:?}");
    Ok(())
}

fn push_back_mismatched_problem() -> Result<(), String> {
    let mut a = Archipelago::new(TopologySpec::Ring);
    ok(a.push_back(ok(Island::new(&bowl(2), Algorithm::Null, 1, 0))?))?;
    let e = a.push_back(ok(Island::new(&bowl(3), Algorithm::Null, 1, 0))?);
    ensure!(matches!(e, Err(Error::ProblemMismatch(_))), "got {e:?}");
    Ok(())
}

fn evolve_zero_iterations() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let mut a = ok(small_spec(TopologySpec::Ring, 3, 2, 6).build(&p, 4))?;
    let before: Vec<Population> = ok(a.islands())?.iter().map(|i| i.population().clone()).collect();
    ok(a.evolve(0))?;
    ok(a.join())?;
    ensure!(!a.is_evolving(), "still evolving");
    let after: Vec<Population> = ok(a.islands())?.iter().map(|i| i.population().clone()).collect();
    ensure!(before == after, "populations changed");
    Ok(())
}

fn single_island_matches_sequential_loop() -> Result<(), String> {
    let p = ok(problems::rosenbrock(4))?;
    let alg = Algorithm::de(7, 0.8, 0.9);
    let seed = 31;
    let mut a = Archipelago::new(TopologySpec::Unconnected);
    ok(a.push_back(ok(Island::new(&p, alg.clone(), 10, seed))?))?;
    ok(a.evolve(6))?;
    ok(a.join())?;

    let mut pop = ok(Population::random(&p, 10, seed))?;
    let mut rng = Rng::stream(seed, ALGORITHM_STREAM);
    for _ in 0..6 {
        ok(alg.evolve(&mut pop, &mut rng))?;
    }
    ensure!(ok(a.island(0))?.population() == &pop, "archipelago run differs from the loop");
    Ok(())
}

fn join_examples() -> Result<(), String> {
    let p = ok(problems::rastrigin(2))?;
    let mut a = ok(small_spec(TopologySpec::Ring, 3, 1, 5).build(&p, 0))?;
    ok(a.join())?;
    ok(a.evolve(4))?;
    ok(a.join())?;
    ensure!(!a.is_evolving(), "still evolving");
    ensure!(ok(a.islands())?.iter().all(|i| i.iterations() == 4), "iteration counters");
    Ok(())
}

fn two_rounds_match_one() -> Result<(), String> {
    let p = ok(problems::rastrigin(4))?;
    let spec = small_spec(TopologySpec::Ring, 4, 3, 6);
    let mut a = ok(spec.build(&p, 17))?;
    ok(a.evolve(10))?;
    ok(a.join())?;
    ok(a.evolve(10))?;
    ok(a.join())?;
    let mut b = ok(spec.build(&p, 17))?;
    ok(b.evolve(20))?;
    ok(b.join())?;
    let pa: Vec<&Population> = ok(a.islands())?.iter().map(Island::population).collect();
    let pb: Vec<&Population> = ok(b.islands())?.iter().map(Island::population).collect();
    ensure!(pa == pb, "10+10 differs from 20");
    ensure!(ok(a.islands())?.iter().all(|i| i.iterations() == 20), "iteration counters");
    Ok(())
}

fn best_examples() -> Result<(), String> {
    let p = line(0.0, 10.0);
    let mut a = Archipelago::new(TopologySpec::Ring);
    for v in [2.0, 1.0, 3.0] {
        ok(a.push_back(fixed_island(&p, &[v])))?;
    }
    let (i, b) = ok(a.best_with_island())?;
    ensure!(i == 1 && b.f() == 1.0, "best from island {i}");
    let mut single = Archipelago::new(TopologySpec::Ring);
    ok(single.push_back(fixed_island(&p, &[4.0, 6.0])))?;
    ensure!(ok(single.best())?.f() == 4.0, "single island");
    Ok(())
}

fn best_while_evolving() -> Result<(), String> {
    let mut a = Archipelago::new(TopologySpec::Ring);
    ok(a.push_back(ok(Island::new(&sleepy_line(5), Algorithm::monte_carlo(2), 1, 0))?))?;
    ok(a.evolve(3))?;
    let e = a.best();
    ok(a.join())?;
    ensure!(matches!(e, Err(Error::Evolving)), "got {e:?}");
    Ok(())
}

fn reset_examples() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let spec = ArchipelagoSpec::new(
        TopologySpec::Ring,
        vec![
            IslandSpec::new(Algorithm::compass(50), 1),
            IslandSpec::new(Algorithm::de(2, 0.8, 0.9), 20),
            IslandSpec::new(Algorithm::compass(50), 1),
        ],
    );
    let mut a = ok(spec.build(&p, 1))?;
    ok(a.evolve(1))?;
    ok(a.join())?;
    ensure!((0..3).any(|i| a.pending_migrants(i) > 0), "no migrants in flight");
    ok(a.reset(9))?;
    ensure!((0..3).all(|i| a.pending_migrants(i) == 0), "mailboxes not cleared");
    let sizes: Vec<usize> = ok(a.islands())?.iter().map(|i| i.population().len()).collect();
    ensure!(sizes == [1, 20, 1], "sizes {sizes:?}");
    let first: Vec<Population> = ok(a.islands())?.iter().map(|i| i.population().clone()).collect();
    ok(a.reset(9))?;
    let second: Vec<Population> = ok(a.islands())?.iter().map(|i| i.population().clone()).collect();
    ensure!(first == second, "reset is not deterministic");
    Ok(())
}

fn snapshot_examples() -> Result<(), String> {
    ensure!(Archipelago::new(TopologySpec::Ring).snapshot().is_empty(), "empty archipelago");
    let p = ok(problems::rastrigin(3))?;
    let mut a = ok(ArchipelagoSpec::new(
        TopologySpec::Ring,
        vec![IslandSpec::new(Algorithm::de(200, 0.8, 0.9), 10).times(3)],
    )
    .build(&p, 2))?;
    let idle = a.snapshot();
    for (s, island) in idle.iter().zip(ok(a.islands())?) {
        ensure!(s.champion_f == Some(ok(island.champion())?.f()), "idle snapshot of island {}", s.island);
        ensure!(s.evaluations == island.evaluations(), "idle evaluations");
    }
    ok(a.evolve(30))?;
    let during = a.snapshot();
    ok(a.join())?;
    let fin = a.snapshot();
    for (d, f) in during.iter().zip(&fin) {
        ensure!(d.champion_f >= f.champion_f, "island {}: {:?} < final {:?}", d.island, d.champion_f, f.champion_f);
    }
    Ok(())
}

// ---------------------------------------------------------------- strategy

fn campaign_examples() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let spec = small_spec(TopologySpec::Ring, 3, 3, 6);
    let mut a = ok(spec.build(&p, 0))?;
    ensure!(ok(multistart_campaign(&mut a, 0, 2, 5))?.is_empty(), "runs=0");
    let archive = ok(multistart_campaign(&mut a, 1, 2, 5))?;
    let mut b = ok(spec.build(&p, 0))?;
    ok(b.reset(run_seed(5, 0)))?;
    ok(b.evolve(2))?;
    ok(b.join())?;
    let best = ok(b.best())?;
    ensure!(archive.len() == 1, "{} entries", archive.len());
    let e = &archive.entries()[0];
    ensure!(e.f == best.f() && e.x == best.x(), "entry differs from best(a)");
    Ok(())
}

fn campaign_order_statistics() -> Result<(), String> {
    let p = ok(problems::rastrigin(5))?;
    let mut a = ok(small_spec(TopologySpec::Ring, 2, 5, 8).build(&p, 0))?;
    let archive = ok(multistart_campaign(&mut a, 20, 2, 1))?;
    let f = archive.fitnesses();
    let min = f.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure!(archive.len() == 20 && min <= median(f), "min above median");
    Ok(())
}

fn prune_degenerate_and_identity() -> Result<(), String> {
    let p = ok(problems::rastrigin(2))?;
    let mut single = ChampionArchive::new(&p);
    ok(single.push(0, &ok(Individual::evaluate(&p, vec![1.5, -2.0]))?))?;
    let b = ok(prune_bounds(&single, 0.1, 0.0))?;
    ensure!(b.lower() == [1.5, -2.0] && b.upper() == [1.5, -2.0], "degenerate {b:?}");

    let mut many = ChampionArchive::new(&p);
    let mut rng = Rng::new(1);
    for k in 0..10 {
        ok(many.push(k, &ok(random_individual(&p, &mut rng))?))?;
    }
    let b = ok(prune_bounds(&many, 1.0, 10.0))?;
    ensure!(&b == p.bounds(), "clamped {b:?}");
    Ok(())
}

fn prune_synthetic_top_decile() -> Result<(), String> {
    let p = ok(Problem::from_fn("centered", Bounds::uniform(3, 0.0, 1.0).unwrap(), 0, |x| {
        x.iter().map(|v| (v - 0.5) * (v - 0.5)).sum()
    }))?;
    let mut rng = Rng::new(4);
    let mut archive = ChampionArchive::new(&p);
    let mut top = Vec::new();
    for k in 0..100 {
        let x: Vec<f64> = if k % 10 == 3 {
            (0..3).map(|_| rng.uniform_in(0.4, 0.6)).collect()
        } else {
            (0..3).map(|_| rng.uniform_in(0.0, 0.25)).collect()
        };
        let ind = ok(Individual::evaluate(&p, x))?;
        if k % 10 == 3 {
            top.push(ind.x().to_vec());
        }
        ok(archive.push(k, &ind))?;
    }
    let b = ok(prune_bounds(&archive, 0.1, 0.0))?;
    for i in 0..3 {
        let lo = top.iter().map(|x| x[i]).fold(f64::INFINITY, f64::min);
        let hi = top.iter().map(|x| x[i]).fold(f64::NEG_INFINITY, f64::max);
        ensure!(b.lower()[i] == lo && b.upper()[i] == hi, "dim {i}: [{}, {}] vs [{lo}, {hi}]", b.lower()[i], b.upper()[i]);
    }
    Ok(())
}

fn pruned_problem_examples() -> Result<(), String> {
    let p = ok(problems::rastrigin(3))?;
    let same = ok(pruned_problem(&p, p.bounds().clone()))?;
    let mut rng = Rng::new(3);
    for _ in 0..20 {
        let ind = ok(random_individual(&p, &mut rng))?;
        ensure!(eval(&same, ind.x())? == ind.f(), "identity bounds changed f");
    }
    let narrow = ok(pruned_problem(&p, ok(Bounds::uniform(3, -0.5, 0.5))?))?;
    ensure!(eval(&narrow, &[0.0; 3])? == 0.0, "minimum changed");
    ensure!(narrow.evaluate(&[1.0, 0.0, 0.0]).is_err(), "point outside the narrowed box accepted");
    Ok(())
}

fn narrowed_rastrigin_sign_test() -> Result<(), String> {
    let full = ok(problems::rastrigin(5))?;
    let narrow = ok(pruned_problem(&full, ok(Bounds::uniform(5, -0.5, 0.5))?))?;
    let spec = small_spec(TopologySpec::Ring, 2, 10, 10);
    let (mut wins, mut nf, mut ff) = (0, Vec::new(), Vec::new());
    for seed in 0..20 {
        let mut a = ok(spec.build(&narrow, seed))?;
        let n = ok(ok(multistart_campaign(&mut a, 5, 3, seed))?.best_individual().ok_or("empty"))?;
        let mut b = ok(spec.build(&full, seed))?;
        let f = ok(ok(multistart_campaign(&mut b, 5, 3, seed))?.best_individual().ok_or("empty"))?;
        ensure!(a.evaluations() == b.evaluations(), "unequal budgets");
        if n.f() < f.f() {
            wins += 1;
        }
        nf.push(n.f());
        ff.push(f.f());
    }
    let pval = sign_test_p(wins, 20);
    ensure!(median(nf.clone()) < median(ff.clone()), "medians {} vs {}", median(nf), median(ff));
    ensure!(pval < 0.05, "narrowed wins {wins}/20, p = {pval}");
    Ok(())
}

fn single_cycle_matches_campaign_and_prune() -> Result<(), String> {
    let p = ok(problems::griewank(3))?;
    let spec = small_spec(TopologySpec::Ring, 2, 3, 6);
    let params = PruningParams::new(1, 6, 2);
    let out = ok(pruning_cycles(&p, &spec, &params, 8))?;
    let s = mix_seed(8, 0);
    let mut a = ok(spec.build(&p, s))?;
    let archive = ok(multistart_campaign(&mut a, 6, 2, s))?;
    let bounds = ok(prune_bounds(&archive, params.keep_fraction, params.padding))?;
    ensure!(out.bounds == vec![bounds], "bounds differ");
    ensure!(out.archives[0].entries() == archive.entries(), "archives differ");
    ensure!(Some(out.best) == archive.best_individual(), "best differs");
    Ok(())
}

fn nested(inner: &Bounds, outer: &Bounds) -> bool {
    (0..inner.dim()).all(|i| inner.lower()[i] >= outer.lower()[i] && inner.upper()[i] <= outer.upper()[i])
}

fn pruning_bounds_nested() -> Result<(), String> {
    let p = ok(problems::griewank(4))?;
    let spec = small_spec(TopologySpec::Ring, 2, 3, 6);
    for seed in 0..3 {
        let out = ok(pruning_cycles(&p, &spec, &PruningParams::new(4, 5, 2), seed))?;
        ensure!(nested(&out.bounds[0], p.bounds()), "first box escapes the problem");
        for w in out.bounds.windows(2) {
            ensure!(nested(&w[1], &w[0]), "seed {seed}: {:?} not inside {:?}", w[1], w[0]);
        }
    }
    Ok(())
}

/// 3 pruning cycles against one campaign with the same total number of runs.
pub fn pruning_experiment(gens: usize, runs: usize, iterations: u64) -> Result<(usize, f64, f64), String> {
    let p = ok(problems::griewank(10))?;
    let spec = small_spec(TopologySpec::Ring, 4, gens, 20);
    let (mut wins, mut pf, mut sf) = (0, Vec::new(), Vec::new());
    for seed in 0..20 {
        let pruned = ok(pruning_cycles(&p, &spec, &PruningParams::new(3, runs, iterations), seed))?;
        let single = ok(pruning_cycles(&p, &spec, &PruningParams::new(1, 3 * runs, iterations), seed))?;
        ensure!(
            pruned.evaluations == single.evaluations,
            "budgets differ: {} vs {}",
            pruned.evaluations,
            single.evaluations
        );
        ensure!(nested(&pruned.bounds[0], p.bounds()), "seed {seed}: first box escapes");
        for w in pruned.bounds.windows(2) {
            ensure!(nested(&w[1], &w[0]), "seed {seed}: bounds not nested");
        }
        if pruned.best.f() < single.best.f() {
            wins += 1;
        }
        pf.push(pruned.best.f());
        sf.push(single.best.f());
    }
    Ok((wins, median(pf), median(sf)))
}

fn pruning_griewank_three_cycles() -> Result<(), String> {
    let (wins, mp, ms) = pruning_experiment(10, 10, 3)?;
    ensure!(mp <= ms, "3-cycle median {mp} vs 1-cycle {ms} ({wins}/20 wins)");
    Ok(())
}

// ---------------------------------------------------------------- cli

fn isle() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isle"))
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run_config(config: &Path, out: &Path, extra: &[&str]) -> Result<serde_json::Value, String> {
    let o = ok(isle().arg("run").arg(config).arg("--out").arg(out).args(extra).output())?;
    ensure!(o.status.success(), "isle run failed: {}", String::from_utf8_lossy(&o.stderr));
    ok(serde_json::from_str(&ok(std::fs::read_to_string(out.join("results.json")))?))
}

fn write_config(dir: &Path, name: &str, json: &str) -> Result<PathBuf, String> {
    let path = dir.join(name);
    ok(std::fs::write(&path, json))?;
    Ok(path)
}

fn cli_rim7() -> Result<(), String> {
    let tmp = ok(tempfile::tempdir())?;
    let r = run_config(&config_dir().join("rim7_rastrigin.json"), tmp.path(), &[])?;
    let f = r["best"]["f"].as_f64().ok_or("no best.f")?;
    ensure!(f >= 0.0, "rastrigin champion {f}");
    ensure!(r["islands"].as_array().map(Vec::len) == Some(7), "island count");
    Ok(())
}

static UNKNOWN_ALGORITHM: &str = r#"{
    "problem": {"name": "rastrigin", "dim": 2},
    "topology": {"name": "ring"},
    "islands": [{"algorithm": {"name": "dee", "generations": 3}, "size": 6}],
    "run": {"seed": 1, "mode": {"name": "single", "iterations": 2}}
}"#;

fn cli_unknown_algorithm() -> Result<(), String> {
    let tmp = ok(tempfile::tempdir())?;
    let cfg = write_config(tmp.path(), "bad.json", UNKNOWN_ALGORITHM)?;
    let o = ok(isle().arg("run").arg(&cfg).arg("--out").arg(tmp.path().join("out")).output())?;
    let err = String::from_utf8_lossy(&o.stderr);
    ensure!(o.status.code() == Some(1), "exit {:?}", o.status.code());
    ensure!(err.contains("dee"), "message does not name the algorithm: {err}");
    Ok(())
}

fn cli_lockstep_reproducible() -> Result<(), String> {
    let tmp = ok(tempfile::tempdir())?;
    let cfg = config_dir().join("ring_de_pso_rosenbrock.json");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_config(&cfg, &a, &["--lockstep", "--seed", "99"])?;
    run_config(&cfg, &b, &["--lockstep", "--seed", "99"])?;
    let ra = ok(std::fs::read(a.join("results.json")))?;
    let rb = ok(std::fs::read(b.join("results.json")))?;
    ensure!(ra == rb, "results differ between lockstep runs");
    Ok(())
}

fn cli_list() -> Result<(), String> {
    let problems = ok(isle().args(["list", "problems"]).output())?;
    let text = String::from_utf8_lossy(&problems.stdout);
    for name in ["rastrigin", "rosenbrock", "knapsack"] {
        ensure!(text.contains(name), "problems list lacks {name}");
    }
    let topologies = ok(isle().args(["list", "topologies"]).output())?;
    ensure!(String::from_utf8_lossy(&topologies.stdout).contains("rim"), "topologies list lacks rim");
    let bogus = ok(isle().args(["list", "bogus"]).output())?;
    ensure!(bogus.status.code() == Some(1), "list bogus exit {:?}", bogus.status.code());
    Ok(())
}

static CAMPAIGN_RIM7: &str = r#"{
    "problem": {"name": "rastrigin", "dim": 3},
    "topology": {"name": "rim"},
    "islands": [{"algorithm": {"name": "monte_carlo", "evaluations": 5}, "size": 2, "count": 7}],
    "run": {"seed": 5, "mode": {"name": "campaign", "runs": 30, "iterations": 3}}
}"#;

fn cli_export() -> Result<(), String> {
    let tmp = ok(tempfile::tempdir())?;
    let cfg = write_config(tmp.path(), "campaign.json", CAMPAIGN_RIM7)?;
    let out = tmp.path().join("out");
    run_config(&cfg, &out, &[])?;
    let results = out.join("results.json");
    let export = |what: &str| -> Result<String, String> {
        let o = ok(isle().arg("export").arg(&results).arg(what).output())?;
        ensure!(o.status.success(), "export {what}: {}", String::from_utf8_lossy(&o.stderr));
        ok(std::fs::read_to_string(out.join(format!("{what}.tsv"))))
    };
    let archive = export("archive")?;
    let rows = archive.lines().filter(|l| !l.trim().is_empty()).count();
    ensure!(rows == 30, "archive has {rows} lines");
    let topo = export("topology")?;
    let edges = topo.lines().filter(|l| l.split_whitespace().count() == 2).count();
    ensure!(edges == 24, "rim(7) export has {edges} edges");
    let conv = export("convergence")?;
    let mut last = std::collections::HashMap::new();
    for l in conv.lines() {
        let cols: Vec<&str> = l.split('\t').collect();
        let (tick, island): (u64, usize) = (ok(cols[0].parse())?, ok(cols[1].parse())?);
        let prev = last.insert(island, tick).unwrap_or(0);
        ensure!(tick >= prev, "island {island}: tick {tick} after {prev}");
    }
    ensure!(last.len() == 7, "convergence covers {} islands", last.len());
    let bad = ok(isle().arg("export").arg(&results).arg("nonsense").output())?;
    ensure!(bad.status.code() == Some(1), "unknown export exit {:?}", bad.status.code());
    Ok(())
}
