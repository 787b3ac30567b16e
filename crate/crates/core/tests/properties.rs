//! Cross-module properties checked against independent estimates.

use anonq_core::algorithms::lipschitz_pure_ne;
use anonq_core::bruteforce::is_pure_ne;
use anonq_core::generators::lcp_hidden_string;
use anonq_core::{
    classify, enumerate_pure_ne, evaluate_profile, expected_payoff, gen_irrational3, gen_lcp_game,
    gen_majority_minority, gen_random, grid_search_min_regret, pbd_pmf, sampled_smoothed_all_players,
    smoothed_game_exact, table_oracle, AccurateQueryConfig, AnonymousGame, MixedProfile, PayoffOracle, RandomFamily,
    Strategy,
};
use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn leave_one_out(probs: &[f64], i: usize) -> Vec<f64> {
    probs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &p)| p)
        .collect()
}

#[test]
fn evaluate_profile_matches_monte_carlo() {
    let n = 12;
    let g = gen_random(n, RandomFamily::General, 31).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let probs: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let profile = MixedProfile::new(probs.clone()).unwrap();
    let rep = evaluate_profile(&g, &profile, 0.0).unwrap();

    let samples = 1_000_000;
    let mut sum = vec![[0.0f64; 2]; n];
    let mut sq = vec![[0.0f64; 2]; n];
    let mut draw = vec![false; n];
    for _ in 0..samples {
        let mut ones = 0;
        for (d, &p) in draw.iter_mut().zip(&probs) {
            *d = rng.gen_bool(p);
            ones += usize::from(*d);
        }
        for i in 0..n {
            let x = ones - usize::from(draw[i]);
            for j in 0..2 {
                let v = g.row(i, j)[x];
                sum[i][j] += v;
                sq[i][j] += v * v;
            }
        }
    }
    for i in 0..n {
        let pmf = pbd_pmf(&leave_one_out(&probs, i)).unwrap();
        let exact = [
            expected_payoff(&g, i, Strategy::One, &pmf).unwrap(),
            expected_payoff(&g, i, Strategy::Two, &pmf).unwrap(),
        ];
        for j in 0..2 {
            let mean = sum[i][j] / samples as f64;
            let var = sq[i][j] / samples as f64 - mean * mean;
            let se = (var / samples as f64).sqrt();
            assert!((mean - exact[j]).abs() <= 3.0 * se + 1e-12, "player {i} strategy {j}");
        }
        // The report is a function of the two exact payoffs.
        let mixed = probs[i] * exact[0] + (1.0 - probs[i]) * exact[1];
        let regret = exact[0].max(exact[1]) - mixed;
        assert!((rep.regret[i] - regret).abs() <= 1e-12);
    }
}

#[test]
fn sampled_estimator_is_unbiased() {
    let n = 6;
    let zeta = 0.2;
    let g = gen_random(n, RandomFamily::General, 5).unwrap();
    let exact = smoothed_game_exact(&g, zeta).unwrap();
    let cfg = AccurateQueryConfig {
        delta: 0.5,
        tau: 0.5,
        samples_per_query: 1,
    };
    let runs = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (s, x) in [(Strategy::One, 2usize), (Strategy::Two, 4)] {
        let mut o = table_oracle(&g).unwrap();
        let mut sum = vec![0.0; n];
        let mut sq = vec![0.0; n];
        for _ in 0..runs {
            let v = sampled_smoothed_all_players(&mut o, s, x, zeta, &cfg, &mut rng).unwrap();
            for i in 0..n {
                sum[i] += v[i];
                sq[i] += v[i] * v[i];
            }
        }
        assert_eq!(o.ledger().all_players_count, runs as u64);
        for i in 0..n {
            let mean = sum[i] / runs as f64;
            let se = ((sq[i] / runs as f64 - mean * mean) / runs as f64).sqrt();
            let want = exact.row(i, s.index())[x];
            assert!((mean - want).abs() <= 3.0 * se + 1e-12, "player {i}: {mean} vs {want}");
        }
    }
}

#[test]
fn sampled_estimator_is_delta_accurate() {
    let n = 64;
    let (zeta, delta, tau) = (0.25, 0.05, 0.01);
    let cfg = AccurateQueryConfig::new(n, delta, tau).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let mut within = 0;
    let trials = 1000;
    let games: Vec<AnonymousGame> = (0..10)
        .map(|s| gen_random(n, RandomFamily::General, s).unwrap())
        .collect();
    let smoothed: Vec<AnonymousGame> = games.iter().map(|g| smoothed_game_exact(g, zeta).unwrap()).collect();
    for t in 0..trials {
        let (g, gbar) = (&games[t % 10], &smoothed[t % 10]);
        let s = if rng.gen_bool(0.5) {
            Strategy::One
        } else {
            Strategy::Two
        };
        let x = rng.gen_range(0..n);
        let mut o = table_oracle(g).unwrap();
        let v = sampled_smoothed_all_players(&mut o, s, x, zeta, &cfg, &mut rng).unwrap();
        let err = (0..n)
            .map(|i| (v[i] - gbar.row(i, s.index())[x]).abs())
            .fold(0.0, f64::max);
        if err <= delta {
            within += 1;
        }
    }
    assert!(within * 100 >= 99 * trials, "{within} of {trials} within delta");
}

#[test]
fn lcp_hidden_string_is_uniform() {
    let seeds = 10_000u64;
    let mut counts = [0u64; 8];
    for seed in 0..seeds {
        let (_, spec) = gen_lcp_game(3, seed).unwrap();
        let y = lcp_hidden_string(&spec).unwrap();
        let idx = y.iter().enumerate().map(|(j, &b)| usize::from(b) << j).sum::<usize>();
        counts[idx] += 1;
    }
    let expected = seeds as f64 / 8.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 99.9% point of chi-square with 7 degrees of freedom.
    assert!(chi2 < 24.32, "chi-square {chi2}, counts {counts:?}");
}

#[test]
fn majority_minority_has_no_pure_equilibrium() {
    for n in [4usize, 6, 8, 10] {
        let g = gen_majority_minority(n).unwrap();
        for mask in 0u32..(1 << n) {
            let a: Vec<Strategy> = (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Strategy::One
                    } else {
                        Strategy::Two
                    }
                })
                .collect();
            let rep = evaluate_profile(&g, &MixedProfile::pure(&a), 1e-9).unwrap();
            assert!(rep.eps_ne >= 1.0 / (2 * n) as f64 - 1e-12, "n = {n} mask {mask:b}");
        }
    }
}

#[test]
fn grid_refinement_is_monotone() {
    let mut games = vec![gen_irrational3()];
    for s in 0..4 {
        games.push(gen_random(2 + s as usize % 2, RandomFamily::General, 40 + s).unwrap());
    }
    for g in &games {
        let mut last = f64::INFINITY;
        for step in [0.2, 0.1, 0.05, 0.025] {
            let (_, r) = grid_search_min_regret(g, step).unwrap();
            assert!(r <= last + 1e-12, "step {step}: {r} > {last}");
            last = r;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_equilibria_are_exact(n in 1usize..9, seed in 0u64..1_000_000) {
        let g = gen_random(n, RandomFamily::General, seed).unwrap();
        let found = enumerate_pure_ne(&g).unwrap();
        for mask in 0u32..(1 << n) {
            let a: Vec<Strategy> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { Strategy::One } else { Strategy::Two })
                .collect();
            let rep = evaluate_profile(&g, &MixedProfile::pure(&a), 1e-9).unwrap();
            if found.contains(&a) {
                prop_assert!(rep.eps_ne <= 1e-12);
            } else {
                prop_assert!(rep.eps_ne > 0.0);
                prop_assert!(!is_pure_ne(&g, &a));
            }
        }
    }

    #[test]
    fn full_support_slack_is_payoff_spread(n in 2usize..12, seed in 0u64..1_000_000) {
        let g = gen_random(n, RandomFamily::General, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..0.99)).collect();
        let rep = evaluate_profile(&g, &MixedProfile::new(probs.clone()).unwrap(), 0.0).unwrap();
        for i in 0..n {
            let pmf = pbd_pmf(&leave_one_out(&probs, i)).unwrap();
            let a = expected_payoff(&g, i, Strategy::One, &pmf).unwrap();
            let b = expected_payoff(&g, i, Strategy::Two, &pmf).unwrap();
            prop_assert!((rep.ws_slack[i] - (a - b).abs()).abs() <= 1e-12);
            prop_assert!(rep.regret[i] <= rep.ws_slack[i] + 1e-12);
        }
    }

    #[test]
    fn bisection_keeps_its_invariant(n in 2usize..200, mult in 0.1f64..10.0, seed in 0u64..1_000_000) {
        let lambda = mult / n as f64;
        let g = gen_random(n, RandomFamily::Lipschitz(lambda), seed).unwrap();
        let mut o = table_oracle(&g).unwrap();
        let out = lipschitz_pure_ne(&mut o, 0.0).unwrap();
        for step in &out.trace {
            prop_assert!(step.phi_left > 0 && step.phi_right <= 0);
            prop_assert!(step.left < step.right);
        }
        if let Some(x) = out.crossing {
            prop_assert!(out.ones == x || out.ones == x + 1);
        }
        prop_assert_eq!(o.ledger().all_players_count, out.queries());
        let rep = evaluate_profile(&g, &MixedProfile::pure(&out.profile), 1e-9).unwrap();
        prop_assert!(rep.eps_wsne <= 3.0 * lambda + 1e-12);
    }

    #[test]
    fn generated_payoffs_lie_in_unit_interval(n in 1usize..40, seed in 0u64..1_000_000, fam in 0usize..5) {
        let family = match fam {
            0 => RandomFamily::General,
            1 => RandomFamily::Symmetric,
            2 => RandomFamily::SelfAnonymous,
            3 => RandomFamily::Lipschitz(0.3),
            _ => RandomFamily::StepSelfAnon,
        };
        let g = gen_random(n, family, seed).unwrap();
        for i in 0..n {
            for j in 0..2 {
                prop_assert!(g.row(i, j).iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
        let flags = classify(&g);
        prop_assert_eq!(flags.self_symmetric, flags.symmetric && flags.self_anonymous);
    }
}
