use proptest::prelude::*;

use giro::analysis::{kl_bernoulli, optimism_tail_q, OptimismQuery};
use giro::contextual::{fit_reward_model, BootstrapSample, ContextHistory, EntryKind, ModelKind};
use giro::harness::{build_policy, play, PolicyKind, Schedule};
use giro::policies::{giro_value_binary, klucb_index, ArmRecord, TieRule};
use giro::{split_seed, BanditInstance, Family};

fn kinds() -> Vec<PolicyKind> {
    vec![
        PolicyKind::Giro { a: 1.0 },
        PolicyKind::Giro { a: 0.3 },
        PolicyKind::Giro { a: 0.0 },
        PolicyKind::Ucb1,
        PolicyKind::KlUcb,
        PolicyKind::Ts,
        PolicyKind::EpsGreedy {
            schedule: Schedule::B(3.0),
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn forced_pulls_then_monotone_regret(
        means in prop::collection::vec(0.0f64..=1.0, 1..6),
        seed in any::<u64>(),
        beta in any::<bool>(),
    ) {
        let family = if beta { Family::Beta { v: 4.0 } } else { Family::Bernoulli };
        let instance = BanditInstance::new(means.clone(), family).unwrap();
        for (i, kind) in kinds().iter().enumerate() {
            let mut rng = split_seed(seed, i as u64, 0);
            let mut policy = build_policy(kind, "p", means.len(), 100, TieRule::UniformRandom).unwrap();
            let mut env_rng = split_seed(seed, i as u64, 1);
            let logs = play(policy.as_mut(), instance.gaps(), 60, &mut rng, |_, arm| {
                instance.pull(arm, &mut env_rng).unwrap()
            })
            .unwrap();
            for (k, l) in logs.iter().take(means.len()).enumerate() {
                prop_assert_eq!(l.pulled, k);
            }
            let mut prev = 0.0;
            for l in &logs {
                let step = l.cumulative_regret - prev;
                prop_assert!((step - instance.gaps()[l.pulled]).abs() < 1e-12);
                prop_assert!(step >= 0.0);
                prev = l.cumulative_regret;
            }
            let pulls: u64 = policy.records().iter().map(|r| r.pulls()).sum();
            prop_assert_eq!(pulls, 60);
        }
    }

    #[test]
    fn optimism_tail_monotone(s in 1u64..30, a in 1u32..4, frac in 0.0f64..1.0, tau in 0.0f64..1.0, d in 0.0f64..0.2) {
        let lo = a as u64 * s;
        let v = lo + (frac * s as f64).floor() as u64;
        let q = |v: u64, tau: f64| optimism_tail_q(OptimismQuery { s, v, a, tau }).unwrap();
        let base = q(v, tau);
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(q(v, tau + d) <= base + 1e-12);
        if v < (a as u64 + 1) * s {
            prop_assert!(q(v + 1, tau) >= base - 1e-12);
        }
    }

    #[test]
    fn giro_draw_shape(s in 1u64..40, frac in 0.0f64..=1.0, a in 1u32..4, seed in any::<u64>()) {
        let ones = (frac * s as f64).floor() as u64;
        let record = ArmRecord::from_counts(s, ones).unwrap();
        let mut rng = split_seed(seed, 0, 0);
        let d = giro_value_binary(&record, a, &mut rng).unwrap();
        prop_assert_eq!(d.size, (2 * a as u64 + 1) * s);
        prop_assert!((0.0..=1.0).contains(&d.mu_hat));
        let u = d.ones.unwrap();
        prop_assert!(u <= d.size);
    }

    #[test]
    fn klucb_index_feasible(p in 0.0f64..=1.0, s in 1u64..500, t in 2u64..100_000) {
        let budget = (t as f64).ln();
        let q = klucb_index(p, s, budget);
        prop_assert!(q >= p - 1e-12 && q <= 1.0);
        prop_assert!(s as f64 * kl_bernoulli(p, q) <= budget + 1e-6);
    }

    #[test]
    fn contextual_samples_pair_and_clamp(
        rows in prop::collection::vec((prop::collection::vec(-3.0f64..3.0, 3), 0.0f64..=1.0), 1..25),
        a in 0u32..3,
        seed in any::<u64>(),
        query in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        let mut h = ContextHistory::new(3);
        for (x, y) in &rows {
            h.push(x, *y).unwrap();
        }
        let mut rng = split_seed(seed, 0, 0);
        let sample = BootstrapSample::draw(&h, a, &mut rng);
        prop_assert_eq!(sample.len(), h.augmented_len(a));
        for e in &sample.entries {
            if e.kind != EntryKind::Observed {
                let ctx = h.context(e.source);
                prop_assert!((0..h.len()).any(|j| h.context(j) == ctx));
            }
        }
        for kind in [ModelKind::Linear, ModelKind::Logistic] {
            let m = fit_reward_model(&sample.weighted(&h), kind, None).unwrap();
            prop_assert!(m.theta.iter().all(|t| t.is_finite()));
            prop_assert!((0.0..=1.0).contains(&m.predict(&query)));
        }
    }

    #[test]
    fn fixed_preference_is_stable(values in prop::collection::vec(0u8..3, 2..8), z in any::<bool>(), seed in any::<u64>()) {
        let vals: Vec<f64> = values.iter().map(|&v| v as f64).collect();
        let mut rng = split_seed(seed, 0, 0);
        let tie = TieRule::FixedPreference { z };
        let first = giro::policies::select_arm(&vals, tie, &mut rng);
        for _ in 0..5 {
            prop_assert_eq!(giro::policies::select_arm(&vals, tie, &mut rng), first);
        }
        let best = vals.iter().copied().fold(f64::MIN, f64::max);
        prop_assert_eq!(vals[first], best);
    }
}
