//! Statistics checked against brute-force decompositions, `statrs`
//! distributions and resampling.

use hazcast_core::stats::{
    bonferroni, grips_regression, one_way_anova, pairwise_t_tests, special, t_ci95, two_sample_t,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

const TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * b.abs().max(1.0)
}

/// Sum of squares around the mean written as half the mean squared
/// pairwise difference; never computes a mean.
fn pairwise_ss(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for a in v {
        for b in v {
            s += (a - b) * (a - b);
        }
    }
    s / (2.0 * v.len() as f64)
}

fn oracle_anova(groups: &[Vec<f64>]) -> (f64, f64) {
    let all: Vec<f64> = groups.concat();
    let ss_total = pairwise_ss(&all);
    let ss_within: f64 = groups.iter().map(|g| pairwise_ss(g)).sum();
    let ss_between = ss_total - ss_within;
    let dfb = (groups.len() - 1) as f64;
    let dfw = (all.len() - groups.len()) as f64;
    let f = (ss_between / dfb) / (ss_within / dfw);
    let p = 1.0 - FisherSnedecor::new(dfb, dfw).unwrap().cdf(f);
    (f, p)
}

fn oracle_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mean = |v: &[f64]| {
        let mut s = 0.0;
        for x in v {
            s += x;
        }
        s / v.len() as f64
    };
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let df = na + nb - 2.0;
    let sp2 = (pairwise_ss(a) + pairwise_ss(b)) / df;
    let t = (mean(a) - mean(b)) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt();
    let p = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, df).unwrap().cdf(t.abs()));
    (t, p)
}

fn sample(rng: &mut ChaCha8Rng, n: usize, center: f64, spread: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = (0..4).map(|_| rng.random::<f64>()).sum::<f64>() - 2.0;
            center + spread * u
        })
        .collect()
}

fn synthetic_groups(seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..=5);
    (0..k)
        .map(|i| {
            let n = rng.random_range(2..=30);
            sample(&mut rng, n, 400.0 + 15.0 * i as f64, 120.0)
        })
        .collect()
}

#[test]
fn distribution_functions_match_statrs() {
    for df in [1.0, 2.0, 3.0, 7.5, 30.0, 124.0, 500.0] {
        let st = StudentsT::new(0.0, 1.0, df).unwrap();
        for t in [-40.0, -3.2, -1.0, -0.1, 0.0, 0.4, 1.96, 2.5, 8.0] {
            assert!((special::t_cdf(t, df) - st.cdf(t)).abs() < 1e-10, "t={t} df={df}");
        }
        for p in [0.6, 0.9, 0.975, 0.995] {
            let q = special::t_quantile(p, df);
            assert!(close(q, st.inverse_cdf(p)), "p={p} df={df}");
        }
    }
    for (d1, d2) in [(1.0, 1.0), (2.0, 9.0), (3.0, 124.0), (5.0, 20.0), (10.0, 3.0)] {
        let fs = FisherSnedecor::new(d1, d2).unwrap();
        for f in [0.01, 0.5, 1.0, 3.151, 10.0, 100.0] {
            assert!((special::f_sf(f, d1, d2) - (1.0 - fs.cdf(f))).abs() < 1e-10, "f={f}");
        }
    }
    for x in [0.5, 1.5, 3.25, 10.0, 62.0, 171.5] {
        assert!(close(special::ln_gamma(x), statrs::function::gamma::ln_gamma(x)));
    }
}

#[test]
fn anova_matches_brute_force() {
    for seed in 0..200 {
        let groups = synthetic_groups(seed);
        let a = one_way_anova(&groups).unwrap();
        let (f, p) = oracle_anova(&groups);
        assert!(close(a.f, f), "seed {seed}: {} vs {f}", a.f);
        assert!((a.p - p).abs() < TOL, "seed {seed}: {} vs {p}", a.p);
        let n: usize = groups.iter().map(Vec::len).sum();
        assert_eq!((a.df_between, a.df_within), (groups.len() - 1, n - groups.len()));
    }
}

#[test]
fn anova_p_agrees_with_permutation_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let groups: Vec<Vec<f64>> = (0..3)
        .map(|i| sample(&mut rng, 12, 100.0 + 6.0 * i as f64, 20.0))
        .collect();
    let observed = one_way_anova(&groups).unwrap();
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let mut pool: Vec<f64> = groups.concat();
    let rounds = 20_000;
    let mut extreme = 0;
    for _ in 0..rounds {
        for i in (1..pool.len()).rev() {
            pool.swap(i, rng.random_range(0..=i));
        }
        let mut at = 0;
        let shuffled: Vec<Vec<f64>> = sizes
            .iter()
            .map(|n| {
                at += n;
                pool[at - n..at].to_vec()
            })
            .collect();
        if one_way_anova(&shuffled).unwrap().f >= observed.f {
            extreme += 1;
        }
    }
    let p_perm = extreme as f64 / rounds as f64;
    assert!(
        (p_perm - observed.p).abs() < 0.03,
        "permutation {p_perm} vs F test {}",
        observed.p
    );
}

#[test]
fn t_tests_match_oracle() {
    for seed in 0..200 {
        let groups = synthetic_groups(seed);
        let named: Vec<(String, Vec<f64>)> = groups
            .iter()
            .enumerate()
            .map(|(i, g)| (format!("g{i}"), g.clone()))
            .collect();
        let tests = pairwise_t_tests(&named, None).unwrap();
        let k = groups.len();
        assert_eq!(tests.len(), k * (k - 1) / 2);
        let mut idx = 0;
        for i in 0..k {
            for j in i + 1..k {
                let (t, p) = oracle_t(&groups[i], &groups[j]);
                let got = &tests[idx];
                assert!(close(got.t, t), "seed {seed}");
                assert!((got.p_raw - p).abs() < TOL, "seed {seed}: {} vs {p}", got.p_raw);
                let adjusted = (p * tests.len() as f64).min(1.0);
                assert!((got.p_adjusted - adjusted).abs() < tests.len() as f64 * TOL);
                idx += 1;
            }
        }
    }
}

#[test]
fn ci_matches_oracle() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=30);
        let v = sample(&mut rng, n, 50.0, 10.0);
        let (lo, hi) = t_ci95(&v).unwrap();
        let nf = n as f64;
        let m = v.iter().sum::<f64>() / nf;
        let sd = (pairwise_ss(&v) / (nf - 1.0)).sqrt();
        let q = StudentsT::new(0.0, 1.0, nf - 1.0).unwrap().inverse_cdf(0.975);
        assert!(close(lo, m - q * sd / nf.sqrt()), "seed {seed}");
        assert!(close(hi, m + q * sd / nf.sqrt()), "seed {seed}");
    }
}

#[test]
fn ci_width_shrinks_with_root_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let avg_width = |rng: &mut ChaCha8Rng, n: usize| {
        let reps = 400;
        (0..reps)
            .map(|_| {
                let (lo, hi) = t_ci95(&sample(rng, n, 0.0, 1.0)).unwrap();
                hi - lo
            })
            .sum::<f64>()
            / reps as f64
    };
    let w25 = avg_width(&mut rng, 25);
    let w100 = avg_width(&mut rng, 100);
    let w400 = avg_width(&mut rng, 400);
    for ratio in [w25 / w100, w100 / w400] {
        assert!((ratio - 2.0).abs() < 0.15, "ratio {ratio}");
    }
}

#[test]
fn regression_matches_normal_equations() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=30);
        let xs = sample(&mut rng, n, 3.5, 2.0);
        let noise = sample(&mut rng, n, 0.0, 80.0);
        let pairs: Vec<(f64, f64)> = xs
            .iter()
            .zip(&noise)
            .map(|(x, e)| (*x, 450.0 - 12.0 * x + e))
            .collect();
        let r = grips_regression(&pairs).unwrap();
        // raw-sum normal equations
        let nf = n as f64;
        let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, y) in &pairs {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
        }
        let det = nf * sxx - sx * sx;
        let slope = (nf * sxy - sx * sy) / det;
        let intercept = (sxx * sy - sx * sxy) / det;
        let num = nf * sxy - sx * sy;
        let r2 = num * num / (det * (nf * syy - sy * sy));
        assert!((r.slope - slope).abs() < 1e-9 * slope.abs().max(1.0), "seed {seed}");
        assert!((r.intercept - intercept).abs() < 1e-9 * intercept.abs().max(1.0));
        assert!((r.r_squared - r2).abs() < 1e-9, "seed {seed}");
        let df = nf - 2.0;
        let t = (r2 * df / (1.0 - r2)).sqrt();
        let p = 2.0 * (1.0 - StudentsT::new(0.0, 1.0, df).unwrap().cdf(t));
        assert!((r.p - p).abs() < 1e-9, "seed {seed}: {} vs {p}", r.p);
    }
}

fn groups_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..600.0f64, 2..15), 2..5)
        .prop_filter("needs within-group spread", |gs| {
            gs.iter().any(|g| g.iter().any(|v| (v - g[0]).abs() > 1e-3))
        })
}

proptest! {
    #[test]
    fn anova_shift_and_scale_invariant(groups in groups_strategy(), shift in -500.0..500.0f64, scale in 0.01..100.0f64) {
        let base = one_way_anova(&groups).unwrap();
        let shifted: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|v| v + shift).collect()).collect();
        let scaled: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|v| v * scale).collect()).collect();
        let tol = 1e-7 * base.f.max(1.0);
        prop_assert!((one_way_anova(&shifted).unwrap().f - base.f).abs() <= tol);
        prop_assert!((one_way_anova(&scaled).unwrap().f - base.f).abs() <= tol);
        prop_assert!(base.f >= 0.0);
        prop_assert!((0.0..=1.0).contains(&base.p));
    }

    #[test]
    fn equal_means_give_zero_f(g in prop::collection::vec(0.0..600.0f64, 2..15), k in 2usize..5) {
        prop_assume!(g.iter().any(|v| (v - g[0]).abs() > 1e-3));
        let groups = vec![g; k];
        let a = one_way_anova(&groups).unwrap();
        prop_assert!(a.f.abs() < 1e-12);
    }

    #[test]
    fn two_group_f_is_t_squared(groups in groups_strategy()) {
        let (a, b) = (&groups[0], &groups[1]);
        prop_assume!(a.iter().chain(b.iter()).any(|v| (v - a[0]).abs() > 1e-3));
        prop_assume!(a.iter().any(|v| (v - a[0]).abs() > 0.0) || b.iter().any(|v| (v - b[0]).abs() > 0.0));
        let f = one_way_anova(&[a.clone(), b.clone()]).unwrap();
        let t = two_sample_t(a, b).unwrap();
        prop_assert!((f.f - t.t * t.t).abs() <= 1e-9 * f.f.max(1.0));
        prop_assert!((f.p - t.p).abs() <= 1e-9);
    }

    #[test]
    fn bonferroni_is_capped_and_monotone(p in 0.0..=1.0f64, count in 1usize..50) {
        let adj = bonferroni(p, count);
        prop_assert!(adj >= p);
        prop_assert!(adj <= 1.0);
        prop_assert!(adj == (p * count as f64).min(1.0));
    }

    #[test]
    fn r_squared_in_unit_interval(pairs in prop::collection::vec((0.0..10.0f64, 0.0..600.0f64), 3..30)) {
        prop_assume!(pairs.iter().any(|p| (p.0 - pairs[0].0).abs() > 1e-6));
        let r = grips_regression(&pairs).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.r_squared));
        prop_assert!((0.0..=1.0).contains(&r.p));
    }

    #[test]
    fn exact_line_has_unit_r_squared(xs in prop::collection::vec(0.0..10.0f64, 3..30), a in -100.0..100.0f64, b in prop_oneof![-50.0..-0.1f64, 0.1..50.0f64]) {
        prop_assume!(xs.iter().any(|x| (x - xs[0]).abs() > 1e-3));
        let pairs: Vec<(f64, f64)> = xs.iter().map(|x| (*x, a + b * x)).collect();
        let r = grips_regression(&pairs).unwrap();
        prop_assert!((r.r_squared - 1.0).abs() < 1e-9);
    }
}
