use std::cmp::Ordering;

use jtd::discriminator::{auc, d_kc, rank_statistic, roc_curve};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

fn pair_count(p0: &[f64], p1: &[f64]) -> f64 {
    let mut s = 0.0;
    for &y in p1 {
        for &x in p0 {
            s += match y.partial_cmp(&x).unwrap() {
                Ordering::Greater => 1.0,
                Ordering::Equal => 0.5,
                Ordering::Less => 0.0,
            };
        }
    }
    s / (p0.len() * p1.len()) as f64
}

#[test]
fn trapezoid_equals_pair_count_on_random_instances() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2024);
    for _ in 0..1000 {
        let n0 = rng.random_range(1..40);
        let n1 = rng.random_range(1..40);
        // Coarse values force plenty of ties.
        let levels = rng.random_range(2..50);
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n).map(|_| rng.random_range(0..levels) as f64 / levels as f64).collect()
        };
        let p0 = draw(n0);
        let p1 = draw(n1);
        let oracle = pair_count(&p0, &p1);
        assert!((auc(&p0, &p1).unwrap() - oracle).abs() < 1e-12);
        assert!((rank_statistic(&p0, &p1).unwrap() - oracle).abs() < 1e-12);
    }
}

#[test]
fn hundred_by_hundred_continuous_samples() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
    let p0: Vec<f64> = (0..100).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let p1: Vec<f64> = (0..100).map(|_| 0.5 + rng.sample::<f64, _>(StandardNormal)).collect();
    assert!((auc(&p0, &p1).unwrap() - pair_count(&p0, &p1)).abs() < 1e-12);
}

#[test]
fn d_kc_on_unit_gaussians() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
    let p0: Vec<f64> = (0..20_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let p1: Vec<f64> = (0..20_000).map(|_| 1.0 + rng.sample::<f64, _>(StandardNormal)).collect();
    let d = d_kc(&p0, &p1).unwrap();
    assert!((d - 1.0).abs() < 0.1, "d_kc {d}");
}

fn samples() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-100.0f64..100.0, 2..60)
}

proptest! {
    #[test]
    fn swapping_roles_complements(a in samples(), b in samples()) {
        let x = auc(&a, &b).unwrap();
        let y = auc(&b, &a).unwrap();
        prop_assert!((x + y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_transform_preserves_auc(a in samples(), b in samples()) {
        let f = |x: &f64| (x / 37.0).exp() + x.powi(3);
        let ta: Vec<f64> = a.iter().map(f).collect();
        let tb: Vec<f64> = b.iter().map(f).collect();
        prop_assert_eq!(auc(&a, &b).unwrap(), auc(&ta, &tb).unwrap());
    }

    #[test]
    fn curve_is_monotone_and_spans_unit_square(a in samples(), b in samples()) {
        let roc = roc_curve(&a, &b).unwrap();
        prop_assert_eq!((roc.points[0].fpr, roc.points[0].tpr), (0.0, 0.0));
        let last = roc.points.last().unwrap();
        prop_assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        for w in roc.points.windows(2) {
            prop_assert!(w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr);
        }
        prop_assert!((0.0..=1.0).contains(&roc.auc));
    }

    #[test]
    fn duplicated_thresholds_do_not_change_area(a in samples(), b in samples()) {
        // Repeating every sample duplicates every threshold.
        let a2: Vec<f64> = a.iter().chain(&a).copied().collect();
        let b2: Vec<f64> = b.iter().chain(&b).copied().collect();
        prop_assert!((auc(&a, &b).unwrap() - auc(&a2, &b2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn self_comparison_is_one_half(a in samples()) {
        prop_assert_eq!(auc(&a, &a).unwrap(), 0.5);
    }

    #[test]
    fn d_kc_is_affine_invariant(a in samples(), b in samples(), c in -50.0f64..50.0, s in 0.01f64..100.0) {
        if let Ok(d) = d_kc(&a, &b) {
            let ta: Vec<f64> = a.iter().map(|x| s * x + c).collect();
            let tb: Vec<f64> = b.iter().map(|x| s * x + c).collect();
            let td = d_kc(&ta, &tb).unwrap();
            prop_assert!((td - d).abs() <= 1e-9 * d.max(1.0), "{} vs {}", td, d);
        }
    }
}
