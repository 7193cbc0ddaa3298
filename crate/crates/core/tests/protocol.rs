use jtd::langevin::{JunctionConfig, Signal};
use jtd::protocol::{
    bandwidth_scan, detect, nominal_bandwidth, photon_pulse, sweep_amplitude, sweep_kappa,
    sweep_phi0, DetectionSpec, ScdCache, DEFAULT_AUC_THRESHOLD,
};

fn cw_spec(n_runs: u64, kappa: f64, phi0: f64, i_mw: f64) -> DetectionSpec {
    DetectionSpec {
        n_runs,
        master_seed: 77,
        config: JunctionConfig {
            phi0,
            ..JunctionConfig::default()
        },
        kappa,
        signal: Signal::Cw {
            i_mw,
            omega_mw: 1.0,
        },
    }
}

#[test]
fn strong_signal_is_detected() {
    let (p0, p1) = cw_spec(400, 5.0, 0.2, 1e-3).pair();
    let out = detect(&p0, &p1, DEFAULT_AUC_THRESHOLD).unwrap();
    assert!(out.detectable);
    assert!(out.comparison.auc_star > 0.95, "{:?}", out.comparison);
    assert_eq!(out.roc.n0 as u64, out.scd0.n_switched());
}

#[test]
fn absent_signal_is_not_detected() {
    let (p0, p1) = cw_spec(400, 5.0, 0.2, 0.0).pair();
    let out = detect(&p0, &p1, DEFAULT_AUC_THRESHOLD).unwrap();
    assert!(!out.detectable);
    // 400 vs 400 samples: null AUC has σ ≈ 0.02.
    assert!(out.comparison.auc_star < 0.6);
}

#[test]
fn single_point_kappa_sweep() {
    let cache = ScdCache::new();
    let c = sweep_kappa(&cw_spec(64, 5.0, 0.2, 1e-3), &[6.0], 0.7, &cache).unwrap();
    assert_eq!(c.points.len(), 1);
    assert_eq!(c.argmax().unwrap().value, 6.0);
    assert_eq!(cache.len(), 2);
}

#[test]
fn sweeps_are_deterministic() {
    let base = cw_spec(64, 5.0, 0.1, 1e-3);
    let a = sweep_phi0(&base, &[0.05, 0.2], 0.7, &ScdCache::new()).unwrap();
    let b = sweep_phi0(&base, &[0.05, 0.2], 0.7, &ScdCache::new()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn amplitude_sweep_shares_background() {
    let cache = ScdCache::new();
    let base = cw_spec(64, 5.0, 0.2, 1e-3);
    let s = sweep_amplitude(&base, &[0.0, 5e-4, 1e-3], 0.7, &cache).unwrap();
    // One background plus three signal ensembles.
    assert_eq!(cache.len(), 4);
    assert!(s.curve.points[0].auc_star < s.curve.points[2].auc_star);
    assert!(sweep_amplitude(&base, &[1e-3, 5e-4], 0.7, &cache).is_err());
}

#[test]
fn band_center_matches_amplitude_endpoint() {
    let cache = ScdCache::new();
    let base = cw_spec(64, 5.0, 0.2, 1e-3);
    let amp = sweep_amplitude(&base, &[1e-3], 0.7, &cache).unwrap();
    let band = bandwidth_scan(&base, &[1.0], 0.7, &cache).unwrap();
    assert_eq!(band.curve.points[0].auc_star, amp.curve.points[0].auc_star);
    assert_eq!(band.band, nominal_bandwidth(1e-4));
    assert_eq!(band.band, 1e-4);
}

#[test]
fn pulse_arrives_mid_ramp() {
    let v = 8.6e-4;
    match photon_pulse(1.0, v) {
        Signal::Pulse { tau_d, i_ph, tau_ph, .. } => {
            assert!((tau_d - 0.5 / v).abs() < 1e-9);
            assert_eq!((i_ph, tau_ph), (0.005, 356.0));
        }
        other => panic!("{other:?}"),
    }
}
