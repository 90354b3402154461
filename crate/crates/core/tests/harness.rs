use qtexture::harness::{
    run_all, run_axiom_suite, run_proposition_suite, run_purity_control, run_witness_suite,
    SuiteConfig,
};

fn small() -> SuiteConfig {
    SuiteConfig {
        dims: vec![2, 3, 4],
        samples_per_dim: 24,
        ..SuiteConfig::default()
    }
}

fn show(r: &qtexture::harness::PropertyReport) {
    for v in &r.violations {
        eprintln!("{v:?}");
    }
}

#[test]
fn axioms_pass_on_small_config() {
    let r = run_axiom_suite(&small()).unwrap();
    show(&r);
    assert!(r.passed);
    assert!(r.checks_run > 1000);
    assert!(r.properties.contains_key("axiom.monotonicity.isometry"));
}

#[test]
fn skipped_infinite_counted_separately() {
    let r = run_axiom_suite(&small()).unwrap();
    assert!(r.skipped_infinite > 0, "orthogonal-to-f1 samples give infinite rugosity");
}

#[test]
fn propositions_pass_on_small_config() {
    let r = run_proposition_suite(&small()).unwrap();
    show(&r);
    assert!(r.passed);
    for p in [
        "gr.z_monotone",
        "gr.diagonal_divergence_monotone",
        "unitary_invariance",
        "gr.tensor_subadditive",
        "gr.tensor_supermultiplicative",
        "fidelity_le_rugosity",
        "fuchs_van_de_graaf.lower",
        "fuchs_van_de_graaf.upper",
        "fidelity_le_weight",
        "fidelity_le_scaled_renyi",
        "renyi.alpha_monotone",
        "weight.oracle",
        "gr.dual_path",
    ] {
        assert!(r.properties[p].checks > 0, "{p}");
    }
}

#[test]
fn witnesses_pass_on_small_config() {
    let r = run_witness_suite(&small()).unwrap();
    show(&r);
    assert!(r.passed);
    assert!(r.properties["witness.w1_identity"].worst_slack.unwrap() < 1e-12);
    assert!(r.properties["witness.boundary_sweep"].checks > 0);
}

#[test]
fn purity_control_fails_monotonicity() {
    let r = run_purity_control(&small()).unwrap();
    assert!(!r.passed);
    assert!(r.violations_with_prefix("axiom.monotonicity") > 0);
    assert!(!r.violations.is_empty());
}

#[test]
fn empty_dims_is_a_vacuous_pass() {
    let cfg = SuiteConfig {
        dims: vec![],
        ..SuiteConfig::default()
    };
    for r in run_all(&cfg).unwrap() {
        assert_eq!(r.checks_run, 0);
        assert!(r.passed);
        assert!(!r.warnings.is_empty());
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = SuiteConfig {
        dims: vec![2, 5],
        samples_per_dim: 6,
        seed: 9,
        ..SuiteConfig::default()
    };
    let a = serde_json::to_string(&run_all(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_all(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = SuiteConfig { seed: 10, ..cfg };
    let c = run_all(&other).unwrap();
    assert!(c.iter().all(|r| r.passed));
    assert_ne!(a, serde_json::to_string(&c).unwrap());
}

#[test]
fn tiny_tolerance_surfaces_near_misses() {
    let cfg = SuiteConfig {
        dims: vec![3],
        samples_per_dim: 6,
        tolerance: 1e-30,
        ..SuiteConfig::default()
    };
    let r = run_axiom_suite(&cfg).unwrap();
    assert!(!r.passed);
    let v = &r.violations[0];
    assert!(v.slack > 0.0 && v.slack < 1e-9, "{v:?}");
}

#[test]
fn invalid_config_is_rejected() {
    let bad = [
        SuiteConfig { dims: vec![1], ..SuiteConfig::default() },
        SuiteConfig { dims: vec![17], ..SuiteConfig::default() },
        SuiteConfig { samples_per_dim: 0, ..SuiteConfig::default() },
        SuiteConfig { alpha_grid: vec![1.0], ..SuiteConfig::default() },
        SuiteConfig { theta_grid: vec![0.5], ..SuiteConfig::default() },
        SuiteConfig { mu_grid: vec![0.0], ..SuiteConfig::default() },
    ];
    for cfg in bad {
        assert!(run_axiom_suite(&cfg).is_err(), "{cfg:?}");
    }
}

#[test]
fn z_values_start_at_the_domain_edge() {
    let cfg = SuiteConfig::default();
    assert_eq!(cfg.z_values(0.1), vec![0.9, 1.0, 1.5, 2.0]);
    assert_eq!(cfg.z_values(0.5), vec![0.5, 0.75, 1.0, 1.5, 2.0]);
    assert_eq!(cfg.z_values(0.75), vec![0.75, 1.0, 1.5, 2.0]);
    assert_eq!(cfg.renyi_alphas().len(), 5);
}
