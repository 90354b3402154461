//! Closed forms and cross-checks against independent computations.

use approx::assert_abs_diff_eq;

use qtexture::harness::{draw_state, StateKind};
use qtexture::linalg::{matrix_power_psd, trace_norm};
use qtexture::measures::{
    oracle, overlap, t_bures, t_fidelity, t_gr, t_renyi, t_rugosity, t_trace, t_tsallis,
    t_weight, AlphaZParams,
};
use qtexture::states::{basis_state, free_state, random_mixed, DensityMatrix};
use qtexture::TextureRng;

fn grid() -> Vec<AlphaZParams> {
    let mut v = Vec::new();
    for k in 1..=9 {
        let a = k as f64 / 10.0;
        for z in [AlphaZParams::min_z(a), 1.0, 1.5, 2.0] {
            if let Ok(p) = AlphaZParams::new(a, z) {
                v.push(p);
            }
        }
    }
    v
}

#[test]
fn basis_state_closed_forms() {
    for d in 2..=8 {
        let df = d as f64;
        let rho = basis_state(d, d - 1).unwrap().density();
        assert_abs_diff_eq!(t_fidelity(&rho).value, 1.0 - 1.0 / df, epsilon = 1e-12);
        assert_abs_diff_eq!(t_rugosity(&rho).value, df.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(t_weight(&rho).value, 1.0, epsilon = 1e-12);
        // pure states: 1/2 |||0><0| - f1||_1 = sqrt(1 - |<0|f1>|^2)
        assert_abs_diff_eq!(t_trace(&rho).unwrap().value, (1.0 - 1.0 / df).sqrt(), epsilon = 1e-12);
        for p in grid() {
            // rho^s = rho for a pure state
            let expect = 1.0 - df.powf(-p.z());
            assert_abs_diff_eq!(t_gr(&rho, p).unwrap().value, expect, epsilon = 1e-12);
        }
    }
}

#[test]
fn maximally_mixed_is_independent_of_z() {
    for d in 2..=6 {
        let rho = DensityMatrix::maximally_mixed(d).unwrap();
        for p in grid() {
            let expect = 1.0 - (d as f64).powf(p.alpha() - 1.0);
            assert_abs_diff_eq!(t_gr(&rho, p).unwrap().value, expect, epsilon = 1e-12);
        }
    }
}

#[test]
fn weight_of_pure_states_other_than_f1_is_one() {
    let mut rng = TextureRng::new(31);
    for d in 2..=6 {
        for _ in 0..20 {
            let rho = draw_state(d, StateKind::Pure, &mut rng).unwrap();
            assert_abs_diff_eq!(t_weight(&rho).value, 1.0, epsilon = 1e-10);
        }
    }
}

#[test]
fn weight_matches_oracle_on_all_state_kinds() {
    let mut rng = TextureRng::new(5);
    let mut worst: f64 = 0.0;
    for i in 0..600 {
        let d = 2 + i % 5;
        let rho = draw_state(d, StateKind::for_index(i), &mut rng).unwrap();
        let gap = (t_weight(&rho).value - oracle::weight_by_bisection(&rho).unwrap()).abs();
        worst = worst.max(gap);
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn weight_of_mixture_with_free_state() {
    // rho = (1 - s) f1 + s tau with tau orthogonal to f1 has weight exactly s
    let mut rng = TextureRng::new(8);
    for d in 2..=6 {
        let tau = draw_state(d, StateKind::OrthogonalToFree, &mut rng).unwrap();
        for s in [0.1, 0.4, 0.9] {
            let rho = tau.mix(&free_state(d).unwrap(), s).unwrap();
            assert_abs_diff_eq!(t_weight(&rho).value, s, epsilon = 1e-10);
        }
    }
}

#[test]
fn trace_distance_of_two_level_states() {
    // For d = 2 the trace distance to f1 is the Bloch-vector distance / 2.
    let mut rng = TextureRng::new(2);
    for _ in 0..50 {
        let rho = random_mixed(2, 2, &mut rng).unwrap();
        let m = rho.matrix();
        let (x, y, z) = (2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re);
        let dist = ((x - 1.0).powi(2) + y * y + z * z).sqrt() / 2.0;
        assert_abs_diff_eq!(t_trace(&rho).unwrap().value, dist, epsilon = 1e-12);
    }
}

#[test]
fn specializations_agree() {
    let mut rng = TextureRng::new(12);
    for i in 0..500 {
        let d = 2 + i % 5;
        let rho = draw_state(d, StateKind::for_index(i), &mut rng).unwrap();
        let half = t_gr(&rho, AlphaZParams::new(0.5, 0.5).unwrap()).unwrap().value;
        assert_abs_diff_eq!(2.0 * half, t_bures(&rho).value, epsilon = 1e-10);
        for mu in [0.2, 0.5, 0.8] {
            let g = t_gr(&rho, AlphaZParams::new(1.0 - mu, 1.0).unwrap()).unwrap().value;
            assert_abs_diff_eq!(g / (1.0 - mu), t_tsallis(&rho, mu).unwrap().value, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(t_renyi(&rho, 0.5).unwrap().value, 2.0 * t_fidelity(&rho).value, epsilon = 1e-10);
    }
}

#[test]
fn renyi_from_explicit_matrix_power() {
    let mut rng = TextureRng::new(4);
    for d in 2..=5 {
        let rho = random_mixed(d, d, &mut rng).unwrap();
        let f1 = free_state(d).unwrap();
        for a in [0.5, 0.65, 0.8, 0.95] {
            let pw = matrix_power_psd(rho.operator(), (1.0 - a) / a).unwrap();
            let q = qtexture::linalg::expectation(&pw, f1.operator()).unwrap();
            let expect = (1.0 - q.powf(a / (1.0 - a))) / (1.0 - a);
            assert_abs_diff_eq!(t_renyi(&rho, a).unwrap().value, expect, epsilon = 1e-12);
        }
    }
}

#[test]
fn trace_distance_from_explicit_difference() {
    let mut rng = TextureRng::new(6);
    for d in 2..=6 {
        let rho = random_mixed(d, 2, &mut rng).unwrap();
        let diff = rho.operator().sub(free_state(d).unwrap().operator());
        assert_abs_diff_eq!(t_trace(&rho).unwrap().value, 0.5 * trace_norm(&diff).unwrap(), epsilon = 1e-15);
    }
}

#[test]
fn rugosity_is_infinite_only_without_overlap() {
    let mut rng = TextureRng::new(3);
    for d in 2..=6 {
        let rho = draw_state(d, StateKind::OrthogonalToFree, &mut rng).unwrap();
        assert_eq!(overlap(&rho), 0.0);
        assert!(t_rugosity(&rho).is_infinite());
        assert_abs_diff_eq!(t_fidelity(&rho).value, 1.0, epsilon = 1e-15);
        let near = rho.mix(&free_state(d).unwrap(), 1.0 - 1e-12).unwrap();
        assert!(t_rugosity(&near).value.is_finite());
    }
}

/// `T^GR_{α,α}` is not monotone in `α` on `[½, 1)`: it falls for `I/d` and
/// rises for pure states. The harness checks monotonicity of `D_{α,α}`
/// instead, which does hold.
#[test]
fn diagonal_alpha_z_measure_is_not_monotone() {
    let diag = |rho: &DensityMatrix, a: f64| t_gr(rho, AlphaZParams::new(a, a).unwrap()).unwrap().value;
    let mixed = DensityMatrix::maximally_mixed(2).unwrap();
    assert!(diag(&mixed, 0.5) > diag(&mixed, 0.9) + 0.2);
    let pure = basis_state(2, 0).unwrap().density();
    assert!(diag(&pure, 0.5) < diag(&pure, 0.9) - 0.1);
}
