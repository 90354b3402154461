//! Witness conditions, identities and detection equivalences.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{draw_state, random_hermitian, run_slots, PropertyReport, Slot, StateKind, Suite, SuiteConfig, Tally};
use crate::channels::detexture;
use crate::error::Result;
use crate::linalg::{max_abs_diff, HermitianOperator};
use crate::measures::t_fidelity;
use crate::states::{free_state, DensityMatrix, TextureRng};
use crate::witnesses::{
    evaluate_witness, free_diagonal, imaginarity_witness, jk_canonical_state, theta_threshold,
    universal_preimage, universal_witness, witness_jk, witness_theta, witness_w1, ImaginaritySign,
    Witness, DETECTION_BAND,
};

const EXACT_TOL: f64 = 1e-12;
const ROUND_TRIP_TOL: f64 = 1e-10;
/// Pairs this close to the threshold are not classified.
const THRESHOLD_BAND: f64 = 1e-9;
/// Offset from the threshold in the boundary sweep.
const SWEEP_OFFSET: f64 = 1e-6;
const SWEEP_STEPS: usize = 60;

pub fn run_witness_suite(cfg: &SuiteConfig) -> Result<PropertyReport> {
    run_slots(cfg, Suite::Witnesses, "witnesses", |t, slot, rng| {
        if let Err(e) = witness_slot(t, slot, rng, cfg) {
            t.error(slot, "witness.sampling", || "sampling".into(), &e);
        }
    })
}

/// Both witness conditions, checked on the stored certificate and on the
/// ground projector.
fn conditions(t: &mut Tally, slot: Slot, w: &Witness) -> Result<()> {
    let name = || w.family().to_string();
    let cert = w.certificate();
    t.check(slot, "witness.free_nonnegative", name, -cert.free_expectation, 0.0, DETECTION_BAND);
    let ground = cert.ground_state.density();
    let r = evaluate_witness(w, &ground)?;
    t.check_true(slot, "witness.ground_detected", name, r.detected);
    t.check(slot, "witness.ground_not_free", name, -t_fidelity(&ground).value, -DETECTION_BAND, 0.0);
    Ok(())
}

fn witness_slot(t: &mut Tally, slot: Slot, rng: &mut TextureRng, cfg: &SuiteConfig) -> Result<()> {
    let d = slot.dim;
    let kind = StateKind::for_index(slot.idx);
    let rho = draw_state(d, kind, rng)?;
    let tf = t_fidelity(&rho).value;
    let tag = |s: String| format!("state={};{s}", kind.name());

    let w1 = witness_w1(d)?;
    conditions(t, slot, &w1)?;
    let e = evaluate_witness(&w1, &rho)?.expectation;
    t.check_close(slot, "witness.w1_identity", || tag(String::new()), e, -tf, EXACT_TOL);

    // Theta family: one grid angle and one random angle per slot.
    let mut thetas = Vec::with_capacity(2);
    if !cfg.theta_grid.is_empty() {
        thetas.push(cfg.theta_grid[slot.idx % cfg.theta_grid.len()]);
    }
    thetas.push(FRAC_PI_4 + FRAC_PI_2 * (1.0 - rng.uniform()));
    for &theta in &thetas {
        let w = witness_theta(d, theta)?;
        conditions(t, slot, &w)?;
        let tau = theta_threshold(theta)?;
        let r = evaluate_witness(&w, &rho)?;
        let desc = || tag(format!("theta={theta},tau={tau},tf={tf},e={}", r.expectation));
        if (tf - tau).abs() > THRESHOLD_BAND {
            t.check_true(slot, "witness.theta_equivalence", desc, r.detected == (tf > tau));
        }
        let back = r.derived_tf.unwrap_or(f64::NAN);
        t.check_close(slot, "witness.theta_round_trip", desc, back, tf, ROUND_TRIP_TOL);
    }
    if let Some(&theta) = cfg.theta_grid.get(slot.idx % cfg.theta_grid.len().max(1)) {
        boundary_sweep(t, slot, rng, theta, &rho)?;
    }

    // Off-diagonal phase family.
    let j = rng.below(d);
    let k = (j + 1 + rng.below(d - 1)) % d;
    let mut phis = Vec::with_capacity(2);
    if !cfg.phi_grid.is_empty() {
        phis.push(cfg.phi_grid[slot.idx % cfg.phi_grid.len()]);
    }
    let u = rng.uniform();
    if u > 0.0 {
        phis.push(2.0 * PI * u);
    }
    let f1 = free_state(d)?;
    for &phi in &phis {
        let w = witness_jk(d, j, k, phi)?;
        conditions(t, slot, &w)?;
        let desc = || tag(format!("j={j},k={k},phi={phi}"));
        let e_free = evaluate_witness(&w, &f1)?.expectation;
        t.check_close(slot, "witness.jk_free_zero", desc, e_free, 0.0, EXACT_TOL);
        let e = evaluate_witness(&w, &rho)?.expectation;
        let rho_jk = rho.matrix()[(j, k)];
        let formula = 2.0 * phi.cos() / d as f64 - 2.0 * (Complex64::from_polar(1.0, -phi) * rho_jk).re;
        t.check_close(slot, "witness.jk_expectation", desc, e, formula, EXACT_TOL);
        let canon = jk_canonical_state(d, j, k, phi)?.density();
        let r = evaluate_witness(&w, &canon)?;
        t.check_close(slot, "witness.jk_canonical", desc, r.expectation, 2.0 * phi.cos() / d as f64 - 1.0, EXACT_TOL);
        t.check_true(slot, "witness.jk_canonical_detected", desc, r.detected);
    }

    // Imaginarity witnesses.
    let im = rho.matrix()[(j, k)].im;
    let real_part = DensityMatrix::new(HermitianOperator::new(rho.matrix().map(|z| Complex64::new(z.re, 0.0)))?)?;
    for (sign, s) in [(ImaginaritySign::Positive, -1.0), (ImaginaritySign::Negative, 1.0)] {
        let w = imaginarity_witness(d, j, k, sign)?;
        conditions(t, slot, &w)?;
        let desc = || tag(format!("j={j},k={k},sign={sign},im={im}"));
        let r = evaluate_witness(&w, &rho)?;
        t.check_close(slot, "witness.imag_identity", desc, r.expectation, s * 2.0 * im, EXACT_TOL);
        if im.abs() > DETECTION_BAND {
            // W+ detects Im > 0, W- detects Im < 0.
            t.check_true(slot, "witness.imag_sign", desc, r.detected == (s * im < 0.0));
        }
        let rr = evaluate_witness(&w, &real_part)?;
        t.check_close(slot, "witness.imag_real_state", desc, rr.expectation, 0.0, EXACT_TOL);
        t.check_true(slot, "witness.imag_real_state", desc, !rr.detected);
    }

    // Universal construction from a random Hermitian operator.
    let a = random_hermitian(d, rng);
    let w = universal_witness(&a)?;
    conditions(t, slot, &w)?;
    t.check_close(slot, "witness.universal_zero", || "random A".into(), free_diagonal(w.operator()), 0.0, EXACT_TOL);
    match universal_preimage(w.operator(), EXACT_TOL) {
        Some(pre) => {
            let rebuilt = detexture(&pre).sub(&pre);
            let diff = max_abs_diff(rebuilt.matrix(), w.operator().matrix());
            t.check_close(slot, "witness.universal_preimage", || "random A".into(), diff, 0.0, EXACT_TOL);
        }
        None => t.check_true(slot, "witness.universal_preimage", || "random A".into(), false),
    }

    if slot.idx == 0 {
        // The generator-based witness has <f1|W|f1> = 1, so it has no preimage.
        let w = witness_theta(d, FRAC_PI_2)?;
        let fd = free_diagonal(w.operator());
        t.check_close(slot, "witness.non_universality", || "theta=pi/2".into(), fd, 1.0, EXACT_TOL);
        t.check_true(slot, "witness.non_universality", || "theta=pi/2 preimage".into(), universal_preimage(w.operator(), EXACT_TOL).is_none());
    }
    Ok(())
}

/// Tunes `ρ_t = (1−t) f1 + t ρ_hot` to `T_F = τ ± 1e-6` and checks that
/// detection flips across the threshold.
fn boundary_sweep(t: &mut Tally, slot: Slot, rng: &mut TextureRng, theta: f64, rho: &DensityMatrix) -> Result<()> {
    let d = slot.dim;
    let tau = theta_threshold(theta)?;
    let hot = if t_fidelity(rho).value > tau + 10.0 * SWEEP_OFFSET {
        rho.clone()
    } else {
        draw_state(d, StateKind::OrthogonalToFree, rng)?
    };
    let f1 = free_state(d)?;
    let w = witness_theta(d, theta)?;
    for (offset, want) in [(SWEEP_OFFSET, true), (-SWEEP_OFFSET, false)] {
        let target = tau + offset;
        if !(0.0..=t_fidelity(&hot).value).contains(&target) {
            continue;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..SWEEP_STEPS {
            let mid = 0.5 * (lo + hi);
            if t_fidelity(&hot.mix(&f1, mid)?).value < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let state = hot.mix(&f1, 0.5 * (lo + hi))?;
        let r = evaluate_witness(&w, &state)?;
        t.check_true(
            slot,
            "witness.boundary_sweep",
            || format!("theta={theta},tau={tau},offset={offset},e={}", r.expectation),
            r.detected == want,
        );
    }
    Ok(())
}
