//! Non-negativity, monotonicity under free channels, convexity.

use std::fmt;

use super::{draw_state, run_slots, PropertyReport, Slot, StateKind, Suite, SuiteConfig, Tally};
use crate::channels::{random_texture_free_channel, random_texture_free_unitary_mix, KrausChannel};
use crate::error::Result;
use crate::linalg::MAX_DIM;
use crate::measures::Measure;
use crate::states::{free_state, DensityMatrix, TextureRng};

/// Nonnegativity slack, fixed.
const NONNEG_TOL: f64 = 1e-10;

/// Something the axiom suite can be pointed at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Measure(Measure),
    /// `Tr ρ²`. Not monotone under free channels; used as a negative control.
    Purity,
}

impl Quantity {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            Quantity::Measure(m) => Ok(m.evaluate(rho)?.value),
            Quantity::Purity => Ok(rho.purity()),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Measure(m) => f.write_str(&m.label()),
            Quantity::Purity => f.write_str("purity"),
        }
    }
}

/// All measures from `cfg.measures()`.
pub fn run_axiom_suite(cfg: &SuiteConfig) -> Result<PropertyReport> {
    let qs: Vec<Quantity> = cfg.measures().into_iter().map(Quantity::Measure).collect();
    run_axiom_suite_with(cfg, &qs, "axioms")
}

/// The axiom suite with purity in place of the measures. A correct harness
/// reports monotonicity violations here.
pub fn run_purity_control(cfg: &SuiteConfig) -> Result<PropertyReport> {
    run_axiom_suite_with(cfg, &[Quantity::Purity], "axioms.purity_control")
}

pub fn run_axiom_suite_with(cfg: &SuiteConfig, quantities: &[Quantity], suite_id: &str) -> Result<PropertyReport> {
    let tol = cfg.tolerance;
    run_slots(cfg, Suite::Axioms, suite_id, |t, slot, rng| {
        if let Err(e) = axiom_slot(t, slot, rng, quantities, tol) {
            t.error(slot, "axiom.sampling", || "sampling".into(), &e);
        }
    })
}

fn axiom_slot(t: &mut Tally, slot: Slot, rng: &mut TextureRng, qs: &[Quantity], tol: f64) -> Result<()> {
    let d = slot.dim;
    let kind = StateKind::for_index(slot.idx);
    let rho = draw_state(d, kind, rng)?;
    let partner_kind = StateKind::for_index(slot.idx + 3);
    let other = draw_state(d, partner_kind, rng)?;
    let p = rng.uniform();
    let mixed = rho.mix(&other, p)?;

    let terms = 1 + rng.below(3);
    let unitary_mix = random_texture_free_unitary_mix(d, terms, rng)?;
    let env = 1 + rng.below(3.min(MAX_DIM / d));
    let isometry = random_texture_free_channel(d, env, rng)?;
    let channels: [(&str, String, &KrausChannel); 2] = [
        ("axiom.monotonicity.unitary_mix", format!("terms={terms}"), &unitary_mix),
        ("axiom.monotonicity.isometry", format!("env={env}"), &isometry),
    ];
    let mut outputs = Vec::with_capacity(2);
    for (_, desc, ch) in &channels {
        let report = ch.is_texture_free();
        let worst = report.residuals.iter().copied().fold(0.0, f64::max);
        t.check(slot, "channel.texture_free", || desc.clone(), worst, 0.0, crate::channels::FREE_RESIDUAL_TOL);
        outputs.push(ch.apply(&rho)?);
    }

    let f1 = if slot.idx == 0 { Some(free_state(d)?) } else { None };

    for q in qs {
        let params = |extra: &str| format!("{q};state={};{extra}", kind.name());
        if let Some(f1) = &f1 {
            match q.evaluate(f1) {
                Ok(v) => t.check_close(slot, "axiom.nonnegativity.free", || params("f1"), v, 0.0, NONNEG_TOL),
                Err(e) => t.error(slot, "axiom.nonnegativity.free", || params("f1"), &e),
            }
        }
        let m_rho = match q.evaluate(&rho) {
            Ok(v) => v,
            Err(e) => {
                t.error(slot, "axiom.nonnegativity", || params(""), &e);
                continue;
            }
        };
        t.check(slot, "axiom.nonnegativity", || params(""), -m_rho, 0.0, NONNEG_TOL);

        for ((property, desc, _), out) in channels.iter().zip(&outputs) {
            match q.evaluate(out) {
                Ok(v) => t.check(slot, property, || params(desc), v, m_rho, tol),
                Err(e) => t.error(slot, property, || params(desc), &e),
            }
        }

        let convex = q
            .evaluate(&other)
            .and_then(|m_other| Ok((m_other, q.evaluate(&mixed)?)));
        let desc = || params(&format!("partner={};p={p}", partner_kind.name()));
        match convex {
            Ok((m_other, m_mix)) => {
                t.check(slot, "axiom.convexity", desc, m_mix, p * m_rho + (1.0 - p) * m_other, tol)
            }
            Err(e) => t.error(slot, "axiom.convexity", desc, &e),
        }
    }
    Ok(())
}
