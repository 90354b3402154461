//! Inequalities and identities between the measures.

use super::{draw_state, run_slots, PropertyReport, Slot, StateKind, Suite, SuiteConfig, Tally};
use crate::error::Result;
use crate::measures::{
    d_alpha_z_free, f_alpha_z, f_alpha_z_trace_form, oracle, t_bures, t_fidelity, t_gr, t_renyi, t_rugosity,
    t_trace, t_tsallis, t_weight, AlphaZParams, Measure,
};
use crate::states::{basis_state, free_state, random_f1_fixing_unitary, DensityMatrix, TextureRng};

/// Closed forms and specialization identities.
const IDENTITY_TOL: f64 = 1e-10;
/// Weight oracle and dual-path agreement.
const CROSS_CHECK_TOL: f64 = 1e-8;
/// Mixing weight of the near-free Fuchs–van de Graaf probe.
const NEAR_FREE_EPS: f64 = 1e-3;

pub fn run_proposition_suite(cfg: &SuiteConfig) -> Result<PropertyReport> {
    let grid = cfg.alpha_z_grid();
    let renyi = cfg.renyi_alphas();
    let measures = cfg.measures();
    let tensor_partners: Vec<Vec<usize>> = cfg
        .dims
        .iter()
        .map(|&d| {
            cfg.dims
                .iter()
                .copied()
                .filter(|&d2| d * d2 <= cfg.max_tensor_dim)
                .collect()
        })
        .collect();
    let ctx = Ctx {
        cfg,
        grid: &grid,
        renyi: &renyi,
        measures: &measures,
    };
    run_slots(cfg, Suite::Propositions, "propositions", |t, slot, rng| {
        let di = cfg.dims.iter().position(|&d| d == slot.dim).unwrap_or(0);
        if let Err(e) = ctx.slot(t, slot, rng, &tensor_partners[di]) {
            t.error(slot, "proposition.sampling", || "sampling".into(), &e);
        }
    })
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    grid: &'a [AlphaZParams],
    renyi: &'a [f64],
    measures: &'a [Measure],
}

impl Ctx<'_> {
    fn slot(&self, t: &mut Tally, slot: Slot, rng: &mut TextureRng, partners: &[usize]) -> Result<()> {
        let d = slot.dim;
        let tol = self.cfg.tolerance;
        let kind = StateKind::for_index(slot.idx);
        let rho = draw_state(d, kind, rng)?;
        let tag = |s: String| format!("state={};{s}", kind.name());

        // T^GR over the grid, reused below.
        let mut gr = Vec::with_capacity(self.grid.len());
        for &p in self.grid {
            gr.push(t_gr(&rho, p)?.value);
        }

        // Monotone in z at fixed alpha.
        for (i, pi) in self.grid.iter().enumerate() {
            for (j, pj) in self.grid.iter().enumerate().skip(i + 1) {
                if pi.alpha() == pj.alpha() && pi.z() <= pj.z() {
                    t.check(slot, "gr.z_monotone", || tag(format!("alpha={},z1={},z2={}", pi.alpha(), pi.z(), pj.z())), gr[i], gr[j], tol);
                }
            }
        }

        // D_{a,a}(f1||rho) is non-decreasing in a on [1/2, 1). The measure
        // T^GR_{a,a} itself is not monotone in a; see the integration tests.
        let div: Vec<(f64, f64)> = self
            .renyi
            .iter()
            .map(|&a| Ok((a, d_alpha_z_free(&rho, AlphaZParams::new(a, a)?)?)))
            .collect::<Result<_>>()?;
        for (i, &(a1, v1)) in div.iter().enumerate() {
            for &(a2, v2) in &div[i + 1..] {
                t.check(slot, "gr.diagonal_divergence_monotone", || tag(format!("alpha1={a1},alpha2={a2}")), v1, v2, tol);
            }
        }

        // Invariance under f1-fixing unitaries.
        let u = random_f1_fixing_unitary(d, rng)?;
        let rotated = rho.conjugate_by(&u)?;
        for m in self.measures {
            let a = m.evaluate(&rho)?.value;
            let b = m.evaluate(&rotated)?.value;
            t.check_close(slot, "unitary_invariance", || tag(m.label()), b, a, tol);
        }

        // Tensor products.
        if !partners.is_empty() {
            let d2 = partners[slot.idx % partners.len()];
            let kind2 = StateKind::for_index(slot.idx / partners.len() + 1);
            let delta = draw_state(d2, kind2, rng)?;
            let joint = rho.tensor(&delta)?;
            for (i, &p) in self.grid.iter().enumerate() {
                let a = gr[i];
                let b = t_gr(&delta, p)?.value;
                let ab = t_gr(&joint, p)?.value;
                let desc = || tag(format!("{p};partner={}x{}", kind2.name(), d2));
                t.check(slot, "gr.tensor_subadditive", desc, ab, a + b, tol);
                t.check(slot, "gr.tensor_supermultiplicative", desc, a * b, ab, tol);
            }
        }

        let tf = t_fidelity(&rho).value;
        let tsr = t_rugosity(&rho).value;
        let ttr = t_trace(&rho)?.value;
        let tw = t_weight(&rho).value;
        t.check(slot, "fidelity_le_rugosity", || tag(String::new()), tf, tsr, tol);
        fvdg(t, slot, &tag(String::new()), tf, ttr, tol);
        t.check(slot, "fidelity_le_weight", || tag(String::new()), tf, tw, tol);

        let tr: Vec<f64> = self
            .renyi
            .iter()
            .map(|&a| Ok(t_renyi(&rho, a)?.value))
            .collect::<Result<_>>()?;
        for (i, &a1) in self.renyi.iter().enumerate() {
            t.check(slot, "fidelity_le_scaled_renyi", || tag(format!("alpha={a1}")), tf, (1.0 - a1) * tr[i], tol);
            for (j, &a2) in self.renyi.iter().enumerate().take(i) {
                // a2 <= a1: T^R_{a2} <= T^R_{a1}
                t.check(slot, "renyi.alpha_monotone", || tag(format!("alpha1={a1},alpha2={a2}")), tr[j], tr[i], tol);
            }
        }

        let tw_oracle = oracle::weight_by_bisection(&rho)?;
        t.check_close(slot, "weight.oracle", || tag(String::new()), tw, tw_oracle, CROSS_CHECK_TOL);

        for &p in self.grid {
            let a = f_alpha_z(&rho, p)?;
            let b = f_alpha_z_trace_form(&rho, p)?;
            t.check_close(slot, "gr.dual_path", || tag(p.to_string()), a, b, CROSS_CHECK_TOL);
        }

        let half = t_gr(&rho, AlphaZParams::new(0.5, 0.5)?)?.value;
        t.check_close(slot, "identity.bures", || tag(String::new()), 2.0 * half, t_bures(&rho).value, IDENTITY_TOL);
        for &mu in &self.cfg.mu_grid {
            let g = t_gr(&rho, AlphaZParams::new(1.0 - mu, 1.0)?)?.value;
            let ts = t_tsallis(&rho, mu)?.value;
            t.check_close(slot, "identity.tsallis", || tag(format!("mu={mu}")), g / (1.0 - mu), ts, IDENTITY_TOL);
        }
        let r_half = t_renyi(&rho, 0.5)?.value;
        t.check_close(slot, "identity.renyi_half", || tag(String::new()), r_half, 2.0 * tf, IDENTITY_TOL);

        if slot.idx == 0 {
            self.anchors(t, slot)?;
        }
        Ok(())
    }

    /// Closed forms at fixed states, once per dimension.
    fn anchors(&self, t: &mut Tally, slot: Slot) -> Result<()> {
        let d = slot.dim;
        let df = d as f64;
        let zero = basis_state(d, 0)?.density();
        let s = |x: &str| x.to_string();
        t.check_close(slot, "anchor.fidelity_basis", || s("|0>"), t_fidelity(&zero).value, 1.0 - 1.0 / df, IDENTITY_TOL);
        t.check_close(slot, "anchor.rugosity_basis", || s("|0>"), t_rugosity(&zero).value, df.ln(), IDENTITY_TOL);
        t.check_close(slot, "anchor.weight_pure", || s("|0>"), t_weight(&zero).value, 1.0, IDENTITY_TOL);
        if d == 2 {
            t.check_close(slot, "anchor.trace_basis", || s("|0>"), t_trace(&zero)?.value, 0.5f64.sqrt(), IDENTITY_TOL);
        }
        let mixed = DensityMatrix::maximally_mixed(d)?;
        for &p in self.grid {
            let expect = 1.0 - df.powf(p.alpha() - 1.0);
            t.check_close(slot, "anchor.gr_maximally_mixed", || p.to_string(), t_gr(&mixed, p)?.value, expect, IDENTITY_TOL);
        }

        // Fuchs–van de Graaf near f1, where the lower bound is tight.
        let near = mixed.mix(&free_state(d)?, NEAR_FREE_EPS)?;
        let tf = t_fidelity(&near).value;
        let ttr = t_trace(&near)?.value;
        fvdg(t, slot, "near_free eps=1e-3", tf, ttr, self.cfg.tolerance);
        Ok(())
    }
}

fn fvdg(t: &mut Tally, slot: Slot, desc: &str, tf: f64, ttr: f64, tol: f64) {
    let tf = tf.clamp(0.0, 1.0);
    let lower = 1.0 - (1.0 - tf).sqrt();
    let upper = tf.sqrt();
    t.check(slot, "fuchs_van_de_graaf.lower", || desc.to_string(), lower, ttr, tol);
    t.check(slot, "fuchs_van_de_graaf.upper", || desc.to_string(), ttr, upper, tol);
}
