//! Seeded property suites.
//!
//! Each suite walks `dims × samples_per_dim` sample slots. Slot `(dim, idx)`
//! draws everything it needs from its own stream
//! [`sample_rng`]`(seed, suite, dim, idx)`, so a report is a pure function of
//! the config no matter how rayon schedules the work, and any violation can be
//! replayed from the `(dim, seed_offset)` it records.
//!
//! `tolerance` is the slack allowed on inequalities. Identity checks carry
//! their own fixed tolerances, listed per property in the report.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TextureError};
use crate::linalg::{ComplexMatrix, HermitianOperator, MAX_DIM};
use crate::measures::{AlphaZParams, Measure};
use crate::states::{random_mixed, random_pure, DensityMatrix, TextureRng};

mod axioms;
mod propositions;
mod witness;

pub use axioms::{run_axiom_suite, run_axiom_suite_with, run_purity_control, Quantity};
pub use propositions::run_proposition_suite;
pub use witness::run_witness_suite;

/// Largest dimension a suite accepts.
pub const MAX_SUITE_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub samples_per_dim: usize,
    pub seed: u64,
    /// Inequality slack.
    pub tolerance: f64,
    pub alpha_grid: Vec<f64>,
    /// Extra `z` values; `max(α, 1−α)` is always added for each `α`.
    pub z_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub mu_grid: Vec<f64>,
    pub phi_grid: Vec<f64>,
    /// Skip inequality checks with an infinite operand.
    pub skip_infinite: bool,
    /// Cap on `d_ρ · d_δ` for tensor-product checks.
    pub max_tensor_dim: usize,
    pub max_recorded_violations: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 5, 6],
            samples_per_dim: 200,
            seed: 42,
            tolerance: 1e-9,
            alpha_grid: (1..=9).map(|k| k as f64 / 10.0).collect(),
            z_grid: vec![0.75, 1.0, 1.5, 2.0],
            theta_grid: vec![0.8, 1.0, 1.25, FRAC_PI_2, 1.9, 2.1, 2.3, 3.0 * FRAC_PI_4],
            mu_grid: vec![0.1, 0.25, 0.5, 0.75, 0.9],
            phi_grid: vec![0.3, 1.0, FRAC_PI_2, 2.0, PI, 4.0, 1.5 * PI, 5.5],
            skip_infinite: true,
            max_tensor_dim: 36,
            max_recorded_violations: 50,
        }
    }
}

fn domain(param: &'static str, value: f64, reason: &'static str) -> TextureError {
    TextureError::Domain { param, value, reason }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        for &d in &self.dims {
            if !(2..=MAX_SUITE_DIM).contains(&d) {
                return Err(domain("dims", d as f64, "suite dimensions must lie in 2..=16"));
            }
        }
        if self.samples_per_dim == 0 {
            return Err(domain("samples_per_dim", 0.0, "need at least one sample"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(domain("tolerance", self.tolerance, "tolerance must be finite and >= 0"));
        }
        for &a in &self.alpha_grid {
            if !(a > 0.0 && a < 1.0) {
                return Err(domain("alpha_grid", a, "alpha must lie in (0, 1)"));
            }
        }
        for &z in &self.z_grid {
            if !(z > 0.0 && z.is_finite()) {
                return Err(domain("z_grid", z, "z must be positive"));
            }
        }
        for &t in &self.theta_grid {
            crate::witnesses::theta_threshold(t)?;
        }
        for &m in &self.mu_grid {
            if !(m > 0.0 && m < 1.0) {
                return Err(domain("mu_grid", m, "mu must lie in (0, 1)"));
            }
        }
        for &p in &self.phi_grid {
            if !(p > 0.0 && p < 2.0 * PI) {
                return Err(domain("phi_grid", p, "phi must lie in (0, 2pi)"));
            }
        }
        if self.max_tensor_dim > MAX_DIM {
            return Err(domain(
                "max_tensor_dim",
                self.max_tensor_dim as f64,
                "tensor dimension cap exceeds the matrix size cap",
            ));
        }
        if self.max_recorded_violations == 0 {
            return Err(domain("max_recorded_violations", 0.0, "must record at least one violation"));
        }
        Ok(())
    }

    /// Admissible `z` values for `α`, ascending, starting at `max(α, 1−α)`.
    pub fn z_values(&self, alpha: f64) -> Vec<f64> {
        let lo = AlphaZParams::min_z(alpha);
        let mut zs = vec![lo];
        zs.extend(self.z_grid.iter().copied().filter(|&z| z > lo + 1e-12));
        zs.sort_by(f64::total_cmp);
        zs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        zs
    }

    /// The `(α, z)` grid.
    pub fn alpha_z_grid(&self) -> Vec<AlphaZParams> {
        self.alpha_grid
            .iter()
            .flat_map(|&a| {
                self.z_values(a)
                    .into_iter()
                    .filter_map(move |z| AlphaZParams::new(a, z).ok())
            })
            .collect()
    }

    /// `α` grid restricted to `[½, 1)`, ascending.
    pub fn renyi_alphas(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.alpha_grid.iter().copied().filter(|&a| a >= 0.5).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Every measure instance the axiom suite checks.
    pub fn measures(&self) -> Vec<Measure> {
        let mut out: Vec<Measure> = self.alpha_z_grid().into_iter().map(Measure::AlphaZRenyi).collect();
        out.extend([
            Measure::Rugosity,
            Measure::Fidelity,
            Measure::TraceDistance,
            Measure::Weight,
        ]);
        out.extend(self.renyi_alphas().into_iter().map(Measure::SandwichedRenyi));
        out.push(Measure::Bures);
        out.extend(self.mu_grid.iter().map(|&m| Measure::Tsallis(m)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub property_id: String,
    pub dim: usize,
    /// Sample index; with the suite and `dim` it selects the RNG stream.
    pub seed_offset: usize,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`; the check requires `slack <= tolerance`.
    pub slack: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySummary {
    pub checks: usize,
    pub violations: usize,
    /// Largest signed `lhs − rhs` seen.
    pub worst_slack: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub suite_id: String,
    pub config: SuiteConfig,
    pub checks_run: usize,
    pub skipped_infinite: usize,
    pub violation_count: usize,
    /// The first `max_recorded_violations` violations in sample order.
    pub violations: Vec<Violation>,
    pub worst_slack: Option<f64>,
    pub passed: bool,
    pub properties: BTreeMap<String, PropertySummary>,
    pub warnings: Vec<String>,
}

impl PropertyReport {
    /// Violations of one property, including unrecorded ones.
    pub fn violations_of(&self, property_id: &str) -> usize {
        self.properties.get(property_id).map_or(0, |p| p.violations)
    }

    /// Summed over properties whose id starts with `prefix`.
    pub fn violations_with_prefix(&self, prefix: &str) -> usize {
        self.properties
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .map(|(_, p)| p.violations)
            .sum()
    }

    pub fn checks_with_prefix(&self, prefix: &str) -> usize {
        self.properties
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .map(|(_, p)| p.checks)
            .sum()
    }
}

/// Per-suite stream tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms = 1,
    Propositions = 2,
    Witnesses = 3,
}

/// The RNG stream of sample slot `(dim, idx)`.
pub fn sample_rng(seed: u64, suite: Suite, dim: usize, idx: usize) -> TextureRng {
    TextureRng::derived(seed, &[suite as u64, dim as u64, idx as u64])
}

/// Position of a check, for violation records.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Slot {
    pub dim: usize,
    pub idx: usize,
}

/// Check outcomes accumulated for one sample slot, or merged across slots.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    skip_infinite: bool,
    cap: usize,
    properties: BTreeMap<String, PropertySummary>,
    violations: Vec<Violation>,
    violation_count: usize,
    skipped_infinite: usize,
}

impl Tally {
    pub fn new(cfg: &SuiteConfig) -> Self {
        Self {
            skip_infinite: cfg.skip_infinite,
            cap: cfg.max_recorded_violations,
            ..Default::default()
        }
    }

    /// Requires `lhs − rhs <= tol`. NaN fails.
    pub fn check(
        &mut self,
        slot: Slot,
        property: &str,
        params: impl FnOnce() -> String,
        lhs: f64,
        rhs: f64,
        tol: f64,
    ) {
        if self.skip_infinite && (lhs.is_infinite() || rhs.is_infinite()) {
            self.skipped_infinite += 1;
            return;
        }
        let slack = if lhs == rhs { 0.0 } else { lhs - rhs };
        let ok = slack <= tol;
        self.record(slot, property, params, lhs, rhs, slack, tol, ok, None);
    }

    /// `|a − b| <= tol`. Equal infinities pass.
    pub fn check_close(
        &mut self,
        slot: Slot,
        property: &str,
        params: impl FnOnce() -> String,
        a: f64,
        b: f64,
        tol: f64,
    ) {
        if self.skip_infinite && a != b && (a.is_infinite() || b.is_infinite()) {
            self.skipped_infinite += 1;
            return;
        }
        let diff = if a == b { 0.0 } else { (a - b).abs() };
        let ok = diff <= tol;
        self.record(slot, property, params, a, b, diff, tol, ok, None);
    }

    /// A boolean condition, recorded with slack 1 on failure.
    pub fn check_true(&mut self, slot: Slot, property: &str, params: impl FnOnce() -> String, ok: bool) {
        let slack = if ok { 0.0 } else { 1.0 };
        self.record(slot, property, params, slack, 0.0, slack, 0.0, ok, None);
    }

    /// Records a computation that errored as a violation.
    pub fn error(&mut self, slot: Slot, property: &str, params: impl FnOnce() -> String, err: &TextureError) {
        self.record(
            slot,
            property,
            params,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            0.0,
            false,
            Some(err.to_string()),
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        slot: Slot,
        property: &str,
        params: impl FnOnce() -> String,
        lhs: f64,
        rhs: f64,
        slack: f64,
        tol: f64,
        ok: bool,
        detail: Option<String>,
    ) {
        let entry = self
            .properties
            .entry(property.to_string())
            .or_insert(PropertySummary {
                checks: 0,
                violations: 0,
                worst_slack: None,
                tolerance: tol,
            });
        entry.checks += 1;
        if !slack.is_nan() {
            entry.worst_slack = Some(entry.worst_slack.map_or(slack, |w| w.max(slack)));
        }
        if ok {
            return;
        }
        entry.violations += 1;
        self.violation_count += 1;
        if self.violations.len() < self.cap {
            self.violations.push(Violation {
                property_id: property.to_string(),
                dim: slot.dim,
                seed_offset: slot.idx,
                params: params(),
                lhs,
                rhs,
                slack,
                tolerance: tol,
                detail,
            });
        }
    }

    /// Appends `other`, which must come later in sample order.
    pub fn merge(&mut self, other: Tally) {
        for (k, p) in other.properties {
            match self.properties.get_mut(&k) {
                Some(mine) => {
                    mine.checks += p.checks;
                    mine.violations += p.violations;
                    mine.worst_slack = match (mine.worst_slack, p.worst_slack) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        (a, b) => a.or(b),
                    };
                }
                None => {
                    self.properties.insert(k, p);
                }
            }
        }
        let room = self.cap.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        self.violation_count += other.violation_count;
        self.skipped_infinite += other.skipped_infinite;
    }

    pub fn into_report(self, suite_id: &str, cfg: &SuiteConfig) -> PropertyReport {
        let checks_run = self.properties.values().map(|p| p.checks).sum();
        let worst_slack = self
            .properties
            .values()
            .filter_map(|p| p.worst_slack)
            .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))));
        let mut warnings = Vec::new();
        if checks_run == 0 {
            warnings.push("no checks were run; the pass is vacuous".to_string());
        }
        if self.violation_count > self.violations.len() {
            warnings.push(format!(
                "{} violations, only the first {} recorded",
                self.violation_count,
                self.violations.len()
            ));
        }
        PropertyReport {
            suite_id: suite_id.to_string(),
            config: cfg.clone(),
            checks_run,
            skipped_infinite: self.skipped_infinite,
            violation_count: self.violation_count,
            violations: self.violations,
            worst_slack,
            passed: self.violation_count == 0,
            properties: self.properties,
            warnings,
        }
    }
}

/// Runs `body` on every sample slot in parallel and merges in slot order.
pub(crate) fn run_slots<F>(cfg: &SuiteConfig, suite: Suite, suite_id: &str, body: F) -> Result<PropertyReport>
where
    F: Fn(&mut Tally, Slot, &mut TextureRng) + Sync,
{
    cfg.validate()?;
    let slots: Vec<Slot> = cfg
        .dims
        .iter()
        .flat_map(|&dim| (0..cfg.samples_per_dim).map(move |idx| Slot { dim, idx }))
        .collect();
    let tallies: Vec<Tally> = slots
        .par_iter()
        .map(|&slot| {
            let mut tally = Tally::new(cfg);
            let mut rng = sample_rng(cfg.seed, suite, slot.dim, slot.idx);
            body(&mut tally, slot, &mut rng);
            tally
        })
        .collect();
    let mut total = Tally::new(cfg);
    for t in tallies {
        total.merge(t);
    }
    Ok(total.into_report(suite_id, cfg))
}

/// Runs the axiom, proposition and witness suites.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        run_axiom_suite(cfg)?,
        run_proposition_suite(cfg)?,
        run_witness_suite(cfg)?,
    ])
}

/// The ensemble a sample slot draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Full-rank Ginibre state.
    FullRank,
    /// Ginibre state of random rank.
    RandomRank,
    Pure,
    /// `(1−ε) f1 + ε σ` with `ε` log-uniform in `[1e-6, 1e-1]`.
    NearFree,
    /// Supported on the complement of `|f1⟩` with exactly zero overlap:
    /// infinite rugosity.
    OrthogonalToFree,
    /// Diagonal with a uniformly random spectrum.
    Diagonal,
}

impl StateKind {
    const ALL: [StateKind; 6] = [
        StateKind::FullRank,
        StateKind::RandomRank,
        StateKind::Pure,
        StateKind::NearFree,
        StateKind::OrthogonalToFree,
        StateKind::Diagonal,
    ];

    /// Kinds cycle with the sample index.
    pub fn for_index(idx: usize) -> Self {
        Self::ALL[idx % Self::ALL.len()]
    }

    pub fn name(self) -> &'static str {
        match self {
            StateKind::FullRank => "full_rank",
            StateKind::RandomRank => "random_rank",
            StateKind::Pure => "pure",
            StateKind::NearFree => "near_free",
            StateKind::OrthogonalToFree => "orthogonal_to_free",
            StateKind::Diagonal => "diagonal",
        }
    }
}

/// Draws one state of the given kind.
pub fn draw_state(d: usize, kind: StateKind, rng: &mut TextureRng) -> Result<DensityMatrix> {
    match kind {
        StateKind::FullRank => random_mixed(d, d, rng),
        StateKind::RandomRank => {
            let r = 1 + rng.below(d);
            random_mixed(d, r, rng)
        }
        StateKind::Pure => Ok(random_pure(d, rng)?.density()),
        StateKind::NearFree => {
            let eps = 10f64.powf(-1.0 - 5.0 * rng.uniform());
            let sigma = random_mixed(d, d, rng)?;
            sigma.mix(&crate::states::free_state(d)?, eps)
        }
        StateKind::OrthogonalToFree => {
            // Mixture of (|a⟩ − |b⟩)/√2 over disjoint pairs of a random
            // permutation. Every row of ρ then sums to exactly zero, so the
            // computed overlap with f1 is exactly zero as well.
            let mut perm: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                perm.swap(i, rng.below(i + 1));
            }
            let pairs = 1 + rng.below(d / 2);
            let w = rng.simplex(pairs);
            let mut m = ComplexMatrix::zeros(d, d);
            for (n, &p) in w.iter().enumerate() {
                let (a, b) = (perm[2 * n], perm[2 * n + 1]);
                let h = Complex64::new(0.5 * p, 0.0);
                m[(a, a)] = h;
                m[(b, b)] = h;
                m[(a, b)] = -h;
                m[(b, a)] = -h;
            }
            DensityMatrix::from_computed_normalized(m)
        }
        StateKind::Diagonal => {
            let w = rng.simplex(d);
            DensityMatrix::new(HermitianOperator::diagonal(&w))
        }
    }
}

/// Random Hermitian `(G + G†)/2` with Ginibre `G`.
pub fn random_hermitian(d: usize, rng: &mut TextureRng) -> HermitianOperator {
    let g = rng.ginibre(d, d);
    HermitianOperator::from_computed(g)
}
