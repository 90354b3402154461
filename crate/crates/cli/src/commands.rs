use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use qtexture::channels::{random_texture_free_channel, random_texture_free_unitary_mix};
use qtexture::harness::{self, PropertyReport, SuiteConfig};
use qtexture::interchange::MatrixFile;
use qtexture::measures::MeasureParams;
use qtexture::states::{random_f1_fixing_unitary, random_mixed, random_pure, DensityMatrix};
use qtexture::witnesses::{
    evaluate_witness, generator_g, imaginarity_witness, universal_witness, witness_jk,
    witness_theta, witness_w1, Witness,
};
use qtexture::{HermitianOperator, Measure, TextureRng};

use crate::parse::{self, WitnessSpec};
use crate::{GenKind, OutFormat, SuiteChoice};

fn read_file(path: &Path) -> Result<MatrixFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    MatrixFile::from_json(&text).with_context(|| format!("in {}", path.display()))
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    read_file(path)?
        .to_density()
        .with_context(|| format!("in {}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Shortest round-trip form, shared by JSON and CSV. Infinite values are
/// written as `inf`.
fn number(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        serde_json::to_string(&x).unwrap_or_else(|_| "nan".into())
    }
}

fn number_value(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(number(x))
    }
}

struct MeasureRow {
    measure: &'static str,
    alpha: Option<f64>,
    z: Option<f64>,
    mu: Option<f64>,
    value: f64,
}

pub fn measure(state: &Path, specs: &[String], format: OutFormat) -> Result<()> {
    let rho = load_state(state)?;
    let measures: Vec<Measure> = if specs.is_empty() {
        parse::DEFAULT_MEASURES.iter().map(|s| parse::measure(s)).collect::<Result<_>>()?
    } else {
        specs.iter().map(|s| parse::measure(s)).collect::<Result<_>>()?
    };
    let mut rows = Vec::with_capacity(measures.len());
    for m in &measures {
        let v = m.evaluate(&rho).with_context(|| format!("evaluating {}", m.label()))?;
        let (alpha, z, mu) = match v.params {
            MeasureParams::None => (None, None, None),
            MeasureParams::AlphaZ(p) => (Some(p.alpha()), Some(p.z()), None),
            MeasureParams::Alpha(a) => (Some(a), None, None),
            MeasureParams::Mu(m) => (None, None, Some(m)),
        };
        rows.push(MeasureRow {
            measure: v.id.short_name(),
            alpha,
            z,
            mu,
            value: v.value,
        });
    }
    let opt = |x: Option<f64>| x.map(number).unwrap_or_default();
    let text = match format {
        OutFormat::Text => {
            let mut s = String::new();
            for r in &rows {
                let mut params = Vec::new();
                for (k, v) in [("alpha", r.alpha), ("z", r.z), ("mu", r.mu)] {
                    if let Some(v) = v {
                        params.push(format!("{k}={}", number(v)));
                    }
                }
                s.push_str(&format!("{:<4} {:<18} {}\n", r.measure, params.join(","), number(r.value)));
            }
            s
        }
        OutFormat::Csv => {
            let mut s = String::from("measure,alpha,z,mu,value\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.measure,
                    opt(r.alpha),
                    opt(r.z),
                    opt(r.mu),
                    number(r.value)
                ));
            }
            s
        }
        OutFormat::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "measure": r.measure,
                        "alpha": r.alpha,
                        "z": r.z,
                        "mu": r.mu,
                        "value": number_value(r.value),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&arr)?)
        }
    };
    write_output(None, &text)
}

fn build_witness(spec: &WitnessSpec, d: usize) -> Result<Witness> {
    Ok(match spec {
        WitnessSpec::W1 => witness_w1(d)?,
        WitnessSpec::Generator => witness_theta(d, std::f64::consts::FRAC_PI_2)?,
        WitnessSpec::Theta(t) => witness_theta(d, *t)?,
        WitnessSpec::Jk { j, k, phi } => witness_jk(d, *j, *k, *phi)?,
        WitnessSpec::Imag { j, k, sign } => imaginarity_witness(d, *j, *k, *sign)?,
        WitnessSpec::Universal(path) => {
            let a = read_file(path)?
                .to_hermitian()
                .with_context(|| format!("in {}", path.display()))?;
            if a.dim() != d {
                bail!("dimension mismatch: A has dimension {}, expected {d}", a.dim());
            }
            universal_witness(&a)?
        }
    })
}

pub fn witness(spec: &str, state: &Path, format: OutFormat) -> Result<()> {
    let spec = parse::witness(spec)?;
    let rho = load_state(state)?;
    let w = build_witness(&spec, rho.dim())?;
    let r = evaluate_witness(&w, &rho)?;
    let text = match format {
        OutFormat::Json => {
            let v = json!({
                "expectation": r.expectation,
                "detected": r.detected,
                "boundary": r.boundary,
                "witness_family": r.witness_family,
                "derived_tf": r.derived_tf,
                "threshold": w.threshold(),
                "free_expectation": w.certificate().free_expectation,
                "min_eigenvalue": w.certificate().min_eigenvalue,
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        OutFormat::Csv => {
            let opt = |x: Option<f64>| x.map(number).unwrap_or_default();
            format!(
                "witness_family,expectation,detected,boundary,derived_tf,threshold\n{},{},{},{},{},{}\n",
                r.witness_family,
                number(r.expectation),
                r.detected,
                r.boundary,
                opt(r.derived_tf),
                opt(w.threshold())
            )
        }
        OutFormat::Text => {
            let mut s = format!(
                "family       {}\nexpectation  {}\ndetected     {}\n",
                r.witness_family,
                number(r.expectation),
                r.detected
            );
            if r.boundary {
                s.push_str("boundary     true (|expectation| <= 1e-10)\n");
            }
            if let Some(tf) = r.derived_tf {
                s.push_str(&format!("derived tF   {}\n", number(tf)));
            }
            if let Some(tau) = w.threshold() {
                s.push_str(&format!("threshold    {}\n", number(tau)));
            }
            s
        }
    };
    write_output(None, &text)
}

pub fn gen(kind: &GenKind, seed: u64, out: Option<&Path>) -> Result<()> {
    let mut rng = TextureRng::new(seed);
    let mut file = match kind {
        GenKind::State { dim, rank, pure } => {
            let rho = if *pure {
                random_pure(*dim, &mut rng)?.density()
            } else {
                random_mixed(*dim, rank.unwrap_or(*dim), &mut rng)?
            };
            let mut f = MatrixFile::from_density(&rho);
            f.generator = Some(if *pure {
                "pure".into()
            } else {
                format!("ginibre rank={}", rank.unwrap_or(*dim))
            });
            f
        }
        GenKind::Channel { dim, env, terms } => {
            let (ch, desc) = match terms {
                Some(n) => (random_texture_free_unitary_mix(*dim, *n, &mut rng)?, format!("unitary_mix terms={n}")),
                None => (random_texture_free_channel(*dim, *env, &mut rng)?, format!("isometry env={env}")),
            };
            let mut f = MatrixFile::from_channel(&ch);
            f.generator = Some(desc);
            f
        }
        GenKind::Unitary { dim } => {
            let mut f = MatrixFile::from_unitary(&random_f1_fixing_unitary(*dim, &mut rng)?);
            f.generator = Some("f1_fixing".into());
            f
        }
        GenKind::Witness { spec, dim } => {
            let parsed = parse::witness(spec)?;
            let (op, family, threshold): (HermitianOperator, String, Option<f64>) = match parsed {
                WitnessSpec::Generator => (generator_g(*dim)?, "generator".into(), Some(0.5)),
                other => {
                    let w = build_witness(&other, *dim)?;
                    (w.operator().clone(), w.family().to_string(), w.threshold())
                }
            };
            let mut f = MatrixFile::from_hermitian(&op);
            f.family = Some(family);
            f.threshold = threshold;
            f
        }
    };
    file.seed = Some(seed);
    write_output(out, &format!("{}\n", file.to_json()))
}

pub fn verify(cfg: &SuiteConfig, suite: SuiteChoice, out: Option<&Path>) -> Result<bool> {
    let reports: Vec<PropertyReport> = match suite {
        SuiteChoice::Axioms => vec![harness::run_axiom_suite(cfg)?],
        SuiteChoice::Propositions => vec![harness::run_proposition_suite(cfg)?],
        SuiteChoice::Witnesses => vec![harness::run_witness_suite(cfg)?],
        SuiteChoice::All => harness::run_all(cfg)?,
    };
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        println!(
            "{:<13} {}  checks={} violations={} skipped_infinite={} worst_slack={}",
            r.suite_id,
            if r.passed { "PASS" } else { "FAIL" },
            r.checks_run,
            r.violation_count,
            r.skipped_infinite,
            r.worst_slack.map(number).unwrap_or_else(|| "-".into()),
        );
        for w in &r.warnings {
            println!("  warning: {w}");
        }
        for v in r.violations.iter().take(5) {
            println!(
                "  {} dim={} sample={} [{}] lhs={} rhs={} slack={}",
                v.property_id,
                v.dim,
                v.seed_offset,
                v.params,
                number(v.lhs),
                number(v.rhs),
                number(v.slack)
            );
        }
    }
    if let Some(path) = out {
        let doc = json!({ "passed": passed, "reports": reports });
        fs::write(path, format!("{}\n", serde_json::to_string_pretty(&doc)?))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(passed)
}
