//! Measure and witness spec strings.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use qtexture::measures::AlphaZParams;
use qtexture::witnesses::ImaginaritySign;
use qtexture::Measure;

/// Measures evaluated when none are requested.
pub const DEFAULT_MEASURES: &[&str] = &[
    "tGR:alpha=0.5,z=1",
    "tSR",
    "tF",
    "tTr",
    "tW",
    "tR:alpha=0.5",
    "tB",
    "tTs:mu=0.5",
];

fn key_values(params: &str) -> Result<Vec<(&str, f64)>> {
    params
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got `{kv}`"))?;
            let v: f64 = v
                .trim()
                .parse()
                .with_context(|| format!("parameter `{k}` is not a number: `{v}`"))?;
            Ok((k.trim(), v))
        })
        .collect()
}

fn take(kvs: &mut Vec<(&str, f64)>, key: &str) -> Option<f64> {
    let i = kvs.iter().position(|(k, _)| *k == key)?;
    Some(kvs.remove(i).1)
}

/// `tGR:alpha=0.5,z=1`, `tSR`, `tF`, `tTr`, `tW`, `tR:alpha=0.7`, `tB`,
/// `tTs:mu=0.3`. `tGR` defaults to `alpha=0.5,z=1`, `tR` to `alpha=0.5` and
/// `tTs` to `mu=0.5`.
pub fn measure(spec: &str) -> Result<Measure> {
    let (id, params) = spec.split_once(':').unwrap_or((spec, ""));
    let mut kvs = key_values(params).with_context(|| format!("in measure `{spec}`"))?;
    let m = match id {
        "tGR" => {
            let alpha = take(&mut kvs, "alpha").unwrap_or(0.5);
            let z = take(&mut kvs, "z").unwrap_or(1.0);
            Measure::AlphaZRenyi(AlphaZParams::new(alpha, z)?)
        }
        "tSR" => Measure::Rugosity,
        "tF" => Measure::Fidelity,
        "tTr" => Measure::TraceDistance,
        "tW" => Measure::Weight,
        "tR" => Measure::sandwiched_renyi(take(&mut kvs, "alpha").unwrap_or(0.5))?,
        "tB" => Measure::Bures,
        "tTs" => Measure::tsallis(take(&mut kvs, "mu").unwrap_or(0.5))?,
        other => bail!("unknown measure `{other}` (expected tGR, tSR, tF, tTr, tW, tR, tB or tTs)"),
    };
    if let Some((k, _)) = kvs.first() {
        bail!("measure `{id}` takes no parameter `{k}`");
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSpec {
    W1,
    Generator,
    Theta(f64),
    Jk { j: usize, k: usize, phi: f64 },
    Imag { j: usize, k: usize, sign: ImaginaritySign },
    Universal(PathBuf),
}

fn index(s: &str, name: &str) -> Result<usize> {
    s.trim()
        .parse()
        .with_context(|| format!("{name} must be a 0-based index, got `{s}`"))
}

fn radians(s: &str, name: &str) -> Result<f64> {
    s.trim()
        .parse()
        .with_context(|| format!("{name} must be a number in radians, got `{s}`"))
}

/// `w1 | generator | theta:θ | jk:j,k,φ | imag:j,k,± | universal:FILE`.
/// Indices are 0-based, angles in radians.
pub fn witness(spec: &str) -> Result<WitnessSpec> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let parts: Vec<&str> = if args.is_empty() { vec![] } else { args.split(',').collect() };
    let arity = |n: usize, form: &str| -> Result<()> {
        if parts.len() != n {
            bail!("witness `{kind}` expects the form `{form}`, got `{spec}`");
        }
        Ok(())
    };
    Ok(match kind {
        "w1" => {
            arity(0, "w1")?;
            WitnessSpec::W1
        }
        "generator" => {
            arity(0, "generator")?;
            WitnessSpec::Generator
        }
        "theta" => {
            arity(1, "theta:θ")?;
            WitnessSpec::Theta(radians(parts[0], "theta")?)
        }
        "jk" => {
            arity(3, "jk:j,k,φ")?;
            WitnessSpec::Jk {
                j: index(parts[0], "j")?,
                k: index(parts[1], "k")?,
                phi: radians(parts[2], "phi")?,
            }
        }
        "imag" => {
            arity(3, "imag:j,k,±")?;
            let sign = match parts[2].trim() {
                "+" => ImaginaritySign::Positive,
                "-" => ImaginaritySign::Negative,
                s => bail!("imaginarity sign must be + or -, got `{s}`"),
            };
            WitnessSpec::Imag {
                j: index(parts[0], "j")?,
                k: index(parts[1], "k")?,
                sign,
            }
        }
        "universal" => {
            if args.is_empty() {
                bail!("witness `universal` expects the form `universal:FILE`");
            }
            WitnessSpec::Universal(PathBuf::from(args))
        }
        other => bail!("unknown witness `{other}` (expected w1, generator, theta, jk, imag or universal)"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures_parse() {
        assert_eq!(measure("tF").unwrap(), Measure::Fidelity);
        assert_eq!(
            measure("tGR:alpha=0.3,z=2").unwrap(),
            Measure::AlphaZRenyi(AlphaZParams::new(0.3, 2.0).unwrap())
        );
        assert_eq!(measure("tR:alpha=0.7").unwrap(), Measure::SandwichedRenyi(0.7));
        for s in DEFAULT_MEASURES {
            measure(s).unwrap();
        }
    }

    #[test]
    fn bad_measures_name_the_problem() {
        let e = measure("tGR:alpha=0.2,z=0.5").unwrap_err();
        assert!(format!("{e:#}").contains('z'), "{e:#}");
        assert!(measure("tR:alpha=0.3").is_err());
        assert!(measure("tF:alpha=0.3").unwrap_err().to_string().contains("alpha"));
        assert!(measure("tX").is_err());
        assert!(measure("tGR:alpha").is_err());
    }

    #[test]
    fn witnesses_parse() {
        assert_eq!(witness("w1").unwrap(), WitnessSpec::W1);
        assert_eq!(witness("theta:1.25").unwrap(), WitnessSpec::Theta(1.25));
        assert_eq!(witness("jk:0,2,2.5").unwrap(), WitnessSpec::Jk { j: 0, k: 2, phi: 2.5 });
        assert_eq!(
            witness("imag:0,1,-").unwrap(),
            WitnessSpec::Imag { j: 0, k: 1, sign: ImaginaritySign::Negative }
        );
        assert_eq!(witness("universal:a.json").unwrap(), WitnessSpec::Universal("a.json".into()));
        for bad in ["w2", "theta", "theta:x", "jk:0,1", "imag:0,1,*", "universal:", "w1:3"] {
            assert!(witness(bad).is_err(), "{bad}");
        }
    }
}
