//! Line-oriented `key = value` configuration with dotted namespaces.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_2_PI;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::{make_grid, Grid};
use crate::potentials::{PotentialSpec, StieltjesDensity};

#[derive(Clone, Copy)]
enum Ty {
    Int,
    Float,
    FloatOrAuto,
    Bool,
    Choice(&'static [&'static str]),
    IntList,
    Text,
}

struct Key {
    name: &'static str,
    default: Option<&'static str>,
    ty: Ty,
}

const KINDS: &[&str] = &[
    "monotonic_decay",
    "local_decay",
    "wave_local_decay",
    "ell_sweep",
    "commutator",
    "certify",
    "evolve",
];
const POTENTIALS: &[&str] = &[
    "free",
    "lorentzian",
    "stieltjes",
    "exponential_tail",
    "lorentzian_tail",
    "schwarzschild",
];
const INITIAL: &[&str] = &["gaussian", "eigenmode", "zero", "ell_packet"];
const DIRECTIONS: &[&str] = &["rest", "right", "left"];
const EQUATIONS: &[&str] = &["schrodinger", "wave"];
const QUANTITIES: &[&str] = &["commutator", "monotonicity", "certificate"];

const KEYS: &[Key] = &[
    Key {
        name: "experiment.kind",
        default: Some("monotonic_decay"),
        ty: Ty::Choice(KINDS),
    },
    Key {
        name: "grid.n",
        default: None,
        ty: Ty::Int,
    },
    Key {
        name: "grid.L",
        default: None,
        ty: Ty::Float,
    },
    Key {
        name: "R",
        default: None,
        ty: Ty::Float,
    },
    Key {
        name: "M",
        default: None,
        ty: Ty::Float,
    },
    Key {
        name: "b",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "sigma",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "epsilon",
        default: Some("0.1"),
        ty: Ty::Float,
    },
    Key {
        name: "delta",
        default: Some("0.1"),
        ty: Ty::Float,
    },
    Key {
        name: "beta",
        default: Some("auto"),
        ty: Ty::FloatOrAuto,
    },
    Key {
        name: "allow_subcritical",
        default: Some("false"),
        ty: Ty::Bool,
    },
    Key {
        name: "potential.kind",
        default: Some("free"),
        ty: Ty::Choice(POTENTIALS),
    },
    Key {
        name: "potential.c0",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "potential.b",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "potential.center",
        default: Some("0"),
        ty: Ty::Float,
    },
    Key {
        name: "potential.amplitude",
        default: Some("0.05"),
        ty: Ty::Float,
    },
    Key {
        name: "potential.rate",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "potential.mass",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "potential.ell",
        default: Some("2"),
        ty: Ty::Int,
    },
    Key {
        name: "potential.centered",
        default: Some("true"),
        ty: Ty::Bool,
    },
    Key {
        name: "potential.rho_csv",
        default: Some(""),
        ty: Ty::Text,
    },
    Key {
        name: "initial.kind",
        default: Some("gaussian"),
        ty: Ty::Choice(INITIAL),
    },
    Key {
        name: "initial.x0",
        default: Some("10"),
        ty: Ty::Float,
    },
    Key {
        name: "initial.width",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "initial.k0",
        default: Some("-2"),
        ty: Ty::Float,
    },
    Key {
        name: "initial.scale",
        default: Some("1"),
        ty: Ty::Float,
    },
    Key {
        name: "initial.phase",
        default: Some("0"),
        ty: Ty::Float,
    },
    Key {
        name: "initial.mode",
        default: Some("0"),
        ty: Ty::Int,
    },
    Key {
        name: "initial.direction",
        default: Some("rest"),
        ty: Ty::Choice(DIRECTIONS),
    },
    Key {
        name: "evolve.equation",
        default: Some("schrodinger"),
        ty: Ty::Choice(EQUATIONS),
    },
    Key {
        name: "time.T",
        default: Some("auto"),
        ty: Ty::FloatOrAuto,
    },
    Key {
        name: "time.steps",
        default: Some("2000"),
        ty: Ty::Int,
    },
    Key {
        name: "certify.bulk",
        default: Some("0.8"),
        ty: Ty::Float,
    },
    Key {
        name: "certify.commutator_bulk",
        default: Some("0.3"),
        ty: Ty::Float,
    },
    Key {
        name: "certify.lemma_a_R",
        default: Some("8"),
        ty: Ty::Float,
    },
    Key {
        name: "ell.list",
        default: Some("2,4,8,16,32"),
        ty: Ty::IntList,
    },
    Key {
        name: "ell.r0",
        default: Some("2"),
        ty: Ty::Float,
    },
    Key {
        name: "ell.beta0",
        default: Some("0.1"),
        ty: Ty::Float,
    },
    Key {
        name: "ell.slack",
        default: Some("2"),
        ty: Ty::Float,
    },
    Key {
        name: "convergence.quantity",
        default: Some("commutator"),
        ty: Ty::Choice(QUANTITIES),
    },
    Key {
        name: "convergence.levels",
        default: Some("3"),
        ty: Ty::Int,
    },
    Key {
        name: "sweep.key",
        default: Some(""),
        ty: Ty::Text,
    },
    Key {
        name: "sweep.values",
        default: Some(""),
        ty: Ty::Text,
    },
    Key {
        name: "seed",
        default: Some("0"),
        ty: Ty::Int,
    },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    MonotonicDecay,
    LocalDecay,
    WaveLocalDecay,
    EllSweep,
    Commutator,
    Certify,
    Evolve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialKind {
    Gaussian,
    Eigenmode,
    Zero,
    EllPacket,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveDirection {
    Rest,
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialData {
    pub kind: InitialKind,
    pub x0: f64,
    pub width: f64,
    pub k0: f64,
    pub scale: f64,
    /// Global phase of Schrödinger data; wave data stay real.
    pub phase: f64,
    pub mode: usize,
    pub direction: WaveDirection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    Schrodinger,
    Wave,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceQuantity {
    Commutator,
    Monotonicity,
    Certificate,
}

/// Fully validated experiment parameters. `resolved` echoes every key with
/// its final value, in table order.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub grid_n: usize,
    pub grid_l: f64,
    pub r: f64,
    pub m_threshold: f64,
    pub b: f64,
    pub sigma: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub beta: Option<f64>,
    pub allow_subcritical: bool,
    pub potential: PotentialSpec,
    pub potential_kind: String,
    pub schwarzschild_ell: u32,
    pub initial: InitialData,
    pub equation: Equation,
    pub time_t: Option<f64>,
    pub time_steps: usize,
    pub bulk_fraction: f64,
    pub commutator_bulk: f64,
    pub lemma_a_r: f64,
    pub ell_list: Vec<u32>,
    pub ell_r0: f64,
    pub ell_beta0: f64,
    pub ell_slack: f64,
    pub convergence_quantity: ConvergenceQuantity,
    pub convergence_levels: usize,
    pub sweep_key: String,
    pub sweep_values: Vec<String>,
    pub seed: u64,
    resolved: Vec<(String, String)>,
    base_dir: Option<PathBuf>,
}

fn strip(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Splits `key=value`, trimming both sides.
pub fn split_assignment(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected key=value, got `{s}`")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::Config(format!("empty key in `{s}`")));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

fn lookup(name: &str) -> Option<&'static Key> {
    KEYS.iter().find(|k| k.name == name)
}

pub fn known_keys() -> Vec<&'static str> {
    KEYS.iter().map(|k| k.name).collect()
}

fn check_type(key: &Key, value: &str) -> Result<()> {
    let bad = |what: &str| Error::Config(format!("key `{}`: expected {what}, got `{value}`", key.name));
    match key.ty {
        Ty::Int => value
            .parse::<u64>()
            .map(|_| ())
            .map_err(|_| bad("a nonnegative integer")),
        Ty::Float => match value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(()),
            _ => Err(bad("a finite number")),
        },
        Ty::FloatOrAuto => {
            if value == "auto" {
                Ok(())
            } else {
                match value.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(()),
                    _ => Err(bad("a finite number or `auto`")),
                }
            }
        }
        Ty::Bool => match value {
            "true" | "false" => Ok(()),
            _ => Err(bad("true or false")),
        },
        Ty::Choice(options) => {
            if options.contains(&value) {
                Ok(())
            } else {
                Err(bad(&format!("one of {}", options.join("|"))))
            }
        }
        Ty::IntList => {
            if value.split(',').all(|s| s.trim().parse::<u32>().is_ok()) {
                Ok(())
            } else {
                Err(bad("a comma separated list of integers"))
            }
        }
        Ty::Text => Ok(()),
    }
}

/// Parses config text, applies `overrides` on top and validates.
pub fn parse_config_str(text: &str, overrides: &[String], base_dir: Option<&Path>) -> Result<ExperimentConfig> {
    let mut values: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip(raw);
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_assignment(line).map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        if lookup(&k).is_none() {
            return Err(Error::Config(format!("line {}: unknown key `{k}`", lineno + 1)));
        }
        if values.insert(k.clone(), v).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
        }
    }
    for o in overrides {
        let (k, v) = split_assignment(o)?;
        if lookup(&k).is_none() {
            return Err(Error::Config(format!("unknown key `{k}` in override")));
        }
        values.insert(k, v);
    }
    let mut resolved = Vec::new();
    for key in KEYS {
        let v = match values.get(key.name) {
            Some(v) => v.clone(),
            None => match key.default {
                Some(d) => d.to_string(),
                None => return Err(Error::Config(format!("missing required key `{}`", key.name))),
            },
        };
        check_type(key, &v)?;
        resolved.push((key.name.to_string(), v));
    }
    build(resolved, base_dir.map(Path::to_path_buf))
}

pub fn parse_config(path: impl AsRef<Path>, overrides: &[String]) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text, overrides, path.parent())
}

fn get<'a>(resolved: &'a [(String, String)], key: &str) -> &'a str {
    &resolved
        .iter()
        .find(|(k, _)| k == key)
        .expect("every key is resolved")
        .1
}

fn num(resolved: &[(String, String)], key: &str) -> f64 {
    get(resolved, key).parse().expect("type checked")
}

fn int(resolved: &[(String, String)], key: &str) -> u64 {
    get(resolved, key).parse().expect("type checked")
}

fn auto(resolved: &[(String, String)], key: &str) -> Option<f64> {
    match get(resolved, key) {
        "auto" => None,
        v => Some(v.parse().expect("type checked")),
    }
}

fn constraint(key: &str, ok: bool, why: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("key `{key}`: {why}")))
    }
}

fn build(resolved: Vec<(String, String)>, base_dir: Option<PathBuf>) -> Result<ExperimentConfig> {
    let r = &resolved;
    let kind = match get(r, "experiment.kind") {
        "monotonic_decay" => ExperimentKind::MonotonicDecay,
        "local_decay" => ExperimentKind::LocalDecay,
        "wave_local_decay" => ExperimentKind::WaveLocalDecay,
        "ell_sweep" => ExperimentKind::EllSweep,
        "commutator" => ExperimentKind::Commutator,
        "certify" => ExperimentKind::Certify,
        _ => ExperimentKind::Evolve,
    };
    let grid_n = int(r, "grid.n") as usize;
    let grid_l = num(r, "grid.L");
    make_grid(grid_n, grid_l).map_err(|e| Error::Config(format!("key `grid.n`/`grid.L`: {e}")))?;
    let rr = num(r, "R");
    let allow_subcritical = get(r, "allow_subcritical") == "true";
    constraint("R", rr > 0.0, "must be positive")?;
    constraint(
        "R",
        rr > FRAC_2_PI || allow_subcritical,
        &format!(
            "{rr} is not above the positivity threshold 2/pi = {FRAC_2_PI:.6} of i[p^2, tanh(A/R)]; set allow_subcritical=true to run anyway"
        ),
    )?;
    let m_threshold = num(r, "M");
    let b = num(r, "b");
    constraint("b", b > 0.0, "must be positive")?;
    let sigma = num(r, "sigma");
    constraint("sigma", sigma >= 0.0, "must be nonnegative")?;
    let epsilon = num(r, "epsilon");
    constraint("epsilon", (0.0..1.0).contains(&epsilon), "must lie in [0, 1)")?;
    let delta = num(r, "delta");
    constraint("delta", delta > 0.0, "must be positive")?;
    let beta = auto(r, "beta");
    if let Some(bv) = beta {
        constraint("beta", bv > 0.0, "must be positive")?;
    }
    let ell = int(r, "potential.ell") as u32;
    let potential_kind = get(r, "potential.kind").to_string();
    let potential = match potential_kind.as_str() {
        "free" => Ok(PotentialSpec::zero()),
        "lorentzian" => PotentialSpec::shifted_lorentzian(
            num(r, "potential.c0"),
            num(r, "potential.b"),
            num(r, "potential.center"),
        ),
        "exponential_tail" => PotentialSpec::exponential_tail(num(r, "potential.amplitude"), num(r, "potential.rate")),
        "lorentzian_tail" => PotentialSpec::lorentzian(num(r, "potential.c0"), num(r, "potential.b")).and_then(|l| {
            PotentialSpec::exponential_tail(num(r, "potential.amplitude"), num(r, "potential.rate"))
                .map(|t| PotentialSpec::sum(vec![(1.0, l), (1.0, t)]))
        }),
        "schwarzschild" => {
            let mass = num(r, "potential.mass");
            if get(r, "potential.centered") == "true" {
                PotentialSpec::centered_schwarzschild(mass, ell)
            } else {
                PotentialSpec::schwarzschild(mass, ell)
            }
        }
        _ => {
            let path = get(r, "potential.rho_csv");
            if path.is_empty() {
                return Err(Error::Config(
                    "missing required key `potential.rho_csv` for potential.kind=stieltjes".into(),
                ));
            }
            let p = Path::new(path);
            let full = match (&base_dir, p.is_relative()) {
                (Some(d), true) => d.join(p),
                _ => p.to_path_buf(),
            };
            StieltjesDensity::from_csv_path(&full).map(PotentialSpec::stieltjes)
        }
    }
    .map_err(|e| Error::Config(format!("potential: {e}")))?;
    let initial = InitialData {
        kind: match get(r, "initial.kind") {
            "gaussian" => InitialKind::Gaussian,
            "eigenmode" => InitialKind::Eigenmode,
            "zero" => InitialKind::Zero,
            _ => InitialKind::EllPacket,
        },
        x0: num(r, "initial.x0"),
        width: num(r, "initial.width"),
        k0: num(r, "initial.k0"),
        scale: num(r, "initial.scale"),
        phase: num(r, "initial.phase"),
        mode: int(r, "initial.mode") as usize,
        direction: match get(r, "initial.direction") {
            "rest" => WaveDirection::Rest,
            "right" => WaveDirection::Right,
            _ => WaveDirection::Left,
        },
    };
    constraint("initial.width", initial.width > 0.0, "must be positive")?;
    constraint("initial.mode", initial.mode < grid_n, "must be below grid.n")?;
    let equation = if get(r, "evolve.equation") == "wave" {
        Equation::Wave
    } else {
        Equation::Schrodinger
    };
    let time_t = auto(r, "time.T");
    if let Some(t) = time_t {
        constraint("time.T", t > 0.0, "must be positive")?;
    }
    let time_steps = int(r, "time.steps") as usize;
    constraint("time.steps", time_steps >= 2, "must be at least 2")?;
    let bulk_fraction = num(r, "certify.bulk");
    constraint(
        "certify.bulk",
        bulk_fraction > 0.0 && bulk_fraction <= 1.0,
        "must lie in (0, 1]",
    )?;
    let commutator_bulk = num(r, "certify.commutator_bulk");
    constraint(
        "certify.commutator_bulk",
        commutator_bulk > 0.0 && commutator_bulk <= 1.0,
        "must lie in (0, 1]",
    )?;
    let lemma_a_r = num(r, "certify.lemma_a_R");
    constraint("certify.lemma_a_R", lemma_a_r > FRAC_2_PI, "must exceed 2/pi")?;
    let ell_list: Vec<u32> = get(r, "ell.list")
        .split(',')
        .map(|s| s.trim().parse().expect("type checked"))
        .collect();
    let ell_r0 = num(r, "ell.r0");
    constraint("ell.r0", ell_r0 > 0.0, "must be positive")?;
    let ell_beta0 = num(r, "ell.beta0");
    constraint("ell.beta0", ell_beta0 > 0.0, "must be positive")?;
    let ell_slack = num(r, "ell.slack");
    constraint("ell.slack", ell_slack >= 1.0, "must be at least 1")?;
    let convergence_quantity = match get(r, "convergence.quantity") {
        "commutator" => ConvergenceQuantity::Commutator,
        "monotonicity" => ConvergenceQuantity::Monotonicity,
        _ => ConvergenceQuantity::Certificate,
    };
    let convergence_levels = int(r, "convergence.levels") as usize;
    constraint("convergence.levels", convergence_levels >= 2, "must be at least 2")?;
    let sweep_key = get(r, "sweep.key").to_string();
    if !sweep_key.is_empty() {
        constraint("sweep.key", lookup(&sweep_key).is_some(), "names an unknown key")?;
        constraint(
            "sweep.key",
            !sweep_key.starts_with("sweep."),
            "cannot sweep a sweep key",
        )?;
    }
    let sweep_values: Vec<String> = get(r, "sweep.values")
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    constraint(
        "sweep.values",
        sweep_key.is_empty() || !sweep_values.is_empty(),
        "must list values when sweep.key is set",
    )?;
    Ok(ExperimentConfig {
        kind,
        grid_n,
        grid_l,
        r: rr,
        m_threshold,
        b,
        sigma,
        epsilon,
        delta,
        beta,
        allow_subcritical,
        potential,
        potential_kind,
        schwarzschild_ell: ell,
        initial,
        equation,
        time_t,
        time_steps,
        bulk_fraction,
        commutator_bulk,
        lemma_a_r,
        ell_list,
        ell_r0,
        ell_beta0,
        ell_slack,
        convergence_quantity,
        convergence_levels,
        sweep_key,
        sweep_values,
        seed: int(r, "seed"),
        resolved,
        base_dir,
    })
}

impl ExperimentConfig {
    /// Minimal config on top of the defaults.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let overrides: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parse_config_str("", &overrides, None)
    }

    pub fn resolved(&self) -> &[(String, String)] {
        &self.resolved
    }

    pub fn value(&self, key: &str) -> Option<&str> {
        self.resolved.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Same config with further `key=value` overrides.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        let mut all: Vec<String> = self.resolved.iter().map(|(k, v)| format!("{k}={v}")).collect();
        all.extend(overrides.iter().cloned());
        parse_config_str("", &all, self.base_dir.as_deref())
    }

    pub fn canonical_text(&self) -> String {
        self.resolved.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of the canonical resolved text.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    pub fn grid(&self) -> Grid {
        make_grid(self.grid_n, self.grid_l).expect("validated")
    }

    /// Dilation angle: explicit `beta` or `1/R`.
    pub fn beta_value(&self) -> f64 {
        self.beta.unwrap_or(1.0 / self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "# free particle\ngrid.n = 512\ngrid.L = 40\nR = 4\nM = 3\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config_str(MINIMAL, &[], None).unwrap();
        assert_eq!(c.grid_n, 512);
        assert_eq!(c.kind, ExperimentKind::MonotonicDecay);
        assert!(c.potential.is_zero());
        assert_eq!(c.value("b"), Some("1"));
        assert_eq!(c.resolved().len(), known_keys().len());
    }

    #[test]
    fn subcritical_needs_opt_in() {
        let e = parse_config_str(MINIMAL, &["R=0.5".into()], None).unwrap_err();
        assert!(e.to_string().contains("2/pi"), "{e}");
        let c = parse_config_str(MINIMAL, &["R=0.5".into(), "allow_subcritical=true".into()], None).unwrap();
        assert_eq!(c.r, 0.5);
    }

    #[test]
    fn override_wins_and_is_echoed() {
        let text = format!("{MINIMAL}potential.kind = lorentzian\npotential.c0 = 1\n");
        let c = parse_config_str(&text, &["potential.c0=2".into()], None).unwrap();
        assert_eq!(c.value("potential.c0"), Some("2"));
        assert!(c.canonical_text().contains("potential.c0=2\n"));
        assert_eq!(evaluate_at_zero(&c), 2.0);
    }

    fn evaluate_at_zero(c: &ExperimentConfig) -> f64 {
        crate::potentials::evaluate(&c.potential, 0.0).unwrap()
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_config_str("grid.n = 512\n", &[], None).unwrap_err();
        assert!(e.to_string().contains("`grid.L`"), "{e}");
        let e = parse_config_str(&format!("{MINIMAL}potential.cc = 1\n"), &[], None).unwrap_err();
        assert!(e.to_string().contains("`potential.cc`"), "{e}");
        let e = parse_config_str(MINIMAL, &["grid.n=abc".into()], None).unwrap_err();
        assert!(
            e.to_string().contains("`grid.n`") && e.to_string().contains("integer"),
            "{e}"
        );
        let e = parse_config_str(MINIMAL, &["bogus=1".into()], None).unwrap_err();
        assert!(e.to_string().contains("`bogus`"), "{e}");
    }

    #[test]
    fn hash_tracks_content() {
        let a = parse_config_str(MINIMAL, &[], None).unwrap();
        let b = parse_config_str(MINIMAL, &[], None).unwrap();
        let c = parse_config_str(MINIMAL, &["M=2".into()], None).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
