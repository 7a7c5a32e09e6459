use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coeff::{enumerate_primes, DenseMatrix, Domain, FieldDescriptor, NumberField, PrimeIdeal};
use crate::error::{Error, Result};
use crate::freealg::{reduce_word, GAMatrix, GroupAlgebraElement, Word, DEFAULT_BALL_CAP};
use crate::sofic::{
    preset_approximation, regular_action_of_matrices, Approximation, FiniteFSet, MembershipOracle, Preset,
    DEFAULT_SIZE_CAP,
};
use crate::spectra::DEFAULT_TERM_CAP;
use crate::twist::Representation;

/// An experiment document. Every number is written as a string so that
/// rationals survive serialization exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldSpec,
    /// Number of free generators.
    pub rank: String,
    pub matrix: Vec<Vec<String>>,
    /// One square matrix of coefficient texts per generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<Vec<Vec<Vec<String>>>>,
    /// Words that must map to the identity under the representation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relators: Vec<String>,
    pub preset: PresetSpec,
    pub checks: Vec<Check>,
    /// Exact limit of the convergence series, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<PrimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semicontinuity: Option<SemicontinuitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Rationals,
    NumberField {
        /// Little-endian integer coefficients of a monic irreducible polynomial.
        minpoly: Vec<String>,
        /// Image of `w` under the involution, little-endian rationals.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conjugation: Option<Vec<String>>,
    },
    PrimeField {
        p: String,
    },
    FractionField {
        vars: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PresetSpec {
    /// Moduli are integers or inclusive ranges `"a..b"`.
    ZdCongruence { d: String, moduli: Vec<String> },
    FiniteRegular {
        perms: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        repeats: Option<String>,
    },
    FreeRandomPerm { sizes: Vec<String> },
    FiniteQuotient { perms: Vec<Vec<String>> },
    /// The finite group generated by the representation reduced mod `prime`,
    /// acting on itself.
    RepresentationImage {
        prime: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        repeats: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Convergence,
    Twisted,
    ModpBound,
    Moments,
    Semicontinuity,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Convergence => "convergence",
            Check::Twisted => "twisted",
            Check::ModpBound => "modp_bound",
            Check::Moments => "moments",
            Check::Semicontinuity => "semicontinuity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeSpec {
    /// Explicit rational primes; each is used with its first admissible
    /// prime ideal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSpec {
    pub max_l: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemicontinuitySpec {
    pub points: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_points: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ball: Option<String>,
    /// Radius of the measured defect reported for inexact presets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect_radius: Option<String>,
}

/// Values that take precedence over the document: a seed from the command
/// line and caps from the environment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_points: Option<String>,
    pub max_terms: Option<String>,
    pub max_ball: Option<String>,
}

pub const ENV_MAX_POINTS: &str = "SOFICLAB_MAX_POINTS";
pub const ENV_MAX_TERMS: &str = "SOFICLAB_MAX_TERMS";
pub const ENV_MAX_BALL: &str = "SOFICLAB_MAX_BALL";

impl Overrides {
    pub fn from_env(seed: Option<u64>) -> Self {
        Overrides {
            seed,
            max_points: std::env::var(ENV_MAX_POINTS).ok(),
            max_terms: std::env::var(ENV_MAX_TERMS).ok(),
            max_ball: std::env::var(ENV_MAX_BALL).ok(),
        }
    }
}

impl ExperimentConfig {
    /// Parses a JSON document; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            path: format!("line {} column {}", e.line(), e.column()),
            msg: e.to_string(),
        })
    }

    /// Canonical form: fields in declaration order, no whitespace.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical form, in hex.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = Some(s.to_string());
        }
        if o.max_points.is_some() || o.max_terms.is_some() || o.max_ball.is_some() {
            let caps = self.caps.get_or_insert_with(CapSpec::default);
            if let Some(v) = &o.max_points {
                caps.max_points = Some(v.clone());
            }
            if let Some(v) = &o.max_terms {
                caps.max_terms = Some(v.clone());
            }
            if let Some(v) = &o.max_ball {
                caps.max_ball = Some(v.clone());
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub points: usize,
    pub terms: usize,
    pub ball: u128,
    pub defect_radius: usize,
}

/// A validated experiment: every text has been parsed and every preset
/// instantiated.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub hash: String,
    pub domain: Domain,
    pub rank: usize,
    pub matrix: GAMatrix,
    pub sigma: Option<Representation>,
    pub relators: Vec<Word>,
    pub approximation: Approximation,
    /// Every set is the regular action of the group being approximated.
    pub exact_preset: bool,
    pub limit: Option<BigRational>,
    pub primes: Vec<PrimeIdeal>,
    pub max_l: usize,
    pub points: Vec<Vec<BigRational>>,
    pub caps: Caps,
    pub checks: Vec<Check>,
}

fn cfg_err(path: impl Into<String>, msg: impl std::fmt::Display) -> Error {
    Error::Config { path: path.into(), msg: msg.to_string() }
}

fn at<'a>(path: &'a str) -> impl Fn(Error) -> Error + 'a {
    move |e| match e {
        Error::Config { .. } => e,
        other => cfg_err(path, other),
    }
}

fn int<T: std::str::FromStr>(path: &str, s: &str) -> Result<T> {
    s.trim().parse::<T>().map_err(|_| cfg_err(path, format!("expected a non-negative integer, got {s:?}")))
}

fn big(path: &str, s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| cfg_err(path, format!("expected an integer, got {s:?}")))
}

fn rational(path: &str, s: &str) -> Result<BigRational> {
    let q = Domain::rationals();
    let v = q.parse(s).map_err(at(path))?;
    Ok(q.to_rational(&v).expect("rational"))
}

fn moduli(path: &str, items: &[String]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, s) in items.iter().enumerate() {
        let p = format!("{path}[{i}]");
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (int(&p, a)?, int(&p, b)?);
                if a > b {
                    return Err(cfg_err(p, "empty range"));
                }
                out.extend(a..=b);
            }
            None => out.push(int(&p, s)?),
        }
    }
    Ok(out)
}

fn perms(path: &str, items: &[Vec<String>]) -> Result<Vec<Vec<usize>>> {
    items
        .iter()
        .enumerate()
        .map(|(g, row)| row.iter().map(|s| int(&format!("{path}[{g}]"), s)).collect())
        .collect()
}

fn build_domain(section: &FieldSpec) -> Result<Domain> {
    match section {
        FieldSpec::Rationals => Ok(Domain::rationals()),
        FieldSpec::NumberField { minpoly, conjugation } => {
            let c = minpoly
                .iter()
                .enumerate()
                .map(|(i, s)| big(&format!("field.minpoly[{i}]"), s))
                .collect::<Result<Vec<_>>>()?;
            let conj = match conjugation {
                Some(v) => Some(
                    v.iter()
                        .enumerate()
                        .map(|(i, s)| rational(&format!("field.conjugation[{i}]"), s))
                        .collect::<Result<Vec<_>>>()?,
                ),
                None => None,
            };
            let k = NumberField::new(c, conj).map_err(at("field"))?;
            Ok(Domain::new(FieldDescriptor::NumberField(k)))
        }
        FieldSpec::PrimeField { p } => Domain::prime_field(int("field.p", p)?).map_err(at("field.p")),
        FieldSpec::FractionField { vars } => {
            let names: Vec<&str> = vars.iter().map(String::as_str).collect();
            let distinct: BTreeSet<&str> = names.iter().copied().collect();
            let bad = |v: &&str| {
                v.is_empty()
                    || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    || !v.starts_with(|c: char| c.is_ascii_alphabetic())
            };
            if distinct.len() != names.len() || names.iter().any(bad) {
                return Err(cfg_err("field.vars", "variables must be distinct identifiers"));
            }
            Domain::fraction_field(&names).map_err(at("field.vars"))
        }
    }
}

fn build_matrix(domain: &Domain, rank: usize, rows: &[Vec<String>]) -> Result<GAMatrix> {
    if rows.is_empty() || rows[0].is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(cfg_err("matrix", "matrix must be a non-empty rectangle"));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| GroupAlgebraElement::parse(s, domain, rank).map_err(at(&format!("matrix[{i}][{j}]"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GAMatrix::from_rows(parsed).map_err(at("matrix"))
}

fn build_sigma(domain: &Domain, rank: usize, gens: &[Vec<Vec<String>>]) -> Result<Representation> {
    if gens.len() != rank {
        return Err(cfg_err("representation", format!("expected {rank} generator matrices, got {}", gens.len())));
    }
    let mats = gens
        .iter()
        .enumerate()
        .map(|(g, m)| DenseMatrix::parse(domain, m).map_err(at(&format!("representation[{g}]"))))
        .collect::<Result<Vec<_>>>()?;
    Representation::new(domain, mats).map_err(at("representation"))
}

/// Commutators of all generator pairs.
fn commutators(rank: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 1..=rank as i64 {
        for j in i + 1..=rank as i64 {
            out.push(reduce_word(&[i, j, -i, -j], rank).expect("in range"));
        }
    }
    out
}

fn build_approximation(
    section: &PresetSpec,
    rank: usize,
    sigma: Option<&Representation>,
    seed: Option<u64>,
    cap: usize,
) -> Result<(Approximation, bool, Vec<Word>)> {
    let repeats = |r: &Option<String>| -> Result<usize> {
        r.as_deref().map_or(Ok(1), |s| int("preset.repeats", s)).and_then(|n: usize| {
            if n == 0 {
                Err(cfg_err("preset.repeats", "must be at least 1"))
            } else {
                Ok(n)
            }
        })
    };
    let (preset, exact, implied) = match section {
        PresetSpec::ZdCongruence { d, moduli: m } => {
            let d: usize = int("preset.d", d)?;
            (Preset::ZdCongruence { d, moduli: moduli("preset.moduli", m)? }, false, commutators(d))
        }
        PresetSpec::FiniteRegular { perms: p, repeats: r } => {
            (Preset::FiniteRegular { perms: perms("preset.perms", p)?, repeats: repeats(r)? }, true, vec![])
        }
        PresetSpec::FreeRandomPerm { sizes } => {
            let seed = seed.ok_or_else(|| cfg_err("seed", "free_random_perm needs a seed"))?;
            (Preset::FreeRandomPerm { rank, sizes: moduli("preset.sizes", sizes)?, seed }, false, vec![])
        }
        PresetSpec::FiniteQuotient { perms: p } => {
            (Preset::FiniteQuotient { perms: perms("preset.perms", p)? }, false, vec![])
        }
        PresetSpec::RepresentationImage { prime, repeats: r } => {
            let sigma = sigma.ok_or_else(|| cfg_err("preset", "representation_image needs a representation"))?;
            let p: u64 = int("preset.prime", prime)?;
            let image = match sigma.domain().descriptor() {
                FieldDescriptor::Rationals => {
                    let ideal = PrimeIdeal::rational(p).map_err(at("preset.prime"))?;
                    sigma.reduce_mod(&ideal).map_err(at("preset.prime"))?
                }
                FieldDescriptor::PrimeField(q) if *q == p => sigma.clone(),
                _ => return Err(cfg_err("preset", "representation_image needs a representation over Q or F_prime")),
            };
            let x = regular_action_of_matrices(image.domain(), image.generators(), cap).map_err(at("preset"))?;
            let x = x.with_label(format!("image mod {p}"));
            let n = repeats(r)?;
            let oracle = MembershipOracle::ActsTriviallyOn(std::sync::Arc::new(x.clone()));
            let approx = Approximation { rank, sets: vec![x; n], oracle: Some(oracle), free: true };
            return Ok((approx, true, vec![]));
        }
    };
    let approx = preset_approximation(&preset, cap).map_err(at("preset"))?;
    if approx.rank != rank {
        return Err(cfg_err("preset", format!("preset has {} generators, config rank is {rank}", approx.rank)));
    }
    Ok((approx, exact, implied))
}

fn build_primes(domain: &Domain, section: Option<&PrimeSpec>) -> Result<Vec<PrimeIdeal>> {
    let default = PrimeSpec::default();
    let section = section.unwrap_or(&default);
    let max_degree: usize = section.max_degree.as_deref().map_or(Ok(1), |s| int("primes.max_degree", s))?;
    if let Some(list) = &section.list {
        let mut out = Vec::new();
        for (i, s) in list.iter().enumerate() {
            let path = format!("primes.list[{i}]");
            let p: u64 = int(&path, s)?;
            if !crate::coeff::fp::is_prime(p) {
                return Err(cfg_err(path, format!("{p} is not prime")));
            }
            let ideal = match domain.descriptor() {
                FieldDescriptor::Rationals => PrimeIdeal::rational(p).map_err(at(&path))?,
                _ => {
                    let found = enumerate_primes(domain, 1, p, max_degree, &[]).map_err(at(&path))?;
                    match found.into_iter().next() {
                        Some(ideal) if ideal.p == p => ideal,
                        _ => return Err(cfg_err(path, format!("no admissible prime ideal above {p}"))),
                    }
                }
            };
            out.push(ideal);
        }
        return Ok(out);
    }
    let count: usize = section.count.as_deref().map_or(Ok(5), |s| int("primes.count", s))?;
    let min: u64 = section.min.as_deref().map_or(Ok(2), |s| int("primes.min", s))?;
    enumerate_primes(domain, count, min, max_degree, &[]).map_err(at("primes"))
}

fn cap_value<T: std::str::FromStr>(path: &str, v: Option<&String>, default: T) -> Result<T> {
    v.map_or(Ok(default), |s| int(path, s))
}

impl Experiment {
    pub fn build(config: ExperimentConfig) -> Result<Experiment> {
        let hash = config.hash();
        let domain = build_domain(&config.field)?;
        let rank: usize = int("rank", &config.rank)?;
        let matrix = build_matrix(&domain, rank, &config.matrix)?;
        let seed = config.seed.as_deref().map(|s| int::<u64>("seed", s)).transpose()?;
        let c = config.caps.clone().unwrap_or_default();
        let caps = Caps {
            points: cap_value("caps.max_points", c.max_points.as_ref(), DEFAULT_SIZE_CAP)?,
            terms: cap_value("caps.max_terms", c.max_terms.as_ref(), DEFAULT_TERM_CAP)?,
            ball: cap_value("caps.max_ball", c.max_ball.as_ref(), DEFAULT_BALL_CAP)?,
            defect_radius: cap_value("caps.defect_radius", c.defect_radius.as_ref(), 2)?,
        };
        let sigma = config.representation.as_ref().map(|g| build_sigma(&domain, rank, g)).transpose()?;
        let mut relators = config
            .relators
            .iter()
            .enumerate()
            .map(|(i, s)| Word::parse(s, rank).map_err(at(&format!("relators[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        let (approximation, exact_preset, implied) =
            build_approximation(&config.preset, rank, sigma.as_ref(), seed, caps.points)?;
        relators.extend(implied);

        let mut checks: Vec<Check> = Vec::new();
        for c in &config.checks {
            if !checks.contains(c) {
                checks.push(*c);
            }
        }
        if checks.is_empty() {
            return Err(cfg_err("checks", "no checks requested"));
        }
        let limit = config.limit.as_deref().map(|s| rational("limit", s)).transpose()?;
        let char0 = domain.degree_over_q().is_some();
        let is_fraction = matches!(domain.descriptor(), FieldDescriptor::FractionField(_));
        if checks.contains(&Check::Twisted) {
            let sigma = sigma.as_ref().ok_or_else(|| cfg_err("representation", "twisted check needs a representation"))?;
            let bad = sigma.validate(&relators).map_err(at("representation"))?;
            if !bad.is_empty() {
                return Err(Error::RepresentationInvalid(bad.iter().map(|w| w.to_string()).collect()));
            }
        }
        let primes = if checks.contains(&Check::ModpBound) {
            if !char0 {
                return Err(cfg_err("checks", "modp_bound needs coefficients in Q or a number field"));
            }
            build_primes(&domain, config.primes.as_ref())?
        } else {
            vec![]
        };
        let max_l = match &config.moments {
            Some(m) => int("moments.max_l", &m.max_l)?,
            None => 4,
        };
        if checks.contains(&Check::Moments) && !char0 {
            return Err(cfg_err("checks", "moments need coefficients in Q or a number field"));
        }
        let points = match (&config.semicontinuity, checks.contains(&Check::Semicontinuity)) {
            (_, false) => vec![],
            (None, true) => return Err(cfg_err("semicontinuity", "semicontinuity check needs points")),
            (Some(section), true) => {
                if !is_fraction {
                    return Err(cfg_err("field", "semicontinuity needs a fraction_field"));
                }
                let nvars = domain.variable_names().len();
                section.points
                    .iter()
                    .enumerate()
                    .map(|(i, pt)| {
                        let path = format!("semicontinuity.points[{i}]");
                        if pt.len() != nvars {
                            return Err(cfg_err(&path, format!("expected {nvars} coordinates")));
                        }
                        pt.iter().map(|s| rational(&path, s)).collect()
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(Experiment {
            config,
            hash,
            domain,
            rank,
            matrix,
            sigma,
            relators,
            approximation,
            exact_preset,
            limit,
            primes,
            max_l,
            points,
            caps,
            checks,
        })
    }

    pub fn sets(&self) -> &[FiniteFSet] {
        &self.approximation.sets
    }
}

/// Parses, applies overrides and validates.
pub fn load(text: &str, overrides: &Overrides) -> Result<Experiment> {
    let mut config = ExperimentConfig::parse(text)?;
    config.apply(overrides);
    Experiment::build(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "field": {"kind": "rationals"},
        "rank": "1",
        "matrix": [["1 - a"]],
        "preset": {"kind": "zd_congruence", "d": "1", "moduli": ["2..20"]},
        "checks": ["convergence"]
    }"#;

    #[test]
    fn minimal_config() {
        let e = load(MINIMAL, &Overrides::default()).unwrap();
        assert_eq!(e.sets().len(), 19);
        assert_eq!(e.sets()[0].size(), 2);
        assert_eq!(e.checks, vec![Check::Convergence]);
    }

    #[test]
    fn roundtrip_and_hash() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(ExperimentConfig::parse(&c.canonical()).unwrap(), c);
        assert_eq!(ExperimentConfig::parse(&c.to_pretty()).unwrap(), c);
        let reordered = r#"{
            "checks": ["convergence"],
            "preset": {"moduli": ["2..20"], "d": "1", "kind": "zd_congruence"},
            "matrix": [["1 - a"]], "rank": "1",
            "field": {"kind": "rationals"}
        }"#;
        assert_eq!(ExperimentConfig::parse(reordered).unwrap().hash(), c.hash());
        let mut seeded = c.clone();
        seeded.apply(&Overrides { seed: Some(3), ..Default::default() });
        assert_ne!(seeded.hash(), c.hash());
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn diagnostics() {
        let bad = MINIMAL.replace("1 - a", "1/0");
        match load(&bad, &Overrides::default()) {
            Err(Error::Config { path, msg }) => {
                assert_eq!(path, "matrix[0][0]");
                assert!(msg.contains("at 2"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        match ExperimentConfig::parse("{\n  \"rank\": 1\n}") {
            Err(Error::Config { path, .. }) => assert!(path.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
        let unknown = MINIMAL.replace("\"rank\"", "\"colour\": \"red\", \"rank\"");
        assert!(matches!(ExperimentConfig::parse(&unknown), Err(Error::Config { .. })));
        let random = MINIMAL.replace(r#""kind": "zd_congruence", "d": "1", "moduli": ["2..20"]"#, r#""kind": "free_random_perm", "sizes": ["10"]"#);
        assert!(matches!(load(&random, &Overrides::default()), Err(Error::Config { path, .. }) if path == "seed"));
        assert!(load(&random, &Overrides { seed: Some(1), ..Default::default() }).is_ok());
        let twisted = MINIMAL
            .replace(r#""checks": ["convergence"]"#, r#""checks": ["twisted"], "representation": [[["0", "1"], ["1", "0"]]]"#);
        assert!(load(&twisted, &Overrides::default()).is_ok());
        let noncommuting = r#"{
            "field": {"kind": "rationals"}, "rank": "2", "matrix": [["1 - a - b"]],
            "representation": [[["1", "1"], ["0", "1"]], [["1", "0"], ["1", "1"]]],
            "preset": {"kind": "zd_congruence", "d": "2", "moduli": ["3"]},
            "checks": ["twisted"]
        }"#;
        assert_eq!(
            load(noncommuting, &Overrides::default()).unwrap_err(),
            Error::RepresentationInvalid(vec!["abAB".into()])
        );
    }

    #[test]
    fn caps_override() {
        let o = Overrides { max_points: Some("5".into()), ..Default::default() };
        assert!(matches!(load(MINIMAL, &o), Err(Error::Config { path, .. }) if path == "preset"));
    }
}
