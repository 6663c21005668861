//! Run configuration. Values are layered: command-line flags over the
//! config file over built-in defaults.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use coaxial::checks::Inequality;
use coaxial::{ResponseModel, SampleSpec, SymMatrix};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::args::{MatrixArgs, ModelArgs};

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// `{"model": "<tag>", "params": {…}}`
    pub model: Option<Value>,
    pub checks: Option<Vec<String>>,
    pub sample: Option<Value>,
    pub output: Option<OutputFormat>,
    pub out_path: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Canonical tag for a user-supplied model name. Case, `-` and `_` are
/// ignored, so `QuadraticHencky` and `quadratic_hencky` both resolve.
fn canonical_tag(name: &str) -> Result<&'static str> {
    let squash = |s: &str| -> String {
        s.chars()
            .filter(|c| !matches!(c, '-' | '_'))
            .collect::<String>()
            .to_ascii_lowercase()
    };
    let key = squash(name);
    let catalog = ResponseModel::catalog();
    catalog
        .iter()
        .map(|m| m.tag())
        .find(|t| squash(t) == key)
        .ok_or_else(|| {
            let tags: Vec<_> = catalog.iter().map(|m| m.tag()).collect();
            anyhow!("unknown model `{name}`; expected one of {}", tags.join(", "))
        })
}

fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, p) => *b = p.clone(),
    }
}

/// Sets `path` (dot separated) inside `params`. The key must already exist,
/// so a misspelt parameter is an error rather than silently ignored.
fn set_param(params: &mut Map<String, Value>, path: &str, value: Value, tag: &str) -> Result<()> {
    let mut parts = path.split('.').peekable();
    let mut node = params;
    while let Some(key) = parts.next() {
        let Some(slot) = node.get_mut(key) else {
            bail!("model `{tag}` has no parameter `{path}`");
        };
        if parts.peek().is_none() {
            *slot = value;
            return Ok(());
        }
        node = slot
            .as_object_mut()
            .ok_or_else(|| anyhow!("parameter `{key}` of `{tag}` is not a group"))?;
    }
    unreachable!("split yields at least one part")
}

/// Where a named flag lands: the top-level parameter if the model has one,
/// otherwise the same key of the volumetric part `f`.
fn set_named(params: &mut Map<String, Value>, key: &str, x: f64, tag: &str) -> Result<()> {
    if params.contains_key(key) {
        return set_param(params, key, x.into(), tag);
    }
    if params.get("f").and_then(|f| f.get(key)).is_some() {
        return set_param(params, &format!("f.{key}"), x.into(), tag);
    }
    bail!("model `{tag}` has no parameter `{key}`")
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

pub fn resolve_model(flags: &ModelArgs, file: &FileConfig) -> Result<ResponseModel> {
    let file_tag = match &file.model {
        Some(m) => Some(
            m.get("model")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("config `model` needs a string field `model`"))?,
        ),
        None => None,
    };
    let name = flags
        .model
        .as_deref()
        .or(file_tag)
        .ok_or_else(|| anyhow!("no model given; use --model or the config file"))?;
    let tag = canonical_tag(name)?;
    let default = ResponseModel::catalog()
        .into_iter()
        .find(|m| m.tag() == tag)
        .expect("canonical tags come from the catalog");
    let mut spec = serde_json::to_value(&default)?;
    if let (Some(m), Some(ft)) = (&file.model, file_tag) {
        if canonical_tag(ft)? == tag {
            if let Some(p) = m.get("params") {
                let mut params = spec.get("params").cloned().unwrap_or(Value::Object(Map::new()));
                merge(&mut params, p);
                spec["params"] = params;
            }
        }
    }
    let named = [
        ("mu", flags.mu),
        ("lambda", flags.lambda),
        ("k", flags.k),
        ("kappa", flags.kappa),
        ("khat", flags.khat),
        ("c1", flags.c1),
        ("c2", flags.c2),
    ];
    let patched = named.iter().any(|(_, v)| v.is_some()) || flags.volumetric.is_some() || !flags.param.is_empty();
    if patched {
        let params = spec
            .get_mut("params")
            .and_then(Value::as_object_mut)
            .ok_or_else(|| anyhow!("model `{tag}` takes no parameters"))?;
        if let Some(kind) = &flags.volumetric {
            let f = params
                .get_mut("f")
                .and_then(Value::as_object_mut)
                .ok_or_else(|| anyhow!("model `{tag}` has no volumetric part"))?;
            f.insert("kind".into(), Value::String(kind.clone()));
            if kind == "zero" {
                f.remove("kappa");
            } else if !f.contains_key("kappa") {
                f.insert("kappa".into(), 1.0.into());
            }
        }
        for (key, v) in named {
            if let Some(x) = v {
                set_named(params, key, x, tag)?;
            }
        }
        for kv in &flags.param {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("--param expects key=value, got `{kv}`"))?;
            set_param(params, k.trim(), parse_value(v.trim()), tag)?;
        }
    }
    let model: ResponseModel =
        serde_json::from_value(spec).with_context(|| format!("parameters of model `{tag}`"))?;
    model.validate()?;
    Ok(model)
}

pub fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> Result<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    if file.seed.is_some() {
        return Ok(file.seed);
    }
    match std::env::var("COAXIAL_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| anyhow!("COAXIAL_SEED must be a non-negative integer, got `{s}`")),
        Err(_) => Ok(None),
    }
}

pub fn resolve_sample(n: Option<usize>, seed: Option<u64>, file: &FileConfig) -> Result<SampleSpec> {
    let mut spec: SampleSpec = match &file.sample {
        Some(v) => serde_json::from_value(v.clone()).context("config `sample`")?,
        None => SampleSpec::default(),
    };
    if let Some(n) = n {
        spec.count = n;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    spec.validate().map_err(|e| anyhow!("sample: {e}"))?;
    Ok(spec)
}

pub fn resolve_checks(flags: &[String], file: &FileConfig) -> Result<Vec<Inequality>> {
    let raw: Vec<String> = if !flags.is_empty() {
        flags.to_vec()
    } else {
        file.checks.clone().unwrap_or_default()
    };
    let mut out = Vec::new();
    for item in raw.iter().flat_map(|s| s.split(',')).map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("all") {
            out.extend(Inequality::ALL);
        } else {
            out.push(item.parse::<Inequality>().map_err(|e| anyhow!(e))?);
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|i| seen.insert(*i));
    if out.is_empty() {
        bail!("no checks requested; use --checks or the config file");
    }
    Ok(out)
}

fn parse_list(raw: &str, what: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("{what}: `{}` is not a number", s.trim()))
        })
        .collect()
}

/// `B` from `--b xx,yy,zz,xy,xz,yz` or `--lambdas l1,l2,l3` (`B = diag(λ²)`).
/// The result is checked to be positive definite.
pub fn resolve_matrix(m: &MatrixArgs) -> Result<SymMatrix> {
    let b = match (&m.b, &m.lambdas) {
        (Some(raw), None) => {
            let c = parse_list(raw, "--b")?;
            if c.len() != 6 {
                bail!("--b expects 6 components xx,yy,zz,xy,xz,yz, got {}", c.len());
            }
            SymMatrix::from_components(&c)?
        }
        (None, Some(raw)) => {
            let l = parse_list(raw, "--lambdas")?;
            if l.len() != 3 {
                bail!("--lambdas expects 3 stretches, got {}", l.len());
            }
            if l.iter().any(|x| !(*x > 0.0)) {
                bail!("stretches must be positive");
            }
            SymMatrix::diag(&[l[0] * l[0], l[1] * l[1], l[2] * l[2]])?
        }
        (None, None) => bail!("give the stretch as --b or --lambdas"),
        (Some(_), Some(_)) => bail!("--b and --lambdas are exclusive"),
    };
    if !b.is_positive_definite() {
        bail!("B is not positive definite");
    }
    Ok(b)
}
