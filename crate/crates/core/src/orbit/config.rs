//! Configuration schema: a named line-arrangement case with its alphabet,
//! cycles, parametric orbit-generator families and intersection metadata.
//!
//! The three built-in cases (`generic4`, `trapezoid`, `parallelogram`) are
//! embedded in the binary; user files use the same JSON schema.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::freegroup::{parse_template, Alphabet, Word, WordExpr};

use super::OrbitError;

pub const BUILTIN_NAMES: [&str; 3] = ["generic4", "trapezoid", "parallelogram"];

const GENERIC4_JSON: &str = include_str!("builtins/generic4.json");
const TRAPEZOID_JSON: &str = include_str!("builtins/trapezoid.json");
const PARALLELOGRAM_JSON: &str = include_str!("builtins/parallelogram.json");

/// Upper end of a family's parameter range; `ClassMinus(k)` instantiates
/// m = 0..=c-k once the truncation class c is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyRange {
    Fixed(u32),
    ClassMinus(u32),
}

impl FamilyRange {
    pub fn max_m(&self, class: usize) -> Option<u32> {
        match *self {
            FamilyRange::Fixed(k) => Some(k),
            FamilyRange::ClassMinus(k) => {
                let c = class as i64 - k as i64;
                (c >= 0).then_some(c as u32)
            }
        }
    }
}

/// A parametric orbit-generator family: a word template in the parameter m
/// plus the range m runs over.
#[derive(Debug, Clone)]
pub struct OrbitFamily {
    pub template_text: String,
    pub template: WordExpr,
    pub range: Option<FamilyRange>,
}

impl OrbitFamily {
    /// All instances of the family at truncation class `class`.
    pub fn instantiate(
        &self,
        alphabet: &Arc<Alphabet>,
        class: usize,
    ) -> Result<Vec<Word>, OrbitError> {
        if !self.template.has_parameter() {
            return Ok(vec![self
                .template
                .instantiate(alphabet, None)
                .map_err(OrbitError::from)?]);
        }
        let range = self.range.expect("validated: parametric family has range");
        let Some(max_m) = range.max_m(class) else {
            return Ok(Vec::new());
        };
        (0..=max_m)
            .map(|m| {
                self.template
                    .instantiate(alphabet, Some(m as i64))
                    .map_err(OrbitError::from)
            })
            .collect()
    }
}

/// A named line-arrangement case.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub name: String,
    pub alphabet: Arc<Alphabet>,
    pub cycle: Word,
    pub auxiliary_cycles: BTreeMap<String, Word>,
    pub orbit_families: Vec<OrbitFamily>,
    /// Antisymmetric intersection metadata (cycle name, cycle name, number).
    pub intersections: Vec<(String, String, i64)>,
    pub notes: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    alphabet: Vec<String>,
    #[serde(default)]
    cycle: Option<String>,
    #[serde(default)]
    auxiliary_cycles: BTreeMap<String, String>,
    #[serde(default)]
    orbit_families: Vec<RawFamily>,
    #[serde(default)]
    intersections: Vec<(String, String, i64)>,
    #[serde(default)]
    notes: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    template: String,
    #[serde(default)]
    max_m: Option<serde_json::Value>,
}

fn schema_err(path: impl Into<String>, message: impl ToString) -> OrbitError {
    OrbitError::Schema {
        path: path.into(),
        message: message.to_string(),
    }
}

impl Configuration {
    pub fn from_json_str(text: &str) -> Result<Configuration, OrbitError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| schema_err("<document>", e))?;
        Self::from_raw(raw)
    }

    pub fn load_path(path: &std::path::Path) -> Result<Configuration, OrbitError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| OrbitError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Resolves a built-in name or a filesystem path.
    pub fn load(source: &str) -> Result<Configuration, OrbitError> {
        if let Some(cfg) = Self::builtin(source) {
            return cfg;
        }
        let path = std::path::Path::new(source);
        if path.exists() {
            Self::load_path(path)
        } else {
            Err(OrbitError::UnknownBuiltin(source.to_string()))
        }
    }

    pub fn builtin(name: &str) -> Option<Result<Configuration, OrbitError>> {
        builtin_json(name).map(Self::from_json_str)
    }

    fn from_raw(raw: RawConfig) -> Result<Configuration, OrbitError> {
        if raw.name.is_empty() {
            return Err(schema_err("name", "must be nonempty"));
        }
        let alphabet =
            Alphabet::new(raw.alphabet.iter().cloned()).map_err(|e| schema_err("alphabet", e))?;

        let cycle = match &raw.cycle {
            Some(text) => {
                crate::freegroup::parse(text, &alphabet).map_err(|e| schema_err("cycle", e))?
            }
            None => {
                // Default cycle: the product of the first four vanishing
                // cycles, the element the quadrilateral monodromy orbit
                // always carries.
                if alphabet.rank() < 4 {
                    return Err(schema_err(
                        "cycle",
                        "missing; the default d1 d2 d3 d4 needs at least four generators",
                    ));
                }
                let mut w = Word::identity(alphabet.clone());
                for i in 0..4 {
                    w = w.multiply(&Word::generator(alphabet.clone(), i))?;
                }
                w
            }
        };

        let mut auxiliary_cycles = BTreeMap::new();
        for (name, text) in &raw.auxiliary_cycles {
            let word = crate::freegroup::parse(text, &alphabet)
                .map_err(|e| schema_err(format!("auxiliary_cycles.{name}"), e))?;
            auxiliary_cycles.insert(name.clone(), word);
        }

        let mut orbit_families = Vec::new();
        for (i, fam) in raw.orbit_families.iter().enumerate() {
            let path = format!("orbit_families[{i}]");
            let template = parse_template(&fam.template)
                .map_err(|e| schema_err(format!("{path}.template"), e))?;
            let range = match &fam.max_m {
                None => None,
                Some(v) => {
                    Some(parse_range(v).map_err(|m| schema_err(format!("{path}.max_m"), m))?)
                }
            };
            if template.has_parameter() && range.is_none() {
                return Err(schema_err(
                    format!("{path}.max_m"),
                    "required: template uses the parameter m",
                ));
            }
            // Validate generator names now, at a harmless instantiation.
            template
                .instantiate(&alphabet, Some(0))
                .map_err(|e| schema_err(format!("{path}.template"), e))?;
            orbit_families.push(OrbitFamily {
                template_text: fam.template.clone(),
                template,
                range,
            });
        }

        let known_name = |n: &str| {
            n == "gamma" || auxiliary_cycles.contains_key(n) || alphabet.index_of(n).is_some()
        };
        for (i, (a, b, v)) in raw.intersections.iter().enumerate() {
            let path = format!("intersections[{i}]");
            for n in [a, b] {
                if !known_name(n) {
                    return Err(schema_err(&path, format!("unknown cycle name `{n}`")));
                }
            }
            if a == b && *v != 0 {
                return Err(schema_err(
                    &path,
                    "self-intersection must be 0 (antisymmetry)",
                ));
            }
            for (j, (a2, b2, v2)) in raw.intersections.iter().enumerate().take(i) {
                if a2 == b && b2 == a && *v2 != -*v {
                    return Err(schema_err(
                        &path,
                        format!("conflicts with intersections[{j}]: antisymmetry requires ({b}, {a}) = {}", -v),
                    ));
                }
            }
        }

        Ok(Configuration {
            name: raw.name,
            alphabet,
            cycle,
            auxiliary_cycles,
            orbit_families,
            intersections: raw.intersections,
            notes: raw.notes,
        })
    }

    /// All instantiated orbit-generator words at the given class, the cycle
    /// first.
    pub fn orbit_words(&self, class: usize) -> Result<Vec<Word>, OrbitError> {
        let mut words = vec![self.cycle.clone()];
        for fam in &self.orbit_families {
            words.extend(fam.instantiate(&self.alphabet, class)?);
        }
        Ok(words)
    }
}

fn parse_range(v: &serde_json::Value) -> Result<FamilyRange, String> {
    match v {
        serde_json::Value::Number(n) => {
            let k = n
                .as_u64()
                .ok_or_else(|| "must be a nonnegative integer".to_string())?;
            Ok(FamilyRange::Fixed(k as u32))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            if let Ok(k) = s.parse::<u32>() {
                return Ok(FamilyRange::Fixed(k));
            }
            let rest = s
                .strip_prefix("c-")
                .or_else(|| s.strip_prefix("c -"))
                .ok_or_else(|| format!("expected an integer or `c-<k>`, got `{s}`"))?;
            let k = rest
                .trim()
                .parse::<u32>()
                .map_err(|_| format!("expected an integer after `c-`, got `{rest}`"))?;
            Ok(FamilyRange::ClassMinus(k))
        }
        _ => Err("expected an integer or a `c-<k>` string".to_string()),
    }
}

pub(super) fn builtin_json(name: &str) -> Option<&'static str> {
    match name {
        "generic4" => Some(GENERIC4_JSON),
        "trapezoid" => Some(TRAPEZOID_JSON),
        "parallelogram" => Some(PARALLELOGRAM_JSON),
        _ => None,
    }
}
