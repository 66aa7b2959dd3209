//! JSON instance files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matroid::{Matroid, MatroidKind};
use crate::set::{ElementSet, GroundSet};
use crate::valuation::{DiscountTerm, Valuation, ValuationKind};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub format_version: u32,
    pub ground: GroundSpec,
    pub matroid: MatroidSpec,
    pub valuation: ValuationSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundSpec {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform {
        rank: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    PairPartition {
        users: usize,
        resources: usize,
    },
    Explicit {
        independent_sets: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ValuationSpec {
    Tabular {
        table: MaskTable,
    },
    Modular {
        weights: Vec<f64>,
    },
    Coverage {
        covers: Vec<Vec<usize>>,
        universe_weights: Vec<f64>,
    },
    Discounted {
        terms: Vec<DiscountTerm>,
    },
    PartitionSum {
        per_user: Vec<ValuationSpec>,
    },
}

/// All `2^n` values of a set function, keyed by decimal bit-mask strings and
/// written in increasing mask order.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskTable(pub Vec<f64>);

impl Serialize for MaskTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().enumerate().map(|(mask, v)| (mask.to_string(), v)))
    }
}

impl<'de> Deserialize<'de> for MaskTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, f64>::deserialize(d)?;
        let mut by_mask = BTreeMap::new();
        for (key, v) in raw {
            let mask: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("table key {key:?} is not a decimal bit mask")))?;
            by_mask.insert(mask, v);
        }
        let len = by_mask.len();
        if !len.is_power_of_two() || by_mask.keys().next_back() != Some(&(len - 1)) {
            return Err(D::Error::custom(format!(
                "table must list every mask 0..2^n exactly once, got {len} entries"
            )));
        }
        Ok(MaskTable(by_mask.into_values().collect()))
    }
}

impl MatroidSpec {
    fn from_matroid(m: &Matroid) -> Self {
        match m.kind() {
            MatroidKind::Uniform { rank } => MatroidSpec::Uniform { rank: *rank },
            MatroidKind::Partition { blocks, capacities } => MatroidSpec::Partition {
                blocks: blocks.clone(),
                capacities: capacities.clone(),
            },
            MatroidKind::PairPartition { users, resources } => MatroidSpec::PairPartition {
                users: *users,
                resources: *resources,
            },
            MatroidKind::Explicit { independent_sets } => MatroidSpec::Explicit {
                independent_sets: independent_sets.iter().map(ElementSet::to_vec).collect(),
            },
        }
    }

    fn build(self, ground: GroundSet, strict: bool) -> Result<Matroid> {
        let n = ground.size();
        match self {
            MatroidSpec::Uniform { rank } => Matroid::uniform(ground, rank),
            MatroidSpec::Partition { blocks, capacities } => Matroid::partition(ground, blocks, capacities),
            MatroidSpec::PairPartition { users, resources } => {
                Matroid::pair_partition(users, resources)?.with_ground(ground)
            }
            MatroidSpec::Explicit { independent_sets } => {
                let sets = independent_sets
                    .into_iter()
                    .map(|s| ElementSet::from_elements(n, s))
                    .collect::<Result<Vec<_>>>()?;
                if strict {
                    Matroid::explicit(ground, sets)
                } else {
                    Matroid::explicit_unchecked(ground, sets)
                }
            }
        }
    }
}

impl ValuationSpec {
    fn from_valuation(z: &Valuation) -> Self {
        match z.kind() {
            ValuationKind::Tabular { table } => ValuationSpec::Tabular {
                table: MaskTable(table.clone()),
            },
            ValuationKind::Modular { weights } => ValuationSpec::Modular {
                weights: weights.clone(),
            },
            ValuationKind::Coverage {
                covers,
                universe_weights,
            } => ValuationSpec::Coverage {
                covers: covers.clone(),
                universe_weights: universe_weights.clone(),
            },
            ValuationKind::Discounted { terms } => ValuationSpec::Discounted { terms: terms.clone() },
            ValuationKind::PartitionSum { per_user, .. } => ValuationSpec::PartitionSum {
                per_user: per_user.iter().map(ValuationSpec::from_valuation).collect(),
            },
        }
    }

    /// `size` is the ground-set size this valuation must cover; for a
    /// partition sum, `resources` gives the per-user size.
    fn build(self, size: usize, resources: Option<(usize, usize)>) -> Result<Valuation> {
        let z = match self {
            ValuationSpec::Tabular { table } => {
                let n = table.0.len().trailing_zeros() as usize;
                Valuation::tabular(n, table.0)?
            }
            ValuationSpec::Modular { weights } => Valuation::modular(weights)?,
            ValuationSpec::Coverage {
                covers,
                universe_weights,
            } => Valuation::coverage(covers, universe_weights)?,
            ValuationSpec::Discounted { terms } => Valuation::discounted(terms)?,
            ValuationSpec::PartitionSum { per_user } => {
                let (users, resources) = resources
                    .ok_or_else(|| Error::invalid("a partition-sum valuation needs a pair-partition matroid"))?;
                let per_user = per_user
                    .into_iter()
                    .map(|spec| spec.build(resources, None))
                    .collect::<Result<Vec<_>>>()?;
                Valuation::partition_sum(users, resources, per_user)?
            }
        };
        if z.size() != size {
            return Err(Error::invalid(format!(
                "valuation covers {} elements, expected {size}",
                z.size()
            )));
        }
        Ok(z)
    }
}

impl InstanceSpec {
    pub fn from_instance(instance: &Instance) -> Self {
        let ground = instance.ground();
        InstanceSpec {
            format_version: FORMAT_VERSION,
            ground: GroundSpec {
                size: ground.size(),
                labels: ground.labels().map(<[String]>::to_vec),
            },
            matroid: MatroidSpec::from_matroid(instance.matroid()),
            valuation: ValuationSpec::from_valuation(instance.valuation()),
        }
    }

    /// Builds the instance. With `strict`, explicit families must satisfy the
    /// matroid axioms.
    pub fn into_instance(self, strict: bool) -> Result<Instance> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "unsupported format_version {}, expected {FORMAT_VERSION}",
                self.format_version
            )));
        }
        let ground = match self.ground.labels {
            Some(labels) => {
                if labels.len() != self.ground.size {
                    return Err(Error::invalid(format!(
                        "{} labels for a ground set of {} elements",
                        labels.len(),
                        self.ground.size
                    )));
                }
                GroundSet::with_labels(labels)?
            }
            None => GroundSet::new(self.ground.size),
        };
        let size = ground.size();
        let dims = match &self.matroid {
            MatroidSpec::PairPartition { users, resources } => Some((*users, *resources)),
            _ => None,
        };
        if let Some((users, resources)) = dims {
            if users * resources != size {
                return Err(Error::invalid(format!(
                    "{users} users x {resources} resources does not match ground size {size}"
                )));
            }
        }
        let matroid = self.matroid.build(ground, strict)?;
        let valuation = self.valuation.build(size, dims)?;
        Instance::new(matroid, valuation)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

pub fn emit_instance(instance: &Instance) -> String {
    to_json(&InstanceSpec::from_instance(instance))
}

/// Parses instance JSON; `origin` names the source in error messages.
pub fn parse_instance(text: &str, origin: &str, strict: bool) -> Result<Instance> {
    let spec: InstanceSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: format!("line {} column {}: {e}", e.line(), e.column()),
    })?;
    spec.into_instance(strict)
}

pub fn load_instance(path: &Path, strict: bool) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text, &path.display().to_string(), strict)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabular_round_trip_keeps_numeric_key_order() {
        let table: Vec<f64> = (0..16).map(|m| (m as f64).sqrt() / 3.0).collect();
        let z = Valuation::tabular(4, table).unwrap();
        let inst = Instance::new(Matroid::uniform(GroundSet::new(4), 2).unwrap(), z).unwrap();
        let text = emit_instance(&inst);
        assert!(text.find("\"2\"").unwrap() < text.find("\"10\"").unwrap());
        let back = parse_instance(&text, "mem", true).unwrap();
        assert_eq!(back.valuation(), inst.valuation());
        assert_eq!(emit_instance(&back), text);
    }

    #[test]
    fn partition_round_trip() {
        let z1 = Valuation::modular(vec![0.1, 0.2]).unwrap();
        let z2 = Valuation::discounted(vec![DiscountTerm::plain(1.0), DiscountTerm::triggered(0.3, 0.1, 0)]).unwrap();
        let inst = Instance::partition(2, 2, vec![z1, z2]).unwrap();
        let text = emit_instance(&inst);
        let back = parse_instance(&text, "mem", true).unwrap();
        assert!(back.partition_view().is_some());
        assert_eq!(back.ground(), inst.ground());
        assert_eq!(emit_instance(&back), text);
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_instance("{\n  \"format_version\": 1,\n  oops\n}", "f.json", true).unwrap_err();
        match err {
            Error::Parse { path, message } => {
                assert_eq!(path, "f.json");
                assert!(message.starts_with("line 3"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let text = r#"{"format_version":1,"ground":{"size":2},"matroid":{"kind":"uniform","rank":1},
            "valuation":{"kind":"tabular","table":{"0":0,"1":1,"3":2}}}"#;
        assert!(matches!(parse_instance(text, "t", true), Err(Error::Parse { .. })));
        let nonzero = r#"{"format_version":1,"ground":{"size":1},"matroid":{"kind":"uniform","rank":1},
            "valuation":{"kind":"tabular","table":{"0":1,"1":2}}}"#;
        assert!(matches!(
            parse_instance(nonzero, "t", true),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn strictness_controls_explicit_family_checks() {
        let text = r#"{"format_version":1,"ground":{"size":2},
            "matroid":{"kind":"explicit","independent_sets":[[],[0],[0,1]]},
            "valuation":{"kind":"modular","weights":[1,1]}}"#;
        assert!(matches!(parse_instance(text, "t", true), Err(Error::MatroidAxiom(_))));
        assert!(parse_instance(text, "t", false).is_ok());
    }
}
