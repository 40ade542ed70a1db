//! Drug-interaction graphs: drugs plus weighted harm and synergy edges.
//!
//! Graphs are validated once at construction and immutable afterwards. Edge
//! endpoints are stored as drug indices with `a < b`, and the edge list is kept
//! sorted by `(a, b, kind)` so two graphs with the same content compare equal
//! regardless of the order the edges were listed in.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Harm,
    Synergy,
}

impl InteractionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InteractionKind::Harm => "harm",
            InteractionKind::Synergy => "synergy",
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InteractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harm" => Ok(InteractionKind::Harm),
            "synergy" => Ok(InteractionKind::Synergy),
            other => Err(Error::Malformed(format!(
                "unknown interaction kind `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drug {
    pub index: usize,
    pub name: String,
    pub abbreviation: Option<String>,
}

impl Drug {
    /// Short label used in reports: the abbreviation when the drug has one.
    pub fn label(&self) -> &str {
        self.abbreviation.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction {
    pub a: usize,
    pub b: usize,
    pub kind: InteractionKind,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionGraph {
    drugs: Vec<Drug>,
    interactions: Vec<Interaction>,
}

impl InteractionGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.drugs.len()
    }

    /// Always false for a validated graph; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.drugs.is_empty()
    }

    pub fn drugs(&self) -> &[Drug] {
        &self.drugs
    }

    pub fn drug(&self, index: usize) -> Result<&Drug> {
        self.drugs.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.drugs.len(),
        })
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn edges(&self, kind: InteractionKind) -> impl Iterator<Item = &Interaction> + '_ {
        self.interactions.iter().filter(move |e| e.kind == kind)
    }

    /// Index of the drug whose full name or abbreviation equals `key` (case-sensitive).
    pub fn lookup(&self, key: &str) -> Option<usize> {
        self.drugs
            .iter()
            .find(|d| d.name == key || d.abbreviation.as_deref() == Some(key))
            .map(|d| d.index)
    }

    /// Weight of the `kind` edge between `i` and `j`, in either order.
    pub fn weight(&self, i: usize, j: usize, kind: InteractionKind) -> Option<f64> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.interactions
            .iter()
            .find(|e| e.a == a && e.b == b && e.kind == kind)
            .map(|e| e.weight)
    }

    /// Sum of the weights of `kind` edges incident to `drug`.
    pub fn incident_weight_sum(&self, drug: usize, kind: InteractionKind) -> Result<f64> {
        self.drug(drug)?;
        Ok(self
            .edges(kind)
            .filter(|e| e.a == drug || e.b == drug)
            .map(|e| e.weight)
            .sum())
    }

    pub fn total_weight(&self, kind: InteractionKind) -> f64 {
        self.edges(kind).map(|e| e.weight).sum()
    }

    pub fn parse_json(document: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self> {
        let mut builder = GraphBuilder::default();
        for d in doc.drugs {
            builder = builder.drug(d.name, d.abbr);
        }
        for e in doc.interactions {
            builder = builder.edge(e.a, e.b, e.kind, e.weight);
        }
        builder.build()
    }

    /// Document form with edges referenced by full drug name.
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            drugs: self
                .drugs
                .iter()
                .map(|d| DrugEntry {
                    name: d.name.clone(),
                    abbr: d.abbreviation.clone(),
                })
                .collect(),
            interactions: self
                .interactions
                .iter()
                .map(|e| EdgeEntry {
                    a: self.drugs[e.a].name.clone(),
                    b: self.drugs[e.b].name.clone(),
                    kind: e.kind,
                    weight: e.weight,
                })
                .collect(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph documents always serialize")
    }
}

/// On-disk schema: `{"drugs":[{"name":..,"abbr":..}],"interactions":[{"a":..,"b":..,"kind":..,"weight":..}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub drugs: Vec<DrugEntry>,
    #[serde(default)]
    pub interactions: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrugEntry {
    pub name: String,
    #[serde(default)]
    pub abbr: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    pub kind: InteractionKind,
    pub weight: f64,
}

#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    drugs: Vec<(String, Option<String>)>,
    edges: Vec<(String, String, InteractionKind, f64)>,
}

impl GraphBuilder {
    pub fn drug(mut self, name: impl Into<String>, abbreviation: Option<String>) -> Self {
        self.drugs.push((name.into(), abbreviation));
        self
    }

    pub fn edge(
        mut self,
        a: impl Into<String>,
        b: impl Into<String>,
        kind: InteractionKind,
        weight: f64,
    ) -> Self {
        self.edges.push((a.into(), b.into(), kind, weight));
        self
    }

    pub fn harm(self, a: impl Into<String>, b: impl Into<String>, weight: f64) -> Self {
        self.edge(a, b, InteractionKind::Harm, weight)
    }

    pub fn synergy(self, a: impl Into<String>, b: impl Into<String>, weight: f64) -> Self {
        self.edge(a, b, InteractionKind::Synergy, weight)
    }

    pub fn build(self) -> Result<InteractionGraph> {
        if self.drugs.is_empty() {
            return Err(Error::EmptyGraph);
        }

        // Names and abbreviations share one namespace so edge lookup is unambiguous.
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut drugs = Vec::with_capacity(self.drugs.len());
        for (index, (name, abbreviation)) in self.drugs.into_iter().enumerate() {
            for key in std::iter::once(&name).chain(abbreviation.iter()) {
                if key.is_empty() {
                    return Err(Error::Malformed("empty drug identifier".into()));
                }
                if ids
                    .insert(key.clone(), index)
                    .is_some_and(|prev| prev != index)
                {
                    return Err(Error::DuplicateDrug(key.clone()));
                }
            }
            drugs.push(Drug {
                index,
                name,
                abbreviation,
            });
        }

        let mut interactions: Vec<Interaction> = Vec::with_capacity(self.edges.len());
        for (a, b, kind, weight) in self.edges {
            let ia = *ids.get(&a).ok_or_else(|| Error::UnknownDrug(a.clone()))?;
            let ib = *ids.get(&b).ok_or_else(|| Error::UnknownDrug(b.clone()))?;
            if !(0.0..=1.0).contains(&weight) {
                return Err(Error::WeightOutOfRange(weight));
            }
            if ia == ib {
                return Err(Error::SelfLoop(a));
            }
            let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
            if interactions
                .iter()
                .any(|e| e.a == lo && e.b == hi && e.kind == kind)
            {
                return Err(Error::DuplicateEdge {
                    a: drugs[lo].name.clone(),
                    b: drugs[hi].name.clone(),
                    kind: kind.to_string(),
                });
            }
            interactions.push(Interaction {
                a: lo,
                b: hi,
                kind,
                weight,
            });
        }
        interactions.sort_by_key(|e| (e.a, e.b, e.kind));

        Ok(InteractionGraph {
            drugs,
            interactions,
        })
    }
}
