//! Decoding, safety audits and ranked measurement outcomes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{InteractionGraph, InteractionKind};
use crate::hamiltonian::{Assignment, IsingModel, Objective};
use crate::simulator::{DiagonalOperator, StateVector};

/// Probabilities below this are reported as zero.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Labels of the selected drugs in library order.
pub fn decode(assignment: &Assignment, graph: &InteractionGraph) -> Result<Vec<String>> {
    if assignment.len() != graph.len() {
        return Err(Error::LengthMismatch {
            expected: graph.len(),
            actual: assignment.len(),
        });
    }
    Ok(assignment
        .selected()
        .into_iter()
        .map(|i| graph.drugs()[i].label().to_string())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairWeight {
    pub a: String,
    pub b: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetAudit {
    pub drugs: Vec<String>,
    pub size: usize,
    pub harm_pairs: Vec<PairWeight>,
    pub synergy_pairs: Vec<PairWeight>,
    pub harm_total: f64,
    pub synergy_total: f64,
}

impl SubsetAudit {
    pub fn is_safe(&self) -> bool {
        self.harm_pairs.is_empty()
    }
}

/// Lists every graph edge with both endpoints in `subset`.
pub fn audit(subset: &[usize], graph: &InteractionGraph) -> Result<SubsetAudit> {
    let mut selected = vec![false; graph.len()];
    for &i in subset {
        let slot = selected.get_mut(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: graph.len(),
        })?;
        if *slot {
            return Err(Error::InvalidParameter(format!(
                "drug index {i} listed twice"
            )));
        }
        *slot = true;
    }

    let label = |i: usize| graph.drugs()[i].label().to_string();
    let internal = |kind| -> Vec<PairWeight> {
        graph
            .edges(kind)
            .filter(|e| selected[e.a] && selected[e.b])
            .map(|e| PairWeight {
                a: label(e.a),
                b: label(e.b),
                weight: e.weight,
            })
            .collect()
    };
    let harm_pairs = internal(InteractionKind::Harm);
    let synergy_pairs = internal(InteractionKind::Synergy);

    Ok(SubsetAudit {
        drugs: (0..graph.len())
            .filter(|&i| selected[i])
            .map(label)
            .collect(),
        size: subset.len(),
        harm_total: harm_pairs.iter().map(|p| p.weight).sum(),
        synergy_total: synergy_pairs.iter().map(|p| p.weight).sum(),
        harm_pairs,
        synergy_pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedOutcome {
    pub basis_index: usize,
    pub bits: Assignment,
    pub probability: f64,
    pub energy: f64,
    pub audit: SubsetAudit,
}

fn clamp_dust(p: f64) -> f64 {
    if p < PROBABILITY_FLOOR {
        0.0
    } else {
        p
    }
}

/// The `k` most probable outcomes, ties broken by ascending basis index.
pub fn top_k(
    state: &StateVector,
    model: &IsingModel,
    graph: &InteractionGraph,
    k: usize,
) -> Result<Vec<RankedOutcome>> {
    if state.n() != model.n() || model.n() != graph.len() {
        return Err(Error::LengthMismatch {
            expected: graph.len(),
            actual: state.n(),
        });
    }
    let dim = 1usize << state.n();
    if k == 0 || k > dim {
        return Err(Error::InvalidParameter(format!(
            "k must be in 1..={dim}, got {k}"
        )));
    }
    let diag = DiagonalOperator::from_model(model)?;
    let probs: Vec<f64> = state.probabilities().into_iter().map(clamp_dust).collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .map(|idx| {
            let bits = Assignment::from_index(idx, state.n());
            Ok(RankedOutcome {
                basis_index: idx,
                probability: probs[idx],
                energy: diag.energies()[idx],
                audit: audit(&bits.selected(), graph)?,
                bits,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitOrder {
    /// Drug 0 is the last character, as when printing the basis index in binary.
    Bit0Rightmost,
    /// Drug 0 is the first character.
    Bit0Leftmost,
}

pub fn render_bitstring(assignment: &Assignment, order: BitOrder) -> String {
    let chars = assignment
        .as_bools()
        .iter()
        .map(|&b| if b { '1' } else { '0' });
    match order {
        BitOrder::Bit0Leftmost => chars.collect(),
        BitOrder::Bit0Rightmost => chars.rev().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeEntry {
    pub probability: Option<f64>,
    pub energy: f64,
    pub bits: Assignment,
    pub bitstring: String,
    pub drugs: Vec<String>,
    pub harm_pairs: Vec<PairWeight>,
    pub synergy_pairs: Vec<PairWeight>,
}

impl OutcomeEntry {
    pub fn new(
        probability: Option<f64>,
        energy: f64,
        bits: Assignment,
        audit: SubsetAudit,
    ) -> Self {
        OutcomeEntry {
            probability,
            energy,
            bitstring: render_bitstring(&bits, BitOrder::Bit0Rightmost),
            bits,
            drugs: audit.drugs,
            harm_pairs: audit.harm_pairs,
            synergy_pairs: audit.synergy_pairs,
        }
    }
}

impl From<RankedOutcome> for OutcomeEntry {
    fn from(o: RankedOutcome) -> Self {
        OutcomeEntry::new(Some(o.probability), o.energy, o.bits, o.audit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleEntry {
    pub drugs: Vec<String>,
    pub bits: Assignment,
    pub count: u64,
}

/// Top-level solve report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub model: String,
    pub params: serde_json::Value,
    pub method: String,
    pub final_energy: Option<f64>,
    pub ground_energy: f64,
    pub outcomes: Vec<OutcomeEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleEntry>>,
}

impl Report {
    pub fn new(objective: &Objective, method: &str, ground_energy: f64) -> Self {
        Report {
            model: objective.kind().to_string(),
            params: objective.params_json(),
            method: method.to_string(),
            final_energy: None,
            ground_energy,
            outcomes: Vec::new(),
            samples: None,
        }
    }

    pub fn set_samples(
        &mut self,
        counts: &BTreeMap<usize, u64>,
        graph: &InteractionGraph,
    ) -> Result<()> {
        let mut entries = counts
            .iter()
            .map(|(&idx, &count)| {
                let bits = Assignment::from_index(idx, graph.len());
                Ok(SampleEntry {
                    drugs: decode(&bits, graph)?,
                    bits,
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        entries.sort_by_key(|e| std::cmp::Reverse(e.count));
        self.samples = Some(entries);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// `rank,probability,energy,bitstring,drugs,harm_total,synergy_total`; drugs joined with `;`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("rank,probability,energy,bitstring,drugs,harm_total,synergy_total\n");
        for (rank, o) in self.outcomes.iter().enumerate() {
            let harm: f64 = o.harm_pairs.iter().map(|p| p.weight).sum();
            let syn: f64 = o.synergy_pairs.iter().map(|p| p.weight).sum();
            out.push_str(&format!(
                "{},{},{:e},{},{},{},{}\n",
                rank + 1,
                o.probability.map(|p| format!("{p:e}")).unwrap_or_default(),
                o.energy,
                o.bitstring,
                o.drugs.join(";"),
                harm,
                syn
            ));
        }
        out
    }
}
