//! Built-in interaction graphs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{InteractionGraph, InteractionKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataset {
    /// Six drugs spanning antiviral, oncology and metabolic therapy.
    SixDrug,
    /// Nine COVID-19 repurposing candidates.
    Covid9,
}

use InteractionKind::{Harm, Synergy};

const SIX_DRUGS: [&str; 6] = [
    "Ritonavir",
    "Everolimus",
    "Cabazitaxel",
    "Metformin",
    "Erlotinib",
    "Topotecan",
];

const SIX_EDGES: [(&str, &str, InteractionKind, f64); 10] = [
    ("Ritonavir", "Everolimus", Harm, 0.95),
    ("Ritonavir", "Cabazitaxel", Harm, 0.90),
    ("Metformin", "Ritonavir", Harm, 0.65),
    ("Metformin", "Everolimus", Harm, 0.55),
    ("Ritonavir", "Erlotinib", Harm, 0.80),
    ("Topotecan", "Cabazitaxel", Harm, 0.75),
    ("Erlotinib", "Cabazitaxel", Harm, 0.70),
    ("Everolimus", "Cabazitaxel", Synergy, 0.60),
    ("Everolimus", "Topotecan", Synergy, 0.58),
    ("Erlotinib", "Metformin", Synergy, 0.39),
];

const COVID_DRUGS: [(&str, &str); 9] = [
    ("Remdesivir", "RDV"),
    ("Molnupiravir", "MOV"),
    ("Favipiravir", "FPV"),
    ("Ribavirin", "RBV"),
    ("Nirmatrelvir/Ritonavir", "PAX"),
    ("Lopinavir/Ritonavir", "LPV"),
    ("Nitazoxanide", "NTZ"),
    ("Hydroxychloroquine", "HCQ"),
    ("Dexamethasone", "DEX"),
];

const COVID_EDGES: [(&str, &str, InteractionKind, f64); 14] = [
    ("RBV", "RDV", Synergy, 0.95),
    ("MOV", "PAX", Synergy, 0.90),
    ("MOV", "RDV", Synergy, 0.80),
    ("MOV", "RBV", Synergy, 0.60),
    ("PAX", "RDV", Synergy, 0.55),
    ("FPV", "MOV", Synergy, 0.95),
    ("NTZ", "RDV", Synergy, 0.85),
    ("HCQ", "RDV", Harm, 0.95),
    ("HCQ", "PAX", Harm, 0.40),
    ("LPV", "PAX", Harm, 0.75),
    ("LPV", "RDV", Harm, 0.40),
    ("DEX", "HCQ", Harm, 0.75),
    ("DEX", "PAX", Harm, 0.30),
    ("FPV", "LPV", Harm, 0.70),
];

impl Dataset {
    pub const ALL: [Dataset; 2] = [Dataset::SixDrug, Dataset::Covid9];

    pub fn id(self) -> &'static str {
        match self {
            Dataset::SixDrug => "sixdrug",
            Dataset::Covid9 => "covid9",
        }
    }

    /// Raw edge table as `(drug_i, drug_j, kind, weight)` rows.
    pub fn edge_table(self) -> &'static [(&'static str, &'static str, InteractionKind, f64)] {
        match self {
            Dataset::SixDrug => &SIX_EDGES,
            Dataset::Covid9 => &COVID_EDGES,
        }
    }

    pub fn graph(self) -> InteractionGraph {
        let mut builder = InteractionGraph::builder();
        match self {
            Dataset::SixDrug => {
                for name in SIX_DRUGS {
                    builder = builder.drug(name, None);
                }
            }
            Dataset::Covid9 => {
                for (name, abbr) in COVID_DRUGS {
                    builder = builder.drug(name, Some(abbr.to_string()));
                }
            }
        }
        for &(a, b, kind, w) in self.edge_table() {
            builder = builder.edge(a, b, kind, w);
        }
        builder.build().expect("built-in datasets are valid")
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown dataset `{s}`")))
    }
}

pub fn builtin_dataset(name: Dataset) -> InteractionGraph {
    name.graph()
}
