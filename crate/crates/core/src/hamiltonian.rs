//! Loss functions over drug selections and their compiled Ising form.
//!
//! A selection `x ∈ {0,1}^n` maps to spins through `z_i = 1 − 2 x_i`, so a
//! selected drug is spin down. Compiled models carry the constant offset,
//! which makes every Ising energy equal to the corresponding loss value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{InteractionGraph, InteractionKind};

/// Largest spin count accepted by dense enumeration and simulation.
pub const MAX_QUBITS: usize = 24;

pub(crate) fn check_guard(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        Err(Error::ResourceGuard { n, max: MAX_QUBITS })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "bit value {other} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    /// Decodes a basis index: bit `i` of `index` is `x_i`.
    pub fn from_index(index: usize, n: usize) -> Self {
        Assignment((0..n).map(|i| (index >> i) & 1 == 1).collect())
    }

    pub fn from_selection(n: usize, selected: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in selected {
            let slot = bits
                .get_mut(i)
                .ok_or(Error::IndexOutOfRange { index: i, len: n })?;
            *slot = true;
        }
        Ok(Assignment(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_selected(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.0
    }

    pub fn bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| u8::from(b)).collect()
    }

    pub fn selected(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i]).collect()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (usize::from(b) << i))
    }

    fn x(&self, i: usize) -> f64 {
        if self.0[i] {
            1.0
        } else {
            0.0
        }
    }

    fn z(&self, i: usize) -> f64 {
        1.0 - 2.0 * self.x(i)
    }

    fn check_len(&self, expected: usize) -> Result<()> {
        if self.0.len() == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected,
                actual: self.0.len(),
            })
        }
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.bits().serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MssParams {
    alpha: f64,
}

impl MssParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(MssParams { alpha })
        } else {
            Err(Error::InvalidParameter(format!(
                "alpha must be > 0, got {alpha}"
            )))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoParams {
    gamma: f64,
    mu: f64,
    k: usize,
}

impl ScoParams {
    /// `k <= n` depends on the graph and is checked when the params are used.
    pub fn new(gamma: f64, mu: f64, k: usize) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
        }
        Ok(ScoParams { gamma, mu, k })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn check_size(&self, n: usize) -> Result<()> {
        if self.k > n {
            Err(Error::InvalidParameter(format!(
                "K={} exceeds n={n}",
                self.k
            )))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Mss,
    Sco,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Mss => "mss",
            ModelKind::Sco => "sco",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mss" => Ok(ModelKind::Mss),
            "sco" => Ok(ModelKind::Sco),
            other => Err(Error::InvalidParameter(format!("unknown model `{other}`"))),
        }
    }
}

/// An objective together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    Mss(MssParams),
    Sco(ScoParams),
}

impl Objective {
    pub fn kind(&self) -> ModelKind {
        match self {
            Objective::Mss(_) => ModelKind::Mss,
            Objective::Sco(_) => ModelKind::Sco,
        }
    }

    pub fn compile(&self, graph: &InteractionGraph) -> Result<IsingModel> {
        match self {
            Objective::Mss(p) => Ok(compile_mss(graph, p)),
            Objective::Sco(p) => compile_sco(graph, p),
        }
    }

    pub fn loss(&self, graph: &InteractionGraph, assignment: &Assignment) -> Result<f64> {
        match self {
            Objective::Mss(p) => loss_mss(graph, p, assignment),
            Objective::Sco(p) => loss_sco(graph, p, assignment),
        }
    }

    pub fn params_json(&self) -> serde_json::Value {
        match self {
            Objective::Mss(p) => serde_json::to_value(p),
            Objective::Sco(p) => serde_json::to_value(p),
        }
        .expect("params serialize")
    }
}

/// `c + Σ h_i z_i + Σ_{i<j} J_ij z_i z_j` over `n` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n: usize,
    constant: f64,
    fields: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
}

impl IsingModel {
    pub fn new(
        n: usize,
        constant: f64,
        fields: Vec<f64>,
        couplings: BTreeMap<(usize, usize), f64>,
    ) -> Result<Self> {
        if fields.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: fields.len(),
            });
        }
        if !constant.is_finite() || fields.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite Ising coefficient".into(),
            ));
        }
        for (&(i, j), v) in &couplings {
            if !(i < j && j < n) {
                return Err(Error::InvalidParameter(format!(
                    "bad coupling key ({i},{j})"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(
                    "non-finite Ising coefficient".into(),
                ));
            }
        }
        Ok(IsingModel {
            n,
            constant,
            fields,
            couplings,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn coupling(&self, i: usize, j: usize) -> Option<f64> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.couplings.get(&key).copied()
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models serialize")
    }
}

impl Serialize for IsingModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Coupling {
            i: usize,
            j: usize,
            #[serde(rename = "J")]
            value: f64,
        }
        let couplings: Vec<Coupling> = self
            .couplings
            .iter()
            .map(|(&(i, j), &value)| Coupling { i, j, value })
            .collect();
        let mut s = serializer.serialize_struct("IsingModel", 4)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("constant", &self.constant)?;
        s.serialize_field("fields", &self.fields)?;
        s.serialize_field("couplings", &couplings)?;
        s.end()
    }
}

fn internal_weight(graph: &InteractionGraph, x: &Assignment, kind: InteractionKind) -> f64 {
    graph
        .edges(kind)
        .filter(|e| x.is_selected(e.a) && x.is_selected(e.b))
        .map(|e| e.weight)
        .sum()
}

/// `−Σ x_i + α Σ_harm w_ij x_i x_j`
pub fn loss_mss(graph: &InteractionGraph, params: &MssParams, x: &Assignment) -> Result<f64> {
    x.check_len(graph.len())?;
    let size = x.count() as f64;
    Ok(-size + params.alpha * internal_weight(graph, x, InteractionKind::Harm))
}

/// `−Σ_syn w x_i x_j + γ Σ_harm w x_i x_j + μ (Σ x_i − K)²`
pub fn loss_sco(graph: &InteractionGraph, params: &ScoParams, x: &Assignment) -> Result<f64> {
    x.check_len(graph.len())?;
    params.check_size(graph.len())?;
    let excess = x.count() as f64 - params.k as f64;
    Ok(-internal_weight(graph, x, InteractionKind::Synergy)
        + params.gamma * internal_weight(graph, x, InteractionKind::Harm)
        + params.mu * excess * excess)
}

pub fn compile_mss(graph: &InteractionGraph, params: &MssParams) -> IsingModel {
    let n = graph.len();
    let q = params.alpha / 4.0;
    let constant = -(n as f64) / 2.0 + q * graph.total_weight(InteractionKind::Harm);
    let fields = (0..n)
        .map(|i| {
            let incident = graph
                .incident_weight_sum(i, InteractionKind::Harm)
                .expect("index in range");
            0.5 - q * incident
        })
        .collect();
    let couplings = graph
        .edges(InteractionKind::Harm)
        .map(|e| ((e.a, e.b), q * e.weight))
        .collect();
    IsingModel {
        n,
        constant,
        fields,
        couplings,
    }
}

pub fn compile_sco(graph: &InteractionGraph, params: &ScoParams) -> Result<IsingModel> {
    let n = graph.len();
    params.check_size(n)?;
    let nf = n as f64;
    let k = params.k as f64;
    let (gamma, mu) = (params.gamma, params.mu);

    let constant = -graph.total_weight(InteractionKind::Synergy) / 4.0
        + gamma / 4.0 * graph.total_weight(InteractionKind::Harm)
        + mu * (nf / 2.0 - k).powi(2)
        + mu * nf / 4.0;
    let fields = (0..n)
        .map(|i| {
            let syn = graph
                .incident_weight_sum(i, InteractionKind::Synergy)
                .expect("index in range");
            let harm = graph
                .incident_weight_sum(i, InteractionKind::Harm)
                .expect("index in range");
            syn / 4.0 - gamma / 4.0 * harm - mu * (nf / 2.0 - k)
        })
        .collect();

    // The cardinality term couples every pair.
    let mut couplings = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            couplings.insert((i, j), mu / 2.0);
        }
    }
    for e in graph.interactions() {
        let delta = match e.kind {
            InteractionKind::Synergy => -e.weight / 4.0,
            InteractionKind::Harm => gamma / 4.0 * e.weight,
        };
        *couplings.get_mut(&(e.a, e.b)).expect("all pairs present") += delta;
    }

    Ok(IsingModel {
        n,
        constant,
        fields,
        couplings,
    })
}

pub fn energy_of(model: &IsingModel, x: &Assignment) -> Result<f64> {
    x.check_len(model.n)?;
    let linear: f64 = model
        .fields
        .iter()
        .enumerate()
        .map(|(i, h)| h * x.z(i))
        .sum();
    let quadratic: f64 = model
        .couplings
        .iter()
        .map(|(&(i, j), v)| v * x.z(i) * x.z(j))
        .sum();
    Ok(model.constant + linear + quadratic)
}

/// Energies of all `2^n` basis states; entry `b` is the energy of `Assignment::from_index(b, n)`.
pub fn diagonal_energies(model: &IsingModel) -> Result<Vec<f64>> {
    check_guard(model.n)?;
    let dim = 1usize << model.n;
    let mut energies = vec![model.constant; dim];
    for (k, &h) in model.fields.iter().enumerate() {
        for (b, e) in energies.iter_mut().enumerate() {
            *e += if (b >> k) & 1 == 1 { -h } else { h };
        }
    }
    for (&(i, j), &v) in &model.couplings {
        for (b, e) in energies.iter_mut().enumerate() {
            *e += if ((b >> i) ^ (b >> j)) & 1 == 1 {
                -v
            } else {
                v
            };
        }
    }
    Ok(energies)
}
