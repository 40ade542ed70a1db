#![allow(dead_code)]

use ddiq::{Assignment, Dataset, InteractionGraph, InteractionKind, IsingModel, Objective};
use ddiq::{MssParams, ScoParams};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const ALPHAS: [f64; 3] = [2.5, 5.0, 7.5];
pub const SCO_K: [usize; 2] = [3, 4];

pub struct Instance {
    pub name: String,
    pub graph: InteractionGraph,
    pub objective: Objective,
    pub model: IsingModel,
}

/// Both datasets under MSS(α ∈ {2.5, 5, 7.5}) and SCO(γ=2.5, μ=5, K ∈ {3, 4}).
pub fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for dataset in Dataset::ALL {
        let graph = dataset.graph();
        let mut objectives: Vec<Objective> = ALPHAS
            .iter()
            .map(|&a| Objective::Mss(MssParams::new(a).unwrap()))
            .collect();
        objectives.extend(
            SCO_K
                .iter()
                .map(|&k| Objective::Sco(ScoParams::new(2.5, 5.0, k).unwrap())),
        );
        for objective in objectives {
            let model = objective.compile(&graph).unwrap();
            out.push(Instance {
                name: format!("{dataset}/{}", objective.params_json()),
                graph: graph.clone(),
                objective,
                model,
            });
        }
    }
    out
}

/// Loss written directly from the objective definitions, pair by pair.
pub fn reference_loss(graph: &InteractionGraph, objective: &Objective, x: &Assignment) -> f64 {
    let both = |a: usize, b: usize| x.is_selected(a) && x.is_selected(b);
    let selected_weight = |kind: InteractionKind| -> f64 {
        graph
            .interactions()
            .iter()
            .filter(|e| e.kind == kind && both(e.a, e.b))
            .map(|e| e.weight)
            .sum()
    };
    let size = x.count() as f64;
    match objective {
        Objective::Mss(p) => -size + p.alpha() * selected_weight(InteractionKind::Harm),
        Objective::Sco(p) => {
            -selected_weight(InteractionKind::Synergy)
                + p.gamma() * selected_weight(InteractionKind::Harm)
                + p.mu() * (size - p.k() as f64).powi(2)
        }
    }
}

fn z(index: usize, k: usize) -> f64 {
    if index >> k & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(Y_k ψ)[y]`: Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩.
fn apply_y(amps: &[Complex64], k: usize) -> Vec<Complex64> {
    (0..amps.len())
        .map(|y| {
            let phase = if y >> k & 1 == 0 {
                Complex64::new(0.0, -1.0)
            } else {
                Complex64::new(0.0, 1.0)
            };
            phase * amps[y ^ (1 << k)]
        })
        .collect()
}

fn apply_z(amps: &[Complex64], k: usize) -> Vec<Complex64> {
    amps.iter().enumerate().map(|(y, a)| a * z(y, k)).collect()
}

fn expect(amps: &[Complex64], op: &[Complex64]) -> f64 {
    amps.iter()
        .zip(op)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .re
}

/// `−i⟨[Σ X_k, H_p]⟩` expanded over Pauli strings:
/// `−Σ 2h_k⟨Y_k⟩ − Σ 2J_ij⟨Y_i Z_j + Z_i Y_j⟩`.
pub fn pauli_feedback(model: &IsingModel, amps: &[Complex64]) -> f64 {
    let mut beta = 0.0;
    for (k, &h) in model.fields().iter().enumerate() {
        beta -= 2.0 * h * expect(amps, &apply_y(amps, k));
    }
    for (&(i, j), &coupling) in model.couplings() {
        let yz = expect(amps, &apply_y(&apply_z(amps, j), i));
        let zy = expect(amps, &apply_z(&apply_y(amps, j), i));
        beta -= 2.0 * coupling * (yz + zy);
    }
    beta
}

pub fn random_model(rng: &mut ChaCha8Rng, n: usize) -> IsingModel {
    let fields = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut couplings = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < 0.7 {
                couplings.insert((i, j), rng.random_range(-2.0..2.0));
            }
        }
    }
    IsingModel::new(n, rng.random_range(-3.0..3.0), fields, couplings).unwrap()
}

pub fn random_amplitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Basis index with the named drugs selected.
pub fn index_of(graph: &InteractionGraph, labels: &[&str]) -> usize {
    labels
        .iter()
        .map(|l| 1usize << graph.lookup(l).unwrap_or_else(|| panic!("no drug {l}")))
        .sum()
}
