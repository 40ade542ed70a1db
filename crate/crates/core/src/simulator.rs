//! Dense statevector simulation of the problem phase, the transverse mixer,
//! the feedback measurement and the imaginary-time filter.
//!
//! Basis index `b` encodes qubit `k` in bit `k`, matching
//! [`Assignment::from_index`](crate::hamiltonian::Assignment::from_index).

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::{check_guard, diagonal_energies, IsingModel};

/// Minimum post-filter norm before the state is declared collapsed.
const NORM_FLOOR: f64 = 1e-300;

/// A Hamiltonian that is diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    n: usize,
    energies: Vec<f64>,
}

impl DiagonalOperator {
    pub fn from_model(model: &IsingModel) -> Result<Self> {
        Ok(DiagonalOperator {
            n: model.n(),
            energies: diagonal_energies(model)?,
        })
    }

    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        let n = qubits_for_len(energies.len())?;
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("non-finite diagonal entry".into()));
        }
        Ok(DiagonalOperator { n, energies })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn min(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "length {len} is not 2^n with n >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_guard(n)?;
    Ok(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The `|+⟩^⊗n` product state.
    pub fn uniform(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let amp = Complex64::new((dim as f64).recip().sqrt(), 0.0);
        Ok(StateVector {
            n,
            amplitudes: vec![amp; dim],
        })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amplitudes })
    }

    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())?;
        let mut state = StateVector { n, amplitudes };
        state.normalize()?;
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm.is_nan() || norm < NORM_FLOOR {
            return Err(Error::NormCollapsed);
        }
        let inv = norm.recip();
        for a in &mut self.amplitudes {
            *a *= inv;
        }
        Ok(())
    }

    fn check_dim(&self, diag: &DiagonalOperator) -> Result<()> {
        if diag.energies.len() == self.amplitudes.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.amplitudes.len(),
                actual: diag.energies.len(),
            })
        }
    }

    /// `ψ ← exp(−i H_p dt) ψ`.
    pub fn apply_problem_phase(&mut self, diag: &DiagonalOperator, dt: f64) -> Result<()> {
        self.check_dim(diag)?;
        for (a, &e) in self.amplitudes.iter_mut().zip(&diag.energies) {
            *a *= Complex64::from_polar(1.0, -e * dt);
        }
        Ok(())
    }

    /// `ψ ← exp(−i β dt Σ_k X_k) ψ`, one single-qubit rotation per qubit.
    pub fn apply_mixer(&mut self, beta: f64, dt: f64) {
        let theta = beta * dt;
        if theta == 0.0 {
            return;
        }
        let (s, c) = theta.sin_cos();
        let minus_is = Complex64::new(0.0, -s);
        let dim = self.amplitudes.len();
        for k in 0..self.n {
            let stride = 1usize << k;
            for base in (0..dim).step_by(stride << 1) {
                for i in base..base + stride {
                    let a = self.amplitudes[i];
                    let b = self.amplitudes[i + stride];
                    self.amplitudes[i] = a * c + b * minus_is;
                    self.amplitudes[i + stride] = a * minus_is + b * c;
                }
            }
        }
    }

    pub fn expected_energy(&self, diag: &DiagonalOperator) -> Result<f64> {
        self.check_dim(diag)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&diag.energies)
            .map(|(a, e)| a.norm_sqr() * e)
            .sum())
    }

    /// Feedback control `β = −i⟨[H_d, H_p]⟩ = 2 Im⟨H_d ψ | H_p ψ⟩` with `H_d = Σ_k X_k`.
    /// Energies enter relative to their minimum; the identity part commutes with `H_d`.
    pub fn feedback_field(&self, diag: &DiagonalOperator) -> Result<f64> {
        self.check_dim(diag)?;
        let amps = &self.amplitudes;
        let floor = diag.min();
        let mut overlap = Complex64::new(0.0, 0.0);
        for (x, (&a, &e)) in amps.iter().zip(&diag.energies).enumerate() {
            let mut driven = Complex64::new(0.0, 0.0);
            for k in 0..self.n {
                driven += amps[x ^ (1 << k)];
            }
            overlap += driven.conj() * a * (e - floor);
        }
        Ok(2.0 * overlap.im)
    }

    /// `ψ ← e^{−dτ H_p} ψ / ‖·‖`, evaluated with energies shifted by their minimum.
    pub fn apply_ite_filter(&mut self, diag: &DiagonalOperator, dtau: f64) -> Result<()> {
        self.check_dim(diag)?;
        if !(dtau.is_finite() && dtau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dtau must be > 0, got {dtau}"
            )));
        }
        let floor = diag.min();
        for (a, &e) in self.amplitudes.iter_mut().zip(&diag.energies) {
            *a *= (-dtau * (e - floor)).exp();
        }
        self.normalize()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multinomial measurement counts keyed by basis index, deterministic in `seed`.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        if shots == 0 {
            return Err(Error::InvalidParameter("shots must be >= 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.amplitudes.len());
        let mut acc = 0.0;
        for p in self.probabilities() {
            acc += p;
            cumulative.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.random::<f64>() * total;
            let idx = cumulative
                .partition_point(|&c| c <= u)
                .min(cumulative.len() - 1);
            *counts.entry(idx).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    check_guard(n)
}
