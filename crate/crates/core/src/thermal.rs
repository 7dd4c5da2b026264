//! Gibbs states `ρ(T) = e^{−H/T} / Z` with `k_B = 1`.
//!
//! The state is assembled from the numerical eigenpairs of `H` as
//! `V diag(w) Vᵀ`, with Boltzmann weights shifted by the lowest energy so that
//! `β|E|` in the millions neither overflows nor loses the ground state.

use crate::density::{DensityMatrix2, DensityMatrix4};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams};
use crate::qmatrix::{eig_sym, EigenDecomp, Mat4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub params: ModelParams,
    pub temperature: f64,
    pub beta: f64,
    pub rho: DensityMatrix4,
    /// `Σ_i exp(−β(E_i − E_min))`.
    pub z_shifted: f64,
    /// The `E_min` subtracted before exponentiating.
    pub energy_shift: f64,
    /// Normalized Boltzmann weights, aligned with `eigen.values`.
    pub weights: [f64; 4],
    pub eigen: EigenDecomp<4>,
}

impl ThermalState {
    /// `ln Z = ln Z_shifted − β E_min`.
    pub fn ln_partition_function(&self) -> f64 {
        self.z_shifted.ln() - self.beta * self.energy_shift
    }

    /// `(ρ11, ρ22, ρ33, ρ44)` in the `|L0⟩, |L1⟩, |R0⟩, |R1⟩` basis.
    pub fn populations(&self) -> [f64; 4] {
        self.rho.populations()
    }

    pub fn reduce_a(&self) -> DensityMatrix2 {
        self.rho.reduce_a()
    }

    pub fn reduce_b(&self) -> DensityMatrix2 {
        self.rho.reduce_b()
    }

    /// `Tr(ρH)`.
    pub fn mean_energy(&self) -> f64 {
        self.weights
            .iter()
            .zip(self.eigen.values.iter())
            .map(|(w, e)| w * e)
            .sum()
    }
}

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature.is_finite() && temperature > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTemperature(temperature))
    }
}

/// Gibbs state of an arbitrary symmetric 4×4 Hamiltonian.
pub fn gibbs_state(h: &Mat4, temperature: f64) -> Result<(DensityMatrix4, f64, f64, [f64; 4], EigenDecomp<4>)> {
    check_temperature(temperature)?;
    let eigen = eig_sym(h)?;
    let beta = 1.0 / temperature;
    let shift = eigen.values[0];
    let raw = eigen.values.map(|e| (-beta * (e - shift)).exp());
    let z_shifted: f64 = raw.iter().sum();
    let weights = raw.map(|w| w / z_shifted);
    let rho = eigen.reconstruct_from(&weights).symmetrized();
    Ok((DensityMatrix4::new_unchecked(rho), z_shifted, shift, weights, eigen))
}

pub fn thermal_state(params: &ModelParams, temperature: f64) -> Result<ThermalState> {
    let h = build_hamiltonian(params)?;
    let (rho, z_shifted, energy_shift, weights, eigen) = gibbs_state(&h, temperature)?;
    Ok(ThermalState {
        params: *params,
        temperature,
        beta: 1.0 / temperature,
        rho,
        z_shifted,
        energy_shift,
        weights,
        eigen,
    })
}

/// `n` temperatures spaced evenly in `log T` over `[t_min, t_max]`.
pub fn log_temperatures(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    let (a, b) = (t_min.ln(), t_max.ln());
    match n {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    t_min
                } else if i + 1 == n {
                    t_max
                } else {
                    (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect(),
    }
}
