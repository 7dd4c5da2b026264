//! The single-electron double-quantum-dot Hamiltonian and its spectrum.
//!
//! Basis order is `|L0⟩, |L1⟩, |R0⟩, |R1⟩`: the charge (τ) index selects the
//! dot and the spin (σ) index the Zeeman level. Energies are labelled with
//! the branch convention
//!
//! ```text
//! E1 = +½√(Σ + 2√Ω)   E2 = −E1
//! E3 = +½√(Σ − 2√Ω)   E4 = −E3
//! Ω = 4Bz²t² + ε²(Bz² + Bx²),   Σ = Bz² + Bx² + 4t² + ε²
//! ```
//!
//! so that `E2 ≤ E4 ≤ E3 ≤ E1` and the ground state is always `E2`.

use crate::error::{Error, Result};
use crate::qmatrix::{eig_sym, EigenDecomp, Mat4};
use crate::search;

const DENOMINATOR_FLOOR: f64 = 1e-10;
const DEGENERACY_GAP: f64 = 1e-10;
const ANTICROSSING_STEP: f64 = 0.1;
const ANTICROSSING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Inter-dot detuning ε.
    pub epsilon: f64,
    /// Tunneling amplitude, non-negative.
    pub t: f64,
    /// Longitudinal field with the Zeeman factor absorbed.
    pub bz: f64,
    /// Transverse field gradient.
    pub bx: f64,
}

impl ModelParams {
    pub fn new(epsilon: f64, t: f64, bz: f64, bx: f64) -> Result<Self> {
        let p = Self { epsilon, t, bz, bx };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epsilon", self.epsilon),
            ("t", self.t),
            ("bz", self.bz),
            ("bx", self.bx),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite ({v})")));
            }
        }
        if self.t < 0.0 {
            return Err(Error::InvalidParams(format!(
                "tunneling must be non-negative, got {}",
                self.t
            )));
        }
        Ok(())
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    /// `Ω = 4Bz²t² + ε²(Bz² + Bx²)`.
    pub fn omega(&self) -> f64 {
        let bz2 = self.bz * self.bz;
        4.0 * bz2 * self.t * self.t + self.epsilon * self.epsilon * (bz2 + self.bx * self.bx)
    }

    /// `Σ = Bz² + Bx² + 4t² + ε²`, also the squared Frobenius norm of `H`.
    pub fn sigma_cap(&self) -> f64 {
        self.bz * self.bz + self.bx * self.bx + 4.0 * self.t * self.t + self.epsilon * self.epsilon
    }

    /// `α² = Bz² + Bx² − ε² − 4t²`.
    pub fn alpha_sq(&self) -> f64 {
        self.bz * self.bz + self.bx * self.bx - self.epsilon * self.epsilon - 4.0 * self.t * self.t
    }
}

/// `H = ε/2 τz + t τx + Bz/2 σz + Bx/2 τz σx`.
pub fn build_hamiltonian(p: &ModelParams) -> Result<Mat4> {
    p.validate()?;
    let ModelParams { epsilon, t, bz, bx } = *p;
    let (e, z, x) = (0.5 * epsilon, 0.5 * bz, 0.5 * bx);
    Ok(Mat4::from_rows([
        [e + z, x, t, 0.0],
        [x, e - z, 0.0, t],
        [t, 0.0, -e + z, -x],
        [0.0, t, -x, -e - z],
    ]))
}

/// Level labels in the branch convention above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    E1,
    E2,
    E3,
    E4,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::E1, Level::E2, Level::E3, Level::E4];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Position of this level in an ascending eigenvalue list.
    fn ascending_rank(self) -> usize {
        match self {
            Level::E2 => 0,
            Level::E4 => 1,
            Level::E3 => 2,
            Level::E1 => 3,
        }
    }
}

/// Closed-form energies `[E1, E2, E3, E4]`.
///
/// `E3` is evaluated as `√(α⁴ + 16t²Bx²) / (4E1)`, which is algebraically
/// identical to `½√(Σ − 2√Ω)` (since `Σ² − 4Ω = α⁴ + 16t²Bx²`) but avoids the
/// cancellation near level crossings.
pub fn analytic_energies(p: &ModelParams) -> Result<[f64; 4]> {
    p.validate()?;
    let e1 = 0.5 * (p.sigma_cap() + 2.0 * p.omega().sqrt()).sqrt();
    let a2 = p.alpha_sq();
    let disc = (a2 * a2 + 16.0 * p.t * p.t * p.bx * p.bx).sqrt();
    let e3 = if e1 > 0.0 { disc / (4.0 * e1) } else { 0.0 };
    Ok([e1, -e1, e3, -e3])
}

/// The same energies with `E3 = ½√(Σ − 2√Ω)` taken literally and
/// `Σ − 2√Ω` clamped at zero. Loses precision near level crossings.
pub fn naive_energies(p: &ModelParams) -> [f64; 4] {
    let sigma = p.sigma_cap();
    let root = p.omega().sqrt();
    let e1 = 0.5 * (sigma + 2.0 * root).sqrt();
    let e3 = 0.5 * (sigma - 2.0 * root).max(0.0).sqrt();
    [e1, -e1, e3, -e3]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub params: ModelParams,
    /// `[E1, E2, E3, E4]` from the closed forms.
    pub energies: [f64; 4],
    /// Numerical eigenvectors, indexed by [`Level::index`].
    pub eigenvectors: [[f64; 4]; 4],
    /// Numerical eigendecomposition of `H` (ascending).
    pub numeric: EigenDecomp<4>,
    pub omega: f64,
    pub sigma_cap: f64,
}

impl Spectrum {
    pub fn energy(&self, level: Level) -> f64 {
        self.energies[level.index()]
    }

    pub fn eigenvector(&self, level: Level) -> [f64; 4] {
        self.eigenvectors[level.index()]
    }

    /// Largest mismatch between the closed-form and numerical energies,
    /// relative to `max(1, |E1|)`.
    pub fn energy_residual(&self) -> f64 {
        let mut analytic = self.energies;
        analytic.sort_by(f64::total_cmp);
        let worst = analytic
            .iter()
            .zip(self.numeric.values.iter())
            .fold(0.0_f64, |acc, (a, n)| acc.max((a - n).abs()));
        worst / self.energies[0].abs().max(1.0)
    }
}

pub fn spectrum(p: &ModelParams) -> Result<Spectrum> {
    let h = build_hamiltonian(p)?;
    let numeric = eig_sym(&h)?;
    let energies = analytic_energies(p)?;
    let eigenvectors = Level::ALL.map(|l| numeric.vector(l.ascending_rank()));
    Ok(Spectrum {
        params: *p,
        energies,
        eigenvectors,
        numeric,
        omega: p.omega(),
        sigma_cap: p.sigma_cap(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Sign fixed so the largest-magnitude component is positive.
    pub vector: [f64; 4],
    /// Set when the first excited level lies within `1e-10` of the ground level.
    pub degenerate: bool,
}

pub fn ground_state(p: &ModelParams) -> Result<GroundState> {
    let eig = eig_sym(&build_hamiltonian(p)?)?;
    let mut vector = eig.vector(0);
    let pivot = vector
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.abs().total_cmp(&b.abs()).then(j.cmp(i)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if vector[pivot] < 0.0 {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(GroundState {
        energy: eig.values[0],
        vector,
        degenerate: eig.values[1] - eig.values[0] < DEGENERACY_GAP,
    })
}

/// Coefficients of the closed-form eigenvectors
/// `|φ1,2⟩ = M±[a±|L0⟩ + b±|L1⟩ + |R0⟩ + c±|R1⟩]` and
/// `|φ3,4⟩ = N±[ã±|L0⟩ + b̃±|L1⟩ + |R0⟩ + c̃±|R1⟩]`, transcribed term for term.
///
/// Arrays hold the `(+, −)` branches in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticCoeffs {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub a_tilde: [f64; 2],
    pub b_tilde: [f64; 2],
    pub c_tilde: [f64; 2],
    pub m: [f64; 2],
    pub n: [f64; 2],
    pub alpha_sq: f64,
}

impl AnalyticCoeffs {
    /// Normalized closed-form vector for `level`.
    pub fn vector(&self, level: Level) -> [f64; 4] {
        let (norm, a, b, c) = match level {
            Level::E1 => (self.m[0], self.a[0], self.b[0], self.c[0]),
            Level::E2 => (self.m[1], self.a[1], self.b[1], self.c[1]),
            Level::E3 => (self.n[0], self.a_tilde[0], self.b_tilde[0], self.c_tilde[0]),
            Level::E4 => (self.n[1], self.a_tilde[1], self.b_tilde[1], self.c_tilde[1]),
        };
        [norm * a, norm * b, norm, norm * c]
    }
}

fn normalization(a: f64, b: f64, c: f64) -> f64 {
    1.0 / (a * a + b * b + c * c + 1.0).sqrt()
}

pub fn analytic_coeffs(p: &ModelParams) -> Result<AnalyticCoeffs> {
    let [e1, _, e3, _] = analytic_energies(p)?;
    let ModelParams { epsilon, t, bz, bx } = *p;
    let bze = bz + epsilon;
    let den_a = 2.0 * t * bze;
    let den_b = bx * t * bze;
    let den_c = bze * bx;
    if den_a.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::AnalyticUnavailable("2t(Bz + ε) vanishes"));
    }
    if den_b.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::AnalyticUnavailable("Bx t (Bz + ε) vanishes"));
    }
    if den_c.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::AnalyticUnavailable("(Bz + ε) Bx vanishes"));
    }
    let alpha_sq = p.alpha_sq();
    let tail = alpha_sq / (4.0 * bx * t);
    let split = e1 * e1 - e3 * e3;

    let mut out = AnalyticCoeffs {
        a: [0.0; 2],
        b: [0.0; 2],
        c: [0.0; 2],
        a_tilde: [0.0; 2],
        b_tilde: [0.0; 2],
        c_tilde: [0.0; 2],
        m: [0.0; 2],
        n: [0.0; 2],
        alpha_sq,
    };
    for (k, s) in [1.0, -1.0].into_iter().enumerate() {
        out.a[k] = ((epsilon + s * e1).powi(2) - e3 * e3) / den_a;
        out.b[k] = e1 * (-s * bz * epsilon + (epsilon - bz) * e1 + s * split) / den_b + tail;
        out.c[k] = ((bz - s * e1).powi(2) - e3 * e3) / den_c;
        out.a_tilde[k] = ((epsilon + s * e3).powi(2) - e1 * e1) / den_a;
        out.b_tilde[k] = e3 * (-s * bz * epsilon + (epsilon - bz) * e3 - s * split) / den_b + tail;
        out.c_tilde[k] = ((bz - s * e3).powi(2) - e1 * e1) / den_c;
        out.m[k] = normalization(out.a[k], out.b[k], out.c[k]);
        out.n[k] = normalization(out.a_tilde[k], out.b_tilde[k], out.c_tilde[k]);
    }
    Ok(out)
}

/// Per-level comparison of the closed-form eigenvectors with the numerical ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffResidual {
    pub level: Level,
    /// `min_± ‖v_closed ∓ v_numeric‖_max`.
    pub vector: f64,
    /// `‖H v_closed − E v_closed‖_max`.
    pub eigen: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffReport {
    pub coeffs: AnalyticCoeffs,
    pub residuals: [CoeffResidual; 4],
}

impl CoeffReport {
    pub fn worst_vector_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |acc, r| acc.max(r.vector))
    }
}

pub fn coeff_report(p: &ModelParams) -> Result<CoeffReport> {
    let coeffs = analytic_coeffs(p)?;
    let spec = spectrum(p)?;
    let h = build_hamiltonian(p)?;
    let residuals = Level::ALL.map(|level| {
        let closed = coeffs.vector(level);
        let numeric = spec.eigenvector(level);
        let diff = |sign: f64| {
            closed
                .iter()
                .zip(numeric.iter())
                .fold(0.0_f64, |acc, (c, n)| acc.max((c - sign * n).abs()))
        };
        let hv = h.mul_vec(&closed);
        let e = spec.energy(level);
        let eigen = hv
            .iter()
            .zip(closed.iter())
            .fold(0.0_f64, |acc, (hv, v)| acc.max((hv - e * v).abs()));
        CoeffResidual {
            level,
            vector: diff(1.0).min(diff(-1.0)),
            eigen,
        }
    });
    Ok(CoeffReport { coeffs, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelPair {
    E1E3,
    E2E4,
    E3E4,
}

impl LevelPair {
    pub fn levels(self) -> (Level, Level) {
        match self {
            LevelPair::E1E3 => (Level::E1, Level::E3),
            LevelPair::E2E4 => (Level::E2, Level::E4),
            LevelPair::E3E4 => (Level::E3, Level::E4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anticrossing {
    pub epsilon: f64,
    pub gap: f64,
}

/// Minimizes `|E_a(ε) − E_b(ε)|` over `range`. The detuning stored in
/// `params` is ignored.
pub fn find_anticrossing(params: &ModelParams, pair: LevelPair, range: (f64, f64)) -> Result<Anticrossing> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParams(format!("bad detuning range [{lo}, {hi}]")));
    }
    params.validate()?;
    let (la, lb) = pair.levels();
    let gap = |eps: f64| {
        let e = analytic_energies(&params.with_epsilon(eps)).expect("validated parameters");
        (e[la.index()] - e[lb.index()]).abs()
    };
    let steps = ((hi - lo) / ANTICROSSING_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    search::scan_and_refine_min(gap, &grid, ANTICROSSING_TOL)
        .map(|(epsilon, gap)| Anticrossing { epsilon, gap })
        .ok_or(Error::NoAnticrossing { lo, hi })
}
