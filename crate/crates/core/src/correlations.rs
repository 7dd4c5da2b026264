//! Entanglement, fidelity and coherence measures on real two-qubit states.
//!
//! Subsystem A is the charge qubit (dot index), B the spin.

use crate::density::{DensityMatrix2, DensityMatrix4};
use crate::error::{Error, Result};
use crate::qmatrix::{eig_sym, kron2, psd_sqrt, sigma_yy, Mat, Mat2, Mat4};

const LAMBDA_CLAMP: f64 = 1e-10;
const ZERO_OFF_DIAGONAL: f64 = 1e-12;
/// Largest off-diagonal tolerated after rotating a reduced state.
pub const ROTATION_TOL: f64 = 1e-10;

/// Eigenvalues of `R = ρ (σy⊗σy) ρ* (σy⊗σy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSpectrum {
    /// Non-negative, descending.
    pub lambdas: [f64; 4],
}

impl RSpectrum {
    pub fn sqrt_lambdas(&self) -> [f64; 4] {
        self.lambdas.map(f64::sqrt)
    }
}

/// `|μ_i|` where `μ_i` are the eigenvalues of `√ρ S √ρ`, `S = σy⊗σy`.
///
/// `(√ρ S √ρ)² = √ρ S ρ S √ρ` is similar to `R` for real `ρ`, so these are the
/// square roots of the eigenvalues of `R`, obtained without a non-symmetric
/// solver and without taking a square root of round-off.
fn spin_flip_singular_values(rho: &DensityMatrix4) -> Result<[f64; 4]> {
    let root = psd_sqrt(rho.matrix())?;
    let b = (root * sigma_yy() * root).symmetrized();
    let mut mu = eig_sym(&b)?.values.map(f64::abs);
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok(mu)
}

pub fn r_spectrum(rho: &DensityMatrix4) -> Result<RSpectrum> {
    Ok(RSpectrum {
        lambdas: spin_flip_singular_values(rho)?.map(|m| m * m),
    })
}

/// Wootters concurrence `max(0, √λ1 − √λ2 − √λ3 − √λ4)`.
pub fn concurrence(rho: &DensityMatrix4) -> Result<f64> {
    let s = spin_flip_singular_values(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Intermediate quantities of the closed-form `R` spectrum.
///
/// Index 0 of the paired arrays is the `+` branch, index 1 the `−` branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSpectrum {
    pub theta_cap: f64,
    pub g_cap: f64,
    pub xi: [f64; 2],
    pub sig: [f64; 2],
    /// `λ1..λ4` in branch order, using `Ξ+Σ+` under both square roots.
    pub lambdas: [f64; 4],
    /// Same, with `Ξ−Σ−` under the root for `λ3,4`.
    pub lambdas_alt: [f64; 4],
    /// A product under a square root was negative and was clamped to zero.
    pub complex_branch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormConcurrence {
    /// `max(0, |√λ1 − √λ3| − √λ2 − √λ4)` with the `Ξ+Σ+` reading.
    pub value: f64,
    /// Same expression with the `Ξ−Σ−` reading for `λ3,4`.
    pub value_alt: f64,
    pub spectrum: ClosedFormSpectrum,
}

/// Closed-form concurrence, kept as a validation path next to [`concurrence`].
/// It assumes a specific sparsity of `ρ`, so residuals against the Wootters
/// value are expected for general states and are only reported.
pub fn concurrence_closed_form(rho: &DensityMatrix4) -> Result<ClosedFormConcurrence> {
    let r = &rho.matrix().0;
    let (r11, r12, r13, r14, r22, r24) = (r[0][0], r[0][1], r[0][2], r[0][3], r[1][1], r[1][3]);

    let g_cap = -2.0 * r14 * r12 + r11 * r24 - r13 * r22;
    let theta_cap = r11 * r22 - r13 * r24 + r14 * r14 + r12 * r12;
    let xi = [2.0 * (r12 + r14) * (r22 + r24), 2.0 * (r12 - r14) * (r22 - r24)];
    let sig = [2.0 * (r13 - r11) * (r14 + r12), 2.0 * (r13 + r11) * (r14 - r12)];

    let mut complex_branch = false;
    let mut root = |x: f64| {
        if x < 0.0 {
            complex_branch = true;
        }
        x.max(0.0).sqrt()
    };
    let plus = root(xi[0] * sig[0]);
    let minus = root(xi[1] * sig[1]);
    let lambdas = [
        theta_cap + g_cap + plus,
        theta_cap + g_cap - plus,
        theta_cap - g_cap + plus,
        theta_cap - g_cap - plus,
    ];
    let lambdas_alt = [
        lambdas[0],
        lambdas[1],
        theta_cap - g_cap + minus,
        theta_cap - g_cap - minus,
    ];

    let eval = |l: &[f64; 4]| {
        let s = l.map(|x| if x < -LAMBDA_CLAMP { 0.0 } else { x.max(0.0).sqrt() });
        ((s[0] - s[2]).abs() - s[1] - s[3]).max(0.0)
    };
    Ok(ClosedFormConcurrence {
        value: eval(&lambdas),
        value_alt: eval(&lambdas_alt),
        spectrum: ClosedFormSpectrum {
            theta_cap,
            g_cap,
            xi,
            sig,
            lambdas,
            lambdas_alt,
            complex_branch,
        },
    })
}

/// `⟨ψ|ρ|ψ⟩` for a unit vector `ψ`.
pub fn fidelity_pure(psi: &[f64; 4], rho: &DensityMatrix4) -> Result<f64> {
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(norm));
    }
    Ok(rho.quad_form(psi).clamp(0.0, 1.0))
}

/// Eigenvalues at or below this multiple of the largest one are round-off.
const NUMERICAL_RANK: f64 = 8.0 * f64::EPSILON;

/// Square roots of a PSD spectrum with round-off eigenvalues set to zero,
/// so a rank-deficient input does not pick up `√ε`-sized noise.
fn truncated_roots(values: &[f64; 4]) -> [f64; 4] {
    let floor = NUMERICAL_RANK * values.iter().fold(0.0_f64, |a, &b| a.max(b));
    values.map(|x| if x <= floor { 0.0 } else { x.sqrt() })
}

/// Uhlmann fidelity `Tr √(√ρ2 ρ1 √ρ2)`.
pub fn fidelity_mixed(rho1: &DensityMatrix4, rho2: &DensityMatrix4) -> Result<f64> {
    let eig2 = eig_sym(rho2.matrix())?;
    let root2 = eig2.reconstruct_from(&truncated_roots(&eig2.values));
    let inner = (root2 * *rho1.matrix() * root2).symmetrized();
    let f: f64 = truncated_roots(&eig_sym(&inner)?.values).iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Sum of absolute off-diagonal entries.
pub fn l1_coherence<const N: usize>(m: &Mat<N>) -> f64 {
    let mut total = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                total += m.0[i][j].abs();
            }
        }
    }
    total
}

/// `U(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]`, the local unitary with zero phase.
pub fn local_rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::from_rows([[c, -s], [s, c]])
}

fn rotated_off_diagonal(rho: &Mat2, theta: f64) -> f64 {
    let u = local_rotation(theta);
    (u * *rho * u.transpose()).0[0][1].abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBasisAngles {
    pub theta_a: f64,
    pub theta_b: f64,
    pub phi_a: f64,
    pub phi_b: f64,
    /// The closed-form angle left an off-diagonal above [`ROTATION_TOL`] and
    /// was replaced by the eigenvector angle.
    pub fallback_a: bool,
    pub fallback_b: bool,
}

/// `θ = arctan[(χ + √(χ² + 4b²)) / (2b)]` for `ρ = [[p, b], [b, q]]`, `χ = p − q`.
///
/// For `χ < 0` the numerator is evaluated as `4b² / (√(χ² + 4b²) − χ)`.
/// Returns 0 for an already diagonal state.
pub fn angle_formula(rho: &Mat2) -> f64 {
    let b = rho.0[0][1];
    if b.abs() < ZERO_OFF_DIAGONAL {
        return 0.0;
    }
    let chi = rho.0[0][0] - rho.0[1][1];
    let r = (chi * chi + 4.0 * b * b).sqrt();
    let numerator = if chi >= 0.0 { chi + r } else { 4.0 * b * b / (r - chi) };
    (numerator / (2.0 * b)).atan()
}

/// Rotation angle read off the eigenvectors of `ρ`: with `ρ = V D Vᵀ`,
/// `U = Vᵀ` (made proper) diagonalizes it.
pub fn angle_from_eigenvectors(rho: &Mat2) -> Result<f64> {
    let v = eig_sym(rho)?.vectors;
    let mut u = v.transpose();
    if u.0[0][0] * u.0[1][1] - u.0[0][1] * u.0[1][0] < 0.0 {
        u.0[1][0] = -u.0[1][0];
        u.0[1][1] = -u.0[1][1];
    }
    Ok(u.0[1][0].atan2(u.0[0][0]))
}

fn diagonalizing_angle(rho: &Mat2) -> Result<(f64, bool)> {
    let theta = angle_formula(rho);
    if rotated_off_diagonal(rho, theta) <= ROTATION_TOL {
        return Ok((theta, false));
    }
    Ok((angle_from_eigenvectors(rho)?, true))
}

pub fn local_angles(rho_a: &DensityMatrix2, rho_b: &DensityMatrix2) -> Result<LocalBasisAngles> {
    let (theta_a, fallback_a) = diagonalizing_angle(rho_a.matrix())?;
    let (theta_b, fallback_b) = diagonalizing_angle(rho_b.matrix())?;
    Ok(LocalBasisAngles {
        theta_a,
        theta_b,
        phi_a: 0.0,
        phi_b: 0.0,
        fallback_a,
        fallback_b,
    })
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)ᵀ`.
pub fn rotate_locally(rho: &Mat4, theta_a: f64, theta_b: f64) -> Mat4 {
    let u = kron2(&local_rotation(theta_a), &local_rotation(theta_b));
    (u * *rho * u.transpose()).symmetrized()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedCoherence {
    /// `C_l1(ρ̃) − C_l1(ρ̃_A) − C_l1(ρ̃_B)`.
    pub value: f64,
    pub global: f64,
    pub local_a: f64,
    pub local_b: f64,
    pub angles: LocalBasisAngles,
    pub rotated: Mat4,
}

/// ℓ1 coherence left after rotating both subsystems into their incoherent
/// (eigen) bases.
pub fn correlated_coherence(rho: &DensityMatrix4) -> Result<CorrelatedCoherence> {
    let angles = local_angles(&rho.reduce_a(), &rho.reduce_b())?;
    let rotated = rotate_locally(rho.matrix(), angles.theta_a, angles.theta_b);
    let rotated_state = DensityMatrix4::new_unchecked(rotated);
    let global = l1_coherence(&rotated);
    let local_a = l1_coherence(rotated_state.reduce_a().matrix());
    let local_b = l1_coherence(rotated_state.reduce_b().matrix());
    // each reduced off-diagonal appears twice in the l1 sum
    let local = local_a.max(local_b) / 2.0;
    if local > ROTATION_TOL {
        return Err(Error::LocalCoherenceResidual(local));
    }
    Ok(CorrelatedCoherence {
        value: global - local_a - local_b,
        global,
        local_a,
        local_b,
        angles,
        rotated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ground_state, ModelParams};
    use crate::thermal::thermal_state;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn bell() -> DensityMatrix4 {
        DensityMatrix4::pure(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap()
    }

    fn thermal(epsilon: f64, t: f64, bz: f64, bx: f64, temp: f64) -> DensityMatrix4 {
        thermal_state(&ModelParams::new(epsilon, t, bz, bx).unwrap(), temp)
            .unwrap()
            .rho
    }

    /// Brute-force route: power iteration is avoided; instead the characteristic
    /// roots of `R` are bracketed through `det(R − λI)` sign changes.
    fn concurrence_via_characteristic_polynomial(rho: &DensityMatrix4) -> f64 {
        let s = sigma_yy();
        let r = *rho.matrix() * s * *rho.matrix() * s;
        let det = |l: f64| det4(&(r - Mat4::identity().scale(l)));
        let hi = 1.0;
        let n = 200_000;
        let mut roots = Vec::new();
        let mut prev = det(-1e-12);
        for i in 1..=n {
            let x = hi * i as f64 / n as f64;
            let cur = det(x);
            if prev == 0.0 || prev.signum() != cur.signum() {
                roots.push(x);
            }
            prev = cur;
        }
        while roots.len() < 4 {
            roots.push(0.0);
        }
        roots.sort_by(|a, b| b.total_cmp(a));
        let s: Vec<f64> = roots.iter().map(|x| x.sqrt()).collect();
        (s[0] - s[1] - s[2] - s[3]).max(0.0)
    }

    fn det4(m: &Mat4) -> f64 {
        let a = &m.0;
        let mut det = 0.0;
        for c in 0..4 {
            let minor: Vec<Vec<f64>> = (1..4)
                .map(|i| (0..4).filter(|&j| j != c).map(|j| a[i][j]).collect())
                .collect();
            let d3 = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1])
                - minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0])
                + minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * a[0][c] * d3;
        }
        det
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(concurrence(&bell()).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(concurrence(&DensityMatrix4::maximally_mixed()).unwrap(), 0.0);
        let diag = DensityMatrix4::new(Mat4::diag([0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(concurrence(&diag).unwrap(), 0.0);
        assert_eq!(concurrence_closed_form(&diag).unwrap().value, 0.0);
        for temp in [0.01, 0.5, 10.0] {
            assert!(concurrence(&thermal(3.0, 7.0, 16.0, 0.0, temp)).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn concurrence_matches_characteristic_polynomial_roots() {
        // frozen from a 60-digit mpmath evaluation of the same Gibbs state
        let rho = thermal(1.0, 7.0, 16.0, 100.0, 1.0);
        let c = concurrence(&rho).unwrap();
        assert_abs_diff_eq!(c, 0.723_306_230_488_705_4, epsilon = 1e-12);
        assert_abs_diff_eq!(c, concurrence_via_characteristic_polynomial(&rho), epsilon = 1e-3);
        let lambdas = r_spectrum(&rho).unwrap().lambdas;
        assert_abs_diff_eq!(lambdas[0], 0.660_596_401_879_993_7, epsilon = 1e-12);
        assert_abs_diff_eq!(lambdas[1], 0.008_003_912_340_150_178, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_on_maximally_mixed() {
        let cf = concurrence_closed_form(&DensityMatrix4::maximally_mixed()).unwrap();
        assert_eq!(cf.value, 0.0);
        assert_eq!(cf.value_alt, 0.0);
        assert_abs_diff_eq!(cf.spectrum.theta_cap, 1.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let r = thermal(1.0, 7.0, 16.0, 100.0, 2.0);
        assert_abs_diff_eq!(fidelity_mixed(&r, &r).unwrap(), 1.0, epsilon = 1e-8);
        let zero = DensityMatrix4::pure(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let one = DensityMatrix4::pure(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(fidelity_mixed(&zero, &one).unwrap(), 0.0, epsilon = 1e-12);

        let q = ModelParams::new(1.0, 7.0, 16.0, 100.0).unwrap();
        let gs = ground_state(&q).unwrap().vector;
        let proj = DensityMatrix4::pure(&gs).unwrap();
        let f_pure = fidelity_pure(&gs, &r).unwrap();
        assert_abs_diff_eq!(fidelity_mixed(&r, &proj).unwrap(), f_pure.sqrt(), epsilon = 1e-8);

        assert!(matches!(
            fidelity_pure(&[1.0, 1.0, 0.0, 0.0], &r),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn ground_state_fidelity_limits() {
        let q = ModelParams::new(10.0, 7.0, 16.0, 100.0).unwrap();
        let gs = ground_state(&q).unwrap().vector;
        let cold = thermal_state(&q, 1e-3).unwrap().rho;
        assert_abs_diff_eq!(fidelity_pure(&gs, &cold).unwrap(), 1.0, epsilon = 1e-12);
        let hot = thermal_state(&q, 1e8).unwrap().rho;
        assert_abs_diff_eq!(fidelity_pure(&gs, &hot).unwrap(), 0.25, epsilon = 1e-6);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_coherence(&Mat4::diag([0.1, 0.2, 0.3, 0.4])), 0.0);
        assert_abs_diff_eq!(l1_coherence(bell().matrix()), 1.0, epsilon = 1e-15);
        let uniform = DensityMatrix4::pure(&[0.5; 4]).unwrap();
        assert_abs_diff_eq!(l1_coherence(uniform.matrix()), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn angle_examples() {
        let diag = DensityMatrix2::new(Mat2::diag([0.3, 0.7])).unwrap();
        let a = local_angles(&diag, &diag).unwrap();
        assert_eq!((a.theta_a, a.theta_b), (0.0, 0.0));

        let plus = Mat2::from_rows([[0.5, 0.5], [0.5, 0.5]]);
        let theta = angle_formula(&plus);
        assert_abs_diff_eq!(theta, FRAC_PI_4, epsilon = 1e-15);
        assert!(rotated_off_diagonal(&plus, theta) <= 1e-12);
    }

    #[test]
    fn angles_agree_with_eigenvector_diagonalization() {
        let rho = thermal(1.0, 7.0, 16.0, 100.0, 1.0);
        for reduced in [rho.reduce_a(), rho.reduce_b()] {
            let m = reduced.matrix();
            let formula = angle_formula(m);
            let eig = angle_from_eigenvectors(m).unwrap();
            // equal modulo π/2 (column permutation and sign)
            let k = ((formula - eig) / std::f64::consts::FRAC_PI_2).round();
            assert_abs_diff_eq!(formula - eig, k * std::f64::consts::FRAC_PI_2, epsilon = 1e-10);
            assert!(rotated_off_diagonal(m, formula) <= 1e-12);
            let values = eig_sym(m).unwrap().values;
            let u = local_rotation(formula);
            let mut d = (u * *m * u.transpose()).diagonal();
            d.sort_by(f64::total_cmp);
            assert_abs_diff_eq!(d[0], values[0], epsilon = 1e-12);
            assert_abs_diff_eq!(d[1], values[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn correlated_coherence_examples() {
        let a = DensityMatrix2::new(Mat2::diag([0.3, 0.7])).unwrap();
        let b = DensityMatrix2::new(Mat2::diag([0.6, 0.4])).unwrap();
        assert_eq!(correlated_coherence(&a.tensor(&b)).unwrap().value, 0.0);
        assert_abs_diff_eq!(correlated_coherence(&bell()).unwrap().value, 1.0, epsilon = 1e-15);

        // a product of coherent states carries no correlated coherence
        let a = DensityMatrix2::new(Mat2::from_rows([[0.6, 0.2], [0.2, 0.4]])).unwrap();
        let b = DensityMatrix2::new(Mat2::from_rows([[0.5, -0.3], [-0.3, 0.5]])).unwrap();
        let cc = correlated_coherence(&a.tensor(&b)).unwrap();
        assert!(cc.value.abs() <= 1e-12, "{cc:?}");
    }

    #[test]
    fn correlated_coherence_matches_concurrence_when_cold() {
        for (t, bz) in [(7.0, 16.0), (15.4, 24.0)] {
            let rho = thermal(1.0, t, bz, 100.0, 0.01);
            let c = concurrence(&rho).unwrap();
            let cc = correlated_coherence(&rho).unwrap().value;
            assert!((cc - c).abs() <= 0.01 && cc >= c - 1e-12, "C={c} Ccc={cc}");
        }
    }

    fn random_density() -> impl Strategy<Value = DensityMatrix4> {
        proptest::array::uniform16(-1.0..1.0f64).prop_map(|u| {
            let mut g = Mat4::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    g.0[i][j] = u[4 * i + j];
                }
            }
            let m = (g * g.transpose()).symmetrized();
            let tr = m.trace().max(1e-12);
            DensityMatrix4::new(m.scale(1.0 / tr)).unwrap()
        })
    }

    fn random_pure() -> impl Strategy<Value = [f64; 4]> {
        proptest::array::uniform4(-1.0..1.0f64)
            .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|v| {
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.map(|x| x / n)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn concurrence_bounds(rho in random_density()) {
            let c = concurrence(&rho).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
        }

        #[test]
        fn concurrence_local_unitary_invariance(rho in random_density(), ta in -3.2..3.2f64, tb in -3.2..3.2f64) {
            let rotated = DensityMatrix4::new(rotate_locally(rho.matrix(), ta, tb)).unwrap();
            let lhs = concurrence(&rotated).unwrap();
            let rhs = concurrence(&rho).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn fidelity_symmetric(r1 in random_density(), r2 in random_density()) {
            let f12 = fidelity_mixed(&r1, &r2).unwrap();
            let f21 = fidelity_mixed(&r2, &r1).unwrap();
            prop_assert!((f12 - f21).abs() <= 1e-8, "{} vs {}", f12, f21);
        }

        #[test]
        fn fidelity_pure_reduction(r1 in random_density(), psi in random_pure()) {
            let f = fidelity_mixed(&r1, &DensityMatrix4::pure(&psi).unwrap()).unwrap();
            let fp = fidelity_pure(&psi, &r1).unwrap();
            prop_assert!((f * f - fp).abs() <= 1e-8, "{} vs {}", f * f, fp);
        }

        #[test]
        fn pure_state_concurrence_is_overlap(psi in random_pure()) {
            // C(|ψ⟩) = |⟨ψ|σy⊗σy|ψ*⟩| = 2|ψ00 ψ11 − ψ01 ψ10| for real ψ
            let expected = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).abs();
            let c = concurrence(&DensityMatrix4::pure(&psi).unwrap()).unwrap();
            prop_assert!((c - expected).abs() <= 1e-9);
        }

        #[test]
        fn correlated_coherence_non_negative(rho in random_density()) {
            let cc = correlated_coherence(&rho).unwrap();
            prop_assert!(cc.value >= -1e-12);
        }
    }
}
