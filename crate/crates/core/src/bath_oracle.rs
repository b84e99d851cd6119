//! Brute-force ground truth: a finite bath of harmonic oscillators
//! bilinearly coupled to the system oscillator.
//!
//! The continuum reservoir is discretized on a midpoint frequency grid, the
//! `(N+1) x (N+1)` quadratic form is diagonalized exactly (dense symmetric
//! eigensolve), and thermal energies are obtained by normal-mode summation.
//! Everything the integral formulas of [`crate::thermo`] claim can be checked
//! against this oracle by convergence in `N` and `omega_max`.

use crate::float::{cast, coth, Float, KahanSum};
use crate::quadrature::QuadratureSpec;
use crate::susceptibility::{coupling_density, SusceptibilityError, SusceptibilityModel};
use crate::thermo::{Ensemble, Regime, ThermoError};
use nalgebra::{DMatrix, RealField};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BathError<T: Float> {
    #[error("bath needs at least one mode")]
    EmptyBath,
    #[error("omega_max must be > 0 (got {0})")]
    InvalidOmegaMax(T),
    #[error(
        "coupled quadratic form is not positive definite: most negative \
         eigenvalue {min_eigenvalue} (diagonalizability condition violated)"
    )]
    NotPositiveDefinite { min_eigenvalue: T },
    #[error(transparent)]
    Susceptibility(#[from] SusceptibilityError<T>),
    #[error(transparent)]
    Thermo(#[from] Box<ThermoError<T>>),
}

/// Finite-`N` discretization of the continuum reservoir.
#[derive(Debug, Clone)]
pub struct DiscreteBath<T> {
    pub omega0: T,
    /// Midpoint grid, strictly increasing, all > 0.
    pub omegas: Vec<T>,
    /// Couplings `alpha_i = alpha(omega_i) sqrt(d omega)`.
    pub alphas: Vec<T>,
}

impl<T: Float> DiscreteBath<T> {
    pub fn n_modes(&self) -> usize {
        self.omegas.len()
    }
}

/// Midpoint discretization of the coupling density on `(0, omega_max]`.
pub fn discretize<T: Float>(
    chi: &SusceptibilityModel<T>,
    omega0: T,
    n_modes: usize,
    omega_max: T,
) -> Result<DiscreteBath<T>, BathError<T>> {
    if n_modes == 0 {
        return Err(BathError::EmptyBath);
    }
    if !(omega_max > T::zero()) {
        return Err(BathError::InvalidOmegaMax(omega_max));
    }
    let delta = omega_max / cast(n_modes as f64);
    let sqrt_delta = delta.sqrt();
    let mut omegas = Vec::with_capacity(n_modes);
    let mut alphas = Vec::with_capacity(n_modes);
    for i in 0..n_modes {
        let w = delta * cast(i as f64 + 0.5);
        let a = coupling_density(chi, omega0, w)?;
        omegas.push(w);
        alphas.push(a * sqrt_delta);
    }
    Ok(DiscreteBath {
        omega0,
        omegas,
        alphas,
    })
}

/// Exact normal modes of the coupled quadratic Hamiltonian.
#[derive(Debug, Clone)]
pub struct NormalModes<T: Float + RealField> {
    /// Normal-mode frequencies, ascending, all > 0.
    pub frequencies: Vec<T>,
    /// Orthogonal matrix whose columns are the mass-weighted normal modes;
    /// row 0 is the system-oscillator component of each mode.
    pub mode_matrix: DMatrix<T>,
}

impl<T: Float + RealField> NormalModes<T> {
    /// `max |M^T M - I|`; the eigensolver contract keeps this near machine
    /// precision. O(n^3) — intended for tests and diagnostics.
    pub fn orthogonality_residual(&self) -> T {
        let m = &self.mode_matrix;
        let gram = m.transpose() * m;
        let n = gram.nrows();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { T::one() } else { T::zero() };
                let dev = num_traits::Float::abs(gram[(i, j)] - expect);
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }
}

/// Assembles the potential matrix (unit masses: `V_00 = omega0^2`,
/// `V_ii = omega_i^2`, `V_0i = -alpha_i`) and diagonalizes it.
///
/// A non-positive eigenvalue means the bilinear coupling has destabilized
/// the potential — the finite-bath shadow of the diagonalizability
/// condition — and is reported as an error with the offending eigenvalue.
pub fn diagonalize<T: Float + RealField>(
    bath: &DiscreteBath<T>,
) -> Result<NormalModes<T>, BathError<T>> {
    let n = bath.n_modes();
    let dim = n + 1;
    let mut v = DMatrix::<T>::zeros(dim, dim);
    v[(0, 0)] = bath.omega0 * bath.omega0;
    for i in 0..n {
        let w = bath.omegas[i];
        v[(i + 1, i + 1)] = w * w;
        v[(0, i + 1)] = -bath.alphas[i];
        v[(i + 1, 0)] = -bath.alphas[i];
    }

    let eig = v.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let min_eigenvalue = eig.eigenvalues[order[0]];
    if !(min_eigenvalue > T::zero()) {
        return Err(BathError::NotPositiveDefinite { min_eigenvalue });
    }

    let mut frequencies = Vec::with_capacity(dim);
    let mut mode_matrix = DMatrix::<T>::zeros(dim, dim);
    for (col, &idx) in order.iter().enumerate() {
        frequencies.push(num_traits::Float::sqrt(eig.eigenvalues[idx]));
        mode_matrix.set_column(col, &eig.eigenvectors.column(idx));
    }
    Ok(NormalModes {
        frequencies,
        mode_matrix,
    })
}

/// Thermal energies from the exact normal-mode spectrum.
#[derive(Debug, Clone, Copy)]
pub struct DiscreteEnergies<T> {
    /// Total thermal energy minus the free-bath thermal energy.
    pub u_star: T,
    /// Bare oscillator energy `(<qdot^2> + omega0^2 <q^2>) / 2` in the
    /// coupled thermal state.
    pub u: T,
}

/// Per-mode thermal energy: `(hbar W / 2) coth(hbar W / 2 k_B T)` in the
/// quantum regime, `k_B T` classically.
fn mode_energy<T: Float>(ens: &Ensemble<T>, omega: T) -> T {
    match ens.regime {
        Regime::Quantum => {
            let x = ens.thermal_argument(omega);
            ens.hbar * omega * cast::<T>(0.5) * coth(x)
        }
        Regime::Classical => ens.thermal_energy(),
    }
}

pub fn thermal_energies<T: Float + RealField>(
    modes: &NormalModes<T>,
    bath: &DiscreteBath<T>,
    ens: &Ensemble<T>,
) -> Result<DiscreteEnergies<T>, BathError<T>> {
    if !(ens.temperature > T::zero()) {
        return Err(BathError::Thermo(Box::new(
            ThermoError::NonPositiveTemperature(ens.temperature),
        )));
    }

    // U*: coupled spectrum minus free bath spectrum.
    let mut coupled = KahanSum::new();
    for &w in &modes.frequencies {
        coupled.add(mode_energy(ens, w));
    }
    let mut free = KahanSum::new();
    for &w in &bath.omegas {
        free.add(mode_energy(ens, w));
    }
    let u_star = coupled.value() - free.value();

    // U: bare oscillator energy via the q-components of the modes.
    let mut q_sq = KahanSum::new();
    let mut qdot_sq = KahanSum::new();
    for (i, &w) in modes.frequencies.iter().enumerate() {
        let v0 = modes.mode_matrix[(0, i)];
        let weight = v0 * v0;
        match ens.regime {
            Regime::Quantum => {
                let x = ens.thermal_argument(w);
                let c = coth(x);
                q_sq.add(weight * ens.hbar / (cast::<T>(2.0) * w) * c);
                qdot_sq.add(weight * ens.hbar * w * cast::<T>(0.5) * c);
            }
            Regime::Classical => {
                let kt = ens.thermal_energy();
                q_sq.add(weight * kt / (w * w));
                qdot_sq.add(weight * kt);
            }
        }
    }
    let half = cast::<T>(0.5);
    let u = half * qdot_sq.value() + half * bath.omega0 * bath.omega0 * q_sq.value();
    Ok(DiscreteEnergies { u_star, u })
}

/// One row of a convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceRow<T> {
    pub n_modes: usize,
    pub omega_max: T,
    /// `None` when the bath failed positive-definiteness.
    pub u_star_discrete: Option<T>,
    pub u_discrete: Option<T>,
    /// Most negative eigenvalue on failure.
    pub failure: Option<T>,
    pub u_star_rel_err: Option<T>,
    pub u_rel_err: Option<T>,
    /// Empirical order vs the previous row at the same `omega_max`.
    pub rate: Option<T>,
}

/// Runs the oracle over grids of `N` and `omega_max` and compares against
/// reference values (typically the quadrature results).
pub fn convergence_study<T: Float + RealField>(
    chi: &SusceptibilityModel<T>,
    omega0: T,
    ens: &Ensemble<T>,
    n_list: &[usize],
    omega_max_list: &[T],
    reference: Option<DiscreteEnergies<T>>,
    _spec: &QuadratureSpec<T>,
) -> Result<Vec<ConvergenceRow<T>>, BathError<T>> {
    let mut rows = Vec::new();
    for &omega_max in omega_max_list {
        let mut prev_err: Option<T> = None;
        for &n in n_list {
            let bath = discretize(chi, omega0, n, omega_max)?;
            match diagonalize(&bath) {
                Ok(modes) => {
                    let energies = thermal_energies(&modes, &bath, ens)?;
                    let (mut u_star_rel_err, mut u_rel_err, mut rate) = (None, None, None);
                    if let Some(reference) = reference {
                        let es = num_traits::Float::abs(
                            (energies.u_star - reference.u_star) / reference.u_star,
                        );
                        let eu = num_traits::Float::abs((energies.u - reference.u) / reference.u);
                        u_star_rel_err = Some(es);
                        u_rel_err = Some(eu);
                        if let Some(prev) = prev_err {
                            if es > T::zero() && prev > T::zero() {
                                rate = Some(num_traits::Float::log2(prev / es));
                            }
                        }
                        prev_err = Some(es);
                    }
                    rows.push(ConvergenceRow {
                        n_modes: n,
                        omega_max,
                        u_star_discrete: Some(energies.u_star),
                        u_discrete: Some(energies.u),
                        failure: None,
                        u_star_rel_err,
                        u_rel_err,
                        rate,
                    });
                }
                Err(BathError::NotPositiveDefinite { min_eigenvalue }) => {
                    rows.push(ConvergenceRow {
                        n_modes: n,
                        omega_max,
                        u_star_discrete: None,
                        u_discrete: None,
                        failure: Some(min_eigenvalue),
                        u_star_rel_err: None,
                        u_rel_err: None,
                        rate: None,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Model = SusceptibilityModel<f64>;

    fn lorentz(chi0: f64, wl: f64, gl: f64) -> Model {
        Model::lorentz(chi0, wl, gl).unwrap()
    }

    #[test]
    fn decoupled_two_by_two() {
        let bath = DiscreteBath::<f64> {
            omega0: 1.0,
            omegas: vec![2.0],
            alphas: vec![0.0],
        };
        let modes = diagonalize(&bath).unwrap();
        assert!((modes.frequencies[0] - 1.0).abs() < 1e-14);
        assert!((modes.frequencies[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn coupled_two_by_two_hand_check() {
        // V = [[1, -1/2], [-1/2, 1]] has eigenvalues 1/2 and 3/2.
        let bath = DiscreteBath::<f64> {
            omega0: 1.0,
            omegas: vec![1.0],
            alphas: vec![0.5],
        };
        let modes = diagonalize(&bath).unwrap();
        assert!((modes.frequencies[0].powi(2) - 0.5).abs() < 1e-14);
        assert!((modes.frequencies[1].powi(2) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn zero_coupling_reduces_to_free_oscillator() {
        let chi = lorentz(0.0, 5.0, 1.0);
        let bath = discretize(&chi, 1.0, 50, 20.0).unwrap();
        assert!(bath.alphas.iter().all(|&a| a == 0.0));
        let modes = diagonalize(&bath).unwrap();
        for ens in [Ensemble::quantum(0.7), Ensemble::classical(0.7)] {
            let e = thermal_energies(&modes, &bath, &ens).unwrap();
            let expect = mode_energy(&ens, 1.0);
            assert!((e.u_star - expect).abs() < 1e-12, "{:?}", ens.regime);
            assert!((e.u - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_identity() {
        let chi = lorentz(0.3, 5.0, 1.0);
        let bath = discretize(&chi, 1.0, 120, 40.0).unwrap();
        let modes = diagonalize(&bath).unwrap();
        let lhs: f64 = modes.frequencies.iter().map(|w| w * w).sum();
        let rhs: f64 = bath.omega0.powi(2) + bath.omegas.iter().map(|w| w * w).sum::<f64>();
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }

    #[test]
    fn classical_equipartition_is_exact_at_any_resolution() {
        let chi = lorentz(0.4, 2.0, 1.0);
        let ens = Ensemble::classical(0.7);
        for &(n, wmax) in &[(7usize, 10.0), (40, 25.0), (300, 60.0)] {
            let bath = discretize(&chi, 1.0, n, wmax).unwrap();
            let modes = diagonalize(&bath).unwrap();
            let e = thermal_energies(&modes, &bath, &ens).unwrap();
            assert!((e.u_star - 0.7).abs() < 1e-12 * 0.7, "n={n}: {}", e.u_star);
        }
    }

    #[test]
    fn classical_internal_energy_converges_to_static_response_formula() {
        let chi = lorentz(0.5, 2.0, 1.0);
        let ens = Ensemble::classical(1.0);
        // k_B T (1 + chi0 / (2 (1 - chi0))) = 1.5 at chi0 = 0.5.
        let mut errs = Vec::new();
        for &(n, wmax) in &[(50usize, 12.5), (400, 100.0)] {
            let bath = discretize(&chi, 1.0, n, wmax).unwrap();
            let modes = diagonalize(&bath).unwrap();
            let e = thermal_energies(&modes, &bath, &ens).unwrap();
            errs.push((e.u - 1.5_f64).abs());
        }
        assert!(errs[1] < errs[0], "errors {errs:?}");
        assert!(errs[1] < 1e-4, "errors {errs:?}");
    }

    #[test]
    fn overcritical_static_response_fails_positive_definiteness() {
        let chi = lorentz(1.5, 5.0, 1.0);
        let bath = discretize(&chi, 1.0, 400, 100.0).unwrap();
        match diagonalize(&bath) {
            Err(BathError::NotPositiveDefinite { min_eigenvalue }) => {
                assert!(min_eigenvalue < 0.0);
            }
            other => panic!("expected positive-definiteness failure, got {other:?}"),
        }
    }

    #[test]
    fn orthogonality_residual_is_small() {
        let chi = lorentz(0.3, 5.0, 1.0);
        let bath = discretize(&chi, 1.0, 150, 50.0).unwrap();
        let modes = diagonalize(&bath).unwrap();
        assert!(modes.orthogonality_residual() < 1e-12);
    }

    #[test]
    fn quantum_oracle_approaches_quadrature_values() {
        use crate::thermo::{internal_energy_quantum, mean_force_energy_quantum};
        let chi = lorentz(0.3, 5.0, 1.0);
        let ens = Ensemble::quantum(1.0);
        let spec = QuadratureSpec::default();
        let u_star_ref = mean_force_energy_quantum(&chi, 1.0, &ens, &spec)
            .unwrap()
            .value;
        let u_ref = internal_energy_quantum(&chi, 1.0, &ens, &spec)
            .unwrap()
            .value;

        // Moderate resolution here; the acceptance suite runs N = 2000.
        let bath = discretize(&chi, 1.0, 600, 60.0).unwrap();
        let modes = diagonalize(&bath).unwrap();
        let e = thermal_energies(&modes, &bath, &ens).unwrap();
        assert!(
            ((e.u_star - u_star_ref) / u_star_ref).abs() < 0.05,
            "U* {} vs {u_star_ref}",
            e.u_star
        );
        assert!(((e.u - u_ref) / u_ref).abs() < 0.05, "U {} vs {u_ref}", e.u);
    }

    #[test]
    fn convergence_rows_track_errors() {
        let chi = lorentz(0.3, 5.0, 1.0);
        let ens = Ensemble::classical(1.0);
        let reference = DiscreteEnergies {
            u_star: 1.0,
            u: 1.0 + 0.3 / (2.0 * (1.0 - 0.3)),
        };
        let rows = convergence_study(
            &chi,
            1.0,
            &ens,
            &[50, 100, 200],
            &[50.0],
            Some(reference),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        // Classical U* is exact at every resolution.
        for row in &rows {
            assert!(row.u_star_rel_err.unwrap() < 1e-12);
            assert!(row.failure.is_none());
        }
        // U error decreases with N.
        let e: Vec<f64> = rows.iter().map(|r| r.u_rel_err.unwrap()).collect();
        assert!(e[2] < e[0]);
    }

    #[test]
    fn quantum_discretization_error_is_first_order_or_better() {
        use crate::thermo::{internal_energy_quantum, mean_force_energy_quantum};
        let chi = lorentz(0.3, 5.0, 1.0);
        let ens = Ensemble::quantum(1.0);
        let spec = QuadratureSpec::default();
        let reference = DiscreteEnergies {
            u_star: mean_force_energy_quantum(&chi, 1.0, &ens, &spec)
                .unwrap()
                .value,
            u: internal_energy_quantum(&chi, 1.0, &ens, &spec)
                .unwrap()
                .value,
        };
        // N small enough that discretization error dominates the fixed
        // omega_max truncation bias.
        let rows = convergence_study(
            &chi,
            1.0,
            &ens,
            &[50, 100, 200],
            &[60.0],
            Some(reference),
            &spec,
        )
        .unwrap();
        // Halving the grid spacing at least halves the U* error.
        for row in rows.iter().skip(1) {
            let rate = row.rate.unwrap();
            assert!(rate >= 1.0, "rate {rate} at N={}", row.n_modes);
        }
    }

    #[test]
    fn study_reports_failures_per_row() {
        let chi = lorentz(1.5, 5.0, 1.0);
        let ens = Ensemble::classical(1.0);
        let rows = convergence_study(
            &chi,
            1.0,
            &ens,
            &[100],
            &[100.0],
            None,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(rows[0].failure.is_some());
        assert!(rows[0].u_star_discrete.is_none());
    }
}
