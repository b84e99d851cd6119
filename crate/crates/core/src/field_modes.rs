//! Diagonalizing mode coefficients of the scalar-field model.
//!
//! The oscillator coupled to a 1D scalar field is the one reservoir that
//! produces *exact* velocity-proportional damping. Its diagonalization is a
//! linear transform from `(q, Pi_q, phi, Pi_phi)` to free-field ladder
//! operators, fixed by four coefficient functions of the wavenumber `k`
//! (`omega = c |k|`):
//!
//! ```text
//! f_q      = sqrt(hbar omega / 4 pi) i c alpha / (omega^2 - omega0^2 + i gamma omega)
//! f_Pi_q   = -i omega0^2 f_q / omega
//! f_phi    = -(c alpha / 2) e^{i omega |x| / c} f_q + h_phi e^{i k x}
//! f_Pi_phi = -i omega f_phi / c^2
//! h_phi    = sqrt(c^2 hbar / 4 pi omega)
//! ```
//!
//! This module evaluates the coefficients and verifies, numerically, that
//! they satisfy the frequency-domain equations of motion and reproduce the
//! canonical commutators — the normalization `h_phi` is exactly what makes
//! `[q, Pi_q] = i hbar` come out of the `k`-integral.

use crate::float::{cast, coth, Float};
use crate::quadrature::{
    integrate_finite, integrate_semi_infinite, QuadratureError, QuadratureResult, QuadratureSpec,
};
use crate::thermo::{Ensemble, OscillatorParams, Regime, ThermoError};
use num_complex::Complex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldModeError<T: Float> {
    #[error("k = 0 is a measure-zero mode; coefficients are defined for k != 0")]
    ZeroWavenumber,
    #[error("test functions must have positive width")]
    InvalidTestFunction,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError<T>),
    #[error(transparent)]
    Thermo(#[from] Box<ThermoError<T>>),
}

/// Scalar-field reservoir parameters; `alpha = sqrt(2 gamma / c)`.
#[derive(Debug, Clone, Copy)]
pub struct ScalarFieldModel<T> {
    pub omega0: T,
    pub gamma: T,
    pub c: T,
    pub alpha: T,
    pub hbar: T,
}

impl<T: Float> ScalarFieldModel<T> {
    pub fn new(omega0: T, gamma: T, c: T, hbar: T) -> Self {
        let osc = OscillatorParams::new(omega0, gamma, c);
        Self {
            omega0,
            gamma,
            c,
            alpha: osc.alpha,
            hbar,
        }
    }

    pub fn from_params(osc: &OscillatorParams<T>, hbar: T) -> Self {
        Self {
            omega0: osc.omega0,
            gamma: osc.gamma,
            c: osc.c,
            alpha: osc.alpha,
            hbar,
        }
    }
}

/// The four coefficient values at one `(k, x)` sample.
#[derive(Debug, Clone, Copy)]
pub struct ModeCoefficients<T> {
    pub omega: T,
    pub f_q: Complex<T>,
    pub f_pi_q: Complex<T>,
    pub f_phi: Complex<T>,
    pub f_pi_phi: Complex<T>,
    pub h_phi: T,
}

/// Evaluates the diagonalizing coefficients at wavenumber `k` and field
/// position `x` (equal-time; the `e^{-i omega t}` factor cancels in every
/// equal-time commutator and is omitted).
pub fn eval_coefficients<T: Float>(
    model: &ScalarFieldModel<T>,
    k: T,
    x: T,
) -> Result<ModeCoefficients<T>, FieldModeError<T>> {
    if k == T::zero() {
        return Err(FieldModeError::ZeroWavenumber);
    }
    let omega = model.c * k.abs();
    let four_pi = cast::<T>(4.0) * T::PI();

    let amplitude = (model.hbar * omega / four_pi).sqrt();
    let den = Complex::new(
        omega * omega - model.omega0 * model.omega0,
        model.gamma * omega,
    );
    let f_q = Complex::new(T::zero(), amplitude * model.c * model.alpha) / den;
    let f_pi_q = Complex::new(T::zero(), -model.omega0 * model.omega0 / omega) * f_q;

    let h_phi = (model.c * model.c * model.hbar / (four_pi * omega)).sqrt();
    let phase_scattered = Complex::from_polar(T::one(), omega * x.abs() / model.c);
    let phase_plane = Complex::from_polar(T::one(), k * x);
    let f_phi =
        phase_scattered * f_q * (-model.c * model.alpha * cast::<T>(0.5)) + phase_plane * h_phi;
    let f_pi_phi = Complex::new(T::zero(), -omega / (model.c * model.c)) * f_phi;

    Ok(ModeCoefficients {
        omega,
        f_q,
        f_pi_q,
        f_phi,
        f_pi_phi,
        h_phi,
    })
}

/// Relative residual of `[q, Pi_q] = i hbar` evaluated from the coefficient
/// `k`-integral `int dk 2 i Im(f_q conj(f_Pi_q))`.
pub fn verify_q_commutator<T: Float>(
    model: &ScalarFieldModel<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T, FieldModeError<T>> {
    let scales = [
        model.omega0,
        model.gamma,
        model.omega0 * model.omega0 / model.gamma.max(T::min_positive_value()),
    ];
    let max_scale = scales.iter().copied().fold(T::one(), |a, b| a.max(b));
    let mut tuned = spec.clone();
    if tuned.omega_split.is_none() {
        tuned.omega_split = Some(max_scale * cast(10.0));
    }
    if tuned.breakpoints.is_empty() {
        tuned.breakpoints = scales.to_vec();
    }

    let m = *model;
    // Fold +-k and substitute omega = c k: dk = domega / c.
    let f = move |omega: T| {
        let coeff =
            eval_coefficients(&m, omega / m.c, T::zero()).expect("omega > 0 on quadrature nodes");
        let z = coeff.f_q * coeff.f_pi_q.conj();
        cast::<T>(2.0) / m.c * (cast::<T>(2.0) * z.im)
    };
    let result = integrate_semi_infinite(f, &tuned)?;
    Ok((result.value - model.hbar).abs() / model.hbar)
}

/// Residuals of the frequency-domain mode equations, max over the sampled
/// wavenumbers.
#[derive(Debug, Clone, Copy)]
pub struct ModeEquationResiduals<T> {
    /// `omega0^2 f_q = omega^2 f_q - i alpha omega f_phi(0)`.
    pub oscillator_eq: T,
    /// Discontinuity of `d f_phi / dx` at `x = 0` equals `-i alpha omega f_q`.
    pub jump: T,
    /// The same jump through the other delta-term bookkeeping,
    /// `alpha f_Pi_q + alpha^2 f_phi(0)`; algebraically identical, but the
    /// cancellation path is different so rounding is a little larger.
    pub delta_bookkeeping: T,
}

impl<T: Float> ModeEquationResiduals<T> {
    /// Max over the equation-of-motion checks.
    pub fn max_residual(&self) -> T {
        self.oscillator_eq.max(self.jump)
    }
}

/// Checks the closed-form coefficients against the frequency-domain
/// equations of motion pointwise at each sampled wavenumber.
pub fn verify_mode_equations<T: Float>(
    model: &ScalarFieldModel<T>,
    sample_ks: &[T],
) -> Result<ModeEquationResiduals<T>, FieldModeError<T>> {
    let mut residuals = ModeEquationResiduals {
        oscillator_eq: T::zero(),
        jump: T::zero(),
        delta_bookkeeping: T::zero(),
    };
    for &k in sample_ks {
        let c = eval_coefficients(model, k, T::zero())?;
        let omega = c.omega;
        let i_alpha_omega = Complex::new(T::zero(), model.alpha * omega);

        // Oscillator equation; scaled by the terms entering the cancellation.
        let lhs = c.f_q * (model.omega0 * model.omega0);
        let kinetic = c.f_q * (omega * omega);
        let coupling = i_alpha_omega * c.f_phi;
        let rhs = kinetic - coupling;
        let scale = lhs.norm() + kinetic.norm() + coupling.norm();
        if scale > T::zero() {
            residuals.oscillator_eq = residuals.oscillator_eq.max((lhs - rhs).norm() / scale);
        }

        // Jump condition: one-sided x-derivatives of
        // f_phi = -(c alpha/2) e^{i omega |x|/c} f_q + h_phi e^{ikx}.
        // The plane wave is smooth; only the scattered part jumps.
        let scattered = c.f_q * (-model.c * model.alpha * cast::<T>(0.5));
        let d_plus = scattered * Complex::new(T::zero(), omega / model.c);
        let d_minus = scattered * Complex::new(T::zero(), -omega / model.c);
        let jump = d_plus - d_minus;

        let expected_a = -i_alpha_omega * c.f_q;
        let expected_b = c.f_pi_q * model.alpha + c.f_phi * (model.alpha * model.alpha);
        let jscale = jump.norm().max(expected_a.norm()).max(c.f_q.norm());
        if jscale > T::zero() {
            residuals.jump = residuals.jump.max((jump - expected_a).norm() / jscale);
            residuals.delta_bookkeeping = residuals
                .delta_bookkeeping
                .max((jump - expected_b).norm() / jscale);
        }
    }
    Ok(residuals)
}

/// Gaussian test function `g(x) = exp(-(x - center)^2 / (2 width^2))`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianTestFn<T> {
    pub center: T,
    pub width: T,
}

impl<T: Float> GaussianTestFn<T> {
    pub fn new(center: T, width: T) -> Self {
        Self { center, width }
    }

    pub fn eval(&self, x: T) -> T {
        let u = (x - self.center) / self.width;
        (-u * u * cast::<T>(0.5)).exp()
    }

    /// `int g(x) e^{ikx} dx = width sqrt(2 pi) e^{-width^2 k^2 / 2} e^{ik center}`.
    fn fourier(&self, k: T) -> Complex<T> {
        let mag = self.width
            * (cast::<T>(2.0) * T::PI()).sqrt()
            * (-(self.width * self.width * k * k) * cast::<T>(0.5)).exp();
        Complex::from_polar(mag, k * self.center)
    }

    fn support(&self) -> (T, T) {
        // Tails below 1e-16 of the peak past 12 widths.
        let twelve = cast::<T>(12.0);
        (
            self.center - twelve * self.width,
            self.center + twelve * self.width,
        )
    }
}

/// Relative residual of the smeared field commutator
/// `int dx dx' g(x) h(x') [phi(x), Pi_phi(x')] = i hbar int g h dx`,
/// normalized by `hbar sqrt(|g|_2^2 |h|_2^2)` so that disjoint supports give
/// a meaningful near-zero residual.
pub fn verify_field_commutator<T: Float>(
    model: &ScalarFieldModel<T>,
    g: &GaussianTestFn<T>,
    h: &GaussianTestFn<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T, FieldModeError<T>> {
    if !(g.width > T::zero()) || !(h.width > T::zero()) {
        return Err(FieldModeError::InvalidTestFunction);
    }
    let m = *model;
    let sqrt_pi = T::PI().sqrt();
    let norm = (g.width * sqrt_pi).sqrt() * (h.width * sqrt_pi).sqrt();

    // Smearing of the scattered wave: M(omega) = int g(x) e^{i omega |x|/c} dx.
    let x_abs_floor = g.width.min(h.width) * cast::<T>(1e-12);
    let x_spec = QuadratureSpec {
        rel_tol: cast(1e-10),
        abs_tol: x_abs_floor,
        breakpoints: vec![T::zero()],
        ..QuadratureSpec::default()
    };
    let smear_scattered =
        |tf: &GaussianTestFn<T>, omega: T| -> Result<Complex<T>, QuadratureError<T>> {
            let (lo, hi) = tf.support();
            let lo = lo.min(T::zero());
            let hi = hi.max(T::zero());
            let kappa = omega / m.c;
            let tfc = *tf;
            let re = integrate_finite(
                move |x: T| tfc.eval(x) * (kappa * x.abs()).cos(),
                lo,
                hi,
                &x_spec,
            )?;
            let tfc = *tf;
            let im = integrate_finite(
                move |x: T| tfc.eval(x) * (kappa * x.abs()).sin(),
                lo,
                hi,
                &x_spec,
            )?;
            Ok(Complex::new(re.value, im.value))
        };

    // G_g(k) = h_phi(k) ghat(k) - (c alpha / 2) f_q(k) M_g(omega).
    let smeared_coeff = |tf: &GaussianTestFn<T>, k: T| -> Result<Complex<T>, FieldModeError<T>> {
        let coeff = eval_coefficients(&m, k, T::zero())?;
        let m_scatter = smear_scattered(tf, coeff.omega)?;
        Ok(tf.fourier(k) * coeff.h_phi - coeff.f_q * m_scatter * (m.c * m.alpha * cast::<T>(0.5)))
    };

    // k-integral of (2 omega / c^2) Re[G_g conj(G_h)], folded over +-k.
    // The Gaussian Fourier factors cut it off at |k| ~ 8 / min(width).
    let k_max = cast::<T>(10.0) / g.width.min(h.width);
    let k_spec = QuadratureSpec {
        rel_tol: spec.rel_tol.min(cast(1e-9)),
        // The commutator value scales like hbar * norm; chasing absolute
        // accuracy below 1e-9 of that on a cancelling integrand is wasted.
        abs_tol: model.hbar * norm * cast::<T>(1e-9),
        breakpoints: vec![
            m.omega0 / m.c,
            m.gamma / m.c,
            T::one() / g.width,
            T::one() / h.width,
        ],
        ..QuadratureSpec::default()
    };
    let g_c = *g;
    let h_c = *h;
    let integrand = move |k: T| -> T {
        let mut acc = T::zero();
        for &kk in &[k, -k] {
            let gg = match smeared_coeff(&g_c, kk) {
                Ok(v) => v,
                Err(_) => return T::nan(),
            };
            let hh = match smeared_coeff(&h_c, kk) {
                Ok(v) => v,
                Err(_) => return T::nan(),
            };
            let omega = m.c * kk.abs();
            acc = acc + cast::<T>(2.0) * omega / (m.c * m.c) * (gg * hh.conj()).re;
        }
        acc
    };
    let commutator = integrate_finite(integrand, T::zero(), k_max, &k_spec)?;

    // Expected i hbar int g h dx; overlap computed by direct quadrature.
    let (glo, ghi) = g.support();
    let (hlo, hhi) = h.support();
    let lo = glo.max(hlo);
    let hi = ghi.min(hhi);
    let overlap = if hi > lo {
        let (g_c, h_c) = (*g, *h);
        integrate_finite(move |x: T| g_c.eval(x) * h_c.eval(x), lo, hi, &x_spec)?.value
    } else {
        T::zero()
    };

    Ok((commutator.value - model.hbar * overlap).abs() / (model.hbar * norm))
}

/// Position autocorrelation rebuilt from `|f_q(k)|^2` — an independent path
/// to the same integral as [`crate::thermo::position_autocorrelation`].
pub fn autocorrelation_from_modes<T: Float>(
    model: &ScalarFieldModel<T>,
    ens: &Ensemble<T>,
    dt: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, FieldModeError<T>> {
    if !(ens.temperature > T::zero()) {
        return Err(FieldModeError::Thermo(Box::new(
            ThermoError::NonPositiveTemperature(ens.temperature),
        )));
    }
    let bound = cast::<T>(50.0) / model.omega0;
    if dt.abs() > bound {
        return Err(FieldModeError::Thermo(Box::new(
            ThermoError::DtOutOfRange { dt, bound },
        )));
    }

    let scales = [
        model.omega0,
        model.gamma,
        model.omega0 * model.omega0 / model.gamma.max(T::min_positive_value()),
        ens.thermal_energy() / ens.hbar,
    ];
    let max_scale = scales.iter().copied().fold(T::one(), |a, b| a.max(b));
    let mut tuned = spec.clone();
    if tuned.omega_split.is_none() {
        tuned.omega_split = Some(max_scale * cast(10.0));
    }
    if tuned.breakpoints.is_empty() {
        tuned.breakpoints = scales.to_vec();
    }
    // Accuracy anchored at 1e-6 of the equal-time correlation scale, as in
    // the spectral-form path.
    let scale0 = match ens.regime {
        Regime::Quantum => {
            model.hbar / (cast::<T>(2.0) * model.omega0) * coth(ens.thermal_argument(model.omega0))
        }
        Regime::Classical => ens.thermal_energy() / (model.omega0 * model.omega0),
    };
    tuned.abs_tol = tuned.abs_tol.max(cast::<T>(1e-6) * scale0);

    let m = *model;
    let ens_c = *ens;
    let f = move |omega: T| {
        let coeff =
            eval_coefficients(&m, omega / m.c, T::zero()).expect("omega > 0 on quadrature nodes");
        let density = coeff.f_q.norm_sqr();
        let thermal = match ens_c.regime {
            Regime::Quantum => coth(ens_c.thermal_argument(omega)),
            Regime::Classical => cast::<T>(2.0) * ens_c.thermal_energy() / (ens_c.hbar * omega),
        };
        cast::<T>(2.0) / m.c * density * (omega * dt).cos() * thermal
    };
    Ok(integrate_semi_infinite(f, &tuned)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::position_autocorrelation;

    fn model(gamma: f64) -> ScalarFieldModel<f64> {
        ScalarFieldModel::new(1.0, gamma, 1.0, 1.0)
    }

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    #[test]
    fn coefficient_relations_hold() {
        let m = model(0.3);
        let c = eval_coefficients(&m, 1.7, 0.4).unwrap();
        // f_Pi_q = -i omega0^2 f_q / omega
        let expect = num_complex::Complex64::new(0.0, -1.0 / c.omega) * c.f_q;
        assert!((c.f_pi_q - expect).norm() < 1e-15);
        // f_Pi_phi = -i omega f_phi / c^2
        let expect = num_complex::Complex64::new(0.0, -c.omega) * c.f_phi;
        assert!((c.f_pi_phi - expect).norm() < 1e-15);
        // f_phi(0) + (c alpha / 2) f_q = h_phi
        let c0 = eval_coefficients(&m, 1.7, 0.0).unwrap();
        let lhs = c0.f_phi + c0.f_q * (m.c * m.alpha / 2.0);
        assert!((lhs - num_complex::Complex64::new(c0.h_phi, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_wavenumber_is_rejected() {
        assert!(matches!(
            eval_coefficients(&model(0.3), 0.0, 0.0),
            Err(FieldModeError::ZeroWavenumber)
        ));
    }

    #[test]
    fn coupling_vanishes_with_gamma() {
        let m = model(0.0);
        let c = eval_coefficients(&m, 2.2, 0.0).unwrap();
        assert_eq!(c.f_q, num_complex::Complex64::new(0.0, 0.0));
        // Free field: pure plane wave with amplitude h_phi.
        let cx = eval_coefficients(&m, 2.2, 1.3).unwrap();
        let expect = num_complex::Complex64::from_polar(cx.h_phi, 2.2 * 1.3);
        assert!((cx.f_phi - expect).norm() < 1e-15);
    }

    #[test]
    fn resonance_peak_of_fq() {
        let m = model(0.3);
        // |f_q|^2 at omega0: (hbar omega0/4pi) c^2 alpha^2 / (gamma^2 omega0^2).
        let c = eval_coefficients(&m, 1.0, 0.0).unwrap();
        let expect = 1.0 / (4.0 * std::f64::consts::PI) * 2.0 * 0.3 / (0.09 * 1.0);
        assert!((c.f_q.norm_sqr() - expect).abs() < 1e-14 * expect);
        // Numerical maximum of |f_q|^2 * omega sits at omega0 exactly.
        let mut best = (0.0, 0.0);
        for i in 0..4000 {
            let w = 0.5 + (i as f64) * 0.00025;
            let v = eval_coefficients(&m, w, 0.0).unwrap().f_q.norm_sqr() * w;
            if v > best.1 {
                best = (w, v);
            }
        }
        assert!((best.0 - 1.0).abs() < 1e-3, "peak at {}", best.0);
    }

    #[test]
    fn resonance_of_mode_density_tracks_spectral_density() {
        // argmax over omega of |f_q|^2 omega vs argmax of gamma omega / D:
        // analytically omega0 vs omega0 (1 + O(gamma^2)); they must land in
        // the same or adjacent cells of a grid resolving ~2%.
        let m = model(0.3);
        let n = 60;
        let grid: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 / (n - 1) as f64).collect();
        let argmax = |f: &dyn Fn(f64) -> f64| {
            grid.iter()
                .enumerate()
                .max_by(|a, b| f(*a.1).partial_cmp(&f(*b.1)).unwrap())
                .unwrap()
                .0
        };
        let mode_density = |w: f64| eval_coefficients(&m, w, 0.0).unwrap().f_q.norm_sqr() * w;
        let spectral_density = |w: f64| {
            let d = (w * w - 1.0_f64).powi(2) + 0.09 * w * w;
            0.3 * w / d
        };
        let i = argmax(&mode_density);
        let j = argmax(&spectral_density);
        assert!(
            i.abs_diff(j) <= 1,
            "mode-density peak at {} vs spectral peak at {}",
            grid[i],
            grid[j]
        );
    }

    #[test]
    fn q_commutator_normalization() {
        for &gamma in &[0.3, 10.0] {
            let residual = verify_q_commutator(&model(gamma), &spec()).unwrap();
            assert!(residual < 1e-6, "gamma={gamma}: residual {residual}");
        }
    }

    #[test]
    fn q_commutator_across_extreme_damping() {
        for &log_g in &[-3.0_f64, -1.0, 0.0, 1.0, 3.0] {
            let gamma = 10.0_f64.powf(log_g);
            let residual = verify_q_commutator(&model(gamma), &spec()).unwrap();
            assert!(residual < 1e-6, "gamma={gamma}: residual {residual}");
        }
    }

    #[test]
    fn q_commutator_scales_linearly_in_hbar() {
        let m1 = ScalarFieldModel::<f64>::new(1.0, 0.3, 1.0, 1.0);
        let m2 = ScalarFieldModel::<f64>::new(1.0, 0.3, 1.0, 2.0);
        // |f_q|^2 doubles with hbar, so the commutator integral doubles and
        // the relative residual against i hbar is unchanged.
        let k = 1.37;
        let c1 = eval_coefficients(&m1, k, 0.0).unwrap();
        let c2 = eval_coefficients(&m2, k, 0.0).unwrap();
        assert!((c2.f_q.norm_sqr() - 2.0 * c1.f_q.norm_sqr()).abs() < 1e-15);
        let r1 = verify_q_commutator(&m1, &spec()).unwrap();
        let r2 = verify_q_commutator(&m2, &spec()).unwrap();
        assert!(r1 < 1e-6 && r2 < 1e-6);
    }

    #[test]
    fn mode_equations_residuals_are_tiny() {
        let m = model(0.3);
        let mut ks = Vec::new();
        let mut state = 3u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            ks.push(0.01 * (100.0_f64 / 0.01).powf(u));
        }
        let residuals = verify_mode_equations(&m, &ks).unwrap();
        assert!(residuals.max_residual() < 1e-12, "residuals {residuals:?}");
        // The alternative delta bookkeeping cancels along a different path;
        // a little more rounding headroom at the extreme ends of the k range.
        assert!(
            residuals.delta_bookkeeping < 1e-11,
            "residuals {residuals:?}"
        );

        // Free field: identically zero.
        let residuals = verify_mode_equations(&model(0.0), &ks).unwrap();
        assert_eq!(residuals.max_residual(), 0.0);
        assert_eq!(residuals.delta_bookkeeping, 0.0);
    }

    #[test]
    fn field_commutator_overlapping_gaussians() {
        let m = model(0.3);
        let g = GaussianTestFn::new(0.0, 1.0);
        let residual = verify_field_commutator(&m, &g, &g, &spec()).unwrap();
        assert!(residual < 1e-4, "residual {residual}");
    }

    #[test]
    fn field_commutator_respects_locality() {
        let m = model(0.3);
        let g = GaussianTestFn::new(-30.0, 1.0);
        let h = GaussianTestFn::new(30.0, 1.0);
        let residual = verify_field_commutator(&m, &g, &h, &spec()).unwrap();
        assert!(residual < 1e-6, "residual {residual}");
    }

    #[test]
    fn field_commutator_free_field() {
        let m = model(0.0);
        let g = GaussianTestFn::new(0.3, 1.5);
        let h = GaussianTestFn::new(-0.2, 1.0);
        let residual = verify_field_commutator(&m, &g, &h, &spec()).unwrap();
        assert!(residual < 1e-6, "residual {residual}");
    }

    #[test]
    fn autocorrelation_paths_agree() {
        let m = model(0.3);
        let osc = OscillatorParams::new(1.0, 0.3, 1.0);
        for regime in [Ensemble::classical(1.0), Ensemble::quantum(1.0)] {
            for &dt in &[0.0, 1.0, 5.0, 20.0] {
                if regime.regime == Regime::Quantum && dt == 0.0 {
                    // Finite but slow-converging zero-point integral; checked
                    // in thermo's tests.
                    continue;
                }
                let a = autocorrelation_from_modes(&m, &regime, dt, &spec()).unwrap();
                let b = position_autocorrelation(&osc, &regime, dt, &spec()).unwrap();
                assert!(
                    (a.value - b.value).abs() < 1e-6 * b.value.abs().max(1e-3),
                    "{:?} dt={dt}: {} vs {}",
                    regime.regime,
                    a.value,
                    b.value
                );
            }
        }
    }

    #[test]
    fn classical_equal_time_value_is_equipartition() {
        let m = model(0.3);
        let ens = Ensemble::classical(1.0);
        let r = autocorrelation_from_modes(&m, &ens, 0.0, &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5, "value {}", r.value);
    }

    #[test]
    fn works_in_f32() {
        let m = ScalarFieldModel::<f32>::new(1.0, 0.3, 1.0, 1.0);
        let c = eval_coefficients(&m, 1.0, 0.0).unwrap();
        assert!(c.f_q.norm() > 0.0);
    }
}
