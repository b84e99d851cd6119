//! Reservoir susceptibility models.
//!
//! A susceptibility `chi(omega)` encodes the linear back-action of the
//! reservoir on the oscillator: the effective equation of motion carries the
//! damping kernel `omega0^2 chi`. All models satisfy `chi(-omega) =
//! conj(chi(omega))` by construction (negative frequencies are evaluated by
//! reflection), and passive models have `Im chi >= 0` for `omega > 0`.
//!
//! Physicality checks live here too: a Kramers-Kronig reconstruction of the
//! real part from the imaginary part, and the diagonalizability condition
//! `int_0^inf Im[chi(omega)]/omega domega < pi/2`. The latter is the
//! dimensionless form: by the dispersion relation it equals `(pi/2) chi(0)`
//! for causal decaying models, i.e. it is exactly the requirement that the
//! static effective potential `omega0^2 [1 - chi(0)]` stays positive, which
//! is also what the discrete-bath eigensolve tests.

use crate::float::{cast, Float};
use crate::quadrature::{
    integrate_principal_value, integrate_semi_infinite, Classification, QuadratureError,
    QuadratureSpec,
};
use num_complex::Complex;
use std::io::BufRead;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SusceptibilityError<T: Float> {
    #[error("model parameter out of range: {reason}")]
    InvalidParameter { reason: String },
    #[error("tabulated query at omega = {omega} outside grid [{lo}, {hi}] and no extrapolation rule selected")]
    OutOfRange { omega: T, lo: T, hi: T },
    #[error("Im chi({omega}) = {value} < 0: active media are unsupported")]
    NegativeImChi { omega: T, value: T },
    #[error("tabulated model needs an explicit omega = 0 entry for the static value")]
    MissingStaticEntry,
    #[error("tabulated file, line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError<T>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How a tabulated model behaves outside its frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extrapolation {
    /// Out-of-range queries are an error.
    #[default]
    Forbid,
    /// `chi = 0` beyond the grid (decayed response).
    Zero,
    /// Hold the nearest endpoint value.
    Hold,
}

/// Parametrized complex reservoir response.
#[derive(Debug, Clone)]
pub enum SusceptibilityModel<T: Float> {
    /// Single-resonance bath: `chi = chi0 wl^2 / (wl^2 - w^2 - i Gl w)`.
    LorentzBath { chi0: T, omega_l: T, gamma_l: T },
    /// Ohmic damping with a single-pole cutoff:
    /// `chi = i gamma w / (w0^2 (1 - i w / Lambda))`.
    DrudeOhmic { gamma: T, lambda: T, omega0: T },
    /// Strictly Ohmic `chi = i gamma w / w0^2`. Deliberately unphysical:
    /// violates both the Kramers-Kronig relations and the diagonalizability
    /// condition, but reproduces exact velocity-proportional damping.
    PseudoOhmic { gamma: T, omega0: T },
    /// Interpolated table of `(omega, Re chi, Im chi)` samples.
    Tabulated(Box<TabulatedChi<T>>),
}

impl<T: Float> SusceptibilityModel<T> {
    pub fn lorentz(chi0: T, omega_l: T, gamma_l: T) -> Result<Self, SusceptibilityError<T>> {
        if !(chi0 >= T::zero()) || !chi0.is_finite() {
            return Err(SusceptibilityError::InvalidParameter {
                reason: format!("chi0 must be finite and >= 0, got {chi0}"),
            });
        }
        if !(omega_l > T::zero()) || !(gamma_l > T::zero()) {
            return Err(SusceptibilityError::InvalidParameter {
                reason: "omega_l and gamma_l must be > 0".into(),
            });
        }
        Ok(Self::LorentzBath {
            chi0,
            omega_l,
            gamma_l,
        })
    }

    pub fn drude(gamma: T, lambda: T, omega0: T) -> Result<Self, SusceptibilityError<T>> {
        if !(gamma >= T::zero()) || !(lambda > T::zero()) || !(omega0 > T::zero()) {
            return Err(SusceptibilityError::InvalidParameter {
                reason: "need gamma >= 0, lambda > 0, omega0 > 0".into(),
            });
        }
        Ok(Self::DrudeOhmic {
            gamma,
            lambda,
            omega0,
        })
    }

    pub fn pseudo_ohmic(gamma: T, omega0: T) -> Result<Self, SusceptibilityError<T>> {
        if !(gamma >= T::zero()) || !(omega0 > T::zero()) {
            return Err(SusceptibilityError::InvalidParameter {
                reason: "need gamma >= 0, omega0 > 0".into(),
            });
        }
        Ok(Self::PseudoOhmic { gamma, omega0 })
    }

    /// `chi(omega)` for any real frequency; `chi(-w) = conj(chi(w))` exactly.
    pub fn eval(&self, omega: T) -> Result<Complex<T>, SusceptibilityError<T>> {
        if omega < T::zero() {
            return Ok(self.eval(-omega)?.conj());
        }
        match self {
            Self::LorentzBath {
                chi0,
                omega_l,
                gamma_l,
            } => {
                let wl2 = *omega_l * *omega_l;
                let den = Complex::new(wl2 - omega * omega, -(*gamma_l * omega));
                Ok(Complex::new(*chi0 * wl2, T::zero()) / den)
            }
            Self::DrudeOhmic {
                gamma,
                lambda,
                omega0,
            } => {
                let num = Complex::new(T::zero(), *gamma * omega);
                let den = Complex::new(T::one(), -omega / *lambda) * (*omega0 * *omega0);
                Ok(num / den)
            }
            Self::PseudoOhmic { gamma, omega0 } => Ok(Complex::new(
                T::zero(),
                *gamma * omega / (*omega0 * *omega0),
            )),
            Self::Tabulated(table) => table.eval(omega),
        }
    }

    /// `d chi / d omega`; closed forms for the analytic variants, grid finite
    /// differences (interpolated) for tabulated data.
    pub fn eval_derivative(&self, omega: T) -> Result<Complex<T>, SusceptibilityError<T>> {
        if omega < T::zero() {
            // chi(-w) = conj chi(w)  =>  chi'(-w) = -conj(chi'(w))
            return Ok(-self.eval_derivative(-omega)?.conj());
        }
        match self {
            Self::LorentzBath {
                chi0,
                omega_l,
                gamma_l,
            } => {
                let wl2 = *omega_l * *omega_l;
                let den = Complex::new(wl2 - omega * omega, -(*gamma_l * omega));
                let num = Complex::new(omega + omega, *gamma_l) * (*chi0 * wl2);
                Ok(num / (den * den))
            }
            Self::DrudeOhmic {
                gamma,
                lambda,
                omega0,
            } => {
                let one_minus = Complex::new(T::one(), -omega / *lambda);
                let num = Complex::new(T::zero(), *gamma / (*omega0 * *omega0));
                Ok(num / (one_minus * one_minus))
            }
            Self::PseudoOhmic { gamma, omega0 } => {
                Ok(Complex::new(T::zero(), *gamma / (*omega0 * *omega0)))
            }
            Self::Tabulated(table) => table.eval_derivative(omega),
        }
    }

    /// Static value `chi(0+)`.
    pub fn static_value(&self) -> Result<Complex<T>, SusceptibilityError<T>> {
        match self {
            Self::LorentzBath { chi0, .. } => Ok(Complex::new(*chi0, T::zero())),
            Self::DrudeOhmic { .. } | Self::PseudoOhmic { .. } => {
                Ok(Complex::new(T::zero(), T::zero()))
            }
            Self::Tabulated(table) => {
                if table.omegas[0] == T::zero() {
                    Ok(Complex::new(table.re[0], table.im[0]))
                } else {
                    Err(SusceptibilityError::MissingStaticEntry)
                }
            }
        }
    }

    /// True when `Im chi` vanishes identically (no coupling to the bath).
    pub fn is_undamped(&self) -> bool {
        match self {
            Self::LorentzBath { chi0, .. } => *chi0 == T::zero(),
            Self::DrudeOhmic { gamma, .. } | Self::PseudoOhmic { gamma, .. } => *gamma == T::zero(),
            Self::Tabulated(table) => table.im.iter().all(|&v| v == T::zero()),
        }
    }

    /// Characteristic frequencies of the response, used to place quadrature
    /// split points and panel boundaries.
    pub fn frequency_scales(&self) -> Vec<T> {
        match self {
            Self::LorentzBath {
                omega_l, gamma_l, ..
            } => {
                let mut v = vec![*omega_l, *gamma_l];
                let lo = *omega_l - *gamma_l;
                if lo > T::zero() {
                    v.push(lo);
                }
                v.push(*omega_l + *gamma_l);
                v
            }
            Self::DrudeOhmic {
                gamma,
                lambda,
                omega0,
            } => vec![*gamma, *lambda, *omega0],
            Self::PseudoOhmic { gamma, omega0 } => vec![*gamma, *omega0],
            Self::Tabulated(table) => {
                let hi = *table.omegas.last().unwrap();
                vec![hi * cast(0.5), hi]
            }
        }
    }

    /// Whether the model can be queried at arbitrarily large frequencies,
    /// which every semi-infinite integral does.
    pub fn supports_unbounded_queries(&self) -> bool {
        match self {
            Self::Tabulated(table) => table.extrapolation != Extrapolation::Forbid,
            _ => true,
        }
    }
}

/// Coupling density `alpha(omega) = sqrt((2/pi) omega omega0^2 Im chi(omega))`.
///
/// This is the unique density for which a continuum of oscillators bilinearly
/// coupled to the system reproduces the damping kernel `omega0^2 chi`: the
/// dispersion sum `int alpha^2(w') / (w'^2 - w^2) dw'` is then exactly the
/// Kramers-Kronig transform reconstructing `omega0^2 chi(omega)`.
pub fn coupling_density<T: Float>(
    model: &SusceptibilityModel<T>,
    omega0: T,
    omega: T,
) -> Result<T, SusceptibilityError<T>> {
    let im = model.eval(omega)?.im;
    if im < T::zero() {
        return Err(SusceptibilityError::NegativeImChi { omega, value: im });
    }
    let two_over_pi = cast::<T>(2.0) / T::PI();
    Ok((two_over_pi * omega * omega0 * omega0 * im).sqrt())
}

// ---------------------------------------------------------------------------
// Tabulated model
// ---------------------------------------------------------------------------

/// Tabulated susceptibility on a strictly increasing grid of `omega >= 0`.
///
/// Real and imaginary parts are interpolated separately with a monotone
/// (Fritsch-Carlson) cubic, which cannot overshoot and so never produces a
/// spuriously negative `Im chi` between passive samples. Derivatives come
/// from centered finite differences at the grid nodes (one-sided at the two
/// endpoints), interpolated the same way.
#[derive(Debug, Clone)]
pub struct TabulatedChi<T: Float> {
    omegas: Vec<T>,
    re: Vec<T>,
    im: Vec<T>,
    re_slopes: Vec<T>,
    im_slopes: Vec<T>,
    dre: Vec<T>,
    dim: Vec<T>,
    dre_slopes: Vec<T>,
    dim_slopes: Vec<T>,
    extrapolation: Extrapolation,
}

impl<T: Float> TabulatedChi<T> {
    pub fn new(
        omegas: Vec<T>,
        re: Vec<T>,
        im: Vec<T>,
        extrapolation: Extrapolation,
    ) -> Result<Self, SusceptibilityError<T>> {
        if omegas.len() < 3 {
            return Err(SusceptibilityError::InvalidParameter {
                reason: "tabulated model needs at least 3 samples".into(),
            });
        }
        if omegas.len() != re.len() || omegas.len() != im.len() {
            return Err(SusceptibilityError::InvalidParameter {
                reason: "omega, re, im columns must have equal length".into(),
            });
        }
        if !(omegas[0] >= T::zero()) {
            return Err(SusceptibilityError::InvalidParameter {
                reason: "omega grid must start at omega >= 0".into(),
            });
        }
        for i in 1..omegas.len() {
            if !(omegas[i] > omegas[i - 1]) {
                return Err(SusceptibilityError::InvalidParameter {
                    reason: format!("omega grid must be strictly increasing (index {i})"),
                });
            }
        }
        for (i, v) in re.iter().chain(im.iter()).enumerate() {
            if !v.is_finite() {
                return Err(SusceptibilityError::InvalidParameter {
                    reason: format!("non-finite table value at flat index {i}"),
                });
            }
        }

        let dre = grid_derivative(&omegas, &re);
        let dim = grid_derivative(&omegas, &im);
        let re_slopes = pchip_slopes(&omegas, &re);
        let im_slopes = pchip_slopes(&omegas, &im);
        let dre_slopes = pchip_slopes(&omegas, &dre);
        let dim_slopes = pchip_slopes(&omegas, &dim);
        Ok(Self {
            omegas,
            re,
            im,
            re_slopes,
            im_slopes,
            dre,
            dim,
            dre_slopes,
            dim_slopes,
            extrapolation,
        })
    }

    /// Loads a 3-column whitespace-separated text file: `omega re_chi im_chi`.
    /// `#` starts a comment; blank lines are ignored.
    pub fn from_path(
        path: &Path,
        extrapolation: Extrapolation,
    ) -> Result<Self, SusceptibilityError<T>> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file), extrapolation)
    }

    pub fn from_reader<R: BufRead>(
        reader: R,
        extrapolation: Extrapolation,
    ) -> Result<Self, SusceptibilityError<T>> {
        let mut omegas = Vec::new();
        let mut re = Vec::new();
        let mut im = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(SusceptibilityError::Parse {
                    line: line_no,
                    reason: format!("expected 3 columns, found {}", fields.len()),
                });
            }
            let mut parsed = [T::zero(); 3];
            for (slot, field) in parsed.iter_mut().zip(fields.iter()) {
                let value: f64 = field.parse().map_err(|e| SusceptibilityError::Parse {
                    line: line_no,
                    reason: format!("bad float {field:?}: {e}"),
                })?;
                *slot = cast(value);
            }
            omegas.push(parsed[0]);
            re.push(parsed[1]);
            im.push(parsed[2]);
        }
        Self::new(omegas, re, im, extrapolation)
    }

    pub fn grid(&self) -> &[T] {
        &self.omegas
    }

    fn span(&self) -> (T, T) {
        (self.omegas[0], *self.omegas.last().unwrap())
    }

    fn eval(&self, omega: T) -> Result<Complex<T>, SusceptibilityError<T>> {
        debug_assert!(omega >= T::zero());
        let (lo, hi) = self.span();
        if omega < lo || omega > hi {
            return match self.extrapolation {
                Extrapolation::Forbid => Err(SusceptibilityError::OutOfRange { omega, lo, hi }),
                Extrapolation::Zero => Ok(Complex::new(T::zero(), T::zero())),
                Extrapolation::Hold => {
                    let i = if omega < lo { 0 } else { self.omegas.len() - 1 };
                    Ok(Complex::new(self.re[i], self.im[i]))
                }
            };
        }
        Ok(Complex::new(
            pchip_eval(&self.omegas, &self.re, &self.re_slopes, omega),
            pchip_eval(&self.omegas, &self.im, &self.im_slopes, omega),
        ))
    }

    fn eval_derivative(&self, omega: T) -> Result<Complex<T>, SusceptibilityError<T>> {
        let (lo, hi) = self.span();
        if omega < lo || omega > hi {
            return match self.extrapolation {
                Extrapolation::Forbid => Err(SusceptibilityError::OutOfRange { omega, lo, hi }),
                // Both extrapolations are constant beyond the grid.
                Extrapolation::Zero | Extrapolation::Hold => Ok(Complex::new(T::zero(), T::zero())),
            };
        }
        Ok(Complex::new(
            pchip_eval(&self.omegas, &self.dre, &self.dre_slopes, omega),
            pchip_eval(&self.omegas, &self.dim, &self.dim_slopes, omega),
        ))
    }
}

/// Centered finite differences at interior nodes, one-sided at the ends.
fn grid_derivative<T: Float>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let mut d = vec![T::zero(); n];
    for i in 1..n - 1 {
        // Unequal-spacing three-point formula.
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let a = -h1 / (h0 * (h0 + h1));
        let b = (h1 - h0) / (h0 * h1);
        let c = h0 / (h1 * (h0 + h1));
        d[i] = a * y[i - 1] + b * y[i] + c * y[i + 1];
    }
    d[0] = (y[1] - y[0]) / (x[1] - x[0]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    d
}

/// Fritsch-Carlson monotone cubic Hermite slopes.
fn pchip_slopes<T: Float>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let mut h = Vec::with_capacity(n - 1);
    let mut delta = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        h.push(x[i + 1] - x[i]);
        delta.push((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
    }
    let mut m = vec![T::zero(); n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= T::zero() {
            m[i] = T::zero();
        } else {
            let w1 = cast::<T>(2.0) * h[i] + h[i - 1];
            let w2 = h[i] + cast::<T>(2.0) * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m[0] = endpoint_slope(
        h[0],
        h.get(1).copied().unwrap_or(h[0]),
        delta[0],
        delta.get(1).copied().unwrap_or(delta[0]),
    );
    let dn = delta[n - 2];
    let dn1 = if n >= 3 { delta[n - 3] } else { dn };
    let hn = h[n - 2];
    let hn1 = if n >= 3 { h[n - 3] } else { hn };
    m[n - 1] = endpoint_slope(hn, hn1, dn, dn1);
    m
}

fn endpoint_slope<T: Float>(h0: T, h1: T, d0: T, d1: T) -> T {
    let mut m = ((cast::<T>(2.0) * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= T::zero() {
        m = T::zero();
    } else if d0 * d1 < T::zero() && m.abs() > cast::<T>(3.0) * d0.abs() {
        m = cast::<T>(3.0) * d0;
    }
    m
}

fn pchip_eval<T: Float>(x: &[T], y: &[T], m: &[T], at: T) -> T {
    // Binary search for the containing interval.
    let n = x.len();
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x[mid] <= at {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = x[hi] - x[lo];
    let t = (at - x[lo]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let two = cast::<T>(2.0);
    let three = cast::<T>(3.0);
    let h00 = two * t3 - three * t2 + T::one();
    let h10 = t3 - two * t2 + t;
    let h01 = -two * t3 + three * t2;
    let h11 = t3 - t2;
    h00 * y[lo] + h10 * h * m[lo] + h01 * y[hi] + h11 * h * m[hi]
}

// ---------------------------------------------------------------------------
// Physicality checks
// ---------------------------------------------------------------------------

/// Fate of the diagonalizability condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonalizability {
    /// `int_0^inf Im[chi]/omega domega < pi/2`: the coupled Hamiltonian has a
    /// positive-definite quadratic form.
    Satisfied,
    /// The integral is finite but `>= pi/2`.
    Violated,
    /// The integral does not converge.
    Divergent,
}

/// Status of the Kramers-Kronig reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KkStatus {
    Pass,
    Fail,
    /// `int Im chi domega` diverges, so the unsubtracted Hilbert transform
    /// does not apply; the truncated residual is still reported.
    InapplicableDivergent,
}

/// Grid and tolerance for the Kramers-Kronig check.
#[derive(Debug, Clone)]
pub struct KkGridSpec<T> {
    /// Upper truncation of the Hilbert-transform integral.
    pub omega_max: T,
    /// Number of reconstruction frequencies (log-spaced).
    pub n_points: usize,
    /// Pass threshold on the max residual relative to the response scale.
    pub tolerance: T,
}

impl<T: Float> KkGridSpec<T> {
    /// `omega_max = 100x` the model's largest characteristic frequency.
    pub fn for_model(model: &SusceptibilityModel<T>) -> Self {
        let scale = model
            .frequency_scales()
            .into_iter()
            .fold(T::one(), |a, b| a.max(b));
        Self {
            omega_max: scale * cast(100.0),
            n_points: 24,
            tolerance: cast(1e-3),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KkReport<T> {
    pub status: KkStatus,
    /// Max over the grid of |Re chi_reconstructed - Re chi| / scale, where
    /// the scale is the largest |chi| seen on the grid.
    pub max_residual: T,
}

/// Reconstructs `Re chi` from `Im chi` through the principal-value Hilbert
/// transform and reports the worst relative residual.
pub fn check_kramers_kronig<T: Float>(
    model: &SusceptibilityModel<T>,
    grid: &KkGridSpec<T>,
    spec: &QuadratureSpec<T>,
) -> Result<KkReport<T>, SusceptibilityError<T>> {
    // Applicability: the unsubtracted transform needs int Im chi to converge.
    let im_spec = QuadratureSpec {
        omega_split: Some(grid.omega_max * cast(0.2)),
        breakpoints: model.frequency_scales(),
        rel_tol: spec.rel_tol.max(cast(1e-8)),
        ..spec.clone()
    };
    let model_for_probe = model.clone();
    let im_integral = integrate_semi_infinite(
        move |w| match model_for_probe.eval(w) {
            Ok(c) => c.im,
            Err(_) => T::nan(),
        },
        &im_spec,
    )?;
    let applicable = im_integral.classification == Classification::Converged;

    // Reconstruction points, log-spaced inside the trusted window.
    let scale_hi = grid.omega_max * cast(0.3);
    let scale_lo = grid.omega_max * cast(1e-4);
    let n = grid.n_points.max(2);
    let mut max_residual = T::zero();
    let mut chi_scale = T::zero();
    let pv_spec = QuadratureSpec {
        rel_tol: cast(1e-8),
        abs_tol: cast(1e-12),
        breakpoints: model.frequency_scales(),
        ..QuadratureSpec::default()
    };

    let ratio = (scale_hi / scale_lo).ln() / cast((n - 1) as f64);
    for i in 0..n {
        let omega = scale_lo * (ratio * cast(i as f64)).exp();
        let chi = model.eval(omega)?;
        chi_scale = chi_scale.max(chi.norm());

        let model_inner = model.clone();
        let f = move |wp: T| {
            let im = match model_inner.eval(wp) {
                Ok(c) => c.im,
                Err(_) => return T::nan(),
            };
            cast::<T>(2.0) / T::PI() * wp * im / (wp * wp - omega * omega)
        };
        let reconstructed =
            integrate_principal_value(f, T::zero(), grid.omega_max, omega, &pv_spec)?;
        let residual = (reconstructed.value - chi.re).abs();
        max_residual = max_residual.max(residual);
    }

    let floor = T::min_positive_value() * cast(1e8);
    let rel = max_residual / chi_scale.max(floor);
    let status = if !applicable {
        KkStatus::InapplicableDivergent
    } else if rel < grid.tolerance {
        KkStatus::Pass
    } else {
        KkStatus::Fail
    };
    Ok(KkReport {
        status,
        max_residual: rel,
    })
}

/// Evaluates `int_0^inf Im[chi(omega)]/omega domega` with tail classification
/// and compares against `pi/2`.
pub fn check_diagonalizability<T: Float>(
    model: &SusceptibilityModel<T>,
    spec: &QuadratureSpec<T>,
) -> Result<(Diagonalizability, T), SusceptibilityError<T>> {
    let scales = model.frequency_scales();
    let scale = scales.iter().copied().fold(T::one(), |a, b| a.max(b));
    let qspec = QuadratureSpec {
        omega_split: Some(scale * cast(10.0)),
        breakpoints: scales,
        rel_tol: spec.rel_tol.max(cast(1e-9)),
        ..spec.clone()
    };
    let model = model.clone();
    let result = integrate_semi_infinite(
        move |w| match model.eval(w) {
            Ok(c) => c.im / w,
            Err(_) => T::nan(),
        },
        &qspec,
    )?;
    let half_pi = T::PI() * cast(0.5);
    match result.classification {
        Classification::Converged => {
            if result.value < half_pi {
                Ok((Diagonalizability::Satisfied, result.value))
            } else {
                Ok((Diagonalizability::Violated, result.value))
            }
        }
        _ => Ok((Diagonalizability::Divergent, T::infinity())),
    }
}

/// Physicality summary of a model.
#[derive(Debug, Clone)]
pub struct ValidityReport<T> {
    pub reality_symmetry_ok: bool,
    pub kk_max_residual: T,
    pub kk_status: KkStatus,
    pub diagonalizability: Diagonalizability,
    /// `int_0^inf Im[chi]/omega domega`; infinity when divergent.
    pub im_chi_integral: T,
    /// Static value `chi(0+)`.
    pub chi0: Complex<T>,
}

pub fn validity_report<T: Float>(
    model: &SusceptibilityModel<T>,
    spec: &QuadratureSpec<T>,
) -> Result<ValidityReport<T>, SusceptibilityError<T>> {
    let scale = model
        .frequency_scales()
        .into_iter()
        .fold(T::one(), |a, b| a.max(b));

    // chi(-w) == conj(chi(w)) on a deterministic pseudo-random sample.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut reality_ok = true;
    for _ in 0..64 {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let u = (state >> 11) as f64 / (1u64 << 53) as f64;
        let omega = scale * cast::<T>(4.0 * u + 1e-3);
        let plus = model.eval(omega);
        let minus = model.eval(-omega);
        if let (Ok(p), Ok(m)) = (plus, minus) {
            if m != p.conj() {
                reality_ok = false;
            }
        }
        // Out-of-range tabulated queries don't count against symmetry.
    }

    let (diag, im_integral) = check_diagonalizability(model, spec)?;
    let kk = check_kramers_kronig(model, &KkGridSpec::for_model(model), spec)?;
    let chi0 = model.static_value()?;
    Ok(ValidityReport {
        reality_symmetry_ok: reality_ok,
        kk_max_residual: kk.max_residual,
        kk_status: kk.status,
        diagonalizability: diag,
        im_chi_integral: im_integral,
        chi0,
    })
}
