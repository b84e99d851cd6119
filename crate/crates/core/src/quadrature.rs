//! Adaptive quadrature engine.
//!
//! Three entry points cover everything the thermodynamic integrals need:
//!
//! * [`integrate_finite`] — Gauss-Kronrod 7-15 with adaptive bisection on a
//!   bounded interval (integrable endpoint singularities are fine because
//!   Kronrod nodes never touch the endpoints).
//! * [`integrate_semi_infinite`] — `(0, inf)` integrals. The tail is probed
//!   over a few decades first; integrands that do not decay are classified as
//!   log- or power-divergent and reported with a fitted tail coefficient
//!   instead of a bogus number.
//! * [`integrate_principal_value`] — Cauchy principal value across a simple
//!   pole via symmetric window exclusion and Richardson extrapolation in the
//!   window size.

use crate::float::{cast, Float, KahanSum};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError<T: Float> {
    #[error("integrand returned a non-finite value at omega = {omega}")]
    NonFiniteSample { omega: T },
    #[error("invalid quadrature spec: {reason}")]
    InvalidSpec { reason: String },
    #[error("principal-value pole {pole} must lie strictly inside ({lo}, {hi})")]
    PoleOutsideInterval { pole: T, lo: T, hi: T },
}

/// How a semi-infinite integral behaved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Finite value with the error estimate within tolerance.
    Converged,
    /// Integrand tail `~ c/omega`; the integral grows like `c ln(omega)`.
    LogDivergent,
    /// Integrand tail `~ c omega^(p-1)` with `p > 0`; grows like `(c/p) omega^p`.
    PowerDivergent,
    /// Neither convergence nor a clean divergence law could be established.
    Inconclusive,
}

impl Classification {
    pub fn is_divergent(self) -> bool {
        matches!(self, Self::LogDivergent | Self::PowerDivergent)
    }
}

/// Tolerances and layout hints for the adaptive engine.
#[derive(Debug, Clone)]
pub struct QuadratureSpec<T> {
    /// Relative tolerance on the integral value. Must be positive.
    pub rel_tol: T,
    /// Absolute tolerance floor (same units as integrand times omega).
    pub abs_tol: T,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
    /// Decades beyond the split point sampled by the tail probe.
    pub tail_probe_decades: usize,
    /// Hard upper integration limit. When set, the integral is the proper
    /// integral on `(0, cutoff)` and no divergence classification happens.
    pub cutoff: Option<T>,
    /// Boundary between the adaptive region and the tail treatment.
    /// Callers should set this to ~10x the largest characteristic frequency
    /// of the integrand; `None` falls back to 10 (reduced units).
    pub omega_split: Option<T>,
    /// Interior points forced to be panel boundaries, so narrow features at
    /// known frequencies cannot slip between the initial Kronrod nodes.
    pub breakpoints: Vec<T>,
}

impl<T: Float> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            rel_tol: cast(1e-10),
            abs_tol: T::zero(),
            max_subdivisions: 4000,
            tail_probe_decades: 3,
            cutoff: None,
            omega_split: None,
            breakpoints: Vec::new(),
        }
    }
}

impl<T: Float> QuadratureSpec<T> {
    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_cutoff(mut self, cutoff: T) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn with_split(mut self, omega_split: T) -> Self {
        self.omega_split = Some(omega_split);
        self
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<T>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn validate(&self) -> Result<(), QuadratureError<T>> {
        if !(self.rel_tol > T::zero()) {
            return Err(QuadratureError::InvalidSpec {
                reason: "rel_tol must be > 0".into(),
            });
        }
        if !(self.abs_tol >= T::zero()) {
            return Err(QuadratureError::InvalidSpec {
                reason: "abs_tol must be >= 0".into(),
            });
        }
        if self.max_subdivisions < 1 {
            return Err(QuadratureError::InvalidSpec {
                reason: "max_subdivisions must be >= 1".into(),
            });
        }
        if self.tail_probe_decades < 2 {
            return Err(QuadratureError::InvalidSpec {
                reason: "tail_probe_decades must be >= 2".into(),
            });
        }
        Ok(())
    }

    fn tolerance_for(&self, value: T) -> T {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

/// Outcome of a (semi-)infinite integral.
#[derive(Debug, Clone)]
pub struct QuadratureResult<T> {
    /// Integral value. NaN for divergent classifications.
    pub value: T,
    /// Estimated absolute error (quadrature plus tail truncation).
    pub error_estimate: T,
    pub classification: Classification,
    /// Fitted coefficient `c` of the divergent tail (`c/omega` or
    /// `c omega^(p-1)`); `None` when the integral converged.
    pub tail_coefficient: Option<T>,
    /// Fitted exponent `p` for the power-divergent class.
    pub tail_exponent: Option<T>,
    pub n_evaluations: usize,
}

impl<T: Float> QuadratureResult<T> {
    fn converged(value: T, error: T, nevals: usize) -> Self {
        Self {
            value,
            error_estimate: error,
            classification: Classification::Converged,
            tail_coefficient: None,
            tail_exponent: None,
            n_evaluations: nevals,
        }
    }

    pub fn is_divergent(&self) -> bool {
        self.classification.is_divergent()
    }
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7-15 kernel
// ---------------------------------------------------------------------------

const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Gk15<T> {
    xgk: [T; 8],
    wgk: [T; 8],
    wg: [T; 4],
}

impl<T: Float> Gk15<T> {
    fn new() -> Self {
        let mut xgk = [T::zero(); 8];
        let mut wgk = [T::zero(); 8];
        let mut wg = [T::zero(); 4];
        for i in 0..8 {
            xgk[i] = cast(XGK15[i]);
            wgk[i] = cast(WGK15[i]);
        }
        for i in 0..4 {
            wg[i] = cast(WG7[i]);
        }
        Self { xgk, wgk, wg }
    }

    /// One Kronrod pass over `[a, b]`; returns (value, error, resabs).
    fn apply<F>(&self, f: &mut F, a: T, b: T) -> Result<(T, T), QuadratureError<T>>
    where
        F: FnMut(T) -> T,
    {
        let half = cast::<T>(0.5);
        let center = half * (a + b);
        let half_length = half * (b - a);

        let mut eval = |x: T| -> Result<T, QuadratureError<T>> {
            let y = f(x);
            if !y.is_finite() {
                return Err(QuadratureError::NonFiniteSample { omega: x });
            }
            Ok(y)
        };

        let fc = eval(center)?;
        let mut fv_low = [T::zero(); 7];
        let mut fv_high = [T::zero(); 7];
        for j in 0..7 {
            let dx = half_length * self.xgk[j];
            fv_low[j] = eval(center - dx)?;
            fv_high[j] = eval(center + dx)?;
        }

        let mut result_kronrod = self.wgk[7] * fc;
        let mut result_gauss = self.wg[3] * fc;
        let mut resabs = self.wgk[7] * fc.abs();
        for j in 0..7 {
            let pair = fv_low[j] + fv_high[j];
            result_kronrod = result_kronrod + self.wgk[j] * pair;
            resabs = resabs + self.wgk[j] * (fv_low[j].abs() + fv_high[j].abs());
            if j % 2 == 1 {
                result_gauss = result_gauss + self.wg[j / 2] * pair;
            }
        }

        let mean = result_kronrod * half;
        let mut resasc = self.wgk[7] * (fc - mean).abs();
        for j in 0..7 {
            resasc = resasc + self.wgk[j] * ((fv_low[j] - mean).abs() + (fv_high[j] - mean).abs());
        }

        let value = result_kronrod * half_length;
        let resabs = resabs * half_length.abs();
        let resasc = resasc * half_length.abs();
        let raw_err = ((result_kronrod - result_gauss) * half_length).abs();
        let err = rescale_error(raw_err, resabs, resasc);
        if !value.is_finite() || !err.is_finite() {
            return Err(QuadratureError::NonFiniteSample { omega: center });
        }
        Ok((value, err))
    }
}

/// GSL-style conservative error rescaling for the Kronrod-Gauss difference.
fn rescale_error<T: Float>(err: T, resabs: T, resasc: T) -> T {
    let mut e = err.abs();
    if resasc != T::zero() && e != T::zero() {
        let scale = (cast::<T>(200.0) * e / resasc).powf(cast(1.5));
        e = if scale < T::one() {
            resasc * scale
        } else {
            resasc
        };
    }
    let min_pos = T::min_positive_value();
    if resabs > min_pos / (cast::<T>(50.0) * T::epsilon()) {
        e = e.max(cast::<T>(50.0) * T::epsilon() * resabs);
    }
    e
}

// ---------------------------------------------------------------------------
// Adaptive subdivision over a set of panels
// ---------------------------------------------------------------------------

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

struct HeapEntry<T>(Segment<T>);

impl<T: Float> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<T: Float> Eq for HeapEntry<T> {}
impl<T: Float> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Float> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Errors are finite by construction; ties broken arbitrarily.
        self.0
            .error
            .partial_cmp(&other.0.error)
            .unwrap_or(Ordering::Equal)
    }
}

struct AdaptiveOutcome<T> {
    value: T,
    error: T,
    converged: bool,
    n_evaluations: usize,
}

fn adaptive_on_panels<T, F>(
    f: &mut F,
    panels: &[(T, T)],
    spec: &QuadratureSpec<T>,
    budget: usize,
) -> Result<AdaptiveOutcome<T>, QuadratureError<T>>
where
    T: Float,
    F: FnMut(T) -> T,
{
    let rule = Gk15::new();
    let mut heap: BinaryHeap<HeapEntry<T>> = BinaryHeap::new();
    let mut nevals = 0usize;

    for &(a, b) in panels {
        if !(b > a) {
            continue;
        }
        let (value, error) = rule.apply(f, a, b)?;
        nevals += 15;
        heap.push(HeapEntry(Segment { a, b, value, error }));
    }

    let resum = |heap: &BinaryHeap<HeapEntry<T>>| -> (T, T) {
        let mut v = KahanSum::new();
        let mut e = KahanSum::new();
        for entry in heap.iter() {
            v.add(entry.0.value);
            e.add(entry.0.error);
        }
        (v.value(), e.value())
    };

    let mut splits = 0usize;
    loop {
        let (total, total_err) = resum(&heap);
        let tol = spec.tolerance_for(total);
        if total_err <= tol {
            return Ok(AdaptiveOutcome {
                value: total,
                error: total_err,
                converged: true,
                n_evaluations: nevals,
            });
        }
        if splits >= budget {
            return Ok(AdaptiveOutcome {
                value: total,
                error: total_err,
                converged: false,
                n_evaluations: nevals,
            });
        }
        let worst = match heap.pop() {
            Some(entry) => entry.0,
            None => {
                return Ok(AdaptiveOutcome {
                    value: T::zero(),
                    error: T::zero(),
                    converged: true,
                    n_evaluations: nevals,
                })
            }
        };
        let mid = cast::<T>(0.5) * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; error cannot shrink.
            heap.push(HeapEntry(worst));
            let (total, total_err) = resum(&heap);
            return Ok(AdaptiveOutcome {
                value: total,
                error: total_err,
                converged: total_err <= spec.tolerance_for(total),
                n_evaluations: nevals,
            });
        }
        let (v1, e1) = rule.apply(f, worst.a, mid)?;
        let (v2, e2) = rule.apply(f, mid, worst.b)?;
        nevals += 30;
        splits += 1;
        heap.push(HeapEntry(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        }));
        heap.push(HeapEntry(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        }));
    }
}

fn panels_between<T: Float>(lo: T, hi: T, breakpoints: &[T]) -> Vec<(T, T)> {
    let mut cuts: Vec<T> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    cuts.dedup_by(|a, b| a == b);
    let mut panels = Vec::with_capacity(cuts.len() + 1);
    let mut prev = lo;
    for c in cuts {
        panels.push((prev, c));
        prev = c;
    }
    panels.push((prev, hi));
    panels
}

/// Adaptive integral of `f` over the bounded interval `[a, b]`.
pub fn integrate_finite<T, F>(
    mut f: F,
    a: T,
    b: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadratureError<T>>
where
    T: Float,
    F: FnMut(T) -> T,
{
    spec.validate()?;
    if a == b {
        return Ok(QuadratureResult::converged(T::zero(), T::zero(), 0));
    }
    let (lo, hi, sign) = if a < b {
        (a, b, T::one())
    } else {
        (b, a, -T::one())
    };
    let panels = panels_between(lo, hi, &spec.breakpoints);
    let out = adaptive_on_panels(&mut f, &panels, spec, spec.max_subdivisions)?;
    Ok(QuadratureResult {
        value: sign * out.value,
        error_estimate: out.error,
        classification: if out.converged {
            Classification::Converged
        } else {
            Classification::Inconclusive
        },
        tail_coefficient: None,
        tail_exponent: None,
        n_evaluations: out.n_evaluations,
    })
}

// ---------------------------------------------------------------------------
// Tail probe and semi-infinite integration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum TailBehavior<T> {
    Decaying,
    Negligible,
    Log { coefficient: T },
    Power { coefficient: T, exponent: T },
    Erratic,
}

const PROBE_PER_DECADE: usize = 6;
const TINY_FLOOR: f64 = 1e-280;

fn median<T: Float>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    values[values.len() / 2]
}

/// Samples `|f|` on a log grid past `split` and fits the decay law.
fn probe_tail<T, F>(
    f: &mut F,
    split: T,
    decades: usize,
) -> Result<TailBehavior<T>, QuadratureError<T>>
where
    T: Float,
    F: FnMut(T) -> T,
{
    let n = decades * PROBE_PER_DECADE;
    let ten = cast::<T>(10.0);
    let mut omegas = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for i in 1..=n {
        let exponent = cast::<T>(i as f64 / PROBE_PER_DECADE as f64);
        let omega = split * ten.powf(exponent);
        let y = f(omega);
        if !y.is_finite() {
            return Err(QuadratureError::NonFiniteSample { omega });
        }
        omegas.push(omega);
        values.push(y);
    }

    let floor = cast::<T>(TINY_FLOOR).max(T::min_positive_value() * cast(1e8));
    if values.iter().all(|v| v.abs() < floor) {
        return Ok(TailBehavior::Negligible);
    }

    // Per-decade averages of |f| over the log-spaced samples are robust to
    // oscillatory sign changes, and reproduce power-law slopes exactly.
    let mut decade_avg = Vec::with_capacity(decades);
    for chunk in values.chunks_exact(PROBE_PER_DECADE) {
        let mut acc = T::zero();
        for v in chunk {
            acc = acc + v.abs();
        }
        decade_avg.push(acc / cast(PROBE_PER_DECADE as f64));
    }

    let ln10 = cast::<T>(10.0).ln();
    let mut slopes = Vec::new();
    for d in 1..decade_avg.len() {
        let (p, q) = (decade_avg[d - 1], decade_avg[d]);
        if p < floor || q < floor {
            continue;
        }
        slopes.push((q / p).ln() / ln10);
    }
    if slopes.is_empty() {
        return Ok(TailBehavior::Negligible);
    }
    let spread = {
        let lo = slopes.iter().copied().fold(T::infinity(), |a, b| a.min(b));
        let hi = slopes
            .iter()
            .copied()
            .fold(T::neg_infinity(), |a, b| a.max(b));
        hi - lo
    };
    let slope = median(&mut slopes.clone());

    let lo_gate = cast::<T>(-1.15);
    let hi_gate = cast::<T>(-0.85);
    if slope <= lo_gate {
        return Ok(TailBehavior::Decaying);
    }
    if spread > cast(0.5) {
        return Ok(TailBehavior::Erratic);
    }
    // Signed coefficients require a consistent sign over the probe.
    let positives = values.iter().filter(|v| **v > T::zero()).count();
    let negatives = values.iter().filter(|v| **v < T::zero()).count();
    if positives > 0 && negatives > 0 {
        return Ok(TailBehavior::Erratic);
    }

    if slope <= hi_gate {
        let mut coeffs: Vec<T> = omegas
            .iter()
            .zip(values.iter())
            .map(|(&w, &v)| w * v)
            .collect();
        let coefficient = median(&mut coeffs);
        Ok(TailBehavior::Log { coefficient })
    } else {
        let exponent = slope + T::one();
        let mut coeffs: Vec<T> = omegas
            .iter()
            .zip(values.iter())
            .map(|(&w, &v)| v / w.powf(exponent - T::one()))
            .collect();
        let coefficient = median(&mut coeffs);
        Ok(TailBehavior::Power {
            coefficient,
            exponent,
        })
    }
}

/// Integral of `f` over `(0, inf)` (or `(0, cutoff)` when a cutoff is set).
///
/// The tail beyond `omega_split` is summed over geometrically growing
/// segments until the extrapolated remainder is below tolerance. Integrands
/// whose tail probe shows no decay are classified instead of evaluated.
pub fn integrate_semi_infinite<T, F>(
    mut f: F,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadratureError<T>>
where
    T: Float,
    F: FnMut(T) -> T,
{
    spec.validate()?;
    let split = spec.omega_split.unwrap_or_else(|| cast(10.0));
    if !(split > T::zero()) {
        return Err(QuadratureError::InvalidSpec {
            reason: "omega_split must be > 0".into(),
        });
    }

    if let Some(cutoff) = spec.cutoff {
        if !(cutoff > T::zero()) {
            return Err(QuadratureError::InvalidSpec {
                reason: "cutoff must be > 0".into(),
            });
        }
        return integrate_to_cutoff(&mut f, split.min(cutoff), cutoff, spec);
    }

    let behavior = probe_tail(&mut f, split, spec.tail_probe_decades)?;
    match behavior {
        TailBehavior::Log { coefficient } => {
            return Ok(QuadratureResult {
                value: T::nan(),
                error_estimate: T::infinity(),
                classification: Classification::LogDivergent,
                tail_coefficient: Some(coefficient),
                tail_exponent: None,
                n_evaluations: 0,
            })
        }
        TailBehavior::Power {
            coefficient,
            exponent,
        } => {
            return Ok(QuadratureResult {
                value: T::nan(),
                error_estimate: T::infinity(),
                classification: Classification::PowerDivergent,
                tail_coefficient: Some(coefficient),
                tail_exponent: Some(exponent),
                n_evaluations: 0,
            })
        }
        TailBehavior::Erratic => {
            return Ok(QuadratureResult {
                value: T::nan(),
                error_estimate: T::infinity(),
                classification: Classification::Inconclusive,
                tail_coefficient: None,
                tail_exponent: None,
                n_evaluations: 0,
            })
        }
        TailBehavior::Decaying | TailBehavior::Negligible => {}
    }

    // Head region; absolute budget is apportioned between head and tail
    // because the per-region errors add up.
    let head_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * cast(0.5),
        ..spec.clone()
    };
    let panels = panels_between(T::zero(), split, &spec.breakpoints);
    let head = adaptive_on_panels(&mut f, &panels, &head_spec, spec.max_subdivisions)?;
    let mut value = KahanSum::new();
    value.add(head.value);
    let mut error = head.error;
    let mut nevals = head.n_evaluations;

    // Tail: geometric segments [split 2^k, split 2^(k+1)]. Oscillatory
    // kernels (cos(omega dt)) need the per-segment budget to track the
    // oscillation count; unresolved segments surface through the error
    // estimate rather than a hard failure.
    const MAX_TAIL_SEGMENTS: usize = 64;
    let seg_budget = (spec.max_subdivisions / 8).max(200);
    let seg_spec = QuadratureSpec {
        breakpoints: Vec::new(),
        abs_tol: spec.abs_tol / cast(128.0),
        ..spec.clone()
    };
    let mut lo = split;
    let mut prev_mag: Option<T> = None;
    let mut truncation_ok = false;
    for _ in 0..MAX_TAIL_SEGMENTS {
        let hi = lo + lo;
        let seg = adaptive_on_panels(&mut f, &[(lo, hi)], &seg_spec, seg_budget)?;
        nevals += seg.n_evaluations;
        value.add(seg.value);
        error = error + seg.error;
        let mag = seg.value.abs();
        let tol = spec.tolerance_for(value.value());
        if let Some(prev) = prev_mag {
            if prev > T::zero() && mag > T::zero() {
                let ratio = mag / prev;
                if ratio < cast(0.95) {
                    let remainder = mag * ratio / (T::one() - ratio);
                    if remainder < cast::<T>(0.25) * tol {
                        error = error + remainder;
                        truncation_ok = true;
                        break;
                    }
                }
            } else if mag == T::zero() && prev == T::zero() {
                truncation_ok = true;
                break;
            }
        }
        if mag == T::zero() && prev_mag.is_none() {
            prev_mag = Some(mag);
            lo = hi;
            continue;
        }
        prev_mag = Some(mag);
        lo = hi;
    }

    let total = value.value();
    let converged = truncation_ok && error <= spec.tolerance_for(total);
    Ok(QuadratureResult {
        value: total,
        error_estimate: error,
        classification: if converged {
            Classification::Converged
        } else {
            Classification::Inconclusive
        },
        tail_coefficient: None,
        tail_exponent: None,
        n_evaluations: nevals,
    })
}

fn integrate_to_cutoff<T, F>(
    f: &mut F,
    split: T,
    cutoff: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadratureError<T>>
where
    T: Float,
    F: FnMut(T) -> T,
{
    let mut panels = panels_between(T::zero(), split, &spec.breakpoints);
    // Geometric panels up to the cutoff keep panel aspect ratios sane when
    // the cutoff sits many decades past the physical scales.
    let mut lo = split;
    while lo < cutoff {
        let hi = (lo + lo).min(cutoff);
        panels.push((lo, hi));
        lo = hi;
    }
    let out = adaptive_on_panels(f, &panels, spec, spec.max_subdivisions)?;
    Ok(QuadratureResult {
        value: out.value,
        error_estimate: out.error,
        classification: if out.converged {
            Classification::Converged
        } else {
            Classification::Inconclusive
        },
        tail_coefficient: None,
        tail_exponent: None,
        n_evaluations: out.n_evaluations,
    })
}

// ---------------------------------------------------------------------------
// Principal value
// ---------------------------------------------------------------------------

/// Cauchy principal value of `f` over `[a, b]` across a simple pole.
///
/// Symmetric windows of shrinking half-width `eps` are excluded around the
/// pole; the window-size series `I(eps) = PV + c1 eps + c3 eps^3 + ...` is
/// Richardson-extrapolated. A non-simple pole makes the sequence diverge,
/// which is reported as [`Classification::Inconclusive`].
pub fn integrate_principal_value<T, F>(
    mut f: F,
    a: T,
    b: T,
    pole: T,
    spec: &QuadratureSpec<T>,
) -> Result<QuadratureResult<T>, QuadratureError<T>>
where
    T: Float,
    F: FnMut(T) -> T,
{
    spec.validate()?;
    if !(pole > a && pole < b) {
        return Err(QuadratureError::PoleOutsideInterval { pole, lo: a, hi: b });
    }

    let eps0 = (pole - a).min(b - pole) * cast(0.25);
    const MAX_LEVELS: usize = 16;
    let wing_spec = QuadratureSpec {
        breakpoints: Vec::new(),
        ..spec.clone()
    };

    let mut table: Vec<Vec<T>> = Vec::new();
    let mut nevals = 0usize;
    let mut eps = eps0;
    let mut prev_raw: Option<T> = None;
    let mut growth_streak = 0usize;
    // Scale of the cancelling wing contributions; resolution floor for the PV.
    let mut wing_scale = T::zero();
    let mut best: Option<(T, T)> = None;

    for level in 0..MAX_LEVELS {
        let left = adaptive_on_panels(&mut f, &[(a, pole - eps)], &wing_spec, 400)?;
        let right = adaptive_on_panels(&mut f, &[(pole + eps, b)], &wing_spec, 400)?;
        nevals += left.n_evaluations + right.n_evaluations;
        let i_eps = left.value + right.value;
        let wing_err = left.error + right.error;
        wing_scale = wing_scale.max(left.value.abs() + right.value.abs());

        // Non-simple poles make the raw sequence blow up ~ 2^level.
        if let Some(prev) = prev_raw {
            let big = wing_scale.max(T::min_positive_value());
            if i_eps.abs() > cast::<T>(1.6) * prev.abs() && i_eps.abs() > big * cast(0.5) {
                growth_streak += 1;
                if growth_streak >= 3 {
                    return Ok(QuadratureResult {
                        value: T::nan(),
                        error_estimate: T::infinity(),
                        classification: Classification::Inconclusive,
                        tail_coefficient: None,
                        tail_exponent: None,
                        n_evaluations: nevals,
                    });
                }
            } else {
                growth_streak = 0;
            }
        }
        prev_raw = Some(i_eps);

        // Richardson column: error powers 1, 3, 5, ...
        let mut row = vec![i_eps];
        if let Some(prev) = table.last() {
            for m in 1..=prev.len() {
                let power = 2 * m - 1;
                let factor = cast::<T>((1u64 << power) as f64) - T::one();
                let extrapolated = row[m - 1] + (row[m - 1] - prev[m - 1]) / factor;
                row.push(extrapolated);
            }
        }

        if row.len() >= 2 {
            let current = *row.last().unwrap();
            let previous = *table.last().unwrap().last().unwrap();
            let diff = (current - previous).abs();
            // Cancellation between the wings caps the attainable accuracy.
            let floor = cast::<T>(64.0) * T::epsilon() * wing_scale;
            let err = diff + wing_err + floor;
            match best {
                Some((_, best_err)) if err >= best_err => {}
                _ => best = Some((current, err)),
            }
            if level >= 2 && diff <= spec.tolerance_for(current).max(wing_err).max(floor) {
                return Ok(QuadratureResult::converged(current, err, nevals));
            }
        }

        table.push(row);
        eps = eps * cast(0.5);
    }

    let (value, err) = best.unwrap_or((T::nan(), T::infinity()));
    Ok(QuadratureResult {
        value,
        error_estimate: err,
        classification: Classification::Inconclusive,
        tail_coefficient: None,
        tail_exponent: None,
        n_evaluations: nevals,
    })
}
