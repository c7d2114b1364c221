//! Leading-order predictions for triangle counts, maximum degree,
//! connectivity, the weight normalizer `L(n)` and slot-event probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, GpmError, Result};
use crate::generator::GpmParams;

/// Coefficient of `ln n` in the triangle count `T_n`:
/// `m(m-1)(1+δ)²(m(1+δ)+1) F_p / ((2+δ) δ² p)`.
pub fn triangle_slope(params: &GpmParams, fp: f64) -> Result<f64> {
    params.validate()?;
    if !(fp > 0.0 && fp <= 1.0) {
        return Err(invalid(format!("F_p must lie in (0, 1], got {fp}")));
    }
    Ok(triangle_prefactor(params) * fp / params.p)
}

/// Same coefficient for a general kernel with integrals `p = ∫f` and `F`:
/// `(F / p³) m(m-1)(1+δ)²(m(1+δ)+1) / ((2+δ) δ²)`. Here `params.p` is `∫f`.
pub fn triangle_slope_general(params: &GpmParams, f_integral: f64) -> Result<f64> {
    params.validate()?;
    if !(f_integral >= 0.0) {
        return Err(invalid(format!("F must be non-negative, got {f_integral}")));
    }
    Ok(triangle_prefactor(params) * f_integral / params.p.powi(3))
}

fn triangle_prefactor(params: &GpmParams) -> f64 {
    let m = params.m as f64;
    let delta = params.delta;
    m * (m - 1.0) * (1.0 + delta).powi(2) * (m * (1.0 + delta) + 1.0) / ((2.0 + delta) * delta * delta)
}

/// `ln(1/p)^{(1+δ)/(2+δ)} (np)^{1/(2+δ)}`; the log factor is taken as 1 at
/// `p = 1`, where it would vanish.
pub fn max_degree_scale(params: &GpmParams, n: u64) -> Result<f64> {
    params.validate()?;
    let delta = params.delta;
    let log_factor = if params.p < 1.0 { (1.0 / params.p).ln().powf((1.0 + delta) / (2.0 + delta)) } else { 1.0 };
    Ok(log_factor * (n as f64 * params.p).powf(1.0 / (2.0 + delta)))
}

/// Exponent of `n` in the maximum degree, `1/(2+δ)`.
pub fn max_degree_exponent(delta: f64) -> f64 {
    1.0 / (2.0 + delta)
}

/// Connectivity scale variable `p^{m/(m-1)} n`.
pub fn connectivity_scale(params: &GpmParams, n: u64) -> Result<f64> {
    params.validate()?;
    if params.m < 2 {
        return Err(invalid("the connectivity scale needs m >= 2"));
    }
    let m = params.m as f64;
    Ok(params.p.powf(m / (m - 1.0)) * n as f64)
}

/// `E L(n) = (2+δ) m p n`.
pub fn expected_l(params: &GpmParams, n: u64) -> Result<f64> {
    params.validate()?;
    Ok((2.0 + params.delta) * params.m as f64 * params.p * n as f64)
}

/// `[(2+δ-ε) m p n, (2+δ+ε) m p n]`.
pub fn concentration_band(params: &GpmParams, n: u64, eps: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(eps > 0.0 && eps < 2.0 + params.delta) {
        return Err(invalid(format!("eps must lie in (0, 2 + delta), got {eps}")));
    }
    let scale = params.m as f64 * params.p * n as f64;
    Ok(((2.0 + params.delta - eps) * scale, (2.0 + params.delta + eps) * scale))
}

/// The event `v_{b,t} = V_a`: slot `t` of vertex `b` attaches to `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotEvent {
    pub a: u32,
    pub b: u32,
    pub t: u32,
}

impl SlotEvent {
    pub fn new(a: u32, b: u32, t: u32) -> Self {
        Self { a, b, t }
    }
}

pub(crate) fn check_events(events: &[SlotEvent], m: usize) -> Result<()> {
    for (i, e) in events.iter().enumerate() {
        if e.a == 0 || e.a > e.b {
            return Err(GpmError::InvalidEvent(format!("event ({}, {}, {}) needs 1 <= a <= b", e.a, e.b, e.t)));
        }
        if e.t == 0 || e.t as usize > m {
            return Err(GpmError::InvalidEvent(format!("slot {} outside 1..={m}", e.t)));
        }
        if events[..i].iter().any(|o| o.b == e.b && o.t == e.t) {
            return Err(GpmError::InvalidEvent(format!("slot ({}, {}) listed twice", e.b, e.t)));
        }
    }
    Ok(())
}

/// Leading-order probability that all slot events hold:
///
/// ```text
/// P(A) · Π_i ((1+δ)m + #{j < i : a_j = a_i}) / ((2+δ) m p) · b_i^{-(1+δ)/(2+δ)} a_i^{-1/(2+δ)}
/// ```
///
/// `geometry_prob` is the probability `P(A)` that the positions permit
/// every edge (`p` for one edge, `p² F_p` for a triangle). Each factor
/// carries `1/p` because the normalizer `L(b)` is about `(2+δ) m p b`, so a
/// single event comes out independent of `p`.
pub fn eq31_probability(params: &GpmParams, events: &[SlotEvent], geometry_prob: f64) -> Result<f64> {
    params.validate()?;
    check_events(events, params.m)?;
    if !(0.0..=1.0).contains(&geometry_prob) {
        return Err(invalid(format!("geometry_prob must lie in [0, 1], got {geometry_prob}")));
    }
    let m = params.m as f64;
    let delta = params.delta;
    let mut value = geometry_prob;
    for (i, e) in events.iter().enumerate() {
        let repeats = events[..i].iter().filter(|o| o.a == e.a).count() as f64;
        value *= ((1.0 + delta) * m + repeats) / ((2.0 + delta) * m * params.p)
            * (e.b as f64).powf(-(1.0 + delta) / (2.0 + delta))
            * (e.a as f64).powf(-1.0 / (2.0 + delta));
    }
    Ok(value)
}

/// Triangle count of the non-geometric model (`p = 1`) at `n`:
/// `triangle_slope(p = 1, F_p = 1) · ln n`.
pub fn triangle_expectation_pam_reference(params: &GpmParams, n: u64) -> Result<f64> {
    let pam = GpmParams { p: 1.0, ..params.clone() };
    Ok(triangle_slope(&pam, 1.0)? * (n as f64).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub name: String,
    pub value: f64,
    pub form: String,
}

fn prediction(name: &str, value: f64, form: &str) -> Prediction {
    Prediction { name: name.into(), value, form: form.into() }
}

/// Every prediction available for `params`. `n`-dependent entries are
/// included when `n` is given; the connectivity scale needs `m >= 2`.
pub fn predict_all(params: &GpmParams, fp: f64, n: Option<u64>) -> Result<Vec<Prediction>> {
    let mut out = vec![
        prediction("triangle_slope", triangle_slope(params, fp)?, "coefficient of ln n in T_n"),
        prediction("triangle_ratio_to_pam", fp / params.p, "T_n relative to the p = 1 model, F_p / p"),
        prediction("max_degree_exponent", max_degree_exponent(params.delta), "exponent of n in the maximum degree"),
    ];
    if let Some(n) = n {
        out.push(prediction(
            "max_degree_scale",
            max_degree_scale(params, n)?,
            "ln(1/p)^((1+delta)/(2+delta)) (np)^(1/(2+delta)), log factor 1 at p = 1",
        ));
        if params.m >= 2 {
            out.push(prediction("connectivity_scale", connectivity_scale(params, n)?, "scale variable p^(m/(m-1)) n"));
        }
        out.push(prediction("expected_l", expected_l(params, n)?, "(2+delta) m p n"));
        out.push(prediction(
            "triangle_expectation",
            triangle_slope(params, fp)? * (n as f64).ln(),
            "triangle_slope * ln n",
        ));
        out.push(prediction(
            "triangle_expectation_pam",
            triangle_expectation_pam_reference(params, n)?,
            "p = 1 triangle_slope * ln n",
        ));
    }
    Ok(out)
}
