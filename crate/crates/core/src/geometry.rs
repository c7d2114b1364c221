//! Unit-area spheres: sampling, chord distances, cap areas and the
//! geometric overlap factor F_p.
//!
//! The sphere `S^d` is embedded in `R^{d+1}` with radius `R(d)` chosen so
//! that its total surface area is 1. Distances are chord (embedding)
//! distances throughout, and a "cap of radius r" is `{y : |x - y| <= r}`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, GpmError, Result};
use crate::kernel::PreferenceKernel;

/// Number of inner Monte Carlo points used for lens areas when no closed
/// form is available (d >= 3).
pub const INNER_LENS_SAMPLES: usize = 10_000;

const BISECTION_MAX_ITERS: usize = 60;
const AREA_TOL: f64 = 1e-12;
const BISECTION_REL_TOL: f64 = 1e-10;

/// A point on the unit-area `S^d`, stored as its `d + 1` embedding
/// coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Intrinsic dimension `d` of the sphere the point lives on.
    pub fn dim(&self) -> usize {
        self.coords.len().saturating_sub(1)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// North pole `(0, .., 0, R)`.
    pub fn pole(d: usize) -> Self {
        let mut coords = vec![0.0; d + 1];
        coords[d] = unit_area_radius(d);
        Self { coords }
    }
}

/// Surface area of `S^d` with the given radius:
/// `2 pi^{(d+1)/2} / Gamma((d+1)/2) * R^d`.
pub fn surface_area(d: usize, radius: f64) -> f64 {
    let half = (d as f64 + 1.0) / 2.0;
    (2.0f64.ln() + half * PI.ln() - ln_gamma(half)).exp() * radius.powi(d as i32)
}

/// Radius of the `S^d` whose surface area is exactly 1.
pub fn unit_area_radius(d: usize) -> f64 {
    assert!(d >= 1, "sphere dimension must be at least 1");
    match d {
        1 => 1.0 / (2.0 * PI),
        2 => 1.0 / (4.0 * PI).sqrt(),
        _ => {
            let half = (d as f64 + 1.0) / 2.0;
            let log_area_unit = 2.0f64.ln() + half * PI.ln() - ln_gamma(half);
            (-log_area_unit / d as f64).exp()
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(invalid("sphere dimension must be at least 1"));
    }
    Ok(())
}

fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 > 1e-300 {
            return v;
        }
    }
}

/// Uniform point on the unit-area `S^d` (normalized isotropic Gaussian).
pub fn sample_uniform<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SpherePoint {
    let radius = unit_area_radius(d);
    let mut v = gaussian_vector(d + 1, rng);
    let scale = radius / v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x *= scale);
    SpherePoint { coords: v }
}

#[inline]
pub(crate) fn chord_distance_unchecked(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Euclidean distance between two points in the embedding space.
pub fn chord_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    if x.coords.len() != y.coords.len() {
        return Err(GpmError::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    Ok(chord_distance_unchecked(&x.coords, &y.coords))
}

/// Angular (polar) radius of a cap with chord radius `r` on `S^d`.
pub fn chord_to_angle(d: usize, r: f64) -> f64 {
    let radius = unit_area_radius(d);
    2.0 * (r / (2.0 * radius)).clamp(0.0, 1.0).asin()
}

/// Area fraction of a cap of chord radius `r`, as a function of
/// `x = sin^2(theta / 2) = (r / 2R)^2`.
fn cap_fraction_from_x(d: usize, x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    match d {
        1 => 2.0 / PI * x.sqrt().asin(),
        2 => x,
        _ => {
            if x == 0.0 {
                0.0
            } else if x == 1.0 {
                1.0
            } else {
                let a = d as f64 / 2.0;
                beta_reg(a, a, x)
            }
        }
    }
}

/// Exact area fraction of `{y : |x - y| <= r}` on the unit-area `S^d`.
///
/// Uses `I_{sin^2(theta/2)}(d/2, d/2)`, with the closed forms
/// `(2/pi) asin(pi r)` for d = 1 and `pi r^2` for d = 2.
pub fn cap_area_fraction(d: usize, r: f64) -> Result<f64> {
    check_dim(d)?;
    let radius = unit_area_radius(d);
    let diameter = 2.0 * radius;
    if !(r >= 0.0) || r > diameter * (1.0 + 1e-12) {
        return Err(invalid(format!("chord radius {r} outside [0, {diameter}] for d = {d}")));
    }
    if r >= diameter {
        return Ok(1.0);
    }
    if d == 2 {
        return Ok((PI * r * r).min(1.0));
    }
    let x = (r / diameter).powi(2);
    Ok(cap_fraction_from_x(d, x))
}

/// Chord radius whose cap has area fraction `p`, by bisection.
pub fn radius_for_area(d: usize, p: f64) -> Result<f64> {
    check_dim(d)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("area fraction {p} outside (0, 1]")));
    }
    let diameter = 2.0 * unit_area_radius(d);
    if p == 1.0 {
        return Ok(diameter);
    }
    let (mut lo, mut hi) = (0.0f64, diameter);
    for _ in 0..BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let area = cap_fraction_from_x(d, (mid / diameter).powi(2));
        if area < p {
            lo = mid;
        } else {
            hi = mid;
        }
        // Near the antipode the area is steep in r, so the residual is
        // checked as well.
        if hi - lo <= BISECTION_REL_TOL * hi && (area - p).abs() <= AREA_TOL {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Cap described by both its area fraction and its chord radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapSpec {
    pub d: usize,
    pub p: f64,
    pub r: f64,
}

impl CapSpec {
    pub fn from_area(d: usize, p: f64) -> Result<Self> {
        let r = radius_for_area(d, p)?;
        Ok(Self { d, p, r })
    }

    pub fn from_radius(d: usize, r: f64) -> Result<Self> {
        let p = cap_area_fraction(d, r)?;
        Ok(Self { d, p, r })
    }

    /// Polar angle of the cap boundary.
    pub fn angle(&self) -> f64 {
        chord_to_angle(self.d, self.r)
    }

    /// True when the cap is the whole sphere.
    pub fn is_full(&self) -> bool {
        self.p >= 1.0 || self.r >= 2.0 * unit_area_radius(self.d)
    }

    #[inline]
    pub fn contains_distance(&self, dist: f64) -> bool {
        self.is_full() || dist <= self.r
    }
}

/// Unit vector orthogonal to `axis` (both given as unit vectors), uniformly
/// distributed over the tangent directions.
fn tangent_direction<R: Rng + ?Sized>(axis: &[f64], rng: &mut R) -> Vec<f64> {
    loop {
        let mut w = gaussian_vector(axis.len(), rng);
        let dot: f64 = w.iter().zip(axis).map(|(a, b)| a * b).sum();
        w.iter_mut().zip(axis).for_each(|(a, b)| *a -= dot * b);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            w.iter_mut().for_each(|x| *x /= norm);
            return w;
        }
    }
}

/// Uniform point in the cap of chord radius `r` around `center`.
///
/// The polar angle has density proportional to `sin^{d-1}(phi)` on
/// `[0, theta]`; it is drawn by rejection from the `phi^{d-1}` envelope.
pub fn sample_in_cap<R: Rng + ?Sized>(center: &SpherePoint, r: f64, rng: &mut R) -> SpherePoint {
    let d = center.dim();
    let radius = unit_area_radius(d);
    let theta = chord_to_angle(d, r);
    let phi = loop {
        let u: f64 = rng.random();
        let phi = theta * u.powf(1.0 / d as f64);
        if d == 1 || phi == 0.0 {
            break phi;
        }
        let accept = (phi.sin() / phi).powi(d as i32 - 1);
        if rng.random::<f64>() < accept {
            break phi;
        }
    };
    let norm = center.norm();
    let axis: Vec<f64> = center.coords.iter().map(|c| c / norm).collect();
    let w = tangent_direction(&axis, rng);
    let (s, c) = phi.sin_cos();
    let coords = axis.iter().zip(&w).map(|(a, t)| radius * (c * a + s * t)).collect();
    SpherePoint { coords }
}

/// Area of the intersection of two caps of angular radius `theta <= pi/2`
/// whose centers are `gamma` apart, on the unit 2-sphere (area 4 pi).
fn lens_area_unit_s2(theta: f64, gamma: f64) -> f64 {
    if gamma <= 0.0 {
        return 2.0 * PI * (1.0 - theta.cos());
    }
    if gamma >= 2.0 * theta {
        return 0.0;
    }
    let (st, ct) = theta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    let a1 = ((cg - ct * ct) / (st * st)).clamp(-1.0, 1.0).acos();
    let a2 = ((ct - ct * cg) / (st * sg)).clamp(-1.0, 1.0).acos();
    (2.0 * (PI - a1 - 2.0 * ct * a2)).max(0.0)
}

/// Exact area fraction of `B(x, r) ∩ B(y, r)` for d = 1, 2 as a function
/// of the chord distance between the two centers. `None` for d >= 3.
pub fn lens_area_fraction(d: usize, r: f64, separation: f64) -> Option<f64> {
    let radius = unit_area_radius(d);
    let theta = chord_to_angle(d, r);
    let gamma = 2.0 * (separation / (2.0 * radius)).clamp(0.0, 1.0).asin();
    match d {
        1 => {
            let overlap = (2.0 * theta - gamma).max(0.0) + (2.0 * theta - (2.0 * PI - gamma)).max(0.0);
            Some((overlap / (2.0 * PI)).clamp(0.0, 1.0))
        }
        2 => {
            let total = 4.0 * PI;
            if theta <= PI / 2.0 {
                Some((lens_area_unit_s2(theta, gamma) / total).clamp(0.0, 1.0))
            } else {
                // Complements are caps of radius pi - theta around the
                // antipodes, which are the same distance apart.
                let comp = PI - theta;
                let cap_c = 2.0 * PI * (1.0 - comp.cos()) / total;
                let both_c = lens_area_unit_s2(comp, gamma) / total;
                Some((1.0 - 2.0 * cap_c + both_c).clamp(0.0, 1.0))
            }
        }
        _ => None,
    }
}

/// Mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub(crate) fn from_samples(values: impl IntoIterator<Item = f64>) -> Self {
        let mut count = 0usize;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for v in values {
            count += 1;
            let delta = v - mean;
            mean += delta / count as f64;
            m2 += delta * (v - mean);
        }
        let stderr = if count > 1 { (m2 / (count - 1) as f64 / count as f64).sqrt() } else { 0.0 };
        Self { mean, stderr }
    }
}

/// Monte Carlo estimate of
/// `F_p = E[ p^{-1} |B(V_i, r) ∩ B(V_j, r)| : V_j uniform in B(V_i, r) ]`.
pub fn estimate_fp<R: Rng + ?Sized>(d: usize, p: f64, samples: usize, rng: &mut R) -> Result<Estimate> {
    check_dim(d)?;
    if samples == 0 {
        return Err(invalid("estimate_fp needs at least one sample"));
    }
    let cap = CapSpec::from_area(d, p)?;
    if cap.is_full() {
        return Ok(Estimate { mean: 1.0, stderr: 0.0 });
    }
    let values = (0..samples).map(|_| {
        let vi = sample_uniform(d, rng);
        let vj = sample_in_cap(&vi, cap.r, rng);
        let sep = chord_distance_unchecked(&vi.coords, &vj.coords);
        match lens_area_fraction(d, cap.r, sep) {
            Some(lens) => lens / cap.p,
            None => {
                // |B_i ∩ B_j| / p = P(X in B_j | X uniform in B_i)
                let hits = (0..INNER_LENS_SAMPLES)
                    .filter(|_| {
                        let x = sample_in_cap(&vi, cap.r, rng);
                        chord_distance_unchecked(&x.coords, &vj.coords) <= cap.r
                    })
                    .count();
                hits as f64 / INNER_LENS_SAMPLES as f64
            }
        }
    });
    Ok(Estimate::from_samples(values.collect::<Vec<_>>()))
}

/// Monte Carlo estimates of `p = ∫ f(D(u,z)) du` and
/// `F = ∫∫ f(D(u,v)) f(D(v,z)) f(D(u,z)) du dv` for a general kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    pub p: Estimate,
    pub f: Estimate,
}

pub fn estimate_kernel_constants<R: Rng + ?Sized>(
    d: usize,
    kernel: &PreferenceKernel,
    samples: usize,
    rng: &mut R,
) -> Result<KernelConstants> {
    check_dim(d)?;
    kernel.validate()?;
    if samples == 0 {
        return Err(invalid("estimate_kernel_constants needs at least one sample"));
    }
    let z = sample_uniform(d, rng);
    let mut p_values = Vec::with_capacity(samples);
    let mut f_values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let u = sample_uniform(d, rng);
        let v = sample_uniform(d, rng);
        let fu = kernel.eval(chord_distance_unchecked(&u.coords, &z.coords));
        let fv = kernel.eval(chord_distance_unchecked(&v.coords, &z.coords));
        let fuv = kernel.eval(chord_distance_unchecked(&u.coords, &v.coords));
        p_values.push(fu);
        f_values.push(fu * fv * fuv);
    }
    Ok(KernelConstants { p: Estimate::from_samples(p_values), f: Estimate::from_samples(f_values) })
}
