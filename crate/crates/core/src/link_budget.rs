//! Radar cross section of a flat plate, per-path gain and the incoherent
//! multi-reflector receive power.
//!
//! All powers are in watts; dBm only appears through [`watts_to_dbm`] and
//! [`dbm_to_watts`]. Antenna gains are unity.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{ReflectorError, Result};
use crate::geometry::{PathGeometry, PlanarPoint, ReflectorDims, ReflectorPose};

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Array factor `sinc²(π L̄1 Δ)`.
pub fn array_factor(l1_bar: f64, delta: f64) -> f64 {
    sinc(PI * l1_bar * delta).powi(2)
}

/// A per-reflector quantity that is forced to zero when the transmitter and
/// the receiver are not on the plate's front side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gated {
    pub value: f64,
    pub feasible: bool,
}

/// Radar cross section `σ_max · η · sinc²(π L̄1 Δ)` seen at `r`.
pub fn rcs(dims: &ReflectorDims, tx: PlanarPoint, pose: ReflectorPose, r: PlanarPoint) -> Result<Gated> {
    let g = PathGeometry::new(tx, pose.x, r)?;
    Ok(rcs_from_geometry(dims, &g, pose.omega))
}

fn rcs_from_geometry(dims: &ReflectorDims, g: &PathGeometry, omega: f64) -> Gated {
    if !g.same_side(omega) {
        return Gated { value: 0.0, feasible: false };
    }
    let sigma = dims.sigma_max() * g.eta(omega) * array_factor(dims.l1_bar(), g.delta(omega));
    Gated { value: sigma, feasible: true }
}

/// `σ / (d_t² d_r²)`, the per-path term of the receive power.
pub fn path_gain(tx: PlanarPoint, pose: ReflectorPose, r: PlanarPoint, dims: &ReflectorDims) -> Result<Gated> {
    let g = PathGeometry::new(tx, pose.x, r)?;
    let sigma = rcs_from_geometry(dims, &g, pose.omega);
    Ok(Gated { value: sigma.value / (g.d_t * g.d_t * g.d_r * g.d_r), feasible: sigma.feasible })
}

/// Transmit side of the link budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudgetConfig {
    /// Transmit power in watts.
    pub tx_power: f64,
    pub dims: ReflectorDims,
    pub tx: PlanarPoint,
}

impl LinkBudgetConfig {
    pub fn new(tx_power: f64, dims: ReflectorDims, tx: PlanarPoint) -> Result<Self> {
        if !(tx_power.is_finite() && tx_power > 0.0) {
            return Err(ReflectorError::NonPositivePower(tx_power));
        }
        Ok(Self { tx_power, dims, tx })
    }

    /// `P_t λ² / (4π)³`, the factor in front of the summed path gains.
    pub fn power_scale(&self) -> f64 {
        self.tx_power * self.dims.wavelength.powi(2) / (4.0 * PI).powi(3)
    }
}

/// Receive power at one location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample {
    pub location: PlanarPoint,
    /// Expected receive power (W).
    pub power: f64,
    /// `Σ_m sinc²(π L̄1 Δ_m)` over feasible reflectors.
    pub reflection_gain: f64,
    /// False if any reflector violated the same-side condition here.
    pub feasible: bool,
}

impl PowerSample {
    /// Receive power in dBm, `None` for zero power.
    pub fn power_dbm(&self) -> Option<f64> {
        watts_to_dbm(self.power).ok()
    }
}

/// Expected receive power with independent uniformly random path phases:
/// the incoherent sum of the per-reflector powers. Infeasible or degenerate
/// reflector/location pairs contribute nothing and clear `feasible`.
pub fn receive_power(cfg: &LinkBudgetConfig, poses: &[ReflectorPose], r: PlanarPoint) -> PowerSample {
    let l1_bar = cfg.dims.l1_bar();
    let mut total = 0.0;
    let mut gain = 0.0;
    let mut feasible = true;
    for pose in poses {
        let Ok(g) = PathGeometry::new(cfg.tx, pose.x, r) else {
            feasible = false;
            continue;
        };
        let sigma = rcs_from_geometry(&cfg.dims, &g, pose.omega);
        if !sigma.feasible {
            feasible = false;
            continue;
        }
        total += sigma.value / (g.d_t * g.d_t * g.d_r * g.d_r);
        gain += array_factor(l1_bar, g.delta(pose.omega));
    }
    PowerSample { location: r, power: cfg.power_scale() * total, reflection_gain: gain, feasible }
}

/// `Σ_m sinc²(π L̄1 Δ_m)` at `r`, summed over the reflectors for which the
/// same-side condition holds. Matches [`PowerSample::reflection_gain`].
pub fn reflection_gain(tx: PlanarPoint, poses: &[ReflectorPose], r: PlanarPoint, l1_bar: f64) -> f64 {
    let mut gain = 0.0;
    for pose in poses {
        let Ok(g) = PathGeometry::new(tx, pose.x, r) else {
            continue;
        };
        if g.same_side(pose.omega) {
            gain += array_factor(l1_bar, g.delta(pose.omega));
        }
    }
    gain
}

pub fn watts_to_dbm(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(ReflectorError::NonPositivePower(p));
    }
    Ok(10.0 * (p * 1e3).log10())
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Averages `|Σ_m √P_m e^{jφ_m}|²` over `draws` independent uniform phase
/// draws. Converges to `Σ_m P_m`.
pub fn random_phase_power<R: Rng + ?Sized>(powers: &[f64], draws: usize, rng: &mut R) -> f64 {
    if draws == 0 {
        return 0.0;
    }
    let amps: Vec<f64> = powers.iter().map(|p| p.sqrt()).collect();
    let mut acc = 0.0;
    for _ in 0..draws {
        let (mut re, mut im) = (0.0, 0.0);
        for a in &amps {
            let (s, c) = rng.gen_range(0.0..2.0 * PI).sin_cos();
            re += a * c;
            im += a * s;
        }
        acc += re * re + im * im;
    }
    acc / draws as f64
}
