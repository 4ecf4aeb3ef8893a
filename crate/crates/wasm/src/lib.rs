//! Browser bindings for the planner demo page.
//!
//! Each operation has a plain Rust function (tested natively) and a thin
//! `wasm_bindgen` wrapper. Results are flat `f64` arrays so they cross into
//! JavaScript as `Float64Array`s without serialization.

use reflector_core::coverage::{display_dbm, evaluate_field};
use reflector_core::fr::{default_search_interval, fr_single_target, optimal_rotation, sequential_fr_area};
use reflector_core::link_budget::dbm_to_watts;
use reflector_core::mr::{sequential_mr_area_placement, specular_placement};
use reflector_core::search::grid_points;
use reflector_core::{receive_power, LinkBudgetConfig, PlannerOptions, ReflectorDims, ReflectorPose, TargetArea, Vec2};
use wasm_bindgen::prelude::*;

const WAVELENGTH: f64 = 299_792_458.0 / 2.4e9;
const TX_POWER_DBM: f64 = 30.0;

fn config(tx: Vec2, l1_wavelengths: f64) -> Result<LinkBudgetConfig, String> {
    let dims = ReflectorDims::from_wavelengths(l1_wavelengths, 5.0, WAVELENGTH).map_err(|e| e.to_string())?;
    LinkBudgetConfig::new(dbm_to_watts(TX_POWER_DBM), dims, tx).map_err(|e| e.to_string())
}

/// A planned layout and its coverage map.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMap {
    pub nx: usize,
    pub ny: usize,
    /// Receive power (dBm) per grid point, row-major from the lower-left
    /// corner with x varying fastest.
    pub dbm: Vec<f64>,
    pub poses: Vec<ReflectorPose>,
}

impl GainMap {
    /// `[nx, ny, count, x0, ω0, …, p0, p1, …]`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = vec![self.nx as f64, self.ny as f64, self.poses.len() as f64];
        out.extend(self.poses.iter().flat_map(|p| [p.x, p.omega]));
        out.extend_from_slice(&self.dbm);
        out
    }
}

/// Plans plates for a rectangular area and evaluates the coverage map.
pub fn plan_gain_map(
    rotatable: bool,
    tx: Vec2,
    area: TargetArea,
    l1_wavelengths: f64,
    step: f64,
) -> Result<GainMap, String> {
    let cfg = config(tx, l1_wavelengths)?;
    let opts = PlannerOptions { coverage_step: step, ..PlannerOptions::default() };
    opts.validate().map_err(|e| e.to_string())?;
    let poses = if rotatable {
        sequential_fr_area(tx, &area, &cfg.dims, &opts).map_err(|e| e.to_string())?.poses
    } else {
        sequential_mr_area_placement(tx, &area, &cfg.dims, &opts).map_err(|e| e.to_string())?.poses
    };
    let field = evaluate_field(&cfg, &poses, &area, step).map_err(|e| e.to_string())?;
    let dbm = field.samples.iter().map(|s| display_dbm(s.power)).collect();
    Ok(GainMap { nx: field.nx, ny: field.ny, dbm, poses })
}

/// Single-plate receive power versus plate position: `[x0, p0, x1, p1, …]`
/// in meters and dBm. Rotatable plates use their best tilt at each `x`.
pub fn power_sweep(rotatable: bool, tx: Vec2, r: Vec2, l1_wavelengths: f64, step: f64) -> Result<Vec<f64>, String> {
    let cfg = config(tx, l1_wavelengths)?;
    let (lo, hi) = default_search_interval(tx, r);
    let xs = grid_points(lo, hi, step).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * xs.len());
    for x in xs {
        let omega = if rotatable { optimal_rotation(tx, x, r).map_err(|e| e.to_string())? } else { 0.0 };
        out.push(x);
        out.push(display_dbm(receive_power(&cfg, &[ReflectorPose::new(x, omega)], r).power));
    }
    Ok(out)
}

/// Best single plate for one receiver:
/// `[x_fixed, p_fixed, x_rot, ω_rot, p_rot]` (m, dBm, m, rad, dBm).
pub fn single_target(tx: Vec2, r: Vec2, l1_wavelengths: f64, step: f64) -> Result<[f64; 5], String> {
    let cfg = config(tx, l1_wavelengths)?;
    let x = specular_placement(tx, r).map_err(|e| e.to_string())?;
    let rot = fr_single_target(tx, r, default_search_interval(tx, r), step).map_err(|e| e.to_string())?;
    let p = |pose| display_dbm(receive_power(&cfg, &[pose], r).power);
    Ok([x, p(ReflectorPose::unrotated(x)), rot.x, rot.omega, p(rot)])
}

fn js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

#[wasm_bindgen(js_name = gainMap)]
#[allow(clippy::too_many_arguments)]
pub fn gain_map_js(
    rotatable: bool,
    tx_x: f64,
    tx_y: f64,
    cx: f64,
    cy: f64,
    dx: f64,
    dy: f64,
    l1_wavelengths: f64,
    step: f64,
) -> Result<Vec<f64>, JsValue> {
    let area = TargetArea::new(Vec2::new(cx, cy), dx, dy).map_err(|e| js(e.to_string()))?;
    plan_gain_map(rotatable, Vec2::new(tx_x, tx_y), area, l1_wavelengths, step).map(|m| m.to_flat()).map_err(js)
}

#[wasm_bindgen(js_name = powerSweep)]
pub fn power_sweep_js(
    rotatable: bool,
    tx_x: f64,
    tx_y: f64,
    r_x: f64,
    r_y: f64,
    l1_wavelengths: f64,
    step: f64,
) -> Result<Vec<f64>, JsValue> {
    power_sweep(rotatable, Vec2::new(tx_x, tx_y), Vec2::new(r_x, r_y), l1_wavelengths, step).map_err(js)
}

#[wasm_bindgen(js_name = singleTarget)]
pub fn single_target_js(
    tx_x: f64,
    tx_y: f64,
    r_x: f64,
    r_y: f64,
    l1_wavelengths: f64,
    step: f64,
) -> Result<Vec<f64>, JsValue> {
    single_target(Vec2::new(tx_x, tx_y), Vec2::new(r_x, r_y), l1_wavelengths, step).map(|a| a.to_vec()).map_err(js)
}
