use std::path::Path;

use reflector_core::coverage::Target;
use reflector_core::link_budget::dbm_to_watts;
use reflector_core::{LinkBudgetConfig, PlannerOptions, ReflectorDims, TargetArea, Vec2};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectorSection {
    #[serde(default = "default_l1")]
    pub l1_wavelengths: f64,
    #[serde(default = "default_l2")]
    pub l2_wavelengths: f64,
}

impl Default for ReflectorSection {
    fn default() -> Self {
        Self { l1_wavelengths: default_l1(), l2_wavelengths: default_l2() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaSection {
    pub cx: f64,
    pub cy: f64,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub point: Option<Point>,
    pub area: Option<AreaSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    #[serde(default = "default_grid_step")]
    pub grid_step_m: f64,
    #[serde(default = "default_search_step")]
    pub search_step_m: f64,
    #[serde(default = "default_max_reflectors")]
    pub max_reflectors: usize,
    #[serde(default = "default_region_size")]
    pub region_size_m: f64,
}

impl Default for OptionsSection {
    fn default() -> Self {
        Self {
            grid_step_m: default_grid_step(),
            search_step_m: default_search_step(),
            max_reflectors: default_max_reflectors(),
            region_size_m: default_region_size(),
        }
    }
}

/// A scenario as written on disk, with defaults filled in.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    #[serde(default = "default_power")]
    pub tx_power_dbm: f64,
    pub tx: Point,
    #[serde(default)]
    pub reflector: ReflectorSection,
    pub target: TargetSection,
    #[serde(default)]
    pub options: OptionsSection,
}

fn default_carrier() -> f64 {
    2.4e9
}
fn default_power() -> f64 {
    30.0
}
fn default_l1() -> f64 {
    10.0
}
fn default_l2() -> f64 {
    5.0
}
fn default_grid_step() -> f64 {
    PlannerOptions::default().grid_step
}
fn default_search_step() -> f64 {
    PlannerOptions::default().search_step
}
fn default_max_reflectors() -> usize {
    5
}
fn default_region_size() -> f64 {
    200.0
}

/// Validated scenario plus the derived quantities the planners need.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub wavelength: f64,
    pub dims: ReflectorDims,
    pub tx: Vec2,
    pub target: Target,
    /// Hex SHA-256 of the source text.
    pub hash: String,
}

impl Scenario {
    pub fn link_budget(&self) -> LinkBudgetConfig {
        LinkBudgetConfig::new(dbm_to_watts(self.file.tx_power_dbm), self.dims, self.tx)
            .expect("transmit power validated at parse time")
    }

    pub fn planner_options(&self) -> PlannerOptions {
        PlannerOptions {
            search_step: self.file.options.search_step_m,
            grid_step: self.file.options.grid_step_m,
            ..PlannerOptions::default()
        }
    }
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_scenario_str(&text).map_err(|e| match e {
        CliError::Parse { message, .. } => CliError::Parse { path: path.display().to_string(), message },
        other => other,
    })
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario, CliError> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| CliError::Parse { path: "<input>".into(), message: e.to_string() })?;
    validate(file, text)
}

fn invalid(field: &'static str, reason: impl Into<String>) -> CliError {
    CliError::Invalid { field, reason: reason.into() }
}

fn positive(field: &'static str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be a positive number, got {v}")))
    }
}

fn below_axis(field: &'static str, p: Vec2) -> Result<(), CliError> {
    if !(p.x.is_finite() && p.y.is_finite()) {
        return Err(invalid(field, "coordinates must be finite"));
    }
    if p.y >= 0.0 {
        return Err(invalid(field, format!("must lie below the wall (y < 0), got y = {}", p.y)));
    }
    Ok(())
}

fn validate(file: ScenarioFile, text: &str) -> Result<Scenario, CliError> {
    positive("carrier_hz", file.carrier_hz)?;
    if !file.tx_power_dbm.is_finite() {
        return Err(invalid("tx_power_dbm", "must be finite"));
    }
    positive("reflector.l1_wavelengths", file.reflector.l1_wavelengths)?;
    positive("reflector.l2_wavelengths", file.reflector.l2_wavelengths)?;
    positive("options.grid_step_m", file.options.grid_step_m)?;
    positive("options.search_step_m", file.options.search_step_m)?;
    if file.options.max_reflectors == 0 {
        return Err(invalid("options.max_reflectors", "must be at least 1"));
    }
    if !(file.options.region_size_m.is_finite() && file.options.region_size_m >= 0.0) {
        return Err(invalid("options.region_size_m", "must be non-negative"));
    }

    let tx = Vec2::new(file.tx.x, file.tx.y);
    below_axis("tx", tx)?;

    let target = match (file.target.point, file.target.area) {
        (Some(_), Some(_)) => return Err(invalid("target", "give either target.point or target.area, not both")),
        (None, None) => return Err(invalid("target", "one of target.point or target.area is required")),
        (Some(p), None) => {
            let r = Vec2::new(p.x, p.y);
            below_axis("target.point", r)?;
            Target::Point(r)
        }
        (None, Some(a)) => {
            let area = TargetArea::new(Vec2::new(a.cx, a.cy), a.dx, a.dy)
                .map_err(|e| invalid("target.area", e.to_string()))?;
            if !area.is_below_axis() {
                return Err(invalid("target.area", "the whole area must lie below the wall (y < 0)"));
            }
            Target::Area(area)
        }
    };

    let wavelength = SPEED_OF_LIGHT / file.carrier_hz;
    let dims =
        ReflectorDims::from_wavelengths(file.reflector.l1_wavelengths, file.reflector.l2_wavelengths, wavelength)
            .map_err(|e| invalid("reflector", e.to_string()))?;

    let hash = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Scenario { file, wavelength, dims, tx, target, hash })
}
