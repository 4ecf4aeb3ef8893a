use rand::rngs::StdRng;
use rand::SeedableRng;
use reflector_core::coverage::{
    benchmark_poses, display_dbm, empirical_cdf, evaluate_field, median, region_sweep, worst_case_power,
    BenchmarkScheme, Target,
};
use reflector_core::fr::{
    default_search_interval, fr_single_target, multi_fr_single_target, optimal_rotation, sequential_fr_area,
    single_fr_area,
};
use reflector_core::link_budget::random_phase_power;
use reflector_core::mr::{
    multi_mr_single_target, sequential_mr_area_placement, single_mr_area_placement, small_reflector_placement,
    specular_placement, Lobe,
};
use reflector_core::search::grid_points;
use reflector_core::{receive_power, PlanarPoint, PlannerOptions, ReflectorPose, TargetArea};

use crate::error::CliError;
use crate::scenario::Scenario;
use crate::table::{deg, num, sci, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SweepMr,
    SweepFr,
    SingleTarget,
    AreaMr,
    AreaFr,
    PlanMr,
    PlanFr,
    GainMap,
    Cdf,
    RegionSweep,
    Benchmarks,
    PhaseCheck,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Self::SweepMr,
        Self::SweepFr,
        Self::SingleTarget,
        Self::AreaMr,
        Self::AreaFr,
        Self::PlanMr,
        Self::PlanFr,
        Self::GainMap,
        Self::Cdf,
        Self::RegionSweep,
        Self::Benchmarks,
        Self::PhaseCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SweepMr => "sweep-mr",
            Self::SweepFr => "sweep-fr",
            Self::SingleTarget => "single-target",
            Self::AreaMr => "area-mr",
            Self::AreaFr => "area-fr",
            Self::PlanMr => "plan-mr",
            Self::PlanFr => "plan-fr",
            Self::GainMap => "gain-map",
            Self::Cdf => "cdf",
            Self::RegionSweep => "region-sweep",
            Self::Benchmarks => "benchmarks",
            Self::PhaseCheck => "phase-check",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Planner {
    #[default]
    Mr,
    Fr,
}

/// Flags that only some subcommands read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub seed: u64,
    pub draws: usize,
    pub planner: Planner,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { seed: 0, draws: 100_000, planner: Planner::Mr }
    }
}

/// Result of one subcommand: the data table and human-readable notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
}

impl Report {
    fn new(table: Table) -> Self {
        Self { table, notes: Vec::new() }
    }
}

pub const POSE_COLUMNS: [&str; 8] =
    ["index", "x_m", "omega_rad", "omega_deg", "lobe_left_x", "lobe_left_y", "lobe_right_x", "lobe_right_y"];

fn point_target(s: &Scenario, command: Command) -> Result<PlanarPoint, CliError> {
    match s.target {
        Target::Point(r) => Ok(r),
        Target::Area(_) => Err(CliError::WrongTarget { command: command.name(), expected: "a point" }),
    }
}

fn area_target(s: &Scenario, command: Command) -> Result<TargetArea, CliError> {
    match s.target {
        Target::Area(a) => Ok(a),
        Target::Point(_) => Err(CliError::WrongTarget { command: command.name(), expected: "an area" }),
    }
}

pub fn pose_table(poses: &[ReflectorPose], lobes: &[Lobe]) -> Table {
    let mut t = Table::new(&POSE_COLUMNS);
    for (i, (p, l)) in poses.iter().zip(lobes).enumerate() {
        t.push(vec![
            i.to_string(),
            num(p.x),
            num(p.omega),
            deg(p.omega),
            num(l.left.x),
            num(l.left.y),
            num(l.right.x),
            num(l.right.y),
        ]);
    }
    t
}

fn dbm(p: f64) -> String {
    num(display_dbm(p))
}

pub fn run(command: Command, s: &Scenario, settings: &RunSettings) -> Result<Report, CliError> {
    let cfg = s.link_budget();
    let opts = s.planner_options();
    opts.validate()?;
    match command {
        Command::SweepMr | Command::SweepFr => {
            let r = point_target(s, command)?;
            let (lo, hi) = default_search_interval(s.tx, r);
            let rotate = command == Command::SweepFr;
            let mut t = Table::new(if rotate {
                &["x_m", "omega_rad", "omega_deg", "power_dbm"]
            } else {
                &["x_m", "power_dbm"]
            });
            for x in grid_points(lo, hi, opts.search_step)? {
                if rotate {
                    let omega = optimal_rotation(s.tx, x, r)?;
                    let p = receive_power(&cfg, &[ReflectorPose::new(x, omega)], r).power;
                    t.push(vec![num(x), num(omega), deg(omega), dbm(p)]);
                } else {
                    let p = receive_power(&cfg, &[ReflectorPose::unrotated(x)], r).power;
                    t.push(vec![num(x), dbm(p)]);
                }
            }
            Ok(Report::new(t))
        }
        Command::SingleTarget => single_target(s, &opts),
        Command::AreaMr | Command::AreaFr => {
            let area = area_target(s, command)?;
            let sol = if command == Command::AreaMr {
                single_mr_area_placement(s.tx, &area, &s.dims, &opts)?
            } else {
                single_fr_area(s.tx, &area, &s.dims, None, &opts)?
            };
            let mut report = Report::new(pose_table(&sol.poses, &sol.lobes));
            let wc = worst_case_power(&cfg, &sol.poses, &area, opts.coverage_step)?;
            report.notes.push(format!("worst-case power {:.2} dBm", display_dbm(wc)));
            Ok(report)
        }
        Command::PlanMr | Command::PlanFr => {
            let area = area_target(s, command)?;
            let (poses, lobes, mut report_notes) = plan(command == Command::PlanFr, s, &area, &opts)?;
            let mut report = Report::new(pose_table(&poses, &lobes));
            let field = evaluate_field(&cfg, &poses, &area, opts.coverage_step)?;
            report.notes.push(format!("{} reflectors", poses.len()));
            report.notes.push(format!("minimum reflection gain {:.4}", field.min_gain()));
            report.notes.append(&mut report_notes);
            Ok(report)
        }
        Command::GainMap => {
            let area = area_target(s, command)?;
            let (poses, _, _) = plan(settings.planner == Planner::Fr, s, &area, &opts)?;
            let field = evaluate_field(&cfg, &poses, &area, opts.coverage_step)?;
            let mut t = Table::new(&["x_m", "y_m", "power_dbm", "reflection_gain", "feasible"]);
            for smp in &field.samples {
                t.push(vec![
                    num(smp.location.x),
                    num(smp.location.y),
                    dbm(smp.power),
                    num(smp.reflection_gain),
                    smp.feasible.to_string(),
                ]);
            }
            Ok(Report::new(t))
        }
        Command::Cdf => {
            let area = area_target(s, command)?;
            let mut t = Table::new(&["scheme", "power_dbm", "cdf"]);
            for (name, poses) in area_schemes(s, &area, &opts)? {
                let field = evaluate_field(&cfg, &poses, &area, opts.coverage_step)?;
                for (p, f) in empirical_cdf(&field) {
                    t.push(vec![name.to_string(), num(p), num(f)]);
                }
            }
            Ok(Report::new(t))
        }
        Command::RegionSweep => {
            let r = point_target(s, command)?;
            let size = s.file.options.region_size_m;
            let sizes: Vec<f64> = (0..=20).map(|i| size * i as f64 / 20.0).collect();
            let mut t = Table::new(&["region_size_m", "fpr_dbm", "fprr_dbm", "mr_dbm", "fr_dbm"]);
            for row in region_sweep(&cfg, r, s.tx.x, &sizes, &opts)? {
                t.push(vec![num(row.size), dbm(row.fpr), dbm(row.fprr), dbm(row.mr), dbm(row.fr)]);
            }
            Ok(Report::new(t))
        }
        Command::Benchmarks => benchmarks(s, &opts),
        Command::PhaseCheck => {
            let r = point_target(s, command)?;
            let sol = multi_mr_single_target(s.tx, r, &s.dims, s.file.options.max_reflectors)?;
            let powers: Vec<f64> =
                sol.poses.iter().map(|p| receive_power(&cfg, std::slice::from_ref(p), r).power).collect();
            let expected: f64 = powers.iter().sum();
            let mut rng = StdRng::seed_from_u64(settings.seed);
            let mc = random_phase_power(&powers, settings.draws, &mut rng);
            let mut t =
                Table::new(&["reflectors", "draws", "seed", "monte_carlo_w", "incoherent_sum_w", "relative_error"]);
            t.push(vec![
                powers.len().to_string(),
                settings.draws.to_string(),
                settings.seed.to_string(),
                sci(mc),
                sci(expected),
                num((mc - expected).abs() / expected),
            ]);
            Ok(Report::new(t))
        }
    }
}

/// Poses, their lobe anchors and warnings for the report.
type PlanOutput = (Vec<ReflectorPose>, Vec<Lobe>, Vec<String>);

fn plan(rotatable: bool, s: &Scenario, area: &TargetArea, opts: &PlannerOptions) -> Result<PlanOutput, CliError> {
    if rotatable {
        let p = sequential_fr_area(s.tx, area, &s.dims, opts)?;
        let mut notes = Vec::new();
        if p.same_side_violations > 0 {
            notes.push(format!("{} plate/receiver pairs violate the same-side condition", p.same_side_violations));
        }
        Ok((p.poses, p.lobe_anchors, notes))
    } else {
        let p = sequential_mr_area_placement(s.tx, area, &s.dims, opts)?;
        Ok((p.poses, p.lobes, Vec::new()))
    }
}

/// The sequential plans and equal-spacing layouts with the same plate counts.
fn area_schemes(
    s: &Scenario,
    area: &TargetArea,
    opts: &PlannerOptions,
) -> Result<Vec<(&'static str, Vec<ReflectorPose>)>, CliError> {
    let (mr, _, _) = plan(false, s, area, opts)?;
    let (fr, _, _) = plan(true, s, area, opts)?;
    let target = Target::Area(*area);
    let es_mr = benchmark_poses(BenchmarkScheme::EqualSpacingMr { count: mr.len() }, s.tx, &target, &s.dims, opts)?;
    let es_fr = benchmark_poses(BenchmarkScheme::EqualSpacingFr { count: fr.len() }, s.tx, &target, &s.dims, opts)?;
    Ok(vec![("plan_mr", mr), ("plan_fr", fr), ("equal_spacing_mr", es_mr), ("equal_spacing_fr", es_fr)])
}

fn single_target(s: &Scenario, opts: &PlannerOptions) -> Result<Report, CliError> {
    let r = point_target(s, Command::SingleTarget)?;
    let cfg = s.link_budget();
    let m = s.file.options.max_reflectors;
    let schemes: Vec<(&str, Vec<ReflectorPose>)> = vec![
        ("specular", vec![ReflectorPose::unrotated(specular_placement(s.tx, r)?)]),
        ("small_reflector", vec![ReflectorPose::unrotated(small_reflector_placement(s.tx, r))]),
        ("rotated", vec![fr_single_target(s.tx, r, default_search_interval(s.tx, r), opts.search_step)?]),
        ("multi_mr", multi_mr_single_target(s.tx, r, &s.dims, m)?.poses),
        ("multi_fr", multi_fr_single_target(s.tx, r, &s.dims, m, opts)?.poses),
    ];
    let mut t = Table::new(&["scheme", "index", "x_m", "omega_rad", "omega_deg", "power_dbm"]);
    for (name, poses) in schemes {
        let p = dbm(receive_power(&cfg, &poses, r).power);
        for (i, pose) in poses.iter().enumerate() {
            t.push(vec![name.to_string(), i.to_string(), num(pose.x), num(pose.omega), deg(pose.omega), p.clone()]);
        }
    }
    Ok(Report::new(t))
}

fn benchmarks(s: &Scenario, opts: &PlannerOptions) -> Result<Report, CliError> {
    let cfg = s.link_budget();
    let size = s.file.options.region_size_m;
    let anchor = s.tx.x;
    let mut t = Table::new(&["scheme", "reflectors", "worst_case_dbm", "median_dbm"]);
    let mut schemes: Vec<(&str, Vec<ReflectorPose>)> = Vec::new();
    for scheme in [
        BenchmarkScheme::Fpr { x: anchor },
        BenchmarkScheme::Fprr { x: anchor },
        BenchmarkScheme::MovableRegionMr { anchor, size },
        BenchmarkScheme::MovableRegionFr { anchor, size },
    ] {
        schemes.push((scheme.name(), benchmark_poses(scheme, s.tx, &s.target, &s.dims, opts)?));
    }
    match s.target {
        Target::Point(r) => {
            let m = s.file.options.max_reflectors;
            schemes.push(("multi_mr", multi_mr_single_target(s.tx, r, &s.dims, m)?.poses));
            schemes.push(("multi_fr", multi_fr_single_target(s.tx, r, &s.dims, m, opts)?.poses));
            for (name, poses) in schemes {
                let p = dbm(receive_power(&cfg, &poses, r).power);
                t.push(vec![name.to_string(), poses.len().to_string(), p.clone(), p]);
            }
        }
        Target::Area(area) => {
            schemes.extend(area_schemes(s, &area, opts)?);
            for (name, poses) in schemes {
                let field = evaluate_field(&cfg, &poses, &area, opts.coverage_step)?;
                let wc = worst_case_power(&cfg, &poses, &area, opts.coverage_step)?;
                let med = median(&field.powers()).unwrap_or(0.0);
                t.push(vec![name.to_string(), poses.len().to_string(), dbm(wc), dbm(med)]);
            }
        }
    }
    Ok(Report::new(t))
}
