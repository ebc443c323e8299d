//! Post-optimality analysis: constraint-sensitivity sweeps, total-depth
//! sweeps, and a closed-form estimation strategy that fixes most cutting
//! conditions from observed optimum structure and computes the rest.

use crate::error::{Error, Result};
use crate::ga::{self, GaConfig};
use crate::lookup::PairTable;
use crate::model::{Model, PassKind, Plan};
use crate::oracle;
use crate::problem::{tenths_to_mm, ProblemData};

/// Which optimizer produces the "optimal UC" of a sweep point.
#[derive(Debug, Clone, PartialEq)]
pub enum Engine {
    /// Exact per-pass optimization over the allocation table (default:
    /// deterministic and fast).
    Oracle,
    /// Full GA runs (seed taken from the config; slower, stochastic).
    Ga(GaConfig),
}

/// Constraint selected for a sensitivity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Force,
    Power,
}

impl ConstraintKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstraintKind::Force => "force",
            ConstraintKind::Power => "power",
        }
    }
}

/// One sensitivity evaluation: the optimum with a scaled constraint limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPoint {
    pub kind: ConstraintKind,
    pub multiplier: f64,
    /// Optimal unit cost, or `None` when the scaled limit admits no
    /// feasible plan.
    pub uc: Option<f64>,
}

/// A whole sweep over one constraint, with its fitted trend.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivitySweep {
    pub kind: ConstraintKind,
    pub points: Vec<SensitivityPoint>,
    /// Ordinary-least-squares slope of UC over the multiplier, across the
    /// feasible points; `None` with fewer than two of them.
    pub slope: Option<f64>,
}

/// Best plan for one total stock value, solved by the configured engine.
fn solve_at(problem: &ProblemData, dt_tenths: u32, engine: &Engine) -> Result<(Plan, f64)> {
    let model = Model::new(problem.clone())?;
    let table = PairTable::build(problem, dt_tenths)?;
    match engine {
        Engine::Oracle => {
            let row = oracle::global_optimum(&model, &table)?;
            Ok((row.plan(), row.uc))
        }
        Engine::Ga(config) => {
            let result = ga::run(&model, &table, config)?;
            if !result.best.is_feasible() {
                return Err(Error::NoFeasibleAllocation { dt_tenths });
            }
            Ok((result.best.plan, result.best.uc))
        }
    }
}

fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Re-optimizes the problem with the chosen constraint limit scaled by each
/// multiplier. Infeasible points are reported (`uc: None`) and excluded
/// from the slope fit; the sweep continues past them.
pub fn sensitivity_sweep(
    problem: &ProblemData,
    dt_tenths: u32,
    kind: ConstraintKind,
    multipliers: &[f64],
    engine: &Engine,
) -> Result<SensitivitySweep> {
    if multipliers.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::InvalidInput("multipliers must be positive and finite".into()));
    }
    let mut points = Vec::with_capacity(multipliers.len());
    for &multiplier in multipliers {
        let mut scaled = problem.clone();
        match kind {
            ConstraintKind::Force => scaled.force_max *= multiplier,
            ConstraintKind::Power => scaled.power_max *= multiplier,
        }
        let uc = match solve_at(&scaled, dt_tenths, engine) {
            Ok((_, uc)) => Some(uc),
            Err(Error::Infeasible { .. }) | Err(Error::NoFeasibleAllocation { .. }) => None,
            Err(other) => return Err(other),
        };
        points.push(SensitivityPoint { kind, multiplier, uc });
    }
    let fit: Vec<(f64, f64)> =
        points.iter().filter_map(|p| p.uc.map(|uc| (p.multiplier, uc))).collect();
    Ok(SensitivitySweep { kind, points, slope: ols_slope(&fit) })
}

/// Optimal plan and cost at one total stock value of a depth sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub dt_tenths: u32,
    pub n: u32,
    pub ds_tenths: u32,
    pub dr_tenths: u32,
    pub f_r: f64,
    pub v_s: f64,
    pub v_r: f64,
    pub f_s: f64,
    pub uc: f64,
    /// Tool life in the finish pass (min).
    pub t_s: f64,
    /// Tool life in the rough passes (min).
    pub t_r: f64,
}

/// One sweep position: either a solved row or a flagged infeasibility.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome {
    Row(SweepRow),
    Infeasible { dt_tenths: u32, reason: String },
}

/// Sweeps the total stock from `from_tenths` to `to_tenths` inclusive.
/// Stock values without any feasible allocation are flagged and skipped.
pub fn dt_sweep(
    problem: &ProblemData,
    from_tenths: u32,
    to_tenths: u32,
    step_tenths: u32,
    engine: &Engine,
) -> Result<Vec<SweepOutcome>> {
    if step_tenths == 0 {
        return Err(Error::InvalidInput("sweep step must be positive".into()));
    }
    if from_tenths > to_tenths {
        return Err(Error::InvalidInput(format!(
            "sweep range is empty: {} mm > {} mm",
            tenths_to_mm(from_tenths),
            tenths_to_mm(to_tenths)
        )));
    }
    let model = Model::new(problem.clone())?;
    let mut outcomes = Vec::new();
    let mut dt = from_tenths;
    while dt <= to_tenths {
        match solve_at(problem, dt, engine) {
            Ok((plan, uc)) => {
                let t_s = model.tool_life(plan.v_s, plan.ds_mm(), plan.f_s)?;
                let t_r = model.tool_life(plan.v_r, plan.dr_mm(), plan.f_r)?;
                outcomes.push(SweepOutcome::Row(SweepRow {
                    dt_tenths: dt,
                    n: plan.n,
                    ds_tenths: plan.ds_tenths,
                    dr_tenths: plan.dr_tenths,
                    f_r: plan.f_r,
                    v_s: plan.v_s,
                    v_r: plan.v_r,
                    f_s: plan.f_s,
                    uc,
                    t_s,
                    t_r,
                }));
            }
            Err(Error::NoFeasibleAllocation { .. }) | Err(Error::Infeasible { .. }) => {
                outcomes.push(SweepOutcome::Infeasible {
                    dt_tenths: dt,
                    reason: "no feasible allocation".into(),
                });
            }
            Err(other) => return Err(other),
        }
        dt += step_tenths;
    }
    Ok(outcomes)
}

/// How the estimation strategy treats the power limit when fixing `f_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EstimateMode {
    /// The published rule: `f_r` is the largest feed allowed by the feed
    /// bound, the surface cap, and the force limit. At deep rough cuts this
    /// can overshoot the power limit slightly (the overshoot is reported).
    #[default]
    Nominal,
    /// Additionally caps `f_r` by the power limit at the fixed rough speed,
    /// guaranteeing a fully feasible plan.
    PowerClipped,
}

/// A closed-form estimated plan with provenance notes per decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub plan: Plan,
    pub uc: f64,
    /// Which rule fixed each field, in decision order.
    pub notes: Vec<String>,
    /// Power overshoot (kW above the limit) of the nominal rule, if any.
    pub power_excess: Option<f64>,
}

/// Estimates a near-optimal plan without running any optimizer.
///
/// The pass count is the smallest `n` that reaches the stock with the
/// deepest available cuts (`d_s_max + n·d_r_max ≥ d_t`); among the
/// allocations with that `n` the smallest rough depth is chosen; speeds and
/// the finish feed come from the configured estimation defaults; the rough
/// feed takes the largest value the active limits allow.
///
/// When no allocation has the computed pass count, the next count is tried
/// only if `allow_fallback` is set; otherwise (and when the fallback also
/// fails) an estimation-failure error names the attempted count.
pub fn estimate_plan(
    model: &Model,
    dt_tenths: u32,
    mode: EstimateMode,
    allow_fallback: bool,
) -> Result<Estimate> {
    let p = model.problem();
    let ds_max = p.finish_depths.top();
    let dr_max = p.rough_depths.top();
    let n0 = if dt_tenths <= ds_max {
        1
    } else {
        (dt_tenths - ds_max + dr_max - 1) / dr_max // ceiling division
    };

    let table = PairTable::build(p, dt_tenths)?;
    let with_n = |n: u32| -> Option<crate::lookup::PairEntry> {
        table.entries().iter().filter(|e| e.n == n).min_by_key(|e| e.dr_tenths).copied()
    };
    let mut notes = Vec::new();
    let entry = match with_n(n0) {
        Some(e) => {
            notes.push(format!(
                "n = {n0}: smallest pass count reaching {} mm with the deepest cuts",
                tenths_to_mm(dt_tenths)
            ));
            e
        }
        None if allow_fallback => {
            let e = with_n(n0 + 1).ok_or(Error::EstimationFailure { dt_tenths, n: n0 + 1 })?;
            notes.push(format!(
                "n = {}: no allocation at the computed count {n0}, fell back by one pass",
                n0 + 1
            ));
            e
        }
        None => return Err(Error::EstimationFailure { dt_tenths, n: n0 }),
    };
    notes.push(format!(
        "d_s = {}, d_r = {}: smallest rough depth among the n = {} allocations",
        tenths_to_mm(entry.ds_tenths),
        tenths_to_mm(entry.dr_tenths),
        entry.n
    ));

    let est = p.estimate_defaults;
    notes.push(format!(
        "V_s = {}, V_r = {}, f_s = {}: configured estimation defaults",
        est.v_s, est.v_r, est.f_s
    ));

    let dr_mm = tenths_to_mm(entry.dr_tenths);
    let mut f_r = model.feed_upper_bound(PassKind::Rough);
    let mut rule = "feed upper bound";
    let f_force = model.max_feed_for_force(dr_mm)?;
    if f_force < f_r {
        f_r = f_force;
        rule = "force limit";
    }
    if mode == EstimateMode::PowerClipped {
        let f_power = model.max_feed_for_power(est.v_r, dr_mm)?;
        if f_power < f_r {
            f_r = f_power;
            rule = "power limit at the fixed rough speed";
        }
    }
    notes.push(format!("f_r = {f_r:.6}: largest feed allowed by the {rule}"));

    let plan = Plan {
        v_s: est.v_s,
        f_s: est.f_s,
        v_r: est.v_r,
        f_r,
        ds_tenths: entry.ds_tenths,
        dr_tenths: entry.dr_tenths,
        n: entry.n,
    };
    let uc = model.unit_cost(&plan)?;
    let power_rough = model.cutting_power(plan.v_r, dr_mm, plan.f_r)?;
    let power_finish = model.cutting_power(plan.v_s, plan.ds_mm(), plan.f_s)?;
    let excess = power_rough.max(power_finish) - p.power_max;
    Ok(Estimate { plan, uc, notes, power_excess: (excess > 0.0).then_some(excess) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::DepthGrid;
    use approx::assert_relative_eq;

    fn model() -> Model {
        Model::new(ProblemData::default()).unwrap()
    }

    #[test]
    fn nominal_estimate_matches_reference_values() {
        let m = model();
        let est = estimate_plan(&m, 115, EstimateMode::Nominal, false).unwrap();
        assert_eq!((est.plan.ds_tenths, est.plan.dr_tenths, est.plan.n), (19, 32, 3));
        assert_relative_eq!(est.plan.f_r, 0.419_127_618_9, max_relative = 1e-8);
        assert_relative_eq!(est.uc, 2.194_230_09, max_relative = 1e-8);
        assert_eq!((est.plan.v_s, est.plan.v_r, est.plan.f_s), (123.2, 60.35, 0.279));
        // The nominal rule overshoots the power limit slightly here.
        let excess = est.power_excess.expect("nominal rule overshoots power at 3.2 mm");
        assert_relative_eq!(excess, 0.055_498, max_relative = 1e-4);

        let est6 = estimate_plan(&m, 60, EstimateMode::Nominal, false).unwrap();
        assert_eq!((est6.plan.ds_tenths, est6.plan.dr_tenths, est6.plan.n), (20, 40, 1));
        assert_relative_eq!(est6.plan.f_r, 0.319_508_75, max_relative = 1e-7);
        assert_relative_eq!(est6.uc, 1.409_638_687, max_relative = 1e-8);
    }

    #[test]
    fn power_clipped_estimate_is_feasible_and_bounded_by_the_oracle() {
        let m = model();
        for dt in [60u32, 115] {
            let est = estimate_plan(&m, dt, EstimateMode::PowerClipped, false).unwrap();
            assert_eq!(est.power_excess, None);
            let (uc, cv) = m.evaluate(&est.plan);
            assert_eq!(cv, 0.0, "clipped estimate must be feasible");
            assert_relative_eq!(uc, est.uc, max_relative = 1e-12);
            let table = PairTable::build(m.problem(), dt).unwrap();
            let reference = oracle::global_optimum(&m, &table).unwrap();
            assert!(
                est.uc >= reference.uc - 1e-12,
                "a feasible estimate cannot beat the optimum: {} vs {}",
                est.uc,
                reference.uc
            );
        }
        let est = estimate_plan(&m, 115, EstimateMode::PowerClipped, false).unwrap();
        assert_relative_eq!(est.plan.f_r, 0.416_004_64, max_relative = 1e-7);
        assert_relative_eq!(est.uc, 2.197_839_941, max_relative = 1e-8);
    }

    #[test]
    fn estimation_fallback_is_explicit() {
        let mut p = ProblemData::default();
        p.rough_depths = DepthGrid { min_tenths: 28, max_tenths: 40, step_tenths: 12 };
        let m = Model::new(p).unwrap();
        // d_t = 15 mm: the computed count n = 4 has no allocation; n = 5
        // does (d_s = 1.0, d_r = 2.8).
        let err = estimate_plan(&m, 150, EstimateMode::Nominal, false).unwrap_err();
        assert!(matches!(err, Error::EstimationFailure { dt_tenths: 150, n: 4 }), "{err:?}");
        let est = estimate_plan(&m, 150, EstimateMode::Nominal, true).unwrap();
        assert_eq!((est.plan.ds_tenths, est.plan.dr_tenths, est.plan.n), (10, 28, 5));
        assert!(est.notes.iter().any(|n| n.contains("fell back")));
    }

    #[test]
    fn sensitivity_sweep_matches_reference_curve() {
        let p = ProblemData::default();
        let multipliers = [0.9, 0.95, 1.0, 1.05, 1.1, 1.15, 1.2];
        let force = sensitivity_sweep(&p, 60, ConstraintKind::Force, &multipliers, &Engine::Oracle)
            .unwrap();
        let expected_force = [
            1.422_674_09,
            1.416_310_01,
            1.410_553_26,
            1.405_311_62,
            1.400_511_15,
            1.396_091_83,
            1.392_004_44,
        ];
        for (point, want) in force.points.iter().zip(expected_force) {
            assert_relative_eq!(point.uc.unwrap(), want, max_relative = 1e-7);
        }
        assert_relative_eq!(force.slope.unwrap(), -0.101_776_71, max_relative = 1e-5);

        let power = sensitivity_sweep(&p, 60, ConstraintKind::Power, &multipliers, &Engine::Oracle)
            .unwrap();
        assert_relative_eq!(power.slope.unwrap(), -0.163_671_73, max_relative = 1e-5);
        assert!(
            power.slope.unwrap().abs() > force.slope.unwrap().abs(),
            "cost must react more strongly to the power limit"
        );
        // Relaxing either limit never increases the optimal cost.
        for sweep in [&force, &power] {
            for w in sweep.points.windows(2) {
                assert!(w[1].uc.unwrap() <= w[0].uc.unwrap() + 1e-12);
            }
        }
        // The unit multiplier reproduces the baseline optimum exactly.
        assert_eq!(force.points[2].uc, power.points[2].uc);
        assert_relative_eq!(force.points[2].uc.unwrap(), 1.410_553_259, max_relative = 1e-9);
    }

    #[test]
    fn infeasible_sensitivity_points_are_reported_not_fatal() {
        let p = ProblemData::default();
        let sweep = sensitivity_sweep(&p, 60, ConstraintKind::Force, &[0.05, 1.0], &Engine::Oracle)
            .unwrap();
        assert_eq!(sweep.points[0].uc, None);
        assert!(sweep.points[1].uc.is_some());
        assert_eq!(sweep.slope, None, "one feasible point cannot fix a slope");
    }

    #[test]
    fn depth_sweep_reproduces_the_reference_table() {
        let p = ProblemData::default();
        let outcomes = dt_sweep(&p, 60, 160, 10, &Engine::Oracle).unwrap();
        let rows: Vec<&SweepRow> = outcomes
            .iter()
            .map(|o| match o {
                SweepOutcome::Row(r) => r,
                SweepOutcome::Infeasible { dt_tenths, .. } => {
                    panic!("unexpected infeasible point at {dt_tenths}")
                }
            })
            .collect();
        let n_column: Vec<u32> = rows.iter().map(|r| r.n).collect();
        assert_eq!(n_column, vec![1, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4]);
        let expected_uc = [
            1.410_553_259,
            1.691_362_558,
            1.753_157_854,
            1.816_956_27,
            1.882_550_774,
            2.160_458_909,
            2.232_519_771,
            2.293_116_306,
            2.354_548_288,
            2.639_593_238,
            2.695_356_796,
        ];
        for (row, want) in rows.iter().zip(expected_uc) {
            assert_relative_eq!(row.uc, want, max_relative = 1e-9);
        }
        // Within a fixed pass count the rough depth grows and the rough
        // feed shrinks as stock increases.
        for n in 1..=4u32 {
            let grp: Vec<&&SweepRow> = rows.iter().filter(|r| r.n == n).collect();
            for w in grp.windows(2) {
                assert!(w[1].dr_tenths >= w[0].dr_tenths, "d_r must not fall within n = {n}");
                assert!(w[1].f_r <= w[0].f_r + 1e-12, "f_r must not rise within n = {n}");
            }
        }
        // Pass count is a non-decreasing step function of stock.
        for w in rows.windows(2) {
            assert!(w[1].n >= w[0].n);
        }
    }

    #[test]
    fn unreachable_stock_is_flagged_and_skipped() {
        let p = ProblemData::default();
        let outcomes = dt_sweep(&p, 10, 20, 5, &Engine::Oracle).unwrap();
        assert!(matches!(outcomes[0], SweepOutcome::Infeasible { dt_tenths: 10, .. }));
        assert!(matches!(&outcomes[1], SweepOutcome::Row(r) if r.dt_tenths == 15 && r.n == 1));
        assert!(matches!(&outcomes[2], SweepOutcome::Row(r) if r.dt_tenths == 20));
    }

    #[test]
    fn ga_engine_produces_feasible_rows_no_better_than_the_oracle() {
        let p = ProblemData::default();
        let config = GaConfig { pop_size: 60, generations: 40, ..GaConfig::default() };
        let ga_rows = dt_sweep(&p, 60, 80, 10, &Engine::Ga(config)).unwrap();
        let oracle_rows = dt_sweep(&p, 60, 80, 10, &Engine::Oracle).unwrap();
        for (g, o) in ga_rows.iter().zip(&oracle_rows) {
            let (SweepOutcome::Row(g), SweepOutcome::Row(o)) = (g, o) else {
                panic!("both engines must solve these stocks");
            };
            assert!(g.uc >= o.uc - 1e-9, "GA cannot beat the oracle: {} vs {}", g.uc, o.uc);
        }
    }
}
