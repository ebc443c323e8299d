//! Brute-force reference optimizer ("oracle").
//!
//! For a fixed depth of cut the pass cost is smooth in `(V, f)`, so the
//! constrained minimum is found exactly by candidate enumeration
//! ([`optimize_pass`]): the cost is decreasing in `f` up to a possible
//! interior stationary point, and in `V` it falls to the economic-tool-life
//! speed and rises beyond it, so the optimum sits either at that interior
//! speed or on one of the box / force / power / surface boundaries. A dense
//! grid scan with golden-section refinement ([`optimize_pass_grid`]) is kept
//! as an independent cross-check of the same minimum.
//!
//! The oracle then evaluates every row of the depth-allocation table and
//! reports each row's conditional optimum plus the global best. It is the
//! reference the stochastic optimizer is judged against.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lookup::{PairEntry, PairTable};
use crate::model::{Model, PassKind, Plan};
use crate::problem::tenths_to_mm;

/// Optimal cutting conditions for one pass at a fixed depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassOptimum {
    /// Cutting speed (m/min).
    pub v: f64,
    /// Feed (mm/tooth).
    pub f: f64,
    /// Minimal pass cost at this depth.
    pub cost: f64,
}

/// One depth allocation with both passes optimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub entry: PairEntry,
    pub finish: PassOptimum,
    pub rough: PassOptimum,
    /// Total unit cost: finish + n·rough + preparation.
    pub uc: f64,
}

impl OracleRow {
    /// The row as a full plan (for re-evaluation or reporting).
    pub fn plan(&self) -> Plan {
        Plan {
            v_s: self.finish.v,
            f_s: self.finish.f,
            v_r: self.rough.v,
            f_r: self.rough.f,
            ds_tenths: self.entry.ds_tenths,
            dr_tenths: self.entry.dr_tenths,
            n: self.entry.n,
        }
    }
}

fn bounds(model: &Model, pass: PassKind) -> crate::problem::VarBounds {
    match pass {
        PassKind::Finish => model.problem().finish_bounds,
        PassKind::Rough => model.problem().rough_bounds,
    }
}

/// Largest feasible feed at depth `d` for a pass: the merged feed bound
/// capped by force everywhere and by power at the minimum speed (below the
/// minimum speed no plan is admissible anyway). Returns the bound and the
/// name of the constraint that set it.
fn top_feed(model: &Model, pass: PassKind, d: f64) -> Result<(f64, &'static str)> {
    let b = bounds(model, pass);
    let mut f_top = model.feed_upper_bound(pass);
    let mut binding = "feed upper bound";
    let f_force = model.max_feed_for_force(d)?;
    if f_force < f_top {
        f_top = f_force;
        binding = "force limit";
    }
    let f_power = model.max_feed_for_power(b.v_min, d)?;
    if f_power < f_top {
        f_top = f_power;
        binding = "power limit";
    }
    Ok((f_top, binding))
}

/// Speed minimizing the pass cost at fixed feed, ignoring all limits: the
/// stationary point of `a/(V·f) + b·V^(n1−1)·d^n2·f^(n3−1)`.
fn unconstrained_speed(model: &Model, pass: PassKind, d: f64, f: f64) -> f64 {
    let c = model.coefficients();
    let (a, b, _) = model.pass_coefficients(pass);
    (a / ((c.n1 - 1.0) * b * d.powf(c.n2) * f.powf(c.n3))).powf(1.0 / c.n1)
}

/// Feed minimizing the pass cost at fixed speed, ignoring all limits; only
/// exists when the tool-life feed exponent exceeds one.
fn unconstrained_feed(model: &Model, pass: PassKind, d: f64, v: f64) -> Option<f64> {
    let c = model.coefficients();
    if c.n3 <= 1.0 {
        return None;
    }
    let (a, b, _) = model.pass_coefficients(pass);
    Some((a / ((c.n3 - 1.0) * b * v.powf(c.n1) * d.powf(c.n2))).powf(1.0 / c.n3))
}

/// Admissible speed range at feed `f`: box bounds tightened by the power
/// limit. `None` when the power cap undercuts the minimum speed.
fn speed_range(model: &Model, pass: PassKind, d: f64, f: f64) -> Result<Option<(f64, f64)>> {
    let b = bounds(model, pass);
    let v_hi = b.v_max.min(model.max_speed_for_power(d, f)?);
    Ok((v_hi >= b.v_min).then_some((b.v_min, v_hi)))
}

/// Exact minimum-cost cutting conditions for one pass at depth `d_tenths`.
///
/// Fails with the binding constraint's name when no feasible feed exists at
/// this depth.
pub fn optimize_pass(model: &Model, pass: PassKind, d_tenths: u32) -> Result<PassOptimum> {
    let d = tenths_to_mm(d_tenths);
    let b = bounds(model, pass);
    let (f_top, binding) = top_feed(model, pass, d)?;
    if f_top < b.f_min {
        return Err(Error::Infeasible { d_tenths, binding });
    }

    // Candidate operating points: cost falls with feed until (possibly) an
    // interior feed optimum, and in speed it is unimodal around the
    // unconstrained optimum, so the minimum is at one of:
    //   1. the top feed with the (clamped) optimal speed,
    //   2. the bottom feed with the (clamped) optimal speed,
    //   3. either speed bound with its interior-optimal feed.
    let mut best: Option<PassOptimum> = None;
    let mut consider = |v: f64, f: f64| {
        let cost = model.pass_cost(pass, v, d, f).expect("candidate operating points are positive");
        if best.map_or(true, |b| cost < b.cost) {
            best = Some(PassOptimum { v, f, cost });
        }
    };

    for f in [f_top, b.f_min] {
        if let Some((v_lo, v_hi)) = speed_range(model, pass, d, f)? {
            let v = unconstrained_speed(model, pass, d, f).clamp(v_lo, v_hi);
            consider(v, f);
        }
    }
    for v in [b.v_min, b.v_max] {
        if let Some(f_opt) = unconstrained_feed(model, pass, d, v) {
            let f = f_opt.clamp(b.f_min, f_top);
            if let Some((v_lo, v_hi)) = speed_range(model, pass, d, f)? {
                if v >= v_lo && v <= v_hi {
                    consider(v, f);
                }
            }
        }
    }

    best.ok_or(Error::Infeasible { d_tenths, binding: "power limit" })
}

/// Golden-section minimization of `cost` over `[lo, hi]`; the pass cost is
/// unimodal in speed, so this converges to the constrained optimum.
fn golden_min(mut lo: f64, mut hi: f64, mut cost: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut c1 = cost(x1);
    let mut c2 = cost(x2);
    for _ in 0..120 {
        if hi - lo < 1e-12 * hi.abs().max(1.0) {
            break;
        }
        if c1 <= c2 {
            hi = x2;
            x2 = x1;
            c2 = c1;
            x1 = hi - INV_PHI * (hi - lo);
            c1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            c1 = c2;
            x2 = lo + INV_PHI * (hi - lo);
            c2 = cost(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, cost(mid))
}

/// Best admissible speed (golden section over the feasible range) at a
/// fixed feed; `None` when the power limit excludes every speed.
fn best_speed_at_feed(model: &Model, pass: PassKind, d: f64, f: f64) -> Result<Option<(f64, f64)>> {
    Ok(match speed_range(model, pass, d, f)? {
        Some((v_lo, v_hi)) => {
            let (v, cost) = golden_min(v_lo, v_hi, |v| {
                model.pass_cost(pass, v, d, f).expect("positive operating point")
            });
            Some((v, cost))
        }
        None => None,
    })
}

/// Independent cross-check of [`optimize_pass`]: a dense scan over the
/// `(V, f)` rectangle followed by golden-section refinement (in speed at the
/// best feed, then in feed with nested speed optimization).
pub fn optimize_pass_grid(
    model: &Model,
    pass: PassKind,
    d_tenths: u32,
    resolution: usize,
) -> Result<PassOptimum> {
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let d = tenths_to_mm(d_tenths);
    let b = bounds(model, pass);
    let (f_top, binding) = top_feed(model, pass, d)?;
    if f_top < b.f_min {
        return Err(Error::Infeasible { d_tenths, binding });
    }

    let steps = (resolution - 1) as f64;
    let feed_at = |j: usize| b.f_min + (f_top - b.f_min) * j as f64 / steps;
    let speed_at = |i: usize| b.v_min + (b.v_max - b.v_min) * i as f64 / steps;

    // Coarse scan keeps the cheapest feasible cell.
    let mut best_feed = f_top;
    let mut best_cost = f64::INFINITY;
    for j in 0..resolution {
        let f = feed_at(j);
        let v_hi = b.v_max.min(model.max_speed_for_power(d, f)?);
        for i in 0..resolution {
            let v = speed_at(i);
            if v > v_hi {
                break; // power cap: larger speeds on this row are all out
            }
            let cost = model.pass_cost(pass, v, d, f)?;
            if cost < best_cost {
                best_cost = cost;
                best_feed = f;
            }
        }
    }
    if !best_cost.is_finite() {
        return Err(Error::Infeasible { d_tenths, binding: "power limit" });
    }

    // Refine: golden section over feed (nested over speed) in a window of
    // one grid step around the winning feed.
    let window = (f_top - b.f_min) / steps;
    let f_lo = (best_feed - window).max(b.f_min);
    let f_hi = (best_feed + window).min(f_top);
    let (f, _) = golden_min(f_lo, f_hi, |f| {
        best_speed_at_feed(model, pass, d, f).ok().flatten().map_or(f64::INFINITY, |(_, cost)| cost)
    });
    let (v, cost) = best_speed_at_feed(model, pass, d, f)?
        .ok_or(Error::Infeasible { d_tenths, binding: "power limit" })?;
    Ok(PassOptimum { v, f, cost })
}

/// Optimizes both passes of every allocation in the table.
///
/// Rows share per-depth pass optima, so each distinct depth is solved once.
pub fn enumerate_local_optima(model: &Model, table: &PairTable) -> Result<Vec<OracleRow>> {
    let p = model.problem();
    let prep_cost = p.machine_rate * p.prep_time;
    let mut finish_memo: HashMap<u32, PassOptimum> = HashMap::new();
    let mut rough_memo: HashMap<u32, PassOptimum> = HashMap::new();
    let mut rows = Vec::with_capacity(table.len());
    for &entry in table.entries() {
        let finish = match finish_memo.get(&entry.ds_tenths) {
            Some(&hit) => hit,
            None => {
                let opt = optimize_pass(model, PassKind::Finish, entry.ds_tenths)?;
                finish_memo.insert(entry.ds_tenths, opt);
                opt
            }
        };
        let rough = match rough_memo.get(&entry.dr_tenths) {
            Some(&hit) => hit,
            None => {
                let opt = optimize_pass(model, PassKind::Rough, entry.dr_tenths)?;
                rough_memo.insert(entry.dr_tenths, opt);
                opt
            }
        };
        let uc = finish.cost + f64::from(entry.n) * rough.cost + prep_cost;
        rows.push(OracleRow { entry, finish, rough, uc });
    }
    Ok(rows)
}

/// The cheapest allocation in the table (ties go to the lowest index).
pub fn global_optimum(model: &Model, table: &PairTable) -> Result<OracleRow> {
    let rows = enumerate_local_optima(model, table)?;
    rows.into_iter()
        .min_by(|a, b| a.uc.partial_cmp(&b.uc).expect("costs are finite"))
        .ok_or(Error::NoFeasibleAllocation { dt_tenths: table.dt_tenths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemData;
    use approx::assert_relative_eq;

    fn model() -> Model {
        Model::new(ProblemData::default()).unwrap()
    }

    #[test]
    fn finish_pass_optimum_is_surface_capped_with_interior_speed() {
        let m = model();
        let opt = optimize_pass(&m, PassKind::Finish, 5).unwrap();
        assert_relative_eq!(opt.f, 0.279_072_786_1, max_relative = 1e-9);
        assert_relative_eq!(opt.v, 150.706_456_5, max_relative = 1e-8);
        assert_relative_eq!(opt.cost, 0.512_393_444_4, max_relative = 1e-9);
        let opt = optimize_pass(&m, PassKind::Finish, 20).unwrap();
        assert_relative_eq!(opt.v, 122.411_680_4, max_relative = 1e-8);
        assert_relative_eq!(opt.cost, 0.563_555_745, max_relative = 1e-9);
        // At the interior speed the tool runs at its economic life.
        let life = m.tool_life(opt.v, 2.0, opt.f).unwrap();
        assert_relative_eq!(life, 221.0, max_relative = 1e-9);
    }

    #[test]
    fn rough_pass_optimum_walks_the_constraint_regimes() {
        let m = model();
        // Shallow cut: feed at the box bound, speed interior.
        let opt = optimize_pass(&m, PassKind::Rough, 10).unwrap();
        assert_relative_eq!(opt.v, 103.902_391_2, max_relative = 1e-8);
        assert_relative_eq!(opt.f, 0.6, max_relative = 1e-15);
        assert_relative_eq!(opt.cost, 0.337_736_491_3, max_relative = 1e-9);
        // Medium cut: power cap pulls the speed below the interior optimum.
        let opt = optimize_pass(&m, PassKind::Rough, 20).unwrap();
        assert_relative_eq!(opt.v, 70.256_415_06, max_relative = 1e-8);
        assert_relative_eq!(opt.f, 0.6, max_relative = 1e-15);
        assert_relative_eq!(opt.cost, 0.356_897_258_2, max_relative = 1e-9);
        // Deep cut: force caps the feed, power caps the speed.
        let opt = optimize_pass(&m, PassKind::Rough, 40).unwrap();
        assert_relative_eq!(opt.v, 60.016_916_53, max_relative = 1e-8);
        assert_relative_eq!(opt.f, 0.319_508_746_1, max_relative = 1e-8);
        assert_relative_eq!(opt.cost, 0.471_997_514_4, max_relative = 1e-9);
        // On the force-capped branch the speed is depth-independent.
        let opt32 = optimize_pass(&m, PassKind::Rough, 32).unwrap();
        assert_relative_eq!(opt32.v, 60.016_916_53, max_relative = 1e-8);
        assert_relative_eq!(opt32.f, 0.419_127_618_9, max_relative = 1e-8);
    }

    #[test]
    fn grid_scan_agrees_with_candidate_enumeration() {
        let m = model();
        for (pass, d_tenths) in [
            (PassKind::Finish, 5),
            (PassKind::Finish, 20),
            (PassKind::Rough, 10),
            (PassKind::Rough, 20),
            (PassKind::Rough, 32),
            (PassKind::Rough, 40),
        ] {
            let exact = optimize_pass(&m, pass, d_tenths).unwrap();
            let grid = optimize_pass_grid(&m, pass, d_tenths, 400).unwrap();
            assert_relative_eq!(grid.cost, exact.cost, max_relative = 1e-8);
            assert_relative_eq!(grid.v, exact.v, max_relative = 1e-4);
            assert_relative_eq!(grid.f, exact.f, max_relative = 1e-4);
        }
    }

    #[test]
    fn table_enumeration_finds_the_known_global_optimum() {
        let m = model();
        let table = PairTable::build(m.problem(), 60).unwrap();
        let rows = enumerate_local_optima(&m, &table).unwrap();
        assert_eq!(rows.len(), 20);
        let best = global_optimum(&m, &table).unwrap();
        assert_eq!((best.entry.ds_tenths, best.entry.dr_tenths, best.entry.n), (20, 40, 1));
        assert_relative_eq!(best.uc, 1.410_553_259, max_relative = 1e-9);
        // Spot-check two other rows against reference values.
        let row = rows.iter().find(|r| r.entry.index == 1).unwrap();
        assert_relative_eq!(row.uc, 2.583_026_687, max_relative = 1e-9);
        let row = rows.iter().find(|r| (r.entry.ds_tenths, r.entry.dr_tenths) == (12, 24)).unwrap();
        assert_relative_eq!(row.uc, 1.659_165_724, max_relative = 1e-9);
    }

    #[test]
    fn infeasible_depth_names_the_binding_constraint() {
        let mut p = ProblemData::default();
        p.force_max = 50.0; // even the minimum feed exceeds this force
        p.rough_depths.max_tenths = 60;
        let m = Model::new(p).unwrap();
        let err = optimize_pass(&m, PassKind::Rough, 40).unwrap_err();
        match err {
            Error::Infeasible { d_tenths, binding } => {
                assert_eq!(d_tenths, 40);
                assert_eq!(binding, "force limit");
            }
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn oracle_rows_are_feasible_plans_with_matching_cost() {
        let m = model();
        let table = PairTable::build(m.problem(), 115).unwrap();
        for row in enumerate_local_optima(&m, &table).unwrap() {
            let (uc, cv) = m.evaluate(&row.plan());
            assert!(cv < 1e-12, "oracle row must be feasible, cv = {cv}");
            assert_relative_eq!(uc, row.uc, max_relative = 1e-12);
        }
    }
}
