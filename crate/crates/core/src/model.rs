//! Cost and constraint model for two-stage (rough + finish) face milling.
//!
//! A plan makes `n` identical rough passes at depth `d_r` followed by one
//! finish pass at depth `d_s`, removing `d_t = d_s + n·d_r` of stock. Its
//! unit production cost is
//!
//! ```text
//! UC = UC_finish + n · UC_rough + k0 · t_p
//! UC_pass = a/(V·f) + b · V^(n1−1) · d^n2 · f^(n3−1) + c
//! ```
//!
//! where the `a` term is machining time, the `b` term is cutting-edge wear
//! (replacement labour plus tooling), and `c` is idle tool travel. Tool life
//! follows an extended Taylor law `T = C0 / (V^n1 · d^n2 · f^n3)`; cutting
//! force is `F = C1 · d^n4 · f^n5` (kgf) and power `P = C2 · V · d^n4 · f^n5`
//! (kW). The aggregate constants `C0`, `C1`, `C2` and the per-pass `a/b/c`
//! are derived from the base dataset by [`derive_coefficients`]; the model
//! can also run on user-supplied values of those constants.

use crate::error::{Error, Result};
use crate::problem::{tenths_to_mm, CoeffMode, ProblemData};

/// Which of the two pass stages a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PassKind {
    /// The single final pass at depth `d_s`.
    Finish,
    /// One of the `n` identical stock-removal passes at depth `d_r`.
    Rough,
}

/// Coefficient of the surface-roughness law `R = 0.0321 · f² / r_e`.
pub const SURFACE_ROUGHNESS_COEFF: f64 = 0.0321;

/// Unit conversion in `P = F·V / (6120·η)`: kgf·m/min per kW.
pub const POWER_CONVERSION: f64 = 6120.0;

/// Aggregate model constants; the exponents are always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    /// Tool-life speed exponent, `1/l`.
    pub n1: f64,
    /// Tool-life depth exponent, `x_v/l`.
    pub n2: f64,
    /// Tool-life feed exponent, `y_v/l`.
    pub n3: f64,
    /// Taylor aggregate in `T = C0/(V^n1 d^n2 f^n3)`.
    pub c0: f64,
    /// Force aggregate in `F = C1 d^n4 f^n5`.
    pub c1: f64,
    /// Power aggregate in `P = C2 V d^n4 f^n5`.
    pub c2: f64,
    /// Machining-time cost factor, finish pass.
    pub a_s: f64,
    /// Edge-wear cost factor, finish pass.
    pub b_s: f64,
    /// Idle-travel cost, finish pass.
    pub c_s: f64,
    /// Machining-time cost factor, rough pass.
    pub a_r: f64,
    /// Edge-wear cost factor, rough pass.
    pub b_r: f64,
    /// Idle-travel cost, rough pass.
    pub c_r: f64,
}

/// One line of the derived-vs-supplied consistency report.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow {
    pub name: &'static str,
    pub derived: f64,
    pub supplied: Option<f64>,
    /// `|derived − supplied| / |derived|` when a supplied value exists.
    pub rel_diff: Option<f64>,
    /// Empty, `"mismatch"`, or `"swapped?"`.
    pub flag: &'static str,
}

/// Result of coefficient derivation plus the consistency report.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub derived: Coefficients,
    pub rows: Vec<CoefficientRow>,
    /// Set when the supplied per-pass edge-wear factors each match the
    /// *other* pass's derived value (a likely transcription swap).
    pub swap_warning: Option<String>,
}

/// Relative difference above which a supplied value is flagged.
const MISMATCH_REL: f64 = 1.0e-3;
/// A crossed pair must each match the other side this tightly to be called
/// a swap (and differ directly by more than [`MISMATCH_REL`]).
const SWAP_REL: f64 = 1.0e-3;

fn rel_diff(derived: f64, supplied: f64) -> f64 {
    (derived - supplied).abs() / derived.abs().max(f64::MIN_POSITIVE)
}

/// Derives the aggregate constants from the base dataset and compares them
/// with any supplied values.
/// Steps `x` down one ULP at a time until `recompute(x) <= limit`. Analytic
/// inversions of the power-law constraints can land a few ULPs above the
/// limit after the `powf` round trip; this makes the inverses safe, so a
/// plan pinned exactly at a cap re-evaluates as feasible.
fn round_down_to_limit(mut x: f64, limit: f64, recompute: impl Fn(f64) -> f64) -> f64 {
    while x > 0.0 && recompute(x) > limit {
        x = f64::from_bits(x.to_bits() - 1);
    }
    x
}

pub fn derive_coefficients(p: &ProblemData) -> Result<Derivation> {
    p.validate()?;
    let tl = &p.tool_life;
    let fc = &p.force;
    let n1 = 1.0 / tl.l;
    let n2 = tl.x_v / tl.l;
    let n3 = tl.y_v / tl.l;
    let d = p.cutter_diameter;
    let b_width = p.workpiece_width;
    let z = f64::from(p.teeth);

    // Taylor law solved for T: the speed equation
    //   V = C_v·K_v·D^q_v / (T^l · d^x_v · f^y_v · B^s_v · Z^p_v)
    // gives T = C0 / (V^n1 d^n2 f^n3) with
    //   C0 = [C_v·K_v·D^q_v / (B^s_v · Z^p_v)]^(1/l).
    let c0 = (tl.c_v * tl.k_v * d.powf(tl.q_v) / (b_width.powf(tl.s_v) * z.powf(tl.p_v))).powf(n1);

    // Force per the whole cutter: F = C_f·K_f·d^n4·f^n5·B^s_f·Z^p_f / D^q_f.
    let c1 = fc.c_f * fc.k_f * b_width.powf(fc.s_f) * z.powf(fc.p_f) / d.powf(fc.q_f);
    let c2 = c1 / (POWER_CONVERSION * p.efficiency);

    // Per-pass cost factors. Machining time per pass is
    // t_m = π·D·L_t / (1000·V·f·Z), so the k0·t_m cost is a/(V·f); the
    // per-pass edge consumption is Z·t_m/T, costing (k0·t_e + k_t) each.
    let (travel_finish, travel_rough) = p.travel_lengths();
    let per_pass = |travel: f64| -> (f64, f64, f64) {
        let time_factor = std::f64::consts::PI * d * travel / (1000.0 * z);
        (
            p.machine_rate * time_factor,
            (p.machine_rate * p.edge_change_time + p.edge_cost) * time_factor * z / c0,
            p.machine_rate * (p.travel_time_per_mm * travel + p.travel_time_fixed),
        )
    };
    let (a_s, b_s, c_s) = per_pass(travel_finish);
    let (a_r, b_r, c_r) = per_pass(travel_rough);

    let derived = Coefficients { n1, n2, n3, c0, c1, c2, a_s, b_s, c_s, a_r, b_r, c_r };

    let s = &p.supplied;
    let spec: [(&'static str, f64, Option<f64>); 9] = [
        ("C0", c0, s.c0),
        ("C1", c1, s.c1),
        ("C2", c2, s.c2),
        ("a_s", a_s, s.a_s),
        ("b_s", b_s, s.b_s),
        ("c_s", c_s, s.c_s),
        ("a_r", a_r, s.a_r),
        ("b_r", b_r, s.b_r),
        ("c_r", c_r, s.c_r),
    ];
    let mut rows: Vec<CoefficientRow> = spec
        .iter()
        .map(|&(name, derived, supplied)| {
            let rel = supplied.map(|v| rel_diff(derived, v));
            CoefficientRow {
                name,
                derived,
                supplied,
                rel_diff: rel,
                flag: match rel {
                    Some(r) if r > MISMATCH_REL => "mismatch",
                    _ => "",
                },
            }
        })
        .collect();

    // Swap detection on the per-pass edge-wear factors: each supplied value
    // matching the other pass's derived value (while mismatching its own)
    // indicates the two were transposed in the source data.
    let mut swap_warning = None;
    if let (Some(sup_s), Some(sup_r)) = (s.b_s, s.b_r) {
        let direct_off = rel_diff(b_s, sup_s) > MISMATCH_REL && rel_diff(b_r, sup_r) > MISMATCH_REL;
        let crossed_ok = rel_diff(b_s, sup_r) < SWAP_REL && rel_diff(b_r, sup_s) < SWAP_REL;
        if direct_off && crossed_ok {
            for row in rows.iter_mut().filter(|r| r.name == "b_s" || r.name == "b_r") {
                row.flag = "swapped?";
            }
            swap_warning = Some(String::from(
                "supplied b_s and b_r appear swapped: each matches the derived \
                 value for the other pass",
            ));
        }
    }

    Ok(Derivation { derived, rows, swap_warning })
}

/// A full candidate plan: continuous cutting conditions plus the discrete
/// depth allocation (depths in tenths of mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plan {
    /// Finish-pass cutting speed (m/min).
    pub v_s: f64,
    /// Finish-pass feed (mm/tooth).
    pub f_s: f64,
    /// Rough-pass cutting speed (m/min).
    pub v_r: f64,
    /// Rough-pass feed (mm/tooth).
    pub f_r: f64,
    /// Finish depth of cut, tenths of mm.
    pub ds_tenths: u32,
    /// Rough depth of cut, tenths of mm.
    pub dr_tenths: u32,
    /// Number of rough passes.
    pub n: u32,
}

impl Plan {
    /// Finish depth in mm.
    pub fn ds_mm(&self) -> f64 {
        tenths_to_mm(self.ds_tenths)
    }

    /// Rough depth in mm.
    pub fn dr_mm(&self) -> f64 {
        tenths_to_mm(self.dr_tenths)
    }

    /// Total stock removed, tenths of mm.
    pub fn total_tenths(&self) -> u32 {
        self.ds_tenths + self.n * self.dr_tenths
    }
}

/// Unit cost split into its four components; they sum to the total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    /// Actual cutting time cost (the `a` terms).
    pub machining: f64,
    /// Idle cost: preparation plus tool travel (`k0·t_p` and the `c` terms).
    pub idle: f64,
    /// Edge-replacement labour (`k0·t_e` share of the `b` terms).
    pub edge_replacement: f64,
    /// Tooling cost (`k_t` share of the `b` terms).
    pub tooling: f64,
    /// Cutting edges consumed per part.
    pub edges_consumed: f64,
    /// Total unit cost.
    pub total: f64,
}

/// Signed slack of one constraint: negative means violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slack {
    pub name: &'static str,
    /// Normalised slack `g`; feasible iff `g ≥ 0`. For an upper limit
    /// `g = 1 − value/limit`, for a lower limit `g = value/limit − 1`.
    pub value: f64,
}

/// All constraint slacks of a plan plus the aggregate violation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub slacks: Vec<Slack>,
    /// `Σ max(0, −g)` over all slacks; zero iff the plan is feasible.
    pub cv: f64,
}

impl ConstraintReport {
    pub fn is_feasible(&self) -> bool {
        self.cv == 0.0
    }

    /// The most violated constraint, if any.
    pub fn worst(&self) -> Option<&Slack> {
        self.slacks
            .iter()
            .filter(|s| s.value < 0.0)
            .min_by(|a, b| a.value.partial_cmp(&b.value).expect("slacks are finite"))
    }
}

/// The evaluable model: problem data plus the active cost coefficients.
#[derive(Debug, Clone)]
pub struct Model {
    problem: ProblemData,
    derivation: Derivation,
    active: Coefficients,
    feed_ub_finish: f64,
    feed_ub_rough: f64,
}

impl Model {
    /// Builds a model, deriving coefficients and honouring `coeff_mode`.
    pub fn new(problem: ProblemData) -> Result<Self> {
        let derivation = derive_coefficients(&problem)?;
        let mut active = derivation.derived;
        if problem.coeff_mode == CoeffMode::Supplied {
            let s = &problem.supplied;
            // Missing supplied values fall back to their derived ones.
            active.c0 = s.c0.unwrap_or(active.c0);
            active.c1 = s.c1.unwrap_or(active.c1);
            active.c2 = s.c2.unwrap_or(active.c2);
            active.a_s = s.a_s.unwrap_or(active.a_s);
            active.b_s = s.b_s.unwrap_or(active.b_s);
            active.c_s = s.c_s.unwrap_or(active.c_s);
            active.a_r = s.a_r.unwrap_or(active.a_r);
            active.b_r = s.b_r.unwrap_or(active.b_r);
            active.c_r = s.c_r.unwrap_or(active.c_r);
        }
        let surface_cap =
            |r_max: f64| (r_max * problem.nose_radius / SURFACE_ROUGHNESS_COEFF).sqrt();
        let feed_ub_finish =
            problem.finish_bounds.f_max.min(surface_cap(problem.surface_max_finish));
        let feed_ub_rough = problem.rough_bounds.f_max.min(surface_cap(problem.surface_max_rough));
        Ok(Model { problem, derivation, active, feed_ub_finish, feed_ub_rough })
    }

    pub fn problem(&self) -> &ProblemData {
        &self.problem
    }

    /// The consistency report produced while deriving coefficients.
    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    /// The coefficients the model actually evaluates with.
    pub fn coefficients(&self) -> &Coefficients {
        &self.active
    }

    /// Per-pass cost factors `(a, b, c)` for the given pass.
    pub fn pass_coefficients(&self, pass: PassKind) -> (f64, f64, f64) {
        let c = &self.active;
        match pass {
            PassKind::Finish => (c.a_s, c.b_s, c.c_s),
            PassKind::Rough => (c.a_r, c.b_r, c.c_r),
        }
    }

    fn check_positive(value: f64, what: &str) -> Result<()> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{what} must be positive and finite, got {value}"
            )));
        }
        Ok(())
    }

    /// Tool life `T = C0/(V^n1 · d^n2 · f^n3)` in minutes. The life law is
    /// common to both passes.
    pub fn tool_life(&self, v: f64, d: f64, f: f64) -> Result<f64> {
        Self::check_positive(v, "cutting speed")?;
        Self::check_positive(d, "depth of cut")?;
        Self::check_positive(f, "feed")?;
        let c = &self.active;
        Ok(c.c0 / (v.powf(c.n1) * d.powf(c.n2) * f.powf(c.n3)))
    }

    /// Cutting force `F = C1 · d^n4 · f^n5` in kgf.
    pub fn cutting_force(&self, d: f64, f: f64) -> Result<f64> {
        Self::check_positive(d, "depth of cut")?;
        Self::check_positive(f, "feed")?;
        let fc = &self.problem.force;
        Ok(self.active.c1 * d.powf(fc.n4) * f.powf(fc.n5))
    }

    /// Cutting power `P = C2 · V · d^n4 · f^n5` in kW.
    pub fn cutting_power(&self, v: f64, d: f64, f: f64) -> Result<f64> {
        Self::check_positive(v, "cutting speed")?;
        Self::check_positive(d, "depth of cut")?;
        Self::check_positive(f, "feed")?;
        let fc = &self.problem.force;
        Ok(self.active.c2 * v * d.powf(fc.n4) * f.powf(fc.n5))
    }

    /// Effective feed upper bound for a pass: the box bound merged with the
    /// surface-finish cap `f ≤ sqrt(R_max · r_e / 0.0321)`. Depth-independent.
    pub fn feed_upper_bound(&self, pass: PassKind) -> f64 {
        match pass {
            PassKind::Finish => self.feed_ub_finish,
            PassKind::Rough => self.feed_ub_rough,
        }
    }

    /// Largest feed whose cutting force stays within the limit at depth `d`.
    /// The returned feed re-evaluates to a force ≤ the limit, exactly.
    pub fn max_feed_for_force(&self, d: f64) -> Result<f64> {
        Self::check_positive(d, "depth of cut")?;
        let fc = &self.problem.force;
        let raw = (self.problem.force_max / (self.active.c1 * d.powf(fc.n4))).powf(1.0 / fc.n5);
        Ok(round_down_to_limit(raw, self.problem.force_max, |f| {
            self.active.c1 * d.powf(fc.n4) * f.powf(fc.n5)
        }))
    }

    /// Largest feed whose cutting power stays within the limit at `(v, d)`.
    /// The returned feed re-evaluates to a power ≤ the limit, exactly.
    pub fn max_feed_for_power(&self, v: f64, d: f64) -> Result<f64> {
        Self::check_positive(v, "cutting speed")?;
        Self::check_positive(d, "depth of cut")?;
        let fc = &self.problem.force;
        let raw = (self.problem.power_max / (self.active.c2 * v * d.powf(fc.n4))).powf(1.0 / fc.n5);
        Ok(round_down_to_limit(raw, self.problem.power_max, |f| {
            self.active.c2 * v * d.powf(fc.n4) * f.powf(fc.n5)
        }))
    }

    /// Largest speed whose cutting power stays within the limit at `(d, f)`.
    /// The returned speed re-evaluates to a power ≤ the limit, exactly.
    pub fn max_speed_for_power(&self, d: f64, f: f64) -> Result<f64> {
        Self::check_positive(d, "depth of cut")?;
        Self::check_positive(f, "feed")?;
        let fc = &self.problem.force;
        let raw = self.problem.power_max / (self.active.c2 * d.powf(fc.n4) * f.powf(fc.n5));
        Ok(round_down_to_limit(raw, self.problem.power_max, |v| {
            self.active.c2 * v * d.powf(fc.n4) * f.powf(fc.n5)
        }))
    }

    /// Cost of a single pass: `a/(V·f) + b·V^(n1−1)·d^n2·f^(n3−1) + c`.
    pub fn pass_cost(&self, pass: PassKind, v: f64, d: f64, f: f64) -> Result<f64> {
        Self::check_positive(v, "cutting speed")?;
        Self::check_positive(d, "depth of cut")?;
        Self::check_positive(f, "feed")?;
        Ok(self.pass_cost_unchecked(pass, v, d, f))
    }

    fn pass_cost_unchecked(&self, pass: PassKind, v: f64, d: f64, f: f64) -> f64 {
        let c = &self.active;
        let (a, b, cc) = self.pass_coefficients(pass);
        a / (v * f) + b * v.powf(c.n1 - 1.0) * d.powf(c.n2) * f.powf(c.n3 - 1.0) + cc
    }

    /// Unit production cost of a plan.
    pub fn unit_cost(&self, plan: &Plan) -> Result<f64> {
        if plan.n < 1 {
            return Err(Error::InvalidInput("a plan needs at least one rough pass".into()));
        }
        let finish = self.pass_cost(PassKind::Finish, plan.v_s, plan.ds_mm(), plan.f_s)?;
        let rough = self.pass_cost(PassKind::Rough, plan.v_r, plan.dr_mm(), plan.f_r)?;
        Ok(finish + f64::from(plan.n) * rough + self.problem.machine_rate * self.problem.prep_time)
    }

    /// Unit cost split into machining / idle / edge replacement / tooling.
    pub fn cost_breakdown(&self, plan: &Plan) -> Result<CostBreakdown> {
        let total = self.unit_cost(plan)?;
        let c = &self.active;
        let p = &self.problem;
        let n = f64::from(plan.n);
        let machining = c.a_s / (plan.v_s * plan.f_s) + n * c.a_r / (plan.v_r * plan.f_r);
        let idle = p.machine_rate * p.prep_time + c.c_s + n * c.c_r;
        let wear = |b: f64, v: f64, d: f64, f: f64| {
            b * v.powf(c.n1 - 1.0) * d.powf(c.n2) * f.powf(c.n3 - 1.0)
        };
        let wear_total = wear(c.b_s, plan.v_s, plan.ds_mm(), plan.f_s)
            + n * wear(c.b_r, plan.v_r, plan.dr_mm(), plan.f_r);
        // b = (k0·t_e + k_t)·(edges per unit of the wear kernel), so the
        // wear cost splits across labour and tooling in that fixed ratio
        // and the edge count is the wear cost over the per-edge cost.
        let per_edge = p.machine_rate * p.edge_change_time + p.edge_cost;
        let edges_consumed = wear_total / per_edge;
        Ok(CostBreakdown {
            machining,
            idle,
            edge_replacement: edges_consumed * p.machine_rate * p.edge_change_time,
            tooling: edges_consumed * p.edge_cost,
            edges_consumed,
            total,
        })
    }

    /// Signed slacks of every constraint at a plan.
    pub fn constraint_report(&self, plan: &Plan) -> Result<ConstraintReport> {
        if !(plan.v_s > 0.0 && plan.f_s > 0.0 && plan.v_r > 0.0 && plan.f_r > 0.0) {
            return Err(Error::InvalidInput(
                "speeds and feeds must be positive to evaluate constraints".into(),
            ));
        }
        let p = &self.problem;
        let ds = plan.ds_mm();
        let dr = plan.dr_mm();
        let upper = |value: f64, limit: f64| 1.0 - value / limit;
        let lower = |value: f64, limit: f64| value / limit - 1.0;
        let force_s = self.cutting_force(ds, plan.f_s)?;
        let force_r = self.cutting_force(dr, plan.f_r)?;
        let power_s = self.cutting_power(plan.v_s, ds, plan.f_s)?;
        let power_r = self.cutting_power(plan.v_r, dr, plan.f_r)?;
        let slacks = vec![
            Slack { name: "force_finish", value: upper(force_s, p.force_max) },
            Slack { name: "force_rough", value: upper(force_r, p.force_max) },
            Slack { name: "power_finish", value: upper(power_s, p.power_max) },
            Slack { name: "power_rough", value: upper(power_r, p.power_max) },
            Slack { name: "feed_finish_high", value: upper(plan.f_s, self.feed_ub_finish) },
            Slack { name: "feed_rough_high", value: upper(plan.f_r, self.feed_ub_rough) },
            Slack { name: "speed_finish_high", value: upper(plan.v_s, p.finish_bounds.v_max) },
            Slack { name: "speed_rough_high", value: upper(plan.v_r, p.rough_bounds.v_max) },
            Slack { name: "speed_finish_low", value: lower(plan.v_s, p.finish_bounds.v_min) },
            Slack { name: "speed_rough_low", value: lower(plan.v_r, p.rough_bounds.v_min) },
            Slack { name: "feed_finish_low", value: lower(plan.f_s, p.finish_bounds.f_min) },
            Slack { name: "feed_rough_low", value: lower(plan.f_r, p.rough_bounds.f_min) },
            Slack {
                name: "depth_finish_high",
                value: upper(ds, tenths_to_mm(p.finish_depths.max_tenths)),
            },
            Slack {
                name: "depth_rough_high",
                value: upper(dr, tenths_to_mm(p.rough_depths.max_tenths)),
            },
            Slack {
                name: "depth_finish_low",
                value: lower(ds, tenths_to_mm(p.finish_depths.min_tenths)),
            },
            Slack {
                name: "depth_rough_low",
                value: lower(dr, tenths_to_mm(p.rough_depths.min_tenths)),
            },
            Slack { name: "pass_count", value: lower(f64::from(plan.n), 1.0) },
        ];
        let cv = slacks.iter().map(|s| (-s.value).max(0.0)).sum();
        Ok(ConstraintReport { slacks, cv })
    }

    /// Fast path for optimizer loops: `(unit cost, constraint violation)`.
    /// Equivalent to [`Self::unit_cost`] + [`Self::constraint_report`] for
    /// positive inputs but without allocation.
    pub fn evaluate(&self, plan: &Plan) -> (f64, f64) {
        let p = &self.problem;
        let c = &self.active;
        let fc = &p.force;
        let ds = plan.ds_mm();
        let dr = plan.dr_mm();
        let n = f64::from(plan.n);

        let ds_n4 = ds.powf(fc.n4);
        let dr_n4 = dr.powf(fc.n4);
        let fs_n5 = plan.f_s.powf(fc.n5);
        let fr_n5 = plan.f_r.powf(fc.n5);
        let force_s = c.c1 * ds_n4 * fs_n5;
        let force_r = c.c1 * dr_n4 * fr_n5;
        let power_s = c.c2 * plan.v_s * ds_n4 * fs_n5;
        let power_r = c.c2 * plan.v_r * dr_n4 * fr_n5;

        // Terms accumulate in the report's slack order so that both paths
        // agree bit for bit on the violation value.
        let over = |value: f64, limit: f64| (value / limit - 1.0).max(0.0);
        let under = |value: f64, limit: f64| (1.0 - value / limit).max(0.0);
        let mut cv = 0.0;
        cv += over(force_s, p.force_max);
        cv += over(force_r, p.force_max);
        cv += over(power_s, p.power_max);
        cv += over(power_r, p.power_max);
        cv += over(plan.f_s, self.feed_ub_finish);
        cv += over(plan.f_r, self.feed_ub_rough);
        cv += over(plan.v_s, p.finish_bounds.v_max);
        cv += over(plan.v_r, p.rough_bounds.v_max);
        cv += under(plan.v_s, p.finish_bounds.v_min);
        cv += under(plan.v_r, p.rough_bounds.v_min);
        cv += under(plan.f_s, p.finish_bounds.f_min);
        cv += under(plan.f_r, p.rough_bounds.f_min);
        cv += over(ds, tenths_to_mm(p.finish_depths.max_tenths));
        cv += over(dr, tenths_to_mm(p.rough_depths.max_tenths));
        cv += under(ds, tenths_to_mm(p.finish_depths.min_tenths));
        cv += under(dr, tenths_to_mm(p.rough_depths.min_tenths));
        cv += under(n, 1.0);

        let uc = self.pass_cost_unchecked(PassKind::Finish, plan.v_s, ds, plan.f_s)
            + n * self.pass_cost_unchecked(PassKind::Rough, plan.v_r, dr, plan.f_r)
            + p.machine_rate * p.prep_time;
        (uc, cv)
    }
}
