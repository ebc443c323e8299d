//! Problem dataset: machine, tool, and economic constants plus variable
//! bounds and constraint limits, with validation.
//!
//! Depths are carried as integer tenths of a millimetre so that the equality
//! `d_t = d_s + n·d_r` can be tested exactly; conversion to mm happens only
//! at the model boundary.

use crate::error::{Error, Result};

/// Continuous-variable bounds for one pass kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarBounds {
    /// Cutting-speed range (m/min).
    pub v_min: f64,
    pub v_max: f64,
    /// Feed-per-tooth range (mm/tooth), before the surface-finish cap.
    pub f_min: f64,
    pub f_max: f64,
}

/// Discrete depth-of-cut grid in tenths of a millimetre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthGrid {
    pub min_tenths: u32,
    pub max_tenths: u32,
    pub step_tenths: u32,
}

impl DepthGrid {
    /// Iterates the grid values (tenths of mm), ascending.
    pub fn values(&self) -> impl Iterator<Item = u32> + '_ {
        (self.min_tenths..=self.max_tenths).step_by(self.step_tenths.max(1) as usize)
    }

    /// Largest value on the grid not exceeding `max_tenths`.
    pub fn top(&self) -> u32 {
        let span = self.max_tenths - self.min_tenths;
        self.min_tenths + span - span % self.step_tenths.max(1)
    }

    /// True if `v` (tenths of mm) lies on the grid.
    pub fn contains(&self, v: u32) -> bool {
        v >= self.min_tenths
            && v <= self.max_tenths
            && (v - self.min_tenths) % self.step_tenths.max(1) == 0
    }
}

/// Which `a/b/c` cost coefficients the model evaluates with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoeffMode {
    /// Use coefficients derived from the base data (default).
    #[default]
    Derived,
    /// Use the user-supplied coefficient values verbatim.
    Supplied,
}

/// Where the cutting travel lengths come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TravelMode {
    /// Use the travel lengths stored in the dataset (default).
    #[default]
    Stored,
    /// Recompute them from workpiece length, cutter diameter and extra
    /// travel: `L_tr = L + a_p + e_r` with
    /// `a_p = D/2 − sqrt((D/2)² − (B/2)²)`, and `L_ts = L + D + e_s`.
    Recomputed,
}

/// Optional user-supplied values for the derived constants; used by the
/// consistency report and by [`CoeffMode::Supplied`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuppliedCoefficients {
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub a_s: Option<f64>,
    pub b_s: Option<f64>,
    pub c_s: Option<f64>,
    pub a_r: Option<f64>,
    pub b_r: Option<f64>,
    pub c_r: Option<f64>,
}

/// Tool-life model constants (extended Taylor form).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToolLifeConstants {
    pub c_v: f64,
    pub k_v: f64,
    /// Speed exponent `l` of the base Taylor law; the derived exponents are
    /// n1 = 1/l, n2 = x_v/l, n3 = y_v/l.
    pub l: f64,
    pub x_v: f64,
    pub y_v: f64,
    pub p_v: f64,
    pub q_v: f64,
    pub s_v: f64,
}

/// Cutting-force model constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceConstants {
    pub c_f: f64,
    pub k_f: f64,
    pub s_f: f64,
    pub p_f: f64,
    pub q_f: f64,
    /// Depth exponent of the force law.
    pub n4: f64,
    /// Feed exponent of the force law.
    pub n5: f64,
}

/// Fixed cutting parameters used by the closed-form estimation strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateDefaults {
    pub v_s: f64,
    pub v_r: f64,
    pub f_s: f64,
}

/// Complete problem dataset. `Default` yields the embedded example dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    // --- geometry ---
    /// Workpiece length L (mm).
    pub workpiece_length: f64,
    /// Workpiece width B (mm).
    pub workpiece_width: f64,
    /// Cutter diameter D (mm).
    pub cutter_diameter: f64,
    /// Number of cutter teeth Z.
    pub teeth: u32,
    /// Tool nose radius r_e (mm).
    pub nose_radius: f64,
    /// Extra cutter travel at the ends, rough pass e_r (mm).
    pub extra_travel_rough: f64,
    /// Extra cutter travel at the ends, finish pass e_s (mm).
    pub extra_travel_finish: f64,
    /// Cutting travel length, rough pass L_tr (mm).
    pub travel_rough: f64,
    /// Cutting travel length, finish pass L_ts (mm).
    pub travel_finish: f64,

    // --- economics ---
    /// Machine + operator rate k0 ($/min).
    pub machine_rate: f64,
    /// Tool cost per cutting edge k_t ($/edge).
    pub edge_cost: f64,
    /// Edge-change time t_e (min/edge).
    pub edge_change_time: f64,
    /// Preparation/loading time per piece t_p (min).
    pub prep_time: f64,
    /// Idle-travel time per mm of tool travel h1 (min/mm).
    pub travel_time_per_mm: f64,
    /// Fixed idle time per pass h2 (min).
    pub travel_time_fixed: f64,

    // --- bounds ---
    pub finish_bounds: VarBounds,
    pub rough_bounds: VarBounds,
    pub finish_depths: DepthGrid,
    pub rough_depths: DepthGrid,

    // --- limits ---
    /// Maximum allowed cutting force F_max (kgf).
    pub force_max: f64,
    /// Maximum allowed cutting power P_max (kW).
    pub power_max: f64,
    /// Maximum surface roughness, finish pass R_s_max (mm).
    pub surface_max_finish: f64,
    /// Maximum surface roughness, rough pass R_r_max (mm).
    pub surface_max_rough: f64,
    /// Machine-tool efficiency η in (0, 1].
    pub efficiency: f64,

    // --- model constants ---
    pub tool_life: ToolLifeConstants,
    pub force: ForceConstants,

    // --- modes and auxiliary values ---
    pub coeff_mode: CoeffMode,
    pub travel_mode: TravelMode,
    pub supplied: SuppliedCoefficients,
    pub estimate_defaults: EstimateDefaults,
}

impl Default for ProblemData {
    /// The embedded example dataset (the golden-test workload).
    fn default() -> Self {
        ProblemData {
            workpiece_length: 400.0,
            workpiece_width: 100.0,
            cutter_diameter: 160.0,
            teeth: 16,
            nose_radius: 1.0,
            extra_travel_rough: 3.0,
            extra_travel_finish: 3.0,
            travel_rough: 260.55,
            travel_finish: 403.0,
            machine_rate: 0.5,
            edge_cost: 2.5,
            edge_change_time: 1.5,
            prep_time: 0.75,
            travel_time_per_mm: 7.0e-4,
            travel_time_fixed: 0.3,
            finish_bounds: VarBounds { v_min: 50.0, v_max: 300.0, f_min: 0.1, f_max: 0.6 },
            rough_bounds: VarBounds { v_min: 50.0, v_max: 300.0, f_min: 0.1, f_max: 0.6 },
            finish_depths: DepthGrid { min_tenths: 5, max_tenths: 20, step_tenths: 1 },
            rough_depths: DepthGrid { min_tenths: 10, max_tenths: 40, step_tenths: 1 },
            force_max: 815.77,
            power_max: 10.0,
            surface_max_finish: 0.0025,
            surface_max_rough: 0.025,
            efficiency: 0.8,
            tool_life: ToolLifeConstants {
                c_v: 445.0,
                k_v: 1.0,
                l: 0.32,
                x_v: 0.15,
                y_v: 0.35,
                p_v: 0.0,
                q_v: 0.2,
                s_v: 0.2,
            },
            force: ForceConstants {
                c_f: 54.5,
                k_f: 1.0,
                s_f: 1.0,
                p_f: 1.0,
                q_f: 1.0,
                n4: 0.9,
                n5: 0.74,
            },
            coeff_mode: CoeffMode::Derived,
            travel_mode: TravelMode::Stored,
            supplied: SuppliedCoefficients {
                c0: Some(253_337_816.7),
                c1: Some(545.0),
                c2: Some(0.111_315),
                a_s: Some(6.330_309),
                b_s: Some(1.680_135e-6),
                c_s: Some(0.291_05),
                a_r: Some(4.092_71),
                b_r: Some(2.598_712e-6),
                c_r: Some(0.241_192_5),
            },
            estimate_defaults: EstimateDefaults { v_s: 123.2, v_r: 60.35, f_s: 0.279 },
        }
    }
}

fn require_positive(value: f64, key: &str) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Config {
            key: key.to_string(),
            reason: format!("must be positive and finite, got {value}"),
        });
    }
    Ok(())
}

fn validate_bounds(b: &VarBounds, what: &str) -> Result<()> {
    require_positive(b.v_min, &format!("{what} V_min"))?;
    require_positive(b.f_min, &format!("{what} f_min"))?;
    if b.v_min > b.v_max {
        return Err(Error::Config {
            key: format!("{what} V bounds"),
            reason: format!("min {} exceeds max {}", b.v_min, b.v_max),
        });
    }
    if b.f_min > b.f_max {
        return Err(Error::Config {
            key: format!("{what} f bounds"),
            reason: format!("min {} exceeds max {}", b.f_min, b.f_max),
        });
    }
    Ok(())
}

fn validate_grid(g: &DepthGrid, what: &str) -> Result<()> {
    if g.step_tenths == 0 {
        return Err(Error::Config {
            key: format!("{what} step"),
            reason: "must be > 0".to_string(),
        });
    }
    if g.min_tenths == 0 {
        return Err(Error::Config {
            key: format!("{what} min"),
            reason: "must be > 0".to_string(),
        });
    }
    if g.min_tenths > g.max_tenths {
        return Err(Error::Config {
            key: format!("{what} bounds"),
            reason: format!("min {} exceeds max {}", g.min_tenths, g.max_tenths),
        });
    }
    Ok(())
}

impl ProblemData {
    /// Checks all data invariants; every loader calls this before use.
    pub fn validate(&self) -> Result<()> {
        require_positive(self.workpiece_length, "L")?;
        require_positive(self.workpiece_width, "B")?;
        require_positive(self.cutter_diameter, "D")?;
        if self.teeth < 1 {
            return Err(Error::Config { key: "Z".into(), reason: "must be >= 1".into() });
        }
        require_positive(self.nose_radius, "r_e")?;
        require_positive(self.travel_rough, "L_tr")?;
        require_positive(self.travel_finish, "L_ts")?;
        require_positive(self.machine_rate, "k0")?;
        require_positive(self.prep_time, "t_p")?;
        require_positive(self.force_max, "F_max")?;
        require_positive(self.power_max, "P_max")?;
        require_positive(self.surface_max_finish, "R_s_max")?;
        require_positive(self.surface_max_rough, "R_r_max")?;
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::Config {
                key: "eta".into(),
                reason: format!("must be in (0, 1], got {}", self.efficiency),
            });
        }
        if self.edge_cost < 0.0 || self.edge_change_time < 0.0 {
            return Err(Error::Config {
                key: "k_t/t_e".into(),
                reason: "must be non-negative".into(),
            });
        }
        if self.travel_time_per_mm < 0.0 || self.travel_time_fixed < 0.0 {
            return Err(Error::Config {
                key: "h1/h2".into(),
                reason: "must be non-negative".into(),
            });
        }
        validate_bounds(&self.finish_bounds, "finish")?;
        validate_bounds(&self.rough_bounds, "rough")?;
        validate_grid(&self.finish_depths, "d_s")?;
        validate_grid(&self.rough_depths, "d_r")?;
        let tl = &self.tool_life;
        for (v, k) in [(tl.c_v, "C_v"), (tl.k_v, "K_v"), (tl.l, "l")] {
            require_positive(v, k)?;
        }
        if tl.l >= 1.0 {
            return Err(Error::Config {
                key: "l".into(),
                reason: format!("speed exponent must be in (0, 1) so that n1 > 1, got {}", tl.l),
            });
        }
        let fc = &self.force;
        require_positive(fc.c_f, "C_f")?;
        require_positive(fc.k_f, "K_f")?;
        require_positive(fc.n4, "n4")?;
        require_positive(fc.n5, "n5")?;
        let est = &self.estimate_defaults;
        require_positive(est.v_s, "est_V_s")?;
        require_positive(est.v_r, "est_V_r")?;
        require_positive(est.f_s, "est_f_s")?;
        Ok(())
    }

    /// Effective travel lengths (finish, rough) for the active travel mode.
    pub fn travel_lengths(&self) -> (f64, f64) {
        match self.travel_mode {
            TravelMode::Stored => (self.travel_finish, self.travel_rough),
            TravelMode::Recomputed => {
                let half_d = self.cutter_diameter / 2.0;
                let half_b = self.workpiece_width / 2.0;
                let approach = half_d - (half_d * half_d - half_b * half_b).max(0.0).sqrt();
                (
                    self.workpiece_length + self.cutter_diameter + self.extra_travel_finish,
                    self.workpiece_length + approach + self.extra_travel_rough,
                )
            }
        }
    }
}

/// Converts a millimetre value to integer tenths, requiring it to sit on the
/// 0.1 mm grid.
pub fn mm_to_tenths(mm: f64, key: &str) -> Result<u32> {
    if !mm.is_finite() || mm < 0.0 {
        return Err(Error::Config {
            key: key.to_string(),
            reason: format!("must be a non-negative finite depth, got {mm}"),
        });
    }
    let scaled = mm * 10.0;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-6 {
        return Err(Error::Config {
            key: key.to_string(),
            reason: format!("{mm} mm is not on the 0.1 mm depth grid"),
        });
    }
    Ok(rounded as u32)
}

/// Millimetre value of an integer tenths count.
pub fn tenths_to_mm(tenths: u32) -> f64 {
    f64::from(tenths) / 10.0
}
