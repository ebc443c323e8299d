//! Flat `key = value` configuration files.
//!
//! A config file overrides fields of the embedded default dataset and of the
//! GA settings. Blank lines and `#` comments are ignored; unknown keys are
//! errors (typos must not silently fall back to defaults).

use crate::error::{Error, Result};
use crate::ga::GaConfig;
use crate::problem::{mm_to_tenths, tenths_to_mm, CoeffMode, ProblemData, TravelMode};

/// Everything a config file can set: the dataset plus GA settings.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub problem: ProblemData,
    pub ga: GaConfig,
}

impl Settings {
    /// Parses config text on top of the defaults and validates the result.
    pub fn from_str(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        s.apply_str(text)?;
        s.problem.validate()?;
        s.ga.validate()?;
        Ok(s)
    }

    /// Applies config text to the current settings without validating;
    /// callers validate after all sources are applied.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                key: format!("line {}", lineno + 1),
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |reason: String| Error::Config { key: key.to_string(), reason };
        let f = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|e| bad(format!("expected a number, got `{v}` ({e})")))
        };
        let u = |v: &str| -> Result<u32> {
            v.parse::<u32>()
                .map_err(|e| bad(format!("expected a non-negative integer, got `{v}` ({e})")))
        };
        let tenths = |v: &str| -> Result<u32> { mm_to_tenths(f(v)?, key) };

        let p = &mut self.problem;
        match key {
            // geometry
            "L" => p.workpiece_length = f(value)?,
            "B" => p.workpiece_width = f(value)?,
            "D" => p.cutter_diameter = f(value)?,
            "Z" => p.teeth = u(value)?,
            "r_e" => p.nose_radius = f(value)?,
            "e_r" => p.extra_travel_rough = f(value)?,
            "e_s" => p.extra_travel_finish = f(value)?,
            "L_tr" => p.travel_rough = f(value)?,
            "L_ts" => p.travel_finish = f(value)?,
            // economics
            "k0" => p.machine_rate = f(value)?,
            "k_t" => p.edge_cost = f(value)?,
            "t_e" => p.edge_change_time = f(value)?,
            "t_p" => p.prep_time = f(value)?,
            "h1" => p.travel_time_per_mm = f(value)?,
            "h2" => p.travel_time_fixed = f(value)?,
            // bounds, per pass
            "V_s_min" => p.finish_bounds.v_min = f(value)?,
            "V_s_max" => p.finish_bounds.v_max = f(value)?,
            "V_r_min" => p.rough_bounds.v_min = f(value)?,
            "V_r_max" => p.rough_bounds.v_max = f(value)?,
            "f_s_min" => p.finish_bounds.f_min = f(value)?,
            "f_s_max" => p.finish_bounds.f_max = f(value)?,
            "f_r_min" => p.rough_bounds.f_min = f(value)?,
            "f_r_max" => p.rough_bounds.f_max = f(value)?,
            // bounds, both passes at once
            "V_min" => {
                let v = f(value)?;
                p.finish_bounds.v_min = v;
                p.rough_bounds.v_min = v;
            }
            "V_max" => {
                let v = f(value)?;
                p.finish_bounds.v_max = v;
                p.rough_bounds.v_max = v;
            }
            "f_min" => {
                let v = f(value)?;
                p.finish_bounds.f_min = v;
                p.rough_bounds.f_min = v;
            }
            "f_max" => {
                let v = f(value)?;
                p.finish_bounds.f_max = v;
                p.rough_bounds.f_max = v;
            }
            // depth grids (values in mm, stored as tenths)
            "d_s_min" => p.finish_depths.min_tenths = tenths(value)?,
            "d_s_max" => p.finish_depths.max_tenths = tenths(value)?,
            "d_s_step" => p.finish_depths.step_tenths = tenths(value)?,
            "d_r_min" => p.rough_depths.min_tenths = tenths(value)?,
            "d_r_max" => p.rough_depths.max_tenths = tenths(value)?,
            "d_r_step" => p.rough_depths.step_tenths = tenths(value)?,
            // limits
            "F_max" => p.force_max = f(value)?,
            "P_max" => p.power_max = f(value)?,
            "R_s_max" => p.surface_max_finish = f(value)?,
            "R_r_max" => p.surface_max_rough = f(value)?,
            "eta" => p.efficiency = f(value)?,
            // tool-life constants
            "C_v" => p.tool_life.c_v = f(value)?,
            "K_v" => p.tool_life.k_v = f(value)?,
            "l" => p.tool_life.l = f(value)?,
            "x_v" => p.tool_life.x_v = f(value)?,
            "y_v" => p.tool_life.y_v = f(value)?,
            "p_v" => p.tool_life.p_v = f(value)?,
            "q_v" => p.tool_life.q_v = f(value)?,
            "s_v" => p.tool_life.s_v = f(value)?,
            // force constants
            "C_f" => p.force.c_f = f(value)?,
            "K_f" => p.force.k_f = f(value)?,
            "s_f" => p.force.s_f = f(value)?,
            "p_f" => p.force.p_f = f(value)?,
            "q_f" => p.force.q_f = f(value)?,
            "n4" => p.force.n4 = f(value)?,
            "n5" => p.force.n5 = f(value)?,
            // supplied coefficient values
            "C0" => p.supplied.c0 = Some(f(value)?),
            "C1" => p.supplied.c1 = Some(f(value)?),
            "C2" => p.supplied.c2 = Some(f(value)?),
            "a_s" => p.supplied.a_s = Some(f(value)?),
            "b_s" => p.supplied.b_s = Some(f(value)?),
            "c_s" => p.supplied.c_s = Some(f(value)?),
            "a_r" => p.supplied.a_r = Some(f(value)?),
            "b_r" => p.supplied.b_r = Some(f(value)?),
            "c_r" => p.supplied.c_r = Some(f(value)?),
            // modes
            "coeff_mode" => {
                p.coeff_mode = match value {
                    "derived" => CoeffMode::Derived,
                    "supplied" => CoeffMode::Supplied,
                    other => {
                        return Err(bad(format!("expected `derived` or `supplied`, got `{other}`")))
                    }
                }
            }
            "travel_mode" => {
                p.travel_mode = match value {
                    "stored" => TravelMode::Stored,
                    "recomputed" => TravelMode::Recomputed,
                    other => {
                        return Err(bad(format!(
                            "expected `stored` or `recomputed`, got `{other}`"
                        )))
                    }
                }
            }
            // estimation defaults
            "est_V_s" => p.estimate_defaults.v_s = f(value)?,
            "est_V_r" => p.estimate_defaults.v_r = f(value)?,
            "est_f_s" => p.estimate_defaults.f_s = f(value)?,
            // GA settings
            "N" => self.ga.pop_size = u(value)? as usize,
            "generations" => self.ga.generations = u(value)? as usize,
            "p_c" => self.ga.p_c = f(value)?,
            "p_m" => self.ga.p_m = f(value)?,
            "bits" => self.ga.bits = u(value)?,
            "index_bits" => self.ga.index_bits = Some(u(value)?),
            "seed" => {
                self.ga.seed = value
                    .parse::<u64>()
                    .map_err(|e| bad(format!("expected a u64 seed, got `{value}` ({e})")))?
            }
            "gap_threshold" => self.ga.gap_threshold = f(value)?,
            other => {
                return Err(Error::Config {
                    key: other.to_string(),
                    reason: "unknown configuration key".to_string(),
                })
            }
        }
        Ok(())
    }

    /// Echoes every configuration key with its effective value, in the
    /// documented key order. The output parses back into equal settings, so
    /// a run can be reproduced from its manifest alone.
    pub fn manifest(&self) -> String {
        use std::fmt::Write;
        let p = &self.problem;
        let mut s = String::new();
        let mut kv = |key: &str, value: String| writeln!(s, "{key} = {value}").unwrap();
        let mm = |tenths: u32| tenths_to_mm(tenths).to_string();

        kv("L", p.workpiece_length.to_string());
        kv("B", p.workpiece_width.to_string());
        kv("D", p.cutter_diameter.to_string());
        kv("Z", p.teeth.to_string());
        kv("r_e", p.nose_radius.to_string());
        kv("e_r", p.extra_travel_rough.to_string());
        kv("e_s", p.extra_travel_finish.to_string());
        kv("L_tr", p.travel_rough.to_string());
        kv("L_ts", p.travel_finish.to_string());
        kv("k0", p.machine_rate.to_string());
        kv("k_t", p.edge_cost.to_string());
        kv("t_e", p.edge_change_time.to_string());
        kv("t_p", p.prep_time.to_string());
        kv("h1", p.travel_time_per_mm.to_string());
        kv("h2", p.travel_time_fixed.to_string());
        kv("V_s_min", p.finish_bounds.v_min.to_string());
        kv("V_s_max", p.finish_bounds.v_max.to_string());
        kv("V_r_min", p.rough_bounds.v_min.to_string());
        kv("V_r_max", p.rough_bounds.v_max.to_string());
        kv("f_s_min", p.finish_bounds.f_min.to_string());
        kv("f_s_max", p.finish_bounds.f_max.to_string());
        kv("f_r_min", p.rough_bounds.f_min.to_string());
        kv("f_r_max", p.rough_bounds.f_max.to_string());
        kv("d_s_min", mm(p.finish_depths.min_tenths));
        kv("d_s_max", mm(p.finish_depths.max_tenths));
        kv("d_s_step", mm(p.finish_depths.step_tenths));
        kv("d_r_min", mm(p.rough_depths.min_tenths));
        kv("d_r_max", mm(p.rough_depths.max_tenths));
        kv("d_r_step", mm(p.rough_depths.step_tenths));
        kv("F_max", p.force_max.to_string());
        kv("P_max", p.power_max.to_string());
        kv("R_s_max", p.surface_max_finish.to_string());
        kv("R_r_max", p.surface_max_rough.to_string());
        kv("eta", p.efficiency.to_string());
        kv("C_v", p.tool_life.c_v.to_string());
        kv("K_v", p.tool_life.k_v.to_string());
        kv("l", p.tool_life.l.to_string());
        kv("x_v", p.tool_life.x_v.to_string());
        kv("y_v", p.tool_life.y_v.to_string());
        kv("p_v", p.tool_life.p_v.to_string());
        kv("q_v", p.tool_life.q_v.to_string());
        kv("s_v", p.tool_life.s_v.to_string());
        kv("C_f", p.force.c_f.to_string());
        kv("K_f", p.force.k_f.to_string());
        kv("s_f", p.force.s_f.to_string());
        kv("p_f", p.force.p_f.to_string());
        kv("q_f", p.force.q_f.to_string());
        kv("n4", p.force.n4.to_string());
        kv("n5", p.force.n5.to_string());
        for (key, value) in [
            ("C0", p.supplied.c0),
            ("C1", p.supplied.c1),
            ("C2", p.supplied.c2),
            ("a_s", p.supplied.a_s),
            ("b_s", p.supplied.b_s),
            ("c_s", p.supplied.c_s),
            ("a_r", p.supplied.a_r),
            ("b_r", p.supplied.b_r),
            ("c_r", p.supplied.c_r),
        ] {
            if let Some(v) = value {
                kv(key, v.to_string());
            }
        }
        kv(
            "coeff_mode",
            match p.coeff_mode {
                CoeffMode::Derived => "derived".to_string(),
                CoeffMode::Supplied => "supplied".to_string(),
            },
        );
        kv(
            "travel_mode",
            match p.travel_mode {
                TravelMode::Stored => "stored".to_string(),
                TravelMode::Recomputed => "recomputed".to_string(),
            },
        );
        kv("est_V_s", p.estimate_defaults.v_s.to_string());
        kv("est_V_r", p.estimate_defaults.v_r.to_string());
        kv("est_f_s", p.estimate_defaults.f_s.to_string());
        kv("N", self.ga.pop_size.to_string());
        kv("generations", self.ga.generations.to_string());
        kv("p_c", self.ga.p_c.to_string());
        kv("p_m", self.ga.p_m.to_string());
        kv("bits", self.ga.bits.to_string());
        if let Some(bits) = self.ga.index_bits {
            kv("index_bits", bits.to_string());
        }
        kv("seed", self.ga.seed.to_string());
        kv("gap_threshold", self.ga.gap_threshold.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_the_defaults() {
        let s = Settings::from_str("").unwrap();
        assert_eq!(s.problem, ProblemData::default());
        assert_eq!(s.ga.pop_size, GaConfig::default().pop_size);
    }

    #[test]
    fn comments_blanks_and_overrides_parse() {
        let text = "\n# total stock comes from the job\nF_max = 900 # relaxed\nN=200\n  seed =  7\nd_r_max = 3.5\n";
        let s = Settings::from_str(text).unwrap();
        assert_eq!(s.problem.force_max, 900.0);
        assert_eq!(s.ga.pop_size, 200);
        assert_eq!(s.ga.seed, 7);
        assert_eq!(s.problem.rough_depths.max_tenths, 35);
    }

    #[test]
    fn unknown_key_is_rejected_with_its_name() {
        let err = Settings::from_str("F_maxx = 1\n").unwrap_err();
        match err {
            Error::Config { key, .. } => assert_eq!(key, "F_maxx"),
            other => panic!("expected Config error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = Settings::from_str("eta 0.8\n").unwrap_err();
        match err {
            Error::Config { key, .. } => assert_eq!(key, "line 1"),
            other => panic!("expected Config error, got {other:?}"),
        }
    }

    #[test]
    fn convenience_bounds_set_both_passes() {
        let s = Settings::from_str("V_max = 250\nf_min = 0.2\n").unwrap();
        assert_eq!(s.problem.finish_bounds.v_max, 250.0);
        assert_eq!(s.problem.rough_bounds.v_max, 250.0);
        assert_eq!(s.problem.finish_bounds.f_min, 0.2);
        assert_eq!(s.problem.rough_bounds.f_min, 0.2);
    }

    #[test]
    fn off_grid_depth_is_rejected() {
        let err = Settings::from_str("d_s_min = 0.55\n").unwrap_err();
        assert!(matches!(err, Error::Config { .. }), "got {err:?}");
    }

    #[test]
    fn invalid_combination_fails_validation() {
        // Parses fine but min > max must fail the post-parse validation.
        assert!(Settings::from_str("V_s_min = 400\n").is_err());
    }

    #[test]
    fn manifest_round_trips_through_the_parser() {
        let original =
            Settings::from_str("F_max = 900\nN = 200\nd_r_max = 3.5\nindex_bits = 6\n").unwrap();
        let echoed = Settings::from_str(&original.manifest()).unwrap();
        assert_eq!(echoed.problem, original.problem);
        assert_eq!(echoed.ga, original.ga);
        // Every non-optional key appears in the echo.
        for key in ["L", "eta", "d_s_step", "C0", "p_m", "seed", "gap_threshold"] {
            assert!(
                original.manifest().lines().any(|l| l.starts_with(&format!("{key} = "))),
                "manifest is missing {key}"
            );
        }
    }
}
