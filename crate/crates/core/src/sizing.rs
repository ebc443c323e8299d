//! Schema-theoretic population sizing.
//!
//! A population of `μ` random bitstrings of length `l` represents on
//! average
//!
//! ```text
//! S(μ, l) = Σ_{i=0}^{l} C(l,i) · 2^i · (1 − (1 − 2^{−i})^μ)
//! ```
//!
//! schemata (of the 3^l that exist). The per-member gain over the 2^l
//! schemata any single string already covers is `G = (S − 2^l)/μ`; the
//! recommended population size is the smallest `μ` whose gain reaches 99.9%
//! of the largest gain observed on a scan grid.
//!
//! Terms are evaluated in log space (`ln C(l,i) + i·ln 2 + ln(−expm1(μ·
//! ln1p(−2^{−i})))`), so no intermediate overflows even though `S` itself
//! reaches ~3^l; the result is an `f64`, accurate to ~1e−13 relative.

use crate::error::{Error, Result};

/// Largest supported string length: keeps `3^l` (and so `S`) inside `f64`.
pub const MAX_STRING_LENGTH: u32 = 600;

fn validate(mu: u64, l: u32) -> Result<()> {
    if mu < 1 {
        return Err(Error::InvalidInput("population size μ must be ≥ 1".into()));
    }
    if l < 1 || l > MAX_STRING_LENGTH {
        return Err(Error::InvalidInput(format!(
            "string length l must be in 1..={MAX_STRING_LENGTH}, got {l}"
        )));
    }
    Ok(())
}

/// `ln(k!)` for `k = 0..=n`, by cumulative summation.
fn ln_factorials(n: u32) -> Vec<f64> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    table.push(acc);
    for k in 1..=n {
        acc += f64::from(k).ln();
        table.push(acc);
    }
    table
}

/// Expected number of schemata represented by `mu` uniform random strings
/// of length `l`.
pub fn schema_count(mu: u64, l: u32) -> Result<f64> {
    validate(mu, l)?;
    // A single string instantiates exactly 2^l schemata (each position
    // fixed or wildcard); return that identity directly so the μ = 1 gain
    // is exactly zero rather than accumulated roundoff.
    if mu == 1 {
        return Ok(2f64.powi(l as i32));
    }
    let lf = ln_factorials(l);
    let ln_binom = |i: u32| lf[l as usize] - lf[i as usize] - lf[(l - i) as usize];
    let mu_f = mu as f64;
    let mut sum = 1.0; // i = 0: C(l,0)·2^0·(1 − 0^μ) = 1
    for i in 1..=l {
        let p = 2f64.powi(-(i as i32)); // 2^{-i}, exact
                                        // 1 − (1 − p)^μ, kept accurate for both tiny and large μ·p.
        let ln_frac = (-(mu_f * (-p).ln_1p()).exp_m1()).ln();
        sum += (ln_binom(i) + f64::from(i) * std::f64::consts::LN_2 + ln_frac).exp();
    }
    Ok(sum)
}

/// Per-member schema gain `G = (S(μ, l) − 2^l)/μ`.
pub fn population_gain(mu: u64, l: u32) -> Result<f64> {
    Ok((schema_count(mu, l)? - 2f64.powi(l as i32)) / mu as f64)
}

/// Scan grid for the gain curve: geometric steps up to 64, then every 10
/// up to `mu_max` (always included as the final point).
pub fn sizing_grid(mu_max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> =
        [1, 2, 4, 8, 16, 32, 64].into_iter().filter(|&m| m <= mu_max).collect();
    let mut m = 70;
    while m <= mu_max {
        grid.push(m);
        m += 10;
    }
    if grid.last() != Some(&mu_max) {
        grid.push(mu_max);
    }
    grid
}

/// Smallest grid population whose gain reaches 99.9% of the maximal gain
/// observed over the grid.
pub fn recommend_population(l: u32, mu_max: u64) -> Result<u64> {
    if mu_max < 1 {
        return Err(Error::InvalidInput("μ_max must be ≥ 1".into()));
    }
    let grid = sizing_grid(mu_max);
    let gains: Vec<f64> = grid.iter().map(|&mu| population_gain(mu, l)).collect::<Result<_>>()?;
    let max_gain = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = 0.999 * max_gain;
    for (&mu, &g) in grid.iter().zip(&gains) {
        if g >= threshold {
            return Ok(mu);
        }
    }
    unreachable!("the maximal element itself always crosses the threshold")
}
