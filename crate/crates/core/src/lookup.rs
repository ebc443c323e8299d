//! Lookup table of feasible depth-of-cut allocations.
//!
//! For a total stock `d_t` the table lists every pair `(d_s, d_r)` on the
//! configured depth grids for which some integer `n ≥ 1` satisfies
//! `d_s + n·d_r = d_t` exactly. Depths are integer tenths of a millimetre,
//! so the divisibility test is exact. Entries are ordered ascending by
//! `(d_s, d_r)` and indexed from 1; the discrete GA variable selects a row
//! of this table.

use crate::error::{Error, Result};
use crate::problem::ProblemData;

/// One feasible allocation: `d_s + n·d_r = d_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairEntry {
    /// 1-based position in the table.
    pub index: usize,
    /// Finish depth, tenths of mm.
    pub ds_tenths: u32,
    /// Rough depth, tenths of mm.
    pub dr_tenths: u32,
    /// Number of rough passes.
    pub n: u32,
}

/// All feasible allocations for one total stock value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    /// Total stock, tenths of mm.
    pub dt_tenths: u32,
    entries: Vec<PairEntry>,
}

impl PairTable {
    /// Enumerates the table for total stock `dt_tenths` over the problem's
    /// depth grids. Fails if no allocation exists.
    pub fn build(problem: &ProblemData, dt_tenths: u32) -> Result<Self> {
        let mut entries = Vec::new();
        for ds in problem.finish_depths.values() {
            if ds >= dt_tenths {
                continue; // at least one rough pass must fit
            }
            let remainder = dt_tenths - ds;
            for dr in problem.rough_depths.values() {
                if remainder % dr == 0 {
                    let n = remainder / dr;
                    debug_assert!(n >= 1);
                    entries.push(PairEntry {
                        index: entries.len() + 1,
                        ds_tenths: ds,
                        dr_tenths: dr,
                        n,
                    });
                }
            }
        }
        if entries.is_empty() {
            return Err(Error::NoFeasibleAllocation { dt_tenths });
        }
        Ok(PairTable { dt_tenths, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Row at 1-based `index`.
    pub fn pair_at(&self, index: usize) -> Result<PairEntry> {
        if index == 0 || index > self.entries.len() {
            return Err(Error::IndexOutOfRange { index, size: self.entries.len() });
        }
        Ok(self.entries[index - 1])
    }

    pub fn entries(&self) -> &[PairEntry] {
        &self.entries
    }
}
