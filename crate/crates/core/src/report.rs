//! Diameter tables and the empirical scan over the excess `r`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{diameter_formula, DiameterValue};
use crate::cycle::CycleParams;
use crate::error::{Error, Result};
use crate::graph::SchrijverGraph;

pub const TABLE_HEADER: &str = "# sgdiam-table v1";
pub const SCAN_HEADER: &str = "# sgdiam-scan v1: empirical evidence from BFS on the listed range, not a proof";

/// Largest `n` tabulated for a given `k`: the first `n` with diameter 2.
pub fn table_n_max(k: u32) -> u32 {
    4 * k - 2
}

/// `(n, k)` cells for `2 <= k <= k_max`, `2k+1 <= n <= 4k-2`.
pub fn table_cells(k_max: u32) -> Vec<(u32, u32)> {
    (2..=k_max).flat_map(|k| (2 * k + 1..=table_n_max(k)).map(move |n| (n, k))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub formula_lo: u32,
    pub formula_hi: u32,
    pub bfs: u32,
    pub agree: bool,
}

impl TableRow {
    pub fn formula(&self) -> DiameterValue {
        if self.formula_lo == self.formula_hi {
            DiameterValue::Exact(self.formula_lo)
        } else {
            DiameterValue::Interval { lo: self.formula_lo, hi: self.formula_hi }
        }
    }
}

pub fn compute_row(n: u32, k: u32, orbit_reduction: bool) -> Result<TableRow> {
    let formula = diameter_formula(n, k)?.value;
    let graph = SchrijverGraph::new(CycleParams::new(n, k)?);
    let bfs = graph.diameter_bruteforce(orbit_reduction)?.value.lo();
    Ok(TableRow {
        n,
        k,
        r: n - 2 * k,
        formula_lo: formula.lo(),
        formula_hi: formula.hi(),
        bfs,
        agree: formula.contains(bfs),
    })
}

pub fn compute_table(k_max: u32, orbit_reduction: bool) -> Result<Vec<TableRow>> {
    if k_max < 2 {
        return Err(Error::params(format!("k-max must be at least 2, got {k_max}")));
    }
    // cells are independent; collect keeps them in order
    table_cells(k_max).into_par_iter().map(|(n, k)| compute_row(n, k, orbit_reduction)).collect()
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = format!("{TABLE_HEADER}\nn,k,r,formula_lo,formula_hi,bfs,agree\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{},{},{}", r.n, r.k, r.r, r.formula_lo, r.formula_hi, r.bfs, r.agree)
            .expect("writing to a string");
    }
    out
}

pub fn table_json(rows: &[TableRow]) -> String {
    serde_json::to_string_pretty(rows).expect("plain data serializes")
}

pub fn table_plain(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let mark = if r.agree { "" } else { "  MISMATCH" };
        writeln!(out, "SG({},{}) r={} formula={} bfs={}{mark}", r.n, r.k, r.r, r.formula(), r.bfs)
            .expect("writing to a string");
    }
    out
}

/// Diameters for one `k` across the excess `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub k: u32,
    /// `(r, bfs diameter)` in increasing `r`.
    pub diameters: Vec<(u32, u32)>,
    pub non_increasing: bool,
    /// Every drop `D(r) - D(r+1)` for `r >= 2` is 0 or 1.
    pub small_gaps: bool,
    /// `D(SG(2k+1,k)) - D(SG(2k+2,k))`.
    pub first_gap: Option<u32>,
}

impl ScanRow {
    pub fn gap_after(&self, r: u32) -> Option<i64> {
        let d = |r| self.diameters.iter().find(|(rr, _)| *rr == r).map(|&(_, d)| d as i64);
        Some(d(r)? - d(r + 1)?)
    }
}

/// `⌈k/4⌉ - (k mod 2)`, the drop from `r = 1` to `r = 2` for `k >= 6`.
pub fn predicted_first_gap(k: u32) -> u32 {
    k.div_ceil(4) - k % 2
}

pub fn scan_from_rows(rows: &[TableRow]) -> Vec<ScanRow> {
    let mut ks: Vec<u32> = rows.iter().map(|r| r.k).collect();
    ks.dedup();
    ks.into_iter()
        .map(|k| {
            let mut diameters: Vec<(u32, u32)> = rows.iter().filter(|r| r.k == k).map(|r| (r.r, r.bfs)).collect();
            diameters.sort_unstable();
            let drops: Vec<(u32, i64)> =
                diameters.windows(2).map(|w| (w[0].0, w[0].1 as i64 - w[1].1 as i64)).collect();
            let non_increasing = drops.iter().all(|&(_, g)| g >= 0);
            let small_gaps = drops.iter().filter(|&&(r, _)| r >= 2).all(|&(_, g)| g == 0 || g == 1);
            let first_gap = drops.iter().find(|&&(r, _)| r == 1).and_then(|&(_, g)| u32::try_from(g).ok());
            ScanRow { k, diameters, non_increasing, small_gaps, first_gap }
        })
        .collect()
}

pub fn scan_csv(scan: &[ScanRow]) -> String {
    let mut out = format!("{SCAN_HEADER}\nk,r,n,bfs,drop_to_next\n");
    for row in scan {
        for &(r, d) in &row.diameters {
            let drop = row.gap_after(r).map(|g| g.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{},{}", row.k, r, 2 * row.k + r, d, drop).expect("writing to a string");
        }
    }
    for row in scan {
        let first = row.first_gap.map(|g| g.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "# k={}: non_increasing={} drops_in_0_1_for_r>=2={} drop_r1_to_r2={} ceil(k/4)-(k mod 2)={}",
            row.k,
            row.non_increasing,
            row.small_gaps,
            first,
            predicted_first_gap(row.k)
        )
        .expect("writing to a string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells() {
        let c = table_cells(3);
        assert_eq!(c.first(), Some(&(5, 2)));
        assert_eq!(c.last(), Some(&(10, 3)));
        assert_eq!(c.len(), 2 + 4);
    }

    #[test]
    fn small_table() {
        let rows = compute_table(4, true).unwrap();
        let got: Vec<u32> = rows.iter().filter(|r| r.k == 4).map(|r| r.bfs).collect();
        assert_eq!(got, vec![4, 3, 3, 3, 3, 2]);
        assert!(rows.iter().all(|r| r.agree));
        let csv = table_csv(&rows);
        assert!(csv.starts_with("# sgdiam-table v1\nn,k,r,formula_lo,formula_hi,bfs,agree\n5,2,1,2,2,2,true\n"));
    }

    #[test]
    fn scan_summary() {
        let rows = compute_table(5, true).unwrap();
        let scan = scan_from_rows(&rows);
        let k5 = scan.iter().find(|s| s.k == 5).unwrap();
        assert!(k5.non_increasing && k5.small_gaps);
        assert_eq!(k5.first_gap, Some(1));
        assert!(scan_csv(&scan).contains("not a proof"));
    }

    #[test]
    fn predicted_gaps() {
        assert_eq!(predicted_first_gap(6), 2);
        assert_eq!(predicted_first_gap(7), 1);
    }
}
