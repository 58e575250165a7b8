//! Invariant suites behind `sgdiam verify`.
//!
//! Every pair property is checked against BFS distances. Graphs with
//! `k <= 5` are scanned exhaustively; for larger `k` a seeded sample of
//! source vertices is paired with every target.

use std::fmt;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{check_decomposition, decompose, distance2_criterion, m_sum_bound};
use crate::closed_form::{check_model, sg2k2_model, witness_dist3, witness_dist3_certificate, witness_lower4};
use crate::cycle::{CycleParams, StableSet};
use crate::error::{Error, Result};
use crate::graph::SchrijverGraph;
use crate::lift::{bound_path_m_plus_3, lift_regime};
use crate::paths::{
    build_star_pair, check_star_pair, path_dist3, path_small_intersection, path_via_reduction, reduce_intersection,
    PathCertificate,
};
use crate::verify::verify_between;

/// Largest `k` checked exhaustively.
pub const EXHAUSTIVE_K_MAX: u32 = 5;
/// Source vertices drawn per graph when sampling.
pub const SAMPLED_SOURCES: usize = 48;
pub const DEFAULT_SEED: u64 = 0x0053_472d_6469_616d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Blocks,
    Paths,
    Lift,
    Model,
    Witnesses,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Blocks, Suite::Paths, Suite::Lift, Suite::Model, Suite::Witnesses];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Blocks => "blocks",
            Suite::Paths => "paths",
            Suite::Lift => "lift",
            Suite::Model => "model",
            Suite::Witnesses => "witnesses",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub n: u32,
    pub k: u32,
    pub coverage: Coverage,
    /// Ordered pairs (or objects) checked.
    pub checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cells: Vec<CellReport>,
}

impl SuiteReport {
    pub fn checked(&self) -> u64 {
        self.cells.iter().map(|c| c.checked).sum()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            let cov = match c.coverage {
                Coverage::Exhaustive => "exhaustive",
                Coverage::Sampled => "sampled",
            };
            writeln!(f, "{} SG({},{}) {cov}: {} checked", self.suite.name(), c.n, c.k, c.checked)?;
        }
        write!(f, "{}: pass ({} checks)", self.suite.name(), self.checked())
    }
}

pub fn run_suite(suite: Suite, k_max: u32, seed: u64) -> Result<SuiteReport> {
    let cells = match suite {
        Suite::Blocks => blocks_suite(k_max, seed)?,
        Suite::Paths => paths_suite(k_max, seed)?,
        Suite::Lift => lift_suite(k_max, seed)?,
        Suite::Model => model_suite(k_max)?,
        Suite::Witnesses => witness_suite(k_max)?,
    };
    Ok(SuiteReport { suite, cells })
}

fn coverage(k: u32) -> Coverage {
    if k <= EXHAUSTIVE_K_MAX {
        Coverage::Exhaustive
    } else {
        Coverage::Sampled
    }
}

fn sources(g: &SchrijverGraph, cov: Coverage, seed: u64) -> Vec<usize> {
    let mut all: Vec<usize> = (0..g.len()).collect();
    if cov == Coverage::Sampled && all.len() > SAMPLED_SOURCES {
        let p = g.params();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((p.n() as u64) << 32) ^ p.k() as u64);
        all.shuffle(&mut rng);
        all.truncate(SAMPLED_SOURCES);
        all.sort_unstable();
    }
    all
}

/// Apply `check` to every (source, target) pair with their BFS distance;
/// the first failure in (source, target) order is reported.
fn for_pairs<F>(g: &SchrijverGraph, cov: Coverage, seed: u64, check: F) -> Result<CellReport>
where
    F: Fn(&StableSet, &StableSet, u32) -> Result<bool> + Sync,
{
    let srcs = sources(g, cov, seed);
    let per_source: Vec<Result<u64>> = srcs
        .par_iter()
        .map(|&s| {
            let layers = g.bfs(s);
            let a = g.vertex(s);
            let mut count = 0u64;
            for t in 0..g.len() {
                let dist = layers.distance(t).finite().ok_or(Error::Disconnected)?;
                let b = g.vertex(t);
                if check(&a, &b, dist).map_err(|e| annotate(e, &a, &b, dist))? {
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect();
    let mut checked = 0;
    for r in per_source {
        checked += r?;
    }
    let p = g.params();
    Ok(CellReport { n: p.n(), k: p.k(), coverage: cov, checked })
}

fn annotate(e: Error, a: &StableSet, b: &StableSet, dist: u32) -> Error {
    let p = a.params();
    Error::invariant(format!("SG({},{}) A={{{a}}} B={{{b}}} (BFS distance {dist}): {e}", p.n(), p.k()))
}

fn fail(msg: impl Into<String>) -> Error {
    Error::invariant(msg)
}

fn check_certificate(cert: &PathCertificate, a: &StableSet, b: &StableSet, dist: u32) -> Result<()> {
    let file = cert.to_file();
    verify_between(&file, &a.to_string(), &b.to_string()).map_err(|e| fail(format!("certificate rejected: {e}")))?;
    if cert.len() < dist {
        return Err(fail(format!("certificate of length {} beats BFS distance {dist}", cert.len())));
    }
    Ok(())
}

fn graph(n: u32, k: u32) -> Result<SchrijverGraph> {
    Ok(SchrijverGraph::new(CycleParams::new(n, k)?))
}

fn blocks_suite(k_max: u32, seed: u64) -> Result<Vec<CellReport>> {
    let mut cells = Vec::new();
    for k in 2..=k_max {
        for n in 2 * k + 1..=4 * k - 2 {
            let g = graph(n, k)?;
            cells.push(for_pairs(&g, coverage(k), seed, |a, b, dist| {
                if a == b || a.is_disjoint(b) {
                    return Ok(false);
                }
                let d = decompose(a, b)?;
                check_decomposition(&d)?;
                if distance2_criterion(&d) != (dist == 2) {
                    return Err(fail(format!("distance-2 criterion says {}", distance2_criterion(&d))));
                }
                if dist >= 3 && !m_sum_bound(&d) {
                    return Err(fail("sum of usable block counts below n-3k+2h+2"));
                }
                Ok(true)
            })?);
        }
    }
    Ok(cells)
}

fn paths_suite(k_max: u32, seed: u64) -> Result<Vec<CellReport>> {
    let mut cells = Vec::new();
    for k in 2..=k_max {
        for n in 2 * k + 1..=4 * k - 2 {
            let g = graph(n, k)?;
            let r = n - 2 * k;
            let dist3_regime = k >= 3 && r + 2 >= k && r + 3 <= 2 * k;
            cells.push(for_pairs(&g, coverage(k), seed, |a, b, dist| {
                if a == b {
                    return Ok(false);
                }
                let h = a.intersection_size(b);
                let via = path_via_reduction(a, b)?;
                check_certificate(&via, a, b, dist)?;
                if via.claimed_bound != 1 + 2 * h {
                    return Err(fail("reduction bound is not 1 + 2h"));
                }
                if h == 1 || (h + 1 == k && k >= 2) {
                    let cert = path_small_intersection(a, b)?;
                    check_certificate(&cert, a, b, dist)?;
                }
                if dist >= 3 {
                    let d = decompose(a, b)?;
                    let sp = build_star_pair(&d)?;
                    check_star_pair(&sp, &d)?;
                    let (a1, b1) = reduce_intersection(a, b)?;
                    if !a1.is_disjoint(a) || !b1.is_disjoint(b) || a1.intersection_size(&b1) + 1 > h {
                        return Err(fail(format!("reduction gave {{{a1}}}, {{{b1}}}")));
                    }
                    if dist3_regime {
                        let cert = path_dist3(a, b)?;
                        check_certificate(&cert, a, b, dist)?;
                        let singles = d
                            .blocks
                            .iter()
                            .filter(|blk| blk.btype == crate::BlockType::IVH && blk.interval.len == 1)
                            .map(|blk| blk.interval.start);
                        for i in singles {
                            if cert.vertices[1].contains(i) || cert.vertices[2].contains(i) {
                                return Err(fail(format!("middle pair uses the IV(H) singleton {i}")));
                            }
                        }
                    }
                }
                Ok(true)
            })?);
        }
    }
    Ok(cells)
}

/// Cycle lengths `3k - 2 - m` with `1 <= m <= k - 4`.
pub fn lift_cells(k_max: u32) -> Vec<(u32, u32)> {
    (5..=k_max).flat_map(|k| (1..=k - 4).map(move |m| (3 * k - 2 - m, k))).collect()
}

fn lift_suite(k_max: u32, seed: u64) -> Result<Vec<CellReport>> {
    let mut cells = Vec::new();
    for (n, k) in lift_cells(k_max) {
        let g = graph(n, k)?;
        let m = lift_regime(g.params()).expect("cell is in the lift regime");
        // the lift graphs are small enough to scan completely at every k
        let cov = if g.len() <= 5000 { Coverage::Exhaustive } else { coverage(k) };
        cells.push(for_pairs(&g, cov, seed, |a, b, dist| {
            if dist < 4 {
                return Ok(false);
            }
            let cert = bound_path_m_plus_3(a, b)?;
            check_certificate(&cert, a, b, dist)?;
            if cert.claimed_bound != m + 3 {
                return Err(fail("claimed bound is not m + 3"));
            }
            Ok(true)
        })?);
    }
    Ok(cells)
}

fn model_suite(k_max: u32) -> Result<Vec<CellReport>> {
    let mut cells = Vec::new();
    for k in 3..=k_max {
        let check = check_model(k)?;
        let model = sg2k2_model(k)?;
        let b3 = model.induced_diameter(&model.level_vertices(0));
        if b3 != Some(2) {
            return Err(fail(format!("k={k}: B3 induces diameter {b3:?}")));
        }
        let top = model.induced_diameter(&model.level_vertices(k / 2));
        if top != Some(k.div_ceil(2)) {
            return Err(fail(format!("k={k}: top level induces diameter {top:?}")));
        }
        cells.push(CellReport {
            n: 2 * k + 2,
            k,
            coverage: Coverage::Exhaustive,
            checked: check.vertices as u64 + check.edges as u64,
        });
    }
    Ok(cells)
}

fn witness_suite(k_max: u32) -> Result<Vec<CellReport>> {
    let mut cells = Vec::new();
    for k in 3..=k_max {
        for n in 2 * k + 2..=4 * k - 3 {
            let g = graph(n, k)?;
            let mut checked = 0;
            let (a, b) = witness_dist3(n, k)?;
            let d = g.bfs_distance(&a, &b)?.distance.finite().ok_or(Error::Disconnected)?;
            if d != 3 {
                return Err(fail(format!("SG({n},{k}): distance-3 witness at distance {d}")));
            }
            check_certificate(&witness_dist3_certificate(n, k)?, &a, &b, d)?;
            checked += 1;
            if n + 3 <= 3 * k {
                let (a, b) = witness_lower4(n, k)?;
                let d = g.bfs_distance(&a, &b)?.distance.finite().ok_or(Error::Disconnected)?;
                if d < 4 {
                    return Err(fail(format!("SG({n},{k}): lower-bound witness at distance {d}")));
                }
                let na = g.neighbors(g.index_of(&a)?);
                let nb = g.neighbors(g.index_of(&b)?);
                for &x in &na {
                    for &y in &nb {
                        if g.vertex(x).is_disjoint(&g.vertex(y)) {
                            return Err(fail(format!("SG({n},{k}): witness neighbours are adjacent")));
                        }
                    }
                }
                checked += 1;
            }
            cells.push(CellReport { n, k, coverage: Coverage::Exhaustive, checked });
        }
    }
    Ok(cells)
}
