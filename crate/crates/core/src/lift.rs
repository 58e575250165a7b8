//! Growing the cycle by one element at a time (`+` and `↑`), and shrinking
//! sets back (`−` and `↓`).
//!
//! For `n = 3k - 2 - m`, `1 <= m <= k - 4`, a far pair is lifted until it
//! is within distance 3 on the larger cycle; the short path found there is
//! projected back and assembled into a walk of length at most `m + 3`.

use serde::Serialize;

use crate::blocks::{decompose, distance2_criterion, runs, BlockType, Decomposition};
use crate::cycle::{bit, CycleParams, StableSet};
use crate::error::{Error, Result};
use crate::paths::{
    common_neighbor, dist3_middle, path_small_intersection, path_via_middle, path_via_reduction, PathCertificate,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftKind {
    /// An element inserted inside a component of size at least 3.
    Plus,
    /// A singleton type-I block `[t, t]` grown to `[t, t + 1]`.
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    pub kind: LiftKind,
    /// Inserted position `u` for [`LiftKind::Plus`] (in the larger cycle),
    /// or the grown block `t` for [`LiftKind::Up`].
    pub marker: u32,
    pub n_before: u32,
    pub n_after: u32,
}

/// How the lifted pair was joined on the top level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopBranch {
    /// The original pair needed no lifting.
    Direct,
    /// Common neighbour at the top, projected back.
    Distance2,
    /// Disjoint middle pair at the top, projected back.
    Distance3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftTrace {
    pub steps: Vec<LiftStep>,
    pub a_levels: Vec<StableSet>,
    pub b_levels: Vec<StableSet>,
    pub branch: TopBranch,
    /// Projected sets from the top level down to level 0: one per level in
    /// the distance-2 branch, two per level in the distance-3 branch.
    pub projected: Vec<Vec<StableSet>>,
}

#[derive(Serialize)]
struct LevelJson {
    n: u32,
    op: Option<LiftKind>,
    marker: Option<u32>,
    a: String,
    b: String,
    projected: Vec<String>,
}

#[derive(Serialize)]
struct TraceJson {
    branch: TopBranch,
    levels: Vec<LevelJson>,
}

impl LiftTrace {
    pub fn p(&self) -> usize {
        self.steps.len()
    }

    pub fn to_json(&self) -> String {
        let p = self.p();
        let levels = (0..=p)
            .map(|level| {
                let step = level.checked_sub(1).map(|i| self.steps[i]);
                let projected = self
                    .projected
                    .get(p - level)
                    .map(|ys| ys.iter().map(StableSet::to_string).collect())
                    .unwrap_or_default();
                LevelJson {
                    n: self.a_levels[level].params().n(),
                    op: step.map(|s| s.kind),
                    marker: step.map(|s| s.marker),
                    a: self.a_levels[level].to_string(),
                    b: self.b_levels[level].to_string(),
                    projected,
                }
            })
            .collect();
        serde_json::to_string_pretty(&TraceJson { branch: self.branch, levels }).expect("plain data serializes")
    }
}

fn grown(p: CycleParams) -> Result<CycleParams> {
    CycleParams::new(p.n() + 1, p.k())
}

fn shrunk(p: CycleParams) -> Result<CycleParams> {
    if p.n() < 2 {
        return Err(Error::params(format!("cannot shrink a cycle of length {}", p.n())));
    }
    CycleParams::new(p.n() - 1, p.k())
}

/// Shift every element `>= from` up by one.
fn shift_up(mask: u64, from: u32) -> u64 {
    let low = mask & (bit(from) - 1);
    low | ((mask & !(bit(from) - 1)) << 1)
}

/// Insert an element between the second and third elements of the first
/// component of `A ∪ B` with at least three elements. Returns the lifted
/// pair and the inserted (vacant) position `u` in `[n + 1]`.
pub fn op_plus(a: &StableSet, b: &StableSet) -> Result<(StableSet, StableSet, u32)> {
    let d = decompose(a, b)?;
    let n = a.params().n();
    let c = d
        .components
        .iter()
        .filter(|c| c.interval.len >= 3)
        .min_by_key(|c| c.interval.start)
        .ok_or_else(|| Error::precondition(format!("no component of {{{a}}} ∪ {{{b}}} has 3 or more elements")))?;
    let u = c.interval.elements(n)[2];
    let p = grown(a.params())?;
    let a_plus = StableSet::from_mask(p, shift_up(a.mask(), u))?;
    let b_plus = StableSet::from_mask(p, shift_up(b.mask(), u))?;
    Ok((a_plus, b_plus, u))
}

/// Inverse of [`op_plus`] for an arbitrary set of the larger cycle: drop
/// position `u`, moving `u` itself to `u - 1`.
pub fn op_minus(y: &StableSet, u: u32) -> Result<StableSet> {
    let big = y.params().n();
    if u == 0 || u > big {
        return Err(Error::OutOfRange { element: u, n: big });
    }
    let p = shrunk(y.params())?;
    let n = p.n();
    let members: Vec<u32> = y
        .members()
        .into_iter()
        .map(|e| match e {
            e if e < u => e,
            1 => n,
            e => e - 1,
        })
        .collect();
    StableSet::new(p, &members)
}

/// Smallest `t` such that `[t, t]` is a type-I block of the pair.
pub fn up_marker(d: &Decomposition) -> Option<u32> {
    d.blocks.iter().filter(|b| b.btype == BlockType::I && b.interval.len == 1).map(|b| b.interval.start).min()
}

/// Grow the type-I block `[t, t]` to `[t, t + 1]`.
pub fn op_up(a: &StableSet, b: &StableSet, t: u32) -> Result<(StableSet, StableSet)> {
    let d = decompose(a, b)?;
    let ok = d.blocks.iter().any(|blk| blk.btype == BlockType::I && blk.interval.len == 1 && blk.interval.start == t);
    if !ok {
        return Err(Error::precondition(format!("[{t},{t}] is not a type-I block of {{{a}}}, {{{b}}}")));
    }
    let p = grown(a.params())?;
    let a_up = StableSet::from_mask(p, shift_up(a.mask(), t + 1))?;
    let b_up = StableSet::from_mask(p, shift_up(b.mask(), t + 1))?;
    Ok((a_up, b_up))
}

/// Inverse of [`op_up`]: positions `t` and `t + 1` merge.
pub fn op_down(y: &StableSet, t: u32) -> Result<StableSet> {
    let big = y.params().n();
    if t == 0 || t >= big {
        return Err(Error::OutOfRange { element: t, n: big - 1 });
    }
    let p = shrunk(y.params())?;
    let members: Vec<u32> = y.members().into_iter().map(|e| if e <= t { e } else { e - 1 }).collect();
    StableSet::new(p, &members)
}

/// [`op_down`] with the hypothesis `y ∩ a↑ ∩ b↑ = ∅` checked, where `a↑`,
/// `b↑` is the lifted pair.
pub fn op_down_for_pair(y: &StableSet, a_up: &StableSet, b_up: &StableSet, t: u32) -> Result<StableSet> {
    if y.mask() & a_up.mask() & b_up.mask() != 0 {
        return Err(Error::precondition(format!("{{{y}}} meets both {{{a_up}}} and {{{b_up}}}")));
    }
    op_down(y, t)
}

/// Elements of `y ∩ (a ∪ b)` that start a component of `a ∪ b`.
fn starts_component(y: &StableSet, a: &StableSet, b: &StableSet) -> Vec<u32> {
    let n = a.params().n();
    let x = a.mask() | b.mask();
    runs(x, n).into_iter().map(|c| c.start).filter(|&s| y.contains(s)).collect()
}

fn hits(y: &StableSet, a: &StableSet, b: &StableSet) -> u32 {
    y.intersection_size(a) + y.intersection_size(b)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invariant(msg()))
    }
}

/// `m` for `n = 3k - 2 - m`, if it is in the range covered by the lift.
pub fn lift_regime(params: CycleParams) -> Option<u32> {
    let (n, k) = (params.n(), params.k());
    let m = (3 * k).checked_sub(2 + n)?;
    (m >= 1 && m + 4 <= k).then_some(m)
}

/// Walk of length at most `m + 3` between `a` and `b` in SG(3k-2-m, k).
pub fn bound_path_m_plus_3(a: &StableSet, b: &StableSet) -> Result<PathCertificate> {
    bound_path_m_plus_3_traced(a, b).map(|(cert, _)| cert)
}

pub fn bound_path_m_plus_3_traced(a: &StableSet, b: &StableSet) -> Result<(PathCertificate, LiftTrace)> {
    a.same_params(b)?;
    let params = a.params();
    let m = lift_regime(params).ok_or_else(|| {
        Error::params(format!("need n = 3k-2-m with 1 <= m <= k-4, got n={}, k={}", params.n(), params.k()))
    })?;
    let bound = m + 3;
    let direct = |vertices: Vec<StableSet>| {
        let trace = LiftTrace {
            steps: Vec::new(),
            a_levels: vec![*a],
            b_levels: vec![*b],
            branch: TopBranch::Direct,
            projected: Vec::new(),
        };
        (PathCertificate::new(vertices, bound), trace)
    };
    if a == b {
        return Ok(direct(vec![*a]));
    }
    if a.is_disjoint(b) {
        return Ok(direct(vec![*a, *b]));
    }
    let d0 = decompose(a, b)?;
    if distance2_criterion(&d0) {
        let y = common_neighbor(&d0).ok_or_else(|| Error::invariant("criterion holds without a common neighbour"))?;
        return Ok(direct(vec![*a, y, *b]));
    }
    if let Some((a1, b1)) = dist3_middle(&d0) {
        return Ok(direct(vec![*a, a1, b1, *b]));
    }

    let mut steps: Vec<LiftStep> = Vec::new();
    let mut a_levels = vec![*a];
    let mut b_levels = vec![*b];
    let mut d = d0;
    loop {
        let level = steps.len() + 1;
        if level as u32 > m {
            return Err(Error::invariant(format!("{{{a}}}, {{{b}}} still farther than 3 apart after {m} lifts")));
        }
        let (x, y) = (*a_levels.last().unwrap(), *b_levels.last().unwrap());
        let n_before = x.params().n();
        let (xs, ys, step) = if level % 2 == 1 {
            let (xs, ys, u) = op_plus(&x, &y).map_err(|e| Error::invariant(format!("level {level}: {e}")))?;
            (xs, ys, LiftStep { kind: LiftKind::Plus, marker: u, n_before, n_after: n_before + 1 })
        } else {
            let t = up_marker(&d)
                .ok_or_else(|| Error::invariant(format!("level {level}: no type-I singleton block in {d}")))?;
            let (xs, ys) = op_up(&x, &y, t)?;
            (xs, ys, LiftStep { kind: LiftKind::Up, marker: t, n_before, n_after: n_before + 1 })
        };
        steps.push(step);
        a_levels.push(xs);
        b_levels.push(ys);
        d = decompose(&xs, &ys)?;
        if distance2_criterion(&d) {
            let top =
                common_neighbor(&d).ok_or_else(|| Error::invariant("criterion holds without a common neighbour"))?;
            return project_common_neighbor(a, b, top, steps, a_levels, b_levels, bound);
        }
        if let Some((y1, y2)) = dist3_middle(&d) {
            return project_middle_pair(a, b, (y1, y2), steps, a_levels, b_levels, bound);
        }
    }
}

fn project_common_neighbor(
    a: &StableSet,
    b: &StableSet,
    top: StableSet,
    steps: Vec<LiftStep>,
    a_levels: Vec<StableSet>,
    b_levels: Vec<StableSet>,
    bound: u32,
) -> Result<(PathCertificate, LiftTrace)> {
    let p = steps.len();
    require(p % 2 == 1, || format!("{{{a}}}, {{{b}}}: common neighbour reached after an even number ({p}) of lifts"))?;
    let mut y = top;
    let mut projected = vec![vec![y]];
    for level in (1..=p).rev() {
        let step = steps[level - 1];
        let (al, bl) = (&a_levels[level], &b_levels[level]);
        y = match step.kind {
            LiftKind::Plus => {
                let starts = starts_component(&y, al, bl);
                require(starts.is_empty(), || format!("level {level}: {{{y}}} contains component starts {starts:?}"))?;
                let n = al.params().n() as i64;
                let u = step.marker as i64;
                let near = [u - 2, u + 1].map(|e| ((e - 1).rem_euclid(n) + 1) as u32);
                require(near.iter().all(|&e| !y.contains(e)), || {
                    format!("level {level}: {{{y}}} contains u-2 or u+1 for u={u}")
                })?;
                op_minus(&y, step.marker)?
            }
            LiftKind::Up => op_down_for_pair(&y, al, bl, step.marker)?,
        };
        projected.push(vec![y]);
    }
    let h_star = hits(&y, a, b);
    require(h_star as usize <= p.div_ceil(2), || {
        format!("projected neighbour {{{y}}} meets the pair {h_star} times, expected at most {}", p.div_ceil(2))
    })?;
    let walk = path_via_middle(a, &y, b)?;
    let cert = PathCertificate::new(walk.vertices, bound);
    cert.debug_check()?;
    let trace = LiftTrace { steps, a_levels, b_levels, branch: TopBranch::Distance2, projected };
    Ok((cert, trace))
}

fn project_middle_pair(
    a: &StableSet,
    b: &StableSet,
    top: (StableSet, StableSet),
    steps: Vec<LiftStep>,
    a_levels: Vec<StableSet>,
    b_levels: Vec<StableSet>,
    bound: u32,
) -> Result<(PathCertificate, LiftTrace)> {
    let p = steps.len();
    let (mut y1, mut y2) = top;
    let mut projected = vec![vec![y1, y2]];
    for level in (1..=p).rev() {
        let step = steps[level - 1];
        let (al, bl) = (&a_levels[level], &b_levels[level]);
        require(y1.is_disjoint(al) && y2.is_disjoint(bl), || {
            format!("level {level}: projected pair {{{y1}}}, {{{y2}}} lost adjacency to the lifted pair")
        })?;
        match step.kind {
            LiftKind::Plus => {
                require(!y1.contains(step.marker) && !y2.contains(step.marker), || {
                    format!("level {level}: inserted position {} used by the middle pair", step.marker)
                })?;
                y1 = op_minus(&y1, step.marker)?;
                y2 = op_minus(&y2, step.marker)?;
            }
            LiftKind::Up => {
                y1 = op_down_for_pair(&y1, al, bl, step.marker)?;
                y2 = op_down_for_pair(&y2, al, bl, step.marker)?;
            }
        }
        projected.push(vec![y1, y2]);
    }
    require(y1.is_disjoint(a) && y2.is_disjoint(b), || {
        format!("projected pair {{{y1}}}, {{{y2}}} is not adjacent to {{{a}}}, {{{b}}}")
    })?;
    let ups = steps.iter().filter(|s| s.kind == LiftKind::Up).count() as u32;
    require(y1.intersection_size(&y2) <= ups, || {
        format!("projected pair {{{y1}}}, {{{y2}}} shares more than {ups} elements")
    })?;
    let middle = path_via_reduction(&y1, &y2)?;
    let mut vertices = vec![*a];
    vertices.extend(middle.vertices);
    vertices.push(*b);
    let cert = PathCertificate::new(vertices, bound);
    cert.debug_check()?;
    let trace = LiftTrace { steps, a_levels, b_levels, branch: TopBranch::Distance3, projected };
    Ok((cert, trace))
}

/// The most specific construction that applies to the pair.
pub fn best_certificate(a: &StableSet, b: &StableSet) -> Result<PathCertificate> {
    a.same_params(b)?;
    if a == b {
        return Ok(PathCertificate::new(vec![*a], 0));
    }
    if a.is_disjoint(b) {
        return Ok(PathCertificate::new(vec![*a, *b], 1));
    }
    let d = decompose(a, b)?;
    if distance2_criterion(&d) {
        if let Some(y) = common_neighbor(&d) {
            return Ok(PathCertificate::new(vec![*a, y, *b], 2));
        }
    }
    let h = d.h;
    let k = a.params().k();
    if h + 1 == k && k >= 2 {
        return path_small_intersection(a, b);
    }
    if let Some((a1, b1)) = dist3_middle(&d) {
        return Ok(PathCertificate::new(vec![*a, a1, b1, *b], 3));
    }
    if h == 1 {
        return path_small_intersection(a, b);
    }
    if lift_regime(a.params()).is_some() {
        return bound_path_m_plus_3(a, b);
    }
    path_via_reduction(a, b)
}
