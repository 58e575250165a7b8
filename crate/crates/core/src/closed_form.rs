//! Closed-form diameters, the explicit coordinate model of SG(2k+2, k), and
//! the explicit far-apart vertex pairs used as lower-bound witnesses.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::blocks::runs;
use crate::cycle::{full_mask, mask_of, wrap, CycleParams, StableSet};
use crate::error::{Error, Result};
use crate::paths::PathCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Bfs,
    Certificate,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Bfs => "bfs",
            Method::Certificate => "certificate",
        })
    }
}

/// A diameter, exact or known only up to an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterValue {
    Exact(u32),
    Interval { lo: u32, hi: u32 },
}

impl DiameterValue {
    pub fn lo(&self) -> u32 {
        match *self {
            DiameterValue::Exact(value) => value,
            DiameterValue::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u32 {
        match *self {
            DiameterValue::Exact(value) => value,
            DiameterValue::Interval { hi, .. } => hi,
        }
    }

    pub fn as_exact(&self) -> Option<u32> {
        match *self {
            DiameterValue::Exact(value) => Some(value),
            DiameterValue::Interval { .. } => None,
        }
    }

    pub fn contains(&self, d: u32) -> bool {
        self.lo() <= d && d <= self.hi()
    }
}

impl fmt::Display for DiameterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DiameterValue::Exact(value) => write!(f, "{value}"),
            DiameterValue::Interval { lo, hi } => write!(f, "[{lo}..{hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterResult {
    pub n: u32,
    pub k: u32,
    pub value: DiameterValue,
    pub method: Method,
    /// A pair at distance at least `value.lo()`.
    pub witness: Option<(StableSet, StableSet)>,
}

#[derive(Serialize)]
struct DiameterJson {
    n: u32,
    k: u32,
    exact: bool,
    lo: u32,
    hi: u32,
    method: Method,
    witness: Option<[String; 2]>,
}

impl DiameterResult {
    pub fn to_json(&self) -> String {
        let doc = DiameterJson {
            n: self.n,
            k: self.k,
            exact: self.value.as_exact().is_some(),
            lo: self.value.lo(),
            hi: self.value.hi(),
            method: self.method,
            witness: self.witness.map(|(a, b)| [a.to_string(), b.to_string()]),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }
}

/// Diameter of SG(2k+2, k) for `k >= 3`.
pub fn diameter_2k_plus_2(k: u32) -> u32 {
    3 * k / 4 + k % 2
}

/// Piecewise diameter of SG(n, k) as a function of the excess `r = n - 2k`.
///
/// Where only bounds are known (`3 <= r <= k - 4`) the result is an interval.
pub fn diameter_formula(n: u32, k: u32) -> Result<DiameterResult> {
    if k == 0 || n < 2 * k + 1 {
        return Err(Error::params(format!("the formula needs k >= 1 and n >= 2k+1, got n={n}, k={k}")));
    }
    let r = n - 2 * k;
    let value = if k == 1 {
        // SG(n, 1) is the complete graph on n vertices
        DiameterValue::Exact(1)
    } else if r == 1 {
        DiameterValue::Exact(k)
    } else if r >= 2 * k - 2 {
        DiameterValue::Exact(2)
    } else if r + 2 >= k {
        DiameterValue::Exact(3)
    } else if r + 3 == k {
        DiameterValue::Exact(4)
    } else if r == 2 {
        DiameterValue::Exact(diameter_2k_plus_2(k))
    } else {
        DiameterValue::Interval { lo: 4, hi: k - r + 1 }
    };
    Ok(DiameterResult { n, k, value, method: Method::Formula, witness: None })
}

/// Vertex classes of SG(2k+2, k), by the shape of the complement on the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sg2k2Class {
    /// One complement run of length 3, all others of length 1.
    Three,
    /// Two complement runs of length 2, with this many members on the
    /// shorter side between them.
    Two(u32),
}

/// Coordinates `(level, position)` of a vertex of SG(2k+2, k).
///
/// Positions are 0-based modulo 2k+2; on the top level for even `k` they
/// are reduced modulo k+1, where antipodal positions name the same vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sg2k2Coordinate {
    pub level: u32,
    pub pos: u32,
}

impl Sg2k2Coordinate {
    pub fn new(level: u32, pos: u32, k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::params(format!("the coordinate model needs k >= 3, got {k}")));
        }
        if level > k / 2 {
            return Err(Error::params(format!("level {level} exceeds {} for k={k}", k / 2)));
        }
        if pos >= positions_on_level(level, k) {
            return Err(Error::params(format!("position {pos} out of range for level {level}, k={k}")));
        }
        Ok(Self { level, pos })
    }

    /// Same vertex with the position taken modulo the level's cycle.
    fn normalized(level: u32, pos: i64, k: u32) -> Self {
        let m = positions_on_level(level, k) as i64;
        Self { level, pos: pos.rem_euclid(m) as u32 }
    }
}

fn positions_on_level(level: u32, k: u32) -> u32 {
    if k.is_multiple_of(2) && level == k / 2 {
        k + 1
    } else {
        2 * k + 2
    }
}

/// 1-based members of `{w-1} ∪ {w+2, .., w+2i} ∪ {w+2i+3, .., w+2k-1}`.
fn level_set(level: u32, w: i64, k: u32) -> Vec<u32> {
    let n = 2 * k + 2;
    let i = level as i64;
    let mut members = vec![w - 1];
    members.extend((1..=i).map(|s| w + 2 * s));
    members.extend((0..(k as i64 - i - 1)).map(|s| w + 2 * i + 3 + 2 * s));
    let mut out: Vec<u32> = members.into_iter().map(|x| wrap(n, x)).collect();
    out.sort_unstable();
    out
}

/// The stable set named by a coordinate.
///
/// Level 0 at position `v` is `{v-1, v+3, v+5, .., v+2k-1}`; its only
/// neighbour on level 1 has position `v`, and each level-`i` vertex has a
/// unique neighbour on level `i + 1` with the same position.
pub fn sg2k2_vertex(c: Sg2k2Coordinate, k: u32) -> Result<StableSet> {
    let c = Sg2k2Coordinate::new(c.level, c.pos, k)?;
    let params = CycleParams::new(2 * k + 2, k)?;
    let members =
        if c.level == 0 { level_zero(c.pos as i64, k) } else { level_set(c.level, c.pos as i64 - c.level as i64, k) };
    StableSet::new(params, &members)
}

fn level_zero(v: i64, k: u32) -> Vec<u32> {
    let n = 2 * k + 2;
    let mut members = vec![v - 1];
    members.extend((1..k as i64).map(|s| v + 1 + 2 * s));
    let mut out: Vec<u32> = members.into_iter().map(|x| wrap(n, x)).collect();
    out.sort_unstable();
    out
}

/// Class of a vertex of SG(2k+2, k) from its complement runs.
pub fn sg2k2_class(s: &StableSet) -> Result<Sg2k2Class> {
    let p = s.params();
    let (n, k) = (p.n(), p.k());
    if n != 2 * k + 2 {
        return Err(Error::params(format!("SG({n},{k}) is not of the form SG(2k+2,k)")));
    }
    let gaps = runs(full_mask(n) & !s.mask(), n);
    let long: Vec<_> = gaps.iter().filter(|g| g.len >= 2).collect();
    match long.as_slice() {
        [g] if g.len == 3 => Ok(Sg2k2Class::Three),
        [g1, g2] if g1.len == 2 && g2.len == 2 => {
            // members strictly between the end of g1 and the start of g2
            let from = g1.end(n);
            let members_between = (1..n)
                .map(|o| wrap(n, (from + o) as i64))
                .take_while(|&e| e != g2.start)
                .filter(|&e| s.contains(e))
                .count() as u32;
            Ok(Sg2k2Class::Two(members_between.min(k - members_between)))
        }
        _ => Err(Error::invariant(format!("unexpected complement shape for {{{s}}}"))),
    }
}

/// Expected class of every vertex on a level.
pub fn level_class(level: u32) -> Sg2k2Class {
    if level == 0 {
        Sg2k2Class::Three
    } else {
        Sg2k2Class::Two(level)
    }
}

/// The coordinate graph: a prism over the `2k+2` cycle, with odd-step chords
/// on level 0 and antipodal edges (k odd) or antipodal identification
/// (k even) on the top level.
#[derive(Debug, Clone)]
pub struct Sg2k2Model {
    pub k: u32,
    pub coords: Vec<Sg2k2Coordinate>,
    pub edges: Vec<(usize, usize)>,
    index: HashMap<Sg2k2Coordinate, usize>,
}

impl Sg2k2Model {
    pub fn index_of(&self, c: Sg2k2Coordinate) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.coords.len()];
        for &(x, y) in &self.edges {
            adj[x].push(y);
            adj[y].push(x);
        }
        adj
    }

    pub fn level_vertices(&self, level: u32) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i].level == level).collect()
    }

    /// Diameter of the subgraph induced on `subset`, by BFS over model edges.
    pub fn induced_diameter(&self, subset: &[usize]) -> Option<u32> {
        let adj = self.adjacency();
        let inside: HashSet<usize> = subset.iter().copied().collect();
        let mut best = 0;
        for &src in subset {
            let mut dist = HashMap::from([(src, 0u32)]);
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                let dx = dist[&x];
                for &y in &adj[x] {
                    if inside.contains(&y) && !dist.contains_key(&y) {
                        dist.insert(y, dx + 1);
                        queue.push_back(y);
                    }
                }
            }
            if dist.len() != subset.len() {
                return None;
            }
            best = best.max(*dist.values().max().unwrap_or(&0));
        }
        Some(best)
    }

    pub fn diameter(&self) -> Option<u32> {
        let all: Vec<usize> = (0..self.coords.len()).collect();
        self.induced_diameter(&all)
    }
}

pub fn sg2k2_model(k: u32) -> Result<Sg2k2Model> {
    if k < 3 {
        return Err(Error::params(format!("the coordinate model needs k >= 3, got {k}")));
    }
    let top = k / 2;
    let ring = 2 * k + 2;
    let mut coords = Vec::new();
    for level in 0..=top {
        for pos in 0..positions_on_level(level, k) {
            coords.push(Sg2k2Coordinate { level, pos });
        }
    }
    let index: HashMap<_, _> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let at = |level: u32, pos: i64| index[&Sg2k2Coordinate::normalized(level, pos, k)];

    let mut edges = HashSet::new();
    let mut add = |x: usize, y: usize| {
        if x != y {
            edges.insert((x.min(y), x.max(y)));
        }
    };
    for v in 0..ring as i64 {
        // level 0: positions at odd cyclic distance
        for step in (1..ring as i64).step_by(2) {
            add(at(0, v), at(0, v + step));
        }
        // cycles on the upper levels
        for level in 1..=top {
            add(at(level, v), at(level, v + 1));
        }
        // rungs between consecutive levels
        for level in 0..top {
            add(at(level, v), at(level + 1, v));
        }
        if k % 2 == 1 {
            add(at(top, v), at(top, v + k as i64 + 1));
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Ok(Sg2k2Model { k, coords, edges, index })
}

/// Outcome of comparing the model against the directly built graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelCheck {
    pub k: u32,
    pub vertices: usize,
    pub edges: usize,
    pub class_sizes: Vec<(String, usize)>,
}

/// Check that coordinates name every vertex of SG(2k+2, k) exactly once,
/// that model edges are exactly the disjoint pairs, and that each level
/// consists of one vertex class.
pub fn check_model(k: u32) -> Result<ModelCheck> {
    let model = sg2k2_model(k)?;
    let params = CycleParams::new(2 * k + 2, k)?;
    let sets: Vec<StableSet> = model.coords.iter().map(|&c| sg2k2_vertex(c, k)).collect::<Result<_>>()?;
    let direct = crate::cycle::enumerate_stable_sets(params);
    let mut seen = HashSet::new();
    for (c, s) in model.coords.iter().zip(&sets) {
        if !seen.insert(s.mask()) {
            return Err(Error::invariant(format!("k={k}: coordinate {c:?} repeats vertex {{{s}}}")));
        }
        let class = sg2k2_class(s)?;
        if class != level_class(c.level) {
            return Err(Error::invariant(format!("k={k}: {{{s}}} at level {} has class {class:?}", c.level)));
        }
    }
    if seen.len() != direct.len() || direct.iter().any(|s| !seen.contains(&s.mask())) {
        return Err(Error::invariant(format!(
            "k={k}: model has {} vertices, SG(2k+2,k) has {}",
            seen.len(),
            direct.len()
        )));
    }
    let model_edges: HashSet<(usize, usize)> = model.edges.iter().copied().collect();
    let mut direct_edges = 0;
    for x in 0..sets.len() {
        for y in x + 1..sets.len() {
            let disjoint = sets[x].is_disjoint(&sets[y]);
            direct_edges += disjoint as usize;
            if disjoint != model_edges.contains(&(x, y)) {
                return Err(Error::invariant(format!(
                    "k={k}: {:?} {{{}}} and {:?} {{{}}} disagree on adjacency (model: {})",
                    model.coords[x], sets[x], model.coords[y], sets[y], !disjoint
                )));
            }
        }
    }
    let mut class_sizes = Vec::new();
    for level in 0..=k / 2 {
        let name = match level_class(level) {
            Sg2k2Class::Three => "B3".to_string(),
            Sg2k2Class::Two(i) => format!("B2,{i}"),
        };
        class_sizes.push((name, model.level_vertices(level).len()));
    }
    Ok(ModelCheck { k, vertices: sets.len(), edges: direct_edges, class_sizes })
}

/// Two vertices at distance at least 4 when `n = 2k + r`, `2 <= r <= k - 3`.
pub fn witness_lower4(n: u32, k: u32) -> Result<(StableSet, StableSet)> {
    if n < 2 * k + 2 || n + 3 > 3 * k {
        return Err(Error::params(format!("need 2 <= n-2k <= k-3, got n={n}, k={k}")));
    }
    let r = n - 2 * k;
    let t = k - 3 - r;
    let build = |base: [u32; 3], run_start: u32| -> Vec<u32> {
        let mut v = base.to_vec();
        v.extend((0..=t).map(|i| run_start + 2 * i));
        v.extend((1..r).map(|j| run_start + 2 * t + 3 * j));
        v
    };
    let params = CycleParams::new(n, k)?;
    let a = StableSet::new(params, &build([1, 3, 5], 7))?;
    let b = StableSet::new(params, &build([1, 3, 6], 8))?;
    Ok((a, b))
}

/// The pair `{1,4,6,..,2k}`, `{1,5,7,..,2k+1}` at distance exactly 3 when
/// `2k+2 <= n <= 4k-3`.
pub fn witness_dist3(n: u32, k: u32) -> Result<(StableSet, StableSet)> {
    if k < 3 || n < 2 * k + 2 || n + 3 > 4 * k {
        return Err(Error::params(format!("need k >= 3 and 2k+2 <= n <= 4k-3, got n={n}, k={k}")));
    }
    let params = CycleParams::new(n, k)?;
    let a: Vec<u32> = std::iter::once(1).chain((2..=k).map(|i| 2 * i)).collect();
    let b: Vec<u32> = std::iter::once(1).chain((2..=k).map(|i| 2 * i + 1)).collect();
    Ok((StableSet::new(params, &a)?, StableSet::new(params, &b)?))
}

/// Length-3 path `A, {3,5,..,2k+1}, {2,4,..,2k}, B` for [`witness_dist3`].
pub fn witness_dist3_certificate(n: u32, k: u32) -> Result<PathCertificate> {
    let (a, b) = witness_dist3(n, k)?;
    let params = a.params();
    let odd = StableSet::from_mask(params, mask_of(&(1..=k).map(|i| 2 * i + 1).collect::<Vec<_>>()))?;
    let even = StableSet::from_mask(params, mask_of(&(1..=k).map(|i| 2 * i).collect::<Vec<_>>()))?;
    let cert = PathCertificate::new(vec![a, odd, even, b], 3);
    cert.debug_check()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Distance, SchrijverGraph};

    #[test]
    fn formula_examples() {
        assert_eq!(diameter_formula(14, 6).unwrap().value, DiameterValue::Exact(4));
        assert_eq!(diameter_formula(9, 4).unwrap().value, DiameterValue::Exact(4));
        assert_eq!(diameter_formula(17, 7).unwrap().value, DiameterValue::Interval { lo: 4, hi: 5 });
        assert_eq!(diameter_formula(26, 7).unwrap().value, DiameterValue::Exact(2));
        assert_eq!(diameter_formula(16, 7).unwrap().value, DiameterValue::Exact(6));
        assert_eq!(diameter_formula(7, 1).unwrap().value, DiameterValue::Exact(1));
        assert!(matches!(diameter_formula(8, 4), Err(Error::Params(_))));
    }

    #[test]
    fn r_two_branch_coincides_for_small_k() {
        // for k = 3, 4, 5 the r = 2 value agrees with the other branches
        assert_eq!(diameter_2k_plus_2(3), 3);
        assert_eq!(diameter_2k_plus_2(4), 3);
        assert_eq!(diameter_2k_plus_2(5), 4);
        for k in 3..=5 {
            assert_eq!(diameter_formula(2 * k + 2, k).unwrap().value, DiameterValue::Exact(diameter_2k_plus_2(k)));
        }
    }

    #[test]
    fn level_zero_vertex() {
        let s = sg2k2_vertex(Sg2k2Coordinate { level: 0, pos: 1 }, 3).unwrap();
        assert_eq!(s.members(), vec![4, 6, 8]);
        assert_eq!(sg2k2_class(&s).unwrap(), Sg2k2Class::Three);
    }

    #[test]
    fn level_one_is_the_unique_upper_neighbour() {
        for k in 3..=6 {
            for v in 0..2 * k + 2 {
                let a0 = sg2k2_vertex(Sg2k2Coordinate { level: 0, pos: v }, k).unwrap();
                let a1 = sg2k2_vertex(Sg2k2Coordinate { level: 1, pos: v }, k).unwrap();
                assert!(a0.is_disjoint(&a1));
                assert_eq!(sg2k2_class(&a1).unwrap(), Sg2k2Class::Two(1));
            }
        }
    }

    #[test]
    fn model_matches_direct_construction() {
        for k in 3..=6 {
            let check = check_model(k).unwrap();
            assert_eq!(check.class_sizes[0].1 as u32, 2 * k + 2);
            let top = check.class_sizes.last().unwrap().1 as u32;
            assert_eq!(top, if k % 2 == 0 { k + 1 } else { 2 * k + 2 });
        }
    }

    #[test]
    fn model_degrees() {
        for k in 3..=7 {
            let model = sg2k2_model(k).unwrap();
            let adj = model.adjacency();
            for (i, c) in model.coords.iter().enumerate() {
                let expected = if c.level == 0 { k + 2 } else { 4 };
                assert_eq!(adj[i].len() as u32, expected, "k={k} {c:?}");
            }
        }
    }

    #[test]
    fn model_subgraph_and_total_diameters() {
        for k in 3..=7 {
            let model = sg2k2_model(k).unwrap();
            assert_eq!(model.induced_diameter(&model.level_vertices(0)), Some(2));
            assert_eq!(model.induced_diameter(&model.level_vertices(k / 2)), Some(k.div_ceil(2)));
            let g = SchrijverGraph::new(CycleParams::new(2 * k + 2, k).unwrap());
            let bfs = g.diameter_bruteforce(true).unwrap().value.lo();
            assert_eq!(model.diameter(), Some(bfs), "k={k}");
        }
    }

    #[test]
    fn r_two_closed_form_misses_k_6() {
        // exhaustive search finds 5 for SG(14,6); the closed form says 4
        let g = SchrijverGraph::new(CycleParams::new(14, 6).unwrap());
        assert_eq!(g.diameter_bruteforce(true).unwrap().value, DiameterValue::Exact(5));
        assert_eq!(diameter_2k_plus_2(6), 4);
        for k in [3, 4, 5, 7] {
            let g = SchrijverGraph::new(CycleParams::new(2 * k + 2, k).unwrap());
            assert_eq!(g.diameter_bruteforce(true).unwrap().value.lo(), diameter_2k_plus_2(k));
        }
    }

    #[test]
    fn lower4_examples() {
        let (a, b) = witness_lower4(12, 5).unwrap();
        assert_eq!(a.members(), vec![1, 3, 5, 7, 10]);
        assert_eq!(b.members(), vec![1, 3, 6, 8, 11]);
        assert!(witness_lower4(13, 5).is_err());
        let (a, b) = witness_lower4(15, 6).unwrap();
        let g = SchrijverGraph::new(a.params());
        let d = g.bfs_distance(&a, &b).unwrap().distance.finite().unwrap();
        assert!(d >= 4);
    }

    #[test]
    fn dist3_examples() {
        let (a, b) = witness_dist3(10, 4).unwrap();
        assert_eq!(a.members(), vec![1, 4, 6, 8]);
        assert_eq!(b.members(), vec![1, 5, 7, 9]);
        let g = SchrijverGraph::new(a.params());
        assert_eq!(g.bfs_distance(&a, &b).unwrap().distance, Distance::Finite(3));
        assert_eq!(witness_dist3_certificate(13, 5).unwrap().len(), 3);
        assert!(witness_dist3(22, 6).is_err());
    }

    #[test]
    fn json_shape() {
        let r = diameter_formula(17, 7).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!((v["exact"].as_bool(), v["lo"].as_u64(), v["hi"].as_u64()), (Some(false), Some(4), Some(5)));
        assert_eq!(v["method"], "formula");
    }
}
