//! SG(n, k) itself: adjacency, BFS distances, eccentricities and the
//! brute-force diameter. This is the oracle every construction is checked
//! against, so it relies on nothing but disjointness of bitmasks.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::closed_form::{DiameterResult, DiameterValue, Method};
use crate::cycle::{enumerate_masks, CycleParams, StableSet};
use crate::error::{Error, Result};

const UNSEEN: u8 = u8::MAX;

/// Result of a shortest-path query. Unreachability is its own state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(u8),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d as u32),
            Distance::Unreachable => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRecord {
    pub a: StableSet,
    pub b: StableSet,
    pub distance: Distance,
}

/// Adjacency in SG(n, k): disjointness.
pub fn adjacent(a: &StableSet, b: &StableSet) -> Result<bool> {
    a.same_params(b)?;
    Ok(a.is_disjoint(b))
}

/// The vertex set of SG(n, k) in lexicographic order, with its inverse index.
/// Neighbourhoods are never materialized.
#[derive(Debug, Clone)]
pub struct SchrijverGraph {
    params: CycleParams,
    masks: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl SchrijverGraph {
    pub fn new(params: CycleParams) -> Self {
        let masks = enumerate_masks(params.n(), params.k());
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        Self { params, masks, index }
    }

    pub fn params(&self) -> CycleParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn vertex(&self, index: usize) -> StableSet {
        StableSet::from_mask_unchecked(self.params, self.masks[index])
    }

    pub fn vertices(&self) -> impl Iterator<Item = StableSet> + '_ {
        self.masks.iter().map(move |&m| StableSet::from_mask_unchecked(self.params, m))
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn index_of(&self, v: &StableSet) -> Result<usize> {
        if v.params() != self.params {
            return Err(Error::MismatchedParams {
                left: (self.params.n(), self.params.k()),
                right: (v.params().n(), v.params().k()),
            });
        }
        self.index.get(&v.mask()).map(|&i| i as usize).ok_or_else(|| Error::NotAVertex(v.to_string()))
    }

    /// Indices of all neighbours of vertex `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let m = self.masks[i];
        (0..self.masks.len()).filter(|&j| self.masks[j] & m == 0).collect()
    }

    pub fn edge_count(&self) -> usize {
        let mut count = 0;
        for (i, &m) in self.masks.iter().enumerate() {
            count += self.masks[i + 1..].iter().filter(|&&o| o & m == 0).count();
        }
        count
    }

    /// Breadth-first distances from `source` to every vertex.
    ///
    /// Each layer is found bottom-up: an unvisited vertex joins layer `d + 1`
    /// as soon as one mask in layer `d` is disjoint from it.
    pub fn bfs(&self, source: usize) -> BfsLayers {
        let n_vertices = self.masks.len();
        let mut dist = vec![UNSEEN; n_vertices];
        dist[source] = 0;
        let mut frontier = vec![self.masks[source]];
        let mut unvisited: Vec<u32> = (0..n_vertices as u32).filter(|&v| v as usize != source).collect();
        let mut level = 0u8;
        while !frontier.is_empty() && !unvisited.is_empty() {
            level += 1;
            let mut next = Vec::new();
            let mut rest = Vec::with_capacity(unvisited.len());
            for &v in &unvisited {
                let m = self.masks[v as usize];
                if has_disjoint(&frontier, m) {
                    dist[v as usize] = level;
                    next.push(m);
                } else {
                    rest.push(v);
                }
            }
            frontier = next;
            unvisited = rest;
        }
        BfsLayers { dist }
    }

    pub fn bfs_distance(&self, a: &StableSet, b: &StableSet) -> Result<DistanceRecord> {
        let ia = self.index_of(a)?;
        let ib = self.index_of(b)?;
        let distance = self.bfs(ia).distance(ib);
        Ok(DistanceRecord { a: *a, b: *b, distance })
    }

    pub fn eccentricity(&self, a: &StableSet) -> Result<Distance> {
        Ok(self.bfs(self.index_of(a)?).eccentricity().0)
    }

    /// Indices of one representative per dihedral orbit.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        (0..self.masks.len()).filter(|&i| self.vertex(i).is_canonical()).collect()
    }

    /// Exact diameter as the largest eccentricity. With `orbit_reduction`
    /// only one source per dihedral orbit is searched.
    pub fn diameter_bruteforce(&self, orbit_reduction: bool) -> Result<DiameterResult> {
        if self.masks.is_empty() {
            return Err(Error::params(format!("SG({}, {}) has no vertices", self.params.n(), self.params.k())));
        }
        let sources: Vec<usize> =
            if orbit_reduction { self.orbit_representatives() } else { (0..self.masks.len()).collect() };
        let per_source: Vec<(Distance, usize, usize)> = sources
            .par_iter()
            .map(|&s| {
                let (ecc, far) = self.bfs(s).eccentricity();
                (ecc, s, far)
            })
            .collect();
        // first maximum, so the witness is reproducible
        let mut best = per_source[0];
        for &entry in &per_source[1..] {
            if entry.0 > best.0 {
                best = entry;
            }
        }
        let (ecc, source, far) = best;
        let value = match ecc {
            Distance::Finite(d) => d as u32,
            Distance::Unreachable => return Err(Error::Disconnected),
        };
        Ok(DiameterResult {
            n: self.params.n(),
            k: self.params.k(),
            value: DiameterValue::Exact(value),
            method: Method::Bfs,
            witness: Some((self.vertex(source), self.vertex(far))),
        })
    }

    /// BFS from every vertex. Quadratic memory; meant for small graphs.
    pub fn all_pairs(&self) -> DistanceTable {
        let rows: Vec<Vec<u8>> = (0..self.masks.len()).into_par_iter().map(|s| self.bfs(s).dist).collect();
        DistanceTable { rows }
    }
}

fn has_disjoint(frontier: &[u64], m: u64) -> bool {
    frontier.chunks(32).any(|chunk| chunk.iter().fold(false, |acc, &f| acc | (f & m == 0)))
}

/// Distances from one source.
#[derive(Debug, Clone)]
pub struct BfsLayers {
    dist: Vec<u8>,
}

impl BfsLayers {
    pub fn distance(&self, target: usize) -> Distance {
        match self.dist[target] {
            UNSEEN => Distance::Unreachable,
            d => Distance::Finite(d),
        }
    }

    /// Largest distance and the first vertex attaining it.
    pub fn eccentricity(&self) -> (Distance, usize) {
        if let Some(i) = self.dist.iter().position(|&d| d == UNSEEN) {
            return (Distance::Unreachable, i);
        }
        let mut best = (0u8, 0usize);
        for (i, &d) in self.dist.iter().enumerate() {
            if d > best.0 {
                best = (d, i);
            }
        }
        (Distance::Finite(best.0), best.1)
    }

    pub fn raw(&self) -> &[u8] {
        &self.dist
    }
}

/// All-pairs distances by vertex index.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    rows: Vec<Vec<u8>>,
}

impl DistanceTable {
    pub fn get(&self, a: usize, b: usize) -> Distance {
        match self.rows[a][b] {
            UNSEEN => Distance::Unreachable,
            d => Distance::Finite(d),
        }
    }

    /// Finite distance, panicking on disconnected pairs.
    pub fn finite(&self, a: usize, b: usize) -> u32 {
        self.get(a, b).finite().expect("graph is connected")
    }
}
