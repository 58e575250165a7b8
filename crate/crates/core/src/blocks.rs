//! Structure of an intersecting pair `(A, B)` on the cycle: the runs of
//! `X = A ∪ B`, the complementary runs ("blocks"), end classification, and
//! the exact distance-2 test.

use std::fmt;

use serde::Serialize;

use crate::cycle::{bit, elements, format_elements, wrap, CycleParams, StableSet};
use crate::error::{Error, Result};

/// A run of consecutive elements on the `n`-cycle. At most one interval in a
/// family wraps through `n -> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CyclicInterval {
    pub start: u32,
    pub len: u32,
}

impl CyclicInterval {
    pub fn end(&self, n: u32) -> u32 {
        wrap(n, self.start as i64 + self.len as i64 - 1)
    }

    /// Element preceding the interval (`i - 1`).
    pub fn before(&self, n: u32) -> u32 {
        wrap(n, self.start as i64 - 1)
    }

    /// Element following the interval (`j + 1`).
    pub fn after(&self, n: u32) -> u32 {
        wrap(n, self.start as i64 + self.len as i64)
    }

    /// Elements in clockwise order from `start`.
    pub fn elements(&self, n: u32) -> Vec<u32> {
        (0..self.len).map(|o| wrap(n, (self.start + o) as i64)).collect()
    }

    pub fn mask(&self, n: u32) -> u64 {
        self.elements(n).into_iter().fold(0, |acc, e| acc | bit(e))
    }

    pub fn contains(&self, n: u32, element: u32) -> bool {
        (element as i64 - self.start as i64).rem_euclid(n as i64) < self.len as i64
    }
}

/// Maximal runs of `mask` on the `n`-cycle, ordered by start. Requires
/// `mask` to be neither empty nor full.
pub(crate) fn runs(mask: u64, n: u32) -> Vec<CyclicInterval> {
    let inside = |e: u32| mask & bit(e) != 0;
    let mut out = Vec::new();
    for start in 1..=n {
        if inside(start) && !inside(wrap(n, start as i64 - 1)) {
            let mut len = 1;
            while inside(wrap(n, (start + len) as i64)) {
                len += 1;
            }
            out.push(CyclicInterval { start, len });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockType {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II(A)")]
    IIA,
    #[serde(rename = "II(B)")]
    IIB,
    #[serde(rename = "III(A)")]
    IIIA,
    #[serde(rename = "III(B)")]
    IIIB,
    #[serde(rename = "IV(A)")]
    IVA,
    #[serde(rename = "IV(B)")]
    IVB,
    #[serde(rename = "IV(H)")]
    IVH,
}

impl BlockType {
    pub const ALL: [BlockType; 8] = [
        BlockType::I,
        BlockType::IIA,
        BlockType::IIB,
        BlockType::IIIA,
        BlockType::IIIB,
        BlockType::IVA,
        BlockType::IVB,
        BlockType::IVH,
    ];

    pub fn is_type_iv(self) -> bool {
        matches!(self, BlockType::IVA | BlockType::IVB | BlockType::IVH)
    }

    fn classify(before: EndKind, after: EndKind) -> BlockType {
        use EndKind::*;
        match (before, after) {
            (H, H) => BlockType::I,
            (H, A) => BlockType::IIA,
            (H, B) => BlockType::IIB,
            (A, H) => BlockType::IIIA,
            (B, H) => BlockType::IIIB,
            (A, A) => BlockType::IVA,
            (B, B) => BlockType::IVB,
            (A, B) | (B, A) => BlockType::IVH,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockType::I => "I",
            BlockType::IIA => "II(A)",
            BlockType::IIB => "II(B)",
            BlockType::IIIA => "III(A)",
            BlockType::IIIB => "III(B)",
            BlockType::IVA => "IV(A)",
            BlockType::IVB => "IV(B)",
            BlockType::IVH => "IV(H)",
        };
        f.write_str(s)
    }
}

/// Which set an element of `X` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndKind {
    /// `A \ B`
    A,
    /// `B \ A`
    B,
    /// `A ∩ B`
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub interval: CyclicInterval,
    pub btype: BlockType,
    /// Elements guaranteed usable when building the star sets.
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentClass {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "H'")]
    HPrime,
    #[serde(rename = "H''")]
    HDoublePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Component {
    pub interval: CyclicInterval,
    pub class: ComponentClass,
}

/// End sets as masks over `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EndSets {
    pub a: u64,
    pub b: u64,
    pub h: u64,
    pub a_prime: u64,
    pub a_dprime: u64,
    pub b_prime: u64,
    pub b_dprime: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub a: StableSet,
    pub b: StableSet,
    /// Components of `A ∪ B`, ordered by start.
    pub components: Vec<Component>,
    /// Components of the complement, ordered by start.
    pub blocks: Vec<Block>,
    pub ends: EndSets,
    pub h: u32,
}

/// Block and component tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ComponentCounts {
    pub n_a: u32,
    pub n_b: u32,
    pub n_h_prime: u32,
    pub n_h_dprime: u32,
    /// Indexed in the order of [`BlockType::ALL`].
    pub blocks: [u32; 8],
}

impl ComponentCounts {
    pub fn of(&self, t: BlockType) -> u32 {
        self.blocks[t.index()]
    }
}

impl Decomposition {
    pub fn params(&self) -> CycleParams {
        self.a.params()
    }

    pub fn kind_of(&self, element: u32) -> Option<EndKind> {
        let (ina, inb) = (self.a.contains(element), self.b.contains(element));
        match (ina, inb) {
            (true, true) => Some(EndKind::H),
            (true, false) => Some(EndKind::A),
            (false, true) => Some(EndKind::B),
            (false, false) => None,
        }
    }

    /// Odd-cardinality blocks.
    pub fn odd_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.interval.len % 2 == 1)
    }

    pub fn complement_size(&self) -> u32 {
        self.blocks.iter().map(|b| b.interval.len).sum()
    }

    /// Largest 2-stable subset of the complement of `A ∪ B`: the
    /// alternating elements of every block, starting at its first element.
    pub fn max_stable_complement(&self) -> u64 {
        let n = self.params().n();
        let mut mask = 0u64;
        for block in &self.blocks {
            for (o, e) in block.interval.elements(n).into_iter().enumerate() {
                if o % 2 == 0 {
                    mask |= bit(e);
                }
            }
        }
        mask
    }

    pub fn components_with_class(&self, class: ComponentClass) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(move |c| c.class == class)
    }

    pub fn blocks_of_type(&self, t: BlockType) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.btype == t)
    }

    /// JSON-friendly rendering used by the CLI.
    pub fn to_report(&self) -> DecompositionReport {
        let n = self.params().n();
        let interval =
            |iv: &CyclicInterval| IntervalReport { start: iv.start, end: iv.end(n), elements: iv.elements(n) };
        DecompositionReport {
            n,
            k: self.params().k(),
            a: self.a.to_string(),
            b: self.b.to_string(),
            h: self.h,
            components: self
                .components
                .iter()
                .map(|c| ComponentReport { interval: interval(&c.interval), class: c.class })
                .collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockReport { interval: interval(&b.interval), block_type: b.btype, m: b.m })
                .collect(),
            ends: EndsReport {
                a: elements(self.ends.a),
                b: elements(self.ends.b),
                h: elements(self.ends.h),
                a_prime: elements(self.ends.a_prime),
                a_dprime: elements(self.ends.a_dprime),
                b_prime: elements(self.ends.b_prime),
                b_dprime: elements(self.ends.b_dprime),
            },
            counts: component_counts(self),
            distance2_criterion: distance2_criterion(self),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub start: u32,
    pub end: u32,
    pub elements: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    #[serde(flatten)]
    pub interval: IntervalReport,
    pub class: ComponentClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    #[serde(flatten)]
    pub interval: IntervalReport,
    #[serde(rename = "type")]
    pub block_type: BlockType,
    pub m: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndsReport {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub h: Vec<u32>,
    pub a_prime: Vec<u32>,
    pub a_dprime: Vec<u32>,
    pub b_prime: Vec<u32>,
    pub b_dprime: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub n: u32,
    pub k: u32,
    pub a: String,
    pub b: String,
    pub h: u32,
    pub components: Vec<ComponentReport>,
    pub blocks: Vec<BlockReport>,
    pub ends: EndsReport,
    pub counts: ComponentCounts,
    pub distance2_criterion: bool,
}

/// Decompose an intersecting pair of distinct vertices.
pub fn decompose(a: &StableSet, b: &StableSet) -> Result<Decomposition> {
    a.same_params(b)?;
    if a == b {
        return Err(Error::Degenerate(format!("A = B = {{{a}}}")));
    }
    if a.is_disjoint(b) {
        return Err(Error::precondition(format!("{{{a}}} and {{{b}}} are disjoint (adjacent); nothing to decompose")));
    }
    let params = a.params();
    let n = params.n();
    let x = a.mask() | b.mask();
    let hmask = a.mask() & b.mask();
    let kind = |e: u32| -> EndKind {
        if hmask & bit(e) != 0 {
            EndKind::H
        } else if a.mask() & bit(e) != 0 {
            EndKind::A
        } else {
            EndKind::B
        }
    };

    let mut ends = EndSets { h: hmask, ..EndSets::default() };
    let mut components = Vec::new();
    for iv in runs(x, n) {
        let members = iv.elements(n);
        let first = members[0];
        let last = *members.last().expect("nonempty run");
        let end_elems: Vec<u32> = if first == last { vec![first] } else { vec![first, last] };
        let singleton = iv.len == 1;
        let mut has_a = false;
        let mut has_b = false;
        for &e in &end_elems {
            match kind(e) {
                EndKind::A => {
                    has_a = true;
                    ends.a |= bit(e);
                    if singleton {
                        ends.a_dprime |= bit(e);
                    } else {
                        ends.a_prime |= bit(e);
                    }
                }
                EndKind::B => {
                    has_b = true;
                    ends.b |= bit(e);
                    if singleton {
                        ends.b_dprime |= bit(e);
                    } else {
                        ends.b_prime |= bit(e);
                    }
                }
                EndKind::H => {}
            }
        }
        let class = match (has_a, has_b) {
            (true, false) => ComponentClass::A,
            (false, true) => ComponentClass::B,
            _ if singleton && kind(first) == EndKind::H => ComponentClass::HPrime,
            _ => ComponentClass::HDoublePrime,
        };
        components.push(Component { interval: iv, class });
    }

    let blocks = runs(!x & params.full_mask(), n)
        .into_iter()
        .map(|iv| {
            let btype = BlockType::classify(kind(iv.before(n)), kind(iv.after(n)));
            let m = if btype.is_type_iv() { iv.len - 1 } else { iv.len };
            Block { interval: iv, btype, m }
        })
        .collect();

    Ok(Decomposition { a: *a, b: *b, components, blocks, ends, h: hmask.count_ones() })
}

/// `dist(A, B) = 2` exactly when the complement of `A ∪ B` holds a 2-stable
/// `k`-set, i.e. `|odd blocks| + |complement| >= 2k`.
pub fn distance2_criterion(d: &Decomposition) -> bool {
    let odd = d.odd_blocks().count() as u32;
    odd + d.complement_size() >= 2 * d.params().k()
}

pub fn component_counts(d: &Decomposition) -> ComponentCounts {
    let mut c = ComponentCounts::default();
    for comp in &d.components {
        match comp.class {
            ComponentClass::A => c.n_a += 1,
            ComponentClass::B => c.n_b += 1,
            ComponentClass::HPrime => c.n_h_prime += 1,
            ComponentClass::HDoublePrime => c.n_h_dprime += 1,
        }
    }
    for block in &d.blocks {
        c.blocks[block.btype.index()] += 1;
    }
    c
}

/// `Σ m([i,j]) >= n - 3k + 2h + 2`. Meaningful only for pairs at distance
/// at least 3.
pub fn m_sum_bound(d: &Decomposition) -> bool {
    let p = d.params();
    let sum: i64 = d.blocks.iter().map(|b| b.m as i64).sum();
    sum >= p.n() as i64 - 3 * p.k() as i64 + 2 * d.h as i64 + 2
}

/// Every structural identity a decomposition must satisfy; the first
/// failure is described in the error.
pub fn check_decomposition(d: &Decomposition) -> Result<()> {
    let n = d.params().n();
    let fail = |what: String| Err(Error::invariant(format!("{{{}}} vs {{{}}}: {what}", d.a, d.b)));

    if d.components.len() != d.blocks.len() {
        return fail(format!("{} components but {} blocks", d.components.len(), d.blocks.len()));
    }
    // alternation and partition of [n]
    let mut covered = 0u64;
    for (c, b) in d.components.iter().zip(&d.blocks) {
        for m in [c.interval.mask(n), b.interval.mask(n)] {
            if covered & m != 0 {
                return fail("intervals overlap".into());
            }
            covered |= m;
        }
    }
    if covered != crate::cycle::full_mask(n) {
        return fail("intervals do not cover [n]".into());
    }
    for c in &d.components {
        if !d.blocks.iter().any(|b| b.interval.start == c.interval.after(n)) {
            return fail(format!("component at {} not followed by a block", c.interval.start));
        }
    }
    for b in &d.blocks {
        if !d.components.iter().any(|c| c.interval.start == b.interval.after(n)) {
            return fail(format!("block at {} not followed by a component", b.interval.start));
        }
    }
    if d.components.iter().filter(|c| c.interval.start > c.interval.end(n)).count()
        + d.blocks.iter().filter(|b| b.interval.start > b.interval.end(n)).count()
        > 1
    {
        return fail("more than one wrapping interval".into());
    }
    let e = &d.ends;
    if e.h != d.a.mask() & d.b.mask() || d.h != e.h.count_ones() {
        return fail("e(H) differs from A ∩ B".into());
    }
    if e.a_prime & e.a_dprime != 0 || e.a_prime | e.a_dprime != e.a {
        return fail("e'(A), e''(A) do not partition e(A)".into());
    }
    if e.b_prime & e.b_dprime != 0 || e.b_prime | e.b_dprime != e.b {
        return fail("e'(B), e''(B) do not partition e(B)".into());
    }
    let weight = |p: u64, dp: u64| p.count_ones() + 2 * dp.count_ones();
    if weight(e.a_prime, e.a_dprime) != weight(e.b_prime, e.b_dprime) {
        return fail(format!(
            "|e'(A)|+2|e''(A)| = {} but |e'(B)|+2|e''(B)| = {}",
            weight(e.a_prime, e.a_dprime),
            weight(e.b_prime, e.b_dprime)
        ));
    }
    if e.h == 0 || e.a == 0 || e.b == 0 {
        return fail("an end set is empty".into());
    }
    for c in &d.components {
        let m = c.interval.mask(n);
        let expect_h_prime = c.interval.len == 1 && m & e.h != 0;
        if (c.class == ComponentClass::HPrime) != expect_h_prime {
            return fail(format!("component at {} misclassified", c.interval.start));
        }
    }
    for b in &d.blocks {
        let expected_m = if b.btype.is_type_iv() { b.interval.len - 1 } else { b.interval.len };
        if b.m != expected_m {
            return fail(format!("block at {} has m = {}", b.interval.start, b.m));
        }
    }
    let c = component_counts(d);
    if c.n_a != c.n_b {
        return fail(format!("n(A) = {} but n(B) = {}", c.n_a, c.n_b));
    }
    use BlockType::*;
    if 2 * d.h != 2 * c.of(I) + c.of(IIA) + c.of(IIB) + c.of(IIIA) + c.of(IIIB) {
        return fail("2h != 2n(I) + n(II) + n(III)".into());
    }
    if d.h != c.of(I) + c.of(IIA) + c.of(IIB) || d.h != c.of(I) + c.of(IIIA) + c.of(IIIB) {
        return fail("h != n(I) + n(II) or h != n(I) + n(III)".into());
    }
    if c.of(IIA) + c.of(IIIA) + 2 * c.of(IVA) != c.of(IIB) + c.of(IIIB) + 2 * c.of(IVB) {
        return fail("n(II(A))+n(III(A))+2n(IV(A)) != n(II(B))+n(III(B))+2n(IV(B))".into());
    }
    Ok(())
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.params().n();
        write!(f, "A={{{}}} B={{{}}} h={} X:", self.a, self.b, self.h)?;
        for c in &self.components {
            write!(f, " {{{}}}", format_elements(&c.interval.elements(n)))?;
        }
        write!(f, " blocks:")?;
        for b in &self.blocks {
            write!(f, " {{{}}}:{}", format_elements(&b.interval.elements(n)), b.btype)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::mask_of;

    fn set(n: u32, members: &[u32]) -> StableSet {
        StableSet::new(CycleParams::new(n, members.len() as u32).unwrap(), members).unwrap()
    }

    pub(crate) fn example_one() -> (StableSet, StableSet) {
        (set(20, &[2, 8, 10, 12, 15, 18, 20]), set(20, &[1, 6, 8, 10, 12, 14, 17]))
    }

    fn as_sets(ivs: impl Iterator<Item = CyclicInterval>, n: u32) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = ivs
            .map(|iv| {
                let mut e = iv.elements(n);
                e.sort();
                e
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn example_one_components_and_blocks() {
        let (a, b) = example_one();
        let d = decompose(&a, &b).unwrap();
        assert_eq!(
            as_sets(d.components.iter().map(|c| c.interval), 20),
            vec![vec![1, 2, 20], vec![6], vec![8], vec![10], vec![12], vec![14, 15], vec![17, 18]]
        );
        assert_eq!(
            as_sets(d.blocks.iter().map(|b| b.interval), 20),
            vec![vec![3, 4, 5], vec![7], vec![9], vec![11], vec![13], vec![16], vec![19]]
        );
        assert_eq!(d.h, 3);
        check_decomposition(&d).unwrap();
    }

    #[test]
    fn example_one_ends() {
        let (a, b) = example_one();
        let d = decompose(&a, &b).unwrap();
        assert_eq!(d.ends.a, mask_of(&[2, 15, 18, 20]));
        assert_eq!(d.ends.b, mask_of(&[6, 14, 17]));
        assert_eq!(d.ends.h, mask_of(&[8, 10, 12]));
        assert_eq!(d.ends.b_dprime, mask_of(&[6]));
        assert_eq!(d.ends.a_dprime, 0);
    }

    #[test]
    fn example_one_block_types() {
        let (a, b) = example_one();
        let d = decompose(&a, &b).unwrap();
        let type_at = |start: u32| d.blocks.iter().find(|b| b.interval.start == start).unwrap().btype;
        assert_eq!(type_at(9), BlockType::I);
        assert_eq!(type_at(11), BlockType::I);
        assert_eq!(type_at(13), BlockType::IIB);
        assert_eq!(type_at(7), BlockType::IIIB);
        assert_eq!(type_at(19), BlockType::IVA);
        assert_eq!(type_at(3), BlockType::IVH);
        assert_eq!(type_at(16), BlockType::IVH);
    }

    #[test]
    fn example_one_counts() {
        let (a, b) = example_one();
        let d = decompose(&a, &b).unwrap();
        let c = component_counts(&d);
        assert_eq!((c.n_a, c.n_b, c.n_h_prime, c.n_h_dprime), (1, 1, 3, 2));
        let a_comp = d.components_with_class(ComponentClass::A).next().unwrap();
        assert_eq!(a_comp.interval, CyclicInterval { start: 20, len: 3 });
        let b_comp = d.components_with_class(ComponentClass::B).next().unwrap();
        assert_eq!(b_comp.interval, CyclicInterval { start: 6, len: 1 });
    }

    #[test]
    fn example_one_m_sum() {
        let (a, b) = example_one();
        let d = decompose(&a, &b).unwrap();
        // blocks: {3,4,5} IV(H) -> 2, {16} IV(H) -> 0, {19} IV(A) -> 0, others 1 each
        let sum: u32 = d.blocks.iter().map(|b| b.m).sum();
        assert_eq!(sum, 2 + 1 + 1 + 1 + 1);
        // 20 - 21 + 6 + 2 = 7 > 6: the pair is at distance 2, so the bound
        // has no reason to hold here
        assert!(!m_sum_bound(&d));
        assert!(distance2_criterion(&d));
    }

    #[test]
    fn far_pair_fails_criterion() {
        for k in 3..=7u32 {
            let mut a = vec![1];
            a.extend((2..=k).map(|i| 2 * i));
            let mut b = vec![1];
            b.extend((2..=k).map(|i| 2 * i + 1));
            for n in 2 * k + 2..=4 * k - 3 {
                let d = decompose(&set(n, &a), &set(n, &b)).unwrap();
                assert!(!distance2_criterion(&d), "n={n} k={k}");
                assert!(m_sum_bound(&d));
            }
        }
    }

    #[test]
    fn degenerate_inputs_are_refused() {
        let a = set(10, &[1, 3, 5, 7]);
        assert!(matches!(decompose(&a, &a), Err(Error::Degenerate(_))));
        assert!(matches!(decompose(&a, &a.rotate(1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn interval_helpers_wrap() {
        let iv = CyclicInterval { start: 19, len: 4 };
        assert_eq!(iv.elements(20), vec![19, 20, 1, 2]);
        assert_eq!(iv.end(20), 2);
        assert_eq!(iv.before(20), 18);
        assert_eq!(iv.after(20), 3);
        assert!(iv.contains(20, 1));
        assert!(!iv.contains(20, 3));
    }
}
