//! Ground set `[n]` arranged on a cycle, and the 2-stable `k`-subsets that
//! form the vertices of SG(n, k).
//!
//! Element `i` of `[n]` lives in bit `i - 1` of a `u64`; `1` and `n` are
//! neighbours on the cycle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set. One machine word per set.
pub const MAX_N: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleParams {
    n: u32,
    k: u32,
}

impl CycleParams {
    /// Accepts any `1 <= k`, `1 <= n <= 64`. Combinations with `n < 2k` are
    /// legal and simply have no vertices; use [`CycleParams::require_regime`]
    /// where a nonempty connected graph is needed.
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::params("k must be at least 1"));
        }
        if n == 0 || n > MAX_N {
            return Err(Error::params(format!("n must lie in 1..={MAX_N}, got {n}")));
        }
        Ok(Self { n, k })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u32 {
        self.k
    }

    /// The excess `r = n - 2k` (negative when there are too few elements).
    pub fn r(self) -> i64 {
        self.n as i64 - 2 * self.k as i64
    }

    /// `n >= 2k + 1`.
    pub fn require_regime(self) -> Result<Self> {
        if self.n < 2 * self.k + 1 {
            return Err(Error::params(format!("need n >= 2k+1, got n={}, k={}", self.n, self.k)));
        }
        Ok(self)
    }

    pub(crate) fn full_mask(self) -> u64 {
        full_mask(self.n)
    }

    /// `x` reduced into `1..=n`, with `0 ≡ n`.
    pub fn wrap(self, x: i64) -> u32 {
        wrap(self.n, x)
    }

    /// Number of 2-stable `k`-subsets: `n/(n-k) * C(n-k, k)`.
    pub fn vertex_count(self) -> u64 {
        vertex_count(self.n, self.k)
    }
}

pub(crate) fn full_mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn wrap(n: u32, x: i64) -> u32 {
    ((x - 1).rem_euclid(n as i64) + 1) as u32
}

pub(crate) fn bit(element: u32) -> u64 {
    1u64 << (element - 1)
}

/// Rotate a mask over `[n]` clockwise by `shift` positions.
pub(crate) fn rotate_mask(mask: u64, n: u32, shift: u32) -> u64 {
    let s = shift % n;
    if s == 0 {
        return mask;
    }
    ((mask << s) | (mask >> (n - s))) & full_mask(n)
}

/// True iff no two elements of `mask` are cyclically consecutive in `[n]`.
pub(crate) fn mask_is_stable(mask: u64, n: u32) -> bool {
    if n == 1 {
        return true;
    }
    if n == 2 {
        return mask.count_ones() <= 1;
    }
    mask & rotate_mask(mask, n, 1) == 0
}

/// Ascending elements of a mask.
pub(crate) fn elements(mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() + 1);
        m &= m - 1;
    }
    out
}

pub(crate) fn mask_of(elements: &[u32]) -> u64 {
    elements.iter().fold(0, |acc, &e| acc | bit(e))
}

pub(crate) fn format_elements(elements: &[u32]) -> String {
    let parts: Vec<String> = elements.iter().map(u32::to_string).collect();
    parts.join(",")
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub(crate) fn vertex_count(n: u32, k: u32) -> u64 {
    if n < 2 * k {
        return 0;
    }
    let (n, k) = (n as u64, k as u64);
    (n as u128 * binomial(n - k, k) / (n - k) as u128) as u64
}

/// A 2-stable `k`-subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StableSet {
    mask: u64,
    params: CycleParams,
}

impl StableSet {
    pub fn new(params: CycleParams, members: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in members {
            if e == 0 || e > params.n {
                return Err(Error::OutOfRange { element: e, n: params.n });
            }
            if mask & bit(e) != 0 {
                return Err(Error::Parse { input: format_elements(members), reason: format!("duplicate element {e}") });
            }
            mask |= bit(e);
        }
        Self::from_mask(params, mask)
    }

    pub fn from_mask(params: CycleParams, mask: u64) -> Result<Self> {
        if mask & !params.full_mask() != 0 {
            let element = 64 - mask.leading_zeros();
            return Err(Error::OutOfRange { element, n: params.n });
        }
        let got = mask.count_ones();
        if got != params.k {
            return Err(Error::WrongSize { expected: params.k, got });
        }
        if let Some((first, second)) = consecutive_pair(mask, params.n) {
            return Err(Error::NotStable { first, second, n: params.n });
        }
        Ok(Self { mask, params })
    }

    /// Parse the `1,3,6,8` text form. Elements must be strictly increasing.
    pub fn parse(params: CycleParams, text: &str) -> Result<Self> {
        let fail = |reason: String| Error::Parse { input: text.to_string(), reason };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(fail("empty set".into()));
        }
        let mut members = Vec::new();
        for part in trimmed.split(',') {
            let value: u32 = part.parse().map_err(|_| fail(format!("{part:?} is not a positive integer")))?;
            if let Some(&last) = members.last() {
                if value == last {
                    return Err(fail(format!("duplicate element {value}")));
                }
                if value < last {
                    return Err(fail(format!("elements not increasing at {value}")));
                }
            }
            members.push(value);
        }
        Self::new(params, &members)
    }

    pub fn params(&self) -> CycleParams {
        self.params
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Ascending members.
    pub fn members(&self) -> Vec<u32> {
        elements(self.mask)
    }

    pub fn contains(&self, element: u32) -> bool {
        element >= 1 && element <= self.params.n && self.mask & bit(element) != 0
    }

    pub fn is_disjoint(&self, other: &StableSet) -> bool {
        self.mask & other.mask == 0
    }

    pub fn intersection_size(&self, other: &StableSet) -> u32 {
        (self.mask & other.mask).count_ones()
    }

    /// Each member `m` goes to `((m - 1 + shift) mod n) + 1`.
    pub fn rotate(&self, shift: i64) -> StableSet {
        let n = self.params.n;
        let s = shift.rem_euclid(n as i64) as u32;
        StableSet { mask: rotate_mask(self.mask, n, s), params: self.params }
    }

    /// The reflection `m -> (n - m + 2) mod n` fixing 1.
    pub fn reflect(&self) -> StableSet {
        let n = self.params.n;
        let mask = elements(self.mask).into_iter().fold(0, |acc, m| acc | bit(wrap(n, n as i64 - m as i64 + 2)));
        StableSet { mask, params: self.params }
    }

    /// Lexicographically least member sequence over the dihedral orbit.
    pub fn canonical_form(&self) -> StableSet {
        let n = self.params.n;
        let reflected = self.reflect().mask;
        // For equal-size sets, the sequence with the smallest element in the
        // symmetric difference is lex-smaller; bit reversal turns that into
        // an integer comparison.
        let mut best = self.mask;
        for s in 0..n {
            for base in [self.mask, reflected] {
                let image = rotate_mask(base, n, s);
                if image.reverse_bits() > best.reverse_bits() {
                    best = image;
                }
            }
        }
        StableSet { mask: best, params: self.params }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_form().mask == self.mask
    }

    pub(crate) fn from_mask_unchecked(params: CycleParams, mask: u64) -> Self {
        debug_assert!(Self::from_mask(params, mask).is_ok());
        Self { mask, params }
    }

    pub(crate) fn same_params(&self, other: &StableSet) -> Result<()> {
        if self.params != other.params {
            return Err(Error::MismatchedParams {
                left: (self.params.n, self.params.k),
                right: (other.params.n, other.params.k),
            });
        }
        Ok(())
    }
}

impl fmt::Display for StableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_elements(&self.members()))
    }
}

impl fmt::Debug for StableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}[n={}]", self, self.params.n)
    }
}

impl PartialOrd for StableSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the ascending member sequence.
impl Ord for StableSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.params.cmp(&other.params).then_with(|| other.mask.reverse_bits().cmp(&self.mask.reverse_bits()))
    }
}

fn consecutive_pair(mask: u64, n: u32) -> Option<(u32, u32)> {
    if mask_is_stable(mask, n) {
        return None;
    }
    let members = elements(mask);
    for w in members.windows(2) {
        if w[1] == w[0] + 1 {
            return Some((w[0], w[1]));
        }
    }
    // Only the wrap-around pair is left.
    Some((1, n))
}

/// Whether `members` is 2-stable on the `n`-cycle (size is not checked).
pub fn is_2_stable(members: &[u32], params: CycleParams) -> Result<bool> {
    let mut mask = 0u64;
    for &e in members {
        if e == 0 || e > params.n {
            return Err(Error::OutOfRange { element: e, n: params.n });
        }
        if mask & bit(e) != 0 {
            // a repeated element is trivially within distance < 2 of itself
            return Ok(false);
        }
        mask |= bit(e);
    }
    Ok(mask_is_stable(mask, params.n))
}

/// All 2-stable `k`-subsets of `[n]`, lexicographic order.
pub fn enumerate_stable_sets(params: CycleParams) -> Vec<StableSet> {
    enumerate_masks(params.n, params.k).into_iter().map(|mask| StableSet { mask, params }).collect()
}

pub(crate) fn enumerate_masks(n: u32, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(vertex_count(n, k) as usize);
    if n >= 2 * k {
        extend(n, k, 1, 0, false, &mut out);
    }
    out
}

fn extend(n: u32, remaining: u32, next: u32, mask: u64, has_one: bool, out: &mut Vec<u64>) {
    if remaining == 0 {
        out.push(mask);
        return;
    }
    // The last usable element is n, or n-1 when 1 is taken.
    let last = if has_one { n - 1 } else { n };
    // Leave room for the remaining elements at spacing 2.
    let mut e = next;
    while e + 2 * (remaining - 1) <= last {
        extend(n, remaining - 1, e + 2, mask | bit(e), has_one || e == 1, out);
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, k: u32) -> CycleParams {
        CycleParams::new(n, k).unwrap()
    }

    fn set(n: u32, members: &[u32]) -> StableSet {
        StableSet::new(p(n, members.len() as u32), members).unwrap()
    }

    #[test]
    fn stability_examples() {
        assert!(is_2_stable(&[1, 3, 5, 7], p(10, 4)).unwrap());
        // 7 and 1 are at distance 2 around C_8
        assert!(is_2_stable(&[1, 3, 5, 7], p(8, 4)).unwrap());
        assert!(!is_2_stable(&[1, 2, 5, 7], p(10, 4)).unwrap());
        assert!(!is_2_stable(&[1, 5, 10], p(10, 3)).unwrap());
        assert!(is_2_stable(&[2, 8, 10, 12, 15, 18, 20], p(20, 7)).unwrap());
        assert_eq!(is_2_stable(&[1, 11], p(10, 2)), Err(Error::OutOfRange { element: 11, n: 10 }));
    }

    #[test]
    fn brute_force_counts() {
        for (n, k, expected) in [(7, 3, 7), (9, 4, 9), (10, 4, 25)] {
            let brute = (0u64..1 << n).filter(|m| m.count_ones() == k && mask_is_stable(*m, n)).count();
            assert_eq!(brute, expected);
            assert_eq!(enumerate_stable_sets(p(n, k)).len(), expected);
            assert_eq!(vertex_count(n, k), expected as u64);
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = enumerate_stable_sets(p(10, 3));
        let seqs: Vec<Vec<u32>> = all.iter().map(StableSet::members).collect();
        let mut sorted = seqs.clone();
        sorted.sort();
        assert_eq!(seqs, sorted);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_vertex_set_is_not_an_error() {
        assert!(enumerate_stable_sets(p(5, 3)).is_empty());
        assert_eq!(vertex_count(5, 3), 0);
    }

    #[test]
    fn rotation_examples() {
        let s = set(10, &[1, 3, 5, 7]);
        assert_eq!(s.rotate(0), s);
        assert_eq!(s.rotate(1).members(), vec![2, 4, 6, 8]);
        assert_eq!(s.rotate(9).members(), vec![2, 4, 6, 10]);
        assert_eq!(s.rotate(-1), s.rotate(9));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(set(10, &[2, 4, 6, 8]).canonical_form().members(), vec![1, 3, 5, 7]);
        assert_eq!(set(10, &[1, 3, 5, 7]).canonical_form().members(), vec![1, 3, 5, 7]);
        // brute force over all 2n dihedral images
        let s = set(10, &[1, 4, 6, 9]);
        let mut images = Vec::new();
        for shift in 0..10 {
            images.push(s.rotate(shift).members());
            images.push(s.reflect().rotate(shift).members());
        }
        let least = images.into_iter().min().unwrap();
        assert_eq!(s.canonical_form().members(), least);
    }

    #[test]
    fn parse_rejects_unsorted_and_duplicates() {
        let params = p(10, 4);
        assert_eq!(StableSet::parse(params, "1,3,6,8").unwrap().to_string(), "1,3,6,8");
        assert!(matches!(StableSet::parse(params, "3,1,6,8"), Err(Error::Parse { .. })));
        assert!(matches!(StableSet::parse(params, "1,3,3,8"), Err(Error::Parse { .. })));
        assert!(matches!(StableSet::parse(params, "1, 3,6,8"), Err(Error::Parse { .. })));
        assert!(matches!(StableSet::parse(params, "1,2,6,8"), Err(Error::NotStable { .. })));
        assert!(matches!(StableSet::parse(params, "1,3,6"), Err(Error::WrongSize { .. })));
        assert!(matches!(StableSet::parse(params, "1,3,6,10"), Err(Error::NotStable { first: 1, second: 10, .. })));
    }

    #[test]
    fn params_bounds() {
        assert!(CycleParams::new(65, 3).is_err());
        assert!(CycleParams::new(10, 0).is_err());
        assert!(CycleParams::new(8, 4).unwrap().require_regime().is_err());
        assert!(CycleParams::new(64, 20).is_ok());
        let s = StableSet::new(p(64, 2), &[1, 63]).unwrap();
        assert_eq!(s.rotate(1).members(), vec![2, 64]);
        assert_eq!(s.rotate(2).members(), vec![1, 3]);
    }
}
