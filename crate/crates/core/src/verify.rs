//! Stand-alone certificate checker.
//!
//! Works on plain integer lists and deliberately avoids the bitmask types
//! used by the constructions, so a bug there cannot hide itself here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// On-disk form of a path certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub n: u32,
    pub k: u32,
    pub claimed_bound: u32,
    pub vertices: Vec<String>,
}

impl CertificateFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        serde_json::from_str(text).map_err(|e| VerifyError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error("certificate has no vertices")]
    Empty,
    #[error("vertex {index}: cannot parse {text:?}")]
    Parse { index: usize, text: String },
    #[error("vertex {index}: has {got} elements, expected {expected}")]
    Size { index: usize, expected: u32, got: usize },
    #[error("vertex {index}: element {element} outside 1..={n}")]
    Range { index: usize, element: u32, n: u32 },
    #[error("vertex {index}: elements not strictly increasing")]
    Order { index: usize },
    #[error("vertex {index}: {first} and {second} are cyclically consecutive")]
    NotStable { index: usize, first: u32, second: u32 },
    #[error("vertices {index} and {} share element {element}", .index + 1)]
    NotAdjacent { index: usize, element: u32 },
    #[error("path has {length} edges, more than the claimed {bound}")]
    TooLong { length: usize, bound: u32 },
    #[error("path runs from {found_first} to {found_last}, expected {expected_first} to {expected_last}")]
    Endpoints { found_first: String, found_last: String, expected_first: String, expected_last: String },
}

/// Summary of an accepted certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verified {
    pub n: u32,
    pub k: u32,
    pub length: u32,
    pub claimed_bound: u32,
}

fn parse_list(index: usize, text: &str) -> Result<Vec<u32>, VerifyError> {
    let err = || VerifyError::Parse { index, text: text.to_string() };
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| t.parse::<u32>().map_err(|_| err())).collect()
}

fn check_vertex(index: usize, v: &[u32], n: u32, k: u32) -> Result<(), VerifyError> {
    if v.len() != k as usize {
        return Err(VerifyError::Size { index, expected: k, got: v.len() });
    }
    for &e in v {
        if e == 0 || e > n {
            return Err(VerifyError::Range { index, element: e, n });
        }
    }
    for pair in v.windows(2) {
        if pair[0] >= pair[1] {
            return Err(VerifyError::Order { index });
        }
        if pair[1] - pair[0] == 1 {
            return Err(VerifyError::NotStable { index, first: pair[0], second: pair[1] });
        }
    }
    if let (Some(&first), Some(&last)) = (v.first(), v.last()) {
        if v.len() > 1 && first == 1 && last == n {
            return Err(VerifyError::NotStable { index, first: last, second: first });
        }
    }
    Ok(())
}

/// Check that each vertex is a 2-stable `k`-subset of the `n`-cycle, that
/// consecutive vertices are disjoint, and that the length respects the bound.
pub fn verify_path(n: u32, k: u32, vertices: &[Vec<u32>], claimed_bound: u32) -> Result<Verified, VerifyError> {
    if vertices.is_empty() {
        return Err(VerifyError::Empty);
    }
    for (index, v) in vertices.iter().enumerate() {
        check_vertex(index, v, n, k)?;
    }
    for (index, pair) in vertices.windows(2).enumerate() {
        if let Some(&element) = pair[0].iter().find(|e| pair[1].contains(e)) {
            return Err(VerifyError::NotAdjacent { index, element });
        }
    }
    let length = vertices.len() - 1;
    if length > claimed_bound as usize {
        return Err(VerifyError::TooLong { length, bound: claimed_bound });
    }
    Ok(Verified { n, k, length: length as u32, claimed_bound })
}

pub fn verify_certificate(file: &CertificateFile) -> Result<Verified, VerifyError> {
    let vertices = file.vertices.iter().enumerate().map(|(i, t)| parse_list(i, t)).collect::<Result<Vec<_>, _>>()?;
    verify_path(file.n, file.k, &vertices, file.claimed_bound)
}

/// As [`verify_certificate`], and also require the given endpoints.
pub fn verify_between(file: &CertificateFile, first: &str, last: &str) -> Result<Verified, VerifyError> {
    let verified = verify_certificate(file)?;
    let (found_first, found_last) = (&file.vertices[0], file.vertices.last().expect("nonempty"));
    if found_first != first || found_last != last {
        return Err(VerifyError::Endpoints {
            found_first: found_first.clone(),
            found_last: found_last.clone(),
            expected_first: first.to_string(),
            expected_last: last.to_string(),
        });
    }
    Ok(verified)
}

pub fn verify_json(text: &str) -> Result<Verified, VerifyError> {
    verify_certificate(&CertificateFile::from_json(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(n: u32, k: u32, bound: u32, vertices: &[&str]) -> CertificateFile {
        CertificateFile { n, k, claimed_bound: bound, vertices: vertices.iter().map(|s| s.to_string()).collect() }
    }

    #[test]
    fn accepts_a_valid_path() {
        let f = file(10, 4, 3, &["1,4,6,8", "3,5,7,9", "2,4,6,8", "1,5,7,9"]);
        assert_eq!(verify_certificate(&f).unwrap().length, 3);
    }

    #[test]
    fn rejects_shared_elements() {
        let f = file(10, 4, 3, &["1,3,5,7", "2,4,6,8", "2,5,7,9"]);
        assert_eq!(verify_certificate(&f), Err(VerifyError::NotAdjacent { index: 1, element: 2 }));
    }

    #[test]
    fn rejects_unstable_and_malformed_vertices() {
        let wrap = file(10, 3, 1, &["1,4,10", "2,5,7"]);
        assert!(matches!(verify_certificate(&wrap), Err(VerifyError::NotStable { index: 0, .. })));
        let consecutive = file(10, 3, 1, &["1,2,5", "3,7,9"]);
        assert!(matches!(verify_certificate(&consecutive), Err(VerifyError::NotStable { .. })));
        let short = file(10, 3, 1, &["1,4", "3,7,9"]);
        assert!(matches!(verify_certificate(&short), Err(VerifyError::Size { .. })));
        let range = file(10, 3, 1, &["1,4,11", "3,7,9"]);
        assert!(matches!(verify_certificate(&range), Err(VerifyError::Range { .. })));
        let junk = file(10, 3, 1, &["1,x,5"]);
        assert!(matches!(verify_certificate(&junk), Err(VerifyError::Parse { .. })));
        assert!(matches!(verify_certificate(&file(10, 3, 1, &[])), Err(VerifyError::Empty)));
    }

    #[test]
    fn rejects_long_paths() {
        let f = file(7, 3, 1, &["1,3,5", "2,4,6", "1,3,5"]);
        assert!(matches!(verify_certificate(&f), Err(VerifyError::TooLong { length: 2, bound: 1 })));
    }

    #[test]
    fn json_round_trip_and_endpoints() {
        let f = file(7, 3, 1, &["1,3,5", "2,4,6"]);
        let text = f.to_json();
        assert_eq!(verify_json(&text).unwrap().length, 1);
        assert!(verify_between(&f, "1,3,5", "2,4,6").is_ok());
        assert!(matches!(verify_between(&f, "1,3,5", "2,4,7"), Err(VerifyError::Endpoints { .. })));
        assert!(matches!(verify_json("{"), Err(VerifyError::Json(_))));
    }
}
