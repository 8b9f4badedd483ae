//! The `.skel` file format: a small JSON document with exact fractions
//! stored as strings.
//!
//! ```json
//! {
//!   "name": "FIX-P2",
//!   "root_system": [{ "type": "A", "rank": 1 }],
//!   "spherical_roots": [["2"]],
//!   "divisors": [
//!     { "name": "D", "varsigma": ["c1.1"], "c": ["2"], "m": 1 },
//!     { "name": "E", "varsigma": [], "c": ["-1"], "m": 1 }
//!   ]
//! }
//! ```
//!
//! Spherical-root coordinates are listed over the simple roots in label
//! order (`c1.1, c1.2, ..., c2.1, ...`); each divisor's `c` lists its
//! pairings with the spherical roots in file order. Unknown fields are
//! rejected. Formatting is canonical: parse-format-parse is the
//! identity, and formatting a parsed file twice is byte-stable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::exact::{format_rat, parse_rat, Vector};
use crate::roots::{build_root_system, RootLabel, RootSystemSpec};
use crate::skel::{Divisor, SphericalSkeleton};
use crate::{Error, Result};

/// On-disk divisor record.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorFile {
    pub name: String,
    pub varsigma: Vec<String>,
    pub c: Vec<String>,
    pub m: u64,
}

/// On-disk skeleton record.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonFile {
    pub name: String,
    pub root_system: RootSystemSpec,
    pub spherical_roots: Vec<Vec<String>>,
    pub divisors: Vec<DivisorFile>,
}

impl SkeletonFile {
    /// Parses the JSON text without interpreting it.
    pub fn from_text(text: &str) -> Result<SkeletonFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical formatting: pretty JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Interprets the record as a skeleton. Fractions must parse, the
    /// root system must be admissible, labels must be well-formed, and
    /// all coordinate lists must have consistent lengths.
    pub fn to_skeleton(&self) -> Result<SphericalSkeleton> {
        let rs = build_root_system(&self.root_system)?;
        let rank = rs.rank();
        let r = self.spherical_roots.len();

        let mut sigma_sc = Vec::with_capacity(r);
        for (j, coords) in self.spherical_roots.iter().enumerate() {
            if coords.len() != rank {
                return Err(Error::Parse(format!(
                    "spherical root #{j} has {} coordinates, root system has rank {rank}",
                    coords.len()
                )));
            }
            let entries = coords.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?;
            sigma_sc.push(Vector::new(entries));
        }

        let mut divisors = Vec::with_capacity(self.divisors.len());
        for d in &self.divisors {
            if d.c.len() != r {
                return Err(Error::Parse(format!(
                    "divisor {} lists {} pairings, expected {r}",
                    d.name,
                    d.c.len()
                )));
            }
            let mut varsigma = BTreeSet::new();
            for l in &d.varsigma {
                varsigma.insert(l.parse::<RootLabel>()?);
            }
            let c = Vector::new(d.c.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?);
            divisors.push(Divisor::new(d.name.clone(), varsigma, c, d.m));
        }
        Ok(SphericalSkeleton::new(rs, sigma_sc, divisors))
    }

    /// Canonical record of a skeleton.
    pub fn from_skeleton(name: &str, sk: &SphericalSkeleton) -> SkeletonFile {
        SkeletonFile {
            name: name.to_string(),
            root_system: sk.rs.spec().clone(),
            spherical_roots: sk
                .sigma_sc
                .iter()
                .map(|v| v.iter().map(format_rat).collect())
                .collect(),
            divisors: sk
                .divisors
                .iter()
                .map(|d| DivisorFile {
                    name: d.name.clone(),
                    varsigma: d.varsigma.iter().map(|l| l.to_string()).collect(),
                    c: d.c.iter().map(format_rat).collect(),
                    m: d.m,
                })
                .collect(),
        }
    }
}

/// Parses a skeleton file and validates the result: the returned
/// skeleton always passes validation.
pub fn parse_skeleton_file(text: &str) -> Result<SphericalSkeleton> {
    let file = SkeletonFile::from_text(text)?;
    let sk = file.to_skeleton()?;
    sk.ensure_valid()?;
    Ok(sk)
}
