//! Spherical skeletons: the combinatorial record of a spherical variety.
//!
//! A skeleton bundles a root system, the spherically closed spherical
//! roots (stored as coefficient vectors over the simple roots, linearly
//! independent, spanning the cone `T`), and the `B`-invariant prime
//! divisors. Each divisor carries the simple roots moving it
//! (`varsigma`), its valuation functional evaluated on the spherical
//! roots (`c`), and its anticanonical multiplicity (`m`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};

use crate::exact::{
    cone_is_full, is_even_integer, is_integer, is_linearly_independent, Matrix, Rat, Vector,
};
use crate::roots::{RootLabel, RootSystem};
use crate::{Error, Result};

/// A `B`-invariant prime divisor. Colors are exactly the divisors with
/// nonempty `varsigma`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Divisor {
    pub name: String,
    /// Simple roots whose minimal parabolic moves the divisor.
    pub varsigma: BTreeSet<RootLabel>,
    /// Value vector of the valuation functional on the spherical roots:
    /// entry `j` is the pairing with the `j`-th spherical root.
    pub c: Vector,
    /// Anticanonical multiplicity, a positive integer.
    pub m: u64,
}

impl Divisor {
    pub fn new(name: impl Into<String>, varsigma: BTreeSet<RootLabel>, c: Vector, m: u64) -> Self {
        Divisor {
            name: name.into(),
            varsigma,
            c,
            m,
        }
    }

    pub fn is_color(&self) -> bool {
        !self.varsigma.is_empty()
    }

    pub fn m_rat(&self) -> Rat {
        Rat::from_integer(self.m.into())
    }
}

/// Spherical skeleton: root system, spherical roots, divisors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SphericalSkeleton {
    pub rs: RootSystem,
    /// Spherically closed spherical roots in simple-root coordinates.
    pub sigma_sc: Vec<Vector>,
    pub divisors: Vec<Divisor>,
}

/// A violated validation rule, with references into the offending data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// Vector dimensions inconsistent with the root system or the
    /// spherical-root count.
    Shape { detail: String },
    /// V1: the spherical roots are linearly dependent.
    SigmaDependent,
    /// V1: a spherical root has a negative simple-root coefficient.
    SigmaNotNonNegative { index: usize },
    /// V2: a divisor pairs non-integrally with a spherical root.
    NonIntegralPairing { divisor: String, index: usize },
    /// V3: a divisor references a simple root absent from the system.
    UnknownVarsigmaLabel { divisor: String, label: String },
    /// V3: duplicate or empty divisor name.
    BadDivisorName { name: String },
    /// V4: a doubled simple root must be moved by exactly one color.
    Type2aCount { label: RootLabel, found: usize },
    /// V4: the color of a doubled simple root moves other roots too.
    Type2aNotExclusive { label: RootLabel, divisor: String },
    /// V4: a simple spherical root must be moved by exactly two colors.
    TypeACount { label: RootLabel, found: usize },
    /// V5: multiplicities must be positive.
    NonPositiveM { divisor: String },
    /// V6: a generator proportional to a simple root must be the root
    /// itself or its double.
    BadRayMultiple { index: usize },
    /// V6: stored doubled iff moved by exactly one color.
    WrongNormalization {
        index: usize,
        label: RootLabel,
        colors: usize,
    },
}

impl Violation {
    /// Rule identifier (V1..V6, or V0 for shape problems).
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::Shape { .. } => "V0",
            Violation::SigmaDependent | Violation::SigmaNotNonNegative { .. } => "V1",
            Violation::NonIntegralPairing { .. } => "V2",
            Violation::UnknownVarsigmaLabel { .. } | Violation::BadDivisorName { .. } => "V3",
            Violation::Type2aCount { .. }
            | Violation::Type2aNotExclusive { .. }
            | Violation::TypeACount { .. } => "V4",
            Violation::NonPositiveM { .. } => "V5",
            Violation::BadRayMultiple { .. } | Violation::WrongNormalization { .. } => "V6",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.rule())?;
        match self {
            Violation::Shape { detail } => write!(f, "{detail}"),
            Violation::SigmaDependent => {
                write!(f, "spherical roots are linearly dependent")
            }
            Violation::SigmaNotNonNegative { index } => write!(
                f,
                "spherical root #{index} has a negative simple-root coefficient"
            ),
            Violation::NonIntegralPairing { divisor, index } => write!(
                f,
                "divisor {divisor} pairs non-integrally with spherical root #{index}"
            ),
            Violation::UnknownVarsigmaLabel { divisor, label } => {
                write!(f, "divisor {divisor} moves unknown simple root {label}")
            }
            Violation::BadDivisorName { name } => {
                write!(f, "duplicate or empty divisor name {name:?}")
            }
            Violation::Type2aCount { label, found } => write!(
                f,
                "doubled root 2*{label} needs exactly one moving color, found {found}"
            ),
            Violation::Type2aNotExclusive { label, divisor } => write!(
                f,
                "color {divisor} of doubled root 2*{label} must move only {label}"
            ),
            Violation::TypeACount { label, found } => write!(
                f,
                "simple spherical root {label} needs exactly two moving colors, found {found}"
            ),
            Violation::NonPositiveM { divisor } => {
                write!(f, "divisor {divisor} has non-positive multiplicity")
            }
            Violation::BadRayMultiple { index } => write!(
                f,
                "spherical root #{index} is a multiple of a simple root other than 1 or 2"
            ),
            Violation::WrongNormalization {
                index,
                label,
                colors,
            } => write!(
                f,
                "spherical root #{index} on the ray of {label} stored with the wrong \
                 normalization for {colors} moving color(s)"
            ),
        }
    }
}

/// How a spherical root sits relative to the simple roots.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RayClass {
    /// Equal to the simple root with the given coordinate index.
    Simple(usize),
    /// Equal to twice the simple root with the given coordinate index.
    DoubledSimple(usize),
    /// Another positive multiple of a simple root.
    OtherMultiple(usize),
    /// Not proportional to any simple root.
    General,
}

/// Sets derived from a valid skeleton.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivedSets {
    /// Indices into `sigma_sc` of roots equal to a simple root.
    pub sigma_a: Vec<usize>,
    /// Indices into `sigma_sc` of roots equal to twice a simple root.
    pub sigma_2a: Vec<usize>,
    /// Names of the colors.
    pub colors: Vec<String>,
    /// Names of the `G`-invariant divisors.
    pub g_invariant: Vec<String>,
    /// Simple roots whose double is a spherical root and whose pairing
    /// with every divisor is integral.
    pub script_s: Vec<RootLabel>,
    /// The unique color attached to each member of `script_s`.
    pub script_s_colors: BTreeMap<RootLabel, String>,
}

impl DerivedSets {
    /// Names of the colors attached to `script_s`.
    pub fn d_script_s(&self) -> BTreeSet<String> {
        self.script_s_colors.values().cloned().collect()
    }
}

impl SphericalSkeleton {
    pub fn new(rs: RootSystem, sigma_sc: Vec<Vector>, divisors: Vec<Divisor>) -> Self {
        SphericalSkeleton {
            rs,
            sigma_sc,
            divisors,
        }
    }

    /// Number of spherical roots; the dimension of the coefficient space
    /// everything else works in.
    pub fn r(&self) -> usize {
        self.sigma_sc.len()
    }

    pub fn divisor(&self, name: &str) -> Option<&Divisor> {
        self.divisors.iter().find(|d| d.name == name)
    }

    /// The value matrix: row per divisor, column per spherical root.
    pub fn c_matrix(&self) -> Matrix {
        Matrix::from_rows(
            self.r(),
            self.divisors.iter().map(|d| d.c.clone()).collect(),
        )
    }

    /// Union of all `varsigma` sets: the simple roots moving some color.
    pub fn moved_labels(&self) -> BTreeSet<RootLabel> {
        self.divisors
            .iter()
            .flat_map(|d| d.varsigma.iter().copied())
            .collect()
    }

    /// Classifies a spherical root against the simple roots.
    pub fn ray_class(&self, j: usize) -> RayClass {
        let sigma = &self.sigma_sc[j];
        let nonzero: Vec<usize> = (0..sigma.dim()).filter(|&i| !sigma[i].is_zero()).collect();
        if nonzero.len() != 1 {
            return RayClass::General;
        }
        let i = nonzero[0];
        let coeff = &sigma[i];
        if !coeff.is_positive() {
            return RayClass::General;
        }
        if coeff.is_one() {
            RayClass::Simple(i)
        } else if *coeff == Rat::from_integer(2.into()) {
            RayClass::DoubledSimple(i)
        } else {
            RayClass::OtherMultiple(i)
        }
    }

    /// Colors moved by the given simple root.
    fn colors_moving(&self, label: &RootLabel) -> Vec<&Divisor> {
        self.divisors
            .iter()
            .filter(|d| d.is_color() && d.varsigma.contains(label))
            .collect()
    }

    /// Checks all validation rules; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let rank = self.rs.rank();
        let r = self.r();

        for (j, sigma) in self.sigma_sc.iter().enumerate() {
            if sigma.dim() != rank {
                out.push(Violation::Shape {
                    detail: format!(
                        "spherical root #{j} has {} coordinates, root system has rank {rank}",
                        sigma.dim()
                    ),
                });
            }
        }
        for d in &self.divisors {
            if d.c.dim() != r {
                out.push(Violation::Shape {
                    detail: format!(
                        "divisor {} has {} pairings, expected {r}",
                        d.name,
                        d.c.dim()
                    ),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }

        // V1
        for (j, sigma) in self.sigma_sc.iter().enumerate() {
            if sigma.iter().any(|x| x.is_negative()) {
                out.push(Violation::SigmaNotNonNegative { index: j });
            }
        }
        if !is_linearly_independent(&self.sigma_sc).unwrap_or(false) && !self.sigma_sc.is_empty() {
            out.push(Violation::SigmaDependent);
        }

        // V2, V3, V5
        let mut seen = BTreeSet::new();
        for d in &self.divisors {
            for (j, value) in d.c.iter().enumerate() {
                if !is_integer(value) {
                    out.push(Violation::NonIntegralPairing {
                        divisor: d.name.clone(),
                        index: j,
                    });
                }
            }
            for label in &d.varsigma {
                if self.rs.label_index(label).is_none() {
                    out.push(Violation::UnknownVarsigmaLabel {
                        divisor: d.name.clone(),
                        label: label.to_string(),
                    });
                }
            }
            if d.name.is_empty() || !seen.insert(d.name.clone()) {
                out.push(Violation::BadDivisorName {
                    name: d.name.clone(),
                });
            }
            if d.m == 0 {
                out.push(Violation::NonPositiveM {
                    divisor: d.name.clone(),
                });
            }
        }

        // V4 and V6 on generators proportional to a simple root
        for j in 0..r {
            match self.ray_class(j) {
                RayClass::General => {}
                RayClass::OtherMultiple(_) => {
                    out.push(Violation::BadRayMultiple { index: j });
                }
                RayClass::Simple(i) => {
                    let label = self.rs.label_at(i);
                    let movers = self.colors_moving(&label);
                    if movers.len() != 2 {
                        out.push(Violation::TypeACount {
                            label,
                            found: movers.len(),
                        });
                    }
                    if movers.len() == 1 {
                        out.push(Violation::WrongNormalization {
                            index: j,
                            label,
                            colors: 1,
                        });
                    }
                }
                RayClass::DoubledSimple(i) => {
                    let label = self.rs.label_at(i);
                    let movers = self.colors_moving(&label);
                    if movers.len() != 1 {
                        out.push(Violation::Type2aCount {
                            label,
                            found: movers.len(),
                        });
                    }
                    if let [color] = movers.as_slice() {
                        if color.varsigma.len() != 1 {
                            out.push(Violation::Type2aNotExclusive {
                                label,
                                divisor: color.name.clone(),
                            });
                        }
                    } else if movers.len() >= 2 {
                        out.push(Violation::WrongNormalization {
                            index: j,
                            label,
                            colors: movers.len(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSkeleton(violations))
        }
    }
}

/// Computes all sets derived from a valid skeleton.
pub fn derived_sets(sk: &SphericalSkeleton) -> Result<DerivedSets> {
    sk.ensure_valid()?;
    let mut sigma_a = Vec::new();
    let mut sigma_2a = Vec::new();
    let mut script_s = Vec::new();
    let mut script_s_colors = BTreeMap::new();

    for j in 0..sk.r() {
        match sk.ray_class(j) {
            RayClass::Simple(_) => sigma_a.push(j),
            RayClass::DoubledSimple(i) => {
                sigma_2a.push(j);
                let label = sk.rs.label_at(i);
                // alpha lies in script_s iff its pairing with every
                // divisor is integral, i.e. the 2*alpha column is even.
                if sk.divisors.iter().all(|d| is_even_integer(&d.c[j])) {
                    let color = sk
                        .divisors
                        .iter()
                        .find(|d| d.varsigma.contains(&label))
                        .expect("validated doubled root has its color");
                    script_s.push(label);
                    script_s_colors.insert(label, color.name.clone());
                }
            }
            _ => {}
        }
    }

    let colors = sk
        .divisors
        .iter()
        .filter(|d| d.is_color())
        .map(|d| d.name.clone())
        .collect();
    let g_invariant = sk
        .divisors
        .iter()
        .filter(|d| !d.is_color())
        .map(|d| d.name.clone())
        .collect();

    Ok(DerivedSets {
        sigma_a,
        sigma_2a,
        colors,
        g_invariant,
        script_s,
        script_s_colors,
    })
}

/// True iff the valuation functionals positively span the whole dual
/// space of the span of the spherical roots.
pub fn is_complete(sk: &SphericalSkeleton) -> Result<bool> {
    sk.ensure_valid()?;
    let rows: Vec<Vector> = sk.divisors.iter().map(|d| d.c.clone()).collect();
    cone_is_full(&rows, sk.r())
}

/// True iff `script_s` is empty, i.e. the Cox ring is factorial.
pub fn is_factorial(sk: &SphericalSkeleton) -> Result<bool> {
    Ok(derived_sets(sk)?.script_s.is_empty())
}

/// Canonical small skeletons, also shipped as corpus files.
pub mod fixtures {
    use super::*;
    use crate::roots::{build_root_system, Component, RootSystemSpec, SimpleType};

    fn a1() -> RootSystem {
        build_root_system(&RootSystemSpec::new(vec![Component {
            kind: SimpleType::A,
            rank: 1,
        }]))
        .unwrap()
    }

    fn a1_x_a1() -> RootSystem {
        build_root_system(&RootSystemSpec::new(vec![
            Component {
                kind: SimpleType::A,
                rank: 1,
            },
            Component {
                kind: SimpleType::A,
                rank: 1,
            },
        ]))
        .unwrap()
    }

    fn label(s: &str) -> RootLabel {
        s.parse().unwrap()
    }

    /// FIX-PT: the skeleton of a point.
    pub fn fix_pt() -> SphericalSkeleton {
        SphericalSkeleton::new(a1(), vec![], vec![])
    }

    /// FIX-P1: one color, no spherical roots, multiplicity 2.
    pub fn fix_p1() -> SphericalSkeleton {
        SphericalSkeleton::new(
            a1(),
            vec![],
            vec![Divisor::new(
                "D",
                BTreeSet::from([label("c1.1")]),
                Vector::zero(0),
                2,
            )],
        )
    }

    /// FIX-P2: a doubled root with one color and one invariant divisor.
    pub fn fix_p2() -> SphericalSkeleton {
        SphericalSkeleton::new(
            a1(),
            vec![Vector::from_i64(&[2])],
            vec![
                Divisor::new(
                    "D",
                    BTreeSet::from([label("c1.1")]),
                    Vector::from_i64(&[2]),
                    1,
                ),
                Divisor::new("E", BTreeSet::new(), Vector::from_i64(&[-1]), 1),
            ],
        )
    }

    /// FIX-S2: the doubled root alone; not complete.
    pub fn fix_s2() -> SphericalSkeleton {
        SphericalSkeleton::new(
            a1(),
            vec![Vector::from_i64(&[2])],
            vec![Divisor::new(
                "D",
                BTreeSet::from([label("c1.1")]),
                Vector::from_i64(&[2]),
                1,
            )],
        )
    }

    /// FIX-F1: rank-two example mixing a doubled root and a simple root.
    pub fn fix_f1() -> SphericalSkeleton {
        SphericalSkeleton::new(
            a1_x_a1(),
            vec![Vector::from_i64(&[2, 0]), Vector::from_i64(&[0, 1])],
            vec![
                Divisor::new(
                    "D1",
                    BTreeSet::from([label("c1.1")]),
                    Vector::from_i64(&[2, 0]),
                    1,
                ),
                Divisor::new(
                    "D2",
                    BTreeSet::from([label("c2.1")]),
                    Vector::from_i64(&[0, 1]),
                    1,
                ),
                Divisor::new(
                    "D3",
                    BTreeSet::from([label("c2.1")]),
                    Vector::from_i64(&[0, 1]),
                    1,
                ),
                Divisor::new("E", BTreeSet::new(), Vector::from_i64(&[-2, -1]), 1),
            ],
        )
    }

    /// All canonical fixtures with their corpus names.
    pub fn all() -> Vec<(&'static str, SphericalSkeleton)> {
        vec![
            ("FIX-PT", fix_pt()),
            ("FIX-P1", fix_p1()),
            ("FIX-P2", fix_p2()),
            ("FIX-S2", fix_s2()),
            ("FIX-F1", fix_f1()),
        ]
    }
}
