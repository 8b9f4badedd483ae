//! Finite reduced root systems presented in simple-root coordinates.
//!
//! Simple roots are realized abstractly as the standard basis of the
//! coefficient space (one coordinate per node, components concatenated),
//! with all pairings expressed through the Cartan matrix. No Euclidean
//! realization is ever needed: every functional the rest of the crate
//! evaluates lives on the span of the spherical roots.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::exact::{rat, Matrix, Vector};
use crate::{Error, Result};

/// The simple Lie types.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One irreducible factor of a root system.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "type")]
    pub kind: SimpleType,
    pub rank: usize,
}

impl Component {
    /// Standard admissibility bounds, chosen so that no two spellings
    /// denote the same system: B starts at rank 2, C at 3, D at 4.
    pub fn is_admissible(&self) -> bool {
        match self.kind {
            SimpleType::A => self.rank >= 1,
            SimpleType::B => self.rank >= 2,
            SimpleType::C => self.rank >= 3,
            SimpleType::D => self.rank >= 4,
            SimpleType::E => (6..=8).contains(&self.rank),
            SimpleType::F => self.rank == 4,
            SimpleType::G => self.rank == 2,
        }
    }

    /// Number of positive roots, by the classical closed forms.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.kind {
            SimpleType::A => n * (n + 1) / 2,
            SimpleType::B | SimpleType::C => n * n,
            SimpleType::D => n * (n - 1),
            SimpleType::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            SimpleType::F => 24,
            SimpleType::G => 6,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

/// Ordered list of irreducible factors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootSystemSpec {
    pub components: Vec<Component>,
}

impl RootSystemSpec {
    pub fn new(components: Vec<Component>) -> Self {
        RootSystemSpec { components }
    }

    pub fn total_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "(trivial)");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Label of a simple root: component index and node index within the
/// component, both 1-based, Bourbaki node order. Printed as `c<i>.<j>`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RootLabel {
    pub component: usize,
    pub node: usize,
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}.{}", self.component, self.node)
    }
}

impl FromStr for RootLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownLabel(s.to_string());
        let rest = s.strip_prefix('c').ok_or_else(bad)?;
        let (comp, node) = rest.split_once('.').ok_or_else(bad)?;
        let component: usize = comp.parse().map_err(|_| bad())?;
        let node: usize = node.parse().map_err(|_| bad())?;
        if component == 0 || node == 0 {
            return Err(bad());
        }
        Ok(RootLabel { component, node })
    }
}

/// A finite reduced root system with realized positive roots.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootSystem {
    spec: RootSystemSpec,
    labels: Vec<RootLabel>,
    offsets: Vec<usize>,
    cartan: Matrix,
    positive_roots: Vec<Vector>,
}

impl RootSystem {
    pub fn spec(&self) -> &RootSystemSpec {
        &self.spec
    }

    /// Total number of simple roots.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Simple-root labels in coordinate order.
    pub fn labels(&self) -> &[RootLabel] {
        &self.labels
    }

    pub fn label_index(&self, label: &RootLabel) -> Option<usize> {
        if label.component == 0 || label.component > self.spec.components.len() {
            return None;
        }
        let comp = &self.spec.components[label.component - 1];
        (label.node >= 1 && label.node <= comp.rank)
            .then(|| self.offsets[label.component - 1] + label.node - 1)
    }

    pub fn label_at(&self, index: usize) -> RootLabel {
        self.labels[index]
    }

    /// Cartan matrix; row `i` is the coroot of the `i`-th simple root
    /// paired against all simple roots.
    pub fn cartan(&self) -> &Matrix {
        &self.cartan
    }

    /// Simple root `alpha_i` in simple-root coordinates.
    pub fn simple_root(&self, i: usize) -> Vector {
        Vector::unit(self.rank(), i)
    }

    pub fn positive_roots(&self) -> &[Vector] {
        &self.positive_roots
    }
}

/// Builds the root system from its spec: simple roots become the standard
/// basis and the positive roots are generated by closing the simple roots
/// under root-string addition until stable.
pub fn build_root_system(spec: &RootSystemSpec) -> Result<RootSystem> {
    for c in &spec.components {
        if !c.is_admissible() {
            return Err(Error::InadmissibleSpec(format!(
                "{c} is not an admissible (type, rank) pair"
            )));
        }
    }
    let n = spec.total_rank();
    let mut offsets = Vec::with_capacity(spec.components.len());
    let mut labels = Vec::with_capacity(n);
    let mut cartan = vec![vec![0i64; n]; n];
    let mut offset = 0;
    for (ci, comp) in spec.components.iter().enumerate() {
        offsets.push(offset);
        for node in 1..=comp.rank {
            labels.push(RootLabel {
                component: ci + 1,
                node,
            });
        }
        let block = cartan_block(comp);
        for x in 0..comp.rank {
            for y in 0..comp.rank {
                cartan[offset + x][offset + y] = block[x][y];
            }
        }
        offset += comp.rank;
    }

    let positive_roots = close_under_root_strings(n, &cartan);
    let cartan = Matrix::from_rows(n, cartan.iter().map(|row| Vector::from_i64(row)).collect());
    Ok(RootSystem {
        spec: spec.clone(),
        labels,
        offsets,
        cartan,
        positive_roots,
    })
}

/// Cartan matrix of an irreducible factor, Bourbaki node order. Entry
/// `(i, j)` is the pairing of the `i`-th simple coroot with the `j`-th
/// simple root.
fn cartan_block(comp: &Component) -> Vec<Vec<i64>> {
    let n = comp.rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let bond = |c: &mut Vec<Vec<i64>>, x: usize, y: usize| {
        c[x][y] = -1;
        c[y][x] = -1;
    };
    match comp.kind {
        SimpleType::A => {
            for i in 0..n.saturating_sub(1) {
                bond(&mut c, i, i + 1);
            }
        }
        SimpleType::B => {
            for i in 0..n - 1 {
                bond(&mut c, i, i + 1);
            }
            // alpha_n is short: its coroot pairs to -2 with alpha_{n-1}
            c[n - 1][n - 2] = -2;
        }
        SimpleType::C => {
            for i in 0..n - 1 {
                bond(&mut c, i, i + 1);
            }
            // alpha_n is long
            c[n - 2][n - 1] = -2;
        }
        SimpleType::D => {
            for i in 0..n - 2 {
                bond(&mut c, i, i + 1);
            }
            bond(&mut c, n - 3, n - 1);
        }
        SimpleType::E => {
            bond(&mut c, 0, 2);
            bond(&mut c, 1, 3);
            for i in 2..n - 1 {
                bond(&mut c, i, i + 1);
            }
        }
        SimpleType::F => {
            bond(&mut c, 0, 1);
            bond(&mut c, 2, 3);
            c[1][2] = -1;
            c[2][1] = -2;
        }
        SimpleType::G => {
            c[0][1] = -3;
            c[1][0] = -1;
        }
    }
    c
}

/// Closure of the simple roots under root-string addition: for a known
/// positive root `beta` and a simple root `alpha_i`, the string property
/// `q = p - <beta, alpha_i^vee>` (with `p` the downward extent of the
/// string inside the known set) decides whether `beta + alpha_i` is a
/// root.
fn close_under_root_strings(n: usize, cartan: &[Vec<i64>]) -> Vec<Vector> {
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        set.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let mut p = 0i64;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if set.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if set.insert(up.clone()) {
                    queue.push_back(up);
                }
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = set.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    roots.iter().map(|r| Vector::from_i64(r)).collect()
}

/// A Cartan-matrix-preserving bijection of simple roots, stored as the
/// index map `i -> perm[i]`. For a single system these are the based
/// automorphisms; between two systems they witness isomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BasedAutomorphism {
    perm: Vec<usize>,
}

impl BasedAutomorphism {
    pub fn identity(rank: usize) -> Self {
        BasedAutomorphism {
            perm: (0..rank).collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Image of a vector in simple-root coordinates: coordinates travel
    /// with their simple roots.
    pub fn apply_vector(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.perm.len());
        let mut out = vec![rat(0); v.dim()];
        for (i, &j) in self.perm.iter().enumerate() {
            out[j] = v[i].clone();
        }
        Vector::new(out)
    }

    /// `other` after `self` (first `self`, then `other`).
    pub fn then(&self, other: &BasedAutomorphism) -> BasedAutomorphism {
        BasedAutomorphism {
            perm: self.perm.iter().map(|&j| other.perm[j]).collect(),
        }
    }

    pub fn inverse(&self) -> BasedAutomorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        BasedAutomorphism { perm }
    }
}

/// All Cartan-preserving bijections from the simple roots of `a` to the
/// simple roots of `b`: matchings of isomorphic components composed with
/// diagram automorphisms. Empty iff the systems are not isomorphic.
/// Sorted, so the first entry is the lexicographically least witness.
pub fn isomorphisms(a: &RootSystem, b: &RootSystem) -> Vec<BasedAutomorphism> {
    let mut groups_a: BTreeMap<Component, Vec<usize>> = BTreeMap::new();
    let mut groups_b: BTreeMap<Component, Vec<usize>> = BTreeMap::new();
    for (i, c) in a.spec.components.iter().enumerate() {
        groups_a.entry(*c).or_default().push(i);
    }
    for (i, c) in b.spec.components.iter().enumerate() {
        groups_b.entry(*c).or_default().push(i);
    }
    if groups_a.keys().collect::<Vec<_>>() != groups_b.keys().collect::<Vec<_>>()
        || groups_a.iter().any(|(c, v)| groups_b[c].len() != v.len())
    {
        return Vec::new();
    }
    if groups_a.is_empty() {
        return vec![BasedAutomorphism::identity(0)];
    }

    // Per-group choices: which b-component each a-component hits, and by
    // which diagram automorphism.
    type GroupChoice = Vec<(usize, usize, Vec<usize>)>;
    let mut per_group: Vec<Vec<GroupChoice>> = Vec::new();
    for (comp, a_members) in &groups_a {
        let autos = block_automorphisms(comp);
        let b_members = &groups_b[comp];
        let mut choices: Vec<GroupChoice> = Vec::new();
        for assignment in b_members.iter().permutations(b_members.len()) {
            for auto_choice in
                std::iter::repeat_n(0..autos.len(), a_members.len()).multi_cartesian_product()
            {
                let triple = a_members
                    .iter()
                    .zip(&assignment)
                    .zip(&auto_choice)
                    .map(|((&ai, &&bi), &auto_i)| (ai, bi, autos[auto_i].clone()))
                    .collect();
                choices.push(triple);
            }
        }
        per_group.push(choices);
    }

    let rank = a.rank();
    let mut result: Vec<BasedAutomorphism> = Vec::new();
    for combo in per_group
        .iter()
        .map(|choices| choices.iter())
        .multi_cartesian_product()
    {
        let mut perm = vec![usize::MAX; rank];
        for group_choice in combo {
            for (ai, bi, block_perm) in group_choice.iter() {
                let a_off = a.offsets[*ai];
                let b_off = b.offsets[*bi];
                for (x, &y) in block_perm.iter().enumerate() {
                    perm[a_off + x] = b_off + y;
                }
            }
        }
        debug_assert!(perm.iter().all(|&j| j != usize::MAX));
        result.push(BasedAutomorphism { perm });
    }
    result.sort();
    result.dedup();
    result
}

/// Diagram automorphisms of one irreducible block, via backtracking on
/// the Cartan matrix.
fn block_automorphisms(comp: &Component) -> Vec<Vec<usize>> {
    let c = cartan_block(comp);
    let n = comp.rank;
    let mut result = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn backtrack(
        depth: usize,
        n: usize,
        c: &[Vec<i64>],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        result: &mut Vec<Vec<usize>>,
    ) {
        if depth == n {
            result.push(image.clone());
            return;
        }
        for candidate in 0..n {
            if used[candidate] {
                continue;
            }
            let ok = (0..depth).all(|prev| {
                c[image[prev]][candidate] == c[prev][depth]
                    && c[candidate][image[prev]] == c[depth][prev]
            });
            if ok {
                image[depth] = candidate;
                used[candidate] = true;
                backtrack(depth + 1, n, c, image, used, result);
                used[candidate] = false;
            }
        }
    }
    backtrack(0, n, &c, &mut image, &mut used, &mut result);
    result.sort();
    result
}

/// All based automorphisms of `rs`: a finite group containing the
/// identity, closed under composition.
pub fn based_automorphisms(rs: &RootSystem) -> Vec<BasedAutomorphism> {
    isomorphisms(rs, rs)
}

/// Dimension of `G/P` for the parabolic moving exactly the given simple
/// roots: the number of positive roots whose simple-root expansion uses
/// some moved root.
pub fn dim_gp(rs: &RootSystem, moved: &BTreeSet<RootLabel>) -> Result<usize> {
    let mut indices = Vec::with_capacity(moved.len());
    for label in moved {
        let idx = rs
            .label_index(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        indices.push(idx);
    }
    Ok(rs
        .positive_roots()
        .iter()
        .filter(|beta| indices.iter().any(|&i| beta[i] > rat(0)))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(components: &[(SimpleType, usize)]) -> RootSystem {
        let spec = RootSystemSpec::new(
            components
                .iter()
                .map(|&(kind, rank)| Component { kind, rank })
                .collect(),
        );
        build_root_system(&spec).unwrap()
    }

    fn label(s: &str) -> RootLabel {
        s.parse().unwrap()
    }

    #[test]
    fn a1_has_one_positive_root() {
        let r = rs(&[(SimpleType::A, 1)]);
        assert_eq!(r.positive_roots().len(), 1);
        assert_eq!(r.positive_roots()[0], Vector::from_i64(&[1]));
    }

    #[test]
    fn a2_positive_roots() {
        let r = rs(&[(SimpleType::A, 2)]);
        let expected: Vec<Vector> = [[1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|c| Vector::from_i64(c))
            .collect();
        let mut got = r.positive_roots().to_vec();
        got.sort();
        let mut want = expected;
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn a1_x_a1_product() {
        let r = rs(&[(SimpleType::A, 1), (SimpleType::A, 1)]);
        assert_eq!(r.positive_roots().len(), 2);
        assert_eq!(
            r.cartan(),
            &Matrix::from_rows(
                2,
                vec![Vector::from_i64(&[2, 0]), Vector::from_i64(&[0, 2])]
            )
        );
        assert_eq!(r.labels()[0], label("c1.1"));
        assert_eq!(r.labels()[1], label("c2.1"));
    }

    #[test]
    fn inadmissible_specs_rejected() {
        for (kind, rank) in [
            (SimpleType::A, 0),
            (SimpleType::B, 1),
            (SimpleType::C, 2),
            (SimpleType::D, 3),
            (SimpleType::E, 5),
            (SimpleType::E, 9),
            (SimpleType::F, 3),
            (SimpleType::G, 1),
        ] {
            let spec = RootSystemSpec::new(vec![Component { kind, rank }]);
            assert!(build_root_system(&spec).is_err(), "{kind:?}{rank}");
        }
    }

    #[test]
    fn automorphisms_a1() {
        let r = rs(&[(SimpleType::A, 1)]);
        let autos = based_automorphisms(&r);
        assert_eq!(autos.len(), 1);
        assert!(autos[0].is_identity());
    }

    #[test]
    fn automorphisms_a2() {
        let r = rs(&[(SimpleType::A, 2)]);
        let autos = based_automorphisms(&r);
        assert_eq!(autos.len(), 2);
        assert!(autos[0].is_identity());
        assert_eq!(autos[1].perm(), &[1, 0]);
    }

    #[test]
    fn automorphisms_a1_x_a1() {
        let r = rs(&[(SimpleType::A, 1), (SimpleType::A, 1)]);
        let autos = based_automorphisms(&r);
        assert_eq!(autos.len(), 2);
        assert_eq!(autos[1].perm(), &[1, 0]);
    }

    #[test]
    fn automorphisms_d4_triality() {
        let r = rs(&[(SimpleType::D, 4)]);
        assert_eq!(based_automorphisms(&r).len(), 6);
    }

    #[test]
    fn automorphisms_respect_types() {
        // B2 has no diagram symmetry (the arrow breaks it).
        let r = rs(&[(SimpleType::B, 2)]);
        assert_eq!(based_automorphisms(&r).len(), 1);
        // A1 x A2 cannot swap components.
        let r = rs(&[(SimpleType::A, 1), (SimpleType::A, 2)]);
        assert_eq!(based_automorphisms(&r).len(), 2);
    }

    #[test]
    fn cross_isomorphisms_reorder_components() {
        let r1 = rs(&[(SimpleType::A, 1), (SimpleType::B, 2)]);
        let r2 = rs(&[(SimpleType::B, 2), (SimpleType::A, 1)]);
        let maps = isomorphisms(&r1, &r2);
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].perm(), &[2, 0, 1]);
        assert!(isomorphisms(&r1, &rs(&[(SimpleType::A, 3)])).is_empty());
    }

    #[test]
    fn dim_gp_examples() {
        let a1 = rs(&[(SimpleType::A, 1)]);
        assert_eq!(dim_gp(&a1, &BTreeSet::new()).unwrap(), 0);
        assert_eq!(dim_gp(&a1, &BTreeSet::from([label("c1.1")])).unwrap(), 1);
        let a1a1 = rs(&[(SimpleType::A, 1), (SimpleType::A, 1)]);
        assert_eq!(
            dim_gp(&a1a1, &BTreeSet::from([label("c1.1"), label("c2.1")])).unwrap(),
            2
        );
        assert!(dim_gp(&a1, &BTreeSet::from([label("c2.1")])).is_err());
    }

    #[test]
    fn dim_gp_full_flag() {
        // Moving every simple root of A2 moves all three positive roots.
        let a2 = rs(&[(SimpleType::A, 2)]);
        let all = BTreeSet::from([label("c1.1"), label("c1.2")]);
        assert_eq!(dim_gp(&a2, &all).unwrap(), 3);
        assert_eq!(dim_gp(&a2, &BTreeSet::from([label("c1.1")])).unwrap(), 2);
    }

    #[test]
    fn label_round_trip() {
        let l = label("c2.13");
        assert_eq!(
            l,
            RootLabel {
                component: 2,
                node: 13
            }
        );
        assert_eq!(l.to_string(), "c2.13");
        assert!("c0.1".parse::<RootLabel>().is_err());
        assert!("x1.1".parse::<RootLabel>().is_err());
        assert!("c1".parse::<RootLabel>().is_err());
    }
}
