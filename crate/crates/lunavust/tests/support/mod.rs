//! Shared test support: an independent brute-force LP oracle, a
//! generator of random valid skeletons, and a re-verifier for
//! isomorphism witnesses. Nothing here reuses the library's simplex or
//! elimination paths.

#![allow(dead_code)]
// elimination code reads more naturally with explicit indices
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use lunavust::exact::{rat, LpOutcome, Polyhedron, Rat, Vector};
use lunavust::iso::SkeletonIso;
use lunavust::roots::{
    build_root_system, Component, RootLabel, RootSystem, RootSystemSpec, SimpleType,
};
use lunavust::skel::{Divisor, SphericalSkeleton};
use num::{One, Signed, Zero};
use rand::Rng;

/// Value-level LP outcome for oracle comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleOutcome {
    Optimal(Rat),
    Unbounded,
    Infeasible,
}

/// Exact optimum by vertex and extreme-ray enumeration.
///
/// Assumes the polyhedron is pointed (contains no line), which holds for
/// every program the library builds: they all carry nonnegativity or
/// margin rows. A pointed nonempty polyhedron has a vertex, and its
/// objective is unbounded iff some extreme recession ray improves it.
pub fn oracle_solve(p: &Polyhedron, objective: &Vector) -> OracleOutcome {
    let dim = p.dim();
    if dim == 0 {
        if p.rows().iter().any(|(_, b)| b.is_positive()) {
            return OracleOutcome::Infeasible;
        }
        return OracleOutcome::Optimal(Rat::zero());
    }

    let mut best: Option<Rat> = None;
    for subset in combinations(p.rows().len(), dim) {
        let a: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| p.rows()[i].0.entries().to_vec())
            .collect();
        let b: Vec<Rat> = subset.iter().map(|&i| p.rows()[i].1.clone()).collect();
        let Some(x) = solve_square(&a, &b) else {
            continue;
        };
        let x = Vector::new(x);
        if p.contains(&x) {
            let value = objective.dot(&x);
            best = Some(match best {
                Some(b) if b >= value => b,
                _ => value,
            });
        }
    }
    let Some(best) = best else {
        return OracleOutcome::Infeasible;
    };

    for subset in combinations(p.rows().len(), dim - 1) {
        let a: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| p.rows()[i].0.entries().to_vec())
            .collect();
        let Some(d) = nullspace_direction(&a, dim) else {
            continue;
        };
        for cand in [d.clone(), d.neg()] {
            if p.admits_ray(&cand) && objective.dot(&cand).is_positive() {
                return OracleOutcome::Unbounded;
            }
        }
    }
    OracleOutcome::Optimal(best)
}

pub fn agrees(outcome: &LpOutcome, oracle: &OracleOutcome) -> bool {
    match (outcome, oracle) {
        (LpOutcome::Optimal { value, .. }, OracleOutcome::Optimal(v)) => value == v,
        (LpOutcome::Unbounded { .. }, OracleOutcome::Unbounded) => true,
        (LpOutcome::Infeasible, OracleOutcome::Infeasible) => true,
        _ => false,
    }
}

/// All size-`k` index subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Unique solution of a square rational system by plain Gaussian
/// elimination with partial pivoting; `None` when singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let delta = &f * &m[col][j];
                    m[i][j] = &m[i][j] - delta;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Spanning vector of the nullspace of the given rows when that
/// nullspace is one-dimensional.
fn nullspace_direction(rows: &[Vec<Rat>], dim: usize) -> Option<Vector> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for j in 0..dim {
            m[rank][j] = &m[rank][j] / &p;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..dim {
                    let delta = &f * &m[rank][j];
                    m[i][j] = &m[i][j] - delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rank + 1 != dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut d = vec![Rat::zero(); dim];
    d[free] = Rat::one();
    for (r, &pc) in pivots.iter().enumerate() {
        d[pc] = -&m[r][free];
    }
    Some(Vector::new(d))
}

// ---------------------------------------------------------------------
// random skeletons

/// Pool of components available to the generator, all of total rank <= 4.
fn component_pool() -> Vec<Component> {
    vec![
        Component {
            kind: SimpleType::A,
            rank: 1,
        },
        Component {
            kind: SimpleType::A,
            rank: 2,
        },
        Component {
            kind: SimpleType::A,
            rank: 3,
        },
        Component {
            kind: SimpleType::A,
            rank: 4,
        },
        Component {
            kind: SimpleType::B,
            rank: 2,
        },
        Component {
            kind: SimpleType::B,
            rank: 3,
        },
        Component {
            kind: SimpleType::C,
            rank: 3,
        },
        Component {
            kind: SimpleType::D,
            rank: 4,
        },
        Component {
            kind: SimpleType::F,
            rank: 4,
        },
        Component {
            kind: SimpleType::G,
            rank: 2,
        },
    ]
}

/// A random valid skeleton: random admissible root system of total rank
/// at most 4, spherical roots drawn from simple roots, doubled simple
/// roots, and small nonnegative combinations, and divisors satisfying
/// the validation rules with multiplicities in 1..=3.
///
/// Divisor functionals follow the patterns of genuine spherical systems:
/// the two colors of a simple spherical root pair to 1 with it and their
/// values sum to the coroot pairings elsewhere, the color of a doubled
/// root carries half its coroot, further colors carry plain coroots, and
/// invariant divisors sit inside the valuation cone (all pairings
/// nonpositive). Arbitrary valid value matrices would break the
/// fixed-point/completeness equivalence, which is a theorem about
/// geometric data, not about everything the validator accepts.
pub fn random_skeleton(rng: &mut impl Rng) -> SphericalSkeleton {
    for _ in 0..1000 {
        if let Some(sk) = try_random_skeleton(rng) {
            assert!(sk.is_valid(), "generator invariant: {:?}", sk.validate());
            return sk;
        }
    }
    panic!("generator kept producing non-integral value matrices");
}

#[derive(Clone, Copy, PartialEq)]
enum Shape {
    Single(usize),
    Doubled(usize),
    Combo(usize, usize),
}

fn try_random_skeleton(rng: &mut impl Rng) -> Option<SphericalSkeleton> {
    let rs = random_root_system(rng);
    let rank = rs.rank();

    // spherical-root shapes on disjoint simple-root supports
    let budget = rng.gen_range(0..=rank.min(3));
    let mut simple_indices: Vec<usize> = (0..rank).collect();
    shuffle(&mut simple_indices, rng);
    let mut shapes: Vec<Shape> = Vec::new();
    let mut cursor = 0;
    while shapes.len() < budget && cursor < simple_indices.len() {
        let i = simple_indices[cursor];
        cursor += 1;
        match rng.gen_range(0..10) {
            0..=2 => shapes.push(Shape::Single(i)),
            3..=6 => shapes.push(Shape::Doubled(i)),
            _ => {
                if cursor < simple_indices.len() {
                    let j = simple_indices[cursor];
                    cursor += 1;
                    shapes.push(Shape::Combo(i, j));
                } else {
                    shapes.push(Shape::Single(i));
                }
            }
        }
    }

    let sigma_sc: Vec<Vector> = shapes
        .iter()
        .map(|shape| {
            let mut v = vec![0i64; rank];
            match *shape {
                Shape::Single(i) => v[i] = 1,
                Shape::Doubled(i) => v[i] = 2,
                Shape::Combo(i, j) => {
                    v[i] = rng.gen_range(1..=2);
                    v[j] = 1;
                }
            }
            Vector::from_i64(&v)
        })
        .collect();
    let r = sigma_sc.len();

    // pairing of a simple coroot with a spherical root
    let coroot_pairing = |i: usize, sigma: &Vector| -> i64 {
        let row = rs.cartan().row(i);
        let v = row.dot(sigma);
        assert!(v.denom() == &num::BigInt::from(1));
        i64::try_from(v.numer().clone()).unwrap()
    };

    let mut constrained: BTreeSet<usize> = BTreeSet::new();
    for shape in &shapes {
        match *shape {
            Shape::Single(i) | Shape::Doubled(i) => {
                constrained.insert(i);
            }
            Shape::Combo(..) => {}
        }
    }
    let free: Vec<usize> = (0..rank).filter(|i| !constrained.contains(i)).collect();

    // columns of doubled roots whose membership test should pass
    let doubled_cols: Vec<usize> = (0..r)
        .filter(|&j| matches!(shapes[j], Shape::Doubled(_)))
        .collect();
    let force_even: BTreeSet<usize> = doubled_cols
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.5))
        .collect();

    let mut divisors: Vec<Divisor> = Vec::new();
    let mut name = {
        let mut counter = 0;
        move || {
            counter += 1;
            format!("D{counter}")
        }
    };

    for (j, shape) in shapes.iter().enumerate() {
        match *shape {
            Shape::Doubled(i) => {
                // half the coroot; integrality can fail against other
                // generators, in which case the draw is rejected
                let mut c = Vec::with_capacity(r);
                for sigma in &sigma_sc {
                    let p = coroot_pairing(i, sigma);
                    if p % 2 != 0 {
                        return None;
                    }
                    c.push(p / 2);
                }
                divisors.push(Divisor::new(
                    name(),
                    BTreeSet::from([rs.label_at(i)]),
                    Vector::from_i64(&c),
                    rng.gen_range(1..=3),
                ));
            }
            Shape::Single(i) => {
                // two colors pairing to 1 with their root, summing to the
                // coroot elsewhere, and never exceeding 1 anywhere
                let mut c_plus = Vec::with_capacity(r);
                let mut c_minus = Vec::with_capacity(r);
                for (j2, sigma) in sigma_sc.iter().enumerate() {
                    let total = coroot_pairing(i, sigma);
                    if j2 == j {
                        c_plus.push(1);
                        c_minus.push(1);
                    } else {
                        let lower = (total - 1).max(-2);
                        let x = if force_even.contains(&j2) {
                            let evens: Vec<i64> = (lower..=1).filter(|v| v % 2 == 0).collect();
                            evens[rng.gen_range(0..evens.len())]
                        } else {
                            rng.gen_range(lower..=1)
                        };
                        c_plus.push(x);
                        c_minus.push(total - x);
                    }
                }
                for c in [c_plus, c_minus] {
                    let mut varsigma = BTreeSet::from([rs.label_at(i)]);
                    if !free.is_empty() && rng.gen_bool(0.25) {
                        varsigma.insert(rs.label_at(free[rng.gen_range(0..free.len())]));
                    }
                    divisors.push(Divisor::new(
                        name(),
                        varsigma,
                        Vector::from_i64(&c),
                        rng.gen_range(1..=3),
                    ));
                }
            }
            Shape::Combo(i, second) => {
                // plain-coroot colors on the support; every root must be
                // paired positively by some support color, as in the
                // rank-one classification
                let own = &sigma_sc[j];
                let mut any_positive = false;
                for idx in [i, second] {
                    let positive_here = coroot_pairing(idx, own) > 0;
                    if positive_here || rng.gen_bool(0.5) {
                        let c: Vec<i64> = sigma_sc.iter().map(|s| coroot_pairing(idx, s)).collect();
                        divisors.push(Divisor::new(
                            name(),
                            BTreeSet::from([rs.label_at(idx)]),
                            Vector::from_i64(&c),
                            rng.gen_range(1..=3),
                        ));
                        any_positive |= positive_here;
                    }
                }
                if !any_positive {
                    return None;
                }
            }
        }
    }
    // extra plain-coroot colors on free simple roots
    for _ in 0..rng.gen_range(0..=2) {
        if free.is_empty() {
            break;
        }
        let i = free[rng.gen_range(0..free.len())];
        let c: Vec<i64> = sigma_sc.iter().map(|s| coroot_pairing(i, s)).collect();
        divisors.push(Divisor::new(
            name(),
            BTreeSet::from([rs.label_at(i)]),
            Vector::from_i64(&c),
            rng.gen_range(1..=3),
        ));
    }
    // invariant divisors inside the valuation cone
    for _ in 0..rng.gen_range(0..=3) {
        let c: Vec<i64> = (0..r)
            .map(|j| {
                if force_even.contains(&j) {
                    -2 * rng.gen_range(0..=1)
                } else {
                    rng.gen_range(-3..=0)
                }
            })
            .collect();
        divisors.push(Divisor::new(
            name(),
            BTreeSet::new(),
            Vector::from_i64(&c),
            rng.gen_range(1..=3),
        ));
    }

    // doubled columns not forced even should usually carry a witness
    // against the membership test
    for &j in &doubled_cols {
        if force_even.contains(&j) {
            continue;
        }
        let column_even = divisors
            .iter()
            .all(|d| i64::try_from(d.c[j].numer().clone()).unwrap() % 2 == 0);
        if column_even {
            // flip an invariant divisor's entry, if any
            let target = divisors.iter().position(|d| !d.is_color());
            if let Some(t) = target {
                let mut entries: Vec<Rat> = divisors[t].c.entries().to_vec();
                entries[j] = &entries[j] - rat(1);
                divisors[t].c = Vector::new(entries);
            }
        }
    }

    Some(SphericalSkeleton::new(rs, sigma_sc, divisors))
}

fn random_root_system(rng: &mut impl Rng) -> RootSystem {
    let pool = component_pool();
    let target = rng.gen_range(1..=4);
    let mut components = Vec::new();
    let mut total = 0;
    while total < target {
        let candidates: Vec<&Component> =
            pool.iter().filter(|c| c.rank <= target - total).collect();
        if candidates.is_empty() {
            break;
        }
        let c = candidates[rng.gen_range(0..candidates.len())];
        components.push(*c);
        total += c.rank;
    }
    build_root_system(&RootSystemSpec::new(components)).unwrap()
}

fn shuffle<T>(items: &mut [T], rng: &mut impl Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// A randomly relabeled copy: component order, divisor order and names,
/// and spherical-root order all shuffled consistently.
pub fn relabel(sk: &SphericalSkeleton, rng: &mut impl Rng) -> SphericalSkeleton {
    let comps = sk.rs.spec().components.clone();
    let mut comp_perm: Vec<usize> = (0..comps.len()).collect();
    shuffle(&mut comp_perm, rng);
    // comp_perm[new_position] = old_component_index
    let new_spec = RootSystemSpec::new(comp_perm.iter().map(|&old| comps[old]).collect());
    let new_rs = build_root_system(&new_spec).unwrap();

    // old coordinate -> new coordinate
    let mut old_offsets = vec![0usize; comps.len()];
    {
        let mut acc = 0;
        for (i, c) in comps.iter().enumerate() {
            old_offsets[i] = acc;
            acc += c.rank;
        }
    }
    let mut coord_map = vec![0usize; sk.rs.rank()];
    let mut comp_map = vec![0usize; comps.len()]; // old component -> new component
    {
        let mut acc = 0;
        for (new_pos, &old) in comp_perm.iter().enumerate() {
            comp_map[old] = new_pos;
            for node in 0..comps[old].rank {
                coord_map[old_offsets[old] + node] = acc + node;
            }
            acc += comps[old].rank;
        }
    }

    let map_vector = |v: &Vector| -> Vector {
        let mut out = vec![rat(0); v.dim()];
        for (i, &t) in coord_map.iter().enumerate() {
            out[t] = v[i].clone();
        }
        Vector::new(out)
    };
    let map_label = |l: &RootLabel| -> RootLabel {
        RootLabel {
            component: comp_map[l.component - 1] + 1,
            node: l.node,
        }
    };

    let mut sigma_perm: Vec<usize> = (0..sk.r()).collect();
    shuffle(&mut sigma_perm, rng);
    let sigma_sc: Vec<Vector> = sigma_perm
        .iter()
        .map(|&j| map_vector(&sk.sigma_sc[j]))
        .collect();

    let mut div_perm: Vec<usize> = (0..sk.divisors.len()).collect();
    shuffle(&mut div_perm, rng);
    let divisors: Vec<Divisor> = div_perm
        .iter()
        .enumerate()
        .map(|(new_idx, &old_idx)| {
            let d = &sk.divisors[old_idx];
            let c: Vec<Rat> = sigma_perm.iter().map(|&j| d.c[j].clone()).collect();
            Divisor::new(
                format!("R{}", new_idx + 1),
                d.varsigma.iter().map(&map_label).collect(),
                Vector::new(c),
                d.m,
            )
        })
        .collect();

    let out = SphericalSkeleton::new(new_rs, sigma_sc, divisors);
    assert!(out.is_valid(), "relabel invariant: {:?}", out.validate());
    out
}

// ---------------------------------------------------------------------
// independent isomorphism-witness verification

/// Re-verifies a claimed isomorphism witness directly against the
/// definition, without the search machinery.
pub fn verify_iso_witness(
    sk1: &SphericalSkeleton,
    sk2: &SphericalSkeleton,
    iso: &SkeletonIso,
) -> bool {
    use std::collections::BTreeMap;
    let root_map: BTreeMap<RootLabel, RootLabel> = iso.phi_r.iter().cloned().collect();
    let div_map: BTreeMap<&str, &str> = iso
        .phi_delta
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    if root_map.len() != sk1.rs.rank() || div_map.len() != sk1.divisors.len() {
        return false;
    }
    let images: BTreeSet<&RootLabel> = root_map.values().collect();
    if images.len() != root_map.len() {
        return false;
    }

    // Cartan preservation
    let index1 = |l: &RootLabel| sk1.rs.label_index(l).unwrap();
    let index2 = |l: &RootLabel| sk2.rs.label_index(l).unwrap();
    for (a, fa) in &root_map {
        for (b, fb) in &root_map {
            let lhs = sk1.rs.cartan().entry(index1(a), index1(b));
            let rhs = sk2.rs.cartan().entry(index2(fa), index2(fb));
            if lhs != rhs {
                return false;
            }
        }
    }

    // the image of each generator ray must be a generator ray, bijectively
    let apply = |v: &Vector| -> Vector {
        let mut out = vec![rat(0); sk2.rs.rank()];
        for (l, fl) in &root_map {
            out[index2(fl)] = v[index1(l)].clone();
        }
        Vector::new(out)
    };
    let mut ray_of: Vec<Option<(usize, Rat)>> = vec![None; sk1.r()];
    let mut taken = vec![false; sk2.r()];
    for (j, sigma) in sk1.sigma_sc.iter().enumerate() {
        let image = apply(sigma);
        let hit = (0..sk2.r()).find_map(|j2| {
            if taken[j2] {
                return None;
            }
            image.positive_scalar_to(&sk2.sigma_sc[j2]).map(|t| (j2, t))
        });
        match hit {
            Some((j2, t)) => {
                taken[j2] = true;
                ray_of[j] = Some((j2, t));
            }
            None => return false,
        }
    }

    // divisor data transported exactly
    for d in &sk1.divisors {
        let Some(target_name) = div_map.get(d.name.as_str()) else {
            return false;
        };
        let Some(e) = sk2.divisor(target_name) else {
            return false;
        };
        let want_sigma: BTreeSet<RootLabel> = d.varsigma.iter().map(|l| root_map[l]).collect();
        if want_sigma != e.varsigma || d.m != e.m {
            return false;
        }
        for (j, (j2, t)) in ray_of.iter().map(|x| x.clone().unwrap()).enumerate() {
            if &d.c[j] * &t != e.c[j2] {
                return false;
            }
        }
    }
    true
}

/// Inverted witness, for the symmetry check.
pub fn invert_witness(iso: &SkeletonIso) -> SkeletonIso {
    SkeletonIso {
        phi_r: iso.phi_r.iter().map(|(a, b)| (*b, *a)).collect(),
        phi_delta: iso
            .phi_delta
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect(),
    }
}

/// Composite witness, for the transitivity check.
pub fn compose_witnesses(ab: &SkeletonIso, bc: &SkeletonIso) -> SkeletonIso {
    use std::collections::BTreeMap;
    let r2: BTreeMap<RootLabel, RootLabel> = bc.phi_r.iter().cloned().collect();
    let d2: BTreeMap<String, String> = bc.phi_delta.iter().cloned().collect();
    SkeletonIso {
        phi_r: ab.phi_r.iter().map(|(a, b)| (*a, r2[b])).collect(),
        phi_delta: ab
            .phi_delta
            .iter()
            .map(|(a, b)| (a.clone(), d2[b].clone()))
            .collect(),
    }
}
