//! The Cox transform of a skeleton and the ambient weight data of the
//! spectrum of the Cox ring.
//!
//! The transform doubles every color attached to `script_s` and
//! renormalizes the corresponding doubled spherical roots to the simple
//! root itself. The cone spanned by the spherical roots is unchanged;
//! only the canonical ray generators move, which is forced once the
//! doubled color count flips the root from type `2a` to type `a`.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::exact::{rat, ratio, solve_lp, LpOutcome, Matrix, Polyhedron, Rat, Vector};
use crate::skel::{derived_sets, Divisor, SphericalSkeleton};
use crate::Result;

/// Weight-lattice data of the spectrum of the Cox ring: the canonical
/// section weights `e_D` form a basis indexed by the divisors of the
/// source skeleton.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoxAmbient {
    /// Divisor names indexing the `e_D` basis, in skeleton order.
    pub basis_index: Vec<String>,
    /// Row `D` holds the pairings of the valuation functional of `D`
    /// with the spherical roots; the pullback of `v` is the vector of
    /// pairings `(c(D) . v)_D`.
    pub pullback_matrix: Matrix,
    /// Images of the spherical roots under the pullback: the generators
    /// of the transferred cone.
    pub t_bar_generators: Vec<Vector>,
}

/// Result of the Cox transform, with the origin of every output divisor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoxResult {
    pub skeleton: SphericalSkeleton,
    /// Output divisor name to source divisor name; two-to-one exactly
    /// over the doubled colors.
    pub provenance: BTreeMap<String, String>,
}

/// Divisor class group of the spectrum of the Cox ring: free of the
/// stated rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassGroup {
    pub rank: usize,
    /// The doubled colors whose extra copies freely generate the group.
    pub generator_names: Vec<String>,
}

fn unique_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Computes the skeleton of the spectrum of the Cox ring.
///
/// Every color attached to `script_s` is replaced by two copies with
/// identical data; the doubled spherical roots of those colors are
/// halved, and all pairings are re-expressed accordingly (the affected
/// columns stay integral by the membership test defining `script_s`).
/// The output is valid, its `script_s` is empty, and the transform is
/// idempotent up to divisor renaming.
pub fn cox_transform(sk: &SphericalSkeleton) -> Result<CoxResult> {
    let ds = derived_sets(sk)?;
    let doubled_names = ds.d_script_s();

    // columns to halve: doubled roots whose simple root is in script_s
    let mut halve = vec![false; sk.r()];
    for &j in &ds.sigma_2a {
        if let crate::skel::RayClass::DoubledSimple(i) = sk.ray_class(j) {
            if ds.script_s.contains(&sk.rs.label_at(i)) {
                halve[j] = true;
            }
        }
    }

    let sigma_sc: Vec<Vector> = sk
        .sigma_sc
        .iter()
        .enumerate()
        .map(|(j, sigma)| {
            if halve[j] {
                sigma.scaled(&ratio(1, 2))
            } else {
                sigma.clone()
            }
        })
        .collect();

    let reexpress = |c: &Vector| -> Vector {
        c.iter()
            .enumerate()
            .map(|(j, x)| if halve[j] { x / rat(2) } else { x.clone() })
            .collect()
    };

    let mut divisors = Vec::new();
    let mut provenance = BTreeMap::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for d in &sk.divisors {
        if doubled_names.contains(&d.name) {
            for suffix in ["'", "''"] {
                let name = unique_name(&format!("{}{suffix}", d.name), &taken);
                taken.insert(name.clone());
                provenance.insert(name.clone(), d.name.clone());
                divisors.push(Divisor::new(name, d.varsigma.clone(), reexpress(&d.c), d.m));
            }
        } else {
            let name = unique_name(&d.name, &taken);
            taken.insert(name.clone());
            provenance.insert(name.clone(), d.name.clone());
            divisors.push(Divisor::new(name, d.varsigma.clone(), reexpress(&d.c), d.m));
        }
    }

    let skeleton = SphericalSkeleton::new(sk.rs.clone(), sigma_sc, divisors);
    debug_assert!(skeleton.is_valid(), "{:?}", skeleton.validate());
    Ok(CoxResult {
        skeleton,
        provenance,
    })
}

/// Divisor class group of the spectrum of the Cox ring, computed from
/// the divisor count of the transform: a basis of the transferred weight
/// lattice absorbs one copy per source divisor, and each extra copy
/// contributes one free generator.
pub fn class_group(sk: &SphericalSkeleton) -> Result<ClassGroup> {
    let transformed = cox_transform(sk)?;
    let rank = transformed.skeleton.divisors.len() - sk.divisors.len();
    let doubled = derived_sets(sk)?.d_script_s();
    let generator_names = sk
        .divisors
        .iter()
        .filter(|d| doubled.contains(&d.name))
        .map(|d| d.name.clone())
        .collect();
    Ok(ClassGroup {
        rank,
        generator_names,
    })
}

/// The weight data of the spectrum of the Cox ring in the `e_D` basis.
pub fn cox_ambient(sk: &SphericalSkeleton) -> Result<CoxAmbient> {
    sk.ensure_valid()?;
    let pullback_matrix = sk.c_matrix();
    let t_bar_generators = (0..sk.r()).map(|j| pullback_matrix.column(j)).collect();
    Ok(CoxAmbient {
        basis_index: sk.divisors.iter().map(|d| d.name.clone()).collect(),
        pullback_matrix,
        t_bar_generators,
    })
}

/// True iff the spectrum of the Cox ring has a fixed point: there are
/// weights `u_D > 0` whose combination of valuation functionals is
/// nonpositive on every spherical root. Decided by maximizing the margin
/// `eps` subject to `u_D >= eps` and `sum u_D = 1`.
pub fn has_fixed_point(sk: &SphericalSkeleton) -> Result<bool> {
    sk.ensure_valid()?;
    let nd = sk.divisors.len();
    if nd == 0 {
        return Ok(true);
    }
    // variables: u_1..u_nd, eps
    let dim = nd + 1;
    let mut p = Polyhedron::new(dim);
    for d in 0..nd {
        let mut row = vec![Rat::zero(); dim];
        row[d] = rat(1);
        row[nd] = rat(-1);
        p.add_row(Vector::new(row), Rat::zero())?;
    }
    let ones: Vector = (0..dim)
        .map(|k| if k < nd { rat(1) } else { rat(0) })
        .collect();
    p.add_row(ones.clone(), rat(1))?;
    p.add_row(ones.neg(), rat(-1))?;
    let c = sk.c_matrix();
    for i in 0..sk.r() {
        let mut row: Vec<Rat> = (0..nd).map(|d| -c.entry(d, i).clone()).collect();
        row.push(Rat::zero());
        p.add_row(Vector::new(row), Rat::zero())?;
    }
    let objective = Vector::unit(dim, nd);
    match solve_lp(&p, &objective, None)? {
        LpOutcome::Optimal { value, .. } => Ok(value.is_positive()),
        LpOutcome::Infeasible => Ok(false),
        LpOutcome::Unbounded { .. } => {
            unreachable!("margin is bounded by the normalization row")
        }
    }
}
