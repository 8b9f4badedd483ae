//! Isomorphism of spherical skeletons: a Cartan-preserving bijection of
//! simple roots carrying the spherical-root cone onto the other cone,
//! together with a divisor bijection transporting the valuation
//! functionals, the moved-root sets, and the multiplicities.
//!
//! Multiplicity preservation is stricter than the bare definition of
//! skeleton isomorphism, but the multiplicities are determined by the
//! rest of the data for skeletons of geometric origin; requiring
//! equality keeps the checker sound on arbitrary input.

use crate::exact::{Rat, Vector};
use crate::roots::{isomorphisms, BasedAutomorphism, RootLabel};
use crate::skel::SphericalSkeleton;
use crate::Result;

/// A witness of skeleton isomorphism: the simple-root map and the
/// divisor bijection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkeletonIso {
    pub phi_r: Vec<(RootLabel, RootLabel)>,
    pub phi_delta: Vec<(String, String)>,
}

/// Decides whether two valid skeletons are isomorphic, returning the
/// lexicographically least witness (in root-map enumeration order, then
/// greedy divisor order) if so.
pub fn are_isomorphic(
    sk1: &SphericalSkeleton,
    sk2: &SphericalSkeleton,
) -> Result<Option<SkeletonIso>> {
    sk1.ensure_valid()?;
    sk2.ensure_valid()?;
    if sk1.r() != sk2.r() || sk1.divisors.len() != sk2.divisors.len() {
        return Ok(None);
    }
    let r = sk1.r();

    for phi in isomorphisms(&sk1.rs, &sk2.rs) {
        // Match spherical-root rays: the image of each generator must be
        // positively proportional to a generator on the other side.
        // Linear independence makes the match unique when it exists.
        let mut assignment: Vec<(usize, Rat)> = Vec::with_capacity(r);
        let mut used = vec![false; r];
        let mut ok = true;
        for sigma in &sk1.sigma_sc {
            let image = phi.apply_vector(sigma);
            let hit = (0..r).find_map(|j2| {
                if used[j2] {
                    return None;
                }
                image.positive_scalar_to(&sk2.sigma_sc[j2]).map(|t| (j2, t))
            });
            match hit {
                Some((j2, t)) => {
                    used[j2] = true;
                    assignment.push((j2, t));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }

        if let Some(delta) = match_divisors(sk1, sk2, &phi, &assignment) {
            let phi_r = sk1
                .rs
                .labels()
                .iter()
                .enumerate()
                .map(|(i, &l)| (l, sk2.rs.label_at(phi.apply_index(i))))
                .collect();
            let phi_delta = delta
                .iter()
                .enumerate()
                .map(|(i, &j)| (sk1.divisors[i].name.clone(), sk2.divisors[j].name.clone()))
                .collect();
            return Ok(Some(SkeletonIso { phi_r, phi_delta }));
        }
    }
    Ok(None)
}

/// Backtracking search for the divisor bijection. The data required of
/// the image of each divisor is fully determined by the root map and the
/// ray assignment, so candidates are pruned to exact matches.
fn match_divisors(
    sk1: &SphericalSkeleton,
    sk2: &SphericalSkeleton,
    phi: &BasedAutomorphism,
    assignment: &[(usize, Rat)],
) -> Option<Vec<usize>> {
    let n = sk1.divisors.len();
    let r = sk1.r();

    // precompute the required image data of each source divisor
    let required: Vec<(Vec<RootLabel>, Vector, u64)> = sk1
        .divisors
        .iter()
        .map(|d| {
            let varsigma: Vec<RootLabel> = {
                let mut v: Vec<RootLabel> = d
                    .varsigma
                    .iter()
                    .map(|l| {
                        let i = sk1.rs.label_index(l).expect("validated label");
                        sk2.rs.label_at(phi.apply_index(i))
                    })
                    .collect();
                v.sort();
                v
            };
            // pairing with the image generator scales with the stored
            // normalization on the other side
            let mut c = vec![Rat::from_integer(0.into()); r];
            for (j, (j2, t)) in assignment.iter().enumerate() {
                c[*j2] = &d.c[j] * t;
            }
            (varsigma, Vector::new(c), d.m)
        })
        .collect();

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(sk2, &required, 0, &mut image, &mut used).then_some(image)
}

fn backtrack(
    sk2: &SphericalSkeleton,
    required: &[(Vec<RootLabel>, Vector, u64)],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == required.len() {
        return true;
    }
    let (want_sigma, want_c, want_m) = &required[depth];
    for (j, cand) in sk2.divisors.iter().enumerate() {
        if used[j] {
            continue;
        }
        let sigma_ok = {
            let mut got: Vec<RootLabel> = cand.varsigma.iter().copied().collect();
            got.sort();
            got == *want_sigma
        };
        if sigma_ok && cand.c == *want_c && cand.m == *want_m {
            image[depth] = j;
            used[j] = true;
            if backtrack(sk2, required, depth + 1, image, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}
