//! Factorialization: turn a complete skeleton into a factorial complete
//! one without decreasing iota and without changing `dim G/P`.
//!
//! One member of `script_s` is eliminated per step. The step solves the
//! iota program lexicographically (iota first, then the pairing with the
//! root's color) and either duplicates the color or appends an invariant
//! divisor cutting the root out of the membership test. The second case
//! relies on structural facts that hold for skeletons of geometric
//! origin but not for arbitrary valid data, so those facts are verified
//! at runtime and their failure is reported as an error rather than
//! silently producing a wrong skeleton.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use crate::exact::{max_step, rat, ratio, solve_lp, LpOutcome, Rat, Vector};
use crate::iota::{iota, iota_lp, IotaReport, IotaValue};
use crate::roots::RootLabel;
use crate::skel::{derived_sets, Divisor, RayClass, SphericalSkeleton};
use crate::{Error, Result};

/// Which of the two augmentations a step performed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepCase {
    /// A second color with the data of the root's color was appended and
    /// the doubled root renormalized to the simple root.
    AddColor,
    /// A fresh invariant divisor pairing to `-1` with the doubled root
    /// and to `0` with every other spherical root was appended.
    AddInvariantDivisor,
}

/// One factorialization step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactStep {
    pub alpha: RootLabel,
    pub case: StepCase,
    /// The optimal point the step worked from, in the spherical-root
    /// coefficients of the skeleton entering the step.
    pub theta_prime: Vector,
    /// The appended divisor as it appears in the output of the step.
    pub added_divisor: Divisor,
}

/// Record of a full factorialization run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorializeTrace {
    pub steps: Vec<FactStep>,
    pub iota_before: IotaReport,
    pub iota_after: IotaReport,
}

/// Eliminates all of `script_s` from a valid complete skeleton. The
/// output is valid, complete, and factorial; iota never decreases and
/// the moved-root union (hence `dim G/P`) is unchanged.
pub fn factorialize(sk: &SphericalSkeleton) -> Result<(SphericalSkeleton, FactorializeTrace)> {
    sk.ensure_valid()?;
    if !crate::skel::is_complete(sk)? {
        return Err(Error::NotComplete);
    }
    let iota_before = iota(sk)?;

    let mut current = sk.clone();
    let mut steps = Vec::new();
    loop {
        let ds = derived_sets(&current)?;
        let Some(&alpha) = ds.script_s.first() else {
            break;
        };
        let color_name = ds.script_s_colors[&alpha].clone();
        let (next, step) = factorial_step(&current, alpha, &color_name)?;
        if !next.is_valid() {
            return Err(Error::AxiomViolation(format!(
                "step at {alpha} produced an invalid skeleton: {:?}",
                next.validate()
            )));
        }
        current = next;
        steps.push(step);
    }

    let iota_after = iota(&current)?;
    let non_decreasing = match (&iota_before.value, &iota_after.value) {
        (_, IotaValue::Infinite) => true,
        (IotaValue::Infinite, IotaValue::Finite(_)) => false,
        (IotaValue::Finite(before), IotaValue::Finite(after)) => after >= before,
    };
    if !non_decreasing {
        return Err(Error::AxiomViolation(format!(
            "iota decreased from {} to {}",
            iota_before.value, iota_after.value
        )));
    }
    Ok((
        current,
        FactorializeTrace {
            steps,
            iota_before,
            iota_after,
        },
    ))
}

fn fresh_name(base: String, sk: &SphericalSkeleton) -> String {
    let mut name = base;
    while sk.divisors.iter().any(|d| d.name == name) {
        name.push('\'');
    }
    name
}

fn factorial_step(
    sk: &SphericalSkeleton,
    alpha: RootLabel,
    color_name: &str,
) -> Result<(SphericalSkeleton, FactStep)> {
    let alpha_idx = sk
        .rs
        .label_index(&alpha)
        .expect("script_s labels name simple roots");
    let doubled_idx = (0..sk.r())
        .find(|&j| sk.ray_class(j) == RayClass::DoubledSimple(alpha_idx))
        .expect("script_s members have their doubled root");
    let color_pos = sk
        .divisors
        .iter()
        .position(|d| d.name == color_name)
        .expect("script_s colors exist");
    let pairing_functional = sk.divisors[color_pos].c.clone();

    let (p, objective, _) = iota_lp(sk)?;
    let theta = match solve_lp(&p, &objective, Some(&pairing_functional))? {
        LpOutcome::Optimal { witness, .. } => witness,
        LpOutcome::Unbounded { .. } => {
            return Err(Error::AxiomViolation(
                "iota program unbounded on a complete skeleton".into(),
            ));
        }
        LpOutcome::Infeasible => unreachable!("the origin is always feasible"),
    };

    if !pairing_functional.dot(&theta).is_negative() {
        return Ok(add_color(sk, alpha, doubled_idx, color_pos, theta));
    }

    // The pairing is negative on the whole optimal face; walk inside the
    // face along the directions prescribed by the verified structure.
    let gamma_idx = verify_structure(sk, doubled_idx, color_pos)?;

    let objective_at = |x: &Vector| objective.dot(x);
    let optimum = objective_at(&theta);

    // first direction: minus the doubled root
    let dir1: Vector = (0..sk.r())
        .map(|j| if j == doubled_idx { rat(-1) } else { rat(0) })
        .collect();
    let lambda1 = max_step(&p, &theta, &dir1)
        .ok_or_else(|| Error::AxiomViolation("unbounded walk along the doubled root".into()))?;
    let theta1 = theta.add_scaled(&lambda1, &dir1);

    // second direction: minus the doubled root minus twice gamma
    let dir2: Vector = (0..sk.r())
        .map(|j| {
            if j == doubled_idx {
                rat(-1)
            } else if j == gamma_idx {
                rat(-2)
            } else {
                rat(0)
            }
        })
        .collect();
    let lambda2 = max_step(&p, &theta1, &dir2).ok_or_else(|| {
        Error::AxiomViolation("unbounded walk along the correction direction".into())
    })?;
    let theta2 = theta1.add_scaled(&lambda2, &dir2);

    if objective_at(&theta2) != optimum {
        return Err(Error::AxiomViolation("walk left the optimal face".into()));
    }

    if !pairing_functional.dot(&theta2).is_negative() {
        return Ok(add_color(sk, alpha, doubled_idx, color_pos, theta2));
    }
    if !theta2[doubled_idx].is_zero() {
        return Err(Error::AxiomViolation(
            "walk did not null the doubled-root coefficient".into(),
        ));
    }
    Ok(add_invariant_divisor(sk, alpha, doubled_idx, theta2))
}

/// Runtime verification of the structural facts the invariant-divisor
/// case rests on. Returns the index of the distinguished root `gamma`.
fn verify_structure(sk: &SphericalSkeleton, doubled_idx: usize, color_pos: usize) -> Result<usize> {
    let fail = |msg: String| Err(Error::AxiomViolation(msg));
    let color = &sk.divisors[color_pos];

    // (1) exactly one spherical root pairs negatively with the color
    let negatives: Vec<usize> = (0..sk.r()).filter(|&j| color.c[j].is_negative()).collect();
    let [gamma_idx] = negatives.as_slice() else {
        return fail(format!(
            "expected exactly one negative pairing for color {}, found {}",
            color.name,
            negatives.len()
        ));
    };
    let gamma_idx = *gamma_idx;

    // (2) that pairing is exactly -1
    if color.c[gamma_idx] != rat(-1) {
        return fail(format!(
            "color {} pairs with the distinguished root to {}, expected -1",
            color.name, color.c[gamma_idx]
        ));
    }

    // (3) the positive-side divisors together with the color balance out
    let core: BTreeSet<usize> = (0..sk.divisors.len())
        .filter(|&d| sk.divisors[d].c[gamma_idx].is_positive() || d == color_pos)
        .collect();
    let sum_doubled: Rat = core
        .iter()
        .map(|&d| sk.divisors[d].c[doubled_idx].clone())
        .sum();
    if !sum_doubled.is_zero() {
        return fail(format!(
            "doubled-root pairings over the core sum to {sum_doubled}, expected 0"
        ));
    }
    let sum_gamma: Rat = core
        .iter()
        .map(|&d| sk.divisors[d].c[gamma_idx].clone())
        .sum();
    if sum_gamma != rat(1) {
        return fail(format!(
            "distinguished-root pairings over the core sum to {sum_gamma}, expected 1"
        ));
    }

    // (3c) outside the core both pairings are nonpositive
    for (d, div) in sk.divisors.iter().enumerate() {
        if core.contains(&d) {
            continue;
        }
        if div.c[doubled_idx].is_positive() || div.c[gamma_idx].is_positive() {
            return fail(format!(
                "divisor {} outside the core has a positive pairing",
                div.name
            ));
        }
    }

    // (4) some outside divisor is strictly negative somewhere
    let strict = (0..sk.divisors.len()).any(|d| {
        !core.contains(&d)
            && (sk.divisors[d].c[doubled_idx].is_negative()
                || sk.divisors[d].c[gamma_idx].is_negative())
    });
    if !strict {
        return fail("no strict inequality outside the core".into());
    }

    Ok(gamma_idx)
}

/// Appends a copy of the color and renormalizes the doubled root to the
/// simple root; the affected column halves and stays integral.
fn add_color(
    sk: &SphericalSkeleton,
    alpha: RootLabel,
    doubled_idx: usize,
    color_pos: usize,
    theta_prime: Vector,
) -> (SphericalSkeleton, FactStep) {
    let mut out = sk.clone();
    let source = sk.divisors[color_pos].clone();
    let name = fresh_name(format!("{}'", source.name), sk);
    out.divisors.push(Divisor::new(
        name.clone(),
        source.varsigma.clone(),
        source.c.clone(),
        source.m,
    ));
    out.sigma_sc[doubled_idx] = out.sigma_sc[doubled_idx].scaled(&ratio(1, 2));
    for d in &mut out.divisors {
        let halved = &d.c[doubled_idx] / rat(2);
        let entries: Vec<Rat> =
            d.c.iter()
                .enumerate()
                .map(|(j, x)| {
                    if j == doubled_idx {
                        halved.clone()
                    } else {
                        x.clone()
                    }
                })
                .collect();
        d.c = Vector::new(entries);
    }
    let added = out.divisors.last().unwrap().clone();
    (
        out,
        FactStep {
            alpha,
            case: StepCase::AddColor,
            theta_prime,
            added_divisor: added,
        },
    )
}

/// Appends an invariant divisor pairing to `-1` with the doubled root
/// and to `0` with everything else; the root drops out of the
/// membership test and the spherical roots are unchanged.
fn add_invariant_divisor(
    sk: &SphericalSkeleton,
    alpha: RootLabel,
    doubled_idx: usize,
    theta_prime: Vector,
) -> (SphericalSkeleton, FactStep) {
    let mut out = sk.clone();
    let c: Vector = (0..sk.r())
        .map(|j| if j == doubled_idx { rat(-1) } else { rat(0) })
        .collect();
    let name = fresh_name(format!("E_{alpha}"), sk);
    let divisor = Divisor::new(name, BTreeSet::new(), c, 1);
    out.divisors.push(divisor.clone());
    (
        out,
        FactStep {
            alpha,
            case: StepCase::AddInvariantDivisor,
            theta_prime,
            added_divisor: divisor,
        },
    )
}

/// A synthetic valid complete skeleton whose factorialization takes the
/// invariant-divisor branch. Exposed for tests and demonstrations.
pub fn invariant_branch_example() -> SphericalSkeleton {
    use crate::roots::{build_root_system, Component, RootSystemSpec, SimpleType};
    let rs = build_root_system(&RootSystemSpec::new(vec![
        Component {
            kind: SimpleType::A,
            rank: 1,
        },
        Component {
            kind: SimpleType::A,
            rank: 1,
        },
    ]))
    .unwrap();
    SphericalSkeleton::new(
        rs,
        vec![Vector::from_i64(&[2, 0]), Vector::from_i64(&[1, 1])],
        vec![
            Divisor::new(
                "D1",
                BTreeSet::from(["c1.1".parse().unwrap()]),
                Vector::from_i64(&[2, -1]),
                1,
            ),
            Divisor::new("D2", BTreeSet::new(), Vector::from_i64(&[-2, 2]), 1),
            Divisor::new("D3", BTreeSet::new(), Vector::from_i64(&[-2, 0]), 1),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iota::Verdict;
    use crate::skel::fixtures::*;
    use crate::skel::{is_complete, is_factorial};

    #[test]
    fn already_factorial_is_untouched() {
        let sk = fix_p2();
        let (out, trace) = factorialize(&sk).unwrap();
        assert_eq!(out, sk);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.iota_before, trace.iota_after);
    }

    #[test]
    fn fix_f1_takes_one_add_color_step() {
        let sk = fix_f1();
        let (out, trace) = factorialize(&sk).unwrap();
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!(step.alpha.to_string(), "c1.1");
        assert_eq!(step.case, StepCase::AddColor);
        assert_eq!(step.theta_prime, Vector::from_i64(&[0, 1]));
        assert_eq!(step.added_divisor.name, "D1'");
        assert_eq!(step.added_divisor.c, Vector::from_i64(&[1, 0]));

        assert_eq!(
            out.sigma_sc,
            vec![Vector::from_i64(&[1, 0]), Vector::from_i64(&[0, 1])]
        );
        assert!(is_factorial(&out).unwrap());
        assert!(is_complete(&out).unwrap());
        assert_eq!(trace.iota_before.value, IotaValue::Finite(rat(1)));
        assert_eq!(trace.iota_after.value, IotaValue::Finite(rat(1)));
        // dim G/P unchanged
        assert_eq!(sk.moved_labels(), out.moved_labels());
    }

    #[test]
    fn incomplete_input_rejected() {
        assert!(matches!(factorialize(&fix_s2()), Err(Error::NotComplete)));
    }

    #[test]
    fn invariant_branch_example_runs() {
        let sk = invariant_branch_example();
        assert!(sk.is_valid(), "{:?}", sk.validate());
        assert!(is_complete(&sk).unwrap());
        assert!(!is_factorial(&sk).unwrap());

        let (out, trace) = factorialize(&sk).unwrap();
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!(step.case, StepCase::AddInvariantDivisor);
        assert_eq!(step.added_divisor.name, "E_c1.1");
        assert_eq!(step.added_divisor.c, Vector::from_i64(&[-1, 0]));
        assert_eq!(step.added_divisor.m, 1);
        assert!(step.added_divisor.varsigma.is_empty());
        // the walk nulled the doubled-root coefficient
        assert!(step.theta_prime[0].is_zero());

        assert!(is_factorial(&out).unwrap());
        assert!(is_complete(&out).unwrap());
        assert_eq!(out.sigma_sc, sk.sigma_sc);
        assert_eq!(trace.iota_before.value, IotaValue::Finite(rat(1)));
        assert_eq!(trace.iota_after.value, IotaValue::Finite(rat(1)));
        assert_eq!(sk.moved_labels(), out.moved_labels());
        // only c1.1 is moved, so dim G/P is 1 and the bound is tight here
        let verdict = crate::iota::check_conjecture(&out).unwrap();
        assert_eq!(verdict.dim_gp, 1);
        assert_eq!(verdict.verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn axiom_violation_on_corrupted_core_sum() {
        // same shape as the invariant-branch example but the balancing
        // sum over the core is 2 instead of 1
        let mut sk = invariant_branch_example();
        sk.divisors[1].c = Vector::from_i64(&[-2, 3]);
        assert!(sk.is_valid());
        assert!(is_complete(&sk).unwrap());
        match factorialize(&sk) {
            Err(Error::AxiomViolation(msg)) => {
                assert!(msg.contains("expected 1"), "{msg}");
            }
            other => panic!("expected axiom violation, got {other:?}"),
        }
    }

    /// Raw three-root skeleton for driving `verify_structure` directly;
    /// only the value matrix matters for those checks.
    fn structure_probe(rows: &[[i64; 3]]) -> SphericalSkeleton {
        use crate::roots::{build_root_system, Component, RootSystemSpec, SimpleType};
        let rs = build_root_system(&RootSystemSpec::new(vec![Component {
            kind: SimpleType::A,
            rank: 1,
        }]))
        .unwrap();
        let sigma = vec![
            Vector::from_i64(&[1]),
            Vector::from_i64(&[1]),
            Vector::from_i64(&[1]),
        ];
        let divisors = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                Divisor::new(format!("D{i}"), BTreeSet::new(), Vector::from_i64(row), 1)
            })
            .collect();
        SphericalSkeleton::new(rs, sigma, divisors)
    }

    fn expect_structure_failure(rows: &[[i64; 3]], fragment: &str) {
        let sk = structure_probe(rows);
        match verify_structure(&sk, 0, 0) {
            Err(Error::AxiomViolation(msg)) => assert!(msg.contains(fragment), "{msg}"),
            other => panic!("expected axiom violation containing {fragment:?}, got {other:?}"),
        }
    }

    #[test]
    fn structure_checks_fail_loudly() {
        // two negative pairings in the color row
        expect_structure_failure(
            &[[2, -1, -1], [-2, 2, 0], [0, 0, 2]],
            "exactly one negative",
        );
        // the single negative pairing is not -1
        expect_structure_failure(&[[2, -2, 0], [-2, 2, 0], [0, 1, 0]], "expected -1");
        // core doubled-root pairings do not cancel
        expect_structure_failure(&[[2, -1, 0], [-1, 2, 0], [0, 0, 2]], "expected 0");
        // core distinguished-root pairings do not sum to one
        expect_structure_failure(&[[2, -1, 0], [-2, 3, 0], [0, 0, 2]], "expected 1");
        // a positive pairing outside the core
        expect_structure_failure(&[[2, -1, 0], [-2, 2, 0], [1, 0, 2]], "outside the core");
        // no strict inequality outside the core
        expect_structure_failure(&[[2, -1, 0], [-2, 2, 0], [0, 0, 2]], "no strict inequality");
    }

    #[test]
    fn structure_check_accepts_consistent_data() {
        let sk = structure_probe(&[[2, -1, 0], [-2, 2, 0], [0, -1, 2]]);
        assert_eq!(verify_structure(&sk, 0, 0).unwrap(), 1);
    }
}
