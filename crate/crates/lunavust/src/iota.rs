//! The invariant iota, its affine-factorial formulation, and the
//! conjecture checker.
//!
//! Both formulations are exact linear programs. The general one works in
//! the coefficients of a point of the spherical-root cone: feasibility
//! means every divisor pairing stays at least `-m_D`, and the objective
//! sums `m_D - 1` plus the pairings. The affine formulation works in the
//! weight coordinates of the Cox spectrum and must agree exactly on
//! factorial skeletons.

use std::fmt;

use num::{Signed, Zero};

use crate::exact::{format_rat, rat, solve_lp, LpOutcome, Polyhedron, Rat, Vector};
use crate::roots::dim_gp;
use crate::skel::{derived_sets, SphericalSkeleton};
use crate::{Error, Result};

/// Exact value of iota: a nonnegative rational or infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IotaValue {
    Finite(Rat),
    Infinite,
}

impl IotaValue {
    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            IotaValue::Finite(v) => Some(v),
            IotaValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, IotaValue::Infinite)
    }
}

impl fmt::Display for IotaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IotaValue::Finite(v) => write!(f, "{}", format_rat(v)),
            IotaValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Iota together with its certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IotaReport {
    pub value: IotaValue,
    /// Coefficients over the spherical roots of an optimal point; absent
    /// when the value is infinite.
    pub witness: Option<Vector>,
    /// Recession direction certifying an infinite value.
    pub ray: Option<Vector>,
    /// The constant term `sum (m_D - 1)`; always a lower bound for the
    /// value.
    pub base_term: Rat,
}

/// Verdict of the conjecture checker.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    HoldsStrict,
    HoldsWithEquality,
    Violation,
    NotComplete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::HoldsStrict => "HoldsStrict",
            Verdict::HoldsWithEquality => "HoldsWithEquality",
            Verdict::Violation => "Violation",
            Verdict::NotComplete => "NotComplete",
        };
        write!(f, "{s}")
    }
}

/// Full record produced by [`check_conjecture`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjectureVerdict {
    pub iota: IotaReport,
    pub dim_gp: usize,
    pub verdict: Verdict,
}

/// The linear program behind [`iota`]: feasible set, objective, and the
/// constant term added to the optimum.
pub fn iota_lp(sk: &SphericalSkeleton) -> Result<(Polyhedron, Vector, Rat)> {
    let r = sk.r();
    let mut p = Polyhedron::new(r);
    for i in 0..r {
        p.add_row(Vector::unit(r, i), Rat::zero())?;
    }
    for d in &sk.divisors {
        p.add_row(d.c.clone(), -d.m_rat())?;
    }
    let objective: Vector = (0..r)
        .map(|i| sk.divisors.iter().fold(Rat::zero(), |acc, d| acc + &d.c[i]))
        .collect();
    let base_term = sk
        .divisors
        .iter()
        .fold(Rat::zero(), |acc, d| acc + d.m_rat() - rat(1));
    Ok((p, objective, base_term))
}

/// Computes iota of a valid skeleton, with an attaining witness or an
/// unboundedness certificate. The origin is always feasible, so the
/// value is at least `sum (m_D - 1) >= 0`.
pub fn iota(sk: &SphericalSkeleton) -> Result<IotaReport> {
    sk.ensure_valid()?;
    let (p, objective, base_term) = iota_lp(sk)?;
    let report = match solve_lp(&p, &objective, None)? {
        LpOutcome::Optimal { value, witness } => IotaReport {
            value: IotaValue::Finite(&base_term + value),
            witness: Some(witness),
            ray: None,
            base_term: base_term.clone(),
        },
        LpOutcome::Unbounded { ray, .. } => IotaReport {
            value: IotaValue::Infinite,
            witness: None,
            ray: Some(ray),
            base_term: base_term.clone(),
        },
        LpOutcome::Infeasible => unreachable!("the origin is always feasible"),
    };
    if let IotaValue::Finite(v) = &report.value {
        assert!(v >= &report.base_term, "optimum below the feasible origin");
        assert!(!report.base_term.is_negative());
    }
    Ok(report)
}

/// Computes iota of a factorial skeleton through the weight coordinates
/// of the Cox spectrum: points `theta = lambda + pullback(v)` with
/// nonnegative coordinates, `v` in the spherical-root cone, objective
/// `sum theta_D` minus the divisor count. Agrees exactly with [`iota`].
pub fn iota_affine(sk: &SphericalSkeleton) -> Result<IotaReport> {
    let ds = derived_sets(sk)?;
    if !ds.script_s.is_empty() {
        return Err(Error::NotFactorial(ds.script_s));
    }
    let nd = sk.divisors.len();
    let r = sk.r();
    let dim = nd + r;
    // variables: theta_1..theta_nd, t_1..t_r with v = sum t_j sigma_j
    let mut p = Polyhedron::new(dim);
    for k in 0..dim {
        p.add_row(Vector::unit(dim, k), Rat::zero())?;
    }
    // theta_D - sum_j c_D[j] t_j = m_D, as a pair of inequalities
    for (d_idx, d) in sk.divisors.iter().enumerate() {
        let mut row = vec![Rat::zero(); dim];
        row[d_idx] = rat(1);
        for j in 0..r {
            row[nd + j] = -&d.c[j];
        }
        let row = Vector::new(row);
        p.add_row(row.clone(), d.m_rat())?;
        p.add_row(row.neg(), -d.m_rat())?;
    }
    let objective: Vector = (0..dim)
        .map(|k| if k < nd { rat(1) } else { rat(0) })
        .collect();
    let base_term = sk
        .divisors
        .iter()
        .fold(Rat::zero(), |acc, d| acc + d.m_rat() - rat(1));

    let take_tail = |v: &Vector| -> Vector { (0..r).map(|j| v[nd + j].clone()).collect() };
    let report = match solve_lp(&p, &objective, None)? {
        LpOutcome::Optimal { value, witness } => IotaReport {
            value: IotaValue::Finite(value - rat(nd as i64)),
            witness: Some(take_tail(&witness)),
            ray: None,
            base_term,
        },
        LpOutcome::Unbounded { ray, .. } => IotaReport {
            value: IotaValue::Infinite,
            witness: None,
            ray: Some(take_tail(&ray).primitive()),
            base_term,
        },
        LpOutcome::Infeasible => unreachable!("theta = lambda, v = 0 is always feasible"),
    };
    Ok(report)
}

/// Checks the conjecture bound `iota <= dim G/P` on a complete skeleton.
/// Equality is reported as such without any claim about the equality
/// case's characterization.
pub fn check_conjecture(sk: &SphericalSkeleton) -> Result<ConjectureVerdict> {
    sk.ensure_valid()?;
    let complete = crate::skel::is_complete(sk)?;
    let report = iota(sk)?;
    let dgp = dim_gp(&sk.rs, &sk.moved_labels())?;
    let verdict = if !complete {
        Verdict::NotComplete
    } else {
        match &report.value {
            // a complete skeleton has a trivial recession cone, so the
            // infinite case cannot occur on validated data
            IotaValue::Infinite => Verdict::Violation,
            IotaValue::Finite(v) => {
                let bound = rat(dgp as i64);
                if *v < bound {
                    Verdict::HoldsStrict
                } else if *v == bound {
                    Verdict::HoldsWithEquality
                } else {
                    Verdict::Violation
                }
            }
        }
    };
    Ok(ConjectureVerdict {
        iota: report,
        dim_gp: dgp,
        verdict,
    })
}
