//! Exact primal simplex over the rationals.
//!
//! Maximizes a linear objective over a halfspace-presented polyhedron with
//! free variables. Free variables are split into differences of
//! nonnegative ones, feasibility is established by a phase-one problem
//! with artificial variables, and Bland's rule guarantees termination.
//! Every outcome carries an exact certificate: an attaining witness for
//! `Optimal`, a feasible base point plus an improving recession ray for
//! `Unbounded`.

use std::cell::RefCell;

use num::{One, Signed, Zero};

use super::poly::{LpOutcome, Polyhedron};
use super::rat::Rat;
use super::vec::Vector;
use crate::{Error, Result};

/// One recorded top-level [`solve_lp`] call, captured by
/// [`with_lp_trace`].
#[derive(Clone, Debug)]
pub struct LpRecord {
    pub polyhedron: Polyhedron,
    pub objective: Vector,
    pub secondary: Option<Vector>,
    pub outcome: LpOutcome,
}

thread_local! {
    static LP_TRACE: RefCell<Option<Vec<LpRecord>>> = const { RefCell::new(None) };
}

/// Runs `f` while recording every top-level [`solve_lp`] call made on the
/// current thread, and returns the result together with the records. Used
/// by audits that replay solved programs against an independent solver.
pub fn with_lp_trace<T>(f: impl FnOnce() -> T) -> (T, Vec<LpRecord>) {
    struct Guard;
    impl Drop for Guard {
        fn drop(&mut self) {
            LP_TRACE.with(|t| {
                t.borrow_mut().take();
            });
        }
    }

    LP_TRACE.with(|t| *t.borrow_mut() = Some(Vec::new()));
    let guard = Guard;
    let result = f();
    let records = LP_TRACE.with(|t| t.borrow_mut().take()).unwrap_or_default();
    drop(guard);
    (result, records)
}

fn record_lp(p: &Polyhedron, objective: &Vector, secondary: Option<&Vector>, outcome: &LpOutcome) {
    LP_TRACE.with(|t| {
        if let Some(records) = t.borrow_mut().as_mut() {
            records.push(LpRecord {
                polyhedron: p.clone(),
                objective: objective.clone(),
                secondary: secondary.cloned(),
                outcome: outcome.clone(),
            });
        }
    });
}

/// Maximizes `objective . x` over `p`, exactly.
///
/// With `secondary` given, the witness additionally maximizes
/// `secondary . x` among all primary-optimal points; the reported value
/// remains the primary optimum. If the secondary objective is unbounded
/// on the primary-optimal face, the result is `Unbounded` with a base on
/// that face and a ray along which the secondary grows.
///
/// Deterministic: identical inputs yield identical outcomes.
pub fn solve_lp(
    p: &Polyhedron,
    objective: &Vector,
    secondary: Option<&Vector>,
) -> Result<LpOutcome> {
    if objective.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: objective.dim(),
        });
    }
    if let Some(c2) = secondary {
        if c2.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: c2.dim(),
            });
        }
    }

    let primary = solve_primal(p, objective);
    let outcome = match (&primary, secondary) {
        (LpOutcome::Optimal { value, .. }, Some(c2)) => {
            let mut face = p.clone();
            face.add_row(objective.clone(), value.clone())?;
            match solve_primal(&face, c2) {
                LpOutcome::Optimal { witness, .. } => LpOutcome::Optimal {
                    value: value.clone(),
                    witness,
                },
                LpOutcome::Unbounded { ray, base } => LpOutcome::Unbounded { ray, base },
                LpOutcome::Infeasible => unreachable!("primary-optimal face is nonempty"),
            }
        }
        _ => primary,
    };

    record_lp(p, objective, secondary, &outcome);
    Ok(outcome)
}

fn solve_primal(p: &Polyhedron, objective: &Vector) -> LpOutcome {
    let n = p.dim();
    if n == 0 {
        // Only constant constraints `0 >= rhs` remain.
        if p.rows().iter().any(|(_, rhs)| rhs.is_positive()) {
            return LpOutcome::Infeasible;
        }
        return LpOutcome::Optimal {
            value: Rat::zero(),
            witness: Vector::zero(0),
        };
    }

    let mut tab = Tableau::build(p);
    if !tab.phase_one() {
        return LpOutcome::Infeasible;
    }

    let mut cost = vec![Rat::zero(); tab.ncols];
    for k in 0..n {
        cost[k] = objective[k].clone();
        cost[n + k] = -&objective[k];
    }

    match tab.optimize(&cost) {
        Step::Optimal => {
            let witness = tab.solution(n);
            let value = objective.dot(&witness);
            debug_assert!(p.contains(&witness), "simplex witness infeasible");
            LpOutcome::Optimal { value, witness }
        }
        Step::Unbounded { entering } => {
            let base = tab.solution(n);
            let ray = tab.ray(n, entering).primitive();
            debug_assert!(p.contains(&base), "simplex base infeasible");
            debug_assert!(p.admits_ray(&ray), "simplex ray leaves the polyhedron");
            debug_assert!(
                objective.dot(&ray).is_positive(),
                "simplex ray not improving"
            );
            LpOutcome::Unbounded { ray, base }
        }
    }
}

enum Step {
    Optimal,
    Unbounded { entering: usize },
}

/// Dense rational tableau in canonical form: each basic column is a unit
/// column, the right-hand sides are the (nonnegative) basic values.
struct Tableau {
    ncols: usize,
    art_start: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    /// Columns: `u_0..u_{n-1}, v_0..v_{n-1}` (free-variable split
    /// `x = u - v`), one slack per constraint, then one artificial per
    /// constraint whose right-hand side is positive after sign
    /// normalization.
    fn build(p: &Polyhedron) -> Tableau {
        let n = p.dim();
        let m = p.rows().len();
        let art_start = 2 * n + m;
        let needs_artificial: Vec<bool> = p.rows().iter().map(|(_, b)| b.is_positive()).collect();
        let n_art = needs_artificial.iter().filter(|&&x| x).count();
        let ncols = art_start + n_art;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = art_start;

        for (i, (normal, b)) in p.rows().iter().enumerate() {
            let mut row = vec![Rat::zero(); ncols];
            // a.x - s_i = b, then flip the equation when b <= 0 so the
            // initial basic variable sits at a nonnegative value.
            let flip = !needs_artificial[i];
            for k in 0..n {
                let coeff = if flip { -&normal[k] } else { normal[k].clone() };
                row[n + k] = -&coeff;
                row[k] = coeff;
            }
            row[2 * n + i] = if flip { Rat::one() } else { -Rat::one() };
            if needs_artificial[i] {
                row[next_art] = Rat::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(2 * n + i);
            }
            rows.push(row);
            rhs.push(if flip { -b } else { b.clone() });
        }

        Tableau {
            ncols,
            art_start,
            rows,
            rhs,
            basis,
        }
    }

    /// Establishes feasibility. Returns false iff the polyhedron is
    /// empty. Afterwards no artificial column remains.
    fn phase_one(&mut self) -> bool {
        if self.ncols > self.art_start {
            let mut cost = vec![Rat::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.art_start) {
                *c = -Rat::one();
            }
            match self.optimize(&cost) {
                Step::Optimal => {}
                Step::Unbounded { .. } => unreachable!("phase-one objective is bounded by zero"),
            }
            let attained: Rat = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(&b, _)| b >= self.art_start)
                .map(|(_, r)| r.clone())
                .sum();
            if !attained.is_zero() {
                return false;
            }
            self.evict_artificials();
        }
        true
    }

    /// Pivots zero-valued basic artificials out of the basis, dropping
    /// rows that became redundant, then truncates the artificial columns.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.art_start {
                debug_assert!(self.rhs[r].is_zero());
                match (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in &mut self.rows {
            row.truncate(self.art_start);
        }
        self.ncols = self.art_start;
    }

    /// Bland's rule: entering column is the lowest index with positive
    /// reduced cost; leaving row is the minimum-ratio row, ties broken by
    /// the lowest basic variable index.
    fn optimize(&mut self, cost: &[Rat]) -> Step {
        loop {
            let multipliers: Vec<Rat> = self.basis.iter().map(|&b| cost[b].clone()).collect();
            let entering = (0..self.ncols).find(|&j| {
                let mut red = cost[j].clone();
                for (i, y) in multipliers.iter().enumerate() {
                    if !y.is_zero() {
                        red -= y * &self.rows[i][j];
                    }
                }
                red.is_positive()
            });
            let Some(j) = entering else {
                return Step::Optimal;
            };

            let mut leaving: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][j].is_positive() {
                    let ratio = &self.rhs[r] / &self.rows[r][j];
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((br, best)) => {
                            if ratio < best || (ratio == best && self.basis[r] < self.basis[br]) {
                                Some((r, ratio))
                            } else {
                                Some((br, best))
                            }
                        }
                    };
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, j),
                None => return Step::Unbounded { entering: j },
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.rows[r][j].clone();
        for c in 0..self.ncols {
            self.rows[r][c] = &self.rows[r][c] / &piv;
        }
        self.rhs[r] = &self.rhs[r] / &piv;
        for i in 0..self.rows.len() {
            if i != r && !self.rows[i][j].is_zero() {
                let factor = self.rows[i][j].clone();
                for c in 0..self.ncols {
                    let delta = &factor * &self.rows[r][c];
                    self.rows[i][c] = &self.rows[i][c] - delta;
                }
                let delta = &factor * &self.rhs[r];
                self.rhs[i] = &self.rhs[i] - delta;
            }
        }
        self.basis[r] = j;
    }

    /// Current basic solution mapped back to the original free variables.
    fn solution(&self, n: usize) -> Vector {
        let mut vals = vec![Rat::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rhs[r].clone();
        }
        (0..n).map(|k| &vals[k] - &vals[n + k]).collect()
    }

    /// Recession direction obtained by increasing the entering column
    /// while keeping all equations satisfied, mapped back to the original
    /// variables.
    fn ray(&self, n: usize, entering: usize) -> Vector {
        let mut dir = vec![Rat::zero(); self.ncols];
        dir[entering] = Rat::one();
        for (r, &b) in self.basis.iter().enumerate() {
            if b != entering {
                dir[b] = -&self.rows[r][entering];
            }
        }
        (0..n).map(|k| &dir[k] - &dir[n + k]).collect()
    }
}
