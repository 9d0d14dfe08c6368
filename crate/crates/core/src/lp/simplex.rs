//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are `min c·x` subject to rows `a·x {<=,=,>=} b` and
//! `x >= lower`. Alongside the primal solution the solver reports row
//! duals at optimality and a Farkas ray when the rows are infeasible.
//! Both are plain vectors over the original rows; [`LpProblem`] has
//! methods that check them by direct arithmetic.

use num_traits::{Signed, Zero};

use crate::error::LpError;
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Self { coeffs, sense, rhs }
    }
}

/// Minimization problem in row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values (meaningful when optimal).
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Basic columns: `0..nvars` are variables, later indices are row
    /// slacks in row order.
    pub basis: Vec<usize>,
    /// Row multipliers at optimality; `>= 0` on `Ge` rows, `<= 0` on `Le`
    /// rows.
    pub duals: Vec<Rational>,
    /// Farkas ray over the rows when infeasible: same sign pattern as
    /// `duals`, `sum u_r a_r <= 0` and `sum u_r (b_r - a_r·lower) > 0`.
    pub farkas: Option<Vec<Rational>>,
}

impl LpProblem {
    /// Problem with all lower bounds zero.
    pub fn new(objective: Vec<Rational>, constraints: Vec<Constraint>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints,
            lower_bounds: vec![Rational::zero(); n],
        }
    }

    pub fn nvars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.nvars();
        if self.lower_bounds.len() != n {
            return Err(LpError::DimensionMismatch(format!(
                "{} lower bounds for {n} variables",
                self.lower_bounds.len()
            )));
        }
        for (r, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(LpError::DimensionMismatch(format!(
                    "row {r} has {} coefficients for {n} variables",
                    row.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Every row and bound satisfied exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.nvars() {
            return false;
        }
        if x.iter().zip(&self.lower_bounds).any(|(v, lb)| v < lb) {
            return false;
        }
        self.constraints.iter().all(|row| {
            let lhs = dot(&row.coeffs, x);
            match row.sense {
                Sense::Le => lhs <= row.rhs,
                Sense::Eq => lhs == row.rhs,
                Sense::Ge => lhs >= row.rhs,
            }
        })
    }

    /// Active rows plus active lower bounds at `x`.
    pub fn tight_count(&self, x: &[Rational]) -> usize {
        let rows = self
            .constraints
            .iter()
            .filter(|row| dot(&row.coeffs, x) == row.rhs)
            .count();
        let bounds = x.iter().zip(&self.lower_bounds).filter(|(v, lb)| v == lb).count();
        rows + bounds
    }

    fn multipliers_have_valid_signs(&self, u: &[Rational]) -> bool {
        u.len() == self.constraints.len()
            && self.constraints.iter().zip(u).all(|(row, ur)| match row.sense {
                Sense::Le => !ur.is_positive(),
                Sense::Eq => true,
                Sense::Ge => !ur.is_negative(),
            })
    }

    fn combined_row(&self, u: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.nvars()];
        for (row, ur) in self.constraints.iter().zip(u) {
            for (a, c) in acc.iter_mut().zip(&row.coeffs) {
                *a += ur * c;
            }
        }
        acc
    }

    /// `sum u_r b_r + (c - u^T A)·lower`: the dual objective, valid for
    /// any dual-feasible `u`.
    pub fn dual_objective(&self, u: &[Rational]) -> Rational {
        let combined = self.combined_row(u);
        let rows: Rational = self.constraints.iter().zip(u).map(|(row, ur)| ur * &row.rhs).sum();
        let reduced: Vec<Rational> = self.objective.iter().zip(&combined).map(|(c, a)| c - a).collect();
        rows + dot(&reduced, &self.lower_bounds)
    }

    /// Sign pattern holds and `u^T A <= c` componentwise.
    pub fn is_dual_feasible(&self, u: &[Rational]) -> bool {
        self.multipliers_have_valid_signs(u) && self.combined_row(u).iter().zip(&self.objective).all(|(a, c)| a <= c)
    }

    /// Checks a Farkas ray proving the rows have no solution with
    /// `x >= lower`.
    pub fn verifies_infeasibility(&self, u: &[Rational]) -> bool {
        if !self.multipliers_have_valid_signs(u) {
            return false;
        }
        let combined = self.combined_row(u);
        if combined.iter().any(|a| a.is_positive()) {
            return false;
        }
        let shifted: Rational = self
            .constraints
            .iter()
            .zip(u)
            .map(|(row, ur)| ur * (&row.rhs - dot(&row.coeffs, &self.lower_bounds)))
            .sum();
        shifted.is_positive()
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs for the current phase.
    reduced: Vec<Rational>,
    /// Negated objective value for the current phase.
    neg_obj: Rational,
    /// Columns that may enter the basis.
    allowed: Vec<bool>,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.reduced.len()
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.neg_obj = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.reduced.len() {
                let delta = &cb * &self.rows[r][j];
                self.reduced[j] -= delta;
            }
            self.neg_obj -= &cb * &self.rhs[r];
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let piv = self.rows[r][col].clone();
        debug_assert!(!piv.is_zero());
        for v in self.rows[r].iter_mut() {
            *v /= &piv;
        }
        self.rhs[r] /= &piv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r {
                continue;
            }
            let factor = self.rows[k][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in self.rows[k].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[k] -= &factor * &pivot_rhs;
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.neg_obj -= &factor * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule to optimality; `false` means unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let entering = (0..self.ncols()).find(|&j| self.allowed[j] && self.reduced[j].is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

/// Solves `problem` exactly.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let nv = problem.nvars();
    let nrows = problem.constraints.len();

    let slack_of: Vec<Option<usize>> = {
        let mut next = nv;
        problem
            .constraints
            .iter()
            .map(|row| match row.sense {
                Sense::Eq => None,
                _ => {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let ns = slack_of.iter().flatten().count();
    let art0 = nv + ns;
    let ncols = art0 + nrows;

    let mut rows = Vec::with_capacity(nrows);
    let mut rhs = Vec::with_capacity(nrows);
    let mut signs = Vec::with_capacity(nrows);
    for (r, row) in problem.constraints.iter().enumerate() {
        let shifted = &row.rhs - dot(&row.coeffs, &problem.lower_bounds);
        let sign = if shifted.is_negative() { -1 } else { 1 };
        let flip = |q: Rational| if sign < 0 { -q } else { q };
        let mut line = vec![Rational::zero(); ncols];
        for (j, a) in row.coeffs.iter().enumerate() {
            line[j] = flip(a.clone());
        }
        if let Some(s) = slack_of[r] {
            let coeff = match row.sense {
                Sense::Le => Rational::from_integer(1.into()),
                Sense::Ge => Rational::from_integer((-1).into()),
                Sense::Eq => unreachable!(),
            };
            line[s] = flip(coeff);
        }
        line[art0 + r] = Rational::from_integer(1.into());
        rows.push(line);
        rhs.push(flip(shifted));
        signs.push(sign);
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis: (art0..ncols).collect(),
        reduced: Vec::new(),
        neg_obj: Rational::zero(),
        allowed: vec![true; ncols],
    };

    let mut phase1 = vec![Rational::zero(); ncols];
    for c in phase1.iter_mut().skip(art0) {
        *c = Rational::from_integer(1.into());
    }
    tab.set_costs(&phase1);
    let bounded = tab.optimize();
    debug_assert!(bounded, "phase one is bounded below by zero");

    let infeasibility = -tab.neg_obj.clone();
    if infeasibility.is_positive() {
        // Phase-one row duals: y_r = 1 - reduced cost of artificial r.
        let farkas = (0..nrows)
            .map(|r| {
                let y = Rational::from_integer(1.into()) - &tab.reduced[art0 + r];
                if signs[r] < 0 {
                    -y
                } else {
                    y
                }
            })
            .collect::<Vec<_>>();
        if !problem.verifies_infeasibility(&farkas) {
            return Err(LpError::Internal("phase-one Farkas ray failed verification".into()));
        }
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            values: Vec::new(),
            objective: Rational::zero(),
            basis: Vec::new(),
            duals: Vec::new(),
            farkas: Some(farkas),
        });
    }

    // Drive zero-valued artificials out where possible; rows where that is
    // impossible are redundant and keep their artificial at zero.
    for r in 0..nrows {
        if tab.basis[r] >= art0 {
            if let Some(col) = (0..art0).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, col);
            }
        }
    }
    for allowed in tab.allowed.iter_mut().skip(art0) {
        *allowed = false;
    }

    let mut phase2 = vec![Rational::zero(); ncols];
    phase2[..nv].clone_from_slice(&problem.objective);
    tab.set_costs(&phase2);
    if !tab.optimize() {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: Rational::zero(),
            basis: Vec::new(),
            duals: Vec::new(),
            farkas: None,
        });
    }

    let mut values = problem.lower_bounds.clone();
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nv {
            values[b] += &tab.rhs[r];
        }
    }
    let duals: Vec<Rational> = (0..nrows)
        .map(|r| {
            let y = -tab.reduced[art0 + r].clone();
            if signs[r] < 0 {
                -y
            } else {
                y
            }
        })
        .collect();
    let objective = problem.objective_value(&values);
    let mut basis: Vec<usize> = tab.basis.iter().copied().filter(|&b| b < art0).collect();
    basis.sort_unstable();

    if !problem.is_feasible(&values) {
        return Err(LpError::Internal("optimal vertex is infeasible".into()));
    }
    if !problem.is_dual_feasible(&duals) || problem.dual_objective(&duals) != objective {
        return Err(LpError::Internal("dual solution failed verification".into()));
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective,
        basis,
        duals,
        farkas: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn single_var(sense_rows: Vec<(Sense, Rational)>) -> LpProblem {
        LpProblem::new(
            vec![int(1)],
            sense_rows
                .into_iter()
                .map(|(s, b)| Constraint::new(vec![int(1)], s, b))
                .collect(),
        )
    }

    #[test]
    fn minimizes_single_bound() {
        let sol = solve_lp(&single_var(vec![(Sense::Ge, ratio(4, 3))])).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, ratio(4, 3));
        assert_eq!(sol.duals, vec![int(1)]);
    }

    #[test]
    fn detects_infeasible_bound() {
        let lp = single_var(vec![(Sense::Le, int(-1))]);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert!(lp.verifies_infeasibility(sol.farkas.as_ref().unwrap()));
    }

    #[test]
    fn detects_unbounded() {
        let lp = LpProblem::new(
            vec![int(-1), int(0)],
            vec![Constraint::new(vec![int(1), int(-1)], Sense::Le, int(1))],
        );
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn rejects_ragged_rows() {
        let lp = LpProblem::new(
            vec![int(1), int(1)],
            vec![Constraint::new(vec![int(1)], Sense::Ge, int(0))],
        );
        assert!(matches!(solve_lp(&lp), Err(LpError::DimensionMismatch(_))));
    }

    #[test]
    fn handles_equalities_and_lower_bounds() {
        // min x + 2y  s.t. x + y = 3, x <= 2, x >= 1/2, y >= 0
        let mut lp = LpProblem::new(
            vec![int(1), int(2)],
            vec![
                Constraint::new(vec![int(1), int(1)], Sense::Eq, int(3)),
                Constraint::new(vec![int(1), int(0)], Sense::Le, int(2)),
            ],
        );
        lp.lower_bounds = vec![ratio(1, 2), int(0)];
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.values, vec![int(2), int(1)]);
        assert_eq!(sol.objective, int(4));
        assert_eq!(lp.dual_objective(&sol.duals), int(4));
        assert!(lp.tight_count(&sol.values) >= lp.nvars());
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let lp = LpProblem::new(
            vec![int(1), int(1)],
            vec![
                Constraint::new(vec![int(1), int(1)], Sense::Eq, int(2)),
                Constraint::new(vec![int(2), int(2)], Sense::Eq, int(4)),
                Constraint::new(vec![int(1), int(0)], Sense::Ge, int(1)),
            ],
        );
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, int(2));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling LP, in minimization form.
        let lp = LpProblem::new(
            vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)],
            vec![
                Constraint::new(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Sense::Le, int(0)),
                Constraint::new(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Sense::Le, int(0)),
                Constraint::new(vec![int(0), int(0), int(1), int(0)], Sense::Le, int(1)),
            ],
        );
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, ratio(-1, 20));
    }
}
