//! Minimum-payment LPs for implementing a single action, their duals, and
//! (non-)implementability certificates.
//!
//! For action `a` the LP has one payment variable per outcome and one IC
//! row per other action `a'`:
//!
//! ```text
//! min  sum_j F[a][j] t_j
//! s.t. sum_j (F[a][j] - F[a'][j]) t_j >= c_a - c_a'    for all a' != a
//!      t >= 0
//! ```
//!
//! An IR row `sum_j F[a][j] t_j >= c_a` is added only when the instance
//! has no zero-cost action (otherwise IC against that action implies IR).
//! The monotone variant adds `t_j - t_{j-1} >= 0` for `j >= 2`.

use num_traits::{One, Signed, Zero};

use crate::contracts::regularity::fosd_check;
use crate::error::LpError;
use crate::lp::simplex::{solve_lp, Constraint, LpProblem, LpStatus, Sense};
use crate::model::{incentive_compatible_set, BestResponse, Contract, Instance};
use crate::rational::{dot, Rational};

/// Row layout of a payment LP.
#[derive(Debug, Clone)]
struct PaymentLp {
    problem: LpProblem,
    /// Action index of each IC row, in row order.
    ic_actions: Vec<usize>,
    ir_row: Option<usize>,
    /// First monotonicity row; rows `mono_start..mono_start + m - 1`.
    mono_start: Option<usize>,
}

fn payment_lp(instance: &Instance, action: usize, monotone: bool, zero_objective: bool) -> PaymentLp {
    let m = instance.m();
    let fa = instance.action(action).probs();
    let ca = instance.cost(action);
    let mut constraints = Vec::new();
    let mut ic_actions = Vec::new();
    for other in 0..instance.n() {
        if other == action {
            continue;
        }
        let fo = instance.action(other).probs();
        let coeffs = fa.iter().zip(fo).map(|(p, q)| p - q).collect();
        constraints.push(Constraint::new(coeffs, Sense::Ge, ca - instance.cost(other)));
        ic_actions.push(other);
    }
    let ir_row = if instance.flags().a3 {
        None
    } else {
        constraints.push(Constraint::new(fa.to_vec(), Sense::Ge, ca.clone()));
        Some(constraints.len() - 1)
    };
    let mono_start = if monotone && m > 1 {
        let start = constraints.len();
        for j in 1..m {
            let mut coeffs = vec![Rational::zero(); m];
            coeffs[j] = Rational::one();
            coeffs[j - 1] = -Rational::one();
            constraints.push(Constraint::new(coeffs, Sense::Ge, Rational::zero()));
        }
        Some(start)
    } else {
        None
    };
    let objective = if zero_objective {
        vec![Rational::zero(); m]
    } else {
        fa.to_vec()
    };
    PaymentLp {
        problem: LpProblem::new(objective, constraints),
        ic_actions,
        ir_row,
        mono_start,
    }
}

/// Optimal dual multipliers of a payment LP, indexed by action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaymentDuals {
    /// `lambdas[a']` for every action; the target action's entry is zero.
    pub lambdas: Vec<Rational>,
    /// IR multiplier when the LP carried an IR row.
    pub ir: Option<Rational>,
    /// Monotonicity multipliers `mu_2..mu_m` for the monotone LP.
    pub mus: Option<Vec<Rational>>,
}

impl PaymentDuals {
    /// Dual objective `sum lambda_a' (c_a - c_a') + ir * c_a`.
    pub fn objective(&self, instance: &Instance, action: usize) -> Rational {
        let ca = instance.cost(action);
        let ic: Rational = self
            .lambdas
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != action)
            .map(|(k, l)| l * (ca - instance.cost(k)))
            .sum();
        match &self.ir {
            Some(y) => ic + y * ca,
            None => ic,
        }
    }

    /// Dual feasibility, recomputed from instance data.
    pub fn is_feasible(&self, instance: &Instance, action: usize) -> bool {
        let m = instance.m();
        if self.lambdas.len() != instance.n() || !self.lambdas[action].is_zero() {
            return false;
        }
        if self.lambdas.iter().any(|l| l.is_negative()) {
            return false;
        }
        if self.ir.as_ref().is_some_and(|y| y.is_negative()) {
            return false;
        }
        if let Some(mus) = &self.mus {
            if mus.len() != m.saturating_sub(1) || mus.iter().any(|u| u.is_negative()) {
                return false;
            }
        }
        let fa = instance.action(action).probs();
        (0..m).all(|j| {
            let mut lhs: Rational = (0..instance.n())
                .filter(|&k| k != action)
                .map(|k| &self.lambdas[k] * (&fa[j] - &instance.action(k).probs()[j]))
                .sum();
            if let Some(y) = &self.ir {
                lhs += y * &fa[j];
            }
            if let Some(mus) = &self.mus {
                lhs += mu_column(mus, j);
            }
            lhs <= fa[j]
        })
    }
}

/// Column-`j` contribution of the monotonicity rows: `mu_j - mu_{j+1}`
/// with the boundary multipliers taken as zero.
fn mu_column(mus: &[Rational], j: usize) -> Rational {
    let m = mus.len() + 1;
    let mut v = Rational::zero();
    if j >= 1 {
        v += &mus[j - 1];
    }
    if j + 1 < m {
        v -= &mus[j];
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Another mixture of actions yields the same distribution more cheaply.
    NonImplementability,
    /// Another mixture yields a dominating distribution more cheaply.
    MonotoneNonImplementability,
}

/// Convex-combination witness that an action cannot be implemented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub action: usize,
    pub kind: CertificateKind,
    /// Mixture weights over all actions; the target's weight is zero.
    pub lambdas: Vec<Rational>,
    /// Monotonicity multipliers `mu_2..mu_m` (monotone kind only).
    pub mus: Option<Vec<Rational>>,
}

impl DualCertificate {
    pub fn mixture(&self, instance: &Instance) -> Vec<Rational> {
        let mut mix = vec![Rational::zero(); instance.m()];
        for (k, l) in self.lambdas.iter().enumerate() {
            for (acc, p) in mix.iter_mut().zip(instance.action(k).probs()) {
                *acc += l * p;
            }
        }
        mix
    }

    pub fn mixture_cost(&self, instance: &Instance) -> Rational {
        dot(&self.lambdas, &instance.costs())
    }

    /// Checks the witness by direct arithmetic on the instance.
    pub fn verify(&self, instance: &Instance) -> bool {
        let a = self.action;
        if self.lambdas.len() != instance.n() || !self.lambdas[a].is_zero() {
            return false;
        }
        if self.lambdas.iter().any(|l| l.is_negative()) {
            return false;
        }
        if !self.lambdas.iter().sum::<Rational>().is_one() {
            return false;
        }
        if self.mixture_cost(instance) >= *instance.cost(a) {
            return false;
        }
        let fa = instance.action(a).probs();
        let mix = self.mixture(instance);
        match self.kind {
            CertificateKind::NonImplementability => self.mus.is_none() && mix == fa,
            CertificateKind::MonotoneNonImplementability => {
                let Some(mus) = &self.mus else {
                    return false;
                };
                if mus.len() != instance.m() - 1 || mus.iter().any(|u| u.is_negative()) {
                    return false;
                }
                let rows_ok = (0..instance.m()).all(|j| fa[j].clone() + mu_column(mus, j) <= mix[j]);
                rows_ok && fosd_check(&mix, fa).unwrap_or(false)
            }
        }
    }
}

/// Minimum-payment implementation of one action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPayment {
    pub action: usize,
    pub contract: Contract,
    pub expected_payment: Rational,
    pub duals: PaymentDuals,
    /// Agent's actual choice under the contract after tie-breaking. The
    /// target is always in the IC set; the choice may differ from it only
    /// on an exact utility tie.
    pub replay: BestResponse,
}

impl MinPayment {
    /// Principal payoff when the target action is taken.
    pub fn target_payoff(&self, instance: &Instance) -> Rational {
        instance.expected_reward(self.action) - &self.expected_payment
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum PaymentOutcome {
    Implemented(MinPayment),
    NotImplementable(DualCertificate),
}

impl PaymentOutcome {
    pub fn implemented(&self) -> Option<&MinPayment> {
        match self {
            PaymentOutcome::Implemented(p) => Some(p),
            PaymentOutcome::NotImplementable(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&DualCertificate> {
        match self {
            PaymentOutcome::Implemented(_) => None,
            PaymentOutcome::NotImplementable(c) => Some(c),
        }
    }
}

fn certificate_from_farkas(
    lp: &PaymentLp,
    instance: &Instance,
    action: usize,
    farkas: &[Rational],
    kind: CertificateKind,
) -> Result<DualCertificate, LpError> {
    let total: Rational = lp.ic_actions.iter().enumerate().map(|(r, _)| farkas[r].clone()).sum();
    if !total.is_positive() {
        return Err(LpError::Internal("Farkas ray has no IC mass".into()));
    }
    if let Some(r) = lp.ir_row {
        if !farkas[r].is_zero() {
            return Err(LpError::Internal("Farkas ray loads the IR row".into()));
        }
    }
    let mut lambdas = vec![Rational::zero(); instance.n()];
    for (r, &k) in lp.ic_actions.iter().enumerate() {
        lambdas[k] = &farkas[r] / &total;
    }
    let mus = lp.mono_start.map(|start| {
        farkas[start..start + instance.m() - 1]
            .iter()
            .map(|u| u / &total)
            .collect()
    });
    let mus = match kind {
        CertificateKind::NonImplementability => None,
        CertificateKind::MonotoneNonImplementability => Some(mus.unwrap_or_default()),
    };
    let cert = DualCertificate {
        action,
        kind,
        lambdas,
        mus,
    };
    if !cert.verify(instance) {
        return Err(LpError::Internal(format!(
            "certificate for action {} failed verification",
            action + 1
        )));
    }
    Ok(cert)
}

fn solve_payment(instance: &Instance, action: usize, monotone: bool) -> Result<PaymentOutcome, LpError> {
    assert!(action < instance.n(), "action index out of range");
    let lp = payment_lp(instance, action, monotone, false);
    let kind = if monotone {
        CertificateKind::MonotoneNonImplementability
    } else {
        CertificateKind::NonImplementability
    };
    let sol = solve_lp(&lp.problem)?;
    match sol.status {
        LpStatus::Infeasible => {
            let farkas = sol.farkas.expect("infeasible solutions carry a ray");
            certificate_from_farkas(&lp, instance, action, &farkas, kind).map(PaymentOutcome::NotImplementable)
        }
        LpStatus::Unbounded => Err(LpError::Internal("payment LP cannot be unbounded".into())),
        LpStatus::Optimal => {
            let mut lambdas = vec![Rational::zero(); instance.n()];
            for (r, &k) in lp.ic_actions.iter().enumerate() {
                lambdas[k] = sol.duals[r].clone();
            }
            let duals = PaymentDuals {
                lambdas,
                ir: lp.ir_row.map(|r| sol.duals[r].clone()),
                mus: lp
                    .mono_start
                    .map(|s| sol.duals[s..s + instance.m() - 1].to_vec())
                    .or_else(|| monotone.then(Vec::new)),
            };
            let values = least_total_on_face(&lp.problem, &sol.objective)?;
            let contract = Contract::new(values).map_err(|e| LpError::Internal(e.to_string()))?;
            let expected_payment = instance.expected_payment(action, &contract);
            if !duals.is_feasible(instance, action) || duals.objective(instance, action) != expected_payment {
                return Err(LpError::Internal("strong duality check failed".into()));
            }
            let payments: Vec<Rational> = (0..instance.n())
                .map(|i| instance.expected_payment(i, &contract))
                .collect();
            if !incentive_compatible_set(&payments, &instance.costs()).contains(&action) {
                return Err(LpError::Internal("replay: target is not incentive compatible".into()));
            }
            let replay = instance.best_response(&contract);
            Ok(PaymentOutcome::Implemented(MinPayment {
                action,
                contract,
                expected_payment,
                duals,
                replay,
            }))
        }
    }
}

/// Among optimal solutions, a vertex with the least total payment. Vertices
/// of the optimal face are vertices of the original region, so sparsity
/// is preserved; this only removes payments on outcomes that do not need
/// them.
fn least_total_on_face(problem: &LpProblem, optimum: &Rational) -> Result<Vec<Rational>, LpError> {
    let mut face = problem.clone();
    face.constraints
        .push(Constraint::new(problem.objective.clone(), Sense::Eq, optimum.clone()));
    face.objective = vec![Rational::one(); problem.nvars()];
    let sol = solve_lp(&face)?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::Internal("optimal face is empty".into()));
    }
    Ok(sol.values)
}

/// Cheapest contract implementing `action`, or a certificate that none does.
pub fn min_payment_contract(instance: &Instance, action: usize) -> Result<PaymentOutcome, LpError> {
    solve_payment(instance, action, false)
}

/// Cheapest monotone contract implementing `action`, or a certificate.
pub fn min_payment_monotone(instance: &Instance, action: usize) -> Result<PaymentOutcome, LpError> {
    solve_payment(instance, action, true)
}

/// Feasibility of the payment LP with a zero objective.
pub fn is_implementable(instance: &Instance, action: usize) -> Result<(bool, Option<DualCertificate>), LpError> {
    assert!(action < instance.n(), "action index out of range");
    let lp = payment_lp(instance, action, false, true);
    let sol = solve_lp(&lp.problem)?;
    match sol.status {
        LpStatus::Optimal => Ok((true, None)),
        LpStatus::Infeasible => {
            let farkas = sol.farkas.expect("infeasible solutions carry a ray");
            let cert = certificate_from_farkas(&lp, instance, action, &farkas, CertificateKind::NonImplementability)?;
            Ok((false, Some(cert)))
        }
        LpStatus::Unbounded => Err(LpError::Internal("zero objective cannot be unbounded".into())),
    }
}

/// Moves an optimal contract to a vertex of the optimal face, leaving at
/// most `n - 1` positive payments (`n` when an IR row is present) and the
/// same expected payment.
pub fn sparsify_to_basic(instance: &Instance, action: usize, contract: &Contract) -> Result<Contract, LpError> {
    if contract.len() != instance.m() {
        return Err(LpError::DimensionMismatch(format!(
            "contract has {} payments for {} outcomes",
            contract.len(),
            instance.m()
        )));
    }
    let lp = payment_lp(instance, action, false, false);
    let problem = &lp.problem;
    let mut t = contract.payments().to_vec();
    if !problem.is_feasible(&t) {
        return Err(LpError::NotOptimalInput("contract violates an IC constraint".into()));
    }
    let optimum = match min_payment_contract(instance, action)? {
        PaymentOutcome::Implemented(p) => p.expected_payment,
        PaymentOutcome::NotImplementable(_) => {
            return Err(LpError::NotOptimalInput("action is not implementable".into()))
        }
    };
    if problem.objective_value(&t) > optimum {
        return Err(LpError::NotOptimalInput(format!(
            "expected payment {} exceeds the optimum {optimum}",
            problem.objective_value(&t)
        )));
    }

    loop {
        let positive: Vec<usize> = (0..t.len()).filter(|&j| t[j].is_positive()).collect();
        if positive.is_empty() {
            break;
        }
        let slacks: Vec<Rational> = problem
            .constraints
            .iter()
            .map(|row| dot(&row.coeffs, &t) - &row.rhs)
            .collect();
        let mut system: Vec<Vec<Rational>> = problem
            .constraints
            .iter()
            .zip(&slacks)
            .filter(|(_, s)| s.is_zero())
            .map(|(row, _)| positive.iter().map(|&j| row.coeffs[j].clone()).collect())
            .collect();
        system.push(positive.iter().map(|&j| problem.objective[j].clone()).collect());
        let Some(mut direction) = null_vector(&system, positive.len()) else {
            break;
        };
        if !direction.iter().any(|d| d.is_negative()) {
            direction.iter_mut().for_each(|d| *d = -d.clone());
        }
        let mut full = vec![Rational::zero(); t.len()];
        for (k, &j) in positive.iter().enumerate() {
            full[j] = direction[k].clone();
        }
        let mut step: Option<Rational> = None;
        let mut consider = |cand: Rational| {
            if step.as_ref().is_none_or(|s| cand < *s) {
                step = Some(cand);
            }
        };
        for &j in &positive {
            if full[j].is_negative() {
                consider(&t[j] / -full[j].clone());
            }
        }
        for (row, slack) in problem.constraints.iter().zip(&slacks) {
            if slack.is_zero() {
                continue;
            }
            let rate = dot(&row.coeffs, &full);
            if rate.is_negative() {
                consider(slack / -rate);
            }
        }
        let step = step.expect("direction has a negative component");
        for (tj, dj) in t.iter_mut().zip(&full) {
            *tj += &step * dj;
        }
    }

    if !problem.is_feasible(&t) || problem.objective_value(&t) != optimum {
        return Err(LpError::Internal("sparsification left the optimal face".into()));
    }
    Contract::new(t).map_err(|e| LpError::Internal(e.to_string()))
}

/// Some nonzero `d` with `rows · d = 0`, if the columns are dependent.
fn null_vector(rows: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v /= &piv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free = (0..ncols).find(|c| !pivot_cols.contains(c))?;
    let mut d = vec![Rational::zero(); ncols];
    d[free] = Rational::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        d[pc] = -a[row][free].clone();
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{example11, example12};
    use crate::model::{build_instance, Choice};
    use crate::rational::{int, ratio, to_decimal};

    /// F_2 = (F_1 + F_3) / 2 with c_2 above the average cost.
    fn mixture_dominated() -> Instance {
        build_instance(
            vec![int(0), int(1), int(2)],
            vec![
                (vec![int(1), int(0), int(0)], int(0)),
                (vec![ratio(1, 2), int(0), ratio(1, 2)], int(2)),
                (vec![int(0), int(0), int(1)], int(3)),
                (vec![int(0), int(1), int(0)], int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn example12_min_payment() {
        let inst = example12();
        let p = min_payment_contract(&inst, 1).unwrap();
        let p = p.implemented().unwrap();
        assert_eq!(p.contract.payments(), &[int(0), ratio(4, 3)]);
        assert_eq!(p.expected_payment, ratio(4, 3));
        assert_eq!(p.replay.choice, Choice::Action(1));
    }

    #[test]
    fn example11_action3_matches_reported_payment() {
        let inst = example11();
        let p = min_payment_contract(&inst, 2).unwrap();
        let p = p.implemented().unwrap();
        assert_eq!(to_decimal(&p.expected_payment, 2), "2.04");
        assert!(p.contract.positive_count() <= 3);
        assert!(!p.contract.is_monotone());
        assert_eq!(p.replay.choice, Choice::Action(2));
        assert_eq!(p.duals.objective(&inst, 2), p.expected_payment);
    }

    #[test]
    fn zero_cost_action_needs_no_payment() {
        let inst = example11();
        let p = min_payment_contract(&inst, 0).unwrap();
        let p = p.implemented().unwrap();
        assert_eq!(p.expected_payment, int(0));
        assert_eq!(p.contract, Contract::zero(6));
        let mono = min_payment_monotone(&inst, 0).unwrap();
        assert_eq!(mono.implemented().unwrap().contract, Contract::zero(6));
    }

    #[test]
    fn mixture_dominated_action_gets_certificate() {
        let inst = mixture_dominated();
        let out = min_payment_contract(&inst, 1).unwrap();
        let cert = out.certificate().expect("not implementable");
        assert!(cert.verify(&inst));
        assert_eq!(cert.lambdas, vec![ratio(1, 2), int(0), ratio(1, 2), int(0)]);
        let (ok, cert2) = is_implementable(&inst, 1).unwrap();
        assert!(!ok);
        assert!(cert2.unwrap().verify(&inst));
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let inst = mixture_dominated();
        let mut cert = min_payment_contract(&inst, 1).unwrap().certificate().unwrap().clone();
        cert.lambdas = vec![ratio(1, 3), int(0), ratio(2, 3), int(0)];
        assert!(!cert.verify(&inst));
    }

    #[test]
    fn every_example11_action_is_implementable() {
        let inst = example11();
        for a in 0..inst.n() {
            assert!(is_implementable(&inst, a).unwrap().0, "action {}", a + 1);
        }
    }

    #[test]
    fn single_action_is_implementable() {
        let inst = build_instance(vec![int(2)], vec![(vec![int(1)], int(0))]).unwrap();
        assert_eq!(is_implementable(&inst, 0).unwrap(), (true, None));
    }

    #[test]
    fn monotone_example11_is_strictly_costlier() {
        let inst = example11();
        let free = min_payment_contract(&inst, 2).unwrap();
        let mono = min_payment_monotone(&inst, 2).unwrap();
        let (free, mono) = (free.implemented().unwrap(), mono.implemented().unwrap());
        assert!(mono.contract.is_monotone());
        assert!(mono.expected_payment > free.expected_payment);
        assert!(mono.duals.is_feasible(&inst, 2));
        assert_eq!(mono.duals.objective(&inst, 2), mono.expected_payment);
    }

    #[test]
    fn two_outcome_monotone_equals_unconstrained() {
        let inst = build_instance(
            vec![int(0), int(4)],
            vec![
                (vec![ratio(3, 4), ratio(1, 4)], int(0)),
                (vec![ratio(1, 2), ratio(1, 2)], int(1)),
                (vec![ratio(1, 8), ratio(7, 8)], int(2)),
            ],
        )
        .unwrap();
        for a in 0..3 {
            let free = min_payment_contract(&inst, a).unwrap();
            let mono = min_payment_monotone(&inst, a).unwrap();
            match (free.implemented(), mono.implemented()) {
                (Some(f), Some(g)) => assert_eq!(f.expected_payment, g.expected_payment),
                (None, None) => {}
                _ => panic!("implementability differs for action {}", a + 1),
            }
        }
    }

    #[test]
    fn monotone_certificate_for_dominated_action() {
        // Action 2 is FOSD-dominated by action 3 at lower cost.
        let inst = build_instance(
            vec![int(0), int(1), int(2)],
            vec![
                (vec![int(1), int(0), int(0)], int(0)),
                (vec![int(0), int(1), int(0)], int(2)),
                (vec![int(0), int(0), int(1)], int(1)),
            ],
        )
        .unwrap();
        let out = min_payment_monotone(&inst, 1).unwrap();
        let cert = out.certificate().expect("not monotonically implementable");
        assert_eq!(cert.kind, CertificateKind::MonotoneNonImplementability);
        assert!(cert.verify(&inst));
        // The unconstrained LP can still implement it by paying on x_2.
        assert!(min_payment_contract(&inst, 1).unwrap().implemented().is_some());
    }

    #[test]
    fn sparsify_keeps_basic_solution() {
        let inst = example11();
        let p = min_payment_contract(&inst, 2).unwrap();
        let p = p.implemented().unwrap();
        let s = sparsify_to_basic(&inst, 2, &p.contract).unwrap();
        assert_eq!(s, p.contract);
    }

    #[test]
    fn sparsify_collapses_padded_optimum() {
        // Outcomes 2 and 3 have identical likelihood ratios for every
        // action, so splitting the payment across them stays optimal.
        let inst = build_instance(
            vec![int(0), int(2), int(3)],
            vec![
                (vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)], int(0)),
                (vec![int(0), ratio(1, 2), ratio(1, 2)], int(1)),
            ],
        )
        .unwrap();
        let p = min_payment_contract(&inst, 1).unwrap();
        let p = p.implemented().unwrap();
        assert_eq!(p.expected_payment, int(2));
        let padded = Contract::new(vec![int(0), int(2), int(2)]).unwrap();
        assert_eq!(inst.expected_payment(1, &padded), int(2));
        let s = sparsify_to_basic(&inst, 1, &padded).unwrap();
        assert!(s.positive_count() < inst.n());
        assert_eq!(inst.expected_payment(1, &s), int(2));
    }

    #[test]
    fn sparsify_rejects_overpayment() {
        let inst = example12();
        let t = Contract::new(vec![int(0), int(2)]).unwrap();
        assert!(matches!(
            sparsify_to_basic(&inst, 1, &t),
            Err(LpError::NotOptimalInput(_))
        ));
        let weak = Contract::new(vec![int(0), int(1)]).unwrap();
        assert!(matches!(
            sparsify_to_basic(&inst, 1, &weak),
            Err(LpError::NotOptimalInput(_))
        ));
    }
}
