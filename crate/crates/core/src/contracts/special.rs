//! Settings where a contract with a single positive payment is optimal.

use num_traits::{Signed, Zero};

use crate::contracts::regularity::mlrp_check;
use crate::contracts::search::ContractChoice;
use crate::error::{ContractError, LpError, PreconditionKind};
use crate::lp::{is_implementable, min_payment_contract};
use crate::model::{incentive_compatible_set, Contract, Instance};
use crate::rational::Rational;

fn top_contract(m: usize, amount: Rational) -> Contract {
    let mut payments = vec![Rational::zero(); m];
    payments[m - 1] = amount;
    Contract::new(payments).expect("nonnegative by construction")
}

/// Minimum-payment contract for the highest-cost action that pays only on
/// the top outcome. Requires MLRP, a unique highest-cost action, and that
/// action to be implementable; the result is checked against the LP.
pub fn single_payment_contract(instance: &Instance) -> Result<Contract, ContractError> {
    let fail = |k| Err(ContractError::PreconditionFailed(k));
    let costs = instance.costs();
    let top_cost = costs.iter().max().expect("instance has actions");
    let targets: Vec<usize> = (0..instance.n()).filter(|&i| costs[i] == *top_cost).collect();
    if targets.len() != 1 {
        return fail(PreconditionKind::NotHighestCost);
    }
    let target = targets[0];
    if !mlrp_check(instance) {
        return fail(PreconditionKind::Mlrp);
    }
    if !is_implementable(instance, target)?.0 {
        return fail(PreconditionKind::NotImplementable);
    }
    let m = instance.m();
    let ft = &instance.action(target).probs()[m - 1];
    let ct = instance.cost(target);
    let mut amount = Rational::zero();
    for i in (0..instance.n()).filter(|&i| i != target) {
        let fi = &instance.action(i).probs()[m - 1];
        if fi < ft {
            amount = amount.max((ct - instance.cost(i)) / (ft - fi));
        }
    }
    if !instance.flags().a3 {
        if ft.is_zero() {
            return fail(PreconditionKind::NotImplementable);
        }
        amount = amount.max(ct / ft);
    }
    let contract = top_contract(m, amount);

    let payments: Vec<Rational> = (0..instance.n())
        .map(|i| instance.expected_payment(i, &contract))
        .collect();
    if !incentive_compatible_set(&payments, &costs).contains(&target) {
        return Err(LpError::Internal("single payment does not implement the target".into()).into());
    }
    let optimum = min_payment_contract(instance, target)?
        .implemented()
        .map(|p| p.expected_payment.clone())
        .ok_or(ContractError::PreconditionFailed(PreconditionKind::NotImplementable))?;
    if payments[target] != optimum {
        return Err(LpError::Internal(format!(
            "single payment costs {} but the LP optimum is {optimum}",
            payments[target]
        ))
        .into());
    }
    Ok(contract)
}

/// Two actions with a free first action: either pay nothing, or pay only on
/// the outcome with the highest likelihood ratio `F_2j / F_1j` (ties to the
/// higher outcome).
pub fn two_action_optimal(instance: &Instance) -> Result<ContractChoice, ContractError> {
    if instance.n() != 2 {
        return Err(ContractError::PreconditionFailed(PreconditionKind::NotTwoActions));
    }
    if !instance.cost(0).is_zero() {
        return Err(ContractError::PreconditionFailed(PreconditionKind::FirstActionCostly));
    }
    let (f1, f2) = (instance.action(0).probs(), instance.action(1).probs());
    let m = instance.m();
    let zero = Contract::zero(m);
    let br = instance.best_response(&zero);
    let mut best = ContractChoice {
        action: br.choice.action().expect("zero-cost action is always acceptable"),
        contract: zero,
        payoff: br.principal_payoff,
    };

    let mut star: Option<usize> = None;
    for j in 0..m {
        if f2[j].is_zero() {
            continue;
        }
        let better = match star {
            None => true,
            Some(s) => {
                // f2[j]/f1[j] >= f2[s]/f1[s], with x/0 = +inf.
                match (f1[j].is_zero(), f1[s].is_zero()) {
                    (true, _) => true,
                    (false, true) => false,
                    (false, false) => &f2[j] * &f1[s] >= &f2[s] * &f1[j],
                }
            }
        };
        if better {
            star = Some(j);
        }
    }
    if let Some(j) = star {
        let gap = &f2[j] - &f1[j];
        if gap.is_positive() {
            let mut payments = vec![Rational::zero(); m];
            payments[j] = instance.cost(1) / gap;
            let contract = Contract::new(payments).expect("nonnegative");
            let br = instance.best_response(&contract);
            if let Some(action) = br.choice.action() {
                if br.principal_payoff > best.payoff {
                    best = ContractChoice {
                        action,
                        contract,
                        payoff: br.principal_payoff,
                    };
                }
            }
        }
    }
    Ok(best)
}

/// Best contract of the form `(0, ..., 0, s)`: for each action the least
/// `s` that makes it incentive compatible, replayed through the agent's
/// tie-breaking. Ties go to the lowest action index.
pub fn top_payment_search(instance: &Instance) -> Option<ContractChoice> {
    let m = instance.m();
    let top: Vec<&Rational> = instance.actions().iter().map(|a| &a.probs()[m - 1]).collect();
    let mut best: Option<ContractChoice> = None;
    for a in 0..instance.n() {
        let ca = instance.cost(a);
        let mut lo = Rational::zero();
        let mut hi: Option<Rational> = None;
        let mut feasible = true;
        // s * coef >= rhs for IC against every b, and IR against "opt out".
        let rows = (0..instance.n())
            .filter(|&b| b != a)
            .map(|b| (top[a] - top[b], ca - instance.cost(b)))
            .chain(std::iter::once((top[a].clone(), ca.clone())));
        for (coef, rhs) in rows {
            if coef.is_positive() {
                lo = lo.max(rhs / coef);
            } else if coef.is_negative() {
                let cap = rhs / coef;
                hi = Some(match hi {
                    Some(h) => h.min(cap),
                    None => cap,
                });
            } else if rhs.is_positive() {
                feasible = false;
            }
        }
        if !feasible || hi.as_ref().is_some_and(|h| *h < lo) {
            continue;
        }
        let contract = top_contract(m, lo);
        let br = instance.best_response(&contract);
        let Some(action) = br.choice.action() else {
            continue;
        };
        if best.as_ref().is_none_or(|b| br.principal_payoff > b.payoff) {
            best = Some(ContractChoice {
                action,
                contract,
                payoff: br.principal_payoff,
            });
        }
    }
    best
}
