//! Searches over contract classes: linear, optimal, monotone and debt.

use num_traits::{One, Zero};

use crate::contracts::envelope::{upper_envelope, upper_hull, LinearChoice};
use crate::error::ContractError;
use crate::lp::{min_payment_contract, min_payment_monotone, PaymentOutcome};
use crate::model::{best_response_from_profile, Assumption, Contract, Instance};
use crate::rational::Rational;

/// Action implemented by the linear contract `alpha`, or `None` on
/// opt-out. Uses the envelope when A1-A3 hold and the direct best
/// response otherwise; the two agree whenever both apply.
pub fn implemented_action(instance: &Instance, alpha: &Rational) -> Option<usize> {
    match upper_envelope(instance) {
        Ok(env) => env.lookup(alpha),
        Err(_) => instance.best_response(&instance.linear_contract(alpha)).choice.action(),
    }
}

/// Best linear contract; the optimum sits at an envelope breakpoint.
pub fn best_linear(instance: &Instance) -> Result<LinearChoice, ContractError> {
    let env = upper_envelope(instance)?;
    let mut best: Option<LinearChoice> = None;
    for seg in &env.segments {
        let payoff = (Rational::one() - &seg.alpha_lo) * instance.expected_reward(seg.action);
        if best.as_ref().is_none_or(|b| payoff > b.payoff) {
            best = Some(LinearChoice {
                alpha: seg.alpha_lo.clone(),
                action: Some(seg.action),
                payoff,
            });
        }
    }
    Ok(best.expect("A3 keeps the envelope nonempty"))
}

/// A contract together with the action it implements and its payoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractChoice {
    pub action: usize,
    pub contract: Contract,
    pub payoff: Rational,
}

/// Solves the payment LP for every action.
pub fn solve_all_actions(instance: &Instance, monotone: bool) -> Result<Vec<PaymentOutcome>, ContractError> {
    (0..instance.n())
        .map(|a| {
            if monotone {
                min_payment_monotone(instance, a)
            } else {
                min_payment_contract(instance, a)
            }
            .map_err(ContractError::from)
        })
        .collect()
}

fn best_over_actions(instance: &Instance, solves: &[PaymentOutcome]) -> Result<ContractChoice, ContractError> {
    let mut best: Option<(usize, Rational)> = None;
    for (a, out) in solves.iter().enumerate() {
        if let Some(p) = out.implemented() {
            let payoff = p.target_payoff(instance);
            if best.as_ref().is_none_or(|(_, b)| payoff > *b) {
                best = Some((a, payoff));
            }
        }
    }
    let (a, target_payoff) = best.ok_or(ContractError::NoImplementableAction)?;
    let p = solves[a].implemented().expect("selected action is implemented");
    // The replay can only land on an action with an equal payoff: a higher
    // one would beat the optimum over all actions.
    let replay = &p.replay;
    let action = replay.choice.action().ok_or(ContractError::NoImplementableAction)?;
    debug_assert_eq!(replay.principal_payoff, target_payoff);
    Ok(ContractChoice {
        action,
        contract: p.contract.clone(),
        payoff: replay.principal_payoff.clone(),
    })
}

/// Optimal contract: one minimum-payment LP per action.
pub fn optimal_contract(instance: &Instance) -> Result<ContractChoice, ContractError> {
    best_over_actions(instance, &solve_all_actions(instance, false)?)
}

/// Optimal monotone contract: one monotone LP per action.
pub fn best_monotone(instance: &Instance) -> Result<ContractChoice, ContractError> {
    best_over_actions(instance, &solve_all_actions(instance, true)?)
}

/// Debt contract: `t_j = 0` below `cut` and `alpha * x_j` from `cut` on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DebtChoice {
    /// Index of the lowest paid outcome.
    pub cut: usize,
    pub alpha: Rational,
    pub action: Option<usize>,
    pub payoff: Rational,
    pub contract: Contract,
}

fn debt_contract(instance: &Instance, cut: usize, alpha: &Rational) -> Contract {
    let payments = instance
        .outcomes()
        .iter()
        .enumerate()
        .map(|(j, x)| if j < cut { Rational::zero() } else { alpha * x })
        .collect();
    Contract::new(payments).expect("nonnegative by construction")
}

/// Best debt contract over all cuts; ties go to the smaller cut, then the
/// smaller alpha. Requires A1-A3.
pub fn best_debt(instance: &Instance) -> Result<DebtChoice, ContractError> {
    instance.require(&[Assumption::A1, Assumption::A2, Assumption::A3])?;
    let rewards = instance.rewards();
    let costs = instance.costs();
    let mut best: Option<DebtChoice> = None;
    for cut in 0..instance.m() {
        let tail: Vec<Rational> = instance
            .actions()
            .iter()
            .map(|a| {
                a.probs()[cut..]
                    .iter()
                    .zip(&instance.outcomes()[cut..])
                    .map(|(p, x)| p * x)
                    .sum()
            })
            .collect();
        for seg in upper_hull(&tail, &costs) {
            let payments: Vec<Rational> = tail.iter().map(|r| &seg.alpha_lo * r).collect();
            let br = best_response_from_profile(&rewards, &payments, &costs);
            if best.as_ref().is_none_or(|b| br.principal_payoff > b.payoff) {
                best = Some(DebtChoice {
                    cut,
                    contract: debt_contract(instance, cut, &seg.alpha_lo),
                    alpha: seg.alpha_lo,
                    action: br.choice.action(),
                    payoff: br.principal_payoff,
                });
            }
        }
    }
    Ok(best.expect("A3 keeps every envelope nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{example11, example12, gen_thm52};
    use crate::model::build_instance;
    use crate::rational::{int, ratio, to_decimal};

    #[test]
    fn example12_linear_and_optimal() {
        let inst = example12();
        let lin = best_linear(&inst).unwrap();
        assert_eq!(
            (lin.alpha.clone(), lin.action, lin.payoff.clone()),
            (int(0), Some(0), int(1))
        );
        let opt = optimal_contract(&inst).unwrap();
        assert_eq!(opt.action, 1);
        assert_eq!(opt.payoff, ratio(5, 3));
        assert_eq!(best_monotone(&inst).unwrap().payoff, ratio(5, 3));
    }

    #[test]
    fn example12_implemented_actions() {
        let inst = example12();
        assert_eq!(implemented_action(&inst, &ratio(1, 2)), Some(0));
        assert_eq!(implemented_action(&inst, &int(1)), Some(1));
        assert_eq!(implemented_action(&inst, &int(0)), Some(0));
    }

    #[test]
    fn example11_optimal() {
        let inst = example11();
        let opt = optimal_contract(&inst).unwrap();
        assert_eq!(opt.action, 2);
        assert_eq!(to_decimal(&opt.payoff, 2), "2.95");
        let mono = best_monotone(&inst).unwrap();
        assert!(mono.payoff <= opt.payoff);
        assert!(best_linear(&inst).unwrap().payoff <= mono.payoff);
    }

    #[test]
    fn example12_debt_cuts_at_top() {
        let d = best_debt(&example12()).unwrap();
        assert_eq!(d.cut, 1);
        assert_eq!(d.alpha, ratio(4, 9));
        assert_eq!(d.payoff, ratio(5, 3));
        assert_eq!(d.contract.payments(), &[int(0), ratio(4, 3)]);
    }

    #[test]
    fn thm52_small_debt() {
        let d = best_debt(&gen_thm52(2, &ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(d.payoff, ratio(3, 2));
    }

    #[test]
    fn thm52_optimum_closed_form() {
        for n in 1..=5i64 {
            let eps = ratio(1, 10);
            let inst = gen_thm52(n as usize, &eps).unwrap();
            let opt = optimal_contract(&inst).unwrap();
            assert_eq!(opt.payoff, int(n) - &eps * int(n - 1));
            assert_eq!(best_linear(&inst).unwrap().payoff, int(1));
        }
    }

    #[test]
    fn single_action_everything_agrees() {
        let inst = build_instance(vec![int(0), int(3)], vec![(vec![ratio(1, 3), ratio(2, 3)], int(0))]).unwrap();
        let opt = optimal_contract(&inst).unwrap();
        assert_eq!(opt.payoff, int(2));
        assert_eq!(opt.contract, Contract::zero(2));
        assert_eq!(best_monotone(&inst).unwrap(), opt);
        assert_eq!(best_linear(&inst).unwrap().payoff, int(2));
    }

    #[test]
    fn linear_needs_assumptions() {
        let p = vec![ratio(1, 2), ratio(1, 2)];
        let inst = build_instance(vec![int(0), int(1)], vec![(p.clone(), int(0)), (p, int(0))]).unwrap();
        assert_eq!(
            best_linear(&inst),
            Err(ContractError::AssumptionViolated(Assumption::A1))
        );
        assert_eq!(implemented_action(&inst, &ratio(1, 2)), Some(0));
    }
}
