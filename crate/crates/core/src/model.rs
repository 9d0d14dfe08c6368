//! Hidden-action principal-agent model: instances, contracts, and the
//! agent's best response with principal-favoring tie-breaking.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::ModelError;
use crate::rational::{dot, Rational};

/// One of the standing assumptions an instance may or may not satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assumption {
    /// No dominated actions: distinct expected rewards, and higher reward
    /// means strictly higher cost.
    A1,
    /// Unique welfare-maximizing action.
    A2,
    /// A zero-cost action exists.
    A3,
    /// The lowest outcome is zero.
    A4,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Assumption::A1 => "A1",
            Assumption::A2 => "A2",
            Assumption::A3 => "A3",
            Assumption::A4 => "A4",
        };
        f.write_str(name)
    }
}

/// Which of the standing assumptions hold. Violations never reject an
/// instance; operations that need an assumption check these flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssumptionFlags {
    pub a1: bool,
    pub a2: bool,
    pub a3: bool,
    pub a4: bool,
}

impl AssumptionFlags {
    pub fn holds(&self, assumption: Assumption) -> bool {
        match assumption {
            Assumption::A1 => self.a1,
            Assumption::A2 => self.a2,
            Assumption::A3 => self.a3,
            Assumption::A4 => self.a4,
        }
    }

    /// First of the given assumptions that fails, if any.
    pub fn first_violation(&self, required: &[Assumption]) -> Option<Assumption> {
        required.iter().copied().find(|a| !self.holds(*a))
    }
}

/// An action: a distribution over outcomes and a cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    probs: Vec<Rational>,
    cost: Rational,
}

impl Action {
    /// Validates nonnegativity and that the probabilities sum to exactly one.
    pub fn new(probs: Vec<Rational>, cost: Rational) -> Result<Self, ModelError> {
        if probs.is_empty() {
            return Err(ModelError::malformed("action has no outcome probabilities"));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(ModelError::malformed(format!("negative probability {p}")));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(ModelError::malformed(format!("probabilities sum to {total}, not 1")));
        }
        if cost.is_negative() {
            return Err(ModelError::malformed(format!("negative cost {cost}")));
        }
        Ok(Self { probs, cost })
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }
}

/// A validated principal-agent instance with outcomes sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    outcomes: Vec<Rational>,
    actions: Vec<Action>,
    flags: AssumptionFlags,
}

impl Instance {
    /// Validates the raw data and computes the assumption flags.
    ///
    /// Outcomes given out of order are sorted, permuting every action's
    /// probability columns along with them.
    pub fn new(outcomes: Vec<Rational>, actions: Vec<Action>) -> Result<Self, ModelError> {
        if outcomes.is_empty() {
            return Err(ModelError::malformed("no outcomes"));
        }
        if actions.is_empty() {
            return Err(ModelError::malformed("no actions"));
        }
        let m = outcomes.len();
        if let Some(x) = outcomes.iter().find(|x| x.is_negative()) {
            return Err(ModelError::malformed(format!("negative outcome {x}")));
        }
        for (i, a) in actions.iter().enumerate() {
            if a.probs.len() != m {
                return Err(ModelError::malformed(format!(
                    "action {} has {} probabilities for {m} outcomes",
                    i + 1,
                    a.probs.len()
                )));
            }
        }

        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| outcomes[i].cmp(&outcomes[j]));
        let outcomes: Vec<Rational> = order.iter().map(|&j| outcomes[j].clone()).collect();
        let actions: Vec<Action> = actions
            .into_iter()
            .map(|a| Action {
                probs: order.iter().map(|&j| a.probs[j].clone()).collect(),
                cost: a.cost,
            })
            .collect();

        for (j, x) in outcomes.iter().enumerate() {
            if actions.iter().all(|a| a.probs[j].is_zero()) {
                return Err(ModelError::malformed(format!("outcome {x} is reached by no action")));
            }
        }

        let mut instance = Self {
            outcomes,
            actions,
            flags: AssumptionFlags::default(),
        };
        instance.flags = instance.compute_flags();
        Ok(instance)
    }

    fn compute_flags(&self) -> AssumptionFlags {
        let rewards: Vec<Rational> = (0..self.n()).map(|i| self.expected_reward(i)).collect();
        let mut a1 = true;
        for i in 0..self.n() {
            for k in 0..self.n() {
                if i == k {
                    continue;
                }
                if rewards[i] == rewards[k] {
                    a1 = false;
                }
                if rewards[i] > rewards[k] && self.actions[i].cost <= self.actions[k].cost {
                    a1 = false;
                }
            }
        }
        let welfares: Vec<Rational> = (0..self.n()).map(|i| self.welfare(i)).collect();
        let best = welfares.iter().max().expect("instance has actions");
        let a2 = welfares.iter().filter(|w| *w == best).count() == 1;
        let a3 = self.actions.iter().any(|a| a.cost.is_zero());
        let a4 = self.outcomes[0].is_zero();
        AssumptionFlags { a1, a2, a3, a4 }
    }

    /// Number of actions.
    pub fn n(&self) -> usize {
        self.actions.len()
    }

    /// Number of outcomes.
    pub fn m(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[Rational] {
        &self.outcomes
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action(&self, index: usize) -> &Action {
        &self.actions[index]
    }

    pub fn cost(&self, index: usize) -> &Rational {
        &self.actions[index].cost
    }

    pub fn flags(&self) -> AssumptionFlags {
        self.flags
    }

    /// Errors with the first of `required` the instance violates.
    pub fn require(&self, required: &[Assumption]) -> Result<(), Assumption> {
        match self.flags.first_violation(required) {
            Some(a) => Err(a),
            None => Ok(()),
        }
    }

    /// `R_i`: expected reward of action `index`.
    pub fn expected_reward(&self, index: usize) -> Rational {
        dot(&self.actions[index].probs, &self.outcomes)
    }

    /// `T_i`: expected payment of action `index` under `contract`.
    pub fn expected_payment(&self, index: usize, contract: &Contract) -> Rational {
        dot(&self.actions[index].probs, &contract.payments)
    }

    /// `R_i - c_i`.
    pub fn welfare(&self, index: usize) -> Rational {
        self.expected_reward(index) - &self.actions[index].cost
    }

    pub fn rewards(&self) -> Vec<Rational> {
        (0..self.n()).map(|i| self.expected_reward(i)).collect()
    }

    pub fn costs(&self) -> Vec<Rational> {
        self.actions.iter().map(|a| a.cost.clone()).collect()
    }

    /// Index of the welfare-maximizing action; ties go to the lowest index.
    pub fn welfare_maximizer(&self) -> usize {
        let mut best = 0;
        let mut best_w = self.welfare(0);
        for i in 1..self.n() {
            let w = self.welfare(i);
            if w > best_w {
                best = i;
                best_w = w;
            }
        }
        best
    }

    /// Agent's choice under `contract`.
    pub fn best_response(&self, contract: &Contract) -> BestResponse {
        assert_eq!(contract.len(), self.m(), "contract length must equal m");
        let payments: Vec<Rational> = (0..self.n()).map(|i| self.expected_payment(i, contract)).collect();
        best_response_from_profile(&self.rewards(), &payments, &self.costs())
    }

    /// Principal's payoff under `contract`; opting out yields zero.
    pub fn principal_payoff(&self, contract: &Contract) -> Rational {
        self.best_response(contract).principal_payoff
    }

    /// Linear contract `t_j = alpha * x_j` over this outcome set.
    pub fn linear_contract(&self, alpha: &Rational) -> Contract {
        Contract {
            payments: self.outcomes.iter().map(|x| alpha * x).collect(),
        }
    }
}

/// Validates raw outcome and action data into an [`Instance`].
pub fn build_instance(
    outcomes: Vec<Rational>,
    actions: Vec<(Vec<Rational>, Rational)>,
) -> Result<Instance, ModelError> {
    let actions = actions
        .into_iter()
        .map(|(probs, cost)| Action::new(probs, cost))
        .collect::<Result<Vec<_>, _>>()?;
    Instance::new(outcomes, actions)
}

/// Nonnegative payment per outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Contract {
    payments: Vec<Rational>,
}

impl Contract {
    /// Enforces limited liability.
    pub fn new(payments: Vec<Rational>) -> Result<Self, ModelError> {
        if let Some(t) = payments.iter().find(|t| t.is_negative()) {
            return Err(ModelError::NegativePayment(t.clone()));
        }
        Ok(Self { payments })
    }

    pub fn zero(m: usize) -> Self {
        Self {
            payments: vec![Rational::zero(); m],
        }
    }

    pub fn payments(&self) -> &[Rational] {
        &self.payments
    }

    pub fn len(&self) -> usize {
        self.payments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payments.is_empty()
    }

    /// Count of strictly positive payments.
    pub fn positive_count(&self) -> usize {
        self.payments.iter().filter(|t| t.is_positive()).count()
    }

    /// Payments nondecreasing in the outcome index.
    pub fn is_monotone(&self) -> bool {
        self.payments.windows(2).all(|w| w[0] <= w[1])
    }

    pub(crate) fn from_vec_unchecked(payments: Vec<Rational>) -> Self {
        debug_assert!(payments.iter().all(|t| !t.is_negative()));
        Self { payments }
    }
}

/// `t_j = alpha * x_j` with `0 <= alpha <= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearContract {
    alpha: Rational,
}

impl LinearContract {
    pub fn new(alpha: Rational) -> Result<Self, ModelError> {
        if alpha.is_negative() || alpha > Rational::one() {
            return Err(ModelError::ParameterOutOfRange {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn to_contract(&self, outcomes: &[Rational]) -> Contract {
        Contract::from_vec_unchecked(outcomes.iter().map(|x| &self.alpha * x).collect())
    }
}

/// `t_j = alpha0 + alpha1 * x_j` with both parameters nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineContract {
    alpha0: Rational,
    alpha1: Rational,
}

impl AffineContract {
    pub fn new(alpha0: Rational, alpha1: Rational) -> Result<Self, ModelError> {
        if alpha0.is_negative() {
            return Err(ModelError::ParameterOutOfRange {
                name: "alpha0",
                value: alpha0,
            });
        }
        if alpha1.is_negative() {
            return Err(ModelError::ParameterOutOfRange {
                name: "alpha1",
                value: alpha1,
            });
        }
        Ok(Self { alpha0, alpha1 })
    }

    pub fn alpha0(&self) -> &Rational {
        &self.alpha0
    }

    pub fn alpha1(&self) -> &Rational {
        &self.alpha1
    }

    /// Expected payment for any distribution with mean `reward`.
    pub fn payment_at(&self, reward: &Rational) -> Rational {
        &self.alpha0 + &self.alpha1 * reward
    }

    pub fn to_contract(&self, outcomes: &[Rational]) -> Contract {
        Contract::from_vec_unchecked(outcomes.iter().map(|x| self.payment_at(x)).collect())
    }
}

/// What the agent does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    Action(usize),
    OptOut,
}

impl Choice {
    pub fn action(self) -> Option<usize> {
        match self {
            Choice::Action(i) => Some(i),
            Choice::OptOut => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponse {
    pub choice: Choice,
    pub agent_utility: Rational,
    pub principal_payoff: Rational,
}

/// Agent best response from per-action expected rewards, payments, and
/// costs.
///
/// Maximizes `payment - cost`; ties go to the higher principal payoff
/// `reward - payment`, then to the lowest index. Opts out iff every
/// utility is negative.
pub fn best_response_from_profile(rewards: &[Rational], payments: &[Rational], costs: &[Rational]) -> BestResponse {
    assert!(!rewards.is_empty());
    assert_eq!(rewards.len(), payments.len());
    assert_eq!(rewards.len(), costs.len());
    let mut best: Option<(usize, Rational, Rational)> = None;
    for i in 0..rewards.len() {
        let utility = &payments[i] - &costs[i];
        let payoff = &rewards[i] - &payments[i];
        let better = match &best {
            None => true,
            Some((_, u, p)) => utility > *u || (utility == *u && payoff > *p),
        };
        if better {
            best = Some((i, utility, payoff));
        }
    }
    let (index, utility, payoff) = best.expect("nonempty action set");
    if utility.is_negative() {
        BestResponse {
            choice: Choice::OptOut,
            agent_utility: Rational::zero(),
            principal_payoff: Rational::zero(),
        }
    } else {
        BestResponse {
            choice: Choice::Action(index),
            agent_utility: utility,
            principal_payoff: payoff,
        }
    }
}

/// Indices whose agent utility equals the maximum (the IC set), empty when
/// that maximum is negative (no IR action).
pub fn incentive_compatible_set(payments: &[Rational], costs: &[Rational]) -> Vec<usize> {
    let utilities: Vec<Rational> = payments.iter().zip(costs).map(|(t, c)| t - c).collect();
    let max = utilities.iter().max().expect("nonempty");
    if max.is_negative() {
        return Vec::new();
    }
    (0..utilities.len()).filter(|&i| utilities[i] == *max).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{example11, example12};
    use crate::rational::{int, ratio};

    #[test]
    fn example11_flags() {
        let inst = example11();
        let flags = inst.flags();
        assert!(flags.a1 && flags.a2 && flags.a3);
        assert!(!flags.a4);
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.m(), 6);
    }

    #[test]
    fn degenerate_one_point_instance() {
        let inst = build_instance(vec![int(0)], vec![(vec![int(1)], int(0))]).unwrap();
        assert!(inst.flags().a3 && inst.flags().a4);
        assert_eq!(inst.expected_reward(0), int(0));
    }

    #[test]
    fn identical_actions_violate_a1() {
        let p = vec![ratio(1, 2), ratio(1, 2)];
        let inst = build_instance(vec![int(0), int(1)], vec![(p.clone(), int(1)), (p, int(1))]).unwrap();
        assert!(!inst.flags().a1);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let bad_sum = build_instance(vec![int(0), int(1)], vec![(vec![ratio(1, 2), ratio(1, 3)], int(0))]);
        assert!(matches!(bad_sum, Err(ModelError::MalformedInstance(_))));
        let negative = build_instance(vec![int(0), int(1)], vec![(vec![int(2), int(-1)], int(0))]);
        assert!(negative.is_err());
        let neg_cost = build_instance(vec![int(1)], vec![(vec![int(1)], int(-1))]);
        assert!(neg_cost.is_err());
        let neg_outcome = build_instance(vec![int(-1)], vec![(vec![int(1)], int(0))]);
        assert!(neg_outcome.is_err());
        let unreached = build_instance(vec![int(0), int(1)], vec![(vec![int(1), int(0)], int(0))]);
        assert!(unreached.is_err());
        assert!(build_instance(vec![], vec![]).is_err());
    }

    #[test]
    fn unsorted_outcomes_are_canonicalized() {
        let inst = build_instance(
            vec![int(3), int(1)],
            vec![(vec![int(0), int(1)], int(0)), (vec![int(1), int(0)], ratio(4, 3))],
        )
        .unwrap();
        assert_eq!(inst, example12());
    }

    #[test]
    fn expected_reward_examples() {
        assert_eq!(example11().expected_reward(2), ratio(399, 80));
        assert_eq!(example12().expected_reward(1), int(3));
        let point = build_instance(
            vec![int(1), int(5)],
            vec![(vec![int(1), int(0)], int(0)), (vec![int(0), int(1)], int(1))],
        )
        .unwrap();
        assert_eq!(point.expected_reward(1), int(5));
    }

    #[test]
    fn expected_payment_examples() {
        let inst = example12();
        assert_eq!(inst.expected_payment(0, &Contract::zero(2)), int(0));
        let t = Contract::new(vec![int(0), ratio(4, 3)]).unwrap();
        assert_eq!(inst.expected_payment(1, &t), ratio(4, 3));
        let linear = LinearContract::new(ratio(1, 3)).unwrap().to_contract(inst.outcomes());
        assert_eq!(inst.expected_payment(1, &linear), int(1));
    }

    #[test]
    fn principal_payoff_examples() {
        let inst = example12();
        let t = Contract::new(vec![int(0), ratio(4, 3)]).unwrap();
        assert_eq!(inst.principal_payoff(&t), ratio(5, 3));
        assert_eq!(inst.principal_payoff(&Contract::zero(2)), int(1));
        assert_eq!(inst.welfare(1), ratio(5, 3));
    }

    #[test]
    fn zero_contract_picks_zero_cost_action() {
        let br = example11().best_response(&Contract::zero(6));
        assert_eq!(br.choice, Choice::Action(0));
        assert_eq!(br.agent_utility, int(0));
    }

    #[test]
    fn opt_out_when_all_utilities_negative() {
        let inst = build_instance(vec![int(1)], vec![(vec![int(1)], int(1))]).unwrap();
        let br = inst.best_response(&Contract::zero(1));
        assert_eq!(br.choice, Choice::OptOut);
        assert_eq!(br.principal_payoff, int(0));
    }

    #[test]
    fn ties_go_to_principal_then_lowest_index() {
        let rewards = [int(1), int(3), int(3)];
        let payments = [int(0), int(1), int(1)];
        let costs = [int(0), int(1), int(1)];
        let br = best_response_from_profile(&rewards, &payments, &costs);
        assert_eq!(br.choice, Choice::Action(1));
        assert_eq!(br.principal_payoff, int(2));
    }

    #[test]
    fn contract_types_enforce_ranges() {
        assert!(Contract::new(vec![int(-1)]).is_err());
        assert!(LinearContract::new(ratio(3, 2)).is_err());
        assert!(LinearContract::new(ratio(-1, 2)).is_err());
        assert!(AffineContract::new(int(-1), int(0)).is_err());
        let aff = AffineContract::new(ratio(1, 4), ratio(1, 2)).unwrap();
        assert_eq!(aff.payment_at(&int(2)), ratio(5, 4));
    }
}
