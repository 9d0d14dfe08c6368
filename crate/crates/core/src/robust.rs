//! Ambiguous settings: only each action's expected reward and cost are
//! known, and nature picks any compatible outcome distributions.
//!
//! The adversary here searches two-point distributions over bracketing
//! outcome pairs, which gives an upper bound on the true worst case. The
//! affine-reduction construction builds its witnesses from the same
//! family, so the bound is enough to exercise the optimality of linear
//! contracts.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contracts::envelope::{best_linear_from_profile, LinearChoice};
use crate::error::{AmbiguityViolation, RobustError};
use crate::model::{best_response_from_profile, AffineContract, BestResponse, Choice, Contract};
use crate::rational::{int, ratio, Rational};

/// Outcomes `0 = x_1 < ... < x_m` (`m >= 3`) and `(R_i, c_i)` per action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguousInstance {
    outcomes: Vec<Rational>,
    rewards: Vec<Rational>,
    costs: Vec<Rational>,
}

/// Validates an ambiguous instance. Outcomes must be strictly increasing
/// and some action must be free.
pub fn check_ambiguous(
    outcomes: Vec<Rational>,
    actions: Vec<(Rational, Rational)>,
) -> Result<AmbiguousInstance, RobustError> {
    use AmbiguityViolation::*;
    if actions.is_empty() {
        return Err(NoActions.into());
    }
    if outcomes.len() < 3 {
        return Err(TooFewOutcomes.into());
    }
    if outcomes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Unsorted.into());
    }
    if !outcomes[0].is_zero() {
        return Err(LowestOutcomeNonzero.into());
    }
    let top = outcomes.last().unwrap();
    for (i, (r, c)) in actions.iter().enumerate() {
        if r.is_negative() || r > top {
            return Err(RewardOutOfRange(i).into());
        }
        if c.is_negative() {
            return Err(NegativeCost(i).into());
        }
    }
    if !actions.iter().any(|(_, c)| c.is_zero()) {
        return Err(NoZeroCostAction.into());
    }
    let (rewards, costs) = actions.into_iter().unzip();
    Ok(AmbiguousInstance {
        outcomes,
        rewards,
        costs,
    })
}

impl AmbiguousInstance {
    pub fn n(&self) -> usize {
        self.rewards.len()
    }

    pub fn m(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[Rational] {
        &self.outcomes
    }

    pub fn rewards(&self) -> &[Rational] {
        &self.rewards
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    fn top(&self) -> &Rational {
        self.outcomes.last().unwrap()
    }

    fn respond(&self, payments: &[Rational]) -> BestResponse {
        best_response_from_profile(&self.rewards, payments, &self.costs)
    }

    /// Agent response to an affine contract; independent of distributions.
    pub fn affine_response(&self, affine: &AffineContract) -> BestResponse {
        let payments: Vec<Rational> = self.rewards.iter().map(|r| affine.payment_at(r)).collect();
        self.respond(&payments)
    }

    /// Agent response to `contract` when action `i` follows `dists[i]`.
    pub fn response_under(&self, contract: &Contract, dists: &[TwoPoint]) -> BestResponse {
        let payments: Vec<Rational> = dists.iter().map(|d| d.payment(contract)).collect();
        self.respond(&payments)
    }
}

/// Distribution on `{x_low, x_high}` with `weight` on `x_high`; a point
/// mass when `low == high`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoPoint {
    pub low: usize,
    pub high: usize,
    pub weight: Rational,
}

impl TwoPoint {
    /// The unique distribution on `{x_low, x_high}` with mean `reward`.
    pub fn with_mean(outcomes: &[Rational], low: usize, high: usize, reward: &Rational) -> Self {
        let weight = if low == high {
            Rational::zero()
        } else {
            (reward - &outcomes[low]) / (&outcomes[high] - &outcomes[low])
        };
        Self { low, high, weight }
    }

    pub fn probs(&self, m: usize) -> Vec<Rational> {
        let mut p = vec![Rational::zero(); m];
        p[self.low] += Rational::one() - &self.weight;
        p[self.high] += &self.weight;
        p
    }

    pub fn mean(&self, outcomes: &[Rational]) -> Rational {
        (Rational::one() - &self.weight) * &outcomes[self.low] + &self.weight * &outcomes[self.high]
    }

    pub fn payment(&self, contract: &Contract) -> Rational {
        let t = contract.payments();
        (Rational::one() - &self.weight) * &t[self.low] + &self.weight * &t[self.high]
    }

    /// Mean matches, support lies in the outcome set, weight in `[0, 1]`.
    pub fn is_compatible(&self, outcomes: &[Rational], reward: &Rational) -> bool {
        self.low <= self.high
            && self.high < outcomes.len()
            && !self.weight.is_negative()
            && self.weight <= Rational::one()
            && self.mean(outcomes) == *reward
    }
}

/// Which two-point distributions the adversary may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdversaryMenu {
    /// Every outcome pair bracketing the mean, plus point masses.
    #[default]
    Full,
    /// Only the extreme pair `{x_1, x_m}`.
    Extremes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdversaryConfig {
    pub cap: u128,
    pub menu: AdversaryMenu,
}

impl Default for AdversaryConfig {
    fn default() -> Self {
        Self {
            cap: 100_000,
            menu: AdversaryMenu::Full,
        }
    }
}

fn menu_for(amb: &AmbiguousInstance, reward: &Rational, menu: AdversaryMenu) -> Vec<TwoPoint> {
    let x = &amb.outcomes;
    let m = x.len();
    match menu {
        AdversaryMenu::Extremes => vec![TwoPoint::with_mean(x, 0, m - 1, reward)],
        AdversaryMenu::Full => {
            let mut out = Vec::new();
            for j in 0..m {
                if x[j] == *reward {
                    out.push(TwoPoint::with_mean(x, j, j, reward));
                }
            }
            for j in 0..m {
                for k in j + 1..m {
                    if x[j] < *reward && *reward < x[k] {
                        out.push(TwoPoint::with_mean(x, j, k, reward));
                    }
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryOutcome {
    pub payoff: Rational,
    pub distributions: Vec<TwoPoint>,
    pub choice: Choice,
}

fn check_len(amb: &AmbiguousInstance, contract: &Contract) -> Result<(), RobustError> {
    if contract.len() != amb.m() {
        return Err(RobustError::ContractLength {
            expected: amb.m(),
            got: contract.len(),
        });
    }
    Ok(())
}

/// Minimum principal payoff of `contract` over every assignment of menu
/// distributions to actions. Ties keep the first assignment in
/// lexicographic menu order.
pub fn two_point_adversary(
    amb: &AmbiguousInstance,
    contract: &Contract,
    config: &AdversaryConfig,
) -> Result<AdversaryOutcome, RobustError> {
    check_len(amb, contract)?;
    let menus: Vec<Vec<TwoPoint>> = amb.rewards.iter().map(|r| menu_for(amb, r, config.menu)).collect();
    let count = menus
        .iter()
        .try_fold(1u128, |acc, m| acc.checked_mul(m.len() as u128))
        .unwrap_or(u128::MAX);
    if count > config.cap {
        return Err(RobustError::SizeLimit { count, cap: config.cap });
    }
    let pay: Vec<Vec<Rational>> = menus
        .iter()
        .map(|m| m.iter().map(|d| d.payment(contract)).collect())
        .collect();
    let n = amb.n();
    let mut idx = vec![0usize; n];
    let mut best: Option<(Rational, Vec<usize>, Choice)> = None;
    loop {
        let payments: Vec<Rational> = (0..n).map(|i| pay[i][idx[i]].clone()).collect();
        let br = amb.respond(&payments);
        if best.as_ref().is_none_or(|(p, _, _)| br.principal_payoff < *p) {
            best = Some((br.principal_payoff, idx.clone(), br.choice));
        }
        // Odometer step, last action fastest.
        let mut k = n;
        loop {
            if k == 0 {
                let (payoff, idx, choice) = best.expect("at least one assignment");
                let distributions = idx.iter().enumerate().map(|(i, &j)| menus[i][j].clone()).collect();
                return Ok(AdversaryOutcome {
                    payoff,
                    distributions,
                    choice,
                });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < menus[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Worst-case optimal linear contract; its payoff does not depend on the
/// distributions.
pub fn linear_worst_case(amb: &AmbiguousInstance) -> LinearChoice {
    best_linear_from_profile(&amb.rewards, &amb.costs)
}

/// Line `y = intercept + slope * x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub intercept: Rational,
    pub slope: Rational,
}

impl Line {
    fn through(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        Self { intercept, slope }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.intercept + &self.slope * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionCase {
    /// `t_1 > t_m`: every action on the extremes, zero contract.
    Downward,
    /// `t` already affine.
    Identity,
    /// Pivot strictly above the chord `l1`.
    Above,
    /// Pivot strictly below the chord `l1`.
    Below,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustConstruction {
    pub case: ConstructionCase,
    pub pivot: Option<usize>,
    pub l1: Line,
    pub l2: Option<Line>,
    pub l3: Option<Line>,
    pub affine: AffineContract,
    pub distributions: Vec<TwoPoint>,
    pub affine_response: BestResponse,
    /// Response to the input contract under `distributions`.
    pub contract_response: BestResponse,
}

fn extremes(amb: &AmbiguousInstance, r: &Rational) -> TwoPoint {
    TwoPoint::with_mean(&amb.outcomes, 0, amb.m() - 1, r)
}

fn through_pivot(amb: &AmbiguousInstance, j: usize, r: &Rational) -> TwoPoint {
    if *r <= amb.outcomes[j] {
        TwoPoint::with_mean(&amb.outcomes, 0, j, r)
    } else {
        TwoPoint::with_mean(&amb.outcomes, j, amb.m() - 1, r)
    }
}

/// Builds compatible distributions and an affine contract whose payoff is
/// at least that of `contract` under those distributions. The inequality
/// and compatibility are checked before returning.
pub fn lemma42_construct(amb: &AmbiguousInstance, contract: &Contract) -> Result<RobustConstruction, RobustError> {
    check_len(amb, contract)?;
    let x = &amb.outcomes;
    let t = contract.payments();
    let m = amb.m();
    let l1 = Line::through(&x[0], &t[0], &x[m - 1], &t[m - 1]);
    let fprime: Vec<TwoPoint> = amb.rewards.iter().map(|r| extremes(amb, r)).collect();

    let (case, pivot, l2, l3, affine, distributions) = if t[0] > t[m - 1] {
        let affine = AffineContract::new(Rational::zero(), Rational::zero()).expect("zero");
        (ConstructionCase::Downward, None, None, None, affine, fprime)
    } else {
        let affine = AffineContract::new(l1.intercept.clone(), l1.slope.clone())
            .map_err(|e| RobustError::ConstructionFailed(e.to_string()))?;
        let gaps: Vec<Rational> = (1..m - 1).map(|j| &t[j] - l1.at(&x[j])).collect();
        let mut pivot: Option<usize> = None;
        for (k, g) in gaps.iter().enumerate() {
            if !g.is_zero() && pivot.is_none_or(|p| g.abs() > gaps[p - 1].abs()) {
                pivot = Some(k + 1);
            }
        }
        match pivot {
            None => (ConstructionCase::Identity, None, None, None, affine, fprime),
            Some(j) => {
                let l2 = Line::through(&x[0], &t[0], &x[j], &t[j]);
                let l3 = Line::through(&x[j], &t[j], &x[m - 1], &t[m - 1]);
                let target = amb
                    .affine_response(&affine)
                    .choice
                    .action()
                    .ok_or_else(|| RobustError::ConstructionFailed("affine contract is refused".into()))?;
                let above = gaps[j - 1].is_positive();
                let distributions = (0..amb.n())
                    .map(|i| {
                        let r = &amb.rewards[i];
                        if (i == target) == above {
                            through_pivot(amb, j, r)
                        } else {
                            extremes(amb, r)
                        }
                    })
                    .collect();
                let case = if above {
                    ConstructionCase::Above
                } else {
                    ConstructionCase::Below
                };
                (case, Some(j), Some(l2), Some(l3), affine, distributions)
            }
        }
    };

    for (d, r) in distributions.iter().zip(&amb.rewards) {
        if !d.is_compatible(x, r) {
            return Err(RobustError::ConstructionFailed(format!(
                "distribution {d:?} does not have mean {r}"
            )));
        }
    }
    let affine_response = amb.affine_response(&affine);
    let contract_response = amb.response_under(contract, &distributions);
    if affine_response.principal_payoff < contract_response.principal_payoff {
        return Err(RobustError::ConstructionFailed(format!(
            "affine payoff {} is below the contract's {}",
            affine_response.principal_payoff, contract_response.principal_payoff
        )));
    }
    Ok(RobustConstruction {
        case,
        pivot,
        l1,
        l2,
        l3,
        affine,
        distributions,
        affine_response,
        contract_response,
    })
}

/// Per-sample outcome of the worst-case optimality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCheck {
    pub contract: Contract,
    pub adversary: AdversaryOutcome,
    pub construction: RobustConstruction,
    /// Payoff of the linear contract with the affine slope.
    pub slope_linear_payoff: Rational,
    /// Linear worst case is at least the adversary payoff.
    pub linear_beats_adversary: bool,
    /// Affine payoff is at least the contract payoff under the constructed
    /// distributions.
    pub affine_dominates: bool,
    /// The adversary does at least as well as the constructed distributions.
    pub adversary_within_construction: bool,
    /// Dropping the intercept keeps the action and adds exactly `alpha0`.
    pub intercept_shift: bool,
    /// Linear worst case is at least the slope-matched linear payoff.
    pub linear_beats_slope: bool,
}

impl SampleCheck {
    pub fn passed(&self) -> bool {
        self.linear_beats_adversary
            && self.affine_dominates
            && self.adversary_within_construction
            && self.intercept_shift
            && self.linear_beats_slope
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessReport {
    pub linear: LinearChoice,
    pub samples: Vec<SampleCheck>,
}

impl RobustnessReport {
    pub fn passed(&self) -> bool {
        self.samples.iter().all(SampleCheck::passed)
    }
}

/// Runs the adversary and the affine construction on every sample and
/// checks the chain of inequalities back to the best linear contract.
pub fn verify_theorem_4_1(
    amb: &AmbiguousInstance,
    samples: &[Contract],
    config: &AdversaryConfig,
) -> Result<RobustnessReport, RobustError> {
    let linear = linear_worst_case(amb);
    let mut checks = Vec::with_capacity(samples.len());
    for t in samples {
        let adversary = two_point_adversary(amb, t, config)?;
        let construction = lemma42_construct(amb, t)?;
        let slope = construction.affine.alpha1();
        let slope_payments: Vec<Rational> = amb.rewards.iter().map(|r| slope * r).collect();
        let slope_resp = amb.respond(&slope_payments);
        let aff = &construction.affine_response;
        let intercept_shift = slope_resp.choice == aff.choice
            && slope_resp.principal_payoff == &aff.principal_payoff + construction.affine.alpha0();
        checks.push(SampleCheck {
            contract: t.clone(),
            linear_beats_adversary: linear.payoff >= adversary.payoff,
            affine_dominates: aff.principal_payoff >= construction.contract_response.principal_payoff,
            adversary_within_construction: adversary.payoff <= construction.contract_response.principal_payoff,
            intercept_shift,
            linear_beats_slope: linear.payoff >= slope_resp.principal_payoff,
            slope_linear_payoff: slope_resp.principal_payoff,
            adversary,
            construction,
        });
    }
    Ok(RobustnessReport {
        linear,
        samples: checks,
    })
}

/// Seeded contract sample: the first half from the grid
/// `{0, x_m/4, x_m/2, x_m}^m`, the rest random rationals in `[0, x_m]`.
pub fn sample_contracts(amb: &AmbiguousInstance, count: usize, seed: u64) -> Vec<Contract> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = amb.top().clone();
    let grid = [int(0), ratio(1, 4), ratio(1, 2), int(1)];
    (0..count)
        .map(|k| {
            let payments = (0..amb.m())
                .map(|_| {
                    if k < count.div_ceil(2) {
                        &grid[rng.gen_range(0..grid.len())] * &top
                    } else {
                        let den = rng.gen_range(1..=8);
                        ratio(rng.gen_range(0..=den), den) * &top
                    }
                })
                .collect();
            Contract::new(payments).expect("nonnegative")
        })
        .collect()
}
