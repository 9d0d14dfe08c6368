//! Approximation-ratio audit of linear contracts against the optimum.

use num_traits::{One, Signed, Zero};

use crate::contracts::{best_linear, best_monotone, optimal_contract, upper_envelope};
use crate::error::ContractError;
use crate::model::Instance;
use crate::rational::{int, Rational};

/// Number of nonempty doubling buckets `[1,2), [2,4), ...` after dividing
/// every value by `base`.
pub fn doubling_buckets(values: &[Rational], base: &Rational) -> usize {
    let mut seen: Vec<u32> = values
        .iter()
        .map(|v| {
            let mut scaled = v / base;
            let mut k = 0;
            while scaled >= int(2) {
                scaled /= int(2);
                k += 1;
            }
            k
        })
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Pass/fail per audited bound; `None` where the bound does not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundChecks {
    pub le_n: Option<bool>,
    pub le_2k: Option<bool>,
    pub le_4l: Option<bool>,
    pub le_welfare: bool,
    pub sparse_ok: bool,
}

impl BoundChecks {
    pub fn all_pass(&self) -> bool {
        [self.le_n, self.le_2k, self.le_4l].iter().all(|c| *c != Some(false)) && self.le_welfare && self.sparse_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub n: usize,
    pub m: usize,
    pub opt_payoff: Rational,
    pub opt_action: usize,
    pub opt_positive_payments: usize,
    /// `None` when the envelope assumptions fail.
    pub linear_payoff: Option<Rational>,
    pub monotone_payoff: Rational,
    /// `opt / linear`, when the linear payoff is positive.
    pub rho: Option<Rational>,
    /// Size of the linearly implementable set.
    pub big_n: Option<usize>,
    /// Nonempty reward buckets over actions with positive reward.
    pub k: usize,
    /// Nonempty cost buckets over positive-cost actions.
    pub l: usize,
    /// `l`, plus one bucket for the zero-cost actions when there are any.
    pub l_with_zero: usize,
    /// Reward range `max R / min R` over positive rewards.
    pub h: Option<Rational>,
    /// Cost range `max c / min c` over positive costs.
    pub c_range: Option<Rational>,
    pub reward_scale: Option<Rational>,
    pub cost_scale: Option<Rational>,
    pub checks: BoundChecks,
}

fn positive_range(values: &[Rational]) -> (Vec<Rational>, Option<Rational>, Option<Rational>) {
    let pos: Vec<Rational> = values.iter().filter(|v| v.is_positive()).cloned().collect();
    let min = pos.iter().min().cloned();
    let range = min.as_ref().map(|lo| pos.iter().max().unwrap() / lo);
    (pos, min, range)
}

/// Computes optimal, linear and monotone payoffs and checks the ratio
/// bounds. Without A1-A3 only the optimum/monotone comparisons and the
/// welfare and sparsity checks run.
pub fn audit_ratio(instance: &Instance) -> Result<AuditReport, ContractError> {
    let opt = optimal_contract(instance)?;
    let monotone = best_monotone(instance)?;
    let (linear, big_n, welfare_cap) = match upper_envelope(instance) {
        Ok(env) => {
            let top = *env.implementable_set().last().expect("nonempty under A3");
            (
                Some(best_linear(instance)?.payoff),
                Some(env.len()),
                instance.welfare(top),
            )
        }
        Err(_) => {
            let best = (0..instance.n()).map(|i| instance.welfare(i)).max().unwrap();
            (None, None, best)
        }
    };

    let (pos_r, reward_scale, h) = positive_range(&instance.rewards());
    let (pos_c, cost_scale, c_range) = positive_range(&instance.costs());
    let k = reward_scale.as_ref().map_or(0, |s| doubling_buckets(&pos_r, s));
    let l = cost_scale.as_ref().map_or(0, |s| doubling_buckets(&pos_c, s));
    let has_free = instance.costs().iter().any(|c| c.is_zero());
    let l_with_zero = l + usize::from(has_free);

    let rho = linear.as_ref().filter(|a| a.is_positive()).map(|a| &opt.payoff / a);
    let bound = |factor: usize| linear.as_ref().map(|a| opt.payoff <= int(factor as i64) * a);
    let checks = BoundChecks {
        le_n: big_n.and_then(&bound),
        le_2k: if k > 0 { bound(2 * k) } else { None },
        le_4l: if l > 0 { bound(4 * l) } else { None },
        le_welfare: opt.payoff <= welfare_cap,
        sparse_ok: opt.contract.positive_count() <= instance.n() - 1 + usize::from(!instance.flags().a3),
    };
    Ok(AuditReport {
        n: instance.n(),
        m: instance.m(),
        opt_positive_payments: opt.contract.positive_count(),
        opt_payoff: opt.payoff,
        opt_action: opt.action,
        linear_payoff: linear,
        monotone_payoff: monotone.payoff,
        rho,
        big_n,
        k,
        l,
        l_with_zero,
        h,
        c_range,
        reward_scale,
        cost_scale,
        checks,
    })
}

impl AuditReport {
    /// `rho` or 1 when both payoffs vanish.
    pub fn ratio_or_one(&self) -> Option<Rational> {
        match (&self.rho, &self.linear_payoff) {
            (Some(r), _) => Some(r.clone()),
            (None, Some(a)) if a.is_zero() && self.opt_payoff.is_zero() => Some(Rational::one()),
            _ => None,
        }
    }
}
