//! Distributional regularity: likelihood ratios, stochastic dominance and
//! the concavity-of-distribution-function property.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::ContractError;
use crate::model::Instance;
use crate::rational::Rational;

/// `true` iff `f` first-order stochastically dominates `g`: every prefix
/// sum of `f` is at most the matching prefix sum of `g`.
pub fn fosd_check(f: &[Rational], g: &[Rational]) -> Result<bool, ContractError> {
    if f.len() != g.len() {
        return Err(ContractError::LengthMismatch(f.len(), g.len()));
    }
    let mut cf = Rational::zero();
    let mut cg = Rational::zero();
    for (a, b) in f.iter().zip(g) {
        cf += a;
        cg += b;
        if cf > cg {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares `n1 / d1` with `n2 / d2`, reading `x / 0` as `+inf`.
fn ratio_cmp(n1: &Rational, d1: &Rational, n2: &Rational, d2: &Rational) -> Ordering {
    match (d1.is_zero(), d2.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => (n1 * d2).cmp(&(n2 * d1)),
    }
}

/// `true` iff `high[j] / low[j]` is nondecreasing in `j`, skipping positions
/// where both are zero and reading `x / 0` as `+inf`.
pub fn likelihood_ratio_increasing(high: &[Rational], low: &[Rational]) -> bool {
    let support: Vec<usize> = (0..high.len())
        .filter(|&j| !(high[j].is_zero() && low[j].is_zero()))
        .collect();
    support.windows(2).all(|w| {
        let (j, k) = (w[0], w[1]);
        ratio_cmp(&high[j], &low[j], &high[k], &low[k]) != Ordering::Greater
    })
}

/// MLRP: every pair with `c_a < c_a'` has `F_a' / F_a` nondecreasing.
pub fn mlrp_check(instance: &Instance) -> bool {
    let n = instance.n();
    (0..n).all(|a| {
        (0..n).all(|b| {
            instance.cost(a) >= instance.cost(b)
                || likelihood_ratio_increasing(instance.action(b).probs(), instance.action(a).probs())
        })
    })
}

/// A bracketing pair whose cost-matched mixture is not dominated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdfpViolation {
    pub low: usize,
    pub action: usize,
    pub high: usize,
    /// Weight on `low` in the mixture.
    pub lambda: Rational,
}

/// CDFP for one action: `F_a` dominates `lambda F_low + (1 - lambda) F_high`
/// for every pair bracketing `c_a`. Equal-cost brackets are checked at
/// `lambda = 0` and `lambda = 1`.
pub fn cdfp_check(instance: &Instance, action: usize) -> Option<CdfpViolation> {
    let ca = instance.cost(action);
    let fa = instance.action(action).probs();
    let others = (0..instance.n()).filter(|&k| k != action);
    for low in others.clone() {
        for high in others.clone() {
            if low == high {
                continue;
            }
            let (cl, ch) = (instance.cost(low), instance.cost(high));
            if !(cl <= ca && ca <= ch) {
                continue;
            }
            let lambdas = if cl == ch {
                vec![Rational::zero(), Rational::one()]
            } else {
                vec![(ch - ca) / (ch - cl)]
            };
            for lambda in lambdas {
                let mix: Vec<Rational> = instance
                    .action(low)
                    .probs()
                    .iter()
                    .zip(instance.action(high).probs())
                    .map(|(p, q)| &lambda * p + (Rational::one() - &lambda) * q)
                    .collect();
                if !fosd_check(fa, &mix).expect("equal lengths") {
                    return Some(CdfpViolation {
                        low,
                        action,
                        high,
                        lambda,
                    });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub mlrp: bool,
    /// `fosd_pairs[a][b]`: `F_a` dominates `F_b`.
    pub fosd_pairs: Vec<Vec<bool>>,
    pub cdfp: bool,
    pub cdfp_violation: Option<CdfpViolation>,
}

pub fn regularity_report(instance: &Instance) -> RegularityReport {
    let n = instance.n();
    let fosd_pairs = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| fosd_check(instance.action(a).probs(), instance.action(b).probs()).expect("equal lengths"))
                .collect()
        })
        .collect();
    let cdfp_violation = (0..n).find_map(|a| cdfp_check(instance, a));
    RegularityReport {
        mlrp: mlrp_check(instance),
        fosd_pairs,
        cdfp: cdfp_violation.is_none(),
        cdfp_violation,
    }
}
