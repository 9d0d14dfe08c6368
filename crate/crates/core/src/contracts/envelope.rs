//! Upper envelope of the agent-utility lines `alpha * R_i - c_i` over
//! `alpha` in `[0, 1]`.

use num_traits::{One, Signed, Zero};

use crate::error::ContractError;
use crate::model::{best_response_from_profile, Assumption, Choice, Instance};
use crate::rational::Rational;

/// Maximal interval of `alpha` on which one action attains the envelope.
/// Covers `[alpha_lo, alpha_hi)`, except the last segment, which is closed
/// at `alpha_hi = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub alpha_lo: Rational,
    pub alpha_hi: Rational,
    pub action: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub segments: Vec<Segment>,
}

impl Envelope {
    /// `alpha_i` for each linearly implementable action, ascending.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.segments.iter().map(|s| s.alpha_lo.clone()).collect()
    }

    /// The linearly implementable actions in increasing reward order.
    pub fn implementable_set(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.action).collect()
    }

    /// Size of the implementable set (`N`).
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Action on the envelope at `alpha`; `None` where it is negative.
    pub fn lookup(&self, alpha: &Rational) -> Option<usize> {
        if alpha.is_negative() || *alpha > Rational::one() {
            return None;
        }
        self.segments
            .iter()
            .rev()
            .find(|s| s.alpha_lo <= *alpha)
            .map(|s| s.action)
    }
}

/// Envelope pieces of the lines `slope_i * alpha - cost_i` restricted to
/// `[0, 1]` and to where the maximum is nonnegative. Ties between lines go
/// to the larger slope, then to the lower index. Slopes must be
/// nonnegative.
pub(crate) fn upper_hull(slopes: &[Rational], costs: &[Rational]) -> Vec<Segment> {
    debug_assert_eq!(slopes.len(), costs.len());
    debug_assert!(slopes.iter().all(|s| !s.is_negative()));
    let mut order: Vec<usize> = (0..slopes.len()).collect();
    // Ascending slope; among equal slopes the cheapest (then lowest index)
    // comes last so the dedup below keeps it.
    order.sort_by(|&a, &b| {
        slopes[a]
            .cmp(&slopes[b])
            .then_with(|| costs[b].cmp(&costs[a]))
            .then_with(|| b.cmp(&a))
    });
    let mut lines: Vec<usize> = Vec::new();
    for &i in &order {
        if let Some(&last) = lines.last() {
            if slopes[last] == slopes[i] {
                lines.pop();
            }
        }
        lines.push(i);
    }

    // x where line b overtakes line a (slope b > slope a).
    let cross = |a: usize, b: usize| (&costs[b] - &costs[a]) / (&slopes[b] - &slopes[a]);
    let mut hull: Vec<usize> = Vec::new();
    for &l in &lines {
        while hull.len() >= 2 {
            let (p, q) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if cross(p, l) <= cross(p, q) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }

    let zero = Rational::zero();
    let one = Rational::one();
    let mut segments = Vec::new();
    for (k, &line) in hull.iter().enumerate() {
        let lo = if k == 0 { None } else { Some(cross(hull[k - 1], line)) };
        let hi = hull.get(k + 1).map(|&next| cross(line, next));
        let mut lo = lo.map_or(zero.clone(), |x| x.max(zero.clone()));
        let is_last = hi.as_ref().is_none_or(|h| *h > one);
        let hi = if is_last { one.clone() } else { hi.unwrap() };
        if lo > one || (!is_last && hi <= lo) {
            continue;
        }
        // Clip where the line is negative: value >= 0 iff alpha >= c / s.
        if slopes[line].is_zero() {
            if costs[line].is_positive() {
                continue;
            }
        } else {
            let root = &costs[line] / &slopes[line];
            if root > lo {
                lo = root;
            }
            if lo > hi || (!is_last && lo == hi) {
                continue;
            }
        }
        segments.push(Segment {
            alpha_lo: lo,
            alpha_hi: hi,
            action: line,
        });
        if is_last {
            break;
        }
    }
    segments
}

/// Envelope of the instance's utility lines. Requires A1-A3.
pub fn upper_envelope(instance: &Instance) -> Result<Envelope, ContractError> {
    instance.require(&[Assumption::A1, Assumption::A2, Assumption::A3])?;
    Ok(Envelope {
        segments: upper_hull(&instance.rewards(), &instance.costs()),
    })
}

/// Outcome of optimizing over linear contracts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChoice {
    pub alpha: Rational,
    /// `None` when the agent opts out at every `alpha`.
    pub action: Option<usize>,
    pub payoff: Rational,
}

/// Best linear contract for a `(R_i, c_i)` profile, evaluated with the
/// full best-response tie-breaking rule at each envelope breakpoint.
/// Works without any assumption flags.
pub fn best_linear_from_profile(rewards: &[Rational], costs: &[Rational]) -> LinearChoice {
    let segments = upper_hull(rewards, costs);
    let mut best = LinearChoice {
        alpha: Rational::zero(),
        action: None,
        payoff: Rational::zero(),
    };
    let mut first = true;
    for seg in &segments {
        let payments: Vec<Rational> = rewards.iter().map(|r| &seg.alpha_lo * r).collect();
        let br = best_response_from_profile(rewards, &payments, costs);
        if first || br.principal_payoff > best.payoff {
            best = LinearChoice {
                alpha: seg.alpha_lo.clone(),
                action: br.choice.action(),
                payoff: br.principal_payoff,
            };
            first = false;
        }
    }
    best
}

/// Linear-contract payoff `(1 - alpha) R` of the envelope action at
/// `alpha`, under the full tie-breaking rule.
pub fn linear_payoff_from_profile(rewards: &[Rational], costs: &[Rational], alpha: &Rational) -> (Choice, Rational) {
    let payments: Vec<Rational> = rewards.iter().map(|r| alpha * r).collect();
    let br = best_response_from_profile(rewards, &payments, costs);
    (br.choice, br.principal_payoff)
}
