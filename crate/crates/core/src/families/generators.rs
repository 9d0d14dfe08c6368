//! Literal examples, parametric lower-bound constructions and a seeded
//! random generator for spanning-condition instances.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::FamilyError;
use crate::model::{build_instance, Instance};
use crate::rational::{int, pow, ratio, Rational};

type RawActions = Vec<(Vec<Rational>, Rational)>;

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParams(msg.into())
}

fn check_eps(eps: &Rational) -> Result<(), FamilyError> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(bad(format!("eps = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

/// Six outcomes, four shifted actions; the optimum pays non-monotonically.
pub fn example11() -> Instance {
    let d = |s: &str| crate::rational::parse_rational(s).expect("literal");
    let outcomes = ["1", "1.1", "4.9", "5", "5.1", "5.2"].map(d).to_vec();
    let shape = [ratio(3, 8), ratio(3, 8), ratio(1, 4)];
    let actions = (0..4)
        .zip(["0", "1", "2", "2.2"])
        .map(|(shift, c)| {
            let mut p = vec![Rational::zero(); 6];
            for (k, q) in shape.iter().enumerate() {
                p[shift + k] = q.clone();
            }
            (p, d(c))
        })
        .collect();
    build_instance(outcomes, actions).expect("valid literal")
}

/// Two outcomes (1, 3), two deterministic actions.
pub fn example12() -> Instance {
    build_instance(
        vec![int(1), int(3)],
        vec![(vec![int(1), int(0)], int(0)), (vec![int(0), int(1)], ratio(4, 3))],
    )
    .expect("valid literal")
}

/// Two actions over (0, 1, 2) without MLRP.
pub fn example_d5() -> Instance {
    let third = ratio(1, 3);
    build_instance(
        vec![int(0), int(1), int(2)],
        vec![
            (vec![third.clone(), third.clone(), third.clone()], int(0)),
            (vec![third, ratio(1, 6), ratio(1, 2)], int(1)),
        ],
    )
    .expect("valid literal")
}

/// `gen_example` by name: `example11`, `example12` or `exampleD5`
/// (case-insensitive).
pub fn gen_example(name: &str) -> Result<Instance, FamilyError> {
    match name.to_ascii_lowercase().as_str() {
        "example11" => Ok(example11()),
        "example12" => Ok(example12()),
        "exampled5" => Ok(example_d5()),
        _ => Err(FamilyError::UnknownName(name.to_string())),
    }
}

/// `R_i = eps^-(i-1)` and `c_i = R_i - i + eps (i-1)`, for `i = 1..=n`.
fn thm52_profile(n: usize, eps: &Rational) -> (Vec<Rational>, Vec<Rational>) {
    let inv = eps.recip();
    let rewards: Vec<Rational> = (0..n as u32).map(|k| pow(&inv, k)).collect();
    let costs = rewards
        .iter()
        .enumerate()
        .map(|(k, r)| r - int(k as i64 + 1) + eps * int(k as i64))
        .collect();
    (rewards, costs)
}

/// Diagonal instance: action `i` lands deterministically on `x_i = eps^-(i-1)`.
pub fn gen_thm52(n: usize, eps: &Rational) -> Result<Instance, FamilyError> {
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    check_eps(eps)?;
    let (rewards, costs) = thm52_profile(n, eps);
    let actions = costs
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut p = vec![Rational::zero(); n];
            p[i] = Rational::one();
            (p, c)
        })
        .collect();
    Ok(build_instance(rewards, actions)?)
}

/// Raw three-outcome data over `(0, R_n, R_n + 1)`. Accepts `delta = 0`, in
/// which case the top outcome is unreachable and the data does not form a
/// valid instance.
pub fn appendix_e_data(n: usize, eps: &Rational, delta: &Rational) -> Result<(Vec<Rational>, RawActions), FamilyError> {
    if n < 2 {
        return Err(bad("n must be at least 2"));
    }
    check_eps(eps)?;
    if delta.is_negative() || *delta >= Rational::one() {
        return Err(bad(format!("delta = {delta} must lie in [0, 1)")));
    }
    let (rewards, costs) = thm52_profile(n, eps);
    let top = rewards[n - 1].clone();
    let outcomes = vec![int(0), top.clone(), &top + int(1)];
    let mut actions: RawActions = rewards[..n - 1]
        .iter()
        .zip(&costs)
        .map(|(r, c)| {
            let q = r / &top;
            (vec![Rational::one() - &q, q, int(0)], c.clone())
        })
        .collect();
    actions.push((
        vec![int(0), Rational::one() - delta, delta.clone()],
        costs[n - 1].clone(),
    ));
    Ok((outcomes, actions))
}

/// Three-outcome MLRP instance: the auxiliary two-outcome setting with the
/// top action moved onto a new outcome with probability `delta`.
pub fn gen_appendix_e(n: usize, eps: &Rational, delta: &Rational) -> Result<Instance, FamilyError> {
    if !delta.is_positive() {
        return Err(bad(format!("delta = {delta} must be positive")));
    }
    let (outcomes, actions) = appendix_e_data(n, eps, delta)?;
    Ok(build_instance(outcomes, actions)?)
}

/// Four-outcome MLRP instance separating monotone from optimal contracts.
/// Rows `i <= n-2` put mass `eps^(n-i-1)` on `x_2`.
pub fn gen_appendix_f(n: usize, eps: &Rational, delta: &Rational, gamma: &Rational) -> Result<Instance, FamilyError> {
    if n < 3 {
        return Err(bad("n must be at least 3"));
    }
    check_eps(eps)?;
    if !delta.is_positive() || delta >= eps {
        return Err(bad(format!("need 0 < delta < eps, got delta = {delta}")));
    }
    if !gamma.is_positive() {
        return Err(bad(format!("gamma = {gamma} must be positive")));
    }
    let (_, costs) = thm52_profile(n - 1, eps);
    let base = pow(&eps.recip(), n as u32 - 2);
    let outcomes = vec![int(0), base.clone(), &base + gamma, &base + gamma * int(2)];
    let mut actions: RawActions = (1..=n - 2)
        .map(|i| {
            let q = pow(eps, (n - i - 1) as u32);
            (vec![Rational::one() - &q, q, int(0), int(0)], costs[i - 1].clone())
        })
        .collect();
    actions.push((
        vec![int(0), Rational::one() - delta, delta.clone(), int(0)],
        costs[n - 2].clone(),
    ));
    actions.push((vec![int(0), int(0), int(0), int(1)], base));
    Ok(build_instance(outcomes, actions)?)
}

/// Interpolations `(1 - w) G + w H` of two base distributions, one action
/// per weight.
pub fn spanning_instance(
    outcomes: Vec<Rational>,
    g: &[Rational],
    h: &[Rational],
    weights: &[Rational],
    costs: Vec<Rational>,
) -> Result<Instance, FamilyError> {
    if g.len() != outcomes.len() || h.len() != outcomes.len() || weights.len() != costs.len() {
        return Err(bad("length mismatch in spanning data"));
    }
    let actions = weights
        .iter()
        .zip(costs)
        .map(|(w, c)| {
            let p = g
                .iter()
                .zip(h)
                .map(|(a, b)| (Rational::one() - w) * a + w * b)
                .collect();
            (p, c)
        })
        .collect();
    Ok(build_instance(outcomes, actions)?)
}

fn normalize(weights: &[i64]) -> Vec<Rational> {
    let total: i64 = weights.iter().sum();
    weights.iter().map(|&w| ratio(w, total)).collect()
}

/// Seeded spanning-condition instance with `n` actions and `m` outcomes.
///
/// `H` is `G` reweighted by sorted factors, so `H / G` is nondecreasing and
/// every interpolation pair has monotone likelihood ratios. Weights are
/// distinct multiples of 1/20 starting at 0, so rewards are distinct;
/// costs rise with reward starting from 0. Welfare ties are broken by
/// shifting the later costs up.
pub fn gen_random_spanning(n: usize, m: usize, seed: u64) -> Result<Instance, FamilyError> {
    if n < 2 || m < 2 {
        return Err(bad("random-spanning needs n >= 2 and m >= 2"));
    }
    if n > 21 {
        return Err(bad("random-spanning supports at most 21 actions"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g_raw: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=9)).collect();
    let mut factors: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=9)).collect();
    factors.sort_unstable();
    if factors[0] == factors[m - 1] {
        factors[m - 1] += 1;
    }
    let h_raw: Vec<i64> = g_raw.iter().zip(&factors).map(|(g, f)| g * f).collect();
    let (g, h) = (normalize(&g_raw), normalize(&h_raw));

    let mut grid: Vec<i64> = sample(&mut rng, 20, n - 1).into_iter().map(|k| k as i64 + 1).collect();
    grid.sort_unstable();
    let weights: Vec<Rational> = std::iter::once(int(0))
        .chain(grid.iter().map(|&k| ratio(k, 20)))
        .collect();

    let mut outcomes = vec![int(rng.gen_range(0..=3))];
    for _ in 1..m {
        let step = rng.gen_range(1..=5);
        outcomes.push(outcomes.last().unwrap() + int(step));
    }
    let mean = |w: &Rational| -> Rational {
        g.iter()
            .zip(&h)
            .zip(&outcomes)
            .map(|((a, b), x)| ((Rational::one() - w) * a + w * b) * x)
            .sum()
    };
    let rewards: Vec<Rational> = weights.iter().map(mean).collect();
    let mut costs = vec![int(0)];
    for i in 1..n {
        let u = ratio(rng.gen_range(1..=15), 10);
        let c = &costs[i - 1] + u * (&rewards[i] - &rewards[i - 1]);
        costs.push(c);
    }
    loop {
        let welfare: Vec<Rational> = rewards.iter().zip(&costs).map(|(r, c)| r - c).collect();
        let best = welfare.iter().max().unwrap();
        let tied: Vec<usize> = (0..n).filter(|&i| welfare[i] == *best).collect();
        if tied.len() < 2 {
            break;
        }
        let last = *tied.last().unwrap();
        let bump = (&rewards[last] - &rewards[last - 1]) / int(20);
        for c in &mut costs[last..] {
            *c += &bump;
        }
    }
    spanning_instance(outcomes, &g, &h, &weights, costs)
}

/// Named instance families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Thm52,
    AppendixE,
    AppendixF,
    Example11,
    Example12,
    ExampleD5,
    RandomSpanning,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Thm52,
        Family::AppendixE,
        Family::AppendixF,
        Family::Example11,
        Family::Example12,
        Family::ExampleD5,
        Family::RandomSpanning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Thm52 => "thm52",
            Family::AppendixE => "appendixE",
            Family::AppendixF => "appendixF",
            Family::Example11 => "example11",
            Family::Example12 => "example12",
            Family::ExampleD5 => "exampleD5",
            Family::RandomSpanning => "random-spanning",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| FamilyError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub eps: Rational,
    pub delta: Rational,
    pub gamma: Rational,
    pub seed: u64,
}

impl FamilyParams {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            n: 3,
            m: 4,
            eps: ratio(1, 2),
            delta: ratio(1, 1000),
            gamma: ratio(1, 1000),
            seed: 0,
        }
    }
}

pub fn generate(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let p = params;
    match p.family {
        Family::Thm52 => gen_thm52(p.n, &p.eps),
        Family::AppendixE => gen_appendix_e(p.n, &p.eps, &p.delta),
        Family::AppendixF => gen_appendix_f(p.n, &p.eps, &p.delta, &p.gamma),
        Family::Example11 => Ok(example11()),
        Family::Example12 => Ok(example12()),
        Family::ExampleD5 => Ok(example_d5()),
        Family::RandomSpanning => gen_random_spanning(p.n, p.m, p.seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contracts::mlrp_check;

    #[test]
    fn thm52_small_case_by_hand() {
        let inst = gen_thm52(2, &ratio(1, 2)).unwrap();
        assert_eq!(inst.outcomes(), &[int(1), int(2)]);
        assert_eq!(inst.costs(), vec![int(0), ratio(1, 2)]);
        assert_eq!(inst.welfare(0), int(1));
        assert_eq!(inst.welfare(1), ratio(3, 2));
    }

    #[test]
    fn thm52_single_action() {
        let inst = gen_thm52(1, &ratio(1, 3)).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.expected_reward(0), int(1));
        assert_eq!(*inst.cost(0), int(0));
    }

    #[test]
    fn thm52_welfare_identity() {
        for eps in [ratio(1, 2), ratio(1, 7), ratio(2, 3)] {
            let inst = gen_thm52(6, &eps).unwrap();
            for i in 0..6 {
                assert_eq!(inst.welfare(i), int(i as i64 + 1) - &eps * int(i as i64));
            }
            assert!(mlrp_check(&inst));
        }
    }

    #[test]
    fn thm52_rejects_bad_eps() {
        assert!(gen_thm52(3, &int(1)).is_err());
        assert!(gen_thm52(3, &int(0)).is_err());
        assert!(gen_thm52(0, &ratio(1, 2)).is_err());
    }

    #[test]
    fn appendix_e_top_action_reward() {
        let (eps, delta) = (ratio(1, 10), ratio(1, 100));
        let inst = gen_appendix_e(3, &eps, &delta).unwrap();
        assert_eq!(inst.expected_reward(2), int(100) + &delta);
        assert!(mlrp_check(&inst));
    }

    #[test]
    fn appendix_e_without_delta_degenerates() {
        let (outcomes, actions) = appendix_e_data(3, &ratio(1, 10), &int(0)).unwrap();
        assert!(actions.iter().all(|(p, _)| p[2].is_zero()));
        assert!(build_instance(outcomes.clone(), actions.clone()).is_err());
        let two: RawActions = actions.into_iter().map(|(p, c)| (p[..2].to_vec(), c)).collect();
        let aux = build_instance(outcomes[..2].to_vec(), two).unwrap();
        assert_eq!(aux.rewards(), vec![int(1), int(10), int(100)]);
    }

    #[test]
    fn appendix_f_welfare_list() {
        let (eps, delta, gamma) = (ratio(1, 10), ratio(1, 1000), ratio(1, 100));
        let n = 3;
        let inst = gen_appendix_f(n, &eps, &delta, &gamma).unwrap();
        assert_eq!(inst.welfare(n - 1), &gamma * int(2));
        assert_eq!(inst.welfare(n - 2), int(2) - &eps + &delta * &gamma);
        assert!(mlrp_check(&inst));
        let inst4 = gen_appendix_f(4, &ratio(1, 100), &ratio(1, 10_000), &ratio(1, 1000)).unwrap();
        assert_eq!(inst4.rewards()[..2], [int(1), int(100)]);
        assert!(mlrp_check(&inst4));
    }

    #[test]
    fn appendix_f_rejects_bad_params() {
        assert!(gen_appendix_f(2, &ratio(1, 10), &ratio(1, 100), &int(1)).is_err());
        assert!(gen_appendix_f(3, &ratio(1, 10), &ratio(1, 5), &int(1)).is_err());
        assert!(gen_appendix_f(3, &ratio(1, 10), &ratio(1, 100), &int(0)).is_err());
    }

    #[test]
    fn named_examples() {
        assert_eq!(gen_example("example12").unwrap(), example12());
        assert_eq!(gen_example("exampleD5").unwrap(), example_d5());
        assert!(matches!(gen_example("nope"), Err(FamilyError::UnknownName(_))));
        assert_eq!("random-spanning".parse::<Family>().unwrap(), Family::RandomSpanning);
    }

    #[test]
    fn random_spanning_is_deterministic_and_regular() {
        for seed in 0..40 {
            let a = gen_random_spanning(5, 4, seed).unwrap();
            assert_eq!(a, gen_random_spanning(5, 4, seed).unwrap());
            assert!(mlrp_check(&a), "seed {seed}");
            let f = a.flags();
            assert!(f.a1 && f.a2 && f.a3, "seed {seed}");
        }
    }

    #[test]
    fn equal_weights_break_a1() {
        let g = vec![ratio(1, 2), ratio(1, 2)];
        let h = vec![ratio(1, 4), ratio(3, 4)];
        let w = vec![ratio(1, 2), ratio(1, 2)];
        let inst = spanning_instance(vec![int(0), int(1)], &g, &h, &w, vec![int(0), int(1)]).unwrap();
        assert!(!inst.flags().a1);
    }
}
