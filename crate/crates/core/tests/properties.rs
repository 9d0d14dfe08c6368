use linear_contracts::contracts::{
    best_debt, best_linear, best_monotone, implemented_action, optimal_contract, upper_envelope,
};
use linear_contracts::families::gen_random_spanning;
use linear_contracts::lp::{min_payment_contract, min_payment_monotone};
use linear_contracts::rational::{int, ratio};
use linear_contracts::robust::{
    check_ambiguous, two_point_adversary, AdversaryConfig, AdversaryMenu, AmbiguousInstance,
};
use linear_contracts::{best_response_from_profile, build_instance, Choice, Contract, Instance, Rational};
use proptest::prelude::*;

fn spanning() -> impl Strategy<Value = Instance> {
    (2usize..=5, 2usize..=5, any::<u64>()).prop_map(|(n, m, seed)| gen_random_spanning(n, m, seed).unwrap())
}

fn alpha() -> impl Strategy<Value = Rational> {
    (1i64..=40).prop_flat_map(|den| (0..=den).prop_map(move |num| ratio(num, den)))
}

/// Same `(R, c)` profile on outcomes `{0, R_max}`.
fn two_outcome_twin(inst: &Instance) -> Instance {
    let rewards = inst.rewards();
    let top = rewards.iter().max().unwrap().clone();
    let actions = rewards
        .iter()
        .zip(inst.costs())
        .map(|(r, c)| {
            let q = r / &top;
            (vec![int(1) - &q, q], c)
        })
        .collect();
    build_instance(vec![int(0), top], actions).unwrap()
}

fn ambiguous() -> impl Strategy<Value = AmbiguousInstance> {
    (
        prop::collection::vec(1i64..=3, 2..=3),
        prop::collection::vec((0i64..=8, 0i64..=6), 1..=3),
    )
        .prop_map(|(steps, acts)| {
            let mut x = vec![int(0)];
            for s in steps {
                let next = x.last().unwrap() + int(s);
                x.push(next);
            }
            let top = x.last().unwrap().clone();
            let mut actions: Vec<(Rational, Rational)> =
                acts.iter().map(|&(r, c)| (ratio(r, 8) * &top, ratio(c, 4))).collect();
            actions[0].1 = int(0);
            check_ambiguous(x, actions).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn payoffs_split_welfare(inst in spanning(), raw in prop::collection::vec(0i64..=12, 5)) {
        let t: Vec<Rational> = raw.iter().take(inst.m()).map(|&k| ratio(k, 4)).collect();
        let contract = Contract::new(t).unwrap();
        let br = inst.best_response(&contract);
        if let Choice::Action(a) = br.choice {
            prop_assert_eq!(&br.principal_payoff + &br.agent_utility, inst.welfare(a));
            prop_assert_eq!(br.principal_payoff, inst.expected_reward(a) - inst.expected_payment(a, &contract));
        }
    }

    #[test]
    fn envelope_matches_best_response(inst in spanning(), a in alpha()) {
        let direct = inst.best_response(&inst.linear_contract(&a)).choice.action();
        prop_assert_eq!(implemented_action(&inst, &a), direct);
    }

    #[test]
    fn monotone_costs_at_least_as_much(inst in spanning()) {
        for a in 0..inst.n() {
            let free = min_payment_contract(&inst, a).unwrap();
            let mono = min_payment_monotone(&inst, a).unwrap();
            if let Some(mono) = mono.implemented() {
                let free = free.implemented().expect("monotone implementable implies implementable");
                prop_assert!(mono.expected_payment >= free.expected_payment);
            }
        }
    }

    #[test]
    fn contract_classes_are_ordered(inst in spanning()) {
        let lin = best_linear(&inst).unwrap().payoff;
        let debt = best_debt(&inst).unwrap().payoff;
        let mono = best_monotone(&inst).unwrap().payoff;
        let opt = optimal_contract(&inst).unwrap().payoff;
        prop_assert!(lin <= debt && debt <= mono && mono <= opt, "{lin} {debt} {mono} {opt}");
    }

    #[test]
    fn linear_depends_only_on_profile(inst in spanning()) {
        let twin = two_outcome_twin(&inst);
        let (e1, e2) = (upper_envelope(&inst).unwrap(), upper_envelope(&twin).unwrap());
        prop_assert_eq!(e1.breakpoints(), e2.breakpoints());
        prop_assert_eq!(e1.implementable_set(), e2.implementable_set());
        prop_assert_eq!(best_linear(&inst).unwrap(), best_linear(&twin).unwrap());
    }

    #[test]
    fn intercept_shifts_payoff(amb in ambiguous(), a0 in 0i64..=8, a1 in alpha()) {
        let a0 = ratio(a0, 4);
        let lin: Vec<Rational> = amb.rewards().iter().map(|r| &a1 * r).collect();
        let aff: Vec<Rational> = lin.iter().map(|p| p + &a0).collect();
        let l = best_response_from_profile(amb.rewards(), &lin, amb.costs());
        let f = best_response_from_profile(amb.rewards(), &aff, amb.costs());
        if l.choice != Choice::OptOut {
            prop_assert_eq!(l.choice, f.choice);
            prop_assert_eq!(l.principal_payoff, &f.principal_payoff + &a0);
        }
    }

    #[test]
    fn richer_menu_never_helps_principal(amb in ambiguous(), raw in prop::collection::vec(0i64..=8, 4)) {
        let top = amb.outcomes().last().unwrap().clone();
        let t: Vec<Rational> = raw.iter().take(amb.m()).map(|&k| ratio(k, 8) * &top).collect();
        let contract = Contract::new(t).unwrap();
        let full = two_point_adversary(&amb, &contract, &AdversaryConfig::default()).unwrap();
        let ext = AdversaryConfig { menu: AdversaryMenu::Extremes, ..AdversaryConfig::default() };
        let extremes = two_point_adversary(&amb, &contract, &ext).unwrap();
        prop_assert!(full.payoff <= extremes.payoff);
    }
}
