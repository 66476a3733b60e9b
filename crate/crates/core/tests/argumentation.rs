use std::collections::BTreeSet;

use infomarket::argumentation::*;
use proptest::prelude::*;

/// Every total labeling of `af`, in no particular order (`3^n` of them).
fn all_labelings(af: &ArgumentationFramework) -> Vec<Labeling> {
    let ids: Vec<ArgumentId> = af.arguments().iter().copied().collect();
    let total = 3usize.pow(ids.len() as u32);
    (0..total)
        .map(|mut code| {
            ids.iter()
                .map(|&a| {
                    let l = Label::ALL[code % 3];
                    code /= 3;
                    (a, l)
                })
                .collect()
        })
        .collect()
}

fn brute_force_complete(af: &ArgumentationFramework) -> BTreeSet<Labeling> {
    all_labelings(af)
        .into_iter()
        .filter(|l| is_complete_labeling(af, l).unwrap())
        .collect()
}

/// Least fixpoint of the characteristic function: the set of arguments
/// defended by the current set, iterated from the empty set.
fn grounded_extension(af: &ArgumentationFramework) -> BTreeSet<ArgumentId> {
    let mut s = BTreeSet::new();
    loop {
        let next: BTreeSet<ArgumentId> = af
            .arguments()
            .iter()
            .copied()
            .filter(|&a| {
                af.attackers_of(a)
                    .all(|b| af.attackers_of(b).any(|c| s.contains(&c)))
            })
            .collect();
        if next == s {
            return s;
        }
        s = next;
    }
}

fn arb_framework(max_n: u32) -> impl Strategy<Value = ArgumentationFramework> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = (n * n) as usize;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let ids: Vec<ArgumentId> = (1..=n).map(ArgumentId).collect();
            let attacks = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(k, _)| (ids[k / n as usize], ids[k % n as usize]));
            ArgumentationFramework::new(ids.clone(), attacks.collect::<Vec<_>>()).unwrap()
        })
    })
}

fn in_set(l: &Labeling) -> BTreeSet<ArgumentId> {
    l.with_label(Label::In).collect()
}

#[test]
fn mutual_attack_matches_brute_force() {
    let (a, b) = (ArgumentId(1), ArgumentId(2));
    let af = ArgumentationFramework::new([a, b], [(a, b), (b, a)]).unwrap();
    let oracle = brute_force_complete(&af);
    assert_eq!(oracle.len(), 3);
    let got: BTreeSet<_> = complete_labelings(&af).unwrap().into_iter().collect();
    assert_eq!(got, oracle);
}

#[test]
fn odd_cycle_has_only_the_undecided_labeling() {
    let ids: Vec<_> = (1..=3).map(ArgumentId).collect();
    let af = ArgumentationFramework::new(
        ids.clone(),
        [(ids[0], ids[1]), (ids[1], ids[2]), (ids[2], ids[0])],
    )
    .unwrap();
    let all = complete_labelings(&af).unwrap();
    assert_eq!(all, vec![Labeling::uniform(&af, Label::Undec)]);
}

#[test]
fn chain_parity_pattern() {
    for n in 1..=14u32 {
        let af = chain_framework(n);
        let all = complete_labelings(&af).unwrap();
        assert_eq!(all.len(), 1, "chain({n})");
        for (a, l) in all[0].iter() {
            let expect = if a.0 % 2 == n % 2 { Label::In } else { Label::Out };
            assert_eq!(l, expect, "chain({n}) {a}");
        }
        assert_eq!(grounded_labeling(&af), all[0]);
    }
}

#[test]
fn prefix_monotonicity_holds_when_the_universe_is_the_larger_chain() {
    for m in 1..=10u32 {
        for k in 1..=m {
            for j in 1..=k {
                assert!(
                    at_least_as_informed(
                        &chain_framework(m),
                        &chain_framework(k),
                        ArgumentId(j),
                        &chain_framework(m)
                    )
                    .unwrap(),
                    "m={m} k={k} j={j}"
                );
            }
        }
    }
}

#[test]
fn extending_the_universe_breaks_prefix_monotonicity() {
    // X = chain(3) and Y = chain(1) both accept A1. Criticism Z = {A3, A4}
    // with A4 attacking A3 leaves Y's A1 intact but, pooled with X, yields
    // chain(4) where A1 is rejected.
    let (x, y, u) = (chain_framework(3), chain_framework(1), chain_framework(4));
    let a1 = ArgumentId(1);
    let z = ArgumentationFramework::new(
        [ArgumentId(3), ArgumentId(4)],
        [(ArgumentId(4), ArgumentId(3))],
    )
    .unwrap();
    assert!(z.is_subframework_of(&u));
    assert!(can_defend(&y.union(&z), a1).unwrap());
    assert!(!can_defend(&x.union(&z), a1).unwrap());
    assert_eq!(x.union(&z), chain_framework(4));
    assert!(!at_least_as_informed(&x, &y, a1, &u).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_matches_brute_force(af in arb_framework(6)) {
        let got: BTreeSet<_> = complete_labelings(&af).unwrap().into_iter().collect();
        prop_assert!(!got.is_empty());
        prop_assert_eq!(got, brute_force_complete(&af));
    }

    #[test]
    fn grounded_is_least_complete(af in arb_framework(6)) {
        let g = grounded_labeling(&af);
        prop_assert!(is_complete_labeling(&af, &g).unwrap());
        prop_assert_eq!(in_set(&g), grounded_extension(&af));
        for l in complete_labelings(&af).unwrap() {
            prop_assert!(in_set(&g).is_subset(&in_set(&l)));
        }
    }

    #[test]
    fn defend_and_deny_are_exclusive(af in arb_framework(7)) {
        for &a in af.arguments() {
            let d = can_defend(&af, a).unwrap();
            let n = can_deny(&af, a).unwrap();
            prop_assert!(!(d && n));
        }
    }

    #[test]
    fn union_laws(a in arb_framework(4), b in arb_framework(4), c in arb_framework(4)) {
        prop_assert_eq!(a.union(&a), a.clone());
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert!(is_subframework(&a, &framework_union(&a, &b)));
        prop_assert!(is_subframework(&b, &framework_union(&a, &b)));
    }
}
