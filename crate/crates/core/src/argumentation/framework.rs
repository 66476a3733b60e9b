use std::collections::BTreeSet;
use std::fmt;

use super::ArgError;

/// Index of an argument. Chain arguments use the 1-based position `i` of `A_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentId(pub u32);

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0)
    }
}

/// A finite abstract argumentation framework: arguments plus a binary attack
/// relation. `(a, b)` in the attack set means `a` attacks `b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ArgumentationFramework {
    arguments: BTreeSet<ArgumentId>,
    attacks: BTreeSet<(ArgumentId, ArgumentId)>,
}

impl ArgumentationFramework {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a framework, rejecting attacks whose endpoints are not arguments.
    /// Duplicate arguments and attacks collapse.
    pub fn new<A, T>(arguments: A, attacks: T) -> Result<Self, ArgError>
    where
        A: IntoIterator<Item = ArgumentId>,
        T: IntoIterator<Item = (ArgumentId, ArgumentId)>,
    {
        let arguments: BTreeSet<_> = arguments.into_iter().collect();
        let mut set = BTreeSet::new();
        for (attacker, target) in attacks {
            for end in [attacker, target] {
                if !arguments.contains(&end) {
                    return Err(ArgError::DanglingAttack {
                        attacker,
                        target,
                        missing: end,
                    });
                }
            }
            set.insert((attacker, target));
        }
        Ok(Self {
            arguments,
            attacks: set,
        })
    }

    /// The linear framework `A_1 <- A_2 <- ... <- A_n`.
    pub fn chain(n: u32) -> Self {
        let arguments = (1..=n).map(ArgumentId).collect();
        let attacks = (2..=n).map(|i| (ArgumentId(i), ArgumentId(i - 1))).collect();
        Self { arguments, attacks }
    }

    pub fn arguments(&self) -> &BTreeSet<ArgumentId> {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgumentId, ArgumentId)> {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn contains(&self, a: ArgumentId) -> bool {
        self.arguments.contains(&a)
    }

    pub fn attackers_of(&self, target: ArgumentId) -> impl Iterator<Item = ArgumentId> + '_ {
        self.attacks
            .iter()
            .filter(move |(_, t)| *t == target)
            .map(|(a, _)| *a)
    }

    /// `(Ar1 ∪ Ar2, att1 ∪ att2)`.
    pub fn union(&self, other: &Self) -> Self {
        Self {
            arguments: self.arguments.union(&other.arguments).copied().collect(),
            attacks: self.attacks.union(&other.attacks).copied().collect(),
        }
    }

    /// `Ar1 ⊆ Ar2 ∧ att1 ⊆ att2`.
    pub fn is_subframework_of(&self, other: &Self) -> bool {
        self.arguments.is_subset(&other.arguments) && self.attacks.is_subset(&other.attacks)
    }

    /// The subframework on `keep` carrying every attack between retained arguments.
    pub fn induced(&self, keep: &BTreeSet<ArgumentId>) -> Self {
        Self {
            arguments: self.arguments.intersection(keep).copied().collect(),
            attacks: self
                .attacks
                .iter()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .copied()
                .collect(),
        }
    }
}

pub fn chain_framework(n: u32) -> ArgumentationFramework {
    ArgumentationFramework::chain(n)
}

pub fn framework_union(
    a: &ArgumentationFramework,
    b: &ArgumentationFramework,
) -> ArgumentationFramework {
    a.union(b)
}

pub fn is_subframework(a: &ArgumentationFramework, b: &ArgumentationFramework) -> bool {
    a.is_subframework_of(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<ArgumentId> {
        v.iter().copied().map(ArgumentId).collect()
    }

    #[test]
    fn chain_of_three() {
        let af = chain_framework(3);
        assert_eq!(af.arguments().iter().copied().collect::<Vec<_>>(), ids(&[1, 2, 3]));
        let atts: Vec<_> = af.attacks().iter().copied().collect();
        assert_eq!(
            atts,
            vec![(ArgumentId(2), ArgumentId(1)), (ArgumentId(3), ArgumentId(2))]
        );
    }

    #[test]
    fn chain_degenerate_sizes() {
        let one = chain_framework(1);
        assert_eq!(one.len(), 1);
        assert!(one.attacks().is_empty());
        assert!(chain_framework(0).is_empty());
        assert!(chain_framework(0).attacks().is_empty());
    }

    #[test]
    fn dangling_attack_rejected() {
        let err = ArgumentationFramework::new(ids(&[1]), [(ArgumentId(1), ArgumentId(2))]);
        assert!(matches!(
            err,
            Err(ArgError::DanglingAttack { missing: ArgumentId(2), .. })
        ));
    }

    #[test]
    fn duplicate_attacks_collapse() {
        let a = ArgumentId(1);
        let af = ArgumentationFramework::new([a], [(a, a), (a, a)]).unwrap();
        assert_eq!(af.attacks().len(), 1);
    }

    #[test]
    fn union_examples() {
        let c3 = chain_framework(3);
        assert_eq!(framework_union(&c3, &ArgumentationFramework::empty()), c3);
        assert_eq!(framework_union(&chain_framework(2), &c3), c3);

        let a = ArgumentationFramework::new(ids(&[1]), []).unwrap();
        let b = ArgumentationFramework::new(ids(&[2]), []).unwrap();
        let u = framework_union(&a, &b);
        assert_eq!(u.len(), 2);
        assert!(u.attacks().is_empty());
    }

    #[test]
    fn subframework_examples() {
        let c2 = chain_framework(2);
        let c3 = chain_framework(3);
        assert!(is_subframework(&c2, &c3));
        assert!(!is_subframework(&c3, &c2));
        assert!(is_subframework(&c3, &c3));
    }

    #[test]
    fn induced_keeps_internal_attacks_only() {
        let c4 = chain_framework(4);
        let keep = ids(&[1, 3, 4]).into_iter().collect();
        let sub = c4.induced(&keep);
        assert_eq!(sub.len(), 3);
        assert_eq!(
            sub.attacks().iter().copied().collect::<Vec<_>>(),
            vec![(ArgumentId(4), ArgumentId(3))]
        );
    }
}
