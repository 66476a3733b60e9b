use std::collections::BTreeMap;
use std::fmt;

use super::{ArgError, ArgumentId, ArgumentationFramework};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// accepted
    In,
    /// rejected
    Out,
    /// abstained
    Undec,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::In, Label::Out, Label::Undec];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "IN",
            Label::Out => "OUT",
            Label::Undec => "UNDEC",
        })
    }
}

/// Assignment of a label to arguments, kept in argument-id order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labeling(BTreeMap<ArgumentId, Label>);

impl Labeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform(af: &ArgumentationFramework, label: Label) -> Self {
        af.arguments().iter().map(|&a| (a, label)).collect()
    }

    pub fn get(&self, a: ArgumentId) -> Option<Label> {
        self.0.get(&a).copied()
    }

    pub fn set(&mut self, a: ArgumentId, label: Label) {
        self.0.insert(a, label);
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArgumentId, Label)> + '_ {
        self.0.iter().map(|(a, l)| (*a, *l))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with_label(&self, label: Label) -> impl Iterator<Item = ArgumentId> + '_ {
        self.iter().filter(move |(_, l)| *l == label).map(|(a, _)| a)
    }

    /// True iff the labeling covers exactly the framework's arguments.
    pub fn is_total_over(&self, af: &ArgumentationFramework) -> bool {
        self.0.len() == af.len() && af.arguments().iter().all(|a| self.0.contains_key(a))
    }

    /// Renders `name=LABEL` pairs separated by spaces in argument-id order.
    pub fn render_with<F>(&self, mut name: F) -> String
    where
        F: FnMut(ArgumentId) -> String,
    {
        self.iter()
            .map(|(a, l)| format!("{}={}", name(a), l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl FromIterator<(ArgumentId, Label)> for Labeling {
    fn from_iter<I: IntoIterator<Item = (ArgumentId, Label)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|a| a.to_string()))
    }
}

/// Checks the three complete-labeling constraints for every argument.
pub fn is_complete_labeling(
    af: &ArgumentationFramework,
    lab: &Labeling,
) -> Result<bool, ArgError> {
    if !lab.is_total_over(af) {
        return Err(ArgError::NonTotalLabeling {
            expected: af.len(),
            got: lab.len(),
        });
    }
    for &a in af.arguments() {
        let mut any_in = false;
        let mut all_out = true;
        for b in af.attackers_of(a) {
            match lab.get(b) {
                Some(Label::In) => {
                    any_in = true;
                    all_out = false;
                }
                Some(Label::Out) => {}
                _ => all_out = false,
            }
        }
        let ok = match lab.get(a) {
            Some(Label::In) => all_out,
            Some(Label::Out) => any_in,
            Some(Label::Undec) => !any_in && !all_out,
            None => unreachable!("totality checked above"),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::argumentation::chain_framework;

    fn lab(pairs: &[(u32, Label)]) -> Labeling {
        pairs.iter().map(|&(i, l)| (ArgumentId(i), l)).collect()
    }

    #[test]
    fn reinstatement_labeling_is_complete() {
        let af = chain_framework(3);
        let l = lab(&[(1, Label::In), (2, Label::Out), (3, Label::In)]);
        assert!(is_complete_labeling(&af, &l).unwrap());
    }

    #[test]
    fn all_undec_chain_is_not_complete() {
        let af = chain_framework(3);
        let l = Labeling::uniform(&af, Label::Undec);
        assert!(!is_complete_labeling(&af, &l).unwrap());
    }

    #[test]
    fn self_attacker_undec_is_complete() {
        let a = ArgumentId(1);
        let af = ArgumentationFramework::new([a], [(a, a)]).unwrap();
        assert!(is_complete_labeling(&af, &lab(&[(1, Label::Undec)])).unwrap());
        assert!(!is_complete_labeling(&af, &lab(&[(1, Label::In)])).unwrap());
        assert!(!is_complete_labeling(&af, &lab(&[(1, Label::Out)])).unwrap());
    }

    #[test]
    fn non_total_labeling_is_an_error() {
        let af = chain_framework(3);
        let l = lab(&[(1, Label::In)]);
        assert!(matches!(
            is_complete_labeling(&af, &l),
            Err(ArgError::NonTotalLabeling { expected: 3, got: 1 })
        ));
        // right size, wrong arguments
        let l = lab(&[(1, Label::In), (2, Label::Out), (9, Label::In)]);
        assert!(is_complete_labeling(&af, &l).is_err());
    }

    #[test]
    fn render() {
        let l = lab(&[(1, Label::In), (2, Label::Out), (3, Label::Undec)]);
        assert_eq!(l.to_string(), "A1=IN A2=OUT A3=UNDEC");
    }
}
