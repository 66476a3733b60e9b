//! Graded informedness of two agents about one argument.
//!
//! Agent X is at least as informed as Y about `a` when X and Y disagree on
//! `a` and pooling their frameworks confirms X, or when they agree and X keeps
//! its position against every criticism Y withstands. Criticism ranges over
//! the induced subframeworks of a finite universe supplied by the caller.

use std::collections::BTreeSet;

use super::{can_defend, can_deny, ArgError, ArgumentId, ArgumentationFramework};

/// Upper bound on universe size, since criticism enumerates `2^n` subsets.
pub const DEFAULT_UNIVERSE_BOUND: usize = 12;

pub fn at_least_as_informed(
    x: &ArgumentationFramework,
    y: &ArgumentationFramework,
    a: ArgumentId,
    universe: &ArgumentationFramework,
) -> Result<bool, ArgError> {
    at_least_as_informed_bounded(x, y, a, universe, DEFAULT_UNIVERSE_BOUND)
}

pub fn at_least_as_informed_bounded(
    x: &ArgumentationFramework,
    y: &ArgumentationFramework,
    a: ArgumentId,
    universe: &ArgumentationFramework,
    bound: usize,
) -> Result<bool, ArgError> {
    if universe.len() > bound {
        return Err(ArgError::TooLarge {
            size: universe.len(),
            bound,
        });
    }
    for af in [x, y] {
        if !af.contains(a) {
            return Err(ArgError::ArgumentNotFound(a));
        }
        if !af.is_subframework_of(universe) {
            return Err(ArgError::NotInUniverse);
        }
    }

    let x_defends = can_defend(x, a)?;
    let x_denies = can_deny(x, a)?;
    let y_defends = can_defend(y, a)?;
    let y_denies = can_deny(y, a)?;

    // disagreement settled in X's favour by pooling
    if x_defends && y_denies && can_defend(&x.union(y), a)? {
        return Ok(true);
    }
    if x_denies && y_defends && can_deny(&x.union(y), a)? {
        return Ok(true);
    }

    // agreement: X must survive whatever criticism Y survives
    if x_defends && y_defends && survives_all(x, y, a, universe, can_defend)? {
        return Ok(true);
    }
    if x_denies && y_denies && survives_all(x, y, a, universe, can_deny)? {
        return Ok(true);
    }
    Ok(false)
}

type Holds = fn(&ArgumentationFramework, ArgumentId) -> Result<bool, ArgError>;

fn survives_all(
    x: &ArgumentationFramework,
    y: &ArgumentationFramework,
    a: ArgumentId,
    universe: &ArgumentationFramework,
    holds: Holds,
) -> Result<bool, ArgError> {
    for z in induced_subframeworks(universe) {
        if holds(&y.union(&z), a)? && !holds(&x.union(&z), a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every induced subframework of `universe`, one per argument subset.
pub fn induced_subframeworks(
    universe: &ArgumentationFramework,
) -> impl Iterator<Item = ArgumentationFramework> + '_ {
    let ids: Vec<ArgumentId> = universe.arguments().iter().copied().collect();
    let n = ids.len();
    assert!(n < 64, "universe too large to enumerate");
    (0u64..(1u64 << n)).map(move |mask| {
        let keep: BTreeSet<ArgumentId> = ids
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| *a)
            .collect();
        universe.induced(&keep)
    })
}
