//! Finite abstract argumentation: frameworks, complete and grounded
//! labelings, composition, and graded informedness.

mod apx;
mod framework;
mod informedness;
mod labeling;
mod semantics;

use thiserror::Error;

pub use apx::{parse_apx, ApxError, NamedFramework};
pub use framework::{
    chain_framework, framework_union, is_subframework, ArgumentId, ArgumentationFramework,
};
pub use informedness::{
    at_least_as_informed, at_least_as_informed_bounded, induced_subframeworks,
    DEFAULT_UNIVERSE_BOUND,
};
pub use labeling::{is_complete_labeling, Label, Labeling};
pub use semantics::{
    can_defend, can_deny, complete_labelings, complete_labelings_bounded, grounded_labeling,
    DEFAULT_LABELING_BOUND,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ArgError {
    #[error("attack ({attacker}, {target}) references {missing}, which is not an argument")]
    DanglingAttack {
        attacker: ArgumentId,
        target: ArgumentId,
        missing: ArgumentId,
    },
    #[error("labeling is not total: framework has {expected} arguments, labeling covers {got}")]
    NonTotalLabeling { expected: usize, got: usize },
    #[error("framework has {size} arguments, enumeration bound is {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("argument {0} not found")]
    ArgumentNotFound(ArgumentId),
    #[error("framework is not contained in the universe")]
    NotInUniverse,
}
