use super::{ArgError, ArgumentId, ArgumentationFramework, Label, Labeling};

/// Upper bound on framework size for complete-labeling enumeration.
pub const DEFAULT_LABELING_BOUND: usize = 16;

/// Dense re-indexing of a framework: arguments 0..n in id order with
/// attacker lists.
struct Dense {
    ids: Vec<ArgumentId>,
    attackers: Vec<Vec<usize>>,
}

impl Dense {
    fn new(af: &ArgumentationFramework) -> Self {
        let ids: Vec<ArgumentId> = af.arguments().iter().copied().collect();
        let index = |a: ArgumentId| ids.binary_search(&a).expect("attack endpoint is an argument");
        let mut attackers = vec![Vec::new(); ids.len()];
        for &(a, b) in af.attacks() {
            attackers[index(b)].push(index(a));
        }
        Self { ids, attackers }
    }

    fn labeling(&self, labels: &[Label]) -> Labeling {
        self.ids.iter().copied().zip(labels.iter().copied()).collect()
    }

    fn consistent(&self, j: usize, labels: &[Label]) -> bool {
        let mut any_in = false;
        let mut all_out = true;
        for &b in &self.attackers[j] {
            match labels[b] {
                Label::In => {
                    any_in = true;
                    all_out = false;
                }
                Label::Out => {}
                Label::Undec => all_out = false,
            }
        }
        match labels[j] {
            Label::In => all_out,
            Label::Out => any_in,
            Label::Undec => !any_in && !all_out,
        }
    }
}

/// All complete labelings of `af`, using [`DEFAULT_LABELING_BOUND`].
pub fn complete_labelings(af: &ArgumentationFramework) -> Result<Vec<Labeling>, ArgError> {
    complete_labelings_bounded(af, DEFAULT_LABELING_BOUND)
}

/// Depth-first search over label assignments in argument-id order. The
/// constraints of an argument are checked as soon as it and all of its
/// attackers carry a label, which prunes most of the `3^n` space.
pub fn complete_labelings_bounded(
    af: &ArgumentationFramework,
    bound: usize,
) -> Result<Vec<Labeling>, ArgError> {
    if af.len() > bound {
        return Err(ArgError::TooLarge {
            size: af.len(),
            bound,
        });
    }
    let dense = Dense::new(af);
    let n = dense.ids.len();
    // checks[k] lists the arguments that become fully determined once position k is labeled
    let mut checks = vec![Vec::new(); n];
    for j in 0..n {
        let ready = dense.attackers[j].iter().copied().fold(j, usize::max);
        checks[ready].push(j);
    }

    let mut out = Vec::new();
    let mut labels = vec![Label::Undec; n];
    search(&dense, &checks, 0, &mut labels, &mut out);
    Ok(out)
}

fn search(
    dense: &Dense,
    checks: &[Vec<usize>],
    k: usize,
    labels: &mut [Label],
    out: &mut Vec<Labeling>,
) {
    if k == labels.len() {
        out.push(dense.labeling(labels));
        return;
    }
    for label in Label::ALL {
        labels[k] = label;
        if checks[k].iter().all(|&j| dense.consistent(j, labels)) {
            search(dense, checks, k + 1, labels, out);
        }
    }
}

/// The grounded labeling by fixpoint iteration: label In every argument whose
/// attackers are all Out, label Out every argument with an In attacker, and
/// leave whatever remains Undec.
pub fn grounded_labeling(af: &ArgumentationFramework) -> Labeling {
    let dense = Dense::new(af);
    let n = dense.ids.len();
    let mut labels: Vec<Option<Label>> = vec![None; n];
    loop {
        let mut changed = false;
        for j in 0..n {
            if labels[j].is_some() {
                continue;
            }
            let attackers = &dense.attackers[j];
            if attackers.iter().all(|&b| labels[b] == Some(Label::Out)) {
                labels[j] = Some(Label::In);
                changed = true;
            } else if attackers.iter().any(|&b| labels[b] == Some(Label::In)) {
                labels[j] = Some(Label::Out);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<Label> = labels.into_iter().map(|l| l.unwrap_or(Label::Undec)).collect();
    dense.labeling(&labels)
}

fn grounded_status(af: &ArgumentationFramework, a: ArgumentId) -> Result<Label, ArgError> {
    if !af.contains(a) {
        return Err(ArgError::ArgumentNotFound(a));
    }
    Ok(grounded_labeling(af)
        .get(a)
        .expect("grounded labeling is total"))
}

/// `a` is In in the grounded labeling, i.e. accepted in every complete labeling.
pub fn can_defend(af: &ArgumentationFramework, a: ArgumentId) -> Result<bool, ArgError> {
    Ok(grounded_status(af, a)? == Label::In)
}

/// `a` is Out in the grounded labeling, i.e. rejected in every complete labeling.
pub fn can_deny(af: &ArgumentationFramework, a: ArgumentId) -> Result<bool, ArgError> {
    Ok(grounded_status(af, a)? == Label::Out)
}
