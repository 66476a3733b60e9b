//! Acceptance criteria A1-A8. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use infomarket::argumentation::*;
use infomarket::reputation::ReputationSystem;
use infomarket::sweep::{
    aggregate, run_sweep_detailed, summarize, write_csv, ParameterPoint, Profile, RunSummary,
    SweepGrid, SweepOptions, SweepRecord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Base seed of the desk-scale acceptance sweep.
const SWEEP_SEED: u64 = 1;
/// Seed for the random frameworks of A5.
const FRAMEWORK_SEED: u64 = 2;
const RANDOM_FRAMEWORKS: usize = 200;
const MAX_RANDOM_ARGS: u32 = 8;
/// A1 requires the wi-ii gap to exceed this many standard errors.
const A1_STANDARD_ERRORS: f64 = 2.0;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

struct Desk {
    points: Vec<(ParameterPoint, Vec<RunSummary>)>,
    csv: Vec<u8>,
    audit: Result<(), String>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

impl Desk {
    fn run() -> Self {
        let grid = SweepGrid::for_profile(Profile::Desk, SWEEP_SEED);
        let options = SweepOptions { audit: true, workers: None };
        match run_sweep_detailed(&grid, options) {
            Ok(points) => {
                let csv = csv_of(&points);
                Self { points, csv, audit: Ok(()) }
            }
            Err(e) => Self { points: Vec::new(), csv: Vec::new(), audit: Err(e.to_string()) },
        }
    }

    fn runs(&self, rep: ReputationSystem, dn: u32, f_ii: f64, delta: f64, alpha: f64) -> &[RunSummary] {
        self.points
            .iter()
            .find(|(p, _)| {
                p.rep_system == rep
                    && p.delta_n_arg == dn
                    && close(p.f_ii, f_ii)
                    && close(p.delta, delta)
                    && close(p.alpha, alpha)
            })
            .map(|(_, r)| r.as_slice())
            .unwrap_or_else(|| panic!("point {rep} {dn} {f_ii} {delta} {alpha} not in sweep"))
    }

    /// (wi mean, ii mean) across runs.
    fn means(&self, rep: ReputationSystem, dn: u32, f_ii: f64, delta: f64, alpha: f64) -> (f64, f64) {
        let runs = self.runs(rep, dn, f_ii, delta, alpha);
        let wi: Vec<f64> = runs.iter().filter_map(|r| r.wi).collect();
        let ii: Vec<f64> = runs.iter().filter_map(|r| r.ii).collect();
        (aggregate(&wi).unwrap().0, aggregate(&ii).unwrap().0)
    }
}

fn csv_of(points: &[(ParameterPoint, Vec<RunSummary>)]) -> Vec<u8> {
    let records: Vec<SweepRecord> = points
        .iter()
        .flat_map(|(p, runs)| summarize(p, runs).unwrap())
        .collect();
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).unwrap();
    buf
}

fn a1(desk: &Desk) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for dn in [2, 3, 4] {
        for f_ii in [0.1, 0.5, 0.9] {
            for delta in [0.1, 0.5] {
                checked += 1;
                let runs = desk.runs(ReputationSystem::R1, dn, f_ii, delta, 0.0);
                let diffs: Vec<f64> = runs.iter().map(|r| r.wi.unwrap() - r.ii.unwrap()).collect();
                let (mean, std) = aggregate(&diffs).unwrap();
                let se = std / (diffs.len() as f64).sqrt();
                if !(mean > A1_STANDARD_ERRORS * se && mean > 0.0) {
                    failures.push(format!("dn={dn} f_ii={f_ii} delta={delta}: gap {mean:.3}, se {se:.3}"));
                }
            }
        }
    }
    Outcome {
        id: "A1",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("wi beats ii by > {A1_STANDARD_ERRORS} SE at alpha=0 in all {checked} R1 combinations")
        } else {
            failures.join("; ")
        },
    }
}

fn a2(desk: &Desk) -> Outcome {
    let (wi, ii) = desk.means(ReputationSystem::R1, 2, 0.5, 0.5, 0.9);
    Outcome {
        id: "A2",
        pass: ii > wi,
        detail: format!("R1 dn=2 f_ii=0.5 delta=0.5 alpha=0.9: ii {ii:.3} vs wi {wi:.3} (need ii > wi)"),
    }
}

fn a3(desk: &Desk) -> Outcome {
    let (wi0, ii0) = desk.means(ReputationSystem::R1, 2, 0.5, 0.5, 0.0);
    let (wi1, ii1) = desk.means(ReputationSystem::R1, 2, 0.5, 0.5, 1.0);
    Outcome {
        id: "A3",
        pass: ii1 > ii0 && wi1 < wi0,
        detail: format!("ii {ii0:.3} -> {ii1:.3} (need increase), wi {wi0:.3} -> {wi1:.3} (need decrease)"),
    }
}

fn a4(desk: &Desk) -> Outcome {
    let (wi2, ii2) = desk.means(ReputationSystem::R2, 2, 0.5, 0.5, 0.5);
    let (wi3, ii3) = desk.means(ReputationSystem::R2, 3, 0.5, 0.5, 0.5);
    Outcome {
        id: "A4",
        pass: wi2 > wi3 && ii2 < ii3,
        detail: format!(
            "R2 alpha=0.5: wi dn2 {wi2:.3} vs dn3 {wi3:.3} (need >), ii dn2 {ii2:.3} vs dn3 {ii3:.3} (need <)"
        ),
    }
}

fn all_labelings(af: &ArgumentationFramework) -> Vec<Labeling> {
    let ids: Vec<ArgumentId> = af.arguments().iter().copied().collect();
    (0..3usize.pow(ids.len() as u32))
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

fn a5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(FRAMEWORK_SEED);
    let mut failures = Vec::new();
    for case in 0..RANDOM_FRAMEWORKS {
        let n = rng.gen_range(0..=MAX_RANDOM_ARGS);
        let density: f64 = rng.gen();
        let ids: Vec<ArgumentId> = (1..=n).map(ArgumentId).collect();
        let mut attacks = Vec::new();
        for &a in &ids {
            for &b in &ids {
                if rng.gen::<f64>() < density {
                    attacks.push((a, b));
                }
            }
        }
        let af = ArgumentationFramework::new(ids, attacks).unwrap();

        let oracle: BTreeSet<Labeling> = all_labelings(&af)
            .into_iter()
            .filter(|l| is_complete_labeling(&af, l).unwrap())
            .collect();
        let got: BTreeSet<Labeling> = complete_labelings(&af).unwrap().into_iter().collect();
        if got != oracle {
            failures.push(format!("case {case}: enumeration differs from brute force"));
            continue;
        }
        let g = grounded_labeling(&af);
        let g_in: BTreeSet<_> = g.with_label(Label::In).collect();
        let minimal = oracle
            .iter()
            .all(|l| g_in.is_subset(&l.with_label(Label::In).collect()));
        if !oracle.contains(&g) || !minimal {
            failures.push(format!("case {case}: grounded labeling is not the In-minimal complete labeling"));
        }
    }
    Outcome {
        id: "A5",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{RANDOM_FRAMEWORKS} random frameworks (n <= {MAX_RANDOM_ARGS}) match brute force exactly")
        } else {
            failures.join("; ")
        },
    }
}

fn a6() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=12u32 {
        let all = complete_labelings(&chain_framework(n)).unwrap();
        let ok = all.len() == 1
            && all[0].iter().all(|(a, l)| {
                l == if a.0 % 2 == n % 2 { Label::In } else { Label::Out }
            });
        if !ok {
            failures.push(format!("chain({n})"));
        }
    }
    Outcome {
        id: "A6",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "chains 1..12 have one complete labeling with A_i In iff i = n mod 2".into()
        } else {
            format!("wrong labelings for {}", failures.join(", "))
        },
    }
}

fn a7() -> Outcome {
    let a1 = ArgumentId(1);
    let (alex, charles, bob) = (chain_framework(1), chain_framework(2), chain_framework(3));
    let u = chain_framework(3);
    let narrative = at_least_as_informed(&bob, &alex, a1, &u).unwrap()
        && at_least_as_informed(&charles, &alex, a1, &u).unwrap()
        && at_least_as_informed(&bob, &charles, a1, &u).unwrap();

    let mut total = 0;
    let mut violations = Vec::new();
    for n in 1..=10u32 {
        for m in 1..=n {
            for k in 1..=m {
                for j in 1..=k {
                    total += 1;
                    let ok = at_least_as_informed(
                        &chain_framework(m),
                        &chain_framework(k),
                        ArgumentId(j),
                        &chain_framework(n),
                    )
                    .unwrap();
                    if !ok {
                        violations.push((n, m, k, j));
                    }
                }
            }
        }
    }
    let detail = match violations.first() {
        None => format!("Bob/Charles/Alex ordering holds: {narrative}; all {total} prefix triples monotone"),
        Some((n, m, k, j)) => format!(
            "Bob/Charles/Alex ordering holds: {narrative}; {} of {total} prefix triples not monotone, \
             first: universe chain({n}), X=chain({m}), Y=chain({k}), A{j}",
            violations.len()
        ),
    };
    Outcome { id: "A7", pass: narrative && violations.is_empty(), detail }
}

fn a8(first: &Desk) -> Outcome {
    let second = Desk::run();
    let audits = first.audit.clone().and(second.audit.clone());
    let identical = !first.csv.is_empty() && first.csv == second.csv;
    let detail = match &audits {
        Err(e) => format!("invariant violated: {e}"),
        Ok(()) => format!(
            "conservation and profit identity held every round of {} points x 2 sweeps; csv {} bytes, identical: {identical}",
            first.points.len(),
            first.csv.len()
        ),
    };
    Outcome { id: "A8", pass: audits.is_ok() && identical, detail }
}

fn main() {
    // `cargo test -- <filter>` passes extra arguments; only run on an unfiltered invocation
    // or when the filter names this suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }

    let started = Instant::now();
    let desk = Desk::run();
    let sweep_secs = started.elapsed().as_secs_f64();

    let outcomes = if let Err(e) = &desk.audit {
        // sweep-dependent criteria cannot be evaluated
        let mut v: Vec<Outcome> = ["A1", "A2", "A3", "A4"]
            .into_iter()
            .map(|id| Outcome { id, pass: false, detail: format!("desk sweep failed: {e}") })
            .collect();
        v.extend([a5(), a6(), a7(), a8(&desk)]);
        v
    } else {
        vec![a1(&desk), a2(&desk), a3(&desk), a4(&desk), a5(), a6(), a7(), a8(&desk)]
    };

    println!("acceptance (desk sweep seed {SWEEP_SEED}, {sweep_secs:.1}s per sweep)");
    for o in &outcomes {
        println!("{} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!(
        "{} passed, {} failed, {:.1}s total",
        outcomes.len() - failed,
        failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
