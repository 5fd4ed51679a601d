//! Greedy and exact construction of cherry picking sequences.
//!
//! The exact search is iterative deepening on the weight bound with a
//! memo of refuted `(state, budget)` pairs. Children are tried in the
//! order of [`applicable_steps`](crate::cps::applicable_steps), so the
//! first trace found at the optimal bound is the lexicographically least.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;

use crate::cps::{
    apply_effect, apply_step, enumerate, validate_trace, CpsError, CutSelector, Orientation, ReductionStep,
    ReductionTrace, Rule, StepParams,
};
use crate::label::Label;
use crate::model::{classify, CherryCase, Forest, PhyloTree};

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Maximum number of expanded states before giving up with bounds.
    pub budget: Option<u64>,
    /// Worker threads for the top level; `0` or `1` is sequential.
    pub threads: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Exact { min_weight: usize, witness: ReductionTrace },
    /// Budget exhausted: the optimum lies in `lower..=upper` and `best` has
    /// weight `upper`.
    Bounded { lower: usize, upper: usize, best: ReductionTrace },
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn min_weight(&self) -> Option<usize> {
        match &self.outcome {
            SearchOutcome::Exact { min_weight, .. } => Some(*min_weight),
            SearchOutcome::Bounded { .. } => None,
        }
    }

    pub fn witness(&self) -> &ReductionTrace {
        match &self.outcome {
            SearchOutcome::Exact { witness, .. } => witness,
            SearchOutcome::Bounded { best, .. } => best,
        }
    }
}

/// Builds a cherry picking sequence by the existence recipe: isolated
/// leaves are removed, shared cherries are picked, and otherwise the
/// pendant edge of a cherry leaf is cut and that leaf removed next.
pub fn greedy_cps(f: &Forest, f2: &Forest) -> Result<ReductionTrace, CpsError> {
    let ground = f.ground_set();
    if ground != f2.ground_set() {
        return Err(CpsError::GroundSetMismatch);
    }
    if ground.is_empty() {
        return Err(CpsError::EmptyGroundSet);
    }
    let mut steps = Vec::new();
    let (mut a, mut b) = (f.clone(), f2.clone());
    let c3 = |x: &Label, a: &Forest| {
        let o = if a.is_singleton(x) { Orientation::Forward } else { Orientation::Reversed };
        ReductionStep::c3(x.clone(), o)
    };
    while a.label_count() > 1 {
        let mut batch = Vec::new();
        let cherry = match a.cherries().into_iter().next() {
            Some(c) => Some((c, Orientation::Forward)),
            None => b.cherries().into_iter().next().map(|c| (c, Orientation::Reversed)),
        };
        match cherry {
            None => {
                let x = a.ground_set().into_iter().next().unwrap();
                batch.push(c3(&x, &a));
            }
            Some(((x, y), o)) => {
                let (ca, cb) = match o {
                    Orientation::Forward => (&a, &b),
                    Orientation::Reversed => (&b, &a),
                };
                if cb.is_singleton(&x) {
                    batch.push(c3(&x, &a));
                } else if cb.is_singleton(&y) {
                    batch.push(c3(&y, &a));
                } else {
                    let with = |partner: &Label, z: Option<Label>| StepParams {
                        partner: Some(partner.clone()),
                        z,
                        cut: Some(CutSelector::Ex),
                        ..StepParams::default()
                    };
                    let (rule, leaf, params) = match classify(ca, cb, &x, &y).expect("cherry exists") {
                        CherryCase::SameCherry => {
                            batch.push(ReductionStep::c1(x.clone(), y.clone()));
                            (None, x.clone(), StepParams::default())
                        }
                        CherryCase::OtherCherry { leaf, partner } => {
                            let other = if leaf == x { y.clone() } else { x.clone() };
                            (Some(Rule::C2aI), leaf.clone(), with(&other, Some(partner)))
                        }
                        CherryCase::SameTreeNoCherry => (Some(Rule::C2bI), x.clone(), with(&y, None)),
                        CherryCase::DifferentTreesNoCherry => (Some(Rule::C2c), x.clone(), with(&y, None)),
                    };
                    if let Some(rule) = rule {
                        batch.push(ReductionStep::cut(rule, o, leaf.clone(), params));
                        batch.push(ReductionStep::c3(leaf, o));
                    }
                }
            }
        }
        for step in batch {
            let (na, nb) = apply_step(&a, &b, &step)?;
            a = na;
            b = nb;
            steps.push(step);
        }
    }
    Ok(ReductionTrace { steps })
}

struct Search {
    refuted: DashMap<(String, String), usize>,
    nodes: AtomicU64,
    memo_hits: AtomicU64,
    budget: Option<u64>,
    exhausted: AtomicBool,
}

enum Found {
    Yes(Vec<ReductionStep>),
    No,
    Aborted,
}

impl Search {
    fn dfs(&self, f: &Forest, f2: &Forest, k: usize) -> Found {
        if f.label_count() == 1 {
            return Found::Yes(Vec::new());
        }
        if self.exhausted.load(Ordering::Relaxed) {
            return Found::Aborted;
        }
        let key = (f.canonical_form(), f2.canonical_form());
        if let Some(done) = self.refuted.get(&key) {
            if *done >= k {
                self.memo_hits.fetch_add(1, Ordering::Relaxed);
                return Found::No;
            }
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            self.exhausted.store(true, Ordering::Relaxed);
            return Found::Aborted;
        }
        let children = enumerate(f, f2).expect("ground sets stay equal");
        for (step, effect) in children {
            let cost = step.rule.cost();
            if cost > k {
                continue;
            }
            let (a, b) = apply_effect(f, f2, &effect);
            match self.dfs(&a, &b, k - cost) {
                Found::Yes(mut rest) => {
                    rest.insert(0, step);
                    return Found::Yes(rest);
                }
                Found::No => {}
                Found::Aborted => return Found::Aborted,
            }
        }
        self.refuted
            .entry(key)
            .and_modify(|v| *v = (*v).max(k))
            .or_insert(k);
        Found::No
    }

    fn root(&self, f: &Forest, f2: &Forest, k: usize, parallel: bool) -> Found {
        if !parallel || f.label_count() == 1 {
            return self.dfs(f, f2, k);
        }
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let children = enumerate(f, f2).expect("ground sets stay equal");
        let results: Vec<Found> = children
            .par_iter()
            .map(|(step, effect)| {
                let cost = step.rule.cost();
                if cost > k {
                    return Found::No;
                }
                let (a, b) = apply_effect(f, f2, effect);
                match self.dfs(&a, &b, k - cost) {
                    Found::Yes(mut rest) => {
                        rest.insert(0, step.clone());
                        Found::Yes(rest)
                    }
                    other => other,
                }
            })
            .collect();
        let mut aborted = false;
        for r in results {
            match r {
                Found::Yes(t) => return Found::Yes(t),
                Found::Aborted => aborted = true,
                Found::No => {}
            }
        }
        if aborted {
            Found::Aborted
        } else {
            Found::No
        }
    }
}

/// Exact minimum weight of a cherry picking sequence, with a witness.
///
/// The returned value does not depend on `threads`; the witness is the
/// lexicographically least optimal trace in either mode.
pub fn min_weight_cps(f: &Forest, f2: &Forest, opts: &SearchOptions) -> Result<SearchResult, CpsError> {
    let start = Instant::now();
    let greedy = greedy_cps(f, f2)?;
    let upper = validate_trace(f, f2, &greedy)?;
    let search = Search {
        refuted: DashMap::new(),
        nodes: AtomicU64::new(0),
        memo_hits: AtomicU64::new(0),
        budget: opts.budget,
        exhausted: AtomicBool::new(false),
    };
    let parallel = opts.threads > 1;
    let pool = if parallel {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };
    let mut outcome = None;
    for k in 0..=upper {
        let found = match &pool {
            Some(p) => p.install(|| search.root(f, f2, k, true)),
            None => search.root(f, f2, k, false),
        };
        match found {
            Found::Yes(steps) => {
                outcome = Some(SearchOutcome::Exact {
                    min_weight: k,
                    witness: ReductionTrace { steps },
                });
                break;
            }
            Found::No => {}
            Found::Aborted => {
                outcome = Some(SearchOutcome::Bounded {
                    lower: k,
                    upper,
                    best: greedy.clone(),
                });
                break;
            }
        }
    }
    let outcome = outcome.unwrap_or(SearchOutcome::Exact {
        min_weight: upper,
        witness: greedy,
    });
    Ok(SearchResult {
        outcome,
        stats: SearchStats {
            nodes: search.nodes.load(Ordering::Relaxed),
            memo_hits: search.memo_hits.load(Ordering::Relaxed),
            elapsed: start.elapsed(),
        },
    })
}

/// Minimum number of reticulations of a network displaying both forests.
pub fn hybrid_number(f: &Forest, f2: &Forest) -> Result<usize, CpsError> {
    let r = min_weight_cps(f, f2, &SearchOptions::default())?;
    Ok(r.min_weight().expect("unbounded search is exact"))
}

/// TBR distance between two trees on the same labels.
pub fn tbr_distance(t: &PhyloTree, t2: &PhyloTree) -> Result<usize, CpsError> {
    hybrid_number(&Forest::from_tree(t.clone()), &Forest::from_tree(t2.clone()))
}

/// [`tbr_distance`] on forest inputs, rejecting forests of several trees.
pub fn tbr_distance_forests(f: &Forest, f2: &Forest) -> Result<usize, CpsError> {
    if f.len() != 1 || f2.len() != 1 {
        return Err(CpsError::NotATree);
    }
    hybrid_number(f, f2)
}
