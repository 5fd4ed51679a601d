use std::collections::{BTreeSet, HashMap};

use crate::cps::{CpsError, CutSelector, Orientation, ReductionStep, ReductionTrace, Rule, StepParams};
use crate::label::Label;
use crate::model::{EdgeRef, Forest, PendantShape};

/// Which of the two forests an operation touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    fn of(o: Orientation) -> (Side, Side) {
        match o {
            Orientation::Forward => (Side::First, Side::Second),
            Orientation::Reversed => (Side::Second, Side::First),
        }
    }

    pub fn pick<'a>(self, f: &'a Forest, f2: &'a Forest) -> &'a Forest {
        match self {
            Side::First => f,
            Side::Second => f2,
        }
    }
}

/// What a step does to the pair of forests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepEffect {
    /// `F - x` and `F' - x`.
    RemoveLeaf(Label),
    /// Remove edge `{u, v}` of component `tree` of one forest.
    Cut { side: Side, tree: usize, u: usize, v: usize },
}

fn fail<T>(msg: impl Into<String>) -> Result<T, CpsError> {
    Err(CpsError::InapplicableStep(msg.into()))
}

fn check_ground_sets(f: &Forest, f2: &Forest) -> Result<BTreeSet<Label>, CpsError> {
    let g = f.ground_set();
    if g != f2.ground_set() {
        return Err(CpsError::GroundSetMismatch);
    }
    if g.is_empty() {
        return Err(CpsError::EmptyGroundSet);
    }
    Ok(g)
}

fn pendant_cut(forest: &Forest, side: Side, l: &Label) -> Result<StepEffect, CpsError> {
    let (tree, u, v) = forest
        .resolve(&EdgeRef::PendantOf(l.clone()))
        .or_else(|e| fail(e.to_string()))?;
    Ok(StepEffect::Cut { side, tree, u, v })
}

fn shape_cut(forest: &Forest, side: Side, x: &Label, edge: (usize, usize)) -> StepEffect {
    StepEffect::Cut {
        side,
        tree: forest.component_of(x).unwrap(),
        u: edge.0,
        v: edge.1,
    }
}

/// The edge of the second-role tree that a `C2b_ii` step deletes: incident
/// with the neighbor of `x`, off the `x`-`y` path.
fn c2b_edge(other: &Forest, x: &Label, y: &Label) -> Option<(usize, usize, usize)> {
    let i = other.component_of(x)?;
    let t = &other.trees()[i];
    let g = t.graph();
    let vx = t.vertex_of(x)?;
    let vy = t.vertex_of(y)?;
    let path = g.tree_path(vx, vy);
    if path.len() < 3 {
        return None;
    }
    let u = path[1];
    let next = path[2];
    let w = *g.neighbors(u).iter().find(|&&w| w != vx && w != next)?;
    Some((i, u, w))
}

/// Evaluates the side conditions of `step` directly and, if they hold,
/// returns its effect. The message of an error names the violated condition.
pub fn check_step(f: &Forest, f2: &Forest, step: &ReductionStep) -> Result<StepEffect, CpsError> {
    step.check_schema().or_else(fail)?;
    let ground = check_ground_sets(f, f2)?;
    let x = &step.label;
    if !ground.contains(x) {
        return fail(format!("{x} is not a leaf"));
    }
    let (a_side, b_side) = Side::of(step.orientation);
    let a = a_side.pick(f, f2);
    let b = b_side.pick(f, f2);
    let p = &step.params;

    match step.rule {
        Rule::C1 => {
            let y = p.partner.as_ref().unwrap();
            if y == x {
                return fail("partner equals x");
            }
            if !f.has_cherry(x, y) || !f2.has_cherry(x, y) {
                return fail(format!("({x},{y}) is not a cherry of both forests"));
            }
            if ground.len() < 2 {
                return fail("only one leaf remains");
            }
            return Ok(StepEffect::RemoveLeaf(x.clone()));
        }
        Rule::C3 => {
            if !a.is_singleton(x) {
                return fail(format!("{x} is not an isolated vertex of the first-role forest"));
            }
            if step.orientation == Orientation::Reversed && f.is_singleton(x) {
                return fail(format!("{x} is isolated in both forests; C3 is then written forward"));
            }
            if ground.len() < 2 {
                return fail("only one leaf remains");
            }
            return Ok(StepEffect::RemoveLeaf(x.clone()));
        }
        _ => {}
    }

    let y = p.partner.as_ref().unwrap();
    if y == x {
        return fail("partner equals x");
    }
    if !a.has_cherry(x, y) {
        return fail(format!("({x},{y}) is not a cherry of the first-role forest"));
    }
    let cut = p.cut.unwrap();
    let ends_cut = || match cut {
        CutSelector::Ex => pendant_cut(a, a_side, x),
        CutSelector::Ey => pendant_cut(a, a_side, y),
        _ => unreachable!("schema restricts the selector"),
    };

    match step.rule {
        Rule::C2aI | Rule::C2aII | Rule::C2aIII => {
            let z = p.z.as_ref().unwrap();
            if z == y || z == x {
                return fail("z must differ from x and y");
            }
            if !b.has_cherry(x, z) {
                return fail(format!("({x},{z}) is not a cherry of the second-role forest"));
            }
            if step.rule == Rule::C2aI {
                return ends_cut();
            }
            let shapes = a
                .tree_of(x)
                .unwrap()
                .pendant_shapes(x, y)
                .or_else(|e| fail(e.to_string()))?;
            let pl = p.p.as_ref().unwrap();
            if step.rule == Rule::C2aII {
                let Some(s) = shapes.iter().find(|s| !s.is_quad() && &s.p == pl) else {
                    return fail(format!("(({x},{y}),{pl}) is not a pendant subtree"));
                };
                if !s.proper {
                    return fail(format!("(({x},{y}),{pl}) is not a proper pendant subtree"));
                }
                return Ok(match cut {
                    CutSelector::Ep => shape_cut(a, a_side, x, s.p_edge),
                    _ => shape_cut(a, a_side, x, s.cut_edge.unwrap()),
                });
            }
            let ql = p.q.as_ref().unwrap();
            if pl >= ql {
                return fail("C2a_iii requires p < q");
            }
            let Some(s) = shapes
                .iter()
                .find(|s: &&PendantShape| s.is_quad() && &s.p == pl && s.q.as_ref() == Some(ql))
            else {
                return fail(format!("(({x},{y}),({pl},{ql})) is not a pendant subtree"));
            };
            if !s.proper {
                return fail(format!("(({x},{y}),({pl},{ql})) is not a proper pendant subtree"));
            }
            Ok(match cut {
                CutSelector::Ep => shape_cut(a, a_side, x, s.p_edge),
                CutSelector::Eq => shape_cut(a, a_side, x, s.q_edge.unwrap()),
                _ => shape_cut(a, a_side, x, s.pq_edge.unwrap()),
            })
        }
        Rule::C2bI | Rule::C2bII => {
            if !b.same_tree(x, y) {
                return fail(format!("{x} and {y} are not in one tree of the second-role forest"));
            }
            if b.in_cherry(x) || b.in_cherry(y) {
                return fail(format!("{x} or {y} is in a cherry of the second-role forest"));
            }
            if step.rule == Rule::C2bI {
                return ends_cut();
            }
            let (tree, u, v) = c2b_edge(b, x, y).expect("x has an internal neighbor");
            Ok(StepEffect::Cut {
                side: b_side,
                tree,
                u,
                v,
            })
        }
        Rule::C2c => {
            if b.same_tree(x, y) {
                return fail(format!("{x} and {y} are in one tree of the second-role forest"));
            }
            if b.is_singleton(x) || b.is_singleton(y) {
                return fail(format!("{x} or {y} is isolated in the second-role forest"));
            }
            if b.in_cherry(x) || b.in_cherry(y) {
                return fail(format!("{x} or {y} is in a cherry of the second-role forest"));
            }
            ends_cut()
        }
        Rule::C1 | Rule::C3 => unreachable!(),
    }
}

pub fn apply_effect(f: &Forest, f2: &Forest, effect: &StepEffect) -> (Forest, Forest) {
    match effect {
        StepEffect::RemoveLeaf(x) => (
            f.remove_leaf(x).expect("leaf exists"),
            f2.remove_leaf(x).expect("leaf exists"),
        ),
        StepEffect::Cut { side, tree, u, v } => match side {
            Side::First => (f.cut(*tree, *u, *v).expect("edge exists"), f2.clone()),
            Side::Second => (f.clone(), f2.cut(*tree, *u, *v).expect("edge exists")),
        },
    }
}

/// Applies one step after checking its side conditions.
pub fn apply_step(f: &Forest, f2: &Forest, step: &ReductionStep) -> Result<(Forest, Forest), CpsError> {
    let effect = check_step(f, f2, step)?;
    Ok(apply_effect(f, f2, &effect))
}

/// Every legal step at `(f, f2)` with its effect, sorted and duplicate-free.
pub(crate) fn enumerate(f: &Forest, f2: &Forest) -> Result<Vec<(ReductionStep, StepEffect)>, CpsError> {
    let ground = check_ground_sets(f, f2)?;
    let mut out: Vec<(ReductionStep, StepEffect)> = Vec::new();
    let shrinkable = ground.len() >= 2;

    if shrinkable {
        for (x, y) in f.cherries() {
            if f2.has_cherry(&x, &y) {
                for (a, b) in [(&x, &y), (&y, &x)] {
                    out.push((
                        ReductionStep::c1(a.clone(), b.clone()),
                        StepEffect::RemoveLeaf(a.clone()),
                    ));
                }
            }
        }
        for x in &ground {
            if f.is_singleton(x) {
                out.push((
                    ReductionStep::c3(x.clone(), Orientation::Forward),
                    StepEffect::RemoveLeaf(x.clone()),
                ));
            } else if f2.is_singleton(x) {
                out.push((
                    ReductionStep::c3(x.clone(), Orientation::Reversed),
                    StepEffect::RemoveLeaf(x.clone()),
                ));
            }
        }
    }

    for orientation in [Orientation::Forward, Orientation::Reversed] {
        let (a_side, b_side) = Side::of(orientation);
        let a = a_side.pick(f, f2);
        let b = b_side.pick(f, f2);
        for (c0, c1) in a.cherries() {
            for (x, y) in [(&c0, &c1), (&c1, &c0)] {
                let step = |rule, params| ReductionStep::cut(rule, orientation, x.clone(), params);
                let base = StepParams {
                    partner: Some(y.clone()),
                    ..StepParams::default()
                };
                let ex = pendant_cut(a, a_side, x)?;
                let ey = pendant_cut(a, a_side, y)?;
                let with_cut = |mut params: StepParams, c| {
                    params.cut = Some(c);
                    params
                };

                let zs: Vec<Label> = b
                    .tree_of(x)
                    .unwrap()
                    .cherry_partners(x)
                    .into_iter()
                    .filter(|z| z != y)
                    .collect();
                let shapes = a.tree_of(x).unwrap().pendant_shapes(x, y).unwrap();
                for z in &zs {
                    let pz = StepParams {
                        z: Some(z.clone()),
                        ..base.clone()
                    };
                    out.push((step(Rule::C2aI, with_cut(pz.clone(), CutSelector::Ex)), ex.clone()));
                    out.push((step(Rule::C2aI, with_cut(pz.clone(), CutSelector::Ey)), ey.clone()));
                    for s in shapes.iter().filter(|s| s.proper) {
                        let pp = StepParams {
                            p: Some(s.p.clone()),
                            q: s.q.clone(),
                            ..pz.clone()
                        };
                        if s.is_quad() {
                            let cuts = [
                                (CutSelector::Ep, s.p_edge),
                                (CutSelector::Eq, s.q_edge.unwrap()),
                                (CutSelector::Epq, s.pq_edge.unwrap()),
                            ];
                            for (c, e) in cuts {
                                out.push((
                                    step(Rule::C2aIII, with_cut(pp.clone(), c)),
                                    shape_cut(a, a_side, x, e),
                                ));
                            }
                        } else {
                            let cuts = [(CutSelector::Ep, s.p_edge), (CutSelector::Exyp, s.cut_edge.unwrap())];
                            for (c, e) in cuts {
                                out.push((
                                    step(Rule::C2aII, with_cut(pp.clone(), c)),
                                    shape_cut(a, a_side, x, e),
                                ));
                            }
                        }
                    }
                }

                if b.in_cherry(x) || b.in_cherry(y) {
                    continue;
                }
                if b.same_tree(x, y) {
                    out.push((step(Rule::C2bI, with_cut(base.clone(), CutSelector::Ex)), ex.clone()));
                    out.push((step(Rule::C2bI, with_cut(base.clone(), CutSelector::Ey)), ey.clone()));
                    let (tree, u, v) = c2b_edge(b, x, y).expect("x has an internal neighbor");
                    out.push((
                        step(Rule::C2bII, with_cut(base.clone(), CutSelector::C2bEdge)),
                        StepEffect::Cut {
                            side: b_side,
                            tree,
                            u,
                            v,
                        },
                    ));
                } else if !b.is_singleton(x) && !b.is_singleton(y) {
                    out.push((step(Rule::C2c, with_cut(base.clone(), CutSelector::Ex)), ex.clone()));
                    out.push((step(Rule::C2c, with_cut(base.clone(), CutSelector::Ey)), ey.clone()));
                }
            }
        }
    }
    out.sort_by(|p, q| p.0.cmp(&q.0));
    out.dedup_by(|p, q| p.0 == q.0);
    Ok(out)
}

/// Every step legal at `(f, f2)`, covering both orientations, in
/// lexicographic order.
pub fn applicable_steps(f: &Forest, f2: &Forest) -> Result<Vec<ReductionStep>, CpsError> {
    Ok(enumerate(f, f2)?.into_iter().map(|(s, _)| s).collect())
}

/// Replays a trace and returns every intermediate state, starting with
/// `(f, f2)` and ending in the terminal pair.
pub fn replay(f: &Forest, f2: &Forest, tr: &ReductionTrace) -> Result<Vec<(Forest, Forest)>, CpsError> {
    check_ground_sets(f, f2)?;
    let mut states = vec![(f.clone(), f2.clone())];
    for (i, step) in tr.steps.iter().enumerate() {
        let (a, b) = states.last().unwrap();
        let next = apply_step(a, b, step).map_err(|e| CpsError::ReplayError {
            index: i,
            reason: match e {
                CpsError::InapplicableStep(m) => m,
                other => other.to_string(),
            },
        })?;
        states.push(next);
    }
    let (a, b) = states.last().unwrap();
    if a.label_count() != 1 || a.len() != 1 || b.len() != 1 {
        return Err(CpsError::BadTerminal(format!("final state is {a:?} and {b:?}")));
    }
    Ok(states)
}

/// Replays `tr` from `(f, f2)` and returns its weight, the number of
/// edge-cutting steps.
pub fn validate_trace(f: &Forest, f2: &Forest, tr: &ReductionTrace) -> Result<usize, CpsError> {
    replay(f, f2, tr)?;
    Ok(tr.steps.iter().filter(|s| s.rule.cost() == 1).count())
}

/// The label sequence `(x_1, ..., x_m)` of a trace over `ground`: the step
/// labels followed by the one leaf no step removes.
pub fn labels_of(tr: &ReductionTrace, ground: &BTreeSet<Label>) -> Vec<Label> {
    let mut remaining = ground.clone();
    let mut out = Vec::with_capacity(tr.steps.len() + 1);
    for s in &tr.steps {
        if s.rule.cost() == 0 {
            remaining.remove(&s.label);
        }
        out.push(s.label.clone());
    }
    if remaining.len() == 1 {
        out.push(remaining.into_iter().next().unwrap());
    }
    out
}

/// Minimum weight over all traces whose label sequence is `sigma`, or
/// `None` when `sigma` is not a cherry picking sequence.
pub fn sequence_weight(f: &Forest, f2: &Forest, sigma: &[Label]) -> Result<Option<usize>, CpsError> {
    check_ground_sets(f, f2)?;
    let mut memo: HashMap<(usize, String, String), Option<usize>> = HashMap::new();
    Ok(seq_search(f, f2, sigma, 0, &mut memo))
}

fn seq_search(
    f: &Forest,
    f2: &Forest,
    sigma: &[Label],
    i: usize,
    memo: &mut HashMap<(usize, String, String), Option<usize>>,
) -> Option<usize> {
    if i + 1 == sigma.len() {
        let done = f.label_count() == 1 && f.len() == 1 && f2.len() == 1 && f.ground_set().contains(&sigma[i]);
        return done.then_some(0);
    }
    if i >= sigma.len() {
        return None;
    }
    let key = (i, f.canonical_form(), f2.canonical_form());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut best: Option<usize> = None;
    for (step, effect) in enumerate(f, f2).ok()? {
        if step.label != sigma[i] {
            continue;
        }
        let (a, b) = apply_effect(f, f2, &effect);
        if let Some(w) = seq_search(&a, &b, sigma, i + 1, memo) {
            let total = w + step.rule.cost();
            best = Some(best.map_or(total, |b: usize| b.min(total)));
        }
    }
    memo.insert(key, best);
    best
}
