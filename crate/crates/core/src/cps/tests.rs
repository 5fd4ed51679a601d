use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::model::Forest;
use crate::testutil::*;

fn q12() -> Forest {
    forest(&["((1,2),(3,4));"])
}

fn q13() -> Forest {
    forest(&["((1,3),(2,4));"])
}

fn c2(rule: Rule, o: Orientation, x: &str, y: &str, cut: CutSelector) -> ReductionStep {
    ReductionStep::cut(
        rule,
        o,
        l(x),
        StepParams {
            partner: Some(l(y)),
            cut: Some(cut),
            ..StepParams::default()
        },
    )
}

fn c2a(x: &str, y: &str, z: &str, cut: CutSelector) -> ReductionStep {
    let mut s = c2(Rule::C2aI, Orientation::Forward, x, y, cut);
    s.params.z = Some(l(z));
    s
}

#[test]
fn isolated_edge_gives_c1_both_ways() {
    let f = forest(&["(1,2);"]);
    let steps = applicable_steps(&f, &f).unwrap();
    assert_eq!(
        steps,
        vec![ReductionStep::c1(l("1"), l("2")), ReductionStep::c1(l("2"), l("1"))]
    );
}

/// Hand count for 12|34 against 13|24: every label sits in a cherry of
/// each tree with different partners, so only (C2a) applies. Per label and
/// orientation that is two `C2a_i` cuts plus `C2a_ii` with two choices of
/// `p` and two cuts each; `((x,y),(p,q))` is the whole tree, so not proper,
/// and `C2a_iii` is out.
#[test]
fn quartet_pair_steps() {
    let steps = applicable_steps(&q12(), &q13()).unwrap();
    let count = |r: Rule| steps.iter().filter(|s| s.rule == r).count();
    assert_eq!(steps.len(), 48);
    assert_eq!(count(Rule::C2aI), 16);
    assert_eq!(count(Rule::C2aII), 32);
    assert_eq!(count(Rule::C2aIII), 0);
    let labels: BTreeSet<&Label> = steps.iter().map(|s| &s.label).collect();
    assert_eq!(labels.len(), 4);
    assert_eq!(steps[0], c2a("1", "2", "3", CutSelector::Ex));
    let mut sorted = steps.clone();
    sorted.sort();
    assert_eq!(sorted, steps);
}

#[test]
fn proper_quad_shape_allows_c2a_iii() {
    // ((5,6),(7,8)) hangs off a larger tree, so it is proper.
    let f = forest(&["((1,2),((5,6),(7,8)));"]);
    let f2 = forest(&["((5,7),(1,((2,6),8)));"]);
    let steps = applicable_steps(&f, &f2).unwrap();
    assert!(steps
        .iter()
        .any(|s| s.rule == Rule::C2aIII && s.label == l("5") && s.params.p == Some(l("7"))));
}

#[test]
fn c3_on_isolated_leaf() {
    let f = forest(&["1;", "(2,3);"]);
    let f2 = forest(&["((2,3),1);"]);
    let steps = applicable_steps(&f, &f2).unwrap();
    assert!(steps.contains(&ReductionStep::c3(l("1"), Orientation::Forward)));
    assert!(!steps.contains(&ReductionStep::c3(l("1"), Orientation::Reversed)));
}

#[test]
fn apply_examples() {
    let f = forest(&["(1,2);"]);
    let (a, b) = apply_step(&f, &f, &ReductionStep::c1(l("1"), l("2"))).unwrap();
    assert_eq!((a.canonical_form(), b.canonical_form()), ("2;\n".into(), "2;\n".into()));

    let (a, b) = apply_step(&q12(), &q13(), &c2a("1", "2", "3", CutSelector::Ex)).unwrap();
    assert_eq!(a, forest(&["1;", "(2,(3,4));"]));
    assert_eq!(b, q13());

    let (a, b) = apply_step(&a, &b, &ReductionStep::c3(l("1"), Orientation::Forward)).unwrap();
    assert_eq!(a, forest(&["(2,(3,4));"]));
    assert_eq!(b, forest(&["(3,(2,4));"]));
}

fn identical_quartet_trace() -> ReductionTrace {
    ReductionTrace {
        steps: vec![
            ReductionStep::c1(l("1"), l("2")),
            ReductionStep::c1(l("2"), l("3")),
            ReductionStep::c1(l("3"), l("4")),
        ],
    }
}

fn quartet_pair_trace() -> ReductionTrace {
    ReductionTrace {
        steps: vec![
            c2a("1", "2", "3", CutSelector::Ex),
            ReductionStep::c3(l("1"), Orientation::Forward),
            ReductionStep::c1(l("2"), l("3")),
            ReductionStep::c1(l("3"), l("4")),
        ],
    }
}

#[test]
fn trace_weights() {
    assert_eq!(validate_trace(&q12(), &q12(), &identical_quartet_trace()), Ok(0));
    let tr = quartet_pair_trace();
    assert_eq!(validate_trace(&q12(), &q13(), &tr), Ok(1));
    let ground = q12().ground_set();
    assert_eq!(labels_of(&tr, &ground), ["1", "1", "2", "3", "4"].map(l).to_vec());
    let single = forest(&["7;"]);
    assert_eq!(labels_of(&ReductionTrace::default(), &single.ground_set()), vec![l("7")]);
    assert_eq!(validate_trace(&single, &single, &ReductionTrace::default()), Ok(0));
}

#[test]
fn replay_failures_name_the_step() {
    let bad = ReductionTrace {
        steps: vec![c2(Rule::C2bI, Orientation::Forward, "1", "2", CutSelector::Ex)],
    };
    match validate_trace(&q12(), &q13(), &bad) {
        Err(CpsError::ReplayError { index: 0, reason }) => assert!(reason.contains("cherry"), "{reason}"),
        other => panic!("unexpected {other:?}"),
    }
    let short = ReductionTrace {
        steps: quartet_pair_trace().steps[..2].to_vec(),
    };
    assert!(matches!(validate_trace(&q12(), &q13(), &short), Err(CpsError::BadTerminal(_))));
    assert_eq!(
        validate_trace(&q12(), &forest(&["((1,3),(2,5));"]), &short),
        Err(CpsError::GroundSetMismatch)
    );
}

#[test]
fn sequence_weights() {
    let sigma = ["1", "1", "2", "3", "4"].map(l);
    assert_eq!(sequence_weight(&q12(), &q13(), &sigma), Ok(Some(1)));
    assert_eq!(sequence_weight(&q12(), &q12(), &["1", "2", "3", "4"].map(l)), Ok(Some(0)));
    assert_eq!(sequence_weight(&q12(), &q13(), &["1", "2", "3", "4"].map(l)), Ok(None));
}

#[test]
fn step_display_and_order() {
    assert_eq!(c2a("1", "2", "3", CutSelector::Ex).to_string(), "C2a_i(1, y=2, z=3, cut=e_x)");
    assert!(ReductionStep::c1(l("9"), l("8")) < c2a("1", "2", "3", CutSelector::Ex));
}

/// Every syntactically valid step over the labels of `f`.
fn candidates(f: &Forest) -> Vec<ReductionStep> {
    let ls: Vec<Label> = f.ground_set().into_iter().collect();
    let opt: Vec<Option<Label>> = std::iter::once(None).chain(ls.iter().cloned().map(Some)).collect();
    let cuts: Vec<Option<CutSelector>> = std::iter::once(None)
        .chain(
            [
                CutSelector::Ex,
                CutSelector::Ey,
                CutSelector::Ep,
                CutSelector::Eq,
                CutSelector::Epq,
                CutSelector::Exyp,
                CutSelector::C2bEdge,
            ]
            .map(Some),
        )
        .collect();
    let mut out = Vec::new();
    for rule in Rule::ALL {
        for o in [Orientation::Forward, Orientation::Reversed] {
            for x in &ls {
                for partner in &opt {
                    let zs: &[Option<Label>] = if rule <= Rule::C2aIII { &opt } else { &[None] };
                    let ps: &[Option<Label>] = if matches!(rule, Rule::C2aII | Rule::C2aIII) { &opt } else { &[None] };
                    let qs: &[Option<Label>] = if rule == Rule::C2aIII { &opt } else { &[None] };
                    for z in zs {
                        for p in ps {
                            for q in qs {
                                for &cut in &cuts {
                                    let s = ReductionStep {
                                        label: x.clone(),
                                        rule,
                                        orientation: o,
                                        params: StepParams {
                                            partner: partner.clone(),
                                            z: z.clone(),
                                            p: p.clone(),
                                            q: q.clone(),
                                            cut,
                                        },
                                    };
                                    if s.check_schema().is_ok() {
                                        out.push(s);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn state_strategy() -> impl Strategy<Value = (Forest, Forest)> {
    (1usize..=5, 1usize..=3, 1usize..=3, any::<u64>(), any::<u64>())
        .prop_map(|(n, k1, k2, s1, s2)| (seeded_forest(n, k1, s1), seeded_forest(n, k2, s2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The constructive enumerator and the direct condition check agree on
    /// every candidate step.
    #[test]
    fn enumerator_matches_condition_check((f, f2) in state_strategy()) {
        let mut accepted: Vec<ReductionStep> = candidates(&f)
            .into_iter()
            .filter(|s| check_step(&f, &f2, s).is_ok())
            .collect();
        accepted.sort();
        prop_assert_eq!(applicable_steps(&f, &f2).unwrap(), accepted);
    }

    #[test]
    fn steps_change_forests_as_their_rule_says((f, f2) in state_strategy()) {
        let steps = applicable_steps(&f, &f2).unwrap();
        if f.label_count() > 1 {
            prop_assert!(!steps.is_empty());
        }
        for s in steps {
            let (a, b) = apply_step(&f, &f2, &s).unwrap();
            prop_assert_eq!(a.ground_set(), b.ground_set());
            if s.rule.as_str().starts_with("C2") {
                prop_assert_eq!(a.ground_set(), f.ground_set());
                let grew = (a.len() - f.len(), b.len() - f2.len());
                prop_assert!(grew == (1, 0) || grew == (0, 1));
            } else {
                prop_assert_eq!(a.label_count() + 1, f.label_count());
                prop_assert!(!a.ground_set().contains(&s.label));
            }
        }
    }

    /// Weight is the number of edge-cutting steps, counted here by tag.
    #[test]
    fn weight_counts_c2_steps((f, f2) in state_strategy(), picks in proptest::collection::vec(any::<usize>(), 0..40)) {
        let (mut a, mut b) = (f.clone(), f2.clone());
        let mut steps = Vec::new();
        let mut picks = picks.into_iter().chain(std::iter::repeat(0));
        while a.label_count() > 1 || a.len() > 1 || b.len() > 1 {
            let options = applicable_steps(&a, &b).unwrap();
            let s = options[picks.next().unwrap() % options.len()].clone();
            (a, b) = apply_step(&a, &b, &s).unwrap();
            steps.push(s);
        }
        let tagged = steps.iter().filter(|s| s.rule.as_str().starts_with("C2")).count();
        let tr = ReductionTrace { steps };
        prop_assert_eq!(validate_trace(&f, &f2, &tr), Ok(tagged));
        prop_assert_eq!(tr.weight(), tagged);
        let sigma = labels_of(&tr, &f.ground_set());
        prop_assert_eq!(sigma.len(), tr.len() + 1);
        let best = sequence_weight(&f, &f2, &sigma).unwrap().unwrap();
        prop_assert!(best <= tagged);
    }
}
