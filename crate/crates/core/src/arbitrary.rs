//! Proptest strategies for small models drawn from tiny name pools, so that
//! dangling references, duplicates and collisions occur often.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use proptest::prelude::*;

use crate::model::*;

const NODES: &[&str] = &["a", "b", "c", "d", "e", "f"];
const COMPONENTS: &[&str] = &["C", "D", "E"];
const PORTS: &[&str] = &["p", "q", "r"];
const SIGNALS: &[&str] = &["s", "u", "v"];
const EVENTS: &[&str] = &["x", "y"];

fn pick(pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    prop::sample::select(pool).prop_map(|s| s.to_string())
}

fn label(prefix: &'static str) -> impl Strategy<Value = String> {
    (1..=6u8).prop_map(move |k| alloc::format!("{prefix}{k}"))
}

fn rate() -> impl Strategy<Value = Option<f64>> {
    prop::sample::select(&[None, Some(1.0), Some(0.5), Some(2.0), Some(0.0), Some(-1.0)][..])
}

fn probability() -> impl Strategy<Value = Option<f64>> {
    prop::sample::select(&[None, None, Some(0.0), Some(0.25), Some(0.5), Some(0.75), Some(1.0), Some(1.5)][..])
}

fn text() -> impl Strategy<Value = Option<String>> {
    prop::option::of(prop::sample::select(&["g", "h", "a \"q\"\\"][..]).prop_map(String::from))
}

fn node_kind() -> impl Strategy<Value = NodeKind> {
    prop::sample::select(&NodeKind::ALL[..])
}

pub(crate) fn workflow(name: &'static str) -> impl Strategy<Value = WorkflowModel> {
    let node = (pick(NODES), node_kind(), rate(), rate()).prop_map(|(id, kind, a, s)| {
        let mut n = WorkflowNode::new(id, kind);
        if kind == NodeKind::Task {
            n.rates = Rates { arrival: a, service: s };
        }
        n
    });
    let transition = (label("t"), pick(NODES), pick(NODES), text(), probability()).prop_map(
        |(id, source, target, guard, probability)| WorkflowTransition {
            id,
            source,
            target,
            guard,
            probability,
        },
    );
    (
        prop::collection::vec(node, 0..8),
        prop::collection::vec(transition, 0..9),
    )
        .prop_map(move |(nodes, transitions)| WorkflowModel {
            name: name.into(),
            nodes,
            transitions,
        })
}

fn endpoint() -> impl Strategy<Value = Endpoint> {
    (pick(COMPONENTS), pick(PORTS)).prop_map(|(c, p)| Endpoint::new(c, p))
}

fn direction() -> impl Strategy<Value = Direction> {
    prop::sample::select(&[Direction::In, Direction::Out][..])
}

pub(crate) fn architecture(name: &'static str) -> impl Strategy<Value = ArchitectureModel> {
    let port = (pick(PORTS), direction()).prop_map(|(n, d)| Port::new(n, d));
    let component = (pick(COMPONENTS), prop::collection::vec(port, 0..4))
        .prop_map(|(n, ports)| Component::new(n, ports));
    let connector = (label("k"), pick(SIGNALS), endpoint(), endpoint()).prop_map(
        |(id, signal, source, target)| Connector {
            id,
            signal,
            source,
            target,
        },
    );
    let external = (pick(SIGNALS), endpoint()).prop_map(|(signal, target)| ExternalSignal { signal, target });
    (
        prop::collection::vec(component, 0..4),
        prop::collection::vec(pick(SIGNALS).prop_map(|name| Signal { name }), 0..4),
        prop::collection::vec(connector, 0..5),
        prop::collection::vec(external, 0..3),
    )
        .prop_map(move |(components, signals, connectors, externals)| ArchitectureModel {
            name: name.into(),
            components,
            signals,
            connectors,
            externals,
        })
}

fn state_kind() -> impl Strategy<Value = StateKind> {
    prop::sample::select(&[StateKind::Initial, StateKind::Normal, StateKind::Normal, StateKind::Final][..])
}

pub(crate) fn statechart(name: &'static str) -> impl Strategy<Value = StateChartModel> {
    let state = (pick(NODES), state_kind()).prop_map(|(id, kind)| State::new(id, kind));
    let transition = (
        label("c"),
        pick(NODES),
        pick(NODES),
        prop::option::of(pick(EVENTS)),
        text(),
        text(),
    )
        .prop_map(|(id, source, target, event, guard, action)| ScTransition {
            id,
            source,
            target,
            event,
            guard,
            action,
        });
    (
        prop::collection::vec(state, 0..7),
        prop::collection::vec(transition, 0..9),
    )
        .prop_map(move |(states, transitions)| StateChartModel {
            name: name.into(),
            states,
            transitions,
        })
}

pub(crate) fn mapping(
    workflows: &'static [&'static str],
    architectures: &'static [&'static str],
    charts: &'static [&'static str],
) -> impl Strategy<Value = MappingModel> {
    let task = (pick(workflows), pick(NODES), pick(architectures), pick(COMPONENTS)).prop_map(
        |(workflow, task, architecture, component)| TaskMap {
            workflow,
            task,
            architecture,
            component,
        },
    );
    let behavior = (pick(architectures), pick(COMPONENTS), pick(charts)).prop_map(
        |(architecture, component, statechart)| BehaviorMap {
            architecture,
            component,
            statechart,
        },
    );
    (
        prop::collection::vec(task, 0..5),
        prop::collection::vec(behavior, 0..5),
    )
        .prop_map(|(task_maps, behavior_maps)| MappingModel {
            name: "M".into(),
            task_maps,
            behavior_maps,
        })
}

/// A set with one workflow `W`, one architecture `A`, charts `S` and `T`,
/// and a mapping that may point at the missing models `W2`, `A2` and `U`.
pub(crate) fn model_set() -> impl Strategy<Value = ModelSet> {
    (
        workflow("W"),
        architecture("A"),
        statechart("S"),
        statechart("T"),
        mapping(&["W", "W2"], &["A", "A2"], &["S", "T", "U"]),
    )
        .prop_map(|(w, a, s, t, m)| {
            let mut set = ModelSet::new();
            set.insert(Model::Workflow(w));
            set.insert(Model::Architecture(a));
            set.insert(Model::StateChart(s));
            set.insert(Model::StateChart(t));
            set.insert(Model::Mapping(m));
            set
        })
}

fn first_by_key<T, K: Ord>(items: &mut Vec<T>, key: impl Fn(&T) -> K) {
    let mut seen = BTreeSet::new();
    items.retain(|x| seen.insert(key(x)));
}

/// Drops repeated declarations so the model is expressible in the textual syntax.
pub(crate) fn declarable(model: Model) -> Model {
    match model {
        Model::Workflow(mut m) => {
            first_by_key(&mut m.nodes, |n| n.id.clone());
            first_by_key(&mut m.transitions, |t| t.id.clone());
            Model::Workflow(m)
        }
        Model::Architecture(mut m) => {
            first_by_key(&mut m.components, |c| c.name.clone());
            for c in &mut m.components {
                first_by_key(&mut c.ports, |p| p.name.clone());
            }
            first_by_key(&mut m.signals, |s| s.name.clone());
            first_by_key(&mut m.connectors, |k| k.id.clone());
            first_by_key(&mut m.externals, |e| e.element_id());
            Model::Architecture(m)
        }
        Model::StateChart(mut m) => {
            first_by_key(&mut m.states, |s| s.id.clone());
            first_by_key(&mut m.transitions, |t| t.id.clone());
            Model::StateChart(m)
        }
        Model::Mapping(mut m) => {
            first_by_key(&mut m.task_maps, |e| e.clone());
            first_by_key(&mut m.behavior_maps, |e| e.clone());
            Model::Mapping(m)
        }
    }
}

pub(crate) fn any_model() -> impl Strategy<Value = Model> {
    prop_oneof![
        workflow("W").prop_map(Model::Workflow),
        architecture("A").prop_map(Model::Architecture),
        statechart("S").prop_map(Model::StateChart),
        mapping(&["W"], &["A"], &["S"]).prop_map(Model::Mapping),
    ]
}

fn rates() -> impl Strategy<Value = Rates> {
    (rate(), rate()).prop_map(|(arrival, service)| Rates { arrival, service })
}

fn wf_transition() -> impl Strategy<Value = WorkflowTransition> {
    (label("t"), pick(NODES), pick(NODES), text(), probability()).prop_map(
        |(id, source, target, guard, probability)| WorkflowTransition {
            id,
            source,
            target,
            guard,
            probability,
        },
    )
}

fn sc_transition() -> impl Strategy<Value = ScTransition> {
    (
        label("c"),
        pick(NODES),
        pick(NODES),
        prop::option::of(pick(EVENTS)),
        text(),
        text(),
    )
        .prop_map(|(id, source, target, event, guard, action)| ScTransition {
            id,
            source,
            target,
            event,
            guard,
            action,
        })
}

/// One operation of the given perspective; mapping entries refer to `W`, `A` and `S`.
pub(crate) fn operation(perspective: Perspective) -> BoxedStrategy<crate::delta::DeltaOperation> {
    use crate::delta::DeltaOperation as Op;
    match perspective {
        Perspective::Workflow => prop_oneof![
            (pick(NODES), node_kind(), rates()).prop_map(|(id, kind, r)| {
                let mut n = WorkflowNode::new(id, kind);
                if kind == NodeKind::Task {
                    n.rates = r;
                }
                Op::AddNode(n)
            }),
            (pick(NODES), node_kind()).prop_map(|(id, kind)| Op::RemoveNode { kind, id }),
            (pick(NODES), rates()).prop_map(|(id, rates)| Op::ModifyTask { id, rates }),
            wf_transition().prop_map(Op::AddWfTransition),
            label("t").prop_map(|id| Op::RemoveWfTransition { id }),
            wf_transition().prop_map(Op::ModifyWfTransition),
            (
                pick(NODES),
                prop::sample::select(&[0.5, 1.0, 0.0, -2.0][..]),
                prop::sample::select(&[1.0, 3.0, 0.0][..])
            )
                .prop_map(|(task, arrival, service)| Op::ModifyPerformance { task, arrival, service }),
        ]
        .boxed(),
        Perspective::Architecture => {
            let port = (pick(PORTS), direction()).prop_map(|(n, d)| Port::new(n, d)).boxed();
            let component = (pick(COMPONENTS), prop::collection::vec(port.clone(), 0..3))
                .prop_map(|(n, mut ports)| {
                    first_by_key(&mut ports, |p| p.name.clone());
                    Component::new(n, ports)
                })
                .boxed();
            prop_oneof![
                component.clone().prop_map(Op::AddComponent),
                pick(COMPONENTS).prop_map(|name| Op::RemoveComponent { name }),
                component.prop_map(Op::ModifyComponent),
                (pick(COMPONENTS), port).prop_map(|(component, port)| Op::AddPort { component, port }),
                (pick(COMPONENTS), pick(PORTS)).prop_map(|(component, port)| Op::RemovePort { component, port }),
                (label("k"), pick(SIGNALS), endpoint(), endpoint()).prop_map(|(id, signal, source, target)| {
                    Op::AddConnector(Connector {
                        id,
                        signal,
                        source,
                        target,
                    })
                }),
                label("k").prop_map(|id| Op::RemoveConnector { id }),
                (pick(SIGNALS), endpoint())
                    .prop_map(|(signal, target)| Op::AddExternal(ExternalSignal { signal, target })),
                (pick(SIGNALS), endpoint())
                    .prop_map(|(signal, target)| Op::RemoveExternal(ExternalSignal { signal, target })),
                (pick(SIGNALS), pick(SIGNALS)).prop_map(|(from, to)| Op::ModifySignal { from, to }),
            ]
            .boxed()
        }
        Perspective::Behavior => prop_oneof![
            (pick(NODES), state_kind()).prop_map(|(id, kind)| Op::AddState(State::new(id, kind))),
            (pick(NODES), state_kind()).prop_map(|(id, kind)| Op::RemoveState { kind, id }),
            (pick(NODES), state_kind()).prop_map(|(id, kind)| Op::ModifyState { id, kind }),
            sc_transition().prop_map(Op::AddScTransition),
            label("c").prop_map(|id| Op::RemoveScTransition { id }),
            sc_transition().prop_map(Op::ModifyScTransition),
        ]
        .boxed(),
        Perspective::Mapping => {
            let task = (pick(NODES), pick(COMPONENTS)).prop_map(|(task, component)| TaskMap {
                workflow: "W".into(),
                task,
                architecture: "A".into(),
                component,
            })
            .boxed();
            let behavior = (pick(COMPONENTS), prop::sample::select(&["S", "T"][..])).prop_map(
                |(component, chart)| BehaviorMap {
                    architecture: "A".into(),
                    component,
                    statechart: chart.into(),
                },
            )
            .boxed();
            prop_oneof![
                task.clone().prop_map(Op::AddTaskMap),
                task.prop_map(Op::RemoveTaskMap),
                behavior.clone().prop_map(Op::AddBehaviorMap),
                behavior.prop_map(Op::RemoveBehaviorMap),
            ]
            .boxed()
        }
    }
}

pub(crate) fn delta() -> impl Strategy<Value = crate::delta::Delta> {
    use crate::delta::{Delta, DeltaTarget};
    prop::sample::select(
        &[
            Perspective::Workflow,
            Perspective::Architecture,
            Perspective::Behavior,
            Perspective::Mapping,
        ][..],
    )
    .prop_flat_map(|p| {
        (
            Just(p),
            any::<bool>(),
            prop::collection::vec(operation(p), 0..6),
        )
    })
    .prop_map(|(p, create, operations)| {
        let target = match p {
            Perspective::Mapping => DeltaTarget::mapping(),
            _ if create => DeltaTarget::creates(ModelRef::new(p, "N")),
            _ => DeltaTarget::on(ModelRef::new(p, "M")),
        };
        Delta {
            name: "d".into(),
            target,
            operations,
        }
    })
}
