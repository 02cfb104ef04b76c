//! Seeded random product lines and operations for the integration tests.
//!
//! Names come from tiny pools so that operations hit existing elements,
//! references dangle and ids collide often.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use deltacheck_core::delta::{DeltaTarget, TargetMode};
use deltacheck_core::model::*;
use deltacheck_core::{apply_delta, Delta, DeltaOperation as Op, ProductLine, VariantSpec};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NODES: &[&str] = &["a", "b", "c", "d", "e", "f"];
const COMPONENTS: &[&str] = &["C", "D", "E"];
const PORTS: &[&str] = &["p", "q", "r"];
const SIGNALS: &[&str] = &["s", "u", "v"];
const EVENTS: &[&str] = &["x", "y"];
const TEXTS: &[&str] = &["g", "h"];

pub const MAX_MODELS: usize = 5;
pub const MAX_ELEMENTS: usize = 15;
pub const MAX_VARIANTS: usize = 4;
pub const MAX_OPERATIONS: usize = 6;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures() -> PathBuf {
    deltacheck::fixture::corpus_root()
}

fn pick(rng: &mut impl Rng, pool: &[&str]) -> String {
    pool.choose(rng).expect("non-empty pool").to_string()
}

fn maybe(rng: &mut impl Rng, pool: &[&str]) -> Option<String> {
    rng.gen_bool(0.5).then(|| pick(rng, pool))
}

fn label(rng: &mut impl Rng, prefix: &str) -> String {
    format!("{prefix}{}", rng.gen_range(1..=6))
}

fn rate(rng: &mut impl Rng) -> Option<f64> {
    *[None, Some(1.0), Some(0.5), Some(2.0), Some(0.0), Some(-1.0)].choose(rng).unwrap()
}

fn probability(rng: &mut impl Rng) -> Option<f64> {
    *[None, None, Some(0.0), Some(0.5), Some(1.0), Some(1.5)].choose(rng).unwrap()
}

fn node(rng: &mut impl Rng) -> WorkflowNode {
    let kind = *NodeKind::ALL.choose(rng).unwrap();
    let mut n = WorkflowNode::new(pick(rng, NODES), kind);
    if kind == NodeKind::Task {
        n.rates = Rates {
            arrival: rate(rng),
            service: rate(rng),
        };
    }
    n
}

fn wf_transition(rng: &mut impl Rng) -> WorkflowTransition {
    WorkflowTransition {
        id: label(rng, "t"),
        source: pick(rng, NODES),
        target: pick(rng, NODES),
        guard: maybe(rng, TEXTS),
        probability: probability(rng),
    }
}

fn direction(rng: &mut impl Rng) -> Direction {
    if rng.gen_bool(0.5) {
        Direction::In
    } else {
        Direction::Out
    }
}

fn port(rng: &mut impl Rng) -> Port {
    Port::new(pick(rng, PORTS), direction(rng))
}

fn component(rng: &mut impl Rng, max_ports: usize) -> Component {
    let mut ports: Vec<Port> = (0..rng.gen_range(0..=max_ports)).map(|_| port(rng)).collect();
    let mut seen = BTreeSet::new();
    ports.retain(|p| seen.insert(p.name.clone()));
    Component::new(pick(rng, COMPONENTS), ports)
}

fn endpoint(rng: &mut impl Rng) -> Endpoint {
    Endpoint::new(pick(rng, COMPONENTS), pick(rng, PORTS))
}

fn connector(rng: &mut impl Rng) -> Connector {
    Connector {
        id: label(rng, "k"),
        signal: pick(rng, SIGNALS),
        source: endpoint(rng),
        target: endpoint(rng),
    }
}

fn external(rng: &mut impl Rng) -> ExternalSignal {
    ExternalSignal {
        signal: pick(rng, SIGNALS),
        target: endpoint(rng),
    }
}

fn state_kind(rng: &mut impl Rng) -> StateKind {
    *[StateKind::Initial, StateKind::Normal, StateKind::Normal, StateKind::Final]
        .choose(rng)
        .unwrap()
}

fn sc_transition(rng: &mut impl Rng) -> ScTransition {
    ScTransition {
        id: label(rng, "c"),
        source: pick(rng, NODES),
        target: pick(rng, NODES),
        event: maybe(rng, EVENTS),
        guard: maybe(rng, TEXTS),
        action: maybe(rng, TEXTS),
    }
}

fn task_map(rng: &mut impl Rng, workflows: &[&str], architectures: &[&str]) -> TaskMap {
    TaskMap {
        workflow: pick(rng, workflows),
        task: pick(rng, NODES),
        architecture: pick(rng, architectures),
        component: pick(rng, COMPONENTS),
    }
}

fn behavior_map(rng: &mut impl Rng, architectures: &[&str], charts: &[&str]) -> BehaviorMap {
    BehaviorMap {
        architecture: pick(rng, architectures),
        component: pick(rng, COMPONENTS),
        statechart: pick(rng, charts),
    }
}

pub fn workflow(rng: &mut impl Rng, name: &str) -> WorkflowModel {
    let nodes = rng.gen_range(0..=7);
    let transitions = rng.gen_range(0..=MAX_ELEMENTS - nodes);
    WorkflowModel {
        name: name.into(),
        nodes: (0..nodes).map(|_| node(rng)).collect(),
        transitions: (0..transitions).map(|_| wf_transition(rng)).collect(),
    }
}

/// At most 3 components with 2 ports each, 3 signals, 2 connectors and 1 external.
pub fn architecture(rng: &mut impl Rng, name: &str) -> ArchitectureModel {
    ArchitectureModel {
        name: name.into(),
        components: (0..rng.gen_range(0..=3)).map(|_| component(rng, 2)).collect(),
        signals: (0..rng.gen_range(0..=3)).map(|_| Signal { name: pick(rng, SIGNALS) }).collect(),
        connectors: (0..rng.gen_range(0..=2)).map(|_| connector(rng)).collect(),
        externals: (0..rng.gen_range(0..=1)).map(|_| external(rng)).collect(),
    }
}

pub fn statechart(rng: &mut impl Rng, name: &str) -> StateChartModel {
    let states = rng.gen_range(0..=6);
    let transitions = rng.gen_range(0..=MAX_ELEMENTS - states);
    StateChartModel {
        name: name.into(),
        states: (0..states).map(|_| State::new(pick(rng, NODES), state_kind(rng))).collect(),
        transitions: (0..transitions).map(|_| sc_transition(rng)).collect(),
    }
}

fn mapping(rng: &mut impl Rng, workflows: &[&str], architectures: &[&str], charts: &[&str]) -> MappingModel {
    MappingModel {
        name: "M".into(),
        task_maps: (0..rng.gen_range(0..=4)).map(|_| task_map(rng, workflows, architectures)).collect(),
        behavior_maps: (0..rng.gen_range(0..=4)).map(|_| behavior_map(rng, architectures, charts)).collect(),
    }
}

/// Workflow `W`, architecture `A`, chart `S`, sometimes chart `T`, and a
/// mapping that may name the absent models `W2`, `A2` and `U`.
pub fn model_set(rng: &mut impl Rng) -> ModelSet {
    let mut set = ModelSet::new();
    set.insert(Model::Workflow(workflow(rng, "W")));
    set.insert(Model::Architecture(architecture(rng, "A")));
    set.insert(Model::StateChart(statechart(rng, "S")));
    if rng.gen_bool(0.5) {
        set.insert(Model::StateChart(statechart(rng, "T")));
    }
    set.insert(Model::Mapping(mapping(rng, &["W", "W2"], &["A", "A2"], &["S", "T", "U"])));
    set
}

/// One operation of `perspective`; mapping entries refer to `W`, `A`, `S` and `T`.
pub fn operation(rng: &mut impl Rng, perspective: Perspective) -> Op {
    match perspective {
        Perspective::Workflow => match rng.gen_range(0..7) {
            0 => Op::AddNode(node(rng)),
            1 => Op::RemoveNode {
                kind: *NodeKind::ALL.choose(rng).unwrap(),
                id: pick(rng, NODES),
            },
            2 => Op::ModifyTask {
                id: pick(rng, NODES),
                rates: Rates {
                    arrival: rate(rng),
                    service: rate(rng),
                },
            },
            3 => Op::AddWfTransition(wf_transition(rng)),
            4 => Op::RemoveWfTransition { id: label(rng, "t") },
            5 => Op::ModifyWfTransition(wf_transition(rng)),
            _ => Op::ModifyPerformance {
                task: pick(rng, NODES),
                arrival: *[0.5, 1.0, 0.0, -2.0].choose(rng).unwrap(),
                service: *[1.0, 3.0, 0.0].choose(rng).unwrap(),
            },
        },
        Perspective::Architecture => match rng.gen_range(0..10) {
            0 => Op::AddComponent(component(rng, 2)),
            1 => Op::RemoveComponent { name: pick(rng, COMPONENTS) },
            2 => Op::ModifyComponent(component(rng, 2)),
            3 => Op::AddPort {
                component: pick(rng, COMPONENTS),
                port: port(rng),
            },
            4 => Op::RemovePort {
                component: pick(rng, COMPONENTS),
                port: pick(rng, PORTS),
            },
            5 => Op::AddConnector(connector(rng)),
            6 => Op::RemoveConnector { id: label(rng, "k") },
            7 => Op::AddExternal(external(rng)),
            8 => Op::RemoveExternal(external(rng)),
            _ => Op::ModifySignal {
                from: pick(rng, SIGNALS),
                to: pick(rng, SIGNALS),
            },
        },
        Perspective::Behavior => match rng.gen_range(0..6) {
            0 => Op::AddState(State::new(pick(rng, NODES), state_kind(rng))),
            1 => Op::RemoveState {
                kind: state_kind(rng),
                id: pick(rng, NODES),
            },
            2 => Op::ModifyState {
                id: pick(rng, NODES),
                kind: state_kind(rng),
            },
            3 => Op::AddScTransition(sc_transition(rng)),
            4 => Op::RemoveScTransition { id: label(rng, "c") },
            _ => Op::ModifyScTransition(sc_transition(rng)),
        },
        Perspective::Mapping => match rng.gen_range(0..4) {
            0 => Op::AddTaskMap(task_map(rng, &["W"], &["A"])),
            1 => Op::RemoveTaskMap(task_map(rng, &["W"], &["A"])),
            2 => Op::AddBehaviorMap(behavior_map(rng, &["A"], &["S", "T"])),
            _ => Op::RemoveBehaviorMap(behavior_map(rng, &["A"], &["S", "T"])),
        },
    }
}

/// Edited, created or missing models of every perspective, and the mapping.
fn target(rng: &mut impl Rng) -> DeltaTarget {
    let w = |n: &str| ModelRef::Workflow(n.into());
    let a = |n: &str| ModelRef::Architecture(n.into());
    let s = |n: &str| ModelRef::StateChart(n.into());
    let targets = [
        DeltaTarget::on(w("W")),
        DeltaTarget::on(a("A")),
        DeltaTarget::on(s("S")),
        DeltaTarget::on(s("T")),
        DeltaTarget::mapping(),
        DeltaTarget::mapping(),
        DeltaTarget::creates(w("W2")),
        DeltaTarget::creates(a("A2")),
        DeltaTarget::creates(s("U")),
        DeltaTarget::on(s("Z")),
    ];
    targets.choose(rng).unwrap().clone()
}

fn core_name(perspective: Perspective) -> &'static str {
    match perspective {
        Perspective::Workflow => "W",
        Perspective::Architecture => "A",
        _ => "S",
    }
}

/// Keeps each operation only if the delta still applies with it.
fn repaired(models: &ModelSet, delta: Delta) -> Delta {
    let mut kept = Delta {
        operations: Vec::new(),
        ..delta.clone()
    };
    for op in delta.operations {
        kept.operations.push(op);
        if apply_delta(models, &kept).is_err() {
            kept.operations.pop();
        }
    }
    kept
}

/// A product line of at most 5 models with up to 15 elements each, 1 to 5
/// deltas of up to 6 operations, and 1 to 4 variants.
///
/// Deltas are repaired against the core with the preceding deltas applied,
/// so variants that keep the pool order mostly apply cleanly.
pub fn product_line(rng: &mut impl Rng) -> ProductLine {
    let core = model_set(rng);
    let mut models = core.clone();
    let mut deltas = BTreeMap::new();
    for i in 0..rng.gen_range(1..=5) {
        let mut target = target(rng);
        if target.mode == TargetMode::Create && models.model_refs().len() >= MAX_MODELS {
            target = DeltaTarget::on(ModelRef::new(target.model.perspective(), core_name(target.model.perspective())));
        }
        if target.mode == TargetMode::Create && models.contains(&target.model) {
            target.mode = TargetMode::Modify;
        }
        let perspective = target.model.perspective();
        let operations = (0..rng.gen_range(0..=MAX_OPERATIONS)).map(|_| operation(rng, perspective)).collect();
        let d = repaired(
            &models,
            Delta {
                name: format!("d{i}"),
                target,
                operations,
            },
        );
        if let Ok((next, _)) = apply_delta(&models, &d) {
            models = next;
        }
        deltas.insert(d.name.clone(), d);
    }
    let names: Vec<String> = deltas.keys().cloned().collect();
    let variants = (0..rng.gen_range(1..=MAX_VARIANTS))
        .map(|k| {
            let chosen = names.iter().filter(|_| rng.gen_bool(0.5)).cloned();
            VariantSpec::new(format!("v{k}"), chosen)
        })
        .collect();
    ProductLine {
        name: "P".into(),
        core,
        deltas,
        variants,
    }
}
