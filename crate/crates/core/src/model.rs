//! In-memory representations of the three perspectives and the mapping.
//!
//! Models hold name-based references only. A transition may point at a node
//! that does not exist and a component may carry two ports with the same
//! name; such states are legal values and are reported by the rule catalog.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// The three modeling perspectives plus the inter-perspective mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Perspective {
    Workflow,
    Architecture,
    Behavior,
    Mapping,
}

impl Perspective {
    pub const fn keyword(self) -> &'static str {
        match self {
            Perspective::Workflow => "workflow",
            Perspective::Architecture => "architecture",
            Perspective::Behavior => "statechart",
            Perspective::Mapping => "mapping",
        }
    }
}

impl fmt::Display for Perspective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Identifies one model inside a [`ModelSet`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelRef {
    Workflow(String),
    Architecture(String),
    StateChart(String),
    Mapping,
}

impl ModelRef {
    pub fn new(perspective: Perspective, name: impl Into<String>) -> Self {
        match perspective {
            Perspective::Workflow => ModelRef::Workflow(name.into()),
            Perspective::Architecture => ModelRef::Architecture(name.into()),
            Perspective::Behavior => ModelRef::StateChart(name.into()),
            Perspective::Mapping => ModelRef::Mapping,
        }
    }

    pub fn perspective(&self) -> Perspective {
        match self {
            ModelRef::Workflow(_) => Perspective::Workflow,
            ModelRef::Architecture(_) => Perspective::Architecture,
            ModelRef::StateChart(_) => Perspective::Behavior,
            ModelRef::Mapping => Perspective::Mapping,
        }
    }

    /// Model name; the mapping has none of its own here.
    pub fn name(&self) -> Option<&str> {
        match self {
            ModelRef::Workflow(n) | ModelRef::Architecture(n) | ModelRef::StateChart(n) => Some(n),
            ModelRef::Mapping => None,
        }
    }
}

impl fmt::Display for ModelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(name) => write!(f, "{}:{}", self.perspective(), name),
            None => f.write_str("mapping"),
        }
    }
}

// ---------------------------------------------------------------------------
// Workflow perspective

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Task,
    Decision,
    Merge,
    Fork,
    Join,
    Initial,
    Final,
}

impl NodeKind {
    pub const ALL: [NodeKind; 7] = [
        NodeKind::Task,
        NodeKind::Decision,
        NodeKind::Merge,
        NodeKind::Fork,
        NodeKind::Join,
        NodeKind::Initial,
        NodeKind::Final,
    ];

    pub const fn keyword(self) -> &'static str {
        match self {
            NodeKind::Task => "task",
            NodeKind::Decision => "decision",
            NodeKind::Merge => "merge",
            NodeKind::Fork => "fork",
            NodeKind::Join => "join",
            NodeKind::Initial => "initial",
            NodeKind::Final => "final",
        }
    }
}

/// Arrival and service rates of a task, in workpieces per time unit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rates {
    pub arrival: Option<f64>,
    pub service: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkflowNode {
    pub id: String,
    pub kind: NodeKind,
    /// Only meaningful for tasks; always default for other kinds.
    pub rates: Rates,
}

impl WorkflowNode {
    pub fn new(id: impl Into<String>, kind: NodeKind) -> Self {
        WorkflowNode {
            id: id.into(),
            kind,
            rates: Rates::default(),
        }
    }

    pub fn task(id: impl Into<String>, arrival: Option<f64>, service: Option<f64>) -> Self {
        WorkflowNode {
            id: id.into(),
            kind: NodeKind::Task,
            rates: Rates { arrival, service },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkflowTransition {
    pub id: String,
    pub source: String,
    pub target: String,
    pub guard: Option<String>,
    pub probability: Option<f64>,
}

impl WorkflowTransition {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        WorkflowTransition {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            guard: None,
            probability: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WorkflowModel {
    pub name: String,
    pub nodes: Vec<WorkflowNode>,
    pub transitions: Vec<WorkflowTransition>,
}

impl WorkflowModel {
    pub fn new(name: impl Into<String>) -> Self {
        WorkflowModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.transitions
            .iter()
            .map(|t| (t.source.as_str(), t.target.as_str()))
    }

    pub fn has_node(&self, id: &str) -> bool {
        self.nodes.iter().any(|n| n.id == id)
    }

    pub fn has_task(&self, id: &str) -> bool {
        self.nodes
            .iter()
            .any(|n| n.id == id && n.kind == NodeKind::Task)
    }
}

// ---------------------------------------------------------------------------
// Architecture perspective

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub const fn keyword(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub direction: Direction,
}

impl Port {
    pub fn new(name: impl Into<String>, direction: Direction) -> Self {
        Port {
            name: name.into(),
            direction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub ports: Vec<Port>,
}

impl Component {
    pub fn new(name: impl Into<String>, ports: Vec<Port>) -> Self {
        Component {
            name: name.into(),
            ports,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signal {
    pub name: String,
}

/// `component.port` reference.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub component: String,
    pub port: String,
}

impl Endpoint {
    pub fn new(component: impl Into<String>, port: impl Into<String>) -> Self {
        Endpoint {
            component: component.into(),
            port: port.into(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.component, self.port)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connector {
    pub id: String,
    pub signal: String,
    pub source: Endpoint,
    pub target: Endpoint,
}

/// A signal delivered by the environment directly into an input port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSignal {
    pub signal: String,
    pub target: Endpoint,
}

impl ExternalSignal {
    /// Element id used in diagnostics and element scopes.
    pub fn element_id(&self) -> String {
        alloc::format!("{}->{}", self.signal, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArchitectureModel {
    pub name: String,
    pub components: Vec<Component>,
    pub signals: Vec<Signal>,
    pub connectors: Vec<Connector>,
    pub externals: Vec<ExternalSignal>,
}

impl ArchitectureModel {
    pub fn new(name: impl Into<String>) -> Self {
        ArchitectureModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn has_component(&self, name: &str) -> bool {
        self.components.iter().any(|c| c.name == name)
    }

    /// All ports matching `endpoint` across components sharing its name.
    pub fn resolve<'a>(&'a self, endpoint: &'a Endpoint) -> impl Iterator<Item = &'a Port> + 'a {
        self.components
            .iter()
            .filter(move |c| c.name == endpoint.component)
            .flat_map(|c| c.ports.iter())
            .filter(move |p| p.name == endpoint.port)
    }
}

// ---------------------------------------------------------------------------
// Behavior perspective

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateKind {
    Initial,
    Normal,
    Final,
}

impl StateKind {
    pub const fn keyword(self) -> &'static str {
        match self {
            StateKind::Initial => "initial",
            StateKind::Normal => "state",
            StateKind::Final => "final",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: String,
    pub kind: StateKind,
}

impl State {
    pub fn new(id: impl Into<String>, kind: StateKind) -> Self {
        State { id: id.into(), kind }
    }
}

/// A transition without an event is spontaneous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScTransition {
    pub id: String,
    pub source: String,
    pub target: String,
    pub event: Option<String>,
    pub guard: Option<String>,
    pub action: Option<String>,
}

impl ScTransition {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        ScTransition {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            event: None,
            guard: None,
            action: None,
        }
    }

    pub fn on(mut self, event: impl Into<String>) -> Self {
        self.event = Some(event.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StateChartModel {
    pub name: String,
    pub states: Vec<State>,
    pub transitions: Vec<ScTransition>,
}

impl StateChartModel {
    pub fn new(name: impl Into<String>) -> Self {
        StateChartModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.transitions
            .iter()
            .map(|t| (t.source.as_str(), t.target.as_str()))
    }

    pub fn has_state(&self, id: &str) -> bool {
        self.states.iter().any(|s| s.id == id)
    }
}

// ---------------------------------------------------------------------------
// Mapping

/// Task `workflow.task` executed by component `architecture.component`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskMap {
    pub workflow: String,
    pub task: String,
    pub architecture: String,
    pub component: String,
}

impl TaskMap {
    pub fn element_id(&self) -> String {
        alloc::format!(
            "{}.{} -> {}.{}",
            self.workflow,
            self.task,
            self.architecture,
            self.component
        )
    }
}

/// Component `architecture.component` described by a state chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BehaviorMap {
    pub architecture: String,
    pub component: String,
    pub statechart: String,
}

impl BehaviorMap {
    pub fn element_id(&self) -> String {
        alloc::format!(
            "{}.{} -> {}",
            self.architecture,
            self.component,
            self.statechart
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MappingModel {
    pub name: String,
    pub task_maps: Vec<TaskMap>,
    pub behavior_maps: Vec<BehaviorMap>,
}

impl MappingModel {
    pub fn new(name: impl Into<String>) -> Self {
        MappingModel {
            name: name.into(),
            ..Default::default()
        }
    }

    /// True if any entry names the given model.
    pub fn references(&self, model: &ModelRef) -> bool {
        match model {
            ModelRef::Workflow(w) => self.task_maps.iter().any(|m| &m.workflow == w),
            ModelRef::Architecture(a) => {
                self.task_maps.iter().any(|m| &m.architecture == a)
                    || self.behavior_maps.iter().any(|m| &m.architecture == a)
            }
            ModelRef::StateChart(s) => self.behavior_maps.iter().any(|m| &m.statechart == s),
            ModelRef::Mapping => true,
        }
    }
}

// ---------------------------------------------------------------------------

/// One complete variant: every model of every perspective plus the mapping.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelSet {
    pub workflows: BTreeMap<String, WorkflowModel>,
    pub architectures: BTreeMap<String, ArchitectureModel>,
    pub statecharts: BTreeMap<String, StateChartModel>,
    pub mapping: MappingModel,
}

impl ModelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a model, returning `false` if one of that kind and name exists.
    pub fn insert(&mut self, model: Model) -> bool {
        use alloc::collections::btree_map::Entry;
        fn put<T>(map: &mut BTreeMap<String, T>, name: String, value: T) -> bool {
            match map.entry(name) {
                Entry::Occupied(_) => false,
                Entry::Vacant(v) => {
                    v.insert(value);
                    true
                }
            }
        }
        match model {
            Model::Workflow(m) => put(&mut self.workflows, m.name.clone(), m),
            Model::Architecture(m) => put(&mut self.architectures, m.name.clone(), m),
            Model::StateChart(m) => put(&mut self.statecharts, m.name.clone(), m),
            Model::Mapping(m) => {
                self.mapping = m;
                true
            }
        }
    }

    pub fn contains(&self, model: &ModelRef) -> bool {
        match model {
            ModelRef::Workflow(n) => self.workflows.contains_key(n),
            ModelRef::Architecture(n) => self.architectures.contains_key(n),
            ModelRef::StateChart(n) => self.statecharts.contains_key(n),
            ModelRef::Mapping => true,
        }
    }

    /// Every model in canonical order; the mapping comes last.
    pub fn model_refs(&self) -> Vec<ModelRef> {
        let mut refs: Vec<ModelRef> = self
            .workflows
            .keys()
            .map(|n| ModelRef::Workflow(n.clone()))
            .chain(self.architectures.keys().map(|n| ModelRef::Architecture(n.clone())))
            .chain(self.statecharts.keys().map(|n| ModelRef::StateChart(n.clone())))
            .collect();
        refs.push(ModelRef::Mapping);
        refs
    }

    pub fn get(&self, model: &ModelRef) -> Option<ModelView<'_>> {
        match model {
            ModelRef::Workflow(n) => self.workflows.get(n).map(ModelView::Workflow),
            ModelRef::Architecture(n) => self.architectures.get(n).map(ModelView::Architecture),
            ModelRef::StateChart(n) => self.statecharts.get(n).map(ModelView::StateChart),
            ModelRef::Mapping => Some(ModelView::Mapping(&self.mapping)),
        }
    }
}

/// An owned model of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Workflow(WorkflowModel),
    Architecture(ArchitectureModel),
    StateChart(StateChartModel),
    Mapping(MappingModel),
}

impl Model {
    pub fn view(&self) -> ModelView<'_> {
        match self {
            Model::Workflow(m) => ModelView::Workflow(m),
            Model::Architecture(m) => ModelView::Architecture(m),
            Model::StateChart(m) => ModelView::StateChart(m),
            Model::Mapping(m) => ModelView::Mapping(m),
        }
    }

    pub fn model_ref(&self) -> ModelRef {
        self.view().model_ref()
    }
}

/// A borrowed model of any kind.
#[derive(Debug, Clone, Copy)]
pub enum ModelView<'a> {
    Workflow(&'a WorkflowModel),
    Architecture(&'a ArchitectureModel),
    StateChart(&'a StateChartModel),
    Mapping(&'a MappingModel),
}

impl ModelView<'_> {
    pub fn model_ref(&self) -> ModelRef {
        match self {
            ModelView::Workflow(m) => ModelRef::Workflow(m.name.clone()),
            ModelView::Architecture(m) => ModelRef::Architecture(m.name.clone()),
            ModelView::StateChart(m) => ModelRef::StateChart(m.name.clone()),
            ModelView::Mapping(_) => ModelRef::Mapping,
        }
    }
}
