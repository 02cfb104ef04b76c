use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    BehaviorMap, Component, Connector, ExternalSignal, ModelRef, NodeKind, Perspective, Port,
    Rates, ScTransition, State, StateKind, TaskMap, WorkflowNode, WorkflowTransition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Add,
    Remove,
    Modify,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Add, Action::Remove, Action::Modify];

    pub const fn keyword(self) -> &'static str {
        match self {
            Action::Add => "add",
            Action::Remove => "remove",
            Action::Modify => "modify",
        }
    }
}

/// Element categories a delta operation can address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Task,
    Decision,
    Merge,
    Fork,
    Join,
    InitialNode,
    FinalNode,
    WfTransition,
    PerformanceValues,
    Component,
    Port,
    Connection,
    Signal,
    State,
    ScInitial,
    ScFinal,
    ScTransition,
    TaskMap,
    BehaviorMap,
}

impl ElementKind {
    pub const ALL: [ElementKind; 19] = [
        ElementKind::Task,
        ElementKind::Decision,
        ElementKind::Merge,
        ElementKind::Fork,
        ElementKind::Join,
        ElementKind::InitialNode,
        ElementKind::FinalNode,
        ElementKind::WfTransition,
        ElementKind::PerformanceValues,
        ElementKind::Component,
        ElementKind::Port,
        ElementKind::Connection,
        ElementKind::Signal,
        ElementKind::State,
        ElementKind::ScInitial,
        ElementKind::ScFinal,
        ElementKind::ScTransition,
        ElementKind::TaskMap,
        ElementKind::BehaviorMap,
    ];

    pub const fn perspective(self) -> Perspective {
        use ElementKind::*;
        match self {
            Task | Decision | Merge | Fork | Join | InitialNode | FinalNode | WfTransition
            | PerformanceValues => Perspective::Workflow,
            Component | Port | Connection | Signal => Perspective::Architecture,
            State | ScInitial | ScFinal | ScTransition => Perspective::Behavior,
            TaskMap | BehaviorMap => Perspective::Mapping,
        }
    }

    pub const fn name(self) -> &'static str {
        use ElementKind::*;
        match self {
            Task => "task",
            Decision => "decision",
            Merge => "merge",
            Fork => "fork",
            Join => "join",
            InitialNode => "initial node",
            FinalNode => "final node",
            WfTransition => "workflow transition",
            PerformanceValues => "performance values",
            Component => "component",
            Port => "port",
            Connection => "connection",
            Signal => "signal",
            State => "state",
            ScInitial => "initial state",
            ScFinal => "final state",
            ScTransition => "state chart transition",
            TaskMap => "task mapping",
            BehaviorMap => "behavior mapping",
        }
    }

    pub(crate) fn of_node(kind: NodeKind) -> Self {
        match kind {
            NodeKind::Task => ElementKind::Task,
            NodeKind::Decision => ElementKind::Decision,
            NodeKind::Merge => ElementKind::Merge,
            NodeKind::Fork => ElementKind::Fork,
            NodeKind::Join => ElementKind::Join,
            NodeKind::Initial => ElementKind::InitialNode,
            NodeKind::Final => ElementKind::FinalNode,
        }
    }

    pub(crate) fn of_state(kind: StateKind) -> Self {
        match kind {
            StateKind::Initial => ElementKind::ScInitial,
            StateKind::Normal => ElementKind::State,
            StateKind::Final => ElementKind::ScFinal,
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Supported (action, element) pairs; every other combination is rejected.
const SUPPORTED: &[(Action, ElementKind)] = {
    use Action::*;
    use ElementKind as K;
    &[
        (Add, K::Task),
        (Remove, K::Task),
        (Modify, K::Task),
        (Add, K::Decision),
        (Remove, K::Decision),
        (Add, K::Merge),
        (Remove, K::Merge),
        (Add, K::Fork),
        (Remove, K::Fork),
        (Add, K::Join),
        (Remove, K::Join),
        (Add, K::InitialNode),
        (Remove, K::InitialNode),
        (Add, K::FinalNode),
        (Remove, K::FinalNode),
        (Add, K::WfTransition),
        (Remove, K::WfTransition),
        (Modify, K::WfTransition),
        (Modify, K::PerformanceValues),
        (Add, K::Component),
        (Remove, K::Component),
        (Modify, K::Component),
        (Add, K::Port),
        (Remove, K::Port),
        (Add, K::Connection),
        (Remove, K::Connection),
        (Modify, K::Signal),
        (Add, K::State),
        (Remove, K::State),
        (Modify, K::State),
        (Add, K::ScInitial),
        (Remove, K::ScInitial),
        (Add, K::ScFinal),
        (Remove, K::ScFinal),
        (Add, K::ScTransition),
        (Remove, K::ScTransition),
        (Modify, K::ScTransition),
        (Add, K::TaskMap),
        (Remove, K::TaskMap),
        (Add, K::BehaviorMap),
        (Remove, K::BehaviorMap),
    ]
};

/// A supported (action, element) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperationKind {
    action: Action,
    target: ElementKind,
}

impl OperationKind {
    pub fn new(action: Action, target: ElementKind) -> Option<Self> {
        SUPPORTED
            .contains(&(action, target))
            .then_some(OperationKind { action, target })
    }

    /// Every supported pair, in table order.
    pub fn all() -> impl Iterator<Item = OperationKind> {
        SUPPORTED
            .iter()
            .map(|&(action, target)| OperationKind { action, target })
    }

    pub fn action(self) -> Action {
        self.action
    }

    pub fn target(self) -> ElementKind {
        self.target
    }

    pub fn perspective(self) -> Perspective {
        self.target.perspective()
    }
}

impl fmt::Display for OperationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.action.keyword(), self.target.name())
    }
}

/// One add, remove or modify step of a delta.
///
/// Modify operations keep the element's identity and replace its payload;
/// renaming an element is a remove followed by an add. The one exception is
/// [`DeltaOperation::ModifySignal`]: a signal has no attribute besides its name.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaOperation {
    AddNode(WorkflowNode),
    RemoveNode { kind: NodeKind, id: String },
    ModifyTask { id: String, rates: Rates },
    AddWfTransition(WorkflowTransition),
    RemoveWfTransition { id: String },
    ModifyWfTransition(WorkflowTransition),
    ModifyPerformance { task: String, arrival: f64, service: f64 },

    AddComponent(Component),
    RemoveComponent { name: String },
    ModifyComponent(Component),
    AddPort { component: String, port: Port },
    RemovePort { component: String, port: String },
    AddConnector(Connector),
    RemoveConnector { id: String },
    AddExternal(ExternalSignal),
    RemoveExternal(ExternalSignal),
    ModifySignal { from: String, to: String },

    AddState(State),
    RemoveState { kind: StateKind, id: String },
    ModifyState { id: String, kind: StateKind },
    AddScTransition(ScTransition),
    RemoveScTransition { id: String },
    ModifyScTransition(ScTransition),

    AddTaskMap(TaskMap),
    RemoveTaskMap(TaskMap),
    AddBehaviorMap(BehaviorMap),
    RemoveBehaviorMap(BehaviorMap),
}

impl DeltaOperation {
    pub fn kind(&self) -> OperationKind {
        use Action::*;
        use DeltaOperation as Op;
        use ElementKind as K;
        let (action, target) = match self {
            Op::AddNode(n) => (Add, K::of_node(n.kind)),
            Op::RemoveNode { kind, .. } => (Remove, K::of_node(*kind)),
            Op::ModifyTask { .. } => (Modify, K::Task),
            Op::AddWfTransition(_) => (Add, K::WfTransition),
            Op::RemoveWfTransition { .. } => (Remove, K::WfTransition),
            Op::ModifyWfTransition(_) => (Modify, K::WfTransition),
            Op::ModifyPerformance { .. } => (Modify, K::PerformanceValues),
            Op::AddComponent(_) => (Add, K::Component),
            Op::RemoveComponent { .. } => (Remove, K::Component),
            Op::ModifyComponent(_) => (Modify, K::Component),
            Op::AddPort { .. } => (Add, K::Port),
            Op::RemovePort { .. } => (Remove, K::Port),
            Op::AddConnector(_) | Op::AddExternal(_) => (Add, K::Connection),
            Op::RemoveConnector { .. } | Op::RemoveExternal(_) => (Remove, K::Connection),
            Op::ModifySignal { .. } => (Modify, K::Signal),
            Op::AddState(s) => (Add, K::of_state(s.kind)),
            Op::RemoveState { kind, .. } => (Remove, K::of_state(*kind)),
            Op::ModifyState { .. } => (Modify, K::State),
            Op::AddScTransition(_) => (Add, K::ScTransition),
            Op::RemoveScTransition { .. } => (Remove, K::ScTransition),
            Op::ModifyScTransition(_) => (Modify, K::ScTransition),
            Op::AddTaskMap(_) => (Add, K::TaskMap),
            Op::RemoveTaskMap(_) => (Remove, K::TaskMap),
            Op::AddBehaviorMap(_) => (Add, K::BehaviorMap),
            Op::RemoveBehaviorMap(_) => (Remove, K::BehaviorMap),
        };
        OperationKind::new(action, target).expect("every operation variant is a supported pair")
    }

    pub fn perspective(&self) -> Perspective {
        self.kind().perspective()
    }
}

/// Whether a delta edits an existing model or introduces a new one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetMode {
    /// `delta D on <kind> M`: M must exist.
    Modify,
    /// `delta D creates <kind> M`: M must not exist and starts empty.
    Create,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaTarget {
    pub model: ModelRef,
    pub mode: TargetMode,
}

impl DeltaTarget {
    pub fn on(model: ModelRef) -> Self {
        DeltaTarget {
            model,
            mode: TargetMode::Modify,
        }
    }

    pub fn creates(model: ModelRef) -> Self {
        DeltaTarget {
            model,
            mode: TargetMode::Create,
        }
    }

    pub fn mapping() -> Self {
        Self::on(ModelRef::Mapping)
    }
}

/// An ordered list of operations against one model or the mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta {
    pub name: String,
    pub target: DeltaTarget,
    pub operations: Vec<DeltaOperation>,
}

impl Delta {
    pub fn new(name: impl Into<String>, target: DeltaTarget) -> Self {
        Delta {
            name: name.into(),
            target,
            operations: Vec::new(),
        }
    }

    pub fn with(mut self, op: DeltaOperation) -> Self {
        self.operations.push(op);
        self
    }
}
