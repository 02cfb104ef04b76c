use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::ops::{Delta, DeltaOperation, OperationKind, TargetMode};
use crate::model::{
    ArchitectureModel, Endpoint, MappingModel, Model, ModelRef, ModelSet, NodeKind, Perspective,
    StateChartModel, StateKind, WorkflowModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApplicationErrorReason {
    /// The delta's target model does not exist (rules D01-D03).
    TargetModelMissing,
    ElementAlreadyExists,
    ElementNotFound,
    UnsupportedOperation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("delta `{delta}`{}: {detail}", match .operation_index { Some(i) => format!(" operation {}", i + 1), None => String::new() })]
pub struct ApplicationError {
    pub delta: String,
    /// Zero-based; `None` when the delta header itself fails.
    pub operation_index: Option<usize>,
    pub reason: ApplicationErrorReason,
    pub detail: String,
}

/// What a delta (or a sequence of deltas) changed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TouchSet {
    /// Perspective models that received at least one operation or were created.
    pub touched_models: BTreeSet<ModelRef>,
    pub created_models: BTreeSet<ModelRef>,
    pub mapping_touched: bool,
    /// Multiset of applied operation kinds per model (mapping included).
    pub operation_summary: BTreeMap<ModelRef, BTreeMap<OperationKind, usize>>,
    /// Element ids added, removed or modified, plus their structural neighbours.
    pub element_scope: BTreeMap<ModelRef, BTreeSet<String>>,
}

impl TouchSet {
    pub fn operations_on(&self, model: &ModelRef) -> impl Iterator<Item = OperationKind> + '_ {
        self.operation_summary
            .get(model)
            .into_iter()
            .flat_map(|m| m.keys().copied())
    }

    pub fn scope_of(&self, model: &ModelRef) -> Option<&BTreeSet<String>> {
        self.element_scope.get(model)
    }

    pub fn is_empty(&self) -> bool {
        self.touched_models.is_empty() && !self.mapping_touched
    }

    fn merge(&mut self, other: &TouchSet) {
        self.touched_models.extend(other.touched_models.iter().cloned());
        self.created_models.extend(other.created_models.iter().cloned());
        self.mapping_touched |= other.mapping_touched;
        for (model, ops) in &other.operation_summary {
            let entry = self.operation_summary.entry(model.clone()).or_default();
            for (kind, n) in ops {
                *entry.entry(*kind).or_default() += n;
            }
        }
        for (model, ids) in &other.element_scope {
            self.element_scope
                .entry(model.clone())
                .or_default()
                .extend(ids.iter().cloned());
        }
    }
}

/// Union of touch sets across a delta sequence.
pub fn touch_summary(touch_sets: &[TouchSet]) -> TouchSet {
    let mut out = TouchSet::default();
    for ts in touch_sets {
        out.merge(ts);
    }
    out
}

/// Applies every operation of `delta` in order to a copy of `models`.
///
/// Fails atomically: on error nothing of the delta survives and `models` is
/// untouched.
pub fn apply_delta(models: &ModelSet, delta: &Delta) -> Result<(ModelSet, TouchSet), ApplicationError> {
    let err = |index: Option<usize>, reason, detail: String| ApplicationError {
        delta: delta.name.clone(),
        operation_index: index,
        reason,
        detail,
    };

    let target = &delta.target.model;
    let perspective = target.perspective();
    let exists = models.contains(target);
    match (delta.target.mode, perspective) {
        (TargetMode::Create, Perspective::Mapping) => {
            return Err(err(
                None,
                ApplicationErrorReason::UnsupportedOperation,
                "the mapping cannot be created by a delta".to_string(),
            ))
        }
        (TargetMode::Create, _) if exists => {
            return Err(err(
                None,
                ApplicationErrorReason::ElementAlreadyExists,
                format!("{target} already exists"),
            ))
        }
        (TargetMode::Modify, _) if !exists => {
            return Err(err(
                None,
                ApplicationErrorReason::TargetModelMissing,
                format!("{target} does not exist"),
            ))
        }
        _ => {}
    }

    let mut out = models.clone();
    let mut touch = TouchSet::default();
    let mut scope = BTreeSet::new();
    let name = target.name().unwrap_or_default().to_string();

    let result = match perspective {
        Perspective::Workflow => {
            let model = out
                .workflows
                .entry(name.clone())
                .or_insert_with(|| WorkflowModel::new(name.clone()));
            apply_each(delta, |op| apply_workflow(model, op, &mut scope))
        }
        Perspective::Architecture => {
            let model = out
                .architectures
                .entry(name.clone())
                .or_insert_with(|| ArchitectureModel::new(name.clone()));
            apply_each(delta, |op| apply_architecture(model, op, &mut scope))
        }
        Perspective::Behavior => {
            let model = out
                .statecharts
                .entry(name.clone())
                .or_insert_with(|| StateChartModel::new(name.clone()));
            apply_each(delta, |op| apply_statechart(model, op, &mut scope))
        }
        Perspective::Mapping => {
            apply_each(delta, |op| apply_mapping(&mut out.mapping, op, &mut scope))
        }
    };
    result.map_err(|(index, reason, detail)| err(Some(index), reason, detail))?;

    if perspective == Perspective::Mapping {
        touch.mapping_touched = !delta.operations.is_empty();
    } else {
        if delta.target.mode == TargetMode::Create {
            touch.created_models.insert(target.clone());
            touch.touched_models.insert(target.clone());
        }
        if !delta.operations.is_empty() {
            touch.touched_models.insert(target.clone());
        }
    }
    if !delta.operations.is_empty() {
        let summary = touch.operation_summary.entry(target.clone()).or_default();
        for op in &delta.operations {
            *summary.entry(op.kind()).or_default() += 1;
        }
        touch.element_scope.insert(target.clone(), scope);
    }
    Ok((out, touch))
}

/// Folds [`apply_delta`] over `deltas`; the first failure aborts generation.
pub fn generate_variant(
    core: &ModelSet,
    deltas: &[Delta],
) -> Result<(ModelSet, Vec<TouchSet>), ApplicationError> {
    let mut models = core.clone();
    let mut touches = Vec::with_capacity(deltas.len());
    for delta in deltas {
        let (next, touch) = apply_delta(&models, delta)?;
        models = next;
        touches.push(touch);
    }
    Ok((models, touches))
}

/// Builds a model set from standalone models.
pub fn model_set<I: IntoIterator<Item = Model>>(models: I) -> ModelSet {
    let mut set = ModelSet::new();
    for m in models {
        set.insert(m);
    }
    set
}

type OpError = (usize, ApplicationErrorReason, String);
type OpResult = Result<(), (ApplicationErrorReason, String)>;

fn apply_each(delta: &Delta, mut f: impl FnMut(&DeltaOperation) -> OpResult) -> Result<(), OpError> {
    for (i, op) in delta.operations.iter().enumerate() {
        if op.perspective() != delta.target.model.perspective() {
            return Err((
                i,
                ApplicationErrorReason::UnsupportedOperation,
                format!("{} is not applicable to {}", op.kind(), delta.target.model),
            ));
        }
        f(op).map_err(|(reason, detail)| (i, reason, detail))?;
    }
    Ok(())
}

fn not_found(what: impl core::fmt::Display) -> (ApplicationErrorReason, String) {
    (ApplicationErrorReason::ElementNotFound, format!("{what} not found"))
}

fn already_exists(what: impl core::fmt::Display) -> (ApplicationErrorReason, String) {
    (
        ApplicationErrorReason::ElementAlreadyExists,
        format!("{what} already exists"),
    )
}

/// Adds `id`, every transition touching it and the opposite endpoints.
fn add_incident<'a>(
    edges: impl Iterator<Item = (&'a str, &'a str, &'a str)>,
    id: &str,
    scope: &mut BTreeSet<String>,
) {
    scope.insert(id.to_string());
    for (tid, src, tgt) in edges {
        if src == id || tgt == id {
            scope.insert(tid.to_string());
            scope.insert(src.to_string());
            scope.insert(tgt.to_string());
        }
    }
}

fn wf_edges(m: &WorkflowModel) -> impl Iterator<Item = (&str, &str, &str)> {
    m.transitions
        .iter()
        .map(|t| (t.id.as_str(), t.source.as_str(), t.target.as_str()))
}

fn sc_edges(m: &StateChartModel) -> impl Iterator<Item = (&str, &str, &str)> {
    m.transitions
        .iter()
        .map(|t| (t.id.as_str(), t.source.as_str(), t.target.as_str()))
}

fn apply_workflow(m: &mut WorkflowModel, op: &DeltaOperation, scope: &mut BTreeSet<String>) -> OpResult {
    use DeltaOperation as Op;
    match op {
        Op::AddNode(node) => {
            m.nodes.push(node.clone());
            add_incident(wf_edges(m), &node.id, scope);
        }
        Op::RemoveNode { kind, id } => {
            if !m.nodes.iter().any(|n| &n.id == id && n.kind == *kind) {
                return Err(not_found(format_args!("{} `{id}`", kind.keyword())));
            }
            add_incident(wf_edges(m), id, scope);
            m.nodes.retain(|n| !(&n.id == id && n.kind == *kind));
        }
        Op::ModifyTask { id, rates } => {
            let mut hit = false;
            for n in m.nodes.iter_mut().filter(|n| &n.id == id && n.kind == NodeKind::Task) {
                n.rates = *rates;
                hit = true;
            }
            if !hit {
                return Err(not_found(format_args!("task `{id}`")));
            }
            scope.insert(id.clone());
        }
        Op::ModifyPerformance { task, arrival, service } => {
            let mut hit = false;
            for n in m.nodes.iter_mut().filter(|n| &n.id == task && n.kind == NodeKind::Task) {
                n.rates.arrival = Some(*arrival);
                n.rates.service = Some(*service);
                hit = true;
            }
            if !hit {
                return Err(not_found(format_args!("task `{task}`")));
            }
            scope.insert(task.clone());
        }
        Op::AddWfTransition(t) => {
            if m.transitions.iter().any(|x| x.id == t.id) {
                return Err(already_exists(format_args!("transition `{}`", t.id)));
            }
            scope.extend([t.id.clone(), t.source.clone(), t.target.clone()]);
            m.transitions.push(t.clone());
        }
        Op::RemoveWfTransition { id } => {
            let pos = m
                .transitions
                .iter()
                .position(|x| &x.id == id)
                .ok_or_else(|| not_found(format_args!("transition `{id}`")))?;
            let old = m.transitions.remove(pos);
            scope.extend([old.id, old.source, old.target]);
        }
        Op::ModifyWfTransition(t) => {
            let slot = m
                .transitions
                .iter_mut()
                .find(|x| x.id == t.id)
                .ok_or_else(|| not_found(format_args!("transition `{}`", t.id)))?;
            scope.extend([slot.source.clone(), slot.target.clone()]);
            scope.extend([t.id.clone(), t.source.clone(), t.target.clone()]);
            *slot = t.clone();
        }
        _ => unreachable!("perspective checked by caller"),
    }
    Ok(())
}

fn component_scope(m: &ArchitectureModel, name: &str, scope: &mut BTreeSet<String>) {
    scope.insert(name.to_string());
    for c in m.components.iter().filter(|c| c.name == name) {
        for p in &c.ports {
            scope.insert(format!("{}.{}", c.name, p.name));
        }
    }
    for k in &m.connectors {
        if k.source.component == name || k.target.component == name {
            scope.insert(k.id.clone());
        }
    }
    for e in m.externals.iter().filter(|e| e.target.component == name) {
        scope.insert(e.element_id());
    }
}

fn port_scope(m: &ArchitectureModel, endpoint: &Endpoint, scope: &mut BTreeSet<String>) {
    scope.insert(endpoint.component.clone());
    scope.insert(endpoint.to_string());
    for k in &m.connectors {
        if &k.source == endpoint || &k.target == endpoint {
            scope.insert(k.id.clone());
        }
    }
    for e in m.externals.iter().filter(|e| &e.target == endpoint) {
        scope.insert(e.element_id());
    }
}

fn apply_architecture(
    m: &mut ArchitectureModel,
    op: &DeltaOperation,
    scope: &mut BTreeSet<String>,
) -> OpResult {
    use DeltaOperation as Op;
    match op {
        Op::AddComponent(c) => {
            m.components.push(c.clone());
            component_scope(m, &c.name, scope);
        }
        Op::RemoveComponent { name } => {
            if !m.has_component(name) {
                return Err(not_found(format_args!("component `{name}`")));
            }
            component_scope(m, name, scope);
            m.components.retain(|c| &c.name != name);
        }
        Op::ModifyComponent(c) => {
            if !m.has_component(&c.name) {
                return Err(not_found(format_args!("component `{}`", c.name)));
            }
            component_scope(m, &c.name, scope);
            for slot in m.components.iter_mut().filter(|x| x.name == c.name) {
                slot.ports = c.ports.clone();
            }
            component_scope(m, &c.name, scope);
        }
        Op::AddPort { component, port } => {
            if !m.has_component(component) {
                return Err(not_found(format_args!("component `{component}`")));
            }
            for c in m.components.iter_mut().filter(|c| &c.name == component) {
                c.ports.push(port.clone());
            }
            port_scope(m, &Endpoint::new(component.clone(), port.name.clone()), scope);
        }
        Op::RemovePort { component, port } => {
            let endpoint = Endpoint::new(component.clone(), port.clone());
            if m.resolve(&endpoint).next().is_none() {
                return Err(not_found(format_args!("port `{endpoint}`")));
            }
            port_scope(m, &endpoint, scope);
            for c in m.components.iter_mut().filter(|c| &c.name == component) {
                c.ports.retain(|p| &p.name != port);
            }
        }
        Op::AddConnector(k) => {
            if m.connectors.iter().any(|x| x.id == k.id) {
                return Err(already_exists(format_args!("connector `{}`", k.id)));
            }
            connector_scope(k, scope);
            m.connectors.push(k.clone());
        }
        Op::RemoveConnector { id } => {
            let pos = m
                .connectors
                .iter()
                .position(|x| &x.id == id)
                .ok_or_else(|| not_found(format_args!("connector `{id}`")))?;
            let old = m.connectors.remove(pos);
            connector_scope(&old, scope);
        }
        Op::AddExternal(e) => {
            if m.externals.contains(e) {
                return Err(already_exists(format_args!("external signal `{}`", e.element_id())));
            }
            scope.extend([e.element_id(), e.signal.clone(), e.target.to_string()]);
            m.externals.push(e.clone());
        }
        Op::RemoveExternal(e) => {
            let pos = m
                .externals
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| not_found(format_args!("external signal `{}`", e.element_id())))?;
            m.externals.remove(pos);
            scope.extend([e.element_id(), e.signal.clone(), e.target.to_string()]);
        }
        Op::ModifySignal { from, to } => {
            if !m.signals.iter().any(|s| &s.name == from) {
                return Err(not_found(format_args!("signal `{from}`")));
            }
            scope.extend([from.clone(), to.clone()]);
            for k in m.connectors.iter().filter(|k| &k.signal == from || &k.signal == to) {
                scope.insert(k.id.clone());
            }
            for e in m.externals.iter().filter(|e| &e.signal == from || &e.signal == to) {
                scope.insert(e.element_id());
            }
            for s in m.signals.iter_mut().filter(|s| &s.name == from) {
                s.name = to.clone();
            }
        }
        _ => unreachable!("perspective checked by caller"),
    }
    Ok(())
}

fn connector_scope(k: &crate::model::Connector, scope: &mut BTreeSet<String>) {
    scope.extend([
        k.id.clone(),
        k.signal.clone(),
        k.source.to_string(),
        k.target.to_string(),
        k.source.component.clone(),
        k.target.component.clone(),
    ]);
}

fn apply_statechart(m: &mut StateChartModel, op: &DeltaOperation, scope: &mut BTreeSet<String>) -> OpResult {
    use DeltaOperation as Op;
    match op {
        Op::AddState(s) => {
            m.states.push(s.clone());
            add_incident(sc_edges(m), &s.id, scope);
        }
        Op::RemoveState { kind, id } => {
            if !m.states.iter().any(|s| &s.id == id && s.kind == *kind) {
                return Err(not_found(format_args!("{} `{id}`", state_word(*kind))));
            }
            add_incident(sc_edges(m), id, scope);
            m.states.retain(|s| !(&s.id == id && s.kind == *kind));
        }
        Op::ModifyState { id, kind } => {
            let mut hit = false;
            for s in m.states.iter_mut().filter(|s| &s.id == id) {
                s.kind = *kind;
                hit = true;
            }
            if !hit {
                return Err(not_found(format_args!("state `{id}`")));
            }
            add_incident(sc_edges(m), id, scope);
        }
        Op::AddScTransition(t) => {
            if m.transitions.iter().any(|x| x.id == t.id) {
                return Err(already_exists(format_args!("transition `{}`", t.id)));
            }
            scope.extend([t.id.clone(), t.source.clone(), t.target.clone()]);
            m.transitions.push(t.clone());
        }
        Op::RemoveScTransition { id } => {
            let pos = m
                .transitions
                .iter()
                .position(|x| &x.id == id)
                .ok_or_else(|| not_found(format_args!("transition `{id}`")))?;
            let old = m.transitions.remove(pos);
            scope.extend([old.id, old.source, old.target]);
        }
        Op::ModifyScTransition(t) => {
            let slot = m
                .transitions
                .iter_mut()
                .find(|x| x.id == t.id)
                .ok_or_else(|| not_found(format_args!("transition `{}`", t.id)))?;
            scope.extend([slot.source.clone(), slot.target.clone()]);
            scope.extend([t.id.clone(), t.source.clone(), t.target.clone()]);
            *slot = t.clone();
        }
        _ => unreachable!("perspective checked by caller"),
    }
    Ok(())
}

fn state_word(kind: StateKind) -> &'static str {
    match kind {
        StateKind::Initial => "initial state",
        StateKind::Normal => "state",
        StateKind::Final => "final state",
    }
}

fn apply_mapping(m: &mut MappingModel, op: &DeltaOperation, scope: &mut BTreeSet<String>) -> OpResult {
    use DeltaOperation as Op;
    match op {
        Op::AddTaskMap(e) => {
            if m.task_maps.contains(e) {
                return Err(already_exists(format_args!("task mapping `{}`", e.element_id())));
            }
            scope.insert(e.element_id());
            m.task_maps.push(e.clone());
        }
        Op::RemoveTaskMap(e) => {
            let pos = m
                .task_maps
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| not_found(format_args!("task mapping `{}`", e.element_id())))?;
            m.task_maps.remove(pos);
            scope.insert(e.element_id());
        }
        Op::AddBehaviorMap(e) => {
            if m.behavior_maps.contains(e) {
                return Err(already_exists(format_args!("behavior mapping `{}`", e.element_id())));
            }
            scope.insert(e.element_id());
            m.behavior_maps.push(e.clone());
        }
        Op::RemoveBehaviorMap(e) => {
            let pos = m
                .behavior_maps
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| not_found(format_args!("behavior mapping `{}`", e.element_id())))?;
            m.behavior_maps.remove(pos);
            scope.insert(e.element_id());
        }
        _ => unreachable!("perspective checked by caller"),
    }
    Ok(())
}
