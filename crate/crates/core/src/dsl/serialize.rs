//! Canonical text form: two-space indentation, one item per line, explicit
//! transition ids, LF line endings and a trailing newline.

use alloc::string::String;
use core::fmt::Write;

use super::manifest::Manifest;
use crate::delta::{Delta, DeltaOperation, TargetMode};
use crate::model::{
    BehaviorMap, Component, Connector, ExternalSignal, Model, ModelRef, Rates, ScTransition,
    StateKind, TaskMap, WorkflowTransition,
};

fn quoted(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Writes `header {`, the lines, and `}`; an empty body stays on one line.
fn block(out: &mut String, header: &str, lines: &[String]) {
    if lines.is_empty() {
        let _ = writeln!(out, "{header} {{ }}");
        return;
    }
    let _ = writeln!(out, "{header} {{");
    for l in lines {
        let _ = writeln!(out, "  {l}");
    }
    out.push_str("}\n");
}

fn rates(r: &Rates) -> String {
    let mut s = String::from("{");
    if let Some(a) = r.arrival {
        let _ = write!(s, " arrival {a};");
    }
    if let Some(v) = r.service {
        let _ = write!(s, " service {v};");
    }
    s.push_str(" }");
    s
}

fn wf_transition(t: &WorkflowTransition) -> String {
    let mut s = alloc::format!("{}: {} -> {}", t.id, t.source, t.target);
    if let Some(g) = &t.guard {
        s.push_str(" guard ");
        quoted(&mut s, g);
    }
    if let Some(p) = t.probability {
        let _ = write!(s, " probability {p}");
    }
    s.push(';');
    s
}

fn sc_transition(t: &ScTransition) -> String {
    let mut s = alloc::format!("{}: {} -> {}", t.id, t.source, t.target);
    if let Some(e) = &t.event {
        let _ = write!(s, " on {e}");
    }
    if let Some(g) = &t.guard {
        s.push_str(" guard ");
        quoted(&mut s, g);
    }
    if let Some(a) = &t.action {
        s.push_str(" do ");
        quoted(&mut s, a);
    }
    s.push(';');
    s
}

fn ports(c: &Component) -> String {
    let mut s = String::from("{");
    for p in &c.ports {
        let _ = write!(s, " {} port {};", p.direction.keyword(), p.name);
    }
    s.push_str(" }");
    s
}

fn connector(k: &Connector) -> String {
    alloc::format!("{}: {} {} -> {};", k.id, k.signal, k.source, k.target)
}

fn external(e: &ExternalSignal) -> String {
    alloc::format!("{} -> {};", e.signal, e.target)
}

fn task_map(e: &TaskMap) -> String {
    alloc::format!(
        "task {}.{} -> component {}.{};",
        e.workflow,
        e.task,
        e.architecture,
        e.component
    )
}

fn behavior_map(e: &BehaviorMap) -> String {
    alloc::format!(
        "component {}.{} -> statechart {};",
        e.architecture,
        e.component,
        e.statechart
    )
}

pub fn serialize_model(model: &Model) -> String {
    use alloc::format;
    use alloc::vec::Vec;
    let mut out = String::new();
    match model {
        Model::Workflow(m) => {
            let mut lines: Vec<String> = m
                .nodes
                .iter()
                .map(|n| {
                    let kw = n.kind.keyword();
                    if n.rates != Rates::default() {
                        format!("{kw} {} {}", n.id, rates(&n.rates))
                    } else {
                        format!("{kw} {};", n.id)
                    }
                })
                .collect();
            lines.extend(m.transitions.iter().map(|t| format!("transition {}", wf_transition(t))));
            block(&mut out, &format!("workflow {}", m.name), &lines);
        }
        Model::Architecture(m) => {
            let mut lines: Vec<String> = m
                .components
                .iter()
                .map(|c| format!("component {} {}", c.name, ports(c)))
                .collect();
            lines.extend(m.signals.iter().map(|s| format!("signal {};", s.name)));
            lines.extend(m.connectors.iter().map(|k| format!("connector {}", connector(k))));
            lines.extend(m.externals.iter().map(|e| format!("external {}", external(e))));
            block(&mut out, &format!("architecture {}", m.name), &lines);
        }
        Model::StateChart(m) => {
            let mut lines: Vec<String> = m
                .states
                .iter()
                .map(|s| format!("{} {};", s.kind.keyword(), s.id))
                .collect();
            lines.extend(m.transitions.iter().map(|t| format!("transition {}", sc_transition(t))));
            block(&mut out, &format!("statechart {}", m.name), &lines);
        }
        Model::Mapping(m) => {
            let mut lines: Vec<String> = m.task_maps.iter().map(task_map).collect();
            lines.extend(m.behavior_maps.iter().map(behavior_map));
            block(&mut out, &format!("mapping {}", m.name), &lines);
        }
    }
    out
}

fn operation(op: &DeltaOperation) -> String {
    use alloc::format;
    use DeltaOperation as Op;
    match op {
        Op::AddNode(n) if n.rates != Rates::default() => {
            format!("add {} {} {}", n.kind.keyword(), n.id, rates(&n.rates))
        }
        Op::AddNode(n) => format!("add {} {};", n.kind.keyword(), n.id),
        Op::RemoveNode { kind, id } => format!("remove {} {id};", kind.keyword()),
        Op::ModifyTask { id, rates: r } => format!("modify task {id} {}", rates(r)),
        Op::AddWfTransition(t) => format!("add transition {}", wf_transition(t)),
        Op::RemoveWfTransition { id } => format!("remove transition {id};"),
        Op::ModifyWfTransition(t) => format!("modify transition {}", wf_transition(t)),
        Op::ModifyPerformance {
            task,
            arrival,
            service,
        } => format!("modify performance {task} {{ arrival {arrival}; service {service}; }}"),
        Op::AddComponent(c) => format!("add component {} {}", c.name, ports(c)),
        Op::RemoveComponent { name } => format!("remove component {name};"),
        Op::ModifyComponent(c) => format!("modify component {} {}", c.name, ports(c)),
        Op::AddPort { component, port } => {
            format!("add {} port {component}.{};", port.direction.keyword(), port.name)
        }
        Op::RemovePort { component, port } => format!("remove port {component}.{port};"),
        Op::AddConnector(k) => format!("add connector {}", connector(k)),
        Op::RemoveConnector { id } => format!("remove connector {id};"),
        Op::AddExternal(e) => format!("add external {}", external(e)),
        Op::RemoveExternal(e) => format!("remove external {}", external(e)),
        Op::ModifySignal { from, to } => format!("modify signal {from} -> {to};"),
        Op::AddState(s) => format!("add {} {};", s.kind.keyword(), s.id),
        Op::RemoveState { kind, id } => format!("remove {} {id};", kind.keyword()),
        Op::ModifyState { id, kind } => {
            let kw = match kind {
                StateKind::Normal => "normal",
                other => other.keyword(),
            };
            format!("modify state {id} {kw};")
        }
        Op::AddScTransition(t) => format!("add transition {}", sc_transition(t)),
        Op::RemoveScTransition { id } => format!("remove transition {id};"),
        Op::ModifyScTransition(t) => format!("modify transition {}", sc_transition(t)),
        Op::AddTaskMap(e) => format!("add {}", task_map(e)),
        Op::RemoveTaskMap(e) => format!("remove {}", task_map(e)),
        Op::AddBehaviorMap(e) => format!("add {}", behavior_map(e)),
        Op::RemoveBehaviorMap(e) => format!("remove {}", behavior_map(e)),
    }
}

pub fn serialize_delta(delta: &Delta) -> String {
    use alloc::vec::Vec;
    let verb = match delta.target.mode {
        TargetMode::Modify => "on",
        TargetMode::Create => "creates",
    };
    let target = match &delta.target.model {
        ModelRef::Mapping => String::from("mapping"),
        m => alloc::format!("{} {}", m.perspective().keyword(), m.name().unwrap_or_default()),
    };
    let lines: Vec<String> = delta.operations.iter().map(operation).collect();
    let mut out = String::new();
    block(&mut out, &alloc::format!("delta {} {verb} {target}", delta.name), &lines);
    out
}

pub fn serialize_manifest(m: &Manifest) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "productline {} {{", m.name);
    let section = |out: &mut String, name: &str, kw: &str, paths: &[String]| {
        if paths.is_empty() {
            let _ = writeln!(out, "  {name} {{ }}");
            return;
        }
        let _ = writeln!(out, "  {name} {{");
        for p in paths {
            let _ = write!(out, "    {kw} ");
            quoted(out, p);
            out.push_str(";\n");
        }
        out.push_str("  }\n");
    };
    section(&mut out, "core", "file", &m.core_files);
    section(&mut out, "deltas", "delta", &m.delta_files);
    for v in &m.variants {
        if v.deltas.is_empty() {
            let _ = writeln!(out, "  variant {} {{ }}", v.name);
        } else {
            let _ = writeln!(out, "  variant {} {{ apply {}; }}", v.name, v.deltas.join(", "));
        }
    }
    out.push_str("}\n");
    out
}
