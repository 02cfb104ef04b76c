use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::lexer::{tokenize, Tok, Token};
use super::manifest::{Manifest, VariantDecl};
use super::{Document, ParseError, SourceLocation};
use crate::delta::{Action, Delta, DeltaOperation, DeltaTarget, ElementKind, OperationKind};
use crate::model::{
    ArchitectureModel, BehaviorMap, Component, Connector, Direction, Endpoint, ExternalSignal,
    MappingModel, Model, ModelRef, NodeKind, Perspective, Port, Rates, ScTransition, Signal, State,
    StateChartModel, StateKind, TaskMap, WorkflowModel, WorkflowNode, WorkflowTransition,
};

const MODEL_KEYWORDS: [&str; 4] = ["workflow", "architecture", "statechart", "mapping"];

type Result<T> = core::result::Result<T, ParseError>;

pub(crate) struct Parser<'a> {
    file: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(file: &'a str, text: &str) -> Result<Self> {
        Ok(Parser {
            file,
            toks: tokenize(file, text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn loc(&self) -> SourceLocation {
        let t = &self.toks[self.pos];
        SourceLocation::new(self.file, t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        let message = match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        ParseError {
            location: self.loc(),
            message,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub(crate) fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        let hit = self.at_keyword(kw);
        if hit {
            self.bump();
        }
        hit
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&[kw]))
        }
    }

    pub(crate) fn punct(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn eat(&mut self, tok: Tok) -> bool {
        let hit = *self.peek() == tok;
        if hit {
            self.bump();
        }
        hit
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    pub(crate) fn string(&mut self) -> Result<String> {
        match self.peek() {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["string"])),
        }
    }

    fn number(&mut self) -> Result<f64> {
        match *self.peek() {
            Tok::Number(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    pub(crate) fn end(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn dotted(&mut self, first: &str, second: &str) -> Result<(String, String)> {
        let a = self.ident(first)?;
        self.punct(Tok::Dot)?;
        let b = self.ident(second)?;
        Ok((a, b))
    }

    fn endpoint(&mut self) -> Result<Endpoint> {
        let (c, p) = self.dotted("component name", "port name")?;
        Ok(Endpoint::new(c, p))
    }

    /// Reads a declared id, rejecting repeats within `seen`.
    fn fresh(&mut self, what: &str, seen: &mut BTreeSet<String>) -> Result<String> {
        let loc = self.loc();
        let id = self.ident(&format!("{what} name"))?;
        if !seen.insert(id.clone()) {
            return Err(ParseError::new(loc, format!("duplicate {what} `{id}`")));
        }
        Ok(id)
    }

    // -- shared pieces ------------------------------------------------------

    /// `{ arrival N; service N; }` with both entries optional.
    fn rates_block(&mut self) -> Result<Rates> {
        self.punct(Tok::LBrace)?;
        let mut rates = Rates::default();
        loop {
            let loc = self.loc();
            let slot = if self.eat_keyword("arrival") {
                &mut rates.arrival
            } else if self.eat_keyword("service") {
                &mut rates.service
            } else if self.eat(Tok::RBrace) {
                return Ok(rates);
            } else {
                return Err(self.unexpected(&["arrival", "service", "`}`"]));
            };
            if slot.is_some() {
                return Err(ParseError::new(loc, "rate given twice"));
            }
            *slot = Some(self.number()?);
            self.punct(Tok::Semi)?;
        }
    }

    fn wf_transition_tail(&mut self, id: String) -> Result<WorkflowTransition> {
        let source = self.ident("node name")?;
        self.punct(Tok::Arrow)?;
        let target = self.ident("node name")?;
        let mut t = WorkflowTransition::new(id, source, target);
        loop {
            let loc = self.loc();
            if self.eat_keyword("guard") {
                if t.guard.is_some() {
                    return Err(ParseError::new(loc, "guard given twice"));
                }
                t.guard = Some(self.string()?);
            } else if self.eat_keyword("probability") {
                if t.probability.is_some() {
                    return Err(ParseError::new(loc, "probability given twice"));
                }
                t.probability = Some(self.number()?);
            } else if self.eat(Tok::Semi) {
                return Ok(t);
            } else {
                return Err(self.unexpected(&["guard", "probability", "`;`"]));
            }
        }
    }

    fn sc_transition_tail(&mut self, id: String) -> Result<ScTransition> {
        let source = self.ident("state name")?;
        self.punct(Tok::Arrow)?;
        let target = self.ident("state name")?;
        let mut t = ScTransition::new(id, source, target);
        loop {
            let loc = self.loc();
            let slot = if self.eat_keyword("on") {
                if t.event.is_some() {
                    return Err(ParseError::new(loc, "event given twice"));
                }
                t.event = Some(self.ident("event name")?);
                continue;
            } else if self.eat_keyword("guard") {
                &mut t.guard
            } else if self.eat_keyword("do") {
                &mut t.action
            } else if self.eat(Tok::Semi) {
                return Ok(t);
            } else {
                return Err(self.unexpected(&["on", "guard", "do", "`;`"]));
            };
            if slot.is_some() {
                return Err(ParseError::new(loc, "attribute given twice"));
            }
            *slot = Some(self.string()?);
        }
    }

    /// Optional `id:` prefix of a transition inside a model body.
    fn optional_label(&mut self) -> Result<Option<String>> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
            let id = self.ident("transition id")?;
            self.bump();
            Ok(Some(id))
        } else {
            Ok(None)
        }
    }

    fn label(&mut self) -> Result<String> {
        let id = self.ident("transition id")?;
        self.punct(Tok::Colon)?;
        Ok(id)
    }

    fn port_decls(&mut self, component: &str) -> Result<Vec<Port>> {
        self.punct(Tok::LBrace)?;
        let mut ports = Vec::new();
        let mut seen = BTreeSet::new();
        loop {
            let direction = if self.eat_keyword("in") {
                Direction::In
            } else if self.eat_keyword("out") {
                Direction::Out
            } else if self.eat(Tok::RBrace) {
                return Ok(ports);
            } else {
                return Err(self.unexpected(&["in", "out", "`}`"]));
            };
            self.keyword("port")?;
            let loc = self.loc();
            let name = self.ident("port name")?;
            if !seen.insert(name.clone()) {
                return Err(ParseError::new(
                    loc,
                    format!("duplicate port `{name}` in component `{component}`"),
                ));
            }
            self.punct(Tok::Semi)?;
            ports.push(Port::new(name, direction));
        }
    }

    fn connector_tail(&mut self, id: String) -> Result<Connector> {
        let signal = self.ident("signal name")?;
        let source = self.endpoint()?;
        self.punct(Tok::Arrow)?;
        let target = self.endpoint()?;
        self.punct(Tok::Semi)?;
        Ok(Connector {
            id,
            signal,
            source,
            target,
        })
    }

    fn external_tail(&mut self) -> Result<ExternalSignal> {
        let signal = self.ident("signal name")?;
        self.punct(Tok::Arrow)?;
        let target = self.endpoint()?;
        self.punct(Tok::Semi)?;
        Ok(ExternalSignal { signal, target })
    }

    fn task_map_tail(&mut self) -> Result<TaskMap> {
        let (workflow, task) = self.dotted("workflow name", "task name")?;
        self.punct(Tok::Arrow)?;
        self.keyword("component")?;
        let (architecture, component) = self.dotted("architecture name", "component name")?;
        self.punct(Tok::Semi)?;
        Ok(TaskMap {
            workflow,
            task,
            architecture,
            component,
        })
    }

    fn behavior_map_tail(&mut self) -> Result<BehaviorMap> {
        let (architecture, component) = self.dotted("architecture name", "component name")?;
        self.punct(Tok::Arrow)?;
        self.keyword("statechart")?;
        let statechart = self.ident("state chart name")?;
        self.punct(Tok::Semi)?;
        Ok(BehaviorMap {
            architecture,
            component,
            statechart,
        })
    }

    // -- models -------------------------------------------------------------

    fn model(&mut self) -> Result<Model> {
        if self.eat_keyword("workflow") {
            self.workflow().map(Model::Workflow)
        } else if self.eat_keyword("architecture") {
            self.architecture().map(Model::Architecture)
        } else if self.eat_keyword("statechart") {
            self.statechart().map(Model::StateChart)
        } else if self.eat_keyword("mapping") {
            self.mapping().map(Model::Mapping)
        } else {
            Err(self.unexpected(&MODEL_KEYWORDS))
        }
    }

    fn workflow(&mut self) -> Result<WorkflowModel> {
        let mut m = WorkflowModel::new(self.ident("workflow name")?);
        self.punct(Tok::LBrace)?;
        let mut nodes = BTreeSet::new();
        let mut labels = BTreeSet::new();
        let mut pending: Vec<(Option<String>, WorkflowTransition)> = Vec::new();
        loop {
            if self.eat(Tok::RBrace) {
                break;
            }
            if self.eat_keyword("transition") {
                let loc = self.loc();
                let label = self.optional_label()?;
                if let Some(l) = &label {
                    if !labels.insert(l.clone()) {
                        return Err(ParseError::new(loc, format!("duplicate transition `{l}`")));
                    }
                }
                let t = self.wf_transition_tail(String::new())?;
                pending.push((label, t));
                continue;
            }
            let Some(kind) = NodeKind::ALL.into_iter().find(|k| self.at_keyword(k.keyword())) else {
                let mut expected: Vec<&str> = NodeKind::ALL.iter().map(|k| k.keyword()).collect();
                expected.extend(["transition", "`}`"]);
                return Err(self.unexpected(&expected));
            };
            self.bump();
            let id = self.fresh("node", &mut nodes)?;
            let mut node = WorkflowNode::new(id, kind);
            if kind == NodeKind::Task && *self.peek() == Tok::LBrace {
                node.rates = self.rates_block()?;
            } else {
                self.punct(Tok::Semi)?;
            }
            m.nodes.push(node);
        }
        m.transitions = assign_ids(pending, &labels, |t, id| t.id = id);
        Ok(m)
    }

    fn architecture(&mut self) -> Result<ArchitectureModel> {
        let mut m = ArchitectureModel::new(self.ident("architecture name")?);
        self.punct(Tok::LBrace)?;
        let (mut components, mut signals, mut connectors) =
            (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(m);
            }
            let loc = self.loc();
            if self.eat_keyword("component") {
                let name = self.fresh("component", &mut components)?;
                let ports = self.port_decls(&name)?;
                m.components.push(Component::new(name, ports));
            } else if self.eat_keyword("signal") {
                let name = self.fresh("signal", &mut signals)?;
                self.punct(Tok::Semi)?;
                m.signals.push(Signal { name });
            } else if self.eat_keyword("connector") {
                let id = self.fresh("connector", &mut connectors)?;
                self.punct(Tok::Colon)?;
                m.connectors.push(self.connector_tail(id)?);
            } else if self.eat_keyword("external") {
                let e = self.external_tail()?;
                if m.externals.contains(&e) {
                    return Err(ParseError::new(loc, format!("duplicate external signal `{}`", e.element_id())));
                }
                m.externals.push(e);
            } else {
                return Err(self.unexpected(&["component", "signal", "connector", "external", "`}`"]));
            }
        }
    }

    fn statechart(&mut self) -> Result<StateChartModel> {
        let mut m = StateChartModel::new(self.ident("state chart name")?);
        self.punct(Tok::LBrace)?;
        let mut states = BTreeSet::new();
        let mut labels = BTreeSet::new();
        let mut pending: Vec<(Option<String>, ScTransition)> = Vec::new();
        loop {
            if self.eat(Tok::RBrace) {
                break;
            }
            if self.eat_keyword("transition") {
                let loc = self.loc();
                let label = self.optional_label()?;
                if let Some(l) = &label {
                    if !labels.insert(l.clone()) {
                        return Err(ParseError::new(loc, format!("duplicate transition `{l}`")));
                    }
                }
                let t = self.sc_transition_tail(String::new())?;
                pending.push((label, t));
                continue;
            }
            let kind = if self.eat_keyword("initial") {
                StateKind::Initial
            } else if self.eat_keyword("state") {
                StateKind::Normal
            } else if self.eat_keyword("final") {
                StateKind::Final
            } else {
                return Err(self.unexpected(&["initial", "state", "final", "transition", "`}`"]));
            };
            let id = self.fresh("state", &mut states)?;
            self.punct(Tok::Semi)?;
            m.states.push(State::new(id, kind));
        }
        m.transitions = assign_ids(pending, &labels, |t, id| t.id = id);
        Ok(m)
    }

    fn mapping(&mut self) -> Result<MappingModel> {
        let mut m = MappingModel::new(self.ident("mapping name")?);
        self.punct(Tok::LBrace)?;
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(m);
            }
            let loc = self.loc();
            if self.eat_keyword("task") {
                let e = self.task_map_tail()?;
                if m.task_maps.contains(&e) {
                    return Err(ParseError::new(loc, format!("duplicate mapping `{}`", e.element_id())));
                }
                m.task_maps.push(e);
            } else if self.eat_keyword("component") {
                let e = self.behavior_map_tail()?;
                if m.behavior_maps.contains(&e) {
                    return Err(ParseError::new(loc, format!("duplicate mapping `{}`", e.element_id())));
                }
                m.behavior_maps.push(e);
            } else {
                return Err(self.unexpected(&["task", "component", "`}`"]));
            }
        }
    }

    // -- deltas -------------------------------------------------------------

    fn delta(&mut self) -> Result<Delta> {
        let name = self.ident("delta name")?;
        let create = if self.eat_keyword("on") {
            false
        } else if self.eat_keyword("creates") {
            true
        } else {
            return Err(self.unexpected(&["on", "creates"]));
        };
        let loc = self.loc();
        let perspective = if self.eat_keyword("workflow") {
            Perspective::Workflow
        } else if self.eat_keyword("architecture") {
            Perspective::Architecture
        } else if self.eat_keyword("statechart") {
            Perspective::Behavior
        } else if self.eat_keyword("mapping") {
            Perspective::Mapping
        } else {
            return Err(self.unexpected(&MODEL_KEYWORDS));
        };
        let target = if perspective == Perspective::Mapping {
            if create {
                return Err(ParseError::new(loc, "the mapping cannot be created, only modified"));
            }
            DeltaTarget::mapping()
        } else {
            let model = ModelRef::new(perspective, self.ident("model name")?);
            if create {
                DeltaTarget::creates(model)
            } else {
                DeltaTarget::on(model)
            }
        };
        let mut delta = Delta::new(name, target);
        self.punct(Tok::LBrace)?;
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(delta);
            }
            let action = if self.eat_keyword("add") {
                Action::Add
            } else if self.eat_keyword("remove") {
                Action::Remove
            } else if self.eat_keyword("modify") {
                Action::Modify
            } else {
                return Err(self.unexpected(&["add", "remove", "modify", "`}`"]));
            };
            let op = self.operation(perspective, action)?;
            delta.operations.push(op);
        }
    }

    /// Element keywords accepted after an action, with the element kind each denotes.
    fn element_keywords(perspective: Perspective) -> &'static [(&'static str, ElementKind)] {
        use ElementKind as K;
        match perspective {
            Perspective::Workflow => &[
                ("task", K::Task),
                ("decision", K::Decision),
                ("merge", K::Merge),
                ("fork", K::Fork),
                ("join", K::Join),
                ("initial", K::InitialNode),
                ("final", K::FinalNode),
                ("transition", K::WfTransition),
                ("performance", K::PerformanceValues),
            ],
            Perspective::Architecture => &[
                ("component", K::Component),
                ("in", K::Port),
                ("out", K::Port),
                ("port", K::Port),
                ("connector", K::Connection),
                ("external", K::Connection),
                ("signal", K::Signal),
            ],
            Perspective::Behavior => &[
                ("state", K::State),
                ("initial", K::ScInitial),
                ("final", K::ScFinal),
                ("transition", K::ScTransition),
            ],
            Perspective::Mapping => &[("task", K::TaskMap), ("component", K::BehaviorMap)],
        }
    }

    fn operation(&mut self, perspective: Perspective, action: Action) -> Result<DeltaOperation> {
        use DeltaOperation as Op;
        let loc = self.loc();
        let keywords = Self::element_keywords(perspective);
        let Some(&(word, element)) = keywords.iter().find(|(w, _)| self.at_keyword(w)) else {
            let mut expected: Vec<&str> = Vec::new();
            for (w, _) in keywords {
                if !expected.contains(w) {
                    expected.push(w);
                }
            }
            return Err(self.unexpected(&expected));
        };
        let kind = OperationKind::new(action, element).ok_or_else(|| {
            ParseError::new(
                loc.clone(),
                format!("`{}` is not supported for {}", action.keyword(), element.name()),
            )
        })?;
        // `in`/`out` only introduce port additions.
        if matches!(word, "in" | "out") && action != Action::Add {
            return Err(self.unexpected(&["port"]));
        }
        if word == "port" && action == Action::Add {
            return Err(self.unexpected(&["in", "out"]));
        }
        self.bump();

        let op = match (kind.action(), kind.target()) {
            (Action::Add, ElementKind::Task) => {
                let mut node = WorkflowNode::new(self.ident("task name")?, NodeKind::Task);
                if *self.peek() == Tok::LBrace {
                    node.rates = self.rates_block()?;
                } else {
                    self.punct(Tok::Semi)?;
                }
                Op::AddNode(node)
            }
            (Action::Modify, ElementKind::Task) => {
                let id = self.ident("task name")?;
                Op::ModifyTask {
                    id,
                    rates: self.rates_block()?,
                }
            }
            (Action::Modify, ElementKind::PerformanceValues) => {
                let task = self.ident("task name")?;
                let at = self.loc();
                let rates = self.rates_block()?;
                let (Some(arrival), Some(service)) = (rates.arrival, rates.service) else {
                    return Err(ParseError::new(at, "performance values need both arrival and service"));
                };
                Op::ModifyPerformance {
                    task,
                    arrival,
                    service,
                }
            }
            (action, ElementKind::WfTransition) => match action {
                Action::Add => {
                    let id = self.label()?;
                    Op::AddWfTransition(self.wf_transition_tail(id)?)
                }
                Action::Modify => {
                    let id = self.label()?;
                    Op::ModifyWfTransition(self.wf_transition_tail(id)?)
                }
                Action::Remove => Op::RemoveWfTransition {
                    id: self.ident_semi("transition id")?,
                },
            },
            (action, target) if perspective == Perspective::Workflow => {
                let kind = NodeKind::ALL
                    .into_iter()
                    .find(|k| ElementKind::of_node(*k) == target)
                    .expect("remaining workflow kinds are node kinds");
                let id = self.ident_semi("node name")?;
                match action {
                    Action::Add => Op::AddNode(WorkflowNode::new(id, kind)),
                    _ => Op::RemoveNode { kind, id },
                }
            }

            (action, ElementKind::Component) => {
                let name = self.ident("component name")?;
                match action {
                    Action::Add => Op::AddComponent(Component::new(name.clone(), self.port_decls(&name)?)),
                    Action::Modify => {
                        Op::ModifyComponent(Component::new(name.clone(), self.port_decls(&name)?))
                    }
                    Action::Remove => {
                        self.punct(Tok::Semi)?;
                        Op::RemoveComponent { name }
                    }
                }
            }
            (Action::Add, ElementKind::Port) => {
                let direction = if word == "in" { Direction::In } else { Direction::Out };
                self.keyword("port")?;
                let (component, port) = self.dotted("component name", "port name")?;
                self.punct(Tok::Semi)?;
                Op::AddPort {
                    component,
                    port: Port::new(port, direction),
                }
            }
            (_, ElementKind::Port) => {
                let (component, port) = self.dotted("component name", "port name")?;
                self.punct(Tok::Semi)?;
                Op::RemovePort { component, port }
            }
            (action, ElementKind::Connection) => match (action, word) {
                (Action::Add, "connector") => {
                    let id = self.ident("connector id")?;
                    self.punct(Tok::Colon)?;
                    Op::AddConnector(self.connector_tail(id)?)
                }
                (_, "connector") => Op::RemoveConnector {
                    id: self.ident_semi("connector id")?,
                },
                (Action::Add, _) => Op::AddExternal(self.external_tail()?),
                _ => Op::RemoveExternal(self.external_tail()?),
            },
            (_, ElementKind::Signal) => {
                let from = self.ident("signal name")?;
                self.punct(Tok::Arrow)?;
                let to = self.ident("signal name")?;
                self.punct(Tok::Semi)?;
                Op::ModifySignal { from, to }
            }

            (Action::Modify, ElementKind::State) => {
                let id = self.ident("state name")?;
                let kind = if self.eat_keyword("initial") {
                    StateKind::Initial
                } else if self.eat_keyword("normal") {
                    StateKind::Normal
                } else if self.eat_keyword("final") {
                    StateKind::Final
                } else {
                    return Err(self.unexpected(&["initial", "normal", "final"]));
                };
                self.punct(Tok::Semi)?;
                Op::ModifyState { id, kind }
            }
            (action, ElementKind::ScTransition) => match action {
                Action::Add => {
                    let id = self.label()?;
                    Op::AddScTransition(self.sc_transition_tail(id)?)
                }
                Action::Modify => {
                    let id = self.label()?;
                    Op::ModifyScTransition(self.sc_transition_tail(id)?)
                }
                Action::Remove => Op::RemoveScTransition {
                    id: self.ident_semi("transition id")?,
                },
            },
            (action, target @ (ElementKind::State | ElementKind::ScInitial | ElementKind::ScFinal)) => {
                let kind = match target {
                    ElementKind::ScInitial => StateKind::Initial,
                    ElementKind::ScFinal => StateKind::Final,
                    _ => StateKind::Normal,
                };
                let id = self.ident_semi("state name")?;
                match action {
                    Action::Add => Op::AddState(State::new(id, kind)),
                    _ => Op::RemoveState { kind, id },
                }
            }

            (action, ElementKind::TaskMap) => {
                let e = self.task_map_tail()?;
                match action {
                    Action::Add => Op::AddTaskMap(e),
                    _ => Op::RemoveTaskMap(e),
                }
            }
            (action, ElementKind::BehaviorMap) => {
                let e = self.behavior_map_tail()?;
                match action {
                    Action::Add => Op::AddBehaviorMap(e),
                    _ => Op::RemoveBehaviorMap(e),
                }
            }
            (action, target) => unreachable!("{action:?} {target:?} handled above"),
        };
        Ok(op)
    }

    fn ident_semi(&mut self, what: &str) -> Result<String> {
        let id = self.ident(what)?;
        self.punct(Tok::Semi)?;
        Ok(id)
    }

    // -- manifests ----------------------------------------------------------

    fn manifest(&mut self) -> Result<Manifest> {
        let mut m = Manifest::new(self.ident("product line name")?);
        self.punct(Tok::LBrace)?;
        let mut seen_core = false;
        let mut variants = BTreeSet::new();
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(m);
            }
            let loc = self.loc();
            if self.eat_keyword("core") {
                if seen_core {
                    return Err(ParseError::new(loc, "`core` section given twice"));
                }
                seen_core = true;
                m.core_files = self.path_list("file")?;
            } else if self.eat_keyword("deltas") {
                m.delta_files.extend(self.path_list("delta")?);
            } else if self.eat_keyword("variant") {
                let loc = self.loc();
                let name = self.ident("variant name")?;
                if name == "core" {
                    return Err(ParseError::new(loc, "`core` is reserved for the core variant"));
                }
                if !variants.insert(name.clone()) {
                    return Err(ParseError::new(loc, format!("duplicate variant `{name}`")));
                }
                self.punct(Tok::LBrace)?;
                let mut deltas = Vec::new();
                if self.eat_keyword("apply") {
                    deltas.push(self.ident("delta name")?);
                    while self.eat(Tok::Comma) {
                        deltas.push(self.ident("delta name")?);
                    }
                    self.punct(Tok::Semi)?;
                }
                self.punct(Tok::RBrace)?;
                m.variants.push(VariantDecl { name, deltas });
            } else {
                return Err(self.unexpected(&["core", "deltas", "variant", "`}`"]));
            }
        }
    }

    /// `{ kw "path"; ... }`
    fn path_list(&mut self, kw: &str) -> Result<Vec<String>> {
        self.punct(Tok::LBrace)?;
        let mut paths = Vec::new();
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(paths);
            }
            if !self.eat_keyword(kw) {
                return Err(self.unexpected(&[kw, "`}`"]));
            }
            paths.push(self.string()?);
            self.punct(Tok::Semi)?;
        }
    }
}

/// Gives unlabeled transitions the next free `t{k}` id, in document order.
fn assign_ids<T>(
    pending: Vec<(Option<String>, T)>,
    labels: &BTreeSet<String>,
    set: impl Fn(&mut T, String),
) -> Vec<T> {
    let mut k = 0usize;
    pending
        .into_iter()
        .map(|(label, mut t)| {
            let id = label.unwrap_or_else(|| loop {
                k += 1;
                let candidate = format!("t{k}");
                if !labels.contains(&candidate) {
                    break candidate;
                }
            });
            set(&mut t, id);
            t
        })
        .collect()
}

fn run<T>(file: &str, text: &str, body: impl FnOnce(&mut Parser<'_>) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(file, text)?;
    let value = body(&mut p)?;
    p.end()?;
    Ok(value)
}

/// Parses a workflow, architecture, state chart or mapping document.
pub fn parse_model(file: &str, text: &str) -> Result<Model> {
    run(file, text, |p| p.model())
}

pub fn parse_delta(file: &str, text: &str) -> Result<Delta> {
    run(file, text, |p| {
        p.keyword("delta")?;
        p.delta()
    })
}

pub fn parse_manifest(file: &str, text: &str) -> Result<Manifest> {
    run(file, text, |p| {
        p.keyword("productline")?;
        p.manifest()
    })
}

/// Parses any document, deciding its kind from the leading keyword.
pub fn parse_document(file: &str, text: &str) -> Result<Document> {
    run(file, text, |p| {
        if p.eat_keyword("delta") {
            p.delta().map(Document::Delta)
        } else if p.eat_keyword("productline") {
            p.manifest().map(Document::Manifest)
        } else if MODEL_KEYWORDS.iter().any(|k| p.at_keyword(k)) {
            p.model().map(Document::Model)
        } else {
            let mut expected = vec![];
            expected.extend(MODEL_KEYWORDS);
            expected.extend(["delta", "productline"]);
            Err(p.unexpected(&expected))
        }
    })
}
