//! Id/name lookup over the elements of one model.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{
    BehaviorMap, Component, Connector, ExternalSignal, ModelView, Port, ScTransition, Signal,
    State, TaskMap, WorkflowNode, WorkflowTransition,
};

/// A borrowed element of any model kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element<'a> {
    Node(&'a WorkflowNode),
    WfTransition(&'a WorkflowTransition),
    Component(&'a Component),
    Port(&'a Component, &'a Port),
    Signal(&'a Signal),
    Connector(&'a Connector),
    External(&'a ExternalSignal),
    State(&'a State),
    ScTransition(&'a ScTransition),
    TaskMap(&'a TaskMap),
    BehaviorMap(&'a BehaviorMap),
}

/// Maps element ids to every element declared under that id.
///
/// Ports are keyed `component.port`, external signals `signal->component.port`
/// and mapping entries by their arrow form. Duplicated ids keep all
/// occurrences in declaration order.
#[derive(Debug, Default)]
pub struct ElementIndex<'a> {
    by_id: BTreeMap<String, Vec<Element<'a>>>,
}

impl<'a> ElementIndex<'a> {
    pub fn build(model: ModelView<'a>) -> Self {
        let mut index = ElementIndex::default();
        match model {
            ModelView::Workflow(m) => {
                for n in &m.nodes {
                    index.put(n.id.clone(), Element::Node(n));
                }
                for t in &m.transitions {
                    index.put(t.id.clone(), Element::WfTransition(t));
                }
            }
            ModelView::Architecture(m) => {
                for c in &m.components {
                    index.put(c.name.clone(), Element::Component(c));
                    for p in &c.ports {
                        index.put(alloc::format!("{}.{}", c.name, p.name), Element::Port(c, p));
                    }
                }
                for s in &m.signals {
                    index.put(s.name.clone(), Element::Signal(s));
                }
                for k in &m.connectors {
                    index.put(k.id.clone(), Element::Connector(k));
                }
                for e in &m.externals {
                    index.put(e.element_id(), Element::External(e));
                }
            }
            ModelView::StateChart(m) => {
                for s in &m.states {
                    index.put(s.id.clone(), Element::State(s));
                }
                for t in &m.transitions {
                    index.put(t.id.clone(), Element::ScTransition(t));
                }
            }
            ModelView::Mapping(m) => {
                for e in &m.task_maps {
                    index.put(e.element_id(), Element::TaskMap(e));
                }
                for e in &m.behavior_maps {
                    index.put(e.element_id(), Element::BehaviorMap(e));
                }
            }
        }
        index
    }

    fn put(&mut self, id: String, element: Element<'a>) {
        self.by_id.entry(id).or_default().push(element);
    }

    /// First element declared under `id`.
    pub fn get(&self, id: &str) -> Option<Element<'a>> {
        self.by_id.get(id).and_then(|v| v.first().copied())
    }

    pub fn get_all(&self, id: &str) -> &[Element<'a>] {
        self.by_id.get(id).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    /// Number of distinct ids.
    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.by_id.keys().map(String::as_str)
    }
}
