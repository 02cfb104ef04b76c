use alloc::collections::{BTreeMap, BTreeSet};

use super::catalog::{rules_for_perspective, RuleId};
use crate::delta::{Action, ElementKind, OperationKind};
use crate::model::Perspective;

/// Maps every supported operation kind to the rules whose findings it can change.
///
/// Soundness is what the incremental strategies rely on: if applying an
/// operation of kind `k` can alter the findings of rule `r` on any model,
/// `r` must be listed under `k`. Mapping rules appear under perspective
/// operations because the mapping refers to tasks, components, charts and
/// events by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpactTable {
    entries: BTreeMap<OperationKind, BTreeSet<RuleId>>,
}

const NODE_COMMON: &[RuleId] = &[RuleId::W15, RuleId::W16, RuleId::W17, RuleId::W18];
const WF_TRANSITION: &[RuleId] = {
    use RuleId::*;
    &[
        W03, W04, W05, W06, W07, W08, W09, W10, W11, W12, W13, W14, W15, W16, W17, W19, W20, W21,
    ]
};

fn entry(kind: ElementKind, action: Action) -> &'static [&'static [RuleId]] {
    use ElementKind as K;
    use RuleId::*;
    match (kind, action) {
        (K::Task, Action::Modify) => &[&[W22]],
        (K::Task, _) => &[&[W05, W06, W22, M01], NODE_COMMON],
        (K::Decision, _) => &[&[W07, W08, W19, W20], NODE_COMMON],
        (K::Merge, _) => &[&[W09, W10], NODE_COMMON],
        (K::Fork, _) => &[&[W11, W12], NODE_COMMON],
        (K::Join, _) => &[&[W13, W14], NODE_COMMON],
        (K::InitialNode, _) => &[&[W01, W03], NODE_COMMON],
        (K::FinalNode, _) => &[&[W02, W04], NODE_COMMON],
        (K::WfTransition, _) => &[WF_TRANSITION],
        (K::PerformanceValues, _) => &[&[W20, W21, W22]],

        (K::Component, Action::Modify) => &[&[A02, A03, A04, A05, A10, A11]],
        (K::Component, _) => &[&[A01, A02, A03, A04, A05, A10, A11, M01, M02, M05]],
        (K::Port, _) => &[&[A02, A03, A04, A05, A10, A11]],
        (K::Connection, _) => &[&[A03, A04, A05, A07, A08, A09, A11, M05]],
        (K::Signal, _) => &[&[A06, A07, A08, M05]],

        (K::State, Action::Modify) => &[&[B01, B03, B04, B06, B07, B10, B11]],
        (K::State, _) => &[&[B02, B03, B04, B05, B10, B11]],
        (K::ScInitial, _) => &[&[B01, B02, B03, B04, B05, B07, B11]],
        (K::ScFinal, _) => &[&[B02, B03, B05, B06, B10, B11]],
        (K::ScTransition, _) => &[&[B03, B04, B05, B06, B07, B08, B09, B11, M05]],

        (K::TaskMap, _) => &[&[M01, M05]],
        (K::BehaviorMap, _) => &[&[M02, M03, M04, M05]],
    }
}

impl ImpactTable {
    pub fn standard() -> Self {
        let entries = OperationKind::all()
            .map(|kind| {
                let rules = entry(kind.target(), kind.action())
                    .iter()
                    .flat_map(|part| part.iter().copied())
                    .collect();
                (kind, rules)
            })
            .collect();
        ImpactTable { entries }
    }

    pub fn rules_for(&self, kind: OperationKind) -> &BTreeSet<RuleId> {
        &self.entries[&kind]
    }

    /// Replaces the entry of one operation kind. Intended for experiments and
    /// for exercising the strategy cross-check; an unsound entry makes the
    /// incremental strategies miss findings.
    pub fn set(&mut self, kind: OperationKind, rules: BTreeSet<RuleId>) {
        self.entries.insert(kind, rules);
    }

    pub fn iter(&self) -> impl Iterator<Item = (OperationKind, &BTreeSet<RuleId>)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Union of the entries of `ops`.
    pub fn impacted<I: IntoIterator<Item = OperationKind>>(&self, ops: I) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        for op in ops {
            out.extend(self.rules_for(op).iter().copied());
        }
        out
    }

    /// Rules affected when a whole model of `perspective` appears.
    pub fn creation(&self, perspective: Perspective) -> BTreeSet<RuleId> {
        use RuleId::*;
        let mut rules: BTreeSet<RuleId> = rules_for_perspective(perspective).iter().copied().collect();
        let mapping: &[RuleId] = match perspective {
            Perspective::Workflow => &[M01],
            Perspective::Architecture => &[M01, M02, M05],
            Perspective::Behavior => &[M02, M04, M05],
            Perspective::Mapping => &[],
        };
        rules.extend(mapping.iter().copied());
        rules
    }
}

impl Default for ImpactTable {
    fn default() -> Self {
        Self::standard()
    }
}

/// [`ImpactTable::impacted`] on the standard table.
pub fn impacted_rules<I: IntoIterator<Item = OperationKind>>(ops: I) -> BTreeSet<RuleId> {
    ImpactTable::standard().impacted(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn op(action: Action, target: ElementKind) -> OperationKind {
        OperationKind::new(action, target).unwrap()
    }

    #[test]
    fn table_is_total() {
        let t = ImpactTable::standard();
        assert_eq!(t.iter().count(), OperationKind::all().count());
        for (kind, rules) in t.iter() {
            assert!(!rules.is_empty(), "{kind}");
            assert!(rules.iter().all(|r| !r.is_delta_rule()));
        }
    }

    #[test]
    fn performance_values_only_touch_value_rules() {
        let rules: Vec<_> = impacted_rules([op(Action::Modify, ElementKind::PerformanceValues)])
            .into_iter()
            .collect();
        assert_eq!(rules, [RuleId::W20, RuleId::W21, RuleId::W22]);
    }

    #[test]
    fn add_task() {
        use RuleId::*;
        let rules: Vec<_> = impacted_rules([op(Action::Add, ElementKind::Task)]).into_iter().collect();
        assert_eq!(rules, [W05, W06, W15, W16, W17, W18, W22, M01]);
    }

    #[test]
    fn empty_ops_impact_nothing() {
        assert!(impacted_rules([]).is_empty());
    }

    #[test]
    fn transition_ops_stay_below_full_behavior_catalog() {
        let rules = impacted_rules([
            op(Action::Add, ElementKind::ScTransition),
            op(Action::Modify, ElementKind::ScTransition),
        ]);
        let behavior = rules.iter().filter(|r| r.rule().perspective == Perspective::Behavior).count();
        assert_eq!(behavior, 8);
    }
}
