use core::fmt;
use core::str::FromStr;

use crate::model::Perspective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// One perspective model in isolation.
    Intra,
    /// Across perspectives of one variant (the mapping).
    Inter,
    /// Applicability of deltas across variants.
    CrossVariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub const fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Static description of one consistency rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub level: Level,
    pub perspective: Perspective,
    pub severity: Severity,
    /// Whether evaluation can be restricted to a set of element ids.
    pub scopable: bool,
    pub description: &'static str,
}

macro_rules! rules {
    ($( $id:ident, $persp:ident, $sev:ident, $scopable:literal, $desc:literal; )*) => {
        /// Identifier of a catalog rule. Ordering follows the catalog.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum RuleId { $($id,)* }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$id,)*];

            pub const fn as_str(self) -> &'static str {
                match self { $(RuleId::$id => stringify!($id),)* }
            }

            pub const fn rule(self) -> Rule {
                match self {
                    $(RuleId::$id => Rule {
                        id: RuleId::$id,
                        level: level_of(Perspective::$persp),
                        perspective: Perspective::$persp,
                        severity: Severity::$sev,
                        scopable: $scopable,
                        description: $desc,
                    },)*
                }
            }
        }

        impl FromStr for RuleId {
            type Err = UnknownRule;
            fn from_str(s: &str) -> Result<Self, UnknownRule> {
                match s {
                    $(stringify!($id) => Ok(RuleId::$id),)*
                    _ => Err(UnknownRule),
                }
            }
        }
    };
}

const fn level_of(p: Perspective) -> Level {
    match p {
        Perspective::Workflow | Perspective::Architecture | Perspective::Behavior => Level::Intra,
        Perspective::Mapping => Level::Inter,
    }
}

// D rules carry the perspective of the model whose existence they check;
// their level is fixed up in `RuleId::level`.
rules! {
    W01, Workflow, Error, false, "at least one initial node";
    W02, Workflow, Error, false, "at least one final node";
    W03, Workflow, Error, true, "initial nodes have no incoming transitions";
    W04, Workflow, Error, true, "final nodes have no outgoing transitions";
    W05, Workflow, Error, true, "every task has at least one incoming transition";
    W06, Workflow, Error, true, "every task has at least one outgoing transition";
    W07, Workflow, Error, true, "a decision has exactly one incoming transition";
    W08, Workflow, Error, true, "a decision has at least two outgoing transitions";
    W09, Workflow, Error, true, "a merge has at least two incoming transitions";
    W10, Workflow, Error, true, "a merge has exactly one outgoing transition";
    W11, Workflow, Error, true, "a fork has exactly one incoming transition";
    W12, Workflow, Error, true, "a fork has at least two outgoing transitions";
    W13, Workflow, Error, true, "a join has at least two incoming transitions";
    W14, Workflow, Error, true, "a join has exactly one outgoing transition";
    W15, Workflow, Error, false, "every node is reachable from an initial node";
    W16, Workflow, Error, false, "every node reaches a final node";
    W17, Workflow, Error, true, "transition endpoints resolve to declared nodes";
    W18, Workflow, Error, true, "node ids are unique";
    W19, Workflow, Error, true, "every decision out-transition has a guard or a probability";
    W20, Workflow, Error, true, "probabilities on a decision's out-transitions sum to 1";
    W21, Workflow, Error, true, "every probability lies in [0, 1]";
    W22, Workflow, Error, true, "task arrival and service rates are positive and finite";

    A01, Architecture, Error, true, "component names are unique";
    A02, Architecture, Error, true, "port names are unique within a component";
    A03, Architecture, Error, false, "every port is attached to a connector or an external signal";
    A04, Architecture, Error, true, "connector and external signal endpoints resolve to declared ports";
    A05, Architecture, Error, true, "connectors run from an out port to an in port";
    A06, Architecture, Error, true, "signal names are unique";
    A07, Architecture, Error, true, "every connector carries a declared signal";
    A08, Architecture, Warning, false, "every declared signal is carried by a connector or an external signal";
    A09, Architecture, Error, true, "no connector links a component to itself";
    A10, Architecture, Error, false, "every component has at least one port";
    A11, Architecture, Error, true, "external signals target an in port";

    B01, Behavior, Error, false, "exactly one initial state";
    B02, Behavior, Error, true, "state ids are unique";
    B03, Behavior, Error, false, "every state is reachable from the initial state";
    B04, Behavior, Error, true, "every non-final state has an outgoing transition";
    B05, Behavior, Error, true, "transition endpoints resolve to declared states";
    B06, Behavior, Error, true, "final states have no outgoing transitions";
    B07, Behavior, Error, true, "the initial state has no incoming transitions";
    B08, Behavior, Error, true, "no duplicate transitions";
    B09, Behavior, Error, true, "transitions leaving a state with the same event and guard agree on the target";
    B10, Behavior, Error, false, "at least one non-initial state";
    B11, Behavior, Error, false, "if a final state exists, every state reaches one";

    M01, Mapping, Error, true, "task mappings reference an existing task and component";
    M02, Mapping, Error, true, "behavior mappings reference an existing component and state chart";
    M03, Mapping, Error, false, "a component is described by at most one state chart";
    M04, Mapping, Error, false, "every state chart is mapped to at least one component";
    M05, Mapping, Warning, false, "every component executes a task and every signal is used by an adjacent component's state chart";

    D01, Workflow, Error, false, "a delta's target workflow exists";
    D02, Architecture, Error, false, "a delta's target architecture exists";
    D03, Behavior, Error, false, "a delta's target state chart exists";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownRule;

impl fmt::Display for UnknownRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown rule id")
    }
}

/// Rule family: the perspective a rule is evaluated against, with delta rules apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleGroup {
    Workflow,
    Architecture,
    Behavior,
    Mapping,
    Delta,
}

impl RuleId {
    pub fn level(self) -> Level {
        if self.is_delta_rule() {
            Level::CrossVariant
        } else {
            self.rule().level
        }
    }

    pub fn group(self) -> RuleGroup {
        if self.is_delta_rule() {
            return RuleGroup::Delta;
        }
        match self.rule().perspective {
            Perspective::Workflow => RuleGroup::Workflow,
            Perspective::Architecture => RuleGroup::Architecture,
            Perspective::Behavior => RuleGroup::Behavior,
            Perspective::Mapping => RuleGroup::Mapping,
        }
    }

    pub fn is_delta_rule(self) -> bool {
        matches!(self, RuleId::D01 | RuleId::D02 | RuleId::D03)
    }

    pub fn severity(self) -> Severity {
        self.rule().severity
    }

    pub fn is_scopable(self) -> bool {
        self.rule().scopable
    }

    /// The existence rule guarding deltas that target `perspective`.
    pub fn delta_rule_for(perspective: Perspective) -> Option<RuleId> {
        match perspective {
            Perspective::Workflow => Some(RuleId::D01),
            Perspective::Architecture => Some(RuleId::D02),
            Perspective::Behavior => Some(RuleId::D03),
            Perspective::Mapping => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rules of one group in catalog order.
pub fn rules_for(group: RuleGroup) -> &'static [RuleId] {
    let all = RuleId::ALL;
    let (start, len) = match group {
        RuleGroup::Workflow => (0, 22),
        RuleGroup::Architecture => (22, 11),
        RuleGroup::Behavior => (33, 11),
        RuleGroup::Mapping => (44, 5),
        RuleGroup::Delta => (49, 3),
    };
    &all[start..start + len]
}

/// Level-1 or level-2 rules evaluated against a model of `perspective`.
pub fn rules_for_perspective(perspective: Perspective) -> &'static [RuleId] {
    rules_for(match perspective {
        Perspective::Workflow => RuleGroup::Workflow,
        Perspective::Architecture => RuleGroup::Architecture,
        Perspective::Behavior => RuleGroup::Behavior,
        Perspective::Mapping => RuleGroup::Mapping,
    })
}
