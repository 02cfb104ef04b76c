//! Reachability over name-based edge lists.
//!
//! Edges may mention ids that are not declared anywhere; those ids are
//! ordinary vertices here.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// Least fixed point of forward reachability from `start` (start included).
pub fn reachable<'a, E, S>(edges: E, start: S) -> BTreeSet<&'a str>
where
    E: IntoIterator<Item = (&'a str, &'a str)>,
    S: IntoIterator<Item = &'a str>,
{
    let mut succ: BTreeMap<&'a str, Vec<&'a str>> = BTreeMap::new();
    for (from, to) in edges {
        succ.entry(from).or_default().push(to);
    }
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&'a str> = Vec::new();
    for s in start {
        if seen.insert(s) {
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        if let Some(next) = succ.get(v) {
            for &w in next {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen
}

/// Vertices from which some vertex of `targets` is reachable (targets included).
pub fn co_reachable<'a, E, T>(edges: E, targets: T) -> BTreeSet<&'a str>
where
    E: IntoIterator<Item = (&'a str, &'a str)>,
    T: IntoIterator<Item = &'a str>,
{
    reachable(edges.into_iter().map(|(a, b)| (b, a)), targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set<'a>(items: &[&'a str]) -> BTreeSet<&'a str> {
        items.iter().copied().collect()
    }

    #[test]
    fn reachable_examples() {
        assert_eq!(reachable(vec![], ["a"]), set(&["a"]));
        assert_eq!(reachable(vec![("a", "b"), ("b", "c")], ["a"]), set(&["a", "b", "c"]));
        assert_eq!(reachable(vec![("a", "b"), ("c", "d")], ["a"]), set(&["a", "b"]));
        assert!(reachable(vec![("a", "b")], []).is_empty());
    }

    #[test]
    fn co_reachable_examples() {
        assert_eq!(co_reachable(vec![("a", "b")], ["b"]), set(&["a", "b"]));
        assert!(co_reachable(vec![], []).is_empty());
        assert_eq!(
            co_reachable(vec![("a", "b"), ("b", "c"), ("d", "c")], ["c"]),
            set(&["a", "b", "c", "d"])
        );
    }

    #[test]
    fn cycles_terminate() {
        assert_eq!(
            reachable(vec![("a", "b"), ("b", "a"), ("b", "b")], ["b"]),
            set(&["a", "b"])
        );
    }
}
