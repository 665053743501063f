// SPDX-License-Identifier: MIT OR Apache-2.0

//! Nested bands by splitting each envelope's own samples again.

use std::collections::VecDeque;

use crate::envelope::{check_non_crossing, extract_envelopes, EnvelopeSplit, InterpMode};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::SampleSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForkNode<S> {
    /// Branches taken from the root; empty for the root itself.
    pub path: Vec<Branch>,
    /// Samples of this node, on the root's time axis.
    pub series: SampleSeries<S>,
    /// `None` for leaves.
    pub split: Option<EnvelopeSplit<S>>,
}

impl<S> ForkNode<S> {
    pub fn level(&self) -> usize {
        self.path.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForkTree<S> {
    /// Breadth-first; `nodes[0]` is the root.
    pub nodes: Vec<ForkNode<S>>,
    pub depth: usize,
    pub mode: InterpMode,
}

impl<S: Scalar> ForkTree<S> {
    pub fn root(&self) -> &ForkNode<S> {
        &self.nodes[0]
    }

    pub fn node(&self, path: &[Branch]) -> Option<&ForkNode<S>> {
        self.nodes.iter().find(|n| n.path == path)
    }

    pub fn splits(&self) -> impl Iterator<Item = &ForkNode<S>> {
        self.nodes.iter().filter(|n| !n.is_leaf())
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ForkNode<S>> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    /// Every split's envelopes are non-crossing and every child holds a
    /// subset of its parent's samples at the same timestamps.
    pub fn is_consistent(&self) -> bool {
        self.nodes.iter().all(|n| {
            let envelopes_ok = n
                .split
                .as_ref()
                .is_none_or(|s| check_non_crossing(&s.envelopes));
            let subset_ok = match n.path.split_last() {
                None => true,
                Some((_, parent_path)) => self.node(parent_path).is_some_and(|p| {
                    let pt = p.series.timestamps();
                    n.series
                        .timestamps()
                        .iter()
                        .zip(n.series.values())
                        .all(|(t, v)| {
                            pt.iter()
                                .position(|u| u == t)
                                .is_some_and(|i| p.series.values()[i] == *v)
                        })
                }),
            };
            envelopes_ok && subset_ok
        })
    }
}

/// Applies the splitter to the root and then to each envelope's samples, `depth` levels deep.
///
/// Nodes with fewer than two samples, or at the last level, are leaves.
pub fn hierarchical_fork<S: Scalar>(
    series: &SampleSeries<S>,
    depth: usize,
    mode: InterpMode,
) -> Result<ForkTree<S>> {
    if depth == 0 {
        return Err(Error::InvalidParameter(
            "fork depth must be at least 1".into(),
        ));
    }
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let root = series.subsequence(&(0..series.len()).collect::<Vec<_>>());
    let mut queue = VecDeque::from([(Vec::new(), root)]);
    let mut nodes = Vec::new();
    while let Some((path, node_series)) = queue.pop_front() {
        let split = if path.len() < depth && node_series.len() >= 2 {
            Some(extract_envelopes(&node_series, mode)?)
        } else {
            None
        };
        if let Some(s) = &split {
            let upper = s.labels.positions(s.envelopes.upper_label);
            let lower = s.labels.positions(!s.envelopes.upper_label);
            for (branch, positions) in [(Branch::Upper, upper), (Branch::Lower, lower)] {
                if positions.is_empty() {
                    continue;
                }
                let mut child_path = path.clone();
                child_path.push(branch);
                queue.push_back((child_path, node_series.subsequence(&positions)));
            }
        }
        nodes.push(ForkNode {
            path,
            series: node_series,
            split,
        });
    }
    Ok(ForkTree { nodes, depth, mode })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> SampleSeries<f64> {
        SampleSeries::from_f64(values).unwrap()
    }

    #[test]
    fn depth_one_is_a_single_split() {
        let s = series(&[0.0, 2.0, 1.0]);
        let tree = hierarchical_fork(&s, 1, InterpMode::Linear).unwrap();
        assert_eq!(tree.splits().count(), 1);
        assert_eq!(tree.nodes.len(), 3);
        let direct = extract_envelopes(&s.subsequence(&[0, 1, 2]), InterpMode::Linear).unwrap();
        assert_eq!(
            tree.root().split.as_ref().unwrap().envelopes,
            direct.envelopes
        );
    }

    #[test]
    fn depth_two_three_samples() {
        let s = series(&[0.0, 2.0, 1.0]);
        let tree = hierarchical_fork(&s, 2, InterpMode::Linear).unwrap();
        let upper = tree.node(&[Branch::Upper]).unwrap();
        assert_eq!(upper.series.values(), &[2.0]);
        assert!(upper.is_leaf());
        let lower = tree.node(&[Branch::Lower]).unwrap();
        assert_eq!(lower.series.values(), &[0.0, 1.0]);
        assert_eq!(lower.series.timestamps(), vec![1.0, 3.0]);
        let split = lower.split.as_ref().unwrap();
        assert_eq!(split.total_drift, 0.0);
        assert_eq!(
            tree.node(&[Branch::Lower, Branch::Upper])
                .unwrap()
                .series
                .values(),
            &[1.0]
        );
        assert_eq!(
            tree.node(&[Branch::Lower, Branch::Lower])
                .unwrap()
                .series
                .values(),
            &[0.0]
        );
        assert_eq!(tree.splits().count(), 2);
        assert!(tree.is_consistent());
    }

    #[test]
    fn leaves_terminate() {
        let s = series(&[0.3, 0.9, 0.1, 0.5, 0.7, 0.2, 0.8, 0.4]);
        let tree = hierarchical_fork(&s, 10, InterpMode::Hold).unwrap();
        assert!(tree.leaves().all(|n| n.series.len() < 2));
        let total: usize = tree.leaves().map(|n| n.series.len()).sum();
        assert_eq!(total, s.len());
        assert!(tree.is_consistent());
    }

    #[test]
    fn zero_depth_is_rejected() {
        assert!(hierarchical_fork(&series(&[1.0]), 0, InterpMode::Linear).is_err());
    }
}
