// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::error::{Error, Result};
use crate::series::LabelSequence;

/// Minimizing predecessor `τ_t` recorded for every switch index `t = 1..T−1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BackPointerTable {
    pointers: Vec<usize>,
}

impl BackPointerTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            pointers: Vec::with_capacity(cap),
        }
    }

    /// Builds from `[τ_1, τ_2, ...]`.
    pub fn from_pointers(pointers: Vec<usize>) -> Self {
        Self { pointers }
    }

    pub(crate) fn push(&mut self, tau: usize) {
        self.pointers.push(tau);
    }

    /// `τ_t` for one-based `t`.
    pub fn get(&self, t: usize) -> Option<usize> {
        t.checked_sub(1).and_then(|i| self.pointers.get(i).copied())
    }

    pub fn len(&self) -> usize {
        self.pointers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pointers.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.pointers
    }

    /// Every pointer is strictly below its own index.
    pub fn is_well_formed(&self) -> bool {
        self.pointers.iter().enumerate().all(|(i, &p)| p < i + 1)
    }

    /// The hop sequence `τ*, τ_{τ*}, ..., 0`.
    pub fn chain(&self, tau_star: usize) -> Result<Vec<usize>> {
        let mut chain = vec![tau_star];
        let mut tau = tau_star;
        while tau != 0 {
            let next = self.get(tau).ok_or_else(|| {
                Error::Invariant(format!("back-pointer for switch {tau} is missing"))
            })?;
            if next >= tau {
                return Err(Error::Invariant(format!(
                    "back-pointer {next} at switch {tau} does not decrease"
                )));
            }
            chain.push(next);
            tau = next;
        }
        Ok(chain)
    }
}

/// Reconstructs the labeling whose most recent switch is `tau_star`.
///
/// Samples after `tau_star` get label 1, the block before it label 0, and so
/// on alternating back to the start, so the final block always carries label 1.
pub fn backtrack_labels(
    pointers: &BackPointerTable,
    tau_star: usize,
    len: usize,
) -> Result<LabelSequence> {
    if len == 0 || tau_star >= len {
        return Err(Error::Invariant(format!(
            "final switch {tau_star} outside series of length {len}"
        )));
    }
    let chain = pointers.chain(tau_star)?;
    Ok(labels_from_chain(&chain, len))
}

pub(crate) fn labels_from_chain(chain: &[usize], len: usize) -> LabelSequence {
    let mut labels = vec![false; len];
    let mut end = len;
    let mut current = true;
    for &tau in chain {
        // one-based (tau, end] is zero-based tau..end
        labels[tau..end].fill(current);
        end = tau;
        current = !current;
    }
    LabelSequence::new(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_hops() {
        let p = BackPointerTable::from_pointers(vec![0, 1]);
        assert_eq!(backtrack_labels(&p, 2, 3).unwrap().bits(), vec![1, 0, 1]);
        assert_eq!(p.chain(2).unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn no_switch() {
        let p = BackPointerTable::from_pointers(vec![0, 1]);
        assert_eq!(backtrack_labels(&p, 0, 3).unwrap().bits(), vec![1, 1, 1]);
    }

    #[test]
    fn one_hop_then_base() {
        let p = BackPointerTable::from_pointers(vec![0, 0, 2]);
        assert_eq!(backtrack_labels(&p, 2, 4).unwrap().bits(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn rejects_non_decreasing_pointer() {
        let p = BackPointerTable::from_pointers(vec![0, 2]);
        assert!(!p.is_well_formed());
        assert!(matches!(
            backtrack_labels(&p, 2, 3),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn rejects_out_of_range() {
        let p = BackPointerTable::from_pointers(vec![0]);
        assert!(matches!(
            backtrack_labels(&p, 2, 3),
            Err(Error::Invariant(_))
        ));
        assert!(matches!(
            backtrack_labels(&p, 3, 3),
            Err(Error::Invariant(_))
        ));
    }
}
