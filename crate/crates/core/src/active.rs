// SPDX-License-Identifier: MIT OR Apache-2.0

//! Surviving switch classes, kept sorted by anchor value.
//!
//! A class `τ` stands for the best prefix labeling whose most recent switch
//! happened at sample `τ`; only its normalized loss and the anchor `x_τ`
//! matter for later decisions. The `τ = 0` class (no switch yet) has loss
//! zero, no anchor, and is never removed, so it is not stored here.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassState<S> {
    /// One-based switch index, `1 ≤ τ ≤ T − 1`.
    pub tau: usize,
    /// Normalized loss `M_τ`.
    pub m_value: S,
    /// The sample `x_τ`.
    pub anchor: S,
}

/// Active classes ordered by strictly increasing anchor.
///
/// Every stored anchor lies strictly outside the closed interval spanned by
/// the most recent step, so the classes below the current sample are the
/// running right-to-left minima and the ones above are the running maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveClassSet<S> {
    classes: Vec<ClassState<S>>,
}

impl<S: Scalar> Default for ActiveClassSet<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> ActiveClassSet<S> {
    pub fn new() -> Self {
        Self {
            classes: Vec::new(),
        }
    }

    /// Builds a set from arbitrary classes; later entries win on equal anchors.
    pub fn from_classes(classes: impl IntoIterator<Item = ClassState<S>>) -> Self {
        let mut set = Self::new();
        for c in classes {
            let lo = set.lower_bound(&c.anchor);
            if lo < set.classes.len() && set.classes[lo].anchor == c.anchor {
                set.classes[lo] = c;
            } else {
                set.classes.insert(lo, c);
            }
        }
        set
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Classes in increasing anchor order.
    pub fn iter(&self) -> std::slice::Iter<'_, ClassState<S>> {
        self.classes.iter()
    }

    pub fn anchors(&self) -> Vec<S> {
        self.classes.iter().map(|c| c.anchor.clone()).collect()
    }

    pub fn taus(&self) -> Vec<usize> {
        let mut taus: Vec<usize> = self.classes.iter().map(|c| c.tau).collect();
        taus.sort_unstable();
        taus
    }

    fn lower_bound(&self, value: &S) -> usize {
        self.classes.partition_point(|c| c.anchor < *value)
    }

    fn upper_bound(&self, value: &S) -> usize {
        self.classes.partition_point(|c| c.anchor <= *value)
    }

    /// Removes every class whose anchor lies in `[min(x_t, x_next), max(x_t, x_next)]`.
    ///
    /// The removed classes form one contiguous run of the anchor order; each
    /// is handed to `on_removed` before being dropped.
    pub fn eliminate_by_step<F>(&mut self, x_t: &S, x_next: &S, mut on_removed: F)
    where
        F: FnMut(&ClassState<S>),
    {
        let (lo, hi) = if x_t <= x_next {
            (x_t, x_next)
        } else {
            (x_next, x_t)
        };
        let start = self.lower_bound(lo);
        let end = self.upper_bound(hi);
        if start < end {
            for c in self.classes.drain(start..end) {
                on_removed(&c);
            }
        }
    }

    /// Inserts a class at its anchor position.
    ///
    /// Returns `false` and leaves the set unchanged if the anchor is already present.
    pub fn insert(&mut self, class: ClassState<S>) -> bool {
        let pos = self.lower_bound(&class.anchor);
        if pos < self.classes.len() && self.classes[pos].anchor == class.anchor {
            return false;
        }
        self.classes.insert(pos, class);
        true
    }

    /// Whether anchors are strictly increasing.
    pub fn is_ordered(&self) -> bool {
        self.classes.windows(2).all(|w| w[0].anchor < w[1].anchor)
    }
}

/// Set-level form of [`ActiveClassSet::eliminate_by_step`].
pub fn eliminate_by_step<S: Scalar>(
    mut active: ActiveClassSet<S>,
    x_t: &S,
    x_next: &S,
) -> ActiveClassSet<S> {
    active.eliminate_by_step(x_t, x_next, |_| {});
    active
}
