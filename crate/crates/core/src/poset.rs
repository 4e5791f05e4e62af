//! Finite posets with an involution: a partial order plus a partition of the
//! elements into classes of size one or two.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relations contain a cycle through {0:?}")]
    Cycle(String),
    #[error("class {0:?} has {1} elements; classes must have one or two")]
    ClassSize(Vec<String>, usize),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("element {0:?} appears in more than one class")]
    DuplicatePartition(String),
    #[error("element {0:?} is not covered by any class")]
    Uncovered(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("the family index must be at least 1")]
    ZeroFamilyIndex,
}

/// A poset with an involution.
///
/// Classes are ordered tuples: slot 0 and slot 1 fix how vectors of
/// `V₀^z` are stacked everywhere downstream.
#[derive(Clone, PartialEq, Eq)]
pub struct PosetInv {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    classes: Vec<Vec<usize>>,
    /// element -> (class, slot)
    slot_of: Vec<(usize, usize)>,
}

impl fmt::Debug for PosetInv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PosetInv")
            .field("elements", &self.elements)
            .field("relations", &self.cover_pairs())
            .field("classes", &self.class_labels())
            .finish()
    }
}

impl PosetInv {
    /// Builds the poset from a generating set of strict relations `x < y`.
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        relations: &[(S, S)],
        classes: &[Vec<S>],
    ) -> Result<Self, PosetError> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(PosetError::DuplicateLabel(e.clone()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| PosetError::UnknownLabel(s.to_string()));

        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in relations {
            let (x, y) = (lookup(x.as_ref())?, lookup(y.as_ref())?);
            if x == y {
                return Err(PosetError::Cycle(elements[x].clone()));
            }
            leq[x][y] = true;
        }
        transitive_closure(&mut leq);
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(PosetError::Cycle(elements[i].clone()));
                }
            }
        }

        let mut slot_of = vec![None; n];
        let mut class_idx = Vec::with_capacity(classes.len());
        for (ci, class) in classes.iter().enumerate() {
            let labels: Vec<String> = class.iter().map(|s| s.as_ref().to_string()).collect();
            if labels.is_empty() || labels.len() > 2 {
                return Err(PosetError::ClassSize(labels.clone(), labels.len()));
            }
            let mut members = Vec::with_capacity(labels.len());
            for (slot, l) in labels.iter().enumerate() {
                let e = lookup(l)?;
                if slot_of[e].is_some() {
                    return Err(PosetError::DuplicatePartition(l.clone()));
                }
                slot_of[e] = Some((ci, slot));
                members.push(e);
            }
            class_idx.push(members);
        }
        let slot_of = slot_of
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| PosetError::Uncovered(elements[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(PosetInv { elements, index, leq, classes: class_idx, slot_of })
    }

    /// The chain `a_n < … < a_1 < b_1 < … < b_n` with classes `(a_i, b_i)`,
    /// class `i - 1` holding `(a_i, b_i)`.
    pub fn make_un(n: usize) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::ZeroFamilyIndex);
        }
        let mut elements: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        elements.extend((1..=n).map(|i| format!("b{i}")));
        let mut chain: Vec<String> = (1..=n).rev().map(|i| format!("a{i}")).collect();
        chain.extend((1..=n).map(|i| format!("b{i}")));
        let relations: Vec<(String, String)> = chain.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        let classes: Vec<Vec<String>> = (1..=n).map(|i| vec![format!("a{i}"), format!("b{i}")]).collect();
        Self::build(&elements, &relations, &classes)
    }

    /// Same elements and classes, order reversed.
    pub fn opposite(&self) -> Self {
        let n = self.len();
        let leq = (0..n).map(|i| (0..n).map(|j| self.leq[j][i]).collect()).collect();
        PosetInv { leq, ..self.clone() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, e: usize) -> &str {
        &self.elements[e]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Element indices of class `z`, in slot order.
    pub fn class(&self, z: usize) -> &[usize] {
        &self.classes[z]
    }

    pub fn class_size(&self, z: usize) -> usize {
        self.classes[z].len()
    }

    pub fn class_labels(&self) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|&e| self.elements[e].clone()).collect())
            .collect()
    }

    /// `(class, slot)` of an element.
    pub fn slot_of(&self, e: usize) -> (usize, usize) {
        self.slot_of[e]
    }

    /// All strict comparabilities `x < y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Covering relations of the Hasse diagram, by label.
    pub fn cover_pairs(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for (x, y) in self.strict_pairs() {
            if !(0..n).any(|m| self.lt(x, m) && self.lt(m, y)) {
                out.push((self.elements[x].clone(), self.elements[y].clone()));
            }
        }
        out
    }

    /// If this is a copy of `𝔘_n` (a chain whose classes pair the i-th
    /// smallest with the i-th largest element), returns `n` together with,
    /// for each family index `i = 1..=n`, the class index and whether the
    /// class tuple lists `b_i` before `a_i`.
    pub fn as_un(&self) -> Option<UnShape> {
        let n2 = self.len();
        if n2 == 0 || n2 % 2 == 1 || self.num_classes() * 2 != n2 {
            return None;
        }
        let mut chain: Vec<usize> = (0..n2).collect();
        chain.sort_by_key(|&e| (0..n2).filter(|&x| self.lt(x, e)).count());
        if chain.windows(2).any(|w| !self.lt(w[0], w[1])) {
            return None;
        }
        let n = n2 / 2;
        let mut classes = Vec::with_capacity(n);
        for i in 1..=n {
            let a = chain[n - i];
            let b = chain[n - 1 + i];
            let (za, sa) = self.slot_of(a);
            let (zb, _) = self.slot_of(b);
            if za != zb {
                return None;
            }
            classes.push((za, sa == 1));
        }
        Some(UnShape { n, classes })
    }
}

/// How a poset matches `𝔘_n`: `classes[i - 1] = (class index, slots swapped)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnShape {
    pub n: usize,
    pub classes: Vec<(usize, bool)>,
}

impl UnShape {
    /// True when the poset is literally [`PosetInv::make_un`]'s class layout.
    pub fn is_canonical(&self) -> bool {
        self.classes.iter().enumerate().all(|(i, &(z, swapped))| z == i && !swapped)
    }
}

/// Warshall closure in place.
pub fn transitive_closure(leq: &mut [Vec<bool>]) {
    let n = leq.len();
    for k in 0..n {
        for i in 0..n {
            if !leq[i][k] {
                continue;
            }
            for j in 0..n {
                if leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> PosetInv {
        PosetInv::build(
            &["a", "a*", "b", "c"],
            &[("a", "b"), ("c", "b"), ("c", "a*")],
            &[vec!["a", "a*"], vec!["b"], vec!["c"]],
        )
        .unwrap()
    }

    #[test]
    fn figure_one_poset() {
        let p = fig1();
        assert_eq!(p.len(), 4);
        assert_eq!(p.num_classes(), 3);
        let i = |l| p.index_of(l).unwrap();
        assert!(p.lt(i("c"), i("a*")));
        assert!(!p.leq(i("a"), i("c")));
        let op = p.opposite();
        assert!(op.lt(i("b"), i("a")) && op.lt(i("b"), i("c")) && op.lt(i("a*"), i("c")));
        assert_eq!(op.opposite(), p);
    }

    #[test]
    fn antichain_is_self_opposite() {
        let p = PosetInv::build(&["x", "y"], &[], &[vec!["x"], vec!["y"]]).unwrap();
        assert!(p.strict_pairs().is_empty());
        assert_eq!(p.opposite(), p);
    }

    #[test]
    fn construction_errors() {
        let two = vec![vec!["a"], vec!["b"]];
        assert!(matches!(PosetInv::build(&["a", "b"], &[("a", "b"), ("b", "a")], &two), Err(PosetError::Cycle(_))));
        assert!(matches!(
            PosetInv::build(&["a", "b", "c"], &[], &[vec!["a", "b", "c"]]),
            Err(PosetError::ClassSize(_, 3))
        ));
        assert!(matches!(PosetInv::build(&["a", "b"], &[("a", "q")], &two), Err(PosetError::UnknownLabel(_))));
        assert!(matches!(
            PosetInv::build(&["a", "b"], &[], &[vec!["a", "b"], vec!["b"]]),
            Err(PosetError::DuplicatePartition(_))
        ));
        assert!(matches!(PosetInv::build(&["a", "b"], &[], &[vec!["a"]]), Err(PosetError::Uncovered(_))));
        assert!(matches!(PosetInv::make_un(0), Err(PosetError::ZeroFamilyIndex)));
    }

    #[test]
    fn un_family() {
        let u1 = PosetInv::make_un(1).unwrap();
        assert_eq!(u1.class_labels(), vec![vec!["a1".to_string(), "b1".to_string()]]);
        assert!(u1.lt(0, 1));
        let u2 = PosetInv::make_un(2).unwrap();
        let i = |l| u2.index_of(l).unwrap();
        assert!(u2.lt(i("a2"), i("a1")) && u2.lt(i("a1"), i("b1")) && u2.lt(i("b1"), i("b2")));
        let u3 = PosetInv::make_un(3).unwrap();
        let i3 = |l| u3.index_of(l).unwrap();
        assert!(u3.lt(i3("a3"), i3("b2")));
        assert!(!u3.lt(i3("b1"), i3("a1")));
        assert_eq!(u3.as_un().unwrap(), UnShape { n: 3, classes: vec![(0, false), (1, false), (2, false)] });
        assert!(fig1().as_un().is_none());
    }

    #[test]
    fn opposite_of_un_is_un_with_slots_swapped() {
        for n in 1..6 {
            let op = PosetInv::make_un(n).unwrap().opposite();
            let shape = op.as_un().unwrap();
            assert_eq!(shape.n, n);
            assert!(shape.classes.iter().enumerate().all(|(i, &(z, sw))| z == i && sw));
        }
    }

    // Brute-force oracle: y reachable from x by a path in the relation graph.
    fn reachable(n: usize, edges: &[(usize, usize)], x: usize, y: usize) -> bool {
        let mut seen = vec![false; n];
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            if v == y {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(edges.iter().filter(|e| e.0 == v).map(|e| e.1));
        }
        false
    }

    proptest! {
        #[test]
        fn closure_matches_reachability(n in 1usize..9, raw in proptest::collection::vec((0usize..8, 0usize..8), 0..16)) {
            // Orient edges low -> high so the input is acyclic.
            let edges: Vec<(usize, usize)> = raw
                .into_iter()
                .map(|(a, b)| (a % n, b % n))
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let rels: Vec<(String, String)> = edges.iter().map(|&(a, b)| (labels[a].clone(), labels[b].clone())).collect();
            let classes: Vec<Vec<String>> = labels.chunks(2).map(|c| c.to_vec()).collect();
            let p = PosetInv::build(&labels, &rels, &classes).unwrap();
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(p.leq(x, y), reachable(n, &edges, x, y));
                }
            }
            prop_assert_eq!(p.opposite().opposite(), p);
        }
    }
}
