//! Finite preordered sets and their quotient posets.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};

/// A reflexive, transitive relation `⪯` on labelled elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preorder {
    labels: Vec<String>,
    /// `rel[p*n + q]` is `p ⪯ q`.
    rel: Vec<bool>,
}

fn close(rel: &mut [bool], n: usize) {
    for p in 0..n {
        rel[p * n + p] = true;
    }
    // Squaring until stable: each round doubles the path length covered.
    loop {
        let mut changed = false;
        let snapshot = rel.to_vec();
        for p in 0..n {
            for z in 0..n {
                if !snapshot[p * n + z] {
                    continue;
                }
                for q in 0..n {
                    if snapshot[z * n + q] && !rel[p * n + q] {
                        rel[p * n + q] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

impl Preorder {
    /// Builds a preorder from labels and `(x, y)` pairs meaning `x ⪯ y`.
    ///
    /// With `auto_close` the reflexive-transitive closure is taken; otherwise the pairs must
    /// already form a preorder and the first missing pair is reported.
    pub fn from_pairs<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)], auto_close: bool) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let mut rel = vec![false; n * n];
        for (a, b) in pairs {
            let lookup = |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownLabel(s.as_ref().to_string()));
            let (p, q) = (lookup(a)?, lookup(b)?);
            rel[p * n + q] = true;
        }
        if auto_close {
            close(&mut rel, n);
        }
        Self::from_relation(labels, rel)
    }

    /// Validates an explicit relation matrix.
    pub fn from_relation(labels: Vec<String>, rel: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        assert_eq!(rel.len(), n * n, "relation matrix must be n×n");
        for p in 0..n {
            if !rel[p * n + p] {
                return Err(Error::NotReflexive(labels[p].clone()));
            }
        }
        for p in 0..n {
            for z in 0..n {
                if !rel[p * n + z] {
                    continue;
                }
                for q in 0..n {
                    if rel[z * n + q] && !rel[p * n + q] {
                        return Err(Error::NotTransitive(labels[p].clone(), labels[z].clone(), labels[q].clone()));
                    }
                }
            }
        }
        Ok(Self { labels, rel })
    }

    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let pairs: Vec<(String, String)> = (1..n).map(|i| (labels[i - 1].clone(), labels[i].clone())).collect();
        Self::from_pairs(&labels, &pairs, true).expect("chain is well formed")
    }

    pub fn antichain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Self::from_pairs::<String>(&labels, &[], true).expect("antichain is well formed")
    }

    /// `n` mutually equivalent elements: one class of size `n`.
    pub fn cycle(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let pairs: Vec<(String, String)> = (0..n).map(|i| (labels[i].clone(), labels[(i + 1) % n].clone())).collect();
        Self::from_pairs(&labels, &pairs, true).expect("cycle is well formed")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn le(&self, p: usize, q: usize) -> bool {
        self.rel[p * self.len() + q]
    }

    pub fn equivalent(&self, p: usize, q: usize) -> bool {
        self.le(p, q) && self.le(q, p)
    }

    pub fn comparable(&self, p: usize, q: usize) -> bool {
        self.le(p, q) || self.le(q, p)
    }

    /// All pairs `(p, q)` with `p ⪯ q`.
    pub fn relation_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |p| (0..n).filter(move |&q| self.le(p, q)).map(move |q| (p, q)))
    }

    /// Elements comparable with no other element.
    pub fn isolated_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| y == x || !self.comparable(x, y))).collect()
    }

    /// Applies a permutation: element `p` becomes `perm[p]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut labels = vec![String::new(); n];
        let mut rel = vec![false; n * n];
        for p in 0..n {
            labels[perm[p]] = self.labels[p].clone();
            for q in 0..n {
                rel[perm[p] * n + perm[q]] = self.le(p, q);
            }
        }
        Self { labels, rel }
    }

    pub fn quotient(&self) -> QuotientPoset {
        QuotientPoset::new(self)
    }
}

/// The poset of `∼`-classes, `x ∼ y ⇔ x ⪯ y ⪯ x`.
///
/// Classes are numbered by their least element index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientPoset {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// `order[a*c + b]` is `ā ≤ b̄`.
    order: Vec<bool>,
}

impl QuotientPoset {
    fn new(p: &Preorder) -> Self {
        let n = p.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (x..n).filter(|&y| p.equivalent(x, y)).collect();
            for &y in &members {
                class_of[y] = id;
            }
            classes.push(members);
        }
        let c = classes.len();
        let mut order = vec![false; c * c];
        for a in 0..c {
            for b in 0..c {
                order[a * c + b] = p.le(classes[a][0], classes[b][0]);
            }
        }
        let q = Self { classes, class_of, order };
        for a in 0..c {
            for b in 0..c {
                assert!(a == b || !(q.le(a, b) && q.le(b, a)), "quotient order is not antisymmetric");
            }
        }
        q
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, a: usize) -> Result<&[usize]> {
        self.classes.get(a).map(Vec::as_slice).ok_or(Error::UnknownClass(a))
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.order[a * self.num_classes() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    /// `{z̄ : x̄ ≤ z̄ ≤ ȳ}`, empty when `x̄ ≰ ȳ`.
    pub fn interval(&self, a: usize, b: usize) -> Result<BTreeSet<usize>> {
        let c = self.num_classes();
        if a >= c {
            return Err(Error::UnknownClass(a));
        }
        if b >= c {
            return Err(Error::UnknownClass(b));
        }
        Ok((0..c).filter(|&z| self.le(a, z) && self.le(z, b)).collect())
    }

    /// Classes comparable with no other class.
    pub fn isolated_classes(&self) -> Vec<usize> {
        let c = self.num_classes();
        (0..c).filter(|&a| (0..c).all(|b| b == a || !(self.le(a, b) || self.le(b, a)))).collect()
    }

    /// Lowest-index class comparable with `a` other than `a` itself.
    pub fn comparable_partner(&self, a: usize) -> Option<usize> {
        (0..self.num_classes()).find(|&b| b != a && (self.le(a, b) || self.le(b, a)))
    }
}
