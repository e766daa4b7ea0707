//! Finite groups given by multiplication tables.
//!
//! Elements are indices `0..order`; the identity is always index `0` after
//! validation. Element subsets are packed into a single `u64`, which is what
//! bounds the supported group order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard ceiling imposed by the `u64` element-set representation.
pub const MAX_ORDER: usize = 64;

/// Default configured cap on group order.
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("multiplication table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("table entry mul({a}, {b}) = {value} is out of range 0..{order}")]
    OutOfRange {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("group order {order} exceeds the configured cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameter for family `{family}`: {reason}")]
    BadParameter { family: String, reason: String },
    #[error("names list has {len} entries, expected {order}")]
    NameCount { len: usize, order: usize },
}

/// A set of group elements, packed as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn singleton(x: usize) -> Self {
        ElemSet(1u64 << x)
    }

    pub fn full(order: usize) -> Self {
        if order == 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << order) - 1)
        }
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersect(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

/// A validated finite group.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupFile", into = "GroupFile")]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
    names: Vec<String>,
    /// `relabel[i]` is the new index of the element that had index `i` in the
    /// table the group was built from.
    relabel: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("names", &self.names)
            .finish()
    }
}

/// On-disk group description: `{"order": n, "mul": [[...]], "names": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl TryFrom<GroupFile> for FiniteGroup {
    type Error = GroupError;

    fn try_from(file: GroupFile) -> Result<Self, GroupError> {
        if file.mul.len() != file.order {
            return Err(GroupError::NotSquare {
                row: file.mul.len(),
                len: 0,
                order: file.order,
            });
        }
        FiniteGroup::from_table_named(&file.mul, file.names, DEFAULT_ORDER_CAP)
    }
}

impl From<FiniteGroup> for GroupFile {
    fn from(g: FiniteGroup) -> Self {
        GroupFile {
            order: g.order,
            mul: (0..g.order)
                .map(|a| (0..g.order).map(|b| g.mul(a, b)).collect())
                .collect(),
            names: Some(g.names.clone()),
        }
    }
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_table_named(table, None, DEFAULT_ORDER_CAP)
    }

    /// Validates a table, reindexing so that the identity becomes element `0`.
    pub fn from_table_named(
        table: &[Vec<usize>],
        names: Option<Vec<String>>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let cap = cap.min(MAX_ORDER);
        if n > cap {
            return Err(GroupError::TooLarge { order: n, cap });
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: entries.len(),
                    order: n,
                });
            }
            for (b, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::OutOfRange {
                        a: row,
                        b,
                        value,
                        order: n,
                    });
                }
            }
        }
        if let Some(names) = &names {
            if names.len() != n {
                return Err(GroupError::NameCount {
                    len: names.len(),
                    order: n,
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv_orig = vec![0usize; n];
        for a in 0..n {
            inv_orig[a] = (0..n)
                .find(|&b| table[a][b] == e && table[b][a] == e)
                .ok_or(GroupError::NoInverse { element: a })?;
        }

        // swap the identity into slot 0
        let relabel: Vec<usize> = (0..n)
            .map(|i| {
                if i == e {
                    0
                } else if i == 0 {
                    e
                } else {
                    i
                }
            })
            .collect();
        let mut mul = vec![0u8; n * n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel[a] * n + relabel[b]] = relabel[table[a][b]] as u8;
            }
            inv[relabel[a]] = relabel[inv_orig[a]] as u8;
        }
        let mut new_names = vec![String::new(); n];
        for i in 0..n {
            new_names[relabel[i]] = match &names {
                Some(ns) => ns[i].clone(),
                None => format!("g{i}"),
            };
        }
        Ok(FiniteGroup {
            order: n,
            mul,
            inv,
            names: new_names,
            relabel,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj_elem(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index permutation applied when the identity was moved to slot 0.
    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.order)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by a set of elements.
    pub fn closure(&self, gens: ElemSet) -> ElemSet {
        let mut set = ElemSet::singleton(0);
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for g in gens.iter() {
                let b = self.mul(a, g);
                if !set.contains(b) {
                    set.insert(b);
                    frontier.push(b);
                }
            }
        }
        set
    }

    /// A generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = ElemSet::default();
        let mut span = ElemSet::singleton(0);
        let mut out = Vec::new();
        for x in 1..self.order {
            if !span.contains(x) {
                gens.insert(x);
                out.push(x);
                span = self.closure(gens);
            }
        }
        out
    }

    /// Looks an element up by name or by index.
    pub fn parse_element(&self, s: &str) -> Option<usize> {
        let s = s.trim();
        self.names
            .iter()
            .position(|n| n == s)
            .or_else(|| s.parse::<usize>().ok().filter(|&i| i < self.order))
    }

    pub fn is_subgroup(&self, s: ElemSet) -> bool {
        s.contains(0)
            && s.iter()
                .all(|a| s.contains(self.inv(a)) && s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    /// `g S g^-1`.
    pub fn conj_set(&self, g: usize, s: ElemSet) -> ElemSet {
        s.iter().map(|x| self.conj_elem(g, x)).collect()
    }

    /// Left coset `g S`.
    pub fn left_coset(&self, g: usize, s: ElemSet) -> ElemSet {
        s.iter().map(|x| self.mul(g, x)).collect()
    }

    /// Double coset `K g L`.
    pub fn double_coset(&self, k: ElemSet, g: usize, l: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for a in k.iter() {
            let ag = self.mul(a, g);
            for b in l.iter() {
                out.insert(self.mul(ag, b));
            }
        }
        out
    }

    /// Representatives of `K\X/L` for `X` a union of `(K, L)`-double cosets
    /// (typically a subgroup containing both). Each representative is the least
    /// element of its double coset; the list is sorted.
    pub fn double_coset_reps_in(&self, ambient: ElemSet, k: ElemSet, l: ElemSet) -> Vec<usize> {
        let mut seen = ElemSet::EMPTY;
        let mut reps = Vec::new();
        for g in ambient.iter() {
            if !seen.contains(g) {
                reps.push(g);
                seen = seen.union(self.double_coset(k, g, l));
            }
        }
        reps
    }

    /// Left coset representatives of `X/S` (least element of each coset).
    pub fn left_coset_reps_in(&self, ambient: ElemSet, s: ElemSet) -> Vec<usize> {
        self.double_coset_reps_in(ambient, ElemSet::singleton(0), s)
    }

    /// Least element of the left coset `g S`.
    pub fn coset_min(&self, g: usize, s: ElemSet) -> usize {
        self.left_coset(g, s).first().expect("cosets are nonempty")
    }

    /// The subgroup `s` as a group in its own right, with `elems[i]` the element
    /// of `self` that becomes index `i`.
    pub fn subgroup_as_group(&self, s: ElemSet) -> (FiniteGroup, Vec<usize>) {
        let elems = s.to_vec();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[self.mul(a, b)]).collect())
            .collect();
        let names = elems.iter().map(|&x| self.names[x].clone()).collect();
        let sub = FiniteGroup::from_table_named(&table, Some(names), MAX_ORDER)
            .expect("a subgroup is a group");
        (sub, elems)
    }

    /// Exhaustive group-axiom check, used in tests.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a)
            && (0..n).all(|a| self.mul(a, self.inv(a)) == 0 && self.mul(self.inv(a), a) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
            })
    }
}
