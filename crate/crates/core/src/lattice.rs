//! The subgroup lattice of a finite group, with conjugation and normalizer tables.
//!
//! Subgroups are numbered in canonical order: by cardinality, then by the
//! lexicographic order of their sorted element lists. A conjugacy class is
//! represented by its member of least id.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::group::{ElemSet, FiniteGroup};

/// Index of a subgroup in its lattice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubgroupId(pub usize);

impl SubgroupId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Debug for SubgroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for SubgroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    sets: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
    /// `below[h]` has bit `k` set iff subgroup `k` is contained in subgroup `h`.
    below: Vec<Vec<u64>>,
    meet: Vec<u32>,
    conj: Vec<u32>,
    class_rep: Vec<usize>,
    class_members: Vec<Vec<SubgroupId>>,
    normalizer: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("group_order", &self.group.order())
            .field("subgroups", &self.labels)
            .finish()
    }
}

impl SubgroupLattice {
    /// Enumerates every subgroup by closing subgroups under adjoining one more element.
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let g = &*group;
        let n_elems = g.order();
        let trivial = ElemSet::singleton(0);
        let mut found: HashMap<ElemSet, ()> = HashMap::new();
        found.insert(trivial, ());
        let mut queue = vec![trivial];
        while let Some(s) = queue.pop() {
            for x in 0..n_elems {
                if s.contains(x) {
                    continue;
                }
                let t = g.closure(s.union(ElemSet::singleton(x)));
                if found.insert(t, ()).is_none() {
                    queue.push(t);
                }
            }
        }
        let mut sets: Vec<ElemSet> = found.into_keys().collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
        let n = sets.len();
        let index: HashMap<ElemSet, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();

        let words = n.div_ceil(64);
        let mut below = vec![vec![0u64; words]; n];
        for h in 0..n {
            for k in 0..=h {
                if sets[k].is_subset(sets[h]) {
                    below[h][k / 64] |= 1u64 << (k % 64);
                }
            }
        }
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = index[&sets[a].intersect(sets[b])] as u32;
            }
        }
        let mut conj = vec![0u32; n_elems * n];
        for x in 0..n_elems {
            for h in 0..n {
                conj[x * n + h] = index[&g.conj_set(x, sets[h])] as u32;
            }
        }
        let mut class_rep = vec![usize::MAX; n];
        let mut class_members = vec![Vec::new(); n];
        for h in 0..n {
            if class_rep[h] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n_elems).map(|x| conj[x * n + h] as usize).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_rep[m] = h;
            }
            class_members[h] = members.into_iter().map(SubgroupId).collect();
        }
        let normalizer = (0..n)
            .map(|h| {
                let nset: ElemSet = (0..n_elems).filter(|&x| conj[x * n + h] as usize == h).collect();
                index[&nset]
            })
            .collect();
        let labels = make_labels(g, &sets);
        SubgroupLattice {
            group,
            sets,
            index,
            below,
            meet,
            conj,
            class_rep,
            class_members,
            normalizer,
            labels,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = SubgroupId> + ExactSizeIterator {
        (0..self.sets.len()).map(SubgroupId)
    }

    pub fn trivial(&self) -> SubgroupId {
        SubgroupId(0)
    }

    pub fn top(&self) -> SubgroupId {
        SubgroupId(self.sets.len() - 1)
    }

    #[inline]
    pub fn set(&self, h: SubgroupId) -> ElemSet {
        self.sets[h.0]
    }

    #[inline]
    pub fn order_of(&self, h: SubgroupId) -> usize {
        self.sets[h.0].len()
    }

    pub fn elements(&self, h: SubgroupId) -> Vec<usize> {
        self.sets[h.0].to_vec()
    }

    pub fn id_of(&self, s: ElemSet) -> Option<SubgroupId> {
        self.index.get(&s).map(|&i| SubgroupId(i))
    }

    pub fn label(&self, h: SubgroupId) -> &str {
        &self.labels[h.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks a subgroup up by label or by numeric id.
    pub fn parse_subgroup(&self, s: &str) -> Option<SubgroupId> {
        let s = s.trim();
        if let Some(i) = self.labels.iter().position(|l| l == s) {
            return Some(SubgroupId(i));
        }
        if s == "G" {
            return Some(self.top());
        }
        s.parse::<usize>().ok().filter(|&i| i < self.len()).map(SubgroupId)
    }

    /// `k ⊆ h`.
    #[inline]
    pub fn contains(&self, h: SubgroupId, k: SubgroupId) -> bool {
        self.below[h.0][k.0 / 64] >> (k.0 % 64) & 1 == 1
    }

    /// Subgroups of `h`, in canonical order.
    pub fn subgroups_of(&self, h: SubgroupId) -> impl Iterator<Item = SubgroupId> + '_ {
        (0..=h.0).map(SubgroupId).filter(move |&k| self.contains(h, k))
    }

    /// Subgroups containing `k`, in canonical order.
    pub fn supergroups_of(&self, k: SubgroupId) -> impl Iterator<Item = SubgroupId> + '_ {
        (k.0..self.len()).map(SubgroupId).filter(move |&h| self.contains(h, k))
    }

    #[inline]
    pub fn meet(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        SubgroupId(self.meet[a.0 * self.sets.len() + b.0] as usize)
    }

    /// `g h g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, h: SubgroupId) -> SubgroupId {
        SubgroupId(self.conj[g * self.sets.len() + h.0] as usize)
    }

    pub fn class_rep(&self, h: SubgroupId) -> SubgroupId {
        SubgroupId(self.class_rep[h.0])
    }

    /// All `G`-conjugates of `h`, sorted.
    pub fn class_of(&self, h: SubgroupId) -> &[SubgroupId] {
        &self.class_members[self.class_rep[h.0]]
    }

    /// Conjugacy-class representatives in canonical order.
    pub fn class_reps(&self) -> Vec<SubgroupId> {
        (0..self.len())
            .filter(|&h| self.class_rep[h] == h)
            .map(SubgroupId)
            .collect()
    }

    pub fn are_conjugate(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.class_rep[a.0] == self.class_rep[b.0]
    }

    pub fn normalizer(&self, h: SubgroupId) -> SubgroupId {
        SubgroupId(self.normalizer[h.0])
    }

    pub fn is_normal(&self, h: SubgroupId) -> bool {
        self.normalizer[h.0] == self.len() - 1
    }

    /// Whether some `G`-conjugate of `j` lies in `k`.
    pub fn subconjugate(&self, j: SubgroupId, k: SubgroupId) -> bool {
        self.group.elements().any(|g| self.contains(k, self.conj(g, j)))
    }

    /// Least `x`-conjugate of `k` (the canonical representative of the
    /// `x`-conjugacy class of `k`).
    pub fn rep_under(&self, x: SubgroupId, k: SubgroupId) -> SubgroupId {
        self.set(x)
            .iter()
            .map(|g| self.conj(g, k))
            .min()
            .expect("subgroups are nonempty")
    }

    /// All `x`-conjugates of `k`, sorted.
    pub fn conjugates_under(&self, x: SubgroupId, k: SubgroupId) -> Vec<SubgroupId> {
        let mut v: Vec<SubgroupId> = self.set(x).iter().map(|g| self.conj(g, k)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `N_x(k) = x ∩ N_G(k)`.
    pub fn normalizer_in(&self, x: SubgroupId, k: SubgroupId) -> SubgroupId {
        self.meet(x, self.normalizer(k))
    }

    /// `|(G/K)^H|`, the number of cosets `gK` with `H ⊆ gKg^-1`.
    pub fn fixed_point_count(&self, k: SubgroupId, h: SubgroupId) -> usize {
        self.fixed_points_in(self.top(), k, h)
    }

    /// `|(X/K)^H|` for `H, K ⊆ X`.
    pub fn fixed_points_in(&self, x: SubgroupId, k: SubgroupId, h: SubgroupId) -> usize {
        let g = &self.group;
        g.left_coset_reps_in(self.set(x), self.set(k))
            .into_iter()
            .filter(|&r| self.contains(self.conj(r, k), h))
            .count()
    }

    /// Representatives of `K\G/L`.
    pub fn double_cosets(&self, k: SubgroupId, l: SubgroupId) -> Vec<usize> {
        self.double_cosets_in(self.top(), k, l)
    }

    /// Representatives of `K\X/L` for `K, L ⊆ X`.
    pub fn double_cosets_in(&self, x: SubgroupId, k: SubgroupId, l: SubgroupId) -> Vec<usize> {
        self.group
            .double_coset_reps_in(self.set(x), self.set(k), self.set(l))
    }

    /// Left coset representatives of `X/K`.
    pub fn cosets_in(&self, x: SubgroupId, k: SubgroupId) -> Vec<usize> {
        self.group.left_coset_reps_in(self.set(x), self.set(k))
    }

    /// The subgroup `{g}`-generated, i.e. `<g>`.
    pub fn cyclic_subgroup(&self, g: usize) -> SubgroupId {
        self.id_of(self.group.closure(ElemSet::singleton(g)))
            .expect("every cyclic subgroup is in the lattice")
    }
}

fn make_labels(g: &FiniteGroup, sets: &[ElemSet]) -> Vec<String> {
    let n = sets.len();
    let is_cyclic: Vec<bool> = sets
        .iter()
        .map(|&s| s.iter().any(|x| g.closure(ElemSet::singleton(x)) == s))
        .collect();
    let base: Vec<String> = (0..n)
        .map(|i| {
            let ord = sets[i].len();
            if is_cyclic[i] {
                format!("C{ord}")
            } else if i == n - 1 {
                "G".to_string()
            } else {
                format!("H{ord}")
            }
        })
        .collect();
    let mut labels = base.clone();
    for i in 0..n {
        let same: Vec<usize> = (0..n).filter(|&j| base[j] == base[i]).collect();
        if same.len() > 1 {
            let pos = same.iter().position(|&j| j == i).expect("present");
            labels[i] = format!("{}{}", base[i], suffix(pos));
        }
    }
    labels
}

fn suffix(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        i /= 26;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn lattice(name: &str) -> SubgroupLattice {
        SubgroupLattice::new(Arc::new(named::parse_named(name).unwrap()))
    }

    #[test]
    fn cyclic_lattices() {
        let c6 = lattice("cyclic:6");
        assert_eq!(c6.len(), 4);
        assert_eq!(c6.labels(), ["C1", "C2", "C3", "C6"]);
        assert!(c6.ids().all(|h| c6.is_normal(h)));

        let c8 = lattice("cyclic:8");
        assert_eq!(c8.labels(), ["C1", "C2", "C4", "C8"]);
        for a in c8.ids() {
            for b in c8.ids() {
                assert_eq!(c8.contains(b, a), a <= b);
            }
        }
    }

    #[test]
    fn s3_lattice() {
        let s3 = lattice("symmetric:3");
        assert_eq!(s3.len(), 6);
        assert_eq!(s3.class_reps().len(), 4);
        for h in s3.ids().filter(|&h| s3.order_of(h) == 2) {
            assert_eq!(s3.normalizer(h), h);
        }
    }

    #[test]
    fn trivial_group() {
        let t = lattice("trivial");
        assert_eq!(t.len(), 1);
        assert_eq!(t.top(), t.trivial());
        assert_eq!(t.fixed_point_count(t.top(), t.top()), 1);
        assert_eq!(t.double_cosets(t.top(), t.top()), vec![0]);
    }

    #[test]
    fn fixed_points_examples() {
        let c6 = lattice("cyclic:6");
        let [_, c2, c3, _] = [0, 1, 2, 3].map(SubgroupId);
        assert_eq!(c6.fixed_point_count(c2, c2), 3);
        assert_eq!(c6.fixed_point_count(c3, c2), 0);

        let s3 = lattice("symmetric:3");
        let g = s3.group().clone();
        let t12 = (0..6).find(|&x| g.name(x) == "(1 2)").unwrap();
        let t13 = (0..6).find(|&x| g.name(x) == "(1 3)").unwrap();
        let k = s3.cyclic_subgroup(t12);
        let h = s3.cyclic_subgroup(t13);
        assert_eq!(s3.fixed_point_count(k, h), 1);
    }

    #[test]
    fn double_coset_examples() {
        let s3 = lattice("symmetric:3");
        let g = s3.group().clone();
        let t12 = (0..6).find(|&x| g.name(x) == "(1 2)").unwrap();
        let k = s3.cyclic_subgroup(t12);
        assert_eq!(s3.double_cosets(k, k).len(), 2);
        assert_eq!(s3.double_cosets(s3.top(), k), vec![0]);
        assert_eq!(s3.double_cosets(k, s3.top()), vec![0]);
    }

    #[test]
    fn labels_disambiguate() {
        let v4 = lattice("klein");
        assert_eq!(v4.labels(), ["C1", "C2a", "C2b", "C2c", "G"]);
        let d4 = lattice("dihedral:4");
        assert_eq!(d4.len(), 10);
        assert_eq!(d4.parse_subgroup("G"), Some(d4.top()));
        assert_eq!(d4.parse_subgroup("C4"), d4.parse_subgroup(d4.label(d4.parse_subgroup("C4").unwrap())));
    }
}
