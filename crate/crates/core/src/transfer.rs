//! Transfer systems: partial orders on subgroups refining inclusion and closed
//! under conjugation and restriction.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{SubgroupId, SubgroupLattice};

/// Default cap on group order for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("pair {k} -> {h} is not nested: {k} is not a subgroup of {h}")]
    PairNotNested { k: String, h: String },
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    #[error("cannot parse transfer `{0}`; expected `K>H`")]
    BadPair(String),
    #[error("relation is not a transfer system: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// A relation on subgroup ids, stored as one bit row per target subgroup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Relation {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for h in 0..n {
            r.set(SubgroupId(h), SubgroupId(h));
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `K → H`.
    #[inline]
    pub fn get(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.bits[h.0 * self.words + k.0 / 64] >> (k.0 % 64) & 1 == 1
    }

    /// Sets `K → H`, returning whether it was newly added.
    #[inline]
    pub fn set(&mut self, k: SubgroupId, h: SubgroupId) -> bool {
        let w = &mut self.bits[h.0 * self.words + k.0 / 64];
        let bit = 1u64 << (k.0 % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    /// Non-reflexive pairs `(K, H)` in lexicographic order.
    pub fn pairs(&self) -> Vec<(SubgroupId, SubgroupId)> {
        let mut out = Vec::new();
        for k in 0..self.n {
            for h in 0..self.n {
                if k != h && self.get(SubgroupId(k), SubgroupId(h)) {
                    out.push((SubgroupId(k), SubgroupId(h)));
                }
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pairs()).finish()
    }
}

/// A failed transfer-system axiom with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReflexive { h: SubgroupId },
    NotNested { k: SubgroupId, h: SubgroupId },
    NotTransitive { k: SubgroupId, j: SubgroupId, h: SubgroupId },
    NotConjugationClosed { k: SubgroupId, h: SubgroupId, g: usize },
    NotRestrictionClosed { k: SubgroupId, h: SubgroupId, l: SubgroupId },
}

impl Violation {
    pub fn describe(&self, lat: &SubgroupLattice) -> String {
        let n = |s: &SubgroupId| lat.label(*s).to_string();
        match self {
            Violation::NotReflexive { h } => format!("missing identity {0} -> {0}", n(h)),
            Violation::NotNested { k, h } => format!("{} -> {} but {0} is not a subgroup of {1}", n(k), n(h)),
            Violation::NotTransitive { k, j, h } => {
                format!("{} -> {} -> {} but not {0} -> {2}", n(k), n(j), n(h))
            }
            Violation::NotConjugationClosed { k, h, g } => format!(
                "{} -> {} but its conjugate by {} is missing",
                n(k),
                n(h),
                lat.group().name(*g)
            ),
            Violation::NotRestrictionClosed { k, h, l } => format!(
                "{} -> {} and {} <= {1} but not {} -> {2}",
                n(k),
                n(h),
                n(l),
                n(&lat.meet(*k, *l))
            ),
        }
    }
}

/// Checks every transfer-system axiom and reports each failing instance.
/// Antisymmetry is implied by nestedness and is not checked separately.
pub fn validate(lat: &SubgroupLattice, rel: &Relation) -> Vec<Violation> {
    let mut out = Vec::new();
    for h in lat.ids() {
        if !rel.get(h, h) {
            out.push(Violation::NotReflexive { h });
        }
    }
    let pairs: Vec<(SubgroupId, SubgroupId)> = lat
        .ids()
        .flat_map(|k| lat.ids().map(move |h| (k, h)))
        .filter(|&(k, h)| rel.get(k, h))
        .collect();
    for &(k, h) in &pairs {
        if !lat.contains(h, k) {
            out.push(Violation::NotNested { k, h });
        }
        for j in lat.ids() {
            if rel.get(h, j) && !rel.get(k, j) {
                out.push(Violation::NotTransitive { k, j: h, h: j });
            }
        }
        for g in lat.group().elements() {
            if !rel.get(lat.conj(g, k), lat.conj(g, h)) {
                out.push(Violation::NotConjugationClosed { k, h, g });
                break;
            }
        }
        for l in lat.subgroups_of(h) {
            if !rel.get(lat.meet(k, l), l) {
                out.push(Violation::NotRestrictionClosed { k, h, l });
            }
        }
    }
    out
}

#[derive(Clone)]
pub struct TransferSystem {
    lat: Arc<SubgroupLattice>,
    rel: Relation,
}

impl PartialEq for TransferSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lat, &other.lat) && self.rel == other.rel
    }
}

impl Eq for TransferSystem {}

impl fmt::Debug for TransferSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs()
            .iter()
            .map(|&(k, h)| format!("{}>{}", self.lat.label(k), self.lat.label(h)))
            .collect();
        write!(f, "TransferSystem{{{}}}", pairs.join(", "))
    }
}

impl TransferSystem {
    /// Validates a relation. Errors carry human-readable violation descriptions.
    pub fn new(lat: Arc<SubgroupLattice>, rel: Relation) -> Result<Self, TransferError> {
        let violations = validate(&lat, &rel);
        if !violations.is_empty() {
            return Err(TransferError::Invalid(
                violations.iter().map(|v| v.describe(&lat)).collect(),
            ));
        }
        Ok(TransferSystem { lat, rel })
    }

    /// The identity-only system.
    pub fn trivial(lat: Arc<SubgroupLattice>) -> Self {
        let rel = Relation::identity(lat.len());
        TransferSystem { lat, rel }
    }

    /// The full inclusion relation.
    pub fn complete(lat: Arc<SubgroupLattice>) -> Self {
        let mut rel = Relation::empty(lat.len());
        for h in lat.ids() {
            for k in lat.subgroups_of(h) {
                rel.set(k, h);
            }
        }
        TransferSystem { lat, rel }
    }

    /// The least transfer system containing the seed pairs.
    pub fn generate(
        lat: Arc<SubgroupLattice>,
        seeds: &[(SubgroupId, SubgroupId)],
    ) -> Result<Self, TransferError> {
        for &(k, h) in seeds {
            if !lat.contains(h, k) {
                return Err(TransferError::PairNotNested {
                    k: lat.label(k).to_string(),
                    h: lat.label(h).to_string(),
                });
            }
        }
        let rel = close(&lat, Relation::identity(lat.len()), seeds);
        Ok(TransferSystem { lat, rel })
    }

    /// Parses seeds written as `K>H` (labels or ids), separated by commas or whitespace.
    pub fn parse_pairs(lat: &SubgroupLattice, text: &str) -> Result<Vec<(SubgroupId, SubgroupId)>, TransferError> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (k, h) = s
                    .split_once("->")
                    .or_else(|| s.split_once('>'))
                    .ok_or_else(|| TransferError::BadPair(s.to_string()))?;
                let find = |x: &str| lat.parse_subgroup(x).ok_or_else(|| TransferError::UnknownSubgroup(x.to_string()));
                Ok((find(k)?, find(h)?))
            })
            .collect()
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lat
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    /// `K → H`.
    #[inline]
    pub fn rel(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.rel.get(k, h)
    }

    pub fn pairs(&self) -> Vec<(SubgroupId, SubgroupId)> {
        self.rel.pairs()
    }

    pub fn pair_count(&self) -> usize {
        self.rel.pairs().len()
    }

    pub fn is_subsystem_of(&self, other: &TransferSystem) -> bool {
        self.rel.is_subset(&other.rel)
    }

    /// All `K` with `K → H`, in canonical order.
    pub fn sources(&self, h: SubgroupId) -> Vec<SubgroupId> {
        self.lat.subgroups_of(h).filter(|&k| self.rel(k, h)).collect()
    }

    /// All `H` with `K → H`, in canonical order.
    pub fn targets(&self, k: SubgroupId) -> Vec<SubgroupId> {
        self.lat.supergroups_of(k).filter(|&h| self.rel(k, h)).collect()
    }

    /// `Sub^O(G)`: the subgroups admitting a transfer to the whole group.
    pub fn admissible_to_top(&self) -> Vec<SubgroupId> {
        self.sources(self.lat.top())
    }

    pub fn is_admissible(&self, h: SubgroupId) -> bool {
        self.rel(h, self.lat.top())
    }

    /// The least admissible subgroup (the meet of all of them).
    pub fn minimal_admissible(&self) -> SubgroupId {
        self.admissible_to_top()
            .into_iter()
            .fold(self.lat.top(), |acc, h| self.lat.meet(acc, h))
    }

    /// Restriction to the subgroup lattice of `H`, as a transfer system for `H`
    /// in its own right.
    pub fn restrict_to_subgroup(&self, h: SubgroupId) -> SubgroupRestriction {
        let g = self.lat.group();
        let (sub, elems) = g.subgroup_as_group(self.lat.set(h));
        let sub_lat = Arc::new(SubgroupLattice::new(Arc::new(sub)));
        let embed: Vec<SubgroupId> = sub_lat
            .ids()
            .map(|s| {
                let set = sub_lat.set(s).iter().map(|i| elems[i]).collect();
                self.lat.id_of(set).expect("subgroup of a subgroup")
            })
            .collect();
        let mut rel = Relation::empty(sub_lat.len());
        for a in sub_lat.ids() {
            for b in sub_lat.ids() {
                if self.rel(embed[a.0], embed[b.0]) {
                    rel.set(a, b);
                }
            }
        }
        SubgroupRestriction {
            ts: TransferSystem { lat: sub_lat, rel },
            embed,
            elems,
        }
    }

    /// The subsystem generated by the transfers into the whole group.
    pub fn maximal_disklike(&self) -> TransferSystem {
        let top = self.lat.top();
        let seeds: Vec<_> = self.admissible_to_top().into_iter().map(|h| (h, top)).collect();
        let rel = close(&self.lat, Relation::identity(self.lat.len()), &seeds);
        TransferSystem {
            lat: self.lat.clone(),
            rel,
        }
    }

    pub fn is_disklike(&self) -> bool {
        self.maximal_disklike().rel == self.rel
    }

    pub fn mobius(&self) -> MobiusTable {
        let n = self.lat.len();
        let mut mu = vec![0i64; n * n];
        // targets in increasing canonical order see all smaller intermediates first
        for k in self.lat.ids() {
            mu[k.0 * n + k.0] = 1;
            for h in self.targets(k).into_iter().filter(|&h| h != k) {
                let s: i64 = self
                    .targets(k)
                    .into_iter()
                    .filter(|&j| j != h && self.rel(j, h))
                    .map(|j| mu[k.0 * n + j.0])
                    .sum();
                mu[k.0 * n + h.0] = -s;
            }
        }
        MobiusTable {
            rel: self.rel.clone(),
            n,
            mu,
        }
    }

    /// Labels for display, e.g. `C2>C6`.
    pub fn pair_labels(&self) -> Vec<String> {
        self.pairs()
            .iter()
            .map(|&(k, h)| format!("{}>{}", self.lat.label(k), self.lat.label(h)))
            .collect()
    }

    /// Canonical sort key: number of non-reflexive pairs, then the pair list.
    pub fn sort_key(&self) -> (usize, Vec<(SubgroupId, SubgroupId)>) {
        let p = self.pairs();
        (p.len(), p)
    }
}

/// A transfer system restricted to a subgroup `H`, with `embed` mapping ids of
/// `H`'s own lattice to ids in the ambient lattice, and `elems[i]` the ambient
/// element that is element `i` of `H`.
#[derive(Clone, Debug)]
pub struct SubgroupRestriction {
    pub ts: TransferSystem,
    pub embed: Vec<SubgroupId>,
    pub elems: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MobiusTable {
    rel: Relation,
    n: usize,
    mu: Vec<i64>,
}

impl MobiusTable {
    /// `μ(K, H)`, defined when `K → H`.
    pub fn get(&self, k: SubgroupId, h: SubgroupId) -> Option<i64> {
        self.rel.get(k, h).then(|| self.mu[k.0 * self.n + h.0])
    }
}

/// Closes `rel` (already a transfer system, or the identity) under the axioms
/// after adding `seeds`.
fn close(lat: &SubgroupLattice, mut rel: Relation, seeds: &[(SubgroupId, SubgroupId)]) -> Relation {
    let mut work: Vec<(SubgroupId, SubgroupId)> = Vec::new();
    for &(k, h) in seeds {
        if rel.set(k, h) {
            work.push((k, h));
        }
    }
    let n = lat.len();
    while let Some((k, h)) = work.pop() {
        let mut add = |a: SubgroupId, b: SubgroupId, rel: &mut Relation| {
            if rel.set(a, b) {
                work.push((a, b));
            }
        };
        for g in lat.group().elements() {
            add(lat.conj(g, k), lat.conj(g, h), &mut rel);
        }
        for l in lat.subgroups_of(h) {
            add(lat.meet(k, l), l, &mut rel);
        }
        for j in 0..n {
            let j = SubgroupId(j);
            if rel.get(j, k) {
                add(j, h, &mut rel);
            }
            if rel.get(h, j) {
                add(k, j, &mut rel);
            }
        }
    }
    rel
}

/// Every transfer system of the group, sorted by [`TransferSystem::sort_key`].
pub fn enumerate_all(lat: &Arc<SubgroupLattice>) -> Result<Vec<TransferSystem>, TransferError> {
    enumerate_all_capped(lat, DEFAULT_ENUMERATION_CAP)
}

/// Layered search: each layer closes every system of the previous layer with
/// one more conjugacy orbit of pairs. Every system is reached because it is
/// the closure of its own pairs added one orbit at a time.
pub fn enumerate_all_capped(lat: &Arc<SubgroupLattice>, cap: usize) -> Result<Vec<TransferSystem>, TransferError> {
    let order = lat.group().order();
    if order > cap {
        return Err(TransferError::GroupTooLarge { order, cap });
    }
    let mut candidates = Vec::new();
    for h in lat.ids() {
        for k in lat.subgroups_of(h).filter(|&k| k != h) {
            let least = lat
                .group()
                .elements()
                .map(|g| (lat.conj(g, k), lat.conj(g, h)))
                .min()
                .expect("nonempty group");
            if least == (k, h) {
                candidates.push((k, h));
            }
        }
    }
    let start = Relation::identity(lat.len());
    let mut seen: HashSet<Relation> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let children: Vec<Relation> = frontier
            .par_iter()
            .flat_map_iter(|r| {
                candidates
                    .iter()
                    .filter(|&&(k, h)| !r.get(k, h))
                    .map(|&p| close(lat, r.clone(), &[p]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for c in children {
            if !seen.contains(&c) {
                seen.insert(c.clone());
                next.push(c);
            }
        }
        frontier = next;
    }
    let mut out: Vec<TransferSystem> = seen
        .into_iter()
        .map(|rel| TransferSystem { lat: lat.clone(), rel })
        .collect();
    out.sort_by_cached_key(|t| t.sort_key());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn lat(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(named::parse_named(name).unwrap())))
    }

    #[test]
    fn extremes_are_valid() {
        let l = lat("dihedral:4");
        assert!(validate(&l, TransferSystem::trivial(l.clone()).relation()).is_empty());
        assert!(validate(&l, TransferSystem::complete(l.clone()).relation()).is_empty());
    }

    #[test]
    fn restriction_violation_is_witnessed() {
        let l = lat("cyclic:6");
        let [c1, c2, c3, c6] = [0, 1, 2, 3].map(SubgroupId);
        let mut rel = Relation::identity(4);
        rel.set(c2, c6);
        let v = validate(&l, &rel);
        assert_eq!(v, vec![Violation::NotRestrictionClosed { k: c2, h: c6, l: c3 }]);
        assert_eq!(l.meet(c2, c3), c1);
    }

    #[test]
    fn generate_examples() {
        let l = lat("cyclic:6");
        let [c1, c2, c3, c6] = [0, 1, 2, 3].map(SubgroupId);
        assert_eq!(TransferSystem::generate(l.clone(), &[]).unwrap(), TransferSystem::trivial(l.clone()));
        let t = TransferSystem::generate(l.clone(), &[(c2, c6)]).unwrap();
        assert_eq!(t.pairs(), vec![(c1, c3), (c2, c6)]);
        assert!(matches!(
            TransferSystem::generate(l.clone(), &[(c2, c3)]),
            Err(TransferError::PairNotNested { .. })
        ));

        let l8 = lat("cyclic:8");
        let [_, d2, d4, d8] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l8, &[(d2, d4), (d2, d8)]).unwrap();
        assert_eq!(t.pairs(), vec![(d2, d4), (d2, d8)]);
    }

    #[test]
    fn restriction_to_subgroups() {
        let l8 = lat("cyclic:8");
        let [_, d2, d4, d8] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l8.clone(), &[(d2, d4), (d2, d8)]).unwrap();
        let r = t.restrict_to_subgroup(d4);
        assert_eq!(r.ts.pair_labels(), vec!["C2>C4"]);
        assert_eq!(r.embed, vec![SubgroupId(0), d2, d4]);
        assert_eq!(t.restrict_to_subgroup(d8).ts.pair_labels(), t.pair_labels());
        assert!(t.restrict_to_subgroup(SubgroupId(0)).ts.pairs().is_empty());
    }

    #[test]
    fn disklike_examples() {
        let l8 = lat("cyclic:8");
        let [c1, c2, c4, c8] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l8.clone(), &[(c1, c2), (c1, c4), (c1, c8), (c2, c4)]).unwrap();
        assert_eq!(t.pairs(), vec![(c1, c2), (c1, c4), (c1, c8), (c2, c4)]);
        assert!(!t.is_disklike());
        assert_eq!(t.maximal_disklike().pairs(), vec![(c1, c2), (c1, c4), (c1, c8)]);
        assert_eq!(t.mobius().get(c1, c8), Some(-1));
        assert_eq!(t.mobius().get(c2, c8), None);

        let only = TransferSystem::generate(l8.clone(), &[(c2, c4)]).unwrap();
        assert_eq!(only.maximal_disklike(), TransferSystem::trivial(l8.clone()));
        assert!(TransferSystem::complete(l8.clone()).is_disklike());
        assert!(TransferSystem::trivial(l8).is_disklike());
    }

    #[test]
    fn enumeration_counts() {
        for (name, count) in [("trivial", 1), ("cyclic:2", 2), ("cyclic:4", 5), ("cyclic:8", 14), ("cyclic:6", 10)] {
            assert_eq!(enumerate_all(&lat(name)).unwrap().len(), count, "{name}");
        }
        assert!(matches!(
            enumerate_all_capped(&lat("cyclic:8"), 4),
            Err(TransferError::GroupTooLarge { order: 8, cap: 4 })
        ));
    }

    #[test]
    fn admissible_top_examples() {
        let l = lat("cyclic:6");
        let [_, c2, _, c6] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l.clone(), &[(c2, c6)]).unwrap();
        assert_eq!(t.admissible_to_top(), vec![c2, c6]);
        assert_eq!(t.minimal_admissible(), c2);
        assert_eq!(TransferSystem::complete(l.clone()).admissible_to_top().len(), 4);
    }

    #[test]
    fn parse_pairs() {
        let l = lat("cyclic:6");
        let p = TransferSystem::parse_pairs(&l, "C2>C6, C1->C3").unwrap();
        assert_eq!(p, vec![(SubgroupId(1), SubgroupId(3)), (SubgroupId(0), SubgroupId(2))]);
        assert!(TransferSystem::parse_pairs(&l, "C5>C6").is_err());
        assert!(TransferSystem::parse_pairs(&l, "C2").is_err());
    }
}
