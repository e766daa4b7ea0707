//! Hulls, inseparability classes, and the sets of maximal class members below
//! a subgroup.

use thiserror::Error;

use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::transfer::TransferSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InsepError {
    #[error("{l} is not above the class of {h}")]
    NotAbove { l: String, h: String },
    #[error("{0} is not admissible")]
    NotAdmissible(String),
}

/// The least admissible subgroup containing `j`.
pub fn hull(ts: &TransferSystem, j: SubgroupId) -> SubgroupId {
    let lat = ts.lattice();
    lat.supergroups_of(j)
        .filter(|&h| ts.is_admissible(h))
        .fold(lat.top(), |acc, h| lat.meet(acc, h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsepClass {
    /// Canonical label: the conjugacy-class representative of the admissible hulls.
    pub rep: SubgroupId,
    pub members: Vec<SubgroupId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub hull: Vec<SubgroupId>,
    /// Sorted by representative.
    pub classes: Vec<InsepClass>,
    class_index: Vec<usize>,
}

impl Partition {
    pub fn class_of(&self, j: SubgroupId) -> &InsepClass {
        &self.classes[self.class_index[j.0]]
    }

    pub fn class_index_of(&self, j: SubgroupId) -> usize {
        self.class_index[j.0]
    }

    pub fn class_with_rep(&self, h: SubgroupId) -> Option<&InsepClass> {
        self.classes.iter().find(|c| c.rep == h)
    }

    /// Classes as sorted member lists, for comparing partitions.
    pub fn blocks(&self) -> Vec<Vec<SubgroupId>> {
        let mut b: Vec<Vec<SubgroupId>> = self.classes.iter().map(|c| c.members.clone()).collect();
        b.sort();
        b
    }
}

pub fn partition(ts: &TransferSystem) -> Partition {
    let lat = ts.lattice();
    let hulls: Vec<SubgroupId> = lat.ids().map(|j| hull(ts, j)).collect();
    let mut reps: Vec<SubgroupId> = hulls.iter().map(|&h| lat.class_rep(h)).collect();
    reps.sort_unstable();
    reps.dedup();
    let classes: Vec<InsepClass> = reps
        .iter()
        .map(|&rep| InsepClass {
            rep,
            members: lat.ids().filter(|j| lat.class_rep(hulls[j.0]) == rep).collect(),
        })
        .collect();
    let class_index = lat
        .ids()
        .map(|j| reps.binary_search(&lat.class_rep(hulls[j.0])).expect("present"))
        .collect();
    Partition {
        hull: hulls,
        classes,
        class_index,
    }
}

/// Groups subgroups by their fixed-point counts on all admissible orbits
/// `G/L`; computed without reference to hulls.
pub fn mark_vector_blocks(ts: &TransferSystem) -> Vec<Vec<SubgroupId>> {
    let lat = ts.lattice();
    let adm = ts.admissible_to_top();
    let key = |j: SubgroupId| -> Vec<usize> { adm.iter().map(|&l| lat.fixed_point_count(l, j)).collect() };
    let mut blocks: Vec<(Vec<usize>, Vec<SubgroupId>)> = Vec::new();
    for j in lat.ids() {
        let k = key(j);
        match blocks.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, members)) => members.push(j),
            None => blocks.push((k, vec![j])),
        }
    }
    let mut out: Vec<Vec<SubgroupId>> = blocks.into_iter().map(|(_, m)| m).collect();
    out.sort();
    out
}

/// Whether `L` contains some member of the class.
pub fn is_above(lat: &SubgroupLattice, l: SubgroupId, class: &InsepClass) -> bool {
    class.members.iter().any(|&k| lat.contains(l, k))
}

/// The members `L ∩ gHg^-1` of the class, with the `L`-conjugacy orbits on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSet {
    pub members: Vec<SubgroupId>,
    /// One representative per `L`-orbit, sorted.
    pub orbit_reps: Vec<SubgroupId>,
    /// For each orbit representative, an element `g` with `rep = L ∩ gHg^-1`.
    pub witnesses: Vec<usize>,
}

/// Computes `T_{L≥[H]}` by scanning `L\G/N_G(H)`; distinct double cosets give
/// distinct `L`-orbits.
pub fn top_set(ts: &TransferSystem, part: &Partition, l: SubgroupId, class: &InsepClass) -> Result<TopSet, InsepError> {
    let lat = ts.lattice();
    let h = class.rep;
    if !is_above(lat, l, class) {
        return Err(InsepError::NotAbove {
            l: lat.label(l).to_string(),
            h: lat.label(h).to_string(),
        });
    }
    let mut found: Vec<(SubgroupId, usize)> = Vec::new();
    for g in lat.double_cosets(l, lat.normalizer(h)) {
        let m = lat.meet(l, lat.conj(g, h));
        if part.class_of(m).rep == h {
            found.push((lat.rep_under(l, m), g));
        }
    }
    // the L-representative may differ from L ∩ gHg^-1 itself; fix the witness
    let mut orbit_reps = Vec::new();
    let mut witnesses = Vec::new();
    found.sort_unstable();
    for (rep, g) in found {
        let x = lat
            .set(l)
            .iter()
            .find(|&x| lat.conj(x, lat.meet(l, lat.conj(g, h))) == rep)
            .expect("rep is an L-conjugate");
        orbit_reps.push(rep);
        witnesses.push(lat.group().mul(x, g));
    }
    let mut members: Vec<SubgroupId> = orbit_reps.iter().flat_map(|&r| lat.conjugates_under(l, r)).collect();
    members.sort_unstable();
    Ok(TopSet {
        members,
        orbit_reps,
        witnesses,
    })
}

/// `T_{L≥[H]}` by intersecting `L` with every conjugate of `H`.
pub fn top_set_full_scan(ts: &TransferSystem, part: &Partition, l: SubgroupId, class: &InsepClass) -> Vec<SubgroupId> {
    let lat = ts.lattice();
    let mut out: Vec<SubgroupId> = lat
        .group()
        .elements()
        .map(|g| lat.meet(l, lat.conj(g, class.rep)))
        .filter(|&m| part.class_of(m).rep == class.rep)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Members of the class contained in the representative `H`; equivalently
/// those whose hull is exactly `H`.
pub fn class_below_rep(part: &Partition, class: &InsepClass) -> Vec<SubgroupId> {
    class
        .members
        .iter()
        .copied()
        .filter(|&k| part.hull[k.0] == class.rep)
        .collect()
}

/// Verifies that `(t, K) ↦ tKt^-1`, for `t` in a transversal of `G/N_G(H)` and
/// `K` a member below `H`, is a bijection onto the class, and that the members
/// below `H` are stable under `N_G(H)`.
pub fn tombstone_check(ts: &TransferSystem, part: &Partition, class: &InsepClass) -> bool {
    let lat = ts.lattice();
    let h = class.rep;
    let n = lat.normalizer(h);
    let below = class_below_rep(part, class);
    let stable = lat
        .set(n)
        .iter()
        .all(|x| below.iter().all(|&k| below.contains(&lat.conj(x, k))));
    let mut image: Vec<SubgroupId> = Vec::new();
    for t in lat.cosets_in(lat.top(), n) {
        for &k in &below {
            image.push(lat.conj(t, k));
        }
    }
    let count = image.len();
    image.sort_unstable();
    image.dedup();
    stable && image.len() == count && image == class.members
}

/// `J ∈ [H]` with `J ⊆ K ⊆ H` forces `K ∈ [H]`, for `H` ranging over the class.
pub fn is_relative_family(ts: &TransferSystem, part: &Partition, class: &InsepClass) -> bool {
    let lat = ts.lattice();
    class.members.iter().all(|&j| {
        class.members.iter().all(|&h| {
            lat.supergroups_of(j)
                .filter(|&k| lat.contains(h, k))
                .all(|k| part.class_of(k).rep == class.rep)
        })
    })
}

/// Non-identity transfers between members of the class.
pub fn internal_transfers(ts: &TransferSystem, class: &InsepClass) -> Vec<(SubgroupId, SubgroupId)> {
    let mut out = Vec::new();
    for &j in &class.members {
        for &k in &class.members {
            if j != k && ts.rel(j, k) {
                out.push((j, k));
            }
        }
    }
    out
}
