//! Basic spans of orbits `G/A ← G/J → G/B` with an admissible forward leg,
//! and their composition.
//!
//! A basic span is stored with its left leg normalized to `gJ ↦ gA` (so
//! `J ⊆ A`) and its right leg `gJ ↦ g·y·B` (so `J ⊆ yBy^-1`). Two such data
//! give isomorphic spans exactly when they differ by moving the base point by
//! an element of `A`; the canonical form minimizes `(aJa^-1, min(a·y·B))`
//! over `a ∈ A`.

use std::collections::BTreeMap;

use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::transfer::TransferSystem;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Span {
    pub src: SubgroupId,
    pub apex: SubgroupId,
    pub y: usize,
    pub dst: SubgroupId,
}

impl Span {
    pub fn canonical(lat: &SubgroupLattice, src: SubgroupId, apex: SubgroupId, y: usize, dst: SubgroupId) -> Span {
        debug_assert!(lat.contains(src, apex));
        let g = lat.group();
        let dset = lat.set(dst);
        let (apex, y) = lat
            .set(src)
            .iter()
            .map(|a| (lat.conj(a, apex), g.coset_min(g.mul(a, y), dset)))
            .min()
            .expect("nonempty");
        Span { src, apex, y, dst }
    }

    /// The subgroup `yBy^-1` that the apex maps into.
    pub fn target_stabilizer(&self, lat: &SubgroupLattice) -> SubgroupId {
        lat.conj(self.y, self.dst)
    }

    pub fn is_admissible(&self, ts: &TransferSystem) -> bool {
        let lat = ts.lattice();
        let t = self.target_stabilizer(lat);
        lat.contains(t, self.apex) && ts.rel(self.apex, t)
    }

    /// Restriction `L → K` for `K ⊆ L`.
    pub fn restriction(lat: &SubgroupLattice, l: SubgroupId, k: SubgroupId) -> Span {
        Span::canonical(lat, l, k, 0, k)
    }

    /// Transfer `K → L` for `K → L`.
    pub fn transfer(lat: &SubgroupLattice, k: SubgroupId, l: SubgroupId) -> Span {
        Span::canonical(lat, k, k, 0, l)
    }

    /// Conjugation `L → gLg^-1`, acting as `c_g`.
    pub fn conjugation(lat: &SubgroupLattice, g: usize, l: SubgroupId) -> Span {
        Span::canonical(lat, l, l, lat.group().inv(g), lat.conj(g, l))
    }

    pub fn describe(&self, lat: &SubgroupLattice) -> String {
        format!(
            "G/{} <- G/{} -> G/{} (via {})",
            lat.label(self.src),
            lat.label(self.apex),
            lat.label(self.dst),
            lat.group().name(self.y)
        )
    }
}

/// Isomorphism classes of admissible basic spans from `G/A` to `G/B`, sorted.
pub fn span_basis(ts: &TransferSystem, a: SubgroupId, b: SubgroupId) -> Vec<Span> {
    let lat = ts.lattice();
    let mut out = Vec::new();
    for j in lat.subgroups_of(a) {
        if lat.rep_under(a, j) != j {
            continue;
        }
        for y in lat.cosets_in(lat.top(), b) {
            let s = Span { src: a, apex: j, y, dst: b };
            if s.is_admissible(ts) {
                out.push(Span::canonical(lat, a, j, y, b));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `β ∘ α` as a sum of basic spans with multiplicities.
pub fn compose(lat: &SubgroupLattice, alpha: &Span, beta: &Span) -> BTreeMap<Span, i64> {
    assert_eq!(alpha.dst, beta.src, "spans are not composable");
    let g = lat.group();
    let j = lat.set(alpha.apex);
    let j2 = lat.set(beta.apex);
    // cosets hJ2 with h in yB, as their least elements
    let mut cosets: Vec<usize> = g
        .left_coset(alpha.y, lat.set(alpha.dst))
        .iter()
        .map(|h| g.coset_min(h, j2))
        .collect();
    cosets.sort_unstable();
    cosets.dedup();
    let mut seen = vec![false; g.order()];
    let mut out = BTreeMap::new();
    for &q in &cosets {
        if seen[q] {
            continue;
        }
        for x in j.iter() {
            seen[g.coset_min(g.mul(x, q), j2)] = true;
        }
        let s = lat.meet(alpha.apex, lat.conj(q, beta.apex));
        let span = Span::canonical(lat, alpha.src, s, g.mul(q, beta.y), beta.dst);
        *out.entry(span).or_insert(0) += 1;
    }
    out
}
