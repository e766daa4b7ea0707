//! Restriction of a class functor to the normalizer of its representative,
//! and the reconstruction by conjugation.

use super::functor::is_morphism;
use super::induction::check_class_functor;
use super::{MackeyError, MackeyFunctor};
use crate::insep::{InsepClass, Partition};
use crate::lattice::SubgroupId;
use crate::linalg::Matrix;
use crate::transfer::SubgroupRestriction;

/// A class functor seen on `N = N_G(H)`: levels `N/K` with `K ⊆ H` in the class.
#[derive(Clone, Debug)]
pub struct NormalizerData {
    /// `N_G(H)` in the ambient lattice.
    pub normalizer: SubgroupId,
    /// The restricted transfer system on the lattice of `N`, with embeddings.
    pub sub: SubgroupRestriction,
    /// `H` in the lattice of `N`.
    pub rep: SubgroupId,
    /// Retained levels, in the lattice of `N`.
    pub levels: Vec<SubgroupId>,
    /// An `i*_N O`-Mackey functor on the family of `H`, zero off the retained levels.
    pub functor: MackeyFunctor,
    /// Non-identity transfers between retained levels, in the lattice of `N`.
    pub internal_transfers: Vec<(SubgroupId, SubgroupId)>,
}

impl NormalizerData {
    /// With no internal transfers the data is a plain coefficient system.
    pub fn is_coefficient_system(&self) -> bool {
        self.internal_transfers.is_empty()
    }
}

fn local_id(sub: &SubgroupRestriction, k: SubgroupId) -> Option<SubgroupId> {
    sub.embed.iter().position(|&e| e == k).map(SubgroupId)
}

/// Restricts a class functor to `N_G(H)`.
pub fn restrict_to_normalizer(
    part: &Partition,
    class: &InsepClass,
    m: &MackeyFunctor,
) -> Result<NormalizerData, MackeyError> {
    check_class_functor(m, class)?;
    let ts = m.transfer_system();
    let lat = ts.lattice().clone();
    let h = class.rep;
    let normalizer = lat.normalizer(h);
    let sub = ts.restrict_to_subgroup(normalizer);
    let nlat = sub.ts.lattice().clone();
    let rep = local_id(&sub, h).expect("H ⊆ N_G(H)");
    let keep = |k: SubgroupId| {
        let e = sub.embed[k.0];
        lat.contains(h, e) && part.class_of(e).rep == h
    };
    let levels: Vec<SubgroupId> = nlat.ids().filter(|&k| keep(k)).collect();
    let zero_unless = |a: SubgroupId, b: SubgroupId, f: &dyn Fn() -> Matrix| {
        if keep(a) && keep(b) {
            f()
        } else {
            let da = if keep(a) { m.dim(sub.embed[a.0]) } else { 0 };
            let db = if keep(b) { m.dim(sub.embed[b.0]) } else { 0 };
            Matrix::zeros(db, da)
        }
    };
    let e = &sub.embed;
    let functor = MackeyFunctor::build(
        &sub.ts,
        Some(rep),
        |k| if keep(k) { m.dim(e[k.0]) } else { 0 },
        |l, k| zero_unless(l, k, &|| m.res(e[l.0], e[k.0]).clone()),
        |k, l| zero_unless(k, l, &|| m.tr(e[k.0], e[l.0]).expect("admissible").clone()),
        |n, l| zero_unless(l, nlat.conj(n, l), &|| m.conj(sub.elems[n], e[l.0]).clone()),
    );
    let internal_transfers = levels
        .iter()
        .flat_map(|&a| levels.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a != b && sub.ts.rel(a, b))
        .collect();
    Ok(NormalizerData {
        normalizer,
        rep,
        levels,
        functor,
        internal_transfers,
        sub,
    })
}

/// Rebuilds the class functor on `G` by transporting the `N`-data along a
/// transversal of `G/N`, together with the levelwise comparison maps to `m`.
pub fn reconstruct(
    class: &InsepClass,
    data: &NormalizerData,
    m: &MackeyFunctor,
) -> (MackeyFunctor, Vec<Matrix>) {
    let ts = m.transfer_system();
    let lat = ts.lattice().clone();
    let g = lat.group().clone();
    let n = data.normalizer;
    let nset = lat.set(n);
    let transversal = lat.cosets_in(lat.top(), n);
    let to_local: Vec<Option<usize>> = g.elements().map(|x| data.sub.elems.iter().position(|&y| y == x)).collect();
    let h = class.rep;
    // every K in the family is t K0 t^-1 with t in the transversal and K0 ⊆ H,
    // uniquely so for class members
    let tomb = |k: SubgroupId| -> (usize, SubgroupId) {
        transversal
            .iter()
            .find_map(|&t| {
                let k0 = lat.conj(g.inv(t), k);
                lat.contains(h, k0).then_some((t, k0))
            })
            .expect("class member is conjugate into H")
    };
    let local = |k0: SubgroupId| local_id(&data.sub, k0).expect("subgroup of N");
    let d = &data.functor;
    let member = |k: SubgroupId| class.members.contains(&k);
    let functor = MackeyFunctor::build(
        ts,
        Some(h),
        |k| d.dim(local(tomb(k).1)),
        |l, k| {
            let (t, l0) = tomb(l);
            d.res(local(l0), local(lat.conj(g.inv(t), k))).clone()
        },
        |k, l| {
            let (t, l0) = tomb(l);
            d.tr(local(lat.conj(g.inv(t), k)), local(l0)).expect("admissible").clone()
        },
        |x, k| {
            let (t, k0) = tomb(k);
            let xt = g.mul(x, t);
            let t2 = *transversal
                .iter()
                .find(|&&t2| nset.contains(g.mul(g.inv(t2), xt)))
                .expect("transversal covers G/N");
            let nn = g.mul(g.inv(t2), xt);
            d.conj(to_local[nn].expect("element of N"), local(k0)).clone()
        },
    );
    let comparison = lat
        .ids()
        .map(|k| {
            if member(k) {
                let (t, k0) = tomb(k);
                m.conj(t, k0).clone()
            } else {
                Matrix::zeros(m.dim(k), 0)
            }
        })
        .collect();
    (functor, comparison)
}

/// Whether the reconstruction from the normalizer data is isomorphic to `m`
/// through the transporting conjugations.
pub fn round_trip(part: &Partition, class: &InsepClass, m: &MackeyFunctor) -> Result<bool, MackeyError> {
    let data = restrict_to_normalizer(part, class, m)?;
    let (rebuilt, cmp) = reconstruct(class, &data, m);
    Ok(rebuilt.is_valid() && cmp.iter().all(Matrix::is_invertible) && is_morphism(&rebuilt, m, &cmp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insep::partition;
    use crate::mackey::induction::class_restriction;
    use crate::mackey::split::split;
    use crate::mackey::{burnside_mackey, represented_mackey};
    use crate::named;
    use crate::transfer::enumerate_all;
    use crate::{SubgroupLattice, TransferSystem};
    use std::sync::Arc;

    fn lat(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(named::parse_named(name).unwrap())))
    }

    #[test]
    fn c8_internal_transfer() {
        let l = lat("cyclic:8");
        let seeds = TransferSystem::parse_pairs(&l, "C1>C2, C1>C4, C1>G, C2>C4").unwrap();
        let ts = TransferSystem::generate(l.clone(), &seeds).unwrap();
        for (sys, expect) in [(ts.clone(), true), (ts.maximal_disklike(), false)] {
            let part = partition(&sys);
            let class = part.class_with_rep(l.top()).unwrap();
            let m = burnside_mackey(&sys);
            let piece = split(&m, &part)
                .unwrap()
                .summands
                .into_iter()
                .find(|s| s.class_rep == class.rep)
                .unwrap();
            let r = class_restriction(&piece.functor, class).unwrap();
            let data = restrict_to_normalizer(&part, class, &r).unwrap();
            let names: Vec<&str> = data.levels.iter().map(|&k| l.label(data.sub.embed[k.0])).collect();
            assert_eq!(names, vec!["C2", "C4", "C8"]);
            assert_eq!(!data.is_coefficient_system(), expect);
            assert!(round_trip(&part, class, &r).unwrap());
        }
    }

    #[test]
    fn complete_system_keeps_one_level() {
        let l = lat("symmetric:3");
        let ts = TransferSystem::complete(l.clone());
        let part = partition(&ts);
        let m = burnside_mackey(&ts);
        for s in split(&m, &part).unwrap().summands {
            let class = part.class_with_rep(s.class_rep).unwrap();
            let r = class_restriction(&s.functor, class).unwrap();
            let data = restrict_to_normalizer(&part, class, &r).unwrap();
            assert_eq!(data.levels, vec![data.rep]);
            assert!(round_trip(&part, class, &r).unwrap());
        }
    }

    #[test]
    fn round_trips_on_sweep() {
        for name in ["symmetric:3", "dihedral:4"] {
            let l = lat(name);
            for ts in enumerate_all(&l).unwrap().iter().step_by(9) {
                let part = partition(ts);
                for k in [l.trivial(), l.top()] {
                    for s in split(&represented_mackey(ts, k), &part).unwrap().summands {
                        let class = part.class_with_rep(s.class_rep).unwrap();
                        let r = class_restriction(&s.functor, class).unwrap();
                        assert!(round_trip(&part, class, &r).unwrap(), "{name}");
                    }
                }
            }
        }
    }
}
