//! Brute-force coend and end over spans, as independent checks on the
//! closed forms of induction and coinduction.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::induction::ClassExtension;
use super::MackeyFunctor;
use crate::insep::InsepClass;
use crate::lattice::SubgroupId;
use crate::linalg::{Matrix, Q};
use crate::span::{compose, span_basis, Span};
use crate::transfer::TransferSystem;

/// Result of comparing a closed form with its oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Levels where the oracle and closed form have different dimensions or
    /// the comparison map is singular.
    pub bad_levels: Vec<SubgroupId>,
    /// Structure maps (as `(from, to)`) that fail to commute with the comparison.
    pub bad_maps: Vec<(SubgroupId, SubgroupId)>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.bad_levels.is_empty() && self.bad_maps.is_empty()
    }
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Offsets of `(K, span)` blocks of size `dim M(G/K)` in a free module.
struct Slots {
    offset: BTreeMap<(SubgroupId, Span), usize>,
    total: usize,
}

impl Slots {
    fn new(items: impl IntoIterator<Item = (SubgroupId, Span, usize)>) -> Slots {
        let mut offset = BTreeMap::new();
        let mut total = 0;
        for (k, s, d) in items {
            offset.insert((k, s), total);
            total += d;
        }
        Slots { offset, total }
    }

    fn at(&self, k: SubgroupId, s: &Span) -> usize {
        *self.offset.get(&(k, *s)).expect("span in basis")
    }
}

fn family(ts: &TransferSystem, class: &InsepClass) -> Vec<SubgroupId> {
    let lat = ts.lattice();
    lat.ids().filter(|&k| lat.subconjugate(k, class.rep)).collect()
}

/// Every unit span out of `l` together with its target and the
/// corresponding structure map of `f`.
fn unit_maps(f: &MackeyFunctor) -> Vec<(SubgroupId, SubgroupId, Span, &Matrix)> {
    let lat = f.lattice();
    let mut out = Vec::new();
    for l in lat.ids() {
        for k in lat.subgroups_of(l) {
            out.push((l, k, Span::restriction(lat, l, k), f.res(l, k)));
            if let Some(t) = f.tr(k, l) {
                out.push((k, l, Span::transfer(lat, k, l), t));
            }
        }
        for g in lat.group().elements() {
            let gl = lat.conj(g, l);
            out.push((l, gl, Span::conjugation(lat, g, l), f.conj(g, l)));
        }
    }
    out
}

struct Coend {
    slots: Slots,
    quotient: Matrix,
}

fn coend_level(ts: &TransferSystem, class: &InsepClass, fam: &[SubgroupId], m: &MackeyFunctor, l: SubgroupId) -> Coend {
    let lat = ts.lattice();
    let slots = Slots::new(
        class
            .members
            .iter()
            .flat_map(|&k| span_basis(ts, k, l).into_iter().map(move |b| (k, b, m.dim(k)))),
    );
    let mut rels: Vec<Vec<Q>> = Vec::new();
    for &j in &class.members {
        for &k in fam {
            let k_in = class.members.contains(&k);
            for alpha in span_basis(ts, j, k) {
                let ma = if k_in { Some(m.apply_span(&alpha).expect("admissible span")) } else { None };
                for beta in span_basis(ts, k, l) {
                    let comp = compose(lat, &alpha, &beta);
                    for e in 0..m.dim(j) {
                        let mut v = vec![Q::zero(); slots.total];
                        if let Some(ma) = &ma {
                            let o = slots.at(k, &beta);
                            for r in 0..m.dim(k) {
                                v[o + r] += &ma[(r, e)];
                            }
                        }
                        for (s, mult) in &comp {
                            v[slots.at(j, s) + e] -= qi(*mult);
                        }
                        if v.iter().any(|x| !x.is_zero()) {
                            rels.push(v);
                        }
                    }
                }
            }
        }
    }
    let rel = Matrix::from_fn(slots.total, rels.len(), |r, c| rels[c][r].clone());
    Coend {
        quotient: rel.cokernel_map(),
        slots,
    }
}

/// The map on generators induced by post-composition with `gamma`.
fn post_compose(lat: &crate::SubgroupLattice, m: &MackeyFunctor, from: &Slots, to: &Slots, gamma: &Span) -> Matrix {
    let mut out = Matrix::zeros(to.total, from.total);
    for (&(k, beta), &o) in &from.offset {
        for (s, mult) in compose(lat, &beta, gamma) {
            let o2 = to.at(k, &s);
            for e in 0..m.dim(k) {
                out[(o2 + e, o + e)] += qi(mult);
            }
        }
    }
    out
}

/// Compares the closed-form induction of the class functor `m` with the
/// coend `∫^K A^O(G/K, -) ⊗ M(G/K)` over class members `K`, relations
/// ranging over the whole family.
pub fn coend_check(class: &InsepClass, m: &MackeyFunctor, ind: &ClassExtension) -> OracleReport {
    let ts = m.transfer_system();
    let lat = ts.lattice().clone();
    let fam = family(ts, class);
    let levels: Vec<Coend> = lat.ids().map(|l| coend_level(ts, class, &fam, m, l)).collect();
    // lift of the closed-form basis: block i ↦ B_i b ⊗ (T_i → L)
    let lifts: Vec<Matrix> = lat
        .ids()
        .map(|l| {
            let c = &levels[l.0];
            let mut lift = Matrix::zeros(c.slots.total, ind.functor.dim(l));
            for b in &ind.blocks[l.0] {
                let o = c.slots.at(b.rep, &Span::transfer(&lat, b.rep, l));
                lift.set_block(o, b.offset, &b.basis);
            }
            lift
        })
        .collect();
    let mut report = OracleReport {
        bad_levels: vec![],
        bad_maps: vec![],
    };
    for l in lat.ids() {
        let phi = &levels[l.0].quotient * &lifts[l.0];
        if phi.rows() != phi.cols() || !phi.is_invertible() {
            report.bad_levels.push(l);
        }
    }
    for (a, b, gamma, f) in unit_maps(&ind.functor) {
        let (ca, cb) = (&levels[a.0], &levels[b.0]);
        let g = post_compose(&lat, m, &ca.slots, &cb.slots, &gamma);
        let lhs = &cb.quotient * &(&g * &lifts[a.0]);
        let rhs = &cb.quotient * &(&lifts[b.0] * f);
        if lhs != rhs {
            report.bad_maps.push((a, b));
        }
    }
    report
}

struct End {
    slots: Slots,
    kernel: Matrix,
}

fn end_level(ts: &TransferSystem, class: &InsepClass, fam: &[SubgroupId], m: &MackeyFunctor, l: SubgroupId) -> End {
    let lat = ts.lattice();
    let slots = Slots::new(
        class
            .members
            .iter()
            .flat_map(|&k| span_basis(ts, l, k).into_iter().map(move |b| (k, b, m.dim(k)))),
    );
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for &k in fam {
        let k_in = class.members.contains(&k);
        for &k2 in &class.members {
            for alpha in span_basis(ts, k, k2) {
                let ma = if k_in { Some(m.apply_span(&alpha).expect("admissible span")) } else { None };
                for beta in span_basis(ts, l, k) {
                    let comp = compose(lat, &beta, &alpha);
                    for r in 0..m.dim(k2) {
                        let mut v = vec![Q::zero(); slots.total];
                        for (s, mult) in &comp {
                            v[slots.at(k2, s) + r] += qi(*mult);
                        }
                        if let Some(ma) = &ma {
                            let o = slots.at(k, &beta);
                            for c in 0..m.dim(k) {
                                v[o + c] -= &ma[(r, c)];
                            }
                        }
                        if v.iter().any(|x| !x.is_zero()) {
                            rows.push(v);
                        }
                    }
                }
            }
        }
    }
    let con = Matrix::from_fn(rows.len(), slots.total, |r, c| rows[r][c].clone());
    End {
        kernel: con.nullspace(),
        slots,
    }
}

/// Compares the closed-form coinduction of the class functor `m` with the
/// end of `Hom(A^O(-, G/K), M(G/K))` over the family.
pub fn end_check(class: &InsepClass, m: &MackeyFunctor, coind: &ClassExtension) -> OracleReport {
    let ts = m.transfer_system();
    let lat = ts.lattice().clone();
    let fam = family(ts, class);
    let levels: Vec<End> = lat.ids().map(|l| end_level(ts, class, &fam, m, l)).collect();
    // read off φ_{T_i}(L ← T_i → T_i) in fixed-point coordinates
    let select: Vec<Matrix> = lat
        .ids()
        .map(|l| {
            let e = &levels[l.0];
            let mut sel = Matrix::zeros(coind.functor.dim(l), e.slots.total);
            for b in &coind.blocks[l.0] {
                let o = e.slots.at(b.rep, &Span::restriction(&lat, l, b.rep));
                sel.set_block(b.offset, o, &b.coords);
            }
            sel
        })
        .collect();
    let mut report = OracleReport {
        bad_levels: vec![],
        bad_maps: vec![],
    };
    for l in lat.ids() {
        let psi = &select[l.0] * &levels[l.0].kernel;
        if psi.rows() != psi.cols() || !psi.is_invertible() {
            report.bad_levels.push(l);
        }
    }
    for (a, b, gamma, f) in unit_maps(&coind.functor) {
        let (ea, eb) = (&levels[a.0], &levels[b.0]);
        // (γ^*φ)_K(β) = φ_K(β ∘ γ)
        let mut p = Matrix::zeros(eb.slots.total, ea.slots.total);
        for (&(k, beta), &o) in &eb.slots.offset {
            for (s, mult) in compose(&lat, &gamma, &beta) {
                let o2 = ea.slots.at(k, &s);
                for e in 0..m.dim(k) {
                    p[(o + e, o2 + e)] += qi(mult);
                }
            }
        }
        let moved = &p * &ea.kernel;
        let stays = eb.kernel.spans(&moved);
        let lhs = &select[b.0] * &moved;
        let rhs = f * &(&select[a.0] * &ea.kernel);
        if !stays || lhs != rhs {
            report.bad_maps.push((a, b));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insep::partition;
    use crate::mackey::induction::{class_restriction, coinduct_class, induct_class};
    use crate::mackey::split::split;
    use crate::mackey::{burnside_mackey, represented_mackey};
    use crate::named;
    use crate::transfer::enumerate_all;
    use crate::SubgroupLattice;
    use std::sync::Arc;

    fn lat(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(named::parse_named(name).unwrap())))
    }

    #[test]
    fn c6_abelian_instance() {
        // [C2] for C2 → C6 on C6: Ind at C6 is the C3-coinvariants of M(C6/C2)
        let l = lat("cyclic:6");
        let seeds = TransferSystem::parse_pairs(&l, "C2>G").unwrap();
        let ts = TransferSystem::generate(l.clone(), &seeds).unwrap();
        let part = partition(&ts);
        let class = part.class_with_rep(l.parse_subgroup("C2").unwrap()).unwrap();
        let m = burnside_mackey(&ts);
        let piece = split(&m, &part)
            .unwrap()
            .summands
            .into_iter()
            .find(|s| s.class_rep == class.rep)
            .unwrap();
        let r = class_restriction(&piece.functor, class).unwrap();
        let ind = induct_class(&part, class, &r).unwrap();
        assert_eq!(ind.functor.dim(l.top()), r.dim(l.parse_subgroup("C2").unwrap()));
        assert!(coend_check(class, &r, &ind).agrees());
        let co = coinduct_class(&part, class, &r).unwrap();
        assert!(end_check(class, &r, &co).agrees());
    }

    #[test]
    fn oracles_agree_on_small_sweeps() {
        for name in ["symmetric:3", "cyclic:4", "klein"] {
            let l = lat(name);
            for ts in enumerate_all(&l).unwrap() {
                let part = partition(&ts);
                let mut inputs = vec![burnside_mackey(&ts)];
                inputs.extend(l.class_reps().into_iter().map(|k| represented_mackey(&ts, k)));
                for m in &inputs {
                    for s in split(m, &part).unwrap().summands {
                        let class = part.class_with_rep(s.class_rep).unwrap();
                        let r = class_restriction(&s.functor, class).unwrap();
                        let ind = induct_class(&part, class, &r).unwrap();
                        let rep = coend_check(class, &r, &ind);
                        assert!(rep.agrees(), "{name} {rep:?}");
                        let co = coinduct_class(&part, class, &r).unwrap();
                        let rep = end_check(class, &r, &co);
                        assert!(rep.agrees(), "{name} {rep:?}");
                    }
                }
            }
        }
    }
}
