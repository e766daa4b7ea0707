use std::collections::BTreeMap;

use super::MackeyFunctor;
use crate::burnside::{admissible_basis, conj_element, restrict_element, transfer_element, BurnsideElement};
use crate::lattice::SubgroupId;
use crate::linalg::{Matrix, Q};
use crate::span::{compose, span_basis, Span};
use crate::transfer::TransferSystem;

/// The admissible orbits at level `H`, largest first, so that `H/H` leads.
pub fn orbit_basis(ts: &TransferSystem, h: SubgroupId) -> Vec<SubgroupId> {
    let mut b = admissible_basis(ts, h);
    b.reverse();
    b
}

/// Coordinates of a Burnside element in the orbit basis of its level.
pub fn burnside_coords(ts: &TransferSystem, x: &BurnsideElement) -> Vec<Q> {
    let basis = orbit_basis(ts, x.level);
    debug_assert!(x.coeffs.keys().all(|k| basis.contains(k)), "element leaves the admissible basis");
    basis.iter().map(|&k| x.coeff(k)).collect()
}

/// The Burnside element at `level` with the given orbit-basis coordinates.
pub fn burnside_element(ts: &TransferSystem, level: SubgroupId, v: &[Q]) -> BurnsideElement {
    let mut out = BurnsideElement::zero(level);
    for (&k, c) in orbit_basis(ts, level).iter().zip(v) {
        out.add_canonical(k, c.clone());
    }
    out
}

fn columns(rows: usize, cols: Vec<Vec<Q>>) -> Matrix {
    Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
}

/// The Burnside Mackey functor: level `H` is the span of admissible orbits
/// `H/K`, with restriction by double cosets, transfer by inducing orbits and
/// conjugation by conjugating stabilizers.
pub fn burnside_mackey(ts: &TransferSystem) -> MackeyFunctor {
    let lat = ts.lattice().clone();
    let bases: Vec<Vec<SubgroupId>> = lat.ids().map(|h| orbit_basis(ts, h)).collect();
    let orbit = |h: SubgroupId, i: usize| BurnsideElement::orbit(&lat, h, bases[h.0][i]);
    MackeyFunctor::build(
        ts,
        None,
        |h| bases[h.0].len(),
        |l, k| {
            let cols = (0..bases[l.0].len())
                .map(|i| burnside_coords(ts, &restrict_element(&lat, &orbit(l, i), k)))
                .collect();
            columns(bases[k.0].len(), cols)
        },
        |k, l| {
            let cols = (0..bases[k.0].len())
                .map(|i| burnside_coords(ts, &transfer_element(ts, &orbit(k, i), l).expect("admissible")))
                .collect();
            columns(bases[l.0].len(), cols)
        },
        |g, l| {
            let gl = lat.conj(g, l);
            let cols = (0..bases[l.0].len())
                .map(|i| burnside_coords(ts, &conj_element(&lat, g, &orbit(l, i))))
                .collect();
            columns(bases[gl.0].len(), cols)
        },
    )
}

/// The functor `A^O(G/K, -)`: level `L` is spanned by isomorphism classes of
/// admissible spans `G/K → G/L`, and structure maps post-compose.
pub fn represented_mackey(ts: &TransferSystem, k: SubgroupId) -> MackeyFunctor {
    let lat = ts.lattice().clone();
    let bases: Vec<Vec<Span>> = lat.ids().map(|l| span_basis(ts, k, l)).collect();
    let index: Vec<BTreeMap<Span, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, s)| (*s, i)).collect())
        .collect();
    let post = |from: SubgroupId, to: SubgroupId, unit: Span| {
        let mut m = Matrix::zeros(bases[to.0].len(), bases[from.0].len());
        for (c, alpha) in bases[from.0].iter().enumerate() {
            for (s, mult) in compose(&lat, alpha, &unit) {
                let r = *index[to.0].get(&s).expect("composite of admissible spans is admissible");
                m[(r, c)] += Q::from_integer(mult.into());
            }
        }
        m
    };
    MackeyFunctor::build(
        ts,
        None,
        |l| bases[l.0].len(),
        |l, j| post(l, j, Span::restriction(&lat, l, j)),
        |j, l| post(j, l, Span::transfer(&lat, j, l)),
        |g, l| post(l, lat.conj(g, l), Span::conjugation(&lat, g, l)),
    )
}
