//! Incomplete Burnside rings: admissible orbits at each level, the marks map,
//! primitive idempotents, and restriction and transfer of ring elements.
//!
//! Level `H` computations read the ambient relation on subgroups of `H`
//! directly, which is the restricted transfer system on `H`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::insep::Partition;
use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::linalg::Q;
use crate::orbit::{orbit_product, OrbitSum};
use crate::transfer::{MobiusTable, TransferSystem};

pub type BurnsideElement = OrbitSum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BurnsideError {
    #[error("elements live at different levels {0} and {1}")]
    LevelMismatch(String, String),
    #[error("{0} is not admissible")]
    NotAdmissible(String),
    #[error("no transfer {from} -> {to}")]
    NotAdmissibleTransfer { from: String, to: String },
    #[error("orbit {orbit} at level {level} is not admissible")]
    OutsideBasis { level: String, orbit: String },
    #[error("marks matrix is singular")]
    SingularMarks,
}

fn q_usize(n: usize) -> Q {
    Q::from_integer(n.into())
}

/// Admissible orbits `H/K` (`K → H`), one per `H`-conjugacy class of `K`,
/// sorted by subgroup order then canonical id.
pub fn admissible_basis(ts: &TransferSystem, h: SubgroupId) -> Vec<SubgroupId> {
    let lat = ts.lattice();
    ts.sources(h)
        .into_iter()
        .filter(|&k| lat.rep_under(h, k) == k)
        .collect()
}

pub fn in_admissible_basis(ts: &TransferSystem, x: &BurnsideElement) -> bool {
    x.coeffs.keys().all(|&k| ts.rel(k, x.level))
}

pub fn multiply(lat: &SubgroupLattice, a: &BurnsideElement, b: &BurnsideElement) -> Result<BurnsideElement, BurnsideError> {
    if a.level != b.level {
        return Err(BurnsideError::LevelMismatch(
            lat.label(a.level).into(),
            lat.label(b.level).into(),
        ));
    }
    let mut out = OrbitSum::zero(a.level);
    for (&k, ck) in &a.coeffs {
        for (&l, cl) in &b.coeffs {
            let c = ck * cl;
            for (&m, cm) in &orbit_product(lat, a.level, k, l).coeffs {
                out.add_canonical(m, &c * cm);
            }
        }
    }
    Ok(out)
}

/// `|x^J|` for `x` at level `H` and `J ⊆ H`.
pub fn mark_at(lat: &SubgroupLattice, x: &BurnsideElement, j: SubgroupId) -> Q {
    x.coeffs
        .iter()
        .map(|(&k, c)| c * q_usize(lat.fixed_points_in(x.level, k, j)))
        .sum()
}

/// A conjugation-invariant function, stored on class representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub domain: Vec<SubgroupId>,
    pub values: Vec<Q>,
}

/// The marks of a top-level element on the admissible subgroups, one value per
/// conjugacy class.
pub fn marks(ts: &TransferSystem, x: &BurnsideElement) -> ClassFunction {
    let lat = ts.lattice();
    let domain: Vec<SubgroupId> = ts
        .admissible_to_top()
        .into_iter()
        .filter(|&h| lat.class_rep(h) == h)
        .collect();
    let values = domain.iter().map(|&j| mark_at(lat, x, j)).collect();
    ClassFunction { domain, values }
}

fn require_admissible(ts: &TransferSystem, h: SubgroupId) -> Result<(), BurnsideError> {
    if ts.is_admissible(h) {
        Ok(())
    } else {
        Err(BurnsideError::NotAdmissible(ts.lattice().label(h).into()))
    }
}

/// `e_[H] = Σ_{K → H} |K| / |N_G(H)| · μ(K, H) · G/K`.
pub fn idempotent(ts: &TransferSystem, mu: &MobiusTable, h: SubgroupId) -> Result<BurnsideElement, BurnsideError> {
    require_admissible(ts, h)?;
    let lat = ts.lattice();
    let n = q_usize(lat.order_of(lat.normalizer(h)));
    let mut e = OrbitSum::zero(lat.top());
    for k in ts.sources(h) {
        let m = mu.get(k, h).expect("K -> H");
        e.add_orbit(lat, k, q_usize(lat.order_of(k)) * Q::from_integer(m.into()) / &n);
    }
    Ok(e)
}

/// The element of level `H` whose transfer to `G` is `e_[H]`:
/// `Σ_{K → H} |K| / |N_G(H)| · μ(K, H) · H/K`.
pub fn idempotent_preimage(ts: &TransferSystem, mu: &MobiusTable, h: SubgroupId) -> Result<BurnsideElement, BurnsideError> {
    require_admissible(ts, h)?;
    let lat = ts.lattice();
    let n = q_usize(lat.order_of(lat.normalizer(h)));
    let mut e = OrbitSum::zero(h);
    for k in ts.sources(h) {
        let m = mu.get(k, h).expect("K -> H");
        e.add_orbit(lat, k, q_usize(lat.order_of(k)) * Q::from_integer(m.into()) / &n);
    }
    Ok(e)
}

/// Solves `marks(x) = δ_(H)` by back-substitution over the admissible basis of
/// the top level, largest orbits first.
pub fn idempotent_oracle(ts: &TransferSystem, h: SubgroupId) -> Result<BurnsideElement, BurnsideError> {
    require_admissible(ts, h)?;
    let lat = ts.lattice();
    let top = lat.top();
    let basis = admissible_basis(ts, top);
    let target = lat.class_rep(h);
    let mut x: Vec<Q> = vec![Q::zero(); basis.len()];
    for i in (0..basis.len()).rev() {
        let k = basis[i];
        let mut rhs = if k == target { Q::one() } else { Q::zero() };
        for j in i + 1..basis.len() {
            if !x[j].is_zero() {
                rhs -= &x[j] * q_usize(lat.fixed_point_count(basis[j], k));
            }
        }
        let diag = lat.fixed_point_count(k, k);
        if diag == 0 {
            return Err(BurnsideError::SingularMarks);
        }
        x[i] = rhs / q_usize(diag);
    }
    let mut e = OrbitSum::zero(top);
    for (k, c) in basis.into_iter().zip(x) {
        e.add_canonical(k, c);
    }
    Ok(e)
}

/// Idempotents for every inseparability class, in class order.
pub fn idempotents(ts: &TransferSystem, part: &Partition) -> Vec<(SubgroupId, BurnsideElement)> {
    let mu = ts.mobius();
    part.classes
        .iter()
        .map(|c| (c.rep, idempotent(ts, &mu, c.rep).expect("class reps are admissible")))
        .collect()
}

/// The primitive idempotents `e_(K)` of the complete rational Burnside ring,
/// one per conjugacy class, from the complete table of marks.
pub fn classical_idempotents(lat: &std::sync::Arc<SubgroupLattice>) -> Vec<(SubgroupId, BurnsideElement)> {
    let full = TransferSystem::complete(lat.clone());
    lat.class_reps()
        .into_iter()
        .map(|k| (k, idempotent_oracle(&full, k).expect("complete marks are invertible")))
        .collect()
}

/// Inclusion into the complete Burnside ring; admissible orbits are orbits.
pub fn include_complete(x: &BurnsideElement) -> BurnsideElement {
    x.clone()
}

/// The conjugacy classes `(K)` with `x = Σ e_(K)` in the complete ring, read
/// off the marks. `None` if some mark is neither 0 nor 1.
pub fn complete_image(lat: &SubgroupLattice, x: &BurnsideElement) -> Option<Vec<SubgroupId>> {
    let mut out = Vec::new();
    for k in lat.class_reps() {
        let m = mark_at(lat, x, k);
        if m.is_one() {
            out.push(k);
        } else if !m.is_zero() {
            return None;
        }
    }
    Some(out)
}

/// Checks `G/H = Σ_{K → H} |N_G(K)| / |H| · e_[K]`.
pub fn orbit_sum_identity_check(ts: &TransferSystem, part: &Partition, mu: &MobiusTable, h: SubgroupId) -> bool {
    let lat = ts.lattice();
    if !ts.is_admissible(h) {
        return false;
    }
    let mut rhs = OrbitSum::zero(lat.top());
    for k in ts.sources(h) {
        let rep = part.class_of(k).rep;
        let e = idempotent(ts, mu, rep).expect("admissible");
        rhs = rhs.add(&e.scale(&(q_usize(lat.order_of(lat.normalizer(k))) / q_usize(lat.order_of(h)))));
    }
    rhs == OrbitSum::orbit(lat, lat.top(), h)
}

/// Restriction from level `X` to `L ⊆ X`: `X/K ↦ Σ_{y ∈ L\X/K} L/(L ∩ yKy^-1)`.
pub fn restrict_element(lat: &SubgroupLattice, x: &BurnsideElement, l: SubgroupId) -> BurnsideElement {
    assert!(lat.contains(x.level, l), "restriction target must be a subgroup of the level");
    let mut out = OrbitSum::zero(l);
    for (&k, c) in &x.coeffs {
        for y in lat.double_cosets_in(x.level, l, k) {
            out.add_orbit(lat, lat.meet(l, lat.conj(y, k)), c.clone());
        }
    }
    out
}

/// Transfer from level `H` to `L` along `H → L`: `H/K ↦ L/K`.
pub fn transfer_element(ts: &TransferSystem, x: &BurnsideElement, l: SubgroupId) -> Result<BurnsideElement, BurnsideError> {
    let lat = ts.lattice();
    if !ts.rel(x.level, l) {
        return Err(BurnsideError::NotAdmissibleTransfer {
            from: lat.label(x.level).into(),
            to: lat.label(l).into(),
        });
    }
    let mut out = OrbitSum::zero(l);
    for (&k, c) in &x.coeffs {
        out.add_orbit(lat, k, c.clone());
    }
    Ok(out)
}

/// Conjugation by `g` from level `H` to level `gHg^-1`.
pub fn conj_element(lat: &SubgroupLattice, g: usize, x: &BurnsideElement) -> BurnsideElement {
    let mut out = OrbitSum::zero(lat.conj(g, x.level));
    for (&k, c) in &x.coeffs {
        out.add_orbit(lat, lat.conj(g, k), c.clone());
    }
    out
}

/// Human-readable form such as `C6/C6 - 1/3 C6/C2`.
pub fn format_element(lat: &SubgroupLattice, x: &BurnsideElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let level = lat.label(x.level);
    let mut parts: Vec<(SubgroupId, &Q)> = x.coeffs.iter().map(|(&k, c)| (k, c)).collect();
    parts.sort_by_key(|p| std::cmp::Reverse(p.0));
    let mut s = String::new();
    for (i, (k, c)) in parts.into_iter().enumerate() {
        let neg = *c < Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&format!("{mag} "));
        }
        s.push_str(&format!("{level}/{}", lat.label(k)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insep::partition;
    use crate::linalg::{q, qf};
    use crate::named;
    use std::sync::Arc;

    fn lat(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(named::parse_named(name).unwrap())))
    }

    #[test]
    fn c6_idempotents() {
        let l = lat("cyclic:6");
        let [c1, c2, c3, c6] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l.clone(), &[(c2, c6)]).unwrap();
        let mu = t.mobius();
        let e2 = idempotent(&t, &mu, c2).unwrap();
        let e6 = idempotent(&t, &mu, c6).unwrap();
        assert_eq!(format_element(&l, &e2), "1/3 C6/C2");
        assert_eq!(format_element(&l, &e6), "C6/C6 - 1/3 C6/C2");
        assert_eq!(e2, idempotent_oracle(&t, c2).unwrap());
        assert_eq!(e6, idempotent_oracle(&t, c6).unwrap());
        assert!(restrict_element(&l, &e6, c2).is_zero());
        assert!(restrict_element(&l, &e6, c1).is_zero());
        let r3 = restrict_element(&l, &e6, c3);
        assert_eq!(format_element(&l, &r3), "C3/C3 - 1/3 C3/C1");

        let classical = classical_idempotents(&l);
        let sum = |ks: &[SubgroupId]| {
            ks.iter().fold(OrbitSum::zero(l.top()), |acc, k| {
                acc.add(&classical.iter().find(|(r, _)| r == k).unwrap().1)
            })
        };
        assert_eq!(include_complete(&e2), sum(&[c1, c2]));
        assert_eq!(include_complete(&e6), sum(&[c3, c6]));

        let pre = idempotent_preimage(&t, &mu, c2).unwrap();
        assert_eq!(pre.coeff(c2), qf(1, 3));
        assert_eq!(transfer_element(&t, &pre, c6).unwrap(), e2);
        assert!(transfer_element(&t, &OrbitSum::one(c3), c6).is_err());

        let p = partition(&t);
        assert!(orbit_sum_identity_check(&t, &p, &mu, c2));
        assert!(orbit_sum_identity_check(&t, &p, &mu, c6));
    }

    #[test]
    fn c8_idempotents() {
        let l = lat("cyclic:8");
        let [c1, c2, c4, c8] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l.clone(), &[(c2, c4), (c2, c8)]).unwrap();
        let mu = t.mobius();
        let e8 = idempotent(&t, &mu, c8).unwrap();
        assert_eq!(format_element(&l, &e8), "C8/C8 - 1/4 C8/C2");
        assert_eq!(format_element(&l, &idempotent(&t, &mu, c2).unwrap()), "1/4 C8/C2");
        assert_eq!(format_element(&l, &restrict_element(&l, &e8, c4)), "C4/C4 - 1/2 C4/C2");
        assert!(restrict_element(&l, &e8, c2).is_zero());
        assert!(restrict_element(&l, &e8, c1).is_zero());
    }

    #[test]
    fn products_and_marks() {
        let l = lat("cyclic:6");
        let [_, c2, _, c6] = [0, 1, 2, 3].map(SubgroupId);
        let t = TransferSystem::generate(l.clone(), &[(c2, c6)]).unwrap();
        let x = OrbitSum::orbit(&l, c6, c2);
        let sq = multiply(&l, &x, &x).unwrap();
        assert_eq!(sq, x.scale(&q(3)));
        assert_eq!(multiply(&l, &x, &OrbitSum::one(c6)).unwrap(), x);
        let m = marks(&t, &x);
        assert_eq!(m.domain, vec![c2, c6]);
        assert_eq!(m.values, vec![q(3), q(0)]);
        assert_eq!(marks(&t, &OrbitSum::one(c6)).values, vec![q(1), q(1)]);
        assert!(multiply(&l, &x, &OrbitSum::one(c2)).is_err());
    }

    #[test]
    fn trivial_cases() {
        let l = lat("trivial");
        let t = TransferSystem::trivial(l.clone());
        let e = idempotent(&t, &t.mobius(), l.top()).unwrap();
        assert_eq!(e, OrbitSum::one(l.top()));
        assert_eq!(idempotent_oracle(&t, l.top()).unwrap(), e);

        let l = lat("symmetric:3");
        let t = TransferSystem::trivial(l.clone());
        assert_eq!(idempotent(&t, &t.mobius(), l.top()).unwrap(), OrbitSum::one(l.top()));
        assert!(idempotent(&t, &t.mobius(), SubgroupId(0)).is_err());
    }
}
