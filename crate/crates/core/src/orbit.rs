//! Formal rational combinations of orbits `H/K` at a fixed level `H`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::linalg::Q;

/// `Σ c_K · H/K`, keyed by the least `H`-conjugate of each `K`. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitSum {
    pub level: SubgroupId,
    pub coeffs: BTreeMap<SubgroupId, Q>,
}

impl OrbitSum {
    pub fn zero(level: SubgroupId) -> Self {
        OrbitSum {
            level,
            coeffs: BTreeMap::new(),
        }
    }

    /// The orbit `H/K` with coefficient one.
    pub fn orbit(lat: &SubgroupLattice, level: SubgroupId, k: SubgroupId) -> Self {
        let mut s = Self::zero(level);
        s.add_orbit(lat, k, Q::one());
        s
    }

    /// The unit `H/H`.
    pub fn one(level: SubgroupId) -> Self {
        let mut s = Self::zero(level);
        s.coeffs.insert(level, Q::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: SubgroupId) -> Q {
        self.coeffs.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c · H/K`, normalizing `K` to its canonical `H`-conjugate.
    pub fn add_orbit(&mut self, lat: &SubgroupLattice, k: SubgroupId, c: Q) {
        debug_assert!(lat.contains(self.level, k));
        let key = lat.rep_under(self.level, k);
        self.add_canonical(key, c);
    }

    /// Adds `c · H/K` where `K` is already canonical.
    pub fn add_canonical(&mut self, key: SubgroupId, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &OrbitSum) -> OrbitSum {
        assert_eq!(self.level, other.level, "level mismatch");
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_canonical(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &OrbitSum) -> OrbitSum {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> OrbitSum {
        let mut out = OrbitSum::zero(self.level);
        if !s.is_zero() {
            for (&k, c) in &self.coeffs {
                out.coeffs.insert(k, c * s);
            }
        }
        out
    }

    /// Cardinality of the virtual `H`-set.
    pub fn cardinality(&self, lat: &SubgroupLattice) -> Q {
        let h = lat.order_of(self.level) as i64;
        self.coeffs
            .iter()
            .map(|(&k, c)| c * Q::from_integer((h / lat.order_of(k) as i64).into()))
            .sum()
    }
}

/// `H/K × H/L = Σ_{x ∈ K\H/L} H/(K ∩ xLx^-1)`.
pub fn orbit_product(lat: &SubgroupLattice, h: SubgroupId, k: SubgroupId, l: SubgroupId) -> OrbitSum {
    let mut out = OrbitSum::zero(h);
    for x in lat.double_cosets_in(h, k, l) {
        out.add_orbit(lat, lat.meet(k, lat.conj(x, l)), Q::one());
    }
    out
}
