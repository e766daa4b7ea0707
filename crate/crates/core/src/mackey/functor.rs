use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::linalg::Matrix;
use crate::span::Span;
use crate::transfer::TransferSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MackeyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("missing structure map: {0}")]
    MissingMap(String),
    #[error("orbit {orbit} at level {level} acts through a transfer that does not exist")]
    InadmissibleAction { level: String, orbit: String },
    #[error("not a class functor: {0}")]
    NotClassFunctor(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

/// A failed Mackey-functor axiom, with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MackeyViolation {
    ResIdentity { l: SubgroupId },
    TrIdentity { l: SubgroupId },
    ResComposition { l: SubgroupId, k: SubgroupId, j: SubgroupId },
    TrComposition { j: SubgroupId, k: SubgroupId, l: SubgroupId },
    ConjAction { g: usize, h: usize, l: SubgroupId },
    ConjInner { l: SubgroupId, x: usize },
    ConjRes { g: usize, l: SubgroupId, k: SubgroupId },
    ConjTr { g: usize, k: SubgroupId, l: SubgroupId },
    DoubleCoset { l: SubgroupId, j: SubgroupId, k: SubgroupId },
}

impl MackeyViolation {
    pub fn describe(&self, lat: &SubgroupLattice) -> String {
        let n = |s: &SubgroupId| lat.label(*s).to_string();
        let e = |g: &usize| lat.group().name(*g).to_string();
        match self {
            MackeyViolation::ResIdentity { l } => format!("res from {0} to {0} is not the identity", n(l)),
            MackeyViolation::TrIdentity { l } => format!("tr from {0} to {0} is not the identity", n(l)),
            MackeyViolation::ResComposition { l, k, j } => {
                format!("res {}->{} after res {}->{} differs from res {0}->{3}", n(k), n(j), n(l), n(k))
            }
            MackeyViolation::TrComposition { j, k, l } => {
                format!("tr {}->{} after tr {}->{} differs from tr {3}->{1}", n(k), n(l), n(j), n(k))
            }
            MackeyViolation::ConjAction { g, h, l } => {
                format!("conjugation by {} then {} on {} is not conjugation by the product", e(h), e(g), n(l))
            }
            MackeyViolation::ConjInner { l, x } => format!("{} in {} does not act trivially", e(x), n(l)),
            MackeyViolation::ConjRes { g, l, k } => {
                format!("conjugation by {} does not commute with res {}->{}", e(g), n(l), n(k))
            }
            MackeyViolation::ConjTr { g, k, l } => {
                format!("conjugation by {} does not commute with tr {}->{}", e(g), n(k), n(l))
            }
            MackeyViolation::DoubleCoset { l, j, k } => format!(
                "double coset formula fails for res {}->{} after tr {}->{0}",
                n(l),
                n(k),
                n(j)
            ),
        }
    }
}

/// Levelwise spaces `M(G/H)` with restrictions for every inclusion, transfers
/// for every admissible pair, and conjugations for every element.
///
/// Conventions: `res(L, K): M(G/L) → M(G/K)`, `tr(K, L): M(G/K) → M(G/L)`,
/// `conj(g, L): M(G/L) → M(G/gLg^-1)`. A family functor only carries data on
/// subgroups subconjugate to its family subgroup; all other levels are zero.
#[derive(Clone)]
pub struct MackeyFunctor {
    ts: TransferSystem,
    family: Option<SubgroupId>,
    dims: Vec<usize>,
    res: Vec<Option<Matrix>>,
    tr: Vec<Option<Matrix>>,
    conj: Vec<Matrix>,
}

impl fmt::Debug for MackeyFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lat = self.ts.lattice();
        let dims: BTreeMap<&str, usize> = lat.ids().map(|h| (lat.label(h), self.dims[h.0])).collect();
        f.debug_struct("MackeyFunctor")
            .field("ts", &self.ts)
            .field("family", &self.family.map(|h| lat.label(h)))
            .field("dims", &dims)
            .finish()
    }
}

impl PartialEq for MackeyFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.ts == other.ts
            && self.family == other.family
            && self.dims == other.dims
            && self.res == other.res
            && self.tr == other.tr
            && self.conj == other.conj
    }
}

impl MackeyFunctor {
    /// Builds a functor by evaluating the structure maps on every in-family
    /// instance. Out-of-family levels get dimension zero.
    pub fn build(
        ts: &TransferSystem,
        family: Option<SubgroupId>,
        dims: impl Fn(SubgroupId) -> usize,
        mut res: impl FnMut(SubgroupId, SubgroupId) -> Matrix,
        mut tr: impl FnMut(SubgroupId, SubgroupId) -> Matrix,
        mut conj: impl FnMut(usize, SubgroupId) -> Matrix,
    ) -> MackeyFunctor {
        let lat = ts.lattice().clone();
        let n = lat.len();
        let in_family = |k: SubgroupId| family.is_none_or(|h| lat.subconjugate(k, h));
        let dims: Vec<usize> = lat.ids().map(|h| if in_family(h) { dims(h) } else { 0 }).collect();
        let mut res_v = vec![None; n * n];
        let mut tr_v = vec![None; n * n];
        for l in lat.ids() {
            for k in lat.subgroups_of(l) {
                let m = if in_family(l) { res(l, k) } else { Matrix::zeros(dims[k.0], dims[l.0]) };
                res_v[l.0 * n + k.0] = Some(m);
                if ts.rel(k, l) {
                    let m = if in_family(l) { tr(k, l) } else { Matrix::zeros(dims[l.0], dims[k.0]) };
                    tr_v[k.0 * n + l.0] = Some(m);
                }
            }
        }
        let mut conj_v = Vec::with_capacity(lat.group().order() * n);
        for g in lat.group().elements() {
            for l in lat.ids() {
                let gl = lat.conj(g, l);
                conj_v.push(if in_family(l) { conj(g, l) } else { Matrix::zeros(dims[gl.0], dims[l.0]) });
            }
        }
        let out = MackeyFunctor {
            ts: ts.clone(),
            family,
            dims,
            res: res_v,
            tr: tr_v,
            conj: conj_v,
        };
        if let Err(e) = out.check_shapes() {
            panic!("structure map has the wrong shape: {e}");
        }
        out
    }

    /// Assembles a functor from explicit map tables, as read from a file.
    /// Identity restrictions and transfers may be omitted; conjugations need
    /// only be given for a generating set of elements and are extended by
    /// composition.
    pub fn from_tables(
        ts: &TransferSystem,
        family: Option<SubgroupId>,
        dims: Vec<usize>,
        res: BTreeMap<(SubgroupId, SubgroupId), Matrix>,
        tr: BTreeMap<(SubgroupId, SubgroupId), Matrix>,
        conj: BTreeMap<(usize, SubgroupId), Matrix>,
    ) -> Result<MackeyFunctor, MackeyError> {
        let lat = ts.lattice().clone();
        let n = lat.len();
        let g = lat.group().clone();
        if dims.len() != n {
            return Err(MackeyError::DimensionMismatch(format!("{} levels given, lattice has {n}", dims.len())));
        }
        let in_family = |k: SubgroupId| family.is_none_or(|h| lat.subconjugate(k, h));
        for k in lat.ids() {
            if !in_family(k) && dims[k.0] != 0 {
                return Err(MackeyError::DimensionMismatch(format!(
                    "level {} is outside the family but has dimension {}",
                    lat.label(k),
                    dims[k.0]
                )));
            }
        }
        let mut res_v = vec![None; n * n];
        let mut tr_v = vec![None; n * n];
        for l in lat.ids() {
            for k in lat.subgroups_of(l) {
                let m = match res.get(&(l, k)) {
                    Some(m) => m.clone(),
                    None if k == l => Matrix::identity(dims[l.0]),
                    None if !in_family(l) || dims[l.0] == 0 || dims[k.0] == 0 => Matrix::zeros(dims[k.0], dims[l.0]),
                    None => return Err(MackeyError::MissingMap(format!("res {}>{}", lat.label(l), lat.label(k)))),
                };
                res_v[l.0 * n + k.0] = Some(m);
                if ts.rel(k, l) {
                    let m = match tr.get(&(k, l)) {
                        Some(m) => m.clone(),
                        None if k == l => Matrix::identity(dims[l.0]),
                        None if !in_family(l) || dims[l.0] == 0 || dims[k.0] == 0 => {
                            Matrix::zeros(dims[l.0], dims[k.0])
                        }
                        None => {
                            return Err(MackeyError::MissingMap(format!("tr {}>{}", lat.label(k), lat.label(l))))
                        }
                    };
                    tr_v[k.0 * n + l.0] = Some(m);
                }
            }
        }
        for &(k, l) in tr.keys() {
            if !ts.rel(k, l) {
                return Err(MackeyError::Inconsistent(format!(
                    "transfer {}>{} is not in the transfer system",
                    lat.label(k),
                    lat.label(l)
                )));
            }
        }
        // extend conjugations from the given elements by composition
        let mut known: Vec<Option<Vec<Matrix>>> = vec![None; g.order()];
        known[0] = Some(lat.ids().map(|l| Matrix::identity(dims[l.0])).collect());
        let mut given: Vec<usize> = conj.keys().map(|&(x, _)| x).collect();
        given.sort_unstable();
        given.dedup();
        if given.is_empty() {
            // nothing listed: fine exactly when every level is zero
            given = g.generators();
        }
        let level_map = |x: usize, l: SubgroupId| -> Result<Matrix, MackeyError> {
            match conj.get(&(x, l)) {
                Some(m) => Ok(m.clone()),
                None if dims[l.0] == 0 => Ok(Matrix::zeros(dims[lat.conj(x, l).0], 0)),
                None => Err(MackeyError::MissingMap(format!("conj {},{}", g.name(x), lat.label(l)))),
            }
        };
        for &x in &given {
            known[x] = Some(lat.ids().map(|l| level_map(x, l)).collect::<Result<_, _>>()?);
        }
        let mut frontier: Vec<usize> = (0..g.order()).filter(|&x| known[x].is_some()).collect();
        while let Some(h) = frontier.pop() {
            for &s in &given {
                let sh = g.mul(s, h);
                if known[sh].is_some() {
                    continue;
                }
                let ch = known[h].as_ref().expect("reached");
                let cs = known[s].as_ref().expect("given");
                let maps: Vec<Matrix> = lat.ids().map(|l| &cs[lat.conj(h, l).0] * &ch[l.0]).collect();
                known[sh] = Some(maps);
                frontier.push(sh);
            }
        }
        let mut conj_v = Vec::with_capacity(g.order() * n);
        for x in g.elements() {
            let maps = known[x].take().ok_or_else(|| {
                MackeyError::MissingMap(format!("conjugation by {} is not generated by the given elements", g.name(x)))
            })?;
            conj_v.extend(maps);
        }
        let out = MackeyFunctor {
            ts: ts.clone(),
            family,
            dims,
            res: res_v,
            tr: tr_v,
            conj: conj_v,
        };
        out.check_shapes()?;
        Ok(out)
    }

    /// The zero functor.
    pub fn zero(ts: &TransferSystem) -> MackeyFunctor {
        Self::build(
            ts,
            None,
            |_| 0,
            |_, _| Matrix::zeros(0, 0),
            |_, _| Matrix::zeros(0, 0),
            |_, _| Matrix::zeros(0, 0),
        )
    }

    fn check_shapes(&self) -> Result<(), MackeyError> {
        let lat = self.lattice();
        let d = &self.dims;
        let shape = |m: &Matrix, rows: usize, cols: usize, what: String| {
            if m.shape() == (rows, cols) {
                Ok(())
            } else {
                Err(MackeyError::DimensionMismatch(format!(
                    "{what} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )))
            }
        };
        for l in lat.ids() {
            for k in lat.subgroups_of(l) {
                shape(self.res(l, k), d[k.0], d[l.0], format!("res {}>{}", lat.label(l), lat.label(k)))?;
                if let Some(t) = self.tr(k, l) {
                    shape(t, d[l.0], d[k.0], format!("tr {}>{}", lat.label(k), lat.label(l)))?;
                }
            }
            for g in lat.group().elements() {
                let gl = lat.conj(g, l);
                shape(
                    self.conj(g, l),
                    d[gl.0],
                    d[l.0],
                    format!("conj {},{}", lat.group().name(g), lat.label(l)),
                )?;
            }
        }
        Ok(())
    }

    pub fn transfer_system(&self) -> &TransferSystem {
        &self.ts
    }

    pub fn lattice(&self) -> &std::sync::Arc<SubgroupLattice> {
        self.ts.lattice()
    }

    pub fn family(&self) -> Option<SubgroupId> {
        self.family
    }

    pub fn in_family(&self, k: SubgroupId) -> bool {
        self.family.is_none_or(|h| self.lattice().subconjugate(k, h))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, h: SubgroupId) -> usize {
        self.dims[h.0]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// `res^L_K`.
    pub fn res(&self, l: SubgroupId, k: SubgroupId) -> &Matrix {
        self.res[l.0 * self.dims.len() + k.0]
            .as_ref()
            .expect("restriction along an inclusion")
    }

    /// `tr^L_K`, when `K → L`.
    pub fn tr(&self, k: SubgroupId, l: SubgroupId) -> Option<&Matrix> {
        self.tr[k.0 * self.dims.len() + l.0].as_ref()
    }

    /// `c_g: M(G/L) → M(G/gLg^-1)`.
    pub fn conj(&self, g: usize, l: SubgroupId) -> &Matrix {
        &self.conj[g * self.dims.len() + l.0]
    }

    /// The map induced by a basic span: `c_{y^-1} ∘ tr ∘ res`.
    pub fn apply_span(&self, s: &Span) -> Result<Matrix, MackeyError> {
        let lat = self.lattice();
        let t = s.target_stabilizer(lat);
        let tr = self.tr(s.apex, t).ok_or_else(|| MackeyError::InadmissibleAction {
            level: lat.label(t).into(),
            orbit: lat.label(s.apex).into(),
        })?;
        let y_inv = lat.group().inv(s.y);
        Ok(&(self.conj(y_inv, t) * tr) * self.res(s.src, s.apex))
    }

    /// Checks every axiom instance inside the family.
    pub fn validate(&self) -> Vec<MackeyViolation> {
        let lat = self.lattice().clone();
        let g = lat.group().clone();
        let fam: Vec<SubgroupId> = lat.ids().filter(|&k| self.in_family(k)).collect();
        let mut out = Vec::new();
        for &l in &fam {
            if !self.res(l, l).is_identity() {
                out.push(MackeyViolation::ResIdentity { l });
            }
            if !self.tr(l, l).is_some_and(Matrix::is_identity) {
                out.push(MackeyViolation::TrIdentity { l });
            }
            for k in lat.subgroups_of(l) {
                for j in lat.subgroups_of(k) {
                    if &(self.res(k, j) * self.res(l, k)) != self.res(l, j) {
                        out.push(MackeyViolation::ResComposition { l, k, j });
                    }
                    if let (Some(a), Some(b)) = (self.tr(j, k), self.tr(k, l)) {
                        if Some(&(b * a)) != self.tr(j, l) {
                            out.push(MackeyViolation::TrComposition { j, k, l });
                        }
                    }
                }
            }
            for x in lat.set(l).iter() {
                if !self.conj(x, l).is_identity() {
                    out.push(MackeyViolation::ConjInner { l, x });
                }
            }
            'action: for a in g.elements() {
                for b in g.elements() {
                    let lhs = self.conj(a, lat.conj(b, l)) * self.conj(b, l);
                    if &lhs != self.conj(g.mul(a, b), l) {
                        out.push(MackeyViolation::ConjAction { g: a, h: b, l });
                        break 'action;
                    }
                }
            }
            for a in g.elements() {
                let al = lat.conj(a, l);
                for k in lat.subgroups_of(l) {
                    let ak = lat.conj(a, k);
                    if self.conj(a, k) * self.res(l, k) != self.res(al, ak) * self.conj(a, l) {
                        out.push(MackeyViolation::ConjRes { g: a, l, k });
                    }
                    if let Some(t) = self.tr(k, l) {
                        let t2 = self.tr(ak, al).expect("conjugation closure");
                        if self.conj(a, l) * t != t2 * self.conj(a, k) {
                            out.push(MackeyViolation::ConjTr { g: a, k, l });
                        }
                    }
                }
            }
            // res^L_K tr^L_J = Σ_{x ∈ K\L/J} tr^K_{K∩xJx^-1} c_x res^J_{J∩x^-1Kx}
            for j in lat.subgroups_of(l) {
                let Some(t) = self.tr(j, l) else { continue };
                for k in lat.subgroups_of(l) {
                    let lhs = self.res(l, k) * t;
                    let mut rhs = Matrix::zeros(self.dims[k.0], self.dims[j.0]);
                    for x in lat.double_cosets_in(l, k, j) {
                        let xi = g.inv(x);
                        let inner = lat.meet(j, lat.conj(xi, k));
                        let outer = lat.conj(x, inner);
                        let tr_o = self.tr(outer, k).expect("restriction closure");
                        rhs = &rhs + &(&(tr_o * self.conj(x, inner)) * self.res(j, inner));
                    }
                    if lhs != rhs {
                        out.push(MackeyViolation::DoubleCoset { l, j, k });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Forgets all levels outside the family of subgroups subconjugate to `h`.
    pub fn restrict_to_family(&self, h: SubgroupId) -> MackeyFunctor {
        let lat = self.lattice().clone();
        let fam = |k: SubgroupId| lat.subconjugate(k, h);
        MackeyFunctor::build(
            &self.ts,
            Some(h),
            |k| if fam(k) { self.dims[k.0] } else { 0 },
            |l, k| self.res(l, k).clone(),
            |k, l| self.tr(k, l).expect("admissible").clone(),
            |g, l| self.conj(g, l).clone(),
        )
    }

    /// Keeps only the levels in `members` (within the family of `h`), zeroing
    /// every other level and every map touching one.
    pub fn restrict_to_levels(&self, h: SubgroupId, members: &[SubgroupId]) -> MackeyFunctor {
        let keep = |k: SubgroupId| members.contains(&k);
        let zero_unless = |a: SubgroupId, b: SubgroupId, m: &Matrix| {
            if keep(a) && keep(b) {
                m.clone()
            } else {
                Matrix::zeros(if keep(b) { self.dims[b.0] } else { 0 }, if keep(a) { self.dims[a.0] } else { 0 })
            }
        };
        let lat = self.lattice().clone();
        MackeyFunctor::build(
            &self.ts,
            Some(h),
            |k| if keep(k) { self.dims[k.0] } else { 0 },
            |l, k| zero_unless(l, k, self.res(l, k)),
            |k, l| zero_unless(k, l, self.tr(k, l).expect("admissible")),
            |g, l| zero_unless(l, lat.conj(g, l), self.conj(g, l)),
        )
    }

    /// Replaces the transfer system by a smaller one, dropping transfers.
    pub fn forget_transfers(&self, smaller: &TransferSystem) -> MackeyFunctor {
        assert!(smaller.is_subsystem_of(&self.ts));
        MackeyFunctor::build(
            smaller,
            self.family,
            |k| self.dims[k.0],
            |l, k| self.res(l, k).clone(),
            |k, l| self.tr(k, l).expect("admissible in the larger system").clone(),
            |g, l| self.conj(g, l).clone(),
        )
    }

    /// Levelwise direct sum.
    pub fn direct_sum(parts: &[MackeyFunctor]) -> MackeyFunctor {
        let first = &parts[0];
        MackeyFunctor::build(
            &first.ts,
            first.family,
            |k| parts.iter().map(|p| p.dims[k.0]).sum(),
            |l, k| Matrix::block_diag(&parts.iter().map(|p| p.res(l, k).clone()).collect::<Vec<_>>()),
            |k, l| Matrix::block_diag(&parts.iter().map(|p| p.tr(k, l).expect("admissible").clone()).collect::<Vec<_>>()),
            |g, l| Matrix::block_diag(&parts.iter().map(|p| p.conj(g, l).clone()).collect::<Vec<_>>()),
        )
    }

    /// Every structure map as `(source level, target level, matrix)`, used for
    /// morphism checks.
    pub fn structure_maps(&self) -> Vec<(SubgroupId, SubgroupId, &Matrix)> {
        let lat = self.lattice();
        let mut out = Vec::new();
        for l in lat.ids().filter(|&l| self.in_family(l)) {
            for k in lat.subgroups_of(l) {
                out.push((l, k, self.res(l, k)));
                if let Some(t) = self.tr(k, l) {
                    out.push((k, l, t));
                }
            }
            for g in lat.group().elements() {
                out.push((l, lat.conj(g, l), self.conj(g, l)));
            }
        }
        out
    }
}

/// Whether levelwise maps `f[L]: M(G/L) → N(G/L)` commute with all structure maps.
pub fn is_morphism(m: &MackeyFunctor, n: &MackeyFunctor, f: &[Matrix]) -> bool {
    let ms = m.structure_maps();
    let ns = n.structure_maps();
    ms.len() == ns.len()
        && ms
            .iter()
            .zip(&ns)
            .all(|(&(a, b, x), &(a2, b2, y))| a == a2 && b == b2 && &f[b.0] * x == y * &f[a.0])
}
