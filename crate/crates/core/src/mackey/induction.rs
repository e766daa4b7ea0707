//! Induction and coinduction from an inseparability class, by their closed
//! formulas, together with the counit, unit and Frobenius comparison.
//!
//! At a level `L` above the class, the maximal class members `T` inside `L`
//! (the subgroups `L ∩ gHg^-1` lying in the class) fall into `L`-orbits with
//! representatives `T_1, …, T_r`. Induction is `⊕ M(G/T_i)` coinvariants
//! under `N_L(T_i)`, coinduction the corresponding fixed points.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::functor::is_morphism;
use super::{MackeyError, MackeyFunctor};
use crate::insep::{is_above, top_set, InsepClass, Partition};
use crate::lattice::{SubgroupId, SubgroupLattice};
use crate::linalg::{Matrix, Q};

/// One summand of an induced or coinduced level.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    /// The class member `T_i` indexing the summand.
    pub rep: SubgroupId,
    /// `N_L(T_i)`.
    pub normalizer: SubgroupId,
    /// Columns in `M(G/T_i)`: a basis of the image of averaging (induction)
    /// or of the fixed points (coinduction).
    pub basis: Matrix,
    /// Coordinates with respect to `basis`: the quotient map for induction,
    /// a left inverse for coinduction.
    pub coords: Matrix,
    pub offset: usize,
}

/// An induced or coinduced functor with its block decomposition per level.
#[derive(Clone, Debug)]
pub struct ClassExtension {
    pub functor: MackeyFunctor,
    pub blocks: Vec<Vec<Block>>,
}

impl ClassExtension {
    /// Embeds the `i`-th block of level `l` as columns (`basis dim × total`)
    /// or rows, depending on the side of the multiplication.
    fn block_cols(&self, l: SubgroupId, i: usize, m: &Matrix) -> Matrix {
        let b = &self.blocks[l.0][i];
        let mut out = Matrix::zeros(m.rows(), self.functor.dim(l));
        out.set_block(0, b.offset, m);
        out
    }

    fn block_rows(&self, l: SubgroupId, i: usize, m: &Matrix) -> Matrix {
        let b = &self.blocks[l.0][i];
        let mut out = Matrix::zeros(self.functor.dim(l), m.cols());
        out.set_block(b.offset, 0, m);
        out
    }
}

/// Restricts a functor vanishing off the levels above the class to the
/// family of the class representative, where only class levels survive.
pub fn class_restriction(m: &MackeyFunctor, class: &InsepClass) -> Result<MackeyFunctor, MackeyError> {
    check_above_class(m, class)?;
    Ok(m.restrict_to_levels(class.rep, &class.members))
}

/// Fails unless `m` vanishes off the class.
pub fn check_class_functor(m: &MackeyFunctor, class: &InsepClass) -> Result<(), MackeyError> {
    let lat = m.lattice();
    for k in lat.ids() {
        if m.dim(k) > 0 && !class.members.contains(&k) {
            return Err(MackeyError::NotClassFunctor(format!(
                "level {} has dimension {} but lies outside the class of {}",
                lat.label(k),
                m.dim(k),
                lat.label(class.rep)
            )));
        }
    }
    Ok(())
}

/// Fails unless `m` vanishes at every level not above the class.
pub fn check_above_class(m: &MackeyFunctor, class: &InsepClass) -> Result<(), MackeyError> {
    let lat = m.lattice();
    for k in lat.ids() {
        if m.dim(k) > 0 && !is_above(lat, k, class) {
            return Err(MackeyError::NotClassFunctor(format!(
                "level {} has dimension {} but is not above the class of {}",
                lat.label(k),
                m.dim(k),
                lat.label(class.rep)
            )));
        }
    }
    Ok(())
}

/// The top-set orbits at one level.
struct Tops {
    reps: Vec<SubgroupId>,
    normalizers: Vec<SubgroupId>,
    /// Every member `T'` with `(i, a)`, `a ∈ L`, `a T_i a^-1 = T'`.
    locate: BTreeMap<SubgroupId, (usize, usize)>,
}

struct ClassData<'a> {
    m: &'a MackeyFunctor,
    part: &'a Partition,
    class: &'a InsepClass,
    lat: Arc<SubgroupLattice>,
    tops: Vec<Tops>,
}

impl<'a> ClassData<'a> {
    fn new(m: &'a MackeyFunctor, part: &'a Partition, class: &'a InsepClass) -> Self {
        let ts = m.transfer_system();
        let lat = ts.lattice().clone();
        let tops = lat
            .ids()
            .map(|l| {
                if !is_above(&lat, l, class) {
                    return Tops {
                        reps: vec![],
                        normalizers: vec![],
                        locate: BTreeMap::new(),
                    };
                }
                let t = top_set(ts, part, l, class).expect("level is above the class");
                let mut locate = BTreeMap::new();
                for (i, &r) in t.orbit_reps.iter().enumerate() {
                    for a in lat.set(l).iter() {
                        locate.entry(lat.conj(a, r)).or_insert((i, a));
                    }
                }
                Tops {
                    normalizers: t.orbit_reps.iter().map(|&r| lat.normalizer_in(l, r)).collect(),
                    reps: t.orbit_reps,
                    locate,
                }
            })
            .collect();
        ClassData {
            m,
            part,
            class,
            lat,
            tops,
        }
    }

    fn in_class(&self, s: SubgroupId) -> bool {
        self.part.class_of(s).rep == self.class.rep
    }

    /// The top member of `L` containing the class member `S ⊆ L`.
    fn top_over(&self, l: SubgroupId, s: SubgroupId) -> SubgroupId {
        self.lat.meet(l, self.part.hull[s.0])
    }

    fn locate(&self, l: SubgroupId, t: SubgroupId) -> (usize, usize) {
        *self.tops[l.0].locate.get(&t).expect("top member")
    }

    fn average(&self, t: SubgroupId, n: SubgroupId) -> Matrix {
        let d = self.m.dim(t);
        let mut sum = Matrix::zeros(d, d);
        for x in self.lat.set(n).iter() {
            sum = &sum + self.m.conj(x, t);
        }
        sum.scale(&(Q::one() / Q::from_integer(self.lat.order_of(n).into())))
    }

    fn coinvariant_blocks(&self, l: SubgroupId) -> Vec<Block> {
        let tops = &self.tops[l.0];
        let mut offset = 0;
        let mut out = Vec::new();
        for (&rep, &normalizer) in tops.reps.iter().zip(&tops.normalizers) {
            let avg = self.average(rep, normalizer);
            let basis = avg.column_space();
            let coords = basis.solve(&avg).expect("averaging lands in its image");
            let r = basis.cols();
            out.push(Block {
                rep,
                normalizer,
                basis,
                coords,
                offset,
            });
            offset += r;
        }
        out
    }

    fn fixed_blocks(&self, l: SubgroupId) -> Vec<Block> {
        let tops = &self.tops[l.0];
        let mut offset = 0;
        let mut out = Vec::new();
        for (&rep, &normalizer) in tops.reps.iter().zip(&tops.normalizers) {
            let d = self.m.dim(rep);
            let eye = Matrix::identity(d);
            let stack: Vec<Matrix> = self.lat.set(normalizer).iter().map(|x| self.m.conj(x, rep) - &eye).collect();
            let basis = Matrix::vstack_all(d, &stack).nullspace();
            let coords = left_inverse(&basis);
            let r = basis.cols();
            out.push(Block {
                rep,
                normalizer,
                basis,
                coords,
                offset,
            });
            offset += r;
        }
        out
    }
}

/// `(F^T F)^-1 F^T` for `F` of full column rank.
fn left_inverse(f: &Matrix) -> Matrix {
    let ft = f.transpose();
    (&ft * f).inverse().expect("full column rank") * ft
}

/// `Ind(M)` for a functor `M` supported on the class.
pub fn induct_class(part: &Partition, class: &InsepClass, m: &MackeyFunctor) -> Result<ClassExtension, MackeyError> {
    check_class_functor(m, class)?;
    let cd = ClassData::new(m, part, class);
    let lat = cd.lat.clone();
    let g = lat.group().clone();
    let blocks: Vec<Vec<Block>> = lat.ids().map(|l| cd.coinvariant_blocks(l)).collect();
    let dims: Vec<usize> = blocks.iter().map(|b| b.iter().map(|x| x.basis.cols()).sum()).collect();

    // ι^L_S: M(G/S) → Ind(G/L), the formal transfer from a class member S → L
    let iota = |l: SubgroupId, s: SubgroupId| -> Matrix {
        let t = cd.top_over(l, s);
        let (i, a) = cd.locate(l, t);
        let b = &blocks[l.0][i];
        let inner = &(&b.coords * m.conj(g.inv(a), t)) * m.tr(s, t).expect("class members transfer to their top");
        let mut out = Matrix::zeros(dims[l.0], m.dim(s));
        out.set_block(b.offset, 0, &inner);
        out
    };
    let per_block = |l: SubgroupId, rows: usize, f: &dyn Fn(&Block) -> Matrix| -> Matrix {
        let mut out = Matrix::zeros(rows, dims[l.0]);
        for b in &blocks[l.0] {
            out.set_block(0, b.offset, &f(b));
        }
        out
    };

    let functor = MackeyFunctor::build(
        m.transfer_system(),
        None,
        |l| dims[l.0],
        |l, k| {
            per_block(l, dims[k.0], &|b| {
                let t = b.rep;
                let mut acc = Matrix::zeros(dims[k.0], b.basis.cols());
                for x in lat.double_cosets_in(l, k, t) {
                    let s = lat.meet(t, lat.conj(g.inv(x), k));
                    if !cd.in_class(s) {
                        continue;
                    }
                    let term = &(&(iota(k, lat.conj(x, s)) * m.conj(x, s)) * m.res(t, s)) * &b.basis;
                    acc = &acc + &term;
                }
                acc
            })
        },
        |k, l| per_block(k, dims[l.0], &|b| iota(l, b.rep) * &b.basis),
        |a, l| {
            let al = lat.conj(a, l);
            per_block(l, dims[al.0], &|b| &(iota(al, lat.conj(a, b.rep)) * m.conj(a, b.rep)) * &b.basis)
        },
    );
    Ok(ClassExtension { functor, blocks })
}

/// Which of the two transfer formulas to use for coinduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoTransfer {
    /// Sum over `T'\L'/L` of transfers of conjugated restrictions, read off
    /// at each top member of the target.
    Pointwise,
    /// Sum over `L\L'/L'_g` of conjugated transfers inside the top member
    /// containing the source block, then symmetrized.
    Blockwise,
}

/// `CoInd(M)` for a functor `M` supported on the class.
pub fn coinduct_class(part: &Partition, class: &InsepClass, m: &MackeyFunctor) -> Result<ClassExtension, MackeyError> {
    coinduct_class_with(part, class, m, CoTransfer::Blockwise)
}

pub fn coinduct_class_with(
    part: &Partition,
    class: &InsepClass,
    m: &MackeyFunctor,
    formula: CoTransfer,
) -> Result<ClassExtension, MackeyError> {
    check_class_functor(m, class)?;
    let cd = ClassData::new(m, part, class);
    let lat = cd.lat.clone();
    let g = lat.group().clone();
    let blocks: Vec<Vec<Block>> = lat.ids().map(|l| cd.fixed_blocks(l)).collect();
    let dims: Vec<usize> = blocks.iter().map(|b| b.iter().map(|x| x.basis.cols()).sum()).collect();

    // value of f ∈ CoInd(G/L) at a class member S ⊆ L
    let val = |l: SubgroupId, s: SubgroupId| -> Matrix {
        let t = cd.top_over(l, s);
        let (i, a) = cd.locate(l, t);
        let b = &blocks[l.0][i];
        let inner = &(m.res(t, s) * m.conj(a, b.rep)) * &b.basis;
        let mut out = Matrix::zeros(m.dim(s), dims[l.0]);
        out.set_block(0, b.offset, &inner);
        out
    };
    let per_block = |l: SubgroupId, cols: usize, f: &dyn Fn(&Block) -> Matrix| -> Matrix {
        let mut out = Matrix::zeros(dims[l.0], cols);
        for b in &blocks[l.0] {
            out.set_block(b.offset, 0, &f(b));
        }
        out
    };

    let transfer_pointwise = |k: SubgroupId, l: SubgroupId| -> Matrix {
        per_block(l, dims[k.0], &|b| {
            let t = b.rep;
            let mut acc = Matrix::zeros(m.dim(t), dims[k.0]);
            for x in lat.double_cosets_in(l, t, k) {
                let s = lat.meet(k, lat.conj(g.inv(x), t));
                if !cd.in_class(s) {
                    continue;
                }
                let xs = lat.conj(x, s);
                let tr = m.tr(xs, t).expect("restriction of an admissible transfer");
                acc = &acc + &(&(tr * m.conj(x, s)) * &val(k, s));
            }
            &b.coords * &acc
        })
    };
    // the formal sum over ℓ ∈ K\L/L_g of cotransfers of c_{ℓ^-1} tr m, read
    // off at the summand indexed by L_g: only the ℓ with ℓ^-1 normalizing L_g
    // land there
    let transfer_blockwise = |k: SubgroupId, l: SubgroupId| -> Matrix {
        let mut out = Matrix::zeros(dims[l.0], dims[k.0]);
        for src in &blocks[k.0] {
            let lg = cd.top_over(l, src.rep);
            let norm = lat.set(lat.normalizer_in(l, lg));
            let up = m.tr(src.rep, lg).expect("class members transfer to their top") * &src.basis;
            let mut at_lg = Matrix::zeros(m.dim(lg), src.basis.cols());
            for ell in lat.double_cosets_in(l, k, lg) {
                let coset = g.double_coset(lat.set(k), ell, lat.set(lg));
                if let Some(n) = coset.iter().map(|x| g.inv(x)).find(|&x| norm.contains(x)) {
                    at_lg = &at_lg + &(m.conj(n, lg) * &up);
                }
            }
            let (j, a) = cd.locate(l, lg);
            let dst = &blocks[l.0][j];
            let value = &(&dst.coords * m.conj(g.inv(a), lg)) * &at_lg;
            out.set_block(dst.offset, src.offset, &(&out.block(dst.offset, src.offset, value.rows(), value.cols()) + &value));
        }
        out
    };

    let functor = MackeyFunctor::build(
        m.transfer_system(),
        None,
        |l| dims[l.0],
        |l, k| per_block(k, dims[l.0], &|b| &b.coords * &val(l, b.rep)),
        |k, l| match formula {
            CoTransfer::Pointwise => transfer_pointwise(k, l),
            CoTransfer::Blockwise => transfer_blockwise(k, l),
        },
        |a, l| {
            let al = lat.conj(a, l);
            let ai = g.inv(a);
            per_block(al, dims[l.0], &|b| {
                let back = lat.conj(ai, b.rep);
                &(&b.coords * m.conj(a, back)) * &val(l, back)
            })
        },
    );
    Ok(ClassExtension { functor, blocks })
}

/// The counit `Ind(res M) → M`: the sum of the transfers from each block.
pub fn counit(ind: &ClassExtension, m: &MackeyFunctor) -> Vec<Matrix> {
    let lat = m.lattice();
    lat.ids()
        .map(|l| {
            let mut out = Matrix::zeros(m.dim(l), ind.functor.dim(l));
            for (i, b) in ind.blocks[l.0].iter().enumerate() {
                let t = m.tr(b.rep, l).expect("top members transfer to their level");
                out = &out + &ind.block_cols(l, i, &(t * &b.basis));
            }
            out
        })
        .collect()
}

/// The unit `M → CoInd(res M)`: the restrictions to each block.
pub fn unit(coind: &ClassExtension, m: &MackeyFunctor) -> Vec<Matrix> {
    let lat = m.lattice();
    lat.ids()
        .map(|l| {
            let mut out = Matrix::zeros(coind.functor.dim(l), m.dim(l));
            for (i, b) in coind.blocks[l.0].iter().enumerate() {
                out = &out + &coind.block_rows(l, i, &(&b.coords * m.res(l, b.rep)));
            }
            out
        })
        .collect()
}

/// Outcome of comparing `Ind` and `CoInd` through `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    /// Levels where unit ∘ counit fails to be invertible.
    pub singular_levels: Vec<SubgroupId>,
    /// Whether unit ∘ counit is block diagonal with the trace over
    /// `N_L(T)/T` on each diagonal block.
    pub trace_form: bool,
    pub counit_is_morphism: bool,
    pub unit_is_morphism: bool,
}

impl FrobeniusReport {
    pub fn holds(&self) -> bool {
        self.singular_levels.is_empty() && self.trace_form && self.counit_is_morphism && self.unit_is_morphism
    }
}

/// Builds the counit and unit for `M` (vanishing off the levels above the
/// class) and checks that their composite `Ind(res M) → CoInd(res M)` is an
/// isomorphism of the expected shape.
pub fn frobenius_check(part: &Partition, class: &InsepClass, m: &MackeyFunctor) -> Result<FrobeniusReport, MackeyError> {
    let r = class_restriction(m, class)?;
    let ind = induct_class(part, class, &r)?;
    let coind = coinduct_class(part, class, &r)?;
    let eps = counit(&ind, m);
    let eta = unit(&coind, m);
    let lat = m.lattice().clone();
    let mut singular_levels = Vec::new();
    let mut trace_form = true;
    for l in lat.ids() {
        let kappa = &eta[l.0] * &eps[l.0];
        if !kappa.is_invertible() {
            singular_levels.push(l);
        }
        for (i, bi) in ind.blocks[l.0].iter().enumerate() {
            for (j, bj) in coind.blocks[l.0].iter().enumerate() {
                let got = kappa.block(bj.offset, bi.offset, bj.basis.cols(), bi.basis.cols());
                let want = if i == j {
                    let t = bi.rep;
                    let mut trace = Matrix::zeros(m.dim(t), m.dim(t));
                    for x in lat.cosets_in(bi.normalizer, t) {
                        trace = &trace + m.conj(x, t);
                    }
                    &(&bj.coords * &trace) * &bi.basis
                } else {
                    Matrix::zeros(got.rows(), got.cols())
                };
                trace_form &= got == want;
            }
        }
    }
    Ok(FrobeniusReport {
        singular_levels,
        trace_form,
        counit_is_morphism: is_morphism(&ind.functor, m, &eps),
        unit_is_morphism: is_morphism(m, &coind.functor, &eta),
    })
}

/// Checks that the counit `Ind(res M) → M` is an isomorphism of Mackey
/// functors, i.e. that `M` is induced from its class restriction.
pub fn is_induced(part: &Partition, class: &InsepClass, m: &MackeyFunctor) -> Result<bool, MackeyError> {
    let ind = induct_class(part, class, &class_restriction(m, class)?)?;
    let eps = counit(&ind, m);
    Ok(eps.iter().all(Matrix::is_invertible) && is_morphism(&ind.functor, m, &eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insep::partition;
    use crate::mackey::split::split;
    use crate::mackey::{burnside_mackey, represented_mackey};
    use crate::named;
    use crate::transfer::enumerate_all;
    use crate::TransferSystem;

    fn lat(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(named::parse_named(name).unwrap())))
    }

    fn sweep(name: &str, stride: usize, mut f: impl FnMut(&TransferSystem, &Partition, &MackeyFunctor)) {
        let l = lat(name);
        for ts in enumerate_all(&l).unwrap().iter().step_by(stride) {
            let part = partition(ts);
            f(ts, &part, &burnside_mackey(ts));
            for k in l.class_reps() {
                f(ts, &part, &represented_mackey(ts, k));
            }
        }
    }

    #[test]
    fn c6_two_class_induction() {
        let l = lat("cyclic:6");
        let seeds = TransferSystem::parse_pairs(&l, "C2>G").unwrap();
        let ts = TransferSystem::generate(l.clone(), &seeds).unwrap();
        let part = partition(&ts);
        let class = part.class_with_rep(l.parse_subgroup("C2").unwrap()).unwrap().clone();
        let m = burnside_mackey(&ts);
        let sp = split(&m, &part).unwrap();
        let piece = &sp.summands.iter().find(|s| s.class_rep == class.rep).unwrap().functor;
        assert!(is_induced(&part, &class, piece).unwrap());
        let ind = induct_class(&part, &class, &class_restriction(piece, &class).unwrap()).unwrap();
        assert!(ind.functor.is_valid());
        assert_eq!(ind.functor.dims(), piece.dims());
    }

    #[test]
    fn coinduction_formulas_agree_and_validate() {
        for name in ["cyclic:6", "symmetric:3", "dihedral:4"] {
            sweep(name, 5, |_, part, m| {
                for s in split(m, part).unwrap().summands {
                    let class = part.class_with_rep(s.class_rep).unwrap();
                    let r = class_restriction(&s.functor, class).unwrap();
                    let a = coinduct_class_with(part, class, &r, CoTransfer::Pointwise).unwrap();
                    let b = coinduct_class_with(part, class, &r, CoTransfer::Blockwise).unwrap();
                    assert_eq!(a.functor, b.functor, "{name}");
                    assert!(b.functor.is_valid(), "{name}");
                    let ind = induct_class(part, class, &r).unwrap();
                    assert!(ind.functor.is_valid(), "{name}");
                    assert_eq!(ind.functor.dims(), b.functor.dims());
                }
            });
        }
    }

    #[test]
    fn frobenius_on_summands() {
        for name in ["cyclic:8", "symmetric:3", "klein"] {
            sweep(name, 3, |_, part, m| {
                let sp = split(m, part).unwrap();
                for s in &sp.summands {
                    let class = part.class_with_rep(s.class_rep).unwrap();
                    let rep = frobenius_check(part, class, &s.functor).unwrap();
                    assert!(rep.holds(), "{name} {rep:?}");
                    assert!(is_induced(part, class, &s.functor).unwrap(), "{name}");
                }
            });
        }
    }

    #[test]
    fn rejects_functors_off_the_class() {
        let l = lat("cyclic:6");
        let ts = TransferSystem::complete(l.clone());
        let part = partition(&ts);
        let class = part.class_with_rep(l.top()).unwrap();
        let m = burnside_mackey(&ts);
        assert!(matches!(induct_class(&part, class, &m), Err(MackeyError::NotClassFunctor(_))));
    }
}
