//! Idempotent action of the Burnside ring and the induced splitting.

use super::functor::is_morphism;
use super::{MackeyError, MackeyFunctor};
use crate::burnside::{idempotents, restrict_element, BurnsideElement};
use crate::insep::Partition;
use crate::lattice::SubgroupId;
use crate::linalg::Matrix;

/// The action of `x ∈ A^O(G/G)` at every level: `x` restricts to
/// `Σ c_J L/J` at level `L`, and `L/J` acts as `tr^L_J ∘ res^L_J`.
pub fn act(m: &MackeyFunctor, x: &BurnsideElement) -> Result<Vec<Matrix>, MackeyError> {
    let lat = m.lattice().clone();
    assert_eq!(x.level, lat.top(), "acting element must live at the top level");
    let mut out = Vec::with_capacity(lat.len());
    for l in lat.ids() {
        let d = m.dim(l);
        let mut p = Matrix::zeros(d, d);
        if d > 0 {
            for (&j, c) in &restrict_element(&lat, x, l).coeffs {
                if m.dim(j) == 0 {
                    continue;
                }
                let t = m.tr(j, l).ok_or_else(|| MackeyError::InadmissibleAction {
                    level: lat.label(l).into(),
                    orbit: format!("{}/{}", lat.label(l), lat.label(j)),
                })?;
                p = &p + &(t * m.res(l, j)).scale(c);
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// One piece `e_[H] M` of a splitting.
#[derive(Clone, Debug)]
pub struct Summand {
    pub class_rep: SubgroupId,
    pub idempotent: BurnsideElement,
    pub functor: MackeyFunctor,
    /// Per level, the columns spanning the image of the idempotent inside `M(G/L)`.
    pub inclusion: Vec<Matrix>,
    /// Per level, coordinates of `e_[H]·v` in the inclusion basis.
    pub projection: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct Splitting {
    pub summands: Vec<Summand>,
    /// Per level, the inclusions side by side: `⊕ e_[H]M(G/L) → M(G/L)`.
    pub certificate: Vec<Matrix>,
}

impl Splitting {
    /// The reassembled functor `⊕ e_[H]M`.
    pub fn reassembled(&self) -> MackeyFunctor {
        let parts: Vec<MackeyFunctor> = self.summands.iter().map(|s| s.functor.clone()).collect();
        MackeyFunctor::direct_sum(&parts)
    }

    /// Whether the certificate is a levelwise invertible morphism
    /// `⊕ e_[H]M → M`.
    pub fn verify(&self, m: &MackeyFunctor) -> bool {
        self.certificate.iter().all(Matrix::is_invertible)
            && (self.summands.is_empty() || is_morphism(&self.reassembled(), m, &self.certificate))
    }
}

/// The image of `p` at each level, with induced structure maps.
fn image_functor(m: &MackeyFunctor, p: &[Matrix]) -> (MackeyFunctor, Vec<Matrix>, Vec<Matrix>) {
    let lat = m.lattice().clone();
    let bases: Vec<Matrix> = p.iter().map(Matrix::column_space).collect();
    let proj: Vec<Matrix> = bases
        .iter()
        .zip(p)
        .map(|(b, p)| b.solve(p).expect("p maps into its image"))
        .collect();
    let induced = |from: SubgroupId, to: SubgroupId, f: &Matrix| &(&proj[to.0] * f) * &bases[from.0];
    let functor = MackeyFunctor::build(
        m.transfer_system(),
        m.family(),
        |k| bases[k.0].cols(),
        |l, k| induced(l, k, m.res(l, k)),
        |k, l| induced(k, l, m.tr(k, l).expect("admissible")),
        |g, l| induced(l, lat.conj(g, l), m.conj(g, l)),
    );
    (functor, bases, proj)
}

/// Splits `M` along the primitive idempotents of the incomplete Burnside ring.
pub fn split(m: &MackeyFunctor, part: &Partition) -> Result<Splitting, MackeyError> {
    let lat = m.lattice().clone();
    let mut summands = Vec::new();
    for (h, e) in idempotents(m.transfer_system(), part) {
        let p = act(m, &e)?;
        let (functor, inclusion, projection) = image_functor(m, &p);
        summands.push(Summand {
            class_rep: h,
            idempotent: e,
            functor,
            inclusion,
            projection,
        });
    }
    let certificate = lat
        .ids()
        .map(|l| {
            let parts: Vec<Matrix> = summands.iter().map(|s| s.inclusion[l.0].clone()).collect();
            Matrix::hstack_all(m.dim(l), &parts)
        })
        .collect();
    Ok(Splitting { summands, certificate })
}
