//! Explicit isomorphisms of Mackey functors, found by solving for levelwise
//! maps that commute with every structure map.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functor::is_morphism;
use super::MackeyFunctor;
use crate::linalg::{q, Matrix};

const ATTEMPTS: usize = 32;

/// A basis of `Hom(a, b)`: each column packs the levelwise matrices `f_L`
/// row-major, level after level.
pub struct HomSpace {
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    basis: Matrix,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// The levelwise maps of the combination `Σ c_i basis_i`.
    pub fn combination(&self, c: &Matrix) -> Vec<Matrix> {
        let v = &self.basis * c;
        self.offsets
            .iter()
            .zip(&self.shapes)
            .map(|(&off, &(r, cols))| Matrix::from_fn(r, cols, |i, j| v[(off + i * cols + j, 0)].clone()))
            .collect()
    }
}

/// The space of Mackey morphisms `a → b`.
pub fn hom_space(a: &MackeyFunctor, b: &MackeyFunctor) -> HomSpace {
    assert_eq!(a.lattice().len(), b.lattice().len(), "functors over different groups");
    let shapes: Vec<(usize, usize)> = a.dims().iter().zip(b.dims()).map(|(&da, &db)| (db, da)).collect();
    let mut offsets = Vec::with_capacity(shapes.len());
    let mut total = 0;
    for &(r, c) in &shapes {
        offsets.push(total);
        total += r * c;
    }
    let (ma, mb) = (a.structure_maps(), b.structure_maps());
    assert_eq!(ma.len(), mb.len(), "functors over different families");
    let mut basis = Matrix::identity(total);
    // refine the solution space one structure map at a time: f_t X = Y f_s
    for (&(s, t, x), &(s2, t2, y)) in ma.iter().zip(&mb) {
        debug_assert_eq!((s, t), (s2, t2));
        let k = basis.cols();
        if k == 0 {
            break;
        }
        let (db_t, da_t) = shapes[t.0];
        let (db_s, da_s) = shapes[s.0];
        if db_t == 0 || da_s == 0 {
            continue;
        }
        let mut c = Matrix::zeros(db_t * da_s, k);
        for i in 0..db_t {
            for j in 0..da_s {
                let row = i * da_s + j;
                for p in 0..da_t {
                    let xv = &x[(p, j)];
                    if xv.is_zero() {
                        continue;
                    }
                    let u = offsets[t.0] + i * da_t + p;
                    for col in 0..k {
                        let bv = &basis[(u, col)];
                        if !bv.is_zero() {
                            c[(row, col)] += xv * bv;
                        }
                    }
                }
                for qq in 0..db_s {
                    let yv = &y[(i, qq)];
                    if yv.is_zero() {
                        continue;
                    }
                    let u = offsets[s.0] + qq * da_s + j;
                    for col in 0..k {
                        let bv = &basis[(u, col)];
                        if !bv.is_zero() {
                            c[(row, col)] -= yv * bv;
                        }
                    }
                }
            }
        }
        if c.is_zero() {
            continue;
        }
        basis = &basis * &c.nullspace();
    }
    HomSpace { offsets, shapes, basis }
}

/// Searches `Hom(a, b)` for a levelwise invertible morphism, trying seeded
/// random integer combinations of a basis.
pub fn find_isomorphism(a: &MackeyFunctor, b: &MackeyFunctor, seed: u64) -> Option<Vec<Matrix>> {
    if a.dims() != b.dims() {
        return None;
    }
    let hom = hom_space(a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let c = Matrix::from_fn(hom.dim(), 1, |_, _| q(rng.gen_range(-4..=4)));
        let f = hom.combination(&c);
        if f.iter().all(Matrix::is_invertible) {
            debug_assert!(is_morphism(a, b, &f));
            return Some(f);
        }
    }
    None
}

/// Whether `f` is a levelwise invertible morphism `a → b`.
pub fn is_isomorphism(a: &MackeyFunctor, b: &MackeyFunctor, f: &[Matrix]) -> bool {
    f.len() == a.dims().len() && f.iter().all(Matrix::is_invertible) && is_morphism(a, b, f)
}
