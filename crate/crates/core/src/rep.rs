//! The finite-dimensional representation of the link group attached to an
//! augmentation.
//!
//! The matrix of cord values `R[i][j] = x(i, j)` (rows and columns indexed by
//! strands, diagonal `1 − mu`) has some column rank d. Its pivot columns form
//! a basis; the meridian of strand t acts on that basis by
//! `g_t = I − u_t·v_tᵀ`, where `u_t` is the coordinate vector of column t and
//! `v_t` is row t of R restricted to the pivot columns. Each generator
//! differs from the identity by a rank ≤ 1 matrix, and its inverse is
//! `I + mu⁻¹·u_t·v_tᵀ` thanks to the diagonal normalization.

use thiserror::Error;

use crate::augment::Augmentation;
use crate::braid::{meridian_tables, BraidWord, ComponentMap, FreeWord};
use crate::field::Field;
use crate::linalg::Mat;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("meridian generator of strand {strand} is not invertible")]
    SingularGenerator { strand: u16 },
}

/// The representation data: basis, change-of-basis coordinates, and the
/// meridian generator matrices with their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugRep<F: Field> {
    pub field: F,
    pub cm: ComponentMap,
    /// Dimension of the representation (rank of the cord-value matrix).
    pub dim: usize,
    /// Pivot strands: basis[l] is the strand whose column is the l-th basis
    /// vector.
    pub basis: Vec<u16>,
    /// dim×n matrix expressing every column in the basis:
    /// column j = Σ_l coords[l][j-1] · column basis[l].
    pub coords: Mat<F>,
    /// gens[t-1]: action of the meridian of strand t on the basis.
    pub gens: Vec<Mat<F>>,
    pub gens_inv: Vec<Mat<F>>,
}

/// The n×n matrix of cord values of an augmentation.
pub fn r_matrix<F: Field>(a: &Augmentation<F>) -> Mat<F> {
    let n = usize::from(a.components().n);
    Mat::from_fn(a.field().clone(), n, n, |i, j| {
        a.x(i as u16 + 1, j as u16 + 1).clone()
    })
}

pub fn build_rep<F: Field>(a: &Augmentation<F>) -> Result<AugRep<F>, RepError> {
    let f = a.field().clone();
    let cm = a.components().clone();
    let n = usize::from(cm.n);
    let r = r_matrix(a);
    let (red, pivots) = r.rref();
    let dim = pivots.len();
    let basis: Vec<u16> = pivots.iter().map(|&p| p as u16 + 1).collect();
    let coords = Mat::from_fn(f.clone(), dim, n, |l, j| red.get(l, j).clone());
    let mut gens = Vec::with_capacity(n);
    let mut gens_inv = Vec::with_capacity(n);
    for t in 1..=n {
        let mu_inv = f
            .inv(a.mu_of_strand(t as u16))
            .expect("meridian eigenvalues are nonzero");
        // u_a = coords[a][t-1], v_l = R[t-1][pivot_l].
        let outer = |scale: &F::Elem, a_: usize, l: usize| {
            f.mul(
                scale,
                &f.mul(coords.get(a_, t - 1), r.get(t - 1, pivots[l])),
            )
        };
        let g = Mat::from_fn(f.clone(), dim, dim, |a_, l| {
            let delta = if a_ == l { f.one() } else { f.zero() };
            f.sub(&delta, &outer(&f.one(), a_, l))
        });
        let g_inv = Mat::from_fn(f.clone(), dim, dim, |a_, l| {
            let delta = if a_ == l { f.one() } else { f.zero() };
            f.add(&delta, &outer(&mu_inv, a_, l))
        });
        if g.mul(&g_inv) != Mat::identity(f.clone(), dim) {
            return Err(RepError::SingularGenerator { strand: t as u16 });
        }
        gens.push(g);
        gens_inv.push(g_inv);
    }
    Ok(AugRep {
        field: f,
        cm,
        dim,
        basis,
        coords,
        gens,
        gens_inv,
    })
}

impl<F: Field> AugRep<F> {
    /// Action of a word in the meridians, factors multiplied left to right.
    pub fn act_word(&self, w: &FreeWord) -> Mat<F> {
        let mut acc = Mat::identity(self.field.clone(), self.dim);
        for (t, s) in w.units() {
            let g = if s == 1 {
                &self.gens[usize::from(t) - 1]
            } else {
                &self.gens_inv[usize::from(t) - 1]
            };
            acc = acc.mul(g);
        }
        acc
    }
}

/// Whether the meridian matrices satisfy the defining relations of the link
/// group of the braid closure: gluing the top of the braid to the bottom
/// identifies the meridian of each top position with the bottom meridian of
/// the same position, so the top meridian words (in bottom meridians) must
/// act as the bottom generators themselves.
pub fn check_link_relations<F: Field>(rep: &AugRep<F>, b: &BraidWord) -> bool {
    assert_eq!(b.n(), rep.cm.n, "braid and representation strand counts");
    let top = meridian_tables(b).pop().expect("at least the bottom level");
    (1..=b.n()).all(|p| {
        let image = &top[usize::from(p) - 1];
        rep.act_word(image) == rep.gens[usize::from(p) - 1]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::enumerate_fp;
    use crate::braid::components;
    use crate::field::{PrimeField, Rationals};
    use crate::relations::all_relations;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;

    fn braid(text: &str) -> BraidWord {
        BraidWord::parse(text).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v).unwrap()
    }

    #[test]
    fn trivial_augmentation_gives_zero_dim() {
        let b = braid("n=2; 1 1");
        let a = Augmentation::trivial(Rationals, components(&b));
        let rep = build_rep(&a).unwrap();
        assert_eq!(rep.dim, 0);
        assert!(rep.basis.is_empty());
        assert!(check_link_relations(&rep, &b));
    }

    #[test]
    fn hopf_diagonal_q_augmentation() {
        // Case with both cord values zero: lambda = 1, mu free.
        let b = braid("n=2; 1 1");
        let cm = components(&b);
        let a = Augmentation::new(
            Rationals,
            cm,
            vec![q(2), q(3)],
            vec![q(1), q(1)],
            vec![vec![q(-1), q(0)], vec![q(0), q(-2)]],
        )
        .unwrap();
        assert!(a.verify(&all_relations(&b)).unwrap().ok());
        let rep = build_rep(&a).unwrap();
        assert_eq!(rep.dim, 2);
        assert_eq!(rep.basis, vec![1, 2]);
        // Meridian 1 acts as diag(mu1, 1) on the pivot basis.
        assert_eq!(rep.gens[0].get(0, 0), &q(2));
        assert_eq!(rep.gens[0].get(1, 1), &q(1));
        assert_eq!(rep.gens[0].get(0, 1), &q(0));
        assert!(check_link_relations(&rep, &b));
    }

    #[test]
    fn generators_invert_and_have_corank_one() {
        let b = braid("n=2; 1 1 1");
        let rels = all_relations(&b);
        let e = enumerate_fp(&rels, 5, None, None).unwrap();
        assert!(e.complete && !e.augmentations.is_empty());
        for a in &e.augmentations {
            let rep = build_rep(a).unwrap();
            let f = rep.field.clone();
            let id = Mat::identity(f.clone(), rep.dim);
            for t in 0..rep.gens.len() {
                assert_eq!(rep.gens[t].mul(&rep.gens_inv[t]), id);
                assert!(id.sub(&rep.gens[t]).rank() <= 1);
            }
            assert!(check_link_relations(&rep, &b), "augmentation {:?}", a.to_json());
        }
    }

    #[test]
    fn bad_values_fail_link_relations() {
        // mu = lambda = 1 with nonzero cord values is not an augmentation of
        // the Hopf link; the representation must expose that.
        let b = braid("n=2; 1 1");
        let f = PrimeField::new(5).unwrap();
        let a = Augmentation::new(
            f,
            components(&b),
            vec![1, 1],
            vec![1, 1],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let rep = build_rep(&a).unwrap();
        assert_eq!(rep.dim, 2);
        assert!(!check_link_relations(&rep, &b));
    }

    #[test]
    fn word_action_is_multiplicative() {
        let b = braid("n=2; 1 1 1");
        let rels = all_relations(&b);
        let e = enumerate_fp(&rels, 5, None, None).unwrap();
        // Exercise the action on a positive-dimensional representation.
        let Some(a) = e
            .augmentations
            .iter()
            .find(|a| build_rep(*a).unwrap().dim > 0)
        else {
            panic!("expected a positive-dimensional augmentation over F5");
        };
        let rep = build_rep(a).unwrap();
        let u = FreeWord::from_letters([(1, 1), (2, -1)]);
        let v = FreeWord::from_letters([(2, 1), (1, 1), (1, 1)]);
        assert_eq!(
            rep.act_word(&u.concat(&v)),
            rep.act_word(&u).mul(&rep.act_word(&v))
        );
        assert_eq!(
            rep.act_word(&u).mul(&rep.act_word(&u.inverse())),
            Mat::identity(rep.field.clone(), rep.dim)
        );
    }
}
