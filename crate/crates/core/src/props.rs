//! Structural properties of augmentation representations: every meridian
//! generator moves the space by corank at most one, vanishing cord rows or
//! columns along a sublink force its meridians to act trivially, and
//! vanishing mixed blocks split the representation into the two sublink
//! representations.

use thiserror::Error;

use crate::augment::{AugError, Augmentation};
use crate::braid::{components, delete_strands, BraidWord, ComponentMap};
use crate::field::Field;
use crate::linalg::Mat;
use crate::rep::{build_rep, check_link_relations, AugRep, RepError};

#[derive(Debug, Error)]
pub enum PropsError {
    #[error("the partition must name a proper nonempty subset of components")]
    InvalidPartition,
    #[error("the sublink must be a nonempty set of component indices")]
    InvalidSublink,
    #[error("augmentation belongs to a different braid")]
    Mismatch,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Aug(#[from] AugError),
}

/// Per-generator corank evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplenessReport {
    /// ranks[t-1] = rank(I − action of the meridian of strand t).
    pub ranks: Vec<usize>,
    pub ok: bool,
}

/// Check that every meridian generator differs from the identity by a matrix
/// of rank at most one.
pub fn microlocal_simpleness<F: Field>(rep: &AugRep<F>) -> SimplenessReport {
    let id = Mat::identity(rep.field.clone(), rep.dim);
    let ranks: Vec<usize> = rep.gens.iter().map(|g| id.sub(g).rank()).collect();
    let ok = ranks.iter().all(|&r| r <= 1);
    SimplenessReport { ranks, ok }
}

/// Evidence for the sublink-vanishing implication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub sublink: Vec<u16>,
    /// All cord values out of the sublink's strands vanish (including the
    /// diagonal, so the sublink's meridian eigenvalues are 1).
    pub rows_vanish: bool,
    /// All cord values into the sublink's strands vanish.
    pub cols_vanish: bool,
    /// Every meridian of the sublink acts as the identity.
    pub meridians_trivial: bool,
    /// The implication (rows or columns vanish) ⇒ (meridians trivial).
    pub ok: bool,
}

/// Check that vanishing cord rows or columns along a sublink force its
/// meridians to act trivially.
pub fn check_vanishing<F: Field>(
    a: &Augmentation<F>,
    rep: &AugRep<F>,
    sublink: &[u16],
) -> Result<VanishingReport, PropsError> {
    let cm = a.components();
    if rep.cm != *cm {
        return Err(PropsError::Mismatch);
    }
    let mut sub: Vec<u16> = sublink.to_vec();
    sub.sort_unstable();
    sub.dedup();
    if sub.is_empty() || sub.iter().any(|&c| c == 0 || c > cm.r) {
        return Err(PropsError::InvalidSublink);
    }
    let f = a.field();
    let strands: Vec<u16> = sub.iter().flat_map(|&c| cm.strands_of(c)).collect();
    let rows_vanish = strands
        .iter()
        .all(|&s| (1..=cm.n).all(|j| f.is_zero(a.x(s, j))));
    let cols_vanish = strands
        .iter()
        .all(|&s| (1..=cm.n).all(|i| f.is_zero(a.x(i, s))));
    let id = Mat::identity(f.clone(), rep.dim);
    let meridians_trivial = strands
        .iter()
        .all(|&s| rep.gens[usize::from(s) - 1] == id);
    let ok = !(rows_vanish || cols_vanish) || meridians_trivial;
    Ok(VanishingReport {
        sublink: sub,
        rows_vanish,
        cols_vanish,
        meridians_trivial,
        ok,
    })
}

/// Evidence that the representation splits as a direct sum of the two
/// sublink representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// (dim of first part, dim of second part, ambient dim).
    pub dims: (usize, usize, usize),
    /// The pivot basis is the union of the two blocks' pivot bases.
    pub basis_split: bool,
    /// Every column's coordinates stay inside its own block.
    pub coords_block: bool,
    /// Each meridian acts block-diagonally, matching its sublink
    /// representation on one block and the identity on the other.
    pub blocks_match: bool,
    /// Both sublink representations satisfy their own braids' link-group
    /// relations.
    pub sub_links_ok: (bool, bool),
}

impl DecompositionReport {
    pub fn ok(&self) -> bool {
        self.dims.0 + self.dims.1 == self.dims.2
            && self.basis_split
            && self.coords_block
            && self.blocks_match
            && self.sub_links_ok.0
            && self.sub_links_ok.1
    }
}

/// Separability evidence for a two-set partition of the components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityReport {
    /// The two component sets, each ascending.
    pub parts: (Vec<u16>, Vec<u16>),
    /// Both mixed blocks of the cord-value matrix vanish.
    pub mixed_zero: bool,
    pub decomposition: Option<DecompositionReport>,
    /// The implication (mixed blocks vanish) ⇒ (verified decomposition).
    pub ok: bool,
}

impl SeparabilityReport {
    pub fn separable(&self) -> bool {
        self.mixed_zero && self.ok
    }
}

/// Check that when every cord value between one set of components and the
/// rest vanishes, the representation decomposes as the direct sum of the two
/// sublink representations (built from the deleted sub-braids). `part1` names
/// the components of the first part; strands may interleave arbitrarily.
pub fn check_separability<F: Field>(
    a: &Augmentation<F>,
    rep: &AugRep<F>,
    b: &BraidWord,
    part1: &[u16],
) -> Result<SeparabilityReport, PropsError> {
    let cm = a.components().clone();
    if components(b) != cm || rep.cm != cm {
        return Err(PropsError::Mismatch);
    }
    let mut k1: Vec<u16> = part1.to_vec();
    k1.sort_unstable();
    k1.dedup();
    if k1.len() != part1.len()
        || k1.is_empty()
        || k1.len() >= usize::from(cm.r)
        || k1.iter().any(|&c| c == 0 || c > cm.r)
    {
        return Err(PropsError::InvalidPartition);
    }
    let k2: Vec<u16> = (1..=cm.r).filter(|c| !k1.contains(c)).collect();
    let f = a.field().clone();
    let n = usize::from(cm.n);
    let in1: Vec<bool> = (1..=cm.n).map(|s| k1.contains(&cm.of(s))).collect();

    let mixed_zero = (1..=n as u16).all(|i| {
        (1..=n as u16).all(|j| {
            let mixed = in1[usize::from(i) - 1] != in1[usize::from(j) - 1];
            !mixed || f.is_zero(a.x(i, j))
        })
    });
    if !mixed_zero {
        return Ok(SeparabilityReport {
            parts: (k1, k2),
            mixed_zero,
            decomposition: None,
            ok: true,
        });
    }

    let keep2: Vec<bool> = in1.iter().map(|&k| !k).collect();
    let (b1, _) = delete_strands(b, &in1);
    let (b2, _) = delete_strands(b, &keep2);
    let cm1 = components(&b1);
    let cm2 = components(&b2);
    // Original strands of each part in bottom order; deleting whole
    // components keeps that order, so each sub-braid renumbers its components
    // by ascending original index.
    let strands1: Vec<u16> = (1..=cm.n).filter(|&s| in1[usize::from(s) - 1]).collect();
    let strands2: Vec<u16> = (1..=cm.n).filter(|&s| !in1[usize::from(s) - 1]).collect();
    let relabels_in_order = |ks: &[u16], sub: &ComponentMap, strands: &[u16]| {
        usize::from(sub.n) == strands.len()
            && strands.iter().zip(&sub.comp).all(|(&s, &sc)| {
                ks.iter().position(|&c| c == cm.of(s)) == Some(usize::from(sc) - 1)
            })
    };
    assert!(
        relabels_in_order(&k1, &cm1, &strands1) && relabels_in_order(&k2, &cm2, &strands2),
        "sub-braid components renumber by ascending original index"
    );

    let sub_aug = |ks: &[u16], sub_cm: &ComponentMap, strands: &[u16]| {
        Augmentation::new(
            f.clone(),
            sub_cm.clone(),
            ks.iter().map(|&c| a.mu(c).clone()).collect(),
            ks.iter().map(|&c| a.lambda(c).clone()).collect(),
            strands
                .iter()
                .map(|&i| strands.iter().map(|&j| a.x(i, j).clone()).collect())
                .collect(),
        )
    };
    let a1 = sub_aug(&k1, &cm1, &strands1)?;
    let a2 = sub_aug(&k2, &cm2, &strands2)?;
    let rep1 = build_rep(&a1)?;
    let rep2 = build_rep(&a2)?;
    let (d1, d2, d) = (rep1.dim, rep2.dim, rep.dim);

    // Each part's pivot strands, mapped back to original numbering; pivots of
    // the full matrix must be exactly their ascending merge.
    let mut expected_basis: Vec<u16> = rep1
        .basis
        .iter()
        .map(|&s| strands1[usize::from(s) - 1])
        .chain(rep2.basis.iter().map(|&s| strands2[usize::from(s) - 1]))
        .collect();
    expected_basis.sort_unstable();
    let basis_split = d == d1 + d2 && rep.basis == expected_basis;

    // slot[l] = (is first part, row index in that part's rep) for each pivot.
    let slot: Vec<(bool, usize)> = if basis_split {
        rep.basis
            .iter()
            .map(|&s| {
                let one = in1[usize::from(s) - 1];
                let (repk, strands) = if one {
                    (&rep1, &strands1)
                } else {
                    (&rep2, &strands2)
                };
                let local = strands.iter().position(|&t| t == s).unwrap() as u16 + 1;
                let li = repk
                    .basis
                    .iter()
                    .position(|&t| t == local)
                    .expect("merged pivots come from part pivots");
                (one, li)
            })
            .collect()
    } else {
        Vec::new()
    };
    let coords_block = basis_split && {
        let mut ok = true;
        for (l, &(one, li)) in slot.iter().enumerate() {
            for j in 0..n {
                let want = if in1[j] == one {
                    let (repk, strands) = if one {
                        (&rep1, &strands1)
                    } else {
                        (&rep2, &strands2)
                    };
                    let jj = strands
                        .iter()
                        .position(|&t| usize::from(t) - 1 == j)
                        .unwrap();
                    repk.coords.get(li, jj).clone()
                } else {
                    f.zero()
                };
                if rep.coords.get(l, j) != &want {
                    ok = false;
                }
            }
        }
        ok
    };
    let blocks_match = basis_split && {
        (1..=n).all(|t| {
            let one = in1[t - 1];
            let (repk, strands) = if one {
                (&rep1, &strands1)
            } else {
                (&rep2, &strands2)
            };
            let tl = strands.iter().position(|&s| usize::from(s) == t).unwrap();
            let want = Mat::from_fn(f.clone(), d, d, |l1, l2| {
                let (p1, la) = slot[l1];
                let (p2, lb) = slot[l2];
                if p1 == one && p2 == one {
                    repk.gens[tl].get(la, lb).clone()
                } else if l1 == l2 {
                    f.one()
                } else {
                    f.zero()
                }
            });
            rep.gens[t - 1] == want
        })
    };
    let sub_links_ok = (
        check_link_relations(&rep1, &b1),
        check_link_relations(&rep2, &b2),
    );
    let decomposition = DecompositionReport {
        dims: (d1, d2, d),
        basis_split,
        coords_block,
        blocks_match,
        sub_links_ok,
    };
    let ok = decomposition.ok();
    Ok(SeparabilityReport {
        parts: (k1, k2),
        mixed_zero,
        decomposition: Some(decomposition),
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::enumerate_fp;
    use crate::field::{PrimeField, Rationals};
    use crate::relations::all_relations;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn hopf_diag_aug(mu1: i64, mu2: i64) -> Augmentation<Rationals> {
        let b = BraidWord::parse("n=2; 1 1").unwrap();
        let cm = components(&b);
        Augmentation::new(
            Rationals,
            cm,
            vec![q(mu1), q(mu2)],
            vec![q(1), q(1)],
            vec![
                vec![q(1 - mu1), q(0)],
                vec![q(0), q(1 - mu2)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn meridians_have_corank_at_most_one() {
        let b = BraidWord::parse("n=2; 1 1 1").unwrap();
        let rels = all_relations(&b);
        let e = enumerate_fp(&rels, 5, None, None).unwrap();
        assert!(e.complete);
        for a in &e.augmentations {
            let rep = build_rep(a).unwrap();
            let report = microlocal_simpleness(&rep);
            assert!(report.ok, "ranks {:?}", report.ranks);
        }
    }

    #[test]
    fn simpleness_rejects_fat_generators() {
        let f = PrimeField::new(5).unwrap();
        let b = BraidWord::parse("n=2; 1 1").unwrap();
        let fake = AugRep {
            field: f.clone(),
            cm: components(&b),
            dim: 2,
            basis: vec![1, 2],
            coords: Mat::zero(f.clone(), 2, 2),
            gens: vec![
                Mat::from_rows(f.clone(), &[vec![2, 0], vec![0, 3]]),
                Mat::identity(f.clone(), 2),
            ],
            gens_inv: vec![Mat::identity(f.clone(), 2), Mat::identity(f, 2)],
        };
        let report = microlocal_simpleness(&fake);
        assert!(!report.ok);
        assert_eq!(report.ranks, vec![2, 0]);
    }

    #[test]
    fn vanishing_rows_force_trivial_meridians() {
        let a = hopf_diag_aug(1, 3);
        let rep = build_rep(&a).unwrap();
        let report = check_vanishing(&a, &rep, &[1]).unwrap();
        assert!(report.rows_vanish && report.cols_vanish);
        assert!(report.meridians_trivial);
        assert!(report.ok);
        // The other component's cords do not vanish; the implication is
        // vacuous there.
        let other = check_vanishing(&a, &rep, &[2]).unwrap();
        assert!(!other.rows_vanish && !other.cols_vanish);
        assert!(!other.meridians_trivial);
        assert!(other.ok);
    }

    #[test]
    fn vanishing_validates_sublink() {
        let a = hopf_diag_aug(1, 3);
        let rep = build_rep(&a).unwrap();
        assert!(matches!(
            check_vanishing(&a, &rep, &[]),
            Err(PropsError::InvalidSublink)
        ));
        assert!(matches!(
            check_vanishing(&a, &rep, &[3]),
            Err(PropsError::InvalidSublink)
        ));
    }

    #[test]
    fn diagonal_hopf_augmentation_separates() {
        let b = BraidWord::parse("n=2; 1 1").unwrap();
        let a = hopf_diag_aug(2, 3);
        let rep = build_rep(&a).unwrap();
        let report = check_separability(&a, &rep, &b, &[1]).unwrap();
        assert!(report.mixed_zero);
        assert!(report.ok);
        assert!(report.separable());
        let d = report.decomposition.unwrap();
        assert_eq!(d.dims, (1, 1, 2));
        assert!(d.basis_split && d.coords_block && d.blocks_match);
        assert!(d.sub_links_ok.0 && d.sub_links_ok.1);
    }

    #[test]
    fn mixed_values_are_not_separable() {
        let b = BraidWord::parse("n=2; 1 1").unwrap();
        let cm = components(&b);
        let a = Augmentation::new(
            Rationals,
            cm,
            vec![q(2), q(2)],
            vec![q(1), q(1)],
            vec![vec![q(-1), q(1)], vec![q(1), q(-1)]],
        )
        .unwrap();
        let rep = build_rep(&a).unwrap();
        let report = check_separability(&a, &rep, &b, &[1]).unwrap();
        assert!(!report.mixed_zero);
        assert!(report.ok);
        assert!(!report.separable());
        assert!(report.decomposition.is_none());
    }

    #[test]
    fn separability_handles_interleaved_strands() {
        // Strands 1 and 3 form one component around the lone strand 2, so the
        // partition is not a prefix of the strand order.
        let b = BraidWord::parse("n=3; 1 2 1").unwrap();
        let cm = components(&b);
        assert!(!cm.is_sorted());
        assert_eq!(cm.comp, vec![1, 2, 1]);
        let a = Augmentation::trivial(PrimeField::new(5).unwrap(), cm);
        let rep = build_rep(&a).unwrap();
        for part in [[1u16], [2u16]] {
            let report = check_separability(&a, &rep, &b, &part).unwrap();
            assert!(report.separable(), "part {part:?}: {report:?}");
            let d = report.decomposition.unwrap();
            assert!(d.basis_split && d.coords_block && d.blocks_match);
            assert!(d.sub_links_ok.0 && d.sub_links_ok.1);
        }
    }

    #[test]
    fn separability_validates_partition() {
        let b = BraidWord::parse("n=2; 1 1").unwrap();
        let a = hopf_diag_aug(2, 3);
        let rep = build_rep(&a).unwrap();
        for bad in [&[][..], &[1, 2][..], &[3][..], &[1, 1][..]] {
            assert!(matches!(
                check_separability(&a, &rep, &b, bad),
                Err(PropsError::InvalidPartition)
            ));
        }
    }
}
