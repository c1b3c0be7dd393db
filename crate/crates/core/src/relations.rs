//! Generation of the defining polynomial relations for a braid closure.
//!
//! Two families of relations cut out the augmentations:
//!
//! - **closure relations**: slide *one* endpoint of a standard cord once
//!   around the closure (through every half twist of the braid) and expand
//!   the result in standard cords again.  The wrap is removable — the sliding
//!   endpoint's detour bounds a disk away from the link — so the expansion
//!   must equal the original cord, up to the component eigenvalue
//!   `Λ_c = lam[c]·mu[c]^{writhe_c}` picked up when the endpoint passes the
//!   marked exit of its component's representative strand.  Sliding the start
//!   endpoint gives one family (`left`), sliding the end endpoint the other
//!   (`right`); a cord with *both* endpoints slid is the fixed point of the
//!   whole-braid transport, which the two families imply jointly.
//! - **longitude relations**: the 0-framed longitude word of each component,
//!   read off the braid diagram, must act on cords as multiplication by
//!   `lam[c]`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::braid::{
    components, linking_numbers, meridian_tables, BraidWord, ComponentMap, FreeWord,
};
use crate::cord::{reduce, standard_value, CordExpr};
use crate::poly::{LaurentPoly, PolyContext, VarId};

/// A substitution on the standard-cord symbols `x[i][j]` (i ≠ j): each symbol
/// taken at one horizontal level of a braid diagram is rewritten as a
/// polynomial in the symbols at a lower level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportMap {
    ctx: PolyContext,
    images: BTreeMap<(u16, u16), LaurentPoly>,
}

impl TransportMap {
    pub fn identity(ctx: PolyContext) -> Self {
        let mut images = BTreeMap::new();
        for i in 1..=ctx.n {
            for j in 1..=ctx.n {
                if i != j {
                    images.insert((i, j), LaurentPoly::var(ctx, VarId::x(i, j)).unwrap());
                }
            }
        }
        TransportMap { ctx, images }
    }

    pub fn ctx(&self) -> PolyContext {
        self.ctx
    }

    /// Image of the symbol `x[i][j]`.
    pub fn image(&self, i: u16, j: u16) -> &LaurentPoly {
        self.images
            .get(&(i, j))
            .unwrap_or_else(|| panic!("transport map has no image for x[{i}][{j}]"))
    }

    pub fn images(&self) -> impl Iterator<Item = (&(u16, u16), &LaurentPoly)> {
        self.images.iter()
    }

    /// Apply the substitution to a polynomial (x-variables only; eigenvalue
    /// variables pass through).
    pub fn apply(&self, p: &LaurentPoly) -> LaurentPoly {
        p.substitute_x(&|i, j| self.images.get(&(i, j)).cloned())
            .expect("transport images live in the same context")
    }

    /// Compose with a substitution one level deeper: the result maps
    /// `x ↦ deeper.apply(self.image(x))`.
    pub fn then(&self, deeper: &TransportMap) -> TransportMap {
        assert_eq!(self.ctx, deeper.ctx, "context mismatch in transport chain");
        TransportMap {
            ctx: self.ctx,
            images: self
                .images
                .iter()
                .map(|(&k, v)| (k, deeper.apply(v)))
                .collect(),
        }
    }
}

fn xv(ctx: PolyContext, i: u16, j: u16) -> LaurentPoly {
    LaurentPoly::var(ctx, VarId::x(i, j)).unwrap()
}

/// The symbol substitution across one half twist σ_s^{sign}: each standard
/// cord read just above the twist is expressed in the cords just below it.
/// `labels[p-1]` is the component of the strand occupying position p *below*
/// the twist; only the entry at the overpassing position enters (through its
/// meridian eigenvalue `mu`).
pub fn half_twist_transport(
    ctx: PolyContext,
    labels: &[u16],
    s: u16,
    sign: i8,
) -> TransportMap {
    assert_eq!(labels.len(), usize::from(ctx.n), "one label per strand");
    assert!(
        s >= 1 && s < ctx.n,
        "twist position {s} out of range for {} strands",
        ctx.n
    );
    assert!(sign == 1 || sign == -1, "twist sign must be ±1");
    // Positive twist: the strand below at position s passes over; negative:
    // the strand below at position s+1 does.
    let over = if sign == 1 { s } else { s + 1 };
    let mu = VarId::mu(labels[usize::from(over) - 1]);
    let mu_inv = LaurentPoly::var_pow(ctx, mu, -1).unwrap();
    let mu_pos = LaurentPoly::var(ctx, mu).unwrap();
    let mut images = BTreeMap::new();
    let other = |q: u16| q != s && q != s + 1;
    for i in 1..=ctx.n {
        for j in 1..=ctx.n {
            if i == j {
                continue;
            }
            let img = if sign == 1 {
                match (i, j) {
                    _ if other(i) && other(j) => xv(ctx, i, j),
                    (i, j) if other(i) && j == s + 1 => xv(ctx, i, s),
                    (i, j) if other(i) && j == s => {
                        xv(ctx, i, s + 1).sub(&xv(ctx, i, s).mul(&xv(ctx, s, s + 1)))
                    }
                    (i, j) if i == s + 1 && other(j) => xv(ctx, s, j),
                    (i, j) if i == s && other(j) => xv(ctx, s + 1, j)
                        .add(&mu_inv.mul(&xv(ctx, s + 1, s)).mul(&xv(ctx, s, j))),
                    (i, j) if i == s && j == s + 1 => mu_inv.mul(&xv(ctx, s + 1, s)),
                    _ => mu_pos.mul(&xv(ctx, s, s + 1)),
                }
            } else {
                match (i, j) {
                    _ if other(i) && other(j) => xv(ctx, i, j),
                    (i, j) if other(i) && j == s => xv(ctx, i, s + 1),
                    (i, j) if other(i) && j == s + 1 => xv(ctx, i, s)
                        .add(&mu_inv.mul(&xv(ctx, i, s + 1)).mul(&xv(ctx, s + 1, s))),
                    (i, j) if i == s && other(j) => xv(ctx, s + 1, j),
                    (i, j) if i == s + 1 && other(j) => {
                        xv(ctx, s, j).sub(&xv(ctx, s, s + 1).mul(&xv(ctx, s + 1, j)))
                    }
                    (i, j) if i == s && j == s + 1 => mu_inv.mul(&xv(ctx, s + 1, s)),
                    _ => mu_pos.mul(&xv(ctx, s, s + 1)),
                }
            };
            images.insert((i, j), img);
        }
    }
    TransportMap { ctx, images }
}

/// The composite substitution through the whole braid word: the standard-cord
/// symbols at the top expressed in the symbols at the bottom.
pub fn braid_transport(b: &BraidWord) -> TransportMap {
    let cm = components(b);
    let ctx = PolyContext::new(cm.n, cm.r);
    // labels[p-1] = component of the strand at position p at the current level.
    let mut labels: Vec<u16> = cm.comp.clone();
    let mut m = TransportMap::identity(ctx);
    for l in b.letters() {
        let t = half_twist_transport(ctx, &labels, l.k, l.sign);
        m = t.then(&m);
        labels.swap(usize::from(l.k) - 1, usize::from(l.k));
    }
    // Closing up, the strand arriving at top position p belongs to the same
    // component as bottom strand p.
    assert_eq!(labels, cm.comp, "labels must close up along the closure");
    m
}

/// `Λ_c = lam[c]·mu[c]^{self-writhe of c}` as a polynomial.
fn component_eigenvalue(ctx: PolyContext, c: u16, self_writhe: i64) -> LaurentPoly {
    LaurentPoly::var(ctx, VarId::lam(c))
        .unwrap()
        .mul_var_pow(VarId::mu(c), i32::try_from(self_writhe).expect("small writhe"))
        .unwrap()
}

/// The n×n matrix of standard-cord values: `x[i][j]` off the diagonal and
/// `1 − mu[c(i)]` on it.
fn standard_matrix(cm: &ComponentMap) -> Vec<Vec<LaurentPoly>> {
    (1..=cm.n)
        .map(|i| (1..=cm.n).map(|j| standard_value(cm, i, j)).collect())
        .collect()
}

fn poly_identity(ctx: PolyContext, n: u16) -> Vec<Vec<LaurentPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one(ctx)
                    } else {
                        LaurentPoly::zero(ctx)
                    }
                })
                .collect()
        })
        .collect()
}

fn poly_mat_mul(a: &[Vec<LaurentPoly>], b: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .map(|(l, brow)| l.mul(&brow[j]))
                        .reduce(|p, q| p.add(&q))
                        .expect("nonempty matrix")
                })
                .collect()
        })
        .collect()
}

/// Left-multiply rows (s, s+1) of `m` (0-based row index `s`) by the 2×2
/// block `blk`.
fn apply_block_rows(m: &mut [Vec<LaurentPoly>], s: usize, blk: &[[LaurentPoly; 2]; 2]) {
    for j in 0..m[0].len() {
        let top = blk[0][0].mul(&m[s][j]).add(&blk[0][1].mul(&m[s + 1][j]));
        let bot = blk[1][0].mul(&m[s][j]).add(&blk[1][1].mul(&m[s + 1][j]));
        m[s][j] = top;
        m[s + 1][j] = bot;
    }
}

/// Right-multiply columns (s, s+1) of `m` by the 2×2 block `blk`.
fn apply_block_cols(m: &mut [Vec<LaurentPoly>], s: usize, blk: &[[LaurentPoly; 2]; 2]) {
    for row in m.iter_mut() {
        let left = blk[0][0].mul(&row[s]).add(&blk[1][0].mul(&row[s + 1]));
        let right = blk[0][1].mul(&row[s]).add(&blk[1][1].mul(&row[s + 1]));
        row[s] = left;
        row[s + 1] = right;
    }
}

/// The whole-braid transport of the standard-cord matrix, factored as a
/// two-sided matrix product: with `X` the standard-value matrix and
/// `(L, R)` the returned pair, transporting every standard cord through the
/// braid equals `L·X·R` entrywise, diagonals included.  `L` collects, one
/// half twist at a time, the expansion coefficients of the cord's start
/// endpoint sliding through the braid; `R` those of the end endpoint.  Each
/// twist contributes a 2×2 block at its position, with entries read off the
/// partially transported matrix, so the factors close up exactly when the
/// strand labels do.
pub fn transport_factors(b: &BraidWord) -> (Vec<Vec<LaurentPoly>>, Vec<Vec<LaurentPoly>>) {
    let cm = components(b);
    let ctx = PolyContext::new(cm.n, cm.r);
    let mut labels = cm.comp.clone();
    let mut cur = standard_matrix(&cm);
    let mut left = poly_identity(ctx, cm.n);
    let mut right = poly_identity(ctx, cm.n);
    let one = LaurentPoly::one(ctx);
    let zero = LaurentPoly::zero(ctx);
    for l in b.letters() {
        let s = usize::from(l.k) - 1;
        let a = cur[s + 1][s].clone();
        let bb = cur[s][s + 1].clone();
        let (row_blk, col_blk) = if l.sign == 1 {
            let mu_inv =
                LaurentPoly::var_pow(ctx, VarId::mu(labels[s]), -1).expect("mu is invertible");
            (
                [
                    [mu_inv.mul(&a), one.clone()],
                    [one.clone(), zero.clone()],
                ],
                [[bb.neg(), one.clone()], [one.clone(), zero.clone()]],
            )
        } else {
            let mu_inv =
                LaurentPoly::var_pow(ctx, VarId::mu(labels[s + 1]), -1).expect("mu is invertible");
            (
                [[zero.clone(), one.clone()], [one.clone(), bb.neg()]],
                [
                    [zero.clone(), one.clone()],
                    [one.clone(), mu_inv.mul(&a)],
                ],
            )
        };
        apply_block_rows(&mut cur, s, &row_blk);
        apply_block_rows(&mut left, s, &row_blk);
        apply_block_cols(&mut cur, s, &col_blk);
        apply_block_cols(&mut right, s, &col_blk);
        labels.swap(s, s + 1);
    }
    assert_eq!(labels, cm.comp, "labels must close up along the closure");
    (left, right)
}

/// The closure relations.  With `(L, R)` the transport factors, `X` the
/// standard-value matrix and `Λ_q` the eigenvalue weight of strands exiting
/// at their component's representative position (1 otherwise), emit for every
/// pair (i, j), diagonal included:
///
/// - `Λ_i·(L·X)[i][j] − X[i][j]` (start endpoint slid once around), and
/// - `(X·R)[i][j] − Λ_j·X[i][j]` (end endpoint slid once around).
///
/// Identically zero relations are dropped; the rest come in family-major,
/// then lexicographic (i, j) order.
pub fn closure_relations(b: &BraidWord) -> Vec<LaurentPoly> {
    let cm = components(b);
    let ctx = PolyContext::new(cm.n, cm.r);
    let link = linking_numbers(b);
    let perm = b.closure_permutation();
    let (left, right) = transport_factors(b);
    let x = standard_matrix(&cm);
    let lx = poly_mat_mul(&left, &x);
    let xr = poly_mat_mul(&x, &right);
    let eigen: Vec<LaurentPoly> = (1..=cm.r)
        .map(|c| component_eigenvalue(ctx, c, link.self_writhe[usize::from(c) - 1]))
        .collect();
    let weight = |q: u16| -> Option<&LaurentPoly> {
        let c = cm.of(q);
        if perm[usize::from(q) - 1] == cm.rep(c) {
            Some(&eigen[usize::from(c) - 1])
        } else {
            None
        }
    };
    let mut out = Vec::new();
    for (i, lrow) in lx.iter().enumerate() {
        for (j, wrapped) in lrow.iter().enumerate() {
            let lhs = match weight(i as u16 + 1) {
                Some(e) => e.mul(wrapped),
                None => wrapped.clone(),
            };
            let rel = lhs.sub(&x[i][j]);
            if !rel.is_zero() {
                out.push(rel);
            }
        }
    }
    for (i, xrow) in xr.iter().enumerate() {
        for (j, wrapped) in xrow.iter().enumerate() {
            let rhs = match weight(j as u16 + 1) {
                Some(e) => e.mul(&x[i][j]),
                None => x[i][j].clone(),
            };
            let rel = wrapped.sub(&rhs);
            if !rel.is_zero() {
                out.push(rel);
            }
        }
    }
    out
}

/// The longitude word of component c read off the braid diagram, as a word in
/// the bottom meridians, together with the framing correction exponent
/// (minus the component's self-writhe). The walk starts at the bottom of the
/// representative strand and follows the closure all the way around; each
/// time the strand passes *under* a crossing it picks up the meridian of the
/// overpassing strand (inverted for negative crossings). The factors compose
/// in *reverse* traversal order — in this crate's word convention (the first
/// letter of a cord word acts at the cord's start) that is what makes the
/// result commute with the representative strand's meridian, as a longitude
/// must.
pub fn longitude_word(b: &BraidWord, c: u16) -> (FreeWord, i64) {
    let cm = components(b);
    let link = linking_numbers(b);
    let tables = meridian_tables(b);
    let perm = b.closure_permutation();
    let rho = cm.rep(c);
    let mut factors: Vec<FreeWord> = Vec::new();
    let mut strand = rho;
    let mut passes = 0u32;
    loop {
        passes += 1;
        assert!(passes <= u32::from(b.n()), "closure walk must terminate");
        let mut pos = strand;
        for (v, l) in b.letters().iter().enumerate() {
            if pos == l.k {
                if l.sign == 1 {
                    // Overpass: no factor.
                } else {
                    factors.push(tables[v][usize::from(l.k)].inverse());
                }
                pos = l.k + 1;
            } else if pos == l.k + 1 {
                if l.sign == 1 {
                    factors.push(tables[v][usize::from(l.k) - 1].clone());
                }
                pos = l.k;
            }
        }
        debug_assert_eq!(pos, perm[usize::from(strand) - 1]);
        strand = pos;
        if strand == rho {
            break;
        }
    }
    let word = factors
        .iter()
        .rev()
        .fold(FreeWord::identity(), |acc, f| acc.concat(f));
    (word, -link.self_writhe[usize::from(c) - 1])
}

/// The longitude relations: with `ℓ_c` the longitude word of component c and
/// ρ its representative strand, every cord that starts or ends on ρ must
/// satisfy `mu[c]^{f_c}·F(ℓ_c-conjugated cord) = lam[c]·(standard cord)`.
/// Identically zero relations are dropped.
pub fn longitude_relations(b: &BraidWord) -> Vec<LaurentPoly> {
    let cm = components(b);
    let ctx = PolyContext::new(cm.n, cm.r);
    let mut out = Vec::new();
    for c in 1..=cm.r {
        let (lw, f) = longitude_word(b, c);
        let rho = cm.rep(c);
        let framing = LaurentPoly::var_pow(
            ctx,
            VarId::mu(c),
            i32::try_from(f).expect("small framing exponent"),
        )
        .unwrap();
        let lam = LaurentPoly::var(ctx, VarId::lam(c)).unwrap();
        let mut push = |i: u16, j: u16| {
            let lhs = framing.mul(&reduce(&CordExpr::new(i, lw.clone(), j), &cm));
            let rel = lhs.sub(&lam.mul(&standard_value(&cm, i, j)));
            if !rel.is_zero() {
                out.push(rel);
            }
        };
        for j in 1..=cm.n {
            push(rho, j);
        }
        for i in 1..=cm.n {
            if i != rho {
                push(i, rho);
            }
        }
    }
    out
}

/// Braid data plus the full defining relation set of its closure.
#[derive(Clone, Debug)]
pub struct RelationSet {
    braid: BraidWord,
    cm: ComponentMap,
    closure: Vec<LaurentPoly>,
    longitude: Vec<LaurentPoly>,
}

impl RelationSet {
    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn components(&self) -> &ComponentMap {
        &self.cm
    }

    pub fn ctx(&self) -> PolyContext {
        PolyContext::new(self.cm.n, self.cm.r)
    }

    pub fn closure(&self) -> &[LaurentPoly] {
        &self.closure
    }

    pub fn longitude(&self) -> &[LaurentPoly] {
        &self.longitude
    }

    /// All relations, closure first.
    pub fn all(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.closure.iter().chain(self.longitude.iter())
    }

    pub fn to_json(&self) -> Value {
        let render = |v: &[LaurentPoly]| -> Vec<String> {
            v.iter().map(LaurentPoly::render).collect()
        };
        json!({
            "braid": &self.braid,
            "components": &self.cm,
            "closure": render(&self.closure),
            "longitude": render(&self.longitude),
        })
    }
}

pub fn all_relations(b: &BraidWord) -> RelationSet {
    RelationSet {
        braid: b.clone(),
        cm: components(b),
        closure: closure_relations(b),
        longitude: longitude_relations(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::relation_rewrites;
    use proptest::prelude::*;

    fn braid(text: &str) -> BraidWord {
        BraidWord::parse(text).unwrap()
    }

    fn polys(b: &BraidWord, texts: &[&str]) -> Vec<LaurentPoly> {
        let cm = components(b);
        let ctx = PolyContext::new(cm.n, cm.r);
        texts
            .iter()
            .map(|t| LaurentPoly::parse(ctx, t).unwrap())
            .collect()
    }

    #[test]
    fn inverse_twists_cancel() {
        for text in ["n=2; 1 -1", "n=2; -1 1", "n=3; 2 -2", "n=3; -1 1"] {
            let b = braid(text);
            let ctx = PolyContext::new(b.n(), components(&b).r);
            assert_eq!(
                braid_transport(&b),
                TransportMap::identity(ctx),
                "transport of {text} should be the identity"
            );
        }
    }

    #[test]
    fn transport_respects_braid_relations() {
        assert_eq!(
            braid_transport(&braid("n=3; 1 2 1")),
            braid_transport(&braid("n=3; 2 1 2"))
        );
        assert_eq!(
            braid_transport(&braid("n=4; 1 3")),
            braid_transport(&braid("n=4; 3 1"))
        );
    }

    #[test]
    fn closure_relations_empty_braid() {
        let b = braid("n=2;");
        let got = closure_relations(&b);
        let want = polys(
            &b,
            &[
                // Start endpoint slid once around.
                "lam[1] - lam[1]*mu[1] - 1 + mu[1]",
                "lam[1]*x[1][2] - x[1][2]",
                "lam[2]*x[2][1] - x[2][1]",
                "lam[2] - lam[2]*mu[2] - 1 + mu[2]",
                // End endpoint slid once around.
                "1 - mu[1] - lam[1] + lam[1]*mu[1]",
                "x[1][2] - lam[2]*x[1][2]",
                "x[2][1] - lam[1]*x[2][1]",
                "1 - mu[2] - lam[2] + lam[2]*mu[2]",
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn closure_relations_single_positive_twist() {
        let b = braid("n=2; 1");
        let got = closure_relations(&b);
        let want = polys(
            &b,
            &[
                "mu[1]^-1*x[2][1] - 1 + mu[1]",
                "mu[1]^-1*x[1][2]*x[2][1] + 1 - mu[1] - x[1][2]",
                "lam[1]*mu[1] - lam[1]*mu[1]^2 - x[2][1]",
                "lam[1]*mu[1]*x[1][2] - 1 + mu[1]",
                "mu[1]*x[1][2] - 1 + mu[1]",
                "1 - mu[1] - lam[1]*mu[1]*x[1][2]",
                "1 - mu[1] - x[1][2]*x[2][1] - x[2][1]",
                "x[2][1] - lam[1]*mu[1] + lam[1]*mu[1]^2",
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn closure_relations_single_negative_twist() {
        let b = braid("n=2; -1");
        let got = closure_relations(&b);
        let want = polys(
            &b,
            &[
                "x[2][1] - 1 + mu[1]",
                "1 - mu[1] - x[1][2]",
                "lam[1]*mu[1]^-1 - lam[1] - lam[1]*mu[1]^-1*x[1][2]*x[2][1] - x[2][1]",
                "lam[1]*x[1][2] - 1 + mu[1]",
                "x[1][2] - 1 + mu[1]",
                "1 - mu[1] + mu[1]^-1*x[1][2]*x[2][1] - lam[1]*mu[1]^-1*x[1][2]",
                "1 - mu[1] - x[2][1]",
                "mu[1]^-1*x[2][1] - lam[1]*mu[1]^-1 + lam[1]",
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn closure_relations_hopf() {
        let b = braid("n=2; 1 1");
        let got = closure_relations(&b);
        let want = polys(
            &b,
            &[
                "lam[1] - lam[1]*mu[1] + lam[1]*mu[2]^-1*x[1][2]*x[2][1] - 1 + mu[1]",
                "lam[1]*x[1][2] + lam[1]*mu[2]^-1*x[1][2]^2*x[2][1] \
                 + lam[1]*mu[1]*mu[2]^-1*x[1][2] - lam[1]*mu[1]*x[1][2] - x[1][2]",
                "lam[2]*mu[1]^-1*x[2][1] - x[2][1]",
                "lam[2]*mu[1]^-1*x[1][2]*x[2][1] + lam[2] - lam[2]*mu[2] - 1 + mu[2]",
                "1 - mu[1] - x[1][2]*x[2][1] - lam[1] + lam[1]*mu[1]",
                "mu[1]*x[1][2] - lam[2]*x[1][2]",
                "x[2][1] + mu[1]^-1*x[1][2]*x[2][1]^2 - mu[1]^-1*x[2][1] \
                 + mu[1]^-1*mu[2]*x[2][1] - lam[1]*x[2][1]",
                "1 - mu[2] - x[1][2]*x[2][1] - lam[2] + lam[2]*mu[2]",
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn transport_factors_match_substitution() {
        for text in [
            "n=1;",
            "n=2; 1",
            "n=2; -1",
            "n=2; 1 1",
            "n=2; 1 1 1",
            "n=3; -2 -1 -2",
            "n=3; 1 -2 1 -2",
            "n=3; 1 1 2 2 -1 -2 -2",
        ] {
            let b = braid(text);
            let cm = components(&b);
            let (l, r) = transport_factors(&b);
            let x = standard_matrix(&cm);
            let lxr = poly_mat_mul(&poly_mat_mul(&l, &x), &r);
            let m = braid_transport(&b);
            for i in 1..=cm.n {
                for j in 1..=cm.n {
                    let got = &lxr[usize::from(i) - 1][usize::from(j) - 1];
                    let want = if i == j {
                        standard_value(&cm, i, i)
                    } else {
                        m.image(i, j).clone()
                    };
                    assert_eq!(got, &want, "{text}: entry ({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn longitude_words_pinned() {
        let (w, f) = longitude_word(&braid("n=2; 1"), 1);
        assert_eq!(w.as_ints(), vec![1]);
        assert_eq!(f, -1);

        let (w, f) = longitude_word(&braid("n=2; -1"), 1);
        assert_eq!(w.as_ints(), vec![-2]);
        assert_eq!(f, 1);

        let (w, f) = longitude_word(&braid("n=2; 1 1"), 1);
        assert_eq!(w.as_ints(), vec![1, 2, -1]);
        assert_eq!(f, 0);

        // The 0-framed right-trefoil longitude: with m1 ↦ [[1,1],[0,1]] and
        // m2 ↦ [[1,0],[-1,1]] in SL_2(Z) this word maps to -m1^{-3}, so
        // together with the mu^{-3} framing it is the torus-knot longitude
        // (center)·m1^{-6}; the reverse-order reading fails to commute
        // with m1.
        let (w, f) = longitude_word(&braid("n=2; 1 1 1"), 1);
        assert_eq!(w.as_ints(), vec![1, 2, 1, -2, 1, 2, -1]);
        assert_eq!(f, -3);

        let (w, f) = longitude_word(&braid("n=1;"), 1);
        assert!(w.is_identity());
        assert_eq!(f, 0);
    }

    #[test]
    fn longitude_relations_trivial_braid() {
        let b = braid("n=1;");
        assert_eq!(
            longitude_relations(&b),
            polys(&b, &["1 - mu[1] - lam[1] + lam[1]*mu[1]"])
        );
    }

    #[test]
    fn longitude_relations_single_positive_twist() {
        let b = braid("n=2; 1");
        let got = longitude_relations(&b);
        let want = polys(
            &b,
            &[
                "1 - mu[1] - lam[1] + lam[1]*mu[1]",
                "x[1][2] - lam[1]*x[1][2]",
                "x[2][1] - lam[1]*x[2][1]",
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn longitude_relations_single_negative_twist() {
        let b = braid("n=2; -1");
        let got = longitude_relations(&b);
        let want = polys(
            &b,
            &[
                "mu[1] - mu[1]^2 + x[1][2]*x[2][1] - lam[1] + lam[1]*mu[1]",
                "x[1][2] - lam[1]*x[1][2]",
                "x[2][1] - lam[1]*x[2][1]",
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn longitude_relations_hopf_first_component() {
        let b = braid("n=2; 1 1");
        let got = longitude_relations(&b);
        // Component 1, j = 1: (1 - mu1) - x12*x21 - lam1*(1 - mu1).
        let cm = components(&b);
        let ctx = PolyContext::new(cm.n, cm.r);
        let first = LaurentPoly::parse(
            ctx,
            "1 - mu[1] - x[1][2]*x[2][1] - lam[1] + lam[1]*mu[1]",
        )
        .unwrap();
        assert_eq!(got[0], first);
    }

    /// Canonical encodings of all F_3 solutions of the full relation set.
    fn f3_solutions(b: &BraidWord) -> std::collections::BTreeSet<Vec<u64>> {
        let rels = all_relations(b);
        let cm = rels.components();
        crate::augment::enumerate_fp(&rels, 3, None, None)
            .unwrap()
            .augmentations
            .iter()
            .map(|a| {
                let mut key = Vec::new();
                for c in 1..=cm.r {
                    key.push(*a.mu(c));
                    key.push(*a.lambda(c));
                }
                for i in 1..=cm.n {
                    for j in 1..=cm.n {
                        if i != j {
                            key.push(*a.x(i, j));
                        }
                    }
                }
                key
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn solutions_invariant_under_rewrites(
            n in 2u16..=3,
            word in proptest::collection::vec((1i64..=2, prop_oneof![Just(1i64), Just(-1)]), 0..=5),
        ) {
            let letters: Vec<i64> = word
                .iter()
                .map(|&(k, s)| (k.min(i64::from(n) - 1)) * s)
                .collect();
            let b = BraidWord::from_ints(n, &letters).unwrap();
            let base = f3_solutions(&b);
            for rw in relation_rewrites(&b) {
                prop_assert_eq!(braid_transport(&rw), braid_transport(&b));
                prop_assert_eq!(f3_solutions(&rw), base.clone());
            }
        }
    }
}
