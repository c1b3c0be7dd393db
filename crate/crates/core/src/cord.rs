//! Reduction of framed cords to polynomials in standard-cord variables.
//!
//! A cord is held in evaluation form `F(w; i, j)`: start strand i, a
//! free-group word w in the meridian generators, end strand j. Reduction
//! applies, on the leading letter of w:
//!
//! - R1 (base): `F(ε; i, j) = x[i][j]`, with the diagonal normalized to
//!   `1 − mu[comp(i)]`;
//! - R2: `F(m_t·w'; i, j) = F(w'; i, j) − x[i][t]·F(w'; t, j)`;
//! - R3: `F(m_t⁻¹·w'; i, j) = F(w'; i, j) + mu[comp(t)]⁻¹·x[i][t]·F(w'; t, j)`;
//!
//! where the coefficient `x[i][t]` is itself normalized on the diagonal. The
//! same rules with the diagonal kept as a formal `x[i][i]` variable give the
//! un-normalized variant used by the support invariants.
//!
//! `oracle_reduce` recomputes the same value by expanding a randomly chosen
//! (not necessarily leading) letter at each step via the interpolation
//! identity `F(u·m_t^{±1}·v; i, j) = F(u·v; i, j) ∓ mu[comp(t)]^{(0|−1)}·
//! F(u; i, t)·F(v; t, j)` — an independent confluence check.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::braid::{ComponentMap, FreeWord};
use crate::poly::{LaurentPoly, PolyContext, VarId};

/// A framed cord in evaluation form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CordExpr {
    pub i: u16,
    pub w: FreeWord,
    pub j: u16,
}

impl CordExpr {
    pub fn new(i: u16, w: FreeWord, j: u16) -> Self {
        CordExpr { i, w, j }
    }
}

impl fmt::Display for CordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}; {}; {})", self.i, self.w, self.j)
    }
}

fn ctx_of(cm: &ComponentMap) -> PolyContext {
    PolyContext::new(cm.n, cm.r)
}

fn check_strand(cm: &ComponentMap, s: u16) {
    assert!(
        (1..=cm.n).contains(&s),
        "strand {s} out of range for {} strands",
        cm.n
    );
}

/// The reduced value of the standard cord from strand i to strand j:
/// `x[i][j]`, with `1 − mu[comp(i)]` on the diagonal.
pub fn standard_value(cm: &ComponentMap, i: u16, j: u16) -> LaurentPoly {
    check_strand(cm, i);
    check_strand(cm, j);
    let ctx = ctx_of(cm);
    if i == j {
        LaurentPoly::one(ctx).sub(&LaurentPoly::var(ctx, VarId::mu(cm.of(i))).unwrap())
    } else {
        LaurentPoly::var(ctx, VarId::x(i, j)).unwrap()
    }
}

fn base_value(cm: &ComponentMap, i: u16, j: u16, normalized: bool) -> LaurentPoly {
    if normalized {
        standard_value(cm, i, j)
    } else {
        LaurentPoly::var(ctx_of(cm), VarId::x(i, j)).unwrap()
    }
}

fn mu_inv(cm: &ComponentMap, t: u16) -> LaurentPoly {
    LaurentPoly::var_pow(ctx_of(cm), VarId::mu(cm.of(t)), -1).unwrap()
}

fn reduce_impl(expr: &CordExpr, cm: &ComponentMap, normalized: bool) -> LaurentPoly {
    check_strand(cm, expr.i);
    check_strand(cm, expr.j);
    let units: Vec<(u16, i8)> = expr.w.units().collect();
    for &(t, _) in &units {
        check_strand(cm, t);
    }
    let n = usize::from(cm.n);
    // level[i-1] = F(current suffix; i, j); start from the empty suffix and
    // prepend letters right to left. This memoizes every (suffix, start)
    // subproblem exactly once.
    let mut level: Vec<LaurentPoly> = (1..=cm.n)
        .map(|i| base_value(cm, i, expr.j, normalized))
        .collect();
    for &(t, sign) in units.iter().rev() {
        let ft = level[usize::from(t) - 1].clone();
        let mut next = Vec::with_capacity(n);
        for i in 1..=cm.n {
            let coeff = base_value(cm, i, t, normalized);
            let term = coeff.mul(&ft);
            let prev = &level[usize::from(i) - 1];
            next.push(if sign > 0 {
                prev.sub(&term)
            } else {
                prev.add(&term.mul(&mu_inv(cm, t)))
            });
        }
        level = next;
    }
    level[usize::from(expr.i) - 1].clone()
}

/// Reduce a cord to a polynomial in standard-cord variables (diagonal
/// normalized away: no `x[i][i]` appears in the output).
pub fn reduce(expr: &CordExpr, cm: &ComponentMap) -> LaurentPoly {
    reduce_impl(expr, cm, true)
}

/// The un-normalized variant keeping formal `x[i][i]` symbols; it exists for
/// the support invariants (every monomial keeps an `x[i][·]` and an `x[·][j]`
/// factor, visible only before normalization).
pub fn reduce_unnormalized(expr: &CordExpr, cm: &ComponentMap) -> LaurentPoly {
    reduce_impl(expr, cm, false)
}

/// Same value as [`reduce`], computed by expanding a randomly chosen letter
/// at each step (seeded, reproducible). Exponential in |w|; intended for
/// confluence testing on short words.
pub fn oracle_reduce(expr: &CordExpr, cm: &ComponentMap, seed: u64) -> LaurentPoly {
    check_strand(cm, expr.i);
    check_strand(cm, expr.j);
    let units: Vec<(u16, i8)> = expr.w.units().collect();
    for &(t, _) in &units {
        check_strand(cm, t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    oracle_go(&units, expr.i, expr.j, cm, &mut rng)
}

fn oracle_go(
    units: &[(u16, i8)],
    i: u16,
    j: u16,
    cm: &ComponentMap,
    rng: &mut ChaCha8Rng,
) -> LaurentPoly {
    if units.is_empty() {
        return standard_value(cm, i, j);
    }
    let pos = rng.gen_range(0..units.len());
    let (t, sign) = units[pos];
    let mut uv = units[..pos].to_vec();
    uv.extend_from_slice(&units[pos + 1..]);
    let f_uv = oracle_go(&uv, i, j, cm, rng);
    let f_u = oracle_go(&units[..pos], i, t, cm, rng);
    let f_v = oracle_go(&units[pos + 1..], t, j, cm, rng);
    let prod = f_u.mul(&f_v);
    if sign > 0 {
        f_uv.sub(&prod)
    } else {
        f_uv.add(&prod.mul(&mu_inv(cm, t)))
    }
}
