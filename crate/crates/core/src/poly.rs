//! Sparse Laurent polynomials with exact integer coefficients in the
//! variables `x[i][j]` (cord values, polynomial), `mu[c]` and `lam[c]`
//! (meridian/longitude eigenvalues, invertible), for a fixed number of
//! strands `n` and link components `r`.
//!
//! Polynomials carry their variable context; mixing contexts in arithmetic is
//! a programming error and panics, while the deliberate context enlargements
//! (stabilization adds a strand) go through [`LaurentPoly::promote`].
//! The text form produced by `Display` is canonical and parsed back by
//! [`LaurentPoly::parse`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;

/// Variable universe descriptor: strands `1..=n`, components `1..=r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyContext {
    pub n: u16,
    pub r: u16,
}

impl PolyContext {
    pub fn new(n: u16, r: u16) -> Self {
        PolyContext { n, r }
    }
}

/// One variable: a cord value `x[i][j]`, a meridian eigenvalue `mu[c]`, or a
/// longitude eigenvalue `lam[c]`. Ordering is `X < Mu < Lam`, then by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    X { i: u16, j: u16 },
    Mu(u16),
    Lam(u16),
}

impl VarId {
    pub fn x(i: u16, j: u16) -> Self {
        VarId::X { i, j }
    }
    pub fn mu(c: u16) -> Self {
        VarId::Mu(c)
    }
    pub fn lam(c: u16) -> Self {
        VarId::Lam(c)
    }

    /// Whether negative exponents are allowed (only the eigenvalue variables
    /// are invertible in the coefficient ring).
    pub fn is_invertible(&self) -> bool {
        !matches!(self, VarId::X { .. })
    }

    fn validate(&self, ctx: &PolyContext) -> Result<(), PolyError> {
        let ok = match *self {
            VarId::X { i, j } => (1..=ctx.n).contains(&i) && (1..=ctx.n).contains(&j),
            VarId::Mu(c) | VarId::Lam(c) => (1..=ctx.r).contains(&c),
        };
        if ok {
            Ok(())
        } else {
            Err(PolyError::VarOutOfRange {
                var: *self,
                n: ctx.n,
                r: ctx.r,
            })
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::X { i, j } => write!(f, "x[{i}][{j}]"),
            VarId::Mu(c) => write!(f, "mu[{c}]"),
            VarId::Lam(c) => write!(f, "lam[{c}]"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable {var} out of range for context n={n}, r={r}")]
    VarOutOfRange { var: VarId, n: u16, r: u16 },
    #[error("context mismatch: n={},r={} vs n={},r={}", .0.n, .0.r, .1.n, .1.r)]
    CtxMismatch(PolyContext, PolyContext),
    #[error("negative exponent {e} on non-invertible variable {var}")]
    NegativeXExponent { var: VarId, e: i32 },
    #[error("cannot shrink context from n={},r={} to n={},r={}", .0.n, .0.r, .1.n, .1.r)]
    BadPromotion(PolyContext, PolyContext),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no value assigned to variable {0}")]
    Missing(VarId),
    #[error("variable {0} occurs with a negative exponent but evaluates to zero")]
    NoInverse(VarId),
}

/// A product of variable powers: sorted by variable, no zero exponents,
/// `x` exponents strictly positive. Ordered by total degree (sum of absolute
/// exponents), then lexicographically — a graded order, so the constant
/// monomial sorts first and text output is stable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(VarId, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn exp_of(&self, v: VarId) -> i32 {
        self.exps
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Total degree counting absolute exponents.
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    fn from_pairs(pairs: impl IntoIterator<Item = (VarId, i32)>) -> Result<Self, PolyError> {
        let mut merged: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *merged.entry(v).or_insert(0) += e;
        }
        let mut exps = Vec::with_capacity(merged.len());
        for (v, e) in merged {
            if e == 0 {
                continue;
            }
            if e < 0 && !v.is_invertible() {
                return Err(PolyError::NegativeXExponent { var: v, e });
            }
            exps.push((v, e));
        }
        Ok(Monomial { exps })
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.iter().chain(other.iter()))
            .expect("product of valid monomials cannot go negative on x-variables")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial over the integers in a fixed [`PolyContext`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    ctx: PolyContext,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(ctx: PolyContext) -> Self {
        LaurentPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: PolyContext) -> Self {
        Self::constant(ctx, BigInt::one())
    }

    pub fn constant(ctx: PolyContext, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        LaurentPoly { ctx, terms }
    }

    pub fn int(ctx: PolyContext, c: i64) -> Self {
        Self::constant(ctx, BigInt::from(c))
    }

    pub fn var(ctx: PolyContext, v: VarId) -> Result<Self, PolyError> {
        Self::var_pow(ctx, v, 1)
    }

    pub fn var_pow(ctx: PolyContext, v: VarId, e: i32) -> Result<Self, PolyError> {
        v.validate(&ctx)?;
        let mono = Monomial::from_pairs([(v, e)])?;
        let mut terms = BTreeMap::new();
        terms.insert(mono, BigInt::one());
        Ok(LaurentPoly { ctx, terms })
    }

    pub fn ctx(&self) -> PolyContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn assert_same_ctx(&self, rhs: &Self) {
        assert_eq!(
            self.ctx, rhs.ctx,
            "polynomial context mismatch; promote() explicitly when enlarging"
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same_ctx(rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        LaurentPoly {
            ctx: self.ctx,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        LaurentPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_ctx(rhs);
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                let entry = terms.entry(m.clone()).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        LaurentPoly {
            ctx: self.ctx,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `mu[c]^e` / `lam[c]^e` style single-variable powers.
    pub fn mul_var_pow(&self, v: VarId, e: i32) -> Result<Self, PolyError> {
        Ok(self.mul(&Self::var_pow(self.ctx, v, e)?))
    }

    /// Re-tag the polynomial with an enlarged context (more strands and/or
    /// components); every variable stays as-is.
    pub fn promote(&self, new_ctx: PolyContext) -> Result<Self, PolyError> {
        if new_ctx.n < self.ctx.n || new_ctx.r < self.ctx.r {
            return Err(PolyError::BadPromotion(self.ctx, new_ctx));
        }
        Ok(LaurentPoly {
            ctx: new_ctx,
            terms: self.terms.clone(),
        })
    }

    /// Substitute polynomials for `x`-variables. `image(i, j)` returns the
    /// replacement for `x[i][j]`, or `None` to keep the variable unchanged.
    /// Eigenvalue variables are never substituted.
    pub fn substitute_x(
        &self,
        image: &dyn Fn(u16, u16) -> Option<LaurentPoly>,
    ) -> Result<Self, PolyError> {
        let mut result = Self::zero(self.ctx);
        for (mono, coeff) in &self.terms {
            let mut xs: Vec<(u16, u16, i32)> = Vec::new();
            let mut rest: Vec<(VarId, i32)> = Vec::new();
            for (v, e) in mono.iter() {
                match v {
                    VarId::X { i, j } => xs.push((i, j, e)),
                    _ => rest.push((v, e)),
                }
            }
            let mut acc = LaurentPoly {
                ctx: self.ctx,
                terms: BTreeMap::from([(
                    Monomial::from_pairs(rest).expect("eigenvalue exponents are unrestricted"),
                    coeff.clone(),
                )]),
            };
            for (i, j, e) in xs {
                let factor = match image(i, j) {
                    Some(img) => {
                        if img.ctx != self.ctx {
                            return Err(PolyError::CtxMismatch(self.ctx, img.ctx));
                        }
                        img
                    }
                    None => Self::var(self.ctx, VarId::x(i, j))?,
                };
                acc = acc.mul(&factor.pow(e as u32));
            }
            result = result.add(&acc);
        }
        Ok(result)
    }

    /// Evaluate in a field; `assign` must cover every variable that occurs.
    pub fn evaluate<F: Field>(
        &self,
        f: &F,
        assign: &dyn Fn(VarId) -> Option<F::Elem>,
    ) -> Result<F::Elem, EvalError> {
        let mut total = f.zero();
        for (mono, coeff) in &self.terms {
            let mut acc = f.from_bigint(coeff);
            for (v, e) in mono.iter() {
                let val = assign(v).ok_or(EvalError::Missing(v))?;
                let p = f.pow(&val, e as i64).ok_or(EvalError::NoInverse(v))?;
                acc = f.mul(&acc, &p);
            }
            total = f.add(&total, &acc);
        }
        Ok(total)
    }

    /// Canonical text form; inverse of [`LaurentPoly::parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(ctx: PolyContext, s: &str) -> Result<Self, PolyError> {
        Parser {
            ctx,
            bytes: s.as_bytes(),
            pos: 0,
        }
        .parse_poly()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mono, coeff)) in self.terms.iter().enumerate() {
            let neg = coeff.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = coeff.abs();
            if mono.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    ctx: PolyContext,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), PolyError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected {:?}", b as char))
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn parse_index(&mut self) -> Result<u16, PolyError> {
        self.expect(b'[')?;
        let n = self.parse_uint()?;
        self.expect(b']')?;
        u16::try_from(n.to_u64_digits().1.first().copied().unwrap_or(0))
            .ok()
            .filter(|_| n.bits() <= 16)
            .map_or_else(|| self.err("index out of range"), Ok)
    }

    fn parse_signed_int(&mut self) -> Result<BigInt, PolyError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let n = self.parse_uint()?;
        Ok(if neg { -n } else { n })
    }

    fn parse_word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    /// factor := uint | var ('^' signed_int)?
    fn parse_factor(&mut self) -> Result<(BigInt, Vec<(VarId, i32)>), PolyError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => Ok((self.parse_uint()?, Vec::new())),
            Some(b) if b.is_ascii_alphabetic() => {
                let word = self.parse_word();
                let var = match word.as_str() {
                    "x" => {
                        let i = self.parse_index()?;
                        let j = self.parse_index()?;
                        VarId::x(i, j)
                    }
                    "mu" => VarId::mu(self.parse_index()?),
                    "lam" => VarId::lam(self.parse_index()?),
                    _ => return self.err(format!("unknown variable {word:?}")),
                };
                var.validate(&self.ctx)?;
                let exp = if self.eat(b'^') {
                    let e = self.parse_signed_int()?;
                    i32::try_from(e)
                        .ok()
                        .map_or_else(|| self.err("exponent out of range"), Ok)?
                } else {
                    1
                };
                if exp < 0 && !var.is_invertible() {
                    return Err(PolyError::NegativeXExponent { var, e: exp });
                }
                Ok((BigInt::one(), vec![(var, exp)]))
            }
            _ => self.err("expected a coefficient or variable"),
        }
    }

    /// term := factor ('*' factor)*
    fn parse_term(&mut self) -> Result<LaurentPoly, PolyError> {
        let mut coeff = BigInt::one();
        let mut vars: Vec<(VarId, i32)> = Vec::new();
        loop {
            let (c, vs) = self.parse_factor()?;
            coeff *= c;
            vars.extend(vs);
            if !self.eat(b'*') {
                break;
            }
        }
        let mono = Monomial::from_pairs(vars)?;
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Ok(LaurentPoly {
            ctx: self.ctx,
            terms,
        })
    }

    /// poly := '-'? term (('+'|'-') term)*
    fn parse_poly(&mut self) -> Result<LaurentPoly, PolyError> {
        let mut result = LaurentPoly::zero(self.ctx);
        let mut negate = self.eat(b'-');
        loop {
            let term = self.parse_term()?;
            result = if negate {
                result.sub(&term)
            } else {
                result.add(&term)
            };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                None => return Ok(result),
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn ctx() -> PolyContext {
        PolyContext::new(3, 2)
    }

    fn v(ctx: PolyContext, var: VarId) -> LaurentPoly {
        LaurentPoly::var(ctx, var).unwrap()
    }

    #[test]
    fn construction_and_display() {
        let c = ctx();
        let one_minus_mu = LaurentPoly::one(c).sub(&v(c, VarId::mu(1)));
        assert_eq!(one_minus_mu.to_string(), "1 - mu[1]");

        let p = v(c, VarId::x(1, 2)).mul(&v(c, VarId::x(2, 1)));
        assert_eq!(p.to_string(), "x[1][2]*x[2][1]");

        let q = LaurentPoly::var_pow(c, VarId::mu(2), -1)
            .unwrap()
            .scale(&BigInt::from(-3))
            .add(&LaurentPoly::int(c, 7));
        assert_eq!(q.to_string(), "7 - 3*mu[2]^-1");

        assert_eq!(LaurentPoly::zero(c).to_string(), "0");
    }

    #[test]
    fn negative_x_exponent_rejected() {
        let c = ctx();
        assert!(matches!(
            LaurentPoly::var_pow(c, VarId::x(1, 2), -1),
            Err(PolyError::NegativeXExponent { .. })
        ));
        assert!(LaurentPoly::var_pow(c, VarId::mu(1), -3).is_ok());
    }

    #[test]
    fn out_of_range_vars_rejected() {
        let c = ctx();
        assert!(LaurentPoly::var(c, VarId::x(0, 1)).is_err());
        assert!(LaurentPoly::var(c, VarId::x(1, 4)).is_err());
        assert!(LaurentPoly::var(c, VarId::mu(3)).is_err());
        assert!(LaurentPoly::var(c, VarId::lam(0)).is_err());
    }

    #[test]
    #[should_panic(expected = "context mismatch")]
    fn ctx_mismatch_panics() {
        let a = LaurentPoly::one(PolyContext::new(2, 1));
        let b = LaurentPoly::one(PolyContext::new(3, 1));
        let _ = a.add(&b);
    }

    #[test]
    fn promote_enlarges_only() {
        let small = PolyContext::new(2, 1);
        let big = PolyContext::new(3, 2);
        let p = v(small, VarId::x(1, 2));
        assert_eq!(p.promote(big).unwrap().ctx(), big);
        assert!(matches!(
            LaurentPoly::one(big).promote(small),
            Err(PolyError::BadPromotion(..))
        ));
    }

    #[test]
    fn substitution_replaces_x_only() {
        let c = ctx();
        // p = mu[1] * x[1][2]^2
        let p = v(c, VarId::mu(1)).mul(&v(c, VarId::x(1, 2)).pow(2));
        // x[1][2] -> x[1][3] + 1
        let img = v(c, VarId::x(1, 3)).add(&LaurentPoly::one(c));
        let q = p
            .substitute_x(&|i, j| (i == 1 && j == 2).then(|| img.clone()))
            .unwrap();
        let expected = v(c, VarId::mu(1)).mul(&img.mul(&img));
        assert_eq!(q, expected);
    }

    #[test]
    fn evaluation_over_rationals_and_fp() {
        let c = ctx();
        // p = x[1][2] * mu[1]^-2 - 5
        let p = v(c, VarId::x(1, 2))
            .mul(&LaurentPoly::var_pow(c, VarId::mu(1), -2).unwrap())
            .sub(&LaurentPoly::int(c, 5));

        let q = Rationals;
        let val = p
            .evaluate(&q, &|var| match var {
                VarId::X { i: 1, j: 2 } => Some(q.from_i64(3)),
                VarId::Mu(1) => Some(q.parse_elem("2").unwrap()),
                _ => None,
            })
            .unwrap();
        assert_eq!(q.render(&val), "-17/4");

        let f5 = PrimeField::new(5).unwrap();
        let val5 = p
            .evaluate(&f5, &|var| match var {
                VarId::X { i: 1, j: 2 } => Some(3),
                VarId::Mu(1) => Some(2),
                _ => None,
            })
            .unwrap();
        // 3 * inv(4) - 5 = 3*4 = 12 = 2 (mod 5)
        assert_eq!(val5, 2);

        let missing = p.evaluate(&f5, &|_| None);
        assert_eq!(missing, Err(EvalError::Missing(VarId::x(1, 2))));

        let no_inv = p.evaluate(&f5, &|var| match var {
            VarId::X { i: 1, j: 2 } => Some(3),
            VarId::Mu(1) => Some(0),
            _ => None,
        });
        assert_eq!(no_inv, Err(EvalError::NoInverse(VarId::mu(1))));
    }

    #[test]
    fn parse_round_trip_examples() {
        let c = ctx();
        for text in [
            "0",
            "1",
            "-1",
            "x[1][2]",
            "1 - mu[1]",
            "7 - 3*mu[2]^-1",
            "x[1][2]*x[2][1] - x[1][3]*mu[1]^2*lam[1]",
            "11 + 2*x[3][1]^2*mu[1]^-1*lam[2]^-3",
        ] {
            let p = LaurentPoly::parse(c, text).unwrap();
            assert_eq!(p.to_string(), text, "canonical form should round-trip");
        }
        // Non-canonical input still parses to the same value.
        let a = LaurentPoly::parse(c, " - x[1][2] + 2 * x[1][2] ").unwrap();
        let b = LaurentPoly::parse(c, "x[1][2]").unwrap();
        assert_eq!(a, b);
        assert!(LaurentPoly::parse(c, "y[1]").is_err());
        assert!(LaurentPoly::parse(c, "x[1][2]^-1").is_err());
        assert!(LaurentPoly::parse(c, "mu[9]").is_err());
        assert!(LaurentPoly::parse(c, "1 +").is_err());
    }

    fn arb_var() -> impl Strategy<Value = VarId> {
        prop_oneof![
            (1u16..=3, 1u16..=3).prop_map(|(i, j)| VarId::x(i, j)),
            (1u16..=2).prop_map(VarId::mu),
            (1u16..=2).prop_map(VarId::lam),
        ]
    }

    prop_compose! {
        fn arb_poly()(
            terms in proptest::collection::vec(
                (proptest::collection::vec((arb_var(), -2i32..=2), 0..3), -4i64..=4),
                0..4,
            )
        ) -> LaurentPoly {
            let c = PolyContext::new(3, 2);
            let mut p = LaurentPoly::zero(c);
            for (vars, coeff) in terms {
                let mut t = LaurentPoly::int(c, coeff);
                for (var, e) in vars {
                    let e = if var.is_invertible() {
                        if e == 0 { 1 } else { e }
                    } else {
                        e.rem_euclid(3)
                    };
                    if e != 0 {
                        t = t.mul(&LaurentPoly::var_pow(c, var, e).unwrap());
                    }
                }
                p = p.add(&t);
            }
            p
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.sub(&a), LaurentPoly::zero(a.ctx()));
        }

        #[test]
        fn render_parse_round_trip(a in arb_poly()) {
            let text = a.to_string();
            let back = LaurentPoly::parse(a.ctx(), &text).unwrap();
            prop_assert_eq!(a, back);
        }

        #[test]
        fn evaluation_is_a_ring_hom(a in arb_poly(), b in arb_poly()) {
            let f = PrimeField::new(7).unwrap();
            // Nonzero values everywhere so Laurent exponents are safe.
            let assign = |var: VarId| -> Option<u64> {
                Some(match var {
                    VarId::X { i, j } => u64::from(i + 2 * j) % 6 + 1,
                    VarId::Mu(c) => u64::from(c) + 1,
                    VarId::Lam(c) => u64::from(c) + 3,
                })
            };
            let ea = a.evaluate(&f, &assign).unwrap();
            let eb = b.evaluate(&f, &assign).unwrap();
            let esum = a.add(&b).evaluate(&f, &assign).unwrap();
            let eprod = a.mul(&b).evaluate(&f, &assign).unwrap();
            prop_assert_eq!(esum, f.add(&ea, &eb));
            prop_assert_eq!(eprod, f.mul(&ea, &eb));
        }
    }
}
