//! Augmentations: eigenvalue and cord-value assignments satisfying the
//! defining relations of a braid closure, over the rationals or a prime
//! field, plus an exhaustive finite-field solver.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::braid::{components, linking_numbers, BraidWord, ComponentMap};
use crate::field::{Field, FieldError, PrimeField, Rationals};
use crate::poly::{LaurentPoly, VarId};
use crate::relations::{longitude_word, RelationSet};

#[derive(Debug, Error)]
pub enum AugError {
    #[error("expected {expected} entries for {what}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0} must be nonzero")]
    ZeroEigenvalue(String),
    #[error("x[{i}][{i}] must equal 1 - mu of strand {i}'s component")]
    BadDiagonal { i: u16 },
    #[error("augmentation JSON: {0}")]
    Json(String),
    #[error("augmentation is over {aug}, expected {expected}")]
    FieldMismatch { aug: String, expected: String },
    #[error("augmentation and relation set describe different braids")]
    ComponentMismatch,
    #[error("search space too large to enumerate; restrict with a fixed eigenvalue tuple or a budget")]
    SearchTooLarge,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Fields whose elements have a canonical JSON form.
pub trait JsonField: Field {
    /// Tag stored under the `"field"` key.
    fn field_label(&self) -> &'static str;
    /// Modulus stored under `"p"` (prime fields only).
    fn modulus_value(&self) -> Option<u64>;
    fn elem_to_json(&self, e: &Self::Elem) -> Value;
}

impl JsonField for Rationals {
    fn field_label(&self) -> &'static str {
        "Q"
    }

    fn modulus_value(&self) -> Option<u64> {
        None
    }

    fn elem_to_json(&self, e: &Self::Elem) -> Value {
        Value::String(self.render(e))
    }
}

impl JsonField for PrimeField {
    fn field_label(&self) -> &'static str {
        "Fp"
    }

    fn modulus_value(&self) -> Option<u64> {
        Some(self.modulus())
    }

    fn elem_to_json(&self, e: &Self::Elem) -> Value {
        Value::Number((*e).into())
    }
}

fn elem_from_json<F: Field>(f: &F, v: &Value) -> Result<F::Elem, AugError> {
    match v {
        Value::String(s) => Ok(f.parse_elem(s)?),
        Value::Number(n) => n
            .as_i64()
            .map(|k| f.from_i64(k))
            .ok_or_else(|| AugError::Json(format!("non-integer number {n}"))),
        other => Err(AugError::Json(format!(
            "expected a field element, got {other}"
        ))),
    }
}

/// An assignment of eigenvalues (per component) and cord values (per ordered
/// strand pair) over a field. Diagonal cord values are forced to
/// `1 - mu[comp(i)]`; eigenvalues are nonzero. Satisfaction of the defining
/// relations is a separate check ([`Augmentation::verify`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation<F: Field> {
    field: F,
    cm: ComponentMap,
    mu: Vec<F::Elem>,
    lambda: Vec<F::Elem>,
    x: Vec<Vec<F::Elem>>,
}

impl<F: Field> Augmentation<F> {
    pub fn new(
        field: F,
        cm: ComponentMap,
        mu: Vec<F::Elem>,
        lambda: Vec<F::Elem>,
        x: Vec<Vec<F::Elem>>,
    ) -> Result<Self, AugError> {
        let (n, r) = (usize::from(cm.n), usize::from(cm.r));
        for (what, len) in [("mu", mu.len()), ("lambda", lambda.len())] {
            if len != r {
                return Err(AugError::Shape {
                    what,
                    expected: r,
                    got: len,
                });
            }
        }
        if x.len() != n || x.iter().any(|row| row.len() != n) {
            return Err(AugError::Shape {
                what: "x",
                expected: n,
                got: x.iter().map(Vec::len).max().unwrap_or(x.len()),
            });
        }
        for c in 1..=cm.r {
            for (name, vals) in [("mu", &mu), ("lambda", &lambda)] {
                if field.is_zero(&vals[usize::from(c) - 1]) {
                    return Err(AugError::ZeroEigenvalue(format!("{name}[{c}]")));
                }
            }
        }
        for i in 1..=cm.n {
            let want = field.sub(&field.one(), &mu[usize::from(cm.of(i)) - 1]);
            if x[usize::from(i) - 1][usize::from(i) - 1] != want {
                return Err(AugError::BadDiagonal { i });
            }
        }
        Ok(Augmentation {
            field,
            cm,
            mu,
            lambda,
            x,
        })
    }

    /// The augmentation with every off-diagonal cord value 0 and all
    /// eigenvalues 1; it satisfies the relations of every braid closure.
    pub fn trivial(field: F, cm: ComponentMap) -> Self {
        let n = usize::from(cm.n);
        let r = usize::from(cm.r);
        let one = field.one();
        let zero = field.zero();
        Augmentation {
            x: vec![vec![zero; n]; n],
            mu: vec![one.clone(); r],
            lambda: vec![one; r],
            field,
            cm,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn components(&self) -> &ComponentMap {
        &self.cm
    }

    /// Meridian eigenvalue of component c.
    pub fn mu(&self, c: u16) -> &F::Elem {
        &self.mu[usize::from(c) - 1]
    }

    /// Longitude eigenvalue of component c.
    pub fn lambda(&self, c: u16) -> &F::Elem {
        &self.lambda[usize::from(c) - 1]
    }

    /// Value of the standard cord from strand i to strand j.
    pub fn x(&self, i: u16, j: u16) -> &F::Elem {
        &self.x[usize::from(i) - 1][usize::from(j) - 1]
    }

    /// Meridian eigenvalue of the component of strand s.
    pub fn mu_of_strand(&self, s: u16) -> &F::Elem {
        self.mu(self.cm.of(s))
    }

    /// Total assignment of every polynomial variable.
    pub fn value_of(&self, v: VarId) -> Option<F::Elem> {
        match v {
            VarId::Mu(c) => self.mu.get(usize::from(c) - 1).cloned(),
            VarId::Lam(c) => self.lambda.get(usize::from(c) - 1).cloned(),
            VarId::X { i, j } => self
                .x
                .get(usize::from(i) - 1)
                .and_then(|row| row.get(usize::from(j) - 1))
                .cloned(),
        }
    }

    /// Evaluate a relation polynomial at this augmentation.
    pub fn eval(&self, p: &LaurentPoly) -> F::Elem {
        p.evaluate(&self.field, &|v| self.value_of(v))
            .expect("augmentation assigns every variable and eigenvalues are invertible")
    }

    /// Check every relation in the set; mismatched component data is a shape
    /// error.
    pub fn verify(&self, rels: &RelationSet) -> Result<VerifyReport, AugError> {
        if rels.components() != &self.cm {
            return Err(AugError::ComponentMismatch);
        }
        let failing = |polys: &[LaurentPoly]| -> Vec<usize> {
            polys
                .iter()
                .enumerate()
                .filter(|(_, p)| !self.field.is_zero(&self.eval(p)))
                .map(|(k, _)| k)
                .collect()
        };
        Ok(VerifyReport {
            closure_total: rels.closure().len(),
            longitude_total: rels.longitude().len(),
            closure_failures: failing(rels.closure()),
            longitude_failures: failing(rels.longitude()),
        })
    }

    /// Check the defining relations of the braid closure directly at this
    /// augmentation, running the crossing transport and the longitude cords
    /// on field values instead of symbolic polynomials. Agrees with
    /// `verify(&all_relations(b))` on whether the point satisfies the
    /// relations, but costs only O(letters·n²) field operations; the report
    /// indexes the full relation families (identically-zero relations are
    /// not dropped here).
    pub fn verify_closed(&self, b: &BraidWord) -> Result<VerifyReport, AugError> {
        if components(b) != self.cm {
            return Err(AugError::ComponentMismatch);
        }
        let f = &self.field;
        let n = usize::from(self.cm.n);
        let xmat: Vec<Vec<F::Elem>> = (1..=self.cm.n)
            .map(|i| (1..=self.cm.n).map(|j| self.x(i, j).clone()).collect())
            .collect();

        // Crossing transport on values: accumulate the row and column
        // operations of each letter into left/right factors.
        let mut labels = self.cm.comp.clone();
        let mut cur = xmat.clone();
        let mut left: Vec<Vec<F::Elem>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        let mut right = left.clone();
        let apply_rows = |m: &mut Vec<Vec<F::Elem>>, s: usize, blk: &[[F::Elem; 2]; 2]| {
            for j in 0..n {
                let top = f.add(
                    &f.mul(&blk[0][0], &m[s][j]),
                    &f.mul(&blk[0][1], &m[s + 1][j]),
                );
                let bot = f.add(
                    &f.mul(&blk[1][0], &m[s][j]),
                    &f.mul(&blk[1][1], &m[s + 1][j]),
                );
                m[s][j] = top;
                m[s + 1][j] = bot;
            }
        };
        let apply_cols = |m: &mut Vec<Vec<F::Elem>>, s: usize, blk: &[[F::Elem; 2]; 2]| {
            for row in m.iter_mut() {
                let lft = f.add(
                    &f.mul(&row[s], &blk[0][0]),
                    &f.mul(&row[s + 1], &blk[1][0]),
                );
                let rgt = f.add(
                    &f.mul(&row[s], &blk[0][1]),
                    &f.mul(&row[s + 1], &blk[1][1]),
                );
                row[s] = lft;
                row[s + 1] = rgt;
            }
        };
        for l in b.letters() {
            let s = usize::from(l.k) - 1;
            let aa = cur[s + 1][s].clone();
            let bb = cur[s][s + 1].clone();
            let (row_blk, col_blk) = if l.sign == 1 {
                let mu_inv = f
                    .inv(self.mu(labels[s]))
                    .expect("meridian eigenvalues are invertible");
                (
                    [
                        [f.mul(&mu_inv, &aa), f.one()],
                        [f.one(), f.zero()],
                    ],
                    [[f.neg(&bb), f.one()], [f.one(), f.zero()]],
                )
            } else {
                let mu_inv = f
                    .inv(self.mu(labels[s + 1]))
                    .expect("meridian eigenvalues are invertible");
                (
                    [[f.zero(), f.one()], [f.one(), f.neg(&bb)]],
                    [
                        [f.zero(), f.one()],
                        [f.one(), f.mul(&mu_inv, &aa)],
                    ],
                )
            };
            apply_rows(&mut cur, s, &row_blk);
            apply_rows(&mut left, s, &row_blk);
            apply_cols(&mut cur, s, &col_blk);
            apply_cols(&mut right, s, &col_blk);
            labels.swap(s, s + 1);
        }

        let link = linking_numbers(b);
        let perm = b.closure_permutation();
        let eigen: Vec<F::Elem> = (1..=self.cm.r)
            .map(|c| {
                let w = link.self_writhe[usize::from(c) - 1];
                let mu_pow = f
                    .pow(self.mu(c), w)
                    .expect("meridian eigenvalues are invertible");
                f.mul(self.lambda(c), &mu_pow)
            })
            .collect();
        let weight = |q: u16| -> Option<&F::Elem> {
            let c = self.cm.of(q);
            (perm[usize::from(q) - 1] == self.cm.rep(c)).then(|| &eigen[usize::from(c) - 1])
        };
        let mat_mul = |a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]| -> Vec<Vec<F::Elem>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = f.zero();
                            for (k, bk) in b.iter().enumerate() {
                                acc = f.add(&acc, &f.mul(&a[i][k], &bk[j]));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        };
        let lx = mat_mul(&left, &xmat);
        let xr = mat_mul(&xmat, &right);
        let mut closure_failures = Vec::new();
        let mut idx = 0usize;
        for i in 0..n {
            for j in 0..n {
                let lhs = match weight(i as u16 + 1) {
                    Some(e) => f.mul(e, &lx[i][j]),
                    None => lx[i][j].clone(),
                };
                if lhs != xmat[i][j] {
                    closure_failures.push(idx);
                }
                idx += 1;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let rhs = match weight(j as u16 + 1) {
                    Some(e) => f.mul(e, &xmat[i][j]),
                    None => xmat[i][j].clone(),
                };
                if xr[i][j] != rhs {
                    closure_failures.push(idx);
                }
                idx += 1;
            }
        }
        let closure_total = idx;

        // Longitude relations: evaluate each conjugated cord by peeling the
        // word's meridians as row operations on the standard-value matrix.
        let mut longitude_failures = Vec::new();
        let mut idx = 0usize;
        for c in 1..=self.cm.r {
            let (lw, fexp) = longitude_word(b, c);
            let rho = self.cm.rep(c);
            let mut v = xmat.clone();
            let units: Vec<(u16, i8)> = lw.units().collect();
            for &(t, e) in units.iter().rev() {
                let ti = usize::from(t) - 1;
                let old_t = v[ti].clone();
                let scale: Vec<F::Elem> = if e == 1 {
                    (0..n).map(|i| f.neg(&xmat[i][ti])).collect()
                } else {
                    let mu_inv = f
                        .inv(self.mu(self.cm.of(t)))
                        .expect("meridian eigenvalues are invertible");
                    (0..n).map(|i| f.mul(&mu_inv, &xmat[i][ti])).collect()
                };
                for (i, row) in v.iter_mut().enumerate() {
                    for (j, entry) in row.iter_mut().enumerate() {
                        *entry = f.add(entry, &f.mul(&scale[i], &old_t[j]));
                    }
                }
            }
            let framing = f
                .pow(self.mu(c), fexp)
                .expect("meridian eigenvalues are invertible");
            let lam = self.lambda(c).clone();
            let mut check = |i: u16, j: u16| {
                let lhs = f.mul(&framing, &v[usize::from(i) - 1][usize::from(j) - 1]);
                let rhs = f.mul(&lam, &xmat[usize::from(i) - 1][usize::from(j) - 1]);
                if lhs != rhs {
                    longitude_failures.push(idx);
                }
                idx += 1;
            };
            for j in 1..=self.cm.n {
                check(rho, j);
            }
            for i in 1..=self.cm.n {
                if i != rho {
                    check(i, rho);
                }
            }
        }
        Ok(VerifyReport {
            closure_total,
            longitude_total: idx,
            closure_failures,
            longitude_failures,
        })
    }
}

impl<F: JsonField> Augmentation<F> {
    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let list = |v: &[F::Elem]| -> Value {
            Value::Array(v.iter().map(|e| f.elem_to_json(e)).collect())
        };
        let mut obj = Map::new();
        obj.insert("field".into(), Value::String(f.field_label().into()));
        if let Some(p) = f.modulus_value() {
            obj.insert("p".into(), Value::Number(p.into()));
        }
        obj.insert("mu".into(), list(&self.mu));
        obj.insert("lambda".into(), list(&self.lambda));
        obj.insert(
            "x".into(),
            Value::Array(self.x.iter().map(|row| list(row)).collect()),
        );
        Value::Object(obj)
    }

    pub fn from_json(field: F, cm: &ComponentMap, v: &Value) -> Result<Self, AugError> {
        let tag = v
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| AugError::Json("missing \"field\" tag".into()))?;
        if tag != field.field_label() {
            return Err(AugError::FieldMismatch {
                aug: tag.into(),
                expected: field.field_label().into(),
            });
        }
        let arr = |key: &str| -> Result<&Vec<Value>, AugError> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| AugError::Json(format!("missing array \"{key}\"")))
        };
        let elems = |vals: &[Value]| -> Result<Vec<F::Elem>, AugError> {
            vals.iter().map(|e| elem_from_json(&field, e)).collect()
        };
        let mu = elems(arr("mu")?)?;
        let lambda = elems(arr("lambda")?)?;
        let x = arr("x")?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| AugError::Json("x rows must be arrays".into()))
                    .and_then(|r| elems(r))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Augmentation::new(field, cm.clone(), mu, lambda, x)
    }
}

/// Per-relation verification outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub closure_total: usize,
    pub longitude_total: usize,
    pub closure_failures: Vec<usize>,
    pub longitude_failures: Vec<usize>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.closure_failures.is_empty() && self.longitude_failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "ok": self.ok(),
            "closure_total": self.closure_total,
            "longitude_total": self.longitude_total,
            "closure_failures": self.closure_failures,
            "longitude_failures": self.longitude_failures,
        })
    }
}

/// An augmentation over either supported field, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyAugmentation {
    Q(Augmentation<Rationals>),
    Fp(Augmentation<PrimeField>),
}

impl AnyAugmentation {
    pub fn from_json(cm: &ComponentMap, v: &Value) -> Result<Self, AugError> {
        match v.get("field").and_then(Value::as_str) {
            Some("Q") => Ok(AnyAugmentation::Q(Augmentation::from_json(
                Rationals, cm, v,
            )?)),
            Some("Fp") => {
                let p = v
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| AugError::Json("missing prime modulus \"p\"".into()))?;
                Ok(AnyAugmentation::Fp(Augmentation::from_json(
                    PrimeField::new(p)?,
                    cm,
                    v,
                )?))
            }
            Some(other) => Err(AugError::Json(format!("unknown field tag {other:?}"))),
            None => Err(AugError::Json("missing \"field\" tag".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyAugmentation::Q(a) => a.to_json(),
            AnyAugmentation::Fp(a) => a.to_json(),
        }
    }

    pub fn components(&self) -> &ComponentMap {
        match self {
            AnyAugmentation::Q(a) => a.components(),
            AnyAugmentation::Fp(a) => a.components(),
        }
    }

    pub fn verify(&self, rels: &RelationSet) -> Result<VerifyReport, AugError> {
        match self {
            AnyAugmentation::Q(a) => a.verify(rels),
            AnyAugmentation::Fp(a) => a.verify(rels),
        }
    }
}

/// Result of a finite-field enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub augmentations: Vec<Augmentation<PrimeField>>,
    /// Cord-value assignments actually evaluated.
    pub tried: u64,
    /// Whether the whole search space was covered.
    pub complete: bool,
}

/// One relation with the eigenvalue part pre-evaluated: terms are
/// (coefficient, sparse exponent list over cord-value slots).
struct SpecPoly {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

struct CompiledPoly {
    /// (coefficient, eigenvalue factors as (slot, exponent), cord factors).
    terms: Vec<(u64, Vec<(usize, i32)>, Vec<(usize, u32)>)>,
}

fn compile(
    rel: &LaurentPoly,
    f: &PrimeField,
    r: u16,
    pair_slot: &BTreeMap<(u16, u16), usize>,
) -> CompiledPoly {
    let terms = rel
        .terms()
        .map(|(mono, coeff)| {
            let cf = f.from_bigint(coeff);
            let mut eigen = Vec::new();
            let mut xs = Vec::new();
            for (v, e) in mono.iter() {
                match v {
                    VarId::Mu(c) => eigen.push((usize::from(c) - 1, e)),
                    VarId::Lam(c) => eigen.push((usize::from(r + c) - 1, e)),
                    VarId::X { i, j } => {
                        assert_ne!(i, j, "diagonal cord symbols must be normalized away");
                        assert!(e > 0, "cord symbols carry positive exponents");
                        xs.push((pair_slot[&(i, j)], e as u32));
                    }
                }
            }
            (cf, eigen, xs)
        })
        .collect();
    CompiledPoly { terms }
}

/// Evaluate the eigenvalue part; merge terms by cord factors. `None` marks a
/// relation that collapsed to a nonzero constant (no solution for this
/// eigenvalue tuple).
fn specialize(cp: &CompiledPoly, f: &PrimeField, eigen: &[u64]) -> Option<SpecPoly> {
    let mut merged: BTreeMap<Vec<(usize, u32)>, u64> = BTreeMap::new();
    for (c, eig, xs) in &cp.terms {
        let mut v = *c;
        for &(slot, e) in eig {
            let p = f
                .pow(&eigen[slot], i64::from(e))
                .expect("eigenvalues are nonzero");
            v = f.mul(&v, &p);
        }
        if f.is_zero(&v) {
            continue;
        }
        let entry = merged.entry(xs.clone()).or_insert(0);
        *entry = f.add(entry, &v);
        if f.is_zero(entry) {
            merged.remove(xs);
        }
    }
    if merged.len() == 1 {
        if let Some(c) = merged.get(&Vec::new()) {
            debug_assert!(!f.is_zero(c));
            return None;
        }
    }
    Some(SpecPoly {
        terms: merged.into_iter().map(|(xs, c)| (c, xs)).collect(),
    })
}

fn eval_spec(sp: &SpecPoly, f: &PrimeField, xs: &[u64]) -> u64 {
    let mut total = 0u64;
    for (c, factors) in &sp.terms {
        let mut v = *c;
        for &(slot, e) in factors {
            let p = f
                .pow(&xs[slot], i64::from(e))
                .expect("positive exponents never need inverses");
            v = f.mul(&v, &p);
        }
        total = f.add(&total, &v);
    }
    total
}

/// Decode eigenvalue tuple index k (mixed radix p−1, last slot fastest) into
/// 2r nonzero residues ordered mu[1..r], lam[1..r].
fn decode_tuple(k: u64, p: u64, slots: usize) -> Vec<u64> {
    let base = p - 1;
    let mut out = vec![0u64; slots];
    let mut rest = k;
    for slot in (0..slots).rev() {
        out[slot] = rest % base + 1;
        rest /= base;
    }
    debug_assert_eq!(rest, 0);
    out
}

/// Exhaustively enumerate augmentations of a relation set over F_p.
///
/// The search space is the product of all nonzero eigenvalue tuples
/// (mu[1..r], lam[1..r]) with all cord-value assignments (off-diagonal pairs
/// in row-major order, p choices each). `fix` pins the eigenvalue tuple to
/// one value (length 2r, each nonzero mod p). `budget` caps the number of
/// cord-value assignments evaluated; it is allotted to eigenvalue tuples in
/// index order, a full slice of p^(n(n−1)) each, so results are a
/// deterministic prefix of the unbudgeted enumeration.
pub fn enumerate_fp(
    rels: &RelationSet,
    p: u64,
    fix: Option<&[u64]>,
    budget: Option<u64>,
) -> Result<Enumeration, AugError> {
    let f = PrimeField::new(p)?;
    let cm = rels.components().clone();
    let (n, r) = (cm.n, cm.r);
    let pairs: Vec<(u16, u16)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let pair_slot: BTreeMap<(u16, u16), usize> = pairs
        .iter()
        .enumerate()
        .map(|(s, &pr)| (pr, s))
        .collect();
    let m = pairs.len();
    let compiled: Vec<CompiledPoly> = rels
        .all()
        .map(|rel| compile(rel, &f, r, &pair_slot))
        .collect();

    let fixed = match fix {
        Some(vals) => {
            if vals.len() != usize::from(2 * r) {
                return Err(AugError::Shape {
                    what: "fixed eigenvalue tuple",
                    expected: usize::from(2 * r),
                    got: vals.len(),
                });
            }
            let reduced: Vec<u64> = vals.iter().map(|&v| v % p).collect();
            if let Some(k) = reduced.iter().position(|&v| v == 0) {
                let name = if k < usize::from(r) {
                    format!("mu[{}]", k + 1)
                } else {
                    format!("lam[{}]", k + 1 - usize::from(r))
                };
                return Err(AugError::ZeroEigenvalue(name));
            }
            Some(reduced)
        }
        None => None,
    };

    // Sizes as u128: the cord space alone can overflow u64.
    let x_space = (p as u128).checked_pow(m as u32);
    let tuple_count = match fixed {
        Some(_) => Some(1u128),
        None => ((p - 1) as u128).checked_pow(u32::from(2 * r)),
    };
    let total = match (tuple_count, x_space) {
        (Some(t), Some(s)) => t.checked_mul(s),
        _ => None,
    };
    let complete = match (budget, total) {
        (None, _) => true,
        (Some(b), Some(tot)) => u128::from(b) >= tot,
        (Some(_), None) => false,
    };
    if budget.is_none() {
        // An exhaustive walk must fit in a u64 worth of assignments.
        match total {
            Some(tot) if tot <= u128::from(u64::MAX) => {}
            _ => return Err(AugError::SearchTooLarge),
        }
    }
    // Tuples that can do any work under the budget.
    let effective: u128 = match (budget, tuple_count, x_space) {
        (Some(b), Some(t), Some(s)) => {
            if s == 0 {
                0
            } else {
                t.min(u128::from(b).div_ceil(s))
            }
        }
        (Some(b), Some(t), None) => t.min(if b > 0 { 1 } else { 0 }),
        (None, Some(t), _) => t,
        (_, None, _) => return Err(AugError::SearchTooLarge),
    };
    let effective: u64 = effective.try_into().map_err(|_| AugError::SearchTooLarge)?;

    let per_tuple = |k: u64| -> (Vec<Augmentation<PrimeField>>, u64) {
        let eigen = match &fixed {
            Some(vals) => vals.clone(),
            None => decode_tuple(k, p, usize::from(2 * r)),
        };
        // Budget slice for tuple k: a full cord space if available.
        let slice: u128 = match (budget, x_space) {
            (None, Some(s)) => s,
            (None, None) => unreachable!("guarded by SearchTooLarge above"),
            (Some(b), Some(s)) => {
                s.min(u128::from(b).saturating_sub(s.saturating_mul(u128::from(k))))
            }
            // Cord space beyond u128: only tuple 0 runs, capped by the budget.
            (Some(b), None) => {
                if k == 0 {
                    u128::from(b)
                } else {
                    0
                }
            }
        };
        let slice = u64::try_from(slice).expect("slice is bounded by the budget or the guard");
        let mut specs = Vec::with_capacity(compiled.len());
        for cp in &compiled {
            match specialize(cp, &f, &eigen) {
                Some(sp) => {
                    if !sp.terms.is_empty() {
                        specs.push(sp);
                    }
                }
                // A relation with no solutions at this tuple: skip it whole.
                None => return (Vec::new(), 0),
            }
        }
        let mut found = Vec::new();
        let mut xs = vec![0u64; m];
        let mut count = 0u64;
        loop {
            if count == slice {
                break;
            }
            count += 1;
            if specs.iter().all(|sp| eval_spec(sp, &f, &xs) == 0) {
                let mu: Vec<u64> = eigen[..usize::from(r)].to_vec();
                let lambda: Vec<u64> = eigen[usize::from(r)..].to_vec();
                let x: Vec<Vec<u64>> = (1..=n)
                    .map(|i| {
                        (1..=n)
                            .map(|j| {
                                if i == j {
                                    f.sub(&1, &mu[usize::from(cm.of(i)) - 1])
                                } else {
                                    xs[pair_slot[&(i, j)]]
                                }
                            })
                            .collect()
                    })
                    .collect();
                found.push(
                    Augmentation::new(f.clone(), cm.clone(), mu, lambda, x)
                        .expect("enumerated values satisfy the shape constraints"),
                );
            }
            // Advance the odometer, last slot fastest.
            let mut slot = m;
            loop {
                if slot == 0 {
                    count = slice; // exhausted the cord space
                    break;
                }
                slot -= 1;
                xs[slot] += 1;
                if xs[slot] < p {
                    break;
                }
                xs[slot] = 0;
            }
            if count == slice {
                break;
            }
        }
        (found, count)
    };

    let results: Vec<(Vec<Augmentation<PrimeField>>, u64)> =
        (0..effective).into_par_iter().map(per_tuple).collect();
    let mut augmentations = Vec::new();
    let mut tried = 0u64;
    for (augs, count) in results {
        augmentations.extend(augs);
        tried += count;
    }
    Ok(Enumeration {
        augmentations,
        tried,
        complete,
    })
}
