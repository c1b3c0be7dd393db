//! Braid words, their closure combinatorics (permutation, components, linking
//! numbers, writhes), free-group words in meridian generators, and the Artin
//! action of a braid on those words.
//!
//! Conventions, fixed once and used everywhere:
//! - Strands are numbered 1..=n by their bottom position; braid letters act
//!   bottom to top, left to right. Letter `k` (resp. `-k`) is the positive
//!   (resp. negative) half twist of positions k, k+1.
//! - The positive half twist σ_k acts on meridians as m_k ↦ m_k·m_{k+1}·m_k⁻¹,
//!   m_{k+1} ↦ m_k; the negative twist is its inverse.
//! - Components of the closure are the cycles of the closure permutation,
//!   numbered 1..=r in order of least strand; the least strand of a component
//!   is its representative.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("letter {k} out of range for {n} strands (need 1 <= k <= n-1)")]
    LetterOutOfRange { k: i64, n: u16 },
    #[error("cannot parse braid {text:?}: {msg}")]
    Parse { text: String, msg: String },
}

/// One braid letter: σ_k for `sign = +1`, σ_k⁻¹ for `sign = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidLetter {
    pub k: u16,
    pub sign: i8,
}

impl BraidLetter {
    pub fn new(k: u16, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "letter sign must be ±1");
        BraidLetter { k, sign }
    }

    pub fn inverse(self) -> Self {
        BraidLetter {
            k: self.k,
            sign: -self.sign,
        }
    }

    fn as_int(self) -> i64 {
        i64::from(self.k) * i64::from(self.sign)
    }
}

/// A braid word on `n` strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    n: u16,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(n: u16, letters: Vec<BraidLetter>) -> Result<Self, BraidError> {
        if n == 0 {
            return Err(BraidError::NoStrands);
        }
        for l in &letters {
            if l.k == 0 || l.k >= n {
                return Err(BraidError::LetterOutOfRange {
                    k: i64::from(l.k) * i64::from(l.sign),
                    n,
                });
            }
        }
        Ok(BraidWord { n, letters })
    }

    /// Build from signed generator indices: `k` ↦ σ_k, `-k` ↦ σ_k⁻¹.
    pub fn from_ints(n: u16, word: &[i64]) -> Result<Self, BraidError> {
        let mut letters = Vec::with_capacity(word.len());
        for &v in word {
            if v == 0 || v.unsigned_abs() > u64::from(u16::MAX) {
                return Err(BraidError::LetterOutOfRange { k: v, n });
            }
            letters.push(BraidLetter::new(
                v.unsigned_abs() as u16,
                if v > 0 { 1 } else { -1 },
            ));
        }
        Self::new(n, letters)
    }

    /// Parse the text format `n=<int>; k k -k ...` (whitespace- or
    /// comma-separated signed indices after the semicolon).
    pub fn parse(text: &str) -> Result<Self, BraidError> {
        let err = |msg: &str| BraidError::Parse {
            text: text.to_string(),
            msg: msg.to_string(),
        };
        let s = text.trim();
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| err("expected leading `n=<strands>;`"))?;
        let (n_str, word_str) = rest
            .split_once(';')
            .ok_or_else(|| err("expected `;` after the strand count"))?;
        let n: u16 = n_str
            .trim()
            .parse()
            .map_err(|_| err("strand count is not a valid integer"))?;
        let mut word = Vec::new();
        for tok in word_str.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v: i64 = tok
                .parse()
                .map_err(|_| err(&format!("bad letter token {tok:?}")))?;
            word.push(v);
        }
        Self::from_ints(n, &word)
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn as_ints(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.as_int()).collect()
    }

    /// The same word with every letter index kept, on more strands.
    pub fn widen(&self, new_n: u16) -> Self {
        assert!(new_n >= self.n, "widen cannot drop strands");
        BraidWord {
            n: new_n,
            letters: self.letters.clone(),
        }
    }

    /// w ↦ σ_s^{sign} · w · σ_s^{-sign}.
    pub fn conjugated(&self, s: u16, sign: i8) -> Result<Self, BraidError> {
        let mut letters = Vec::with_capacity(self.letters.len() + 2);
        letters.push(BraidLetter::new(s, sign));
        letters.extend_from_slice(&self.letters);
        letters.push(BraidLetter::new(s, -sign));
        Self::new(self.n, letters)
    }

    /// σ_n^{±1} · ι(w) on n+1 strands (stabilization).
    pub fn stabilized(&self, sign: i8) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(BraidLetter::new(self.n, sign));
        letters.extend_from_slice(&self.letters);
        BraidWord {
            n: self.n + 1,
            letters,
        }
    }

    /// The closure permutation: strand entering bottom position p exits at top
    /// position `perm(p)`; returned as a 1-based lookup (`result[p-1]`).
    pub fn closure_permutation(&self) -> Vec<u16> {
        // pos_to_strand[q-1] = strand currently occupying position q.
        let mut pos_to_strand: Vec<u16> = (1..=self.n).collect();
        for l in &self.letters {
            pos_to_strand.swap(usize::from(l.k) - 1, usize::from(l.k));
        }
        let mut perm = vec![0u16; usize::from(self.n)];
        for (q, &strand) in pos_to_strand.iter().enumerate() {
            perm[usize::from(strand) - 1] = (q + 1) as u16;
        }
        perm
    }

    /// Scan the word bottom to top, reporting for each letter the pair of
    /// strands crossing there (strand at position k, strand at position k+1,
    /// before the crossing).
    pub fn crossings(&self) -> Vec<(BraidLetter, u16, u16)> {
        let mut pos_to_strand: Vec<u16> = (1..=self.n).collect();
        let mut out = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let a = pos_to_strand[usize::from(l.k) - 1];
            let b = pos_to_strand[usize::from(l.k)];
            out.push((l, a, b));
            pos_to_strand.swap(usize::from(l.k) - 1, usize::from(l.k));
        }
        out
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for l in &self.letters {
            write!(f, " {}", l.as_int())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BraidWordRepr {
    n: u16,
    word: Vec<i64>,
}

impl Serialize for BraidWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BraidWordRepr {
            n: self.n,
            word: self.as_ints(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = BraidWordRepr::deserialize(deserializer)?;
        BraidWord::from_ints(repr.n, &repr.word).map_err(D::Error::custom)
    }
}

/// Strand → component assignment for a braid closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentMap {
    pub n: u16,
    pub r: u16,
    /// comp[strand-1] = component index (1-based).
    pub comp: Vec<u16>,
    /// least[c-1] = representative (least) strand of component c.
    pub least: Vec<u16>,
}

impl ComponentMap {
    /// Component of a strand (1-based both ways).
    pub fn of(&self, strand: u16) -> u16 {
        self.comp[usize::from(strand) - 1]
    }

    /// Representative (least) strand of a component.
    pub fn rep(&self, c: u16) -> u16 {
        self.least[usize::from(c) - 1]
    }

    /// Strands belonging to component c, ascending.
    pub fn strands_of(&self, c: u16) -> Vec<u16> {
        (1..=self.n).filter(|&s| self.of(s) == c).collect()
    }

    pub fn is_sorted(&self) -> bool {
        self.comp.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Components of the closure: cycles of the closure permutation, numbered by
/// least strand.
pub fn components(b: &BraidWord) -> ComponentMap {
    let perm = b.closure_permutation();
    let n = usize::from(b.n());
    let mut comp = vec![0u16; n];
    let mut least = Vec::new();
    let mut next = 0u16;
    for start in 1..=n as u16 {
        if comp[usize::from(start) - 1] != 0 {
            continue;
        }
        next += 1;
        least.push(start);
        let mut s = start;
        loop {
            comp[usize::from(s) - 1] = next;
            s = perm[usize::from(s) - 1];
            if s == start {
                break;
            }
        }
    }
    ComponentMap {
        n: b.n(),
        r: next,
        comp,
        least,
    }
}

/// Pairwise linking numbers and per-component self-writhes of the closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingData {
    /// lk[c-1][d-1], symmetric, zero diagonal.
    pub lk: Vec<Vec<i64>>,
    /// self_writhe[c-1]: signed count of crossings internal to component c.
    pub self_writhe: Vec<i64>,
}

pub fn linking_numbers(b: &BraidWord) -> LinkingData {
    let cm = components(b);
    let r = usize::from(cm.r);
    let mut cross = vec![vec![0i64; r]; r];
    let mut self_writhe = vec![0i64; r];
    for (l, a, bb) in b.crossings() {
        let ca = usize::from(cm.of(a)) - 1;
        let cb = usize::from(cm.of(bb)) - 1;
        if ca == cb {
            self_writhe[ca] += i64::from(l.sign);
        } else {
            cross[ca][cb] += i64::from(l.sign);
            cross[cb][ca] += i64::from(l.sign);
        }
    }
    let lk = cross
        .into_iter()
        .map(|row| row.into_iter().map(|v| v / 2).collect())
        .collect();
    LinkingData { lk, self_writhe }
}

/// Freely reduced word in the meridian generators m_1..m_n, stored as
/// run-length pairs (generator, nonzero exponent) with distinct neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct FreeWord {
    runs: Vec<(u16, i32)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(t: u16) -> Self {
        FreeWord { runs: vec![(t, 1)] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (u16, i32)>) -> Self {
        let mut w = FreeWord::identity();
        for (t, e) in letters {
            w.push(t, e);
        }
        w
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Word length counting unit letters.
    pub fn len(&self) -> usize {
        self.runs.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[(u16, i32)] {
        &self.runs
    }

    /// Append m_t^e with free reduction against the current tail.
    pub fn push(&mut self, t: u16, e: i32) {
        if e == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((lt, le)) if *lt == t => {
                *le += e;
                if *le == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((t, e)),
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(t, e) in &other.runs {
            w.push(t, e);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            runs: self.runs.iter().rev().map(|&(t, e)| (t, -e)).collect(),
        }
    }

    /// Unit letters (t, ±1) left to right.
    pub fn units(&self) -> impl Iterator<Item = (u16, i8)> + '_ {
        self.runs.iter().flat_map(|&(t, e)| {
            let sign: i8 = if e > 0 { 1 } else { -1 };
            std::iter::repeat((t, sign)).take(e.unsigned_abs() as usize)
        })
    }

    /// Signed sum of exponents of generator t (image in the abelianization).
    pub fn exponent_sum(&self, t: u16) -> i64 {
        self.runs
            .iter()
            .filter(|(g, _)| *g == t)
            .map(|&(_, e)| i64::from(e))
            .sum()
    }

    pub fn total_exponent(&self) -> i64 {
        self.runs.iter().map(|&(_, e)| i64::from(e)).sum()
    }

    pub fn as_ints(&self) -> Vec<i64> {
        self.units()
            .map(|(t, s)| i64::from(t) * i64::from(s))
            .collect()
    }
}

impl fmt::Display for FreeWord {
    /// Unit letters as signed generator indices, e.g. `1 2 -1`; identity = `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut first = true;
        for (t, s) in self.units() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", i64::from(t) * i64::from(s))?;
        }
        Ok(())
    }
}

/// Image of a single meridian generator under the half twist σ_k^{sign}.
fn artin_generator(t: u16, k: u16, sign: i8) -> FreeWord {
    if sign == 1 {
        if t == k {
            FreeWord::from_letters([(k, 1), (k + 1, 1), (k, -1)])
        } else if t == k + 1 {
            FreeWord::generator(k)
        } else {
            FreeWord::generator(t)
        }
    } else if t == k {
        FreeWord::generator(k + 1)
    } else if t == k + 1 {
        FreeWord::from_letters([(k + 1, -1), (k, 1), (k + 1, 1)])
    } else {
        FreeWord::generator(t)
    }
}

/// Image of a free word under the automorphism of σ_k^{sign}.
pub fn artin_letter(w: &FreeWord, k: u16, sign: i8) -> FreeWord {
    let mut out = FreeWord::identity();
    for (t, s) in w.units() {
        let img = artin_generator(t, k, sign);
        let img = if s == 1 { img } else { img.inverse() };
        for &(g, e) in &img.runs {
            out.push(g, e);
        }
    }
    out
}

/// Image of a free word under the whole braid, letters applied left to right.
pub fn artin_braid(w: &FreeWord, b: &BraidWord) -> FreeWord {
    let mut out = w.clone();
    for l in b.letters() {
        out = artin_letter(&out, l.k, l.sign);
    }
    out
}

/// Meridian words per level: `tables[v][p-1]` is the meridian of the strand at
/// position p just above the first v letters, as a word in the bottom
/// meridians m_1..m_n.
pub fn meridian_tables(b: &BraidWord) -> Vec<Vec<FreeWord>> {
    let n = usize::from(b.n());
    let mut level: Vec<FreeWord> = (1..=n as u16).map(FreeWord::generator).collect();
    let mut tables = Vec::with_capacity(b.len() + 1);
    tables.push(level.clone());
    for l in b.letters() {
        let k = usize::from(l.k) - 1;
        let (mk, mk1) = (level[k].clone(), level[k + 1].clone());
        if l.sign == 1 {
            level[k] = mk.concat(&mk1).concat(&mk.inverse());
            level[k + 1] = mk;
        } else {
            level[k] = mk1.clone();
            level[k + 1] = mk1.inverse().concat(&mk).concat(&mk1);
        }
        tables.push(level.clone());
    }
    tables
}

/// Delete the strands where `keep[strand-1]` is false, dropping every letter
/// that crosses a deleted strand; surviving strands are renumbered in bottom
/// order. Returns the sub-braid and the new strand index of each kept strand.
pub fn delete_strands(b: &BraidWord, keep: &[bool]) -> (BraidWord, Vec<Option<u16>>) {
    assert_eq!(keep.len(), usize::from(b.n()));
    let mut new_index = vec![None; keep.len()];
    let mut next = 0u16;
    for (i, &k) in keep.iter().enumerate() {
        if k {
            next += 1;
            new_index[i] = Some(next);
        }
    }
    let new_n = next.max(1);
    let mut letters = Vec::new();
    let mut pos_to_strand: Vec<u16> = (1..=b.n()).collect();
    for &l in b.letters() {
        let k = usize::from(l.k) - 1;
        let (a, bb) = (pos_to_strand[k], pos_to_strand[k + 1]);
        if keep[usize::from(a) - 1] && keep[usize::from(bb) - 1] {
            // Rank of position k among kept strands' current positions.
            let rank = pos_to_strand[..k]
                .iter()
                .filter(|&&s| keep[usize::from(s) - 1])
                .count() as u16
                + 1;
            letters.push(BraidLetter::new(rank, l.sign));
        }
        pos_to_strand.swap(k, k + 1);
    }
    let sub = BraidWord::new(new_n, letters).expect("sub-braid letters stay in range");
    (sub, new_index)
}

/// Conjugate the braid by negative half twists until the component function is
/// non-decreasing in the strand index. Returns the conjugated word, the strand
/// relabeling applied (old strand → new strand), and the swap positions used
/// (each realized as w ↦ σ_s⁻¹·w·σ_s, in order).
pub fn sort_ordered_partition(b: &BraidWord) -> (BraidWord, Vec<u16>, Vec<u16>) {
    let mut current = b.clone();
    let mut relabel: Vec<u16> = (1..=b.n()).collect();
    let mut swaps = Vec::new();
    loop {
        let cm = components(&current);
        let Some(s) = (1..b.n()).find(|&s| cm.of(s) > cm.of(s + 1)) else {
            return (current, relabel, swaps);
        };
        current = current
            .conjugated(s, -1)
            .expect("swap index is within range");
        for v in relabel.iter_mut() {
            if *v == s {
                *v = s + 1;
            } else if *v == s + 1 {
                *v = s;
            }
        }
        swaps.push(s);
    }
}

/// All single-step rewrites of a braid word by the braid-group relations:
/// far commutation σ_iσ_j = σ_jσ_i (|i−j| ≥ 2), the Reidemeister-III relation
/// σ_iσ_{i+1}σ_i = σ_{i+1}σ_iσ_{i+1} on positive or negative triples, and
/// free insertion/deletion of σ_kσ_k⁻¹. Used by invariance property tests.
pub fn relation_rewrites(b: &BraidWord) -> Vec<BraidWord> {
    let ls = b.letters();
    let mut out = Vec::new();
    let mut push = |letters: Vec<BraidLetter>| {
        if let Ok(w) = BraidWord::new(b.n(), letters) {
            out.push(w);
        }
    };
    for i in 0..ls.len().saturating_sub(1) {
        let (a, c) = (ls[i], ls[i + 1]);
        if a.k.abs_diff(c.k) >= 2 {
            let mut v = ls.to_vec();
            v.swap(i, i + 1);
            push(v);
        }
    }
    for i in 0..ls.len().saturating_sub(2) {
        let (a, c, d) = (ls[i], ls[i + 1], ls[i + 2]);
        let same_sign = a.sign == c.sign && c.sign == d.sign;
        if same_sign && a.k == d.k && c.k == a.k + 1 {
            // σ_i σ_{i+1} σ_i → σ_{i+1} σ_i σ_{i+1}
            let mut v = ls.to_vec();
            v[i] = BraidLetter::new(a.k + 1, a.sign);
            v[i + 1] = BraidLetter::new(a.k, a.sign);
            v[i + 2] = BraidLetter::new(a.k + 1, a.sign);
            push(v);
        }
        if same_sign && a.k == d.k && a.k == c.k + 1 {
            // σ_{i+1} σ_i σ_{i+1} → σ_i σ_{i+1} σ_i
            let mut v = ls.to_vec();
            v[i] = BraidLetter::new(c.k, a.sign);
            v[i + 1] = BraidLetter::new(c.k + 1, a.sign);
            v[i + 2] = BraidLetter::new(c.k, a.sign);
            push(v);
        }
    }
    for i in 0..ls.len().saturating_sub(1) {
        if ls[i].k == ls[i + 1].k && ls[i].sign == -ls[i + 1].sign {
            let mut v = ls.to_vec();
            v.drain(i..=i + 1);
            push(v);
        }
    }
    if b.n() >= 2 {
        for pos in 0..=ls.len() {
            for k in 1..b.n() {
                for sign in [1i8, -1] {
                    let mut v = ls.to_vec();
                    v.insert(pos, BraidLetter::new(k, -sign));
                    v.insert(pos, BraidLetter::new(k, sign));
                    push(v);
                }
            }
        }
    }
    out
}
