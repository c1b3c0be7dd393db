//! Acceptance suite: one test per criterion, each printing a single
//! `A<k> (<name>): PASS/FAIL` line (visible with `--nocapture`) and asserting
//! both the mathematical content and the runtime budget.
//!
//! - A1: the unknot's F_5 augmentation variety is exactly the zero set of
//!   (1-mu)(1-lambda) in the torus (F_5*)^2.
//! - A2: the Hopf link's F_5 eigenvalue projection is exactly the union of
//!   the eigenvalue-exchange variety and the componentwise unknot variety,
//!   and points with nonzero mixed cords satisfy the mixed-product identity.
//! - A3: every enumerated corpus augmentation yields a representation that
//!   satisfies the link-group relations and is microlocally simple.
//! - A4: every conjugation and stabilization of every F_3 corpus
//!   augmentation transports correctly, plus 200 random move sequences.
//! - A5: the cord rewriting system agrees with a randomized-order oracle on
//!   1000 random cords, and both support invariants hold un-normalized.
//! - A6: Hopf augmentations with vanishing mixed cords are separable with a
//!   verified direct-sum decomposition, and those with mu_1 = 1 vanish on
//!   the first component with trivial meridians.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use augrep::augment::enumerate_fp;
use augrep::cord::{oracle_reduce, reduce, reduce_unnormalized, CordExpr};
use augrep::markov::{apply_move, fuzz_moves};
use augrep::poly::VarId;
use augrep::props::{check_separability, check_vanishing, microlocal_simpleness};
use augrep::rep::check_link_relations;
use augrep::{
    all_relations, build_rep, BraidWord, Field, FpAug, FreeWord, MoveKind, PrimeField,
};

const UNKNOT: &str = "n=1;";
const HOPF: &str = "n=2; 1 1";
const TREFOIL: &str = "n=2; 1 1 1";
const WHITEHEAD: &str = "n=3; 1 1 2 2 -1 -2 -2";

fn braid(text: &str) -> BraidWord {
    BraidWord::parse(text).expect("corpus braids parse")
}

fn solutions(text: &str, p: u64) -> Vec<FpAug> {
    enumerate_fp(&all_relations(&braid(text)), p, None, None)
        .expect("corpus enumerations fit in memory")
        .augmentations
}

fn verdict(tag: &str, start: Instant, budget: Duration, mut failures: Vec<String>) {
    let elapsed = start.elapsed();
    if elapsed > budget {
        failures.push(format!("runtime {elapsed:.2?} exceeds budget {budget:?}"));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{tag}: {status} ({elapsed:.2?})");
    assert!(
        failures.is_empty(),
        "{tag}: {} failure(s):\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn a1_unknot_variety() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let e = enumerate_fp(&all_relations(&braid(UNKNOT)), 5, None, None).unwrap();
    if !e.complete {
        failures.push("enumeration did not complete".into());
    }
    let got: BTreeSet<(u64, u64)> = e
        .augmentations
        .iter()
        .map(|a| (*a.mu(1), *a.lambda(1)))
        .collect();
    if got.len() != e.augmentations.len() {
        failures.push("duplicate (mu, lambda) solutions".into());
    }
    let want: BTreeSet<(u64, u64)> = (1..5u64)
        .flat_map(|m| (1..5u64).map(move |l| (m, l)))
        .filter(|&(m, l)| (1 + 5 - l) * (1 + 5 - m) % 5 == 0)
        .collect();
    if got != want {
        failures.push(format!("variety mismatch: got {got:?}, want {want:?}"));
    }

    verdict(
        "A1 (unknot variety)",
        start,
        Duration::from_secs(1),
        failures,
    );
}

#[test]
fn a2_hopf_variety() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let f = PrimeField::new(5).unwrap();

    let e = enumerate_fp(&all_relations(&braid(HOPF)), 5, None, None).unwrap();
    if !e.complete {
        failures.push("enumeration did not complete".into());
    }

    let got: BTreeSet<[u64; 4]> = e
        .augmentations
        .iter()
        .map(|a| [*a.mu(1), *a.lambda(1), *a.mu(2), *a.lambda(2)])
        .collect();
    let units = 1..5u64;
    let unknot_pair = |m: u64, l: u64| (1 + 5 - l) * (1 + 5 - m) % 5 == 0;
    let mut want = BTreeSet::new();
    for m1 in units.clone() {
        for l1 in units.clone() {
            for m2 in units.clone() {
                for l2 in units.clone() {
                    let exchange = l2 == m1 && l1 == m2;
                    let componentwise = unknot_pair(m1, l1) && unknot_pair(m2, l2);
                    if exchange || componentwise {
                        want.insert([m1, l1, m2, l2]);
                    }
                }
            }
        }
    }
    if got != want {
        let missing: Vec<_> = want.difference(&got).collect();
        let extra: Vec<_> = got.difference(&want).collect();
        failures.push(format!(
            "eigenvalue projection mismatch: missing {missing:?}, extra {extra:?}"
        ));
    }

    // Mixed-product identity in standard-cord coordinates: when both mixed
    // cords are nonzero, x12*x21 = (1-mu1)(1-mu2).
    let mut mixed_nonzero = 0usize;
    for a in &e.augmentations {
        let prod = f.mul(a.x(1, 2), a.x(2, 1));
        if f.is_zero(&prod) {
            continue;
        }
        mixed_nonzero += 1;
        let want = f.mul(
            &f.sub(&f.one(), a.mu(1)),
            &f.sub(&f.one(), a.mu(2)),
        );
        if prod != want {
            failures.push(format!(
                "mixed product {prod:?} != (1-mu1)(1-mu2) = {want:?} at mu = ({}, {})",
                a.mu(1),
                a.mu(2)
            ));
        }
    }
    if mixed_nonzero == 0 {
        failures.push("no augmentation with nonzero mixed cords".into());
    }

    verdict(
        "A2 (Hopf variety)",
        start,
        Duration::from_secs(120),
        failures,
    );
}

#[test]
fn a3_representation_theorem() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let corpus: [(&str, &[u64]); 4] = [
        (UNKNOT, &[3, 5]),
        (HOPF, &[3, 5]),
        (TREFOIL, &[3, 5]),
        (WHITEHEAD, &[3]),
    ];
    for (text, primes) in corpus {
        let b = braid(text);
        for &p in primes {
            let augs = solutions(text, p);
            if augs.is_empty() {
                failures.push(format!("{text} over F_{p}: no augmentations"));
            }
            for (k, a) in augs.iter().enumerate() {
                let rep = match build_rep(a) {
                    Ok(rep) => rep,
                    Err(e) => {
                        failures.push(format!("{text} F_{p} #{k}: build_rep: {e}"));
                        continue;
                    }
                };
                if !check_link_relations(&rep, &b) {
                    failures.push(format!("{text} F_{p} #{k}: link relations fail"));
                }
                if !microlocal_simpleness(&rep).ok {
                    failures.push(format!("{text} F_{p} #{k}: not microlocally simple"));
                }
            }
        }
    }

    verdict(
        "A3 (representation theorem)",
        start,
        Duration::from_secs(120),
        failures,
    );
}

#[test]
fn a4_markov_invariance() {
    let start = Instant::now();
    let mut failures = Vec::new();

    for text in [UNKNOT, HOPF, TREFOIL, WHITEHEAD] {
        let b = braid(text);
        let mut kinds = vec![
            MoveKind::Stabilize { sign: 1 },
            MoveKind::Stabilize { sign: -1 },
        ];
        for s in 1..b.n() {
            kinds.push(MoveKind::Conjugate { s, sign: 1 });
            kinds.push(MoveKind::Conjugate { s, sign: -1 });
        }
        for (k, a) in solutions(text, 3).iter().enumerate() {
            for &kind in &kinds {
                match apply_move(&b, a, kind) {
                    Ok(rec) if rec.checks.ok() => {}
                    Ok(rec) => failures.push(format!(
                        "{text} F_3 #{k}: {kind} checks {:?}",
                        rec.checks
                    )),
                    Err(e) => failures.push(format!("{text} F_3 #{k}: {kind}: {e}")),
                }
            }
        }
    }

    let fuzz = fuzz_moves(200, 7);
    if fuzz.moves_checked < 200 {
        failures.push(format!("only {} moves fuzzed", fuzz.moves_checked));
    }
    failures.extend(fuzz.failures);

    verdict(
        "A4 (Markov invariance)",
        start,
        Duration::from_secs(300),
        failures,
    );
}

#[test]
fn a5_rewriting_confluence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    for case in 0..1000u64 {
        let n: u16 = rng.gen_range(1..=4);
        let blen = if n == 1 { 0 } else { rng.gen_range(0..=6) };
        let letters: Vec<i64> = (0..blen)
            .map(|_| {
                let k = i64::from(rng.gen_range(1..n));
                if rng.gen_bool(0.5) {
                    k
                } else {
                    -k
                }
            })
            .collect();
        let b = BraidWord::from_ints(n, &letters).unwrap();
        let cm = augrep::components(&b);

        let wlen = rng.gen_range(0..=6);
        let w = FreeWord::from_letters((0..wlen).map(|_| {
            (
                rng.gen_range(1..=n),
                if rng.gen_bool(0.5) { 1 } else { -1 },
            )
        }));
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(1..=n);
        let expr = CordExpr::new(i, w, j);

        let plain = reduce(&expr, &cm);
        let oracle = oracle_reduce(&expr, &cm, case);
        if plain != oracle {
            failures.push(format!(
                "case {case}: reduce != oracle for {expr:?} on {b}"
            ));
        }

        for (mono, _) in reduce_unnormalized(&expr, &cm).terms() {
            let left = mono
                .iter()
                .any(|(v, _)| matches!(v, VarId::X { i: a, .. } if a == i));
            let right = mono
                .iter()
                .any(|(v, _)| matches!(v, VarId::X { j: b, .. } if b == j));
            if !left || !right {
                failures.push(format!(
                    "case {case}: monomial {mono:?} misses a support factor ({expr:?})"
                ));
                break;
            }
        }
    }

    verdict(
        "A5 (rewriting confluence)",
        start,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn a6_vanishing_and_separability() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let b = braid(HOPF);
    let f = PrimeField::new(5).unwrap();

    let augs = solutions(HOPF, 5);
    let mut mixed_vanishing = 0usize;
    for (k, a) in augs.iter().enumerate() {
        if !(f.is_zero(a.x(1, 2)) && f.is_zero(a.x(2, 1))) {
            continue;
        }
        mixed_vanishing += 1;
        let rep = build_rep(a).unwrap();

        let s = check_separability(a, &rep, &b, &[1]).unwrap();
        let decomposed = s.decomposition.as_ref().is_some_and(|d| d.ok());
        if !(s.separable() && decomposed) {
            failures.push(format!("#{k}: not separable with a verified sum: {s:?}"));
        }

        for c in 1..=2u16 {
            if *a.mu(c) != f.one() {
                continue;
            }
            let v = check_vanishing(a, &rep, &[c]).unwrap();
            if !(v.rows_vanish && v.cols_vanish && v.meridians_trivial && v.ok) {
                failures.push(format!("#{k}: vanishing fails on component {c}: {v:?}"));
            }
        }
    }
    // One augmentation per point of the componentwise unknot variety.
    if mixed_vanishing != 49 {
        failures.push(format!(
            "expected 49 augmentations with vanishing mixed cords, found {mixed_vanishing}"
        ));
    }

    verdict(
        "A6 (vanishing and separability)",
        start,
        Duration::from_secs(120),
        failures,
    );
}
