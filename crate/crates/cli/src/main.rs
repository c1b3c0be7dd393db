//! Command-line surface for the augmentation toolkit: print the defining
//! relations of a braid closure, enumerate augmentations over a prime field,
//! report the structural properties of an augmentation's representation, and
//! transport augmentations across closure-preserving moves.
//!
//! Every subcommand emits a single JSON document stamped with a `schema`
//! version; identical inputs and seeds produce byte-identical output.  Exit
//! codes: 0 when every checked property holds, 1 when a property fails, 2 on
//! usage or parse errors.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use augrep::augment::{enumerate_fp, JsonField};
use augrep::markov::{apply_move, fuzz_moves};
use augrep::props::{check_separability, check_vanishing, microlocal_simpleness};
use augrep::rep::check_link_relations;
use augrep::{
    all_relations, build_rep, components, AnyAugmentation, Augmentation, BraidWord, ComponentMap,
    MoveKind,
};

/// Version tag stamped into every JSON document this binary emits.
const SCHEMA: &str = "augrep/1";

#[derive(Parser)]
#[command(name = "augrep")]
#[command(about = "Augmentations of framed cord algebras of braid closures")]
#[command(version)]
struct RunConfig {
    /// Write the JSON document here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the closure and longitude relations defining the augmentations
    Relations {
        /// Braid word, e.g. "n=2; 1 1"
        braid: String,
    },
    /// Enumerate all augmentations over a prime field
    Solve {
        /// Braid word, e.g. "n=2; 1 1"
        braid: String,

        /// Field modulus (a prime)
        #[arg(long)]
        p: u64,

        /// Pin the eigenvalue tuple mu_1,..,mu_r,lambda_1,..,lambda_r
        #[arg(long, value_delimiter = ',')]
        fix: Option<Vec<u64>>,

        /// Stop after this many cord-value assignments
        #[arg(long)]
        budget: Option<u64>,

        /// Worker threads for the eigenvalue sweep
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Verify an augmentation and report every structural property
    Report {
        /// Braid word the augmentation belongs to
        braid: String,

        /// JSON file holding the augmentation
        #[arg(long)]
        aug: PathBuf,
    },
    /// Transport an augmentation across closure-preserving moves
    Markov {
        /// Braid word the augmentation belongs to
        braid: Option<String>,

        /// Moves to apply in order: conj:+2, conj:-1, stab:+, stab:-
        moves: Vec<String>,

        /// JSON file holding the augmentation
        #[arg(long)]
        aug: Option<PathBuf>,

        /// Check this many seeded random move sequences instead
        #[arg(long, conflicts_with_all = ["braid", "aug", "moves"])]
        fuzz: Option<u64>,

        /// Seed for --fuzz
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Anything that stops a run before reaching a verdict: unreadable files,
/// malformed braids or augmentations, inconsistent flags.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(e: impl fmt::Display) -> UsageError {
    UsageError(e.to_string())
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cfg: &RunConfig) -> Result<bool, UsageError> {
    let (doc, ok) = match &cfg.command {
        Cmd::Relations { braid } => (cmd_relations(braid)?, true),
        Cmd::Solve {
            braid,
            p,
            fix,
            budget,
            jobs,
        } => (cmd_solve(braid, *p, fix.as_deref(), *budget, *jobs)?, true),
        Cmd::Report { braid, aug } => cmd_report(braid, aug)?,
        Cmd::Markov {
            braid,
            moves,
            aug,
            fuzz,
            seed,
        } => cmd_markov(braid.as_deref(), aug.as_deref(), moves, *fuzz, *seed)?,
    };
    emit(cfg.out.as_deref(), &doc)?;
    Ok(ok)
}

fn emit(out: Option<&Path>, doc: &Value) -> Result<(), UsageError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(doc).expect("documents serialize")
    );
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| UsageError(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_braid(text: &str) -> Result<BraidWord, UsageError> {
    BraidWord::parse(text).map_err(usage)
}

fn load_aug(cm: &ComponentMap, path: &Path) -> Result<AnyAugmentation, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("reading {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    AnyAugmentation::from_json(cm, &v).map_err(usage)
}

fn cmd_relations(braid: &str) -> Result<Value, UsageError> {
    let b = parse_braid(braid)?;
    let mut doc = all_relations(&b).to_json();
    let obj = doc
        .as_object_mut()
        .expect("relation sets serialize to objects");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("braid".into(), json!(b.to_string()));
    Ok(doc)
}

fn cmd_solve(
    braid: &str,
    p: u64,
    fix: Option<&[u64]>,
    budget: Option<u64>,
    jobs: Option<usize>,
) -> Result<Value, UsageError> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(usage)?;
    }
    let b = parse_braid(braid)?;
    let e = enumerate_fp(&all_relations(&b), p, fix, budget).map_err(usage)?;
    let augs: Vec<Value> = e.augmentations.iter().map(|a| a.to_json()).collect();
    Ok(json!({
        "schema": SCHEMA,
        "braid": b.to_string(),
        "p": p,
        "count": augs.len(),
        "complete": e.complete,
        "tried": e.tried,
        "augmentations": augs,
    }))
}

fn cmd_report(braid: &str, aug: &Path) -> Result<(Value, bool), UsageError> {
    let b = parse_braid(braid)?;
    let cm = components(&b);
    match load_aug(&cm, aug)? {
        AnyAugmentation::Q(a) => report_doc(&b, &a),
        AnyAugmentation::Fp(a) => report_doc(&b, &a),
    }
}

/// Full property report: relation verification, the representation and its
/// link-group check, microlocal simpleness, vanishing for every nonempty
/// sublink, and separability for every two-set partition of the components.
fn report_doc<F: JsonField>(
    b: &BraidWord,
    a: &Augmentation<F>,
) -> Result<(Value, bool), UsageError> {
    let verify = a.verify_closed(b).map_err(usage)?;
    let rep = build_rep(a).map_err(usage)?;
    let link_ok = check_link_relations(&rep, b);
    let simple = microlocal_simpleness(&rep);
    let r = a.components().r;

    let members = |mask: u32| -> Vec<u16> {
        (1..=r).filter(|c| mask >> (c - 1) & 1 == 1).collect()
    };
    let mut vanishing = Vec::new();
    let mut vanishing_ok = true;
    for mask in 1..1u32 << r {
        let v = check_vanishing(a, &rep, &members(mask)).map_err(usage)?;
        vanishing_ok &= v.ok;
        vanishing.push(json!({
            "sublink": v.sublink,
            "rows_vanish": v.rows_vanish,
            "cols_vanish": v.cols_vanish,
            "meridians_trivial": v.meridians_trivial,
            "ok": v.ok,
        }));
    }

    // Each unordered partition {K1, K2} once: component 1 goes in the first
    // part.
    let mut separability = Vec::new();
    let mut separability_ok = true;
    for mask in 1..1u32 << r {
        if mask & 1 == 0 || mask == (1 << r) - 1 {
            continue;
        }
        let s = check_separability(a, &rep, b, &members(mask)).map_err(usage)?;
        separability_ok &= s.ok;
        separability.push(json!({
            "parts": [s.parts.0, s.parts.1],
            "mixed_zero": s.mixed_zero,
            "separable": s.separable(),
            "decomposition": s.decomposition.as_ref().map(|d| json!({
                "dims": [d.dims.0, d.dims.1, d.dims.2],
                "basis_split": d.basis_split,
                "coords_block": d.coords_block,
                "blocks_match": d.blocks_match,
                "sub_links_ok": [d.sub_links_ok.0, d.sub_links_ok.1],
                "ok": d.ok(),
            })),
            "ok": s.ok,
        }));
    }

    let ok = verify.ok() && link_ok && simple.ok && vanishing_ok && separability_ok;
    let doc = json!({
        "schema": SCHEMA,
        "braid": b.to_string(),
        "augmentation": a.to_json(),
        "verify": verify.to_json(),
        "representation": {
            "dim": rep.dim,
            "basis": rep.basis,
            "link_relations_ok": link_ok,
        },
        "microlocally_simple": {"ranks": simple.ranks, "ok": simple.ok},
        "vanishing": vanishing,
        "separability": separability,
        "ok": ok,
    });
    Ok((doc, ok))
}

fn cmd_markov(
    braid: Option<&str>,
    aug: Option<&Path>,
    moves: &[String],
    fuzz: Option<u64>,
    seed: u64,
) -> Result<(Value, bool), UsageError> {
    if let Some(cases) = fuzz {
        let outcome = fuzz_moves(cases, seed);
        let ok = outcome.failures.is_empty();
        let doc = json!({
            "schema": SCHEMA,
            "fuzz": {
                "cases": outcome.cases,
                "seed": seed,
                "moves_checked": outcome.moves_checked,
                "failures": outcome.failures,
            },
            "ok": ok,
        });
        return Ok((doc, ok));
    }
    let braid = braid.ok_or_else(|| UsageError("a braid word is required unless --fuzz is given".into()))?;
    let aug = aug.ok_or_else(|| UsageError("--aug is required unless --fuzz is given".into()))?;
    if moves.is_empty() {
        return Err(UsageError("at least one move is required unless --fuzz is given".into()));
    }
    let kinds: Vec<MoveKind> = moves
        .iter()
        .map(|m| m.parse().map_err(UsageError))
        .collect::<Result<_, _>>()?;
    let b = parse_braid(braid)?;
    let cm = components(&b);
    match load_aug(&cm, aug)? {
        AnyAugmentation::Q(a) => markov_doc(&b, a, &kinds),
        AnyAugmentation::Fp(a) => markov_doc(&b, a, &kinds),
    }
}

/// Apply the moves in order, carrying the transported augmentation forward
/// and recording every check along the way.
fn markov_doc<F: JsonField>(
    b: &BraidWord,
    start: Augmentation<F>,
    kinds: &[MoveKind],
) -> Result<(Value, bool), UsageError> {
    let mut cur_b = b.clone();
    let mut cur_a = start;
    let mut steps = Vec::new();
    let mut all_ok = true;
    for &kind in kinds {
        let rec = apply_move(&cur_b, &cur_a, kind).map_err(usage)?;
        all_ok &= rec.checks.ok();
        steps.push(json!({
            "move": rec.kind.to_string(),
            "target_braid": rec.target_braid.to_string(),
            "component_map": rec.component_map,
            "checks": {
                "target_valid": rec.checks.target_valid,
                "structure_ok": rec.checks.structure_ok,
                "dims_ok": rec.checks.dims_ok,
                "intertwines": rec.checks.intertwines,
                "ok": rec.checks.ok(),
            },
            "augmentation": rec.target_aug.to_json(),
        }));
        cur_b = rec.target_braid;
        cur_a = rec.target_aug;
    }
    let doc = json!({
        "schema": SCHEMA,
        "braid": b.to_string(),
        "moves": steps,
        "ok": all_ok,
    });
    Ok((doc, all_ok))
}
