//! `springer` command line: argument parsing, budgets, the result cache and
//! output. Every command produces a JSON value; text output is rendered from
//! that value, so cached and fresh runs print the same bytes.

pub mod cache;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use springer_core::f4appendix;
use springer_core::gamma::{self, TheoremCheck};
use springer_core::klpoly::{self, SmoothMethod};
use springer_core::springer::{self, OrbitKind};
use springer_core::{Budget, Error, Family, RootLength, RootSystem, SimpleType, WeylGroup};

use cache::CacheStore;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;

pub const CACHE_ENV: &str = "SPRINGER_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "springer", version, about = "Springer fiber combinatorics for minimal and minimal special orbits")]
pub struct Cli {
    /// Result cache directory.
    #[arg(long, global = true, env = CACHE_ENV, value_name = "DIR")]
    pub cache: Option<PathBuf>,
    /// Element ceiling for group walks and intervals.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    /// Budgets sized for E7 runs.
    #[arg(long, global = true, conflicts_with = "stretch")]
    pub long: bool,
    /// No element ceilings (E8 interval work).
    #[arg(long, global = true)]
    pub stretch: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Print the JSON value instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Kl,
    Palindrome,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan matrix and positive roots.
    Roots { ty: SimpleType },
    /// Cells of the fiber, by decreasing dimension.
    Cells {
        ty: SimpleType,
        /// min or minspecial
        #[arg(long)]
        orbit: OrbitKind,
        /// Smallest dimension listed (default: one below the fiber dimension).
        #[arg(long)]
        min_dim: Option<usize>,
    },
    /// Irreducible components with their I_X sets.
    Components {
        ty: SimpleType,
        /// min or minspecial
        #[arg(long)]
        orbit: OrbitKind,
    },
    /// Intersection graph of the components.
    Graph {
        ty: SimpleType,
        /// min or minspecial
        #[arg(long)]
        orbit: OrbitKind,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// P_{id,WORD}, or P_{WORD,WORD2} when two words are given.
    Kl {
        ty: SimpleType,
        word: String,
        word2: Option<String>,
    },
    /// Poincare polynomial of the interval below WORD.
    Poincare {
        ty: SimpleType,
        word: String,
        /// Only the K lowest and K highest coefficients.
        #[arg(long, value_name = "K")]
        ends: Option<usize>,
    },
    /// Rational smoothness of the Schubert variety of WORD.
    Smooth {
        ty: SimpleType,
        word: String,
        #[arg(long, value_enum, default_value = "kl")]
        method: Method,
    },
    /// Fiber dimension and component count against the closed forms.
    Table2 {
        #[arg(required = true)]
        types: Vec<SimpleType>,
        #[arg(long)]
        orbit: Option<OrbitKind>,
    },
    /// Replays the F4 minimal special appendix.
    F4Verify,
    /// Minimal special graph against the dual subregular curve.
    MainTheorem { ty: SimpleType },
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    execute(&cli, out, err)
}

pub fn budget_of(cli: &Cli) -> Budget {
    let base = if cli.stretch {
        Budget::stretch()
    } else if cli.long {
        Budget::long()
    } else {
        Budget::laptop()
    };
    match cli.budget {
        Some(n) => base.with_elements(n),
        None => base,
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut store = cli.cache.as_ref().and_then(|dir| match CacheStore::open(dir) {
        Ok(s) => {
            if s.skipped() > 0 {
                let _ = writeln!(err, "warning: skipped {} unreadable cache records in {}", s.skipped(), s.path().display());
            }
            Some(s)
        }
        Err(e) => {
            let _ = writeln!(err, "warning: cache at {} unavailable: {e}", dir.display());
            None
        }
    });
    let budget = budget_of(cli);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| compute(&cli.command, &budget, store.as_mut())),
            Err(e) => Err(Error::Unsupported(format!("cannot start {n} threads: {e}"))),
        },
        None => compute(&cli.command, &budget, store.as_mut()),
    };
    if let Some(s) = store.as_mut() {
        if let Err(e) = s.flush() {
            let _ = writeln!(err, "warning: cache flush failed: {e}");
        }
    }
    match result {
        Ok(value) => {
            let text = if cli.json || matches!(cli.command, Command::Graph { format: GraphFormat::Json, .. }) {
                let mut s = serde_json::to_string_pretty(&value).expect("value serialises");
                s.push('\n');
                s
            } else {
                render::text(&cli.command, &value)
            };
            let _ = out.write_all(text.as_bytes());
            if value.get("ok") == Some(&Value::Bool(false)) {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            }
        }
        Err(e) => report_error(cli, &e, out, err),
    }
}

fn report_error(cli: &Cli, e: &Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let code = exit_code(e);
    let _ = writeln!(err, "error: {e}");
    if let Error::BudgetExceeded { partial, .. } = e {
        if let Some(h) = partial {
            let _ = writeln!(err, "  reached {} length levels before stopping: {:?}", h.len(), h);
        }
        let b = budget_of(cli);
        let _ = writeln!(
            err,
            "  budget in force: {} group elements, {} interval elements; rerun with --long, --stretch or --budget N",
            limit_text(b.max_group_elements),
            limit_text(b.max_interval)
        );
    }
    if cli.json {
        let body = match e {
            Error::BudgetExceeded { what, limit, partial } => {
                json!({"error": {"kind": "budget", "what": what, "limit": limit, "partial": partial}})
            }
            _ => json!({"error": {"kind": error_kind(e), "message": e.to_string()}}),
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("value serialises"));
    }
    code
}

fn limit_text(n: u64) -> String {
    if n == u64::MAX {
        "unlimited".into()
    } else {
        n.to_string()
    }
}

fn error_kind(e: &Error) -> &'static str {
    match exit_code(e) {
        EXIT_BUDGET => "budget",
        EXIT_MISMATCH => "verification",
        _ => "input",
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Verification(_) => EXIT_MISMATCH,
        _ => EXIT_BAD_INPUT,
    }
}

fn cached<F>(store: Option<&mut CacheStore>, key: String, f: F) -> Result<Value, Error>
where
    F: FnOnce() -> Result<Value, Error>,
{
    match store {
        Some(s) => {
            if let Some(v) = s.get(&key) {
                return Ok(v.clone());
            }
            let v = f()?;
            s.insert(key, v.clone());
            Ok(v)
        }
        None => f(),
    }
}

fn group(ty: SimpleType) -> Result<WeylGroup, Error> {
    WeylGroup::build(ty)
}

fn kind_for(ty: SimpleType, kind: OrbitKind) -> OrbitKind {
    springer::effective_kind(ty, kind)
}

fn is_g2_special(ty: SimpleType, kind: OrbitKind) -> bool {
    ty.family == Family::G && kind_for(ty, kind) == OrbitKind::MinimalSpecial
}

fn compute(cmd: &Command, budget: &Budget, mut store: Option<&mut CacheStore>) -> Result<Value, Error> {
    match cmd {
        Command::Roots { ty } => cached(store, format!("roots|{ty}"), || roots(*ty)),
        Command::Cells { ty, orbit, min_dim } => {
            let kind = kind_for(*ty, *orbit);
            let md = min_dim.map_or("auto".to_string(), |d| d.to_string());
            cached(store, format!("cells|{ty}|{kind}|{md}"), || cells(*ty, kind, *min_dim, budget))
        }
        Command::Components { ty, orbit } => {
            let kind = kind_for(*ty, *orbit);
            cached(store, format!("components|{ty}|{kind}"), || components(*ty, kind, budget))
        }
        Command::Graph { ty, orbit, .. } => {
            let kind = kind_for(*ty, *orbit);
            cached(store, format!("graph|{ty}|{kind}"), || graph(*ty, kind, budget))
        }
        Command::Kl { ty, word, word2 } => {
            let g = group(*ty)?;
            let (x, w) = match word2 {
                Some(w2) => (g.parse_word(word)?, g.parse_word(w2)?),
                None => (g.identity(), g.parse_word(word)?),
            };
            let key = format!("kl|{ty}|{}|{}", g.format(&x), g.format(&w));
            cached(store, key, || {
                let p = klpoly::kl(&g, &x, &w, budget)?;
                Ok(json!({
                    "type": ty.to_string(),
                    "x": g.format(&x),
                    "w": g.format(&w),
                    "x_length": x.length(),
                    "w_length": w.length(),
                    "related": g.bruhat_leq(&x, &w),
                    "polynomial": p.to_string(),
                    "coeffs": p.coeffs(),
                }))
            })
        }
        Command::Poincare { ty, word, ends } => {
            let g = group(*ty)?;
            let w = g.parse_word(word)?;
            match ends {
                Some(k) => cached(store, format!("poincare-ends|{ty}|{}|{k}", g.format(&w)), || {
                    let e = klpoly::poincare_ends(&g, &w, *k, budget)?;
                    Ok(json!({
                        "type": ty.to_string(),
                        "w": g.format(&w),
                        "length": e.length,
                        "ends": k,
                        "low": e.low,
                        "high": e.high,
                        "non_palindromic": e.certifies_non_palindromic(),
                    }))
                }),
                None => cached(store, format!("poincare|{ty}|{}", g.format(&w)), || {
                    let p = klpoly::poincare_interval(&g, &w, budget)?;
                    Ok(json!({
                        "type": ty.to_string(),
                        "w": g.format(&w),
                        "length": w.length(),
                        "polynomial": p.to_string(),
                        "coeffs": p.coeffs(),
                        "interval_size": p.eval(1),
                        "palindromic": p.is_palindromic(),
                    }))
                }),
            }
        }
        Command::Smooth { ty, word, method } => {
            let g = group(*ty)?;
            let w = g.parse_word(word)?;
            let m = match method {
                Method::Kl => SmoothMethod::Kl,
                Method::Palindrome => SmoothMethod::Palindrome,
            };
            let name = serde_json::to_value(m).expect("method serialises");
            let key = format!("smooth|{ty}|{}|{}", g.format(&w), name.as_str().unwrap_or_default());
            cached(store, key, || {
                let smooth = klpoly::rationally_smooth(&g, &w, m, budget)?;
                Ok(json!({
                    "type": ty.to_string(),
                    "w": g.format(&w),
                    "method": name,
                    "rationally_smooth": smooth,
                }))
            })
        }
        Command::Table2 { types, orbit } => {
            let mut rows = Vec::new();
            for &ty in types {
                let kinds: Vec<OrbitKind> = match orbit {
                    Some(k) => vec![*k],
                    None if ty.is_simply_laced() => vec![OrbitKind::Minimal],
                    None => vec![OrbitKind::Minimal, OrbitKind::MinimalSpecial],
                };
                for kind in kinds {
                    let kind = kind_for(ty, kind);
                    let row = cached(store.as_deref_mut(), format!("table2|{ty}|{kind}"), || table2_row(ty, kind, budget))?;
                    rows.push(row);
                }
            }
            let ok = rows.iter().all(|r| r["matches"] == Value::Bool(true));
            Ok(json!({"rows": rows, "ok": ok}))
        }
        Command::F4Verify => cached(store, "f4-verify".into(), || {
            let report = f4appendix::verify(budget)?;
            let ok = report.matches_expected;
            let mut v = serde_json::to_value(&report).expect("report serialises");
            v["ok"] = Value::Bool(ok);
            Ok(v)
        }),
        Command::MainTheorem { ty } => cached(store, format!("main-theorem|{ty}"), || {
            let g = group(*ty)?;
            let report = gamma::check_main_theorem(&g, budget)?;
            let ok = report.result == TheoremCheck::Holds;
            let mut v = serde_json::to_value(&report).expect("report serialises");
            v["ok"] = Value::Bool(ok);
            Ok(v)
        }),
    }
}

fn roots(ty: SimpleType) -> Result<Value, Error> {
    let rs = RootSystem::build(ty)?;
    let positive: Vec<Value> = rs
        .positive_roots()
        .map(|r| {
            json!({
                "coeffs": rs.coeffs(r),
                "height": rs.height(r),
                "long": rs.length(r) == RootLength::Long,
            })
        })
        .collect();
    Ok(json!({
        "type": ty.to_string(),
        "rank": rs.rank(),
        "cartan": rs.cartan(),
        "num_positive": rs.num_positive(),
        "highest_root": rs.coeffs(rs.highest_root()),
        "highest_short_root": rs.highest_short_root().ok().map(|r| rs.coeffs(r).to_vec()),
        "positive_roots": positive,
    }))
}

fn cells(ty: SimpleType, kind: OrbitKind, min_dim: Option<usize>, budget: &Budget) -> Result<Value, Error> {
    if is_g2_special(ty, kind) {
        return Err(Error::UseDynkinCurve);
    }
    let g = group(ty)?;
    let rs = g.root_system();
    let min_dim = match min_dim {
        Some(d) => d,
        None => springer::enumerate_cells(&g, kind, Some(usize::MAX), budget)?
            .fiber_dim
            .saturating_sub(1),
    };
    let cx = springer::enumerate_cells(&g, kind, Some(min_dim), budget)?;
    let listed: Vec<Value> = cx
        .cells
        .iter()
        .map(|c| {
            json!({
                "word": g.format(&c.w),
                "length": c.w.length(),
                "dim": c.dim,
                "a_set": c.a_set.iter().map(|&r| rs.coeffs(r).to_vec()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "type": ty.to_string(),
        "orbit": kind.to_string(),
        "fiber_dim": cx.fiber_dim,
        "components": cx.top().count(),
        "histogram": cx.histogram,
        "total_cells": cx.total_cells(),
        "min_dim": min_dim,
        "cells": listed,
    }))
}

fn components(ty: SimpleType, kind: OrbitKind, budget: &Budget) -> Result<Value, Error> {
    let g = group(ty)?;
    if is_g2_special(ty, kind) {
        let curve = gamma::dynkin_curve(g.root_system());
        let list: Vec<Value> = curve
            .vertices
            .iter()
            .map(|v| json!({"label": v.label, "word": Value::Null, "dim": 1, "i_x": v.i_x, "i_x_decided": true}))
            .collect();
        return Ok(json!({"type": ty.to_string(), "orbit": kind.to_string(), "fiber_dim": 1, "components": list}));
    }
    let comps = springer::component_words(&g, kind, budget)?;
    let mut list = Vec::new();
    for (k, w) in comps.iter().enumerate() {
        let ix = springer::i_x(&g, kind, w)?;
        let dim = springer::cell(&g, kind, w)?.map_or(0, |c| c.dim);
        list.push(json!({
            "label": format!("X{}", k + 1),
            "word": g.format(w),
            "dim": dim,
            "i_x": ix.indices,
            "i_x_decided": ix.fully_decided,
        }));
    }
    let fiber_dim = list.first().map_or(0, |v| v["dim"].as_u64().unwrap_or(0));
    Ok(json!({"type": ty.to_string(), "orbit": kind.to_string(), "fiber_dim": fiber_dim, "components": list}))
}

fn graph(ty: SimpleType, kind: OrbitKind, budget: &Budget) -> Result<Value, Error> {
    let g = group(ty)?;
    let graph = match kind {
        OrbitKind::Minimal => gamma::gamma_minimal(&g, budget)?,
        OrbitKind::MinimalSpecial => gamma::gamma_minspecial(&g, budget)?,
    };
    Ok(serde_json::to_value(&graph).expect("graph serialises"))
}

fn table2_row(ty: SimpleType, kind: OrbitKind, budget: &Budget) -> Result<Value, Error> {
    let g = group(ty)?;
    let got = springer::table2(&g, kind, budget)?;
    let want = springer::expected_table2(ty, kind);
    Ok(json!({
        "type": ty.to_string(),
        "orbit": kind.to_string(),
        "fiber_dim": got.fiber_dim,
        "component_count": got.component_count,
        "expected_fiber_dim": want.fiber_dim,
        "expected_component_count": want.component_count,
        "matches": got == want,
    }))
}
