//! Cells `B_N ∩ S(w)` of the Springer fiber when `N` spans the root line of
//! the highest root (minimal orbit) or of the highest short root (minimal
//! special orbit).
//!
//! Minimal: the cell is all of `S(w)` when `w^{-1}(lambda) > 0`, empty otherwise.
//! Minimal special: the cell is nonempty when `w^{-1}(mu) > 0`, and its affine
//! coordinates are indexed by the roots `alpha > 0` with `w^{-1}(alpha) < 0`
//! and either `alpha + mu` not a root or `w^{-1}(alpha + mu) > 0`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rootsys::{Family, Root, RootSystem, SimpleType};
use crate::weyl::{WeylElement, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Minimal,
    MinimalSpecial,
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitKind::Minimal => "min",
            OrbitKind::MinimalSpecial => "minspecial",
        })
    }
}

impl FromStr for OrbitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" | "minimal" | "m" => Ok(OrbitKind::Minimal),
            "minspecial" | "min-special" | "minimal-special" | "ms" => Ok(OrbitKind::MinimalSpecial),
            _ => Err(Error::Unsupported(format!("unknown orbit kind {s:?}"))),
        }
    }
}

/// Kind actually used for the cell calculus: simply-laced types have M = MS.
pub fn effective_kind(ty: SimpleType, kind: OrbitKind) -> OrbitKind {
    if ty.is_simply_laced() {
        OrbitKind::Minimal
    } else {
        kind
    }
}

pub fn orbit_root(rs: &RootSystem, kind: OrbitKind) -> Result<Root> {
    let ty = rs.simple_type();
    match effective_kind(ty, kind) {
        OrbitKind::Minimal => Ok(rs.highest_root()),
        OrbitKind::MinimalSpecial if ty.family == Family::G => Err(Error::UseDynkinCurve),
        OrbitKind::MinimalSpecial => rs.highest_short_root(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpringerCell {
    pub w: WeylElement,
    /// Sorted by root index.
    pub a_set: Vec<Root>,
    pub dim: usize,
}

/// `A_w` from the images `inv[alpha] = w^{-1}(alpha)` of the positive roots.
fn a_set_from(rs: &RootSystem, kind: OrbitKind, root: Root, inv: &[Root]) -> Vec<Root> {
    rs.positive_roots()
        .filter(|&a| {
            if rs.is_positive(inv[a.index()]) {
                return false;
            }
            match kind {
                OrbitKind::Minimal => true,
                OrbitKind::MinimalSpecial => match rs.root_sum(a, root) {
                    None => true,
                    Some(b) => rs.is_positive(inv[b.index()]),
                },
            }
        })
        .collect()
}

pub fn cell(g: &WeylGroup, kind: OrbitKind, w: &WeylElement) -> Result<Option<SpringerCell>> {
    let rs = g.root_system();
    let root = orbit_root(rs, kind)?;
    let kind = effective_kind(rs.simple_type(), kind);
    let inv: Vec<Root> = rs.positive_roots().map(|a| g.act_inverse(w, a)).collect();
    if !rs.is_positive(inv[root.index()]) {
        return Ok(None);
    }
    let a_set = a_set_from(rs, kind, root, &inv);
    Ok(Some(SpringerCell { w: *w, dim: a_set.len(), a_set }))
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    pub kind: OrbitKind,
    pub root: Root,
    pub fiber_dim: usize,
    /// Number of nonempty cells of each dimension, over the whole group.
    pub histogram: Vec<u64>,
    /// Stored cells (those with `dim >= min_dim`), by decreasing dimension
    /// and then by reduced word.
    pub cells: Vec<SpringerCell>,
    pub min_dim: usize,
    index: HashMap<WeylElement, usize>,
}

impl CellComplex {
    pub fn get(&self, w: &WeylElement) -> Option<&SpringerCell> {
        self.index.get(w).map(|&k| &self.cells[k])
    }

    pub fn top(&self) -> impl Iterator<Item = &SpringerCell> {
        self.cells.iter().filter(move |c| c.dim == self.fiber_dim)
    }

    pub fn total_cells(&self) -> u64 {
        self.histogram.iter().sum()
    }

    pub fn count_of_dim(&self, d: usize) -> u64 {
        self.histogram.get(d).copied().unwrap_or(0)
    }
}

struct Node {
    w: WeylElement,
    inv: Vec<Root>,
}

/// Walk the whole group, keeping cells of dimension at least `min_dim`.
pub fn enumerate_cells(
    g: &WeylGroup,
    kind: OrbitKind,
    min_dim: Option<usize>,
    budget: &Budget,
) -> Result<CellComplex> {
    let rs = g.root_system();
    let root = orbit_root(rs, kind)?;
    let kind = effective_kind(rs.simple_type(), kind);
    let min_dim = min_dim.unwrap_or(0);
    let npos = rs.num_positive();

    let mut histogram = vec![0u64; npos + 1];
    let mut kept: Vec<SpringerCell> = Vec::new();
    let mut level = vec![Node {
        w: g.identity(),
        inv: rs.positive_roots().collect(),
    }];
    let mut total = 0u64;
    while !level.is_empty() {
        total += level.len() as u64;
        if total > budget.max_group_elements {
            return Err(Error::BudgetExceeded {
                what: format!("cell enumeration over the Weyl group of {}", rs.simple_type()),
                limit: budget.max_group_elements,
                partial: Some(histogram),
            });
        }
        let found: Vec<Option<SpringerCell>> = level
            .par_iter()
            .map(|n| {
                if !rs.is_positive(n.inv[root.index()]) {
                    return None;
                }
                let a_set = a_set_from(rs, kind, root, &n.inv);
                Some(SpringerCell { w: n.w, dim: a_set.len(), a_set })
            })
            .collect();
        for c in found.into_iter().flatten() {
            histogram[c.dim] += 1;
            if c.dim >= min_dim {
                kept.push(c);
            }
        }
        level = level
            .par_iter()
            .flat_map_iter(|n| {
                g.canonical_children(&n.w).map(move |(s, v)| Node {
                    w: v,
                    inv: n.inv.iter().map(|&r| rs.reflect0(r, s)).collect(),
                })
            })
            .collect();
    }
    let fiber_dim = histogram.iter().rposition(|&c| c > 0).unwrap_or(0);
    histogram.truncate(fiber_dim + 1);
    let mut keyed: Vec<(usize, Vec<u8>, SpringerCell)> = kept
        .into_iter()
        .map(|c| (c.dim, g.reduced_word(&c.w).0, c))
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let cells: Vec<SpringerCell> = keyed.into_iter().map(|k| k.2).collect();
    let index = cells.iter().enumerate().map(|(k, c)| (c.w, k)).collect();
    Ok(CellComplex {
        kind,
        root,
        fiber_dim,
        histogram,
        cells,
        min_dim,
        index,
    })
}

/// Dense cells of the irreducible components (equidimensionality assumed).
pub fn component_words(g: &WeylGroup, kind: OrbitKind, budget: &Budget) -> Result<Vec<WeylElement>> {
    if effective_kind(g.root_system().simple_type(), kind) == OrbitKind::Minimal {
        return minimal_components(g, budget);
    }
    // first pass only counts, so large groups never hold every cell
    let dim = enumerate_cells(g, kind, Some(usize::MAX), budget)?.fiber_dim;
    let cx = enumerate_cells(g, kind, Some(dim), budget)?;
    Ok(cx.top().map(|c| c.w).collect())
}

/// Components of the minimal-orbit fiber without walking the group.
///
/// `w^{-1}(lambda)` only depends on the coset `W_J w`, `J` the stabilizer of
/// `lambda`, and the cell of `w` is all of `S(w)`. So the top cells are the
/// elements `w_J m` with `m` a minimal coset representative of maximal
/// length among those with `m^{-1}(lambda) > 0`.
pub fn minimal_components(g: &WeylGroup, budget: &Budget) -> Result<Vec<WeylElement>> {
    let rs = g.root_system();
    let lambda = rs.highest_root();
    let wc = rs.weight_coords(lambda);
    let stab: Vec<usize> = (0..rs.rank()).filter(|&j| wc[j] == 0).collect();
    let simple: Vec<Root> = (1..=rs.rank()).map(|i| rs.simple_root(i)).collect::<Result<_>>()?;

    let mut w_j = g.identity();
    while let Some(&j) = stab.iter().find(|&&j| rs.is_positive(g.act_inverse(&w_j, simple[j]))) {
        w_j = g.left_mul_simple(&w_j, j + 1)?;
    }

    let minimal_rep = |m: &WeylElement| stab.iter().all(|&j| rs.is_positive(g.act_inverse(m, simple[j])));
    let mut level = vec![g.identity()];
    let mut best: Vec<WeylElement> = Vec::new();
    let mut total = 0u64;
    while !level.is_empty() {
        total += level.len() as u64;
        if total > budget.max_group_elements {
            return Err(Error::BudgetExceeded {
                what: format!("coset representatives in the Weyl group of {}", rs.simple_type()),
                limit: budget.max_group_elements,
                partial: None,
            });
        }
        let good: Vec<WeylElement> = level
            .iter()
            .filter(|m| rs.is_positive(g.act_inverse(m, lambda)))
            .copied()
            .collect();
        if !good.is_empty() {
            best = good;
        }
        let mut next: Vec<WeylElement> = level
            .iter()
            .flat_map(|m| (0..rs.rank()).filter(|&s| m.coords()[s] >= 0).map(|s| g.rmul0(m, s)))
            .filter(|v| minimal_rep(v))
            .collect();
        next.sort_unstable();
        next.dedup();
        level = next;
    }
    let mut out: Vec<(Vec<u8>, WeylElement)> = best
        .iter()
        .map(|m| {
            let w = g.mul(&w_j, m);
            (g.reduced_word(&w).0, w)
        })
        .collect();
    out.sort();
    Ok(out.into_iter().map(|p| p.1).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineStatus {
    CertifiedYes,
    CertifiedNo,
    Unknown,
}

/// Whether the closure of the cell is a union of lines of type `s_i`.
///
/// Minimal: the closure is a Schubert variety, which is a union of such lines
/// exactly when `i` is a right descent. Minimal special: a right descent `i`
/// with `beta = w s_i(alpha_i)` in `A_w` gives the line family; if `beta` is
/// not in `A_w` the tangent direction along the line is missing from the cell.
/// For an ascent the lines through the cell would sweep out a set of dimension
/// `dim + 1` inside the fiber, which the ascent cell cannot supply.
pub fn lines_of_type(
    g: &WeylGroup,
    kind: OrbitKind,
    cell: &SpringerCell,
    i: usize,
) -> Result<LineStatus> {
    let rs = g.root_system();
    rs.check_index(i)?;
    let descent = cell.w.coords()[i - 1] < 0;
    if !descent {
        return Ok(LineStatus::CertifiedNo);
    }
    match effective_kind(rs.simple_type(), kind) {
        OrbitKind::Minimal => Ok(LineStatus::CertifiedYes),
        OrbitKind::MinimalSpecial => {
            let beta = rs.negate(g.act(&cell.w, rs.simple_root(i)?));
            Ok(if cell.a_set.binary_search(&beta).is_ok() {
                LineStatus::CertifiedYes
            } else {
                LineStatus::CertifiedNo
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IxResult {
    pub indices: Vec<usize>,
    pub fully_decided: bool,
}

pub fn i_x(g: &WeylGroup, kind: OrbitKind, w: &WeylElement) -> Result<IxResult> {
    let c = cell(g, kind, w)?
        .ok_or_else(|| Error::Unsupported(format!("{} indexes an empty cell", g.format(w))))?;
    let mut indices = Vec::new();
    let mut fully_decided = true;
    for i in 1..=g.rank() {
        match lines_of_type(g, kind, &c, i)? {
            LineStatus::CertifiedYes => indices.push(i),
            LineStatus::CertifiedNo => {}
            LineStatus::Unknown => fully_decided = false,
        }
    }
    Ok(IxResult { indices, fully_decided })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub fiber_dim: usize,
    pub component_count: usize,
}

/// Fiber dimension and number of components: coset representatives for the
/// minimal orbit, the cell enumeration for the minimal special one, the
/// Dynkin curve for G2.
pub fn table2(g: &WeylGroup, kind: OrbitKind, budget: &Budget) -> Result<Table2Row> {
    let ty = g.root_system().simple_type();
    if ty.family == Family::G && kind == OrbitKind::MinimalSpecial {
        let curve = crate::gamma::dynkin_curve(g.root_system());
        return Ok(Table2Row {
            fiber_dim: 1,
            component_count: curve.vertices.len(),
        });
    }
    if effective_kind(ty, kind) == OrbitKind::Minimal {
        let comps = minimal_components(g, budget)?;
        return Ok(Table2Row {
            fiber_dim: comps[0].length(),
            component_count: comps.len(),
        });
    }
    let cx = enumerate_cells(g, kind, None, budget)?;
    Ok(Table2Row {
        fiber_dim: cx.fiber_dim,
        component_count: cx.top().count(),
    })
}

/// Closed-form row of the summary table.
pub fn expected_table2(ty: SimpleType, kind: OrbitKind) -> Table2Row {
    let n = ty.rank;
    let kind = effective_kind(ty, kind);
    let (fiber_dim, component_count) = match (ty.family, kind) {
        (Family::A, _) => ((n * n - n) / 2, n),
        (Family::B, OrbitKind::Minimal) => (n * n - 2 * n + 2, n - 1),
        (Family::B, OrbitKind::MinimalSpecial) => (n * n - 2 * n + 1, n + 1),
        (Family::C, OrbitKind::Minimal) => (n * n - n, 1),
        (Family::C, OrbitKind::MinimalSpecial) => (n * n - 2 * n + 1, 2 * n - 1),
        (Family::D, _) => (n * n - 3 * n + 3, n),
        (Family::E, _) => match n {
            6 => (25, 6),
            7 => (46, 7),
            _ => (91, 8),
        },
        (Family::F, OrbitKind::Minimal) => (16, 2),
        (Family::F, OrbitKind::MinimalSpecial) => (13, 6),
        (Family::G, OrbitKind::Minimal) => (3, 1),
        (Family::G, OrbitKind::MinimalSpecial) => (1, 4),
    };
    Table2Row { fiber_dim, component_count }
}
