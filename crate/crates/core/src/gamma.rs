//! Intersection graphs of the irreducible components of the fiber.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rootsys::{Family, Root, RootSystem, SimpleType};
use crate::springer::{self, CellComplex, OrbitKind};
use crate::weyl::{WeylElement, WeylGroup};

pub const GRAPH_SCHEMA: &str = "springer-gamma/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStatus {
    Certified,
    Candidate,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub label: String,
    /// Reduced word of the dense cell, empty for curve vertices.
    pub word: String,
    pub i_x: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub status: EdgeStatus,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaGraph {
    pub schema: String,
    pub name: String,
    pub vertices: Vec<Vertex>,
    /// One record per evaluated pair; refuted pairs are kept so the
    /// reasoning stays visible.
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<usize>>,
}

impl GammaGraph {
    pub fn new(name: impl Into<String>) -> Self {
        GammaGraph {
            schema: GRAPH_SCHEMA.to_string(),
            name: name.into(),
            vertices: Vec::new(),
            edges: Vec::new(),
            pairing: None,
        }
    }

    pub(crate) fn add_vertex(&mut self, label: String, word: String, i_x: Vec<usize>) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, label, word, i_x });
        id
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize, status: EdgeStatus, note: impl Into<String>) {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        self.edges.push(Edge { u, v, status, note: note.into() });
    }

    pub fn certified_edges(&self) -> BTreeSet<(usize, usize)> {
        self.edges_with(EdgeStatus::Certified)
    }

    pub fn edges_with(&self, status: EdgeStatus) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| e.status == status)
            .map(|e| (e.u, e.v))
            .collect()
    }

    /// Pairs neither certified nor refuted.
    pub fn undetermined(&self) -> Vec<(usize, usize)> {
        self.edges_with(EdgeStatus::Candidate).into_iter().collect()
    }

    pub fn is_determined(&self) -> bool {
        self.undetermined().is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in self.certified_edges() {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .adjacency()
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .collect();
        d.sort_unstable();
        d
    }

    /// The pairing maps certified edges to certified edges and keeps `i_x`.
    pub fn pairing_is_automorphism(&self) -> bool {
        let Some(p) = &self.pairing else {
            return true;
        };
        let n = self.vertices.len();
        if p.len() != n || (0..n).any(|k| p[k] >= n) {
            return false;
        }
        let adj = self.adjacency();
        (0..n).all(|u| self.vertices[u].i_x == self.vertices[p[u]].i_x)
            && (0..n).all(|u| (0..n).all(|v| adj[u][v] == adj[p[u]][p[v]]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Unsupported(format!("bad graph JSON: {e}")))
    }

    /// Certified edges solid, candidates dashed; refuted pairs only as comments.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph \"{}\" {{\n", self.name.replace('"', "'")));
        out.push_str(&format!("  // schema {GRAPH_SCHEMA}\n"));
        for v in &self.vertices {
            let ix: Vec<String> = v.i_x.iter().map(|i| format!("s{i}")).collect();
            out.push_str(&format!(
                "  n{} [label=\"{}\\nI={{{}}}\"];\n",
                v.id,
                v.label,
                ix.join(",")
            ));
        }
        for e in &self.edges {
            match e.status {
                EdgeStatus::Certified => out.push_str(&format!("  n{} -- n{};\n", e.u, e.v)),
                EdgeStatus::Candidate => {
                    out.push_str(&format!("  n{} -- n{} [style=dashed];\n", e.u, e.v))
                }
                EdgeStatus::Refuted => out.push_str(&format!("  // n{} -/- n{}\n", e.u, e.v)),
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Graph of a Dynkin diagram, vertex `i-1` standing for `alpha_i`.
pub fn dynkin_diagram(rs: &RootSystem) -> GammaGraph {
    let n = rs.rank();
    let mut g = GammaGraph::new(format!("Dynkin diagram {}", rs.simple_type()));
    for i in 1..=n {
        g.add_vertex(format!("a{i}"), String::new(), vec![i]);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rs.cartan()[i][j] != 0 {
                g.add_edge(i, j, EdgeStatus::Certified, "");
            }
        }
    }
    g
}

/// Curve with `mult(i)` copies of the line of type `s_i`; copies of adjacent
/// nodes with equal multiplicity are joined index by index, and a node of
/// multiplicity one is joined to every copy of its neighbours.
fn curve_graph(rs: &RootSystem, name: String, mult: impl Fn(usize) -> usize) -> GammaGraph {
    let n = rs.rank();
    let mut g = GammaGraph::new(name);
    let mut ids: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let m = mult(i);
        let v: Vec<usize> = (0..m)
            .map(|k| {
                let label = if m == 1 {
                    format!("s{}", i + 1)
                } else {
                    format!("s{}.{}", i + 1, k + 1)
                };
                g.add_vertex(label, String::new(), vec![i + 1])
            })
            .collect();
        ids.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rs.cartan()[i][j] == 0 {
                continue;
            }
            for (a, &u) in ids[i].iter().enumerate() {
                for (b, &v) in ids[j].iter().enumerate() {
                    if ids[i].len() != ids[j].len() || a == b {
                        g.add_edge(u, v, EdgeStatus::Certified, "");
                    }
                }
            }
        }
    }
    g
}

/// Dynkin curve: short simple roots counted with multiplicity
/// `(long length)^2 / (short length)^2`.
pub fn dynkin_curve(rs: &RootSystem) -> GammaGraph {
    let max = (0..rs.rank())
        .map(|i| rs.squared_length(Root(i as u16)))
        .max()
        .unwrap();
    let mut g = curve_graph(rs, format!("Dynkin curve {}", rs.simple_type()), |i| {
        (max / rs.squared_length(Root(i as u16))) as usize
    });
    if rs.simple_type().family == Family::G {
        // the three short-root lines are permuted cyclically
        let short: Vec<usize> = g.vertices.iter().filter(|v| v.i_x == [1]).map(|v| v.id).collect();
        let mut p: Vec<usize> = (0..g.vertices.len()).collect();
        for k in 0..short.len() {
            p[short[k]] = short[(k + 1) % short.len()];
        }
        g.pairing = Some(p);
    }
    g
}

/// Subregular curve: long simple roots counted with multiplicity.
pub fn subregular_curve(rs: &RootSystem) -> GammaGraph {
    let min = (0..rs.rank())
        .map(|i| rs.squared_length(Root(i as u16)))
        .min()
        .unwrap();
    curve_graph(rs, format!("subregular curve {}", rs.simple_type()), |i| {
        (rs.squared_length(Root(i as u16)) / min) as usize
    })
}

/// Vertex map `phi` from `a` onto `b` preserving certified adjacency and
/// satisfying `compatible(u, phi(u))`.
pub fn find_isomorphism(
    a: &GammaGraph,
    b: &GammaGraph,
    compatible: &dyn Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let n = a.vertices.len();
    if n != b.vertices.len() || a.certified_edges().len() != b.certified_edges().len() {
        return None;
    }
    if a.degree_sequence() != b.degree_sequence() {
        return None;
    }
    let aa = a.adjacency();
    let ba = b.adjacency();
    let da: Vec<usize> = aa.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    let db: Vec<usize> = ba.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        k: usize,
        n: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        aa: &[Vec<bool>],
        ba: &[Vec<bool>],
        da: &[usize],
        db: &[usize],
        compatible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if k == n {
            return true;
        }
        for c in 0..n {
            if used[c] || da[k] != db[c] || !compatible(k, c) {
                continue;
            }
            if (0..k).any(|j| aa[k][j] != ba[c][map[j]]) {
                continue;
            }
            map[k] = c;
            used[c] = true;
            if go(k + 1, n, map, used, aa, ba, da, db, compatible) {
                return true;
            }
            used[c] = false;
        }
        map[k] = usize::MAX;
        false
    }

    go(0, n, &mut map, &mut used, &aa, &ba, &da, &db, compatible).then_some(map)
}

pub fn isomorphic(a: &GammaGraph, b: &GammaGraph) -> bool {
    find_isomorphism(a, b, &|_, _| true).is_some()
}

fn ix_of(g: &WeylGroup, kind: OrbitKind, w: &WeylElement) -> Result<Vec<usize>> {
    Ok(springer::i_x(g, kind, w)?.indices)
}

/// Components of the minimal-orbit fiber are Schubert varieties of the same
/// dimension `d`, so two of them meet in codimension one exactly when they
/// share a coatom.
pub fn gamma_minimal(g: &WeylGroup, budget: &Budget) -> Result<GammaGraph> {
    let comps = springer::component_words(g, OrbitKind::Minimal, budget)?;
    let mut graph = GammaGraph::new(format!("minimal {}", g.root_system().simple_type()));
    for (k, w) in comps.iter().enumerate() {
        graph.add_vertex(format!("X{}", k + 1), g.format(w), ix_of(g, OrbitKind::Minimal, w)?);
    }
    let coatoms: Vec<BTreeSet<WeylElement>> = comps.iter().map(|w| g.coatoms(w).into_iter().collect()).collect();
    for a in 0..comps.len() {
        for b in a + 1..comps.len() {
            match coatoms[a].intersection(&coatoms[b]).next() {
                Some(z) => graph.add_edge(a, b, EdgeStatus::Certified, format!("common coatom {}", g.format(z))),
                None => graph.add_edge(a, b, EdgeStatus::Refuted, "no common coatom"),
            }
        }
    }
    Ok(graph)
}

/// A state of a closure chain: the closure of the starting cell contains a
/// piece of the cell of `w` whose coordinates are indexed by `a_set`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub w: WeylElement,
    pub a_set: Vec<Root>,
    /// Simple indices applied so far, in order.
    pub steps: Vec<usize>,
}

/// All pieces reachable from `(w, a_set)` in at most `max_steps` steps
/// `(w, A) -> (w s_i, A - {w s_i(alpha_i)})`, allowed when `i` is a right
/// descent of `w` and `w s_i(alpha_i)` lies in `A`.
pub fn closure_pieces(g: &WeylGroup, w: &WeylElement, a_set: &[Root], max_steps: usize) -> Vec<Piece> {
    let rs = g.root_system();
    let mut out = vec![Piece {
        w: *w,
        a_set: a_set.to_vec(),
        steps: Vec::new(),
    }];
    let mut frontier = out.clone();
    for _ in 0..max_steps {
        let mut next = Vec::new();
        for p in &frontier {
            for i in 1..=g.rank() {
                if p.w.coords()[i - 1] >= 0 {
                    continue;
                }
                let beta = rs.negate(g.act(&p.w, Root((i - 1) as u16)));
                if let Ok(k) = p.a_set.binary_search(&beta) {
                    let mut a = p.a_set.clone();
                    a.remove(k);
                    let mut steps = p.steps.clone();
                    steps.push(i);
                    next.push(Piece {
                        w: g.right_mul_simple(&p.w, i).unwrap(),
                        a_set: a,
                        steps,
                    });
                }
            }
        }
        next.sort();
        next.dedup_by(|a, b| a.w == b.w && a.a_set == b.a_set);
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Why a pair of components meets in codimension one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCertificate {
    pub at: WeylElement,
    pub dim: usize,
    pub from_u: Vec<usize>,
    pub from_v: Vec<usize>,
}

/// Two closures both containing the same piece of dimension `dim - 1`, or
/// one containing a piece of a cell whose full closure lies in the other.
pub fn certify_pair(
    g: &WeylGroup,
    cx: &CellComplex,
    u: &WeylElement,
    v: &WeylElement,
) -> Option<EdgeCertificate> {
    let d = cx.fiber_dim;
    let pieces = |w: &WeylElement| {
        let c = cx.get(w).expect("component cell stored");
        closure_pieces(g, w, &c.a_set, 1)
    };
    let pu = pieces(u);
    let pv = pieces(v);
    for a in &pu {
        for b in &pv {
            if a.w != b.w {
                continue;
            }
            let Some(full) = cx.get(&a.w).map(|c| &c.a_set) else {
                continue;
            };
            let shared = if a.a_set == b.a_set {
                a.a_set.len()
            } else if &a.a_set == full {
                b.a_set.len()
            } else if &b.a_set == full {
                a.a_set.len()
            } else {
                continue;
            };
            if shared + 1 == d {
                return Some(EdgeCertificate {
                    at: a.w,
                    dim: shared,
                    from_u: a.steps.clone(),
                    from_v: b.steps.clone(),
                });
            }
        }
    }
    None
}

/// Cells of dimension at least `dim - 1` below both `u` and `v`.
pub fn common_lower_cells<'a>(
    g: &WeylGroup,
    cx: &'a CellComplex,
    u: &WeylElement,
    v: &WeylElement,
) -> Vec<&'a springer::SpringerCell> {
    cx.cells
        .iter()
        .filter(|c| c.dim + 1 >= cx.fiber_dim && g.bruhat_leq(&c.w, u) && g.bruhat_leq(&c.w, v))
        .collect()
}

/// Involution swapping the two components that share an `I_X` label.
fn label_pairing(graph: &GammaGraph) -> Vec<usize> {
    let mut by_label: BTreeMap<&Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in &graph.vertices {
        by_label.entry(&v.i_x).or_default().push(v.id);
    }
    let mut p: Vec<usize> = (0..graph.vertices.len()).collect();
    for ids in by_label.values() {
        if ids.len() == 2 {
            p[ids[0]] = ids[1];
            p[ids[1]] = ids[0];
        }
    }
    p
}

pub fn gamma_minspecial(g: &WeylGroup, budget: &Budget) -> Result<GammaGraph> {
    let rs = g.root_system();
    let ty = rs.simple_type();
    match ty.family {
        _ if ty.is_simply_laced() => gamma_minimal(g, budget),
        Family::G => Ok(dynkin_curve(rs)),
        Family::F => Ok(crate::f4appendix::verify(budget)?.graph),
        _ => cell_minspecial(g, budget),
    }
}

/// Simple indices orthogonal to the orbit root. Its coroot grades the Lie
/// algebra with the orbit element in degree 2, and this parabolic is the
/// nonnegative part of that grading.
pub fn grading_parabolic(rs: &RootSystem, kind: OrbitKind) -> Result<Vec<usize>> {
    let mu = springer::orbit_root(rs, kind)?;
    Ok((1..=rs.rank()).filter(|&j| rs.weight_coords(mu)[j - 1] == 0).collect())
}

/// Why a cell cannot hold the dense part of a codimension-one piece `W` of
/// `X_a ∩ X_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Obstruction {
    /// `X_t` is a union of lines of type `s_i`, so `W` is too, but the line
    /// of type `s_i` through a point of the cell leaves the fiber.
    LineDirection,
    /// `s_i` is an ascent of the cell: the lines of type `s_i` through `W`
    /// sweep out `X_t`, which would then lie in the Schubert variety of
    /// `c s_i`, and `y_t` is not below `c s_i`.
    LineSweep,
    /// `y_a`, `y_b` and the cell share an orbit of the grading parabolic,
    /// whose intersection with the fiber is smooth, so the two components are
    /// disjoint there.
    Slice,
}

/// One side of a pair: dense cell of the component and its `I_X`.
pub struct Side<'a> {
    pub cell: &'a springer::SpringerCell,
    pub i_x: &'a [usize],
}

pub fn obstruction(
    g: &WeylGroup,
    kind: OrbitKind,
    slice_gens: &[usize],
    a: &Side,
    b: &Side,
    c: &springer::SpringerCell,
) -> Result<Option<(Obstruction, String)>> {
    for t in [a, b] {
        let yt = &t.cell.w;
        for &i in t.i_x {
            if c.w.coords()[i - 1] < 0 {
                if springer::lines_of_type(g, kind, c, i)? != springer::LineStatus::CertifiedYes {
                    return Ok(Some((
                        Obstruction::LineDirection,
                        format!("lines of type s{i} through {} leave the fiber", g.format(&c.w)),
                    )));
                }
            } else {
                let cs = g.right_mul_simple(&c.w, i)?;
                if !g.bruhat_leq(yt, &cs) {
                    return Ok(Some((
                        Obstruction::LineSweep,
                        format!("{} is not below {} s{i}", g.format(yt), g.format(&c.w)),
                    )));
                }
            }
        }
    }
    let key = |w: &WeylElement| g.min_coset_rep(slice_gens, w);
    let ka = key(&a.cell.w)?;
    if ka == key(&b.cell.w)? && ka == key(&c.w)? {
        return Ok(Some((Obstruction::Slice, format!("one orbit with representative {}", g.format(&ka)))));
    }
    Ok(None)
}

/// Two-sided edge procedure over the cells of dimension >= `dim - 1`.
pub fn cell_minspecial(g: &WeylGroup, budget: &Budget) -> Result<GammaGraph> {
    let kind = OrbitKind::MinimalSpecial;
    let probe = springer::enumerate_cells(g, kind, Some(usize::MAX), budget)?;
    let d = probe.fiber_dim;
    let cx = springer::enumerate_cells(g, kind, Some(d.saturating_sub(1)), budget)?;
    let slice_gens = grading_parabolic(g.root_system(), kind)?;
    let comps: Vec<&springer::SpringerCell> = cx.top().collect();
    let mut graph = GammaGraph::new(format!("minimal special {}", g.root_system().simple_type()));
    let mut ix = Vec::new();
    for (k, c) in comps.iter().enumerate() {
        ix.push(ix_of(g, kind, &c.w)?);
        graph.add_vertex(format!("X{}", k + 1), g.format(&c.w), ix[k].clone());
    }
    for a in 0..comps.len() {
        for b in a + 1..comps.len() {
            let (u, v) = (&comps[a].w, &comps[b].w);
            let sa = Side { cell: comps[a], i_x: &ix[a] };
            let sb = Side { cell: comps[b], i_x: &ix[b] };
            let common = common_lower_cells(g, &cx, u, v);
            let mut open = Vec::new();
            let mut used: BTreeMap<Obstruction, usize> = BTreeMap::new();
            for c in &common {
                match obstruction(g, kind, &slice_gens, &sa, &sb, c)? {
                    Some((o, _)) => *used.entry(o).or_default() += 1,
                    None => open.push(g.format(&c.w)),
                }
            }
            if let Some(cert) = certify_pair(g, &cx, u, v) {
                if open.is_empty() {
                    return Err(Error::Verification(format!(
                        "{} and {} carry a closure certificate but every common cell is obstructed",
                        g.format(u),
                        g.format(v)
                    )));
                }
                graph.add_edge(
                    a,
                    b,
                    EdgeStatus::Certified,
                    format!("shared piece of dimension {} in the cell of {}", cert.dim, g.format(&cert.at)),
                );
            } else if common.is_empty() {
                graph.add_edge(a, b, EdgeStatus::Refuted, format!("no common lower cell of dimension >= {}", d - 1));
            } else if open.is_empty() {
                let parts: Vec<String> = used.iter().map(|(o, n)| format!("{o:?} x{n}")).collect();
                graph.add_edge(a, b, EdgeStatus::Refuted, format!("every common lower cell obstructed: {}", parts.join(", ")));
            } else {
                graph.add_edge(a, b, EdgeStatus::Candidate, format!("unobstructed common cells: {}", open.join(", ")));
            }
        }
    }
    graph.pairing = Some(label_pairing(&graph));
    Ok(graph)
}

/// Shape predicted by the classical codimension formulas: for C_n a path
/// `X_1 - ... - X_n - X'_{n-1} - ... - X'_1`, for B_n the path
/// `X_1 - ... - X_{n-1}` with two further components `X'_n`, `X''_n` attached
/// to `X_{n-1}` and not to each other.
pub fn expected_classical_minspecial(ty: SimpleType) -> Option<GammaGraph> {
    let n = ty.rank;
    let mut g = GammaGraph::new(format!("expected minimal special {ty}"));
    match ty.family {
        Family::C => {
            for i in 1..=n {
                g.add_vertex(format!("X{i}"), String::new(), Vec::new());
            }
            for i in (1..n).rev() {
                g.add_vertex(format!("X{i}'"), String::new(), Vec::new());
            }
            for k in 0..2 * n - 2 {
                g.add_edge(k, k + 1, EdgeStatus::Certified, "");
            }
        }
        Family::B => {
            for i in 1..n {
                g.add_vertex(format!("X{i}"), String::new(), Vec::new());
            }
            let a = g.add_vertex(format!("X{n}'"), String::new(), Vec::new());
            let b = g.add_vertex(format!("X{n}''"), String::new(), Vec::new());
            for k in 0..n - 2 {
                g.add_edge(k, k + 1, EdgeStatus::Certified, "");
            }
            g.add_edge(n - 2, a, EdgeStatus::Certified, "");
            g.add_edge(n - 2, b, EdgeStatus::Certified, "");
        }
        _ => return None,
    }
    Some(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremCheck {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub type_name: String,
    pub result: TheoremCheck,
    pub fiber_graph: GammaGraph,
    pub dual_curve: GammaGraph,
    /// Some isomorphism also sends each component with `I_X = S - {s_i}` to a
    /// line of type `s_i`.
    pub labels_compatible: bool,
    pub undetermined: Vec<(usize, usize)>,
}

/// Compares the minimal special graph with the subregular curve of the
/// Langlands dual.
pub fn check_main_theorem(g: &WeylGroup, budget: &Budget) -> Result<MainTheoremReport> {
    let rs = g.root_system();
    let fiber_graph = gamma_minspecial(g, budget)?;
    let dual_curve = subregular_curve(&rs.dual());
    let undetermined = fiber_graph.undetermined();
    let result = if !undetermined.is_empty() {
        TheoremCheck::Inconclusive
    } else if isomorphic(&fiber_graph, &dual_curve) {
        TheoremCheck::Holds
    } else {
        TheoremCheck::Fails
    };
    let n = rs.rank();
    let complement: HashMap<usize, Vec<usize>> = fiber_graph
        .vertices
        .iter()
        .map(|v| (v.id, (1..=n).filter(|i| !v.i_x.contains(i)).collect()))
        .collect();
    let labels_compatible = result == TheoremCheck::Holds
        && find_isomorphism(&fiber_graph, &dual_curve, &|a, b| {
            complement[&a] == dual_curve.vertices[b].i_x
        })
        .is_some();
    Ok(MainTheoremReport {
        type_name: rs.simple_type().to_string(),
        result,
        fiber_graph,
        dual_curve,
        labels_compatible,
        undetermined,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoldingReport {
    pub source: String,
    pub target: String,
    /// `dim B - dim B_N` for the minimal orbit of the source.
    pub source_codim: usize,
    /// `dim B - dim B_N'` for the minimal special orbit of the target.
    pub target_codim: usize,
    pub isomorphic: bool,
}

/// Graph-level comparison for a diagram folding `source -> target`:
/// A_{2n-1} -> C_n, D_{n+1} -> B_n, D4 -> G2, E6 -> F4.
pub fn folding(source: SimpleType, target: SimpleType, budget: &Budget) -> Result<FoldingReport> {
    let (s, t) = (source.rank, target.rank);
    let listed = match (source.family, target.family) {
        (Family::A, Family::C) => s == 2 * t - 1,
        (Family::D, Family::B) => s == t + 1,
        (Family::D, Family::G) => s == 4,
        (Family::E, Family::F) => s == 6,
        _ => false,
    };
    if !listed {
        return Err(Error::Unsupported(format!("{source} does not fold to {target}")));
    }
    let gs = WeylGroup::build(source)?;
    let gt = WeylGroup::build(target)?;
    let top = gamma_minimal(&gs, budget)?;
    let bottom = gamma_minspecial(&gt, budget)?;
    let ds = springer::table2(&gs, OrbitKind::Minimal, budget)?.fiber_dim;
    let dt = springer::table2(&gt, OrbitKind::MinimalSpecial, budget)?.fiber_dim;
    Ok(FoldingReport {
        source: source.to_string(),
        target: target.to_string(),
        source_codim: gs.root_system().num_positive() - ds,
        target_codim: gt.root_system().num_positive() - dt,
        isomorphic: bottom.is_determined() && isomorphic(&top, &bottom),
    })
}
