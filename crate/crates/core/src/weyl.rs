//! Weyl group arithmetic.
//!
//! An element `w` is stored as `x = w^{-1}(rho)` in fundamental-weight
//! coordinates. Since `rho` is regular this determines `w`, equality and
//! hashing cost O(rank), and `i` is a right descent exactly when `x_i < 0`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem, SimpleType};
use crate::MAX_RANK;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    x: [i16; MAX_RANK],
    len: u16,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.len as usize
    }

    pub fn coords(&self) -> &[i16; MAX_RANK] {
        &self.x
    }

    pub fn is_identity(&self) -> bool {
        self.len == 0
    }

    /// Smallest right descent, 0-based.
    #[inline]
    fn first_descent(&self, rank: usize) -> Option<usize> {
        (0..rank).find(|&i| self.x[i] < 0)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = self.x.iter().rposition(|&c| c != 0).map_or(0, |k| k + 1);
        write!(f, "W{:?}/{}", &self.x[..used], self.len)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Sequence of simple-reflection indices, counted from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Digit string for ranks up to 9, comma separated otherwise.
    pub fn format(&self, rank: usize) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        if rank > 9 {
            parts.join(",")
        } else {
            parts.concat()
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix("s(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        if t.is_empty() || t == "e" || t == "id" {
            return Ok(Word(Vec::new()));
        }
        let bad = |why: &str| Error::ParseWord(s.to_string(), why.to_string());
        let letters: Vec<u8> = if t.contains(',') {
            t.split(',')
                .map(|p| p.trim().parse::<u8>().map_err(|_| bad("non-numeric entry")))
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| bad("expected digits"))
                })
                .collect::<Result<_>>()?
        };
        Ok(Word(letters))
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    rs: Arc<RootSystem>,
    rank: usize,
    // col[i][j] = cartan[j][i]
    col: [[i16; MAX_RANK]; MAX_RANK],
}

impl WeylGroup {
    pub fn new(rs: Arc<RootSystem>) -> Self {
        let rank = rs.rank();
        let mut col = [[0i16; MAX_RANK]; MAX_RANK];
        for (i, c) in col.iter_mut().enumerate().take(rank) {
            for (j, v) in c.iter_mut().enumerate().take(rank) {
                *v = rs.cartan()[j][i] as i16;
            }
        }
        WeylGroup { rs, rank, col }
    }

    pub fn build(ty: SimpleType) -> Result<Self> {
        Ok(Self::new(Arc::new(RootSystem::build(ty)?)))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn element_from_parts(&self, x: [i16; MAX_RANK], len: usize) -> WeylElement {
        WeylElement { x, len: len as u16 }
    }

    pub fn identity(&self) -> WeylElement {
        let mut x = [0i16; MAX_RANK];
        x[..self.rank].fill(1);
        WeylElement { x, len: 0 }
    }

    /// `w s_i`, 0-based index.
    #[inline]
    pub(crate) fn rmul0(&self, w: &WeylElement, i: usize) -> WeylElement {
        let xi = w.x[i];
        let mut out = *w;
        let c = &self.col[i];
        for j in 0..self.rank {
            out.x[j] -= xi * c[j];
        }
        out.len = if xi < 0 { w.len - 1 } else { w.len + 1 };
        out
    }

    /// `w s_i`.
    pub fn right_mul_simple(&self, w: &WeylElement, i: usize) -> Result<WeylElement> {
        self.rs.check_index(i)?;
        Ok(self.rmul0(w, i - 1))
    }

    /// `s_i w`.
    pub fn left_mul_simple(&self, w: &WeylElement, i: usize) -> Result<WeylElement> {
        self.rs.check_index(i)?;
        let beta = self.act_inverse(w, self.rs.simple_root(i)?);
        Ok(self.shift_by_root(w, beta))
    }

    /// Element with coordinates `x - beta` where `beta = w^{-1}(alpha_s)`: this is `s w`.
    fn shift_by_root(&self, w: &WeylElement, beta: Root) -> WeylElement {
        let mut out = *w;
        let wc = self.rs.weight_coords(beta);
        for j in 0..self.rank {
            out.x[j] -= wc[j] as i16;
        }
        out.len = if self.rs.is_positive(beta) { w.len + 1 } else { w.len - 1 };
        out
    }

    pub fn from_word(&self, word: &Word) -> Result<WeylElement> {
        let mut w = self.identity();
        for &i in word.letters() {
            self.rs.check_index(i as usize)?;
            w = self.rmul0(&w, i as usize - 1);
        }
        Ok(w)
    }

    pub fn parse_word(&self, s: &str) -> Result<WeylElement> {
        self.from_word(&s.parse()?)
    }

    pub fn simple(&self, i: usize) -> Result<WeylElement> {
        self.right_mul_simple(&self.identity(), i)
    }

    /// Some reduced word, obtained by peeling the smallest right descent.
    fn peel_word(&self, w: &WeylElement) -> Vec<u8> {
        let mut out = Vec::with_capacity(w.length());
        let mut u = *w;
        while let Some(i) = u.first_descent(self.rank) {
            out.push(i as u8 + 1);
            u = self.rmul0(&u, i);
        }
        out.reverse();
        out
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let mut word = self.peel_word(w);
        word.reverse();
        self.from_word(&Word(word)).expect("letters in range")
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self, w: &WeylElement) -> Word {
        let mut y = self.inverse(w);
        let mut out = Vec::with_capacity(w.length());
        while let Some(i) = y.first_descent(self.rank) {
            out.push(i as u8 + 1);
            y = self.rmul0(&y, i);
        }
        Word(out)
    }

    pub fn format(&self, w: &WeylElement) -> String {
        self.reduced_word(w).format(self.rank)
    }

    pub fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        let mut out = *a;
        for &i in &self.peel_word(b) {
            out = self.rmul0(&out, i as usize - 1);
        }
        out
    }

    pub fn descents(&self, w: &WeylElement, side: Side) -> Vec<usize> {
        match side {
            Side::Right => (0..self.rank).filter(|&i| w.x[i] < 0).map(|i| i + 1).collect(),
            Side::Left => {
                let inv = self.inverse(w);
                (0..self.rank).filter(|&i| inv.x[i] < 0).map(|i| i + 1).collect()
            }
        }
    }

    /// `w(r)`.
    pub fn act(&self, w: &WeylElement, r: Root) -> Root {
        let word = self.peel_word(w);
        word.iter()
            .rev()
            .fold(r, |acc, &i| self.rs.reflect0(acc, i as usize - 1))
    }

    /// `w^{-1}(r)`.
    pub fn act_inverse(&self, w: &WeylElement, r: Root) -> Root {
        let word = self.peel_word(w);
        word.iter()
            .fold(r, |acc, &i| self.rs.reflect0(acc, i as usize - 1))
    }

    /// `<w^{-1} rho, beta^vee>`; negative exactly when `w(beta) < 0` for positive `beta`.
    #[inline]
    pub(crate) fn pairing(&self, w: &WeylElement, beta: Root) -> i32 {
        let c = self.rs.coroot_coeffs(beta);
        (0..self.rank).map(|i| c[i] * w.x[i] as i32).sum()
    }

    /// Length recomputed from the coordinates.
    pub fn count_length(&self, w: &WeylElement) -> usize {
        self.rs
            .positive_roots()
            .filter(|&b| self.pairing(w, b) < 0)
            .count()
    }

    /// `|{alpha > 0 : w(alpha) < 0}|` via the root action.
    pub fn inversion_count(&self, w: &WeylElement) -> usize {
        self.rs
            .positive_roots()
            .filter(|&b| !self.rs.is_positive(self.act(w, b)))
            .count()
    }

    /// `w t_beta` for positive `beta`.
    pub fn mul_reflection(&self, w: &WeylElement, beta: Root) -> WeylElement {
        let p = self.pairing(w, beta) as i16;
        let wc = self.rs.weight_coords(beta);
        let mut out = *w;
        for j in 0..self.rank {
            out.x[j] -= p * wc[j] as i16;
        }
        out.len = self.count_length(&out) as u16;
        out
    }

    /// Elements covered by `u` in Bruhat order.
    pub fn coatoms(&self, u: &WeylElement) -> Vec<WeylElement> {
        let mut out: Vec<WeylElement> = self
            .rs
            .positive_roots()
            .filter(|&b| self.pairing(u, b) < 0)
            .map(|b| self.mul_reflection(u, b))
            .filter(|z| z.len + 1 == u.len)
            .collect();
        out.sort();
        out
    }

    pub fn bruhat_leq(&self, u: &WeylElement, w: &WeylElement) -> bool {
        let mut u = *u;
        let mut w = *w;
        loop {
            if u.len > w.len {
                return false;
            }
            if u.len == 0 {
                return true;
            }
            if u.len == w.len {
                return u == w;
            }
            let s = w.first_descent(self.rank).expect("w is not the identity");
            w = self.rmul0(&w, s);
            if u.x[s] < 0 {
                u = self.rmul0(&u, s);
            }
        }
    }

    /// Minimal-length representative of `W_P w`, `P` given by 1-based generators.
    pub fn min_coset_rep(&self, generators: &[usize], w: &WeylElement) -> Result<WeylElement> {
        for &g in generators {
            self.rs.check_index(g)?;
        }
        let mut w = *w;
        'outer: loop {
            for &g in generators {
                let beta = self.act_inverse(&w, self.rs.simple_root(g)?);
                if !self.rs.is_positive(beta) {
                    w = self.shift_by_root(&w, beta);
                    continue 'outer;
                }
            }
            return Ok(w);
        }
    }

    /// Largest `l(z)` with `z <= u`, `z <= v` and `among(z)`, found by walking
    /// down from `u` one Bruhat level at a time.
    pub fn max_common_lower_length(
        &self,
        u: &WeylElement,
        v: &WeylElement,
        among: Option<&dyn Fn(&WeylElement) -> bool>,
        budget: &Budget,
    ) -> Result<Option<usize>> {
        let (u, v) = if u.len <= v.len { (u, v) } else { (v, u) };
        let ok = |z: &WeylElement| among.map_or(true, |f| f(z));
        let mut level = vec![*u];
        let mut seen = 0u64;
        loop {
            if level.iter().any(|z| ok(z) && self.bruhat_leq(z, v)) {
                return Ok(Some(level[0].length()));
            }
            if level[0].len == 0 {
                return Ok(None);
            }
            let mut next: HashSet<WeylElement> = HashSet::new();
            for z in &level {
                next.extend(self.coatoms(z));
            }
            seen += next.len() as u64;
            if seen > budget.max_interval {
                return Err(Error::BudgetExceeded {
                    what: "common lower bound search".into(),
                    limit: budget.max_interval,
                    partial: None,
                });
            }
            level = next.into_iter().collect();
            level.sort();
        }
    }

    /// Calls `visit` on each length level of `[e, w]` in increasing length.
    /// Each level is sorted, so the stream is deterministic.
    pub fn for_each_interval_level<F>(&self, w: &WeylElement, budget: &Budget, mut visit: F) -> Result<Vec<u64>>
    where
        F: FnMut(&[WeylElement]),
    {
        let chain = BruhatChain::new(self, w);
        let mut level = vec![self.identity()];
        let mut hist = Vec::with_capacity(w.length() + 1);
        let mut total = 0u64;
        while !level.is_empty() {
            total += level.len() as u64;
            hist.push(level.len() as u64);
            if total > budget.max_interval {
                return Err(Error::BudgetExceeded {
                    what: format!("interval below element of length {}", w.length()),
                    limit: budget.max_interval,
                    partial: Some(hist),
                });
            }
            visit(&level);
            if level[0].len == w.len {
                break;
            }
            let chain = &chain;
            let next: Vec<WeylElement> = level
                .par_iter()
                .flat_map_iter(|u| {
                    (0..self.rank).filter_map(move |s| {
                        if u.x[s] < 0 {
                            return None;
                        }
                        let v = self.rmul0(u, s);
                        (v.first_descent(self.rank) == Some(s) && chain.contains(self, &v)).then_some(v)
                    })
                })
                .collect();
            level = next;
            level.sort_unstable();
        }
        Ok(hist)
    }

    pub fn lower_interval(&self, w: &WeylElement, budget: &Budget) -> Result<Vec<WeylElement>> {
        let mut out = Vec::new();
        self.for_each_interval_level(w, budget, |lvl| out.extend_from_slice(lvl))?;
        Ok(out)
    }

    /// Every element of `W`, by increasing length.
    pub fn elements(&self, budget: &Budget) -> Result<Vec<WeylElement>> {
        let mut out = Vec::new();
        self.walk(budget, |_, lvl| out.extend_from_slice(lvl))?;
        Ok(out)
    }

    /// Walk all of `W` level by level without a deduplication set: each
    /// element is produced only from its parent `v s` where `s` is the
    /// smallest right descent of `v`.
    pub fn walk<F>(&self, budget: &Budget, mut visit: F) -> Result<u64>
    where
        F: FnMut(usize, &[WeylElement]),
    {
        let mut level = vec![self.identity()];
        let mut total = 0u64;
        let mut l = 0;
        while !level.is_empty() {
            total += level.len() as u64;
            if total > budget.max_group_elements {
                return Err(Error::BudgetExceeded {
                    what: format!("walk of the Weyl group of {}", self.rs.simple_type()),
                    limit: budget.max_group_elements,
                    partial: None,
                });
            }
            visit(l, &level);
            level = level
                .iter()
                .flat_map(|u| self.canonical_children(u).map(|(_, v)| v))
                .collect();
            l += 1;
        }
        Ok(total)
    }

    /// `(s, u s)` for ascents `s` (0-based) that are the smallest right descent of `u s`.
    pub(crate) fn canonical_children<'a>(
        &'a self,
        u: &'a WeylElement,
    ) -> impl Iterator<Item = (usize, WeylElement)> + 'a {
        (0..self.rank).filter_map(move |s| {
            if u.x[s] < 0 {
                return None;
            }
            let v = self.rmul0(u, s);
            (v.first_descent(self.rank) == Some(s)).then_some((s, v))
        })
    }

    pub fn longest_element(&self) -> WeylElement {
        let mut x = [0i16; MAX_RANK];
        x[..self.rank].fill(-1);
        // -rho is w0^{-1}(rho)
        WeylElement {
            x,
            len: self.rs.num_positive() as u16,
        }
    }
}

/// Fixed target `w` for repeated tests `u <= w`: the descent chain of `w` is
/// computed once.
pub struct BruhatChain {
    steps: Vec<u8>,
    len: u16,
}

impl BruhatChain {
    pub fn new(g: &WeylGroup, w: &WeylElement) -> Self {
        let mut steps = Vec::with_capacity(w.length());
        let mut u = *w;
        while let Some(s) = u.first_descent(g.rank) {
            steps.push(s as u8);
            u = g.rmul0(&u, s);
        }
        BruhatChain { steps, len: w.len }
    }

    pub fn contains(&self, g: &WeylGroup, u: &WeylElement) -> bool {
        if u.len > self.len {
            return false;
        }
        let mut u = *u;
        for (k, &s) in self.steps.iter().enumerate() {
            if u.len == 0 {
                return true;
            }
            // remaining target length is len - k
            if u.len as usize > self.steps.len() - k {
                return false;
            }
            if u.x[s as usize] < 0 {
                u = g.rmul0(&u, s as usize);
            }
        }
        u.len == 0
    }
}
