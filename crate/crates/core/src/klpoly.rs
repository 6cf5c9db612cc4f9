//! Kazhdan-Lusztig polynomials, interval Poincare polynomials and rational
//! smoothness.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rootsys::Root;
use crate::weyl::{BruhatChain, WeylElement, WeylGroup};

/// Dense polynomial in `q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![1] }
    }

    pub fn monomial(coeff: i64, degree: usize) -> Self {
        let mut c = vec![0; degree + 1];
        c[degree] = coeff;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    /// `q^k * self`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coeffs);
        IntPolynomial { coeffs: c }
    }

    pub fn scale(&self, a: i64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * a).collect())
    }

    /// Coefficients read the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        let c = &self.coeffs;
        (0..c.len() / 2).all(|i| c[i] == c[c.len() - 1 - i])
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    fn add_scaled_shift(&mut self, other: &IntPolynomial, a: i64, k: usize) {
        if other.coeffs.len() + k > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len() + k, 0);
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            self.coeffs[i + k] += a * c;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        out.add_scaled_shift(rhs, 1, 0);
        out
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        out.add_scaled_shift(rhs, -1, 0);
        out
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(-1)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = IntPolynomial::zero();
        for (k, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                out.add_scaled_shift(rhs, a, k);
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("cannot parse polynomial {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" {
            return Ok(Self::zero());
        }
        let mut out = IntPolynomial::zero();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (coef, deg) = match term.find('q') {
                None => (term.parse::<i64>().map_err(|_| bad())?, 0),
                Some(p) => {
                    let c = if p == 0 { 1 } else { term[..p].parse().map_err(|_| bad())? };
                    let d = match &term[p + 1..] {
                        "" => 1,
                        e => e.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                    };
                    (c, d)
                }
            };
            out.add_scaled_shift(&IntPolynomial::monomial(sign * coef, deg), 1, 0);
        }
        Ok(out)
    }
}

/// `sum_{u <= w} q^{l(u)}`.
pub fn poincare_interval(g: &WeylGroup, w: &WeylElement, budget: &Budget) -> Result<IntPolynomial> {
    let hist = g.for_each_interval_level(w, budget, |_| {})?;
    Ok(IntPolynomial::new(hist.into_iter().map(|c| c as i64).collect()))
}

/// The `k` lowest and `k` highest coefficients of the interval Poincare
/// polynomial, for when the whole interval is out of reach.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareEnds {
    pub length: usize,
    /// Coefficients of `q^0, q^1, ...`.
    pub low: Vec<u64>,
    /// Coefficients of `q^l, q^(l-1), ...`.
    pub high: Vec<u64>,
}

impl PoincareEnds {
    /// A palindromic polynomial has `high == low`; a mismatch in the
    /// overlap certifies non-palindromicity.
    pub fn certifies_non_palindromic(&self) -> bool {
        self.low.iter().zip(&self.high).any(|(a, b)| a != b)
    }
}

pub fn poincare_ends(g: &WeylGroup, w: &WeylElement, k: usize, budget: &Budget) -> Result<PoincareEnds> {
    let k = k.min(w.length() + 1);
    let over = |seen: u64| {
        (seen > budget.max_interval).then(|| Error::BudgetExceeded {
            what: format!("ends of the interval below element of length {}", w.length()),
            limit: budget.max_interval,
            partial: None,
        })
    };
    let chain = BruhatChain::new(g, w);
    let mut low = Vec::with_capacity(k);
    let mut level = vec![g.identity()];
    let mut seen = 0u64;
    while low.len() < k {
        seen += level.len() as u64;
        if let Some(e) = over(seen) {
            return Err(e);
        }
        low.push(level.len() as u64);
        level = level
            .iter()
            .flat_map(|u| g.canonical_children(u).map(|(_, v)| v))
            .filter(|v| chain.contains(g, v))
            .collect();
    }
    let mut high = Vec::with_capacity(k);
    let mut level = vec![*w];
    while high.len() < k {
        seen += level.len() as u64;
        if let Some(e) = over(seen) {
            return Err(e);
        }
        high.push(level.len() as u64);
        let next: HashSet<WeylElement> = level.iter().flat_map(|z| g.coatoms(z)).collect();
        level = next.into_iter().collect();
    }
    Ok(PoincareEnds { length: w.length(), low, high })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothMethod {
    Kl,
    Palindrome,
}

/// Rational smoothness of the Schubert variety of `w`, with the method used.
pub fn rationally_smooth(
    g: &WeylGroup,
    w: &WeylElement,
    method: SmoothMethod,
    budget: &Budget,
) -> Result<bool> {
    match method {
        SmoothMethod::Palindrome => Ok(poincare_interval(g, w, budget)?.is_palindromic()),
        SmoothMethod::Kl => Ok(kl(g, &g.identity(), w, budget)?.is_one()),
    }
}

/// `P_{x,w}`.
pub fn kl(g: &WeylGroup, x: &WeylElement, w: &WeylElement, budget: &Budget) -> Result<IntPolynomial> {
    if !g.bruhat_leq(x, w) {
        return Ok(IntPolynomial::zero());
    }
    let mut engine = KlEngine::new(g, w, budget)?;
    engine.p(x, w)
}

const NONE: u32 = u32::MAX;
const ZERO_ID: u32 = 0;
const ONE_ID: u32 = 1;

struct Column {
    /// `(x, poly)` for `x <= y` extremal w.r.t. both descent sets of `y` and
    /// `l(y) - l(x) > 2`, sorted by `x`.
    ext: Vec<(u32, u32)>,
    mu: Option<Vec<(u32, i64)>>,
}

/// Bounded least-recently-used store of lower-set bitsets. A missing set is
/// rebuilt from the set of `s y` as `lower(sy) | s.lower(sy)`.
struct LowerCache {
    map: HashMap<u32, (Rc<Vec<u64>>, u64)>,
    order: BTreeMap<u64, u32>,
    clock: u64,
    cap: usize,
    misses: u64,
}

impl LowerCache {
    fn get(&mut self, y: u32) -> Option<Rc<Vec<u64>>> {
        let (set, stamp) = self.map.get_mut(&y)?;
        self.order.remove(stamp);
        self.clock += 1;
        *stamp = self.clock;
        self.order.insert(self.clock, y);
        Some(set.clone())
    }

    fn insert(&mut self, y: u32, set: Rc<Vec<u64>>) {
        self.clock += 1;
        self.order.insert(self.clock, y);
        self.map.insert(y, (set, self.clock));
        while self.map.len() > self.cap {
            let (_, old) = self.order.pop_first().unwrap();
            self.map.remove(&old);
        }
    }
}

/// Memoised KL computation inside a fixed lower interval `[e, top]`.
///
/// The recursion for `y` uses its smallest left descent `s` and `v = s y`;
/// every element it touches lies in `[e, y]`, so the interval with its left
/// and right multiplication tables is closed for the whole computation.
/// Columns only store entries for `x` that are maximal in their double coset
/// under the descent sets of `y`, where `P_{x,y}` is constant on such cosets.
pub struct KlEngine<'g> {
    g: &'g WeylGroup,
    rank: usize,
    elems: Vec<WeylElement>,
    len: Vec<u16>,
    index: HashMap<WeylElement, u32>,
    right: Vec<u32>,
    left: Vec<u32>,
    words: usize,
    cols: Vec<Option<Column>>,
    lower: LowerCache,
    polys: Vec<IntPolynomial>,
    poly_ids: HashMap<IntPolynomial, u32>,
    bytes: u64,
    budget: Budget,
}

impl<'g> KlEngine<'g> {
    pub fn new(g: &'g WeylGroup, top: &WeylElement, budget: &Budget) -> Result<Self> {
        let rs = g.root_system();
        let rank = g.rank();
        let elems = g.lower_interval(top, budget)?;
        let n = elems.len();
        let index: HashMap<WeylElement, u32> =
            elems.iter().enumerate().map(|(k, e)| (*e, k as u32)).collect();
        let len: Vec<u16> = elems.iter().map(|e| e.length() as u16).collect();

        let mut right = vec![NONE; n * rank];
        let mut left = vec![NONE; n * rank];
        // linv[k*rank + s] = u_k^{-1}(alpha_s), propagated from the canonical parent
        let mut linv = vec![Root(0); n * rank];
        for (s, r) in linv.iter_mut().enumerate().take(rank) {
            *r = Root(s as u16);
        }
        for k in 0..n {
            let u = elems[k];
            for s in 0..rank {
                if let Some(&j) = index.get(&g.rmul0(&u, s)) {
                    right[k * rank + s] = j;
                }
            }
            if k > 0 {
                let t = (0..rank).find(|&i| u.coords()[i] < 0).unwrap();
                let parent = right[k * rank + t] as usize;
                for s in 0..rank {
                    linv[k * rank + s] = rs.reflect0(linv[parent * rank + s], t);
                }
            }
            for s in 0..rank {
                let beta = linv[k * rank + s];
                let wc = rs.weight_coords(beta);
                let mut x = *u.coords();
                for j in 0..rank {
                    x[j] -= wc[j] as i16;
                }
                let l = if rs.is_positive(beta) { u.length() + 1 } else { u.length() - 1 };
                if let Some(&j) = index.get(&g.element_from_parts(x, l)) {
                    left[k * rank + s] = j;
                }
            }
        }
        drop(linv);
        let words = n.div_ceil(64);
        let polys = vec![IntPolynomial::zero(), IntPolynomial::one()];
        let poly_ids = polys.iter().enumerate().map(|(k, p)| (p.clone(), k as u32)).collect();
        let bytes = (n as u64) * (std::mem::size_of::<WeylElement>() as u64 + 40 + 8 * rank as u64);
        // a third of the memory ceiling goes to cached lower sets
        let cap = ((budget.max_kl_bytes / 3) / (8 * words as u64 + 64)).clamp(64, 1 << 24) as usize;
        let mut cols = Vec::with_capacity(n);
        cols.resize_with(n, || None);
        Ok(KlEngine {
            g,
            rank,
            elems,
            len,
            index,
            right,
            left,
            words,
            cols,
            lower: LowerCache {
                map: HashMap::new(),
                order: BTreeMap::new(),
                clock: 0,
                cap,
                misses: 0,
            },
            polys,
            poly_ids,
            bytes,
            budget: *budget,
        })
    }

    pub fn interval_size(&self) -> usize {
        self.elems.len()
    }

    pub fn columns_computed(&self) -> usize {
        self.cols.iter().filter(|c| c.is_some()).count()
    }

    pub fn distinct_polynomials(&self) -> usize {
        self.polys.len()
    }

    /// Lower sets rebuilt after eviction.
    pub fn lower_set_misses(&self) -> u64 {
        self.lower.misses
    }

    /// `P_{x,y}` for `y` in the interval.
    pub fn p(&mut self, x: &WeylElement, y: &WeylElement) -> Result<IntPolynomial> {
        let yi = *self.index.get(y).ok_or_else(|| {
            Error::Unsupported(format!(
                "{} lies outside the interval of this engine",
                self.g.format(y)
            ))
        })?;
        let Some(&xi) = self.index.get(x) else {
            return Ok(IntPolynomial::zero());
        };
        self.ensure(yi)?;
        Ok(self.polys[self.lookup(xi, yi) as usize].clone())
    }

    /// `mu(x, y)`: coefficient of degree `(l(y)-l(x)-1)/2` of `P_{x,y}`.
    pub fn mu(&mut self, x: &WeylElement, y: &WeylElement) -> Result<i64> {
        let p = self.p(x, y)?;
        let d = y.length() as i64 - x.length() as i64;
        if d <= 0 || d % 2 == 0 {
            return Ok(0);
        }
        Ok(p.coeff(((d - 1) / 2) as usize))
    }

    #[inline]
    fn lmul(&self, s: usize, x: u32) -> u32 {
        self.left[x as usize * self.rank + s]
    }

    #[inline]
    fn rmul(&self, s: usize, x: u32) -> u32 {
        self.right[x as usize * self.rank + s]
    }

    #[inline]
    fn ldesc(&self, s: usize, x: u32) -> bool {
        let t = self.lmul(s, x);
        t != NONE && self.len[t as usize] < self.len[x as usize]
    }

    #[inline]
    fn rdesc(&self, s: usize, x: u32) -> bool {
        self.elems[x as usize].coords()[s] < 0
    }

    fn descent_masks(&self, y: u32) -> (u32, u32) {
        let mut l = 0;
        let mut r = 0;
        for s in 0..self.rank {
            if self.ldesc(s, y) {
                l |= 1 << s;
            }
            if self.rdesc(s, y) {
                r |= 1 << s;
            }
        }
        (l, r)
    }

    fn extremal(&self, x: u32, masks: (u32, u32)) -> bool {
        (0..self.rank).all(|s| {
            (masks.0 & (1 << s) == 0 || self.ldesc(s, x)) && (masks.1 & (1 << s) == 0 || self.rdesc(s, x))
        })
    }

    /// Bruhat comparison through the right multiplication table.
    fn leq(&self, mut x: u32, mut y: u32) -> bool {
        loop {
            let (lx, ly) = (self.len[x as usize], self.len[y as usize]);
            if lx > ly {
                return false;
            }
            if lx == ly {
                return x == y;
            }
            if lx == 0 {
                return true;
            }
            let t = (0..self.rank).find(|&t| self.rdesc(t, y)).unwrap();
            y = self.rmul(t, y);
            if self.rdesc(t, x) {
                x = self.rmul(t, x);
            }
        }
    }

    fn intern(&mut self, p: IntPolynomial) -> u32 {
        if let Some(&id) = self.poly_ids.get(&p) {
            return id;
        }
        let id = self.polys.len() as u32;
        self.bytes += 64 + 16 * p.coeffs.len() as u64;
        self.poly_ids.insert(p.clone(), id);
        self.polys.push(p);
        id
    }

    fn lower_set(&mut self, y: u32) -> Rc<Vec<u64>> {
        if let Some(set) = self.lower.get(y) {
            return set;
        }
        self.lower.misses += 1;
        let mut set = vec![0u64; self.words];
        if self.len[y as usize] == 0 {
            set[(y >> 6) as usize] |= 1u64 << (y & 63);
        } else {
            let s = (0..self.rank).find(|&s| self.ldesc(s, y)).unwrap();
            let v = self.lmul(s, y);
            let lv = self.lower_set(v);
            set.copy_from_slice(&lv);
            for_each_bit(&lv, |x| {
                let t = self.lmul(s, x);
                set[(t >> 6) as usize] |= 1u64 << (t & 63);
            });
        }
        let set = Rc::new(set);
        self.lower.insert(y, set.clone());
        set
    }

    /// Polynomial id of `P_{x,y}`; column `y` must exist.
    fn lookup(&self, x: u32, y: u32) -> u32 {
        if !self.leq(x, y) {
            return ZERO_ID;
        }
        let masks = self.descent_masks(y);
        let mut x = x;
        loop {
            let mut moved = false;
            for s in 0..self.rank {
                if masks.0 & (1 << s) != 0 && !self.ldesc(s, x) {
                    x = self.lmul(s, x);
                    moved = true;
                }
                if masks.1 & (1 << s) != 0 && !self.rdesc(s, x) {
                    x = self.rmul(s, x);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        if self.len[y as usize] - self.len[x as usize] <= 2 {
            return ONE_ID;
        }
        let col = self.cols[y as usize].as_ref().expect("column computed");
        match col.ext.binary_search_by_key(&x, |e| e.0) {
            Ok(k) => col.ext[k].1,
            Err(_) => unreachable!("extremal entry missing"),
        }
    }

    fn ensure_mu(&mut self, v: u32) {
        if self.cols[v as usize].as_ref().unwrap().mu.is_some() {
            return;
        }
        let masks = self.descent_masks(v);
        let lv = self.len[v as usize];
        let lower = self.lower_set(v);
        let col = self.cols[v as usize].as_ref().unwrap();
        let mut mu = Vec::new();
        for_each_bit(&lower, |z| {
            let d = lv - self.len[z as usize];
            if d % 2 == 0 {
                return;
            }
            if d == 1 {
                mu.push((z, 1));
            } else if self.extremal(z, masks) {
                let k = col.ext.binary_search_by_key(&z, |e| e.0).unwrap();
                let c = self.polys[col.ext[k].1 as usize].coeff(((d - 1) / 2) as usize);
                if c != 0 {
                    mu.push((z, c));
                }
            }
        });
        self.bytes += 12 * mu.len() as u64;
        self.cols[v as usize].as_mut().unwrap().mu = Some(mu);
    }

    fn ensure(&mut self, y: u32) -> Result<()> {
        if self.cols[y as usize].is_some() {
            return Ok(());
        }
        let ly = self.len[y as usize];
        if ly == 0 {
            return self.store(y, Column { ext: Vec::new(), mu: None });
        }
        let s = (0..self.rank).find(|&s| self.ldesc(s, y)).unwrap();
        let v = self.lmul(s, y);
        self.ensure(v)?;
        self.ensure_mu(v);
        let zs: Vec<(u32, i64)> = self.cols[v as usize]
            .as_ref()
            .unwrap()
            .mu
            .as_ref()
            .unwrap()
            .iter()
            .copied()
            .filter(|&(z, _)| self.ldesc(s, z))
            .collect();
        for &(z, _) in &zs {
            self.ensure(z)?;
        }

        let lower = self.lower_set(y);
        let masks = self.descent_masks(y);
        let mut pending: Vec<(u32, IntPolynomial)> = Vec::new();
        for_each_bit(&lower, |x| {
            if ly - self.len[x as usize] <= 2 || !self.extremal(x, masks) {
                return;
            }
            let sx = self.lmul(s, x);
            let mut p = self.polys[self.lookup(sx, v) as usize].clone();
            let pv = self.lookup(x, v);
            if pv != ZERO_ID {
                p.add_scaled_shift(&self.polys[pv as usize], 1, 1);
            }
            for &(z, m) in &zs {
                let pz = self.lookup(x, z);
                if pz != ZERO_ID {
                    let k = ((ly - self.len[z as usize]) / 2) as usize;
                    p.add_scaled_shift(&self.polys[pz as usize], -m, k);
                }
            }
            debug_assert!(p.has_nonnegative_coeffs(), "negative KL coefficient");
            debug_assert!(p.coeff(0) == 1);
            pending.push((x, p));
        });
        let ext: Vec<(u32, u32)> = pending.into_iter().map(|(x, p)| (x, self.intern(p))).collect();
        self.store(y, Column { ext, mu: None })
    }

    fn store(&mut self, y: u32, col: Column) -> Result<()> {
        self.bytes += 8 * col.ext.len() as u64 + 64;
        if self.bytes > self.budget.max_kl_bytes * 2 / 3 {
            return Err(Error::BudgetExceeded {
                what: format!(
                    "KL memo for an interval of {} elements ({} columns done)",
                    self.elems.len(),
                    self.columns_computed()
                ),
                limit: self.budget.max_kl_bytes,
                partial: None,
            });
        }
        self.cols[y as usize] = Some(col);
        Ok(())
    }
}

fn for_each_bit(set: &[u64], mut f: impl FnMut(u32)) {
    for (wi, &word) in set.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            f((wi as u32) * 64 + bits.trailing_zeros());
            bits &= bits - 1;
        }
    }
}
