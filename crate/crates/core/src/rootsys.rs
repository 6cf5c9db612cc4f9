//! Finite crystallographic root systems in the simple-root basis.
//!
//! Convention: `cartan[i][j] = <alpha_i^vee, alpha_j> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`,
//! so `s_i(beta) = beta - (sum_j c_j cartan[i][j]) alpha_i` for `beta = sum_j c_j alpha_j`.
//! Numbering is Bourbaki: B_n has alpha_n short, C_n has alpha_n long, F4 has
//! alpha_1, alpha_2 long, and G2 has alpha_1 short.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let bad = |constraint| {
            Err(Error::InvalidRank {
                family: family.letter(),
                rank,
                constraint,
            })
        };
        match family {
            Family::A if rank < 1 => bad("A_n needs n >= 1"),
            Family::B if rank < 2 => bad("B_n needs n >= 2"),
            Family::C if rank < 2 => bad("C_n needs n >= 2"),
            Family::D if rank < 3 => bad("D_n needs n >= 3"),
            Family::E if !(6..=8).contains(&rank) => bad("E_n needs n in {6, 7, 8}"),
            Family::F if rank != 4 => bad("F_n needs n = 4"),
            Family::G if rank != 2 => bad("G_n needs n = 2"),
            _ if rank > crate::MAX_RANK => bad("rank exceeds the supported maximum of 16"),
            _ => Ok(SimpleType { family, rank }),
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Type of the transposed Cartan matrix.
    pub fn dual(&self) -> SimpleType {
        let family = match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            f => f,
        };
        SimpleType { family, rank: self.rank }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::ParseType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::ParseType(s.to_string()))?;
        SimpleType::new(family, rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootLength {
    Long,
    Short,
}

/// Index into the root table of a [`RootSystem`]. Positive roots come first,
/// ordered by height; the negative of positive root `p` sits at `p + npos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub(crate) u16);

impl Root {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const NONE: u16 = u16::MAX;

#[derive(Debug)]
pub struct RootSystem {
    ty: SimpleType,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    npos: usize,
    coeffs: Vec<i32>,
    weights: Vec<i32>,
    coroots: Vec<i32>,
    sqlen: Vec<i32>,
    max_sqlen: i32,
    refl: Vec<u16>,
    sums: Vec<u16>,
    lookup: HashMap<Vec<i32>, Root>,
    highest: Root,
    highest_short: Option<Root>,
}

fn standard_cartan(ty: SimpleType) -> Vec<Vec<i32>> {
    let n = ty.rank;
    // squared lengths and diagram edges, in Bourbaki numbering (0-based here)
    let mut d = vec![2i32; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match ty.family {
        Family::A => edges.extend((1..n).map(|i| (i - 1, i))),
        Family::B => {
            edges.extend((1..n).map(|i| (i - 1, i)));
            d = vec![4; n];
            d[n - 1] = 2;
        }
        Family::C => {
            edges.extend((1..n).map(|i| (i - 1, i)));
            d[n - 1] = 4;
        }
        Family::D => {
            edges.extend((1..n - 1).map(|i| (i - 1, i)));
            edges.push((n - 3, n - 1));
        }
        Family::E => {
            edges.push((0, 2));
            edges.push((1, 3));
            edges.extend((3..n).map(|i| (i - 1, i)));
        }
        Family::F => {
            edges.extend([(0, 1), (1, 2), (2, 3)]);
            d = vec![4, 4, 2, 2];
        }
        Family::G => {
            edges.push((0, 1));
            d = vec![2, 6];
        }
    }
    let mut a = vec![vec![0i32; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in &edges {
        let b = -d[i].max(d[j]) / 2;
        a[i][j] = 2 * b / d[i];
        a[j][i] = 2 * b / d[j];
    }
    a
}

/// Squared lengths `d` with `d_i a_ij = d_j a_ji`, normalised so the shortest is 2.
fn symmetrizer(cartan: &[Vec<i32>]) -> Vec<i32> {
    let n = cartan.len();
    let mut d: Vec<Option<i64>> = vec![None; n];
    d[0] = Some(1);
    let mut stack = vec![0usize];
    // rational propagation kept integral by rescaling the whole vector
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if i == j || cartan[i][j] == 0 || d[j].is_some() {
                continue;
            }
            let di = d[i].unwrap();
            let (num, den) = (di * cartan[i][j] as i64, cartan[j][i] as i64);
            if num % den != 0 {
                for x in d.iter_mut().flatten() {
                    *x *= den.abs();
                }
            }
            let di = d[i].unwrap();
            d[j] = Some(di * cartan[i][j] as i64 / cartan[j][i] as i64);
            stack.push(j);
        }
    }
    let d: Vec<i64> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let g = d.iter().fold(0, |g, &x| gcd(g, x));
    d.iter().map(|&x| (2 * x / g) as i32).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl RootSystem {
    pub fn build(ty: SimpleType) -> Result<RootSystem> {
        let ty = SimpleType::new(ty.family, ty.rank)?;
        Ok(Self::from_cartan(ty, standard_cartan(ty)))
    }

    /// The system with transposed Cartan matrix, keeping the simple-root indices.
    pub fn dual(&self) -> RootSystem {
        let n = self.rank;
        let t = (0..n)
            .map(|i| (0..n).map(|j| self.cartan[j][i]).collect())
            .collect();
        Self::from_cartan(self.ty.dual(), t)
    }

    fn from_cartan(ty: SimpleType, cartan: Vec<Vec<i32>>) -> RootSystem {
        let n = ty.rank;
        let d = symmetrizer(&cartan);
        let pairing = |c: &[i32], i: usize| -> i32 { (0..n).map(|j| c[j] * cartan[i][j]).sum() };

        let mut pos: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut seen: HashMap<Vec<i32>, ()> = pos.iter().map(|v| (v.clone(), ())).collect();
        let mut k = 0;
        while k < pos.len() {
            let beta = pos[k].clone();
            for i in 0..n {
                let p = pairing(&beta, i);
                if p == 0 {
                    continue;
                }
                let mut g = beta.clone();
                g[i] -= p;
                if g.iter().all(|&c| c >= 0) && g.iter().any(|&c| c > 0) && !seen.contains_key(&g) {
                    seen.insert(g.clone(), ());
                    pos.push(g);
                }
            }
            k += 1;
        }
        pos.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let npos = pos.len();
        let all: Vec<Vec<i32>> = pos
            .iter()
            .cloned()
            .chain(pos.iter().map(|v| v.iter().map(|c| -c).collect()))
            .collect();
        let total = all.len();
        let lookup: HashMap<Vec<i32>, Root> = all
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), Root(k as u16)))
            .collect();

        let sq = |c: &[i32]| -> i32 {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += c[i] * c[j] * d[i] * cartan[i][j];
                }
            }
            s / 2
        };
        let sqlen: Vec<i32> = all.iter().map(|c| sq(c)).collect();
        let max_sqlen = *sqlen.iter().max().unwrap();

        let mut coeffs = Vec::with_capacity(total * n);
        let mut weights = Vec::with_capacity(total * n);
        let mut coroots = Vec::with_capacity(total * n);
        for (k, c) in all.iter().enumerate() {
            coeffs.extend_from_slice(c);
            weights.extend((0..n).map(|j| pairing(c, j)));
            coroots.extend((0..n).map(|i| c[i] * d[i] / sqlen[k]));
        }

        let mut refl = vec![NONE; n * total];
        for i in 0..n {
            for (k, c) in all.iter().enumerate() {
                let mut g = c.clone();
                g[i] -= pairing(c, i);
                refl[i * total + k] = lookup[&g].0;
            }
        }
        let mut sums = vec![NONE; total * total];
        let mut buf = vec![0; n];
        for a in 0..total {
            for b in 0..total {
                for i in 0..n {
                    buf[i] = all[a][i] + all[b][i];
                }
                if let Some(r) = lookup.get(&buf) {
                    sums[a * total + b] = r.0;
                }
            }
        }

        let highest = Root((npos - 1) as u16);
        let highest_short = if ty.is_simply_laced() || sqlen.iter().all(|&s| s == max_sqlen) {
            None
        } else {
            (0..npos).rev().find(|&k| sqlen[k] < max_sqlen).map(|k| Root(k as u16))
        };

        RootSystem {
            ty,
            rank: n,
            cartan,
            npos,
            coeffs,
            weights,
            coroots,
            sqlen,
            max_sqlen,
            refl,
            sums,
            lookup,
            highest,
            highest_short,
        }
    }

    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn num_roots(&self) -> usize {
        2 * self.npos
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = Root> + '_ {
        (0..self.npos).map(|k| Root(k as u16))
    }

    pub fn roots(&self) -> impl Iterator<Item = Root> + '_ {
        (0..2 * self.npos).map(|k| Root(k as u16))
    }

    /// Simple root `alpha_i`, with `i` counted from 1.
    pub fn simple_root(&self, i: usize) -> Result<Root> {
        self.check_index(i)?;
        Ok(Root((i - 1) as u16))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange { index: i, rank: self.rank })
        } else {
            Ok(())
        }
    }

    pub fn coeffs(&self, r: Root) -> &[i32] {
        let k = r.index();
        &self.coeffs[k * self.rank..(k + 1) * self.rank]
    }

    /// `<beta, alpha_j^vee>` for every j.
    pub fn weight_coords(&self, r: Root) -> &[i32] {
        let k = r.index();
        &self.weights[k * self.rank..(k + 1) * self.rank]
    }

    /// Coefficients of the coroot in the simple-coroot basis.
    pub fn coroot_coeffs(&self, r: Root) -> &[i32] {
        let k = r.index();
        &self.coroots[k * self.rank..(k + 1) * self.rank]
    }

    pub fn root(&self, coeffs: &[i32]) -> Option<Root> {
        self.lookup.get(coeffs).copied()
    }

    pub fn is_positive(&self, r: Root) -> bool {
        r.index() < self.npos
    }

    pub fn negate(&self, r: Root) -> Root {
        let k = r.index();
        Root(if k < self.npos { k + self.npos } else { k - self.npos } as u16)
    }

    /// Positive root of the pair `{r, -r}`.
    pub fn abs(&self, r: Root) -> Root {
        Root((r.index() % self.npos) as u16)
    }

    pub fn height(&self, r: Root) -> i32 {
        self.coeffs(r).iter().sum()
    }

    pub fn squared_length(&self, r: Root) -> i32 {
        self.sqlen[r.index()]
    }

    pub fn length(&self, r: Root) -> RootLength {
        if self.sqlen[r.index()] == self.max_sqlen {
            RootLength::Long
        } else {
            RootLength::Short
        }
    }

    pub fn highest_root(&self) -> Root {
        self.highest
    }

    pub fn highest_short_root(&self) -> Result<Root> {
        self.highest_short
            .ok_or_else(|| Error::NoShortRoots(self.ty.to_string()))
    }

    /// `s_i(r)` with `i` counted from 1.
    pub fn reflect(&self, r: Root, i: usize) -> Root {
        Root(self.refl[(i - 1) * 2 * self.npos + r.index()])
    }

    /// Reflection with a 0-based index, for inner loops.
    #[inline]
    pub(crate) fn reflect0(&self, r: Root, i: usize) -> Root {
        Root(self.refl[i * 2 * self.npos + r.index()])
    }

    pub fn root_sum(&self, a: Root, b: Root) -> Option<Root> {
        let v = self.sums[a.index() * 2 * self.npos + b.index()];
        (v != NONE).then_some(Root(v))
    }

    pub fn format_root(&self, r: Root) -> String {
        let parts: Vec<String> = self.coeffs(r).iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }
}
