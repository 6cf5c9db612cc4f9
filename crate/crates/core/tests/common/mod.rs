//! Independent models used as oracles: Cartan matrices written out from the
//! diagrams, root closure by reflection, and Weyl group elements as integer
//! matrices on the simple-root basis.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use springer_core::{Family, RootSystem, SimpleType, WeylElement, WeylGroup};

pub fn ty(s: &str) -> SimpleType {
    s.parse().unwrap()
}

pub fn group(s: &str) -> WeylGroup {
    WeylGroup::build(ty(s)).unwrap()
}

pub fn types_up_to_rank(max: usize) -> Vec<SimpleType> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push(SimpleType::new(Family::A, n).unwrap());
    }
    for n in 2..=max {
        out.push(SimpleType::new(Family::B, n).unwrap());
        out.push(SimpleType::new(Family::C, n).unwrap());
    }
    for n in 3..=max {
        out.push(SimpleType::new(Family::D, n).unwrap());
    }
    for n in 6..=max.min(8) {
        out.push(SimpleType::new(Family::E, n).unwrap());
    }
    if max >= 4 {
        out.push(ty("F4"));
    }
    if max >= 2 {
        out.push(ty("G2"));
    }
    out
}

/// `c[i][j] = <alpha_i^vee, alpha_j>`, nodes numbered as in the usual diagrams
/// (B_n, C_n: node n is the odd one; F4: 1,2 long; G2: node 1 short; E: node 2
/// hangs off node 4).
pub fn cartan(t: SimpleType) -> Vec<Vec<i32>> {
    let n = t.rank;
    let mut c = vec![vec![0; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |a: usize, b: usize| {
        c[a - 1][b - 1] = -1;
        c[b - 1][a - 1] = -1;
    };
    match t.family {
        Family::A | Family::B | Family::C => (1..n).for_each(|i| link(i, i + 1)),
        Family::D => {
            (1..n - 1).for_each(|i| link(i, i + 1));
            link(n - 2, n);
        }
        Family::E => {
            link(1, 3);
            link(3, 4);
            link(2, 4);
            (4..n).for_each(|i| link(i, i + 1));
        }
        Family::F => (1..4).for_each(|i| link(i, i + 1)),
        Family::G => link(1, 2),
    }
    match t.family {
        Family::B => c[n - 1][n - 2] = -2,
        Family::C => c[n - 2][n - 1] = -2,
        Family::F => c[2][1] = -2,
        Family::G => c[0][1] = -3,
        _ => {}
    }
    c
}

pub fn reflect(c: &[Vec<i32>], v: &[i32], i: usize) -> Vec<i32> {
    let pairing: i32 = (0..v.len()).map(|j| c[i][j] * v[j]).sum();
    let mut out = v.to_vec();
    out[i] -= pairing;
    out
}

/// Positive roots by closing the simple roots under simple reflections.
pub fn closure_positive_roots(t: SimpleType) -> BTreeSet<Vec<i32>> {
    let c = cartan(t);
    let n = t.rank;
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            let r = reflect(&c, &v, i);
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    seen.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect()
}

/// Square matrix, row-major, acting on coefficient columns.
pub type Mat = Vec<i32>;

pub fn simple_matrix(c: &[Vec<i32>], i: usize) -> Mat {
    let n = c.len();
    let mut m = vec![0; n * n];
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let col = reflect(c, &e, i);
        for (r, x) in col.into_iter().enumerate() {
            m[r * n + j] = x;
        }
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat, n: usize) -> Mat {
    let mut m = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    m[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    m
}

pub fn identity(n: usize) -> Mat {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// Matrix of `s_{i1} ... s_{ir}` for a word with 1-based letters.
pub fn word_matrix(c: &[Vec<i32>], word: &[u8]) -> Mat {
    let n = c.len();
    word.iter()
        .fold(identity(n), |m, &i| mat_mul(&m, &simple_matrix(c, i as usize - 1), n))
}

/// The same matrix read off the library's action on simple roots.
pub fn element_matrix(g: &WeylGroup, w: &WeylElement) -> Mat {
    let rs = g.root_system();
    let n = rs.rank();
    let mut m = vec![0; n * n];
    for j in 0..n {
        let img = g.act(w, rs.simple_root(j + 1).unwrap());
        for (r, &x) in rs.coeffs(img).iter().enumerate() {
            m[r * n + j] = x;
        }
    }
    m
}

/// Products of all subwords of `word`: the Bruhat lower set when the word is
/// reduced.
pub fn subword_products(c: &[Vec<i32>], word: &[u8]) -> HashSet<Mat> {
    let n = c.len();
    let mut acc: HashSet<Mat> = HashSet::from([identity(n)]);
    for &i in word {
        let s = simple_matrix(c, i as usize - 1);
        let next: Vec<Mat> = acc.iter().map(|m| mat_mul(m, &s, n)).collect();
        acc.extend(next);
    }
    acc
}

pub fn coeffs_of(rs: &RootSystem, r: springer_core::Root) -> Vec<i32> {
    rs.coeffs(r).to_vec()
}
