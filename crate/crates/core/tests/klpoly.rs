mod common;

use std::collections::HashMap;

use common::{cartan, element_matrix, group, mat_mul, simple_matrix, subword_products, ty, Mat};
use springer_core::klpoly::{kl, poincare_ends, poincare_interval, rationally_smooth, KlEngine, SmoothMethod};
use springer_core::{Budget, Error, IntPolynomial, WeylElement, WeylGroup};

/// Small Weyl group held as matrices, with Bruhat order from subwords and
/// KL polynomials from the textbook recursion.
struct Model {
    mats: Vec<Mat>,
    len: Vec<usize>,
    leq: Vec<Vec<bool>>,
    /// `lmul[i][x]` = index of `s_i x`.
    lmul: Vec<Vec<usize>>,
    memo: HashMap<(usize, usize), Vec<i64>>,
}

impl Model {
    fn new(name: &str) -> Self {
        let c = cartan(ty(name));
        let n = c.len();
        let gens: Vec<Mat> = (0..n).map(|i| simple_matrix(&c, i)).collect();
        let mut mats = vec![common::identity(n)];
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut index: HashMap<Mat, usize> = HashMap::from([(mats[0].clone(), 0)]);
        let mut k = 0;
        while k < mats.len() {
            for (i, s) in gens.iter().enumerate() {
                let m = mat_mul(&mats[k], s, n);
                if !index.contains_key(&m) {
                    index.insert(m.clone(), mats.len());
                    let mut w = words[k].clone();
                    w.push(i as u8 + 1);
                    words.push(w);
                    mats.push(m);
                }
            }
            k += 1;
        }
        let len: Vec<usize> = words.iter().map(Vec::len).collect();
        let leq = vec![vec![false; mats.len()]; mats.len()];
        let mut model = Model {
            lmul: gens.iter().map(|s| mats.iter().map(|m| index[&mat_mul(s, m, n)]).collect()).collect(),
            mats,
            len,
            leq,
            memo: HashMap::new(),
        };
        for w in 0..model.mats.len() {
            let below = subword_products(&c, &words[w]);
            for u in 0..model.mats.len() {
                model.leq[u][w] = below.contains(&model.mats[u]);
            }
        }
        model
    }

    fn mu(&mut self, z: usize, v: usize) -> i64 {
        let d = self.len[v] - self.len[z];
        if !self.leq[z][v] || d % 2 == 0 {
            return 0;
        }
        self.p(z, v).get((d - 1) / 2).copied().unwrap_or(0)
    }

    fn p(&mut self, x: usize, w: usize) -> Vec<i64> {
        if !self.leq[x][w] {
            return vec![];
        }
        if x == w {
            return vec![1];
        }
        if let Some(p) = self.memo.get(&(x, w)) {
            return p.clone();
        }
        let s = (0..self.lmul.len()).find(|&i| self.len[self.lmul[i][w]] < self.len[w]).unwrap();
        let v = self.lmul[s][w];
        let sx = self.lmul[s][x];
        let c = usize::from(self.len[sx] < self.len[x]);
        let mut out = vec![0i64; self.len[w] + 1];
        add(&mut out, &self.p(sx, v), 1 - c, 1);
        add(&mut out, &self.p(x, v), c, 1);
        for z in 0..self.mats.len() {
            if z != v && self.leq[z][v] && self.len[self.lmul[s][z]] < self.len[z] {
                let m = self.mu(z, v);
                if m != 0 {
                    let shift = (self.len[w] - self.len[z]) / 2;
                    add(&mut out, &self.p(x, z), shift, -m);
                }
            }
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        self.memo.insert((x, w), out.clone());
        out
    }
}

fn add(acc: &mut [i64], p: &[i64], shift: usize, scale: i64) {
    for (k, &c) in p.iter().enumerate() {
        acc[k + shift] += scale * c;
    }
}

fn model_index(model: &Model, g: &WeylGroup) -> HashMap<WeylElement, usize> {
    let by_mat: HashMap<&Mat, usize> = model.mats.iter().enumerate().map(|(k, m)| (m, k)).collect();
    g.elements(&Budget::laptop())
        .unwrap()
        .into_iter()
        .map(|w| {
            let k = by_mat[&element_matrix(g, &w)];
            (w, k)
        })
        .collect()
}

fn poly(s: &str) -> IntPolynomial {
    s.parse().unwrap()
}

fn kl_id(t: &str, w: &str) -> String {
    let g = group(t);
    let w = g.parse_word(w).unwrap();
    kl(&g, &g.identity(), &w, &Budget::laptop()).unwrap().to_string()
}

#[test]
fn kl_matches_textbook_recursion() {
    let b = Budget::laptop();
    for s in ["A3", "B3", "G2", "C3"] {
        let g = group(s);
        let mut model = Model::new(s);
        let idx = model_index(&model, &g);
        assert_eq!(idx.len(), model.mats.len());
        let mut engine = KlEngine::new(&g, &g.longest_element(), &b).unwrap();
        for (x, &i) in &idx {
            for (w, &j) in &idx {
                assert_eq!(g.bruhat_leq(x, w), model.leq[i][j], "{s}");
                let want = IntPolynomial::new(model.p(i, j));
                assert_eq!(kl(&g, x, w, &b).unwrap(), want, "{s} {} {}", g.format(x), g.format(w));
                if model.leq[i][j] {
                    assert_eq!(engine.p(x, w).unwrap(), want);
                    assert_eq!(engine.mu(x, w).unwrap(), model.mu(i, j));
                }
            }
        }
    }
}

#[test]
fn known_polynomials() {
    assert_eq!(kl_id("A3", "2132"), "q+1");
    assert_eq!(kl_id("B3", "31231"), "q+1");
    assert_eq!(kl_id("D4", "3124231"), "2q+1");
    assert_eq!(kl_id("F4", "3234323123431232"), "q^3+1");
    assert_eq!(kl_id("F4", "3234323123431231"), "q^2+q+1");
    assert_eq!(kl_id("G2", "121"), "1");
    assert_eq!(kl_id("E6", "5645341324565413245341321"), "q^3+2q^2+2q+1");
}

#[test]
fn diagonal_is_one() {
    let g = group("F4");
    let b = Budget::laptop();
    for w in g.elements(&b).unwrap().iter().step_by(97) {
        assert!(kl(&g, w, w, &b).unwrap().is_one());
    }
}

#[test]
fn kl_shape_invariants() {
    let b = Budget::laptop();
    for s in ["B3", "A4", "D4"] {
        let g = group(s);
        let els = g.elements(&b).unwrap();
        let top = els.last().unwrap();
        let mut engine = KlEngine::new(&g, top, &b).unwrap();
        for x in els.iter().step_by(3) {
            for w in els.iter().step_by(2) {
                let p = if g.bruhat_leq(x, w) { engine.p(x, w).unwrap() } else { kl(&g, x, w, &b).unwrap() };
                assert_eq!(p.is_zero(), !g.bruhat_leq(x, w));
                if p.is_zero() {
                    continue;
                }
                assert_eq!(p.coeff(0), 1);
                assert!(p.has_nonnegative_coeffs());
                assert_ne!(p.coeffs().last(), Some(&0));
                if x != w {
                    let bound = (w.length() - x.length() - 1) / 2;
                    assert!(p.degree().unwrap() <= bound, "{s}: {p} above degree {bound}");
                }
            }
        }
    }
}

#[test]
fn polynomial_text_round_trips() {
    for s in ["0", "1", "q", "q+1", "2q+1", "q^3+2q^2+2q+1", "q^91+8q^90+1", "3q^2-q"] {
        assert_eq!(poly(s).to_string(), s);
    }
    assert_eq!(IntPolynomial::new(vec![1, 0, 0]).coeffs(), &[1]);
    assert!(IntPolynomial::new(vec![0, 0]).is_zero());
    assert!(poly("q^2+q+1").is_palindromic());
    assert!(!poly("q^3+q+1").is_palindromic());
    assert!("q^".parse::<IntPolynomial>().is_err());
}

#[test]
fn interval_polynomials() {
    let b = Budget::laptop();
    let a2 = group("A2");
    assert!(poincare_interval(&a2, &a2.identity(), &b).unwrap().is_one());
    assert_eq!(poincare_interval(&a2, &a2.longest_element(), &b).unwrap(), poly("q^3+2q^2+2q+1"));
    for s in ["A3", "B3", "G2"] {
        let g = group(s);
        let c = cartan(ty(s));
        for w in g.elements(&b).unwrap() {
            let p = poincare_interval(&g, &w, &b).unwrap();
            assert_eq!(p.eval(1) as usize, subword_products(&c, g.reduced_word(&w).letters()).len());
            assert_eq!(p.degree(), Some(w.length()));
            assert_eq!(p.coeff(w.length()), 1);
            assert_eq!(p.coeff(0), 1);
        }
    }
}

/// Carrell-Peterson: `P_{e,w} = 1` exactly when the interval polynomial is
/// palindromic.
#[test]
fn smoothness_methods_agree() {
    let b = Budget::laptop();
    for s in ["A3", "B3", "G2", "C3"] {
        let g = group(s);
        for w in g.elements(&b).unwrap() {
            let by_kl = rationally_smooth(&g, &w, SmoothMethod::Kl, &b).unwrap();
            let by_p = rationally_smooth(&g, &w, SmoothMethod::Palindrome, &b).unwrap();
            assert_eq!(by_kl, by_p, "{s} {}", g.format(&w));
        }
    }
    let g2 = group("G2");
    assert!(rationally_smooth(&g2, &g2.identity(), SmoothMethod::Kl, &b).unwrap());
    assert!(rationally_smooth(&g2, &g2.parse_word("121").unwrap(), SmoothMethod::Palindrome, &b).unwrap());
}

#[test]
fn interval_ends_agree_with_full_polynomial() {
    let b = Budget::laptop();
    let g = group("E6");
    for word in ["5645341324565413245432432", "5645341324565413245341321", "1345624534132453413241321"] {
        let w = g.parse_word(word).unwrap();
        let p = poincare_interval(&g, &w, &b).unwrap();
        let ends = poincare_ends(&g, &w, 5, &b).unwrap();
        let l = w.length();
        for k in 0..5 {
            assert_eq!(ends.low[k] as i64, p.coeff(k));
            assert_eq!(ends.high[k] as i64, p.coeff(l - k));
        }
        assert_eq!(ends.certifies_non_palindromic(), !p.is_palindromic());
    }
}

#[test]
fn e8_components_are_not_smooth() {
    let g = group("E8");
    let b = Budget::laptop();
    let comps = springer_core::springer::minimal_components(&g, &b).unwrap();
    let w = &comps[0];
    let ends = poincare_ends(&g, w, 6, &b).unwrap();
    assert_eq!(ends.length, 91);
    assert_eq!(ends.low, vec![1, 8, 35, 112, 294, 672]);
    assert!(ends.certifies_non_palindromic());
    match poincare_interval(&g, w, &b) {
        Err(Error::BudgetExceeded { partial: Some(h), .. }) => assert_eq!(&h[..4], &[1, 8, 35, 112]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn kl_respects_memory_budget() {
    let g = group("E7");
    let w = g.longest_element();
    let tight = Budget::laptop().with_elements(1000);
    assert!(matches!(kl(&g, &g.identity(), &w, &tight), Err(Error::BudgetExceeded { .. })));
}
