//! Group models: exact normal forms and word lengths for concrete groups.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rewriting::RewritingSystem;
use crate::word::{free_mul, free_reduce, inverse, Generator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Free,
    FreeAbelian,
    FreeProductWithTorsion,
    RewritingQuotient,
}

/// A finitely generated group with decidable word problem.
///
/// Contract: `normal_form` returns the shortlex-least geodesic word for the
/// element (order `a < A < b < B < ...`). Consequently the norm is the length
/// of the normal form, and normal forms of distinct elements differ.
pub trait GroupModel: Send + Sync + fmt::Debug {
    fn rank(&self) -> usize;

    fn kind(&self) -> ModelKind;

    /// Short identifier used in reports.
    fn name(&self) -> String;

    fn normal_form(&self, word: &Word) -> Word;

    fn geodesic_length(&self, word: &Word) -> usize {
        self.normal_form(word).len()
    }

    fn equal(&self, a: &Word, b: &Word) -> bool {
        self.normal_form(a) == self.normal_form(b)
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        self.normal_form(&a.concat(b))
    }

    fn is_identity(&self, word: &Word) -> bool {
        self.geodesic_length(word) == 0
    }

    /// Word-metric distance `‖a⁻¹b‖`.
    fn distance(&self, a: &Word, b: &Word) -> usize {
        self.geodesic_length(&inverse(a).concat(b))
    }

    /// Sphere cardinalities for radii `0..=radius` from a closed form or a
    /// transfer recursion, when the model has one.
    fn sphere_counts(&self, _radius: usize) -> Option<Vec<BigUint>> {
        None
    }
}

pub type SharedModel = Arc<dyn GroupModel>;

/// Free group on `rank` generators.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }
}

impl GroupModel for FreeGroup {
    fn rank(&self) -> usize {
        self.rank
    }

    fn kind(&self) -> ModelKind {
        ModelKind::Free
    }

    fn name(&self) -> String {
        format!("free:{}", self.rank)
    }

    fn normal_form(&self, word: &Word) -> Word {
        free_reduce(word)
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        free_mul(a, b)
    }

    fn sphere_counts(&self, radius: usize) -> Option<Vec<BigUint>> {
        let mut out = vec![BigUint::one()];
        if self.rank == 0 {
            out.resize(radius + 1, BigUint::zero());
            return Some(out);
        }
        let mut s = BigUint::from(2 * self.rank);
        for _ in 1..=radius {
            out.push(s.clone());
            s *= 2 * self.rank - 1;
        }
        Some(out)
    }
}

/// Free abelian group ℤ^rank with the ℓ¹ word metric.
#[derive(Clone, Debug)]
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Self {
        FreeAbelian { rank }
    }

    pub fn exponents(&self, word: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.rank.max(word.rank_hint())];
        for g in word.letters() {
            v[g.index()] += if g.is_inverse() { -1 } else { 1 };
        }
        v
    }

    pub fn from_exponents(exponents: &[i64]) -> Word {
        let mut letters = Vec::new();
        for (i, &e) in exponents.iter().enumerate() {
            let g = Generator::new(i, e < 0);
            letters.extend(std::iter::repeat_n(g, e.unsigned_abs() as usize));
        }
        Word::from_letters(letters)
    }
}

impl GroupModel for FreeAbelian {
    fn rank(&self) -> usize {
        self.rank
    }

    fn kind(&self) -> ModelKind {
        ModelKind::FreeAbelian
    }

    fn name(&self) -> String {
        format!("abelian:{}", self.rank)
    }

    /// Letters sorted by generator: the shortlex-least arrangement of the
    /// exponent vector.
    fn normal_form(&self, word: &Word) -> Word {
        Self::from_exponents(&self.exponents(word))
    }

    fn geodesic_length(&self, word: &Word) -> usize {
        self.exponents(word).iter().map(|e| e.unsigned_abs() as usize).sum()
    }

    fn sphere_counts(&self, radius: usize) -> Option<Vec<BigUint>> {
        let mut acc = vec![BigUint::zero(); radius + 1];
        acc[0] = BigUint::one();
        for _ in 0..self.rank {
            let mut next = vec![BigUint::zero(); radius + 1];
            // next[m] = acc[m] + 2·Σ_{k<m} acc[k].
            let mut below = BigUint::zero();
            for (m, c) in acc.iter().enumerate() {
                next[m] = c + &below * 2u32;
                below += c;
            }
            acc = next;
        }
        Some(acc)
    }
}

/// Free product of cyclic groups, one per generator. Order `0` means infinite
/// cyclic and order `1` makes the generator trivial, so `[2, 0]` is ℤ₂∗ℤ and
/// `[0, 1]` is ℤ presented on two generators with the second one killed.
#[derive(Clone, Debug)]
pub struct CyclicFreeProduct {
    orders: Vec<u32>,
}

impl CyclicFreeProduct {
    pub fn new(orders: Vec<u32>) -> Self {
        CyclicFreeProduct { orders }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    fn order(&self, index: usize) -> u32 {
        self.orders.get(index).copied().unwrap_or(0)
    }

    /// Representative of `e` modulo `n` in `(-n/2, n/2]`.
    fn canonical_exponent(&self, index: usize, e: i64) -> i64 {
        let n = self.order(index) as i64;
        if n == 0 {
            return e;
        }
        let r = e.rem_euclid(n);
        if 2 * r > n {
            r - n
        } else {
            r
        }
    }

    /// Number of non-identity elements of norm `l` in factor `index`.
    fn factor_sphere(&self, index: usize, l: usize) -> u32 {
        let n = self.order(index) as usize;
        match n {
            0 => 2,
            1 => 0,
            _ if 2 * l < n => 2,
            _ if 2 * l == n => 1,
            _ => 0,
        }
    }
}

impl GroupModel for CyclicFreeProduct {
    fn rank(&self) -> usize {
        self.orders.len()
    }

    fn kind(&self) -> ModelKind {
        ModelKind::FreeProductWithTorsion
    }

    fn name(&self) -> String {
        let parts: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        format!("cyclic-product:{}", parts.join(","))
    }

    fn normal_form(&self, word: &Word) -> Word {
        let mut syllables: Vec<(usize, i64)> = Vec::new();
        for g in word.letters() {
            let step = if g.is_inverse() { -1 } else { 1 };
            match syllables.last_mut() {
                Some((i, e)) if *i == g.index() => {
                    *e = self.canonical_exponent(*i, *e + step);
                    if *e == 0 {
                        syllables.pop();
                    }
                }
                _ => {
                    let e = self.canonical_exponent(g.index(), step);
                    if e != 0 {
                        syllables.push((g.index(), e));
                    }
                }
            }
        }
        let mut letters = Vec::new();
        for (i, e) in syllables {
            letters.extend(std::iter::repeat_n(Generator::new(i, e < 0), e.unsigned_abs() as usize));
        }
        Word::from_letters(letters)
    }

    /// Counts alternating syllable sequences: `ends[i][k]` is the number of
    /// normal forms of norm `k` whose last syllable lies in factor `i`.
    /// An infinite factor has two syllables of every length, so its sum
    /// over lengths is kept as a running prefix.
    fn sphere_counts(&self, radius: usize) -> Option<Vec<BigUint>> {
        let factors = self.rank();
        let mut spheres = vec![BigUint::zero(); radius + 1];
        spheres[0] = BigUint::one();
        let mut ends = vec![vec![BigUint::zero(); radius + 1]; factors];
        // prefix[i] = Σ_{j<k} (spheres[j] − ends[i][j]).
        let mut prefix = vec![BigUint::zero(); factors];
        for k in 1..=radius {
            for (i, p) in prefix.iter_mut().enumerate() {
                *p += &spheres[k - 1] - &ends[i][k - 1];
            }
            let mut total = BigUint::zero();
            for i in 0..factors {
                let acc = if self.order(i) == 0 {
                    &prefix[i] * 2u32
                } else {
                    let mut acc = BigUint::zero();
                    for l in 1..=k.min(self.order(i) as usize / 2) {
                        let a = self.factor_sphere(i, l);
                        if a != 0 {
                            acc += (&spheres[k - l] - &ends[i][k - l]) * a;
                        }
                    }
                    acc
                };
                total += &acc;
                ends[i][k] = acc;
            }
            spheres[k] = total;
        }
        Some(spheres)
    }
}

/// Quotient given by a confluent shortlex rewriting system.
#[derive(Clone, Debug)]
pub struct RewritingModel {
    system: RewritingSystem,
}

impl RewritingModel {
    pub fn new(system: RewritingSystem) -> Self {
        assert!(system.is_confluent(), "rewriting model needs a confluent system");
        RewritingModel { system }
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.system
    }
}

impl GroupModel for RewritingModel {
    fn rank(&self) -> usize {
        self.system.rank()
    }

    fn kind(&self) -> ModelKind {
        ModelKind::RewritingQuotient
    }

    fn name(&self) -> String {
        format!("rewriting:{}-rules", self.system.rules().len())
    }

    fn normal_form(&self, word: &Word) -> Word {
        self.system.reduce(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::complete_presentation;
    use crate::word::{all_words_up_to, reduced_words_up_to, w};

    fn builtins() -> Vec<Box<dyn GroupModel>> {
        vec![
            Box::new(FreeGroup::new(2)),
            Box::new(FreeAbelian::new(2)),
            Box::new(CyclicFreeProduct::new(vec![2, 0])),
            Box::new(CyclicFreeProduct::new(vec![0, 1])),
            Box::new(CyclicFreeProduct::new(vec![3, 4])),
        ]
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(FreeGroup::new(2).mul(&w("a"), &w("A")), w(""));
        assert_eq!(FreeAbelian::new(2).mul(&w("ab"), &w("a")), w("aab"));
        assert_eq!(CyclicFreeProduct::new(vec![2, 0]).mul(&w("a"), &w("a")), w(""));
    }

    #[test]
    fn length_examples() {
        assert_eq!(FreeGroup::new(2).geodesic_length(&w("aBa")), 3);
        assert_eq!(FreeAbelian::new(2).geodesic_length(&w("abA")), 1);
        assert_eq!(CyclicFreeProduct::new(vec![2, 0]).geodesic_length(&w("aab")), 1);
        assert_eq!(CyclicFreeProduct::new(vec![2, 0]).normal_form(&w("AbA")), w("aba"));
        assert_eq!(CyclicFreeProduct::new(vec![4, 0]).normal_form(&w("AA")), w("aa"));
        assert_eq!(CyclicFreeProduct::new(vec![5, 0]).normal_form(&w("aaa")), w("AA"));
        assert_eq!(CyclicFreeProduct::new(vec![0, 1]).normal_form(&w("abAbba")), w("a"));
    }

    /// Brute force: shortest words by breadth-first search over all words.
    fn brute_geodesic(model: &dyn GroupModel, target: &Word, max: usize) -> Option<Word> {
        let nf = model.normal_form(target);
        all_words_up_to(model.rank(), max)
            .into_iter()
            .find(|u| model.normal_form(u) == nf)
    }

    #[test]
    fn normal_forms_are_shortlex_least_geodesics() {
        for model in builtins() {
            for word in reduced_words_up_to(2, 4) {
                let nf = model.normal_form(&word);
                let best = brute_geodesic(model.as_ref(), &word, 4).unwrap();
                assert_eq!(nf, best, "{} on {word:?}", model.name());
            }
        }
    }

    #[test]
    fn seminorm_laws_exhaustive() {
        let words = all_words_up_to(2, 4);
        for model in builtins() {
            for u in &words {
                let lu = model.geodesic_length(u);
                assert_eq!(lu, model.geodesic_length(&inverse(u)));
                assert_eq!(model.geodesic_length(&model.normal_form(u)), lu);
                assert_eq!(model.normal_form(&model.normal_form(u)), model.normal_form(u));
                for v in words.iter().step_by(7) {
                    let uv = model.mul(u, v);
                    assert!(model.geodesic_length(&uv) <= lu + model.geodesic_length(v));
                    let via_nf = model.mul(&model.normal_form(u), &model.normal_form(v));
                    assert_eq!(uv, via_nf);
                }
            }
        }
    }

    #[test]
    fn free_length_is_reduced_length() {
        let model = FreeGroup::new(2);
        for u in all_words_up_to(2, 6) {
            assert_eq!(model.geodesic_length(&u), free_reduce(&u).len());
        }
    }

    #[test]
    fn rewriting_agrees_with_builtins_up_to_length_6() {
        let cases: Vec<(Word, Box<dyn GroupModel>)> = vec![
            (w("aa"), Box::new(CyclicFreeProduct::new(vec![2, 0]))),
            (w("abAB"), Box::new(FreeAbelian::new(2))),
            (w("b"), Box::new(CyclicFreeProduct::new(vec![0, 1]))),
        ];
        for (relator, builtin) in cases {
            let sys = complete_presentation(2, &[relator], 200).unwrap();
            let rw = RewritingModel::new(sys);
            for u in all_words_up_to(2, 6) {
                assert_eq!(rw.normal_form(&u), builtin.normal_form(&u), "{u:?}");
            }
        }
    }

    #[test]
    fn sphere_counts_match_enumeration() {
        for model in builtins() {
            let counts = model.sphere_counts(5).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut by_len = vec![0u32; 6];
            for u in reduced_words_up_to(2, 5) {
                let nf = model.normal_form(&u);
                if seen.insert(nf.clone()) {
                    by_len[nf.len()] += 1;
                }
            }
            let expected: Vec<BigUint> = by_len.into_iter().map(BigUint::from).collect();
            assert_eq!(counts, expected, "{}", model.name());
        }
    }
}
