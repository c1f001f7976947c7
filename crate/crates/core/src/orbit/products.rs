//! Symmetric elements, twisted products and `ξ^κ`-insertion.

use serde::Serialize;

use super::{OrbitContext, OrbitError, Sign, SignedIndex};
use crate::word::{free_mul, inverse, Word};

/// `α ⋆ β` together with the cells that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedProduct {
    pub word: Word,
    /// `+` when `αβ` was kept, `−` when `αβ₋` was used.
    pub choice: Sign,
    pub alpha_inverse_cell: SignedIndex,
    pub beta_cell: SignedIndex,
}

/// `ξ^κ ⋆ β` and the case of the insertion lemma it falls under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaInsertion {
    pub word: Word,
    pub kappa: i64,
    pub beta_sign: Sign,
}

/// `α ⋆ (ξ^κ ⋆ β) = α ξ^{κ*} β_ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub word: Word,
    pub kappa_star: i64,
    pub epsilon: Sign,
}

impl OrbitContext {
    /// `β₋ = ξ^{−2j−1}β` for positive `β`, `ξ^{−2j+1}β` for negative `β`,
    /// with `j = j(β)`.
    pub fn symmetric_element(&self, beta: &Word) -> Word {
        let j = self.voronoi_index(beta).get();
        let k = if j > 0 { -2 * j - 1 } else { -2 * j + 1 };
        free_mul(&self.xi_power(k), beta)
    }

    /// `β_+ = β`, `β_− = ` the symmetric element.
    pub fn signed(&self, beta: &Word, sign: Sign) -> Word {
        match sign {
            Sign::Positive => crate::word::free_reduce(beta),
            Sign::Negative => self.symmetric_element(beta),
        }
    }

    /// `α ⋆ β = αβ` if `D₁` or `D₋₁` separates `α⁻¹(O)` and `β(O)`, and
    /// `αβ₋` otherwise.
    pub fn twisted_product_detailed(&self, alpha: &Word, beta: &Word) -> TwistedProduct {
        let alpha_inverse_cell = self.voronoi_index(&inverse(alpha));
        let beta_cell = self.voronoi_index(beta);
        let separated = [1, -1]
            .iter()
            .any(|&k| SignedIndex(k).separates(alpha_inverse_cell, beta_cell));
        let choice = if separated { Sign::Positive } else { Sign::Negative };
        TwistedProduct {
            word: free_mul(alpha, &self.signed(beta, choice)),
            choice,
            alpha_inverse_cell,
            beta_cell,
        }
    }

    pub fn twisted_product(&self, alpha: &Word, beta: &Word) -> Word {
        self.twisted_product_detailed(alpha, beta).word
    }

    /// `ξ^κ ⋆ β` for `κ ≥ 4`.
    pub fn kappa_insert(&self, beta: &Word, kappa: i64) -> Result<KappaInsertion, OrbitError> {
        if kappa < 4 {
            return Err(OrbitError::KappaTooSmall { kappa });
        }
        Ok(KappaInsertion {
            word: self.twisted_product(&self.xi_power(kappa), beta),
            kappa,
            beta_sign: self.sign(beta),
        })
    }

    /// Evaluates `α ⋆ (ξ^κ ⋆ β)` and reads off `κ*` and `ε` from the sign of
    /// `β` and the choice made by the outer product.
    pub fn decompose(&self, alpha: &Word, beta: &Word, kappa: i64) -> Result<Decomposition, OrbitError> {
        let inner = self.kappa_insert(beta, kappa)?;
        let outer = self.twisted_product_detailed(alpha, &inner.word);
        let (kappa_star, epsilon) = match (outer.choice, inner.beta_sign) {
            (Sign::Positive, s) => (kappa, s),
            (Sign::Negative, Sign::Positive) => (-kappa, Sign::Negative),
            (Sign::Negative, Sign::Negative) => (-kappa - 4, Sign::Positive),
        };
        Ok(Decomposition {
            word: outer.word,
            kappa_star,
            epsilon,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{reduced_words_up_to, w};
    use std::collections::HashMap;

    fn b() -> OrbitContext {
        OrbitContext::new(2, &w("b")).unwrap()
    }

    #[test]
    fn symmetric_examples() {
        let ctx = b();
        assert_eq!(ctx.symmetric_element(&w("a")), w("BBBa"));
        assert_eq!(ctx.symmetric_element(&w("BBa")), w("bbba"));
    }

    #[test]
    fn symmetric_element_is_injective_and_flips_sign() {
        for xi in ["b", "ab"] {
            let ctx = OrbitContext::new(2, &w(xi)).unwrap();
            let mut seen: HashMap<Word, Word> = HashMap::new();
            for beta in reduced_words_up_to(2, 6) {
                let minus = ctx.symmetric_element(&beta);
                assert_eq!(ctx.sign(&minus), ctx.sign(&beta).flip(), "ξ={xi} β={beta}");
                if beta.len() <= 5 {
                    if let Some(prev) = seen.insert(minus.clone(), beta.clone()) {
                        panic!("{prev} and {beta} share {minus}");
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_examples() {
        let ctx = b();
        let t = ctx.twisted_product_detailed(&w("aBBBBB"), &w("BBBBa"));
        assert_eq!(t.alpha_inverse_cell, SignedIndex(6));
        assert_eq!(t.beta_cell, SignedIndex(-4));
        assert_eq!(t.choice, Sign::Positive);
        assert_eq!(t.word, w("aBBBBBBBBBa"));
        assert_eq!(ctx.twisted_product(&w("A"), &w("a")), w("ABBBa"));
    }

    #[test]
    fn insertion_examples() {
        let ctx = b();
        let k = ctx.kappa_insert(&w("a"), 4).unwrap();
        assert_eq!((k.word, k.beta_sign), (w("bbbba"), Sign::Positive));
        let k = ctx.kappa_insert(&w("BBa"), 4).unwrap();
        assert_eq!((k.word, k.beta_sign), (w("bbbbbbba"), Sign::Negative));
        assert_eq!(
            ctx.kappa_insert(&w("a"), 3),
            Err(OrbitError::KappaTooSmall { kappa: 3 })
        );
    }

    #[test]
    fn identity_before_insertion_flips() {
        // e ⋆ (b⁴a⁴): cells 1 and 5 are not separated by D±1.
        let ctx = b();
        let d = ctx.decompose(&w(""), &w("aaaa"), 4).unwrap();
        assert_eq!(d.word, w("BBBBBBBaaaa"));
        assert_eq!((d.kappa_star, d.epsilon), (-4, Sign::Negative));
    }
}
