//! Presentation files and model selection.
//!
//! Format (UTF-8):
//!
//! ```text
//! generators: a b
//! relators: aa abAB
//! ```
//!
//! Generators must be the consecutive letters `a`, `b`, `c`, ... Blank lines
//! and lines starting with `#` are ignored.

use std::sync::Arc;

use thiserror::Error;

use crate::model::{CyclicFreeProduct, FreeAbelian, FreeGroup, RewritingModel, SharedModel};
use crate::rewriting::{complete_presentation, CompletionError};
use crate::word::{free_reduce, Generator, ParseWordError, Word};

/// Rule additions allowed when completing an unrecognised presentation.
pub const DEFAULT_COMPLETION_CAP: usize = 2000;

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("missing `{0}:` line")]
    MissingLine(&'static str),
    #[error("generators must be a, b, c, ... in order; found {0:?}")]
    BadGenerators(String),
    #[error("bad word: {0}")]
    Word(#[from] ParseWordError),
    #[error("word {word} uses a letter outside the {rank} generators")]
    OutOfRange { word: String, rank: usize },
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error("unknown builtin model {0:?}")]
    UnknownBuiltin(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub rank: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn free(rank: usize) -> Self {
        Presentation {
            rank,
            relators: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut generators = None;
        let mut relators = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("generators:") {
                generators = Some(rest.split_whitespace().map(str::to_owned).collect::<Vec<_>>());
            } else if let Some(rest) = line.strip_prefix("relators:") {
                relators = Some(
                    rest.split_whitespace()
                        .map(str::parse::<Word>)
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
        }
        let generators = generators.ok_or(PresentationError::MissingLine("generators"))?;
        for (i, name) in generators.iter().enumerate() {
            let expected = Generator::positive(i).to_char().to_string();
            if *name != expected {
                return Err(PresentationError::BadGenerators(generators.join(" ")));
            }
        }
        let rank = generators.len();
        let relators = relators.ok_or(PresentationError::MissingLine("relators"))?;
        let p = Presentation { rank, relators };
        p.check_words(&p.relators)?;
        Ok(p)
    }

    pub fn check_words(&self, words: &[Word]) -> Result<(), PresentationError> {
        for word in words {
            if word.rank_hint() > self.rank {
                return Err(PresentationError::OutOfRange {
                    word: word.to_string(),
                    rank: self.rank,
                });
            }
        }
        Ok(())
    }

    /// Adds relators, as when passing to the quotient by their normal closure.
    pub fn with_relators(&self, extra: &[Word]) -> Result<Self, PresentationError> {
        self.check_words(extra)?;
        let mut relators = self.relators.clone();
        relators.extend(extra.iter().cloned());
        Ok(Presentation {
            rank: self.rank,
            relators,
        })
    }

    pub fn is_free(&self) -> bool {
        self.relators.iter().all(|r| free_reduce(r).is_empty())
    }
}

/// Picks a built-in model when the presentation is recognisably free, free
/// abelian or a free product of cyclic groups; otherwise completes it to a
/// rewriting system.
pub fn resolve_model(p: &Presentation, cap: usize) -> Result<SharedModel, PresentationError> {
    let relators: Vec<Word> = p.relators.iter().map(free_reduce).filter(|r| !r.is_empty()).collect();
    if relators.is_empty() {
        return Ok(Arc::new(FreeGroup::new(p.rank)));
    }
    if let Some(orders) = cyclic_orders(p.rank, &relators) {
        return Ok(Arc::new(CyclicFreeProduct::new(orders)));
    }
    if is_full_commutator_set(p.rank, &relators) {
        return Ok(Arc::new(FreeAbelian::new(p.rank)));
    }
    let system = complete_presentation(p.rank, &relators, cap)?;
    Ok(Arc::new(RewritingModel::new(system)))
}

/// Orders per generator when every relator is a power of a single letter.
fn cyclic_orders(rank: usize, relators: &[Word]) -> Option<Vec<u32>> {
    let mut orders = vec![0u32; rank];
    for r in relators {
        let first = r.first()?;
        if r.letters().iter().any(|g| g.index() != first.index()) {
            return None;
        }
        let exponent = r.len() as u32;
        let slot = &mut orders[first.index()];
        *slot = if *slot == 0 {
            exponent
        } else {
            num_integer::gcd(*slot, exponent)
        };
    }
    Some(orders)
}

/// True when the relators are exactly commutators covering every pair of
/// generators (any word of the form `xyXY` with `x`, `y` signed letters of
/// distinct generators).
fn is_full_commutator_set(rank: usize, relators: &[Word]) -> bool {
    let mut covered = vec![vec![false; rank]; rank];
    for r in relators {
        match commutator_pair(r) {
            Some((i, j)) => {
                covered[i][j] = true;
                covered[j][i] = true;
            }
            None => return false,
        }
    }
    (0..rank).all(|i| (0..rank).all(|j| i == j || covered[i][j]))
}

fn commutator_pair(r: &Word) -> Option<(usize, usize)> {
    match r.letters() {
        &[x, y, x2, y2] if x.index() != y.index() && x2 == x.inverse() && y2 == y.inverse() => {
            Some((x.index(), y.index()))
        }
        _ => None,
    }
}

/// Parses `builtin:free:2`, `builtin:abelian:2` and
/// `builtin:cyclic-product:2,0`.
pub fn builtin_model(name: &str) -> Result<SharedModel, PresentationError> {
    let unknown = || PresentationError::UnknownBuiltin(name.to_owned());
    let rest = name.strip_prefix("builtin:").ok_or_else(unknown)?;
    let (kind, arg) = rest.split_once(':').ok_or_else(unknown)?;
    match kind {
        "free" => Ok(Arc::new(FreeGroup::new(parse_rank(arg).ok_or_else(unknown)?))),
        "abelian" => Ok(Arc::new(FreeAbelian::new(parse_rank(arg).ok_or_else(unknown)?))),
        "cyclic-product" => {
            let orders = arg
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| unknown())?;
            if orders.is_empty() || orders.len() > crate::word::MAX_RANK {
                return Err(unknown());
            }
            Ok(Arc::new(CyclicFreeProduct::new(orders)))
        }
        _ => Err(unknown()),
    }
}

fn parse_rank(s: &str) -> Option<usize> {
    s.parse::<usize>()
        .ok()
        .filter(|&r| (1..=crate::word::MAX_RANK).contains(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelKind;
    use crate::word::w;

    #[test]
    fn parse_and_resolve() {
        let p = Presentation::parse("generators: a b\nrelators: aa\n").unwrap();
        assert_eq!(p.rank, 2);
        let m = resolve_model(&p, 100).unwrap();
        assert_eq!(m.kind(), ModelKind::FreeProductWithTorsion);
        assert_eq!(m.normal_form(&w("AbA")), w("aba"));

        let free = Presentation::parse("generators: a b\nrelators:\n").unwrap();
        assert_eq!(resolve_model(&free, 100).unwrap().kind(), ModelKind::Free);

        let ab = Presentation::free(2).with_relators(&[w("BAba")]).unwrap();
        assert_eq!(resolve_model(&ab, 100).unwrap().kind(), ModelKind::FreeAbelian);

        let mixed = Presentation::free(2).with_relators(&[w("abAB"), w("aa")]).unwrap();
        let m = resolve_model(&mixed, 100).unwrap();
        assert_eq!(m.kind(), ModelKind::RewritingQuotient);
        assert_eq!(m.normal_form(&w("baAbab")), w("abbb"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Presentation::parse("generators: a c\nrelators:\n").is_err());
        assert!(Presentation::parse("relators: aa\n").is_err());
        assert!(Presentation::parse("generators: a\nrelators: ab\n").is_err());
        assert!(builtin_model("builtin:free:x").is_err());
        assert!(builtin_model("builtin:cyclic-product:2,0").is_ok());
    }
}
