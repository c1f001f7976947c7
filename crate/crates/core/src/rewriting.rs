//! Shortlex string rewriting and Knuth–Bendix completion.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::word::{Generator, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("completion exceeded the cap of {cap} rule additions")]
    CompletionExceededCap { cap: usize },
    #[error("relator {relator} uses a generator outside rank {rank}")]
    GeneratorOutOfRange { relator: String, rank: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→{:?}", self.lhs, self.rhs)
    }
}

/// A rewriting system oriented by shortlex order over `a < A < b < B < ...`.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    rank: usize,
    rules: Vec<Rule>,
    /// Rule indices keyed by the last letter of their left side.
    by_last: Vec<Vec<usize>>,
    confluent: bool,
}

impl RewritingSystem {
    /// Builds a system from oriented rules. Every rule must decrease in
    /// shortlex order.
    pub fn from_rules(rank: usize, mut rules: Vec<Rule>) -> Self {
        for r in &rules {
            assert_eq!(
                r.lhs.shortlex_cmp(&r.rhs),
                Ordering::Greater,
                "rule {r:?} is not shortlex decreasing"
            );
        }
        rules.sort_by(|x, y| x.lhs.shortlex_cmp(&y.lhs).then_with(|| x.rhs.shortlex_cmp(&y.rhs)));
        rules.dedup();
        let mut system = RewritingSystem {
            rank,
            by_last: Vec::new(),
            rules,
            confluent: false,
        };
        system.reindex();
        system.confluent = system.critical_pairs_resolve();
        system
    }

    fn reindex(&mut self) {
        self.by_last = vec![Vec::new(); 2 * self.rank];
        for (i, r) in self.rules.iter().enumerate() {
            if let Some(g) = r.lhs.last() {
                self.by_last[g.code()].push(i);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn contains_rule(&self, lhs: &Word, rhs: &Word) -> bool {
        self.rules.iter().any(|r| &r.lhs == lhs && &r.rhs == rhs)
    }

    /// Rewrites to an irreducible word. Matches are found as suffixes of the
    /// already-processed prefix, so the prefix stays irreducible throughout.
    pub fn reduce(&self, word: &Word) -> Word {
        let mut input: Vec<Generator> = word.letters().iter().rev().copied().collect();
        let mut out: Vec<Generator> = Vec::with_capacity(word.len());
        while let Some(g) = input.pop() {
            out.push(g);
            if let Some(rule) = self.suffix_match(&out) {
                let rule = &self.rules[rule];
                out.truncate(out.len() - rule.lhs.len());
                input.extend(rule.rhs.letters().iter().rev());
            }
        }
        Word::from_letters(out)
    }

    fn suffix_match(&self, out: &[Generator]) -> Option<usize> {
        let last = out.last()?;
        self.by_last
            .get(last.code())?
            .iter()
            .copied()
            .find(|&i| out.ends_with(self.rules[i].lhs.letters()))
    }

    fn critical_pairs_resolve(&self) -> bool {
        for r1 in &self.rules {
            for r2 in &self.rules {
                for (u, v) in overlaps(r1, r2) {
                    if self.reduce(&u) != self.reduce(&v) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Critical pairs from proper overlaps of a suffix of `r1.lhs` with a prefix
/// of `r2.lhs`.
fn overlaps(r1: &Rule, r2: &Rule) -> Vec<(Word, Word)> {
    let (l1, l2) = (r1.lhs.letters(), r2.lhs.letters());
    let mut pairs = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut left = r1.rhs.letters().to_vec();
            left.extend_from_slice(&l2[k..]);
            let mut right = l1[..l1.len() - k].to_vec();
            right.extend_from_slice(r2.rhs.letters());
            pairs.push((Word::from_letters(left), Word::from_letters(right)));
        }
    }
    pairs
}

fn contains(hay: &[Generator], needle: &[Generator]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Knuth–Bendix completion of `⟨generators | relators⟩` under shortlex order.
///
/// The free cancellation rules `xX → ε` and `Xx → ε` are included, so the
/// empty relator list yields exactly those. `cap` bounds the number of rule
/// additions.
pub fn complete_presentation(rank: usize, relators: &[Word], cap: usize) -> Result<RewritingSystem, CompletionError> {
    for r in relators {
        if r.rank_hint() > rank {
            return Err(CompletionError::GeneratorOutOfRange {
                relator: r.to_string(),
                rank,
            });
        }
    }
    let mut pending: VecDeque<(Word, Word)> = VecDeque::new();
    for g in Generator::alphabet(rank) {
        pending.push_back((Word::from_letters(vec![g, g.inverse()]), Word::empty()));
    }
    for r in relators {
        pending.push_back((r.clone(), Word::empty()));
    }

    let mut system = RewritingSystem {
        rank,
        rules: Vec::new(),
        by_last: vec![Vec::new(); 2 * rank],
        confluent: false,
    };
    let mut additions = 0usize;
    while let Some((u, v)) = pending.pop_front() {
        let (u, v) = (system.reduce(&u), system.reduce(&v));
        let (lhs, rhs) = match u.shortlex_cmp(&v) {
            Ordering::Equal => continue,
            Ordering::Greater => (u, v),
            Ordering::Less => (v, u),
        };
        additions += 1;
        if additions > cap {
            return Err(CompletionError::CompletionExceededCap { cap });
        }
        let new_rule = Rule { lhs, rhs };

        // Interreduce: rules whose left side now reduces go back to the queue.
        let mut kept = Vec::with_capacity(system.rules.len() + 1);
        for rule in system.rules.drain(..) {
            if contains(rule.lhs.letters(), new_rule.lhs.letters()) {
                pending.push_back((rule.lhs, rule.rhs));
            } else {
                kept.push(rule);
            }
        }
        kept.push(new_rule.clone());
        system.rules = kept;
        system.reindex();
        for i in 0..system.rules.len() {
            let reduced = system.reduce(&system.rules[i].rhs);
            system.rules[i].rhs = reduced;
        }

        for rule in &system.rules {
            pending.extend(overlaps(&new_rule, rule));
            if rule != &new_rule {
                pending.extend(overlaps(rule, &new_rule));
            }
        }
    }
    Ok(RewritingSystem::from_rules(rank, system.rules))
}
