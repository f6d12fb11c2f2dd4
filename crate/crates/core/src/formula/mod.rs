//! First-order formulas over a relational signature, restricted to finitely
//! many variables and finite connectives, plus a bounded counting quantifier
//! "at most n witness tuples".
//!
//! Sub-modules: `parse` (concrete grammar), `eval` (Tarskian truth on finite
//! structures), `classes` (syntactic class flags and the two dual
//! transforms), `gen` (seeded random formulas for property tests).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::Structure;

pub mod classes;
pub mod eval;
pub mod gen;
pub mod parse;

pub use classes::{classify, normalize_neg, transform_c, transform_neg, SyntacticClass};
pub use eval::{evaluate, Valuation};
pub use gen::rng_from_seed;
pub use parse::parse;

/// Patterns larger than this produce unwieldy sentences; callers can raise
/// the cap via the `_capped` constructors.
pub const DEFAULT_PATTERN_CAP: usize = 6;

/// Formula AST. Variables are indices: variable `i` prints as `v{i}`.
///
/// Invariants kept by the constructors and the parser: `And`/`Or` lists have
/// at least two members, `Rel` argument lists are non-empty, and an
/// `ExistsAtMost` block is a non-empty list of distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(usize, usize),
    Rel(usize, Vec<usize>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    ForAll(usize, Box<Formula>),
    Exists(usize, Box<Formula>),
    /// At most `n` assignments to the variable block satisfy the body.
    ExistsAtMost(usize, Vec<usize>, Box<Formula>),
}

impl Formula {
    pub fn eq(a: usize, b: usize) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn rel(rel: usize, args: Vec<usize>) -> Formula {
        assert!(!args.is_empty(), "relation atoms take at least one argument");
        Formula::Rel(rel, args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Formula {
        Formula::Not(Box::new(inner))
    }

    /// Conjunction; a single part collapses to itself.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "empty conjunction has no syntax");
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::And(parts)
        }
    }

    /// Disjunction; a single part collapses to itself.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "empty disjunction has no syntax");
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::Or(parts)
        }
    }

    pub fn forall(var: usize, body: Formula) -> Formula {
        Formula::ForAll(var, Box::new(body))
    }

    pub fn exists(var: usize, body: Formula) -> Formula {
        Formula::Exists(var, Box::new(body))
    }

    pub fn forall_many(vars: impl IntoIterator<Item = usize>, body: Formula) -> Formula {
        let vars: Vec<usize> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn exists_many(vars: impl IntoIterator<Item = usize>, body: Formula) -> Formula {
        let vars: Vec<usize> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v, acc))
    }

    pub fn exists_at_most(bound: usize, block: Vec<usize>, body: Formula) -> Formula {
        assert!(!block.is_empty(), "counting quantifier needs a variable block");
        let distinct: BTreeSet<usize> = block.iter().copied().collect();
        assert!(distinct.len() == block.len(), "counting block variables must be distinct");
        Formula::ExistsAtMost(bound, block, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        match self {
            Formula::Eq(a, b) => [*a, *b].into_iter().collect(),
            Formula::Rel(_, args) => args.iter().copied().collect(),
            Formula::Not(inner) => inner.free_vars(),
            Formula::And(parts) | Formula::Or(parts) => {
                parts.iter().flat_map(Formula::free_vars).collect()
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let mut vars = body.free_vars();
                vars.remove(v);
                vars
            }
            Formula::ExistsAtMost(_, block, body) => {
                let mut vars = body.free_vars();
                for v in block {
                    vars.remove(v);
                }
                vars
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Largest variable index appearing anywhere, bound or free.
    pub fn max_var(&self) -> usize {
        match self {
            Formula::Eq(a, b) => (*a).max(*b),
            Formula::Rel(_, args) => args.iter().copied().max().unwrap_or(0),
            Formula::Not(inner) => inner.max_var(),
            Formula::And(parts) | Formula::Or(parts) => {
                parts.iter().map(Formula::max_var).max().unwrap_or(0)
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => (*v).max(body.max_var()),
            Formula::ExistsAtMost(_, block, body) => block
                .iter()
                .copied()
                .max()
                .unwrap_or(0)
                .max(body.max_var()),
        }
    }

    /// Rename free variables. Binders shadow as usual; the caller must pick
    /// target names that cannot be captured by inner binders.
    pub fn substitute(&self, map: &BTreeMap<usize, usize>) -> Formula {
        let get = |v: usize| map.get(&v).copied().unwrap_or(v);
        match self {
            Formula::Eq(a, b) => Formula::Eq(get(*a), get(*b)),
            Formula::Rel(rel, args) => {
                Formula::Rel(*rel, args.iter().map(|&a| get(a)).collect())
            }
            Formula::Not(inner) => Formula::not(inner.substitute(map)),
            Formula::And(parts) => {
                Formula::And(parts.iter().map(|p| p.substitute(map)).collect())
            }
            Formula::Or(parts) => Formula::Or(parts.iter().map(|p| p.substitute(map)).collect()),
            Formula::ForAll(v, body) => {
                let mut inner = map.clone();
                inner.remove(v);
                Formula::forall(*v, body.substitute(&inner))
            }
            Formula::Exists(v, body) => {
                let mut inner = map.clone();
                inner.remove(v);
                Formula::exists(*v, body.substitute(&inner))
            }
            Formula::ExistsAtMost(bound, block, body) => {
                let mut inner = map.clone();
                for v in block {
                    inner.remove(v);
                }
                Formula::ExistsAtMost(*bound, block.clone(), Box::new(body.substitute(&inner)))
            }
        }
    }
}

/// The universal form of the counting quantifier: among any `bound + 1`
/// witness blocks, one fails the body or two coincide. Used as the
/// classification surrogate and as a semantic test oracle; evaluation counts
/// directly instead.
pub fn expand_exists_at_most(bound: usize, block: &[usize], body: &Formula) -> Formula {
    let q = block.len();
    let fresh = body
        .max_var()
        .max(block.iter().copied().max().unwrap_or(0))
        + 1;
    let block_var = |k: usize, j: usize| fresh + k * q + j;
    let mut disjuncts = Vec::new();
    for k in 0..=bound {
        let map: BTreeMap<usize, usize> =
            block.iter().enumerate().map(|(j, &v)| (v, block_var(k, j))).collect();
        disjuncts.push(transform_neg(&body.substitute(&map)));
    }
    for k in 0..=bound {
        for l in (k + 1)..=bound {
            let eqs: Vec<Formula> = (0..q)
                .map(|j| Formula::Eq(block_var(k, j), block_var(l, j)))
                .collect();
            disjuncts.push(Formula::and(eqs));
        }
    }
    let all_fresh: Vec<usize> = (0..=bound)
        .flat_map(|k| (0..q).map(move |j| block_var(k, j)))
        .collect();
    Formula::forall_many(all_fresh, Formula::or(disjuncts))
}

/// Sentence asserting a path of length < n between any two vertices:
/// satisfied by a graph on at most n points iff it is connected.
pub fn conn_formula(n: usize) -> Formula {
    let mut disjuncts = vec![Formula::Eq(0, 1)];
    for hops in 0..n.saturating_sub(1) {
        // path v0 -> w_1 -> .. -> w_hops -> v1, intermediates at v2..
        let mut chain = Vec::new();
        let mut prev = 0;
        for j in 0..hops {
            chain.push(Formula::rel(0, vec![prev, 2 + j]));
            prev = 2 + j;
        }
        chain.push(Formula::rel(0, vec![prev, 1]));
        disjuncts.push(Formula::exists_many(2..2 + hops, Formula::and(chain)));
    }
    Formula::forall(0, Formula::forall(1, Formula::or(disjuncts)))
}

fn check_pattern_cap(pattern: &Structure, cap: usize) -> Result<usize> {
    let m = pattern.domain();
    if m > cap {
        return Err(Error::OrbitCapExceeded { domain: m, cap });
    }
    Ok(m)
}

/// All atomic facts of `pattern` as literals over variables v0..v(m-1):
/// distinctness plus the full atomic diagram. With `flipped` every literal is
/// inverted and distinctness becomes equality, giving the disjuncts of the
/// universal exclusion sentence.
fn pattern_literals(pattern: &Structure, flipped: bool) -> Vec<Formula> {
    let m = pattern.domain();
    let mut parts = Vec::new();
    for j in 0..m {
        for k in (j + 1)..m {
            if flipped {
                parts.push(Formula::Eq(j, k));
            } else {
                parts.push(Formula::not(Formula::Eq(j, k)));
            }
        }
    }
    for (rel, &arity) in pattern.signature().arities().iter().enumerate() {
        let space = crate::structure::space_size(m, arity).expect("small pattern");
        for code in 0..space {
            let tuple = crate::structure::decode_tuple(code, arity, m);
            let atom = Formula::rel(rel, tuple);
            let present = pattern.contains_code(rel, code);
            if present != flipped {
                parts.push(atom);
            } else {
                parts.push(Formula::not(atom));
            }
        }
    }
    parts
}

/// Existential sentence true in exactly the structures containing an induced
/// copy of `pattern`.
pub fn embed_sentence_capped(pattern: &Structure, cap: usize) -> Result<Formula> {
    let m = check_pattern_cap(pattern, cap)?;
    Ok(Formula::exists_many(
        0..m,
        Formula::and(pattern_literals(pattern, false)),
    ))
}

pub fn embed_sentence(pattern: &Structure) -> Result<Formula> {
    embed_sentence_capped(pattern, DEFAULT_PATTERN_CAP)
}

/// Universal sentence true in exactly the structures with no induced copy of
/// `pattern`; the negation-normal dual of `embed_sentence`.
pub fn forbid_sentence_capped(pattern: &Structure, cap: usize) -> Result<Formula> {
    let m = check_pattern_cap(pattern, cap)?;
    Ok(Formula::forall_many(
        0..m,
        Formula::or(pattern_literals(pattern, true)),
    ))
}

pub fn forbid_sentence(pattern: &Structure) -> Result<Formula> {
    forbid_sentence_capped(pattern, DEFAULT_PATTERN_CAP)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "v{a} = v{b}"),
            Formula::Rel(rel, args) => {
                write!(f, "R{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "v{a}")?;
                }
                write!(f, ")")
            }
            Formula::Not(inner) => write!(f, "~{inner}"),
            Formula::And(parts) | Formula::Or(parts) => {
                debug_assert!(parts.len() >= 2, "connective lists have two or more parts");
                let op = if matches!(self, Formula::And(_)) { "&" } else { "|" };
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {op} ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Formula::ForAll(v, body) => write!(f, "A v{v} . {body}"),
            Formula::Exists(v, body) => write!(f, "E v{v} . {body}"),
            Formula::ExistsAtMost(bound, block, body) => {
                write!(f, "E<={bound} [")?;
                for (i, v) in block.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "v{v}")?;
                }
                write!(f, "] . {body}")
            }
        }
    }
}
