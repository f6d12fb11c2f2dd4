//! Seeded random generators for property tests: structures, valuations,
//! unrestricted formulas, and formulas drawn from class-restricted grammars.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::structure::{space_size, Signature, Structure};

use super::{Formula, Valuation};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each possible tuple is present independently with probability 1/2.
pub fn random_structure(rng: &mut impl Rng, sig: &Signature, domain: usize) -> Structure {
    let mut relations = Vec::with_capacity(sig.len());
    for &arity in sig.arities() {
        let space = space_size(domain, arity).expect("small test domains");
        relations.push((0..space).filter(|_| rng.gen_bool(0.5)).collect());
    }
    Structure::from_codes(sig.clone(), domain, relations).expect("valid by construction")
}

pub fn random_valuation(
    rng: &mut impl Rng,
    free: &BTreeSet<usize>,
    domain: usize,
) -> Valuation {
    free.iter().map(|&v| (v, rng.gen_range(0..domain))).collect()
}

fn random_var(rng: &mut impl Rng, vars: usize) -> usize {
    rng.gen_range(0..vars.max(1))
}

fn random_atom(rng: &mut impl Rng, sig: &Signature, vars: usize) -> Formula {
    if rng.gen_bool(0.3) {
        Formula::Eq(random_var(rng, vars), random_var(rng, vars))
    } else {
        let rel = rng.gen_range(0..sig.len());
        let arity = sig.arities()[rel];
        Formula::rel(rel, (0..arity).map(|_| random_var(rng, vars)).collect())
    }
}

/// Unrestricted random formula: any node type, including the counting
/// quantifier, up to the given depth; variable indices below `vars`.
pub fn random_formula(rng: &mut impl Rng, sig: &Signature, depth: usize, vars: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return random_atom(rng, sig, vars);
    }
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, sig, depth - 1, vars)),
        1 | 2 => {
            let parts = (0..rng.gen_range(2..=3))
                .map(|_| random_formula(rng, sig, depth - 1, vars))
                .collect();
            if rng.gen_bool(0.5) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        3 => Formula::forall(random_var(rng, vars), random_formula(rng, sig, depth - 1, vars)),
        4 | 5 => Formula::exists(random_var(rng, vars), random_formula(rng, sig, depth - 1, vars)),
        _ => {
            let block_len = rng.gen_range(1..=2.min(vars.max(1)));
            let mut pool: Vec<usize> = (0..vars.max(1)).collect();
            pool.shuffle(rng);
            pool.truncate(block_len);
            pool.sort_unstable();
            let bound = rng.gen_range(0..=2);
            Formula::exists_at_most(bound, pool, random_formula(rng, sig, depth - 1, vars))
        }
    }
}

/// Grammars that generate only members of one syntactic class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassGrammar {
    Positive,
    Negative,
    FClass,
    NegFClass,
}

/// Random formula guaranteed to classify into the requested class.
pub fn random_in_class(
    rng: &mut impl Rng,
    sig: &Signature,
    grammar: ClassGrammar,
    depth: usize,
    vars: usize,
) -> Formula {
    match grammar {
        ClassGrammar::Positive => random_closed(rng, sig, depth, vars, false),
        ClassGrammar::Negative => random_closed(rng, sig, depth, vars, true),
        ClassGrammar::FClass => {
            // base: any P formula or a negated relational literal;
            // closure: connectives and universal quantification only
            if depth == 0 || rng.gen_bool(0.2) {
                return random_base_with_flip(rng, sig, vars, true);
            }
            match rng.gen_range(0..4) {
                0 => random_closed(rng, sig, depth - 1, vars, false),
                1 => Formula::forall(
                    random_var(rng, vars),
                    random_in_class(rng, sig, grammar, depth - 1, vars),
                ),
                _ => {
                    let parts = (0..rng.gen_range(2..=3))
                        .map(|_| random_in_class(rng, sig, grammar, depth - 1, vars))
                        .collect();
                    if rng.gen_bool(0.5) {
                        Formula::And(parts)
                    } else {
                        Formula::Or(parts)
                    }
                }
            }
        }
        ClassGrammar::NegFClass => {
            // base: any N formula or a bare relational literal;
            // closure: connectives and existential quantification only
            if depth == 0 || rng.gen_bool(0.2) {
                return random_base_with_flip(rng, sig, vars, false);
            }
            match rng.gen_range(0..4) {
                0 => random_closed(rng, sig, depth - 1, vars, true),
                1 => Formula::exists(
                    random_var(rng, vars),
                    random_in_class(rng, sig, grammar, depth - 1, vars),
                ),
                _ => {
                    let parts = (0..rng.gen_range(2..=3))
                        .map(|_| random_in_class(rng, sig, grammar, depth - 1, vars))
                        .collect();
                    if rng.gen_bool(0.5) {
                        Formula::And(parts)
                    } else {
                        Formula::Or(parts)
                    }
                }
            }
        }
    }
}

/// Literal for the extended bases: either the plain-signed grammar literal or
/// the one extra literal the class admits (negated relational for F, bare
/// relational for negF).
fn random_base_with_flip(
    rng: &mut impl Rng,
    sig: &Signature,
    vars: usize,
    negate_rel: bool,
) -> Formula {
    let rel = rng.gen_range(0..sig.len());
    let arity = sig.arities()[rel];
    let atom = Formula::rel(rel, (0..arity).map(|_| random_var(rng, vars)).collect());
    match rng.gen_range(0..3) {
        0 => {
            if negate_rel {
                Formula::not(atom)
            } else {
                atom
            }
        }
        1 => Formula::Eq(random_var(rng, vars), random_var(rng, vars)),
        _ => Formula::not(Formula::Eq(random_var(rng, vars), random_var(rng, vars))),
    }
}

/// P/N grammar: literals with the given relational sign, closed under all
/// connectives and both quantifiers.
fn random_closed(
    rng: &mut impl Rng,
    sig: &Signature,
    depth: usize,
    vars: usize,
    negated_rels: bool,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let literal = {
            let rel = rng.gen_range(0..sig.len());
            let arity = sig.arities()[rel];
            let atom = Formula::rel(rel, (0..arity).map(|_| random_var(rng, vars)).collect());
            if negated_rels {
                Formula::not(atom)
            } else {
                atom
            }
        };
        return match rng.gen_range(0..3) {
            0 => literal,
            1 => Formula::Eq(random_var(rng, vars), random_var(rng, vars)),
            _ => Formula::not(Formula::Eq(random_var(rng, vars), random_var(rng, vars))),
        };
    }
    match rng.gen_range(0..4) {
        0 => Formula::forall(
            random_var(rng, vars),
            random_closed(rng, sig, depth - 1, vars, negated_rels),
        ),
        1 => Formula::exists(
            random_var(rng, vars),
            random_closed(rng, sig, depth - 1, vars, negated_rels),
        ),
        _ => {
            let parts = (0..rng.gen_range(2..=3))
                .map(|_| random_closed(rng, sig, depth - 1, vars, negated_rels))
                .collect();
            if rng.gen_bool(0.5) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
    }
}

/// Signatures the seeded suites draw from: one binary symbol, a unary plus a
/// binary, and one ternary symbol.
pub fn signature_pool() -> Vec<Signature> {
    vec![
        Signature::binary(),
        Signature::new(vec![1, 2]).expect("valid"),
        Signature::new(vec![3]).expect("valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_per_seed() {
        let sig = Signature::new(vec![1, 2]).unwrap();
        let mut a = rng_from_seed(42);
        let mut b = rng_from_seed(42);
        for _ in 0..20 {
            let fa = random_formula(&mut a, &sig, 4, 3);
            let fb = random_formula(&mut b, &sig, 4, 3);
            assert_eq!(fa, fb);
        }
        let sa = random_structure(&mut a, &sig, 4);
        let sb = random_structure(&mut b, &sig, 4);
        assert_eq!(sa, sb);
    }

    #[test]
    fn different_seeds_differ_eventually() {
        let sig = Signature::binary();
        let mut a = rng_from_seed(1);
        let mut b = rng_from_seed(2);
        let differs = (0..50).any(|_| {
            random_formula(&mut a, &sig, 4, 3) != random_formula(&mut b, &sig, 4, 3)
        });
        assert!(differs);
    }

    #[test]
    fn valuation_covers_exactly_free_vars() {
        let mut rng = rng_from_seed(7);
        let free: BTreeSet<usize> = [0, 2, 5].into_iter().collect();
        let val = random_valuation(&mut rng, &free, 3);
        assert_eq!(val.keys().copied().collect::<BTreeSet<_>>(), free);
        assert!(val.values().all(|&x| x < 3));
    }
}
