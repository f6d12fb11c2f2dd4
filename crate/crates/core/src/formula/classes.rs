//! Syntactic class flags and the two dual transforms.
//!
//! Six classes are tracked. P allows every connective and quantifier but only
//! positive relational literals; N is its mirror with negated relational
//! literals (equality literals of either sign are allowed in both). F extends
//! P by negated relational literals but then closes only under universal
//! quantification and connectives; G extends N by positive relational
//! literals with the same closure. negF and negG are the respective duals
//! closed under existential quantification and connectives. Consequences:
//! P is contained in F and in negG, N in G and in negF.

use serde::{Deserialize, Serialize};

use super::{expand_exists_at_most, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntacticClass {
    #[serde(rename = "P")]
    pub p: bool,
    #[serde(rename = "N")]
    pub n: bool,
    #[serde(rename = "F")]
    pub f: bool,
    #[serde(rename = "G")]
    pub g: bool,
    #[serde(rename = "negF")]
    pub neg_f: bool,
    #[serde(rename = "negG")]
    pub neg_g: bool,
}

impl SyntacticClass {
    pub const ALL: SyntacticClass = SyntacticClass {
        p: true,
        n: true,
        f: true,
        g: true,
        neg_f: true,
        neg_g: true,
    };

    pub const NONE: SyntacticClass = SyntacticClass {
        p: false,
        n: false,
        f: false,
        g: false,
        neg_f: false,
        neg_g: false,
    };

    fn meet(self, other: SyntacticClass) -> SyntacticClass {
        SyntacticClass {
            p: self.p && other.p,
            n: self.n && other.n,
            f: self.f && other.f,
            g: self.g && other.g,
            neg_f: self.neg_f && other.neg_f,
            neg_g: self.neg_g && other.neg_g,
        }
    }
}

/// Structural class membership. Literals seed the classes; connectives are
/// componentwise; quantifiers restrict: universal drops a formula out of the
/// neg classes unless the body is a plain P/N formula, existential does the
/// same to F and G.
pub fn classify(formula: &Formula) -> SyntacticClass {
    match formula {
        Formula::Eq(_, _) => SyntacticClass::ALL,
        Formula::Rel(_, _) => SyntacticClass {
            n: false,
            ..SyntacticClass::ALL
        },
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(_, _) => SyntacticClass::ALL,
            Formula::Rel(_, _) => SyntacticClass {
                p: false,
                ..SyntacticClass::ALL
            },
            _ => SyntacticClass::NONE,
        },
        Formula::And(parts) | Formula::Or(parts) => parts
            .iter()
            .map(classify)
            .fold(SyntacticClass::ALL, SyntacticClass::meet),
        Formula::ForAll(_, body) => {
            let c = classify(body);
            SyntacticClass {
                p: c.p,
                n: c.n,
                f: c.f,
                g: c.g,
                neg_f: c.n,
                neg_g: c.p,
            }
        }
        Formula::Exists(_, body) => {
            let c = classify(body);
            SyntacticClass {
                p: c.p,
                n: c.n,
                f: c.p,
                g: c.n,
                neg_f: c.neg_f,
                neg_g: c.neg_g,
            }
        }
        Formula::ExistsAtMost(bound, block, body) => {
            classify(&expand_exists_at_most(*bound, block, body))
        }
    }
}

/// The complement dual: relational literals flip, equality stays, everything
/// else is preserved. Evaluating the result on the complemented structure
/// agrees with evaluating the original on the structure itself.
pub fn transform_c(formula: &Formula) -> Formula {
    match formula {
        Formula::Eq(a, b) => Formula::Eq(*a, *b),
        Formula::Rel(rel, args) => Formula::not(Formula::Rel(*rel, args.clone())),
        Formula::Not(inner) => Formula::not(transform_c(inner)),
        Formula::And(parts) => Formula::And(parts.iter().map(transform_c).collect()),
        Formula::Or(parts) => Formula::Or(parts.iter().map(transform_c).collect()),
        Formula::ForAll(v, body) => Formula::forall(*v, transform_c(body)),
        Formula::Exists(v, body) => Formula::exists(*v, transform_c(body)),
        Formula::ExistsAtMost(bound, block, body) => {
            Formula::ExistsAtMost(*bound, block.clone(), Box::new(transform_c(body)))
        }
    }
}

/// The negation dual: atoms flip sign, a leading negation is stripped,
/// quantifiers and connectives dualize. Semantically equivalent to plain
/// negation but stays inside the dual syntactic class. The counting
/// quantifier is handled through its universal expansion.
pub fn transform_neg(formula: &Formula) -> Formula {
    match formula {
        Formula::Eq(a, b) => Formula::not(Formula::Eq(*a, *b)),
        Formula::Rel(rel, args) => Formula::not(Formula::Rel(*rel, args.clone())),
        Formula::Not(inner) => inner.as_ref().clone(),
        Formula::And(parts) => Formula::Or(parts.iter().map(transform_neg).collect()),
        Formula::Or(parts) => Formula::And(parts.iter().map(transform_neg).collect()),
        Formula::ForAll(v, body) => Formula::exists(*v, transform_neg(body)),
        Formula::Exists(v, body) => Formula::forall(*v, transform_neg(body)),
        Formula::ExistsAtMost(bound, block, body) => {
            transform_neg(&expand_exists_at_most(*bound, block, body))
        }
    }
}

/// Remove double negations everywhere. `transform_c` stacks a negation onto
/// already-negated literals; normalizing afterwards restores literal shape so
/// class membership of the result is visible to `classify`.
pub fn normalize_neg(formula: &Formula) -> Formula {
    match formula {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(body) => normalize_neg(body),
            _ => Formula::not(normalize_neg(inner)),
        },
        Formula::Eq(a, b) => Formula::Eq(*a, *b),
        Formula::Rel(rel, args) => Formula::Rel(*rel, args.clone()),
        Formula::And(parts) => Formula::And(parts.iter().map(normalize_neg).collect()),
        Formula::Or(parts) => Formula::Or(parts.iter().map(normalize_neg).collect()),
        Formula::ForAll(v, body) => Formula::forall(*v, normalize_neg(body)),
        Formula::Exists(v, body) => Formula::exists(*v, normalize_neg(body)),
        Formula::ExistsAtMost(bound, block, body) => {
            Formula::ExistsAtMost(*bound, block.clone(), Box::new(normalize_neg(body)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{conn_formula, evaluate, gen, parse};
    use super::*;
    use crate::structure::Signature;
    use proptest::prelude::*;

    fn flags(text: &str) -> SyntacticClass {
        classify(&parse(text).unwrap())
    }

    #[test]
    fn axiom_examples() {
        let irr = flags("A v0 . ~R0(v0,v0)");
        assert!(irr.f && irr.g && irr.n && !irr.p);
        let tr = flags("A v0 . A v1 . A v2 . (~R0(v0,v1) | ~R0(v1,v2) | R0(v0,v2))");
        assert!(tr.f && tr.g && !tr.p && !tr.n);
        let conn = classify(&conn_formula(5));
        assert!(conn.p && conn.f && conn.neg_g);
        assert!(!conn.n && !conn.g);
    }

    #[test]
    fn literal_seeds() {
        assert_eq!(flags("v0 = v1"), SyntacticClass::ALL);
        assert_eq!(flags("~v0 = v1"), SyntacticClass::ALL);
        let rel = flags("R0(v0,v1)");
        assert!(rel.p && !rel.n && rel.f && rel.g && rel.neg_f && rel.neg_g);
        let nrel = flags("~R0(v0,v1)");
        assert!(!nrel.p && nrel.n && nrel.f && nrel.g && nrel.neg_f && nrel.neg_g);
        assert_eq!(flags("~~R0(v0,v1)"), SyntacticClass::NONE);
    }

    #[test]
    fn quantifier_restrictions() {
        // universal over a G-only body keeps G but leaves the neg classes
        let univ = flags("A v0 . E v1 . R0(v0,v1)");
        assert!(univ.p && univ.f && !univ.neg_f && univ.neg_g);
        // existential over plain literals stays everywhere except F needs P
        let exi = flags("E v0 . ~R0(v0,v0)");
        assert!(exi.n && !exi.p && !exi.f && exi.g && exi.neg_f && exi.neg_g);
        // counting classifies through the universal expansion, whose body is
        // a disjunction of negated relational literals and equalities
        let eam = flags("A v0 . E<=2 [v1] . R0(v0,v1)");
        assert!(eam.f && eam.g && eam.n && eam.neg_f && !eam.p && !eam.neg_g);
    }

    #[test]
    fn transform_c_on_atoms() {
        let rel = parse("R0(v0,v1)").unwrap();
        assert_eq!(transform_c(&rel).to_string(), "~R0(v0,v1)");
        let eq = parse("v0 = v1").unwrap();
        assert_eq!(transform_c(&eq), eq);
        let round = normalize_neg(&transform_c(&transform_c(&rel)));
        assert_eq!(round, rel);
    }

    #[test]
    fn transform_neg_on_quantifier() {
        let f = parse("A v0 . R0(v0,v0)").unwrap();
        assert_eq!(transform_neg(&f).to_string(), "E v0 . ~R0(v0,v0)");
        let g = parse("~v0 = v1").unwrap();
        assert_eq!(transform_neg(&g).to_string(), "v0 = v1");
    }

    #[test]
    fn class_shift_under_duals() {
        // P formula: complement dual lands in N (after cleanup it is literal)
        let p_formula = parse("E v0 . (R0(v0,v1) | v0 = v1)").unwrap();
        assert!(classify(&p_formula).p);
        let c = normalize_neg(&transform_c(&p_formula));
        assert!(classify(&c).n);
        // F formula with a negated literal: dual lands in G
        let f_formula = parse("A v0 . ~R0(v0,v0)").unwrap();
        let cf = normalize_neg(&transform_c(&f_formula));
        assert!(classify(&cf).g);
        // N formula: negation dual lands in P
        let n_formula = parse("A v0 . E v1 . (~R0(v0,v1) & ~v0 = v1)").unwrap();
        assert!(classify(&n_formula).n);
        assert!(classify(&transform_neg(&n_formula)).p);
    }

    proptest! {
        #[test]
        fn containments_hold(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::new(vec![1, 2]).unwrap();
            let f = gen::random_formula(&mut rng, &sig, 4, 3);
            let c = classify(&f);
            prop_assert!(!c.p || c.f, "P must imply F: {f}");
            prop_assert!(!c.n || c.g, "N must imply G: {f}");
            prop_assert!(!c.n || c.neg_f, "N must imply negF: {f}");
            prop_assert!(!c.p || c.neg_g, "P must imply negG: {f}");
        }

        #[test]
        fn neg_transform_negates(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::new(vec![1, 2]).unwrap();
            let f = gen::random_formula(&mut rng, &sig, 3, 3);
            let s = gen::random_structure(&mut rng, &sig, 1 + (seed as usize % 4));
            let val = gen::random_valuation(&mut rng, &f.free_vars(), s.domain());
            let lhs = evaluate(&s, &transform_neg(&f), &val).unwrap();
            let rhs = !evaluate(&s, &f, &val).unwrap();
            prop_assert_eq!(lhs, rhs, "failed on {} over {:?}", f, s);
            // and the double transform is the identity semantically
            let back = evaluate(&s, &transform_neg(&transform_neg(&f)), &val).unwrap();
            prop_assert_eq!(back, !lhs);
        }

        #[test]
        fn complement_transform_dualizes(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::new(vec![1, 2]).unwrap();
            let f = gen::random_formula(&mut rng, &sig, 3, 3);
            let s = gen::random_structure(&mut rng, &sig, 1 + (seed as usize % 4));
            let val = gen::random_valuation(&mut rng, &f.free_vars(), s.domain());
            let lhs = evaluate(&s.complement().unwrap(), &transform_c(&f), &val).unwrap();
            let rhs = evaluate(&s, &f, &val).unwrap();
            prop_assert_eq!(lhs, rhs, "failed on {} over {:?}", f, s);
        }

        #[test]
        fn normalization_preserves_truth(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::new(vec![1, 2]).unwrap();
            let f = gen::random_formula(&mut rng, &sig, 3, 3);
            let s = gen::random_structure(&mut rng, &sig, 1 + (seed as usize % 4));
            let val = gen::random_valuation(&mut rng, &f.free_vars(), s.domain());
            let lhs = evaluate(&s, &normalize_neg(&f), &val).unwrap();
            prop_assert_eq!(lhs, evaluate(&s, &f, &val).unwrap());
        }

        #[test]
        fn counting_matches_expansion(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::binary();
            let body = gen::random_formula(&mut rng, &sig, 2, 3);
            use rand::Rng;
            let bound = rng.gen_range(0..3usize);
            let block = vec![0];
            let eam = Formula::ExistsAtMost(bound, block.clone(), Box::new(body.clone()));
            let expanded = expand_exists_at_most(bound, &block, &body);
            let s = gen::random_structure(&mut rng, &sig, 1 + (seed as usize % 4));
            let free = eam.free_vars();
            let val = gen::random_valuation(&mut rng, &free, s.domain());
            let lhs = evaluate(&s, &eam, &val).unwrap();
            let rhs = evaluate(&s, &expanded, &val).unwrap();
            prop_assert_eq!(lhs, rhs, "failed on {} over {:?}", eam, s);
        }

        #[test]
        fn class_grammars_generate_members(seed in any::<u64>()) {
            let mut rng = gen::rng_from_seed(seed);
            let sig = Signature::new(vec![1, 2]).unwrap();
            for grammar in [
                gen::ClassGrammar::Positive,
                gen::ClassGrammar::Negative,
                gen::ClassGrammar::FClass,
                gen::ClassGrammar::NegFClass,
            ] {
                let f = gen::random_in_class(&mut rng, &sig, grammar, 3, 3);
                let c = classify(&f);
                let ok = match grammar {
                    gen::ClassGrammar::Positive => c.p,
                    gen::ClassGrammar::Negative => c.n,
                    gen::ClassGrammar::FClass => c.f,
                    gen::ClassGrammar::NegFClass => c.neg_f,
                };
                prop_assert!(ok, "grammar {:?} produced {} with flags {:?}", grammar, f, c);
            }
        }
    }
}
