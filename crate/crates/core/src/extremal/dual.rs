//! Complementation duality for class specs: a structure is a member of the
//! dual class exactly when its complement is a member of the original, so
//! maximal members map to minimal members of the dual and back.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{normalize_neg, transform_c};
use crate::structure::space_size;

use super::{Builtin, ClassSpec, DefBound};

/// Builds the class `{ complement(s) : s in c }`.
///
/// Irreflexive and reflexive swap, symmetry is self-dual, and the remaining
/// builtins have no complement-stable counterpart and are refused. Axioms and
/// counting bounds go through the relation-flipping transform, forbidden
/// patterns are complemented, per-subset tuple counts reflect within each
/// subset's tuple space, and a degree cap turns into a counting bound on
/// absent neighbours.
pub fn complement_dual(c: &ClassSpec) -> Result<ClassSpec> {
    let mut builtins = BTreeSet::new();
    for b in c.builtins() {
        let dual = match b {
            Builtin::Irreflexive => Builtin::Reflexive,
            Builtin::Reflexive => Builtin::Irreflexive,
            Builtin::Symmetric => Builtin::Symmetric,
            Builtin::Connected | Builtin::Transitive => {
                return Err(Error::NonDualizableBuiltin(b.name().to_string()));
            }
        };
        builtins.insert(dual);
    }

    let axioms = c
        .axioms()
        .iter()
        .map(|f| normalize_neg(&transform_c(f)))
        .collect::<Vec<_>>();

    let forbidden = c
        .forbidden()
        .iter()
        .map(|f| f.complement())
        .collect::<Result<Vec<_>>>()?;

    let mut local_bounds = BTreeMap::new();
    for (&m, bounds) in c.local_bounds() {
        let dual_bounds = bounds
            .iter()
            .enumerate()
            .map(|(sym, &(k, l))| {
                let space = space_size(m, c.signature().arities()[sym]).expect("validated");
                (space - l, space - k)
            })
            .collect();
        local_bounds.insert(m, dual_bounds);
    }

    let mut defbounds: Vec<DefBound> = c
        .defbounds()
        .iter()
        .map(|db| DefBound {
            formula: normalize_neg(&transform_c(&db.formula)),
            params: db.params,
            block: db.block,
            bound: db.bound,
        })
        .collect();
    if let Some(n) = c.degree_max() {
        // degree in the complement = number of absent neighbours here
        for (sym, &arity) in c.signature().arities().iter().enumerate() {
            if arity == 2 {
                defbounds.push(DefBound {
                    formula: normalize_neg(&transform_c(&super::degree_body(sym))),
                    params: 1,
                    block: 1,
                    bound: n,
                });
            }
        }
    }

    ClassSpec::build(
        c.signature().clone(),
        builtins,
        axioms,
        forbidden,
        None,
        local_bounds,
        defbounds,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{census, CensusWhat};
    use crate::formula::rng_from_seed;
    use crate::gallery;
    use crate::structure::{Signature, Structure};
    use rand::Rng;

    fn forbid_k3_spec() -> ClassSpec {
        let k3 = gallery::complete(3).to_json_string();
        ClassSpec::from_json_str(&format!(
            "{{\"builtins\":[\"irreflexive\",\"symmetric\"],\"forbidden\":[{k3}]}}"
        ))
        .unwrap()
    }

    #[test]
    fn dual_of_triangle_free_graphs() {
        let dual = complement_dual(&forbid_k3_spec()).unwrap();
        let b: Vec<Builtin> = dual.builtins().collect();
        assert_eq!(b, vec![Builtin::Symmetric, Builtin::Reflexive]);
        // complement of the triangle is the pure diagonal on 3 points
        assert_eq!(dual.forbidden().len(), 1);
        let pat = &dual.forbidden()[0];
        assert_eq!(pat.total_tuples(), 3);
        assert!(pat.is_reflexive_rel(0).unwrap());
    }

    #[test]
    fn membership_flips_with_complementation() {
        let spec = forbid_k3_spec();
        let dual = complement_dual(&spec).unwrap();
        let mut rng = rng_from_seed(2024);
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let mut s = Structure::empty(Signature::binary(), n).unwrap();
            for code in 0..(n * n) as u64 {
                if rng.gen_bool(0.5) {
                    s.insert_code(0, code);
                }
            }
            let direct = spec.member(&s).unwrap();
            let flipped = dual.member(&s.complement().unwrap()).unwrap();
            assert_eq!(direct, flipped);
        }
    }

    #[test]
    fn dual_of_dual_has_the_same_members() {
        let spec = ClassSpec::from_json_str(
            r#"{
                "builtins": ["irreflexive", "symmetric"],
                "degree_max": 2,
                "local_bounds": {"3": [[0, 4]]},
                "axioms": ["A v0 . A v1 . ~R0(v0, v0)"]
            }"#,
        )
        .unwrap();
        let twice = complement_dual(&complement_dual(&spec).unwrap()).unwrap();
        assert_eq!(
            spec.builtins().collect::<Vec<_>>(),
            twice.builtins().collect::<Vec<_>>()
        );
        assert_eq!(spec.local_bounds(), twice.local_bounds());
        let mut rng = rng_from_seed(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let mut s = Structure::empty(Signature::binary(), n).unwrap();
            for code in 0..(n * n) as u64 {
                if rng.gen_bool(0.5) {
                    s.insert_code(0, code);
                }
            }
            assert_eq!(spec.member(&s).unwrap(), twice.member(&s).unwrap());
        }
    }

    #[test]
    fn connected_refuses_to_dualize() {
        let spec = ClassSpec::from_json_str(
            r#"{"builtins":["irreflexive","symmetric","connected"]}"#,
        )
        .unwrap();
        assert!(matches!(
            complement_dual(&spec),
            Err(Error::NonDualizableBuiltin(_))
        ));
    }

    #[test]
    fn census_extremes_swap_under_duality() {
        let spec = forbid_k3_spec();
        let dual = complement_dual(&spec).unwrap();
        for n in 2..=4 {
            let maxes = census(&spec, n, CensusWhat::Max, false, 1, None).unwrap();
            let mut complements: Vec<Structure> = maxes
                .iter()
                .map(|s| s.complement().unwrap())
                .collect();
            complements.sort();
            let mins = census(&dual, n, CensusWhat::Min, false, 1, None).unwrap();
            assert_eq!(complements, mins, "n={n}");
        }
    }
}
