//! Census of the condensation pre-order on all interpretations of a small
//! domain: which structures map into which by a bijection that carries
//! tuples to tuples.
//!
//! The census stores one canonical representative per isomorphism class;
//! relatedness between classes does not depend on the choice because the
//! pre-order is isomorphism-invariant. On finite domains mutual relatedness
//! collapses to isomorphism, which the verification passes check
//! extensionally, structure by structure.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::gen::random_structure;
use crate::formula::rng_from_seed;
use crate::morphism::{
    canonical_form, exists_condensation_into, is_inclusion_antichain, is_reversible, iso_class,
    DEFAULT_ORBIT_CAP,
};
use crate::structure::{enum_space, Signature, Structure};

/// Largest number of interpretations an exhaustive census will enumerate.
pub const COND_CENSUS_CAP: u64 = 1 << 12;

/// The condensation pre-order restricted to one domain size.
///
/// `matrix[i][j]` says whether representative i maps into representative j
/// by some bijection; `classes` partitions representative indices by mutual
/// relatedness. Sampled censuses set `complete` to false and are rejected
/// by the verification passes.
#[derive(Clone, Debug, Serialize)]
pub struct CondOrderCensus {
    pub domain: usize,
    pub signature: Signature,
    pub reps: Vec<Structure>,
    pub orbit_sizes: Vec<usize>,
    pub matrix: Vec<Vec<bool>>,
    pub classes: Vec<Vec<usize>>,
    pub complete: bool,
}

fn total_bits(sig: &Signature, domain: usize) -> Result<u64> {
    let mut bits = 0u64;
    for &arity in sig.arities() {
        bits += enum_space(domain, arity)?;
    }
    Ok(bits)
}

/// Every interpretation of the signature on the domain, in mask order.
fn all_structures(sig: &Signature, domain: usize) -> Result<Vec<Structure>> {
    let bits = total_bits(sig, domain)?;
    if bits >= 63 || (1u64 << bits) > COND_CENSUS_CAP {
        return Err(Error::BudgetExceeded { budget: COND_CENSUS_CAP });
    }
    let mut out = Vec::with_capacity(1 << bits);
    for mask in 0..(1u64 << bits) {
        let mut s = Structure::empty(sig.clone(), domain)?;
        let mut bit = 0;
        for (rel, &arity) in sig.arities().iter().enumerate() {
            let space = enum_space(domain, arity)?;
            for code in 0..space {
                if mask & (1 << bit) != 0 {
                    s.insert_code(rel, code);
                }
                bit += 1;
            }
        }
        out.push(s);
    }
    Ok(out)
}

fn census_from_reps(
    domain: usize,
    signature: Signature,
    reps: Vec<Structure>,
    orbit_sizes: Vec<usize>,
    complete: bool,
) -> Result<CondOrderCensus> {
    let n = reps.len();
    let mut matrix = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = exists_condensation_into(&reps[i], &reps[j])?;
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match classes
            .iter_mut()
            .find(|class| matrix[i][class[0]] && matrix[class[0]][i])
        {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(CondOrderCensus { domain, signature, reps, orbit_sizes, matrix, classes, complete })
}

/// Exhaustive census over every interpretation on the domain. Refuses
/// domains whose interpretation count exceeds [`COND_CENSUS_CAP`].
pub fn cond_census(domain: usize, signature: &Signature) -> Result<CondOrderCensus> {
    let mut orbits: BTreeMap<Structure, usize> = BTreeMap::new();
    for s in all_structures(signature, domain)? {
        *orbits.entry(canonical_form(&s)?).or_insert(0) += 1;
    }
    let (reps, orbit_sizes): (Vec<_>, Vec<_>) = orbits.into_iter().unzip();
    census_from_reps(domain, signature.clone(), reps, orbit_sizes, true)
}

/// Seeded sampled census for domains beyond the exhaustive cap. Orbit sizes
/// are exact for the classes found; the class list itself may be incomplete,
/// so the verification passes reject the result.
pub fn cond_census_sampled(
    domain: usize,
    signature: &Signature,
    samples: usize,
    seed: u64,
) -> Result<CondOrderCensus> {
    let mut rng = rng_from_seed(seed);
    let mut canon = BTreeSet::new();
    for _ in 0..samples {
        let s = random_structure(&mut rng, signature, domain);
        canon.insert(canonical_form(&s)?);
    }
    let reps: Vec<Structure> = canon.into_iter().collect();
    let mut orbit_sizes = Vec::with_capacity(reps.len());
    for rep in &reps {
        orbit_sizes.push(iso_class(rep)?.len());
    }
    census_from_reps(domain, signature.clone(), reps, orbit_sizes, false)
}

fn rep_index(census: &CondOrderCensus) -> BTreeMap<&Structure, usize> {
    census.reps.iter().enumerate().map(|(i, r)| (r, i)).collect()
}

/// Checks, for every interpretation, that its mutual-relatedness class per
/// the stored matrix equals both its isomorphism orbit and the inclusion
/// interval hull of that orbit. Rejects sampled censuses.
pub fn verify_convexity(census: &CondOrderCensus) -> Result<bool> {
    if !census.complete {
        return Err(Error::SampledCensus);
    }
    let all = all_structures(&census.signature, census.domain)?;
    let index = rep_index(census);
    let mut idx_of = Vec::with_capacity(all.len());
    for s in &all {
        match index.get(&canonical_form(s)?) {
            Some(&i) => idx_of.push(i),
            None => return Ok(false),
        }
    }
    for (pos, s) in all.iter().enumerate() {
        let orbit: BTreeSet<Structure> = iso_class(s)?.into_iter().collect();
        let i = idx_of[pos];
        let mut class = BTreeSet::new();
        let mut hull = BTreeSet::new();
        for (tpos, t) in all.iter().enumerate() {
            let j = idx_of[tpos];
            if census.matrix[i][j] && census.matrix[j][i] {
                class.insert(t.clone());
            }
            let above = orbit.iter().any(|a| a.is_subinterpretation(t).unwrap());
            let below = orbit.iter().any(|b| t.is_subinterpretation(b).unwrap());
            if above && below {
                hull.insert(t.clone());
            }
        }
        if class != orbit || hull != orbit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks, class by class, that the members form an inclusion antichain
/// exactly when the representatives are reversible; the two sides are
/// computed independently. Rejects sampled censuses.
pub fn verify_antichain(census: &CondOrderCensus) -> Result<bool> {
    if !census.complete {
        return Err(Error::SampledCensus);
    }
    for class in &census.classes {
        let mut members = Vec::new();
        for &i in class {
            members.extend(iso_class(&census.reps[i])?);
        }
        members.sort();
        members.dedup();
        let antichain = is_inclusion_antichain(&members)?;
        let mut reversible = true;
        for &i in class {
            reversible &= is_reversible(&census.reps[i], DEFAULT_ORBIT_CAP)?;
        }
        if antichain != reversible {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The quotient order on classes as a DOT digraph of covering edges.
pub fn to_dot(census: &CondOrderCensus) -> String {
    let n = census.classes.len();
    let leq = |i: usize, j: usize| {
        census.matrix[census.classes[i][0]][census.classes[j][0]]
    };
    let mut out = String::from("digraph condensation_order {\n  rankdir=BT;\n");
    for (i, class) in census.classes.iter().enumerate() {
        let rep = &census.reps[class[0]];
        out.push_str(&format!(
            "  c{i} [label=\"c{i}: {} tuples, orbit {}\"];\n",
            rep.total_tuples(),
            census.orbit_sizes[class[0]]
        ));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq(i, j) || leq(j, i) {
                continue;
            }
            // covering edge: nothing strictly between
            let has_intermediate = (0..n).any(|k| {
                k != i && k != j && leq(i, k) && !leq(k, i) && leq(k, j) && !leq(j, k)
            });
            if !has_intermediate {
                out.push_str(&format!("  c{i} -> c{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}
