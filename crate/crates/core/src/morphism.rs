//! Morphisms between structures: homomorphisms, condensations (bijective
//! homomorphisms), embeddings (injective strong homomorphisms) and
//! isomorphisms, together with permutation orbits and the reversibility
//! predicates defined from them.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::{decode_tuple, enum_space, DomainMap, Structure};

/// Permutation orbits are n! work; refuse domains past this size unless the
/// caller raises the cap explicitly.
pub const DEFAULT_ORBIT_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismKind {
    /// Every related tuple maps to a related tuple.
    Homomorphism,
    /// Bijective homomorphism; the image may lose no tuples but gain some.
    Condensation,
    /// Injective and strong: related if and only if the image is related.
    Embedding,
    /// Bijective and strong.
    Isomorphism,
}

impl MorphismKind {
    fn injective(self) -> bool {
        !matches!(self, MorphismKind::Homomorphism)
    }

    fn bijective(self) -> bool {
        matches!(self, MorphismKind::Condensation | MorphismKind::Isomorphism)
    }

    fn strong(self) -> bool {
        matches!(self, MorphismKind::Embedding | MorphismKind::Isomorphism)
    }
}

fn check_signatures(a: &Structure, b: &Structure) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

/// Does `map` realize the given morphism kind from `a` to `b`?
pub fn is_morphism(a: &Structure, b: &Structure, map: &DomainMap, kind: MorphismKind) -> Result<bool> {
    check_signatures(a, b)?;
    if map.source_size() != a.domain() || map.target_size() != b.domain() {
        return Err(Error::BadMap);
    }
    if kind.bijective() && !map.is_bijective() {
        return Ok(false);
    }
    if kind.injective() && !map.is_injective() {
        return Ok(false);
    }
    for (rel, &arity) in a.signature().arities().iter().enumerate() {
        if kind.strong() {
            let space = enum_space(a.domain(), arity)?;
            for code in 0..space {
                let tuple = decode_tuple(code, arity, a.domain());
                let in_a = a.contains_code(rel, code);
                let in_b = b.contains_tuple(rel, &map.apply_tuple(&tuple));
                if in_a != in_b {
                    return Ok(false);
                }
            }
        } else {
            for &code in a.relation_codes(rel) {
                let tuple = decode_tuple(code, arity, a.domain());
                if !b.contains_tuple(rel, &map.apply_tuple(&tuple)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

struct MorphismSearch<'s> {
    b: &'s Structure,
    source_size: usize,
    target_size: usize,
    /// Per source vertex v: (relation, tuple, membership in a) for each tuple
    /// whose maximum coordinate is v. Non-strong kinds only keep members.
    by_max: Vec<Vec<(usize, Vec<usize>, bool)>>,
    injective: bool,
    strong: bool,
    limit: usize,
    values: Vec<usize>,
    used: Vec<bool>,
    found: Vec<DomainMap>,
}

impl MorphismSearch<'_> {
    fn run(&mut self) {
        self.dfs(0);
    }

    fn dfs(&mut self, v: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if v == self.source_size {
            let map = DomainMap::new(self.source_size, self.target_size, self.values.clone())
                .expect("search assigns valid targets");
            self.found.push(map);
            return;
        }
        for t in 0..self.target_size {
            if self.injective && self.used[t] {
                continue;
            }
            self.values[v] = t;
            if self.consistent_at(v) {
                self.used[t] = true;
                self.dfs(v + 1);
                self.used[t] = false;
            }
            if self.found.len() >= self.limit {
                return;
            }
        }
    }

    fn consistent_at(&self, v: usize) -> bool {
        for (rel, tuple, in_a) in &self.by_max[v] {
            let image: Vec<usize> = tuple.iter().map(|&x| self.values[x]).collect();
            let in_b = self.b.contains_tuple(*rel, &image);
            if self.strong {
                if in_b != *in_a {
                    return false;
                }
            } else if *in_a && !in_b {
                return false;
            }
        }
        true
    }
}

/// All morphisms of the given kind from `a` to `b`, in lexicographic order of
/// their value vectors, up to `limit` if one is given.
pub fn enumerate_morphisms(
    a: &Structure,
    b: &Structure,
    kind: MorphismKind,
    limit: Option<usize>,
) -> Result<Vec<DomainMap>> {
    check_signatures(a, b)?;
    let n = a.domain();
    let m = b.domain();
    if kind.bijective() && n != m {
        return Ok(Vec::new());
    }
    if kind.injective() && n > m {
        return Ok(Vec::new());
    }
    let mut by_max: Vec<Vec<(usize, Vec<usize>, bool)>> = vec![Vec::new(); n];
    for (rel, &arity) in a.signature().arities().iter().enumerate() {
        if kind.strong() {
            let space = enum_space(n, arity)?;
            for code in 0..space {
                let tuple = decode_tuple(code, arity, n);
                let top = *tuple.iter().max().expect("arity >= 1");
                by_max[top].push((rel, tuple, a.contains_code(rel, code)));
            }
        } else {
            for &code in a.relation_codes(rel) {
                let tuple = decode_tuple(code, arity, n);
                let top = *tuple.iter().max().expect("arity >= 1");
                by_max[top].push((rel, tuple, true));
            }
        }
    }
    let mut search = MorphismSearch {
        b,
        source_size: n,
        target_size: m,
        by_max,
        injective: kind.injective(),
        strong: kind.strong(),
        limit: limit.unwrap_or(usize::MAX),
        values: vec![0; n],
        used: vec![false; m],
        found: Vec::new(),
    };
    search.run();
    Ok(search.found)
}

/// First morphism of the given kind in lexicographic order, if any.
pub fn find_morphism(a: &Structure, b: &Structure, kind: MorphismKind) -> Result<Option<DomainMap>> {
    Ok(enumerate_morphisms(a, b, kind, Some(1))?.pop())
}

/// Does `pattern` occur in `host` as an induced substructure?
pub fn embeds(pattern: &Structure, host: &Structure) -> Result<bool> {
    Ok(find_morphism(pattern, host, MorphismKind::Embedding)?.is_some())
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    check_signatures(a, b)?;
    if a.domain() != b.domain() {
        return Ok(false);
    }
    for rel in 0..a.signature().len() {
        if a.relation_len(rel) != b.relation_len(rel) {
            return Ok(false);
        }
    }
    Ok(find_morphism(a, b, MorphismKind::Isomorphism)?.is_some())
}

/// Is there a bijection carrying every tuple of `a` into `b`? Quick
/// cardinality pruning, then a condensation search.
pub fn exists_condensation_into(a: &Structure, b: &Structure) -> Result<bool> {
    check_signatures(a, b)?;
    if a.domain() != b.domain() {
        return Ok(false);
    }
    for rel in 0..a.signature().len() {
        if a.relation_len(rel) > b.relation_len(rel) {
            return Ok(false);
        }
    }
    Ok(find_morphism(a, b, MorphismKind::Condensation)?.is_some())
}

/// The isomorphism class of `s` within its own domain: all distinct images
/// under domain permutations, sorted.
pub fn iso_class_capped(s: &Structure, cap: usize) -> Result<Vec<Structure>> {
    let n = s.domain();
    if n > cap {
        return Err(Error::OrbitCapExceeded { domain: n, cap });
    }
    let mut orbit = BTreeSet::new();
    for perm in (0..n).permutations(n) {
        let f = DomainMap::new(n, n, perm)?;
        orbit.insert(s.direct_image(&f)?);
    }
    Ok(orbit.into_iter().collect())
}

pub fn iso_class(s: &Structure) -> Result<Vec<Structure>> {
    iso_class_capped(s, DEFAULT_ORBIT_CAP)
}

/// Least permutation image of `s`; equal for isomorphic structures on the
/// same domain, so it serves as a canonical representative.
pub fn canonical_form_capped(s: &Structure, cap: usize) -> Result<Structure> {
    let n = s.domain();
    if n > cap {
        return Err(Error::OrbitCapExceeded { domain: n, cap });
    }
    let mut best: Option<Structure> = None;
    for perm in (0..n).permutations(n) {
        let f = DomainMap::new(n, n, perm)?;
        let image = s.direct_image(&f)?;
        if best.as_ref().map_or(true, |current| image < *current) {
            best = Some(image);
        }
    }
    Ok(best.expect("at least the identity permutation"))
}

pub fn canonical_form(s: &Structure) -> Result<Structure> {
    canonical_form_capped(s, DEFAULT_ORBIT_CAP)
}

/// No permutation image of `s` is a proper subinterpretation of `s`;
/// equivalently, the orbit of `s` is an inclusion antichain.
pub fn is_reversible(s: &Structure, cap: usize) -> Result<bool> {
    let n = s.domain();
    if n > cap {
        return Err(Error::OrbitCapExceeded { domain: n, cap });
    }
    for perm in (0..n).permutations(n) {
        let f = DomainMap::new(n, n, perm)?;
        if s.direct_image(&f)?.is_proper_subinterpretation(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The orbit of `s` is a singleton: every permutation fixes `s` setwise.
pub fn is_strongly_reversible(s: &Structure, cap: usize) -> Result<bool> {
    Ok(iso_class_capped(s, cap)?.len() == 1)
}

/// The orbit of `s` is convex: whenever two orbit members are nested, every
/// structure between them also lies in the orbit.
pub fn is_weakly_reversible(s: &Structure, cap: usize) -> Result<bool> {
    let orbit = iso_class_capped(s, cap)?;
    let orbit_set: BTreeSet<Structure> = orbit.iter().cloned().collect();
    for lo in &orbit {
        for hi in &orbit {
            if !lo.is_subinterpretation(hi)? {
                continue;
            }
            let mut diff: Vec<(usize, u64)> = Vec::new();
            for rel in 0..lo.signature().len() {
                for &code in hi.relation_codes(rel) {
                    if !lo.contains_code(rel, code) {
                        diff.push((rel, code));
                    }
                }
            }
            if diff.len() > 20 {
                return Err(Error::Precondition(format!(
                    "orbit interval spans 2^{} structures, too many to check",
                    diff.len()
                )));
            }
            for mask in 0u64..(1u64 << diff.len()) {
                let mut mid = lo.clone();
                for (bit, &(rel, code)) in diff.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        mid.insert_code(rel, code);
                    }
                }
                if !orbit_set.contains(&mid) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// No member of the family properly contains another.
pub fn is_inclusion_antichain(family: &[Structure]) -> Result<bool> {
    for x in family {
        for y in family {
            if x.is_proper_subinterpretation(y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let mut pairs = Vec::new();
        for &(x, y) in edges {
            pairs.push((x, y));
            pairs.push((y, x));
        }
        Structure::from_binary_pairs(n, &pairs).unwrap()
    }

    fn complete(n: usize) -> Structure {
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    pairs.push((x, y));
                }
            }
        }
        Structure::from_binary_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn hom_counts_on_small_graphs() {
        let k2 = complete(2);
        let k3 = complete(3);
        let homs = enumerate_morphisms(&k2, &k2, MorphismKind::Homomorphism, None).unwrap();
        assert_eq!(homs.len(), 2);
        assert_eq!(homs[0].values(), &[0, 1]);
        assert_eq!(homs[1].values(), &[1, 0]);
        // no proper 2-coloring of a triangle
        assert!(enumerate_morphisms(&k3, &k2, MorphismKind::Homomorphism, None)
            .unwrap()
            .is_empty());
        assert_eq!(
            enumerate_morphisms(&k2, &k3, MorphismKind::Embedding, None).unwrap().len(),
            6
        );
        assert_eq!(
            enumerate_morphisms(&k3, &k3, MorphismKind::Isomorphism, None).unwrap().len(),
            6
        );
    }

    #[test]
    fn collapse_is_a_hom_but_not_strong() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let k2 = complete(2);
        let fold = DomainMap::new(3, 2, vec![0, 1, 0]).unwrap();
        assert!(is_morphism(&p3, &k2, &fold, MorphismKind::Homomorphism).unwrap());
        assert!(!is_morphism(&p3, &k2, &fold, MorphismKind::Embedding).unwrap());
    }

    #[test]
    fn embedding_is_induced() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let k2 = complete(2);
        let e2 = Structure::empty(Signature::binary(), 2).unwrap();
        assert!(embeds(&k2, &p3).unwrap());
        // vertices 0 and 2 are non-adjacent, so the edgeless pair occurs
        assert!(embeds(&e2, &p3).unwrap());
        // but not in a complete graph: embeddings respect non-edges
        assert!(!embeds(&e2, &complete(3)).unwrap());
        assert!(!embeds(&complete(3), &p3).unwrap());
    }

    #[test]
    fn condensation_can_add_but_not_drop_tuples() {
        let arrow = Structure::from_binary_pairs(2, &[(0, 1)]).unwrap();
        let both = Structure::from_binary_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(exists_condensation_into(&arrow, &both).unwrap());
        assert!(!exists_condensation_into(&both, &arrow).unwrap());
        let swap = DomainMap::new(2, 2, vec![1, 0]).unwrap();
        assert!(is_morphism(&arrow, &both, &swap, MorphismKind::Condensation).unwrap());
        assert!(!is_morphism(&arrow, &both, &swap, MorphismKind::Isomorphism).unwrap());
    }

    #[test]
    fn orbit_and_canonical_form() {
        let arrow = Structure::from_binary_pairs(2, &[(0, 1)]).unwrap();
        let orbit = iso_class(&arrow).unwrap();
        assert_eq!(orbit.len(), 2);
        assert_eq!(canonical_form(&arrow).unwrap(), arrow);
        let reversed = Structure::from_binary_pairs(2, &[(1, 0)]).unwrap();
        assert_eq!(canonical_form(&reversed).unwrap(), arrow);
        assert!(is_isomorphic(&arrow, &reversed).unwrap());
        assert!(!is_isomorphic(&arrow, &both_dirs()).unwrap());
    }

    fn both_dirs() -> Structure {
        Structure::from_binary_pairs(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn reversibility_flavors() {
        let diag = Structure::from_binary_pairs(2, &[(0, 0), (1, 1)]).unwrap();
        assert!(is_strongly_reversible(&diag, 8).unwrap());
        let arrow = Structure::from_binary_pairs(2, &[(0, 1)]).unwrap();
        assert!(!is_strongly_reversible(&arrow, 8).unwrap());
        assert!(is_reversible(&arrow, 8).unwrap());
        assert!(is_weakly_reversible(&arrow, 8).unwrap());
        assert!(is_reversible(&diag, 8).unwrap());
        let too_big = Structure::empty(Signature::binary(), 9).unwrap();
        assert!(matches!(
            is_reversible(&too_big, 8),
            Err(Error::OrbitCapExceeded { .. })
        ));
    }

    #[test]
    fn antichain_detects_nesting() {
        let arrow = Structure::from_binary_pairs(2, &[(0, 1)]).unwrap();
        let orbit = iso_class(&arrow).unwrap();
        assert!(is_inclusion_antichain(&orbit).unwrap());
        let nested = vec![arrow.clone(), both_dirs()];
        assert!(!is_inclusion_antichain(&nested).unwrap());
    }

    fn arb_structure() -> impl Strategy<Value = Structure> {
        (prop::sample::select(vec![vec![2], vec![1, 2]]), 1usize..=3)
            .prop_flat_map(|(sig, n)| {
                let spaces: Vec<u64> = sig.iter().map(|&k| (n as u64).pow(k as u32)).collect();
                let total: usize = spaces.iter().map(|&s| s as usize).sum();
                (Just(sig), Just(n), Just(spaces), prop::collection::vec(prop::bool::ANY, total))
            })
            .prop_map(|(sig, n, spaces, bits)| {
                let mut relations = Vec::new();
                let mut idx = 0;
                for &space in &spaces {
                    let mut codes = Vec::new();
                    for c in 0..space {
                        if bits[idx] {
                            codes.push(c);
                        }
                        idx += 1;
                    }
                    relations.push(codes);
                }
                Structure::from_codes(Signature::new(sig).unwrap(), n, relations).unwrap()
            })
    }

    proptest! {
        #[test]
        fn enumerated_morphisms_check_out(s in arb_structure(), t in arb_structure()) {
            prop_assume!(s.signature() == t.signature());
            for kind in [
                MorphismKind::Homomorphism,
                MorphismKind::Condensation,
                MorphismKind::Embedding,
                MorphismKind::Isomorphism,
            ] {
                let found = enumerate_morphisms(&s, &t, kind, Some(8)).unwrap();
                for f in &found {
                    prop_assert!(is_morphism(&s, &t, f, kind).unwrap());
                }
            }
        }

        #[test]
        fn homs_compose(s in arb_structure()) {
            let homs = enumerate_morphisms(&s, &s, MorphismKind::Homomorphism, Some(6)).unwrap();
            for f in &homs {
                for g in &homs {
                    let fg = f.then(g).unwrap();
                    prop_assert!(is_morphism(&s, &s, &fg, MorphismKind::Homomorphism).unwrap());
                }
            }
        }

        #[test]
        fn finite_structures_are_reversible(s in arb_structure()) {
            prop_assert!(is_reversible(&s, 8).unwrap());
            prop_assert!(is_weakly_reversible(&s, 8).unwrap());
            let orbit = iso_class(&s).unwrap();
            prop_assert!(is_inclusion_antichain(&orbit).unwrap());
            prop_assert_eq!(is_strongly_reversible(&s, 8).unwrap(), orbit.len() == 1);
        }

        #[test]
        fn canonical_form_is_orbit_invariant(s in arb_structure()) {
            let canon = canonical_form(&s).unwrap();
            for member in iso_class(&s).unwrap() {
                prop_assert_eq!(canonical_form(&member).unwrap(), canon.clone());
                prop_assert!(is_isomorphic(&member, &s).unwrap());
            }
        }
    }
}
