//! Finite relational structures over a fixed signature, plus maps between
//! their domains and the pointwise image operations those maps induce.
//!
//! Relations are stored as sorted vectors of tuple codes. A tuple is encoded
//! big-endian in mixed radix `domain`, so code order coincides with
//! lexicographic tuple order and serialized files come out sorted for free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on how many tuples an operation may enumerate when it has to walk
/// an entire tuple space (complements, inverse images, full structures).
pub const MAX_ENUM: u64 = 1 << 24;

/// List of relation arities. Always non-empty, every arity at least 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        if arities.is_empty() || arities.iter().any(|&a| a == 0) {
            return Err(Error::BadSignature);
        }
        Ok(Signature(arities))
    }

    /// The one-symbol binary signature used for graphs and orders.
    pub fn binary() -> Self {
        Signature(vec![2])
    }

    pub fn arities(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn arity(&self, rel: usize) -> Result<usize> {
        self.0.get(rel).copied().ok_or(Error::UnknownRelation(rel))
    }
}

impl TryFrom<Vec<usize>> for Signature {
    type Error = Error;
    fn try_from(arities: Vec<usize>) -> Result<Self> {
        Signature::new(arities)
    }
}

impl From<Signature> for Vec<usize> {
    fn from(sig: Signature) -> Vec<usize> {
        sig.0
    }
}

/// Big-endian mixed-radix code of a tuple over the given domain size.
pub fn encode_tuple(tuple: &[usize], domain: usize) -> u64 {
    let mut code = 0u64;
    for &t in tuple {
        code = code * domain as u64 + t as u64;
    }
    code
}

pub fn decode_tuple(mut code: u64, arity: usize, domain: usize) -> Vec<usize> {
    let mut out = vec![0usize; arity];
    for slot in out.iter_mut().rev() {
        *slot = (code % domain as u64) as usize;
        code /= domain as u64;
    }
    out
}

/// Number of tuples of the given arity over the domain, if it fits in u64.
pub fn space_size(domain: usize, arity: usize) -> Option<u64> {
    (domain as u64).checked_pow(arity as u32)
}

/// Like `space_size`, but errors when the space is too large to enumerate.
pub fn enum_space(domain: usize, arity: usize) -> Result<u64> {
    match space_size(domain, arity) {
        Some(space) if space <= MAX_ENUM => Ok(space),
        _ => Err(Error::RelationTooLarge { arity, domain }),
    }
}

/// A finite relational structure: a domain `{0, .., domain-1}` and one
/// relation per signature symbol. Comparison and ordering are derived from
/// the sorted code vectors, so `Ord` gives a deterministic total order that,
/// for a fixed signature and domain, is lexicographic in the relations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureFile", into = "StructureFile")]
pub struct Structure {
    signature: Signature,
    domain: usize,
    relations: Vec<Vec<u64>>,
}

fn check_repr(signature: &Signature, domain: usize) -> Result<()> {
    if domain == 0 {
        return Err(Error::EmptyDomain);
    }
    for &arity in signature.arities() {
        if space_size(domain, arity).is_none() {
            return Err(Error::RelationTooLarge { arity, domain });
        }
    }
    Ok(())
}

impl Structure {
    pub fn new(
        signature: Signature,
        domain: usize,
        relations: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        check_repr(&signature, domain)?;
        if relations.len() != signature.len() {
            return Err(Error::SignatureMismatch);
        }
        let mut encoded = Vec::with_capacity(relations.len());
        for (rel, tuples) in relations.into_iter().enumerate() {
            let arity = signature.arities()[rel];
            let mut codes = Vec::with_capacity(tuples.len());
            for tuple in tuples {
                if tuple.len() != arity || tuple.iter().any(|&t| t >= domain) {
                    return Err(Error::BadTuple {
                        rel,
                        tuple,
                        arity,
                        domain,
                    });
                }
                codes.push(encode_tuple(&tuple, domain));
            }
            codes.sort_unstable();
            codes.dedup();
            encoded.push(codes);
        }
        Ok(Structure {
            signature,
            domain,
            relations: encoded,
        })
    }

    /// Construct from pre-encoded tuple codes; sorts and dedups.
    pub fn from_codes(
        signature: Signature,
        domain: usize,
        relations: Vec<Vec<u64>>,
    ) -> Result<Self> {
        check_repr(&signature, domain)?;
        if relations.len() != signature.len() {
            return Err(Error::SignatureMismatch);
        }
        let mut out = Vec::with_capacity(relations.len());
        for (rel, mut codes) in relations.into_iter().enumerate() {
            let arity = signature.arities()[rel];
            let space = space_size(domain, arity).expect("checked above");
            if codes.iter().any(|&c| c >= space) {
                return Err(Error::Precondition(format!(
                    "relation R{rel}: tuple code out of range"
                )));
            }
            codes.sort_unstable();
            codes.dedup();
            out.push(codes);
        }
        Ok(Structure {
            signature,
            domain,
            relations: out,
        })
    }

    /// Structure with every relation empty.
    pub fn empty(signature: Signature, domain: usize) -> Result<Self> {
        let symbols = signature.len();
        Self::from_codes(signature, domain, vec![Vec::new(); symbols])
    }

    /// Structure with every relation full.
    pub fn full(signature: Signature, domain: usize) -> Result<Self> {
        let mut relations = Vec::with_capacity(signature.len());
        for &arity in signature.arities() {
            let space = enum_space(domain, arity)?;
            relations.push((0..space).collect());
        }
        Self::from_codes(signature, domain, relations)
    }

    /// Single binary symbol structure from (x, y) pairs.
    pub fn from_binary_pairs(domain: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            Signature::binary(),
            domain,
            vec![pairs.iter().map(|&(x, y)| vec![x, y]).collect()],
        )
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn relation_codes(&self, rel: usize) -> &[u64] {
        &self.relations[rel]
    }

    pub fn relation_len(&self, rel: usize) -> usize {
        self.relations[rel].len()
    }

    pub fn total_tuples(&self) -> usize {
        self.relations.iter().map(Vec::len).sum()
    }

    pub fn relation_tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let arity = self.signature.arities()[rel];
        self.relations[rel]
            .iter()
            .map(|&c| decode_tuple(c, arity, self.domain))
            .collect()
    }

    pub fn contains_code(&self, rel: usize, code: u64) -> bool {
        self.relations[rel].binary_search(&code).is_ok()
    }

    pub fn contains_tuple(&self, rel: usize, tuple: &[usize]) -> bool {
        self.contains_code(rel, encode_tuple(tuple, self.domain))
    }

    /// Insert a code, keeping the relation sorted. Returns false if present.
    pub fn insert_code(&mut self, rel: usize, code: u64) -> bool {
        debug_assert!(code < space_size(self.domain, self.signature.arities()[rel]).unwrap());
        match self.relations[rel].binary_search(&code) {
            Ok(_) => false,
            Err(pos) => {
                self.relations[rel].insert(pos, code);
                true
            }
        }
    }

    /// Remove a code. Returns false if it was absent.
    pub fn remove_code(&mut self, rel: usize, code: u64) -> bool {
        match self.relations[rel].binary_search(&code) {
            Ok(pos) => {
                self.relations[rel].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn with_code(&self, rel: usize, code: u64) -> Structure {
        let mut out = self.clone();
        out.insert_code(rel, code);
        out
    }

    pub fn without_code(&self, rel: usize, code: u64) -> Structure {
        let mut out = self.clone();
        out.remove_code(rel, code);
        out
    }

    fn check_compatible(&self, other: &Structure) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                left: self.domain,
                right: other.domain,
            });
        }
        Ok(())
    }

    /// Componentwise inclusion of relations; same signature and domain.
    pub fn is_subinterpretation(&self, other: &Structure) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self
            .relations
            .iter()
            .zip(&other.relations)
            .all(|(a, b)| is_sorted_subset(a, b)))
    }

    pub fn is_proper_subinterpretation(&self, other: &Structure) -> Result<bool> {
        Ok(self.is_subinterpretation(other)? && self.relations != other.relations)
    }

    /// Componentwise set complement within each tuple space.
    pub fn complement(&self) -> Result<Structure> {
        let mut relations = Vec::with_capacity(self.relations.len());
        for (rel, &arity) in self.signature.arities().iter().enumerate() {
            let space = enum_space(self.domain, arity)?;
            relations.push(complement_codes(&self.relations[rel], space));
        }
        Structure::from_codes(self.signature.clone(), self.domain, relations)
    }

    /// Componentwise union over a non-empty family with a shared signature
    /// and domain.
    pub fn union(family: &[Structure]) -> Result<Structure> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        let mut acc = first.clone();
        for s in &family[1..] {
            first.check_compatible(s)?;
            for (rel, codes) in s.relations.iter().enumerate() {
                acc.relations[rel].extend_from_slice(codes);
            }
        }
        for codes in &mut acc.relations {
            codes.sort_unstable();
            codes.dedup();
        }
        Ok(acc)
    }

    /// Componentwise intersection over a non-empty family.
    pub fn intersection(family: &[Structure]) -> Result<Structure> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        let mut acc = first.clone();
        for s in &family[1..] {
            first.check_compatible(s)?;
            for (rel, codes) in acc.relations.iter_mut().enumerate() {
                codes.retain(|&c| s.contains_code(rel, c));
            }
        }
        Ok(acc)
    }

    /// One binary symbol, irreflexive and symmetric.
    pub fn is_graph(&self) -> bool {
        self.signature.arities() == [2]
            && self.is_irreflexive_rel(0).unwrap_or(false)
            && self.is_symmetric_rel(0).unwrap_or(false)
    }

    /// Complement within the off-diagonal pairs; graphs only.
    pub fn graph_complement(&self) -> Result<Structure> {
        if !self.is_graph() {
            return Err(Error::NotAGraph);
        }
        enum_space(self.domain, 2)?;
        let mut pairs = Vec::new();
        for x in 0..self.domain {
            for y in 0..self.domain {
                if x != y && !self.contains_tuple(0, &[x, y]) {
                    pairs.push((x, y));
                }
            }
        }
        Structure::from_binary_pairs(self.domain, &pairs)
    }

    /// The substructure induced on the given distinct vertices, re-indexed
    /// to 0..k in the order given.
    pub fn induced_substructure(&self, vertices: &[usize]) -> Result<Structure> {
        let mut index = vec![None; self.domain];
        for (new, &old) in vertices.iter().enumerate() {
            if old >= self.domain || index[old].is_some() {
                return Err(Error::Precondition(format!(
                    "vertex list must be distinct and within the domain, got {vertices:?}"
                )));
            }
            index[old] = Some(new);
        }
        let mut relations = Vec::with_capacity(self.signature.len());
        for (rel, &arity) in self.signature.arities().iter().enumerate() {
            let mut tuples = Vec::new();
            for &code in &self.relations[rel] {
                let t = decode_tuple(code, arity, self.domain);
                if let Some(mapped) = t
                    .iter()
                    .map(|&x| index[x])
                    .collect::<Option<Vec<usize>>>()
                {
                    tuples.push(mapped);
                }
            }
            relations.push(tuples);
        }
        Structure::new(self.signature.clone(), vertices.len(), relations)
    }

    /// Adds the transpose of every pair in every binary symbol.
    pub fn symmetric_closure(&self) -> Structure {
        let mut out = self.clone();
        for (rel, &arity) in self.signature.arities().iter().enumerate() {
            if arity != 2 {
                continue;
            }
            for &code in &self.relations[rel] {
                let t = decode_tuple(code, 2, self.domain);
                let twin = encode_tuple(&[t[1], t[0]], self.domain);
                out.insert_code(rel, twin);
            }
        }
        out
    }

    fn require_binary(&self, rel: usize) -> Result<()> {
        if self.signature.arity(rel)? != 2 {
            return Err(Error::Precondition(format!("relation R{rel} is not binary")));
        }
        Ok(())
    }

    pub fn is_irreflexive_rel(&self, rel: usize) -> Result<bool> {
        self.require_binary(rel)?;
        Ok((0..self.domain).all(|x| !self.contains_tuple(rel, &[x, x])))
    }

    pub fn is_reflexive_rel(&self, rel: usize) -> Result<bool> {
        self.require_binary(rel)?;
        Ok((0..self.domain).all(|x| self.contains_tuple(rel, &[x, x])))
    }

    pub fn is_symmetric_rel(&self, rel: usize) -> Result<bool> {
        self.require_binary(rel)?;
        Ok(self.relations[rel].iter().all(|&code| {
            let t = decode_tuple(code, 2, self.domain);
            self.contains_tuple(rel, &[t[1], t[0]])
        }))
    }

    pub fn is_transitive_rel(&self, rel: usize) -> Result<bool> {
        self.require_binary(rel)?;
        let codes = &self.relations[rel];
        for &c1 in codes {
            let a = decode_tuple(c1, 2, self.domain);
            // pairs with first coordinate a[1] form a contiguous code range
            let lo = encode_tuple(&[a[1], 0], self.domain);
            let hi = lo + self.domain as u64;
            let start = codes.partition_point(|&c| c < lo);
            for &c2 in &codes[start..] {
                if c2 >= hi {
                    break;
                }
                let b = decode_tuple(c2, 2, self.domain);
                if !self.contains_tuple(rel, &[a[0], b[1]]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Connectivity of the symmetrized off-diagonal relation.
    pub fn is_connected_rel(&self, rel: usize) -> Result<bool> {
        self.require_binary(rel)?;
        let n = self.domain;
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &code in &self.relations[rel] {
            let t = decode_tuple(code, 2, n);
            if t[0] != t[1] {
                adjacency[t[0]].push(t[1]);
                adjacency[t[1]].push(t[0]);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        Ok(reached == n)
    }

    pub fn out_degree(&self, rel: usize, v: usize) -> Result<usize> {
        self.require_binary(rel)?;
        let lo = encode_tuple(&[v, 0], self.domain);
        let hi = lo + self.domain as u64;
        let codes = &self.relations[rel];
        let start = codes.partition_point(|&c| c < lo);
        let end = codes.partition_point(|&c| c < hi);
        Ok(end - start)
    }

    /// Neighbor count in either direction, ignoring any loop at `v`; the
    /// degree notion used for graph degree bounds.
    pub fn degree(&self, rel: usize, v: usize) -> Result<usize> {
        self.require_binary(rel)?;
        let mut degree = 0;
        for w in 0..self.domain {
            if w != v && (self.contains_tuple(rel, &[v, w]) || self.contains_tuple(rel, &[w, v])) {
                degree += 1;
            }
        }
        Ok(degree)
    }

    /// Pointwise image: every tuple of every relation pushed through `map`.
    pub fn direct_image(&self, map: &DomainMap) -> Result<Structure> {
        if map.source_size() != self.domain {
            return Err(Error::DomainMismatch {
                left: map.source_size(),
                right: self.domain,
            });
        }
        let target = map.target_size();
        check_repr(&self.signature, target)?;
        let mut relations = Vec::with_capacity(self.relations.len());
        for (rel, &arity) in self.signature.arities().iter().enumerate() {
            let mut codes: Vec<u64> = self.relations[rel]
                .iter()
                .map(|&c| {
                    let tuple = decode_tuple(c, arity, self.domain);
                    encode_tuple(&map.apply_tuple(&tuple), target)
                })
                .collect();
            codes.sort_unstable();
            codes.dedup();
            relations.push(codes);
        }
        Structure::from_codes(self.signature.clone(), target, relations)
    }

    /// Preimage: all source tuples whose image lands in each relation.
    pub fn inverse_image(&self, map: &DomainMap) -> Result<Structure> {
        if map.target_size() != self.domain {
            return Err(Error::DomainMismatch {
                left: map.target_size(),
                right: self.domain,
            });
        }
        let source = map.source_size();
        if source == 0 {
            return Err(Error::EmptyDomain);
        }
        let mut relations = Vec::with_capacity(self.relations.len());
        for (rel, &arity) in self.signature.arities().iter().enumerate() {
            let space = enum_space(source, arity)?;
            let mut codes = Vec::new();
            for c in 0..space {
                let tuple = decode_tuple(c, arity, source);
                if self.contains_tuple(rel, &map.apply_tuple(&tuple)) {
                    codes.push(c);
                }
            }
            relations.push(codes);
        }
        Structure::from_codes(self.signature.clone(), source, relations)
    }

    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("structure serializes");
        text.push('\n');
        text
    }

    pub fn from_json_str(text: &str) -> Result<Structure> {
        Ok(serde_json::from_str(text)?)
    }
}

fn is_sorted_subset(a: &[u64], b: &[u64]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut i = 0;
    for &x in a {
        while i < b.len() && b[i] < x {
            i += 1;
        }
        if i == b.len() || b[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

fn complement_codes(codes: &[u64], space: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity((space as usize).saturating_sub(codes.len()));
    let mut present = codes.iter().copied().peekable();
    for c in 0..space {
        match present.peek() {
            Some(&x) if x == c => {
                present.next();
            }
            _ => out.push(c),
        }
    }
    out
}

/// On-disk form: relations as explicit tuple lists, sorted lexicographically.
#[derive(Serialize, Deserialize)]
struct StructureFile {
    signature: Vec<usize>,
    domain: usize,
    relations: Vec<Vec<Vec<usize>>>,
}

impl TryFrom<StructureFile> for Structure {
    type Error = Error;
    fn try_from(file: StructureFile) -> Result<Structure> {
        Structure::new(Signature::new(file.signature)?, file.domain, file.relations)
    }
}

impl From<Structure> for StructureFile {
    fn from(s: Structure) -> StructureFile {
        StructureFile {
            signature: s.signature.arities().to_vec(),
            domain: s.domain,
            relations: (0..s.signature.len()).map(|i| s.relation_tuples(i)).collect(),
        }
    }
}

/// A total map between two initial-segment domains.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainMap {
    source_size: usize,
    target_size: usize,
    values: Vec<usize>,
}

impl DomainMap {
    pub fn new(source_size: usize, target_size: usize, values: Vec<usize>) -> Result<Self> {
        if source_size == 0 || target_size == 0 {
            return Err(Error::EmptyDomain);
        }
        if values.len() != source_size || values.iter().any(|&v| v >= target_size) {
            return Err(Error::BadMap);
        }
        Ok(DomainMap {
            source_size,
            target_size,
            values,
        })
    }

    pub fn from_values(target_size: usize, values: Vec<usize>) -> Result<Self> {
        let source_size = values.len();
        Self::new(source_size, target_size, values)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, n, (0..n).collect())
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&t| self.values[t]).collect()
    }

    /// Composition `g` after `self`: x maps to g(self(x)).
    pub fn then(&self, g: &DomainMap) -> Result<DomainMap> {
        if self.target_size != g.source_size {
            return Err(Error::BadMap);
        }
        DomainMap::new(
            self.source_size,
            g.target_size,
            self.values.iter().map(|&v| g.values[v]).collect(),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        for &v in &self.values {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        for &v in &self.values {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_size == self.target_size && self.is_injective()
    }

    pub fn inverse(&self) -> Option<DomainMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut values = vec![0usize; self.source_size];
        for (x, &v) in self.values.iter().enumerate() {
            values[v] = x;
        }
        Some(DomainMap {
            source_size: self.target_size,
            target_size: self.source_size,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let mut pairs = Vec::new();
        for &(x, y) in edges {
            pairs.push((x, y));
            pairs.push((y, x));
        }
        Structure::from_binary_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn signature_rejects_empty_and_zero_arity() {
        assert!(Signature::new(vec![]).is_err());
        assert!(Signature::new(vec![2, 0]).is_err());
        assert!(Signature::new(vec![1, 2, 3]).is_ok());
    }

    #[test]
    fn codes_follow_lex_order() {
        assert_eq!(encode_tuple(&[0, 0], 3), 0);
        assert_eq!(encode_tuple(&[1, 2], 3), 5);
        assert_eq!(encode_tuple(&[2, 1], 3), 7);
        assert_eq!(decode_tuple(5, 2, 3), vec![1, 2]);
        assert_eq!(decode_tuple(7, 2, 3), vec![2, 1]);
        // lex order on tuples equals numeric order on codes
        let mut all: Vec<Vec<usize>> = (0..9u64).map(|c| decode_tuple(c, 2, 3)).collect();
        let sorted = all.clone();
        all.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn new_rejects_bad_tuples() {
        let sig = Signature::binary();
        assert!(Structure::new(sig.clone(), 2, vec![vec![vec![0, 1, 0]]]).is_err());
        assert!(Structure::new(sig.clone(), 2, vec![vec![vec![0, 2]]]).is_err());
        assert!(Structure::new(sig, 0, vec![vec![]]).is_err());
    }

    #[test]
    fn json_matches_expected_layout() {
        let s = Structure::new(
            Signature::new(vec![2]).unwrap(),
            3,
            vec![vec![vec![1, 2], vec![0, 1]]],
        )
        .unwrap();
        let text = s.to_json_string();
        let expected = "{\n  \"signature\": [\n    2\n  ],\n  \"domain\": 3,\n  \"relations\": [\n    [\n      [\n        0,\n        1\n      ],\n      [\n        1,\n        2\n      ]\n    ]\n  ]\n}\n";
        assert_eq!(text, expected);
        assert_eq!(Structure::from_json_str(&text).unwrap(), s);
    }

    #[test]
    fn complement_of_diagonal() {
        let diag = Structure::new(
            Signature::binary(),
            2,
            vec![vec![vec![0, 0], vec![1, 1]]],
        )
        .unwrap();
        let comp = diag.complement().unwrap();
        assert_eq!(comp.relation_tuples(0), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(comp.complement().unwrap(), diag);
    }

    #[test]
    fn graph_complement_of_path() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let comp = p3.graph_complement().unwrap();
        assert_eq!(comp, graph(3, &[(0, 2)]));
        let with_loop = Structure::from_binary_pairs(2, &[(0, 0)]).unwrap();
        assert!(with_loop.graph_complement().is_err());
    }

    #[test]
    fn union_and_intersection_are_componentwise() {
        let a = Structure::from_binary_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Structure::from_binary_pairs(3, &[(1, 2), (2, 0)]).unwrap();
        let u = Structure::union(&[a.clone(), b.clone()]).unwrap();
        let i = Structure::intersection(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(u, Structure::from_binary_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap());
        assert_eq!(i, Structure::from_binary_pairs(3, &[(1, 2)]).unwrap());
        assert!(Structure::union(&[]).is_err());
        let wrong_domain = Structure::from_binary_pairs(2, &[]).unwrap();
        assert!(Structure::union(&[a, wrong_domain]).is_err());
    }

    #[test]
    fn subinterpretation_checks() {
        let small = Structure::from_binary_pairs(3, &[(0, 1)]).unwrap();
        let big = Structure::from_binary_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(small.is_subinterpretation(&big).unwrap());
        assert!(!big.is_subinterpretation(&small).unwrap());
        assert!(small.is_proper_subinterpretation(&big).unwrap());
        assert!(!small.is_proper_subinterpretation(&small.clone()).unwrap());
    }

    #[test]
    fn direct_image_collapses_tuples() {
        let edge = Structure::from_binary_pairs(2, &[(0, 1)]).unwrap();
        let collapse = DomainMap::new(2, 1, vec![0, 0]).unwrap();
        let img = edge.direct_image(&collapse).unwrap();
        assert_eq!(img.relation_tuples(0), vec![vec![0, 0]]);
    }

    #[test]
    fn inverse_image_of_loop_is_full() {
        let lp = Structure::from_binary_pairs(1, &[(0, 0)]).unwrap();
        let collapse = DomainMap::new(2, 1, vec![0, 0]).unwrap();
        let pre = lp.inverse_image(&collapse).unwrap();
        assert_eq!(pre, Structure::full(Signature::binary(), 2).unwrap());
    }

    #[test]
    fn binary_predicate_basics() {
        let chain = Structure::from_binary_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(chain.is_irreflexive_rel(0).unwrap());
        assert!(!chain.is_symmetric_rel(0).unwrap());
        assert!(!chain.is_transitive_rel(0).unwrap());
        let closed = Structure::from_binary_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(closed.is_transitive_rel(0).unwrap());
        assert!(chain.is_connected_rel(0).unwrap());
        let split = graph(4, &[(0, 1), (2, 3)]);
        assert!(!split.is_connected_rel(0).unwrap());
        assert_eq!(chain.out_degree(0, 0).unwrap(), 1);
        assert_eq!(chain.degree(0, 1).unwrap(), 2);
        let refl = Structure::from_binary_pairs(2, &[(0, 0), (1, 1)]).unwrap();
        assert!(refl.is_reflexive_rel(0).unwrap());
        assert_eq!(refl.degree(0, 0).unwrap(), 0);
    }

    #[test]
    fn domain_map_basics() {
        let f = DomainMap::new(3, 2, vec![0, 1, 1]).unwrap();
        assert!(!f.is_injective());
        assert!(f.is_surjective());
        assert!(!f.is_bijective());
        assert_eq!(f.apply_tuple(&[2, 0]), vec![1, 0]);
        let g = DomainMap::new(2, 2, vec![1, 0]).unwrap();
        let h = f.then(&g).unwrap();
        assert_eq!(h.values(), &[1, 0, 0]);
        assert_eq!(g.inverse().unwrap(), g);
        assert!(f.inverse().is_none());
        assert!(DomainMap::new(2, 2, vec![0, 2]).is_err());
        assert!(DomainMap::new(2, 2, vec![0]).is_err());
    }

    fn arb_structure() -> impl Strategy<Value = Structure> {
        (
            prop::sample::select(vec![vec![2], vec![1, 2], vec![3]]),
            1usize..=4,
        )
            .prop_flat_map(|(sig, n)| {
                let spaces: Vec<u64> = sig.iter().map(|&k| (n as u64).pow(k as u32)).collect();
                let total: usize = spaces.iter().map(|&s| s as usize).sum();
                (
                    Just(sig),
                    Just(n),
                    Just(spaces),
                    prop::collection::vec(prop::bool::ANY, total),
                )
            })
            .prop_map(|(sig, n, spaces, bits)| {
                build_from_bits(&sig, n, &spaces, &bits)
            })
    }

    fn build_from_bits(sig: &[usize], n: usize, spaces: &[u64], bits: &[bool]) -> Structure {
        let mut relations = Vec::new();
        let mut idx = 0;
        for &space in spaces {
            let mut codes = Vec::new();
            for c in 0..space {
                if bits[idx] {
                    codes.push(c);
                }
                idx += 1;
            }
            relations.push(codes);
        }
        Structure::from_codes(Signature::new(sig.to_vec()).unwrap(), n, relations).unwrap()
    }

    fn arb_structure_pair() -> impl Strategy<Value = (Structure, Structure)> {
        (
            prop::sample::select(vec![vec![2], vec![1, 2], vec![3]]),
            1usize..=4,
        )
            .prop_flat_map(|(sig, n)| {
                let spaces: Vec<u64> = sig.iter().map(|&k| (n as u64).pow(k as u32)).collect();
                let total: usize = spaces.iter().map(|&s| s as usize).sum();
                (
                    Just(sig),
                    Just(n),
                    Just(spaces),
                    prop::collection::vec(prop::bool::ANY, total),
                    prop::collection::vec(prop::bool::ANY, total),
                )
            })
            .prop_map(|(sig, n, spaces, bits_a, bits_b)| {
                (
                    build_from_bits(&sig, n, &spaces, &bits_a),
                    build_from_bits(&sig, n, &spaces, &bits_b),
                )
            })
    }

    fn arb_structure_with_map() -> impl Strategy<Value = (Structure, DomainMap)> {
        (arb_structure(), 1usize..=4).prop_flat_map(|(s, m)| {
            let n = s.domain();
            (
                Just(s),
                prop::collection::vec(0..m, n)
                    .prop_map(move |values| DomainMap::new(n, m, values).unwrap()),
            )
        })
    }

    fn arb_structure_with_perm() -> impl Strategy<Value = (Structure, DomainMap)> {
        arb_structure().prop_flat_map(|s| {
            let n = s.domain();
            (
                Just(s),
                Just((0..n).collect::<Vec<_>>())
                    .prop_shuffle()
                    .prop_map(move |values| DomainMap::new(n, n, values).unwrap()),
            )
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(s in arb_structure()) {
            let text = s.to_json_string();
            prop_assert_eq!(Structure::from_json_str(&text).unwrap(), s);
        }

        #[test]
        fn complement_is_involutive(s in arb_structure()) {
            prop_assert_eq!(s.complement().unwrap().complement().unwrap(), s);
        }

        #[test]
        fn de_morgan_union((a, b) in arb_structure_pair()) {
            let lhs = Structure::union(&[a.clone(), b.clone()]).unwrap().complement().unwrap();
            let rhs = Structure::intersection(&[
                a.complement().unwrap(),
                b.complement().unwrap(),
            ]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn union_contains_intersection((a, b) in arb_structure_pair()) {
            let u = Structure::union(&[a.clone(), b.clone()]).unwrap();
            let i = Structure::intersection(&[a.clone(), b.clone()]).unwrap();
            prop_assert!(i.is_subinterpretation(&u).unwrap());
            prop_assert!(a.is_subinterpretation(&u).unwrap());
            prop_assert!(i.is_subinterpretation(&a).unwrap());
        }

        #[test]
        fn image_round_trip_contains_source((s, f) in arb_structure_with_map()) {
            let back = s.direct_image(&f).unwrap().inverse_image(&f).unwrap();
            prop_assert!(s.is_subinterpretation(&back).unwrap());
        }

        #[test]
        fn bijective_images_cancel((s, f) in arb_structure_with_perm()) {
            let img = s.direct_image(&f).unwrap();
            prop_assert_eq!(img.direct_image(&f.inverse().unwrap()).unwrap(), s.clone());
            prop_assert_eq!(img.inverse_image(&f).unwrap(), s.clone());
            // permutation images commute with complement
            let lhs = s.complement().unwrap().direct_image(&f).unwrap();
            prop_assert_eq!(lhs, img.complement().unwrap());
        }
    }
}
