//! Constraint classes over relational structures and extremality search.
//!
//! A [`ClassSpec`] describes a class of structures on a fixed signature:
//! shape builtins (irreflexive, symmetric, ...), first-order axioms,
//! forbidden induced patterns, a degree cap, per-subset tuple-count bounds,
//! and counting bounds of the form "for all parameters, at most n witness
//! blocks satisfy phi". Membership is decidable by direct checking; the
//! search operations in this module find and certify maximal and minimal
//! members under inclusion.
//!
//! Each derived constraint carries a monotonicity certificate: whether its
//! satisfaction survives adding tuples (up-closed), removing tuples
//! (down-closed), both, or neither. Certificates drive pruning in exact
//! search and let local search certify global extremality when every
//! constraint is monotone in one direction or the other.

mod dual;
mod search;

pub use dual::complement_dual;
pub use search::{
    census, chain_union_test, is_maximal, is_minimal, saturate, CensusWhat, ChainOp, Direction,
    ExtremeReport, Guarantee, SearchMode, TieBreak, DEFAULT_CENSUS_BUDGET, DEFAULT_SEARCH_BUDGET,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{classify, evaluate, parse, Formula, Valuation};
use crate::morphism::embeds;
use crate::structure::{decode_tuple, enum_space, space_size, Signature, Structure};

use itertools::Itertools;

/// Shape constraints applied to every binary symbol of the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    Irreflexive,
    Symmetric,
    Reflexive,
    Connected,
    Transitive,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Irreflexive => "irreflexive",
            Builtin::Symmetric => "symmetric",
            Builtin::Reflexive => "reflexive",
            Builtin::Connected => "connected",
            Builtin::Transitive => "transitive",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "irreflexive" => Ok(Builtin::Irreflexive),
            "symmetric" => Ok(Builtin::Symmetric),
            "reflexive" => Ok(Builtin::Reflexive),
            "connected" => Ok(Builtin::Connected),
            "transitive" => Ok(Builtin::Transitive),
            other => Err(Error::InvalidClassSpec(format!("unknown builtin {other:?}"))),
        }
    }
}

/// Counting bound: for every assignment of the first `params` variables,
/// at most `bound` distinct blocks of the next `block` variables satisfy
/// `formula`. Variables `v0..v{params-1}` are the parameters and
/// `v{params}..v{params+block-1}` the counted block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefBound {
    pub formula: Formula,
    pub params: usize,
    pub block: usize,
    pub bound: usize,
}

impl DefBound {
    /// The bound as a closed formula: forall params, at most `bound` blocks.
    pub fn sentence(&self) -> Formula {
        let block_vars: Vec<usize> = (self.params..self.params + self.block).collect();
        let eam = Formula::exists_at_most(self.bound, block_vars, self.formula.clone());
        Formula::forall_many(0..self.params, eam)
    }
}

/// How a constraint behaves under tuple insertion and removal.
///
/// `Up`: satisfied structures stay satisfied when tuples are added.
/// `Down`: satisfied structures stay satisfied when tuples are removed.
/// `Both` also covers constraints that are vacuous on the candidate lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mono {
    Up,
    Down,
    Both,
    Neither,
}

impl Mono {
    pub(crate) fn up_closed(self) -> bool {
        matches!(self, Mono::Up | Mono::Both)
    }

    pub(crate) fn down_closed(self) -> bool {
        matches!(self, Mono::Down | Mono::Both)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum ConstraintKind {
    Axiom(Formula),
    Forbidden(Structure),
    LocalLower { m: usize, sym: usize, bound: u64 },
    LocalUpper { m: usize, sym: usize, bound: u64 },
    DefBound(Formula),
    Connected(usize),
    Transitive(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub(crate) kind: ConstraintKind,
    pub(crate) mono: Mono,
}

/// One indivisible edit step on the candidate lattice: the codes of a single
/// symbol that must be present or absent together. Symmetric binary symbols
/// pair each off-diagonal code with its transpose; everything else moves one
/// code at a time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Atom {
    pub(crate) sym: usize,
    pub(crate) codes: Vec<u64>,
}

/// A class of structures over a fixed signature.
#[derive(Clone, Debug)]
pub struct ClassSpec {
    signature: Signature,
    builtins: BTreeSet<Builtin>,
    axioms: Vec<Formula>,
    forbidden: Vec<Structure>,
    degree_max: Option<usize>,
    local_bounds: BTreeMap<usize, Vec<(u64, u64)>>,
    defbounds: Vec<DefBound>,
    constraints: Vec<Constraint>,
}

#[derive(Serialize, Deserialize)]
struct DefBoundFile {
    formula: String,
    params: usize,
    block: usize,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct ClassSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    builtins: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    axioms: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    forbidden: Vec<Structure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    local_bounds: Option<BTreeMap<String, Vec<(u64, u64)>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    defbounds: Vec<DefBoundFile>,
}

impl ClassSpec {
    /// Validates the pieces and derives the constraint table.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        signature: Signature,
        builtins: BTreeSet<Builtin>,
        axioms: Vec<Formula>,
        forbidden: Vec<Structure>,
        degree_max: Option<usize>,
        local_bounds: BTreeMap<usize, Vec<(u64, u64)>>,
        defbounds: Vec<DefBound>,
    ) -> Result<Self> {
        let has_binary = signature.arities().iter().any(|&a| a == 2);
        if (!builtins.is_empty() || degree_max.is_some()) && !has_binary {
            return Err(Error::InvalidClassSpec(
                "builtins and degree_max need a binary symbol".into(),
            ));
        }
        if builtins.contains(&Builtin::Irreflexive) && builtins.contains(&Builtin::Reflexive) {
            return Err(Error::InvalidClassSpec(
                "irreflexive and reflexive are incompatible".into(),
            ));
        }
        for ax in &axioms {
            if !ax.is_sentence() {
                return Err(Error::InvalidClassSpec(format!(
                    "axiom has free variables: {ax}"
                )));
            }
            check_formula_arities(ax, &signature)?;
        }
        for f in &forbidden {
            if f.signature() != &signature {
                return Err(Error::SignatureMismatch);
            }
        }
        for (&m, bounds) in &local_bounds {
            if m == 0 {
                return Err(Error::MalformedBounds("subset size 0".into()));
            }
            if bounds.len() != signature.len() {
                return Err(Error::MalformedBounds(format!(
                    "expected {} bound pairs for subset size {m}, got {}",
                    signature.len(),
                    bounds.len()
                )));
            }
            for (sym, &(k, l)) in bounds.iter().enumerate() {
                let space = space_size(m, signature.arities()[sym])
                    .ok_or_else(|| Error::MalformedBounds("subset tuple space overflow".into()))?;
                if k > l || l > space {
                    return Err(Error::MalformedBounds(format!(
                        "need 0 <= k <= l <= {space} for symbol {sym} at subset size {m}, got ({k}, {l})"
                    )));
                }
            }
        }
        for db in &defbounds {
            if db.block == 0 {
                return Err(Error::InvalidClassSpec("counting bound with empty block".into()));
            }
            let scope = db.params + db.block;
            if let Some(&v) = db.formula.free_vars().iter().find(|&&v| v >= scope) {
                return Err(Error::InvalidClassSpec(format!(
                    "counting bound formula uses v{v} beyond its {scope} declared variables"
                )));
            }
            check_formula_arities(&db.formula, &signature)?;
        }

        let constraints = derive_constraints(
            &signature,
            &builtins,
            &axioms,
            &forbidden,
            degree_max,
            &local_bounds,
            &defbounds,
        );
        Ok(ClassSpec {
            signature,
            builtins,
            axioms,
            forbidden,
            degree_max,
            local_bounds,
            defbounds,
            constraints,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn builtins(&self) -> impl Iterator<Item = Builtin> + '_ {
        self.builtins.iter().copied()
    }

    pub fn has_builtin(&self, b: Builtin) -> bool {
        self.builtins.contains(&b)
    }

    pub fn axioms(&self) -> &[Formula] {
        &self.axioms
    }

    pub fn forbidden(&self) -> &[Structure] {
        &self.forbidden
    }

    pub fn degree_max(&self) -> Option<usize> {
        self.degree_max
    }

    pub fn local_bounds(&self) -> &BTreeMap<usize, Vec<(u64, u64)>> {
        &self.local_bounds
    }

    pub fn defbounds(&self) -> &[DefBound] {
        &self.defbounds
    }

    /// True when every derived constraint is up-closed or down-closed, so a
    /// local extremality scan already decides global extremality.
    pub fn all_monotone(&self) -> bool {
        self.constraints.iter().all(|c| c.mono != Mono::Neither)
    }

    pub(crate) fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ClassSpecFile = serde_json::from_str(text)?;
        let mut builtins = BTreeSet::new();
        for name in &file.builtins {
            builtins.insert(Builtin::from_name(name)?);
        }
        let mut axioms = Vec::new();
        for text in &file.axioms {
            axioms.push(parse(text)?);
        }
        let mut defbounds = Vec::new();
        for db in &file.defbounds {
            defbounds.push(DefBound {
                formula: parse(&db.formula)?,
                params: db.params,
                block: db.block,
                bound: db.n,
            });
        }
        let mut local_bounds = BTreeMap::new();
        if let Some(raw) = &file.local_bounds {
            for (key, bounds) in raw {
                let m: usize = key.parse().map_err(|_| {
                    Error::MalformedBounds(format!("subset size key {key:?} is not a number"))
                })?;
                local_bounds.insert(m, bounds.clone());
            }
        }
        let signature = infer_signature(
            file.signature.as_deref(),
            &file.forbidden,
            axioms.iter().chain(defbounds.iter().map(|d| &d.formula)),
            !builtins.is_empty() || file.degree_max.is_some(),
        )?;
        Self::build(
            signature,
            builtins,
            axioms,
            file.forbidden,
            file.degree_max,
            local_bounds,
            defbounds,
        )
    }

    pub fn to_json_string(&self) -> String {
        let file = ClassSpecFile {
            signature: Some(self.signature.arities().to_vec()),
            builtins: self.builtins.iter().map(|b| b.name().to_string()).collect(),
            axioms: self.axioms.iter().map(|f| f.to_string()).collect(),
            forbidden: self.forbidden.clone(),
            degree_max: self.degree_max,
            local_bounds: if self.local_bounds.is_empty() {
                None
            } else {
                Some(
                    self.local_bounds
                        .iter()
                        .map(|(m, v)| (m.to_string(), v.clone()))
                        .collect(),
                )
            },
            defbounds: self
                .defbounds
                .iter()
                .map(|db| DefBoundFile {
                    formula: db.formula.to_string(),
                    params: db.params,
                    block: db.block,
                    n: db.bound,
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("class spec serializes");
        out.push('\n');
        out
    }

    /// Membership test. Errors on signature mismatch; otherwise checks the
    /// builtins and every derived constraint.
    pub fn member(&self, s: &Structure) -> Result<bool> {
        if s.signature() != &self.signature {
            return Err(Error::SignatureMismatch);
        }
        if !self.builtins_ok(s) {
            return Ok(false);
        }
        for c in &self.constraints {
            if !constraint_holds(s, &c.kind)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Shape builtins only; connectivity and transitivity live in the
    /// constraint table instead.
    pub(crate) fn builtins_ok(&self, s: &Structure) -> bool {
        for (sym, &arity) in self.signature.arities().iter().enumerate() {
            if arity != 2 {
                continue;
            }
            if self.builtins.contains(&Builtin::Irreflexive) && !s.is_irreflexive_rel(sym).expect("binary symbol") {
                return false;
            }
            if self.builtins.contains(&Builtin::Reflexive) && !s.is_reflexive_rel(sym).expect("binary symbol") {
                return false;
            }
            if self.builtins.contains(&Builtin::Symmetric) && !s.is_symmetric_rel(sym).expect("binary symbol") {
                return false;
            }
        }
        true
    }

    /// The structure every candidate on `domain` contains: empty except for
    /// diagonals frozen in by the reflexive builtin.
    pub fn base(&self, domain: usize) -> Result<Structure> {
        let mut s = Structure::empty(self.signature.clone(), domain)?;
        if self.builtins.contains(&Builtin::Reflexive) {
            for (sym, &arity) in self.signature.arities().iter().enumerate() {
                if arity == 2 {
                    for x in 0..domain {
                        s.insert_code(sym, (x * domain + x) as u64);
                    }
                }
            }
        }
        Ok(s)
    }

    /// Edit steps available on `domain`, in ascending (symbol, least code)
    /// order. Diagonal codes of binary symbols are frozen when the class is
    /// irreflexive or reflexive; symmetric binary symbols move transpose
    /// pairs together.
    pub(crate) fn moves(&self, domain: usize) -> Result<Vec<Atom>> {
        let irr = self.builtins.contains(&Builtin::Irreflexive);
        let refl = self.builtins.contains(&Builtin::Reflexive);
        let symm = self.builtins.contains(&Builtin::Symmetric);
        let mut atoms = Vec::new();
        for (sym, &arity) in self.signature.arities().iter().enumerate() {
            let space = enum_space(domain, arity)?;
            if arity == 2 {
                for x in 0..domain {
                    for y in 0..domain {
                        let code = (x * domain + y) as u64;
                        if x == y {
                            if !(irr || refl) {
                                atoms.push(Atom { sym, codes: vec![code] });
                            }
                        } else if symm {
                            if x < y {
                                let twin = (y * domain + x) as u64;
                                atoms.push(Atom { sym, codes: vec![code, twin] });
                            }
                        } else {
                            atoms.push(Atom { sym, codes: vec![code] });
                        }
                    }
                }
            } else {
                for code in 0..space {
                    atoms.push(Atom { sym, codes: vec![code] });
                }
            }
        }
        Ok(atoms)
    }
}

fn check_formula_arities(f: &Formula, sig: &Signature) -> Result<()> {
    match f {
        Formula::Eq(..) => Ok(()),
        Formula::Rel(rel, args) => {
            let expected = sig.arity(*rel)?;
            if args.len() != expected {
                return Err(Error::ArityMismatch {
                    rel: *rel,
                    expected,
                    got: args.len(),
                });
            }
            Ok(())
        }
        Formula::Not(inner) => check_formula_arities(inner, sig),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().try_for_each(|p| check_formula_arities(p, sig))
        }
        Formula::ForAll(_, body) | Formula::Exists(_, body) | Formula::ExistsAtMost(_, _, body) => {
            check_formula_arities(body, sig)
        }
    }
}

fn collect_arities(f: &Formula, into: &mut BTreeMap<usize, usize>) -> Result<()> {
    match f {
        Formula::Eq(..) => Ok(()),
        Formula::Rel(rel, args) => {
            if let Some(&seen) = into.get(rel) {
                if seen != args.len() {
                    return Err(Error::InvalidClassSpec(format!(
                        "symbol R{rel} used with arities {seen} and {}",
                        args.len()
                    )));
                }
            } else {
                into.insert(*rel, args.len());
            }
            Ok(())
        }
        Formula::Not(inner) => collect_arities(inner, into),
        Formula::And(parts) | Formula::Or(parts) => {
            parts.iter().try_for_each(|p| collect_arities(p, into))
        }
        Formula::ForAll(_, body) | Formula::Exists(_, body) | Formula::ExistsAtMost(_, _, body) => {
            collect_arities(body, into)
        }
    }
}

/// Signature resolution for class files: an explicit list wins, then the
/// signature of a forbidden structure, then the arities of the symbols used
/// in formulas, and finally a single binary symbol when only builtins or a
/// degree cap are present.
fn infer_signature<'a>(
    explicit: Option<&[usize]>,
    forbidden: &[Structure],
    formulas: impl Iterator<Item = &'a Formula>,
    graph_flavored: bool,
) -> Result<Signature> {
    if let Some(arities) = explicit {
        return Signature::new(arities.to_vec());
    }
    if let Some(first) = forbidden.first() {
        return Ok(first.signature().clone());
    }
    let mut arities = BTreeMap::new();
    for f in formulas {
        collect_arities(f, &mut arities)?;
    }
    if let Some((&max, _)) = arities.iter().next_back() {
        let mut list = Vec::with_capacity(max + 1);
        for r in 0..=max {
            match arities.get(&r) {
                Some(&a) => list.push(a),
                None => {
                    return Err(Error::InvalidClassSpec(format!(
                        "cannot infer arity of unused symbol R{r}"
                    )))
                }
            }
        }
        return Signature::new(list);
    }
    if graph_flavored {
        return Ok(Signature::binary());
    }
    Err(Error::InvalidClassSpec(
        "cannot infer signature; give an explicit \"signature\" list".into(),
    ))
}

/// Degree cap as a counting bound: each vertex has at most n neighbours,
/// where neighbourhood ignores direction and loops.
fn degree_body(sym: usize) -> Formula {
    Formula::and(vec![
        Formula::or(vec![
            Formula::rel(sym, vec![0, 1]),
            Formula::rel(sym, vec![1, 0]),
        ]),
        Formula::not(Formula::eq(0, 1)),
    ])
}

fn derive_constraints(
    signature: &Signature,
    builtins: &BTreeSet<Builtin>,
    axioms: &[Formula],
    forbidden: &[Structure],
    degree_max: Option<usize>,
    local_bounds: &BTreeMap<usize, Vec<(u64, u64)>>,
    defbounds: &[DefBound],
) -> Vec<Constraint> {
    let mut out = Vec::new();
    for ax in axioms {
        let class = classify(ax);
        let mono = match (class.p, class.n) {
            (true, true) => Mono::Both,
            (true, false) => Mono::Up,
            (false, true) => Mono::Down,
            (false, false) => Mono::Neither,
        };
        out.push(Constraint { kind: ConstraintKind::Axiom(ax.clone()), mono });
    }
    for f in forbidden {
        let mono = forbidden_mono(f, builtins);
        out.push(Constraint { kind: ConstraintKind::Forbidden(f.clone()), mono });
    }
    for (&m, bounds) in local_bounds {
        for (sym, &(k, l)) in bounds.iter().enumerate() {
            let space = space_size(m, signature.arities()[sym]).expect("validated");
            if k > 0 {
                out.push(Constraint {
                    kind: ConstraintKind::LocalLower { m, sym, bound: k },
                    mono: Mono::Up,
                });
            }
            if l < space {
                out.push(Constraint {
                    kind: ConstraintKind::LocalUpper { m, sym, bound: l },
                    mono: Mono::Down,
                });
            }
        }
    }
    let mut bound_list: Vec<DefBound> = defbounds.to_vec();
    if let Some(n) = degree_max {
        for (sym, &arity) in signature.arities().iter().enumerate() {
            if arity == 2 {
                bound_list.push(DefBound {
                    formula: degree_body(sym),
                    params: 1,
                    block: 1,
                    bound: n,
                });
            }
        }
    }
    for db in &bound_list {
        let class = classify(&db.formula);
        // The witness count grows with the structure when the body sits in
        // the positive class, so the cap is down-closed; dually for the
        // negative class.
        let mono = if class.p {
            Mono::Down
        } else if class.n {
            Mono::Up
        } else {
            Mono::Neither
        };
        out.push(Constraint { kind: ConstraintKind::DefBound(db.sentence()), mono });
    }
    for (sym, &arity) in signature.arities().iter().enumerate() {
        if arity != 2 {
            continue;
        }
        if builtins.contains(&Builtin::Connected) {
            out.push(Constraint { kind: ConstraintKind::Connected(sym), mono: Mono::Up });
        }
        if builtins.contains(&Builtin::Transitive) {
            out.push(Constraint { kind: ConstraintKind::Transitive(sym), mono: Mono::Neither });
        }
    }
    out
}

/// Monotonicity of an induced-pattern exclusion. A pattern that violates the
/// shape builtins can never occur inside a conforming host, so excluding it
/// is vacuous. Otherwise the exclusion is down-closed when the pattern fills
/// every movable position (deleting host tuples cannot create a copy) and
/// up-closed when it fills none.
fn forbidden_mono(f: &Structure, builtins: &BTreeSet<Builtin>) -> Mono {
    let irr = builtins.contains(&Builtin::Irreflexive);
    let refl = builtins.contains(&Builtin::Reflexive);
    let symm = builtins.contains(&Builtin::Symmetric);
    for (sym, &arity) in f.signature().arities().iter().enumerate() {
        if arity != 2 {
            continue;
        }
        if irr && !f.is_irreflexive_rel(sym).expect("binary symbol") {
            return Mono::Both;
        }
        if refl && !f.is_reflexive_rel(sym).expect("binary symbol") {
            return Mono::Both;
        }
        if symm && !f.is_symmetric_rel(sym).expect("binary symbol") {
            return Mono::Both;
        }
    }
    let mut all_present = true;
    let mut all_absent = true;
    for (sym, &arity) in f.signature().arities().iter().enumerate() {
        let space = space_size(f.domain(), arity).expect("pattern fits");
        let diag_frozen = arity == 2 && (irr || refl);
        for code in 0..space {
            if diag_frozen {
                let t = decode_tuple(code, arity, f.domain());
                if t[0] == t[1] {
                    continue;
                }
            }
            if f.contains_code(sym, code) {
                all_absent = false;
            } else {
                all_present = false;
            }
        }
    }
    if all_present {
        Mono::Down
    } else if all_absent {
        Mono::Up
    } else {
        Mono::Neither
    }
}

pub(crate) fn constraint_holds(s: &Structure, kind: &ConstraintKind) -> Result<bool> {
    match kind {
        ConstraintKind::Axiom(f) | ConstraintKind::DefBound(f) => {
            evaluate(s, f, &Valuation::new())
        }
        ConstraintKind::Forbidden(pattern) => Ok(!embeds(pattern, s)?),
        ConstraintKind::LocalLower { m, sym, bound } => {
            local_counts_ok(s, *m, *sym, |count| count >= *bound)
        }
        ConstraintKind::LocalUpper { m, sym, bound } => {
            local_counts_ok(s, *m, *sym, |count| count <= *bound)
        }
        ConstraintKind::Connected(sym) => s.is_connected_rel(*sym),
        ConstraintKind::Transitive(sym) => s.is_transitive_rel(*sym),
    }
}

/// Applies `ok` to the number of tuples of `sym` falling inside each
/// m-element subset of the domain. Vacuously true when m exceeds the domain.
fn local_counts_ok(
    s: &Structure,
    m: usize,
    sym: usize,
    ok: impl Fn(u64) -> bool,
) -> Result<bool> {
    if m > s.domain() {
        return Ok(true);
    }
    let tuples = s.relation_tuples(sym);
    for subset in (0..s.domain()).combinations(m) {
        let mut mask = 0u64;
        for &x in &subset {
            mask |= 1 << x;
        }
        let count = tuples
            .iter()
            .filter(|t| t.iter().all(|&x| mask & (1 << x) != 0))
            .count() as u64;
        if !ok(count) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn graph_spec(extra: &str) -> ClassSpec {
        let text = format!(
            "{{\"signature\":[2],\"builtins\":[\"irreflexive\",\"symmetric\"]{extra}}}"
        );
        ClassSpec::from_json_str(&text).unwrap()
    }

    fn forbid_k3_spec() -> ClassSpec {
        let k3 = gallery::complete(3).to_json_string();
        let text = format!(
            "{{\"builtins\":[\"irreflexive\",\"symmetric\"],\"forbidden\":[{k3}]}}"
        );
        ClassSpec::from_json_str(&text).unwrap()
    }

    fn poset_spec() -> ClassSpec {
        ClassSpec::from_json_str(
            r#"{
                "axioms": [
                    "A v0 . ~R0(v0, v0)",
                    "A v0 . A v1 . A v2 . ((~R0(v0, v1) | ~R0(v1, v2)) | R0(v0, v2))"
                ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn membership_examples() {
        let spec = forbid_k3_spec();
        assert!(spec.member(&gallery::cycle(5)).unwrap());
        assert!(!spec.member(&gallery::complete(3)).unwrap());
        assert!(!spec.member(&gallery::complete(4)).unwrap());

        let poset = poset_spec();
        let order = Structure::from_binary_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(poset.member(&order).unwrap());
        let gap = Structure::from_binary_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        // missing (0, 2) breaks transitivity
        assert!(!poset.member(&gap).unwrap());
        let refl = Structure::from_binary_pairs(2, &[(0, 0)]).unwrap();
        assert!(!poset.member(&refl).unwrap());
    }

    #[test]
    fn signature_inference_paths() {
        // from forbidden structures
        assert_eq!(forbid_k3_spec().signature(), &Signature::binary());
        // from formula atoms
        assert_eq!(poset_spec().signature(), &Signature::binary());
        // from builtins alone
        let plain = ClassSpec::from_json_str(r#"{"builtins":["irreflexive"]}"#).unwrap();
        assert_eq!(plain.signature(), &Signature::binary());
        // nothing to go on
        assert!(ClassSpec::from_json_str(r#"{}"#).is_err());
        // gap in the used symbols
        assert!(ClassSpec::from_json_str(r#"{"axioms":["A v0 . R1(v0, v0)"]}"#).is_err());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(matches!(
            ClassSpec::from_json_str(r#"{"builtins":["irreflexive","reflexive"]}"#),
            Err(Error::InvalidClassSpec(_))
        ));
        assert!(matches!(
            ClassSpec::from_json_str(r#"{"builtins":["shiny"]}"#),
            Err(Error::InvalidClassSpec(_))
        ));
        // free variable in an axiom
        assert!(ClassSpec::from_json_str(
            r#"{"signature":[2],"axioms":["R0(v0, v1)"]}"#
        )
        .is_err());
        // local bound above the subset tuple space
        assert!(matches!(
            ClassSpec::from_json_str(
                r#"{"signature":[2],"local_bounds":{"3":[[0, 10]]}}"#
            ),
            Err(Error::MalformedBounds(_))
        ));
        // wrong number of per-symbol pairs
        assert!(matches!(
            ClassSpec::from_json_str(
                r#"{"signature":[2,2],"local_bounds":{"3":[[0, 9]]}}"#
            ),
            Err(Error::MalformedBounds(_))
        ));
        // counting bound formula escaping its declared variables
        assert!(ClassSpec::from_json_str(
            r#"{"signature":[2],"defbounds":[{"formula":"R0(v0, v2)","params":1,"block":1,"n":1}]}"#
        )
        .is_err());
    }

    #[test]
    fn monotonicity_certificates() {
        // positive axiom: up-closed; negative axiom: down-closed
        let spec = ClassSpec::from_json_str(
            r#"{"axioms":["A v0 . A v1 . (v0 = v1 | R0(v0, v1))", "A v0 . ~R0(v0, v0)"]}"#,
        )
        .unwrap();
        assert_eq!(spec.constraints()[0].mono, Mono::Up);
        assert_eq!(spec.constraints()[1].mono, Mono::Down);
        assert!(spec.all_monotone());

        // transitivity is neither
        assert!(!poset_spec().all_monotone());

        // complete pattern under graph builtins: down-closed
        let spec = forbid_k3_spec();
        assert_eq!(spec.constraints()[0].mono, Mono::Down);

        // empty pattern: up-closed
        let e3 = Structure::empty(Signature::binary(), 3).unwrap().to_json_string();
        let spec = ClassSpec::from_json_str(&format!(
            "{{\"builtins\":[\"irreflexive\",\"symmetric\"],\"forbidden\":[{e3}]}}"
        ))
        .unwrap();
        assert_eq!(spec.constraints()[0].mono, Mono::Up);

        // pattern with a loop is vacuous under irreflexive hosts
        let loopy = Structure::from_binary_pairs(2, &[(0, 0), (0, 1), (1, 0)])
            .unwrap()
            .to_json_string();
        let spec = ClassSpec::from_json_str(&format!(
            "{{\"builtins\":[\"irreflexive\",\"symmetric\"],\"forbidden\":[{loopy}]}}"
        ))
        .unwrap();
        assert_eq!(spec.constraints()[0].mono, Mono::Both);

        // half-filled pattern without builtins: neither
        let k2 = Structure::from_binary_pairs(2, &[(0, 1), (1, 0)]).unwrap().to_json_string();
        let spec =
            ClassSpec::from_json_str(&format!("{{\"forbidden\":[{k2}]}}")).unwrap();
        assert_eq!(spec.constraints()[0].mono, Mono::Neither);
    }

    #[test]
    fn local_bounds_membership() {
        // every 3-subset carries 1 or 2 edges (2 or 4 ordered tuples)
        let spec = graph_spec(",\"local_bounds\":{\"3\":[[2, 4]]}");
        assert!(spec.member(&gallery::cycle(5)).unwrap());
        assert!(!spec.member(&gallery::complete(5)).unwrap());
        let empty = Structure::empty(Signature::binary(), 5).unwrap();
        assert!(!spec.member(&empty).unwrap());
        // vacuous below the subset size
        let tiny = Structure::empty(Signature::binary(), 2).unwrap();
        assert!(spec.member(&tiny).unwrap());
    }

    #[test]
    fn degree_bound_membership() {
        let spec = graph_spec(",\"degree_max\":2");
        assert!(spec.member(&gallery::cycle(5)).unwrap());
        assert!(spec.member(&gallery::path(4)).unwrap());
        assert!(!spec.member(&gallery::complete(4)).unwrap());
        // the synthesized constraint is down-closed
        assert!(spec.all_monotone());
    }

    #[test]
    fn defbound_membership() {
        // out-degree at most 1
        let spec = ClassSpec::from_json_str(
            r#"{"signature":[2],"defbounds":[{"formula":"R0(v0, v1)","params":1,"block":1,"n":1}]}"#,
        )
        .unwrap();
        let fan = Structure::from_binary_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(!spec.member(&fan).unwrap());
        let chain = Structure::from_binary_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(spec.member(&chain).unwrap());
        assert!(spec.all_monotone());
    }

    #[test]
    fn connected_builtin() {
        let spec = ClassSpec::from_json_str(
            r#"{"builtins":["irreflexive","symmetric","connected"]}"#,
        )
        .unwrap();
        assert!(spec.member(&gallery::path(4)).unwrap());
        let split = gallery::disjoint_union(&gallery::complete(2), &gallery::complete(2)).unwrap();
        assert!(!spec.member(&split).unwrap());
        assert!(spec.all_monotone());
    }

    #[test]
    fn moves_respect_builtins() {
        // graphs on 4 points: 6 unordered pairs
        let spec = graph_spec("");
        let moves = spec.moves(4).unwrap();
        assert_eq!(moves.len(), 6);
        assert!(moves.iter().all(|a| a.codes.len() == 2));

        // no builtins: every code moves alone
        let free = ClassSpec::from_json_str(r#"{"signature":[2]}"#).unwrap();
        assert_eq!(free.moves(3).unwrap().len(), 9);

        // reflexive freezes the diagonal into the base
        let refl = ClassSpec::from_json_str(r#"{"builtins":["reflexive"]}"#).unwrap();
        assert_eq!(refl.moves(3).unwrap().len(), 6);
        let base = refl.base(3).unwrap();
        assert_eq!(base.relation_len(0), 3);
        assert!(base.is_reflexive_rel(0).unwrap());
    }

    #[test]
    fn class_file_round_trip() {
        let spec = graph_spec(",\"degree_max\":2,\"local_bounds\":{\"3\":[[0, 4]]}");
        let text = spec.to_json_string();
        let again = ClassSpec::from_json_str(&text).unwrap();
        assert_eq!(again.signature(), spec.signature());
        assert_eq!(again.degree_max(), spec.degree_max());
        assert_eq!(again.local_bounds(), spec.local_bounds());
        assert_eq!(
            again.builtins().collect::<Vec<_>>(),
            spec.builtins().collect::<Vec<_>>()
        );
    }
}
