//! Extremality search, greedy saturation, exhaustive census, and chain
//! closure checks for [`ClassSpec`] classes.

use std::collections::BTreeSet;
use std::thread;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::rng_from_seed;
use crate::morphism::canonical_form;
use crate::structure::Structure;

use super::{constraint_holds, Atom, ClassSpec, Constraint};

/// Default cap on candidate evaluations in one exact-mode search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 20;

/// Default cap on the candidate lattice size in a census.
pub const DEFAULT_CENSUS_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Local,
    Exact,
}

/// How an extremality verdict was reached.
///
/// `WitnessFound`: a strictly larger (smaller) member exists, so the input is
/// not extreme. `Monotone`: every constraint is monotone, so the local scan
/// already decides global extremality. `Exhaustive`: an exact search visited
/// every candidate. `LocalOnly`: only single edit steps were scanned and the
/// constraints do not support promotion, so the verdict is not certified.
/// `BudgetExhausted`: the exact search ran out of budget; inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    WitnessFound,
    LocalOnly,
    Monotone,
    Exhaustive,
    BudgetExhausted,
}

/// Tie-breaking rule for greedy saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Always take the available step with the least (symbol, code).
    Lex,
    /// Pick uniformly among available steps with a seeded generator.
    Seeded(u64),
}

/// Outcome of an extremality check. `certified` means the structure is
/// definitely extreme; a `witness` is a strictly comparable member proving it
/// is not. A certified report never carries a witness.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremeReport {
    pub structure: Structure,
    pub direction: Direction,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Structure>,
    pub guarantee: Guarantee,
}

/// Is `s` a maximal member of `c` under inclusion?
pub fn is_maximal(
    s: &Structure,
    c: &ClassSpec,
    mode: SearchMode,
    budget: Option<u64>,
) -> Result<ExtremeReport> {
    extreme(s, c, Direction::Max, mode, budget.unwrap_or(DEFAULT_SEARCH_BUDGET))
}

/// Is `s` a minimal member of `c` under inclusion?
pub fn is_minimal(
    s: &Structure,
    c: &ClassSpec,
    mode: SearchMode,
    budget: Option<u64>,
) -> Result<ExtremeReport> {
    extreme(s, c, Direction::Min, mode, budget.unwrap_or(DEFAULT_SEARCH_BUDGET))
}

fn apply_atom(s: &mut Structure, atom: &Atom, dir: Direction) {
    for &code in &atom.codes {
        match dir {
            Direction::Max => {
                s.insert_code(atom.sym, code);
            }
            Direction::Min => {
                s.remove_code(atom.sym, code);
            }
        }
    }
}

fn undo_atom(s: &mut Structure, atom: &Atom, dir: Direction) {
    for &code in &atom.codes {
        match dir {
            Direction::Max => {
                s.remove_code(atom.sym, code);
            }
            Direction::Min => {
                s.insert_code(atom.sym, code);
            }
        }
    }
}

/// Steps applicable to a member: absent atoms when growing, present atoms
/// when shrinking. Members respect the builtins, so each atom is either
/// fully present or fully absent.
fn applicable(s: &Structure, atom: &Atom, dir: Direction) -> bool {
    let present = atom.codes.iter().all(|&code| s.contains_code(atom.sym, code));
    match dir {
        Direction::Max => !present,
        Direction::Min => present,
    }
}

fn extreme(
    s: &Structure,
    c: &ClassSpec,
    dir: Direction,
    mode: SearchMode,
    budget: u64,
) -> Result<ExtremeReport> {
    if !c.member(s)? {
        return Err(Error::NonMember);
    }
    let atoms: Vec<Atom> = c
        .moves(s.domain())?
        .into_iter()
        .filter(|a| applicable(s, a, dir))
        .collect();

    let mut work = s.clone();
    for atom in &atoms {
        apply_atom(&mut work, atom, dir);
        let hit = c.member(&work)?;
        undo_atom(&mut work, atom, dir);
        if hit {
            let mut witness = s.clone();
            apply_atom(&mut witness, atom, dir);
            return Ok(ExtremeReport {
                structure: s.clone(),
                direction: dir,
                certified: false,
                witness: Some(witness),
                guarantee: Guarantee::WitnessFound,
            });
        }
    }

    // No single step stays in the class. With monotone constraints that
    // already rules out any larger (smaller) member: such a member would make
    // some intermediate one-step extension a member too.
    if c.all_monotone() {
        return Ok(ExtremeReport {
            structure: s.clone(),
            direction: dir,
            certified: true,
            witness: None,
            guarantee: Guarantee::Monotone,
        });
    }
    if mode == SearchMode::Local {
        return Ok(ExtremeReport {
            structure: s.clone(),
            direction: dir,
            certified: false,
            witness: None,
            guarantee: Guarantee::LocalOnly,
        });
    }

    let mut dfs = Dfs { c, atoms: &atoms, dir, budget };
    let outcome = dfs.run(&mut work, 0)?;
    Ok(match outcome {
        DfsOutcome::Witness(w) => ExtremeReport {
            structure: s.clone(),
            direction: dir,
            certified: false,
            witness: Some(w),
            guarantee: Guarantee::WitnessFound,
        },
        DfsOutcome::Clean => ExtremeReport {
            structure: s.clone(),
            direction: dir,
            certified: true,
            witness: None,
            guarantee: Guarantee::Exhaustive,
        },
        DfsOutcome::Exhausted => ExtremeReport {
            structure: s.clone(),
            direction: dir,
            certified: false,
            witness: None,
            guarantee: Guarantee::BudgetExhausted,
        },
    })
}

enum DfsOutcome {
    Witness(Structure),
    Clean,
    Exhausted,
}

enum Verdict {
    Member,
    /// Fails a constraint that stays violated along this branch.
    Prune,
    /// Fails only constraints that a deeper candidate may recover.
    Soft,
}

struct Dfs<'a> {
    c: &'a ClassSpec,
    atoms: &'a [Atom],
    dir: Direction,
    budget: u64,
}

impl Dfs<'_> {
    /// Depth-first over subsets of the applicable atoms in index order, so
    /// every candidate is visited exactly once.
    fn run(&mut self, work: &mut Structure, start: usize) -> Result<DfsOutcome> {
        for i in start..self.atoms.len() {
            if self.budget == 0 {
                return Ok(DfsOutcome::Exhausted);
            }
            self.budget -= 1;
            apply_atom(work, &self.atoms[i], self.dir);
            let verdict = self.check(work)?;
            let sub = match verdict {
                Verdict::Member => {
                    let witness = work.clone();
                    undo_atom(work, &self.atoms[i], self.dir);
                    return Ok(DfsOutcome::Witness(witness));
                }
                Verdict::Prune => DfsOutcome::Clean,
                Verdict::Soft => self.run(work, i + 1)?,
            };
            undo_atom(work, &self.atoms[i], self.dir);
            match sub {
                DfsOutcome::Clean => {}
                other => return Ok(other),
            }
        }
        Ok(DfsOutcome::Clean)
    }

    /// Candidates extend a member in one direction, so constraints closed in
    /// that direction cannot fail; constraints closed in the opposite
    /// direction fail permanently once violated and prune the branch.
    fn check(&self, s: &Structure) -> Result<Verdict> {
        let prunes = |c: &Constraint| match self.dir {
            Direction::Max => c.mono.down_closed(),
            Direction::Min => c.mono.up_closed(),
        };
        let skippable = |c: &Constraint| match self.dir {
            Direction::Max => c.mono.up_closed(),
            Direction::Min => c.mono.down_closed(),
        };
        let mut soft = false;
        for constraint in self.c.constraints() {
            if skippable(constraint) {
                continue;
            }
            if !constraint_holds(s, &constraint.kind)? {
                if prunes(constraint) {
                    return Ok(Verdict::Prune);
                }
                soft = true;
            }
        }
        Ok(if soft { Verdict::Soft } else { Verdict::Member })
    }
}

/// Greedily applies member-preserving steps until none remains, yielding a
/// locally extreme member containing (contained in) the input.
pub fn saturate(s: &Structure, c: &ClassSpec, dir: Direction, tie: TieBreak) -> Result<Structure> {
    if !c.member(s)? {
        return Err(Error::NonMember);
    }
    let atoms = c.moves(s.domain())?;
    let mut rng = match tie {
        TieBreak::Lex => None,
        TieBreak::Seeded(seed) => Some(rng_from_seed(seed)),
    };
    let mut current = s.clone();
    loop {
        let mut options = Vec::new();
        for atom in &atoms {
            if !applicable(&current, atom, dir) {
                continue;
            }
            apply_atom(&mut current, atom, dir);
            let ok = c.member(&current)?;
            undo_atom(&mut current, atom, dir);
            if ok {
                options.push(atom);
            }
        }
        let Some(pick) = (match (&mut rng, options.as_slice()) {
            (_, []) => None,
            (None, opts) => Some(opts[0]),
            (Some(rng), opts) => Some(opts[rng.gen_range(0..opts.len())]),
        }) else {
            break;
        };
        apply_atom(&mut current, pick, dir);
    }
    Ok(current)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusWhat {
    All,
    Max,
    Min,
}

/// Enumerates the members of `c` on a domain of the given size, optionally
/// filtered to certified maximal or minimal ones, optionally collapsed to
/// canonical representatives. The candidate lattice has one bit per edit
/// step; censuses whose lattice exceeds the budget are refused. An empty
/// result is meaningful and comes back as an empty list.
pub fn census(
    c: &ClassSpec,
    domain: usize,
    what: CensusWhat,
    up_to_iso: bool,
    workers: usize,
    budget: Option<u64>,
) -> Result<Vec<Structure>> {
    let budget = budget.unwrap_or(DEFAULT_CENSUS_BUDGET);
    let atoms = c.moves(domain)?;
    let base = c.base(domain)?;
    if atoms.len() >= 63 || 1u64 << atoms.len() > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let total: u64 = 1 << atoms.len();
    let workers = workers.clamp(1, total.min(64) as usize) as u64;
    let chunk = total.div_ceil(workers);

    let chunks: Vec<Result<Vec<Structure>>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let base = &base;
                let atoms = &atoms;
                let lo = w * chunk;
                let hi = total.min(lo + chunk);
                scope.spawn(move || census_chunk(c, base, atoms, lo..hi, what, up_to_iso, budget))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    });

    let mut merged = Vec::new();
    for chunk in chunks {
        merged.extend(chunk?);
    }
    merged.sort();
    merged.dedup();
    Ok(merged)
}

fn census_chunk(
    c: &ClassSpec,
    base: &Structure,
    atoms: &[Atom],
    masks: std::ops::Range<u64>,
    what: CensusWhat,
    up_to_iso: bool,
    budget: u64,
) -> Result<Vec<Structure>> {
    let mut out = BTreeSet::new();
    for mask in masks {
        let mut s = base.clone();
        for (bit, atom) in atoms.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                for &code in &atom.codes {
                    s.insert_code(atom.sym, code);
                }
            }
        }
        if !c.member(&s)? {
            continue;
        }
        let keep = match what {
            CensusWhat::All => true,
            CensusWhat::Max | CensusWhat::Min => {
                let dir = if what == CensusWhat::Max { Direction::Max } else { Direction::Min };
                let report = extreme(&s, c, dir, SearchMode::Exact, budget)?;
                if report.guarantee == Guarantee::BudgetExhausted {
                    return Err(Error::BudgetExceeded { budget });
                }
                report.certified
            }
        };
        if keep {
            out.insert(if up_to_iso { canonical_form(&s)? } else { s });
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainOp {
    Union,
    Intersection,
}

/// Combines an inclusion chain with union or intersection and reports whether
/// the result is a member of `c`. The input must be a chain; the elements
/// themselves need not be members.
pub fn chain_union_test(chain: &[Structure], c: &ClassSpec, op: ChainOp) -> Result<bool> {
    if chain.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut sorted: Vec<&Structure> = chain.iter().collect();
    sorted.sort_by_key(|s| s.total_tuples());
    for pair in sorted.windows(2) {
        if !pair[0].is_subinterpretation(pair[1])? {
            return Err(Error::NotAChain);
        }
    }
    let combined = match op {
        ChainOp::Union => Structure::union(chain)?,
        ChainOp::Intersection => Structure::intersection(chain)?,
    };
    c.member(&combined)
}
