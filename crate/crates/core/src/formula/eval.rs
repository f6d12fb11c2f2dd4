//! Tarskian evaluation of formulas on finite structures. The counting
//! quantifier is evaluated by direct enumeration of witness tuples with an
//! early exit, never by building its universal expansion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::{decode_tuple, enum_space, Structure};

use super::Formula;

/// Assignment of domain elements to free variables.
pub type Valuation = BTreeMap<usize, usize>;

pub fn evaluate(s: &Structure, formula: &Formula, valuation: &Valuation) -> Result<bool> {
    for (&var, &value) in valuation {
        if value >= s.domain() {
            return Err(Error::BadValuation {
                var,
                value,
                domain: s.domain(),
            });
        }
    }
    let mut env: Vec<(usize, usize)> = valuation.iter().map(|(&k, &v)| (k, v)).collect();
    eval_rec(s, formula, &mut env)
}

fn lookup(env: &[(usize, usize)], var: usize) -> Result<usize> {
    env.iter()
        .rev()
        .find(|&&(v, _)| v == var)
        .map(|&(_, x)| x)
        .ok_or(Error::UnboundVariable(var))
}

fn eval_rec(s: &Structure, formula: &Formula, env: &mut Vec<(usize, usize)>) -> Result<bool> {
    match formula {
        Formula::Eq(a, b) => Ok(lookup(env, *a)? == lookup(env, *b)?),
        Formula::Rel(rel, args) => {
            let arity = s.signature().arity(*rel)?;
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    rel: *rel,
                    expected: arity,
                    got: args.len(),
                });
            }
            let mut tuple = Vec::with_capacity(args.len());
            for &a in args {
                tuple.push(lookup(env, a)?);
            }
            Ok(s.contains_tuple(*rel, &tuple))
        }
        Formula::Not(inner) => Ok(!eval_rec(s, inner, env)?),
        Formula::And(parts) => {
            for p in parts {
                if !eval_rec(s, p, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(parts) => {
            for p in parts {
                if eval_rec(s, p, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ForAll(v, body) => {
            for x in 0..s.domain() {
                env.push((*v, x));
                let holds = eval_rec(s, body, env);
                env.pop();
                if !holds? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, body) => {
            for x in 0..s.domain() {
                env.push((*v, x));
                let holds = eval_rec(s, body, env);
                env.pop();
                if holds? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ExistsAtMost(bound, block, body) => {
            let q = block.len();
            let space = enum_space(s.domain(), q)?;
            let mut count = 0usize;
            for code in 0..space {
                let tuple = decode_tuple(code, q, s.domain());
                for (j, &v) in block.iter().enumerate() {
                    env.push((v, tuple[j]));
                }
                let holds = eval_rec(s, body, env);
                env.truncate(env.len() - q);
                if holds? {
                    count += 1;
                    if count > *bound {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}
