//! Exhaustive checks on finite algebras and small equation systems.
//!
//! A finite algebra is corecursive when every parameter-free flat system
//! has exactly one solution in it, and completely iterative when this still
//! holds after allowing right sides that are carrier elements. Both are
//! tested on all systems up to a given number of variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::presentation::{rtree_equiv_upto, Presentation, Verdict3, Witness};
use crate::rtree::{leaf_labels_by_depth, LeafCount, RationalTree};
use crate::solver::{anchors, classify, satisfies_system, solve, solve_anchored, Anchor, Valuation};
use crate::term::{for_each_tuple, Atom, EquationSystem, FlatTerm, Rhs, Signature};
use crate::Budget;

/// Whether every axiom of `p` holds in `alg`.
pub fn satisfies_presentation(alg: &FiniteAlgebra, p: &Presentation) -> Result<bool> {
    Ok(p.violation_in(alg)?.is_none())
}

/// Every map from the variables of `e` to the carrier that satisfies all
/// equations, with parameters read through `valuation`.
pub fn count_solutions(alg: &FiniteAlgebra, e: &EquationSystem, valuation: &Valuation, budget: Budget) -> Result<Vec<Valuation>> {
    if e.signature() != alg.signature() {
        return Err(Error::SignatureMismatch);
    }
    budget.check((alg.size() as u128).saturating_pow(e.len() as u32))?;
    let params: BTreeMap<&str, usize> = e
        .parameters()
        .iter()
        .map(|p| {
            let v = valuation.get(p).ok_or_else(|| Error::MissingAssignment(p.clone()))?;
            Ok((p.as_str(), alg.element(v)?))
        })
        .collect::<Result<_>>()?;
    let compiled: Vec<Choice> = e
        .equations()
        .map(|(_, rhs)| match rhs {
            Rhs::Param(p) => Choice::Const(params[p.as_str()]),
            Rhs::Term(t) => Choice::Op(
                alg.signature().index_of(&t.head).expect("validated system"),
                t.args
                    .iter()
                    .map(|a| match a {
                        Atom::Var(v) => Slot::Var(e.var_index(v).expect("validated system")),
                        Atom::Param(p) => Slot::Elem(params[p.as_str()]),
                    })
                    .collect(),
            ),
        })
        .collect();
    let mut out = Vec::new();
    let mut args = Vec::new();
    for_each_tuple(alg.size(), e.len(), |s| {
        if compiled.iter().enumerate().all(|(x, c)| s[x] == c.eval(alg, s, &mut args)) {
            out.push(
                e.variables()
                    .iter()
                    .zip(s)
                    .map(|(x, &v)| (x.clone(), alg.carrier()[v].clone()))
                    .collect(),
            );
        }
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Var(usize),
    Elem(usize),
}

/// A compiled right side.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Choice {
    Op(usize, Vec<Slot>),
    Const(usize),
}

impl Choice {
    #[inline]
    fn eval(&self, alg: &FiniteAlgebra, s: &[usize], args: &mut Vec<usize>) -> usize {
        match self {
            Choice::Const(c) => *c,
            Choice::Op(sym, slots) => {
                args.clear();
                args.extend(slots.iter().map(|slot| match *slot {
                    Slot::Var(x) => s[x],
                    Slot::Elem(c) => c,
                }));
                alg.apply(*sym, args)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    /// `system` has `solutions.len() != 1` solutions. Its parameters (if
    /// any) are named after carrier elements and denote themselves.
    Fails {
        system: EquationSystem,
        solutions: Vec<Valuation>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckVerdict {
    pub outcome: Outcome,
    /// Largest number of variables tested.
    pub max_vars: usize,
    /// Every system up to `max_vars` variables was examined.
    pub exhaustive: bool,
    pub systems_checked: u64,
}

impl CheckVerdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}

/// Every flat system over `1..=max_vars` variables has exactly one solution.
pub fn is_corecursive(alg: &FiniteAlgebra, max_vars: usize, budget: Budget) -> Result<CheckVerdict> {
    sweep(alg, max_vars, false, budget)
}

/// As [`is_corecursive`], with carrier elements allowed as right sides.
pub fn is_cia(alg: &FiniteAlgebra, max_vars: usize, budget: Budget) -> Result<CheckVerdict> {
    sweep(alg, max_vars, true, budget)
}

/// Variable names `x1, x2, …` made distinct from the carrier names.
fn variable_names(alg: &FiniteAlgebra, n: usize) -> Vec<String> {
    let mut prefix = "x".to_string();
    loop {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        if names.iter().all(|x| alg.element(x).is_err()) {
            return names;
        }
        prefix.push('_');
    }
}

fn sweep(alg: &FiniteAlgebra, max_vars: usize, constants: bool, budget: Budget) -> Result<CheckVerdict> {
    let sig = alg.signature();
    let size = alg.size();
    let mut checked = 0u64;
    for n in 1..=max_vars {
        let mut options = Vec::new();
        for (i, s) in sig.symbols().iter().enumerate() {
            for_each_tuple(n, s.arity, |args| options.push(Choice::Op(i, args.iter().map(|&x| Slot::Var(x)).collect())));
        }
        if constants {
            options.extend((0..size).map(Choice::Const));
        }
        let work = (options.len() as u128)
            .saturating_pow(n as u32)
            .saturating_mul((size as u128).saturating_pow(n as u32));
        budget.check(work)?;
        let mut failing: Option<Vec<usize>> = None;
        let mut args = Vec::new();
        for_each_tuple(options.len(), n, |pick| {
            if failing.is_some() {
                return;
            }
            checked += 1;
            let mut count = 0;
            for_each_tuple(size, n, |s| {
                if count < 2 && pick.iter().enumerate().all(|(x, &o)| s[x] == options[o].eval(alg, s, &mut args)) {
                    count += 1;
                }
            });
            if count != 1 {
                failing = Some(pick.to_vec());
            }
        });
        if let Some(pick) = failing {
            let vars = variable_names(alg, n);
            let params: Vec<String> = if constants { alg.carrier().to_vec() } else { Vec::new() };
            let equations = pick.iter().zip(&vars).map(|(&o, x)| {
                let rhs = match &options[o] {
                    Choice::Const(c) => Rhs::Param(alg.carrier()[*c].clone()),
                    Choice::Op(sym, slots) => Rhs::Term(FlatTerm::new(
                        sig.symbol(*sym).name.clone(),
                        slots
                            .iter()
                            .map(|slot| match slot {
                                Slot::Var(v) => Atom::var(vars[*v].clone()),
                                Slot::Elem(_) => unreachable!("enumerated systems use variables only"),
                            })
                            .collect(),
                    )),
                };
                (x.clone(), rhs)
            });
            let system = EquationSystem::new(sig.clone(), vars.clone(), params.clone(), equations.collect::<Vec<_>>())?;
            let identity: Valuation = params.iter().map(|p| (p.clone(), p.clone())).collect();
            let solutions = count_solutions(alg, &system, &identity, budget)?;
            return Ok(CheckVerdict {
                outcome: Outcome::Fails { system, solutions },
                max_vars: n,
                exhaustive: true,
                systems_checked: checked,
            });
        }
    }
    Ok(CheckVerdict {
        outcome: Outcome::Holds,
        max_vars,
        exhaustive: true,
        systems_checked: checked,
    })
}

/// Anchors, solutions, and whether they correspond one-to-one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorReport {
    pub anchors: Vec<Anchor>,
    /// The solution built from each anchor, in the same order.
    pub anchored: Vec<Valuation>,
    /// All solutions found by enumeration.
    pub solutions: Vec<Valuation>,
    pub bijective: bool,
}

/// Compares the anchor construction with brute-force enumeration of the
/// solutions of a unary system.
pub fn anchor_correspondence(alg: &FiniteAlgebra, e: &EquationSystem, valuation: &Valuation, budget: Budget) -> Result<AnchorReport> {
    let anchors = anchors(e, alg, valuation, budget)?;
    let solutions = count_solutions(alg, e, valuation, budget)?;
    let infinite: BTreeSet<String> = classify(e)?.infinite.into_iter().collect();
    let anchored = anchors
        .iter()
        .map(|s| solve_anchored(e, alg, valuation, s))
        .collect::<Result<Vec<_>>>()?;
    let mut bijective = anchors.len() == solutions.len();
    for sol in &anchored {
        bijective &= satisfies_system(e, alg, valuation, sol)?;
    }
    let distinct: BTreeSet<&Valuation> = anchored.iter().collect();
    bijective &= distinct.len() == anchored.len();
    for sol in &solutions {
        let restricted: Anchor = sol
            .iter()
            .filter(|(x, _)| infinite.contains(*x))
            .map(|(x, v)| (x.clone(), v.clone()))
            .collect();
        bijective &= anchors.contains(&restricted);
    }
    Ok(AnchorReport {
        anchors,
        anchored,
        solutions,
        bijective,
    })
}

/// A system whose solution has infinitely many parameter leaves, so that
/// it has no counterpart among trees with finitely many leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCiaWitness {
    pub symbol: String,
    pub system: EquationSystem,
    /// Solution of the first variable.
    pub solution: RationalTree,
    pub leaf_count: LeafCount,
    /// `levels[d - 1]`: the second parameter occurs as a leaf at depth `d`.
    pub levels: Vec<bool>,
}

impl NonCiaWitness {
    pub fn holds(&self) -> bool {
        self.leaf_count == LeafCount::Infinite && !self.solution.in_c() && self.levels.iter().all(|&b| b)
    }
}

/// Builds `x1 = α(x1, x2, …, xn)`, `xi = yi` for the first symbol `α` of
/// arity `n ≥ 2` and inspects its solution down to depth `k`.
pub fn witness_non_cia(sig: &Signature, k: usize) -> Result<NonCiaWitness> {
    let alpha = sig
        .symbols()
        .iter()
        .find(|s| s.arity >= 2)
        .ok_or(Error::NoLargeAritySymbol)?;
    let n = alpha.arity;
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let params: Vec<String> = (2..=n).map(|i| format!("y{i}")).collect();
    let mut equations = vec![(vars[0].clone(), Rhs::Term(FlatTerm::new(alpha.name.clone(), vars.iter().map(|v| Atom::var(v.clone())).collect())))];
    equations.extend((2..=n).map(|i| (format!("x{i}"), Rhs::Param(format!("y{i}")))));
    let system = EquationSystem::new(sig.clone(), vars, params, equations)?;
    let solution = solve(&system).remove("x1").expect("x1 is a variable");
    let levels = leaf_labels_by_depth(&solution, k)
        .into_iter()
        .map(|labels| labels.contains("y2"))
        .collect();
    Ok(NonCiaWitness {
        symbol: alpha.name.clone(),
        leaf_count: solution.count_param_leaves(),
        system,
        solution,
        levels,
    })
}

/// Rewrites every term right side once with the first axiom (in either
/// direction) whose side matches it. Variables occurring only on the other
/// side of the axiom are instantiated with the term's first atom.
pub fn rewrite_once(p: &Presentation, e: &EquationSystem) -> Result<EquationSystem> {
    if p.signature() != e.signature() {
        return Err(Error::SignatureMismatch);
    }
    let equations = e.equations().map(|(x, rhs)| {
        let rhs = match rhs {
            Rhs::Term(t) => Rhs::Term(rewrite_term(p, t).unwrap_or_else(|| t.clone())),
            Rhs::Param(y) => Rhs::Param(y.clone()),
        };
        (x.to_string(), rhs)
    });
    EquationSystem::new(
        e.signature().clone(),
        e.variables().to_vec(),
        e.parameters().to_vec(),
        equations.collect::<Vec<_>>(),
    )
}

fn rewrite_term(p: &Presentation, t: &FlatTerm) -> Option<FlatTerm> {
    for ax in p.axioms() {
        for (from, to) in [(&ax.lhs, &ax.rhs), (&ax.rhs, &ax.lhs)] {
            if from.head != t.head {
                continue;
            }
            let mut binding: BTreeMap<&Atom, &Atom> = BTreeMap::new();
            let consistent = from
                .args
                .iter()
                .zip(&t.args)
                .all(|(v, a)| *binding.entry(v).or_insert(a) == a);
            if !consistent {
                continue;
            }
            let fresh = to.args.iter().any(|v| !binding.contains_key(v));
            let default = t.args.first();
            if fresh && default.is_none() {
                continue;
            }
            let args = to
                .args
                .iter()
                .map(|v| binding.get(v).copied().or(default).expect("fresh variables have a default").clone())
                .collect();
            let out = FlatTerm::new(to.head.clone(), args);
            if &out != t {
                return Some(out);
            }
        }
    }
    None
}

/// Per-variable comparison of two systems' solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReport {
    pub rewritten: EquationSystem,
    pub verdicts: BTreeMap<String, Verdict3>,
    pub verdict: Verdict3,
}

/// Solves `e` and its one-step axiom rewrite and compares the solutions
/// variable by variable up to depth `k`.
pub fn square_check(p: &Presentation, e: &EquationSystem, k: usize, budget: Budget, models: &[FiniteAlgebra]) -> Result<SquareReport> {
    let rewritten = rewrite_once(p, e)?;
    square_check_against(p, e, &rewritten, k, budget, models)
}

/// As [`square_check`] with an explicitly given second system over the same
/// variables.
pub fn square_check_against(
    p: &Presentation,
    e: &EquationSystem,
    other: &EquationSystem,
    k: usize,
    budget: Budget,
    models: &[FiniteAlgebra],
) -> Result<SquareReport> {
    if other.len() != e.len() {
        return Err(Error::ParameterMismatch);
    }
    let left = solve(e);
    let right = solve(other);
    let mut verdicts = BTreeMap::new();
    let mut verdict = Verdict3::Equal;
    for x in e.variables() {
        let r = right.get(x).ok_or_else(|| Error::UndeclaredName(x.clone()))?;
        let v = rtree_equiv_upto(p, &left[x], r, k, budget, models)?;
        verdict = match (&verdict, &v) {
            (Verdict3::Distinct(_), _) => verdict,
            (_, Verdict3::Distinct(_)) => v.clone(),
            (Verdict3::Unknown(_), _) => verdict,
            _ => v.clone(),
        };
        verdicts.insert(x.clone(), v);
    }
    Ok(SquareReport {
        rewritten: other.clone(),
        verdicts,
        verdict,
    })
}

/// Convenience for callers that only need the combined verdict's witness.
pub fn first_distinct(report: &SquareReport) -> Option<(&str, &Witness)> {
    report.verdicts.iter().find_map(|(x, v)| match v {
        Verdict3::Distinct(w) => Some((x.as_str(), w)),
        _ => None,
    })
}
