//! Signatures, flat terms, finite trees and flat equation systems.
//!
//! A flat term `σ(a1, …, an)` is an element of `H_Σ A` for a finite atom set
//! `A`; an [`EquationSystem`] maps every recursion variable either to a flat
//! term or to a parameter, i.e. it is a flat equation morphism
//! `X → H_Σ X + Y` (terms may also mention parameters directly, which gives
//! `X → H_Σ(X + Y) + Y`).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Budget;

/// The label used for nodes cut off by level-`k` truncation.
pub const BOTTOM: &str = "⊥";
/// ASCII spelling of [`BOTTOM`], accepted and emitted in portable files.
pub const BOTTOM_ASCII: &str = "_bot";

pub fn is_reserved(name: &str) -> bool {
    name == BOTTOM || name == BOTTOM_ASCII
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A finitary signature: finitely many named operation symbols with arities.
///
/// Cloning is cheap; the symbol table is shared.
#[derive(Clone)]
pub struct Signature {
    symbols: Arc<[Symbol]>,
    index: Arc<HashMap<String, usize>>,
}

/// Checks that symbol names are pairwise distinct and that there is at least
/// one symbol.
pub fn validate_signature(symbols: &[Symbol]) -> Result<()> {
    if symbols.is_empty() {
        return Err(Error::EmptySignature);
    }
    let mut seen = BTreeSet::new();
    for s in symbols {
        if !seen.insert(s.name.as_str()) {
            return Err(Error::DuplicateSymbol(s.name.clone()));
        }
    }
    Ok(())
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        validate_signature(&symbols)?;
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), i))
            .collect();
        Ok(Signature {
            symbols: symbols.into(),
            index: Arc::new(index),
        })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn symbol(&self, index: usize) -> &Symbol {
        &self.symbols[index]
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    /// Returns the first symbol whose arity is not 1, if any.
    pub fn non_unary_symbol(&self) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.arity != 1)
    }

    pub fn require_unary(&self) -> Result<()> {
        match self.non_unary_symbol() {
            Some(s) => Err(Error::NonUnarySignature(s.name.clone(), s.arity)),
            None => Ok(()),
        }
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols
    }
}

impl Eq for Signature {}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.symbols.iter().map(|s| format!("{}/{}", s.name, s.arity)))
            .finish()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", s.name, s.arity)?;
        }
        Ok(())
    }
}

/// An argument position of a flat term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Var(String),
    Param(String),
}

impl Atom {
    pub fn var(name: impl Into<String>) -> Self {
        Atom::Var(name.into())
    }

    pub fn param(name: impl Into<String>) -> Self {
        Atom::Param(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Atom::Var(n) | Atom::Param(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Atom::Var(_))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A depth-one term `head(args…)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatTerm {
    pub head: String,
    pub args: Vec<Atom>,
}

impl FlatTerm {
    pub fn new(head: impl Into<String>, args: Vec<Atom>) -> Self {
        FlatTerm {
            head: head.into(),
            args,
        }
    }

    /// Shorthand for a term whose atoms are all variables.
    pub fn vars(head: impl Into<String>, names: &[&str]) -> Self {
        FlatTerm::new(head, names.iter().map(|n| Atom::var(*n)).collect())
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        let arity = sig
            .arity(&self.head)
            .ok_or_else(|| Error::UnknownSymbol(self.head.clone()))?;
        if arity != self.args.len() {
            return Err(Error::ArityMismatch {
                symbol: self.head.clone(),
                expected: arity,
                found: self.args.len(),
            });
        }
        Ok(())
    }

    /// Distinct atoms in order of first occurrence.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out: Vec<&Atom> = Vec::new();
        for a in &self.args {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    pub fn has_distinct_args(&self) -> bool {
        self.atoms().len() == self.args.len()
    }
}

impl fmt::Display for FlatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.head)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// All flat terms `σ(a1, …, an)` over `atoms`, ordered by symbol index and
/// then lexicographically by atom indices.
pub fn enumerate_flat_terms(sig: &Signature, atoms: &[Atom], budget: Budget) -> Result<Vec<FlatTerm>> {
    let count = flat_term_count(sig, atoms.len());
    budget.check(count)?;
    let mut out = Vec::with_capacity(count as usize);
    for sym in sig.symbols() {
        for_each_tuple(atoms.len(), sym.arity, |idx| {
            out.push(FlatTerm::new(
                sym.name.clone(),
                idx.iter().map(|&i| atoms[i].clone()).collect(),
            ));
        });
    }
    Ok(out)
}

/// `Σ_n |Σ_n| · atoms^n`, saturating.
pub fn flat_term_count(sig: &Signature, atoms: usize) -> u128 {
    sig.symbols()
        .iter()
        .map(|s| (atoms as u128).saturating_pow(s.arity as u32))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Calls `f` on every tuple in `{0..base}^len` in lexicographic order.
pub(crate) fn for_each_tuple(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if len == 0 {
        f(&[]);
        return;
    }
    if base == 0 {
        return;
    }
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < base {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Replaces every atom of `t` through `v`.
pub fn substitute_flat(t: &FlatTerm, v: &BTreeMap<Atom, Atom>) -> Result<FlatTerm> {
    let args = t
        .args
        .iter()
        .map(|a| v.get(a).cloned().ok_or_else(|| Error::UnboundAtom(a.name().to_string())))
        .collect::<Result<_>>()?;
    Ok(FlatTerm::new(t.head.clone(), args))
}

/// A finite Σ-tree over parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteTree {
    Op(String, Vec<FiniteTree>),
    Leaf(String),
}

impl FiniteTree {
    pub fn op(head: impl Into<String>, children: Vec<FiniteTree>) -> Self {
        FiniteTree::Op(head.into(), children)
    }

    pub fn leaf(name: impl Into<String>) -> Self {
        FiniteTree::Leaf(name.into())
    }

    pub fn bottom() -> Self {
        FiniteTree::Leaf(BOTTOM.to_string())
    }

    pub fn depth(&self) -> usize {
        match self {
            FiniteTree::Leaf(_) => 0,
            FiniteTree::Op(_, cs) if cs.is_empty() => 0,
            FiniteTree::Op(_, cs) => 1 + cs.iter().map(FiniteTree::depth).max().unwrap_or(0),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            FiniteTree::Leaf(_) => Ok(()),
            FiniteTree::Op(h, cs) => {
                let arity = sig.arity(h).ok_or_else(|| Error::UnknownSymbol(h.clone()))?;
                if arity != cs.len() {
                    return Err(Error::ArityMismatch {
                        symbol: h.clone(),
                        expected: arity,
                        found: cs.len(),
                    });
                }
                cs.iter().try_for_each(|c| c.check(sig))
            }
        }
    }

    /// Leaf labels by depth: entry `d` lists labels of leaves at depth `d`.
    pub fn leaves_by_depth(&self) -> Vec<Vec<&str>> {
        fn go<'a>(t: &'a FiniteTree, d: usize, out: &mut Vec<Vec<&'a str>>) {
            match t {
                FiniteTree::Leaf(l) => {
                    if out.len() <= d {
                        out.resize_with(d + 1, Vec::new);
                    }
                    out[d].push(l);
                }
                FiniteTree::Op(_, cs) => cs.iter().for_each(|c| go(c, d + 1, out)),
            }
        }
        let mut out = Vec::new();
        go(self, 0, &mut out);
        out
    }

    /// Number of leaves labeled `label`.
    pub fn count_leaves(&self, pred: &dyn Fn(&str) -> bool) -> u64 {
        match self {
            FiniteTree::Leaf(l) => u64::from(pred(l)),
            FiniteTree::Op(_, cs) => cs.iter().map(|c| c.count_leaves(pred)).sum(),
        }
    }
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteTree::Leaf(l) if l == BOTTOM => f.write_str(BOTTOM_ASCII),
            FiniteTree::Leaf(l) => f.write_str(l),
            FiniteTree::Op(h, cs) => {
                write!(f, "{h}(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Right-hand side of a flat equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rhs {
    Term(FlatTerm),
    Param(String),
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Term(t) => write!(f, "{t}"),
            Rhs::Param(p) => f.write_str(p),
        }
    }
}

/// A flat equation system `x ≈ rhs(x)` over variables `X` and parameters `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    signature: Signature,
    variables: Vec<String>,
    parameters: Vec<String>,
    equations: Vec<Rhs>,
    var_index: HashMap<String, usize>,
    root: Option<usize>,
}

impl EquationSystem {
    /// Builds and validates a system. `equations` must define every declared
    /// variable exactly once.
    pub fn new<V, P, E>(signature: Signature, variables: V, parameters: P, equations: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        P: IntoIterator,
        P::Item: Into<String>,
        E: IntoIterator<Item = (String, Rhs)>,
    {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let parameters: Vec<String> = parameters.into_iter().map(Into::into).collect();
        let mut var_index = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if is_reserved(v) {
                return Err(Error::ReservedParameter(v.clone()));
            }
            if var_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateName(v.clone()));
            }
        }
        let mut param_set = BTreeSet::new();
        for p in &parameters {
            if is_reserved(p) {
                return Err(Error::ReservedParameter(p.clone()));
            }
            if var_index.contains_key(p) {
                return Err(Error::NameClash(p.clone()));
            }
            if !param_set.insert(p.as_str()) {
                return Err(Error::DuplicateName(p.clone()));
            }
        }
        let mut slots: Vec<Option<Rhs>> = vec![None; variables.len()];
        for (name, rhs) in equations {
            let i = *var_index
                .get(&name)
                .ok_or_else(|| Error::UndeclaredName(name.clone()))?;
            match &rhs {
                Rhs::Param(p) => {
                    if !param_set.contains(p.as_str()) {
                        return Err(Error::UndeclaredName(p.clone()));
                    }
                }
                Rhs::Term(t) => {
                    t.check(&signature)?;
                    for a in &t.args {
                        let ok = match a {
                            Atom::Var(v) => var_index.contains_key(v),
                            Atom::Param(p) => param_set.contains(p.as_str()),
                        };
                        if !ok {
                            return Err(Error::UndeclaredName(a.name().to_string()));
                        }
                    }
                }
            }
            if slots[i].replace(rhs).is_some() {
                return Err(Error::DuplicateName(name));
            }
        }
        let equations = slots
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::MissingEquation(variables[i].clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(EquationSystem {
            signature,
            variables,
            parameters,
            equations,
            var_index,
            root: None,
        })
    }

    /// Marks `var` as the distinguished variable of the system.
    pub fn with_root(mut self, var: &str) -> Result<Self> {
        let i = self
            .var_index(var)
            .ok_or_else(|| Error::UndeclaredName(var.to_string()))?;
        self.root = Some(i);
        Ok(self)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_index.get(name).copied()
    }

    pub fn rhs(&self, var: &str) -> Option<&Rhs> {
        self.var_index(var).map(|i| &self.equations[i])
    }

    pub fn rhs_at(&self, index: usize) -> &Rhs {
        &self.equations[index]
    }

    /// `(variable, rhs)` pairs in declaration order.
    pub fn equations(&self) -> impl Iterator<Item = (&str, &Rhs)> {
        self.variables
            .iter()
            .map(String::as_str)
            .zip(self.equations.iter())
    }

    /// The distinguished variable, defaulting to the first one.
    pub fn root(&self) -> Option<&str> {
        match self.root {
            Some(i) => Some(&self.variables[i]),
            None => self.variables.first().map(String::as_str),
        }
    }

    pub fn has_explicit_root(&self) -> bool {
        self.root.is_some()
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }
}
