//! Presentations of finitary set functors by a signature and flat axioms.
//!
//! An axiom `l = r` between flat terms over abstract variables stands for
//! every substitution instance of itself. Over a finite atom set the
//! instances generate an equivalence on flat terms (the kernel); its classes
//! are the elements of `HX`.
//!
//! On trees, axioms may be applied at any node. [`tree_equiv_bounded`]
//! decides the resulting congruence by saturation with a budget and falls
//! back to finite models for separation; [`rtree_equiv_upto`] lifts it to
//! rational trees through their depth-`k` cuts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::graph::UnionFind;
use crate::rtree::{RationalTree, Step};
use crate::term::{enumerate_flat_terms, for_each_tuple, substitute_flat, Atom, FiniteTree, FlatTerm, Signature};
use crate::Budget;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axiom {
    pub lhs: FlatTerm,
    pub rhs: FlatTerm,
}

impl Axiom {
    pub fn new(lhs: FlatTerm, rhs: FlatTerm) -> Self {
        Axiom { lhs, rhs }
    }

    /// Variables of both sides, in order of first occurrence.
    pub fn variables(&self) -> Vec<&Atom> {
        let mut out = self.lhs.atoms();
        for a in self.rhs.atoms() {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    /// Both sides use the same variables.
    pub fn is_regular(&self) -> bool {
        let l: BTreeSet<_> = self.lhs.args.iter().collect();
        let r: BTreeSet<_> = self.rhs.args.iter().collect();
        l == r
    }

    fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    signature: Signature,
    axioms: Vec<Axiom>,
}

impl Presentation {
    pub fn new(signature: Signature, axioms: Vec<Axiom>) -> Result<Self> {
        for ax in &axioms {
            for side in [&ax.lhs, &ax.rhs] {
                side.check(&signature)?;
                if let Some(p) = side.args.iter().find(|a| !a.is_var()) {
                    return Err(Error::AxiomParameter(p.name().to_string()));
                }
            }
        }
        Ok(Presentation { signature, axioms })
    }

    /// The presentation without axioms: the polynomial functor itself.
    pub fn free(signature: Signature) -> Self {
        Presentation {
            signature,
            axioms: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    /// Whether every axiom holds in `alg` under every assignment of its
    /// variables; on failure returns the axiom index and the assignment.
    pub fn violation_in(&self, alg: &FiniteAlgebra) -> Result<Option<(usize, BTreeMap<String, String>)>> {
        if alg.signature() != &self.signature {
            return Err(Error::SignatureMismatch);
        }
        let sym = |t: &FlatTerm| self.signature.index_of(&t.head).expect("validated axiom");
        for (i, ax) in self.axioms.iter().enumerate() {
            let vars = ax.variables();
            let pos = |a: &Atom| vars.iter().position(|v| *v == a).expect("axiom variable");
            let lhs: Vec<usize> = ax.lhs.args.iter().map(pos).collect();
            let rhs: Vec<usize> = ax.rhs.args.iter().map(pos).collect();
            let (ls, rs) = (sym(&ax.lhs), sym(&ax.rhs));
            let mut found = None;
            for_each_tuple(alg.size(), vars.len(), |v| {
                if found.is_some() {
                    return;
                }
                let l: Vec<usize> = lhs.iter().map(|&j| v[j]).collect();
                let r: Vec<usize> = rhs.iter().map(|&j| v[j]).collect();
                if alg.apply(ls, &l) != alg.apply(rs, &r) {
                    found = Some(v.to_vec());
                }
            });
            if let Some(v) = found {
                let assignment = vars
                    .iter()
                    .zip(v)
                    .map(|(a, e)| (a.name().to_string(), alg.carrier()[e].clone()))
                    .collect();
                return Ok(Some((i, assignment)));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signature {}", self.signature)?;
        for ax in &self.axioms {
            write!(f, "\naxiom {ax}")?;
        }
        Ok(())
    }
}

/// The kernel equivalence on all flat terms over a finite atom set.
#[derive(Debug, Clone)]
pub struct Kernel {
    terms: Vec<FlatTerm>,
    index: HashMap<FlatTerm, usize>,
    /// Class number per term; classes are numbered by first member.
    class: Vec<usize>,
    class_count: usize,
}

impl Kernel {
    pub fn new(p: &Presentation, atoms: &[Atom], budget: Budget) -> Result<Self> {
        let mut distinct: Vec<Atom> = Vec::new();
        for a in atoms {
            if !distinct.contains(a) {
                distinct.push(a.clone());
            }
        }
        let atoms = distinct;
        let terms = enumerate_flat_terms(&p.signature, &atoms, budget)?;
        let instances = p.axioms.iter().fold(terms.len() as u128, |acc, ax| {
            acc.saturating_add((atoms.len() as u128).saturating_pow(ax.variables().len() as u32))
        });
        budget.check(instances)?;
        let index: HashMap<FlatTerm, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut uf = UnionFind::new(terms.len());
        for ax in &p.axioms {
            let vars: Vec<Atom> = ax.variables().into_iter().cloned().collect();
            for_each_tuple(atoms.len(), vars.len(), |v| {
                let sub: BTreeMap<Atom, Atom> = vars.iter().cloned().zip(v.iter().map(|&i| atoms[i].clone())).collect();
                let l = substitute_flat(&ax.lhs, &sub).expect("all axiom variables bound");
                let r = substitute_flat(&ax.rhs, &sub).expect("all axiom variables bound");
                uf.union(index[&l], index[&r]);
            });
        }
        let mut number = HashMap::new();
        let class: Vec<usize> = (0..terms.len())
            .map(|i| {
                let root = uf.find(i);
                let next = number.len();
                *number.entry(root).or_insert(next)
            })
            .collect();
        Ok(Kernel {
            terms,
            index,
            class,
            class_count: number.len(),
        })
    }

    pub fn terms(&self) -> &[FlatTerm] {
        &self.terms
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn class_of(&self, t: &FlatTerm) -> Result<usize> {
        match self.index.get(t) {
            Some(&i) => Ok(self.class[i]),
            None => {
                let foreign = t
                    .args
                    .iter()
                    .find(|a| !self.terms.iter().any(|u| u.args.contains(a)))
                    .map(|a| a.name().to_string());
                Err(match foreign {
                    Some(a) => Error::ForeignAtom(a),
                    None => Error::UnknownSymbol(t.head.clone()),
                })
            }
        }
    }

    pub fn equal(&self, t: &FlatTerm, u: &FlatTerm) -> Result<bool> {
        Ok(self.class_of(t)? == self.class_of(u)?)
    }

    /// Members of every class, in enumeration order.
    pub fn classes(&self) -> Vec<Vec<FlatTerm>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (t, &c) in self.terms.iter().zip(&self.class) {
            out[c].push(t.clone());
        }
        out
    }
}

/// Whether `t` and `u` are identified by the kernel over `atoms`.
pub fn kernel_equal(p: &Presentation, t: &FlatTerm, u: &FlatTerm, atoms: &[Atom], budget: Budget) -> Result<bool> {
    for a in t.args.iter().chain(&u.args) {
        if !atoms.contains(a) {
            return Err(Error::ForeignAtom(a.name().to_string()));
        }
    }
    Kernel::new(p, atoms, budget)?.equal(t, u)
}

/// The elements of `HX` for `X = atoms`, as classes of flat terms.
pub fn hx_quotient(p: &Presentation, atoms: &[Atom], budget: Budget) -> Result<Vec<Vec<FlatTerm>>> {
    Ok(Kernel::new(p, atoms, budget)?.classes())
}

/// `count` distinct variable atoms `x1, x2, …`.
pub fn probe_atoms(count: usize) -> Vec<Atom> {
    (1..=count).map(|i| Atom::var(format!("x{i}"))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedCondition {
    /// A term with pairwise distinct variables is identified with a term
    /// missing one of them.
    LostVariable,
    /// Two terms with pairwise distinct variables but different symbols are
    /// identified.
    DistinctSymbols,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: ReducedCondition,
    pub left: FlatTerm,
    pub right: FlatTerm,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.condition {
            ReducedCondition::LostVariable => "right side drops a variable of the left side",
            ReducedCondition::DistinctSymbols => "different symbols with distinct variables",
        };
        write!(f, "{} ~ {}: {why}", self.left, self.right)
    }
}

/// Smallest probe size at which [`is_reduced`] is conclusive.
pub fn min_probe_size(p: &Presentation) -> usize {
    2 * p.signature.max_arity()
}

/// Scans all kernel pairs over `probe_size` atoms for a violation of
/// reducedness. `None` means the presentation is reduced.
pub fn is_reduced(p: &Presentation, probe_size: usize, budget: Budget) -> Result<Option<Violation>> {
    let required = min_probe_size(p);
    if probe_size < required {
        return Err(Error::ProbeTooSmall {
            given: probe_size,
            required,
        });
    }
    let kernel = Kernel::new(p, &probe_atoms(probe_size), budget)?;
    let classes = kernel.classes();
    let pairs = || {
        classes.iter().flat_map(|c| {
            c.iter()
                .filter(|t| t.has_distinct_args())
                .flat_map(move |t| c.iter().filter(move |u| *u != t).map(move |u| (t, u)))
        })
    };
    let lost = pairs()
        .find(|(t, u)| !t.args.iter().all(|a| u.args.contains(a)))
        .map(|(t, u)| (ReducedCondition::LostVariable, t, u));
    let merged = || {
        pairs()
            .find(|(t, u)| u.has_distinct_args() && u.head != t.head)
            .map(|(t, u)| (ReducedCondition::DistinctSymbols, t, u))
    };
    Ok(lost.or_else(merged).map(|(condition, t, u)| Violation {
        condition,
        left: t.clone(),
        right: u.clone(),
    }))
}

/// Symbol map produced by [`reduce`]: an old term `σ(a1, …, an)` becomes
/// `τ(a_{i1}, …, a_{ik})` for `σ ↦ (τ, [i1, …, ik])`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Translation {
    map: BTreeMap<String, (String, Vec<usize>)>,
}

impl Translation {
    pub fn get(&self, symbol: &str) -> Option<(&str, &[usize])> {
        self.map.get(symbol).map(|(t, idx)| (t.as_str(), idx.as_slice()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &[usize])> {
        self.map.iter().map(|(s, (t, idx))| (s.as_str(), t.as_str(), idx.as_slice()))
    }

    /// Identity on symbol names and coordinates.
    pub fn is_identity(&self) -> bool {
        self.map
            .iter()
            .all(|(s, (t, idx))| s == t && idx.iter().enumerate().all(|(i, &j)| i == j))
    }

    pub fn apply(&self, t: &FlatTerm) -> Result<FlatTerm> {
        let (head, idx) = self.map.get(&t.head).ok_or_else(|| Error::UnknownSymbol(t.head.clone()))?;
        Ok(FlatTerm::new(head.clone(), idx.iter().map(|&i| t.args[i].clone()).collect()))
    }

    fn then(&self, next: &Translation) -> Translation {
        let map = self
            .map
            .iter()
            .map(|(s, (mid, idx))| {
                let (t, idx2) = &next.map[mid];
                (s.clone(), (t.clone(), idx2.iter().map(|&j| idx[j]).collect()))
            })
            .collect();
        Translation { map }
    }
}

fn translate(p: &Presentation, signature: Signature, tr: &Translation) -> Result<Presentation> {
    let mut axioms: Vec<Axiom> = Vec::new();
    for ax in &p.axioms {
        let new = Axiom::new(tr.apply(&ax.lhs)?, tr.apply(&ax.rhs)?);
        let swapped = Axiom::new(new.rhs.clone(), new.lhs.clone());
        if !new.is_trivial() && !axioms.contains(&new) && !axioms.contains(&swapped) {
            axioms.push(new);
        }
    }
    Presentation::new(signature, axioms)
}

/// Drops inessential coordinates of every symbol, then merges symbols
/// identified with pairwise distinct variables on both sides, keeping the
/// lexicographically least name of each group.
pub fn reduce(p: &Presentation, budget: Budget) -> Result<(Presentation, Translation)> {
    let sig = &p.signature;
    let n = sig.max_arity();
    let atoms = probe_atoms(n + 1);
    let z = &atoms[n];
    let kernel = Kernel::new(p, &atoms, budget)?;

    let mut drop = Translation::default();
    let mut dropped_sig = Vec::new();
    for s in sig.symbols() {
        let full = FlatTerm::new(s.name.clone(), atoms[..s.arity].to_vec());
        let essential: Vec<usize> = (0..s.arity)
            .filter(|&i| {
                let mut padded = full.clone();
                padded.args[i] = z.clone();
                !kernel.equal(&full, &padded).expect("probe terms")
            })
            .collect();
        dropped_sig.push((s.name.clone(), essential.len()));
        drop.map.insert(s.name.clone(), (s.name.clone(), essential));
    }
    let dropped_sig = Signature::new(dropped_sig)?;
    let stage = translate(p, dropped_sig.clone(), &drop)?;

    let probe = probe_atoms(min_probe_size(&stage).max(1));
    let kernel = Kernel::new(&stage, &probe, budget)?;
    let mut names: Vec<&str> = dropped_sig.symbols().iter().map(|s| s.name.as_str()).collect();
    names.sort();
    let mut merge = Translation::default();
    for &s in &names {
        if merge.map.contains_key(s) {
            continue;
        }
        let arity = dropped_sig.arity(s).expect("symbol of stage signature");
        let xs = &probe[..arity];
        merge.map.insert(s.to_string(), (s.to_string(), (0..arity).collect()));
        let class = kernel.class_of(&FlatTerm::new(s, xs.to_vec()))?;
        for u in kernel.terms().iter().filter(|u| u.head != s && u.has_distinct_args()) {
            if merge.map.contains_key(&u.head) || kernel.class_of(u)? != class || u.args.len() != arity {
                continue;
            }
            // u(a) ↦ s(b) with b_i = a_j where u's j-th argument is x_i
            let idx: Option<Vec<usize>> = xs.iter().map(|x| u.args.iter().position(|a| a == x)).collect();
            if let Some(idx) = idx {
                merge.map.insert(u.head.clone(), (s.to_string(), idx));
            }
        }
    }
    let reduced_sig = Signature::new(
        dropped_sig
            .symbols()
            .iter()
            .filter(|s| merge.map[&s.name].0 == s.name)
            .map(|s| (s.name.clone(), s.arity)),
    )?;
    let total = drop.then(&merge);
    Ok((translate(p, reduced_sig, &total)?, total))
}

/// Adds a constant `c_σ` and the axiom `σ(x1, …, xn) = c_σ` for every
/// symbol `σ` whose terms are all identified with each other but not yet
/// with any constant.
pub fn make_constants_explicit(p: &Presentation, budget: Budget) -> Result<Presentation> {
    let mut current = p.clone();
    let symbols: Vec<(String, usize)> = p.signature.symbols().iter().map(|s| (s.name.clone(), s.arity)).collect();
    for (name, arity) in symbols.into_iter().filter(|(_, a)| *a > 0) {
        let atoms = probe_atoms(arity + 1);
        let kernel = Kernel::new(&current, &atoms, budget)?;
        let t = FlatTerm::new(name.clone(), atoms[..arity].to_vec());
        let collapsed = FlatTerm::new(name.clone(), vec![atoms[arity].clone(); arity]);
        if !kernel.equal(&t, &collapsed)? {
            continue;
        }
        let class = kernel.class_of(&t)?;
        let has_constant = kernel.terms().iter().any(|u| u.args.is_empty() && kernel.class_of(u).ok() == Some(class));
        if has_constant {
            continue;
        }
        let mut constant = format!("c_{name}");
        while current.signature.index_of(&constant).is_some() {
            constant.push('_');
        }
        let mut syms: Vec<(String, usize)> = current
            .signature
            .symbols()
            .iter()
            .map(|s| (s.name.clone(), s.arity))
            .collect();
        syms.push((constant.clone(), 0));
        let mut axioms = current.axioms.clone();
        axioms.push(Axiom::new(t, FlatTerm::new(constant, vec![])));
        current = Presentation::new(Signature::new(syms)?, axioms)?;
    }
    Ok(current)
}

/// Evidence that two trees are not related.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A model satisfying the axioms, given by its index in the supplied
    /// list, evaluates the trees to different elements under `valuation`.
    Model {
        model: usize,
        valuation: BTreeMap<String, String>,
        left: String,
        right: String,
    },
    /// Saturation reached a fixpoint without relating the trees, and every
    /// axiom uses the same variables on both sides, so no chain of axiom
    /// applications connects them.
    Saturated,
    /// The cuts at `depth` are already unrelated.
    Cut { depth: usize, reason: Box<Witness> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Model {
                model,
                valuation,
                left,
                right,
            } => {
                write!(f, "model #{model} separates them ({left} vs {right}) under")?;
                for (k, v) in valuation {
                    write!(f, " {k}={v}")?;
                }
                Ok(())
            }
            Witness::Saturated => f.write_str("saturation closed without relating them"),
            Witness::Cut { depth, reason } => write!(f, "cuts at depth {depth} differ: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict3 {
    Equal,
    Distinct(Witness),
    /// Neither proof nor refutation within the given budget.
    Unknown(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ENode {
    Leaf(String),
    Op(usize, Vec<usize>),
}

/// Congruence closure over tree nodes.
struct EGraph<'a> {
    sig: &'a Signature,
    uf: UnionFind,
    memo: HashMap<ENode, usize>,
    nodes: Vec<ENode>,
    node_class: Vec<usize>,
}

impl<'a> EGraph<'a> {
    fn new(sig: &'a Signature) -> Self {
        EGraph {
            sig,
            uf: UnionFind::default(),
            memo: HashMap::new(),
            nodes: Vec::new(),
            node_class: Vec::new(),
        }
    }

    fn canonical(&mut self, node: &ENode) -> ENode {
        match node {
            ENode::Leaf(l) => ENode::Leaf(l.clone()),
            ENode::Op(s, cs) => ENode::Op(*s, cs.iter().map(|&c| self.uf.find(c)).collect()),
        }
    }

    /// Class of `node`, adding it if new. The flag reports a new node.
    fn add(&mut self, node: ENode) -> (usize, bool) {
        let node = self.canonical(&node);
        if let Some(&c) = self.memo.get(&node) {
            return (self.uf.find(c), false);
        }
        let c = self.uf.make();
        self.memo.insert(node.clone(), c);
        self.nodes.push(node);
        self.node_class.push(c);
        (c, true)
    }

    fn add_finite(&mut self, t: &FiniteTree) -> Result<usize> {
        Ok(match t {
            FiniteTree::Leaf(l) => self.add(ENode::Leaf(l.clone())).0,
            FiniteTree::Op(h, cs) => {
                let s = self.sig.index_of(h).ok_or_else(|| Error::UnknownSymbol(h.clone()))?;
                let cs = cs.iter().map(|c| self.add_finite(c)).collect::<Result<Vec<_>>>()?;
                self.add(ENode::Op(s, cs)).0
            }
        })
    }

    /// Adds the depth-`k` cut of a rational tree without unfolding shared
    /// states more than once per remaining depth.
    fn add_cut(&mut self, t: &RationalTree, k: usize) -> usize {
        let mut memo: HashMap<(usize, usize), usize> = HashMap::new();
        self.add_cut_at(t, t.root(), k, &mut memo)
    }

    fn add_cut_at(&mut self, t: &RationalTree, s: usize, k: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if let Some(&c) = memo.get(&(s, k)) {
            return c;
        }
        let c = if k == 0 {
            self.add(ENode::Leaf(crate::term::BOTTOM.to_string())).0
        } else {
            match t.step(s) {
                Step::Leaf(l) => self.add(ENode::Leaf(l.clone())).0,
                Step::Op { symbol, children } => {
                    let sym = self.sig.index_of(symbol).expect("tree over this signature");
                    let cs = children.iter().map(|&c| self.add_cut_at(t, c, k - 1, memo)).collect();
                    self.add(ENode::Op(sym, cs)).0
                }
            }
        };
        memo.insert((s, k), c);
        c
    }

    /// Restores the congruence invariant after unions.
    fn rebuild(&mut self) {
        loop {
            let mut memo: HashMap<ENode, usize> = HashMap::with_capacity(self.nodes.len());
            let mut merged = false;
            for i in 0..self.nodes.len() {
                let node = self.canonical(&self.nodes[i].clone());
                let c = self.uf.find(self.node_class[i]);
                match memo.get(&node) {
                    Some(&d) => merged |= self.uf.union(c, d),
                    None => {
                        memo.insert(node.clone(), c);
                    }
                }
                self.nodes[i] = node;
            }
            self.memo = memo;
            if !merged {
                return;
            }
        }
    }

    /// One pass of every axiom in both directions over every node. Returns
    /// whether anything changed, or `None` when the budget ran out.
    fn apply_axioms(&mut self, rules: &[(usize, Vec<usize>, usize, Vec<usize>, usize)], work: &mut u64, budget: u64) -> Option<bool> {
        let mut changed = false;
        let classes: Vec<usize> = {
            let mut set: Vec<usize> = (0..self.node_class.len()).map(|i| self.uf.find(self.node_class[i])).collect();
            set.sort_unstable();
            set.dedup();
            set
        };
        let count = self.nodes.len();
        for &(lhead, ref lvars, rhead, ref rvars, nvars) in rules {
            for i in 0..count {
                let children = match &self.nodes[i] {
                    ENode::Op(s, cs) if *s == lhead => cs.clone(),
                    _ => continue,
                };
                let mut binding: Vec<Option<usize>> = vec![None; nvars];
                let mut matches = true;
                for (&v, &c) in lvars.iter().zip(&children) {
                    let c = self.uf.find(c);
                    match binding[v] {
                        Some(b) if b != c => {
                            matches = false;
                            break;
                        }
                        _ => binding[v] = Some(c),
                    }
                }
                if !matches {
                    continue;
                }
                let fresh: Vec<usize> = (0..nvars).filter(|&v| binding[v].is_none() && rvars.contains(&v)).collect();
                let mut exhausted = false;
                let target = self.node_class[i];
                for_each_tuple(classes.len(), fresh.len(), |pick| {
                    if exhausted {
                        return;
                    }
                    *work += 1;
                    if *work > budget {
                        exhausted = true;
                        return;
                    }
                    let mut b = binding.clone();
                    for (&v, &j) in fresh.iter().zip(pick) {
                        b[v] = Some(classes[j]);
                    }
                    let args = rvars.iter().map(|&v| b[v].expect("bound")).collect();
                    let (c, _) = self.add(ENode::Op(rhead, args));
                    changed |= self.uf.union(c, target);
                });
                if exhausted {
                    return None;
                }
            }
        }
        Some(changed)
    }
}

/// Compiled rewrite rules: (lhs symbol, lhs variable slots, rhs symbol, rhs
/// variable slots, variable count), one per axiom direction.
fn rules(p: &Presentation) -> Vec<(usize, Vec<usize>, usize, Vec<usize>, usize)> {
    let mut out = Vec::new();
    for ax in &p.axioms {
        let vars = ax.variables();
        let slots = |t: &FlatTerm| -> Vec<usize> {
            t.args.iter().map(|a| vars.iter().position(|v| *v == a).expect("axiom variable")).collect()
        };
        let (l, r) = (slots(&ax.lhs), slots(&ax.rhs));
        let (ls, rs) = (
            p.signature.index_of(&ax.lhs.head).expect("validated axiom"),
            p.signature.index_of(&ax.rhs.head).expect("validated axiom"),
        );
        out.push((ls, l.clone(), rs, r.clone(), vars.len()));
        out.push((rs, r, ls, l, vars.len()));
    }
    out
}

enum Saturation {
    Equal,
    /// Fixpoint reached without relating the roots.
    Closed,
    OutOfBudget,
}

fn saturate(g: &mut EGraph, p: &Presentation, a: usize, b: usize, budget: Budget) -> Saturation {
    let rules = rules(p);
    let mut work = 0u64;
    loop {
        g.rebuild();
        if g.uf.find(a) == g.uf.find(b) {
            return Saturation::Equal;
        }
        match g.apply_axioms(&rules, &mut work, budget.limit()) {
            None => {
                g.rebuild();
                return if g.uf.find(a) == g.uf.find(b) {
                    Saturation::Equal
                } else {
                    Saturation::OutOfBudget
                };
            }
            Some(false) => return Saturation::Closed,
            Some(true) => {}
        }
    }
}

/// Looks for a model satisfying `p` that separates the two root nodes of
/// the freshly built graph (no unions yet, so class = node index).
fn separate(g: &EGraph, p: &Presentation, a: usize, b: usize, models: &[FiniteAlgebra], budget: Budget) -> Option<Witness> {
    let labels: Vec<&str> = g
        .nodes
        .iter()
        .filter_map(|n| match n {
            ENode::Leaf(l) => Some(l.as_str()),
            ENode::Op(..) => None,
        })
        .collect();
    for (mi, m) in models.iter().enumerate() {
        if m.signature() != &p.signature || !matches!(p.violation_in(m), Ok(None)) {
            continue;
        }
        let needed = (m.size() as u128).saturating_pow(labels.len() as u32);
        if budget.check(needed).is_err() {
            continue;
        }
        let mut found = None;
        let mut value = vec![0usize; g.nodes.len()];
        for_each_tuple(m.size(), labels.len(), |v| {
            if found.is_some() {
                return;
            }
            let mut leaf = 0;
            for (i, n) in g.nodes.iter().enumerate() {
                value[i] = match n {
                    ENode::Leaf(_) => {
                        leaf += 1;
                        v[leaf - 1]
                    }
                    ENode::Op(s, cs) => {
                        let args: Vec<usize> = cs.iter().map(|&c| value[c]).collect();
                        m.apply(*s, &args)
                    }
                };
            }
            if value[a] != value[b] {
                found = Some(Witness::Model {
                    model: mi,
                    valuation: labels
                        .iter()
                        .zip(v)
                        .map(|(l, &e)| (l.to_string(), m.carrier()[e].clone()))
                        .collect(),
                    left: m.carrier()[value[a]].clone(),
                    right: m.carrier()[value[b]].clone(),
                });
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn decide(mut g: EGraph, p: &Presentation, a: usize, b: usize, budget: Budget, models: &[FiniteAlgebra]) -> Verdict3 {
    if a == b {
        return Verdict3::Equal;
    }
    let separated = separate(&g, p, a, b, models, budget);
    match saturate(&mut g, p, a, b, budget) {
        Saturation::Equal => Verdict3::Equal,
        _ if separated.is_some() => Verdict3::Distinct(separated.expect("checked")),
        Saturation::Closed if p.axioms.iter().all(Axiom::is_regular) => Verdict3::Distinct(Witness::Saturated),
        _ => Verdict3::Unknown(budget.limit()),
    }
}

/// Bounded decision of the congruence generated by the axioms on finite
/// trees. Leaf labels (including `⊥`) are treated as distinct constants.
pub fn tree_equiv_bounded(
    p: &Presentation,
    t: &FiniteTree,
    u: &FiniteTree,
    budget: Budget,
    models: &[FiniteAlgebra],
) -> Result<Verdict3> {
    let mut g = EGraph::new(&p.signature);
    let a = g.add_finite(t)?;
    let b = g.add_finite(u)?;
    Ok(decide(g, p, a, b, budget, models))
}

/// [`tree_equiv_bounded`] on the cuts at depths `1..=k`. The first
/// refuted depth gives `Distinct`; otherwise any undecided depth gives
/// `Unknown`.
pub fn rtree_equiv_upto(
    p: &Presentation,
    t: &RationalTree,
    u: &RationalTree,
    k: usize,
    budget: Budget,
    models: &[FiniteAlgebra],
) -> Result<Verdict3> {
    if t.signature() != &p.signature || u.signature() != &p.signature {
        return Err(Error::SignatureMismatch);
    }
    for tree in [t, u] {
        if let Some(bad) = tree.parameters().into_iter().find(|l| crate::term::is_reserved(l)) {
            return Err(Error::ReservedParameter(bad.to_string()));
        }
    }
    let mut unknown = None;
    for depth in 1..=k {
        let mut g = EGraph::new(&p.signature);
        let a = g.add_cut(t, depth);
        let b = g.add_cut(u, depth);
        match decide(g, p, a, b, budget, models) {
            Verdict3::Equal => {}
            Verdict3::Distinct(w) => {
                return Ok(Verdict3::Distinct(Witness::Cut {
                    depth,
                    reason: Box::new(w),
                }))
            }
            Verdict3::Unknown(b) => unknown = Some(b),
        }
    }
    Ok(unknown.map_or(Verdict3::Equal, Verdict3::Unknown))
}
