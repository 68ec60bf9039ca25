//! Unique solutions of flat equation systems.
//!
//! [`solve`] works for any signature and produces rational trees. For unary
//! signatures, [`solve_decomposed`] splits the variables into the finite
//! layers `X̄_1, X̄_2, …` (variables whose successor chain reaches a
//! parameter after `n - 1` steps) and the remainder `X_∞` (chains that run
//! into a cycle); solutions on the layers are finite words ending in a
//! parameter, solutions on `X_∞` are eventually periodic streams.
//!
//! [`anchors`] and [`solve_anchored`] build every solution of a unary system
//! in a finite algebra from a coalgebra-to-algebra morphism on `X_∞`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::rtree::{RationalTree, Step};
use crate::term::{for_each_tuple, Atom, EquationSystem, FlatTerm, Rhs, Signature};
use crate::Budget;

/// Solution of every variable as a minimal rational tree.
pub fn solve(e: &EquationSystem) -> BTreeMap<String, RationalTree> {
    let n = e.len();
    let params: HashMap<&str, usize> = e
        .parameters()
        .iter()
        .enumerate()
        .map(|(j, p)| (p.as_str(), n + j))
        .collect();
    let state = |a: &Atom| match a {
        Atom::Var(v) => e.var_index(v).expect("validated system"),
        Atom::Param(p) => params[p.as_str()],
    };
    let mut steps: Vec<Step> = e
        .equations()
        .map(|(_, rhs)| match rhs {
            Rhs::Param(y) => Step::Leaf(y.clone()),
            Rhs::Term(t) => Step::op(t.head.clone(), t.args.iter().map(state).collect()),
        })
        .collect();
    steps.extend(e.parameters().iter().map(|p| Step::Leaf(p.clone())));
    let roots: Vec<usize> = (0..n).collect();
    e.variables()
        .iter()
        .cloned()
        .zip(RationalTree::quotient_many(e.signature(), &steps, &roots))
        .collect()
}

/// Finite layers and infinite part of a unary system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// `layers[n]` holds `X̄_{n+1}`: variables reaching a parameter after
    /// exactly `n` operation steps.
    pub layers: Vec<Vec<String>>,
    pub infinite: Vec<String>,
}

impl Classification {
    /// Layer number (1-based) of a variable, `None` for `X_∞`.
    pub fn layer_of(&self, var: &str) -> Option<usize> {
        self.layers
            .iter()
            .position(|l| l.iter().any(|v| v == var))
            .map(|i| i + 1)
    }
}

/// Successor structure of a unary system, by variable index.
struct Chains {
    /// `Ok((symbol, next var))` or `Err(param)`.
    next: Vec<std::result::Result<(String, usize), String>>,
}

impl Chains {
    fn of(e: &EquationSystem) -> Result<Self> {
        e.signature().require_unary()?;
        let next = e
            .equations()
            .map(|(x, rhs)| match rhs {
                Rhs::Param(y) => Ok(Err(y.clone())),
                Rhs::Term(t) => match &t.args[0] {
                    Atom::Var(v) => Ok(Ok((t.head.clone(), e.var_index(v).expect("validated system")))),
                    Atom::Param(_) => Err(Error::ParameterAtom(x.to_string())),
                },
            })
            .collect::<Result<_>>()?;
        Ok(Chains { next })
    }

    /// Layer index (0-based) per variable, `None` for `X_∞`; computed by
    /// reverse breadth-first search from the parameter-valued variables.
    fn layers(&self) -> Vec<Option<usize>> {
        let n = self.next.len();
        let mut preds = vec![Vec::new(); n];
        for (x, nx) in self.next.iter().enumerate() {
            if let Ok((_, y)) = nx {
                preds[*y].push(x);
            }
        }
        let mut layer = vec![None; n];
        let mut frontier: Vec<usize> = (0..n).filter(|&x| self.next[x].is_err()).collect();
        let mut depth = 0;
        while !frontier.is_empty() {
            for &x in &frontier {
                layer[x] = Some(depth);
            }
            frontier = frontier.iter().flat_map(|&x| preds[x].iter().copied()).collect();
            depth += 1;
        }
        layer
    }
}

/// Partition of the variables of a unary system into finite layers and
/// `X_∞`.
pub fn classify(e: &EquationSystem) -> Result<Classification> {
    let chains = Chains::of(e)?;
    let layer = chains.layers();
    let depth = layer.iter().flatten().map(|d| d + 1).max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth];
    let mut infinite = Vec::new();
    for (x, name) in e.variables().iter().enumerate() {
        match layer[x] {
            Some(d) => layers[d].push(name.clone()),
            None => infinite.push(name.clone()),
        }
    }
    Ok(Classification { layers, infinite })
}

/// A solution value in `W* × Y + W^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Decomposed {
    /// `w1(w2(…wn(leaf)))`.
    Finite { word: Vec<String>, leaf: String },
    Infinite(Lasso),
}

impl Decomposed {
    /// Re-encodes the value as a rational tree.
    pub fn to_tree(&self, signature: &Signature) -> Result<RationalTree> {
        match self {
            Decomposed::Infinite(l) => RationalTree::from_lasso(l, signature),
            Decomposed::Finite { word, leaf } => {
                let mut steps: Vec<Step> = word
                    .iter()
                    .enumerate()
                    .map(|(i, w)| Step::op(w.clone(), vec![i + 1]))
                    .collect();
                steps.push(Step::Leaf(leaf.clone()));
                RationalTree::new(signature.clone(), steps, 0)
            }
        }
    }
}

pub type DecomposedSolution = BTreeMap<String, Decomposed>;

/// Solution of a unary system in decomposed form.
pub fn solve_decomposed(e: &EquationSystem) -> Result<DecomposedSolution> {
    let chains = Chains::of(e)?;
    let layer = chains.layers();
    let vars = e.variables();
    let mut out = BTreeMap::new();
    for x in 0..vars.len() {
        let value = if layer[x].is_some() {
            let mut word = Vec::new();
            let mut at = x;
            loop {
                match &chains.next[at] {
                    Ok((w, next)) => {
                        word.push(w.clone());
                        at = *next;
                    }
                    Err(y) => break Decomposed::Finite { word, leaf: y.clone() },
                }
            }
        } else {
            let mut seen = HashMap::new();
            let mut word = Vec::new();
            let mut at = x;
            loop {
                if let Some(&entry) = seen.get(&at) {
                    let period = word.split_off(entry);
                    break Decomposed::Infinite(Lasso::new(word, period)?);
                }
                seen.insert(at, word.len());
                let (w, next) = chains.next[at].as_ref().expect("X_∞ chains never reach a parameter");
                word.push(w.clone());
                at = *next;
            }
        };
        out.insert(vars[x].clone(), value);
    }
    Ok(out)
}

/// Record of how [`fold_constants`] rewrote a system.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Folding {
    /// Constant symbol → parameter standing for it.
    pub constants: BTreeMap<String, String>,
    /// Parameter used inside a term → fresh variable defined as that
    /// parameter.
    pub lifted: BTreeMap<String, String>,
}

/// Rewrites a system over unary symbols and constants into one over the
/// unary symbols alone: every constant `c()` becomes a parameter and every
/// parameter used as a term argument is routed through a fresh variable.
/// Solutions are unchanged up to reading those parameters back as constants.
pub fn fold_constants(e: &EquationSystem) -> Result<(EquationSystem, Folding)> {
    let sig = e.signature();
    if let Some(s) = sig.symbols().iter().find(|s| s.arity > 1) {
        return Err(Error::NonUnarySignature(s.name.clone(), s.arity));
    }
    let mut taken: BTreeSet<String> = e.variables().iter().chain(e.parameters()).cloned().collect();
    let fresh = |base: &str, taken: &mut BTreeSet<String>| {
        let mut name = base.to_string();
        let mut i = 1;
        while taken.contains(&name) {
            name = format!("{base}_{i}");
            i += 1;
        }
        taken.insert(name.clone());
        name
    };
    let mut folding = Folding::default();
    for s in sig.symbols().iter().filter(|s| s.arity == 0) {
        let p = fresh(&s.name, &mut taken);
        folding.constants.insert(s.name.clone(), p);
    }
    let unary = Signature::new(
        sig.symbols()
            .iter()
            .filter(|s| s.arity == 1)
            .map(|s| (s.name.clone(), 1)),
    )?;
    let mut variables: Vec<String> = e.variables().to_vec();
    let mut equations = Vec::new();
    for (x, rhs) in e.equations() {
        let rhs = match rhs {
            Rhs::Param(y) => Rhs::Param(y.clone()),
            Rhs::Term(t) if t.args.is_empty() => Rhs::Param(folding.constants[&t.head].clone()),
            Rhs::Term(t) => {
                let arg = match &t.args[0] {
                    Atom::Var(v) => Atom::Var(v.clone()),
                    Atom::Param(y) => {
                        let v = match folding.lifted.get(y) {
                            Some(v) => v.clone(),
                            None => {
                                let v = fresh(&format!("{y}_var"), &mut taken);
                                folding.lifted.insert(y.clone(), v.clone());
                                variables.push(v.clone());
                                equations.push((v.clone(), Rhs::Param(y.clone())));
                                v
                            }
                        };
                        Atom::Var(v)
                    }
                };
                Rhs::Term(FlatTerm::new(t.head.clone(), vec![arg]))
            }
        };
        equations.push((x.to_string(), rhs));
    }
    let parameters: Vec<String> = e
        .parameters()
        .iter()
        .cloned()
        .chain(folding.constants.values().cloned())
        .collect();
    let folded = EquationSystem::new(unary, variables, parameters, equations)?;
    Ok((folded, folding))
}

/// The combined system `e ⧾ f`: `f` defines the parameters of `e`.
///
/// Variables of `e` keep their terms with parameter atoms re-tagged as
/// variables; a variable of `e` whose right side is a parameter `y` takes
/// over `f`'s equation for `y`.
pub fn compose_systems(e: &EquationSystem, f: &EquationSystem) -> Result<EquationSystem> {
    if e.signature() != f.signature() {
        return Err(Error::SignatureMismatch);
    }
    let ys: BTreeSet<&String> = e.parameters().iter().collect();
    let fvars: BTreeSet<&String> = f.variables().iter().collect();
    if ys != fvars {
        return Err(Error::ParameterMismatch);
    }
    if let Some(z) = f.parameters().iter().find(|z| e.var_index(z).is_some()) {
        return Err(Error::NameClash(z.clone()));
    }
    let retag = |a: &Atom| match a {
        Atom::Param(y) => Atom::Var(y.clone()),
        Atom::Var(v) => Atom::Var(v.clone()),
    };
    let mut equations = Vec::new();
    for (x, rhs) in e.equations() {
        let rhs = match rhs {
            Rhs::Term(t) => Rhs::Term(FlatTerm::new(t.head.clone(), t.args.iter().map(retag).collect())),
            Rhs::Param(y) => f.rhs(y).expect("parameters match f's variables").clone(),
        };
        equations.push((x.to_string(), rhs));
    }
    equations.extend(f.equations().map(|(y, rhs)| (y.to_string(), rhs.clone())));
    let variables = e.variables().iter().chain(f.variables()).cloned();
    EquationSystem::new(e.signature().clone(), variables, f.parameters().to_vec(), equations)
}

/// Map from variables (or parameters) to carrier element names.
pub type Valuation = BTreeMap<String, String>;

/// A coalgebra-to-algebra morphism `X_∞ → A`.
pub type Anchor = BTreeMap<String, String>;

/// Element indices of the parameters of `e` under `valuation`.
fn param_values(e: &EquationSystem, alg: &FiniteAlgebra, valuation: &Valuation) -> Result<HashMap<String, usize>> {
    e.parameters()
        .iter()
        .map(|p| {
            let v = valuation.get(p).ok_or_else(|| Error::MissingAssignment(p.clone()))?;
            Ok((p.clone(), alg.element(v)?))
        })
        .collect()
}

fn unary_setup(e: &EquationSystem, alg: &FiniteAlgebra) -> Result<Chains> {
    if e.signature() != alg.signature() {
        return Err(Error::SignatureMismatch);
    }
    Chains::of(e)
}

/// Every map `s: X_∞ → A` with `s(x) = w^A(s(x'))` for each step `x → w(x')`
/// of the infinite part, found by exhaustive enumeration.
pub fn anchors(e: &EquationSystem, alg: &FiniteAlgebra, valuation: &Valuation, budget: Budget) -> Result<Vec<Anchor>> {
    let chains = unary_setup(e, alg)?;
    param_values(e, alg, valuation)?;
    let layer = chains.layers();
    let inf: Vec<usize> = (0..e.len()).filter(|&x| layer[x].is_none()).collect();
    budget.check((alg.size() as u128).saturating_pow(inf.len() as u32))?;
    let pos: HashMap<usize, usize> = inf.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let steps: Vec<(usize, usize)> = inf
        .iter()
        .map(|&x| {
            let (w, next) = chains.next[x].as_ref().expect("X_∞ variables have successors");
            (alg.signature().index_of(w).expect("validated symbol"), pos[next])
        })
        .collect();
    let mut out = Vec::new();
    for_each_tuple(alg.size(), inf.len(), |s| {
        if steps.iter().enumerate().all(|(i, &(w, next))| s[i] == alg.apply(w, &[s[next]])) {
            out.push(
                inf.iter()
                    .zip(s)
                    .map(|(&x, &v)| (e.variables()[x].clone(), alg.carrier()[v].clone()))
                    .collect(),
            );
        }
    });
    Ok(out)
}

/// The solution determined by an anchor: `anchor` on `X_∞`, and on the
/// finite layers the operation tables folded along the chain down to the
/// parameter's value.
pub fn solve_anchored(e: &EquationSystem, alg: &FiniteAlgebra, valuation: &Valuation, anchor: &Anchor) -> Result<Valuation> {
    let chains = unary_setup(e, alg)?;
    let params = param_values(e, alg, valuation)?;
    let layer = chains.layers();
    let n = e.len();
    let mut value: Vec<Option<usize>> = vec![None; n];
    for x in (0..n).filter(|&x| layer[x].is_none()) {
        let v = anchor.get(&e.variables()[x]).ok_or(Error::InvalidAnchor)?;
        value[x] = Some(alg.element(v).map_err(|_| Error::InvalidAnchor)?);
    }
    if anchor.len() != value.iter().filter(|v| v.is_some()).count() {
        return Err(Error::InvalidAnchor);
    }
    for x in (0..n).filter(|&x| layer[x].is_none()) {
        let (w, next) = chains.next[x].as_ref().expect("X_∞ variables have successors");
        let w = alg.signature().index_of(w).expect("validated symbol");
        if value[x] != Some(alg.apply(w, &[value[*next].expect("successor in X_∞")])) {
            return Err(Error::InvalidAnchor);
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&x| layer[x].is_some()).collect();
    order.sort_by_key(|&x| layer[x]);
    for x in order {
        value[x] = Some(match &chains.next[x] {
            Err(y) => params[y],
            Ok((w, next)) => {
                let w = alg.signature().index_of(w).expect("validated symbol");
                alg.apply(w, &[value[*next].expect("lower layer already solved")])
            }
        });
    }
    Ok(e.variables()
        .iter()
        .zip(value)
        .map(|(x, v)| (x.clone(), alg.carrier()[v.expect("all variables solved")].clone()))
        .collect())
}

/// Whether `solution` satisfies every equation of `e` in `alg`.
pub fn satisfies_system(e: &EquationSystem, alg: &FiniteAlgebra, valuation: &Valuation, solution: &Valuation) -> Result<bool> {
    let lookup = |a: &Atom| -> Result<usize> {
        let name = match a {
            Atom::Var(v) => solution.get(v).ok_or_else(|| Error::MissingAssignment(v.clone()))?,
            Atom::Param(p) => valuation.get(p).ok_or_else(|| Error::MissingAssignment(p.clone()))?,
        };
        alg.element(name)
    };
    for (x, rhs) in e.equations() {
        let lhs = lookup(&Atom::var(x))?;
        let rhs = match rhs {
            Rhs::Param(p) => lookup(&Atom::param(p.clone()))?,
            Rhs::Term(t) => {
                let args = t.args.iter().map(lookup).collect::<Result<Vec<_>>>()?;
                alg.apply(alg.signature().index_of(&t.head).expect("validated symbol"), &args)
            }
        };
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtree::LeafCount;
    use crate::term::FiniteTree as F;
    use proptest::prelude::*;

    fn eq(x: &str, head: &str, args: &[&str]) -> (String, Rhs) {
        (x.to_string(), Rhs::Term(FlatTerm::vars(head, args)))
    }

    fn to_param(x: &str, y: &str) -> (String, Rhs) {
        (x.to_string(), Rhs::Param(y.to_string()))
    }

    fn sigma_system() -> EquationSystem {
        let sig = Signature::new([("sigma", 2)]).unwrap();
        EquationSystem::new(sig, ["x1", "x2"], ["y"], [eq("x1", "sigma", &["x1", "x2"]), to_param("x2", "y")]).unwrap()
    }

    fn unary_sig() -> Signature {
        Signature::new([("a", 1), ("b", 1)]).unwrap()
    }

    fn system(sig: &Signature, vars: &[&str], params: &[&str], eqs: Vec<(String, Rhs)>) -> EquationSystem {
        EquationSystem::new(sig.clone(), vars.iter().copied(), params.iter().copied(), eqs).unwrap()
    }

    #[test]
    fn solve_sigma_spine() {
        let e = sigma_system();
        let sol = solve(&e);
        let expected = RationalTree::new(
            e.signature().clone(),
            vec![Step::op("sigma", vec![0, 1]), Step::leaf("y")],
            0,
        )
        .unwrap();
        assert_eq!(sol["x1"], expected);
        assert_eq!(sol["x2"], RationalTree::leaf(e.signature().clone(), "y"));
    }

    #[test]
    fn solve_alternating_stream() {
        let s = unary_sig();
        let e = system(&s, &["x1", "x2"], &[], vec![eq("x1", "a", &["x2"]), eq("x2", "b", &["x1"])]);
        let sol = solve(&e);
        let mut manual = F::bottom();
        for w in ["b", "a", "b", "a", "b", "a", "b", "a"] {
            manual = F::op(w, vec![manual]);
        }
        assert_eq!(sol["x1"].cut(8).unwrap(), manual);
    }

    #[test]
    fn classify_examples() {
        let s = unary_sig();
        let e = system(&s, &["x1", "x2"], &["y"], vec![eq("x1", "a", &["x2"]), to_param("x2", "y")]);
        let c = classify(&e).unwrap();
        assert_eq!(c.layers, vec![vec!["x2".to_string()], vec!["x1".to_string()]]);
        assert!(c.infinite.is_empty());

        let e = system(&s, &["x"], &[], vec![eq("x", "a", &["x"])]);
        assert_eq!(classify(&e).unwrap().infinite, vec!["x"]);

        let e = system(&s, &["x1", "x2"], &[], vec![eq("x1", "a", &["x2"]), eq("x2", "b", &["x2"])]);
        let c = classify(&e).unwrap();
        assert!(c.layers.is_empty());
        assert_eq!(c.infinite, vec!["x1", "x2"]);

        assert!(matches!(classify(&sigma_system()), Err(Error::NonUnarySignature(..))));
    }

    /// Termination oracle: walk the chain and count steps to a parameter.
    fn chain_length(e: &EquationSystem, x: &str) -> Option<usize> {
        let mut at = x.to_string();
        for steps in 0..=e.len() {
            match e.rhs(&at).unwrap() {
                Rhs::Param(_) => return Some(steps),
                Rhs::Term(t) => at = t.args[0].name().to_string(),
            }
        }
        None
    }

    #[test]
    fn decomposed_examples() {
        let s = unary_sig();
        let e = system(&s, &["x1", "x2"], &["y"], vec![eq("x1", "a", &["x2"]), to_param("x2", "y")]);
        let d = solve_decomposed(&e).unwrap();
        assert_eq!(d["x1"], Decomposed::Finite { word: vec!["a".into()], leaf: "y".into() });
        assert_eq!(d["x2"], Decomposed::Finite { word: vec![], leaf: "y".into() });
        let sol = solve(&e);
        for x in ["x1", "x2"] {
            assert!(d[x].to_tree(&s).unwrap().cut_equal(&sol[x], 4).unwrap());
        }

        let e = system(&s, &["x"], &[], vec![eq("x", "a", &["x"])]);
        let d = solve_decomposed(&e).unwrap();
        assert_eq!(d["x"], Decomposed::Infinite(Lasso::new(Vec::<String>::new(), ["a"]).unwrap()));

        let id = Signature::new([("*", 1)]).unwrap();
        let e = system(&id, &["x1", "x2"], &["y"], vec![eq("x1", "*", &["x2"]), to_param("x2", "y")]);
        let d = solve_decomposed(&e).unwrap();
        match &d["x1"] {
            Decomposed::Finite { word, leaf } => {
                assert_eq!(Some(word.len()), chain_length(&e, "x1"));
                assert_eq!(word.len(), 1);
                assert_eq!(leaf, "y");
            }
            other => panic!("expected a finite part, got {other:?}"),
        }
    }

    #[test]
    fn fold_constants_rewrites_into_unary_system() {
        let s = Signature::new([("a", 1), ("c", 0)]).unwrap();
        let e = EquationSystem::new(
            s,
            ["x1", "x2", "x3"],
            ["y"],
            [
                eq("x1", "a", &["x2"]),
                eq("x2", "c", &[]),
                ("x3".to_string(), Rhs::Term(FlatTerm::new("a", vec![Atom::param("y")]))),
            ],
        )
        .unwrap();
        assert!(matches!(solve_decomposed(&e), Err(Error::NonUnarySignature(..))));
        let (folded, folding) = fold_constants(&e).unwrap();
        assert_eq!(folding.constants["c"], "c");
        let d = solve_decomposed(&folded).unwrap();
        assert_eq!(d["x1"], Decomposed::Finite { word: vec!["a".into()], leaf: "c".into() });
        assert_eq!(d["x3"], Decomposed::Finite { word: vec!["a".into()], leaf: "y".into() });
    }

    #[test]
    fn compose_unit_chain() {
        let s = unary_sig();
        let e = system(&s, &["x"], &["y"], vec![to_param("x", "y")]);
        let f = system(&s, &["y"], &["z"], vec![to_param("y", "z")]);
        let ef = compose_systems(&e, &f).unwrap();
        assert_eq!(ef.rhs("x"), Some(&Rhs::Param("z".into())));
        let grafted = solve(&e)["x"]
            .graft(&BTreeMap::from([("y".to_string(), solve(&f)["y"].clone())]))
            .unwrap();
        assert!(solve(&ef)["x"].bisim_equal(&grafted).unwrap());
    }

    #[test]
    fn compose_with_parameter_free_definition() {
        let e = sigma_system();
        let e = EquationSystem::new(
            e.signature().clone(),
            ["x1"],
            ["y"],
            [(
                "x1".to_string(),
                Rhs::Term(FlatTerm::new("sigma", vec![Atom::var("x1"), Atom::param("y")])),
            )],
        )
        .unwrap();
        let f = system(e.signature(), &["y"], &[], vec![eq("y", "sigma", &["y", "y"])]);
        let ef = compose_systems(&e, &f).unwrap();
        assert!(ef.parameters().is_empty());
        let sol = solve(&ef);
        assert_eq!(sol["x1"].count_param_leaves(), LeafCount::Finite(0));
        let grafted = solve(&e)["x1"]
            .graft(&BTreeMap::from([("y".to_string(), solve(&f)["y"].clone())]))
            .unwrap();
        assert!(sol["x1"].cut_equal(&grafted, 6).unwrap());

        let wrong = system(e.signature(), &["q"], &[], vec![eq("q", "sigma", &["q", "q"])]);
        assert_eq!(compose_systems(&e, &wrong).unwrap_err(), Error::ParameterMismatch);
    }

    fn two_element(action: impl Fn(usize) -> usize) -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::new([("a", 1)]).unwrap(), ["0", "1"], |_, args| action(args[0])).unwrap()
    }

    #[test]
    fn anchor_examples() {
        let id = two_element(|v| v);
        let neg = two_element(|v| 1 - v);
        let e = system(id.signature(), &["x"], &[], vec![eq("x", "a", &["x"])]);
        let none = Valuation::new();
        let a = anchors(&e, &id, &none, Budget::default()).unwrap();
        assert_eq!(
            a,
            vec![
                Anchor::from([("x".to_string(), "0".to_string())]),
                Anchor::from([("x".to_string(), "1".to_string())]),
            ]
        );
        assert!(anchors(&e, &neg, &none, Budget::default()).unwrap().is_empty());

        let e = system(id.signature(), &["x1", "x2"], &["p"], vec![eq("x1", "a", &["x2"]), to_param("x2", "p")]);
        let v = Valuation::from([("p".to_string(), "1".to_string())]);
        assert_eq!(anchors(&e, &neg, &v, Budget::default()).unwrap(), vec![Anchor::new()]);
    }

    #[test]
    fn anchored_solution_examples() {
        let neg = two_element(|v| 1 - v);
        let e = system(neg.signature(), &["x1", "x2"], &["p"], vec![eq("x1", "a", &["x2"]), to_param("x2", "p")]);
        let v = Valuation::from([("p".to_string(), "1".to_string())]);
        let sol = solve_anchored(&e, &neg, &v, &Anchor::new()).unwrap();
        assert_eq!(sol["x2"], "1");
        assert_eq!(sol["x1"], neg.apply_named("a", &["1"]).unwrap());
        assert!(satisfies_system(&e, &neg, &v, &sol).unwrap());

        let id = two_element(|v| v);
        let e = system(id.signature(), &["x"], &[], vec![eq("x", "a", &["x"])]);
        let s = Anchor::from([("x".to_string(), "0".to_string())]);
        let sol = solve_anchored(&e, &id, &Valuation::new(), &s).unwrap();
        assert_eq!(sol["x"], "0");
        assert!(satisfies_system(&e, &id, &Valuation::new(), &sol).unwrap());

        let e_neg = system(neg.signature(), &["x"], &[], vec![eq("x", "a", &["x"])]);
        assert_eq!(
            solve_anchored(&e_neg, &neg, &Valuation::new(), &s).unwrap_err(),
            Error::InvalidAnchor
        );
    }

    // Random systems over a signature; `param_rhs` allows parameter right
    // sides, parameter atoms are never generated.
    fn arb_system(sig: Signature, max_vars: usize, params: Vec<String>) -> impl Strategy<Value = EquationSystem> {
        let max_arity = sig.max_arity();
        (1..=max_vars).prop_flat_map(move |n| {
            let sig = sig.clone();
            let params = params.clone();
            let choices = sig.len() + params.len();
            proptest::collection::vec((0..choices, proptest::collection::vec(0..n, max_arity)), n).prop_map(
                move |rows| {
                    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
                    let eqs = rows.iter().enumerate().map(|(i, (c, args))| {
                        let rhs = if *c < sig.len() {
                            let s = sig.symbol(*c);
                            Rhs::Term(FlatTerm::new(
                                s.name.clone(),
                                args[..s.arity].iter().map(|&j| Atom::Var(vars[j].clone())).collect(),
                            ))
                        } else {
                            Rhs::Param(params[*c - sig.len()].clone())
                        };
                        (vars[i].clone(), rhs)
                    });
                    EquationSystem::new(sig.clone(), vars.clone(), params.clone(), eqs.collect::<Vec<_>>()).unwrap()
                },
            )
        })
    }

    fn resolve(e: &EquationSystem, sol: &BTreeMap<String, RationalTree>, a: &Atom) -> RationalTree {
        match a {
            Atom::Var(v) => sol[v].clone(),
            Atom::Param(p) => RationalTree::leaf(e.signature().clone(), p.clone()),
        }
    }

    fn is_fixpoint(e: &EquationSystem, sol: &BTreeMap<String, RationalTree>) -> bool {
        e.equations().all(|(x, rhs)| {
            let expected = match rhs {
                Rhs::Param(y) => RationalTree::leaf(e.signature().clone(), y.clone()),
                Rhs::Term(t) => {
                    let children: Vec<_> = t.args.iter().map(|a| resolve(e, sol, a)).collect();
                    RationalTree::op_apply(e.signature(), &t.head, &children).unwrap()
                }
            };
            sol[x].bisim_equal(&expected).unwrap()
        })
    }

    fn mixed_sig() -> Signature {
        Signature::new([("f", 2), ("g", 1), ("c", 0)]).unwrap()
    }

    proptest! {
        #[test]
        fn solution_is_a_fixpoint(e in arb_system(mixed_sig(), 5, vec!["y".into(), "z".into()])) {
            prop_assert!(is_fixpoint(&e, &solve(&e)));
        }

        // Replacing one variable's solution by a non-bisimilar tree breaks
        // the fixpoint property somewhere.
        #[test]
        fn solution_is_unique(e in arb_system(mixed_sig(), 5, vec!["y".into()]), pick in 0usize..5) {
            let mut sol = solve(&e);
            let x = e.variables()[pick % e.len()].clone();
            let other = RationalTree::leaf(e.signature().clone(), "fresh");
            prop_assume!(!sol[&x].bisim_equal(&other).unwrap());
            sol.insert(x, other);
            prop_assert!(!is_fixpoint(&e, &sol));
        }

        #[test]
        fn decomposition_agrees_with_solve(e in arb_system(unary_sig(), 6, vec!["y".into(), "z".into()])) {
            let sol = solve(&e);
            let dec = solve_decomposed(&e).unwrap();
            let class = classify(&e).unwrap();
            for x in e.variables() {
                prop_assert!(dec[x].to_tree(e.signature()).unwrap().bisim_equal(&sol[x]).unwrap());
                match &dec[x] {
                    Decomposed::Finite { word, .. } => {
                        prop_assert_eq!(sol[x].count_param_leaves(), LeafCount::Finite(1));
                        prop_assert_eq!(class.layer_of(x), Some(word.len() + 1));
                    }
                    Decomposed::Infinite(_) => {
                        prop_assert!(sol[x].is_parameter_free());
                        prop_assert!(class.infinite.contains(x));
                    }
                }
            }
        }

        #[test]
        fn anchored_solutions_solve_the_system(
            e in arb_system(Signature::new([("a", 1)]).unwrap(), 4, vec!["p".into()]),
            table in proptest::collection::vec(0usize..3, 3),
            p in 0usize..3,
        ) {
            let alg = FiniteAlgebra::new(e.signature().clone(), ["0", "1", "2"], vec![table]).unwrap();
            let v = Valuation::from([("p".to_string(), p.to_string())]);
            for s in anchors(&e, &alg, &v, Budget::default()).unwrap() {
                let sol = solve_anchored(&e, &alg, &v, &s).unwrap();
                prop_assert!(satisfies_system(&e, &alg, &v, &sol).unwrap());
            }
        }
    }
}
