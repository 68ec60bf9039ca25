//! Rational Σ-trees over parameters.
//!
//! A [`RationalTree`] is a finite pointed system of states, each either an
//! operation node with child states or a parameter leaf. It denotes its
//! (possibly infinite) unfolding from the root. Trees are kept pruned to the
//! states reachable from the root and numbered breadth-first from the root,
//! so that minimized bisimilar trees are structurally equal.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph;
use crate::lasso::Lasso;
use crate::term::{is_reserved, FiniteTree, Signature, BOTTOM};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Op { symbol: String, children: Vec<usize> },
    Leaf(String),
}

impl Step {
    pub fn op(symbol: impl Into<String>, children: Vec<usize>) -> Self {
        Step::Op {
            symbol: symbol.into(),
            children,
        }
    }

    pub fn leaf(name: impl Into<String>) -> Self {
        Step::Leaf(name.into())
    }

    pub fn children(&self) -> &[usize] {
        match self {
            Step::Op { children, .. } => children,
            Step::Leaf(_) => &[],
        }
    }
}

/// A regular Σ-tree given by a finite state graph. The root is state 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTree {
    signature: Signature,
    steps: Vec<Step>,
}

/// Number of parameter-labeled leaf occurrences in an unfolded tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafCount {
    Finite(u64),
    /// Finite, but at least `u64::MAX`.
    Saturated,
    Infinite,
}

impl LeafCount {
    pub fn is_finite(self) -> bool {
        !matches!(self, LeafCount::Infinite)
    }
}

impl RationalTree {
    /// Builds a tree from an arbitrary state graph rooted at `root`. Checks
    /// symbols and arities, then prunes unreachable states. No minimization.
    pub fn new(signature: Signature, steps: Vec<Step>, root: usize) -> Result<Self> {
        if root >= steps.len() {
            return Err(Error::InvalidState(root));
        }
        for step in &steps {
            if let Step::Op { symbol, children } = step {
                let arity = signature
                    .arity(symbol)
                    .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
                if arity != children.len() {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: arity,
                        found: children.len(),
                    });
                }
                if let Some(&c) = children.iter().find(|&&c| c >= steps.len()) {
                    return Err(Error::InvalidState(c));
                }
            }
        }
        let identity: Vec<usize> = (0..steps.len()).collect();
        Ok(Self::extract(signature, &steps, &identity, root))
    }

    /// The unit `y ↦ leaf(y)`.
    pub fn leaf(signature: Signature, param: impl Into<String>) -> Self {
        RationalTree {
            signature,
            steps: vec![Step::Leaf(param.into())],
        }
    }

    /// Tree-tupling: joins `children` under a new root labeled `symbol`.
    pub fn op_apply(signature: &Signature, symbol: &str, children: &[RationalTree]) -> Result<Self> {
        let arity = signature
            .arity(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        if arity != children.len() {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: arity,
                found: children.len(),
            });
        }
        if children.iter().any(|c| &c.signature != signature) {
            return Err(Error::SignatureMismatch);
        }
        let mut steps = vec![Step::Leaf(String::new())];
        let mut roots = Vec::with_capacity(children.len());
        for c in children {
            roots.push(steps.len());
            let offset = steps.len();
            steps.extend(c.steps.iter().map(|s| shift(s, offset)));
        }
        steps[0] = Step::op(symbol, roots);
        Ok(Self::quotient(signature.clone(), &steps, 0))
    }

    /// Embeds a finite tree.
    pub fn from_finite(signature: &Signature, tree: &FiniteTree) -> Result<Self> {
        tree.check(signature)?;
        fn go(t: &FiniteTree, steps: &mut Vec<Step>) -> usize {
            let me = steps.len();
            steps.push(Step::Leaf(String::new()));
            steps[me] = match t {
                FiniteTree::Leaf(l) => Step::Leaf(l.clone()),
                FiniteTree::Op(h, cs) => {
                    let children = cs.iter().map(|c| go(c, steps)).collect();
                    Step::op(h.clone(), children)
                }
            };
            me
        }
        let mut steps = Vec::new();
        go(tree, &mut steps);
        Ok(Self::quotient(signature.clone(), &steps, 0))
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step(&self, state: usize) -> &Step {
        &self.steps[state]
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn state_count(&self) -> usize {
        self.steps.len()
    }

    /// Parameter labels occurring in the tree.
    pub fn parameters(&self) -> BTreeSet<&str> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Leaf(l) => Some(l.as_str()),
                Step::Op { .. } => None,
            })
            .collect()
    }

    pub fn is_parameter_free(&self) -> bool {
        self.steps.iter().all(|s| matches!(s, Step::Op { .. }))
    }

    /// The bisimulation quotient, in canonical numbering.
    pub fn minimize(&self) -> RationalTree {
        Self::quotient(self.signature.clone(), &self.steps, 0)
    }

    /// Whether the two trees have the same infinite unfolding.
    pub fn bisim_equal(&self, other: &RationalTree) -> Result<bool> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        let offset = self.steps.len();
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().map(|s| shift(s, offset)));
        let blocks = refine(&steps);
        Ok(blocks[0] == blocks[offset])
    }

    /// Truncation at depth `k`: nodes at depth `k` become `⊥` leaves.
    pub fn cut(&self, k: usize) -> Result<FiniteTree> {
        self.reject_bottom()?;
        fn go(t: &RationalTree, s: usize, k: usize) -> FiniteTree {
            if k == 0 {
                return FiniteTree::bottom();
            }
            match &t.steps[s] {
                Step::Leaf(l) => FiniteTree::Leaf(l.clone()),
                Step::Op { symbol, children } => {
                    FiniteTree::Op(symbol.clone(), children.iter().map(|&c| go(t, c, k - 1)).collect())
                }
            }
        }
        Ok(go(self, 0, k))
    }

    /// Decides `cut(self, k) == cut(other, k)` without materializing the
    /// cuts, by comparing depth-bounded unfoldings of all state pairs.
    pub fn cut_equal(&self, other: &RationalTree, k: usize) -> Result<bool> {
        self.reject_bottom()?;
        other.reject_bottom()?;
        let (n, m) = (self.steps.len(), other.steps.len());
        // equal[i * m + j]: the depth-d cuts of states i and j agree
        let mut equal = vec![true; n * m];
        for _ in 0..k {
            let mut next = vec![false; n * m];
            for i in 0..n {
                for j in 0..m {
                    next[i * m + j] = match (&self.steps[i], &other.steps[j]) {
                        (Step::Leaf(a), Step::Leaf(b)) => a == b,
                        (
                            Step::Op { symbol: f, children: cs },
                            Step::Op { symbol: g, children: ds },
                        ) => f == g && cs.iter().zip(ds).all(|(&c, &d)| equal[c * m + d]),
                        _ => false,
                    };
                }
            }
            if next == equal {
                break;
            }
            equal = next;
        }
        Ok(equal[0])
    }

    fn reject_bottom(&self) -> Result<()> {
        match self.parameters().into_iter().find(|p| is_reserved(p)) {
            Some(p) => Err(Error::ReservedParameter(p.to_string())),
            None => Ok(()),
        }
    }

    /// Number of parameter leaves in the unfolding. Infinite exactly when a
    /// leaf is reachable from a state on a cycle.
    pub fn count_param_leaves(&self) -> LeafCount {
        let n = self.steps.len();
        let succ: Vec<Vec<usize>> = self.steps.iter().map(|s| s.children().to_vec()).collect();
        let comps = graph::tarjan(&succ);

        let mut reaches_leaf = vec![false; n];
        let mut preds = vec![Vec::new(); n];
        for (u, cs) in succ.iter().enumerate() {
            for &c in cs {
                preds[c].push(u);
            }
        }
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&s| matches!(self.steps[s], Step::Leaf(_)))
            .collect();
        for &s in &queue {
            reaches_leaf[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &preds[s] {
                if !reaches_leaf[p] {
                    reaches_leaf[p] = true;
                    queue.push_back(p);
                }
            }
        }
        if (0..n).any(|s| reaches_leaf[s] && comps.on_cycle(s)) {
            return LeafCount::Infinite;
        }

        // Components come out sinks first, so children are counted before
        // their parents.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&s| comps.component[s]);
        let mut paths = vec![0u64; n];
        let mut saturated = vec![false; n];
        for s in order {
            if !reaches_leaf[s] {
                continue;
            }
            match &self.steps[s] {
                Step::Leaf(_) => paths[s] = 1,
                Step::Op { children, .. } => {
                    let mut total = 0u64;
                    let mut sat = false;
                    for &c in children {
                        sat |= saturated[c];
                        match total.checked_add(paths[c]) {
                            Some(t) => total = t,
                            None => {
                                sat = true;
                                total = u64::MAX;
                            }
                        }
                    }
                    paths[s] = total;
                    saturated[s] = sat;
                }
            }
        }
        if saturated[0] {
            LeafCount::Saturated
        } else {
            LeafCount::Finite(paths[0])
        }
    }

    /// Membership in the subalgebra of trees with finitely many parameter
    /// leaves.
    pub fn in_c(&self) -> bool {
        self.count_param_leaves().is_finite()
    }

    /// Second-order substitution: every leaf `y` is replaced by
    /// `assignment[y]`.
    pub fn graft(&self, assignment: &BTreeMap<String, RationalTree>) -> Result<RationalTree> {
        let mut steps = self.steps.clone();
        let mut roots: HashMap<&str, usize> = HashMap::new();
        for p in self.parameters() {
            let sub = assignment
                .get(p)
                .ok_or_else(|| Error::MissingAssignment(p.to_string()))?;
            if sub.signature != self.signature {
                return Err(Error::SignatureMismatch);
            }
            let offset = steps.len();
            steps.extend(sub.steps.iter().map(|s| shift(s, offset)));
            roots.insert(p, offset);
        }
        let redirect = |s: usize| match &self.steps[s] {
            Step::Leaf(l) => roots[l.as_str()],
            Step::Op { .. } => s,
        };
        for s in 0..self.steps.len() {
            if let Step::Op { children, .. } = &mut steps[s] {
                for c in children.iter_mut() {
                    *c = redirect(*c);
                }
            }
        }
        Ok(Self::quotient(self.signature.clone(), &steps, redirect(0)))
    }

    /// The unfolding of a lasso as a stream tree over a unary signature.
    pub fn from_lasso(lasso: &Lasso, signature: &Signature) -> Result<Self> {
        signature.require_unary()?;
        let letters: Vec<&String> = lasso.prefix().iter().chain(lasso.period()).collect();
        let loop_back = lasso.prefix().len();
        let steps = letters
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let next = if i + 1 == letters.len() { loop_back } else { i + 1 };
                Step::op(w.clone(), vec![next])
            })
            .collect();
        Ok(RationalTree::new(signature.clone(), steps, 0)?.minimize())
    }

    /// Reads a parameter-free tree over a unary signature back as a lasso.
    pub fn to_lasso(&self) -> Result<Lasso> {
        self.signature.require_unary()?;
        let mut seen = HashMap::new();
        let mut word = Vec::new();
        let mut s = 0;
        loop {
            if let Some(&entry) = seen.get(&s) {
                let period = word.split_off(entry);
                return Lasso::new(word, period);
            }
            seen.insert(s, word.len());
            match &self.steps[s] {
                Step::Leaf(_) => return Err(Error::HasParameters),
                Step::Op { symbol, children } => {
                    word.push(symbol.clone());
                    s = children[0];
                }
            }
        }
    }

    /// Restriction of a state graph to what `root` reaches, numbered
    /// breadth-first. `blocks` maps every state to its representative class;
    /// states in the same class must have equal steps up to `blocks`.
    fn extract(signature: Signature, steps: &[Step], blocks: &[usize], root: usize) -> Self {
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for (s, &b) in blocks.iter().enumerate() {
            rep.entry(b).or_insert(s);
        }
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![blocks[root]];
        number.insert(blocks[root], 0);
        let mut out = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let b = order[i];
            i += 1;
            let step = match &steps[rep[&b]] {
                Step::Leaf(l) => Step::Leaf(l.clone()),
                Step::Op { symbol, children } => {
                    let children = children
                        .iter()
                        .map(|&c| {
                            let cb = blocks[c];
                            *number.entry(cb).or_insert_with(|| {
                                order.push(cb);
                                order.len() - 1
                            })
                        })
                        .collect();
                    Step::op(symbol.clone(), children)
                }
            };
            out.push(step);
        }
        RationalTree { signature, steps: out }
    }

    /// Minimal trees rooted at each of `roots` in one shared state graph.
    pub(crate) fn quotient_many(signature: &Signature, steps: &[Step], roots: &[usize]) -> Vec<Self> {
        let blocks = refine(steps);
        roots
            .iter()
            .map(|&r| Self::extract(signature.clone(), steps, &blocks, r))
            .collect()
    }

    fn quotient(signature: Signature, steps: &[Step], root: usize) -> Self {
        let blocks = refine(steps);
        Self::extract(signature, steps, &blocks, root)
    }
}

fn shift(step: &Step, offset: usize) -> Step {
    match step {
        Step::Leaf(l) => Step::Leaf(l.clone()),
        Step::Op { symbol, children } => Step::op(symbol.clone(), children.iter().map(|c| c + offset).collect()),
    }
}

/// Coarsest bisimulation of a state graph by partition refinement: start
/// from the partition by label, split blocks by the blocks of the children
/// until stable. Returns a block id per state.
pub(crate) fn refine(steps: &[Step]) -> Vec<usize> {
    let mut ids: HashMap<(bool, &str), usize> = HashMap::new();
    let mut blocks: Vec<usize> = steps
        .iter()
        .map(|s| {
            let key = match s {
                Step::Op { symbol, .. } => (true, symbol.as_str()),
                Step::Leaf(l) => (false, l.as_str()),
            };
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        })
        .collect();
    let mut count = ids.len();
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = steps
            .iter()
            .zip(&blocks)
            .map(|(s, &b)| {
                let key = (b, s.children().iter().map(|&c| blocks[c]).collect());
                let n = sigs.len();
                *sigs.entry(key).or_insert(n)
            })
            .collect();
        blocks = next;
        if sigs.len() == count {
            return blocks;
        }
        count = sigs.len();
    }
}

/// Labels of the leaves at each depth `1..=k` of the unfolding, computed on
/// the state graph.
pub fn leaf_labels_by_depth(t: &RationalTree, k: usize) -> Vec<BTreeSet<String>> {
    let mut out = Vec::with_capacity(k);
    let mut frontier: BTreeSet<usize> = BTreeSet::from([0]);
    for _ in 0..k {
        let next: BTreeSet<usize> = frontier
            .iter()
            .flat_map(|&s| t.steps[s].children().iter().copied())
            .collect();
        out.push(
            next.iter()
                .filter_map(|&s| match &t.steps[s] {
                    Step::Leaf(l) => Some(l.clone()),
                    Step::Op { .. } => None,
                })
                .collect(),
        );
        frontier = next;
    }
    out
}

/// `true` when `label` is the cutting symbol.
pub fn is_bottom(label: &str) -> bool {
    label == BOTTOM
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::FiniteTree as F;

    fn binary() -> Signature {
        Signature::new([("sigma", 2)]).unwrap()
    }

    fn unary() -> Signature {
        Signature::new([("a", 1), ("b", 1)]).unwrap()
    }

    /// s0 → σ(s0, s1), s1 → y
    fn spine() -> RationalTree {
        RationalTree::new(binary(), vec![Step::op("sigma", vec![0, 1]), Step::leaf("y")], 0).unwrap()
    }

    fn a_loop() -> RationalTree {
        RationalTree::new(unary(), vec![Step::op("a", vec![0])], 0).unwrap()
    }

    fn a_cycle2() -> RationalTree {
        RationalTree::new(unary(), vec![Step::op("a", vec![1]), Step::op("a", vec![0])], 0).unwrap()
    }

    #[test]
    fn leaf_examples() {
        let y = RationalTree::leaf(binary(), "y");
        assert_eq!(y.state_count(), 1);
        for k in 1..5 {
            assert_eq!(y.cut(k).unwrap(), F::leaf("y"));
        }
        assert!(!y.bisim_equal(&RationalTree::leaf(binary(), "z")).unwrap());
        assert_eq!(y.count_param_leaves(), LeafCount::Finite(1));
    }

    #[test]
    fn op_apply_shares_leaves() {
        let s = binary();
        let y = RationalTree::leaf(s.clone(), "y");
        let t = RationalTree::op_apply(&s, "sigma", &[y.clone(), y.clone()]).unwrap();
        assert_eq!(t.state_count(), 2);
        assert_eq!(t.count_param_leaves(), LeafCount::Finite(2));
        assert!(matches!(
            RationalTree::op_apply(&s, "sigma", &[y]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn op_apply_unfolds_fixpoint() {
        let s = binary();
        let t = spine();
        let unfolded = RationalTree::op_apply(&s, "sigma", &[t.clone(), RationalTree::leaf(s.clone(), "y")]).unwrap();
        assert!(unfolded.bisim_equal(&t).unwrap());
        assert_eq!(unfolded, t);
    }

    #[test]
    fn cut_of_op_apply_is_op_of_cuts() {
        let s = binary();
        let t1 = spine();
        let t2 = RationalTree::leaf(s.clone(), "z");
        let joined = RationalTree::op_apply(&s, "sigma", &[t1.clone(), t2.clone()]).unwrap();
        for k in 0..6 {
            assert_eq!(
                joined.cut(k + 1).unwrap(),
                F::op("sigma", vec![t1.cut(k).unwrap(), t2.cut(k).unwrap()])
            );
        }
    }

    #[test]
    fn minimize_examples() {
        let s = binary();
        let dup = RationalTree::new(
            s.clone(),
            vec![Step::op("sigma", vec![1, 2]), Step::leaf("y"), Step::leaf("y")],
            0,
        )
        .unwrap();
        assert_eq!(dup.state_count(), 3);
        assert_eq!(dup.minimize().state_count(), 2);

        let sig1 = Signature::new([("sigma", 1)]).unwrap();
        let chain = RationalTree::new(sig1.clone(), vec![Step::op("sigma", vec![1]), Step::op("sigma", vec![0])], 0).unwrap();
        let m = chain.minimize();
        assert_eq!(m.steps(), &[Step::op("sigma", vec![0])]);
        assert!(chain.cut_equal(&m, 2).unwrap());

        let minimal = spine();
        assert_eq!(minimal.minimize().state_count(), minimal.state_count());
    }

    #[test]
    fn pruning_drops_unreachable_states() {
        let t = RationalTree::new(binary(), vec![Step::leaf("y"), Step::op("sigma", vec![0, 0])], 0).unwrap();
        assert_eq!(t.state_count(), 1);
    }

    #[test]
    fn bisim_examples() {
        let t = spine();
        assert!(t.bisim_equal(&t).unwrap());
        let (l, c) = (a_loop(), a_cycle2());
        assert!(l.bisim_equal(&c).unwrap());
        assert!(l.cut_equal(&c, 2).unwrap());
        assert_eq!(l.bisim_equal(&t), Err(Error::SignatureMismatch));
    }

    #[test]
    fn cut_examples() {
        let t = spine();
        assert_eq!(t.cut(0).unwrap(), F::bottom());
        assert_eq!(
            t.cut(2).unwrap(),
            F::op("sigma", vec![F::op("sigma", vec![F::bottom(), F::bottom()]), F::leaf("y")])
        );
        let bad = RationalTree::leaf(binary(), BOTTOM);
        assert_eq!(bad.cut(1).unwrap_err(), Error::ReservedParameter(BOTTOM.into()));
    }

    #[test]
    fn leaf_count_examples() {
        assert_eq!(spine().count_param_leaves(), LeafCount::Infinite);
        assert!(!spine().in_c());
        assert_eq!(a_loop().count_param_leaves(), LeafCount::Finite(0));
        assert!(a_loop().in_c());
        let s = binary();
        let ft = F::op("sigma", vec![F::leaf("y"), F::op("sigma", vec![F::leaf("z"), F::leaf("y")])]);
        let t = RationalTree::from_finite(&s, &ft).unwrap();
        assert!(t.in_c());
        assert_eq!(t.count_param_leaves(), LeafCount::Finite(3));
    }

    #[test]
    fn leaf_count_saturates() {
        // a full binary DAG of depth 70 has 2^70 leaves
        let s = binary();
        let mut steps = Vec::new();
        for i in 0..70 {
            steps.push(Step::op("sigma", vec![i + 1, i + 1]));
        }
        steps.push(Step::leaf("y"));
        let t = RationalTree::new(s, steps, 0).unwrap();
        assert_eq!(t.count_param_leaves(), LeafCount::Saturated);
        assert!(t.in_c());
    }

    #[test]
    fn graft_examples() {
        let s = binary();
        let u = spine();
        let y = RationalTree::leaf(s.clone(), "y");
        assert_eq!(y.graft(&BTreeMap::from([("y".to_string(), u.clone())])).unwrap(), u);
        let t = spine();
        let id = t.graft(&BTreeMap::from([("y".to_string(), y.clone())])).unwrap();
        assert!(id.bisim_equal(&t).unwrap());
        assert_eq!(t.graft(&BTreeMap::new()).unwrap_err(), Error::MissingAssignment("y".into()));
    }

    #[test]
    fn graft_spine_with_parameter_free_tree() {
        let s = Signature::new([("sigma", 2), ("a", 1)]).unwrap();
        let spine = RationalTree::new(s.clone(), vec![Step::op("sigma", vec![0, 1]), Step::leaf("y")], 0).unwrap();
        let a_loop = RationalTree::new(s.clone(), vec![Step::op("a", vec![0])], 0).unwrap();
        let g = spine.graft(&BTreeMap::from([("y".to_string(), a_loop.clone())])).unwrap();
        assert_eq!(g.count_param_leaves(), LeafCount::Finite(0));
        // hand substitution on the level-5 cut: a y-leaf at depth d becomes
        // the a-loop cut at the remaining depth 5 - d
        fn subst(t: &F, depth: usize, k: usize) -> F {
            match t {
                F::Leaf(l) if l == "y" => {
                    let mut out = F::bottom();
                    for _ in 0..(k - depth) {
                        out = F::op("a", vec![out]);
                    }
                    out
                }
                F::Leaf(l) => F::Leaf(l.clone()),
                F::Op(h, cs) => F::Op(h.clone(), cs.iter().map(|c| subst(c, depth + 1, k)).collect()),
            }
        }
        assert_eq!(g.cut(5).unwrap(), subst(&spine.cut(5).unwrap(), 0, 5));
    }

    #[test]
    fn lasso_round_trip() {
        let s = unary();
        let l = Lasso::new(Vec::<String>::new(), ["a"]).unwrap();
        let t = RationalTree::from_lasso(&l, &s).unwrap();
        assert_eq!(t, a_loop().minimize());
        assert_eq!(t.to_lasso().unwrap(), l);

        let ab = Lasso::new(Vec::<String>::new(), ["a", "b"]).unwrap();
        let t = RationalTree::from_lasso(&ab, &s).unwrap();
        assert_eq!(t.state_count(), 2);
        let mut expect = F::bottom();
        for w in ["b", "a", "b", "a", "b", "a"] {
            expect = F::op(w, vec![expect]);
        }
        assert_eq!(t.cut(6).unwrap(), expect);
        assert_eq!(t.to_lasso().unwrap(), ab);

        assert!(matches!(RationalTree::from_lasso(&l, &binary()), Err(Error::NonUnarySignature(..))));
        let with_leaf = RationalTree::new(s, vec![Step::op("a", vec![1]), Step::leaf("y")], 0).unwrap();
        assert_eq!(with_leaf.to_lasso().unwrap_err(), Error::HasParameters);
    }

    #[test]
    fn leaf_labels_by_depth_on_spine() {
        let levels = leaf_labels_by_depth(&spine(), 4);
        assert!(levels.iter().all(|l| l.contains("y")));
    }
}
