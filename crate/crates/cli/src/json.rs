//! JSON output and its reader.
//!
//! Every command emits one object with a `command` field. Solutions carry
//! `signature` and `variables`; each variable has a `kind` of `tree`
//! (`states`, root is state 0), `finite` (`word`, `leaf`) or `stream`
//! (`lasso`). Verdict-style commands add a `verdict` string and their own
//! fields.

use std::collections::BTreeMap;

use corec::solver::Decomposed;
use corec::{Lasso, RationalTree, Signature, Step};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoJson {
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableJson {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<StateJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lasso: Option<LassoJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Vec<SymbolJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<VariableJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(flatten)]
    pub fields: Map<String, Value>,
}

impl Document {
    pub fn new(command: &str) -> Self {
        Document {
            command: command.to_string(),
            signature: None,
            variables: Vec::new(),
            verdict: None,
            fields: Map::new(),
        }
    }

    pub fn with_signature(mut self, sig: &Signature) -> Self {
        self.signature = Some(
            sig.symbols()
                .iter()
                .map(|s| SymbolJson {
                    name: s.name.clone(),
                    arity: s.arity,
                })
                .collect(),
        );
        self
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }
}

pub fn tree_variable(name: &str, t: &RationalTree) -> VariableJson {
    let states = t
        .steps()
        .iter()
        .map(|s| match s {
            Step::Leaf(l) => StateJson {
                op: None,
                children: None,
                leaf: Some(l.clone()),
            },
            Step::Op { symbol, children } => StateJson {
                op: Some(symbol.clone()),
                children: Some(children.clone()),
                leaf: None,
            },
        })
        .collect();
    VariableJson {
        name: name.to_string(),
        kind: "tree".into(),
        states: Some(states),
        word: None,
        leaf: None,
        lasso: None,
    }
}

pub fn decomposed_variable(name: &str, d: &Decomposed) -> VariableJson {
    let mut v = VariableJson {
        name: name.to_string(),
        kind: String::new(),
        states: None,
        word: None,
        leaf: None,
        lasso: None,
    };
    match d {
        Decomposed::Finite { word, leaf } => {
            v.kind = "finite".into();
            v.word = Some(word.clone());
            v.leaf = Some(leaf.clone());
        }
        Decomposed::Infinite(l) => {
            v.kind = "stream".into();
            v.lasso = Some(LassoJson {
                prefix: l.prefix().to_vec(),
                period: l.period().to_vec(),
            });
        }
    }
    v
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("document has no signature")]
    NoSignature,
    #[error("variable `{0}` is malformed")]
    Malformed(String),
    #[error(transparent)]
    Engine(#[from] corec::Error),
}

/// Rebuilds the trees of every variable in a solution document.
pub fn read_trees(text: &str) -> Result<BTreeMap<String, RationalTree>, JsonError> {
    let doc: Document = serde_json::from_str(text)?;
    let sig = Signature::new(doc.signature.ok_or(JsonError::NoSignature)?.into_iter().map(|s| (s.name, s.arity)))?;
    let mut out = BTreeMap::new();
    for v in doc.variables {
        let bad = || JsonError::Malformed(v.name.clone());
        let tree = match v.kind.as_str() {
            "tree" => {
                let steps = v
                    .states
                    .as_ref()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|s| match (&s.op, &s.children, &s.leaf) {
                        (Some(op), Some(cs), None) => Ok(Step::op(op.clone(), cs.clone())),
                        (None, None, Some(l)) => Ok(Step::leaf(l.clone())),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                RationalTree::new(sig.clone(), steps, 0)?
            }
            "finite" => Decomposed::Finite {
                word: v.word.clone().ok_or_else(bad)?,
                leaf: v.leaf.clone().ok_or_else(bad)?,
            }
            .to_tree(&sig)?,
            "stream" => {
                let l = v.lasso.as_ref().ok_or_else(bad)?;
                Decomposed::Infinite(Lasso::new(l.prefix.clone(), l.period.clone())?).to_tree(&sig)?
            }
            _ => return Err(bad()),
        };
        out.insert(v.name.clone(), tree);
    }
    Ok(out)
}
