//! Finite Σ-algebras given by operation tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{for_each_tuple, FiniteTree, Signature};
use crate::Budget;

/// A finite carrier with a total table for every symbol.
///
/// Tables are stored flat: the entry for `σ(a1, …, an)` lives at the
/// mixed-radix index `a1·|A|^(n-1) + … + an` of element indices.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    signature: Signature,
    carrier: Vec<String>,
    index: HashMap<String, usize>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// `tables[i]` is the flat table of the `i`-th symbol of the signature.
    pub fn new<C>(signature: Signature, carrier: C, tables: Vec<Vec<usize>>) -> Result<Self>
    where
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let carrier: Vec<String> = carrier.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, c) in carrier.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(Error::DuplicateName(c.clone()));
            }
        }
        if tables.len() != signature.len() {
            let missing = &signature.symbols()[tables.len().min(signature.len() - 1)];
            return Err(Error::IncompleteTable {
                symbol: missing.name.clone(),
                expected: signature.len(),
                found: tables.len(),
            });
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = carrier.len().pow(sym.arity as u32);
            if table.len() != expected {
                return Err(Error::IncompleteTable {
                    symbol: sym.name.clone(),
                    expected,
                    found: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= carrier.len()) {
                return Err(Error::UnknownElement(bad.to_string()));
            }
        }
        Ok(FiniteAlgebra {
            signature,
            carrier,
            index,
            tables,
        })
    }

    /// Builds tables by evaluating `op(symbol index, argument indices)`.
    pub fn from_fn<C>(signature: Signature, carrier: C, op: impl Fn(usize, &[usize]) -> usize) -> Result<Self>
    where
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let carrier: Vec<String> = carrier.into_iter().map(Into::into).collect();
        let tables = signature
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut t = Vec::new();
                for_each_tuple(carrier.len(), s.arity, |args| t.push(op(i, args)));
                t
            })
            .collect();
        Self::new(signature, carrier, tables)
    }

    /// Builds tables from named rows `(symbol, args, result)`; every row of
    /// every table must be present.
    pub fn from_rows<C>(signature: Signature, carrier: C, rows: &[(String, Vec<String>, String)]) -> Result<Self>
    where
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let carrier: Vec<String> = carrier.into_iter().map(Into::into).collect();
        let index: HashMap<&str, usize> = carrier.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let elem = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()));
        let mut partial: Vec<Vec<Option<usize>>> = signature
            .symbols()
            .iter()
            .map(|s| vec![None; carrier.len().pow(s.arity as u32)])
            .collect();
        for (sym, args, out) in rows {
            let i = signature
                .index_of(sym)
                .ok_or_else(|| Error::UnknownSymbol(sym.clone()))?;
            let arity = signature.symbol(i).arity;
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: sym.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let mut pos = 0;
            for a in args {
                pos = pos * carrier.len() + elem(a)?;
            }
            partial[i][pos] = Some(elem(out)?);
        }
        let tables = signature
            .symbols()
            .iter()
            .zip(partial)
            .map(|(s, t)| {
                let expected = t.len();
                let found = t.iter().filter(|v| v.is_some()).count();
                t.into_iter().collect::<Option<Vec<_>>>().ok_or(Error::IncompleteTable {
                    symbol: s.name.clone(),
                    expected,
                    found,
                })
            })
            .collect::<Result<_>>()?;
        Self::new(signature, carrier, tables)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    #[inline]
    pub fn apply(&self, symbol: usize, args: &[usize]) -> usize {
        let mut pos = 0;
        for &a in args {
            pos = pos * self.carrier.len() + a;
        }
        self.tables[symbol][pos]
    }

    pub fn apply_named(&self, symbol: &str, args: &[&str]) -> Result<String> {
        let i = self
            .signature
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        let args = args.iter().map(|a| self.element(a)).collect::<Result<Vec<_>>>()?;
        Ok(self.carrier[self.apply(i, &args)].clone())
    }

    /// Evaluates a finite tree; leaves are looked up in `valuation`.
    pub fn eval(&self, tree: &FiniteTree, valuation: &BTreeMap<String, usize>) -> Result<usize> {
        match tree {
            FiniteTree::Leaf(l) => valuation
                .get(l)
                .copied()
                .ok_or_else(|| Error::MissingAssignment(l.clone())),
            FiniteTree::Op(h, cs) => {
                let i = self
                    .signature
                    .index_of(h)
                    .ok_or_else(|| Error::UnknownSymbol(h.clone()))?;
                let args = cs.iter().map(|c| self.eval(c, valuation)).collect::<Result<Vec<_>>>()?;
                Ok(self.apply(i, &args))
            }
        }
    }

    /// Number of distinct algebras on a carrier of `size` elements.
    pub fn count_all(signature: &Signature, size: usize) -> u128 {
        signature.symbols().iter().fold(1u128, |acc, s| {
            let cells = (size as u128).saturating_pow(s.arity as u32);
            acc.saturating_mul((size as u128).saturating_pow(cells.min(u32::MAX as u128) as u32))
        })
    }

    /// Every algebra on the carrier `0, 1, …, size-1`, in lexicographic order
    /// of the concatenated tables.
    pub fn enumerate_all(signature: &Signature, size: usize, budget: Budget) -> Result<Vec<FiniteAlgebra>> {
        budget.check(Self::count_all(signature, size))?;
        let carrier: Vec<String> = (0..size).map(|i| i.to_string()).collect();
        let shape: Vec<usize> = signature
            .symbols()
            .iter()
            .map(|s| size.pow(s.arity as u32))
            .collect();
        let cells: usize = shape.iter().sum();
        let mut out = Vec::new();
        for_each_tuple(size, cells, |flat| {
            let mut tables = Vec::with_capacity(shape.len());
            let mut at = 0;
            for &len in &shape {
                tables.push(flat[at..at + len].to_vec());
                at += len;
            }
            out.push(
                FiniteAlgebra::new(signature.clone(), carrier.clone(), tables)
                    .expect("enumerated tables are total"),
            );
        });
        Ok(out)
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAlgebra")
            .field("carrier", &self.carrier)
            .field("tables", &self.tables)
            .finish()
    }
}
