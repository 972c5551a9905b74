//! Finite algebras given by operation tables.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgError {
    #[error("carrier size must be positive")]
    EmptyCarrier,
    #[error("operation `{name}`: table has {got} entries, expected {expected}")]
    TableSize { name: String, got: usize, expected: usize },
    #[error("operation `{name}`: value {value} out of range")]
    TableValue { name: String, value: usize },
    #[error("constant `{name}` = {value} out of range")]
    ConstantRange { name: String, value: usize },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("operation `{name}` takes {arity} arguments, got {got}")]
    Arity { name: String, arity: usize, got: usize },
    #[error("variable x{0} is not assigned")]
    Unassigned(usize),
    #[error("element {0} out of range")]
    Element(usize),
    #[error("carrier size {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    /// Row-major: the first argument is the most significant digit.
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constant {
    pub name: String,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra")]
pub struct FiniteAlgebra {
    pub size: usize,
    pub operations: Vec<Operation>,
    #[serde(default)]
    pub constants: Vec<Constant>,
}

#[derive(Deserialize)]
struct RawAlgebra {
    size: usize,
    operations: Vec<Operation>,
    #[serde(default)]
    constants: Vec<Constant>,
}

impl TryFrom<RawAlgebra> for FiniteAlgebra {
    type Error = AlgError;
    fn try_from(r: RawAlgebra) -> Result<Self, AlgError> {
        FiniteAlgebra::new(r.size, r.operations, r.constants)
    }
}

impl FiniteAlgebra {
    pub fn new(size: usize, operations: Vec<Operation>, constants: Vec<Constant>) -> Result<Self, AlgError> {
        if size == 0 {
            return Err(AlgError::EmptyCarrier);
        }
        for op in &operations {
            let expected = size.pow(op.arity as u32);
            if op.table.len() != expected {
                return Err(AlgError::TableSize { name: op.name.clone(), got: op.table.len(), expected });
            }
            if let Some(&value) = op.table.iter().find(|&&v| v >= size) {
                return Err(AlgError::TableValue { name: op.name.clone(), value });
            }
        }
        for c in &constants {
            if c.value >= size {
                return Err(AlgError::ConstantRange { name: c.name.clone(), value: c.value });
            }
        }
        Ok(FiniteAlgebra { size, operations, constants })
    }

    /// One binary operation `name` with the given row-major table and the
    /// constant `0` = element 0.
    pub fn binary(size: usize, name: &str, table: Vec<usize>) -> Result<Self, AlgError> {
        FiniteAlgebra::new(
            size,
            vec![Operation { name: name.into(), arity: 2, table }],
            vec![Constant { name: "0".into(), value: 0 }],
        )
    }

    pub fn from_json(text: &str) -> Result<Self, AlgError> {
        serde_json::from_str(text).map_err(|e| AlgError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("algebra serializes")
    }

    pub fn op_index(&self, name: &str) -> Result<usize, AlgError> {
        self.operations.iter().position(|o| o.name == name).ok_or_else(|| AlgError::UnknownOp(name.into()))
    }

    pub fn constant(&self, name: &str) -> Result<usize, AlgError> {
        self.constants
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.value)
            .ok_or_else(|| AlgError::UnknownConstant(name.into()))
    }

    /// The element named `0`, if declared.
    pub fn zero(&self) -> Option<usize> {
        self.constant("0").ok()
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let o = &self.operations[op];
        debug_assert_eq!(args.len(), o.arity);
        let idx = args.iter().fold(0, |acc, &a| acc * self.size + a);
        o.table[idx]
    }

    pub fn check_element(&self, a: usize) -> Result<usize, AlgError> {
        if a < self.size {
            Ok(a)
        } else {
            Err(AlgError::Element(a))
        }
    }
}

/// A term over the signature of an algebra with variables x₀, x₁, ….
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgTerm {
    Var(usize),
    /// Index into the algebra's constants.
    Const(usize),
    Op(usize, Vec<AlgTerm>),
}

impl AlgTerm {
    pub fn size(&self) -> usize {
        match self {
            AlgTerm::Op(_, args) => 1 + args.iter().map(AlgTerm::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            AlgTerm::Op(_, args) => 1 + args.iter().map(AlgTerm::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// The canonical enumeration order: size, then kind (variables,
    /// constants, operations), then index, then arguments left to right.
    pub fn canonical_cmp(&self, other: &AlgTerm) -> std::cmp::Ordering {
        fn rank(t: &AlgTerm) -> (u8, usize) {
            match t {
                AlgTerm::Var(i) => (0, *i),
                AlgTerm::Const(c) => (1, *c),
                AlgTerm::Op(o, _) => (2, *o),
            }
        }
        self.size().cmp(&other.size()).then_with(|| rank(self).cmp(&rank(other))).then_with(|| match (self, other) {
            (AlgTerm::Op(_, a), AlgTerm::Op(_, b)) => {
                a.iter().zip(b).map(|(x, y)| x.canonical_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
            }
            _ => std::cmp::Ordering::Equal,
        })
    }

    pub fn display<'a>(&'a self, a: &'a FiniteAlgebra, vars: &'a [&'a str]) -> TermDisplay<'a> {
        TermDisplay { term: self, algebra: a, vars }
    }
}

pub struct TermDisplay<'a> {
    term: &'a AlgTerm,
    algebra: &'a FiniteAlgebra,
    vars: &'a [&'a str],
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &AlgTerm, a: &FiniteAlgebra, vars: &[&str], top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                AlgTerm::Var(i) => match vars.get(*i) {
                    Some(v) => f.write_str(v),
                    None => write!(f, "x{i}"),
                },
                AlgTerm::Const(c) => f.write_str(&a.constants[*c].name),
                AlgTerm::Op(o, args) => {
                    let name = &a.operations[*o].name;
                    let symbolic = !name.chars().any(char::is_alphanumeric);
                    if symbolic && args.len() == 2 {
                        if !top {
                            f.write_str("(")?;
                        }
                        go(&args[0], a, vars, false, f)?;
                        f.write_str(name)?;
                        go(&args[1], a, vars, false, f)?;
                        if !top {
                            f.write_str(")")?;
                        }
                        Ok(())
                    } else {
                        write!(f, "{name}(")?;
                        for (i, x) in args.iter().enumerate() {
                            if i > 0 {
                                f.write_str(",")?;
                            }
                            go(x, a, vars, true, f)?;
                        }
                        f.write_str(")")
                    }
                }
            }
        }
        go(self.term, self.algebra, self.vars, true, f)
    }
}

/// Value of the term operation induced by `t` at `env`.
pub fn eval(a: &FiniteAlgebra, t: &AlgTerm, env: &[usize]) -> Result<usize, AlgError> {
    match t {
        AlgTerm::Var(i) => env.get(*i).copied().ok_or(AlgError::Unassigned(*i)).and_then(|v| a.check_element(v)),
        AlgTerm::Const(c) => a.constants.get(*c).map(|c| c.value).ok_or_else(|| AlgError::UnknownConstant(c.to_string())),
        AlgTerm::Op(o, args) => {
            let op = a.operations.get(*o).ok_or_else(|| AlgError::UnknownOp(o.to_string()))?;
            if op.arity != args.len() {
                return Err(AlgError::Arity { name: op.name.clone(), arity: op.arity, got: args.len() });
            }
            let vals = args.iter().map(|x| eval(a, x, env)).collect::<Result<Vec<_>, _>>()?;
            Ok(a.apply(*o, &vals))
        }
    }
}

/// The binary term operation of `t` as a k×k table.
pub fn binary_table(a: &FiniteAlgebra, t: &AlgTerm) -> Result<Vec<usize>, AlgError> {
    let k = a.size;
    let mut out = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            out.push(eval(a, t, &[x, y])?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn eval_examples() {
        let z2 = corpus::z2_xor();
        let xy = AlgTerm::Op(0, vec![AlgTerm::Var(0), AlgTerm::Var(1)]);
        assert_eq!(eval(&z2, &xy, &[1, 1]).unwrap(), 0);
        let x0 = AlgTerm::Op(0, vec![AlgTerm::Var(0), AlgTerm::Const(0)]);
        assert_eq!(eval(&z2, &x0, &[1]).unwrap(), 1);
        let meet = corpus::meet_semilattice2();
        assert_eq!(eval(&meet, &xy, &[0, 1]).unwrap(), 0);
        assert_eq!(eval(&z2, &xy, &[1]), Err(AlgError::Unassigned(1)));
    }

    #[test]
    fn json_validation() {
        let j = r#"{"size":2,"operations":[{"name":"+","arity":2,"table":[0,1,1]}]}"#;
        assert!(matches!(FiniteAlgebra::from_json(j), Err(AlgError::Json(_))));
        let z2 = corpus::z2_xor();
        let back = FiniteAlgebra::from_json(&z2.to_json().to_string()).unwrap();
        assert_eq!(back, z2);
    }

    #[test]
    fn infix_display() {
        let z2 = corpus::z2_xor();
        let t = AlgTerm::Op(0, vec![AlgTerm::Op(0, vec![AlgTerm::Var(0), AlgTerm::Var(1)]), AlgTerm::Var(2)]);
        assert_eq!(t.display(&z2, &["x", "y", "z"]).to_string(), "(x⊕y)⊕z");
    }
}
