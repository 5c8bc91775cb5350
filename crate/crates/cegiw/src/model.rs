//! Finite-state models in a small SMV dialect.
//!
//! ```text
//! MODULE main                      -- optional
//! VAR
//!   state   : {RESTING, LEAVING_HOME, HOMING};
//!   charged : boolean;
//!   battery : 0..15;
//! DEFINE
//!   resting := state = RESTING;
//! INIT
//!   state = RESTING & battery = 15
//! TRANS
//!   state = RESTING : next(state) = LEAVING_HOME;
//!   state = LEAVING_HOME : next(state) in {HOMING, RESTING};
//!   default : next(state) = RESTING;
//! ```
//!
//! A `TRANS` section holds either one boolean expression over current and
//! `next(...)` values, or a list of guarded rules `guard : constraint;`. Rules
//! are alternatives: a step is allowed if some rule whose guard holds admits
//! it, and the `default` rule applies only where no other guard holds. Rules
//! are stored as the equivalent expression. Several `INIT`/`TRANS` sections are
//! conjoined; variables left unconstrained by `TRANS` may take any next value.
//!
//! Expressions use `TRUE`, `FALSE`, integers, enum constants, `!`, `&`, `|`,
//! `->`, `<->`, `= != < <= > >=`, `+ -`, `x in {a, b}` and
//! `case g : e; ... esac`. Comments start with `--`.
//!
//! Atoms visible to properties are the boolean variables and boolean DEFINEs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use cegiw_core::State;

/// Upper limit on the size of the variable domain product.
pub const MAX_VALUATIONS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: undeclared identifier `{name}`")]
    Undeclared {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("`{0}` is declared more than once")]
    Duplicate(String),
    #[error("type error in {context}: {message}")]
    Type { context: String, message: String },
    #[error("DEFINE `{0}` depends on itself")]
    CyclicDefine(String),
    #[error("the VAR section declares no variables")]
    NoVariables,
    #[error("empty domain for variable `{0}`")]
    EmptyDomain(String),
    #[error("state space has {0} valuations, more than the supported {MAX_VALUATIONS}")]
    TooLarge(usize),
    #[error("no initial state satisfies INIT")]
    NoInitialState,
    #[error("deadlock: reachable state ({0}) has no successor")]
    Deadlock(String),
    #[error("evaluation failed: {0}")]
    Eval(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Sym(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(true) => f.write_str("TRUE"),
            Value::Bool(false) => f.write_str("FALSE"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Boolean,
    Enum(Vec<String>),
    Range(i64, i64),
}

impl Domain {
    pub fn values(&self) -> Vec<Value> {
        match self {
            Domain::Boolean => vec![Value::Bool(false), Value::Bool(true)],
            Domain::Enum(syms) => syms.iter().cloned().map(Value::Sym).collect(),
            Domain::Range(lo, hi) => (*lo..=*hi).map(Value::Int).collect(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Domain::Boolean => 2,
            Domain::Enum(syms) => syms.len(),
            Domain::Range(lo, hi) => (hi - lo + 1).max(0) as usize,
        }
    }

    fn ty(&self) -> Type {
        match self {
            Domain::Boolean => Type::Bool,
            Domain::Enum(_) => Type::Sym,
            Domain::Range(..) => Type::Int,
        }
    }

    fn index_of(&self, v: &Value) -> Option<usize> {
        match (self, v) {
            (Domain::Boolean, Value::Bool(b)) => Some(usize::from(*b)),
            (Domain::Enum(syms), Value::Sym(s)) => syms.iter().position(|x| x == s),
            (Domain::Range(lo, hi), Value::Int(n)) if lo <= n && n <= hi => Some((n - lo) as usize),
            _ => None,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Boolean => f.write_str("boolean"),
            Domain::Enum(syms) => write!(f, "{{{}}}", syms.join(", ")),
            Domain::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Type {
    Bool,
    Int,
    Sym,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Bool => "boolean",
            Type::Int => "integer",
            Type::Sym => "symbolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Implies,
    Iff,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Implies => "->",
            BinOp::Iff => "<->",
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Implies => 1,
            BinOp::Iff => 2,
            BinOp::Or => 3,
            BinOp::And => 4,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 5,
            BinOp::Add | BinOp::Sub => 6,
        }
    }
}

const PREC_IN: u8 = 5;
const PREC_UNARY: u8 = 7;
const PREC_ATOM: u8 = 8;

/// Expressions with identifiers already resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(Value),
    Var(usize),
    Next(usize),
    Define(usize),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    In(Box<Expr>, Vec<Expr>),
    Case(Vec<(Expr, Expr)>),
}

impl Expr {
    fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(Value::Int(n)) if *n < 0 => PREC_UNARY,
            Expr::Const(_) | Expr::Var(_) | Expr::Next(_) | Expr::Define(_) | Expr::Case(_) => {
                PREC_ATOM
            }
            Expr::Not(_) | Expr::Neg(_) => PREC_UNARY,
            Expr::Bin(op, ..) => op.precedence(),
            Expr::In(..) => PREC_IN,
        }
    }

    fn mentions_next(&self) -> bool {
        match self {
            Expr::Next(_) => true,
            Expr::Const(_) | Expr::Var(_) | Expr::Define(_) => false,
            Expr::Not(a) | Expr::Neg(a) => a.mentions_next(),
            Expr::Bin(_, a, b) => a.mentions_next() || b.mentions_next(),
            Expr::In(a, set) => a.mentions_next() || set.iter().any(Expr::mentions_next),
            Expr::Case(arms) => arms
                .iter()
                .any(|(g, e)| g.mentions_next() || e.mentions_next()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Define {
    pub name: String,
    pub body: Expr,
}

/// Reachable part of the transition system, states sorted by valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    /// Per state, the index of each variable's value in its domain.
    pub valuations: Vec<Vec<usize>>,
    pub initial: Vec<usize>,
    pub successors: Vec<Vec<usize>>,
    /// Atoms true in each state.
    pub labels: Vec<State>,
}

impl StateGraph {
    pub fn len(&self) -> usize {
        self.valuations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuations.is_empty()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors[from].binary_search(&to).is_ok()
    }
}

/// A validated model together with its reachable state graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub vars: Vec<VarDecl>,
    pub defines: Vec<Define>,
    pub init: Vec<Expr>,
    pub trans: Vec<Expr>,
    atoms: Vec<String>,
    values: Vec<Vec<Value>>,
    graph: StateGraph,
}

impl Model {
    /// Builds and validates a model from resolved declarations.
    pub fn new(
        vars: Vec<VarDecl>,
        defines: Vec<Define>,
        init: Vec<Expr>,
        trans: Vec<Expr>,
    ) -> Result<Model, ModelError> {
        if vars.is_empty() {
            return Err(ModelError::NoVariables);
        }
        let values = vars.iter().map(|v| v.domain.values()).collect();
        let mut model = Model {
            values,
            vars,
            defines,
            init,
            trans,
            atoms: Vec::new(),
            graph: StateGraph {
                valuations: vec![],
                initial: vec![],
                successors: vec![],
                labels: vec![],
            },
        };
        model.typecheck()?;
        model.atoms = model.compute_atoms();
        model.graph = model.explore()?;
        Ok(model)
    }

    pub fn graph(&self) -> &StateGraph {
        &self.graph
    }

    /// Boolean variables and boolean DEFINEs, in declaration order.
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn define_index(&self, name: &str) -> Option<usize> {
        self.defines.iter().position(|d| d.name == name)
    }

    /// `state = RESTING, battery = 3`
    pub fn describe(&self, valuation: &[usize]) -> String {
        self.vars
            .iter()
            .zip(valuation)
            .zip(&self.values)
            .map(|((v, i), values)| format!("{} = {}", v.name, values[*i]))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Atoms true under a full valuation.
    pub fn label(&self, valuation: &[usize]) -> Result<State, ModelError> {
        let env = Env {
            model: self,
            cur: valuation,
            next: None,
        };
        let mut out = State::new();
        for atom in &self.atoms {
            let v = match self.var_index(atom) {
                Some(i) => self.values[i][valuation[i]].clone(),
                None => env.eval(&self.defines[self.define_index(atom).expect("atom")].body)?,
            };
            if v == Value::Bool(true) {
                out.insert(atom.clone());
            }
        }
        Ok(out)
    }

    pub fn domain_index(&self, var: usize, v: &Value) -> Option<usize> {
        self.vars[var].domain.index_of(v)
    }

    fn compute_atoms(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .vars
            .iter()
            .filter(|v| v.domain == Domain::Boolean)
            .map(|v| v.name.clone())
            .collect();
        let mut types = HashMap::new();
        for (i, d) in self.defines.iter().enumerate() {
            if self.define_type(i, &mut types, &mut Vec::new()) == Ok(Type::Bool) {
                out.push(d.name.clone());
            }
        }
        out
    }

    fn typecheck(&self) -> Result<(), ModelError> {
        for v in &self.vars {
            if v.domain.size() == 0 {
                return Err(ModelError::EmptyDomain(v.name.clone()));
            }
        }
        let mut types = HashMap::new();
        for i in 0..self.defines.len() {
            self.define_type(i, &mut types, &mut Vec::new())?;
            if self.defines[i].body.mentions_next() {
                return Err(ModelError::Type {
                    context: format!("DEFINE {}", self.defines[i].name),
                    message: "next(...) is only allowed in TRANS".into(),
                });
            }
        }
        let expect_bool = |e: &Expr, what: &str, types: &mut HashMap<usize, Type>| {
            let ctx = what.to_string();
            match self.type_of(e, types, &mut Vec::new(), &ctx)? {
                Type::Bool => Ok(()),
                t => Err(ModelError::Type {
                    context: ctx,
                    message: format!("expected boolean, found {t}"),
                }),
            }
        };
        for e in &self.init {
            expect_bool(e, "INIT", &mut types)?;
            if e.mentions_next() {
                return Err(ModelError::Type {
                    context: "INIT".into(),
                    message: "next(...) is only allowed in TRANS".into(),
                });
            }
        }
        for e in &self.trans {
            expect_bool(e, "TRANS", &mut types)?;
        }
        Ok(())
    }

    fn define_type(
        &self,
        i: usize,
        types: &mut HashMap<usize, Type>,
        stack: &mut Vec<usize>,
    ) -> Result<Type, ModelError> {
        if let Some(t) = types.get(&i) {
            return Ok(*t);
        }
        if stack.contains(&i) {
            return Err(ModelError::CyclicDefine(self.defines[i].name.clone()));
        }
        stack.push(i);
        let ctx = format!("DEFINE {}", self.defines[i].name);
        let t = self.type_of(&self.defines[i].body, types, stack, &ctx)?;
        stack.pop();
        types.insert(i, t);
        Ok(t)
    }

    fn type_of(
        &self,
        e: &Expr,
        types: &mut HashMap<usize, Type>,
        stack: &mut Vec<usize>,
        ctx: &str,
    ) -> Result<Type, ModelError> {
        let err = |message: String| ModelError::Type {
            context: ctx.to_string(),
            message,
        };
        let same = |a: Type, b: Type, what: &str| {
            if a == b {
                Ok(a)
            } else {
                Err(err(format!("operands of `{what}` have types {a} and {b}")))
            }
        };
        Ok(match e {
            Expr::Const(Value::Bool(_)) => Type::Bool,
            Expr::Const(Value::Int(_)) => Type::Int,
            Expr::Const(Value::Sym(_)) => Type::Sym,
            Expr::Var(i) | Expr::Next(i) => self.vars[*i].domain.ty(),
            Expr::Define(i) => self.define_type(*i, types, stack)?,
            Expr::Not(a) => same(self.type_of(a, types, stack, ctx)?, Type::Bool, "!")?,
            Expr::Neg(a) => same(self.type_of(a, types, stack, ctx)?, Type::Int, "-")?,
            Expr::Bin(op, a, b) => {
                let (ta, tb) = (
                    self.type_of(a, types, stack, ctx)?,
                    self.type_of(b, types, stack, ctx)?,
                );
                let sym = op.symbol();
                match op {
                    BinOp::Implies | BinOp::Iff | BinOp::Or | BinOp::And => {
                        same(same(ta, tb, sym)?, Type::Bool, sym)?
                    }
                    BinOp::Eq | BinOp::Ne => {
                        same(ta, tb, sym)?;
                        Type::Bool
                    }
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        same(same(ta, tb, sym)?, Type::Int, sym)?;
                        Type::Bool
                    }
                    BinOp::Add | BinOp::Sub => same(same(ta, tb, sym)?, Type::Int, sym)?,
                }
            }
            Expr::In(a, set) => {
                let ta = self.type_of(a, types, stack, ctx)?;
                for x in set {
                    same(ta, self.type_of(x, types, stack, ctx)?, "in")?;
                }
                Type::Bool
            }
            Expr::Case(arms) => {
                let mut result = None;
                for (g, v) in arms {
                    same(
                        self.type_of(g, types, stack, ctx)?,
                        Type::Bool,
                        "case guard",
                    )?;
                    let tv = self.type_of(v, types, stack, ctx)?;
                    if let Some(t) = result {
                        same(t, tv, "case")?;
                    }
                    result = Some(tv);
                }
                result.ok_or_else(|| err("empty case expression".into()))?
            }
        })
    }

    fn all_valuations(&self) -> Result<Vec<Vec<usize>>, ModelError> {
        let total = self.vars.iter().try_fold(1usize, |acc, v| {
            acc.checked_mul(v.domain.size())
                .filter(|n| *n <= MAX_VALUATIONS)
        });
        let Some(total) = total else {
            let approx = self
                .vars
                .iter()
                .fold(1f64, |acc, v| acc * v.domain.size() as f64);
            return Err(ModelError::TooLarge(approx.min(usize::MAX as f64) as usize));
        };
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0; self.vars.len()];
        loop {
            out.push(cur.clone());
            // odometer increment, last variable fastest
            let mut k = self.vars.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < self.vars[k].domain.size() {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    fn satisfies_all(
        &self,
        exprs: &[Expr],
        cur: &[usize],
        next: Option<&[usize]>,
    ) -> Result<bool, ModelError> {
        let env = Env {
            model: self,
            cur,
            next,
        };
        for e in exprs {
            if env.eval(e)? != Value::Bool(true) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn explore(&self) -> Result<StateGraph, ModelError> {
        let all = self.all_valuations()?;
        let mut initial = Vec::new();
        for v in &all {
            if self.satisfies_all(&self.init, v, None)? {
                initial.push(v.clone());
            }
        }
        if initial.is_empty() {
            return Err(ModelError::NoInitialState);
        }
        let mut succ: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        let mut queue: VecDeque<Vec<usize>> = initial.iter().cloned().collect();
        let mut seen: BTreeSet<Vec<usize>> = initial.iter().cloned().collect();
        while let Some(s) = queue.pop_front() {
            let mut next = Vec::new();
            for n in &all {
                if self.satisfies_all(&self.trans, &s, Some(n))? {
                    next.push(n.clone());
                    if seen.insert(n.clone()) {
                        queue.push_back(n.clone());
                    }
                }
            }
            if next.is_empty() {
                return Err(ModelError::Deadlock(self.describe(&s)));
            }
            succ.insert(s, next);
        }
        let valuations: Vec<Vec<usize>> = seen.into_iter().collect();
        let id = |v: &Vec<usize>| valuations.binary_search(v).expect("reachable");
        let successors = valuations
            .iter()
            .map(|v| {
                let mut ids: Vec<usize> = succ[v].iter().map(id).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        let mut initial: Vec<usize> = initial.iter().map(id).collect();
        initial.sort_unstable();
        let labels = valuations
            .iter()
            .map(|v| self.label(v))
            .collect::<Result<_, _>>()?;
        Ok(StateGraph {
            valuations,
            initial,
            successors,
            labels,
        })
    }
}

struct Env<'a> {
    model: &'a Model,
    cur: &'a [usize],
    next: Option<&'a [usize]>,
}

impl Env<'_> {
    fn var(&self, i: usize, idx: usize) -> Value {
        self.model.values[i][idx].clone()
    }

    fn eval(&self, e: &Expr) -> Result<Value, ModelError> {
        let bool_of = |v: Value| match v {
            Value::Bool(b) => Ok(b),
            other => Err(ModelError::Eval(format!("expected boolean, found {other}"))),
        };
        let int_of = |v: Value| match v {
            Value::Int(n) => Ok(n),
            other => Err(ModelError::Eval(format!("expected integer, found {other}"))),
        };
        Ok(match e {
            Expr::Const(v) => v.clone(),
            Expr::Var(i) => self.var(*i, self.cur[*i]),
            Expr::Next(i) => {
                let next = self
                    .next
                    .ok_or_else(|| ModelError::Eval("next(...) outside TRANS".into()))?;
                self.var(*i, next[*i])
            }
            Expr::Define(i) => {
                let plain = Env {
                    model: self.model,
                    cur: self.cur,
                    next: None,
                };
                plain.eval(&self.model.defines[*i].body)?
            }
            Expr::Not(a) => Value::Bool(!bool_of(self.eval(a)?)?),
            Expr::Neg(a) => Value::Int(-int_of(self.eval(a)?)?),
            Expr::Bin(op, a, b) => {
                match op {
                    BinOp::And => {
                        return Ok(Value::Bool(
                            bool_of(self.eval(a)?)? && bool_of(self.eval(b)?)?,
                        ))
                    }
                    BinOp::Or => {
                        return Ok(Value::Bool(
                            bool_of(self.eval(a)?)? || bool_of(self.eval(b)?)?,
                        ))
                    }
                    BinOp::Implies => {
                        return Ok(Value::Bool(
                            !bool_of(self.eval(a)?)? || bool_of(self.eval(b)?)?,
                        ))
                    }
                    _ => {}
                }
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Iff => Value::Bool(bool_of(x)? == bool_of(y)?),
                    BinOp::Eq => Value::Bool(x == y),
                    BinOp::Ne => Value::Bool(x != y),
                    BinOp::Lt => Value::Bool(int_of(x)? < int_of(y)?),
                    BinOp::Le => Value::Bool(int_of(x)? <= int_of(y)?),
                    BinOp::Gt => Value::Bool(int_of(x)? > int_of(y)?),
                    BinOp::Ge => Value::Bool(int_of(x)? >= int_of(y)?),
                    BinOp::Add => Value::Int(int_of(x)? + int_of(y)?),
                    BinOp::Sub => Value::Int(int_of(x)? - int_of(y)?),
                    BinOp::And | BinOp::Or | BinOp::Implies => unreachable!(),
                }
            }
            Expr::In(a, set) => {
                let x = self.eval(a)?;
                for y in set {
                    if self.eval(y)? == x {
                        return Ok(Value::Bool(true));
                    }
                }
                Value::Bool(false)
            }
            Expr::Case(arms) => {
                for (g, v) in arms {
                    if bool_of(self.eval(g)?)? {
                        return self.eval(v);
                    }
                }
                return Err(ModelError::Eval("no case branch applies".into()));
            }
        })
    }
}

// ---------------------------------------------------------------- printing

struct ExprPrinter<'a> {
    model: &'a Model,
    expr: &'a Expr,
}

impl Model {
    pub fn show<'a>(&'a self, expr: &'a Expr) -> impl fmt::Display + 'a {
        ExprPrinter { model: self, expr }
    }
}

impl ExprPrinter<'_> {
    fn sub<'b>(&'b self, e: &'b Expr) -> ExprPrinter<'b> {
        ExprPrinter {
            model: self.model,
            expr: e,
        }
    }

    fn child(&self, f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({})", self.sub(e))
        } else {
            write!(f, "{}", self.sub(e))
        }
    }
}

impl fmt::Display for ExprPrinter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.model;
        match self.expr {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Var(i) => f.write_str(&m.vars[*i].name),
            Expr::Next(i) => write!(f, "next({})", m.vars[*i].name),
            Expr::Define(i) => f.write_str(&m.defines[*i].name),
            Expr::Not(a) => {
                f.write_str("!")?;
                self.child(f, a, a.precedence() < PREC_UNARY)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                self.child(f, a, a.precedence() <= PREC_UNARY)
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                let (lp, rp) = match op {
                    BinOp::Implies => (a.precedence() <= p, b.precedence() < p),
                    _ if p == 5 => (a.precedence() <= p, b.precedence() <= p),
                    _ => (a.precedence() < p, b.precedence() <= p),
                };
                self.child(f, a, lp)?;
                write!(f, " {} ", op.symbol())?;
                self.child(f, b, rp)
            }
            Expr::In(a, set) => {
                self.child(f, a, a.precedence() <= PREC_IN)?;
                f.write_str(" in {")?;
                for (k, x) in set.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", self.sub(x))?;
                }
                f.write_str("}")
            }
            Expr::Case(arms) => {
                f.write_str("case ")?;
                for (g, v) in arms {
                    write!(f, "{} : {}; ", self.sub(g), self.sub(v))?;
                }
                f.write_str("esac")
            }
        }
    }
}

impl fmt::Display for Model {
    /// Model text accepted by [`parse_model`] and by nuXmv.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MODULE main")?;
        writeln!(f, "VAR")?;
        for v in &self.vars {
            writeln!(f, "  {} : {};", v.name, v.domain)?;
        }
        if !self.defines.is_empty() {
            writeln!(f, "DEFINE")?;
            for d in &self.defines {
                writeln!(f, "  {} := {};", d.name, self.show(&d.body))?;
            }
        }
        for e in &self.init {
            writeln!(f, "INIT\n  {}", self.show(e))?;
        }
        for e in &self.trans {
            writeln!(f, "TRANS\n  {}", self.show(e))?;
        }
        Ok(())
    }
}

// ----------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(&'static str),
    Eof,
}

const PUNCT: [&str; 22] = [
    "<->", "->", ":=", "..", "!=", "<=", ">=", ":", ";", ",", "{", "}", "(", ")", "=", "<", ">",
    "+", "-", "!", "&", "|",
];

const SECTIONS: [&str; 9] = [
    "MODULE",
    "VAR",
    "DEFINE",
    "INIT",
    "TRANS",
    "LTLSPEC",
    "CTLSPEC",
    "INVARSPEC",
    "SPEC",
];

struct Lexed {
    toks: Vec<(Tok, usize)>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> ModelError {
    let (line, column) = line_col(text, offset);
    ModelError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Lexed, ModelError> {
    let b = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if text[i..].starts_with("--") {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse()
                .map_err(|_| syntax(text, start, "integer literal too large"))?;
            toks.push((Tok::Int(n), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < b.len()
                && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'$' || b[i] == b'#')
            {
                i += 1;
            }
            toks.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        for p in PUNCT {
            if text[i..].starts_with(p) {
                toks.push((Tok::Punct(p), i));
                i += p.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(syntax(text, i, format!("unexpected character `{ch}`")));
    }
    toks.push((Tok::Eof, text.len()));
    Ok(Lexed { toks })
}

/// Unresolved expression as written.
#[derive(Debug, Clone)]
enum Raw {
    Bool(bool),
    Int(i64),
    Ident(String, usize),
    Next(String, usize),
    Not(Box<Raw>),
    Neg(Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
    In(Box<Raw>, Vec<Raw>),
    Case(Vec<(Raw, Raw)>),
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn at_section(&self) -> bool {
        matches!(self.peek(), Tok::Ident(x) if SECTIONS.contains(&x.as_str()))
            || *self.peek() == Tok::Eof
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ModelError> {
        Err(syntax(
            self.text,
            self.offset(),
            format!("expected {expected}, found {}", self.describe()),
        ))
    }

    fn expect_punct(&mut self, p: &'static str) -> Result<(), ModelError> {
        if self.is_punct(p) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{p}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ModelError> {
        let off = self.offset();
        match self.peek().clone() {
            Tok::Ident(s) if !SECTIONS.contains(&s.as_str()) => {
                self.bump();
                Ok((s, off))
            }
            _ => self.fail("an identifier"),
        }
    }

    fn int(&mut self) -> Result<i64, ModelError> {
        let neg = self.is_punct("-");
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.fail("an integer"),
        }
    }

    fn expr(&mut self) -> Result<Raw, ModelError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Raw, ModelError> {
        let lhs = self.iff()?;
        if self.is_punct("->") {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Raw::Bin(BinOp::Implies, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn left_assoc(
        &mut self,
        ops: &[(&str, BinOp)],
        next: fn(&mut Self) -> Result<Raw, ModelError>,
    ) -> Result<Raw, ModelError> {
        let mut acc = next(self)?;
        'scan: loop {
            for (sym, op) in ops {
                if self.is_punct(sym) {
                    self.bump();
                    let rhs = next(self)?;
                    acc = Raw::Bin(*op, Box::new(acc), Box::new(rhs));
                    continue 'scan;
                }
            }
            return Ok(acc);
        }
    }

    fn iff(&mut self) -> Result<Raw, ModelError> {
        self.left_assoc(&[("<->", BinOp::Iff)], Self::or)
    }

    fn or(&mut self) -> Result<Raw, ModelError> {
        self.left_assoc(&[("|", BinOp::Or)], Self::and)
    }

    fn and(&mut self) -> Result<Raw, ModelError> {
        self.left_assoc(&[("&", BinOp::And)], Self::comparison)
    }

    fn comparison(&mut self) -> Result<Raw, ModelError> {
        let lhs = self.additive()?;
        const CMP: [(&str, BinOp); 6] = [
            ("=", BinOp::Eq),
            ("!=", BinOp::Ne),
            ("<=", BinOp::Le),
            (">=", BinOp::Ge),
            ("<", BinOp::Lt),
            (">", BinOp::Gt),
        ];
        for (sym, op) in CMP {
            if self.is_punct(sym) {
                self.bump();
                let rhs = self.additive()?;
                return Ok(Raw::Bin(op, Box::new(lhs), Box::new(rhs)));
            }
        }
        if self.is_ident("in") {
            self.bump();
            self.expect_punct("{")?;
            let mut set = vec![self.additive()?];
            while self.is_punct(",") {
                self.bump();
                set.push(self.additive()?);
            }
            self.expect_punct("}")?;
            return Ok(Raw::In(Box::new(lhs), set));
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Raw, ModelError> {
        self.left_assoc(&[("+", BinOp::Add), ("-", BinOp::Sub)], Self::unary)
    }

    fn unary(&mut self) -> Result<Raw, ModelError> {
        if self.is_punct("!") {
            self.bump();
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        if self.is_punct("-") {
            self.bump();
            return Ok(match self.unary()? {
                Raw::Int(n) => Raw::Int(-n),
                other => Raw::Neg(Box::new(other)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Raw, ModelError> {
        let off = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Raw::Int(n))
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "TRUE" => {
                    self.bump();
                    Ok(Raw::Bool(true))
                }
                "FALSE" => {
                    self.bump();
                    Ok(Raw::Bool(false))
                }
                "next" => {
                    self.bump();
                    self.expect_punct("(")?;
                    let (name, at) = self.ident()?;
                    self.expect_punct(")")?;
                    Ok(Raw::Next(name, at))
                }
                "case" => {
                    self.bump();
                    let mut arms = Vec::new();
                    while !self.is_ident("esac") {
                        let guard = self.guard()?;
                        self.expect_punct(":")?;
                        let value = self.expr()?;
                        self.expect_punct(";")?;
                        arms.push((guard, value));
                    }
                    self.bump();
                    if arms.is_empty() {
                        return Err(syntax(self.text, off, "empty case expression"));
                    }
                    Ok(Raw::Case(arms))
                }
                _ if SECTIONS.contains(&s.as_str()) || s == "esac" || s == "in" => {
                    self.fail("an expression")
                }
                _ => {
                    self.bump();
                    Ok(Raw::Ident(s, off))
                }
            },
            _ => self.fail("an expression"),
        }
    }

    /// A case or rule guard; `default` stands for `TRUE`.
    fn guard(&mut self) -> Result<Raw, ModelError> {
        if self.is_ident("default") {
            self.bump();
            return Ok(Raw::Bool(true));
        }
        self.expr()
    }

    fn domain(&mut self) -> Result<Domain, ModelError> {
        if self.is_ident("boolean") {
            self.bump();
            return Ok(Domain::Boolean);
        }
        if self.is_punct("{") {
            self.bump();
            let mut syms = Vec::new();
            loop {
                let (s, off) = self.ident()?;
                if syms.contains(&s) {
                    return Err(syntax(
                        self.text,
                        off,
                        format!("duplicate enum constant `{s}`"),
                    ));
                }
                syms.push(s);
                if self.is_punct(",") {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect_punct("}")?;
            return Ok(Domain::Enum(syms));
        }
        let off = self.offset();
        if matches!(self.peek(), Tok::Int(_)) || self.is_punct("-") {
            let lo = self.int()?;
            self.expect_punct("..")?;
            let hi = self.int()?;
            if hi < lo {
                return Err(syntax(self.text, off, format!("empty range {lo}..{hi}")));
            }
            return Ok(Domain::Range(lo, hi));
        }
        self.fail("`boolean`, `{...}` or a range `lo..hi`")
    }

    /// The body of a TRANS section: an expression, or guarded rules.
    fn trans_body(&mut self) -> Result<Raw, ModelError> {
        let first_default = self.is_ident("default");
        let first = self.guard()?;
        if !self.is_punct(":") {
            if first_default {
                return self.fail("`:` after `default`");
            }
            if self.is_punct(";") {
                self.bump();
            }
            return Ok(first);
        }
        let mut rules = Vec::new();
        let mut default = None;
        let mut guard = first;
        let mut is_default = first_default;
        loop {
            self.expect_punct(":")?;
            let body = self.expr()?;
            self.expect_punct(";")?;
            if is_default {
                if default.is_some() {
                    return Err(syntax(
                        self.text,
                        self.offset(),
                        "more than one default rule",
                    ));
                }
                default = Some(body);
            } else {
                rules.push((guard, body));
            }
            if self.at_section() {
                break;
            }
            is_default = self.is_ident("default");
            guard = self.guard()?;
        }
        Ok(desugar_rules(rules, default))
    }
}

fn or_all(mut items: Vec<Raw>) -> Option<Raw> {
    let first = if items.is_empty() {
        return None;
    } else {
        items.remove(0)
    };
    Some(items.into_iter().fold(first, |acc, x| {
        Raw::Bin(BinOp::Or, Box::new(acc), Box::new(x))
    }))
}

/// `(g1 & c1) | ... | (!(g1 | ... | gn) & d)`
fn desugar_rules(rules: Vec<(Raw, Raw)>, default: Option<Raw>) -> Raw {
    let guards: Vec<Raw> = rules.iter().map(|(g, _)| g.clone()).collect();
    let mut alts: Vec<Raw> = rules
        .into_iter()
        .map(|(g, c)| Raw::Bin(BinOp::And, Box::new(g), Box::new(c)))
        .collect();
    if let Some(d) = default {
        let fallback = match or_all(guards) {
            Some(any) => Raw::Bin(BinOp::And, Box::new(Raw::Not(Box::new(any))), Box::new(d)),
            None => d,
        };
        alts.push(fallback);
    }
    or_all(alts).unwrap_or(Raw::Bool(false))
}

struct Resolver<'a> {
    text: &'a str,
    vars: HashMap<String, usize>,
    defines: HashMap<String, usize>,
    constants: BTreeSet<String>,
}

impl Resolver<'_> {
    fn resolve(&self, raw: Raw) -> Result<Expr, ModelError> {
        let undeclared = |name: String, off: usize| {
            let (line, column) = line_col(self.text, off);
            ModelError::Undeclared { name, line, column }
        };
        Ok(match raw {
            Raw::Bool(b) => Expr::Const(Value::Bool(b)),
            Raw::Int(n) => Expr::Const(Value::Int(n)),
            Raw::Ident(name, off) => {
                if let Some(i) = self.vars.get(&name) {
                    Expr::Var(*i)
                } else if let Some(i) = self.defines.get(&name) {
                    Expr::Define(*i)
                } else if self.constants.contains(&name) {
                    Expr::Const(Value::Sym(name))
                } else {
                    return Err(undeclared(name, off));
                }
            }
            Raw::Next(name, off) => match self.vars.get(&name) {
                Some(i) => Expr::Next(*i),
                None => return Err(undeclared(name, off)),
            },
            Raw::Not(a) => Expr::Not(Box::new(self.resolve(*a)?)),
            Raw::Neg(a) => Expr::Neg(Box::new(self.resolve(*a)?)),
            Raw::Bin(op, a, b) => Expr::bin(op, self.resolve(*a)?, self.resolve(*b)?),
            Raw::In(a, set) => Expr::In(
                Box::new(self.resolve(*a)?),
                set.into_iter()
                    .map(|x| self.resolve(x))
                    .collect::<Result<_, _>>()?,
            ),
            Raw::Case(arms) => Expr::Case(
                arms.into_iter()
                    .map(|(g, v)| Ok((self.resolve(g)?, self.resolve(v)?)))
                    .collect::<Result<_, ModelError>>()?,
            ),
        })
    }
}

/// Parses and validates a model; see the module documentation for the format.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let Lexed { toks } = lex(text)?;
    let mut p = Parser { text, toks, pos: 0 };
    let mut vars: Vec<(String, usize, Domain)> = Vec::new();
    let mut defines: Vec<(String, usize, Raw)> = Vec::new();
    let mut init = Vec::new();
    let mut trans = Vec::new();
    let mut saw_var = false;
    while *p.peek() != Tok::Eof {
        let section = match p.peek().clone() {
            Tok::Ident(s) if SECTIONS.contains(&s.as_str()) => s,
            _ => return p.fail("a section keyword (VAR, DEFINE, INIT, TRANS)"),
        };
        p.bump();
        match section.as_str() {
            "MODULE" => {
                let (name, off) = p.ident()?;
                if name != "main" {
                    return Err(syntax(text, off, "only `MODULE main` is supported"));
                }
            }
            "VAR" => {
                saw_var = true;
                while !p.at_section() {
                    let (name, off) = p.ident()?;
                    p.expect_punct(":")?;
                    let d = p.domain()?;
                    p.expect_punct(";")?;
                    vars.push((name, off, d));
                }
            }
            "DEFINE" => {
                while !p.at_section() {
                    let (name, off) = p.ident()?;
                    p.expect_punct(":=")?;
                    let body = p.expr()?;
                    p.expect_punct(";")?;
                    defines.push((name, off, body));
                }
            }
            "INIT" => {
                init.push(p.expr()?);
                if p.is_punct(";") {
                    p.bump();
                }
            }
            "TRANS" => trans.push(p.trans_body()?),
            // specifications are not part of the model
            _ => {
                while !p.at_section() {
                    p.bump();
                }
            }
        }
        if !p.at_section() {
            return p.fail("a section keyword or end of input");
        }
    }
    if !saw_var || vars.is_empty() {
        return Err(ModelError::NoVariables);
    }

    let mut names = BTreeSet::new();
    for name in vars
        .iter()
        .map(|v| &v.0)
        .chain(defines.iter().map(|d| &d.0))
    {
        if !names.insert(name.clone()) {
            return Err(ModelError::Duplicate(name.clone()));
        }
    }
    let constants: BTreeSet<String> = vars
        .iter()
        .filter_map(|(_, _, d)| match d {
            Domain::Enum(syms) => Some(syms.iter().cloned()),
            _ => None,
        })
        .flatten()
        .collect();
    for (name, off) in vars
        .iter()
        .map(|v| (&v.0, v.1))
        .chain(defines.iter().map(|d| (&d.0, d.1)))
    {
        if constants.contains(name) {
            return Err(syntax(
                text,
                off,
                format!("`{name}` is both a declared name and an enum constant"),
            ));
        }
    }
    let resolver = Resolver {
        text,
        vars: vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.0.clone(), i))
            .collect(),
        defines: defines
            .iter()
            .enumerate()
            .map(|(i, d)| (d.0.clone(), i))
            .collect(),
        constants,
    };
    let defines = defines
        .into_iter()
        .map(|(name, _, body)| {
            Ok(Define {
                name,
                body: resolver.resolve(body)?,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let init = init
        .into_iter()
        .map(|e| resolver.resolve(e))
        .collect::<Result<Vec<_>, _>>()?;
    let trans = trans
        .into_iter()
        .map(|e| resolver.resolve(e))
        .collect::<Result<Vec<_>, _>>()?;
    let vars = vars
        .into_iter()
        .map(|(name, _, domain)| VarDecl { name, domain })
        .collect();
    Model::new(vars, defines, init, trans)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_STATE: &str = "
        VAR s : {A, B};
        DEFINE a := s = A;
        INIT s = A
        TRANS next(s) != s
    ";

    #[test]
    fn parses_small_model() {
        let m = parse_model(TWO_STATE).unwrap();
        assert_eq!(m.graph().len(), 2);
        assert_eq!(m.atoms(), ["a"]);
        assert_eq!(m.graph().successors, vec![vec![1], vec![0]]);
        assert!(m.graph().labels[0].contains("a"));
    }

    #[test]
    fn guarded_rules_are_alternatives() {
        let m = parse_model(
            "VAR s : {A, B, C};
             INIT s = A
             TRANS
               s = A : next(s) = B;
               s = A : next(s) = C;
               default : next(s) = A;",
        )
        .unwrap();
        assert_eq!(m.graph().successors, vec![vec![1, 2], vec![0], vec![0]]);
    }

    #[test]
    fn deadlock_is_reported_with_witness() {
        let err = parse_model("VAR s : {A, B}; INIT s = A TRANS s = A : next(s) = B;").unwrap_err();
        assert_eq!(err, ModelError::Deadlock("s = B".into()));
    }

    #[test]
    fn empty_var_section_is_an_error() {
        assert_eq!(
            parse_model("VAR INIT TRUE").unwrap_err(),
            ModelError::NoVariables
        );
        assert_eq!(parse_model("").unwrap_err(), ModelError::NoVariables);
    }

    #[test]
    fn undeclared_names_are_located() {
        let err = parse_model("VAR s : {A, B};\nINIT t = A").unwrap_err();
        assert_eq!(
            err,
            ModelError::Undeclared {
                name: "t".into(),
                line: 2,
                column: 6
            }
        );
    }

    #[test]
    fn type_errors() {
        assert!(matches!(
            parse_model("VAR s : {A}; INIT s"),
            Err(ModelError::Type { .. })
        ));
        assert!(matches!(
            parse_model("VAR s : {A}; DEFINE d := next(s) = A;"),
            Err(ModelError::Type { .. })
        ));
        assert!(matches!(
            parse_model("VAR s : 0..3; INIT s = A"),
            Err(ModelError::Undeclared { .. })
        ));
        assert!(matches!(
            parse_model("VAR s : boolean; DEFINE x := y; y := x;"),
            Err(ModelError::CyclicDefine(_))
        ));
    }

    #[test]
    fn integer_ranges_and_case() {
        let m = parse_model(
            "VAR n : 0..3;
             INIT n = 0
             TRANS next(n) = case n < 3 : n + 1; TRUE : 0; esac",
        )
        .unwrap();
        assert_eq!(
            m.graph().successors,
            vec![vec![1], vec![2], vec![3], vec![0]]
        );
    }

    #[test]
    fn printed_model_parses_back() {
        let src = "VAR s : {A, B}; n : 0..2; f : boolean;
                   DEFINE a := s = A & !(n = 2); b := !f -> a <-> f;
                   INIT s = A & n = 0
                   TRANS
                     s = A & n < 2 : next(s) = A & next(n) = n + 1 & next(f) in {TRUE, FALSE};
                     default : next(s) = B & next(n) = 0 - (0 - n);";
        let m = parse_model(src).unwrap();
        let again = parse_model(&m.to_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn enum_constant_clash() {
        assert!(parse_model("VAR s : {a, b}; DEFINE a := s = b;").is_err());
    }
}
