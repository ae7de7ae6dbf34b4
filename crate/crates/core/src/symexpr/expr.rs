use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::poly::{Monomial, Poly};
use super::ratfunc::RatFunc;
use crate::sampling::SampleBox;
use crate::scalar::{rational_to_f64, ExactPoint, Scalar};

/// Names accepted as function applications in the DSL.
pub const FUNCTION_NAMES: [&str; 3] = ["sin", "cos", "exp"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(BigRational),
    Coord(usize),
    Add(Expr, Expr),
    Mul(Expr, Expr),
    Neg(Expr),
    Div(Expr, Expr),
    IntPow(Expr, i64),
    Func(Func, Expr),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExprClass {
    RationalFunction,
    Transcendental,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("pole at evaluation point")]
    Pole,
    #[error("transcendental function has no exact value")]
    NotExact,
    #[error("point has dimension {got}, expression needs at least {needed}")]
    Dimension { needed: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZeroTestError {
    #[error("exact zero test requested on a transcendental expression")]
    ExactOnTranscendental,
    #[error("expression divides by the zero polynomial")]
    Singular,
    #[error("no pole-free sample point found after {0} attempts")]
    SamplingFailed(usize),
}

/// How "= 0" predicates are decided.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZeroPolicy {
    /// Canonical-form test; rational functions only.
    Exact,
    /// `|value| <= tol` at `count` seeded random points of the sampling box.
    Sampled { count: usize, seed: u64, tol: f64 },
}

impl Default for ZeroPolicy {
    fn default() -> Self {
        ZeroPolicy::Exact
    }
}

/// Result of evaluating at a rational point.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => rational_to_f64(q),
            Value::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Float(x) => *x == 0.0,
        }
    }
}

#[derive(Clone, Debug)]
enum Canon {
    Rational(RatFunc),
    Transcendental,
    Singular,
}

struct Inner {
    node: OnceLock<Node>,
    canon: OnceLock<Canon>,
}

/// Immutable, cheaply clonable scalar expression over chart coordinates.
///
/// Rational-function expressions carry a memoized canonical form; every
/// arithmetic operation on two such expressions works on the canonical forms
/// and yields a normalized result.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

impl Expr {
    fn from_node(node: Node) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(node);
        Expr(Arc::new(Inner {
            node: cell,
            canon: OnceLock::new(),
        }))
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        let canon = OnceLock::new();
        let _ = canon.set(Canon::Rational(r));
        Expr(Arc::new(Inner {
            node: OnceLock::new(),
            canon,
        }))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_ratfunc(RatFunc::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn coord(index: usize) -> Self {
        Self::from_ratfunc(RatFunc::var(index))
    }

    /// Raw syntax-tree constructors used by the parser; no simplification.
    pub fn raw(node: Node) -> Self {
        Self::from_node(node)
    }

    pub fn node(&self) -> &Node {
        self.0.node.get_or_init(|| match self.canon() {
            Canon::Rational(r) => ratfunc_to_node(r),
            _ => unreachable!("expressions without a tree always have a rational canon"),
        })
    }

    fn canon(&self) -> &Canon {
        self.0.canon.get_or_init(|| compute_canon(self.node()))
    }

    pub fn class(&self) -> ExprClass {
        match self.canon() {
            Canon::Transcendental => ExprClass::Transcendental,
            _ => ExprClass::RationalFunction,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.canon(), Canon::Rational(_))
    }

    /// Canonical rational function, when the expression is a well-defined
    /// rational function.
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match self.canon() {
            Canon::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.as_ratfunc().and_then(RatFunc::as_constant)
    }

    /// Zero as decided by the canonical form (transcendental expressions are
    /// only recognized when they are syntactically the constant zero).
    pub fn is_exactly_zero(&self) -> bool {
        match self.canon() {
            Canon::Rational(r) => r.is_zero(),
            _ => false,
        }
    }

    fn is_exactly_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Largest coordinate index appearing in the expression.
    pub fn max_coord(&self) -> Option<usize> {
        if let Canon::Rational(r) = self.canon() {
            return r.nvars().checked_sub(1);
        }
        match self.node() {
            Node::Const(_) => None,
            Node::Coord(i) => Some(*i),
            Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => a.max_coord().max(b.max_coord()),
            Node::Neg(a) | Node::IntPow(a, _) | Node::Func(_, a) => a.max_coord(),
        }
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr, ExprError> {
        match (self.canon(), other.canon()) {
            (Canon::Rational(a), Canon::Rational(b)) => a
                .div(b)
                .map(Expr::from_ratfunc)
                .map_err(|_| ExprError::DivisionByZero),
            (_, Canon::Singular) | (Canon::Singular, _) => Err(ExprError::DivisionByZero),
            _ => {
                if other.is_exactly_one() {
                    Ok(self.clone())
                } else if self.is_exactly_zero() {
                    Ok(Expr::zero())
                } else {
                    Ok(Expr::from_node(Node::Div(self.clone(), other.clone())))
                }
            }
        }
    }

    pub fn powi(&self, e: i64) -> Result<Expr, ExprError> {
        match self.canon() {
            Canon::Rational(r) => r
                .powi(e)
                .map(Expr::from_ratfunc)
                .map_err(|_| ExprError::DivisionByZero),
            Canon::Singular => Err(ExprError::DivisionByZero),
            Canon::Transcendental => Ok(match e {
                0 => Expr::one(),
                1 => self.clone(),
                _ => Expr::from_node(Node::IntPow(self.clone(), e)),
            }),
        }
    }

    pub fn apply(func: Func, arg: &Expr) -> Expr {
        if arg.is_exactly_zero() {
            return match func {
                Func::Sin => Expr::zero(),
                Func::Cos | Func::Exp => Expr::one(),
            };
        }
        Expr::from_node(Node::Func(func, arg.clone()))
    }

    pub fn sin(&self) -> Expr {
        Self::apply(Func::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        Self::apply(Func::Cos, self)
    }

    pub fn exp(&self) -> Expr {
        Self::apply(Func::Exp, self)
    }

    /// Partial derivative with respect to coordinate `coord`.
    pub fn differentiate(&self, coord: usize) -> Expr {
        if let Canon::Rational(r) = self.canon() {
            return Expr::from_ratfunc(r.derivative(coord));
        }
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Coord(i) => {
                if *i == coord {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(a, b) => a.differentiate(coord) + b.differentiate(coord),
            Node::Mul(a, b) => &a.differentiate(coord) * b + a * &b.differentiate(coord),
            Node::Neg(a) => -a.differentiate(coord),
            Node::Div(a, b) => {
                let num = &a.differentiate(coord) * b - a * &b.differentiate(coord);
                let den = b * b;
                div_unchecked(&num, &den)
            }
            Node::IntPow(b, e) => {
                let db = b.differentiate(coord);
                if db.is_exactly_zero() {
                    return Expr::zero();
                }
                let lowered = match *e - 1 {
                    0 => Expr::one(),
                    1 => b.clone(),
                    k => Expr::from_node(Node::IntPow(b.clone(), k)),
                };
                &(&Expr::int(*e) * &lowered) * &db
            }
            Node::Func(f, a) => {
                let da = a.differentiate(coord);
                if da.is_exactly_zero() {
                    return Expr::zero();
                }
                let outer = match f {
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Exp => self.clone(),
                };
                &outer * &da
            }
        }
    }

    /// Canonical form for rational functions; best-effort flattening
    /// otherwise.
    pub fn normalize(&self) -> Result<Expr, ExprError> {
        match self.canon() {
            Canon::Rational(r) => Ok(Expr::from_ratfunc(r.clone())),
            Canon::Singular => Err(ExprError::DivisionByZero),
            Canon::Transcendental => Ok(match self.node() {
                Node::Const(_) | Node::Coord(_) => self.clone(),
                Node::Add(a, b) => a.normalize()? + b.normalize()?,
                Node::Mul(a, b) => a.normalize()? * b.normalize()?,
                Node::Neg(a) => -a.normalize()?,
                Node::Div(a, b) => a.normalize()?.checked_div(&b.normalize()?)?,
                Node::IntPow(a, e) => a.normalize()?.powi(*e)?,
                Node::Func(f, a) => Expr::apply(*f, &a.normalize()?),
            }),
        }
    }

    /// Evaluates at a point in any scalar domain.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> Result<T, EvalError> {
        if let Some(m) = self.max_coord() {
            if m >= point.len() {
                return Err(EvalError::Dimension {
                    needed: m + 1,
                    got: point.len(),
                });
            }
        }
        if let Canon::Rational(r) = self.canon() {
            return r.eval(point).ok_or(EvalError::Pole);
        }
        self.eval_tree(point)
    }

    fn eval_tree<T: Scalar>(&self, point: &[T]) -> Result<T, EvalError> {
        Ok(match self.node() {
            Node::Const(c) => T::from_rational(c),
            Node::Coord(i) => point[*i].clone(),
            Node::Add(a, b) => a.eval_tree(point)? + b.eval_tree(point)?,
            Node::Mul(a, b) => a.eval_tree(point)? * b.eval_tree(point)?,
            Node::Neg(a) => -a.eval_tree(point)?,
            Node::Div(a, b) => {
                let d = b.eval_tree(point)?;
                if d.is_zero() {
                    return Err(EvalError::Pole);
                }
                a.eval_tree(point)? / d
            }
            Node::IntPow(a, e) => {
                let base = a.eval_tree(point)?;
                if *e < 0 && base.is_zero() {
                    return Err(EvalError::Pole);
                }
                let mut acc = T::one();
                for _ in 0..e.unsigned_abs() {
                    acc = acc * base.clone();
                }
                if *e < 0 {
                    T::one() / acc
                } else {
                    acc
                }
            }
            Node::Func(f, a) => {
                let x = a.eval_tree(point)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                }
                .ok_or(EvalError::NotExact)?
            }
        })
    }

    /// Exact value for rational functions, floating value otherwise.
    pub fn evaluate(&self, point: &ExactPoint) -> Result<Value, EvalError> {
        match self.canon() {
            Canon::Rational(_) => self.eval(point.coords()).map(Value::Exact),
            Canon::Singular => Err(EvalError::Pole),
            Canon::Transcendental => self.eval(point.to_float().coords()).map(Value::Float),
        }
    }

    pub fn is_zero(&self, policy: &ZeroPolicy) -> Result<bool, ZeroTestError> {
        match policy {
            ZeroPolicy::Exact => match self.canon() {
                Canon::Rational(r) => Ok(r.is_zero()),
                Canon::Transcendental => Err(ZeroTestError::ExactOnTranscendental),
                Canon::Singular => Err(ZeroTestError::Singular),
            },
            ZeroPolicy::Sampled { count, seed, tol } => {
                if let Canon::Singular = self.canon() {
                    return Err(ZeroTestError::Singular);
                }
                if self.is_exactly_zero() {
                    return Ok(true);
                }
                let dim = self.max_coord().map_or(1, |m| m + 1);
                let mut sampler = SampleBox::default().sampler(*seed);
                for _ in 0..*count {
                    let value = sampler.draw_where(dim, |p| self.evaluate(p).ok())?;
                    let v = value.to_f64();
                    if !(v.abs() <= *tol) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Renders in DSL syntax using the given coordinate names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayExpr { expr: self, names }
    }

    pub fn to_dsl(&self, names: &[String]) -> String {
        self.display(names).to_string()
    }
}

fn div_unchecked(a: &Expr, b: &Expr) -> Expr {
    a.checked_div(b)
        .unwrap_or_else(|_| Expr::from_node(Node::Div(a.clone(), b.clone())))
}

fn compute_canon(node: &Node) -> Canon {
    use Canon::*;
    fn both(a: &Expr, b: &Expr, f: impl FnOnce(&RatFunc, &RatFunc) -> Canon) -> Canon {
        match (a.canon(), b.canon()) {
            (Rational(x), Rational(y)) => f(x, y),
            (Singular, _) | (_, Singular) => Singular,
            _ => Transcendental,
        }
    }
    match node {
        Node::Const(c) => Rational(RatFunc::constant(c.clone())),
        Node::Coord(i) => Rational(RatFunc::var(*i)),
        Node::Add(a, b) => both(a, b, |x, y| Rational(x.add(y))),
        Node::Mul(a, b) => both(a, b, |x, y| Rational(x.mul(y))),
        Node::Div(a, b) => both(a, b, |x, y| x.div(y).map_or(Singular, Rational)),
        Node::Neg(a) => match a.canon() {
            Rational(x) => Rational(x.neg()),
            other => other.clone(),
        },
        Node::IntPow(a, e) => match a.canon() {
            Rational(x) => x.powi(*e).map_or(Singular, Rational),
            other => other.clone(),
        },
        Node::Func(_, a) => match a.canon() {
            Singular => Singular,
            _ => Transcendental,
        },
    }
}

fn ratfunc_to_node(r: &RatFunc) -> Node {
    if r.is_polynomial() {
        poly_to_node(r.numer())
    } else {
        Node::Div(
            Expr::from_node(poly_to_node(r.numer())),
            Expr::from_node(poly_to_node(r.denom())),
        )
    }
}

fn poly_to_node(p: &Poly) -> Node {
    let mut acc: Option<Expr> = None;
    for (m, c) in p.terms() {
        let negative = c.is_negative();
        let mag = c.abs();
        let term = term_expr(m, &mag);
        acc = Some(match acc {
            None if negative => Expr::from_node(Node::Neg(term)),
            None => term,
            Some(prev) if negative => {
                Expr::from_node(Node::Add(prev, Expr::from_node(Node::Neg(term))))
            }
            Some(prev) => Expr::from_node(Node::Add(prev, term)),
        });
    }
    match acc {
        None => Node::Const(BigRational::zero()),
        Some(e) => e.node().clone(),
    }
}

/// `mag * m` as a product tree with the coefficient first.
fn term_expr(m: &Monomial, mag: &BigRational) -> Expr {
    let mut factors: Vec<Expr> = Vec::new();
    if !mag.is_one() || m.is_one() {
        factors.push(Expr::from_node(Node::Const(mag.clone())));
    }
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(Expr::from_node(Node::Coord(i))),
            _ => factors.push(Expr::from_node(Node::IntPow(
                Expr::from_node(Node::Coord(i)),
                e as i64,
            ))),
        }
    }
    let mut it = factors.into_iter();
    let first = it.next().expect("at least one factor");
    it.fold(first, |acc, f| Expr::from_node(Node::Mul(acc, f)))
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.node() == other.node()
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_coord().unwrap_or(0))
            .map(|i| format!("x{i}"))
            .collect();
        let shown = self.to_dsl(&names);
        write!(f, "Expr({shown})")
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Self {
        Expr::constant(q)
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        if let (Some(a), Some(b)) = (self.as_ratfunc(), rhs.as_ratfunc()) {
            return Expr::from_ratfunc(a.add(b));
        }
        if self.is_exactly_zero() {
            return rhs.clone();
        }
        if rhs.is_exactly_zero() {
            return self.clone();
        }
        Expr::from_node(Node::Add(self.clone(), rhs.clone()))
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;

    fn sub(self, rhs: &Expr) -> Expr {
        if let (Some(a), Some(b)) = (self.as_ratfunc(), rhs.as_ratfunc()) {
            return Expr::from_ratfunc(a.sub(b));
        }
        if rhs.is_exactly_zero() {
            return self.clone();
        }
        if self == rhs {
            return Expr::zero();
        }
        self + &(-rhs)
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        if let (Some(a), Some(b)) = (self.as_ratfunc(), rhs.as_ratfunc()) {
            return Expr::from_ratfunc(a.mul(b));
        }
        if self.is_exactly_zero() || rhs.is_exactly_zero() {
            return Expr::zero();
        }
        if self.is_exactly_one() {
            return rhs.clone();
        }
        if rhs.is_exactly_one() {
            return self.clone();
        }
        Expr::from_node(Node::Mul(self.clone(), rhs.clone()))
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        if let Some(a) = self.as_ratfunc() {
            return Expr::from_ratfunc(a.neg());
        }
        if let Node::Neg(inner) = self.node() {
            return inner.clone();
        }
        Expr::from_node(Node::Neg(self.clone()))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, e| acc + e)
    }
}

// Printing precedences.
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_ATOM: u8 = 5;

struct DisplayExpr<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.expr, self.names).0)
    }
}

fn coord_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
}

fn wrap(s: (String, u8), min: u8) -> String {
    if s.1 >= min {
        s.0
    } else {
        format!("({})", s.0)
    }
}

fn render(e: &Expr, names: &[String]) -> (String, u8) {
    match e.node() {
        Node::Const(c) => {
            if c.is_integer() {
                if c.is_negative() {
                    (c.to_string(), P_NEG)
                } else {
                    (c.to_string(), P_ATOM)
                }
            } else {
                (format!("{}/{}", c.numer(), c.denom()), P_MUL)
            }
        }
        Node::Coord(i) => (coord_name(names, *i), P_ATOM),
        Node::Add(a, b) => {
            let left = wrap(render(a, names), P_ADD);
            match b.node() {
                Node::Neg(inner) => (
                    format!("{left} - {}", wrap(render(inner, names), P_MUL)),
                    P_ADD,
                ),
                _ => (format!("{left} + {}", wrap(render(b, names), P_MUL)), P_ADD),
            }
        }
        Node::Mul(a, b) => (
            format!(
                "{}*{}",
                wrap(render(a, names), P_MUL),
                wrap(render(b, names), P_NEG)
            ),
            P_MUL,
        ),
        Node::Div(a, b) => (
            format!(
                "{}/{}",
                wrap(render(a, names), P_MUL),
                wrap(render(b, names), P_NEG)
            ),
            P_MUL,
        ),
        Node::Neg(a) => {
            let inner = render(a, names);
            let prec = inner.1.min(P_NEG);
            (format!("-{}", wrap(inner, P_MUL)), prec)
        }
        Node::IntPow(a, k) => (
            format!("{}^{}", wrap(render(a, names), P_ATOM), k),
            P_ATOM - 1,
        ),
        Node::Func(func, a) => (format!("{}({})", func.name(), render(a, names).0), P_ATOM),
    }
}
