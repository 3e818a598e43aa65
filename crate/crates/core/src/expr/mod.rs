//! Symbolic coefficient functions over a chart.
//!
//! Expressions are kept in a canonical form at construction time: sums and
//! products are flattened, like terms collected, numeric factors folded into
//! exact rational coefficients, and products of sums expanded. Sums only
//! survive as factor bases when raised to a negative power, and are then
//! scaled so that their leading coefficient is one. Two polynomials in the
//! coordinates and parameters are therefore equal iff their expressions are
//! structurally equal.

mod diff;
mod display;
mod eval;
mod parse;
mod zero;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::scalar::{Coefficient, Differentiable, Rational};

pub use display::ExprDisplay;
pub use eval::{DomainErrorKind, EvalError};
pub use parse::{parse_expr, parse_with, ParseError, ParseErrorKind};
pub use zero::{SampleDomain, ZeroVerdict, ZERO_TEST_POINTS, ZERO_TEST_TOLERANCE};

/// Elementary functions available in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Node {
    Num(Rational),
    Coord(usize),
    Param(Arc<str>),
    Func(Func, Expr),
    /// `coeff * prod base^exp`. Bases are sorted and distinct, exponents
    /// nonzero, sum bases only appear with negative exponents.
    Mul(Rational, Vec<(Expr, i32)>),
    /// `constant + sum coeff * monomial`. Monomials are sorted, distinct and
    /// carry unit coefficient themselves.
    Add(Rational, Vec<(Expr, Rational)>),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    /// Bit `i` set iff coordinate `i` occurs (all bits set for i >= 64).
    coord_mask: u64,
}

/// An immutable, canonically normalised expression tree.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.node == other.0.node
    }
}

impl Eq for Expr {}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.node.cmp(&other.0.node)
    }
}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.node.hash(state)
    }
}

fn coord_bit(i: usize) -> u64 {
    if i < 64 {
        1u64 << i
    } else {
        u64::MAX
    }
}

impl Expr {
    fn from_node(node: Node) -> Expr {
        let coord_mask = match &node {
            Node::Num(_) | Node::Param(_) => 0,
            Node::Coord(i) => coord_bit(*i),
            Node::Func(_, arg) => arg.0.coord_mask,
            Node::Mul(_, fs) => fs.iter().fold(0, |m, (b, _)| m | b.0.coord_mask),
            Node::Add(_, ts) => ts.iter().fold(0, |m, (t, _)| m | t.0.coord_mask),
        };
        Expr(Arc::new(Inner { node, coord_mask }))
    }

    pub(crate) fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn num(q: Rational) -> Expr {
        Expr::from_node(Node::Num(q))
    }

    pub fn int(k: i64) -> Expr {
        Expr::num(Rational::from_integer(k.into()))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::num(Rational::new(n.into(), d.into()))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn coord(i: usize) -> Expr {
        Expr::from_node(Node::Coord(i))
    }

    pub fn param(name: &str) -> Expr {
        Expr::from_node(Node::Param(Arc::from(name)))
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        if let Node::Num(q) = arg.node() {
            if q.is_zero() {
                match f {
                    Func::Sin | Func::Tan | Func::Sqrt => return Expr::zero(),
                    Func::Cos | Func::Exp => return Expr::one(),
                    Func::Ln => {}
                }
            }
            if q.is_one() && f == Func::Ln {
                return Expr::zero();
            }
            if f == Func::Sqrt && !q.is_negative() {
                let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
                if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                    return Expr::num(Rational::new(n, d));
                }
            }
        }
        Expr::from_node(Node::Func(f, arg))
    }

    pub fn sin(self) -> Expr {
        Expr::apply(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::apply(Func::Cos, self)
    }

    pub fn tan(self) -> Expr {
        Expr::apply(Func::Tan, self)
    }

    pub fn exp(self) -> Expr {
        Expr::apply(Func::Exp, self)
    }

    pub fn ln(self) -> Expr {
        Expr::apply(Func::Ln, self)
    }

    pub fn sqrt(self) -> Expr {
        Expr::apply(Func::Sqrt, self)
    }

    /// Canonical sum of `items`.
    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut constant = Rational::zero();
        let mut terms: BTreeMap<Expr, Rational> = BTreeMap::new();
        let mut add_term = |mono: Expr, k: &Rational| {
            let slot = terms.entry(mono).or_insert_with(Rational::zero);
            *slot += k;
        };
        for e in items {
            match e.node() {
                Node::Num(q) => constant += q,
                Node::Add(c, ts) => {
                    constant += c;
                    for (m, k) in ts {
                        add_term(m.clone(), k);
                    }
                }
                Node::Mul(c, fs) => add_term(monomial_of(fs), c),
                _ => add_term(e.clone(), &Rational::one()),
            }
        }
        build_add(constant, terms)
    }

    /// Canonical product of `items`.
    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut acc = ProductAcc::default();
        for e in items {
            acc.push(&e, 1);
        }
        acc.finish()
    }

    /// `self^k` for an integer exponent.
    pub fn pow(&self, k: i32) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        let mut acc = ProductAcc::default();
        acc.push(self, k);
        acc.finish()
    }

    pub fn scale(&self, q: &Rational) -> Expr {
        if q.is_zero() {
            return Expr::zero();
        }
        if q.is_one() {
            return self.clone();
        }
        Expr::product([Expr::num(q.clone()), self.clone()])
    }

    pub fn recip(&self) -> Expr {
        self.pow(-1)
    }

    /// Rebuilds the tree bottom-up through the canonical constructors.
    ///
    /// Expressions are normalised eagerly, so this is idempotent; it exists
    /// for trees assembled from foreign parts and as an explicit entry point.
    pub fn simplify(&self) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Coord(_) | Node::Param(_) => self.clone(),
            Node::Func(f, arg) => Expr::apply(*f, arg.simplify()),
            Node::Mul(c, fs) => {
                let mut acc = ProductAcc::default();
                acc.push(&Expr::num(c.clone()), 1);
                for (b, e) in fs {
                    acc.push(&b.simplify(), *e);
                }
                acc.finish()
            }
            Node::Add(c, ts) => Expr::sum(
                std::iter::once(Expr::num(c.clone()))
                    .chain(ts.iter().map(|(m, k)| m.simplify().scale(k))),
            ),
        }
    }

    /// Sound but incomplete zero test: `true` only for the literal zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Num(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Num(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.0.coord_mask == 0
    }

    /// Whether coordinate `i` may occur in the expression.
    pub fn depends_on(&self, i: usize) -> bool {
        self.0.coord_mask & coord_bit(i) != 0
    }

    /// Polynomial in coordinates and parameters: no functions, no negative powers.
    pub fn is_polynomial(&self) -> bool {
        match self.node() {
            Node::Num(_) | Node::Coord(_) | Node::Param(_) => true,
            Node::Func(..) => false,
            Node::Mul(_, fs) => fs.iter().all(|(b, e)| *e > 0 && b.is_polynomial()),
            Node::Add(_, ts) => ts.iter().all(|(m, _)| m.is_polynomial()),
        }
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.node() {
            Node::Num(_) | Node::Param(_) => None,
            Node::Coord(i) => Some(*i),
            Node::Func(_, a) => a.max_coord(),
            Node::Mul(_, fs) => fs.iter().filter_map(|(b, _)| b.max_coord()).max(),
            Node::Add(_, ts) => ts.iter().filter_map(|(m, _)| m.max_coord()).max(),
        }
    }

    /// Names of all parameters referenced.
    pub fn params(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut std::collections::BTreeSet<String>) {
            match e.node() {
                Node::Num(_) | Node::Coord(_) => {}
                Node::Param(p) => {
                    out.insert(p.to_string());
                }
                Node::Func(_, a) => walk(a, out),
                Node::Mul(_, fs) => fs.iter().for_each(|(b, _)| walk(b, out)),
                Node::Add(_, ts) => ts.iter().for_each(|(m, _)| walk(m, out)),
            }
        }
        let mut out = std::collections::BTreeSet::new();
        walk(self, &mut out);
        out.into_iter().collect()
    }

    /// Replaces coordinate `i` by `images[i]` throughout.
    pub fn substitute(&self, images: &[Expr]) -> Expr {
        if self.is_constant() {
            return self.clone();
        }
        match self.node() {
            Node::Num(_) | Node::Param(_) => self.clone(),
            Node::Coord(i) => images[*i].clone(),
            Node::Func(f, a) => Expr::apply(*f, a.substitute(images)),
            Node::Mul(c, fs) => {
                let mut acc = ProductAcc::default();
                acc.push(&Expr::num(c.clone()), 1);
                for (b, e) in fs {
                    acc.push(&b.substitute(images), *e);
                }
                acc.finish()
            }
            Node::Add(c, ts) => Expr::sum(
                std::iter::once(Expr::num(c.clone()))
                    .chain(ts.iter().map(|(m, k)| m.substitute(images).scale(k))),
            ),
        }
    }

    /// Replaces parameters by exact values where provided.
    pub fn bind_params(&self, values: &BTreeMap<String, Rational>) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Coord(_) => self.clone(),
            Node::Param(p) => values
                .get(p.as_ref())
                .map(|q| Expr::num(q.clone()))
                .unwrap_or_else(|| self.clone()),
            Node::Func(f, a) => Expr::apply(*f, a.bind_params(values)),
            Node::Mul(c, fs) => {
                let mut acc = ProductAcc::default();
                acc.push(&Expr::num(c.clone()), 1);
                for (b, e) in fs {
                    acc.push(&b.bind_params(values), *e);
                }
                acc.finish()
            }
            Node::Add(c, ts) => Expr::sum(
                std::iter::once(Expr::num(c.clone()))
                    .chain(ts.iter().map(|(m, k)| m.bind_params(values).scale(k))),
            ),
        }
    }

    /// Number of nodes in the tree (shared subtrees counted repeatedly).
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Num(_) | Node::Coord(_) | Node::Param(_) => 0,
            Node::Func(_, a) => a.size(),
            Node::Mul(_, fs) => fs.iter().map(|(b, _)| b.size()).sum(),
            Node::Add(_, ts) => ts.iter().map(|(m, _)| m.size()).sum(),
        }
    }
}

fn monomial_of(fs: &[(Expr, i32)]) -> Expr {
    if fs.len() == 1 && fs[0].1 == 1 {
        fs[0].0.clone()
    } else {
        Expr::from_node(Node::Mul(Rational::one(), fs.to_vec()))
    }
}

/// `k * mono` where `mono` has unit coefficient.
fn from_term(k: Rational, mono: Expr) -> Expr {
    if k.is_zero() {
        return Expr::zero();
    }
    if k.is_one() {
        return mono;
    }
    match mono.node() {
        Node::Mul(c, fs) if c.is_one() => Expr::from_node(Node::Mul(k, fs.clone())),
        _ => Expr::from_node(Node::Mul(k, vec![(mono, 1)])),
    }
}

fn build_add(constant: Rational, terms: BTreeMap<Expr, Rational>) -> Expr {
    let mut ts: Vec<(Expr, Rational)> = terms.into_iter().filter(|(_, k)| !k.is_zero()).collect();
    match (ts.len(), constant.is_zero()) {
        (0, _) => Expr::num(constant),
        (1, true) => {
            let (m, k) = ts.pop().expect("one term");
            from_term(k, m)
        }
        _ => Expr::from_node(Node::Add(constant, ts)),
    }
}

fn rational_pow(q: &Rational, k: i32) -> Rational {
    let base = if k < 0 { q.recip() } else { q.clone() };
    let mut out = Rational::one();
    for _ in 0..k.unsigned_abs() {
        out *= &base;
    }
    out
}

/// Splits a sum into `lead * normalised`, where the normalised sum has a
/// leading coefficient (constant, else first term) of one.
fn normalise_sum(c: &Rational, ts: &[(Expr, Rational)]) -> (Rational, Expr) {
    let lead = if !c.is_zero() {
        c.clone()
    } else {
        ts[0].1.clone()
    };
    if lead.is_one() {
        return (lead, Expr::from_node(Node::Add(c.clone(), ts.to_vec())));
    }
    let inv = lead.recip();
    let node = Node::Add(
        c * &inv,
        ts.iter().map(|(m, k)| (m.clone(), k * &inv)).collect(),
    );
    (lead, Expr::from_node(node))
}

#[derive(Default)]
struct ProductAcc {
    coeff: Option<Rational>,
    is_zero: bool,
    factors: BTreeMap<Expr, i32>,
}

impl ProductAcc {
    fn mul_coeff(&mut self, q: Rational) {
        self.coeff = Some(match self.coeff.take() {
            Some(c) => c * q,
            None => q,
        });
    }

    fn push_base(&mut self, base: &Expr, k: i32) {
        *self.factors.entry(base.clone()).or_insert(0) += k;
    }

    fn push(&mut self, e: &Expr, k: i32) {
        match e.node() {
            Node::Num(q) => {
                if q.is_zero() {
                    if k > 0 {
                        self.is_zero = true;
                    } else {
                        self.push_base(e, k);
                    }
                } else {
                    self.mul_coeff(rational_pow(q, k));
                }
            }
            Node::Mul(c, fs) => {
                self.mul_coeff(rational_pow(c, k));
                for (b, ex) in fs {
                    self.push_base(b, ex * k);
                }
            }
            Node::Add(c, ts) => {
                let (lead, base) = normalise_sum(c, ts);
                self.mul_coeff(rational_pow(&lead, k));
                self.push_base(&base, k);
            }
            _ => self.push_base(e, k),
        }
    }

    fn finish(self) -> Expr {
        if self.is_zero {
            return Expr::zero();
        }
        let coeff = self.coeff.unwrap_or_else(Rational::one);
        if coeff.is_zero() {
            return Expr::zero();
        }
        let mut keep = Vec::new();
        let mut expand = Vec::new();
        for (b, k) in self.factors {
            if k == 0 {
                continue;
            }
            if k > 0 && matches!(b.node(), Node::Add(..)) {
                expand.push((b, k));
            } else {
                keep.push((b, k));
            }
        }
        let head = build_mul(coeff, keep);
        if expand.is_empty() {
            return head;
        }
        let mut terms = vec![head];
        for (b, k) in expand {
            let parts = sum_parts(&b);
            for _ in 0..k {
                let mut next = Vec::with_capacity(terms.len() * parts.len());
                for t in &terms {
                    for p in &parts {
                        next.push(Expr::product([t.clone(), p.clone()]));
                    }
                }
                terms = vec![Expr::sum(next)];
                if terms[0].is_zero() {
                    return Expr::zero();
                }
                if let Node::Add(..) = terms[0].node() {
                    terms = sum_parts(&terms[0]);
                }
            }
        }
        Expr::sum(terms)
    }
}

fn sum_parts(e: &Expr) -> Vec<Expr> {
    match e.node() {
        Node::Add(c, ts) => {
            let mut out = Vec::with_capacity(ts.len() + 1);
            if !c.is_zero() {
                out.push(Expr::num(c.clone()));
            }
            out.extend(ts.iter().map(|(m, k)| from_term(k.clone(), m.clone())));
            out
        }
        _ => vec![e.clone()],
    }
}

fn build_mul(coeff: Rational, factors: Vec<(Expr, i32)>) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    if factors.is_empty() {
        return Expr::num(coeff);
    }
    if coeff.is_one() && factors.len() == 1 && factors[0].1 == 1 {
        return factors.into_iter().next().expect("one factor").0;
    }
    Expr::from_node(Node::Mul(coeff, factors))
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }

    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}

impl One for Expr {
    fn one() -> Self {
        Expr::one()
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        Expr::sum([self, rhs])
    }
}

impl ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        self.clone() + rhs.clone()
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&-Rational::one())
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self.clone() - rhs.clone()
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return rhs;
        }
        if rhs.is_one() {
            return self;
        }
        Expr::product([self, rhs])
    }
}

impl ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        self.clone() * rhs.clone()
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Expr) -> Expr {
        self * rhs.recip()
    }
}

impl ops::Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        self.clone() / rhs.clone()
    }
}

impl From<i64> for Expr {
    fn from(k: i64) -> Self {
        Expr::int(k)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::num(q)
    }
}

impl Coefficient for Expr {
    fn from_integer(k: i64) -> Self {
        Expr::int(k)
    }

    fn from_rational(q: &Rational) -> Self {
        Expr::num(q.clone())
    }

    fn sum_all(items: Vec<Self>) -> Self {
        Expr::sum(items)
    }
}

impl Differentiable for Expr {
    fn partial(&self, coord: usize) -> Self {
        self.diff(coord)
    }
}
