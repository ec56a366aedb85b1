//! Laurent polynomials with fractional exponents, and the rings they live in.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use blockforge_core::Rational;
use serde::{Serialize, Serializer};

use crate::error::{RealizeError, Result};

/// Exponent numerators over the polynomial's common denominator.
pub type Exponent = Vec<i64>;

/// A finite rational combination of monomials `t^(e/denom)`.
///
/// Arithmetic through the operators is unrestricted; [`Ring`] applies the
/// restrictions of a particular coordinate ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracLaurentPoly {
    vars: usize,
    denom: i64,
    terms: BTreeMap<Exponent, Rational>,
}

impl FracLaurentPoly {
    pub fn zero(vars: usize, denom: i64) -> Self {
        assert!(denom >= 1, "denominator must be positive");
        FracLaurentPoly { vars, denom, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize, denom: i64) -> Self {
        Self::monomial(vars, denom, vec![0; vars], Rational::one())
    }

    /// `coeff * t^(exp/denom)`.
    pub fn monomial(vars: usize, denom: i64, exp: Exponent, coeff: Rational) -> Self {
        assert_eq!(exp.len(), vars, "exponent length");
        let mut out = Self::zero(vars, denom);
        out.add_term(exp, coeff);
        out
    }

    /// The variable `t_q` (0-based).
    pub fn var(vars: usize, denom: i64, q: usize) -> Self {
        let mut exp = vec![0; vars];
        exp[q] = denom;
        Self::monomial(vars, denom, exp, Rational::one())
    }

    /// A monomial with integer exponents.
    pub fn power(vars: usize, denom: i64, exps: &[i64]) -> Self {
        Self::monomial(vars, denom, exps.iter().map(|e| e * denom).collect(), Rational::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Drops the coefficient of one monomial.
    pub fn without(&self, exp: &[i64]) -> Self {
        let mut out = self.clone();
        out.terms.remove(exp);
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars, self.denom);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        FracLaurentPoly { vars: self.vars, denom: self.denom, terms }
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.vars == other.vars && self.denom == other.denom,
            "polynomial shapes differ: ({}, {}) vs ({}, {})",
            self.vars,
            self.denom,
            other.vars,
            other.denom
        );
    }

    fn exponent_of(&self, e: &Exponent, q: usize) -> Rational {
        Rational::new(e[q], self.denom)
    }

    /// Formal partial derivative in `t_q`.
    pub fn partial(&self, q: usize) -> Self {
        let mut out = Self::zero(self.vars, self.denom);
        for (e, c) in &self.terms {
            if e[q] == 0 {
                continue;
            }
            let mut lowered = e.clone();
            lowered[q] -= self.denom;
            out.add_term(lowered, c * &self.exponent_of(e, q));
        }
        out
    }

    /// `t_q ∂f/∂t_q`.
    pub fn euler(&self, q: usize) -> Self {
        let mut out = Self::zero(self.vars, self.denom);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * &self.exponent_of(e, q));
        }
        out
    }

    fn add_impl(&self, other: &Self, sign: &Rational) -> Self {
        self.same_shape(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c * sign);
        }
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = Self::zero(self.vars, self.denom);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(s, t)| s + t).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    /// Human-readable form of one exponent vector, e.g. `t1^(1/2)*t2^-1`.
    pub fn monomial_string(&self, exp: &[i64]) -> String {
        let parts: Vec<String> = exp
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(q, e)| {
                let x = Rational::new(*e, self.denom);
                if x.is_one() {
                    format!("t{}", q + 1)
                } else if x.is_integer() {
                    format!("t{}^{}", q + 1, x)
                } else {
                    format!("t{}^({})", q + 1, x)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for FracLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = self.monomial_string(e);
            if mono == "1" {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FracLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FracLaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

macro_rules! poly_binop {
    ($Trait:ident, $method:ident, $body:expr) => {
        impl $Trait<&FracLaurentPoly> for &FracLaurentPoly {
            type Output = FracLaurentPoly;
            fn $method(self, rhs: &FracLaurentPoly) -> FracLaurentPoly {
                $body(self, rhs)
            }
        }
        impl $Trait<FracLaurentPoly> for FracLaurentPoly {
            type Output = FracLaurentPoly;
            fn $method(self, rhs: FracLaurentPoly) -> FracLaurentPoly {
                $body(&self, &rhs)
            }
        }
        impl $Trait<&FracLaurentPoly> for FracLaurentPoly {
            type Output = FracLaurentPoly;
            fn $method(self, rhs: &FracLaurentPoly) -> FracLaurentPoly {
                $body(&self, rhs)
            }
        }
        impl $Trait<FracLaurentPoly> for &FracLaurentPoly {
            type Output = FracLaurentPoly;
            fn $method(self, rhs: FracLaurentPoly) -> FracLaurentPoly {
                $body(self, &rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a: &FracLaurentPoly, b: &FracLaurentPoly| a.add_impl(b, &Rational::one()));
poly_binop!(Sub, sub, |a: &FracLaurentPoly, b: &FracLaurentPoly| a.add_impl(b, &-Rational::one()));
poly_binop!(Mul, mul, |a: &FracLaurentPoly, b: &FracLaurentPoly| a.mul_impl(b));

impl Mul<Rational> for &FracLaurentPoly {
    type Output = FracLaurentPoly;
    fn mul(self, c: Rational) -> FracLaurentPoly {
        self.scale(&c)
    }
}

impl Mul<Rational> for FracLaurentPoly {
    type Output = FracLaurentPoly;
    fn mul(self, c: Rational) -> FracLaurentPoly {
        self.scale(&c)
    }
}

impl Neg for &FracLaurentPoly {
    type Output = FracLaurentPoly;
    fn neg(self) -> FracLaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for FracLaurentPoly {
    type Output = FracLaurentPoly;
    fn neg(self) -> FracLaurentPoly {
        self.scale(&-Rational::one())
    }
}

/// A coordinate ring: which variables may carry negative exponents, the
/// common denominator, and monomials removed from the space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ring {
    pub vars: usize,
    pub denom: i64,
    /// `laurent[q]` allows negative powers of `t_q`.
    pub laurent: Vec<bool>,
    /// Exponent numerators of monomials that are not part of the space.
    pub excluded: Vec<Exponent>,
}

impl Ring {
    pub fn new(laurent: Vec<bool>, denom: i64) -> Self {
        Ring { vars: laurent.len(), denom, laurent, excluded: Vec::new() }
    }

    pub fn zero(&self) -> FracLaurentPoly {
        FracLaurentPoly::zero(self.vars, self.denom)
    }

    pub fn one(&self) -> FracLaurentPoly {
        FracLaurentPoly::one(self.vars, self.denom)
    }

    /// `t_q`, 0-based.
    pub fn var(&self, q: usize) -> FracLaurentPoly {
        FracLaurentPoly::var(self.vars, self.denom, q)
    }

    /// A monomial with integer exponents.
    pub fn power(&self, exps: &[i64]) -> FracLaurentPoly {
        FracLaurentPoly::power(self.vars, self.denom, exps)
    }

    /// Checks shape, sign restrictions and excluded monomials.
    pub fn check(&self, f: &FracLaurentPoly) -> Result<()> {
        if f.vars != self.vars || f.denom != self.denom {
            return Err(RealizeError::Shape { expected: (self.vars, self.denom), found: (f.vars, f.denom) });
        }
        for e in f.terms.keys() {
            if let Some(q) = (0..self.vars).find(|&q| e[q] < 0 && !self.laurent[q]) {
                return Err(RealizeError::Restriction {
                    variable: format!("t{}", q + 1),
                    monomial: f.monomial_string(e),
                });
            }
            if self.excluded.contains(e) {
                return Err(RealizeError::Excluded { monomial: f.monomial_string(e) });
            }
        }
        Ok(())
    }

    /// Product inside the ring.
    pub fn mul(&self, f: &FracLaurentPoly, g: &FracLaurentPoly) -> Result<FracLaurentPoly> {
        self.check(f)?;
        self.check(g)?;
        let out = f * g;
        self.check(&out)?;
        Ok(out)
    }

    /// Partial derivative inside the ring.
    pub fn partial(&self, f: &FracLaurentPoly, q: usize) -> Result<FracLaurentPoly> {
        self.check(f)?;
        let out = f.partial(q);
        self.check(&out)?;
        Ok(out)
    }
}
