//! Dense univariate polynomials over `F_q` in the variable `T`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::ff::{FqElem, FqField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomials over different coefficient fields")]
    FieldMismatch,
    #[error("operation undefined for the zero polynomial")]
    ZeroInput,
    #[error("operation requires a non-constant polynomial")]
    ConstantInput,
    #[error("polynomial is not monic and irreducible")]
    NotIrreducible,
}

/// Polynomial with coefficients stored constant term first; the leading
/// coefficient is nonzero unless the polynomial is zero (empty vector).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FqField,
    coeffs: Vec<FqElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn new(field: &FqField, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FqField) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &FqField) -> Poly {
        Poly::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &FqField, c: FqElem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The variable `T`.
    pub fn t(field: &FqField) -> Poly {
        Poly::new(field, vec![FqElem::ZERO, FqElem::ONE])
    }

    /// `c * T^e`.
    pub fn monomial(field: &FqField, c: FqElem, e: usize) -> Poly {
        let mut coeffs = vec![FqElem::ZERO; e + 1];
        coeffs[e] = c;
        Poly::new(field, coeffs)
    }

    /// Builds a polynomial over a prime field from small integers,
    /// constant term first.
    pub fn from_ints(field: &FqField, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [FqElem::ONE]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FqElem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .field
            .inv(self.leading())
            .expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.p()) as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    fn check_field(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    /// Quotient and remainder with `deg(r) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let f = &self.field;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f
            .inv(divisor.leading())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        match self.div_rem(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Monic generator of the ideal `(self, other)`; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        (self * other).rem(modulus).expect("nonzero modulus")
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Poly::one(&self.field)
            .rem(modulus)
            .expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text: descending powers of `T` joined by ` + `.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

/// Canonical prime order: by degree, then coefficient vectors compared from
/// the constant term upward using [`FqField::order_key`].
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                let ord = self.field.order_key(*a).cmp(&other.field.order_key(*b));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = field.render(c);
            match (i, c == FqElem::ONE) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{coef}*T")?,
                (_, true) => write!(f, "T^{i}")?,
                (_, false) => write!(f, "{coef}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "field mismatch");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "field mismatch");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "field mismatch");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivRem,
    Gcd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyResult {
    Single(Poly),
    Pair(Poly, Poly),
}

/// Checked binary arithmetic that rejects mixed coefficient fields.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<PolyResult, PolyError> {
    a.check_field(b)?;
    Ok(match op {
        PolyOp::Add => PolyResult::Single(a + b),
        PolyOp::Sub => PolyResult::Single(a - b),
        PolyOp::Mul => PolyResult::Single(a * b),
        PolyOp::DivRem => {
            let (q, r) = a.div_rem(b)?;
            PolyResult::Pair(q, r)
        }
        PolyOp::Gcd => PolyResult::Single(a.gcd(b)?),
    })
}
