//! Arithmetic in the finite field `F_q`, `q = p^f`.
//!
//! A field is built deterministically from `(p, f)`: the defining modulus is
//! the smallest monic irreducible of degree `f` over `F_p` and the generator
//! `g` is the smallest element of multiplicative order `q - 1`, where
//! "smallest" compares coefficient vectors lexicographically starting from
//! the constant term. Elements are stored as the integer `sum c_i p^i` of
//! their power-basis coordinates. Multiplication, inversion and discrete
//! logarithms go through exp/log tables, which is why `q` is bounded.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default upper bound on `q`.
pub const DEFAULT_MAX_Q: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{f} exceeds the configured bound {bound}")]
    TooLarge { p: u64, f: u32, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("element does not belong to F_{q}")]
    FieldMismatch { q: u64 },
    #[error("modulus override is not a monic irreducible of degree {0}")]
    BadModulus(u32),
    #[error("generator override does not have order q - 1")]
    BadGenerator,
}

/// An element of `F_q`, encoded as `sum c_i p^i` over its power-basis
/// coordinates `c_0, ..., c_{f-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw integer encoding.
    pub fn encoding(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

struct FieldData {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus, constant term first, length `f + 1`.
    modulus: Vec<u32>,
    gen: FqElem,
    /// `exp[k] = g^k` for `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[x] = k` with `g^k = x`; `log[0]` is unused.
    log: Vec<u32>,
}

/// A finite field `F_{p^f}` with a fixed modulus and generator. Cheap to clone.
#[derive(Clone)]
pub struct FqField(Arc<FieldData>);

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqField")
            .field("p", &self.0.p)
            .field("f", &self.0.f)
            .field("modulus", &self.0.modulus)
            .field("gen", &self.0.gen)
            .finish()
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.f == other.0.f
                && self.0.modulus == other.0.modulus
                && self.0.gen == other.0.gen)
    }
}

impl Eq for FqField {}

/// Optional overrides for [`FqField::build_with`].
#[derive(Debug, Clone, Default)]
pub struct FieldOptions {
    pub max_q: Option<u64>,
    /// Monic modulus over `F_p`, constant term first.
    pub modulus: Option<Vec<u32>>,
    /// Generator given by its power-basis coordinates.
    pub generator: Option<Vec<u32>>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

// Dense polynomials over F_p used only while constructing the field.
mod prime_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = inv(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = (r[r.len() - 1] as u64 * inv_lead as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[k + i] = (r[k + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv(x: u32, p: u32) -> u32 {
        let mut acc = 1u64;
        let mut base = x as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// Rabin's test for a monic polynomial of degree `n >= 1`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        // x^(p^k) mod m
        let frob = |k: usize| {
            let mut h = x.clone();
            for _ in 0..k {
                h = powmod(&h, p as u64, m, p);
            }
            h
        };
        if sub(&frob(n), &x, p) != Vec::<u32>::new() {
            return false;
        }
        for l in super::prime_divisors(n as u64) {
            let h = sub(&frob(n / l as usize), &x, p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

impl FqField {
    /// Builds `F_{p^f}` with the default bound on `q`.
    pub fn build(p: u64, f: u32) -> Result<FqField, FieldError> {
        Self::build_with(p, f, &FieldOptions::default())
    }

    pub fn build_with(p: u64, f: u32, opts: &FieldOptions) -> Result<FqField, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let bound = opts.max_q.unwrap_or(DEFAULT_MAX_Q);
        let q = (0..f)
            .try_fold(1u64, |acc, _| acc.checked_mul(p))
            .filter(|&q| q <= bound && q <= u32::MAX as u64)
            .ok_or(FieldError::TooLarge { p, f, bound })?;
        let p32 = p as u32;
        let q32 = q as u32;

        let modulus = match &opts.modulus {
            Some(m) => {
                let mut m = m.clone();
                prime_poly::trim(&mut m);
                if m.len() != f as usize + 1
                    || m[f as usize] != 1
                    || m.iter().any(|&c| c >= p32)
                    || !prime_poly::is_irreducible(&m, p32)
                {
                    return Err(FieldError::BadModulus(f));
                }
                m
            }
            None => smallest_irreducible(p32, f),
        };

        let mut data = FieldData {
            p: p32,
            f,
            q: q32,
            modulus,
            gen: FqElem::ZERO,
            exp: Vec::new(),
            log: Vec::new(),
        };

        let order = q - 1;
        let order_primes = prime_divisors(order);
        let has_full_order = |x: &[u32]| {
            if q == 2 {
                return x == [1];
            }
            order_primes
                .iter()
                .all(|&l| prime_poly::powmod(x, order / l, &data.modulus, p32) != vec![1])
        };
        let gen_coeffs = match &opts.generator {
            Some(c) => {
                let mut c = c.clone();
                prime_poly::trim(&mut c);
                if c.len() > f as usize || c.iter().any(|&x| x >= p32) || c.is_empty() {
                    return Err(FieldError::BadGenerator);
                }
                if !has_full_order(&c) {
                    return Err(FieldError::BadGenerator);
                }
                c
            }
            None => {
                // Candidates in lexicographic order with the constant term
                // as the most significant coordinate.
                (1..q)
                    .map(|t| lex_coeffs(t, p32, f))
                    .find(|c| has_full_order(c))
                    .expect("F_q* is cyclic")
            }
        };

        // exp/log tables from repeated multiplication by g.
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for k in 0..order {
            let enc = encode(&cur, p32);
            exp.push(enc);
            log[enc as usize] = k as u32;
            cur = prime_poly::mulmod(&cur, &gen_coeffs, &data.modulus, p32);
        }
        data.gen = FqElem(encode(&gen_coeffs, p32));
        data.exp = exp;
        data.log = log;
        Ok(FqField(Arc::new(data)))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn unit_order(&self) -> u64 {
        self.0.q as u64 - 1
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.f == 1
    }

    /// Defining modulus over `F_p`, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.0.gen
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    pub fn contains(&self, a: FqElem) -> bool {
        a.0 < self.0.q
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given integer encoding, if it is below `q`.
    pub fn element(&self, encoding: u32) -> Result<FqElem, FieldError> {
        if encoding < self.0.q {
            Ok(FqElem(encoding))
        } else {
            Err(FieldError::FieldMismatch { q: self.q() })
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem, FieldError> {
        if coeffs.len() > self.0.f as usize && coeffs[self.0.f as usize..].iter().any(|&c| c != 0)
            || coeffs.iter().any(|&c| c >= self.0.p)
        {
            return Err(FieldError::FieldMismatch { q: self.q() });
        }
        Ok(FqElem(encode(coeffs, self.0.p)))
    }

    /// Power-basis coordinates, length `f`.
    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        let p = self.0.p;
        let mut x = a.0;
        (0..self.0.f)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    /// `g^k`; `k` may be any integer.
    pub fn gen_pow(&self, k: i64) -> FqElem {
        let m = self.unit_order() as i64;
        FqElem(self.0.exp[k.rem_euclid(m) as usize])
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.0.p;
        if self.0.f == 1 {
            return FqElem((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FqElem(out)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.0.p;
        if self.0.f == 1 {
            return FqElem((p - a.0) % p);
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        FqElem(out)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        let m = self.0.q - 1;
        let k = (self.0.log[a.0 as usize] as u64 + self.0.log[b.0 as usize] as u64) % m as u64;
        FqElem(self.0.exp[k as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let m = self.0.q - 1;
        let k = (m - self.0.log[a.0 as usize]) % m;
        Ok(FqElem(self.0.exp[k as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Checked binary arithmetic that rejects elements of a different field.
    pub fn arith(&self, a: FqElem, b: FqElem, op: ArithOp) -> Result<FqElem, FieldError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(FieldError::FieldMismatch { q: self.q() });
        }
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    /// `k` in `[0, q - 1)` with `g^k = x`.
    pub fn dlog(&self, x: FqElem) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::LogOfZero);
        }
        if !self.contains(x) {
            return Err(FieldError::FieldMismatch { q: self.q() });
        }
        Ok(self.0.log[x.0 as usize] as u64)
    }

    /// Whether `x` is an `n`-th power in `F_q*`, for `n | q - 1`.
    pub fn is_nth_power(&self, x: FqElem, n: u64) -> Result<bool, FieldError> {
        Ok(self.dlog(x)? % gcd(n, self.unit_order()) == 0)
    }

    /// Key for the canonical order on coefficients: integer value in a prime
    /// field; zero first and then by discrete logarithm in an extension field.
    pub fn order_key(&self, a: FqElem) -> u64 {
        if self.is_prime_field() || a.is_zero() {
            a.0 as u64
        } else {
            1 + self.0.log[a.0 as usize] as u64
        }
    }

    /// Textual form: an integer in a prime field; `0`, `1` or `g^k` otherwise.
    pub fn render(&self, a: FqElem) -> String {
        if self.is_prime_field() || a.0 <= 1 {
            a.0.to_string()
        } else {
            format!("g^{}", self.0.log[a.0 as usize])
        }
    }

    /// `x` rendered as a polynomial in `x`, for the modulus and generator.
    pub fn render_prime_poly(coeffs: &[u32]) -> String {
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// The `t`-th coefficient vector in lexicographic order with the constant
/// term most significant.
fn lex_coeffs(t: u64, p: u32, f: u32) -> Vec<u32> {
    let mut c = vec![0u32; f as usize];
    let mut x = t;
    for i in (0..f as usize).rev() {
        c[i] = (x % p as u64) as u32;
        x /= p as u64;
    }
    c
}

fn smallest_irreducible(p: u32, f: u32) -> Vec<u32> {
    if f == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(f);
    (0..count)
        .map(|t| {
            let mut m = lex_coeffs(t, p, f);
            m.push(1);
            m
        })
        .find(|m| m[0] != 0 && prime_poly::is_irreducible(m, p))
        .expect("irreducibles exist in every degree")
}
