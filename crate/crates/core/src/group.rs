//! Finitely generated subgroups of `(Z/M)^d` and Smith normal form.
//!
//! A subgroup `G` is handled through the lattice `L = rowspan(A) + M Z^d`
//! where the rows of `A` are its generators. Diagonalizing `A` by unimodular
//! row and column operations (entries reduced mod `M` after every step, which
//! is legal because `M Z^d` is invariant under unimodular column changes)
//! gives `L V = s_1 Z + ... + s_d Z` with `s_j | M`, hence
//! `G = Z/(M/s_1) x ... x Z/(M/s_d)` and `v in G` iff `(v V)_j = 0 mod s_j`.

use std::sync::OnceLock;

use thiserror::Error;

use crate::ff::{divisors, gcd, lcm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("integer overflow during lattice computation")]
    Overflow,
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix, GroupError> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    let t = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .ok_or(GroupError::Overflow)?;
                    acc = acc.checked_add(t).ok_or(GroupError::Overflow)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] -= k * row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, k: i64) -> Result<(), GroupError> {
        for j in 0..self.cols {
            let t = self
                .get(src, j)
                .checked_mul(k)
                .ok_or(GroupError::Overflow)?;
            let v = self
                .get(dst, j)
                .checked_sub(t)
                .ok_or(GroupError::Overflow)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// `col[dst] -= k * col[src]`
    fn col_axpy(&mut self, dst: usize, src: usize, k: i64) -> Result<(), GroupError> {
        for i in 0..self.rows {
            let t = self
                .get(i, src)
                .checked_mul(k)
                .ok_or(GroupError::Overflow)?;
            let v = self
                .get(i, dst)
                .checked_sub(t)
                .ok_or(GroupError::Overflow)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, -v);
        }
    }
}

/// `left * A * right = diag`, with `diag[0] | diag[1] | ...` nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// The diagonal as a full `rows x cols` matrix.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut s = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, &d) in self.diag.iter().enumerate() {
            s.set(i, i, d);
        }
        s
    }
}

/// Smith normal form over `Z`.
///
/// Pivot: smallest nonzero absolute value in the remaining block, ties broken
/// by row-major position. Arithmetic is checked; overflow is an error.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm, GroupError> {
    let (r, c) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut left = IntMatrix::identity(r);
    let mut right = IntMatrix::identity(c);
    let mut diag = Vec::with_capacity(r.min(c));

    for t in 0..r.min(c) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = m.get(i, j);
                    if v != 0 && pivot.is_none_or(|(pi, pj)| v.abs() < m.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap_rows(t, pi);
            left.swap_rows(t, pi);
            m.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let p = m.get(t, t);
            let mut dirty = false;
            for i in t + 1..r {
                let k = m.get(i, t) / p;
                if k != 0 {
                    m.row_axpy(i, t, k)?;
                    left.row_axpy(i, t, k)?;
                }
                dirty |= m.get(i, t) != 0;
            }
            for j in t + 1..c {
                let k = m.get(t, j) / p;
                if k != 0 {
                    m.col_axpy(j, t, k)?;
                    right.col_axpy(j, t, k)?;
                }
                dirty |= m.get(t, j) != 0;
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| m.get(i, j) % p != 0));
            match bad_row {
                Some(i) => {
                    m.row_axpy(t, i, -1)?;
                    left.row_axpy(t, i, -1)?;
                }
                None => break,
            }
        }
        if m.get(t, t) < 0 {
            m.negate_row(t);
            left.negate_row(t);
        }
        diag.push(m.get(t, t));
    }
    Ok(SmithForm { diag, left, right })
}

/// Normalizes a list of cyclic orders into invariant factors `d_1 | d_2 | ...`,
/// dropping 1s.
pub fn invariant_factors_of(orders: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders {
        let mut n = o;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                let mut pk = 1;
                while n % d == 0 {
                    n /= d;
                    pk *= d;
                }
                by_prime.entry(d).or_default().push(pk);
            }
            d += 1;
        }
        if n > 1 {
            by_prime.entry(n).or_default().push(n);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (k, &pk) in powers.iter().enumerate() {
            out[len - 1 - k] *= pk;
        }
    }
    out
}

#[derive(Debug, Clone)]
struct Reduced {
    /// `s_j | M` per transformed coordinate.
    steps: Vec<u64>,
    /// Column transform, reduced mod `M`, row-major `d x d`.
    basis_change: Vec<u64>,
}

/// Subgroup of `(Z/M)^d` given by generators. Coordinate 0 is the constant
/// coordinate when the group encodes radicands.
#[derive(Debug, Clone)]
pub struct RadicandGroup {
    modulus: u64,
    dim: usize,
    generators: Vec<Vec<u64>>,
    reduced: OnceLock<Reduced>,
}

impl RadicandGroup {
    pub fn new(modulus: u64, dim: usize, generators: Vec<Vec<u64>>) -> Result<Self, GroupError> {
        if modulus == 0 {
            return Err(GroupError::ZeroModulus);
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != dim {
                return Err(GroupError::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            gens.push(g.into_iter().map(|x| x % modulus).collect());
        }
        Ok(RadicandGroup {
            modulus,
            dim,
            generators: gens,
            reduced: OnceLock::new(),
        })
    }

    pub fn trivial(modulus: u64, dim: usize) -> Self {
        Self::new(modulus, dim, Vec::new()).expect("valid")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    fn check_compatible(&self, other: &RadicandGroup) -> Result<(), GroupError> {
        if self.modulus != other.modulus {
            return Err(GroupError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.dim != other.dim {
            return Err(GroupError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Subgroup generated by both groups.
    pub fn join(&self, other: &RadicandGroup) -> Result<Self, GroupError> {
        self.check_compatible(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::new(self.modulus, self.dim, gens)
    }

    pub fn with_generator(&self, v: Vec<u64>) -> Result<Self, GroupError> {
        let mut gens = self.generators.clone();
        gens.push(v);
        Self::new(self.modulus, self.dim, gens)
    }

    /// Moves coordinates: entry `i` of each generator goes to `map[i]` in a
    /// group of dimension `new_dim`, other coordinates are zero.
    pub fn embed(&self, map: &[usize], new_dim: usize) -> Result<Self, GroupError> {
        if map.len() != self.dim {
            return Err(GroupError::DimensionMismatch {
                expected: self.dim,
                found: map.len(),
            });
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut v = vec![0; new_dim];
                for (i, &x) in g.iter().enumerate() {
                    v[map[i]] = x;
                }
                v
            })
            .collect();
        Self::new(self.modulus, new_dim, gens)
    }

    fn reduced(&self) -> &Reduced {
        self.reduced
            .get_or_init(|| diagonalize_mod(self.modulus, self.dim, &self.generators))
    }

    /// Orders of the cyclic factors in the diagonal decomposition (not
    /// normalized, may contain 1s).
    pub fn cyclic_orders(&self) -> Vec<u64> {
        self.reduced()
            .steps
            .iter()
            .map(|&s| self.modulus / s)
            .collect()
    }

    pub fn member(&self, v: &[u64]) -> Result<bool, GroupError> {
        if v.len() != self.dim {
            return Err(GroupError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let m = self.modulus as u128;
        let red = self.reduced();
        Ok((0..self.dim).all(|j| {
            let w = (0..self.dim).fold(0u128, |acc, i| {
                (acc + (v[i] as u128 % m) * red.basis_change[i * self.dim + j] as u128) % m
            });
            w as u64 % red.steps[j] == 0
        }))
    }

    /// Number of elements.
    pub fn order(&self) -> Result<u64, GroupError> {
        self.cyclic_orders().into_iter().try_fold(1u64, |acc, c| {
            acc.checked_mul(c).ok_or(GroupError::Overflow)
        })
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than 1.
    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors_of(&self.cyclic_orders())
    }

    /// Exponent of the group; 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.cyclic_orders().into_iter().fold(1, lcm)
    }

    /// Whether `other` is a subgroup of `self`.
    pub fn contains(&self, other: &RadicandGroup) -> Result<bool, GroupError> {
        self.check_compatible(other)?;
        for g in &other.generators {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_subgroup(&self, other: &RadicandGroup) -> Result<bool, GroupError> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// Largest `d | M` such that the pure constant vector `(M/d, 0, ..., 0)`
    /// lies in the group.
    pub fn constant_subgroup_order(&self) -> u64 {
        if self.dim == 0 {
            return 1;
        }
        let mut v = vec![0u64; self.dim];
        divisors(self.modulus)
            .into_iter()
            .rev()
            .find(|&d| {
                v[0] = (self.modulus / d) % self.modulus;
                self.member(&v).expect("dimension matches")
            })
            .unwrap_or(1)
    }

    /// Order of a single element of `(Z/M)^d`.
    pub fn element_order(modulus: u64, v: &[u64]) -> u64 {
        v.iter()
            .map(|&x| modulus / gcd(x % modulus, modulus))
            .fold(1, lcm)
    }
}

fn diagonalize_mod(modulus: u64, dim: usize, gens: &[Vec<u64>]) -> Reduced {
    let m = modulus;
    let rows = gens.len();
    let mut a: Vec<Vec<u64>> = gens.to_vec();
    let mut v = vec![0u64; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1 % m;
    }
    let sub_mul = |x: u64, k: u64, y: u64| (x + m - (k % m) * y % m) % m;
    let mut diag = Vec::new();

    for t in 0..rows.min(dim) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && pivot.is_none_or(|(pi, pj)| x < a[pi][pj]) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for i in 0..dim {
                    v.swap(i * dim + t, i * dim + pj);
                }
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let k = a[i][t] / p;
                if k != 0 {
                    for j in 0..dim {
                        a[i][j] = sub_mul(a[i][j], k, a[t][j]);
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..dim {
                let k = a[t][j] / p;
                if k != 0 {
                    for row in a.iter_mut() {
                        row[j] = sub_mul(row[j], k, row[t]);
                    }
                    for i in 0..dim {
                        v[i * dim + j] = sub_mul(v[i * dim + j], k, v[i * dim + t]);
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                break;
            }
        }
        if a[t][t] == 0 {
            break;
        }
        diag.push(a[t][t]);
    }
    let steps = (0..dim)
        .map(|j| diag.get(j).map_or(m, |&d| gcd(d, m)))
        .collect();
    Reduced {
        steps,
        basis_change: v,
    }
}
