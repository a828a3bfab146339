//! Kummer extensions `K = k(m_1-th root of gamma_1 D_1, ...)` of `k = F_q(T)`.
//!
//! Every radicand is recorded as a vector in `(Z/M)^{1+r}`, `M = q - 1`:
//! the discrete log of its constant part followed by its valuations at the
//! basis primes. Adjoining an `m`-th root of `a` corresponds to the class of
//! `a^{M/m}` in `k*/(k*)^M`, so every field here is a subgroup of one lattice.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::factor::{factor, MonicIrreducible};
use crate::ff::{gcd, lcm, FieldError, FqElem, FqField};
use crate::group::{GroupError, RadicandGroup};
use crate::poly::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("component {index}: exponent {m} does not divide q - 1 = {unit_order}")]
    ExponentNotDividing {
        index: usize,
        m: u64,
        unit_order: u64,
    },
    #[error("component {index}: exponent must be positive")]
    ZeroExponent { index: usize },
    #[error("component {index}: radicand polynomial is not monic")]
    NotMonic { index: usize },
    #[error("component {index}: gamma must be nonzero")]
    ZeroGamma { index: usize },
    #[error("component {index}: data lives in a different field")]
    FieldMismatch { index: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One generator `m`-th root of `gamma * D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub gamma: FqElem,
    pub radicand: Poly,
    pub exponent: u64,
}

/// Validated extension data: every exponent divides `q - 1`, every `D` is
/// monic and every `gamma` is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerDescriptor {
    field: FqField,
    components: Vec<Component>,
}

impl KummerDescriptor {
    pub fn new(field: &FqField, components: Vec<Component>) -> Result<Self, DescriptorError> {
        let unit_order = field.unit_order();
        for (index, c) in components.iter().enumerate() {
            if c.radicand.field() != field || !field.contains(c.gamma) {
                return Err(DescriptorError::FieldMismatch { index });
            }
            if c.exponent == 0 {
                return Err(DescriptorError::ZeroExponent { index });
            }
            if unit_order % c.exponent != 0 {
                return Err(DescriptorError::ExponentNotDividing {
                    index,
                    m: c.exponent,
                    unit_order,
                });
            }
            if !c.radicand.is_monic() {
                return Err(DescriptorError::NotMonic { index });
            }
            if c.gamma.is_zero() {
                return Err(DescriptorError::ZeroGamma { index });
            }
        }
        Ok(KummerDescriptor {
            field: field.clone(),
            components,
        })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }
}

/// Sorted, duplicate-free list of primes indexing the valuation coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimeBasis {
    primes: Vec<MonicIrreducible>,
}

impl PrimeBasis {
    pub fn new(mut primes: Vec<MonicIrreducible>) -> PrimeBasis {
        primes.sort();
        primes.dedup();
        PrimeBasis { primes }
    }

    pub fn primes(&self) -> &[MonicIrreducible] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Dimension of the radicand lattice: constant coordinate plus one per prime.
    pub fn dim(&self) -> usize {
        1 + self.primes.len()
    }

    pub fn index_of(&self, p: &MonicIrreducible) -> Option<usize> {
        self.primes.binary_search(p).ok()
    }

    pub fn union(&self, other: &PrimeBasis) -> PrimeBasis {
        PrimeBasis::new(self.primes.iter().chain(&other.primes).cloned().collect())
    }

    /// Coordinate map into a basis containing this one.
    pub fn embedding_into(&self, target: &PrimeBasis) -> Option<Vec<usize>> {
        let mut map = vec![0];
        for p in &self.primes {
            map.push(1 + target.index_of(p)?);
        }
        Some(map)
    }

    /// `(0; indicator of p)` scaled by `k`, reduced mod `modulus`.
    pub fn unit_vector(&self, p: &MonicIrreducible, k: u64, modulus: u64) -> Option<Vec<u64>> {
        let i = self.index_of(p)?;
        let mut v = vec![0; self.dim()];
        v[1 + i] = k % modulus;
        Some(v)
    }
}

/// Class of a radicand in `k*/(k*)^M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicandVector {
    pub modulus: u64,
    pub const_coord: u64,
    pub exps: Vec<u64>,
}

impl RadicandVector {
    pub fn to_row(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(1 + self.exps.len());
        v.push(self.const_coord);
        v.extend_from_slice(&self.exps);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.const_coord == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn order(&self) -> u64 {
        RadicandGroup::element_order(self.modulus, &self.to_row())
    }
}

/// A validated descriptor together with its lattice data.
#[derive(Debug, Clone)]
pub struct NormalizedExtension {
    pub descriptor: KummerDescriptor,
    pub basis: PrimeBasis,
    /// Class of `(gamma_i D_i)^{M/m_i}` for every component, trivial or not.
    pub vectors: Vec<RadicandVector>,
    /// Indices of components whose radical already lies in `k`.
    pub dropped: Vec<usize>,
    pub group: RadicandGroup,
    /// Exponent `n` of `Gal(K/k)`.
    pub exponent: u64,
    pub component_degrees: Vec<u64>,
    /// `[K:k]`.
    pub degree: u64,
    /// `K = k`.
    pub degenerate: bool,
}

impl NormalizedExtension {
    pub fn field(&self) -> &FqField {
        self.descriptor.field()
    }

    pub fn modulus(&self) -> u64 {
        self.field().unit_order()
    }

    pub fn galois(&self) -> Vec<u64> {
        self.group.invariant_factors()
    }
}

fn valuations(d: &Poly, seed: u64) -> Result<BTreeMap<MonicIrreducible, u32>, PolyError> {
    if d.is_constant() {
        return Ok(BTreeMap::new());
    }
    Ok(factor(d, seed)?.into_iter().collect())
}

pub fn radicand_vector(
    field: &FqField,
    basis: &PrimeBasis,
    gamma: FqElem,
    vals: &BTreeMap<MonicIrreducible, u32>,
    scale: u64,
) -> Result<RadicandVector, DescriptorError> {
    let m = field.unit_order();
    let mul = |a: u64| ((a as u128 * scale as u128) % m as u128) as u64;
    let const_coord = mul(field.dlog(gamma)?);
    let exps = basis
        .primes()
        .iter()
        .map(|p| mul(vals.get(p).copied().unwrap_or(0) as u64))
        .collect();
    Ok(RadicandVector {
        modulus: m,
        const_coord,
        exps,
    })
}

/// Factors the radicands, assembles the prime basis and the radicand group.
pub fn normalize(
    desc: &KummerDescriptor,
    seed: u64,
) -> Result<NormalizedExtension, DescriptorError> {
    let field = desc.field();
    let m = field.unit_order();
    let vals: Vec<BTreeMap<MonicIrreducible, u32>> = desc
        .components()
        .iter()
        .map(|c| valuations(&c.radicand, seed))
        .collect::<Result<_, _>>()?;
    let basis = PrimeBasis::new(vals.iter().flat_map(|v| v.keys().cloned()).collect());

    let mut vectors = Vec::with_capacity(desc.components().len());
    let mut dropped = Vec::new();
    for (i, (c, v)) in desc.components().iter().zip(&vals).enumerate() {
        let vec = radicand_vector(field, &basis, c.gamma, v, m / c.exponent)?;
        if vec.is_zero() {
            dropped.push(i);
        }
        vectors.push(vec);
    }
    let rows = vectors
        .iter()
        .filter(|v| !v.is_zero())
        .map(RadicandVector::to_row)
        .collect();
    let group = RadicandGroup::new(m, basis.dim(), rows)?;
    let exponent = group.exponent();
    let degree = group.order()?;
    let component_degrees = vectors.iter().map(RadicandVector::order).collect();
    Ok(NormalizedExtension {
        descriptor: desc.clone(),
        basis,
        vectors,
        dropped,
        group,
        exponent,
        component_degrees,
        degree,
        degenerate: degree == 1,
    })
}

/// Ramified finite primes with their indices `e >= 2`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RamificationData {
    pub entries: Vec<(MonicIrreducible, u64)>,
}

impl RamificationData {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `prod e_i`.
    pub fn index_product(&self) -> u64 {
        self.entries.iter().map(|(_, e)| e).product()
    }

    pub fn index_of(&self, p: &MonicIrreducible) -> u64 {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map_or(1, |(_, e)| *e)
    }
}

/// `e_P` is the order of the projection of the radicand group onto the
/// `P`-coordinate: `M / gcd(M, P-coordinates of all generators)`.
pub fn ramification_indices(ext: &NormalizedExtension) -> RamificationData {
    let m = ext.modulus();
    let entries = ext
        .basis
        .primes()
        .iter()
        .enumerate()
        .filter_map(|(j, p)| {
            let g = ext
                .group
                .generators()
                .iter()
                .fold(m, |acc, row| gcd(acc, row[1 + j]));
            let e = m / g;
            (e >= 2).then(|| (p.clone(), e))
        })
        .collect();
    RamificationData { entries }
}

/// Componentwise formula `e_P = lcm_i m_i / gcd(m_i, v_P(D_i))`, computed
/// from fresh factorizations of the radicands.
pub fn ramification_lcm_oracle(
    desc: &KummerDescriptor,
    seed: u64,
) -> Result<RamificationData, DescriptorError> {
    let mut acc: BTreeMap<MonicIrreducible, u64> = BTreeMap::new();
    for c in desc.components() {
        for (p, v) in valuations(&c.radicand, seed)? {
            let e = c.exponent / gcd(c.exponent, v as u64);
            let slot = acc.entry(p).or_insert(1);
            *slot = lcm(*slot, e);
        }
    }
    Ok(RamificationData {
        entries: acc.into_iter().filter(|(_, e)| *e >= 2).collect(),
    })
}

/// Ramification index of the infinite prime: the order of the image of the
/// group under `v -> -sum deg(P) v_P` in `Z/M`.
pub fn infinite_ramification(ext: &NormalizedExtension) -> u64 {
    let m = ext.modulus();
    let degs: Vec<u64> = ext.basis.primes().iter().map(|p| p.deg() as u64).collect();
    let g = ext.group.generators().iter().fold(m, |acc, row| {
        let s = row[1..]
            .iter()
            .zip(&degs)
            .fold(0u64, |s, (&x, &d)| (s + x * (d % m)) % m);
        gcd(acc, (m - s) % m)
    });
    m / g
}
