//! Extended genus fields of a Kummer extension `K/k`.
//!
//! The Clement-style field is `F_{q^n}(T, e_1-th root of P_1, ...)` over the
//! ramified primes; the rarzvi-style field is the compositum of `K` with the
//! `e_i`-th roots of `(-1)^{deg P_i} P_i`. Both are subgroups of the radicand
//! lattice of `K`, so degrees and containments are exact group computations.

use thiserror::Error;

use crate::factor::MonicIrreducible;
use crate::ff::{FqElem, FqField};
use crate::group::{GroupError, RadicandGroup};
use crate::kummer::{
    ramification_indices, Component, DescriptorError, KummerDescriptor, NormalizedExtension,
    PrimeBasis, RamificationData,
};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error("prime {0} is not in the basis")]
    MissingPrime(String),
}

/// `e`-th root of `c * P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    pub exponent: u64,
    pub coefficient: FqElem,
    pub prime: MonicIrreducible,
}

#[derive(Debug, Clone)]
pub struct GenusField {
    /// The constant field is `F_{q^d}`.
    pub constant_degree: u64,
    pub radicals: Vec<Radical>,
    pub basis: PrimeBasis,
    pub group: RadicandGroup,
    /// Degree over `k`.
    pub degree: u64,
    /// Invariant factors of the Galois group over `k`.
    pub galois: Vec<u64>,
}

impl GenusField {
    /// The group re-expressed over a basis containing this field's basis.
    pub fn group_over(&self, target: &PrimeBasis) -> Result<RadicandGroup, GenusError> {
        let map = self
            .basis
            .embedding_into(target)
            .ok_or_else(|| GenusError::MissingPrime("basis not contained in target".into()))?;
        Ok(self.group.embed(&map, target.dim())?)
    }
}

/// `(M/d, 0, ..., 0)`: the class of `g^{M/d}`, i.e. the constant extension
/// of degree `d`.
pub fn constant_vector(modulus: u64, dim: usize, d: u64) -> Vec<u64> {
    let mut v = vec![0; dim];
    v[0] = (modulus / d) % modulus;
    v
}

fn radical_vector(
    field: &FqField,
    basis: &PrimeBasis,
    r: &Radical,
) -> Result<Vec<u64>, GenusError> {
    let m = field.unit_order();
    let scale = m / r.exponent;
    let mut v = basis
        .unit_vector(&r.prime, scale, m)
        .ok_or_else(|| GenusError::MissingPrime(r.prime.to_string()))?;
    let c = field.dlog(r.coefficient).map_err(DescriptorError::from)?;
    v[0] = ((c as u128 * scale as u128) % m as u128) as u64;
    Ok(v)
}

fn assemble(
    field: &FqField,
    basis: &PrimeBasis,
    constant_degree: u64,
    radicals: Vec<Radical>,
    base: Option<&RadicandGroup>,
) -> Result<GenusField, GenusError> {
    let m = field.unit_order();
    let mut rows = vec![constant_vector(m, basis.dim(), constant_degree)];
    for r in &radicals {
        rows.push(radical_vector(field, basis, r)?);
    }
    let mut group = RadicandGroup::new(m, basis.dim(), rows)?;
    if let Some(b) = base {
        group = group.join(b)?;
    }
    let degree = group.order()?;
    let galois = group.invariant_factors();
    Ok(GenusField {
        constant_degree,
        radicals,
        basis: basis.clone(),
        group,
        degree,
        galois,
    })
}

/// `Gamma = F_{q^n}(T, e_1-th root of P_1, ..., e_r-th root of P_r)`.
pub fn clement_genus_field(ext: &NormalizedExtension) -> Result<GenusField, GenusError> {
    let ram = ramification_indices(ext);
    let radicals = ram
        .entries
        .iter()
        .map(|(p, e)| Radical {
            exponent: *e,
            coefficient: FqElem::ONE,
            prime: p.clone(),
        })
        .collect();
    assemble(ext.field(), &ext.basis, ext.exponent, radicals, None)
}

/// `(-1)^{deg P}` in `F_q`.
pub fn prime_sign(field: &FqField, p: &MonicIrreducible) -> FqElem {
    if p.deg() % 2 == 0 {
        FqElem::ONE
    } else {
        field.neg(FqElem::ONE)
    }
}

/// `K * k(e_1-th root of (-1)^{deg P_1} P_1, ...)`. The radical list holds the
/// signed primes only; the group also contains `K`.
pub fn rarzvi_genus_field(ext: &NormalizedExtension) -> Result<GenusField, GenusError> {
    let field = ext.field();
    let ram = ramification_indices(ext);
    let radicals: Vec<Radical> = ram
        .entries
        .iter()
        .map(|(p, e)| Radical {
            exponent: *e,
            coefficient: prime_sign(field, p),
            prime: p.clone(),
        })
        .collect();
    let mut gf = assemble(field, &ext.basis, 1, radicals, Some(&ext.group))?;
    gf.constant_degree = gf.group.constant_subgroup_order();
    Ok(gf)
}

/// `[Gamma : k] == n * prod e_i`.
pub fn verify_degree_formula(
    gf: &GenusField,
    ext: &NormalizedExtension,
) -> Result<bool, GenusError> {
    let ram = ramification_indices(ext);
    let expected = ram
        .entries
        .iter()
        .try_fold(ext.exponent, |acc, (_, e)| acc.checked_mul(*e))
        .ok_or(GroupError::Overflow)?;
    Ok(gf.group.order()? == expected)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub k_in_rarzvi: bool,
    pub rarzvi_in_clement: bool,
    pub rarzvi_eq_clement: bool,
    /// `[clement : rarzvi]` when the containment holds.
    pub index_rarzvi_in_clement: Option<u64>,
    pub degree_k: u64,
    pub degree_rarzvi: u64,
    pub degree_clement: u64,
}

pub fn compare_fields(
    ext: &NormalizedExtension,
    clement: &GenusField,
    rarzvi: &GenusField,
) -> Result<ComparisonReport, GenusError> {
    let basis = clement.basis.union(&rarzvi.basis).union(&ext.basis);
    let k = ext.group.embed(
        &ext.basis
            .embedding_into(&basis)
            .expect("union contains basis"),
        basis.dim(),
    )?;
    let c = clement.group_over(&basis)?;
    let r = rarzvi.group_over(&basis)?;
    let k_in_rarzvi = r.contains(&k)?;
    let rarzvi_in_clement = c.contains(&r)?;
    let rarzvi_eq_clement = rarzvi_in_clement && r.contains(&c)?;
    let index_rarzvi_in_clement = rarzvi_in_clement.then(|| clement.degree / rarzvi.degree);
    Ok(ComparisonReport {
        k_in_rarzvi,
        rarzvi_in_clement,
        rarzvi_eq_clement,
        index_rarzvi_in_clement,
        degree_k: ext.degree,
        degree_rarzvi: rarzvi.degree,
        degree_clement: clement.degree,
    })
}

/// Builds both genus fields (concurrently with the `parallel` feature) and
/// compares them.
pub fn compare(ext: &NormalizedExtension) -> Result<ComparisonReport, GenusError> {
    let (clement, rarzvi) =
        crate::par::join(|| clement_genus_field(ext), || rarzvi_genus_field(ext));
    compare_fields(ext, &clement?, &rarzvi?)
}

/// Kummer descriptor of a genus field: `(g, 1, d)` for the constant part
/// and `(c, P, e)` per radical.
pub fn as_descriptor(gf: &GenusField, field: &FqField) -> Result<KummerDescriptor, GenusError> {
    let mut components = Vec::with_capacity(gf.radicals.len() + 1);
    if gf.constant_degree > 1 {
        components.push(Component {
            gamma: field.generator(),
            radicand: Poly::one(field),
            exponent: gf.constant_degree,
        });
    }
    for r in &gf.radicals {
        components.push(Component {
            gamma: r.coefficient,
            radicand: r.prime.poly().clone(),
            exponent: r.exponent,
        });
    }
    Ok(KummerDescriptor::new(field, components)?)
}

/// Compares the rarzvi field with the rewritten form
/// `F_q(T, e_i-th root of eps_i)(e_i-th root of P_i)`, `eps_i = (-1)^{deg P_i} gamma_i`.
///
/// Only meaningful when every component has a prime radicand `D_i = P_i`,
/// the `P_i` are distinct and all ramified; returns `None` otherwise and
/// `Some(true)` when the two groups differ.
pub fn closed_form_disagrees(
    ext: &NormalizedExtension,
    rarzvi: &GenusField,
) -> Result<Option<bool>, GenusError> {
    let field = ext.field();
    let m = field.unit_order();
    let ram: RamificationData = ramification_indices(ext);
    let comps = ext.descriptor.components();
    if comps.is_empty() || comps.len() != ram.len() {
        return Ok(None);
    }
    let mut rows = Vec::new();
    for c in comps {
        let Some((p, e)) = ram.entries.iter().find(|(p, _)| p.poly() == &c.radicand) else {
            return Ok(None);
        };
        let eps = field.mul(prime_sign(field, p), c.gamma);
        let scale = m / e;
        let mut cv = vec![0; ext.basis.dim()];
        cv[0] = ((field.dlog(eps).map_err(DescriptorError::from)? as u128 * scale as u128)
            % m as u128) as u64;
        rows.push(cv);
        rows.push(
            ext.basis
                .unit_vector(p, scale, m)
                .ok_or_else(|| GenusError::MissingPrime(p.to_string()))?,
        );
    }
    let closed = RadicandGroup::new(m, ext.basis.dim(), rows)?;
    Ok(Some(!closed.same_subgroup(&rarzvi.group)?))
}
