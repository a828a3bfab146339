//! Runs a job and assembles the report.

use serde::Serialize;

use crate::ff::FqField;
use crate::genus::{
    clement_genus_field, closed_form_disagrees, compare_fields, rarzvi_genus_field,
    verify_degree_formula, GenusField,
};
use crate::group::RadicandGroup;
use crate::input::{JobConfig, OutputFormat};
use crate::kummer::{infinite_ramification, normalize, ramification_indices, KummerDescriptor};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub field: FieldReport,
    pub extension: ExtensionReport,
    pub ramification: RamificationReport,
    pub clement: GenusReport,
    pub rarzvi: GenusReport,
    pub comparison: Option<ComparisonSection>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldReport {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// Polynomial in `x` over `F_p`.
    pub modulus: String,
    pub generator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub gamma: String,
    #[serde(rename = "D")]
    pub radicand: String,
    pub m: u64,
    /// Order of the radical over `k`.
    pub degree: u64,
    pub vector: Vec<u64>,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub components: Vec<ComponentReport>,
    pub primes: Vec<String>,
    pub degree: u64,
    pub exponent: u64,
    pub galois: Vec<u64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamifiedPrime {
    pub prime: String,
    pub degree: u64,
    pub e: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationReport {
    pub finite: Vec<RamifiedPrime>,
    pub index_product: u64,
    /// Present with `--infinite`.
    pub infinite: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalReport {
    pub e: u64,
    pub c: String,
    pub prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusReport {
    pub constant_degree: u64,
    pub radicals: Vec<RadicalReport>,
    pub degree: u64,
    pub galois: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonSection {
    pub k_in_rarzvi: bool,
    pub rarzvi_in_clement: bool,
    pub rarzvi_eq_clement: bool,
    pub index_rarzvi_in_clement: Option<u64>,
    pub degree_k: u64,
    pub degree_rarzvi: u64,
    pub degree_clement: u64,
    pub angjau: String,
}

fn genus_report(field: &FqField, gf: &GenusField) -> GenusReport {
    GenusReport {
        constant_degree: gf.constant_degree,
        radicals: gf
            .radicals
            .iter()
            .map(|r| RadicalReport {
                e: r.exponent,
                c: field.render(r.coefficient),
                prime: r.prime.to_string(),
            })
            .collect(),
        degree: gf.degree,
        galois: gf.galois.clone(),
    }
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

/// Recomputes a group's order from its generators alone.
fn fresh_order(g: &RadicandGroup) -> Result<u64, Error> {
    Ok(RadicandGroup::new(g.modulus(), g.dim(), g.generators().to_vec())?.order()?)
}

/// Runs the pipeline. Errors carry the exit-code classes of [`Error`].
pub fn run(config: &JobConfig) -> Result<Report, Error> {
    let field = &config.field;
    let desc = KummerDescriptor::new(field, config.components.clone())?;
    let ext = normalize(&desc, config.seed)?;
    let mut warnings = Vec::new();
    for &i in &ext.dropped {
        if config.strict {
            return Err(Error::Descriptor(format!(
                "component {}: radical already lies in k",
                i + 1
            )));
        }
        warnings.push(format!(
            "component {}: radical already lies in k; dropped",
            i + 1
        ));
    }
    if ext.degenerate {
        warnings.push("extension is trivial (K = k)".to_string());
    }

    let ram = ramification_indices(&ext);
    let (clement, rarzvi) = if config.parallel {
        crate::par::join(|| clement_genus_field(&ext), || rarzvi_genus_field(&ext))
    } else {
        (clement_genus_field(&ext), rarzvi_genus_field(&ext))
    };
    let (clement, rarzvi) = (clement?, rarzvi?);
    let comparison = compare_fields(&ext, &clement, &rarzvi)?;

    // Audit.
    if !verify_degree_formula(&clement, &ext)? {
        return Err(invariant(
            "degree of the clement field differs from n * prod e",
        ));
    }
    for (name, g, claimed) in [
        ("K", &ext.group, ext.degree),
        ("clement", &clement.group, clement.degree),
        ("rarzvi", &rarzvi.group, rarzvi.degree),
    ] {
        if fresh_order(g)? != claimed {
            return Err(invariant(format!(
                "degree of {name} differs from its group order"
            )));
        }
    }
    if !(comparison.k_in_rarzvi && comparison.rarzvi_in_clement) {
        return Err(invariant("containment chain K <= rarzvi <= clement fails"));
    }
    if clement.group.constant_subgroup_order() != ext.exponent {
        return Err(invariant(
            "constant field of the clement field is not F_{q^n}",
        ));
    }
    let recheck = RadicandGroup::new(
        clement.group.modulus(),
        clement.group.dim(),
        clement.group.generators().to_vec(),
    )?;
    if recheck.contains(&rarzvi.group)? != comparison.rarzvi_in_clement
        || (comparison.rarzvi_eq_clement
            != (comparison.rarzvi_in_clement && rarzvi.group.contains(&recheck)?))
    {
        return Err(invariant(
            "comparison flags disagree with recomputed containments",
        ));
    }

    if closed_form_disagrees(&ext, &rarzvi)? == Some(true) {
        warnings.push(
            "rarzvi field: the rewritten closed form with eps_i = (-1)^deg(P_i) gamma_i \
             generates a different group than the compositum"
                .to_string(),
        );
    }

    let components = desc
        .components()
        .iter()
        .zip(&ext.vectors)
        .enumerate()
        .map(|(i, (c, v))| ComponentReport {
            gamma: field.render(c.gamma),
            radicand: c.radicand.to_string(),
            m: c.exponent,
            degree: ext.component_degrees[i],
            vector: v.to_row(),
            trivial: v.is_zero(),
        })
        .collect();

    Ok(Report {
        field: FieldReport {
            p: field.p(),
            f: field.degree(),
            q: field.q(),
            modulus: FqField::render_prime_poly(field.modulus()),
            generator: FqField::render_prime_poly(&field.coeffs(field.generator())),
        },
        extension: ExtensionReport {
            components,
            primes: ext.basis.primes().iter().map(|p| p.to_string()).collect(),
            degree: ext.degree,
            exponent: ext.exponent,
            galois: ext.galois(),
            degenerate: ext.degenerate,
        },
        ramification: RamificationReport {
            finite: ram
                .entries
                .iter()
                .map(|(p, e)| RamifiedPrime {
                    prime: p.to_string(),
                    degree: p.deg() as u64,
                    e: *e,
                })
                .collect(),
            index_product: ram.index_product(),
            infinite: config.include_infinite.then(|| infinite_ramification(&ext)),
        },
        clement: genus_report(field, &clement),
        rarzvi: genus_report(field, &rarzvi),
        comparison: config.include_comparison.then(|| ComparisonSection {
            k_in_rarzvi: comparison.k_in_rarzvi,
            rarzvi_in_clement: comparison.rarzvi_in_clement,
            rarzvi_eq_clement: comparison.rarzvi_eq_clement,
            index_rarzvi_in_clement: comparison.index_rarzvi_in_clement,
            degree_k: comparison.degree_k,
            degree_rarzvi: comparison.degree_rarzvi,
            degree_clement: comparison.degree_clement,
            angjau: "not computable".to_string(),
        }),
        warnings,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        let f = &self.field;
        line(format!(
            "field        F_{} = F_{}[x]/({}), generator {}",
            f.q, f.p, f.modulus, f.generator
        ));
        let e = &self.extension;
        for (i, c) in e.components.iter().enumerate() {
            line(format!(
                "component {:<2} gamma={} D={} m={}  degree {}{}",
                i + 1,
                c.gamma,
                c.radicand,
                c.m,
                c.degree,
                if c.trivial { " (trivial)" } else { "" }
            ));
        }
        line(format!(
            "extension    [K:k] = {}, exponent {}, galois [{}]",
            e.degree,
            e.exponent,
            list(&e.galois)
        ));
        let r = &self.ramification;
        if r.finite.is_empty() {
            line("ramified     none".to_string());
        }
        for p in &r.finite {
            line(format!("ramified     {}  e = {}", p.prime, p.e));
        }
        if let Some(inf) = r.infinite {
            line(format!("infinite     e = {inf}"));
        }
        for (name, g) in [("clement", &self.clement), ("rarzvi", &self.rarzvi)] {
            let rads: Vec<String> = g
                .radicals
                .iter()
                .map(|x| {
                    if x.c == "1" {
                        format!("({})^(1/{})", x.prime, x.e)
                    } else {
                        format!("({}*({}))^(1/{})", x.c, x.prime, x.e)
                    }
                })
                .collect();
            line(format!(
                "{name:<12} constant field degree {}, degree {}, galois [{}]",
                g.constant_degree,
                g.degree,
                list(&g.galois)
            ));
            if !rads.is_empty() {
                line(format!("             radicals {}", rads.join(", ")));
            }
        }
        if let Some(c) = &self.comparison {
            line(format!(
                "comparison   K in rarzvi: {}, rarzvi in clement: {}, equal: {}",
                c.k_in_rarzvi, c.rarzvi_in_clement, c.rarzvi_eq_clement
            ));
            if let Some(i) = c.index_rarzvi_in_clement {
                line(format!("             [clement : rarzvi] = {i}"));
            }
            line(format!("             angjau: {}", c.angjau));
        }
        for w in &self.warnings {
            line(format!("warning      {w}"));
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => self.to_text(),
        }
    }
}
