//! Classification of lattices up to automorphism.
//!
//! The pipeline normalizes a presentation to `⟨Γ_r ∪ {(z₀, ξ₀, 1)}⟩`, checks
//! the angle against `e^B`, moves `(x, y)` into the half fundamental domain
//! and picks the canonical `ξ₀`. Every step produces an explicit isomorphism,
//! and the composite is checked to carry the input lattice onto the standard
//! lattice of the returned data.

pub mod canonical;
pub mod fundamental;
pub mod lattice;
pub mod oracle;
pub mod relations;
pub mod table;

use num_bigint::BigInt;
use num_traits::One;

use crate::automorphism::{conjugating_iso, maps_gamma_onto_gamma, Isomorphism};
use crate::error::{OscError, Result};
use crate::group::{vec_rational, GroupElement, IntMat2, Mat2, Osc, StructureMatrix};
use crate::heisnorm::{normalize, rescale, RawLatticeInput};
use crate::scalar::{AngleSymbol, ExactScalar, Rational};

pub use canonical::{canonical_witness, canonical_xi_constructive};
pub use fundamental::{check_reduction, mobius, reduce_fundamental, Reduction};
pub use lattice::{
    all_cells, check_compatible, lattice_condition, reduce_mod1, Cell, FundamentalPoint,
    LatticeData, LatticeSpec, PointClass, Xi,
};
pub use oracle::{admissible_xi, canonical_xi_oracle, orbit_partition, OrbitPartition};
pub use relations::{olattice_relations, RelationReport, Word};
pub use table::{canonical_table, canonical_table_with, closed_form, TableEntry};

/// Either an already standard lattice or an arbitrary generating set.
#[derive(Debug, Clone)]
pub enum LatticeInput {
    Standard(LatticeSpec),
    Generators(RawLatticeInput),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Cross-check the constructive representative against orbit enumeration
    /// for `r` up to this value.
    pub oracle_cutoff: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { oracle_cutoff: 12 }
    }
}

/// Intermediate values of the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// Generator of the time projection of the input.
    pub t0: Rational,
    /// ξ-basis change found by the Heisenberg reduction, for generator input.
    pub normalization: Option<Mat2>,
    /// Integer conjugator into the fundamental domain.
    pub conjugator: IntMat2,
    /// Whether `B` had to be replaced by `−B` (time reversal).
    pub flip: bool,
    /// `ξ₀` after transport to the fundamental-domain point.
    pub transported_xi: Xi,
    pub oracle_checked: bool,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub data: LatticeData,
    pub trace: Trace,
    /// Isomorphism from the (time-rescaled) input group onto the group of
    /// `data`, carrying the input lattice onto `L(ξ₀)`.
    pub map: Isomorphism,
}

/// Confirms that `λ` is consistent with the integer matrix `e^B`:
/// `det = 1`, `tr = 2cos λ ∈ {−2,…,2}` and the lower-left entry has the sign
/// of `sin λ / y`.
pub fn extract_lambda(e: &IntMat2, structure: &StructureMatrix) -> Result<AngleSymbol> {
    if !e.det().is_one() {
        return Err(OscError::NonLattice(format!(
            "det e^B = {} is not 1",
            e.det()
        )));
    }
    let tr = e.trace();
    if tr < BigInt::from(-2) || tr > BigInt::from(2) {
        return Err(OscError::NonLattice(format!(
            "trace constraint: tr(e^B) = {tr} is not in {{-2, ..., 2}}"
        )));
    }
    let lambda = structure.lambda();
    let (c, s) = lambda.trig();
    if ExactScalar::from_int(2) * c != ExactScalar::from_bigint(tr.clone()) {
        return Err(OscError::NonLattice(format!(
            "trace constraint: tr(e^B) = {tr} differs from 2cos({lambda})"
        )));
    }
    let lower = ExactScalar::from_bigint(e.m[1][0].clone());
    let expected = if structure.y().is_negative() {
        s.sign().flip()
    } else {
        s.sign()
    };
    if lower.sign() != expected {
        return Err(OscError::NonLattice(format!(
            "sign of sin({lambda}) disagrees with e^B = {e}"
        )));
    }
    Ok(lambda)
}

/// The standard spec `⟨Γ_r ∪ {d}⟩` for an element `d` with `t = ±1`, with
/// `ξ` reduced into `[0,1)²` by a translation from Γ_r.
pub fn spec_from_delta(
    r: u64,
    structure: &StructureMatrix,
    d: &GroupElement,
) -> Result<LatticeSpec> {
    let group = Osc::standard(r, structure.clone());
    let d = match d.t {
        1 => d.clone(),
        -1 => group.invert(d),
        t => {
            return Err(OscError::NonLattice(format!(
                "distinguished element has t = {t} instead of 1"
            )))
        }
    };
    let xi = vec_rational(&d.xi)
        .ok_or_else(|| OscError::NonLattice(format!("xi0 of {d} is irrational")))?;
    let n = [xi[0].floor().to_integer(), xi[1].floor().to_integer()];
    let half_r = ExactScalar::from_rational(Rational::new(BigInt::from(r), BigInt::from(2)));
    let shift = GroupElement::new(
        half_r * ExactScalar::from_bigint(&n[0] * &n[1]),
        [
            -ExactScalar::from_bigint(n[0].clone()),
            -ExactScalar::from_bigint(n[1].clone()),
        ],
        0,
    );
    let g = group.multiply(&shift, &d);
    let xi0 = vec_rational(&g.xi).expect("rational");
    Ok(LatticeSpec::new(r, structure.clone(), xi0, g.z))
}

/// Classifies a standard lattice.
pub fn classify_spec(spec: &LatticeSpec, opts: &ClassifyOptions) -> Result<Classification> {
    let r = spec.r;
    let e = spec.validate().map_err(|e| e.at("validate"))?;
    let lambda = extract_lambda(&e, &spec.structure).map_err(|e| e.at("extract_lambda"))?;

    let red = reduce_fundamental(spec.structure.x(), spec.structure.y())
        .map_err(|e| e.at("reduce_fundamental"))?;
    check_compatible(lambda, &red.point).map_err(|e| e.at("reduce_fundamental"))?;

    let transport = || -> Result<(Isomorphism, LatticeSpec)> {
        let mut iso = conjugating_iso(&red.conjugator, r, &spec.structure)?;
        if red.flip {
            iso = Isomorphism::time_reversal(iso.target()).compose(&iso)?;
        }
        let point_structure = red.point.structure(lambda)?;
        if iso.target().structure != point_structure {
            return Err(OscError::Internal(format!(
                "transport lands on {} instead of {point_structure}",
                iso.target().structure
            )));
        }
        if !maps_gamma_onto_gamma(&iso, r)? {
            return Err(OscError::Internal(
                "transport does not preserve Gamma_r".into(),
            ));
        }
        let moved = spec_from_delta(r, &point_structure, &iso.apply(&spec.delta()))?;
        moved.validate()?;
        Ok((iso, moved))
    };
    let (iso, moved) = transport().map_err(|e| e.at("transport"))?;

    let xi0 = canonical_xi_constructive(&moved.xi0, r, lambda, &red.point)
        .map_err(|e| e.at("canonical"))?;
    let oracle_checked = r <= opts.oracle_cutoff;
    if oracle_checked {
        let check = || -> Result<()> {
            let a = canonical_xi_oracle(&moved.xi0, r, &moved.structure)?;
            let b = canonical_xi_oracle(&xi0, r, &moved.structure)?;
            if a != b {
                return Err(OscError::Internal(format!(
                    "constructive representative ({}, {}) is not in the orbit of ({}, {})",
                    xi0[0], xi0[1], moved.xi0[0], moved.xi0[1]
                )));
            }
            Ok(())
        };
        check().map_err(|e| e.at("oracle"))?;
    }
    let witness = canonical_witness(&moved, &xi0).map_err(|e| e.at("canonical"))?;
    let map = witness.compose(&iso).map_err(|e| e.at("canonical"))?;

    let data = LatticeData {
        r,
        lambda,
        point: red.point.clone(),
        xi0,
    };
    let target = data.to_spec()?;
    if !target.contains(&map.apply(&spec.delta())) {
        return Err(OscError::Internal("composite map misses L(xi0)".into()).at("canonical"));
    }
    Ok(Classification {
        data,
        trace: Trace {
            t0: Rational::one(),
            normalization: None,
            conjugator: red.conjugator,
            flip: red.flip,
            transported_xi: moved.xi0,
            oracle_checked,
        },
        map,
    })
}

/// Classifies a lattice given by generators.
pub fn classify_raw(input: &RawLatticeInput, opts: &ClassifyOptions) -> Result<Classification> {
    let n = normalize(input).map_err(|e| e.at("normalize"))?;
    let mut c = classify_spec(&n.spec, opts)?;
    c.map = c.map.compose(&n.map).map_err(|e| e.at("normalize"))?;
    c.trace.t0 = n.result.t0.clone();
    c.trace.normalization = Some(n.result.s.clone());
    let target = c.data.to_spec()?;
    for g in &input.generators {
        let img = c.map.apply(&rescale(g, &c.trace.t0)?);
        if !target.contains(&img) {
            return Err(OscError::Internal(format!(
                "generator image {img} is not in the classified lattice"
            ))
            .at("normalize"));
        }
    }
    Ok(c)
}

pub fn classify(input: &LatticeInput, opts: &ClassifyOptions) -> Result<Classification> {
    match input {
        LatticeInput::Standard(spec) => classify_spec(spec, opts),
        LatticeInput::Generators(raw) => classify_raw(raw, opts),
    }
}

/// `classify_lattice` with default options, returning only the data.
pub fn classify_lattice(input: &LatticeInput) -> Result<LatticeData> {
    classify(input, &ClassifyOptions::default()).map(|c| c.data)
}

/// True iff both lattices have the same canonical data.
pub fn equivalent(a: &LatticeInput, b: &LatticeInput, opts: &ClassifyOptions) -> Result<bool> {
    Ok(classify(a, opts)?.data == classify(b, opts)?.data)
}
