//! Self-checks of the whole library: table regeneration, agreement of the
//! constructive and brute-force canonical forms, randomized invariance and
//! homomorphism trials, and the fixed relation sets.
//!
//! Every check returns a [`CheckOutcome`] instead of panicking so that both
//! the test suite and the command line can report on all of them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::automorphism::{
    conjugating_iso, gamma_coset_base, integer_s_set, is_gamma_preserving, maps_gamma_onto_gamma,
    Automorphism, Isomorphism,
};
use crate::classify::table::ClosedForm;
use crate::classify::{
    admissible_xi, all_cells, canonical_table_with, canonical_xi_constructive, check_reduction,
    classify_spec, closed_form, mobius, olattice_relations, orbit_partition, reduce_fundamental,
    spec_from_delta, Cell, ClassifyOptions, FundamentalPoint, LatticeSpec, PointClass, Word, Xi,
};
use crate::error::{OscError, Result};
use crate::group::{GroupElement, IntMat2, Mat2, Osc, StructureMatrix, SymplecticForm};
use crate::heisnorm::{heisenberg_invariant, normalize, RawElement, RawLatticeInput, RawStructure};
use crate::scalar::{rat, AngleBase, AngleSymbol, ExactScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of cells, trials or relations examined.
    pub count: usize,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, count: usize, failures: Vec<String>) -> CheckOutcome {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{count} checked")
        } else {
            format!(
                "{} of {count} failed; first: {}",
                failures.len(),
                failures[0]
            )
        };
        CheckOutcome {
            name,
            passed,
            count,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub r_max: u64,
    pub oracle_cutoff: u64,
    pub invariance_trials: usize,
    pub homomorphism_trials: usize,
    pub conjugation_trials: usize,
    pub scrambles_per_r: usize,
    pub reduction_trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            r_max: 12,
            oracle_cutoff: 12,
            invariance_trials: 1000,
            homomorphism_trials: 1000,
            conjugation_trials: 200,
            scrambles_per_r: 100,
            reduction_trials: 500,
            seed: 0x05c1_11a7,
        }
    }
}

fn cell_structure(cell: &Cell) -> Result<StructureMatrix> {
    cell.point.structure(cell.lambda)
}

/// Table regeneration over every compatible cell with `r ≤ r_max`, plus the
/// fixed anchors.
pub fn check_table(r_max: u64, closed: &ClosedForm) -> CheckOutcome {
    let mut failures = Vec::new();
    let cells = all_cells(r_max);
    for cell in &cells {
        match canonical_table_with(closed, cell.lambda, &cell.point, cell.r) {
            Ok(entries) => {
                let total: usize = entries.iter().map(|e| e.class_size).sum();
                let expected = match cell_structure(cell).map(|s| s.exp_integer()) {
                    Ok(Some(e)) => admissible_xi(cell.r, &e).len(),
                    _ => usize::MAX,
                };
                if total != expected {
                    failures.push(format!("{cell}: class sizes sum to {total}"));
                }
            }
            Err(e) => failures.push(format!("{cell}: {e}")),
        }
    }
    let mut anchors = 0;
    let mut anchor = |lambda: AngleSymbol, point: FundamentalPoint, r: u64, want: Vec<Xi>| {
        if r > r_max {
            return;
        }
        anchors += 1;
        match canonical_table_with(closed, lambda, &point, r) {
            Ok(entries) => {
                let have: Vec<Xi> = entries.into_iter().map(|e| e.xi0).collect();
                if have != want {
                    failures.push(format!("anchor {lambda} {point} r={r}: got {have:?}"));
                }
            }
            Err(e) => failures.push(format!("anchor {lambda} {point} r={r}: {e}")),
        }
    };
    let z = || rat(0, 1);
    let quarter = AngleSymbol::new(AngleBase::PiHalf, 0);
    for r in [2u64, 4, 6] {
        anchor(
            quarter,
            FundamentalPoint::square(),
            r,
            vec![[z(), z()], [z(), rat(1, r as i64)]],
        );
    }
    for r in [1u64, 3, 5] {
        anchor(
            AngleSymbol::new(AngleBase::PiThird, 0),
            FundamentalPoint::hexagonal(),
            r,
            vec![[rat(1, 2 * r as i64), z()]],
        );
    }
    for r in [6u64, 12] {
        anchor(
            AngleSymbol::new(AngleBase::TwoPiThird, 0),
            FundamentalPoint::hexagonal(),
            r,
            vec![[z(), z()], [rat(1, r as i64), z()]],
        );
    }
    let mut count_anchor = |lambda: AngleSymbol, class: PointClass, r: u64, n: usize| {
        if r > r_max {
            return;
        }
        anchors += 1;
        match canonical_table_with(closed, lambda, &class.sample(), r) {
            Ok(entries) if entries.len() == n => {}
            Ok(entries) => failures.push(format!(
                "anchor {lambda} {class} r={r}: {} classes instead of {n}",
                entries.len()
            )),
            Err(e) => failures.push(format!("anchor {lambda} {class} r={r}: {e}")),
        }
    };
    count_anchor(
        AngleSymbol::new(AngleBase::Pi, 0),
        PointClass::Interior,
        2,
        4,
    );
    count_anchor(
        AngleSymbol::new(AngleBase::Pi, 0),
        PointClass::Interior,
        4,
        4,
    );
    count_anchor(AngleSymbol::new(AngleBase::Pi, 1), PointClass::Square, 4, 6);
    CheckOutcome::new("table regeneration", cells.len() + anchors, failures)
}

/// Partition of the admissible set by a representative function.
fn partition_by<F>(points: &[Xi], mut rep: F) -> Result<BTreeSet<BTreeSet<Xi>>>
where
    F: FnMut(&Xi) -> Result<Xi>,
{
    let mut groups: BTreeMap<Xi, BTreeSet<Xi>> = BTreeMap::new();
    for p in points {
        groups.entry(rep(p)?).or_default().insert(p.clone());
    }
    Ok(groups.into_values().collect())
}

/// The constructive representatives and the orbit enumeration partition
/// every admissible set identically.
pub fn check_partition_agreement(r_max: u64) -> CheckOutcome {
    let mut failures = Vec::new();
    let cells = all_cells(r_max);
    for cell in &cells {
        let res = (|| -> Result<bool> {
            let structure = cell_structure(cell)?;
            let part = orbit_partition(cell.r, &structure)?;
            let oracle: BTreeSet<BTreeSet<Xi>> = part
                .classes
                .iter()
                .map(|c| c.iter().map(|&i| part.points[i].clone()).collect())
                .collect();
            let constructive = partition_by(&part.points, |xi| {
                canonical_xi_constructive(xi, cell.r, cell.lambda, &cell.point)
            })?;
            Ok(oracle == constructive)
        })();
        match res {
            Ok(true) => {}
            Ok(false) => failures.push(format!("{cell}: partitions differ")),
            Err(e) => failures.push(format!("{cell}: {e}")),
        }
    }
    CheckOutcome::new("constructive/oracle agreement", cells.len(), failures)
}

fn small_rational(rng: &mut StdRng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// A random Γ_r-preserving automorphism: random `S` from the integer set,
/// random `b` in the allowed coset (with an integer translate) and random `m`.
pub fn random_gamma_automorphism(
    rng: &mut StdRng,
    structure: &StructureMatrix,
    r: u64,
) -> Result<Automorphism> {
    let group = Osc::standard(r, structure.clone());
    let set = integer_s_set(structure);
    let (s, mu) = set
        .choose(rng)
        .cloned()
        .ok_or_else(|| OscError::Internal("empty S set".into()))?;
    let base = gamma_coset_base(&s, r);
    let ri = r as i64;
    let b = [
        ExactScalar::from_rational(&base[0] + rat(rng.gen_range(-2 * ri..3 * ri), ri)),
        ExactScalar::from_rational(&base[1] + rat(rng.gen_range(-2 * ri..3 * ri), ri)),
    ];
    let m = ExactScalar::from_rational(small_rational(rng, 20, 7));
    Isomorphism::automorphism(
        &group,
        mu,
        ExactScalar::from_int(mu as i64),
        m,
        b,
        s.to_mat2(),
    )
}

fn random_admissible(rng: &mut StdRng, structure: &StructureMatrix, r: u64) -> Result<Xi> {
    let e = structure
        .exp_integer()
        .ok_or_else(|| OscError::Internal("cell with non-integer e^B".into()))?;
    admissible_xi(r, &e)
        .choose(rng)
        .cloned()
        .ok_or_else(|| OscError::Internal("empty admissible set".into()))
}

/// Classification is unchanged by random Γ_r-preserving automorphisms.
pub fn check_invariance(trials: usize, r_max: u64, oracle_cutoff: u64, seed: u64) -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let cells = all_cells(r_max);
    let opts = ClassifyOptions { oracle_cutoff };
    let mut failures = Vec::new();
    for trial in 0..trials {
        let cell = cells.choose(&mut rng).expect("cells nonempty").clone();
        let res = (|| -> Result<()> {
            let structure = cell_structure(&cell)?;
            let xi = random_admissible(&mut rng, &structure, cell.r)?;
            let z0 = ExactScalar::from_rational(small_rational(&mut rng, 10, 5));
            let spec = LatticeSpec::new(cell.r, structure.clone(), xi, z0);
            let phi = random_gamma_automorphism(&mut rng, &structure, cell.r)?;
            if !is_gamma_preserving(&phi, cell.r) {
                return Err(OscError::Internal(
                    "generated automorphism is not Gamma_r-preserving".into(),
                ));
            }
            let moved = spec_from_delta(cell.r, &structure, &phi.apply(&spec.delta()))?;
            let before = classify_spec(&spec, &opts)?.data;
            let after = classify_spec(&moved, &opts)?.data;
            if before != after {
                return Err(OscError::Internal(format!("{before} became {after}")));
            }
            Ok(())
        })();
        if let Err(e) = res {
            failures.push(format!("trial {trial} ({cell}): {e}"));
        }
    }
    CheckOutcome::new("automorphism invariance", trials, failures)
}

fn random_structure(rng: &mut StdRng) -> Result<StructureMatrix> {
    let base = *AngleBase::ALL.choose(rng).expect("nonempty");
    let lambda = AngleSymbol::new(base, rng.gen_range(0..4));
    let (x, y) = match rng.gen_range(0..3) {
        0 => {
            let p = FundamentalPoint::hexagonal();
            (p.x().clone(), p.y().clone())
        }
        _ => {
            let x = small_rational(rng, 9, 4);
            let mut y = small_rational(rng, 9, 4);
            if y == rat(0, 1) {
                y = rat(1, 3);
            }
            (ExactScalar::from_rational(x), ExactScalar::from_rational(y))
        }
    };
    StructureMatrix::new(lambda, x, y)
}

fn random_element(rng: &mut StdRng) -> GroupElement {
    let mut q = || ExactScalar::from_rational(small_rational(rng, 12, 6));
    let z = q() + q() * ExactScalar::sqrt_of(3).expect("3 is square-free");
    let xi = [q(), q()];
    GroupElement::new(z, xi, rng.gen_range(-4..=4))
}

/// `S = (pI + qB)` or `(pI + qB)·J` with `J` anticommuting with `B`; any
/// nonzero rational `p, q` give an automorphism for `a = det S`.
fn random_automorphism(rng: &mut StdRng) -> Result<Automorphism> {
    let structure = random_structure(rng)?;
    let kappa = rat(rng.gen_range(1..=7), rng.gen_range(1..=3));
    let group = Osc::new(SymplecticForm::scaled(kappa)?, structure.clone());
    let (p, q) = loop {
        let p = small_rational(rng, 5, 3);
        let q = small_rational(rng, 5, 3);
        if p != rat(0, 1) || q != rat(0, 1) {
            break (p, q);
        }
    };
    let rot = Mat2::scalar(ExactScalar::from_rational(p))
        .add(&structure.bxy().scale(&ExactScalar::from_rational(q)));
    let (s, mu) = if rng.gen_bool(0.5) {
        (rot, 1)
    } else {
        let j = Mat2::new(
            ExactScalar::one(),
            ExactScalar::from_int(-2) * structure.x(),
            ExactScalar::zero(),
            ExactScalar::from_int(-1),
        );
        (rot.mul(&j), -1)
    };
    let b = [
        ExactScalar::from_rational(small_rational(rng, 9, 5)),
        ExactScalar::from_rational(small_rational(rng, 9, 5)),
    ];
    let m = ExactScalar::from_rational(small_rational(rng, 9, 5));
    Isomorphism::automorphism(&group, mu, s.det(), m, b, s)
}

/// `φ(gh) = φ(g)φ(h)` for random automorphisms, including non-integer `S`.
pub fn check_homomorphism(trials: usize, seed: u64) -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let res = (|| -> Result<()> {
            let phi = random_automorphism(&mut rng)?;
            let group = phi.source().clone();
            let g = random_element(&mut rng);
            let h = random_element(&mut rng);
            let lhs = phi.apply(&group.multiply(&g, &h));
            let rhs = group.multiply(&phi.apply(&g), &phi.apply(&h));
            if lhs != rhs {
                return Err(OscError::Internal(format!(
                    "phi(gh) = {lhs} but phi(g)phi(h) = {rhs}"
                )));
            }
            Ok(())
        })();
        if let Err(e) = res {
            failures.push(format!("trial {trial}: {e}"));
        }
    }
    CheckOutcome::new("homomorphism property", trials, failures)
}

/// A random word of length at most `max_len` in `T`, `T⁻¹` and `S`.
pub fn random_sl2z(rng: &mut StdRng, max_len: usize) -> IntMat2 {
    let gens = [
        IntMat2::from_i64(1, 1, 0, 1),
        IntMat2::from_i64(1, -1, 0, 1),
        IntMat2::from_i64(0, -1, 1, 0),
    ];
    let len = rng.gen_range(0..=max_len);
    let mut m = IntMat2::identity();
    for _ in 0..len {
        m = m.mul(gens.choose(rng).expect("nonempty"));
    }
    m
}

/// Integer conjugation isomorphisms map Γ_r onto Γ_r and keep `t = 1`.
pub fn check_conjugating_iso(trials: usize, seed: u64) -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut count = 0;
    for trial in 0..trials {
        let s = random_sl2z(&mut rng, 8);
        // occasionally a determinant −1 conjugator
        let s = if rng.gen_bool(0.25) {
            s.mul(&IntMat2::from_i64(1, 0, 0, -1))
        } else {
            s
        };
        for r in 1..=4u64 {
            count += 1;
            let res = (|| -> Result<()> {
                let structure = random_structure(&mut rng)?;
                let iso = conjugating_iso(&s, r, &structure)?;
                if !maps_gamma_onto_gamma(&iso, r)? {
                    return Err(OscError::Internal(format!(
                        "conjugator {s} does not preserve Gamma_{r}"
                    )));
                }
                let one = iso.apply(&GroupElement::new(
                    ExactScalar::zero(),
                    crate::group::zero_vec(),
                    1,
                ));
                if one.t != 1 {
                    return Err(OscError::Internal(format!("(0,0,1) maps to {one}")));
                }
                Ok(())
            })();
            if let Err(e) = res {
                failures.push(format!("trial {trial}, r={r}: {e}"));
            }
        }
    }
    CheckOutcome::new("integer conjugation", count, failures)
}

/// Admissible angles give `tr e^B = 2cos λ`; inadmissible ones are rejected
/// with the trace constraint named.
pub fn check_trace_constraint() -> CheckOutcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for base in AngleBase::ALL {
        for k in 0..4 {
            let lambda = AngleSymbol::new(base, k);
            let point = match crate::classify::lattice::required_point(lambda) {
                Some(p) => p,
                None => PointClass::Interior.sample(),
            };
            count += 1;
            let Ok(structure) = point.structure(lambda) else {
                failures.push(format!("{lambda}: structure rejected"));
                continue;
            };
            let e = structure.exp(1);
            let (c, _) = lambda.trig();
            if e.trace() != ExactScalar::from_int(2) * c {
                failures.push(format!("{lambda}: trace {} differs from 2cos", e.trace()));
            }
            if e.to_int().is_none() {
                failures.push(format!("{lambda}: e^B is not integral"));
            }
        }
    }
    for (num, den) in [
        (1, 4),
        (1, 5),
        (1, 6),
        (2, 5),
        (3, 4),
        (5, 6),
        (1, 7),
        (-1, 4),
    ] {
        count += 1;
        let input = RawLatticeInput {
            generators: vec![
                RawElement::new(ExactScalar::one(), [rat(0, 1), rat(0, 1)], rat(0, 1)),
                RawElement::new(ExactScalar::zero(), [rat(1, 1), rat(0, 1)], rat(0, 1)),
                RawElement::new(ExactScalar::zero(), [rat(0, 1), rat(1, 1)], rat(0, 1)),
                RawElement::new(ExactScalar::zero(), [rat(0, 1), rat(0, 1)], rat(1, 1)),
            ],
            form_scale: rat(1, 1),
            structure: RawStructure {
                lambda_over_pi: rat(num, den),
                x: ExactScalar::zero(),
                y: ExactScalar::one(),
            },
        };
        match normalize(&input) {
            Ok(_) => failures.push(format!("lambda = {num}pi/{den} was accepted")),
            Err(e) if e.to_string().contains("trace constraint") && e.is_rejection() => {}
            Err(e) => failures.push(format!("lambda = {num}pi/{den}: wrong error {e}")),
        }
    }
    // An admissible angle at a point that makes e^B non-integral.
    count += 1;
    let bad = FundamentalPoint::square().structure(AngleSymbol::new(AngleBase::PiThird, 0));
    match bad.map(|s| LatticeSpec::new(1, s, [rat(0, 1), rat(0, 1)], ExactScalar::zero())) {
        Ok(spec) => match classify_spec(&spec, &ClassifyOptions::default()) {
            Ok(_) => failures.push("pi/3 at (0,1) was accepted".into()),
            Err(e) if e.is_rejection() && e.to_string().contains("point constraint") => {}
            Err(e) => failures.push(format!("pi/3 at (0,1): wrong error {e}")),
        },
        Err(e) => failures.push(format!("pi/3 at (0,1): {e}")),
    }
    CheckOutcome::new("trace constraint", count, failures)
}

fn raw(z: &ExactScalar, xi: &[ExactScalar; 2]) -> RawElement {
    RawElement::new(
        z.clone(),
        [
            xi[0].as_rational().expect("rational").clone(),
            xi[1].as_rational().expect("rational").clone(),
        ],
        rat(0, 1),
    )
}

/// The Heisenberg invariant survives unimodular substitutions and mixing of
/// the generators of Γ_r.
pub fn check_heisenberg(r_max: u64, scrambles: usize, seed: u64) -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut count = 0;
    for r in 1..=r_max {
        let group = Osc::standard(
            r,
            FundamentalPoint::square()
                .structure(AngleSymbol::new(AngleBase::PiHalf, 0))
                .expect("valid"),
        );
        let form_scale = rat(r as i64, 1);
        for trial in 0..scrambles {
            count += 1;
            let mut gens: Vec<GroupElement> = crate::automorphism::gamma_generators().to_vec();
            // Unimodular substitution of the ξ-basis: replace α, β by words
            // α^a β^b, α^c β^d with ad − bc = ±1.
            let u = random_sl2z(&mut rng, 6);
            let to_i = |v: &BigInt| i64::try_from(v).unwrap_or(0);
            let word =
                |p: i64, q: i64| group.multiply(&group.pow(&gens[1], p), &group.pow(&gens[2], q));
            let (a, b, c, d) = (
                to_i(&u.m[0][0]),
                to_i(&u.m[0][1]),
                to_i(&u.m[1][0]),
                to_i(&u.m[1][1]),
            );
            let (na, nb) = (word(a, b), word(c, d));
            gens[1] = na;
            gens[2] = nb;
            // Generator mixing: g_i ← g_i · g_j^{±1}, swaps and redundant products.
            for _ in 0..rng.gen_range(0..8) {
                let i = rng.gen_range(0..gens.len());
                let j = rng.gen_range(0..gens.len());
                if i == j {
                    continue;
                }
                match rng.gen_range(0..3) {
                    0 => gens[i] = group.multiply(&gens[i], &gens[j]),
                    1 => gens[i] = group.multiply(&gens[i], &group.invert(&gens[j])),
                    _ => gens.swap(i, j),
                }
            }
            if rng.gen_bool(0.5) {
                let extra = group.multiply(&gens[0], &gens[gens.len() - 1]);
                gens.push(extra);
            }
            gens.shuffle(&mut rng);
            let raws: Vec<RawElement> = gens.iter().map(|g| raw(&g.z, &g.xi)).collect();
            match heisenberg_invariant(&form_scale, &raws) {
                Ok(got) if got == r => {}
                Ok(got) => failures.push(format!("r={r} trial {trial}: recovered {got}")),
                Err(e) => failures.push(format!("r={r} trial {trial}: {e}")),
            }
        }
    }
    CheckOutcome::new("Heisenberg invariant", count, failures)
}

fn random_fundamental_point(rng: &mut StdRng) -> FundamentalPoint {
    match rng.gen_range(0..8) {
        0 => FundamentalPoint::hexagonal(),
        1 => FundamentalPoint::square(),
        2 => PointClass::Arc.sample(),
        _ => {
            let x = match rng.gen_range(0..4) {
                0 => rat(0, 1),
                1 => rat(1, 2),
                _ => {
                    let d = rng.gen_range(2..12);
                    rat(rng.gen_range(0..=d / 2), d)
                }
            };
            let d = rng.gen_range(1..8);
            let y = rat(rng.gen_range(d..=4 * d), d);
            let (x, y) = (ExactScalar::from_rational(x), ExactScalar::from_rational(y));
            FundamentalPoint::new(x, y).unwrap_or_else(|_| FundamentalPoint::square())
        }
    }
}

/// Random `SL(2,Z)`-conjugates of points of the half fundamental domain
/// reduce back to the same point.
pub fn check_fundamental(trials: usize, seed: u64) -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let point = random_fundamental_point(&mut rng);
        let w = random_sl2z(&mut rng, 10);
        let (x, mut y) = mobius(&w, point.x(), point.y());
        if rng.gen_bool(0.3) {
            y = -y;
        }
        match reduce_fundamental(&x, &y) {
            Ok(red) => {
                if red.point != point {
                    failures.push(format!(
                        "trial {trial}: {point} via {w} reduced to {}",
                        red.point
                    ));
                } else if !check_reduction(&x, &y, &red).unwrap_or(false) {
                    failures.push(format!("trial {trial}: conjugator identity fails"));
                }
            }
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    CheckOutcome::new("fundamental domain", trials, failures)
}

/// One expected relation set: `δαδ⁻¹` and `δβδ⁻¹` as words.
struct ExpectedRelations {
    label: String,
    spec: LatticeSpec,
    alpha: Word,
    beta: Word,
}

fn relation_cases() -> Result<Vec<ExpectedRelations>> {
    let mut out = Vec::new();
    let quarter = FundamentalPoint::square().structure(AngleSymbol::new(AngleBase::PiHalf, 0))?;
    let third =
        FundamentalPoint::hexagonal().structure(AngleSymbol::new(AngleBase::TwoPiThird, 0))?;
    let z = || rat(0, 1);
    for r in [2i64, 4, 6, 8] {
        out.push(ExpectedRelations {
            label: format!("pi/2, r={r}, delta0"),
            spec: LatticeSpec::new(r as u64, quarter.clone(), [z(), z()], ExactScalar::zero()),
            alpha: Word::new(0, 1, 0),
            beta: Word::new(-1, 0, 0),
        });
        out.push(ExpectedRelations {
            label: format!("pi/2, r={r}, delta1"),
            spec: LatticeSpec::new(
                r as u64,
                quarter.clone(),
                [rat(1, r), z()],
                ExactScalar::zero(),
            ),
            alpha: Word::new(0, 1, 1),
            beta: Word::new(-1, 0, 0),
        });
    }
    for r in [6i64, 12, 18] {
        out.push(ExpectedRelations {
            label: format!("2pi/3, r={r}, delta0"),
            spec: LatticeSpec::new(r as u64, third.clone(), [z(), z()], ExactScalar::zero()),
            alpha: Word::new(0, 1, 0),
            beta: Word::new(-1, -1, -r / 2),
        });
        out.push(ExpectedRelations {
            label: format!("2pi/3, r={r}, delta1"),
            spec: LatticeSpec::new(
                r as u64,
                third.clone(),
                [rat(1, r), z()],
                ExactScalar::zero(),
            ),
            alpha: Word::new(0, 1, 1),
            beta: Word::new(-1, -1, -r / 2 - 1),
        });
    }
    Ok(out)
}

/// The relation sets of the quarter-turn and third-turn lattices.
pub fn check_relations() -> CheckOutcome {
    let mut failures = Vec::new();
    let cases = match relation_cases() {
        Ok(c) => c,
        Err(e) => return CheckOutcome::new("lattice relations", 0, vec![e.to_string()]),
    };
    for case in &cases {
        match olattice_relations(&case.spec) {
            Ok(rep) => {
                if rep.commutator_exponent != BigInt::from(case.spec.r) {
                    failures.push(format!(
                        "{}: commutator gamma^{}",
                        case.label, rep.commutator_exponent
                    ));
                }
                if rep.delta_alpha != case.alpha || rep.delta_beta != case.beta {
                    failures.push(format!(
                        "{}: got d a d^-1 = {}, d b d^-1 = {}",
                        case.label, rep.delta_alpha, rep.delta_beta
                    ));
                }
                if rep.central_power.is_none() {
                    failures.push(format!("{}: no central power of delta", case.label));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", case.label)),
        }
    }
    CheckOutcome::new("lattice relations", cases.len(), failures)
}

/// All checks in order, with the table checked against `closed`.
pub fn run_all_with(config: &VerifyConfig, closed: &ClosedForm) -> Vec<CheckOutcome> {
    let r_small = config.r_max.min(6).max(1);
    vec![
        check_table(config.r_max, closed),
        check_partition_agreement(config.r_max),
        check_invariance(
            config.invariance_trials,
            config.r_max,
            config.oracle_cutoff,
            config.seed,
        ),
        check_homomorphism(config.homomorphism_trials, config.seed.wrapping_add(1)),
        check_conjugating_iso(config.conjugation_trials, config.seed.wrapping_add(2)),
        check_trace_constraint(),
        check_heisenberg(r_small, config.scrambles_per_r, config.seed.wrapping_add(3)),
        check_fundamental(config.reduction_trials, config.seed.wrapping_add(4)),
        check_relations(),
    ]
}

pub fn run_all(config: &VerifyConfig) -> Vec<CheckOutcome> {
    run_all_with(config, &closed_form)
}
