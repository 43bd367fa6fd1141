//! Characteristic functions, ζ-scalar determination, and the packaged
//! Sp₄(𝔽₂) end-to-end verification.
//!
//! The pipeline evaluates an almost character R (built from the family data
//! in [`crate::families`]) on a designated conjugacy class of an ingested or
//! computed table, compares it with the characteristic function
//! χ_{g₁,λ}(g_a) = q^{(dim G − dim C)/2}·λ(a) supported on the rational
//! classes inside one geometric class C, and solves
//! R = (−1)^{dim C}·ζ·χ_{g₁,λ} for the unit scalar ζ.  The scalar for
//! G(q^m) is ζ^m, so a base-case computation at q = p settles every q = pᶠ.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::chartab::{self, CharacterTable, ChartabError};
use crate::chevalley::{self, ChevalleyError, LieType};
use crate::ctabio::{document_from_table, validate_ctab, CTabDocument, CtabError};
use crate::cyclotomic::Cyc;
use crate::families::{self, FamiliesError, FamilyType};
use crate::gf2group::{GroupError, GroupHandle, MatrixGF2};

/// Errors from the verification pipeline.
#[derive(Debug, Error)]
pub enum VerifyError {
    /// A pipeline stage assertion failed.
    #[error("stage {stage}: {msg}")]
    Stage {
        /// Short stage name.
        stage: String,
        /// Diagnostic.
        msg: String,
    },
    /// No table row (or too many) matches a family character.
    #[error("character {name} (degree {degree}) matches no table row; degrees present include {sample:?}")]
    UnmatchedCharacter {
        /// Family character name.
        name: String,
        /// Required degree.
        degree: String,
        /// Sample of degrees available in the table.
        sample: Vec<String>,
    },
    /// An ambiguity group enters a combination with unequal coefficients
    /// and the possible matchings disagree where it matters.
    #[error("ambiguity group {names:?} has unequal coefficients and its matchings disagree on the target class")]
    AmbiguityAsymmetric {
        /// Names of the group members.
        names: Vec<String>,
    },
    /// A referenced class is missing from the table.
    #[error("class {0} not found in the table")]
    ClassNotFound(String),
    /// The characteristic function vanishes on the designated class.
    #[error("characteristic function vanishes on class {0}")]
    ZeroCharFnValue(String),
    /// The solved scalar is not a root of unity.
    #[error("scalar {0} is not of absolute value 1 (ζ·conj(ζ) ≠ 1)")]
    ScalarNotUnit(String),
    /// The almost character vanishes where the characteristic function does
    /// not — the designated class is mismatched.
    #[error(
        "almost character vanishes on class {class} where the characteristic function is {chi}"
    )]
    MismatchedValue {
        /// Designated class name.
        class: String,
        /// Characteristic-function value there.
        chi: String,
    },
    /// Interchange-format failure.
    #[error(transparent)]
    Ctab(#[from] CtabError),
    /// Character-table computation failure.
    #[error(transparent)]
    Chartab(#[from] ChartabError),
    /// Group-computation failure.
    #[error(transparent)]
    Group(#[from] GroupError),
    /// Family-data failure.
    #[error(transparent)]
    Families(#[from] FamiliesError),
    /// Generator-construction failure.
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
}

fn stage(stage: &str, msg: impl Into<String>) -> VerifyError {
    VerifyError::Stage {
        stage: stage.to_string(),
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// Characteristic functions.

/// Data determining a characteristic function χ_{g₁,λ}: the class function
/// supported on the rational classes inside one geometric class C, with
/// value q^{(dim G − dim C)/2}·λ(a) on the class indexed by a ∈ A(g₁).
#[derive(Debug, Clone)]
pub struct CharFnSpec {
    /// The prime power q of G(𝔽_q).
    pub q: u64,
    /// dim G.
    pub dim_g: u32,
    /// Dimension of the class C of g₁.
    pub dim_c: u32,
    /// Character table of the component group A(g₁).
    pub component: CharacterTable,
    /// Row index of the chosen linear character λ in `component`.
    pub lambda: usize,
    /// Support: (class index a in `component`, target class name of g_a).
    pub support: Vec<(usize, String)>,
}

impl CharFnSpec {
    /// Checks the structural invariants: q ≥ 2 a prime power, dim G ≥ dim C
    /// with even difference, λ linear, support indices valid and distinct,
    /// one support entry per class of A(g₁).
    ///
    /// # Errors
    /// [`VerifyError::Stage`] naming the violated invariant.
    pub fn validate(&self) -> Result<(), VerifyError> {
        if !is_prime_power(self.q) {
            return Err(stage(
                "spec",
                format!("q = {} is not a prime power", self.q),
            ));
        }
        if self.dim_g < self.dim_c || (self.dim_g - self.dim_c) % 2 != 0 {
            return Err(stage(
                "spec",
                format!(
                    "dim G − dim C = {} − {} must be even and non-negative",
                    self.dim_g, self.dim_c
                ),
            ));
        }
        let k = self.component.class_count();
        if self.lambda >= k {
            return Err(stage(
                "spec",
                format!("λ index {} out of range", self.lambda),
            ));
        }
        if self.component.degree(self.lambda) != BigInt::one() {
            return Err(stage(
                "spec",
                format!(
                    "λ must be linear, row {} has degree {}",
                    self.lambda,
                    self.component.degree(self.lambda)
                ),
            ));
        }
        if self.support.len() != k {
            return Err(stage(
                "spec",
                format!(
                    "support lists {} classes, A(g₁) has {}",
                    self.support.len(),
                    k
                ),
            ));
        }
        let mut seen_a = vec![false; k];
        let mut seen_names = Vec::new();
        for (a, name) in &self.support {
            if *a >= k || seen_a[*a] {
                return Err(stage(
                    "spec",
                    format!("support index {a} out of range or repeated"),
                ));
            }
            seen_a[*a] = true;
            if seen_names.contains(name) {
                return Err(stage("spec", format!("support class {name} repeated")));
            }
            seen_names.push(name.clone());
        }
        Ok(())
    }

    /// The integer q^{(dim G − dim C)/2}.
    pub fn q_power(&self) -> BigInt {
        BigInt::from(self.q).pow((self.dim_g - self.dim_c) / 2)
    }

    /// The sign (−1)^{dim C}.
    pub fn sign(&self) -> i8 {
        if self.dim_c % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// λ(a) for a class index of the component group.
    pub fn lambda_value(&self, a: usize) -> &Cyc {
        &self.component.irreducibles[self.lambda][a]
    }
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut m = q;
    let mut p = 0u64;
    for cand in 2..=q {
        if cand * cand > q {
            break;
        }
        if m % cand == 0 {
            p = cand;
            break;
        }
    }
    if p == 0 {
        return true; // q itself is prime
    }
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Evaluates the characteristic function over the classes of `doc`: the
/// value on the support class of g_a is q^{(dim G − dim C)/2}·λ(a), and the
/// function vanishes on every other class.
///
/// # Errors
/// Spec-invariant violations and [`VerifyError::ClassNotFound`] when a
/// support class name is absent from the table.
pub fn characteristic_function(
    spec: &CharFnSpec,
    doc: &CTabDocument,
) -> Result<Vec<Cyc>, VerifyError> {
    spec.validate()?;
    let qp = Cyc::from_bigint(spec.q_power());
    let mut out = vec![Cyc::zero(); doc.class_count()];
    let mut used = vec![false; doc.class_count()];
    for (a, name) in &spec.support {
        let idx = doc
            .class_index(name)
            .ok_or_else(|| VerifyError::ClassNotFound(name.clone()))?;
        if used[idx] {
            return Err(stage("support", format!("class {name} used twice")));
        }
        used[idx] = true;
        out[idx] = &qp * spec.lambda_value(*a);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Almost-character evaluation on a table.

/// How a family character name is matched to rows of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowMatch {
    /// The character is one specific row.
    Unique(usize),
    /// The character is one member of an ambiguity group of rows.
    Group(Vec<usize>),
}

/// All evaluations of an almost-character combination over a table, one per
/// admissible assignment of ambiguity-group members to rows.  Entries
/// matched by [`RowMatch::Unique`] contribute identically to every
/// assignment; all assignments of each ambiguity group to its entries are
/// enumerated (injectively), groups independently.
///
/// # Errors
/// [`VerifyError::UnmatchedCharacter`] when a combination entry has no
/// match, [`VerifyError::Stage`] when a group is smaller than the entries
/// pointing at it or when the assignment count explodes.
pub fn almost_character_matchings(
    doc: &CTabDocument,
    matching: &[(String, RowMatch)],
    row: &[(String, Cyc)],
) -> Result<Vec<Vec<Cyc>>, VerifyError> {
    let lookup: BTreeMap<&str, &RowMatch> = matching.iter().map(|(n, m)| (n.as_str(), m)).collect();
    let mut fixed: Vec<(usize, Cyc)> = Vec::new();
    let mut groups: BTreeMap<Vec<usize>, Vec<(String, Cyc)>> = BTreeMap::new();
    for (name, coeff) in row {
        match lookup.get(name.as_str()) {
            None => {
                return Err(VerifyError::UnmatchedCharacter {
                    name: name.clone(),
                    degree: "?".to_string(),
                    sample: Vec::new(),
                })
            }
            Some(RowMatch::Unique(i)) => fixed.push((*i, coeff.clone())),
            Some(RowMatch::Group(g)) => {
                let mut key = g.clone();
                key.sort_unstable();
                groups
                    .entry(key)
                    .or_default()
                    .push((name.clone(), coeff.clone()));
            }
        }
    }

    // Per group, all injective assignments of rows to entries.
    let mut group_choices: Vec<(Vec<Cyc>, Vec<Vec<usize>>)> = Vec::new();
    let mut total = 1usize;
    for (rows, entries) in &groups {
        if entries.len() > rows.len() {
            return Err(stage(
                "matching",
                format!(
                    "{} characters point at an ambiguity group of {} rows",
                    entries.len(),
                    rows.len()
                ),
            ));
        }
        let arrangements = injective_assignments(rows, entries.len());
        total = total.saturating_mul(arrangements.len());
        if total > 64 {
            return Err(stage(
                "matching",
                "too many ambiguity assignments to enumerate",
            ));
        }
        let coeffs = entries.iter().map(|(_, c)| c.clone()).collect();
        group_choices.push((coeffs, arrangements));
    }

    let k = doc.class_count();
    let base: Vec<Cyc> = (0..k)
        .map(|j| {
            let mut v = Cyc::zero();
            for (i, c) in &fixed {
                v = &v + &(c * &doc.matrix[*i][j]);
            }
            v
        })
        .collect();

    let mut out = Vec::new();
    let mut pick = vec![0usize; group_choices.len()];
    loop {
        let mut values = base.clone();
        for (gi, (coeffs, arrangements)) in group_choices.iter().enumerate() {
            for (c, &row_idx) in coeffs.iter().zip(&arrangements[pick[gi]]) {
                for (j, value) in values.iter_mut().enumerate() {
                    *value = &*value + &(c * &doc.matrix[row_idx][j]);
                }
            }
        }
        out.push(values);
        // Odometer over the assignment choices.
        let mut gi = 0;
        loop {
            if gi == group_choices.len() {
                return Ok(out);
            }
            pick[gi] += 1;
            if pick[gi] < group_choices[gi].1.len() {
                break;
            }
            pick[gi] = 0;
            gi += 1;
        }
    }
}

/// Evaluates an almost-character combination as a single class function.
/// Every ambiguity group must enter with equal coefficients (so the result
/// is assignment-independent); use [`almost_character_matchings`] to probe
/// asymmetric combinations.
///
/// # Errors
/// [`VerifyError::AmbiguityAsymmetric`] when a group's coefficients are
/// unequal; matching errors as in [`almost_character_matchings`].
pub fn almost_character_values(
    doc: &CTabDocument,
    matching: &[(String, RowMatch)],
    row: &[(String, Cyc)],
) -> Result<Vec<Cyc>, VerifyError> {
    let lookup: BTreeMap<&str, &RowMatch> = matching.iter().map(|(n, m)| (n.as_str(), m)).collect();
    let mut by_group: BTreeMap<Vec<usize>, Vec<(String, Cyc)>> = BTreeMap::new();
    for (name, coeff) in row {
        if let Some(RowMatch::Group(g)) = lookup.get(name.as_str()) {
            let mut key = g.clone();
            key.sort_unstable();
            by_group
                .entry(key)
                .or_default()
                .push((name.clone(), coeff.clone()));
        }
    }
    for entries in by_group.values() {
        let first = &entries[0].1;
        if entries.iter().any(|(_, c)| c != first) {
            return Err(VerifyError::AmbiguityAsymmetric {
                names: entries.iter().map(|(n, _)| n.clone()).collect(),
            });
        }
    }
    let mut all = almost_character_matchings(doc, matching, row)?;
    Ok(all.swap_remove(0))
}

/// All injective length-`k` sequences from `items`.
fn injective_assignments(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(
        items: &[usize],
        k: usize,
        cur: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for (i, &item) in items.iter().enumerate() {
            if !used[i] {
                used[i] = true;
                cur.push(item);
                rec(items, k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(
        items,
        k,
        &mut Vec::new(),
        &mut vec![false; items.len()],
        &mut out,
    );
    out
}

/// The hermitian scalar product ⟨f, h⟩ = |G|⁻¹·Σ_j |class_j|·f_j·conj(h_j)
/// over the classes of `doc`.
pub fn scalar_product(doc: &CTabDocument, f: &[Cyc], h: &[Cyc]) -> Cyc {
    let mut sum = Cyc::zero();
    for j in 0..doc.class_count() {
        let w = Cyc::from_bigint(BigInt::from(doc.classes[j].size.clone()));
        sum = &sum + &(&w * &(&f[j] * &h[j].conjugate()));
    }
    sum.scale(&BigRational::new(
        BigInt::one(),
        BigInt::from(doc.order.clone()),
    ))
}

// ---------------------------------------------------------------------------
// ζ determination.

/// Outcome of a ζ determination: all inputs and the solved scalar.
///
/// Invariants (enforced at construction): the almost-character value equals
/// sign·ζ·(characteristic-function value) exactly, and ζ·conj(ζ) = 1.
#[derive(Debug, Clone)]
pub struct ZetaReport {
    /// Family type label.
    pub family: String,
    /// Pair label of the almost character.
    pub pair: String,
    /// Designated class name.
    pub class_name: String,
    /// R-value on the designated class.
    pub almost_value: Cyc,
    /// χ-value on the designated class.
    pub char_fn_value: Cyc,
    /// The solved unit scalar.
    pub zeta: Cyc,
    /// Sign factor (−1)^{dim C}.
    pub sign: i8,
    /// Statement of the extrapolation law for the scalar.
    pub extrapolation: String,
}

/// Solves R = sign·ζ·χ on the designated class by exact division and
/// checks that ζ is a unit.
///
/// # Errors
/// [`VerifyError::ClassNotFound`], [`VerifyError::ZeroCharFnValue`],
/// [`VerifyError::MismatchedValue`] (R vanishing where χ does not) and
/// [`VerifyError::ScalarNotUnit`].
pub fn solve_zeta(
    family: &str,
    pair: &str,
    r_values: &[Cyc],
    spec: &CharFnSpec,
    doc: &CTabDocument,
    class_name: &str,
) -> Result<ZetaReport, VerifyError> {
    let chi = characteristic_function(spec, doc)?;
    let idx = doc
        .class_index(class_name)
        .ok_or_else(|| VerifyError::ClassNotFound(class_name.to_string()))?;
    let chi_t = chi[idx].clone();
    if chi_t.is_zero() {
        return Err(VerifyError::ZeroCharFnValue(class_name.to_string()));
    }
    let r_t = r_values[idx].clone();
    if r_t.is_zero() {
        return Err(VerifyError::MismatchedValue {
            class: class_name.to_string(),
            chi: chi_t.to_string(),
        });
    }
    // χ on the class of g_a is q_power·λ(a) with λ(a) a root of unity, so
    // χ⁻¹ = conj(λ(a))/q_power.
    let (a0, _) = spec
        .support
        .iter()
        .find(|(_, n)| n == class_name)
        .expect("nonzero χ implies a support entry");
    let lam = spec.lambda_value(*a0).clone();
    let scale = BigRational::new(BigInt::from(spec.sign()), spec.q_power());
    let zeta = (&r_t * &lam.conjugate()).scale(&scale);
    if &zeta * &zeta.conjugate() != Cyc::one() {
        return Err(VerifyError::ScalarNotUnit(zeta.to_string()));
    }
    let sign_cyc = Cyc::from_integer(spec.sign() as i64);
    if &(&sign_cyc * &zeta) * &chi_t != r_t {
        return Err(stage(
            "zeta",
            "sign·ζ·χ does not reproduce the almost-character value",
        ));
    }
    Ok(ZetaReport {
        family: family.to_string(),
        pair: pair.to_string(),
        class_name: class_name.to_string(),
        almost_value: r_t,
        char_fn_value: chi_t,
        zeta: zeta.clone(),
        sign: spec.sign(),
        extrapolation: format!(
            "scalar for G({q}^m) equals ζ^m = ({zeta})^m; the base case q = {q} determines every q = {q}^f",
            q = spec.q
        ),
    })
}

/// The scalar for G(q^m) given the base-case scalar ζ for G(q): ζ^m.
/// Determining ζ for G(𝔽_p) therefore settles all q = pᶠ at once.
pub fn zeta_extrapolate(zeta: &Cyc, m: u32) -> Cyc {
    let mut acc = Cyc::one();
    for _ in 0..m {
        acc = &acc * zeta;
    }
    acc
}

// ---------------------------------------------------------------------------
// Component-group tables.

/// Character table of the cyclic group of order n as a permutation-matrix
/// group, plus the row index of a distinguished generator character λ and
/// the class indices ordered so that λ(class_i) = E(n)^i.
fn cyclic_component(n: u64) -> Result<(CharacterTable, usize, Vec<usize>), VerifyError> {
    let dim = n as usize;
    let mut rows = vec![0u128; dim];
    for j in 0..dim {
        rows[(j + 1) % dim] |= 1 << j;
    }
    let handle = GroupHandle::new(vec![MatrixGF2::from_rows(dim, rows)])?;
    let table = chartab::character_table(&handle, &format!("Z{n}"))?;
    let root = Cyc::root_of_unity(n as u32, 1);
    // λ = a row taking the value E(n) somewhere; order classes by λ-power.
    for t in 0..table.class_count() {
        let values = &table.irreducibles[t];
        if !values.contains(&root) {
            continue;
        }
        let mut order = Vec::with_capacity(dim);
        for i in 0..n {
            let target = Cyc::root_of_unity(n as u32, i as i64);
            let Some(j) = values.iter().position(|v| *v == target) else {
                break;
            };
            order.push(j);
        }
        if order.len() == dim {
            return Ok((table, t, order));
        }
    }
    Err(stage(
        "component",
        format!("no generator character found for Z{n}"),
    ))
}

// ---------------------------------------------------------------------------
// The packaged Sp₄(𝔽₂) verification.

/// Result of [`verify_sp4`]: the ζ report and a deterministic audit trail.
#[derive(Debug, Clone)]
pub struct Sp4Verification {
    /// The ζ determination on the class of g₁.
    pub report: ZetaReport,
    /// One line per verified stage, in pipeline order.
    pub audit: Vec<String>,
}

/// Builds Sp₄(𝔽₂) from its Chevalley generators, computes its character
/// table, identifies the four members of the principal family through the
/// permutation character on Borel-subgroup cosets, evaluates the almost
/// character R_{x₀} and solves R_{x₀} = ζ·χ_{g₁,ε} on the class of
/// g₁ = x_a(1)·x_b(1).
///
/// # Errors
/// [`VerifyError::Stage`] naming the first failing stage; the run is fully
/// self-contained and deterministic.
pub fn verify_sp4() -> Result<Sp4Verification, VerifyError> {
    let mut audit = Vec::new();

    // Stage 1: the group.
    let handle = GroupHandle::new(chevalley::adjoint_group_generators(LieType::C2))?;
    let order = handle.group_order();
    if order != BigUint::from(720u32) {
        return Err(stage("group", format!("expected order 720, found {order}")));
    }
    audit.push(
        "group: ⟨x_±a(1), x_±b(1)⟩ on the 10-dimensional adjoint module has order 720".to_string(),
    );

    // Stage 2: classes and character table.
    let (classes, class_of) = handle.conjugacy_partition()?;
    let table = chartab::character_table(&handle, "Sp4(F2)")?;
    let doc = document_from_table(&table);
    if doc.class_count() != 11 {
        return Err(stage(
            "table",
            format!("expected 11 classes, found {}", doc.class_count()),
        ));
    }
    let report = validate_ctab(&doc);
    if !report.is_clean() {
        return Err(stage(
            "table",
            format!("validation violations: {:?}", report.violations),
        ));
    }
    audit.push("table: 11 classes; orthogonality, size and degree sums verified".to_string());

    // Stage 3: g₁ = x_a(1)·x_b(1).
    let g1 = chevalley::named_representative("c2_g1")?;
    if g1.order != 4 {
        return Err(stage("g1", format!("expected order 4, found {}", g1.order)));
    }
    let g1_class = *class_of
        .get(&g1.matrix)
        .ok_or_else(|| stage("g1", "representative not in the enumerated group"))?;
    let g1_name = doc.classes[g1_class].name.clone();
    if doc.classes[g1_class].element_order != 4 {
        return Err(stage(
            "g1",
            "class element order disagrees with the representative",
        ));
    }
    let g1_inv = g1
        .matrix
        .inverse()
        .ok_or_else(|| stage("g1", "representative not invertible"))?;
    if !handle.are_conjugate(&g1.matrix, &g1_inv)? {
        return Err(stage("g1", "g₁ is not conjugate to its inverse"));
    }
    audit.push(format!(
        "g1: x_a(1)·x_b(1) has order 4, lies in class {g1_name}, and is conjugate to its inverse"
    ));

    // Stage 4: the Borel subgroup and its permutation character.
    let system = chevalley::root_system(LieType::C2);
    let mut borel_gens = Vec::new();
    for root in system.positive_roots() {
        borel_gens.push(chevalley::adjoint_generator(LieType::C2, root)?);
    }
    let borel = GroupHandle::new(borel_gens)?;
    if borel.group_order() != BigUint::from(16u32) {
        return Err(stage(
            "borel",
            format!("expected order 16, found {}", borel.group_order()),
        ));
    }
    let action = handle.coset_action(&borel)?;
    if action.degree != 45 {
        return Err(stage(
            "borel",
            format!("expected 45 cosets, found {}", action.degree),
        ));
    }
    let perm = chartab::permutation_character(&action, &classes, &table)?;
    audit.push(
        "borel: ⟨x_a(1), x_b(1), x_{a+b}(1), x_{2a+b}(1)⟩ has order 16 and index 45".to_string(),
    );

    // Stage 5: constituents of the permutation character.
    let decomposition = chartab::decompose(&table, &perm)?;
    let mut described: Vec<(BigInt, BigInt, usize)> = decomposition
        .iter()
        .map(|&(t, ref m)| (doc.degree(t).expect("integral degree"), m.clone(), t))
        .collect();
    described.sort();
    let shape: Vec<(String, String)> = described
        .iter()
        .map(|(d, m, _)| (d.to_string(), m.to_string()))
        .collect();
    let expected_shape = [
        ("1".to_string(), "1".to_string()),
        ("5".to_string(), "1".to_string()),
        ("5".to_string(), "1".to_string()),
        ("9".to_string(), "2".to_string()),
        ("16".to_string(), "1".to_string()),
    ];
    if shape != expected_shape {
        return Err(stage(
            "induction",
            format!("constituents (degree, multiplicity) = {shape:?}, expected {expected_shape:?}"),
        ));
    }
    let rho_r = described[3].2;
    let five_pair = vec![described[1].2, described[2].2];
    audit.push(
        "induction: Ind_B 1 = 1 + 16 + 5 + 5 + 2·9; the degree-9 constituent is unique".to_string(),
    );

    // Stage 6: the nontrivial linear character.
    let linear_rows: Vec<usize> = (0..doc.class_count())
        .filter(|&t| doc.degree(t) == Some(BigInt::one()))
        .collect();
    if linear_rows.len() != 2 {
        return Err(stage(
            "linear",
            format!("expected 2 linear characters, found {}", linear_rows.len()),
        ));
    }
    let rho_x0 = *linear_rows
        .iter()
        .find(|&&t| doc.matrix[t].iter().any(|v| *v != Cyc::one()))
        .ok_or_else(|| stage("linear", "no nontrivial linear character"))?;
    audit.push("linear: the nontrivial linear character (sign of 𝔖₆) identified".to_string());

    // Stage 7: the almost character R_{x₀}.
    let family = families::family_data(FamilyType::B2);
    let gamma = families::gamma_group(family.gamma);
    let pair = gamma.pair("g2", "eps")?;
    let row = families::almost_character_row(FamilyType::B2, &pair)?;
    let matching = vec![
        ("ρ_r".to_string(), RowMatch::Unique(rho_r)),
        ("ρ_{sgn_a}".to_string(), RowMatch::Group(five_pair.clone())),
        ("ρ_{sgn_b}".to_string(), RowMatch::Group(five_pair)),
        ("ρ_{x₀}".to_string(), RowMatch::Unique(rho_x0)),
    ];
    let r_values = almost_character_values(&doc, &matching, &row)?;
    let two = Cyc::from_integer(2);
    if r_values[g1_class] != two {
        return Err(stage(
            "almost",
            format!("R_{{x₀}}({g1_name}) = {}, expected 2", r_values[g1_class]),
        ));
    }
    let norm = scalar_product(&doc, &r_values, &r_values);
    if norm != Cyc::one() {
        return Err(stage("almost", format!("⟨R,R⟩ = {norm}, expected 1")));
    }
    audit.push(format!(
        "almost: R_{{x₀}}({g1_name}) = 2 and ⟨R_{{x₀}}, R_{{x₀}}⟩ = 1"
    ));

    // Stage 8: R_{x₀} is the characteristic function of the split pair of
    // order-4 classes.
    let others: Vec<usize> = (0..doc.class_count())
        .filter(|&j| j != g1_class && !r_values[j].is_zero())
        .collect();
    let [companion] = others[..] else {
        return Err(stage(
            "support",
            format!("R is nonzero on {} classes besides g₁'s", others.len()),
        ));
    };
    if r_values[companion] != Cyc::from_integer(-2) {
        return Err(stage(
            "support",
            format!(
                "companion value {} on {}, expected −2",
                r_values[companion], doc.classes[companion].name
            ),
        ));
    }
    if doc.classes[companion].element_order != 4 {
        return Err(stage(
            "support",
            "companion class does not consist of order-4 elements",
        ));
    }
    let companion_name = doc.classes[companion].name.clone();
    audit.push(format!(
        "support: R_{{x₀}} is supported on the order-4 classes {g1_name} (value 2) and {companion_name} (value −2)"
    ));

    let (component, lambda, class_order) = cyclic_component(2)?;
    let spec = CharFnSpec {
        q: 2,
        dim_g: 10,
        dim_c: 8,
        component,
        lambda,
        support: vec![
            (class_order[0], g1_name.clone()),
            (class_order[1], companion_name),
        ],
    };
    let chi = characteristic_function(&spec, &doc)?;
    if chi != r_values {
        return Err(stage(
            "charfn",
            "characteristic function differs from R_{x₀} somewhere",
        ));
    }
    audit.push(
        "charfn: χ_{g₁,ε} = (q·ε(a) on the split pair, 0 elsewhere) equals R_{x₀} on every class"
            .to_string(),
    );

    // Stage 9: ζ.
    let report = solve_zeta(
        "B2",
        &gamma.pair_label(&pair),
        &r_values,
        &spec,
        &doc,
        &g1_name,
    )?;
    if report.zeta != Cyc::one() {
        return Err(stage("zeta", format!("ζ = {}, expected 1", report.zeta)));
    }
    audit.push(format!(
        "zeta: R = sign·ζ·χ with sign = (−1)^{{dim C}} = +1 and ζ = 1; {}",
        report.extrapolation
    ));

    Ok(Sp4Verification { report, audit })
}

// ---------------------------------------------------------------------------
// Replays on ingested tables.

/// Optional replacements for the per-family characteristic-function
/// defaults used by [`verify_from_table`].
#[derive(Debug, Clone, Default)]
pub struct SpecOverrides {
    /// Prime power q (default 2).
    pub q: Option<u64>,
    /// dim G.
    pub dim_g: Option<u32>,
    /// dim C.
    pub dim_c: Option<u32>,
    /// Support class names in λ-power order (the class of g_a for
    /// a = 1, g, g², …).
    pub support: Option<Vec<String>>,
}

/// Result of [`verify_from_table`].
#[derive(Debug, Clone)]
pub struct TableVerification {
    /// The ζ determination on the designated class.
    pub report: ZetaReport,
    /// One line per verified stage.
    pub audit: Vec<String>,
}

/// Replays a ζ determination on an ingested table: validates the table,
/// matches the family characters to rows by degree (hints breaking ties),
/// evaluates the almost character over every admissible matching, checks
/// matching-independence on the designated class, and solves for ζ.
///
/// For E₆ the support pattern is additionally enforced: the almost
/// character vanishes off the three support classes (for at least one
/// matching) and the companion values are the q-power times the two
/// remaining λ-values.
///
/// # Errors
/// Validation failures ([`VerifyError::Stage`]), matching failures
/// ([`VerifyError::UnmatchedCharacter`], [`VerifyError::AmbiguityAsymmetric`])
/// and the [`solve_zeta`] errors.
pub fn verify_from_table(
    t: FamilyType,
    doc: &CTabDocument,
    pair_label: &str,
    class_name: &str,
    overrides: &SpecOverrides,
) -> Result<TableVerification, VerifyError> {
    let mut audit = Vec::new();

    let validation = validate_ctab(doc);
    if !validation.is_clean() {
        return Err(stage(
            "validate",
            format!(
                "table {} has violations: {}",
                doc.name,
                validation.violations.join("; ")
            ),
        ));
    }
    audit.push(format!(
        "validate: table {} ({} classes) is internally consistent",
        doc.name,
        doc.class_count()
    ));

    let family = families::family_data(t);
    let gamma = families::gamma_group(family.gamma);
    let pair = gamma.parse_pair(pair_label)?;
    let row = families::almost_character_row(t, &pair)?;

    let matching = match_family_rows(family, doc, &row)?;
    for (name, m) in &matching {
        match m {
            RowMatch::Unique(i) => audit.push(format!(
                "match: {name} → row {} (degree {})",
                i + 1,
                doc.degree(*i).unwrap_or_default()
            )),
            RowMatch::Group(g) => audit.push(format!(
                "match: {name} → ambiguity group {{{}}}",
                g.iter()
                    .map(|i| format!("row {}", i + 1))
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
        }
    }

    let matchings = almost_character_matchings(doc, &matching, &row)?;
    audit.push(format!(
        "evaluate: {} admissible matching(s)",
        matchings.len()
    ));

    let target = doc
        .class_index(class_name)
        .ok_or_else(|| VerifyError::ClassNotFound(class_name.to_string()))?;
    let r_target = matchings[0][target].clone();
    if matchings.iter().any(|m| m[target] != r_target) {
        let names = ambiguous_names(&matching, &row);
        return Err(VerifyError::AmbiguityAsymmetric { names });
    }
    audit.push(format!(
        "target: every matching gives R({class_name}) = {r_target}"
    ));

    // Characteristic-function spec from per-family defaults and overrides.
    let (dim_g_default, dim_c_default, component_order, default_support): (
        u32,
        u32,
        u64,
        Option<Vec<String>>,
    ) = match t {
        FamilyType::B2 => (10, 8, 2, None),
        FamilyType::D4 => (28, 24, 2, None),
        FamilyType::F4 => (52, 48, 3, None),
        FamilyType::E6 => (
            78,
            72,
            3,
            Some(vec!["12n".into(), "12o".into(), "12p".into()]),
        ),
    };
    let (component, lambda, class_order) = cyclic_component(component_order)?;
    let support_names: Vec<String> = match (&overrides.support, default_support) {
        (Some(names), _) => names.clone(),
        (None, Some(names)) => names,
        (None, None) => {
            // The designated class is the class of g₁ (a = 1); companions
            // are the classes on which every matching is nonzero.
            let mut names = vec![class_name.to_string()];
            let companions: Vec<usize> = (0..doc.class_count())
                .filter(|&j| j != target && matchings.iter().all(|m| !m[j].is_zero()))
                .collect();
            if companions.len() + 1 != component.class_count() {
                return Err(stage(
                    "support",
                    format!(
                        "found {} companion classes for |A(g₁)| = {}; pass explicit support names",
                        companions.len(),
                        component.class_count()
                    ),
                ));
            }
            for j in companions {
                names.push(doc.classes[j].name.clone());
            }
            names
        }
    };
    if support_names.len() != component.class_count() {
        return Err(stage(
            "support",
            format!(
                "{} support names for |A(g₁)| = {}",
                support_names.len(),
                component.class_count()
            ),
        ));
    }
    let spec = CharFnSpec {
        q: overrides.q.unwrap_or(2),
        dim_g: overrides.dim_g.unwrap_or(dim_g_default),
        dim_c: overrides.dim_c.unwrap_or(dim_c_default),
        component,
        lambda,
        support: class_order
            .iter()
            .copied()
            .zip(support_names.iter().cloned())
            .collect(),
    };
    audit.push(format!(
        "spec: q = {}, dim G = {}, dim C = {}, χ = {}·λ(a) on ({})",
        spec.q,
        spec.dim_g,
        spec.dim_c,
        spec.q_power(),
        support_names.join(", ")
    ));

    let report = solve_zeta(
        &t.to_string(),
        &gamma.pair_label(&pair),
        &matchings[0],
        &spec,
        doc,
        class_name,
    )?;
    audit.push(format!("zeta: ζ = {} on class {class_name}", report.zeta));

    // Support-pattern checks: expected values sign·ζ·q_power·λ(a).
    let chi = characteristic_function(&spec, doc)?;
    let sign_zeta = &Cyc::from_integer(spec.sign() as i64) * &report.zeta;
    let expected: Vec<(usize, Cyc)> = spec
        .support
        .iter()
        .map(|(_, name)| {
            let idx = doc.class_index(name).expect("validated above");
            (idx, &sign_zeta * &chi[idx])
        })
        .collect();
    let mut pattern_holds_for = Vec::new();
    for (mi, values) in matchings.iter().enumerate() {
        let on_support = expected.iter().all(|(idx, v)| values[*idx] == *v);
        let off_support = (0..doc.class_count())
            .all(|j| expected.iter().any(|(idx, _)| *idx == j) || values[j].is_zero());
        if on_support && off_support {
            pattern_holds_for.push(mi + 1);
        }
    }
    let expected_set: Vec<String> = {
        let mut v: Vec<String> = expected.iter().map(|(_, c)| c.to_string()).collect();
        v.sort();
        v
    };
    let set_matchings: Vec<usize> = matchings
        .iter()
        .enumerate()
        .filter(|(_, values)| {
            let mut got: Vec<String> = expected
                .iter()
                .map(|(idx, _)| values[*idx].to_string())
                .collect();
            got.sort();
            got == expected_set
        })
        .map(|(mi, _)| mi + 1)
        .collect();
    audit.push(format!(
        "pattern: sign·ζ·χ matches R exactly for matching(s) {pattern_holds_for:?}; support-value multiset matches for {set_matchings:?}"
    ));
    if t == FamilyType::E6 {
        if set_matchings.len() != matchings.len() {
            return Err(stage(
                "pattern",
                "some matching's support values differ from {q³, q³θ, q³θ²} as a multiset",
            ));
        }
        if pattern_holds_for.is_empty() {
            return Err(stage(
                "pattern",
                "no matching realizes the characteristic function exactly on and off the support",
            ));
        }
    }

    Ok(TableVerification { report, audit })
}

fn ambiguous_names(matching: &[(String, RowMatch)], row: &[(String, Cyc)]) -> Vec<String> {
    let in_row: Vec<&str> = row.iter().map(|(n, _)| n.as_str()).collect();
    matching
        .iter()
        .filter(|(n, m)| matches!(m, RowMatch::Group(_)) && in_row.contains(&n.as_str()))
        .map(|(n, _)| n.clone())
        .collect()
}

/// Matches the family characters appearing in `row` to rows of `doc`:
/// primary key the degree at q = 2, ties broken by the hint index when it
/// points at a row of the right degree, remaining ties left as ambiguity
/// groups.
fn match_family_rows(
    family: &families::FamilyTable,
    doc: &CTabDocument,
    row: &[(String, Cyc)],
) -> Result<Vec<(String, RowMatch)>, VerifyError> {
    let degrees: Vec<Option<BigInt>> = (0..doc.class_count()).map(|t| doc.degree(t)).collect();
    let mut out = Vec::new();
    for (name, _) in row {
        let entry = family
            .entry_by_name(name)
            .ok_or_else(|| stage("match", format!("{name} is not a member of the family")))?;
        let wanted = BigInt::from(entry.degree.clone());
        let candidates: Vec<usize> = (0..doc.class_count())
            .filter(|&t| degrees[t].as_ref() == Some(&wanted))
            .collect();
        let m = match candidates.len() {
            0 => {
                let mut sample: Vec<String> =
                    degrees.iter().flatten().map(|d| d.to_string()).collect();
                sample.sort();
                sample.dedup();
                sample.truncate(12);
                return Err(VerifyError::UnmatchedCharacter {
                    name: name.clone(),
                    degree: wanted.to_string(),
                    sample,
                });
            }
            1 => RowMatch::Unique(candidates[0]),
            _ => match hint_index(entry.hint.as_deref()) {
                Some(h) if candidates.contains(&h) => RowMatch::Unique(h),
                _ => RowMatch::Group(candidates),
            },
        };
        out.push((name.clone(), m));
    }
    Ok(out)
}

/// Parses a hint like `X.20` into the 0-based row index 19.
fn hint_index(hint: Option<&str>) -> Option<usize> {
    let rest = hint?.strip_prefix("X.")?;
    let one_based: usize = rest.parse().ok()?;
    (one_based >= 1).then(|| one_based - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::symmetric_table;

    fn s3_doc() -> CTabDocument {
        document_from_table(&symmetric_table(3).unwrap())
    }

    fn z2_spec(doc: &CTabDocument) -> CharFnSpec {
        let (component, lambda, class_order) = cyclic_component(2).unwrap();
        CharFnSpec {
            q: 2,
            dim_g: 10,
            dim_c: 8,
            component,
            lambda,
            support: vec![
                (class_order[0], doc.classes[0].name.clone()),
                (class_order[1], doc.classes[1].name.clone()),
            ],
        }
    }

    #[test]
    fn characteristic_function_takes_signed_q_powers_on_the_support() {
        let doc = s3_doc();
        let spec = z2_spec(&doc);
        let chi = characteristic_function(&spec, &doc).unwrap();
        assert_eq!(chi[0], Cyc::from_integer(2));
        assert_eq!(chi[1], Cyc::from_integer(-2));
        assert!(chi[2].is_zero());

        // D4-style dimensions give q² = 4.
        let spec = CharFnSpec {
            dim_g: 28,
            dim_c: 24,
            ..z2_spec(&doc)
        };
        let chi = characteristic_function(&spec, &doc).unwrap();
        assert_eq!(chi[0], Cyc::from_integer(4));
        assert_eq!(chi[1], Cyc::from_integer(-4));
    }

    #[test]
    fn trivial_lambda_gives_a_constant_q_power_on_the_support() {
        let doc = s3_doc();
        let mut spec = z2_spec(&doc);
        let trivial = (0..spec.component.class_count())
            .find(|&t| {
                spec.component.irreducibles[t]
                    .iter()
                    .all(|v| *v == Cyc::one())
            })
            .unwrap();
        spec.lambda = trivial;
        let chi = characteristic_function(&spec, &doc).unwrap();
        assert_eq!(chi[0], Cyc::from_integer(2));
        assert_eq!(chi[1], Cyc::from_integer(2));
    }

    #[test]
    fn spec_invariants_are_enforced() {
        let doc = s3_doc();
        let spec = CharFnSpec {
            dim_c: 7,
            ..z2_spec(&doc)
        };
        assert!(matches!(spec.validate(), Err(VerifyError::Stage { .. })));

        let spec = CharFnSpec {
            q: 12,
            ..z2_spec(&doc)
        };
        assert!(matches!(spec.validate(), Err(VerifyError::Stage { .. })));

        // A non-linear λ is rejected: use 𝔖₃ itself as the component group.
        let s3 = symmetric_table(3).unwrap();
        let two_dim = (0..3).find(|&t| s3.degree(t) == BigInt::from(2)).unwrap();
        let spec = CharFnSpec {
            q: 2,
            dim_g: 10,
            dim_c: 8,
            component: s3,
            lambda: two_dim,
            support: vec![(0, "1a".into()), (1, "2a".into()), (2, "3a".into())],
        };
        assert!(matches!(spec.validate(), Err(VerifyError::Stage { .. })));

        let spec = z2_spec(&doc);
        let missing = CharFnSpec {
            support: vec![(spec.support[0].0, "9z".into()), spec.support[1].clone()],
            ..spec
        };
        assert!(matches!(
            characteristic_function(&missing, &doc),
            Err(VerifyError::ClassNotFound(_))
        ));
    }

    #[test]
    fn almost_character_values_sums_unique_and_symmetric_group_matches() {
        let doc = s3_doc();
        // 1·(row of the trivial) + 2·(row of degree 2).
        let trivial = (0..3)
            .find(|&t| doc.matrix[t].iter().all(|v| *v == Cyc::one()))
            .unwrap();
        let two = (0..3)
            .find(|&t| doc.degree(t) == Some(BigInt::from(2)))
            .unwrap();
        let matching = vec![
            ("a".to_string(), RowMatch::Unique(trivial)),
            ("b".to_string(), RowMatch::Unique(two)),
        ];
        let row = vec![
            ("a".to_string(), Cyc::one()),
            ("b".to_string(), Cyc::from_integer(2)),
        ];
        let values = almost_character_values(&doc, &matching, &row).unwrap();
        for j in 0..3 {
            let expect = &doc.matrix[trivial][j] + &(&Cyc::from_integer(2) * &doc.matrix[two][j]);
            assert_eq!(values[j], expect);
        }

        // A symmetric group over the two linear rows sums them once each.
        let linears: Vec<usize> = (0..3)
            .filter(|&t| doc.degree(t) == Some(BigInt::one()))
            .collect();
        let matching = vec![
            ("a".to_string(), RowMatch::Group(linears.clone())),
            ("b".to_string(), RowMatch::Group(linears.clone())),
        ];
        let row = vec![
            ("a".to_string(), Cyc::from_integer(3)),
            ("b".to_string(), Cyc::from_integer(3)),
        ];
        let values = almost_character_values(&doc, &matching, &row).unwrap();
        for j in 0..3 {
            let expect =
                &Cyc::from_integer(3) * &(&doc.matrix[linears[0]][j] + &doc.matrix[linears[1]][j]);
            assert_eq!(values[j], expect);
        }
    }

    #[test]
    fn asymmetric_groups_are_refused_but_enumerable() {
        let doc = s3_doc();
        let linears: Vec<usize> = (0..3)
            .filter(|&t| doc.degree(t) == Some(BigInt::one()))
            .collect();
        let matching = vec![
            ("a".to_string(), RowMatch::Group(linears.clone())),
            ("b".to_string(), RowMatch::Group(linears.clone())),
        ];
        let row = vec![
            ("a".to_string(), Cyc::one()),
            ("b".to_string(), Cyc::from_integer(2)),
        ];
        assert!(matches!(
            almost_character_values(&doc, &matching, &row),
            Err(VerifyError::AmbiguityAsymmetric { .. })
        ));

        let all = almost_character_matchings(&doc, &matching, &row).unwrap();
        assert_eq!(all.len(), 2);
        // On the class where the linear rows agree (the identity) the two
        // matchings coincide; where the sign differs they swap.
        assert_eq!(all[0][0], all[1][0]);
        assert_ne!(all[0][1], all[1][1]);
    }

    #[test]
    fn solve_zeta_divides_exactly_and_checks_units() {
        let doc = s3_doc();
        let spec = z2_spec(&doc);
        let chi = characteristic_function(&spec, &doc).unwrap();

        let report = solve_zeta("B2", "(g2,eps)", &chi, &spec, &doc, &doc.classes[0].name).unwrap();
        assert_eq!(report.zeta, Cyc::one());
        assert_eq!(report.sign, 1);
        assert_eq!(report.almost_value, Cyc::from_integer(2));

        // R = θ·χ solves to ζ = θ, and the scalar for q³ is θ³ = 1.
        let theta = Cyc::root_of_unity(3, 1);
        let r: Vec<Cyc> = chi.iter().map(|v| &theta * v).collect();
        let report = solve_zeta("B2", "(g2,eps)", &r, &spec, &doc, &doc.classes[0].name).unwrap();
        assert_eq!(report.zeta, theta);
        assert_eq!(zeta_extrapolate(&report.zeta, 3), Cyc::one());

        // R = 2·χ has a non-unit quotient.
        let r: Vec<Cyc> = chi.iter().map(|v| &Cyc::from_integer(2) * v).collect();
        assert!(matches!(
            solve_zeta("B2", "(g2,eps)", &r, &spec, &doc, &doc.classes[0].name),
            Err(VerifyError::ScalarNotUnit(_))
        ));

        // Off-support class: χ = 0 there.
        assert!(matches!(
            solve_zeta("B2", "(g2,eps)", &chi, &spec, &doc, &doc.classes[2].name),
            Err(VerifyError::ZeroCharFnValue(_))
        ));

        // R vanishing on the designated class signals a mismatch.
        let zeros = vec![Cyc::zero(); 3];
        assert!(matches!(
            solve_zeta("B2", "(g2,eps)", &zeros, &spec, &doc, &doc.classes[0].name),
            Err(VerifyError::MismatchedValue { .. })
        ));
    }

    #[test]
    fn extrapolation_follows_the_power_law() {
        let theta = Cyc::root_of_unity(3, 1);
        assert_eq!(zeta_extrapolate(&theta, 3), Cyc::one());
        let i = Cyc::root_of_unity(4, 1);
        assert_eq!(zeta_extrapolate(&i, 2), Cyc::from_integer(-1));
        assert_eq!(zeta_extrapolate(&Cyc::one(), 7), Cyc::one());
    }

    #[test]
    fn sp4_pipeline_verifies_end_to_end_and_is_deterministic() {
        let first = verify_sp4().unwrap();
        assert_eq!(first.report.zeta, Cyc::one());
        assert_eq!(first.report.almost_value, Cyc::from_integer(2));
        assert_eq!(first.report.char_fn_value, Cyc::from_integer(2));
        assert_eq!(first.report.sign, 1);
        assert_eq!(first.report.family, "B2");
        assert!(first.audit.len() >= 8);

        let second = verify_sp4().unwrap();
        assert_eq!(first.audit, second.audit);
    }

    #[test]
    fn zeta_reports_satisfy_the_unit_invariant() {
        let v = verify_sp4().unwrap();
        let z = &v.report.zeta;
        assert_eq!(z * &z.conjugate(), Cyc::one());
    }
}
