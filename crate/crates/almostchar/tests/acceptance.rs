//! Acceptance checklist for the toolkit: one integration test per shipped
//! guarantee, each printing a `PASS`/`SKIP` line so a verbose run reads as a
//! checklist.  Criteria 6 and 7 replay results on full F₄(𝔽₂)/E₆(𝔽₂)
//! character-table data, which is far too large to recompute here; they run
//! only when the corresponding CTAB files are supplied through environment
//! variables and report `SKIP` otherwise.
//!
//! | criterion | gate |
//! |-----------|------|
//! | 6 (F₄ values/ζ)   | `ALMOSTCHAR_F4_CTAB` and/or `ALMOSTCHAR_E6_CTAB` |
//! | 7 (fusion images) | `ALMOSTCHAR_F4_CTAB` and `ALMOSTCHAR_F4P_CTAB`   |

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use almostchar::chartab::{character_table, equivalent_by_fingerprint, symmetric_table};
use almostchar::chevalley::{
    adjoint_group_generators, named_representative, realization, root_label, structure_constant,
    subgroup_generators, LieType, RootSystem,
};
use almostchar::ctabio::{
    document_from_table, parse_ctab, possible_fusions, serialize_ctab, validate_ctab, CTabDocument,
    DEFAULT_FUSION_BUDGET,
};
use almostchar::cyclotomic::Cyc;
use almostchar::families::{
    almost_character_row, family_data, fourier_matrix, gamma_group, FamilyType, GammaId,
};
use almostchar::gf2group::GroupHandle;
use almostchar::verify::{verify_from_table, verify_sp4, zeta_extrapolate, SpecOverrides};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

fn pass(line: &str) {
    println!("PASS  {line}");
}

fn skip(line: &str) {
    println!("SKIP  {line}");
}

fn rational(num: i64, den: i64) -> Cyc {
    Cyc::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Criterion 1 — the Fourier matrix of every built-in Γ up to S4 is exactly
/// hermitian and exactly involutive, re-verified here from the raw entries.
#[test]
fn criterion_1_fourier_matrices_are_hermitian_and_involutive() {
    let start = Instant::now();
    for id in [
        GammaId::Z2,
        GammaId::Z3,
        GammaId::Z4,
        GammaId::S3,
        GammaId::S4,
    ] {
        let m = fourier_matrix(id).expect("Fourier matrix construction");
        let k = m.pairs.len();
        for i in 0..k {
            for j in 0..k {
                assert_eq!(
                    m.entries[i][j],
                    m.entries[j][i].conjugate(),
                    "{id}: hermitian symmetry at ({i},{j})"
                );
                let mut s = Cyc::zero();
                for l in 0..k {
                    s = &s + &(&m.entries[i][l] * &m.entries[l][j]);
                }
                let expect = if i == j { Cyc::one() } else { Cyc::zero() };
                assert_eq!(s, expect, "{id}: involution Υ² = I at ({i},{j})");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "runtime budget: {elapsed:?} ≥ 5 s"
    );
    pass(&format!(
        "criterion 1: Υ = Υ* and Υ² = I exactly for Z2, Z3, Z4, S3, S4 ({elapsed:?})"
    ));
}

/// Criterion 2 — the six printed almost-character combinations match the
/// recorded coefficients exactly, including zeros on unlisted members.
#[test]
fn criterion_2_printed_almost_character_rows_match_exactly() {
    let check = |t: FamilyType, class: &str, character: &str, expect: &[(&str, Cyc)]| {
        let family = family_data(t);
        let gamma = gamma_group(family.gamma);
        let pair = gamma.pair(class, character).expect("printed pair exists");
        let row: HashMap<String, Cyc> = almost_character_row(t, &pair)
            .expect("row evaluates")
            .into_iter()
            .collect();
        for (name, coeff) in expect {
            assert_eq!(
                row.get(*name),
                Some(coeff),
                "{t}: coefficient of {name} in R_({class},{character})"
            );
        }
        // Zero coefficients are omitted from the row, so every family member
        // outside the expected list must be absent.
        let listed: BTreeSet<&str> = expect.iter().map(|(n, _)| *n).collect();
        for entry in &family.entries {
            if !listed.contains(entry.name.as_str()) {
                assert_eq!(
                    row.get(&entry.name),
                    None,
                    "{t}: {} must have coefficient 0 in R_({class},{character})",
                    entry.name
                );
            }
        }
        assert_eq!(
            row.len(),
            expect.len(),
            "{t}: support size of R_({class},{character})"
        );
    };

    let half = rational(1, 2);
    let third = rational(1, 3);
    let two_thirds = rational(2, 3);

    check(
        FamilyType::B2,
        "g2",
        "eps",
        &[
            ("ρ_r", half.clone()),
            ("ρ_{sgn_a}", -half.clone()),
            ("ρ_{sgn_b}", -half.clone()),
            ("ρ_{x₀}", half.clone()),
        ],
    );
    check(
        FamilyType::D4,
        "g2",
        "eps",
        &[
            ("ρ_{(21,1)}", half.clone()),
            ("ρ_{(22,∅)}", -half.clone()),
            ("ρ_{(2,11)}", -half.clone()),
            ("ρ_{x₀}", half),
        ],
    );
    check(
        FamilyType::F4,
        "g3",
        "theta",
        &[
            ("φ_{12,4}", third.clone()),
            ("F₄^II[1]", third.clone()),
            ("φ_{6,6}'", -third.clone()),
            ("φ_{6,6}''", -third.clone()),
            ("F₄[θ]", two_thirds.clone()),
            ("F₄[θ²]", -third.clone()),
        ],
    );
    check(
        FamilyType::F4,
        "g3",
        "theta2",
        &[
            ("φ_{12,4}", third.clone()),
            ("F₄^II[1]", third.clone()),
            ("φ_{6,6}'", -third.clone()),
            ("φ_{6,6}''", -third.clone()),
            ("F₄[θ]", -third.clone()),
            ("F₄[θ²]", two_thirds.clone()),
        ],
    );
    check(
        FamilyType::E6,
        "g3",
        "theta",
        &[
            ("ρ_{(80,7)}", third.clone()),
            ("ρ_{(20,10)}", third.clone()),
            ("ρ_{(10,9)}", -third.clone()),
            ("ρ_{(90,8)}", -third.clone()),
            ("E₆[θ]", two_thirds.clone()),
            ("E₆[θ²]", -third.clone()),
        ],
    );
    check(
        FamilyType::E6,
        "g3",
        "theta2",
        &[
            ("ρ_{(80,7)}", third.clone()),
            ("ρ_{(20,10)}", third.clone()),
            ("ρ_{(10,9)}", -third.clone()),
            ("ρ_{(90,8)}", -third.clone()),
            ("E₆[θ]", -third),
            ("E₆[θ²]", two_thirds),
        ],
    );

    pass("criterion 2: all six printed almost-character rows match, zeros included");
}

/// Criterion 3 — the packaged Sp₄(𝔽₂) run reproduces R_{x₀}(g₁) = 2, ζ = 1,
/// ⟨R_{x₀}, R_{x₀}⟩ = 1, with g₁ of order 4 and conjugate to its inverse.
#[test]
fn criterion_3_sp4_pipeline_reproduces_the_scalar() {
    let start = Instant::now();
    let v = verify_sp4().expect("the Sp₄(𝔽₂) pipeline runs");

    assert_eq!(
        v.report.almost_value,
        Cyc::from_integer(2),
        "R_{{x₀}}(g₁) = 2"
    );
    assert_eq!(
        v.report.char_fn_value,
        Cyc::from_integer(2),
        "χ_{{g₁,ε}}(g₁) = 2"
    );
    assert_eq!(v.report.zeta, Cyc::one(), "ζ = 1");
    assert_eq!(v.report.sign, 1, "(−1)^{{dim C}} = +1");
    assert_eq!(
        &v.report.zeta * &v.report.zeta.conjugate(),
        Cyc::one(),
        "ζ·conj(ζ) = 1"
    );

    let audit = v.audit.join("\n");
    for marker in [
        "has order 4",
        "conjugate to its inverse",
        "⟨R_{x₀}, R_{x₀}⟩ = 1",
        "order 720",
        "ζ = 1",
    ] {
        assert!(
            audit.contains(marker),
            "audit must record {marker:?}:\n{audit}"
        );
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "runtime budget: {elapsed:?} ≥ 60 s"
    );
    pass(&format!(
        "criterion 3: Sp₄(𝔽₂) end-to-end gives R_{{x₀}}(g₁) = 2, ζ = 1, ⟨R,R⟩ = 1 ({elapsed:?})"
    ));
}

/// Criterion 4 — the Dixon–Schneider table of Sp₄(𝔽₂) and the
/// Murnaghan–Nakayama table of 𝔖₆ agree up to a row/column bijection.
#[test]
fn criterion_4_independent_table_oracles_agree() {
    let start = Instant::now();
    let handle = GroupHandle::new(adjoint_group_generators(LieType::C2)).expect("Sp₄(𝔽₂) handle");
    let dixon = character_table(&handle, "Sp4(F2)").expect("Dixon–Schneider table");
    let mn = symmetric_table(6).expect("Murnaghan–Nakayama table");

    assert!(
        equivalent_by_fingerprint(&dixon, &mn),
        "the two independently computed tables must agree up to bijection"
    );
    // Discriminating control: the fingerprint must not accept a genuinely
    // different table.
    let s5 = symmetric_table(5).expect("𝔖₅ table");
    assert!(
        !equivalent_by_fingerprint(&dixon, &s5),
        "fingerprint must separate 𝔖₅"
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "runtime budget: {elapsed:?} ≥ 60 s"
    );
    pass(&format!(
        "criterion 4: Dixon–Schneider Sp₄(𝔽₂) ≡ Murnaghan–Nakayama 𝔖₆ ({elapsed:?})"
    ));
}

/// Roots of the form iα + jβ with i, j ≥ 1, sorted by height — the root
/// string entering the commutator relation for the pair (α, β).
fn string_roots(rs: &RootSystem, a: &[i64], b: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 1..=4i64 {
        for j in 1..=4i64 {
            let c: Vec<i64> = a.iter().zip(b).map(|(x, y)| i * x + j * y).collect();
            if rs.is_root(&c) {
                out.push(c);
            }
        }
    }
    out.sort_by_key(|r| (RootSystem::height(r), r.clone()));
    out
}

/// Criterion 5 — named representative orders, the commutator relations of
/// every positive-root pair, and the two big group orders.
#[test]
fn criterion_5_chevalley_representatives_and_orders() {
    let start = Instant::now();

    let expected_orders = [
        ("c2_g1", 4),
        ("d4_g1", 8),
        ("u31", 16),
        ("u29", 8),
        ("u24", 8),
        ("u17", 4),
        ("u15", 4),
    ];
    for (name, order) in expected_orders {
        let rep = named_representative(name).expect("known representative");
        assert_eq!(rep.order, order, "order of {name}");
    }

    // Commutator relations: for every pair of positive roots, [x_α(1), x_β(1)]
    // equals a product of string-root elements x_{iα+jβ}(c_{ij}) for exactly
    // one choice of the coefficients c_{ij} ∈ 𝔽₂; when the string is the
    // single root α + β, that coefficient is the structure constant N_{α,β}
    // reduced mod 2.
    for t in LieType::ALL {
        let real = realization(t);
        let rs = real.system();
        let id_matrix = almostchar::gf2group::MatrixGF2::identity(real.dimension());
        let pos = rs.positive_roots().to_vec();
        for p in 0..pos.len() {
            for q in (p + 1)..pos.len() {
                let (a, b) = (&pos[p], &pos[q]);
                let xa = real.generator(a).expect("root element");
                let xb = real.generator(b).expect("root element");
                // Root elements square to the identity, so [x_a, x_b] = (x_a·x_b)².
                let ab = xa.mul(xb);
                let comm = ab.mul(&ab);
                let string = string_roots(rs, a, b);
                if string.is_empty() {
                    assert!(
                        comm.is_identity(),
                        "{t}: [{}, {}] with empty string",
                        root_label(a),
                        root_label(b)
                    );
                    continue;
                }
                let mut matched_masks = Vec::new();
                for mask in 0u32..(1 << string.len()) {
                    let mut prod = id_matrix.clone();
                    for (bit, c) in string.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            prod = prod.mul(real.generator(c).expect("string root"));
                        }
                    }
                    if prod == comm {
                        matched_masks.push(mask);
                    }
                }
                assert_eq!(
                    matched_masks.len(),
                    1,
                    "{t}: the commutator of {} and {} must be a unique string product",
                    root_label(a),
                    root_label(b)
                );
                if string.len() == 1 {
                    let n = structure_constant(t, a, b)
                        .expect("roots are known")
                        .expect("α + β is a root");
                    let expected_bit = u32::from(n.rem_euclid(2) == 1);
                    assert_eq!(
                        matched_masks[0],
                        expected_bit,
                        "{t}: [x_{}, x_{}] = x_{}(N mod 2)",
                        root_label(a),
                        root_label(b),
                        root_label(&string[0])
                    );
                }
            }
        }
    }

    let so8 = GroupHandle::new(adjoint_group_generators(LieType::D4)).expect("SO₈⁺(𝔽₂) handle");
    assert_eq!(
        so8.group_order(),
        BigUint::from(174_182_400u64),
        "|SO₈⁺(𝔽₂)|"
    );

    let levi = GroupHandle::new(subgroup_generators("e6_L").expect("Levi generators"))
        .expect("E₆ Levi handle");
    assert_eq!(
        levi.group_order(),
        BigUint::from(174_182_400u64),
        "|L| inside E₆(𝔽₂)"
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "runtime budget: {elapsed:?} ≥ 120 s"
    );
    pass(&format!(
        "criterion 5: representative orders (4,8,16,8,8,4,4), commutator relations, \
         |SO₈⁺(𝔽₂)| = |L| = 174182400 ({elapsed:?})"
    ));
}

fn gated_document(var: &str) -> Option<CTabDocument> {
    let path = std::env::var_os(var)?;
    let bytes = std::fs::read(&path)
        .unwrap_or_else(|e| panic!("{var} points at an unreadable file {path:?}: {e}"));
    Some(parse_ctab(&bytes).unwrap_or_else(|e| panic!("{var} file does not parse: {e}")))
}

/// Criterion 6 (data-gated) — replaying the ζ determination on supplied
/// F₄(𝔽₂) and E₆(𝔽₂) tables.
#[test]
fn criterion_6_replay_on_supplied_tables() {
    let f4 = gated_document("ALMOSTCHAR_F4_CTAB");
    let e6 = gated_document("ALMOSTCHAR_E6_CTAB");
    if f4.is_none() && e6.is_none() {
        skip(
            "criterion 6: no table data; set ALMOSTCHAR_F4_CTAB / ALMOSTCHAR_E6_CTAB \
             to CTAB files to replay the ζ determinations",
        );
        return;
    }

    if let Some(doc) = f4 {
        for pair in ["(g3,theta)", "(g3,theta2)"] {
            let v = verify_from_table(FamilyType::F4, &doc, pair, "12o", &SpecOverrides::default())
                .unwrap_or_else(|e| panic!("F₄ replay of {pair} fails: {e}"));
            assert_eq!(v.report.zeta, Cyc::one(), "F₄ {pair}: ζ = 1");
            assert_eq!(
                v.report.almost_value,
                Cyc::from_integer(16),
                "F₄ {pair}: expected R(12o) = 16, got {}.\n\
                 Analysis: ⟨R, R⟩ = 1 forces |R(c)|² ≤ |C(c)| on every class c, and \
                 |C(12o)| = 48 gives |R(12o)| ≤ √48 < 16, so a norm-1 almost character \
                 cannot reach 16 there; the attainable value is 4 = q² (dim G − dim C = 4 \
                 with dim C = 48).  The ζ = 1 assertion above is independent of this and \
                 holds either way.",
                v.report.almost_value
            );
        }
        pass("criterion 6 (F₄): R = 16 on 12o and ζ = 1 for both θ-pairs");
    } else {
        skip("criterion 6 (F₄): ALMOSTCHAR_F4_CTAB not set");
    }

    if let Some(doc) = e6 {
        for pair in ["(g3,theta)", "(g3,theta2)"] {
            // verify_from_table refuses an E₆ table whose support values are
            // not {8, 8θ, 8θ²} on {12n, 12o, 12p} (for every matching) with
            // the characteristic function realized exactly by at least one
            // matching, so a successful run already certifies the pattern.
            let v = verify_from_table(FamilyType::E6, &doc, pair, "12n", &SpecOverrides::default())
                .unwrap_or_else(|e| panic!("E₆ replay of {pair} fails: {e}"));
            assert_eq!(v.report.zeta, Cyc::one(), "E₆ {pair}: ζ = 1");
            assert_eq!(
                v.report.almost_value,
                Cyc::from_integer(8),
                "E₆ {pair}: R(12n) = 8"
            );
            assert_eq!(
                v.report.char_fn_value,
                Cyc::from_integer(8),
                "E₆ {pair}: χ(12n) = q³"
            );
            let audit = v.audit.join("\n");
            assert!(
                audit.contains("support-value multiset matches"),
                "E₆ {pair}: audit must confirm the support pattern:\n{audit}"
            );
        }
        pass("criterion 6 (E₆): values (8, 8θ, 8θ²) on (12n, 12o, 12p) and ζ = 1 for both θ-pairs");
    } else {
        skip("criterion 6 (E₆): ALMOSTCHAR_E6_CTAB not set");
    }
}

/// Criterion 7 (data-gated) — every admissible fusion of the supplied
/// subgroup-P table into the supplied F₄(𝔽₂) table sends the classes of
/// u₁₇, u₂₄, u₂₉, u₃₁ to one ambient class each.
#[test]
fn criterion_7_fusion_images_are_unique() {
    let (Some(p_doc), Some(f4_doc)) = (
        gated_document("ALMOSTCHAR_F4P_CTAB"),
        gated_document("ALMOSTCHAR_F4_CTAB"),
    ) else {
        skip(
            "criterion 7: no fusion data; set ALMOSTCHAR_F4P_CTAB and ALMOSTCHAR_F4_CTAB \
             to CTAB files to replay the fusion search",
        );
        return;
    };

    let fusions = possible_fusions(&p_doc, &f4_doc, &[], DEFAULT_FUSION_BUDGET)
        .expect("fusion search completes");
    assert!(
        !fusions.is_empty(),
        "the supplied subgroup table must admit a fusion"
    );

    for name in ["u17", "u24", "u29", "u31"] {
        let sub_idx = p_doc.class_index(name).unwrap_or_else(|| {
            panic!("the subgroup table must name the class of {name} literally {name:?}")
        });
        let images: BTreeSet<usize> = fusions.iter().map(|f| f.map[sub_idx]).collect();
        assert_eq!(
            images.len(),
            1,
            "{name}: all {} admissible fusions must agree on its image; images {images:?}",
            fusions.len()
        );
        let image_name = &f4_doc.classes[*images.iter().next().expect("nonempty")].name;
        let rep = named_representative(name).expect("known representative");
        if let Some(recorded) = rep.class_name {
            assert_eq!(image_name, &recorded, "{name}: image class label");
        }
    }
    pass(&format!(
        "criterion 7: all {} admissible fusions send u17, u24, u29, u31 to single ambient classes",
        fusions.len()
    ));
}

/// Criterion 8 — the property suites, runnable standalone: cyclotomic
/// conjugation laws, CTAB round-trips, fusion search against brute force,
/// ζ·conj(ζ) = 1 on produced reports, and the extrapolation power laws.
#[test]
fn criterion_8_property_suites() {
    let start = Instant::now();

    // Cyclotomic conjugation is an involutive ring homomorphism, and roots
    // of unity are units against it.
    let samples: Vec<Cyc> = vec![
        Cyc::zero(),
        Cyc::one(),
        Cyc::from_integer(-7),
        rational(3, 8),
        Cyc::root_of_unity(3, 1),
        Cyc::root_of_unity(8, 3),
        &Cyc::root_of_unity(5, 2) + &Cyc::from_integer(2),
        &rational(-2, 3) * &Cyc::root_of_unity(12, 7),
        &Cyc::root_of_unity(7, 1) - &Cyc::root_of_unity(9, 4),
    ];
    for x in &samples {
        assert_eq!(
            x.conjugate().conjugate(),
            *x,
            "conjugation is an involution"
        );
        for y in &samples {
            assert_eq!((x * y).conjugate(), &x.conjugate() * &y.conjugate());
            assert_eq!((x + y).conjugate(), &x.conjugate() + &y.conjugate());
        }
    }
    for n in 1..=12u32 {
        for k in 0..n {
            let z = Cyc::root_of_unity(n, i64::from(k));
            assert_eq!(&z * &z.conjugate(), Cyc::one(), "|E({n})^{k}| = 1");
        }
    }

    // CTAB serialization round-trips computed tables exactly.
    let s3_doc = document_from_table(gamma_group(GammaId::S3).group_table());
    let s4_doc = document_from_table(gamma_group(GammaId::S4).group_table());
    let s6_doc = document_from_table(&symmetric_table(6).expect("𝔖₆ table"));
    for doc in [&s3_doc, &s4_doc, &s6_doc] {
        let parsed = parse_ctab(serialize_ctab(doc).as_bytes()).expect("round trip parses");
        assert_eq!(&parsed, doc, "parse ∘ serialize = identity on {}", doc.name);
        assert!(
            validate_ctab(doc).is_clean(),
            "computed table {} validates",
            doc.name
        );
    }

    // Fusion search agrees with an exhaustive scan on a small instance, and
    // reproduces the known answer at order 720.
    let z2_doc = document_from_table(gamma_group(GammaId::Z2).group_table());
    let searched = possible_fusions(&z2_doc, &s3_doc, &[], DEFAULT_FUSION_BUDGET)
        .expect("Z2 → S3 search completes");
    let brute: Vec<Vec<usize>> = brute_force_fusions(&z2_doc, &s3_doc);
    assert_eq!(
        searched.iter().map(|f| f.map.clone()).collect::<Vec<_>>(),
        brute,
        "constraint search must equal the exhaustive scan on Z2 → S3"
    );
    let s3_to_s6 = possible_fusions(&s3_doc, &s6_doc, &[], DEFAULT_FUSION_BUDGET)
        .expect("S3 → S6 search completes");
    assert_eq!(s3_to_s6.len(), 4, "S3 → S6 admits exactly four fusions");
    let true_map: Vec<usize> = ["1a", "2a", "3a"]
        .iter()
        .map(|n| s6_doc.class_index(n).expect("𝔖₆ class"))
        .collect();
    assert!(
        s3_to_s6.iter().any(|f| f.map == true_map),
        "the subgroup fusion 1a→1a, 2a→2a, 3a→3a must be admissible"
    );

    // Every report the toolkit produces carries a unit scalar.
    let sp4 = verify_sp4().expect("Sp₄(𝔽₂) pipeline");
    assert_eq!(&sp4.report.zeta * &sp4.report.zeta.conjugate(), Cyc::one());

    // Extrapolation follows the power law ζ(q^m) = ζ(q)^m.
    let theta = Cyc::root_of_unity(3, 1);
    assert_eq!(zeta_extrapolate(&theta, 3), Cyc::one(), "θ³ = 1");
    assert_eq!(
        zeta_extrapolate(&Cyc::root_of_unity(4, 1), 2),
        Cyc::from_integer(-1),
        "i² = −1"
    );
    assert_eq!(
        zeta_extrapolate(&theta, 2),
        theta.conjugate(),
        "θ² = conj(θ)"
    );
    assert_eq!(zeta_extrapolate(&Cyc::one(), 7), Cyc::one(), "1⁷ = 1");

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "runtime budget: {elapsed:?} ≥ 30 s"
    );
    pass(&format!("criterion 8: property suites hold ({elapsed:?})"));
}

/// Exhaustive reference for the fusion search on tiny instances: scans every
/// class map and keeps those with order preservation, centralizer
/// divisibility, power-map commutation, and non-negative integral
/// restriction multiplicities.
fn brute_force_fusions(sub: &CTabDocument, big: &CTabDocument) -> Vec<Vec<usize>> {
    let k = sub.class_count();
    let n = big.class_count();
    let mut out = Vec::new();
    let mut map = vec![0usize; k];
    loop {
        if admissible(sub, big, &map) {
            out.push(map.clone());
        }
        // Odometer over all n^k maps.
        let mut i = 0;
        loop {
            if i == k {
                out.sort();
                return out;
            }
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

fn admissible(sub: &CTabDocument, big: &CTabDocument, map: &[usize]) -> bool {
    for (i, c) in sub.classes.iter().enumerate() {
        let img = &big.classes[map[i]];
        if c.element_order != img.element_order {
            return false;
        }
        let (sub_c, big_c) = (sub.centralizer_order(i), big.centralizer_order(map[i]));
        if (&big_c % &sub_c) != BigUint::from(0u32) {
            return false;
        }
        for (&p, &src_img) in &c.power_maps {
            match big.classes[map[i]].power_maps.get(&p) {
                Some(&t) if t == map[src_img] => {}
                _ => return false,
            }
        }
    }
    // Restrictions of the ambient irreducibles decompose with non-negative
    // integral multiplicities.
    let sub_order = BigInt::from(sub.order.clone());
    for row in &big.matrix {
        for psi in &sub.matrix {
            let mut s = Cyc::zero();
            for (i, c) in sub.classes.iter().enumerate() {
                let w = Cyc::from_bigint(BigInt::from(c.size.clone()));
                s = &s + &(&w * &(&row[map[i]] * &psi[i].conjugate()));
            }
            let m = s.scale(&BigRational::new(BigInt::one(), sub_order.clone()));
            match m.as_rational() {
                Some(r) if r.is_integer() && r >= BigRational::from(BigInt::from(0)) => {}
                _ => return false,
            }
        }
    }
    true
}
