//! Character-table interchange format (CTAB) and class-fusion search.
//!
//! The CTAB format is line-oriented UTF-8 text:
//!
//! ```text
//! name: <string>
//! order: <decimal>
//! classes:
//! <name> <size> <element_order> p<prime>-><1-based index> ...
//! matrix:
//! <cyclotomic entries separated by spaces, one row per irreducible>
//! ```
//!
//! Class names follow the ATLAS convention `<element order><letter>` (e.g.
//! `12o`).  Cyclotomic entries use the `E(n)^k` grammar of
//! [`Cyc::parse`], e.g. `3/2*E(8)^3-1`.  Power-map indices are 1-based in
//! the file and 0-based in memory.
//!
//! [`possible_fusions`] enumerates candidate class fusions of a subgroup
//! table into an ambient table under element-order preservation, power-map
//! commutation, centralizer-order divisibility and non-negative integral
//! restriction multiplicities, with a configurable node budget so that an
//! exhausted search is reported distinctly from a proven absence of fusions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chartab::CharacterTable;
use crate::cyclotomic::Cyc;

/// Errors from parsing and fusion search.
#[derive(Debug, Error)]
pub enum CtabError {
    /// The document is not valid UTF-8.
    #[error("document is not valid UTF-8: {0}")]
    Encoding(std::str::Utf8Error),
    /// Grammar violation with position information.
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        /// 1-based line number.
        line: usize,
        /// 1-based column number.
        column: usize,
        /// Description of the problem.
        msg: String,
    },
    /// Two classes share a name.
    #[error("duplicate class name {name:?} at line {line}")]
    DuplicateClass {
        /// 1-based line of the second occurrence.
        line: usize,
        /// The repeated name.
        name: String,
    },
    /// Matrix row count or row length disagrees with the class count.
    #[error("non-square matrix: {classes} classes but row {row} has {len} entries")]
    NonSquareMatrix {
        /// Number of classes.
        classes: usize,
        /// 1-based row number in the matrix block.
        row: usize,
        /// Entries found in that row.
        len: usize,
    },
    /// A pin references a missing class or contradicts the constraints.
    #[error("inconsistent pins: {0}")]
    InconsistentPins(String),
    /// The fusion search hit its node budget before completing.
    #[error("fusion search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    /// The subgroup order does not divide the ambient order.
    #[error("subgroup order {sub} does not divide ambient order {big}")]
    OrderIndivisible {
        /// Subgroup order.
        sub: BigUint,
        /// Ambient order.
        big: BigUint,
    },
}

/// One conjugacy class record of a CTAB document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    /// ATLAS-style class name.
    pub name: String,
    /// Class size.
    pub size: BigUint,
    /// Element order.
    pub element_order: u64,
    /// Power maps: prime → 0-based class index of the p-th power.
    pub power_maps: BTreeMap<u64, usize>,
}

/// An exact character table in interchange form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTabDocument {
    /// Group name.
    pub name: String,
    /// Group order.
    pub order: BigUint,
    /// Class records, parallel to the matrix columns.
    pub classes: Vec<ClassRecord>,
    /// Irreducible characters as rows.
    pub matrix: Vec<Vec<Cyc>>,
}

impl CTabDocument {
    /// Number of classes (= number of irreducibles).
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the named class.
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Index of the identity class (element order 1), if present.
    pub fn identity_class(&self) -> Option<usize> {
        self.classes.iter().position(|c| c.element_order == 1)
    }

    /// Centralizer order of class `j` (order divided by class size).
    pub fn centralizer_order(&self, j: usize) -> BigUint {
        &self.order / &self.classes[j].size
    }

    /// Degree (value on the identity class) of row `t` as an integer, when
    /// it is one.
    pub fn degree(&self, t: usize) -> Option<BigInt> {
        let id = self.identity_class()?;
        self.matrix[t][id].as_integer()
    }
}

// ---------------------------------------------------------------------------
// Parsing and serialization.

/// Parses a CTAB document.
///
/// # Errors
/// [`CtabError::Encoding`], [`CtabError::Parse`],
/// [`CtabError::DuplicateClass`] and [`CtabError::NonSquareMatrix`] per the
/// grammar in the module documentation.
pub fn parse_ctab(bytes: &[u8]) -> Result<CTabDocument, CtabError> {
    let text = std::str::from_utf8(bytes).map_err(CtabError::Encoding)?;
    let mut name: Option<String> = None;
    let mut order: Option<BigUint> = None;
    let mut classes: Vec<ClassRecord> = Vec::new();
    let mut raw_power_maps: Vec<Vec<(u64, usize, usize)>> = Vec::new();
    let mut matrix: Vec<Vec<Cyc>> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        Header,
        Classes,
        Matrix,
    }
    let mut section = Section::Header;

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        let lno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match section {
            Section::Header => {
                if let Some(v) = line.strip_prefix("name:") {
                    name = Some(v.trim().to_string());
                } else if let Some(v) = line.strip_prefix("order:") {
                    let v = v.trim();
                    order = Some(v.parse::<BigUint>().map_err(|_| CtabError::Parse {
                        line: lno,
                        column: raw_line.find(v).map_or(1, |c| c + 1),
                        msg: format!("invalid order {v:?}"),
                    })?);
                } else if line == "classes:" {
                    if name.is_none() || order.is_none() {
                        return Err(CtabError::Parse {
                            line: lno,
                            column: 1,
                            msg: "classes block before name/order header".to_string(),
                        });
                    }
                    section = Section::Classes;
                } else {
                    return Err(CtabError::Parse {
                        line: lno,
                        column: 1,
                        msg: format!("unexpected header line {line:?}"),
                    });
                }
            }
            Section::Classes => {
                if line == "matrix:" {
                    section = Section::Matrix;
                    continue;
                }
                let mut fields = line.split_whitespace();
                let cname = fields.next().expect("nonempty line").to_string();
                if classes.iter().any(|c| c.name == cname) {
                    return Err(CtabError::DuplicateClass {
                        line: lno,
                        name: cname,
                    });
                }
                let size_s = fields.next().ok_or(CtabError::Parse {
                    line: lno,
                    column: line.len(),
                    msg: "missing class size".to_string(),
                })?;
                let size = size_s.parse::<BigUint>().map_err(|_| CtabError::Parse {
                    line: lno,
                    column: raw_line.find(size_s).map_or(1, |c| c + 1),
                    msg: format!("invalid class size {size_s:?}"),
                })?;
                let order_s = fields.next().ok_or(CtabError::Parse {
                    line: lno,
                    column: line.len(),
                    msg: "missing element order".to_string(),
                })?;
                let element_order = order_s.parse::<u64>().map_err(|_| CtabError::Parse {
                    line: lno,
                    column: raw_line.find(order_s).map_or(1, |c| c + 1),
                    msg: format!("invalid element order {order_s:?}"),
                })?;
                let mut pm = Vec::new();
                for field in fields {
                    let col = raw_line.find(field).map_or(1, |c| c + 1);
                    let bad = |msg: String| CtabError::Parse {
                        line: lno,
                        column: col,
                        msg,
                    };
                    let rest = field
                        .strip_prefix('p')
                        .ok_or_else(|| bad(format!("expected p<prime>-><index>, got {field:?}")))?;
                    let (prime_s, idx_s) = rest
                        .split_once("->")
                        .ok_or_else(|| bad(format!("expected p<prime>-><index>, got {field:?}")))?;
                    let prime = prime_s
                        .parse::<u64>()
                        .map_err(|_| bad(format!("invalid prime {prime_s:?}")))?;
                    let idx = idx_s
                        .parse::<usize>()
                        .map_err(|_| bad(format!("invalid class index {idx_s:?}")))?;
                    if idx == 0 {
                        return Err(bad("power-map indices are 1-based".to_string()));
                    }
                    pm.push((prime, idx - 1, lno));
                }
                raw_power_maps.push(pm);
                classes.push(ClassRecord {
                    name: cname,
                    size,
                    element_order,
                    power_maps: BTreeMap::new(),
                });
            }
            Section::Matrix => {
                let mut row = Vec::new();
                for entry in line.split_whitespace() {
                    let col = raw_line.find(entry).map_or(1, |c| c + 1);
                    let value = Cyc::parse(entry).map_err(|e| CtabError::Parse {
                        line: lno,
                        column: col,
                        msg: format!("bad cyclotomic {entry:?}: {e}"),
                    })?;
                    row.push(value);
                }
                if row.len() != classes.len() {
                    return Err(CtabError::NonSquareMatrix {
                        classes: classes.len(),
                        row: matrix.len() + 1,
                        len: row.len(),
                    });
                }
                matrix.push(row);
            }
        }
    }

    if section == Section::Header {
        return Err(CtabError::Parse {
            line: text.lines().count().max(1),
            column: 1,
            msg: "missing classes block".to_string(),
        });
    }
    if matrix.len() != classes.len() {
        return Err(CtabError::NonSquareMatrix {
            classes: classes.len(),
            row: matrix.len(),
            len: matrix.last().map_or(0, Vec::len),
        });
    }
    for (j, pm) in raw_power_maps.into_iter().enumerate() {
        for (prime, idx, lno) in pm {
            if idx >= classes.len() {
                return Err(CtabError::Parse {
                    line: lno,
                    column: 1,
                    msg: format!("power-map index {} out of range", idx + 1),
                });
            }
            classes[j].power_maps.insert(prime, idx);
        }
    }
    Ok(CTabDocument {
        name: name.expect("checked at section switch"),
        order: order.expect("checked at section switch"),
        classes,
        matrix,
    })
}

/// Canonical text form; [`parse_ctab`] of the output reproduces the
/// document exactly.
pub fn serialize_ctab(doc: &CTabDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", doc.name);
    let _ = writeln!(out, "order: {}", doc.order);
    let _ = writeln!(out, "classes:");
    for c in &doc.classes {
        let _ = write!(out, "{} {} {}", c.name, c.size, c.element_order);
        for (p, idx) in &c.power_maps {
            let _ = write!(out, " p{}->{}", p, idx + 1);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "matrix:");
    for row in &doc.matrix {
        let entries: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", entries.join(" "));
    }
    out
}

/// Converts a computed [`CharacterTable`] into interchange form.
pub fn document_from_table(t: &CharacterTable) -> CTabDocument {
    let classes = (0..t.class_count())
        .map(|j| ClassRecord {
            name: t.class_names[j].clone(),
            size: t.class_sizes[j].clone(),
            element_order: t.class_orders[j],
            power_maps: t.power_maps.iter().map(|(p, m)| (*p, m[j])).collect(),
        })
        .collect();
    CTabDocument {
        name: t.name.clone(),
        order: t.order.clone(),
        classes,
        matrix: t.irreducibles.clone(),
    }
}

// ---------------------------------------------------------------------------
// Validation.

/// Outcome of [`validate_ctab`]: the list of violations found.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    /// Human-readable violations; empty means the table is consistent.
    pub violations: Vec<String>,
}

impl ValidationReport {
    /// Whether no violations were found.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks structural coherence, size and degree sums, exact row and column
/// orthogonality, and power-map order consistency.  Violations become
/// report entries; the function itself does not fail.
pub fn validate_ctab(doc: &CTabDocument) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut flag = |msg: String| report.violations.push(msg);

    let k = doc.classes.len();
    if k == 0 {
        flag("table has no classes".to_string());
        return report;
    }
    if doc.matrix.len() != k {
        flag(format!(
            "{} irreducibles for {} classes",
            doc.matrix.len(),
            k
        ));
        return report;
    }
    if doc.order.is_zero() {
        flag("group order is zero".to_string());
        return report;
    }

    let identity = match doc.identity_class() {
        Some(j) => j,
        None => {
            flag("no class of element order 1".to_string());
            return report;
        }
    };
    if doc.classes[identity].size != BigUint::one() {
        flag(format!(
            "identity class {} has size {}",
            doc.classes[identity].name, doc.classes[identity].size
        ));
    }

    let size_sum: BigUint = doc.classes.iter().map(|c| c.size.clone()).sum();
    if size_sum != doc.order {
        flag(format!(
            "class sizes sum to {size_sum}, group order is {}",
            doc.order
        ));
    }

    let mut degree_square_sum = BigInt::zero();
    for (t, row) in doc.matrix.iter().enumerate() {
        match row[identity].as_integer() {
            Some(d) if d > BigInt::zero() => degree_square_sum += &d * &d,
            _ => flag(format!(
                "row {} has non-positive or non-integral degree",
                t + 1
            )),
        }
    }
    if degree_square_sum != BigInt::from(doc.order.clone()) {
        flag(format!(
            "degree squares sum to {degree_square_sum}, group order is {}",
            doc.order
        ));
    }

    // Row orthogonality: Σ_j |class_j|·χ_r(j)·conj(χ_s(j)) = δ_rs·|G|.
    let order_cyc = Cyc::from_bigint(BigInt::from(doc.order.clone()));
    for r in 0..k {
        for s in r..k {
            let mut sum = Cyc::zero();
            for j in 0..k {
                let w = Cyc::from_bigint(BigInt::from(doc.classes[j].size.clone()));
                sum = &sum + &(&w * &(&doc.matrix[r][j] * &doc.matrix[s][j].conjugate()));
            }
            let expect = if r == s {
                order_cyc.clone()
            } else {
                Cyc::zero()
            };
            if sum != expect {
                flag(format!(
                    "row orthogonality fails for rows {} and {}",
                    r + 1,
                    s + 1
                ));
            }
        }
    }

    // Column orthogonality: Σ_t χ_t(i)·conj(χ_t(j)) = δ_ij·|C(i)|.
    for i in 0..k {
        for j in i..k {
            let mut sum = Cyc::zero();
            for row in &doc.matrix {
                sum = &sum + &(&row[i] * &row[j].conjugate());
            }
            let expect = if i == j {
                Cyc::from_bigint(BigInt::from(doc.centralizer_order(i)))
            } else {
                Cyc::zero()
            };
            if sum != expect {
                flag(format!(
                    "column orthogonality fails for classes {} and {}",
                    doc.classes[i].name, doc.classes[j].name
                ));
            }
        }
    }

    // Power-map order consistency: ord(x^p) = ord(x)/gcd(ord(x), p).
    for c in &doc.classes {
        for (&p, &img) in &c.power_maps {
            if img >= k {
                flag(format!(
                    "class {} power map p{} points out of range",
                    c.name, p
                ));
                continue;
            }
            let expected = c.element_order / c.element_order.gcd(&p);
            if doc.classes[img].element_order != expected {
                flag(format!(
                    "class {} (order {}) maps under p{} to {} (order {}), expected order {}",
                    c.name,
                    c.element_order,
                    p,
                    doc.classes[img].name,
                    doc.classes[img].element_order,
                    expected
                ));
            }
        }
    }

    report
}

// ---------------------------------------------------------------------------
// Fusion search.

/// A candidate class fusion: subgroup class index → ambient class index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FusionMap {
    /// `map[i]` is the ambient class receiving subgroup class `i`.
    pub map: Vec<usize>,
}

impl FusionMap {
    /// Renders the fusion as `subname->bigname` pairs.
    pub fn describe(&self, sub: &CTabDocument, big: &CTabDocument) -> String {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{}->{}", sub.classes[i].name, big.classes[j].name))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Default node budget for [`possible_fusions`].
pub const DEFAULT_FUSION_BUDGET: u64 = 5_000_000;

/// Enumerates all class fusions of `sub` into `big` compatible with the
/// constraint set (element orders, power maps, centralizer divisibility,
/// integral non-negative restriction multiplicities) and the pinned
/// assignments, in lexicographic order of the index maps.
///
/// # Errors
/// [`CtabError::OrderIndivisible`] when the group orders are incompatible;
/// [`CtabError::InconsistentPins`] when a pin names a missing class or
/// violates a local constraint; [`CtabError::BudgetExhausted`] when the
/// search exceeds `budget` visited nodes (distinct from an empty result,
/// which proves no fusion passes the constraints).
pub fn possible_fusions(
    sub: &CTabDocument,
    big: &CTabDocument,
    pins: &[(String, String)],
    budget: u64,
) -> Result<Vec<FusionMap>, CtabError> {
    if !(&big.order % &sub.order).is_zero() {
        return Err(CtabError::OrderIndivisible {
            sub: sub.order.clone(),
            big: big.order.clone(),
        });
    }
    let k = sub.class_count();

    // Local candidate sets.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut cs = Vec::new();
        for j in 0..big.class_count() {
            if sub.classes[i].element_order != big.classes[j].element_order {
                continue;
            }
            // C_sub(x) ⊆ C_big(x), so the subgroup centralizer order divides
            // the ambient one.
            if !(&big.centralizer_order(j) % &sub.centralizer_order(i)).is_zero() {
                continue;
            }
            cs.push(j);
        }
        candidates.push(cs);
    }

    for (sname, bname) in pins {
        let i = sub
            .class_index(sname)
            .ok_or_else(|| CtabError::InconsistentPins(format!("no subgroup class {sname:?}")))?;
        let j = big
            .class_index(bname)
            .ok_or_else(|| CtabError::InconsistentPins(format!("no ambient class {bname:?}")))?;
        if !candidates[i].contains(&j) {
            return Err(CtabError::InconsistentPins(format!(
                "pin {sname}->{bname} violates order/centralizer constraints"
            )));
        }
        candidates[i] = vec![j];
    }

    let mut out = Vec::new();
    let mut assignment = vec![usize::MAX; k];
    let mut nodes = 0u64;
    search(
        sub,
        big,
        &candidates,
        &mut assignment,
        0,
        &mut nodes,
        budget,
        &mut out,
    )?;
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    sub: &CTabDocument,
    big: &CTabDocument,
    candidates: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    i: usize,
    nodes: &mut u64,
    budget: u64,
    out: &mut Vec<FusionMap>,
) -> Result<(), CtabError> {
    if i == assignment.len() {
        if restriction_multiplicities_ok(sub, big, assignment) {
            out.push(FusionMap {
                map: assignment.clone(),
            });
        }
        return Ok(());
    }
    for &j in &candidates[i] {
        *nodes += 1;
        if *nodes > budget {
            return Err(CtabError::BudgetExhausted(budget));
        }
        assignment[i] = j;
        if power_maps_consistent(sub, big, assignment, i) {
            search(sub, big, candidates, assignment, i + 1, nodes, budget, out)?;
        }
        assignment[i] = usize::MAX;
    }
    Ok(())
}

/// Checks every subgroup power map whose source or target is class `i`
/// against the ambient power maps, over the assigned part of the map.
fn power_maps_consistent(
    sub: &CTabDocument,
    big: &CTabDocument,
    assignment: &[usize],
    i: usize,
) -> bool {
    let check_one = |src: usize| -> bool {
        for (&p, &tgt) in &sub.classes[src].power_maps {
            if assignment[src] == usize::MAX || assignment[tgt] == usize::MAX {
                continue;
            }
            match big.classes[assignment[src]].power_maps.get(&p) {
                Some(&big_tgt) => {
                    if big_tgt != assignment[tgt] {
                        return false;
                    }
                }
                None => continue,
            }
        }
        true
    };
    if !check_one(i) {
        return false;
    }
    for (src, c) in sub.classes.iter().enumerate() {
        if src != i && c.power_maps.values().any(|&t| t == i) && !check_one(src) {
            return false;
        }
    }
    true
}

/// Restriction test: every ambient irreducible pulled back along the fusion
/// must decompose in the subgroup's irreducibles with non-negative integral
/// multiplicities.
fn restriction_multiplicities_ok(
    sub: &CTabDocument,
    big: &CTabDocument,
    assignment: &[usize],
) -> bool {
    let k = sub.class_count();
    for big_row in &big.matrix {
        let restricted: Vec<&Cyc> = assignment.iter().map(|&j| &big_row[j]).collect();
        for sub_row in &sub.matrix {
            let mut sum = Cyc::zero();
            for j in 0..k {
                let w = Cyc::from_bigint(BigInt::from(sub.classes[j].size.clone()));
                sum = &sum + &(&w * &(restricted[j] * &sub_row[j].conjugate()));
            }
            // sum / |sub| must be a non-negative integer.
            let Some(q) = sum.as_rational() else {
                return false;
            };
            let scaled = q / num_rational::BigRational::from(BigInt::from(sub.order.clone()));
            if !scaled.is_integer() || scaled < num_rational::BigRational::zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::symmetric_table;
    use crate::gf2group::{GroupHandle, MatrixGF2};

    fn perm6(images: [usize; 6]) -> MatrixGF2 {
        let mut rows = vec![0u128; 6];
        for (j, &i) in images.iter().enumerate() {
            rows[i] |= 1 << j;
        }
        MatrixGF2::from_rows(6, rows)
    }

    fn z2_doc() -> CTabDocument {
        let gens = vec![perm6([1, 0, 2, 3, 4, 5])];
        let handle = GroupHandle::new(gens).unwrap();
        let table = crate::chartab::character_table(&handle, "Z2").unwrap();
        document_from_table(&table)
    }

    fn s3_doc() -> CTabDocument {
        let gens = vec![perm6([1, 0, 2, 3, 4, 5]), perm6([1, 2, 0, 3, 4, 5])];
        let handle = GroupHandle::new(gens).unwrap();
        let table = crate::chartab::character_table(&handle, "S3").unwrap();
        document_from_table(&table)
    }

    fn s6_doc() -> CTabDocument {
        document_from_table(&symmetric_table(6).unwrap())
    }

    #[test]
    fn round_trip_is_identity() {
        for doc in [z2_doc(), s3_doc(), s6_doc()] {
            let text = serialize_ctab(&doc);
            let back = parse_ctab(text.as_bytes()).unwrap();
            assert_eq!(back, doc);
            assert_eq!(serialize_ctab(&back), text);
        }
    }

    #[test]
    fn computed_tables_validate_cleanly() {
        for doc in [z2_doc(), s3_doc(), s6_doc()] {
            let report = validate_ctab(&doc);
            assert!(report.is_clean(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn grammar_errors_carry_positions() {
        let err = parse_ctab(b"name: X\norder: nonsense\n").unwrap_err();
        match err {
            CtabError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_ctab(b"order: 2\nclasses:\n").unwrap_err();
        assert!(matches!(err, CtabError::Parse { .. }));
        let doc = b"name: X\norder: 2\nclasses:\n1a 1 1\n1a 1 1\nmatrix:\n1 1\n1 -1\n";
        assert!(matches!(
            parse_ctab(doc),
            Err(CtabError::DuplicateClass { line: 5, .. })
        ));
        let doc = b"name: X\norder: 2\nclasses:\n1a 1 1\n2a 1 2\nmatrix:\n1 1 1\n";
        assert!(matches!(
            parse_ctab(doc),
            Err(CtabError::NonSquareMatrix { .. })
        ));
    }

    #[test]
    fn fancy_cyclotomic_entries_parse_exactly() {
        let doc = b"name: X\norder: 1\nclasses:\n1a 1 1\nmatrix:\n3/2*E(8)^3-1\n";
        let parsed = parse_ctab(doc).unwrap();
        let expect = Cyc::parse("3/2*E(8)^3-1").unwrap();
        assert_eq!(parsed.matrix[0][0], expect);
    }

    #[test]
    fn validation_flags_corruption() {
        let mut doc = s3_doc();
        doc.matrix[1][1] = Cyc::from_integer(5);
        let report = validate_ctab(&doc);
        assert!(!report.is_clean());
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("orthogonality")));

        let mut doc = s3_doc();
        doc.classes[2].size = BigUint::from(1u32);
        let report = validate_ctab(&doc);
        assert!(report.violations.iter().any(|v| v.contains("sizes sum")));

        let report = validate_ctab(&CTabDocument {
            name: "empty".to_string(),
            order: BigUint::one(),
            classes: vec![],
            matrix: vec![],
        });
        assert!(!report.is_clean());
    }

    #[test]
    fn z2_into_s3_has_exactly_one_fusion() {
        let sub = z2_doc();
        let big = s3_doc();
        let fusions = possible_fusions(&sub, &big, &[], DEFAULT_FUSION_BUDGET).unwrap();
        assert_eq!(fusions.len(), 1);
        let f = &fusions[0];
        assert_eq!(
            big.classes[f.map[sub.class_index("1a").unwrap()]].name,
            "1a"
        );
        assert_eq!(
            big.classes[f.map[sub.class_index("2a").unwrap()]].name,
            "2a"
        );
    }

    #[test]
    fn s3_into_s6_contains_the_true_fusion_and_matches_brute_force() {
        let sub = s3_doc();
        let big = s6_doc();
        let fusions = possible_fusions(&sub, &big, &[], DEFAULT_FUSION_BUDGET).unwrap();

        // Brute-force oracle: try every order-preserving assignment and
        // keep those with integral non-negative restriction multiplicities
        // and commuting power maps (full depth, no pruning shortcuts).
        let mut oracle = Vec::new();
        let k = sub.class_count();
        let mut stack = vec![Vec::<usize>::new()];
        while let Some(partial) = stack.pop() {
            if partial.len() == k {
                let full_ok = (0..k).all(|src| {
                    sub.classes[src].power_maps.iter().all(|(&p, &tgt)| {
                        big.classes[partial[src]]
                            .power_maps
                            .get(&p)
                            .is_none_or(|&bt| bt == partial[tgt])
                    })
                });
                if full_ok && restriction_multiplicities_ok(&sub, &big, &partial) {
                    oracle.push(FusionMap { map: partial });
                }
                continue;
            }
            let i = partial.len();
            for j in 0..big.class_count() {
                if sub.classes[i].element_order != big.classes[j].element_order {
                    continue;
                }
                if !(&big.centralizer_order(j) % &sub.centralizer_order(i)).is_zero() {
                    continue;
                }
                let mut next = partial.clone();
                next.push(j);
                stack.push(next);
            }
        }
        oracle.sort();
        assert_eq!(fusions, oracle);

        // The true embedding ⟨(12),(123)⟩ ⊂ S6 fuses by cycle type:
        // transpositions → 2a (type 2.1⁴), 3-cycles → 3a (type 3.1³).
        let true_map = FusionMap {
            map: vec![
                big.class_index("1a").unwrap(),
                big.class_index("2a").unwrap(),
                big.class_index("3a").unwrap(),
            ],
        };
        assert!(
            fusions.contains(&true_map),
            "true fusion missing from {:?}",
            fusions
                .iter()
                .map(|f| f.describe(&sub, &big))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn pins_are_enforced_and_checked() {
        let sub = s3_doc();
        let big = s6_doc();
        let pinned = possible_fusions(
            &sub,
            &big,
            &[("3a".to_string(), "3a".to_string())],
            DEFAULT_FUSION_BUDGET,
        )
        .unwrap();
        assert!(!pinned.is_empty());
        assert!(pinned
            .iter()
            .all(|f| big.classes[f.map[sub.class_index("3a").unwrap()]].name == "3a"));

        // Pinning the identity to a non-identity class is inconsistent.
        let err = possible_fusions(
            &sub,
            &big,
            &[("1a".to_string(), "2a".to_string())],
            DEFAULT_FUSION_BUDGET,
        )
        .unwrap_err();
        assert!(matches!(err, CtabError::InconsistentPins(_)));
    }

    #[test]
    fn tiny_budget_is_reported_as_exhausted() {
        let sub = s3_doc();
        let big = s6_doc();
        let err = possible_fusions(&sub, &big, &[], 2).unwrap_err();
        assert!(matches!(err, CtabError::BudgetExhausted(2)));
    }

    #[test]
    fn order_divisibility_is_required() {
        let err = possible_fusions(&s3_doc(), &z2_doc(), &[], DEFAULT_FUSION_BUDGET).unwrap_err();
        assert!(matches!(err, CtabError::OrderIndivisible { .. }));
    }
}
