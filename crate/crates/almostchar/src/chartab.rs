//! Character tables of small groups.
//!
//! The generic path is the Dixon–Schneider class-algebra algorithm: class
//! matrices are split into common eigenspaces over a prime field 𝔽_ℓ with
//! ℓ ≡ 1 (mod exponent(G)) and ℓ² > 4|G|, and the character values are then
//! lifted to exact cyclotomic numbers through a discrete Fourier transform
//! over the power maps.  A Murnaghan–Nakayama implementation for symmetric
//! groups 𝔖_n (n ≤ 10) serves as an independent oracle.  On top of the
//! tables sit the standard scalar product, permutation characters of coset
//! actions, and exact decomposition into irreducibles.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclotomic::Cyc;
use crate::gf2group::{ConjClassList, CosetAction, GroupError, GroupHandle};

/// Error type for character-table computations.
#[derive(Debug, thiserror::Error)]
pub enum ChartabError {
    /// Underlying group computation failed (bound exceeded, membership, …).
    #[error(transparent)]
    Group(#[from] GroupError),
    /// `symmetric_table` accepts only 1 ≤ n ≤ 10.
    #[error("symmetric-group size {0} outside the supported range 1..=10")]
    SymmetricSizeOutOfRange(u64),
    /// A class function was used with a table it does not belong to.
    #[error("class function belongs to table {got:?}, expected {expected:?}")]
    TableMismatch {
        /// Name of the table the operation ran on.
        expected: String,
        /// Name recorded in the class function.
        got: String,
    },
    /// Class data (count or sizes) does not match the table.
    #[error("class data does not match the table")]
    ClassListMismatch,
    /// `decompose` was given a function that is not a virtual character.
    #[error("multiplicity of irreducible {index} is not a rational integer (⟨f,χ⟩ = {value})")]
    NonIntegralMultiplicity {
        /// Index of the offending irreducible.
        index: usize,
        /// The non-integral inner product, canonically formatted.
        value: String,
    },
}

/// An exact character table.
///
/// Rows are irreducible characters sorted by degree and then by
/// lexicographic value vectors; columns are conjugacy classes in the
/// canonical order (element order, then size, then representative).  Class
/// names follow the ATLAS convention `1a`, `2a`, `2b`, ….
#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// Identifier used to match class functions to their table.
    pub name: String,
    /// Group order.
    pub order: BigUint,
    /// ATLAS-style class names, parallel to the columns.
    pub class_names: Vec<String>,
    /// Class sizes.
    pub class_sizes: Vec<BigUint>,
    /// Element orders of the class representatives.
    pub class_orders: Vec<u64>,
    /// For each prime dividing the group order, the class map of p-th powers.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    /// Column index of the class of the identity.
    pub identity_class: usize,
    /// Irreducible characters: `irreducibles[t][j]` is χ_t on class j.
    pub irreducibles: Vec<Vec<Cyc>>,
}

impl CharacterTable {
    /// Number of classes (= number of irreducibles).
    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Degree of the t-th irreducible.
    pub fn degree(&self, t: usize) -> BigInt {
        self.irreducibles[t][self.identity_class]
            .as_integer()
            .expect("character degrees are integers")
    }

    /// Centralizer order of the j-th class.
    pub fn centralizer_order(&self, j: usize) -> BigUint {
        &self.order / &self.class_sizes[j]
    }

    /// Column index of a class, addressed by ATLAS name.
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|n| n == name)
    }

    /// The t-th irreducible as a class function.
    pub fn irreducible(&self, t: usize) -> ClassFunction {
        ClassFunction {
            table_name: self.name.clone(),
            values: self.irreducibles[t].clone(),
        }
    }

    /// Builds a class function on this table after a length check.
    pub fn class_function(&self, values: Vec<Cyc>) -> Result<ClassFunction, ChartabError> {
        if values.len() != self.class_count() {
            return Err(ChartabError::ClassListMismatch);
        }
        Ok(ClassFunction {
            table_name: self.name.clone(),
            values,
        })
    }

    fn check_function(&self, f: &ClassFunction) -> Result<(), ChartabError> {
        if f.table_name != self.name {
            return Err(ChartabError::TableMismatch {
                expected: self.name.clone(),
                got: f.table_name.clone(),
            });
        }
        if f.values.len() != self.class_count() {
            return Err(ChartabError::ClassListMismatch);
        }
        Ok(())
    }

    /// Asserts exact row orthogonality; used as a construction-time
    /// self-check for computed tables.
    fn assert_row_orthogonality(&self) {
        let order = Cyc::from_bigint(BigInt::from(self.order.clone()));
        for s in 0..self.class_count() {
            for t in s..self.class_count() {
                let mut sum = Cyc::zero();
                for j in 0..self.class_count() {
                    let size = Cyc::from_bigint(BigInt::from(self.class_sizes[j].clone()));
                    sum = &sum
                        + &(&size
                            * &(&self.irreducibles[s][j] * &self.irreducibles[t][j].conjugate()));
                }
                let expect = if s == t { order.clone() } else { Cyc::zero() };
                assert!(sum == expect, "row orthogonality failed at ({s},{t})");
            }
        }
    }
}

/// A class function on a fixed character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    /// Name of the table the values are indexed against.
    pub table_name: String,
    /// One value per class, in column order.
    pub values: Vec<Cyc>,
}

/// ATLAS-style class names from the element orders of canonically ordered
/// classes: `1a`, `2a`, `2b`, …; letters continue `aa`, `ab`, … past `z`.
pub(crate) fn atlas_names(element_orders: &[u64]) -> Vec<String> {
    fn letters(mut i: usize) -> String {
        let mut s = String::new();
        if i >= 26 {
            i -= 26;
            s.push((b'a' + (i / 26) as u8) as char);
            s.push((b'a' + (i % 26) as u8) as char);
        } else {
            s.push((b'a' + i as u8) as char);
        }
        s
    }
    let mut counts: HashMap<u64, usize> = HashMap::new();
    element_orders
        .iter()
        .map(|&o| {
            let c = counts.entry(o).or_insert(0);
            let name = format!("{}{}", o, letters(*c));
            *c += 1;
            name
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Modular arithmetic helpers for the Dixon–Schneider prime field.

fn mod_pow(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, l: u64) -> u64 {
    mod_pow(a, l - 2, l)
}

fn is_prime(n: u64) -> bool {
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

/// Smallest prime ℓ ≡ 1 (mod exponent) with ℓ² > 4·order.
fn dixon_prime(order: u64, exponent: u64) -> u64 {
    let mut l = exponent + 1;
    loop {
        if (l as u128) * (l as u128) > 4 * order as u128 && is_prime(l) {
            return l;
        }
        l += exponent;
    }
}

fn primitive_root(l: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = l - 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            factors.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..l)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, (l - 1) / f, l) != 1))
        .expect("prime fields have primitive roots")
}

/// Reduced row echelon form in place; returns the pivot columns.  Zero rows
/// are removed.
fn rref(rows: &mut Vec<Vec<u64>>, l: u64) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        if let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] != 0) {
            rows.swap(rank, r);
            let inv = mod_inv(rows[rank][col], l);
            for c in 0..width {
                rows[rank][c] = rows[rank][c] * inv % l;
            }
            for rr in 0..rows.len() {
                if rr != rank && rows[rr][col] != 0 {
                    let f = rows[rr][col];
                    for c in 0..width {
                        rows[rr][c] = (rows[rr][c] + (l - f) * rows[rank][c]) % l;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Kernel basis of a square matrix over 𝔽_ℓ, rows in RREF coordinates.
fn kernel_basis(mat: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut m: Vec<Vec<u64>> = mat.to_vec();
    let pivots = rref(&mut m, l);
    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = (l - m[r][free]) % l;
        }
        kernel.push(v);
    }
    kernel
}

// ---------------------------------------------------------------------------
// Dixon–Schneider.

/// Computes the exact character table of a group within the enumeration
/// bound, via class matrices over 𝔽_ℓ and an exact cyclotomic lift.
///
/// # Errors
/// Propagates [`GroupError::OrderExceedsBound`] from class enumeration.
pub fn character_table(g: &GroupHandle, name: &str) -> Result<CharacterTable, ChartabError> {
    let (classes, class_of) = g.conjugacy_partition()?;
    let order = g
        .group_order()
        .to_u64()
        .expect("order bounded by successful enumeration");
    let k = classes.len();

    // Members per class for structure-constant counting.
    let elements = g.elements()?;
    let mut members: Vec<Vec<crate::gf2group::MatrixGF2>> = vec![Vec::new(); k];
    for e in elements {
        let j = class_of[&e];
        members[j].push(e);
    }

    let exponent = classes.element_orders.iter().fold(1u64, |a, &b| a.lcm(&b));
    let l = dixon_prime(order, exponent);
    let z_e = mod_pow(primitive_root(l), (l - 1) / exponent, l);

    // Class matrix M_i with (M_i)[j][k] = #{x ∈ C_i : x⁻¹·rep_k ∈ C_j};
    // the common eigenvectors of all M_i are the central characters.
    let class_matrix = |i: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; k]; k];
        for x in &members[i] {
            let xi = x.inverse().expect("group element");
            for (kk, rep) in classes.representatives.iter().enumerate() {
                let j = class_of[&xi.mul(rep)];
                m[j][kk] += 1;
            }
        }
        for row in &mut m {
            for v in row {
                *v %= l;
            }
        }
        m
    };

    // Split the full space into common eigenspaces, smallest classes first.
    let mut split_order: Vec<usize> = (1..k).collect();
    split_order.sort_by_key(|&i| (classes.sizes[i], i));
    let mut subspaces: Vec<Vec<Vec<u64>>> = vec![{
        let mut id = vec![vec![0u64; k]; k];
        for (r, row) in id.iter_mut().enumerate() {
            row[r] = 1;
        }
        id
    }];
    for &i in &split_order {
        if subspaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(i);
        let mut next = Vec::new();
        for basis in subspaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            // Restriction R of M to the subspace: with the basis in RREF,
            // the coefficient of basis row r in any member vector is its
            // entry at the r-th pivot column.
            let mut b = basis.clone();
            let pivots = rref(&mut b, l);
            let d = b.len();
            let images: Vec<Vec<u64>> = b
                .iter()
                .map(|v| {
                    (0..k)
                        .map(|row| {
                            let mut acc = 0u64;
                            for (c, &vc) in v.iter().enumerate() {
                                acc = (acc + m[row][c] * vc) % l;
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let mut r_mat = vec![vec![0u64; d]; d];
            for (c, img) in images.iter().enumerate() {
                for (r, &pc) in pivots.iter().enumerate() {
                    r_mat[r][c] = img[pc];
                }
            }
            let mut found = 0;
            for lambda in 0..l {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| {
                                if r == c {
                                    (r_mat[r][c] + l - lambda) % l
                                } else {
                                    r_mat[r][c]
                                }
                            })
                            .collect()
                    })
                    .collect();
                let ker = kernel_basis(&shifted, l);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|coords| {
                        let mut v = vec![0u64; k];
                        for (r, &cr) in coords.iter().enumerate() {
                            for c in 0..k {
                                v[c] = (v[c] + cr * b[r][c]) % l;
                            }
                        }
                        v
                    })
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            assert_eq!(found, d, "class matrix must act diagonalizably");
        }
        subspaces = next;
    }
    assert!(
        subspaces.iter().all(|s| s.len() == 1),
        "class matrices must separate all central characters"
    );

    // Normalize each eigenvector at the identity class to get the central
    // characters ω(j) = |C_j|·χ(g_j)/χ(1) over 𝔽_ℓ.
    let omegas: Vec<Vec<u64>> = subspaces
        .into_iter()
        .map(|s| {
            let v = &s[0];
            let c = v[0];
            assert!(c != 0, "central character is 1 at the identity");
            let inv = mod_inv(c, l);
            v.iter().map(|&x| x * inv % l).collect()
        })
        .collect();

    // Inverse-class table and degrees via Σ_j ω(j)ω(j*)/n_j = |G|/d².
    let inv_class: Vec<usize> = classes
        .representatives
        .iter()
        .map(|r| class_of[&r.inverse().expect("group element")])
        .collect();
    let sizes_mod: Vec<u64> = classes.sizes.iter().map(|&s| s % l).collect();
    let sqrt_order = (order as f64).sqrt() as u64 + 1;
    let mut rows: Vec<(BigInt, Vec<Cyc>)> = Vec::with_capacity(k);
    for omega in &omegas {
        let mut s = 0u64;
        for j in 0..k {
            s = (s + omega[j] * omega[inv_class[j]] % l * mod_inv(sizes_mod[j], l)) % l;
        }
        let target = order % l * mod_inv(s, l) % l;
        let degree = (1..=sqrt_order)
            .find(|&d| d % l * (d % l) % l == target)
            .expect("degree is determined uniquely below √|G|");
        // Character values mod ℓ on every class.
        let d_mod = degree % l;
        let vals: Vec<u64> = (0..k)
            .map(|j| d_mod * omega[j] % l * mod_inv(sizes_mod[j], l) % l)
            .collect();
        // Exact lift: on a class of element order m, χ = Σ_r c_r ζ_m^r with
        // c_r the eigenvalue multiplicities, recovered by a DFT over powers.
        let mut values = Vec::with_capacity(k);
        for j in 0..k {
            let m = classes.element_orders[j];
            let z_m = mod_pow(z_e, exponent / m, l);
            let z_m_inv = mod_inv(z_m, l);
            let pow_vals: Vec<u64> = (0..m)
                .map(|s| vals[class_of[&classes.representatives[j].pow(s)]])
                .collect();
            let inv_m = mod_inv(m % l, l);
            let mut terms = Vec::new();
            for r in 0..m {
                let mut acc = 0u64;
                for (s, &v) in pow_vals.iter().enumerate() {
                    acc = (acc + v * mod_pow(z_m_inv, r * s as u64 % m, l)) % l;
                }
                let c_r = acc * inv_m % l;
                if c_r != 0 {
                    terms.push((r as i64, BigRational::from_integer(BigInt::from(c_r))));
                }
            }
            values.push(Cyc::from_terms(m as u32, terms));
        }
        rows.push((BigInt::from(degree), values));
    }
    rows.sort();

    let table = CharacterTable {
        name: name.to_string(),
        order: BigUint::from(order),
        class_names: atlas_names(&classes.element_orders),
        class_sizes: classes.sizes.iter().map(|&s| BigUint::from(s)).collect(),
        class_orders: classes.element_orders.clone(),
        power_maps: classes.power_maps.clone(),
        identity_class: 0,
        irreducibles: rows.into_iter().map(|(_, v)| v).collect(),
    };
    table.assert_row_orthogonality();
    Ok(table)
}

// ---------------------------------------------------------------------------
// Symmetric-group oracle (Murnaghan–Nakayama).

/// All partitions of n, each with weakly decreasing parts.
fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(rest: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Size of the 𝔖_n class with cycle type `lambda`: n!/∏ iᵃⁱ·aᵢ!.
fn cycle_type_class_size(n: u64, lambda: &[u64]) -> u64 {
    let mut z = 1u64;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &p in lambda {
        *counts.entry(p).or_insert(0) += 1;
    }
    for (&i, &a) in &counts {
        for _ in 0..a {
            z *= i;
        }
        for f in 1..=a {
            z *= f;
        }
    }
    let fact: u64 = (1..=n).product();
    fact / z
}

/// Cycle type of the p-th power of a permutation of type `lambda`.
fn cycle_type_power(lambda: &[u64], p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for &c in lambda {
        let g = c.gcd(&p);
        for _ in 0..g {
            out.push(c / g);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// All ways to remove a border strip of the given length from `mu`,
/// returning the leftover partition and the strip's sign (−1)^height.
/// Implemented on beta numbers (first-column hook lengths).
fn strip_removals(mu: &[u64], len: u64) -> Vec<(Vec<u64>, i64)> {
    let r = mu.len();
    let beta: Vec<u64> = mu
        .iter()
        .enumerate()
        .map(|(i, &m)| m + (r - 1 - i) as u64)
        .collect();
    let mut out = Vec::new();
    for i in 0..r {
        if beta[i] < len {
            continue;
        }
        let target = beta[i] - len;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&b| target < b && b < beta[i]).count();
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts: Vec<u64> = nb
            .iter()
            .enumerate()
            .map(|(j, &b)| b - (r - 1 - j) as u64)
            .filter(|&p| p > 0)
            .collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if height % 2 == 0 { 1 } else { -1 };
        out.push((parts, sign));
    }
    out
}

fn mn_value(mu: &[u64], lambda: &[u64], memo: &mut HashMap<(Vec<u64>, Vec<u64>), i64>) -> i64 {
    if lambda.is_empty() {
        return 1;
    }
    let key = (mu.to_vec(), lambda.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let rest = &lambda[1..];
    let mut total = 0i64;
    for (smaller, sign) in strip_removals(mu, lambda[0]) {
        total += sign * mn_value(&smaller, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Cycle types labelling the columns of [`symmetric_table`], in column order.
pub fn symmetric_class_types(n: u64) -> Result<Vec<Vec<u64>>, ChartabError> {
    if !(1..=10).contains(&n) {
        return Err(ChartabError::SymmetricSizeOutOfRange(n));
    }
    let mut types = partitions(n);
    types.sort_by_key(|t| {
        let order = t.iter().fold(1u64, |a, &b| a.lcm(&b));
        (order, cycle_type_class_size(n, t), t.clone())
    });
    Ok(types)
}

/// Exact character table of 𝔖_n (n ≤ 10) by the Murnaghan–Nakayama rule.
///
/// Classes are cycle types in the canonical order (element order, then
/// size); all values are rational integers.
///
/// # Errors
/// [`ChartabError::SymmetricSizeOutOfRange`] outside 1..=10.
pub fn symmetric_table(n: u64) -> Result<CharacterTable, ChartabError> {
    let types = symmetric_class_types(n)?;
    let order: u64 = (1..=n).product();
    let sizes: Vec<u64> = types.iter().map(|t| cycle_type_class_size(n, t)).collect();
    let orders: Vec<u64> = types
        .iter()
        .map(|t| t.iter().fold(1u64, |a, &b| a.lcm(&b)))
        .collect();

    let type_index: HashMap<Vec<u64>, usize> = types
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let mut power_maps = BTreeMap::new();
    let mut p_rest = order;
    let mut p = 2u64;
    while p <= p_rest {
        if p_rest % p == 0 {
            while p_rest % p == 0 {
                p_rest /= p;
            }
            let map: Vec<usize> = types
                .iter()
                .map(|t| type_index[&cycle_type_power(t, p)])
                .collect();
            power_maps.insert(p, map);
        }
        p += 1;
    }

    let mut memo = HashMap::new();
    let mut rows: Vec<(BigInt, Vec<Cyc>)> = partitions(n)
        .iter()
        .map(|mu| {
            let values: Vec<Cyc> = types
                .iter()
                .map(|lambda| Cyc::from_integer(mn_value(mu, lambda, &mut memo)))
                .collect();
            let identity = type_index[&vec![1u64; n as usize]];
            let degree = values[identity].as_integer().expect("integral degree");
            (degree, values)
        })
        .collect();
    rows.sort();

    let identity_class = type_index[&vec![1u64; n as usize]];
    let table = CharacterTable {
        name: format!("S{n}"),
        order: BigUint::from(order),
        class_names: atlas_names(&orders),
        class_sizes: sizes.iter().map(|&s| BigUint::from(s)).collect(),
        class_orders: orders,
        power_maps,
        identity_class,
        irreducibles: rows.into_iter().map(|(_, v)| v).collect(),
    };
    table.assert_row_orthogonality();
    Ok(table)
}

// ---------------------------------------------------------------------------
// Scalar product, permutation characters, decomposition.

/// The standard scalar product ⟨f, h⟩ = |Γ|⁻¹ Σ_g f(g)·conj(h(g)), computed
/// classwise from the sizes.
///
/// # Errors
/// [`ChartabError::TableMismatch`] when either function belongs elsewhere.
pub fn inner_product(
    t: &CharacterTable,
    f: &ClassFunction,
    h: &ClassFunction,
) -> Result<Cyc, ChartabError> {
    t.check_function(f)?;
    t.check_function(h)?;
    let mut sum = Cyc::zero();
    for j in 0..t.class_count() {
        let size = Cyc::from_bigint(BigInt::from(t.class_sizes[j].clone()));
        sum = &sum + &(&size * &(&f.values[j] * &h.values[j].conjugate()));
    }
    let inv_order = BigRational::new(BigInt::one(), BigInt::from(t.order.clone()));
    Ok(sum.scale(&inv_order))
}

/// Character of a coset action: the value on each class is the number of
/// cosets fixed by the class representative.
///
/// # Errors
/// [`ChartabError::ClassListMismatch`] when the class list does not match
/// the table; group errors if a representative is not in the acting group.
pub fn permutation_character(
    action: &CosetAction,
    classes: &ConjClassList,
    table: &CharacterTable,
) -> Result<ClassFunction, ChartabError> {
    if classes.len() != table.class_count()
        || classes
            .sizes
            .iter()
            .zip(&table.class_sizes)
            .any(|(&a, b)| BigUint::from(a) != *b)
    {
        return Err(ChartabError::ClassListMismatch);
    }
    let mut values = Vec::with_capacity(classes.len());
    for rep in &classes.representatives {
        values.push(Cyc::from_integer(action.fixed_points(rep)? as i64));
    }
    Ok(ClassFunction {
        table_name: table.name.clone(),
        values,
    })
}

/// Exact decomposition of a virtual character into irreducibles; returns
/// the nonzero multiplicities as (row index, multiplicity) pairs.
///
/// # Errors
/// [`ChartabError::NonIntegralMultiplicity`] when some ⟨f, χ⟩ is not a
/// rational integer — i.e. `f` is not a virtual character.
pub fn decompose(
    t: &CharacterTable,
    f: &ClassFunction,
) -> Result<Vec<(usize, BigInt)>, ChartabError> {
    let mut out = Vec::new();
    for s in 0..t.class_count() {
        let chi = t.irreducible(s);
        let m = inner_product(t, f, &chi)?;
        match m.as_integer() {
            Some(i) if i.is_zero() => {}
            Some(i) => out.push((s, i)),
            None => {
                return Err(ChartabError::NonIntegralMultiplicity {
                    index: s,
                    value: m.to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Whether two tables agree up to a class/character bijection, tested by
/// degree-and-class-size fingerprints and value multisets.
pub fn equivalent_by_fingerprint(a: &CharacterTable, b: &CharacterTable) -> bool {
    if a.order != b.order || a.class_count() != b.class_count() {
        return false;
    }
    let col_key = |t: &CharacterTable, j: usize| (t.class_orders[j], t.class_sizes[j].clone());
    let cols_a: Vec<_> = (0..a.class_count()).map(|j| col_key(a, j)).collect();
    let cols_b: Vec<_> = (0..b.class_count()).map(|j| col_key(b, j)).collect();
    if cols_a != cols_b {
        return false;
    }
    let row_prints = |t: &CharacterTable| -> Vec<Vec<(u64, BigUint, Cyc)>> {
        let mut prints: Vec<Vec<(u64, BigUint, Cyc)>> = t
            .irreducibles
            .iter()
            .map(|row| {
                let mut cells: Vec<(u64, BigUint, Cyc)> = row
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (t.class_orders[j], t.class_sizes[j].clone(), v.clone()))
                    .collect();
                cells.sort();
                cells
            })
            .collect();
        prints.sort();
        prints
    };
    row_prints(a) == row_prints(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2group::MatrixGF2;

    fn perm_matrix(images: &[usize]) -> MatrixGF2 {
        let d = images.len();
        let mut rows = vec![0u128; d];
        for (j, &i) in images.iter().enumerate() {
            rows[i] |= 1u128 << j;
        }
        MatrixGF2::from_rows(d, rows)
    }

    fn symmetric_group(n: usize) -> GroupHandle {
        let gens = (0..n - 1)
            .map(|k| {
                let mut im: Vec<usize> = (0..n).collect();
                im.swap(k, k + 1);
                perm_matrix(&im)
            })
            .collect();
        GroupHandle::new(gens).unwrap()
    }

    #[test]
    fn cyclic_four_table() {
        let g = GroupHandle::new(vec![perm_matrix(&[1, 2, 3, 0])]).unwrap();
        let t = character_table(&g, "C4").unwrap();
        assert_eq!(t.class_count(), 4);
        assert!(t
            .irreducibles
            .iter()
            .all(|row| row[t.identity_class].is_one()));
        let i = Cyc::root_of_unity(4, 1);
        let allowed = [Cyc::one(), i.clone(), Cyc::from_integer(-1), i.conjugate()];
        for row in &t.irreducibles {
            for v in row {
                assert!(allowed.contains(v), "value {v} is a power of i");
            }
        }
        // Some character is faithful: takes the value i somewhere.
        assert!(t.irreducibles.iter().any(|row| row.contains(&i)));
    }

    #[test]
    fn degree_squares_sum_to_order() {
        for n in [3usize, 4, 5] {
            let g = symmetric_group(n);
            let t = character_table(&g, "S").unwrap();
            let total: BigInt = (0..t.class_count()).map(|s| t.degree(s).pow(2)).sum();
            assert_eq!(total, BigInt::from(t.order.clone()));
        }
    }

    #[test]
    fn column_orthogonality() {
        let g = symmetric_group(4);
        let t = character_table(&g, "S4").unwrap();
        for c in 0..t.class_count() {
            for c2 in 0..t.class_count() {
                let mut sum = Cyc::zero();
                for row in &t.irreducibles {
                    sum = &sum + &(&row[c] * &row[c2].conjugate());
                }
                let expect = if c == c2 {
                    Cyc::from_bigint(BigInt::from(t.centralizer_order(c)))
                } else {
                    Cyc::zero()
                };
                assert_eq!(sum, expect, "columns {c},{c2}");
            }
        }
    }

    #[test]
    fn symmetric_table_two() {
        let t = symmetric_table(2).unwrap();
        assert_eq!(t.irreducibles.len(), 2);
        let flat: Vec<Vec<Cyc>> = vec![
            vec![Cyc::one(), Cyc::from_integer(-1)],
            vec![Cyc::one(), Cyc::one()],
        ];
        assert_eq!(t.irreducibles, flat);
    }

    #[test]
    fn symmetric_table_six_shape() {
        let t = symmetric_table(6).unwrap();
        assert_eq!(t.class_count(), 11);
        let mut degrees: Vec<BigInt> = (0..11).map(|s| t.degree(s)).collect();
        degrees.sort();
        let expect: Vec<BigInt> = [1, 1, 5, 5, 5, 5, 9, 9, 10, 10, 16]
            .iter()
            .map(|&d| BigInt::from(d))
            .collect();
        assert_eq!(degrees, expect);
    }

    #[test]
    fn sign_character_on_four_two() {
        let t = symmetric_table(6).unwrap();
        let types = symmetric_class_types(6).unwrap();
        let col = types.iter().position(|t| t == &vec![4, 2]).unwrap();
        // The sign character is the degree-1 row that is not identically 1.
        let sign_row = t
            .irreducibles
            .iter()
            .find(|row| {
                row[t.identity_class].is_one() && row.iter().any(|v| *v == Cyc::from_integer(-1))
            })
            .unwrap();
        assert_eq!(sign_row[col], Cyc::one());
        // And a (4,1,1) permutation is odd.
        let col2 = types.iter().position(|t| t == &vec![4, 1, 1]).unwrap();
        assert_eq!(sign_row[col2], Cyc::from_integer(-1));
    }

    #[test]
    fn symmetric_range_enforced() {
        assert!(matches!(
            symmetric_table(0),
            Err(ChartabError::SymmetricSizeOutOfRange(0))
        ));
        assert!(matches!(
            symmetric_table(11),
            Err(ChartabError::SymmetricSizeOutOfRange(11))
        ));
        assert!(symmetric_table(10).is_ok());
    }

    #[test]
    fn dixon_schneider_matches_murnaghan_nakayama() {
        for n in [3u64, 4, 5] {
            let g = symmetric_group(n as usize);
            let computed = character_table(&g, "matrix").unwrap();
            let oracle = symmetric_table(n).unwrap();
            assert!(equivalent_by_fingerprint(&computed, &oracle), "𝔖_{n}");
        }
    }

    #[test]
    fn inner_product_of_irreducibles() {
        let t = symmetric_table(5).unwrap();
        for s in 0..t.class_count() {
            let chi = t.irreducible(s);
            assert!(inner_product(&t, &chi, &chi).unwrap().is_one());
        }
        let a = t.irreducible(0);
        let b = t.irreducible(3);
        assert!(inner_product(&t, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn table_mismatch_detected() {
        let t5 = symmetric_table(5).unwrap();
        let t4 = symmetric_table(4).unwrap();
        let f = t4.irreducible(0);
        assert!(matches!(
            inner_product(&t5, &f, &f),
            Err(ChartabError::TableMismatch { .. })
        ));
    }

    #[test]
    fn regular_action_of_order_three() {
        let g = GroupHandle::new(vec![perm_matrix(&[1, 2, 0])]).unwrap();
        let t = character_table(&g, "C3").unwrap();
        let trivial = GroupHandle::new(vec![MatrixGF2::identity(3)]).unwrap();
        let action = g.coset_action(&trivial).unwrap();
        let classes = g.conjugacy_classes().unwrap();
        let pi = permutation_character(&action, &classes, &t).unwrap();
        assert_eq!(
            pi.values,
            vec![Cyc::from_integer(3), Cyc::zero(), Cyc::zero()]
        );
        // The regular character decomposes as the sum of all irreducibles.
        let dec = decompose(&t, &pi).unwrap();
        assert_eq!(
            dec,
            vec![(0, BigInt::one()), (1, BigInt::one()), (2, BigInt::one())]
        );
    }

    #[test]
    fn decompose_rejects_non_virtual() {
        let t = symmetric_table(3).unwrap();
        let half = Cyc::from_rational(BigRational::new(BigInt::one(), BigInt::from(2)));
        let f = t
            .class_function(vec![half, Cyc::zero(), Cyc::zero()])
            .unwrap();
        assert!(matches!(
            decompose(&t, &f),
            Err(ChartabError::NonIntegralMultiplicity { .. })
        ));
    }

    #[test]
    fn decompose_identity_on_irreducible() {
        let t = symmetric_table(4).unwrap();
        let chi = t.irreducible(2);
        assert_eq!(decompose(&t, &chi).unwrap(), vec![(2, BigInt::one())]);
        let zero = t
            .class_function(vec![Cyc::zero(); t.class_count()])
            .unwrap();
        assert!(decompose(&t, &zero).unwrap().is_empty());
    }

    #[test]
    fn atlas_naming() {
        assert_eq!(
            atlas_names(&[1, 2, 2, 3, 4, 4, 4]),
            vec!["1a", "2a", "2b", "3a", "4a", "4b", "4c"]
        );
    }

    #[test]
    fn trivial_group_table() {
        let g = GroupHandle::new(Vec::new()).unwrap();
        let t = character_table(&g, "1").unwrap();
        assert_eq!(t.class_count(), 1);
        assert!(t.irreducibles[0][0].is_one());
    }
}
