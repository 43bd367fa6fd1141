//! Chevalley groups of types C₂, D₄, F₄ and E₆ over 𝔽₂ in their adjoint
//! representations.
//!
//! Roots are integer coordinate vectors in the simple-root basis, generated
//! from the Cartan matrix by reflection closure.  Each type carries an
//! integral Chevalley basis with one fixed, consistent choice of
//! structure-constant signs: the simply-laced types D₄ and E₆ are realized
//! through a bimultiplicative sign cocycle on the root lattice, while C₂ and
//! F₄ are the fixed-point subalgebras of the diagram involutions of A₃ and
//! E₆ (with the cocycle chosen equivariantly, so the involution permutes
//! basis vectors without signs).  Root elements x_α(1) act on the adjoint
//! module by divided-power exponentials of ad(e_α) computed over ℤ and
//! reduced mod 2; for a folded short root the exponential is the product
//! over the two commuting ambient factors, which keeps every division
//! at the simply-laced level where (ad e)³ = 0.
//!
//! Diagram conventions: D₄ has its branch node at α₂; E₆ is the chain
//! α₁–α₃–α₄–α₅–α₆ with α₂ attached to α₄; in F₄ the roots α₁, α₂ are long
//! and α₃, α₄ are short.
//!
//! The module also provides the named products of root elements and the two
//! named subgroup generator sets used by the verification pipeline.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::gf2group::{element_order, GroupError, MatrixGF2};

/// The four supported Lie types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieType {
    C2,
    D4,
    F4,
    E6,
}

impl LieType {
    /// All supported types.
    pub const ALL: [LieType; 4] = [LieType::C2, LieType::D4, LieType::F4, LieType::E6];

    /// Rank of the root system.
    pub fn rank(self) -> usize {
        match self {
            LieType::C2 => 2,
            LieType::D4 | LieType::F4 => 4,
            LieType::E6 => 6,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LieType::C2 => "C2",
            LieType::D4 => "D4",
            LieType::F4 => "F4",
            LieType::E6 => "E6",
        })
    }
}

impl FromStr for LieType {
    type Err = ChevalleyError;

    fn from_str(s: &str) -> Result<Self, ChevalleyError> {
        match s.to_ascii_uppercase().as_str() {
            "C2" => Ok(LieType::C2),
            "D4" => Ok(LieType::D4),
            "F4" => Ok(LieType::F4),
            "E6" => Ok(LieType::E6),
            _ => Err(ChevalleyError::UnknownType(s.to_string())),
        }
    }
}

/// Errors from root-system lookups and named constructions.
#[derive(Debug, Error)]
pub enum ChevalleyError {
    /// The Lie type string is not one of C2, D4, F4, E6.
    #[error("unknown Lie type `{0}`; expected one of C2, D4, F4, E6")]
    UnknownType(String),
    /// The coordinate vector is not a root of the given system.
    #[error("{0:?} is not a root of type {1}")]
    UnknownRoot(Vec<i64>, LieType),
    /// The representative name is not on record.
    #[error("unknown representative `{0}`")]
    UnknownRepresentative(String),
    /// The subgroup name is not on record.
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    /// A named representative failed its element-order check.
    #[error("representative `{name}` has order {actual}, expected {expected}")]
    OrderMismatch {
        /// Representative name.
        name: String,
        /// Order actually computed from the matrix.
        actual: u64,
        /// Order the representative is required to have.
        expected: u64,
    },
    /// Underlying matrix-group failure.
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite root system with roots in simple-root coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// Positive roots sorted by (height, lexicographic), followed by their
    /// negatives in the same order.
    roots: Vec<Vec<i64>>,
    n_positive: usize,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    fn generate(lie_type: LieType, cartan: Vec<Vec<i64>>) -> RootSystem {
        let rank = cartan.len();
        let positives = positive_roots(&cartan);
        let n_positive = positives.len();
        let mut roots = positives;
        for i in 0..n_positive {
            roots.push(negate(&roots[i]));
        }
        let index = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        RootSystem {
            lie_type,
            rank,
            cartan,
            roots,
            n_positive,
            index,
        }
    }

    /// Type of the system.
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan matrix; entry `[i][j]` is ⟨α_j, α_i∨⟩.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// All roots: positive roots by increasing height, then their negatives
    /// in the same order.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// The positive roots.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.n_positive]
    }

    /// Number of positive roots.
    pub fn n_positive(&self) -> usize {
        self.n_positive
    }

    /// Index of a root in [`Self::roots`].
    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Whether the coordinate vector is a root.
    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.index.contains_key(coords)
    }

    /// The unique root of maximal height.
    pub fn highest_root(&self) -> &[i64] {
        &self.roots[self.n_positive - 1]
    }

    /// Sum of simple-root coefficients.
    pub fn height(coords: &[i64]) -> i64 {
        coords.iter().sum()
    }
}

fn negate(v: &[i64]) -> Vec<i64> {
    v.iter().map(|&c| -c).collect()
}

/// Compact label of a root: its coefficient digits, e.g. `1220`, with a
/// leading `-` for negative roots.
pub fn root_label(coords: &[i64]) -> String {
    let neg = coords.iter().any(|&c| c < 0);
    let body: String = coords
        .iter()
        .map(|&c| char::from(b'0' + c.unsigned_abs() as u8))
        .collect();
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Positive roots generated from a Cartan matrix by closing the simple
/// roots under the simple reflections s_i(β) = β − (Σ_j cartan[i][j] β_j) α_i.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    let mut head = 0;
    while head < queue.len() {
        let beta = queue[head].clone();
        head += 1;
        for i in 0..rank {
            let pairing: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
            let mut refl = beta.clone();
            refl[i] -= pairing;
            if seen.insert(refl.clone()) {
                queue.push(refl);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> = seen
        .into_iter()
        .filter(|r| r.iter().all(|&c| c >= 0))
        .collect();
    pos.sort_by_key(|r| (RootSystem::height(r), r.clone()));
    pos
}

/// Simply-laced Cartan matrix from an adjacency list.
fn cartan_from_edges(rank: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(u, v) in edges {
        a[u][v] = -1;
        a[v][u] = -1;
    }
    a
}

/// Integral Chevalley algebra of a simply-laced system.  Basis: e_γ for all
/// roots γ (positive roots by decreasing height, then negatives by
/// decreasing height), followed by h_1..h_rank.  The bracket is fixed by a
/// bimultiplicative sign cocycle ε determined by a choice of edge
/// orientations: [e_α, e_β] = ε(α,β) e_{α+β} when α+β is a root,
/// ε(α,−α) h_α when β = −α, and 0 otherwise.
struct ZLie {
    rank: usize,
    /// Symmetric Cartan matrix, doubling as the inner-product matrix.
    sym: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
    /// Positions (i, j) where the cocycle generator matrix is −1: the
    /// diagonal plus one direction of every edge.
    minus: Vec<(usize, usize)>,
    dim: usize,
}

impl ZLie {
    fn new(cartan: Vec<Vec<i64>>, oriented_edges: &[(usize, usize)]) -> ZLie {
        let rank = cartan.len();
        for i in 0..rank {
            for j in 0..rank {
                assert_eq!(
                    cartan[i][j], cartan[j][i],
                    "simply-laced Cartan matrix is symmetric"
                );
            }
        }
        let mut pos = positive_roots(&cartan);
        pos.sort_by_key(|r| (-RootSystem::height(r), r.clone()));
        let mut roots = pos.clone();
        roots.extend(pos.iter().rev().map(|r| negate(r)));
        let root_index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let mut minus: Vec<(usize, usize)> = (0..rank).map(|i| (i, i)).collect();
        for &(u, v) in oriented_edges {
            assert_eq!(cartan[u][v], -1, "oriented edges must join adjacent nodes");
            minus.push((u, v));
        }
        let dim = roots.len() + rank;
        ZLie {
            rank,
            sym: cartan,
            roots,
            root_index,
            minus,
            dim,
        }
    }

    fn n_roots(&self) -> usize {
        self.roots.len()
    }

    /// Cocycle sign ε(a, b) ∈ {±1} for root-lattice vectors.
    fn eps(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut parity = 0i64;
        for &(i, j) in &self.minus {
            parity += a[i] * b[j];
        }
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Cocycle generator sign for a pair of simple roots.
    fn eps_simple(&self, i: usize, j: usize) -> i64 {
        if self.minus.contains(&(i, j)) {
            -1
        } else {
            1
        }
    }

    /// Inner product from the symmetric Cartan matrix.
    fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * self.sym[i][j] * b[j];
            }
        }
        s
    }

    /// Bracket of two basis vectors, as a sparse coefficient list.
    fn bracket(&self, x: usize, y: usize) -> Vec<(usize, i64)> {
        let nr = self.n_roots();
        match (x < nr, y < nr) {
            (false, false) => Vec::new(),
            (false, true) => {
                let i = x - nr;
                let beta = &self.roots[y];
                let c: i64 = (0..self.rank).map(|j| beta[j] * self.sym[i][j]).sum();
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(y, c)]
                }
            }
            (true, false) => {
                let i = y - nr;
                let alpha = &self.roots[x];
                let c: i64 = (0..self.rank).map(|j| alpha[j] * self.sym[i][j]).sum();
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(x, -c)]
                }
            }
            (true, true) => {
                let alpha = &self.roots[x];
                let beta = &self.roots[y];
                let sum: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
                if sum.iter().all(|&c| c == 0) {
                    // [e_α, e_{−α}] = ε(α,−α) h_α; in a simply-laced system
                    // the coroot h_α has the coordinates of α.
                    let sign = self.eps(alpha, beta);
                    (0..self.rank)
                        .filter(|&i| alpha[i] != 0)
                        .map(|i| (nr + i, sign * alpha[i]))
                        .collect()
                } else if let Some(&s) = self.root_index.get(&sum) {
                    vec![(s, self.eps(alpha, beta))]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Dense matrix of ad(e_γ), row-major.
    fn ad_e(&self, root_idx: usize) -> Vec<i64> {
        let d = self.dim;
        let mut m = vec![0i64; d * d];
        for col in 0..d {
            for (row, c) in self.bracket(root_idx, col) {
                m[row * d + col] = c;
            }
        }
        m
    }

    /// exp(ad e_γ) over ℤ by divided powers: in a simply-laced adjoint
    /// module (ad e)³ = 0 and (ad e)² has even entries, so I + ad + ad²/2
    /// is integral.  Both facts are asserted.
    fn exp_ad(&self, root_idx: usize) -> Vec<i64> {
        let d = self.dim;
        let a = self.ad_e(root_idx);
        let a2 = mat_mul(d, &a, &a);
        let a3 = mat_mul(d, &a2, &a);
        assert!(
            a3.iter().all(|&c| c == 0),
            "ad(e) must be nilpotent of index at most 3"
        );
        assert!(
            a2.iter().all(|&c| c % 2 == 0),
            "(ad e)^2 must have even entries"
        );
        let mut out = vec![0i64; d * d];
        for i in 0..d {
            out[i * d + i] = 1;
        }
        for k in 0..d * d {
            out[k] += a[k] + a2[k] / 2;
        }
        out
    }
}

fn mat_mul(d: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0 {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

/// The adjoint module of a supported type over 𝔽₂: its root system, the
/// integral structure constants, and the matrices of all root elements
/// x_γ(1).
pub struct AdjointRealization {
    system: RootSystem,
    ambient: ZLie,
    /// Ambient root-basis indices folding onto each root, keyed by the
    /// root's coordinates (one index for a fixed root, two for a swapped
    /// pair; always one index for the simply-laced types).
    orbit_of: HashMap<Vec<i64>, Vec<usize>>,
    /// Fixed-subspace basis: the ambient basis indices (1 or 2 each) summed
    /// into each module basis vector.  Root vectors come first — positive
    /// roots by decreasing height, so the highest-root vector is basis
    /// vector 0 — then the negatives, then the Cartan combinations.
    fixed_basis: Vec<Vec<usize>>,
    /// Module basis position of each root, keyed by coordinates.
    module_index: HashMap<Vec<i64>, usize>,
    dim: usize,
    /// x_γ(1) for every root, aligned with `system.roots()`.
    matrices: Vec<MatrixGF2>,
}

impl AdjointRealization {
    /// The root system.
    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    /// Dimension of the adjoint module: 10, 28, 52 or 78.
    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// The matrix of x_γ(1) on the adjoint module mod 2.
    ///
    /// # Errors
    /// [`ChevalleyError::UnknownRoot`] when the coordinates are not a root.
    pub fn generator(&self, root: &[i64]) -> Result<&MatrixGF2, ChevalleyError> {
        let idx = self
            .system
            .root_index(root)
            .ok_or_else(|| ChevalleyError::UnknownRoot(root.to_vec(), self.system.lie_type))?;
        Ok(&self.matrices[idx])
    }

    /// Structure constant N_{α,β} with [e_α, e_β] = N_{α,β} e_{α+β};
    /// `None` when α + β is not a root.
    ///
    /// # Errors
    /// [`ChevalleyError::UnknownRoot`] when either input is not a root.
    pub fn structure_constant(
        &self,
        alpha: &[i64],
        beta: &[i64],
    ) -> Result<Option<i64>, ChevalleyError> {
        let unknown = |r: &[i64]| ChevalleyError::UnknownRoot(r.to_vec(), self.system.lie_type);
        let i = *self.module_index.get(alpha).ok_or_else(|| unknown(alpha))?;
        let j = *self.module_index.get(beta).ok_or_else(|| unknown(beta))?;
        let sum: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
        let Some(&s) = self.module_index.get(&sum) else {
            return Ok(None);
        };
        let bracket = self.bracket_z(i, j);
        for (k, &c) in bracket.iter().enumerate() {
            assert!(
                k == s || c == 0,
                "root-vector bracket must be supported on e_(alpha+beta)"
            );
        }
        Ok(Some(bracket[s]))
    }

    /// Bracket of module basis vectors in the integral Chevalley basis,
    /// as a dense coefficient vector.
    pub(crate) fn bracket_z(&self, i: usize, j: usize) -> Vec<i64> {
        let amb_dim = self.ambient.dim;
        let mut acc = vec![0i64; amb_dim];
        for &a in &self.fixed_basis[i] {
            for &b in &self.fixed_basis[j] {
                for (k, c) in self.ambient.bracket(a, b) {
                    acc[k] += c;
                }
            }
        }
        self.extract_fixed(&acc)
    }

    /// Expands an ambient vector in the fixed basis, asserting exactness.
    fn extract_fixed(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.dim];
        let mut rebuilt = vec![0i64; self.ambient.dim];
        for (t, span) in self.fixed_basis.iter().enumerate() {
            let c = v[span[0]];
            out[t] = c;
            for &b in span {
                rebuilt[b] += c;
            }
        }
        assert_eq!(rebuilt, v, "vector must lie in the fixed subspace");
        out
    }
}

/// Folding data per type: ambient Cartan matrix, a σ-stable edge
/// orientation, the diagram involution σ on node indices, and the
/// coordinate projection π onto the folded system.
fn folding_data(
    lie_type: LieType,
) -> (
    Vec<Vec<i64>>,
    Vec<(usize, usize)>,
    Vec<usize>,
    Vec<Vec<i64>>,
    Vec<Vec<usize>>,
) {
    match lie_type {
        // C₂ folds A₃ along 1↔3.
        LieType::C2 => (
            cartan_from_edges(3, &[(0, 1), (1, 2)]),
            vec![(0, 1), (2, 1)],
            vec![2, 1, 0],
            vec![vec![2, -2], vec![-1, 2]],
            vec![vec![0, 2], vec![1]],
        ),
        LieType::D4 => {
            let cartan = cartan_from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
            (
                cartan.clone(),
                vec![(0, 1), (1, 2), (1, 3)],
                (0..4).collect(),
                cartan,
                (0..4).map(|i| vec![i]).collect(),
            )
        }
        // F₄ folds E₆ along 1↔6, 3↔5.
        LieType::F4 => (
            cartan_from_edges(6, &[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]),
            vec![(0, 2), (2, 3), (4, 3), (5, 4), (1, 3)],
            vec![5, 1, 4, 3, 2, 0],
            vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ],
            vec![vec![1], vec![3], vec![2, 4], vec![0, 5]],
        ),
        LieType::E6 => {
            let cartan = cartan_from_edges(6, &[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]);
            (
                cartan.clone(),
                vec![(0, 2), (2, 3), (4, 3), (5, 4), (1, 3)],
                (0..6).collect(),
                cartan,
                (0..6).map(|i| vec![i]).collect(),
            )
        }
    }
}

/// Projection of ambient root coordinates onto the folded system.
fn fold_coords(lie_type: LieType, c: &[i64]) -> Vec<i64> {
    match lie_type {
        LieType::C2 => vec![c[0] + c[2], c[1]],
        LieType::F4 => vec![c[1], c[3], c[2] + c[4], c[0] + c[5]],
        LieType::D4 | LieType::E6 => c.to_vec(),
    }
}

fn build(lie_type: LieType) -> AdjointRealization {
    let (ambient_cartan, edges, sigma, target_cartan, cartan_combos) = folding_data(lie_type);
    let ambient = ZLie::new(ambient_cartan, &edges);

    // The cocycle must be σ-equivariant so that the involution permutes
    // basis vectors without introducing signs.
    for i in 0..ambient.rank {
        for j in 0..ambient.rank {
            assert_eq!(
                ambient.eps_simple(i, j),
                ambient.eps_simple(sigma[i], sigma[j]),
                "edge orientation must be stable under the diagram involution"
            );
        }
    }

    let system = RootSystem::generate(lie_type, target_cartan);

    let sigma_root = |coords: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; ambient.rank];
        for (i, &c) in coords.iter().enumerate() {
            out[sigma[i]] = c;
        }
        out
    };

    let mut orbit_of: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (idx, r) in ambient.roots.iter().enumerate() {
        orbit_of
            .entry(fold_coords(lie_type, r))
            .or_default()
            .push(idx);
    }
    assert_eq!(
        orbit_of.len(),
        system.roots().len(),
        "folded images must cover the root system"
    );
    for r in system.roots() {
        assert!(orbit_of.contains_key(r), "missing folded root {r:?}");
    }
    for orbit in orbit_of.values() {
        match orbit[..] {
            [a] => assert_eq!(sigma_root(&ambient.roots[a]), ambient.roots[a]),
            [a, b] => {
                assert_eq!(sigma_root(&ambient.roots[a]), ambient.roots[b]);
                assert_eq!(
                    ambient.form(&ambient.roots[a], &ambient.roots[b]),
                    0,
                    "swapped orbit roots must be orthogonal"
                );
            }
            _ => panic!("orbit of unexpected size"),
        }
    }

    // Module basis: positive roots by decreasing height (highest root
    // first), their negatives in mirror order, then the Cartan part.
    let mut module_roots: Vec<Vec<i64>> = system.positive_roots().to_vec();
    module_roots.sort_by_key(|r| (-RootSystem::height(r), r.clone()));
    let negatives: Vec<Vec<i64>> = module_roots.iter().rev().map(|r| negate(r)).collect();
    module_roots.extend(negatives);

    let mut fixed_basis: Vec<Vec<usize>> =
        module_roots.iter().map(|r| orbit_of[r].clone()).collect();
    let nr = ambient.n_roots();
    for combo in &cartan_combos {
        fixed_basis.push(combo.iter().map(|&k| nr + k).collect());
    }
    let dim = fixed_basis.len();
    let module_index: HashMap<Vec<i64>, usize> = module_roots
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();

    let mut real = AdjointRealization {
        system,
        ambient,
        orbit_of,
        fixed_basis,
        module_index,
        dim,
        matrices: Vec::new(),
    };

    let mut exp_cache: HashMap<usize, Vec<i64>> = HashMap::new();
    let mut matrices = Vec::with_capacity(real.system.roots().len());
    for r in real.system.roots() {
        let orbit = &real.orbit_of[r];
        let first = exp_cache
            .entry(orbit[0])
            .or_insert_with(|| real.ambient.exp_ad(orbit[0]))
            .clone();
        let full = if orbit.len() == 2 {
            let second = exp_cache
                .entry(orbit[1])
                .or_insert_with(|| real.ambient.exp_ad(orbit[1]))
                .clone();
            mat_mul(real.ambient.dim, &first, &second)
        } else {
            first
        };
        matrices.push(restrict_mod2(&real, &full));
    }
    real.matrices = matrices;
    real
}

/// Restricts an ambient integral matrix preserving the fixed subspace to
/// the fixed basis and reduces mod 2.
fn restrict_mod2(real: &AdjointRealization, m: &[i64]) -> MatrixGF2 {
    let amb_dim = real.ambient.dim;
    let dim = real.dim;
    let mut rows = vec![0u128; dim];
    for j in 0..dim {
        let mut v = vec![0i64; amb_dim];
        for &b in &real.fixed_basis[j] {
            for r in 0..amb_dim {
                v[r] += m[r * amb_dim + b];
            }
        }
        for (i, c) in real.extract_fixed(&v).into_iter().enumerate() {
            if c.rem_euclid(2) == 1 {
                rows[i] |= 1u128 << j;
            }
        }
    }
    MatrixGF2::from_rows(dim, rows)
}

/// Cached adjoint realization of a type, built on first use.
pub fn realization(lie_type: LieType) -> &'static AdjointRealization {
    static C2: OnceLock<AdjointRealization> = OnceLock::new();
    static D4: OnceLock<AdjointRealization> = OnceLock::new();
    static F4: OnceLock<AdjointRealization> = OnceLock::new();
    static E6: OnceLock<AdjointRealization> = OnceLock::new();
    let cell = match lie_type {
        LieType::C2 => &C2,
        LieType::D4 => &D4,
        LieType::F4 => &F4,
        LieType::E6 => &E6,
    };
    cell.get_or_init(|| build(lie_type))
}

/// The root system of a supported type.
pub fn root_system(lie_type: LieType) -> &'static RootSystem {
    realization(lie_type).system()
}

/// Dimension of the adjoint module: 10, 28, 52 and 78 for C₂, D₄, F₄, E₆.
pub fn adjoint_dimension(lie_type: LieType) -> usize {
    realization(lie_type).dimension()
}

/// The matrix of x_γ(1) on the adjoint module mod 2.
///
/// # Errors
/// [`ChevalleyError::UnknownRoot`] when the coordinates are not a root.
pub fn adjoint_generator(lie_type: LieType, root: &[i64]) -> Result<MatrixGF2, ChevalleyError> {
    realization(lie_type).generator(root).cloned()
}

/// x_α(1) and x_{−α}(1) for every simple root α — the standard generating
/// set of the full Chevalley group on the adjoint module.
pub fn adjoint_group_generators(lie_type: LieType) -> Vec<MatrixGF2> {
    let real = realization(lie_type);
    let rank = real.system().rank();
    let mut out = Vec::with_capacity(2 * rank);
    for i in 0..rank {
        let mut simple = vec![0i64; rank];
        simple[i] = 1;
        out.push(real.generator(&simple).expect("simple root").clone());
        out.push(
            real.generator(&negate(&simple))
                .expect("negative simple root")
                .clone(),
        );
    }
    out
}

/// Structure constant N_{α,β} of the integral Chevalley basis, or `None`
/// when α + β is not a root.
///
/// # Errors
/// [`ChevalleyError::UnknownRoot`] when either input is not a root.
pub fn structure_constant(
    lie_type: LieType,
    alpha: &[i64],
    beta: &[i64],
) -> Result<Option<i64>, ChevalleyError> {
    realization(lie_type).structure_constant(alpha, beta)
}

/// A named product of root elements with its verified element order.
#[derive(Clone, Debug)]
pub struct ClassRepresentative {
    /// Lookup name.
    pub name: String,
    /// Type of the ambient Chevalley group.
    pub lie_type: LieType,
    /// The factors x_γ(1) as root coordinate vectors, multiplied left to
    /// right.
    pub word: Vec<Vec<i64>>,
    /// Product of the factor matrices on the adjoint module.
    pub matrix: MatrixGF2,
    /// Element order of the matrix, verified at construction.
    pub order: u64,
    /// Name of the element's class in the reference character-table data,
    /// when one is on record.
    pub class_name: Option<String>,
}

/// Builds a named class representative and verifies its element order.
///
/// Known names: `c2_g1`, `d4_g1`, `u31`, `u29`, `u24`, `u17`, `u15`.
///
/// # Errors
/// [`ChevalleyError::UnknownRepresentative`] for an unknown name and
/// [`ChevalleyError::OrderMismatch`] if the matrix order disagrees with the
/// recorded one.
pub fn named_representative(name: &str) -> Result<ClassRepresentative, ChevalleyError> {
    #[rustfmt::skip]
    let (lie_type, word, expected, class_name): (LieType, Vec<Vec<i64>>, u64, Option<&str>) =
        match name {
            "c2_g1" => (LieType::C2, vec![vec![1, 0], vec![0, 1]], 4, None),
            "d4_g1" => (
                LieType::D4,
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
                8,
                None,
            ),
            "u31" => (
                LieType::F4,
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
                16,
                Some("16a"),
            ),
            "u29" => (
                LieType::F4,
                vec![
                    vec![0, 1, 2, 2],
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                ],
                8,
                Some("8j"),
            ),
            "u24" => (
                LieType::F4,
                vec![
                    vec![1, 1, 0, 0],
                    vec![0, 1, 2, 0],
                    vec![0, 0, 0, 1],
                    vec![0, 0, 1, 1],
                ],
                8,
                Some("8a"),
            ),
            "u17" => (
                LieType::F4,
                vec![
                    vec![1, 1, 1, 0],
                    vec![1, 2, 2, 0],
                    vec![0, 0, 1, 1],
                    vec![0, 1, 2, 2],
                ],
                4,
                Some("4l"),
            ),
            "u15" => (
                LieType::E6,
                vec![
                    vec![0, 1, 0, 0, 0, 0],
                    vec![0, 0, 1, 0, 0, 0],
                    vec![0, 0, 0, 1, 0, 0],
                    vec![0, 1, 0, 1, 1, 0],
                ],
                4,
                Some("4k"),
            ),
            _ => return Err(ChevalleyError::UnknownRepresentative(name.to_string())),
        };
    let real = realization(lie_type);
    let mut matrix = MatrixGF2::identity(real.dimension());
    for w in &word {
        matrix = matrix.mul(real.generator(w)?);
    }
    let order = element_order(&matrix)?;
    if order != expected {
        return Err(ChevalleyError::OrderMismatch {
            name: name.to_string(),
            actual: order,
            expected,
        });
    }
    Ok(ClassRepresentative {
        name: name.to_string(),
        lie_type,
        word,
        matrix,
        order,
        class_name: class_name.map(str::to_string),
    })
}

/// Generator matrices of a named subgroup.
///
/// `f4_P`: x_{±α}(1) for the first three simple roots of F₄ together with
/// x_{α₄}(1) — a parabolic subgroup that contains `u31` by construction.
/// `e6_L`: x_{±α}(1) for the simple roots α₂, …, α₅ of E₆ — a subgroup of
/// type D₄ acting on the 78-dimensional module.
///
/// # Errors
/// [`ChevalleyError::UnknownSubgroup`] for any other name.
pub fn subgroup_generators(name: &str) -> Result<Vec<MatrixGF2>, ChevalleyError> {
    match name {
        "f4_P" => {
            let real = realization(LieType::F4);
            let mut out = Vec::with_capacity(7);
            for i in 0..3 {
                let mut s = vec![0i64; 4];
                s[i] = 1;
                out.push(real.generator(&s)?.clone());
                out.push(real.generator(&negate(&s))?.clone());
            }
            out.push(real.generator(&[0, 0, 0, 1])?.clone());
            Ok(out)
        }
        "e6_L" => {
            let real = realization(LieType::E6);
            let mut out = Vec::with_capacity(8);
            for i in 1..5 {
                let mut s = vec![0i64; 6];
                s[i] = 1;
                out.push(real.generator(&s)?.clone());
                out.push(real.generator(&negate(&s))?.clone());
            }
            Ok(out)
        }
        _ => Err(ChevalleyError::UnknownSubgroup(name.to_string())),
    }
}
