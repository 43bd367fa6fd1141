//! Matrix groups over 𝔽₂.
//!
//! Matrices are bit-packed (one `u128` per row, dimension ≤ 128), so products
//! and row reduction are word-parallel.  A [`GroupHandle`] carries a
//! deterministic base-and-stabilizer chain for the action on nonzero vectors
//! of 𝔽₂^d, giving exact orders and membership tests; on top of that sit
//! bounded conjugacy-class enumeration, conjugacy tests (exact at desk scale,
//! randomized with an explicit inconclusive outcome beyond it), and coset
//! actions for permutation characters.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Default ceiling for full class enumeration (element count).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1_000_000;

/// Default ceiling for coset enumeration (index of the subgroup).
pub const DEFAULT_INDEX_BOUND: u64 = 100_000;

/// Iteration cap for [`element_order`]; orders in the supported workloads are
/// tiny, so hitting this indicates corrupted input rather than a big group.
const ELEMENT_ORDER_CAP: u64 = 1 << 20;

/// Error type for the group machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    /// Two matrices of different dimensions were combined.
    #[error("matrix dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    /// A group element must be invertible.
    #[error("singular matrix used as a group element")]
    SingularMatrix,
    /// Enumeration was requested for a group beyond the configured bound.
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderExceedsBound {
        /// Exact order of the group.
        order: BigUint,
        /// Configured enumeration bound.
        bound: u64,
    },
    /// An element was passed that does not lie in the group.
    #[error("element is not a member of the group")]
    NotInGroup,
    /// The claimed subgroup is not contained in the ambient group.
    #[error("generators do not all lie in the ambient group")]
    NotSubgroup,
    /// A coset action was requested for an index beyond the bound.
    #[error("subgroup index {index} exceeds the bound {bound}")]
    IndexTooLarge {
        /// Exact index of the subgroup.
        index: BigUint,
        /// Configured index bound.
        bound: u64,
    },
    /// The randomized conjugacy search ran out of budget with no verdict.
    #[error("randomized conjugacy search was inconclusive within its budget")]
    Inconclusive,
}

/// A square matrix over 𝔽₂, bit-packed one row per `u128`.
///
/// Bit `j` of `rows[i]` is the entry in row `i`, column `j`.  The matrix acts
/// on column vectors packed the same way: bit `j` of a vector is coordinate
/// `j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixGF2 {
    dim: usize,
    rows: Vec<u128>,
}

impl MatrixGF2 {
    /// Builds a matrix from packed rows.
    ///
    /// # Panics
    /// Panics if the dimension is 0 or exceeds 128, if the row count is
    /// wrong, or if a row has bits set beyond the dimension.
    pub fn from_rows(dim: usize, rows: Vec<u128>) -> Self {
        assert!(
            dim >= 1 && dim <= 128,
            "dimension {dim} out of range 1..=128"
        );
        assert_eq!(rows.len(), dim, "expected {dim} rows");
        let mask = Self::mask(dim);
        for (i, &r) in rows.iter().enumerate() {
            assert!(r & !mask == 0, "row {i} has bits beyond dimension {dim}");
        }
        MatrixGF2 { dim, rows }
    }

    fn mask(dim: usize) -> u128 {
        if dim == 128 {
            u128::MAX
        } else {
            (1u128 << dim) - 1
        }
    }

    /// The identity matrix.
    pub fn identity(dim: usize) -> Self {
        Self::from_rows(dim, (0..dim).map(|i| 1u128 << i).collect())
    }

    /// The dimension d of this d×d matrix.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    /// Sets the entry at `(row, col)`.
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.dim && col < self.dim);
        if value {
            self.rows[row] |= 1u128 << col;
        } else {
            self.rows[row] &= !(1u128 << col);
        }
    }

    /// Whether this is the identity matrix.
    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1u128 << i)
    }

    /// Matrix product `self · rhs`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn mul(&self, rhs: &MatrixGF2) -> MatrixGF2 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|&a| {
                let mut acc = 0u128;
                let mut bits = a;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        MatrixGF2 {
            dim: self.dim,
            rows,
        }
    }

    /// Applies the matrix to a packed column vector.
    pub fn apply(&self, v: u128) -> u128 {
        let mut out = 0u128;
        for (i, &r) in self.rows.iter().enumerate() {
            if (r & v).count_ones() & 1 == 1 {
                out |= 1u128 << i;
            }
        }
        out
    }

    /// `self` raised to the `e`-th power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> MatrixGF2 {
        let mut base = self.clone();
        let mut acc = MatrixGF2::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Sum `self + rhs` over 𝔽₂ (entrywise XOR).
    pub fn add(&self, rhs: &MatrixGF2) -> MatrixGF2 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        MatrixGF2 {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .zip(&rhs.rows)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Inverse, or `None` if singular (word-parallel Gauss–Jordan).
    pub fn inverse(&self) -> Option<MatrixGF2> {
        let d = self.dim;
        let mut left = self.rows.clone();
        let mut right: Vec<u128> = (0..d).map(|i| 1u128 << i).collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| left[r] >> col & 1 == 1)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            for r in 0..d {
                if r != col && left[r] >> col & 1 == 1 {
                    left[r] ^= left[col];
                    right[r] ^= right[col];
                }
            }
        }
        Some(MatrixGF2 {
            dim: d,
            rows: right,
        })
    }

    /// Rank over 𝔽₂.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.dim {
            if let Some(p) = (rank..self.dim).find(|&r| rows[r] >> col & 1 == 1) {
                rows.swap(rank, p);
                for r in 0..self.dim {
                    if r != rank && rows[r] >> col & 1 == 1 {
                        rows[r] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

impl fmt::Debug for MatrixGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixGF2 {}×{}", self.dim, self.dim)?;
        for &r in &self.rows {
            for j in 0..self.dim {
                write!(f, "{}", r >> j & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Least n ≥ 1 with mⁿ = identity.
///
/// # Errors
/// Returns [`GroupError::SingularMatrix`] for non-invertible input.
pub fn element_order(m: &MatrixGF2) -> Result<u64, GroupError> {
    if m.inverse().is_none() {
        return Err(GroupError::SingularMatrix);
    }
    let mut acc = m.clone();
    for n in 1..=ELEMENT_ORDER_CAP {
        if acc.is_identity() {
            return Ok(n);
        }
        acc = acc.mul(m);
    }
    unreachable!(
        "element order exceeded {ELEMENT_ORDER_CAP}; inputs are outside the supported workload"
    );
}

/// One level of a stabilizer chain: a base vector, the generators of the
/// current group, and the orbit of the base with cached transversal
/// representatives (one matrix product per point at construction, constant
/// cost per sift afterwards).
#[derive(Clone)]
struct ChainLevel {
    base: u128,
    /// Generators together with their inverses.
    gens: Vec<(MatrixGF2, MatrixGF2)>,
    /// Position of each orbit point in `orbit_order`.
    index: HashMap<u128, usize>,
    /// Orbit points in BFS discovery order (deterministic).
    orbit_order: Vec<u128>,
    /// `reps[i]` maps the base to `orbit_order[i]`.
    reps: Vec<MatrixGF2>,
    /// Inverses of `reps`, parallel.
    rep_invs: Vec<MatrixGF2>,
}

impl ChainLevel {
    fn new(base: u128) -> Self {
        ChainLevel {
            base,
            gens: Vec::new(),
            index: HashMap::new(),
            orbit_order: Vec::new(),
            reps: Vec::new(),
            rep_invs: Vec::new(),
        }
    }

    fn recompute_orbit(&mut self, dim: usize) {
        self.index.clear();
        self.orbit_order.clear();
        self.reps.clear();
        self.rep_invs.clear();
        self.index.insert(self.base, 0);
        self.orbit_order.push(self.base);
        self.reps.push(MatrixGF2::identity(dim));
        self.rep_invs.push(MatrixGF2::identity(dim));
        let mut head = 0;
        while head < self.orbit_order.len() {
            let p = self.orbit_order[head];
            head += 1;
            for (g, g_inv) in &self.gens {
                let q = g.apply(p);
                if !self.index.contains_key(&q) {
                    self.index.insert(q, self.orbit_order.len());
                    self.orbit_order.push(q);
                    let at = self.index[&p];
                    self.reps.push(g.mul(&self.reps[at]));
                    self.rep_invs.push(self.rep_invs[at].mul(g_inv));
                }
            }
        }
    }

    /// Transversal representative u with u(base) = p.
    fn rep(&self, p: u128) -> &MatrixGF2 {
        &self.reps[self.index[&p]]
    }

    /// Inverse representative u⁻¹ with u⁻¹(p) = base.
    fn rep_inv(&self, p: u128) -> &MatrixGF2 {
        &self.rep_invs[self.index[&p]]
    }
}

/// A matrix group over 𝔽₂ with cached order and stabilizer-chain data for
/// the action on nonzero vectors.
#[derive(Clone)]
pub struct GroupHandle {
    dim: usize,
    generators: Vec<MatrixGF2>,
    levels: Vec<ChainLevel>,
    order: BigUint,
    enumeration_bound: u64,
}

impl GroupHandle {
    /// Builds the group generated by `generators` with the default
    /// enumeration bound.
    ///
    /// # Errors
    /// [`GroupError::DimensionMismatch`] or [`GroupError::SingularMatrix`].
    pub fn new(generators: Vec<MatrixGF2>) -> Result<Self, GroupError> {
        Self::with_enumeration_bound(generators, DEFAULT_ENUMERATION_BOUND)
    }

    /// Builds the group with an explicit class-enumeration bound.
    pub fn with_enumeration_bound(
        generators: Vec<MatrixGF2>,
        enumeration_bound: u64,
    ) -> Result<Self, GroupError> {
        let dim = generators.first().map_or(1, |m| m.dim());
        for m in &generators {
            if m.dim() != dim {
                return Err(GroupError::DimensionMismatch(dim, m.dim()));
            }
            if m.inverse().is_none() {
                return Err(GroupError::SingularMatrix);
            }
        }
        let mut handle = GroupHandle {
            dim,
            generators,
            levels: Vec::new(),
            order: BigUint::one(),
            enumeration_bound,
        };
        handle.build_chain();
        handle.order = handle
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit_order.len()))
            .product();
        Ok(handle)
    }

    /// The exact order of the group.
    pub fn group_order(&self) -> BigUint {
        self.order.clone()
    }

    /// The matrix dimension of the natural module.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The generators the handle was built from.
    pub fn generators(&self) -> &[MatrixGF2] {
        &self.generators
    }

    /// First standard basis vector moved by `m`, as a packed vector.
    fn first_moved_basis_vector(m: &MatrixGF2) -> Option<u128> {
        (0..m.dim()).map(|j| 1u128 << j).find(|&e| m.apply(e) != e)
    }

    fn build_chain(&mut self) {
        for g in self.generators.clone() {
            if g.is_identity() {
                continue;
            }
            let (stuck, residue) = self.sift_from(0, g);
            if !residue.is_identity() {
                self.add_strong_generator(0, stuck, residue);
                for l in (0..self.levels.len()).rev() {
                    self.complete_level(l);
                }
            }
        }
    }

    /// Registers a strong generator discovered while sifting from `from` and
    /// stuck at `stuck`: it fixes the bases of all levels below `stuck`, so
    /// it generates at every level in `from..=stuck`.  Orbits of the touched
    /// levels are recomputed; a new deepest level is created when needed.
    fn add_strong_generator(&mut self, from: usize, stuck: usize, g: MatrixGF2) {
        let inv = g.inverse().expect("group element is invertible");
        for k in from..=stuck {
            if k == self.levels.len() {
                let base = Self::first_moved_basis_vector(&g)
                    .expect("non-identity matrix moves a standard basis vector");
                self.levels.push(ChainLevel::new(base));
            }
            if !self.levels[k].gens.iter().any(|(h, _)| *h == g) {
                self.levels[k].gens.push((g.clone(), inv.clone()));
                let dim = self.dim;
                self.levels[k].recompute_orbit(dim);
            }
        }
    }

    /// Establishes the defining property of the chain at `level`: every
    /// Schreier generator of the base stabilizer sifts to the identity
    /// through the deeper levels.  Deeper levels must already be complete;
    /// they are kept complete whenever a new generator is pushed down.
    fn complete_level(&mut self, level: usize) {
        let mut point_idx = 0;
        while point_idx < self.levels[level].orbit_order.len() {
            let p = self.levels[level].orbit_order[point_idx];
            let mut gen_idx = 0;
            while gen_idx < self.levels[level].gens.len() {
                let (q, schreier) = {
                    let lvl = &self.levels[level];
                    let s = &lvl.gens[gen_idx].0;
                    let q = s.apply(p);
                    let u = lvl.rep(p);
                    let u_q_inv = lvl.rep_inv(q);
                    (q, u_q_inv.mul(s).mul(u))
                };
                debug_assert!(self.levels[level].index.contains_key(&q));
                let (stuck, residue) = self.sift_from(level + 1, schreier);
                if !residue.is_identity() {
                    self.add_strong_generator(level + 1, stuck, residue);
                    // Levels deeper than `stuck` kept their generators and
                    // orbits, hence stay complete; re-verify the changed
                    // range deepest-first.
                    let deepest = stuck.min(self.levels.len() - 1);
                    for l in ((level + 1)..=deepest).rev() {
                        self.complete_level(l);
                    }
                }
                gen_idx += 1;
            }
            point_idx += 1;
        }
    }

    /// Sifts `m` through levels `from..`, returning the level at which it got
    /// stuck (or the chain length) along with the residue.
    fn sift_from(&self, from: usize, mut m: MatrixGF2) -> (usize, MatrixGF2) {
        for level in from..self.levels.len() {
            let lvl = &self.levels[level];
            let p = m.apply(lvl.base);
            if p == lvl.base {
                continue;
            }
            if !lvl.index.contains_key(&p) {
                return (level, m);
            }
            m = lvl.rep_inv(p).mul(&m);
        }
        (self.levels.len(), m)
    }

    /// Exact membership test via the stabilizer chain.
    pub fn contains(&self, m: &MatrixGF2) -> bool {
        m.dim() == self.dim && self.sift_from(0, m.clone()).1.is_identity()
    }

    /// A uniformly random group element (independent level choices).
    fn random_element(&self, rng: &mut ChaCha12Rng) -> MatrixGF2 {
        let mut acc = MatrixGF2::identity(self.dim);
        for lvl in &self.levels {
            let p = lvl.orbit_order[rng.gen_range(0..lvl.orbit_order.len())];
            acc = acc.mul(lvl.rep(p));
        }
        acc
    }

    /// All group elements in a deterministic order.
    ///
    /// # Errors
    /// [`GroupError::OrderExceedsBound`] when the order exceeds the handle's
    /// enumeration bound.
    pub fn elements(&self) -> Result<Vec<MatrixGF2>, GroupError> {
        let order = self
            .order
            .to_u64()
            .filter(|&o| o <= self.enumeration_bound)
            .ok_or(GroupError::OrderExceedsBound {
                order: self.order.clone(),
                bound: self.enumeration_bound,
            })?;
        let mut out = Vec::with_capacity(order as usize);
        self.enumerate_rec(0, MatrixGF2::identity(self.dim), &mut out);
        debug_assert_eq!(out.len() as u64, order);
        Ok(out)
    }

    fn enumerate_rec(&self, level: usize, prefix: MatrixGF2, out: &mut Vec<MatrixGF2>) {
        if level == self.levels.len() {
            out.push(prefix);
            return;
        }
        let lvl = &self.levels[level];
        for &p in &lvl.orbit_order {
            self.enumerate_rec(level + 1, prefix.mul(lvl.rep(p)), out);
        }
    }

    /// Conjugacy classes with sizes, element orders and power maps, in the
    /// canonical order (element order, then size, then lexicographically
    /// minimal member, which is also the stored representative).
    ///
    /// # Errors
    /// [`GroupError::OrderExceedsBound`] beyond the enumeration bound.
    pub fn conjugacy_classes(&self) -> Result<ConjClassList, GroupError> {
        Ok(self.conjugacy_partition()?.0)
    }

    /// Conjugacy classes together with the element → class-index map.
    pub fn conjugacy_partition(
        &self,
    ) -> Result<(ConjClassList, HashMap<MatrixGF2, usize>), GroupError> {
        let elements = self.elements()?;
        let mut class_of: HashMap<MatrixGF2, usize> = HashMap::with_capacity(elements.len());
        let mut classes: Vec<(MatrixGF2, u64, u64)> = Vec::new(); // (min member, size, elt order)
        let gen_pairs: Vec<(MatrixGF2, MatrixGF2)> = self
            .generators
            .iter()
            .map(|g| (g.clone(), g.inverse().expect("generators are invertible")))
            .collect();
        for e in &elements {
            if class_of.contains_key(e) {
                continue;
            }
            let id = classes.len();
            let mut frontier = vec![e.clone()];
            class_of.insert(e.clone(), id);
            let mut min_member = e.clone();
            let mut size = 1u64;
            while let Some(x) = frontier.pop() {
                for (g, g_inv) in &gen_pairs {
                    let y = g.mul(&x).mul(g_inv);
                    if !class_of.contains_key(&y) {
                        if y < min_member {
                            min_member = y.clone();
                        }
                        class_of.insert(y.clone(), id);
                        size += 1;
                        frontier.push(y);
                    }
                }
            }
            let ord = element_order(&min_member).expect("group elements are invertible");
            classes.push((min_member, size, ord));
        }
        // Canonical order, then remap the element → class map accordingly.
        let mut perm: Vec<usize> = (0..classes.len()).collect();
        perm.sort_by(|&a, &b| {
            let ka = (&classes[a].2, &classes[a].1, &classes[a].0);
            let kb = (&classes[b].2, &classes[b].1, &classes[b].0);
            ka.cmp(&kb)
        });
        let mut new_index = vec![0usize; classes.len()];
        for (new, &old) in perm.iter().enumerate() {
            new_index[old] = new;
        }
        for idx in class_of.values_mut() {
            *idx = new_index[*idx];
        }
        let mut representatives = Vec::with_capacity(classes.len());
        let mut sizes = Vec::with_capacity(classes.len());
        let mut element_orders = Vec::with_capacity(classes.len());
        for &old in &perm {
            let (m, s, o) = &classes[old];
            representatives.push(m.clone());
            sizes.push(*s);
            element_orders.push(*o);
        }
        // Power maps for every prime dividing the group order.
        let order = self.order.to_u64().expect("already bounded");
        let mut power_maps = BTreeMap::new();
        for p in small_primes_dividing(order) {
            let map = representatives
                .iter()
                .map(|r| {
                    *class_of
                        .get(&r.pow(p))
                        .expect("power of a member is a member")
                })
                .collect();
            power_maps.insert(p, map);
        }
        let list = ConjClassList {
            representatives,
            sizes,
            element_orders,
            power_maps,
        };
        Ok((list, class_of))
    }

    /// Exact conjugacy verdict for `a`, `b` in the group.
    ///
    /// Within the enumeration bound the verdict comes from an exact orbit
    /// computation.  Beyond it, conjugation-invariant fingerprints decide
    /// many negatives exactly, and a randomized meet-in-the-middle search
    /// looks for a witness; when neither settles the question the result is
    /// [`GroupError::Inconclusive`].
    ///
    /// # Errors
    /// [`GroupError::NotInGroup`] if either matrix is outside the group;
    /// [`GroupError::Inconclusive`] as described.
    pub fn are_conjugate(&self, a: &MatrixGF2, b: &MatrixGF2) -> Result<bool, GroupError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(GroupError::NotInGroup);
        }
        if a == b {
            return Ok(true);
        }
        if conjugation_fingerprint(a) != conjugation_fingerprint(b) {
            return Ok(false);
        }
        if self
            .order
            .to_u64()
            .is_some_and(|o| o <= self.enumeration_bound)
        {
            // Exact path: breadth-first orbit of `a` under conjugation.
            let gen_pairs: Vec<(MatrixGF2, MatrixGF2)> = self
                .generators
                .iter()
                .map(|g| (g.clone(), g.inverse().expect("generators are invertible")))
                .collect();
            let mut seen = HashSet::new();
            seen.insert(a.clone());
            let mut frontier = vec![a.clone()];
            while let Some(x) = frontier.pop() {
                for (g, g_inv) in &gen_pairs {
                    let y = g.mul(&x).mul(g_inv);
                    if y == *b {
                        return Ok(true);
                    }
                    if seen.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            return Ok(false);
        }
        // Randomized meet-in-the-middle: collide the conjugation orbits of
        // `a` and `b` at random elements.
        let mut rng = ChaCha12Rng::seed_from_u64(0x616c6d6f7374 ^ self.dim as u64);
        let budget = 1usize << 14;
        let mut seen_a: HashSet<MatrixGF2> = HashSet::with_capacity(budget);
        for _ in 0..budget {
            let x = self.random_element(&mut rng);
            let xi = x.inverse().expect("group element");
            seen_a.insert(x.mul(a).mul(&xi));
        }
        for _ in 0..budget {
            let y = self.random_element(&mut rng);
            let yi = y.inverse().expect("group element");
            if seen_a.contains(&yi.mul(b).mul(&y)) {
                return Ok(true);
            }
        }
        Err(GroupError::Inconclusive)
    }

    /// Permutation action of the group's generators on the left cosets of a
    /// subgroup, with the default index bound.
    ///
    /// # Errors
    /// [`GroupError::NotSubgroup`] if `subgroup` is not contained in `self`;
    /// [`GroupError::IndexTooLarge`] beyond the index bound.
    pub fn coset_action(&self, subgroup: &GroupHandle) -> Result<CosetAction, GroupError> {
        self.coset_action_bounded(subgroup, DEFAULT_INDEX_BOUND)
    }

    /// Like [`GroupHandle::coset_action`] with an explicit index bound.
    pub fn coset_action_bounded(
        &self,
        subgroup: &GroupHandle,
        bound: u64,
    ) -> Result<CosetAction, GroupError> {
        if subgroup.dim != self.dim || !subgroup.generators.iter().all(|g| self.contains(g)) {
            return Err(GroupError::NotSubgroup);
        }
        let index = &self.order / &subgroup.order;
        if index.to_u64().is_none_or(|i| i > bound) {
            return Err(GroupError::IndexTooLarge { index, bound });
        }
        // Breadth-first coset enumeration; cosets xH and yH coincide exactly
        // when y⁻¹x ∈ H, tested through H's stabilizer chain.
        let mut reps: Vec<MatrixGF2> = vec![MatrixGF2::identity(self.dim)];
        let mut rep_invs: Vec<MatrixGF2> = vec![MatrixGF2::identity(self.dim)];
        let mut images: Vec<Vec<usize>> = vec![Vec::new(); self.generators.len()];
        let mut head = 0;
        while head < reps.len() {
            for gi in 0..self.generators.len() {
                let c = self.generators[gi].mul(&reps[head]);
                let found = rep_invs
                    .iter()
                    .position(|ri| subgroup.contains(&ri.mul(&c)));
                let idx = match found {
                    Some(j) => j,
                    None => {
                        rep_invs.push(c.inverse().expect("group element"));
                        reps.push(c);
                        reps.len() - 1
                    }
                };
                images[gi].push(idx);
            }
            head += 1;
        }
        debug_assert!(images.iter().all(|im| im.len() == reps.len()));
        Ok(CosetAction {
            degree: reps.len(),
            generator_images: images,
            reps,
            rep_invs,
            subgroup: subgroup.clone(),
        })
    }
}

/// A transitive permutation action of a group on the cosets of a subgroup.
pub struct CosetAction {
    /// Number of cosets [G : H].
    pub degree: usize,
    /// For each generator of G, the permutation it induces (image list).
    pub generator_images: Vec<Vec<usize>>,
    reps: Vec<MatrixGF2>,
    rep_invs: Vec<MatrixGF2>,
    subgroup: GroupHandle,
}

impl CosetAction {
    /// Permutation induced by an element `m` of the big group: position `i`
    /// holds the index of the coset m·(reps[i]·H).
    ///
    /// # Errors
    /// [`GroupError::NotInGroup`] if `m` does not permute the cosets (i.e. is
    /// not in the enumerated group).
    pub fn permutation_of(&self, m: &MatrixGF2) -> Result<Vec<usize>, GroupError> {
        let mut out = Vec::with_capacity(self.degree);
        for i in 0..self.degree {
            let c = m.mul(&self.reps[i]);
            // xH = cH  ⟺  x⁻¹c ∈ H.
            match self
                .rep_invs
                .iter()
                .position(|ri| self.subgroup.contains(&ri.mul(&c)))
            {
                Some(j) => out.push(j),
                None => return Err(GroupError::NotInGroup),
            }
        }
        Ok(out)
    }

    /// Number of cosets fixed by `m` (the permutation-character value).
    ///
    /// # Errors
    /// [`GroupError::NotInGroup`] as for [`CosetAction::permutation_of`].
    pub fn fixed_points(&self, m: &MatrixGF2) -> Result<usize, GroupError> {
        Ok(self
            .permutation_of(m)?
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i == j)
            .count())
    }
}

fn small_primes_dividing(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Conjugation-invariant fingerprint: element order plus the rank profile of
/// powers shifted by the identity.
fn conjugation_fingerprint(m: &MatrixGF2) -> (u64, Vec<usize>) {
    let ord = element_order(m).expect("group element");
    let id = MatrixGF2::identity(m.dim());
    let mut profile = Vec::new();
    // rank((m^k + 1)^j) for the divisor powers k of the order and small j.
    let mut divisors: Vec<u64> = (1..=ord).filter(|d| ord % d == 0).collect();
    divisors.sort_unstable();
    for k in divisors {
        let shifted = m.pow(k).add(&id);
        let mut acc = shifted.clone();
        for _ in 0..4 {
            profile.push(acc.rank());
            acc = acc.mul(&shifted);
        }
    }
    (ord, profile)
}

/// Conjugacy-class data for a group within the enumeration bound.
pub struct ConjClassList {
    /// Lexicographically minimal member of each class, in canonical order.
    pub representatives: Vec<MatrixGF2>,
    /// Class sizes.
    pub sizes: Vec<u64>,
    /// Orders of the class representatives.
    pub element_orders: Vec<u64>,
    /// For each prime p dividing |G|, the map sending a class index to the
    /// class index of p-th powers of its members.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
}

impl ConjClassList {
    /// Number of classes.
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    /// Whether the list is empty (never true for an actual group).
    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}
