//! Exact arithmetic in cyclotomic fields ℚ(ζ_n).
//!
//! Values are kept in a canonical integral basis of ℚ(ζ_n) at the minimal
//! conductor, so equality, hashing and ordering are structural.  The basis
//! used is the classical one obtained by eliminating one residue pattern per
//! prime power dividing the conductor: writing a prime power p^ν ‖ n and,
//! for an exponent k, its p-component k_p = k mod p^ν, the basis consists of
//! the ζ_n^k for which the leading p-adic digit ⌊k_p / p^{ν−1}⌋ differs from
//! p − 1 for every prime p | n.  This leaves exactly φ(n) exponents, and the
//! vanishing sums Σ_{j<p} ζ_n^{k + j·n/p} = 0 rewrite any forbidden exponent
//! into allowed ones one prime at a time.
//!
//! No floating point is used anywhere; coefficients are arbitrary-precision
//! rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest conductor accepted.  Everything in the intended workload lives in
/// conductor ≤ 24 fields; the ceiling catches runaway inputs early.
pub const CONDUCTOR_CEILING: u32 = 1 << 16;

/// An element of ℚ(ζ_n) in canonical form.
///
/// Invariants: `terms` maps basis exponents (0 ≤ k < conductor) to nonzero
/// rational coefficients; the exponent set is a subset of the canonical
/// basis; the conductor is minimal for the value (1 for rationals, and never
/// ≡ 2 mod 4).  Zero is the empty map at conductor 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cyc {
    conductor: u32,
    terms: BTreeMap<u32, BigRational>,
}

/// Error from [`Cyc::parse`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cyclotomic syntax error at byte {pos}: {msg}")]
pub struct CycParseError {
    /// Byte offset into the input at which the problem was detected.
    pub pos: usize,
    /// Human-readable description of the problem.
    pub msg: String,
}

fn prime_power_factors(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            let mut pv = 1u32;
            while n % p == 0 {
                n /= p;
                pv *= p;
            }
            out.push((p, pv));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl Cyc {
    /// The zero element.
    pub fn zero() -> Self {
        Cyc {
            conductor: 1,
            terms: BTreeMap::new(),
        }
    }

    /// The unit element.
    pub fn one() -> Self {
        Cyc::from_integer(1)
    }

    /// Embeds a rational number.
    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        Cyc {
            conductor: 1,
            terms,
        }
    }

    /// Embeds an integer.
    pub fn from_integer(i: i64) -> Self {
        Cyc::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// Embeds a big integer.
    pub fn from_bigint(i: BigInt) -> Self {
        Cyc::from_rational(BigRational::from_integer(i))
    }

    /// The root of unity ζ_n^k = exp(2πik/n), canonicalized.
    ///
    /// # Panics
    /// Panics if `n` is zero or exceeds [`CONDUCTOR_CEILING`].
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        assert!(
            n <= CONDUCTOR_CEILING,
            "conductor {n} exceeds ceiling {CONDUCTOR_CEILING}"
        );
        let k = k.rem_euclid(n as i64) as u32;
        let mut terms = BTreeMap::new();
        terms.insert(k, BigRational::one());
        Cyc::from_raw(n, terms)
    }

    /// Builds a value from conductor-`n` exponent/coefficient data and
    /// canonicalizes it.  Exponents are taken modulo `n`.
    pub fn from_terms(n: u32, entries: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        assert!(n >= 1, "conductor must be positive");
        assert!(
            n <= CONDUCTOR_CEILING,
            "conductor {n} exceeds ceiling {CONDUCTOR_CEILING}"
        );
        let mut terms: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (k, c) in entries {
            if c.is_zero() {
                continue;
            }
            let k = k.rem_euclid(n as i64) as u32;
            match terms.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Cyc::from_raw(n, terms)
    }

    fn from_raw(n: u32, terms: BTreeMap<u32, BigRational>) -> Self {
        let mut v = Cyc {
            conductor: n,
            terms,
        };
        v.canonicalize();
        v.minimize_conductor();
        v
    }

    /// Rewrites all terms into the canonical basis at the current conductor.
    fn canonicalize(&mut self) {
        let n = self.conductor;
        for (p, pv) in prime_power_factors(n) {
            let step = n / p; // adding `step` moves the leading p-digit, fixes other primes
            let forbidden_from = pv / p * (p - 1); // k_p ≥ this ⟺ leading digit = p−1
            let bad: Vec<u32> = self
                .terms
                .keys()
                .copied()
                .filter(|&k| k % pv >= forbidden_from)
                .collect();
            for k in bad {
                let c = self.terms.remove(&k).expect("term listed as present");
                for j in 1..p {
                    let tgt = ((k as u64 + j as u64 * step as u64) % n as u64) as u32;
                    match self.terms.entry(tgt) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(-c.clone());
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() -= c.clone();
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
            }
        }
    }

    /// Divides the conductor down to the minimal one for the value.
    ///
    /// In canonical form every exponent of a value lying in ℚ(ζ_d), d | n,
    /// is a multiple of n/d, so repeatedly dividing by the gcd of the
    /// conductor and all exponents reaches the minimal conductor.
    fn minimize_conductor(&mut self) {
        loop {
            if self.terms.is_empty() {
                self.conductor = 1;
                return;
            }
            let mut g = self.conductor;
            for &k in self.terms.keys() {
                g = g.gcd(&k);
                if g == 1 {
                    return;
                }
            }
            self.conductor /= g;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
            self.canonicalize();
        }
    }

    /// Canonical-basis terms as (exponent, coefficient) pairs, ascending by
    /// exponent.
    pub fn terms(&self) -> Vec<(u32, BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c.clone())).collect()
    }

    /// The minimal conductor of the value (1 for rationals and zero).
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Whether the value is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the value is one.
    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    /// Returns the value as a rational if it lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.conductor == 1 {
            return self.terms.get(&0).cloned();
        }
        None
    }

    /// Returns the value as an integer if it lies in ℤ.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.as_rational()?;
        if r.denom().is_one() {
            Some(r.numer().clone())
        } else {
            None
        }
    }

    /// Complex conjugation: ζ_n^k ↦ ζ_n^{−k} extended linearly.
    pub fn conjugate(&self) -> Self {
        let n = self.conductor;
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| (((n - k) % n) as i64, c.clone()))
            .collect::<Vec<_>>();
        Cyc::from_terms(n, terms)
    }

    /// The Galois automorphism ζ_n ↦ ζ_n^j for j coprime to the conductor.
    ///
    /// # Panics
    /// Panics if gcd(j, conductor) ≠ 1.
    pub fn galois(&self, j: u32) -> Self {
        let n = self.conductor;
        assert!(
            (j % n).gcd(&n) == 1 || n == 1,
            "galois exponent {j} not coprime to conductor {n}"
        );
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| (((k as u64 * j as u64) % n as u64) as i64, c.clone()))
            .collect::<Vec<_>>();
        Cyc::from_terms(n, terms)
    }

    /// Multiplicative inverse, or `None` for zero.
    ///
    /// Computed as the product of all nontrivial Galois conjugates divided by
    /// the (rational) norm, so the arithmetic stays exact.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Cyc::from_rational(r.recip()));
        }
        let n = self.conductor;
        let mut cofactor = Cyc::one();
        for j in 2..n {
            if j.gcd(&n) == 1 {
                cofactor = &cofactor * &self.galois(j);
            }
        }
        let norm = self * &cofactor;
        let norm = norm
            .as_rational()
            .expect("product over the full Galois orbit is rational");
        assert!(!norm.is_zero(), "nonzero element has nonzero norm");
        Some(&cofactor * &Cyc::from_rational(norm.recip()))
    }

    /// Raises to a nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cyc::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// |z|² = z·conj(z); rational and nonnegative for the values that arise
    /// from characters.
    pub fn norm_squared(&self) -> Self {
        self * &self.conjugate()
    }

    fn lift_to(&self, l: u32) -> BTreeMap<u32, BigRational> {
        debug_assert_eq!(l % self.conductor, 0);
        let f = l / self.conductor;
        self.terms
            .iter()
            .map(|(&k, c)| (k * f, c.clone()))
            .collect()
    }

    fn common_conductor(a: &Cyc, b: &Cyc) -> u32 {
        let l = (a.conductor as u64).lcm(&(b.conductor as u64));
        assert!(
            l <= CONDUCTOR_CEILING as u64,
            "conductor {l} exceeds ceiling {CONDUCTOR_CEILING}"
        );
        l as u32
    }

    /// Parses the interchange grammar
    /// `cyc := ("-")? term (("+"|"-") term)*`,
    /// `term := rat ("*" root)? | root`,
    /// `root := "E(" int ")" ("^" int)?`,
    /// `rat := int ("/" int)?`,
    /// where `E(n)` denotes exp(2πi/n).  No whitespace is permitted.
    pub fn parse(text: &str) -> Result<Self, CycParseError> {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
        .parse_full()
    }
}

impl Add for &Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        let l = Cyc::common_conductor(self, rhs);
        let mut terms = self.lift_to(l);
        for (k, c) in rhs.lift_to(l) {
            match terms.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Cyc::from_raw(l, terms)
    }
}

impl Sub for &Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        self + &(-rhs)
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl Mul for &Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        if self.is_zero() || rhs.is_zero() {
            return Cyc::zero();
        }
        let l = Cyc::common_conductor(self, rhs);
        let a = self.lift_to(l);
        let b = rhs.lift_to(l);
        let mut terms: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (&ka, ca) in &a {
            for (&kb, cb) in &b {
                let k = ((ka as u64 + kb as u64) % l as u64) as u32;
                let c = ca * cb;
                match terms.entry(k) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
        }
        Cyc::from_raw(l, terms)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: Cyc) -> Cyc {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Cyc> for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: &Cyc) -> Cyc {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Cyc {
    /// Canonical serialization; `Cyc::parse` inverts it exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.conductor;
        for (i, (&k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", format_rat(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_rat(&a))?;
                }
                if k == 1 {
                    write!(f, "E({n})")?;
                } else {
                    write!(f, "E({n})^{k}")?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CycParseError> {
        Err(CycParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt, CycParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are UTF-8");
        Ok(s.parse::<BigInt>().expect("digit string parses"))
    }

    fn parse_small_uint(&mut self, what: &str) -> Result<u32, CycParseError> {
        let v = self.parse_uint()?;
        u32::try_from(&v).or_else(|_| self.err(format!("{what} out of range")))
    }

    /// `root := "E(" int ")" ("^" int)?`; returns (n, k).
    fn parse_root(&mut self) -> Result<(u32, u32), CycParseError> {
        if !self.eat(b'E') {
            return self.err("expected 'E'");
        }
        if !self.eat(b'(') {
            return self.err("expected '(' after 'E'");
        }
        let n = self.parse_small_uint("root order")?;
        if n == 0 {
            return self.err("root order must be positive");
        }
        if n > CONDUCTOR_CEILING {
            return self.err(format!("root order exceeds ceiling {CONDUCTOR_CEILING}"));
        }
        if !self.eat(b')') {
            return self.err("expected ')'");
        }
        let k = if self.eat(b'^') {
            let e = self.parse_small_uint("root exponent")?;
            e % n
        } else {
            1 % n
        };
        Ok((n, k))
    }

    /// `term := rat ("*" root)? | root`; returns the term value.
    fn parse_term(&mut self) -> Result<Cyc, CycParseError> {
        if self.peek() == Some(b'E') {
            let (n, k) = self.parse_root()?;
            return Ok(Cyc::root_of_unity(n, k as i64));
        }
        let numer = self.parse_uint()?;
        let denom = if self.eat(b'/') {
            let d = self.parse_uint()?;
            if d.is_zero() {
                return self.err("zero denominator");
            }
            d
        } else {
            BigInt::one()
        };
        let rat = BigRational::new(numer, denom);
        if self.eat(b'*') {
            let (n, k) = self.parse_root()?;
            Ok(Cyc::root_of_unity(n, k as i64).scale(&rat))
        } else {
            Ok(Cyc::from_rational(rat))
        }
    }

    fn parse_full(&mut self) -> Result<Cyc, CycParseError> {
        let mut negate = self.eat(b'-');
        let mut acc = Cyc::zero();
        loop {
            let term = self.parse_term()?;
            acc = if negate { &acc - &term } else { &acc + &term };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                None => return Ok(acc),
                Some(_) => return self.err("unexpected character"),
            }
        }
    }
}
