//! Exact-arithmetic toolkit for computational representation theory of
//! finite groups of Lie type over 𝔽₂.
//!
//! The crate provides, as exact (never floating-point) computations:
//!
//! * [`cyclotomic`] — arithmetic in cyclotomic fields ℚ(ζ_n), the scalar type
//!   used for every character value and Fourier coefficient;
//! * [`gf2group`] — bit-packed matrix groups over 𝔽₂: orders via stabilizer
//!   chains, element orders, conjugacy classes, coset actions;
//! * [`chartab`] — character tables: a Dixon–Schneider implementation for
//!   generic small groups and a Murnaghan–Nakayama oracle for symmetric
//!   groups, plus inner products and decomposition;
//! * [`chevalley`] — root systems C₂/D₄/F₄/E₆, integral Chevalley bases,
//!   adjoint generator matrices over 𝔽₂, and named class representatives;
//! * [`families`] — Lusztig's nonabelian Fourier transform on pairs M(Γ) and
//!   the built-in family tables binding pairs to unipotent character names;
//! * [`ctabio`] — a text interchange format for character tables, exact
//!   validation, and a constraint-based class-fusion search;
//! * [`verify`] — the ζ-scalar pipeline: characteristic functions of
//!   cuspidal character sheaves as class functions, almost-character
//!   evaluation, exact ζ solving, and the packaged Sp₄(𝔽₂) end-to-end run.

pub mod chartab;
pub mod chevalley;
pub mod ctabio;
pub mod cyclotomic;
pub mod families;
pub mod gf2group;
pub mod verify;
