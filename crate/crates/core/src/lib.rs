//! Symbolic engine for the simply-typed η-long resource calculus and its
//! causal game model.
//!
//! The crate is layered bottom-up:
//!
//! * [`syntax`], [`typing`], [`rewrite`]: terms, types, substitution and
//!   normalization with natural-number formal sums.
//! * [`arena`], [`causal`]: arenas, configurations, augmentations and their
//!   canonical forms.
//! * [`correspondence`]: the bijection between normal terms and pointed
//!   isogmentations.
//! * [`strategy`]: interaction, composition, weighted strategies and the
//!   structural kernels.
//! * [`interp`]: the interpretation of terms as strategies and the
//!   soundness harness.
//! * [`export`]: JSON and DOT formats.

pub mod syntax;
pub mod typing;
pub mod rewrite;
pub mod arena;
pub mod causal;
pub mod correspondence;
pub mod strategy;
pub mod interp;
pub mod export;
