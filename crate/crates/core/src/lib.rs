//! Exact-arithmetic computational algebra for chain complexes, Picard
//! omega-categories, orientals, simplicial abelian groups, and descent
//! over finite sites.

pub mod chain;
pub mod group;
pub mod matrix;

pub use group::{group_iso_test, subquotient, AlgebraError, FgAbGroup, GroupElement, GroupHom};
pub use matrix::{smith_normal_form, IntMatrix, SmithData};
