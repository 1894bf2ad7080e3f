//! Exact homology of nilpotent k-ary Lie algebras.
//!
//! The crate builds finite-dimensional k-ary Lie algebras from integer
//! structure constants, assembles the shuffle-sum chain complex on the
//! exterior powers `Λ^{i(k-1)+1} g`, and computes Betti numbers by exact
//! sparse rank over the rationals. On top of that sit validators for the
//! closed-form Betti formulas of the standard families, the toral-rank
//! bounds, and a weight-character route to Schur decompositions of the
//! homology of free 2-step nilpotent algebras.
//!
//! Module map:
//! - [`algebra`]: [`KaryAlgebra`], brackets, Jacobi/nilpotency/center checks.
//! - [`families`]: Heisenberg, ACJ, free 2-step, small free 3-step, current algebras.
//! - [`complex`]: wedge bases, shuffle sets, differentials, weight blocks.
//! - [`sparse`] and [`rank`]: sparse integer matrices and exact/modular rank.
//! - [`homology`]: Betti numbers, reports and formula validators.
//! - [`toral`]: toral rank inequality and its 2-step refinement.
//! - [`schur`]: partitions, Schur characters, decompositions and bounds.

pub mod algebra;
pub mod combinatorics;
pub mod complex;
pub mod error;
pub mod families;
pub mod homology;
pub mod rank;
pub mod schur;
pub mod sparse;
pub mod subspace;
pub mod toral;

pub use algebra::{KaryAlgebra, SparseVec};
pub use complex::{ChainLayout, ShuffleSet, WedgeMonomial};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use homology::{HomologyReport, Limits};
pub use schur::{CharacterTable, Partition, SchurDecomposition};
pub use sparse::SparseIntMatrix;
pub use subspace::Subspace;
pub use toral::ToralBoundRecord;
