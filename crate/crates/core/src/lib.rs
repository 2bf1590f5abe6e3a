//! Two-fold automorphisms, canonical double covers and TF-isomorphism of
//! finite simple graphs.
//!
//! The central object is [`TwoFoldStructure`]: the group of permutations that
//! carry neighbourhoods onto neighbourhoods, the involution `γ` pairing each
//! such permutation with its partner, and the subsets derived from it
//! (automorphisms, `Im(α)`, antimorphisms). From it the crate decides stability,
//! enumerates all graphs sharing a double cover with a given graph, and builds
//! the graph families that realise prescribed two-fold symmetry.

pub mod constructions;
pub mod corpus;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod group;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod search;
pub mod semidirect;
pub mod suites;
pub mod tfiso;
pub mod twofold;

pub use error::{Error, Result};
pub use graph::Graph;
pub use partition::VertexPartition;
pub use perm::{PermGroup, Permutation};
pub use tfiso::TfCensus;
pub use twofold::{TwoFoldStructure, Verdict};
