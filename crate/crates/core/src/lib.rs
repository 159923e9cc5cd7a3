//! Kendall transformation of ordinal data.
//!
//! A numeric feature of `n` objects becomes a sequence of `n(n-1)` symbols,
//! one per ordered pair of objects, recording whether the first value is
//! smaller ([`Symbol::Asc`]), larger ([`Symbol::Desc`]) or equal
//! ([`Symbol::Tie`]). The result keeps the ranking and nothing else, so it is
//! invariant under any strictly increasing map, and discrete estimators can
//! be used on it without binning:
//!
//! ```
//! use kendall_core::{kendall_transform, mutual_information, kendall_tau, mi_from_tau, OrdinalVector};
//!
//! let x = OrdinalVector::new("x", [1.0, 2.0, 3.0, 4.0]);
//! let y = OrdinalVector::new("y", [1.0, 3.0, 2.0, 4.0]);
//! let mi = mutual_information(&kendall_transform(&x)?, &kendall_transform(&y)?)?;
//! let tau = kendall_tau(&x, &y)?.tau;
//! assert!((mi - mi_from_tau(tau)?).abs() < 1e-12);
//! # Ok::<(), kendall_core::KendallError>(())
//! ```
//!
//! Modules:
//! - [`transform`]: pair scheme, forward transform, Copeland inverse.
//! - [`infotheory`]: plug-in entropy/MI and closed-form identities.
//! - [`integrate`]: merging independently transformed batches.
//! - [`analysis`]: binning baselines, feature ranking, simulations.

pub mod analysis;
pub mod categorical;
mod error;
pub mod infotheory;
pub mod integrate;
mod ranks;
pub mod transform;

pub use categorical::{make_joint, Categorical, Labels};
pub use error::{KendallError, Result};
pub use infotheory::{
    auroc, conditional_mi, entropy, interaction_information, joint_entropy, kendall_tau,
    kendall_tau_naive, mi_from_auroc, mi_from_rho, mi_from_tau, mutual_information, Auroc,
    ContingencyTable, LogBase, TauValue,
};
pub use integrate::{complete_fraction, merge_systems, merge_transformed, BatchMap};
pub use ranks::fractional_ranks;
pub use transform::{
    copeland_inverse, expand_categorical, jitter_ties, kendall_transform, pair_at, pair_index,
    transform_system, weighted_copeland, KendallSequence, OrdinalVector, PairScheme, PairVote,
    PairVotes, Ranking, Symbol, TransformedSystem,
};
