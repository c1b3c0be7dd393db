//! Exact arithmetic for augmentations of the framed cord algebra of a braid
//! closure and the link-group representations they induce.
//!
//! Starting from a braid word, the crate computes cord values symbolically
//! ([`cord`]), assembles the polynomial relations whose solutions are the
//! augmentations ([`relations`]), enumerates or verifies solutions over the
//! rationals and prime fields ([`augment`]), builds the induced
//! representation of the link group ([`rep`]), checks its structural
//! properties ([`props`]), and transports everything across the braid moves
//! that preserve the closure ([`markov`]).

pub mod augment;
pub mod braid;
pub mod cord;
pub mod field;
pub mod linalg;
pub mod markov;
pub mod poly;
pub mod props;
pub mod relations;
pub mod rep;

pub use augment::{AnyAugmentation, AugError, Augmentation, Enumeration};
pub use braid::{components, BraidWord, ComponentMap, FreeWord};
pub use field::{Field, PrimeField, Rationals};
pub use markov::{MoveKind, MoveRecord};
pub use poly::{LaurentPoly, PolyContext, VarId};
pub use relations::{all_relations, RelationSet};
pub use rep::{build_rep, AugRep};

/// Augmentation with rational values.
pub type QAug = Augmentation<Rationals>;
/// Augmentation with values in a prime field.
pub type FpAug = Augmentation<PrimeField>;
