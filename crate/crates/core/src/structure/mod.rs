//! Structure theory of towers: local parameters, the rank-`r` rings of
//! integers, unit decomposition, canonical expansions, classification and
//! simple extensions.

mod classify;
mod expand;
mod extension;
mod params;

pub use classify::{classify, CanonicalForm};
pub use expand::{
    additive_expand, check_admissible, multiplicative_expand, AdditiveExpansion, MultiIndex,
    MultiplicativeExpansion,
};
pub use extension::{extension_invariants, ExtensionData, ExtensionKind};
pub use params::{
    last_residue, local_gens, local_parameters, prime_membership, rank_membership, representative,
    unit_decompose, LocalParams,
};
