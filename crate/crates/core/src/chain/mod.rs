//! Open covers, chains, the chainability formulas, and both directions of
//! the witness/chain correspondence.

mod arc;
mod cover;
mod extract;
mod psi;
mod search;
mod witness;

pub use arc::ArcCoords;
pub use cover::{nerve_and_is_chain, prune_chain, refines, ChainCertificate, ChainViolation, Cover, Nerve};
pub use extract::{extract_chain, Extraction};
pub use psi::{psi0, psi1, psi1_is_zero, psi2, sigma_inner, sigma_parts, SigmaParts};
pub use search::{find_chain_refinement, nerve_cycle_obstruction, Obstruction, SearchBudget, SearchOutcome};
pub use witness::{build_witness, Construction, Witness};
