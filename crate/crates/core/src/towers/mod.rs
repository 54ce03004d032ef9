//! Towers of shapes joined by strand embeddings.

pub mod embedding;
pub mod tower;
pub mod twist;

pub use embedding::{Embedding, EmbeddingKind, Strand};
pub use tower::{
    chain_extensions, chain_ideal_sequence, complete_extensions, decompose_ideal, verify_k4_limit,
    Decomposition, LimitIdealApprox, Tower, UnitChain,
};
pub use twist::{has_twist, lift_outcomes, search_twisted_embeddings, two_strand_embeddings};
