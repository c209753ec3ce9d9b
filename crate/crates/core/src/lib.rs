//! Free group cryptography: reduced words, Nielsen reduction, automorphisms,
//! LCG-driven one-time pads, a matrix representation of free groups, a
//! public-key exchange over automorphism powers, and brute-force cryptanalysis.

pub mod automorphism;
pub mod cipher;
pub mod cryptanalysis;
pub mod error;
pub mod keystream;
pub mod matrix;
pub mod nielsen;
pub mod pubkey;
mod text;
pub mod word;

pub use automorphism::{Factor, FactoredAutomorphism, WhiteheadMove};
pub use error::{Error, Result};
pub use keystream::{AutFamily, LcgParams, Prg, RandomSource};
pub use nielsen::{ElementaryMove, GeneratingTuple};
pub use word::{Alphabet, Letter, Word};
