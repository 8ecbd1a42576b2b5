//! Combinatorial neural codes: trunks, morphisms, and the covering relations
//! of the minor poset, with exact realizations from open box covers.

pub mod ascent;
pub mod canon;
pub mod code;
pub mod codeword;
pub mod descent;
pub mod error;
pub mod geometry;
pub mod morphism;

pub use ascent::{CoverConstruction, CoverType, IsolatedSubset};
pub use canon::{canonical_form, canonical_key, CanonicalForm};
pub use code::{Code, CodeId, Trunk};
pub use codeword::{cw, Codeword};
pub use descent::{CoveredCode, NeuronClassification, NeuronStatus};
pub use error::{Error, Result};
pub use geometry::{BoxCover, OpenBox};
pub use morphism::{CodeMap, Morphism};
