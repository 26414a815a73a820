//! Concrete finite groups given by permutation or matrix generators.
//!
//! [`enumerate_group`] closes a generating set into an [`EnumeratedGroup`]
//! whose elements are indexed `0..order` in a canonical order (sorted by
//! their byte keys), so everything derived from an enumeration is
//! independent of traversal order and thread count.

mod element;
mod enumerated;
mod perm;
mod random;
mod search;

pub use element::{element_order, GroupElement, Shape};
pub(crate) use element::KEY_SYMBOLS;
pub use enumerated::{
    center_and_projective, coset_action, enumerate_group, order_spectrum, CenterInfo, ConjugacyClasses,
    CosetAction, EnumeratedGroup, Spectrum, SpectrumMode, DEFAULT_ENUMERATION_CAP,
};
pub use perm::Permutation;
pub use random::{random_elements, sampled_spectrum};
pub use search::{find_subgroup_by_type, is_simple, SubgroupSearch, SubgroupWitness, TargetSpec};

use thiserror::Error;

use crate::ring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cap of {cap} exceeded")]
    CapExceeded { cap: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(Shape, Shape),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A labelled, nonempty list of generators of one shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSet {
    label: String,
    shape: Shape,
    generators: Vec<GroupElement>,
}

impl GenSet {
    pub fn new(label: impl Into<String>, generators: Vec<GroupElement>) -> Result<Self, GroupError> {
        let first = generators
            .first()
            .ok_or_else(|| GroupError::Input("generating set is empty".into()))?;
        let shape = first.shape();
        if let Some(bad) = generators.iter().find(|g| g.shape() != shape) {
            return Err(GroupError::ShapeMismatch(shape, bad.shape()));
        }
        Ok(GenSet { label: label.into(), shape, generators })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}
