//! Verifier for minimal finite quotients of mapping class groups in genus 3 and 4.
//!
//! The crate is layered bottom-up: [`ring`] arithmetic, the [`group`] engine,
//! concrete [`classical`] groups and order formulas, [`fuchsian`] signature
//! arithmetic, the simple-group [`catalog`], the [`congruence`] checks and the
//! [`replay`] pipelines that tie them together.

pub mod par;
pub mod ring;
pub mod group;
pub mod classical;
pub mod fuchsian;
pub mod congruence;
pub mod catalog;
pub mod replay;
