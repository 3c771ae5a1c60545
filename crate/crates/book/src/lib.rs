//! The guide in `book/`, compiled so that `cargo test --doc` runs every
//! Rust snippet against the current API. One module per chapter, so a
//! failing snippet names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fans.md")]
pub mod fans {}
#[doc = include_str!("../../../book/src/cones.md")]
pub mod cones {}
#[doc = include_str!("../../../book/src/classes.md")]
pub mod classes {}
#[doc = include_str!("../../../book/src/base-loci.md")]
pub mod base_loci {}
#[doc = include_str!("../../../book/src/witnesses.md")]
pub mod witnesses {}
#[doc = include_str!("../../../book/src/small-modifications.md")]
pub mod small_modifications {}
#[doc = include_str!("../../../book/src/theorem.md")]
pub mod theorem {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
