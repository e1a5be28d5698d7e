//! Compiles the code snippets of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/ordinals.md")]
pub mod ordinals {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/profiles.md")]
pub mod profiles {}

#[doc = include_str!("../../../book/src/back_and_forth.md")]
pub mod back_and_forth {}

#[doc = include_str!("../../../book/src/scott_sentences.md")]
pub mod scott_sentences {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
