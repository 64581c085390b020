//! The `book/` chapters, compiled as doc tests so every snippet stays in sync
//! with the library.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/codes.md")]
pub mod codes {}

#[doc = include_str!("../../../book/src/threshold_graphs.md")]
pub mod threshold_graphs {}

#[doc = include_str!("../../../book/src/composition.md")]
pub mod composition {}

#[doc = include_str!("../../../book/src/weights_and_cliques.md")]
pub mod weights_and_cliques {}

#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}

#[doc = include_str!("../../../book/src/presets.md")]
pub mod presets {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
