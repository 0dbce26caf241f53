//! Largest well-ordered towers of progressive maps, their fixed points, and
//! maximal elements obtained from them.
//!
//! Given a poset `X`, a progressive map `f` (`x ≤ f(x)` for all `x`) and a
//! start point `x0`, the crate builds the largest Bourbaki `f`-tower
//! `Ω_f(x0)`: a well-ordered ascent from `x0` whose successor stages apply
//! `f` and whose limit stages take least upper bounds of everything before.
//! Its top `ω` is a fixed point of `f`, and that is certified rather than
//! assumed.
//!
//! ```
//! use bourbaki_tower::map::TableMap;
//! use bourbaki_tower::poset::fixtures;
//! use bourbaki_tower::tower::build_tower_finite;
//!
//! let d = fixtures::diamond();
//! let f = TableMap::from_labels(&d, &[("bot", "l"), ("l", "top"), ("r", "top"), ("top", "top")])?;
//! let cert = build_tower_finite(&d, &f, d.index_of("bot")?)?;
//! assert!(cert.is_valid());
//! assert_eq!(d.label(cert.omega).as_str(), "top");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Modules:
//!
//! - [`poset`]: finite posets, chains, segments, successors, lubs, cones.
//! - [`ordinal`]: Cantor normal form ordinals below ε₀ for stage indices.
//! - [`provider`]: the order-oracle trait and its finite, ordinal and
//!   powerset-product carriers.
//! - [`map`]: self-maps and their symbolic tags.
//! - [`tower`]: checking, building, enumerating and comparing towers.
//! - [`maximality`]: choice selectors and maximal-element search.
//! - [`oracle`]: exhaustive and seeded verification over small posets.
//! - [`format`]: JSON documents and DOT export.
//! - [`dataflow`]: reaching definitions solved as a tower.
//!
//! The guide in `book/` walks through each of these; its code listings are
//! compiled and run as doctests of this crate.

pub mod dataflow;
pub mod format;
pub mod map;
pub mod maximality;
pub mod oracle;
pub mod ordinal;
pub mod poset;
pub mod provider;
pub mod tower;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/transfinite.md")]
    mod transfinite {}
    #[doc = include_str!("../../../book/src/maximality.md")]
    mod maximality {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/dataflow.md")]
    mod dataflow {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
