//! Cubical pasting diagrams and the monads and coherators built on them.
//!
//! The crate is organized bottom-up: cubical sets, words in degeneracies
//! and connections, boxes and links, coordinate configurations, pastings,
//! the free reflexive construction, sketches and the pasting monad, and
//! finally cubical and globular coherators.

pub mod cubical;
pub mod words;
pub mod boxes;
pub mod coords;
pub mod pastings;
pub mod reflexive;
pub mod sketches;
pub mod strict;
pub mod lifting;
pub mod coherator;
pub mod globular;
pub mod axioms;
pub mod io;
pub mod export;
pub mod runner;
