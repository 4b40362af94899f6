//! Bounds and capacity regions for the two-receiver broadcast channel whose
//! decoders can confer over rate-limited digital links.
//!
//! The crate is organised bottom-up:
//!
//! * [`info`]: finite joints, entropy and mutual information in bits
//! * [`channels`]: discrete and Gaussian channel descriptions
//! * [`regions`]: rate polytopes, support-function envelopes and
//!   Fourier-Motzkin elimination
//! * [`dm_bounds`]: inner, outer and capacity regions for discrete channels
//! * [`gaussian`]: closed-form Gaussian regions and gap certificates
//! * [`suites`]: named verification runs with pass/fail reports

pub mod channels;
pub mod dm_bounds;
pub mod error;
pub mod export;
pub mod gaussian;
pub mod info;
pub mod regions;
pub mod simplex;
pub mod suites;

pub use error::{Error, Result};

/// The guide's snippets, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/information.md")]
    struct Information;
    #[doc = include_str!("../../../book/src/channels.md")]
    struct Channels;
    #[doc = include_str!("../../../book/src/regions.md")]
    struct Regions;
    #[doc = include_str!("../../../book/src/fourier-motzkin.md")]
    struct FourierMotzkin;
    #[doc = include_str!("../../../book/src/discrete-bounds.md")]
    struct DiscreteBounds;
    #[doc = include_str!("../../../book/src/gaussian.md")]
    struct Gaussian;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
