//! Verification workbench for the five rigid six-dimensional h-space metric
//! families (types [2211], [321], [33], [411], [51]).
//!
//! The library evaluates each family's canonical metric with exact first and
//! second derivatives (forward-mode jets), computes the Riemann tensor by
//! brute force, evaluates the closed-form condition quantities (ρ, χ, γ) and
//! checks the constant-curvature criterion
//!
//!   R^i_{jkl} = K (δ^i_k g_{jl} − δ^i_l g_{jk}),  K = const,
//!
//! in both directions: parameter conditions hold ⇔ the fitted residual
//! vanishes. See the `verdict` module for the end-to-end pipeline and the
//! `hspace` binary for the CLI.
//!
//! ```
//! use hspace::verdict::verify_theorem;
//!
//! // a [33] configuration satisfying its conditions (ε = ε̃ = 0)
//! let cfg = hspace::fixtures::load("f33_flat")?;
//! let verdict = verify_theorem(&cfg, 10, 7)?;
//! assert!(verdict.conditions_hold);
//! assert!(verdict.consistent);
//! assert!(verdict.numeric_k.abs() < 1e-10);
//! # Ok::<(), hspace::Error>(())
//! ```

// Index loops over the fixed six chart dimensions read better than iterator
// chains for multi-index tensor formulas.
#![allow(clippy::needless_range_loop)]

pub mod closedform;
pub mod curvature;
pub mod error;
pub mod funcspec;
pub mod jets;
pub mod metrics;
pub mod verdict;

pub use error::{Error, Result};

/// Bundled example configurations, shared by the test suites and usable as
/// CLI inputs from `fixtures/`.
pub mod fixtures {
    use crate::error::{Error, Result};
    use crate::metrics::FamilyConfig;

    pub const NAMES: &[&str] = &[
        "f2211_flat",
        "f2211_eps1",
        "f2211_generic",
        "f321_flat",
        "f321_fprime",
        "f321_generic",
        "f33_flat",
        "f33_eps1",
        "f411_flat",
        "f411_gamma",
        "f51_flat",
        "f51_eps1",
    ];

    fn body(name: &str) -> Option<&'static str> {
        Some(match name {
            "f2211_flat" => include_str!("../fixtures/f2211_flat.json"),
            "f2211_eps1" => include_str!("../fixtures/f2211_eps1.json"),
            "f2211_generic" => include_str!("../fixtures/f2211_generic.json"),
            "f321_flat" => include_str!("../fixtures/f321_flat.json"),
            "f321_fprime" => include_str!("../fixtures/f321_fprime.json"),
            "f321_generic" => include_str!("../fixtures/f321_generic.json"),
            "f33_flat" => include_str!("../fixtures/f33_flat.json"),
            "f33_eps1" => include_str!("../fixtures/f33_eps1.json"),
            "f411_flat" => include_str!("../fixtures/f411_flat.json"),
            "f411_gamma" => include_str!("../fixtures/f411_gamma.json"),
            "f51_flat" => include_str!("../fixtures/f51_flat.json"),
            "f51_eps1" => include_str!("../fixtures/f51_eps1.json"),
            _ => return None,
        })
    }

    pub fn load(name: &str) -> Result<FamilyConfig> {
        let raw = body(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown fixture `{name}`")))?;
        FamilyConfig::from_json_str(raw)
    }

    /// All bundled configurations, validated.
    pub fn all() -> Vec<FamilyConfig> {
        NAMES.iter().map(|n| load(n).unwrap()).collect()
    }
}
