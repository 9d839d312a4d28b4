//! Exact mapping of a quantum system linearly coupled to a bosonic or
//! fermionic reservoir onto a semi-infinite nearest-neighbour chain.
//!
//! A spectral density `J(ω)` induces the measure `dμ(x) = h²(x) dx` under the
//! linear dispersion `ω = g·x`. The monic recurrence coefficients `(αₙ, βₙ)`
//! of that measure give the chain directly:
//!
//! ```text
//! c₀ = √β₀ = ‖π₀‖,    ωₙ = g·αₙ,    tₙ = g·√βₙ₊₁
//! ```
//!
//! The crate provides closed forms for the classical families (shifted
//! Jacobi, associated Laguerre, little-q Jacobi, Hahn), two stable numerical
//! engines for arbitrary measures (discretised Stieltjes and RKPW Lanczos),
//! the unstable moment-based Gram–Schmidt route for comparison, and an
//! extended-precision oracle used to validate all of the above.
//!
//! ```
//! use chainmap::chain::jacobi_chain;
//!
//! let chain = jacobi_chain(0.1, 1.0, 1.0, 4).unwrap();
//! assert!((chain.omega[0] - 2.0 / 3.0).abs() < 1e-15);
//! assert!((chain.t[0] - 2f64.sqrt() / 6.0).abs() < 1e-15);
//! ```

pub mod asymptotics;
pub mod chain;
pub mod cli;
pub mod measures;
pub mod numfmt;
pub mod oracle;
pub mod orthopoly;
