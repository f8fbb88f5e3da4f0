//! Exact construction and verification of minimal distance-two
//! permutation-invariant qudit codes.
//!
//! For every local dimension `q >= 2` this crate builds a `((4,q,2))_q` code
//! inside the symmetric subspace `Sym^4(C^q)` and proves, in exact
//! radical-rational arithmetic with zero tolerance, that it detects every
//! single-site error. The codeword supports live on the even-entry
//! occupation layer, which is the vertex/edge set of the complete graph
//! `K_q`: odd `q` uses the midpoint grouping of edges, even `q` a round-robin
//! decomposition into perfect matchings. A brute-force tensor-space oracle
//! cross-checks the fast verifier, and an exact Fourier-Motzkin eliminator
//! certifies that no such code fits in fewer than four qudits.
//!
//! # Quick start
//!
//! ```
//! use piq4::codebook::build;
//! use piq4::verify::{check_support_separation, kl_full_check};
//!
//! let code = build(5).unwrap();
//! assert!(check_support_separation(&code).passes());
//! let report = kl_full_check(&code);
//! assert!(report.passes() && report.all_lambda_zero());
//! ```
//!
//! The `examples/` directory holds one runnable example per capability:
//!
//! ```bash
//! cargo run --example build_codebook
//! cargo run --example verify_distance
//! cargo run --example packet_families
//! cargo run --example transversal_paulis
//! cargo run --example dense_cross_check
//! cargo run --example nonexistence_sweep
//! cargo run --example exact_scalars
//! ```
//!
//! A thin `piq4` binary exposes the same functionality as `build`, `verify`,
//! and `nonexistence` subcommands emitting JSON or text certificates.

pub mod cert;
pub mod cli;
pub mod codebook;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod packets;
pub mod scalar;
pub mod sym;
pub mod verify;

pub use codebook::{build, Codebook};
pub use error::{Error, Result};
pub use scalar::{RadicalScalar, Rational};
pub use sym::{OccupationVector, SymmetricState};
