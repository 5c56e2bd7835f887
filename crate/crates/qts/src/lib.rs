//! qts decides whether an element of a cyclic quartic number field
//! K = Q(sqrt(A(D + B sqrt D))) is a sum of two squares, entirely in exact
//! arithmetic. The verdict comes with one certificate per relevant place of
//! K (real embeddings, odd primes = 3 mod 4 dividing the norm, dyadic
//! places), each carrying the rule applied and the intermediate data, so
//! every decision can be audited by hand. Bundled brute-force oracles
//! (residue enumeration, representation search, classical Hilbert symbols)
//! verify the rule tables and the engine at desk scale.
//!
//! Start with [`kfield::FieldParams::new`] to fix a field, then
//! [`decide::is_sum_of_two_squares`]. The `examples/` directory walks
//! through every major capability; the `qts` binary exposes them as
//! subcommands.

pub mod cli;
pub mod decide;
pub mod dyadic;
pub mod error;
pub mod kfield;
pub mod localtests;
pub mod numth;
pub mod oracle;
pub mod splitting;

pub use decide::{Decision, Verdict};
pub use error::{Error, Result};
pub use kfield::{FieldParams, QuadElement, QuartElement, RawQuartElement, RawQuarticField};
pub use localtests::{Place, SymbolCertificate};
pub use splitting::{SplitTag, SplittingType};
