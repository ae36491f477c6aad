//! Secure and private linear function retrieval (SP-LFR) for cache-aided
//! broadcast, built on placement delivery arrays.
//!
//! - [`field`]: GF(q) arithmetic for prime q and GF(2^m).
//! - [`pda`]: placement delivery arrays, the MAN construction, bounds, file I/O.
//! - [`engine`]: placement, delivery and decoding with superposed security and
//!   privacy keys, including the degenerate modes and multi-round key updates.
//! - [`audit`]: exact enumeration checks of correctness, security and privacy.
//! - [`tradeoff`]: exact memory-load curves, converse bounds and ratio checks.
//! - [`exec`]: sequential or parallel execution of the sweeps above.

pub mod audit;
pub mod engine;
pub mod exec;
pub mod field;
pub mod pda;
pub mod rational;
pub mod toy;
pub mod tradeoff;

pub use exec::Strategy;
pub use field::{FieldContext, FieldElement};
pub use pda::{man_pda, Pda, PdaEntry};
