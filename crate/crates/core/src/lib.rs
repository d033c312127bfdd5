//! Diagonal sweeping of connection matrices.
//!
//! A connection matrix is a strictly upper triangular matrix whose rows and
//! columns are partitioned into chain indices `J_0, …, J_b`, with nonzeros
//! only in the blocks `J_{k-1} × J_k`. This crate sweeps such matrices diagonal
//! by diagonal, marking primary pivots and changing basis to eliminate other
//! entries, in several flavours:
//!
//! * [`sweep_z::sweep_over_z`] keeps every basis change integral;
//! * [`sweep_f::sweep_accumulated`] and [`sweep_f::sweep_incremental`] work over ℚ;
//! * [`block_seq`] runs a sweep one block at a time, and provides the revised
//!   one-block column-echelon sweep;
//! * [`row_cancel`] clears each pivot's row instead, and derives cancellation
//!   schedules and reduced complexes from it.
//!
//! [`tu`] tests total unimodularity and recognizes surface matrices,
//! [`oracles`] provides brute-force cross-checks and random instances, and
//! [`invariants`] turns the algorithms' guarantees into executable checks.
//!
//! ```
//! use cmsweep::{cmx, sweep_z, row_cancel, PivotTrace};
//!
//! let text = "CMX 1\nm 4\nb 2\nindex 1 0\nindex 2 0\nindex 3 1\nindex 4 2\nentry 1 3 1\nentry 2 3 -1\n";
//! let sphere = cmx::parse_cmx(text).unwrap();
//! let z = sweep_z::sweep_over_z(&sphere).unwrap();
//! let rc = row_cancel::row_cancellation(&sphere).unwrap();
//! assert_eq!(z.primary_pivots(), rc.primary_pivots());
//! ```

pub mod block_seq;
pub mod cmx;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod invariants;
pub mod marks;
pub mod matrix;
pub mod model;
pub mod oracles;
pub mod row_cancel;
pub mod sweep_f;
pub mod sweep_z;
pub mod trace;
pub mod tu;

pub use error::SweepError;
pub use marks::{Mark, MarkKind, MarkRegistry};
pub use matrix::{QMatrix, Rational};
pub use model::{ConnectionMatrix, Partition, Position};
pub use trace::{Algorithm, PivotTrace, SweepTrace};
