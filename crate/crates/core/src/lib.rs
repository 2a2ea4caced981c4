//! Slice-and-compress receivers for coherent-state alphabets.
//!
//! A coherent state `|α_j⟩` is split into `n` weak slices, each slice is
//! moved onto a qubit, and a sequence of two-system unitaries compresses the
//! information of every slice into a small register. The register is then
//! measured with a minimum-error measurement. The crate simulates the
//! register exactly as a density matrix and compares it to the Helstrom
//! limit and to a homodyne baseline.
//!
//! * [`linalg`]: small dense complex matrices.
//! * [`coherent`]: overlaps, alphabets and the transfer channels.
//! * [`compression`]: register parameters, step unitaries and receiver runs.
//! * [`discrimination`]: Helstrom bounds, POVM optimization, homodyne.
//! * [`sweep`]: parameter grids and tabular output used by the `cohrx` binary.

pub mod coherent;
pub mod compression;
pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod sweep;

pub use coherent::{CoherentEnsemble, TransferChannel};
pub use compression::{run_receiver, Alphabet, ReceiverRun};
pub use discrimination::{DiscriminationProblem, Povm};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
