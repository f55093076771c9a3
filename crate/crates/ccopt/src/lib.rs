//! Gradient-based optimization boosted by cost-augmented coordinate changes.
//!
//! The central trick: treat the current cost value as an extra coordinate of
//! the search point, then run the usual update rules in a transformed frame —
//! either hyperspherical coordinates of the augmented point or an SO(2)
//! rotation of one (parameter, cost) plane. Flat regions of the original
//! landscape are no longer flat in the transformed frame, so descent keeps
//! moving where plain gradient descent stalls.
//!
//! Modules:
//! - [`coords`]: the exact coordinate changes and their derivatives
//! - [`optim`]: update rules (GD / momentum / Adam), transform-wrapped steps,
//!   trigger policies, and the outer optimization loop
//! - [`qsim`]: a small dense statevector simulator supplying variational
//!   quantum-circuit cost functions with parameter-shift gradients
//! - [`tasks`]: benchmark problem definitions (classical diagnostics plus
//!   quantum circuit tasks) and data/Hamiltonian ingestion
//! - [`bench`]: multi-seed trial runner, statistics, persistence, and the
//!   machinery behind the `ccopt` CLI

pub mod bench;
pub mod coords;
pub mod optim;
pub mod qsim;
pub mod tasks;
