//! Exact Weil–Petersson volumes of moduli spaces of bordered hyperbolic
//! surfaces, computed by topological recursion over Q[π²].
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: rationals, the ring Q[π²], Bernoulli numbers and `ζ(2i)`.
//! * [`poly`]: sparse even polynomials in the boundary lengths.
//! * [`kernels`]: the kernel `H` and exact closed forms of its moments.
//! * [`recursion`]: the volume recursion and its memo table.
//! * [`intersection`]: ψ/κ₁ intersection numbers read off the volumes, and
//!   the string, dilaton, DVV and Do relations.
//! * [`oracle`]: floating-point quadrature and finite differences that
//!   check the kernel closed forms independently.
//! * [`cache`]: the JSON table file.
//! * [`cli`]: the commands behind the `wpvol` binary.

pub mod arith;
pub mod cache;
pub mod cli;
mod error;
pub mod intersection;
pub mod kernels;
pub mod oracle;
pub mod poly;
pub mod recursion;

pub use arith::{PiPoly, Rat};
pub use error::{Error, Result};
pub use kernels::KernelPoly;
pub use poly::{LPoly, MultiIndex};
pub use recursion::{Signature, VolumeTable};
