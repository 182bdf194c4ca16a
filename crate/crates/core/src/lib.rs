//! Numerical toolkit for entire positive radial solutions of the coupled system
//!
//! ```text
//! Δu = p(|x|) g(v),   Δv = q(|x|) f(u),   x ∈ Rⁿ, n ≥ 3
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! core: hypothesis checks on the nonlinearities and weights, Keller–Osserman
//! type integrals and transforms, the radial solver built on the integral
//! formulation, the barrier comparison machinery, and the explorer for the
//! set of admissible central values. File formats and the command line live
//! in the `koradial` crate.
#![no_std]

extern crate alloc;

pub mod barrier;
pub mod interp;
pub mod math;
pub mod nonlinearity;
pub mod quad;
pub mod radial_solver;
pub mod sset_explorer;
pub mod transform;
pub mod weights;

pub use barrier::{BarrierDef, ForcingConstants};
pub use nonlinearity::NonlinearitySpec;
pub use quad::{Extended, QuadratureConfig};
pub use radial_solver::{Classification, ProblemDef, RadialSolution, SolverConfig, Verdict};
pub use sset_explorer::{BoundaryPoint, Ray, Rectangle, SweepResult};
pub use transform::{TransformKind, TransformTable};
pub use weights::WeightSpec;
