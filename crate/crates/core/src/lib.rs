//! Static models of pneumatic artificial muscles and of the antagonist
//! two-muscle joint built from them.
//!
//! Everything inside the library is SI (Pa, m, rad, N, N·m/rad); bar, cm and
//! degrees appear only at the CSV, config and CLI boundaries.
//!
//! ```
//! use pam_statics::{MuscleGeometry, StaticMuscle, units::{bar, cm, deg}};
//!
//! let muscle = MuscleGeometry::new(cm(1.0), cm(40.0), deg(23.5)).unwrap();
//! let f0 = muscle.force(0.0, bar(5.0)).unwrap();
//! assert!((f0 - 1504.6).abs() < 0.1);
//! ```

pub mod actuator;
pub mod cli;
pub mod config;
pub mod cubic;
pub mod dataset;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod muscle;
pub mod units;

pub use actuator::{
    Activation, Actuator, ActuatorConfig, Feasibility, InverseSolution, PressurePair,
    TorqueStiffness,
};
pub use config::{ModelConfig, ModelKind};
pub use cubic::{solve_cubic, CubicCoefficients, CubicRoots, RootBranch};
pub use error::{Error, Result};
pub use geometry::{derive_braid_constants, BraidConstants, MuscleGeometry};
pub use muscle::{MuscleModel, StaticMuscle};
