//! Exact computations in twisted homogeneous coordinate rings of projective
//! space and in their point subalgebras.

pub mod euler;
pub mod orbitcert;
pub mod projgeo;
pub mod report;
pub mod scalars;
pub mod scenario;
pub mod subring;
pub mod twist;
pub mod witness;

pub use euler::{EulerError, EulerOp, LaurentWindow};
pub use orbitcert::{OrbitWindow, PositionCertificate, Verdict};
pub use projgeo::{GradedPoly, ProjAut, ProjError, ProjPoint, Subspace};
pub use report::{Check, DegreeRow, Method, Report};
pub use scalars::field::{Field, Fq};
pub use scenario::{RunReport, Scenario, ScenarioError, Task};
pub use scalars::{FieldSpec, Scalar, ScalarError, Specialization};
pub use subring::{IndexSet, SubringCtx, SubringError};
pub use twist::{TwistError, TwistRing};
pub use witness::{AffineOrbit, ExtScalar, WitnessError};
