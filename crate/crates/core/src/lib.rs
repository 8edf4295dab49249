//! Numerical checks of line bundle integrality on triangulated surfaces.
//!
//! Given a surface mesh with a sampled section, connection and two-form,
//! the crate counts the zeros of the section, evaluates flux, boundary
//! winding, holonomy and boundary-curvature terms, and checks the closed,
//! bordered and corner forms of the integrality identity. From a two-chart
//! atlas it builds the transition function, or reports the fractional
//! defect that prevents one from existing.

pub mod bundle;
pub mod census;
pub mod cli;
pub mod error;
pub mod fields;
pub mod generators;
pub mod geom;
pub mod identity;
pub mod instance;
pub mod io;
pub mod mesh;
pub mod plot;
pub mod report;

pub use bundle::{
    propagate_transition, section_in_chart, verify_cocycle_relation, Chart, ChartAtlas, TransitionFunction,
    TransitionOutcome,
};
pub use census::{run_census, Vortex, VortexCensus};
pub use error::{Error, Result};
pub use fields::{gauge_transform, ConnectionField, SectionField, SectionPatch, TwoFormField};
pub use generators::{generate, GeneratorKind, GeneratorSpec};
pub use identity::{check_bordered, check_closed, check_corner_form, IdentityCheck, IntegralityReport, Verdict};
pub use instance::Instance;
pub use mesh::SurfaceMesh;
