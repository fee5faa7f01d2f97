//! Vertical-plane sections of surfaces and the plane sweep.

mod classify;
mod contour;
mod convexity;
mod plane;
mod simple_end;
mod tilt;

pub use classify::{sweep_classify, Classification, SecondarySweep, SliceSummary, SweepReport, SweepSettings};
pub use convexity::{convexity_check, ConvexityReport};
pub use plane::{intersect, IntersectionCurve, PlaneFoliation, VerticalPlane};
pub use simple_end::{simple_end_test, EndProbe, SimpleEndReport};
pub use tilt::{tilt_classify, Tilt};
