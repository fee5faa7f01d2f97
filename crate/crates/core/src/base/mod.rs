//! Strict Hadamard surfaces given by conformal charts.

pub mod curve;
pub mod fermi;
pub mod foliation;
pub mod geodesic;
pub mod ideal;
pub mod model;
pub mod triangle;

pub use curve::{geodesic_curvature, BaseCurve, CurvatureProfile, CurveJet, GeodesicCircle, PrescribedCurve};
pub use fermi::CompleteGeodesic;
pub use foliation::{
    foliation_from_infinity, foliation_orthogonal, foot_of_perpendicular, leaf_separation, Foot, LeafSeparation,
};
pub use geodesic::{angle_at, connect, distance, geodesic_trace, shoot, GeodesicPath, PathSample, Shot};
pub use ideal::{ideal_geodesic, ideal_point, side_of, IdealPoint, OrientedGeodesic, Side};
pub use model::{wrap_2pi, wrap_pi, ChartDomain, HadamardModel, ModelKind, Point2, Tangent2};
pub use triangle::{triangle_checks, TriangleReport};
