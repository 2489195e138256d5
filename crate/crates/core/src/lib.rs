//! Cheeger constants and Cheeger sets of convex polygons, polygon distances
//! under rigid motions, and numerical experiments on the stability of the
//! regular polygon as the minimizer of the scale-invariant Cheeger constant
//! among `N`-gons.
//!
//! ```
//! use cheeger_core::{cheeger_constant, regular_ngon, Method};
//!
//! let hex = regular_ngon(6).unwrap();
//! let report = cheeger_constant(&hex, Method::Auto).unwrap();
//! assert!(report.cheeger_regular);
//! assert!(report.cross_error.unwrap() < 1e-9);
//! ```

pub mod alignment;
pub mod cheeger;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod metrics;
pub mod offset;
mod refine;
pub mod roots;

pub use alignment::{align, align_with, aligned_deficit_record, AlignOptions, Alignment};
pub use cheeger::{
    cheeger_constant, cheeger_deficit, cheeger_formula, cheeger_radius, cheeger_set,
    cheeger_upper_bound, h_ball, is_cheeger_regular, regular_cheeger_constant, CheegerReport,
    Method, MethodUsed,
};
pub use error::{Error, Result};
pub use geometry::{make_polygon, regular_ngon, regular_perimeter, Point, Polygon, RigidMotion};
pub use metrics::{
    boundary_touch_normalize, hausdorff_boundary, symmetric_difference_area, CertifiedDistance,
    Metric,
};
pub use offset::{
    arc_polygon_measures, contains_arc_polygon, inner_area, inner_parallel, inradius,
    minkowski_disk, ArcPolygon, Element,
};
