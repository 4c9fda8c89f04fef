//! Planar shape algebra: polygon regions, membership, area, boolean
//! operations, erosion by a disk, and inscribed (x, y, yaw) cylinders.

mod boolean;
mod cylinder;
mod disks;
mod erode;
mod point;
mod region;

pub use boolean::BoolOp;
pub use cylinder::{wrap_two_pi, SE2Cylinder, YawSlicedRegion};
pub use disks::{disk_union_area, in_disk_union};
pub use erode::ArcResolution;
pub use point::{point_segment_dist, Point2, Rect};
pub use region::{clip_convex, ring_signed_area, PlanarRegion, Polygon};

use crate::scalar::Scalar;

/// Segments per full circle used when polygonizing disks.
pub const CIRCLE_SEGMENTS: usize = 64;

/// Default center grid spacing for the inscribed cylinder search, meters.
pub const DEFAULT_CYLINDER_GRID: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("erosion radius must be finite and non-negative")]
    InvalidRadius,
    #[error("invalid cylinder: radius must be >= 0 and yaw span in (0, 2π]")]
    InvalidCylinder,
    #[error("invalid yaw stack: {0}")]
    InvalidStack(String),
    #[error("no cylinder fits: every slice is empty")]
    NoCylinder,
}

/// `{x ∈ region | d(x, ∂region) ≥ r}`.
pub fn erode_region<T: Scalar>(region: &PlanarRegion<T>, r: T) -> Result<PlanarRegion<T>, GeomError> {
    region.erode(r)
}

pub fn intersect_regions<T: Scalar>(a: &PlanarRegion<T>, b: &PlanarRegion<T>) -> PlanarRegion<T> {
    a.intersection(b)
}

pub fn contains_point<T: Scalar>(region: &PlanarRegion<T>, p: Point2<T>) -> bool {
    region.contains(p)
}

pub fn region_area<T: Scalar>(region: &PlanarRegion<T>) -> T {
    region.area()
}

pub fn largest_inscribed_cylinder<T: Scalar>(stack: &YawSlicedRegion<T>) -> Result<SE2Cylinder<T>, GeomError> {
    stack.largest_inscribed_cylinder(T::lit(DEFAULT_CYLINDER_GRID))
}
