//! Footstep planning for a planar biped over flat ground with 3D obstacles,
//! using a worst-case randomized possibility graph, together with the
//! closed-form failure bounds of the method and a seeded experiment harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biped;
pub mod bounds;
pub mod explorespace;
pub mod geom2d;
pub mod lab;
pub mod rpg;
pub mod scalar;
pub mod world;

pub use scalar::Scalar;

/// Double-precision planar point.
pub type Point = geom2d::Point2<f64>;
/// Double-precision planar region.
pub type Region = geom2d::PlanarRegion<f64>;
/// Double-precision polygon with holes.
pub type Polygon = geom2d::Polygon<f64>;
/// Double-precision (x, y, yaw) cylinder.
pub type Cylinder = geom2d::SE2Cylinder<f64>;
/// Single-precision planar region.
pub type RegionF32 = geom2d::PlanarRegion<f32>;
/// Single-precision planar point.
pub type PointF32 = geom2d::Point2<f32>;
