use std::f64::consts::TAU;

use proptest::prelude::*;
use wrpg_core::geom2d::{disk_union_area, in_disk_union, PlanarRegion, Point2, Polygon, Rect};

fn star(radii: &[f64], phase: f64) -> PlanarRegion<f64> {
    let n = radii.len();
    let outer = radii
        .iter()
        .enumerate()
        .map(|(k, &r)| Point2::from_angle(phase + k as f64 * TAU / n as f64) * r)
        .collect();
    PlanarRegion::new(vec![Polygon { outer, holes: vec![] }]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn erosion_shrinks_monotonically(
        radii in prop::collection::vec(0.5f64..1.0, 5..12),
        phase in 0.0f64..TAU,
        r1 in 0.0f64..0.2,
        dr in 0.01f64..0.2,
    ) {
        let region = star(&radii, phase);
        let a = region.erode(r1).unwrap();
        let b = region.erode(r1 + dr).unwrap();
        prop_assert!(a.area() <= region.area() + 1e-9);
        prop_assert!(b.area() <= a.area() + 1e-9);
        for ring in b.rings() {
            for &p in ring {
                prop_assert!(a.contains(p));
                prop_assert!(region.boundary_distance(p) >= r1 + dr - 1e-6);
            }
        }
    }

    #[test]
    fn intersection_is_inside_both(
        ra in prop::collection::vec(0.4f64..1.0, 5..9),
        rb in prop::collection::vec(0.4f64..1.0, 5..9),
        shift in -0.8f64..0.8,
    ) {
        let a = star(&ra, 0.0);
        let b = star(&rb, 0.3);
        let b = PlanarRegion::from_polygons(b.polygons.iter().map(|p| p.map_points(|q| q + Point2::new(shift, 0.0))).collect());
        let i = a.intersection(&b);
        prop_assert!(i.area() <= a.area().min(b.area()) + 1e-9);
        let u = a.union(&b);
        prop_assert!((u.area() + i.area() - a.area() - b.area()).abs() < 1e-9);
    }

    #[test]
    fn disk_union_area_is_between_one_disk_and_the_sum(
        xs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
        r in 0.05f64..0.6,
    ) {
        let centers: Vec<Point2<f64>> = xs.iter().map(|&(x, y)| Point2::new(x, y)).collect();
        let a = disk_union_area(&centers, r, None);
        let one = std::f64::consts::PI * r * r;
        prop_assert!(a >= one * (1.0 - 1e-9));
        prop_assert!(a <= one * centers.len() as f64 * (1.0 + 1e-9));
        let clip = Rect::new(Point2::new(-0.5, -0.5), Point2::new(0.5, 0.5));
        prop_assert!(disk_union_area(&centers, r, Some(clip)) <= a.min(1.0) + 1e-9);
        prop_assert!(centers.iter().all(|&c| in_disk_union(&centers, r, c)));
    }
}
