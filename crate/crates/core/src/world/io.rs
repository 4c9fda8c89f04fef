use serde::{Deserialize, Serialize};

use super::{Aabb, Environment, Query, Scenario, WorldError};
use crate::biped::BipedSpec;
use crate::explorespace::ExploreBounds;
use crate::geom2d::{Polygon, Rect, SE2Cylinder};
use crate::Region;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    name: String,
    ground: Rect<f64>,
    #[serde(default)]
    invalid_ground: Vec<Polygon<f64>>,
    #[serde(default)]
    obstacles: Vec<Aabb>,
    explore_bounds: ExploreBounds,
    query: Query,
    #[serde(default)]
    truth_cylinders: Vec<SE2Cylinder<f64>>,
    #[serde(default)]
    robot: BipedSpec,
}

/// Parse and validate a JSON scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario, WorldError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| WorldError::Parse(e.to_string()))?;
    let mut polygons = Vec::with_capacity(doc.invalid_ground.len());
    for (i, p) in doc.invalid_ground.into_iter().enumerate() {
        let poly = Polygon::new(p.outer, p.holes).map_err(|e| WorldError::invalid(format!("invalid_ground[{i}]"), e.to_string()))?;
        polygons.push(poly);
    }
    let scenario = Scenario {
        name: doc.name,
        env: Environment {
            ground: doc.ground,
            invalid_ground: Region::from_polygons(polygons),
            obstacles: doc.obstacles,
            explore_bounds: doc.explore_bounds,
        },
        robot: doc.robot,
        query: doc.query,
        truth_cylinders: doc.truth_cylinders,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Pretty-printed JSON document for `scenario`.
pub fn save_scenario(scenario: &Scenario) -> String {
    let doc = ScenarioDoc {
        name: scenario.name.clone(),
        ground: scenario.env.ground,
        invalid_ground: scenario.env.invalid_ground.polygons.clone(),
        obstacles: scenario.env.obstacles.clone(),
        explore_bounds: scenario.env.explore_bounds,
        query: scenario.query,
        truth_cylinders: scenario.truth_cylinders.clone(),
        robot: scenario.robot,
    };
    serde_json::to_string_pretty(&doc).expect("scenario documents always serialize")
}
