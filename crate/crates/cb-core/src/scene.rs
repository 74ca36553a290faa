//! Scene descriptions and grid construction: a rectangular window in null
//! coordinates minus closed polygonal obstacles and zero-thickness slits,
//! discretized to a lattice with an in-spacetime mask. Obstacle geometry is
//! snapped once onto a fine integer lattice so every later test is exact.

use crate::geom::{point_in_polygon, P2, UNITS_PER_CELL};
use serde::Deserialize;

pub const MIN_RESOLUTION: usize = 17;
pub const MAX_RESOLUTION: usize = 1025;
pub const DEFAULT_RESOLUTION: usize = 129;
pub const DEFAULT_STEP_WINDOW: usize = 3;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub name: String,
    pub coords: String,
    pub window: WindowSpec,
    #[serde(default)]
    pub periodic_u: bool,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_step_window")]
    pub step_window: usize,
    #[serde(default)]
    pub obstacles: Vec<ObstacleSpec>,
    pub orientation: String,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

fn default_step_window() -> usize {
    DEFAULT_STEP_WINDOW
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

#[derive(Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ObstacleSpec {
    #[serde(rename = "polygon")]
    Polygon { vertices: Vec<[f64; 2]> },
    #[serde(rename = "segment")]
    Segment { endpoints: [[f64; 2]; 2] },
}

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("scene schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("coords must be \"null\" or \"xt\", got {0:?}")]
    Coords(String),
    #[error("orientation must be \"uv-future\", got {0:?}")]
    Orientation(String),
    #[error("resolution {0} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]")]
    Resolution(usize),
    #[error("step_window {0} below 2")]
    StepWindow(usize),
    #[error("window is degenerate")]
    DegenerateWindow,
    #[error("polygon needs at least 3 vertices, got {0}")]
    PolygonTooSmall(usize),
    #[error("obstacle vertex ({0}, {1}) outside the closed window")]
    VertexOutsideWindow(f64, f64),
    #[error("reachability needs {need} bytes, budget {budget}")]
    MemoryBudget { need: u64, budget: u64 },
}

/// Validated scene with obstacle geometry on the scaled lattice. Coordinates
/// are null (u, v); `(x, t)` input pairs are converted once at load via
/// u = t + x, v = t - x.
pub struct Scene {
    pub name: String,
    pub window_u: [f64; 2],
    pub window_v: [f64; 2],
    pub periodic_u: bool,
    pub resolution: usize,
    pub step_window: usize,
    pub obstacles: Vec<Obstacle>,
}

pub struct Obstacle {
    pub scaled: Vec<P2>,
    /// Zero-thickness segment: grid rows pass through it untouched, only
    /// segment crossings are blocked, and its anchors come in two sides.
    pub slit: bool,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene, SceneError> {
        let spec: SceneSpec = serde_json::from_str(text)?;
        Scene::from_spec(spec)
    }

    pub fn from_spec(spec: SceneSpec) -> Result<Scene, SceneError> {
        let xt = match spec.coords.as_str() {
            "null" => false,
            "xt" => true,
            other => return Err(SceneError::Coords(other.to_string())),
        };
        if spec.orientation != "uv-future" {
            return Err(SceneError::Orientation(spec.orientation));
        }
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&spec.resolution) {
            return Err(SceneError::Resolution(spec.resolution));
        }
        if spec.step_window < 2 {
            return Err(SceneError::StepWindow(spec.step_window));
        }
        let window_u = spec.window.u;
        let window_v = spec.window.v;
        if !(window_u[1] > window_u[0] && window_v[1] > window_v[0]) {
            return Err(SceneError::DegenerateWindow);
        }
        let mut scene = Scene {
            name: spec.name,
            window_u,
            window_v,
            periodic_u: spec.periodic_u,
            resolution: spec.resolution,
            step_window: spec.step_window,
            obstacles: Vec::new(),
        };
        for obs in spec.obstacles {
            let (raw, slit) = match obs {
                ObstacleSpec::Polygon { vertices } => {
                    if vertices.len() < 3 {
                        return Err(SceneError::PolygonTooSmall(vertices.len()));
                    }
                    (vertices, false)
                }
                ObstacleSpec::Segment { endpoints } => (endpoints.to_vec(), true),
            };
            let mut scaled = Vec::with_capacity(raw.len());
            for pair in raw {
                let (u, v) = if xt {
                    // pair is (x, t)
                    (pair[1] + pair[0], pair[1] - pair[0])
                } else {
                    (pair[0], pair[1])
                };
                const EPS: f64 = 1e-9;
                if u < window_u[0] - EPS
                    || u > window_u[1] + EPS
                    || v < window_v[0] - EPS
                    || v > window_v[1] + EPS
                {
                    return Err(SceneError::VertexOutsideWindow(u, v));
                }
                scaled.push([scene.scale_u(u), scene.scale_v(v)]);
            }
            scene.obstacles.push(Obstacle { scaled, slit });
        }
        Ok(scene)
    }

    /// Cells along each axis.
    pub fn cells(&self) -> i64 {
        (self.resolution - 1) as i64
    }

    pub fn scale_u(&self, u: f64) -> i64 {
        let span = self.window_u[1] - self.window_u[0];
        ((u - self.window_u[0]) / span * (self.cells() * UNITS_PER_CELL) as f64).round() as i64
    }

    pub fn scale_v(&self, v: f64) -> i64 {
        let span = self.window_v[1] - self.window_v[0];
        ((v - self.window_v[0]) / span * (self.cells() * UNITS_PER_CELL) as f64).round() as i64
    }

    pub fn unscale_u(&self, su: i64) -> f64 {
        let span = self.window_u[1] - self.window_u[0];
        self.window_u[0] + su as f64 / (self.cells() * UNITS_PER_CELL) as f64 * span
    }

    pub fn unscale_v(&self, sv: i64) -> f64 {
        let span = self.window_v[1] - self.window_v[0];
        self.window_v[0] + sv as f64 / (self.cells() * UNITS_PER_CELL) as f64 * span
    }

    /// Scaled span of the periodic u-axis, 0 when aperiodic.
    pub fn period(&self) -> i64 {
        if self.periodic_u {
            self.cells() * UNITS_PER_CELL
        } else {
            0
        }
    }
}

pub const NO_POINT: u32 = u32::MAX;

/// Lattice over the window with an in-spacetime mask. Grid index of cell
/// (i, j) is i * R + j; masked-in points additionally carry a dense id in
/// row-major (i, j) order.
pub struct Grid {
    pub scene: Scene,
    pub r: usize,
    /// Grid index -> dense point id, NO_POINT outside the spacetime.
    pub point_id: Vec<u32>,
    /// Dense point id -> (i, j).
    pub points: Vec<(u32, u32)>,
}

impl Grid {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn in_m(&self, i: usize, j: usize) -> bool {
        self.point_id[i * self.r + j] != NO_POINT
    }

    pub fn id_at(&self, i: usize, j: usize) -> Option<u32> {
        match self.point_id[i * self.r + j] {
            NO_POINT => None,
            id => Some(id),
        }
    }

    /// Scaled coordinates of a grid cell.
    pub fn scaled(&self, i: u32, j: u32) -> P2 {
        [i as i64 * UNITS_PER_CELL, j as i64 * UNITS_PER_CELL]
    }

    pub fn scaled_of(&self, id: u32) -> P2 {
        let (i, j) = self.points[id as usize];
        self.scaled(i, j)
    }

    /// Real (u, v) coordinates of a point id.
    pub fn coords_of(&self, id: u32) -> (f64, f64) {
        let p = self.scaled_of(id);
        (self.scene.unscale_u(p[0]), self.scene.unscale_v(p[1]))
    }

    /// Distinct u-columns: the seam column aliases column 0 on periodic
    /// scenes and carries no points of its own.
    pub fn u_columns(&self) -> usize {
        if self.scene.periodic_u {
            self.r - 1
        } else {
            self.r
        }
    }

    /// Point with given scaled coordinates lies inside some closed obstacle
    /// region (slit segments count as their own boundary).
    pub fn in_obstacle(&self, p: P2) -> bool {
        self.scene.obstacles.iter().any(|o| point_in_polygon(p, &o.scaled))
    }

    /// Straight segment meets some obstacle, with periodic images when the
    /// scene wraps in u.
    pub fn segment_blocked(&self, a: P2, b: P2) -> bool {
        for off in self.u_offsets() {
            let a2 = [a[0] + off, a[1]];
            let b2 = [b[0] + off, b[1]];
            for o in &self.scene.obstacles {
                if crate::geom::segment_hits_polygon(a2, b2, &o.scaled) {
                    return true;
                }
            }
        }
        false
    }

    /// Like [`segment_blocked`], tolerating a single grazing contact at
    /// `except` (tested in the unshifted frame together with its images).
    pub fn segment_blocked_except(&self, a: P2, b: P2, except: P2) -> bool {
        for off in self.u_offsets() {
            let a2 = [a[0] + off, a[1]];
            let b2 = [b[0] + off, b[1]];
            let e2 = [except[0] + off, except[1]];
            for o in &self.scene.obstacles {
                if crate::geom::segment_hits_polygon_except(a2, b2, &o.scaled, e2) {
                    return true;
                }
            }
        }
        false
    }

    fn u_offsets(&self) -> Vec<i64> {
        let period = self.scene.period();
        if period == 0 {
            vec![0]
        } else {
            vec![0, -period, period]
        }
    }
}

/// Compute the in-spacetime mask: strictly inside the window (all u-columns
/// on periodic scenes) and outside every closed obstacle.
pub fn build_grid(scene: Scene) -> Result<Grid, SceneError> {
    let r = scene.resolution;
    let mut point_id = vec![NO_POINT; r * r];
    let mut points = Vec::new();
    let (i_lo, i_hi) = if scene.periodic_u { (0, r - 1) } else { (1, r - 1) };
    for i in i_lo..i_hi {
        for j in 1..r - 1 {
            let p = [
                i as i64 * UNITS_PER_CELL,
                j as i64 * UNITS_PER_CELL,
            ];
            if scene.obstacles.iter().any(|o| point_in_polygon(p, &o.scaled)) {
                continue;
            }
            point_id[i * r + j] = points.len() as u32;
            points.push((i as u32, j as u32));
        }
    }
    Ok(Grid { scene, r, point_id, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn empty_scene(r: usize) -> Scene {
        Scene::from_json(&format!(
            r#"{{"name":"empty","coords":"null",
                 "window":{{"u":[0,1],"v":[0,1]}},
                 "periodic_u":false,"resolution":{r},"step_window":3,
                 "obstacles":[],"orientation":"uv-future"}}"#
        ))
        .unwrap()
    }

    #[test]
    fn empty_window_mask() {
        let g = build_grid(empty_scene(17)).unwrap();
        assert_eq!(g.n(), 15 * 15);
        assert!(!g.in_m(0, 5));
        assert!(!g.in_m(5, 16));
        assert!(g.in_m(1, 1));
    }

    #[test]
    fn quadrant_obstacle_masks_points() {
        // closed region u >= 1/2, v <= 1/2 removed from the unit window
        let s = Scene::from_json(
            r#"{"name":"corner","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":false,"resolution":17,"step_window":3,
                "obstacles":[{"kind":"polygon",
                  "vertices":[[0.5,0],[1,0],[1,0.5],[0.5,0.5]]}],
                "orientation":"uv-future"}"#,
        )
        .unwrap();
        let g = build_grid(s).unwrap();
        assert!(!g.in_m(8, 8));
        assert!(!g.in_m(12, 4));
        assert!(g.in_m(4, 8));
        assert!(g.in_m(8, 9));
    }

    #[test]
    fn slit_leaves_rows_untouched() {
        // slit along v = 1/2, u <= 1/2: the grid points on the slit itself
        // are its boundary and masked out, all others stay
        let s = Scene::from_json(
            r#"{"name":"slit","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":false,"resolution":17,"step_window":3,
                "obstacles":[{"kind":"segment",
                  "endpoints":[[0,0.5],[0.5,0.5]]}],
                "orientation":"uv-future"}"#,
        )
        .unwrap();
        let g = build_grid(s).unwrap();
        assert!(!g.in_m(4, 8));
        assert!(g.in_m(4, 7));
        assert!(g.in_m(4, 9));
        assert!(g.in_m(12, 8));
        // crossing the slit is blocked, running past its tip is not
        let a = g.scaled(4, 7);
        let b = g.scaled(4, 9);
        assert!(g.segment_blocked(a, b));
        let a = g.scaled(12, 7);
        let b = g.scaled(12, 9);
        assert!(!g.segment_blocked(a, b));
    }

    #[test]
    fn xt_coordinates_convert() {
        let s = Scene::from_json(
            r#"{"name":"xt","coords":"xt",
                "window":{"u":[-2,2],"v":[-2,2]},
                "periodic_u":false,"resolution":17,"step_window":3,
                "obstacles":[{"kind":"segment","endpoints":[[-1,0],[0,0]]}],
                "orientation":"uv-future"}"#,
        )
        .unwrap();
        // (x,t) = (-1,0) -> (u,v) = (-1,1); (0,0) -> (0,0)
        let o = &s.obstacles[0];
        assert_eq!(o.scaled[0], [s.scale_u(-1.0), s.scale_v(1.0)]);
        assert_eq!(o.scaled[1], [s.scale_u(0.0), s.scale_v(0.0)]);
    }

    #[test]
    fn schema_rejects_unknown_fields() {
        let err = Scene::from_json(
            r#"{"name":"x","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "orientation":"uv-future","extra":1}"#,
        );
        assert!(matches!(err, Err(SceneError::Schema(_))));
        let err = Scene::from_json(
            r#"{"name":"x","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "resolution":5,"orientation":"uv-future"}"#,
        );
        assert!(matches!(err, Err(SceneError::Resolution(5))));
    }

    #[test]
    fn periodic_mask_spans_all_columns() {
        let s = Scene::from_json(
            r#"{"name":"cyl","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":true,"resolution":17,"step_window":3,
                "obstacles":[],"orientation":"uv-future"}"#,
        )
        .unwrap();
        let g = build_grid(s).unwrap();
        assert_eq!(g.n(), 16 * 15);
        assert!(g.in_m(0, 5));
        assert!(!g.in_m(16, 5));
    }
}
