//! Boundary anchors: sampled points on obstacle edges, obstacle corners,
//! slits and the window frame, with their approach analysis. An anchor is
//! reachable in an orientation when some timelike staircase ends exactly on
//! it; the strong variant additionally demands a steep final segment that
//! prolongs straight back into the spacetime.

use crate::bitset::EventSet;
use crate::chronoset::EventChronology;
use crate::geom::{P2, UNITS_PER_CELL};
use crate::reach::Reach;
use crate::scene::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorClass {
    Timelike,
    Null,
    Spacelike,
    Corner,
    Cut,
    Slit,
}

impl AnchorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            AnchorClass::Timelike => "timelike",
            AnchorClass::Null => "null",
            AnchorClass::Spacelike => "spacelike",
            AnchorClass::Corner => "corner",
            AnchorClass::Cut => "cut",
            AnchorClass::Slit => "slit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orient {
    Future,
    Past,
}

#[derive(Clone, Debug)]
pub struct Anchor {
    /// Scaled lattice position.
    pub pos: P2,
    /// Direction into the spacetime; used to split the two sides of a slit.
    pub side: [i64; 2],
    pub class: AnchorClass,
    /// Interior point of a one-sided smooth edge.
    pub c1: bool,
    /// Owning obstacle index, None on the window frame.
    pub obstacle: Option<usize>,
}

/// Tangent-line classification of an obstacle edge in null coordinates.
pub fn classify_edge(du: i64, dv: i64) -> AnchorClass {
    if du == 0 || dv == 0 {
        AnchorClass::Null
    } else if (du > 0) == (dv > 0) {
        AnchorClass::Timelike
    } else {
        AnchorClass::Spacelike
    }
}

fn perp(d: [i64; 2]) -> [i64; 2] {
    [-d[1], d[0]]
}

/// Chebyshev length in cells, the sample count along an edge.
fn edge_samples(a: P2, b: P2) -> i64 {
    let du = (b[0] - a[0]).abs();
    let dv = (b[1] - a[1]).abs();
    (du.max(dv) + UNITS_PER_CELL / 2) / UNITS_PER_CELL
}

fn lerp(a: P2, b: P2, k: i64, m: i64) -> P2 {
    [
        a[0] + ((b[0] - a[0]) as i128 * k as i128 / m as i128) as i64,
        a[1] + ((b[1] - a[1]) as i128 * k as i128 / m as i128) as i64,
    ]
}

/// Anchors at every obstacle vertex, at cell-spaced samples along obstacle
/// edges and the window frame; slit samples are emitted once per side.
pub fn sample_anchors(grid: &Grid) -> Vec<Anchor> {
    let mut out = Vec::new();
    for (oi, obs) in grid.scene.obstacles.iter().enumerate() {
        if obs.slit {
            let (a, b) = (obs.scaled[0], obs.scaled[1]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let n = perp(d);
            let m = edge_samples(a, b).max(1);
            for k in 0..=m {
                let p = lerp(a, b, k, m);
                for side in [n, [-n[0], -n[1]]] {
                    out.push(Anchor {
                        pos: p,
                        side,
                        class: AnchorClass::Slit,
                        c1: false,
                        obstacle: Some(oi),
                    });
                }
            }
            continue;
        }
        let verts = &obs.scaled;
        let len = verts.len();
        // signed area fixes which perpendicular points away from the body
        let mut area2 = 0i128;
        for i in 0..len {
            let (a, b) = (verts[i], verts[(i + 1) % len]);
            area2 += a[0] as i128 * b[1] as i128 - b[0] as i128 * a[1] as i128;
        }
        let ccw = area2 > 0;
        let mut outward = Vec::with_capacity(len);
        for i in 0..len {
            let (a, b) = (verts[i], verts[(i + 1) % len]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let n = perp(d);
            outward.push(if ccw { [-n[0], -n[1]] } else { n });
        }
        for i in 0..len {
            let (a, b) = (verts[i], verts[(i + 1) % len]);
            let prev = outward[(i + len - 1) % len];
            out.push(Anchor {
                pos: a,
                side: [prev[0] + outward[i][0], prev[1] + outward[i][1]],
                class: AnchorClass::Corner,
                c1: false,
                obstacle: Some(oi),
            });
            let class = classify_edge(b[0] - a[0], b[1] - a[1]);
            let m = edge_samples(a, b);
            for k in 1..m {
                out.push(Anchor {
                    pos: lerp(a, b, k, m),
                    side: outward[i],
                    class,
                    c1: true,
                    obstacle: Some(oi),
                });
            }
        }
    }
    let cells = (grid.r - 1) as i64;
    let top = cells * UNITS_PER_CELL;
    let mut frame = |pos: P2, side: [i64; 2]| {
        out.push(Anchor { pos, side, class: AnchorClass::Cut, c1: false, obstacle: None });
    };
    if !grid.scene.periodic_u {
        for j in 1..cells {
            frame([0, j * UNITS_PER_CELL], [1, 0]);
            frame([top, j * UNITS_PER_CELL], [-1, 0]);
        }
    }
    for i in 0..=cells {
        if grid.scene.periodic_u && i == cells {
            continue;
        }
        let du = if grid.scene.periodic_u {
            0
        } else if i == 0 {
            1
        } else if i == cells {
            -1
        } else {
            0
        };
        frame([i * UNITS_PER_CELL, 0], [du, 1]);
        frame([i * UNITS_PER_CELL, top], [du, -1]);
    }
    out
}

/// Grid points whose final timelike segment lands exactly on the anchor.
pub fn direct_arrivals(grid: &Grid, anchor: &Anchor, orient: Orient) -> Vec<u32> {
    let k = grid.scene.step_window as i64;
    let u = UNITS_PER_CELL;
    let z = anchor.pos;
    let cols = grid.u_columns() as i64;
    let sign = match orient {
        Orient::Future => 1,
        Orient::Past => -1,
    };
    let mut out = Vec::new();
    // candidate lattice cells with both displacements in [1, K] cells
    let ceil_div = |a: i64| a.div_euclid(u) + i64::from(a.rem_euclid(u) != 0);
    let range = |zc: i64| -> (i64, i64) {
        match orient {
            // p strictly below z within K cells
            Orient::Future => (ceil_div(zc - k * u), (zc - 1).div_euclid(u)),
            Orient::Past => (ceil_div(zc + u), (zc + k * u).div_euclid(u)),
        }
    };
    let (ilo, ihi) = range(z[0]);
    let (jlo, jhi) = range(z[1]);
    for ci in ilo..=ihi {
        for cj in jlo..=jhi {
            if cj < 0 || cj >= grid.r as i64 {
                continue;
            }
            let mut gi = ci;
            if grid.scene.periodic_u {
                gi = gi.rem_euclid(cols);
            } else if gi < 0 || gi >= grid.r as i64 {
                continue;
            }
            let Some(p) = grid.id_at(gi as usize, cj as usize) else { continue };
            let pp = [ci * u, cj * u];
            let d = [(z[0] - pp[0]) * sign, (z[1] - pp[1]) * sign];
            debug_assert!(d[0] >= 1 && d[1] >= 1);
            if anchor.class == AnchorClass::Slit {
                // approach must come from the declared side of the slit
                let dot = (pp[0] - z[0]) * anchor.side[0] + (pp[1] - z[1]) * anchor.side[1];
                if dot <= 0 {
                    continue;
                }
            }
            if grid.segment_blocked_except(pp, z, z) {
                continue;
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Grid points whose final causal segment (null steps allowed) lands exactly
/// on the anchor.
pub fn causal_direct_arrivals(grid: &Grid, anchor: &Anchor, orient: Orient) -> Vec<u32> {
    let k = grid.scene.step_window as i64;
    let u = UNITS_PER_CELL;
    let z = anchor.pos;
    let cols = grid.u_columns() as i64;
    let mut out = Vec::new();
    let ceil_div = |a: i64| a.div_euclid(u) + i64::from(a.rem_euclid(u) != 0);
    let range = |zc: i64| -> (i64, i64) {
        match orient {
            Orient::Future => (ceil_div(zc - k * u), zc.div_euclid(u)),
            Orient::Past => (ceil_div(zc), (zc + k * u).div_euclid(u)),
        }
    };
    let sign = match orient {
        Orient::Future => 1,
        Orient::Past => -1,
    };
    let (ilo, ihi) = range(z[0]);
    let (jlo, jhi) = range(z[1]);
    for ci in ilo..=ihi {
        for cj in jlo..=jhi {
            if cj < 0 || cj >= grid.r as i64 {
                continue;
            }
            let mut gi = ci;
            if grid.scene.periodic_u {
                gi = gi.rem_euclid(cols);
            } else if gi < 0 || gi >= grid.r as i64 {
                continue;
            }
            let Some(p) = grid.id_at(gi as usize, cj as usize) else { continue };
            let pp = [ci * u, cj * u];
            let d = [(z[0] - pp[0]) * sign, (z[1] - pp[1]) * sign];
            if d[0] == 0 && d[1] == 0 {
                continue;
            }
            debug_assert!(d[0] >= 0 && d[1] >= 0);
            if anchor.class == AnchorClass::Slit {
                let dot = (pp[0] - z[0]) * anchor.side[0] + (pp[1] - z[1]) * anchor.side[1];
                if dot <= 0 {
                    continue;
                }
            }
            if grid.segment_blocked_except(pp, z, z) {
                continue;
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Everything that can start a causal staircase ending on the anchor.
pub fn causal_arrival_set(
    grid: &Grid,
    reach: &Reach,
    anchor: &Anchor,
    orient: Orient,
) -> EventSet {
    let direct = causal_direct_arrivals(grid, anchor, orient);
    let mut out = EventSet::new(grid.n());
    for &p in &direct {
        out.insert(p);
        let hull = match orient {
            Orient::Future => reach.causal_past_of(p),
            Orient::Past => reach.causal_future_of(p),
        };
        out.union_with(&hull);
    }
    out
}

/// Everything that can start a timelike staircase ending on the anchor:
/// the direct arrivals together with their strict chronological past
/// (future orientation) or future (past orientation).
pub fn arrival_set(grid: &Grid, reach: &Reach, anchor: &Anchor, orient: Orient) -> EventSet {
    let direct = direct_arrivals(grid, anchor, orient);
    let mut s = EventSet::new(grid.n());
    for &p in &direct {
        s.insert(p);
    }
    let hull = match orient {
        Orient::Future => reach.past_of_set(&s),
        Orient::Past => reach.future_of_set(&s),
    };
    let mut out = s;
    out.union_with(&hull);
    out
}

/// Some direct arrival whose final segment moves at least one full cell in
/// both directions, with slope ratio within the bound, and whose straight
/// prolongation through the anchor stays inside the spacetime.
pub fn strong_arrival(
    grid: &Grid,
    anchor: &Anchor,
    orient: Orient,
    slope_bound: f64,
) -> bool {
    let u = UNITS_PER_CELL;
    let z = anchor.pos;
    for &p in &direct_arrivals(grid, anchor, orient) {
        let pp = grid.scaled_of(p);
        let (du, dv) = ((z[0] - pp[0]).abs(), (z[1] - pp[1]).abs());
        if du < u || dv < u {
            continue;
        }
        // slope in window coordinates, so anisotropic windows measure the
        // same cones the scene geometry does
        let span_u = grid.scene.window_u[1] - grid.scene.window_u[0];
        let span_v = grid.scene.window_v[1] - grid.scene.window_v[0];
        let ratio = (du as f64 * span_u) / (dv as f64 * span_v);
        if !(1.0 / slope_bound..=slope_bound).contains(&ratio) {
            continue;
        }
        // prolong the segment by its own length backwards into the
        // spacetime: a steep approach that can be smoothly continued
        let w = [2 * pp[0] - z[0], 2 * pp[1] - z[1]];
        let cells = (grid.r - 1) as i64;
        let top = cells * u;
        if w[1] <= 0 || w[1] >= top {
            continue;
        }
        if !grid.scene.periodic_u && (w[0] <= 0 || w[0] >= top) {
            continue;
        }
        let mut wm = w;
        if grid.scene.periodic_u {
            wm[0] = wm[0].rem_euclid(top);
        }
        if grid.in_obstacle(wm) {
            continue;
        }
        if grid.segment_blocked(pp, w) {
            continue;
        }
        return true;
    }
    false
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnchorAccess {
    pub future_accessible: bool,
    pub past_accessible: bool,
    pub strong_future: bool,
    pub strong_past: bool,
}

pub fn analyze_anchor(
    grid: &Grid,
    anchor: &Anchor,
    slope_bound: f64,
) -> AnchorAccess {
    let fut = !direct_arrivals(grid, anchor, Orient::Future).is_empty();
    let past = !direct_arrivals(grid, anchor, Orient::Past).is_empty();
    AnchorAccess {
        future_accessible: fut,
        past_accessible: past,
        strong_future: fut && strong_arrival(grid, anchor, Orient::Future, slope_bound),
        strong_past: past && strong_arrival(grid, anchor, Orient::Past, slope_bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::{Reach, DEFAULT_MEM_BUDGET};
    use crate::scene::{build_grid, Scene};

    fn grid(json: &str) -> Grid {
        build_grid(Scene::from_json(json).unwrap()).unwrap()
    }

    #[test]
    fn edge_classification() {
        assert_eq!(classify_edge(3, 3), AnchorClass::Timelike);
        assert_eq!(classify_edge(3, -3), AnchorClass::Spacelike);
        assert_eq!(classify_edge(0, 5), AnchorClass::Null);
        assert_eq!(classify_edge(5, 0), AnchorClass::Null);
    }

    #[test]
    fn empty_window_has_only_cuts() {
        let g = grid(
            r#"{"name":"empty","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":false,"resolution":17,"step_window":3,
                "obstacles":[],"orientation":"uv-future"}"#,
        );
        let anchors = sample_anchors(&g);
        assert!(!anchors.is_empty());
        assert!(anchors.iter().all(|a| a.class == AnchorClass::Cut));
        // past corner of the window: nothing below it, everything above
        let bottom = anchors.iter().find(|a| a.pos == [0, 0]).unwrap();
        let acc = analyze_anchor(&g, bottom, 4.0);
        assert!(!acc.future_accessible);
        assert!(acc.past_accessible && acc.strong_past);
        // mid-left edge: a null cut, future side reaches it
        let units = UNITS_PER_CELL;
        let left = anchors.iter().find(|a| a.pos == [0, 8 * units]).unwrap();
        let acc = analyze_anchor(&g, left, 4.0);
        assert!(!acc.future_accessible);
        assert!(acc.past_accessible);
    }

    #[test]
    fn null_halfplane_edge_is_one_way() {
        // closed region u >= 1/2 removed: its edge u = 1/2 is a null
        // boundary line, reachable from the past side only
        let g = grid(
            r#"{"name":"nullhp","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":false,"resolution":17,"step_window":3,
                "obstacles":[{"kind":"polygon",
                  "vertices":[[0.5,0],[1,0],[1,1],[0.5,1]]}],
                "orientation":"uv-future"}"#,
        );
        let anchors = sample_anchors(&g);
        let mid = anchors
            .iter()
            .find(|a| a.c1 && a.pos[0] == 8 * UNITS_PER_CELL && a.pos[1] == 8 * UNITS_PER_CELL)
            .unwrap();
        assert_eq!(mid.class, AnchorClass::Null);
        let acc = analyze_anchor(&g, mid, 4.0);
        assert!(acc.future_accessible);
        assert!(!acc.past_accessible);
        let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        let fut = arrival_set(&g, &rc, mid, Orient::Future);
        assert!(!fut.is_empty());
        // arrival sets are past sets
        let below = rc.past_of_set(&fut);
        assert!(below.is_subset(&fut));
    }

    #[test]
    fn timelike_wall_is_strongly_accessible_both_ways() {
        // vertical wall x = 0 in (x,t): timelike boundary, strong on both
        // orientations from the x < 0 side
        let g = grid(
            r#"{"name":"wall","coords":"xt",
                "window":{"u":[-2,2],"v":[-2,2]},
                "periodic_u":false,"resolution":33,"step_window":3,
                "obstacles":[{"kind":"polygon",
                  "vertices":[[0,-1.6],[1.6,0],[0,1.6]]}],
                "orientation":"uv-future"}"#,
        );
        let anchors = sample_anchors(&g);
        // the x = 0 edge runs from (u,v) = (-1.6,1.6) to (1.6,-1.6)... the
        // timelike edge of this triangle is the one through the origin
        let mid = anchors
            .iter()
            .find(|a| {
                a.c1 && a.class == AnchorClass::Timelike
                    && a.pos == [g.scene.scale_u(0.0), g.scene.scale_v(0.0)]
            })
            .unwrap();
        let acc = analyze_anchor(&g, mid, 4.0);
        assert!(acc.strong_future && acc.strong_past);
    }

    #[test]
    fn slit_anchors_come_in_sides() {
        let g = grid(
            r#"{"name":"slit","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":false,"resolution":17,"step_window":3,
                "obstacles":[{"kind":"segment",
                  "endpoints":[[0.25,0.5],[0.75,0.5]]}],
                "orientation":"uv-future"}"#,
        );
        let anchors = sample_anchors(&g);
        let slits: Vec<&Anchor> =
            anchors.iter().filter(|a| a.class == AnchorClass::Slit).collect();
        assert!(!slits.is_empty());
        assert_eq!(slits.len() % 2, 0);
        let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        let mid_lo = slits
            .iter()
            .find(|a| a.pos == [8 * UNITS_PER_CELL, 8 * UNITS_PER_CELL] && a.side[1] < 0)
            .unwrap();
        let mid_hi = slits
            .iter()
            .find(|a| a.pos == [8 * UNITS_PER_CELL, 8 * UNITS_PER_CELL] && a.side[1] > 0)
            .unwrap();
        // the lower side is approached from below, the upper from above
        let lo_fut = arrival_set(&g, &rc, mid_lo, Orient::Future);
        let hi_fut = direct_arrivals(&g, mid_hi, Orient::Future);
        assert!(!lo_fut.is_empty());
        assert!(hi_fut.is_empty());
        let hi_past = arrival_set(&g, &rc, mid_hi, Orient::Past);
        assert!(!hi_past.is_empty());
    }
}
