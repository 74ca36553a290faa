//! Grid reachability: one-step timelike and causal edges within the step
//! window, their transitive closures stored densely when the memory budget
//! allows, and a per-query search fallback otherwise. Also the grid's
//! tolerant set space.

use crate::bitset::EventSet;
use crate::chronoset::EventChronology;
use crate::scene::{Grid, SceneError};
use crate::tolerance::SetSpace;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const DEFAULT_MEM_BUDGET: u64 = 512 << 20;

/// Precomputed closures, or per-query search over the edge lists when they
/// would not fit the budget.
enum Store {
    Dense {
        chron_fut: Vec<EventSet>,
        chron_past: Vec<EventSet>,
        causal_fut: Vec<EventSet>,
        causal_past: Vec<EventSet>,
    },
    Lazy,
}

pub struct Reach {
    n: usize,
    timelike_out: Vec<Vec<u32>>,
    timelike_in: Vec<Vec<u32>>,
    causal_out: Vec<Vec<u32>>,
    causal_in: Vec<Vec<u32>>,
    store: Store,
}

impl Reach {
    /// Build edges and closures for the grid. Falls back to lazy queries when
    /// the four closure matrices would exceed `budget` bytes; fails only if
    /// the edge lists alone would.
    pub fn build(grid: &Grid, budget: u64) -> Result<Reach, SceneError> {
        let n = grid.n();
        let k = grid.scene.step_window as i64;
        let r = grid.r as i64;
        let cols = grid.u_columns() as i64;
        let mut timelike_out = vec![Vec::new(); n];
        let mut timelike_in = vec![Vec::new(); n];
        let mut causal_out = vec![Vec::new(); n];
        let mut causal_in = vec![Vec::new(); n];
        let has_obstacles = !grid.scene.obstacles.is_empty();
        let edge_bytes = (n as u64) * 4 * (2 * (k as u64 + 1) * (k as u64 + 1)) * 4;
        if edge_bytes > budget {
            return Err(SceneError::MemoryBudget { need: edge_bytes, budget });
        }
        for p in 0..n as u32 {
            let (i, j) = grid.points[p as usize];
            let a = grid.scaled(i, j);
            for di in 0..=k {
                for dj in 0..=k {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let j2 = j as i64 + dj;
                    if j2 >= r {
                        continue;
                    }
                    let mut i2 = i as i64 + di;
                    if grid.scene.periodic_u {
                        i2 %= cols;
                    } else if i2 >= r {
                        continue;
                    }
                    let Some(q) = grid.id_at(i2 as usize, j2 as usize) else { continue };
                    if has_obstacles {
                        // unwrapped target coordinates keep the segment
                        // geometrically straight across the seam
                        let b = [
                            a[0] + di * crate::geom::UNITS_PER_CELL,
                            a[1] + dj * crate::geom::UNITS_PER_CELL,
                        ];
                        if grid.segment_blocked(a, b) {
                            continue;
                        }
                    }
                    causal_out[p as usize].push(q);
                    causal_in[q as usize].push(p);
                    if di >= 1 && dj >= 1 {
                        timelike_out[p as usize].push(q);
                        timelike_in[q as usize].push(p);
                    }
                }
            }
        }
        let level: Vec<u32> = grid.points.iter().map(|&(_, j)| j).collect();
        let words = n.div_ceil(64) as u64;
        let dense_bytes = 4 * (n as u64) * words * 8 + edge_bytes;
        let store = if dense_bytes <= budget {
            let chron_fut = close(n, &level, &timelike_out, false, false);
            let chron_past = close(n, &level, &timelike_in, true, false);
            let causal_fut = close(n, &level, &causal_out, false, true);
            let causal_past = close(n, &level, &causal_in, true, true);
            Store::Dense { chron_fut, chron_past, causal_fut, causal_past }
        } else {
            Store::Lazy
        };
        Ok(Reach {
            n,
            timelike_out,
            timelike_in,
            causal_out,
            causal_in,
            store,
        })
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense { .. })
    }

    pub fn timelike_out_edges(&self, p: u32) -> &[u32] {
        &self.timelike_out[p as usize]
    }

    pub fn timelike_in_edges(&self, p: u32) -> &[u32] {
        &self.timelike_in[p as usize]
    }

    fn bfs(&self, start: u32, edges: &[Vec<u32>], include_start: bool) -> EventSet {
        let mut out = EventSet::new(self.n);
        if include_start {
            out.insert(start);
        }
        let mut queue = vec![start];
        while let Some(p) = queue.pop() {
            for &q in &edges[p as usize] {
                if !out.contains(q) {
                    out.insert(q);
                    queue.push(q);
                }
            }
        }
        out
    }

    fn bfs_multi(&self, starts: &EventSet, edges: &[Vec<u32>]) -> EventSet {
        let mut out = EventSet::new(self.n);
        let mut queue: Vec<u32> = starts.iter().collect();
        while let Some(p) = queue.pop() {
            for &q in &edges[p as usize] {
                if !out.contains(q) {
                    out.insert(q);
                    queue.push(q);
                }
            }
        }
        out
    }

    /// Reflexive-transitive causal future {q : p <= q}.
    pub fn causal_future_of(&self, p: u32) -> EventSet {
        match &self.store {
            Store::Dense { causal_fut, .. } => causal_fut[p as usize].clone(),
            Store::Lazy => self.bfs(p, &self.causal_out, true),
        }
    }

    pub fn causal_past_of(&self, p: u32) -> EventSet {
        match &self.store {
            Store::Dense { causal_past, .. } => causal_past[p as usize].clone(),
            Store::Lazy => self.bfs(p, &self.causal_in, true),
        }
    }

    pub fn causal_relates(&self, p: u32, q: u32) -> bool {
        match &self.store {
            Store::Dense { causal_fut, .. } => causal_fut[p as usize].contains(q),
            Store::Lazy => self.bfs(p, &self.causal_out, true).contains(q),
        }
    }

    pub fn relates(&self, p: u32, q: u32) -> bool {
        match &self.store {
            Store::Dense { chron_fut, .. } => chron_fut[p as usize].contains(q),
            Store::Lazy => self.future_of(p).contains(q),
        }
    }

    /// Members of `s` with no strict future inside `s`. In lazy mode this
    /// inspects one-step edges only, which is exact for past sets.
    fn maximal_in(&self, s: &EventSet) -> Vec<u32> {
        match &self.store {
            Store::Dense { chron_fut, .. } => s
                .iter()
                .filter(|&p| !chron_fut[p as usize].intersects(s))
                .collect(),
            Store::Lazy => s
                .iter()
                .filter(|&p| {
                    self.timelike_out[p as usize].iter().all(|q| !s.contains(*q))
                })
                .collect(),
        }
    }

    fn minimal_in(&self, s: &EventSet) -> Vec<u32> {
        match &self.store {
            Store::Dense { chron_past, .. } => s
                .iter()
                .filter(|&p| !chron_past[p as usize].intersects(s))
                .collect(),
            Store::Lazy => s
                .iter()
                .filter(|&p| {
                    self.timelike_in[p as usize].iter().all(|q| !s.contains(*q))
                })
                .collect(),
        }
    }
}

impl EventChronology for Reach {
    fn n(&self) -> usize {
        self.n
    }

    fn past_of(&self, x: u32) -> EventSet {
        match &self.store {
            Store::Dense { chron_past, .. } => chron_past[x as usize].clone(),
            Store::Lazy => self.bfs(x, &self.timelike_in, false),
        }
    }

    fn future_of(&self, x: u32) -> EventSet {
        match &self.store {
            Store::Dense { chron_fut, .. } => chron_fut[x as usize].clone(),
            Store::Lazy => self.bfs(x, &self.timelike_out, false),
        }
    }

    fn upper_bounds(&self, s: &EventSet) -> EventSet {
        if s.is_empty() {
            return EventSet::full(self.n);
        }
        let mut out: Option<EventSet> = None;
        for m in self.maximal_in(s) {
            let f = self.future_of(m);
            match &mut out {
                None => out = Some(f),
                Some(acc) => acc.intersect_with(&f),
            }
        }
        out.unwrap_or_else(|| EventSet::new(self.n))
    }

    fn lower_bounds(&self, s: &EventSet) -> EventSet {
        if s.is_empty() {
            return EventSet::full(self.n);
        }
        let mut out: Option<EventSet> = None;
        for m in self.minimal_in(s) {
            let p = self.past_of(m);
            match &mut out {
                None => out = Some(p),
                Some(acc) => acc.intersect_with(&p),
            }
        }
        out.unwrap_or_else(|| EventSet::new(self.n))
    }

    fn upper_bounds_incl(&self, s: &EventSet) -> EventSet {
        let mut out = self.upper_bounds(s);
        // a member of s qualifies only when everything else in s sits
        // strictly below it
        for m in self.maximal_in(s) {
            let mut rest = s.clone();
            rest.remove(m);
            if rest.is_subset(&self.past_of(m)) {
                out.insert(m);
            }
        }
        out
    }

    fn lower_bounds_incl(&self, s: &EventSet) -> EventSet {
        let mut out = self.lower_bounds(s);
        for m in self.minimal_in(s) {
            let mut rest = s.clone();
            rest.remove(m);
            if rest.is_subset(&self.future_of(m)) {
                out.insert(m);
            }
        }
        out
    }

    fn future_of_set(&self, s: &EventSet) -> EventSet {
        match &self.store {
            Store::Dense { chron_fut, .. } => {
                let mut out = EventSet::new(self.n);
                for p in s.iter() {
                    out.union_with(&chron_fut[p as usize]);
                }
                out
            }
            Store::Lazy => self.bfs_multi(s, &self.timelike_out),
        }
    }

    fn past_of_set(&self, s: &EventSet) -> EventSet {
        match &self.store {
            Store::Dense { chron_past, .. } => {
                let mut out = EventSet::new(self.n);
                for p in s.iter() {
                    out.union_with(&chron_past[p as usize]);
                }
                out
            }
            Store::Lazy => self.bfs_multi(s, &self.timelike_in),
        }
    }
}

/// Transitive closure by sweeping v-levels in dependency order. Every edge
/// raises (or, reversed, lowers) the v-level except causal edges inside one
/// level, which are resolved by iterating that level to a fixpoint; periodic
/// scenes can genuinely cycle there (closed causal loops around the seam).
fn close(
    n: usize,
    level: &[u32],
    edges: &[Vec<u32>],
    reversed: bool,
    reflexive: bool,
) -> Vec<EventSet> {
    let max_level = level.iter().copied().max().unwrap_or(0);
    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); max_level as usize + 1];
    for (p, &l) in level.iter().enumerate() {
        by_level[l as usize].push(p as u32);
    }
    if !reversed {
        by_level.reverse();
    }
    let mut rows: Vec<EventSet> = vec![EventSet::new(n); n];
    for ids in &by_level {
        // cross-level contributions first: targets live on settled levels
        let fresh = compute_rows(ids, &rows, edges, level, n, reflexive);
        for (p, row) in fresh {
            rows[p as usize] = row;
        }
        // same-level causal hops, iterated to a fixpoint
        loop {
            let mut changed = false;
            for &p in ids {
                let mut add = EventSet::new(n);
                for &q in &edges[p as usize] {
                    if level[q as usize] == level[p as usize] {
                        add.insert(q);
                        add.union_with(&rows[q as usize]);
                    }
                }
                let before = rows[p as usize].count();
                rows[p as usize].union_with(&add);
                if rows[p as usize].count() != before {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    rows
}

fn compute_rows(
    ids: &[u32],
    rows: &[EventSet],
    edges: &[Vec<u32>],
    level: &[u32],
    n: usize,
    reflexive: bool,
) -> Vec<(u32, EventSet)> {
    let one = |&p: &u32| {
        let mut row = EventSet::new(n);
        if reflexive {
            row.insert(p);
        }
        for &q in &edges[p as usize] {
            if level[q as usize] != level[p as usize] {
                row.insert(q);
                row.union_with(&rows[q as usize]);
            }
        }
        (p, row)
    };
    #[cfg(feature = "parallel")]
    {
        ids.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ids.iter().map(one).collect()
    }
}

/// Tolerant comparison on the grid: dilation by a Euclidean index-space
/// radius (3 spacings by default), areas in cell counts, strictness margin
/// as a fraction of the window.
pub struct GridSpace {
    n: usize,
    window_cells: f64,
    theta: f64,
    radius: f64,
    neighbors: Vec<Vec<u32>>,
}

impl GridSpace {
    pub fn new(grid: &Grid, delta_mult: f64, theta: f64) -> GridSpace {
        let radius = 3.0 * delta_mult;
        let rad_i = radius.floor() as i64;
        let r2 = radius * radius + 1e-9;
        let mut offsets = Vec::new();
        for di in -rad_i..=rad_i {
            for dj in -rad_i..=rad_i {
                if (di * di + dj * dj) as f64 <= r2 {
                    offsets.push((di, dj));
                }
            }
        }
        let cols = grid.u_columns() as i64;
        let n = grid.n();
        let mut neighbors = vec![Vec::new(); n];
        for p in 0..n as u32 {
            let (i, j) = grid.points[p as usize];
            for &(di, dj) in &offsets {
                let j2 = j as i64 + dj;
                if j2 < 0 || j2 >= grid.r as i64 {
                    continue;
                }
                let mut i2 = i as i64 + di;
                if grid.scene.periodic_u {
                    i2 = i2.rem_euclid(cols);
                } else if i2 < 0 || i2 >= grid.r as i64 {
                    continue;
                }
                if let Some(q) = grid.id_at(i2 as usize, j2 as usize) {
                    neighbors[p as usize].push(q);
                }
            }
        }
        let cells = (grid.r - 1) as f64;
        GridSpace { n, window_cells: cells * cells, theta, radius, neighbors }
    }

    /// Dilation radius in cells.
    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl SetSpace for GridSpace {
    fn dilate(&self, s: &EventSet) -> EventSet {
        let mut out = EventSet::new(self.n);
        for p in s.iter() {
            for &q in &self.neighbors[p as usize] {
                out.insert(q);
            }
        }
        out
    }

    fn area(&self, s: &EventSet) -> f64 {
        s.count() as f64
    }

    fn window_area(&self) -> f64 {
        self.window_cells
    }

    fn theta(&self) -> f64 {
        self.theta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{build_grid, Scene};

    fn scene(json: &str) -> Grid {
        build_grid(Scene::from_json(json).unwrap()).unwrap()
    }

    fn empty(r: usize) -> Grid {
        scene(&format!(
            r#"{{"name":"empty","coords":"null",
                 "window":{{"u":[0,1],"v":[0,1]}},
                 "periodic_u":false,"resolution":{r},"step_window":3,
                 "obstacles":[],"orientation":"uv-future"}}"#
        ))
    }

    #[test]
    fn minkowski_chronology() {
        let g = empty(17);
        let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        assert!(rc.is_dense());
        let p = g.id_at(3, 3).unwrap();
        let q = g.id_at(7, 9).unwrap();
        assert!(rc.relates(p, q));
        assert!(!rc.relates(q, p));
        // same column: causal along v, never chronological
        let s = g.id_at(3, 9).unwrap();
        assert!(!rc.relates(p, s));
        assert!(rc.causal_relates(p, s));
        assert!(rc.causal_relates(p, p));
    }

    #[test]
    fn lazy_matches_dense() {
        let g = empty(17);
        let dense = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        let lazy = Reach::build(&g, 130_000).unwrap();
        assert!(!lazy.is_dense());
        for x in [0u32, 37, 111, 224] {
            assert_eq!(dense.past_of(x), lazy.past_of(x));
            assert_eq!(dense.future_of(x), lazy.future_of(x));
            assert_eq!(dense.causal_future_of(x), lazy.causal_future_of(x));
            let s = dense.dpast(x);
            assert_eq!(dense.upper_bounds(&s), lazy.upper_bounds(&s));
            assert_eq!(dense.upper_bounds_incl(&s), lazy.upper_bounds_incl(&s));
        }
    }

    #[test]
    fn obstacle_blocks_relations() {
        // closed block in the middle of the window
        let g = scene(
            r#"{"name":"block","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":false,"resolution":33,"step_window":3,
                "obstacles":[{"kind":"polygon",
                  "vertices":[[0.4,0.2],[0.6,0.2],[0.6,0.8],[0.4,0.8]]}],
                "orientation":"uv-future"}"#,
        );
        let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        let p = g.id_at(2, 2).unwrap();
        // behind the block: the slope window forbids ducking under it and
        // the block itself shadows the direct staircases
        let q = g.id_at(24, 14).unwrap();
        assert!(!rc.relates(p, q));
        // high enough to clear the top of the block
        let s = g.id_at(22, 30).unwrap();
        assert!(rc.relates(p, s));
    }

    #[test]
    fn periodic_wraps_and_loops() {
        let g = scene(
            r#"{"name":"cyl","coords":"null",
                "window":{"u":[0,1],"v":[0,1]},
                "periodic_u":true,"resolution":17,"step_window":3,
                "obstacles":[],"orientation":"uv-future"}"#,
        );
        let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        let p = g.id_at(14, 5).unwrap();
        let q = g.id_at(1, 7).unwrap();
        // wraps across the seam
        assert!(rc.relates(p, q));
        // closed causal loop at constant v around the cylinder
        let w = g.id_at(8, 5).unwrap();
        assert!(rc.causal_relates(p, w));
        assert!(rc.causal_relates(w, p));
        assert!(!rc.relates(p, p));
    }

    #[test]
    fn grid_space_dilation() {
        let g = empty(17);
        let sp = GridSpace::new(&g, 1.0, 0.002);
        let p = g.id_at(8, 8).unwrap();
        let s = EventSet::from_indices(g.n(), &[p]);
        let d = sp.dilate(&s);
        assert_eq!(d.count(), 29);
        assert!(d.contains(g.id_at(8, 11).unwrap()));
        assert!(!d.contains(g.id_at(10, 11).unwrap()));
        assert!(sp.window_area() > 0.0);
    }
}
