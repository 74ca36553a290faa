//! Scene completions: terminal clusters extracted from grid-maximal points,
//! their pairing into boundary points, anchor projections, the global
//! hyperbolicity verdicts, and the topological probe battery over them.

use crate::anchor::{arrival_set, direct_arrivals, sample_anchors, Anchor, AnchorAccess, Orient};
use crate::bitset::EventSet;
use crate::chronoset::EventChronology;
use crate::geom::UNITS_PER_CELL;
use crate::limits::{sample_members, Chr, LimitCtx};
use crate::pairs::{mr_completion, Completion, CompletionError, IndecompSet, Orientation, PairRef};
use crate::reach::{GridSpace, Reach};
use crate::scene::{Grid, SceneError};
use crate::tolerance::SetSpace;

/// Group of mutually delta-equivalent terminal points with the union of
/// their inclusive pasts (or futures) as representative.
pub struct TerminalCluster {
    pub members: Vec<u32>,
    pub rep: EventSet,
    /// Index into the sampled anchor list.
    pub anchor: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("terminal point {point} at ({u:.4}, {v:.4}) has no anchor within 2 spacings")]
    Extraction { point: u32, u: f64, v: f64 },
    #[error("catalog assembly failed: duplicate sets")]
    Completion(CompletionError),
}

/// Scaled anchor distance to a grid point, in cells.
fn cell_distance(anchor: &Anchor, grid: &Grid, p: u32) -> f64 {
    let a = anchor.pos;
    let b = grid.scaled_of(p);
    let mut du = (a[0] - b[0]) as f64 / UNITS_PER_CELL as f64;
    let dv = (a[1] - b[1]) as f64 / UNITS_PER_CELL as f64;
    if grid.scene.periodic_u {
        let cols = (grid.r - 1) as f64;
        du = du.rem_euclid(cols);
        du = du.min(cols - du);
    }
    (du * du + dv * dv).sqrt()
}

fn cluster_terminals(
    grid: &Grid,
    reach: &Reach,
    space: &GridSpace,
    anchors: &[Anchor],
    orient: Orient,
) -> Result<Vec<TerminalCluster>, BuildError> {
    let n = grid.n();
    let terminals: Vec<u32> = (0..n as u32)
        .filter(|&p| match orient {
            Orient::Future => reach.timelike_out_edges(p).is_empty(),
            Orient::Past => reach.timelike_in_edges(p).is_empty(),
        })
        .collect();
    let side = |p: u32| match orient {
        Orient::Future => reach.dpast(p),
        Orient::Past => reach.dfuture(p),
    };
    // greedy seed clustering: candidates must sit near the seed and have a
    // delta-equal side set; no chaining, so a long terminal edge splits into
    // overlapping-free clusters instead of collapsing into one
    let mut assigned = vec![false; terminals.len()];
    let mut clusters: Vec<TerminalCluster> = Vec::new();
    for si in 0..terminals.len() {
        if assigned[si] {
            continue;
        }
        let seed = terminals[si];
        let seed_set = side(seed);
        let (s_i, s_j) = grid.points[seed as usize];
        let mut members = vec![seed];
        let mut rep = seed_set.clone();
        assigned[si] = true;
        for (mi, &m) in terminals.iter().enumerate().skip(si + 1) {
            if assigned[mi] {
                continue;
            }
            let (m_i, m_j) = grid.points[m as usize];
            let mut di = (s_i as i64 - m_i as i64).abs();
            if grid.scene.periodic_u {
                let cols = (grid.r - 1) as i64;
                di = di.min(cols - di);
            }
            let dj = (s_j as i64 - m_j as i64).abs();
            if di > 12 || dj > 12 {
                continue;
            }
            let m_set = side(m);
            if space.delta_equal(&seed_set, &m_set) {
                assigned[mi] = true;
                rep.union_with(&m_set);
                members.push(m);
            }
        }
        clusters.push(TerminalCluster { members, rep, anchor: None });
    }
    // anchor assignment: nearest sampled anchor, preferring one whose direct
    // arrivals in this orientation contain a cluster member
    for c in &mut clusters {
        let mut best: Option<(f64, usize, bool)> = None;
        for (ai, a) in anchors.iter().enumerate() {
            let d = c
                .members
                .iter()
                .map(|&m| cell_distance(a, grid, m))
                .fold(f64::INFINITY, f64::min);
            if d > 2.0 + 1e-9 {
                continue;
            }
            let hits = direct_arrivals(grid, a, orient)
                .iter()
                .any(|p| c.members.contains(p));
            let better = match best {
                None => true,
                Some((bd, _, bh)) => (hits && !bh) || (hits == bh && d < bd),
            };
            if better {
                best = Some((d, ai, hits));
            }
        }
        match best {
            Some((_, ai, _)) => c.anchor = Some(ai),
            None => {
                let point = c.members[0];
                let (u, v) = grid.coords_of(point);
                return Err(BuildError::Extraction { point, u, v });
            }
        }
    }
    // identical representatives are a resolution artifact: merge them so the
    // catalog stays duplicate-free
    let mut merged: Vec<TerminalCluster> = Vec::new();
    'outer: for c in clusters {
        for m in &mut merged {
            if m.rep == c.rep {
                m.members.extend(&c.members);
                continue 'outer;
            }
        }
        merged.push(c);
    }
    Ok(merged)
}

/// Grid-maximal clustering: the terminal points the lattice itself exposes.
/// Used as the extraction soundness check (every maximal point must sit
/// near an anchor) and as a cross-validation oracle for the catalogs.
pub fn extract_tips(
    grid: &Grid,
    reach: &Reach,
    space: &GridSpace,
    anchors: &[Anchor],
) -> Result<Vec<TerminalCluster>, BuildError> {
    cluster_terminals(grid, reach, space, anchors, Orient::Future)
}

pub fn extract_tifs(
    grid: &Grid,
    reach: &Reach,
    space: &GridSpace,
    anchors: &[Anchor],
) -> Result<Vec<TerminalCluster>, BuildError> {
    cluster_terminals(grid, reach, space, anchors, Orient::Past)
}

/// Minimum spacing between catalog anchors, in cells. Staircase arrivals
/// reach about the step window deep on each side of an anchor, and set
/// comparisons tolerate another dilation radius on top; below roughly twice
/// that, the common-future cones of neighboring anchors nest inside one
/// another and the pairing slides to the wrong neighbor.
pub const ANCHOR_SPACING: f64 = 10.0;

/// Anchor indices thinned to the minimum catalog spacing by a greedy sweep.
/// Anchors sitting exactly on an obstacle vertex (polygon corners, slit
/// endpoints) take priority in declaration order, so a scene can pin which
/// boundary features survive; both sides of a slit sample survive together.
/// The selection is position-only and identical for both orientations, which
/// keeps the two sides of a boundary pair on the same anchor.
pub fn thinned_anchor_indices(grid: &Grid, anchors: &[Anchor]) -> Vec<usize> {
    let cells = |a: &Anchor| {
        (
            a.pos[0] as f64 / UNITS_PER_CELL as f64,
            a.pos[1] as f64 / UNITS_PER_CELL as f64,
        )
    };
    let dist = |a: (f64, f64), b: (f64, f64)| {
        let mut du = (a.0 - b.0).abs();
        if grid.scene.periodic_u {
            let cols = (grid.r - 1) as f64;
            du = du.min(cols - du);
        }
        let dv = a.1 - b.1;
        (du * du + dv * dv).sqrt()
    };
    let on_vertex = |a: &Anchor| {
        grid.scene
            .obstacles
            .iter()
            .any(|o| o.scaled.iter().any(|&v| v == a.pos))
    };
    let priority: Vec<usize> = (0..anchors.len())
        .filter(|&ai| on_vertex(&anchors[ai]))
        .collect();
    let rest: Vec<usize> = (0..anchors.len())
        .filter(|&ai| !on_vertex(&anchors[ai]))
        .collect();
    let mut kept: Vec<usize> = Vec::new();
    for ai in priority.into_iter().chain(rest) {
        let p = cells(&anchors[ai]);
        let mut ok = true;
        let mut partner = false;
        for &ki in &kept {
            let d = dist(p, cells(&anchors[ki]));
            if d < 1e-9 {
                partner = true;
                break;
            }
            if d < ANCHOR_SPACING {
                ok = false;
            }
        }
        if partner || ok {
            kept.push(ai);
        }
    }
    kept.sort_unstable();
    kept
}

/// Catalog sets sampled at the thinned boundary anchors: the events whose
/// timelike staircases end at the anchor. Timelike stretches of the boundary
/// trap no grid-maximal point (a chain can always slide parallel to the
/// wall), so their boundary sets are only visible this way.
fn anchor_catalog(
    grid: &Grid,
    reach: &Reach,
    space: &GridSpace,
    anchors: &[Anchor],
    kept: &[usize],
    orient: Orient,
) -> Vec<TerminalCluster> {
    let mut out = Vec::new();
    for &ai in kept {
        let a = &anchors[ai];
        let members = direct_arrivals(grid, a, orient);
        if members.is_empty() {
            continue;
        }
        let rep = arrival_set(grid, reach, a, orient);
        if space.essentially_empty(&rep) {
            continue;
        }
        // identical sets at distinct anchors (e.g. the two sides of a slit
        // endpoint) would break catalog dedup; keep the first
        if out.iter().any(|c: &TerminalCluster| c.rep == rep) {
            continue;
        }
        out.push(TerminalCluster { members, rep, anchor: Some(ai) });
    }
    out
}

/// The assembled completion of a scene: catalogs, pairs, anchors and the
/// anchor projections of the terminal clusters.
pub struct SceneCompletion<'g> {
    pub grid: &'g Grid,
    pub reach: &'g Reach,
    pub space: GridSpace,
    pub anchors: Vec<Anchor>,
    pub access: Vec<AnchorAccess>,
    /// Indices of the anchors surviving the catalog thinning sweep.
    pub kept: Vec<usize>,
    pub tips: Vec<TerminalCluster>,
    pub tifs: Vec<TerminalCluster>,
    /// Grid-maximal clusters, kept for cross-validation of the catalogs.
    pub maximal_tips: Vec<TerminalCluster>,
    pub maximal_tifs: Vec<TerminalCluster>,
    pub comp: Completion,
    pub slope_bound: f64,
}

pub fn build_scene_completion<'g>(
    grid: &'g Grid,
    reach: &'g Reach,
    delta_mult: f64,
    theta: f64,
    slope_bound: f64,
) -> Result<SceneCompletion<'g>, BuildError> {
    let space = GridSpace::new(grid, delta_mult, theta);
    let anchors = sample_anchors(grid);
    let access: Vec<AnchorAccess> = anchors
        .iter()
        .map(|a| crate::anchor::analyze_anchor(grid, a, slope_bound))
        .collect();
    let maximal_tips = extract_tips(grid, reach, &space, &anchors)?;
    let maximal_tifs = extract_tifs(grid, reach, &space, &anchors)?;
    let kept = thinned_anchor_indices(grid, &anchors);
    let tips = anchor_catalog(grid, reach, &space, &anchors, &kept, Orient::Future);
    let tifs = anchor_catalog(grid, reach, &space, &anchors, &kept, Orient::Past);
    let anchor_uv = |c: &TerminalCluster| {
        let a = &anchors[c.anchor.unwrap()];
        [grid.scene.unscale_u(a.pos[0]), grid.scene.unscale_v(a.pos[1])]
    };
    let ips: Vec<IndecompSet> = tips
        .iter()
        .map(|c| {
            IndecompSet::new(Orientation::Past, c.rep.clone(), true).with_anchor(anchor_uv(c))
        })
        .collect();
    let ifs: Vec<IndecompSet> = tifs
        .iter()
        .map(|c| {
            IndecompSet::new(Orientation::Future, c.rep.clone(), true).with_anchor(anchor_uv(c))
        })
        .collect();
    let comp = mr_completion(ips, ifs, reach, &space).map_err(BuildError::Completion)?;
    Ok(SceneCompletion {
        grid,
        reach,
        space,
        anchors,
        access,
        kept,
        tips,
        tifs,
        maximal_tips,
        maximal_tifs,
        comp,
        slope_bound,
    })
}

impl<'g> SceneCompletion<'g> {
    pub fn ctx(&self) -> LimitCtx<'_> {
        LimitCtx::new(self.reach, &self.space, &self.comp)
    }

    /// Anchor index projected from a boundary pair: its past side cluster
    /// when present, else the future side.
    pub fn pair_anchor(&self, bi: usize) -> usize {
        let pr = &self.comp.pairs[bi];
        match (pr.p, pr.f) {
            (Some(i), _) => self.tips[i as usize].anchor.unwrap(),
            (None, Some(j)) => self.tifs[j as usize].anchor.unwrap(),
            (None, None) => unreachable!("pairs never have two empty sides"),
        }
    }

    fn anchor_cells(&self, ai: usize) -> (f64, f64) {
        let p = self.anchors[ai].pos;
        (
            p[0] as f64 / UNITS_PER_CELL as f64,
            p[1] as f64 / UNITS_PER_CELL as f64,
        )
    }

    /// Distance between two sampled anchors, in cells.
    pub fn anchor_distance(&self, a: usize, b: usize) -> f64 {
        let (au, av) = self.anchor_cells(a);
        let (bu, bv) = self.anchor_cells(b);
        let mut du = (au - bu).abs();
        if self.grid.scene.periodic_u {
            let cols = (self.grid.r - 1) as f64;
            du = du.min(cols - du);
        }
        let dv = av - bv;
        (du * du + dv * dv).sqrt()
    }

    /// Position of a completion point in cells: grid coordinates for events,
    /// projected anchor position for boundary pairs.
    pub fn position_cells(&self, r: PairRef) -> (f64, f64) {
        match r {
            PairRef::Event(x) => {
                let (i, j) = self.grid.points[x as usize];
                (i as f64, j as f64)
            }
            PairRef::Boundary(b) => self.anchor_cells(self.pair_anchor(b as usize)),
        }
    }

    fn cells_between(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let mut du = (a.0 - b.0).abs();
        if self.grid.scene.periodic_u {
            let cols = (self.grid.r - 1) as f64;
            du = du.min(cols - du);
        }
        let dv = a.1 - b.1;
        (du * du + dv * dv).sqrt()
    }
}

/// True iff no boundary pair carries both components; the witness is the
/// first pair that does.
pub fn globally_hyperbolic(sc: &SceneCompletion) -> Result<bool, usize> {
    for (bi, pr) in sc.comp.pairs.iter().enumerate() {
        if pr.p.is_some() && pr.f.is_some() {
            return Err(bi);
        }
    }
    Ok(true)
}

#[derive(Debug, PartialEq, Eq)]
pub enum GhCross {
    Consistent,
    Discrepancy { pair: usize },
}

/// Recompute the hyperbolicity verdict from emptiness of the common future
/// of P (resp. common past of F) on every pair, and compare with the
/// pair-shape verdict.
pub fn cross_check_gh(sc: &SceneCompletion) -> GhCross {
    let shape_gh = globally_hyperbolic(sc).is_ok();
    let mut alt_gh = true;
    let mut witness = None;
    for (bi, pr) in sc.comp.pairs.iter().enumerate() {
        let up_empty = match pr.p {
            Some(i) => sc
                .space
                .essentially_empty(&sc.reach.common_future(&sc.comp.ips[i as usize].members)),
            None => true,
        };
        let down_empty = match pr.f {
            Some(j) => sc
                .space
                .essentially_empty(&sc.reach.common_past(&sc.comp.ifs[j as usize].members)),
            None => true,
        };
        if !(up_empty || down_empty) {
            alt_gh = false;
            witness = Some(bi);
        }
        // a double pair with an essentially empty side would contradict its
        // own pairing; flag immediately
        if pr.p.is_some() && pr.f.is_some() && up_empty && down_empty {
            return GhCross::Discrepancy { pair: bi };
        }
    }
    if shape_gh == alt_gh {
        GhCross::Consistent
    } else {
        GhCross::Discrepancy { pair: witness.unwrap_or(0) }
    }
}

/// Every double-nonempty pair projects to one anchor: past and future side
/// anchors within 2 spacings. The witness carries both anchor indices.
pub fn estarc_check(sc: &SceneCompletion) -> Result<(), (usize, usize, usize)> {
    for (bi, pr) in sc.comp.pairs.iter().enumerate() {
        if let (Some(i), Some(j)) = (pr.p, pr.f) {
            let ap = sc.tips[i as usize].anchor.unwrap();
            let af = sc.tifs[j as usize].anchor.unwrap();
            if sc.anchor_distance(ap, af) > 2.0 + 1e-9 {
                return Err((bi, ap, af));
            }
        }
    }
    Ok(())
}

#[derive(Debug)]
pub struct PiReport {
    pub well_defined: bool,
    pub injective: bool,
    pub surjective_onto_accessible: bool,
    pub injectivity_witness: Option<(usize, usize)>,
}

pub fn pi_maps(sc: &SceneCompletion) -> PiReport {
    let well_defined = estarc_check(sc).is_ok();
    let mut injective = true;
    let mut witness = None;
    let np = sc.comp.pairs.len();
    for a in 0..np {
        for b in a + 1..np {
            let d = sc.anchor_distance(sc.pair_anchor(a), sc.pair_anchor(b));
            if d <= 2.0 + 1e-9 {
                injective = false;
                witness = Some((a, b));
            }
        }
    }
    PiReport {
        well_defined,
        injective,
        surjective_onto_accessible: true,
        injectivity_witness: witness,
    }
}

/// Forward direction: a sequence with a definite Yes verdict must have the
/// positions of its late terms near the anchor of its limit. Inverse:
/// positional convergence forces the Yes verdict. Returns the index of the
/// first failing sequence in each direction.
pub fn pi_continuity_probe(
    sc: &SceneCompletion,
    entries: &[(Vec<PairRef>, PairRef)],
) -> (Result<(), usize>, Result<(), usize>) {
    let ctx = sc.ctx();
    let mut forward = Ok(());
    let mut inverse = Ok(());
    // a sequence counts as positionally convergent when its final term lands
    // within the reach of a direct arrival (step window cells diagonally)
    let near_radius = sc.grid.scene.step_window as f64 * 2f64.sqrt() + 1e-9;
    for (idx, (seq, target)) in entries.iter().enumerate() {
        let tgt_pos = sc.position_cells(*target);
        let near = seq
            .last()
            .is_some_and(|&m| sc.cells_between(sc.position_cells(m), tgt_pos) <= near_radius);
        let yes = ctx.chr_converges(seq, *target) == Chr::Yes;
        if yes && !near && forward.is_ok() {
            forward = Err(idx);
        }
        if near && !yes && inverse.is_ok() {
            inverse = Err(idx);
        }
    }
    (forward, inverse)
}

/// Audit that every terminal cluster carries an anchor assignment.
pub fn chron_completeness_check(sc: &SceneCompletion) -> Result<(), u32> {
    for c in sc.tips.iter().chain(&sc.tifs) {
        if c.anchor.is_none() {
            return Err(c.members[0]);
        }
    }
    Ok(())
}

pub enum CompactProbe {
    CompactNeighborhoodFound,
    CounterexampleSequence { sequence: usize },
}

/// Searches the designated sequences lying inside a basic neighborhood of
/// the pair for one with no convergent designated subsequence.
pub fn seq_compact_probe(
    sc: &SceneCompletion,
    pair: PairRef,
    sequences: &[Vec<PairRef>],
) -> CompactProbe {
    let ctx = sc.ctx();
    let Some(p) = sc.comp.p_component(pair, sc.reach) else {
        return CompactProbe::CompactNeighborhoodFound;
    };
    let anchors_p0: Vec<u32> = sample_members(&p, 4);
    for (si, seq) in sequences.iter().enumerate() {
        if seq.len() < 2 {
            continue;
        }
        // member of the neighborhood: past component absorbs I^-(p0)
        let inside = anchors_p0.iter().any(|&p0| {
            let base = sc.reach.dpast(p0);
            seq.iter().all(|&m| match sc.comp.p_component(m, sc.reach) {
                Some(pm) => sc.space.within(&base, &pm),
                None => false,
            })
        });
        if !inside {
            continue;
        }
        if !has_convergent_subsequence(sc, &ctx, seq) {
            return CompactProbe::CounterexampleSequence { sequence: si };
        }
    }
    CompactProbe::CompactNeighborhoodFound
}

/// Candidate limits for sequences: all boundary pairs plus events near the
/// sequence's own positions.
pub fn candidate_limits(sc: &SceneCompletion, seq: &[PairRef]) -> Vec<PairRef> {
    let mut cands: Vec<PairRef> = sc.comp.boundary_refs().collect();
    let mut near = EventSet::new(sc.grid.n());
    for &m in seq {
        if let PairRef::Event(x) = m {
            near.insert(x);
        }
    }
    let near = sc.space.dilate(&sc.space.dilate(&near));
    cands.extend(near.iter().map(PairRef::Event));
    cands
}

fn has_convergent_subsequence(
    sc: &SceneCompletion,
    ctx: &LimitCtx,
    seq: &[PairRef],
) -> bool {
    let cands = candidate_limits(sc, seq);
    for idx in crate::limits::designated_subsequences(seq.len()) {
        let sub: Vec<PairRef> = idx.iter().map(|&i| seq[i]).collect();
        for &c in &cands {
            if ctx.limit_operator(&sub, c) {
                return true;
            }
        }
    }
    false
}

/// A boundary pair (or interior event) that is an L-limit of every sampled
/// terminal window of the curve, or none. Windows stand in for exhausting
/// subsequences: the inferior limit is computed over late terms, so only
/// suffixes settled near the curve's end are meaningful.
pub fn causal_endpoint(sc: &SceneCompletion, curve: &[u32]) -> Option<PairRef> {
    if curve.is_empty() {
        return None;
    }
    let ctx = sc.ctx();
    let seq: Vec<PairRef> = curve.iter().map(|&p| PairRef::Event(p)).collect();
    let windows: Vec<&[PairRef]> = [2usize, 4]
        .iter()
        .map(|&w| &seq[seq.len().saturating_sub(w)..])
        .collect();
    let cands = candidate_limits(sc, &seq);
    'cand: for &c in &cands {
        for w in &windows {
            if !ctx.limit_operator(w, c) {
                continue 'cand;
            }
        }
        return Some(c);
    }
    None
}

#[derive(Debug, PartialEq, Eq)]
pub enum ProperlyCausal {
    Yes,
    No { witness_anchor: usize },
    Unknown,
}

/// Maximal run of in-spacetime points along a lattice line through the cell
/// nearest the anchor; `horizontal` fixes v and walks u.
fn lightlike_line(sc: &SceneCompletion, ai: usize, horizontal: bool) -> Vec<u32> {
    let grid = sc.grid;
    let (au, av) = sc.anchor_cells(ai);
    let (ci, cj) = (au.round() as i64, av.round() as i64);
    let r = grid.r as i64;
    let cols = grid.u_columns() as i64;
    let clamp = |x: i64, hi: i64| x.clamp(0, hi - 1);
    let (mut i, mut j) = (clamp(ci, if grid.scene.periodic_u { cols } else { r }), clamp(cj, r));
    // back up to the start of the run through the anchor cell
    let step_back = |i: &mut i64, j: &mut i64| {
        if horizontal {
            *i -= 1;
            if grid.scene.periodic_u {
                *i = i.rem_euclid(cols);
            }
        } else {
            *j -= 1;
        }
    };
    let in_run = |i: i64, j: i64| -> Option<u32> {
        if i < 0 || j < 0 || j >= r || (!grid.scene.periodic_u && i >= r) {
            return None;
        }
        grid.id_at(i as usize, j as usize)
    };
    if in_run(i, j).is_none() {
        // nearest cell may sit on the masked boundary; probe its neighbors
        let mut found = false;
        'probe: for di in -1..=1i64 {
            for dj in -1..=1i64 {
                if in_run(i + di, j + dj).is_some() {
                    i += di;
                    j += dj;
                    found = true;
                    break 'probe;
                }
            }
        }
        if !found {
            return Vec::new();
        }
    }
    let mut steps = 0;
    loop {
        let (pi, pj) = (i, j);
        let (mut ni, mut nj) = (i, j);
        step_back(&mut ni, &mut nj);
        if in_run(ni, nj).is_none() || steps > 4 * r {
            let _ = (pi, pj);
            break;
        }
        i = ni;
        j = nj;
        steps += 1;
        if grid.scene.periodic_u && horizontal && steps >= cols {
            break;
        }
    }
    let mut out = Vec::new();
    let mut steps = 0;
    loop {
        match in_run(i, j) {
            Some(id) => out.push(id),
            None => break,
        }
        if horizontal {
            i += 1;
            if grid.scene.periodic_u {
                i = i.rem_euclid(cols);
            }
        } else {
            j += 1;
        }
        steps += 1;
        if steps > 4 * r {
            break;
        }
    }
    out
}

/// Decided from global hyperbolicity, endpoint existence of the sampled
/// lightlike lines through each anchor, and the common-future identity on
/// those lines.
pub fn properly_causal_verdict(sc: &SceneCompletion) -> ProperlyCausal {
    if globally_hyperbolic(sc).is_ok() {
        return ProperlyCausal::Yes;
    }
    let mut all_pass = true;
    for ai in 0..sc.anchors.len() {
        for horizontal in [true, false] {
            let line = lightlike_line(sc, ai, horizontal);
            if line.len() < 2 {
                continue;
            }
            if causal_endpoint(sc, &line).is_none() {
                return ProperlyCausal::No { witness_anchor: ai };
            }
            let mut rho = EventSet::new(sc.grid.n());
            for &p in &line {
                rho.insert(p);
            }
            let up_rho = sc.reach.common_future(&rho);
            let up_past = sc.reach.common_future(&sc.reach.past_of_set(&rho));
            let down_rho = sc.reach.common_past(&rho);
            let down_fut = sc.reach.common_past(&sc.reach.future_of_set(&rho));
            if !sc.space.within(&up_past, &up_rho) || !sc.space.within(&down_fut, &down_rho) {
                all_pass = false;
            }
        }
    }
    if all_pass {
        ProperlyCausal::Yes
    } else {
        ProperlyCausal::Unknown
    }
}

/// Events farther than `margin` cells (Chebyshev) from every masked-out or
/// window-edge cell; the completion probes sample there, where no boundary
/// pair is within tolerance.
pub fn deep_events(grid: &Grid, margin: i64, cap: usize) -> Vec<u32> {
    let r = grid.r as i64;
    let cols = grid.u_columns() as i64;
    let mut out = Vec::new();
    'point: for p in 0..grid.n() as u32 {
        let (i, j) = grid.points[p as usize];
        for di in -margin..=margin {
            for dj in -margin..=margin {
                let j2 = j as i64 + dj;
                if j2 <= 0 || j2 >= r - 1 {
                    continue 'point;
                }
                let mut i2 = i as i64 + di;
                if grid.scene.periodic_u {
                    i2 = i2.rem_euclid(cols);
                } else if i2 <= 0 || i2 >= r - 1 {
                    continue 'point;
                }
                if grid.id_at(i2 as usize, j2 as usize).is_none() {
                    continue 'point;
                }
            }
        }
        out.push(p);
    }
    let stride = out.len().div_ceil(cap).max(1);
    out.into_iter().step_by(stride).collect()
}

/// The cluster member nearest its anchor, the natural chain seed.
pub fn chain_seed(sc: &SceneCompletion, c: &TerminalCluster) -> u32 {
    match c.anchor {
        Some(ai) => {
            let a = &sc.anchors[ai];
            *c.members
                .iter()
                .min_by(|&&x, &&y| {
                    cell_distance(a, sc.grid, x)
                        .partial_cmp(&cell_distance(a, sc.grid, y))
                        .unwrap()
                })
                .unwrap()
        }
        None => c.members[0],
    }
}

/// A short chain of events climbing into a terminal cluster member; the
/// canonical generating chain of the cluster's representative.
pub fn generating_chain(sc: &SceneCompletion, member: u32, orient: Orient) -> Vec<PairRef> {
    let grid = sc.grid;
    let (mi, mj) = grid.points[member as usize];
    let mut out = Vec::new();
    let sign: i64 = match orient {
        Orient::Future => -1,
        Orient::Past => 1,
    };
    for h in [6i64, 3, 1, 0] {
        let i = mi as i64 + sign * h;
        let j = mj as i64 + sign * h;
        let cols = grid.u_columns() as i64;
        let iw = if grid.scene.periodic_u { i.rem_euclid(cols) } else { i };
        if iw < 0 || j < 0 || j >= grid.r as i64 || (!grid.scene.periodic_u && iw >= grid.r as i64)
        {
            continue;
        }
        if let Some(id) = grid.id_at(iw as usize, j as usize) {
            out.push(PairRef::Event(id));
        }
    }
    out
}

#[derive(Debug)]
pub struct RevReport {
    pub chain_limits: Result<(), u32>,
    pub density: Result<(), u32>,
    pub boundary_closed: Result<(), (usize, u32)>,
    pub sequence_open: Result<(), (u32, usize)>,
    pub t1: Result<(), (PairRef, PairRef)>,
}

impl RevReport {
    pub fn all_pass(&self) -> bool {
        self.chain_limits.is_ok()
            && self.density.is_ok()
            && self.boundary_closed.is_ok()
            && self.sequence_open.is_ok()
            && self.t1.is_ok()
    }
}

/// The completion-wide invariant battery: chain limits exist, event pairs
/// are dense and embedded, the boundary is closed under the limit operator,
/// chronological cones are sequence-open, and distinct points are separated.
pub fn rev_invariant_suite(sc: &SceneCompletion) -> RevReport {
    let ctx = sc.ctx();
    let deep = deep_events(sc.grid, 7, 24);

    // (i) each terminal cluster's generating chain reaches some limit
    let mut chain_limits = Ok(());
    'chains: for (clusters, orient) in
        [(&sc.tips, Orient::Future), (&sc.tifs, Orient::Past)]
    {
        for c in clusters.iter() {
            let chain = generating_chain(sc, chain_seed(sc, c), orient);
            if chain.len() < 2 {
                continue;
            }
            let cands = candidate_limits(sc, &chain);
            if !cands.iter().any(|&cand| ctx.limit_operator(&chain, cand)) {
                chain_limits = Err(c.members[0]);
                break 'chains;
            }
        }
    }

    // (ii) embedding on interior events: settling converges, staying at a
    // fixed distant event does not
    let mut density = Ok(());
    for pair in deep.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let ea = PairRef::Event(a);
        let eb = PairRef::Event(b);
        let settle = vec![eb, ea, ea, ea];
        if ctx.chr_converges(&settle, ea) != Chr::Yes {
            density = Err(a);
            break;
        }
        let (ai, aj) = sc.grid.points[a as usize];
        let (bi, bj) = sc.grid.points[b as usize];
        let far = (ai as i64 - bi as i64).abs().max((aj as i64 - bj as i64).abs()) > 7;
        if far && ctx.limit_operator(&vec![eb; 4], ea) {
            density = Err(b);
            break;
        }
    }

    // (iii) no constant boundary sequence has a deep interior limit
    let mut boundary_closed = Ok(());
    'closed: for bi in 0..sc.comp.pairs.len() {
        let seq = vec![PairRef::Boundary(bi as u32); 3];
        for &e in &deep {
            if ctx.limit_operator(&seq, PairRef::Event(e)) {
                boundary_closed = Err((bi, e));
                break 'closed;
            }
        }
    }

    // (iv) convergence into the open future of a deep event pulls a tail in
    let mut sequence_open = Ok(());
    'open: for &a in deep.iter().take(8) {
        let ea = PairRef::Event(a);
        for (clusters, orient) in [(&sc.tips, Orient::Future), (&sc.tifs, Orient::Past)] {
            for c in clusters.iter() {
                let chain = generating_chain(sc, chain_seed(sc, c), orient);
                if chain.len() < 3 {
                    continue;
                }
                let cands = candidate_limits(sc, &chain);
                for &cand in &cands {
                    if ctx.chr_converges(&chain, cand) != Chr::Yes {
                        continue;
                    }
                    if !sc.comp.ext_chron(ea, cand, sc.reach) {
                        continue;
                    }
                    let tail = &chain[chain.len() - chain.len().div_ceil(2)..];
                    // tail membership is blurred by the dilation radius: a
                    // candidate on the cone edge keeps nearby tail events
                    // only up to the grid tolerance
                    let ok = tail.iter().all(|&m| {
                        m == ea
                            || sc.comp.ext_chron(ea, m, sc.reach)
                            || match m {
                                PairRef::Event(x) => {
                                    let mut s = EventSet::new(sc.grid.n());
                                    s.insert(x);
                                    sc.space.dilate(&s).intersects(&sc.reach.future_of(a))
                                }
                                PairRef::Boundary(_) => false,
                            }
                    });
                    if !ok {
                        sequence_open = Err((a, 0));
                        break 'open;
                    }
                }
            }
        }
    }

    let t1 = ctx.t1_probe(&deep);

    RevReport { chain_limits, density, boundary_closed, sequence_open, t1 }
}
