//! Envelopment analysis over a scene completion: timelike deformability and
//! transitivity of boundary anchors, regular accessibility, tameness of the
//! arrival relations, timelike-point classification of the boundary, and the
//! projection-equivalence verdicts assembled from them.

use crate::anchor::{
    arrival_set, causal_arrival_set, causal_direct_arrivals, direct_arrivals, AnchorClass, Orient,
};
use crate::completion2d::{
    generating_chain, globally_hyperbolic, pi_continuity_probe, pi_maps, SceneCompletion,
};
use crate::geom::UNITS_PER_CELL;
use crate::pairs::PairRef;

/// Dyadic neighborhood radii, in cells. A check quantifying over a
/// neighborhood passes if it passes at any of these radii.
pub const RADIUS_LADDER: [f64; 3] = [2.0, 4.0, 8.0];

#[derive(Debug, thiserror::Error)]
pub enum ConformalError {
    #[error("anchor {anchor} is not accessible in the requested orientation")]
    Inaccessible { anchor: usize },
}

fn accessible(sc: &SceneCompletion, ai: usize, orient: Orient) -> bool {
    match orient {
        Orient::Future => sc.access[ai].future_accessible,
        Orient::Past => sc.access[ai].past_accessible,
    }
}

fn strong(sc: &SceneCompletion, ai: usize, orient: Orient) -> bool {
    match orient {
        Orient::Future => sc.access[ai].strong_future,
        Orient::Past => sc.access[ai].strong_past,
    }
}

/// Obstacle anchors sitting on the crop frame are artifacts of the window,
/// not of the spacetime's own boundary; they are treated like window cuts.
fn on_window_frame(sc: &SceneCompletion, ai: usize) -> bool {
    let p = sc.anchors[ai].pos;
    let top = (sc.grid.r - 1) as i64 * UNITS_PER_CELL;
    let u_cut = !sc.grid.scene.periodic_u && (p[0] <= 0 || p[0] >= top);
    u_cut || p[1] <= 0 || p[1] >= top
}

/// Anchors the conformal checks quantify over: kept, boundary-owned, off the
/// window frame, and reachable in at least one orientation.
fn scanned(sc: &SceneCompletion, ai: usize) -> bool {
    sc.anchors[ai].class != AnchorClass::Cut
        && !on_window_frame(sc, ai)
        && (accessible(sc, ai, Orient::Future) || accessible(sc, ai, Orient::Past))
}

/// Distance from the anchor to the window frame, in cells.
fn frame_margin_cells(sc: &SceneCompletion, ai: usize) -> f64 {
    let p = sc.anchors[ai].pos;
    let top = (sc.grid.r - 1) as i64 * UNITS_PER_CELL;
    let v = p[1].min(top - p[1]);
    let m = if sc.grid.scene.periodic_u {
        v
    } else {
        v.min(p[0].min(top - p[0]))
    };
    m as f64 / UNITS_PER_CELL as f64
}

fn anchor_cells(sc: &SceneCompletion, ai: usize) -> (f64, f64) {
    let p = sc.anchors[ai].pos;
    (
        p[0] as f64 / UNITS_PER_CELL as f64,
        p[1] as f64 / UNITS_PER_CELL as f64,
    )
}

fn cells_between(sc: &SceneCompletion, a: (f64, f64), b: (f64, f64)) -> f64 {
    let mut du = (a.0 - b.0).abs();
    if sc.grid.scene.periodic_u {
        let cols = (sc.grid.r - 1) as f64;
        du = du.min(cols - du);
    }
    let dv = a.1 - b.1;
    (du * du + dv * dv).sqrt()
}

/// Grid points within Euclidean radius `r` cells of the anchor.
fn ball_points(sc: &SceneCompletion, ai: usize, r: f64) -> Vec<u32> {
    let c = anchor_cells(sc, ai);
    (0..sc.grid.n() as u32)
        .filter(|&p| {
            let (i, j) = sc.grid.points[p as usize];
            cells_between(sc, (i as f64, j as f64), c) <= r + 1e-9
        })
        .collect()
}

/// Sampled anchors within Euclidean radius `r` cells of the anchor.
fn ball_anchors(sc: &SceneCompletion, ai: usize, r: f64) -> Vec<usize> {
    let c = anchor_cells(sc, ai);
    (0..sc.anchors.len())
        .filter(|&bi| cells_between(sc, anchor_cells(sc, bi), c) <= r + 1e-9)
        .collect()
}

/// Start points for the deformability test: the earliest generating-chain
/// point of each catalog cluster at the anchor, or of a direct arrival when
/// the anchor carries no catalog cluster.
fn deformation_starts(sc: &SceneCompletion, ai: usize, orient: Orient) -> Vec<u32> {
    let clusters = match orient {
        Orient::Future => &sc.tips,
        Orient::Past => &sc.tifs,
    };
    let mut seeds: Vec<u32> = clusters
        .iter()
        .filter(|c| c.anchor == Some(ai))
        .map(|c| crate::completion2d::chain_seed(sc, c))
        .collect();
    if seeds.is_empty() {
        seeds.extend(direct_arrivals(sc.grid, &sc.anchors[ai], orient).first());
    }
    seeds
        .into_iter()
        .filter_map(|m| match generating_chain(sc, m, orient).first() {
            Some(&PairRef::Event(p)) => Some(p),
            _ => None,
        })
        .collect()
}

/// A curve endpoint on the anchor can be pushed slightly off the boundary:
/// for some ladder radius, the curve's start point chronologically precedes
/// (future orientation) or follows (past orientation) every grid point and
/// every anchor in the ball. Returns the passing radius.
pub fn deformable_check(
    sc: &SceneCompletion,
    ai: usize,
    orient: Orient,
) -> Result<(bool, Option<f64>), ConformalError> {
    if !accessible(sc, ai, orient) {
        return Err(ConformalError::Inaccessible { anchor: ai });
    }
    let starts = deformation_starts(sc, ai, orient);
    let mut worst: Option<f64> = Some(0.0);
    for p in starts {
        let mut passed = None;
        for &r in &RADIUS_LADDER {
            let grid_ok = ball_points(sc, ai, r).iter().all(|&w| match orient {
                Orient::Future => w == p || sc.reach.relates(p, w),
                Orient::Past => w == p || sc.reach.relates(w, p),
            });
            let anchors_ok = grid_ok
                && ball_anchors(sc, ai, r).iter().all(|&bi| {
                    arrival_set(sc.grid, sc.reach, &sc.anchors[bi], orient).contains(p)
                });
            if anchors_ok {
                passed = Some(r);
                break;
            }
        }
        match (passed, worst) {
            (Some(r), Some(w)) => worst = Some(w.max(r)),
            _ => worst = None,
        }
    }
    Ok((worst.is_some(), worst.filter(|&w| w > 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitiveWitness {
    pub x: u32,
    pub x2: u32,
    /// 0: chron-then-causal through the anchor, 1: causal-then-chron.
    pub implication: u8,
}

/// Chronology composes with causality through the anchor inside some ladder
/// ball: x into the anchor, anchor causally into x', forces x into x' (and
/// the causal-first variant). Returns the passing radius.
pub fn transitive_check(
    sc: &SceneCompletion,
    ai: usize,
) -> Result<f64, TransitiveWitness> {
    let a = &sc.anchors[ai];
    let chron_in = arrival_set(sc.grid, sc.reach, a, Orient::Future);
    let chron_out = arrival_set(sc.grid, sc.reach, a, Orient::Past);
    let causal_in = causal_arrival_set(sc.grid, sc.reach, a, Orient::Future);
    let causal_out = causal_arrival_set(sc.grid, sc.reach, a, Orient::Past);
    let mut witness = None;
    for &r in &RADIUS_LADDER {
        let ball = ball_points(sc, ai, r);
        let mut ok = true;
        'scan: for &x in &ball {
            for &x2 in &ball {
                if chron_in.contains(x) && causal_out.contains(x2) && !sc.reach.relates(x, x2) {
                    witness = Some(TransitiveWitness { x, x2, implication: 0 });
                    ok = false;
                    break 'scan;
                }
                if causal_in.contains(x) && chron_out.contains(x2) && !sc.reach.relates(x, x2) {
                    witness = Some(TransitiveWitness { x, x2, implication: 1 });
                    ok = false;
                    break 'scan;
                }
            }
        }
        if ok {
            return Ok(r);
        }
    }
    Err(witness.expect("some radius failed without a witness"))
}

#[derive(Debug)]
pub struct AnchorReport {
    pub anchor: usize,
    pub class: AnchorClass,
    pub c1: bool,
    /// None when the orientation is inaccessible.
    pub deformable_future: Option<bool>,
    pub deformable_past: Option<bool>,
    pub transitive: bool,
    pub transitive_witness: Option<TransitiveWitness>,
    pub regularly_accessible: bool,
}

#[derive(Debug)]
pub struct AccessReport {
    pub anchors: Vec<AnchorReport>,
    pub all_pass: bool,
}

/// Deformability and transitivity for every kept non-window anchor; the
/// scene passes when every accessible orientation is deformable and every
/// anchor is transitive.
pub fn regular_accessibility_report(sc: &SceneCompletion) -> AccessReport {
    let mut anchors = Vec::new();
    let mut all_pass = true;
    for &ai in &sc.kept {
        if !scanned(sc, ai) {
            continue;
        }
        let def = |orient| deformable_check(sc, ai, orient).ok().map(|(ok, _)| ok);
        let deformable_future = def(Orient::Future);
        let deformable_past = def(Orient::Past);
        let (transitive, transitive_witness) = match transitive_check(sc, ai) {
            Ok(_) => (true, None),
            Err(w) => (false, Some(w)),
        };
        let regularly_accessible = deformable_future.unwrap_or(true)
            && deformable_past.unwrap_or(true)
            && transitive;
        all_pass &= regularly_accessible;
        anchors.push(AnchorReport {
            anchor: ai,
            class: sc.anchors[ai].class,
            c1: sc.anchors[ai].c1,
            deformable_future,
            deformable_past,
            transitive,
            transitive_witness,
            regularly_accessible,
        });
    }
    AccessReport { anchors, all_pass }
}

/// A causal approach whose last segment is null but which can be smoothed:
/// the final segment hugs the light cone within one cell and the arrival
/// point is itself reached by a timelike step, giving the bend a timelike
/// side.
fn smoothable_causal(sc: &SceneCompletion, ai: usize, orient: Orient) -> bool {
    let a = &sc.anchors[ai];
    let z = a.pos;
    for &p in &causal_direct_arrivals(sc.grid, a, orient) {
        let pp = sc.grid.scaled_of(p);
        let (du, dv) = ((z[0] - pp[0]).abs(), (z[1] - pp[1]).abs());
        if du >= UNITS_PER_CELL && dv >= UNITS_PER_CELL {
            continue;
        }
        let timelike_side = match orient {
            Orient::Future => !sc.reach.timelike_in_edges(p).is_empty(),
            Orient::Past => !sc.reach.timelike_out_edges(p).is_empty(),
        };
        if timelike_side {
            return true;
        }
    }
    false
}

#[derive(Debug)]
pub struct Tameness {
    pub chron_tame: bool,
    pub causal_tame: bool,
    /// Anchors whose timelike arrivals admit no strong staircase.
    pub chron_witnesses: Vec<(usize, Orient)>,
    /// Anchors whose causal arrivals admit no strong or smoothable staircase.
    pub causal_witnesses: Vec<(usize, Orient)>,
}

/// Every kept non-window anchor with a timelike arrival must have a strong
/// one; every causal arrival must be strong or end in a smoothable null
/// segment.
pub fn tameness_check(sc: &SceneCompletion) -> Tameness {
    let mut chron_witnesses = Vec::new();
    let mut causal_witnesses = Vec::new();
    for &ai in &sc.kept {
        let a = &sc.anchors[ai];
        if !scanned(sc, ai) {
            continue;
        }
        for orient in [Orient::Future, Orient::Past] {
            if accessible(sc, ai, orient) && !strong(sc, ai, orient) {
                chron_witnesses.push((ai, orient));
            }
            let causally_accessible =
                !causal_direct_arrivals(sc.grid, a, orient).is_empty();
            if causally_accessible
                && !strong(sc, ai, orient)
                && !smoothable_causal(sc, ai, orient)
            {
                causal_witnesses.push((ai, orient));
            }
        }
    }
    Tameness {
        chron_tame: chron_witnesses.is_empty(),
        causal_tame: causal_witnesses.is_empty(),
        chron_witnesses,
        causal_witnesses,
    }
}

#[derive(Debug)]
pub enum T1Verdict {
    /// Regular accessibility fails at this anchor; the hypothesis of the
    /// projection-equivalence statement is not met.
    Blocked { anchor: usize },
    Report(T1Report),
}

#[derive(Debug)]
pub struct T1Report {
    pub bijective: bool,
    pub homeomorphic: bool,
    pub chrono_iso: bool,
    pub injectivity_witness: Option<(usize, usize)>,
    pub continuity_witness: Option<usize>,
    pub iso_witness: Option<(usize, usize)>,
}

impl T1Report {
    pub fn all_hold(&self) -> bool {
        self.bijective && self.homeomorphic && self.chrono_iso
    }
}

/// Does the boundary anchor `za` start a timelike staircase through the
/// spacetime that ends on `zb`?
fn anchors_chron_related(sc: &SceneCompletion, za: usize, zb: usize) -> bool {
    let dep = arrival_set(sc.grid, sc.reach, &sc.anchors[za], Orient::Past);
    let arr = arrival_set(sc.grid, sc.reach, &sc.anchors[zb], Orient::Future);
    dep.intersects(&arr)
}

/// When regular accessibility holds scene-wide, checks that the anchor
/// projection is bijective, continuous both ways on the generating chains
/// (plus any supplied probe sequences), and an order isomorphism between the
/// extended chronology and staircase reachability between anchors.
pub fn thm_t1_pipeline(
    sc: &SceneCompletion,
    extra: &[(Vec<PairRef>, PairRef)],
) -> T1Verdict {
    let reg = regular_accessibility_report(sc);
    if !reg.all_pass {
        let anchor = reg
            .anchors
            .iter()
            .find(|a| !a.regularly_accessible)
            .map(|a| a.anchor)
            .unwrap_or(0);
        return T1Verdict::Blocked { anchor };
    }
    let pi = pi_maps(sc);
    let bijective = pi.well_defined && pi.injective && pi.surjective_onto_accessible;

    let mut entries: Vec<(Vec<PairRef>, PairRef)> = Vec::new();
    for (bi, pr) in sc.comp.pairs.iter().enumerate() {
        // window artifacts are not part of the projected boundary
        let ai = sc.pair_anchor(bi);
        if sc.anchors[ai].class == AnchorClass::Cut || on_window_frame(sc, ai) {
            continue;
        }
        let (member, orient) = match (pr.p, pr.f) {
            (Some(i), _) => (
                crate::completion2d::chain_seed(sc, &sc.tips[i as usize]),
                Orient::Future,
            ),
            (None, Some(j)) => (
                crate::completion2d::chain_seed(sc, &sc.tifs[j as usize]),
                Orient::Past,
            ),
            (None, None) => continue,
        };
        let chain = generating_chain(sc, member, orient);
        if chain.len() >= 2 {
            entries.push((chain, PairRef::Boundary(bi as u32)));
        }
    }
    entries.extend(extra.iter().cloned());
    let (forward, inverse) = pi_continuity_probe(sc, &entries);
    let continuity_witness = forward.err().or(inverse.err());
    let homeomorphic = continuity_witness.is_none();

    let mut iso_witness = None;
    let np = sc.comp.pairs.len();
    'iso: for a in 0..np {
        for b in 0..np {
            if a == b {
                continue;
            }
            let lhs = sc.comp.ext_chron(
                PairRef::Boundary(a as u32),
                PairRef::Boundary(b as u32),
                sc.reach,
            );
            let rhs = anchors_chron_related(sc, sc.pair_anchor(a), sc.pair_anchor(b));
            if lhs != rhs {
                iso_witness = Some((a, b));
                break 'iso;
            }
        }
    }
    T1Verdict::Report(T1Report {
        bijective,
        homeomorphic,
        chrono_iso: iso_witness.is_none(),
        injectivity_witness: pi.injectivity_witness,
        continuity_witness,
        iso_witness,
    })
}

#[derive(Debug)]
pub struct TimelikeScan {
    pub has_timelike: bool,
    pub all_c1: bool,
    pub timelike_witness: Option<usize>,
    pub c1_witness: Option<usize>,
    /// With a smooth boundary free of timelike points, checked conclusions:
    /// causal tameness and one-sided strong accessibility per anchor.
    pub causal_tame: Option<bool>,
    pub two_sided_witness: Option<usize>,
}

/// Classification sweep over the non-window anchors, with the tameness and
/// one-sidedness conclusions asserted when the boundary is smooth and free
/// of timelike points.
pub fn timelike_point_scan(sc: &SceneCompletion) -> TimelikeScan {
    let mut has_timelike = false;
    let mut all_c1 = true;
    let mut timelike_witness = None;
    let mut c1_witness = None;
    for (ai, a) in sc.anchors.iter().enumerate() {
        if !scanned(sc, ai) {
            continue;
        }
        match a.class {
            AnchorClass::Cut => {}
            AnchorClass::Timelike => {
                has_timelike = true;
                timelike_witness.get_or_insert(ai);
            }
            AnchorClass::Corner | AnchorClass::Slit => {
                all_c1 = false;
                c1_witness.get_or_insert(ai);
            }
            AnchorClass::Null | AnchorClass::Spacelike => {}
        }
    }
    let mut causal_tame = None;
    let mut two_sided_witness = None;
    if all_c1 && !has_timelike {
        causal_tame = Some(tameness_check(sc).causal_tame);
        for &ai in &sc.kept {
            if !scanned(sc, ai) {
                continue;
            }
            if sc.access[ai].strong_future && sc.access[ai].strong_past {
                two_sided_witness = Some(ai);
                break;
            }
        }
    }
    TimelikeScan {
        has_timelike,
        all_c1,
        timelike_witness,
        c1_witness,
        causal_tame,
        two_sided_witness,
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Cfinal {
    Consistent,
    Counterexample,
    NotApplicable,
}

impl Cfinal {
    pub fn as_str(&self) -> &'static str {
        match self {
            Cfinal::Consistent => "consistent",
            Cfinal::Counterexample => "counterexample",
            Cfinal::NotApplicable => "not-applicable",
        }
    }
}

/// Global hyperbolicity against the absence of timelike boundary points;
/// only decided when every non-window anchor is smooth.
pub fn cfinal_check(sc: &SceneCompletion) -> Cfinal {
    let scan = timelike_point_scan(sc);
    if !scan.all_c1 {
        return Cfinal::NotApplicable;
    }
    let gh = globally_hyperbolic(sc).is_ok();
    if gh == !scan.has_timelike {
        Cfinal::Consistent
    } else {
        Cfinal::Counterexample
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamePastWitness {
    pub orient: Orient,
    pub first: usize,
    pub second: usize,
}

/// All catalog clusters projecting to the anchor (within pairing tolerance)
/// in one orientation must have tolerance-equal representatives. The witness
/// carries the two cluster indices.
pub fn same_past_check(sc: &SceneCompletion, ai: usize) -> Result<(), SamePastWitness> {
    use crate::tolerance::SetSpace;
    for (clusters, orient) in [(&sc.tips, Orient::Future), (&sc.tifs, Orient::Past)] {
        let here: Vec<usize> = clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.anchor
                    .is_some_and(|bi| sc.anchor_distance(ai, bi) <= 2.0 + 1e-9)
            })
            .map(|(ci, _)| ci)
            .collect();
        for (k, &a) in here.iter().enumerate() {
            for &b in &here[k + 1..] {
                if !sc.space.delta_equal(&clusters[a].rep, &clusters[b].rep) {
                    return Err(SamePastWitness { orient, first: a, second: b });
                }
            }
        }
    }
    Ok(())
}

/// Strong flags against the boundary tangent: a timelike smooth anchor is
/// strongly accessible both ways, a spacelike smooth anchor exactly one way.
pub fn c1_strong_flags_check(sc: &SceneCompletion) -> Result<(), usize> {
    for &ai in &sc.kept {
        let a = &sc.anchors[ai];
        if !a.c1 || !scanned(sc, ai) {
            continue;
        }
        let (sf, sp) = (sc.access[ai].strong_future, sc.access[ai].strong_past);
        let ok = match a.class {
            AnchorClass::Timelike => sf && sp,
            AnchorClass::Spacelike => sf != sp,
            _ => true,
        };
        if !ok {
            return Err(ai);
        }
    }
    Ok(())
}

/// Strong accessibility spreads along a smooth edge: anchors of the same
/// class on the same obstacle within two cells of a strongly accessible one
/// are strongly accessible too, whenever they are accessible at all.
pub fn strong_spread_check(sc: &SceneCompletion) -> Result<(), (usize, usize)> {
    for (ai, a) in sc.anchors.iter().enumerate() {
        if !a.c1 || on_window_frame(sc, ai) {
            continue;
        }
        for orient in [Orient::Future, Orient::Past] {
            if !strong(sc, ai, orient) {
                continue;
            }
            for (bi, b) in sc.anchors.iter().enumerate() {
                // too close to the frame for the straight prolongation that
                // the strong test demands
                if bi == ai
                    || !b.c1
                    || frame_margin_cells(sc, bi) <= 2.0 + 1e-9
                    || b.obstacle != a.obstacle
                    || b.class != a.class
                    || cells_between(sc, anchor_cells(sc, ai), anchor_cells(sc, bi)) > 2.0 + 1e-9
                {
                    continue;
                }
                if accessible(sc, bi, orient) && !strong(sc, bi, orient) {
                    return Err((ai, bi));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion2d::build_scene_completion;
    use crate::reach::{Reach, DEFAULT_MEM_BUDGET};
    use crate::scene::{build_grid, Scene};

    const HALFPLANE_X: &str = r#"{"name":"wall","coords":"xt",
        "window":{"u":[-2,2],"v":[-2,2]},
        "periodic_u":false,"resolution":33,"step_window":3,
        "obstacles":[{"kind":"polygon",
          "vertices":[[0,-2],[2,0],[0,2]]}],
        "orientation":"uv-future"}"#;

    const HALFPLANE_T: &str = r#"{"name":"cap","coords":"xt",
        "window":{"u":[-2,2],"v":[-2,2]},
        "periodic_u":false,"resolution":33,"step_window":3,
        "obstacles":[{"kind":"polygon",
          "vertices":[[-2,0],[2,0],[0,2]]}],
        "orientation":"uv-future"}"#;

    const NULLHALFPLANE_U: &str = r#"{"name":"nullhp","coords":"null",
        "window":{"u":[0,1],"v":[0,1]},
        "periodic_u":false,"resolution":33,"step_window":3,
        "obstacles":[{"kind":"polygon",
          "vertices":[[0.5,0],[1,0],[1,1],[0.5,1]]}],
        "orientation":"uv-future"}"#;

    fn scene(json: &str) -> (crate::scene::Grid, Reach) {
        let g = build_grid(Scene::from_json(json).unwrap()).unwrap();
        let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
        (g, rc)
    }

    #[test]
    fn wall_is_regularly_accessible_and_t1_holds() {
        let (g, rc) = scene(HALFPLANE_X);
        let sc = build_scene_completion(&g, &rc, 1.0, 0.002, 4.0).unwrap();
        let rep = regular_accessibility_report(&sc);
        assert!(rep.all_pass, "failing anchors: {:?}", rep.anchors);
        match thm_t1_pipeline(&sc, &[]) {
            T1Verdict::Report(r) => assert!(r.all_hold(), "{r:?}"),
            T1Verdict::Blocked { anchor } => panic!("blocked at {anchor}"),
        }
        let tame = tameness_check(&sc);
        assert!(tame.chron_tame && tame.causal_tame, "{tame:?}");
    }

    #[test]
    fn wall_timelike_points_make_cfinal_consistent() {
        let (g, rc) = scene(HALFPLANE_X);
        let sc = build_scene_completion(&g, &rc, 1.0, 0.002, 4.0).unwrap();
        let scan = timelike_point_scan(&sc);
        assert!(scan.has_timelike);
        assert_eq!(cfinal_check(&sc), Cfinal::Consistent);
        assert!(c1_strong_flags_check(&sc).is_ok());
    }

    #[test]
    fn spacelike_cap_is_consistent_and_one_sided() {
        let (g, rc) = scene(HALFPLANE_T);
        let sc = build_scene_completion(&g, &rc, 1.0, 0.002, 4.0).unwrap();
        let scan = timelike_point_scan(&sc);
        assert!(!scan.has_timelike);
        assert!(scan.all_c1, "witness: {:?}", scan.c1_witness);
        assert_eq!(scan.causal_tame, Some(true));
        assert_eq!(scan.two_sided_witness, None);
        assert_eq!(cfinal_check(&sc), Cfinal::Consistent);
        assert!(c1_strong_flags_check(&sc).is_ok());
    }

    #[test]
    fn null_edge_scene_passes_the_smooth_chain() {
        let (g, rc) = scene(NULLHALFPLANE_U);
        let sc = build_scene_completion(&g, &rc, 1.0, 0.002, 4.0).unwrap();
        let scan = timelike_point_scan(&sc);
        assert!(!scan.has_timelike && scan.all_c1);
        assert_eq!(scan.causal_tame, Some(true));
        assert_eq!(cfinal_check(&sc), Cfinal::Consistent);
        assert!(strong_spread_check(&sc).is_ok());
    }

    #[test]
    fn same_past_holds_on_single_cluster_anchors() {
        let (g, rc) = scene(HALFPLANE_X);
        let sc = build_scene_completion(&g, &rc, 1.0, 0.002, 4.0).unwrap();
        for &ai in &sc.kept {
            if sc.anchors[ai].class == AnchorClass::Timelike {
                assert!(same_past_check(&sc, ai).is_ok());
            }
        }
    }
}
