//! Grid reachability invariants: the exact Minkowski oracle on the empty
//! window, refinement monotonicity in resolution and step window, the
//! push-up law on obstacle-free scenes, arrival sets as past sets, and
//! accessibility of smooth boundary points.

use cb_core::anchor::{analyze_anchor, arrival_set, sample_anchors, Orient};
use cb_core::chronoset::EventChronology;
use cb_core::reach::{Reach, DEFAULT_MEM_BUDGET};
use cb_core::scene::{build_grid, Grid, Scene};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(json: &str) -> Grid {
    build_grid(Scene::from_json(json).unwrap()).unwrap()
}

fn empty(r: usize, k: usize) -> Grid {
    grid(&format!(
        r#"{{"name":"empty","coords":"null",
             "window":{{"u":[0,1],"v":[0,1]}},
             "periodic_u":false,"resolution":{r},"step_window":{k},
             "obstacles":[],"orientation":"uv-future"}}"#
    ))
}

#[test]
fn minkowski_oracle_on_random_pairs() {
    let g = empty(33, 3);
    let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = g.n() as u32;
    let k = 3i64;
    for _ in 0..1000 {
        let p = rng.gen_range(0..n);
        let q = rng.gen_range(0..n);
        let (pi, pj) = g.points[p as usize];
        let (qi, qj) = g.points[q as usize];
        let (di, dj) = (qi as i64 - pi as i64, qj as i64 - pj as i64);
        let expect = di >= 1 && dj >= 1 && di <= k * dj && dj <= k * di;
        assert_eq!(
            rc.relates(p, q),
            expect,
            "pair ({pi},{pj}) -> ({qi},{qj})"
        );
    }
}

#[test]
fn refinement_keeps_relations() {
    // doubling the resolution maps point (i,j) to (2i,2j); every relation
    // between persisting points must survive
    let coarse_json = |r: usize| {
        format!(
            r#"{{"name":"blk","coords":"null",
                 "window":{{"u":[0,1],"v":[0,1]}},
                 "periodic_u":false,"resolution":{r},"step_window":3,
                 "obstacles":[{{"kind":"polygon",
                   "vertices":[[0.375,0.25],[0.625,0.25],[0.625,0.75],[0.375,0.75]]}}],
                 "orientation":"uv-future"}}"#
        )
    };
    let g1 = grid(&coarse_json(17));
    let g2 = grid(&coarse_json(33));
    let r1 = Reach::build(&g1, DEFAULT_MEM_BUDGET).unwrap();
    let r2 = Reach::build(&g2, DEFAULT_MEM_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 400 {
        let p = rng.gen_range(0..g1.n() as u32);
        let q = rng.gen_range(0..g1.n() as u32);
        if !r1.relates(p, q) {
            continue;
        }
        let (pi, pj) = g1.points[p as usize];
        let (qi, qj) = g1.points[q as usize];
        let p2 = g2.id_at(2 * pi as usize, 2 * pj as usize).unwrap();
        let q2 = g2.id_at(2 * qi as usize, 2 * qj as usize).unwrap();
        assert!(r2.relates(p2, q2), "lost ({pi},{pj}) << ({qi},{qj})");
        checked += 1;
    }
    // widening the step window only adds edges
    let r3 = Reach::build(&empty(17, 2), DEFAULT_MEM_BUDGET).unwrap();
    let r4 = Reach::build(&empty(17, 4), DEFAULT_MEM_BUDGET).unwrap();
    for p in 0..r3.n() as u32 {
        assert!(r3.future_of(p).is_subset(&r4.future_of(p)));
    }
}

#[test]
fn push_up_on_obstacle_free_scene() {
    let g = empty(17, 3);
    let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = g.n() as u32;
    // a chronological step at the edge of the slope window followed by a
    // null causal step can exit the representable cone, so the law is
    // asserted whenever the composite displacement stays inside it
    let in_cone = |p: u32, r: u32| {
        let (pi, pj) = g.points[p as usize];
        let (ri, rj) = g.points[r as usize];
        let (di, dj) = (ri as i64 - pi as i64, rj as i64 - pj as i64);
        di >= 1 && dj >= 1 && di <= 3 * dj && dj <= 3 * di
    };
    for _ in 0..2000 {
        let p = rng.gen_range(0..n);
        let q = rng.gen_range(0..n);
        let r = rng.gen_range(0..n);
        if rc.relates(p, q) && rc.causal_relates(q, r) && in_cone(p, r) {
            assert!(rc.relates(p, r), "chron then causal must stay chron");
        }
        if rc.causal_relates(p, q) && rc.relates(q, r) && in_cone(p, r) {
            assert!(rc.relates(p, r), "causal then chron must stay chron");
        }
    }
}

#[test]
fn arrival_sets_are_past_sets() {
    let g = grid(
        r#"{"name":"slit","coords":"null",
            "window":{"u":[0,1],"v":[0,1]},
            "periodic_u":false,"resolution":33,"step_window":3,
            "obstacles":[{"kind":"segment","endpoints":[[0.25,0.5],[0.75,0.5]]}],
            "orientation":"uv-future"}"#,
    );
    let rc = Reach::build(&g, DEFAULT_MEM_BUDGET).unwrap();
    for (i, a) in sample_anchors(&g).iter().enumerate() {
        if i % 7 != 0 {
            continue;
        }
        let fut = arrival_set(&g, &rc, a, Orient::Future);
        assert!(rc.past_of_set(&fut).is_subset(&fut));
        let past = arrival_set(&g, &rc, a, Orient::Past);
        assert!(rc.future_of_set(&past).is_subset(&past));
    }
}

#[test]
fn smooth_boundary_points_are_accessible() {
    // every one-sided smooth edge point sees the spacetime from its future
    // or its past
    for json in [
        r#"{"name":"blk","coords":"null",
            "window":{"u":[0,1],"v":[0,1]},
            "periodic_u":false,"resolution":33,"step_window":3,
            "obstacles":[{"kind":"polygon",
              "vertices":[[0.375,0.25],[0.625,0.25],[0.625,0.75],[0.375,0.75]]}],
            "orientation":"uv-future"}"#,
        r#"{"name":"tri","coords":"xt",
            "window":{"u":[-2,2],"v":[-2,2]},
            "periodic_u":false,"resolution":33,"step_window":3,
            "obstacles":[{"kind":"polygon",
              "vertices":[[0,-1.6],[1.6,0],[0,1.6]]}],
            "orientation":"uv-future"}"#,
    ] {
        let g = grid(json);
        for a in sample_anchors(&g).iter().filter(|a| a.c1) {
            let acc = analyze_anchor(&g, a, 4.0);
            assert!(
                acc.future_accessible || acc.past_accessible,
                "anchor at {:?} unreachable", a.pos
            );
        }
    }
}
