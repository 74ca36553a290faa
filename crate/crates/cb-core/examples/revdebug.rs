//! Development aid: replay the invariant suite verbosely for one entry.

use cb_core::completion2d::{
    build_scene_completion, candidate_limits, chain_seed, deep_events, generating_chain,
};
use cb_core::anchor::Orient;
use cb_core::corpus;
use cb_core::pairs::PairRef;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(String::as_str).unwrap_or("fig1a");
    let resolution: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(129);
    let (grid, reach) = corpus::build(name, resolution, 512 << 20).expect("build");
    let sc = build_scene_completion(&grid, &reach, 1.0, 0.002, 4.0).expect("completion");
    let ctx = sc.ctx();

    let deep = deep_events(&grid, 7, 24);
    println!("deep events:");
    for &e in &deep {
        let (i, j) = grid.points[e as usize];
        print!(" {e}=({i},{j})");
    }
    println!();

    for (clusters, orient, tag) in [
        (&sc.tips, Orient::Future, "tip"),
        (&sc.tifs, Orient::Past, "tif"),
    ] {
        for (ci, c) in clusters.iter().enumerate() {
            let chain = generating_chain(&sc, chain_seed(&sc, c), orient);
            if chain.len() < 2 {
                continue;
            }
            let cands = candidate_limits(&sc, &chain);
            let hit = cands.iter().any(|&cand| ctx.limit_operator(&chain, cand));
            if !hit {
                let pts: Vec<(u32, u32)> = chain
                    .iter()
                    .map(|&m| match m {
                        PairRef::Event(x) => grid.points[x as usize],
                        _ => (0, 0),
                    })
                    .collect();
                println!(
                    "{tag} {ci} members[0]={} anchor_cells={:?} chain={:?} NO LIMIT",
                    c.members[0],
                    c.anchor.map(|ai| {
                        let p = sc.anchors[ai].pos;
                        (p[0] / 720720, p[1] / 720720)
                    }),
                    pts
                );
            }
        }
    }

    if let Some(arg) = args.get(3) {
        // detailed trace of one cluster's chain: `revdebug <name> <res> tif:<idx>`
        let (is_tif, ci): (bool, usize) = {
            let (tag, num) = arg.split_once(':').unwrap();
            (tag == "tif", num.parse().unwrap())
        };
        let (c, orient) = if is_tif {
            (&sc.tifs[ci], Orient::Past)
        } else {
            (&sc.tips[ci], Orient::Future)
        };
        let chain = generating_chain(&sc, chain_seed(&sc, c), orient);
        use cb_core::limits::li_ls;
        let n = grid.n();
        let p_comps: Vec<_> = chain
            .iter()
            .map(|&m| sc.comp.p_component(m, sc.reach))
            .collect();
        let f_comps: Vec<_> = chain
            .iter()
            .map(|&m| sc.comp.f_component(m, sc.reach))
            .collect();
        let (pli, pls) = li_ls(n, &p_comps);
        let (fli, fls) = li_ls(n, &f_comps);
        println!(
            "chain tail: pli={} pls={} fli={} fls={}",
            pli.count(),
            pls.count(),
            fli.count(),
            fls.count()
        );
        use cb_core::tolerance::SetSpace;
        for cand in candidate_limits(&sc, &chain) {
            let ok = ctx.limit_operator(&chain, cand);
            let pc = sc.comp.p_component(cand, sc.reach);
            let fc = sc.comp.f_component(cand, sc.reach);
            let p_in = pc
                .as_ref()
                .map(|p| p.difference(&sc.space.dilate(&pli)).count());
            let f_in = fc
                .as_ref()
                .map(|f| f.difference(&sc.space.dilate(&fli)).count());
            let pos = sc.position_cells(cand);
            if p_in.unwrap_or(0) + f_in.unwrap_or(0) < 40 {
                println!(
                    "cand {:?}@({:.0},{:.0}) ok={} |P\\dilLI|={:?} |F\\dilLI|={:?}",
                    cand, pos.0, pos.1, ok, p_in, f_in
                );
            }
        }
        return;
    }

    let mut points: Vec<PairRef> = (0..sc.comp.pairs.len())
        .map(|b| PairRef::Boundary(b as u32))
        .collect();
    points.extend(deep.iter().map(|&x| PairRef::Event(x)));
    for &a in &points {
        for &b in &points {
            if a == b {
                continue;
            }
            let seq = [a];
            if ctx.limit_operator(&seq, b) {
                let pa = sc.position_cells(a);
                let pb = sc.position_cells(b);
                println!(
                    "t1 violation: {:?}@({:.0},{:.0}) -> {:?}@({:.0},{:.0})",
                    a, pa.0, pa.1, b, pb.0, pb.1
                );
            }
        }
    }
}
