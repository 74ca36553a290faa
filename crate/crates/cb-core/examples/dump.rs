//! Development dump: prints the full verdict surface for one corpus entry.
//!
//!     cargo run -p cb-core --example dump -- <name> [resolution]

use cb_core::completion2d::{
    build_scene_completion, chron_completeness_check, cross_check_gh, estarc_check,
    globally_hyperbolic, pi_maps, properly_causal_verdict, rev_invariant_suite,
    seq_compact_probe,
};
use cb_core::conformal::{cfinal_check, tameness_check, thm_t1_pipeline, T1Verdict};
use cb_core::corpus;
use cb_core::limits::Chr;
use cb_core::pairs::PairRef;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(String::as_str).unwrap_or("diamond");
    let resolution: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(129);
    let (grid, reach) = corpus::build(name, resolution, 512 << 20).expect("build");
    let sc = build_scene_completion(&grid, &reach, 1.0, 0.002, 4.0).expect("completion");
    let ctx = sc.ctx();

    println!("== {name} r={resolution} cells={} points={}", grid.scene.cells(), grid.points.len());
    println!("pairs: {}", sc.comp.pairs.len());
    for (bi, pr) in sc.comp.pairs.iter().enumerate() {
        let pos = sc.position_cells(PairRef::Boundary(bi as u32));
        let pc = pr.p.map(|i| sc.tips[i as usize].rep.count());
        let fc = pr.f.map(|j| sc.tifs[j as usize].rep.count());
        println!(
            "  pair {bi}: anchor=({:.1},{:.1}) P={:?} F={:?}",
            pos.0, pos.1, pc, fc
        );
    }
    println!("globally_hyperbolic: {:?}", globally_hyperbolic(&sc));
    println!("cross_check_gh: {:?}", cross_check_gh(&sc));
    println!("estarc: {:?}", estarc_check(&sc));
    println!("pi: {:?}", pi_maps(&sc));
    println!("properly_causal: {:?}", properly_causal_verdict(&sc));
    println!("chron_complete: {:?}", chron_completeness_check(&sc));
    match thm_t1_pipeline(&sc, &[]) {
        T1Verdict::Blocked { anchor } => println!("t1: blocked at anchor {anchor}"),
        T1Verdict::Report(r) => println!("t1: {:?}", r),
    }
    println!("cfinal: {}", cfinal_check(&sc).as_str());
    let tame = tameness_check(&sc);
    println!(
        "tameness: chron={} causal={} cw={:?} xw={:?}",
        tame.chron_tame, tame.causal_tame, tame.chron_witnesses, tame.causal_witnesses
    );
    println!("rev: {:?}", rev_invariant_suite(&sc));

    for d in corpus::designated(name, &sc) {
        println!("-- sequence {:?} len={} target={:?}", d.name, d.seq.len(), d.target);
        for &m in &d.seq {
            let p = sc.position_cells(m);
            print!(" ({:.0},{:.0})", p.0, p.1);
        }
        println!();
        if d.seq.is_empty() {
            continue;
        }
        let Some(t) = d.target else { continue };
        let tp = sc.position_cells(t);
        println!("   target pos=({:.1},{:.1})", tp.0, tp.1);
        println!("   chr: {:?}", ctx.chr_converges(&d.seq, t));
        println!("   ceat: {:?}", ctx.ceat_converges(&d.seq, t));
        println!("   a2: {:?}", ctx.a2_check(&d.seq, t));
        // which boundary pairs the sequence converges to under chr
        for bi in 0..sc.comp.pairs.len() {
            let r = PairRef::Boundary(bi as u32);
            if ctx.chr_converges(&d.seq, r) == Chr::Yes {
                let p = sc.position_cells(r);
                println!("   chr-limit: pair {bi} at ({:.1},{:.1})", p.0, p.1);
            }
        }
        if name == "esequent" {
            match seq_compact_probe(&sc, t, &[d.seq.clone()]) {
                cb_core::completion2d::CompactProbe::CompactNeighborhoodFound => {
                    println!("   compact: neighborhood found")
                }
                cb_core::completion2d::CompactProbe::CounterexampleSequence { sequence } => {
                    println!("   compact: counterexample seq {sequence}")
                }
            }
        }
    }
}
