//! Property tests for the finite chronology layer: the structural
//! indecomposable-set enumeration against the exhaustive oracle, role
//! symmetry of the pairing, and the axioms of the extended chronology on
//! assembled completions.

use cb_core::bitset::EventSet;
use cb_core::chronoset::{
    enumerate_ifs_brute_force, enumerate_ifs_structural, enumerate_ips_brute_force,
    enumerate_ips_structural, transitive_close, ChronSet, EventChronology,
};
use cb_core::limits::{Chr, LimitCtx};
use cb_core::pairs::{mr_completion, s_related, Completion, IndecompSet, Orientation, PairRef};
use cb_core::tolerance::ExactSpace;
use proptest::prelude::*;

/// Random transitive antireflexive isolate-free relation on up to 9 elements.
fn chronset_strategy() -> impl Strategy<Value = ChronSet> {
    (2usize..=9)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(proptest::bool::weighted(0.35), n * n),
            )
        })
        .prop_filter_map("isolate-free transitive relation", |(n, bits)| {
            let mut rel = vec![vec![false; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    // upper-triangular seed guarantees acyclicity
                    rel[i][j] = bits[i * n + j];
                }
            }
            transitive_close(&mut rel);
            ChronSet::from_matrix(&rel).ok()
        })
}

fn sorted_families(sets: &[EventSet]) -> Vec<Vec<u32>> {
    let mut fams: Vec<Vec<u32>> = sets.iter().map(|s| s.iter().collect()).collect();
    fams.sort();
    fams
}

/// Terminal catalogs of a finite model: inclusive pasts of future-maximal
/// elements and inclusive futures of past-minimal elements.
fn terminal_catalogs(cs: &ChronSet) -> (Vec<IndecompSet>, Vec<IndecompSet>) {
    let n = cs.n();
    let mut ips = Vec::new();
    let mut ifs = Vec::new();
    for x in 0..n as u32 {
        if cs.future_of(x).is_empty() {
            ips.push(cs.dpast(x));
        }
        if cs.past_of(x).is_empty() {
            ifs.push(cs.dfuture(x));
        }
    }
    let ips = cb_core::chronoset::dedup_sets(ips)
        .into_iter()
        .map(|s| IndecompSet::new(Orientation::Past, s, true))
        .collect();
    let ifs = cb_core::chronoset::dedup_sets(ifs)
        .into_iter()
        .map(|s| IndecompSet::new(Orientation::Future, s, true))
        .collect();
    (ips, ifs)
}

fn build(cs: &ChronSet) -> (Completion, ExactSpace) {
    let sp = ExactSpace { n: cs.n() };
    let (ips, ifs) = terminal_catalogs(cs);
    (mr_completion(ips, ifs, cs, &sp).unwrap(), sp)
}

fn all_refs(cs: &ChronSet, comp: &Completion) -> Vec<PairRef> {
    let mut refs: Vec<PairRef> = (0..cs.n() as u32).map(PairRef::Event).collect();
    refs.extend(comp.boundary_refs());
    refs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn oracle_equivalence(cs in chronset_strategy()) {
        let structural = sorted_families(&enumerate_ips_structural(&cs));
        let brute = sorted_families(&enumerate_ips_brute_force(&cs).unwrap());
        prop_assert_eq!(structural, brute);
        let structural = sorted_families(&enumerate_ifs_structural(&cs));
        let brute = sorted_families(&enumerate_ifs_brute_force(&cs).unwrap());
        prop_assert_eq!(structural, brute);
    }

    #[test]
    fn s_relation_role_symmetry(cs in chronset_strategy()) {
        let (comp, sp) = build(&cs);
        // time reversal transposes the relation and exchanges the catalogs;
        // the pairing table must transpose with it
        let n = cs.n();
        let mut rev = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                rev[j][i] = cs.relates(i as u32, j as u32);
            }
        }
        let rcs = ChronSet::from_matrix(&rev).unwrap();
        let (rcomp, rsp) = build(&rcs);
        // dedup preserves first-seen order and the scans mirror each other,
        // so catalog indices line up across the reversal
        prop_assert_eq!(comp.ips.len(), rcomp.ifs.len());
        prop_assert_eq!(comp.ifs.len(), rcomp.ips.len());
        for i in 0..comp.ips.len() {
            for j in 0..comp.ifs.len() {
                let forward = s_related(Some(i), Some(j), &comp, &sp);
                let mirrored = s_related(Some(j), Some(i), &rcomp, &rsp);
                prop_assert_eq!(forward, mirrored);
            }
        }
    }

    #[test]
    fn ext_chron_axioms(cs in chronset_strategy()) {
        let (comp, _sp) = build(&cs);
        let refs = all_refs(&cs, &comp);
        for &a in &refs {
            prop_assert!(!comp.ext_chron(a, a, &cs));
            for &b in &refs {
                if !comp.ext_chron(a, b, &cs) {
                    continue;
                }
                for &c in &refs {
                    if comp.ext_chron(b, c, &cs) {
                        prop_assert!(comp.ext_chron(a, c, &cs));
                    }
                }
            }
        }
    }

    #[test]
    fn ext_chron_factorizes_through_events(cs in chronset_strategy()) {
        let (comp, _sp) = build(&cs);
        let refs = all_refs(&cs, &comp);
        for &a in &refs {
            for &b in &refs {
                if !comp.ext_chron(a, b, &cs) {
                    continue;
                }
                let fa = comp.f_component(a, &cs).unwrap();
                let pb = comp.p_component(b, &cs).unwrap();
                let mid = fa.intersection(&pb);
                prop_assert!(!mid.is_empty());
                let p = mid.first().unwrap();
                let e = PairRef::Event(p);
                prop_assert!(e == a || comp.ext_chron(a, e, &cs));
                prop_assert!(e == b || comp.ext_chron(e, b, &cs));
            }
        }
    }

    #[test]
    fn completeness_every_terminal_in_some_pair(cs in chronset_strategy()) {
        let (comp, _sp) = build(&cs);
        for i in 0..comp.ips.len() as u32 {
            prop_assert!(comp.pairs.iter().any(|pr| pr.p == Some(i)));
        }
        for j in 0..comp.ifs.len() as u32 {
            prop_assert!(comp.pairs.iter().any(|pr| pr.f == Some(j)));
        }
        prop_assert!(comp.admissible_chronology_check(&cs).is_ok());
    }

    #[test]
    fn convergence_invariants_on_random_sequences(
        cs in chronset_strategy(),
        picks in proptest::collection::vec(0usize..64, 1..7),
    ) {
        let (comp, sp) = build(&cs);
        let ctx = LimitCtx::new(&cs, &sp, &comp);
        let refs = all_refs(&cs, &comp);
        let seq: Vec<PairRef> = picks.iter().map(|&k| refs[k % refs.len()]).collect();
        for &cand in &refs {
            let in_l = ctx.limit_operator(&seq, cand);
            let ceat = ctx.ceat_converges(&seq, cand);
            // membership in L forces the inclusion-only convergence
            if in_l {
                prop_assert!(ceat);
                prop_assert_eq!(ctx.chr_converges(&seq, cand), Chr::Yes);
            }
            // double-nonempty mutually maximal candidates: inclusion-only
            // convergence already settles membership in L
            if let PairRef::Boundary(bi) = cand {
                let pr = comp.pairs[bi as usize];
                if let (Some(_), Some(_)) = (pr.p, pr.f) {
                    prop_assert_eq!(ceat, in_l);
                    if ceat {
                        prop_assert_eq!(ctx.chr_converges(&seq, cand), Chr::Yes);
                    }
                }
            }
        }
    }
}
