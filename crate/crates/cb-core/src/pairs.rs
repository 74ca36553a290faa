//! Boundary pairs and completions: the mutual-maximality pairing between
//! indecomposable past and future sets, assembly of the completion as a
//! point set, and the extended chronology between pairs.

use crate::bitset::EventSet;
use crate::chronoset::{dedup_sets, EventChronology};
use crate::tolerance::SetSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Past,
    Future,
}

/// An indecomposable past or future set, possibly terminal, possibly tied to
/// a boundary anchor position (null coordinates).
#[derive(Clone, Debug)]
pub struct IndecompSet {
    pub orientation: Orientation,
    pub members: EventSet,
    pub terminal: bool,
    pub anchor: Option<[f64; 2]>,
}

impl IndecompSet {
    pub fn new(orientation: Orientation, members: EventSet, terminal: bool) -> Self {
        IndecompSet { orientation, members, terminal, anchor: None }
    }

    pub fn with_anchor(mut self, anchor: [f64; 2]) -> Self {
        self.anchor = Some(anchor);
        self
    }
}

/// A boundary pair: indices into the completion's catalogs, either side
/// possibly absent (never both).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryPair {
    pub p: Option<u32>,
    pub f: Option<u32>,
}

/// Reference to a completion point: an interior event or a boundary pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairRef {
    Event(u32),
    Boundary(u32),
}

#[derive(Debug)]
pub enum CompletionError {
    DuplicateCatalogSets { orientation: Orientation },
}

/// The completion as a point set: catalogs of terminal indecomposable sets
/// and the list of paired boundary points. Interior events enter through the
/// chronology backend, one pair (D^-(p), D^+(p)) per event.
pub struct Completion {
    pub ips: Vec<IndecompSet>,
    pub ifs: Vec<IndecompSet>,
    pub pairs: Vec<BoundaryPair>,
    /// Common future of each ip catalog member.
    pub ups: Vec<EventSet>,
    /// Common past of each if catalog member.
    pub downs: Vec<EventSet>,
}

/// Mutual maximality between a nonempty IP and a nonempty IF, quantified over
/// the supplied catalogs: F within the common future of P and maximal there,
/// and symmetrically.
pub fn s_related_nonempty(
    p: &EventSet,
    f: &EventSet,
    up_p: &EventSet,
    down_f: &EventSet,
    ip_catalog: &[IndecompSet],
    if_catalog: &[IndecompSet],
    space: &dyn SetSpace,
) -> bool {
    if !space.within(f, up_p) || !space.within(p, down_f) {
        return false;
    }
    let dil_up = space.dilate(up_p);
    for cand in if_catalog {
        if cand.members.is_subset(&dil_up) && space.proper_sub(f, &cand.members) {
            return false;
        }
    }
    let dil_down = space.dilate(down_f);
    for cand in ip_catalog {
        if cand.members.is_subset(&dil_down) && space.proper_sub(p, &cand.members) {
            return false;
        }
    }
    true
}

/// Full pairing predicate including the empty-side conventions: a terminal
/// set pairs with the empty set exactly when no catalog partner satisfies
/// mutual maximality with it; the empty set is never paired with itself.
pub fn s_related(
    p: Option<usize>,
    f: Option<usize>,
    comp: &Completion,
    space: &dyn SetSpace,
) -> bool {
    match (p, f) {
        (Some(i), Some(j)) => s_related_nonempty(
            &comp.ips[i].members,
            &comp.ifs[j].members,
            &comp.ups[i],
            &comp.downs[j],
            &comp.ips,
            &comp.ifs,
            space,
        ),
        (Some(i), None) => {
            comp.ips[i].terminal
                && (0..comp.ifs.len()).all(|j| !s_related(Some(i), Some(j), comp, space))
        }
        (None, Some(j)) => {
            comp.ifs[j].terminal
                && (0..comp.ips.len()).all(|i| !s_related(Some(i), Some(j), comp, space))
        }
        (None, None) => false,
    }
}

/// Assemble the completion from deduplicated terminal catalogs: all mutually
/// maximal pairs, plus one-sided pairs for terminal sets with no partner.
/// Every terminal catalog member appears in some pair by construction.
pub fn mr_completion(
    ips: Vec<IndecompSet>,
    ifs: Vec<IndecompSet>,
    chron: &dyn EventChronology,
    space: &dyn SetSpace,
) -> Result<Completion, CompletionError> {
    let ip_sets: Vec<EventSet> = ips.iter().map(|s| s.members.clone()).collect();
    let if_sets: Vec<EventSet> = ifs.iter().map(|s| s.members.clone()).collect();
    if dedup_sets(ip_sets.clone()).len() != ip_sets.len() {
        return Err(CompletionError::DuplicateCatalogSets { orientation: Orientation::Past });
    }
    if dedup_sets(if_sets.clone()).len() != if_sets.len() {
        return Err(CompletionError::DuplicateCatalogSets { orientation: Orientation::Future });
    }
    let ups: Vec<EventSet> = ip_sets.iter().map(|s| chron.future_hull(s)).collect();
    let downs: Vec<EventSet> = if_sets.iter().map(|s| chron.past_hull(s)).collect();
    let mut comp = Completion { ips, ifs, pairs: Vec::new(), ups, downs };

    let mut paired_p = vec![false; comp.ips.len()];
    let mut paired_f = vec![false; comp.ifs.len()];
    for i in 0..comp.ips.len() {
        for j in 0..comp.ifs.len() {
            if s_related(Some(i), Some(j), &comp, space) {
                comp.pairs.push(BoundaryPair { p: Some(i as u32), f: Some(j as u32) });
                paired_p[i] = true;
                paired_f[j] = true;
            }
        }
    }
    for i in 0..comp.ips.len() {
        if !paired_p[i] && comp.ips[i].terminal {
            comp.pairs.push(BoundaryPair { p: Some(i as u32), f: None });
        }
    }
    for j in 0..comp.ifs.len() {
        if !paired_f[j] && comp.ifs[j].terminal {
            comp.pairs.push(BoundaryPair { p: None, f: Some(j as u32) });
        }
    }
    Ok(comp)
}

impl Completion {
    pub fn boundary_refs(&self) -> impl Iterator<Item = PairRef> + '_ {
        (0..self.pairs.len()).map(|i| PairRef::Boundary(i as u32))
    }

    /// Past component of a completion point; events use the inclusive past.
    pub fn p_component(&self, r: PairRef, chron: &dyn EventChronology) -> Option<EventSet> {
        match r {
            PairRef::Event(x) => Some(chron.dpast(x)),
            PairRef::Boundary(b) => {
                self.pairs[b as usize].p.map(|i| self.ips[i as usize].members.clone())
            }
        }
    }

    pub fn f_component(&self, r: PairRef, chron: &dyn EventChronology) -> Option<EventSet> {
        match r {
            PairRef::Event(x) => Some(chron.dfuture(x)),
            PairRef::Boundary(b) => {
                self.pairs[b as usize].f.map(|j| self.ifs[j as usize].members.clone())
            }
        }
    }

    pub fn anchor_of(&self, r: PairRef) -> Option<[f64; 2]> {
        match r {
            PairRef::Event(_) => None,
            PairRef::Boundary(b) => {
                let pair = &self.pairs[b as usize];
                pair.p
                    .and_then(|i| self.ips[i as usize].anchor)
                    .or_else(|| pair.f.and_then(|j| self.ifs[j as usize].anchor))
            }
        }
    }

    /// Extended chronology: the future component of `a` meets the past
    /// component of `b`. Identical points are never related.
    pub fn ext_chron(&self, a: PairRef, b: PairRef, chron: &dyn EventChronology) -> bool {
        if a == b {
            return false;
        }
        match (self.f_component(a, chron), self.p_component(b, chron)) {
            (Some(fa), Some(pb)) => fa.intersects(&pb),
            _ => false,
        }
    }

    /// The chronology invariant of the completion: every pair component is a
    /// past (resp. future) set, which is exactly the condition for the set of
    /// events strictly below a pair under the extended chronology to equal
    /// its past component. Returns the first failing pair.
    pub fn admissible_chronology_check(
        &self,
        chron: &dyn EventChronology,
    ) -> Result<(), PairRef> {
        for (bi, pair) in self.pairs.iter().enumerate() {
            if let Some(i) = pair.p {
                let p = &self.ips[i as usize].members;
                if !chron.past_of_set(p).is_subset(p) {
                    return Err(PairRef::Boundary(bi as u32));
                }
            }
            if let Some(j) = pair.f {
                let f = &self.ifs[j as usize].members;
                if !chron.future_of_set(f).is_subset(f) {
                    return Err(PairRef::Boundary(bi as u32));
                }
            }
            if let (Some(i), Some(j)) = (pair.p, pair.f) {
                if self.ips[i as usize].members.intersects(&self.ifs[j as usize].members) {
                    return Err(PairRef::Boundary(bi as u32));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chronoset::ChronSet;
    use crate::tolerance::ExactSpace;

    fn chain3() -> ChronSet {
        ChronSet::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap()
    }

    fn terminal(o: Orientation, n: usize, idx: &[u32]) -> IndecompSet {
        IndecompSet::new(o, EventSet::from_indices(n, idx), true)
    }

    #[test]
    fn interior_event_pair_is_s_related() {
        // model the event pair of element 1 in the chain through the catalogs
        let cs = chain3();
        let sp = ExactSpace { n: 3 };
        let ips = vec![terminal(Orientation::Past, 3, &[0, 1])];
        let ifs = vec![terminal(Orientation::Future, 3, &[1, 2])];
        let comp = mr_completion(ips, ifs, &cs, &sp).unwrap();
        assert_eq!(
            comp.pairs,
            vec![BoundaryPair { p: Some(0), f: Some(0) }]
        );
    }

    #[test]
    fn terminal_without_partner_pairs_with_empty() {
        let cs = chain3();
        let sp = ExactSpace { n: 3 };
        // the full past has no catalog partner: it pairs with the empty set
        let ips = vec![terminal(Orientation::Past, 3, &[0, 1, 2])];
        let comp = mr_completion(ips, vec![], &cs, &sp).unwrap();
        assert_eq!(comp.pairs, vec![BoundaryPair { p: Some(0), f: None }]);
        // strict common future of the full past is empty
        assert!(cs.common_future(&comp.ips[0].members).is_empty());
    }

    #[test]
    fn empty_catalogs_give_empty_boundary() {
        let cs = chain3();
        let sp = ExactSpace { n: 3 };
        let comp = mr_completion(vec![], vec![], &cs, &sp).unwrap();
        assert!(comp.pairs.is_empty());
    }

    #[test]
    fn duplicate_catalogs_rejected() {
        let cs = chain3();
        let sp = ExactSpace { n: 3 };
        let ips = vec![
            terminal(Orientation::Past, 3, &[0]),
            terminal(Orientation::Past, 3, &[0]),
        ];
        assert!(mr_completion(ips, vec![], &cs, &sp).is_err());
    }

    #[test]
    fn ext_chron_on_events_matches_chronology() {
        let cs = chain3();
        let sp = ExactSpace { n: 3 };
        let comp = mr_completion(vec![], vec![], &cs, &sp).unwrap();
        assert!(comp.ext_chron(PairRef::Event(0), PairRef::Event(1), &cs));
        assert!(comp.ext_chron(PairRef::Event(0), PairRef::Event(2), &cs));
        assert!(!comp.ext_chron(PairRef::Event(1), PairRef::Event(0), &cs));
        assert!(!comp.ext_chron(PairRef::Event(1), PairRef::Event(1), &cs));
    }

    #[test]
    fn admissibility_holds_and_negative_control_fails() {
        let cs = chain3();
        let sp = ExactSpace { n: 3 };
        let ips = vec![terminal(Orientation::Past, 3, &[0, 1, 2])];
        let mut comp = mr_completion(ips, vec![], &cs, &sp).unwrap();
        assert!(comp.admissible_chronology_check(&cs).is_ok());
        // corrupt the catalog: {1} is not a past set (0 << 1 but 0 missing)
        comp.ips[0].members = EventSet::from_indices(3, &[1]);
        assert!(comp.admissible_chronology_check(&cs).is_err());
    }
}
