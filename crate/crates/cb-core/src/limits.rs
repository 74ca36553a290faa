//! Sequence convergence in completions: the limit operator over inferior and
//! superior set limits, the coarse inclusion-only convergence, the derived
//! three-valued convergence verdict, sub-basis separation, and the
//! completion-wide probes built on them.

use crate::bitset::EventSet;
use crate::chronoset::EventChronology;
use crate::pairs::{Completion, PairRef};
use crate::tolerance::SetSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chr {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separation {
    Separated { family: usize },
    NotSeparatedBySubbasis,
}

#[derive(Clone, Copy, Debug)]
pub struct LimitVerdict {
    pub in_l: bool,
    pub ceat: bool,
    pub chr: Chr,
    pub mr_separated: Separation,
}

/// Shared evaluation context: chronology backend, tolerance space, completion
/// catalogs, plus cached dilations of the catalog sets.
pub struct LimitCtx<'a> {
    pub chron: &'a dyn EventChronology,
    pub space: &'a dyn SetSpace,
    pub comp: &'a Completion,
    dil_ips: Vec<EventSet>,
    dil_ifs: Vec<EventSet>,
}

/// Inferior and superior limits of a finite list of sets: intersection and
/// union over the last half (rounded up) of the terms. Absent components
/// count as empty sets.
pub fn li_ls(n_universe: usize, comps: &[Option<EventSet>]) -> (EventSet, EventSet) {
    let len = comps.len();
    let start = len - len.div_ceil(2);
    let mut li = EventSet::full(n_universe);
    let mut ls = EventSet::new(n_universe);
    if len == 0 {
        return (EventSet::new(n_universe), ls);
    }
    for c in &comps[start..] {
        match c {
            Some(s) => {
                li.intersect_with(s);
                ls.union_with(s);
            }
            None => li.clear(),
        }
    }
    (li, ls)
}

impl<'a> LimitCtx<'a> {
    pub fn new(
        chron: &'a dyn EventChronology,
        space: &'a dyn SetSpace,
        comp: &'a Completion,
    ) -> Self {
        let dil_ips: Vec<EventSet> =
            comp.ips.iter().map(|s| space.dilate(&s.members)).collect();
        let dil_ifs: Vec<EventSet> =
            comp.ifs.iter().map(|s| space.dilate(&s.members)).collect();
        LimitCtx { chron, space, comp, dil_ips, dil_ifs }
    }

    pub fn n(&self) -> usize {
        self.chron.n()
    }

    pub fn p_comps(&self, seq: &[PairRef]) -> Vec<Option<EventSet>> {
        seq.iter().map(|&r| self.comp.p_component(r, self.chron)).collect()
    }

    pub fn f_comps(&self, seq: &[PairRef]) -> Vec<Option<EventSet>> {
        seq.iter().map(|&r| self.comp.f_component(r, self.chron)).collect()
    }

    /// No catalog IP within the superior limit strictly exceeds `p`.
    fn p_maximal(&self, p: &EventSet, dil_p: &EventSet, dil_ls: &EventSet) -> bool {
        let margin = self.space.strict_margin();
        for (q, dil_q) in self.comp.ips.iter().zip(&self.dil_ips) {
            if q.members.is_subset(dil_ls)
                && p.is_subset(dil_q)
                && self.space.area(&q.members.difference(dil_p)) >= margin
            {
                return false;
            }
        }
        true
    }

    fn f_maximal(&self, f: &EventSet, dil_f: &EventSet, dil_ls: &EventSet) -> bool {
        let margin = self.space.strict_margin();
        for (g, dil_g) in self.comp.ifs.iter().zip(&self.dil_ifs) {
            if g.members.is_subset(dil_ls)
                && f.is_subset(dil_g)
                && self.space.area(&g.members.difference(dil_f)) >= margin
            {
                return false;
            }
        }
        true
    }

    /// Some tail component of the sequence itself strictly exceeds the
    /// candidate component. Tail components are indecomposable sets inside
    /// the superior limit by construction, so they compete for maximality
    /// even when the catalog has no anchor at their position.
    fn tail_exceeds(&self, comps: &[Option<EventSet>], dil_c: &EventSet) -> bool {
        let margin = self.space.strict_margin();
        let start = comps.len() - comps.len().div_ceil(2);
        comps[start..]
            .iter()
            .flatten()
            .any(|t| self.space.area(&t.difference(dil_c)) >= margin)
    }

    fn limit_operator_on(
        &self,
        p_comps: &[Option<EventSet>],
        f_comps: &[Option<EventSet>],
        cand: PairRef,
    ) -> bool {
        let n = self.n();
        if let Some(p) = self.comp.p_component(cand, self.chron) {
            let (li, ls) = li_ls(n, p_comps);
            if !p.is_subset(&self.space.dilate(&li)) {
                return false;
            }
            let dil_ls = self.space.dilate(&ls);
            let dil_p = self.space.dilate(&p);
            if !self.p_maximal(&p, &dil_p, &dil_ls) || self.tail_exceeds(p_comps, &dil_p) {
                return false;
            }
        }
        if let Some(f) = self.comp.f_component(cand, self.chron) {
            let (li, ls) = li_ls(n, f_comps);
            if !f.is_subset(&self.space.dilate(&li)) {
                return false;
            }
            let dil_ls = self.space.dilate(&ls);
            let dil_f = self.space.dilate(&f);
            if !self.f_maximal(&f, &dil_f, &dil_ls) || self.tail_exceeds(f_comps, &dil_f) {
                return false;
            }
        }
        true
    }

    /// Membership of `cand` in L(seq): each nonempty component sits inside
    /// the inferior limit (up to delta) and is maximal among catalog sets
    /// inside the superior limit (up to theta).
    pub fn limit_operator(&self, seq: &[PairRef], cand: PairRef) -> bool {
        assert!(!seq.is_empty(), "limit operator needs a nonempty sequence");
        self.limit_operator_on(&self.p_comps(seq), &self.f_comps(seq), cand)
    }

    /// Inclusion-only convergence: nonempty components within the inferior
    /// limits, no maximality requirement.
    pub fn ceat_converges(&self, seq: &[PairRef], cand: PairRef) -> bool {
        let n = self.n();
        if let Some(p) = self.comp.p_component(cand, self.chron) {
            let (li, _) = li_ls(n, &self.p_comps(seq));
            if !p.is_subset(&self.space.dilate(&li)) {
                return false;
            }
        }
        if let Some(f) = self.comp.f_component(cand, self.chron) {
            let (li, _) = li_ls(n, &self.f_comps(seq));
            if !f.is_subset(&self.space.dilate(&li)) {
                return false;
            }
        }
        true
    }

    /// Three-valued convergence verdict. Yes when the candidate is in L of
    /// the whole sequence. No when some designated subsequence avoids the
    /// candidate in L on all of its tails and also fails the inclusion-only
    /// test. Unknown otherwise: membership in the derived topology's limit
    /// is only semi-decidable from finite prefixes.
    pub fn chr_converges(&self, seq: &[PairRef], cand: PairRef) -> Chr {
        if self.limit_operator(seq, cand) {
            return Chr::Yes;
        }
        for idx in designated_subsequences(seq.len()) {
            let sub: Vec<PairRef> = idx.iter().map(|&i| seq[i]).collect();
            let p_comps = self.p_comps(&sub);
            let f_comps = self.f_comps(&sub);
            let all_tails_avoid = (0..sub.len()).all(|k| {
                !self.limit_operator_on(&p_comps[k..], &f_comps[k..], cand)
            });
            if all_tails_avoid && !self.ceat_converges(&sub, cand) {
                return Chr::No;
            }
        }
        Chr::Unknown
    }

    /// Sub-basis separation: evaluates the derived closed sets of each family
    /// member and reports separation when one contains a tail of the sequence
    /// while excluding the candidate. A sound witness for non-convergence,
    /// not a full topology decision.
    pub fn mr_subbasis_separation(
        &self,
        seq: &[PairRef],
        cand: PairRef,
        families: Option<&[Vec<PairRef>]>,
    ) -> Separation {
        let default: Vec<Vec<PairRef>>;
        let fams: &[Vec<PairRef>] = match families {
            Some(f) => f,
            None => {
                let mut v: Vec<Vec<PairRef>> = seq.iter().map(|&r| vec![r]).collect();
                for k in 0..seq.len() {
                    v.push(seq[k..].to_vec());
                }
                default = v;
                &default
            }
        };
        for (fi, s) in fams.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            for future_side in [false, true] {
                let cls = self.derived_closed_set(s, future_side);
                let tail_inside = (0..seq.len())
                    .any(|k| seq[k..].iter().all(|&m| self.in_closed_set(&cls, m)));
                if tail_inside && !self.in_closed_set(&cls, cand) {
                    return Separation::Separated { family: fi };
                }
            }
        }
        Separation::NotSeparatedBySubbasis
    }

    fn derived_closed_set(&self, s: &[PairRef], future_side: bool) -> ClosedSet {
        let n = self.n();
        let comps = if future_side { self.f_comps(s) } else { self.p_comps(s) };
        let mut union = EventSet::new(n);
        for c in comps.iter().flatten() {
            union.union_with(c);
        }
        // inferior limits of the listed order's tails, for the one-sided
        // closure step
        let mut tail_limits = Vec::new();
        for k in 0..s.len() {
            let (li, _) = li_ls(n, &comps[k..]);
            tail_limits.push(li);
        }
        ClosedSet { base: s.to_vec(), union, tail_limits, future_side }
    }

    fn in_closed_set(&self, cls: &ClosedSet, m: PairRef) -> bool {
        if cls.base.contains(&m) {
            return true;
        }
        // one-sided inclusion members: nonempty component inside the union
        let comp = if cls.future_side {
            self.comp.f_component(m, self.chron)
        } else {
            self.comp.p_component(m, self.chron)
        };
        if let Some(c) = &comp {
            if c.is_subset(&self.space.dilate(&cls.union)) {
                return true;
            }
        }
        // closure step: adds only pairs whose other component is absent and
        // whose present component matches a tail limit of the base
        let one_sided = match m {
            PairRef::Boundary(b) => {
                let pr = &self.comp.pairs[b as usize];
                if cls.future_side { pr.p.is_none() } else { pr.f.is_none() }
            }
            PairRef::Event(_) => false,
        };
        if one_sided {
            if let Some(c) = &comp {
                for li in &cls.tail_limits {
                    if self.space.delta_equal(c, li) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Distinct completion points never converge to one another as constant
    /// sequences. Checks all ordered pairs among the boundary points plus the
    /// supplied event samples; returns the first violation.
    pub fn t1_probe(&self, event_samples: &[u32]) -> Result<(), (PairRef, PairRef)> {
        let mut points: Vec<PairRef> = self.comp.boundary_refs().collect();
        points.extend(event_samples.iter().map(|&x| PairRef::Event(x)));
        for &a in &points {
            let pa = self.comp.p_component(a, self.chron);
            let fa = self.comp.f_component(a, self.chron);
            let p_comps = vec![pa];
            let f_comps = vec![fa];
            for &b in &points {
                if a == b {
                    continue;
                }
                if self.limit_operator_on(&p_comps, &f_comps, b) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// For a sequence converging to a half-empty limit: no other catalog pair
    /// strictly dominates the limit's nonempty component while staying inside
    /// the inferior limit. Returns the first offending pair.
    pub fn a2_check(&self, seq: &[PairRef], limit: PairRef) -> Result<(), PairRef> {
        let lp = self.comp.p_component(limit, self.chron);
        let lf = self.comp.f_component(limit, self.chron);
        let n = self.n();
        if lf.is_none() {
            let p = lp.as_ref().expect("half-empty limit");
            let (li, _) = li_ls(n, &self.p_comps(seq));
            let dil_li = self.space.dilate(&li);
            for b in self.comp.boundary_refs() {
                if b == limit {
                    continue;
                }
                if let Some(p2) = self.comp.p_component(b, self.chron) {
                    if p2.is_subset(&dil_li) && self.space.proper_sub(p, &p2) {
                        return Err(b);
                    }
                }
            }
        } else if lp.is_none() {
            let f = lf.as_ref().expect("half-empty limit");
            let (li, _) = li_ls(n, &self.f_comps(seq));
            let dil_li = self.space.dilate(&li);
            for b in self.comp.boundary_refs() {
                if b == limit {
                    continue;
                }
                if let Some(f2) = self.comp.f_component(b, self.chron) {
                    if f2.is_subset(&dil_li) && self.space.proper_sub(f, &f2) {
                        return Err(b);
                    }
                }
            }
        }
        Ok(())
    }

    /// First-order audit: every designated sequence with a Yes verdict has
    /// its limit in L. Unknown verdicts are skipped, not reported.
    pub fn first_order_spot_check(
        &self,
        entries: &[(Vec<PairRef>, PairRef)],
    ) -> Result<(), usize> {
        for (i, (seq, target)) in entries.iter().enumerate() {
            if self.chr_converges(seq, *target) == Chr::Yes && !self.limit_operator(seq, *target)
            {
                return Err(i);
            }
        }
        Ok(())
    }

    /// Separating property over the catalog: for each pair with nonempty past
    /// strictly above a half-empty pair, some event in the gap sees the big
    /// pair in its chronological future while the derived closure of that
    /// future, evaluated along the designated sequences, avoids the small
    /// pair. Returns the first pair of points with no such event.
    pub fn separating_check(
        &self,
        designated: &[Vec<PairRef>],
    ) -> Result<(), (PairRef, PairRef)> {
        let refs: Vec<PairRef> = self.comp.boundary_refs().collect();
        for &a in &refs {
            let Some(p) = self.comp.p_component(a, self.chron) else { continue };
            for &b in &refs {
                if a == b {
                    continue;
                }
                let PairRef::Boundary(bi) = b else { continue };
                let bp = &self.comp.pairs[bi as usize];
                if bp.f.is_some() {
                    continue;
                }
                let Some(p2) = self.comp.p_component(b, self.chron) else { continue };
                if !self.space.proper_sub(&p2, &p) {
                    continue;
                }
                let gap = p.difference(&self.space.dilate(&p2));
                let xs: Vec<u32> = sample_members(&gap, 64);
                let mut found = false;
                'xs: for &x in &xs {
                    let ex = PairRef::Event(x);
                    if !self.comp.ext_chron(ex, a, self.chron)
                        || self.comp.ext_chron(ex, b, self.chron)
                    {
                        continue;
                    }
                    for tau in designated {
                        let inside = tau
                            .iter()
                            .all(|&m| m == ex || self.comp.ext_chron(ex, m, self.chron));
                        if inside && !tau.is_empty() && self.limit_operator(tau, b) {
                            continue 'xs;
                        }
                    }
                    found = true;
                    break;
                }
                if !found {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// Full verdict record for one sequence and candidate.
    pub fn evaluate_verdict(&self, seq: &[PairRef], cand: PairRef) -> LimitVerdict {
        let in_l = self.limit_operator(seq, cand);
        LimitVerdict {
            in_l,
            ceat: self.ceat_converges(seq, cand),
            chr: if in_l { Chr::Yes } else { self.chr_converges(seq, cand) },
            mr_separated: self.mr_subbasis_separation(seq, cand, None),
        }
    }
}

struct ClosedSet {
    base: Vec<PairRef>,
    union: EventSet,
    tail_limits: Vec<EventSet>,
    future_side: bool,
}

/// Tails and arithmetic subsequences of step at most 4.
pub fn designated_subsequences(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..len {
        out.push((k..len).collect());
    }
    for step in 2..=4usize {
        for start in 0..step.min(len) {
            let idx: Vec<usize> = (start..len).step_by(step).collect();
            if idx.len() >= 2 {
                out.push(idx);
            }
        }
    }
    out
}

/// Up to `cap` members of a set, spread evenly across its enumeration order.
pub fn sample_members(s: &EventSet, cap: usize) -> Vec<u32> {
    let total = s.count();
    if total == 0 {
        return Vec::new();
    }
    let stride = total.div_ceil(cap).max(1);
    s.iter().step_by(stride).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chronoset::ChronSet;
    use crate::pairs::{mr_completion, IndecompSet, Orientation};
    use crate::tolerance::ExactSpace;

    /// Chain of 6 elements.
    fn chain(n: usize) -> ChronSet {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i as u32, j as u32));
            }
        }
        ChronSet::from_pairs(n, &pairs, false).unwrap()
    }

    fn setup(cs: &ChronSet) -> (Completion, ExactSpace) {
        let n = cs.n();
        let top = IndecompSet::new(Orientation::Past, EventSet::full(n), true);
        let comp = mr_completion(vec![top], vec![], cs, &ExactSpace { n }).unwrap();
        (comp, ExactSpace { n })
    }

    #[test]
    fn constant_sequence_is_its_own_limit() {
        let cs = chain(6);
        let (comp, sp) = setup(&cs);
        let ctx = LimitCtx::new(&cs, &sp, &comp);
        let b = PairRef::Boundary(0);
        let seq = vec![b, b, b];
        assert!(ctx.limit_operator(&seq, b));
        assert!(ctx.ceat_converges(&seq, b));
        assert_eq!(ctx.chr_converges(&seq, b), Chr::Yes);
    }

    #[test]
    fn ascending_chain_reaches_terminal_past() {
        let cs = chain(6);
        let (comp, sp) = setup(&cs);
        let ctx = LimitCtx::new(&cs, &sp, &comp);
        // exact semantics: the terminal set equals the inclusive past of the
        // top element, so a sequence ending there converges
        let seq: Vec<PairRef> = (0..6).map(PairRef::Event).collect();
        let b = PairRef::Boundary(0);
        // LI over the last half is the inclusive past of element 3, a strict
        // subset of the full chain: inclusion fails, and the designated
        // subsequence rule yields a definite refusal
        assert!(!ctx.limit_operator(&seq, b));
        assert_eq!(ctx.chr_converges(&seq, b), Chr::No);
        // a sequence settled at the top converges
        let settled =
            vec![PairRef::Event(3), PairRef::Event(4), PairRef::Event(5), PairRef::Event(5)];
        assert!(ctx.limit_operator(&settled, b));
        assert_eq!(ctx.chr_converges(&settled, b), Chr::Yes);
    }

    #[test]
    fn event_targets_and_t1() {
        let cs = chain(6);
        let (comp, sp) = setup(&cs);
        let ctx = LimitCtx::new(&cs, &sp, &comp);
        let seq = vec![PairRef::Event(2), PairRef::Event(2)];
        assert!(ctx.limit_operator(&seq, PairRef::Event(2)));
        assert!(!ctx.limit_operator(&seq, PairRef::Event(1)));
        // sampled events stop short of the top: the terminal past equals the
        // inclusive past of the final element, which no tolerance separates
        assert!(ctx.t1_probe(&[0, 1, 2, 3, 4]).is_ok());
    }

    #[test]
    fn t1_violation_control() {
        // hand-built completion carrying both (P,F) and (P,empty) for the
        // same terminal past: the constant sequence at the double pair
        // converges to the half pair, so the probe must object
        use crate::pairs::BoundaryPair;
        let cs = chain(6);
        let n = 6;
        let sp = ExactSpace { n };
        let p = EventSet::from_indices(n, &[0, 1, 2]);
        let f = EventSet::from_indices(n, &[3, 4, 5]);
        let comp = Completion {
            ups: vec![cs.common_future(&p)],
            downs: vec![cs.common_past(&f)],
            ips: vec![IndecompSet::new(Orientation::Past, p, true)],
            ifs: vec![IndecompSet::new(Orientation::Future, f, true)],
            pairs: vec![
                BoundaryPair { p: Some(0), f: Some(0) },
                BoundaryPair { p: Some(0), f: None },
            ],
        };
        let ctx = LimitCtx::new(&cs, &sp, &comp);
        assert_eq!(
            ctx.t1_probe(&[]),
            Err((PairRef::Boundary(0), PairRef::Boundary(1)))
        );
    }

    #[test]
    fn designated_subsequence_shapes() {
        let subs = designated_subsequences(6);
        assert!(subs.contains(&vec![0, 1, 2, 3, 4, 5]));
        assert!(subs.contains(&vec![3, 4, 5]));
        assert!(subs.contains(&vec![0, 2, 4]));
        assert!(subs.contains(&vec![1, 4]));
        assert!(subs.contains(&vec![0, 4]));
    }

    #[test]
    fn sampling_is_bounded() {
        let s = EventSet::full(1000);
        let xs = sample_members(&s, 64);
        assert!(xs.len() <= 64 && !xs.is_empty());
    }
}
