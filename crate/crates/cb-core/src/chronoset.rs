//! Finite chronological sets: a strict chronology relation on a finite
//! universe, validation against the chronology axioms, past/future and
//! common-past/common-future set algebra, and enumeration of indecomposable
//! past/future sets both structurally and by exhaustive search.

use crate::bitset::EventSet;
use serde::Deserialize;

/// Read access to a chronology relation on a finite universe. Implemented by
/// [`ChronSet`] (dense matrix) and by grid reachability backends.
pub trait EventChronology: Sync {
    fn n(&self) -> usize;
    /// Strict past {y : y << x}.
    fn past_of(&self, x: u32) -> EventSet;
    /// Strict future {y : x << y}.
    fn future_of(&self, x: u32) -> EventSet;
    /// {q : p << q for all p in s}. Empty `s` gives the full universe.
    fn upper_bounds(&self, s: &EventSet) -> EventSet;
    fn lower_bounds(&self, s: &EventSet) -> EventSet;
    /// Strict I^+[S], the union of futures of members.
    fn future_of_set(&self, s: &EventSet) -> EventSet;
    fn past_of_set(&self, s: &EventSet) -> EventSet;

    /// Inclusive past D^-(x) = {x} plus the strict past.
    fn dpast(&self, x: u32) -> EventSet {
        let mut s = self.past_of(x);
        s.insert(x);
        s
    }

    /// Inclusive future D^+(x).
    fn dfuture(&self, x: u32) -> EventSet {
        let mut s = self.future_of(x);
        s.insert(x);
        s
    }

    /// Common past of S: I^-[{p : p << q for all q in S}].
    fn common_past(&self, s: &EventSet) -> EventSet {
        self.past_of_set(&self.lower_bounds(s))
    }

    /// Common future of S: I^+[{q : p << q for all p in S}].
    fn common_future(&self, s: &EventSet) -> EventSet {
        self.future_of_set(&self.upper_bounds(s))
    }

    /// {q : p << q or p = q, for all p in s}. The inclusive variant matching
    /// the inclusive-past-set semantics of finite models.
    fn upper_bounds_incl(&self, s: &EventSet) -> EventSet;
    fn lower_bounds_incl(&self, s: &EventSet) -> EventSet;

    /// Inclusive common future used by the mutual-maximality pairing: the
    /// inclusive upper bounds together with everything above them. Without
    /// the inclusive step the common future of an inclusive past D^-(p)
    /// would lose p's own future on exact finite models.
    fn future_hull(&self, s: &EventSet) -> EventSet {
        let ub = self.upper_bounds_incl(s);
        let mut out = self.future_of_set(&ub);
        out.union_with(&ub);
        out
    }

    fn past_hull(&self, s: &EventSet) -> EventSet {
        let lb = self.lower_bounds_incl(s);
        let mut out = self.past_of_set(&lb);
        out.union_with(&lb);
        out
    }
}

/// A finite universe with a strict chronology relation stored densely.
#[derive(Clone, Debug)]
pub struct ChronSet {
    n: usize,
    /// rows[i] = {j : i << j}
    rows: Vec<EventSet>,
    /// cols[j] = {i : i << j}
    cols: Vec<EventSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChronViolation {
    NotSquare { rows: usize, cols: usize },
    Reflexive { witness: u32 },
    NotTransitive { witness: (u32, u32, u32) },
    Isolate { witness: u32 },
}

impl std::fmt::Display for ChronViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChronViolation::NotSquare { rows, cols } => {
                write!(f, "relation matrix is not square: {rows} rows, {cols} columns")
            }
            ChronViolation::Reflexive { witness } => {
                write!(f, "antireflexivity violated at element {witness}")
            }
            ChronViolation::NotTransitive { witness: (a, b, c) } => {
                write!(f, "transitivity violated at triple ({a}, {b}, {c})")
            }
            ChronViolation::Isolate { witness } => {
                write!(f, "element {witness} is isolated")
            }
        }
    }
}

/// Check the chronology axioms on a raw boolean matrix: antireflexivity,
/// transitivity, absence of isolates. Reports the first violated axiom with
/// a witness.
pub fn validate_chronology(rel: &[Vec<bool>]) -> Result<(), ChronViolation> {
    let n = rel.len();
    for row in rel {
        if row.len() != n {
            return Err(ChronViolation::NotSquare { rows: n, cols: row.len() });
        }
    }
    for (i, row) in rel.iter().enumerate() {
        if row[i] {
            return Err(ChronViolation::Reflexive { witness: i as u32 });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !rel[i][j] {
                continue;
            }
            for k in 0..n {
                if rel[j][k] && !rel[i][k] {
                    return Err(ChronViolation::NotTransitive {
                        witness: (i as u32, j as u32, k as u32),
                    });
                }
            }
        }
    }
    for i in 0..n {
        let related = (0..n).any(|j| rel[i][j] || rel[j][i]);
        if !related {
            return Err(ChronViolation::Isolate { witness: i as u32 });
        }
    }
    Ok(())
}

impl ChronSet {
    pub fn from_matrix(rel: &[Vec<bool>]) -> Result<Self, ChronViolation> {
        validate_chronology(rel)?;
        Ok(Self::from_matrix_unchecked(rel))
    }

    pub fn from_matrix_unchecked(rel: &[Vec<bool>]) -> Self {
        let n = rel.len();
        let mut rows = vec![EventSet::new(n); n];
        let mut cols = vec![EventSet::new(n); n];
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    rows[i].insert(j as u32);
                    cols[j].insert(i as u32);
                }
            }
        }
        ChronSet { n, rows, cols }
    }

    /// Build from a list of i << j pairs, optionally completing to the
    /// transitive closure first, then validating.
    pub fn from_pairs(n: usize, pairs: &[(u32, u32)], close: bool) -> Result<Self, ChronViolation> {
        let mut rel = vec![vec![false; n]; n];
        for &(i, j) in pairs {
            if (i as usize) < n && (j as usize) < n {
                rel[i as usize][j as usize] = true;
            }
        }
        if close {
            transitive_close(&mut rel);
        }
        Self::from_matrix(&rel)
    }

    pub fn relates(&self, i: u32, j: u32) -> bool {
        self.rows[i as usize].contains(j)
    }
}

pub fn transitive_close(rel: &mut [Vec<bool>]) {
    let n = rel.len();
    for k in 0..n {
        for i in 0..n {
            if rel[i][k] {
                for j in 0..n {
                    if rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
}

impl EventChronology for ChronSet {
    fn n(&self) -> usize {
        self.n
    }

    fn past_of(&self, x: u32) -> EventSet {
        self.cols[x as usize].clone()
    }

    fn future_of(&self, x: u32) -> EventSet {
        self.rows[x as usize].clone()
    }

    fn upper_bounds(&self, s: &EventSet) -> EventSet {
        let mut acc = EventSet::full(self.n);
        for p in s.iter() {
            acc.intersect_with(&self.rows[p as usize]);
        }
        acc
    }

    fn lower_bounds(&self, s: &EventSet) -> EventSet {
        let mut acc = EventSet::full(self.n);
        for q in s.iter() {
            acc.intersect_with(&self.cols[q as usize]);
        }
        acc
    }

    fn future_of_set(&self, s: &EventSet) -> EventSet {
        let mut acc = EventSet::new(self.n);
        for p in s.iter() {
            acc.union_with(&self.rows[p as usize]);
        }
        acc
    }

    fn past_of_set(&self, s: &EventSet) -> EventSet {
        let mut acc = EventSet::new(self.n);
        for q in s.iter() {
            acc.union_with(&self.cols[q as usize]);
        }
        acc
    }

    fn upper_bounds_incl(&self, s: &EventSet) -> EventSet {
        let mut acc = EventSet::full(self.n);
        for p in s.iter() {
            let mut row = self.rows[p as usize].clone();
            row.insert(p);
            acc.intersect_with(&row);
        }
        acc
    }

    fn lower_bounds_incl(&self, s: &EventSet) -> EventSet {
        let mut acc = EventSet::full(self.n);
        for q in s.iter() {
            let mut col = self.cols[q as usize].clone();
            col.insert(q);
            acc.intersect_with(&col);
        }
        acc
    }
}

/// Deduplicate a list of sets by FNV hash plus exact comparison, preserving
/// first-occurrence order.
pub fn dedup_sets(sets: Vec<EventSet>) -> Vec<EventSet> {
    let mut seen: Vec<(u64, usize)> = Vec::new();
    let mut out: Vec<EventSet> = Vec::new();
    'next: for s in sets {
        let h = s.fnv1a();
        for &(h2, i) in &seen {
            if h2 == h && out[i] == s {
                continue 'next;
            }
        }
        seen.push((h, out.len()));
        out.push(s);
    }
    out
}

/// Structural IP enumeration: the principal inclusive down-sets D^-(x),
/// deduplicated. Down-sets of the strict order are exactly the past sets of
/// the finite semantics, and their indecomposable members are the principal
/// ones.
pub fn enumerate_ips_structural(cs: &ChronSet) -> Vec<EventSet> {
    dedup_sets((0..cs.n).map(|x| cs.dpast(x as u32)).collect())
}

pub fn enumerate_ifs_structural(cs: &ChronSet) -> Vec<EventSet> {
    dedup_sets((0..cs.n).map(|x| cs.dfuture(x as u32)).collect())
}

#[derive(Debug)]
pub enum BruteForceError {
    TooLarge { n: usize, max: usize },
}

/// Exhaustive oracle: all nonempty down-closed subsets that cannot be written
/// as the union of two proper down-closed subsets. Every proper down-closed
/// subset of a down-set D is contained in D minus one of its maximal
/// elements, so testing unions of maximal-element deletions is complete.
pub fn enumerate_ips_brute_force(cs: &ChronSet) -> Result<Vec<EventSet>, BruteForceError> {
    enumerate_indecomposable(cs, false)
}

pub fn enumerate_ifs_brute_force(cs: &ChronSet) -> Result<Vec<EventSet>, BruteForceError> {
    enumerate_indecomposable(cs, true)
}

fn enumerate_indecomposable(cs: &ChronSet, future: bool) -> Result<Vec<EventSet>, BruteForceError> {
    const MAX_N: usize = 20;
    let n = cs.n;
    if n > MAX_N {
        return Err(BruteForceError::TooLarge { n, max: MAX_N });
    }
    let below = |x: u32| if future { cs.future_of(x) } else { cs.past_of(x) };
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let mut s = EventSet::new(n);
        for b in 0..n {
            if mask >> b & 1 == 1 {
                s.insert(b as u32);
            }
        }
        // down-closed: the strict cone below every member stays inside
        if !s.iter().all(|x| below(x).is_subset(&s)) {
            continue;
        }
        // maximal elements of s in the induced order
        let maximal: Vec<u32> = s
            .iter()
            .filter(|&x| {
                let up = if future { cs.past_of(x) } else { cs.future_of(x) };
                !up.intersects(&s)
            })
            .collect();
        let mut decomposable = false;
        for (ai, &a) in maximal.iter().enumerate() {
            for &b in &maximal[ai + 1..] {
                let mut da = s.clone();
                da.remove(a);
                let mut db = s.clone();
                db.remove(b);
                if !da.is_empty() && !db.is_empty() && da.union(&db) == s {
                    decomposable = true;
                }
            }
        }
        if !decomposable {
            out.push(s);
        }
    }
    Ok(out)
}

/// JSON text format for finite chronological sets.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChronSetJson {
    n: usize,
    rel: Vec<(u32, u32)>,
    #[serde(default)]
    close: bool,
}

#[derive(Debug)]
pub enum ChronLoadError {
    Json(serde_json::Error),
    IndexOutOfRange { pair: (u32, u32), n: usize },
    Invalid(ChronViolation),
}

impl std::fmt::Display for ChronLoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChronLoadError::Json(e) => write!(f, "malformed chronological-set JSON: {e}"),
            ChronLoadError::IndexOutOfRange { pair, n } => {
                write!(f, "pair ({}, {}) out of range for n = {n}", pair.0, pair.1)
            }
            ChronLoadError::Invalid(v) => write!(f, "{v}"),
        }
    }
}

pub fn load_chronset(text: &str) -> Result<ChronSet, ChronLoadError> {
    let j: ChronSetJson = serde_json::from_str(text).map_err(ChronLoadError::Json)?;
    for &(a, b) in &j.rel {
        if a as usize >= j.n || b as usize >= j.n {
            return Err(ChronLoadError::IndexOutOfRange { pair: (a, b), n: j.n });
        }
    }
    ChronSet::from_pairs(j.n, &j.rel, j.close).map_err(ChronLoadError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn chain3() -> ChronSet {
        ChronSet::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap()
    }

    /// a << c, b << c
    pub fn vposet() -> ChronSet {
        ChronSet::from_pairs(3, &[(0, 2), (1, 2)], false).unwrap()
    }

    #[test]
    fn validation_verdicts() {
        assert!(ChronSet::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], false).is_ok());
        assert_eq!(
            ChronSet::from_pairs(3, &[(0, 1), (1, 2)], false).unwrap_err(),
            ChronViolation::NotTransitive { witness: (0, 1, 2) }
        );
        assert_eq!(
            ChronSet::from_pairs(2, &[], false).unwrap_err(),
            ChronViolation::Isolate { witness: 0 }
        );
        assert_eq!(
            ChronSet::from_pairs(2, &[(0, 0), (0, 1)], false).unwrap_err(),
            ChronViolation::Reflexive { witness: 0 }
        );
        let ragged = vec![vec![false, true], vec![false]];
        assert!(matches!(
            validate_chronology(&ragged),
            Err(ChronViolation::NotSquare { .. })
        ));
    }

    #[test]
    fn past_and_future() {
        let c = chain3();
        assert_eq!(c.past_of(2).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(c.past_of(0).is_empty());
        let v = vposet();
        assert_eq!(v.past_of(2).iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn common_past_formula() {
        let c = chain3();
        // lower bounds of {2} are {0,1}; I^- of that is {0}
        let s = EventSet::from_indices(3, &[2]);
        assert_eq!(c.common_past(&s).iter().collect::<Vec<_>>(), vec![0]);
        // vacuous quantifier: common past of the empty set is I^-[X]
        let empty = EventSet::new(3);
        assert_eq!(c.common_past(&empty).iter().collect::<Vec<_>>(), vec![0, 1]);
        let v = vposet();
        let sc = EventSet::from_indices(3, &[2]);
        assert!(v.common_past(&sc).is_empty());
    }

    #[test]
    fn structural_ips_frozen() {
        let c = chain3();
        let ips = enumerate_ips_structural(&c);
        let expect: Vec<Vec<u32>> = vec![vec![0], vec![0, 1], vec![0, 1, 2]];
        let got: Vec<Vec<u32>> = ips.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(got, expect);

        let v = vposet();
        let ips = enumerate_ips_structural(&v);
        let got: Vec<Vec<u32>> = ips.iter().map(|s| s.iter().collect()).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![0, 1, 2]]);

        let p = ChronSet::from_pairs(2, &[(0, 1)], false).unwrap();
        let got: Vec<Vec<u32>> =
            enumerate_ips_structural(&p).iter().map(|s| s.iter().collect()).collect();
        assert_eq!(got, vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn brute_force_matches_structural_on_fixtures() {
        for cs in [chain3(), vposet()] {
            let mut a: Vec<Vec<u32>> = enumerate_ips_structural(&cs)
                .iter()
                .map(|s| s.iter().collect())
                .collect();
            let mut b: Vec<Vec<u32>> = enumerate_ips_brute_force(&cs)
                .unwrap()
                .iter()
                .map(|s| s.iter().collect())
                .collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        // antichain of 2 with a common future point: principal down-sets only
        let cs = ChronSet::from_pairs(3, &[(0, 2), (1, 2)], false).unwrap();
        let b = enumerate_ips_brute_force(&cs).unwrap();
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn loader_roundtrip() {
        let cs = load_chronset(r#"{"n":3,"rel":[[0,1],[1,2]],"close":true}"#).unwrap();
        assert!(cs.relates(0, 2));
        assert!(load_chronset(r#"{"n":3,"rel":[[0,1],[1,2]]}"#).is_err());
        assert!(load_chronset(r#"{"n":3,"rel":[[0,5]]}"#).is_err());
        assert!(load_chronset(r#"{"n":3,"rel":[],"bogus":1}"#).is_err());
    }
}
