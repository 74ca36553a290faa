//! Tolerant set comparison. Grid-derived sets are compared up to a dilation
//! radius (membership within distance delta) and a strictness margin theta
//! measured in window area; abstract finite models compare exactly.

use crate::bitset::EventSet;

pub trait SetSpace: Sync {
    /// Neighborhood N_delta(s): all positions within distance delta of s.
    /// The exact space returns s unchanged.
    fn dilate(&self, s: &EventSet) -> EventSet;
    /// Measure of a set (event count, or count times cell area on grids).
    fn area(&self, s: &EventSet) -> f64;
    fn window_area(&self) -> f64;
    fn theta(&self) -> f64;

    /// Minimal excess area required for strict containment. On grids this is
    /// theta times the window area; exactly one element on abstract models.
    fn strict_margin(&self) -> f64 {
        let m = self.theta() * self.window_area();
        if m > 0.0 {
            m
        } else {
            0.5
        }
    }

    /// a within-delta-contained in b.
    fn within(&self, a: &EventSet, b: &EventSet) -> bool {
        a.is_subset(&self.dilate(b))
    }

    /// area(q minus N_delta(p)).
    fn excess(&self, q: &EventSet, p: &EventSet) -> f64 {
        self.area(&q.difference(&self.dilate(p)))
    }

    /// p strictly below q: p within q and q exceeds p by at least the margin.
    fn proper_sub(&self, p: &EventSet, q: &EventSet) -> bool {
        self.within(p, q) && self.excess(q, p) >= self.strict_margin()
    }

    /// Mutual within-delta containment.
    fn delta_equal(&self, a: &EventSet, b: &EventSet) -> bool {
        self.within(a, b) && self.within(b, a)
    }

    /// Negligible up to the strictness margin.
    fn essentially_empty(&self, s: &EventSet) -> bool {
        self.area(s) < self.strict_margin()
    }
}

/// Exact comparison for abstract finite chronological sets.
pub struct ExactSpace {
    pub n: usize,
}

impl SetSpace for ExactSpace {
    fn dilate(&self, s: &EventSet) -> EventSet {
        s.clone()
    }

    fn area(&self, s: &EventSet) -> f64 {
        s.count() as f64
    }

    fn window_area(&self) -> f64 {
        self.n as f64
    }

    fn theta(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_space_semantics() {
        let sp = ExactSpace { n: 10 };
        let a = EventSet::from_indices(10, &[1, 2]);
        let b = EventSet::from_indices(10, &[1, 2, 3]);
        assert!(sp.within(&a, &b));
        assert!(!sp.within(&b, &a));
        assert!(sp.proper_sub(&a, &b));
        assert!(!sp.proper_sub(&a, &a));
        assert!(sp.delta_equal(&a, &a));
        assert!(!sp.delta_equal(&a, &b));
        assert!(sp.essentially_empty(&EventSet::new(10)));
        assert!(!sp.essentially_empty(&a));
    }
}
