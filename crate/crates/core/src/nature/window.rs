use num_traits::One;

use crate::hypothesis::{Point, Rational};

/// Cuts `c` with `1[x >= c]` consistent with the labels so far: `lo < c <= hi`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThresholdWindow {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl ThresholdWindow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, x: &Rational, y: bool) {
        if y {
            if self.hi.as_ref().is_none_or(|h| x < h) {
                self.hi = Some(x.clone());
            }
        } else if self.lo.as_ref().is_none_or(|l| x > l) {
            self.lo = Some(x.clone());
        }
    }

    pub fn is_realizable(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => lo < hi,
            _ => true,
        }
    }

    /// A cut consistent with every observation, if one exists.
    pub fn realizing_cut(&self) -> Option<Rational> {
        if !self.is_realizable() {
            return None;
        }
        Some(match (&self.lo, &self.hi) {
            (_, Some(hi)) => hi.clone(),
            (Some(lo), None) => lo + Rational::one(),
            (None, None) => Rational::new(1.into(), 2.into()),
        })
    }

    pub fn bounds(&self) -> (Option<&Rational>, Option<&Rational>) {
        (self.lo.as_ref(), self.hi.as_ref())
    }
}

/// Queries the centre of a shrinking window of `[0, 1]` and always reveals
/// the label the learner did not predict. The first query is `1/2`; after
/// each answer the window is halved and the next query is the midpoint of
/// the side the answer leaves feasible, so queries go `1/2`, then `1/4` or
/// `3/4`, then `3/16`, `5/16`, `11/16` or `13/16`, and so on.
#[derive(Clone, Debug)]
pub struct WindowHalving {
    centre: Rational,
    offset: Rational,
    depth: u64,
    round: u64,
    window: ThresholdWindow,
}

impl WindowHalving {
    pub fn new(depth: u64) -> Self {
        Self {
            centre: Rational::new(1.into(), 2.into()),
            offset: Rational::new(1.into(), 4.into()),
            depth,
            round: 0,
            window: ThresholdWindow::new(),
        }
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    pub fn window(&self) -> &ThresholdWindow {
        &self.window
    }

    /// The next query, or `None` once `depth` rounds have been played.
    pub fn next_point(&self) -> Option<Point> {
        (self.round < self.depth).then(|| Point::Value(self.centre.clone()))
    }

    pub fn reveal(&mut self, yhat: bool) -> bool {
        let y = !yhat;
        self.window.observe(&self.centre, y);
        if y {
            self.centre -= &self.offset;
        } else {
            self.centre += &self.offset;
        }
        self.offset /= Rational::from_integer(4.into());
        self.round += 1;
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn first_queries() {
        let mut w = WindowHalving::new(8);
        assert_eq!(w.next_point(), Some(Point::ratio(1, 2)));
        w.reveal(true); // label 0: cut is above 1/2
        assert_eq!(w.next_point(), Some(Point::ratio(3, 4)));
        w.reveal(false); // label 1
        assert_eq!(w.next_point(), Some(Point::ratio(11, 16)));
        let mut w = WindowHalving::new(8);
        w.reveal(false);
        assert_eq!(w.next_point(), Some(Point::ratio(1, 4)));
        w.reveal(false);
        assert_eq!(w.next_point(), Some(Point::ratio(3, 16)));
    }

    #[test]
    fn stops_at_depth() {
        let mut w = WindowHalving::new(2);
        w.reveal(false);
        w.reveal(true);
        assert_eq!(w.next_point(), None);
    }

    #[test]
    fn window_tracks_realizability() {
        let mut win = ThresholdWindow::new();
        win.observe(&r(1, 2), true);
        win.observe(&r(1, 4), false);
        assert_eq!(win.realizing_cut(), Some(r(1, 2)));
        win.observe(&r(1, 2), false);
        assert!(!win.is_realizable());
    }
}
