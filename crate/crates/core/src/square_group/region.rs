//! Monotone lattice regions between two R/U paths.

use std::fmt::Write as _;

/// Canonical direction of a unit edge: rightward or upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    R,
    U,
}

/// The lattice points between two monotone paths from `(0,0)` to `(n,m)`,
/// both boundary paths included. Stored as per-column row intervals
/// `lo[i]..=hi[i]`; both profiles are non-decreasing, every column is
/// non-empty, and consecutive columns overlap (`lo[i+1] <= hi[i]`), which
/// makes the point set horizontally and vertically convex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotoneRegion {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl MonotoneRegion {
    /// The single point `(0,0)`.
    pub fn point() -> Self {
        MonotoneRegion {
            lo: vec![0],
            hi: vec![0],
        }
    }

    pub fn from_profiles(lo: Vec<i64>, hi: Vec<i64>) -> Option<Self> {
        let r = MonotoneRegion { lo, hi };
        if r.well_formed() {
            Some(r)
        } else {
            None
        }
    }

    /// Builds the region between two step sequences with equal endpoints;
    /// `upper` must lie above `lower` (shadow containment).
    pub fn from_paths(lower: &[Dir], upper: &[Dir]) -> Option<Self> {
        let lo = path_exit_heights(lower)?;
        let hi = path_exit_heights(upper)?;
        if lo.len() != hi.len() || lo.last() != hi.last() {
            return None;
        }
        // lower path enters column i at its previous exit height
        let mut lo_entry = vec![0i64];
        lo_entry.extend_from_slice(&lo[..lo.len() - 1]);
        MonotoneRegion::from_profiles(lo_entry, hi)
    }

    fn well_formed(&self) -> bool {
        let n = self.lo.len();
        if n == 0 || self.hi.len() != n {
            return false;
        }
        if self.lo[0] != 0 {
            return false;
        }
        for i in 0..n {
            if self.lo[i] > self.hi[i] {
                return false;
            }
            if i + 1 < n {
                if self.lo[i] > self.lo[i + 1] || self.hi[i] > self.hi[i + 1] {
                    return false;
                }
                if self.lo[i + 1] > self.hi[i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn endpoint(&self) -> (i64, i64) {
        ((self.lo.len() - 1) as i64, *self.hi.last().unwrap())
    }

    pub fn columns(&self) -> i64 {
        self.lo.len() as i64
    }

    pub fn lo(&self, col: i64) -> i64 {
        self.lo[col as usize]
    }

    pub fn hi(&self, col: i64) -> i64 {
        self.hi[col as usize]
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        p.0 >= 0
            && (p.0 as usize) < self.lo.len()
            && p.1 >= self.lo[p.0 as usize]
            && p.1 <= self.hi[p.0 as usize]
    }

    pub fn point_count(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .sum()
    }

    /// An edge `(x, y, dir)` whose both endpoints lie in the region.
    pub fn has_edge(&self, x: i64, y: i64, dir: Dir) -> bool {
        match dir {
            Dir::R => self.contains((x, y)) && self.contains((x + 1, y)),
            Dir::U => self.contains((x, y)) && self.contains((x, y + 1)),
        }
    }

    pub fn edges(&self) -> Vec<(i64, i64, Dir)> {
        let (n, _) = self.endpoint();
        let mut out = Vec::new();
        for x in 0..=n {
            for y in self.lo(x)..=self.hi(x) {
                if self.has_edge(x, y, Dir::R) {
                    out.push((x, y, Dir::R));
                }
                if self.has_edge(x, y, Dir::U) {
                    out.push((x, y, Dir::U));
                }
            }
        }
        out
    }

    /// Lower-left corners of the unit squares fully contained in the region.
    pub fn squares(&self) -> Vec<(i64, i64)> {
        let (n, _) = self.endpoint();
        let mut out = Vec::new();
        for x in 0..n {
            let ylo = self.lo(x).max(self.lo(x + 1));
            let yhi = self.hi(x).min(self.hi(x + 1));
            for y in ylo..yhi {
                out.push((x, y));
            }
        }
        out
    }

    /// The lower boundary as a vertex sequence from `(0,0)` to the endpoint.
    pub fn lower_path(&self) -> Vec<(i64, i64)> {
        let (n, m) = self.endpoint();
        let mut pts = vec![(0, 0)];
        for i in 0..n {
            let next_lo = self.lo(i + 1);
            let (_, mut y) = *pts.last().unwrap();
            while y < next_lo {
                y += 1;
                pts.push((i, y));
            }
            pts.push((i + 1, y));
        }
        let (_, mut y) = *pts.last().unwrap();
        while y < m {
            y += 1;
            pts.push((n, y));
        }
        pts
    }

    /// The upper boundary as a vertex sequence from `(0,0)` to the endpoint.
    pub fn upper_path(&self) -> Vec<(i64, i64)> {
        let (n, _) = self.endpoint();
        let mut pts = vec![(0, 0)];
        for i in 0..=n {
            let top = self.hi(i);
            let (_, mut y) = *pts.last().unwrap();
            while y < top {
                y += 1;
                pts.push((i, y));
            }
            if i < n {
                pts.push((i + 1, y));
            }
        }
        pts
    }

    /// Steps of a vertex path as an R/U string.
    pub fn steps_string(path: &[(i64, i64)]) -> String {
        let mut s = String::new();
        for w in path.windows(2) {
            if w[1].0 == w[0].0 + 1 {
                let _ = write!(s, "R");
            } else {
                let _ = write!(s, "U");
            }
        }
        s
    }

    /// Restriction to columns `0..=last_col` (horizontal collapse).
    pub fn drop_last_column(&self) -> Option<Self> {
        if self.lo.len() < 2 {
            return None;
        }
        MonotoneRegion::from_profiles(
            self.lo[..self.lo.len() - 1].to_vec(),
            self.hi[..self.hi.len() - 1].to_vec(),
        )
    }

    /// Restriction to rows `<= new_top` (vertical collapse).
    pub fn clamp_top(&self, new_top: i64) -> Option<Self> {
        let hi: Vec<i64> = self.hi.iter().map(|&h| h.min(new_top)).collect();
        MonotoneRegion::from_profiles(self.lo.clone(), hi)
    }

    /// Appends a fresh column containing only the point `(n+1, m)`.
    pub fn push_column(&self) -> Self {
        let (_, m) = self.endpoint();
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo.push(m);
        hi.push(m);
        MonotoneRegion { lo, hi }
    }

    /// Raises the endpoint column by one row.
    pub fn raise_top(&self) -> Self {
        let mut hi = self.hi.clone();
        *hi.last_mut().unwrap() += 1;
        MonotoneRegion {
            lo: self.lo.clone(),
            hi,
        }
    }

    /// Grows column `col` upward by one; caller must keep profiles monotone.
    pub fn grow_top(&self, col: i64) -> Self {
        let mut hi = self.hi.clone();
        hi[col as usize] += 1;
        debug_assert!(col + 1 >= self.columns() || hi[col as usize] <= hi[col as usize + 1]);
        MonotoneRegion {
            lo: self.lo.clone(),
            hi,
        }
    }

    /// Grows column `col` downward by one; caller must keep profiles monotone.
    pub fn grow_bottom(&self, col: i64) -> Self {
        let mut lo = self.lo.clone();
        lo[col as usize] -= 1;
        debug_assert!(col >= 1 && lo[col as usize] >= lo[col as usize - 1]);
        MonotoneRegion {
            lo,
            hi: self.hi.clone(),
        }
    }
}

fn path_exit_heights(steps: &[Dir]) -> Option<Vec<i64>> {
    // exit height per column, i.e. the height at which the path leaves
    // column i rightward (or ends).
    let mut heights = Vec::new();
    let mut y = 0i64;
    for s in steps {
        match s {
            Dir::U => y += 1,
            Dir::R => heights.push(y),
        }
    }
    heights.push(y);
    Some(heights)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two-square staircase region used throughout the worked example:
    /// points (0,0),(0,1),(1,0),(1,1),(1,2),(2,1),(2,2).
    pub fn staircase() -> MonotoneRegion {
        MonotoneRegion::from_profiles(vec![0, 0, 1], vec![1, 2, 2]).unwrap()
    }

    #[test]
    fn point_region() {
        let r = MonotoneRegion::point();
        assert_eq!(r.endpoint(), (0, 0));
        assert_eq!(r.point_count(), 1);
        assert!(r.edges().is_empty());
        assert!(r.squares().is_empty());
    }

    #[test]
    fn staircase_shape() {
        let r = staircase();
        assert_eq!(r.endpoint(), (2, 2));
        assert_eq!(r.point_count(), 7);
        assert_eq!(r.edges().len(), 8);
        assert_eq!(r.squares(), vec![(0, 0), (1, 1)]);
        assert!(!r.contains((2, 0)));
        assert!(!r.contains((0, 2)));
    }

    #[test]
    fn staircase_boundaries() {
        let r = staircase();
        assert_eq!(MonotoneRegion::steps_string(&r.lower_path()), "RURU");
        assert_eq!(MonotoneRegion::steps_string(&r.upper_path()), "URUR");
    }

    #[test]
    fn from_paths_roundtrip() {
        use Dir::*;
        let r = MonotoneRegion::from_paths(&[R, U, R, U], &[U, R, U, R]).unwrap();
        assert_eq!(r, staircase());
        // mismatched endpoints
        assert!(MonotoneRegion::from_paths(&[R, U], &[U, R, R]).is_none());
        // lower above upper
        assert!(MonotoneRegion::from_paths(&[U, R], &[R, U]).is_none());
    }

    #[test]
    fn collapse_helpers() {
        let r = staircase();
        let dropped = r.drop_last_column().unwrap();
        assert_eq!(dropped.endpoint(), (1, 2));
        let clamped = r.clamp_top(1).unwrap();
        assert_eq!(clamped.endpoint(), (2, 1));
        assert_eq!(clamped.point_count(), 5);
    }

    #[test]
    fn rectangle_squares() {
        let r = MonotoneRegion::from_profiles(vec![0, 0, 0], vec![2, 2, 2]).unwrap();
        assert_eq!(r.squares().len(), 4);
        assert_eq!(r.point_count(), 9);
        assert_eq!(r.edges().len(), 12);
    }
}
