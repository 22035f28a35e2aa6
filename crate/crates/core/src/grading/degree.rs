use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// (stem, Adams filtration, motivic weight).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriDegree {
    pub s: i32,
    pub f: i32,
    pub w: i32,
}

impl TriDegree {
    pub const ZERO: TriDegree = TriDegree { s: 0, f: 0, w: 0 };
    pub const TAU: TriDegree = TriDegree { s: 0, f: 0, w: -1 };

    pub const fn new(s: i32, f: i32, w: i32) -> Self {
        Self { s, f, w }
    }

    /// Degree shift of an Adams dᵣ: (−1, r, 0).
    pub const fn differential(r: i32) -> Self {
        Self { s: -1, f: r, w: 0 }
    }

    /// The (s, f) column this degree sits in.
    pub fn column(self) -> (i32, i32) {
        (self.s, self.f)
    }
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s + o.s, self.f + o.f, self.w + o.w)
    }
}

impl AddAssign for TriDegree {
    fn add_assign(&mut self, o: TriDegree) {
        *self = *self + o;
    }
}

impl Sub for TriDegree {
    type Output = TriDegree;
    fn sub(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s - o.s, self.f - o.f, self.w - o.w)
    }
}

impl Neg for TriDegree {
    type Output = TriDegree;
    fn neg(self) -> TriDegree {
        TriDegree::new(-self.s, -self.f, -self.w)
    }
}

impl Mul<TriDegree> for i32 {
    type Output = TriDegree;
    fn mul(self, d: TriDegree) -> TriDegree {
        TriDegree::new(self * d.s, self * d.f, self * d.w)
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.f, self.w)
    }
}
