//! Exact arithmetic in the ring of integers `Z[phi]` of `Q(sqrt 5)`,
//! `phi = (1 + sqrt 5) / 2`, `phi^2 = phi + 1`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// `a + b phi`.
/// The derived order is lexicographic in `(a, b)`; it is not the real order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Zphi {
    pub a: i64,
    pub b: i64,
}

impl Zphi {
    pub const PHI: Zphi = Zphi { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        Zphi { a, b }
    }

    /// Exact sign, from `2(a + b phi) = (2a + b) + b sqrt 5`.
    pub fn signum(self) -> i8 {
        let u = 2 * self.a as i128 + self.b as i128;
        let v = self.b as i128;
        let s = |x: i128| x.signum() as i8;
        if u >= 0 && v >= 0 || u <= 0 && v <= 0 {
            return s(u + v);
        }
        match (u * u).cmp(&(5 * v * v)) {
            Ordering::Greater => s(u),
            Ordering::Less => s(v),
            Ordering::Equal => unreachable!("sqrt 5 is irrational"),
        }
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * (1.0 + libm::sqrt(5.0)) / 2.0
    }
}

impl Add for Zphi {
    type Output = Zphi;
    fn add(self, o: Zphi) -> Zphi {
        Zphi::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Zphi {
    type Output = Zphi;
    fn sub(self, o: Zphi) -> Zphi {
        Zphi::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Zphi {
    type Output = Zphi;
    fn neg(self) -> Zphi {
        Zphi::new(-self.a, -self.b)
    }
}

impl Mul for Zphi {
    type Output = Zphi;
    fn mul(self, o: Zphi) -> Zphi {
        // (a + b phi)(c + d phi) = ac + bd + (ad + bc + bd) phi
        let bd = self.b * o.b;
        Zphi::new(self.a * o.a + bd, self.a * o.b + self.b * o.a + bd)
    }
}

impl Zero for Zphi {
    fn zero() -> Self {
        Zphi::new(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl One for Zphi {
    fn one() -> Self {
        Zphi::new(1, 0)
    }
}

impl From<i64> for Zphi {
    fn from(a: i64) -> Self {
        Zphi::new(a, 0)
    }
}

impl fmt::Display for Zphi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "phi"),
            (0, b) => write!(f, "{b}phi"),
            (a, 1) => write!(f, "{a}+phi"),
            (a, b) if b < 0 => write!(f, "{a}{b}phi"),
            (a, b) => write!(f, "{a}+{b}phi"),
        }
    }
}
