use std::fmt;

use serde::{Serialize, Serializer};

use crate::lattice::K3Context;
use crate::moduli::brauer_bound;

/// Derived categories appearing as functor endpoints.
///
/// `DbPicbar { d, twist }` is `D^b(Picbar^d, α_d^twist)` with `twist` reduced
/// modulo the certified exponent bound of `α_d`, so two labels are equal
/// exactly when the twisting classes are certified equal. `DbXflop { d }` is
/// the Mukai flop of `Picbar^{−1}` carrying the class induced from `α_{−1}^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    DbS,
    DbHilb,
    DbPicbar { d: i64, twist: i64 },
    DbB,
    DbXflop { d: i64 },
}

impl Category {
    pub fn picbar(ctx: &K3Context, d: i64, twist: i64) -> Self {
        let bound = brauer_bound(ctx, d) as i64;
        Category::DbPicbar { d, twist: twist.rem_euclid(bound) }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::DbS => f.write_str("DbS"),
            Category::DbHilb => f.write_str("DbHilb"),
            Category::DbPicbar { d, twist: 0 } => write!(f, "DbPicbar({d})"),
            Category::DbPicbar { d, twist } => write!(f, "DbPicbar({d},{twist})"),
            Category::DbB => f.write_str("DbB"),
            Category::DbXflop { d } => write!(f, "DbXflop({d})"),
        }
    }
}

impl Serialize for Category {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twists_reduce_modulo_the_bound() {
        let c = K3Context::new(3).unwrap();
        // bound(0) = gcd(4, 2) = 2
        assert_eq!(Category::picbar(&c, 0, 3), Category::picbar(&c, 0, 1));
        assert_ne!(Category::picbar(&c, 0, 1), Category::picbar(&c, 0, 0));
        assert_eq!(Category::picbar(&c, 0, -1), Category::DbPicbar { d: 0, twist: 1 });
        // bound(1) = 1: every twist is certified trivial
        assert_eq!(Category::picbar(&c, 1, 5), Category::DbPicbar { d: 1, twist: 0 });
        assert_eq!(Category::picbar(&c, 2, 6).to_string(), "DbPicbar(2,2)");
        assert_eq!(Category::picbar(&c, -3, 0).to_string(), "DbPicbar(-3)");
    }
}
