use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;
use crate::snf::invariant_factors;

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k`
/// with `d_1 | d_2 | … | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub rank: usize,
    #[serde(with = "decimal_list")]
    pub torsion: Vec<BigInt>,
}

mod decimal_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

impl FgAbGroup {
    pub fn zero() -> Self {
        FgAbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = 1` the trivial group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, &[n.into()])
    }

    /// Normalizes any list of cyclic orders into invariant-factor form.
    /// Zero orders count as free summands, units are dropped.
    pub fn from_cyclic_orders(rank: usize, orders: &[BigInt]) -> Self {
        let mut rank = rank;
        let mut finite = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                rank += 1;
            } else if !o.is_one() {
                finite.push(o);
            }
        }
        if finite.len() <= 1 {
            return FgAbGroup { rank, torsion: finite };
        }
        let torsion = invariant_factors(&IntMatrix::diagonal(&finite)).into_iter().filter(|d| !d.is_one()).collect();
        FgAbGroup { rank, torsion }
    }

    /// Cokernel of an integer matrix, `Z^rows / image`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let factors = invariant_factors(a);
        let rank = a.rows() - factors.len();
        Self::from_cyclic_orders(rank, &factors)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        Self::from_cyclic_orders(self.rank + other.rank, &orders)
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("ℤ/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}
