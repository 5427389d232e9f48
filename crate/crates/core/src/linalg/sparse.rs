//! Finite-support vectors over an ordered basis.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

/// A finite linear combination of basis keys with nonzero [`Scalar`] coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVector<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for SparseVector<K> {
    fn default() -> Self {
        SparseVector { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVector<K> {
    /// The zero vector.
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis vector of `key` with coefficient one.
    pub fn basis(key: K) -> Self {
        let mut v = Self::new();
        v.add_term(key, Scalar::one());
        v
    }

    /// Sums the given terms, merging repeated keys.
    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(terms: I) -> Self {
        let mut v = Self::new();
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    /// Adds `coeff · key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `coeff · key` for an integer coefficient.
    pub fn add_int_term(&mut self, key: K, coeff: i64) {
        if coeff != 0 {
            self.add_term(key, Scalar::from_integer(coeff));
        }
    }

    /// Adds `factor · other` in place.
    pub fn add_scaled(&mut self, other: &Self, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    /// Coefficient of `key` (zero when absent).
    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero vector.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero vector.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending key order.
    pub fn iter(&self) -> btree_map::Iter<'_, K, Scalar> {
        self.terms.iter()
    }

    /// Keys in ascending order.
    pub fn keys(&self) -> btree_map::Keys<'_, K, Scalar> {
        self.terms.keys()
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Self::new();
        }
        SparseVector {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * factor)).collect(),
        }
    }

    /// Multiplies every coefficient by an integer.
    pub fn scale_int(&self, factor: i64) -> Self {
        if factor == 0 {
            return Self::new();
        }
        SparseVector {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.mul_int(factor))).collect(),
        }
    }

    /// Bilinear pairing in which the basis is orthonormal.
    pub fn inner(&self, other: &Self) -> Scalar {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Scalar::zero();
        for (k, c) in &small.terms {
            if let Some(d) = large.terms.get(k) {
                acc += &(c * d);
            }
        }
        acc
    }

    /// Largest absolute coefficient, or zero for the zero vector.
    pub fn max_abs_coeff(&self) -> Scalar {
        self.terms.values().map(Scalar::abs).max().unwrap_or_default()
    }

    /// Extends a basis map linearly: every term `c·k` contributes `c·f(k)`.
    pub fn map_linear<L, F, I>(&self, mut f: F) -> SparseVector<L>
    where
        L: Ord + Clone,
        F: FnMut(&K) -> I,
        I: IntoIterator<Item = (L, Scalar)>,
    {
        let mut out = SparseVector::new();
        for (k, c) in &self.terms {
            for (l, d) in f(k) {
                out.add_term(l, c * &d);
            }
        }
        out
    }

    /// Extends a signed basis map linearly and multiplies by `factor`.
    ///
    /// `f` returns the image key with an integer sign or coefficient, or `None` for zero.
    pub fn map_signed<L, F>(&self, factor: &Scalar, mut f: F) -> SparseVector<L>
    where
        L: Ord + Clone,
        F: FnMut(&K) -> Option<(L, i64)>,
    {
        let mut out = SparseVector::new();
        if factor.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            if let Some((l, s)) = f(k) {
                out.add_term(l, (c * factor).mul_int(s));
            }
        }
        out
    }

    /// Consumes the vector and returns its terms.
    pub fn into_terms(self) -> BTreeMap<K, Scalar> {
        self.terms
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for SparseVector<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<'a, K: Ord + Clone> IntoIterator for &'a SparseVector<K> {
    type Item = (&'a K, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, K, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Ord + Clone> IntoIterator for SparseVector<K> {
    type Item = (K, Scalar);
    type IntoIter = btree_map::IntoIter<K, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<K: Ord + Clone> Add for &SparseVector<K> {
    type Output = SparseVector<K>;
    fn add(self, rhs: &SparseVector<K>) -> SparseVector<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl<K: Ord + Clone> Sub for &SparseVector<K> {
    type Output = SparseVector<K>;
    fn sub(self, rhs: &SparseVector<K>) -> SparseVector<K> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

impl<K: Ord + Clone> Add for SparseVector<K> {
    type Output = SparseVector<K>;
    fn add(mut self, rhs: SparseVector<K>) -> SparseVector<K> {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<K: Ord + Clone> Sub for SparseVector<K> {
    type Output = SparseVector<K>;
    fn sub(mut self, rhs: SparseVector<K>) -> SparseVector<K> {
        for (k, c) in rhs.terms {
            self.add_term(k, -c);
        }
        self
    }
}

impl<K: Ord + Clone> Neg for &SparseVector<K> {
    type Output = SparseVector<K>;
    fn neg(self) -> SparseVector<K> {
        self.scale_int(-1)
    }
}

impl<K: Ord + Clone> Mul<&Scalar> for &SparseVector<K> {
    type Output = SparseVector<K>;
    fn mul(self, rhs: &Scalar) -> SparseVector<K> {
        self.scale(rhs)
    }
}

impl<K: Ord + std::fmt::Debug> std::fmt::Debug for SparseVector<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord<K> {
    state: K,
    coeff: Scalar,
}

impl<K: Ord + Clone + Serialize> Serialize for SparseVector<K> {
    /// Encodes as a list of `{state, coeff}` records in key order.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(k, c)| TermRecord {
            state: k.clone(),
            coeff: c.clone(),
        }))
    }
}

impl<'de, K: Ord + Clone + Deserialize<'de>> Deserialize<'de> for SparseVector<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord<K>>::deserialize(deserializer)?;
        Ok(records.into_iter().map(|r| (r.state, r.coeff)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, surd};

    #[test]
    fn zero_coefficients_are_never_stored() {
        let mut v = SparseVector::<u32>::new();
        v.add_term(3, int(2));
        v.add_term(3, int(-2));
        v.add_term(4, Scalar::zero());
        assert!(v.is_zero());
    }

    #[test]
    fn inner_product_is_orthonormal() {
        let s = SparseVector::basis(1u32);
        let t = SparseVector::basis(2u32);
        assert_eq!(s.inner(&s), int(1));
        assert_eq!(s.inner(&t), int(0));
        let two_s_plus_t = &s.scale_int(2) + &t;
        assert_eq!(two_s_plus_t.inner(&s), int(2));
    }

    #[test]
    fn arithmetic_is_canonical() {
        let v = SparseVector::from_terms([(1u8, surd(1, 1)), (2, int(3))]);
        let w = SparseVector::from_terms([(1u8, surd(-1, -1)), (3, int(1))]);
        let sum = &v + &w;
        assert_eq!(sum, SparseVector::from_terms([(2u8, int(3)), (3, int(1))]));
        assert!((&v - &v).is_zero());
        assert_eq!(v.max_abs_coeff(), int(3));
    }

    #[test]
    fn json_is_a_list_of_records() {
        let v = SparseVector::from_terms([(7i64, int(2))]);
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(j, r#"[{"state":7,"coeff":{"a":"2/1","b":"0/1"}}]"#);
        let back: SparseVector<i64> = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }
}
