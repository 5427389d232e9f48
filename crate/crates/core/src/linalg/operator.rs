//! Composable exact linear operators on sparse vectors.

use std::sync::Arc;

use crate::linalg::sparse::SparseVector;
use crate::scalar::Scalar;

type ApplyFn<K> = dyn Fn(&SparseVector<K>) -> SparseVector<K> + Send + Sync;

/// A linear map on finitely supported vectors over the basis `K`.
pub struct LinearOperator<K: Ord> {
    apply: Arc<ApplyFn<K>>,
}

impl<K: Ord> Clone for LinearOperator<K> {
    fn clone(&self) -> Self {
        LinearOperator {
            apply: Arc::clone(&self.apply),
        }
    }
}

impl<K: Ord + Clone + Send + Sync + 'static> LinearOperator<K> {
    /// Wraps a linear function on vectors.
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&SparseVector<K>) -> SparseVector<K> + Send + Sync + 'static,
    {
        LinearOperator { apply: Arc::new(f) }
    }

    /// Builds the operator from its action on basis keys.
    pub fn from_basis<F, I>(f: F) -> Self
    where
        F: Fn(&K) -> I + Send + Sync + 'static,
        I: IntoIterator<Item = (K, Scalar)>,
    {
        Self::new(move |v| v.map_linear(&f))
    }

    /// The zero operator.
    pub fn zero() -> Self {
        Self::new(|_| SparseVector::new())
    }

    /// The identity operator.
    pub fn identity() -> Self {
        Self::new(|v| v.clone())
    }

    /// Applies the operator.
    pub fn apply(&self, v: &SparseVector<K>) -> SparseVector<K> {
        (self.apply)(v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |v| a.apply(&b.apply(v)))
    }

    /// `self + other`.
    pub fn plus(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |v| &a.apply(v) + &b.apply(v))
    }

    /// `self − other`.
    pub fn minus(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |v| &a.apply(v) - &b.apply(v))
    }

    /// `c · self`.
    pub fn scaled(&self, c: Scalar) -> Self {
        let a = self.clone();
        Self::new(move |v| a.apply(v).scale(&c))
    }

    /// The commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).minus(&other.compose(self))
    }

    /// The anticommutator `{self, other}`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).plus(&other.compose(self))
    }
}

/// Largest value of `|⟨A v, w⟩ − ⟨v, B w⟩|` over all ordered pairs from `vs`.
///
/// Zero means `B` acts as the formal adjoint of `A` on the span of the sample.
/// Vectors of different spaces cannot be mixed because the basis type is shared.
pub fn adjoint_residual<K>(a: &LinearOperator<K>, b: &LinearOperator<K>, vs: &[SparseVector<K>]) -> Scalar
where
    K: Ord + Clone + Send + Sync + 'static,
{
    let av: Vec<_> = vs.iter().map(|v| a.apply(v)).collect();
    let bw: Vec<_> = vs.iter().map(|w| b.apply(w)).collect();
    let mut worst = Scalar::zero();
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in vs.iter().enumerate() {
            let r = (&av[i].inner(w) - &v.inner(&bw[j])).abs();
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn zero_operators_are_adjoint() {
        let z = LinearOperator::<u8>::zero();
        let vs = vec![SparseVector::basis(1u8), SparseVector::basis(2u8)];
        assert_eq!(adjoint_residual(&z, &z, &vs), Scalar::zero());
    }

    #[test]
    fn shift_and_its_transpose() {
        // e_k -> e_{k+1} and e_k -> e_{k-1} are mutual adjoints.
        let up = LinearOperator::from_basis(|k: &i32| [(k + 1, int(1))]);
        let down = LinearOperator::from_basis(|k: &i32| [(k - 1, int(1))]);
        let vs: Vec<_> = (0..4).map(SparseVector::basis).collect();
        assert_eq!(adjoint_residual(&up, &down, &vs), Scalar::zero());
        assert_eq!(adjoint_residual(&up, &up, &vs), int(1));
    }

    #[test]
    fn commutator_of_commuting_maps_vanishes() {
        let two = LinearOperator::<u8>::identity().scaled(int(2));
        let id = LinearOperator::identity();
        let v = SparseVector::basis(3u8);
        assert!(two.commutator(&id).apply(&v).is_zero());
        assert_eq!(two.anticommutator(&id).apply(&v), v.scale_int(4));
    }
}
