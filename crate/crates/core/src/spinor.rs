//! The spinor module: Clifford generators, isotropy operators and the spinor Casimir.
//!
//! A basis state is the orthonormal wedge `a*(X_{m1,l1})⋯a*(X_{mk,lk})|0⟩_S`
//! over ascending modes `(m, l)` with `m > 0 > l`. The Clifford generator
//! `γ_ij` is `√2` times the unit creation operator of mode `(i, j)` when
//! `i > 0 > j`, and `√2` times the unit annihilation operator of mode `(j, i)`
//! when `i < 0 < j`, so `{γ_ij, γ_mn} = 2 δ_in δ_jm`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{insert_sorted, remove_sorted, subsets};
use crate::linalg::{BasisSampler, LinearOperator, SparseVector, SplitMix64};
use crate::scalar::Scalar;

/// A spinor mode `(m, l)` with `m > 0 > l`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct SpinMode {
    /// Positive index.
    pub m: i64,
    /// Negative index.
    pub l: i64,
}

impl SpinMode {
    /// Builds a mode, checking `m > 0 > l`.
    pub fn new(m: i64, l: i64) -> Result<Self> {
        if m > 0 && l < 0 {
            Ok(SpinMode { m, l })
        } else {
            Err(Error::InvalidGammaPair { i: m, j: l })
        }
    }

    /// `max(|m|, |l|)`.
    pub fn bound(&self) -> i64 {
        self.m.max(-self.l)
    }
}

impl TryFrom<(i64, i64)> for SpinMode {
    type Error = Error;
    fn try_from((m, l): (i64, i64)) -> Result<Self> {
        SpinMode::new(m, l)
    }
}

impl From<SpinMode> for (i64, i64) {
    fn from(s: SpinMode) -> Self {
        (s.m, s.l)
    }
}

/// A basis state of the spinor module: an ascending set of occupied modes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinState {
    /// Occupied modes, strictly ascending.
    #[serde(default)]
    pub modes: Vec<SpinMode>,
}

/// A finite linear combination of spinor basis states.
pub type SpinVector = SparseVector<SpinState>;

impl SpinState {
    /// The spinor vacuum `|0⟩_S`.
    pub fn vacuum() -> Self {
        SpinState::default()
    }

    /// Builds a state from `(m, l)` pairs, checking canonical order.
    pub fn new(modes: &[(i64, i64)]) -> Result<Self> {
        let modes = modes
            .iter()
            .map(|&(m, l)| SpinMode::new(m, l))
            .collect::<Result<Vec<_>>>()?;
        if !modes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::NonCanonicalState(format!(
                "modes {modes:?} are not strictly ascending"
            )));
        }
        Ok(SpinState { modes })
    }

    /// Number of occupied modes.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    /// True for the vacuum.
    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest absolute index, zero for the vacuum.
    pub fn bound(&self) -> i64 {
        self.modes.iter().map(SpinMode::bound).max().unwrap_or(0)
    }
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let modes: Vec<String> = self.modes.iter().map(|x| format!("({},{})", x.m, x.l)).collect();
        write!(f, "{{{}}}", modes.join(","))
    }
}

/// Largest absolute index occurring in a spinor vector.
pub fn spin_vector_bound(v: &SpinVector) -> i64 {
    v.keys().map(SpinState::bound).max().unwrap_or(0)
}

fn parity(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_gamma(i: i64, j: i64) -> Result<()> {
    if i.checked_mul(j).is_some_and(|p| p < 0) {
        Ok(())
    } else {
        Err(Error::InvalidGammaPair { i, j })
    }
}

fn check_isotropy(i: i64, j: i64) -> Result<()> {
    if i.checked_mul(j).is_some_and(|p| p > 0) {
        Ok(())
    } else {
        Err(Error::InvalidIsotropyPair { i, j })
    }
}

/// Unit CAR part of `γ_ij` on one basis state, as (image, sign); the `√2` is applied by callers.
pub fn gamma_on_state(i: i64, j: i64, s: &SpinState) -> Option<(SpinState, i64)> {
    let mut out = s.clone();
    let pos = if i > 0 {
        insert_sorted(&mut out.modes, SpinMode { m: i, l: j })?
    } else {
        remove_sorted(&mut out.modes, &SpinMode { m: j, l: i })?
    };
    Some((out, parity(pos)))
}

/// Applies `γ_ij` (with its `√2`) to a vector.
pub fn gamma_apply(i: i64, j: i64, v: &SpinVector) -> Result<SpinVector> {
    check_gamma(i, j)?;
    Ok(v.map_signed(&Scalar::sqrt2(), |s| gamma_on_state(i, j, s)))
}

/// `γ_ij` as a composable operator.
pub fn gamma_op(i: i64, j: i64) -> Result<LinearOperator<SpinState>> {
    check_gamma(i, j)?;
    Ok(LinearOperator::new(move |v| {
        v.map_signed(&Scalar::sqrt2(), |s| gamma_on_state(i, j, s))
    }))
}

/// The cut-off isotropy families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KFamily {
    /// `K^(N)_ij = ½ Σ_{|k|<=N, ik<0} γ_ik γ_kj`.
    KRaw,
    /// `K̃^(N)_ij = K^(N)_ij − δ_ij [i<0] N`.
    KTildeN,
    /// `H^(N)_ij = ¼ Σ_{|k|<=N, ik<0} [γ_ik, γ_kj]`.
    HN,
}

/// `γ_a γ_b` on one basis state without the factor 2 from the two `√2`s.
fn gamma_pair(a: (i64, i64), b: (i64, i64), s: &SpinState) -> Option<(SpinState, i64)> {
    let (t, x) = gamma_on_state(b.0, b.1, s)?;
    let (u, y) = gamma_on_state(a.0, a.1, &t)?;
    Some((u, x * y))
}

fn check_window(n: i64, idx: &[i64]) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("cut-off must be at least 1, got {n}")));
    }
    match idx.iter().find(|k| k.abs() > n) {
        Some(&k) => Err(Error::OutOfWindow { index: k, n }),
        None => Ok(()),
    }
}

/// Evaluates a cut-off isotropy operator literally as its finite sum of Clifford quadratics.
pub fn k_family_apply(family: KFamily, n: i64, i: i64, j: i64, v: &SpinVector) -> Result<SpinVector> {
    check_isotropy(i, j)?;
    check_window(n, &[i, j])?;
    // Each γγ product carries (√2)² = 2.
    let mut out = SpinVector::new();
    for k in (-n..=n).filter(|&k| k != 0 && i * k < 0) {
        match family {
            KFamily::KRaw | KFamily::KTildeN => {
                // ½ · 2 = 1
                out.add_scaled(
                    &v.map_signed(&Scalar::one(), |s| gamma_pair((i, k), (k, j), s)),
                    &Scalar::one(),
                );
            }
            KFamily::HN => {
                // ¼ · 2 = ½ on each ordering
                let half = crate::scalar::frac(1, 2);
                out.add_scaled(&v.map_signed(&half, |s| gamma_pair((i, k), (k, j), s)), &Scalar::one());
                out.add_scaled(
                    &v.map_signed(&-&half, |s| gamma_pair((k, j), (i, k), s)),
                    &Scalar::one(),
                );
            }
        }
    }
    if family == KFamily::KTildeN && i == j && i < 0 {
        out.add_scaled(v, &Scalar::from_integer(-n));
    }
    Ok(out)
}

/// A cut-off isotropy operator as a composable operator.
pub fn k_family_op(family: KFamily, n: i64, i: i64, j: i64) -> Result<LinearOperator<SpinState>> {
    k_family_apply(family, n, i, j, &SpinVector::new())?;
    Ok(LinearOperator::new(move |v| {
        k_family_apply(family, n, i, j, v).expect("validated")
    }))
}

/// Exact `K̃_ij` on one basis state: the derivation induced by
/// `[E_ij, E_ml] = δ_jm E_il − δ_li E_mj` on each occupied mode.
pub fn k_tilde_on_state(i: i64, j: i64, s: &SpinState) -> Vec<(SpinState, i64)> {
    let mut out = Vec::new();
    for (t, mode) in s.modes.iter().enumerate() {
        let (target, coeff) = if i > 0 {
            if mode.m != j {
                continue;
            }
            (SpinMode { m: i, l: mode.l }, 1)
        } else {
            if mode.l != i {
                continue;
            }
            (SpinMode { m: mode.m, l: j }, -1)
        };
        let mut rest = s.modes.clone();
        rest.remove(t);
        if rest.binary_search(&target).is_ok() {
            continue;
        }
        // Move the replaced mode from slot t to its sorted slot.
        let dest = rest.partition_point(|x| x < &target);
        let crossings = dest.abs_diff(t);
        rest.insert(dest, target);
        out.push((SpinState { modes: rest }, coeff * parity(crossings)));
    }
    out
}

/// Applies the exact isotropy operator `K̃_ij` to a vector.
pub fn k_tilde_exact_apply(i: i64, j: i64, v: &SpinVector) -> Result<SpinVector> {
    check_isotropy(i, j)?;
    Ok(v.map_linear(|s| {
        k_tilde_on_state(i, j, s)
            .into_iter()
            .map(|(t, c)| (t, Scalar::from_integer(c)))
    }))
}

/// Exact `K̃_ij` as a composable operator.
pub fn k_tilde_op(i: i64, j: i64) -> Result<LinearOperator<SpinState>> {
    check_isotropy(i, j)?;
    Ok(LinearOperator::new(move |v| {
        v.map_linear(|s| {
            k_tilde_on_state(i, j, s)
                .into_iter()
                .map(|(t, c)| (t, Scalar::from_integer(c)))
        })
    }))
}

/// The fermion number operator: `2k` on a state with `k` modes.
pub fn fermion_number_apply(v: &SpinVector) -> SpinVector {
    v.map_signed(&Scalar::one(), |s| {
        (!s.is_empty()).then(|| (s.clone(), 2 * s.len() as i64))
    })
}

/// `F_(N) = Σ_{0<|i|<=N} sign(i) K̃^(N)_ii`, evaluated literally.
pub fn fermion_number_cutoff_apply(n: i64, v: &SpinVector) -> Result<SpinVector> {
    let mut out = SpinVector::new();
    for i in (-n..=n).filter(|&i| i != 0) {
        out.add_scaled(
            &k_family_apply(KFamily::KTildeN, n, i, i, v)?,
            &Scalar::from_integer(i.signum()),
        );
    }
    Ok(out)
}

/// `Δ_S^(N) = Σ_{ij>0, |i|,|j|<=N} K^(N)_ij K^(N)_ji`, optionally minus `N³`.
///
/// The constancy `Δ_S^(N) = N³` holds only on states supported inside the
/// window, so a wider support is rejected.
pub fn spinor_casimir_apply(n: i64, renormalized: bool, v: &SpinVector) -> Result<SpinVector> {
    check_window(n, &[])?;
    let support = spin_vector_bound(v);
    if support > n {
        return Err(Error::SupportTooLarge { support, limit: n });
    }
    let mut out = SpinVector::new();
    let idx: Vec<i64> = (-n..=n).filter(|&i| i != 0).collect();
    for &i in &idx {
        for &j in idx.iter().filter(|&&j| i * j > 0) {
            let inner = k_family_apply(KFamily::KRaw, n, j, i, v)?;
            out.add_scaled(&k_family_apply(KFamily::KRaw, n, i, j, &inner)?, &Scalar::one());
        }
    }
    if renormalized {
        out.add_scaled(v, &Scalar::from_integer(-n * n * n));
    }
    Ok(out)
}

/// All modes with indices bounded by `n`, ascending.
pub fn modes_within(n: i64) -> Vec<SpinMode> {
    let mut out = Vec::new();
    for m in 1..=n {
        for l in -n..0 {
            out.push(SpinMode { m, l });
        }
    }
    out.sort();
    out
}

/// All spinor states with `k` modes bounded by `n`.
pub fn spin_states_with_len(n: i64, k: usize) -> Vec<SpinState> {
    subsets(&modes_within(n), k)
        .into_iter()
        .map(|modes| SpinState { modes })
        .collect()
}

/// All spinor states with modes bounded by `n`.
pub fn spin_states_within(n: i64) -> Vec<SpinState> {
    let modes = modes_within(n);
    let mut out: Vec<SpinState> = (0..=modes.len()).flat_map(|k| spin_states_with_len(n, k)).collect();
    out.sort();
    out
}

/// Random spinor vectors: up to three distinct modes bounded by the support bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SpinSpace;

impl BasisSampler for SpinSpace {
    type Key = SpinState;

    fn sample_key(&self, rng: &mut SplitMix64, bound: i64) -> SpinState {
        let modes = modes_within(bound);
        let k = rng.below(4.min(modes.len() as u64 + 1)) as usize;
        SpinState {
            modes: rng.choose(&modes, k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_vector;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn st(modes: &[(i64, i64)]) -> SpinVector {
        SpinVector::basis(SpinState::new(modes).unwrap())
    }

    fn vac() -> SpinVector {
        st(&[])
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(
            gamma_apply(1, -1, &vac()).unwrap(),
            st(&[(1, -1)]).scale(&Scalar::sqrt2())
        );
        assert!(gamma_apply(-1, 1, &vac()).unwrap().is_zero());
        let s = st(&[(2, -2)]);
        let a = gamma_apply(1, -1, &gamma_apply(-1, 1, &s).unwrap()).unwrap();
        let b = gamma_apply(-1, 1, &gamma_apply(1, -1, &s).unwrap()).unwrap();
        assert_eq!(&a + &b, s.scale_int(2));
        assert_eq!(
            gamma_apply(1, 2, &vac()).unwrap_err(),
            Error::InvalidGammaPair { i: 1, j: 2 }
        );
    }

    #[test]
    fn k_family_examples() {
        for n in 1..=3 {
            for i in -n..=n {
                for j in -n..=n {
                    if i * j > 0 {
                        assert!(k_family_apply(KFamily::KTildeN, n, i, j, &vac()).unwrap().is_zero());
                    }
                }
            }
        }
        assert_eq!(
            k_family_apply(KFamily::KRaw, 3, -1, -1, &vac()).unwrap(),
            vac().scale_int(3)
        );
        // [K̃^(3)_{1,1}, γ_{1,-2}] |0⟩ = γ_{1,-2} |0⟩
        let g = gamma_apply(1, -2, &vac()).unwrap();
        let kg = k_family_apply(KFamily::KTildeN, 3, 1, 1, &g).unwrap();
        let gk = gamma_apply(1, -2, &k_family_apply(KFamily::KTildeN, 3, 1, 1, &vac()).unwrap()).unwrap();
        assert_eq!(&kg - &gk, g);
        assert_eq!(
            k_family_apply(KFamily::KRaw, 2, 3, 1, &vac()).unwrap_err(),
            Error::OutOfWindow { index: 3, n: 2 }
        );
    }

    #[test]
    fn exact_isotropy_examples() {
        let s = st(&[(1, -1)]);
        assert_eq!(k_tilde_exact_apply(1, 1, &s).unwrap(), s);
        assert!(k_tilde_exact_apply(2, 2, &s).unwrap().is_zero());
        // The derivation rule gives −δ_li E_mj on the negative diagonal.
        assert_eq!(k_tilde_exact_apply(-1, -1, &s).unwrap(), s.scale_int(-1));
        // The literal cut-off sum at N = 2 agrees.
        assert_eq!(
            k_family_apply(KFamily::KTildeN, 2, -1, -1, &s).unwrap(),
            s.scale_int(-1)
        );
    }

    #[test]
    fn fermion_number_examples() {
        assert!(fermion_number_apply(&vac()).is_zero());
        assert_eq!(fermion_number_apply(&st(&[(1, -1)])), st(&[(1, -1)]).scale_int(2));
        assert_eq!(
            fermion_number_apply(&st(&[(1, -1), (2, -3)])),
            st(&[(1, -1), (2, -3)]).scale_int(4)
        );
    }

    #[test]
    fn spinor_casimir_examples() {
        assert_eq!(spinor_casimir_apply(3, false, &vac()).unwrap(), vac().scale_int(27));
        let s = st(&[(1, -1)]);
        assert_eq!(spinor_casimir_apply(2, false, &s).unwrap(), s.scale_int(8));
        assert!(spinor_casimir_apply(2, true, &s).unwrap().is_zero());
        assert_eq!(
            spinor_casimir_apply(1, false, &st(&[(2, -1)])).unwrap_err(),
            Error::SupportTooLarge { support: 2, limit: 1 }
        );
    }

    #[test]
    fn random_spin_vectors_respect_bound() {
        let v = random_vector(&SpinSpace, 7, 3).unwrap();
        for s in v.keys() {
            for m in &s.modes {
                assert!(m.m > 0 && m.m <= 3 && m.l < 0 && m.l >= -3);
            }
        }
    }

    #[test]
    fn json_encoding_of_states() {
        let s = SpinState::new(&[(1, -1), (2, -3)]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"modes":[[1,-1],[2,-3]]}"#);
        assert_eq!(serde_json::from_str::<SpinState>(&j).unwrap(), s);
        assert!(serde_json::from_str::<SpinState>(r#"{"modes":[[-1,1]]}"#).is_err());
    }

    #[test]
    fn h_and_k_tilde_differ_by_diagonal_constants() {
        let n = 3;
        for s in spin_states_within(2).into_iter().take(60) {
            let v = SpinVector::basis(s);
            for i in (-n..=n).filter(|&i| i != 0) {
                for j in (-n..=n).filter(|&j| i * j > 0) {
                    let k = k_family_apply(KFamily::KRaw, n, i, j, &v).unwrap();
                    let kt = k_family_apply(KFamily::KTildeN, n, i, j, &v).unwrap();
                    let h = k_family_apply(KFamily::HN, n, i, j, &v).unwrap();
                    let d = if i == j { 1 } else { 0 };
                    let neg = if i < 0 { 1 } else { 0 };
                    assert_eq!(&k - &kt, v.scale_int(d * neg * n));
                    // H = K − ½ δ_ij N
                    assert_eq!(&k - &h, v.scale(&crate::scalar::frac(d * n, 2)));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 48, rng_seed: proptest::test_runner::RngSeed::Fixed(3), ..ProptestConfig::default() })]

        #[test]
        fn exact_and_cutoff_isotropy_agree_inside_window(seed in any::<u64>(), i in -3i64..=3, j in -3i64..=3, extra in 0i64..2) {
            prop_assume!(i * j > 0);
            let v = random_vector(&SpinSpace, seed, 3).unwrap();
            let n = 3 + extra;
            prop_assert_eq!(k_family_apply(KFamily::KTildeN, n, i, j, &v).unwrap(), k_tilde_exact_apply(i, j, &v).unwrap());
        }

        #[test]
        fn fermion_number_is_signed_trace(seed in any::<u64>()) {
            let v = random_vector(&SpinSpace, seed, 3).unwrap();
            let mut f = SpinVector::new();
            for i in (-3i64..=3).filter(|&i| i != 0) {
                f.add_scaled(&k_tilde_exact_apply(i, i, &v).unwrap(), &int(i.signum()));
            }
            prop_assert_eq!(&f, &fermion_number_apply(&v));
            prop_assert_eq!(fermion_number_cutoff_apply(3, &v).unwrap(), fermion_number_apply(&v));
        }
    }
}
