//! Casimir operators, highest weight vectors and Heisenberg generators on the wedge module.
//!
//! All variants are quadratic expressions in `E_ij = r̂(E_ij)` over a window of
//! indices. The window variants sum literally over `|i|, |j| <= N`; the limit
//! variants act exactly on finitely supported vectors by summing over the
//! window spanned by each basis state, outside of which every term vanishes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{rhat_on_state, vector_bound, FockState, FockVector, Lattice, LieElement};
use crate::scalar::Scalar;

/// Which Casimir expression to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CasimirTag {
    /// `Σ_{|i|,|j|<=N} E_ij E_ji`.
    #[serde(rename = "naive_N")]
    NaiveN,
    /// `2 Σ_{j<i} E_ij E_ji + Σ_{i<j} (E_ii − E_jj) + Σ E_ii²` over the window.
    #[serde(rename = "normal_N")]
    NormalN,
    /// `2 Σ_{j<i} E_ij E_ji + Σ E_ii (E_ii − 2i)` over all indices.
    #[serde(rename = "limit")]
    Limit,
    /// `2 Σ_{j<i} E_ij E_ji + Σ E_ii (E_ii − 2i + sign i)` over the window.
    #[serde(rename = "g_ren_N")]
    GRenN,
    /// The same expression as `g_ren_N` over all indices.
    #[serde(rename = "g_limit")]
    GLimit,
}

impl CasimirTag {
    /// True for the tags that need a cut-off.
    pub fn is_windowed(self) -> bool {
        matches!(self, CasimirTag::NaiveN | CasimirTag::NormalN | CasimirTag::GRenN)
    }
}

impl fmt::Display for CasimirTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CasimirTag::NaiveN => "naive_N",
            CasimirTag::NormalN => "normal_N",
            CasimirTag::Limit => "limit",
            CasimirTag::GRenN => "g_ren_N",
            CasimirTag::GLimit => "g_limit",
        })
    }
}

/// A Casimir expression together with its cut-off and index lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CasimirVariant {
    /// The expression.
    pub tag: CasimirTag,
    /// Cut-off, required exactly for the window tags.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    /// Index lattice of the states it acts on.
    pub lattice: Lattice,
}

impl CasimirVariant {
    /// `naive_N` on the given lattice.
    pub fn naive(n: i64, lattice: Lattice) -> Self {
        CasimirVariant {
            tag: CasimirTag::NaiveN,
            n: Some(n),
            lattice,
        }
    }

    /// `normal_N` on the given lattice.
    pub fn normal(n: i64, lattice: Lattice) -> Self {
        CasimirVariant {
            tag: CasimirTag::NormalN,
            n: Some(n),
            lattice,
        }
    }

    /// `Σ E_ii (E_ii − 2i)` plus the off-diagonal part over all indices.
    ///
    /// On the lattice with zero this is the stable value of `normal_N`; on the
    /// lattice without zero `normal_N` stabilizes to [`CasimirVariant::g_limit`] instead.
    pub fn limit(lattice: Lattice) -> Self {
        CasimirVariant {
            tag: CasimirTag::Limit,
            n: None,
            lattice,
        }
    }

    /// `g_ren_N` on the lattice without zero.
    pub fn g_ren(n: i64) -> Self {
        CasimirVariant {
            tag: CasimirTag::GRenN,
            n: Some(n),
            lattice: Lattice::ExcludeZero,
        }
    }

    /// The exact `Δ_g` on the lattice without zero.
    pub fn g_limit() -> Self {
        CasimirVariant {
            tag: CasimirTag::GLimit,
            n: None,
            lattice: Lattice::ExcludeZero,
        }
    }

    /// Checks that the cut-off is present exactly when the tag needs one.
    pub fn validate(&self) -> Result<()> {
        match (self.tag.is_windowed(), self.n) {
            (true, Some(n)) if n >= 1 => Ok(()),
            (true, Some(n)) => Err(Error::InvalidVariant(format!("{} needs N >= 1, got {n}", self.tag))),
            (true, None) => Err(Error::InvalidVariant(format!("{} needs a cut-off N", self.tag))),
            (false, None) => Ok(()),
            (false, Some(_)) => Err(Error::InvalidVariant(format!("{} takes no cut-off", self.tag))),
        }
    }
}

/// Eigenvalue of the diagonal generator `E_ii` on a basis state.
pub fn diagonal_weight(lattice: Lattice, i: i64, s: &FockState) -> i64 {
    rhat_on_state(lattice, i, i, s).map_or(0, |(_, c)| c)
}

/// `E_ij E_ji` on one basis state, accumulated into `out` with weight `factor`.
fn add_quadratic(lattice: Lattice, i: i64, j: i64, s: &FockState, factor: i64, out: &mut FockVector) {
    if let Some((t, a)) = rhat_on_state(lattice, j, i, s) {
        if let Some((u, b)) = rhat_on_state(lattice, i, j, &t) {
            out.add_int_term(u, factor * a * b);
        }
    }
}

fn casimir_on_state(variant: &CasimirVariant, s: &FockState) -> FockVector {
    let lattice = variant.lattice;
    let window = variant.n.unwrap_or_else(|| s.bound().max(1));
    let idx = lattice.window(window);
    let mut out = FockVector::new();
    if variant.tag == CasimirTag::NaiveN {
        for &i in &idx {
            for &j in &idx {
                add_quadratic(lattice, i, j, s, 1, &mut out);
            }
        }
        return out;
    }
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[..a] {
            add_quadratic(lattice, i, j, s, 2, &mut out);
        }
    }
    let mut diag = 0i64;
    for &i in &idx {
        let e = diagonal_weight(lattice, i, s);
        if e == 0 {
            continue;
        }
        let shift = match variant.tag {
            CasimirTag::NormalN => {
                // Σ_{i<j} (E_ii − E_jj) collects, for each k, (#{j > k} − #{j < k}) E_kk.
                let above = idx.iter().filter(|&&j| j > i).count() as i64;
                let below = idx.iter().filter(|&&j| j < i).count() as i64;
                above - below
            }
            CasimirTag::Limit => -2 * i,
            CasimirTag::GRenN | CasimirTag::GLimit => -2 * i + i.signum(),
            CasimirTag::NaiveN => unreachable!("handled above"),
        };
        diag += e * (e + shift);
    }
    out.add_int_term(s.clone(), diag);
    out
}

/// Applies a Casimir variant to a vector.
///
/// Window variants reject vectors supported outside `|k| <= N`, since the
/// identities they satisfy are interior statements.
pub fn casimir_apply(variant: &CasimirVariant, v: &FockVector) -> Result<FockVector> {
    variant.validate()?;
    for s in v.keys() {
        s.validate(variant.lattice)?;
    }
    if let Some(n) = variant.n {
        let support = vector_bound(v);
        if support > n {
            return Err(Error::SupportTooLarge { support, limit: n });
        }
    }
    Ok(v.map_linear(|s| casimir_on_state(variant, s)))
}

/// Closed form of `[Δ^(N), E_mn]` for a window variant: `2 sign(m) E_mn` when
/// `m` and `n` lie in opposite halves, zero otherwise.
///
/// On the lattice with zero, the sign is the half sign, so zero counts as positive.
pub fn casimir_commutator(variant: &CasimirVariant, m: i64, n: i64) -> Result<LieElement> {
    variant.validate()?;
    let Some(cut) = variant.n else {
        return Err(Error::InvalidVariant(format!("{} has no cut-off", variant.tag)));
    };
    variant.lattice.check(m)?;
    variant.lattice.check(n)?;
    for k in [m, n] {
        if k.abs() > cut {
            return Err(Error::OutOfWindow { index: k, n: cut });
        }
    }
    let lattice = variant.lattice;
    if lattice.is_plus(m) == lattice.is_plus(n) {
        return Ok(LieElement::zero());
    }
    Ok(LieElement::unit(m, n).scaled(&Scalar::from_integer(2 * lattice.half_sign(m))))
}

/// The highest weight vector of charge `m` on the lattice with zero.
pub fn hw_state(m: i64) -> FockState {
    match m {
        0 => FockState::vacuum(),
        m if m > 0 => FockState {
            plus: (0..m).collect(),
            minus: Vec::new(),
        },
        m => FockState {
            plus: Vec::new(),
            minus: (m..0).collect(),
        },
    }
}

/// The diagonal weight `λ̃_i` of the charge-`m` highest weight vector:
/// `1` for `0 <= i <= m − 1`, `−1` for `m <= i < 0`, zero otherwise.
pub fn weight(m: i64, i: i64) -> i64 {
    if m > 0 && (0..m).contains(&i) {
        1
    } else if m < 0 && (m..0).contains(&i) {
        -1
    } else {
        0
    }
}

/// `λ̃_i` for every `|i| <= n`, ascending in `i`.
pub fn weights(m: i64, n: i64) -> Vec<(i64, i64)> {
    (-n..=n).map(|i| (i, weight(m, i))).collect()
}

/// The number of particle/antiparticle creator pairs of a canonical basis state.
pub fn num_of(w: &FockState) -> i64 {
    w.plus.len().min(w.minus.len()) as i64
}

/// `2·Num(w) + 1 − (m − 1)²`.
pub fn eigenvalue_law(num: i64, m: i64) -> i64 {
    2 * num + 1 - (m - 1) * (m - 1)
}

/// Applies the windowed Heisenberg generator `s_k = Σ_i E_{i,i+k}` on the lattice with zero.
///
/// The vector must be supported in `|index| <= N − |k|`, so that no term of
/// `s_k` is cut off by the window.
pub fn heisenberg_apply(n: i64, k: i64, v: &FockVector) -> Result<FockVector> {
    if k == 0 {
        return Err(Error::ZeroHeisenbergIndex);
    }
    if n < 1 {
        return Err(Error::InvalidParameter(format!("cut-off must be at least 1, got {n}")));
    }
    let lattice = Lattice::IncludeZero;
    let limit = n - k.abs();
    let support = vector_bound(v);
    if support > limit {
        return Err(Error::SupportTooLarge { support, limit });
    }
    let lo = (-n).max(-n - k);
    let hi = n.min(n - k);
    Ok(v.map_linear(|s| {
        let mut out = FockVector::new();
        for i in lo..=hi {
            if let Some((t, c)) = rhat_on_state(lattice, i, i + k, s) {
                out.add_int_term(t, c);
            }
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{bounded_states, charge_zero_states, rhat_apply, FockSpace};
    use crate::linalg::random_vector;
    use proptest::prelude::*;

    const INC: Lattice = Lattice::IncludeZero;
    const EXC: Lattice = Lattice::ExcludeZero;

    fn b(s: FockState) -> FockVector {
        FockVector::basis(s)
    }

    fn st(plus: &[i64], minus: &[i64], lattice: Lattice) -> FockState {
        FockState::new(plus.to_vec(), minus.to_vec(), lattice).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let lim = CasimirVariant::limit(INC);
        assert!(casimir_apply(&lim, &b(FockState::vacuum())).unwrap().is_zero());
        let psi1 = b(hw_state(1));
        assert_eq!(casimir_apply(&lim, &psi1).unwrap(), psi1);
        let w = rhat_apply(INC, 1, -1, &b(FockState::vacuum())).unwrap();
        assert_eq!(casimir_apply(&lim, &w).unwrap(), w.scale_int(2));
    }

    #[test]
    fn highest_weight_states_and_weights() {
        assert_eq!(hw_state(0), FockState::vacuum());
        assert_eq!(hw_state(2), st(&[0, 1], &[], INC));
        assert_eq!(hw_state(-1), st(&[], &[-1], INC));
        for m in -3..=3 {
            let psi = hw_state(m);
            let n = m.abs() + 2;
            for i in -n..=n {
                assert_eq!(diagonal_weight(INC, i, &psi), weight(m, i), "m={m} i={i}");
                for j in i + 1..=n {
                    assert!(rhat_on_state(INC, i, j, &psi).is_none(), "E_{i},{j} on ψ_{m}");
                }
            }
        }
        assert_eq!(weights(2, 2), vec![(-2, 0), (-1, 0), (0, 1), (1, 1), (2, 0)]);
    }

    #[test]
    fn weights_add_on_tensor_products() {
        for m in -2..=2 {
            for k in -2..=2 {
                for i in -4..=4 {
                    let total = diagonal_weight(INC, i, &hw_state(m)) + diagonal_weight(INC, i, &hw_state(k));
                    assert_eq!(total, weight(m, i) + weight(k, i));
                }
            }
        }
    }

    #[test]
    fn hw_eigenvalues_on_positive_charges() {
        let lim = CasimirVariant::limit(INC);
        for m in 0..=3 {
            let psi = b(hw_state(m));
            assert_eq!(casimir_apply(&lim, &psi).unwrap(), psi.scale_int(-m * (m - 2)));
        }
    }

    #[test]
    fn hw_eigenvalues_on_negative_charges_are_minus_m_squared() {
        let lim = CasimirVariant::limit(INC);
        for m in -3..0 {
            let psi = b(hw_state(m));
            assert_eq!(casimir_apply(&lim, &psi).unwrap(), psi.scale_int(-m * m));
        }
    }

    #[test]
    fn eigenvalue_law_by_charge() {
        // Nonnegative charges follow 2·Num + 1 − (m − 1)²; negative charges give 2·Num − m².
        let lim = CasimirVariant::limit(INC);
        for s in bounded_states(INC, 4) {
            let m = s.charge();
            let expected = if m >= 0 {
                eigenvalue_law(num_of(&s), m)
            } else {
                2 * num_of(&s) - m * m
            };
            let v = b(s);
            assert_eq!(casimir_apply(&lim, &v).unwrap(), v.scale_int(expected));
        }
    }

    #[test]
    fn num_of_examples() {
        assert_eq!(num_of(&FockState::vacuum()), 0);
        assert_eq!(num_of(&st(&[1], &[-1], EXC)), 1);
        assert_eq!(num_of(&st(&[1, 2], &[-3, -1], EXC)), 2);
    }

    #[test]
    fn commutator_examples() {
        let v = CasimirVariant::normal(3, INC);
        assert_eq!(
            casimir_commutator(&v, 1, -1).unwrap(),
            LieElement::unit(1, -1).scaled(&Scalar::from_integer(2))
        );
        assert!(casimir_commutator(&v, 1, 2).unwrap().is_zero());
        assert_eq!(
            casimir_commutator(&v, -2, 2).unwrap(),
            LieElement::unit(-2, 2).scaled(&Scalar::from_integer(-2))
        );
        assert_eq!(
            casimir_commutator(&v, 4, 1).unwrap_err(),
            Error::OutOfWindow { index: 4, n: 3 }
        );
        assert!(matches!(
            casimir_commutator(&CasimirVariant::limit(INC), 1, -1),
            Err(Error::InvalidVariant(_))
        ));
    }

    #[test]
    fn brute_force_commutator_matches_closed_form() {
        for (lattice, n) in [(INC, 2), (EXC, 2)] {
            for variant in [CasimirVariant::naive(n, lattice), CasimirVariant::normal(n, lattice)] {
                for s in bounded_states(lattice, n) {
                    let v = b(s);
                    for m in lattice.window(n) {
                        for k in lattice.window(n) {
                            let ev = rhat_apply(lattice, m, k, &v).unwrap();
                            let lhs = &casimir_apply(&variant, &ev).unwrap()
                                - &rhat_apply(lattice, m, k, &casimir_apply(&variant, &v).unwrap()).unwrap();
                            let closed = casimir_commutator(&variant, m, k).unwrap();
                            let rhs = crate::fock::lie_apply(lattice, &closed, &v).unwrap();
                            assert_eq!(lhs, rhs, "{variant:?} m={m} n={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn window_identity_on_lattice_with_zero() {
        let n = 3;
        let idx = INC.window(n);
        for s in bounded_states(INC, n) {
            let mut lhs = 0;
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    lhs += diagonal_weight(INC, i, &s) - diagonal_weight(INC, j, &s);
                }
            }
            let rhs: i64 = idx.iter().map(|&k| -2 * k * diagonal_weight(INC, k, &s)).sum();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn window_identity_without_zero_has_sign_correction() {
        // The analogue without zero, derived here by direct counting:
        // Σ_{i<j} (E_ii − E_jj) = Σ_k (−2k + sign k) E_kk.
        let n = 3;
        let idx = EXC.window(n);
        for s in bounded_states(EXC, n) {
            let mut lhs = 0;
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    lhs += diagonal_weight(EXC, i, &s) - diagonal_weight(EXC, j, &s);
                }
            }
            let rhs: i64 = idx
                .iter()
                .map(|&k| (-2 * k + k.signum()) * diagonal_weight(EXC, k, &s))
                .sum();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn naive_and_normal_differ_by_window_constant() {
        for n in 1..=3 {
            for (lattice, constant) in [(INC, n * (n + 1)), (EXC, n * n)] {
                for s in bounded_states(lattice, n) {
                    let v = b(s);
                    let naive = casimir_apply(&CasimirVariant::naive(n, lattice), &v).unwrap();
                    let normal = casimir_apply(&CasimirVariant::normal(n, lattice), &v).unwrap();
                    assert_eq!(&naive - &normal, v.scale_int(constant));
                }
            }
        }
    }

    #[test]
    fn normal_and_renormalized_coincide_without_zero() {
        for n in 1..=3 {
            for s in bounded_states(EXC, n) {
                let v = b(s);
                let normal = casimir_apply(&CasimirVariant::normal(n, EXC), &v).unwrap();
                let g = casimir_apply(&CasimirVariant::g_ren(n), &v).unwrap();
                assert_eq!(normal, g);
            }
        }
    }

    #[test]
    fn lattice_variants_differ_by_charge_on_shared_states() {
        for s in bounded_states(EXC, 3) {
            let v = b(s.clone());
            let with_zero = casimir_apply(&CasimirVariant::limit(INC), &v).unwrap();
            let without = casimir_apply(&CasimirVariant::g_limit(), &v).unwrap();
            assert_eq!(&with_zero - &without, v.scale_int(s.charge()));
        }
    }

    #[test]
    fn delta_g_on_charge_zero_pairs() {
        let g = CasimirVariant::g_limit();
        for m in 0..=4 {
            for s in charge_zero_states(EXC, 4, m) {
                let v = b(s);
                assert_eq!(casimir_apply(&g, &v).unwrap(), v.scale_int(2 * m as i64));
            }
        }
    }

    #[test]
    fn heisenberg_examples() {
        let vac = b(FockState::vacuum());
        let comm = |n: i64, k: i64, v: &FockVector| {
            let a = heisenberg_apply(6, n, &heisenberg_apply(6, k, v).unwrap()).unwrap();
            let c = heisenberg_apply(6, k, &heisenberg_apply(6, n, v).unwrap()).unwrap();
            &a - &c
        };
        assert_eq!(comm(2, -2, &vac), vac.scale_int(2));
        assert!(comm(1, 2, &vac).is_zero());
        // [Δ, s_{−1}] |0⟩ = 2 E_{0,−1} |0⟩.
        let lim = CasimirVariant::limit(INC);
        let s = heisenberg_apply(6, -1, &vac).unwrap();
        let lhs =
            &casimir_apply(&lim, &s).unwrap() - &heisenberg_apply(6, -1, &casimir_apply(&lim, &vac).unwrap()).unwrap();
        assert_eq!(lhs, rhat_apply(INC, 0, -1, &vac).unwrap().scale_int(2));
        assert!(rhat_apply(INC, 1, 0, &vac).unwrap().is_zero());
        assert_eq!(heisenberg_apply(3, 0, &vac).unwrap_err(), Error::ZeroHeisenbergIndex);
        let edge = b(st(&[3], &[], INC));
        assert_eq!(
            heisenberg_apply(3, 1, &edge).unwrap_err(),
            Error::SupportTooLarge { support: 3, limit: 2 }
        );
    }

    #[test]
    fn variant_validation_and_json() {
        let v = CasimirVariant::normal(4, INC);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"tag":"normal_N","N":4,"lattice":"include0"}"#
        );
        let back: CasimirVariant = serde_json::from_str(r#"{"tag":"g_limit","lattice":"exclude0"}"#).unwrap();
        assert_eq!(back, CasimirVariant::g_limit());
        let missing = CasimirVariant {
            tag: CasimirTag::NaiveN,
            n: None,
            lattice: INC,
        };
        assert!(matches!(
            casimir_apply(&missing, &FockVector::new()),
            Err(Error::InvalidVariant(_))
        ));
        let extra = CasimirVariant {
            tag: CasimirTag::Limit,
            n: Some(2),
            lattice: INC,
        };
        assert!(matches!(extra.validate(), Err(Error::InvalidVariant(_))));
        let zero = b(st(&[0], &[], INC));
        assert!(matches!(
            casimir_apply(&CasimirVariant::g_limit(), &zero),
            Err(Error::IndexNotInLattice { .. })
        ));
        let wide = b(st(&[3], &[], INC));
        assert_eq!(
            casimir_apply(&CasimirVariant::normal(2, INC), &wide).unwrap_err(),
            Error::SupportTooLarge { support: 3, limit: 2 }
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(11), ..ProptestConfig::default() })]

        #[test]
        fn windowed_casimirs_stabilize(seed in any::<u64>(), extra in 0i64..3) {
            let v = random_vector(&FockSpace { lattice: INC }, seed, 3).unwrap();
            let n = vector_bound(&v).max(1) + extra;
            prop_assert_eq!(
                casimir_apply(&CasimirVariant::normal(n, INC), &v).unwrap(),
                casimir_apply(&CasimirVariant::limit(INC), &v).unwrap()
            );
            let w = random_vector(&FockSpace { lattice: EXC }, seed, 3).unwrap();
            let m = vector_bound(&w).max(1) + extra;
            prop_assert_eq!(
                casimir_apply(&CasimirVariant::g_ren(m), &w).unwrap(),
                casimir_apply(&CasimirVariant::g_limit(), &w).unwrap()
            );
        }

        #[test]
        fn heisenberg_relation_on_interior_vectors(seed in any::<u64>(), a in -2i64..=2, c in -2i64..=2) {
            prop_assume!(a != 0 && c != 0);
            let v = random_vector(&FockSpace { lattice: INC }, seed, 2).unwrap();
            let n = 2 + a.abs() + c.abs();
            let lhs = &heisenberg_apply(n, a, &heisenberg_apply(n, c, &v).unwrap()).unwrap()
                - &heisenberg_apply(n, c, &heisenberg_apply(n, a, &v).unwrap()).unwrap();
            let expected = if a == -c { v.scale_int(a) } else { FockVector::new() };
            prop_assert_eq!(lhs, expected);
        }
    }
}
