//! The tensor space, the Dirac operator, the diagonal action and the invariant sector.
//!
//! Tensor states pair a Fock state on the lattice without zero with a spinor
//! state. Operators of the form `A ⊗ B` act componentwise with no extra sign.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::casimir::{casimir_apply, CasimirVariant};
use crate::error::{Error, Result};
use crate::fock::{charge_zero_states, rhat_on_state, rhat_op, ChargeZeroSpace, FockState, FockVector, Lattice};
use crate::linalg::{BasisSampler, LinearOperator, RowReducer, SparseVector, SplitMix64};
use crate::scalar::{frac, Rational, Scalar};
use crate::spinor::{
    fermion_number_apply, fermion_number_cutoff_apply, gamma_on_state, gamma_op, k_family_op, k_tilde_on_state,
    spin_states_with_len, KFamily, SpinSpace, SpinState, SpinVector,
};

/// The Fock lattice of the tensor space.
pub const LATTICE: Lattice = Lattice::ExcludeZero;

/// A basis state of the tensor space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorState {
    /// Fock factor.
    pub fock: FockState,
    /// Spinor factor.
    pub spin: SpinState,
}

/// A finite linear combination of tensor basis states.
pub type TensorVector = SparseVector<TensorState>;

impl TensorState {
    /// `|0⟩ ⊗ |0⟩_S`.
    pub fn vacuum() -> Self {
        TensorState::default()
    }

    /// Pairs two basis states.
    pub fn new(fock: FockState, spin: SpinState) -> Self {
        TensorState { fock, spin }
    }

    /// Largest absolute index in either factor.
    pub fn bound(&self) -> i64 {
        self.fock.bound().max(self.spin.bound())
    }
}

impl fmt::Display for TensorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.fock, self.spin)
    }
}

/// `|0⟩ ⊗ |0⟩_S` as a vector.
pub fn tensor_vacuum() -> TensorVector {
    TensorVector::basis(TensorState::vacuum())
}

/// The tensor product of two vectors.
pub fn tensor(f: &FockVector, s: &SpinVector) -> TensorVector {
    let mut out = TensorVector::new();
    for (a, x) in f {
        for (b, y) in s {
            out.add_term(TensorState::new(a.clone(), b.clone()), x * y);
        }
    }
    out
}

/// Largest absolute index occurring in a tensor vector.
pub fn tensor_bound(v: &TensorVector) -> i64 {
    v.keys().map(TensorState::bound).max().unwrap_or(0)
}

/// Applies `A ⊗ B` to a vector.
pub fn kron_apply(a: &LinearOperator<FockState>, b: &LinearOperator<SpinState>, v: &TensorVector) -> TensorVector {
    let mut out = TensorVector::new();
    for (t, c) in v {
        let f = a.apply(&FockVector::basis(t.fock.clone()));
        if f.is_zero() {
            continue;
        }
        let s = b.apply(&SpinVector::basis(t.spin.clone()));
        out.add_scaled(&tensor(&f, &s), c);
    }
    out
}

/// `E_ij ⊗ γ_ji` on one basis state, as (image, sign), without the `√2`.
fn e_gamma_on_state(i: i64, j: i64, t: &TensorState) -> Option<(TensorState, i64)> {
    let (spin, b) = gamma_on_state(j, i, &t.spin)?;
    let (fock, a) = rhat_on_state(LATTICE, i, j, &t.fock)?;
    Some((TensorState { fock, spin }, a * b))
}

fn half_sqrt2() -> Scalar {
    &Scalar::sqrt2() * &frac(1, 2)
}

/// The Dirac operator `D = ½ Σ_{ij<0} E_ij ⊗ γ_ji`, applied exactly.
///
/// On a basis state only finitely many terms survive: `E_ij ⊗ γ_ji` with
/// `i > 0 > j` needs the mode `(i, j)` in the spinor, and with `i < 0 < j` it
/// needs the particle `j` and antiparticle `i` in the Fock state.
pub fn dirac_apply(v: &TensorVector) -> TensorVector {
    let factor = half_sqrt2();
    v.map_linear(|t| {
        let mut out = Vec::new();
        for mode in &t.spin.modes {
            if let Some((u, s)) = e_gamma_on_state(mode.m, mode.l, t) {
                out.push((u, factor.mul_int(s)));
            }
        }
        for &i in &t.fock.minus {
            for &j in &t.fock.plus {
                if let Some((u, s)) = e_gamma_on_state(i, j, t) {
                    out.push((u, factor.mul_int(s)));
                }
            }
        }
        out
    })
}

/// The cut-off Dirac operator `D_(N) = ½ Σ_{|i|,|j|<=N, ij<0} E_ij ⊗ γ_ji`, summed literally.
pub fn dirac_cutoff_apply(n: i64, v: &TensorVector) -> TensorVector {
    let factor = half_sqrt2();
    let idx = LATTICE.window(n.max(0));
    v.map_linear(|t| {
        let mut out = Vec::new();
        for &i in &idx {
            for &j in idx.iter().filter(|&&j| i * j < 0) {
                if let Some((u, s)) = e_gamma_on_state(i, j, t) {
                    out.push((u, factor.mul_int(s)));
                }
            }
        }
        out
    })
}

fn check_isotropy(p: i64, q: i64) -> Result<()> {
    if p.checked_mul(q).is_some_and(|x| x > 0) {
        Ok(())
    } else {
        Err(Error::InvalidIsotropyPair { i: p, j: q })
    }
}

/// `ρ(E_pq) = r̂(E_pq) ⊗ 1 + 1 ⊗ K̃_pq` on one basis state.
fn rho_on_state(p: i64, q: i64, t: &TensorState) -> Vec<(TensorState, i64)> {
    let mut out = Vec::new();
    if let Some((fock, c)) = rhat_on_state(LATTICE, p, q, &t.fock) {
        out.push((
            TensorState {
                fock,
                spin: t.spin.clone(),
            },
            c,
        ));
    }
    for (spin, c) in k_tilde_on_state(p, q, &t.spin) {
        out.push((
            TensorState {
                fock: t.fock.clone(),
                spin,
            },
            c,
        ));
    }
    out
}

/// Applies the diagonal action `ρ(E_pq)` for `pq > 0`.
pub fn rho_apply(p: i64, q: i64, v: &TensorVector) -> Result<TensorVector> {
    check_isotropy(p, q)?;
    Ok(v.map_linear(|t| {
        rho_on_state(p, q, t)
            .into_iter()
            .map(|(u, c)| (u, Scalar::from_integer(c)))
    }))
}

/// The cut-off diagonal action `r̂(E_pq) ⊗ 1 + 1 ⊗ K̃^(N)_pq`.
pub fn rho_cutoff_op(n: i64, p: i64, q: i64) -> Result<LinearOperator<TensorState>> {
    check_isotropy(p, q)?;
    let e = rhat_op(LATTICE, p, q)?;
    let k = k_family_op(KFamily::KTildeN, n, p, q)?;
    let (one_f, one_s) = (LinearOperator::identity(), LinearOperator::identity());
    Ok(LinearOperator::new(move |v| {
        &kron_apply(&e, &one_s, v) + &kron_apply(&one_f, &k, v)
    }))
}

fn isotropy_pairs(n: i64) -> Vec<(i64, i64)> {
    let idx = LATTICE.window(n);
    let mut out = Vec::new();
    for &p in &idx {
        for &q in idx.iter().filter(|&&q| p * q > 0) {
            out.push((p, q));
        }
    }
    out
}

/// The cut-off diagonal Casimir `Δ_ρ^(N) = Σ_{ij>0, |i|,|j|<=N} E^(N)_{ij,ρ} E^(N)_{ji,ρ}`.
pub fn diagonal_casimir_apply(n: i64, v: &TensorVector) -> Result<TensorVector> {
    let mut out = TensorVector::new();
    for (i, j) in isotropy_pairs(n) {
        let inner = rho_cutoff_op(n, j, i)?.apply(v);
        out.add_scaled(&rho_cutoff_op(n, i, j)?.apply(&inner), &Scalar::one());
    }
    Ok(out)
}

/// `Δ_g ⊗ 1 + 1 ⊗ F`, both diagonal on charge-zero tensor states.
pub fn t_square_apply(v: &TensorVector) -> Result<TensorVector> {
    let g = CasimirVariant::g_limit();
    let mut out = TensorVector::new();
    for (t, c) in v {
        let f = FockVector::basis(t.fock.clone());
        let s = SpinVector::basis(t.spin.clone());
        out.add_scaled(&tensor(&casimir_apply(&g, &f)?, &s), c);
        out.add_scaled(&tensor(&f, &fermion_number_apply(&s)), c);
    }
    Ok(out)
}

/// Which right-hand side of the square identity to compare against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareForm {
    /// The direct expansion of `D_(N)²` into commutator, Clifford and quadratic terms.
    Raw,
    /// `Δ_g^(N) ⊗ 1 − Δ_h,diag^(N) + Σ 1 ⊗ H_ij H_ji + 1 ⊗ Σ sign(i) H_ii`.
    Hk,
    /// `Δ_g,ren^(N) ⊗ 1 + 1 ⊗ F_(N)`, claimed on invariant vectors only.
    Final,
}

impl fmt::Display for SquareForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareForm::Raw => "raw",
            SquareForm::Hk => "hk",
            SquareForm::Final => "final",
        })
    }
}

fn fock_casimir_op(variant: CasimirVariant) -> LinearOperator<FockState> {
    LinearOperator::new(move |v| casimir_apply(&variant, v).expect("support checked by caller"))
}

/// `4 D_(N)²` expanded directly:
/// `¼ Σ (δ_jm E_in − δ_ni E_mj) ⊗ [γ_ji, γ_nm] + ½ Σ 1 ⊗ sign(i) γ_ij γ_ji + Σ E_ij E_ji ⊗ 1`.
fn raw_rhs(n: i64, v: &TensorVector) -> Result<TensorVector> {
    let idx = LATTICE.window(n);
    let one_f = LinearOperator::<FockState>::identity();
    let one_s = LinearOperator::<SpinState>::identity();
    let quarter = frac(1, 4);
    let mut out = TensorVector::new();
    for &i in &idx {
        for &j in idx.iter().filter(|&&j| i * j < 0) {
            // δ_jm: m = j, sum over n with jn < 0.
            for &k in idx.iter().filter(|&&k| j * k < 0) {
                let g = gamma_op(j, i)?.commutator(&gamma_op(k, j)?);
                out.add_scaled(&kron_apply(&rhat_op(LATTICE, i, k)?, &g, v), &quarter);
            }
            // δ_ni: n = i, sum over m with mi < 0.
            for &m in idx.iter().filter(|&&m| m * i < 0) {
                let g = gamma_op(j, i)?.commutator(&gamma_op(i, m)?);
                out.add_scaled(&kron_apply(&rhat_op(LATTICE, m, j)?, &g, v), &-&quarter);
            }
            let gg = gamma_op(i, j)?.compose(&gamma_op(j, i)?);
            out.add_scaled(&kron_apply(&one_f, &gg, v), &frac(i.signum(), 2));
            let ee = rhat_op(LATTICE, i, j)?.compose(&rhat_op(LATTICE, j, i)?);
            out.add_scaled(&kron_apply(&ee, &one_s, v), &Scalar::one());
        }
    }
    Ok(out)
}

/// `Δ_g^(N) ⊗ 1 − Δ_h,diag^(N) + Σ_{ij>0} 1 ⊗ H_ij H_ji + 1 ⊗ Σ sign(i) H_ii`.
fn hk_rhs(n: i64, v: &TensorVector) -> Result<TensorVector> {
    let one_f = LinearOperator::<FockState>::identity();
    let one_s = LinearOperator::<SpinState>::identity();
    let h = |i: i64, j: i64| k_family_op(KFamily::HN, n, i, j);
    let mut out = kron_apply(&fock_casimir_op(CasimirVariant::naive(n, LATTICE)), &one_s, v);
    let mut diag = TensorVector::new();
    let mut hh = TensorVector::new();
    for (i, j) in isotropy_pairs(n) {
        let ee = rhat_op(LATTICE, i, j)?.compose(&rhat_op(LATTICE, j, i)?);
        diag.add_scaled(&kron_apply(&ee, &one_s, v), &Scalar::one());
        diag.add_scaled(
            &kron_apply(&rhat_op(LATTICE, i, j)?, &h(j, i)?, v),
            &Scalar::from_integer(2),
        );
        let hij_hji = h(i, j)?.compose(&h(j, i)?);
        let term = kron_apply(&one_f, &hij_hji, v);
        diag.add_scaled(&term, &Scalar::one());
        hh.add_scaled(&term, &Scalar::one());
    }
    out.add_scaled(&diag, &Scalar::from_integer(-1));
    out.add_scaled(&hh, &Scalar::one());
    for i in LATTICE.window(n) {
        out.add_scaled(&kron_apply(&one_f, &h(i, i)?, v), &Scalar::from_integer(i.signum()));
    }
    Ok(out)
}

/// `Δ_g,ren^(N) ⊗ 1 + 1 ⊗ F_(N)`.
fn final_rhs(n: i64, v: &TensorVector) -> Result<TensorVector> {
    let one_s = LinearOperator::<SpinState>::identity();
    let mut out = kron_apply(&fock_casimir_op(CasimirVariant::g_ren(n)), &one_s, v);
    for (t, c) in v {
        let f = FockVector::basis(t.fock.clone());
        let s = fermion_number_cutoff_apply(n, &SpinVector::basis(t.spin.clone()))?;
        out.add_scaled(&tensor(&f, &s), c);
    }
    Ok(out)
}

/// Checks `ρ(E_pq) v = 0` for every `pq > 0` with `|p|, |q| <= window`.
pub fn check_invariant(window: i64, v: &TensorVector) -> Result<()> {
    for (p, q) in isotropy_pairs(window) {
        if !rho_apply(p, q, v)?.is_zero() {
            return Err(Error::NotInvariant { p, q });
        }
    }
    Ok(())
}

/// Largest absolute coefficient of `4 D_(N)² v` minus the chosen right-hand side.
///
/// The vector must be supported in `|index| <= N`. The final form also
/// requires `v` to be invariant under `ρ(E_pq)` for `|p|, |q| <= N + 1`.
pub fn square_identity_residual(n: i64, form: SquareForm, v: &TensorVector) -> Result<Scalar> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("cut-off must be at least 1, got {n}")));
    }
    let support = tensor_bound(v);
    if support > n {
        return Err(Error::SupportTooLarge { support, limit: n });
    }
    for t in v.keys() {
        t.fock.validate(LATTICE)?;
    }
    let rhs = match form {
        SquareForm::Raw => raw_rhs(n, v)?,
        SquareForm::Hk => hk_rhs(n, v)?,
        SquareForm::Final => {
            check_invariant(n + 1, v)?;
            final_rhs(n, v)?
        }
    };
    let lhs = dirac_cutoff_apply(n, &dirac_cutoff_apply(n, v)).scale_int(4);
    Ok((&lhs - &rhs).max_abs_coeff())
}

/// A block `(M, k)` of the truncated invariant sector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantBlock {
    /// State window `|index| <= N`.
    #[serde(rename = "N")]
    pub trunc: i64,
    /// Number of particle/antiparticle pairs.
    #[serde(rename = "M")]
    pub pairs: usize,
    /// Number of spinor modes.
    pub k: usize,
    /// Constraint window: `ρ(E_pq)` is imposed for `|p|, |q| <= window`.
    pub window: i64,
    /// Canonical nullspace basis.
    pub basis: Vec<TensorVector>,
}

impl InvariantBlock {
    /// Dimension of the block.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The eigenvalue `2(M + k)` of `Δ_g ⊗ 1 + 1 ⊗ F` on this block.
    pub fn t_eigenvalue(&self) -> i64 {
        2 * (self.pairs + self.k) as i64
    }
}

/// Charge-zero tensor basis states with `pairs` pairs and `k` modes, indices bounded by `n`.
pub fn block_states(n: i64, pairs: usize, k: usize) -> Vec<TensorState> {
    let spins = spin_states_with_len(n, k);
    let mut out = Vec::new();
    for f in charge_zero_states(LATTICE, n, pairs) {
        for s in &spins {
            out.push(TensorState::new(f.clone(), s.clone()));
        }
    }
    out.sort();
    out
}

/// The invariant block `(M, k)` at truncation `N` with constraint window `N + 1`.
pub fn invariant_basis(n: i64, pairs: usize, k: usize) -> Result<InvariantBlock> {
    invariant_basis_with_window(n, pairs, k, n + 1)
}

/// The invariant block `(M, k)` at truncation `N` with an explicit constraint window.
pub fn invariant_basis_with_window(n: i64, pairs: usize, k: usize, window: i64) -> Result<InvariantBlock> {
    if n < 1 || (n as u64) < pairs.max(k) as u64 {
        return Err(Error::InvalidParameter(format!(
            "truncation {n} must be at least max(1, M={pairs}, k={k})"
        )));
    }
    if window < n {
        return Err(Error::InvalidParameter(format!(
            "constraint window {window} is below truncation {n}"
        )));
    }
    let states = block_states(n, pairs, k);
    let mut reducer = RowReducer::new(states.len());
    for (p, q) in isotropy_pairs(window) {
        let mut rows: BTreeMap<TensorState, SparseVector<usize>> = BTreeMap::new();
        for (x, t) in states.iter().enumerate() {
            for (u, c) in rho_on_state(p, q, t) {
                rows.entry(u).or_default().add_int_term(x, c);
            }
        }
        for row in rows.into_values() {
            reducer.insert(row)?;
        }
    }
    let basis = reducer
        .nullspace()
        .into_iter()
        .map(|w| w.iter().map(|(&x, c)| (states[x].clone(), c.clone())).collect())
        .collect();
    Ok(InvariantBlock {
        trunc: n,
        pairs,
        k,
        window,
        basis,
    })
}

/// True when the constraint windows `N + 1` and `N + 2` give the same invariant block.
pub fn window_robust(n: i64, pairs: usize, k: usize) -> Result<bool> {
    let near = invariant_basis_with_window(n, pairs, k, n + 1)?;
    let far = invariant_basis_with_window(n, pairs, k, n + 2)?;
    Ok(near.basis == far.basis)
}

/// One row of the spectrum report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSummary {
    /// Number of pairs.
    #[serde(rename = "M")]
    pub pairs: usize,
    /// Number of spinor modes.
    pub k: usize,
    /// Block dimension.
    pub dim: usize,
    /// Eigenvalue `(M + k) / 2` of `D²` on the block.
    pub eig: Rational,
}

/// Block dimensions and `D²` eigenvalues of the truncated invariant sector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Truncation `N`.
    pub trunc: i64,
    /// Blocks ordered by `(M, k)`.
    pub blocks: Vec<BlockSummary>,
    /// Total dimension of the blocks with eigenvalue zero.
    pub kernel_dim: usize,
}

/// Solves every block `(M, k)` with `M, k <= degree` at truncation `N`.
///
/// Blocks are solved in parallel and reported in `(M, k)` order.
pub fn spectrum_report(n: i64, degree: usize) -> Result<SpectrumReport> {
    let blocks = invariant_blocks(n, degree)?;
    let blocks: Vec<BlockSummary> = blocks
        .iter()
        .map(|b| BlockSummary {
            pairs: b.pairs,
            k: b.k,
            dim: b.dim(),
            eig: Rational::new((b.pairs + b.k) as i64, 2).expect("nonzero denominator"),
        })
        .collect();
    let kernel_dim = blocks.iter().filter(|b| b.eig.is_zero()).map(|b| b.dim).sum();
    Ok(SpectrumReport {
        trunc: n,
        blocks,
        kernel_dim,
    })
}

/// All invariant blocks with `M, k <= degree`, solved in parallel, in `(M, k)` order.
pub fn invariant_blocks(n: i64, degree: usize) -> Result<Vec<InvariantBlock>> {
    if n < 1 || (n as u64) < degree as u64 {
        return Err(Error::InvalidParameter(format!(
            "truncation {n} must be at least max(1, degree={degree})"
        )));
    }
    let keys: Vec<(usize, usize)> = (0..=degree).flat_map(|m| (0..=degree).map(move |k| (m, k))).collect();
    keys.par_iter().map(|&(m, k)| invariant_basis(n, m, k)).collect()
}

/// Random tensor vectors: a charge-zero Fock state paired with a spinor state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TensorSpace;

impl BasisSampler for TensorSpace {
    type Key = TensorState;

    fn sample_key(&self, rng: &mut SplitMix64, bound: i64) -> TensorState {
        let fock = ChargeZeroSpace { lattice: LATTICE }.sample_key(rng, bound);
        let spin = SpinSpace.sample_key(rng, bound);
        TensorState { fock, spin }
    }
}

/// Charge-zero tensor basis states with every index bounded by `n`.
pub fn bounded_tensor_states(n: i64) -> Vec<TensorState> {
    let spins = crate::spinor::spin_states_within(n);
    let mut out = Vec::new();
    for m in 0..=n as usize {
        for f in charge_zero_states(LATTICE, n, m) {
            for s in &spins {
                out.push(TensorState::new(f.clone(), s.clone()));
            }
        }
    }
    out.sort();
    out
}
