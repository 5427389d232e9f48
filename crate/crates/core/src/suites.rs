//! Verification suites: exhaustive or seeded checks of the operator identities.
//!
//! Each suite returns a [`SuiteReport`] listing its checks. A check covers a
//! family of cases (usually all basis states of a window) and records the
//! largest absolute coefficient of `lhs − rhs` over those cases, so it passes
//! exactly when its residual is zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::casimir::{
    casimir_apply, casimir_commutator, diagonal_weight, eigenvalue_law, heisenberg_apply, hw_state, num_of, weight,
    CasimirVariant,
};
use crate::dirac::{
    bounded_tensor_states, check_invariant, diagonal_casimir_apply, dirac_apply, dirac_cutoff_apply, invariant_blocks,
    rho_apply, spectrum_report, square_identity_residual, t_square_apply, tensor_bound, tensor_vacuum, window_robust,
    SquareForm, TensorSpace, TensorVector, LATTICE,
};
use crate::error::{Error, Result};
use crate::fock::{
    apply_field, bounded_states, bracket_central, charge_zero_states, lie_apply, ores_bracket, ores_trace_term,
    rhat_apply, schwinger, t_ores_element_apply, FieldKind, FockState, FockVector, Lattice, LieElement, OresElement,
    TermTable,
};
use crate::linalg::{random_vector, SplitMix64};
use crate::scalar::Scalar;
use crate::spinor::{
    fermion_number_apply, fermion_number_cutoff_apply, gamma_apply, k_family_apply, k_tilde_exact_apply,
    spin_states_with_len, spin_states_within, spinor_casimir_apply, KFamily, SpinState, SpinVector,
};

/// A named verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Anticommutation relations of `ψ_k`, `ψ*_k`.
    Car,
    /// Clifford relations `{γ_ij, γ_mn} = 2 δ_in δ_jm`.
    Clifford,
    /// Central extension `[r̂(A), r̂(B)] = r̂([A, B]) + s(A, B)`.
    Cocycle,
    /// `o_res` commutators against the trace term `½ Tr(c b′ − c′ b)`.
    Ores,
    /// Isotropy commutators, relations and stabilization.
    KFamily,
    /// Fermion number spectrum and kernel.
    FermionNumber,
    /// Spinor Casimir `Δ_S^(N) = N³`.
    SpinorCasimir,
    /// Casimir eigenvalues, commutator table and highest weights on the lattice with zero.
    Casimir,
    /// Heisenberg relations `[s_n, s_k] = n δ_{n,−k}`.
    Heisenberg,
    /// `Δ_g = 2M` on charge-zero states and its kernel.
    DeltaG,
    /// Vacuum annihilation and symmetry of `D`.
    DiracSymmetry,
    /// `[ρ(E_kl), D] = 0` and vacuum structure.
    DiracEquivariance,
    /// Stabilization of the cut-off Dirac operators.
    DiracCutoff,
    /// Direct expansion of `D_(N)²`.
    SquareRaw,
    /// `D_(N)²` through Casimir and `H` operators.
    SquareHk,
    /// `4 D² = Δ_g,ren ⊗ 1 + 1 ⊗ F` on invariant vectors.
    SquareFinal,
    /// Invariant blocks, eigenvalues and kernel of `D²`.
    Kernel,
}

impl Suite {
    /// Every suite, in execution order.
    pub const ALL: [Suite; 17] = [
        Suite::Car,
        Suite::Clifford,
        Suite::Cocycle,
        Suite::Ores,
        Suite::KFamily,
        Suite::FermionNumber,
        Suite::SpinorCasimir,
        Suite::Casimir,
        Suite::Heisenberg,
        Suite::DeltaG,
        Suite::DiracSymmetry,
        Suite::DiracEquivariance,
        Suite::DiracCutoff,
        Suite::SquareRaw,
        Suite::SquareHk,
        Suite::SquareFinal,
        Suite::Kernel,
    ];

    /// The command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Car => "car",
            Suite::Clifford => "clifford",
            Suite::Cocycle => "cocycle",
            Suite::Ores => "ores",
            Suite::KFamily => "k-family",
            Suite::FermionNumber => "fermion-number",
            Suite::SpinorCasimir => "spinor-casimir",
            Suite::Casimir => "casimir",
            Suite::Heisenberg => "heisenberg",
            Suite::DeltaG => "delta-g",
            Suite::DiracSymmetry => "dirac-symmetry",
            Suite::DiracEquivariance => "dirac-equivariance",
            Suite::DiracCutoff => "dirac-cutoff",
            Suite::SquareRaw => "square-raw",
            Suite::SquareHk => "square-hk",
            Suite::SquareFinal => "square-final",
            Suite::Kernel => "kernel",
        }
    }

    /// One-line statement of what the suite checks.
    pub fn description(self) -> &'static str {
        match self {
            Suite::Car => "{ψ_p, ψ*_q} = δ_pq and {ψ,ψ} = {ψ*,ψ*} = 0 on every bounded Fock state, both lattices",
            Suite::Clifford => "{γ_ij, γ_mn} = 2 δ_in δ_jm on every bounded spinor state",
            Suite::Cocycle => "[r̂(A), r̂(B)] = r̂([A,B]) + s(A,B) for all matrix-unit pairs, both lattices",
            Suite::Ores => "[T(x), T(x')] − T([x,x']) = ½Tr(cb' − c'b) on particle-only states",
            Suite::KFamily => "[K_ij, γ_ml] and [K̃_ij, K̃_mn] relations, K̃|0⟩ = 0, K̃^(N) = K̃ for large N",
            Suite::FermionNumber => "F = 2k on k-mode states, F = Σ sign(i) K̃_ii = F_(N), ker F = vacuum",
            Suite::SpinorCasimir => "Δ_S^(N) = N³ on spinor states bounded by M <= N",
            Suite::Casimir => "Δψ_m = −m(m−2)ψ_m, Δw = [2Num(w)+1−(m−1)²]w, [Δ^(N), E_mn], highest weights",
            Suite::Heisenberg => "[s_n, s_k] = n δ_{n,−k} on interior states",
            Suite::DeltaG => "Δ_g = 2M on charge-zero M-pair states, kernel = vacuum, Δ_g,ren^(N) = Δ_g",
            Suite::DiracSymmetry => "D(vacuum) = 0 and ⟨Dv, w⟩ = ⟨v, Dw⟩ on seeded pairs",
            Suite::DiracEquivariance => "[ρ(E_kl), D] = 0 on bounded tensor states, vacuum structure",
            Suite::DiracCutoff => "D_(N) v = D v for N >= bound(v)",
            Suite::SquareRaw => "4 D_(N)² equals its commutator/Clifford/quadratic expansion",
            Suite::SquareHk => "4 D_(N)² = Δ_g^(N)⊗1 − Δ_h,diag^(N) + Σ 1⊗H_ij H_ji + 1⊗Σ sign(i) H_ii",
            Suite::SquareFinal => "4 D_(N)² = Δ_g,ren^(N)⊗1 + 1⊗F_(N) on every computed invariant vector",
            Suite::Kernel => "invariant blocks: eigenvalues in ½ℤ>=0, kernel = vacuum line, window robustness",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// Window sizes and seed shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    /// Index bound of exhaustive windows.
    pub max_index: i64,
    /// Truncation of the invariant sector.
    pub trunc: i64,
    /// Largest `M` and `k` of the invariant blocks.
    pub degree: usize,
    /// Seed of the sampled checks.
    pub seed: u64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            max_index: 3,
            trunc: 2,
            degree: 2,
            seed: 0,
        }
    }
}

/// One check: a labelled identity over a number of cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    /// What was checked, with its inputs.
    pub label: String,
    /// Number of cases (basis states, vectors or pairs) covered.
    pub cases: usize,
    /// Largest absolute deviation from the identity.
    pub residual: Scalar,
}

impl Check {
    /// True when the residual vanishes.
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    /// Suite name.
    pub suite: Suite,
    /// Number of checks.
    pub checks: usize,
    /// Total number of cases.
    pub cases: usize,
    /// Number of failing checks.
    pub failures: usize,
    /// Suite-specific headline values.
    pub summary: BTreeMap<String, String>,
    /// Every check, sorted by label.
    pub details: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, mut details: Vec<Check>) -> Self {
        details.sort_by(|a, b| a.label.cmp(&b.label));
        let failures = details.iter().filter(|c| !c.passed()).count();
        SuiteReport {
            suite,
            checks: details.len(),
            cases: details.iter().map(|c| c.cases).sum(),
            failures,
            summary: BTreeMap::new(),
            details,
        }
    }

    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// The failing checks.
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.details.iter().filter(|c| !c.passed())
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteReport> {
    if params.max_index < 1 || params.trunc < 1 {
        return Err(Error::InvalidParameter("bounds must be at least 1".into()));
    }
    match suite {
        Suite::Car => car(params),
        Suite::Clifford => clifford(params),
        Suite::Cocycle => cocycle(params),
        Suite::Ores => ores(params),
        Suite::KFamily => k_family(params),
        Suite::FermionNumber => fermion_number(params),
        Suite::SpinorCasimir => spinor_casimir(params),
        Suite::Casimir => casimir(params),
        Suite::Heisenberg => heisenberg(params),
        Suite::DeltaG => delta_g(params),
        Suite::DiracSymmetry => dirac_symmetry(params),
        Suite::DiracEquivariance => dirac_equivariance(params),
        Suite::DiracCutoff => dirac_cutoff(params),
        Suite::SquareRaw => square_sampled(Suite::SquareRaw, SquareForm::Raw, params),
        Suite::SquareHk => square_sampled(Suite::SquareHk, SquareForm::Hk, params),
        Suite::SquareFinal => square_final(params),
        Suite::Kernel => kernel(params),
    }
}

fn check<K: Sync, F>(label: String, cases: &[K], f: F) -> Result<Check>
where
    F: Fn(&K) -> Result<Scalar> + Sync,
{
    let residual = cases
        .iter()
        .map(&f)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or_default();
    Ok(Check {
        label,
        cases: cases.len(),
        residual,
    })
}

fn count_check(label: String, cases: usize, expected: i64, found: i64) -> Check {
    Check {
        label,
        cases,
        residual: Scalar::from_integer((expected - found).abs()),
    }
}

fn diff<K: Ord + Clone>(a: &crate::linalg::SparseVector<K>, b: &crate::linalg::SparseVector<K>) -> Scalar {
    (a - b).max_abs_coeff()
}

fn par_checks<T: Sync, F>(items: &[T], f: F) -> Result<Vec<Check>>
where
    F: Fn(&T) -> Result<Check> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn field_name(kind: FieldKind, k: i64) -> String {
    match kind {
        FieldKind::Psi => format!("ψ_{k}"),
        FieldKind::PsiStar => format!("ψ*_{k}"),
    }
}

fn car(p: &SuiteParams) -> Result<SuiteReport> {
    let mut details = Vec::new();
    for lattice in [Lattice::ExcludeZero, Lattice::IncludeZero] {
        let states: Vec<FockVector> = bounded_states(lattice, p.max_index)
            .into_iter()
            .map(FockVector::basis)
            .collect();
        let fields: Vec<(FieldKind, i64)> = lattice
            .window(p.max_index)
            .into_iter()
            .flat_map(|k| [(FieldKind::Psi, k), (FieldKind::PsiStar, k)])
            .collect();
        let pairs: Vec<((FieldKind, i64), (FieldKind, i64))> = fields
            .iter()
            .flat_map(|&a| fields.iter().map(move |&b| (a, b)))
            .collect();
        details.extend(par_checks(&pairs, |&((ka, a), (kb, b))| {
            let expected = if ka != kb && a == b { 1 } else { 0 };
            let label = format!(
                "{{{}, {}}} = {expected} [{lattice}]",
                field_name(ka, a),
                field_name(kb, b)
            );
            check(label, &states, |v| {
                let ab = apply_field(lattice, ka, a, &apply_field(lattice, kb, b, v)?)?;
                let ba = apply_field(lattice, kb, b, &apply_field(lattice, ka, a, v)?)?;
                Ok(diff(&(&ab + &ba), &v.scale_int(expected)))
            })
        })?);
    }
    Ok(SuiteReport::new(Suite::Car, details))
}

fn gamma_pairs(n: i64) -> Vec<(i64, i64)> {
    let idx: Vec<i64> = (-n..=n).filter(|&k| k != 0).collect();
    idx.iter()
        .flat_map(|&i| idx.iter().filter(move |&&j| i * j < 0).map(move |&j| (i, j)))
        .collect()
}

fn isotropy_pairs(n: i64) -> Vec<(i64, i64)> {
    let idx: Vec<i64> = (-n..=n).filter(|&k| k != 0).collect();
    idx.iter()
        .flat_map(|&i| idx.iter().filter(move |&&j| i * j > 0).map(move |&j| (i, j)))
        .collect()
}

fn clifford(p: &SuiteParams) -> Result<SuiteReport> {
    let states: Vec<SpinVector> = spin_states_within(p.max_index)
        .into_iter()
        .map(SpinVector::basis)
        .collect();
    let g = gamma_pairs(p.max_index);
    let quads: Vec<((i64, i64), (i64, i64))> = g.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))).collect();
    let details = par_checks(&quads, |&((i, j), (m, n))| {
        let expected = if i == n && j == m { 2 } else { 0 };
        check(format!("{{γ_{i},{j}, γ_{m},{n}}} = {expected}"), &states, |v| {
            let a = gamma_apply(i, j, &gamma_apply(m, n, v)?)?;
            let b = gamma_apply(m, n, &gamma_apply(i, j, v)?)?;
            Ok(diff(&(&a + &b), &v.scale_int(expected)))
        })
    })?;
    Ok(SuiteReport::new(Suite::Clifford, details))
}

fn cocycle(p: &SuiteParams) -> Result<SuiteReport> {
    let mut details = Vec::new();
    for lattice in [Lattice::ExcludeZero, Lattice::IncludeZero] {
        let states: Vec<FockVector> = bounded_states(lattice, p.max_index)
            .into_iter()
            .map(FockVector::basis)
            .collect();
        let idx = lattice.window(p.max_index);
        let units: Vec<(i64, i64)> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).collect();
        let pairs: Vec<((i64, i64), (i64, i64))> =
            units.iter().flat_map(|&a| units.iter().map(move |&b| (a, b))).collect();
        details.extend(par_checks(&pairs, |&((i, j), (m, n))| {
            let a = LieElement::unit(i, j);
            let b = LieElement::unit(m, n);
            let bracket = bracket_central(lattice, &a, &b);
            let label = format!("[E_{i},{j}, E_{m},{n}] with s = {} [{lattice}]", bracket.central);
            check(label, &states, |v| {
                let ab = rhat_apply(lattice, i, j, &rhat_apply(lattice, m, n, v)?)?;
                let ba = rhat_apply(lattice, m, n, &rhat_apply(lattice, i, j, v)?)?;
                Ok(diff(&(&ab - &ba), &lie_apply(lattice, &bracket, v)?))
            })
        })?);
    }
    let s = schwinger(Lattice::ExcludeZero, &LieElement::unit(-1, 1), &LieElement::unit(1, -1));
    details.push(Check {
        label: "s(E_-1,1, E_1,-1) = 1".into(),
        cases: 1,
        residual: (&s - &Scalar::one()).abs(),
    });
    Ok(SuiteReport::new(Suite::Cocycle, details))
}

fn table(entries: &[((i64, i64), i64)]) -> TermTable {
    entries.iter().map(|&(k, c)| (k, Scalar::from_integer(c))).collect()
}

fn antisym(entries: &[((i64, i64), i64)]) -> TermTable {
    let mut all = Vec::new();
    for &((i, j), c) in entries {
        all.push(((i, j), c));
        all.push(((j, i), -c));
    }
    table(&all)
}

/// A fixed set of `o_res` elements with antisymmetric `b` and `c` blocks.
pub fn ores_test_set() -> Vec<(String, OresElement)> {
    let e = TermTable::new;
    let build = |d, b, c| OresElement::new(d, b, c).expect("antisymmetric by construction");
    vec![
        ("d=E11".into(), build(table(&[((1, 1), 1)]), e(), e())),
        ("d=E12-E23".into(), build(table(&[((1, 2), 1), ((2, 3), -1)]), e(), e())),
        ("b=J12".into(), build(e(), antisym(&[((1, 2), 1)]), e())),
        ("c=J12".into(), build(e(), e(), antisym(&[((1, 2), 1)]))),
        (
            "b=J23-J13".into(),
            build(e(), antisym(&[((2, 3), 1), ((1, 3), -1)]), e()),
        ),
        (
            "c=J13+2J23".into(),
            build(e(), e(), antisym(&[((1, 3), 1), ((2, 3), 2)])),
        ),
        (
            "d=E21,b=J12,c=J23".into(),
            build(table(&[((2, 1), 1)]), antisym(&[((1, 2), 1)]), antisym(&[((2, 3), 1)])),
        ),
    ]
}

fn ores(p: &SuiteParams) -> Result<SuiteReport> {
    let states: Vec<FockVector> = bounded_states(Lattice::ExcludeZero, p.max_index)
        .into_iter()
        .filter(|s| s.minus.is_empty())
        .map(FockVector::basis)
        .collect();
    let set = ores_test_set();
    let pairs: Vec<(usize, usize)> = (0..set.len())
        .flat_map(|a| (0..set.len()).map(move |b| (a, b)))
        .collect();
    let details = par_checks(&pairs, |&(a, b)| {
        let ((na, x), (nb, y)) = (&set[a], &set[b]);
        let trace = ores_trace_term(x, y);
        let bracket = ores_bracket(x, y);
        check(
            format!("[T({na}), T({nb})] − T([x,x']) = {trace}·id"),
            &states,
            |v| {
                let xy = t_ores_element_apply(x, &t_ores_element_apply(y, v)?)?;
                let yx = t_ores_element_apply(y, &t_ores_element_apply(x, v)?)?;
                let lhs = &(&xy - &yx) - &t_ores_element_apply(&bracket, v)?;
                Ok(diff(&lhs, &v.scale(&trace)))
            },
        )
    })?;
    Ok(SuiteReport::new(Suite::Ores, details))
}

fn k_family(p: &SuiteParams) -> Result<SuiteReport> {
    let n = p.max_index + 1;
    let states: Vec<SpinVector> = spin_states_within(p.max_index)
        .into_iter()
        .map(SpinVector::basis)
        .collect();
    let iso = isotropy_pairs(p.max_index);
    let gam = gamma_pairs(p.max_index);
    let mut details = Vec::new();

    let ig: Vec<((i64, i64), (i64, i64))> = iso.iter().flat_map(|&a| gam.iter().map(move |&b| (a, b))).collect();
    details.extend(par_checks(&ig, |&((i, j), (m, l))| {
        check(
            format!("[K^({n})_{i},{j}, γ_{m},{l}] = δ_jm γ_il − δ_il γ_mj"),
            &states,
            |v| {
                let kg = k_family_apply(KFamily::KRaw, n, i, j, &gamma_apply(m, l, v)?)?;
                let gk = gamma_apply(m, l, &k_family_apply(KFamily::KRaw, n, i, j, v)?)?;
                let mut rhs = SpinVector::new();
                if j == m {
                    rhs.add_scaled(&gamma_apply(i, l, v)?, &Scalar::one());
                }
                if i == l {
                    rhs.add_scaled(&gamma_apply(m, j, v)?, &Scalar::from_integer(-1));
                }
                Ok(diff(&(&kg - &gk), &rhs))
            },
        )
    })?);

    let ii: Vec<((i64, i64), (i64, i64))> = iso.iter().flat_map(|&a| iso.iter().map(move |&b| (a, b))).collect();
    details.extend(par_checks(&ii, |&((i, j), (m, q))| {
        let kt = |a: i64, b: i64, v: &SpinVector| k_family_apply(KFamily::KTildeN, n, a, b, v);
        check(
            format!("[K̃^({n})_{i},{j}, K̃^({n})_{m},{q}] = δ_jm K̃_iq − δ_iq K̃_mj"),
            &states,
            |v| {
                let ab = kt(i, j, &kt(m, q, v)?)?;
                let ba = kt(m, q, &kt(i, j, v)?)?;
                let mut rhs = SpinVector::new();
                if j == m {
                    rhs.add_scaled(&kt(i, q, v)?, &Scalar::one());
                }
                if i == q {
                    rhs.add_scaled(&kt(m, j, v)?, &Scalar::from_integer(-1));
                }
                Ok(diff(&(&ab - &ba), &rhs))
            },
        )
    })?);

    let vac = [SpinVector::basis(SpinState::vacuum())];
    for cut in 1..=n {
        let pairs = isotropy_pairs(cut);
        details.push(check(
            format!("K̃^({cut})_ij |0⟩ = 0 for all ij > 0"),
            &pairs,
            |&(i, j)| Ok(k_family_apply(KFamily::KTildeN, cut, i, j, &vac[0])?.max_abs_coeff()),
        )?);
    }

    // Stabilization: K̃^(N) agrees with the exact K̃ on states bounded by M <= N.
    for m in 1..=p.max_index {
        let bounded: Vec<SpinVector> = spin_states_within(m).into_iter().map(SpinVector::basis).collect();
        for cut in m..=m + 2 {
            let pairs = isotropy_pairs(cut);
            details.push(check(
                format!("K̃^({cut}) = K̃ on states bounded by {m}"),
                &bounded,
                |v| {
                    let mut worst = Scalar::zero();
                    for &(i, j) in &pairs {
                        let r = diff(
                            &k_family_apply(KFamily::KTildeN, cut, i, j, v)?,
                            &k_tilde_exact_apply(i, j, v)?,
                        );
                        worst = worst.max(r);
                    }
                    Ok(worst)
                },
            )?);
            details.push(check(
                format!("Σ_i K̃^({cut})_ii = 0 on states bounded by {m}"),
                &bounded,
                |v| {
                    let mut total = SpinVector::new();
                    for i in (-cut..=cut).filter(|&i| i != 0) {
                        total.add_scaled(&k_family_apply(KFamily::KTildeN, cut, i, i, v)?, &Scalar::one());
                    }
                    Ok(total.max_abs_coeff())
                },
            )?);
        }
    }
    Ok(SuiteReport::new(Suite::KFamily, details))
}

fn fermion_number(p: &SuiteParams) -> Result<SuiteReport> {
    let mut details = Vec::new();
    for k in 0..=3usize {
        let states: Vec<SpinVector> = spin_states_with_len(p.max_index, k)
            .into_iter()
            .map(SpinVector::basis)
            .collect();
        details.push(check(format!("F = {} on {k}-mode states", 2 * k), &states, |v| {
            Ok(diff(&fermion_number_apply(v), &v.scale_int(2 * k as i64)))
        })?);
    }
    let all: Vec<SpinVector> = spin_states_within(p.max_index)
        .into_iter()
        .map(SpinVector::basis)
        .collect();
    details.push(check("F = Σ sign(i) K̃_ii".into(), &all, |v| {
        let mut f = SpinVector::new();
        for i in (-p.max_index..=p.max_index).filter(|&i| i != 0) {
            f.add_scaled(&k_tilde_exact_apply(i, i, v)?, &Scalar::from_integer(i.signum()));
        }
        Ok(diff(&f, &fermion_number_apply(v)))
    })?);
    details.push(check(format!("F_({}) = F", p.max_index), &all, |v| {
        Ok(diff(
            &fermion_number_cutoff_apply(p.max_index, v)?,
            &fermion_number_apply(v),
        ))
    })?);
    let kernel: Vec<&SpinVector> = all.iter().filter(|v| fermion_number_apply(v).is_zero()).collect();
    let only_vacuum = kernel.len() == 1 && kernel[0] == &SpinVector::basis(SpinState::vacuum());
    details.push(count_check(
        "ker F = vacuum line".into(),
        all.len(),
        1,
        if only_vacuum { 1 } else { 0 },
    ));
    Ok(SuiteReport::new(Suite::FermionNumber, details))
}

fn spinor_casimir(p: &SuiteParams) -> Result<SuiteReport> {
    let mut details = Vec::new();
    for m in 0..p.max_index.min(3) {
        let states: Vec<SpinVector> = spin_states_within(m).into_iter().map(SpinVector::basis).collect();
        for n in m.max(1)..=m + 2 {
            details.push(check(
                format!("Δ_S^({n}) = {} on states bounded by {m}", n * n * n),
                &states,
                |v| Ok(diff(&spinor_casimir_apply(n, false, v)?, &v.scale_int(n * n * n))),
            )?);
        }
    }
    Ok(SuiteReport::new(Suite::SpinorCasimir, details))
}

fn casimir(p: &SuiteParams) -> Result<SuiteReport> {
    let inc = Lattice::IncludeZero;
    let lim = CasimirVariant::limit(inc);
    let mut details = Vec::new();
    for m in -3..=3 {
        let psi = [FockVector::basis(hw_state(m))];
        details.push(check(format!("Δψ_{m} = {}ψ_{m}", -m * (m - 2)), &psi, |v| {
            Ok(diff(&casimir_apply(&lim, v)?, &v.scale_int(-m * (m - 2))))
        })?);
    }
    let bound = p.max_index + 1;
    let all = bounded_states(inc, bound);
    for m in -2..=2 {
        let states: Vec<FockState> = all.iter().filter(|s| s.charge() == m).cloned().collect();
        details.push(check(
            format!("Δw = [2Num(w)+1−(m−1)²]w for charge {m}, bound {bound}"),
            &states,
            |s| {
                let v = FockVector::basis(s.clone());
                Ok(diff(
                    &casimir_apply(&lim, &v)?,
                    &v.scale_int(eigenvalue_law(num_of(s), m)),
                ))
            },
        )?);
    }

    let n = p.max_index;
    let window: Vec<FockVector> = bounded_states(inc, n).into_iter().map(FockVector::basis).collect();
    let normal = CasimirVariant::normal(n, inc);
    let idx = inc.window(n);
    let units: Vec<(i64, i64)> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).collect();
    let images: Vec<FockVector> = window
        .iter()
        .map(|v| casimir_apply(&normal, v))
        .collect::<Result<_>>()?;
    let indexed: Vec<usize> = (0..window.len()).collect();
    details.extend(par_checks(&units, |&(a, b)| {
        let closed = casimir_commutator(&normal, a, b)?;
        let label = format!("[Δ^({n}), E_{a},{b}] = {}·E_{a},{b}", closed.coeff(a, b));
        check(label, &indexed, |&x| {
            let v = &window[x];
            let lhs = &casimir_apply(&normal, &rhat_apply(inc, a, b, v)?)? - &rhat_apply(inc, a, b, &images[x])?;
            Ok(diff(&lhs, &lie_apply(inc, &closed, v)?))
        })
    })?);

    details.push(check(
        format!("Σ_{{i<j}} (E_ii − E_jj) = −2 Σ k E_kk, window {n}"),
        &window,
        |v| {
            let s = v.keys().next().expect("basis vector");
            let mut lhs = 0;
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    lhs += diagonal_weight(inc, i, s) - diagonal_weight(inc, j, s);
                }
            }
            let rhs: i64 = idx.iter().map(|&k| -2 * k * diagonal_weight(inc, k, s)).sum();
            Ok(Scalar::from_integer((lhs - rhs).abs()))
        },
    )?);

    for m in -3..=3 {
        let psi = hw_state(m);
        let r = m.abs() + 2;
        let pairs: Vec<(i64, i64)> = (-r..=r).flat_map(|i| (i + 1..=r).map(move |j| (i, j))).collect();
        let v = FockVector::basis(psi.clone());
        details.push(check(
            format!("E_ij ψ_{m} = 0 for i < j, |i|,|j| <= {r}"),
            &pairs,
            |&(i, j)| Ok(rhat_apply(inc, i, j, &v)?.max_abs_coeff()),
        )?);
        let diag: Vec<i64> = (-r..=r).collect();
        details.push(check(format!("E_ii ψ_{m} = λ̃_i ψ_{m}"), &diag, |&i| {
            Ok(Scalar::from_integer(
                (diagonal_weight(inc, i, &psi) - weight(m, i)).abs(),
            ))
        })?);
    }

    details.push(check(
        format!("Δ^(N) = Δ for N >= bound, states bounded by {n}"),
        &window,
        |v| {
            let b = crate::fock::vector_bound(v).max(1);
            let exact = casimir_apply(&lim, v)?;
            let mut worst = Scalar::zero();
            for cut in b..=b + 2 {
                worst = worst.max(diff(&casimir_apply(&CasimirVariant::normal(cut, inc), v)?, &exact));
            }
            Ok(worst)
        },
    )?);
    Ok(SuiteReport::new(Suite::Casimir, details))
}

fn heisenberg(p: &SuiteParams) -> Result<SuiteReport> {
    let inc = Lattice::IncludeZero;
    let bound = p.max_index.min(2);
    let states: Vec<FockVector> = bounded_states(inc, bound).into_iter().map(FockVector::basis).collect();
    let ks: Vec<i64> = (-3..=3).filter(|&k| k != 0).collect();
    let pairs: Vec<(i64, i64)> = ks.iter().flat_map(|&a| ks.iter().map(move |&b| (a, b))).collect();
    let details = par_checks(&pairs, |&(a, b)| {
        let n = bound + a.abs() + b.abs();
        let expected = if a == -b { a } else { 0 };
        check(format!("[s_{a}, s_{b}] = {expected} (N = {n})"), &states, |v| {
            let ab = heisenberg_apply(n, a, &heisenberg_apply(n, b, v)?)?;
            let ba = heisenberg_apply(n, b, &heisenberg_apply(n, a, v)?)?;
            Ok(diff(&(&ab - &ba), &v.scale_int(expected)))
        })
    })?;
    Ok(SuiteReport::new(Suite::Heisenberg, details))
}

fn delta_g(p: &SuiteParams) -> Result<SuiteReport> {
    let g = CasimirVariant::g_limit();
    let bound = p.max_index + 1;
    let mut details = Vec::new();
    let mut zero_states = Vec::new();
    let mut negative = 0;
    let mut total = 0;
    for m in 0..=bound as usize {
        let states: Vec<FockVector> = charge_zero_states(Lattice::ExcludeZero, bound, m)
            .into_iter()
            .map(FockVector::basis)
            .collect();
        total += states.len();
        for v in &states {
            let image = casimir_apply(&g, v)?;
            let eig = v.inner(&image);
            if eig.is_zero() {
                zero_states.push(v.clone());
            }
            if eig.signum() < 0 {
                negative += 1;
            }
        }
        details.push(check(
            format!("Δ_g = {} on {m}-pair states, bound {bound}", 2 * m),
            &states,
            |v| Ok(diff(&casimir_apply(&g, v)?, &v.scale_int(2 * m as i64))),
        )?);
    }
    let vacuum_only = zero_states == [FockVector::basis(FockState::vacuum())];
    details.push(count_check(
        "ker Δ_g = vacuum line".into(),
        total,
        1,
        if vacuum_only { 1 } else { 0 },
    ));
    details.push(count_check("Δ_g >= 0".into(), total, 0, negative));
    let states: Vec<FockVector> = bounded_states(Lattice::ExcludeZero, p.max_index)
        .into_iter()
        .map(FockVector::basis)
        .collect();
    details.push(check("Δ_g,ren^(N) = Δ_g for N >= bound".into(), &states, |v| {
        let b = crate::fock::vector_bound(v).max(1);
        let exact = casimir_apply(&g, v)?;
        let mut worst = Scalar::zero();
        for cut in b..=b + 2 {
            worst = worst.max(diff(&casimir_apply(&CasimirVariant::g_ren(cut), v)?, &exact));
        }
        Ok(worst)
    })?);
    Ok(SuiteReport::new(Suite::DeltaG, details))
}

fn seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

fn dirac_symmetry(p: &SuiteParams) -> Result<SuiteReport> {
    let mut details = vec![check("D(|0⟩⊗|0⟩_S) = 0".into(), &[tensor_vacuum()], |v| {
        Ok(dirac_apply(v).max_abs_coeff())
    })?];
    let pairs: Vec<(TensorVector, TensorVector)> = seeds(p.seed, 100)
        .into_iter()
        .map(|s| {
            let v = random_vector(&TensorSpace, s, p.max_index)?;
            let w = random_vector(&TensorSpace, s ^ 0x5555_5555_5555_5555, p.max_index)?;
            Ok((v, w))
        })
        .collect::<Result<_>>()?;
    details.push(check(
        format!("⟨Dv, w⟩ = ⟨v, Dw⟩, seed {}", p.seed),
        &pairs,
        |(v, w)| Ok((&dirac_apply(v).inner(w) - &v.inner(&dirac_apply(w))).abs()),
    )?);
    details.push(check(
        "D maps finite support to finite support".into(),
        &pairs,
        |(v, _)| {
            let image = dirac_apply(v);
            let grown = tensor_bound(&image) > tensor_bound(v).max(1);
            Ok(Scalar::from_integer(grown as i64))
        },
    )?);
    Ok(SuiteReport::new(Suite::DiracSymmetry, details))
}

fn dirac_equivariance(p: &SuiteParams) -> Result<SuiteReport> {
    let states: Vec<TensorVector> = bounded_tensor_states(p.max_index)
        .into_iter()
        .map(TensorVector::basis)
        .collect();
    let images: Vec<TensorVector> = states.par_iter().map(dirac_apply).collect();
    let indexed: Vec<usize> = (0..states.len()).collect();
    let pairs = isotropy_pairs(p.max_index);
    let mut details = par_checks(&pairs, |&(k, l)| {
        check(format!("[ρ(E_{k},{l}), D] = 0"), &indexed, |&x| {
            let lhs = rho_apply(k, l, &images[x])?;
            let rhs = dirac_apply(&rho_apply(k, l, &states[x])?);
            Ok(diff(&lhs, &rhs))
        })
    })?;
    let vac = FockVector::basis(FockState::vacuum());
    let svac = SpinVector::basis(SpinState::vacuum());
    let r = p.max_index + 1;
    let all: Vec<(i64, i64)> = (-r..=r)
        .filter(|&a| a != 0)
        .flat_map(|a| (-r..=r).filter(|&b| b != 0).map(move |b| (a, b)))
        .collect();
    details.push(check(
        "(E_pq ⊗ 1) vacuum = 0 unless p > 0 > q".into(),
        &all,
        |&(a, b)| {
            if a > 0 && b < 0 {
                return Ok(Scalar::zero());
            }
            Ok(rhat_apply(LATTICE, a, b, &vac)?.max_abs_coeff())
        },
    )?);
    details.push(check(
        "(1 ⊗ γ_pq) vacuum = 0 for p < 0 < q".into(),
        &all,
        |&(a, b)| {
            if !(a < 0 && b > 0) {
                return Ok(Scalar::zero());
            }
            Ok(gamma_apply(a, b, &svac)?.max_abs_coeff())
        },
    )?);
    Ok(SuiteReport::new(Suite::DiracEquivariance, details))
}

fn dirac_cutoff(p: &SuiteParams) -> Result<SuiteReport> {
    let vs: Vec<TensorVector> = seeds(p.seed, 50)
        .into_iter()
        .map(|s| random_vector(&TensorSpace, s, p.max_index))
        .collect::<Result<_>>()?;
    let details = vec![check(
        format!("D_(N) v = D v for N in bound(v)..bound(v)+2, seed {}", p.seed),
        &vs,
        |v| {
            let b = tensor_bound(v).max(1);
            let exact = dirac_apply(v);
            let mut worst = Scalar::zero();
            for n in b..=b + 2 {
                worst = worst.max(diff(&dirac_cutoff_apply(n, v), &exact));
            }
            Ok(worst)
        },
    )?];
    Ok(SuiteReport::new(Suite::DiracCutoff, details))
}

fn square_sampled(suite: Suite, form: SquareForm, p: &SuiteParams) -> Result<SuiteReport> {
    let bound = p.trunc;
    let vs: Vec<TensorVector> = seeds(p.seed, 20)
        .into_iter()
        .map(|s| random_vector(&TensorSpace, s, bound))
        .collect::<Result<_>>()?;
    let ns = [p.trunc + 1, p.trunc + 2];
    let details = par_checks(&ns, |&n| {
        check(
            format!(
                "{form} square identity at N = {n}, vectors bounded by {bound}, seed {}",
                p.seed
            ),
            &vs,
            |v| square_identity_residual(n, form, v),
        )
    })?;
    Ok(SuiteReport::new(suite, details))
}

fn square_final(p: &SuiteParams) -> Result<SuiteReport> {
    let blocks = invariant_blocks(p.trunc, p.degree.min(p.trunc as usize))?;
    let mut details = Vec::new();
    let mut worst = Scalar::zero();
    for b in &blocks {
        if b.basis.is_empty() {
            continue;
        }
        let c = check(
            format!(
                "final square identity on block ({}, {}) at N = {}",
                b.pairs, b.k, p.trunc
            ),
            &b.basis,
            |w| square_identity_residual(p.trunc, SquareForm::Final, w),
        )?;
        worst = worst.clone().max(c.residual.clone());
        details.push(c);
    }
    let mut report = SuiteReport::new(Suite::SquareFinal, details);
    report.summary.insert("residual".into(), worst.to_string());
    Ok(report)
}

fn kernel(p: &SuiteParams) -> Result<SuiteReport> {
    let degree = p.degree.min(p.trunc as usize);
    let report = spectrum_report(p.trunc, degree)?;
    let blocks = invariant_blocks(p.trunc, degree)?;
    let mut details = Vec::new();
    let half_integral = report.blocks.iter().all(|b| {
        let twice = b.eig.clone() + b.eig.clone();
        twice.is_integer() && twice.signum() >= 0
    });
    details.push(count_check(
        "eigenvalues of D² lie in ½ℤ>=0".into(),
        report.blocks.len(),
        1,
        half_integral as i64,
    ));
    let origin = report
        .blocks
        .iter()
        .find(|b| b.pairs == 0 && b.k == 0)
        .map_or(0, |b| b.dim);
    details.push(count_check("(0,0) block has dimension 1".into(), 1, 1, origin as i64));
    details.push(count_check("kernel_dim = 1".into(), 1, 1, report.kernel_dim as i64));
    let origin_basis = blocks
        .iter()
        .find(|b| b.pairs == 0 && b.k == 0)
        .map(|b| b.basis.clone())
        .unwrap_or_default();
    details.push(count_check(
        "(0,0) block is the vacuum line".into(),
        1,
        1,
        (origin_basis == [tensor_vacuum()]) as i64,
    ));
    for b in &blocks {
        let key = format!("({}, {})", b.pairs, b.k);
        details.push(count_check(
            format!("block {key}: windows N+1 and N+2 agree"),
            1,
            1,
            window_robust(p.trunc, b.pairs, b.k)? as i64,
        ));
        details.push(check(
            format!("block {key}: invariant, Δ_ρ^(N) = 0, 4D² = {}", b.t_eigenvalue()),
            &b.basis,
            |w| {
                check_invariant(p.trunc + 1, w)?;
                let casimir = diagonal_casimir_apply(p.trunc, w)?.max_abs_coeff();
                let square = dirac_apply(&dirac_apply(w)).scale_int(4);
                let t = t_square_apply(w)?;
                Ok(casimir
                    .max(diff(&square, &w.scale_int(b.t_eigenvalue())))
                    .max(diff(&t, &w.scale_int(b.t_eigenvalue()))))
            },
        )?);
    }
    let mut suite = SuiteReport::new(Suite::Kernel, details);
    suite.summary.insert("kernel_dim".into(), report.kernel_dim.to_string());
    suite.summary.insert("trunc".into(), p.trunc.to_string());
    suite.summary.insert("degree".into(), degree.to_string());
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), s.name());
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let p = SuiteParams {
            max_index: 2,
            trunc: 1,
            degree: 1,
            seed: 5,
        };
        for s in [
            Suite::Car,
            Suite::Clifford,
            Suite::Cocycle,
            Suite::FermionNumber,
            Suite::DiracCutoff,
        ] {
            let r = run_suite(s, &p).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.failed_checks().collect::<Vec<_>>());
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn ores_suite_reports_the_sign_discrepancy() {
        let p = SuiteParams {
            max_index: 3,
            ..SuiteParams::default()
        };
        let r = run_suite(Suite::Ores, &p).unwrap();
        assert!(!r.passed());
        // Every failure is a pair with a nonzero trace term, off by exactly twice that term.
        for c in r.failed_checks() {
            assert!(c.label.contains("·id"));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let p = SuiteParams {
            max_index: 2,
            trunc: 1,
            degree: 1,
            seed: 9,
        };
        let a = run_suite(Suite::DiracSymmetry, &p).unwrap();
        let b = run_suite(Suite::DiracSymmetry, &p).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
