//! Exact matrices of operators restricted to a bounded basis.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use gdirac_core::casimir::{casimir_apply, CasimirVariant};
use gdirac_core::dirac::{bounded_tensor_states, dirac_apply, dirac_cutoff_apply, rho_apply, LATTICE};
use gdirac_core::fock::{apply_field, bounded_states, rhat_apply, FieldKind};
use gdirac_core::linalg::SparseVector;
use gdirac_core::spinor::{
    fermion_number_apply, gamma_apply, k_family_apply, k_tilde_exact_apply, spin_states_within, KFamily,
};
use gdirac_core::Scalar;
use serde::Serialize;

use crate::error::CliError;

/// An operator named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Descriptor {
    /// `psi:k`, annihilation of particle index `k` or creation of hole `k`.
    Psi(i64),
    /// `psistar:k`, the adjoint field.
    PsiStar(i64),
    /// `rhat:p,q`, the normal-ordered matrix unit `r̂(E_pq)`.
    Rhat(i64, i64),
    /// `gamma:i,j`, the Clifford generator `γ_ij`.
    Gamma(i64, i64),
    /// `ktilde:i,j`, the exact isotropy operator `K̃_ij`.
    KTilde(i64, i64),
    /// `ktilde:N=n,i,j`, the cut-off isotropy operator `K̃^(n)_ij`.
    KTildeCutoff(i64, i64, i64),
    /// `fermion`, the fermion number `F`.
    Fermion,
    /// `delta-g` or `delta-g:N=n`, the Casimir `Δ_g` or its cut-off `Δ_g,ren^(n)`.
    DeltaG(Option<i64>),
    /// `rho:p,q`, the diagonal action `ρ(E_pq)` on tensor states.
    Rho(i64, i64),
    /// `dirac` or `dirac:N=n`, the Dirac operator or its cut-off `D_(n)`.
    Dirac(Option<i64>),
}

fn ints(args: &str, count: usize, original: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Usage(format!("unknown operator descriptor '{original}'"));
    let values: Vec<i64> = args
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if values.len() == count {
        Ok(values)
    } else {
        Err(bad())
    }
}

fn cutoff<'a>(args: &'a str, original: &str) -> Result<(i64, &'a str), CliError> {
    let bad = || CliError::Usage(format!("unknown operator descriptor '{original}'"));
    let rest = args.strip_prefix("N=").ok_or_else(bad)?;
    let (n, tail) = rest.split_once(',').unwrap_or((rest, ""));
    Ok((n.trim().parse().map_err(|_| bad())?, tail))
}

impl FromStr for Descriptor {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let d = match (name, args) {
            ("psi", a) => Descriptor::Psi(ints(a, 1, s)?[0]),
            ("psistar", a) => Descriptor::PsiStar(ints(a, 1, s)?[0]),
            ("rhat", a) => {
                let v = ints(a, 2, s)?;
                Descriptor::Rhat(v[0], v[1])
            }
            ("gamma", a) => {
                let v = ints(a, 2, s)?;
                Descriptor::Gamma(v[0], v[1])
            }
            ("ktilde", a) if a.starts_with("N=") => {
                let (n, tail) = cutoff(a, s)?;
                let v = ints(tail, 2, s)?;
                Descriptor::KTildeCutoff(n, v[0], v[1])
            }
            ("ktilde", a) => {
                let v = ints(a, 2, s)?;
                Descriptor::KTilde(v[0], v[1])
            }
            ("fermion", "") => Descriptor::Fermion,
            ("delta-g", "") => Descriptor::DeltaG(None),
            ("delta-g", a) => match cutoff(a, s)? {
                (n, "") => Descriptor::DeltaG(Some(n)),
                _ => return Err(CliError::Usage(format!("unknown operator descriptor '{s}'"))),
            },
            ("rho", a) => {
                let v = ints(a, 2, s)?;
                Descriptor::Rho(v[0], v[1])
            }
            ("dirac", "") => Descriptor::Dirac(None),
            ("dirac", a) => match cutoff(a, s)? {
                (n, "") => Descriptor::Dirac(Some(n)),
                _ => return Err(CliError::Usage(format!("unknown operator descriptor '{s}'"))),
            },
            _ => return Err(CliError::Usage(format!("unknown operator descriptor '{s}'"))),
        };
        Ok(d)
    }
}

/// One nonzero matrix entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    /// Row position in the basis.
    pub row: usize,
    /// Column position in the basis.
    pub col: usize,
    /// Exact value, for example `"1"` or `"-1√2"`.
    pub value: String,
}

/// The matrix of an operator on a bounded basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorMatrix {
    /// Descriptor as given.
    pub operator: String,
    /// `fock`, `spinor` or `tensor`.
    pub space: &'static str,
    /// Basis size.
    pub dim: usize,
    /// Basis states in row and column order.
    pub basis: Vec<String>,
    /// Nonzero entries, row-major.
    pub entries: Vec<Entry>,
    /// Image terms that fall outside the basis and are not shown.
    pub outside_basis: usize,
}

fn matrix<K, F>(operator: &str, space: &'static str, basis: Vec<K>, apply: F) -> Result<OperatorMatrix, CliError>
where
    K: Ord + Clone + Display,
    F: Fn(&SparseVector<K>) -> Result<SparseVector<K>, gdirac_core::Error>,
{
    let position: BTreeMap<&K, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut cells: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    let mut outside = 0;
    for (col, key) in basis.iter().enumerate() {
        for (image, c) in apply(&SparseVector::basis(key.clone()))? {
            match position.get(&image) {
                Some(&row) => {
                    cells.insert((row, col), c);
                }
                None => outside += 1,
            }
        }
    }
    Ok(OperatorMatrix {
        operator: operator.to_string(),
        space,
        dim: basis.len(),
        basis: basis.iter().map(ToString::to_string).collect(),
        entries: cells
            .into_iter()
            .map(|((row, col), v)| Entry {
                row,
                col,
                value: v.to_string(),
            })
            .collect(),
        outside_basis: outside,
    })
}

/// Builds the matrix of `descriptor` on the basis of states bounded by `max_index`.
pub fn dump(descriptor: &str, max_index: i64) -> Result<OperatorMatrix, CliError> {
    let d: Descriptor = descriptor.parse()?;
    let fock = || bounded_states(LATTICE, max_index);
    let spin = || spin_states_within(max_index);
    let tensor = || bounded_tensor_states(max_index);
    match d {
        Descriptor::Psi(k) => matrix(descriptor, "fock", fock(), |v| {
            apply_field(LATTICE, FieldKind::Psi, k, v)
        }),
        Descriptor::PsiStar(k) => matrix(descriptor, "fock", fock(), |v| {
            apply_field(LATTICE, FieldKind::PsiStar, k, v)
        }),
        Descriptor::Rhat(p, q) => matrix(descriptor, "fock", fock(), |v| rhat_apply(LATTICE, p, q, v)),
        Descriptor::Gamma(i, j) => matrix(descriptor, "spinor", spin(), |v| gamma_apply(i, j, v)),
        Descriptor::KTilde(i, j) => matrix(descriptor, "spinor", spin(), |v| k_tilde_exact_apply(i, j, v)),
        Descriptor::KTildeCutoff(n, i, j) => matrix(descriptor, "spinor", spin(), |v| {
            k_family_apply(KFamily::KTildeN, n, i, j, v)
        }),
        Descriptor::Fermion => matrix(descriptor, "spinor", spin(), |v| Ok(fermion_number_apply(v))),
        Descriptor::DeltaG(n) => {
            let variant = n.map_or_else(CasimirVariant::g_limit, CasimirVariant::g_ren);
            matrix(descriptor, "fock", fock(), |v| casimir_apply(&variant, v))
        }
        Descriptor::Rho(p, q) => matrix(descriptor, "tensor", tensor(), |v| rho_apply(p, q, v)),
        Descriptor::Dirac(None) => matrix(descriptor, "tensor", tensor(), |v| Ok(dirac_apply(v))),
        Descriptor::Dirac(Some(n)) => {
            if n < 1 {
                return Err(CliError::Usage(format!("cut-off must be at least 1 in '{descriptor}'")));
            }
            matrix(descriptor, "tensor", tensor(), |v| Ok(dirac_cutoff_apply(n, v)))
        }
    }
}
