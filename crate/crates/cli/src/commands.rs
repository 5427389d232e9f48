//! Report builders and writers for each command.

use std::time::Instant;

use gdirac_core::casimir::{casimir_apply, CasimirVariant};
use gdirac_core::dirac::{dirac_cutoff_apply, invariant_blocks, spectrum_report, TensorSpace, TensorVector, LATTICE};
use gdirac_core::fock::{FockSpace, FockVector};
use gdirac_core::linalg::{random_vector, SplitMix64};
use gdirac_core::suites::{run_suite, Suite, SuiteParams, SuiteReport};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::dump::dump;
use crate::error::CliError;

/// Schema tag carried by every JSON report.
pub const SCHEMA: &str = "gdirac/1";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'static str,
    params: &'a SuiteParams,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(command: &'static str, params: &SuiteParams, body: T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        command,
        params,
        body,
    })?;
    text.push('\n');
    Ok(text)
}

fn csv_text<R: AsRef<[u8]>, I: IntoIterator<Item = Vec<R>>>(header: &[&str], rows: I) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Finished report text plus the process exit status it implies.
pub struct Output {
    /// Report text.
    pub text: String,
    /// 0 on success, 1 when a verification check failed.
    pub status: u8,
    /// Short human-readable lines for standard error.
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct VerifyMany<'a> {
    failures: usize,
    suites: &'a [SuiteReport],
}

/// Runs the selected suites, or every suite when none is selected.
pub fn verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let suites: Vec<Suite> = if cfg.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        cfg.suites.clone()
    };
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, &cfg.params))
        .collect::<Result<Vec<_>, _>>()?;
    let failures: usize = reports.iter().map(|r| r.failures).sum();
    let notes = reports
        .iter()
        .map(|r| {
            format!(
                "{}: {} checks, {} cases, {} failures",
                r.suite, r.checks, r.cases, r.failures
            )
        })
        .collect();
    let text = match cfg.format {
        Format::Json if reports.len() == 1 => json("verify", &cfg.params, &reports[0])?,
        Format::Json => json(
            "verify",
            &cfg.params,
            VerifyMany {
                failures,
                suites: &reports,
            },
        )?,
        Format::Csv => csv_text(
            &["suite", "label", "cases", "residual", "passed"],
            reports.iter().flat_map(|r| {
                r.details.iter().map(move |c| {
                    vec![
                        r.suite.to_string(),
                        c.label.clone(),
                        c.cases.to_string(),
                        c.residual.to_string(),
                        c.passed().to_string(),
                    ]
                })
            }),
        )?,
    };
    Ok(Output {
        text,
        status: u8::from(failures > 0),
        notes,
    })
}

/// Block dimensions and `D²` eigenvalues of the truncated invariant sector.
pub fn spectrum(cfg: &RunConfig) -> Result<Output, CliError> {
    let report = spectrum_report(cfg.params.trunc, cfg.params.degree)?;
    let notes = vec![format!(
        "trunc {}: {} blocks, kernel_dim {}",
        report.trunc,
        report.blocks.len(),
        report.kernel_dim
    )];
    let text = match cfg.format {
        Format::Json => json("spectrum", &cfg.params, &report)?,
        Format::Csv => csv_text(
            &["M", "k", "dim", "eig"],
            report.blocks.iter().map(|b| {
                vec![
                    b.pairs.to_string(),
                    b.k.to_string(),
                    b.dim.to_string(),
                    b.eig.to_string(),
                ]
            }),
        )?,
    };
    Ok(Output { text, status: 0, notes })
}

#[derive(Serialize)]
struct Invariants<'a> {
    blocks: &'a [gdirac_core::dirac::InvariantBlock],
}

/// Canonical bases of the invariant blocks.
pub fn invariants(cfg: &RunConfig) -> Result<Output, CliError> {
    let blocks = invariant_blocks(cfg.params.trunc, cfg.params.degree)?;
    let total: usize = blocks.iter().map(|b| b.dim()).sum();
    let notes = vec![format!(
        "trunc {}: {} blocks, {} basis vectors",
        cfg.params.trunc,
        blocks.len(),
        total
    )];
    let text = match cfg.format {
        Format::Json => json("invariants", &cfg.params, Invariants { blocks: &blocks })?,
        Format::Csv => {
            let mut rows = Vec::new();
            for b in &blocks {
                for (i, w) in b.basis.iter().enumerate() {
                    for (state, c) in w {
                        rows.push(vec![
                            b.pairs.to_string(),
                            b.k.to_string(),
                            i.to_string(),
                            state.to_string(),
                            c.to_string(),
                        ]);
                    }
                }
            }
            csv_text(&["M", "k", "vector", "state", "coeff"], rows)?
        }
    };
    Ok(Output { text, status: 0, notes })
}

/// One rung of the benchmark ladder.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    /// Cut-off.
    #[serde(rename = "N")]
    pub n: i64,
    /// Terms of the tensor input vector.
    pub tensor_support: usize,
    /// Terms of `D_(N) v`.
    pub dirac_support: usize,
    /// Terms of the Fock input vector.
    pub fock_support: usize,
    /// Terms of `Δ_g,ren^(N) f`.
    pub casimir_support: usize,
    /// Wall time of the Dirac application in nanoseconds.
    pub dirac_ns: u128,
    /// Wall time of the Casimir application in nanoseconds.
    pub casimir_ns: u128,
}

#[derive(Serialize)]
struct Bench<'a> {
    ladder: &'a [BenchRow],
}

/// Times the cut-off Dirac operator and Casimir on nested seeded vectors for `N = 1..=trunc`.
///
/// The vector at rung `N` extends the vector of rung `N − 1` with fresh terms bounded by `N`.
pub fn bench(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut rng = SplitMix64::new(cfg.params.seed);
    let mut tensor = TensorVector::new();
    let mut fock = FockVector::new();
    let mut rows = Vec::new();
    for n in 1..=cfg.params.trunc {
        for (k, c) in random_vector(&TensorSpace, rng.next_u64(), n)? {
            if tensor.coeff(&k).is_zero() {
                tensor.add_term(k, c);
            }
        }
        for (k, c) in random_vector(&FockSpace { lattice: LATTICE }, rng.next_u64(), n)? {
            if fock.coeff(&k).is_zero() {
                fock.add_term(k, c);
            }
        }
        let start = Instant::now();
        let d = dirac_cutoff_apply(n, &tensor);
        let dirac_ns = start.elapsed().as_nanos().max(1);
        let start = Instant::now();
        let g = casimir_apply(&CasimirVariant::g_ren(n), &fock)?;
        let casimir_ns = start.elapsed().as_nanos().max(1);
        rows.push(BenchRow {
            n,
            tensor_support: tensor.len(),
            dirac_support: d.len(),
            fock_support: fock.len(),
            casimir_support: g.len(),
            dirac_ns,
            casimir_ns,
        });
    }
    let notes = rows
        .iter()
        .map(|r| {
            format!(
                "N={}: D {} -> {} terms in {} ns",
                r.n, r.tensor_support, r.dirac_support, r.dirac_ns
            )
        })
        .collect();
    let text = match cfg.format {
        Format::Json => json("bench", &cfg.params, Bench { ladder: &rows })?,
        Format::Csv => csv_text(
            &[
                "N",
                "tensor_support",
                "dirac_support",
                "fock_support",
                "casimir_support",
                "dirac_ns",
                "casimir_ns",
            ],
            rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.tensor_support.to_string(),
                    r.dirac_support.to_string(),
                    r.fock_support.to_string(),
                    r.casimir_support.to_string(),
                    r.dirac_ns.to_string(),
                    r.casimir_ns.to_string(),
                ]
            }),
        )?,
    };
    Ok(Output { text, status: 0, notes })
}

/// Largest basis written as a dense CSV matrix.
pub const MAX_CSV_DIM: usize = 4096;

/// Matrix of one operator over the basis bounded by `--max-index`.
pub fn dump_op(descriptor: &str, cfg: &RunConfig) -> Result<Output, CliError> {
    let m = dump(descriptor, cfg.params.max_index)?;
    let notes = vec![format!(
        "{}: {} basis states, {} entries, {} image terms outside the basis",
        m.operator,
        m.dim,
        m.entries.len(),
        m.outside_basis
    )];
    let text = match cfg.format {
        Format::Json => json("dump-op", &cfg.params, &m)?,
        Format::Csv => {
            if m.dim > MAX_CSV_DIM {
                return Err(CliError::Usage(format!(
                    "basis of {} states is too large for dense CSV (limit {MAX_CSV_DIM}); use --format json",
                    m.dim
                )));
            }
            let mut dense = vec![vec!["0".to_string(); m.dim]; m.dim];
            for e in &m.entries {
                dense[e.row][e.col] = e.value.clone();
            }
            let mut header = vec!["state"];
            header.extend(m.basis.iter().map(String::as_str));
            csv_text(
                &header,
                dense.into_iter().zip(&m.basis).map(|(row, s)| {
                    let mut r = vec![s.clone()];
                    r.extend(row);
                    r
                }),
            )?
        }
    };
    Ok(Output { text, status: 0, notes })
}
