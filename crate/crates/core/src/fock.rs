//! The fermionic Fock space of a polarized index lattice.
//!
//! A basis state is the canonical word `ψ*_{k1}⋯ψ*_{kα} ψ_{l1}⋯ψ_{lβ}|0⟩`
//! with particle indices `k` (plus half) and antiparticle indices `l` (minus
//! half), each block ascending from left to right. Every fermionic sign in the
//! crate is a crossing count against this word.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BasisSampler, LinearOperator, SparseVector, SplitMix64};
use crate::scalar::{Rational, Scalar};

/// Which integers index the one-particle basis and where zero belongs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lattice {
    /// Nonzero integers; positive indices form the plus half.
    #[default]
    #[serde(rename = "exclude0")]
    ExcludeZero,
    /// All integers; zero joins the plus half.
    #[serde(rename = "include0")]
    IncludeZero,
}

impl Lattice {
    /// True when `k` is an admissible index.
    pub fn contains(self, k: i64) -> bool {
        k != 0 || self == Lattice::IncludeZero
    }

    /// Fails unless `k` is an admissible index.
    pub fn check(self, k: i64) -> Result<()> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(Error::IndexNotInLattice {
                index: k,
                lattice: self,
            })
        }
    }

    /// True when `k` belongs to the plus (particle) half.
    pub fn is_plus(self, k: i64) -> bool {
        k > 0 || (k == 0 && self == Lattice::IncludeZero)
    }

    /// `+1` on the plus half and `−1` on the minus half.
    pub fn half_sign(self, k: i64) -> i64 {
        if self.is_plus(k) {
            1
        } else {
            -1
        }
    }

    /// Admissible indices with `|k| <= n`, ascending.
    pub fn window(self, n: i64) -> Vec<i64> {
        (-n..=n).filter(|&k| self.contains(k)).collect()
    }

    /// Plus-half indices with `|k| <= n`, ascending.
    pub fn plus_window(self, n: i64) -> Vec<i64> {
        (0..=n).filter(|&k| self.contains(k)).collect()
    }

    /// Minus-half indices with `|k| <= n`, ascending.
    pub fn minus_window(self, n: i64) -> Vec<i64> {
        (-n..0).collect()
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lattice::ExcludeZero => "exclude0",
            Lattice::IncludeZero => "include0",
        })
    }
}

/// A canonical basis state of the Fock space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockState {
    /// Occupied particle indices, strictly ascending.
    #[serde(default)]
    pub plus: Vec<i64>,
    /// Occupied antiparticle indices, strictly ascending.
    #[serde(default)]
    pub minus: Vec<i64>,
}

/// A finite linear combination of Fock basis states.
pub type FockVector = SparseVector<FockState>;

impl FockState {
    /// The vacuum `|0⟩`.
    pub fn vacuum() -> Self {
        FockState::default()
    }

    /// Builds a state and checks it is canonical for `lattice`.
    pub fn new(plus: Vec<i64>, minus: Vec<i64>, lattice: Lattice) -> Result<Self> {
        let s = FockState { plus, minus };
        s.validate(lattice)?;
        Ok(s)
    }

    /// Checks ordering and half membership.
    pub fn validate(&self, lattice: Lattice) -> Result<()> {
        let ascending = |v: &[i64]| v.windows(2).all(|w| w[0] < w[1]);
        if !ascending(&self.plus) || !ascending(&self.minus) {
            return Err(Error::NonCanonicalState(format!("{self} is not strictly ascending")));
        }
        for &k in self.plus.iter().chain(&self.minus) {
            lattice.check(k)?;
        }
        if let Some(&k) = self.plus.iter().find(|&&k| !lattice.is_plus(k)) {
            return Err(Error::NonCanonicalState(format!(
                "particle index {k} is not in the plus half"
            )));
        }
        if let Some(&k) = self.minus.iter().find(|&&k| lattice.is_plus(k)) {
            return Err(Error::NonCanonicalState(format!(
                "antiparticle index {k} is not in the minus half"
            )));
        }
        Ok(())
    }

    /// `|plus| − |minus|`.
    pub fn charge(&self) -> i64 {
        self.plus.len() as i64 - self.minus.len() as i64
    }

    /// `|plus| + |minus|`.
    pub fn degree(&self) -> i64 {
        (self.plus.len() + self.minus.len()) as i64
    }

    /// Largest absolute index, zero for the vacuum.
    pub fn bound(&self) -> i64 {
        self.plus.iter().chain(&self.minus).map(|k| k.abs()).max().unwrap_or(0)
    }

    /// True when `k` is occupied in either half.
    pub fn occupies(&self, k: i64) -> bool {
        self.plus.binary_search(&k).is_ok() || self.minus.binary_search(&k).is_ok()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{plus:{:?},minus:{:?}}}", self.plus, self.minus)
    }
}

/// Largest absolute index occurring in a vector.
pub fn vector_bound(v: &FockVector) -> i64 {
    v.keys().map(FockState::bound).max().unwrap_or(0)
}

/// Inserts `k` into a sorted set; returns the number of smaller elements, or `None` if present.
pub(crate) fn insert_sorted<T: Ord>(set: &mut Vec<T>, k: T) -> Option<usize> {
    match set.binary_search(&k) {
        Ok(_) => None,
        Err(pos) => {
            set.insert(pos, k);
            Some(pos)
        }
    }
}

/// Removes `k` from a sorted set; returns the number of smaller elements, or `None` if absent.
pub(crate) fn remove_sorted<T: Ord>(set: &mut Vec<T>, k: &T) -> Option<usize> {
    match set.binary_search(k) {
        Ok(pos) => {
            set.remove(pos);
            Some(pos)
        }
        Err(_) => None,
    }
}

fn parity(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The two kinds of field operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// `ψ_k`: annihilates a particle for `k` in the plus half, creates an antiparticle otherwise.
    Psi,
    /// `ψ*_k`: creates a particle for `k` in the plus half, annihilates an antiparticle otherwise.
    PsiStar,
}

/// Action of `ψ_k` or `ψ*_k` on one basis state, as (image, sign).
///
/// The index must already be admissible for `lattice`.
pub fn field_on_state(lattice: Lattice, kind: FieldKind, k: i64, s: &FockState) -> Option<(FockState, i64)> {
    let mut out = s.clone();
    if lattice.is_plus(k) {
        let pos = match kind {
            FieldKind::PsiStar => insert_sorted(&mut out.plus, k)?,
            FieldKind::Psi => remove_sorted(&mut out.plus, &k)?,
        };
        Some((out, parity(pos)))
    } else {
        let pos = match kind {
            FieldKind::Psi => insert_sorted(&mut out.minus, k)?,
            FieldKind::PsiStar => remove_sorted(&mut out.minus, &k)?,
        };
        Some((out, parity(s.plus.len() + pos)))
    }
}

/// Applies `ψ_k` or `ψ*_k` to a vector.
pub fn apply_field(lattice: Lattice, kind: FieldKind, k: i64, v: &FockVector) -> Result<FockVector> {
    lattice.check(k)?;
    Ok(v.map_signed(&Scalar::one(), |s| field_on_state(lattice, kind, k, s)))
}

/// The field operator as a composable [`LinearOperator`].
pub fn field_op(lattice: Lattice, kind: FieldKind, k: i64) -> Result<LinearOperator<FockState>> {
    lattice.check(k)?;
    Ok(LinearOperator::new(move |v| {
        v.map_signed(&Scalar::one(), |s| field_on_state(lattice, kind, k, s))
    }))
}

/// Action of `r̂(E_pq)` on one basis state, as a list of (image, integer coefficient).
///
/// `r̂(E_pq) = ψ*_p ψ_q`, minus the identity when `p = q` lies in the minus half.
pub fn rhat_on_state(lattice: Lattice, p: i64, q: i64, s: &FockState) -> Option<(FockState, i64)> {
    let word = field_on_state(lattice, FieldKind::Psi, q, s)
        .and_then(|(t, a)| field_on_state(lattice, FieldKind::PsiStar, p, &t).map(|(u, b)| (u, a * b)));
    if p == q && !lattice.is_plus(p) {
        // ψ*_l ψ_l is the identity unless l is occupied, where it vanishes; subtracting
        // the identity leaves −1 on occupied l and 0 otherwise.
        return match word {
            Some(_) => None,
            None => Some((s.clone(), -1)),
        };
    }
    word
}

/// Applies `r̂(E_pq)` to a vector.
pub fn rhat_apply(lattice: Lattice, p: i64, q: i64, v: &FockVector) -> Result<FockVector> {
    lattice.check(p)?;
    lattice.check(q)?;
    Ok(v.map_signed(&Scalar::one(), |s| rhat_on_state(lattice, p, q, s)))
}

/// `r̂(E_pq)` as a composable operator.
pub fn rhat_op(lattice: Lattice, p: i64, q: i64) -> Result<LinearOperator<FockState>> {
    lattice.check(p)?;
    lattice.check(q)?;
    Ok(LinearOperator::new(move |v| {
        v.map_signed(&Scalar::one(), |s| rhat_on_state(lattice, p, q, s))
    }))
}

/// Matrix entries of `r̂(E_pq)` by the four polarization cases, an independent
/// formulation used to cross-check [`rhat_on_state`].
pub fn rhat_by_cases(lattice: Lattice, p: i64, q: i64, s: &FockState) -> Option<(FockState, i64)> {
    let (pp, qp) = (lattice.is_plus(p), lattice.is_plus(q));
    let mut out = s.clone();
    match (pp, qp) {
        // Particle hop q -> p.
        (true, true) => {
            let i = remove_sorted(&mut out.plus, &q)?;
            let j = insert_sorted(&mut out.plus, p)?;
            Some((out, parity(i + j)))
        }
        // Antiparticle hop p -> q, with the vacuum subtraction on the diagonal.
        (false, false) => {
            if p == q {
                return s.minus.binary_search(&p).ok().map(|_| (s.clone(), -1));
            }
            let i = remove_sorted(&mut out.minus, &p)?;
            let j = insert_sorted(&mut out.minus, q)?;
            Some((out, -parity(i + j)))
        }
        // Pair creation: particle p, antiparticle q.
        (true, false) => {
            let i = insert_sorted(&mut out.minus, q)?;
            let j = insert_sorted(&mut out.plus, p)?;
            Some((out, parity(s.plus.len() + i + j)))
        }
        // Pair annihilation: particle q, antiparticle p.
        (false, true) => {
            let i = remove_sorted(&mut out.plus, &q)?;
            let j = remove_sorted(&mut out.minus, &p)?;
            let n = out.plus.len();
            Some((out, parity(i + n + j)))
        }
    }
}

/// Which diagonal grading to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grading {
    /// `|plus| − |minus|`.
    Charge,
    /// `|plus| + |minus|`.
    Number,
}

/// Multiplies each basis state by its charge or particle number.
pub fn charge_number_apply(which: Grading, v: &FockVector) -> FockVector {
    v.map_signed(&Scalar::one(), |s| {
        let w = match which {
            Grading::Charge => s.charge(),
            Grading::Number => s.degree(),
        };
        (w != 0).then(|| (s.clone(), w))
    })
}

/// Bilinear inner product with the canonical basis orthonormal.
pub fn inner_fock(v: &FockVector, w: &FockVector) -> Scalar {
    v.inner(w)
}

/// A finite combination of matrix units `E_pq` plus a central coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieElement {
    /// Coefficients of the matrix units.
    #[serde(with = "pair_map")]
    pub terms: BTreeMap<(i64, i64), Scalar>,
    /// Central coefficient.
    pub central: Scalar,
}

mod pair_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        p: i64,
        q: i64,
        coeff: Scalar,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i64, i64), Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|(&(p, q), c)| Entry { p, q, coeff: c.clone() }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<(i64, i64), Scalar>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter()
            .filter(|e| !e.coeff.is_zero())
            .map(|e| ((e.p, e.q), e.coeff))
            .collect())
    }
}

impl LieElement {
    /// The zero element.
    pub fn zero() -> Self {
        LieElement::default()
    }

    /// The matrix unit `E_pq`.
    pub fn unit(p: i64, q: i64) -> Self {
        let mut e = LieElement::zero();
        e.add_term(p, q, Scalar::one());
        e
    }

    /// Adds `c·E_pq`, dropping cancelled terms.
    pub fn add_term(&mut self, p: i64, q: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, q)).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    /// Coefficient of `E_pq`.
    pub fn coeff(&self, p: i64, q: i64) -> Scalar {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// Sum of two elements.
    pub fn plus(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (&(p, q), c) in &other.terms {
            out.add_term(p, q, c.clone());
        }
        out.central += &other.central;
        out
    }

    /// Scalar multiple.
    pub fn scaled(&self, c: &Scalar) -> LieElement {
        let mut out = LieElement::zero();
        for (&(p, q), d) in &self.terms {
            out.add_term(p, q, d * c);
        }
        out.central = &self.central * c;
        out
    }

    /// True when both the matrix part and the central part vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }
}

/// The Schwinger cocycle, extended bilinearly from
/// `s(E_ij, E_ji) = 1` for `i` in the minus half and `j` in the plus half,
/// `−1` for the reverse, and zero on all other pairs of matrix units.
pub fn schwinger(lattice: Lattice, a: &LieElement, b: &LieElement) -> Scalar {
    let mut acc = Scalar::zero();
    for (&(i, j), c) in &a.terms {
        if lattice.is_plus(i) == lattice.is_plus(j) {
            continue;
        }
        let d = b.coeff(j, i);
        if d.is_zero() {
            continue;
        }
        let sign = if lattice.is_plus(j) { 1 } else { -1 };
        acc += &(c * &d).mul_int(sign);
    }
    acc
}

/// The centrally extended bracket: matrix commutator plus `s(A, B)`.
/// Central parts of the arguments never contribute.
pub fn bracket_central(lattice: Lattice, a: &LieElement, b: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (&(i, j), c) in &a.terms {
        for (&(m, n), d) in &b.terms {
            let cd = c * d;
            if j == m {
                out.add_term(i, n, cd.clone());
            }
            if n == i {
                out.add_term(m, j, -cd);
            }
        }
    }
    out.central = schwinger(lattice, a, b);
    out
}

/// Applies `Σ c_pq r̂(E_pq) + central·id`.
pub fn lie_apply(lattice: Lattice, x: &LieElement, v: &FockVector) -> Result<FockVector> {
    let mut out = v.scale(&x.central);
    for (&(p, q), c) in &x.terms {
        out.add_scaled(&rhat_apply(lattice, p, q, v)?, c);
    }
    Ok(out)
}

/// A sparse square matrix indexed by positive mode labels.
pub type TermTable = BTreeMap<(i64, i64), Scalar>;

fn table_add(t: &mut TermTable, key: (i64, i64), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = t.entry(key).or_default();
    *slot += &c;
    if slot.is_zero() {
        t.remove(&key);
    }
}

/// Matrix product of two term tables.
pub fn table_mul(x: &TermTable, y: &TermTable) -> TermTable {
    let mut out = TermTable::new();
    for (&(i, k), a) in x {
        for (&(k2, j), b) in y.range((k, i64::MIN)..=(k, i64::MAX)) {
            debug_assert_eq!(k, k2);
            table_add(&mut out, (i, j), a * b);
        }
    }
    out
}

/// `x + c·y` for term tables.
pub fn table_axpy(x: &TermTable, c: i64, y: &TermTable) -> TermTable {
    let mut out = x.clone();
    for (&k, v) in y {
        table_add(&mut out, k, v.mul_int(c));
    }
    out
}

/// Transpose of a term table.
pub fn table_transpose(x: &TermTable) -> TermTable {
    x.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect()
}

/// Trace of a term table.
pub fn table_trace(x: &TermTable) -> Scalar {
    x.iter().filter(|((i, j), _)| i == j).map(|(_, c)| c.clone()).sum()
}

/// An element `x = [[a, b], [c, d]]` of `o_res` with `a = −dᵗ`, stored by its
/// `d`, `b` and `c` blocks. The blocks `b` and `c` are antisymmetric.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OresElement {
    /// Coefficient block of `a*_i a_j`.
    pub d: TermTable,
    /// Coefficient block of `a_i a_j`.
    pub b: TermTable,
    /// Coefficient block of `a*_i a*_j`.
    pub c: TermTable,
}

impl OresElement {
    /// Builds an element after checking antisymmetry and positivity of indices.
    pub fn new(d: TermTable, b: TermTable, c: TermTable) -> Result<Self> {
        let x = OresElement { d, b, c };
        x.validate()?;
        Ok(x)
    }

    /// Checks antisymmetry of `b` and `c` and that every index is a positive mode.
    pub fn validate(&self) -> Result<()> {
        for t in [&self.d, &self.b, &self.c] {
            for &(i, j) in t.keys() {
                for k in [i, j] {
                    if k <= 0 {
                        return Err(Error::IndexNotInLattice {
                            index: k,
                            lattice: Lattice::ExcludeZero,
                        });
                    }
                }
            }
        }
        for (name, t) in [("b", &self.b), ("c", &self.c)] {
            let antisymmetric = t.iter().all(|(&(i, j), v)| {
                let w = t.get(&(j, i)).cloned().unwrap_or_default();
                (v + &w).is_zero()
            });
            if !antisymmetric {
                return Err(Error::NotAntisymmetric(name));
            }
        }
        Ok(())
    }

    /// The implicit upper-left block `a = −dᵗ`.
    pub fn a_block(&self) -> TermTable {
        table_axpy(&TermTable::new(), -1, &table_transpose(&self.d))
    }
}

/// Block-matrix commutator `[x, y] = xy − yx` in `o_res`.
pub fn ores_bracket(x: &OresElement, y: &OresElement) -> OresElement {
    let (xa, ya) = (x.a_block(), y.a_block());
    let m = table_mul;
    let comm = |p: &TermTable, q: &TermTable, r: &TermTable, s: &TermTable| table_axpy(&m(p, q), -1, &m(r, s));
    // d-block: [d, d'] + c b' − c' b
    let d = table_axpy(&comm(&x.d, &y.d, &y.d, &x.d), 1, &comm(&x.c, &y.b, &y.c, &x.b));
    // b-block: a b' + b d' − a' b − b' d
    let b = table_axpy(&comm(&xa, &y.b, &ya, &x.b), 1, &comm(&x.b, &y.d, &y.b, &x.d));
    // c-block: c a' + d c' − c' a − d' c
    let c = table_axpy(&comm(&x.c, &ya, &y.c, &xa), 1, &comm(&x.d, &y.c, &y.d, &x.c));
    OresElement { d, b, c }
}

/// The trace term `½ Tr(c b′ − c′ b)` attached to a pair of `o_res` elements.
///
/// For the realization [`t_ores_apply`] the commutator
/// `[T(x), T(y)] − T([x, y])` equals the negative of this value times the
/// identity; see the crate tests for the brute-force check.
pub fn ores_trace_term(x: &OresElement, y: &OresElement) -> Scalar {
    let t = table_axpy(&table_mul(&x.c, &y.b), -1, &table_mul(&y.c, &x.b));
    &table_trace(&t) * &Scalar::from_rational(Rational::new(1, 2).expect("nonzero"))
}

/// Applies `T(x) = Σ d_ij a*_i a_j + ½ Σ b_ij a_i a_j + ½ Σ c_ij a*_i a*_j`
/// on particle-only states, with `a_i = ψ_i` and `a*_i = ψ*_i` for `i > 0`.
pub fn t_ores_apply(d: &TermTable, b: &TermTable, c: &TermTable, v: &FockVector) -> Result<FockVector> {
    let x = OresElement::new(d.clone(), b.clone(), c.clone())?;
    t_ores_element_apply(&x, v)
}

/// [`t_ores_apply`] for a validated element.
pub fn t_ores_element_apply(x: &OresElement, v: &FockVector) -> Result<FockVector> {
    if v.keys().any(|s| !s.minus.is_empty()) {
        return Err(Error::NotParticleOnly);
    }
    let lat = Lattice::ExcludeZero;
    let half = Scalar::from_rational(Rational::new(1, 2)?);
    let two_fields = |k1: FieldKind, i: i64, k2: FieldKind, j: i64, s: &FockState| {
        field_on_state(lat, k2, j, s).and_then(|(t, a)| field_on_state(lat, k1, i, &t).map(|(u, b)| (u, a * b)))
    };
    let mut out = FockVector::new();
    for (&(i, j), c) in &x.d {
        out.add_scaled(
            &v.map_signed(c, |s| two_fields(FieldKind::PsiStar, i, FieldKind::Psi, j, s)),
            &Scalar::one(),
        );
    }
    for (&(i, j), c) in &x.b {
        out.add_scaled(
            &v.map_signed(&(c * &half), |s| two_fields(FieldKind::Psi, i, FieldKind::Psi, j, s)),
            &Scalar::one(),
        );
    }
    for (&(i, j), c) in &x.c {
        out.add_scaled(
            &v.map_signed(&(c * &half), |s| {
                two_fields(FieldKind::PsiStar, i, FieldKind::PsiStar, j, s)
            }),
            &Scalar::one(),
        );
    }
    Ok(out)
}

/// All canonical states with indices bounded by `n` in absolute value.
pub fn bounded_states(lattice: Lattice, n: i64) -> Vec<FockState> {
    let plus = lattice.plus_window(n);
    let minus = lattice.minus_window(n);
    let mut out = Vec::new();
    for pm in 0u64..(1 << plus.len()) {
        let p: Vec<i64> = plus
            .iter()
            .enumerate()
            .filter(|(i, _)| pm >> i & 1 == 1)
            .map(|(_, &k)| k)
            .collect();
        for mm in 0u64..(1 << minus.len()) {
            let m: Vec<i64> = minus
                .iter()
                .enumerate()
                .filter(|(i, _)| mm >> i & 1 == 1)
                .map(|(_, &k)| k)
                .collect();
            out.push(FockState {
                plus: p.clone(),
                minus: m,
            });
        }
    }
    out.sort();
    out
}

/// Canonical states with exactly `pairs` particles and `pairs` antiparticles, indices bounded by `n`.
pub fn charge_zero_states(lattice: Lattice, n: i64, pairs: usize) -> Vec<FockState> {
    let plus = lattice.plus_window(n);
    let minus = lattice.minus_window(n);
    let mut out = Vec::new();
    for p in subsets(&plus, pairs) {
        for m in subsets(&minus, pairs) {
            out.push(FockState {
                plus: p.clone(),
                minus: m,
            });
        }
    }
    out.sort();
    out
}

/// All `k`-element subsets of `items`, each ascending, in lexicographic order.
pub fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Random Fock vectors: every admissible index up to the bound is occupied by a fair bit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FockSpace {
    /// Index lattice.
    pub lattice: Lattice,
}

impl BasisSampler for FockSpace {
    type Key = FockState;

    fn sample_key(&self, rng: &mut SplitMix64, bound: i64) -> FockState {
        let plus = self
            .lattice
            .plus_window(bound)
            .into_iter()
            .filter(|_| rng.bit())
            .collect();
        let minus = self
            .lattice
            .minus_window(bound)
            .into_iter()
            .filter(|_| rng.bit())
            .collect();
        FockState { plus, minus }
    }
}

/// Random charge-zero Fock vectors: a pair count, then that many particles and antiparticles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChargeZeroSpace {
    /// Index lattice.
    pub lattice: Lattice,
}

impl BasisSampler for ChargeZeroSpace {
    type Key = FockState;

    fn sample_key(&self, rng: &mut SplitMix64, bound: i64) -> FockState {
        let plus_w = self.lattice.plus_window(bound);
        let minus_w = self.lattice.minus_window(bound);
        let max_pairs = plus_w.len().min(minus_w.len());
        let pairs = rng.below(max_pairs as u64 + 1) as usize;
        FockState {
            plus: rng.choose(&plus_w, pairs),
            minus: rng.choose(&minus_w, pairs),
        }
    }
}
