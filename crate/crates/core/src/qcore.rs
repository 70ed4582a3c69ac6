//! Dense complex linear algebra with quantum semantics.
//!
//! Every space handled here is small (dimension at most 16), so states and
//! matrices are plain row-major `Vec`s of [`Amplitude`]s. Basis vectors carry
//! string labels; two states may only be compared when their labels agree.

use std::fmt;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::models::NoteLabel;

/// A complex amplitude.
pub type Amplitude = Complex64;

/// Tolerance on state norms and probability sums.
pub const NORM_EPS: f64 = 1e-9;
/// Entrywise tolerance for `U†U = I` and projector laws.
pub const UNITARY_EPS: f64 = 1e-9;
/// Decision margin for entanglement and complementarity.
pub const ENT_EPS: f64 = 1e-9;
/// Largest Hilbert space this module is meant for.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("states live in different bases")]
    BasisMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("basis is not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("tensor product produces duplicate label `{0}`")]
    LabelCollision(String),
    #[error("Bell pair needs two distinct notes, got {0} twice")]
    SameNote(NoteLabel),
    #[error("expected a two-mode state of dimension 4, found dimension {0}")]
    WrongDimension(usize),
}

/// A normalized state over a labeled orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Amplitude>,
    labels: Vec<String>,
}

impl StateVector {
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amp_of(&self, label: &str) -> Option<Amplitude> {
        self.labels.iter().position(|l| l == label).map(|k| self.amps[k])
    }

    /// The unit vector `|label⟩` over the given basis.
    pub fn basis(labels: &[String], label: &str) -> Result<Self, QError> {
        let raw: Vec<Amplitude> = labels
            .iter()
            .map(|l| if l == label { Amplitude::new(1.0, 0.0) } else { Amplitude::new(0.0, 0.0) })
            .collect();
        if !labels.iter().any(|l| l == label) {
            return Err(QError::LabelMismatch(format!("`{label}` is not a basis label")));
        }
        normalize(&raw, labels)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn same_basis(&self, other: &StateVector) -> bool {
        self.labels == other.labels
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, l) in self.amps.iter().zip(&self.labels) {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, l)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Scales `raw` to unit norm over `labels`.
pub fn normalize(raw: &[Amplitude], labels: &[String]) -> Result<StateVector, QError> {
    if raw.len() != labels.len() {
        return Err(QError::LabelMismatch(format!("{} amplitudes for {} labels", raw.len(), labels.len())));
    }
    if raw.is_empty() {
        return Err(QError::ZeroVector);
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(QError::LabelMismatch(format!("label `{l}` repeats")));
        }
    }
    if let Some(index) = raw.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(QError::NonFinite { index });
    }
    if raw.iter().all(|a| a.norm() < NORM_EPS) {
        return Err(QError::ZeroVector);
    }
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(StateVector { amps: raw.iter().map(|a| a / norm).collect(), labels: labels.to_vec() })
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Amplitude, QError> {
    if !a.same_basis(b) {
        return Err(QError::BasisMismatch);
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Modulus of the overlap; 1 means equal up to global phase.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<f64, QError> {
    inner_product(a, b).map(|z| z.norm())
}

/// Equality up to a global phase.
pub fn same_ray(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    matches!(overlap(a, b), Ok(m) if m >= 1.0 - tol)
}

/// A square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<Amplitude>]) -> Result<Self, QError> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(QError::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Ok(Self { dim, entries: rows.concat() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, QError> {
        let rows: Vec<Vec<Amplitude>> =
            rows.iter().map(|r| r.iter().map(|&x| Amplitude::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Amplitude::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.get(c, r).conj());
            }
        }
        Self { dim: n, entries }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Self, QError> {
        if self.dim != rhs.dim {
            return Err(QError::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let n = self.dim;
        let mut entries = vec![Amplitude::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                for c in 0..n {
                    entries[r * n + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn mul_vec(&self, v: &[Amplitude]) -> Vec<Amplitude> {
        (0..self.dim).map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn trace(&self) -> Amplitude {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

fn unitarity_defect(m: &Matrix) -> f64 {
    match m.adjoint().mul(m) {
        Ok(p) => p.max_abs_diff(&Matrix::identity(m.dim)),
        Err(_) => f64::INFINITY,
    }
}

/// True iff `max |M†M - I| <= tol` entrywise.
pub fn is_unitary(m: &Matrix, tol: f64) -> bool {
    unitarity_defect(m) <= tol
}

/// A matrix that passed the unitarity check.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(Matrix);

impl UnitaryMatrix {
    pub fn new(m: Matrix) -> Result<Self, QError> {
        let deviation = unitarity_defect(&m);
        if deviation > UNITARY_EPS {
            return Err(QError::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn then(&self, next: &UnitaryMatrix) -> Result<UnitaryMatrix, QError> {
        Ok(UnitaryMatrix(next.0.mul(&self.0)?))
    }
}

/// The single-mode gates a score may apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateName {
    X,
    H,
    I,
}

impl GateName {
    pub const ALL: [GateName; 3] = [GateName::X, GateName::H, GateName::I];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::X => "X",
            GateName::H => "H",
            GateName::I => "I",
        }
    }
}

impl std::str::FromStr for GateName {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" => Ok(GateName::X),
            "H" => Ok(GateName::H),
            "I" => Ok(GateName::I),
            other => Err(QError::UnknownGate(other.to_string())),
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The 2×2 gate matrices `X`, `H` and `I`.
pub fn gate(name: GateName) -> UnitaryMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rows = match name {
        GateName::X => vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        GateName::H => vec![vec![h, h], vec![h, -h]],
        GateName::I => vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    UnitaryMatrix(Matrix::from_real_rows(&rows).expect("square literal"))
}

pub fn gate_by_name(name: &str) -> Result<UnitaryMatrix, QError> {
    name.parse().map(gate)
}

pub fn apply_unitary(u: &UnitaryMatrix, s: &StateVector) -> Result<StateVector, QError> {
    if u.dim() != s.dim() {
        return Err(QError::DimensionMismatch { expected: s.dim(), found: u.dim() });
    }
    Ok(StateVector { amps: u.0.mul_vec(&s.amps), labels: s.labels.clone() })
}

fn orthonormal_defect(basis: &[StateVector]) -> Result<f64, QError> {
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            let z = inner_product(a, b)?;
            worst = worst.max((z - Amplitude::new(expect, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// `U = Σ_i |to_i⟩⟨from_i|`, the unitary carrying one orthonormal basis onto another.
pub fn basis_change(from: &[StateVector], to: &[StateVector]) -> Result<UnitaryMatrix, QError> {
    let dim = from.first().map(StateVector::dim).ok_or(QError::DimensionMismatch { expected: 1, found: 0 })?;
    for list in [from, to] {
        if list.len() != dim {
            return Err(QError::DimensionMismatch { expected: dim, found: list.len() });
        }
        if let Some(bad) = list.iter().find(|s| s.dim() != dim) {
            return Err(QError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if list.iter().any(|s| !s.same_basis(&from[0])) {
            return Err(QError::BasisMismatch);
        }
        let deviation = orthonormal_defect(list)?;
        if deviation > UNITARY_EPS {
            return Err(QError::NotOrthonormal { deviation });
        }
    }
    let mut entries = vec![Amplitude::new(0.0, 0.0); dim * dim];
    for (f, t) in from.iter().zip(to) {
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] += t.amps[r] * f.amps[c].conj();
            }
        }
    }
    UnitaryMatrix::new(Matrix { dim, entries })
}

/// A rank-one projector `|ψ⟩⟨ψ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector(Matrix);

impl Projector {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }
}

pub fn projector_of(s: &StateVector) -> Projector {
    let n = s.dim();
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            entries.push(s.amps[r] * s.amps[c].conj());
        }
    }
    Projector(Matrix { dim: n, entries })
}

/// Outcome probabilities in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    outcomes: Vec<(String, f64)>,
}

impl Distribution {
    /// Builds a distribution, checking that the weights are non-negative and sum to one.
    pub fn new(outcomes: Vec<(String, f64)>) -> Option<Self> {
        let total: f64 = outcomes.iter().map(|(_, p)| p).sum();
        let ok = !outcomes.is_empty()
            && outcomes.iter().all(|(_, p)| p.is_finite() && *p >= 0.0)
            && (total - 1.0).abs() <= NORM_EPS;
        ok.then_some(Self { outcomes })
    }

    pub fn point(label: impl Into<String>) -> Self {
        Self { outcomes: vec![(label.into(), 1.0)] }
    }

    pub fn outcomes(&self) -> &[(String, f64)] {
        &self.outcomes
    }

    pub fn prob(&self, label: &str) -> f64 {
        self.outcomes.iter().filter(|(l, _)| l == label).map(|(_, p)| p).sum()
    }

    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|(_, p)| p).sum()
    }

    /// Inverse-CDF lookup: the first outcome whose running sum reaches `u`.
    ///
    /// `u` is expected in `[0, 1)`. Rounding can leave the final running sum a
    /// hair below `u`; the last outcome with nonzero weight is returned then.
    pub fn quantile(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (k, (_, p)) in self.outcomes.iter().enumerate() {
            acc += p;
            if *p > 0.0 && acc >= u {
                return k;
            }
        }
        self.outcomes.iter().rposition(|(_, p)| *p > 0.0).unwrap_or(0)
    }
}

/// Born rule: `p_k = |α_k|²` in basis order.
pub fn born_distribution(s: &StateVector) -> Distribution {
    Distribution { outcomes: s.labels.iter().cloned().zip(s.amps.iter().map(|a| a.norm_sqr())).collect() }
}

/// A seeded, stream-splittable generator.
///
/// Backed by ChaCha8 so that a `(seed, stream)` pair yields the same numbers
/// on every platform. Uniforms take the top 53 bits of a `u64`:
/// `u = (x >> 11) · 2⁻⁵³`, which lies in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// An independent stream for sub-task `stream` of `seed`.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Draws one outcome index by inverse CDF over `d`'s outcome order.
pub fn sample_index(d: &Distribution, rng: &mut SeededRng) -> usize {
    d.quantile(rng.next_unit())
}

/// Draws one outcome label, advancing `rng`.
pub fn sample_outcome<'d>(d: &'d Distribution, rng: &mut SeededRng) -> &'d str {
    &d.outcomes[sample_index(d, rng)].0
}

/// `a ⊗ b`; the left factor's index varies slowest.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector, QError> {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    let mut labels = Vec::with_capacity(a.dim() * b.dim());
    for (x, lx) in a.amps.iter().zip(&a.labels) {
        for (y, ly) in b.amps.iter().zip(&b.labels) {
            let label = format!("{lx}⊗{ly}");
            if labels.contains(&label) {
                return Err(QError::LabelCollision(label));
            }
            amps.push(x * y);
            labels.push(label);
        }
    }
    Ok(StateVector { amps, labels })
}

/// The four maximally entangled two-mode states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiMinus, BellKind::PhiPlus];

    pub fn as_str(self) -> &'static str {
        match self {
            BellKind::PsiMinus => "psi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PhiPlus => "phi+",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Coefficient of `|lo_bit, hi_bit⟩` before the `1/√2` factor.
    fn coefficient(self, lo_bit: u8, hi_bit: u8) -> f64 {
        match (self, lo_bit, hi_bit) {
            (BellKind::PsiMinus, 0, 1) | (BellKind::PsiPlus, 0, 1) | (BellKind::PsiPlus, 1, 0) => 1.0,
            (BellKind::PsiMinus, 1, 0) => -1.0,
            (BellKind::PhiMinus, 0, 0) | (BellKind::PhiPlus, 0, 0) | (BellKind::PhiPlus, 1, 1) => 1.0,
            (BellKind::PhiMinus, 1, 1) => -1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Occupation bits of a mode in storage order.
///
/// Mode vectors use the printed tuple layout `|1⟩ = (1, 0)`, `|0⟩ = (0, 1)`,
/// so the occupied amplitude comes first. The 2×2 gates act on that layout.
pub const MODE_BITS: [u8; 2] = [1, 0];

/// Labels of a single occupancy mode in storage order: `1_n`, `0_n`.
pub fn mode_labels(n: NoteLabel) -> [String; 2] {
    MODE_BITS.map(|b| format!("{b}_{n}"))
}

/// Basis labels of the two-mode space of `lo` and `hi`, `lo` varying slowest.
pub fn pair_labels(lo: NoteLabel, hi: NoteLabel) -> Vec<String> {
    let l = mode_labels(lo);
    let h = mode_labels(hi);
    l.iter().flat_map(|a| h.iter().map(move |b| format!("{a}⊗{b}"))).collect()
}

pub fn bell_state(kind: BellKind, lo: NoteLabel, hi: NoteLabel) -> Result<StateVector, QError> {
    if lo == hi {
        return Err(QError::SameNote(lo));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps: Vec<Amplitude> = MODE_BITS
        .iter()
        .flat_map(|&l| MODE_BITS.iter().map(move |&r| Amplitude::new(h * kind.coefficient(l, r), 0.0)))
        .collect();
    Ok(StateVector { amps, labels: pair_labels(lo, hi) })
}

/// `|α₀₀α₁₁ − α₀₁α₁₀|` of a two-mode state.
///
/// Flipping the bit order of both modes at once leaves this unchanged, so the
/// storage layout of [`MODE_BITS`] reads the same as `(00, 01, 10, 11)`.
pub fn product_defect(s: &StateVector) -> Result<f64, QError> {
    if s.dim() != 4 {
        return Err(QError::WrongDimension(s.dim()));
    }
    let a = &s.amps;
    Ok((a[0] * a[3] - a[1] * a[2]).norm())
}

/// A two-mode state is entangled iff `α₁α₄ ≠ α₂α₃`.
pub fn is_entangled(s: &StateVector) -> Result<bool, QError> {
    product_defect(s).map(|d| d > ENT_EPS)
}

/// Neither orthogonal nor collinear: `0 < |⟨a|b⟩| < 1`, with `ENT_EPS` margins.
pub fn is_complementary(a: &StateVector, b: &StateVector) -> Result<bool, QError> {
    let m = overlap(a, b)?;
    Ok(m > ENT_EPS && m < 1.0 - ENT_EPS)
}
