//! Three-mode bosonic ladder-operator algebra.
//!
//! Operators are polynomials in (a, a†, b, b†, c, c†) with real
//! coefficients, where a and b act on the two rocking modes and c on the
//! stretch mode. Products are applied right to left. [`OperatorSum::normalize`]
//! brings an operator to normal order using [a, a†] = 1, which gives a
//! canonical form suitable for equality tests and coefficient lookup.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Rocking mode along x, ladder a.
    X,
    /// Rocking mode along y, ladder b.
    Y,
    /// Axial stretch mode, ladder c.
    S,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::X, Mode::Y, Mode::S];

    pub fn index(self) -> usize {
        match self {
            Mode::X => 0,
            Mode::Y => 1,
            Mode::S => 2,
        }
    }

    pub fn ladder_symbol(self) -> char {
        match self {
            Mode::X => 'a',
            Mode::Y => 'b',
            Mode::S => 'c',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ladder {
    Raise,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub mode: Mode,
    pub ladder: Ladder,
}

pub const fn raise(mode: Mode) -> Factor {
    Factor {
        mode,
        ladder: Ladder::Raise,
    }
}

pub const fn lower(mode: Mode) -> Factor {
    Factor {
        mode,
        ladder: Ladder::Lower,
    }
}

impl Factor {
    pub fn adjoint(self) -> Factor {
        let ladder = match self.ladder {
            Ladder::Raise => Ladder::Lower,
            Ladder::Lower => Ladder::Raise,
        };
        Factor { ladder, ..self }
    }
}

/// Occupation numbers |n_x, n_y, n_s⟩.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    pub nx: u32,
    pub ny: u32,
    pub ns: u32,
}

impl FockState {
    pub const VACUUM: FockState = FockState { nx: 0, ny: 0, ns: 0 };

    pub const fn new(nx: u32, ny: u32, ns: u32) -> Self {
        Self { nx, ny, ns }
    }

    pub fn get(&self, mode: Mode) -> u32 {
        match mode {
            Mode::X => self.nx,
            Mode::Y => self.ny,
            Mode::S => self.ns,
        }
    }

    fn slot(&mut self, mode: Mode) -> &mut u32 {
        match mode {
            Mode::X => &mut self.nx,
            Mode::Y => &mut self.ny,
            Mode::S => &mut self.ns,
        }
    }

    pub fn with(mut self, mode: Mode, n: u32) -> Self {
        *self.slot(mode) = n;
        self
    }

    /// Applies one ladder operator; `None` when lowering the empty mode.
    pub fn step(self, factor: Factor) -> Option<(FockState, f64)> {
        self.ladder_weight(factor).map(|(s, w)| (s, w.sqrt()))
    }

    /// Like [`step`](Self::step) but returns the squared amplitude.
    fn ladder_weight(self, factor: Factor) -> Option<(FockState, f64)> {
        let mut next = self;
        let n = next.slot(factor.mode);
        match factor.ladder {
            Ladder::Raise => {
                *n += 1;
                let w = f64::from(*n);
                Some((next, w))
            }
            Ladder::Lower if *n == 0 => None,
            Ladder::Lower => {
                let w = f64::from(*n);
                *n -= 1;
                Some((next, w))
            }
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.nx, self.ny, self.ns)
    }
}

/// Finite linear combination of Fock states with real amplitudes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockVector(BTreeMap<FockState, f64>);

impl FockVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(state: FockState) -> Self {
        Self(BTreeMap::from([(state, 1.0)]))
    }

    pub fn amplitude(&self, state: &FockState) -> f64 {
        self.0.get(state).copied().unwrap_or(0.0)
    }

    pub fn add_amplitude(&mut self, state: FockState, amp: f64) {
        *self.0.entry(state).or_insert(0.0) += amp;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &f64)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prune(mut self) -> Self {
        self.0.retain(|_, a| *a != 0.0);
        self
    }
}

impl FromIterator<(FockState, f64)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (FockState, f64)>>(iter: I) -> Self {
        let mut v = FockVector::new();
        for (s, a) in iter {
            v.add_amplitude(s, a);
        }
        v.prune()
    }
}

/// Coefficient times an ordered product of ladder operators. The rightmost
/// factor acts first; an empty product is a scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub factors: Vec<Factor>,
}

impl Monomial {
    pub fn new(coefficient: f64, factors: impl Into<Vec<Factor>>) -> Self {
        Self {
            coefficient,
            factors: factors.into(),
        }
    }

    pub fn scalar(coefficient: f64) -> Self {
        Self::new(coefficient, Vec::new())
    }

    /// Action on a single basis state, or `None` if it annihilates it.
    pub fn apply(&self, state: FockState) -> Option<(FockState, f64)> {
        // The ladder factors multiply to √(∏ n); the product is an exact
        // integer, so a single square root keeps e.g. ⟨n|a†a|n⟩ = n exact.
        let (end, weight) = self
            .factors
            .iter()
            .rev()
            .try_fold((state, 1.0f64), |(s, w), &f| {
                s.ladder_weight(f).map(|(next, k)| (next, w * k))
            })?;
        Some((end, self.coefficient * weight.sqrt()))
    }

    pub fn adjoint(&self) -> Monomial {
        Monomial {
            coefficient: self.coefficient,
            factors: self.factors.iter().rev().map(|f| f.adjoint()).collect(),
        }
    }

    /// Raise and lower counts per mode, irrespective of order.
    pub fn ladder_counts(&self) -> [(u32, u32); 3] {
        let mut counts = [(0, 0); 3];
        for f in &self.factors {
            let c = &mut counts[f.mode.index()];
            match f.ladder {
                Ladder::Raise => c.0 += 1,
                Ladder::Lower => c.1 += 1,
            }
        }
        counts
    }

    /// True when every mode is raised as often as lowered, i.e. the term
    /// commutes with every number operator and is diagonal in the Fock basis.
    pub fn is_number_conserving(&self) -> bool {
        self.ladder_counts().iter().all(|(r, l)| r == l)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.6e}", self.coefficient)?;
        let mut i = 0;
        while i < self.factors.len() {
            let fac = self.factors[i];
            let run = self.factors[i..].iter().take_while(|&&g| g == fac).count();
            let dagger = if fac.ladder == Ladder::Raise { "†" } else { "" };
            write!(f, " {}{}", fac.mode.ladder_symbol(), dagger)?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Canonical key of a normal-ordered monomial: (raises, lowers) per mode.
type NormalKey = [(u32, u32); 3];

fn key_to_factors(key: &NormalKey) -> Vec<Factor> {
    let mut factors = Vec::new();
    for mode in Mode::ALL {
        factors.extend(std::iter::repeat_n(raise(mode), key[mode.index()].0 as usize));
    }
    for mode in Mode::ALL {
        factors.extend(std::iter::repeat_n(lower(mode), key[mode.index()].1 as usize));
    }
    factors
}

/// Normal-orders a single-mode word, returning coefficients of a†^p a^q.
fn normal_order_word(word: &[Ladder]) -> BTreeMap<(u32, u32), f64> {
    let mut poly = BTreeMap::from([((0u32, 0u32), 1.0)]);
    for &l in word {
        let mut next = BTreeMap::new();
        for (&(p, q), &c) in &poly {
            match l {
                Ladder::Lower => *next.entry((p, q + 1)).or_insert(0.0) += c,
                Ladder::Raise => {
                    // a†^p a^q a† = a†^{p+1} a^q + q a†^p a^{q-1}
                    *next.entry((p + 1, q)).or_insert(0.0) += c;
                    if q > 0 {
                        *next.entry((p, q - 1)).or_insert(0.0) += c * f64::from(q);
                    }
                }
            }
        }
        poly = next;
    }
    poly
}

/// A sum of ladder monomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorSum {
    terms: Vec<Monomial>,
}

impl OperatorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(1.0)
    }

    pub fn scalar(c: f64) -> Self {
        Self::from(Monomial::scalar(c))
    }

    pub fn raise(mode: Mode) -> Self {
        Self::from(Monomial::new(1.0, [raise(mode)]))
    }

    pub fn lower(mode: Mode) -> Self {
        Self::from(Monomial::new(1.0, [lower(mode)]))
    }

    /// n̂ = a†a
    pub fn number(mode: Mode) -> Self {
        Self::from(Monomial::new(1.0, [raise(mode), lower(mode)]))
    }

    /// a + a†, the dimensionless position quadrature.
    pub fn quadrature(mode: Mode) -> Self {
        Self::lower(mode) + Self::raise(mode)
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient == 0.0)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| &acc * self)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(Monomial::adjoint).collect(),
        }
    }

    /// Normal-ordered canonical form: within each monomial all raises stand
    /// left of all lowers, each group ordered by mode (X, Y, S); like
    /// monomials are merged,
    /// zero coefficients dropped and terms sorted by their ladder content.
    pub fn normalize(&self) -> Self {
        let mut acc: BTreeMap<NormalKey, f64> = BTreeMap::new();
        for term in &self.terms {
            if term.coefficient == 0.0 {
                continue;
            }
            let per_mode: Vec<BTreeMap<(u32, u32), f64>> = Mode::ALL
                .iter()
                .map(|&m| {
                    let word: Vec<Ladder> = term
                        .factors
                        .iter()
                        .filter(|f| f.mode == m)
                        .map(|f| f.ladder)
                        .collect();
                    normal_order_word(&word)
                })
                .collect();
            for (&kx, &cx) in &per_mode[0] {
                for (&ky, &cy) in &per_mode[1] {
                    for (&ks, &cs) in &per_mode[2] {
                        *acc.entry([kx, ky, ks]).or_insert(0.0) += term.coefficient * cx * cy * cs;
                    }
                }
            }
        }
        Self {
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|(k, c)| Monomial::new(c, key_to_factors(&k)))
                .collect(),
        }
    }

    /// Coefficient of the normal-ordered monomial with the given ladder
    /// content in the canonical form of `self`.
    pub fn coefficient_of(&self, factors: &[Factor]) -> f64 {
        let key = Monomial::new(1.0, factors).ladder_counts();
        self.normalize()
            .terms
            .iter()
            .find(|t| t.ladder_counts() == key)
            .map_or(0.0, |t| t.coefficient)
    }

    /// The number-conserving (diagonal) part of the canonical form.
    pub fn resonant_part(&self) -> Self {
        Self {
            terms: self
                .normalize()
                .terms
                .into_iter()
                .filter(Monomial::is_number_conserving)
                .collect(),
        }
    }

    /// Largest coefficient difference between the canonical forms of `self`
    /// and its adjoint.
    pub fn adjoint_defect(&self) -> f64 {
        (self - &self.adjoint())
            .normalize()
            .terms
            .iter()
            .map(|t| t.coefficient.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.adjoint_defect() <= tol
    }

    pub fn apply(&self, state: FockState) -> FockVector {
        self.terms
            .iter()
            .filter_map(|t| t.apply(state))
            .collect()
    }

    pub fn apply_vector(&self, v: &FockVector) -> FockVector {
        v.iter()
            .flat_map(|(&s, &a)| {
                self.terms
                    .iter()
                    .filter_map(move |t| t.apply(s).map(|(m, k)| (m, k * a)))
            })
            .collect()
    }

    /// Matrix over a truncated basis; amplitudes leaving the box are dropped.
    pub fn to_matrix(&self, basis: &TruncatedBasis) -> SparseMatrix {
        let columns: Vec<Vec<(usize, usize, f64)>> = (0..basis.dimension())
            .into_par_iter()
            .map(|col| {
                self.apply(basis.state(col))
                    .iter()
                    .filter_map(|(m, &amp)| basis.index_of(m).map(|row| (row, col, amp)))
                    .collect()
            })
            .collect();
        let mut entries: Vec<_> = columns.into_iter().flatten().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        SparseMatrix {
            dim: basis.dimension(),
            entries,
        }
    }
}

impl From<Monomial> for OperatorSum {
    fn from(m: Monomial) -> Self {
        Self { terms: vec![m] }
    }
}

impl FromIterator<Monomial> for OperatorSum {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        Self {
            terms: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl AddAssign<&OperatorSum> for OperatorSum {
    fn add_assign(&mut self, rhs: &OperatorSum) {
        self.terms.extend(rhs.terms.iter().cloned());
    }
}

impl Add<&OperatorSum> for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for OperatorSum {
    type Output = OperatorSum;
    fn add(mut self, rhs: OperatorSum) -> OperatorSum {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for &OperatorSum {
    type Output = OperatorSum;
    fn neg(self) -> OperatorSum {
        self * -1.0
    }
}

impl Sub<&OperatorSum> for &OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: &OperatorSum) -> OperatorSum {
        self + &(-rhs)
    }
}

impl Sub for OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: OperatorSum) -> OperatorSum {
        &self - &rhs
    }
}

impl Mul<f64> for &OperatorSum {
    type Output = OperatorSum;
    fn mul(self, k: f64) -> OperatorSum {
        OperatorSum {
            terms: self
                .terms
                .iter()
                .map(|t| Monomial::new(t.coefficient * k, t.factors.clone()))
                .collect(),
        }
    }
}

impl Mul<f64> for OperatorSum {
    type Output = OperatorSum;
    fn mul(self, k: f64) -> OperatorSum {
        &self * k
    }
}

impl Mul<&OperatorSum> for &OperatorSum {
    type Output = OperatorSum;
    fn mul(self, rhs: &OperatorSum) -> OperatorSum {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                let mut factors = l.factors.clone();
                factors.extend_from_slice(&r.factors);
                terms.push(Monomial::new(l.coefficient * r.coefficient, factors));
            }
        }
        OperatorSum { terms }
    }
}

impl Mul for OperatorSum {
    type Output = OperatorSum;
    fn mul(self, rhs: OperatorSum) -> OperatorSum {
        &self * &rhs
    }
}

/// Inclusive per-mode occupation cutoffs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cutoffs {
    pub nx: u32,
    pub ny: u32,
    pub ns: u32,
}

impl Cutoffs {
    pub const fn new(nx: u32, ny: u32, ns: u32) -> Self {
        Self { nx, ny, ns }
    }

    pub fn dimension(&self) -> usize {
        (self.nx as usize + 1) * (self.ny as usize + 1) * (self.ns as usize + 1)
    }

    pub fn contains(&self, s: &FockState) -> bool {
        s.nx <= self.nx && s.ny <= self.ny && s.ns <= self.ns
    }

    /// Every cutoff raised by `k`.
    pub fn widened(&self, k: u32) -> Self {
        Self::new(self.nx + k, self.ny + k, self.ns + k)
    }
}

impl fmt::Display for Cutoffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.nx, self.ny, self.ns)
    }
}

/// Parses `"nx,ny,ns"`.
impl std::str::FromStr for Cutoffs {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| crate::Error::validation(format!("invalid cutoffs {s:?}")))?;
        match parts[..] {
            [nx, ny, ns] => Ok(Self::new(nx, ny, ns)),
            _ => Err(crate::Error::validation(format!("cutoffs {s:?} need three values nx,ny,ns"))),
        }
    }
}

/// All states with n_m ≤ N_m, enumerated with n_s fastest, then n_y, then n_x.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedBasis {
    cutoffs: Cutoffs,
}

impl TruncatedBasis {
    pub fn new(cutoffs: Cutoffs) -> Self {
        Self { cutoffs }
    }

    pub fn cutoffs(&self) -> Cutoffs {
        self.cutoffs
    }

    pub fn dimension(&self) -> usize {
        self.cutoffs.dimension()
    }

    pub fn state(&self, index: usize) -> FockState {
        let ns = self.cutoffs.ns as usize + 1;
        let ny = self.cutoffs.ny as usize + 1;
        FockState::new(
            (index / (ns * ny)) as u32,
            ((index / ns) % ny) as u32,
            (index % ns) as u32,
        )
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        if !self.cutoffs.contains(s) {
            return None;
        }
        let ns = self.cutoffs.ns as usize + 1;
        let ny = self.cutoffs.ny as usize + 1;
        Some((s.nx as usize * ny + s.ny as usize) * ns + s.ns as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = FockState> + '_ {
        (0..self.dimension()).map(|i| self.state(i))
    }
}

/// Coordinate-format real matrix with entries sorted by (row, column).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
            .map_or(0.0, |i| self.entries[i].2)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        let mut y = vec![0.0; self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// max |A_ij − A_ji|
    pub fn max_asymmetry(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Dense block restricted to the given (sorted) basis indices.
    pub fn dense_block(&self, indices: &[usize]) -> DMatrix<f64> {
        let mut local = vec![usize::MAX; self.dim];
        for (k, &i) in indices.iter().enumerate() {
            local[i] = k;
        }
        let mut m = DMatrix::zeros(indices.len(), indices.len());
        for &(r, c, v) in &self.entries {
            let (lr, lc) = (local[r], local[c]);
            if lr != usize::MAX && lc != usize::MAX {
                m[(lr, lc)] += v;
            }
        }
        m
    }
}
