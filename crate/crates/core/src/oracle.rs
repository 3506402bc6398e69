//! Exact diagonalization of H0 + V3 + V4 in a truncated Fock basis.
//!
//! This is an independent check on the perturbative results: the cross-Kerr
//! coefficient is read off the dressed spectrum as
//! E(1,0,1) − E(1,0,0) − E(0,0,1) + E(0,0,0), and its O(ξ) part is isolated by
//! fitting χ(ξ) = s·ξ + k·ξ² over a ladder of ξ values.
//!
//! Every term of the Hamiltonian changes n_x and n_y by even amounts, so the
//! parities of n_x and n_y are conserved and the matrix splits into four
//! blocks that are diagonalized separately. The split is verified on the
//! assembled matrix; if it does not hold the whole matrix is treated as one
//! block.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{Cutoffs, FockState, Mode, SparseMatrix, TruncatedBasis};
use crate::hamiltonian::build_paper_operators;
use crate::pt::{kerr_stencil, second_difference};

pub const DEFAULT_CUTOFFS: Cutoffs = Cutoffs::new(10, 6, 10);
pub const MIN_CUTOFFS: Cutoffs = Cutoffs::new(6, 4, 6);
pub const DEFAULT_XI_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const DEFAULT_OVERLAP_THRESHOLD: f64 = 0.5;
pub const DEFAULT_DIMENSION_CEILING: usize = 20_000;

/// Relative eigenvalue gap below which levels are treated as degenerate
/// during dressed-state assignment.
const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub r: f64,
    pub cutoffs: Cutoffs,
    /// Positive, strictly descending.
    pub xi_values: Vec<f64>,
    pub overlap_threshold: f64,
    pub dimension_ceiling: usize,
}

impl OracleConfig {
    pub fn new(r: f64) -> Self {
        Self {
            r,
            cutoffs: DEFAULT_CUTOFFS,
            xi_values: DEFAULT_XI_LADDER.to_vec(),
            overlap_threshold: DEFAULT_OVERLAP_THRESHOLD,
            dimension_ceiling: DEFAULT_DIMENSION_CEILING,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.cutoffs;
        if c.nx < MIN_CUTOFFS.nx || c.ny < MIN_CUTOFFS.ny || c.ns < MIN_CUTOFFS.ns {
            return Err(Error::validation(format!(
                "cutoffs ({c}) must be at least ({MIN_CUTOFFS})"
            )));
        }
        if self.xi_values.is_empty() {
            return Err(Error::validation("xi ladder is empty"));
        }
        if self.xi_values.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::validation("xi values must be positive"));
        }
        if self.xi_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::validation("xi values must be strictly descending"));
        }
        check_threshold(self.overlap_threshold)?;
        check_dimension(c, self.dimension_ceiling)
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if (0.5..1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::validation(format!("overlap threshold {t} must lie in [0.5, 1)")))
    }
}

fn check_dimension(cutoffs: Cutoffs, ceiling: usize) -> Result<()> {
    let dimension = cutoffs.dimension();
    if dimension > ceiling {
        Err(Error::DimensionTooLarge { dimension, ceiling })
    } else {
        Ok(())
    }
}

/// Eigenpairs of one invariant block, ascending.
#[derive(Clone, Debug)]
struct SectorEigen {
    /// Global basis indices spanned by the block.
    indices: Vec<usize>,
    values: Vec<f64>,
    /// Column j is the eigenvector of `values[j]` in block coordinates.
    vectors: DMatrix<f64>,
}

/// Full spectrum of a real symmetric matrix over a truncated basis.
#[derive(Clone, Debug)]
pub struct Spectrum {
    basis: TruncatedBasis,
    sectors: Vec<SectorEigen>,
    /// (sector, local column) of each global eigenvalue, ascending.
    order: Vec<(usize, usize)>,
    eigenvalues: Vec<f64>,
    /// Sector and local row of every basis index.
    locate: Vec<(usize, usize)>,
}

impl Spectrum {
    pub fn basis(&self) -> &TruncatedBasis {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    /// ⟨basis[row]|eigenvector k⟩
    pub fn component(&self, k: usize, row: usize) -> f64 {
        let (sector, col) = self.order[k];
        let (row_sector, local) = self.locate[row];
        if row_sector == sector {
            self.sectors[sector].vectors[(local, col)]
        } else {
            0.0
        }
    }

    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        let (sector, col) = self.order[k];
        let s = &self.sectors[sector];
        let mut v = DVector::zeros(self.basis.dimension());
        for (local, &global) in s.indices.iter().enumerate() {
            v[global] = s.vectors[(local, col)];
        }
        v
    }

    /// Eigenvectors as columns, in eigenvalue order.
    pub fn eigenvector_matrix(&self) -> DMatrix<f64> {
        let n = self.basis.dimension();
        let mut q = DMatrix::zeros(n, n);
        for k in 0..n {
            q.set_column(k, &self.eigenvector(k));
        }
        q
    }

    /// max |QᵀQ − I|; vectors from different blocks are orthogonal exactly.
    pub fn orthonormality_defect(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| {
                let gram = s.vectors.transpose() * &s.vectors;
                let n = gram.nrows();
                (gram - DMatrix::<f64>::identity(n, n)).amax()
            })
            .fold(0.0, f64::max)
    }
}

fn parity_sector(s: &FockState) -> usize {
    (s.nx % 2 * 2 + s.ny % 2) as usize
}

fn partition(matrix: &SparseMatrix, basis: &TruncatedBasis) -> Vec<Vec<usize>> {
    let sector_of: Vec<usize> = basis.iter().map(|s| parity_sector(&s)).collect();
    let conserved = matrix
        .entries()
        .iter()
        .all(|&(r, c, v)| v == 0.0 || sector_of[r] == sector_of[c]);
    if !conserved {
        return vec![(0..basis.dimension()).collect()];
    }
    let mut blocks = vec![Vec::new(); 4];
    for (i, &s) in sector_of.iter().enumerate() {
        blocks[s].push(i);
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

fn solve_block(matrix: &SparseMatrix, indices: Vec<usize>) -> SectorEigen {
    let block = matrix.dense_block(&indices);
    let eig = SymmetricEigen::new(block);
    let mut cols: Vec<usize> = (0..indices.len()).collect();
    cols.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = cols.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = DMatrix::from_fn(indices.len(), cols.len(), |i, j| eig.eigenvectors[(i, cols[j])]);
    SectorEigen {
        indices,
        values,
        vectors,
    }
}

/// Diagonalizes a symmetric operator matrix over `basis`.
pub fn diagonalize_matrix(matrix: &SparseMatrix, basis: TruncatedBasis) -> Spectrum {
    let blocks = partition(matrix, &basis);
    let sectors: Vec<SectorEigen> = blocks
        .into_par_iter()
        .map(|indices| solve_block(matrix, indices))
        .collect();

    let mut locate = vec![(0, 0); basis.dimension()];
    for (si, s) in sectors.iter().enumerate() {
        for (local, &global) in s.indices.iter().enumerate() {
            locate[global] = (si, local);
        }
    }
    let mut order: Vec<(usize, usize)> = sectors
        .iter()
        .enumerate()
        .flat_map(|(si, s)| (0..s.values.len()).map(move |j| (si, j)))
        .collect();
    order.sort_by(|&(sa, ja), &(sb, jb)| {
        sectors[sa].values[ja]
            .total_cmp(&sectors[sb].values[jb])
            .then((sa, ja).cmp(&(sb, jb)))
    });
    let eigenvalues = order.iter().map(|&(s, j)| sectors[s].values[j]).collect();
    Spectrum {
        basis,
        sectors,
        order,
        eigenvalues,
        locate,
    }
}

pub fn diagonalize_with_ceiling(r: f64, xi: f64, cutoffs: Cutoffs, ceiling: usize) -> Result<Spectrum> {
    check_dimension(cutoffs, ceiling)?;
    let ops = build_paper_operators(r, xi)?;
    let basis = TruncatedBasis::new(cutoffs);
    let matrix = ops.full().to_matrix(&basis);
    Ok(diagonalize_matrix(&matrix, basis))
}

/// Full spectrum of H0 + V3 + V4 (units ħω_z) over the cutoff box.
pub fn diagonalize(r: f64, xi: f64, cutoffs: Cutoffs) -> Result<Spectrum> {
    diagonalize_with_ceiling(r, xi, cutoffs, DEFAULT_DIMENSION_CEILING)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedLevel {
    pub eigen_index: usize,
    pub energy: f64,
    /// Squared overlap with the bare state, summed over any exactly
    /// degenerate partners of the chosen level.
    pub overlap_sq: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DressedAssignment(pub BTreeMap<FockState, DressedLevel>);

impl DressedAssignment {
    pub fn get(&self, s: &FockState) -> Option<&DressedLevel> {
        self.0.get(s)
    }

    pub fn min_overlap_sq(&self) -> f64 {
        self.0.values().map(|l| l.overlap_sq).fold(1.0, f64::min)
    }
}

/// Dressed eigenvalue of a bare state: the level of largest overlap.
pub fn dressed_level(spectrum: &Spectrum, state: FockState, threshold: f64) -> Result<DressedLevel> {
    let row = spectrum.basis.index_of(&state).ok_or_else(|| {
        Error::validation(format!("{state} lies outside the cutoffs {}", spectrum.basis.cutoffs()))
    })?;
    let ev = &spectrum.eigenvalues;
    let overlaps: Vec<f64> = (0..ev.len()).map(|k| spectrum.component(k, row).powi(2)).collect();
    let best = (0..ev.len())
        .max_by(|&a, &b| overlaps[a].total_cmp(&overlaps[b]).then(b.cmp(&a)))
        .expect("non-empty spectrum");
    let energy = ev[best];
    let tol = DEGENERACY_TOLERANCE * (1.0 + energy.abs());
    let cluster = (0..ev.len()).filter(|&k| (ev[k] - energy).abs() <= tol);
    let first = cluster.clone().next().unwrap_or(best);
    let overlap_sq: f64 = cluster.map(|k| overlaps[k]).sum();
    if overlap_sq <= threshold {
        return Err(Error::AmbiguousAssignment {
            state,
            overlap_sq,
            threshold,
        });
    }
    Ok(DressedLevel {
        eigen_index: first,
        energy,
        overlap_sq,
    })
}

pub fn assign_dressed(spectrum: &Spectrum, states: &[FockState], threshold: f64) -> Result<DressedAssignment> {
    let mut out = DressedAssignment::default();
    for &s in states {
        let level = dressed_level(spectrum, s, threshold)?;
        if out.0.values().any(|l| l.eigen_index == level.eigen_index) {
            return Err(Error::AmbiguousAssignment {
                state: s,
                overlap_sq: level.overlap_sq,
                threshold,
            });
        }
        out.0.insert(s, level);
    }
    Ok(out)
}

/// χ/ω_z as the second difference of dressed energies, using one phonon in
/// the given rocking polarization.
pub fn chi_from_spectrum(spectrum: &Spectrum, rocking: Mode, threshold: f64) -> Result<(f64, DressedAssignment)> {
    check_threshold(threshold)?;
    let stencil = kerr_stencil(rocking);
    let assignment = assign_dressed(spectrum, &stencil, threshold)?;
    let e = stencil.map(|s| assignment.0[&s].energy);
    Ok((second_difference(e), assignment))
}

pub fn extract_chi_numeric(
    r: f64,
    xi: f64,
    cutoffs: Cutoffs,
    overlap_threshold: f64,
) -> Result<(f64, DressedAssignment)> {
    let spectrum = diagonalize(r, xi, cutoffs)?;
    chi_from_spectrum(&spectrum, Mode::X, overlap_threshold)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolation {
    /// χ/(ξ ω_z) in the ξ → 0 limit.
    pub slope: f64,
    pub curvature: f64,
    /// max_i |χ_i − s ξ_i − k ξ_i²| / ξ_i, in the units of the slope.
    pub residual: f64,
    /// (ξ, χ/ω_z) per ladder point.
    pub points: Vec<(f64, f64)>,
    pub min_overlap_sq: f64,
}

/// Least-squares fit of χ = s ξ + k ξ², with each point weighted by 1/ξ so
/// that the smallest ξ carries as much weight as the largest.
pub fn fit_linear_quadratic(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InsufficientLadder {
            required: 2,
            given: points.len(),
        });
    }
    if points.iter().any(|p| p.0.is_nan() || p.0 <= 0.0) {
        return Err(Error::validation("fit abscissae must be positive"));
    }
    // Weighted rows are (1, ξ) against χ/ξ; the ξ column is rescaled to unit
    // maximum before solving.
    let s2 = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let a = DMatrix::from_fn(points.len(), 2, |i, j| if j == 0 { 1.0 } else { points[i].0 / s2 });
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p.1 / p.0));
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::validation(format!("least-squares fit failed: {e}")))?;
    let (slope, curvature) = (sol[0], sol[1] / s2);
    let residual = points
        .iter()
        .map(|&(x, y)| (y - slope * x - curvature * x * x).abs() / x)
        .fold(0.0, f64::max);
    Ok((slope, curvature, residual))
}

pub fn extrapolate_chi(
    r: f64,
    cutoffs: Cutoffs,
    xi_values: &[f64],
    overlap_threshold: f64,
) -> Result<Extrapolation> {
    if xi_values.len() < 3 {
        return Err(Error::InsufficientLadder {
            required: 3,
            given: xi_values.len(),
        });
    }
    let runs: Vec<Result<(f64, DressedAssignment)>> = xi_values
        .par_iter()
        .map(|&xi| extract_chi_numeric(r, xi, cutoffs, overlap_threshold))
        .collect();
    let mut points = Vec::with_capacity(runs.len());
    let mut min_overlap_sq: f64 = 1.0;
    for (&xi, run) in xi_values.iter().zip(runs) {
        let (chi, assignment) = run?;
        min_overlap_sq = min_overlap_sq.min(assignment.min_overlap_sq());
        points.push((xi, chi));
    }
    let (slope, curvature, residual) = fit_linear_quadratic(&points)?;
    Ok(Extrapolation {
        slope,
        curvature,
        residual,
        points,
        min_overlap_sq,
    })
}

pub fn run(config: &OracleConfig) -> Result<Extrapolation> {
    config.validate()?;
    extrapolate_chi(config.r, config.cutoffs, &config.xi_values, config.overlap_threshold)
}
