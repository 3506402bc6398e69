//! Rayleigh–Schrödinger perturbation theory over the ladder algebra.
//!
//! The energy shift of a bare state |n⟩ is taken as ⟨n|V4|n⟩ (first order in
//! the quartic term) plus Σ_m |⟨m|V3|n⟩|² / (E⁰_n − E⁰_m) (second order in
//! the cubic term); both are linear in ξ. Intermediates are found by applying
//! V3 to |n⟩, so the sum is exact and finite. Every term of both operators is
//! kept, including the stretch-mode self-anharmonicity; the cross-Kerr
//! coefficient is then isolated with the second difference
//!
//! ```text
//! χ = ε(1,0,1) − ε(1,0,0) − ε(0,0,1) + ε(0,0,0)
//! ```
//!
//! in which every single-mode term cancels identically.

use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{FockState, Mode, OperatorSum};
use crate::hamiltonian::{build_paper_operators, PaperOperators};
use crate::trap::DimensionlessParams;

/// Energy denominators smaller than this (ħω_z units) are treated as degenerate.
pub const DENOMINATOR_GUARD: f64 = 1e-8;

/// E⁰ = ω_r(n_x + n_y + 1) + ω_s(n_s + ½) in units of ħω_z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnperturbedEnergy {
    pub omega_r: f64,
    pub omega_s: f64,
}

impl UnperturbedEnergy {
    pub fn new(params: &DimensionlessParams) -> Self {
        Self {
            omega_r: params.omega_r(),
            omega_s: params.omega_s(),
        }
    }

    pub fn energy(&self, s: &FockState) -> f64 {
        self.omega_r * f64::from(s.nx + s.ny + 1) + self.omega_s * (f64::from(s.ns) + 0.5)
    }

    /// E⁰_n − E⁰_m evaluated from the occupation differences, so that it is
    /// bit-identical to the same combination of ω_r and ω_s written by hand.
    pub fn difference(&self, n: &FockState, m: &FockState) -> f64 {
        let d_rock = i64::from(n.nx) + i64::from(n.ny) - i64::from(m.nx) - i64::from(m.ny);
        let d_s = i64::from(n.ns) - i64::from(m.ns);
        self.difference_from_deltas(d_rock, d_s)
    }

    pub fn difference_from_deltas(&self, d_rock: i64, d_s: i64) -> f64 {
        self.omega_r * d_rock as f64 + self.omega_s * d_s as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contribution {
    pub intermediate: FockState,
    /// ⟨m|V|n⟩
    pub element: f64,
    /// E⁰_n − E⁰_m
    pub denominator: f64,
}

impl Contribution {
    pub fn value(&self) -> f64 {
        self.element * self.element / self.denominator
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtShift {
    pub state: FockState,
    pub first_order: f64,
    pub second_order: f64,
    pub contributions: Vec<Contribution>,
}

impl PtShift {
    pub fn total(&self) -> f64 {
        self.first_order + self.second_order
    }
}

/// ⟨state|V|state⟩
pub fn first_order_shift(v: &OperatorSum, state: FockState) -> f64 {
    v.apply(state).amplitude(&state)
}

pub fn second_order_shift(v: &OperatorSum, state: FockState, e0: &UnperturbedEnergy) -> Result<PtShift> {
    let image = v.apply(state);
    let mut contributions = Vec::with_capacity(image.len());
    for (&m, &element) in image.iter() {
        if m == state {
            continue;
        }
        let denominator = e0.difference(&state, &m);
        if denominator.abs() < DENOMINATOR_GUARD {
            return Err(Error::DegeneratePt {
                state,
                intermediate: m,
                denominator,
            });
        }
        contributions.push(Contribution {
            intermediate: m,
            element,
            denominator,
        });
    }
    let second_order = contributions.iter().map(Contribution::value).sum();
    Ok(PtShift {
        state,
        first_order: image.amplitude(&state),
        second_order,
        contributions,
    })
}

/// ε(n) = ⟨n|V4|n⟩ + second-order shift from V3, in units of ħω_z.
pub fn energy_shift(ops: &PaperOperators, state: FockState) -> Result<f64> {
    let e0 = UnperturbedEnergy::new(&ops.params);
    let cubic = second_order_shift(&ops.v3, state, &e0)?;
    Ok(first_order_shift(&ops.v4, state) + cubic.second_order)
}

/// The four bare states of the cross-Kerr stencil, with one rocking phonon
/// placed in `rocking` (X or Y): (vacuum, rocking, stretch, both).
pub fn kerr_stencil(rocking: Mode) -> [FockState; 4] {
    let r = FockState::VACUUM.with(rocking, 1);
    [FockState::VACUUM, r, FockState::new(0, 0, 1), r.with(Mode::S, 1)]
}

/// f(both) − f(rocking) − f(stretch) + f(vacuum)
pub fn second_difference(values: [f64; 4]) -> f64 {
    let [vac, rock, stretch, both] = values;
    ((both - rock) - stretch) + vac
}

/// Checks that no perturbation term links |1,0,n_s⟩ with |0,1,n_s'⟩; the two
/// rocking polarizations are exactly degenerate, so such a coupling would
/// invalidate the nondegenerate expansion.
fn check_rocking_decoupled(ops: &PaperOperators) -> Result<()> {
    let e0 = UnperturbedEnergy::new(&ops.params);
    for ns in 0..=1 {
        let state = FockState::new(1, 0, ns);
        for v in [&ops.v3, &ops.v4] {
            if let Some((&m, _)) = v.apply(state).iter().find(|(m, _)| m.nx == 0 && m.ny == 1) {
                return Err(Error::DegeneratePt {
                    state,
                    intermediate: m,
                    denominator: e0.difference(&state, &m),
                });
            }
        }
    }
    Ok(())
}

/// χ/ω_z from perturbation theory for trap ratio `r` and anharmonicity `xi`.
pub fn kerr_coefficient_pt(r: f64, xi: f64) -> Result<f64> {
    let ops = build_paper_operators(r, xi)?;
    kerr_coefficient_from_operators(&ops, Mode::X)
}

pub fn kerr_coefficient_from_operators(ops: &PaperOperators, rocking: Mode) -> Result<f64> {
    check_rocking_decoupled(ops)?;
    let stencil = kerr_stencil(rocking);
    let mut eps = [0.0; 4];
    for (e, s) in eps.iter_mut().zip(stencil) {
        *e = energy_shift(ops, s)?;
    }
    Ok(second_difference(eps))
}

/// One line of the printed second-order table for V3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Table1Row {
    /// 1-based position in the printed table.
    pub number: usize,
    /// Change of (n_x, n_y, n_s) from the initial to the intermediate state.
    pub shift: (i64, i64, i64),
    pub label: &'static str,
    pub printed_formula: &'static str,
    /// The printed element disagrees with the ladder algebra.
    pub printed_is_typo: bool,
}

pub const TABLE1_ROWS: [Table1Row; 10] = [
    Table1Row { number: 1, shift: (0, 0, 1), label: "|nx,ny,ns+1>", printed_formula: "2z(ns+1)^1/2[(nx+ny+1)-(wr/ws)(ns+1)]", printed_is_typo: false },
    Table1Row { number: 2, shift: (0, 0, -1), label: "|nx,ny,ns-1>", printed_formula: "2z ns^1/2[(nx+ny+1)-(wr/ws)ns]", printed_is_typo: false },
    Table1Row { number: 3, shift: (2, 0, 1), label: "|nx+2,ny,ns+1>", printed_formula: "z[(ns+1)(nx+1)(nx+2)]^1/2", printed_is_typo: false },
    Table1Row { number: 4, shift: (2, 0, -1), label: "|nx+2,ny,ns-1>", printed_formula: "z[ns(nx+1)(nx+2)]^1/2", printed_is_typo: false },
    Table1Row { number: 5, shift: (-2, 0, 1), label: "|nx-2,ny,ns+1>", printed_formula: "z[(ns+1)nx(nx+2)]^1/2", printed_is_typo: true },
    Table1Row { number: 6, shift: (-2, 0, -1), label: "|nx-2,ny,ns-1>", printed_formula: "z[ns nx(nx-1)]^1/2", printed_is_typo: false },
    Table1Row { number: 7, shift: (0, 2, 1), label: "|nx,ny+2,ns+1>", printed_formula: "z[(ns+1)(ny+1)(ny+2)]^1/2", printed_is_typo: false },
    Table1Row { number: 8, shift: (0, 2, -1), label: "|nx,ny+2,ns-1>", printed_formula: "z[ns(ny+1)(ny+2)]^1/2", printed_is_typo: false },
    Table1Row { number: 9, shift: (0, -2, 1), label: "|nx,ny-2,ns+1>", printed_formula: "z[(ns+1)ny(ny-1)]^1/2", printed_is_typo: false },
    Table1Row { number: 10, shift: (0, -2, -1), label: "|nx,ny-2,ns-1>", printed_formula: "z[ns ny(nx-1)]^1/2", printed_is_typo: true },
];

impl Table1Row {
    pub fn intermediate(&self, n: FockState) -> Option<FockState> {
        let shifted = |v: u32, d: i64| u32::try_from(i64::from(v) + d).ok();
        Some(FockState::new(
            shifted(n.nx, self.shift.0)?,
            shifted(n.ny, self.shift.1)?,
            shifted(n.ns, self.shift.2)?,
        ))
    }

    /// The element as printed, with ζ and ω_r/ω_s supplied.
    pub fn printed_element(&self, n: FockState, zeta: f64, ratio: f64) -> f64 {
        let (nx, ny, ns) = (f64::from(n.nx), f64::from(n.ny), f64::from(n.ns));
        let rock = nx + ny + 1.0;
        match self.number {
            1 => 2.0 * zeta * (ns + 1.0).sqrt() * (rock - ratio * (ns + 1.0)),
            2 => 2.0 * zeta * ns.sqrt() * (rock - ratio * ns),
            3 => zeta * ((ns + 1.0) * (nx + 1.0) * (nx + 2.0)).sqrt(),
            4 => zeta * (ns * (nx + 1.0) * (nx + 2.0)).sqrt(),
            5 => zeta * ((ns + 1.0) * nx * (nx + 2.0)).sqrt(),
            6 => zeta * (ns * nx * (nx - 1.0)).max(0.0).sqrt(),
            7 => zeta * ((ns + 1.0) * (ny + 1.0) * (ny + 2.0)).sqrt(),
            8 => zeta * (ns * (ny + 1.0) * (ny + 2.0)).sqrt(),
            9 => zeta * ((ns + 1.0) * ny * (ny - 1.0)).max(0.0).sqrt(),
            10 => zeta * (ns * ny * (nx - 1.0)).max(0.0).sqrt(),
            _ => unreachable!("table has ten rows"),
        }
    }

    /// The element with the ladder-algebra factors n(n−1) in rows 5 and 10.
    pub fn corrected_element(&self, n: FockState, zeta: f64, ratio: f64) -> f64 {
        let (nx, ny, ns) = (f64::from(n.nx), f64::from(n.ny), f64::from(n.ns));
        match self.number {
            5 => zeta * ((ns + 1.0) * nx * (nx - 1.0)).max(0.0).sqrt(),
            10 => zeta * (ns * ny * (ny - 1.0)).max(0.0).sqrt(),
            _ => self.printed_element(n, zeta, ratio),
        }
    }

    /// The printed E⁰_n − E⁰_m column.
    pub fn printed_denominator(&self, wr: f64, ws: f64) -> f64 {
        match self.number {
            1 => -ws,
            2 => ws,
            3 | 7 => -ws - 2.0 * wr,
            4 | 8 => ws - 2.0 * wr,
            5 | 9 => -ws + 2.0 * wr,
            6 | 10 => ws + 2.0 * wr,
            _ => unreachable!("table has ten rows"),
        }
    }

    fn matches(&self, n: &FockState, m: &FockState) -> bool {
        self.intermediate(*n).as_ref() == Some(m)
    }
}

/// A nonzero V3 matrix element out of |n⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Table1Entry {
    pub intermediate: FockState,
    pub element: f64,
    pub denominator: f64,
    /// Printed row this channel corresponds to; `None` for the c³ and c†³
    /// channels that the printed table leaves out.
    pub row: Option<usize>,
}

/// Every nonzero V3 channel from |n_x, n_y, n_s⟩, computed by the engine.
pub fn table1_elements(nx: u32, ny: u32, ns: u32, r: f64, xi: f64) -> Result<Vec<Table1Entry>> {
    let ops = build_paper_operators(r, xi)?;
    let e0 = UnperturbedEnergy::new(&ops.params);
    let n = FockState::new(nx, ny, ns);
    let shift = second_order_shift(&ops.v3, n, &e0)?;
    Ok(shift
        .contributions
        .iter()
        .map(|c| Table1Entry {
            intermediate: c.intermediate,
            element: c.element,
            denominator: c.denominator,
            row: TABLE1_ROWS
                .iter()
                .find(|row| row.matches(&n, &c.intermediate))
                .map(|row| row.number),
        })
        .collect())
}

/// Engine-versus-printed comparison for one row of the table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Table1Comparison {
    pub row: Table1Row,
    pub intermediate: Option<FockState>,
    /// Zero when the channel is closed (intermediate would be negative).
    pub engine_element: f64,
    pub printed_element: f64,
    pub corrected_element: f64,
    pub engine_denominator: f64,
    pub printed_denominator: f64,
}

impl Table1Comparison {
    /// |engine − printed| relative to the larger magnitude; 0 when both vanish.
    pub fn printed_mismatch(&self) -> f64 {
        relative_gap(self.engine_element, self.printed_element)
    }

    pub fn corrected_mismatch(&self) -> f64 {
        relative_gap(self.engine_element, self.corrected_element)
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn compare_table1(n: FockState, r: f64, xi: f64) -> Result<Vec<Table1Comparison>> {
    let params = DimensionlessParams::new(r, xi)?;
    let e0 = UnperturbedEnergy::new(&params);
    let zeta = params.zeta();
    let ratio = params.omega_r() / params.omega_s();
    let entries = table1_elements(n.nx, n.ny, n.ns, r, xi)?;
    Ok(TABLE1_ROWS
        .iter()
        .map(|row| {
            let intermediate = row.intermediate(n);
            let engine_element = entries
                .iter()
                .find(|e| e.row == Some(row.number))
                .map_or(0.0, |e| e.element);
            Table1Comparison {
                row: *row,
                intermediate,
                engine_element,
                printed_element: row.printed_element(n, zeta, ratio),
                corrected_element: row.corrected_element(n, zeta, ratio),
                engine_denominator: e0.difference_from_deltas(
                    -(row.shift.0 + row.shift.1),
                    -row.shift.2,
                ),
                printed_denominator: row.printed_denominator(e0.omega_r, e0.omega_s),
            }
        })
        .collect())
}

impl fmt::Display for Table1Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>2} {}", self.number, self.label)
    }
}
