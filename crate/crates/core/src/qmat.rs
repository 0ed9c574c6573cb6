//! Dense complex linear algebra for two-qubit density matrices.
//!
//! Basis order is fixed as `|00>, |01>, |10>, |11>`: index `2a + b` where `a`
//! is qubit A (the left tensor factor) and `b` is qubit B. An X state keeps
//! only the main diagonal and the anti-diagonal entries (0,3) and (1,2).

// Index loops read closest to the matrix formulas here.
#![allow(clippy::needless_range_loop)]

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;
pub type Mat2 = [[Complex; 2]; 2];
pub type Mat4 = [[Complex; 4]; 4];

/// Slack allowed on state invariants (normalisation, Hermiticity, positivity
/// of the X blocks).
pub const STATE_TOL: f64 = 1e-12;

/// Eigenvalues in `[-EIGEN_NEG_TOL, 0)` are rounding noise and are clamped to
/// zero before taking logarithms; anything more negative is an error.
pub const EIGEN_NEG_TOL: f64 = 1e-10;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

pub fn zeros2() -> Mat2 {
    [[ZERO; 2]; 2]
}

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn zeros4() -> Mat4 {
    [[ZERO; 4]; 4]
}

pub fn identity4() -> Mat4 {
    let mut m = zeros4();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = zeros2();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn adjoint2(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = zeros4();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint4(a: &Mat4) -> Mat4 {
    let mut out = zeros4();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// `a ⊗ b` with `a` acting on qubit A.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = zeros4();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn max_abs_diff2(a: &Mat2, b: &Mat2) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff4(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hermiticity_residual(m: &Mat4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in i..4 {
            worst = worst.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    worst
}

fn ensure_finite(m: &Mat4) -> Result<()> {
    if m.iter()
        .flatten()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::InvalidState("non-finite matrix entry".into()))
    }
}

/// A full 4×4 two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseState {
    m: Mat4,
}

impl DenseState {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues no
    /// lower than `-EIGEN_NEG_TOL`).
    pub fn new(m: Mat4) -> Result<Self> {
        ensure_finite(&m)?;
        let herm = hermiticity_residual(&m);
        if herm > STATE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr: f64 = (0..4).map(|i| m[i][i].re).sum();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let eig = hermitian_eigenvalues(&m)?;
        if eig[3] < -EIGEN_NEG_TOL {
            return Err(Error::NegativeEigenvalue(eig[3]));
        }
        Ok(Self { m })
    }

    /// Wraps the output of a trace-checked CPTP map without re-running the
    /// eigen decomposition.
    pub(crate) fn from_channel_output(m: Mat4) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.m[row][col]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.m[i][i].re).sum()
    }
}

/// A two-qubit X state: four populations and the two anti-diagonal
/// coherences `rho_14` (`|00><11|`) and `rho_23` (`|01><10|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pop: [f64; 4],
    c14: Complex,
    c23: Complex,
}

impl XState {
    /// Checks the physicality conditions: non-negative populations summing to
    /// one and `|c14|^2 <= p11 p44`, `|c23|^2 <= p22 p33`, each within
    /// `STATE_TOL`. The error names the condition that failed.
    pub fn new(populations: [f64; 4], c14: Complex, c23: Complex) -> Result<Self> {
        let finite = populations.iter().all(|p| p.is_finite())
            && [c14.re, c14.im, c23.re, c23.im]
                .iter()
                .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidState("non-finite parameter".into()));
        }
        for (i, &p) in populations.iter().enumerate() {
            if p < -STATE_TOL {
                return Err(Error::InvalidState(format!(
                    "population p{0}{0} = {p} is negative",
                    i + 1
                )));
            }
        }
        let sum: f64 = populations.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "populations sum to {sum}, not 1"
            )));
        }
        let [p11, p22, p33, p44] = populations;
        if c14.norm_sqr() > p11 * p44 + STATE_TOL {
            return Err(Error::InvalidState(format!(
                "|rho14|^2 = {} exceeds rho11*rho44 = {}",
                c14.norm_sqr(),
                p11 * p44
            )));
        }
        if c23.norm_sqr() > p22 * p33 + STATE_TOL {
            return Err(Error::InvalidState(format!(
                "|rho23|^2 = {} exceeds rho22*rho33 = {}",
                c23.norm_sqr(),
                p22 * p33
            )));
        }
        Ok(Self {
            pop: populations,
            c14,
            c23,
        })
    }

    /// Real anti-diagonal convenience constructor.
    pub fn real(populations: [f64; 4], c14: f64, c23: f64) -> Result<Self> {
        Self::new(populations, re(c14), re(c23))
    }

    pub fn populations(&self) -> [f64; 4] {
        self.pop
    }

    pub fn p11(&self) -> f64 {
        self.pop[0]
    }

    pub fn p22(&self) -> f64 {
        self.pop[1]
    }

    pub fn p33(&self) -> f64 {
        self.pop[2]
    }

    pub fn p44(&self) -> f64 {
        self.pop[3]
    }

    pub fn c14(&self) -> Complex {
        self.c14
    }

    pub fn c23(&self) -> Complex {
        self.c23
    }

    pub fn to_dense(&self) -> DenseState {
        x_to_dense(self)
    }

    pub fn spectrum(&self) -> Spectrum {
        eigvals_x(self)
    }

    /// Largest elementwise deviation between the eight real parameters.
    pub fn max_abs_diff(&self, other: &XState) -> f64 {
        let pops = self
            .pop
            .iter()
            .zip(other.pop.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pops.max((self.c14 - other.c14).norm())
            .max((self.c23 - other.c23).norm())
    }
}

/// Eigenvalues of a density matrix, sorted in decreasing order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum([f64; 4]);

impl Spectrum {
    /// Rejects unsorted input, entries outside `[-1e-10, 1 + 1e-10]`, and sums
    /// further than `1e-10` from one.
    pub fn new(values: [f64; 4]) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::UnsortedSpectrum);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite eigenvalue".into()));
        }
        if values[3] < -EIGEN_NEG_TOL {
            return Err(Error::NegativeEigenvalue(values[3]));
        }
        if values[0] > 1.0 + EIGEN_NEG_TOL {
            return Err(Error::InvalidState(format!(
                "eigenvalue {} exceeds 1",
                values[0]
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > EIGEN_NEG_TOL {
            return Err(Error::InvalidState(format!("eigenvalues sum to {sum}")));
        }
        Ok(Self(values))
    }

    pub fn from_unsorted(mut values: [f64; 4]) -> Result<Self> {
        sort_descending(&mut values);
        Self::new(values)
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }
}

fn sort_descending(v: &mut [f64]) {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn x_to_dense(x: &XState) -> DenseState {
    let mut m = zeros4();
    for i in 0..4 {
        m[i][i] = re(x.pop[i]);
    }
    m[0][3] = x.c14;
    m[3][0] = x.c14.conj();
    m[1][2] = x.c23;
    m[2][1] = x.c23.conj();
    DenseState { m }
}

fn is_x_position(row: usize, col: usize) -> bool {
    row == col || row + col == 3
}

/// Reads the X entries back out of a dense state. Fails with the first
/// off-pattern entry whose magnitude exceeds `tol`.
pub fn dense_to_x(m: &DenseState, tol: f64) -> Result<XState> {
    for row in 0..4 {
        for col in 0..4 {
            if is_x_position(row, col) {
                continue;
            }
            let magnitude = m.m[row][col].norm();
            if magnitude > tol {
                return Err(Error::Structure {
                    row,
                    col,
                    magnitude,
                });
            }
        }
    }
    let pop = [m.m[0][0].re, m.m[1][1].re, m.m[2][2].re, m.m[3][3].re];
    XState::new(pop, m.m[0][3], m.m[1][2])
}

/// Closed-form X-state eigenvalues: each 2×2 block
/// `[[a, c], [c*, d]]` contributes `((a + d) ± sqrt((a - d)^2 + 4|c|^2)) / 2`.
pub fn eigvals_x(x: &XState) -> Spectrum {
    let block = |a: f64, d: f64, c: Complex| {
        let mean = 0.5 * (a + d);
        let half = 0.5 * ((a - d).powi(2) + 4.0 * c.norm_sqr()).sqrt();
        [mean + half, mean - half]
    };
    let [l1, l2] = block(x.pop[0], x.pop[3], x.c14);
    let [l3, l4] = block(x.pop[1], x.pop[2], x.c23);
    let mut v = [l1, l2, l3, l4];
    sort_descending(&mut v);
    Spectrum(v)
}

/// Eigenvalues of a dense state via the Jacobi solver.
pub fn eigvals_dense(m: &DenseState) -> Result<Spectrum> {
    Spectrum::new(hermitian_eigenvalues(&m.m)?)
}

/// Cyclic Jacobi eigenvalue iteration for a 4×4 Hermitian matrix, returning
/// eigenvalues in decreasing order.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that zeroes it.
pub fn hermitian_eigenvalues(m: &Mat4) -> Result<[f64; 4]> {
    ensure_finite(m)?;
    let herm = hermiticity_residual(m);
    if herm > STATE_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let mut a = *m;
    for i in 0..4 {
        a[i][i] = re(a[i][i].re);
    }
    let frob: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
    let target = frob * 1e-34;

    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|p| ((p + 1)..4).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].norm_sqr())
            .sum();
        if off <= target {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;

                let mut rot = identity4();
                rot[p][p] = re(cs);
                rot[p][q] = re(sn);
                rot[q][p] = -phase.conj() * sn;
                rot[q][q] = phase.conj() * cs;

                a = mul4(&adjoint4(&rot), &mul4(&a, &rot));
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p] = re(a[p][p].re);
                a[q][q] = re(a[q][q].re);
            }
        }
    }
    let mut v = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    sort_descending(&mut v);
    Ok(v)
}

/// Shannon entropy in bits of a probability vector, `0 log 0 = 0`.
/// Entries in `[-EIGEN_NEG_TOL, 0)` count as zero.
pub fn entropy_bits(probs: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &p in probs {
        if p < -EIGEN_NEG_TOL {
            return Err(Error::NegativeEigenvalue(p));
        }
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    Ok(h.max(0.0))
}

pub fn von_neumann_entropy(s: &Spectrum) -> f64 {
    // Spectrum construction already bounds the entries below.
    entropy_bits(&s.0).unwrap_or(0.0)
}

pub fn partial_trace(m: &DenseState, keep: Subsystem) -> Mat2 {
    let mut out = zeros2();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = match keep {
                Subsystem::A => (0..2).map(|k| m.m[2 * i + k][2 * j + k]).sum(),
                Subsystem::B => (0..2).map(|k| m.m[2 * k + i][2 * k + j]).sum(),
            };
        }
    }
    out
}
