//! Three-qudit states built from GHZ and W copies.
//!
//! `|Ψ_d⟩` is the product of `N/2` three-qubit GHZ copies and `N/2` W copies
//! with `d = 2N` (`N` even, so `d` is a multiple of 4). Qubit `k` of every
//! copy belongs to party `k`, so each party holds `N` qubits. Note that the
//! label `d` follows the `d = 2N` bookkeeping even though each party's
//! Hilbert space has dimension `2^N`.
//!
//! Composite-party tangles are obtained per copy, by brute force on the
//! copy's density matrices, and summed with exact rational arithmetic.
//!
//! Tangle conventions: the pairwise tangle is the squared Wootters
//! concurrence; the one-vs-rest tangle of a qubit in a pure state is
//! `4 det ρ_qubit`; the three-tangle is the residual
//! `τ_{A|(BC)} − τ_{A|B} − τ_{A|C}`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Largest `d` for which `|Ψ_d⟩` is materialized as a dense vector.
pub const MATERIALIZE_CAP: usize = 8;
/// Per-copy brute-force values must sit this close to a small rational.
pub const RATIONAL_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized pure state of a register with the given subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureStateVector {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidState(
                "subsystem dimensions must be positive".into(),
            ));
        }
        let total: usize = dims.iter().product();
        if total != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm is {norm}")));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self ⊗ other`, with `other`'s subsystems appended after `self`'s.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for x in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|y| x * y));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amplitudes }
    }
}

fn qubits_state(n: usize, entries: &[(usize, f64)]) -> PureStateVector {
    let mut amplitudes = vec![ZERO; 1 << n];
    for &(idx, amp) in entries {
        amplitudes[idx] = Complex64::new(amp, 0.0);
    }
    PureStateVector {
        dims: vec![2; n],
        amplitudes,
    }
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn ghz3() -> PureStateVector {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    qubits_state(3, &[(0, a), (7, a)])
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w3() -> PureStateVector {
    let a = 1.0 / 3.0_f64.sqrt();
    qubits_state(3, &[(1, a), (2, a), (4, a)])
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols || rows == 0 {
            return Err(Error::BadShape { rows, cols });
        }
        let herm = (&data - data.adjoint())
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = data.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}")));
        }
        let rho = Self { data };
        let min = rho.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.data)
    }

    pub fn determinant(&self) -> f64 {
        self.data.determinant().re
    }
}

fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::SpectralFailure("Hermitian eigen-solve did not converge".into()))
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = hermitian_eigen(m)?.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Positive square root of a PSD Hermitian matrix (negative rounding noise
/// in the spectrum is clipped to zero).
fn psd_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_eigen(m)?;
    let roots = eig
        .eigenvalues
        .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        out[k] = out[k + 1] * dims[k + 1];
    }
    out
}

/// Partial trace keeping the subsystems in `keep` (in the listed order).
pub fn reduced_density(psi: &PureStateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = psi.dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidPartition("empty subsystem subset".into()));
    }
    for (k, &q) in keep.iter().enumerate() {
        if q >= n {
            return Err(Error::ModeOutOfRange {
                index: q,
                n_modes: n,
            });
        }
        if keep[..k].contains(&q) {
            return Err(Error::InvalidPartition(format!(
                "subsystem {q} listed twice"
            )));
        }
    }
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dim_keep: usize = keep.iter().map(|&q| psi.dims[q]).product();
    let dim_rest: usize = rest.iter().map(|&q| psi.dims[q]).product();
    let stride = strides(&psi.dims);
    let keep_dims: Vec<usize> = keep.iter().map(|&q| psi.dims[q]).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&q| psi.dims[q]).collect();
    let keep_strides = strides(&keep_dims);
    let rest_strides = strides(&rest_dims);

    // amplitudes rearranged as a dim_keep x dim_rest matrix M; rho = M M†
    let mut m = DMatrix::from_element(dim_keep, dim_rest, ZERO);
    for (idx, amp) in psi.amplitudes.iter().enumerate() {
        if *amp == ZERO {
            continue;
        }
        let digit = |q: usize| (idx / stride[q]) % psi.dims[q];
        let row: usize = keep
            .iter()
            .zip(&keep_strides)
            .map(|(&q, s)| digit(q) * s)
            .sum();
        let col: usize = rest
            .iter()
            .zip(&rest_strides)
            .map(|(&q, s)| digit(q) * s)
            .sum();
        m[(row, col)] = *amp;
    }
    let rho = &m * m.adjoint();
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(rho)
}

/// Wootters concurrence of a two-qubit state, in `[0, 1]`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    // σ_y ⊗ σ_y is real: anti-diagonal (−1, 1, 1, −1)
    let mut flip = DMatrix::from_element(4, 4, ZERO);
    for (k, sign) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        flip[(k, 3 - k)] = Complex64::new(sign, 0.0);
    }
    let tilde = &flip * rho.data.map(|z| z.conj()) * &flip;
    let root = psd_sqrt(&rho.data)?;
    let product = &root * tilde * &root;
    let product = (&product + product.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = hermitian_eigenvalues(&product)?
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho
        .eigenvalues()?
        .into_iter()
        .filter(|&l| l > 1e-15)
        .map(|l| -l * l.log2())
        .sum())
}

/// Partial transpose of subsystem `target` for a register with `dims`.
pub fn partial_transpose(
    rho: &DensityMatrix,
    dims: &[usize],
    target: usize,
) -> Result<DMatrix<Complex64>> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: rho.dim(),
        });
    }
    if target >= dims.len() {
        return Err(Error::ModeOutOfRange {
            index: target,
            n_modes: dims.len(),
        });
    }
    let stride = strides(dims)[target];
    let dt = dims[target];
    Ok(DMatrix::from_fn(total, total, |r, c| {
        let (dr, dc) = ((r / stride) % dt, (c / stride) % dt);
        // swap the target digits of row and column
        let r2 = r - dr * stride + dc * stride;
        let c2 = c - dc * stride + dr * stride;
        rho.data[(r2, c2)]
    }))
}

/// Negativity `Σ |λ_-|` of the partial transpose, and the base-2
/// logarithmic negativity `log₂ ‖ρ^Γ‖₁`.
pub fn negativity(rho: &DensityMatrix, dims: &[usize], target: usize) -> Result<(f64, f64)> {
    let pt = partial_transpose(rho, dims, target)?;
    let ev = hermitian_eigenvalues(&pt)?;
    let neg: f64 = ev.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    Ok((neg, (1.0 + 2.0 * neg).log2()))
}

/// Brute-force tangles of one three-qubit copy, seen from qubit 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopyTangles {
    /// `4 det ρ_A`.
    pub one_vs_rest: f64,
    /// `C(ρ_AB)²`.
    pub pairwise_ab: f64,
    /// `C(ρ_AC)²`.
    pub pairwise_ac: f64,
    /// `τ_{A|(BC)} − τ_{A|B} − τ_{A|C}`.
    pub three_tangle: f64,
    /// Von Neumann entropy of qubit A, in bits.
    pub entropy_a: f64,
}

pub fn copy_tangles(psi: &PureStateVector) -> Result<CopyTangles> {
    if psi.dims != [2, 2, 2] {
        return Err(Error::InvalidState("expected a three-qubit state".into()));
    }
    let rho_a = reduced_density(psi, &[0])?;
    let one_vs_rest = 4.0 * rho_a.determinant();
    let pairwise_ab = concurrence(&reduced_density(psi, &[0, 1])?)?.powi(2);
    let pairwise_ac = concurrence(&reduced_density(psi, &[0, 2])?)?.powi(2);
    Ok(CopyTangles {
        one_vs_rest,
        pairwise_ab,
        pairwise_ac,
        three_tangle: one_vs_rest - pairwise_ab - pairwise_ac,
        entropy_a: vn_entropy(&rho_a)?,
    })
}

/// Smallest-denominator rational within [`RATIONAL_TOL`] of `x`, searching
/// denominators up to `max_den`.
pub fn snap_rational(x: f64, max_den: i64) -> Option<Ratio<i64>> {
    (1..=max_den).find_map(|den| {
        let num = (x * den as f64).round();
        ((x - num / den as f64).abs() < RATIONAL_TOL).then(|| Ratio::new(num as i64, den))
    })
}

fn exact(x: f64) -> Result<Ratio<i64>> {
    snap_rational(x, 1000)
        .ok_or_else(|| Error::InvalidState(format!("per-copy value {x} is not a small rational")))
}

pub fn check_qudit_dimension(d: usize) -> Result<()> {
    if d < 4 || !d.is_multiple_of(4) {
        return Err(Error::InvalidQuditDimension(d));
    }
    Ok(())
}

/// Materialized `|Ψ_d⟩` together with its party layout.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    pub d: usize,
    /// Qubits ordered copy-major: GHZ copies first, then W copies.
    pub vector: PureStateVector,
    /// Party (0 = A, 1 = B, 2 = C) owning each qubit.
    pub party_of_qubit: Vec<usize>,
}

impl QuditState {
    pub fn party_qubits(&self, party: usize) -> Vec<usize> {
        (0..self.party_of_qubit.len())
            .filter(|&q| self.party_of_qubit[q] == party)
            .collect()
    }
}

/// Dense `|Ψ_d⟩` for `d ≤` [`MATERIALIZE_CAP`] (`8^{d/2}` amplitudes).
pub fn build_psi(d: usize) -> Result<QuditState> {
    check_qudit_dimension(d)?;
    let copies = d / 4;
    if d > MATERIALIZE_CAP {
        return Err(Error::TooLarge {
            d,
            amplitudes: 8usize.saturating_pow((d / 2) as u32),
            cap: MATERIALIZE_CAP,
        });
    }
    let (ghz, w) = (ghz3(), w3());
    let mut vector = ghz.clone();
    for _ in 1..copies {
        vector = vector.tensor(&ghz);
    }
    for _ in 0..copies {
        vector = vector.tensor(&w);
    }
    let party_of_qubit = (0..6 * copies).map(|q| q % 3).collect();
    Ok(QuditState {
        d,
        vector,
        party_of_qubit,
    })
}

/// Exact composite tangles, composed from per-copy rationals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactTangles {
    pub three_tangle: Ratio<i64>,
    pub pairwise: Ratio<i64>,
    pub one_vs_rest: Ratio<i64>,
    /// `one_vs_rest − 2·pairwise − three_tangle`.
    pub monogamy_gap: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuditTangleReport {
    pub d: usize,
    pub three_tangle: f64,
    pub pairwise_tangle: f64,
    pub one_vs_rest_tangle: f64,
    pub monogamy_gap: f64,
    pub nongaussianity: f64,
    pub squashed_one_vs_rest: f64,
    pub squashed_tripartite_lower: f64,
    pub exact: ExactTangles,
    pub ghz_copy: CopyTangles,
    pub w_copy: CopyTangles,
}

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Tangles of `|Ψ_d⟩`: `d/4` copies of each kind, each party holding one
/// qubit per copy. Party-pair tangles add over copies because the copies
/// are in a product state.
pub fn tangle_report(d: usize) -> Result<QuditTangleReport> {
    check_qudit_dimension(d)?;
    let copies = Ratio::from_integer((d / 4) as i64);
    let ghz = copy_tangles(&ghz3())?;
    let w = copy_tangles(&w3())?;

    let three_tangle = copies * (exact(ghz.three_tangle)? + exact(w.three_tangle)?);
    let pairwise = copies * (exact(ghz.pairwise_ab)? + exact(w.pairwise_ab)?);
    let one_vs_rest = copies * (exact(ghz.one_vs_rest)? + exact(w.one_vs_rest)?);
    let monogamy_gap = one_vs_rest - pairwise * 2 - three_tangle;
    let squashed = squashed_bounds(d)?;

    Ok(QuditTangleReport {
        d,
        three_tangle: to_f64(three_tangle),
        pairwise_tangle: to_f64(pairwise),
        one_vs_rest_tangle: to_f64(one_vs_rest),
        monogamy_gap: to_f64(monogamy_gap),
        nongaussianity: nongaussianity(d)?,
        squashed_one_vs_rest: squashed.one_vs_rest,
        squashed_tripartite_lower: squashed.tripartite_lower,
        exact: ExactTangles {
            three_tangle,
            pairwise,
            one_vs_rest,
            monogamy_gap,
        },
        ghz_copy: ghz,
        w_copy: w,
    })
}

/// Hilbert-Schmidt non-Gaussianity of `|Ψ_d⟩`:
/// `1/2 + 2^{−3d/4 − 1}·3^{−d/4} − 2^{d/2}·3^{−3d/2}·7^{d/4}`.
pub fn nongaussianity(d: usize) -> Result<f64> {
    check_qudit_dimension(d)?;
    let d = d as f64;
    let (ln2, ln3, ln7) = (2.0_f64.ln(), 3.0_f64.ln(), 7.0_f64.ln());
    let second = ((-0.75 * d - 1.0) * ln2 - 0.25 * d * ln3).exp();
    let third = (0.5 * d * ln2 - 1.5 * d * ln3 + 0.25 * d * ln7).exp();
    Ok(0.5 + second - third)
}

/// Squashed-entanglement bounds for `|Ψ_d⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquashedBounds {
    /// `(d/4)·(S_GHZ + S_W)` with one-qubit entropies in bits.
    pub one_vs_rest: f64,
    /// `d/4`, one unit per GHZ copy.
    pub tripartite_lower: f64,
    /// Negativity of the two-qubit W reduction.
    pub w_pair_negativity: f64,
    /// Base-2 log-negativity of the same reduction; positive, so the
    /// pairwise squashed entanglement `ω` is positive.
    pub w_pair_log_negativity: f64,
    /// The pairwise value is known only symbolically.
    pub pairwise_form: &'static str,
}

pub fn squashed_bounds(d: usize) -> Result<SquashedBounds> {
    check_qudit_dimension(d)?;
    let copies = (d / 4) as f64;
    let s_ghz = vn_entropy(&reduced_density(&ghz3(), &[0])?)?;
    let s_w = vn_entropy(&reduced_density(&w3(), &[0])?)?;
    let (neg, log_neg) = negativity(&reduced_density(&w3(), &[0, 1])?, &[2, 2], 1)?;
    Ok(SquashedBounds {
        one_vs_rest: copies * (s_ghz + s_w),
        tripartite_lower: copies,
        w_pair_negativity: neg,
        w_pair_log_negativity: log_neg,
        pairwise_form: "omega*d/4",
    })
}
