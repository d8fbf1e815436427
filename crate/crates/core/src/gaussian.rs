//! Covariance-matrix representation of Gaussian states.
//!
//! Conventions used throughout the crate:
//!
//! * Quadratures are ordered `(q_1, …, q_N, p_1, …, p_N)` ("qqpp"), and the
//!   symplectic form is `Ω = [[0, I], [−I, 0]]`.
//! * Quadratures are `q = a + a†`, `p = −i(a − a†)`, so the vacuum has
//!   covariance matrix equal to the identity. Conventions normalised to
//!   `ħ/2` differ from this one by a factor of 2.
//! * Mode indices in this module are 0-based.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum elementwise asymmetry accepted for a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Slack on the eigenvalues of `σ + iΩ` (and on symplectic eigenvalues).
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Maximum elementwise deviation of `SΩSᵀ` from `Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The symplectic form `[[0, I], [−I, 0]]` for `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(k, n_modes + k)] = 1.0;
        omega[(n_modes + k, k)] = -1.0;
    }
    omega
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

fn check_mode(index: usize, n_modes: usize) -> Result<()> {
    if index >= n_modes {
        return Err(Error::ModeOutOfRange { index, n_modes });
    }
    Ok(())
}

/// Second-moment matrix of an `n_modes`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps `data` after checking shape, finiteness, symmetry and physicality.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let cm = Self::from_symmetric(data)?;
        let margin = cm.physicality_margin()?;
        if margin < -PHYSICALITY_TOL {
            return Err(Error::Unphysical(margin));
        }
        Ok(cm)
    }

    /// Like [`CovarianceMatrix::new`] without the physicality requirement.
    /// Partially transposed matrices live here.
    pub fn from_symmetric(data: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::BadShape { rows, cols });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let asym = max_abs(&(&data - data.transpose()));
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self {
            n_modes: rows / 2,
            data,
        })
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            n_modes,
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }

    /// Smallest eigenvalue of the Hermitian matrix `σ + iΩ`. Nonnegative
    /// (up to rounding) for every physical state.
    pub fn physicality_margin(&self) -> Result<f64> {
        let dim = 2 * self.n_modes;
        let omega = symplectic_form(self.n_modes);
        let herm = DMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(self.data[(r, c)], omega[(r, c)])
        });
        let eig = SymmetricEigen::try_new(herm, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::SpectralFailure("sigma + i*Omega did not converge".into()))?;
        Ok(eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    pub fn is_physical(&self) -> bool {
        self.physicality_margin()
            .map(|m| m >= -PHYSICALITY_TOL)
            .unwrap_or(false)
    }

    /// Keeps the listed modes, in the listed order, and traces out the rest.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidPartition("empty mode subset".into()));
        }
        for (k, &m) in modes.iter().enumerate() {
            check_mode(m, self.n_modes)?;
            if modes[..k].contains(&m) {
                return Err(Error::InvalidPartition(format!("mode {m} listed twice")));
            }
        }
        let n = self.n_modes;
        let kept = modes.len();
        let rows: Vec<usize> = modes
            .iter()
            .copied()
            .chain(modes.iter().map(|&m| n + m))
            .collect();
        let data = DMatrix::from_fn(2 * kept, 2 * kept, |r, c| self.data[(rows[r], rows[c])]);
        Ok(Self {
            n_modes: kept,
            data,
        })
    }

    /// Relabels modes so that new mode `k` is old mode `order[k]`.
    pub fn permute_modes(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: order.len(),
            });
        }
        self.reduce(order)
    }

    /// Time reversal on `side_b`: flips the sign of every momentum row and
    /// column belonging to it. Modes covered by neither side are traced out
    /// first, and the remaining modes keep their relative order. The result
    /// may violate physicality, which is exactly the entanglement signature.
    pub fn partial_transpose(&self, partition: &ModePartition) -> Result<Self> {
        partition.check(self.n_modes)?;
        let covered = partition.covered();
        let mut reduced = self.reduce(&covered)?;
        let kept = reduced.n_modes;
        for (new_idx, old) in covered.iter().enumerate() {
            if partition.side_b.contains(old) {
                let p = kept + new_idx;
                for k in 0..2 * kept {
                    reduced.data[(p, k)] = -reduced.data[(p, k)];
                    reduced.data[(k, p)] = -reduced.data[(k, p)];
                }
            }
        }
        Ok(reduced)
    }

    /// Symplectic eigenvalues in ascending order, one per mode.
    ///
    /// For positive definite `σ = L Lᵀ` the moduli of the spectrum of `iΩσ`
    /// equal the singular values of the antisymmetric matrix `Lᵀ Ω L`, each
    /// appearing twice. Matrices without a Cholesky factor fall back to the
    /// eigenvalues of the nonsymmetric matrix `Ωσ`.
    ///
    /// Accuracy is limited by conditioning, not by the solver: rounding the
    /// entries of `σ` alone moves the eigenvalues by up to about
    /// `ε·‖σ‖₂²` (see [`spectral_noise_floor`]).
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let omega = symplectic_form(self.n_modes);
        let mut moduli: Vec<f64> = match self.data.clone().cholesky() {
            Some(chol) => {
                let l = chol.l();
                let antisym = l.transpose() * &omega * &l;
                let svd = nalgebra::SVD::try_new(antisym, false, false, f64::EPSILON, 10_000)
                    .ok_or_else(|| Error::SpectralFailure("SVD did not converge".into()))?;
                svd.singular_values.iter().copied().collect()
            }
            None => nonsymmetric_moduli(&(&omega * &self.data))?,
        };
        moduli.sort_by(f64::total_cmp);
        Ok(moduli
            .chunks(2)
            .map(|pair| 0.5 * (pair[0] + pair[1]))
            .collect())
    }

    /// Logarithmic negativity across `partition`, in natural-log units:
    /// `−Σ ln ν̃_k` over partially transposed symplectic eigenvalues below 1.
    /// A two-mode squeezed vacuum with squeezing `r` gives exactly `2r`.
    pub fn log_negativity(&self, partition: &ModePartition) -> Result<f64> {
        let nus = self
            .partial_transpose(partition)?
            .symplectic_eigenvalues()?;
        Ok(nus.iter().filter(|&&nu| nu < 1.0).map(|nu| -nu.ln()).sum())
    }

    /// Smallest symplectic eigenvalue of the partial transpose.
    pub fn min_pt_eigenvalue(&self, partition: &ModePartition) -> Result<f64> {
        let nus = self
            .partial_transpose(partition)?
            .symplectic_eigenvalues()?;
        Ok(nus[0])
    }

    /// PPT separability test, conclusive only when one side holds a single
    /// mode. Other partitions return [`Error::Inconclusive`].
    pub fn is_ppt_separable(&self, partition: &ModePartition) -> Result<bool> {
        partition.check(self.n_modes)?;
        let (na, nb) = (partition.side_a.len(), partition.side_b.len());
        if na >= 2 && nb >= 2 {
            return Err(Error::Inconclusive(na, nb));
        }
        Ok(self.min_pt_eigenvalue(partition)? >= 1.0 - PHYSICALITY_TOL)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let nus = self.symplectic_eigenvalues()?;
        if let Some(&bad) = nus.iter().find(|&&nu| nu < 1.0 - PHYSICALITY_TOL) {
            return Err(Error::Unphysical(bad - 1.0));
        }
        Ok(nus.into_iter().map(mode_entropy_bits).sum())
    }
}

/// First-order size of the symplectic-eigenvalue shift caused by rounding the
/// entries of `σ` to double precision, `ε·‖σ‖₂²`. Highly squeezed states
/// cannot be resolved more finely than this by any algorithm working on
/// the rounded matrix.
pub fn spectral_noise_floor(cm: &CovarianceMatrix) -> f64 {
    let norm = cm.data.norm().max(1.0);
    f64::EPSILON * norm * norm
}

/// Entropy contribution of one symplectic eigenvalue, in bits.
/// Eigenvalues within 1e-12 of 1 count as pure.
pub fn mode_entropy_bits(nu: f64) -> f64 {
    if nu <= 1.0 + 1e-12 {
        return 0.0;
    }
    let plus = 0.5 * (nu + 1.0);
    let minus = 0.5 * (nu - 1.0);
    plus * plus.log2() - minus * minus.log2()
}

fn nonsymmetric_moduli(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::SpectralFailure("Schur decomposition did not converge".into()))?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect())
}

/// Moduli of the eigenvalues of `Ωσ`, sorted, one per ± pair. Independent of
/// the singular-value route in [`CovarianceMatrix::symplectic_eigenvalues`].
pub fn symplectic_eigenvalues_schur(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    let mut moduli = nonsymmetric_moduli(&(symplectic_form(cm.n_modes) * cm.data()))?;
    moduli.sort_by(f64::total_cmp);
    Ok(moduli
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// Real linear map preserving the symplectic form, acting on covariance
/// matrices by congruence.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::BadShape { rows, cols });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let s = Self {
            n_modes: rows / 2,
            data,
        };
        let dev = s.symplectic_deviation();
        if dev >= SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic(dev));
        }
        Ok(s)
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            n_modes,
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Two-mode squeezer `S_{i,j}(r)`: `[[cosh r, sinh r], [sinh r, cosh r]]`
    /// on `(q_i, q_j)` and `[[cosh r, −sinh r], [−sinh r, cosh r]]` on
    /// `(p_i, p_j)`, identity elsewhere. Symmetric in `i` and `j`.
    pub fn two_mode_squeezer(i: usize, j: usize, r: f64, n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        check_mode(i, n_modes)?;
        check_mode(j, n_modes)?;
        if i == j {
            return Err(Error::SameMode(i));
        }
        if !r.is_finite() {
            return Err(Error::NonFinite);
        }
        let (c, s) = (r.cosh(), r.sinh());
        let n = n_modes;
        let mut data = DMatrix::identity(2 * n, 2 * n);
        data[(i, i)] = c;
        data[(j, j)] = c;
        data[(i, j)] = s;
        data[(j, i)] = s;
        data[(n + i, n + i)] = c;
        data[(n + j, n + j)] = c;
        data[(n + i, n + j)] = -s;
        data[(n + j, n + i)] = -s;
        Ok(Self { n_modes, data })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// `‖SΩSᵀ − Ω‖_max`.
    pub fn symplectic_deviation(&self) -> f64 {
        let omega = symplectic_form(self.n_modes);
        max_abs(&(&self.data * &omega * self.data.transpose() - omega))
    }

    /// The product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_modes != other.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        Ok(Self {
            n_modes: self.n_modes,
            data: &self.data * &other.data,
        })
    }

    /// `σ ↦ SσSᵀ`.
    pub fn apply(&self, cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        if self.n_modes != cm.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: cm.n_modes,
            });
        }
        let out = &self.data * &cm.data * self.data.transpose();
        // congruence keeps symmetry exactly in exact arithmetic; remove rounding
        let sym = (&out + out.transpose()) * 0.5;
        Ok(CovarianceMatrix {
            n_modes: cm.n_modes,
            data: sym,
        })
    }
}

/// Bipartition of (a subset of) the modes. Modes on neither side are
/// traced out before any bipartite quantity is computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl ModePartition {
    pub fn new(side_a: Vec<usize>, side_b: Vec<usize>) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::InvalidPartition(
                "both sides must be non-empty".into(),
            ));
        }
        let mut all: Vec<usize> = side_a.iter().chain(side_b.iter()).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(
                "sides overlap or repeat a mode".into(),
            ));
        }
        Ok(Self { side_a, side_b })
    }

    /// `{probe} | rest` over `n_modes` modes.
    pub fn one_vs_rest(probe: usize, n_modes: usize) -> Result<Self> {
        check_mode(probe, n_modes)?;
        let rest = (0..n_modes).filter(|&m| m != probe).collect();
        Self::new(vec![probe], rest)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn swapped(&self) -> Self {
        Self {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    /// All modes on either side, ascending.
    pub fn covered(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn check(&self, n_modes: usize) -> Result<()> {
        for &m in self.side_a.iter().chain(&self.side_b) {
            check_mode(m, n_modes)?;
        }
        Ok(())
    }
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::SpectralFailure("symmetric eigen-solve did not converge".into()))?;
    Ok(eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// Square root of the determinant of a one-mode reduction (the local
/// "mixedness" `m` used by the contangle formulas).
pub fn local_m(cm: &CovarianceMatrix, mode: usize) -> Result<f64> {
    Ok(cm.reduce(&[mode])?.data.determinant().max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tmsv(r: f64) -> CovarianceMatrix {
        SymplecticTransform::two_mode_squeezer(0, 1, r, 2)
            .unwrap()
            .apply(&CovarianceMatrix::vacuum(2).unwrap())
            .unwrap()
    }

    fn split(a: &[usize], b: &[usize]) -> ModePartition {
        ModePartition::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn vacuum_is_identity_and_pure() {
        let v1 = CovarianceMatrix::vacuum(1).unwrap();
        assert_eq!(v1.data(), &DMatrix::<f64>::identity(2, 2));
        let v4 = CovarianceMatrix::vacuum(4).unwrap();
        assert_eq!(v4.data(), &DMatrix::<f64>::identity(8, 8));
        assert!(v4.is_physical());
        for nu in CovarianceMatrix::vacuum(2)
            .unwrap()
            .symplectic_eigenvalues()
            .unwrap()
        {
            assert_abs_diff_eq!(nu, 1.0, epsilon = 1e-12);
        }
        assert_eq!(CovarianceMatrix::vacuum(0), Err(Error::ZeroModes));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 1e-6;
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            CovarianceMatrix::new(DMatrix::identity(3, 3)),
            Err(Error::BadShape { .. })
        ));
        // half the vacuum noise violates the uncertainty principle
        assert!(matches!(
            CovarianceMatrix::new(DMatrix::identity(2, 2) * 0.5),
            Err(Error::Unphysical(_))
        ));
        let mut nan = DMatrix::identity(2, 2);
        nan[(0, 0)] = f64::NAN;
        assert_eq!(CovarianceMatrix::new(nan), Err(Error::NonFinite));
    }

    #[test]
    fn squeezer_layout_and_symmetry() {
        let r = 0.7;
        let s = SymplecticTransform::two_mode_squeezer(1, 3, r, 4).unwrap();
        let d = s.data();
        assert_eq!(d[(1, 1)], r.cosh());
        assert_eq!(d[(1, 3)], r.sinh());
        assert_eq!(d[(5, 7)], -r.sinh());
        assert_eq!(d[(0, 0)], 1.0);
        assert!(s.symplectic_deviation() < SYMPLECTIC_TOL);
        let swapped = SymplecticTransform::two_mode_squeezer(3, 1, r, 4).unwrap();
        assert_eq!(s, swapped);
        let zero = SymplecticTransform::two_mode_squeezer(0, 1, 0.0, 2).unwrap();
        assert_eq!(zero, SymplecticTransform::identity(2).unwrap());
    }

    #[test]
    fn squeezer_rejects_bad_indices() {
        assert_eq!(
            SymplecticTransform::two_mode_squeezer(1, 1, 0.3, 2),
            Err(Error::SameMode(1))
        );
        assert!(matches!(
            SymplecticTransform::two_mode_squeezer(0, 2, 0.3, 2),
            Err(Error::ModeOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn negative_squeezing_is_still_symplectic() {
        let s = SymplecticTransform::two_mode_squeezer(0, 1, -1.2, 2).unwrap();
        assert!(s.symplectic_deviation() < SYMPLECTIC_TOL);
    }

    #[test]
    fn apply_checks_dimensions() {
        let s = SymplecticTransform::identity(2).unwrap();
        let v = CovarianceMatrix::vacuum(3).unwrap();
        assert!(matches!(s.apply(&v), Err(Error::DimensionMismatch { .. })));
        let v2 = CovarianceMatrix::vacuum(2).unwrap();
        assert_eq!(s.apply(&v2).unwrap(), v2);
    }

    #[test]
    fn apply_to_vacuum_is_s_st() {
        let s = SymplecticTransform::two_mode_squeezer(0, 1, 0.9, 2).unwrap();
        let out = s.apply(&CovarianceMatrix::vacuum(2).unwrap()).unwrap();
        let expected = s.data() * s.data().transpose();
        assert!(max_abs(&(out.data() - expected)) < 1e-12);
    }

    #[test]
    fn tmsv_reduction_is_thermal() {
        for r in [0.0, 0.3, 1.1, 2.0] {
            let one = tmsv(r).reduce(&[0]).unwrap();
            let c = (2.0 * r).cosh();
            assert_abs_diff_eq!(one.data()[(0, 0)], c, epsilon = 1e-12 * c);
            assert_abs_diff_eq!(one.data()[(1, 1)], c, epsilon = 1e-12 * c);
            assert_abs_diff_eq!(one.data()[(0, 1)], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(local_m(&tmsv(r), 1).unwrap(), c, epsilon = 1e-10 * c);
        }
    }

    #[test]
    fn reduce_edge_cases() {
        let st = tmsv(0.5);
        assert_eq!(st.reduce(&[0, 1]).unwrap(), st);
        assert!(st.reduce(&[]).is_err());
        assert!(st.reduce(&[2]).is_err());
        assert!(st.reduce(&[0, 0]).is_err());
    }

    #[test]
    fn partial_transpose_is_involutive_and_trivial_on_vacuum() {
        let p = split(&[0], &[1]);
        let st = tmsv(0.8);
        let twice = st
            .partial_transpose(&p)
            .unwrap()
            .partial_transpose(&p)
            .unwrap();
        assert_eq!(twice, st);
        let v = CovarianceMatrix::vacuum(2).unwrap();
        assert_eq!(v.partial_transpose(&p).unwrap(), v);
    }

    #[test]
    fn tmsv_negativity() {
        for r in [0.2, 0.9, 1.5] {
            let st = tmsv(r);
            let nu = st.min_pt_eigenvalue(&split(&[0], &[1])).unwrap();
            assert_abs_diff_eq!(nu, (-2.0 * r).exp(), epsilon = 1e-12);
            let ln = st.log_negativity(&split(&[0], &[1])).unwrap();
            assert_abs_diff_eq!(ln, 2.0 * r, epsilon = 1e-10);
            let swapped = st.log_negativity(&split(&[1], &[0])).unwrap();
            assert_abs_diff_eq!(ln, swapped, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(
            tmsv(1.5).log_negativity(&split(&[0], &[1])).unwrap(),
            3.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let v = CovarianceMatrix::vacuum(3).unwrap();
        assert_eq!(v.log_negativity(&split(&[0], &[1, 2])).unwrap(), 0.0);
        assert!(v.is_ppt_separable(&split(&[2], &[0])).unwrap());
    }

    #[test]
    fn ppt_is_inconclusive_for_two_by_two() {
        let v = CovarianceMatrix::vacuum(4).unwrap();
        assert_eq!(
            v.is_ppt_separable(&split(&[0, 1], &[2, 3])),
            Err(Error::Inconclusive(2, 2))
        );
    }

    #[test]
    fn partition_validation() {
        assert!(ModePartition::new(vec![], vec![1]).is_err());
        assert!(ModePartition::new(vec![0, 1], vec![1]).is_err());
        let p = split(&[0], &[5]);
        assert!(CovarianceMatrix::vacuum(2)
            .unwrap()
            .log_negativity(&p)
            .is_err());
    }

    #[test]
    fn thermal_scalar_case() {
        let th = CovarianceMatrix::new(DMatrix::identity(2, 2) * 2.0).unwrap();
        let nus = th.symplectic_eigenvalues().unwrap();
        assert_eq!(nus.len(), 1);
        assert_abs_diff_eq!(nus[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn schur_route_agrees_with_svd_route() {
        let st = tmsv(1.3);
        let pt = st.partial_transpose(&split(&[0], &[1])).unwrap();
        let a = pt.symplectic_eigenvalues().unwrap();
        let b = symplectic_eigenvalues_schur(&pt).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-9 * y.max(1.0));
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(
            CovarianceMatrix::vacuum(2)
                .unwrap()
                .von_neumann_entropy()
                .unwrap(),
            0.0
        );
        assert_eq!(mode_entropy_bits(1.0), 0.0);
        // nu = 3: 2 log2 2 - 1 log2 1 = 2 bits
        assert_abs_diff_eq!(mode_entropy_bits(3.0), 2.0, epsilon = 1e-14);
        let one = tmsv(4.0).reduce(&[0]).unwrap();
        let slope = (tmsv(6.0)
            .reduce(&[0])
            .unwrap()
            .von_neumann_entropy()
            .unwrap()
            - one.von_neumann_entropy().unwrap())
            / 2.0;
        assert_abs_diff_eq!(slope, 2.0 / std::f64::consts::LN_2, epsilon = 1e-3);
    }

    #[test]
    fn entropy_rejects_unphysical() {
        let bad = CovarianceMatrix::from_symmetric(DMatrix::identity(2, 2) * 0.5).unwrap();
        assert!(matches!(
            bad.von_neumann_entropy(),
            Err(Error::Unphysical(_))
        ));
    }
}
