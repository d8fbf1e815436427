//! The four-mode state built from three two-mode squeezers, and a report
//! that evaluates every closed form next to an independent spectral route.
//!
//! Modes are 0-based here; report keys are 1-based (`"12"`, `"3"`, ...).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::contangle::{self, ModePair, Probe, SqueezingParams};
use crate::error::Result;
use crate::gaussian::{
    min_symmetric_eigenvalue, CovarianceMatrix, ModePartition, SymplecticTransform,
};

/// Closed form and spectral route may differ by this much (relative to
/// `max(1, |value|)`) before a report is flagged inconsistent.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// Slack for the matrix inequality `σ^p ≤ γ_{123}`.
pub const PSD_TOL: f64 = 1e-8;
/// Log-negativity above which a bipartition counts as entangled.
pub const ENTANGLEMENT_WITNESS_TOL: f64 = 1e-9;

/// Mode relabelling 1↔4, 2↔3.
pub const DOUBLE_SWAP: [usize; 4] = [3, 2, 1, 0];

/// `S_{3,4}(a) S_{1,2}(a) S_{2,3}(s)` applied to the four-mode vacuum.
pub fn build_state(params: SqueezingParams) -> Result<CovarianceMatrix> {
    let (a, s) = (params.a(), params.s());
    let squeezers = [
        SymplecticTransform::two_mode_squeezer(1, 2, s, 4)?,
        SymplecticTransform::two_mode_squeezer(0, 1, a, 4)?,
        SymplecticTransform::two_mode_squeezer(2, 3, a, 4)?,
    ];
    squeezers
        .iter()
        .try_fold(CovarianceMatrix::vacuum(4)?, |cm, sq| sq.apply(&cm))
}

/// The seven global bipartitions of four modes.
pub fn global_bipartitions() -> Vec<ModePartition> {
    let splits: [(&[usize], &[usize]); 7] = [
        (&[0], &[1, 2, 3]),
        (&[1], &[0, 2, 3]),
        (&[2], &[0, 1, 3]),
        (&[3], &[0, 1, 2]),
        (&[0, 1], &[2, 3]),
        (&[0, 2], &[1, 3]),
        (&[0, 3], &[1, 2]),
    ];
    splits
        .iter()
        .map(|(a, b)| ModePartition::new(a.to_vec(), b.to_vec()).expect("static partition"))
        .collect()
}

fn interpair_partition() -> ModePartition {
    ModePartition::new(vec![0, 1], vec![2, 3]).expect("static partition")
}

fn first_vs_second() -> ModePartition {
    ModePartition::new(vec![0], vec![1]).expect("static partition")
}

/// True iff the state is entangled across every global bipartition
/// (log-negativity above [`ENTANGLEMENT_WITNESS_TOL`]).
pub fn full_inseparability_check(params: SqueezingParams) -> Result<bool> {
    let gamma = build_state(params)?;
    for partition in global_bipartitions() {
        if gamma.log_negativity(&partition)? <= ENTANGLEMENT_WITNESS_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimum eigenvalue of `γ_{123} − σ^p`, where `σ^p` is the bounding pure
/// state. Nonnegative (up to [`PSD_TOL`]) when the bound is valid.
pub fn bounding_state_gap(params: SqueezingParams) -> Result<f64> {
    let gamma = build_state(params)?.reduce(&[0, 1, 2])?;
    let bound = contangle::bounding_tripartite_state(params)?;
    min_symmetric_eigenvalue(&(gamma.data() - bound.data()))
}

/// Contangle of a two-mode reduction recomputed from covariance matrices.
///
/// * Pairs 1,2 and 3,4: the optimal pure state is the two-mode squeezed
///   vacuum `S(a)S(a)ᵀ`; its squared log-negativity is returned together
///   with the margin of `γ_ij − S(a)S(a)ᵀ ≥ 0`.
/// * Pair 2,3: the reduction is symmetric under the double swap, and for
///   symmetric two-mode states the contangle is the squared log-negativity.
/// * Other pairs: squared log-negativity, which is zero when PPT.
fn spectral_pairwise(
    gamma: &CovarianceMatrix,
    params: SqueezingParams,
    pair: ModePair,
) -> Result<(f64, f64)> {
    let reduced = gamma.reduce(&pair.modes())?;
    match pair.modes() {
        [0, 1] | [2, 3] => {
            let opt = SymplecticTransform::two_mode_squeezer(0, 1, params.a(), 2)?
                .apply(&CovarianceMatrix::vacuum(2)?)?;
            let margin = min_symmetric_eigenvalue(&(reduced.data() - opt.data()))?;
            Ok((opt.log_negativity(&first_vs_second())?.powi(2), margin))
        }
        _ => Ok((reduced.log_negativity(&first_vs_second())?.powi(2), 0.0)),
    }
}

/// Verdict on one two-mode reduction from both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    /// Closed form: `m = 1`.
    pub separable: bool,
    /// PPT on the two-mode reduction.
    pub ppt_separable: bool,
    /// Smallest partially transposed symplectic eigenvalue.
    pub min_pt_eigenvalue: f64,
}

/// All entanglement quantities at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub a: f64,
    pub s: f64,
    pub pairwise_contangle: BTreeMap<String, f64>,
    pub one_vs_rest_contangle: BTreeMap<String, f64>,
    pub interpair_contangle: f64,
    pub residual: f64,
    pub tripartite_bound: f64,
    pub monogamy_residual: f64,
    pub monogamy_ok: bool,
    pub strong_monogamy_ok: bool,
    pub fully_inseparable: bool,
    pub pair_verdicts: BTreeMap<String, PairVerdict>,
    /// `a` is within 1e-6 of the 2,3 separability threshold; the 2,3 verdict
    /// comparison is skipped.
    pub threshold_boundary: bool,
    pub max_route_discrepancy: f64,
    pub consistent: bool,
}

fn discrepancy(closed: f64, spectral: f64) -> f64 {
    (closed - spectral).abs() / closed.abs().max(1.0)
}

/// Evaluates every closed form and its spectral counterpart. Disagreements
/// beyond [`CONSISTENCY_TOL`] clear `consistent` instead of erroring.
pub fn full_report(params: SqueezingParams) -> Result<EntanglementReport> {
    let gamma = build_state(params)?;
    let mut worst = 0.0_f64;
    let mut consistent = true;
    let boundary = contangle::near_threshold(params);

    let mut pairwise = BTreeMap::new();
    let mut verdicts = BTreeMap::new();
    for pair in ModePair::ALL {
        let closed = contangle::pairwise_contangle(params, pair);
        let (spectral, margin) = spectral_pairwise(&gamma, params, pair)?;
        worst = worst.max(discrepancy(closed, spectral));
        if margin < -PSD_TOL {
            consistent = false;
        }
        let reduced = gamma.reduce(&pair.modes())?;
        let min_pt = reduced.min_pt_eigenvalue(&first_vs_second())?;
        let verdict = PairVerdict {
            separable: contangle::pairwise_m(params, pair) == 1.0,
            ppt_separable: reduced.is_ppt_separable(&first_vs_second())?,
            min_pt_eigenvalue: min_pt,
        };
        let skip = boundary && pair.modes() == [1, 2];
        if !skip && verdict.separable != verdict.ppt_separable {
            consistent = false;
        }
        pairwise.insert(pair.to_string(), closed);
        verdicts.insert(pair.to_string(), verdict);
    }

    let mut one_vs_rest = BTreeMap::new();
    for probe in Probe::ALL {
        let closed = contangle::one_vs_rest_contangle(params, probe);
        let partition = ModePartition::one_vs_rest(probe.mode(), 4)?;
        let spectral = gamma.log_negativity(&partition)?.powi(2);
        worst = worst.max(discrepancy(closed, spectral));
        one_vs_rest.insert(probe.to_string(), closed);
    }

    let interpair = contangle::interpair_contangle(params);
    let spectral_interpair = gamma.log_negativity(&interpair_partition())?.powi(2);
    worst = worst.max(discrepancy(interpair, spectral_interpair));

    let mut fully_inseparable = true;
    for partition in global_bipartitions() {
        if gamma.log_negativity(&partition)? <= ENTANGLEMENT_WITNESS_TOL {
            fully_inseparable = false;
            break;
        }
    }

    let strong = contangle::strong_monogamy_check(params);
    let monogamy = contangle::monogamy_residual(params);
    if worst > CONSISTENCY_TOL {
        consistent = false;
    }

    Ok(EntanglementReport {
        a: params.a(),
        s: params.s(),
        pairwise_contangle: pairwise,
        one_vs_rest_contangle: one_vs_rest,
        interpair_contangle: interpair,
        residual: strong.residual,
        tripartite_bound: strong.tripartite_bound,
        monogamy_residual: monogamy,
        monogamy_ok: monogamy >= -crate::gaussian::PHYSICALITY_TOL,
        strong_monogamy_ok: strong.ok,
        fully_inseparable,
        pair_verdicts: verdicts,
        threshold_boundary: boundary,
        max_route_discrepancy: worst,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(a: f64, s: f64) -> SqueezingParams {
        SqueezingParams::new(a, s).unwrap()
    }

    fn max_abs_diff(x: &CovarianceMatrix, y: &CovarianceMatrix) -> f64 {
        (x.data() - y.data())
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn vacuum_at_origin() {
        assert_eq!(
            build_state(p(0.0, 0.0)).unwrap(),
            CovarianceMatrix::vacuum(4).unwrap()
        );
    }

    #[test]
    fn only_interpair_squeezer_when_a_is_zero() {
        let g = build_state(p(0.0, 1.0)).unwrap();
        let ln = g
            .log_negativity(&ModePartition::new(vec![1], vec![2]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(ln, 2.0, epsilon = 1e-10);
        assert_eq!(
            g.reduce(&[0]).unwrap(),
            CovarianceMatrix::vacuum(1).unwrap()
        );
        assert_eq!(
            g.reduce(&[3]).unwrap(),
            CovarianceMatrix::vacuum(1).unwrap()
        );
    }

    #[test]
    fn double_swap_invariance_and_purity() {
        for (a, s) in [(0.4, 0.9), (1.5, 1.0), (2.5, 2.5)] {
            let g = build_state(p(a, s)).unwrap();
            let swapped = g.permute_modes(&DOUBLE_SWAP).unwrap();
            assert!(max_abs_diff(&g, &swapped) < 1e-12 * g.data().amax().max(1.0));
            for nu in g.symplectic_eigenvalues().unwrap() {
                assert_abs_diff_eq!(nu, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn one_vs_rest_m_matches_local_determinant() {
        for (a, s) in [(1.5, 1.0), (0.3, 2.0), (2.2, 0.1)] {
            let g = build_state(p(a, s)).unwrap();
            for probe in Probe::ALL {
                let det = crate::gaussian::local_m(&g, probe.mode()).unwrap();
                let closed = contangle::one_vs_rest_m(p(a, s), probe);
                assert_abs_diff_eq!(det, closed, epsilon = 1e-9 * closed);
            }
        }
    }

    #[test]
    fn report_at_benchmark() {
        let r = full_report(p(1.5, 1.0)).unwrap();
        assert_eq!(r.pairwise_contangle["12"], 9.0);
        assert_eq!(r.pairwise_contangle["34"], 9.0);
        for key in ["13", "24", "14", "23"] {
            assert_eq!(r.pairwise_contangle[key], 0.0);
            assert!(r.pair_verdicts[key].separable && r.pair_verdicts[key].ppt_separable);
        }
        assert_abs_diff_eq!(r.residual, 5.5177, epsilon = 1e-4);
        assert_abs_diff_eq!(r.tripartite_bound, 0.4511, epsilon = 1e-4);
        assert!(r.monogamy_ok && r.strong_monogamy_ok && r.fully_inseparable);
        assert!(r.consistent, "discrepancy {}", r.max_route_discrepancy);
        assert!(r.max_route_discrepancy < 1e-7);
    }

    #[test]
    fn report_at_origin() {
        let r = full_report(p(0.0, 0.0)).unwrap();
        assert!(r.pairwise_contangle.values().all(|&v| v == 0.0));
        assert!(r.one_vs_rest_contangle.values().all(|&v| v == 0.0));
        assert_eq!(r.residual, 0.0);
        assert!(r
            .pair_verdicts
            .values()
            .all(|v| v.separable && v.ppt_separable));
        assert!(!r.fully_inseparable);
        assert!(r.consistent);
    }

    #[test]
    fn report_below_threshold_has_entangled_23() {
        let r = full_report(p(0.3, 1.0)).unwrap();
        let v = r.pair_verdicts["23"];
        assert!(!v.separable && !v.ppt_separable);
        assert!(r.pairwise_contangle["23"] > 0.0);
        assert!(r.consistent, "discrepancy {}", r.max_route_discrepancy);
    }

    #[test]
    fn full_inseparability_cases() {
        assert!(full_inseparability_check(p(0.5, 0.5)).unwrap());
        assert!(!full_inseparability_check(p(0.0, 1.0)).unwrap());
        assert!(!full_inseparability_check(p(1.0, 0.0)).unwrap());
    }

    #[test]
    fn bounding_gap_is_psd() {
        for (a, s) in [(0.1, 0.1), (1.5, 1.0), (2.0, 2.0), (0.8, 0.0)] {
            assert!(bounding_state_gap(p(a, s)).unwrap() >= -PSD_TOL);
        }
    }
}
