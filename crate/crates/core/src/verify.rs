//! Grid-based property suites. Each suite evaluates one family of
//! invariants over the sampled parameter points and records the first
//! failing point.

use rayon::prelude::*;

use crate::contangle::{self, ModePair, Probe, SqueezingParams};
use crate::error::{Error, Result};
use crate::four_mode::{self, DOUBLE_SWAP, PSD_TOL};
use crate::gaussian::{
    local_m, spectral_noise_floor, CovarianceMatrix, ModePartition, SymplecticTransform,
    PHYSICALITY_TOL, SYMPLECTIC_TOL,
};
use crate::qudit;

/// Rectangular grid over `(a, s)`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub a_min: f64,
    pub a_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub steps: usize,
}

impl Default for Grid {
    /// 26×26 over `[0, 2.5]²`.
    fn default() -> Self {
        Self::square(0.0, 2.5, 26)
    }
}

impl Grid {
    pub fn square(min: f64, max: f64, steps: usize) -> Self {
        Self {
            a_min: min,
            a_max: max,
            s_min: min,
            s_max: max,
            steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidState(format!(
                "grid needs at least 2 steps per axis, got {}",
                self.steps
            )));
        }
        SqueezingParams::new(self.a_min, self.s_min)?;
        SqueezingParams::new(self.a_max, self.s_max)?;
        if self.a_max < self.a_min || self.s_max < self.s_min {
            return Err(Error::InvalidState("grid range is reversed".into()));
        }
        Ok(())
    }

    fn axis(min: f64, max: f64, steps: usize) -> Vec<f64> {
        let step = (max - min) / (steps - 1) as f64;
        (0..steps)
            .map(|k| {
                if k + 1 == steps {
                    max
                } else {
                    min + k as f64 * step
                }
            })
            .collect()
    }

    pub fn a_values(&self) -> Vec<f64> {
        Self::axis(self.a_min, self.a_max, self.steps)
    }

    pub fn s_values(&self) -> Vec<f64> {
        Self::axis(self.s_min, self.s_max, self.steps)
    }

    /// All points, row-major over `a` then `s`.
    pub fn points(&self) -> Result<Vec<SqueezingParams>> {
        self.validate()?;
        let s_values = self.s_values();
        self.a_values()
            .into_iter()
            .flat_map(|a| s_values.iter().map(move |&s| SqueezingParams::new(a, s)))
            .collect()
    }
}

/// Deliberate defects for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Spectral log-negativities are taken in base 2 instead of base e.
    WrongLogBase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub grid: Grid,
    /// Largest qudit dimension for the identity checks (multiple of 4).
    pub qudit_max_d: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: Grid::default(),
            qudit_max_d: 96,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Accumulates check results for one suite.
struct Tally {
    name: &'static str,
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Self {
        self.checks += other.checks;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

fn at(p: SqueezingParams) -> String {
    format!("a={}, s={}", p.a(), p.s())
}

/// Runs `body` on every grid point in parallel, keeping the first failure
/// in grid order.
fn per_point<F>(name: &'static str, points: &[SqueezingParams], body: F) -> SuiteOutcome
where
    F: Fn(SqueezingParams, &mut Tally) -> Result<()> + Sync,
{
    let tallies: Vec<Tally> = points
        .par_iter()
        .map(|&p| {
            let mut t = Tally::new(name);
            if let Err(e) = body(p, &mut t) {
                t.check(false, || format!("{}: {e}", at(p)));
            }
            t
        })
        .collect();
    tallies
        .into_iter()
        .fold(Tally::new(name), Tally::merge)
        .finish()
}

fn spectral_log_negativity(
    cm: &CovarianceMatrix,
    partition: &ModePartition,
    fault: Option<Fault>,
) -> Result<f64> {
    let ln = cm.log_negativity(partition)?;
    Ok(match fault {
        Some(Fault::WrongLogBase) => ln / std::f64::consts::LN_2,
        None => ln,
    })
}

fn purity_tolerance(cm: &CovarianceMatrix) -> f64 {
    PHYSICALITY_TOL.max(spectral_noise_floor(cm))
}

pub fn squeezer_symplecticity(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut t = Tally::new("squeezer_symplecticity");
    let mut values = opts.grid.a_values();
    values.extend(opts.grid.s_values());
    for r in values {
        for i in 0..4 {
            for j in (i + 1)..4 {
                let dev =
                    SymplecticTransform::two_mode_squeezer(i, j, r, 4)?.symplectic_deviation();
                t.check(dev < SYMPLECTIC_TOL, || {
                    format!("S_{{{},{}}}({r}): deviation {dev:e}", i + 1, j + 1)
                });
            }
        }
    }
    Ok(t.finish())
}

pub fn state_purity_and_symmetry(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    Ok(per_point("state_purity_and_symmetry", &points, |p, t| {
        let gamma = four_mode::build_state(p)?;
        let tol = purity_tolerance(&gamma);
        for nu in gamma.symplectic_eigenvalues()? {
            t.check((nu - 1.0).abs() <= tol, || {
                format!("{}: symplectic eigenvalue {nu} (tolerance {tol:e})", at(p))
            });
        }
        let margin = gamma.physicality_margin()?;
        t.check(margin >= -tol, || {
            format!("{}: physicality margin {margin:e}", at(p))
        });
        let swapped = gamma.permute_modes(&DOUBLE_SWAP)?;
        let scale = gamma.data().amax().max(1.0);
        let diff = (gamma.data() - swapped.data()).amax();
        t.check(diff <= 1e-12 * scale, || {
            format!("{}: double-swap asymmetry {diff:e}", at(p))
        });
        Ok(())
    }))
}

pub fn partial_transpose_properties(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    Ok(per_point(
        "partial_transpose_properties",
        &points,
        |p, t| {
            let gamma = four_mode::build_state(p)?;
            for partition in four_mode::global_bipartitions() {
                let twice = gamma
                    .partial_transpose(&partition)?
                    .partial_transpose(&partition)?;
                t.check(twice == gamma, || {
                    format!("{}: partial transpose not involutive", at(p))
                });
                let forward = gamma.log_negativity(&partition)?;
                let backward = gamma.log_negativity(&partition.swapped())?;
                t.check(
                    (forward - backward).abs() < 1e-10 * forward.max(1.0),
                    || {
                        format!(
                            "{}: log-negativity {forward} vs swapped sides {backward}",
                            at(p)
                        )
                    },
                );
            }
            Ok(())
        },
    ))
}

pub fn one_vs_rest_closed_form(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    let fault = opts.fault;
    Ok(per_point("one_vs_rest_closed_form", &points, |p, t| {
        let gamma = four_mode::build_state(p)?;
        for probe in Probe::ALL {
            let partition = ModePartition::one_vs_rest(probe.mode(), 4)?;
            let m = contangle::one_vs_rest_m(p, probe);
            let ln = spectral_log_negativity(&gamma, &partition, fault)?;
            let closed_ln = (m * m - 1.0).max(0.0).sqrt().asinh();
            t.check((ln - closed_ln).abs() < 1e-8, || {
                format!(
                    "{}: probe {probe} log-negativity {ln} vs {closed_ln}",
                    at(p)
                )
            });
            let tau = contangle::one_vs_rest_contangle(p, probe);
            t.check((ln * ln - tau).abs() < 1e-7, || {
                format!("{}: probe {probe} contangle {} vs {tau}", at(p), ln * ln)
            });
            let det_m = local_m(&gamma, probe.mode())?;
            t.check((det_m - m).abs() < 1e-9 * m, || {
                format!("{}: probe {probe} sqrt(det) {det_m} vs {m}", at(p))
            });
        }
        Ok(())
    }))
}

/// `τ((12)|(34)) = 4s²` along the `a` axis at fixed `s = 1`.
pub fn interpair_contangle(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let mut t = Tally::new("interpair_contangle");
    let partition = ModePartition::new(vec![0, 1], vec![2, 3])?;
    let s = 1.0;
    for a in opts.grid.a_values() {
        let p = SqueezingParams::new(a, s)?;
        let ln = spectral_log_negativity(&four_mode::build_state(p)?, &partition, opts.fault)?;
        let closed = contangle::interpair_contangle(p);
        t.check((ln * ln - closed).abs() < 1e-8, || {
            format!("{}: interpair contangle {} vs {closed}", at(p), ln * ln)
        });
    }
    Ok(t.finish())
}

pub fn separability_structure(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    let grid_part = per_point("separability_structure", &points, |p, t| {
        let gamma = four_mode::build_state(p)?;
        let split = ModePartition::new(vec![0], vec![1])?;
        for pair in ModePair::ALL {
            if pair.modes() == [1, 2] && contangle::near_threshold(p) {
                continue;
            }
            let closed = contangle::pairwise_m(p, pair) == 1.0;
            let ppt = gamma.reduce(&pair.modes())?.is_ppt_separable(&split)?;
            t.check(closed == ppt, || {
                format!(
                    "{}: pair {pair} closed-form separable={closed}, PPT={ppt}",
                    at(p)
                )
            });
        }
        Ok(())
    });
    let mut t = Tally::new("separability_structure");
    let split = ModePartition::new(vec![0], vec![1])?;
    for s in opts.grid.s_values().into_iter().filter(|&s| s > 0.0) {
        let p = SqueezingParams::new(contangle::separability_threshold(s), s)?;
        let nu = four_mode::build_state(p)?
            .reduce(&[1, 2])?
            .min_pt_eigenvalue(&split)?;
        t.check((nu - 1.0).abs() <= 1e-7, || {
            format!("{}: threshold min PT eigenvalue {nu}", at(p))
        });
        let m = contangle::pairwise_m(
            SqueezingParams::new(p.a() * (1.0 - 1e-10), s)?,
            ModePair::new(1, 2)?,
        );
        t.check((m - 1.0).abs() <= 1e-7, || {
            format!("{}: m_23 just below threshold {m}", at(p))
        });
    }
    Ok(Tally {
        name: grid_part.name,
        checks: grid_part.checks,
        failures: grid_part.failures,
        first_failure: grid_part.first_failure,
    }
    .merge(t)
    .finish())
}

pub fn monogamy(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    Ok(per_point("monogamy", &points, |p, t| {
        let b = contangle::monogamy_branches(p);
        t.check(b.minimum() >= -PHYSICALITY_TOL, || {
            format!("{}: monogamy residual {}", at(p), b.minimum())
        });
        t.check(b.probe1 <= b.probe2 + 1e-12, || {
            format!(
                "{}: probe-2 branch {} below probe-1 branch {}",
                at(p),
                b.probe2,
                b.probe1
            )
        });
        Ok(())
    }))
}

pub fn strong_monogamy(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    let mut out = per_point("strong_monogamy", &points, |p, t| {
        let sm = contangle::strong_monogamy_check(p);
        t.check(sm.ok, || {
            format!(
                "{}: residual {} vs bound {}",
                at(p),
                sm.residual,
                sm.tripartite_bound
            )
        });
        Ok(())
    });
    let far = contangle::tripartite_bound(SqueezingParams::new(5.0, 1.0)?);
    out.checks += 1;
    if far >= 0.01 {
        out.failures += 1;
        out.first_failure
            .get_or_insert_with(|| format!("a=5, s=1: bound {far} not below 0.01"));
    }
    Ok(out)
}

/// Along each fixed-`s` row: the residual is strictly increasing in `a`
/// (1e-12 slack) and the tripartite bound is unimodal, rising from 0 at
/// `a = 0` to a single peak and non-increasing after it. Also checks the
/// residual growth between a=3 and a=6.
pub fn monotonicity(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    opts.grid.validate()?;
    let mut t = Tally::new("monotonicity");
    let a_values = opts.grid.a_values();
    for s in opts.grid.s_values() {
        let row: Vec<SqueezingParams> = a_values
            .iter()
            .map(|&a| SqueezingParams::new(a, s))
            .collect::<Result<_>>()?;
        if s > 0.0 {
            for w in row.windows(2) {
                let (r0, r1) = (
                    contangle::residual_contangle(w[0]),
                    contangle::residual_contangle(w[1]),
                );
                t.check(r1 - r0 > 1e-12, || {
                    format!(
                        "{}: residual {r1} not above {r0} at a={}",
                        at(w[1]),
                        w[0].a()
                    )
                });
            }
        }
        let bounds: Vec<f64> = row
            .iter()
            .map(|&p| contangle::tripartite_bound(p))
            .collect();
        let peak = (0..bounds.len())
            .max_by(|&i, &j| bounds[i].total_cmp(&bounds[j]))
            .unwrap_or(0);
        for (k, w) in bounds.windows(2).enumerate() {
            let ok = if k < peak {
                w[1] >= w[0] - 1e-12
            } else {
                w[1] <= w[0] + 1e-12
            };
            t.check(ok, || {
                format!(
                    "{}: bound {} -> {} breaks unimodality (peak at a={})",
                    at(row[k + 1]),
                    w[0],
                    w[1],
                    row[peak].a()
                )
            });
        }
    }
    let growth = contangle::residual_contangle(SqueezingParams::new(6.0, 1.0)?)
        - contangle::residual_contangle(SqueezingParams::new(3.0, 1.0)?);
    t.check(growth > 10.0, || {
        format!("residual growth from a=3 to a=6 is only {growth}")
    });
    Ok(t.finish())
}

pub fn bounding_state(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    Ok(per_point("bounding_state", &points, |p, t| {
        let gap = four_mode::bounding_state_gap(p)?;
        t.check(gap >= -PSD_TOL, || {
            format!("{}: gamma_123 - sigma_p min eigenvalue {gap:e}", at(p))
        });
        let sigma = contangle::bounding_tripartite_state(p)?;
        let m3 = local_m(&sigma, 2)?;
        let closed = contangle::bound_m3(p);
        t.check((m3 - closed).abs() < 1e-9 * closed, || {
            format!("{}: bounding state m_3 {m3} vs {closed}", at(p))
        });
        Ok(())
    }))
}

pub fn full_inseparability(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    Ok(per_point("full_inseparability", &points, |p, t| {
        let on_axis = p.a().abs() < 1e-6 || p.s().abs() < 1e-6;
        let expected = p.a() > 0.0 && p.s() > 0.0;
        if p.a() == 0.0 || p.s() == 0.0 || !on_axis {
            let got = four_mode::full_inseparability_check(p)?;
            t.check(got == expected, || {
                format!("{}: fully inseparable = {got}, expected {expected}", at(p))
            });
        }
        Ok(())
    }))
}

pub fn report_consistency(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    let points = opts.grid.points()?;
    Ok(per_point("report_consistency", &points, |p, t| {
        let r = four_mode::full_report(p)?;
        t.check(r.consistent && r.max_route_discrepancy < 1e-7, || {
            format!(
                "{}: report inconsistent (route discrepancy {:e})",
                at(p),
                r.max_route_discrepancy
            )
        });
        Ok(())
    }))
}

pub fn qudit_identities(opts: &VerifyOptions) -> Result<SuiteOutcome> {
    use num_rational::Ratio;
    let mut t = Tally::new("qudit_identities");
    let ds: Vec<usize> = (1..=opts.qudit_max_d / 4).map(|k| 4 * k).collect();
    let base = qudit::tangle_report(4)?;
    let base_sq = qudit::squashed_bounds(4)?;
    for &d in &ds {
        let r = qudit::tangle_report(d)?;
        let n = d as i64;
        t.check(r.exact.three_tangle == Ratio::new(n, 4), || {
            format!("d={d}: three-tangle {}", r.exact.three_tangle)
        });
        t.check(r.exact.pairwise == Ratio::new(n, 9), || {
            format!("d={d}: pairwise {}", r.exact.pairwise)
        });
        t.check(r.exact.one_vs_rest == Ratio::new(17 * n, 36), || {
            format!("d={d}: one-vs-rest {}", r.exact.one_vs_rest)
        });
        t.check(r.exact.monogamy_gap == Ratio::from_integer(0), || {
            format!("d={d}: gap {}", r.exact.monogamy_gap)
        });
        let scale = (d / 4) as f64;
        let sq = qudit::squashed_bounds(d)?;
        t.check(
            (sq.one_vs_rest - scale * base_sq.one_vs_rest).abs() < 1e-12 * scale,
            || format!("d={d}: squashed bound not linear in d"),
        );
        t.check(sq.tripartite_lower == scale, || {
            format!("d={d}: tripartite lower {}", sq.tripartite_lower)
        });
        t.check(
            (r.one_vs_rest_tangle - scale * base.one_vs_rest_tangle).abs() < 1e-12 * scale,
            || format!("d={d}: one-vs-rest tangle not linear in d"),
        );
    }
    let copies = [
        ("GHZ one-vs-rest", base.ghz_copy.one_vs_rest, 1.0),
        ("W one-vs-rest", base.w_copy.one_vs_rest, 8.0 / 9.0),
        ("W pairwise", base.w_copy.pairwise_ab, 4.0 / 9.0),
        ("GHZ pairwise", base.ghz_copy.pairwise_ab, 0.0),
        ("GHZ three-tangle", base.ghz_copy.three_tangle, 1.0),
        ("W three-tangle", base.w_copy.three_tangle, 0.0),
    ];
    for (label, got, want) in copies {
        t.check((got - want).abs() < 1e-10, || {
            format!("{label}: {got} vs {want}")
        });
    }
    let mut prev = 0.0;
    for d in (4..=96).step_by(4) {
        let delta = qudit::nongaussianity(d)?;
        // the exact formula overshoots 1/2 by at most 7.4e-15 (d = 36)
        t.check(
            (0.48..=0.5 + 1e-12).contains(&delta) && delta >= prev - 1e-12,
            || format!("d={d}: non-Gaussianity {delta} (previous {prev})"),
        );
        prev = delta;
    }
    let state = qudit::build_psi(4)?;
    for party in 0..3 {
        let rho = qudit::reduced_density(&state.vector, &state.party_qubits(party));
        t.check(rho.is_ok(), || {
            format!("party {party} reduction invalid: {rho:?}")
        });
    }
    t.check(base_sq.w_pair_log_negativity > 0.0, || {
        "W pair witness not positive".into()
    });
    Ok(t.finish())
}

type Suite = fn(&VerifyOptions) -> Result<SuiteOutcome>;

pub const SUITES: [(&str, Suite); 13] = [
    ("squeezer_symplecticity", squeezer_symplecticity),
    ("state_purity_and_symmetry", state_purity_and_symmetry),
    ("partial_transpose_properties", partial_transpose_properties),
    ("one_vs_rest_closed_form", one_vs_rest_closed_form),
    ("interpair_contangle", interpair_contangle),
    ("separability_structure", separability_structure),
    ("monogamy", monogamy),
    ("strong_monogamy", strong_monogamy),
    ("monotonicity", monotonicity),
    ("bounding_state", bounding_state),
    ("full_inseparability", full_inseparability),
    ("report_consistency", report_consistency),
    ("qudit_identities", qudit_identities),
];

/// Runs every suite in order.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteOutcome>> {
    opts.grid.validate()?;
    qudit::check_qudit_dimension(opts.qudit_max_d)?;
    SUITES.iter().map(|(_, suite)| suite(opts)).collect()
}
