//! Contangle (squared logarithmic negativity) of the four-mode family and
//! its monogamy bookkeeping, in closed form.
//!
//! The family is parameterized by the pairwise squeezing `a` (pairs 1,2 and
//! 3,4) and the interpair squeezing `s` (pair 2,3). Everything here is a
//! scalar formula; spectral cross-checks live in [`crate::four_mode`].
//! Mode indices are 0-based; [`ModePair`] and [`Probe`] print 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, SymplecticTransform, PHYSICALITY_TOL};

/// Points closer than this to the `{2,3}` separability threshold are
/// reported as boundary cases.
pub const THRESHOLD_BOUNDARY: f64 = 1e-6;

/// Squeezing degrees of the four-mode family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingParams {
    a: f64,
    s: f64,
}

impl SqueezingParams {
    pub fn new(a: f64, s: f64) -> Result<Self> {
        if !(a.is_finite() && s.is_finite() && a >= 0.0 && s >= 0.0) {
            return Err(Error::InvalidSqueezing { a, s });
        }
        Ok(Self { a, s })
    }

    /// Pairwise squeezing (pairs 1,2 and 3,4).
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Interpair squeezing (pair 2,3).
    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Unordered pair of distinct modes among the four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModePair(usize, usize);

impl ModePair {
    pub const ALL: [ModePair; 6] = [
        ModePair(0, 1),
        ModePair(0, 2),
        ModePair(0, 3),
        ModePair(1, 2),
        ModePair(1, 3),
        ModePair(2, 3),
    ];

    pub fn new(i: usize, j: usize) -> Result<Self> {
        for m in [i, j] {
            if m >= 4 {
                return Err(Error::ModeOutOfRange {
                    index: m,
                    n_modes: 4,
                });
            }
        }
        if i == j {
            return Err(Error::SameMode(i));
        }
        Ok(Self(i.min(j), i.max(j)))
    }

    pub fn modes(&self) -> [usize; 2] {
        [self.0, self.1]
    }
}

impl fmt::Display for ModePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0 + 1, self.1 + 1)
    }
}

/// A single probe mode among the four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probe(usize);

impl Probe {
    pub const ALL: [Probe; 4] = [Probe(0), Probe(1), Probe(2), Probe(3)];

    pub fn new(mode: usize) -> Result<Self> {
        if mode >= 4 {
            return Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: 4,
            });
        }
        Ok(Self(mode))
    }

    pub fn mode(&self) -> usize {
        self.0
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// `g(x) = arcsinh²(√(x − 1))`, the contangle as a function of `m²`.
/// Arguments in `[1 − 1e-9, 1)` are clamped to 1.
pub fn g_function(x: f64) -> Result<f64> {
    if x.is_nan() || x < 1.0 - PHYSICALITY_TOL {
        return Err(Error::OutOfDomain(x));
    }
    Ok((x - 1.0).max(0.0).sqrt().asinh().powi(2))
}

fn g_of_m(m: f64) -> f64 {
    // m >= 1 by construction for every closed form below
    (m * m - 1.0).max(0.0).sqrt().asinh().powi(2)
}

/// `g((cosh r + δ)²) − r²` for `δ ≥ 0`, free of cancellation: exactly 0
/// when `δ = 0`.
fn g_excess(r: f64, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let (x0, y0) = (r.cosh(), r.sinh());
    let x = x0 + delta;
    let y = (x * x - 1.0).sqrt();
    let d = ((delta + (2.0 * x0 * delta + delta * delta) / (y + y0)) / (x0 + y0)).ln_1p();
    d * (d + 2.0 * r)
}

fn clamp_unit(m: f64) -> f64 {
    if (1.0 - PHYSICALITY_TOL..=1.0).contains(&m) {
        1.0
    } else {
        m
    }
}

/// Value of `a` at which the 2,3 reduction becomes separable:
/// `arcsinh(√tanh s)`.
pub fn separability_threshold(s: f64) -> f64 {
    s.tanh().sqrt().asinh()
}

/// True when `a` lies within [`THRESHOLD_BOUNDARY`] of the threshold, where
/// the 2,3 verdict is numerically undecidable.
pub fn near_threshold(params: SqueezingParams) -> bool {
    params.s > 0.0 && (params.a - separability_threshold(params.s)).abs() < THRESHOLD_BOUNDARY
}

fn m23(params: SqueezingParams) -> f64 {
    let SqueezingParams { a, s } = params;
    if a >= separability_threshold(s) {
        return 1.0;
    }
    let (ch_a, sh_a) = (a.cosh(), a.sinh());
    let num = -1.0 + 2.0 * (2.0 * a).cosh().powi(2) * s.cosh().powi(2) + 3.0 * (2.0 * s).cosh()
        - 4.0 * sh_a * sh_a * (2.0 * s).sinh();
    let den = 4.0 * (ch_a * ch_a + (2.0 * s).exp() * sh_a * sh_a);
    clamp_unit(num / den)
}

/// `m` of the optimal pure state for a two-mode reduction. Pairs 1,3, 2,4
/// and 1,4 are separable (`m = 1`); pairs 1,2 and 3,4 give `cosh 2a`; pair
/// 2,3 is entangled only below [`separability_threshold`].
pub fn pairwise_m(params: SqueezingParams, pair: ModePair) -> f64 {
    match pair.modes() {
        [0, 1] | [2, 3] => (2.0 * params.a).cosh(),
        [1, 2] => m23(params),
        _ => 1.0,
    }
}

/// Contangle of a two-mode reduction, `g(m²)`. For pairs 1,2 and 3,4 this
/// is `4a²` independently of `s`.
pub fn pairwise_contangle(params: SqueezingParams, pair: ModePair) -> f64 {
    match pair.modes() {
        [0, 1] | [2, 3] => 4.0 * params.a * params.a,
        _ => g_of_m(pairwise_m(params, pair)),
    }
}

/// `m` for the pure bipartition `probe | rest`.
pub fn one_vs_rest_m(params: SqueezingParams, probe: Probe) -> f64 {
    let (ch2, sh2) = (params.a.cosh().powi(2), params.a.sinh().powi(2));
    let c2s = (2.0 * params.s).cosh();
    match probe.mode() {
        0 | 3 => ch2 + c2s * sh2,
        _ => sh2 + c2s * ch2,
    }
}

pub fn one_vs_rest_contangle(params: SqueezingParams, probe: Probe) -> f64 {
    g_of_m(one_vs_rest_m(params, probe))
}

/// Contangle across the `(12)|(34)` split, `4s²`.
pub fn interpair_contangle(params: SqueezingParams) -> f64 {
    4.0 * params.s * params.s
}

/// `τ(1|234) − τ(1|2)`: entanglement of mode 1 not stored pairwise.
pub fn residual_contangle(params: SqueezingParams) -> f64 {
    // m(1|234) = cosh 2a + 2 sinh²s sinh²a
    let delta = 2.0 * (params.s.sinh() * params.a.sinh()).powi(2);
    g_excess(2.0 * params.a, delta)
}

/// The two monogamy slacks: probe 1 (`τ(1|234) − τ(1|2)`) and probe 2
/// (`τ(2|134) − τ(1|2) − τ(2|3)`). Probes 3 and 4 mirror these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonogamyBranches {
    pub probe1: f64,
    pub probe2: f64,
}

impl MonogamyBranches {
    pub fn minimum(&self) -> f64 {
        self.probe1.min(self.probe2)
    }

    /// Ties within [`PHYSICALITY_TOL`] count as attaining the minimum.
    pub fn probe1_is_minimum(&self) -> bool {
        self.probe1 <= self.probe2 + PHYSICALITY_TOL
    }
}

pub fn monogamy_branches(params: SqueezingParams) -> MonogamyBranches {
    let tau12 = pairwise_contangle(params, ModePair(0, 1));
    let tau23 = pairwise_contangle(params, ModePair(1, 2));
    MonogamyBranches {
        probe1: residual_contangle(params),
        probe2: one_vs_rest_contangle(params, Probe(1)) - tau12 - tau23,
    }
}

/// Smallest monogamy slack over all probes; nonnegative when monogamy holds.
pub fn monogamy_residual(params: SqueezingParams) -> f64 {
    monogamy_branches(params).minimum()
}

/// `m` of mode 3 in the bounding pure three-mode state:
/// `(1 + sech²a·tanh²s) / (1 − sech²a·tanh²s)`.
pub fn bound_m3(params: SqueezingParams) -> f64 {
    let u = (params.s.tanh() / params.a.cosh()).powi(2);
    (1.0 + u) / (1.0 - u)
}

/// `m` of mode 1 in the bounding state: `cosh²a + m₃·sinh²a`.
pub fn bound_m1(params: SqueezingParams) -> f64 {
    params.a.cosh().powi(2) + bound_m3(params) * params.a.sinh().powi(2)
}

/// Upper bound on the genuine tripartite contangle among modes 1, 2, 3
/// (equivalently 2, 3, 4).
pub fn tripartite_bound(params: SqueezingParams) -> f64 {
    let u = (params.s.tanh() / params.a.cosh()).powi(2);
    let first = g_excess(
        2.0 * params.a,
        2.0 * u / (1.0 - u) * params.a.sinh().powi(2),
    );
    let second = g_of_m(bound_m3(params)) - pairwise_contangle(params, ModePair(1, 2));
    first.min(second)
}

/// Squeezing `t` of the 2,3 squeezer in the bounding state, chosen so that
/// mode 3 has `m = m₃`.
pub fn bounding_squeezing(params: SqueezingParams) -> f64 {
    0.5 * bound_m3(params).acosh()
}

/// Pure three-mode state `S_{1,2}(a) S_{2,3}(t)` applied to vacuum, which
/// lies below the 1,2,3 reduction of the four-mode state.
pub fn bounding_tripartite_state(params: SqueezingParams) -> Result<CovarianceMatrix> {
    let t = bounding_squeezing(params);
    let s12 = SymplecticTransform::two_mode_squeezer(0, 1, params.a, 3)?;
    let s23 = SymplecticTransform::two_mode_squeezer(1, 2, t, 3)?;
    s12.compose(&s23)?.apply(&CovarianceMatrix::vacuum(3)?)
}

/// Outcome of the strong-monogamy accounting at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongMonogamy {
    /// Upper bracket on genuine four-partite entanglement.
    pub residual: f64,
    /// Lower bracket: the tripartite bound, which is what remains of the
    /// residual once tripartite contributions are removed.
    pub tripartite_bound: f64,
    pub ok: bool,
}

pub fn strong_monogamy_check(params: SqueezingParams) -> StrongMonogamy {
    let residual = residual_contangle(params);
    let bound = tripartite_bound(params);
    StrongMonogamy {
        residual,
        tripartite_bound: bound,
        ok: residual >= bound - PHYSICALITY_TOL && bound >= -PHYSICALITY_TOL,
    }
}
