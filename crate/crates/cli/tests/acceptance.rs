//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Ratio;

use promiscuity::contangle::{self, ModePair};
use promiscuity::four_mode::{self, PSD_TOL};
use promiscuity::gaussian::{min_symmetric_eigenvalue, PHYSICALITY_TOL};
use promiscuity::qudit::{self, copy_tangles, ghz3, reduced_density, w3};
use promiscuity::verify::Grid;
use promiscuity::{CovarianceMatrix, ModePartition, SqueezingParams, SymplecticTransform};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

/// Collects failed checks; the first one becomes the detail line.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn verdict(self, summary: String, elapsed: Duration) -> Verdict {
        let ms = elapsed.as_secs_f64() * 1e3;
        match self.failures.first() {
            None => Verdict {
                passed: true,
                detail: format!("{summary}; {} checks; {ms:.1} ms", self.count),
            },
            Some(first) => Verdict {
                passed: false,
                detail: format!(
                    "{} of {} checks failed, first: {first}; {ms:.1} ms",
                    self.failures.len(),
                    self.count
                ),
            },
        }
    }
}

fn p(a: f64, s: f64) -> SqueezingParams {
    SqueezingParams::new(a, s).unwrap()
}

fn two_mode_split() -> ModePartition {
    ModePartition::new(vec![0], vec![1]).unwrap()
}

fn benchmark_point() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let params = p(1.5, 1.0);
    let gamma = four_mode::build_state(params).unwrap();
    let mut spectral = Vec::new();
    for (i, j) in [(0, 1), (2, 3)] {
        let closed = contangle::pairwise_contangle(params, ModePair::new(i, j).unwrap());
        c.require(closed == 9.0, || {
            format!("closed-form tau_{}{} = {closed}", i + 1, j + 1)
        });
        // The reduction is mixed; its contangle is attained by the two-mode
        // squeezed vacuum lying below it.
        let reduced = gamma.reduce(&[i, j]).unwrap();
        let witness = SymplecticTransform::two_mode_squeezer(0, 1, params.a(), 2)
            .unwrap()
            .apply(&CovarianceMatrix::vacuum(2).unwrap())
            .unwrap();
        let gap = min_symmetric_eigenvalue(&(reduced.data() - witness.data())).unwrap();
        c.require(gap >= -PSD_TOL, || {
            format!("reduction {}{} minus witness: {gap:e}", i + 1, j + 1)
        });
        let ln = witness.log_negativity(&two_mode_split()).unwrap();
        let tau = ln * ln;
        spectral.push(tau);
        c.require((tau - 9.0).abs() < 1e-7, || {
            format!("spectral tau_{}{} = {tau}", i + 1, j + 1)
        });
    }
    let res = contangle::residual_contangle(params);
    let bound = contangle::tripartite_bound(params);
    c.require((res - 5.519).abs() <= 0.05, || format!("tau_res = {res}"));
    c.require((bound - 0.451).abs() <= 0.01, || {
        format!("tau_bound = {bound}")
    });
    let elapsed = start.elapsed();
    c.require(elapsed < Duration::from_millis(100), || {
        format!("took {elapsed:?}")
    });
    c.verdict(
        format!(
            "tau_12 = tau_34 = 9.000000, spectral {:.10} / {:.10}, tau_res = {res:.6}, tau_bound = {bound:.6}",
            spectral[0], spectral[1]
        ),
        elapsed,
    )
}

fn interpair_entanglement() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let part = ModePartition::new(vec![0, 1], vec![2, 3]).unwrap();
    let mut worst = 0.0_f64;
    for a in [0.0, 0.5, 1.0, 1.5, 2.0] {
        for s in [0.5, 1.0, 1.5, 2.0] {
            let ln = four_mode::build_state(p(a, s))
                .unwrap()
                .log_negativity(&part)
                .unwrap();
            let err = (ln * ln - 4.0 * s * s).abs();
            worst = worst.max(err);
            c.require(err < 1e-8, || {
                format!("a={a}, s={s}: |tau - 4s^2| = {err:e}")
            });
        }
    }
    let elapsed = start.elapsed();
    c.require(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    });
    c.verdict(
        format!("20 points, worst |tau - 4s^2| = {worst:.2e}"),
        elapsed,
    )
}

fn default_grid() -> Vec<SqueezingParams> {
    Grid::default().points().unwrap()
}

fn monogamy_surface() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut least = f64::INFINITY;
    for q in default_grid() {
        let b = contangle::monogamy_branches(q);
        let r = contangle::monogamy_residual(q);
        least = least.min(r);
        c.require(r >= -PHYSICALITY_TOL, || {
            format!("a={}, s={}: residual {r:e}", q.a(), q.s())
        });
        c.require(b.probe1_is_minimum(), || {
            format!("a={}, s={}: probe 3 branch smaller", q.a(), q.s())
        });
    }
    let elapsed = start.elapsed();
    c.require(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    });
    c.verdict(format!("676 points, least residual {least:.3e}"), elapsed)
}

fn strong_monogamy_chain() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    for q in default_grid() {
        let chain = contangle::strong_monogamy_check(q);
        c.require(chain.ok, || {
            format!(
                "a={}, s={}: tau_res {}, tau_bound {}",
                q.a(),
                q.s(),
                chain.residual,
                chain.tripartite_bound
            )
        });
    }
    let far = contangle::tripartite_bound(p(5.0, 1.0));
    c.require(far < 0.01, || format!("tau_bound(5, 1) = {far}"));
    c.verdict(
        format!("676 points, tau_bound(5, 1) = {far:.3e}"),
        start.elapsed(),
    )
}

fn separability_structure() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let split = two_mode_split();
    for q in default_grid() {
        let gamma = four_mode::build_state(q).unwrap();
        let threshold = contangle::separability_threshold(q.s());
        for pair in ModePair::ALL {
            let modes = pair.modes();
            let expected = match modes {
                [0, 2] | [1, 3] | [0, 3] => true,
                [1, 2] => {
                    if (q.a() - threshold).abs() <= 1e-6 {
                        continue;
                    }
                    q.a() >= threshold
                }
                _ => continue,
            };
            let verdict = gamma
                .reduce(&modes)
                .unwrap()
                .is_ppt_separable(&split)
                .unwrap();
            c.require(verdict == expected, || {
                format!(
                    "a={}, s={}: pair {pair} PPT verdict {verdict}",
                    q.a(),
                    q.s()
                )
            });
        }
    }
    let mut worst = 0.0_f64;
    for s in Grid::default().s_values().into_iter().filter(|&s| s > 0.0) {
        let a = contangle::separability_threshold(s);
        let reduced = four_mode::build_state(p(a, s))
            .unwrap()
            .reduce(&[1, 2])
            .unwrap();
        let nu = reduced.min_pt_eigenvalue(&split).unwrap();
        worst = worst.max((nu - 1.0).abs());
        c.require((nu - 1.0).abs() <= 1e-7, || {
            format!("threshold at s={s}: nu = {nu}")
        });
    }
    c.verdict(
        format!("threshold worst |nu - 1| = {worst:.2e}"),
        start.elapsed(),
    )
}

fn bounding_state_psd() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let grid = Grid::square(0.1, 2.0, 20);
    let mut least = f64::INFINITY;
    for q in grid.points().unwrap() {
        let gap = four_mode::bounding_state_gap(q).unwrap();
        least = least.min(gap);
        c.require(gap >= -1e-8, || {
            format!("a={}, s={}: min eigenvalue {gap:e}", q.a(), q.s())
        });
    }
    c.verdict(
        format!("400 points, least eigenvalue {least:.3e}"),
        start.elapsed(),
    )
}

fn qudit_identities() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    for d in (4..=40).step_by(4) {
        let r = qudit::tangle_report(d).unwrap();
        let n = d as i64;
        let want = (Ratio::new(n, 4), Ratio::new(n, 9), Ratio::new(17 * n, 36));
        let got = (r.exact.three_tangle, r.exact.pairwise, r.exact.one_vs_rest);
        c.require(got == want, || format!("d={d}: {got:?}"));
        c.require(r.exact.monogamy_gap == Ratio::from_integer(0), || {
            format!("d={d}: gap {}", r.exact.monogamy_gap)
        });
    }
    let ghz = copy_tangles(&ghz3()).unwrap();
    let w = copy_tangles(&w3()).unwrap();
    for (name, got, want) in [
        ("GHZ one-vs-rest", ghz.one_vs_rest, 1.0),
        ("W one-vs-rest", w.one_vs_rest, 8.0 / 9.0),
        ("W pairwise", w.pairwise_ab, 4.0 / 9.0),
        ("GHZ pairwise", ghz.pairwise_ab, 0.0),
        ("GHZ three-tangle", ghz.three_tangle, 1.0),
        ("W three-tangle", w.three_tangle, 0.0),
    ] {
        c.require((got - want).abs() <= 1e-10, || format!("{name} = {got}"));
    }
    c.verdict(
        "d = 4..40 exact, per-copy values within 1e-10".into(),
        start.elapsed(),
    )
}

fn nongaussianity() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let at4 = qudit::nongaussianity(4).unwrap();
    let exact = 0.5 + 1.0 / 48.0 - 28.0 / 729.0;
    c.require((at4 - 0.48242).abs() <= 1e-5, || {
        format!("delta(4) = {at4}")
    });
    c.require((at4 - exact).abs() <= 1e-12, || {
        format!("delta(4) = {at4} vs {exact}")
    });
    for d in (4..=96).step_by(4) {
        let v = qudit::nongaussianity(d).unwrap();
        c.require(v >= 0.48, || format!("delta({d}) = {v}"));
    }
    let at200 = qudit::nongaussianity(200).unwrap();
    c.require((at200 - 0.5).abs() <= 1e-10, || {
        format!("delta(200) = {at200}")
    });
    c.verdict(
        format!(
            "delta(4) = {at4:.8}, |delta(200) - 1/2| = {:.1e}",
            (at200 - 0.5).abs()
        ),
        start.elapsed(),
    )
}

fn squashed_bounds() -> Verdict {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut eig = reduced_density(&w3(), &[0]).unwrap().eigenvalues().unwrap();
    eig.sort_by(f64::total_cmp);
    c.require(
        (eig[0] - 1.0 / 3.0).abs() <= 1e-12 && (eig[1] - 2.0 / 3.0).abs() <= 1e-12,
        || format!("W one-qubit spectrum {eig:?}"),
    );
    let mut witness = 0.0;
    for d in (4..=40).step_by(4) {
        let b = qudit::squashed_bounds(d).unwrap();
        let df = d as f64;
        c.require((b.one_vs_rest - 0.47956 * df).abs() <= 1e-4 * df, || {
            format!("d={d}: one_vs_rest {}", b.one_vs_rest)
        });
        c.require(b.tripartite_lower == df / 4.0, || {
            format!("d={d}: tripartite_lower {}", b.tripartite_lower)
        });
        witness = b.w_pair_log_negativity;
        c.require(witness > 0.29, || format!("W pair witness {witness}"));
    }
    c.verdict(
        format!("W spectrum {{1/3, 2/3}}, log2 negativity witness {witness:.4}"),
        start.elapsed(),
    )
}

fn figure_data() -> Verdict {
    let mut c = Checks::default();
    let dir = std::env::temp_dir().join(format!("promiscuity-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("sweep.csv");
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_promiscuity"))
        .args([
            "fourmode",
            "sweep",
            "--a-range",
            "0:2.5",
            "--s-range",
            "0:2.5",
            "--steps",
            "26",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    let elapsed = start.elapsed();
    c.require(status.success(), || format!("sweep exited with {status}"));
    c.require(elapsed < Duration::from_secs(30), || {
        format!("sweep took {elapsed:?}")
    });

    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut reader = csv::Reader::from_path(&out).unwrap();
    for rec in reader.records() {
        let rec = rec.unwrap();
        let f = |i: usize| rec[i].parse::<f64>().unwrap();
        rows.push((f(0), f(1), f(7), f(8)));
    }
    std::fs::remove_dir_all(&dir).ok();
    c.require(rows.len() == 676, || format!("{} rows", rows.len()));

    let (mut res_rows, mut bound_rows) = (0, 0);
    for s_idx in 0..26 {
        let row: Vec<_> = (0..26).map(|a_idx| rows[a_idx * 26 + s_idx]).collect();
        let s = row[0].1;
        let mut res_ok = true;
        let mut bound_ok = true;
        for w in row.windows(2) {
            let increasing = if s > 0.0 {
                w[1].2 > w[0].2
            } else {
                w[1].2 >= w[0].2
            };
            if !increasing {
                res_ok = false;
                c.require(false, || {
                    format!("tau_res falls at s={s}, a={} -> {}", w[0].0, w[1].0)
                });
            }
            if w[1].3 > w[0].3 {
                bound_ok = false;
                c.require(false, || {
                    format!(
                        "tau_tri_bound rises at s={s}, a={} -> {} ({} -> {})",
                        w[0].0, w[1].0, w[0].3, w[1].3
                    )
                });
            }
        }
        res_rows += usize::from(res_ok);
        bound_rows += usize::from(bound_ok);
    }
    let mut v = c.verdict(String::new(), elapsed);
    let tally =
        format!("tau_res monotone in {res_rows}/26 rows, tau_tri_bound in {bound_rows}/26 rows");
    v.detail = if v.passed {
        format!("{tally}; sweep {:.1} ms", elapsed.as_secs_f64() * 1e3)
    } else {
        format!("{tally}; {}", v.detail)
    };
    v
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("benchmark point", benchmark_point),
        ("interpair entanglement", interpair_entanglement),
        ("monogamy surface", monogamy_surface),
        ("strong-monogamy chain", strong_monogamy_chain),
        ("separability structure", separability_structure),
        ("bounding-state PSD condition", bounding_state_psd),
        ("qudit identities", qudit_identities),
        ("non-Gaussianity", nongaussianity),
        ("squashed bounds", squashed_bounds),
        ("figure-data reproduction", figure_data),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {}", i + 1, v.detail);
        passed += usize::from(v.passed);
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
