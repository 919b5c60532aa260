//! Finite-difference validation of the jet derivative slots: every metric
//! gradient and Hessian entry is compared against central differences of the
//! metric values at 20 seeded points per family.

mod common;

use common::metric_values;
use hspace::fixtures;
use hspace::metrics::{eval_metric, sample_points, singular_distance, MIN_SINGULAR_DISTANCE};

const STEP: f64 = 1e-4;
const TOL: f64 = 1e-6;

#[test]
fn metric_first_derivatives_match_central_differences() {
    for name in fixtures::NAMES {
        let cfg = fixtures::load(name).unwrap();
        let pts = sample_points(&cfg, 20, 99, &cfg.family.default_box()).unwrap();
        for p in &pts {
            let m = eval_metric(&cfg, p).unwrap();
            let scale = 1.0f64.max(m.max_abs());
            for k in 0..6 {
                let mut xp = p.0;
                xp[k] += STEP;
                let mut xm = p.0;
                xm[k] -= STEP;
                let gp = metric_values(&cfg, &xp);
                let gm = metric_values(&cfg, &xm);
                for i in 0..6 {
                    for j in 0..6 {
                        let fd = (gp[i][j] - gm[i][j]) / (2.0 * STEP);
                        let err = (fd - m.g[i][j].grad[k]).abs();
                        assert!(
                            err <= TOL * scale,
                            "{name} ∂{k} g[{i}][{j}]: jet {} fd {fd}",
                            m.g[i][j].grad[k]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn metric_second_derivatives_match_central_differences() {
    for name in fixtures::NAMES {
        let cfg = fixtures::load(name).unwrap();
        let pts = sample_points(&cfg, 6, 98, &cfg.family.default_box()).unwrap();
        for p in &pts {
            let m = eval_metric(&cfg, p).unwrap();
            let g0 = m.values();
            let scale = 1.0f64.max(m.max_abs());
            for k in 0..6 {
                for l in k..6 {
                    let fd_entry = |i: usize, j: usize| -> f64 {
                        if k == l {
                            let mut xp = p.0;
                            xp[k] += STEP;
                            let mut xm = p.0;
                            xm[k] -= STEP;
                            let gp = metric_values(&cfg, &xp);
                            let gm = metric_values(&cfg, &xm);
                            (gp[i][j] - 2.0 * g0[i][j] + gm[i][j]) / (STEP * STEP)
                        } else {
                            let mut xpp = p.0;
                            xpp[k] += STEP;
                            xpp[l] += STEP;
                            let mut xpm = p.0;
                            xpm[k] += STEP;
                            xpm[l] -= STEP;
                            let mut xmp = p.0;
                            xmp[k] -= STEP;
                            xmp[l] += STEP;
                            let mut xmm = p.0;
                            xmm[k] -= STEP;
                            xmm[l] -= STEP;
                            (metric_values(&cfg, &xpp)[i][j]
                                - metric_values(&cfg, &xpm)[i][j]
                                - metric_values(&cfg, &xmp)[i][j]
                                + metric_values(&cfg, &xmm)[i][j])
                                / (4.0 * STEP * STEP)
                        }
                    };
                    for i in 0..6 {
                        for j in 0..6 {
                            let fd = fd_entry(i, j);
                            let err = (fd - m.g[i][j].hess[k][l]).abs();
                            // second differences of entries spanning 1e6 lose
                            // more bits; scale-relative 1e-6 still holds
                            assert!(
                                err <= TOL * scale,
                                "{name} ∂{k}∂{l} g[{i}][{j}]: jet {} fd {fd}",
                                m.g[i][j].hess[k][l]
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn accepted_samples_stay_clear_of_singular_loci() {
    for name in fixtures::NAMES {
        let cfg = fixtures::load(name).unwrap();
        let pts = sample_points(&cfg, 40, 97, &cfg.family.default_box()).unwrap();
        for p in &pts {
            assert!(singular_distance(&cfg, p) >= MIN_SINGULAR_DISTANCE);
        }
    }
}
