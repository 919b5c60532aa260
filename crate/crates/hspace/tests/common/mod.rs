//! Shared oracles for the integration suites.
//!
//! The finite-difference pipeline here deliberately ignores every jet
//! derivative slot: it reads only metric *values* at shifted points, inverts
//! them with its own scalar elimination, and differentiates numerically. It
//! is the independent slow path the jet pipeline is checked against.
#![allow(dead_code)] // each integration target uses its own subset
#![allow(clippy::needless_range_loop)]

use hspace::metrics::{eval_metric, ChartPoint, FamilyConfig};

pub type Tensor4 = Box<[[[[f64; 6]; 6]; 6]; 6]>;

pub fn metric_values(cfg: &FamilyConfig, x: &[f64; 6]) -> [[f64; 6]; 6] {
    eval_metric(cfg, &ChartPoint(*x))
        .expect("oracle point must be regular")
        .values()
}

/// Plain scalar Gauss-Jordan inverse, independent of the jet elimination.
pub fn invert6(a: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut m = [[0.0; 12]; 6];
    for i in 0..6 {
        m[i][..6].copy_from_slice(&a[i]);
        m[i][6 + i] = 1.0;
    }
    for col in 0..6 {
        let pivot = (col..6)
            .max_by(|&r, &s| m[r][col].abs().partial_cmp(&m[s][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        let d = m[col][col];
        assert!(d.abs() > 0.0, "singular matrix in oracle");
        for j in 0..12 {
            m[col][j] /= d;
        }
        for r in 0..6 {
            if r != col {
                let f = m[r][col];
                for j in 0..12 {
                    m[r][j] -= f * m[col][j];
                }
            }
        }
    }
    let mut out = [[0.0; 6]; 6];
    for i in 0..6 {
        out[i].copy_from_slice(&m[i][6..]);
    }
    out
}

/// Γ^i_{jk} from central differences of the metric values.
pub fn fd_gamma(cfg: &FamilyConfig, x: &[f64; 6], h: f64) -> [[[f64; 6]; 6]; 6] {
    let ginv = invert6(&metric_values(cfg, x));
    // dg[k][i][j] = ∂ₖ g_ij
    let mut dg = [[[0.0; 6]; 6]; 6];
    for k in 0..6 {
        let mut xp = *x;
        xp[k] += h;
        let mut xm = *x;
        xm[k] -= h;
        let gp = metric_values(cfg, &xp);
        let gm = metric_values(cfg, &xm);
        for i in 0..6 {
            for j in 0..6 {
                dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
            }
        }
    }
    let mut gamma = [[[0.0; 6]; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                let mut v = 0.0;
                for m in 0..6 {
                    v += ginv[i][m] * (dg[j][m][k] + dg[k][m][j] - dg[m][j][k]);
                }
                gamma[i][j][k] = 0.5 * v;
            }
        }
    }
    gamma
}

fn fd_riemann_step(cfg: &FamilyConfig, x: &[f64; 6], h: f64) -> Tensor4 {
    let gamma = fd_gamma(cfg, x, h);
    // dgamma[l][i][j][k] = ∂ₗ Γ^i_{jk}
    let mut dgamma = vec![[[[0.0; 6]; 6]; 6]; 6];
    for l in 0..6 {
        let mut xp = *x;
        xp[l] += h;
        let mut xm = *x;
        xm[l] -= h;
        let gp = fd_gamma(cfg, &xp, h);
        let gm = fd_gamma(cfg, &xm, h);
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    dgamma[l][i][j][k] = (gp[i][j][k] - gm[i][j][k]) / (2.0 * h);
                }
            }
        }
    }
    let mut r: Tensor4 = Box::new([[[[0.0; 6]; 6]; 6]; 6]);
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    let mut v = dgamma[k][i][j][l] - dgamma[l][i][j][k];
                    for m in 0..6 {
                        v += gamma[i][m][k] * gamma[m][j][l] - gamma[i][m][l] * gamma[m][j][k];
                    }
                    r[i][j][k][l] = v;
                }
            }
        }
    }
    r
}

/// Finite-difference Riemann tensor with one Richardson extrapolation level,
/// killing the O(h²) truncation term.
pub fn fd_riemann(cfg: &FamilyConfig, x: &[f64; 6], h: f64) -> Tensor4 {
    let coarse = fd_riemann_step(cfg, x, h);
    let fine = fd_riemann_step(cfg, x, h / 2.0);
    let mut out: Tensor4 = Box::new([[[[0.0; 6]; 6]; 6]; 6]);
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    out[i][j][k][l] = (4.0 * fine[i][j][k][l] - coarse[i][j][k][l]) / 3.0;
                }
            }
        }
    }
    out
}

pub fn max_abs4(t: &Tensor4) -> f64 {
    let mut m = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    m = m.max(t[i][j][k][l].abs());
                }
            }
        }
    }
    m
}

/// Frobenius norm of S^i_{jkl} = δ^i_k g_jl − δ^i_l g_jk.
pub fn s_norm(g: &[[f64; 6]; 6]) -> f64 {
    let mut acc = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    let s = if i == k { g[j][l] } else { 0.0 } - if i == l { g[j][k] } else { 0.0 };
                    acc += s * s;
                }
            }
        }
    }
    acc.sqrt()
}

/// The per-family fixtures that violate exactly one Theorem condition.
pub const NECESSITY_FIXTURES: [&str; 5] = [
    "f2211_eps1",
    "f321_fprime",
    "f33_eps1",
    "f411_gamma",
    "f51_eps1",
];
