//! Metric evaluation for the five families: jet-valued g_ij, inverse metric,
//! signature, singular-locus guards and deterministic point sampling.

mod config;
mod forms;

pub use config::{ChartPoint, CoordBox, FamilyConfig, FamilyTag, FieldUse, MisprintPolicy, Signs};

use nalgebra::SMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jets::Jet2;

/// Minimum accepted distance-proxy from a singular locus during sampling.
pub const MIN_SINGULAR_DISTANCE: f64 = 0.05;

/// Relative determinant threshold for metric inversion.
pub const DET_THRESHOLD: f64 = 1e-10;

/// The metric at one chart point: symmetric 6×6 of jets, so every entry
/// carries g_ij, ∂g_ij and ∂∂g_ij, plus the characteristic-root values.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub family: FamilyTag,
    pub g: [[Jet2; 6]; 6],
    /// Characteristic root value per coordinate (f₁..f₆ with multiplicities).
    pub roots: [f64; 6],
}

impl MetricJet {
    /// Wrap a hand-built jet matrix (test fixtures, non-family metrics).
    /// The matrix must be symmetric in the value slot.
    pub fn from_raw(family: FamilyTag, g: [[Jet2; 6]; 6], roots: [f64; 6]) -> Result<Self> {
        for i in 0..6 {
            for j in 0..6 {
                if g[i][j].val != g[j][i].val {
                    return Err(Error::InvalidArgument(format!(
                        "asymmetric metric entry ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { family, g, roots })
    }

    /// Value slots as a plain matrix.
    pub fn values(&self) -> [[f64; 6]; 6] {
        let mut out = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i][j] = self.g[i][j].val;
            }
        }
        out
    }

    /// First derivatives: `dg[i][j][k]` = ∂ₖ g_ij.
    pub fn first_derivs(&self) -> [[[f64; 6]; 6]; 6] {
        let mut out = [[[0.0; 6]; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                out[i][j] = self.g[i][j].grad;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                m = m.max(self.g[i][j].val.abs());
            }
        }
        m
    }
}

/// Evaluate the family metric with all first and second partials at `p`.
pub fn eval_metric(cfg: &FamilyConfig, p: &ChartPoint) -> Result<MetricJet> {
    cfg.validate()?;
    if !p.is_finite() {
        return Err(Error::InvalidArgument("non-finite chart point".into()));
    }
    let raw = forms::build(cfg, p).map_err(|e| match e {
        Error::DivisionNearZero { value, guard } => Error::SingularPoint(format!(
            "canonical-form denominator {value:.3e} under guard {guard:.3e} at {:?}",
            p.0
        )),
        other => other,
    })?;
    Ok(MetricJet {
        family: cfg.family,
        g: raw.g,
        roots: raw.roots,
    })
}

/// Jet-valued inverse metric by Gaussian elimination with partial pivoting
/// carried out in jet arithmetic, so g⁻¹ comes with exact first and second
/// derivative slots. g·g⁻¹ = id through second order.
///
/// The determinant gate compares |det| against the product of row maxima
/// (a Hadamard-style scale), which stays meaningful when the entries span
/// orders of magnitude across blocks.
pub fn metric_inverse(m: &MetricJet) -> Result<MetricJet> {
    let vals = m.values();
    let det = det6(&vals);
    let row_scale: f64 = vals
        .iter()
        .map(|row| row.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
        .product();
    let threshold = DET_THRESHOLD * row_scale;
    if det.abs() <= threshold {
        return Err(Error::NearSingularMetric { det, threshold });
    }

    // Augmented [G | I] elimination in jets.
    let mut a: Vec<Vec<Jet2>> = (0..6)
        .map(|i| {
            let mut row = Vec::with_capacity(12);
            row.extend_from_slice(&m.g[i]);
            for j in 0..6 {
                row.push(if i == j { Jet2::one() } else { Jet2::zero() });
            }
            row
        })
        .collect();

    for col in 0..6 {
        let pivot_row = (col..6)
            .max_by(|&r, &s| {
                a[r][col]
                    .val
                    .abs()
                    .partial_cmp(&a[s][col].val.abs())
                    .unwrap()
            })
            .unwrap();
        a.swap(col, pivot_row);
        let pivot_inv = a[col][col]
            .inv()
            .map_err(|_| Error::NearSingularMetric { det, threshold })?;
        for j in col..12 {
            a[col][j] = a[col][j] * pivot_inv;
        }
        for r in 0..6 {
            if r == col {
                continue;
            }
            let factor = a[r][col];
            if factor == Jet2::zero() {
                continue;
            }
            for j in col..12 {
                a[r][j] = a[r][j] - factor * a[col][j];
            }
        }
    }

    let mut inv = [[Jet2::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            inv[i][j] = a[i][6 + j];
        }
    }
    // Symmetrize: the inverse of a symmetric matrix is symmetric; elimination
    // introduces only rounding-level asymmetry.
    for i in 0..6 {
        for j in (i + 1)..6 {
            let avg = (inv[i][j] + inv[j][i]) * 0.5;
            inv[i][j] = avg;
            inv[j][i] = avg;
        }
    }
    Ok(MetricJet {
        family: m.family,
        g: inv,
        roots: m.roots,
    })
}

/// Determinant of the value matrix by scalar LU with partial pivoting.
fn det6(g: &[[f64; 6]; 6]) -> f64 {
    let mut a = *g;
    let mut det = 1.0;
    for col in 0..6 {
        let mut pivot = col;
        for r in (col + 1)..6 {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..6 {
            let f = a[r][col] / a[col][col];
            for c in col..6 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Eigenvalue sign counts (n_plus, n_minus) of the metric value matrix.
/// An eigenvalue within the degeneracy band counts as neither and the metric
/// is reported near-singular.
pub fn signature(m: &MetricJet) -> Result<(usize, usize)> {
    let vals = m.values();
    let mat = SMatrix::<f64, 6, 6>::from_fn(|i, j| vals[i][j]);
    let eigen = mat.symmetric_eigen();
    let scale = m.max_abs().max(1.0);
    let band = 1e-10 * scale;
    let mut plus = 0;
    let mut minus = 0;
    for &lambda in eigen.eigenvalues.iter() {
        if lambda > band {
            plus += 1;
        } else if lambda < -band {
            minus += 1;
        } else {
            return Err(Error::NearSingularMetric {
                det: lambda,
                threshold: band,
            });
        }
    }
    Ok((plus, minus))
}

/// Cheap lower-bound proxy for the distance from the singular locus: the
/// smallest of |A|, |Ã| (where the family has them) and all pairwise root
/// differences across distinct root groups. Zero means the point is on the
/// locus; small values mean the canonical-form denominators are blowing up.
pub fn singular_distance(cfg: &FamilyConfig, p: &ChartPoint) -> f64 {
    let x = &p.0;
    let eps = cfg.eps_f();
    let mut crit: Vec<f64> = Vec::with_capacity(8);

    let group_vals: Vec<f64> = match cfg.family {
        FamilyTag::T2211 => {
            let ept = cfg.eps_tilde_f();
            crit.push((eps * x[0] + cfg.theta_fn().eval(x[1])).abs());
            crit.push((ept * x[2] + cfg.omega_fn().eval(x[3])).abs());
            vec![
                eps * x[1],
                ept * x[3] + cfg.a_val(),
                cfg.f5_fn().eval(x[4]),
                cfg.f6_fn().eval(x[5]),
            ]
        }
        FamilyTag::T321 => {
            let ept = cfg.eps_tilde_f();
            crit.push((eps * x[1] + cfg.theta_fn().eval(x[2])).abs());
            crit.push((ept * x[3] + cfg.omega_fn().eval(x[4])).abs());
            vec![eps * x[2], ept * x[4] + cfg.a_val(), cfg.f6_fn().eval(x[5])]
        }
        FamilyTag::T33 => {
            let ept = cfg.eps_tilde_f();
            crit.push((eps * x[1] + cfg.theta_fn().eval(x[2])).abs());
            let at_coord = if cfg.misprints.t33_atilde_mirror {
                4
            } else {
                3
            };
            crit.push((ept * x[at_coord] + cfg.omega_fn().eval(x[5])).abs());
            vec![eps * x[2], ept * x[5] + cfg.a_val()]
        }
        FamilyTag::T411 => {
            crit.push((eps * x[2] + cfg.theta_fn().eval(x[3])).abs());
            vec![eps * x[3], cfg.f5_fn().eval(x[4]), cfg.f6_fn().eval(x[5])]
        }
        FamilyTag::T51 => {
            crit.push((eps * x[3] + cfg.theta_fn().eval(x[4])).abs());
            vec![eps * x[4], cfg.f6_fn().eval(x[5])]
        }
    };

    for i in 0..group_vals.len() {
        for j in (i + 1)..group_vals.len() {
            crit.push((group_vals[i] - group_vals[j]).abs());
        }
    }
    crit.into_iter().fold(f64::INFINITY, f64::min)
}

/// Deterministic seeded rejection sampling: uniform draws in `bx`, keeping
/// points with `singular_distance ≥ MIN_SINGULAR_DISTANCE`. Returns exactly
/// `n` points or fails after 10000·n rejections.
pub fn sample_points(
    cfg: &FamilyConfig,
    n: usize,
    seed: u64,
    bx: &CoordBox,
) -> Result<Vec<ChartPoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be ≥ 1".into()));
    }
    for (lo, hi) in bx {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "bad sampling interval [{lo}, {hi}]"
            )));
        }
    }
    cfg.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = 10_000u64 * n as u64;
    let mut rejections = 0u64;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut x = [0.0; 6];
        for (k, slot) in x.iter_mut().enumerate() {
            *slot = rng.random_range(bx[k].0..bx[k].1);
        }
        let p = ChartPoint(x);
        if singular_distance(cfg, &p) >= MIN_SINGULAR_DISTANCE {
            out.push(p);
        } else {
            rejections += 1;
            if rejections >= limit {
                return Err(Error::SamplingExhausted {
                    rejections,
                    requested: n,
                });
            }
        }
    }
    Ok(out)
}
