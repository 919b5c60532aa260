//! Brute-force curvature pipeline.
//!
//! Everything here is assembled from the jet slots of the metric: Christoffel
//! symbols from first derivatives, their derivatives from second derivatives
//! plus the inverse-metric jets, and the Riemann tensor
//!
//!   R^i_{jkl} = ∂ₖΓ^i_{jl} − ∂ₗΓ^i_{jk} + Γ^i_{mk}Γ^m_{jl} − Γ^i_{ml}Γ^m_{jk}.
//!
//! The sign convention makes a round sphere block come out with positive
//! fitted curvature under `fit_constant_curvature`.

use crate::error::{Error, Result};
use crate::jets::Jet2;
use crate::metrics::MetricJet;

/// Γ^i_{jk} values and first derivatives at one point.
#[derive(Debug, Clone)]
pub struct Christoffel {
    /// `gamma[i][j][k]` = Γ^i_{jk}; symmetric in (j,k).
    pub gamma: [[[f64; 6]; 6]; 6],
    /// `dgamma[i][j][k][l]` = ∂ₗ Γ^i_{jk}.
    pub dgamma: Box<[[[[f64; 6]; 6]; 6]; 6]>,
    /// Metric values, kept for index lowering downstream.
    pub g: [[f64; 6]; 6],
}

/// Dense R^i_{jkl} plus the metric values used for lowering.
#[derive(Debug, Clone)]
pub struct RiemannTensor {
    pub r: Box<[[[[f64; 6]; 6]; 6]; 6]>,
    pub g: [[f64; 6]; 6],
}

/// Least-squares constant-curvature fit of R against
/// S^i_{jkl} = δ^i_k g_{jl} − δ^i_l g_{jk}.
#[derive(Debug, Clone, Copy)]
pub struct KFit {
    pub k: f64,
    pub residual_rel: f64,
    pub n_terms: usize,
}

/// Max-norm relative residuals of the classical identities on the lowered
/// tensor: (first antisymmetry, second antisymmetry, pair symmetry, first
/// Bianchi).
#[derive(Debug, Clone, Copy)]
pub struct SymmetryResiduals {
    pub antisym1: f64,
    pub antisym2: f64,
    pub pairsym: f64,
    pub bianchi1: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.antisym1
            .max(self.antisym2)
            .max(self.pairsym)
            .max(self.bianchi1)
    }
}

/// Levi-Civita connection: Γ^i_{jk} = ½ g^{im}(∂ⱼg_mk + ∂ₖg_mj − ∂_m g_jk),
/// with ∂Γ assembled from metric Hessians and inverse-metric gradients.
pub fn christoffel(m: &MetricJet, minv: &MetricJet) -> Christoffel {
    let mut gamma = [[[0.0; 6]; 6]; 6];
    let mut dgamma = Box::new([[[[0.0; 6]; 6]; 6]; 6]);

    for i in 0..6 {
        for j in 0..6 {
            for k in j..6 {
                let mut val = 0.0;
                let mut der = [0.0; 6];
                for mi in 0..6 {
                    let bracket = m.g[mi][k].grad[j] + m.g[mi][j].grad[k] - m.g[j][k].grad[mi];
                    val += minv.g[i][mi].val * bracket;
                    for l in 0..6 {
                        let dbracket =
                            m.g[mi][k].hess[j][l] + m.g[mi][j].hess[k][l] - m.g[j][k].hess[mi][l];
                        der[l] += minv.g[i][mi].grad[l] * bracket + minv.g[i][mi].val * dbracket;
                    }
                }
                gamma[i][j][k] = 0.5 * val;
                gamma[i][k][j] = 0.5 * val;
                for l in 0..6 {
                    dgamma[i][j][k][l] = 0.5 * der[l];
                    dgamma[i][k][j][l] = 0.5 * der[l];
                }
            }
        }
    }
    Christoffel {
        gamma,
        dgamma,
        g: m.values(),
    }
}

/// Curvature of the connection. Antisymmetry in the last index pair holds by
/// construction.
pub fn riemann(c: &Christoffel) -> RiemannTensor {
    let mut r = Box::new([[[[0.0; 6]; 6]; 6]; 6]);
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in (k + 1)..6 {
                    let mut v = c.dgamma[i][j][l][k] - c.dgamma[i][j][k][l];
                    for mi in 0..6 {
                        v += c.gamma[i][mi][k] * c.gamma[mi][j][l]
                            - c.gamma[i][mi][l] * c.gamma[mi][j][k];
                    }
                    r[i][j][k][l] = v;
                    r[i][j][l][k] = -v;
                }
            }
        }
    }
    RiemannTensor { r, g: c.g }
}

impl RiemannTensor {
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    for l in 0..6 {
                        m = m.max(self.r[i][j][k][l].abs());
                    }
                }
            }
        }
        m
    }

    /// Lowered tensor R_ijkl = g_im R^m_jkl.
    pub fn lowered(&self) -> Box<[[[[f64; 6]; 6]; 6]; 6]> {
        let mut low = Box::new([[[[0.0; 6]; 6]; 6]; 6]);
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    for l in 0..6 {
                        let mut v = 0.0;
                        for mi in 0..6 {
                            v += self.g[i][mi] * self.r[mi][j][k][l];
                        }
                        low[i][j][k][l] = v;
                    }
                }
            }
        }
        low
    }
}

/// Global least-squares K for R ≈ K·S over all 6⁴ components.
pub fn fit_constant_curvature(rt: &RiemannTensor) -> Result<KFit> {
    let mut rs = 0.0;
    let mut ss = 0.0;
    let mut rr = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    let s = kron(i, k) * rt.g[j][l] - kron(i, l) * rt.g[j][k];
                    let r = rt.r[i][j][k][l];
                    rs += r * s;
                    ss += s * s;
                    rr += r * r;
                }
            }
        }
    }
    if ss == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let k = rs / ss;
    // ‖R − K·S‖² = ‖R‖² − 2K⟨R,S⟩ + K²‖S‖², clamped against rounding
    let res2 = (rr - 2.0 * k * rs + k * k * ss).max(0.0);
    let scale = 1.0f64.max(rr.sqrt()).max(k.abs() * ss.sqrt());
    Ok(KFit {
        k,
        residual_rel: res2.sqrt() / scale,
        n_terms: 6usize.pow(4),
    })
}

fn kron(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Symmetry residuals of the lowered tensor, relative to max(1, ‖R_low‖∞).
pub fn symmetry_residuals(rt: &RiemannTensor) -> SymmetryResiduals {
    let low = rt.lowered();
    let mut scale = 1.0f64;
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    scale = scale.max(low[i][j][k][l].abs());
                }
            }
        }
    }
    let mut a1 = 0.0f64;
    let mut a2 = 0.0f64;
    let mut ps = 0.0f64;
    let mut b1 = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                for l in 0..6 {
                    a1 = a1.max((low[i][j][k][l] + low[j][i][k][l]).abs());
                    a2 = a2.max((low[i][j][k][l] + low[i][j][l][k]).abs());
                    ps = ps.max((low[i][j][k][l] - low[k][l][i][j]).abs());
                    b1 = b1.max((low[i][j][k][l] + low[i][k][l][j] + low[i][l][j][k]).abs());
                }
            }
        }
    }
    SymmetryResiduals {
        antisym1: a1 / scale,
        antisym2: a2 / scale,
        pairsym: ps / scale,
        bianchi1: b1 / scale,
    }
}

/// How the comma-derivative in the field equation residual is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// ∇ₖ h_ij = ∂ₖ h_ij − Γ^l_{ki} h_lj − Γ^l_{kj} h_il (the tensorial reading).
    Covariant,
    /// Plain partial derivatives, for exploration only.
    Partial,
}

/// Residual of h_{ij,k} = 2 g_ij φ_k + g_ik φ_j + g_jk φ_i in max norm over
/// (i,j,k). `h` must be symmetric with populated first-derivative slots.
pub fn eisenhart_residual(
    m: &MetricJet,
    c: &Christoffel,
    h: &[[Jet2; 6]; 6],
    phi_grad: &[f64; 6],
) -> Result<f64> {
    eisenhart_residual_with_mode(m, c, h, phi_grad, DerivativeMode::Covariant)
}

pub fn eisenhart_residual_with_mode(
    m: &MetricJet,
    c: &Christoffel,
    h: &[[Jet2; 6]; 6],
    phi_grad: &[f64; 6],
    mode: DerivativeMode,
) -> Result<f64> {
    for i in 0..6 {
        for j in 0..6 {
            if h[i][j].val != h[j][i].val || h[i][j].grad != h[j][i].grad {
                return Err(Error::InvalidArgument(format!(
                    "h must be symmetric; entry ({i},{j}) differs from ({j},{i})"
                )));
            }
            if !h[i][j].is_finite() {
                return Err(Error::InvalidArgument("non-finite h entry".into()));
            }
        }
    }
    if phi_grad.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument("non-finite phi gradient".into()));
    }

    let g = m.values();
    let mut worst = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            for k in 0..6 {
                let mut nabla = h[i][j].grad[k];
                if mode == DerivativeMode::Covariant {
                    for l in 0..6 {
                        nabla -= c.gamma[l][k][i] * h[l][j].val;
                        nabla -= c.gamma[l][k][j] * h[i][l].val;
                    }
                }
                let rhs =
                    2.0 * g[i][j] * phi_grad[k] + g[i][k] * phi_grad[j] + g[j][k] * phi_grad[i];
                worst = worst.max((nabla - rhs).abs());
            }
        }
    }
    Ok(worst)
}
