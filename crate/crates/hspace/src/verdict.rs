//! Theorem verdicts: evaluate each family's constant-curvature conditions,
//! run the brute-force pipeline over sampled points, and combine both into a
//! two-directional consistency verdict with a deterministic JSON report.
//!
//! The constant-curvature criterion is equivalent, per family, to
//!   [2211] ρ_p−ρ_σp = ρ_p−ρ_pq = ε = ε̃ = 0
//!   [321]  f′₆ = ε = ε̃ = 0
//!   [33]   ε = ε̃ = 0
//!   [411]  ρ₄−ρ_σ₄ = ε = γ₁ = γ₂ = 0
//!   [51]   f′₆ = ε = 0
//! Discrete ε-conditions are read straight off the config; functional and
//! differential conditions are checked as sups over the sampled points.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::{condition_quantities, ConditionQuantities};
use crate::curvature::{
    christoffel, fit_constant_curvature, riemann, symmetry_residuals, SymmetryResiduals,
};
use crate::error::{Error, Result};
use crate::metrics::{
    eval_metric, metric_inverse, sample_points, ChartPoint, CoordBox, FamilyConfig, FamilyTag,
};

/// Report schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Condition scalars (relative).
    pub tol_cond: f64,
    /// Constant-curvature residual (relative).
    pub tol_cc: f64,
    /// Per-point K agreement (relative).
    pub tol_k: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_cond: 1e-9,
            tol_cc: 1e-8,
            tol_k: 1e-9,
        }
    }
}

/// One named condition scalar: its sup magnitude and whether it passes.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionValue {
    pub value: f64,
    pub pass: bool,
}

/// Outcome of evaluating the family's conditions over a point sample.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub conditions_hold: bool,
    pub values: BTreeMap<String, ConditionValue>,
}

/// The two-directional verdict for one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremVerdict {
    pub family: FamilyTag,
    pub conditions_hold: bool,
    pub condition_values: BTreeMap<String, ConditionValue>,
    pub numeric_k: f64,
    pub numeric_residual: f64,
    /// conditions_hold ⇒ residual < tol_cc and K constant across points;
    /// ¬conditions_hold ⇒ residual ≥ tol_cc.
    pub consistent: bool,
}

/// Per-point pipeline record.
#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub x: [f64; 6],
    #[serde(rename = "K")]
    pub k: f64,
    pub residual_rel: f64,
    pub sym_residuals: SymRecord,
    pub quantities: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymRecord {
    pub antisym1: f64,
    pub antisym2: f64,
    pub pairsym: f64,
    pub bianchi1: f64,
}

impl From<SymmetryResiduals> for SymRecord {
    fn from(s: SymmetryResiduals) -> Self {
        Self {
            antisym1: s.antisym1,
            antisym2: s.antisym2,
            pairsym: s.pairsym,
            bianchi1: s.bianchi1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    #[serde(rename = "K_mean")]
    pub k_mean: f64,
    #[serde(rename = "K_spread")]
    pub k_spread: f64,
    pub residual_max: f64,
    pub sym_residual_max: f64,
    pub conditions: ConditionReport,
    pub verdict: String,
}

/// Full deterministic run report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub config: FamilyConfig,
    pub points: Vec<PointRecord>,
    pub aggregate: Aggregate,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub bx: Option<CoordBox>,
    pub tol: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 20,
            seed: 1,
            bx: None,
            tol: Tolerances::default(),
        }
    }
}

/// Evaluate the Theorem conditions for `cfg` over `points`.
pub fn check_conditions(cfg: &FamilyConfig, points: &[ChartPoint]) -> Result<ConditionReport> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let quantities: Vec<ConditionQuantities> = points
        .iter()
        .map(|p| condition_quantities(cfg, p))
        .collect::<Result<_>>()?;
    check_conditions_from(cfg, points, &quantities, &Tolerances::default())
}

fn check_conditions_from(
    cfg: &FamilyConfig,
    points: &[ChartPoint],
    quantities: &[ConditionQuantities],
    tol: &Tolerances,
) -> Result<ConditionReport> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut values = BTreeMap::new();
    let mut exact = |name: &str, v: f64| {
        values.insert(
            name.to_string(),
            ConditionValue {
                value: v,
                pass: v == 0.0,
            },
        );
    };

    // Discrete ε-conditions come straight from the config.
    match cfg.family {
        FamilyTag::T2211 | FamilyTag::T321 | FamilyTag::T33 => {
            exact("eps", cfg.eps_f());
            exact("eps_tilde", cfg.eps_tilde_f());
        }
        FamilyTag::T411 | FamilyTag::T51 => {
            exact("eps", cfg.eps_f());
        }
    }

    // Functional condition f′₆ ≡ 0, as a sup over the sampled x⁶ arguments.
    if matches!(cfg.family, FamilyTag::T321 | FamilyTag::T51) {
        let sup = points
            .iter()
            .map(|p| cfg.f6_fn().deriv1(p.0[5]).abs())
            .fold(0.0f64, f64::max);
        values.insert(
            "sup|f6'|".into(),
            ConditionValue {
                value: sup,
                pass: sup <= tol.tol_cond,
            },
        );
    }

    // Differential conditions as sups of closed-form quantity differences.
    let mut sup_diff = |name: String, pick: &dyn Fn(&ConditionQuantities) -> (f64, f64)| {
        let mut sup = 0.0f64;
        let mut scale = 1.0f64;
        for q in quantities {
            let (lhs, rhs) = pick(q);
            sup = sup.max((lhs - rhs).abs());
            scale = scale.max(lhs.abs()).max(rhs.abs());
        }
        values.insert(
            name,
            ConditionValue {
                value: sup,
                pass: sup <= tol.tol_cond * scale,
            },
        );
    };

    match cfg.family {
        FamilyTag::T2211 => {
            for p in [2u8, 4u8] {
                for s in [5u8, 6u8] {
                    sup_diff(format!("sup|rho_{p}-rho_{s}{p}|"), &move |q| {
                        (q.rho_p[&p], q.rho_sigma_p[&(s, p)])
                    });
                }
                sup_diff(format!("sup|rho_{p}-rho_24|"), &move |q| {
                    (q.rho_p[&p], q.rho_pq[&(2, 4)])
                });
            }
        }
        FamilyTag::T411 => {
            for s in [5u8, 6u8] {
                sup_diff(format!("sup|rho_4-rho_{s}4|"), &move |q| {
                    (q.rho_p[&4], q.rho_sigma_p[&(s, 4)])
                });
            }
            sup_diff("sup|gamma_1|".into(), &|q| (q.gamma1.unwrap_or(0.0), 0.0));
            sup_diff("sup|gamma_2|".into(), &|q| (q.gamma2.unwrap_or(0.0), 0.0));
        }
        FamilyTag::T321 | FamilyTag::T33 | FamilyTag::T51 => {}
    }

    let conditions_hold = values.values().all(|c| c.pass);
    Ok(ConditionReport {
        conditions_hold,
        values,
    })
}

/// Run the full per-point pipeline and assemble the deterministic report.
pub fn run_verification(cfg: &FamilyConfig, opts: &VerifyOptions) -> Result<Report> {
    cfg.validate()?;
    let bx = opts.bx.unwrap_or_else(|| cfg.family.default_box());
    let points = sample_points(cfg, opts.samples, opts.seed, &bx)?;

    let records: Vec<PointRecord> = points
        .par_iter()
        .map(|p| point_record(cfg, p))
        .collect::<Result<Vec<_>>>()?;

    let quantities: Vec<ConditionQuantities> = points
        .iter()
        .map(|p| condition_quantities(cfg, p))
        .collect::<Result<_>>()?;
    let conditions = check_conditions_from(cfg, &points, &quantities, &opts.tol)?;

    let k_mean = records.iter().map(|r| r.k).sum::<f64>() / records.len() as f64;
    let k_min = records.iter().map(|r| r.k).fold(f64::INFINITY, f64::min);
    let k_max = records
        .iter()
        .map(|r| r.k)
        .fold(f64::NEG_INFINITY, f64::max);
    let k_spread = k_max - k_min;
    let residual_max = records
        .iter()
        .map(|r| r.residual_rel)
        .fold(0.0f64, f64::max);
    let sym_residual_max = records
        .iter()
        .map(|r| {
            r.sym_residuals
                .antisym1
                .max(r.sym_residuals.antisym2)
                .max(r.sym_residuals.pairsym)
                .max(r.sym_residuals.bianchi1)
        })
        .fold(0.0f64, f64::max);

    let consistent = if conditions.conditions_hold {
        residual_max < opts.tol.tol_cc && k_spread <= opts.tol.tol_k * 1.0f64.max(k_mean.abs())
    } else {
        residual_max >= opts.tol.tol_cc
    };

    let aggregate = Aggregate {
        k_mean,
        k_spread,
        residual_max,
        sym_residual_max,
        conditions: conditions.clone(),
        verdict: if consistent {
            "consistent".into()
        } else {
            "inconsistent".into()
        },
    };

    let report = Report {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").into(),
        seed: opts.seed,
        samples: opts.samples,
        tolerances: opts.tol,
        config: cfg.clone(),
        points: records,
        aggregate,
    };
    report.ensure_finite()?;
    Ok(report)
}

fn point_record(cfg: &FamilyConfig, p: &ChartPoint) -> Result<PointRecord> {
    let m = eval_metric(cfg, p)?;
    let minv = metric_inverse(&m)?;
    let c = christoffel(&m, &minv);
    let rt = riemann(&c);
    let fit = fit_constant_curvature(&rt)?;
    let sym = symmetry_residuals(&rt);
    let quantities = condition_quantities(cfg, p)?.as_map();
    Ok(PointRecord {
        x: p.0,
        k: fit.k,
        residual_rel: fit.residual_rel,
        sym_residuals: sym.into(),
        quantities,
    })
}

/// Sample, pipeline, check conditions: the Theorem in both directions.
pub fn verify_theorem(cfg: &FamilyConfig, samples: usize, seed: u64) -> Result<TheoremVerdict> {
    let opts = VerifyOptions {
        samples,
        seed,
        ..Default::default()
    };
    verify_theorem_with(cfg, &opts)
}

pub fn verify_theorem_with(cfg: &FamilyConfig, opts: &VerifyOptions) -> Result<TheoremVerdict> {
    let report = run_verification(cfg, opts)?;
    Ok(report.verdict())
}

impl Report {
    pub fn verdict(&self) -> TheoremVerdict {
        TheoremVerdict {
            family: self.config.family,
            conditions_hold: self.aggregate.conditions.conditions_hold,
            condition_values: self.aggregate.conditions.values.clone(),
            numeric_k: self.aggregate.k_mean,
            numeric_residual: self.aggregate.residual_max,
            consistent: self.aggregate.verdict == "consistent",
        }
    }

    fn ensure_finite(&self) -> Result<()> {
        let mut ok = self.aggregate.k_mean.is_finite()
            && self.aggregate.k_spread.is_finite()
            && self.aggregate.residual_max.is_finite();
        for r in &self.points {
            ok &= r.k.is_finite() && r.residual_rel.is_finite();
            ok &= r.quantities.values().all(|v| v.is_finite());
        }
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "non-finite value in report; point too close to a singular locus".into(),
            ))
        }
    }

    /// Deterministic JSON: fixed field order, BTreeMap keys, every float
    /// printed with 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        to_fixed_json(self)
    }
}

/// Serialize any value to JSON with floats at fixed 17-significant-digit
/// precision (exact f64 round trip, byte-stable across runs).
pub fn to_fixed_json<T: Serialize>(value: &T) -> Result<String> {
    struct FixedFloats;
    impl serde_json::ser::Formatter for FixedFloats {
        fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
        where
            W: ?Sized + Write,
        {
            write!(writer, "{value:.16e}")
        }
        fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
        where
            W: ?Sized + Write,
        {
            write!(writer, "{value:.7e}")
        }
    }
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

/// One predicted-vs-brute component, worst case over the sampled points.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentComparison {
    pub component: String,
    pub predicted: f64,
    pub brute: f64,
    /// |predicted − brute| / max(1, ‖R‖∞) at the worst point.
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub class: String,
    pub n_components: usize,
    pub max_rel_err: f64,
    pub worst: Option<ComponentComparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub schema: u32,
    pub version: String,
    pub family: FamilyTag,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    /// Full predicted-component classes ([2211] only).
    pub classes: Vec<ClassSummary>,
    /// The anchor components stated explicitly for the family.
    pub anchors: Vec<ComponentComparison>,
    pub anchors_max_rel_err: f64,
    pub sym_residual_max: f64,
    /// Every predicted nonzero coincides with a brute-force nonzero.
    pub predicted_nonzeros_covered: bool,
    pub pass: bool,
    pub notes: Vec<String>,
}

fn component_name(idx: (usize, usize, usize, usize)) -> String {
    format!("R^{}_{}{}{}", idx.0 + 1, idx.1 + 1, idx.2 + 1, idx.3 + 1)
}

/// The component relations stated explicitly for [2211]: R¹₁₁₂ = χ₂g₁₂ and
/// its χ₄-, ρ_σp- and ρ₂₄-partners.
pub const T2211_ANCHORS: [(usize, usize, usize, usize); 8] = [
    (0, 0, 0, 1), // R¹₁₁₂ = χ₂ g₁₂
    (2, 2, 2, 3), // R³₃₃₄ = χ₄ g₃₄
    (4, 0, 4, 1), // R⁵₁₅₂ = ρ₅₂ g₁₂
    (5, 0, 5, 1), // R⁶₁₆₂ = ρ₆₂ g₁₂
    (4, 2, 4, 3), // R⁵₃₅₄ = ρ₅₄ g₃₄
    (5, 2, 5, 3), // R⁶₃₆₄ = ρ₆₄ g₃₄
    (3, 0, 3, 1), // R⁴₁₄₂ = ρ₂₄ g₁₂
    (1, 2, 1, 3), // R²₃₂₄ = ρ₂₄ g₃₄
];

/// Compare the closed-form predictions against the brute-force Riemann
/// tensor over a fresh point sample.
pub fn crosscheck(
    cfg: &FamilyConfig,
    samples: usize,
    seed: u64,
    bx: Option<CoordBox>,
    tol: f64,
) -> Result<CrosscheckReport> {
    cfg.validate()?;
    let bx = bx.unwrap_or_else(|| cfg.family.default_box());
    let points = sample_points(cfg, samples, seed, &bx)?;

    let mut class_acc: BTreeMap<String, ClassSummary> = BTreeMap::new();
    let mut anchor_acc: BTreeMap<String, ComponentComparison> = BTreeMap::new();
    let mut sym_max = 0.0f64;
    let mut covered = true;
    let mut notes = Vec::new();

    for p in &points {
        let m = eval_metric(cfg, p)?;
        let minv = metric_inverse(&m)?;
        let rt = riemann(&christoffel(&m, &minv));
        sym_max = sym_max.max(symmetry_residuals(&rt).max());
        let scale = 1.0f64.max(rt.max_abs());

        let consider =
            |label: &str,
             idx: (usize, usize, usize, usize),
             predicted: f64,
             anchor: bool,
             class_acc: &mut BTreeMap<String, ClassSummary>,
             anchor_acc: &mut BTreeMap<String, ComponentComparison>| {
                let brute = rt.r[idx.0][idx.1][idx.2][idx.3];
                let rel = (predicted - brute).abs() / scale;
                let cmp = ComponentComparison {
                    component: component_name(idx),
                    predicted,
                    brute,
                    rel_err: rel,
                };
                let entry = class_acc
                    .entry(label.to_string())
                    .or_insert_with(|| ClassSummary {
                        class: label.to_string(),
                        n_components: 0,
                        max_rel_err: 0.0,
                        worst: None,
                    });
                entry.n_components += 1;
                if rel >= entry.max_rel_err {
                    entry.max_rel_err = rel;
                    entry.worst = Some(cmp.clone());
                }
                if anchor {
                    let slot = anchor_acc
                        .entry(cmp.component.clone())
                        .or_insert_with(|| cmp.clone());
                    if rel >= slot.rel_err {
                        *slot = cmp;
                    }
                }
            };

        match cfg.family {
            FamilyTag::T2211 => {
                let classes = crate::closedform::predicted_components_2211(cfg, p)?;
                for (label, map) in classes {
                    for (idx, v) in map {
                        let is_anchor = T2211_ANCHORS.contains(&idx);
                        consider(label, idx, v, is_anchor, &mut class_acc, &mut anchor_acc);
                        if v.abs() > 1e-6 * scale
                            && rt.r[idx.0][idx.1][idx.2][idx.3].abs() <= 1e-9 * scale
                        {
                            covered = false;
                        }
                    }
                }
            }
            FamilyTag::T321 | FamilyTag::T33 | FamilyTag::T411 => {
                let validated = crate::closedform::validated_anchor_indices(cfg.family);
                let anchors = crate::closedform::predicted_anchor_components(cfg, p)?;
                for (idx, v) in anchors {
                    let is_validated = validated.contains(&idx);
                    let label = if is_validated {
                        "anchors"
                    } else {
                        "anchors (informational)"
                    };
                    consider(label, idx, v, is_validated, &mut class_acc, &mut anchor_acc);
                }
            }
            FamilyTag::T51 => {}
        }
    }

    if cfg.family == FamilyTag::T51 {
        notes.push(
            "family [51] states no explicit closed-form components; \
             only the identity suite is checked"
                .into(),
        );
    }
    if cfg.family == FamilyTag::T321 && cfg.eps_tilde == Some(1) {
        notes.push(
            "[321] condition quantities involve the double root f5; their \
             closed forms are validated only on eps_tilde = 0 configurations"
                .into(),
        );
    }

    let anchors: Vec<ComponentComparison> = anchor_acc.into_values().collect();
    let anchors_max_rel_err = anchors.iter().map(|a| a.rel_err).fold(0.0f64, f64::max);
    let classes: Vec<ClassSummary> = class_acc.into_values().collect();
    for c in &classes {
        if c.max_rel_err > tol {
            notes.push(format!(
                "component class `{}` deviates from brute force by {:.3e} (worst {})",
                c.class,
                c.max_rel_err,
                c.worst
                    .as_ref()
                    .map(|w| w.component.as_str())
                    .unwrap_or("?")
            ));
        }
    }

    let pass = anchors_max_rel_err <= tol && sym_max < 1e-10 && covered;
    Ok(CrosscheckReport {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").into(),
        family: cfg.family,
        seed,
        samples,
        tol,
        classes,
        anchors,
        anchors_max_rel_err,
        sym_residual_max: sym_max,
        predicted_nonzeros_covered: covered,
        pass,
        notes,
    })
}
