//! The five canonical metric forms, evaluated in jet arithmetic.
//!
//! Coordinates are 0-based in code: `x[0]..x[5]` are the chart coordinates
//! x¹..x⁶. Line-element coefficients are translated to matrix entries with
//! the usual convention that a term `c · dxᵃdxᵇ` (a ≠ b) contributes
//! g_ab = c/2, so e.g. `2A dx¹dx²` gives g₁₂ = A times the block prefactor.

use crate::error::Result;
use crate::funcspec::FunctionSpec;
use crate::jets::{compose, Jet2};

use super::config::{ChartPoint, FamilyConfig, FamilyTag};

/// Symmetric 6×6 of jets plus the characteristic-root values at the point.
pub(super) struct RawMetric {
    pub g: [[Jet2; 6]; 6],
    pub roots: [f64; 6],
}

fn sym_set(g: &mut [[Jet2; 6]; 6], i: usize, j: usize, v: Jet2) {
    g[i][j] = v;
    g[j][i] = v;
}

fn var(p: &ChartPoint, k: usize) -> Jet2 {
    Jet2::variable(p.0[k], k)
}

fn func(f: &FunctionSpec, p: &ChartPoint, k: usize) -> Jet2 {
    compose(f, var(p, k))
}

/// Per-coordinate root values taken from per-group jets.
fn spread_roots(tag: FamilyTag, group_vals: &[Jet2]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (gid, members) in tag.root_groups().iter().enumerate() {
        for &c in *members {
            out[c] = group_vals[gid].val;
        }
    }
    out
}

pub(super) fn build(cfg: &FamilyConfig, p: &ChartPoint) -> Result<RawMetric> {
    match cfg.family {
        FamilyTag::T2211 => build_2211(cfg, p),
        FamilyTag::T321 => build_321(cfg, p),
        FamilyTag::T33 => build_33(cfg, p),
        FamilyTag::T411 => build_411(cfg, p),
        FamilyTag::T51 => build_51(cfg, p),
    }
}

/// [2211]: two 2-blocks (x¹x², x³x⁴) and two simple coordinates x⁵, x⁶.
///
/// ```text
/// g = e₂(f₄−f₂)²Π_σ(f_σ−f₂){2A dx¹dx² − A²Σ₁(dx²)²}
///   + e₄(f₂−f₄)²Π_σ(f_σ−f₄){2Ã dx³dx⁴ − Ã²Σ₂(dx⁴)²}
///   + Σ_σ e_σ Π′ᵢ(fᵢ−f_σ)(dx^σ)²
/// ```
/// with f₂ = εx², f₄ = ε̃x⁴ + a, A = εx¹ + θ(x²), Ã = ε̃x³ + ω(x⁴).
fn build_2211(cfg: &FamilyConfig, p: &ChartPoint) -> Result<RawMetric> {
    let eps = cfg.eps_f();
    let ept = cfg.eps_tilde_f();

    let f2 = eps * var(p, 1);
    let f4 = ept * var(p, 3) + cfg.a_val();
    let f5 = func(cfg.f5_fn(), p, 4);
    let f6 = func(cfg.f6_fn(), p, 5);
    let big_a = eps * var(p, 0) + func(cfg.theta_fn(), p, 1);
    let big_at = ept * var(p, 2) + func(cfg.omega_fn(), p, 3);

    let s1 = 2.0 * (f4 - f2).inv()? + (f5 - f2).inv()? + (f6 - f2).inv()?;
    let s2 = 2.0 * (f2 - f4).inv()? + (f5 - f4).inv()? + (f6 - f4).inv()?;

    let p2 = cfg.sign(2) * (f4 - f2).sq() * (f5 - f2) * (f6 - f2);
    let p4 = cfg.sign(4) * (f2 - f4).sq() * (f5 - f4) * (f6 - f4);

    let mut g = [[Jet2::zero(); 6]; 6];
    sym_set(&mut g, 0, 1, p2 * big_a);
    sym_set(&mut g, 1, 1, -(p2 * big_a.sq() * s1));
    sym_set(&mut g, 2, 3, p4 * big_at);
    sym_set(&mut g, 3, 3, -(p4 * big_at.sq() * s2));
    sym_set(
        &mut g,
        4,
        4,
        cfg.sign(5) * (f2 - f5).sq() * (f4 - f5).sq() * (f6 - f5),
    );
    sym_set(
        &mut g,
        5,
        5,
        cfg.sign(6) * (f2 - f6).sq() * (f4 - f6).sq() * (f5 - f6),
    );

    Ok(RawMetric {
        g,
        roots: spread_roots(cfg.family, &[f2, f4, f5, f6]),
    })
}

/// [321]: a 3-block (x¹x²x³), a 2-block (x⁴x⁵) and the simple x⁶.
///
/// ```text
/// g = e₃(f₅−f₃)²(f₆−f₃){(dx²)² + 4A dx¹dx³ + 2(εx¹−2AΣ₁)dx²dx³
///       + ((εx¹)²−4εx¹AΣ₁+4A²Σ₃)(dx³)²}
///   + e₅(f₃−f₅)³(f₆−f₅){2Ã dx⁴dx⁵ − Σ₄Ã²(dx⁵)²}
///   + e₆·(last term per misprint policy)·(dx⁶)²
/// ```
/// with f₃ = εx³, f₅ = ε̃x⁵ + a, A = εx² + θ(x³), Ã = ε̃x⁴ + ω(x⁵).
fn build_321(cfg: &FamilyConfig, p: &ChartPoint) -> Result<RawMetric> {
    let eps = cfg.eps_f();
    let ept = cfg.eps_tilde_f();

    let f3 = eps * var(p, 2);
    let f5 = ept * var(p, 4) + cfg.a_val();
    let f6 = func(cfg.f6_fn(), p, 5);
    let big_a = eps * var(p, 1) + func(cfg.theta_fn(), p, 2);
    let big_at = ept * var(p, 3) + func(cfg.omega_fn(), p, 4);
    let ex1 = eps * var(p, 0);

    let inv63 = (f6 - f3).inv()?;
    let inv53 = (f5 - f3).inv()?;
    let s1 = inv63 + 2.0 * inv53;
    let s2 = inv63.sq() + 2.0 * inv53.sq();
    let s3 = 0.5 * (s1.sq() - s2);
    let s4 = 3.0 * (f3 - f5).inv()? + (f6 - f5).inv()?;

    let q3 = cfg.sign(3) * (f5 - f3).sq() * (f6 - f3);
    let q5 = cfg.sign(5) * (f3 - f5).powi(3) * (f6 - f5);

    let mut g = [[Jet2::zero(); 6]; 6];
    sym_set(&mut g, 1, 1, q3);
    sym_set(&mut g, 0, 2, 2.0 * big_a * q3);
    sym_set(&mut g, 1, 2, (ex1 - 2.0 * big_a * s1) * q3);
    sym_set(
        &mut g,
        2,
        2,
        (ex1.sq() - 4.0 * ex1 * big_a * s1 + 4.0 * big_a.sq() * s3) * q3,
    );
    sym_set(&mut g, 3, 4, big_at * q5);
    sym_set(&mut g, 4, 4, -(s4 * big_at.sq() * q5));
    let g66 = if cfg.misprints.t321_g66_canonical {
        cfg.sign(6) * (f3 - f6).powi(3) * (f5 - f6).sq()
    } else {
        cfg.sign(6) * (f5 - f6).powi(5)
    };
    sym_set(&mut g, 5, 5, g66);

    Ok(RawMetric {
        g,
        roots: spread_roots(cfg.family, &[f3, f5, f6]),
    })
}

/// [33]: two mirror-image 3-blocks (x¹x²x³ and x⁴x⁵x⁶).
///
/// ```text
/// g = e₃(f₆−f₃)³{(dx²)² + 4A dx¹dx³ + 2(εx¹−2AΣ₁)dx²dx³
///       + ((εx¹)²−4εx¹AΣ₁+4A²Σ₂)(dx³)²}
///   + e₆(f₃−f₆)³{(dx⁵)² + 4Ã dx⁴dx⁶ + 2(ε̃x⁴+2ÃΣ₁)dx⁵dx⁶
///       + ((ε̃x⁴)²+4ε̃x⁴ÃΣ₁+4Ã²Σ₂)(dx⁶)²}
/// ```
/// with f₃ = εx³, f₆ = ε̃x⁶ + a, A = εx² + θ(x³), Σ₁ = 3/(f₆−f₃),
/// Σ₂ = 3/(f₆−f₃)². Ã argument per misprint policy.
fn build_33(cfg: &FamilyConfig, p: &ChartPoint) -> Result<RawMetric> {
    let eps = cfg.eps_f();
    let ept = cfg.eps_tilde_f();

    let f3 = eps * var(p, 2);
    let f6 = ept * var(p, 5) + cfg.a_val();
    let big_a = eps * var(p, 1) + func(cfg.theta_fn(), p, 2);
    let at_coord = if cfg.misprints.t33_atilde_mirror {
        4
    } else {
        3
    };
    let big_at = ept * var(p, at_coord) + func(cfg.omega_fn(), p, 5);
    let ex1 = eps * var(p, 0);
    let etx4 = ept * var(p, 3);

    let inv63 = (f6 - f3).inv()?;
    let s1 = 3.0 * inv63;
    let s2 = 3.0 * inv63.sq();

    let q3 = cfg.sign(3) * (f6 - f3).powi(3);
    let q6 = cfg.sign(6) * (f3 - f6).powi(3);

    let mut g = [[Jet2::zero(); 6]; 6];
    sym_set(&mut g, 1, 1, q3);
    sym_set(&mut g, 0, 2, 2.0 * big_a * q3);
    sym_set(&mut g, 1, 2, (ex1 - 2.0 * big_a * s1) * q3);
    sym_set(
        &mut g,
        2,
        2,
        (ex1.sq() - 4.0 * ex1 * big_a * s1 + 4.0 * big_a.sq() * s2) * q3,
    );
    sym_set(&mut g, 4, 4, q6);
    sym_set(&mut g, 3, 5, 2.0 * big_at * q6);
    sym_set(&mut g, 4, 5, (etx4 + 2.0 * big_at * s1) * q6);
    sym_set(
        &mut g,
        5,
        5,
        (etx4.sq() + 4.0 * etx4 * big_at * s1 + 4.0 * big_at.sq() * s2) * q6,
    );

    Ok(RawMetric {
        g,
        roots: spread_roots(cfg.family, &[f3, f6]),
    })
}

/// [411]: a 4-block (x¹..x⁴) and two simple coordinates x⁵, x⁶.
///
/// ```text
/// g = e₄Π_σ(f_σ−f₄){6A dx¹dx⁴ + 2 dx²dx³ + 2(2εx²−3AΣ₁)dx²dx⁴ − Σ₁(dx³)²
///       + 2(εx¹−2εx²Σ₁)dx³dx⁴ + 4((εx²)²Σ₁+ε²x¹x²−(3/2)εx¹AΣ₁)(dx⁴)²}
///   [+ 3A dx³dx⁴ + 12εx²A(dx⁴)², placed per misprint policy]
///   + Σ_σ e_σ Π′ᵢ(fᵢ−f_σ)(dx^σ)²
/// ```
/// with f₄ = εx⁴, A = εx³ + θ(x⁴), Σ₁ = 1/(f₅−f₄) + 1/(f₆−f₄).
fn build_411(cfg: &FamilyConfig, p: &ChartPoint) -> Result<RawMetric> {
    let eps = cfg.eps_f();

    let f4 = eps * var(p, 3);
    let f5 = func(cfg.f5_fn(), p, 4);
    let f6 = func(cfg.f6_fn(), p, 5);
    let big_a = eps * var(p, 2) + func(cfg.theta_fn(), p, 3);
    let ex1 = eps * var(p, 0);
    let ex2 = eps * var(p, 1);

    let s1 = (f5 - f4).inv()? + (f6 - f4).inv()?;
    let pref = cfg.sign(4) * (f5 - f4) * (f6 - f4);

    let mut g = [[Jet2::zero(); 6]; 6];
    sym_set(&mut g, 0, 3, 3.0 * big_a * pref);
    sym_set(&mut g, 1, 2, pref);
    sym_set(&mut g, 1, 3, (2.0 * ex2 - 3.0 * big_a * s1) * pref);
    sym_set(&mut g, 2, 2, -(s1 * pref));
    let mut g23 = (ex1 - 2.0 * ex2 * s1) * pref;
    let mut g33 = 4.0 * (ex2.sq() * s1 + ex1 * ex2 - 1.5 * ex1 * big_a * s1) * pref;
    if cfg.misprints.t411_tail_inside {
        g23 = g23 + 1.5 * big_a * pref;
        g33 = g33 + 12.0 * ex2 * big_a * pref;
    } else {
        g23 = g23 + 1.5 * big_a;
        g33 = g33 + 12.0 * ex2 * big_a;
    }
    sym_set(&mut g, 2, 3, g23);
    sym_set(&mut g, 3, 3, g33);
    sym_set(&mut g, 4, 4, cfg.sign(5) * (f4 - f5).powi(4) * (f6 - f5));
    sym_set(&mut g, 5, 5, cfg.sign(6) * (f4 - f6).powi(4) * (f5 - f6));

    Ok(RawMetric {
        g,
        roots: spread_roots(cfg.family, &[f4, f5, f6]),
    })
}

/// [51]: a 5-block (x¹..x⁵) and the simple x⁶.
///
/// ```text
/// g = e₅(f₆−f₅){8A dx¹dx⁵ + 2 dx²dx⁴ + 2(3εx³−4AΣ₁)dx²dx⁵ + (dx³)²
///       − 2Σ₁ dx³dx⁴ + 2(2εx²−3εx³Σ₁)dx³dx⁵ + 2(εx¹−2εx²Σ₁)dx⁴dx⁵
///       + 4((3/2)εx¹εx³+(εx²)²−2εx¹AΣ₁−3εx²εx³Σ₁)(dx⁵)²}
///   + e₆(f₅−f₆)⁵(dx⁶)²
/// ```
/// with f₅ = εx⁵, A = εx⁴ + θ(x⁵), Σ₁ = 1/(f₆−f₅).
fn build_51(cfg: &FamilyConfig, p: &ChartPoint) -> Result<RawMetric> {
    let eps = cfg.eps_f();

    let f5 = eps * var(p, 4);
    let f6 = func(cfg.f6_fn(), p, 5);
    let big_a = eps * var(p, 3) + func(cfg.theta_fn(), p, 4);
    let ex1 = eps * var(p, 0);
    let ex2 = eps * var(p, 1);
    let ex3 = eps * var(p, 2);

    let s1 = (f6 - f5).inv()?;
    let pref = cfg.sign(5) * (f6 - f5);

    let mut g = [[Jet2::zero(); 6]; 6];
    sym_set(&mut g, 0, 4, 4.0 * big_a * pref);
    sym_set(&mut g, 1, 3, pref);
    sym_set(&mut g, 1, 4, (3.0 * ex3 - 4.0 * big_a * s1) * pref);
    sym_set(&mut g, 2, 2, pref);
    sym_set(&mut g, 2, 3, -(s1 * pref));
    sym_set(&mut g, 2, 4, (2.0 * ex2 - 3.0 * ex3 * s1) * pref);
    sym_set(&mut g, 3, 4, (ex1 - 2.0 * ex2 * s1) * pref);
    sym_set(
        &mut g,
        4,
        4,
        4.0 * (1.5 * ex1 * ex3 + ex2.sq() - 2.0 * ex1 * big_a * s1 - 3.0 * ex2 * ex3 * s1) * pref,
    );
    sym_set(&mut g, 5, 5, cfg.sign(6) * (f5 - f6).powi(5));

    Ok(RawMetric {
        g,
        roots: spread_roots(cfg.family, &[f5, f6]),
    })
}
