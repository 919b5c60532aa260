//! Family configuration: tags, parameters, sign flags, validation, JSON loading.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;

/// The five rigid family types, named by the elementary-divisor multiplicities
/// of their λ-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "2211")]
    T2211,
    #[serde(rename = "321")]
    T321,
    #[serde(rename = "33")]
    T33,
    #[serde(rename = "411")]
    T411,
    #[serde(rename = "51")]
    T51,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyTag::T2211 => "2211",
            FamilyTag::T321 => "321",
            FamilyTag::T33 => "33",
            FamilyTag::T411 => "411",
            FamilyTag::T51 => "51",
        };
        write!(f, "{s}")
    }
}

impl FamilyTag {
    /// Coordinate groups sharing a characteristic root, 0-based.
    /// `[2211]`: f₁=f₂, f₃=f₄, f₅, f₆ and so on per family.
    pub fn root_groups(self) -> &'static [&'static [usize]] {
        match self {
            FamilyTag::T2211 => &[&[0, 1], &[2, 3], &[4], &[5]],
            FamilyTag::T321 => &[&[0, 1, 2], &[3, 4], &[5]],
            FamilyTag::T33 => &[&[0, 1, 2], &[3, 4, 5]],
            FamilyTag::T411 => &[&[0, 1, 2, 3], &[4], &[5]],
            FamilyTag::T51 => &[&[0, 1, 2, 3, 4], &[5]],
        }
    }

    /// Group id for each coordinate, 0-based.
    pub fn group_of(self, coord: usize) -> usize {
        for (gid, members) in self.root_groups().iter().enumerate() {
            if members.contains(&coord) {
                return gid;
            }
        }
        unreachable!("coordinate {coord} out of range")
    }

    /// Sign flags the family requires (1-based coordinate labels).
    pub fn required_signs(self) -> &'static [usize] {
        match self {
            FamilyTag::T2211 => &[2, 4, 5, 6],
            FamilyTag::T321 => &[3, 5, 6],
            FamilyTag::T33 => &[3, 6],
            FamilyTag::T411 => &[4, 5, 6],
            FamilyTag::T51 => &[5, 6],
        }
    }

    /// Which of θ, ω, f₅, f₆ the family uses.
    pub fn uses(self) -> FieldUse {
        match self {
            FamilyTag::T2211 => FieldUse {
                eps_tilde: true,
                a: true,
                theta: true,
                omega: true,
                f5: true,
                f6: true,
            },
            FamilyTag::T321 => FieldUse {
                eps_tilde: true,
                a: true,
                theta: true,
                omega: true,
                f5: false,
                f6: true,
            },
            FamilyTag::T33 => FieldUse {
                eps_tilde: true,
                a: true,
                theta: true,
                omega: true,
                f5: false,
                f6: false,
            },
            FamilyTag::T411 => FieldUse {
                eps_tilde: false,
                a: false,
                theta: true,
                omega: false,
                f5: true,
                f6: true,
            },
            FamilyTag::T51 => FieldUse {
                eps_tilde: false,
                a: false,
                theta: true,
                omega: false,
                f5: false,
                f6: true,
            },
        }
    }

    /// Default per-coordinate sampling box. Coordinates feeding simple roots
    /// are shifted so the root groups stay separated for the shipped fixtures.
    pub fn default_box(self) -> CoordBox {
        let lo = 0.1;
        let hi = 0.9;
        let mut bx = [(lo, hi); 6];
        match self {
            FamilyTag::T2211 | FamilyTag::T411 => {
                bx[4] = (2.1, 2.9);
                bx[5] = (4.1, 4.9);
            }
            FamilyTag::T321 => {
                bx[5] = (4.1, 4.9);
            }
            FamilyTag::T33 => {}
            FamilyTag::T51 => {
                bx[5] = (2.1, 2.9);
            }
        }
        bx
    }
}

/// Per-coordinate sampling intervals.
pub type CoordBox = [(f64, f64); 6];

#[derive(Debug, Clone, Copy)]
pub struct FieldUse {
    pub eps_tilde: bool,
    pub a: bool,
    pub theta: bool,
    pub omega: bool,
    pub f5: bool,
    pub f6: bool,
}

/// Sign flags e_i ∈ {−1, +1}. Only the slots the family uses may be present.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Signs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e2: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e3: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e4: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e5: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e6: Option<i8>,
}

impl Signs {
    pub fn get(&self, label: usize) -> Option<i8> {
        match label {
            2 => self.e2,
            3 => self.e3,
            4 => self.e4,
            5 => self.e5,
            6 => self.e6,
            _ => None,
        }
    }

    /// Sign as f64, defaulting validation has already guaranteed presence.
    pub fn val(&self, label: usize) -> f64 {
        f64::from(self.get(label).unwrap_or(1))
    }

    pub fn as_map(&self) -> BTreeMap<String, i8> {
        let mut m = BTreeMap::new();
        for label in 2..=6 {
            if let Some(s) = self.get(label) {
                m.insert(format!("e{label}"), s);
            }
        }
        m
    }
}

/// Which reading to use at each spot where the printed canonical forms are
/// ambiguous or defective. See MISPRINTS.md for the evidence behind the
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MisprintPolicy {
    /// [321] (dx⁶)² coefficient: `false` = printed (f₅−f₆)⁵,
    /// `true` = canonical (f₃−f₆)³(f₅−f₆)².
    pub t321_g66_canonical: bool,
    /// [33] second-block Ã: `false` = printed ε̃x⁴ + ω(x⁶),
    /// `true` = mirror-symmetric ε̃x⁵ + ω(x⁶).
    pub t33_atilde_mirror: bool,
    /// [411] trailing 3A dx³dx⁴ + 12εx²A (dx⁴)² terms: `false` = printed
    /// (outside the block prefactor), `true` = inside the braces.
    pub t411_tail_inside: bool,
    /// [321] χ₅ numerator: `false` = printed θ′, `true` = ω′ by symmetry.
    pub t321_chi5_omega: bool,
    /// [2211] cross-block components: sign of the Σ_{l=2,4}(χ_l−ρ_pq) term.
    /// `false` = printed (+), `true` = flipped (−), which is what the
    /// brute-force tensor satisfies.
    pub t2211_sigma_l_flip: bool,
}

impl MisprintPolicy {
    /// Every spot read exactly as printed.
    pub fn literal() -> Self {
        Self {
            t321_g66_canonical: false,
            t33_atilde_mirror: false,
            t411_tail_inside: false,
            t321_chi5_omega: false,
            t2211_sigma_l_flip: false,
        }
    }

    /// Every spot read with its alternative (normalized) form.
    pub fn alt() -> Self {
        Self {
            t321_g66_canonical: true,
            t33_atilde_mirror: true,
            t411_tail_inside: true,
            t321_chi5_omega: true,
            t2211_sigma_l_flip: true,
        }
    }

    /// The readings the brute-force cross-checks confirm; see MISPRINTS.md.
    pub fn resolved() -> Self {
        Self {
            t321_g66_canonical: true,
            t33_atilde_mirror: true,
            t411_tail_inside: true,
            t321_chi5_omega: true,
            t2211_sigma_l_flip: true,
        }
    }
}

impl Default for MisprintPolicy {
    fn default() -> Self {
        Self::resolved()
    }
}

/// A chart point x¹..x⁶, stored 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint(pub [f64; 6]);

impl ChartPoint {
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

/// Full parameter set for one family metric.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub family: FamilyTag,
    pub eps: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_tilde: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub signs: Signs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f5: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f6: Option<FunctionSpec>,
    /// Permit parameter combinations that fall outside the family's own type
    /// constraints (e.g. [321] with ε = ε̃ = 0). The metric formula still
    /// evaluates; the configuration just no longer describes a space of this
    /// type. Off by default.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_degenerate: bool,
    /// Reading choices for the defective spots in the printed forms.
    /// Not part of the JSON schema; set via CLI flag or builder.
    #[serde(skip)]
    pub misprints: MisprintPolicy,
}

impl FamilyConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: FamilyConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path)?;
        Self::from_json_str(&body)
    }

    pub fn eps_f(&self) -> f64 {
        f64::from(self.eps)
    }

    pub fn eps_tilde_f(&self) -> f64 {
        f64::from(self.eps_tilde.unwrap_or(0))
    }

    pub fn a_val(&self) -> f64 {
        self.a.unwrap_or(0.0)
    }

    pub fn sign(&self, label: usize) -> f64 {
        self.signs.val(label)
    }

    pub fn theta_fn(&self) -> &FunctionSpec {
        self.theta.as_ref().expect("validated config has theta")
    }

    pub fn omega_fn(&self) -> &FunctionSpec {
        self.omega.as_ref().expect("validated config has omega")
    }

    pub fn f5_fn(&self) -> &FunctionSpec {
        self.f5.as_ref().expect("validated config has f5")
    }

    pub fn f6_fn(&self) -> &FunctionSpec {
        self.f6.as_ref().expect("validated config has f6")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ConfigInvalid(msg));
        let fam = self.family;
        let uses = fam.uses();

        if self.eps > 1 {
            return fail(format!("eps must be 0 or 1, got {}", self.eps));
        }
        match (uses.eps_tilde, self.eps_tilde) {
            (true, None) => return fail(format!("family [{fam}] requires eps_tilde")),
            (true, Some(v)) if v > 1 => return fail(format!("eps_tilde must be 0 or 1, got {v}")),
            (false, Some(_)) => return fail(format!("family [{fam}] does not use eps_tilde")),
            _ => {}
        }
        match (uses.a, self.a) {
            (true, None) => return fail(format!("family [{fam}] requires `a`")),
            (true, Some(v)) if !v.is_finite() => return fail("`a` must be finite".into()),
            (false, Some(_)) => return fail(format!("family [{fam}] does not use `a`")),
            _ => {}
        }

        let func_slots: [(&str, bool, &Option<FunctionSpec>); 4] = [
            ("theta", uses.theta, &self.theta),
            ("omega", uses.omega, &self.omega),
            ("f5", uses.f5, &self.f5),
            ("f6", uses.f6, &self.f6),
        ];
        for (name, used, slot) in func_slots {
            match (used, slot) {
                (true, None) => return fail(format!("family [{fam}] requires `{name}`")),
                (true, Some(f)) => f.validate()?,
                (false, Some(_)) => return fail(format!("family [{fam}] does not use `{name}`")),
                (false, None) => {}
            }
        }

        for label in 2..=6 {
            let required = fam.required_signs().contains(&label);
            match (required, self.signs.get(label)) {
                (true, None) => return fail(format!("family [{fam}] requires sign e{label}")),
                (true, Some(s)) if s != 1 && s != -1 => {
                    return fail(format!("sign e{label} must be ±1, got {s}"))
                }
                (false, Some(_)) => {
                    return fail(format!("family [{fam}] does not use sign e{label}"))
                }
                _ => {}
            }
        }

        // Family-specific parameter constraints.
        let ept = self.eps_tilde.unwrap_or(0);
        match fam {
            FamilyTag::T2211 => {
                if ept == 0 && self.a_val() == 0.0 {
                    return fail("[2211] requires a ≠ 0 when eps_tilde = 0".into());
                }
            }
            FamilyTag::T321 => {
                if ept == 0 && self.a_val() == 0.0 {
                    return fail("[321] requires a ≠ 0 when eps_tilde = 0".into());
                }
                if self.eps == 0 && ept == 0 && !self.allow_degenerate {
                    return fail(
                        "[321] requires eps ≠ 0 when eps_tilde = 0 and vice versa \
                         (set allow_degenerate to evaluate the limit form anyway)"
                            .into(),
                    );
                }
            }
            FamilyTag::T33 => {
                if ept == 0 && self.a_val() == 0.0 {
                    return fail("[33] requires a ≠ 0 when eps_tilde = 0".into());
                }
                if self.eps == 0 && self.theta_fn().is_zero() {
                    return fail("[33] requires theta ≠ 0 when eps = 0".into());
                }
                if ept == 0 && self.omega_fn().is_zero() {
                    return fail("[33] requires omega ≠ 0 when eps_tilde = 0".into());
                }
            }
            FamilyTag::T411 | FamilyTag::T51 => {}
        }
        Ok(())
    }
}
