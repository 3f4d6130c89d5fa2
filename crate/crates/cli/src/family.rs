//! Family names, their parameters, and construction.

use std::f64::consts::PI;
use std::fmt;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use edgelab_core::linalg::c64;
use edgelab_core::states::{
    choi_matrix, edge_state, face_state, face_state_for_target, generalized_edge_state, p_theta,
    state_7_6,
};
use edgelab_core::{BipartiteOperator, ChoiParams, EdgeFamilyParams, GramSpec, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    PTheta,
    Edge,
    EdgeGeneral,
    #[value(name = "state-7-6")]
    State76,
    Choi,
    Face,
    P5,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PTheta => "p-theta",
            Family::Edge => "edge",
            Family::EdgeGeneral => "edge-general",
            Family::State76 => "state-7-6",
            Family::Choi => "choi",
            Family::Face => "face",
            Family::P5 => "p5",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(name, false).map_err(|_| anyhow!("unknown family `{name}`"))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by all families; each family reads the ones it needs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Params {
    pub b: Option<f64>,
    pub theta: Option<f64>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub xi_eta: Option<C64>,
    pub eta_zeta: Option<C64>,
    pub zeta_xi: Option<C64>,
    pub target_p: Option<u32>,
}

/// Names accepted by [`Params::set`], e.g. in sweep grids.
pub const PARAM_NAMES: &[&str] = &[
    "b",
    "theta",
    "a",
    "c",
    "target-p",
    "xi-eta-re",
    "xi-eta-im",
    "eta-zeta-re",
    "eta-zeta-im",
    "zeta-xi-re",
    "zeta-xi-im",
];

impl Params {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        fn part(slot: &mut Option<C64>, imag: bool, v: f64) {
            let z = slot.get_or_insert(c64(0.0, 0.0));
            if imag {
                z.im = v;
            } else {
                z.re = v;
            }
        }
        match name {
            "b" => self.b = Some(value),
            "theta" => self.theta = Some(value),
            "a" => self.a = Some(value),
            "c" => self.c = Some(value),
            "target-p" => {
                if value.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&value) {
                    bail!("target-p must be a non-negative integer, got {value}");
                }
                self.target_p = Some(value as u32);
            }
            "xi-eta-re" => part(&mut self.xi_eta, false, value),
            "xi-eta-im" => part(&mut self.xi_eta, true, value),
            "eta-zeta-re" => part(&mut self.eta_zeta, false, value),
            "eta-zeta-im" => part(&mut self.eta_zeta, true, value),
            "zeta-xi-re" => part(&mut self.zeta_xi, false, value),
            "zeta-xi-im" => part(&mut self.zeta_xi, true, value),
            other => bail!("unknown parameter `{other}` (expected one of {})", PARAM_NAMES.join(", ")),
        }
        Ok(())
    }

    fn need(value: Option<f64>, flag: &str, family: Family) -> Result<f64> {
        value.ok_or_else(|| anyhow!("family {family} needs --{flag}"))
    }

    fn theta_for(&self, family: Family) -> Result<f64> {
        Self::need(self.theta, "theta", family)
    }

    fn edge_params(&self, family: Family) -> Result<EdgeFamilyParams> {
        let b = Self::need(self.b, "b", family)?;
        Ok(EdgeFamilyParams::new(b, self.theta_for(family)?)?)
    }
}

/// Builds the requested family member.
///
/// `p-theta` is returned as a `3⊗1` operator so that it fits the same file
/// format. `face` and `p5` default to `b = 1`, and unset face off-diagonals
/// to 0.
pub fn build(family: Family, p: &Params) -> Result<BipartiteOperator> {
    let op = match family {
        Family::PTheta => BipartiteOperator::new(3, 1, p_theta(p.theta_for(family)?))?,
        Family::Edge => edge_state(&p.edge_params(family)?),
        Family::EdgeGeneral => generalized_edge_state(&p.edge_params(family)?),
        Family::State76 => state_7_6(Params::need(p.b, "b", family)?)?,
        Family::Choi => {
            let a = Params::need(p.a, "a", family)?;
            let b = Params::need(p.b, "b", family)?;
            let c = Params::need(p.c, "c", family)?;
            choi_matrix(&ChoiParams::new(a, b, c)?)
        }
        Family::Face => {
            let zero = c64(0.0, 0.0);
            let g = GramSpec::new(
                p.xi_eta.unwrap_or(zero),
                p.eta_zeta.unwrap_or(zero),
                p.zeta_xi.unwrap_or(zero),
                p.theta_for(family)?,
            );
            face_state(p.b.unwrap_or(1.0), &g)?
        }
        Family::P5 => {
            let target = p.target_p.ok_or_else(|| anyhow!("family p5 needs --target-p"))?;
            face_state_for_target(p.b.unwrap_or(1.0), p.theta_for(family)?, target)?
        }
    };
    Ok(op)
}

/// Family parameters as command-line flags.
#[derive(Args, Clone, Debug, Default)]
pub struct FamilyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Angle in radians.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "theta_frac")]
    pub theta: Option<f64>,
    /// Angle as a rational multiple of π, e.g. `1/6` or `-1/4`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_frac: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// `(ξ|η)` as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub xi_eta: Option<String>,
    /// `(η|ζ)` as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub eta_zeta: Option<String>,
    /// `(ζ|ξ)` as `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta_xi: Option<String>,
    #[arg(long)]
    pub target_p: Option<u32>,
}

impl FamilyArgs {
    pub fn params(&self) -> Result<Params> {
        let theta = match &self.theta_frac {
            Some(frac) => Some(parse_pi_fraction(frac)?),
            None => self.theta,
        };
        let complex = |s: &Option<String>, flag: &str| -> Result<Option<C64>> {
            s.as_deref()
                .map(|s| parse_complex(s).with_context(|| format!("invalid --{flag}")))
                .transpose()
        };
        Ok(Params {
            b: self.b,
            theta,
            a: self.a,
            c: self.c,
            xi_eta: complex(&self.xi_eta, "xi-eta")?,
            eta_zeta: complex(&self.eta_zeta, "eta-zeta")?,
            zeta_xi: complex(&self.zeta_xi, "zeta-xi")?,
            target_p: self.target_p,
        })
    }
}

/// `"p/q"` or a plain number, times π.
pub fn parse_pi_fraction(s: &str) -> Result<f64> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().with_context(|| format!("bad numerator in `{s}`"))?;
            let den: f64 = den.trim().parse().with_context(|| format!("bad denominator in `{s}`"))?;
            if den == 0.0 {
                bail!("zero denominator in `{s}`");
            }
            num / den
        }
        None => s.parse().with_context(|| format!("bad fraction `{s}`"))?,
    };
    Ok(value * PI)
}

/// `"re,im"`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected `re,im`, got `{s}`"))?;
    Ok(c64(re.trim().parse()?, im.trim().parse()?))
}
