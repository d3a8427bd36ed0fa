//! Model parameters, regime classification and closed-form exponents.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemporalKind {
    White,
    Colored,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kappa: f64,
    pub hurst_space: f64,
    pub hurst_time: f64,
    pub temporal_kind: TemporalKind,
}

impl ModelParams {
    pub fn white(kappa: f64, hurst_space: f64) -> Self {
        ModelParams {
            kappa,
            hurst_space,
            hurst_time: 0.5,
            temporal_kind: TemporalKind::White,
        }
    }

    pub fn colored(kappa: f64, hurst_space: f64, hurst_time: f64) -> Self {
        ModelParams {
            kappa,
            hurst_space,
            hurst_time,
            temporal_kind: TemporalKind::Colored,
        }
    }

    pub fn check_ranges(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa <= 2.0) {
            return Err(domain("kappa", self.kappa, "(0, 2]"));
        }
        if !(self.hurst_space > 0.0 && self.hurst_space < 1.0) {
            return Err(domain("hurst_space", self.hurst_space, "(0, 1)"));
        }
        if !(self.hurst_time >= 0.5 && self.hurst_time < 1.0) {
            return Err(domain("hurst_time", self.hurst_time, "[1/2, 1)"));
        }
        let white = self.temporal_kind == TemporalKind::White;
        if white != (self.hurst_time == 0.5) {
            return Err(domain(
                "hurst_time",
                self.hurst_time,
                "exactly 1/2 for white noise and above 1/2 for colored noise",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    WaveSolvable,
    WaveNonSolvable,
    HeatSolvable,
    HeatNonSolvable,
}

impl Regime {
    pub fn is_solvable(self) -> bool {
        matches!(self, Regime::WaveSolvable | Regime::HeatSolvable)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidatedParams {
    pub params: ModelParams,
    pub regime: Regime,
}

impl ValidatedParams {
    pub fn kappa(&self) -> f64 {
        self.params.kappa
    }
    pub fn h(&self) -> f64 {
        self.params.hurst_space
    }
    pub fn h0(&self) -> f64 {
        self.params.hurst_time
    }
    pub fn is_white(&self) -> bool {
        self.params.temporal_kind == TemporalKind::White
    }

    pub fn require_wave(&self) -> Result<()> {
        if self.regime == Regime::WaveSolvable {
            Ok(())
        } else {
            Err(Error::Regime(self.regime))
        }
    }

    pub fn require_white_wave(&self) -> Result<()> {
        self.require_wave()?;
        if !self.is_white() {
            return Err(Error::Unsupported(
                "numeric chaos norms and increments are defined for white time only",
            ));
        }
        Ok(())
    }
}

pub fn wave_solvable(kappa: f64, h: f64, h0: f64) -> bool {
    h > 0.25 && h < 0.5 && kappa > 3.0 - 4.0 * h && kappa <= 2.0 && (0.5..1.0).contains(&h0)
}

pub fn heat_solvable(h: f64, h0: f64) -> bool {
    h0 + h > 0.75
}

/// Classifies the wave equation.
pub fn validate_params(p: ModelParams) -> Result<ValidatedParams> {
    p.check_ranges()?;
    let regime = if wave_solvable(p.kappa, p.hurst_space, p.hurst_time) {
        Regime::WaveSolvable
    } else {
        Regime::WaveNonSolvable
    };
    Ok(ValidatedParams { params: p, regime })
}

/// Classifies the heat-equation variant (`kappa` is carried along but not used).
pub fn validate_heat(p: ModelParams) -> Result<ValidatedParams> {
    p.check_ranges()?;
    let regime = if heat_solvable(p.hurst_space, p.hurst_time) {
        Regime::HeatSolvable
    } else {
        Regime::HeatNonSolvable
    };
    Ok(ValidatedParams { params: p, regime })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub growth: f64,
    pub p_factor: f64,
    pub holder_time_sup: f64,
    pub holder_space_sup: f64,
    pub chaos_series_power: f64,
}

pub fn exponents(p: &ValidatedParams) -> Result<ExponentSet> {
    let (k, h, h0) = (p.kappa(), p.h(), p.h0());
    match p.regime {
        Regime::WaveSolvable => {
            let denom = 3.0 * k - 4.0 + 4.0 * h;
            let growth = if h0 == 0.5 {
                // numerator equals denominator identically
                debug_assert!(((k + 2.0 * (k - 2.0) + 4.0 * h) / denom - 1.0).abs() < 1e-12);
                1.0
            } else {
                (2.0 * k * h0 + 2.0 * (k - 2.0) + 4.0 * h) / denom
            };
            let out = ExponentSet {
                growth,
                p_factor: k / denom,
                holder_time_sup: 1.0 - 2.0 / k + 2.0 * h / k,
                holder_space_sup: h + k / 2.0 - 1.0,
                chaos_series_power: 2.0 * ((1.0 - 2.0 / k) + 2.0 * h / k) + 1.0,
            };
            debug_assert!(out.holder_time_sup > 0.0 && out.holder_space_sup > 0.0);
            Ok(out)
        }
        Regime::HeatSolvable => Ok(ExponentSet {
            growth: (2.0 * h0 + h - 1.0) / h,
            p_factor: f64::NAN,
            holder_time_sup: f64::NAN,
            holder_space_sup: f64::NAN,
            chaos_series_power: f64::NAN,
        }),
        r => Err(Error::Regime(r)),
    }
}
