//! Bisection width, maximum profile value and edge-isoperimetric (Cheeger)
//! constant, read off a profile table and compared with their closed forms.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::boundary::{profile_recurrence, ProfileTable};
use crate::error::{EipError, Result};
use crate::graph::GraphParams;

pub type ExactRational = Ratio<u64>;

/// A computed value next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricCheck<T> {
    pub value: T,
    pub formula: T,
    /// `None` where the closed form is not claimed to hold.
    pub agrees: Option<bool>,
}

impl<T: PartialEq> MetricCheck<T> {
    fn new(value: T, formula: T, claimed: bool) -> Self {
        let agrees = claimed.then(|| value == formula);
        MetricCheck {
            value,
            formula,
            agrees,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cheeger {
    pub value: ExactRational,
    pub formula: ExactRational,
    pub agrees: bool,
    /// Smallest `ell` attaining the minimum.
    pub argmin: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n: u32,
    pub m: u32,
    pub bisection_width: MetricCheck<u64>,
    pub max_profile: MetricCheck<u64>,
    pub cheeger: Cheeger,
}

impl MetricsReport {
    pub fn all_agree(&self) -> bool {
        self.bisection_width.agrees != Some(false)
            && self.max_profile.agrees != Some(false)
            && self.cheeger.agrees
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "m": self.m,
            "bisection_width": self.bisection_width.value,
            "bw_formula": self.bisection_width.formula,
            "bw_formula_agrees": self.bisection_width.agrees,
            "max_profile": self.max_profile.value,
            "max_formula": self.max_profile.formula,
            "max_formula_agrees": self.max_profile.agrees,
            "cheeger": {
                "num": self.cheeger.value.numer(),
                "den": self.cheeger.value.denom(),
            },
            "cheeger_formula": {
                "num": self.cheeger.formula.numer(),
                "den": self.cheeger.formula.denom(),
            },
            "cheeger_formula_agrees": self.cheeger.agrees,
            "cheeger_argmin": self.cheeger.argmin,
        })
    }
}

fn need_positive_n(p: &GraphParams) -> Result<()> {
    if p.n() == 0 {
        return Err(EipError::InvalidParams {
            n: 0,
            m: p.m(),
            reason: "metrics need n >= 1".into(),
        });
    }
    Ok(())
}

fn odd_form(p: &GraphParams) -> u64 {
    let h = p.m() as u64 / 2;
    p.n() as u64 * h * h + h
}

/// `m^2/4` for even `m`, `n floor(m/2)^2 + floor(m/2)` for odd `m`.
pub fn bisection_width_formula(p: &GraphParams) -> u64 {
    let m = p.m() as u64;
    if m.is_multiple_of(2) {
        m * m / 4
    } else {
        odd_form(p)
    }
}

/// `n floor(m/2)^2 + floor(m/2)`, claimed for odd `m` only.
pub fn max_profile_formula(p: &GraphParams) -> u64 {
    odd_form(p)
}

/// `m^2 / (2 m^n)` for even `m`, `(m+1) / (2 m^(n-1))` for odd `m`.
pub fn cheeger_formula(p: &GraphParams) -> ExactRational {
    let m = p.m() as u64;
    if m.is_multiple_of(2) {
        Ratio::new(m * m, 2 * p.order())
    } else {
        Ratio::new(m + 1, 2 * p.copy_size())
    }
}

pub fn bisection_width(table: &ProfileTable) -> Result<MetricCheck<u64>> {
    let p = table.params();
    need_positive_n(&p)?;
    let value = table.get(p.order() / 2) as u64;
    Ok(MetricCheck::new(value, bisection_width_formula(&p), true))
}

pub fn max_profile(table: &ProfileTable) -> Result<MetricCheck<u64>> {
    let p = table.params();
    need_positive_n(&p)?;
    let value = table.values.iter().copied().max().unwrap_or(0) as u64;
    Ok(MetricCheck::new(
        value,
        max_profile_formula(&p),
        p.m() % 2 == 1,
    ))
}

/// `min |Θ|(ell)/ell` over `1 <= ell <= m^n/2`.
pub fn cheeger(table: &ProfileTable) -> Result<Cheeger> {
    let p = table.params();
    need_positive_n(&p)?;
    let mut best = (table.get(1) as u64, 1u64);
    for ell in 2..=p.order() / 2 {
        let t = table.get(ell) as u64;
        // t/ell < best.0/best.1
        if (t as u128) * (best.1 as u128) < (best.0 as u128) * (ell as u128) {
            best = (t, ell);
        }
    }
    let value = Ratio::new(best.0, best.1);
    let formula = cheeger_formula(&p);
    Ok(Cheeger {
        value,
        formula,
        agrees: value == formula,
        argmin: best.1,
    })
}

pub fn metrics_from_table(table: &ProfileTable) -> Result<MetricsReport> {
    Ok(MetricsReport {
        n: table.n,
        m: table.m,
        bisection_width: bisection_width(table)?,
        max_profile: max_profile(table)?,
        cheeger: cheeger(table)?,
    })
}

pub fn metrics(p: &GraphParams) -> Result<MetricsReport> {
    need_positive_n(p)?;
    metrics_from_table(&profile_recurrence(p)?)
}
