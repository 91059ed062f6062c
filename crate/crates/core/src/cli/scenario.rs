//! Scenario files: the JSON input of every command.

use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::elliptic::{CurvePoint, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exactalg::rational::{parse_rational, pow};
use crate::factors::FactorScenario;
use crate::heckechar::RingClassCharacter;
use crate::padic::PadicNumber;
use crate::quadfield::{ImagQuadField, Order};

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    /// Exponents on the class group generators; empty means ψ = 1.
    #[serde(default)]
    pub exponents: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Precision {
    pub padic_digits: i64,
    pub q_truncation: usize,
    pub complex_bits: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { padic_digits: 30, q_truncation: 200, complex_bits: 256 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    /// [x, y] as rational strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heegner_point: Option<[String; 2]>,
    /// p-adic literal, see [`parse_padic_literal`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterated_integral: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_log: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub curve: [i64; 5],
    pub conductor: u64,
    #[serde(rename = "D_K")]
    pub d_k: u64,
    #[serde(default = "one")]
    pub c: u64,
    #[serde(default)]
    pub psi: PsiSpec,
    pub p: u64,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Inputs>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("scenario: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read scenario {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scenario serializes")
    }
}

/// A validated scenario with its derived objects.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub order: Arc<Order>,
    pub factors: FactorScenario,
    pub point: Option<CurvePoint<BigRational>>,
}

fn invalid(e: Error) -> Error {
    match e {
        Error::Validation(_) | Error::Degenerate(_) => e,
        other => Error::Validation(other.to_string()),
    }
}

impl Scenario {
    pub fn load(file: ScenarioFile) -> Result<Self> {
        let pr = &file.precision;
        if !(5..=1000).contains(&pr.padic_digits) {
            return Err(Error::Validation(format!("padic_digits = {} outside 5..=1000", pr.padic_digits)));
        }
        if pr.q_truncation < 1 {
            return Err(Error::Validation("q_truncation must be positive".into()));
        }
        if pr.complex_bits < 64 {
            return Err(Error::Validation(format!("complex_bits = {} < 64", pr.complex_bits)));
        }
        if file.c == 0 {
            return Err(Error::Validation("conductor c must be positive".into()));
        }
        let field = ImagQuadField::new(file.d_k).map_err(invalid)?;
        let order = Arc::new(field.order(file.c).map_err(invalid)?);
        let psi = if file.psi.exponents.is_empty() {
            RingClassCharacter::trivial(order.clone())
        } else {
            RingClassCharacter::new(order.clone(), file.psi.exponents.clone()).map_err(invalid)?
        };
        let curve = WeierstrassModel::new(file.curve).map_err(invalid)?;
        let factors = FactorScenario::new(curve, file.conductor, psi, file.p).map_err(invalid)?;
        let point = match file.inputs.as_ref().and_then(|i| i.heegner_point.as_ref()) {
            None => None,
            Some([x, y]) => {
                let pt = CurvePoint::rational(parse_rational(x)?, parse_rational(y)?);
                if !factors.curve.on_curve(&pt) {
                    return Err(Error::Validation(format!("heegner_point ({x}, {y}) is not on the curve")));
                }
                Some(pt)
            }
        };
        Ok(Scenario { file, order, factors, point })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::load(ScenarioFile::from_path(path)?)
    }

    pub fn digits(&self) -> i64 {
        self.file.precision.padic_digits
    }
}

fn parse_power(s: &str, p: u64) -> Result<i64> {
    let bad = || Error::Validation(format!("bad p-adic term {s:?} for p = {p}"));
    let (base, e) = match s.split_once('^') {
        Some((b, e)) => (b.trim(), e.trim().trim_start_matches('(').trim_end_matches(')').parse::<i64>().map_err(|_| bad())?),
        None => (s.trim(), 1),
    };
    if base.parse::<u64>().map_err(|_| bad())? != p {
        return Err(bad());
    }
    Ok(e)
}

/// Parses "r", "r + O(p^n)", or a digit expansion "a₀ + a₁*p + … + O(p^n)"
/// (the form produced by [`PadicNumber::render`]) into Q_p. Without an O-term
/// the precision is `default_prec`.
pub fn parse_padic_literal(s: &str, p: u64, default_prec: i64) -> Result<PadicNumber> {
    let mut sum = BigRational::zero();
    let mut prec = None;
    for term in s.split('+').map(str::trim) {
        if term.is_empty() {
            return Err(Error::Validation(format!("empty term in p-adic literal {s:?}")));
        }
        if let Some(inner) = term.strip_prefix("O(").and_then(|t| t.strip_suffix(')')) {
            prec = Some(parse_power(inner, p)?);
            continue;
        }
        let value = match term.split_once('*') {
            Some((coef, power)) => parse_rational(coef)? * pow(&BigRational::from_integer(p.into()), parse_power(power, p)?),
            None if term.contains('^') => pow(&BigRational::from_integer(p.into()), parse_power(term, p)?),
            None => parse_rational(term)?,
        };
        sum += value;
    }
    PadicNumber::from_rational(&sum, p, prec.unwrap_or(default_prec)).map_err(invalid)
}
