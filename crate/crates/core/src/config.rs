//! Flat `key = value` model configuration.
//!
//! Dimensional keys carry their unit as a suffix (`r0_cm`, `p_max_bar`,
//! `e_bar2`); any unit of the right dimension is accepted and converted to SI
//! on ingestion. Unknown keys are rejected.
//!
//! ```text
//! model = festo
//! r0_cm = 1.09
//! alpha0_deg = 25.5
//! d_bar = -10.5
//! e_bar2 = -779
//! k_table_bar = 3:1.60, 5:1.31
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::actuator::{init_contraction, Actuator, ActuatorConfig, DEFAULT_EPS_THRESHOLD};
use crate::error::{Error, Result};
use crate::geometry::MuscleGeometry;
use crate::muscle::{
    AndrikopoulosParams, HoganParams, KTable, ModifiedMcKibbenParams, MuscleModel,
    PolynomialFestoParams, RationalFestoParams, ReferenceModel, ReferenceModelSpec,
};
use crate::units::{bar, cm, deg, Dimension, Unit, PA2_PER_BAR2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Hogan,
    McKibben,
    ModifiedMcKibben,
    Andrikopoulos,
    Festo,
    Polynomial,
    Hildebrandt,
    Sarosi,
    Wickramatunge,
}

impl ModelKind {
    pub const ALL: [ModelKind; 9] = [
        ModelKind::Hogan,
        ModelKind::McKibben,
        ModelKind::ModifiedMcKibben,
        ModelKind::Andrikopoulos,
        ModelKind::Festo,
        ModelKind::Polynomial,
        ModelKind::Hildebrandt,
        ModelKind::Sarosi,
        ModelKind::Wickramatunge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Hogan => "hogan",
            ModelKind::McKibben => "mckibben",
            ModelKind::ModifiedMcKibben => "modified-mckibben",
            ModelKind::Andrikopoulos => "andrikopoulos",
            ModelKind::Festo => "festo",
            ModelKind::Polynomial => "polynomial",
            ModelKind::Hildebrandt => "hildebrandt",
            ModelKind::Sarosi => "sarosi",
            ModelKind::Wickramatunge => "wickramatunge",
        }
    }

    /// Models driven by a pressure (everything except Hogan's activation).
    pub fn pressure_driven(self) -> bool {
        self != ModelKind::Hogan
    }

    fn festo_family(self) -> bool {
        matches!(self, ModelKind::Festo | ModelKind::Polynomial)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.as_str()).collect();
                Error::Config(format!(
                    "unknown model `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Every value is optional; unset values fall back to the defaults of the
/// selected model. All stored values are SI.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelConfig {
    pub model: Option<ModelKind>,
    pub r0: Option<f64>,
    pub l0: Option<f64>,
    pub alpha0: Option<f64>,
    /// Pa
    pub c: Option<f64>,
    /// Pa
    pub d: Option<f64>,
    /// Pa²
    pub e: Option<f64>,
    /// Pa
    pub poly_coeffs: Option<Vec<f64>>,
    /// (Pa, k)
    pub k_table: Option<Vec<(f64, f64)>>,
    pub q: Option<f64>,
    pub f_max: Option<f64>,
    pub eps_max: Option<f64>,
    pub ref_c: Option<Vec<f64>>,
    pub ref_d: Option<Vec<f64>>,
    pub ref_min_length: Option<f64>,
    /// Pa per coefficient pressure unit.
    pub ref_pressure_unit: Option<f64>,
    pub pulley_radius: Option<f64>,
    pub eps0: Option<f64>,
    pub eps_threshold: Option<f64>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
}

#[derive(Clone, Copy)]
enum Quantity {
    Plain(Dimension),
    PressureSquared,
}

const DIMENSIONAL_KEYS: [(&str, Quantity); 11] = [
    ("r0", Quantity::Plain(Dimension::Length)),
    ("l0", Quantity::Plain(Dimension::Length)),
    ("R", Quantity::Plain(Dimension::Length)),
    ("ref_min_length", Quantity::Plain(Dimension::Length)),
    ("alpha0", Quantity::Plain(Dimension::Angle)),
    ("c", Quantity::Plain(Dimension::Pressure)),
    ("d", Quantity::Plain(Dimension::Pressure)),
    ("p_min", Quantity::Plain(Dimension::Pressure)),
    ("p_max", Quantity::Plain(Dimension::Pressure)),
    ("e", Quantity::PressureSquared),
    ("f_max", Quantity::Plain(Dimension::Force)),
];

const LIST_KEYS: [(&str, Dimension); 2] = [
    ("poly_coeffs", Dimension::Pressure),
    ("k_table", Dimension::Pressure),
];

const PLAIN_KEYS: [&str; 8] = [
    "model",
    "q",
    "eps_max",
    "eps0",
    "eps_threshold",
    "ref_c",
    "ref_d",
    "ref_pressure_unit",
];

fn number(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: `{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("`{key}`: value must be finite")));
    }
    Ok(x)
}

fn numbers(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| number(key, s)).collect()
}

/// Splits `base_suffix` and returns the unit named by the suffix.
fn suffixed<'k>(key: &'k str, bases: &[&str]) -> Option<(&'k str, &'k str)> {
    bases
        .iter()
        .filter_map(|b| {
            key.strip_prefix(b)
                .and_then(|rest| rest.strip_prefix('_'))
                .map(|s| (&key[..b.len()], s))
        })
        .max_by_key(|(b, _)| b.len())
}

fn unit_for(key: &str, suffix: &str, dim: Dimension) -> Result<Unit> {
    let unit: Unit = suffix
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: unknown unit suffix `{suffix}`")))?;
    if unit.dimension() != dim {
        return Err(Error::DimensionMismatch {
            from: format!("{key} ({})", unit.symbol()),
            to: format!("{dim:?}").to_lowercase(),
        });
    }
    Ok(unit)
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("line {}: {msg}", i + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one key, converting its value to SI.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if PLAIN_KEYS.contains(&key) {
            match key {
                "model" => self.model = Some(value.parse()?),
                "q" => self.q = Some(number(key, value)?),
                "eps_max" => self.eps_max = Some(number(key, value)?),
                "eps0" => self.eps0 = Some(number(key, value)?),
                "eps_threshold" => self.eps_threshold = Some(number(key, value)?),
                "ref_c" => self.ref_c = Some(numbers(key, value)?),
                "ref_d" => self.ref_d = Some(numbers(key, value)?),
                "ref_pressure_unit" => {
                    let unit = unit_for(key, value, Dimension::Pressure)?;
                    self.ref_pressure_unit = Some(unit.to_si(1.0));
                }
                _ => unreachable!(),
            }
            return Ok(());
        }
        let list_bases: Vec<&str> = LIST_KEYS.iter().map(|k| k.0).collect();
        if let Some((base, suffix)) = suffixed(key, &list_bases) {
            let unit = unit_for(key, suffix, Dimension::Pressure)?;
            match base {
                "poly_coeffs" => {
                    self.poly_coeffs = Some(
                        numbers(key, value)?
                            .into_iter()
                            .map(|x| unit.to_si(x))
                            .collect(),
                    )
                }
                _ => {
                    let pairs = value
                        .split(',')
                        .map(|pair| {
                            let (p, k) = pair.split_once(':').ok_or_else(|| {
                                Error::Config(format!(
                                    "`{key}`: expected `pressure:k` pairs, got `{}`",
                                    pair.trim()
                                ))
                            })?;
                            Ok((unit.to_si(number(key, p)?), number(key, k)?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    self.k_table = Some(pairs);
                }
            }
            return Ok(());
        }
        let bases: Vec<&str> = DIMENSIONAL_KEYS.iter().map(|k| k.0).collect();
        let Some((base, suffix)) = suffixed(key, &bases) else {
            if bases.contains(&key) || list_bases.contains(&key) {
                return Err(Error::Config(format!(
                    "`{key}` needs a unit suffix, e.g. `{key}_{}`",
                    default_suffix(key)
                )));
            }
            return Err(Error::Config(format!("unknown key `{key}`")));
        };
        let quantity = DIMENSIONAL_KEYS
            .iter()
            .find(|k| k.0 == base)
            .map(|k| k.1)
            .expect("known base");
        let x = number(key, value)?;
        let si = match quantity {
            Quantity::Plain(dim) => unit_for(key, suffix, dim)?.to_si(x),
            Quantity::PressureSquared => {
                let unit_name = suffix.strip_suffix('2').ok_or_else(|| {
                    Error::Config(format!(
                        "`{key}` is a squared pressure; use a suffix like `bar2`"
                    ))
                })?;
                let unit = unit_for(key, unit_name, Dimension::Pressure)?;
                x * unit.to_si(1.0).powi(2)
            }
        };
        let slot = match base {
            "r0" => &mut self.r0,
            "l0" => &mut self.l0,
            "R" => &mut self.pulley_radius,
            "ref_min_length" => &mut self.ref_min_length,
            "alpha0" => &mut self.alpha0,
            "c" => &mut self.c,
            "d" => &mut self.d,
            "e" => &mut self.e,
            "p_min" => &mut self.p_min,
            "p_max" => &mut self.p_max,
            "f_max" => &mut self.f_max,
            _ => unreachable!(),
        };
        *slot = Some(si);
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        self.model.unwrap_or(ModelKind::Festo)
    }

    /// Geometry, defaulting to the 1 cm / 23.5° McKibben muscle or the
    /// 1.09 cm / 25.5° Festo muscle, both 40 cm long.
    pub fn geometry(&self) -> Result<MuscleGeometry> {
        let (r0, alpha0) = if self.kind().festo_family() {
            (cm(1.09), deg(25.5))
        } else {
            (cm(1.0), deg(23.5))
        };
        MuscleGeometry::new(
            self.r0.unwrap_or(r0),
            self.l0.unwrap_or(cm(40.0)),
            self.alpha0.unwrap_or(alpha0),
        )
    }

    fn require<T: Clone>(&self, v: &Option<T>, key: &str) -> Result<T> {
        v.clone()
            .ok_or_else(|| Error::Config(format!("model `{}` needs `{key}`", self.kind())))
    }

    pub fn hogan(&self) -> Result<HoganParams> {
        HoganParams::new(
            self.f_max.unwrap_or(1500.0),
            self.eps_max.unwrap_or(0.37),
            self.l0.unwrap_or(cm(40.0)),
        )
    }

    /// Rational model; defaults are `c = 0`, `d = −10.5 bar`, `e = −779 bar²`.
    pub fn rational(&self) -> Result<RationalFestoParams> {
        RationalFestoParams::new(
            self.geometry()?,
            self.c.unwrap_or(0.0),
            self.d.unwrap_or(bar(-10.5)),
            self.e.unwrap_or(-779.0 * PA2_PER_BAR2),
        )
    }

    fn k_table(&self) -> Result<KTable> {
        KTable::new(self.require(&self.k_table, "k_table_bar")?)
    }

    fn reference_spec(&self) -> Result<ReferenceModelSpec> {
        let c = self.require(&self.ref_c, "ref_c")?;
        match self.kind() {
            ModelKind::Hildebrandt => {
                ReferenceModelSpec::hildebrandt(&c, &self.require(&self.ref_d, "ref_d")?)
            }
            ModelKind::Sarosi => ReferenceModelSpec::sarosi(&c),
            _ => ReferenceModelSpec::wickramatunge(&c, self.ref_min_length.unwrap_or(0.0)),
        }
    }

    pub fn muscle(&self) -> Result<MuscleModel> {
        Ok(match self.kind() {
            ModelKind::Hogan => self.hogan()?.into(),
            ModelKind::McKibben => self.geometry()?.into(),
            ModelKind::ModifiedMcKibben => {
                ModifiedMcKibbenParams::new(self.geometry()?, self.k_table()?).into()
            }
            ModelKind::Andrikopoulos => AndrikopoulosParams::new(
                self.geometry()?,
                self.require(&self.q, "q")?,
                self.k_table()?,
            )?
            .into(),
            ModelKind::Festo => self.rational()?.into(),
            ModelKind::Polynomial => PolynomialFestoParams::new(
                self.geometry()?,
                self.require(&self.poly_coeffs, "poly_coeffs_bar")?,
            )?
            .into(),
            ModelKind::Hildebrandt | ModelKind::Sarosi | ModelKind::Wickramatunge => {
                ReferenceModel::new(
                    self.reference_spec()?,
                    self.l0.unwrap_or(cm(40.0)),
                    self.ref_pressure_unit.unwrap_or(bar(1.0)),
                )?
                .into()
            }
        })
    }

    /// Pulley 2 cm, threshold 0.025, box 0–5 bar; `eps0` falls back to `default_eps0`.
    pub fn actuator_config(&self, default_eps0: f64) -> Result<ActuatorConfig> {
        ActuatorConfig::new(
            self.pulley_radius.unwrap_or(cm(2.0)),
            self.eps0.unwrap_or(default_eps0),
            self.eps_threshold.unwrap_or(DEFAULT_EPS_THRESHOLD),
            self.p_min.unwrap_or(0.0),
            self.p_max.unwrap_or(bar(5.0)),
        )
    }

    /// `ε0` defaults to half of `εmax`.
    pub fn hogan_actuator(&self) -> Result<Actuator<HoganParams>> {
        let m = self.hogan()?;
        let cfg = self.actuator_config(m.eps_max / 2.0)?;
        Actuator::new_hogan(m, cfg)
    }

    /// `ε0` defaults to half of `εmax`.
    pub fn mckibben_actuator(&self) -> Result<Actuator<MuscleGeometry>> {
        let g = self.geometry()?;
        let cfg = self.actuator_config(g.eps_max() / 2.0)?;
        Actuator::new_mckibben(g, cfg)
    }

    /// `ε0` defaults to half of `εmax(p_max)`.
    pub fn festo_actuator(&self) -> Result<Actuator<RationalFestoParams>> {
        let m = self.rational()?;
        let p_max = self.p_max.unwrap_or(bar(5.0));
        let cfg = self.actuator_config(init_contraction(&m, p_max)?)?;
        Actuator::new_festo(m, cfg)
    }
}

fn default_suffix(key: &str) -> &'static str {
    match key {
        "r0" | "l0" | "R" | "ref_min_length" => "cm",
        "alpha0" => "deg",
        "e" => "bar2",
        "f_max" => "N",
        _ => "bar",
    }
}
