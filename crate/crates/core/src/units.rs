//! Unit handling at the crate boundary.
//!
//! Everything inside the crate is SI: pascal, newton, meter, radian and
//! newton-meter per radian. Human units (bar, cm, degrees) only appear when
//! reading configuration, command-line flags and CSV files.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const PA_PER_BAR: f64 = 1e5;
pub const PA2_PER_BAR2: f64 = 1e10;

#[inline]
pub fn bar(p: f64) -> f64 {
    p * PA_PER_BAR
}

#[inline]
pub fn to_bar(p: f64) -> f64 {
    p / PA_PER_BAR
}

#[inline]
pub fn cm(l: f64) -> f64 {
    l / 100.0
}

#[inline]
pub fn mm(l: f64) -> f64 {
    l / 1000.0
}

#[inline]
pub fn deg(a: f64) -> f64 {
    a.to_radians()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Pressure,
    Length,
    Angle,
    Force,
    RotationalStiffness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Bar,
    Pascal,
    Kilopascal,
    Meter,
    Centimeter,
    Millimeter,
    Degree,
    Radian,
    Newton,
    NewtonMeterPerRadian,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Bar | Unit::Pascal | Unit::Kilopascal => Dimension::Pressure,
            Unit::Meter | Unit::Centimeter | Unit::Millimeter => Dimension::Length,
            Unit::Degree | Unit::Radian => Dimension::Angle,
            Unit::Newton => Dimension::Force,
            Unit::NewtonMeterPerRadian => Dimension::RotationalStiffness,
        }
    }

    /// Converts a magnitude expressed in `self` to the SI unit of its dimension.
    pub fn to_si(self, x: f64) -> f64 {
        match self {
            Unit::Bar => x * PA_PER_BAR,
            Unit::Kilopascal => x * 1e3,
            Unit::Centimeter => x / 100.0,
            Unit::Millimeter => x / 1000.0,
            Unit::Degree => x.to_radians(),
            Unit::Pascal
            | Unit::Meter
            | Unit::Radian
            | Unit::Newton
            | Unit::NewtonMeterPerRadian => x,
        }
    }

    pub fn from_si(self, x: f64) -> f64 {
        match self {
            Unit::Bar => x / PA_PER_BAR,
            Unit::Kilopascal => x / 1e3,
            Unit::Centimeter => x * 100.0,
            Unit::Millimeter => x * 1000.0,
            Unit::Degree => x.to_degrees(),
            Unit::Pascal
            | Unit::Meter
            | Unit::Radian
            | Unit::Newton
            | Unit::NewtonMeterPerRadian => x,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Bar => "bar",
            Unit::Pascal => "Pa",
            Unit::Kilopascal => "kPa",
            Unit::Meter => "m",
            Unit::Centimeter => "cm",
            Unit::Millimeter => "mm",
            Unit::Degree => "deg",
            Unit::Radian => "rad",
            Unit::Newton => "N",
            Unit::NewtonMeterPerRadian => "N·m/rad",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bar" => Unit::Bar,
            "Pa" => Unit::Pascal,
            "kPa" => Unit::Kilopascal,
            "m" => Unit::Meter,
            "cm" => Unit::Centimeter,
            "mm" => Unit::Millimeter,
            "deg" => Unit::Degree,
            "rad" => Unit::Radian,
            "N" => Unit::Newton,
            "N·m/rad" | "Nm/rad" | "N.m/rad" => Unit::NewtonMeterPerRadian,
            other => return Err(Error::UnknownUnit(other.to_string())),
        })
    }
}

/// Rescales `x` from `from` to `to`. Both units must share a dimension.
pub fn convert(x: f64, from: Unit, to: Unit) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::DimensionMismatch {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    if from == to {
        return Ok(x);
    }
    Ok(to.from_si(from.to_si(x)))
}
