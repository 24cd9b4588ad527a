//! CSV ingestion of measured force curves and emission of sweep tables.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::actuator::{Feasibility, SweepRow};
use crate::error::{Error, Result};
use crate::units::{bar, to_bar};

pub const CURVE_HEADER: [&str; 3] = ["pressure_bar", "contraction_ratio", "force_N"];
pub const SWEEP_HEADER: [&str; 7] = [
    "stiffness_Nm_per_rad",
    "theta_deg",
    "p1_minus_p2_bar",
    "p1_plus_p2_bar",
    "p1_bar",
    "p2_bar",
    "feasible",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    /// Pa
    pub pressure: f64,
    pub eps: f64,
    /// N
    pub force: f64,
    /// 1-based line number in the source file.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceCurveDataset {
    pub muscle: String,
    pub samples: Vec<CurveSample>,
    /// Units of the source columns.
    pub source_units: [&'static str; 3],
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::Schema(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

/// CRLF is folded to LF up front so that reported line numbers stay exact.
fn reader<R: Read>(mut input: R) -> Result<csv::Reader<std::io::Cursor<String>>> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    if text.contains('\r') {
        text = text.replace("\r\n", "\n");
    }
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::None)
        .from_reader(std::io::Cursor::new(text)))
}

fn line_of(rec: &csv::StringRecord, fallback: usize) -> usize {
    rec.position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback)
}

fn csv_error(e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
        _ => Error::Schema(e.to_string()),
    }
}

/// Parses a force-curve CSV from any reader. `muscle` labels the dataset.
pub fn parse_curve_csv<R: Read>(input: R, muscle: &str) -> Result<ForceCurveDataset> {
    let mut rdr = reader(input)?;
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r.map_err(csv_error)?,
        None => {
            return Err(Error::Schema(format!(
                "missing header `{}`",
                CURVE_HEADER.join(",")
            )))
        }
    };
    check_header(&header, &CURVE_HEADER)?;

    let mut samples = Vec::new();
    let mut problems = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in records.enumerate() {
        let rec = rec.map_err(csv_error)?;
        let line = line_of(&rec, i + 2);
        if rec.len() != 3 {
            problems.push((line, format!("expected 3 fields, found {}", rec.len())));
            continue;
        }
        let mut vals = [0.0; 3];
        let mut bad = false;
        for (j, cell) in rec.iter().enumerate() {
            match cell.trim().parse::<f64>() {
                Ok(v) => vals[j] = v,
                Err(_) => {
                    problems.push((
                        line,
                        format!("`{cell}` in {} is not a number", CURVE_HEADER[j]),
                    ));
                    bad = true;
                }
            }
        }
        if bad {
            continue;
        }
        let [p, eps, f] = vals;
        if !(p > 0.0 && p.is_finite()) {
            problems.push((line, format!("pressure {p} bar must be positive")));
            continue;
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            problems.push((
                line,
                format!("contraction ratio {eps} must be non-negative"),
            ));
            continue;
        }
        if !f.is_finite() {
            problems.push((line, format!("force {f} is not finite")));
            continue;
        }
        if !seen.insert((p.to_bits(), eps.to_bits())) {
            problems.push((line, format!("duplicate sample at ({p} bar, {eps})")));
            continue;
        }
        samples.push(CurveSample {
            pressure: bar(p),
            eps,
            force: f,
            line,
        });
    }
    match problems.len() {
        0 => {}
        1 => {
            let (row, message) = problems.remove(0);
            return Err(Error::Row { row, message });
        }
        _ => return Err(Error::Rows(problems)),
    }
    if samples.is_empty() {
        return Err(Error::Empty("dataset body"));
    }
    Ok(ForceCurveDataset {
        muscle: muscle.to_string(),
        samples,
        source_units: ["bar", "1", "N"],
    })
}

pub fn load_curve_csv(path: &Path) -> Result<ForceCurveDataset> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_curve_csv(file, &name)
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let decimals = (8 - exp) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        fixed
    }
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "{}", SWEEP_HEADER.join(","))?;
    for row in rows {
        let (p1, p2) = match row.solution.command {
            Some(pp) => (pp.p1, pp.p2),
            None => (f64::NAN, f64::NAN),
        };
        let fields = [
            row.stiffness,
            row.theta.to_degrees(),
            to_bar(p1 - p2),
            to_bar(p1 + p2),
            to_bar(p1),
            to_bar(p2),
        ];
        let line: Vec<String> = fields.iter().map(|&v| format_sig9(v)).collect();
        writeln!(w, "{},{}", line.join(","), row.solution.feasibility)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_sweep(rows, file)
}

/// One parsed line of a sweep CSV, in file units (N·m/rad, degrees, bar).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub stiffness: f64,
    pub theta_deg: f64,
    pub difference_bar: f64,
    pub sum_bar: f64,
    pub p1_bar: f64,
    pub p2_bar: f64,
    pub feasibility: Feasibility,
}

pub fn parse_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut records = reader(input)?.into_records();
    let header = match records.next() {
        Some(r) => r.map_err(csv_error)?,
        None => return Err(Error::Schema("missing header".into())),
    };
    check_header(&header, &SWEEP_HEADER)?;
    records
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_error)?;
            let line = line_of(&rec, i + 2);
            if rec.len() != SWEEP_HEADER.len() {
                return Err(Error::Row {
                    row: line,
                    message: format!("expected 7 fields, found {}", rec.len()),
                });
            }
            let num = |j: usize| -> Result<f64> {
                rec[j].parse().map_err(|_| Error::Row {
                    row: line,
                    message: format!("`{}` in {} is not a number", &rec[j], SWEEP_HEADER[j]),
                })
            };
            Ok(SweepRecord {
                stiffness: num(0)?,
                theta_deg: num(1)?,
                difference_bar: num(2)?,
                sum_bar: num(3)?,
                p1_bar: num(4)?,
                p2_bar: num(5)?,
                feasibility: rec[6].parse().map_err(|e: Error| Error::Row {
                    row: line,
                    message: e.to_string(),
                })?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(6.0), "6");
        assert_eq!(format_sig9(-125.0), "-125");
        assert_eq!(format_sig9(3.23090516370576), "3.23090516");
        assert_eq!(format_sig9(0.1), "0.1");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1234567894.0), "1.23456789e9");
        assert_eq!(format_sig9(1.5e-7), "1.5e-7");
        assert_eq!(format_sig9(0.000123456789123), "0.000123456789");
        assert_eq!(format_sig9(9.999999999), "10");
        assert_eq!(format_sig9(f64::NAN), "NaN");
    }

    #[test]
    fn loads_well_formed_curve() {
        let text = "pressure_bar,contraction_ratio,force_N\n3,0,700\n3,0.1,350.5\r\n5,0,1450\n";
        let d = parse_curve_csv(text.as_bytes(), "dsmp").unwrap();
        assert_eq!(d.samples.len(), 3);
        assert_eq!(d.samples[1].pressure, 3e5);
        assert_eq!(d.samples[1].force, 350.5);
        assert_eq!(d.samples[2].line, 4);
    }

    #[test]
    fn rejects_wrong_header() {
        let err = parse_curve_csv("P,eps,F\n3,0,1\n".as_bytes(), "x").unwrap_err();
        match err {
            Error::Schema(msg) => assert!(msg.contains("pressure_bar,contraction_ratio,force_N")),
            other => panic!("{other:?}"),
        }
        assert!(
            parse_curve_csv("Pressure_bar,contraction_ratio,force_N\n".as_bytes(), "x").is_err()
        );
    }

    #[test]
    fn reports_offending_rows() {
        let err = parse_curve_csv(
            "pressure_bar,contraction_ratio,force_N\n3,0,1\n3,-0.1,2\n".as_bytes(),
            "x",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Row { row: 3, .. }), "{err:?}");

        let err = parse_curve_csv(
            "pressure_bar,contraction_ratio,force_N\n3,abc,1\n3,0.1,2\n3,0.1,5\n".as_bytes(),
            "x",
        )
        .unwrap_err();
        match err {
            Error::Rows(rows) => {
                assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), vec![2, 4]);
                let msg = Error::Rows(rows).to_string();
                assert!(msg.contains("line 2") && msg.contains("line 4"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_empty_body() {
        let err = parse_curve_csv("pressure_bar,contraction_ratio,force_N\n".as_bytes(), "x")
            .unwrap_err();
        assert_eq!(err, Error::Empty("dataset body"));
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let mut buf = Vec::new();
        write_sweep(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{}\n", SWEEP_HEADER.join(","))
        );
    }
}
