//! Parameter sweeps over coupling, gap and angle grids, with CSV and JSON output.
//!
//! Rows come out in a fixed order (coupling outer, gap middle, angle inner)
//! regardless of how many threads evaluate them. Floats are written with 17
//! significant digits.
//!
//! CSV columns: `g, N, phi, re_R, im_R, re_T, im_T, abs_R2, abs_T2, defect,
//! method, resonance_flag, discrepancy`. `g` and `N` are empty for models that
//! are not a two-centre pair, and `discrepancy` is empty unless both methods
//! were run.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::lattice::EnergyAngle;
use crate::model::Model;
use crate::potential::{ChainSpec, MultiCenterSpec, TwoCenterSpec};
use crate::scattering::{closed_form, solve_numeric, Amplitudes};

/// Default distance kept from the band edges by angle grids.
pub const EDGE_MARGIN: f64 = 1e-3;

pub const CSV_HEADER: [&str; 13] = [
    "g",
    "N",
    "phi",
    "re_R",
    "im_R",
    "re_T",
    "im_T",
    "abs_R2",
    "abs_T2",
    "defect",
    "method",
    "resonance_flag",
    "discrepancy",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Numeric,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "numeric" => Ok(Method::Numeric),
            "both" => Ok(Method::Both),
            _ => Err(Error::Domain(format!(
                "unknown method '{s}' (closed, numeric, both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Domain(format!("unknown format '{s}' (csv, json)"))),
        }
    }
}

/// Evenly spaced angles, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiGrid {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl Default for PhiGrid {
    fn default() -> Self {
        Self {
            count: 40,
            min: EDGE_MARGIN,
            max: PI - EDGE_MARGIN,
        }
    }
}

impl PhiGrid {
    pub fn new(count: usize, min: f64, max: f64) -> Result<Self> {
        let grid = Self { count, min, max };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Domain("phi grid is empty".into()));
        }
        if !(self.min > 0.0 && self.max < PI && self.min <= self.max) {
            return Err(Error::Domain(format!(
                "phi grid bounds {}..{} must satisfy 0 < min <= max < pi",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|j| {
                if j + 1 == self.count {
                    self.max
                } else {
                    self.min + j as f64 * step
                }
            })
            .collect()
    }
}

impl FromStr for PhiGrid {
    type Err = Error;

    /// `count:min:max`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("phi grid '{s}' is not count:min:max"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let count = parts[0].trim().parse().map_err(|_| bad())?;
        let min = parts[1].trim().parse().map_err(|_| bad())?;
        let max = parts[2].trim().parse().map_err(|_| bad())?;
        PhiGrid::new(count, min, max)
    }
}

/// Which scatterers a sweep visits.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepModel {
    /// Cartesian product of couplings and gaps.
    TwoCenter {
        couplings: Vec<f64>,
        gaps: Vec<i64>,
    },
    Chain(ChainSpec),
    MultiCenter(MultiCenterSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: SweepModel,
    pub phi: PhiGrid,
    pub method: Method,
}

/// One grid point of the sweep, ready for evaluation.
#[derive(Debug, Clone)]
struct Point {
    g: Option<f64>,
    gap: Option<i64>,
    model: Model,
    phi: EnergyAngle,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.phi.validate()?;
        match &self.model {
            SweepModel::TwoCenter { couplings, gaps } => {
                if couplings.is_empty() || gaps.is_empty() {
                    return Err(Error::Domain(
                        "coupling and gap grids must be non-empty".into(),
                    ));
                }
                for &g in couplings {
                    for &n in gaps {
                        TwoCenterSpec::new(g, n)?;
                    }
                }
            }
            _ if self.method != Method::Numeric => {
                return Err(Error::Domain(
                    "closed forms exist only for the two-center model; use --method numeric".into(),
                ))
            }
            _ => {}
        }
        Ok(())
    }

    fn points(&self) -> Result<Vec<Point>> {
        self.validate()?;
        let phis = self
            .phi
            .points()
            .into_iter()
            .map(EnergyAngle::new)
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        match &self.model {
            SweepModel::TwoCenter { couplings, gaps } => {
                for &g in couplings {
                    for &n in gaps {
                        let model = Model::TwoCenter(TwoCenterSpec::new(g, n)?);
                        out.extend(phis.iter().map(|&phi| Point {
                            g: Some(g),
                            gap: Some(n),
                            model: model.clone(),
                            phi,
                        }));
                    }
                }
            }
            SweepModel::Chain(spec) => out.extend(phis.iter().map(|&phi| Point {
                g: None,
                gap: None,
                model: Model::Chain(spec.clone()),
                phi,
            })),
            SweepModel::MultiCenter(spec) => out.extend(phis.iter().map(|&phi| Point {
                g: None,
                gap: None,
                model: Model::MultiCenter(spec.clone()),
                phi,
            })),
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodUsed {
    Closed,
    Numeric,
}

impl fmt::Display for MethodUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodUsed::Closed => "closed",
            MethodUsed::Numeric => "numeric",
        })
    }
}

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub g: Option<f64>,
    pub gap: Option<i64>,
    pub amplitudes: Amplitudes,
    pub method: MethodUsed,
    /// The closed form was guarded at this angle and the numeric result stands in.
    pub resonance: bool,
    /// Closed versus numeric, filled only when both ran.
    pub discrepancy: Option<f64>,
}

fn evaluate_point(point: &Point, method: Method) -> Result<Vec<Record>> {
    let record = |amplitudes, method, resonance, discrepancy| Record {
        g: point.g,
        gap: point.gap,
        amplitudes,
        method,
        resonance,
        discrepancy,
    };
    let numeric = || solve_numeric(&point.model, point.phi).map(|s| s.amplitudes);
    let closed = || match &point.model {
        Model::TwoCenter(spec) => match closed_form(spec, point.phi) {
            Ok((a, _)) => Ok(Some(a)),
            Err(Error::ResonantAngle { .. }) => Ok(None),
            Err(e) => Err(e),
        },
        _ => Err(Error::Domain("no closed form for this model".into())),
    };
    Ok(match method {
        Method::Numeric => vec![record(numeric()?, MethodUsed::Numeric, false, None)],
        Method::Closed => match closed()? {
            Some(a) => vec![record(a, MethodUsed::Closed, false, None)],
            None => vec![record(numeric()?, MethodUsed::Numeric, true, None)],
        },
        Method::Both => {
            let n = numeric()?;
            match closed()? {
                Some(c) => {
                    let d = Some(c.discrepancy(&n));
                    vec![
                        record(c, MethodUsed::Closed, false, d),
                        record(n, MethodUsed::Numeric, false, d),
                    ]
                }
                None => vec![record(n, MethodUsed::Numeric, true, None)],
            }
        }
    })
}

/// Evaluates every grid point. `threads = None` uses the global rayon pool.
pub fn evaluate(config: &SweepConfig, threads: Option<usize>) -> Result<Vec<Record>> {
    let points = config.points()?;
    let run = || {
        points
            .par_iter()
            .map(|p| evaluate_point(p, config.method))
            .collect::<Result<Vec<_>>>()
    };
    let nested = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(nested.into_iter().flatten().collect())
}

/// 17 significant digits, parseable back to the same `f64`.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_fields(r: &Record) -> [String; 13] {
    let a = &r.amplitudes;
    [
        r.g.map(sci).unwrap_or_default(),
        r.gap.map(|n| n.to_string()).unwrap_or_default(),
        sci(a.phi.value()),
        sci(a.reflection.re),
        sci(a.reflection.im),
        sci(a.transmission.re),
        sci(a.transmission.im),
        sci(a.reflectance()),
        sci(a.transmittance()),
        sci(a.unitarity_defect),
        r.method.to_string(),
        u8::from(r.resonance).to_string(),
        r.discrepancy.map(sci).unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(records: &[Record], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(csv_fields(r))?;
    }
    w.flush()
}

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("formatted number is valid JSON")
}

fn raw_opt(x: Option<f64>) -> Box<RawValue> {
    raw(x.map(sci).unwrap_or_else(|| "null".into()))
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct JsonRecord {
    g: Box<RawValue>,
    #[serde(rename = "N")]
    gap: Option<i64>,
    phi: Box<RawValue>,
    re_R: Box<RawValue>,
    im_R: Box<RawValue>,
    re_T: Box<RawValue>,
    im_T: Box<RawValue>,
    abs_R2: Box<RawValue>,
    abs_T2: Box<RawValue>,
    defect: Box<RawValue>,
    method: String,
    resonance_flag: u8,
    discrepancy: Box<RawValue>,
}

impl From<&Record> for JsonRecord {
    fn from(r: &Record) -> Self {
        let a = &r.amplitudes;
        let f = |x: f64| raw(sci(x));
        JsonRecord {
            g: raw_opt(r.g),
            gap: r.gap,
            phi: f(a.phi.value()),
            re_R: f(a.reflection.re),
            im_R: f(a.reflection.im),
            re_T: f(a.transmission.re),
            im_T: f(a.transmission.im),
            abs_R2: f(a.reflectance()),
            abs_T2: f(a.transmittance()),
            defect: f(a.unitarity_defect),
            method: r.method.to_string(),
            resonance_flag: u8::from(r.resonance),
            discrepancy: raw_opt(r.discrepancy),
        }
    }
}

pub fn write_json<W: Write>(records: &[Record], mut out: W) -> std::io::Result<()> {
    let rows: Vec<JsonRecord> = records.iter().map(JsonRecord::from).collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    out.write_all(b"\n")
}

pub fn write_records<W: Write>(records: &[Record], format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_center(
        couplings: Vec<f64>,
        gaps: Vec<i64>,
        count: usize,
        method: Method,
    ) -> SweepConfig {
        SweepConfig {
            model: SweepModel::TwoCenter { couplings, gaps },
            phi: PhiGrid::new(count, 0.05, PI - 0.05).unwrap(),
            method,
        }
    }

    #[test]
    fn grid_parsing() {
        let g: PhiGrid = "5:0.1:3.0".parse().unwrap();
        assert_eq!(g.points().len(), 5);
        assert_eq!(g.points()[4], 3.0);
        assert!("0:0.1:3.0".parse::<PhiGrid>().is_err());
        assert!("5:0:3.0".parse::<PhiGrid>().is_err());
        assert!("5:0.1:4".parse::<PhiGrid>().is_err());
        assert!("5:0.1".parse::<PhiGrid>().is_err());
        let d = PhiGrid::default();
        assert_eq!(d.points()[0], EDGE_MARGIN);
    }

    #[test]
    fn row_order_and_count() {
        let cfg = two_center(vec![0.1, 0.5], vec![-1, 3], 4, Method::Numeric);
        let rows = evaluate(&cfg, Some(3)).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0].g, Some(0.1));
        assert_eq!(rows[3].gap, Some(-1));
        assert_eq!(rows[4].gap, Some(3));
        assert_eq!(rows[8].g, Some(0.5));
        assert!(rows[1].amplitudes.phi > rows[0].amplitudes.phi);
    }

    #[test]
    fn both_method_pairs_rows() {
        let cfg = two_center(vec![0.3], vec![2], 6, Method::Both);
        let rows = evaluate(&cfg, None).unwrap();
        let paired = rows.iter().filter(|r| r.discrepancy.is_some()).count();
        assert_eq!(paired % 2, 0);
        for r in rows.iter().filter_map(|r| r.discrepancy) {
            assert!(r < 1e-10);
        }
    }

    #[test]
    fn resonant_points_fall_back() {
        // phi = pi/2 makes cos(N phi) vanish for N = 1
        let cfg = SweepConfig {
            model: SweepModel::TwoCenter {
                couplings: vec![0.4],
                gaps: vec![1],
            },
            phi: PhiGrid::new(1, PI / 2.0, PI / 2.0).unwrap(),
            method: Method::Closed,
        };
        let rows = evaluate(&cfg, None).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].resonance);
        assert_eq!(rows[0].method, MethodUsed::Numeric);
    }

    #[test]
    fn chain_requires_numeric() {
        let cfg = SweepConfig {
            model: SweepModel::Chain(ChainSpec::new(vec![0.2]).unwrap()),
            phi: PhiGrid::default(),
            method: Method::Both,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn invalid_coupling_rejected() {
        let cfg = two_center(vec![1.2], vec![0], 3, Method::Numeric);
        assert!(matches!(evaluate(&cfg, None), Err(Error::Positivity(_))));
    }

    #[test]
    fn csv_and_json_shapes() {
        let cfg = two_center(vec![0.5], vec![0], 3, Method::Both);
        let rows = evaluate(&cfg, None).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), rows.len() + 1);

        let mut buf = Vec::new();
        write_json(&rows, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), rows.len());
        assert_eq!(arr[0]["N"], 0);
        assert_eq!(
            arr[0]["re_R"].as_f64().unwrap(),
            rows[0].amplitudes.reflection.re
        );
    }

    #[test]
    fn sci_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(sci(x).parse::<f64>().unwrap(), x);
        }
    }
}
