//! External formats: complex JSON, barcode CSV/JSON, growth CSV, report JSON.
//!
//! Infinite endpoints serialize as the literal string "inf" in both CSV and
//! JSON. All writers are deterministic given the same inputs.

use crate::error::Error;
use crate::novikov::{NovikovComplex, NovikovGenerator, NovikovScalar, UnpinnedBarcode};
use crate::persistence::{Bar, Barcode, FilteredComplexF2, Generator};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub coefficients: String,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub boundary: Vec<BoundaryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub id: String,
    pub action: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<f64>>,
}

pub enum ParsedComplex {
    F2(FilteredComplexF2),
    Novikov(NovikovComplex),
}

pub fn parse_complex(text: &str) -> Result<ParsedComplex, Error> {
    let raw: ComplexJson = serde_json::from_str(text)?;
    let index: HashMap<&str, usize> =
        raw.generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    if index.len() != raw.generators.len() {
        return Err(Error::Input("duplicate generator ids".into()));
    }
    let look = |id: &str| -> Result<usize, Error> {
        index.get(id).copied().ok_or_else(|| Error::Input(format!("unknown generator id `{id}`")))
    };
    match raw.coefficients.as_str() {
        "F2" => {
            let mut boundary = vec![Vec::new(); raw.generators.len()];
            for b in &raw.boundary {
                if b.exponents.is_some() {
                    return Err(Error::Input(
                        "F2 complexes take no exponents; use coefficients = \"Novikov-F2\"".into(),
                    ));
                }
                boundary[look(&b.from)?].push(look(&b.to)?);
            }
            let generators = raw
                .generators
                .iter()
                .map(|g| Generator { id: g.id.clone(), action: g.action, degree: g.degree })
                .collect();
            Ok(ParsedComplex::F2(FilteredComplexF2::new(generators, boundary)?))
        }
        "Novikov-F2" => {
            let n = raw.generators.len();
            let mut differential = vec![vec![NovikovScalar::zero(); n]; n];
            for b in &raw.boundary {
                let exps = b.exponents.clone().unwrap_or_else(|| vec![0.0]);
                let (i, j) = (look(&b.from)?, look(&b.to)?);
                differential[i][j] =
                    differential[i][j].add(&NovikovScalar::from_exponents(exps));
            }
            let generators = raw
                .generators
                .iter()
                .map(|g| NovikovGenerator { id: g.id.clone(), action: g.action })
                .collect();
            Ok(ParsedComplex::Novikov(NovikovComplex::new(generators, differential)?))
        }
        other => Err(Error::Input(format!(
            "unknown coefficient field `{other}` (expected \"F2\" or \"Novikov-F2\")"
        ))),
    }
}

fn fmt_end(end: f64) -> String {
    if end.is_finite() {
        format!("{end}")
    } else {
        "inf".into()
    }
}

pub fn barcode_to_csv(b: &Barcode) -> String {
    let mut out = String::from("start,end,multiplicity\n");
    for bar in &b.bars {
        out.push_str(&format!("{},{},{}\n", bar.start, fmt_end(bar.end), bar.multiplicity));
    }
    out
}

pub fn barcode_to_json(b: &Barcode) -> Value {
    let bars: Vec<Value> = b
        .bars
        .iter()
        .map(|bar| {
            let mut v = json!({
                "start": bar.start,
                "end": if bar.end.is_finite() { json!(bar.end) } else { json!("inf") },
                "multiplicity": bar.multiplicity,
            });
            if let Some(d) = bar.degree {
                v["degree"] = json!(d);
            }
            v
        })
        .collect();
    json!({ "bars": bars, "spectrum": b.spectrum() })
}

pub fn barcode_from_csv(text: &str) -> Result<Barcode, Error> {
    let mut bars = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (ln == 0 && line.starts_with("start")) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 2 {
            return Err(Error::Input(format!("barcode csv line {}: need start,end", ln + 1)));
        }
        let start: f64 = fields[0]
            .parse()
            .map_err(|_| Error::Input(format!("barcode csv line {}: bad start", ln + 1)))?;
        let end = if fields[1] == "inf" {
            f64::INFINITY
        } else {
            fields[1]
                .parse()
                .map_err(|_| Error::Input(format!("barcode csv line {}: bad end", ln + 1)))?
        };
        let multiplicity = if fields.len() > 2 { fields[2].parse().unwrap_or(1) } else { 1 };
        bars.push(Bar { start, end, multiplicity, degree: None });
    }
    Barcode::from_bars(bars)
}

pub fn unpinned_to_csv(b: &UnpinnedBarcode) -> String {
    let mut out = String::from("length\n");
    for l in &b.lengths {
        out.push_str(&format!("{l}\n"));
    }
    for _ in 0..b.infinite {
        out.push_str("inf\n");
    }
    out
}

pub fn growth_to_csv(index_name: &str, series: &crate::growth::GrowthSeries) -> String {
    let mut out = format!("{index_name},count\n");
    for (i, c) in series.index.iter().zip(&series.counts) {
        out.push_str(&format!("{i},{c}\n"));
    }
    out
}

pub fn growth_from_csv(text: &str) -> Result<crate::growth::GrowthSeries, Error> {
    let mut index = Vec::new();
    let mut counts = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Input(format!("growth csv line {}: need index,count", ln + 1)));
        }
        if ln == 0 && fields[1].parse::<f64>().is_err() {
            continue; // header
        }
        index.push(
            fields[0]
                .parse()
                .map_err(|_| Error::Input(format!("growth csv line {}: bad index", ln + 1)))?,
        );
        counts.push(
            fields[1]
                .parse()
                .map_err(|_| Error::Input(format!("growth csv line {}: bad count", ln + 1)))?,
        );
    }
    crate::growth::GrowthSeries::new(index, counts)
}

pub fn polyline_to_csv(p: &crate::crofton::Polyline) -> String {
    let mut out = String::from("x,y\n");
    for pt in &p.points {
        out.push_str(&format!("{},{}\n", pt[0], pt[1]));
    }
    out
}

pub fn polyline_from_csv(
    space: crate::crofton::Space,
    text: &str,
    closed: bool,
) -> Result<crate::crofton::Polyline, Error> {
    let mut points = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Input(format!("polyline csv line {}: need x,y", ln + 1)));
        }
        if ln == 0 && fields[0].parse::<f64>().is_err() {
            continue;
        }
        points.push([
            fields[0].parse().map_err(|_| Error::Input(format!("line {}: bad x", ln + 1)))?,
            fields[1].parse().map_err(|_| Error::Input(format!("line {}: bad y", ln + 1)))?,
        ]);
    }
    Ok(crate::crofton::Polyline { space, points, closed })
}

/// Tomograph specification for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TomographSpec {
    Lines { p_max: f64, clip: f64 },
    Translation { radius: f64, core: Vec<[f64; 2]> },
    CylinderGraph { d: usize, radius: f64 },
}

impl TomographSpec {
    pub fn build(&self) -> Result<crate::crofton::Tomograph, Error> {
        use crate::crofton::{Polyline, Space, Tomograph};
        match self {
            TomographSpec::Lines { p_max, clip } => Ok(Tomograph::lines(*p_max, *clip)),
            TomographSpec::Translation { radius, core } => Ok(Tomograph::translations(
                Polyline::closed(Space::Torus, core.clone()),
                *radius,
            )),
            TomographSpec::CylinderGraph { d, radius } => {
                Tomograph::cylinder_graphs(*d, *radius, 256)
            }
        }
    }
}

/// Toric model specification for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ToricModelSpec {
    Ellipsoid { a: Vec<f64> },
    /// h(x) = coef * x^exponent on [0, 1]
    PowerProfile { coef: f64, exponent: i32 },
    FlatTorus { v1: [f64; 2], v2: [f64; 2] },
    /// An externally produced growth CSV, certified against the degree bound.
    Series { path: String, degree: u32 },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_f2_complex_and_roundtrip_barcode() {
        let text = r#"{
            "coefficients": "F2",
            "generators": [
                {"id": "b", "action": 0.0},
                {"id": "a", "action": 5.0, "degree": 1}
            ],
            "boundary": [{"from": "a", "to": "b"}]
        }"#;
        let ParsedComplex::F2(c) = parse_complex(text).unwrap() else {
            panic!("expected F2")
        };
        let bars = crate::persistence::reduce_filtered_complex(&c).unwrap().barcode;
        let csv = barcode_to_csv(&bars);
        assert!(csv.starts_with("start,end,multiplicity\n"));
        let back = barcode_from_csv(&csv).unwrap();
        assert_eq!(back.multiset(), bars.multiset());
    }

    #[test]
    fn infinite_end_serializes_as_inf() {
        let b = Barcode::from_bars(vec![Bar::new(0.7, f64::INFINITY)]).unwrap();
        assert!(barcode_to_csv(&b).contains("0.7,inf,1"));
        let j = barcode_to_json(&b);
        assert_eq!(j["bars"][0]["end"], "inf");
        let back = barcode_from_csv(&barcode_to_csv(&b)).unwrap();
        assert!(back.bars[0].end.is_infinite());
    }

    #[test]
    fn parse_novikov_complex() {
        let text = r#"{
            "coefficients": "Novikov-F2",
            "generators": [
                {"id": "x", "action": 1.0},
                {"id": "y", "action": 0.0}
            ],
            "boundary": [{"from": "x", "to": "y", "exponents": [2.0]}]
        }"#;
        let ParsedComplex::Novikov(c) = parse_complex(text).unwrap() else {
            panic!("expected Novikov")
        };
        let bc = c.unpinned_barcode().unwrap();
        assert_eq!(bc.lengths, vec![3.0]);
        assert!(unpinned_to_csv(&bc).contains("length\n3\n"));
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(parse_complex("{").is_err());
        assert!(parse_complex(r#"{"coefficients": "Z", "generators": []}"#).is_err());
        let dangling = r#"{
            "coefficients": "F2",
            "generators": [{"id": "a", "action": 0.0}],
            "boundary": [{"from": "a", "to": "zzz"}]
        }"#;
        assert!(parse_complex(dangling).is_err());
    }

    #[test]
    fn growth_csv_roundtrip() {
        let s = crate::growth::GrowthSeries::from_integers(1, &[2.0, 4.0, 8.0]);
        let csv = growth_to_csv("k", &s);
        let back = growth_from_csv(&csv).unwrap();
        assert_eq!(back.index, s.index);
        assert_eq!(back.counts, s.counts);
    }
}
