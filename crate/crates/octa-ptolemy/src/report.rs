//! JSON input/output for assignments, solution sets, invariant reports and
//! Ptolemy dumps.
//!
//! Numbers are emitted with 17 significant digits so every double survives a
//! round trip; output key order is fixed, making equal runs byte-identical.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::gluing::{Assignment, Mode};
use crate::invariants::InvariantReport;
use crate::ptolemy::{GraphParameters, ScalingParams, ShortEdges};
use crate::solver::SolutionSet;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid assignment JSON: {0}")]
    BadAssignment(String),
}

// ---------------------------------------------------------------------------
// minimal JSON writer with controlled number formatting

pub enum JsonValue {
    Num(f64),
    Int(i64),
    Str(String),
    Arr(Vec<JsonValue>),
    Obj(Vec<(String, JsonValue)>),
}

fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        // keep integral doubles compact and exact
        format!("{}.0", x.trunc() as i64)
    } else {
        format!("{:.16e}", x)
    }
}

impl JsonValue {
    pub fn complex(z: Complex64) -> JsonValue {
        JsonValue::Arr(vec![JsonValue::Num(z.re), JsonValue::Num(z.im)])
    }

    fn write(&self, out: &mut String) {
        match self {
            JsonValue::Num(x) => out.push_str(&fmt_f64(*x)),
            JsonValue::Int(i) => out.push_str(&i.to_string()),
            JsonValue::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            JsonValue::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            JsonValue::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    JsonValue::Str(k.clone()).write(out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

impl std::fmt::Display for JsonValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

// ---------------------------------------------------------------------------
// assignment JSON

#[derive(Deserialize)]
struct AssignmentJson {
    mode: String,
    values: BTreeMap<String, [f64; 2]>,
}

/// Parse `{"mode":"z"|"w","values":{"<id>":[re,im],...}}`.
pub fn parse_assignment(text: &str) -> Result<Assignment, ReportError> {
    let parsed: AssignmentJson =
        serde_json::from_str(text).map_err(|e| ReportError::BadAssignment(e.to_string()))?;
    let mode: Mode = parsed.mode.parse().map_err(ReportError::BadAssignment)?;
    let mut values = BTreeMap::new();
    for (k, [re, im]) in parsed.values {
        let id: usize = k
            .parse()
            .map_err(|_| ReportError::BadAssignment(format!("bad id `{k}`")))?;
        values.insert(id, Complex64::new(re, im));
    }
    if values.is_empty() {
        return Err(ReportError::BadAssignment("no values".into()));
    }
    Ok(Assignment::new(mode, values))
}

pub fn assignment_json(a: &Assignment) -> JsonValue {
    JsonValue::Obj(vec![
        ("mode".into(), JsonValue::Str(a.mode.to_string())),
        (
            "values".into(),
            JsonValue::Obj(
                a.values
                    .iter()
                    .map(|(k, v)| (k.to_string(), JsonValue::complex(*v)))
                    .collect(),
            ),
        ),
    ])
}

pub fn solution_set_json(set: &SolutionSet) -> JsonValue {
    JsonValue::Arr(
        set.solutions
            .iter()
            .map(|rec| {
                JsonValue::Obj(vec![
                    ("assignment".into(), assignment_json(&rec.assignment)),
                    ("maxResidual".into(), JsonValue::Num(rec.max_residual)),
                    ("restart".into(), JsonValue::Int(rec.restart_index as i64)),
                    (
                        "minSingularValue".into(),
                        JsonValue::Num(rec.min_singular_value),
                    ),
                ])
            })
            .collect(),
    )
}

pub fn invariant_report_json(rep: &InvariantReport) -> JsonValue {
    JsonValue::Obj(vec![
        ("obstruction".into(), JsonValue::Int(rep.obstruction as i64)),
        ("cuspShape".into(), JsonValue::complex(rep.cusp_shape)),
        (
            "lambda".into(),
            JsonValue::Arr(rep.lambda.iter().map(|&l| JsonValue::complex(l)).collect()),
        ),
        (
            "wirtinger".into(),
            JsonValue::Arr(
                rep.wirtinger
                    .iter()
                    .map(|m| {
                        JsonValue::Arr(vec![
                            JsonValue::complex(m.0[0][0]),
                            JsonValue::complex(m.0[0][1]),
                            JsonValue::complex(m.0[1][0]),
                            JsonValue::complex(m.0[1][1]),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "complexVolume".into(),
            JsonValue::Obj(vec![
                ("vol".into(), JsonValue::Num(rep.volume.vol)),
                ("cs".into(), JsonValue::Num(rep.volume.cs)),
            ]),
        ),
        ("oracleVolume".into(), JsonValue::Num(rep.oracle_volume)),
        ("maxResidual".into(), JsonValue::Num(rep.max_residual)),
    ])
}

/// Per-crossing Ptolemy dump:
/// `{sigma, eta?, shortEdges{a..x}, vertical?, horizontals[]?}`.
pub fn ptolemy_json(
    d: &Diagram,
    a: &Assignment,
    sp: &ScalingParams,
    tables: &[ShortEdges],
    graph: Option<&GraphParameters>,
) -> JsonValue {
    let crossings: Vec<JsonValue> = (0..d.n())
        .map(|ci| {
            let mut fields: Vec<(String, JsonValue)> = vec![(
                "sigma".into(),
                JsonValue::complex(crate::ptolemy::sigma_at_crossing(d, ci, a)),
            )];
            if a.mode == Mode::W {
                fields.push((
                    "eta".into(),
                    JsonValue::complex(crate::ptolemy::eta_at_crossing(d, ci, a)),
                ));
            }
            let letters = "abcdefghijklmnopqrstuvwx";
            fields.push((
                "shortEdges".into(),
                JsonValue::Obj(
                    letters
                        .chars()
                        .enumerate()
                        .map(|(i, c)| (c.to_string(), JsonValue::complex(tables[ci][i])))
                        .collect(),
                ),
            ));
            if let Some(g) = graph {
                fields.push(("vertical".into(), JsonValue::complex(g.vertical[ci])));
                let horiz: Vec<JsonValue> = d.crossings()[ci]
                    .slots
                    .iter()
                    .map(|&s| JsonValue::complex(g.horizontal[s]))
                    .collect();
                fields.push(("horizontals".into(), JsonValue::Arr(horiz)));
            }
            JsonValue::Obj(fields)
        })
        .collect();
    JsonValue::Obj(vec![
        ("mode".into(), JsonValue::Str(a.mode.to_string())),
        (
            "scalingSquares".into(),
            JsonValue::Arr(sp.squares.iter().map(|&s| JsonValue::complex(s)).collect()),
        ),
        ("crossings".into(), JsonValue::Arr(crossings)),
    ])
}
