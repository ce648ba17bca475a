//! JSON formats: model files, blow-up build configurations and marked-point
//! configurations.
//!
//! Model schema:
//!
//! ```json
//! {
//!   "basis": [{"id": "dz", "p": 1, "q": 0}, ...],
//!   "unit": "1",
//!   "product": [["dz", "dzbar", {"dzdzbar": "1"}], ...],
//!   "del": [["0", ...], ...],
//!   "delbar": [["0", ...], ...],
//!   "conjugation": {"dz": "dzbar", "dzdzbar": "-dzdzbar", ...}
//! }
//! ```
//!
//! Coefficients are strings like `"a/b"` or `"a/b+c/d i"`. `del[i][j]` is the
//! coefficient of `basis[i]` in `del(basis[j])`. Missing product entries are
//! zero; the mirror of a stated product and all unit products are filled in
//! automatically. Conjugation values take an optional leading `-`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blowup::{BlowupError, CurveCenter, IntersectionRing};
use crate::cbba::{CbbaModel, Element, ModelError, K};
use crate::invariants::{Configuration, InvariantError};
use crate::scalar::GaussianRational;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON parse error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("bad coefficient `{0}`: {1}")]
    Coefficient(String, String),
    #[error("`del` and `delbar` must be {0}x{0} matrices")]
    MatrixShape(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

fn json_err(e: serde_json::Error) -> IoError {
    IoError::Json { line: e.line(), column: e.column(), message: e.to_string() }
}

fn parse_coeff(s: &str) -> Result<K, IoError> {
    s.parse::<GaussianRational>()
        .map_err(|e| IoError::Coefficient(s.to_string(), e.reason))
}

#[derive(Serialize, Deserialize)]
struct BasisEntry {
    id: String,
    p: i32,
    q: i32,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    basis: Vec<BasisEntry>,
    unit: String,
    #[serde(default)]
    product: Vec<(String, String, std::collections::BTreeMap<String, String>)>,
    #[serde(default)]
    del: Vec<Vec<String>>,
    #[serde(default)]
    delbar: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conjugation: Option<std::collections::BTreeMap<String, String>>,
}

pub fn model_from_json(text: &str) -> Result<CbbaModel, IoError> {
    let file: ModelFile = serde_json::from_str(text).map_err(json_err)?;
    let n = file.basis.len();
    let mut b = CbbaModel::builder();
    for e in &file.basis {
        b = b.basis_element(&e.id, e.p, e.q);
    }
    b = b.unit(&file.unit);
    for (x, y, terms) in &file.product {
        let mut parsed: Vec<(String, K)> = Vec::new();
        for (id, c) in terms {
            parsed.push((id.clone(), parse_coeff(c)?));
        }
        let refs: Vec<(&str, K)> = parsed.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
        b = b.product(x, y, refs);
    }
    for (which, matrix) in [(0, &file.del), (1, &file.delbar)] {
        if matrix.is_empty() {
            continue;
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(IoError::MatrixShape(n));
        }
        for j in 0..n {
            let mut terms: Vec<(String, K)> = Vec::new();
            for (i, row) in matrix.iter().enumerate() {
                let c = parse_coeff(&row[j])?;
                if !num::Zero::is_zero(&c) {
                    terms.push((file.basis[i].id.clone(), c));
                }
            }
            if terms.is_empty() {
                continue;
            }
            let refs: Vec<(&str, K)> = terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
            let id = &file.basis[j].id;
            b = if which == 0 { b.del(id, refs) } else { b.delbar(id, refs) };
        }
    }
    if let Some(conj) = &file.conjugation {
        for (a, target) in conj {
            let (sign, t): (K, &str) = match target.strip_prefix('-') {
                Some(t) => (-K::from_int(1), t),
                None => (K::from_int(1), target.as_str()),
            };
            b = b.conjugation(a, t, sign);
        }
    }
    Ok(b.build()?)
}

pub fn model_to_json(model: &CbbaModel) -> serde_json::Value {
    let n = model.dim();
    let basis: Vec<BasisEntry> = (0..n)
        .map(|i| {
            let d = model.bidegree(i);
            BasisEntry { id: model.id(i).to_string(), p: d.p, q: d.q }
        })
        .collect();
    let mut product = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == model.unit_index() || j == model.unit_index() {
                continue;
            }
            let sv = model.basis_product(i, j);
            if sv.is_empty() {
                continue;
            }
            let terms: std::collections::BTreeMap<String, String> =
                sv.iter().map(|(t, c)| (model.id(*t).to_string(), c.to_string())).collect();
            product.push((model.id(i).to_string(), model.id(j).to_string(), terms));
        }
    }
    let op_matrix = |apply: &dyn Fn(&[K]) -> Vec<K>| -> Vec<Vec<String>> {
        let mut rows = vec![vec!["0".to_string(); n]; n];
        for j in 0..n {
            let mut e = vec![num::Zero::zero(); n];
            e[j] = num::One::one();
            for (i, c) in apply(&e).into_iter().enumerate() {
                if !num::Zero::is_zero(&c) {
                    rows[i][j] = c.to_string();
                }
            }
        }
        rows
    };
    let del = op_matrix(&|v| model.del_vec(v));
    let delbar = op_matrix(&|v| model.delbar_vec(v));
    let conjugation = model.conjugation_table().map(|table| {
        table
            .iter()
            .enumerate()
            .map(|(i, (t, s))| {
                let target = if num::One::is_one(s) {
                    model.id(*t).to_string()
                } else {
                    format!("-{}", model.id(*t))
                };
                (model.id(i).to_string(), target)
            })
            .collect::<std::collections::BTreeMap<_, _>>()
    });
    serde_json::to_value(ModelFile { basis, unit: model.id(model.unit_index()).to_string(), product, del, delbar, conjugation })
        .expect("model serializes")
}

// ---------------------------------------------------------------------------
// blow-up build configuration

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CenterConfig {
    Point {
        name: String,
        #[serde(default)]
        multiplicities: std::collections::BTreeMap<String, i64>,
    },
    Curve {
        name: String,
        #[serde(default)]
        genus: u32,
        pairing: std::collections::BTreeMap<String, i64>,
        #[serde(default)]
        multiplicities: std::collections::BTreeMap<String, i64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassConfig {
    /// A linear combination of registered classes, e.g. `G-E_R-E_L1`.
    Sum { name: String, sum: String },
    /// A product of two registered classes.
    Product { name: String, product: [String; 2] },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingConfig {
    pub projective_dimension: u32,
    pub centers: Vec<CenterConfig>,
    #[serde(default)]
    pub classes: Vec<ClassConfig>,
}

pub fn ring_config_from_json(text: &str) -> Result<RingConfig, IoError> {
    serde_json::from_str(text).map_err(json_err)
}

/// Linear combinations of registered classes, e.g. `G - E_R - 2E_L1`.
pub fn parse_registry_expression(
    ring: &IntersectionRing,
    expr: &str,
) -> Result<Element, IoError> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (k, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && k > 0 && !cur.is_empty() && !cur.ends_with('/') {
            terms.push(cur.clone());
            cur = String::from(ch);
        } else {
            cur.push(ch);
        }
    }
    terms.push(cur);
    let mut acc = ring.model().zero_element();
    for t in terms {
        let t = t.trim_start_matches('+');
        let split = t
            .char_indices()
            .find(|(_, c)| c.is_alphabetic() || *c == '_')
            .map(|(i, _)| i)
            .unwrap_or(t.len());
        let (coeff_str, name) = t.split_at(split);
        let coeff = match coeff_str.trim_end_matches('*') {
            "" => K::from_int(1),
            "-" => K::from_int(-1),
            s => parse_coeff(s)?,
        };
        let class = ring.class(name)?;
        acc = acc.add(&class.scale(&coeff))?;
    }
    Ok(acc)
}

/// Runs a configuration: projective space, then each center in order, then
/// the named classes.
pub fn build_ring(cfg: &RingConfig) -> Result<IntersectionRing, IoError> {
    let mut ring = IntersectionRing::projective_space(cfg.projective_dimension)?;
    for center in &cfg.centers {
        ring = match center {
            CenterConfig::Point { name, multiplicities } => {
                let mults: Vec<(&str, i64)> =
                    multiplicities.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                ring.blow_up_point_with(name, &mults)?
            }
            CenterConfig::Curve { name, genus, pairing, multiplicities } => {
                let center = CurveCenter {
                    name: name.clone(),
                    genus: *genus,
                    pairing: pairing.iter().map(|(k, v)| (k.clone(), *v)).collect(),
                };
                let mults: Vec<(&str, i64)> =
                    multiplicities.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                ring.blow_up_curve(&center, &mults)?
            }
        };
    }
    for class in &cfg.classes {
        match class {
            ClassConfig::Sum { name, sum } => {
                let e = parse_registry_expression(&ring, sum)?;
                ring.register_class(name, &e)?;
            }
            ClassConfig::Product { name, product } => {
                let e = ring.class(&product[0])?.product(&ring.class(&product[1])?)?;
                ring.register_class(name, &e)?;
            }
        }
    }
    Ok(ring)
}

// ---------------------------------------------------------------------------
// marked-point configuration

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkedPointsFile {
    #[serde(rename = "S1")]
    pub s1: String,
    #[serde(rename = "S2")]
    pub s2: String,
}

pub fn configuration_from_json(text: &str) -> Result<Configuration, IoError> {
    let file: MarkedPointsFile = serde_json::from_str(text).map_err(json_err)?;
    let s1 = parse_coeff(&file.s1)?;
    let s2 = parse_coeff(&file.s2)?;
    Ok(Configuration::new(s1, s2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn model_round_trips_through_json() {
        for model in [
            samples::torus(),
            samples::kodaira(),
            samples::abc_nontrivial(),
            samples::massey_pair(),
        ] {
            let text = serde_json::to_string_pretty(&model_to_json(model.raw())).unwrap();
            let back = model_from_json(&text).unwrap();
            assert!(back.validate().is_clean());
            assert_eq!(back.dim(), model.dim());
            for i in 0..model.dim() {
                assert_eq!(back.id(i), model.id(i));
                assert_eq!(back.bidegree(i), model.bidegree(i));
                for j in 0..model.dim() {
                    assert_eq!(back.basis_product(i, j), model.basis_product(i, j));
                }
            }
        }
    }

    #[test]
    fn json_error_carries_position() {
        let err = model_from_json("{\n  \"basis\": [oops]\n}").unwrap_err();
        match err {
            IoError::Json { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("expected Json error, got {other:?}"),
        }
    }

    #[test]
    fn ring_config_builds_the_reference_ring() {
        let text = r#"{
            "projective_dimension": 3,
            "centers": [
                {"type": "point", "name": "E_P"},
                {"type": "point", "name": "E_Q"},
                {"type": "point", "name": "E_R"},
                {"type": "curve", "name": "E_C",
                 "pairing": {"G": 1, "E_P": 1, "E_Q": 1, "E_R": 0}},
                {"type": "curve", "name": "E_L1",
                 "pairing": {"G": 1, "E_P": 0, "E_Q": 0, "E_R": 1, "E_C": 1}},
                {"type": "curve", "name": "E_L2",
                 "pairing": {"G": 1, "E_P": 0, "E_Q": 0, "E_R": 1, "E_C": 1, "E_L1": 0}}
            ],
            "classes": [
                {"name": "A_1", "sum": "G-E_R-E_L1"},
                {"name": "A_2", "sum": "G-E_R-E_L2"},
                {"name": "F_1", "product": ["E_C", "E_L1"]},
                {"name": "F_2", "product": ["E_C", "E_L2"]}
            ]
        }"#;
        let cfg = ring_config_from_json(text).unwrap();
        let ring = build_ring(&cfg).unwrap();
        let reference = crate::blowup::reference_ring();
        assert_eq!(
            ring.multiplication_table().to_tsv(),
            reference.multiplication_table().to_tsv()
        );
        for name in ["A_1", "A_2", "F_1", "F_2"] {
            assert_eq!(
                ring.class(name).unwrap().coeffs(),
                reference.class(name).unwrap().coeffs()
            );
        }
    }

    #[test]
    fn marked_points_parse() {
        let cfg = configuration_from_json(r#"{"S1": "1+0i", "S2": "2+0i"}"#).unwrap();
        assert_eq!(cfg.s1, "1".parse().unwrap());
        assert_eq!(cfg.s2, "2".parse().unwrap());
        assert!(configuration_from_json(r#"{"S1": "1", "S2": "1"}"#).is_err());
    }
}
