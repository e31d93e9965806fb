//! On-disk formats: system files, tensor files and trajectories.
//!
//! Flat `data` arrays of a dense operator with `pairs = [[J1, I1], ..., [JN, IN]]`
//! hold the entry `A[j1, i1, ..., jN, iN]` (1-based) at position
//! `ivec((j1, i1, ..., jN, iN), (J1, I1, ..., JN, IN))`, the first index
//! varying fastest. Tensor files use the same rule over `shape`.

use std::fmt;

use mlti_core::{DenseTensor, MltiSystem, PairedTensor, Shape};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SYSTEM_VERSION: &str = "mlti-system/1";
pub const TRAJECTORY_VERSION: &str = "mlti-trajectory/1";
pub const LAYOUT_NOTE: &str =
    "ivec interleaved: data[ivec(j1,i1,...,jN,iN)], 1-based indices, first index fastest";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    #[serde(rename = "N")]
    pub n: usize,
    pub state_shape: Vec<usize>,
    pub input_shape: Vec<usize>,
    pub output_shape: Vec<usize>,
    #[serde(rename = "A")]
    pub a: Operator,
    #[serde(rename = "B")]
    pub b: Operator,
    #[serde(rename = "C")]
    pub c: Operator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Operator {
    Dense(DenseOperator),
    Tucker(Vec<FactorMatrix>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseOperator {
    pub pairs: Vec<[usize; 2]>,
    pub data: Vec<f64>,
}

/// One mode factor, `rows` in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorMatrix {
    pub shape: [usize; 2],
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryFile {
    pub version: String,
    pub steps: usize,
    pub states: Vec<TensorFile>,
    pub outputs: Vec<TensorFile>,
    pub inputs: Vec<TensorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_max_deviation: Option<f64>,
}

/// Length bookkeeping produced by [`SystemFile::layout_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorLayout {
    pub operator: &'static str,
    pub encoding: &'static str,
    pub pairs: Vec<[usize; 2]>,
    pub entries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Dense,
    Tucker,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Dense => "dense",
            Encoding::Tucker => "tucker",
        })
    }
}

/// Parses JSON, reporting the field path and line/column on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::validation(format!(
            "{what}: {} at field `{path}` (line {}, column {})",
            strip_position(&inner.to_string()),
            inner.line(),
            inner.column()
        ))
    })
}

fn strip_position(msg: &str) -> &str {
    msg.split(" at line ").next().unwrap_or(msg)
}

/// Pretty JSON with a trailing newline; the canonical textual form.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

fn check_extents(field: &str, extents: &[usize], n: usize) -> Result<(), CliError> {
    if extents.len() != n {
        return Err(CliError::validation(format!(
            "{field}: has {} modes, N is {n}",
            extents.len()
        )));
    }
    if let Some(k) = extents.iter().position(|&e| e == 0) {
        return Err(CliError::validation(format!("{field}[{k}]: extent must be positive")));
    }
    Ok(())
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text, "system file")
    }

    pub fn to_canonical_string(&self) -> String {
        to_canonical(self)
    }

    fn expected_pairs(&self) -> [(&'static str, &Operator, Vec<[usize; 2]>); 3] {
        let zip = |rows: &[usize], cols: &[usize]| {
            rows.iter().zip(cols).map(|(&r, &c)| [r, c]).collect::<Vec<_>>()
        };
        [
            ("A", &self.a, zip(&self.state_shape, &self.state_shape)),
            ("B", &self.b, zip(&self.state_shape, &self.input_shape)),
            ("C", &self.c, zip(&self.output_shape, &self.state_shape)),
        ]
    }

    /// Validates the header and every array length without doing any
    /// arithmetic.
    pub fn layout_check(&self) -> Result<Vec<OperatorLayout>, CliError> {
        if self.version != SYSTEM_VERSION {
            return Err(CliError::validation(format!(
                "version: unsupported tag {:?}, expected {SYSTEM_VERSION:?}",
                self.version
            )));
        }
        if self.n == 0 {
            return Err(CliError::validation("N: must be at least 1"));
        }
        check_extents("state_shape", &self.state_shape, self.n)?;
        check_extents("input_shape", &self.input_shape, self.n)?;
        check_extents("output_shape", &self.output_shape, self.n)?;

        let mut out = Vec::with_capacity(3);
        for (name, op, pairs) in self.expected_pairs() {
            let entries: usize = pairs.iter().map(|[r, c]| r * c).product();
            let encoding = match op {
                Operator::Dense(d) => {
                    if d.pairs != pairs {
                        return Err(CliError::validation(format!(
                            "{name}.dense.pairs: {:?} do not match the declared shapes, expected {:?}",
                            d.pairs, pairs
                        )));
                    }
                    if d.data.len() != entries {
                        return Err(CliError::validation(format!(
                            "{name}.dense.data: {} entries, pairs {:?} require {entries}",
                            d.data.len(),
                            pairs
                        )));
                    }
                    "dense"
                }
                Operator::Tucker(factors) => {
                    if factors.len() != self.n {
                        return Err(CliError::validation(format!(
                            "{name}.tucker: {} factors, N is {}",
                            factors.len(),
                            self.n
                        )));
                    }
                    for (k, (f, &[r, c])) in factors.iter().zip(&pairs).enumerate() {
                        if f.shape != [r, c] {
                            return Err(CliError::validation(format!(
                                "{name}.tucker[{k}].shape: {:?}, expected [{r}, {c}]",
                                f.shape
                            )));
                        }
                        if f.rows.len() != r {
                            return Err(CliError::validation(format!(
                                "{name}.tucker[{k}].rows: {} rows, shape says {r}",
                                f.rows.len()
                            )));
                        }
                        if let Some(i) = f.rows.iter().position(|row| row.len() != c) {
                            return Err(CliError::validation(format!(
                                "{name}.tucker[{k}].rows[{i}]: {} entries, shape says {c}",
                                f.rows[i].len()
                            )));
                        }
                    }
                    "tucker"
                }
            };
            out.push(OperatorLayout {
                operator: name,
                encoding,
                pairs,
                entries,
            });
        }
        Ok(out)
    }

    pub fn to_system(&self) -> Result<MltiSystem, CliError> {
        self.layout_check()?;
        match (&self.a, &self.b, &self.c) {
            (Operator::Tucker(a), Operator::Tucker(b), Operator::Tucker(c)) => Ok(MltiSystem::from_tucker(
                a.iter().map(FactorMatrix::to_paired).collect(),
                b.iter().map(FactorMatrix::to_paired).collect(),
                c.iter().map(FactorMatrix::to_paired).collect(),
            )?),
            _ => Ok(MltiSystem::new(
                operator_tensor(&self.a)?,
                operator_tensor(&self.b)?,
                operator_tensor(&self.c)?,
            )?),
        }
    }

    /// Encodes a system. Tucker encoding needs the system's mode factors.
    pub fn from_system(sys: &MltiSystem, encoding: Encoding) -> Result<Self, CliError> {
        let (a, b, c) = match encoding {
            Encoding::Dense => (dense(sys.a()), dense(sys.b()), dense(sys.c())),
            Encoding::Tucker => {
                let f = sys.tucker_factors().ok_or_else(|| {
                    CliError::validation("system has no mode factors for a tucker encoding")
                })?;
                (tucker(&f.a), tucker(&f.b), tucker(&f.c))
            }
        };
        Ok(SystemFile {
            version: SYSTEM_VERSION.into(),
            layout: Some(LAYOUT_NOTE.into()),
            n: sys.order(),
            state_shape: sys.state_shape().extents().to_vec(),
            input_shape: sys.input_shape().extents().to_vec(),
            output_shape: sys.output_shape().extents().to_vec(),
            a,
            b,
            c,
        })
    }
}

fn dense(t: &PairedTensor<f64>) -> Operator {
    Operator::Dense(DenseOperator {
        pairs: t.pairs().iter().map(|&(r, c)| [r, c]).collect(),
        data: t.data().to_vec(),
    })
}

fn tucker(factors: &[PairedTensor<f64>]) -> Operator {
    Operator::Tucker(factors.iter().map(FactorMatrix::from_paired).collect())
}

fn operator_tensor(op: &Operator) -> Result<PairedTensor<f64>, CliError> {
    match op {
        Operator::Dense(d) => Ok(PairedTensor::new(
            d.pairs.iter().map(|&[r, c]| (r, c)).collect(),
            d.data.clone(),
        )?),
        Operator::Tucker(factors) => Ok(PairedTensor::from_factors(
            &factors.iter().map(FactorMatrix::to_paired).collect::<Vec<_>>(),
        )?),
    }
}

impl FactorMatrix {
    pub fn to_paired(&self) -> PairedTensor<f64> {
        let [r, c] = self.shape;
        PairedTensor::from_matrix(&DMatrix::from_fn(r, c, |i, j| self.rows[i][j]))
    }

    pub fn from_paired(t: &PairedTensor<f64>) -> Self {
        let m = t.phi();
        FactorMatrix {
            shape: [m.nrows(), m.ncols()],
            rows: m.row_iter().map(|row| row.iter().copied().collect()).collect(),
        }
    }
}

impl TensorFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text, "tensor file")
    }

    pub fn to_tensor(&self, what: &str) -> Result<DenseTensor, CliError> {
        let shape = Shape::new(self.shape.clone())
            .map_err(|e| CliError::validation(format!("{what}.shape: {e}")))?;
        if shape.len() != self.data.len() {
            return Err(CliError::validation(format!(
                "{what}.data: {} entries, shape {:?} requires {}",
                self.data.len(),
                self.shape,
                shape.len()
            )));
        }
        Ok(DenseTensor::new(shape, self.data.clone())?)
    }

    pub fn from_tensor(t: &DenseTensor) -> Self {
        TensorFile {
            shape: t.extents().to_vec(),
            data: t.data().to_vec(),
        }
    }
}

/// Reads an input sequence: a JSON array of tensor files.
pub fn parse_inputs(text: &str) -> Result<Vec<DenseTensor>, CliError> {
    let files: Vec<TensorFile> = parse_json(text, "input file")?;
    files
        .iter()
        .enumerate()
        .map(|(t, f)| f.to_tensor(&format!("[{t}]")))
        .collect()
}
