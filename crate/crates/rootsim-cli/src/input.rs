//! Input file schemas.
//!
//! Two JSON shapes are accepted, distinguished by their keys:
//!
//! * Pauli-term Hamiltonian: `{"n": 3, "terms": [{"coeff": 1.0, "ops": "ZZI"}, ...]}`
//! * Chain shorthand: `{"model": "tfim"|"xxx"|"sparse", "n": 4, "J": 1.0,
//!   "h": 0.5, "support": [1, 2]}` where `J`/`h` may be scalars (uniform) or
//!   per-bond/per-site lists. Sites are 0-based.

use std::collections::BTreeMap;

use serde::Deserialize;

use rootsim::chain::{ChainModel, ChainSpec, PauliTerm};
use rootsim::Error;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub n: usize,
    pub terms: Vec<PauliTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum NumOrList {
    Num(f64),
    List(Vec<f64>),
}

impl NumOrList {
    fn to_vec(&self, len: usize, what: &str) -> Result<Vec<f64>, Error> {
        match self {
            NumOrList::Num(v) => Ok(vec![*v; len]),
            NumOrList::List(v) if v.len() == len => Ok(v.clone()),
            NumOrList::List(v) => Err(Error::InvalidChainSpec(format!(
                "{what} expects {len} entries, got {}",
                v.len()
            ))),
        }
    }

    fn to_scalar(&self, what: &str) -> Result<f64, Error> {
        match self {
            NumOrList::Num(v) => Ok(*v),
            NumOrList::List(v) if v.len() == 1 => Ok(v[0]),
            NumOrList::List(_) => Err(Error::InvalidChainSpec(format!(
                "{what} expects a single number"
            ))),
        }
    }

    pub fn is_uniform(&self) -> bool {
        match self {
            NumOrList::Num(_) => true,
            NumOrList::List(v) => v.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainShorthand {
    pub model: String,
    pub n: usize,
    #[serde(rename = "J", default)]
    pub j: Option<NumOrList>,
    #[serde(default)]
    pub h: Option<NumOrList>,
    #[serde(default)]
    pub support: Option<Vec<usize>>,
}

impl ChainShorthand {
    /// Instantiate at the shorthand's own site count.
    pub fn to_spec(&self) -> Result<ChainSpec, Error> {
        self.to_spec_at(self.n)
    }

    /// Instantiate the same per-site parameters at a different site count
    /// (for scaling studies; requires uniform parameters).
    pub fn to_spec_at(&self, n: usize) -> Result<ChainSpec, Error> {
        if n < 1 {
            return Err(Error::InvalidChainSpec("need at least one site".into()));
        }
        match self.model.as_str() {
            "tfim" => {
                let j = self
                    .j
                    .as_ref()
                    .ok_or_else(|| Error::InvalidChainSpec("tfim requires J".into()))?;
                let h = self
                    .h
                    .as_ref()
                    .ok_or_else(|| Error::InvalidChainSpec("tfim requires h".into()))?;
                if n != self.n && !(j.is_uniform() && h.is_uniform()) {
                    return Err(Error::InvalidChainSpec(
                        "scaling across n requires uniform J and h".into(),
                    ));
                }
                let (jv, hv) = if n == self.n {
                    (j.to_vec(n - 1, "J")?, h.to_vec(n, "h")?)
                } else {
                    (
                        vec![j.to_scalar("J").or_else(|_| uniform_value(j))?; n - 1],
                        vec![h.to_scalar("h").or_else(|_| uniform_value(h))?; n],
                    )
                };
                ChainSpec::new(n, ChainModel::TransverseIsing { j: jv, h: hv })
            }
            "sparse" => {
                let j = self
                    .j
                    .as_ref()
                    .ok_or_else(|| Error::InvalidChainSpec("sparse requires J".into()))?;
                let support = self
                    .support
                    .as_ref()
                    .ok_or_else(|| Error::InvalidChainSpec("sparse requires support".into()))?;
                let h = self
                    .h
                    .as_ref()
                    .ok_or_else(|| Error::InvalidChainSpec("sparse requires h".into()))?;
                if n != self.n && !j.is_uniform() {
                    return Err(Error::InvalidChainSpec(
                        "scaling across n requires uniform J".into(),
                    ));
                }
                let jv = if n == self.n {
                    j.to_vec(n - 1, "J")?
                } else {
                    vec![j.to_scalar("J").or_else(|_| uniform_value(j))?; n - 1]
                };
                let hv = h.to_vec(support.len(), "h")?;
                let mut map = BTreeMap::new();
                for (&site, &field) in support.iter().zip(&hv) {
                    map.insert(site, field);
                }
                ChainSpec::new(n, ChainModel::SparseField { j: jv, h: map })
            }
            "xxx" => {
                let j = self
                    .j
                    .as_ref()
                    .ok_or_else(|| Error::InvalidChainSpec("xxx requires J".into()))?;
                ChainSpec::new(
                    n,
                    ChainModel::HeisenbergXxx {
                        j: j.to_scalar("J")?,
                    },
                )
            }
            other => Err(Error::InvalidChainSpec(format!("unknown model '{other}'"))),
        }
    }
}

fn uniform_value(v: &NumOrList) -> Result<f64, Error> {
    match v {
        NumOrList::Num(x) => Ok(*x),
        NumOrList::List(xs) if !xs.is_empty() && v.is_uniform() => Ok(xs[0]),
        _ => Err(Error::InvalidChainSpec(
            "parameter list is not uniform".into(),
        )),
    }
}

/// A parsed input file: either raw Pauli terms or a chain model.
pub enum ParsedInput {
    Terms(HamiltonianFile),
    Chain(ChainShorthand),
}

pub fn parse_input(text: &str) -> Result<ParsedInput, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let obj = value
        .as_object()
        .ok_or_else(|| "input must be a JSON object".to_string())?;
    if obj.contains_key("model") {
        let chain: ChainShorthand =
            serde_json::from_value(value.clone()).map_err(|e| format!("bad chain spec: {e}"))?;
        Ok(ParsedInput::Chain(chain))
    } else if obj.contains_key("terms") {
        let file: HamiltonianFile = serde_json::from_value(value.clone())
            .map_err(|e| format!("bad Hamiltonian file: {e}"))?;
        Ok(ParsedInput::Terms(file))
    } else {
        Err("input needs either a \"terms\" or a \"model\" key".to_string())
    }
}
