//! JSON description of matroids.
//!
//! ```json
//! {"name": "K4", "type": "graphic", "vertices": 4, "edges": [[0,1],[0,2],...]}
//! {"name": "Fano", "type": "linear", "field": "GF(2)", "matrix": [[1,0,...],...]}
//! {"name": "U36", "type": "rank_table", "n": 5, "ranks": [0,1,1,2,...]}
//! ```
//!
//! For `bases` and `rank_table`, `n` is the largest element, so the ground
//! set has `n + 1` elements and masks use bits `0..=n`. Rational matrix
//! entries may be integers or strings such as `"-3/4"`.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Field, Matroid};
use crate::error::{Error, Result};
use crate::subset::SubsetMask;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatroidSpec {
    Uniform {
        rank: usize,
        size: usize,
    },
    Free {
        size: usize,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Linear {
        field: String,
        matrix: Vec<Vec<Entry>>,
    },
    Bases {
        n: usize,
        bases: Vec<u32>,
    },
    RankTable {
        n: usize,
        ranks: Vec<u8>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedMatroid {
    pub name: String,
    #[serde(flatten)]
    pub spec: MatroidSpec,
}

impl NamedMatroid {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matroid specs always serialize")
    }

    pub fn build(&self) -> Result<Matroid> {
        self.spec.build()
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(Field::Rational);
        }
        let p = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|p| p.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::Schema(format!("unknown field {s:?}; use \"Q\" or \"GF(p)\"")))?;
        Ok(Field::Prime(p))
    }
}

fn parse_rational(e: &Entry) -> Result<BigRational> {
    match e {
        Entry::Int(x) => Ok(super::big(*x)),
        Entry::Text(s) => s
            .trim()
            .parse::<BigRational>()
            .map_err(|_| Error::Schema(format!("bad rational entry {s:?}"))),
    }
}

fn parse_int(e: &Entry) -> Result<i64> {
    match e {
        Entry::Int(x) => Ok(*x),
        Entry::Text(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("bad integer entry {s:?}"))),
    }
}

impl MatroidSpec {
    pub fn build(&self) -> Result<Matroid> {
        match self {
            MatroidSpec::Uniform { rank, size } => Matroid::uniform(*rank, *size),
            MatroidSpec::Free { size } => Matroid::free(*size),
            MatroidSpec::Graphic { vertices, edges } => {
                Matroid::graphic(*vertices, edges.iter().map(|&[u, v]| (u, v)).collect())
            }
            MatroidSpec::Linear { field, matrix } => match field.parse::<Field>()? {
                Field::Rational => Matroid::linear_rational(
                    matrix
                        .iter()
                        .map(|r| r.iter().map(parse_rational).collect())
                        .collect::<Result<_>>()?,
                ),
                Field::Prime(p) => Matroid::linear_mod_p(
                    p,
                    matrix
                        .iter()
                        .map(|r| r.iter().map(parse_int).collect())
                        .collect::<Result<_>>()?,
                ),
            },
            MatroidSpec::Bases { n, bases } => {
                Matroid::from_bases(n + 1, bases.iter().map(|&b| SubsetMask(b)).collect())
            }
            MatroidSpec::RankTable { n, ranks } => Matroid::from_rank_table(n + 1, ranks.clone()),
        }
    }
}
