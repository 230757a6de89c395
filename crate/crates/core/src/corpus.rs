//! Built-in test matroids, in a fixed order.
//!
//! Naming follows the JSON convention: `Free(n)` and the rank tables have
//! ground set `{0, ..., n}`, while `U(k,m)` has `m` elements.

use crate::error::Result;
use crate::matroid::{complete_graph_edges, fano_matrix, Entry, Matroid, MatroidSpec, NamedMatroid};
use crate::subset::{subsets_of_size, SubsetMask};

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub matroid: NamedMatroid,
    /// Known to be representable over some field.
    pub realizable: bool,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        &self.matroid.name
    }

    pub fn build(&self) -> Result<Matroid> {
        self.matroid.build()
    }
}

fn entry(name: impl Into<String>, spec: MatroidSpec, realizable: bool) -> CorpusEntry {
    CorpusEntry {
        matroid: NamedMatroid {
            name: name.into(),
            spec,
        },
        realizable,
    }
}

fn graphic(name: &str, vertices: usize) -> CorpusEntry {
    let edges = complete_graph_edges(vertices)
        .into_iter()
        .map(|(u, v)| [u, v])
        .collect();
    entry(name, MatroidSpec::Graphic { vertices, edges }, true)
}

fn fano(field: &str) -> MatroidSpec {
    MatroidSpec::Linear {
        field: field.into(),
        matrix: fano_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(Entry::Int).collect())
            .collect(),
    }
}

/// Rank table of the matroid on `size` elements whose bases are all
/// `rank`-subsets except `nonbases` (each a circuit-hyperplane).
fn relaxed_uniform(size: usize, rank: usize, nonbases: &[&[usize]]) -> MatroidSpec {
    let bad: Vec<SubsetMask> = nonbases
        .iter()
        .map(|b| SubsetMask::from_elements(b.iter().copied()))
        .collect();
    let bases = subsets_of_size(size, rank).filter(|b| !bad.contains(b)).collect();
    let ranks = Matroid::from_bases(size, bases)
        .and_then(|m| m.rank_table())
        .expect("built-in rank tables are valid");
    MatroidSpec::RankTable {
        n: size - 1,
        ranks,
    }
}

/// The built-in corpus.
pub fn builtin() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(entry(format!("Free({n})"), MatroidSpec::Free { size: n + 1 }, true));
    }
    for m in 3..=7 {
        for k in 2..m {
            out.push(entry(format!("U({k},{m})"), MatroidSpec::Uniform { rank: k, size: m }, true));
        }
    }
    out.push(graphic("K4", 4));
    out.push(graphic("K5", 5));
    out.push(entry("Fano", fano("GF(2)"), true));
    out.push(entry("NonFano", fano("Q"), true));
    // two-point lines a,b,c,d; every union of two except c ∪ d is a plane
    out.push(entry(
        "Vamos",
        relaxed_uniform(
            8,
            4,
            &[&[0, 1, 2, 3], &[0, 1, 4, 5], &[0, 1, 6, 7], &[2, 3, 4, 5], &[2, 3, 6, 7]],
        ),
        false,
    ));
    out.push(entry(
        "Whirl3",
        relaxed_uniform(6, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]),
        true,
    ));
    out.push(entry("P6", relaxed_uniform(6, 3, &[&[0, 1, 2]]), true));
    out
}

/// Looks up a built-in matroid by name.
pub fn by_name(name: &str) -> Option<CorpusEntry> {
    builtin().into_iter().find(|e| e.name() == name)
}
