//! On-disk JSON documents read and written by the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rerank::{Candidate, CandidateSet, DEFAULT_ALPHA};
use crate::sequence::EmbeddingSequence;

/// `{ "dim": d, "sequences": [ { "id": ..., "vectors": [[...], ...] } ] }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDocument {
    pub dim: usize,
    pub sequences: Vec<SequenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceEntry {
    pub id: String,
    pub vectors: Vec<Vec<f64>>,
}

impl SequenceDocument {
    pub fn from_sequences(ids: Vec<String>, seqs: Vec<EmbeddingSequence<f64>>) -> Result<Self> {
        let dim = seqs.first().map(|s| s.dim()).unwrap_or(0);
        let doc = Self {
            dim,
            sequences: ids
                .into_iter()
                .zip(seqs)
                .map(|(id, s)| SequenceEntry {
                    id,
                    vectors: s.into_vectors(),
                })
                .collect(),
        };
        doc.validated()?;
        Ok(doc)
    }

    /// Checks the invariants and returns `(id, sequence)` pairs in file order.
    pub fn validated(&self) -> Result<Vec<(String, EmbeddingSequence<f64>)>> {
        if self.dim == 0 {
            return Err(Error::invalid("document dim must be >= 1"));
        }
        let mut out: Vec<(String, EmbeddingSequence<f64>)> = Vec::with_capacity(self.sequences.len());
        for entry in &self.sequences {
            if out.iter().any(|(id, _)| *id == entry.id) {
                return Err(Error::invalid(format!("duplicate sequence id {:?}", entry.id)));
            }
            if entry.vectors.iter().any(|v| v.len() != self.dim) {
                return Err(Error::invalid(format!(
                    "sequence {:?} has a vector whose length differs from dim {}",
                    entry.id, self.dim
                )));
            }
            let seq = EmbeddingSequence::new(entry.vectors.clone())
                .map_err(|e| Error::invalid(format!("sequence {:?}: {e}", entry.id)))?;
            out.push((entry.id.clone(), seq));
        }
        Ok(out)
    }
}

/// `{ "anchor": [[...]], "candidates": [ { "id", "vectors", "likelihood" } ], "alpha": a }`
///
/// `alpha` defaults to 0.5 when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RerankDocument {
    pub anchor: Vec<Vec<f64>>,
    pub candidates: Vec<RerankEntry>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RerankEntry {
    pub id: String,
    pub vectors: Vec<Vec<f64>>,
    pub likelihood: f64,
}

impl RerankDocument {
    pub fn candidate_set(&self) -> Result<CandidateSet<f64>> {
        let anchor = EmbeddingSequence::new(self.anchor.clone()).map_err(|e| Error::invalid(format!("anchor: {e}")))?;
        let candidates = self
            .candidates
            .iter()
            .map(|c| {
                Ok(Candidate {
                    id: c.id.clone(),
                    sequence: EmbeddingSequence::new(c.vectors.clone())
                        .map_err(|e| Error::invalid(format!("candidate {:?}: {e}", c.id)))?,
                    likelihood: c.likelihood,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CandidateSet::new(anchor, candidates, self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_document_checks() {
        let ok: SequenceDocument =
            serde_json::from_str(r#"{"dim":2,"sequences":[{"id":"a","vectors":[[1,2],[3,4]]}]}"#).unwrap();
        assert_eq!(ok.validated().unwrap()[0].1.len(), 2);

        let ragged: SequenceDocument =
            serde_json::from_str(r#"{"dim":2,"sequences":[{"id":"a","vectors":[[1,2],[3]]}]}"#).unwrap();
        assert!(ragged.validated().is_err());

        let dup: SequenceDocument =
            serde_json::from_str(r#"{"dim":1,"sequences":[{"id":"a","vectors":[[1]]},{"id":"a","vectors":[[2]]}]}"#)
                .unwrap();
        assert!(dup.validated().is_err());

        let empty: SequenceDocument =
            serde_json::from_str(r#"{"dim":1,"sequences":[{"id":"a","vectors":[]}]}"#).unwrap();
        assert!(empty.validated().is_err());

        assert!(serde_json::from_str::<SequenceDocument>(r#"{"dim":1,"seqs":[]}"#).is_err());
    }

    #[test]
    fn rerank_document_defaults_alpha() {
        let d: RerankDocument =
            serde_json::from_str(r#"{"anchor":[[0],[1]],"candidates":[{"id":"a","vectors":[[0]],"likelihood":-1.5}]}"#)
                .unwrap();
        assert_eq!(d.alpha, 0.5);
        let set = d.candidate_set().unwrap();
        assert_eq!(set.candidates().len(), 1);

        let bad: RerankDocument = serde_json::from_str(
            r#"{"anchor":[[0]],"candidates":[{"id":"a","vectors":[[0]],"likelihood":0}],"alpha":2}"#,
        )
        .unwrap();
        assert!(bad.candidate_set().is_err());
    }
}
