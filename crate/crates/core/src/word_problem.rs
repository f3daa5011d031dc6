//! Word problem by isometries: a word is trivial iff the composite of its
//! generator maps moves the root by less than half an edge.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::geometry::{
    big_frames, certified_equal, generator_frames, precision_ladder, solve_edge_length,
    AngleSolution, GeneratorFrames, GeometryClass, Isometry, ModelPoint,
};
use crate::real::{BigReal, Real};
use crate::scheme::{LabelingScheme, TypeVector};
use crate::tiling::{build_complete, Ball, BuildOptions};
use crate::word::GroupWord;

/// Precomputed data for repeated word-problem queries on one scheme and vector.
#[derive(Debug)]
pub struct WordProblem {
    scheme: LabelingScheme,
    type_vector: TypeVector,
    solution: AngleSolution,
    frames: GeneratorFrames<f64>,
    big: Mutex<BTreeMap<u32, Arc<GeneratorFrames<BigReal>>>>,
    sphere: OnceLock<Result<Ball>>,
}

impl WordProblem {
    pub fn new(scheme: &LabelingScheme, tv: &TypeVector) -> Result<Self> {
        scheme.check_type_vector(tv)?;
        let solution = solve_edge_length(tv)?;
        let frames = generator_frames(scheme, &solution)?;
        Ok(WordProblem {
            scheme: scheme.clone(),
            type_vector: tv.clone(),
            solution,
            frames,
            big: Mutex::new(BTreeMap::new()),
            sphere: OnceLock::new(),
        })
    }

    pub fn solution(&self) -> &AngleSolution {
        &self.solution
    }

    pub fn frames(&self) -> &GeneratorFrames<f64> {
        &self.frames
    }

    /// Endpoint of the word and the isometry carrying the root frame there.
    pub fn position(&self, word: &GroupWord) -> Result<(ModelPoint<f64>, Isometry<f64>)> {
        word.check_degree(self.scheme.degree())?;
        let m = self.frames.word_isometry(word.letters());
        let p = m.apply(&ModelPoint::base(self.solution.geometry, 53));
        Ok((p, m))
    }

    fn big_frames(&self, bits: u32) -> Result<Arc<GeneratorFrames<BigReal>>> {
        let mut cache = self.big.lock().expect("frame cache poisoned");
        if let Some(f) = cache.get(&bits) {
            return Ok(f.clone());
        }
        let f = Arc::new(big_frames(&self.scheme, &self.solution, bits)?);
        cache.insert(bits, f.clone());
        Ok(f)
    }

    fn decide_at<R: Real>(&self, frames: &GeneratorFrames<R>, word: &[usize], bits: u32) -> Result<bool> {
        let m = frames.word_isometry(word);
        let p = m.apply(&ModelPoint::base(self.solution.geometry, bits));
        let base = ModelPoint::base(self.solution.geometry, bits);
        certified_equal(&p, &base, self.solution.edge_length)
    }

    /// Geometric decision with precision escalation, and the precision that settled it.
    pub fn is_trivial_geometric(&self, word: &GroupWord) -> Result<(bool, u32)> {
        word.check_degree(self.scheme.degree())?;
        for bits in precision_ladder() {
            let verdict = if bits == 53 {
                self.decide_at(&self.frames, word.letters(), 53)
            } else {
                let frames = self.big_frames(bits)?;
                self.decide_at(frames.as_ref(), word.letters(), bits)
            };
            match verdict {
                Err(Error::NeedsMorePrecision) => continue,
                other => return other.map(|v| (v, bits)),
            }
        }
        Err(Error::NeedsMorePrecision)
    }

    /// The complete Cayley graph, for spherical vectors.
    pub fn finite_graph(&self) -> Option<&Ball> {
        if self.solution.geometry != GeometryClass::Spherical {
            return None;
        }
        self.sphere
            .get_or_init(|| build_complete(&self.scheme, &self.type_vector, &BuildOptions::default()))
            .as_ref()
            .ok()
    }

    pub fn is_trivial(&self, word: &GroupWord) -> Result<bool> {
        word.check_degree(self.scheme.degree())?;
        if let Some(ball) = self.finite_graph() {
            if let Some(v) = ball.decide_word(word) {
                return Ok(v);
            }
        }
        self.is_trivial_geometric(word).map(|(v, _)| v)
    }

    pub fn are_equal(&self, w1: &GroupWord, w2: &GroupWord) -> Result<bool> {
        w2.check_degree(self.scheme.degree())?;
        self.is_trivial(&w1.concat(&w2.inverse(self.scheme.sigma())))
    }
}

pub fn position(scheme: &LabelingScheme, tv: &TypeVector, word: &GroupWord) -> Result<(ModelPoint<f64>, Isometry<f64>)> {
    WordProblem::new(scheme, tv)?.position(word)
}

pub fn is_trivial(scheme: &LabelingScheme, tv: &TypeVector, word: &GroupWord) -> Result<bool> {
    WordProblem::new(scheme, tv)?.is_trivial(word)
}

pub fn are_equal(scheme: &LabelingScheme, tv: &TypeVector, w1: &GroupWord, w2: &GroupWord) -> Result<bool> {
    WordProblem::new(scheme, tv)?.are_equal(w1, w2)
}
