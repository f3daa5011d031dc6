//! Recognising full presentations of planar Cayley graphs.
//!
//! A candidate is a labeling scheme together with a placement of the
//! presentation's generators around a vertex. It is accepted with a type
//! vector when (a) every face relator is trivial in the presented group and
//! (b) every relator of the presentation is trivial in the candidate's graph.
//! Together these make the two groups quotients of each other through the
//! identity on generators.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::enumeration::enumerate_schemes;
use crate::error::{Error, Result};
use crate::scheme::{Dart, FaceLength, LabelingScheme, TypeVector};
use crate::word::GroupWord;
use crate::word_problem::WordProblem;

/// A presentation whose relators include every trivial word up to the
/// longest relator length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullPresentation {
    generators: usize,
    relators: Vec<GroupWord>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: usize,
    #[serde(default)]
    inverses: Vec<[usize; 2]>,
    relators: Vec<Vec<usize>>,
}

impl FullPresentation {
    /// Relators are 0-based words; duplicates are dropped, order is kept.
    pub fn new(generators: usize, relators: Vec<GroupWord>) -> Result<Self> {
        if generators == 0 {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in relators {
            if r.is_empty() {
                return Err(Error::InvalidPresentation("empty relator".into()));
            }
            r.check_degree(generators)?;
            if seen.insert(r.clone()) {
                out.push(r);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidPresentation("no relators".into()));
        }
        Ok(FullPresentation {
            generators,
            relators: out,
        })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    pub fn max_relator_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Parses `{"generators": d, "inverses": [[i, j], …], "relators": [[…], …]}` (1-based).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PresentationJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidPresentation(e.to_string()))?;
        let d = raw.generators;
        let mut words = Vec::new();
        for [i, j] in raw.inverses {
            words.push(GroupWord::from_one_based(&[i, j], d)?);
        }
        for r in raw.relators {
            words.push(GroupWord::from_one_based(&r, d)?);
        }
        Self::new(d, words)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let sigma = extract_sigma(self).ok();
        let inverses: Vec<[usize; 2]> = sigma
            .map(|s| {
                (0..s.len())
                    .filter(|&i| i <= s[i])
                    .map(|i| [i + 1, s[i] + 1])
                    .collect()
            })
            .unwrap_or_default();
        serde_json::json!({
            "generators": self.generators,
            "inverses": inverses,
            "relators": self.relators.iter().map(|w| w.to_one_based()).collect::<Vec<_>>(),
        })
    }
}

/// Reads the inverse pairing off the length-2 relators.
pub fn extract_sigma(pres: &FullPresentation) -> Result<Vec<usize>> {
    let d = pres.generators;
    let mut sigma: Vec<Option<usize>> = vec![None; d];
    let pair = |a: usize, b: usize, sigma: &mut Vec<Option<usize>>| -> Result<()> {
        match sigma[a] {
            Some(c) if c != b => Err(Error::InconsistentInverses {
                generator: a + 1,
                first: c + 1,
                second: b + 1,
            }),
            _ => {
                sigma[a] = Some(b);
                Ok(())
            }
        }
    };
    for r in &pres.relators {
        if let [a, b] = r.letters() {
            pair(*a, *b, &mut sigma)?;
            pair(*b, *a, &mut sigma)?;
        }
    }
    sigma
        .iter()
        .enumerate()
        .map(|(i, s)| s.ok_or(Error::MissingInverse(i + 1)))
        .collect()
}

/// Answers "is this word trivial in the presented group".
pub trait WordOracle: Send + Sync {
    fn is_trivial(&self, word: &GroupWord) -> Result<bool>;
}

/// Finite groups by coset enumeration over the trivial subgroup.
#[derive(Debug)]
pub struct CosetOracle {
    table: std::result::Result<CosetTable, String>,
}

impl CosetOracle {
    /// Enumerates with at most `bound` cosets; exceeding it makes every query fail.
    pub fn new(pres: &FullPresentation, bound: usize) -> Result<Self> {
        let sigma = extract_sigma(pres)?;
        let rels: Vec<Vec<usize>> = pres.relators.iter().map(|w| w.0.clone()).collect();
        let mut table = CosetTable::new(&sigma, bound);
        let table = match table.enumerate(&rels) {
            Ok(()) => Ok(table),
            Err(Error::ResourceLimit { limit }) => {
                Err(format!("coset enumeration exceeded {limit} cosets"))
            }
            Err(e) => return Err(e),
        };
        Ok(CosetOracle { table })
    }

    /// Group order, when the enumeration finished.
    pub fn order(&self) -> Option<usize> {
        self.table.as_ref().ok().map(|t| t.live_count())
    }
}

impl WordOracle for CosetOracle {
    fn is_trivial(&self, word: &GroupWord) -> Result<bool> {
        let t = self.table.as_ref().map_err(|e| Error::OracleFailure(e.clone()))?;
        word.check_degree(t.degree())?;
        t.trace(0, word.letters())
            .map(|v| v == 0)
            .ok_or_else(|| Error::OracleFailure("word left the coset table".into()))
    }
}

/// Exact on words no longer than the longest relator of a full presentation;
/// longer words go to `fallback`.
pub struct MembershipOracle {
    words: HashSet<GroupWord>,
    max_len: usize,
    fallback: Option<Box<dyn WordOracle>>,
}

impl MembershipOracle {
    pub fn new(pres: &FullPresentation, fallback: Option<Box<dyn WordOracle>>) -> Self {
        MembershipOracle {
            words: pres.relators.iter().cloned().collect(),
            max_len: pres.max_relator_length(),
            fallback,
        }
    }
}

impl WordOracle for MembershipOracle {
    fn is_trivial(&self, word: &GroupWord) -> Result<bool> {
        if word.is_empty() {
            return Ok(true);
        }
        if word.len() <= self.max_len {
            return Ok(self.words.contains(word));
        }
        match &self.fallback {
            Some(f) => f.is_trivial(word),
            None => Err(Error::OracleFailure(format!(
                "word of length {} exceeds the relator length {}",
                word.len(),
                self.max_len
            ))),
        }
    }
}

/// The default: membership for short words, a bounded coset enumeration otherwise.
pub fn default_oracle(pres: &FullPresentation, coset_bound: usize) -> Result<MembershipOracle> {
    let fallback = CosetOracle::new(pres, coset_bound)?;
    Ok(MembershipOracle::new(pres, Some(Box::new(fallback))))
}

/// The word problem of a given scheme and type vector, with generators renamed
/// by `labeling` (position `p` of the scheme carries presentation generator `labeling[p]`).
pub struct SchemeOracle {
    problem: WordProblem,
    to_position: Vec<usize>,
}

impl SchemeOracle {
    pub fn new(scheme: &LabelingScheme, tv: &TypeVector) -> Result<Self> {
        Self::with_labeling(scheme, tv, &(0..scheme.degree()).collect::<Vec<_>>())
    }

    pub fn with_labeling(scheme: &LabelingScheme, tv: &TypeVector, labeling: &[usize]) -> Result<Self> {
        let mut to_position = vec![0; labeling.len()];
        for (p, &g) in labeling.iter().enumerate() {
            to_position[g] = p;
        }
        Ok(SchemeOracle {
            problem: WordProblem::new(scheme, tv)?,
            to_position,
        })
    }
}

impl WordOracle for SchemeOracle {
    fn is_trivial(&self, word: &GroupWord) -> Result<bool> {
        word.check_degree(self.to_position.len())?;
        self.problem.is_trivial(&word.relabeled(&self.to_position))
    }
}

/// Talks to a long-running external process: one request line per word,
/// one answer line back.
pub struct ExternalOracle {
    command: String,
    process: Mutex<Option<(Child, ChildStdin, BufReader<ChildStdout>)>>,
}

impl ExternalOracle {
    /// `command` is run through `sh -c` on first use.
    pub fn new(command: &str) -> Self {
        ExternalOracle {
            command: command.to_string(),
            process: Mutex::new(None),
        }
    }

    fn spawn(&self) -> Result<(Child, ChildStdin, BufReader<ChildStdout>)> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| Error::OracleFailure(format!("cannot start {:?}: {e}", self.command)))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok((child, stdin, stdout))
    }
}

impl WordOracle for ExternalOracle {
    fn is_trivial(&self, word: &GroupWord) -> Result<bool> {
        let mut guard = self.process.lock().expect("oracle lock poisoned");
        if guard.is_none() {
            *guard = Some(self.spawn()?);
        }
        let (_, stdin, stdout) = guard.as_mut().expect("spawned above");
        let request: Vec<String> = word.to_one_based().iter().map(|x| x.to_string()).collect();
        let io = |e: std::io::Error| Error::OracleFailure(e.to_string());
        writeln!(stdin, "{}", request.join(" ")).map_err(io)?;
        stdin.flush().map_err(io)?;
        let mut line = String::new();
        if stdout.read_line(&mut line).map_err(io)? == 0 {
            *guard = None;
            return Err(Error::OracleFailure("oracle closed its output".into()));
        }
        match line.trim() {
            "trivial" => Ok(true),
            "nontrivial" => Ok(false),
            other => Err(Error::OracleFailure(format!("unexpected answer {other:?}"))),
        }
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        if let Ok(mut g) = self.process.lock() {
            if let Some((mut child, stdin, _)) = g.take() {
                drop(stdin);
                let _ = child.wait();
            }
        }
    }
}

/// Every trivial word of length at most `max_len` according to `oracle`, in
/// length-lexicographic order.
pub fn complete_to_fullness(generators: usize, max_len: usize, oracle: &dyn WordOracle) -> Result<FullPresentation> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    fn rec(
        d: usize,
        len: usize,
        word: &mut Vec<usize>,
        out: &mut Vec<GroupWord>,
        oracle: &dyn WordOracle,
    ) -> Result<()> {
        if word.len() == len {
            let w = GroupWord(word.clone());
            if oracle.is_trivial(&w)? {
                out.push(w);
            }
            return Ok(());
        }
        for x in 0..d {
            word.push(x);
            rec(d, len, word, out, oracle)?;
            word.pop();
        }
        Ok(())
    }
    for len in 1..=max_len {
        rec(generators, len, &mut word, &mut out, oracle)?;
    }
    FullPresentation::new(generators, out)
}

/// A scheme in position space together with the generator placed at each position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Candidate {
    pub scheme: LabelingScheme,
    /// `labeling[p]` is the (0-based) presentation generator sitting at position `p`.
    pub labeling: Vec<usize>,
    /// The class representative this candidate was obtained from.
    pub class_representative: LabelingScheme,
}

impl Candidate {
    /// Whether the labeling is a cyclic shift.
    pub fn is_cyclic(&self) -> bool {
        let d = self.labeling.len();
        (0..d).all(|p| self.labeling[p] == (self.labeling[0] + p) % d)
    }

    /// A presentation word rewritten in position letters.
    pub fn to_positions(&self, word: &GroupWord) -> GroupWord {
        let mut inv = vec![0; self.labeling.len()];
        for (p, &g) in self.labeling.iter().enumerate() {
            inv[g] = p;
        }
        word.relabeled(&inv)
    }

    /// A position word rewritten in presentation letters.
    pub fn to_presentation(&self, word: &GroupWord) -> GroupWord {
        word.relabeled(&self.labeling)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lab: Vec<String> = self.labeling.iter().map(|g| format!("a{}", g + 1)).collect();
        write!(f, "{} around [{}]", self.scheme, lab.join(" "))
    }
}

/// All placements of the presentation's generators compatible with `sigma`.
///
/// Cyclic placements come first, then the others; each group is in class
/// order. Placements are normalised so that generator `a1` sits at position 1.
pub fn candidate_schemes(sigma: &[usize]) -> Result<Vec<Candidate>> {
    let d = sigma.len();
    let classes = enumerate_schemes(d)?;
    let mut seen = BTreeSet::new();
    let mut cyclic = Vec::new();
    let mut general = Vec::new();
    for class in &classes {
        let rep = &class.representative;
        let mut rotations: Vec<LabelingScheme> = (0..d).map(|k| rep.rotated(k)).collect();
        rotations.sort();
        rotations.dedup();
        for s in rotations {
            let mut found = Vec::new();
            placements(s.sigma(), sigma, &mut vec![usize::MAX; d], &mut vec![false; d], 0, &mut found);
            for lab in found {
                let p0 = lab.iter().position(|&g| g == 0).expect("a1 is placed");
                let shift = (d - p0) % d;
                let scheme = s.rotated(shift);
                let mut labeling = vec![0; d];
                for p in 0..d {
                    labeling[(p + shift) % d] = lab[p];
                }
                if !seen.insert((scheme.clone(), labeling.clone())) {
                    continue;
                }
                let c = Candidate {
                    scheme,
                    labeling,
                    class_representative: rep.clone(),
                };
                if c.is_cyclic() {
                    cyclic.push(c);
                } else {
                    general.push(c);
                }
            }
        }
    }
    cyclic.extend(general);
    Ok(cyclic)
}

fn placements(
    s_sigma: &[usize],
    sigma: &[usize],
    lab: &mut Vec<usize>,
    used: &mut Vec<bool>,
    p: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let d = s_sigma.len();
    if p == d {
        out.push(lab.clone());
        return;
    }
    if lab[p] != usize::MAX {
        placements(s_sigma, sigma, lab, used, p + 1, out);
        return;
    }
    let q = s_sigma[p];
    for g in 0..d {
        if used[g] {
            continue;
        }
        let h = sigma[g];
        if (q == p) != (h == g) || (q != p && used[h]) {
            continue;
        }
        lab[p] = g;
        used[g] = true;
        lab[q] = h;
        used[h] = true;
        placements(s_sigma, sigma, lab, used, p + 1, out);
        used[h] = false;
        lab[q] = usize::MAX;
        used[g] = false;
        lab[p] = usize::MAX;
    }
}

/// Why a candidate was rejected, or the vector that made it pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub candidate: String,
    pub vectors_tried: usize,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionReport {
    pub candidates: usize,
    /// Candidates times the bounded vectors available to each of them.
    pub search_space: usize,
    pub entries: Vec<CandidateReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Yes {
        candidate: Candidate,
        type_vector: TypeVector,
        report: DecisionReport,
    },
    No {
        report: DecisionReport,
    },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn report(&self) -> &DecisionReport {
        match self {
            Verdict::Yes { report, .. } | Verdict::No { report } => report,
        }
    }
}

/// Face base words of a scheme, per face class, in position letters.
fn face_bases(scheme: &LabelingScheme) -> Vec<GroupWord> {
    let fp = scheme.orbits();
    (0..fp.class_count())
        .map(|c| {
            let orbit = &fp.orbits[fp.class_orbit(c)];
            GroupWord(orbit.iter().rev().map(|x| scheme.inverse_of(x.generator)).collect())
        })
        .collect()
}

/// Runs checks (a) and (b) over every candidate.
///
/// Degrees 1 and 2 (an edge, paths and cycles) are always planar but have no
/// polygonal embedding to test against, so they are rejected as an error
/// rather than answered NO.
pub fn decide_planar(pres: &FullPresentation, oracle: &dyn WordOracle) -> Result<Verdict> {
    if pres.generators < 3 {
        return Err(Error::DegreeTooSmall(pres.generators));
    }
    let sigma = extract_sigma(pres)?;
    let l = pres.max_relator_length();
    let candidates = candidate_schemes(&sigma)?;
    let mut relators: Vec<&GroupWord> = pres.relators.iter().collect();
    relators.sort_by_key(|w| w.len());

    let search_space = candidates
        .iter()
        .map(|c| {
            face_bases(&c.scheme)
                .iter()
                .map(|b| 1 + (1..=l / b.len()).filter(|m| m * b.len() >= 3).count())
                .product::<usize>()
        })
        .sum();
    let mut entries = Vec::new();
    let mut winner = None;
    for cand in &candidates {
        let s = &cand.scheme;
        let fp = s.orbits();
        let class_of: Vec<usize> = (0..s.degree()).map(|i| fp.dart_class(Dart::plus(i))).collect();
        let bases = face_bases(s);
        let mut options: Vec<Vec<FaceLength>> = Vec::new();
        for base in &bases {
            let k = base.len();
            let mut opts = Vec::new();
            let mut len = k;
            while len <= l {
                if len >= 3 {
                    let word = GroupWord(base.0.repeat(len / k));
                    if oracle.is_trivial(&cand.to_presentation(&word))? {
                        opts.push(FaceLength::Finite(len));
                    }
                }
                len += k;
            }
            opts.push(FaceLength::Infinite);
            options.push(opts);
        }

        let mut tried = 0;
        let mut reasons = BTreeSet::new();
        let mut pick = vec![0usize; options.len()];
        let mut passed = None;
        'vectors: loop {
            let tv = TypeVector(
                class_of.iter().map(|&c| options[c][pick[c]]).collect(),
            );
            tried += 1;
            match check_b(cand, &tv, &relators) {
                Ok(None) => {
                    passed = Some(tv);
                    break 'vectors;
                }
                Ok(Some(reason)) => {
                    reasons.insert(reason);
                }
                Err(e) => {
                    reasons.insert(format!("{tv}: {e}"));
                }
            }
            // next combination, last class varying fastest
            let mut c = options.len();
            loop {
                if c == 0 {
                    break 'vectors;
                }
                c -= 1;
                pick[c] += 1;
                if pick[c] < options[c].len() {
                    break;
                }
                pick[c] = 0;
            }
        }
        match passed {
            Some(tv) => {
                entries.push(CandidateReport {
                    candidate: cand.to_string(),
                    vectors_tried: tried,
                    outcome: format!("passes with {tv}"),
                });
                winner = Some((cand.clone(), tv));
                break;
            }
            None => entries.push(CandidateReport {
                candidate: cand.to_string(),
                vectors_tried: tried,
                outcome: summarize(&reasons),
            }),
        }
    }
    let report = DecisionReport {
        candidates: candidates.len(),
        search_space,
        entries,
    };
    Ok(match winner {
        Some((candidate, type_vector)) => Verdict::Yes {
            candidate,
            type_vector,
            report,
        },
        None => Verdict::No { report },
    })
}

fn summarize(reasons: &BTreeSet<String>) -> String {
    let shown: Vec<&str> = reasons.iter().take(3).map(|s| s.as_str()).collect();
    let mut s = shown.join("; ");
    if reasons.len() > 3 {
        s.push_str(&format!("; … {} more", reasons.len() - 3));
    }
    s
}

/// Check (b): `None` when every relator is trivial in the candidate's graph.
fn check_b(cand: &Candidate, tv: &TypeVector, relators: &[&GroupWord]) -> Result<Option<String>> {
    let problem = match WordProblem::new(&cand.scheme, tv) {
        Ok(p) => p,
        Err(e @ Error::NoSolution { .. }) => return Ok(Some(format!("{tv}: {e}"))),
        Err(e) => return Err(e),
    };
    for r in relators {
        if !problem.is_trivial(&cand.to_positions(r))? {
            return Ok(Some(format!("{tv}: relator {r} is not a cycle")));
        }
    }
    Ok(None)
}
