//! Labeling schemes and the dart automaton that traces face boundaries.
//!
//! A scheme of degree `d` is stored as `(sigma, tau)`: the cyclic order of the
//! generators around a vertex is always `a1, a2, …, ad`. Generator indices are
//! 0-based internally and 1-based in JSON.
//!
//! A dart `i+` / `i-` is generator `i` seen at a vertex whose generators turn in
//! the positive / negative direction. Stepping a dart walks one edge along the
//! boundary of a face; the orbits of the step map are the face boundaries.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::GroupWord;

/// Rotation side of a dart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    fn times(self, sign: i8) -> Side {
        if sign > 0 {
            self
        } else {
            self.flipped()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub generator: usize,
    pub side: Side,
}

impl Dart {
    pub fn plus(generator: usize) -> Dart {
        Dart {
            generator,
            side: Side::Plus,
        }
    }

    pub fn minus(generator: usize) -> Dart {
        Dart {
            generator,
            side: Side::Minus,
        }
    }

    /// Dense index in `0..2d`.
    pub fn index(self) -> usize {
        2 * self.generator + usize::from(self.side == Side::Minus)
    }

    pub fn from_index(index: usize) -> Dart {
        Dart {
            generator: index / 2,
            side: if index.is_multiple_of(2) { Side::Plus } else { Side::Minus },
        }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Plus => '+',
            Side::Minus => '-',
        };
        write!(f, "{}{}", self.generator + 1, s)
    }
}

/// A labeling scheme `(sigma, tau)` with the cyclic order fixed to `1 2 … d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelingScheme {
    sigma: Vec<usize>,
    tau: Vec<i8>,
}

impl LabelingScheme {
    /// Builds a scheme from 0-based `sigma` and `tau` in `{+1, -1}`.
    pub fn new(sigma: Vec<usize>, tau: Vec<i8>) -> Result<Self> {
        let d = sigma.len();
        if d < 2 {
            return Err(Error::InvalidScheme(format!("degree {d} is below 2")));
        }
        if tau.len() != d {
            return Err(Error::InvalidScheme(format!(
                "sigma has {d} entries but tau has {}",
                tau.len()
            )));
        }
        for i in 0..d {
            let j = sigma[i];
            if j >= d {
                return Err(Error::InvalidScheme(format!(
                    "sigma({}) = {} is out of range",
                    i + 1,
                    j + 1
                )));
            }
            if sigma[j] != i {
                return Err(Error::InvalidScheme(format!(
                    "sigma is not an involution at {}",
                    i + 1
                )));
            }
            if tau[i] != 1 && tau[i] != -1 {
                return Err(Error::InvalidScheme(format!(
                    "tau({}) = {} is not ±1",
                    i + 1,
                    tau[i]
                )));
            }
            if tau[j] != tau[i] {
                return Err(Error::InvalidScheme(format!(
                    "tau differs on the inverse pair ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(LabelingScheme { sigma, tau })
    }

    /// Builds a scheme from 1-based `sigma`.
    pub fn from_one_based(sigma: &[usize], tau: &[i8]) -> Result<Self> {
        if sigma.contains(&0) {
            return Err(Error::InvalidScheme("sigma uses 0 in 1-based input".into()));
        }
        Self::new(sigma.iter().map(|&s| s - 1).collect(), tau.to_vec())
    }

    /// Builds a scheme from a cycle list such as `[[1], [3], [2, 7], [4, 5], [6, 8]]`
    /// and the set of indirect generators (both 1-based).
    pub fn from_cycles(degree: usize, cycles: &[&[usize]], indirect: &[usize]) -> Result<Self> {
        let mut sigma: Vec<usize> = (0..degree).collect();
        for c in cycles {
            match *c {
                [_] => {}
                [a, b] if *a >= 1 && *b >= 1 && *a <= degree && *b <= degree => {
                    sigma[a - 1] = b - 1;
                    sigma[b - 1] = a - 1;
                }
                _ => return Err(Error::InvalidScheme(format!("bad cycle {c:?}"))),
            }
        }
        let mut tau = vec![1i8; degree];
        for &g in indirect {
            if g == 0 || g > degree {
                return Err(Error::InvalidScheme(format!("bad indirect generator {g}")));
            }
            tau[g - 1] = -1;
        }
        Self::new(sigma, tau)
    }

    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn tau(&self) -> &[i8] {
        &self.tau
    }

    pub fn inverse_of(&self, generator: usize) -> usize {
        self.sigma[generator]
    }

    pub fn is_direct(&self, generator: usize) -> bool {
        self.tau[generator] > 0
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.degree()
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.degree() - 1) % self.degree()
    }

    /// Image of a dart under `1 ∈ ℤ`.
    pub fn dart_step(&self, dart: Dart) -> Dart {
        let (t, side) = match dart.side {
            Side::Plus => {
                let t = self.sigma[self.next(dart.generator)];
                (t, Side::Plus)
            }
            Side::Minus => {
                let t = self.sigma[self.prev(dart.generator)];
                (t, Side::Minus)
            }
        };
        Dart {
            generator: t,
            side: side.times(self.tau[t]),
        }
    }

    /// Image of a dart under `-1 ∈ ℤ`.
    pub fn dart_step_inv(&self, dart: Dart) -> Dart {
        let t = dart.generator;
        let came_from_plus = (dart.side == Side::Plus) == self.is_direct(t);
        if came_from_plus {
            Dart::plus(self.prev(self.sigma[t]))
        } else {
            Dart::minus(self.next(self.sigma[t]))
        }
    }

    /// The dart reading the same face boundary in the opposite direction.
    pub fn dual_dart(&self, dart: Dart) -> Dart {
        let g = dart.generator;
        Dart {
            generator: self.sigma[g],
            side: dart.side.flipped().times(self.tau[g]),
        }
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..2 * self.degree()).map(Dart::from_index)
    }

    /// Face boundaries as orbits of the dart action, with duals and face classes.
    pub fn orbits(&self) -> FacePartition {
        let n = 2 * self.degree();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<Dart>> = Vec::new();
        for start in self.darts() {
            if orbit_of[start.index()] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut cycle = vec![start];
            orbit_of[start.index()] = id;
            let mut x = self.dart_step(start);
            while x != start {
                orbit_of[x.index()] = id;
                cycle.push(x);
                x = self.dart_step(x);
            }
            orbits.push(cycle);
        }
        let dual: Vec<usize> = orbits
            .iter()
            .map(|o| orbit_of[self.dual_dart(o[0]).index()])
            .collect();

        let d = self.degree();
        let mut face_class = vec![usize::MAX; d];
        let mut class_orbit = Vec::new();
        let mut orbit_class = vec![usize::MAX; orbits.len()];
        for g in 0..d {
            if face_class[g] != usize::MAX {
                continue;
            }
            let o = orbit_of[Dart::plus(g).index()];
            let id = class_orbit.len();
            class_orbit.push(o);
            orbit_class[o] = id;
            orbit_class[dual[o]] = id;
            for &x in orbits[o].iter().chain(orbits[dual[o]].iter()) {
                if x.side == Side::Plus {
                    face_class[x.generator] = id;
                }
            }
        }
        FacePartition {
            orbits,
            orbit_of,
            dual,
            face_class,
            class_orbit,
            orbit_class,
        }
    }

    /// Orbit length of `i+` for every generator `i`.
    pub fn primitive_vector(&self) -> PrimitiveVector {
        let fp = self.orbits();
        PrimitiveVector(
            (0..self.degree())
                .map(|g| fp.orbits[fp.orbit_of[Dart::plus(g).index()]].len())
                .collect(),
        )
    }

    /// Checks the validity conditions for `tv`; malformed vectors are errors.
    pub fn is_valid_type_vector(&self, tv: &TypeVector) -> Result<bool> {
        tv.check_well_formed(self.degree())?;
        Ok(self.validity_failure(tv).is_none())
    }

    /// Like [`is_valid_type_vector`](Self::is_valid_type_vector) but returns the
    /// failed condition.
    pub fn check_type_vector(&self, tv: &TypeVector) -> Result<()> {
        tv.check_well_formed(self.degree())?;
        match self.validity_failure(tv) {
            None => Ok(()),
            Some(reason) => Err(Error::InvalidTypeVector {
                vector: tv.to_string(),
                reason,
            }),
        }
    }

    fn validity_failure(&self, tv: &TypeVector) -> Option<String> {
        let fp = self.orbits();
        let prim = self.primitive_vector();
        for g in 0..self.degree() {
            if let FaceLength::Finite(l) = tv.0[g] {
                if l % prim.0[g] != 0 {
                    return Some(format!(
                        "l{} = {l} is not a multiple of the primitive length {}",
                        g + 1,
                        prim.0[g]
                    ));
                }
            }
        }
        for g in 0..self.degree() {
            for h in g + 1..self.degree() {
                if fp.face_class[g] == fp.face_class[h] && tv.0[g] != tv.0[h] {
                    return Some(format!(
                        "a{} and a{} border the same face but l{} = {} and l{} = {}",
                        g + 1,
                        h + 1,
                        g + 1,
                        tv.0[g],
                        h + 1,
                        tv.0[h]
                    ));
                }
            }
        }
        None
    }

    /// The smallest valid type vector with all faces finite.
    pub fn smallest_finite_vector(&self) -> TypeVector {
        TypeVector(
            self.primitive_vector()
                .0
                .iter()
                .map(|&k| FaceLength::Finite(k * 3usize.div_ceil(k)))
                .collect(),
        )
    }

    /// Canonical presentation for a valid type vector.
    ///
    /// One inverse relator per `sigma` pair and, for each face class of finite
    /// length `l`, the base word of its orbit `(d1 … dp)` read as
    /// `a_{σ(dp)} … a_{σ(d1)}` raised to the power `l / p`.
    pub fn canonical_presentation(&self, tv: &TypeVector) -> Result<Presentation> {
        self.check_type_vector(tv)?;
        let fp = self.orbits();
        let d = self.degree();
        let inverse_pairs = (0..d)
            .filter(|&i| i <= self.sigma[i])
            .map(|i| (i, self.sigma[i]))
            .collect();
        let mut face_relators = Vec::new();
        for (class, &orbit) in fp.class_orbit.iter().enumerate() {
            let rep = fp.class_members(class)[0];
            let FaceLength::Finite(l) = tv.0[rep] else {
                continue;
            };
            let base = GroupWord(
                fp.orbits[orbit]
                    .iter()
                    .rev()
                    .map(|x| self.sigma[x.generator])
                    .collect(),
            );
            let power = l / base.len();
            let word = GroupWord(base.0.repeat(power));
            face_relators.push(FaceRelator {
                face_class: class,
                base,
                power,
                word,
            });
        }
        Ok(Presentation {
            generators: d,
            inverse_pairs,
            face_relators,
        })
    }

    /// Relabels generators by `i -> i + k (mod d)`.
    pub fn rotated(&self, k: usize) -> LabelingScheme {
        let d = self.degree();
        let mut sigma = vec![0; d];
        let mut tau = vec![0; d];
        for i in 0..d {
            sigma[(i + k) % d] = (self.sigma[i] + k) % d;
            tau[(i + k) % d] = self.tau[i];
        }
        LabelingScheme { sigma, tau }
    }

    pub fn sigma_cycles(&self) -> Vec<Vec<usize>> {
        (0..self.degree())
            .filter(|&i| i <= self.sigma[i])
            .map(|i| {
                if self.sigma[i] == i {
                    vec![i]
                } else {
                    vec![i, self.sigma[i]]
                }
            })
            .collect()
    }
}

impl fmt::Display for LabelingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ=")?;
        for c in self.sigma_cycles() {
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        let signs: String = self
            .tau
            .iter()
            .map(|&t| if t > 0 { '+' } else { '-' })
            .collect();
        write!(f, " τ={signs}")
    }
}

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    degree: usize,
    sigma: Vec<usize>,
    tau: Vec<i8>,
}

impl Serialize for LabelingScheme {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SchemeJson {
            degree: self.degree(),
            sigma: self.sigma.iter().map(|x| x + 1).collect(),
            tau: self.tau.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabelingScheme {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SchemeJson::deserialize(d)?;
        if raw.sigma.len() != raw.degree {
            return Err(de::Error::custom(format!(
                "degree is {} but sigma has {} entries",
                raw.degree,
                raw.sigma.len()
            )));
        }
        LabelingScheme::from_one_based(&raw.sigma, &raw.tau).map_err(de::Error::custom)
    }
}

/// Face boundaries of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePartition {
    /// Dart cycles, discovered from `1+, 1-, 2+, …`.
    pub orbits: Vec<Vec<Dart>>,
    orbit_of: Vec<usize>,
    /// `dual[o]` is the orbit reading the same face in the opposite direction.
    pub dual: Vec<usize>,
    /// Face-class id of every generator.
    pub face_class: Vec<usize>,
    class_orbit: Vec<usize>,
    orbit_class: Vec<usize>,
}

impl FacePartition {
    pub fn orbit_of(&self, dart: Dart) -> usize {
        self.orbit_of[dart.index()]
    }

    pub fn class_count(&self) -> usize {
        self.class_orbit.len()
    }

    /// Orbit of the `+` dart of the smallest generator in the class.
    pub fn class_orbit(&self, class: usize) -> usize {
        self.class_orbit[class]
    }

    /// Face class of the face traced by an orbit.
    pub fn orbit_class(&self, orbit: usize) -> usize {
        self.orbit_class[orbit]
    }

    pub fn class_members(&self, class: usize) -> Vec<usize> {
        (0..self.face_class.len())
            .filter(|&g| self.face_class[g] == class)
            .collect()
    }

    /// Face class of the face containing `dart`.
    pub fn dart_class(&self, dart: Dart) -> usize {
        self.orbit_class[self.orbit_of(dart)]
    }

    /// Orbits as dart names (`"1+"`), with lengths, duals and face classes.
    pub fn to_json_value(&self) -> serde_json::Value {
        let orbits: Vec<serde_json::Value> = self
            .orbits
            .iter()
            .enumerate()
            .map(|(i, o)| {
                serde_json::json!({
                    "darts": o.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "length": o.len(),
                    "dual": self.dual[i],
                    "face_class": self.orbit_class[i],
                })
            })
            .collect();
        serde_json::json!({
            "orbits": orbits,
            "face_class": self.face_class,
            "classes": self.class_count(),
        })
    }
}

/// One entry of a type vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceLength {
    Finite(usize),
    Infinite,
}

impl FaceLength {
    pub fn finite(self) -> Option<usize> {
        match self {
            FaceLength::Finite(l) => Some(l),
            FaceLength::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == FaceLength::Infinite
    }
}

impl fmt::Display for FaceLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceLength::Finite(l) => write!(f, "{l}"),
            FaceLength::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for FaceLength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "∞" | "infinity" => Ok(FaceLength::Infinite),
            _ => s
                .parse::<usize>()
                .map(FaceLength::Finite)
                .map_err(|_| Error::MalformedVector(format!("bad entry {s:?}"))),
        }
    }
}

/// Orbit lengths `k_i` of the `+` darts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimitiveVector(pub Vec<usize>);

impl fmt::Display for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Face lengths `l_i`; finite entries are at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeVector(pub Vec<FaceLength>);

impl TypeVector {
    pub fn finite(entries: &[usize]) -> TypeVector {
        TypeVector(entries.iter().map(|&l| FaceLength::Finite(l)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[FaceLength] {
        &self.0
    }

    pub fn check_well_formed(&self, degree: usize) -> Result<()> {
        if self.0.len() != degree {
            return Err(Error::MalformedVector(format!(
                "{} has {} entries, expected {degree}",
                self,
                self.0.len()
            )));
        }
        if let Some(l) = self
            .0
            .iter()
            .filter_map(|l| l.finite())
            .find(|&l| l < 3)
        {
            return Err(Error::MalformedVector(format!(
                "{self} has a face of length {l} < 3"
            )));
        }
        Ok(())
    }

    /// Cyclic shift of entries: entry `i` moves to `i + k`.
    pub fn rotated(&self, k: usize) -> TypeVector {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_right(k);
        }
        TypeVector(v)
    }

    pub fn reversed(&self) -> TypeVector {
        let mut v = self.0.clone();
        v.reverse();
        TypeVector(v)
    }

    /// True when `other` is a rotation or reversed rotation of `self`.
    pub fn same_up_to_dihedral(&self, other: &TypeVector) -> bool {
        self.len() == other.len()
            && (0..self.len().max(1))
                .any(|k| self.rotated(k) == *other || self.reversed().rotated(k) == *other)
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for TypeVector {
    type Err = Error;

    /// Parses `"3,4,4,inf"` (brackets optional).
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(TypeVector(Vec::new()));
        }
        inner
            .split(',')
            .map(FaceLength::from_str)
            .collect::<Result<Vec<_>>>()
            .map(TypeVector)
    }
}

impl Serialize for TypeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for e in &self.0 {
            match e {
                FaceLength::Finite(l) => seq.serialize_element(l)?,
                FaceLength::Infinite => seq.serialize_element("inf")?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TypeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Int(usize),
            Str(String),
        }
        let raw = Vec::<Entry>::deserialize(d)?;
        raw.into_iter()
            .map(|e| match e {
                Entry::Int(l) => Ok(FaceLength::Finite(l)),
                Entry::Str(s) => s.parse::<FaceLength>().map_err(de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(TypeVector)
    }
}

/// A face relator `base^power` for one face class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRelator {
    pub face_class: usize,
    pub base: GroupWord,
    pub power: usize,
    pub word: GroupWord,
}

/// Canonical group presentation of a scheme with a valid type vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    /// `(i, σ(i))` with `i <= σ(i)`.
    pub inverse_pairs: Vec<(usize, usize)>,
    pub face_relators: Vec<FaceRelator>,
}

impl Presentation {
    pub fn inverse_relators(&self) -> Vec<GroupWord> {
        self.inverse_pairs
            .iter()
            .map(|&(i, j)| GroupWord(vec![i, j]))
            .collect()
    }

    /// Inverse relators followed by face relators.
    pub fn relators(&self) -> Vec<GroupWord> {
        let mut r = self.inverse_relators();
        r.extend(self.face_relators.iter().map(|f| f.word.clone()));
        r
    }

    pub fn sigma(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.generators).collect();
        for &(i, j) in &self.inverse_pairs {
            s[i] = j;
            s[j] = i;
        }
        s
    }

    /// Relators in cyclic normal form, as a set.
    pub fn normalized_relators(&self) -> BTreeSet<GroupWord> {
        let sigma = self.sigma();
        self.relators()
            .iter()
            .map(|w| w.cyclic_normal_form(&sigma))
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "generators": self.generators,
            "inverses": self.inverse_pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
            "relators": self.relators().iter().map(|w| w.to_one_based()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = format!("a1,…,a{}", self.generators);
        let rels: Vec<String> = self
            .face_relators
            .iter()
            .map(|r| {
                if r.power > 1 {
                    format!("({})^{}", compact(&r.base), r.power)
                } else {
                    compact(&r.base)
                }
            })
            .chain(self.inverse_relators().iter().map(compact))
            .collect();
        write!(f, "⟨ {gens} | {} ⟩", rels.join(", "))
    }
}

fn compact(w: &GroupWord) -> String {
    w.letters().iter().map(|x| format!("a{}", x + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn octagonal() -> LabelingScheme {
        LabelingScheme::from_cycles(8, &[&[1], &[3], &[2, 7], &[4, 5], &[6, 8]], &[2, 6, 7, 8])
            .unwrap()
    }

    fn d(s: &str) -> Dart {
        let (g, side) = s.split_at(s.len() - 1);
        let g: usize = g.parse().unwrap();
        if side == "+" {
            Dart::plus(g - 1)
        } else {
            Dart::minus(g - 1)
        }
    }

    fn same_cycle(a: &[Dart], b: &[Dart]) -> bool {
        a.len() == b.len() && (0..a.len()).any(|k| a.iter().cycle().skip(k).take(a.len()).eq(b.iter()))
    }

    #[test]
    fn octagonal_steps() {
        let s = octagonal();
        assert_eq!(s.dart_step(d("1+")), d("7-"));
        assert_eq!(s.dart_step(d("4+")), d("4+"));
        assert_eq!(s.dart_step_inv(d("7-")), d("1+"));
        assert_eq!(s.dart_step_inv(d("4+")), d("4+"));
    }

    #[test]
    fn trivial_degree3_inverse_step() {
        let s = LabelingScheme::new(vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        assert_eq!(s.dart_step_inv(d("2+")), d("1+"));
    }

    #[test]
    fn octagonal_orbits_and_duals() {
        let s = octagonal();
        let fp = s.orbits();
        assert_eq!(fp.orbits.len(), 6);
        let expected: [(&[&str], &[&str]); 3] = [
            (&["1+", "7-", "8+"], &["6+", "2-", "1-"]),
            (&["2+", "3+", "5+", "8-"], &["7+", "6-", "4-", "3-"]),
            (&["4+"], &["5-"]),
        ];
        for (orbit, dual) in expected {
            let orbit: Vec<Dart> = orbit.iter().map(|x| d(x)).collect();
            let dual: Vec<Dart> = dual.iter().map(|x| d(x)).collect();
            let o = fp.orbit_of(orbit[0]);
            assert!(same_cycle(&fp.orbits[o], &orbit), "{:?}", fp.orbits[o]);
            assert!(same_cycle(&fp.orbits[fp.dual[o]], &dual));
        }
        assert_eq!(fp.class_members(fp.face_class[0]), vec![0, 5, 7]);
        assert_eq!(fp.class_members(fp.face_class[1]), vec![1, 2, 4, 6]);
        assert_eq!(fp.class_members(fp.face_class[3]), vec![3]);
    }

    #[test]
    fn orbit_examples_small_degrees() {
        let s = LabelingScheme::new(vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let fp = s.orbits();
        assert!(same_cycle(
            &fp.orbits[fp.orbit_of(d("1+"))],
            &[d("1+"), d("2+"), d("3+")]
        ));
        assert_eq!(fp.class_count(), 1);

        let sq = LabelingScheme::from_cycles(4, &[&[1, 3], &[2, 4]], &[]).unwrap();
        let fp = sq.orbits();
        assert!(same_cycle(
            &fp.orbits[fp.orbit_of(d("1+"))],
            &[d("1+"), d("4+"), d("3+"), d("2+")]
        ));
        assert_eq!(sq.primitive_vector().0, vec![4, 4, 4, 4]);
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(octagonal().primitive_vector().0, vec![3, 4, 4, 1, 4, 3, 4, 3]);
        let s = LabelingScheme::new(vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        assert_eq!(s.primitive_vector().0, vec![3, 3, 3]);
    }

    #[test]
    fn octagonal_validity() {
        let s = octagonal();
        let v = |x: &[usize]| s.is_valid_type_vector(&TypeVector::finite(x)).unwrap();
        assert!(v(&[3, 4, 4, 3, 4, 3, 4, 3]));
        assert!(v(&[6, 8, 8, 3, 8, 6, 8, 6]));
        assert!(v(&[3, 4, 4, 5, 4, 3, 4, 3]));
        assert!(!v(&[3, 4, 4, 3, 4, 3, 4, 4]));
        assert!(matches!(
            s.is_valid_type_vector(&TypeVector::finite(&[3, 4, 4, 2, 4, 3, 4, 3])),
            Err(Error::MalformedVector(_))
        ));
        assert!(matches!(
            s.is_valid_type_vector(&TypeVector::finite(&[3, 4])),
            Err(Error::MalformedVector(_))
        ));
        let inf: TypeVector = "inf,4,4,inf,4,inf,4,inf".parse().unwrap();
        assert!(s.is_valid_type_vector(&inf).unwrap());
    }

    #[test]
    fn octagonal_presentation() {
        let s = octagonal();
        let p = s
            .canonical_presentation(&TypeVector::finite(&[3, 4, 4, 3, 4, 3, 4, 3]))
            .unwrap();
        let sigma = s.sigma().to_vec();
        let words = [
            "a1 a6 a2", "a7 a6 a4 a3", "a5 a5 a5", "a1 a1", "a3 a3", "a2 a7", "a6 a8", "a4 a5",
        ];
        let expected: BTreeSet<GroupWord> = words
            .iter()
            .map(|w| w.parse::<GroupWord>().unwrap().cyclic_normal_form(&sigma))
            .collect();
        assert_eq!(p.normalized_relators(), expected);
        assert_eq!(p.face_relators.iter().map(|r| r.power).collect::<Vec<_>>(), vec![1, 1, 3]);
    }

    #[test]
    fn free_and_square_presentations() {
        let sq = LabelingScheme::from_cycles(4, &[&[1, 3], &[2, 4]], &[]).unwrap();
        let p = sq.canonical_presentation(&"inf,inf,inf,inf".parse().unwrap()).unwrap();
        assert!(p.face_relators.is_empty());
        assert_eq!(p.relators().len(), 2);
        let p = sq.canonical_presentation(&TypeVector::finite(&[4, 4, 4, 4])).unwrap();
        assert_eq!(p.face_relators.len(), 1);
        let sigma = sq.sigma().to_vec();
        assert_eq!(
            p.face_relators[0].word.cyclic_normal_form(&sigma),
            "a4 a1 a2 a3".parse::<GroupWord>().unwrap().cyclic_normal_form(&sigma)
        );
    }

    #[test]
    fn json_round_trip() {
        let s = octagonal();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"degree":8,"sigma":[1,7,3,5,4,8,2,6],"tau":[1,-1,1,1,1,-1,-1,-1]}"#
        );
        let back: LabelingScheme = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let tv: TypeVector = serde_json::from_str(r#"[3,"inf",4]"#).unwrap();
        assert_eq!(serde_json::to_string(&tv).unwrap(), r#"[3,"inf",4]"#);
        assert!(serde_json::from_str::<LabelingScheme>(
            r#"{"degree":2,"sigma":[2,2],"tau":[1,1]}"#
        )
        .is_err());
    }

    #[test]
    fn rejects_bad_schemes() {
        assert!(LabelingScheme::new(vec![1, 1], vec![1, 1]).is_err());
        assert!(LabelingScheme::new(vec![1, 0], vec![1, -1]).is_err());
        assert!(LabelingScheme::new(vec![0], vec![1]).is_err());
    }

    pub(crate) fn arb_scheme() -> impl Strategy<Value = LabelingScheme> {
        (2usize..=8)
            .prop_flat_map(|d| (Just(d), Just((0..d).collect::<Vec<_>>()).prop_shuffle(), any::<u16>()))
            .prop_map(|(d, perm, bits)| {
                // pair up consecutive entries of a random permutation, leaving
                // some fixed according to the random bits
                let mut sigma: Vec<usize> = (0..d).collect();
                let mut k = 0;
                while k + 1 < d {
                    if bits >> k & 1 == 1 {
                        sigma[perm[k]] = perm[k + 1];
                        sigma[perm[k + 1]] = perm[k];
                        k += 2;
                    } else {
                        k += 1;
                    }
                }
                let tau = (0..d)
                    .map(|i| {
                        let r = i.min(sigma[i]);
                        if bits >> (8 + r % 8) & 1 == 1 { -1 } else { 1 }
                    })
                    .collect();
                LabelingScheme::new(sigma, tau).unwrap()
            })
    }

    proptest! {
        #[test]
        fn step_is_invertible(s in arb_scheme()) {
            for x in s.darts() {
                prop_assert_eq!(s.dart_step_inv(s.dart_step(x)), x);
                prop_assert_eq!(s.dart_step(s.dart_step_inv(x)), x);
            }
        }

        #[test]
        fn partition_and_duals(s in arb_scheme()) {
            let fp = s.orbits();
            let total: usize = fp.orbits.iter().map(Vec::len).sum();
            prop_assert_eq!(total, 2 * s.degree());
            for (o, orbit) in fp.orbits.iter().enumerate() {
                let dual = fp.dual[o];
                prop_assert_eq!(fp.dual[dual], o);
                prop_assert_eq!(fp.orbits[dual].len(), orbit.len());
                // the dual reads the orbit backwards
                for &x in orbit {
                    prop_assert_eq!(s.dual_dart(s.dart_step(x)), s.dart_step_inv(s.dual_dart(x)));
                }
            }
        }

        #[test]
        fn primitive_constant_on_classes(s in arb_scheme()) {
            let fp = s.orbits();
            let prim = s.primitive_vector();
            for g in 0..s.degree() {
                for h in 0..s.degree() {
                    if fp.face_class[g] == fp.face_class[h] {
                        prop_assert_eq!(prim.0[g], prim.0[h]);
                    }
                }
                // the minus dart of a_{g+1} traces the face between a_g and a_{g+1}
                let next = (g + 1) % s.degree();
                prop_assert_eq!(fp.dart_class(Dart::minus(next)), fp.face_class[g]);
            }
        }

        #[test]
        fn smallest_finite_vector_is_valid(s in arb_scheme()) {
            prop_assert!(s.is_valid_type_vector(&s.smallest_finite_vector()).unwrap());
        }
    }
}
