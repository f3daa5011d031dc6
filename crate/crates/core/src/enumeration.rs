//! Enumeration of labeling-scheme classes up to cyclic relabeling of the generators.
//!
//! Two schemes are equivalent when one is obtained from the other by
//! `i -> i + k (mod d)`. Classes are represented by their lexicographically least
//! member. [`burnside_count`] counts the classes independently by averaging fixed
//! points over the `d` rotations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{LabelingScheme, TypeVector};

/// One equivalence class of labeling schemes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchemeClass {
    pub representative: LabelingScheme,
    pub class_size: usize,
}

/// Least member of the scheme's orbit under cyclic relabeling.
pub fn canonical_form(scheme: &LabelingScheme) -> LabelingScheme {
    (0..scheme.degree())
        .map(|k| scheme.rotated(k))
        .min()
        .expect("degree is at least 2")
}

/// Calls `f` on every involution of `0..d`, as a `sigma` array.
///
/// When `first` is given, only involutions with `sigma[0] == first` are visited.
fn for_each_involution(d: usize, first: Option<usize>, f: &mut dyn FnMut(&[usize])) {
    fn rec(sigma: &mut Vec<usize>, free: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        let Some(i) = free.iter().position(|&x| x) else {
            f(sigma);
            return;
        };
        free[i] = false;
        sigma[i] = i;
        rec(sigma, free, f);
        for j in i + 1..sigma.len() {
            if free[j] {
                free[j] = false;
                sigma[i] = j;
                sigma[j] = i;
                rec(sigma, free, f);
                sigma[j] = j;
                free[j] = true;
            }
        }
        sigma[i] = i;
        free[i] = true;
    }
    let mut sigma: Vec<usize> = (0..d).collect();
    let mut free = vec![true; d];
    match first {
        None => rec(&mut sigma, &mut free, f),
        Some(j) => {
            free[0] = false;
            free[j] = false;
            sigma[0] = j;
            sigma[j] = 0;
            rec(&mut sigma, &mut free, f);
        }
    }
}

/// Every `tau` compatible with `sigma` (constant on inverse pairs).
fn taus_for(sigma: &[usize]) -> Vec<Vec<i8>> {
    let reps: Vec<usize> = (0..sigma.len()).filter(|&i| i <= sigma[i]).collect();
    (0u64..1 << reps.len())
        .map(|bits| {
            let mut tau = vec![1i8; sigma.len()];
            for (b, &r) in reps.iter().enumerate() {
                if bits >> b & 1 == 1 {
                    tau[r] = -1;
                    tau[sigma[r]] = -1;
                }
            }
            tau
        })
        .collect()
}

fn collect_partition(d: usize, first: Option<usize>) -> BTreeMap<LabelingScheme, usize> {
    let mut classes = BTreeMap::new();
    for_each_involution(d, first, &mut |sigma| {
        for tau in taus_for(sigma) {
            let s = LabelingScheme::new(sigma.to_vec(), tau).expect("valid by construction");
            *classes.entry(canonical_form(&s)).or_insert(0) += 1;
        }
    });
    classes
}

/// Number of raw `(sigma, tau)` pairs of degree `d`.
pub fn raw_pair_count(d: usize) -> usize {
    let mut n = 0;
    for_each_involution(d, None, &mut |sigma| {
        let orbits = (0..d).filter(|&i| i <= sigma[i]).count();
        n += 1 << orbits;
    });
    n
}

/// All scheme classes of degree `d` in canonical order.
pub fn enumerate_schemes(d: usize) -> Result<Vec<SchemeClass>> {
    enumerate_schemes_parallel(d, 1)
}

/// Same as [`enumerate_schemes`], splitting the search by the partner of `a1`
/// across `jobs` worker threads.
pub fn enumerate_schemes_parallel(d: usize, jobs: usize) -> Result<Vec<SchemeClass>> {
    match d {
        0 => return Err(Error::DegreeTooSmall(d)),
        1 => return Ok(Vec::new()),
        // degree 2 graphs are the cycles and the bi-infinite path: one family
        2 => {
            return Ok(vec![SchemeClass {
                representative: LabelingScheme::new(vec![1, 0], vec![1, 1])?,
                class_size: 1,
            }])
        }
        _ => {}
    }
    let jobs = jobs.clamp(1, d);
    let parts: Vec<usize> = (0..d).collect();
    let mut merged: BTreeMap<LabelingScheme, usize> = BTreeMap::new();
    if jobs == 1 {
        merged = collect_partition(d, None);
    } else {
        let results: Vec<BTreeMap<LabelingScheme, usize>> = std::thread::scope(|scope| {
            let handles: Vec<_> = parts
                .chunks(d.div_ceil(jobs))
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut acc = BTreeMap::new();
                        for &first in chunk {
                            for (k, v) in collect_partition(d, Some(first)) {
                                *acc.entry(k).or_insert(0) += v;
                            }
                        }
                        acc
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        });
        for part in results {
            for (k, v) in part {
                *merged.entry(k).or_insert(0) += v;
            }
        }
    }
    Ok(merged
        .into_iter()
        .map(|(representative, class_size)| SchemeClass {
            representative,
            class_size,
        })
        .collect())
}

/// Number of classes by Burnside's lemma over the cyclic relabelings.
pub fn burnside_count(d: usize) -> Result<usize> {
    match d {
        0 => return Err(Error::DegreeTooSmall(d)),
        1 => return Ok(0),
        2 => return Ok(1),
        _ => {}
    }
    let mut total = 0usize;
    for k in 0..d {
        let rot = |i: usize| (i + k) % d;
        let mut fixed = 0usize;
        for_each_involution(d, None, &mut |sigma| {
            if (0..d).all(|i| sigma[rot(i)] == rot(sigma[i])) {
                // tau must be constant on orbits of the group generated by the rotation and sigma
                let mut parent: Vec<usize> = (0..d).collect();
                fn find(p: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while p[r] != r {
                        r = p[r];
                    }
                    p[x] = r;
                    r
                }
                for i in 0..d {
                    for j in [rot(i), sigma[i]] {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
                let components = (0..d).filter(|&i| find(&mut parent, i) == i).count();
                fixed += 1 << components;
            }
        });
        total += fixed;
    }
    debug_assert_eq!(total % d, 0);
    Ok(total / d)
}

/// Symbolic family of valid finite type vectors of a scheme: entry `i` is
/// `coefficient[i] * x_{variable[i]}` with `x_f >= floor[f]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyDescriptor {
    pub coefficients: Vec<usize>,
    /// Variable of each entry, numbered by first appearance.
    pub variables: Vec<usize>,
    /// Least value of each variable keeping faces at least triangles.
    pub floors: Vec<usize>,
}

const VARIABLE_NAMES: &[&str] = &["n", "m", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"];

fn variable_name(i: usize) -> String {
    match VARIABLE_NAMES.get(i) {
        Some(n) => (*n).to_string(),
        None => format!("x{i}"),
    }
}

impl FamilyDescriptor {
    fn from_parts(coefficients: Vec<usize>, raw_vars: &[usize]) -> FamilyDescriptor {
        let mut names: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = Vec::new();
        let variables: Vec<usize> = raw_vars
            .iter()
            .map(|&v| {
                let next = names.len();
                *names.entry(v).or_insert_with(|| {
                    order.push(v);
                    next
                })
            })
            .collect();
        let mut floors = vec![1usize; names.len()];
        for (c, &v) in coefficients.iter().zip(&variables) {
            floors[v] = floors[v].max(3usize.div_ceil(*c));
        }
        FamilyDescriptor {
            coefficients,
            variables,
            floors,
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn variable_count(&self) -> usize {
        self.floors.len()
    }

    /// Instantiates the pattern.
    pub fn instantiate(&self, values: &[usize]) -> TypeVector {
        TypeVector::finite(
            &self
                .coefficients
                .iter()
                .zip(&self.variables)
                .map(|(c, &v)| c * values[v])
                .collect::<Vec<_>>(),
        )
    }

    /// Entries shifted cyclically by `k`, variables renamed by first appearance.
    pub fn rotated(&self, k: usize) -> FamilyDescriptor {
        let d = self.degree();
        let k = k % d.max(1);
        let mut coefficients = self.coefficients.clone();
        let mut vars = self.variables.clone();
        coefficients.rotate_right(k);
        vars.rotate_right(k);
        FamilyDescriptor::from_parts(coefficients, &vars)
    }

    /// Least rotation; equal for patterns that agree up to rotation of entries.
    pub fn rotation_normal_form(&self) -> FamilyDescriptor {
        (0..self.degree().max(1))
            .map(|k| self.rotated(k))
            .min_by(|a, b| {
                a.coefficients
                    .iter()
                    .zip(&a.variables)
                    .cmp(b.coefficients.iter().zip(&b.variables))
            })
            .expect("nonempty")
    }

    /// True when every instance of `other` is an instance of `self`, entry by entry.
    pub fn subsumes_aligned(&self, other: &FamilyDescriptor) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let d = self.degree();
        for i in 0..d {
            if !other.coefficients[i].is_multiple_of(self.coefficients[i]) {
                return false;
            }
            for j in 0..d {
                if self.variables[i] == self.variables[j]
                    && (other.variables[i] != other.variables[j]
                        || other.coefficients[i] * self.coefficients[j]
                            != other.coefficients[j] * self.coefficients[i])
                {
                    return false;
                }
            }
        }
        true
    }

    /// [`subsumes_aligned`](Self::subsumes_aligned) up to rotation of `other`.
    pub fn subsumes(&self, other: &FamilyDescriptor) -> bool {
        (0..other.degree().max(1)).any(|k| self.subsumes_aligned(&other.rotated(k)))
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .zip(&self.variables)
            .map(|(&c, &v)| {
                if c == 1 {
                    variable_name(v)
                } else {
                    format!("{c}{}", variable_name(v))
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for FamilyDescriptor {
    type Err = Error;

    /// Parses `[3n,2m,2m]`; a missing coefficient is 1.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedVector(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let mut coefficients = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut vars = Vec::new();
        for entry in inner.split(',') {
            let entry = entry.trim();
            let split = entry.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
            let (num, name) = entry.split_at(split);
            let c = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad())? };
            if c == 0 || name.is_empty() {
                return Err(bad());
            }
            let v = match names.iter().position(|n| n == name) {
                Some(v) => v,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            };
            coefficients.push(c);
            vars.push(v);
        }
        Ok(FamilyDescriptor::from_parts(coefficients, &vars))
    }
}

impl Serialize for FamilyDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Symbolic family of the valid finite type vectors of a scheme.
pub fn primitive_family(scheme: &LabelingScheme) -> FamilyDescriptor {
    let fp = scheme.orbits();
    FamilyDescriptor::from_parts(scheme.primitive_vector().0, &fp.face_class)
}

/// Patterns that are not contained in another pattern of the list, up to
/// rotation, in normal form and sorted.
pub fn distinct_families(patterns: &[FamilyDescriptor]) -> Vec<FamilyDescriptor> {
    let unique: BTreeSet<Vec<(usize, usize)>> = patterns
        .iter()
        .map(|p| {
            let n = p.rotation_normal_form();
            n.coefficients.into_iter().zip(n.variables).collect()
        })
        .collect();
    let unique: Vec<FamilyDescriptor> = unique
        .into_iter()
        .map(|v| {
            let (c, vars): (Vec<usize>, Vec<usize>) = v.into_iter().unzip();
            FamilyDescriptor::from_parts(c, &vars)
        })
        .collect();
    unique
        .iter()
        .filter(|p| !unique.iter().any(|q| q != *p && q.subsumes(p)))
        .cloned()
        .collect()
}

/// A class together with the member that validates a given type vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatingClass {
    pub class: SchemeClass,
    pub scheme: LabelingScheme,
}

/// Classes having a member that validates `tv` (entries in generator order).
pub fn schemes_validating(d: usize, tv: &TypeVector) -> Result<Vec<ValidatingClass>> {
    if d < 3 {
        return Err(Error::DegreeTooSmall(d));
    }
    tv.check_well_formed(d)?;
    let mut out = Vec::new();
    for class in enumerate_schemes(d)? {
        let hit = (0..d)
            .map(|k| class.representative.rotated(k))
            .find(|s| s.is_valid_type_vector(tv).unwrap_or(false));
        if let Some(scheme) = hit {
            out.push(ValidatingClass { class, scheme });
        }
    }
    Ok(out)
}
