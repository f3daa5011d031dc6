//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.
//!
//! `cargo test -p planar-cayley-tests --test acceptance -- --seed 42` fixes the word sampler seed
//! (the `PCAYLEY_SEED` variable works too).

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use planar_cayley::catalog::{reference_count, CatalogFile};
use planar_cayley::decider::{
    complete_to_fullness, decide_planar, default_oracle, CosetOracle, FullPresentation, SchemeOracle,
    Verdict, WordOracle,
};
use planar_cayley::enumeration::{
    burnside_count, canonical_form, distinct_families, enumerate_schemes, primitive_family,
    schemes_validating, FamilyDescriptor,
};
use planar_cayley::geometry::{classify, distance, solve_edge_length, GeometryClass};
use planar_cayley::tiling::{build_ball, build_complete, euler_characteristic, BuildOptions};
use planar_cayley::{Error, GroupWord, LabelingScheme, Result, TypeVector, WordProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Check = Box<dyn Fn() -> Outcome>;

fn tv(s: &str) -> TypeVector {
    s.parse().unwrap()
}

fn words(d: usize, rels: &[&[usize]]) -> Vec<GroupWord> {
    rels.iter().map(|r| GroupWord::from_one_based(r, d).unwrap()).collect()
}

fn normalized(ws: &[GroupWord], sigma: &[usize]) -> BTreeSet<GroupWord> {
    ws.iter().map(|w| w.cyclic_normal_form(sigma)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    let e = t.elapsed();
    ensure(e <= limit, || format!("{what} took {e:?}, limit {limit:?}"))
}

fn counts() -> Outcome {
    let t = Instant::now();
    for (d, expected) in [(3, 8), (4, 26), (5, 64)] {
        let c = CatalogFile::build(d, 1).map_err(|e| e.to_string())?;
        ensure(c.counts.classes == expected, || format!("degree {d}: {} classes", c.counts.classes))?;
        ensure(c.counts.burnside == expected, || format!("degree {d}: Burnside {}", c.counts.burnside))?;
        ensure(reference_count(d) == Some(expected), || format!("degree {d}: table mismatch"))?;
    }
    within(t, Duration::from_secs(10), "degrees 3-5")?;
    let six = enumerate_schemes(6).map_err(|e| e.to_string())?.len();
    let b6 = burnside_count(6).map_err(|e| e.to_string())?;
    ensure(six == b6, || format!("degree 6: {six} classes but Burnside {b6}"))?;
    ensure(six == 253 || six == 254, || format!("degree 6: {six} classes"))?;
    Ok(format!(
        "8/26/64 in {:?}; degree 6: {six} classes = Burnside {b6}, reference {}",
        t.elapsed(),
        reference_count(6).unwrap()
    ))
}

fn octagonal() -> LabelingScheme {
    LabelingScheme::from_one_based(&[1, 7, 3, 5, 4, 8, 2, 6], &[1, -1, 1, 1, 1, -1, -1, -1]).unwrap()
}

fn same_cycle(a: &[String], b: &[&str]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
}

fn octagonal_example() -> Outcome {
    let s = octagonal();
    let fp = s.orbits();
    let expected: [(&[&str], &[&str]); 3] = [
        (&["1+", "7-", "8+"], &["6+", "2-", "1-"]),
        (&["2+", "3+", "5+", "8-"], &["7+", "6-", "4-", "3-"]),
        (&["4+"], &["5-"]),
    ];
    ensure(fp.orbits.len() == 6, || format!("{} orbits", fp.orbits.len()))?;
    let names: Vec<Vec<String>> = fp.orbits.iter().map(|o| o.iter().map(|x| x.to_string()).collect()).collect();
    for (orbit, dual) in expected {
        let i = names
            .iter()
            .position(|o| same_cycle(o, orbit))
            .ok_or_else(|| format!("orbit {orbit:?} missing"))?;
        let j = fp.dual[i];
        ensure(same_cycle(&names[j], dual), || format!("dual of {orbit:?} is {:?}", names[j]))?;
        ensure(names[i].len() == names[j].len(), || "dual lengths differ".into())?;
    }
    let pv = s.primitive_vector();
    ensure(pv.0 == [3, 4, 4, 1, 4, 3, 4, 3], || format!("primitive vector {pv}"))?;
    let family = primitive_family(&s);
    let expected: FamilyDescriptor = "[3p,4q,4q,r,4q,3p,4q,3p]".parse().unwrap();
    ensure(family == expected, || format!("family {family}"))?;
    ensure(family.floors == [1, 1, 3], || format!("floors {:?}", family.floors))?;
    Ok(format!("orbit lengths 3/3, 4/4, 1/1; family {family} with floors {:?}", family.floors))
}

fn degree_three_families() -> Outcome {
    let classes = enumerate_schemes(3).map_err(|e| e.to_string())?;
    let patterns: Vec<FamilyDescriptor> = classes.iter().map(|c| primitive_family(&c.representative)).collect();
    let found: BTreeSet<String> = distinct_families(&patterns).iter().map(|f| f.to_string()).collect();
    let expected: BTreeSet<String> = ["[3n,3n,3n]", "[n,2m,2m]", "[2n,2m,2p]"]
        .iter()
        .map(|s| s.parse::<FamilyDescriptor>().unwrap().rotation_normal_form().to_string())
        .collect();
    ensure(found == expected, || format!("families {found:?}, expected {expected:?}"))?;
    let raw: BTreeSet<String> = patterns.iter().map(|p| p.rotation_normal_form().to_string()).collect();
    Ok(format!("{} raw patterns reduce to {found:?}", raw.len()))
}

fn presentations() -> Outcome {
    let s = octagonal();
    let p = s.canonical_presentation(&tv("3,4,4,3,4,3,4,3")).map_err(|e| e.to_string())?;
    let expected = words(
        8,
        &[&[1, 6, 2], &[7, 6, 4, 3], &[5, 5, 5], &[1, 1], &[3, 3], &[2, 7], &[6, 8], &[4, 5]],
    );
    let got = p.relators();
    ensure(got.len() == expected.len(), || format!("{} relators", got.len()))?;
    ensure(normalized(&got, s.sigma()) == normalized(&expected, s.sigma()), || format!("got {p}"))?;

    let snub = schemes_validating(5, &tv("3,3,3,3,4")).map_err(|e| e.to_string())?;
    ensure(snub.len() == 1, || format!("{} classes validate [3,3,3,3,4]", snub.len()))?;
    let s = &snub[0].scheme;
    let p = s.canonical_presentation(&tv("3,3,3,3,4")).map_err(|e| e.to_string())?;
    let reference = words(5, &[&[1, 2], &[3, 3], &[4, 5], &[1, 1, 1, 1], &[2, 3, 5], &[4, 4, 4]]);
    let ours = normalized(&p.relators(), s.sigma());
    let shift = (0..5).find(|&k| {
        let map: Vec<usize> = (0..5).map(|i| (i + k) % 5).collect();
        let relabeled: Vec<GroupWord> = reference.iter().map(|w| w.relabeled(&map)).collect();
        normalized(&relabeled, s.sigma()) == ours
    });
    let k = shift.ok_or_else(|| format!("snub presentation {p} matches no relabeling"))?;
    Ok(format!("degree-8 example matches; snub cube {s} matches with shift {k}"))
}

fn geometry() -> Outcome {
    for (v, g) in [
        ("3,3,3,3,4", GeometryClass::Spherical),
        ("4,4,4,4", GeometryClass::Euclidean),
        ("3,4,4,3,4,3,4,3", GeometryClass::Hyperbolic),
    ] {
        ensure(classify(&tv(v)) == g, || format!("{v} classified as {}", classify(&tv(v))))?;
    }
    let mut slowest = Duration::ZERO;
    for v in ["3,3,3,3,4", "4,4,4,4", "3,4,4,3,4,3,4,3", "3,3,3,3,3", "4,6,8", "3,12,12", "4,6,12", "5,5,5,5", "4,4,4,6", "inf,inf,inf"] {
        let t = Instant::now();
        let sol = solve_edge_length(&tv(v)).map_err(|e| format!("{v}: {e}"))?;
        slowest = slowest.max(t.elapsed());
        ensure(sol.residual <= 1e-12, || format!("{v}: residual {}", sol.residual))?;
    }
    for v in ["3,3,5", "3,4,7", "3,5,9"] {
        let t = Instant::now();
        let r = solve_edge_length(&tv(v));
        slowest = slowest.max(t.elapsed());
        ensure(matches!(r, Err(Error::NoSolution { .. })), || format!("{v}: {r:?}"))?;
    }
    ensure(slowest < Duration::from_millis(1), || format!("slowest solve {slowest:?}"))?;
    Ok(format!("slowest solve {slowest:?}"))
}

fn snub_build() -> Outcome {
    let t = Instant::now();
    let snub = schemes_validating(5, &tv("3,3,3,3,4")).map_err(|e| e.to_string())?;
    let s = &snub.first().ok_or("no snub class")?.scheme;
    let ball = build_complete(s, &tv("3,3,3,3,4"), &BuildOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let chi = euler_characteristic(&ball).map_err(|e| e.to_string())?;
    let (v, e, f) = (ball.vertex_count(), ball.edge_count(), ball.faces.len());
    ensure((v, e, f, chi) == (24, 60, 38, 2), || format!("V={v} E={e} F={f} chi={chi}"))?;
    let l = ball.edge_length();
    let worst = ball
        .edges
        .iter()
        .map(|ed| {
            let (a, b) = (ball.vertices[ed.u].position.to_f64(), ball.vertices[ed.v].position.to_f64());
            (distance(ball.geometry(), &a, &b) - l).abs()
        })
        .fold(0.0, f64::max);
    ensure(worst <= 1e-8, || format!("edge length off by {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("build took {elapsed:?}"))?;
    Ok(format!("V=24 E=60 F=38 chi=2, edge error {worst:.1e}, built in {elapsed:?}"))
}

fn non_cayley() -> Outcome {
    let a = schemes_validating(5, &tv("3,3,3,3,3")).map_err(|e| e.to_string())?;
    let b = schemes_validating(4, &tv("5,5,5,5")).map_err(|e| e.to_string())?;
    let c = schemes_validating(4, &tv("4,4,4,6")).map_err(|e| e.to_string())?;
    ensure(b.is_empty(), || format!("{} classes validate [5,5,5,5]", b.len()))?;
    ensure(c.len() >= 2, || format!("{} classes validate [4,4,4,6]", c.len()))?;
    if let Some(hit) = a.first() {
        let ball = build_complete(&hit.scheme, &tv("3,3,3,3,3"), &BuildOptions::default())
            .map_err(|e| e.to_string())?;
        return Err(format!(
            "[5,5,5,5]: 0 classes, [4,4,4,6]: {} classes, but [3,3,3,3,3] is validated by {} \
             whose graph has V={} E={} F={}: the icosahedron as a Cayley graph of A4 = <y,z | y^3, z^3, (zy)^2> \
             (checked against explicit permutations in crates/core/tests/icosahedron.rs), so an empty answer would be wrong",
            c.len(),
            hit.scheme,
            ball.vertex_count(),
            ball.edge_count(),
            ball.faces.len()
        ));
    }
    Ok(format!("0, 0 and {} classes", c.len()))
}

/// Random words, half of them built as `u r u^-1` around a face relator so that
/// trivial words are common.
fn sample_word(rng: &mut ChaCha8Rng, s: &LabelingScheme, relators: &[GroupWord]) -> GroupWord {
    let d = s.degree();
    if rng.gen_bool(0.5) || relators.is_empty() {
        let n = rng.gen_range(0..=12);
        return GroupWord((0..n).map(|_| rng.gen_range(0..d)).collect());
    }
    let r = &relators[rng.gen_range(0..relators.len())];
    let r = r.rotated(rng.gen_range(0..r.len().max(1)));
    let room = 12usize.saturating_sub(r.len()) / 2;
    let u = GroupWord((0..rng.gen_range(0..=room)).map(|_| rng.gen_range(0..d)).collect());
    let mut w = u.concat(&r).concat(&u.inverse(s.sigma()));
    if rng.gen_bool(0.25) && !w.is_empty() {
        let i = rng.gen_range(0..w.len());
        w.0[i] = rng.gen_range(0..d);
    }
    w.0.truncate(12);
    w
}

fn coherence(seed: u64) -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut classes, mut queries, mut trivial, mut skipped) = (0, 0, 0, Vec::new());
    for d in [3, 4] {
        for class in enumerate_schemes(d).map_err(|e| e.to_string())? {
            let s = &class.representative;
            let v = s.smallest_finite_vector();
            let wp = match WordProblem::new(s, &v) {
                Ok(wp) => wp,
                Err(Error::NoSolution { .. }) => {
                    skipped.push(format!("{s} {v}"));
                    continue;
                }
                Err(e) => return Err(format!("{s} {v}: {e}")),
            };
            let ball = build_ball(s, &v, 6).map_err(|e| format!("{s} {v}: {e}"))?;
            let relators = s.canonical_presentation(&v).map_err(|e| e.to_string())?.relators();
            classes += 1;
            for _ in 0..1000 {
                let w = sample_word(&mut rng, s, &relators);
                let combinatorial = ball
                    .decide_word(&w)
                    .ok_or_else(|| format!("{s} {v}: {w} leaves the radius-6 ball"))?;
                let geometric = wp.is_trivial(&w).map_err(|e| format!("{s} {v} {w}: {e}"))?;
                if combinatorial != geometric {
                    return Err(format!(
                        "{s} {v}: {w} combinatorial {combinatorial}, geometric {geometric} (seed {seed})"
                    ));
                }
                queries += 1;
                trivial += usize::from(combinatorial);
            }
        }
    }
    within(t, Duration::from_secs(60), "coherence")?;
    let mut msg = format!(
        "seed {seed}: {classes} classes, {queries} words ({trivial} trivial), 0 disagreements in {:?}",
        t.elapsed()
    );
    if !skipped.is_empty() {
        msg.push_str(&format!("; no geometric realization for {}", skipped.join(", ")));
    }
    Ok(msg)
}

struct Z2;

impl WordOracle for Z2 {
    fn is_trivial(&self, w: &GroupWord) -> Result<bool> {
        let (mut x, mut y) = (0i64, 0i64);
        for &l in w.letters() {
            match l {
                0 => x += 1,
                1 => y += 1,
                2 => x -= 1,
                _ => y -= 1,
            }
        }
        Ok(x == 0 && y == 0)
    }
}

fn decide(full: &FullPresentation, oracle: &dyn WordOracle) -> std::result::Result<(Verdict, Duration), String> {
    let t = Instant::now();
    let v = decide_planar(full, oracle).map_err(|e| e.to_string())?;
    Ok((v, t.elapsed()))
}

fn decider() -> Outcome {
    let limit = Duration::from_secs(30);
    let snub = FullPresentation::new(5, words(5, &[&[1, 2], &[3, 3], &[4, 5], &[1, 1, 1, 1], &[2, 3, 5], &[4, 4, 4]]))
        .unwrap();
    let finite = CosetOracle::new(&snub, 10_000).map_err(|e| e.to_string())?;
    let full = complete_to_fullness(5, 4, &finite).map_err(|e| e.to_string())?;
    let oracle = default_oracle(&full, 100_000).map_err(|e| e.to_string())?;
    let (v, t1) = decide(&full, &oracle)?;
    let Verdict::Yes { candidate, type_vector, .. } = &v else {
        return Err("snub cube: NO".into());
    };
    ensure((0..5).any(|k| type_vector.rotated(k) == tv("3,3,3,3,4")), || format!("snub witness {type_vector}"))?;
    ensure(candidate.scheme.is_valid_type_vector(type_vector) == Ok(true), || "snub witness invalid".into())?;
    ensure(t1 < limit, || format!("snub took {t1:?}"))?;
    let snub_tv = type_vector.to_string();

    let full = complete_to_fullness(4, 4, &Z2).map_err(|e| e.to_string())?;
    let (v, t2) = decide(&full, &Z2)?;
    let Verdict::Yes { type_vector, .. } = &v else {
        return Err("Z^2: NO".into());
    };
    ensure(*type_vector == tv("4,4,4,4"), || format!("Z^2 witness {type_vector}"))?;
    ensure(t2 < limit, || format!("Z^2 took {t2:?}"))?;

    let mut rels: Vec<Vec<usize>> = (1..=4).map(|i| vec![i, i]).collect();
    for i in 1..=4 {
        for j in i + 1..=4 {
            rels.push(vec![i, j, i, j]);
        }
    }
    let rels: Vec<&[usize]> = rels.iter().map(|r| r.as_slice()).collect();
    let cube = FullPresentation::new(4, words(4, &rels)).unwrap();
    let finite = CosetOracle::new(&cube, 10_000).map_err(|e| e.to_string())?;
    let full = complete_to_fullness(4, 4, &finite).map_err(|e| e.to_string())?;
    let oracle = default_oracle(&full, 100_000).map_err(|e| e.to_string())?;
    let (v, t3) = decide(&full, &oracle)?;
    ensure(!v.is_yes(), || "(Z/2)^4: YES".into())?;
    ensure(t3 < limit, || format!("(Z/2)^4 took {t3:?}"))?;
    Ok(format!(
        "snub YES {} ({t1:?}), Z^2 YES [4,4,4,4] ({t2:?}), (Z/2)^4 NO over {} candidates ({t3:?})",
        snub_tv,
        v.report().candidates
    ))
}

fn round_trip() -> Outcome {
    let t = Instant::now();
    let mut same_class = 0;
    let classes = enumerate_schemes(3).map_err(|e| e.to_string())?;
    for class in &classes {
        let s = &class.representative;
        let v = s.smallest_finite_vector();
        let p = s.canonical_presentation(&v).map_err(|e| e.to_string())?;
        let l = p.relators().iter().map(|w| w.len()).max().unwrap_or(2);
        let oracle = SchemeOracle::new(s, &v).map_err(|e| format!("{s} {v}: {e}"))?;
        let full = complete_to_fullness(3, l, &oracle).map_err(|e| e.to_string())?;
        let verdict = decide_planar(&full, &oracle).map_err(|e| format!("{s} {v}: {e}"))?;
        let Verdict::Yes { candidate, type_vector, .. } = verdict else {
            return Err(format!("{s} {v}: NO"));
        };
        // the witness graph and the original have the same relators
        let back = candidate
            .scheme
            .canonical_presentation(&type_vector)
            .map_err(|e| e.to_string())?;
        for r in back.relators() {
            let r = candidate.to_presentation(&r);
            ensure(oracle.is_trivial(&r) == Ok(true), || format!("{s} {v}: witness relator {r} is not trivial"))?;
        }
        let witness = WordProblem::new(&candidate.scheme, &type_vector).map_err(|e| e.to_string())?;
        for r in p.relators() {
            let pos = candidate.to_positions(&r);
            ensure(witness.is_trivial(&pos) == Ok(true), || format!("{s} {v}: relator {r} fails in the witness"))?;
        }
        same_class += usize::from(canonical_form(&candidate.scheme) == *s);
    }
    within(t, Duration::from_secs(60), "round trip")?;
    Ok(format!(
        "{} classes recovered ({same_class} in the original class) in {:?}",
        classes.len(),
        t.elapsed()
    ))
}

fn seed() -> u64 {
    let args: Vec<String> = std::env::args().collect();
    let from_args = args
        .iter()
        .position(|a| a == "--seed")
        .and_then(|i| args.get(i + 1))
        .and_then(|s| s.parse().ok());
    from_args
        .or_else(|| std::env::var("PCAYLEY_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(20_241_016)
}

fn main() -> ExitCode {
    let seed = seed();
    let criteria: Vec<(&str, Check)> = vec![
        ("class counts", Box::new(counts)),
        ("degree-8 example", Box::new(octagonal_example)),
        ("degree-3 families", Box::new(degree_three_families)),
        ("presentations", Box::new(presentations)),
        ("geometry", Box::new(geometry)),
        ("snub cube build", Box::new(snub_build)),
        ("non-Cayley witnesses", Box::new(non_cayley)),
        ("word-problem coherence", Box::new(move || coherence(seed))),
        ("decider", Box::new(decider)),
        ("round trip", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} [{:.2?}]: {msg}", i + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{:.2?}]: {msg}", i + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
