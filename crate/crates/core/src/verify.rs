//! The verification battery: ten independent checks covering counting,
//! Plücker coherence, the prime property, the null-polarity laws, the
//! parity consequence, the PG(5,2) spread classification, non-existence
//! sampling evidence, products and total subspaces, partitions, and the
//! spread predicates.
//!
//! Each check runs at `Quick` scale (sampled, for a fast smoke pass) or
//! `Full` scale (the exhaustive desk-scale battery). Checks return an
//! outcome instead of panicking so the CLI can report all of them.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complexes::{self, LinearComplex, PolarTarget, ProductResult};
use crate::exterior::{self, AlternatingForm, MultiVector};
use crate::gf::Field;
use crate::linalg;
use crate::partitions::{self, LinePartition, PartitionError};
use crate::projspace::{self, Subspace};
use crate::search::{self, SearchMode, SearchOptions};
use crate::spreads::{self, LineSpread};

/// Number of degree-3 forms on F_2^6 whose singular lines form a line
/// spread of PG(5,2), established by the first exhaustive run of this
/// battery and kept as a regression value. They split into 55552
/// distinct spreads, three forms apiece, and every one of those spreads
/// is geometric.
pub const PG52_SPREAD_FORM_COUNT: u64 = 166_656;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CheckOutcome {
    pub fn status_line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} — {} ({} ms)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.millis
        )
    }
}

const NAMES: [&str; 10] = [
    "enumeration counts match Gaussian binomials",
    "Klein quadric coherence",
    "hyperplane sections are primes",
    "null polarity suite",
    "parity forces singular lines through every point",
    "PG(5,2) spread-form classification",
    "non-existence sampling evidence",
    "products and total subspaces",
    "partition machinery",
    "spread predicates",
];

/// Runs one criterion by number (1-based).
pub fn criterion(id: u8, level: Level) -> CheckOutcome {
    let started = Instant::now();
    let result = match id {
        1 => c1(level),
        2 => c2(level),
        3 => c3(level),
        4 => c4(level),
        5 => c5(level),
        6 => c6(level),
        7 => c7(level),
        8 => c8(level),
        9 => c9(level),
        10 => c10(level),
        _ => Err(format!("no criterion {id}")),
    };
    let millis = started.elapsed().as_millis();
    match result {
        Ok(detail) => CheckOutcome {
            id,
            name: NAMES[(id as usize - 1).min(9)],
            passed: true,
            detail,
            millis,
        },
        Err(detail) => CheckOutcome {
            id,
            name: NAMES[(id as usize - 1).min(9)],
            passed: false,
            detail,
            millis,
        },
    }
}

/// Runs the whole battery in order.
pub fn run(level: Level) -> Vec<CheckOutcome> {
    (1..=10).map(|id| criterion(id, level)).collect()
}

fn field(q: u8) -> Arc<Field> {
    Field::shared(q).expect("supported order")
}

// --- criterion 1 -----------------------------------------------------

fn c1(_level: Level) -> Result<String, String> {
    let cases = [
        (3u8, 2u8, 1i32, 35u128),
        (4, 2, 2, 155),
        (5, 2, 1, 651),
        (6, 2, 2, 11811),
    ];
    for (n, q, d, expected) in cases {
        let f = field(q);
        let listed = projspace::enumerate(&f, n, d)
            .map_err(|e| e.to_string())?
            .len() as u128;
        let formula = projspace::gaussian(n, q, d);
        let structural = projspace::enumerate_count(n, q, d);
        if listed != expected || formula != expected || structural != expected {
            return Err(format!(
                "PG({n},{q}) dim {d}: enumerate {listed}, product formula {formula}, \
                 pivot count {structural}, expected {expected}"
            ));
        }
    }
    Ok("35 / 155 / 651 / 11811 via three independent routes".into())
}

// --- criterion 2 -----------------------------------------------------

fn klein_value(f: &Field, p: &MultiVector) -> u8 {
    let a = f.mul(
        f.scalar(p.coeff(&[0, 1])).unwrap(),
        f.scalar(p.coeff(&[2, 3])).unwrap(),
    );
    let b = f.mul(
        f.scalar(p.coeff(&[0, 2])).unwrap(),
        f.scalar(p.coeff(&[1, 3])).unwrap(),
    );
    let c = f.mul(
        f.scalar(p.coeff(&[0, 3])).unwrap(),
        f.scalar(p.coeff(&[1, 2])).unwrap(),
    );
    let (a, b, c) = (a.unwrap(), b.unwrap(), c.unwrap());
    f.add(f.sub(a, b).unwrap(), c).unwrap().index()
}

fn c2(_level: Level) -> Result<String, String> {
    let f2 = field(2);
    let lines = projspace::enumerate(&f2, 3, 1).map_err(|e| e.to_string())?;
    for l in &lines {
        let p = exterior::pluecker(l).map_err(|e| e.to_string())?;
        if klein_value(&f2, &p) != 0 {
            return Err(format!("line \"{l}\" misses the quadric"));
        }
        let back = exterior::unpluecker(&p).map_err(|e| e.to_string())?;
        if back != *l {
            return Err(format!("round trip failed for \"{l}\""));
        }
    }
    let mut coeffs = vec![0u8; 6];
    coeffs[0] = 1; // e01
    coeffs[5] = 1; // e23
    let bad = MultiVector::new(&f2, 3, 2, coeffs).map_err(|e| e.to_string())?;
    if exterior::unpluecker(&bad).is_ok() {
        return Err("e01 + e23 must not be decomposable".into());
    }
    Ok(format!(
        "{} line images on the quadric, round trips close, e01+e23 rejected",
        lines.len()
    ))
}

// --- criterion 3 -----------------------------------------------------

/// Shared incidence scaffolding for one (n, q, h) configuration.
struct Geometry {
    field: Arc<Field>,
    n: u8,
    h: i32,
    hsubs: Vec<Subspace>,
    hplueckers: Vec<MultiVector>,
    /// member index triples of each pencil of h-subspaces
    pencils: Vec<Vec<usize>>,
}

impl Geometry {
    fn new(f: &Arc<Field>, n: u8, h: i32) -> Result<Geometry, String> {
        let hsubs = projspace::enumerate(f, n, h).map_err(|e| e.to_string())?;
        let hplueckers = hsubs
            .iter()
            .map(|x| exterior::pluecker(x).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let index: std::collections::HashMap<&Subspace, usize> =
            hsubs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let pencils = projspace::all_pencils(f, n, h)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|p| p.members.iter().map(|m| index[m]).collect())
            .collect();
        Ok(Geometry {
            field: f.clone(),
            n,
            h,
            hsubs,
            hplueckers,
            pencils,
        })
    }

    fn member_flags(&self, form: &AlternatingForm) -> Vec<bool> {
        self.hplueckers
            .iter()
            .map(|p| form.pair(p).expect("matching grade") == 0)
            .collect()
    }

    fn flags_are_prime(&self, flags: &[bool]) -> bool {
        if flags.iter().all(|&m| m) {
            return false;
        }
        self.pencils.iter().all(|members| {
            let inside = members.iter().filter(|&&i| flags[i]).count();
            inside == 1 || inside == members.len()
        })
    }
}

fn c3(level: Level) -> Result<String, String> {
    let f2 = field(2);
    // all 63 line-complex covectors of PG(3,2), through the public test
    let mut checked_lines = 0usize;
    for bits in 1u32..64 {
        let coeffs: Vec<u8> = (0..6).map(|i| ((bits >> i) & 1) as u8).collect();
        let form = AlternatingForm::new(&f2, 3, 2, coeffs).map_err(|e| e.to_string())?;
        let k = LinearComplex::new(form).map_err(|e| e.to_string())?;
        let set: HashSet<Subspace> = k
            .members()
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        if !complexes::is_prime(&set, &f2, 3, 1).map_err(|e| e.to_string())? {
            return Err(format!("covector index {bits} is not a prime"));
        }
        checked_lines += 1;
    }
    // all 1023 plane-complex covectors of PG(4,2), on the shared scaffolding
    let geo = Geometry::new(&f2, 4, 2)?;
    let enumerator = search::FormEnumerator::new(&f2, 4).map_err(|e| e.to_string())?;
    let (indices, label): (Vec<u128>, &str) = match level {
        Level::Full => ((0..enumerator.count()).collect(), "all"),
        Level::Quick => ((0..enumerator.count()).step_by(8).collect(), "sampled"),
    };
    let failures: Vec<u128> = indices
        .par_iter()
        .filter(|&&i| {
            let flags = geo.member_flags(&enumerator.get(i));
            !geo.flags_are_prime(&flags)
        })
        .copied()
        .collect();
    if !failures.is_empty() {
        return Err(format!(
            "plane covector index {} is not a prime",
            failures[0]
        ));
    }
    // the fast flag route and the public route agree on a spot sample
    for i in (0..enumerator.count()).step_by(257) {
        let form = enumerator.get(i);
        let k = LinearComplex::new(form.clone()).map_err(|e| e.to_string())?;
        let set: HashSet<Subspace> = k
            .members()
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        let public = complexes::is_prime(&set, &f2, 4, 2).map_err(|e| e.to_string())?;
        let fast = geo.flags_are_prime(&geo.member_flags(&form));
        if public != fast {
            return Err(format!("prime routes disagree at index {i}"));
        }
    }
    Ok(format!(
        "{checked_lines} line covectors and {} plane covectors ({label})",
        indices.len()
    ))
}

// --- criterion 4 -----------------------------------------------------

/// Full polar scaffolding for one (n, q, h): the (h−1)-subspaces, their
/// stars, and their pencils.
struct PolarGeometry {
    geo: Geometry,
    km1subs: Vec<Subspace>,
    km1plueckers: Vec<MultiVector>,
    /// per (h−1)-subspace, indices of the h-subspaces through it
    stars: Vec<Vec<usize>>,
    /// member index tuples of each pencil of (h−1)-subspaces
    km1pencils: Vec<Vec<usize>>,
    bounds: (i32, i32),
}

impl PolarGeometry {
    fn new(f: &Arc<Field>, n: u8, h: i32) -> Result<PolarGeometry, String> {
        let geo = Geometry::new(f, n, h)?;
        let km1subs = projspace::enumerate(f, n, h - 1).map_err(|e| e.to_string())?;
        let km1plueckers = km1subs
            .iter()
            .map(|x| exterior::pluecker(x).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let index: std::collections::HashMap<&Subspace, usize> =
            km1subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut stars = vec![Vec::new(); km1subs.len()];
        let empty = Subspace::empty(f, n);
        for (xi, x) in geo.hsubs.iter().enumerate() {
            let coords = projspace::IntervalCoords::new(&empty, x).map_err(|e| e.to_string())?;
            for local in projspace::enumerate(f, h as u8, h - 1).map_err(|e| e.to_string())? {
                let u = coords.to_global(&local).map_err(|e| e.to_string())?;
                stars[index[&u]].push(xi);
            }
        }
        let km1pencils = projspace::all_pencils(f, n, h - 1)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|p| p.members.iter().map(|m| index[m]).collect())
            .collect();
        let c = linalg::binomial(n as usize + 1, h as usize) as i32;
        let bounds = (c - (n as i32 + 2), c - (h + 2));
        Ok(PolarGeometry {
            geo,
            km1subs,
            km1plueckers,
            stars,
            km1pencils,
            bounds,
        })
    }

    /// All polarity-side checks for one covector. Returns a violation
    /// description or the number of singular (h−1)-subspaces seen.
    fn check_complex(&self, form: &AlternatingForm, public_paths: bool) -> Result<usize, String> {
        let f = &self.geo.field;
        let n = self.geo.n;
        let k = LinearComplex::new(form.clone()).map_err(|e| e.to_string())?;
        let member_flags = self.geo.member_flags(form);
        // contraction targets per (h−1)-subspace
        let mut covectors: Vec<Option<Vec<u8>>> = Vec::with_capacity(self.km1subs.len());
        for p in &self.km1plueckers {
            let cov = exterior::contract(form, p).map_err(|e| e.to_string())?;
            covectors.push(if cov.iter().all(|&c| c == 0) {
                None
            } else {
                Some(cov)
            });
        }
        let targets: Vec<Option<Subspace>> = covectors
            .iter()
            .map(|c| {
                c.as_ref()
                    .map(|cov| Subspace::from_covector(f, cov).expect("nonzero covector"))
            })
            .collect();

        for (ui, u) in self.km1subs.iter().enumerate() {
            let star = &self.stars[ui];
            let members: Vec<usize> = star
                .iter()
                .copied()
                .filter(|&xi| member_flags[xi])
                .collect();
            match &targets[ui] {
                None => {
                    // contraction says singular: the whole star must be in K
                    if members.len() != star.len() {
                        return Err(format!(
                            "\"{u}\" contracts to zero but its star is not inside the complex"
                        ));
                    }
                }
                Some(hyp) => {
                    if members.len() == star.len() {
                        return Err(format!(
                            "star of \"{u}\" lies in the complex but the contraction is nonzero"
                        ));
                    }
                    // independent route: the polar hyperplane is the join
                    // of the members through U
                    let mut rows: Vec<Vec<u8>> = u.basis().map(|r| r.to_vec()).collect();
                    for &xi in &members {
                        rows.extend(self.geo.hsubs[xi].basis().map(|r| r.to_vec()));
                    }
                    let join = Subspace::span(f, n, &rows).map_err(|e| e.to_string())?;
                    if join != *hyp {
                        return Err(format!(
                            "join of members through \"{u}\" differs from the contraction kernel"
                        ));
                    }
                    // null property
                    if !hyp.contains(u) {
                        return Err(format!("null property fails at \"{u}\""));
                    }
                }
            }
        }

        // reciprocity over collinear pairs, exceptional images read as
        // the whole space
        let img_contains = |ui: usize, x: &Subspace| -> bool {
            match &targets[ui] {
                None => true,
                Some(h) => h.contains(x),
            }
        };
        for pencil in &self.km1pencils {
            for &a in pencil {
                for &b in pencil {
                    if a == b {
                        continue;
                    }
                    if img_contains(b, &self.km1subs[a]) && !img_contains(a, &self.km1subs[b]) {
                        return Err(format!(
                            "reciprocity fails between \"{}\" and \"{}\"",
                            self.km1subs[a], self.km1subs[b]
                        ));
                    }
                }
            }
        }

        // image span dimension ≥ h
        let rows: Vec<Vec<u8>> = covectors.iter().flatten().cloned().collect();
        let span = Subspace::span(f, n, &rows).map_err(|e| e.to_string())?;
        if span.dim() < self.geo.h {
            return Err(format!(
                "image span dimension {} below h = {}",
                span.dim(),
                self.geo.h
            ));
        }

        // singular locus: kernel dimension bounds, agreement with the
        // contraction flags, pencil closure
        let locus = k.singular_locus().map_err(|e| e.to_string())?;
        let (lo, hi) = self.bounds;
        if locus.kernel.dim() < lo || locus.kernel.dim() > hi {
            return Err(format!(
                "singular kernel dimension {} outside [{lo},{hi}]",
                locus.kernel.dim()
            ));
        }
        let singular_from_contract: HashSet<&Subspace> = self
            .km1subs
            .iter()
            .enumerate()
            .filter(|(i, _)| targets[*i].is_none())
            .map(|(_, u)| u)
            .collect();
        let singular_from_locus: HashSet<&Subspace> = locus.singular.iter().collect();
        if singular_from_contract != singular_from_locus {
            return Err("singular sets from contraction and kernel decomposables differ".into());
        }
        for pencil in &self.km1pencils {
            let inside = pencil.iter().filter(|&&i| targets[i].is_none()).count();
            if inside > 1 && inside != pencil.len() {
                return Err("singular set is not pencil-closed".into());
            }
        }

        // the public table machinery agrees and closes the round trip
        if public_paths {
            let chi = k.up_polarity().map_err(|e| e.to_string())?;
            let check = chi.verify().map_err(|e| e.to_string())?;
            if !check.is_valid() {
                return Err(format!(
                    "public polar table fails verification: {}",
                    check.witness.unwrap_or_default()
                ));
            }
            for (u, t) in chi.entries() {
                let ui = self.km1subs.iter().position(|s| s == u).unwrap();
                let matches = match (t, &targets[ui]) {
                    (PolarTarget::Singular, None) => true,
                    (PolarTarget::Hyperplane(a), Some(b)) => a == b,
                    _ => false,
                };
                if !matches {
                    return Err(format!("public polar table disagrees at \"{u}\""));
                }
            }
            let back = complexes::from_polarity(&chi).map_err(|e| e.to_string())?;
            if back.form() != k.form() {
                return Err("from_polarity did not invert up_polarity".into());
            }
        }
        Ok(singular_from_locus.len())
    }
}

fn random_covectors(
    f: &Arc<Field>,
    n: u8,
    degree: u8,
    count: usize,
    seed: u64,
) -> Vec<AlternatingForm> {
    let dim = linalg::binomial(n as usize + 1, degree as usize);
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coeffs: Vec<u8> = (0..dim).map(|_| rng.random_range(0..q)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        out.push(
            AlternatingForm::new(f, n, degree, coeffs)
                .unwrap()
                .normalize(),
        );
    }
    out
}

fn c4(level: Level) -> Result<String, String> {
    // exhaustive configurations
    let mut summary = Vec::new();
    for (n, h, q) in [(3u8, 1i32, 2u8), (3, 2, 2), (4, 2, 2)] {
        let f = field(q);
        let dim = linalg::binomial(n as usize + 1, (h + 1) as usize);
        let all: Vec<AlternatingForm> = linalg::projective_reps(q, dim)
            .into_iter()
            .map(|coeffs| AlternatingForm::new(&f, n, (h + 1) as u8, coeffs).unwrap())
            .collect();
        let covectors: Vec<AlternatingForm> = match level {
            Level::Full => all,
            Level::Quick => {
                if all.len() > 64 {
                    all.into_iter().step_by(32).collect()
                } else {
                    all
                }
            }
        };
        let pg = PolarGeometry::new(&f, n, h)?;
        // public-path round trips are spot-checked on the big
        // configuration and run everywhere else
        let public_stride = if n == 4 { 32 } else { 1 };
        let first_err: Option<String> = covectors
            .par_iter()
            .enumerate()
            .filter_map(|(i, c)| {
                pg.check_complex(c, i % public_stride == 0)
                    .err()
                    .map(|e| format!("({n},{h},{q}) #{i}: {e}"))
            })
            .find_any(|_| true);
        if let Some(e) = first_err {
            return Err(e);
        }
        summary.push(format!("({n},{h},{q})×{}", covectors.len()));
    }
    // random configurations
    for (n, h, q, seed) in [(4u8, 2i32, 3u8, 401u64), (5, 2, 2, 502)] {
        let f = field(q);
        let count = match level {
            Level::Full => 100,
            Level::Quick => 8,
        };
        let covectors = random_covectors(&f, n, (h + 1) as u8, count, seed);
        let pg = PolarGeometry::new(&f, n, h)?;
        let first_err: Option<String> = covectors
            .par_iter()
            .enumerate()
            .filter_map(|(i, c)| {
                pg.check_complex(c, true)
                    .err()
                    .map(|e| format!("({n},{h},{q}) random #{i}: {e}"))
            })
            .find_any(|_| true);
        if let Some(e) = first_err {
            return Err(e);
        }
        summary.push(format!("({n},{h},{q})×{count} random"));
    }
    Ok(format!("zero violations across {}", summary.join(", ")))
}

// --- criterion 5 -----------------------------------------------------

/// Counts covectors of plane complexes of PG(n,2) under which some
/// point lies on no singular line, via the generic contraction route.
fn count_uncovered_covectors(n: u8, stride: usize) -> Result<(u64, u64, Option<String>), String> {
    let f2 = field(2);
    let lines = projspace::enumerate(&f2, n, 1).map_err(|e| e.to_string())?;
    let line_plueckers: Vec<MultiVector> = lines
        .iter()
        .map(|l| exterior::pluecker(l).unwrap())
        .collect();
    let points = projspace::enumerate(&f2, n, 0).map_err(|e| e.to_string())?;
    let lines_through: Vec<Vec<usize>> = points
        .iter()
        .map(|p| {
            (0..lines.len())
                .filter(|&i| lines[i].contains(p))
                .collect::<Vec<_>>()
        })
        .collect();
    let enumerator = search::FormEnumerator::new(&f2, n).map_err(|e| e.to_string())?;
    let indices: Vec<u128> = (0..enumerator.count()).step_by(stride).collect();
    let witnesses: Vec<String> = indices
        .par_iter()
        .filter_map(|&i| {
            let form = enumerator.get(i);
            let singular: Vec<bool> = line_plueckers
                .iter()
                .map(|p| {
                    exterior::contract(&form, p)
                        .unwrap()
                        .iter()
                        .all(|&c| c == 0)
                })
                .collect();
            for (pi, through) in lines_through.iter().enumerate() {
                if !through.iter().any(|&li| singular[li]) {
                    return Some(format!("{} at point \"{}\"", form.to_literal(), points[pi]));
                }
            }
            None
        })
        .collect();
    Ok((
        indices.len() as u64,
        witnesses.len() as u64,
        witnesses.first().cloned(),
    ))
}

fn c5(level: Level) -> Result<String, String> {
    // The (4,2) case: every point of PG(4,2) on a singular line, for
    // all plane complexes. The parity argument behind that claim needs
    // n − h odd, and 4 − 2 is even, so counterexamples exist; they are
    // counted and reported rather than hidden.
    let stride = match level {
        Level::Quick => 8,
        Level::Full => 1,
    };
    let (tested4, violations4, witness) = count_uncovered_covectors(4, stride)?;

    // The parity-valid instance for plane complexes is PG(5,2): n − h =
    // 3. Exhaustive over all 2^20 − 1 covectors at full level, via the
    // bit fast path.
    let f2 = field(2);
    let scan = search::SingularLineScan::new(&f2, 5).map_err(|e| e.to_string())?;
    let enumerator = search::FormEnumerator::new(&f2, 5).map_err(|e| e.to_string())?;
    let stride5 = match level {
        Level::Quick => 64,
        Level::Full => 1,
    };
    let indices: Vec<u128> = (0..enumerator.count()).step_by(stride5).collect();
    let tested5 = indices.len();
    let failure5: Option<u128> = indices
        .into_par_iter()
        .find_any(|&i| !scan.points_covered_by_singular_bits(i + 1));
    if let Some(i) = failure5 {
        return Err(format!(
            "PG(5,2) covector {} leaves a point off every singular line, \
             contradicting the parity proposition",
            enumerator.get(i).to_literal()
        ));
    }
    if violations4 > 0 {
        return Err(format!(
            "as stated for (4,2): {violations4} of {tested4} plane covectors violate the \
             claim (first witness: {}) — the parity hypothesis n−h odd does not hold \
             there, so the claim is genuinely false at (4,2); the parity-valid instance \
             passes: all {tested5} covectors of PG(5,2) cover every point with singular \
             lines",
            witness.unwrap_or_default()
        ));
    }
    Ok(format!(
        "PG(4,2)×{tested4} and PG(5,2)×{tested5}: every point on a singular line"
    ))
}

// --- criterion 6 -----------------------------------------------------

fn c6(level: Level) -> Result<String, String> {
    let f2 = field(2);
    let opts = match level {
        Level::Full => SearchOptions {
            mode: SearchMode::Exhaustive,
            workers: rayon::current_num_threads() as u32,
            ..SearchOptions::default()
        },
        Level::Quick => SearchOptions {
            mode: SearchMode::Random,
            budget: 10_000,
            seed: 6,
            workers: rayon::current_num_threads() as u32,
            ..SearchOptions::default()
        },
    };
    let (hits, report) = search::classify_spread_forms(&f2, 5, &opts).map_err(|e| e.to_string())?;
    if hits.is_empty() {
        return Err("no spread-forms found".into());
    }
    if let Some(bad) = hits.iter().find(|h| !h.geometric) {
        return Err(format!("hit {} has a non-geometric spread", bad.form));
    }
    if level == Level::Full
        && report.forms_whose_singular_lines_form_a_spread != PG52_SPREAD_FORM_COUNT
    {
        return Err(format!(
            "regression: {} spread-forms, expected {PG52_SPREAD_FORM_COUNT}",
            report.forms_whose_singular_lines_form_a_spread
        ));
    }
    Ok(format!(
        "{} of {} forms have spread singular lines, all geometric",
        report.forms_whose_singular_lines_form_a_spread, report.forms_tested
    ))
}

// --- criterion 7 -----------------------------------------------------

fn c7(level: Level) -> Result<String, String> {
    let f2 = field(2);
    let (b6, b8) = match level {
        Level::Full => (100_000u64, 10_000u64),
        Level::Quick => (10_000, 1_000),
    };
    let mut details = Vec::new();
    for (n, budget) in [(6u8, b6), (8, b8)] {
        let opts = SearchOptions {
            mode: SearchMode::Random,
            budget,
            seed: 1,
            workers: 4,
            ..SearchOptions::default()
        };
        let report = search::search_no_singular(&f2, n, &opts).map_err(|e| e.to_string())?;
        if report.forms_without_singular_line != 0 {
            return Err(format!(
                "PG({n},2): {} singular-free forms found — a reportable event: {:?}",
                report.forms_without_singular_line, report.witnesses
            ));
        }
        if report.forms_tested != budget {
            return Err(format!(
                "PG({n},2): tested {} of {budget}",
                report.forms_tested
            ));
        }
        details.push(format!("PG({n},2)×{budget}"));
    }
    Ok(format!(
        "{}: zero singular-free forms (evidence, not proof)",
        details.join(", ")
    ))
}

// --- criterion 8 -----------------------------------------------------

fn c8(_level: Level) -> Result<String, String> {
    let f2 = field(2);
    let k = LinearComplex::parse(&f2, 3, 1, "01+23").map_err(|e| e.to_string())?;
    let hyperplanes = projspace::enumerate(&f2, 3, 2).map_err(|e| e.to_string())?;
    let mut products = Vec::new();
    for h in &hyperplanes {
        match k.product(h).map_err(|e| e.to_string())? {
            ProductResult::All => {
                return Err(format!(
                    "symplectic complex reports total hyperplane \"{h}\""
                ))
            }
            ProductResult::Complex(kh) => {
                let set: HashSet<Subspace> = kh
                    .members()
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .collect();
                if !complexes::is_prime(&set, &f2, 3, 2).map_err(|e| e.to_string())? {
                    return Err(format!("product with \"{h}\" is not a prime"));
                }
                products.push(set);
            }
        }
    }
    // Θ equals the intersection of the products over independent
    // coordinate hyperplanes
    let coords: Vec<Subspace> = (0..4)
        .map(|i| {
            let mut cov = vec![0u8; 4];
            cov[i] = 1;
            Subspace::from_covector(&f2, &cov).unwrap()
        })
        .collect();
    let mut intersection: Option<HashSet<Subspace>> = None;
    for h in &coords {
        let set = match k.product(h).map_err(|e| e.to_string())? {
            ProductResult::All => projspace::enumerate(&f2, 3, 2)
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect(),
            ProductResult::Complex(kh) => kh
                .members()
                .map_err(|e| e.to_string())?
                .into_iter()
                .collect(),
        };
        intersection = Some(match intersection {
            None => set,
            Some(acc) => acc.intersection(&set).cloned().collect(),
        });
    }
    let theta: HashSet<Subspace> = k
        .total_subspaces()
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    if theta != intersection.unwrap() {
        return Err("total subspaces differ from the product intersection".into());
    }
    Ok(format!(
        "{} products prime; Θ (empty) equals the 4-fold product intersection",
        products.len()
    ))
}

// --- criterion 9 -----------------------------------------------------

fn c9(_level: Level) -> Result<String, String> {
    for q in [2u8, 3] {
        let f = field(q);
        let p = LinePartition::trivial_plane(&f).map_err(|e| e.to_string())?;
        if !p.verify().map_err(|e| e.to_string())? {
            return Err(format!("trivial PG(2,{q}) partition fails verification"));
        }
        if !p.is_linear().map_err(|e| e.to_string())? {
            return Err(format!("trivial PG(2,{q}) partition must be linear"));
        }
    }
    let f2 = field(2);
    // stored malformed partition: carrier mismatch must be an error
    let malformed =
        LinePartition::parse(&f2, 2, include_str!("../data/malformed_partition_pg22.txt"))
            .map_err(|e| e.to_string())?;
    let Err(PartitionError::Malformed(witness)) = malformed.verify_detailed() else {
        return Err("malformed partition was not rejected".into());
    };
    // stored valid PG(4,2) partition: verifies, counting identity holds,
    // but linearity fails with a witness pencil
    let pg42 = LinePartition::parse(&f2, 4, include_str!("../data/partition_pg42.txt"))
        .map_err(|e| e.to_string())?;
    let check = pg42.verify_detailed().map_err(|e| e.to_string())?;
    if !check.valid {
        return Err(format!(
            "stored PG(4,2) partition invalid: {:?}",
            check.witness
        ));
    }
    if pg42.classes().len() != 31 || pg42.classes().iter().any(|(_, l)| l.len() != 5) {
        return Err("PG(4,2) partition must be 31 spreads of 5 lines".into());
    }
    let Some(pencil) = pg42.linearity_witness().map_err(|e| e.to_string())? else {
        return Err("a line partition of PG(4,2) cannot be linear".into());
    };
    match partitions::complex_from_partition(&pg42) {
        Err(PartitionError::NonLinearInput(_)) => {}
        other => return Err(format!("expected NonLinearInput, got {other:?}")),
    }
    Ok(format!(
        "trivial partitions linear; malformed rejected ({witness:.40}…); \
         PG(4,2) fixture valid, non-linear at vertex \"{}\"",
        pencil.vertex
    ))
}

// --- criterion 10 ----------------------------------------------------

fn c10(_level: Level) -> Result<String, String> {
    let s32 = spreads::field_reduction_spread(2, 2).map_err(|e| e.to_string())?;
    if s32.len() != 5 {
        return Err(format!(
            "PG(3,2) field reduction spread has {} lines",
            s32.len()
        ));
    }
    let (linear, span_dim) = s32.is_linear().map_err(|e| e.to_string())?;
    if !linear || span_dim != 3 {
        return Err(format!(
            "PG(3,2) spread: linear={linear}, span={span_dim}, expected (true, 3)"
        ));
    }
    let s52 = spreads::field_reduction_spread(3, 2).map_err(|e| e.to_string())?;
    if s52.len() != 21 {
        return Err(format!(
            "PG(5,2) field reduction spread has {} lines",
            s52.len()
        ));
    }
    if !s52.is_geometric().map_err(|e| e.to_string())? {
        return Err("field reduction spread of PG(5,2) must be geometric".into());
    }
    let f2 = field(2);
    let fixture_lines =
        spreads::parse_spread_file(&f2, 5, include_str!("../data/nongeometric_spread_pg52.txt"))
            .map_err(|e| e.to_string())?;
    let fixture =
        LineSpread::new(Subspace::full(&f2, 5), fixture_lines).map_err(|e| e.to_string())?;
    if fixture.is_geometric().map_err(|e| e.to_string())? {
        return Err("stored spread fixture must not be geometric".into());
    }
    Ok("field reduction spreads pass; PG(3,2) linear span 3; stored fixture non-geometric".into())
}

/// Expected verdict per criterion. Criterion 5 is red by design: its
/// (4,2,2) case lies outside the parity hypothesis (n − h must be odd)
/// and has live counterexamples; the runner documents them and
/// verifies the parity-valid instance (5,2,2) exhaustively instead.
pub const EXPECTED_PASS: [bool; 10] = [true, true, true, true, false, true, true, true, true, true];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_matches_expected_outcomes() {
        for outcome in run(Level::Quick) {
            println!("{}", outcome.status_line());
            assert_eq!(
                outcome.passed,
                EXPECTED_PASS[outcome.id as usize - 1],
                "{}",
                outcome.status_line()
            );
        }
    }
}
