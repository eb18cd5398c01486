//! Enumeration and sampling of alternating trilinear forms, with a
//! throughput-oriented singular-line test, a search for complexes of
//! planes without singular lines, and the classification of forms whose
//! singular lines form a line spread.
//!
//! The fast path precomputes, per line, how each form coefficient feeds
//! the contraction covector; a line test is then a handful of masked
//! popcounts over GF(2) or a short multiply-accumulate loop in general.
//! Every fast-path verdict that matters is re-verified through the
//! generic exterior-algebra route before it is reported.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complexes::{ComplexError, LinearComplex};
use crate::exterior::{self, AlternatingForm, ExtError};
use crate::gf::{Field, GfError};
use crate::linalg;
use crate::partitions;
use crate::projspace::{self, ProjError, Subspace};
use crate::spreads::{LineSpread, SpreadError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("forms of degree 3 need n ≥ 3, got n = {0}")]
    AmbientTooSmall(u8),
    #[error("exhaustive search over {count} forms exceeds the cap of {cap}")]
    BudgetExceeded { count: u128, cap: u64 },
    #[error("permutation pruning unsupported here: {0}")]
    PruneUnsupported(String),
    #[error("spread classification is defined for PG(5,q), got n = {0}")]
    WrongClassifyAmbient(u8),
    #[error("the zero form defines no complex")]
    ZeroForm,
    #[error("fast path disagrees with the oracle: {0}")]
    OracleMismatch(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Indexed enumeration of nonzero degree-3 covectors up to scalar: one
/// representative per projective point of the coefficient space.
///
/// For q = 2 the representative with index i has coefficient bits
/// i + 1 (bit t ↔ t-th increasing triple). For q > 2 representatives
/// are normalized to leading coefficient 1 and ordered by leading
/// position, then by the remaining digits base q.
pub struct FormEnumerator {
    field: Arc<Field>,
    n: u8,
    dim: usize,
    count: u128,
}

impl FormEnumerator {
    pub fn new(field: &Arc<Field>, n: u8) -> Result<FormEnumerator, SearchError> {
        if n < 3 {
            return Err(SearchError::AmbientTooSmall(n));
        }
        let dim = linalg::binomial(n as usize + 1, 3);
        let q = field.order() as u128;
        let count = (q.pow(dim as u32) - 1) / (q - 1);
        Ok(FormEnumerator {
            field: field.clone(),
            n,
            dim,
            count,
        })
    }

    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn coefficient_dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, index: u128) -> AlternatingForm {
        assert!(index < self.count, "form index out of range");
        let q = self.field.order();
        let mut coeffs = vec![0u8; self.dim];
        if q == 2 {
            let bits = index + 1;
            for (t, c) in coeffs.iter_mut().enumerate() {
                *c = ((bits >> t) & 1) as u8;
            }
        } else {
            let mut index = index;
            let mut lead = 0usize;
            loop {
                let below = (q as u128).pow((self.dim - lead - 1) as u32);
                if index < below {
                    break;
                }
                index -= below;
                lead += 1;
            }
            coeffs[lead] = 1;
            for j in lead + 1..self.dim {
                let w = (q as u128).pow((self.dim - 1 - j) as u32);
                coeffs[j] = (index / w % q as u128) as u8;
            }
        }
        AlternatingForm::new(&self.field, self.n, 3, coeffs).expect("in-range coefficients")
    }

    pub fn iter(&self) -> impl Iterator<Item = AlternatingForm> + '_ {
        (0..self.count).map(|i| self.get(i))
    }
}

enum LineTests {
    /// q = 2: per line, one coefficient mask per covector component.
    Gf2 { masks: Vec<Vec<u128>> },
    /// general q: per line and component, (coefficient index, ±p) pairs.
    Generic { entries: Vec<Vec<Vec<(u32, u8)>>> },
}

/// Precomputed geometry for testing lines of PG(n,q) against degree-3
/// forms: Plücker data per line, contraction feeds, and point masks for
/// the spread check.
pub struct SingularLineScan {
    field: Arc<Field>,
    n: u8,
    lines: Vec<Subspace>,
    tests: LineTests,
    /// Per line, a bitmask of the points it covers (usable while the
    /// ambient space has at most 128 points).
    point_masks: Option<Vec<u128>>,
    point_count: usize,
}

impl SingularLineScan {
    pub fn new(field: &Arc<Field>, n: u8) -> Result<SingularLineScan, SearchError> {
        if n < 3 {
            return Err(SearchError::AmbientTooSmall(n));
        }
        let q = field.order();
        let n1 = n as usize + 1;
        let lines = projspace::enumerate(field, n, 1)?;
        let pairs = linalg::combinations(n1, 2);
        let tests = if q == 2 {
            let mut masks = Vec::with_capacity(lines.len());
            for line in &lines {
                let p = exterior::pluecker(line)?;
                let mut line_masks = vec![0u128; n1];
                for (pair_idx, pair) in pairs.iter().enumerate() {
                    if p.coeffs()[pair_idx] == 0 {
                        continue;
                    }
                    for k in 0..n1 as u8 {
                        if pair.contains(&k) {
                            continue;
                        }
                        let mut s = vec![pair[0], pair[1], k];
                        s.sort_unstable();
                        line_masks[k as usize] |= 1u128 << exterior::tuple_rank(n1, &s);
                    }
                }
                masks.push(line_masks);
            }
            LineTests::Gf2 { masks }
        } else {
            let mut entries = Vec::with_capacity(lines.len());
            for line in &lines {
                let p = exterior::pluecker(line)?;
                let mut per_line = vec![Vec::new(); n1];
                for (pair_idx, pair) in pairs.iter().enumerate() {
                    let pv = p.coeffs()[pair_idx];
                    if pv == 0 {
                        continue;
                    }
                    for k in 0..n1 as u8 {
                        if pair.contains(&k) {
                            continue;
                        }
                        let mut s = vec![pair[0], pair[1], k];
                        s.sort_unstable();
                        let above = pair.iter().filter(|&&x| x > k).count();
                        let mult = if above % 2 == 0 {
                            pv
                        } else {
                            field.neg_idx(pv)
                        };
                        per_line[k as usize].push((exterior::tuple_rank(n1, &s) as u32, mult));
                    }
                }
                entries.push(per_line);
            }
            LineTests::Generic { entries }
        };
        let points = projspace::enumerate(field, n, 0)?;
        let point_count = points.len();
        let point_masks = if point_count <= 128 {
            let index: std::collections::HashMap<&Subspace, usize> =
                points.iter().enumerate().map(|(i, p)| (p, i)).collect();
            Some(
                lines
                    .iter()
                    .map(|l| {
                        let mut mask = 0u128;
                        for p in l.points() {
                            mask |= 1u128 << index[&p];
                        }
                        mask
                    })
                    .collect(),
            )
        } else {
            None
        };
        Ok(SingularLineScan {
            field: field.clone(),
            n,
            lines,
            tests,
            point_masks,
            point_count,
        })
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> u8 {
        self.n
    }

    fn form_bits(&self, form: &AlternatingForm) -> u128 {
        debug_assert_eq!(self.field.order(), 2);
        form.coeffs()
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i))
    }

    #[inline]
    fn line_is_singular_bits(&self, masks: &[u128], bits: u128) -> bool {
        masks
            .iter()
            .all(|m| (m & bits).count_ones().is_multiple_of(2))
    }

    fn line_is_singular_generic(&self, line_idx: usize, coeffs: &[u8]) -> bool {
        let LineTests::Generic { entries } = &self.tests else {
            unreachable!();
        };
        for comp in &entries[line_idx] {
            let mut acc = 0u8;
            for &(idx, mult) in comp {
                acc = self
                    .field
                    .add_idx(acc, self.field.mul_idx(mult, coeffs[idx as usize]));
            }
            if acc != 0 {
                return false;
            }
        }
        true
    }

    /// Fast singular-line test with early exit on the first witness.
    pub fn has_singular_line(&self, form: &AlternatingForm) -> bool {
        match &self.tests {
            LineTests::Gf2 { masks } => {
                let bits = self.form_bits(form);
                masks.iter().any(|m| self.line_is_singular_bits(m, bits))
            }
            LineTests::Generic { .. } => {
                (0..self.lines.len()).any(|i| self.line_is_singular_generic(i, form.coeffs()))
            }
        }
    }

    pub(crate) fn has_singular_line_bits(&self, bits: u128) -> bool {
        let LineTests::Gf2 { masks } = &self.tests else {
            unreachable!("bit path is GF(2) only");
        };
        masks.iter().any(|m| self.line_is_singular_bits(m, bits))
    }

    /// All singular line indices of a form, by the fast path.
    pub fn singular_lines(&self, form: &AlternatingForm) -> Vec<usize> {
        match &self.tests {
            LineTests::Gf2 { masks } => {
                let bits = self.form_bits(form);
                (0..self.lines.len())
                    .filter(|&i| self.line_is_singular_bits(&masks[i], bits))
                    .collect()
            }
            LineTests::Generic { .. } => (0..self.lines.len())
                .filter(|&i| self.line_is_singular_generic(i, form.coeffs()))
                .collect(),
        }
    }

    /// True iff every point of the space lies on at least one line that
    /// is singular for the form (GF(2) bit path, ≤ 128 points).
    pub(crate) fn points_covered_by_singular_bits(&self, bits: u128) -> bool {
        let LineTests::Gf2 { masks } = &self.tests else {
            unreachable!("bit path is GF(2) only");
        };
        let point_masks = self
            .point_masks
            .as_ref()
            .expect("point capacity checked by caller");
        let full = if self.point_count == 128 {
            u128::MAX
        } else {
            (1u128 << self.point_count) - 1
        };
        let mut covered = 0u128;
        for (i, m) in masks.iter().enumerate() {
            if self.line_is_singular_bits(m, bits) {
                covered |= point_masks[i];
                if covered == full {
                    return true;
                }
            }
        }
        false
    }

    /// Line indices when the singular lines form a spread of the whole
    /// space, `None` otherwise; exits early on an overlap or overflow.
    pub fn singular_spread(&self, form: &AlternatingForm) -> Option<Vec<usize>> {
        match &self.tests {
            LineTests::Gf2 { .. } => self.singular_spread_bits(self.form_bits(form)),
            LineTests::Generic { .. } => {
                let target = self.point_count / (self.field.order() as usize + 1);
                let point_masks = self.point_masks.as_ref()?;
                let mut mask = 0u128;
                let mut picked = Vec::new();
                for i in 0..self.lines.len() {
                    if !self.line_is_singular_generic(i, form.coeffs()) {
                        continue;
                    }
                    if mask & point_masks[i] != 0 || picked.len() == target {
                        return None;
                    }
                    mask |= point_masks[i];
                    picked.push(i);
                }
                (picked.len() == target).then_some(picked)
            }
        }
    }

    fn singular_spread_bits(&self, bits: u128) -> Option<Vec<usize>> {
        let LineTests::Gf2 { masks } = &self.tests else {
            unreachable!("bit path is GF(2) only");
        };
        let target = self.point_count / 3;
        let point_masks = self.point_masks.as_ref()?;
        let mut mask = 0u128;
        let mut picked = Vec::new();
        for (i, m) in masks.iter().enumerate() {
            if !self.line_is_singular_bits(m, bits) {
                continue;
            }
            if mask & point_masks[i] != 0 || picked.len() == target {
                return None;
            }
            mask |= point_masks[i];
            picked.push(i);
        }
        (picked.len() == target).then_some(picked)
    }
}

/// One-off singular-line test for a degree-3 form. Builds the line
/// geometry on each call; use [`SingularLineScan`] for bulk work.
pub fn has_singular_line(form: &AlternatingForm) -> Result<bool, SearchError> {
    if form.is_zero() {
        return Err(SearchError::ZeroForm);
    }
    let scan = SingularLineScan::new(form.field(), form.ambient())?;
    Ok(scan.has_singular_line(form))
}

/// Independent slow route: scans all lines with the generic contraction
/// from the exterior module, no precomputed masks involved.
pub fn has_singular_line_oracle(form: &AlternatingForm) -> Result<bool, SearchError> {
    if form.is_zero() {
        return Err(SearchError::ZeroForm);
    }
    for line in projspace::enumerate(form.field(), form.ambient(), 1)? {
        let cov = exterior::contract(form, &exterior::pluecker(&line)?)?;
        if cov.iter().all(|&c| c == 0) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn singular_lines_oracle(form: &AlternatingForm) -> Result<Vec<Subspace>, SearchError> {
    let mut out = Vec::new();
    for line in projspace::enumerate(form.field(), form.ambient(), 1)? {
        let cov = exterior::contract(form, &exterior::pluecker(&line)?)?;
        if cov.iter().all(|&c| c == 0) {
            out.push(line);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchMode::Exhaustive => write!(f, "exhaustive"),
            SearchMode::Random => write!(f, "random"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Number of samples in random mode; ignored when exhaustive.
    pub budget: u64,
    pub seed: u64,
    pub workers: u32,
    /// Refuses exhaustive runs over more forms than this.
    pub exhaustive_cap: u64,
    /// Skip forms that are not minimal in their coordinate-permutation
    /// orbit (GF(2), exhaustive mode only). Counts then refer to the
    /// tested representatives.
    pub prune_permutations: bool,
    pub witness_limit: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::Exhaustive,
            budget: 0,
            seed: 0,
            workers: 1,
            exhaustive_cap: 1 << 24,
            prune_permutations: false,
            witness_limit: 8,
        }
    }
}

/// Aggregated outcome of a form scan. Reports merge by adding the
/// counters and concatenating witnesses in worker order, so a merged
/// report is independent of scheduling.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SearchReport {
    pub n: u8,
    pub q: u8,
    pub mode: SearchMode,
    pub seed: u64,
    pub budget: u64,
    pub workers: u32,
    pub forms_tested: u64,
    pub forms_without_singular_line: u64,
    pub forms_whose_singular_lines_form_a_spread: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
    /// Outcomes of the follow-up assertions run on each singular-free
    /// hit (empty unless a hit occurred).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub hit_diagnostics: Vec<String>,
    pub pruned: bool,
    /// Wall time; excluded from the determinism contract.
    #[serde(rename = "elapsed_ms")]
    pub elapsed_ms: u128,
}

impl SearchReport {
    /// Equality modulo elapsed time, for determinism checks.
    pub fn same_outcome(&self, other: &SearchReport) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        a == b
    }
}

/// Per-worker tally, merged in worker order.
#[derive(Default)]
struct WorkerOut {
    tested: u64,
    no_singular: u64,
    spreads: u64,
    witnesses: Vec<String>,
    diagnostics: Vec<String>,
    error: Option<SearchError>,
}

fn split_range(total: u128, workers: u32) -> Vec<(u128, u128)> {
    let workers = workers.max(1) as u128;
    let chunk = total / workers;
    let rem = total % workers;
    let mut out = Vec::new();
    let mut start = 0u128;
    for w in 0..workers {
        let len = chunk + if w < rem { 1 } else { 0 };
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Coordinate-permutation action on GF(2) coefficient bits, one table
/// per permutation of the n+1 basis vectors.
struct PermTables {
    maps: Vec<Vec<u16>>,
}

impl PermTables {
    fn new(n: u8) -> Result<PermTables, SearchError> {
        let n1 = n as usize + 1;
        let mut size = 1usize;
        for i in 2..=n1 {
            size = size.saturating_mul(i);
        }
        if size > 40_320 {
            return Err(SearchError::PruneUnsupported(format!(
                "(n+1)! = {size} permutations is past the supported bound"
            )));
        }
        let triples = linalg::combinations(n1, 3);
        let mut maps = Vec::with_capacity(size);
        let mut perm: Vec<u8> = (0..n1 as u8).collect();
        // Heap's algorithm
        let mut c = vec![0usize; n1];
        let mut push_map = |perm: &[u8]| {
            let map: Vec<u16> = triples
                .iter()
                .map(|t| {
                    let mut img: Vec<u8> = t.iter().map(|&i| perm[i as usize]).collect();
                    img.sort_unstable();
                    exterior::tuple_rank(n1, &img) as u16
                })
                .collect();
            maps.push(map);
        };
        push_map(&perm);
        let mut i = 1;
        while i < n1 {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                push_map(&perm);
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(PermTables { maps })
    }

    fn apply(&self, map_idx: usize, bits: u128) -> u128 {
        let map = &self.maps[map_idx];
        let mut out = 0u128;
        let mut rest = bits;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            out |= 1u128 << map[t];
            rest &= rest - 1;
        }
        out
    }

    /// True iff `bits` is the minimum of its orbit.
    fn is_canonical(&self, bits: u128) -> bool {
        (1..self.maps.len()).all(|i| self.apply(i, bits) >= bits)
    }
}

/// Follow-up battery for a singular-free hit: the partition machinery
/// must close over it, which also exercises the linear-spread and
/// non-geometric assertions wired into the strict spread construction.
fn on_no_singular_hit(form: &AlternatingForm) -> String {
    let complex = match LinearComplex::new(form.clone()) {
        Ok(k) => k,
        Err(e) => return format!("hit {}: cannot build complex: {e}", form.to_literal()),
    };
    match partitions::partition_from_complex(&complex) {
        Ok(_) => format!(
            "hit {}: partition, linear-spread and non-geometric assertions all passed",
            form.to_literal()
        ),
        Err(e) => format!(
            "hit {}: downstream assertion failed: {e}",
            form.to_literal()
        ),
    }
}

/// Scans degree-3 forms on F_q^{n+1} for complexes of planes without a
/// singular line. Every fast-path hit is re-verified with the generic
/// contraction oracle before being counted. Deterministic for fixed
/// (seed, workers, budget).
pub fn search_no_singular(
    field: &Arc<Field>,
    n: u8,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    let started = Instant::now();
    let scan = SingularLineScan::new(field, n)?;
    let enumerator = FormEnumerator::new(field, n)?;
    let perms = if opts.prune_permutations {
        if field.order() != 2 {
            return Err(SearchError::PruneUnsupported("pruning needs q = 2".into()));
        }
        if opts.mode != SearchMode::Exhaustive {
            return Err(SearchError::PruneUnsupported(
                "pruning needs exhaustive mode".into(),
            ));
        }
        Some(PermTables::new(n)?)
    } else {
        None
    };

    let ranges = match opts.mode {
        SearchMode::Exhaustive => {
            if enumerator.count() > opts.exhaustive_cap as u128 {
                return Err(SearchError::BudgetExceeded {
                    count: enumerator.count(),
                    cap: opts.exhaustive_cap,
                });
            }
            split_range(enumerator.count(), opts.workers)
        }
        SearchMode::Random => split_range(opts.budget as u128, opts.workers),
    };

    let worker_outs: Vec<WorkerOut> = ranges
        .par_iter()
        .enumerate()
        .map(|(worker_id, &(start, end))| {
            let mut out = WorkerOut::default();
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(worker_id as u64);
            let q = field.order();
            let dim = enumerator.coefficient_dim();
            for i in start..end {
                let form = match opts.mode {
                    SearchMode::Exhaustive => {
                        if q == 2 {
                            let bits = i + 1;
                            if let Some(p) = &perms {
                                if !p.is_canonical(bits) {
                                    continue;
                                }
                            }
                            out.tested += 1;
                            if scan.has_singular_line_bits(bits) {
                                continue;
                            }
                            enumerator.get(i)
                        } else {
                            let form = enumerator.get(i);
                            out.tested += 1;
                            if scan.has_singular_line(&form) {
                                continue;
                            }
                            form
                        }
                    }
                    SearchMode::Random => {
                        let form = sample_form(field, n, dim, &mut rng);
                        out.tested += 1;
                        if scan.has_singular_line(&form) {
                            continue;
                        }
                        form
                    }
                };
                // fast path found no singular line: re-verify slowly
                match has_singular_line_oracle(&form) {
                    Ok(true) => {
                        out.error = Some(SearchError::OracleMismatch(format!(
                            "fast path missed a singular line of {}",
                            form.to_literal()
                        )));
                        break;
                    }
                    Ok(false) => {
                        out.no_singular += 1;
                        if out.witnesses.len() < opts.witness_limit {
                            out.witnesses.push(form.to_literal());
                        }
                        out.diagnostics.push(on_no_singular_hit(&form));
                    }
                    Err(e) => {
                        out.error = Some(e);
                        break;
                    }
                }
            }
            out
        })
        .collect();

    merge_reports(field, n, opts, worker_outs, started)
}

fn sample_form(field: &Arc<Field>, n: u8, dim: usize, rng: &mut ChaCha8Rng) -> AlternatingForm {
    let q = field.order();
    loop {
        let coeffs: Vec<u8> = if q == 2 {
            let mut bits = 0u128;
            for chunk in 0..dim.div_ceil(64) {
                bits |= (rng.next_u64() as u128) << (chunk * 64);
            }
            bits &= (1u128 << dim) - 1;
            (0..dim).map(|t| ((bits >> t) & 1) as u8).collect()
        } else {
            (0..dim).map(|_| rng.random_range(0..q)).collect()
        };
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        // normalization after sampling keeps the projective distribution
        // uniform: every point has exactly q−1 nonzero preimages
        return AlternatingForm::new(field, n, 3, coeffs)
            .expect("sampled coefficients are in range")
            .normalize();
    }
}

fn merge_reports(
    field: &Arc<Field>,
    n: u8,
    opts: &SearchOptions,
    worker_outs: Vec<WorkerOut>,
    started: Instant,
) -> Result<SearchReport, SearchError> {
    let mut report = SearchReport {
        n,
        q: field.order(),
        mode: opts.mode,
        seed: opts.seed,
        budget: opts.budget,
        workers: opts.workers.max(1),
        forms_tested: 0,
        forms_without_singular_line: 0,
        forms_whose_singular_lines_form_a_spread: 0,
        witnesses: Vec::new(),
        hit_diagnostics: Vec::new(),
        pruned: opts.prune_permutations,
        elapsed_ms: 0,
    };
    for mut w in worker_outs {
        if let Some(e) = w.error.take() {
            return Err(e);
        }
        report.forms_tested += w.tested;
        report.forms_without_singular_line += w.no_singular;
        report.forms_whose_singular_lines_form_a_spread += w.spreads;
        report.witnesses.append(&mut w.witnesses);
        report.hit_diagnostics.append(&mut w.diagnostics);
    }
    report.witnesses.truncate(opts.witness_limit);
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}

/// One classified form whose singular lines form a spread of PG(5,q).
#[derive(Clone, Debug, Serialize)]
pub struct SpreadHit {
    pub form: String,
    pub geometric: bool,
    pub linear: bool,
    pub span_dim: i32,
}

/// Finds every (or, in random mode, every sampled) degree-3 form on
/// F_q^6 whose singular lines form a line spread of PG(5,q), and
/// evaluates the geometric and linear predicates on each hit's spread.
/// Hits are re-verified against the generic contraction oracle, and the
/// first few additionally against the full singular-locus route.
pub fn classify_spread_forms(
    field: &Arc<Field>,
    n: u8,
    opts: &SearchOptions,
) -> Result<(Vec<SpreadHit>, SearchReport), SearchError> {
    if n != 5 {
        return Err(SearchError::WrongClassifyAmbient(n));
    }
    let started = Instant::now();
    let scan = SingularLineScan::new(field, n)?;
    let enumerator = FormEnumerator::new(field, n)?;
    let ranges = match opts.mode {
        SearchMode::Exhaustive => {
            if enumerator.count() > opts.exhaustive_cap as u128 {
                return Err(SearchError::BudgetExceeded {
                    count: enumerator.count(),
                    cap: opts.exhaustive_cap,
                });
            }
            split_range(enumerator.count(), opts.workers)
        }
        SearchMode::Random => split_range(opts.budget as u128, opts.workers),
    };

    struct ClassifyOut {
        tested: u64,
        hits: Vec<(AlternatingForm, Vec<usize>)>,
    }

    let worker_outs: Vec<ClassifyOut> = ranges
        .par_iter()
        .enumerate()
        .map(|(worker_id, &(start, end))| {
            let mut out = ClassifyOut {
                tested: 0,
                hits: Vec::new(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(worker_id as u64);
            let q = field.order();
            let dim = enumerator.coefficient_dim();
            for i in start..end {
                out.tested += 1;
                match opts.mode {
                    SearchMode::Exhaustive if q == 2 => {
                        let bits = i + 1;
                        if let Some(picked) = scan.singular_spread_bits(bits) {
                            out.hits.push((enumerator.get(i), picked));
                        }
                    }
                    SearchMode::Exhaustive => {
                        let form = enumerator.get(i);
                        if let Some(picked) = scan.singular_spread(&form) {
                            out.hits.push((form, picked));
                        }
                    }
                    SearchMode::Random => {
                        let form = sample_form(field, n, dim, &mut rng);
                        if let Some(picked) = scan.singular_spread(&form) {
                            out.hits.push((form, picked));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let mut tested = 0u64;
    let mut raw_hits: Vec<(AlternatingForm, Vec<usize>)> = Vec::new();
    for mut w in worker_outs {
        tested += w.tested;
        raw_hits.append(&mut w.hits);
    }

    // re-verify a deterministic stride of hits against the generic
    // contraction route
    let oracle_failures: Vec<String> = raw_hits
        .par_iter()
        .step_by(997)
        .filter_map(|(form, picked)| {
            let slow = match singular_lines_oracle(form) {
                Ok(s) => s,
                Err(e) => return Some(e.to_string()),
            };
            let fast: Vec<&Subspace> = picked.iter().map(|&i| &scan.lines()[i]).collect();
            if slow.len() != fast.len() || !slow.iter().zip(&fast).all(|(a, b)| a == *b) {
                Some(format!("singular set mismatch for {}", form.to_literal()))
            } else {
                None
            }
        })
        .collect();
    if let Some(first) = oracle_failures.first() {
        return Err(SearchError::OracleMismatch(first.clone()));
    }
    // and every reported witness against the full singular-locus route
    for (form, picked) in raw_hits.iter().take(opts.witness_limit) {
        let complex = LinearComplex::new(form.clone())?;
        let locus = complex.singular_locus()?;
        let mut fast: Vec<Subspace> = picked.iter().map(|&i| scan.lines()[i].clone()).collect();
        let mut slow = locus.singular;
        fast.sort_by_key(|a| a.to_string());
        slow.sort_by_key(|a| a.to_string());
        if fast != slow {
            return Err(SearchError::OracleMismatch(format!(
                "singular locus disagrees on {}",
                form.to_literal()
            )));
        }
    }

    // evaluate the predicates once per distinct spread
    use std::collections::HashMap;
    let mut distinct: Vec<Vec<usize>> = Vec::new();
    let mut spread_key: HashMap<Vec<usize>, usize> = HashMap::new();
    for (_, picked) in &raw_hits {
        if !spread_key.contains_key(picked) {
            spread_key.insert(picked.clone(), distinct.len());
            distinct.push(picked.clone());
        }
    }
    let verdicts: Vec<Result<(bool, bool, i32), SpreadError>> = distinct
        .par_iter()
        .map(|picked| {
            let lines: Vec<Subspace> = picked.iter().map(|&i| scan.lines()[i].clone()).collect();
            let spread = LineSpread::new(Subspace::full(field, n), lines)?;
            let geometric = spread.is_geometric()?;
            let (linear, span_dim) = spread.is_linear()?;
            Ok((geometric, linear, span_dim))
        })
        .collect();

    let mut hits = Vec::with_capacity(raw_hits.len());
    for (form, picked) in &raw_hits {
        let (geometric, linear, span_dim) = verdicts[spread_key[picked]]
            .clone()
            .map_err(|e| SearchError::OracleMismatch(format!("spread predicate failed: {e}")))?;
        hits.push(SpreadHit {
            form: form.to_literal(),
            geometric,
            linear,
            span_dim,
        });
    }

    let report = SearchReport {
        n,
        q: field.order(),
        mode: opts.mode,
        seed: opts.seed,
        budget: opts.budget,
        workers: opts.workers.max(1),
        forms_tested: tested,
        forms_without_singular_line: 0,
        forms_whose_singular_lines_form_a_spread: hits.len() as u64,
        witnesses: hits
            .iter()
            .take(opts.witness_limit)
            .map(|h| h.form.clone())
            .collect(),
        hit_diagnostics: Vec::new(),
        pruned: false,
        elapsed_ms: started.elapsed().as_millis(),
    };
    Ok((hits, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u8) -> Arc<Field> {
        Field::shared(q).unwrap()
    }

    #[test]
    fn form_counts() {
        let f2 = f(2);
        assert_eq!(FormEnumerator::new(&f2, 4).unwrap().count(), 1023);
        assert_eq!(FormEnumerator::new(&f2, 5).unwrap().count(), 1_048_575);
        let f3 = f(3);
        assert_eq!(
            FormEnumerator::new(&f3, 5).unwrap().count(),
            (3u128.pow(20) - 1) / 2
        );
        assert!(matches!(
            FormEnumerator::new(&f2, 2),
            Err(SearchError::AmbientTooSmall(2))
        ));
    }

    #[test]
    fn form_enumeration_is_injective_and_canonical() {
        use std::collections::HashSet;
        for q in [2u8, 3] {
            let field = f(q);
            let e = FormEnumerator::new(&field, 3).unwrap();
            let mut seen = HashSet::new();
            for i in 0..e.count() {
                let form = e.get(i);
                assert!(!form.is_zero());
                // leading coefficient normalized to 1
                let lead = form.coeffs().iter().find(|&&c| c != 0).unwrap();
                assert_eq!(*lead, 1);
                assert!(seen.insert(form.coeffs().to_vec()), "q={q} i={i}");
            }
            assert_eq!(seen.len() as u128, e.count());
        }
    }

    #[test]
    fn singular_line_examples() {
        let f2 = f(2);
        // e*_{012} on F_2^4 has the singular line <e0, e3>
        let form = AlternatingForm::parse(&f2, 3, 3, "012").unwrap();
        assert!(has_singular_line(&form).unwrap());
        let scan = SingularLineScan::new(&f2, 3).unwrap();
        let singular = scan.singular_lines(&form);
        let witness = Subspace::parse(&f2, 3, "1000;0001").unwrap();
        assert!(singular.iter().any(|&i| scan.lines()[i] == witness));

        let zero = AlternatingForm::parse(&f2, 3, 3, "0").unwrap();
        assert!(matches!(
            has_singular_line(&zero),
            Err(SearchError::ZeroForm)
        ));
    }

    #[test]
    fn every_plane_complex_of_pg42_has_a_singular_line() {
        let f2 = f(2);
        let scan = SingularLineScan::new(&f2, 4).unwrap();
        let e = FormEnumerator::new(&f2, 4).unwrap();
        for i in 0..e.count() {
            assert!(scan.has_singular_line_bits(i + 1), "index {i}");
        }
    }

    #[test]
    fn fast_path_agrees_with_oracles_small() {
        for (n, q, trials) in [(3u8, 2u8, 200u64), (4, 2, 200), (4, 3, 60)] {
            let field = f(q);
            let scan = SingularLineScan::new(&field, n).unwrap();
            let e = FormEnumerator::new(&field, n).unwrap();
            let step = (e.count() / trials as u128).max(1);
            let mut i = 0u128;
            while i < e.count() {
                let form = e.get(i);
                let fast = scan.has_singular_line(&form);
                assert_eq!(
                    fast,
                    has_singular_line_oracle(&form).unwrap(),
                    "n={n} q={q} i={i}"
                );
                let complex = LinearComplex::new(form).unwrap();
                assert_eq!(fast, complex.has_singular().unwrap(), "n={n} q={q} i={i}");
                i += step;
            }
        }
    }

    #[test]
    fn exhaustive_search_pg42_finds_nothing() {
        let f2 = f(2);
        let opts = SearchOptions {
            workers: 2,
            ..SearchOptions::default()
        };
        let report = search_no_singular(&f2, 4, &opts).unwrap();
        assert_eq!(report.forms_tested, 1023);
        assert_eq!(report.forms_without_singular_line, 0);
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let f2 = f(2);
        let opts = SearchOptions {
            exhaustive_cap: 1000,
            ..SearchOptions::default()
        };
        assert!(matches!(
            search_no_singular(&f2, 4, &opts),
            Err(SearchError::BudgetExceeded {
                count: 1023,
                cap: 1000
            })
        ));
    }

    #[test]
    fn random_mode_is_deterministic() {
        let f2 = f(2);
        let opts = SearchOptions {
            mode: SearchMode::Random,
            budget: 2000,
            seed: 42,
            workers: 3,
            ..SearchOptions::default()
        };
        let a = search_no_singular(&f2, 5, &opts).unwrap();
        let b = search_no_singular(&f2, 5, &opts).unwrap();
        assert!(a.same_outcome(&b));
        assert_eq!(a.forms_tested, 2000);
        // worker ranges are disjoint and cover the budget
        let ranges = split_range(2000, 3);
        assert_eq!(ranges.iter().map(|(s, e)| e - s).sum::<u128>(), 2000);
        for w in ranges.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
    }

    #[test]
    fn random_mode_q3_runs() {
        let f3 = f(3);
        let opts = SearchOptions {
            mode: SearchMode::Random,
            budget: 50,
            seed: 7,
            workers: 2,
            ..SearchOptions::default()
        };
        let report = search_no_singular(&f3, 4, &opts).unwrap();
        assert_eq!(report.forms_tested, 50);
        assert_eq!(report.forms_without_singular_line, 0);
    }

    #[test]
    fn permutation_pruning_cross_check() {
        let f2 = f(2);
        let full = search_no_singular(&f2, 4, &SearchOptions::default()).unwrap();
        let pruned_opts = SearchOptions {
            prune_permutations: true,
            ..SearchOptions::default()
        };
        let pruned = search_no_singular(&f2, 4, &pruned_opts).unwrap();
        assert!(pruned.pruned);
        assert!(pruned.forms_tested < full.forms_tested);
        assert_eq!(
            pruned.forms_without_singular_line,
            full.forms_without_singular_line
        );
        // orbit sizes sum back to the full count
        let perms = PermTables::new(4).unwrap();
        let mut orbit_total = 0u64;
        for i in 0..1023u128 {
            let bits = i + 1;
            if perms.is_canonical(bits) {
                use std::collections::HashSet;
                let orbit: HashSet<u128> = (0..perms.maps.len())
                    .map(|p| perms.apply(p, bits))
                    .collect();
                orbit_total += orbit.len() as u64;
            }
        }
        assert_eq!(orbit_total, 1023);
        // the fast test is orbit-invariant
        let scan = SingularLineScan::new(&f2, 4).unwrap();
        for i in (0..1023u128).step_by(37) {
            let bits = i + 1;
            for p in 0..perms.maps.len() {
                assert_eq!(
                    scan.has_singular_line_bits(bits),
                    scan.has_singular_line_bits(perms.apply(p, bits))
                );
            }
        }
    }

    #[test]
    fn pruning_requires_gf2_exhaustive() {
        let f3 = f(3);
        let opts = SearchOptions {
            prune_permutations: true,
            ..SearchOptions::default()
        };
        assert!(matches!(
            search_no_singular(&f3, 3, &opts),
            Err(SearchError::PruneUnsupported(_))
        ));
    }

    #[test]
    fn classify_rejects_wrong_ambient() {
        let f2 = f(2);
        assert!(matches!(
            classify_spread_forms(&f2, 4, &SearchOptions::default()),
            Err(SearchError::WrongClassifyAmbient(4))
        ));
    }

    #[test]
    fn classify_random_sample_runs() {
        // a random prefix of the classification; hits may or may not
        // appear, but any hit must be geometric per the known structure
        let f2 = f(2);
        let opts = SearchOptions {
            mode: SearchMode::Random,
            budget: 3000,
            seed: 11,
            workers: 2,
            ..SearchOptions::default()
        };
        let (hits, report) = classify_spread_forms(&f2, 5, &opts).unwrap();
        assert_eq!(report.forms_tested, 3000);
        assert_eq!(
            report.forms_whose_singular_lines_form_a_spread as usize,
            hits.len()
        );
        for h in &hits {
            assert!(h.geometric, "hit {} must be geometric", h.form);
        }
    }

    #[test]
    fn hit_battery_reports_downstream_failures() {
        // wiring check: feeding a form with singular lines through the
        // hit battery reports the singular-line failure instead of
        // silently passing
        let f2 = f(2);
        let form = AlternatingForm::parse(&f2, 4, 3, "012+034").unwrap();
        let msg = on_no_singular_hit(&form);
        assert!(msg.contains("singular"), "got: {msg}");
    }
}
