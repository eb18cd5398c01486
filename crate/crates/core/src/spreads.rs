//! Line spreads of hyperplanes: the spread attached to a complex of
//! planes, the spread / geometric / linear predicates, and the field
//! reduction construction used as a fixture source.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::complexes::{ComplexError, LinearComplex, PolarTarget};
use crate::exterior::{self, ExtError, MultiVector};
use crate::gf::{Field, GfError};
use crate::projspace::{self, ProjError, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpreadError {
    #[error("expected a line, got a subspace of dimension {0}")]
    NotALine(i32),
    #[error("line \"{0}\" is not contained in the carrier")]
    LineOutsideCarrier(String),
    #[error("the line set is not a spread of the carrier")]
    NotASpread,
    #[error("field reduction needs m in {{2,3}} and a prime q with q² ≤ 16, got m={m}, q={q}")]
    UnsupportedReduction { m: u8, q: u8 },
    #[error("the complex has a singular line")]
    NotSingularFree,
    #[error("expected a complex of planes, got h = {0}")]
    NotPlanes(i32),
    #[error("expected a hyperplane, got dimension {0}")]
    NotHyperplane(i32),
    #[error("a proved property failed on a live witness: {0}")]
    TheoryViolation(String),
    #[error("cannot parse spread file: {0}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Ambient dimension of the grade-2 Plücker space of PG(n,q):
/// M = (n² + n − 2)/2.
pub fn pluecker_ambient_dim(n: u8) -> i32 {
    let n = n as i32;
    (n * n + n - 2) / 2
}

/// Disjointness-and-cover test: every point of the carrier lies on
/// exactly one of the lines. Lines outside the carrier are an error.
pub fn is_spread(lines: &[Subspace], carrier: &Subspace) -> Result<bool, SpreadError> {
    let mut uncovered: HashSet<Subspace> = carrier.points().into_iter().collect();
    for line in lines {
        if line.dim() != 1 {
            return Err(SpreadError::NotALine(line.dim()));
        }
        if !carrier.contains(line) {
            return Err(SpreadError::LineOutsideCarrier(line.to_string()));
        }
        for p in line.points() {
            if !uncovered.remove(&p) {
                return Ok(false); // covered twice
            }
        }
    }
    Ok(uncovered.is_empty())
}

/// A verified line spread of its carrier subspace.
#[derive(Clone, Debug)]
pub struct LineSpread {
    carrier: Subspace,
    lines: Vec<Subspace>,
}

impl LineSpread {
    pub fn new(carrier: Subspace, lines: Vec<Subspace>) -> Result<LineSpread, SpreadError> {
        if !is_spread(&lines, &carrier)? {
            return Err(SpreadError::NotASpread);
        }
        Ok(LineSpread { carrier, lines })
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// A spread is geometric when for every pair of its lines, the
    /// spread lines inside the solid they span form a spread of that
    /// solid. Since the lines here are already pairwise disjoint, that
    /// holds iff the solid contains exactly q²+1 of them: that many
    /// disjoint lines account for all (q²+1)(q+1) points of the solid.
    pub fn is_geometric(&self) -> Result<bool, SpreadError> {
        let q = self.carrier.order() as usize;
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let solid = self.lines[i].join(&self.lines[j])?;
                debug_assert_eq!(solid.dim(), 3, "disjoint lines span a solid");
                let inside = self.lines.iter().filter(|l| solid.contains(l)).count();
                if inside != q * q + 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Linearity test: spans the Plücker images and checks that the
    /// decomposable points of the span which are lines of the carrier
    /// are exactly the images. Returns the flag and the span dimension.
    pub fn is_linear(&self) -> Result<(bool, i32), SpreadError> {
        let field = self.carrier.field();
        let n = self.carrier.ambient();
        let m_dim = pluecker_ambient_dim(n);
        let images: Vec<Vec<u8>> = self
            .lines
            .iter()
            .map(|l| exterior::pluecker(l).map(|p| p.coeffs().to_vec()))
            .collect::<Result<_, _>>()?;
        let span = Subspace::span(field, m_dim as u8, &images)?;
        let span_dim = span.dim();
        let image_set: HashSet<Vec<u8>> = images.into_iter().collect();
        let mut recovered = 0usize;
        for point in span.points() {
            let coeffs = point.basis().next().unwrap().to_vec();
            let mv = MultiVector::new(field, n, 2, coeffs.clone())?;
            let Ok(line) = exterior::unpluecker(&mv) else {
                continue;
            };
            if !self.carrier.contains(&line) {
                continue;
            }
            if !image_set.contains(&coeffs) {
                return Ok((false, span_dim));
            }
            recovered += 1;
        }
        Ok((recovered == image_set.len(), span_dim))
    }
}

/// Result of collecting the lines whose polar hyperplane is H.
#[derive(Clone, Debug)]
pub enum SpreadFromComplex {
    /// Strict mode: a verified spread with the structural consequences
    /// already asserted.
    Spread(LineSpread),
    /// Non-strict mode: the raw line set and whether it happens to be a
    /// spread of H.
    Raw { lines: Vec<Subspace>, spread: bool },
}

/// The set F_H of lines of PG(n,q) whose polar hyperplane under a
/// complex of planes is H.
///
/// Strict mode requires the complex to have no singular line, verifies
/// that F_H is a spread (with n even), and asserts the structural
/// consequences on the result: the spread is linear with span dimension
/// M − n and is not geometric. No strict success is known at supported
/// sizes; the assertions are wired so that any future hit is checked
/// automatically. Non-strict mode returns the raw set for diagnostics.
pub fn spread_from_complex(
    complex: &LinearComplex,
    hyperplane: &Subspace,
    strict: bool,
) -> Result<SpreadFromComplex, SpreadError> {
    if complex.h() != 2 {
        return Err(SpreadError::NotPlanes(complex.h()));
    }
    let n = complex.ambient();
    if hyperplane.dim() != n as i32 - 1 {
        return Err(SpreadError::NotHyperplane(hyperplane.dim()));
    }
    if strict && complex.has_singular()? {
        return Err(SpreadError::NotSingularFree);
    }
    let field = complex.field();
    let mut lines = Vec::new();
    for line in projspace::enumerate(field, n, 1)? {
        if let PolarTarget::Hyperplane(h) = complex.polar_hyperplane(&line)? {
            if h == *hyperplane {
                lines.push(line);
            }
        }
    }
    if !strict {
        let spread = is_spread(&lines, hyperplane)?;
        return Ok(SpreadFromComplex::Raw { lines, spread });
    }
    if !n.is_multiple_of(2) {
        return Err(SpreadError::TheoryViolation(format!(
            "complex of planes without singular lines in odd-dimensional PG({n},q)"
        )));
    }
    let spread = LineSpread::new(hyperplane.clone(), lines)
        .map_err(|e| SpreadError::TheoryViolation(format!("F_H failed the spread test: {e}")))?;
    let (linear, span_dim) = spread.is_linear()?;
    if !linear || span_dim != pluecker_ambient_dim(n) - n as i32 {
        return Err(SpreadError::TheoryViolation(format!(
            "F_H must be linear with span dimension M − n, got linear={linear}, dim={span_dim}"
        )));
    }
    if spread.is_geometric()? {
        return Err(SpreadError::TheoryViolation(
            "F_H of a singular-line-free complex over a finite field must not be geometric".into(),
        ));
    }
    Ok(SpreadFromComplex::Spread(spread))
}

/// Spread of PG(2m−1, q) obtained by reading the points of PG(m−1, q²)
/// as F_q-lines through a fixed basis {1, x} of GF(q²) over GF(q).
/// Supported for m ∈ {2,3} and prime q with q² ≤ 16.
pub fn field_reduction_spread(m: u8, q: u8) -> Result<LineSpread, SpreadError> {
    let big = q as u16 * q as u16;
    let prime = q >= 2 && (2..q).all(|d| !q.is_multiple_of(d));
    if !(m == 2 || m == 3) || !prime || big > 16 {
        return Err(SpreadError::UnsupportedReduction { m, q });
    }
    let small_field = Field::shared(q)?;
    let big_field = Field::shared(big as u8)?;
    let n = 2 * m - 1;
    let carrier = Subspace::full(&small_field, n);
    // the element x of GF(q²) has packed index q
    let x = q;
    let expand = |v: &[u8]| -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * m as usize);
        for &c in v {
            out.push(c % q);
            out.push(c / q);
        }
        out
    };
    let mut lines = Vec::new();
    for point in projspace::enumerate(&big_field, m - 1, 0)? {
        let v: Vec<u8> = point.basis().next().unwrap().to_vec();
        let xv: Vec<u8> = v.iter().map(|&c| big_field_mul(&big_field, x, c)).collect();
        lines.push(Subspace::span(&small_field, n, &[expand(&v), expand(&xv)])?);
    }
    LineSpread::new(carrier, lines)
}

fn big_field_mul(field: &Arc<Field>, a: u8, b: u8) -> u8 {
    let sa = field.scalar(a).unwrap();
    let sb = field.scalar(b).unwrap();
    field.mul(sa, sb).unwrap().index()
}

/// Parses a spread file: one line of PG(n,q) per record in the subspace
/// syntax, blank lines and `#` comments ignored.
pub fn parse_spread_file(
    field: &Arc<Field>,
    n: u8,
    text: &str,
) -> Result<Vec<Subspace>, SpreadError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let s = Subspace::parse(field, n, trimmed)
            .map_err(|e| SpreadError::Parse(format!("record {}: {e}", lineno + 1)))?;
        if s.dim() != 1 {
            return Err(SpreadError::NotALine(s.dim()));
        }
        out.push(s);
    }
    Ok(out)
}

/// Serializes lines one per record in the subspace syntax.
pub fn spread_to_text(lines: &[Subspace]) -> String {
    let mut s = String::new();
    for l in lines {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    s
}
