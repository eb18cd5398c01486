//! Line partitions: a partition of the line set of PG(n,q) into one
//! line spread per hyperplane, the map π sending each line to the
//! hyperplane of its class, the linearity test on pencils, and the
//! correspondence with complexes of planes without singular lines.
//!
//! Partitions are stored extensionally (hyperplane → explicit line
//! list); nothing here generates them.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::complexes::{self, ComplexError, LinearComplex};
use crate::gf::Field;
use crate::projspace::{self, Pencil, ProjError, Subspace};
use crate::spreads::{self, SpreadError, SpreadFromComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("malformed partition: {0}")]
    Malformed(String),
    #[error("the plane machinery is degenerate in PG({0},q); need n ≥ 4")]
    DegenerateAmbient(u8),
    #[error("the partition is not linear; witness pencil: {0}")]
    NonLinearInput(String),
    #[error("the complex has a singular line")]
    NotSingularFree,
    #[error("expected a complex of planes, got h = {0}")]
    NotPlanes(i32),
    #[error("not a valid line partition: {0}")]
    NotAPartition(String),
    #[error("\"{0}\" is not a line of the partitioned space")]
    NotALine(String),
    #[error("cannot parse partition file: {0}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Spread(#[from] SpreadError),
}

/// Outcome of checking partition invariants, with a witness for the
/// first failure.
#[derive(Clone, Debug)]
pub struct PartitionCheck {
    pub valid: bool,
    pub witness: Option<String>,
}

/// An association hyperplane → line list covering PG(n,q).
#[derive(Clone, Debug)]
pub struct LinePartition {
    field: Arc<Field>,
    n: u8,
    classes: Vec<(Subspace, Vec<Subspace>)>,
    line_to_class: HashMap<Subspace, usize>,
}

impl LinePartition {
    /// Wraps raw classes; validity is checked by [`LinePartition::verify`].
    pub fn new(field: &Arc<Field>, n: u8, classes: Vec<(Subspace, Vec<Subspace>)>) -> Self {
        let mut line_to_class = HashMap::new();
        for (idx, (_, lines)) in classes.iter().enumerate() {
            for l in lines {
                line_to_class.entry(l.clone()).or_insert(idx);
            }
        }
        LinePartition {
            field: field.clone(),
            n,
            classes,
            line_to_class,
        }
    }

    /// The unique partition of PG(2,q): each line is the spread of
    /// itself seen as a hyperplane.
    pub fn trivial_plane(field: &Arc<Field>) -> Result<Self, PartitionError> {
        let classes = projspace::enumerate(field, 2, 1)?
            .into_iter()
            .map(|l| (l.clone(), vec![l]))
            .collect();
        Ok(LinePartition::new(field, 2, classes))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> u8 {
        self.n
    }

    pub fn classes(&self) -> &[(Subspace, Vec<Subspace>)] {
        &self.classes
    }

    /// Checks every partition invariant. Structural damage (a member
    /// that is not a line of its hyperplane, or a duplicated hyperplane
    /// key) is an error; a well-formed association that fails to be a
    /// partition yields `valid = false` with a witness.
    pub fn verify_detailed(&self) -> Result<PartitionCheck, PartitionError> {
        let mut seen_keys = HashSet::new();
        for (h, lines) in &self.classes {
            if h.dim() != self.n as i32 - 1 || h.ambient() != self.n {
                return Err(PartitionError::Malformed(format!(
                    "class key \"{h}\" is not a hyperplane of PG({},q)",
                    self.n
                )));
            }
            if !seen_keys.insert(h.clone()) {
                return Err(PartitionError::Malformed(format!(
                    "hyperplane \"{h}\" listed twice"
                )));
            }
            for l in lines {
                if l.dim() != 1 {
                    return Err(PartitionError::Malformed(format!(
                        "member \"{l}\" of class \"{h}\" is not a line"
                    )));
                }
                if !h.contains(l) {
                    return Err(PartitionError::Malformed(format!(
                        "carrier mismatch: line \"{l}\" is not inside its hyperplane \"{h}\""
                    )));
                }
            }
        }
        let fail = |witness: String| {
            Ok(PartitionCheck {
                valid: false,
                witness: Some(witness),
            })
        };
        // one entry per hyperplane
        let hyperplane_count = projspace::gaussian(self.n, self.field.order(), self.n as i32 - 1);
        if self.classes.len() as u128 != hyperplane_count {
            return fail(format!(
                "{} classes for {hyperplane_count} hyperplanes",
                self.classes.len()
            ));
        }
        // each class is a spread of its hyperplane
        for (h, lines) in &self.classes {
            if !spreads::is_spread(lines, h)? {
                return fail(format!("class of \"{h}\" is not a spread of it"));
            }
        }
        // classes are pairwise disjoint and exhaust the line set
        let mut seen_lines = HashSet::new();
        for (_, lines) in &self.classes {
            for l in lines {
                if !seen_lines.insert(l.clone()) {
                    return fail(format!("line \"{l}\" occurs in two classes"));
                }
            }
        }
        let line_count = projspace::gaussian(self.n, self.field.order(), 1);
        if seen_lines.len() as u128 != line_count {
            return fail(format!(
                "{} lines covered of {line_count}",
                seen_lines.len()
            ));
        }
        // counting identity: (#hyperplanes)·(points per hyperplane)/(q+1)
        // must equal the number of lines
        let points_per_hyperplane = projspace::gaussian(self.n - 1, self.field.order(), 0);
        let q1 = self.field.order() as u128 + 1;
        if hyperplane_count * points_per_hyperplane / q1 != line_count {
            return fail("counting identity fails".into());
        }
        Ok(PartitionCheck {
            valid: true,
            witness: None,
        })
    }

    pub fn verify(&self) -> Result<bool, PartitionError> {
        Ok(self.verify_detailed()?.valid)
    }

    /// The hyperplane whose spread contains the given line. Total on
    /// the line set of a valid partition.
    pub fn pi(&self, line: &Subspace) -> Result<&Subspace, PartitionError> {
        if line.dim() != 1 || line.ambient() != self.n || line.order() != self.field.order() {
            return Err(PartitionError::NotALine(line.to_string()));
        }
        match self.line_to_class.get(line) {
            Some(&idx) => Ok(&self.classes[idx].0),
            None => Err(PartitionError::NotAPartition(format!(
                "line \"{line}\" is uncovered"
            ))),
        }
    }

    /// First pencil of lines on which π fails to be linear, or `None`.
    /// π is globally defined, so the only admissible behaviour is a
    /// bijection onto a pencil of hyperplanes: the q+1 images must be
    /// pairwise distinct with a common (n−2)-dimensional intersection.
    pub fn linearity_witness(&self) -> Result<Option<Pencil>, PartitionError> {
        for pencil in projspace::all_pencils(&self.field, self.n, 1)? {
            let images: Vec<&Subspace> = pencil
                .members
                .iter()
                .map(|m| self.pi(m))
                .collect::<Result<_, _>>()?;
            let distinct: HashSet<&Subspace> = images.iter().copied().collect();
            if distinct.len() != images.len() {
                return Ok(Some(pencil));
            }
            let mut core = images[0].clone();
            for h in &images[1..] {
                core = core.meet(h)?;
            }
            if core.dim() != self.n as i32 - 2 {
                return Ok(Some(pencil));
            }
        }
        Ok(None)
    }

    pub fn is_linear(&self) -> Result<bool, PartitionError> {
        Ok(self.linearity_witness()?.is_none())
    }

    /// Parses the block format: one `H <subspace>` header per
    /// hyperplane followed by its member lines, with `#` comments and
    /// blank lines ignored.
    pub fn parse(field: &Arc<Field>, n: u8, text: &str) -> Result<Self, PartitionError> {
        let mut classes: Vec<(Subspace, Vec<Subspace>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let context = |e: ProjError| PartitionError::Parse(format!("line {}: {e}", lineno + 1));
            if let Some(rest) = trimmed.strip_prefix("H ") {
                let h = Subspace::parse(field, n, rest.trim()).map_err(context)?;
                classes.push((h, Vec::new()));
            } else {
                let member = Subspace::parse(field, n, trimmed).map_err(context)?;
                match classes.last_mut() {
                    Some((_, lines)) => lines.push(member),
                    None => {
                        return Err(PartitionError::Parse(format!(
                            "line {}: member before any H header",
                            lineno + 1
                        )))
                    }
                }
            }
        }
        Ok(LinePartition::new(field, n, classes))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (h, lines) in &self.classes {
            let _ = writeln!(out, "H {h}");
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
        }
        out
    }
}

/// The planes ε admitting a line ℓ with ℓ ⊆ ε ⊆ π(ℓ). For a linear
/// partition this is a complex of planes without singular lines; for a
/// non-linear one the operation reports the failing pencil.
pub fn complex_from_partition(partition: &LinePartition) -> Result<LinearComplex, PartitionError> {
    let n = partition.ambient();
    if n < 4 {
        return Err(PartitionError::DegenerateAmbient(n));
    }
    let check = partition.verify_detailed()?;
    if !check.valid {
        return Err(PartitionError::NotAPartition(
            check.witness.unwrap_or_default(),
        ));
    }
    if let Some(pencil) = partition.linearity_witness()? {
        return Err(PartitionError::NonLinearInput(format!(
            "vertex \"{}\", carrier \"{}\"",
            pencil.vertex, pencil.carrier
        )));
    }
    let field = partition.field();
    let mut members: HashSet<Subspace> = HashSet::new();
    for (_, lines) in partition.classes() {
        for l in lines {
            let coords = projspace::IntervalCoords::new(l, partition.pi(l)?)?;
            for local in projspace::enumerate(field, coords.local_ambient() as u8, 0)? {
                members.insert(coords.to_global(&local)?);
            }
        }
    }
    let member_list: Vec<Subspace> = members.iter().cloned().collect();
    let form = complexes::recover_covector(field, n, 3, &member_list)?;
    let complex = LinearComplex::new(form)?;
    if complex.has_singular()? {
        return Err(PartitionError::Complex(
            ComplexError::InternalInconsistency(
                "complex of a linear partition must have no singular line".into(),
            ),
        ));
    }
    Ok(complex)
}

/// The partition {H ↦ F_H} attached to a complex of planes without
/// singular lines.
pub fn partition_from_complex(complex: &LinearComplex) -> Result<LinePartition, PartitionError> {
    if complex.h() != 2 {
        return Err(PartitionError::NotPlanes(complex.h()));
    }
    if complex.has_singular()? {
        return Err(PartitionError::NotSingularFree);
    }
    let field = complex.field();
    let n = complex.ambient();
    let mut classes = Vec::new();
    for h in projspace::enumerate(field, n, n as i32 - 1)? {
        match spreads::spread_from_complex(complex, &h, true)? {
            SpreadFromComplex::Spread(s) => classes.push((h, s.lines().to_vec())),
            SpreadFromComplex::Raw { .. } => unreachable!("strict mode returns spreads"),
        }
    }
    let partition = LinePartition::new(field, n, classes);
    let check = partition.verify_detailed()?;
    if !check.valid {
        return Err(PartitionError::Complex(
            ComplexError::InternalInconsistency(format!(
                "F_H classes of a singular-line-free complex must partition the lines: {}",
                check.witness.unwrap_or_default()
            )),
        ));
    }
    if !partition.is_linear()? {
        return Err(PartitionError::Complex(
            ComplexError::InternalInconsistency(
                "partition attached to a complex must be linear".into(),
            ),
        ));
    }
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u8) -> Arc<Field> {
        Field::shared(q).unwrap()
    }

    #[test]
    fn trivial_plane_partitions_verify_and_are_linear() {
        for q in [2u8, 3] {
            let field = f(q);
            let p = LinePartition::trivial_plane(&field).unwrap();
            assert!(p.verify().unwrap());
            assert!(p.is_linear().unwrap());
            // π is the identity on the self-dual reading of PG(2,q)
            for (h, lines) in p.classes() {
                assert_eq!(&lines[0], h);
                assert_eq!(p.pi(&lines[0]).unwrap(), h);
            }
        }
    }

    #[test]
    fn dropping_a_class_invalidates() {
        let field = f(2);
        let p = LinePartition::trivial_plane(&field).unwrap();
        let mut classes = p.classes().to_vec();
        classes.pop();
        let damaged = LinePartition::new(&field, 2, classes);
        let check = damaged.verify_detailed().unwrap();
        assert!(!check.valid);
        assert!(check.witness.is_some());
    }

    #[test]
    fn carrier_mismatch_is_malformed() {
        let field = f(2);
        let p = LinePartition::trivial_plane(&field).unwrap();
        let mut classes = p.classes().to_vec();
        // move a line into the wrong class
        let stray = classes[1].1[0].clone();
        classes[0].1.push(stray);
        let damaged = LinePartition::new(&field, 2, classes);
        assert!(matches!(
            damaged.verify_detailed(),
            Err(PartitionError::Malformed(_))
        ));
    }

    #[test]
    fn pi_rejects_non_lines() {
        let field = f(2);
        let p = LinePartition::trivial_plane(&field).unwrap();
        let point = Subspace::parse(&field, 2, "100").unwrap();
        assert!(matches!(p.pi(&point), Err(PartitionError::NotALine(_))));
    }

    #[test]
    fn degenerate_ambient_rejected() {
        let field = f(2);
        let p = LinePartition::trivial_plane(&field).unwrap();
        assert!(matches!(
            complex_from_partition(&p),
            Err(PartitionError::DegenerateAmbient(2))
        ));
    }

    #[test]
    fn partition_from_complex_requires_singular_freedom() {
        let field = f(2);
        let k = LinearComplex::parse(&field, 4, 2, "012+034").unwrap();
        assert!(matches!(
            partition_from_complex(&k),
            Err(PartitionError::NotSingularFree)
        ));
    }

    #[test]
    fn file_roundtrip() {
        let field = f(2);
        let p = LinePartition::trivial_plane(&field).unwrap();
        let text = p.to_text();
        let parsed = LinePartition::parse(&field, 2, &text).unwrap();
        assert!(parsed.verify().unwrap());
        assert_eq!(parsed.classes().len(), p.classes().len());
        assert!(LinePartition::parse(&field, 2, "110\nH 100;010").is_err());
    }

    #[test]
    fn pg42_fixture_is_valid_but_not_linear() {
        let field = f(2);
        let text = include_str!("../data/partition_pg42.txt");
        let p = LinePartition::parse(&field, 4, text).unwrap();
        assert!(p.verify().unwrap());
        let witness = p.linearity_witness().unwrap();
        assert!(witness.is_some(), "no line partition of PG(4,q) is linear");
        match complex_from_partition(&p) {
            Err(PartitionError::NonLinearInput(w)) => assert!(!w.is_empty()),
            other => panic!("expected NonLinearInput, got {other:?}"),
        }
    }

    #[test]
    fn pi_constant_on_classes_and_injective_on_concurrent_lines() {
        let field = f(2);
        let p =
            LinePartition::parse(&field, 4, include_str!("../data/partition_pg42.txt")).unwrap();
        for (h, lines) in p.classes() {
            for l in lines {
                assert_eq!(p.pi(l).unwrap(), h);
                assert!(h.contains(l));
            }
        }
        // two distinct intersecting lines never share an image
        let lines = projspace::enumerate(&field, 4, 1).unwrap();
        for (i, a) in lines.iter().enumerate() {
            for b in lines.iter().skip(i + 1) {
                if a.meet(b).unwrap().dim() == 0 {
                    assert_ne!(p.pi(a).unwrap(), p.pi(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn malformed_fixture_is_rejected() {
        let field = f(2);
        let text = include_str!("../data/malformed_partition_pg22.txt");
        let p = LinePartition::parse(&field, 2, text).unwrap();
        assert!(matches!(
            p.verify_detailed(),
            Err(PartitionError::Malformed(_))
        ));
    }
}
