//! Linear complexes of h-subspaces and the structure hanging off them:
//! membership, the prime property, restriction to intervals, polar
//! hyperplanes and poles, singular and total loci, products with
//! hyperplanes, and the correspondence with null polarities.
//!
//! A complex is stored only by its covector; member sets are always
//! recomputed rather than cached, so the covector stays the single
//! source of truth during exhaustive experiments.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::exterior::{self, AlternatingForm, ExtError, MultiVector};
use crate::gf::Field;
use crate::linalg::{self, Mat};
use crate::projspace::{self, IntervalCoords, ProjError, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("a linear complex needs a nonzero covector")]
    ZeroForm,
    #[error("covector degree {degree} invalid for PG({n},q); need 1 ≤ degree ≤ n")]
    BadDegree { degree: u8, n: u8 },
    #[error("expected a subspace of dimension {expected}, got {got}")]
    DimensionMismatch { expected: i32, got: i32 },
    #[error("operation needs 1 ≤ h ≤ n−1, but h = {h}")]
    PolarityUnsupported { h: i32 },
    #[error("operation needs h ≤ n−2, but h = {h} in PG({n},q)")]
    DualUnsupported { h: i32, n: u8 },
    #[error("ambient spaces differ")]
    AmbientMismatch,
    #[error("not a null polarity: {0}")]
    InvalidPolarity(String),
    #[error("covector recovery failed: solution space has vector dimension {0}")]
    CovectorRecovery(usize),
    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Ext(#[from] ExtError),
}

/// Image of one subspace under a polar map: its polar hyperplane, or the
/// marker for the exceptional set. Tables are total; the marker is
/// always stored explicitly, never encoded by absence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolarTarget {
    Singular,
    Hyperplane(Subspace),
}

impl PolarTarget {
    pub fn is_singular(&self) -> bool {
        matches!(self, PolarTarget::Singular)
    }

    pub fn hyperplane(&self) -> Option<&Subspace> {
        match self {
            PolarTarget::Singular => None,
            PolarTarget::Hyperplane(h) => Some(h),
        }
    }
}

/// Pole of an (h+1)-subspace, or the marker for a total one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoleTarget {
    Total,
    Point(Subspace),
}

/// Result of multiplying a complex by a hyperplane.
#[derive(Clone, Debug)]
pub enum ProductResult {
    /// The hyperplane is total: every (h+1)-subspace qualifies.
    All,
    Complex(LinearComplex),
}

/// Result of restricting a complex to an interval: either the whole
/// interval Grassmannian lies inside the complex, or a complex in
/// interval coordinates.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub coords: IntervalCoords,
    /// `None` when every h-subspace of the interval is a member.
    pub complex: Option<LinearComplex>,
}

/// Kernel of the contraction map on grade-h multivectors together with
/// the decomposable points it contains.
#[derive(Clone, Debug)]
pub struct SingularLocus {
    /// Subspace of the grade-h coordinate space PG(C(n+1,h)−1, q).
    pub kernel: Subspace,
    /// The singular (h−1)-subspaces, i.e. the decomposable kernel points.
    pub singular: Vec<Subspace>,
}

/// A linear complex of h-subspaces of PG(n,q), h = degree − 1, stored as
/// a nonzero alternating (h+1)-form normalized projectively.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearComplex {
    form: AlternatingForm,
}

impl std::fmt::Debug for LinearComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LinearComplex(n={}, q={}, h={}, \"{}\")",
            self.ambient(),
            self.order(),
            self.h(),
            self.form
        )
    }
}

impl LinearComplex {
    pub fn new(form: AlternatingForm) -> Result<LinearComplex, ComplexError> {
        if form.is_zero() {
            return Err(ComplexError::ZeroForm);
        }
        let degree = form.degree();
        if degree < 1 || degree > form.ambient() {
            return Err(ComplexError::BadDegree {
                degree,
                n: form.ambient(),
            });
        }
        Ok(LinearComplex {
            form: form.normalize(),
        })
    }

    pub fn parse(field: &Arc<Field>, n: u8, h: i32, literal: &str) -> Result<Self, ComplexError> {
        if h < 0 || h >= n as i32 {
            return Err(ComplexError::BadDegree {
                degree: (h + 1).max(0) as u8,
                n,
            });
        }
        let form = AlternatingForm::parse(field, n, (h + 1) as u8, literal)?;
        LinearComplex::new(form)
    }

    pub fn form(&self) -> &AlternatingForm {
        &self.form
    }

    pub fn field(&self) -> &Arc<Field> {
        self.form.field()
    }

    pub fn ambient(&self) -> u8 {
        self.form.ambient()
    }

    pub fn order(&self) -> u8 {
        self.form.field().order()
    }

    /// Dimension of the member subspaces.
    pub fn h(&self) -> i32 {
        self.form.degree() as i32 - 1
    }

    /// Membership test: X is a member iff the covector vanishes on its
    /// Plücker image.
    pub fn contains(&self, x: &Subspace) -> Result<bool, ComplexError> {
        if x.ambient() != self.ambient() || x.order() != self.order() {
            return Err(ComplexError::AmbientMismatch);
        }
        if x.dim() != self.h() {
            return Err(ComplexError::DimensionMismatch {
                expected: self.h(),
                got: x.dim(),
            });
        }
        Ok(self.form.pair(&exterior::pluecker(x)?)? == 0)
    }

    /// All members, by full enumeration.
    pub fn members(&self) -> Result<Vec<Subspace>, ComplexError> {
        let mut out = Vec::new();
        for x in projspace::enumerate(self.field(), self.ambient(), self.h())? {
            if self.contains(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    fn require_polarity_range(&self) -> Result<(), ComplexError> {
        let h = self.h();
        if h < 1 || h > self.ambient() as i32 - 1 {
            return Err(ComplexError::PolarityUnsupported { h });
        }
        Ok(())
    }

    /// Polar hyperplane of an (h−1)-subspace: the kernel of the
    /// contraction covector, which equals the join of all members
    /// through U; `Singular` when the contraction vanishes.
    pub fn polar_hyperplane(&self, u: &Subspace) -> Result<PolarTarget, ComplexError> {
        self.require_polarity_range()?;
        if u.ambient() != self.ambient() || u.order() != self.order() {
            return Err(ComplexError::AmbientMismatch);
        }
        if u.dim() != self.h() - 1 {
            return Err(ComplexError::DimensionMismatch {
                expected: self.h() - 1,
                got: u.dim(),
            });
        }
        let cov = exterior::contract(&self.form, &exterior::pluecker(u)?)?;
        if cov.iter().all(|&c| c == 0) {
            return Ok(PolarTarget::Singular);
        }
        let hyp = Subspace::from_covector(self.field(), &cov)?;
        debug_assert!(
            hyp.contains(u),
            "null property: U must lie in its polar hyperplane"
        );
        Ok(PolarTarget::Hyperplane(hyp))
    }

    /// Kernel of p ↦ contract(c, p) on grade-h multivectors, plus the
    /// decomposable points of that kernel (the singular subspaces).
    pub fn singular_locus(&self) -> Result<SingularLocus, ComplexError> {
        self.require_polarity_range()?;
        let kernel = self.contraction_kernel()?;
        let singular = self
            .kernel_decomposables(&kernel, None)?
            .into_iter()
            .collect();
        Ok(SingularLocus { kernel, singular })
    }

    /// True iff the complex has at least one singular (h−1)-subspace.
    /// Scans the contraction kernel and stops at the first decomposable
    /// point.
    pub fn has_singular(&self) -> Result<bool, ComplexError> {
        self.require_polarity_range()?;
        let kernel = self.contraction_kernel()?;
        Ok(!self.kernel_decomposables(&kernel, Some(1))?.is_empty())
    }

    fn contraction_kernel(&self) -> Result<Subspace, ComplexError> {
        let n1 = self.ambient() as usize + 1;
        let h = self.h() as usize;
        let f = self.field();
        let tuples = linalg::combinations(n1, h);
        let mut m = Mat::zeros(n1, tuples.len());
        for (t_idx, t) in tuples.iter().enumerate() {
            for k in 0..n1 as u8 {
                if t.contains(&k) {
                    continue;
                }
                let mut s: Vec<u8> = t.clone();
                s.push(k);
                s.sort_unstable();
                let c = self.form.coeffs()[exterior::tuple_rank(n1, &s)];
                if c == 0 {
                    continue;
                }
                let above = t.iter().filter(|&&x| x > k).count();
                let signed = if above % 2 == 0 { c } else { f.neg_idx(c) };
                m.set(k as usize, t_idx, signed);
            }
        }
        let ker = m.kernel(f);
        let rows: Vec<Vec<u8>> = (0..ker.rows()).map(|r| ker.row(r).to_vec()).collect();
        Ok(Subspace::span(f, tuples.len() as u8 - 1, &rows)?)
    }

    fn kernel_decomposables(
        &self,
        kernel: &Subspace,
        limit: Option<usize>,
    ) -> Result<Vec<Subspace>, ComplexError> {
        let f = self.field();
        let h = self.h() as u8;
        let mut out = Vec::new();
        for point in kernel.points() {
            let coeffs = point.basis().next().unwrap().to_vec();
            let mv = MultiVector::new(f, self.ambient(), h, coeffs)?;
            if let Ok(sub) = exterior::unpluecker(&mv) {
                out.push(sub);
                if limit.is_some_and(|l| out.len() >= l) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Pole of an (h+1)-subspace: the unique point of V such that the
    /// members inside V are exactly the h-subspaces through it, or
    /// `Total` when every h-subspace of V is a member. Computed by brute
    /// force over the dual star.
    pub fn pole(&self, v: &Subspace) -> Result<PoleTarget, ComplexError> {
        let h = self.h();
        if h > self.ambient() as i32 - 2 {
            return Err(ComplexError::DualUnsupported {
                h,
                n: self.ambient(),
            });
        }
        if v.ambient() != self.ambient() || v.order() != self.order() {
            return Err(ComplexError::AmbientMismatch);
        }
        if v.dim() != h + 1 {
            return Err(ComplexError::DimensionMismatch {
                expected: h + 1,
                got: v.dim(),
            });
        }
        let f = self.field();
        let coords = IntervalCoords::new(&Subspace::empty(f, self.ambient()), v)?;
        let mut members = Vec::new();
        let mut non_members = Vec::new();
        for local in projspace::enumerate(f, (h + 1) as u8, h)? {
            let x = coords.to_global(&local)?;
            if self.contains(&x)? {
                members.push(x);
            } else {
                non_members.push(x);
            }
        }
        if non_members.is_empty() {
            return Ok(PoleTarget::Total);
        }
        let mut pole = members
            .first()
            .ok_or_else(|| {
                ComplexError::InternalInconsistency(
                    "a dual star cannot avoid a linear complex entirely".into(),
                )
            })?
            .clone();
        for m in &members[1..] {
            pole = pole.meet(m)?;
        }
        if pole.dim() != 0 {
            return Err(ComplexError::InternalInconsistency(format!(
                "members of a dual star must meet in a point, got dim {}",
                pole.dim()
            )));
        }
        // the members inside V are exactly the h-subspaces through the pole
        for x in &members {
            if !x.contains(&pole) {
                return Err(ComplexError::InternalInconsistency(
                    "member of the dual star misses the pole".into(),
                ));
            }
        }
        for x in &non_members {
            if x.contains(&pole) {
                return Err(ComplexError::InternalInconsistency(
                    "non-member of the dual star passes through the pole".into(),
                ));
            }
        }
        Ok(PoleTarget::Point(pole))
    }

    /// All total (h+1)-subspaces.
    pub fn total_subspaces(&self) -> Result<Vec<Subspace>, ComplexError> {
        let mut out = Vec::new();
        for v in projspace::enumerate(self.field(), self.ambient(), self.h() + 1)? {
            if matches!(self.pole(&v)?, PoleTarget::Total) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Product with a hyperplane: the (h+1)-subspaces X that contain a
    /// member inside X ∩ H. Returns `All` when H is total; otherwise the
    /// member set is a linear complex whose covector is recovered by a
    /// linear solve against the members' Plücker images.
    pub fn product(&self, hyperplane: &Subspace) -> Result<ProductResult, ComplexError> {
        let h = self.h();
        let n = self.ambient();
        if h > n as i32 - 2 {
            return Err(ComplexError::DualUnsupported { h, n });
        }
        if hyperplane.dim() != n as i32 - 1 {
            return Err(ComplexError::DimensionMismatch {
                expected: n as i32 - 1,
                got: hyperplane.dim(),
            });
        }
        let f = self.field();
        // total hyperplane: all of [∅,H]_h inside the complex
        let inner = IntervalCoords::new(&Subspace::empty(f, n), hyperplane)?;
        let mut total = true;
        for local in projspace::enumerate(f, n - 1, h)? {
            if !self.contains(&inner.to_global(&local)?)? {
                total = false;
                break;
            }
        }
        if total {
            return Ok(ProductResult::All);
        }
        let mut members = Vec::new();
        for x in projspace::enumerate(f, n, h + 1)? {
            let z = x.meet(hyperplane)?;
            let qualifies = if z.dim() == h + 1 {
                // X ⊆ H: look for any member inside X
                let coords = IntervalCoords::new(&Subspace::empty(f, n), &x)?;
                let mut found = false;
                for local in projspace::enumerate(f, (h + 1) as u8, h)? {
                    if self.contains(&coords.to_global(&local)?)? {
                        found = true;
                        break;
                    }
                }
                found
            } else {
                self.contains(&z)?
            };
            if qualifies {
                members.push(x);
            }
        }
        let form = recover_covector(f, n, (h + 2) as u8, &members)?;
        let product = LinearComplex::new(form)?;
        // the recovered covector must cut out exactly the computed set
        let member_set: HashSet<&Subspace> = members.iter().collect();
        for x in projspace::enumerate(f, n, h + 1)? {
            if product.contains(&x)? != member_set.contains(&x) {
                return Err(ComplexError::InternalInconsistency(
                    "product member set is not a hyperplane section".into(),
                ));
            }
        }
        Ok(ProductResult::Complex(product))
    }

    /// Restriction to the interval [U,W]: the members containing U and
    /// contained in W, as a complex in interval coordinates, or `None`
    /// when all of [U,W]_h is inside the complex.
    pub fn restrict(&self, u: &Subspace, w: &Subspace) -> Result<Restriction, ComplexError> {
        let h = self.h();
        if u.dim() > h - 1 {
            return Err(ComplexError::DimensionMismatch {
                expected: h - 1,
                got: u.dim(),
            });
        }
        if w.dim() < h + 1 {
            return Err(ComplexError::DimensionMismatch {
                expected: h + 1,
                got: w.dim(),
            });
        }
        if u.ambient() != self.ambient() || u.order() != self.order() {
            return Err(ComplexError::AmbientMismatch);
        }
        let coords = IntervalCoords::new(u, w)?;
        let f = self.field();
        let local_n = coords.local_ambient() as u8;
        let local_h = h - 1 - u.dim();
        let mut members_local = Vec::new();
        let mut all = true;
        for local in projspace::enumerate(f, local_n, local_h)? {
            if self.contains(&coords.to_global(&local)?)? {
                members_local.push(local);
            } else {
                all = false;
            }
        }
        if all {
            return Ok(Restriction {
                coords,
                complex: None,
            });
        }
        let form = recover_covector(f, local_n, (local_h + 1) as u8, &members_local)?;
        let complex = LinearComplex::new(form)?;
        let member_set: HashSet<&Subspace> = members_local.iter().collect();
        for x in projspace::enumerate(f, local_n, local_h)? {
            if complex.contains(&x)? != member_set.contains(&x) {
                return Err(ComplexError::InternalInconsistency(
                    "restriction member set is not a hyperplane section".into(),
                ));
            }
        }
        Ok(Restriction {
            coords,
            complex: Some(complex),
        })
    }

    /// Tabulates the polar hyperplane over every (h−1)-subspace.
    pub fn up_polarity(&self) -> Result<PolarMap, ComplexError> {
        self.require_polarity_range()?;
        let f = self.field();
        let subspaces = projspace::enumerate(f, self.ambient(), self.h() - 1)?;
        let mut targets = Vec::with_capacity(subspaces.len());
        for u in &subspaces {
            targets.push(self.polar_hyperplane(u)?);
        }
        PolarMap::from_parts(f.clone(), self.ambient(), self.h() - 1, subspaces, targets)
    }

    /// Projective dimension of the span, in the dual space, of all polar
    /// hyperplanes.
    pub fn image_span_dim(&self) -> Result<i32, ComplexError> {
        self.require_polarity_range()?;
        let f = self.field();
        let n1 = self.ambient() as usize + 1;
        let mut rows = Vec::new();
        for u in projspace::enumerate(f, self.ambient(), self.h() - 1)? {
            let cov = exterior::contract(&self.form, &exterior::pluecker(&u)?)?;
            if cov.iter().any(|&c| c != 0) {
                rows.push(cov);
            }
        }
        let mut m = Mat::from_rows(rows, n1);
        m.rref(f);
        Ok(m.rows() as i32 - 1)
    }
}

/// Solves for the covector vanishing on the Plücker images of the given
/// members. Fails unless the solution space has vector dimension
/// exactly one, which would indicate the member set is not a hyperplane
/// section.
pub(crate) fn recover_covector(
    field: &Arc<Field>,
    n: u8,
    degree: u8,
    members: &[Subspace],
) -> Result<AlternatingForm, ComplexError> {
    let cols = linalg::binomial(n as usize + 1, degree as usize);
    let rows: Vec<Vec<u8>> = members
        .iter()
        .map(|x| exterior::pluecker(x).map(|p| p.coeffs().to_vec()))
        .collect::<Result<_, _>>()?;
    let m = Mat::from_rows(rows, cols);
    let ker = m.kernel(field);
    if ker.rows() != 1 {
        return Err(ComplexError::CovectorRecovery(ker.rows()));
    }
    Ok(AlternatingForm::new(field, n, degree, ker.row(0).to_vec())?.normalize())
}

/// Prime (geometric hyperplane) test: S is a proper subset of the
/// h-subspaces and every pencil either lies inside S or meets it in
/// exactly one element.
pub fn is_prime(
    set: &HashSet<Subspace>,
    field: &Arc<Field>,
    n: u8,
    h: i32,
) -> Result<bool, ComplexError> {
    let total = projspace::gaussian(n, field.order(), h);
    if set.len() as u128 >= total {
        return Ok(false);
    }
    for pencil in projspace::all_pencils(field, n, h)? {
        let inside = pencil.members.iter().filter(|m| set.contains(m)).count();
        if inside != 1 && inside != pencil.members.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of checking a polar table against the linearity, null and
/// reciprocity conditions.
#[derive(Clone, Debug)]
pub struct NullPolarityCheck {
    pub domain_nonempty: bool,
    pub linear: bool,
    pub null: bool,
    pub reciprocity: bool,
    /// Human-readable witness of the first violation found.
    pub witness: Option<String>,
}

impl NullPolarityCheck {
    pub fn is_valid(&self) -> bool {
        self.domain_nonempty && self.linear && self.null && self.reciprocity
    }
}

/// A total table from the k-subspaces of PG(n,q) to hyperplanes, with an
/// explicit marker for the exceptional set.
#[derive(Clone, Debug)]
pub struct PolarMap {
    field: Arc<Field>,
    n: u8,
    k: i32,
    subspaces: Vec<Subspace>,
    targets: Vec<PolarTarget>,
    index: HashMap<Subspace, usize>,
}

impl PolarMap {
    fn from_parts(
        field: Arc<Field>,
        n: u8,
        k: i32,
        subspaces: Vec<Subspace>,
        targets: Vec<PolarTarget>,
    ) -> Result<PolarMap, ComplexError> {
        let index: HashMap<Subspace, usize> = subspaces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Ok(PolarMap {
            field,
            n,
            k,
            subspaces,
            targets,
            index,
        })
    }

    /// Builds a table from an association list. The list must cover
    /// every k-subspace exactly once, and targets must be hyperplanes.
    pub fn from_entries(
        field: &Arc<Field>,
        n: u8,
        k: i32,
        entries: Vec<(Subspace, PolarTarget)>,
    ) -> Result<PolarMap, ComplexError> {
        let canonical = projspace::enumerate(field, n, k)?;
        let mut map: HashMap<Subspace, PolarTarget> = HashMap::new();
        for (s, t) in entries {
            if s.dim() != k || s.ambient() != n {
                return Err(ComplexError::DimensionMismatch {
                    expected: k,
                    got: s.dim(),
                });
            }
            if let PolarTarget::Hyperplane(h) = &t {
                if h.dim() != n as i32 - 1 {
                    return Err(ComplexError::DimensionMismatch {
                        expected: n as i32 - 1,
                        got: h.dim(),
                    });
                }
            }
            if map.insert(s, t).is_some() {
                return Err(ComplexError::InvalidPolarity(
                    "duplicate table entry".into(),
                ));
            }
        }
        let mut targets = Vec::with_capacity(canonical.len());
        for s in &canonical {
            match map.remove(s) {
                Some(t) => targets.push(t),
                None => {
                    return Err(ComplexError::InvalidPolarity(format!(
                        "table misses the subspace \"{s}\""
                    )))
                }
            }
        }
        PolarMap::from_parts(field.clone(), n, k, canonical, targets)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> u8 {
        self.n
    }

    /// Dimension of the source subspaces.
    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Subspace, &PolarTarget)> {
        self.subspaces.iter().zip(self.targets.iter())
    }

    pub fn target(&self, u: &Subspace) -> Option<&PolarTarget> {
        self.index.get(u).map(|&i| &self.targets[i])
    }

    /// Domain size (entries that are not exceptional).
    pub fn domain_len(&self) -> usize {
        self.targets.iter().filter(|t| !t.is_singular()).count()
    }

    /// Containment with the convention that the image of an exceptional
    /// subspace is the whole space.
    fn image_contains(&self, u_idx: usize, x: &Subspace) -> bool {
        match &self.targets[u_idx] {
            PolarTarget::Singular => true,
            PolarTarget::Hyperplane(h) => h.contains(x),
        }
    }

    /// Checks linearity on every pencil, the null property on the
    /// domain, and reciprocity on collinear pairs. A table passes iff
    /// all three hold and the domain is nonempty.
    pub fn verify(&self) -> Result<NullPolarityCheck, ComplexError> {
        let mut check = NullPolarityCheck {
            domain_nonempty: self.domain_len() > 0,
            linear: true,
            null: true,
            reciprocity: true,
            witness: None,
        };
        if !check.domain_nonempty {
            check.witness = Some("empty domain".into());
        }
        let note = |flag: &mut bool, witness: String, slot: &mut Option<String>| {
            *flag = false;
            if slot.is_none() {
                *slot = Some(witness);
            }
        };
        for (u, t) in self.entries() {
            if let PolarTarget::Hyperplane(h) = t {
                if !h.contains(u) {
                    note(
                        &mut check.null,
                        format!("null property fails at \"{u}\""),
                        &mut check.witness,
                    );
                }
            }
        }
        for pencil in projspace::all_pencils(&self.field, self.n, self.k)? {
            let idxs: Vec<usize> = pencil
                .members
                .iter()
                .map(|m| {
                    self.index.get(m).copied().ok_or_else(|| {
                        ComplexError::InvalidPolarity("table misses a pencil member".into())
                    })
                })
                .collect::<Result<_, _>>()?;
            let exceptional = idxs
                .iter()
                .filter(|&&i| self.targets[i].is_singular())
                .count();
            let q1 = pencil.members.len();
            let ok = if exceptional == q1 {
                true // (iii) the pencil lies in the exceptional set
            } else if exceptional == 1 {
                // (ii) the rest map to one common hyperplane
                let images: Vec<&Subspace> = idxs
                    .iter()
                    .filter_map(|&i| self.targets[i].hyperplane())
                    .collect();
                images.windows(2).all(|w| w[0] == w[1])
            } else if exceptional == 0 {
                // (i) bijection onto a pencil of hyperplanes: images are
                // pairwise distinct and share an (n−2)-dimensional core
                let images: Vec<&Subspace> = idxs
                    .iter()
                    .filter_map(|&i| self.targets[i].hyperplane())
                    .collect();
                let distinct: HashSet<&Subspace> = images.iter().copied().collect();
                if distinct.len() != q1 {
                    false
                } else {
                    let mut core = images[0].clone();
                    for h in &images[1..] {
                        core = core.meet(h)?;
                    }
                    core.dim() == self.n as i32 - 2
                }
            } else {
                false
            };
            if !ok {
                note(
                    &mut check.linear,
                    format!(
                        "linearity fails on the pencil with vertex \"{}\" and carrier \"{}\"",
                        pencil.vertex, pencil.carrier
                    ),
                    &mut check.witness,
                );
            }
            // reciprocity over collinear pairs, exceptional images read
            // as the whole space
            for a in 0..q1 {
                for b in 0..q1 {
                    if a == b {
                        continue;
                    }
                    let u1 = &pencil.members[a];
                    let u2 = &pencil.members[b];
                    if self.image_contains(idxs[b], u1) && !self.image_contains(idxs[a], u2) {
                        note(
                            &mut check.reciprocity,
                            format!("reciprocity fails for \"{u1}\" and \"{u2}\""),
                            &mut check.witness,
                        );
                    }
                }
            }
        }
        Ok(check)
    }

    pub fn is_null_polarity(&self) -> Result<bool, ComplexError> {
        Ok(self.verify()?.is_valid())
    }
}

/// The unique complex of (k+1)-subspaces whose polar table is the given
/// null polarity: a subspace is a member iff it contains a table entry
/// whose image contains it.
pub fn from_polarity(chi: &PolarMap) -> Result<LinearComplex, ComplexError> {
    let n = chi.ambient();
    let h = chi.k() + 1;
    if h < 1 || h > n as i32 - 1 {
        return Err(ComplexError::PolarityUnsupported { h });
    }
    let check = chi.verify()?;
    if !check.is_valid() {
        return Err(ComplexError::InvalidPolarity(
            check
                .witness
                .unwrap_or_else(|| "violates a polarity condition".into()),
        ));
    }
    let f = chi.field().clone();
    let mut members = Vec::new();
    for x in projspace::enumerate(&f, n, h)? {
        let coords = IntervalCoords::new(&Subspace::empty(&f, n), &x)?;
        let mut member = false;
        for local in projspace::enumerate(&f, h as u8, h - 1)? {
            let u = coords.to_global(&local)?;
            let idx = chi.index[&u];
            if chi.image_contains(idx, &x) {
                member = true;
                break;
            }
        }
        if member {
            members.push(x);
        }
    }
    let form = recover_covector(&f, n, (h + 1) as u8, &members)?;
    let complex = LinearComplex::new(form)?;
    let member_set: HashSet<&Subspace> = members.iter().collect();
    for x in projspace::enumerate(&f, n, h)? {
        if complex.contains(&x)? != member_set.contains(&x) {
            return Err(ComplexError::InternalInconsistency(
                "polarity member set is not a hyperplane section".into(),
            ));
        }
    }
    Ok(complex)
}
