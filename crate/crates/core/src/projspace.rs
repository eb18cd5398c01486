//! Subspaces of PG(n,q) in canonical form.
//!
//! Every [`Subspace`] is stored as the reduced row echelon form of a
//! basis, so equality and hashing are structural and each subspace has
//! exactly one representation. The empty subspace (projective dimension
//! −1) is a first-class value. Enumeration is in lexicographic order of
//! the canonical matrices, which makes exhaustive experiments
//! reproducible and resumable by index.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{self, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("ambient spaces differ: PG({0},{2}) vs PG({1},{3})")]
    AmbientMismatch(u8, u8, u8, u8),
    #[error("scalar index {idx} out of range for GF({q})")]
    ScalarOutOfRange { idx: u8, q: u8 },
    #[error("dimension {0} out of range for PG({1},q)")]
    DimensionOutOfRange(i32, u8),
    #[error("{0}")]
    NotContained(String),
    #[error("expected codimension 2 between vertex and carrier, got dim {0} inside dim {1}")]
    BadPencilShape(i32, i32),
    #[error("subspace of dimension {0} is not a hyperplane of PG({1},q)")]
    NotHyperplane(i32, u8),
    #[error("operation requires a nonempty subspace")]
    EmptySubspace,
    #[error("zero covector does not define a hyperplane")]
    ZeroCovector,
    #[error("cannot parse subspace literal: {0}")]
    Parse(String),
}

/// A d-subspace of PG(n,q), stored as an RREF basis matrix of shape
/// (d+1) × (n+1). `d = -1` encodes the empty subspace.
#[derive(Clone)]
pub struct Subspace {
    field: Arc<Field>,
    n: u8,
    mat: Mat,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field.order() == other.field.order() && self.mat == other.mat
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.field.order().hash(state);
        self.mat.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(PG({},{}), d={}, \"{}\")",
            self.n,
            self.order(),
            self.dim(),
            self
        )
    }
}

impl fmt::Display for Subspace {
    /// Canonical text form: basis rows joined by `;`, one character per
    /// scalar index (0-9, then a-f). The empty subspace prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "-");
        }
        for (i, row) in self.mat.row_iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for &v in row {
                write!(f, "{}", char::from_digit(v as u32, 16).unwrap())?;
            }
        }
        Ok(())
    }
}

impl Subspace {
    /// Row space of the given coordinate vectors. Zero vectors are
    /// permitted and dropped; an empty input yields the empty subspace.
    pub fn span(field: &Arc<Field>, n: u8, vectors: &[Vec<u8>]) -> Result<Subspace, ProjError> {
        let cols = n as usize + 1;
        let q = field.order();
        for v in vectors {
            if v.len() != cols {
                return Err(ProjError::LengthMismatch {
                    expected: cols,
                    got: v.len(),
                });
            }
            if let Some(&idx) = v.iter().find(|&&x| x >= q) {
                return Err(ProjError::ScalarOutOfRange { idx, q });
            }
        }
        let mut mat = Mat::from_rows(vectors.to_vec(), cols);
        mat.rref(field);
        Ok(Subspace {
            field: field.clone(),
            n,
            mat,
        })
    }

    pub fn empty(field: &Arc<Field>, n: u8) -> Subspace {
        Subspace {
            field: field.clone(),
            n,
            mat: Mat::zeros(0, n as usize + 1),
        }
    }

    pub fn full(field: &Arc<Field>, n: u8) -> Subspace {
        Subspace {
            field: field.clone(),
            n,
            mat: Mat::identity(n as usize + 1),
        }
    }

    pub fn point(field: &Arc<Field>, coords: &[u8]) -> Result<Subspace, ProjError> {
        let n = coords.len() as u8 - 1;
        let s = Subspace::span(field, n, &[coords.to_vec()])?;
        if s.is_empty() {
            return Err(ProjError::EmptySubspace);
        }
        Ok(s)
    }

    pub(crate) fn from_mat(field: &Arc<Field>, n: u8, mat: Mat) -> Subspace {
        Subspace {
            field: field.clone(),
            n,
            mat,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn order(&self) -> u8 {
        self.field.order()
    }

    /// Ambient dimension n of PG(n,q).
    pub fn ambient(&self) -> u8 {
        self.n
    }

    /// Projective dimension; −1 for the empty subspace.
    pub fn dim(&self) -> i32 {
        self.mat.rows() as i32 - 1
    }

    /// Vector-space dimension (number of basis rows).
    pub fn vdim(&self) -> usize {
        self.mat.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.mat.rows() == 0
    }

    pub fn basis(&self) -> impl Iterator<Item = &[u8]> {
        self.mat.row_iter()
    }

    pub(crate) fn mat(&self) -> &Mat {
        &self.mat
    }

    fn pivots(&self) -> Vec<usize> {
        self.mat
            .row_iter()
            .map(|r| {
                r.iter()
                    .position(|&v| v != 0)
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), ProjError> {
        if self.n != other.n || self.order() != other.order() {
            return Err(ProjError::AmbientMismatch(
                self.n,
                other.n,
                self.order(),
                other.order(),
            ));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[u8]) -> bool {
        let reduced = self.mat.reduce_vector(&self.field, v, &self.pivots());
        reduced.iter().all(|&x| x == 0)
    }

    /// Subspace containment: `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        if self.n != other.n || self.order() != other.order() {
            return false;
        }
        let pivots = self.pivots();
        other.mat.row_iter().all(|r| {
            self.mat
                .reduce_vector(&self.field, r, &pivots)
                .iter()
                .all(|&x| x == 0)
        })
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace, ProjError> {
        self.check_ambient(other)?;
        let rows: Vec<Vec<u8>> = self
            .mat
            .row_iter()
            .chain(other.mat.row_iter())
            .map(|r| r.to_vec())
            .collect();
        Subspace::span(&self.field, self.n, &rows)
    }

    /// Intersection of subspaces, via the kernel of the stacked
    /// transposed bases. Satisfies dim U + dim W = dim join + dim meet.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace, ProjError> {
        self.check_ambient(other)?;
        let f = &self.field;
        let a = self.vdim();
        let b = other.vdim();
        if a == 0 || b == 0 {
            return Ok(Subspace::empty(f, self.n));
        }
        let cols = self.n as usize + 1;
        // Solve U^T x - W^T y = 0; each solution gives the common vector U^T x.
        let mut sys = Mat::zeros(cols, a + b);
        for c in 0..cols {
            for i in 0..a {
                sys.set(c, i, self.mat.at(i, c));
            }
            for j in 0..b {
                sys.set(c, a + j, f.neg_idx(other.mat.at(j, c)));
            }
        }
        let ker = sys.kernel(f);
        let mut vectors = Vec::with_capacity(ker.rows());
        for k in 0..ker.rows() {
            let mut v = vec![0u8; cols];
            for i in 0..a {
                let coef = ker.at(k, i);
                if coef == 0 {
                    continue;
                }
                for c in 0..cols {
                    v[c] = f.add_idx(v[c], f.mul_idx(coef, self.mat.at(i, c)));
                }
            }
            vectors.push(v);
        }
        Subspace::span(f, self.n, &vectors)
    }

    /// The projective points lying in this subspace.
    pub fn points(&self) -> Vec<Subspace> {
        let k = self.vdim();
        let cols = self.n as usize + 1;
        let f = &self.field;
        linalg::projective_reps(self.order(), k)
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![0u8; cols];
                for (i, &coef) in coeffs.iter().enumerate() {
                    if coef == 0 {
                        continue;
                    }
                    for c in 0..cols {
                        v[c] = f.add_idx(v[c], f.mul_idx(coef, self.mat.at(i, c)));
                    }
                }
                // Combinations of RREF rows led by a unit coefficient are
                // already canonical one-row matrices.
                Subspace::from_mat(f, self.n, Mat::from_rows(vec![v], cols))
            })
            .collect()
    }

    /// Dual coefficients of a hyperplane: the covector v with
    /// H = {x : Σ v_i x_i = 0}, normalized to leading coefficient 1.
    pub fn dual_covector(&self) -> Result<Vec<u8>, ProjError> {
        if self.dim() != self.n as i32 - 1 {
            return Err(ProjError::NotHyperplane(self.dim(), self.n));
        }
        let ker = self.mat.kernel(&self.field);
        debug_assert_eq!(ker.rows(), 1);
        let mut v = ker.row(0).to_vec();
        let lead = v.iter().position(|&x| x != 0).unwrap();
        let inv = self.field.inv_idx(v[lead]);
        if inv != 1 {
            for x in v.iter_mut() {
                *x = self.field.mul_idx(*x, inv);
            }
        }
        Ok(v)
    }

    /// Hyperplane with the given dual coefficients.
    pub fn from_covector(field: &Arc<Field>, cov: &[u8]) -> Result<Subspace, ProjError> {
        if cov.iter().all(|&x| x == 0) {
            return Err(ProjError::ZeroCovector);
        }
        let n = cov.len() as u8 - 1;
        let m = Mat::from_rows(vec![cov.to_vec()], cov.len());
        let ker = m.kernel(field);
        let rows: Vec<Vec<u8>> = (0..ker.rows()).map(|r| ker.row(r).to_vec()).collect();
        Subspace::span(field, n, &rows)
    }

    /// Parses the `;`-separated vector syntax accepted by [`fmt::Display`].
    pub fn parse(field: &Arc<Field>, n: u8, text: &str) -> Result<Subspace, ProjError> {
        let text = text.trim();
        if text == "-" || text.is_empty() {
            return Ok(Subspace::empty(field, n));
        }
        let mut rows = Vec::new();
        for part in text.split(';') {
            let mut row = Vec::with_capacity(n as usize + 1);
            for ch in part.trim().chars() {
                let v = ch
                    .to_digit(16)
                    .ok_or_else(|| ProjError::Parse(format!("bad scalar digit {ch:?}")))?;
                row.push(v as u8);
            }
            rows.push(row);
        }
        Subspace::span(field, n, &rows)
    }
}

/// Number of d-subspaces of PG(n,q): the Gaussian binomial
/// [n+1 choose d+1]_q, by the product formula.
pub fn gaussian(n: u8, q: u8, d: i32) -> u128 {
    if d < -1 || d > n as i32 {
        return 0;
    }
    let k = (d + 1) as u32;
    let a = n as u32 + 1;
    let mut num = 1u128;
    let mut den = 1u128;
    let qb = q as u128;
    for i in 0..k {
        num *= qb.pow(a - i) - 1;
        den *= qb.pow(i + 1) - 1;
    }
    num / den
}

/// Independent count of d-subspaces: sums q^(#free entries) over all
/// pivot-column choices of the canonical matrices.
pub fn enumerate_count(n: u8, q: u8, d: i32) -> u128 {
    if d < -1 || d > n as i32 {
        return 0;
    }
    let k = (d + 1) as usize;
    let cols = n as usize + 1;
    let mut total = 0u128;
    for pivots in linalg::combinations(cols, k) {
        let mut free = 0u32;
        for &p in &pivots {
            free += (p as usize + 1..cols)
                .filter(|c| !pivots.contains(&(*c as u8)))
                .count() as u32;
        }
        total += (q as u128).pow(free);
    }
    total
}

/// All d-subspaces of PG(n,q), exactly once, in lexicographic order of
/// their canonical matrices. The position in the returned list is the
/// enumeration index used by the search layer.
pub fn enumerate(field: &Arc<Field>, n: u8, d: i32) -> Result<Vec<Subspace>, ProjError> {
    if d < -1 || d > n as i32 {
        return Err(ProjError::DimensionOutOfRange(d, n));
    }
    let q = field.order();
    let k = (d + 1) as usize;
    let cols = n as usize + 1;
    let mut out = Vec::new();
    for pivots in linalg::combinations(cols, k) {
        let pivot_set: Vec<usize> = pivots.iter().map(|&p| p as usize).collect();
        // free slots in row-major order
        let mut slots = Vec::new();
        for (i, &p) in pivot_set.iter().enumerate() {
            for c in p + 1..cols {
                if !pivot_set.contains(&c) {
                    slots.push((i, c));
                }
            }
        }
        let total = (q as u64).pow(slots.len() as u32);
        for code in 0..total {
            let mut m = Mat::zeros(k, cols);
            for (i, &p) in pivot_set.iter().enumerate() {
                m.set(i, p, 1);
            }
            let mut rem = code;
            for &(i, c) in slots.iter().rev() {
                m.set(i, c, (rem % q as u64) as u8);
                rem /= q as u64;
            }
            out.push(Subspace::from_mat(field, n, m));
        }
    }
    out.sort_unstable_by(|a, b| a.mat.data().cmp(b.mat.data()));
    Ok(out)
}

/// The q+1 h-subspaces between a fixed (h−1)-subspace and (h+1)-subspace.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub vertex: Subspace,
    pub carrier: Subspace,
    pub members: Vec<Subspace>,
}

pub fn pencil(vertex: &Subspace, carrier: &Subspace) -> Result<Pencil, ProjError> {
    if carrier.dim() != vertex.dim() + 2 {
        return Err(ProjError::BadPencilShape(vertex.dim(), carrier.dim()));
    }
    let coords = IntervalCoords::new(vertex, carrier)?;
    let field = vertex.field().clone();
    let members = enumerate(&field, 1, 0)?
        .into_iter()
        .map(|p| coords.to_global(&p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Pencil {
        vertex: vertex.clone(),
        carrier: carrier.clone(),
        members,
    })
}

/// All pencils of h-subspaces of PG(n,q), keyed by (vertex, carrier).
pub fn all_pencils(field: &Arc<Field>, n: u8, h: i32) -> Result<Vec<Pencil>, ProjError> {
    if h < 0 || h > n as i32 - 1 {
        return Err(ProjError::DimensionOutOfRange(h, n));
    }
    let mut out = Vec::new();
    for carrier in enumerate(field, n, h + 1)? {
        let inner = IntervalCoords::new(&Subspace::empty(field, n), &carrier)?;
        for local_vertex in enumerate(field, (h + 1) as u8, h - 1)? {
            let vertex = inner.to_global(&local_vertex)?;
            out.push(pencil(&vertex, &carrier)?);
        }
    }
    Ok(out)
}

/// Coordinates for the interval [U,W]: subspaces between U and W
/// correspond to subspaces of PG(dim W − dim U − 1, q). The complement
/// of U inside W is fixed as the rows of W's canonical basis whose pivot
/// columns are not pivots of U, so the map is deterministic.
#[derive(Clone, Debug)]
pub struct IntervalCoords {
    lower: Subspace,
    upper: Subspace,
    complement: Mat,
    local_n: i32,
}

impl IntervalCoords {
    pub fn new(lower: &Subspace, upper: &Subspace) -> Result<IntervalCoords, ProjError> {
        lower.check_ambient(upper)?;
        if !upper.contains(lower) {
            return Err(ProjError::NotContained(
                "interval lower bound not inside upper".into(),
            ));
        }
        let lower_pivots: HashSet<usize> = lower.pivots().into_iter().collect();
        let rows: Vec<Vec<u8>> = upper
            .mat()
            .row_iter()
            .filter(|r| {
                let p = r.iter().position(|&v| v != 0).unwrap();
                !lower_pivots.contains(&p)
            })
            .map(|r| r.to_vec())
            .collect();
        debug_assert_eq!(rows.len(), upper.vdim() - lower.vdim());
        let complement = Mat::from_rows(rows, upper.ambient() as usize + 1);
        let local_n = upper.dim() - lower.dim() - 1;
        Ok(IntervalCoords {
            lower: lower.clone(),
            upper: upper.clone(),
            complement,
            local_n,
        })
    }

    pub fn lower(&self) -> &Subspace {
        &self.lower
    }

    pub fn upper(&self) -> &Subspace {
        &self.upper
    }

    /// Ambient dimension of the interval seen as a projective space.
    pub fn local_ambient(&self) -> i32 {
        self.local_n
    }

    /// Coordinates of X ∈ [U,W] as a subspace of PG(local_ambient, q);
    /// dimensions shift down by dim U + 1.
    pub fn to_local(&self, x: &Subspace) -> Result<Subspace, ProjError> {
        self.lower.check_ambient(x)?;
        if !x.contains(&self.lower) || !self.upper.contains(x) {
            return Err(ProjError::NotContained(
                "subspace not inside the interval".into(),
            ));
        }
        let f = self.lower.field();
        let k = self.complement.rows();
        let lower_pivots = self.lower.pivots();
        let comp_pivots: Vec<usize> = self
            .complement
            .row_iter()
            .map(|r| r.iter().position(|&v| v != 0).unwrap())
            .collect();
        let mut rows = Vec::new();
        for r in x.mat().row_iter() {
            // remove the U-component; what is left lies in the row space
            // of the complement and is read off at its pivot columns
            let reduced = self.lower.mat().reduce_vector(f, r, &lower_pivots);
            if reduced.iter().all(|&v| v == 0) {
                continue;
            }
            let coords: Vec<u8> = comp_pivots.iter().map(|&c| reduced[c]).collect();
            debug_assert_eq!(coords.len(), k);
            rows.push(coords);
        }
        Subspace::span(f, self.local_n.max(0) as u8, &rows)
    }

    /// Inverse of [`IntervalCoords::to_local`].
    pub fn to_global(&self, y: &Subspace) -> Result<Subspace, ProjError> {
        let f = self.lower.field();
        let cols = self.lower.ambient() as usize + 1;
        let mut rows: Vec<Vec<u8>> = self.lower.mat().row_iter().map(|r| r.to_vec()).collect();
        for yr in y.mat().row_iter() {
            let mut v = vec![0u8; cols];
            for (i, &coef) in yr.iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                for c in 0..cols {
                    v[c] = f.add_idx(v[c], f.mul_idx(coef, self.complement.at(i, c)));
                }
            }
            rows.push(v);
        }
        Subspace::span(f, self.lower.ambient(), &rows)
    }
}
