//! Exterior algebra over F_q^{n+1}: multivectors, alternating forms,
//! the Plücker embedding and its inverse, and contraction.
//!
//! Coefficients are indexed by strictly increasing tuples in
//! lexicographic order; that order is part of the serialized form
//! syntax, so it must never change.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{self, Mat};
use crate::projspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grade/degree mismatch: {0}")]
    GradeMismatch(String),
    #[error("coefficient list has length {got}, expected {expected}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("scalar index {idx} out of range for GF({q})")]
    ScalarOutOfRange { idx: u8, q: u8 },
    #[error("the zero multivector has no associated subspace")]
    ZeroMultiVector,
    #[error("multivector is not decomposable")]
    NotDecomposable,
    #[error("the empty subspace has no Plücker image")]
    EmptySubspace,
    #[error("ambient spaces differ")]
    AmbientMismatch,
    #[error("cannot parse form literal: {0}")]
    Parse(String),
}

/// Lexicographic rank of a strictly increasing tuple over {0..n1-1}.
pub(crate) fn tuple_rank(n1: usize, tuple: &[u8]) -> usize {
    let k = tuple.len();
    let mut rank = 0usize;
    let mut prev: i32 = -1;
    for (i, &t) in tuple.iter().enumerate() {
        for v in (prev + 1) as usize..t as usize {
            rank += linalg::binomial(n1 - 1 - v, k - 1 - i);
        }
        prev = t as i32;
    }
    rank
}

fn check_coeffs(field: &Field, n: u8, k: u8, coeffs: &[u8]) -> Result<(), ExtError> {
    let expected = linalg::binomial(n as usize + 1, k as usize);
    if coeffs.len() != expected {
        return Err(ExtError::CoefficientCount {
            expected,
            got: coeffs.len(),
        });
    }
    let q = field.order();
    if let Some(&idx) = coeffs.iter().find(|&&x| x >= q) {
        return Err(ExtError::ScalarOutOfRange { idx, q });
    }
    Ok(())
}

fn normalize_coeffs(field: &Field, coeffs: &mut [u8]) {
    if let Some(lead) = coeffs.iter().position(|&x| x != 0) {
        let inv = field.inv_idx(coeffs[lead]);
        if inv != 1 {
            for c in coeffs.iter_mut() {
                *c = field.mul_idx(*c, inv);
            }
        }
    }
}

/// A grade-k element of Λ^k F_q^{n+1}, one coefficient per increasing
/// k-tuple.
#[derive(Clone)]
pub struct MultiVector {
    field: Arc<Field>,
    n: u8,
    grade: u8,
    coeffs: Vec<u8>,
}

impl PartialEq for MultiVector {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.grade == other.grade
            && self.field.order() == other.field.order()
            && self.coeffs == other.coeffs
    }
}

impl Eq for MultiVector {}

impl std::hash::Hash for MultiVector {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.n, self.grade, self.field.order()).hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultiVector(n={}, grade={}, [{:?}])",
            self.n, self.grade, self.coeffs
        )
    }
}

impl MultiVector {
    pub fn new(field: &Arc<Field>, n: u8, grade: u8, coeffs: Vec<u8>) -> Result<Self, ExtError> {
        check_coeffs(field, n, grade, &coeffs)?;
        Ok(MultiVector {
            field: field.clone(),
            n,
            grade,
            coeffs,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> u8 {
        self.n
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, tuple: &[u8]) -> u8 {
        self.coeffs[tuple_rank(self.n as usize + 1, tuple)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Scales so the first nonzero coefficient is 1.
    pub fn normalize(mut self) -> Self {
        normalize_coeffs(&self.field, &mut self.coeffs);
        self
    }

    /// Wedge `self ∧ v` with a single vector, one grade up.
    pub fn wedge_vector(&self, v: &[u8]) -> Result<MultiVector, ExtError> {
        let n1 = self.n as usize + 1;
        if v.len() != n1 {
            return Err(ExtError::LengthMismatch {
                expected: n1,
                got: v.len(),
            });
        }
        let f = &self.field;
        let k = self.grade as usize;
        let out_tuples = linalg::combinations(n1, k + 1);
        let mut out = vec![0u8; out_tuples.len()];
        for (s_idx, s) in out_tuples.iter().enumerate() {
            let mut acc = 0u8;
            for (pos, &j) in s.iter().enumerate() {
                if v[j as usize] == 0 {
                    continue;
                }
                let rest: Vec<u8> = s.iter().copied().filter(|&t| t != j).collect();
                let p = self.coeffs[tuple_rank(n1, &rest)];
                if p == 0 {
                    continue;
                }
                let term = f.mul_idx(v[j as usize], p);
                // e_rest ∧ e_j picks up a sign for every element above j
                let above = k - pos;
                let term = if above.is_multiple_of(2) {
                    term
                } else {
                    f.neg_idx(term)
                };
                acc = f.add_idx(acc, term);
            }
            out[s_idx] = acc;
        }
        MultiVector::new(f, self.n, self.grade + 1, out)
    }
}

/// Wedge product of coordinate vectors: the coefficient at a tuple T is
/// the corresponding maximal minor of the stacked matrix.
pub fn wedge(field: &Arc<Field>, vectors: &[Vec<u8>]) -> Result<MultiVector, ExtError> {
    let k = vectors.len();
    if k == 0 {
        return Err(ExtError::GradeMismatch("wedge of no vectors".into()));
    }
    let n1 = vectors[0].len();
    for v in vectors {
        if v.len() != n1 {
            return Err(ExtError::LengthMismatch {
                expected: n1,
                got: v.len(),
            });
        }
        if let Some(&idx) = v.iter().find(|&&x| x >= field.order()) {
            return Err(ExtError::ScalarOutOfRange {
                idx,
                q: field.order(),
            });
        }
    }
    let tuples = linalg::combinations(n1, k);
    let mut coeffs = vec![0u8; tuples.len()];
    for (t_idx, t) in tuples.iter().enumerate() {
        let mut minor = Mat::zeros(k, k);
        for (r, v) in vectors.iter().enumerate() {
            for (c, &col) in t.iter().enumerate() {
                minor.set(r, c, v[col as usize]);
            }
        }
        coeffs[t_idx] = minor.det(field);
    }
    MultiVector::new(field, n1 as u8 - 1, k as u8, coeffs)
}

/// Plücker image of an h-subspace: the normalized wedge of its canonical
/// basis. Injective on h-subspaces because the basis is canonical.
pub fn pluecker(x: &Subspace) -> Result<MultiVector, ExtError> {
    if x.is_empty() {
        return Err(ExtError::EmptySubspace);
    }
    let rows: Vec<Vec<u8>> = x.basis().map(|r| r.to_vec()).collect();
    Ok(wedge(x.field(), &rows)?.normalize())
}

/// Inverse of the Plücker embedding, decided by the annihilator rank:
/// p is decomposable iff {v : v ∧ p = 0} has vector dimension equal to
/// the grade, in which case that space is the subspace sought.
pub fn unpluecker(p: &MultiVector) -> Result<Subspace, ExtError> {
    if p.is_zero() {
        return Err(ExtError::ZeroMultiVector);
    }
    let n1 = p.n as usize + 1;
    let k = p.grade as usize;
    let f = &p.field;
    let out_tuples = linalg::combinations(n1, k + 1);
    // rows: coefficients of v ↦ (v ∧ p)_S, one row per (k+1)-tuple S
    let mut m = Mat::zeros(out_tuples.len(), n1);
    for (s_idx, s) in out_tuples.iter().enumerate() {
        for (pos, &j) in s.iter().enumerate() {
            let rest: Vec<u8> = s.iter().copied().filter(|&t| t != j).collect();
            let coeff = p.coeffs[tuple_rank(n1, &rest)];
            let signed = if pos % 2 == 0 {
                coeff
            } else {
                f.neg_idx(coeff)
            };
            m.set(s_idx, j as usize, signed);
        }
    }
    let ker = m.kernel(f);
    if ker.rows() != k {
        return Err(ExtError::NotDecomposable);
    }
    let rows: Vec<Vec<u8>> = (0..ker.rows()).map(|r| ker.row(r).to_vec()).collect();
    Subspace::span(f, p.n, &rows).map_err(|_| ExtError::NotDecomposable)
}

/// An alternating m-form on F_q^{n+1}, one coefficient per increasing
/// m-tuple of the dual basis.
#[derive(Clone)]
pub struct AlternatingForm {
    field: Arc<Field>,
    n: u8,
    degree: u8,
    coeffs: Vec<u8>,
}

impl PartialEq for AlternatingForm {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.degree == other.degree
            && self.field.order() == other.field.order()
            && self.coeffs == other.coeffs
    }
}

impl Eq for AlternatingForm {}

impl std::hash::Hash for AlternatingForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.n, self.degree, self.field.order()).hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for AlternatingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AlternatingForm(n={}, degree={}, \"{}\")",
            self.n, self.degree, self
        )
    }
}

impl AlternatingForm {
    pub fn new(field: &Arc<Field>, n: u8, degree: u8, coeffs: Vec<u8>) -> Result<Self, ExtError> {
        check_coeffs(field, n, degree, &coeffs)?;
        Ok(AlternatingForm {
            field: field.clone(),
            n,
            degree,
            coeffs,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> u8 {
        self.n
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, tuple: &[u8]) -> u8 {
        self.coeffs[tuple_rank(self.n as usize + 1, tuple)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn normalize(mut self) -> Self {
        normalize_coeffs(&self.field, &mut self.coeffs);
        self
    }

    /// Pairing with a multivector of the same grade: Σ_T f_T p_T.
    pub fn pair(&self, p: &MultiVector) -> Result<u8, ExtError> {
        if self.degree != p.grade || self.n != p.n {
            return Err(ExtError::GradeMismatch(format!(
                "pairing degree {} with grade {}",
                self.degree, p.grade
            )));
        }
        let f = &self.field;
        let mut acc = 0u8;
        for (a, b) in self.coeffs.iter().zip(&p.coeffs) {
            acc = f.add_idx(acc, f.mul_idx(*a, *b));
        }
        Ok(acc)
    }

    /// Direct evaluation on m vectors: Σ_T f_T · det(minor on columns T).
    pub fn evaluate(&self, vectors: &[Vec<u8>]) -> Result<u8, ExtError> {
        if vectors.len() != self.degree as usize {
            return Err(ExtError::GradeMismatch(format!(
                "evaluating a degree-{} form on {} vectors",
                self.degree,
                vectors.len()
            )));
        }
        let w = wedge(&self.field, vectors)?;
        self.pair(&w)
    }

    /// Exterior product of forms.
    pub fn wedge(&self, other: &AlternatingForm) -> Result<AlternatingForm, ExtError> {
        if self.n != other.n || self.field.order() != other.field.order() {
            return Err(ExtError::AmbientMismatch);
        }
        let f = &self.field;
        let n1 = self.n as usize + 1;
        let (a, b) = (self.degree as usize, other.degree as usize);
        let out_tuples = linalg::combinations(n1, a + b);
        let mut out = vec![0u8; out_tuples.len()];
        for (s_idx, s) in out_tuples.iter().enumerate() {
            let mut acc = 0u8;
            for left in linalg::combinations(a + b, a) {
                let left_set: Vec<u8> = left.iter().map(|&i| s[i as usize]).collect();
                let right_set: Vec<u8> = (0..a + b)
                    .filter(|i| !left.contains(&(*i as u8)))
                    .map(|i| s[i])
                    .collect();
                let ca = self.coeffs[tuple_rank(n1, &left_set)];
                if ca == 0 {
                    continue;
                }
                let cb = other.coeffs[tuple_rank(n1, &right_set)];
                if cb == 0 {
                    continue;
                }
                // sign of the shuffle (left, right) relative to sorted order
                let mut inversions = 0usize;
                for &x in &left_set {
                    inversions += right_set.iter().filter(|&&y| y < x).count();
                }
                let term = f.mul_idx(ca, cb);
                let term = if inversions.is_multiple_of(2) {
                    term
                } else {
                    f.neg_idx(term)
                };
                acc = f.add_idx(acc, term);
            }
            out[s_idx] = acc;
        }
        AlternatingForm::new(f, self.n, (a + b) as u8, out)
    }

    /// Form literal, e.g. `012+2*034`; `0` for the zero form. Indices at
    /// or above 10 are written in parenthesized decimal.
    pub fn to_literal(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let n1 = self.n as usize + 1;
        let tuples = linalg::combinations(n1, self.degree as usize);
        let mut terms = Vec::new();
        for (t, tuple) in tuples.iter().enumerate() {
            let c = self.coeffs[t];
            if c == 0 {
                continue;
            }
            let mut s = String::new();
            if c != 1 {
                s.push_str(&format!("{c}*"));
            }
            for &i in tuple {
                if i < 10 {
                    s.push(char::from_digit(i as u32, 10).unwrap());
                } else {
                    s.push_str(&format!("({i})"));
                }
            }
            terms.push(s);
        }
        terms.join("+")
    }

    /// Parses the literal syntax produced by [`AlternatingForm::to_literal`].
    pub fn parse(field: &Arc<Field>, n: u8, degree: u8, text: &str) -> Result<Self, ExtError> {
        let n1 = n as usize + 1;
        let count = linalg::binomial(n1, degree as usize);
        let mut coeffs = vec![0u8; count];
        let text = text.trim();
        if text.is_empty() {
            return Err(ExtError::Parse("empty literal".into()));
        }
        // "0" denotes the zero form, except at degree 1 where it can only
        // mean the single-index term e*_0
        if text == "0" && degree != 1 {
            return AlternatingForm::new(field, n, degree, coeffs);
        }
        for term in text.split('+') {
            let term = term.trim();
            let (coeff, idx_part) = match term.split_once('*') {
                Some((c, rest)) => {
                    let c: u8 = c
                        .trim()
                        .parse()
                        .map_err(|_| ExtError::Parse(format!("bad coefficient in {term:?}")))?;
                    (c, rest.trim())
                }
                None => (1, term),
            };
            if coeff >= field.order() {
                return Err(ExtError::ScalarOutOfRange {
                    idx: coeff,
                    q: field.order(),
                });
            }
            let mut tuple = Vec::new();
            let mut chars = idx_part.chars().peekable();
            while let Some(ch) = chars.next() {
                if ch == '(' {
                    let mut num = String::new();
                    for c in chars.by_ref() {
                        if c == ')' {
                            break;
                        }
                        num.push(c);
                    }
                    let v: u8 = num
                        .parse()
                        .map_err(|_| ExtError::Parse(format!("bad index ({num})")))?;
                    tuple.push(v);
                } else if let Some(d) = ch.to_digit(10) {
                    tuple.push(d as u8);
                } else {
                    return Err(ExtError::Parse(format!("unexpected character {ch:?}")));
                }
            }
            if tuple.len() != degree as usize {
                return Err(ExtError::Parse(format!(
                    "term {term:?} has {} indices, expected {degree}",
                    tuple.len()
                )));
            }
            if tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ExtError::Parse(format!(
                    "indices in {term:?} must be ascending"
                )));
            }
            if tuple.iter().any(|&i| i as usize >= n1) {
                return Err(ExtError::Parse(format!("index out of range in {term:?}")));
            }
            let r = tuple_rank(n1, &tuple);
            if coeffs[r] != 0 {
                return Err(ExtError::Parse(format!("tuple repeated in term {term:?}")));
            }
            coeffs[r] = coeff;
        }
        AlternatingForm::new(field, n, degree, coeffs)
    }
}

impl fmt::Display for AlternatingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

/// Contraction of a degree-m form by a grade-(m−1) multivector: the
/// covector w ↦ f(u_0, …, u_{m−2}, w), extended linearly from
/// decomposables. Contracting e*_S by e_T with S = T ∪ {k} yields
/// (−1)^(#{s ∈ S : s > k}) e*_k.
pub fn contract(f: &AlternatingForm, p: &MultiVector) -> Result<Vec<u8>, ExtError> {
    if p.grade + 1 != f.degree || f.n != p.n {
        return Err(ExtError::GradeMismatch(format!(
            "contracting degree {} by grade {}",
            f.degree, p.grade
        )));
    }
    let field = &f.field;
    let n1 = f.n as usize + 1;
    let tuples = linalg::combinations(n1, p.grade as usize);
    let mut out = vec![0u8; n1];
    for (t_idx, t) in tuples.iter().enumerate() {
        let pt = p.coeffs[t_idx];
        if pt == 0 {
            continue;
        }
        for k in 0..n1 as u8 {
            if t.contains(&k) {
                continue;
            }
            let mut s: Vec<u8> = t.clone();
            s.push(k);
            s.sort_unstable();
            let fc = f.coeffs[tuple_rank(n1, &s)];
            if fc == 0 {
                continue;
            }
            let above = t.iter().filter(|&&x| x > k).count();
            let term = field.mul_idx(pt, fc);
            let term = if above % 2 == 0 {
                term
            } else {
                field.neg_idx(term)
            };
            out[k as usize] = field.add_idx(out[k as usize], term);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projspace::{self, enumerate};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn f(q: u8) -> Arc<Field> {
        Field::shared(q).unwrap()
    }

    fn basis_vec(n: u8, i: usize) -> Vec<u8> {
        let mut v = vec![0u8; n as usize + 1];
        v[i] = 1;
        v
    }

    #[test]
    fn wedge_basis_vectors() {
        let f2 = f(2);
        let w = wedge(&f2, &[basis_vec(3, 0), basis_vec(3, 1)]).unwrap();
        assert_eq!(w.coeff(&[0, 1]), 1);
        assert_eq!(w.coeffs().iter().filter(|&&c| c != 0).count(), 1);
    }

    #[test]
    fn wedge_repeated_vector_is_zero() {
        let f3 = f(3);
        let w = wedge(&f3, &[basis_vec(3, 0), basis_vec(3, 0)]).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn wedge_hand_minors() {
        let f2 = f(2);
        let w = wedge(&f2, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(w.coeff(&[0, 1]), 1);
        assert_eq!(w.coeff(&[0, 2]), 1);
        assert_eq!(w.coeff(&[1, 2]), 1);
        assert_eq!(w.coeff(&[0, 3]), 0);
        assert_eq!(w.coeff(&[1, 3]), 0);
        assert_eq!(w.coeff(&[2, 3]), 0);
    }

    #[test]
    fn wedge_length_mismatch() {
        let f2 = f(2);
        assert!(matches!(
            wedge(&f2, &[vec![1, 0, 0, 0], vec![1, 0]]),
            Err(ExtError::LengthMismatch { .. })
        ));
    }

    fn klein_value(field: &Field, p: &MultiVector) -> u8 {
        // p01·p23 − p02·p13 + p03·p12
        let a = field.mul_idx(p.coeff(&[0, 1]), p.coeff(&[2, 3]));
        let b = field.mul_idx(p.coeff(&[0, 2]), p.coeff(&[1, 3]));
        let c = field.mul_idx(p.coeff(&[0, 3]), p.coeff(&[1, 2]));
        field.add_idx(field.sub_idx(a, b), c)
    }

    #[test]
    fn pluecker_injective_and_on_quadric() {
        let f2 = f(2);
        let lines = enumerate(&f2, 3, 1).unwrap();
        assert_eq!(lines.len(), 35);
        let mut seen = HashSet::new();
        for l in &lines {
            let p = pluecker(l).unwrap();
            assert_eq!(klein_value(&f2, &p), 0);
            assert!(seen.insert(p.coeffs().to_vec()));
        }
    }

    #[test]
    fn pluecker_of_empty_fails() {
        let f2 = f(2);
        let empty = Subspace::empty(&f2, 3);
        assert!(matches!(pluecker(&empty), Err(ExtError::EmptySubspace)));
    }

    #[test]
    fn unpluecker_examples() {
        let f2 = f(2);
        let line = Subspace::span(&f2, 3, &[basis_vec(3, 0), basis_vec(3, 1)]).unwrap();
        let p = pluecker(&line).unwrap();
        assert_eq!(unpluecker(&p).unwrap(), line);

        // e01 + e23 fails the Klein relation
        let mut coeffs = vec![0u8; 6];
        coeffs[tuple_rank(4, &[0, 1])] = 1;
        coeffs[tuple_rank(4, &[2, 3])] = 1;
        let bad = MultiVector::new(&f2, 3, 2, coeffs).unwrap();
        assert_eq!(klein_value(&f2, &bad), 1);
        assert!(matches!(unpluecker(&bad), Err(ExtError::NotDecomposable)));

        let zero = MultiVector::new(&f2, 3, 2, vec![0; 6]).unwrap();
        assert!(matches!(unpluecker(&zero), Err(ExtError::ZeroMultiVector)));
    }

    #[test]
    fn unpluecker_roundtrip_exhaustive() {
        let f2 = f(2);
        for l in enumerate(&f2, 3, 1).unwrap() {
            assert_eq!(unpluecker(&pluecker(&l).unwrap()).unwrap(), l);
        }
        for pl in enumerate(&f2, 4, 2).unwrap() {
            assert_eq!(unpluecker(&pluecker(&pl).unwrap()).unwrap(), pl);
        }
    }

    #[test]
    fn grade2_decomposable_iff_klein_vanishes() {
        // all 63 nonzero grade-2 multivectors over F_2^4
        let f2 = f(2);
        for bits in 1u32..64 {
            let coeffs: Vec<u8> = (0..6).map(|i| ((bits >> i) & 1) as u8).collect();
            let p = MultiVector::new(&f2, 3, 2, coeffs).unwrap();
            let decomposable = unpluecker(&p).is_ok();
            assert_eq!(decomposable, klein_value(&f2, &p) == 0, "bits={bits}");
        }
    }

    #[test]
    fn contract_examples() {
        let f2 = f(2);
        let form = AlternatingForm::parse(&f2, 3, 3, "012").unwrap();
        let p01 = pluecker(&Subspace::span(&f2, 3, &[basis_vec(3, 0), basis_vec(3, 1)]).unwrap())
            .unwrap();
        assert_eq!(contract(&form, &p01).unwrap(), vec![0, 0, 1, 0]);

        let p03 = pluecker(&Subspace::span(&f2, 3, &[basis_vec(3, 0), basis_vec(3, 3)]).unwrap())
            .unwrap();
        assert_eq!(contract(&form, &p03).unwrap(), vec![0, 0, 0, 0]);

        let wrong = pluecker(&Subspace::span(&f2, 3, &[basis_vec(3, 0)]).unwrap()).unwrap();
        assert!(matches!(
            contract(&form, &wrong),
            Err(ExtError::GradeMismatch(..))
        ));
    }

    #[test]
    fn contract_sign_convention_q3() {
        // f = e*_{012} over GF(3), contracted by e_{02}: the survivor is
        // k = 1 with #{s ∈ {0,1,2} : s > 1} = 1, so the covector is −e*_1.
        let f3 = f(3);
        let form = AlternatingForm::parse(&f3, 3, 3, "012").unwrap();
        let p02 = pluecker(&Subspace::span(&f3, 3, &[basis_vec(3, 0), basis_vec(3, 2)]).unwrap())
            .unwrap();
        assert_eq!(contract(&form, &p02).unwrap(), vec![0, 2, 0, 0]);
        // agrees with direct evaluation f(e0, e2, e1) = −1
        assert_eq!(
            form.evaluate(&[basis_vec(3, 0), basis_vec(3, 2), basis_vec(3, 1)])
                .unwrap(),
            2
        );
    }

    #[test]
    fn pairing_matches_direct_evaluation() {
        // ⟨f, pluecker(X)⟩ = f(basis of X) on random forms and subspaces
        for q in [2u8, 3] {
            let fq = f(q);
            for n in 3..=5u8 {
                let planes = enumerate(&fq, n, 2).unwrap();
                let dim = crate::linalg::binomial(n as usize + 1, 3);
                for trial in 0..40u64 {
                    let coeffs: Vec<u8> = (0..dim)
                        .map(|i| ((trial * 7 + i as u64 * 13) % q as u64) as u8)
                        .collect();
                    let form = AlternatingForm::new(&fq, n, 3, coeffs).unwrap();
                    let x = &planes[(trial as usize * 37) % planes.len()];
                    let rows: Vec<Vec<u8>> = x.basis().map(|r| r.to_vec()).collect();
                    assert_eq!(
                        form.pair(&pluecker(x).unwrap()).unwrap(),
                        form.evaluate(&rows).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn pencils_map_to_collinear_points() {
        for (n, h) in [(3u8, 1i32), (4, 2)] {
            let f2 = f(2);
            for pencil in projspace::all_pencils(&f2, n, h).unwrap() {
                let rows: Vec<Vec<u8>> = pencil
                    .members
                    .iter()
                    .map(|m| pluecker(m).unwrap().coeffs().to_vec())
                    .collect();
                let cols = rows[0].len();
                let mut m = crate::linalg::Mat::from_rows(rows, cols);
                m.rref(&f2);
                assert_eq!(
                    m.rows(),
                    2,
                    "pencil image must be a line of the Plücker space"
                );
            }
        }
    }

    #[test]
    fn form_wedge_matches_evaluation() {
        // (f ∧ g)(v_0..v_{a+b-1}) via the pairing, checked against the
        // shuffle-sum definition on a GF(3) example with signs.
        let f3 = f(3);
        let fa = AlternatingForm::parse(&f3, 3, 1, "2*0+1").unwrap();
        let fb = AlternatingForm::parse(&f3, 3, 2, "12+2*03").unwrap();
        let w = fa.wedge(&fb).unwrap();
        assert_eq!(w.degree(), 3);
        // evaluate both sides on a few triples of vectors
        let vs = [
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]],
            vec![vec![1, 2, 0, 1], vec![0, 1, 1, 0], vec![2, 0, 1, 1]],
            vec![vec![1, 1, 1, 1], vec![0, 1, 2, 0], vec![0, 0, 1, 2]],
        ];
        for v in &vs {
            // direct antisymmetrized sum: Σ_σ sign(σ) fa(v_σ(0)) fb(v_σ(1), v_σ(2)) / (1!·2!)
            // over the 3 shuffles picking which vector feeds fa
            let mut expect = 0u8;
            for pick in 0..3usize {
                let rest: Vec<usize> = (0..3).filter(|&i| i != pick).collect();
                let va = fa.evaluate(&[v[pick].clone()]).unwrap();
                let vb = fb
                    .evaluate(&[v[rest[0]].clone(), v[rest[1]].clone()])
                    .unwrap();
                let term = f3.mul_idx(va, vb);
                let term = if pick % 2 == 0 {
                    term
                } else {
                    f3.neg_idx(term)
                };
                expect = f3.add_idx(expect, term);
            }
            assert_eq!(w.evaluate(v).unwrap(), expect);
        }
    }

    #[test]
    fn literal_roundtrip() {
        let f3 = f(3);
        let form = AlternatingForm::parse(&f3, 4, 3, "012+2*034+134").unwrap();
        assert_eq!(form.to_literal(), "012+2*034+134");
        assert_eq!(
            AlternatingForm::parse(&f3, 4, 3, &form.to_literal()).unwrap(),
            form
        );
        assert!(AlternatingForm::parse(&f3, 4, 3, "021").is_err());
        assert!(AlternatingForm::parse(&f3, 4, 3, "01").is_err());
        assert!(AlternatingForm::parse(&f3, 4, 3, "5*012").is_err());
        let zero = AlternatingForm::parse(&f3, 4, 3, "0").unwrap();
        assert!(zero.is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn contract_agrees_with_wedge_pairing(
            q in prop::sample::select(vec![2u8, 3]),
            fc in prop::collection::vec(0u8..3, 10),
            pc in prop::collection::vec(0u8..3, 10),
            wv in prop::collection::vec(0u8..3, 5),
        ) {
            // contract(f, p)(w) = ⟨f, p ∧ w⟩ at n = 4, degree 3
            let field = f(q);
            let clip = |v: &[u8]| -> Vec<u8> { v.iter().map(|&x| x % q).collect() };
            let form = AlternatingForm::new(&field, 4, 3, clip(&fc)).unwrap();
            let p = MultiVector::new(&field, 4, 2, clip(&pc)).unwrap();
            let w = clip(&wv);
            let cov = contract(&form, &p).unwrap();
            let mut lhs = 0u8;
            for (a, b) in cov.iter().zip(&w) {
                lhs = field.add_idx(lhs, field.mul_idx(*a, *b));
            }
            let rhs = form.pair(&p.wedge_vector(&w).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_is_alternating_multilinear(
            vs in prop::collection::vec(prop::collection::vec(0u8..3, 5), 3),
            fc in prop::collection::vec(0u8..3, 10),
        ) {
            let field = f(3);
            let form = AlternatingForm::new(&field, 4, 3, fc).unwrap();
            let v: Vec<Vec<u8>> = vs.iter().map(|r| r.iter().map(|&x| x % 3).collect()).collect();
            // swapping two arguments negates the value
            let base = form.evaluate(&v).unwrap();
            let swapped = form.evaluate(&[v[1].clone(), v[0].clone(), v[2].clone()]).unwrap();
            prop_assert_eq!(field.neg_idx(base), swapped);
            // repeating an argument kills it
            let repeated = form.evaluate(&[v[0].clone(), v[0].clone(), v[2].clone()]).unwrap();
            prop_assert_eq!(repeated, 0);
        }
    }
}
