//! Finite-dimensional Lie algebras over the rationals.
//!
//! Structure constants are stored sparsely, one entry per basis pair `(i, j)`
//! with `i < j`; the opposite order follows from antisymmetry. Every
//! structural question (Jacobi, derivations, rank, centre) is answered with
//! exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, span_basis, unit_vector, QMatrix, Rational};

/// Raw structure constants, not necessarily satisfying Jacobi.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    /// `(i, j) -> [(k, c)]` with `i < j`, `k` ascending, `c != 0`.
    entries: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl StructureConstants {
    pub fn new(dim: usize) -> Self {
        StructureConstants { dim, entries: BTreeMap::new() }
    }

    /// Adds `c * X_k` to `[X_i, X_j]` (0-based). Entries with `i > j` are
    /// stored as their antisymmetric counterpart.
    pub fn add(&mut self, i: usize, j: usize, k: usize, c: Rational) -> Result<()> {
        if i >= self.dim || j >= self.dim || k >= self.dim {
            return Err(Error::InvalidBracket(format!("index out of range in [{i},{j}] -> {k}")));
        }
        if i == j {
            return Err(Error::InvalidBracket(format!("[X{i}, X{i}] must vanish")));
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let terms = self.entries.entry(key).or_default();
        match terms.binary_search_by_key(&k, |(kk, _)| *kk) {
            Ok(pos) => {
                terms[pos].1 += c;
                if terms[pos].1.is_zero() {
                    terms.remove(pos);
                }
            }
            Err(pos) if !c.is_zero() => terms.insert(pos, (k, c)),
            Err(_) => {}
        }
        if terms.is_empty() {
            self.entries.remove(&key);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored `(i, j, k, c)` entries with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.entries.iter().flat_map(|(&(i, j), t)| t.iter().map(move |(k, c)| (i, j, *k, c)))
    }

    /// Number of basis pairs `i < j` with a nonzero bracket.
    pub fn num_brackets(&self) -> usize {
        self.entries.len()
    }

    /// `[X_i, X_j]` as a dense coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let (key, sign) = if i < j { ((i, j), false) } else { ((j, i), true) };
        if let Some(terms) = self.entries.get(&key) {
            for (k, c) in terms {
                out[*k] = if sign { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    /// Dense tensor `t[i][j][k]`, coefficient of `X_k` in `[X_i, X_j]`.
    pub fn dense(&self) -> Vec<Vec<Vec<Rational>>> {
        let n = self.dim;
        let mut t = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, k, c) in self.entries() {
            t[i][j][k] = c.clone();
            t[j][i][k] = -c.clone();
        }
        t
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        for w in [u, v] {
            if w.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: w.len() });
            }
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (i, j, k, c) in self.entries() {
            let coeff = &u[i] * &v[j] - &u[j] * &v[i];
            if !coeff.is_zero() {
                out[k] += coeff * c;
            }
        }
        Ok(out)
    }

    /// Nonzero terms of `[X_i, X_j]` and whether they must be negated.
    fn terms(&self, i: usize, j: usize) -> (&[(usize, Rational)], bool) {
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        (self.entries.get(&key).map_or(&[][..], Vec::as_slice), neg)
    }

    /// Adds `scale * [X_i, X_j]` into `acc`.
    fn accumulate(&self, acc: &mut [Rational], scale: &Rational, i: usize, j: usize) {
        if i == j || scale.is_zero() {
            return;
        }
        let (terms, neg) = self.terms(i, j);
        for (k, c) in terms {
            if neg {
                acc[*k] -= scale * c;
            } else {
                acc[*k] += scale * c;
            }
        }
    }

    /// Maximum absolute coefficient of `[[X_i,X_j],X_k] + cyclic` over all triples.
    pub fn jacobi_defect(&self) -> Rational {
        let n = self.dim;
        let mut worst = Rational::zero();
        let mut acc = vec![Rational::zero(); n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    acc.iter_mut().for_each(|x| x.set_zero());
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let (terms, neg) = self.terms(a, b);
                        for (m, coeff) in terms {
                            let coeff = if neg { -coeff.clone() } else { coeff.clone() };
                            self.accumulate(&mut acc, &coeff, *m, c);
                        }
                    }
                    for v in &acc {
                        if v.abs() > worst {
                            worst = v.abs();
                        }
                    }
                }
            }
        }
        worst
    }
}

impl fmt::Debug for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for ((i, j), terms) in &self.entries {
            let t: Vec<String> = terms.iter().map(|(k, c)| format!("{} X{}", format_rational(c), k + 1)).collect();
            m.entry(&format!("[X{},X{}]", i + 1, j + 1), &t.join(" + "));
        }
        m.finish()
    }
}

/// A Lie algebra: structure constants that passed the Jacobi check.
#[derive(Clone)]
pub struct LieAlgebra {
    labels: Vec<String>,
    structure: StructureConstants,
}

impl PartialEq for LieAlgebra {
    /// Bracket-by-bracket equality; labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.structure == other.structure
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}) {:?}", self.dim(), self.structure)
    }
}

impl LieAlgebra {
    pub fn new(structure: StructureConstants) -> Result<Self> {
        let labels = (1..=structure.dim()).map(|i| format!("X{i}")).collect();
        Self::with_labels(structure, labels)
    }

    pub fn with_labels(structure: StructureConstants, labels: Vec<String>) -> Result<Self> {
        if labels.len() != structure.dim() {
            return Err(Error::DimensionMismatch { expected: structure.dim(), got: labels.len() });
        }
        let defect = structure.jacobi_defect();
        if !defect.is_zero() {
            return Err(Error::JacobiViolated { defect: format_rational(&defect) });
        }
        Ok(LieAlgebra { labels, structure })
    }

    /// Builds from 0-based `(i, j, k, c)` entries meaning `[X_i, X_j] += c X_k`.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut s = StructureConstants::new(dim);
        for (i, j, k, c) in entries {
            s.add(i, j, k, c)?;
        }
        Self::new(s)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(StructureConstants::new(dim)).expect("abelian algebra satisfies Jacobi")
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn num_brackets(&self) -> usize {
        self.structure.num_brackets()
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        self.structure.bracket(u, v)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        self.structure.bracket_basis(i, j)
    }

    pub fn jacobi_defect(&self) -> Rational {
        self.structure.jacobi_defect()
    }

    /// Matrix of `ad_{X_i}`: column `j` holds `[X_i, X_j]`.
    pub fn ad(&self, i: usize) -> QMatrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim()).map(|j| self.bracket_basis(i, j)).collect();
        QMatrix::from_columns(&cols).expect("square")
    }

    pub fn ad_vector(&self, v: &[Rational]) -> Result<QMatrix> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let mut m = QMatrix::zeros(n, n);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.ad(i).scale(c))?;
            }
        }
        Ok(m)
    }

    /// Terms `n⁽⁰⁾ = n ⊇ n⁽¹⁾ = [n, n] ⊇ …` until the series stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let n = self.dim();
        let mut terms = vec![Subspace::full(n)];
        loop {
            let prev = terms.last().expect("nonempty");
            if prev.dim() == 0 {
                break;
            }
            let mut gens = Vec::new();
            for i in 0..n {
                let ei = unit_vector(n, i);
                for v in prev.basis() {
                    let b = self.bracket(&ei, v).expect("dims agree");
                    if b.iter().any(|x| !x.is_zero()) {
                        gens.push(b);
                    }
                }
            }
            let next = Subspace::from_echelon(n, span_basis(&gens, n));
            if next.dim() == prev.dim() {
                break;
            }
            terms.push(next);
        }
        terms
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(|s| s.dim() == 0)
    }

    /// `n⁽ⁿ⁻²⁾ ≠ 0`. Algebras of dimension below 3 are not considered filiform.
    pub fn is_filiform(&self) -> Result<bool> {
        let series = self.lower_central_series();
        if series.last().is_some_and(|s| s.dim() != 0) {
            return Err(Error::NotNilpotent);
        }
        let n = self.dim();
        if n < 3 {
            return Ok(false);
        }
        Ok(series.get(n - 2).is_some_and(|s| s.dim() > 0))
    }

    /// Exact nullspace of the joint adjoint action.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            rows.extend(self.ad(i).rows_vec());
        }
        let m = QMatrix::from_rows(rows).expect("rectangular");
        Subspace::from_independent(n, m.nullspace())
    }

    /// `B(X_i, X_j) = Tr(ad_{X_i} ad_{X_j})`.
    pub fn killing_form(&self) -> QMatrix {
        let n = self.dim();
        let ads: Vec<QMatrix> = (0..n).map(|i| self.ad(i)).collect();
        let mut b = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).expect("square").trace();
                b[(i, j)] = t.clone();
                b[(j, i)] = t;
            }
        }
        b
    }

    /// `D[X_i,X_j] − [DX_i,X_j] − [X_i,DX_j]`, maximum absolute coefficient.
    pub fn leibniz_defect(&self, d: &QMatrix) -> Result<Rational> {
        let n = self.dim();
        if d.nrows() != n || d.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: d.nrows().max(d.ncols()) });
        }
        let s = &self.structure;
        let mut worst = Rational::zero();
        let mut acc = vec![Rational::zero(); n];
        for i in 0..n {
            for j in i + 1..n {
                // D[X_i,X_j] − [DX_i, X_j] − [X_i, DX_j]
                acc.iter_mut().for_each(|x| x.set_zero());
                let (terms, neg) = s.terms(i, j);
                for (m, c) in terms {
                    for (k, v) in acc.iter_mut().enumerate() {
                        let e = &d[(k, *m)];
                        if !e.is_zero() {
                            if neg {
                                *v -= e * c;
                            } else {
                                *v += e * c;
                            }
                        }
                    }
                }
                for r in 0..n {
                    s.accumulate(&mut acc, &-d[(r, i)].clone(), r, j);
                    s.accumulate(&mut acc, &-d[(r, j)].clone(), i, r);
                }
                for v in &acc {
                    if v.abs() > worst {
                        worst = v.abs();
                    }
                }
            }
        }
        Ok(worst)
    }

    pub fn is_derivation(&self, d: &QMatrix) -> Result<bool> {
        Ok(self.leibniz_defect(d)?.is_zero())
    }

    /// Basis of `Der(self)` as the exact nullspace of the Leibniz system.
    pub fn derivation_space(&self) -> Vec<DerivationMatrix> {
        self.derivations_supported_on(|_, _| true)
    }

    /// Derivations whose entries vanish outside `support(row, col)`.
    pub fn derivations_supported_on(&self, support: impl Fn(usize, usize) -> bool) -> Vec<DerivationMatrix> {
        let n = self.dim();
        let t = self.structure.dense();
        let var = |p: usize, q: usize| p * n + q;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let mut row = vec![Rational::zero(); n * n];
                    // D[X_i,X_j] component k
                    for r in 0..n {
                        if !t[i][j][r].is_zero() {
                            row[var(k, r)] += &t[i][j][r];
                        }
                    }
                    // − [D X_i, X_j] − [X_i, D X_j], component k
                    for r in 0..n {
                        if !t[r][j][k].is_zero() {
                            row[var(r, i)] -= &t[r][j][k];
                        }
                        if !t[i][r][k].is_zero() {
                            row[var(r, j)] -= &t[i][r][k];
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        for p in 0..n {
            for qq in 0..n {
                if !support(p, qq) {
                    let mut row = vec![Rational::zero(); n * n];
                    row[var(p, qq)] = Rational::from_integer(1.into());
                    rows.push(row);
                }
            }
        }
        let system =
            if rows.is_empty() { QMatrix::zeros(0, n * n) } else { QMatrix::from_rows(rows).expect("rectangular") };
        let basis =
            if system.nrows() == 0 { (0..n * n).map(|v| unit_vector(n * n, v)).collect() } else { system.nullspace() };
        basis
            .into_iter()
            .map(|v| {
                let rows = v.chunks(n).map(<[Rational]>::to_vec).collect();
                DerivationMatrix { matrix: QMatrix::from_rows(rows).expect("square") }
            })
            .collect()
    }

    /// Re-expresses the brackets in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &QMatrix) -> Result<LieAlgebra> {
        let n = self.dim();
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.nrows().max(p.ncols()) });
        }
        let p_inv = p.inverse()?;
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| p.column(j)).collect();
        let mut s = StructureConstants::new(n);
        for a in 0..n {
            for b in a + 1..n {
                let w = p_inv.mul_vec(&self.bracket(&cols[a], &cols[b])?)?;
                for (k, c) in w.into_iter().enumerate() {
                    if !c.is_zero() {
                        s.add(a, b, k, c)?;
                    }
                }
            }
        }
        LieAlgebra::with_labels(s, self.labels.clone())
    }

    pub fn to_file(&self) -> AlgebraFile {
        let mut brackets: Vec<BracketEntry> = Vec::new();
        for (&(i, j), terms) in &self.structure.entries {
            brackets.push(BracketEntry {
                i: i + 1,
                j: j + 1,
                terms: terms.iter().map(|(k, c)| Term { k: k + 1, c: format_rational(c) }).collect(),
            });
        }
        AlgebraFile { dim: self.dim(), labels: self.labels.clone(), brackets }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        if file.labels.len() != file.dim {
            return Err(Error::Format(format!("{} labels for dimension {}", file.labels.len(), file.dim)));
        }
        let mut s = StructureConstants::new(file.dim);
        for b in &file.brackets {
            if !(1 <= b.i && b.i < b.j && b.j <= file.dim) {
                return Err(Error::Format(format!(
                    "bracket indices must satisfy 1 <= i < j <= n, got ({}, {})",
                    b.i, b.j
                )));
            }
            for t in &b.terms {
                if !(1..=file.dim).contains(&t.k) {
                    return Err(Error::Format(format!("term index {} out of range", t.k)));
                }
                s.add(b.i - 1, b.j - 1, t.k - 1, parse_rational(&t.c)?)?;
            }
        }
        LieAlgebra::with_labels(s, file.labels.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

/// On-disk algebra format. Indices are 1-based; coefficients are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub labels: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub k: usize,
    pub c: String,
}

/// A linear subspace of `ℚⁿ` with an independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, got: v.len() });
        }
        if !basis.is_empty() && QMatrix::from_rows(basis.clone())?.rank() != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(Subspace { ambient_dim, basis })
    }

    fn from_independent(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Self {
        Subspace { ambient_dim, basis }
    }

    fn from_echelon(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Self {
        Subspace { ambient_dim, basis }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: (0..n).map(|i| unit_vector(n, i)).collect() }
    }

    /// `span(X_from, …, X_{n-1})` (0-based).
    pub fn coordinate_tail(n: usize, from: usize) -> Self {
        Subspace { ambient_dim: n, basis: (from..n).map(|i| unit_vector(n, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        QMatrix::from_rows(rows).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }

    /// Same subspace, regardless of the chosen bases.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && other.basis.iter().all(|v| self.contains(v))
    }
}

/// A matrix verified to satisfy the Leibniz rule over some algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationMatrix {
    matrix: QMatrix,
}

impl DerivationMatrix {
    pub fn new(alg: &LieAlgebra, matrix: QMatrix) -> Result<Self> {
        let defect = alg.leibniz_defect(&matrix)?;
        if !defect.is_zero() {
            return Err(Error::NotDerivation { defect: format_rational(&defect) });
        }
        Ok(DerivationMatrix { matrix })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> QMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Rational {
        self.matrix.trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_ln, make_qn};
    use crate::linalg::{q, qf};

    fn e(n: usize, i: usize) -> Vec<Rational> {
        unit_vector(n, i)
    }

    #[test]
    fn bracket_signs_in_q6() {
        let q6 = make_qn(6).unwrap();
        // [X2, X5] = -X6, [X3, X4] = +X6
        assert_eq!(q6.bracket(&e(6, 1), &e(6, 4)).unwrap(), {
            let mut v = vec![q(0); 6];
            v[5] = q(-1);
            v
        });
        assert_eq!(q6.bracket(&e(6, 2), &e(6, 3)).unwrap(), e(6, 5));
        let v: Vec<Rational> = (1..=6).map(|i| qf(i, 7)).collect();
        assert!(q6.bracket(&v, &v).unwrap().iter().all(Zero::is_zero));
        assert!(matches!(q6.bracket(&e(5, 0), &e(6, 1)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn flipped_sign_breaks_jacobi() {
        let q6 = make_qn(6).unwrap();
        assert!(q6.jacobi_defect().is_zero());
        assert!(make_ln(8).unwrap().jacobi_defect().is_zero());
        let mut s = q6.structure().clone();
        // [X3, X4] = X6 -> -X6
        s.add(2, 3, 5, q(-2)).unwrap();
        assert_eq!(s.jacobi_defect(), q(2));
        assert!(matches!(LieAlgebra::new(s), Err(Error::JacobiViolated { .. })));
    }

    #[test]
    fn lower_central_series_dims() {
        let q6 = make_qn(6).unwrap();
        let dims: Vec<usize> = q6.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![6, 4, 3, 2, 1, 0]);
        let ab: Vec<usize> = LieAlgebra::abelian(6).lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(ab, vec![6, 0]);
        let q8 = make_qn(8).unwrap();
        let series = q8.lower_central_series();
        for k in 3..=8 {
            assert!(series[k - 2].same_as(&Subspace::coordinate_tail(8, k - 1)), "k = {k}");
        }
    }

    #[test]
    fn filiform_detection() {
        assert!(make_qn(6).unwrap().is_filiform().unwrap());
        assert!(make_ln(5).unwrap().is_filiform().unwrap());
        assert!(!LieAlgebra::abelian(5).is_filiform().unwrap());
        // ℝY ⋉ ℝX with [Y, X] = X is not nilpotent
        let aff = LieAlgebra::from_entries(2, [(0, 1, 1, q(1))]).unwrap();
        assert_eq!(aff.is_filiform().unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn centers() {
        let l6 = make_ln(6).unwrap();
        assert!(l6.center().same_as(&Subspace::coordinate_tail(6, 5)));
        assert!(make_qn(6).unwrap().center().same_as(&Subspace::coordinate_tail(6, 5)));
        assert_eq!(LieAlgebra::abelian(3).center().dim(), 3);
    }

    #[test]
    fn killing_form_of_nilpotent_is_zero() {
        assert!(make_qn(6).unwrap().killing_form().is_zero());
        assert!(LieAlgebra::abelian(4).killing_form().is_zero());
    }

    #[test]
    fn derivations_of_abelian_are_everything() {
        assert_eq!(LieAlgebra::abelian(3).derivation_space().len(), 9);
    }

    #[test]
    fn identity_is_not_a_derivation_of_q6() {
        let q6 = make_qn(6).unwrap();
        assert!(!q6.is_derivation(&QMatrix::identity(6)).unwrap());
        assert_eq!(q6.leibniz_defect(&QMatrix::identity(6)).unwrap(), q(1));
        assert!(q6.is_derivation(&QMatrix::zeros(6, 6)).unwrap());
        assert!(q6.is_derivation(&QMatrix::zeros(5, 5)).is_err());
    }

    #[test]
    fn subspace_rejects_dependent_vectors() {
        let v = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(Subspace::new(2, v).unwrap_err(), Error::LinearlyDependent);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let q6 = make_qn(6).unwrap();
        let back = LieAlgebra::from_json(&q6.to_json()).unwrap();
        assert_eq!(back, q6);
        let mut file = q6.to_file();
        let entry = file.brackets.iter_mut().find(|b| b.i == 3 && b.j == 4).unwrap();
        entry.terms[0].c = "-1".into();
        assert!(matches!(LieAlgebra::from_file(&file), Err(Error::JacobiViolated { .. })));
        file.brackets[0].i = 5;
        file.brackets[0].j = 2;
        assert!(matches!(LieAlgebra::from_file(&file), Err(Error::Format(_))));
    }
}
