//! The two rank-two filiform algebras `L_n` and `Q_n`, their tori of
//! derivations, and the basis normalizations used by the decision and
//! construction layers.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{DerivationMatrix, LieAlgebra, StructureConstants};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, q, unit_vector, QMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "Ln")]
    L,
    #[serde(rename = "Qn")]
    Q,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::L => "Ln",
            Family::Q => "Qn",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Ln" | "L" | "ln" => Ok(Family::L),
            "Qn" | "Q" | "qn" => Ok(Family::Q),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}, expected Ln or Qn"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiliformSpec {
    family: Family,
    n: usize,
}

impl FiliformSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        match family {
            Family::L if n < 3 => Err(Error::InvalidParameter(format!("L_n needs n >= 3, got {n}"))),
            Family::Q if n < 4 || n % 2 == 1 => Err(Error::InvalidParameter(format!("Q_n needs even n >= 4, got {n}"))),
            _ => Ok(FiliformSpec { family, n }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n / 2` for `Q_n`.
    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// `Q_4` is `L_4` in disguise.
    pub fn is_isomorphic_to_l4(&self) -> bool {
        self.family == Family::Q && self.n == 4
    }

    pub fn algebra(&self) -> LieAlgebra {
        match self.family {
            Family::L => make_ln(self.n),
            Family::Q => make_qn(self.n),
        }
        .expect("validated spec")
    }
}

/// `[X_1, X_i] = X_{i+1}` for `2 <= i <= n-1`.
pub fn make_ln(n: usize) -> Result<LieAlgebra> {
    FiliformSpec::new(Family::L, n)?;
    LieAlgebra::from_entries(n, (1..n - 1).map(|i| (0, i, i + 1, q(1))))
}

/// `[X_1, X_i] = X_{i+1}` for `2 <= i <= n-2` and
/// `[X_j, X_{n-j+1}] = (-1)^{j+1} X_n` for `2 <= j <= n-1`.
pub fn make_qn(n: usize) -> Result<LieAlgebra> {
    FiliformSpec::new(Family::Q, n)?;
    LieAlgebra::new(qn_structure(n, false))
}

fn qn_structure(n: usize, full_chain: bool) -> StructureConstants {
    let mut s = StructureConstants::new(n);
    let chain_end = if full_chain { n - 1 } else { n - 2 };
    for i in 2..=chain_end {
        s.add(0, i - 1, i, q(1)).expect("in range");
    }
    for j in 2..=n / 2 {
        let sign = if j % 2 == 0 { -1 } else { 1 };
        s.add(j - 1, n - j, n - 1, q(sign)).expect("in range");
    }
    s
}

/// `Q_n` in the basis `Y_1 = X_1 - X_2`, `Y_i = X_i`: the chain runs all the
/// way to `[Y_1, Y_{n-1}] = Y_n`.
pub fn chain_normal_form(n: usize) -> Result<LieAlgebra> {
    FiliformSpec::new(Family::Q, n)?;
    LieAlgebra::new(qn_structure(n, true))
}

/// Columns: `Y_1 = X_1 - X_2`, `Y_i = X_i`. Carries `Q_n` onto [`chain_normal_form`].
pub fn chain_normal_form_map(n: usize) -> QMatrix {
    let mut p = QMatrix::identity(n);
    p[(1, 0)] = q(-1);
    p
}

/// Columns `(-X_2, X_1, X_3, X_4)`: carries `Q_4` onto `L_4`.
pub fn q4_to_l4_map() -> QMatrix {
    let mut p = QMatrix::zeros(4, 4);
    p[(1, 0)] = q(-1);
    p[(0, 1)] = q(1);
    p[(2, 2)] = q(1);
    p[(3, 3)] = q(1);
    p
}

/// The maximal torus `span(φ₁, φ₂)` as diagonal derivations.
pub fn torus(spec: &FiliformSpec) -> Result<(DerivationMatrix, DerivationMatrix)> {
    let n = spec.n();
    let alg = spec.algebra();
    let mut phi1: Vec<Rational> = (1..=n as i64).map(q).collect();
    let mut phi2: Vec<Rational> = (0..n).map(|i| if i == 0 { q(0) } else { q(1) }).collect();
    if spec.family() == Family::Q {
        phi1[n - 1] = q(n as i64 + 1);
        phi2[n - 1] = q(2);
    }
    Ok((
        DerivationMatrix::new(&alg, QMatrix::from_diagonal(&phi1))?,
        DerivationMatrix::new(&alg, QMatrix::from_diagonal(&phi2))?,
    ))
}

/// `diag(1, 2+r, 3+r, …, (n-1)+r, n+2r)`, the torus of the rank-one families.
pub fn rank_one_torus(n: usize, r: usize) -> Result<QMatrix> {
    if r < 1 || r + 4 > n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n-4, got n = {n}, r = {r}")));
    }
    let mut diag = vec![q(1)];
    diag.extend((2..n).map(|i| q((i + r) as i64)));
    diag.push(q((n + 2 * r) as i64));
    Ok(QMatrix::from_diagonal(&diag))
}

/// Eigenvalue parameters of a torus element.
#[derive(Debug, Clone, PartialEq)]
pub enum TorusParams {
    /// `Q_n`: eigenvalues `a, d, a+d, …, (n-3)a+d, (n-3)a+2d`.
    Q { n: usize, a: Rational, d: Rational },
    /// `L_n`: the element `αφ₁ + βφ₂`.
    L { n: usize, alpha: Rational, beta: Rational },
}

impl TorusParams {
    pub fn eigenvalues(&self) -> Vec<Rational> {
        match self {
            TorusParams::Q { n, a, d } => qn_eigenvalues(*n, a, d),
            TorusParams::L { n, alpha, beta } => {
                let mut v = vec![alpha.clone()];
                v.extend((2..=*n as i64).map(|i| q(i) * alpha + beta));
                v
            }
        }
    }

    pub fn derivation(&self) -> Result<DerivationMatrix> {
        match self {
            TorusParams::Q { n, a, d } => qn_diagonal_derivation(*n, a, d),
            TorusParams::L { n, .. } => {
                DerivationMatrix::new(&make_ln(*n)?, QMatrix::from_diagonal(&self.eigenvalues()))
            }
        }
    }
}

/// `λ₁ = a`, `λᵢ = d + (i-2)a` for `2 <= i <= n-1`, `λₙ = 2d + (n-3)a`.
pub fn qn_eigenvalues(n: usize, a: &Rational, d: &Rational) -> Vec<Rational> {
    let mut v = vec![a.clone()];
    v.extend((2..n).map(|i| d + q(i as i64 - 2) * a));
    v.push(q(2) * d + q(n as i64 - 3) * a);
    v
}

/// `a·φ₁ + (d − 2a)·φ₂` on `Q_n`, `n` even and at least 6.
pub fn qn_diagonal_derivation(n: usize, a: &Rational, d: &Rational) -> Result<DerivationMatrix> {
    if n < 6 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("diagonal Q_n derivation needs even n >= 6, got {n}")));
    }
    DerivationMatrix::new(&make_qn(n)?, QMatrix::from_diagonal(&qn_eigenvalues(n, a, d)))
}

/// Strictly lower-triangular (hence nilpotent) derivations.
pub fn lower_nilpotent_derivations(alg: &LieAlgebra) -> Vec<DerivationMatrix> {
    alg.derivations_supported_on(|row, col| row > col)
}

/// Conjugates away the `(1,2)` entry `b` of `d_mat` by `X₂ ↦ X₂ − b(a−d)⁻¹X₁`.
///
/// Returns `(P, P⁻¹ D P)` where the columns of `P` are the new basis.
pub fn eliminate_b(n: usize, a: &Rational, d: &Rational, d_mat: &QMatrix) -> Result<(QMatrix, QMatrix)> {
    if d_mat.nrows() != n || d_mat.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: d_mat.nrows() });
    }
    if a == d {
        return Err(Error::NotEliminable);
    }
    if &d_mat[(0, 0)] != a || &d_mat[(1, 1)] != d {
        return Err(Error::InvalidParameter(format!(
            "diagonal starts ({}, {}), expected ({}, {})",
            format_rational(&d_mat[(0, 0)]),
            format_rational(&d_mat[(1, 1)]),
            format_rational(a),
            format_rational(d)
        )));
    }
    let b = &d_mat[(0, 1)];
    let mut p = QMatrix::identity(n);
    if !b.is_zero() {
        p[(0, 1)] = -(b / (a - d));
    }
    let conj = p.inverse()?.mul(d_mat)?.mul(&p)?;
    if !conj.is_lower_triangular() {
        return Err(Error::InvalidParameter("matrix has upper entries outside the (1,2) slot".into()));
    }
    Ok((p, conj))
}

/// Basis `Z₁ = z1`, `Z₂ = z2`, `Z_{i+1} = [Z₁, Z_i]` (columns).
pub fn chain_basis(alg: &LieAlgebra, z1: &[Rational], z2: &[Rational]) -> Result<QMatrix> {
    let n = alg.dim();
    let mut cols = vec![z1.to_vec(), z2.to_vec()];
    while cols.len() < n {
        let next = alg.bracket(z1, cols.last().expect("nonempty"))?;
        cols.push(next);
    }
    QMatrix::from_columns(&cols)
}

/// Algebra with `[Y₁, Y_i] = Y_{i+1}` (`2 <= i <= n-1`) and `[Y_i, Y_j] = K_{ij} Y_n`
/// (`2 <= i, j <= n-1`). `k` is `(n-2) × (n-2)`, row/column `0` standing for index 2.
pub fn algebra_from_k(n: usize, k: &QMatrix) -> Result<LieAlgebra> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("need n >= 4, got {n}")));
    }
    let m = n - 2;
    if k.nrows() != m || k.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, got: k.nrows() });
    }
    for i in 0..m {
        for j in 0..m {
            if k[(i, j)] != -k[(j, i)].clone() {
                return Err(Error::InvalidParameter("K must be skew-symmetric".into()));
            }
        }
    }
    let mut s = StructureConstants::new(n);
    for i in 1..n - 1 {
        s.add(0, i, i + 1, q(1))?;
    }
    for i in 0..m {
        for j in i + 1..m {
            if !k[(i, j)].is_zero() {
                s.add(i + 1, j + 1, n - 1, k[(i, j)].clone())?;
            }
        }
    }
    LieAlgebra::new(s)
}

/// Reads `K` back from an algebra in the shape of [`algebra_from_k`].
pub fn k_matrix_of(alg: &LieAlgebra) -> Result<QMatrix> {
    let n = alg.dim();
    for i in 1..n - 1 {
        if alg.bracket_basis(0, i) != unit_vector(n, i + 1) {
            return Err(Error::InvalidParameter(format!("[Y1, Y{}] != Y{}", i + 1, i + 2)));
        }
    }
    let m = n - 2;
    let mut k = QMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let b = alg.bracket_basis(i + 1, j + 1);
            if b[..n - 1].iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidParameter(format!("[Y{}, Y{}] leaves the centre", i + 2, j + 2)));
            }
            k[(i, j)] = b[n - 1].clone();
        }
    }
    Ok(k)
}

/// Normalizes a `K`-presented filiform algebra to the `Q_n` normal form
/// [`chain_normal_form`]. Returns the basis change (columns) and the
/// transformed algebra, which equals the normal form bracket by bracket.
pub fn normalize_to_qn(n: usize, k: &QMatrix) -> Result<(QMatrix, LieAlgebra)> {
    let input = algebra_from_k(n, k)?;
    if k.rank() < k.nrows() {
        return Err(Error::Singular);
    }
    let k2 = |coeffs: &[Rational]| -> Result<(QMatrix, QMatrix)> {
        let mut z2 = unit_vector(n, 1);
        for (idx, c) in coeffs.iter().enumerate() {
            z2[idx] += c;
        }
        let p = chain_basis(&input, &unit_vector(n, 0), &z2)?;
        let kp = k_matrix_of(&input.change_basis(&p)?)?;
        Ok((p, kp))
    };
    // coefficients of Y₂' = Y₂ + Σ a_i Y_i; only even 1-based slots a₄, a₆, … move
    let mut coeffs = vec![Rational::zero(); n];
    let mut t = 1;
    while 2 * t + 4 <= n {
        let slot = 2 * t + 1; // 0-based index of a_{2t+2}
        let target = n - 3 - 2 * t; // K'_{2, n-1-2t} in K-matrix coordinates
        coeffs[slot] = Rational::zero();
        let v0 = k2(&coeffs)?.1[(0, target)].clone();
        coeffs[slot] = Rational::one();
        let v1 = k2(&coeffs)?.1[(0, target)].clone();
        let slope = &v1 - &v0;
        if slope.is_zero() {
            return Err(Error::Singular);
        }
        coeffs[slot] = -v0 / slope;
        t += 1;
    }
    let (mut p, kp) = k2(&coeffs)?;
    if (0..n - 3).any(|j| !kp[(0, j)].is_zero()) {
        return Err(Error::InvalidParameter("normalization left a nonzero K'_{2,j}".into()));
    }
    let scale = -kp[(0, n - 3)].clone();
    let inv = Rational::one() / scale;
    for col in 1..n {
        for row in 0..n {
            p[(row, col)] = &p[(row, col)] * &inv;
        }
    }
    let out = input.change_basis(&p)?;
    let normal = chain_normal_form(n)?;
    if out != normal {
        return Err(Error::InvalidParameter("normalized brackets differ from the Q_n normal form".into()));
    }
    Ok((p, out))
}
