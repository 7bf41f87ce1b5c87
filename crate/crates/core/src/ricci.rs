//! Ricci curvature of left-invariant metrics on Lie algebras, computed in
//! double precision from exact structure constants.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{DerivationMatrix, LieAlgebra, StructureConstants};
use crate::catalog::make_qn;
use crate::error::{Error, Result};
use crate::linalg::{to_f64, Rational};

/// A Lie algebra with an inner product given by its Gram matrix in the
/// stored basis.
#[derive(Debug, Clone)]
pub struct MetricLieAlgebra {
    alg: LieAlgebra,
    gram: DMatrix<f64>,
}

impl MetricLieAlgebra {
    pub fn new(alg: LieAlgebra, gram: DMatrix<f64>) -> Result<Self> {
        check_gram(&gram, alg.dim())?;
        Ok(MetricLieAlgebra { alg, gram })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
}

fn check_gram(gram: &DMatrix<f64>, n: usize) -> Result<()> {
    if gram.nrows() != n || gram.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: gram.nrows() });
    }
    if gram.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPositiveDefinite);
    }
    let scale = gram.amax();
    for i in 0..n {
        for j in 0..i {
            if (gram[(i, j)] - gram[(j, i)]).abs() > 1e-14 * scale {
                return Err(Error::InvalidParameter(format!("gram not symmetric at ({i}, {j})")));
            }
        }
    }
    if n > 0 && gram.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

/// A metric on `ℝf ⊕ n` with `f` a unit vector orthogonal to `n` and
/// `[f, X] = DX`.
#[derive(Debug, Clone)]
pub struct ExtensionMetric {
    nil: LieAlgebra,
    d: DerivationMatrix,
    nil_gram: DMatrix<f64>,
    trace: Rational,
}

impl ExtensionMetric {
    pub fn new(nil: LieAlgebra, d: DerivationMatrix, nil_gram: DMatrix<f64>) -> Result<Self> {
        let d = DerivationMatrix::new(&nil, d.into_matrix())?;
        check_gram(&nil_gram, nil.dim())?;
        let trace = d.trace();
        Ok(ExtensionMetric { nil, d, nil_gram, trace })
    }

    pub fn nil(&self) -> &LieAlgebra {
        &self.nil
    }

    pub fn derivation(&self) -> &DerivationMatrix {
        &self.d
    }

    pub fn nil_gram(&self) -> &DMatrix<f64> {
        &self.nil_gram
    }

    /// `T = Tr D`.
    pub fn trace(&self) -> &Rational {
        &self.trace
    }

    pub fn is_unimodular(&self) -> bool {
        num_traits::Zero::is_zero(&self.trace)
    }

    /// The extension as a plain algebra in the basis `(f, X₁, …, Xₙ)`.
    pub fn flattened_algebra(&self) -> LieAlgebra {
        flatten(&self.nil, self.d.matrix())
    }

    pub fn flattened(&self) -> MetricLieAlgebra {
        let n = self.nil.dim();
        let mut gram = DMatrix::zeros(n + 1, n + 1);
        gram[(0, 0)] = 1.0;
        gram.view_mut((1, 1), (n, n)).copy_from(&self.nil_gram);
        MetricLieAlgebra { alg: self.flattened_algebra(), gram }
    }
}

/// `ℝf ⊕ n` with `[f, X_j] = Σᵢ D_ij Xᵢ`, basis `(f, X₁, …, Xₙ)`.
pub fn flatten(nil: &LieAlgebra, d: &crate::linalg::QMatrix) -> LieAlgebra {
    let n = nil.dim();
    let mut s = StructureConstants::new(n + 1);
    for (i, j, k, c) in nil.structure().entries() {
        s.add(i + 1, j + 1, k + 1, c.clone()).expect("in range");
    }
    for j in 0..n {
        for i in 0..n {
            let c = &d[(i, j)];
            if !num_traits::Zero::is_zero(c) {
                s.add(0, j + 1, i + 1, c.clone()).expect("in range");
            }
        }
    }
    LieAlgebra::new(s).expect("derivation extension satisfies Jacobi")
}

/// Gram–Schmidt on `basis[n-1], basis[n-2], …, basis[0]`. The `i`-th output
/// spans, together with the later ones, the same space as `basis[i..]`.
pub fn gram_schmidt_descending(basis: &[DVector<f64>], gram: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let n = basis.len();
    let inner = |u: &DVector<f64>, v: &DVector<f64>| u.dot(&(gram * v));
    let mut out: Vec<Option<DVector<f64>>> = vec![None; n];
    for i in (0..n).rev() {
        let mut v = basis[i].clone();
        let original = inner(&v, &v).sqrt();
        // two passes keep the frame orthonormal to roundoff
        for _ in 0..2 {
            for e in out.iter().flatten() {
                let c = inner(e, &v);
                v -= e * c;
            }
        }
        let norm = inner(&v, &v).sqrt();
        if norm.is_nan() || norm <= 1e-12 * original {
            return Err(Error::LinearlyDependent);
        }
        out[i] = Some(v / norm);
    }
    Ok(out.into_iter().map(|v| v.expect("filled")).collect())
}

/// Orthonormal frame from the coordinate basis, descending order, as the
/// columns of a lower-triangular matrix.
pub fn descending_frame(gram: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = gram.nrows();
    let basis: Vec<DVector<f64>> = (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    let frame = gram_schmidt_descending(&basis, gram)?;
    Ok(DMatrix::from_columns(&frame))
}

/// `ad` of the frame vectors, expressed in the frame.
fn frame_ads(alg: &LieAlgebra, frame: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>> {
    let n = alg.dim();
    let inv = frame.clone().try_inverse().ok_or(Error::Singular)?;
    let ads: Vec<DMatrix<f64>> = (0..n).map(|i| alg.ad(i).to_f64()).collect();
    Ok((0..n)
        .map(|a| {
            let mut ad = DMatrix::zeros(n, n);
            for (i, m) in ads.iter().enumerate() {
                let c = frame[(i, a)];
                if c != 0.0 {
                    ad += m * c;
                }
            }
            &inv * ad * frame
        })
        .collect())
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// `−½ Σ ad_{Eᵢ}ᵗ ad_{Eᵢ} + ¼ Σ ad_{Eᵢ} ad_{Eᵢ}ᵗ`, the part of the Ricci
/// operator that survives on a nilpotent algebra.
fn two_sum(ads: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = ads.first().map_or(0, |m| m.nrows());
    let mut ric = DMatrix::zeros(n, n);
    for ad in ads {
        ric -= ad.transpose() * ad * 0.5;
        ric += ad * ad.transpose() * 0.25;
    }
    sym(&ric)
}

/// The Ricci operator in the descending orthonormal frame of `m.gram()`.
pub fn ricci_operator_general(m: &MetricLieAlgebra) -> Result<DMatrix<f64>> {
    ricci_in_frame(m, &descending_frame(&m.gram)?)
}

/// The Ricci operator in the orthonormal frame whose vectors are the columns of `frame`.
pub fn ricci_in_frame(m: &MetricLieAlgebra, frame: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.dim();
    if frame.nrows() != n || frame.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: frame.nrows() });
    }
    let ads = frame_ads(&m.alg, frame)?;
    let mut ric = two_sum(&ads);
    let mut killing = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..=a {
            let v = (&ads[a] * &ads[b]).trace();
            killing[(a, b)] = v;
            killing[(b, a)] = v;
        }
    }
    ric -= killing * 0.5;
    let mut ad_h = DMatrix::zeros(n, n);
    for ad in &ads {
        ad_h += ad * ad.trace();
    }
    ric -= sym(&ad_h);
    Ok(sym(&ric))
}

/// Ricci operator of a nilpotent metric algebra in the descending frame.
pub fn ricci_nilpotent(nil: &LieAlgebra, gram: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !nil.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    check_gram(gram, nil.dim())?;
    let frame = descending_frame(gram)?;
    Ok(two_sum(&frame_ads(nil, &frame)?))
}

/// `−¼ Σᵢⱼ ‖[eᵢ, eⱼ]‖²`, the scalar curvature of a nilpotent metric algebra.
pub fn nilpotent_scalar_curvature(nil: &LieAlgebra, gram: &DMatrix<f64>) -> Result<f64> {
    check_gram(gram, nil.dim())?;
    let frame = descending_frame(gram)?;
    let ads = frame_ads(nil, &frame)?;
    Ok(-0.25 * ads.iter().map(|ad| ad.norm_squared()).sum::<f64>())
}

/// `max(1, ‖M‖∞) · 1e−9`, the margin a largest eigenvalue must clear.
pub fn negativity_tolerance(m: &DMatrix<f64>) -> f64 {
    let row_sum = m.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    1e-9 * row_sum.max(1.0)
}

/// Eigenvalues sorted ascending.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut eig: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicciReport {
    pub r1: DMatrix<f64>,
    pub r2: DVector<f64>,
    pub r3: f64,
    /// Layout `(e₁, …, eₙ, f)`.
    pub full: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
    pub negative_definite: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RicciReportJson {
    #[serde(rename = "R1")]
    pub r1: Vec<Vec<f64>>,
    #[serde(rename = "R2")]
    pub r2: Vec<f64>,
    pub r3: f64,
    pub eigenvalues: Vec<f64>,
    pub negative_definite: bool,
    pub tolerance: f64,
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("ragged matrix".into()));
    }
    Ok(DMatrix::from_fn(n, cols, |i, j| rows[i][j]))
}

impl RicciReport {
    pub fn from_blocks(r1: DMatrix<f64>, r2: DVector<f64>, r3: f64) -> Self {
        let n = r1.nrows();
        let mut full = DMatrix::zeros(n + 1, n + 1);
        full.view_mut((0, 0), (n, n)).copy_from(&r1);
        for j in 0..n {
            full[(j, n)] = r2[j];
            full[(n, j)] = r2[j];
        }
        full[(n, n)] = r3;
        let eigenvalues = sorted_eigenvalues(&full);
        let tolerance = negativity_tolerance(&full);
        let negative_definite = eigenvalues.last().is_some_and(|&m| m < -tolerance);
        RicciReport { r1, r2, r3, full, eigenvalues, tolerance, negative_definite }
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> RicciReportJson {
        RicciReportJson {
            r1: matrix_rows(&self.r1),
            r2: self.r2.iter().copied().collect(),
            r3: self.r3,
            eigenvalues: self.eigenvalues.clone(),
            negative_definite: self.negative_definite,
            tolerance: self.tolerance,
        }
    }
}

/// Everything the block formulas need, in the descending frame of the nilradical.
struct BlockData {
    ricn: DMatrix<f64>,
    a: DMatrix<f64>,
    ads: Vec<DMatrix<f64>>,
    t: f64,
}

fn block_data(ext: &ExtensionMetric) -> Result<BlockData> {
    let frame = descending_frame(&ext.nil_gram)?;
    let ads = frame_ads(&ext.nil, &frame)?;
    let inv = frame.clone().try_inverse().ok_or(Error::Singular)?;
    let a = &inv * ext.d.matrix().to_f64() * &frame;
    Ok(BlockData { ricn: two_sum(&ads), a, ads, t: to_f64(&ext.trace) })
}

fn r1_of(b: &BlockData) -> DMatrix<f64> {
    let at = b.a.transpose();
    let comm = &b.a * &at - &at * &b.a;
    sym(&(&b.ricn + comm * 0.5 - sym(&b.a) * b.t))
}

/// `R₁ = Ricⁿ + ½[A, Aᵗ] − T·Aˢ`, `(R₂)ⱼ = ½ Σᵢ ⟨Aeᵢ, [eᵢ, eⱼ]⟩`, `r₃ = −Tr((Aˢ)²)`.
pub fn ricci_blocks(ext: &ExtensionMetric) -> Result<RicciReport> {
    let b = block_data(ext)?;
    let n = ext.nil.dim();
    let r1 = r1_of(&b);
    let r2 = DVector::from_fn(n, |j, _| {
        // [eᵢ, eⱼ] is column j of ad_{eᵢ}
        0.5 * (0..n).map(|i| b.a.column(i).dot(&b.ads[i].column(j))).sum::<f64>()
    });
    let a_s = sym(&b.a);
    let r3 = -(&a_s * &a_s).trace();
    Ok(RicciReport::from_blocks(r1, r2, r3))
}

/// `(Tr π_k R₁, −T ι_k)` in the descending frame, `k` counted from 1.
///
/// `π_k` projects onto `span(e_k, …, e_n)`; the first value never falls
/// below the second when `D` is lower-triangular and `T > 0`.
pub fn necessity_trace_bound(ext: &ExtensionMetric, k: usize) -> Result<(f64, f64)> {
    let n = ext.nil.dim();
    if k <= n / 2 || k > n {
        return Err(Error::InvalidParameter(format!("k must lie in {}..={n}, got {k}", n / 2 + 1)));
    }
    let all = necessity_trace_bounds(ext)?;
    let (_, lhs, rhs) = all[k - n / 2 - 1];
    Ok((lhs, rhs))
}

/// [`necessity_trace_bound`] for every `k = m+1, …, n` at once, as `(k, lhs, rhs)`.
pub fn necessity_trace_bounds(ext: &ExtensionMetric) -> Result<Vec<(usize, f64, f64)>> {
    let n = ext.nil.dim();
    if n < 6 || n % 2 == 1 || ext.nil != make_qn(n)? {
        return Err(Error::Unsupported("trace bound is stated for Q_n nilradicals".into()));
    }
    if ext.trace <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("needs T > 0".into()));
    }
    if !ext.d.matrix().is_lower_triangular() {
        return Err(Error::InvalidParameter("derivation is not lower-triangular".into()));
    }
    let diag = ext.d.matrix().diagonal();
    let r1 = r1_of(&block_data(ext)?);
    let t = to_f64(&ext.trace);
    Ok((n / 2 + 1..=n)
        .map(|k| {
            let iota: Rational = diag[k - 1..].iter().sum();
            let lhs = (k - 1..n).map(|j| r1[(j, j)]).sum();
            (k, lhs, -t * to_f64(&iota))
        })
        .collect())
}

/// `LᵗL` with `L` lower-triangular, unit diagonal, off-diagonal entries uniform in `[−1, 1]`.
pub fn sample_gram<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let l = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => rng.gen_range(-1.0..=1.0),
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => 0.0,
    });
    sym(&(l.transpose() * l))
}

pub fn random_gram(n: usize, seed: u64) -> DMatrix<f64> {
    sample_gram(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Diagonal Gram matrix `diag(e^{2x₁}, …, e^{2xₙ})`.
pub fn exponential_gram(x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(x.len(), x.iter().map(|v| (2.0 * v).exp())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_ln, qn_diagonal_derivation};
    use crate::linalg::{q, QMatrix};

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol * a.amax().max(b.amax()).max(1.0)
    }

    #[test]
    fn abelian_is_flat() {
        let alg = LieAlgebra::abelian(4);
        let m = MetricLieAlgebra::new(alg.clone(), random_gram(4, 3)).unwrap();
        assert_eq!(ricci_operator_general(&m).unwrap().amax(), 0.0);
        assert_eq!(ricci_nilpotent(&alg, &random_gram(4, 4)).unwrap().amax(), 0.0);
    }

    #[test]
    fn q6_identity_metric() {
        let q6 = make_qn(6).unwrap();
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.5, -1.0, -0.5, -0.5, 0.0, 1.0]));
        let ric = ricci_nilpotent(&q6, &DMatrix::identity(6, 6)).unwrap();
        assert!((&ric - &want).amax() < 1e-12);
        let general =
            ricci_operator_general(&MetricLieAlgebra::new(q6.clone(), DMatrix::identity(6, 6)).unwrap()).unwrap();
        assert!((&general - &want).amax() < 1e-12);
        assert!((ric.trace() + 2.5).abs() < 1e-12);
        assert!((nilpotent_scalar_curvature(&q6, &DMatrix::identity(6, 6)).unwrap() + 2.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grams() {
        let q6 = make_qn(6).unwrap();
        let mut g = DMatrix::identity(6, 6);
        g[(2, 2)] = -1.0;
        assert_eq!(MetricLieAlgebra::new(q6.clone(), g).unwrap_err(), Error::NotPositiveDefinite);
        let mut g = DMatrix::identity(6, 6);
        g[(0, 1)] = 0.5;
        assert!(MetricLieAlgebra::new(q6.clone(), g).is_err());
        assert!(ricci_nilpotent(
            &flatten(&q6, qn_diagonal_derivation(6, &q(1), &q(1)).unwrap().matrix()),
            &DMatrix::identity(7, 7)
        )
        .is_err());
    }

    #[test]
    fn q6_diagonal_formulas() {
        let q6 = make_qn(6).unwrap();
        let brackets = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (1, 4, 5), (2, 3, 5)];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let ric = ricci_nilpotent(&q6, &exponential_gram(&x)).unwrap();
            let mut want = [0.0; 6];
            for &(i, j, k) in &brackets {
                let c2 = (2.0 * (x[k] - x[i] - x[j])).exp();
                want[i] -= 0.5 * c2;
                want[j] -= 0.5 * c2;
                want[k] += 0.5 * c2;
            }
            for i in 0..6 {
                assert!((ric[(i, i)] - want[i]).abs() < 1e-12 * want[i].abs().max(1.0));
                for j in 0..6 {
                    if i != j {
                        assert!(ric[(i, j)].abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn gram_schmidt_flag() {
        let g = random_gram(6, 5);
        let frame = descending_frame(&g).unwrap();
        assert!((frame.transpose() * &g * &frame - DMatrix::<f64>::identity(6, 6)).amax() < 1e-12);
        for i in 0..6 {
            for j in i + 1..6 {
                assert_eq!(frame[(i, j)], 0.0, "e_{j} must avoid X_{i}");
            }
        }
        let id = descending_frame(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(id, DMatrix::identity(4, 4));
        let dependent = vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![2.0, 0.0])];
        assert_eq!(
            gram_schmidt_descending(&dependent, &DMatrix::identity(2, 2)).unwrap_err(),
            Error::LinearlyDependent
        );
    }

    #[test]
    fn blocks_match_general_on_diagonal_extension() {
        let q6 = make_qn(6).unwrap();
        let d = qn_diagonal_derivation(6, &q(1), &q(-1)).unwrap();
        let ext = ExtensionMetric::new(q6, d, DMatrix::identity(6, 6)).unwrap();
        let report = ricci_blocks(&ext).unwrap();
        assert!((report.r3 + 8.0).abs() < 1e-12);
        assert!(report.r2.amax() < 1e-15);
        let general = ricci_operator_general(&ext.flattened()).unwrap();
        // flattened frame is (f, e₁, …, eₙ); the report is (e₁, …, eₙ, f)
        let perm = DMatrix::from_fn(7, 7, |i, j| if i == (j + 1) % 7 { 1.0 } else { 0.0 });
        assert!(close(&(perm.transpose() * general * perm), &report.full, 1e-12));
    }

    #[test]
    fn zero_derivation_collapses_blocks() {
        let q6 = make_qn(6).unwrap();
        let g = random_gram(6, 8);
        let ext =
            ExtensionMetric::new(q6.clone(), DerivationMatrix::new(&q6, QMatrix::zeros(6, 6)).unwrap(), g.clone())
                .unwrap();
        let report = ricci_blocks(&ext).unwrap();
        assert!(close(&report.r1, &ricci_nilpotent(&q6, &g).unwrap(), 1e-14));
        assert_eq!(report.r3, 0.0);
        assert!(ext.is_unimodular());
    }

    #[test]
    fn trace_bound_diagonal_limit() {
        let q6 = make_qn(6).unwrap();
        let d = qn_diagonal_derivation(6, &q(1), &q(-1)).unwrap();
        let ext = ExtensionMetric::new(q6.clone(), d, DMatrix::identity(6, 6)).unwrap();
        let ricn = ricci_nilpotent(&q6, &DMatrix::identity(6, 6)).unwrap();
        // ι₄ = 4, ι₅ = 3, ι₆ = 1, T = 4
        for (k, iota) in [(4, 4.0), (5, 3.0), (6, 1.0)] {
            let (lhs, rhs) = necessity_trace_bound(&ext, k).unwrap();
            let tail: f64 = (k - 1..6).map(|j| ricn[(j, j)]).sum();
            assert!((lhs - (tail - 4.0 * iota)).abs() < 1e-12);
            assert!((rhs + 4.0 * iota).abs() < 1e-12);
            assert!(lhs >= rhs);
        }
        assert!(necessity_trace_bound(&ext, 3).is_err());
        assert!(necessity_trace_bound(&ext, 7).is_err());
        let spec = crate::catalog::FiliformSpec::new(crate::catalog::Family::L, 6).unwrap();
        let (phi1, _) = crate::catalog::torus(&spec).unwrap();
        let l_ext = ExtensionMetric::new(make_ln(6).unwrap(), phi1, DMatrix::identity(6, 6)).unwrap();
        assert!(necessity_trace_bound(&l_ext, 5).is_err());
    }

    #[test]
    fn report_json_shape() {
        let report = RicciReport::from_blocks(DMatrix::identity(2, 2) * -1.0, DVector::zeros(2), -2.0);
        let v = serde_json::to_value(report.to_json()).unwrap();
        for key in ["R1", "R2", "r3", "eigenvalues", "negative_definite", "tolerance"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(report.negative_definite);
        assert_eq!(report.eigenvalues, vec![-2.0, -1.0, -1.0]);
    }
}
