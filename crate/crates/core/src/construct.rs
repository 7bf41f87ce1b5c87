//! Explicit metrics of negative Ricci curvature: cone data, the exponential
//! feasibility solver, metric assembly, the degeneration search, and an
//! independent certificate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraFile, DerivationMatrix, LieAlgebra};
use crate::catalog::{eliminate_b, make_ln, make_qn, qn_eigenvalues, Family};
use crate::criterion::{decide_ln, decide_qn, Decision};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, q, to_f64, unit_vector, QMatrix, Rational};
use crate::ricci::{
    exponential_gram, flatten, matrix_from_rows, matrix_rows, negativity_tolerance, ricci_blocks,
    ricci_operator_general, sorted_eigenvalues, ExtensionMetric, MetricLieAlgebra, RicciReport,
};

/// `F_α` for every bracket of `Q_n` plus the torus directions `V₁`, `V₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct QnConeData {
    pub n: usize,
    /// chain vectors first, then the centre vectors for `j = 2, …, m`
    pub f: Vec<Vec<Rational>>,
    pub v1: Vec<Rational>,
    pub v2: Vec<Rational>,
}

/// `−E_i − E_j + E_k`, indices counted from 1.
fn triple(n: usize, i: usize, j: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i - 1] -= q(1);
    v[j - 1] -= q(1);
    v[k - 1] += q(1);
    v
}

pub fn cone_vectors_qn(n: usize) -> Result<QnConeData> {
    if n < 6 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("need even n >= 6, got {n}")));
    }
    let mut f: Vec<_> = (2..=n - 2).map(|i| triple(n, 1, i, i + 1)).collect();
    f.extend((2..=n / 2).map(|j| triple(n, j, n + 1 - j, n)));
    let v1 = qn_eigenvalues(n, &q(1), &q(0));
    let v2 = qn_eigenvalues(n, &q(0), &q(1));
    Ok(QnConeData { n, f, v1, v2 })
}

/// `F_i = −E₁ − E_i + E_{i+1}` for `i = 2, …, n−1`.
pub fn cone_vectors_ln(n: usize) -> Result<Vec<Vec<Rational>>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need n >= 3, got {n}")));
    }
    Ok((2..n).map(|i| triple(n, 1, i, i + 1)).collect())
}

/// Minimize `G(x) = Σ c_α e^{(v_α, x)} + Σ e^{x_i} − (u, x)`.
#[derive(Debug, Clone)]
pub struct ConeProblem {
    vectors: Vec<DVector<f64>>,
    coefficients: Vec<f64>,
    target: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct Feasible {
    pub x: DVector<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
}

const MAX_ITERATIONS: usize = 500;
const DIVERGENCE_RADIUS: f64 = 50.0;
const CONDITION_LIMIT: f64 = 1e12;

impl ConeProblem {
    pub fn new(vectors: Vec<DVector<f64>>, coefficients: Vec<f64>, target: DVector<f64>) -> Result<Self> {
        let n = target.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        if coefficients.len() != vectors.len() {
            return Err(Error::DimensionMismatch { expected: vectors.len(), got: coefficients.len() });
        }
        if coefficients.iter().any(|c| c.is_nan() || *c <= 0.0) || target.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be positive and the target finite".into()));
        }
        Ok(ConeProblem { vectors, coefficients, target })
    }

    /// Vectors `2F_α` with weights `¼`, so `∇G = ½ Σ e^{2(F_α, x)} F_α + e^x − u`.
    pub fn from_f_vectors(f: &[Vec<Rational>], target: DVector<f64>) -> Result<Self> {
        let vectors = f.iter().map(|v| DVector::from_iterator(v.len(), v.iter().map(|c| 2.0 * to_f64(c)))).collect();
        ConeProblem::new(vectors, vec![0.25; f.len()], target)
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self) -> &DVector<f64> {
        &self.target
    }

    fn weights(&self, x: &DVector<f64>) -> Vec<f64> {
        self.vectors.iter().zip(&self.coefficients).map(|(v, c)| c * v.dot(x).exp()).collect()
    }

    pub fn potential(&self, x: &DVector<f64>) -> f64 {
        self.weights(x).iter().sum::<f64>() + x.iter().map(|v| v.exp()).sum::<f64>() - self.target.dot(x)
    }

    /// `u − Σ c_α e^{(v_α, x)} v_α`; equals `e^x` at a critical point.
    pub fn slack(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut s = self.target.clone();
        for (v, w) in self.vectors.iter().zip(self.weights(x)) {
            s -= v * w;
        }
        s
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        x.map(f64::exp) - self.slack(x)
    }

    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut h = DMatrix::from_diagonal(&x.map(f64::exp));
        for (v, w) in self.vectors.iter().zip(self.weights(x)) {
            h += v * v.transpose() * w;
        }
        h
    }

    pub fn tolerance(&self) -> f64 {
        1e-10 * self.target.amax().max(1.0)
    }
}

/// Jacobi-scaled spectral condition number.
fn scaled_condition(h: &DMatrix<f64>) -> f64 {
    let d = h.diagonal().map(|v| 1.0 / v.sqrt());
    let scaled = DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] * d[i] * d[j]);
    let eig = SymmetricEigen::new(scaled).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Safeguarded Newton from `x = 0`.
pub fn solve_feasibility(p: &ConeProblem) -> Result<Feasible> {
    let tol = p.tolerance();
    let mut x = DVector::zeros(p.dim());
    let mut g_val = p.potential(&x);
    for iteration in 0..MAX_ITERATIONS {
        let grad = p.gradient(&x);
        let gnorm = grad.amax();
        // the slack equals e^x only up to the gradient, so stop once its sign is certain
        let min_slack = x.min().exp();
        if gnorm < tol && gnorm < 0.5 * min_slack {
            return Ok(Feasible { x, iterations: iteration, gradient_norm: gnorm });
        }
        if x.amax() > DIVERGENCE_RADIUS {
            return Err(Error::NotInCone(format!(
                "iterate left the ball of radius {DIVERGENCE_RADIUS} with gradient {gnorm:.3e}"
            )));
        }
        let h = p.hessian(&x);
        let newton = if scaled_condition(&h) <= CONDITION_LIMIT { h.cholesky().map(|c| -c.solve(&grad)) } else { None };
        let dir = newton.unwrap_or_else(|| -&grad);
        let slope = grad.dot(&dir);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &x + &dir * t;
            let val = p.potential(&cand);
            // near the minimum G changes below its own rounding error, so a
            // smaller gradient is accepted as progress
            let flat = (val - g_val).abs() <= 1e-13 * g_val.abs().max(1.0);
            let armijo = val <= g_val + 1e-4 * t * slope;
            if val.is_finite() && (armijo || (flat && p.gradient(&cand).amax() < gnorm)) {
                x = cand;
                g_val = val;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NotConverged(format!("line search stalled at gradient {gnorm:.3e}")));
        }
    }
    let gnorm = p.gradient(&x).amax();
    if x.amax() > DIVERGENCE_RADIUS {
        return Err(Error::NotInCone(format!("iterates diverged, gradient {gnorm:.3e}")));
    }
    Err(Error::NotConverged(format!("{MAX_ITERATIONS} iterations, gradient {gnorm:.3e}")))
}

/// Weights of the grading derivation `φ₁` used for degeneration.
fn grading_weights(nil: &LieAlgebra) -> Option<Vec<f64>> {
    let n = nil.dim();
    if n >= 4 && n.is_multiple_of(2) && make_qn(n).is_ok_and(|a| &a == nil) {
        let mut w: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        w[n - 1] = (n + 1) as f64;
        Some(w)
    } else if n >= 3 && make_ln(n).is_ok_and(|a| &a == nil) {
        Some((1..=n).map(|i| i as f64).collect())
    } else {
        None
    }
}

/// `ξ = x − sN`: lower-triangular entries `(i, j)` of the derivation pick up
/// the factor `e^{−s(N_i − N_j)}` in the orthonormal frame.
fn degenerate_exponents(nil: &LieAlgebra, x: &[f64], s: f64) -> Result<Vec<f64>> {
    if s == 0.0 {
        return Ok(x.to_vec());
    }
    let weights =
        grading_weights(nil).ok_or_else(|| Error::Unsupported("degeneration needs an L_n or Q_n nilradical".into()))?;
    let xi: Vec<f64> = x.iter().zip(&weights).map(|(xi, w)| xi - s * w).collect();
    if xi.iter().any(|v| (2.0 * v).abs() > 700.0) {
        return Err(Error::InvalidParameter(format!("e^(2ξ) is not representable at s = {s}")));
    }
    Ok(xi)
}

/// The metric `diag(1, e^{2ξ₁}, …, e^{2ξₙ})` on `(f, X₁, …, Xₙ)`.
pub fn assemble_metric(nil: &LieAlgebra, d: &DerivationMatrix, x: &[f64], s: f64) -> Result<MetricLieAlgebra> {
    Ok(assemble_extension(nil, d, x, s)?.flattened())
}

fn assemble_extension(nil: &LieAlgebra, d: &DerivationMatrix, x: &[f64], s: f64) -> Result<ExtensionMetric> {
    if x.len() != nil.dim() {
        return Err(Error::DimensionMismatch { expected: nil.dim(), got: x.len() });
    }
    let xi = degenerate_exponents(nil, x, s)?;
    ExtensionMetric::new(nil.clone(), d.clone(), exponential_gram(&xi))
}

/// Independent Ricci recomputation on the full algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub ricci: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
    pub negative_definite: bool,
}

impl Certificate {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub fn certify(m: &MetricLieAlgebra) -> Result<Certificate> {
    let ricci = ricci_operator_general(m)?;
    let eigenvalues = sorted_eigenvalues(&ricci);
    let tolerance = negativity_tolerance(&ricci);
    let negative_definite = eigenvalues.last().is_some_and(|&v| v < -tolerance);
    Ok(Certificate { ricci, eigenvalues, tolerance, negative_definite })
}

pub const DEGENERATION_SCHEDULE: [f64; 8] = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

#[derive(Debug, Clone)]
pub struct ConstructedMetric {
    pub family: Family,
    pub n: usize,
    /// torus parameters after sign normalization
    pub params: (Rational, Rational),
    pub sign_flipped: bool,
    pub case: String,
    /// the extension actually certified, after sign normalization and `b`-elimination
    pub nil: LieAlgebra,
    pub derivation: DerivationMatrix,
    pub basis_change: QMatrix,
    pub x: Vec<f64>,
    pub s: f64,
    /// amount subtracted from every coordinate of the solver target
    pub margin: f64,
    pub metric: MetricLieAlgebra,
    pub report: RicciReport,
    pub certificate: Certificate,
    pub certified: bool,
}

/// Serialized form of a constructed (or any claimed) metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricFile {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub a: Option<String>,
    pub d: Option<String>,
    pub sign_flipped: Option<bool>,
    pub case: Option<String>,
    pub algebra: AlgebraFile,
    pub gram: Vec<Vec<f64>>,
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub margin: f64,
    #[serde(default)]
    pub eigenvalues: Vec<f64>,
    #[serde(default)]
    pub tolerance: f64,
    #[serde(default)]
    pub certified: bool,
}

impl MetricFile {
    pub fn metric(&self) -> Result<MetricLieAlgebra> {
        MetricLieAlgebra::new(LieAlgebra::from_file(&self.algebra)?, matrix_from_rows(&self.gram)?)
    }
}

impl ConstructedMetric {
    pub fn to_file(&self) -> MetricFile {
        let (a, d) = &self.params;
        MetricFile {
            family: Some(self.family.to_string()),
            n: Some(self.n),
            a: Some(format_rational(a)),
            d: Some(format_rational(d)),
            sign_flipped: Some(self.sign_flipped),
            case: Some(self.case.clone()),
            algebra: self.metric.algebra().to_file(),
            gram: matrix_rows(self.metric.gram()),
            x: self.x.clone(),
            s: self.s,
            margin: self.margin,
            eigenvalues: self.certificate.eigenvalues.clone(),
            tolerance: self.certificate.tolerance,
            certified: self.certified,
        }
    }
}

fn refusal(decision: &Decision) -> Error {
    let detail = decision.reason.clone().unwrap_or_else(|| "criterion fails".into());
    Error::Refused(format!("{detail}; witness {}", decision.to_json()["witness"]))
}

/// Builds and certifies a negative Ricci metric on `Q_n ⋊ ℝ`, where `[f, ·]`
/// acts by the torus element `(a, d)` plus an optional strictly lower part.
pub fn construct(n: usize, a: &Rational, d: &Rational, lower: Option<&QMatrix>) -> Result<ConstructedMetric> {
    let nil = make_qn(n)?;
    if n < 6 {
        return Err(Error::InvalidParameter("use the L_4 construction for Q_4".into()));
    }
    let decision = decide_qn(n, a, d)?;
    if !decision.answer {
        return Err(refusal(&decision));
    }
    let sign = if decision.sign_flipped { q(-1) } else { q(1) };
    let (sa, sd) = (&sign * a, &sign * d);
    let d_mat = with_lower(QMatrix::from_diagonal(&qn_eigenvalues(n, &sa, &sd)), lower, &sign)?;
    DerivationMatrix::new(&nil, d_mat.clone())?;
    let (nil, d_mat, p) = if sa != sd {
        let (p, conj) = eliminate_b(n, &sa, &sd, &d_mat)?;
        (nil.change_basis(&p)?, conj, p)
    } else {
        (nil, d_mat, QMatrix::identity(n))
    };
    let case = if sa == sd { "b:positive-eigenvalues" } else { "b" };
    let f = cone_vectors_qn(n)?.f;
    build(Family::Q, n, (sa, sd), decision.sign_flipped, case, nil, d_mat, p, &f)
}

/// The same pipeline for `L_n ⋊ ℝ` with `[f, ·] = αφ₁ + βφ₂` plus a lower part.
pub fn construct_ln(n: usize, alpha: &Rational, beta: &Rational, lower: Option<&QMatrix>) -> Result<ConstructedMetric> {
    let nil = make_ln(n)?;
    let decision = decide_ln(n, alpha, beta)?;
    if !decision.answer {
        return Err(refusal(&decision));
    }
    let sign = if decision.sign_flipped { q(-1) } else { q(1) };
    let (sa, sb) = (&sign * alpha, &sign * beta);
    let diag = crate::catalog::TorusParams::L { n, alpha: sa.clone(), beta: sb.clone() }.eigenvalues();
    let d_mat = with_lower(QMatrix::from_diagonal(&diag), lower, &sign)?;
    let f = cone_vectors_ln(n)?;
    build(Family::L, n, (sa, sb), decision.sign_flipped, "a", nil, d_mat, QMatrix::identity(n), &f)
}

fn with_lower(diag: QMatrix, lower: Option<&QMatrix>, sign: &Rational) -> Result<QMatrix> {
    let Some(lower) = lower else { return Ok(diag) };
    let n = diag.nrows();
    if lower.nrows() != n || lower.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lower.nrows() });
    }
    if (0..n).any(|i| (i..n).any(|j| !lower[(i, j)].is_zero())) {
        return Err(Error::InvalidParameter("lower part must be strictly lower-triangular".into()));
    }
    diag.add(&lower.scale(sign))
}

#[allow(clippy::too_many_arguments)]
fn build(
    family: Family,
    n: usize,
    params: (Rational, Rational),
    sign_flipped: bool,
    case: &str,
    nil: LieAlgebra,
    d_mat: QMatrix,
    basis_change: QMatrix,
    f: &[Vec<Rational>],
) -> Result<ConstructedMetric> {
    let derivation = DerivationMatrix::new(&nil, d_mat)?;
    let lambda = derivation.matrix().diagonal();
    let t = derivation.trace();
    if !t.is_positive() {
        return Err(Error::Refused("trace is not positive after sign normalization".into()));
    }
    let u = DVector::from_iterator(n, lambda.iter().map(|l| to_f64(&(&t * l))));
    let sigma = u.amax();
    let schedule: &[f64] =
        if derivation.matrix().is_diagonal() { &DEGENERATION_SCHEDULE[..1] } else { &DEGENERATION_SCHEDULE };
    let mut last = Error::DegenerationExhausted { s: 0.0, max_eigenvalue: f64::INFINITY };
    for theta in margin_schedule() {
        let margin = theta * sigma;
        let problem = ConeProblem::from_f_vectors(f, u.add_scalar(-margin))?;
        let x = match solve_feasibility(&problem) {
            Ok(sol) => sol.x,
            Err(e @ (Error::NotInCone(_) | Error::NotConverged(_))) => {
                last = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        // ½ Σ e^{2(x, F_α)} F_α − Tλ must be negative in every coordinate
        let slack = problem.slack(&x).add_scalar(margin);
        if let Some(i) = slack.iter().position(|v| v.is_nan() || *v <= 0.0) {
            last = Error::CertificateFailure(format!("P(x) is not negative in coordinate {}", i + 1));
            continue;
        }
        let x: Vec<f64> = x.iter().copied().collect();
        for &s in schedule {
            let ext = match assemble_extension(&nil, &derivation, &x, s) {
                Ok(ext) => ext,
                Err(Error::InvalidParameter(_)) => continue,
                Err(e) => return Err(e),
            };
            let report = ricci_blocks(&ext)?;
            last = Error::DegenerationExhausted { s, max_eigenvalue: report.max_eigenvalue() };
            if !report.negative_definite {
                continue;
            }
            let metric = ext.flattened();
            let certificate = certify(&metric)?;
            if !certificate.negative_definite {
                last = Error::DegenerationExhausted { s, max_eigenvalue: certificate.max_eigenvalue() };
                continue;
            }
            return Ok(ConstructedMetric {
                family,
                n,
                params,
                sign_flipped,
                case: case.to_string(),
                nil,
                derivation,
                basis_change,
                x,
                s,
                margin,
                metric,
                report,
                certificate,
                certified: true,
            });
        }
    }
    Err(last)
}

/// Fractions of `‖u‖∞` held back from the solver's target: `0`, then `½, ¼, …`.
///
/// Some exponents of the unshifted solution sit far below zero, and the
/// slack `e^{x_i}` they leave is too small to certify; a reserved margin adds
/// to every coordinate of the slack.
fn margin_schedule() -> impl Iterator<Item = f64> {
    std::iter::once(0.0).chain((1..=30).map(|k| 0.5f64.powi(k)))
}

/// Flattened `ℝf ⊕ n` for a derivation given in the original basis of `nil`.
pub fn extension_algebra(nil: &LieAlgebra, d: &DerivationMatrix) -> LieAlgebra {
    flatten(nil, d.matrix())
}

/// Unit vectors `E_1, …, E_n` as floats.
pub fn unit_vectors(n: usize) -> Vec<DVector<f64>> {
    (0..n).map(|i| DVector::from_iterator(n, unit_vector(n, i).iter().map(to_f64))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lower_nilpotent_derivations;
    use crate::linalg::{dot, qf};

    #[test]
    fn q6_cone_data() {
        let c = cone_vectors_qn(6).unwrap();
        let as_q = |v: [i64; 6]| v.map(q).to_vec();
        assert_eq!(
            c.f,
            vec![
                as_q([-1, -1, 1, 0, 0, 0]),
                as_q([-1, 0, -1, 1, 0, 0]),
                as_q([-1, 0, 0, -1, 1, 0]),
                as_q([0, -1, 0, 0, -1, 1]),
                as_q([0, 0, -1, -1, 0, 1]),
            ]
        );
        assert_eq!(c.v1, as_q([1, 0, 1, 2, 3, 3]));
        assert_eq!(c.v2, as_q([0, 1, 1, 1, 1, 2]));
        assert_eq!(dot(&c.v1, &c.f[3]), q(0));
        assert_eq!(cone_vectors_qn(8).unwrap().f.len(), 8);
        for n in (6..=12).step_by(2) {
            let c = cone_vectors_qn(n).unwrap();
            assert_eq!(c.f.len(), n + n / 2 - 4);
            assert_eq!(c.f.len(), make_qn(n).unwrap().num_brackets());
            assert!(c.f.iter().all(|f| dot(&c.v1, f).is_zero() && dot(&c.v2, f).is_zero()));
        }
    }

    #[test]
    fn ln_cone_data() {
        let f = cone_vectors_ln(4).unwrap();
        assert_eq!(f, vec![[-1, -1, 1, 0].map(q).to_vec(), [-1, 0, -1, 1].map(q).to_vec()]);
        for n in 3..10 {
            let f = cone_vectors_ln(n).unwrap();
            assert_eq!(f.len(), n - 2);
            assert!(f.iter().all(|v| v.iter().sum::<Rational>() == q(-1)));
        }
    }

    #[test]
    fn trivial_solver_instances() {
        let n = 4;
        let p = ConeProblem::new(unit_vectors(n), vec![1.0; n], DVector::from_element(n, 2.0)).unwrap();
        let sol = solve_feasibility(&p).unwrap();
        assert!(sol.x.amax() < 1e-10);
        let p =
            ConeProblem::new(vec![DVector::from_element(1, 1.0)], vec![1.0], DVector::from_element(1, 3.0)).unwrap();
        // e^x + e^x = 3
        let sol = solve_feasibility(&p).unwrap();
        assert!((sol.x[0] - 1.5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn q6_feasibility() {
        let c = cone_vectors_qn(6).unwrap();
        let u = DVector::from_vec(vec![4.0, -4.0, 0.0, 4.0, 8.0, 4.0]);
        let p = ConeProblem::from_f_vectors(&c.f, u).unwrap();
        let sol = solve_feasibility(&p).unwrap();
        let slack = p.slack(&sol.x);
        for i in 0..6 {
            assert!((slack[i] - sol.x[i].exp()).abs() < 1e-9);
            assert!(slack[i] > 0.0);
        }
    }

    #[test]
    fn boundary_target_diverges() {
        let v = vec![DVector::from_vec(vec![1.0, 0.0, 2.0]), DVector::from_vec(vec![0.5, 1.0, 1.0])];
        let p = ConeProblem::new(v.clone(), vec![1.0, 1.0], &v[0] * 3.0).unwrap();
        let err = solve_feasibility(&p).unwrap_err();
        assert!(matches!(err, Error::NotInCone(_)), "{err:?}");
    }

    #[test]
    fn assembled_identity() {
        let q6 = make_qn(6).unwrap();
        let d = crate::catalog::qn_diagonal_derivation(6, &q(1), &q(-1)).unwrap();
        let m = assemble_metric(&q6, &d, &[0.0; 6], 0.0).unwrap();
        assert_eq!(m.gram(), &DMatrix::<f64>::identity(7, 7));
    }

    #[test]
    fn constructs_q6() {
        let c = construct(6, &q(1), &q(-1), None).unwrap();
        assert!(c.certified && c.certificate.negative_definite && c.s == 0.0);
        assert!((c.report.r3 + 8.0).abs() < 1e-9);
        let c = construct(6, &q(1), &q(1), None).unwrap();
        assert_eq!(c.case, "b:positive-eigenvalues");
        let flipped = construct(6, &q(-1), &q(1), None).unwrap();
        assert!(flipped.sign_flipped && flipped.certified);
        match construct(6, &q(1), &qf(-8, 5), None) {
            Err(Error::Refused(msg)) => assert!(msg.contains("-1/5"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constructs_with_lower_part() {
        let q6 = make_qn(6).unwrap();
        let mut lower = QMatrix::zeros(6, 6);
        for (k, der) in lower_nilpotent_derivations(&q6).iter().enumerate() {
            lower = lower.add(&der.matrix().scale(&q(3 + k as i64))).unwrap();
        }
        for (a, d) in [(q(1), q(1)), (q(1), q(-1)), (q(2), qf(1, 3))] {
            let c = construct(6, &a, &d, Some(&lower)).unwrap();
            assert!(c.certified, "{a} {d}");
            assert!(certify(&c.metric).unwrap().negative_definite);
        }
    }

    #[test]
    fn certify_rejects_nilpotent_and_flat() {
        let q6 = make_qn(6).unwrap();
        let cert = certify(&MetricLieAlgebra::new(q6, DMatrix::identity(6, 6)).unwrap()).unwrap();
        assert!(!cert.negative_definite);
        assert!((cert.max_eigenvalue() - 1.0).abs() < 1e-12);
        let flat = certify(&MetricLieAlgebra::new(LieAlgebra::abelian(3), DMatrix::identity(3, 3)).unwrap()).unwrap();
        assert!(!flat.negative_definite);
    }

    #[test]
    fn metric_file_round_trip() {
        let c = construct(6, &q(1), &q(-1), None).unwrap();
        let file = c.to_file();
        let text = serde_json::to_string(&file).unwrap();
        let back: MetricFile = serde_json::from_str(&text).unwrap();
        let m = back.metric().unwrap();
        assert_eq!(m.gram(), c.metric.gram());
        assert!(certify(&m).unwrap().negative_definite);
    }

    #[test]
    fn ln_construction_attempt() {
        let c = construct_ln(5, &q(1), &q(0), None).unwrap();
        assert!(c.certified);
    }
}
