//! Exact decision procedures: which rank-one solvable extensions of `L_n` and
//! `Q_n` admit a metric of negative Ricci curvature.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{DerivationMatrix, LieAlgebra};
use crate::catalog::{make_ln, make_qn, qn_eigenvalues};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, q, qf, QMatrix, Rational};

fn check_qn_dim(n: usize) -> Result<()> {
    if n < 6 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("need even n >= 6, got {n}")));
    }
    Ok(())
}

/// `ι_k = ½((n−3)n − (k−3)(k−2))a + (n−k+2)d`, the trace of the torus
/// element on `span(X_k, …, X_n)`.
pub fn iota_qn(n: usize, a: &Rational, d: &Rational, k: usize) -> Result<Rational> {
    check_qn_dim(n)?;
    if !(3..=n).contains(&k) {
        return Err(Error::InvalidParameter(format!("k must lie in 3..={n}, got {k}")));
    }
    let (n, k) = (n as i64, k as i64);
    Ok(qf((n - 3) * n - (k - 3) * (k - 2), 2) * a + q(n - k + 2) * d)
}

/// `T = ½(n−1)(n−2)a + nd`.
pub fn trace_t(n: usize, a: &Rational, d: &Rational) -> Rational {
    let n = n as i64;
    qf((n - 1) * (n - 2), 2) * a + q(n) * d
}

/// `T` rebuilt from `ι_{n−1}` and `ι_n` alone.
pub fn trace_from_tail(n: usize, iota_n1: &Rational, iota_n: &Rational) -> Rational {
    let n = n as i64;
    qf(2, n - 3) * iota_n1 + qf(n * n - 3 * n - 6, 2 * (n - 3)) * iota_n
}

/// `f(t) = ((n−3)n − (t−3)(t−2)) / (2(n−t+2))`, so that `ι_t = (n−t+2)(f(t)a + d)`.
pub fn f_value(n: usize, t: usize) -> Rational {
    let (n, t) = (n as i64, t as i64);
    qf((n - 3) * n - (t - 3) * (t - 2), 2 * (n - t + 2))
}

/// Largest `p` with `(n+2−p)² >= 2n`, i.e. `p = ⌊n + 2 − √(2n)⌋`.
pub fn critical_p(n: usize) -> usize {
    let mut s = 0usize;
    while (s + 1) * (s + 1) <= 2 * n {
        s += 1;
    }
    // s = ⌊√(2n)⌋; n+2−p >= √(2n) holds iff n+2−p >= ⌈√(2n)⌉
    let ceil = if s * s == 2 * n { s } else { s + 1 };
    n + 2 - ceil
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalIndex {
    pub p: usize,
    pub l: usize,
    pub f_p: Rational,
    pub f_p1: Rational,
    pub kappa_max: Rational,
    pub kappa_min: Rational,
}

/// The index `l ∈ {p, p+1}` maximizing `f`; ties go to `p`.
pub fn critical_l(n: usize) -> Result<CriticalIndex> {
    check_qn_dim(n)?;
    let p = critical_p(n);
    let (f_p, f_p1) = (f_value(n, p), f_value(n, p + 1));
    let l = if f_p1 > f_p { p + 1 } else { p };
    let kappa_max = f_p.clone().max(f_p1.clone());
    Ok(CriticalIndex { p, l, f_p, f_p1, kappa_max, kappa_min: qf(n as i64 - 3, 2) })
}

/// `ι_3, …, ι_n` and `T` for one torus element of `Q_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IotaProfile {
    pub n: usize,
    pub values: BTreeMap<usize, Rational>,
    pub t: Rational,
}

impl IotaProfile {
    pub fn new(n: usize, a: &Rational, d: &Rational) -> Result<Self> {
        let values = (3..=n).map(|k| Ok((k, iota_qn(n, a, d, k)?))).collect::<Result<_>>()?;
        Ok(IotaProfile { n, values, t: trace_t(n, a, d) })
    }

    pub fn get(&self, k: usize) -> &Rational {
        &self.values[&k]
    }

    pub fn all_positive(&self, from: usize) -> bool {
        self.values.range(from..).all(|(_, v)| v.is_positive())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// nilradical `L_n`
    A,
    /// nilradical `Q_n`, one extra dimension
    B,
    /// everything else: a combination with all eigenvalues positive exists
    C,
}

impl Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Case::A => "a",
            Case::B => "b",
            Case::C => "c",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Qn {
        n: usize,
        a: Rational,
        d: Rational,
        l: usize,
        iota_l: Rational,
        iota_n: Rational,
        t: Rational,
    },
    Ln {
        n: usize,
        alpha: Rational,
        beta: Rational,
        iota_2: Rational,
        iota_n: Rational,
        t: Rational,
    },
    /// A combination `Σ cᵢDᵢ` and its (all positive) eigenvalues.
    Positive {
        coefficients: Vec<Rational>,
        eigenvalues: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub answer: bool,
    pub case: Case,
    pub sign_flipped: bool,
    pub witness: Witness,
    pub reason: Option<String>,
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

impl Decision {
    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            Witness::Qn { n, a, d, l, iota_l, iota_n, t } => json!({
                "family": "Qn", "n": n, "a": format_rational(a), "d": format_rational(d), "l": l,
                "iota_l": format_rational(iota_l), "iota_n": format_rational(iota_n), "T": format_rational(t),
            }),
            Witness::Ln { n, alpha, beta, iota_2, iota_n, t } => json!({
                "family": "Ln", "n": n, "alpha": format_rational(alpha), "beta": format_rational(beta),
                "iota_2": format_rational(iota_2), "iota_n": format_rational(iota_n), "T": format_rational(t),
            }),
            Witness::Positive { coefficients, eigenvalues } => json!({
                "coefficients": strs(coefficients), "eigenvalues": strs(eigenvalues),
            }),
        };
        json!({
            "answer": if self.answer { "yes" } else { "no" },
            "case": self.case.as_str(),
            "sign_flipped": self.sign_flipped,
            "witness": witness,
            "reason": self.reason,
        })
    }
}

/// Two-functional test on `Q_n`, `n >= 6` even; `n = 4` is answered through `L_4`.
pub fn decide_qn(n: usize, a: &Rational, d: &Rational) -> Result<Decision> {
    if n == 4 {
        return decide_ln(4, d, &(a - q(2) * d));
    }
    check_qn_dim(n)?;
    if a.is_zero() && d.is_zero() {
        return Err(Error::NilpotentDerivation("a = d = 0 gives a nilpotent derivation".into()));
    }
    let crit = critical_l(n)?;
    let l = crit.l;
    let witness = |a: &Rational, d: &Rational| -> Result<Witness> {
        Ok(Witness::Qn {
            n,
            a: a.clone(),
            d: d.clone(),
            l,
            iota_l: iota_qn(n, a, d, l)?,
            iota_n: iota_qn(n, a, d, n)?,
            t: trace_t(n, a, d),
        })
    };
    let t = trace_t(n, a, d);
    if t.is_zero() {
        return Ok(Decision {
            answer: false,
            case: Case::B,
            sign_flipped: false,
            witness: witness(a, d)?,
            reason: Some("unimodular: T = 0".into()),
        });
    }
    let flip = t.is_negative();
    let (sa, sd) = if flip { (-a.clone(), -d.clone()) } else { (a.clone(), d.clone()) };
    let profile = IotaProfile::new(n, &sa, &sd)?;
    let yes = profile.get(l).is_positive() && profile.get(n).is_positive();
    if yes && !(profile.all_positive(n / 2 + 1) && profile.t.is_positive()) {
        return Err(Error::CertificateFailure(format!("ι_{l}, ι_{n} > 0 but another ι_k is not")));
    }
    let reason = if yes {
        None
    } else {
        let bad = if profile.get(l).is_positive() { n } else { l };
        Some(format!("ι_{bad} = {} <= 0 for both signs", format_rational(profile.get(bad))))
    };
    Ok(Decision { answer: yes, case: Case::B, sign_flipped: flip && yes, witness: witness(&sa, &sd)?, reason })
}

/// `ι₂ = (n(n+1)/2 − 1)α + (n−1)β` and `ι_n = nα + β` for `αφ₁ + βφ₂` on `L_n`.
pub fn iota_ln(n: usize, alpha: &Rational, beta: &Rational) -> (Rational, Rational) {
    let n = n as i64;
    let iota_2 = q(n * (n + 1) / 2 - 1) * alpha + q(n - 1) * beta;
    let iota_n = q(n) * alpha + beta;
    (iota_2, iota_n)
}

pub fn decide_ln(n: usize, alpha: &Rational, beta: &Rational) -> Result<Decision> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need n >= 3, got {n}")));
    }
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::NilpotentDerivation("α = β = 0 gives a nilpotent derivation".into()));
    }
    let nn = n as i64;
    let trace = |al: &Rational, be: &Rational| q(nn * (nn + 1) / 2) * al + q(nn - 1) * be;
    let t = trace(alpha, beta);
    let flip = t.is_negative();
    let (sa, sb) = if flip { (-alpha.clone(), -beta.clone()) } else { (alpha.clone(), beta.clone()) };
    let (iota_2, iota_n) = iota_ln(n, &sa, &sb);
    let yes = iota_2.is_positive() && iota_n.is_positive();
    let reason = if t.is_zero() {
        Some("unimodular: T = 0".to_string())
    } else if yes {
        None
    } else if !iota_2.is_positive() {
        Some(format!("ι_2 = {} <= 0 for both signs", format_rational(&iota_2)))
    } else {
        Some(format!("ι_{n} = {} <= 0 for both signs", format_rational(&iota_n)))
    };
    let t = trace(&sa, &sb);
    Ok(Decision {
        answer: yes,
        case: Case::A,
        sign_flipped: flip && yes,
        witness: Witness::Ln { n, alpha: sa, beta: sb, iota_2, iota_n, t },
        reason,
    })
}

/// Trace of `D` on `span(X_k, …, X_n)`, `k` counted from 1.
pub fn iota_general(d: &DerivationMatrix, k: usize) -> Result<Rational> {
    let m = d.matrix();
    let n = m.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k must lie in 1..={n}, got {k}")));
    }
    for i in 0..k - 1 {
        for j in k - 1..n {
            if !m[(i, j)].is_zero() {
                return Err(Error::NotInvariant);
            }
        }
    }
    Ok((k - 1..n).map(|i| m[(i, i)].clone()).sum())
}

enum Nilradical {
    Q,
    L,
    Other,
}

fn identify(nil: &LieAlgebra) -> Nilradical {
    let n = nil.dim();
    if n >= 4 && n.is_multiple_of(2) && make_qn(n).is_ok_and(|q| &q == nil) {
        Nilradical::Q
    } else if n >= 3 && make_ln(n).is_ok_and(|l| &l == nil) {
        Nilradical::L
    } else {
        Nilradical::Other
    }
}

/// Torus coordinates of a derivation read off `ι_{n−1}` and `ι_n`:
/// `(a, d)` on `Q_n`, `(α, β)` on `L_n`.
fn torus_coordinates(d: &DerivationMatrix, family: &Nilradical) -> Result<(Rational, Rational)> {
    let n = d.dim();
    let iota_n = iota_general(d, n)?;
    let iota_n1 = iota_general(d, n - 1)?;
    match family {
        Nilradical::Q => {
            // ι_n = (n−3)a + 2d, ι_{n−1} = ι_n + (n−3)a + d
            let dd = q(2) * &iota_n - &iota_n1;
            let a = (&iota_n - q(2) * &dd) / q(n as i64 - 3);
            Ok((a, dd))
        }
        Nilradical::L => {
            let alpha = q(2) * &iota_n - &iota_n1;
            let beta = &iota_n - q(n as i64) * &alpha;
            Ok((alpha, beta))
        }
        Nilradical::Other => unreachable!("only catalog algebras have torus coordinates"),
    }
}

/// Decides a solvable extension `n ⋊ span(D₁, …, D_k)` of a filiform algebra.
///
/// Commutation of the `Dᵢ` modulo inner derivations is assumed, not checked.
pub fn decide_extension(nil: &LieAlgebra, derivations: &[DerivationMatrix]) -> Result<Decision> {
    if derivations.is_empty() {
        return Err(Error::InvalidParameter("no derivations given".into()));
    }
    if !nil.is_filiform()? {
        return Err(Error::Unsupported("nilradical is not filiform".into()));
    }
    let ders =
        derivations.iter().map(|d| DerivationMatrix::new(nil, d.matrix().clone())).collect::<Result<Vec<_>>>()?;
    let n = nil.dim();
    let family = identify(nil);
    if let Nilradical::Other = family {
        return decide_other(&ders);
    }
    let coords = ders.iter().map(|d| torus_coordinates(d, &family)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Rational>> = coords.iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
    let params = QMatrix::from_rows(rows)?;
    if params.rank() < ders.len() {
        return Err(Error::NilpotentDerivation(format!(
            "{} derivations span at most a {}-dimensional torus image, so a nonzero combination is nilpotent",
            ders.len(),
            params.rank()
        )));
    }
    if ders.len() == 1 {
        let (x, y) = &coords[0];
        return match family {
            Nilradical::Q => decide_qn(n, x, y),
            _ => decide_ln(n, x, y),
        };
    }
    // two independent torus directions: aim for a = d = 1 on Q_n, φ₁ on L_n
    let target = match family {
        Nilradical::Q => vec![q(1), q(1)],
        _ => vec![q(1), q(0)],
    };
    let coefficients = params.transpose().solve(&target)?;
    let mut combo = QMatrix::zeros(n, n);
    for (c, d) in coefficients.iter().zip(&ders) {
        combo = combo.add(&d.matrix().scale(c))?;
    }
    let eigenvalues = match family {
        Nilradical::Q if n >= 6 => qn_eigenvalues(n, &q(1), &q(1)),
        Nilradical::Q => vec![q(1), q(1), q(2), q(3)],
        _ => (1..=n as i64).map(q).collect(),
    };
    let positive = DerivationMatrix::new(nil, combo)?;
    for k in 1..=n {
        if let Ok(iota) = iota_general(&positive, k) {
            let tail: Rational = eigenvalues[k - 1..].iter().sum();
            if iota != tail {
                return Err(Error::CertificateFailure("witness combination has unexpected spectrum".into()));
            }
        }
    }
    Ok(Decision {
        answer: true,
        case: Case::C,
        sign_flipped: false,
        witness: Witness::Positive { coefficients, eigenvalues },
        reason: None,
    })
}

fn decide_other(ders: &[DerivationMatrix]) -> Result<Decision> {
    if ders.len() > 1 {
        return Err(Error::Unsupported("filiform algebras outside L_n and Q_n have rank at most one here".into()));
    }
    let m = ders[0].matrix();
    if !m.is_lower_triangular() && !m.transpose().is_lower_triangular() {
        return Err(Error::Unsupported("derivation is not triangular in the given basis".into()));
    }
    let diag = m.diagonal();
    if diag.iter().all(Zero::is_zero) {
        return Err(Error::NilpotentDerivation("all eigenvalues vanish".into()));
    }
    let flip = diag.iter().all(|v| v.is_negative());
    if !flip && !diag.iter().all(|v| v.is_positive()) {
        return Err(Error::Unsupported("eigenvalues of mixed sign on a rank-one filiform algebra".into()));
    }
    let eigenvalues = if flip { diag.iter().map(|v| -v).collect() } else { diag };
    Ok(Decision {
        answer: true,
        case: Case::C,
        sign_flipped: flip,
        witness: Witness::Positive { coefficients: vec![if flip { q(-1) } else { q(1) }], eigenvalues },
        reason: None,
    })
}

/// Solution of `aV₁ + dV₂ = Σ wᵢFᵢ + Σ yⱼF_{n−2+j} + z₁E₁ + z₂E₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct System18 {
    pub w: Vec<Rational>,
    pub y: Vec<Rational>,
    pub z1: Rational,
    pub z2: Rational,
}

/// `z₁ = (V₁, aV₁ + dV₂)` and `z₂ = (m+1)ι_n` in closed form.
pub fn z_closed_forms(n: usize, a: &Rational, d: &Rational) -> Result<(Rational, Rational)> {
    let (iota_n1, iota_n) = (iota_qn(n, a, d, n - 1)?, iota_qn(n, a, d, n)?);
    let ni = n as i64;
    let z1 = qf(ni * ni * ni - 6 * ni * ni + 11 * ni + 6, 6 * (ni - 3)) * &iota_n1
        + qf(ni * ni - 7 * ni + 6, 2 * (ni - 3)) * &iota_n;
    let z2 = q(ni / 2 + 1) * iota_n;
    Ok((z1, z2))
}

/// `y_j = ½ min_{3≤k≤m} ι_k / (m−1)`.
pub fn default_y(n: usize, a: &Rational, d: &Rational) -> Result<Vec<Rational>> {
    let m = n / 2;
    let min = (3..=m).map(|k| iota_qn(n, a, d, k)).collect::<Result<Vec<_>>>()?.into_iter().min().expect("m >= 3");
    Ok(vec![min / q(2 * (m as i64 - 1)); m - 2])
}

/// Exact solution of the triangular system; `y` has length `m − 2`.
pub fn solve_system18(n: usize, a: &Rational, d: &Rational, y: &[Rational]) -> Result<System18> {
    check_qn_dim(n)?;
    let m = n / 2;
    if y.len() != m - 2 {
        return Err(Error::DimensionMismatch { expected: m - 2, got: y.len() });
    }
    if let Some(j) = y.iter().position(|v| !v.is_positive()) {
        return Err(Error::InvalidParameter(format!("y[{}] must be positive", j + 1)));
    }
    let cone = crate::construct::cone_vectors_qn(n)?;
    let lambda = qn_eigenvalues(n, a, d);
    let (w_vecs, y_vecs) = cone.f.split_at(n - 2);
    let mut rhs = lambda.clone();
    for (yj, v) in y.iter().zip(y_vecs) {
        for (r, c) in rhs.iter_mut().zip(v) {
            *r -= yj * c;
        }
    }
    let system = QMatrix::from_rows((2..n).map(|row| w_vecs.iter().map(|v| v[row].clone()).collect()).collect())?;
    let w = system.solve(&rhs[2..])?;
    let mut residual = rhs;
    for (wi, v) in w.iter().zip(w_vecs) {
        for (r, c) in residual.iter_mut().zip(v) {
            *r -= wi * c;
        }
    }
    if residual[2..].iter().any(|r| !r.is_zero()) {
        return Err(Error::CertificateFailure("nonzero residual in the triangular system".into()));
    }
    if let Some(i) = w.iter().position(|v| !v.is_positive()) {
        return Err(Error::InfeasibleY { index: i + 1, value: format_rational(&w[i]) });
    }
    Ok(System18 { w, y: y.to_vec(), z1: residual[0].clone(), z2: residual[1].clone() })
}

/// [`solve_system18`] with [`default_y`], halving `y` until every `w` is positive.
pub fn solve_system18_default(n: usize, a: &Rational, d: &Rational) -> Result<System18> {
    let mut y = default_y(n, a, d)?;
    for _ in 0..64 {
        match solve_system18(n, a, d, &y) {
            Err(Error::InfeasibleY { .. }) => y.iter_mut().for_each(|v| *v /= q(2)),
            other => return other,
        }
    }
    solve_system18(n, a, d, &y)
}
