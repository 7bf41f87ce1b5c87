#![allow(dead_code)]

use filiform_ricci::algebra::LieAlgebra;
use filiform_ricci::catalog::lower_nilpotent_derivations;
use filiform_ricci::linalg::{qf, QMatrix, Rational};
use nalgebra::DMatrix;
use rand::Rng;

/// Exact rational grid `lo, lo + step, …, hi` with `step = 1/den`.
pub fn grid(lo: i64, hi: i64, den: i64) -> Vec<Rational> {
    (lo * den..=hi * den).map(|k| qf(k, den)).collect()
}

pub fn grid2(lo: i64, hi: i64, den: i64) -> Vec<(Rational, Rational)> {
    let g = grid(lo, hi, den);
    g.iter().flat_map(|a| g.iter().map(move |d| (a.clone(), d.clone()))).collect()
}

/// Random combination of the given nilpotent derivations, with coefficients
/// in `{-2, -3/2, …, 2}`.
pub fn random_combination<R: Rng>(basis: &[QMatrix], rng: &mut R) -> QMatrix {
    let n = basis.first().map_or(0, QMatrix::nrows);
    let mut m = QMatrix::zeros(n, n);
    for der in basis {
        let c = qf(rng.gen_range(-4..=4), 2);
        m = m.add(&der.scale(&c)).unwrap();
    }
    m
}

pub fn lower_basis(nil: &LieAlgebra) -> Vec<QMatrix> {
    lower_nilpotent_derivations(nil).into_iter().map(|d| d.into_matrix()).collect()
}

pub fn random_lower<R: Rng>(nil: &LieAlgebra, rng: &mut R) -> QMatrix {
    random_combination(&lower_basis(nil), rng)
}

/// Cyclic Jacobi rotations; eigenvalues sorted ascending.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].powi(2))
            .sum();
        if off.sqrt() <= 1e-15 * a.norm() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Moves the `f` row and column of a `(f, e₁, …, eₙ)` matrix to the end.
pub fn f_last(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| m[((i + 1) % n, (j + 1) % n)])
}

pub fn report(index: usize, name: &str, ok: bool, detail: &str) {
    println!("acceptance {index:>2} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
}
