//! Random metrics at a point where the criterion fails never reach negative Ricci curvature.
use filiform_ricci::algebra::DerivationMatrix;
use filiform_ricci::catalog::{lower_nilpotent_derivations, make_qn, qn_diagonal_derivation};
use filiform_ricci::construct::certify;
use filiform_ricci::linalg::{q, qf};
use filiform_ricci::ricci::{necessity_trace_bounds, sample_gram, ExtensionMetric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> filiform_ricci::Result<()> {
    let n = 8;
    let nil = make_qn(n)?;
    let (a, d) = (q(1), qf(-5, 2));
    let diag = qn_diagonal_derivation(n, &a, &d)?;
    let lower = lower_nilpotent_derivations(&nil);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut best = f64::INFINITY;
    for _ in 0..500 {
        let mut m = diag.matrix().clone();
        for der in &lower {
            m = m.add(&der.matrix().scale(&qf(rng.gen_range(-4..=4), 2)))?;
        }
        let ext = ExtensionMetric::new(nil.clone(), DerivationMatrix::new(&nil, m)?, sample_gram(n, &mut rng))?;
        let cert = certify(&ext.flattened())?;
        best = best.min(cert.max_eigenvalue());
        for (k, lhs, rhs) in necessity_trace_bounds(&ext)? {
            assert!(lhs >= rhs - 1e-9 * lhs.abs().max(1.0), "k = {k}: {lhs} < {rhs}");
        }
    }
    println!("Q8, a = 1, d = -5/2: smallest largest-eigenvalue over 500 metrics = {best:.4}");
    Ok(())
}
