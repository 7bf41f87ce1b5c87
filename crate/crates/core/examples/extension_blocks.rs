//! Block form of the Ricci operator of `Q_8 ⋊ ℝ` next to the general formula.
use filiform_ricci::catalog::make_qn;
use filiform_ricci::catalog::qn_diagonal_derivation;
use filiform_ricci::linalg::q;
use filiform_ricci::ricci::{random_gram, ricci_blocks, ricci_operator_general, sorted_eigenvalues, ExtensionMetric};

fn main() -> filiform_ricci::Result<()> {
    let n = 8;
    let der = qn_diagonal_derivation(n, &q(1), &q(-2))?;
    let ext = ExtensionMetric::new(make_qn(n)?, der, random_gram(n, 3))?;
    let report = ricci_blocks(&ext)?;
    println!("T = {}", ext.trace());
    println!("r3 = {:.6}", report.r3);
    println!("R2 = {:?}", report.r2.as_slice());
    println!("block eigenvalues:   {:?}", report.eigenvalues);
    let general = ricci_operator_general(&ext.flattened())?;
    println!("general eigenvalues: {:?}", sorted_eigenvalues(&general));
    println!("negative definite at this metric: {}", report.negative_definite);
    Ok(())
}
