//! Ricci operator of `Q_6` for the identity metric and for a random flag metric.
use filiform_ricci::catalog::make_qn;
use filiform_ricci::ricci::{nilpotent_scalar_curvature, random_gram, ricci_nilpotent, sorted_eigenvalues};
use nalgebra::DMatrix;

fn main() -> filiform_ricci::Result<()> {
    let q6 = make_qn(6)?;
    let identity = DMatrix::identity(6, 6);
    let ric = ricci_nilpotent(&q6, &identity)?;
    println!("identity metric, diagonal: {:?}", ric.diagonal().as_slice());
    println!("scalar curvature: {}", nilpotent_scalar_curvature(&q6, &identity)?);

    let gram = random_gram(6, 11);
    let ric = ricci_nilpotent(&q6, &gram)?;
    println!("random metric, eigenvalues: {:?}", sorted_eigenvalues(&ric));
    println!("trace {:.6} vs scalar {:.6}", ric.trace(), nilpotent_scalar_curvature(&q6, &gram)?);
    Ok(())
}
