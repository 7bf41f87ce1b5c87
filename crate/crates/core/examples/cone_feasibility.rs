//! The convex solver behind the construction: an interior target converges, a vertex diverges.
use filiform_ricci::catalog::qn_eigenvalues;
use filiform_ricci::construct::{cone_vectors_qn, solve_feasibility, ConeProblem};
use filiform_ricci::linalg::{q, to_f64};
use nalgebra::DVector;

fn main() -> filiform_ricci::Result<()> {
    let n = 6;
    let f = cone_vectors_qn(n)?.f;
    let u = DVector::from_iterator(n, qn_eigenvalues(n, &q(1), &q(-1)).iter().map(to_f64));
    let problem = ConeProblem::from_f_vectors(&f, u.clone())?;
    let sol = solve_feasibility(&problem)?;
    println!("target u = {:?}", u.as_slice());
    println!("x = {:?} after {} iterations", sol.x.as_slice(), sol.iterations);
    println!("slack   = {:?}", problem.slack(&sol.x).as_slice());
    println!("e^x     = {:?}", sol.x.map(f64::exp).as_slice());

    let vertex = DVector::from_iterator(n, f[0].iter().map(to_f64)) * 2.0;
    let boundary = ConeProblem::from_f_vectors(&f, vertex)?;
    println!("vertex target: {:?}", solve_feasibility(&boundary).map(|s| s.x).unwrap_err());
    Ok(())
}
