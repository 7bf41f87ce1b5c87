//! Builds `L_n` and `Q_n`, checks the structural invariants and prints the torus.
use filiform_ricci::catalog::{make_qn, q4_to_l4_map, torus, Family, FiliformSpec};
use filiform_ricci::linalg::format_rational;

fn main() -> filiform_ricci::Result<()> {
    for (family, n) in [(Family::L, 5), (Family::Q, 6), (Family::Q, 8)] {
        let spec = FiliformSpec::new(family, n)?;
        let alg = spec.algebra();
        let (phi1, phi2) = torus(&spec)?;
        let fmt = |v: Vec<_>| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
        println!("{spec:?}");
        println!(
            "  brackets: {}, filiform: {}, Jacobi defect: {}",
            alg.num_brackets(),
            alg.is_filiform()?,
            alg.jacobi_defect()
        );
        println!("  phi1 = diag({})", fmt(phi1.matrix().diagonal()));
        println!("  phi2 = diag({})", fmt(phi2.matrix().diagonal()));
        println!("  dim Der = {}", alg.derivation_space().len());
    }

    let q4 = make_qn(4)?;
    let l4 = FiliformSpec::new(Family::L, 4)?.algebra();
    println!("Q4 ≅ L4 via (-X2, X1, X3, X4): {}", q4.change_basis(&q4_to_l4_map())? == l4);
    Ok(())
}
