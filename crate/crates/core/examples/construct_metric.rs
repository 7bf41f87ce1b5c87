//! Constructs and certifies a negative Ricci metric, with and without a lower derivation part.
use filiform_ricci::catalog::{lower_nilpotent_derivations, make_qn};
use filiform_ricci::construct::{certify, construct, construct_ln};
use filiform_ricci::linalg::{q, qf, QMatrix};

fn main() -> filiform_ricci::Result<()> {
    let n = 8;
    let plain = construct(n, &q(1), &q(-2), None)?;
    println!("Q8, a = 1, d = -2: s = {}, max eigenvalue {:.3e}", plain.s, plain.certificate.max_eigenvalue());

    let mut lower = QMatrix::zeros(n, n);
    for (i, der) in lower_nilpotent_derivations(&make_qn(n)?).iter().enumerate() {
        lower = lower.add(&der.matrix().scale(&qf(i as i64 % 3 - 1, 2)))?;
    }
    let skewed = construct(n, &q(-1), &q(2), Some(&lower))?;
    println!(
        "Q8, a = -1, d = 2 with lower part: sign flipped {}, s = {}, max eigenvalue {:.3e}",
        skewed.sign_flipped,
        skewed.s,
        skewed.certificate.max_eigenvalue()
    );

    // the serialized metric certifies on its own
    let file = skewed.to_file();
    let again = certify(&file.metric()?)?;
    println!("re-certified from file: {}", again.negative_definite);

    let l5 = construct_ln(5, &q(1), &q(0), None)?;
    println!("L5, phi1: certified {}, eigenvalues {:?}", l5.certified, l5.certificate.eigenvalues);

    match construct(6, &q(1), &qf(-8, 5), None) {
        Err(e) => println!("Q6, a = 1, d = -8/5: {e}"),
        Ok(_) => unreachable!("the criterion fails at this point"),
    }
    Ok(())
}
