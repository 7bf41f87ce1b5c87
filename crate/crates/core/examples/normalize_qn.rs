//! Rewrites `Q_8` in a skewed chain basis, then recovers the normal form from the `K` matrix alone.
use filiform_ricci::catalog::{chain_basis, chain_normal_form, k_matrix_of, normalize_to_qn};
use filiform_ricci::linalg::{format_rational, qf, unit_vector};

fn main() -> filiform_ricci::Result<()> {
    let n = 8;
    let normal = chain_normal_form(n)?;

    // new generators Z1 = 2Y1 - Y2 and Z2 = -(3/2)(Y2 + Y4 - Y5/3)
    let mut z1 = unit_vector(n, 0);
    z1[0] = qf(2, 1);
    z1[1] = qf(-1, 1);
    let mut z2 = unit_vector(n, 1);
    z2[3] = qf(1, 1);
    z2[4] = qf(-1, 3);
    let z2: Vec<_> = z2.iter().map(|v| v * qf(-3, 2)).collect();
    let skewed = normal.change_basis(&chain_basis(&normal, &z1, &z2)?)?;
    let k = k_matrix_of(&skewed)?;
    println!("K in the skewed basis:");
    for row in k.rows_vec() {
        println!("  {}", row.iter().map(|c| format!("{:>6}", format_rational(c))).collect::<String>());
    }

    let (p, recovered) = normalize_to_qn(n, &k)?;
    println!("normalizing basis change:\n{p:?}");
    println!("recovered the normal form: {}", recovered == normal);
    Ok(())
}
