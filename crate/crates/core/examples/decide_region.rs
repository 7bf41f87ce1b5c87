//! Prints the yes/no region of `Q_n ⋊ ℝ` on a coarse grid, one character per point.
use filiform_ricci::criterion::{critical_l, decide_qn};
use filiform_ricci::linalg::qf;

fn main() -> filiform_ricci::Result<()> {
    for n in [6, 8, 12] {
        let crit = critical_l(n)?;
        println!("n = {n}: p = {}, l = {}  (+ yes, . no, 0 unimodular)", crit.p, crit.l);
        for di in (-8..=8).rev() {
            let row: String = (-8..=8)
                .map(|ai| {
                    let (a, d) = (qf(ai, 4), qf(di, 4));
                    match decide_qn(n, &a, &d) {
                        Ok(dec) if dec.answer => '+',
                        Ok(dec) if dec.reason.as_deref().is_some_and(|r| r.starts_with("unimodular")) => '0',
                        Ok(_) => '.',
                        Err(_) => ' ',
                    }
                })
                .collect();
            println!("  d = {:>5}  {row}", format!("{}/4", di));
        }
    }
    let dec = decide_qn(8, &qf(1, 1), &qf(-5, 2))?;
    println!("{}", serde_json::to_string_pretty(&dec.to_json()).expect("json"));
    Ok(())
}
