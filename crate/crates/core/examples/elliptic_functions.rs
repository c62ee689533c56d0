//! Jacobi elliptic functions and quarter periods.

use emsep::elliptic::{jacobi, Modulus};

pub fn main() -> emsep::Result<()> {
    let m = Modulus::new(0.8)?;
    let (k, kp) = (m.quarter_period(), m.complementary_quarter_period());
    println!("k = 0.8: K = {k:.15}, K' = {kp:.15}");
    for u in [0.0, 0.25 * k, 0.5 * k, k] {
        let j = jacobi(u, m.k())?;
        println!(
            "u = {u:.6}  sn = {:+.12}  cn = {:+.12}  dn = {:.12}  sn²+cn²-1 = {:+.1e}",
            j.sn,
            j.cn,
            j.dn,
            j.sn * j.sn + j.cn * j.cn - 1.0
        );
    }
    let half = jacobi(0.5 * k, m.k())?;
    println!("sn(K/2)² = {:.15}, 1/(1+k') = {:.15}", half.sn * half.sn, 1.0 / (1.0 + m.kprime()));
    Ok(())
}
