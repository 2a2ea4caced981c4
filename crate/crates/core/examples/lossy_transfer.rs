// The two lossy optical-to-qubit transfers. Multi-photon components of a
// slice are lost, so the fidelity of all `n` slices scales as
// `1 − α⁶/2n²` (swap) or `1 − α⁴/2n` (single-excitation exchange).

use coherent_receiver::{TransferChannel, C64};

pub fn run() -> coherent_receiver::Result<()> {
    let beta = C64::new(0.3, 0.0);
    for ch in [TransferChannel::IdealSwap, TransferChannel::Stirap] {
        let rho = ch.apply(beta);
        println!("{ch}: rho(0.3) diag = ({:.6}, {:.6}), fidelity {:.10}", rho[(0, 0)].re, rho[(1, 1)].re, ch.fidelity(beta));
    }

    let alpha: f64 = 1.0;
    println!("{:>8} {:>14} {:>14}", "n", "n^2(1-F_a^n)", "n(1-F_b^n)");
    for n in [10, 100, 1000, 10_000] {
        let nf = n as f64;
        let a = nf * nf * TransferChannel::IdealSwap.infidelity_power(alpha, n)?;
        let b = nf * TransferChannel::Stirap.infidelity_power(alpha, n)?;
        println!("{n:>8} {a:>14.8} {b:>14.8}");
    }
    println!("limits   {:>14.8} {:>14.8}", alpha.powi(6) / 2.0, alpha.powi(4) / 2.0);
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
