// Three four-mode BPSK codewords measured jointly on the compressed
// registers versus mode by mode.

use coherent_receiver::compression::run_multimode;
use coherent_receiver::TransferChannel;

pub fn run() -> coherent_receiver::Result<()> {
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "alpha", "joint", "per-mode", "helstrom", "homodyne");
    for alpha in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let r = run_multimode(alpha, 20, TransferChannel::IdealSwap)?;
        println!(
            "{alpha:>5} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            r.joint_error, r.per_mode_error, r.helstrom_bound, r.homodyne_error
        );
    }
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
