// BPSK `{−α, +α}` through the slice-and-compress receiver with ideal qubit
// slices. The register error follows `(1−B)²/(2(1+B²))` and approaches the
// Helstrom bound as the number of slices grows.

use coherent_receiver::compression::{bpsk_b_recursion, run_bpsk};
use coherent_receiver::discrimination::{alphabet_helstrom_bound, receiver_error};
use coherent_receiver::{Alphabet, TransferChannel};

pub fn run() -> coherent_receiver::Result<()> {
    let alpha = 0.8;
    let bound = alphabet_helstrom_bound(Alphabet::Bpsk, alpha)?;
    println!("alpha = {alpha}, Helstrom bound = {bound:.12}");
    println!("{:>6} {:>16} {:>16} {:>12}", "n", "simulated", "(1-B)^2/2(1+B^2)", "gap");
    for n in [2, 10, 30, 100, 300] {
        let run = run_bpsk(alpha, n, TransferChannel::ExactPure)?;
        let err = receiver_error(&run)?;
        let b = bpsk_b_recursion(alpha, n, n)?;
        let formula = (1.0 - b).powi(2) / (2.0 * (1.0 + b * b));
        println!("{n:>6} {err:>16.12} {formula:>16.12} {:>12.3e}", err - bound);
    }
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
