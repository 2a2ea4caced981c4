// 3ASK `{−α, 0, +α}`: the two-qubit register after `n` slices, its Gram
// matrix and the minimum error found by the iterative POVM optimizer.

use coherent_receiver::compression::run_3ask;
use coherent_receiver::discrimination::{alphabet_helstrom_bound, receiver_error};
use coherent_receiver::sweep::gram_matrices;
use coherent_receiver::{Alphabet, TransferChannel};

pub fn run() -> coherent_receiver::Result<()> {
    let (alpha, n) = (1.0, 30);
    let (coherent, compressed) = gram_matrices(Alphabet::ThreeAsk, alpha, n)?;
    println!("coherent Gram vs compressed Gram after n = {n} slices");
    for i in 0..3 {
        let row: Vec<String> = (0..3)
            .map(|j| format!("{:.6}/{:.6}", coherent[(i, j)].re, compressed[(i, j)].re))
            .collect();
        println!("  {}", row.join("  "));
    }

    let bound = alphabet_helstrom_bound(Alphabet::ThreeAsk, alpha)?;
    for channel in TransferChannel::ALL {
        let run = run_3ask(alpha, n, channel)?;
        println!(
            "{channel:>11}: error {:.8}  (bound {bound:.8}, max step residual {:.1e})",
            receiver_error(&run)?,
            run.max_step_residual
        );
    }
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
