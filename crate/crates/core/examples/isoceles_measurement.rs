// Optimal measurement of three equiprobable pure states whose Gram matrix
// has two equal overlaps, compared with the general iterative optimizer.

use coherent_receiver::discrimination::{
    isoceles_three_pure, povm_optimize, DiscriminationProblem, PovmOptions,
};
use coherent_receiver::CoherentEnsemble;

pub fn run() -> coherent_receiver::Result<()> {
    println!("{:>5} {:>14} {:>14} {:>10}", "alpha", "isoceles", "iterative", "residual");
    for alpha in [0.25f64, 0.5, 1.0, 1.5, 2.0] {
        let x = (-alpha * alpha / 2.0).exp();
        let y = (-2.0 * alpha * alpha).exp();
        let sol = isoceles_three_pure(x, y)?;
        let ens = CoherentEnsemble::three_ask(alpha)?;
        let prob = DiscriminationProblem::from_gram(&ens.gram_matrix(), ens.priors().to_vec())?;
        let it = povm_optimize(&prob, &PovmOptions::default())?;
        println!(
            "{alpha:>5} {:>14.10} {:>14.10} {:>10.1e}",
            sol.error_prob,
            it.error_prob,
            sol.max_residual(x, y)
        );
    }
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
