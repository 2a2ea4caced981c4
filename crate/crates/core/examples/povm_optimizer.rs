// Minimum-error POVM for three mixed qubit states with unequal priors.

use coherent_receiver::discrimination::{povm_optimize, DiscriminationProblem, PovmOptions};
use coherent_receiver::{ComplexMatrix, ComplexVector, C64};

fn noisy_state(theta: f64, phi: f64, purity: f64) -> coherent_receiver::Result<ComplexMatrix> {
    let v = ComplexVector::new(vec![
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ])?;
    Ok(&v.projector().scale_real(purity) + &ComplexMatrix::identity(2).scale_real((1.0 - purity) / 2.0))
}

pub fn run() -> coherent_receiver::Result<()> {
    let states = vec![
        noisy_state(0.0, 0.0, 0.9)?,
        noisy_state(2.1, 0.0, 0.8)?,
        noisy_state(2.1, 2.1, 0.95)?,
    ];
    let prob = DiscriminationProblem::new(states, vec![0.5, 0.3, 0.2])?;
    let sol = povm_optimize(&prob, &PovmOptions::default())?;
    println!(
        "error {:.10} after {} sweeps (converged: {})",
        sol.error_prob, sol.iterations, sol.converged
    );
    println!(
        "certificate: hermiticity {:.1e}, min eigenvalue {:.1e}",
        sol.hermiticity_residual, sol.min_certificate_eigenvalue
    );
    for (k, e) in sol.povm.elements().iter().enumerate() {
        println!("  Pi_{k} trace {:.6}", e.trace().re);
    }
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
