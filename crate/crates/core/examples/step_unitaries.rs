// Step unitaries synthesized from their state-mapping contract.

use coherent_receiver::compression::{
    build_3ask_step, build_bpsk_step, build_state_mapper, bpsk_trajectory, threeask_trajectory,
};
use coherent_receiver::ComplexVector;

pub fn run() -> coherent_receiver::Result<()> {
    let beta = 0.25;
    let b = bpsk_trajectory(beta, 4)[2].b;
    let step = build_bpsk_step(beta, b)?;
    println!("BPSK step at B = {b:.6}:");
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|c| format!("{:+.6}", step.unitary[(r, c)].re)).collect();
        println!("  [{}]", row.join(" "));
    }
    println!("  contract residual {:.1e}, unitarity residual {:.1e}", step.contract_residual(), step.unitarity_residual());

    let params = threeask_trajectory(beta, 4)[2];
    let step = build_3ask_step(beta, params)?;
    println!(
        "3ASK step at C = {:.6}, D = {:.6}: contract residual {:.1e}, unitarity residual {:.1e}",
        params.c,
        params.d,
        step.contract_residual(),
        step.unitarity_residual()
    );

    // Any two sets with equal Gram matrices are related by a unitary.
    let s = 0.5f64.sqrt();
    let inputs = vec![ComplexVector::from_real(&[1.0, 0.0, 0.0])?, ComplexVector::from_real(&[s, s, 0.0])?];
    let outputs = vec![ComplexVector::from_real(&[0.0, 0.0, 1.0])?, ComplexVector::from_real(&[0.0, s, s])?];
    let u = build_state_mapper(&inputs, &outputs, 3)?;
    println!("mapper unitarity residual {:.1e}", u.unitarity_residual());
    Ok(())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
