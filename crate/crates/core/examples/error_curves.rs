// Error-probability curves against α for several slice counts, written as
// CSV to stdout.

use coherent_receiver::sweep::{run_sweep, write_records, OutputFormat, PartialConfig, PartialGrid};
use coherent_receiver::{Alphabet, TransferChannel};

pub fn run() -> coherent_receiver::Result<()> {
    let config = PartialConfig {
        alphabet: Some(Alphabet::Bpsk),
        channel: Some(TransferChannel::IdealSwap),
        slice_counts: Some(vec![2, 10, 30]),
        alpha_grid: Some(PartialGrid {
            min: Some(0.0),
            max: Some(1.5),
            steps: Some(7),
        }),
        ..Default::default()
    }
    .resolve()?;
    let rows = run_sweep(&config)?;
    write_records(&rows, OutputFormat::Csv, std::io::stdout().lock())
}

fn main() -> coherent_receiver::Result<()> {
    run()
}
