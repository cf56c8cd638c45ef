use clap::Parser;
use circle_heat::experiment::{run_to_exit_code, ExperimentConfig};

fn main() {
    let config = ExperimentConfig::parse();
    let code = run_to_exit_code(&config, &mut std::io::stderr());
    std::process::exit(code);
}
