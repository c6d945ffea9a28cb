use std::collections::HashMap;
use std::io::Write;

fn main() {
    let env: HashMap<String, String> = std::env::vars().collect();
    let outcome = k3w::cli::run(std::env::args_os(), &env);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
