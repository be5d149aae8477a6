//! Drives the command-line front end in-process.
//!
//! ```bash
//! cargo run --example cli_tour
//! ```

use circsynth::cli::run;

fn main() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join("circsynth-cli-tour");
    std::fs::create_dir_all(&dir)?;
    let circuit = dir.join("c.json");
    let circuit = circuit.to_str().unwrap();
    let csv = dir.join("bench.csv");
    let commands: Vec<Vec<&str>> = vec![
        vec!["synth", "--n", "27", "--depth", "3", "--kernel", "random:7", "--out", circuit],
        vec!["verify", "--circuit", circuit, "--kernel", "random:7"],
        vec!["verify", "--circuit", circuit, "--kernel", "random:8"],
        vec!["stats", "--circuit", circuit],
        vec!["bench", "--ns", "27,81", "--depths", "1,2,3", "--seeds", "1", "--csv", csv.to_str().unwrap()],
    ];
    for args in commands {
        println!("$ circsynth {}", args.join(" "));
        let code = run(std::iter::once("circsynth").chain(args));
        println!("exit {code}\n");
    }
    println!("{}", std::fs::read_to_string(csv)?);
    Ok(())
}
