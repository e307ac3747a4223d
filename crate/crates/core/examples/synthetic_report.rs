//! Writes a full report for a seeded synthetic corpus.
//!
//! ```text
//! cargo run -p negaffect-core --example synthetic_report -- out/synthetic
//! ```

use negaffect::affect::{EmoticonConfig, Lexicon};
use negaffect::pipeline::{CorpusFormat, RunConfig, Session};
use negaffect::synthetic::{generate, SyntheticSpec};
use negaffect::Execution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/synthetic".into());
    let data = generate(&SyntheticSpec::full())?;
    let mut cfg = RunConfig::new("synthetic", CorpusFormat::Canonical);
    cfg.output.dir = out.into();
    let session = Session::from_parts(
        cfg,
        data.corpus,
        EmoticonConfig::builtin(),
        Lexicon::builtin(),
        Some(data.scores),
        Execution::Parallel,
    )?;
    for p in session.cmd_report()? {
        println!("{}", p.display());
    }
    Ok(())
}
