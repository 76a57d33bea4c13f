//! An interrupted and resumed counterexample hunt.

use std::error::Error;

use contractible::hunt::{hunt, HuntConfig, HuntInput, HuntOutcome};
use contractible::MemoCache;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let input = HuntInput::enumerated(7)?;
    let mut config = HuntConfig {
        workers: 2,
        chunk_size: 100,
        checkpoint: Some(dir.path().join("hunt.ckpt")),
        stop_after_chunks: Some(4),
        ..HuntConfig::default()
    };

    if let HuntOutcome::Interrupted { chunks_done } = hunt(&input, &config, &MemoCache::new())? {
        println!("stopped after {chunks_done} chunks");
    }
    config.stop_after_chunks = None;
    let report = hunt(&input, &config, &MemoCache::new())?.report().ok_or("resume did not finish")?;
    print!("{report}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
