//! PCR JSON, PGM import and rendering, and the event log, in a temp dir.

use rectv::flow::{flow_evolve, solution_at};
use rectv::io::{event_log, import_pgm, read_pcr, write_pcr, write_pgm};
use rectv::rational::q;
use rectv::{fixtures, Mode};

fn main() -> rectv::Result<()> {
    let dir = std::env::temp_dir().join("rectv-files");
    std::fs::create_dir_all(&dir)?;

    let u0 = fixtures::nonequiv();
    let doc = dir.join("nonequiv.json");
    std::fs::write(&doc, write_pcr(&u0, Mode::Plane))?;
    let (back, mode) = read_pcr(&doc)?;
    assert_eq!(back, u0);

    let tl = flow_evolve(&back, mode, None)?;
    std::fs::write(dir.join("events.json"), event_log(&tl).to_json())?;
    for (k, t) in [q(0, 1), q(9, 64), q(1, 2)].iter().enumerate() {
        write_pgm(&solution_at(&tl, t)?, &dir.join(format!("frame{k}.pgm")), 16)?;
    }

    // a rendered frame comes back as a fine raster; coarsening recovers the cells
    let img = import_pgm(&dir.join("frame0.pgm"), None)?;
    let coarse = img.coarsen();
    println!(
        "frame0: {}x{} pixels -> {}x{} cells",
        img.grid().nx(),
        img.grid().ny(),
        coarse.grid().nx(),
        coarse.grid().ny()
    );
    println!("wrote {}", dir.display());
    Ok(())
}
