//! Runs every bundled configuration through the same path as the command-line
//! tool and lists the files it writes.

use std::path::Path;

use donor_cpt::io::{parse_config, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join("donor-cpt-example");
    for name in ["levels", "energetics", "extrapolate", "power_series", "cpt_sweep"] {
        let path = root.join("configs").join(format!("{name}.toml"));
        let cfg = parse_config(&path, None)?;
        let o = run(&cfg, &path, &out.join(name), None)?;
        println!("{name}: sha256 {}", &o.config_sha256[..16]);
        for f in &o.files {
            println!("  {}", f.display());
        }
    }
    Ok(())
}
