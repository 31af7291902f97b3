//! Rewrites `presets/golden/<name>.json` for every shipped preset.
//!
//! cargo run -p qgauss-core --release --example regen_golden

use std::path::Path;

use qgauss::presets::{list_presets, Built, Preset};
use qgauss::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets/golden");
    std::fs::create_dir_all(&dir)?;
    for name in list_presets() {
        let built = Built::new(Preset::builtin(name, Budget::default())?, Budget::default())?;
        let path = dir.join(format!("{name}.json"));
        let text = built.golden().to_json_string();
        let old = std::fs::read_to_string(&path).unwrap_or_default();
        if old != text {
            std::fs::write(&path, text)?;
            println!("updated {}", path.display());
        }
    }
    Ok(())
}
