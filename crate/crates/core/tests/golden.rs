//! Shipped presets must reproduce their recorded golden files exactly.
//! Regenerate with `cargo run -p qgauss-core --release --example regen_golden`.

use std::path::Path;

use qgauss::presets::{list_presets, Built, Preset};
use qgauss::Budget;

#[test]
fn presets_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets/golden");
    for name in list_presets() {
        let built = Built::new(Preset::builtin(name, Budget::default()).unwrap(), Budget::default()).unwrap();
        let want = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        assert_eq!(built.golden().to_json_string(), want, "{name} drifted from its golden file");
    }
}

#[test]
fn golden_relations_are_sorted_and_unique() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets/golden");
    for name in list_presets() {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap()).unwrap();
        let rels: Vec<&str> = v["frt_relations"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        assert!(!rels.is_empty());
        let mut set = rels.clone();
        set.dedup();
        assert_eq!(set.len(), rels.len(), "{name}");
    }
}
