//! Golden files for the labelled figure fixtures. Set `CELLRES_BLESS=1` to
//! rewrite them.

use std::path::PathBuf;

use cellres::constructions::all_fixtures;
use cellres::{CellComplex, MonomialLabelling};

fn golden_path(id: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("figure-{id}.json"))
}

#[test]
fn fixtures_match_golden_files() {
    let bless = std::env::var_os("CELLRES_BLESS").is_some();
    for fx in all_fixtures() {
        let json = serde_json::to_string_pretty(&fx).unwrap() + "\n";
        let path = golden_path(&fx.id);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &json).unwrap();
            continue;
        }
        let stored = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(stored, json, "fixture {} drifted from {}", fx.id, path.display());
    }
}

#[test]
fn golden_files_round_trip() {
    for fx in all_fixtures() {
        let stored: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(golden_path(&fx.id)).unwrap()).unwrap();
        let complex: CellComplex = serde_json::from_value(stored["complex"].clone()).unwrap();
        let labelling: MonomialLabelling = serde_json::from_value(stored["labelling"].clone()).unwrap();
        assert_eq!(complex, fx.complex, "{}", fx.id);
        assert_eq!(labelling, fx.labelling, "{}", fx.id);
    }
}
