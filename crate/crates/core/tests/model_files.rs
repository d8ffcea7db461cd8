//! The shipped `models/*.model` files agree with the built-in models.

use std::path::PathBuf;

use nilform::builtin::{builtin, NAMES};
use nilform::complexgeom::Sign;
use nilform::model::parse_model;

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn every_builtin_has_a_matching_file() {
    for name in NAMES {
        let path = models_dir().join(format!("{name}.model"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = parse_model(&text).unwrap();
        assert_eq!(parsed, builtin(name, Sign::Plus).unwrap(), "{name}");
        assert_eq!(parse_model(&parsed.to_string()).unwrap(), parsed, "{name} round trip");
    }
}
