use pats_core::{reference_tables, ReferenceTables};

#[test]
fn shipped_json_matches_embedded_tables() {
    let raw = include_str!("../data/reference_tables.json");
    let shipped: ReferenceTables = serde_json::from_str(raw).unwrap();
    assert_eq!(shipped, reference_tables());
    assert_eq!(shipped.sweep.len(), 12);
    assert_eq!(shipped.best.len(), 6);
}
