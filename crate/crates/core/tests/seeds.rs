//! Seeds certify on load and survive a cache round trip unchanged.

use baranyai::format::serialize;
use baranyai::seeds::{bp_8_4, SeedCache, SeedStore, EMBEDDED};
use baranyai::verify::verify_design;
use baranyai::DesignKind;

#[test]
fn every_seed_certifies() {
    let store = SeedStore::embedded_only();
    let seeds = [
        bp_8_4(),
        store.bp(12, 4).unwrap(),
        store.bp3(12).unwrap(),
        store.bp3(15).unwrap(),
        store.bp3(21).unwrap(),
        store.rsqs(8).unwrap(),
        store.rsqs(16).unwrap(),
    ];
    for d in &seeds {
        let r = verify_design(d);
        assert!(r.ok(), "{} n={} k={}\n{}", d.kind.tag(), d.n, d.k, r.to_kv());
    }
    assert_eq!(seeds[5].kind, DesignKind::Rsqs);
    assert_eq!(seeds[5].classes.len(), 7);
    assert_eq!(seeds[6].classes.len(), 35);
}

#[test]
fn cache_round_trip_is_byte_identical() {
    let dir = std::env::temp_dir().join(format!("baranyai-seed-test-{}", std::process::id()));
    let cache = SeedCache::new(&dir);
    for e in EMBEDDED {
        let d = baranyai::seeds::load_embedded(e).unwrap();
        let path = cache.store(&d).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), e.text);
        let back = cache.load(d.kind, d.n, d.k).unwrap().expect("stored seed");
        assert_eq!(serialize(&back), e.text);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
