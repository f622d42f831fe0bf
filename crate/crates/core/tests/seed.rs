use helicon::seed::*;
use rand::Rng;

#[test]
fn reference_values() {
    // FNV-1a of "a" and splitmix64(0) from their reference definitions.
    assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
    assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
}

#[test]
fn tags_give_distinct_streams() {
    let a: u64 = rng(7, "synth").random();
    let b: u64 = rng(7, "directions").random();
    let c: u64 = rng(7, "synth").random();
    assert_ne!(a, b);
    assert_eq!(a, c);
}
