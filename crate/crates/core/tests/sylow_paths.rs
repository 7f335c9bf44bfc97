use holobrace::enumerate::{find_regular_full, find_regular_sylow};
use holobrace::holomorph::Holomorph;
use holobrace::Config;

#[test]
fn sylow_search_recovers_full_search() {
    let cfg = Config::default();
    for (n, kind) in [("c2xc2xc2xc2", "q16"), ("c2xc2xc2xc2", "d16"), ("c2xc2xc2", "d8"), ("c3xc2xc4", "q24"), ("c4xc4", "q16")] {
        let hol = Holomorph::new(&n.parse().unwrap(), &cfg).unwrap();
        let kind = kind.parse().unwrap();
        let full = find_regular_full(&hol, kind).unwrap();
        let sylow = find_regular_sylow(&hol, kind, &cfg).unwrap();
        let a: Vec<_> = full.iter().map(|s| s.key().to_vec()).collect();
        let b: Vec<_> = sylow.all.iter().map(|s| s.key().to_vec()).collect();
        assert_eq!(a, b, "{n} {kind}");
    }
}
