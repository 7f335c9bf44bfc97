use std::collections::HashSet;

use holobrace::enumerate::census;
use holobrace::presentations::Family;
use holobrace::structured::{satisfies_relations, solve_cyclic, solve_rank2, StructuredSolution};
use holobrace::Config;

fn check_witnesses(sol: &StructuredSolution) {
    let group = sol.group();
    for pair in &sol.pairs {
        assert!(satisfies_relations(&group, sol.kind, &pair.x(), &pair.y()).unwrap(), "{:?}", pair.params);
        let elems = pair.subgroup();
        let zero = group.identity();
        let points: HashSet<_> = elems.iter().map(|e| e.apply(&group, &zero).unwrap()).collect();
        assert_eq!(points.len() as u64, group.order());
    }
}

#[test]
fn invariants_up_to_n12() {
    for n in 4..=12 {
        for family in [Family::Quaternion, Family::Dihedral] {
            let sol = solve_cyclic(n, family).unwrap();
            assert_eq!((sol.r, sol.c), (1, 1));
            assert_eq!(sol.census().unwrap().h, 1 << (n - 2));
            check_witnesses(&sol);
            if n >= 5 {
                let sol = solve_rank2(n, family).unwrap();
                assert_eq!((sol.r, sol.c), (16, 6), "n={n}");
                assert_eq!(sol.census().unwrap().h, 1 << (n + 1));
                check_witnesses(&sol);
            }
        }
    }
}

#[test]
fn classes_match_generic_engine() {
    let cfg = Config::default();
    for n in [5, 6] {
        for family in [Family::Quaternion, Family::Dihedral] {
            let sol = solve_rank2(n, family).unwrap();
            let generic = census(&sol.group(), sol.kind, &cfg).unwrap();
            let fast = sol.census().unwrap();
            let orbits = |c: &holobrace::enumerate::Census| {
                let mut v: Vec<(u64, u64)> = c.classes.iter().map(|x| (x.orbit, x.stabilizer)).collect();
                v.sort();
                v
            };
            assert_eq!((generic.c, generic.r, generic.h), (fast.c, fast.r, fast.h));
            assert_eq!(orbits(&generic), orbits(&fast));
        }
    }
}
