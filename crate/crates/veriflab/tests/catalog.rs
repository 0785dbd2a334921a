use std::collections::BTreeMap;

use pgv_core::group::find_isomorphism;
use veriflab::{Catalog, Filter};

#[test]
fn builtin_counts_by_order() {
    let cat = Catalog::builtin();
    let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &cat.entries {
        *by_order.entry(e.order()).or_default() += 1;
    }
    assert_eq!(by_order[&16], 14);
    assert_eq!(by_order[&81], 15);
    assert_eq!(by_order[&8], 5);
    assert_eq!(by_order[&27], 5);
    for k in 1..=14 {
        let f = Filter::parse(&format!("order16#{k}")).unwrap();
        assert_eq!(cat.select(&f).len(), 1, "order16#{k}");
    }
}

#[test]
fn builtin_is_pairwise_non_isomorphic() {
    let cat = Catalog::builtin();
    let mut names = std::collections::HashSet::new();
    for (i, a) in cat.entries.iter().enumerate() {
        assert!(names.insert(a.name.clone()));
        for b in &cat.entries[i + 1..] {
            if a.order() == b.order() && a.group.p() == b.group.p() {
                assert!(find_isomorphism(&a.group, &b.group).is_none(), "{} ~ {}", a.name, b.name);
            }
        }
    }
}

#[test]
fn file_catalogs() {
    assert!(Catalog::from_text("", 1024).unwrap().entries.is_empty());
    let bad = "group X\np 2\ngens 2\npow 1 g2\nend\n";
    let err = Catalog::from_text(bad, 1024).unwrap_err().to_string();
    assert!(err.starts_with("line 4, column 5"), "{err}");
}

