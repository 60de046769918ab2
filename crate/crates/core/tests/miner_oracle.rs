mod common;

use std::collections::BTreeSet;

use ontomatch::rules::mine_association_rules;

#[test]
fn mined_rules_equal_exhaustive_enumeration() {
    let mut nonempty = 0;
    for seed in 0..50 {
        let (ds, params) = common::random_dataset(seed, 8, 50);
        let mined = mine_association_rules(&ds, &params).unwrap();
        let got: BTreeSet<common::RuleKey> = mined.iter().map(common::rule_key).collect();
        assert_eq!(got.len(), mined.len(), "duplicate rules at seed {seed}");
        let want = common::mine_oracle(&ds, &params);
        assert_eq!(got, want, "seed {seed}, params {params:?}");
        nonempty += usize::from(!want.is_empty());
    }
    assert!(nonempty >= 25, "too few datasets produced rules: {nonempty}");
}

#[test]
fn mining_is_deterministic_and_sorted() {
    let (ds, params) = common::random_dataset(3, 6, 40);
    let a = mine_association_rules(&ds, &params).unwrap();
    let b = mine_association_rules(&ds, &params).unwrap();
    assert_eq!(a, b);
    let keys: Vec<Vec<(String, u64)>> = a
        .iter()
        .map(|r| r.args.iter().zip(&r.params).map(|(x, &p)| (x.name.clone(), p as u64)).collect())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
}
