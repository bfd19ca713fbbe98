mod common;

use std::collections::{BTreeMap, BTreeSet};

use collab_core::ingest::{
    clean_links, load_alias_map, parse_link_stream, resolve_alias, validate_author_id, AliasMap,
    LinkRecord,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use regex::Regex;

const EMAIL_PATTERN: &str = r"[A-Za-z0-9._%+-]{1,}@[A-Za-z0-9.-]{1,}\.[A-Za-z]{2,}";

fn reference() -> Regex {
    Regex::new(EMAIL_PATTERN).unwrap()
}

#[test]
fn email_examples_match_reference_engine() {
    let re = reference();
    for s in [
        "bob@host",
        "bob@host.co",
        "Alice <alice@example.com>",
        "^^ <^^>",
    ] {
        assert_eq!(validate_author_id(s), re.is_match(s), "{s}");
    }
    assert!(!validate_author_id("bob@host"));
    assert!(validate_author_id("bob@host.co"));
}

proptest! {
    #[test]
    fn email_scanner_agrees_with_regex(s in "[a-zA-Z0-9@.<> _%+\\-^]{0,24}") {
        prop_assert_eq!(validate_author_id(&s), reference().is_match(&s));
    }

    #[test]
    fn email_scanner_agrees_on_email_like(
        local in "[a-z.%+\\-]{0,4}",
        dom in "[a-z0-9.\\-]{0,5}",
        tld in "[a-zA-Z0-9]{0,3}",
        pre in "[ <a@]{0,2}",
        post in "[ >.a]{0,2}",
    ) {
        let s = format!("{pre}{local}@{dom}.{tld}{post}");
        prop_assert_eq!(validate_author_id(&s), reference().is_match(&s));
    }
}

/// Follows raw edges one step at a time; a chain ends at its last id, a
/// cycle at its smallest member.
fn iterative_resolve(edges: &BTreeMap<String, String>, x: &str) -> String {
    let mut seen = Vec::new();
    let mut cur = x.to_string();
    loop {
        if let Some(pos) = seen.iter().position(|s: &String| *s == cur) {
            return seen[pos..].iter().min().unwrap().clone();
        }
        seen.push(cur.clone());
        match edges.get(&cur) {
            Some(next) if *next != cur => cur = next.clone(),
            _ => return cur,
        }
    }
}

proptest! {
    #[test]
    fn alias_resolution_matches_iterative_lookup(
        raw in proptest::collection::vec((0u8..12, 0u8..12), 0..20)
    ) {
        let mut edges = BTreeMap::new();
        let mut text = String::new();
        for (a, b) in raw {
            let (a, b) = (format!("id{a:02}"), format!("id{b:02}"));
            text.push_str(&format!("{a}\t{b}\n"));
            edges.entry(a).or_insert(b);
        }
        let map = load_alias_map(text.as_bytes()).unwrap().map;
        for i in 0..12 {
            let id = format!("id{i:02}");
            let got = resolve_alias(&id, &map);
            prop_assert_eq!(got, iterative_resolve(&edges, &id));
            prop_assert_eq!(resolve_alias(got, &map), got);
        }
    }
}

fn pair_set(records: &[LinkRecord]) -> BTreeSet<(String, String)> {
    records
        .iter()
        .map(|r| (r.project.clone(), r.author.clone()))
        .collect()
}

#[test]
fn cleaning_properties_on_dirty_files() {
    let mut rng = common::rng(42);
    for _ in 0..20 {
        let (mut records, alias_pairs) = common::dirty_links(&mut rng, 400);
        let aliases = AliasMap::from_pairs(alias_pairs);
        let out = clean_links(&records, &aliases, 2).unwrap();
        assert!(out.stats.is_conserved(), "{:?}", out.stats);

        // order independence
        records.shuffle(&mut rng);
        let shuffled = clean_links(&records, &aliases, 2).unwrap();
        assert_eq!(out, shuffled);

        // every surviving project has >= 2 authors; every author is valid
        let mut per_project: BTreeMap<&str, usize> = BTreeMap::new();
        for p in out.pairs() {
            assert!(validate_author_id(&p.author));
            *per_project.entry(&p.project).or_default() += 1;
        }
        assert!(per_project.values().all(|&c| c >= 2));
        assert_eq!(per_project.len() as u64, out.stats.projects_out);

        // aliasing never increases the number of distinct authors
        let raw_authors: BTreeSet<&str> = records
            .iter()
            .filter(|r| validate_author_id(&r.author))
            .map(|r| r.author.as_str())
            .collect();
        let plain = clean_links(&records, &AliasMap::new(), 1).unwrap();
        let aliased = clean_links(&records, &aliases, 1).unwrap();
        let distinct = |c: &collab_core::CleanedLinkSet| {
            c.pairs()
                .iter()
                .map(|p| p.author.clone())
                .collect::<BTreeSet<_>>()
                .len()
        };
        assert!(distinct(&aliased) <= distinct(&plain));
        assert_eq!(distinct(&plain), raw_authors.len());
    }
}

proptest! {
    #[test]
    fn dedup_is_idempotent(rows in proptest::collection::vec((0u8..6, 0u8..8, any::<bool>()), 0..60)) {
        let records: Vec<LinkRecord> = rows
            .iter()
            .map(|&(p, a, ok)| LinkRecord::new(format!("p{p}"), if ok { format!("u{a}@h.io") } else { format!("u{a}") }))
            .collect();
        let once = clean_links(&records, &AliasMap::new(), 1).unwrap();
        let twice = clean_links(once.pairs(), &AliasMap::new(), 1).unwrap();
        prop_assert_eq!(once.pairs(), twice.pairs());
        prop_assert!(once.stats.is_conserved());
        prop_assert_eq!(twice.stats.rows_merged_dedup, 0);
        prop_assert_eq!(pair_set(once.pairs()).len(), once.len());
    }
}

#[test]
fn parse_then_clean_from_text() {
    let text = "p\tA <a@x.org>\np\tB <b@x.org>\nnot a record\nq\tA <a@x.org>\np\tA <a@x.org>\n";
    let parsed = parse_link_stream(text.as_bytes(), '\t').unwrap();
    assert_eq!(parsed.errors, 1);
    let out = clean_links(&parsed.records, &AliasMap::new(), 2).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out.stats.rows_read, 4);
    assert_eq!(out.stats.rows_merged_dedup, 1);
    assert_eq!(out.stats.rows_dropped_min_authors, 1);
}
