//! Library-level checks against the worked examples and tables.

use gossip_core::combin::binomial;
use gossip_core::concat::{concat_trace, concatenate, segment_and_decode, InnerCode};
use gossip_core::designs::{
    cyclic_design, embed_sts, inversive_plane, lambda_bar_s, load_design, projective_plane,
    steiner_triple, verify_design, Point,
};
use gossip_core::gossip::{
    code_params, from_design, full_gossip, is_embedded, is_embedded_set_system, square_gossip,
    GossipCode, SymbolOrder,
};
use gossip_core::repro::{
    find_column_permutation, parse_matrix, repro, Target, CONCAT_WORDS, FANO,
};
use gossip_core::traceability::{gossip_to_ts, ts_from_cyclic, ts_to_gossip};
use gossip_core::tracing::{
    brute_force_trace, make_pirate_word, trace_nonzero, trace_only_erasures, undetectable_count,
    undetectable_count_checked, Coalition, Entry, PirateWord, Strategy, StrategyKind,
    DEFAULT_BUDGET,
};
use gossip_core::Error;
use itertools::Itertools;

const EXAMPLE_211: &str = include_str!("../fixtures/example211.txt");
const EXAMPLE_431: &str = include_str!("../fixtures/example431.txt");
const TABLE_1: &str = include_str!("../fixtures/table1.txt");
const TABLE_2: &str = include_str!("../fixtures/table2.txt");
const TABLE_3: &str = include_str!("../fixtures/table3.txt");
const APPENDIX: &str = include_str!("../fixtures/appendix_matrix.txt");

fn fano_code() -> GossipCode {
    from_design(&load_design(FANO, false).unwrap()).unwrap()
}

fn cyclic21_code(order: SymbolOrder) -> GossipCode {
    ts_to_gossip(&ts_from_cyclic(&[3, 6, 7, 12, 14], 21).unwrap(), 2, order).unwrap()
}

/// `(members, word)` rows of a printed erasure table.
fn table_rows(text: &str) -> Vec<(Vec<Point>, PirateWord)> {
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            let members = cols[1]
                .trim_matches(|c| c == '{' || c == '}')
                .split(", ")
                .map(|x| x.parse().unwrap())
                .collect();
            let word = cols[2]
                .trim()
                .trim_matches(|c| c == '(' || c == ')')
                .parse()
                .unwrap();
            (members, word)
        })
        .collect()
}

fn check_erasure_table(code: &GossipCode, table: &str, rows: usize) {
    let rows_seen = table_rows(table);
    assert_eq!(rows_seen.len(), rows);
    for (members, printed) in rows_seen {
        let w = Coalition::new(members.iter().copied(), code.m()).unwrap();
        let sim =
            make_pirate_word(code, &w, &mut Strategy::new(StrategyKind::OnlyErasures), 0).unwrap();
        assert_eq!(sim.word, printed, "coalition {members:?}");
        let brute = brute_force_trace(code, &printed, code.c(), DEFAULT_BUDGET).unwrap();
        assert_eq!(brute.coalitions, vec![members.clone()]);
        assert_eq!(
            trace_only_erasures(code, &printed).unwrap().accused,
            members
        );
    }
}

#[test]
fn fano_code_matches_the_printed_matrix() {
    let text: String = fano_code()
        .rows()
        .map(|r| r.iter().join("\t") + "\n")
        .collect();
    assert_eq!(text.trim_end(), EXAMPLE_211.trim_end());
}

#[test]
fn fano_erasure_words_and_traces() {
    check_erasure_table(&fano_code(), TABLE_2, 21);
}

#[test]
fn full_code_erasure_words_and_traces() {
    let printed = parse_matrix(EXAMPLE_431).unwrap();
    let code = full_gossip(4, 3).unwrap();
    let order = find_column_permutation(&code, &printed).expect("same code up to column order");
    check_erasure_table(&code.permute_columns(&order).unwrap(), TABLE_1, 6);
}

#[test]
fn cyclic_keys_in_listing_order() {
    let ts = ts_from_cyclic(&[3, 6, 7, 12, 14], 21).unwrap();
    let printed: Vec<Vec<Point>> = TABLE_3
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let set = l.split('\t').nth(1).unwrap();
            set.trim_matches(|c| c == '{' || c == '}')
                .split(", ")
                .map(|x| x.parse().unwrap())
                .collect()
        })
        .collect();
    assert_eq!(printed.len(), 21);
    assert_eq!(ts.private_keys(), printed.as_slice());
}

#[test]
fn printed_columns_in_development_order() {
    let code = cyclic21_code(SymbolOrder::Development);
    let printed = parse_matrix(APPENDIX).unwrap();
    assert_eq!(printed.len(), 21);
    for (r, row) in printed.iter().enumerate() {
        assert_eq!(
            &code.row(r as Point + 1)[..row.len()],
            row.as_slice(),
            "row {}",
            r + 1
        );
    }
    let ascending = cyclic21_code(SymbolOrder::Ascending);
    for (a, d) in ascending.keys().iter().zip(code.keys()) {
        assert!(a.iter().sorted().eq(d.iter().sorted()));
    }
}

#[test]
fn projective_plane_parameters_match_the_formulas() {
    for p in [2u64, 3, 5] {
        let code = from_design(&projective_plane(p).unwrap()).unwrap();
        let (m, q, c) = (code.m() as u64, code.q() as u64, code.c() as u64);
        let weight = binomial(m - 1, c - 1) / binomial(q - 2, c - 1);
        let params = code_params(m, q, c).unwrap();
        assert_eq!(params.length as usize, code.l());
        let lbar = lambda_bar_s(code.provenance().unwrap(), 2).unwrap() as usize;
        for u in 1..=m as Point {
            assert_eq!(code.row_weight(u) as u128, weight, "p = {p}");
            for v in u + 1..=m as Point {
                assert_eq!(code.hamming(u, v), code.l() - lbar, "p = {p}");
            }
        }
    }
    assert_eq!(code_params(82, 11, 3).unwrap().length, 738);
}

#[test]
fn undetected_positions_for_every_small_coalition() {
    let fano = fano_code();
    assert_eq!(undetectable_count(&fano, 2).unwrap(), 2);
    let w12 = Coalition::new([1, 2], 7).unwrap();
    assert_eq!(undetectable_count_checked(&fano, &w12).unwrap(), 2);
    for code in [fano, cyclic21_code(SymbolOrder::Development)] {
        let pairs = (1..=code.m() as Point).combinations(2).count();
        assert!(pairs == 21 || pairs == 210);
        for members in (1..=code.m() as Point).combinations(2) {
            undetectable_count_checked(&code, &Coalition::new(members, code.m()).unwrap()).unwrap();
        }
    }
}

#[test]
fn scheme_conversions() {
    let code = cyclic21_code(SymbolOrder::Development);
    let (w, ts) = gossip_to_ts(&code).unwrap();
    assert_eq!(w, 2);
    assert_eq!(ts, ts_from_cyclic(&[3, 6, 7, 12, 14], 21).unwrap());
    assert_eq!(
        ts_to_gossip(&ts, 2, SymbolOrder::Development)
            .unwrap()
            .rows()
            .collect_vec(),
        code.rows().collect_vec()
    );
    assert_eq!(gossip_to_ts(&fano_code()).unwrap().0, 1);
}

#[test]
fn frameproof_concatenation_has_the_printed_shape() {
    let outer = fano_code();
    let ccode = concatenate(InnerCode::fp342(), outer.clone()).unwrap();
    assert_eq!((ccode.m(), ccode.l()), (7, 21));
    let inner = InnerCode::fp342();
    for u in 1..=7 {
        let row = ccode.row(u);
        assert!(row.iter().all(|&s| s <= 1));
        for (seg, &s) in row.chunks(3).zip(outer.row(u)) {
            assert_eq!(seg, inner.rows()[usize::from(s)].as_slice());
        }
    }
    let word: PirateWord = "0 0 1  0 0 0  0 0 0  0 1 0  0 0 0  0 0 0  1 0 0"
        .parse()
        .unwrap();
    assert_eq!(concat_trace(&ccode, &word).unwrap().report.accused, vec![2]);
}

#[test]
fn square_concatenation_traces_both_worked_words() {
    let ccode = concatenate(InnerCode::square4(), fano_code()).unwrap();
    assert_eq!(ccode.l(), 28);
    assert_eq!(ccode.row(1)[..8], [2, 2, 0, 1, 2, 2, 0, 1]);

    let first = concat_trace(&ccode, &CONCAT_WORDS[0].parse().unwrap()).unwrap();
    assert_eq!(first.decoded.outer_word.to_string(), "e 1 e 0 e 0 0");
    assert_eq!(
        (first.stage, first.report.accused.as_slice()),
        (1, &[1][..])
    );

    let second = concat_trace(&ccode, &CONCAT_WORDS[1].parse().unwrap()).unwrap();
    assert_eq!(second.decoded.outer_word.to_string(), "e e e 0 e 0 0");
    assert_eq!(second.decoded.segments[0].candidates, vec![1, 2]);
    assert_eq!(
        (second.stage, second.report.accused.as_slice()),
        (2, &[1, 2][..])
    );
}

#[test]
fn mismatched_concatenation_is_rejected() {
    let outer = cyclic21_code(SymbolOrder::Development);
    assert!(matches!(
        concatenate(InnerCode::square4(), outer),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn undisturbed_codewords_decode_to_their_owner() {
    let ccode = concatenate(InnerCode::square4(), fano_code()).unwrap();
    for u in 1..=7 {
        let word = PirateWord::from_codeword(&ccode.row(u));
        let decoded = segment_and_decode(&ccode, &word).unwrap();
        let outer: Vec<Entry> = ccode
            .outer()
            .row(u)
            .iter()
            .map(|&s| Entry::Symbol(s))
            .collect();
        assert_eq!(decoded.outer_word.entries(), outer.as_slice());
        assert_eq!(concat_trace(&ccode, &word).unwrap().report.accused, vec![u]);
    }
}

#[test]
fn fano_embeds_in_the_fifteen_point_system() {
    let fano = load_design(FANO, false).unwrap();
    let sts15 = embed_sts(&fano).unwrap();
    assert_eq!(
        (sts15.t(), sts15.v(), sts15.k(), sts15.lambda(), sts15.b()),
        (2, 15, 3, 1, 35)
    );
    assert!(verify_design(&sts15).unwrap().valid);
    assert_eq!(&sts15.blocks()[..7], fano.blocks());
    let (small, big) = (from_design(&fano).unwrap(), from_design(&sts15).unwrap());
    assert!(is_embedded_set_system(&small, &big).unwrap());
    assert!(is_embedded(&small, &big).unwrap());
}

#[test]
fn every_construction_verifies() {
    let designs = [
        projective_plane(2),
        projective_plane(3),
        projective_plane(5),
        steiner_triple(7),
        steiner_triple(9),
        steiner_triple(13),
        inversive_plane(2),
        inversive_plane(3),
        cyclic_design(&[3, 6, 7, 12, 14], 21),
    ];
    for d in designs {
        let d = d.unwrap();
        assert!(
            verify_design(&d).unwrap().valid,
            "{}-({},{},{})",
            d.t(),
            d.v(),
            d.k(),
            d.lambda()
        );
    }
}

#[test]
fn all_words_are_untraceable_on_the_square_code() {
    let code = square_gossip(5).unwrap();
    let word: PirateWord = vec!["e"; code.l()].join(" ").parse().unwrap();
    assert!(trace_nonzero(&code, &word).unwrap().untraceable);
    assert!(trace_only_erasures(&code, &word).unwrap().untraceable);
}

#[test]
fn every_repro_target_matches() {
    for t in Target::ALL {
        assert!(repro(t).unwrap().matched, "{t}");
    }
}
