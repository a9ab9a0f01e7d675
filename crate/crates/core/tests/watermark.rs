//! Frozen detector baselines and embedding invariants on seeded noise.

use gossip_core::tracing::Entry;
use gossip_core::watermark::{
    codeword_to_wm, detect, embed, embed_bands, haar_dwt2, GrayImage, DEFAULT_ALPHA,
    DEFAULT_THRESHOLD,
};

const CODEWORD: [u16; 7] = [1, 1, 1, 0, 0, 0, 0];
const OTHER: [u16; 7] = [0, 0, 2, 3, 0, 3, 0];
const TOLERANCE: f64 = 0.05;

/// Correlation by strength for image seed 1, mark seed 7, q = 4.
const BASELINES: [(f64, f64); 8] = [
    (0.0, -0.0179),
    (0.05, 0.2744),
    (0.1, 0.5092),
    (0.15, 0.6557),
    (0.2, 0.7463),
    (0.3, 0.8404),
    (0.4, 0.8784),
    (0.5, 0.8991),
];

fn image() -> GrayImage {
    GrayImage::noise(64, 64, 1).unwrap()
}

#[test]
fn correlations_match_recorded_baselines() {
    for (alpha, expected) in BASELINES {
        let marked = embed(&image(), &CODEWORD, 4, alpha, 7).unwrap();
        let r = detect(&marked, &CODEWORD, 4, 7, DEFAULT_THRESHOLD)
            .unwrap()
            .correlation;
        assert!(
            (r - expected).abs() <= TOLERANCE,
            "α = {alpha}: {r:.4} vs {expected}"
        );
    }
}

#[test]
fn default_round_trip_detects_only_the_embedded_codeword() {
    let marked = embed(&image(), &CODEWORD, 4, DEFAULT_ALPHA, 7).unwrap();
    assert!(
        detect(&marked, &CODEWORD, 4, 7, DEFAULT_THRESHOLD)
            .unwrap()
            .detected
    );
    let mismatch = detect(&marked, &OTHER, 4, 7, DEFAULT_THRESHOLD).unwrap();
    assert!(!mismatch.detected);
    assert!((mismatch.correlation - -0.0030).abs() <= TOLERANCE);
    assert!(
        !detect(&image(), &CODEWORD, 4, 7, DEFAULT_THRESHOLD)
            .unwrap()
            .detected
    );
}

#[test]
fn zero_strength_is_the_identity() {
    assert_eq!(embed(&image(), &CODEWORD, 4, 0.0, 7).unwrap(), image());
}

#[test]
fn embedding_leaves_ll_and_hh_untouched() {
    let mut bands = haar_dwt2(&image());
    let before = bands.clone();
    let entries: Vec<Entry> = CODEWORD.iter().map(|&s| Entry::Symbol(s)).collect();
    let wm = codeword_to_wm(&entries, 4, bands.hl.len() + bands.lh.len(), 7).unwrap();
    embed_bands(&mut bands, &wm, 0.3).unwrap();
    assert_eq!(bands.ll, before.ll);
    assert_eq!(bands.hh, before.hh);
    assert_ne!(bands.hl, before.hl);
}

#[test]
fn embedding_and_detection_are_deterministic() {
    let a = embed(&image(), &CODEWORD, 4, 0.1, 7).unwrap();
    let b = embed(&image(), &CODEWORD, 4, 0.1, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        detect(&a, &CODEWORD, 4, 7, 0.3).unwrap(),
        detect(&b, &CODEWORD, 4, 7, 0.3).unwrap()
    );
}

#[test]
fn sequences_are_plus_minus_one() {
    let wm = codeword_to_wm(&[Entry::Symbol(3)], 4, 8, 0).unwrap();
    assert_eq!(wm.values.len(), 8);
    assert!(wm.values.iter().all(|v| v.abs() == 1));
}

#[test]
fn one_symbol_change_decorrelates_sequences() {
    let a: Vec<Entry> = CODEWORD.iter().map(|&s| Entry::Symbol(s)).collect();
    let mut b = a.clone();
    b[0] = Entry::Symbol(2);
    let x = codeword_to_wm(&a, 4, 4096, 7).unwrap().values;
    let y = codeword_to_wm(&b, 4, 4096, 7).unwrap().values;
    let dot: i64 = x
        .iter()
        .zip(&y)
        .map(|(&p, &q)| i64::from(p) * i64::from(q))
        .sum();
    assert!((dot as f64 / 4096.0).abs() < 0.5);
}

/// 100 independent image and mark seeds: the marked, unmarked and
/// mismatched statistics stay on the expected side of the threshold.
#[test]
fn seeded_battery_has_no_errors() {
    for s in 0..100u64 {
        let img = GrayImage::noise(64, 64, 1000 + s).unwrap();
        let marked = embed(&img, &CODEWORD, 4, DEFAULT_ALPHA, s).unwrap();
        assert!(
            detect(&marked, &CODEWORD, 4, s, DEFAULT_THRESHOLD)
                .unwrap()
                .detected,
            "seed {s}"
        );
        assert!(
            !detect(&img, &CODEWORD, 4, s, DEFAULT_THRESHOLD)
                .unwrap()
                .detected,
            "seed {s}"
        );
        assert!(
            !detect(&marked, &OTHER, 4, s, DEFAULT_THRESHOLD)
                .unwrap()
                .detected,
            "seed {s}"
        );
    }
}
