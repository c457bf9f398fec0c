mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rotnet_core::corpus::{
    match_words, parse_corpus, parse_vocabulary, tokenize, validate_corpus, Corpus, CorpusError,
    CorpusFormat, NoteRecord, Vocabulary,
};
use rotnet_core::WordId;

const WORDS: &[&str] = &[
    "light",
    "wave",
    "mirror",
    "shadow",
    "straight line",
    "angle",
    "sun",
];

fn vocab() -> Vocabulary {
    Vocabulary::from_surfaces(WORDS.iter().copied()).unwrap()
}

fn text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        prop::sample::select(WORDS.to_vec()).prop_map(String::from),
        "[a-z]{1,7}",
        prop::sample::select(vec!["Light!", "(wave)", "MIRROR,", "--", "straight  Line."])
            .prop_map(String::from),
    ];
    prop::collection::vec(piece, 0..12).prop_map(|v| v.join(" "))
}

fn records() -> impl Strategy<Value = Vec<NoteRecord>> {
    prop::collection::vec((0..5usize, 0..10_000i64, text()), 1..20).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (a, minutes, text))| NoteRecord {
                note_id: format!("n{i}").into(),
                author_id: format!("u{a}").into(),
                timestamp: chrono::DateTime::from_timestamp(1_600_000_000 + minutes * 60, 0)
                    .unwrap(),
                text,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn matching_is_idempotent(t in text()) {
        let v = vocab();
        let found = match_words(&t, &v);
        // re-matching the surfaces of what was found finds exactly that
        let surfaces: Vec<String> = v
            .entries()
            .iter()
            .filter(|e| found.contains(&e.word_id))
            .map(|e| e.tokens.join(" "))
            .collect();
        prop_assert_eq!(match_words(&surfaces.join(" | "), &v), found.clone());
        prop_assert_eq!(match_words(&format!("{t} {t}"), &v), found);
    }

    #[test]
    fn restricting_the_vocabulary_intersects_matches(t in text(), keep in prop::sample::subsequence(WORDS.to_vec(), 1..=WORDS.len())) {
        let v = vocab();
        let keep: BTreeSet<WordId> = keep.iter().map(|w| WordId::from(*w)).collect();
        let small = v.restrict(&keep).unwrap();
        let full = match_words(&t, &v);
        let part = match_words(&t, &small);
        prop_assert!(part.is_subset(&full));
        let expected: BTreeSet<WordId> = full.intersection(&keep).cloned().collect();
        prop_assert_eq!(part, expected);
    }

    #[test]
    fn tokens_are_lowercase_and_trimmed(t in text()) {
        for tok in tokenize(&t) {
            prop_assert!(!tok.is_empty());
            prop_assert_eq!(tok.to_lowercase(), tok.clone());
            prop_assert!(tok.chars().next().unwrap().is_alphanumeric());
            prop_assert!(tok.chars().last().unwrap().is_alphanumeric());
        }
    }

    #[test]
    fn csv_round_trip(recs in records()) {
        let c = Corpus::from_records(recs).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let back = parse_corpus(std::str::from_utf8(&buf).unwrap(), CorpusFormat::Csv).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.digest(), c.digest());
    }

    #[test]
    fn jsonl_round_trip(recs in records()) {
        let c = Corpus::from_records(recs).unwrap();
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let back = parse_corpus(std::str::from_utf8(&buf).unwrap(), CorpusFormat::Jsonl).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn turns_follow_timestamps(recs in records()) {
        let c = Corpus::from_records(recs.clone()).unwrap();
        for w in c.notes().windows(2) {
            prop_assert!(w[0].timestamp <= w[1].timestamp);
            if w[0].timestamp == w[1].timestamp {
                let pos = |id: &str| recs.iter().position(|r| r.note_id.as_str() == id).unwrap();
                prop_assert!(pos(w[0].note_id.as_str()) < pos(w[1].note_id.as_str()));
            }
        }
        prop_assert!(c.notes().iter().enumerate().all(|(i, n)| n.seq == i + 1));
        prop_assert!(validate_corpus(&c, &vocab()).errors.is_empty());
    }
}

#[test]
fn bad_inputs_are_reported() {
    let header = "note_id,author_id,timestamp,text\n";
    assert!(matches!(
        parse_corpus(header, CorpusFormat::Csv),
        Err(CorpusError::Empty)
    ));
    let dup = format!("{header}n1,a,2020-01-01T00:00:00Z,x\nn1,b,2020-01-02T00:00:00Z,y\n");
    assert!(matches!(
        parse_corpus(&dup, CorpusFormat::Csv),
        Err(CorpusError::DuplicateNoteId { .. })
    ));
    let bad_ts = format!("{header}n1,a,yesterday,x\n");
    assert!(matches!(
        parse_corpus(&bad_ts, CorpusFormat::Csv),
        Err(CorpusError::BadTimestamp { .. })
    ));
    assert!(parse_corpus("{\"note_id\":\"n1\"}\n", CorpusFormat::Jsonl).is_err());
    assert!(parse_vocabulary("# nothing\n\n").is_err());
}
