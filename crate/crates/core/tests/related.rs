mod common;

use chrono::NaiveDate;
use common::{related20, related_for};
use unrest_core::ner::EntityLabel;
use unrest_core::temporal::{normalize, NormalizeOptions};

#[test]
fn two_relation_example() {
    let set = related_for("d", "", "JPP called on february 16. JPP called for Jharkhand bandh.", 2);
    assert_eq!(set.surfaces(EntityLabel::Organization), ["JPP"]);
    assert_eq!(set.surfaces(EntityLabel::Location), ["Jharkhand"]);
    assert_eq!(set.surfaces(EntityLabel::Date), ["february 16"]);
    assert!(set.persons.is_empty());
    let anchor = NaiveDate::from_ymd_opt(2017, 2, 10).unwrap();
    let date = normalize("february 16", anchor, NormalizeOptions::default());
    assert_eq!(date.resolved.unwrap().to_string(), "2017-02-16");
}

#[test]
fn meeting_sentence_yields_no_person() {
    let set = related_for("d", "", "Narendra Modi called a meeting to discuss issue raised in protest.", 2);
    assert!(set.persons.is_empty(), "{:?}", set.persons);
    assert!(set.is_empty());
}

#[test]
fn window_zero_keeps_only_the_firing_triplet() {
    let body = "The Kisan Sabha will stage a dharna in Patna tomorrow. Farmers from Gaya will join.";
    let narrow = related_for("d", "", body, 0);
    let wide = related_for("d", "", body, 2);
    assert_eq!(narrow.surfaces(EntityLabel::Location), ["Patna"]);
    assert_eq!(wide.surfaces(EntityLabel::Location), ["Patna", "Gaya"]);
}

#[test]
fn twenty_article_fixture_matches() {
    let mut bad = Vec::new();
    for (expected, actual) in related20() {
        if expected != actual {
            bad.push(format!("{expected:?}\n  got {actual:?}"));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
