use std::collections::BTreeSet;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::related::RelatedEntitySet;
use crate::relation::Origin;
use crate::temporal::{is_future_mention, normalize, DateRange, NormalizeOptions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub origin: Origin,
    pub position: usize,
    pub pattern: String,
}

/// One forecast event: a future date and the entities involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForecastRecord {
    /// ISO date, or `start/end` for a range.
    pub event_date: String,
    pub event_start: NaiveDate,
    pub event_end: NaiveDate,
    pub date_surface: String,
    pub locations: Vec<String>,
    pub persons: Vec<String>,
    pub organizations: Vec<String>,
    pub article_id: String,
    pub published_at: NaiveDate,
    pub url: String,
    pub evidence: Vec<Evidence>,
}

/// One record per distinct future date among the related dates, each carrying
/// every related person, organization and location. Nothing is emitted when
/// there are no such entities or no pattern fired.
pub fn assemble_forecasts(related: &RelatedEntitySet, article: &Article, options: NormalizeOptions) -> Vec<ForecastRecord> {
    let surfaces = |v: &[crate::related::RelatedEntity]| v.iter().map(|e| e.span.surface.clone()).collect::<Vec<_>>();
    let locations = surfaces(&related.locations);
    let persons = surfaces(&related.persons);
    let organizations = surfaces(&related.organizations);
    let evidence: Vec<Evidence> = related
        .firings
        .iter()
        .map(|f| Evidence { origin: f.origin, position: f.position, pattern: f.pattern.clone() })
        .collect();
    if (locations.is_empty() && persons.is_empty() && organizations.is_empty()) || evidence.is_empty() {
        return Vec::new();
    }
    let mut seen: BTreeSet<DateRange> = BTreeSet::new();
    let mut out = Vec::new();
    for d in &related.dates {
        let mention = normalize(&d.span.surface, article.published_at, options);
        if !is_future_mention(&mention) {
            continue;
        }
        let range = mention.resolved.expect("future mentions are resolved");
        if !seen.insert(range) {
            continue;
        }
        assert!(range.start > article.published_at);
        out.push(ForecastRecord {
            event_date: range.to_string(),
            event_start: range.start,
            event_end: range.end,
            date_surface: d.span.surface.clone(),
            locations: locations.clone(),
            persons: persons.clone(),
            organizations: organizations.clone(),
            article_id: article.id.clone(),
            published_at: article.published_at,
            url: article.url.clone(),
            evidence: evidence.clone(),
        });
    }
    out
}

pub fn write_forecasts_jsonl<W: Write>(records: &[ForecastRecord], mut w: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::json("forecast record", e))?;
        writeln!(w, "{line}").map_err(|e| Error::io("<forecast output>", e))?;
    }
    w.flush().map_err(|e| Error::io("<forecast output>", e))
}

/// CSV with columns `event_date,locations,persons,organizations,article_id,published_at,url`;
/// list cells are `;`-joined.
pub fn write_forecasts_csv<W: Write>(records: &[ForecastRecord], w: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::InvalidRecord { context: "forecast csv".into(), message: e.to_string() };
    csv.write_record(["event_date", "locations", "persons", "organizations", "article_id", "published_at", "url"])
        .map_err(err)?;
    for r in records {
        csv.write_record([
            r.event_date.as_str(),
            &r.locations.join(";"),
            &r.persons.join(";"),
            &r.organizations.join(";"),
            &r.article_id,
            &r.published_at.format("%Y-%m-%d").to_string(),
            &r.url,
        ])
        .map_err(err)?;
    }
    csv.flush().map_err(|e| Error::io("<forecast csv>", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ner::{EntityLabel, EntitySpan};
    use crate::related::{Firing, RelatedEntity};
    use chrono::{TimeZone, Utc};

    fn entity(label: EntityLabel, surface: &str) -> RelatedEntity {
        RelatedEntity {
            span: EntitySpan { label, char_start: 0, char_end: surface.chars().count(), surface: surface.into(), sentence_index: 0 },
            origin: Origin::Body,
            source_position: 0,
            fired_by: 0,
        }
    }

    fn article(published: NaiveDate) -> Article {
        Article::new(
            "https://example.in/news/1",
            "test",
            "title",
            "body",
            published,
            Utc.with_ymd_and_hms(2017, 2, 10, 12, 0, 0).unwrap(),
        )
    }

    fn related(dates: &[&str]) -> RelatedEntitySet {
        RelatedEntitySet {
            doc_id: "x".into(),
            organizations: vec![entity(EntityLabel::Organization, "jpp")],
            locations: vec![entity(EntityLabel::Location, "Jharkhand")],
            dates: dates.iter().map(|d| entity(EntityLabel::Date, d)).collect(),
            firings: vec![Firing { origin: Origin::Body, position: 0, pattern: "call on | DATE | part2".into() }],
            ..Default::default()
        }
    }

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn jpp_example_record() {
        let recs = assemble_forecasts(&related(&["february 16"]), &article(d(2017, 2, 10)), Default::default());
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.event_date, "2017-02-16");
        assert_eq!(r.locations, ["Jharkhand"]);
        assert!(r.persons.is_empty());
        assert_eq!(r.organizations, ["jpp"]);
        assert_eq!(r.evidence.len(), 1);
    }

    #[test]
    fn past_and_fan_out() {
        let a = article(d(2017, 2, 10));
        assert!(assemble_forecasts(&related(&["yesterday", "february 10", "soon"]), &a, Default::default()).is_empty());
        let two = assemble_forecasts(&related(&["tomorrow", "february 16", "feb 11"]), &a, Default::default());
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].locations, two[1].locations);
        assert!(two.iter().all(|r| r.event_start > r.published_at));
    }

    #[test]
    fn date_alone_suppressed() {
        let mut r = related(&["tomorrow"]);
        r.organizations.clear();
        r.locations.clear();
        assert!(assemble_forecasts(&r, &article(d(2017, 2, 10)), Default::default()).is_empty());
    }

    #[test]
    fn csv_layout() {
        let mut r = related(&["february 16"]);
        r.locations.push(entity(EntityLabel::Location, "Ranchi"));
        let recs = assemble_forecasts(&r, &article(d(2017, 2, 10)), Default::default());
        let mut buf = Vec::new();
        write_forecasts_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("event_date,locations,persons,organizations,article_id,published_at,url"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("2017-02-16,Jharkhand;Ranchi,,jpp,"));
        assert!(row.ends_with(",2017-02-10,https://example.in/news/1"));
    }
}
