//! Resolving date expressions against an article's publication date.

pub mod grammar;
mod merge;

use chrono::{Datelike, Days, Months, NaiveDate};
use serde::{Deserialize, Serialize};

pub use grammar::{parse, DateExpr, NamedRange, WeekdayModifier};
pub use merge::{merge_adjacent_date_spans, merge_date_spans_at, MergedDate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Future,
    Past,
    SameDay,
    Ambiguous,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Future => "future",
            Direction::Past => "past",
            Direction::SameDay => "same_day",
            Direction::Ambiguous => "ambiguous",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn day(d: NaiveDate) -> Self {
        DateRange { start: d, end: d }
    }

    pub fn is_single_day(&self) -> bool {
        self.start == self.end
    }
}

impl std::fmt::Display for DateRange {
    /// ISO date, or `start/end` for a range.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_single_day() {
            write!(f, "{}", self.start.format("%Y-%m-%d"))
        } else {
            write!(f, "{}/{}", self.start.format("%Y-%m-%d"), self.end.format("%Y-%m-%d"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateMention {
    pub surface: String,
    pub resolved: Option<DateRange>,
    pub anchor: NaiveDate,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Read `03/02/2017` as 3 February.
    pub day_first: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { day_first: true }
    }
}

fn add_days(d: NaiveDate, n: i64) -> Option<NaiveDate> {
    if n >= 0 {
        d.checked_add_days(Days::new(n as u64))
    } else {
        d.checked_sub_days(Days::new(n.unsigned_abs()))
    }
}

fn last_day_of_month(year: i32, month: u32) -> Option<NaiveDate> {
    NaiveDate::from_ymd_opt(year, month, 1)?
        .checked_add_months(Months::new(1))?
        .pred_opt()
}

/// Anchors a parsed expression. `None` for impossible dates (30 February).
pub fn resolve(expr: DateExpr, anchor: NaiveDate) -> Option<DateRange> {
    let wd_anchor = anchor.weekday().num_days_from_monday() as i64;
    let monday = add_days(anchor, -wd_anchor)?;
    let range = match expr {
        DateExpr::Absolute { year: Some(y), month, day } => DateRange::day(NaiveDate::from_ymd_opt(y, month, day)?),
        DateExpr::Absolute { year: None, month, day } => {
            // Feb 29 may be up to eight years away across a skipped century leap year.
            let d = (anchor.year()..=anchor.year() + 8)
                .filter_map(|y| NaiveDate::from_ymd_opt(y, month, day))
                .find(|d| *d >= anchor)?;
            DateRange::day(d)
        }
        DateExpr::MonthOfYear { year, month } => DateRange {
            start: NaiveDate::from_ymd_opt(year, month, 1)?,
            end: last_day_of_month(year, month)?,
        },
        DateExpr::Offset(n) => DateRange::day(add_days(anchor, n)?),
        DateExpr::Weekday { weekday, modifier } => {
            let wd = weekday as i64;
            let delta = match modifier {
                WeekdayModifier::Upcoming => match (wd - wd_anchor).rem_euclid(7) {
                    0 => 7,
                    n => n,
                },
                WeekdayModifier::Next => 7 - wd_anchor + wd,
                WeekdayModifier::Last => -match (wd_anchor - wd).rem_euclid(7) {
                    0 => 7,
                    n => n,
                },
            };
            DateRange::day(add_days(anchor, delta)?)
        }
        DateExpr::Named(named) => match named {
            NamedRange::ThisWeekend => DateRange { start: add_days(monday, 5)?, end: add_days(monday, 6)? },
            NamedRange::NextWeekend => DateRange { start: add_days(monday, 12)?, end: add_days(monday, 13)? },
            NamedRange::ThisWeek => DateRange { start: monday, end: add_days(monday, 6)? },
            NamedRange::NextWeek => DateRange { start: add_days(monday, 7)?, end: add_days(monday, 13)? },
            NamedRange::NextMonth => {
                let first = NaiveDate::from_ymd_opt(anchor.year(), anchor.month(), 1)?.checked_add_months(Months::new(1))?;
                DateRange { start: first, end: last_day_of_month(first.year(), first.month())? }
            }
        },
    };
    Some(range)
}

pub fn direction_of(range: Option<DateRange>, anchor: NaiveDate) -> Direction {
    match range {
        None => Direction::Ambiguous,
        Some(r) if r.start > anchor => Direction::Future,
        Some(r) if r.start == anchor => Direction::SameDay,
        Some(_) => Direction::Past,
    }
}

/// Resolves `surface` relative to `anchor`. Surfaces outside the grammar come
/// back ambiguous and unresolved.
pub fn normalize(surface: &str, anchor: NaiveDate, options: NormalizeOptions) -> DateMention {
    let resolved = parse(surface, options.day_first).and_then(|e| resolve(e, anchor));
    DateMention {
        surface: surface.to_string(),
        resolved,
        anchor,
        direction: direction_of(resolved, anchor),
    }
}

pub fn is_future_mention(mention: &DateMention) -> bool {
    mention.direction == Direction::Future
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    fn resolved(surface: &str, anchor: NaiveDate) -> Option<DateRange> {
        normalize(surface, anchor, NormalizeOptions::default()).resolved
    }

    #[test]
    fn documented_examples() {
        let m = normalize("day after tomorrow", d(2017, 1, 16), Default::default());
        assert_eq!(m.resolved, Some(DateRange::day(d(2017, 1, 18))));
        assert_eq!(m.direction, Direction::Future);
        assert_eq!(resolved("next Wednesday", d(2017, 1, 16)), Some(DateRange::day(d(2017, 1, 25))));
        assert_eq!(resolved("february 16", d(2017, 1, 20)), Some(DateRange::day(d(2017, 2, 16))));
        let y = normalize("yesterday", d(2017, 3, 1), Default::default());
        assert_eq!(y.resolved, Some(DateRange::day(d(2017, 2, 28))));
        assert_eq!(y.direction, Direction::Past);
    }

    #[test]
    fn weekday_rules() {
        // 2017-01-18 is a Wednesday.
        let wed = d(2017, 1, 18);
        assert_eq!(resolved("wednesday", wed), Some(DateRange::day(d(2017, 1, 25))));
        assert_eq!(resolved("this friday", wed), Some(DateRange::day(d(2017, 1, 20))));
        assert_eq!(resolved("next friday", wed), Some(DateRange::day(d(2017, 1, 27))));
        assert_eq!(resolved("last monday", wed), Some(DateRange::day(d(2017, 1, 16))));
        assert_eq!(resolved("last wednesday", wed), Some(DateRange::day(d(2017, 1, 11))));
    }

    #[test]
    fn ranges() {
        let wed = d(2017, 1, 18);
        assert_eq!(resolved("this weekend", wed), Some(DateRange { start: d(2017, 1, 21), end: d(2017, 1, 22) }));
        assert_eq!(resolved("next week", wed), Some(DateRange { start: d(2017, 1, 23), end: d(2017, 1, 29) }));
        assert_eq!(resolved("next month", d(2017, 12, 31)), Some(DateRange { start: d(2018, 1, 1), end: d(2018, 1, 31) }));
        assert_eq!(resolved("february 2016", wed), Some(DateRange { start: d(2016, 2, 1), end: d(2016, 2, 29) }));
        assert_eq!(resolved("next week", wed).unwrap().to_string(), "2017-01-23/2017-01-29");
    }

    #[test]
    fn year_rollover_and_leap_days() {
        assert_eq!(resolved("january 5", d(2017, 12, 20)), Some(DateRange::day(d(2018, 1, 5))));
        assert_eq!(resolved("december 20", d(2017, 12, 20)), Some(DateRange::day(d(2017, 12, 20))));
        assert_eq!(resolved("february 29", d(2017, 3, 1)), Some(DateRange::day(d(2020, 2, 29))));
        assert_eq!(resolved("february 29 2017", d(2017, 1, 1)), None);
        assert_eq!(resolved("31/04/2017", d(2017, 1, 1)), None);
    }

    #[test]
    fn future_classification() {
        let a = d(2017, 5, 5);
        let f = |s: &str| is_future_mention(&normalize(s, a, Default::default()));
        assert!(f("tomorrow"));
        assert!(!f("today"));
        assert_eq!(normalize("today", a, Default::default()).direction, Direction::SameDay);
        assert!(!f("sometime soon"));
        assert_eq!(normalize("sometime soon", a, Default::default()).direction, Direction::Ambiguous);
    }

    proptest! {
        #[test]
        fn deictic_shift_equivariance(days in 0i64..20000, k in 0i64..400, n in 0i64..60) {
            let a = d(1990, 1, 1) + chrono::Duration::days(days);
            let b = a + chrono::Duration::days(k);
            let in_n = format!("in {n} days");
            for s in ["today", "tomorrow", "day after tomorrow", in_n.as_str()] {
                let ra = resolved(s, a).unwrap();
                let rb = resolved(s, b).unwrap();
                prop_assert_eq!(rb.start, ra.start + chrono::Duration::days(k));
            }
        }

        #[test]
        fn direction_consistent(surface in "[a-z0-9 /]{0,20}", days in 0i64..3000) {
            let a = d(2015, 1, 1) + chrono::Duration::days(days);
            let m = normalize(&surface, a, Default::default());
            match m.resolved {
                Some(r) => {
                    prop_assert!(r.start <= r.end);
                    prop_assert_eq!(m.direction == Direction::Future, r.start > a);
                }
                None => prop_assert_eq!(m.direction, Direction::Ambiguous),
            }
        }
    }
}
