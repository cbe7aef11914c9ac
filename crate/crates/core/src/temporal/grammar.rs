//! Surface grammar for date expressions.

/// A parsed date expression, not yet anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateExpr {
    /// Calendar date; without a year the earliest occurrence on or after the anchor is meant.
    Absolute { year: Option<i32>, month: u32, day: u32 },
    /// A whole month.
    MonthOfYear { year: i32, month: u32 },
    /// Anchor plus a signed number of days (today, tomorrow, in 3 days, 2 days ago ...).
    Offset(i64),
    Weekday { weekday: u32, modifier: WeekdayModifier },
    Named(NamedRange),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeekdayModifier {
    /// Bare weekday, or prefixed with "this"/"coming".
    Upcoming,
    Next,
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedRange {
    ThisWeekend,
    NextWeekend,
    ThisWeek,
    NextWeek,
    NextMonth,
}

pub const MONTHS: [&str; 12] = [
    "january", "february", "march", "april", "may", "june", "july", "august", "september", "october",
    "november", "december",
];

pub const WEEKDAYS: [&str; 7] = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];

/// Month number (1-based) for a full or abbreviated month name.
pub fn month_number(word: &str) -> Option<u32> {
    let w = word.trim_end_matches('.');
    if let Some(i) = MONTHS.iter().position(|m| *m == w) {
        return Some(i as u32 + 1);
    }
    let abbrev = match w {
        "jan" => 1,
        "feb" => 2,
        "mar" => 3,
        "apr" => 4,
        "jun" => 6,
        "jul" => 7,
        "aug" => 8,
        "sep" | "sept" => 9,
        "oct" => 10,
        "nov" => 11,
        "dec" => 12,
        _ => return None,
    };
    Some(abbrev)
}

/// Weekday index, Monday = 0.
pub fn weekday_number(word: &str) -> Option<u32> {
    let w = word.trim_end_matches('.');
    if let Some(i) = WEEKDAYS.iter().position(|d| *d == w) {
        return Some(i as u32);
    }
    let i = match w {
        "mon" => 0,
        "tue" | "tues" => 1,
        "wed" => 2,
        "thu" | "thur" | "thurs" => 3,
        "fri" => 4,
        "sat" => 5,
        "sun" => 6,
        _ => return None,
    };
    Some(i)
}

/// Day of month from "16", "16th", "1st" ...
pub fn day_number(word: &str) -> Option<u32> {
    let digits = ["st", "nd", "rd", "th"]
        .iter()
        .find_map(|s| word.strip_suffix(s))
        .unwrap_or(word);
    if digits.is_empty() || digits.len() > 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let d: u32 = digits.parse().ok()?;
    (1..=31).contains(&d).then_some(d)
}

pub fn year_number(word: &str) -> Option<i32> {
    (word.len() == 4 && word.bytes().all(|b| b.is_ascii_digit()))
        .then(|| word.parse().ok())
        .flatten()
        .filter(|y| (1900..=2199).contains(y))
}

/// Small cardinal numbers, as digits or words.
pub fn count_number(word: &str) -> Option<i64> {
    if !word.is_empty() && word.len() <= 3 && word.bytes().all(|b| b.is_ascii_digit()) {
        return word.parse().ok();
    }
    const WORDS: [&str; 15] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
        "twelve", "thirteen", "fourteen",
    ];
    WORDS.iter().position(|w| *w == word).map(|i| i as i64)
}

/// True for clock-time words that may trail a date ("10 am", "noon", "evening").
pub fn is_time_word(word: &str) -> bool {
    matches!(
        word,
        "am" | "pm" | "a.m." | "p.m." | "a.m" | "p.m" | "noon" | "midnight" | "morning" | "afternoon" | "evening"
            | "night" | "hrs" | "hours" | "o'clock" | "at"
    ) || is_clock(word)
}

/// "10:30", "10am", "5pm", "10.30am".
pub fn is_clock(word: &str) -> bool {
    let core = ["am", "pm", "a.m.", "p.m."]
        .iter()
        .find_map(|s| word.strip_suffix(s))
        .unwrap_or(word);
    let has_suffix = core.len() != word.len();
    let mut parts = core.split([':', '.']);
    let Some(h) = parts.next() else { return false };
    let Ok(hour) = h.parse::<u32>() else { return false };
    if h.len() > 2 || hour > 23 {
        return false;
    }
    match parts.next() {
        None => has_suffix && (1..=12).contains(&hour),
        Some(m) => m.len() == 2 && m.parse::<u32>().is_ok_and(|m| m < 60) && parts.next().is_none(),
    }
}

fn words_of(surface: &str) -> Vec<String> {
    let lower = surface.to_lowercase().replace(',', " ");
    let mut words: Vec<String> = lower.split_whitespace().map(str::to_string).collect();
    // A trailing clock time ("february 16 10 am") carries no date information.
    while let Some(last) = words.last() {
        let meridiem = matches!(last.as_str(), "am" | "pm" | "a.m." | "p.m." | "a.m" | "p.m");
        if meridiem && words.len() >= 2 && count_number(&words[words.len() - 2]).is_some() {
            words.truncate(words.len() - 2);
        } else if is_time_word(last) {
            words.pop();
        } else {
            break;
        }
    }
    while let Some(first) = words.first() {
        if matches!(first.as_str(), "on" | "by" | "from" | "till" | "until" | "the") || is_time_word(first) {
            words.remove(0);
        } else if count_number(first).is_some() && words.get(1).is_some_and(|w| matches!(w.as_str(), "am" | "pm" | "a.m." | "p.m.")) {
            words.drain(..2);
        } else {
            break;
        }
    }
    words
}

/// Parses a numeric date "16/02/2017", "16-02-2017", "2017-02-16", "16.02.17", "16/02".
pub fn parse_numeric(word: &str, day_first: bool) -> Option<DateExpr> {
    let sep = ['/', '-', '.'].into_iter().find(|&c| word.contains(c))?;
    let parts: Vec<&str> = word.split(sep).collect();
    if parts.iter().any(|p| p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit())) {
        return None;
    }
    let num = |s: &str| s.parse::<u32>().ok();
    let (year, a, b) = match parts.as_slice() {
        [y, m, d] if y.len() == 4 => return absolute(Some(num(y)? as i32), num(m)?, num(d)?),
        [a, b, y] if a.len() <= 2 && b.len() <= 2 => {
            let y = match y.len() {
                2 => 2000 + num(y)? as i32,
                4 => num(y)? as i32,
                _ => return None,
            };
            (Some(y), num(a)?, num(b)?)
        }
        [a, b] if sep == '/' && a.len() <= 2 && b.len() <= 2 => (None, num(a)?, num(b)?),
        _ => return None,
    };
    let (day, month) = if day_first { (a, b) } else { (b, a) };
    absolute(year, month, day)
}

fn absolute(year: Option<i32>, month: u32, day: u32) -> Option<DateExpr> {
    ((1..=12).contains(&month) && (1..=31).contains(&day)).then_some(DateExpr::Absolute { year, month, day })
}

/// Parses a date surface. `None` when the surface is outside the grammar.
pub fn parse(surface: &str, day_first: bool) -> Option<DateExpr> {
    let words = words_of(surface);
    let w: Vec<&str> = words.iter().map(String::as_str).collect();
    use DateExpr::*;
    use NamedRange::*;
    use WeekdayModifier::*;
    let expr = match w.as_slice() {
        ["today"] | ["tonight"] => Offset(0),
        ["tomorrow"] => Offset(1),
        ["day", "after", "tomorrow"] | ["the", "day", "after", "tomorrow"] => Offset(2),
        ["yesterday"] => Offset(-1),
        ["day", "before", "yesterday"] => Offset(-2),
        ["this", "weekend"] | ["coming", "weekend"] => Named(ThisWeekend),
        ["next", "weekend"] => Named(NextWeekend),
        ["this", "week"] => Named(ThisWeek),
        ["next", "week"] | ["coming", "week"] => Named(NextWeek),
        ["next", "month"] | ["coming", "month"] => Named(NextMonth),
        ["in", n, unit] | ["after", n, unit] | ["within", n, unit] => Offset(count_number(n)? * unit_days(unit)?),
        [n, unit, "later"] | [n, unit, "from", "now"] | [n, unit, "hence"] => Offset(count_number(n)? * unit_days(unit)?),
        [n, unit, "ago"] => Offset(-count_number(n)? * unit_days(unit)?),
        [day] if weekday_number(day).is_some() => Weekday { weekday: weekday_number(day)?, modifier: Upcoming },
        ["this" | "coming" | "upcoming", day] => Weekday { weekday: weekday_number(day)?, modifier: Upcoming },
        ["next", day] => Weekday { weekday: weekday_number(day)?, modifier: Next },
        ["last" | "previous", day] => Weekday { weekday: weekday_number(day)?, modifier: Last },
        // weekday followed by a calendar date: the date wins
        [wd, rest @ ..] if weekday_number(wd).is_some() && !rest.is_empty() => return parse(&rest.join(" "), day_first),
        [single] => parse_numeric(single, day_first)?,
        [m, d] if month_number(m).is_some() && day_number(d).is_some() => absolute(None, month_number(m)?, day_number(d)?)?,
        [m, y] if month_number(m).is_some() && year_number(y).is_some() => MonthOfYear { year: year_number(y)?, month: month_number(m)? },
        [d, m] | [d, "of", m] if day_number(d).is_some() => absolute(None, month_number(m)?, day_number(d)?)?,
        [m, d, y] if month_number(m).is_some() => absolute(Some(year_number(y)?), month_number(m)?, day_number(d)?)?,
        [d, m, y] | [d, "of", m, y] if day_number(d).is_some() => absolute(Some(year_number(y)?), month_number(m)?, day_number(d)?)?,
        _ => return None,
    };
    Some(expr)
}

fn unit_days(unit: &str) -> Option<i64> {
    match unit {
        "day" | "days" => Some(1),
        "week" | "weeks" => Some(7),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absolute_forms() {
        let feb16 = Some(DateExpr::Absolute { year: None, month: 2, day: 16 });
        assert_eq!(parse("february 16", true), feb16);
        assert_eq!(parse("February 16th", true), feb16);
        assert_eq!(parse("16th of February", true), feb16);
        assert_eq!(parse("Feb. 16", true), feb16);
        assert_eq!(parse("on 16 Feb", true), feb16);
        assert_eq!(
            parse("February 16, 2017", true),
            Some(DateExpr::Absolute { year: Some(2017), month: 2, day: 16 })
        );
        assert_eq!(parse("february 16, 10 am", true), feb16);
        assert_eq!(parse("february 2017", true), Some(DateExpr::MonthOfYear { year: 2017, month: 2 }));
        assert_eq!(parse("february 32", true), None);
        assert_eq!(parse("march", true), None);
    }

    #[test]
    fn numeric_forms() {
        let d = Some(DateExpr::Absolute { year: Some(2017), month: 2, day: 3 });
        assert_eq!(parse("03/02/2017", true), d);
        assert_eq!(parse("02/03/2017", false), d);
        assert_eq!(parse("2017-02-03", true), d);
        assert_eq!(parse("03.02.17", true), d);
        assert_eq!(parse("13/13/2017", true), None);
    }

    #[test]
    fn relative_forms() {
        assert_eq!(parse("Day after Tomorrow", true), Some(DateExpr::Offset(2)));
        assert_eq!(parse("in 3 days", true), Some(DateExpr::Offset(3)));
        assert_eq!(parse("two weeks later", true), Some(DateExpr::Offset(14)));
        assert_eq!(parse("5 days ago", true), Some(DateExpr::Offset(-5)));
        assert_eq!(
            parse("Next Wednesday", true),
            Some(DateExpr::Weekday { weekday: 2, modifier: WeekdayModifier::Next })
        );
        assert_eq!(
            parse("on coming Friday evening", true),
            Some(DateExpr::Weekday { weekday: 4, modifier: WeekdayModifier::Upcoming })
        );
        assert_eq!(
            parse("Thursday, February 16", true),
            Some(DateExpr::Absolute { year: None, month: 2, day: 16 })
        );
        assert_eq!(parse("10 am", true), None);
        assert_eq!(parse("soon", true), None);
    }

    #[test]
    fn clock_words() {
        for w in ["10:30", "10am", "5pm", "10.30am", "noon"] {
            assert!(is_time_word(w), "{w}");
        }
        for w in ["16", "25:00", "2017", "13pm"] {
            assert!(!is_time_word(w), "{w}");
        }
    }
}
