//! Token patterns for DATE, TIME, MONEY and PERCENT.

use super::EntityLabel;
use crate::temporal::grammar::{count_number, day_number, is_clock, month_number, parse_numeric, year_number, MONTHS, WEEKDAYS};
use crate::text::Token;

fn lower(tokens: &[Token], i: usize) -> Option<String> {
    tokens.get(i).map(|t| t.surface.to_lowercase())
}

fn is_full_weekday(w: &str) -> bool {
    WEEKDAYS.contains(&w)
}

/// Month name at `i`; abbreviations only when capitalized. Returns tokens consumed
/// (an abbreviation may carry a detached period).
fn month_at(tokens: &[Token], i: usize) -> Option<usize> {
    let t = tokens.get(i)?;
    let w = t.surface.to_lowercase();
    month_number(&w)?;
    if MONTHS.contains(&w.as_str()) {
        return Some(1);
    }
    if !t.is_capitalized() {
        return None;
    }
    Some(if lower(tokens, i + 1).as_deref() == Some(".") { 2 } else { 1 })
}

fn is_meridiem(w: &str) -> bool {
    matches!(w, "am" | "pm" | "a.m" | "p.m" | "a.m." | "p.m.")
}

fn year_after(tokens: &[Token], i: usize) -> usize {
    match lower(tokens, i).as_deref() {
        Some(",") if lower(tokens, i + 1).is_some_and(|w| year_number(&w).is_some()) => 2,
        Some(w) if year_number(w).is_some() => 1,
        _ => 0,
    }
}

/// A DATE or TIME expression starting at token `i`: `(tokens consumed, label)`.
pub fn match_temporal(tokens: &[Token], i: usize) -> Option<(usize, EntityLabel)> {
    let w = lower(tokens, i)?;
    let next = lower(tokens, i + 1);
    let next2 = lower(tokens, i + 2);
    let date = |n| Some((n, EntityLabel::Date));
    match w.as_str() {
        "today" | "tomorrow" | "yesterday" | "tonight" => return date(1),
        "day" if matches!((next.as_deref(), next2.as_deref()), (Some("after"), Some("tomorrow")) | (Some("before"), Some("yesterday"))) => {
            return date(3)
        }
        "this" | "next" | "coming" | "upcoming" | "last" | "previous" => {
            let n = next.as_deref()?;
            if is_full_weekday(n) {
                return date(2);
            }
            let named = matches!((w.as_str(), n), ("this" | "next" | "coming", "weekend" | "week") | ("next" | "coming", "month"));
            return named.then_some((2, EntityLabel::Date));
        }
        "in" | "after" | "within" => {
            let n = next.as_deref()?;
            let unit = next2.as_deref()?;
            return (count_number(n).is_some() && matches!(unit, "day" | "days" | "week" | "weeks")).then_some((3, EntityLabel::Date));
        }
        "noon" | "midnight" => return Some((1, EntityLabel::Time)),
        _ => {}
    }
    if is_full_weekday(&w) {
        return date(1);
    }
    if let Some(m) = month_at(tokens, i) {
        let after = i + m;
        let d = lower(tokens, after)?;
        if day_number(&d).is_some() {
            return date(m + 1 + year_after(tokens, after + 1));
        }
        if year_number(&d).is_some() {
            return date(m + 1);
        }
        return None;
    }
    if day_number(&w).is_some() {
        let of = usize::from(next.as_deref() == Some("of"));
        if let Some(m) = month_at(tokens, i + 1 + of) {
            let after = i + 1 + of + m;
            return date(1 + of + m + year_after(tokens, after));
        }
    }
    if count_number(&w).is_some() {
        let unit = next.as_deref().unwrap_or("");
        if matches!(unit, "day" | "days" | "week" | "weeks") {
            match next2.as_deref() {
                Some("later") | Some("ago") | Some("hence") => return date(3),
                Some("from") if lower(tokens, i + 3).as_deref() == Some("now") => return date(4),
                _ => {}
            }
        }
        if w.parse::<u32>().is_ok_and(|h| (1..=12).contains(&h)) && is_meridiem(unit) {
            return Some((2, EntityLabel::Time));
        }
    }
    if is_clock(&w) && (w.contains(':') || w.ends_with('m') || w.ends_with("m.")) {
        return Some((1, EntityLabel::Time));
    }
    if w.matches(['/', '-', '.']).count() == 2 && parse_numeric(&w, true).is_some() {
        return date(1);
    }
    None
}

fn is_amount(w: &str) -> bool {
    let mut digits = 0;
    for c in w.chars() {
        match c {
            '0'..='9' => digits += 1,
            ',' | '.' => {}
            _ => return false,
        }
    }
    digits > 0 && w.chars().next().is_some_and(|c| c.is_ascii_digit())
}

fn is_scale(w: &str) -> bool {
    matches!(w, "crore" | "crores" | "lakh" | "lakhs" | "million" | "billion" | "thousand")
}

/// MONEY: "Rs 500", "Rs. 5 crore", "₹500", "$20 million", "500 rupees".
pub fn match_money(tokens: &[Token], i: usize) -> Option<usize> {
    let w = lower(tokens, i)?;
    let mut n = match w.as_str() {
        "rs" | "inr" | "₹" | "$" | "usd" => {
            let dot = usize::from(lower(tokens, i + 1).as_deref() == Some("."));
            if !is_amount(&lower(tokens, i + 1 + dot)?) {
                return None;
            }
            2 + dot
        }
        _ if is_amount(&w) => {
            let scale = usize::from(lower(tokens, i + 1).is_some_and(|s| is_scale(&s)));
            let cur = lower(tokens, i + 1 + scale)?;
            if !matches!(cur.as_str(), "rupees" | "rupee" | "dollars") {
                return None;
            }
            return Some(2 + scale);
        }
        _ => return None,
    };
    if lower(tokens, i + n).is_some_and(|s| is_scale(&s)) {
        n += 1;
    }
    Some(n)
}

/// PERCENT: "12%", "12 percent", "12 per cent".
pub fn match_percent(tokens: &[Token], i: usize) -> Option<usize> {
    if !is_amount(&lower(tokens, i)?) {
        return None;
    }
    match lower(tokens, i + 1)?.as_str() {
        "%" | "percent" => Some(2),
        "per" if lower(tokens, i + 2).as_deref() == Some("cent") => Some(3),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn first(text: &str) -> Option<(String, EntityLabel)> {
        let toks = tokenize(text);
        let (n, label) = match_temporal(&toks, 0)?;
        Some((toks[..n].iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "), label))
    }

    #[test]
    fn date_shapes() {
        let d = |s: &str| first(s).map(|(s, l)| { assert_eq!(l, EntityLabel::Date); s });
        assert_eq!(d("february 16 ,").as_deref(), Some("february 16"));
        assert_eq!(d("February 16, 2017 at").as_deref(), Some("February 16 , 2017"));
        assert_eq!(d("16th of February").as_deref(), Some("16th of February"));
        assert_eq!(d("Feb. 16").as_deref(), Some("Feb . 16"));
        assert_eq!(d("next Wednesday").as_deref(), Some("next Wednesday"));
        assert_eq!(d("day after tomorrow").as_deref(), Some("day after tomorrow"));
        assert_eq!(d("in 3 days").as_deref(), Some("in 3 days"));
        assert_eq!(d("two days later").as_deref(), Some("two days later"));
        assert_eq!(d("16/02/2017").as_deref(), Some("16/02/2017"));
        assert_eq!(d("this weekend").as_deref(), Some("this weekend"));
        assert_eq!(d("march to the"), None);
        assert_eq!(d("may be"), None);
        assert_eq!(d("feb 16"), None);
        assert_eq!(d("this year"), None);
    }

    #[test]
    fn time_shapes() {
        assert_eq!(first("10 am"), Some(("10 am".into(), EntityLabel::Time)));
        assert_eq!(first("10:30"), Some(("10:30".into(), EntityLabel::Time)));
        assert_eq!(first("5pm"), Some(("5pm".into(), EntityLabel::Time)));
        assert_eq!(first("noon"), Some(("noon".into(), EntityLabel::Time)));
        assert_eq!(first("10 people"), None);
    }

    #[test]
    fn money_and_percent() {
        let t = tokenize("Rs 5 crore and ₹500 and 200 rupees and 12% and 3 per cent");
        assert_eq!(match_money(&t, 0), Some(3));
        assert_eq!(match_money(&t, 4), Some(2));
        assert_eq!(match_money(&t, 7), Some(2));
        assert_eq!(match_percent(&t, 10), Some(2));
        assert_eq!(match_percent(&t, 13), Some(3));
        assert_eq!(match_money(&t, 10), None);
    }
}
