//! Yosemite decimal grades for class 5 terrain, 5.1 through 5.15d.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of labels on the scale: nine letterless grades plus 5.10a..5.15d.
pub const SCALE_LEN: usize = 9 + 6 * 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradeError {
    #[error("grade number {0} outside 1..=15")]
    Number(u8),
    #[error("grade 5.{0} requires a letter a-d")]
    MissingLetter(u8),
    #[error("grade 5.{0} takes no letter")]
    UnexpectedLetter(u8),
    #[error("cannot parse grade `{0}`")]
    Syntax(String),
}

/// Letter subdivision used from 5.10 upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];

    fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            _ => None,
        }
    }
}

/// A single grade label. Construction enforces that a letter is present
/// exactly when the number is 10 or more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GradeLabel {
    number: u8,
    letter: Option<Letter>,
}

impl GradeLabel {
    pub fn new(number: u8, letter: Option<Letter>) -> Result<Self, GradeError> {
        if !(1..=15).contains(&number) {
            return Err(GradeError::Number(number));
        }
        match (number >= 10, letter) {
            (true, None) => Err(GradeError::MissingLetter(number)),
            (false, Some(_)) => Err(GradeError::UnexpectedLetter(number)),
            _ => Ok(GradeLabel { number, letter }),
        }
    }

    pub fn number(&self) -> u8 {
        self.number
    }

    pub fn letter(&self) -> Option<Letter> {
        self.letter
    }

    /// Position on the ascending scale, 0 for 5.1 and 32 for 5.15d.
    pub fn index(&self) -> usize {
        match self.letter {
            None => self.number as usize - 1,
            Some(l) => 9 + (self.number as usize - 10) * 4 + l as usize,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        if index < 9 {
            Some(GradeLabel { number: index as u8 + 1, letter: None })
        } else if index < SCALE_LEN {
            let rest = index - 9;
            Some(GradeLabel {
                number: 10 + (rest / 4) as u8,
                letter: Some(Letter::ALL[rest % 4]),
            })
        } else {
            None
        }
    }
}

impl Ord for GradeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.number
            .cmp(&other.number)
            .then(self.letter.cmp(&other.letter))
    }
}

impl PartialOrd for GradeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GradeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "5.{}", self.number)?;
        if let Some(l) = self.letter {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for GradeLabel {
    type Err = GradeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || GradeError::Syntax(s.to_string());
        let rest = s.strip_prefix("5.").ok_or_else(syntax)?;
        let digits_end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if digits_end == 0 || digits_end > 2 {
            return Err(syntax());
        }
        let number: u8 = rest[..digits_end].parse().map_err(|_| syntax())?;
        let tail = &rest[digits_end..];
        let letter = match tail.len() {
            0 => None,
            1 => Some(Letter::from_char(tail.chars().next().unwrap()).ok_or_else(syntax)?),
            _ => return Err(syntax()),
        };
        GradeLabel::new(number, letter)
    }
}

impl Serialize for GradeLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GradeLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn compare_grades(a: GradeLabel, b: GradeLabel) -> Ordering {
    a.cmp(&b)
}

/// All 33 labels, easiest first.
pub fn grade_scale() -> Vec<GradeLabel> {
    (0..SCALE_LEN).filter_map(GradeLabel::from_index).collect()
}

pub fn grade_step_distance(a: GradeLabel, b: GradeLabel) -> usize {
    a.index().abs_diff(b.index())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GradeLabel {
        s.parse().unwrap()
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(compare_grades(g("5.12a"), g("5.12b")), Ordering::Less);
        assert_eq!(compare_grades(g("5.9"), g("5.9")), Ordering::Equal);
        assert_eq!(compare_grades(g("5.13a"), g("5.12b")), Ordering::Greater);
    }

    #[test]
    fn scale_shape() {
        let scale = grade_scale();
        assert_eq!(scale.len(), 33);
        assert_eq!(scale[0].to_string(), "5.1");
        assert_eq!(scale[32].to_string(), "5.15d");
        for (i, label) in scale.iter().enumerate() {
            assert_eq!(label.index(), i);
        }
    }

    #[test]
    fn step_distance_examples() {
        assert_eq!(grade_step_distance(g("5.10a"), g("5.10a")), 0);
        assert_eq!(grade_step_distance(g("5.9"), g("5.10a")), 1);
        assert_eq!(grade_step_distance(g("5.10a"), g("5.10d")), 3);
    }

    #[test]
    fn construction_rejects_bad_letters() {
        assert_eq!(GradeLabel::new(9, Some(Letter::A)), Err(GradeError::UnexpectedLetter(9)));
        assert_eq!(GradeLabel::new(11, None), Err(GradeError::MissingLetter(11)));
        assert_eq!(GradeLabel::new(16, None), Err(GradeError::Number(16)));
        assert_eq!(GradeLabel::new(0, None), Err(GradeError::Number(0)));
        for bad in ["5.", "5.1e", "4.9", "5.10", "5.9a", "5.123", "5.10ab", ""] {
            assert!(bad.parse::<GradeLabel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_parse_roundtrip() {
        for label in grade_scale() {
            assert_eq!(label.to_string().parse::<GradeLabel>().unwrap(), label);
        }
    }
}
