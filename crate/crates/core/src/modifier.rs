use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Intensity of a requested change. Ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Power {
    Slightly,
    Moderately,
    Significantly,
}

impl Power {
    pub const ALL: [Power; 3] = [Power::Slightly, Power::Moderately, Power::Significantly];

    pub fn as_str(self) -> &'static str {
        match self {
            Power::Slightly => "slightly",
            Power::Moderately => "moderately",
            Power::Significantly => "significantly",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Greater,
    Less,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Greater, Direction::Less];

    /// +1 for `Greater`, -1 for `Less`.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Greater => 1.0,
            Direction::Less => -1.0,
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Greater => Direction::Less,
            Direction::Less => Direction::Greater,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Greater => "greater",
            Direction::Less => "less",
        }
    }
}

/// One user utterance, e.g. "moderately greater".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modifier {
    pub power: Power,
    pub direction: Direction,
}

impl Modifier {
    pub const fn new(power: Power, direction: Direction) -> Self {
        Modifier { power, direction }
    }

    /// All six modifiers, weakest power first, `Greater` before `Less`.
    pub fn all() -> impl Iterator<Item = Modifier> {
        Power::ALL
            .into_iter()
            .flat_map(|p| Direction::ALL.into_iter().map(move |d| Modifier::new(p, d)))
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.power, self.direction)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized modifier `{0}`")]
pub struct ParseModifierError(pub String);

impl FromStr for Power {
    type Err = ParseModifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "slightly" => Ok(Power::Slightly),
            "moderately" => Ok(Power::Moderately),
            "significantly" => Ok(Power::Significantly),
            _ => Err(ParseModifierError(s.to_string())),
        }
    }
}

impl FromStr for Direction {
    type Err = ParseModifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "greater" => Ok(Direction::Greater),
            "less" => Ok(Direction::Less),
            _ => Err(ParseModifierError(s.to_string())),
        }
    }
}

/// Parses `"<power> <direction>"`, e.g. `"slightly less"`.
impl FromStr for Modifier {
    type Err = ParseModifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some(p), Some(d), None) => Ok(Modifier::new(
                p.parse().map_err(|_| ParseModifierError(s.to_string()))?,
                d.parse().map_err(|_| ParseModifierError(s.to_string()))?,
            )),
            _ => Err(ParseModifierError(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_order() {
        assert!(Power::Slightly < Power::Moderately);
        assert!(Power::Moderately < Power::Significantly);
    }

    #[test]
    fn direction_sign() {
        assert_eq!(Direction::Greater.sign(), 1.0);
        assert_eq!(Direction::Less.sign(), -1.0);
        assert_eq!(Direction::Less.opposite(), Direction::Greater);
    }

    #[test]
    fn six_distinct_modifiers() {
        let all: Vec<_> = Modifier::all().collect();
        assert_eq!(all.len(), 6);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let m: Modifier = "Moderately greater".parse().unwrap();
        assert_eq!(m, Modifier::new(Power::Moderately, Direction::Greater));
        assert_eq!(m.to_string(), "moderately greater");
        assert!("very greater".parse::<Modifier>().is_err());
        assert!("slightly".parse::<Modifier>().is_err());
        assert!("slightly less more".parse::<Modifier>().is_err());
    }

    #[test]
    fn wire_format_is_lowercase() {
        let m = Modifier::new(Power::Significantly, Direction::Less);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"power":"significantly","direction":"less"}"#);
        let back: Modifier = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Modifier>(r#"{"power":"hugely","direction":"less"}"#).is_err());
    }
}
