//! Walls, holds, routes and climbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::grade::GradeLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoldType {
    Jug,
    Crimp,
    Sloper,
    Pinch,
    Pocket,
    Foothold,
    Volume,
}

impl HoldType {
    pub const ALL: [HoldType; 7] = [
        HoldType::Jug,
        HoldType::Crimp,
        HoldType::Sloper,
        HoldType::Pinch,
        HoldType::Pocket,
        HoldType::Foothold,
        HoldType::Volume,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HoldType::Jug => "jug",
            HoldType::Crimp => "crimp",
            HoldType::Sloper => "sloper",
            HoldType::Pinch => "pinch",
            HoldType::Pocket => "pocket",
            HoldType::Foothold => "foothold",
            HoldType::Volume => "volume",
        }
    }

    /// Typical difficulty of a hold of this type, used when an edit swaps a
    /// hold's type and needs a matching difficulty.
    pub fn nominal_difficulty(self) -> f64 {
        match self {
            HoldType::Jug => 0.1,
            HoldType::Volume => 0.25,
            HoldType::Foothold => 0.2,
            HoldType::Pinch => 0.45,
            HoldType::Crimp => 0.6,
            HoldType::Pocket => 0.65,
            HoldType::Sloper => 0.7,
        }
    }
}

impl fmt::Display for HoldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HoldType {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        HoldType::ALL.into_iter().find(|t| t.as_str() == s).ok_or(())
    }
}

/// Which limbs may use a hold. Never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Roles {
    pub hand: bool,
    pub foot: bool,
}

impl Roles {
    pub const HAND: Roles = Roles { hand: true, foot: false };
    pub const FOOT: Roles = Roles { hand: false, foot: true };
    pub const BOTH: Roles = Roles { hand: true, foot: true };

    pub fn is_empty(&self) -> bool {
        !self.hand && !self.foot
    }
}

impl fmt::Display for Roles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.hand, self.foot) {
            (true, true) => "hand|foot",
            (true, false) => "hand",
            (false, true) => "foot",
            (false, false) => "",
        })
    }
}

impl FromStr for Roles {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let mut roles = Roles { hand: false, foot: false };
        for part in s.split('|') {
            match part {
                "hand" if !roles.hand => roles.hand = true,
                "foot" if !roles.foot => roles.foot = true,
                _ => return Err(()),
            }
        }
        Ok(roles)
    }
}

impl Serialize for Roles {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Roles {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse()
            .map_err(|_| serde::de::Error::custom(format!("invalid roles `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hold {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub hold_type: HoldType,
    /// 0 is the easiest usable hold, 1 the hardest.
    pub difficulty: f64,
    pub roles: Roles,
    pub orientation: f64,
}

impl Hold {
    pub fn distance_to(&self, other: &Hold) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A horizontal band of the wall. `angle` is measured from horizontal:
/// 90 is vertical, above 90 overhangs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub y0: f64,
    pub y1: f64,
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    pub width: f64,
    pub height: f64,
    pub panels: Vec<Panel>,
    pub holds: Vec<Hold>,
}

impl Wall {
    pub fn hold(&self, id: &str) -> Option<&Hold> {
        self.holds.iter().find(|h| h.id == id)
    }

    pub fn hold_mut(&mut self, id: &str) -> Option<&mut Hold> {
        self.holds.iter_mut().find(|h| h.id == id)
    }

    /// Angle of the panel containing height `y`. Heights outside every
    /// panel fall back to the nearest panel, or vertical on a panel-less wall.
    pub fn panel_angle_at(&self, y: f64) -> f64 {
        if let Some(p) = self.panels.iter().find(|p| y >= p.y0 && y < p.y1) {
            return p.angle;
        }
        self.panels
            .iter()
            .min_by(|a, b| {
                let da = (y - a.y0).abs().min((y - a.y1).abs());
                let db = (y - b.y0).abs().min((y - b.y1).abs());
                da.total_cmp(&db)
            })
            .map_or(90.0, |p| p.angle)
    }

    /// Returns an id of the form `{prefix}{n}` not used by any hold.
    pub fn fresh_hold_id(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n:02}"))
            .find(|id| self.hold(id).is_none())
            .unwrap()
    }
}

/// Movement classes used for style and exposure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveType {
    Reach,
    Cross,
    Match,
    HighStep,
    Mantle,
    Dyno,
    FootSwap,
}

impl MoveType {
    pub const COUNT: usize = 7;
    pub const ALL: [MoveType; 7] = [
        MoveType::Reach,
        MoveType::Cross,
        MoveType::Match,
        MoveType::HighStep,
        MoveType::Mantle,
        MoveType::Dyno,
        MoveType::FootSwap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MoveType::Reach => "reach",
            MoveType::Cross => "cross",
            MoveType::Match => "match",
            MoveType::HighStep => "high_step",
            MoveType::Mantle => "mantle",
            MoveType::Dyno => "dyno",
            MoveType::FootSwap => "foot_swap",
        }
    }
}

impl fmt::Display for MoveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MoveType {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        MoveType::ALL.into_iter().find(|t| t.as_str() == s).ok_or(())
    }
}

/// A weight per move type. Used both for a beta's style histogram and for a
/// climber's exposure distribution; serialized as `{move_type: weight}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StyleVector(pub [f64; MoveType::COUNT]);

impl StyleVector {
    pub fn uniform() -> Self {
        StyleVector([1.0 / MoveType::COUNT as f64; MoveType::COUNT])
    }

    pub fn one_hot(t: MoveType) -> Self {
        let mut w = [0.0; MoveType::COUNT];
        w[t as usize] = 1.0;
        StyleVector(w)
    }

    pub fn weight(&self, t: MoveType) -> f64 {
        self.0[t as usize]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_distribution(&self, tol: f64) -> bool {
        self.0.iter().all(|w| *w >= 0.0 && w.is_finite()) && (self.sum() - 1.0).abs() <= tol
    }

    pub fn l1_distance(&self, other: &StyleVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).abs()).sum()
    }
}

impl Serialize for StyleVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, f64> = MoveType::ALL
            .iter()
            .map(|t| (t.as_str(), self.weight(*t)))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StyleVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, f64>::deserialize(deserializer)?;
        let mut w = [0.0; MoveType::COUNT];
        for (k, v) in map {
            let t: MoveType = k
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("unknown move type `{k}`")))?;
            w[t as usize] = v;
        }
        Ok(StyleVector(w))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub name: String,
    pub hold_ids: Vec<String>,
    pub start_hold_ids: Vec<String>,
    pub finish_hold_id: String,
    pub assigned_grade: Option<GradeLabel>,
    pub grade_locked: bool,
    pub exposure_count: u32,
    pub style_tags: Vec<MoveType>,
}

impl Route {
    pub fn new(
        name: impl Into<String>,
        hold_ids: Vec<String>,
        start_hold_ids: Vec<String>,
        finish_hold_id: impl Into<String>,
    ) -> Self {
        Route {
            name: name.into(),
            hold_ids,
            start_hold_ids,
            finish_hold_id: finish_hold_id.into(),
            assigned_grade: None,
            grade_locked: false,
            exposure_count: 0,
            style_tags: Vec::new(),
        }
    }

    pub fn uses(&self, id: &str) -> bool {
        self.hold_ids.iter().any(|h| h == id)
    }

    pub fn is_start(&self, id: &str) -> bool {
        self.start_hold_ids.iter().any(|h| h == id)
    }

    /// Start or finish holds, which edits may not move or remove.
    pub fn is_anchor(&self, id: &str) -> bool {
        self.is_start(id) || self.finish_hold_id == id
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClimberProfile {
    pub ability: f64,
    pub height: f64,
    pub arm_span: f64,
    pub fear_sensitivity: f64,
    pub exposure: StyleVector,
}

impl Default for ClimberProfile {
    fn default() -> Self {
        ClimberProfile {
            ability: 1.5,
            height: 1.75,
            arm_span: 1.75,
            fear_sensitivity: 0.5,
            exposure: StyleVector::uniform(),
        }
    }
}

impl ClimberProfile {
    pub fn is_valid(&self) -> bool {
        self.height > 0.0
            && self.arm_span > 0.0
            && self.fear_sensitivity >= 0.0
            && self.ability.is_finite()
            && self.exposure.is_distribution(1e-9)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReachLimit {
    pub hand_hand: f64,
    pub hand_foot: f64,
}

pub fn reach_limit(climber: &ClimberProfile) -> ReachLimit {
    ReachLimit {
        hand_hand: climber.arm_span,
        hand_foot: 1.2 * climber.height,
    }
}
