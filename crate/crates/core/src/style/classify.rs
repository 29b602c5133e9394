//! Move-type classification. Rules are tried in order; the first that fires
//! names the move.

use crate::model::{reach_limit, ClimberProfile, MoveType, Wall};
use crate::planner::{BodyState, Limb, Move};

/// A hand move longer than this fraction of arm span is a dyno.
pub const DYNO_FRACTION: f64 = 0.85;
/// Foot-to-hand-hold proximity that counts as a heel or mantle foot.
pub const MANTLE_RADIUS: f64 = 0.3;
/// Feet placed higher than this fraction of hand-foot reach below the hands
/// are high steps.
pub const HIGH_STEP_FRACTION: f64 = 0.6;

/// Geometry of a move, independent of hold ids.
#[derive(Debug, Clone)]
pub struct LimbView {
    /// Positions of LH, RH, LF, RF; `None` for a dangling foot.
    pub limbs: [Option<(f64, f64)>; 4],
    /// Whether each limb currently sits on the destination hold.
    pub same_as: [bool; 4],
    pub limb: Limb,
    /// Destination; `None` when a foot lets go.
    pub target: Option<(f64, f64)>,
    pub distance: f64,
    pub com_y: f64,
    pub arm_span: f64,
    pub hand_foot: f64,
}

fn within(a: (f64, f64), b: (f64, f64), r: f64) -> bool {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    dx * dx + dy * dy <= r * r
}

pub fn classify(v: &LimbView) -> MoveType {
    let i = v.limb as usize;
    let other = v.limb.other() as usize;
    let Some(target) = v.target else { return MoveType::Reach };
    let lh = v.limbs[0].expect("left hand placed");
    let rh = v.limbs[1].expect("right hand placed");

    if v.limb.is_hand() {
        if v.same_as[other] {
            return MoveType::Match;
        }
        let crosses = match v.limb {
            Limb::LH => target.0 > rh.0,
            _ => target.0 < lh.0,
        };
        if crosses {
            return MoveType::Cross;
        }
        if v.distance > DYNO_FRACTION * v.arm_span {
            return MoveType::Dyno;
        }
        let from = v.limbs[i].expect("hand placed");
        if target.1 > from.1 {
            let (mut sum, mut count) = (0.0, 0.0);
            for p in (0..4).filter(|&k| k != i).filter_map(|k| v.limbs[k]) {
                sum += p.1;
                count += 1.0;
            }
            let rest_com = sum / count;
            let pressing = v.limbs[2..]
                .iter()
                .flatten()
                .any(|&f| within(f, from, MANTLE_RADIUS) && f.1 >= rest_com);
            if pressing {
                return MoveType::Mantle;
            }
        }
        return MoveType::Reach;
    }

    let near_hand = within(target, lh, MANTLE_RADIUS) || within(target, rh, MANTLE_RADIUS);
    if near_hand && target.1 >= v.com_y {
        return MoveType::Mantle;
    }
    let hands_y = 0.5 * (lh.1 + rh.1);
    if target.1 >= hands_y - HIGH_STEP_FRACTION * v.hand_foot {
        return MoveType::HighStep;
    }
    if v.same_as[other] {
        return MoveType::FootSwap;
    }
    MoveType::Reach
}

/// Classifies `mv` made from `from`. Holds are looked up on `wall`; unknown
/// ids are treated as dangling.
pub fn classify_move(mv: &Move, from: &BodyState, wall: &Wall, climber: &ClimberProfile) -> MoveType {
    let pos = |id: Option<&str>| id.and_then(|id| wall.hold(id)).map(|h| (h.x, h.y));
    let limbs = Limb::ALL.map(|l| pos(from.limb(l)));
    let to = mv.to.as_deref();
    let same_as = Limb::ALL.map(|l| to.is_some() && from.limb(l) == to);
    classify(&LimbView {
        limbs,
        same_as,
        limb: mv.limb,
        target: pos(to),
        distance: mv.distance,
        com_y: from.com_y,
        arm_span: climber.arm_span,
        hand_foot: reach_limit(climber).hand_foot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(limb: Limb, target: (f64, f64)) -> LimbView {
        let limbs = [Some((1.0, 2.0)), Some((1.5, 2.0)), Some((1.0, 0.8)), Some((1.5, 0.8))];
        let com_y = limbs.iter().flatten().map(|p| p.1).sum::<f64>() / 4.0;
        let from = limbs[limb as usize].unwrap();
        LimbView {
            limbs,
            same_as: limbs.map(|p| p == Some(target)),
            limb,
            target: Some(target),
            distance: (from.0 - target.0).hypot(from.1 - target.1),
            com_y,
            arm_span: 1.75,
            hand_foot: 2.1,
        }
    }

    #[test]
    fn match_cross_dyno_reach() {
        assert_eq!(classify(&view(Limb::LH, (1.5, 2.0))), MoveType::Match);
        assert_eq!(classify(&view(Limb::LH, (1.8, 2.3))), MoveType::Cross);
        assert_eq!(classify(&view(Limb::RH, (0.9, 2.3))), MoveType::Cross);
        let mut v = view(Limb::RH, (1.5, 3.55));
        assert_eq!(classify(&v), MoveType::Dyno);
        v.distance = 0.85 * 1.75;
        assert_eq!(classify(&v), MoveType::Reach);
        assert_eq!(classify(&view(Limb::RH, (1.6, 2.4))), MoveType::Reach);
    }

    #[test]
    fn foot_rules() {
        assert_eq!(classify(&view(Limb::LF, (1.0, 1.1))), MoveType::HighStep);
        assert_eq!(classify(&view(Limb::LF, (1.5, 0.8))), MoveType::HighStep);
        let mut v = view(Limb::LF, (1.5, 0.8));
        v.limbs[0] = Some((1.0, 2.5));
        v.limbs[1] = Some((1.5, 2.5));
        assert_eq!(classify(&v), MoveType::FootSwap);
        v.same_as = [false; 4];
        assert_eq!(classify(&v), MoveType::Reach);
        let mut drop = view(Limb::RF, (0.0, 0.0));
        drop.target = None;
        assert_eq!(classify(&drop), MoveType::Reach);
    }

    #[test]
    fn heel_hook_then_press_is_mantle() {
        // Heel onto a ledge beside the left hand.
        let heel = view(Limb::RF, (1.2, 1.95));
        assert_eq!(classify(&heel), MoveType::Mantle);
        // Then the left hand leaves the ledge upward.
        let mut press = view(Limb::LH, (1.1, 2.6));
        press.limbs[3] = Some((1.2, 1.95));
        assert_eq!(classify(&press), MoveType::Mantle);
        // Without the heel the same hand move is a reach.
        assert_eq!(classify(&view(Limb::LH, (1.1, 2.6))), MoveType::Reach);
    }
}
