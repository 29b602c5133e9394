//! Route-setting engine for climbing walls.
//!
//! Walls and routes are described in [`model`] and read or written through
//! [`format`]. [`planner`] predicts the beta a climber will use, [`sim`]
//! turns it into success probabilities, [`grading`] assigns grades against
//! a graded corpus, [`style`] scores and varies routes, and [`generator`]
//! searches hold placements toward a target grade and style.

pub mod fixtures;
pub mod format;
pub mod generator;
pub mod grade;
pub mod grading;
pub mod model;
pub mod planner;
pub mod sim;
pub mod style;
pub mod validate;

pub use grade::{compare_grades, grade_scale, grade_step_distance, GradeLabel};
pub use model::{ClimberProfile, Hold, HoldType, MoveType, Panel, Roles, Route, StyleVector, Wall};
pub use planner::{Beta, BodyState, Limb, Move, PlanError, Planner};
pub use sim::ModelConfig;
