//! Models shipped with the crate.
//!
//! `m1`/`m2` are the two models that no assignment-free formula tells apart
//! at `s1` under `?x = i`. `crime` and `robot` are small story models for
//! the introductory examples.

use crate::semantics::{KripkeModel, PointedModel, VarAssignment};

pub const M1_JSON: &str = include_str!("../fixtures/m1.json");
pub const M2_JSON: &str = include_str!("../fixtures/m2.json");
pub const CRIME_JSON: &str = include_str!("../fixtures/crime.json");
pub const ROBOT_JSON: &str = include_str!("../fixtures/robot.json");

fn load(text: &str) -> KripkeModel {
    serde_json::from_str(text).expect("bundled fixture parses")
}

pub fn m1() -> KripkeModel {
    load(M1_JSON)
}

pub fn m2() -> KripkeModel {
    load(M2_JSON)
}

pub fn crime() -> KripkeModel {
    load(CRIME_JSON)
}

pub fn robot() -> KripkeModel {
    load(ROBOT_JSON)
}

/// `(M1, s1, ?x = i)` and `(M2, s1, ?x = i)`.
pub fn prop24_points() -> (PointedModel, PointedModel) {
    let sigma = VarAssignment::from([("x", "i")]);
    (
        PointedModel::new(m1(), "s1", sigma.clone()),
        PointedModel::new(m2(), "s1", sigma),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelsearch::suites::{corpus, robot_readings};
    use crate::semantics::{eval, validate_model};

    fn holds(m: &KripkeModel, phi: &crate::syntax::Formula) -> bool {
        eval(&PointedModel::new(m.clone(), "s0", VarAssignment::new()), phi).unwrap()
    }

    #[test]
    fn fixtures_are_valid() {
        for m in [m1(), m2(), crime(), robot()] {
            assert_eq!(validate_model(&m), vec![]);
        }
    }

    #[test]
    fn crime_story() {
        let c = corpus();
        assert!(holds(&crime(), &c[2].1), "Charles knows who killed whom");
        assert!(holds(&crime(), &c[3].1), "Dave knows only the names");
    }

    #[test]
    fn robot_story() {
        let c = corpus();
        let r = robot_readings();
        assert!(holds(&robot(), &c[0].1));
        assert!(holds(&robot(), &c[1].1));
        assert!(holds(&robot(), &r[0].1));
        assert!(!holds(&robot(), &r[1].1));
    }
}
