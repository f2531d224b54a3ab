use serde::Serialize;

use num_traits::Zero;

use super::{orbit_values, GroupId};
use crate::dynamics::QuadPair;
use crate::error::Result;
use crate::factor::DEFAULT_BUDGET;
use crate::index_sets::IndexVector;
use crate::quad::{quad_independent, sqrt_in_quadratic_field, QuadElement};
use crate::rational::{exact_sqrt, format_rational};
use crate::square::{is_perfect_square, span_dimension};
use crate::tree::{SubgroupGens, TreeAut};

/// The Galois group of `f^2 - alpha` together with an explicit copy of it
/// inside `Omega_2`, up to conjugacy.
///
/// On the normal form `x^2 + c` with basepoint `beta`, the roots of
/// `f(x) = beta` are `+-sqrt(delta)` with `delta = c_{1,beta}`, and above
/// them sit `+-sqrt(d_+)`, `+-sqrt(d_-)` with `d_+- = -c +- sqrt(delta)` and
/// `d_+ d_- = c_{2,beta}`.
#[derive(Debug, Clone, Serialize)]
pub struct Level2Group {
    pub group: GroupId,
    pub delta: String,
    pub c2: String,
    pub delta_square: bool,
    pub elements: Vec<TreeAut>,
}

fn portrait(levels: [&str; 2]) -> TreeAut {
    TreeAut::from_strings(&levels).expect("valid portrait")
}

impl Level2Group {
    fn from_gens(group: GroupId, p: (&str, &str, bool), gens: &[[&str; 2]]) -> Self {
        let gens: Vec<TreeAut> = if gens.is_empty() {
            vec![TreeAut::identity(2)]
        } else {
            gens.iter().map(|g| portrait(*g)).collect()
        };
        let elements: Vec<TreeAut> = SubgroupGens::new(gens)
            .expect("nonempty")
            .closure(8)
            .expect("inside Omega_2")
            .into_iter()
            .collect();
        debug_assert_eq!(elements.len(), group.order());
        Level2Group {
            group,
            delta: p.0.into(),
            c2: p.1.into(),
            delta_square: p.2,
            elements,
        }
    }

    /// Whether every element lies in `M_v`; `v` must be supported in `{1, 2}`.
    pub fn contained_in(&self, v: &IndexVector) -> Result<bool> {
        for g in &self.elements {
            if !g.in_mv(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Name of the Frobenius signature this group predicts.
    pub fn signature(&self) -> &'static str {
        let moves_leaf_pair = |g: &TreeAut| !g.label(1, 0) && (g.label(2, 0) != g.label(2, 1));
        match self.group {
            GroupId::D8 => "D8",
            GroupId::C4 => "C4",
            GroupId::V4 if self.delta_square => "V4 (intransitive)",
            GroupId::V4 => "V4 (transitive)",
            GroupId::C2 if self.elements.iter().any(moves_leaf_pair) => "C2 (1+1+2)",
            GroupId::C2 => "C2 (2+2)",
            GroupId::C1 => "C1",
        }
    }
}

/// Exact `Gal(f^2 - alpha / Q)`; refuses degenerate pairs.
pub fn level2_galois(p: &QuadPair) -> Result<Level2Group> {
    let (c, _) = p.normal_form();
    let vals = orbit_values(&p.to_normal(), 2)?;
    let (delta, c2) = (&vals[0], &vals[1]);
    let ds = format_rational(delta);
    let cs = format_rational(c2);
    match sqrt_in_quadratic_field(delta)? {
        Some(root) => {
            // K1 = Q(sqrt(delta)) with sqrt(delta) = r sqrt(d).
            let d_plus = QuadElement {
                a: -c.clone(),
                b: root.b.clone(),
                d: root.d.clone(),
            };
            let c2k = QuadElement::rational(c2.clone(), &root.d);
            let dim = quad_independent(&[d_plus, c2k])?;
            let key = (ds.as_str(), cs.as_str(), false);
            Ok(match dim {
                2 => Level2Group::from_gens(GroupId::D8, key, &[["1", "00"], ["0", "10"]]),
                1 if is_perfect_square(c2) => {
                    Level2Group::from_gens(GroupId::V4, key, &[["1", "00"], ["0", "11"]])
                }
                1 => {
                    debug_assert!(is_perfect_square(&(delta * c2)));
                    Level2Group::from_gens(GroupId::C4, key, &[["1", "10"]])
                }
                _ => Level2Group::from_gens(GroupId::C2, key, &[["1", "00"]]),
            })
        }
        None => {
            let r = exact_sqrt(delta).expect("square");
            let d_plus = -&c + &r;
            let d_minus = -&c - &r;
            debug_assert!(!d_plus.is_zero() && !d_minus.is_zero());
            let key = (ds.as_str(), cs.as_str(), true);
            let dim = span_dimension(&[d_plus.clone(), d_minus.clone()], DEFAULT_BUDGET)?;
            Ok(match dim {
                0 => Level2Group::from_gens(GroupId::C1, key, &[]),
                1 if is_perfect_square(&d_plus) => {
                    Level2Group::from_gens(GroupId::C2, key, &[["0", "01"]])
                }
                1 if is_perfect_square(&d_minus) => {
                    Level2Group::from_gens(GroupId::C2, key, &[["0", "10"]])
                }
                1 => Level2Group::from_gens(GroupId::C2, key, &[["0", "11"]]),
                _ => Level2Group::from_gens(GroupId::V4, key, &[["0", "10"], ["0", "01"]]),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn g(s: &str) -> GroupId {
        level2_galois(&s.parse().unwrap()).unwrap().group
    }

    #[test]
    fn level2_examples() {
        assert_eq!(g("-1,1"), GroupId::D8);
        assert_eq!(g("-1,-2"), GroupId::D8);
        assert_eq!(g("-2,0"), GroupId::C4);
        assert_eq!(g("1,0"), GroupId::D8);
        assert_eq!(g("0,1"), GroupId::C2);
        assert_eq!(g("-1,-1/2"), GroupId::C4);
        assert!(matches!(
            level2_galois(&"-1,0".parse().unwrap()),
            Err(Error::Degenerate { index: 2 })
        ));
    }

    #[test]
    fn element_counts_match_orders() {
        for s in ["-1,1", "-2,0", "0,1", "0,4", "-2,-1", "3,4", "-3,1"] {
            let l = level2_galois(&s.parse().unwrap()).unwrap();
            assert_eq!(l.elements.len(), l.group.order(), "{s}");
        }
    }
}
