//! Nine-point almost-general-position test through the group law on a
//! singular cubic.
//!
//! The degree-0 class cut out by nine smooth-locus points is a product
//! (multiplicative model, nodal cubic) or a sum (additive model, cuspidal or
//! non-reduced cubic); the points are in almost general position exactly
//! when that class is non-torsion. Over the rationals the multiplicative
//! torsion elements are 1 and -1, the additive one is 0.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{almost_general_incidences, PointConfiguration};
use crate::rat::{Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CubicGroupModel {
    /// Nodal cubic: Pic^0 is the multiplicative group.
    Gm,
    /// Cuspidal or non-reduced cubic: Pic^0 is the additive group.
    Ga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NineVerdict {
    AlmostGeneral,
    NotAlmostGeneral,
}

/// Combines nine smooth-locus parameters into the degree-0 class, with the
/// collinearity normalization fixed to the identity element.
pub fn nine_point_class(model: CubicGroupModel, params: &[Q]) -> Result<Q> {
    if params.len() != 9 {
        return Err(Error::Input("expected exactly nine parameters".into()));
    }
    for (i, a) in params.iter().enumerate() {
        if model == CubicGroupModel::Gm && a.is_zero() {
            return Err(Error::PointAtSingularity);
        }
        if params[i + 1..].contains(a) {
            return Err(Error::DuplicatePoint);
        }
    }
    Ok(match model {
        CubicGroupModel::Gm => params.iter().product(),
        CubicGroupModel::Ga => params.iter().sum(),
    })
}

/// Torsion test over the exact rationals. In the multiplicative group the
/// only roots of unity are 1 and -1; the additive group is torsion-free.
pub fn is_torsion(model: CubicGroupModel, g: &Q) -> bool {
    match model {
        CubicGroupModel::Gm => g.is_one() || (-g).is_one(),
        CubicGroupModel::Ga => g.is_zero(),
    }
}

pub fn almost_general_9(
    model: CubicGroupModel,
    params: &[Q],
    config: &PointConfiguration,
) -> Result<NineVerdict> {
    if config.count != 9 {
        return Err(Error::OutsideModel(format!(
            "nine-point test on {} points",
            config.count
        )));
    }
    config
        .validate()
        .map_err(|e| Error::OutsideModel(e.to_string()))?;
    // Every 8-subset must be in almost general position; with declared
    // incidences this is: no four on a line, no seven on a conic.
    if !almost_general_incidences(config) {
        return Err(Error::OutsideModel(
            "an 8-subset fails almost general position".into(),
        ));
    }
    let class = nine_point_class(model, params).map_err(|e| match e {
        Error::PointAtSingularity => Error::OutsideModel("a point sits at the singularity".into()),
        other => other,
    })?;
    if is_torsion(model, &class) {
        Ok(NineVerdict::NotAlmostGeneral)
    } else {
        Ok(NineVerdict::AlmostGeneral)
    }
}

/// Explicit point of the nodal cubic y^2 z = x^2 (x + z) for a
/// multiplicative parameter; the identity is the inflection at infinity.
pub fn nodal_cubic_point(lambda: &Q) -> Result<[Q; 3]> {
    if lambda.is_zero() {
        return Err(Error::PointAtSingularity);
    }
    if lambda.is_one() {
        return Ok([Q::zero(), Q::one(), Q::zero()]);
    }
    let t = (lambda + Q::one()) / (lambda - Q::one());
    let x = &t * &t - Q::one();
    let y = &t * &x;
    Ok([x, y, Q::one()])
}

/// Explicit point of the cuspidal cubic y^2 z = x^3 for an additive
/// parameter; the identity is the inflection at infinity.
pub fn cuspidal_cubic_point(t: &Q) -> [Q; 3] {
    [t.clone(), Q::one(), t * t * t]
}

/// 3x3 collinearity determinant of projective points.
pub fn collinear_det(p: &[Q; 3], q: &[Q; 3], r: &[Q; 3]) -> Q {
    &p[0] * (&q[1] * &r[2] - &q[2] * &r[1]) - &p[1] * (&q[0] * &r[2] - &q[2] * &r[0])
        + &p[2] * (&q[0] * &r[1] - &q[1] * &r[0])
}

/// Brute-force torsion order search (tests compare it with `is_torsion`).
pub fn torsion_order_upto(model: CubicGroupModel, g: &Q, cap: u32) -> Option<u32> {
    match model {
        CubicGroupModel::Gm => {
            let mut acc = Q::one();
            for n in 1..=cap {
                acc *= g;
                if acc.is_one() {
                    return Some(n);
                }
            }
            None
        }
        CubicGroupModel::Ga => {
            if g.is_zero() {
                Some(1)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    #[test]
    fn class_and_torsion_examples() {
        let mut params: Vec<Q> = (1..=8).map(|i| q(1, i)).collect();
        params.push(qi(2));
        // product of 1/1..1/8 times 2 is 2/8! which is neither 1 nor -1
        let g = nine_point_class(CubicGroupModel::Gm, &params).unwrap();
        assert!(!is_torsion(CubicGroupModel::Gm, &g));

        assert!(is_torsion(CubicGroupModel::Gm, &qi(1)));
        assert!(is_torsion(CubicGroupModel::Gm, &qi(-1)));
        assert!(!is_torsion(CubicGroupModel::Gm, &qi(2)));
        assert!(is_torsion(CubicGroupModel::Ga, &qi(0)));
        assert!(!is_torsion(CubicGroupModel::Ga, &qi(5)));
    }

    #[test]
    fn error_paths() {
        let mut params: Vec<Q> = (1..=9).map(qi).collect();
        params[3] = qi(0);
        assert_eq!(
            nine_point_class(CubicGroupModel::Gm, &params),
            Err(Error::PointAtSingularity)
        );
        let params: Vec<Q> = vec![qi(1); 9];
        assert_eq!(
            nine_point_class(CubicGroupModel::Gm, &params),
            Err(Error::DuplicatePoint)
        );
    }

    #[test]
    fn verdicts() {
        let config = PointConfiguration::general(9);
        let params: Vec<Q> = (1..=8).map(|i| q(1, i)).chain([qi(2)]).collect();
        assert_eq!(
            almost_general_9(CubicGroupModel::Gm, &params, &config).unwrap(),
            NineVerdict::AlmostGeneral
        );

        // product exactly 1: torsion
        let params: Vec<Q> = (2..=9)
            .map(qi)
            .chain([q(1, 362880 / 1)])
            .collect::<Vec<_>>();
        let prod: Q = params.iter().product();
        assert!(prod.is_one());
        assert_eq!(
            almost_general_9(CubicGroupModel::Gm, &params, &config).unwrap(),
            NineVerdict::NotAlmostGeneral
        );

        // additive sum zero
        let params: Vec<Q> = (-4..=4).map(qi).collect();
        assert_eq!(
            almost_general_9(CubicGroupModel::Ga, &params, &config).unwrap(),
            NineVerdict::NotAlmostGeneral
        );

        // collinear 4-subset: outside the model
        let bad = PointConfiguration::with_collinear(9, &[&[1, 2, 3], &[1, 2, 4]]);
        let params: Vec<Q> = (1..=9).map(qi).collect();
        assert!(matches!(
            almost_general_9(CubicGroupModel::Gm, &params, &bad),
            Err(Error::OutsideModel(_))
        ));
    }

    #[test]
    fn nodal_points_lie_on_the_cubic() {
        for l in [q(2, 1), q(-3, 5), q(7, 2), q(1, 9)] {
            let [x, y, z] = nodal_cubic_point(&l).unwrap();
            // y^2 z = x^2 (x + z)
            assert_eq!(&y * &y * &z, &x * &x * (&x + &z));
        }
    }

    #[test]
    fn collinearity_iff_product_one() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        for _ in 0..200 {
            let a = q(rng.gen_range(2..60), rng.gen_range(1..30));
            let b = q(rng.gen_range(2..60), rng.gen_range(1..30));
            let c = Q::one() / (&a * &b);
            if a.is_one() || b.is_one() || c.is_one() || a == b || b == c || a == c {
                continue;
            }
            let pa = nodal_cubic_point(&a).unwrap();
            let pb = nodal_cubic_point(&b).unwrap();
            let pc = nodal_cubic_point(&c).unwrap();
            assert!(collinear_det(&pa, &pb, &pc).is_zero());

            let c2 = &c * qi(2);
            if !c2.is_one() && c2 != a && c2 != b {
                let pc2 = nodal_cubic_point(&c2).unwrap();
                assert!(!collinear_det(&pa, &pb, &pc2).is_zero());
            }
        }
    }

    #[test]
    fn cuspidal_collinearity_iff_sum_zero() {
        let a = q(3, 2);
        let b = q(-1, 3);
        let c = -(&a + &b);
        let det = collinear_det(
            &cuspidal_cubic_point(&a),
            &cuspidal_cubic_point(&b),
            &cuspidal_cubic_point(&c),
        );
        assert!(det.is_zero());
        let det = collinear_det(
            &cuspidal_cubic_point(&a),
            &cuspidal_cubic_point(&b),
            &cuspidal_cubic_point(&(&c + qi(1))),
        );
        assert!(!det.is_zero());
    }

    #[test]
    fn torsion_matches_brute_force() {
        for g in [qi(1), qi(-1), qi(2), q(3, 2), q(-5, 7)] {
            let brute = torsion_order_upto(CubicGroupModel::Gm, &g, 24).is_some();
            assert_eq!(brute, is_torsion(CubicGroupModel::Gm, &g));
        }
        for g in [qi(0), qi(3), q(-1, 2)] {
            let brute = torsion_order_upto(CubicGroupModel::Ga, &g, 24).is_some();
            assert_eq!(brute, is_torsion(CubicGroupModel::Ga, &g));
        }
    }

    #[test]
    fn verdict_invariant_under_permutation() {
        let config = PointConfiguration::general(9);
        let params: Vec<Q> = (1..=8).map(|i| q(1, i)).chain([qi(2)]).collect();
        let mut perm = params.clone();
        perm.rotate_left(4);
        perm.swap(0, 7);
        assert_eq!(
            almost_general_9(CubicGroupModel::Gm, &params, &config).unwrap(),
            almost_general_9(CubicGroupModel::Gm, &perm, &config).unwrap()
        );
    }
}
