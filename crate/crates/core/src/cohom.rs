//! Exact cohomology of line-bundle classes on the supported surfaces.
//!
//! Blowups of the plane with -K big and nef go through negative-curve
//! reduction: h^2 by Serre duality, h^0 by repeatedly subtracting negative
//! irreducible inventory curves until the class is nef (where Riemann-Roch
//! and Kawamata-Viehweg vanishing give h^0 = chi), h^1 from the Euler
//! characteristic. Hirzebruch surfaces and P1 x P1 use the pushforward
//! closed form. Nine-point blowups expose only multiples of K, certified by
//! the group-law verdict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memo::CohomCache;
use crate::picard::{DivClass, SurfaceKind, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub chi: i64,
}

impl CohomologyVector {
    pub fn new(h0: u64, h1: u64, h2: u64) -> Self {
        CohomologyVector {
            h0,
            h1,
            h2,
            chi: h0 as i64 - h1 as i64 + h2 as i64,
        }
    }
}

/// Riemann-Roch Euler characteristic 1 + D.(D-K)/2.
pub fn euler_char(s: &SurfaceModel, d: &DivClass) -> i64 {
    let dd = s.pair(d, d);
    let dk = s.pair(d, &s.canonical);
    debug_assert!((dd - dk) % 2 == 0, "K is characteristic on a unimodular lattice");
    1 + (dd - dk) / 2
}

const REDUCTION_CAP: usize = 10_000;

pub fn cohomology(s: &SurfaceModel, d: &DivClass) -> Result<CohomologyVector> {
    match &s.kind {
        SurfaceKind::P1xP1 => Ok(ruled_closed_form(0, d.0[0], d.0[1])),
        SurfaceKind::Hirzebruch(t) => Ok(ruled_closed_form(*t as i64, d.0[0], d.0[1])),
        SurfaceKind::ProjectivePlane => ncr(s, d),
        SurfaceKind::BlowupP2(_) => {
            let minus_k = s.canonical.neg();
            if s.is_big_nef(&minus_k.to_q()) {
                ncr(s, d)
            } else if s.pair(&s.canonical, &s.canonical) == 0 {
                nine_point_multiples(s, d)
            } else {
                Err(Error::OutsideValidityDomain(
                    "surface is not almost Fano and has no closed form".into(),
                ))
            }
        }
    }
}

pub fn cohomology_cached(
    s: &SurfaceModel,
    d: &DivClass,
    cache: Option<&CohomCache>,
) -> Result<CohomologyVector> {
    match cache {
        Some(c) => c.get_or_compute((s.fingerprint(), d.0.clone()), || cohomology(s, d)),
        None => cohomology(s, d),
    }
}

/// Pushforward sum for a ruled surface with section self-intersection -t.
/// A class aC + bF pushes to the sum of O(b - j t), j = 0..a, once a >= -1;
/// otherwise Serre duality reduces to that chart.
fn ruled_closed_form(t: i64, a: i64, b: i64) -> CohomologyVector {
    if a >= -1 {
        let mut h0 = 0i64;
        let mut h1 = 0i64;
        for j in 0..=a.max(-1) {
            let deg = b - j * t;
            h0 += (deg + 1).max(0);
            h1 += (-deg - 1).max(0);
        }
        CohomologyVector::new(h0 as u64, h1 as u64, 0)
    } else {
        // K = -2C - (t+2)F
        let (ka, kb) = (-2 - a, -(t + 2) - b);
        let dual = ruled_closed_form(t, ka, kb);
        CohomologyVector::new(dual.h2, dual.h1, dual.h0)
    }
}

/// Negative-curve reduction on an almost Fano inventory.
fn ncr(s: &SurfaceModel, d: &DivClass) -> Result<CohomologyVector> {
    let h0 = h0_reduction(s, d.clone())?;
    let kd = s.canonical.sub(d);
    let h2 = h0_reduction(s, kd)?;
    let chi = euler_char(s, d);
    let h1 = h0 as i64 + h2 as i64 - chi;
    assert!(h1 >= 0, "negative h1 from reduction; inventory incomplete");
    Ok(CohomologyVector::new(h0, h1 as u64, h2))
}

fn h0_reduction(s: &SurfaceModel, mut d: DivClass) -> Result<u64> {
    for _ in 0..REDUCTION_CAP {
        if s.pair(&d, &s.ample_ref) < 0 {
            return Ok(0);
        }
        let neg = s
            .curves
            .iter()
            .find(|c| c.irreducible && c.self_int < 0 && s.pair(&d, &c.cls) < 0);
        match neg {
            Some(c) => d = d.sub(&c.cls),
            None => {
                // an effective class cannot pair negatively with an
                // irreducible curve of non-negative self-intersection
                if s
                    .curves
                    .iter()
                    .any(|c| c.irreducible && c.self_int >= 0 && s.pair(&d, &c.cls) < 0)
                {
                    return Ok(0);
                }
                if !s.is_nef(&d.to_q()) {
                    return Err(Error::OutsideValidityDomain(
                        "class pairs negatively only with reducible inventory curves".into(),
                    ));
                }
                // D nef on an almost Fano surface: D - K is big and nef, so
                // h^1 = h^2 = 0 and h^0 = chi.
                let chi = euler_char(s, &d);
                assert!(chi >= 0, "negative chi for a nef class");
                return Ok(chi as u64);
            }
        }
    }
    Err(Error::NonTermination)
}

/// K^2 = 0 nine-point regime: only r K is exposed, certified almost general.
fn nine_point_multiples(s: &SurfaceModel, d: &DivClass) -> Result<CohomologyVector> {
    let k = &s.canonical;
    let r = multiple_of(d, k).ok_or_else(|| {
        Error::OutsideValidityDomain(
            "nine-point models expose only multiples of the canonical class".into(),
        )
    })?;
    match s.nine_point_almost_general {
        Some(true) => {}
        Some(false) => {
            return Err(Error::OutsideValidityDomain(
                "nine points are not in almost general position; h^1 is arithmetic".into(),
            ))
        }
        None => {
            return Err(Error::OutsideValidityDomain(
                "nine-point model lacks an anticanonical group-law certificate".into(),
            ))
        }
    }
    // H^1(-rK) = 0 for all r >= 0; K is never effective.
    if r <= 0 {
        Ok(CohomologyVector::new(1, 0, 0))
    } else {
        Ok(CohomologyVector::new(0, 0, 1))
    }
}

fn multiple_of(d: &DivClass, k: &DivClass) -> Option<i64> {
    if d.is_zero() {
        return Some(0);
    }
    let (i, &ki) = k.0.iter().enumerate().find(|(_, &v)| v != 0)?;
    if d.0[i] % ki != 0 {
        return None;
    }
    let r = d.0[i] / ki;
    if d == &k.scale(r) {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{build_surface, PointConfiguration, SurfaceKind};

    fn blowup(c: PointConfiguration) -> SurfaceModel {
        build_surface(SurfaceKind::BlowupP2(c)).unwrap()
    }

    #[test]
    fn euler_char_examples() {
        let p2 = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        assert_eq!(euler_char(&p2, &DivClass(vec![0])), 1);
        assert_eq!(euler_char(&p2, &DivClass(vec![2])), 6);
        let dp = blowup(PointConfiguration::general(6));
        assert_eq!(euler_char(&dp, &dp.canonical.neg()), 4);
    }

    #[test]
    fn plane_cohomology() {
        let p2 = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        for d in -6..=6 {
            let v = cohomology(&p2, &DivClass(vec![d])).unwrap();
            let expect_h0 = if d >= 0 { ((d + 1) * (d + 2) / 2) as u64 } else { 0 };
            let expect_h2 = if d <= -3 {
                (((-d - 2) * (-d - 1)) / 2) as u64
            } else {
                0
            };
            assert_eq!(v.h0, expect_h0);
            assert_eq!(v.h1, 0);
            assert_eq!(v.h2, expect_h2);
        }
    }

    #[test]
    fn hirzebruch_closed_form() {
        let f2 = build_surface(SurfaceKind::Hirzebruch(2)).unwrap();
        // 2C + 4F: pushforward degrees 4, 2, 0.
        let v = cohomology(&f2, &DivClass(vec![2, 4])).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (9, 0, 0));
        assert_eq!(euler_char(&f2, &DivClass(vec![2, 4])), 9);
        // K
        let v = cohomology(&f2, &f2.canonical).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (0, 0, 1));
    }

    #[test]
    fn canonical_class_duality() {
        let models = [
            build_surface(SurfaceKind::ProjectivePlane).unwrap(),
            build_surface(SurfaceKind::P1xP1).unwrap(),
            blowup(PointConfiguration::general(6)),
        ];
        for s in &models {
            let v = cohomology(s, &s.canonical).unwrap();
            assert_eq!((v.h0, v.h1, v.h2), (0, 0, 1), "K on {:?}", s.kind);
        }
    }

    #[test]
    fn six_point_examples() {
        let dp = blowup(PointConfiguration::general(6));
        // 2H - E_1..6 has no sections: no conic through six general points.
        let d = DivClass(vec![2, -1, -1, -1, -1, -1, -1]);
        let v = cohomology(&dp, &d).unwrap();
        assert_eq!((v.h0, v.h1, v.h2, v.chi), (0, 0, 0, 0));
        // -K
        let v = cohomology(&dp, &dp.canonical.neg()).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (4, 0, 0));
    }

    #[test]
    fn nine_point_gate() {
        let mut s = blowup(PointConfiguration::general(9));
        let mk = s.canonical.neg();
        assert!(matches!(
            cohomology(&s, &mk),
            Err(Error::OutsideValidityDomain(_))
        ));
        s.set_nine_point_verdict(true);
        let v = cohomology(&s, &mk.scale(3)).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (1, 0, 0));
        let v = cohomology(&s, &s.canonical.scale(2)).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (0, 0, 1));
        // non-multiples stay outside the domain
        let mut h = vec![1i64];
        h.extend([0; 9]);
        assert!(cohomology(&s, &DivClass(h)).is_err());
    }

    #[test]
    fn cache_is_transparent() {
        let dp = blowup(PointConfiguration::general(6));
        let cache = CohomCache::new();
        for d in [-2i64, 0, 1, 3] {
            let mut v = vec![d];
            v.extend([-1, 0, 1, -1, 0, 1]);
            let cls = DivClass(v);
            let plain = cohomology(&dp, &cls).unwrap();
            let cached = cohomology_cached(&dp, &cls, Some(&cache)).unwrap();
            let again = cohomology_cached(&dp, &cls, Some(&cache)).unwrap();
            assert_eq!(plain, cached);
            assert_eq!(plain, again);
        }
        assert_eq!(cache.len(), 4);
    }
}
