//! Weighted projective surfaces: the divisor class group, the line-bundle
//! Hom/Ext calculus of the associated order, and Fano-type classification.
//!
//! A class is a Picard part plus one fractional exponent per weighted
//! divisor, kept in normal form 0 <= l_i < p_i; adding p_i to an exponent is
//! the same as adding the divisor's Picard class. Ext groups between line
//! bundles are the cohomology of the Picard part of the difference class.

use serde::{Deserialize, Serialize};

use crate::cohom::{cohomology_cached, CohomologyVector};
use crate::error::{Error, Result};
use crate::memo::CohomCache;
use crate::picard::{DivClass, QDivClass, SurfaceModel};
use crate::rat::{q, show_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedDivisor {
    pub class: DivClass,
    pub weight: u32,
    /// Rationality of the weighted curve (genus 0). Derived from the genus
    /// formula at construction; quiver and search features require it.
    pub rational: bool,
    pub snc_assumed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSurface {
    pub base: SurfaceModel,
    pub weighted: Vec<WeightedDivisor>,
}

/// Element of the divisor class group: integral Picard part plus normalized
/// fractional exponents, one per weighted divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LClass {
    pub pic: DivClass,
    pub frac: Vec<u32>,
}

impl LClass {
    pub fn integral(pic: DivClass, r: usize) -> Self {
        LClass {
            pic,
            frac: vec![0; r],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FanoClass {
    Fano,
    AlmostFano,
    NefNotBig,
    NotNef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositivityWitness {
    /// Curve with non-positive (ample test) or negative (nef test) pairing.
    Curve { class: DivClass, pairing: String },
    /// Self-intersection of -(K+Delta).
    Square { value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: FanoClass,
    pub witness: PositivityWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SanityWarning {
    /// A weighted smooth rational divisor with D^2 = -s <= -3 where the
    /// bound 2p < s fails.
    WeightBoundFails { index: usize, weight: u32, s: i64 },
    /// -K_X pairs negatively with an unweighted inventory curve.
    CanonicalNotNef { curve: DivClass, pairing: i64 },
}

impl WeightedSurface {
    pub fn new(base: SurfaceModel, weighted: Vec<(DivClass, u32)>) -> Result<Self> {
        let mut ws = Vec::with_capacity(weighted.len());
        for (class, weight) in weighted {
            if weight < 2 {
                return Err(Error::UnsupportedConfiguration(
                    "weights must be at least 2".into(),
                ));
            }
            if class.rank() != base.rank() {
                return Err(Error::UnsupportedConfiguration(
                    "weighted divisor class has the wrong rank".into(),
                ));
            }
            let self_int = base.pair(&class, &class);
            let genus = 1 + (self_int + base.pair(&class, &base.canonical)) / 2;
            ws.push(WeightedDivisor {
                class,
                weight,
                rational: genus == 0,
                snc_assumed: true,
            });
        }
        Ok(WeightedSurface { base, weighted: ws })
    }

    pub fn unweighted(base: SurfaceModel) -> Self {
        WeightedSurface {
            base,
            weighted: Vec::new(),
        }
    }

    pub fn r(&self) -> usize {
        self.weighted.len()
    }

    pub fn period(&self) -> u32 {
        self.weighted
            .iter()
            .fold(1u32, |acc, w| num::integer::lcm(acc, w.weight))
    }

    pub fn zero(&self) -> LClass {
        LClass::integral(DivClass::zero(self.base.rank()), self.r())
    }

    /// Normal form: exponents reduced into [0, p_i) with carries into the
    /// Picard part. Idempotent.
    pub fn normalize(&self, pic: DivClass, frac: Vec<i64>) -> LClass {
        assert_eq!(frac.len(), self.r());
        let mut out_pic = pic;
        let mut out_frac = Vec::with_capacity(frac.len());
        for (i, &l) in frac.iter().enumerate() {
            let p = self.weighted[i].weight as i64;
            let carry = l.div_euclid(p);
            let rem = l.rem_euclid(p);
            if carry != 0 {
                out_pic = out_pic.add(&self.weighted[i].class.scale(carry));
            }
            out_frac.push(rem as u32);
        }
        LClass {
            pic: out_pic,
            frac: out_frac,
        }
    }

    pub fn add(&self, a: &LClass, b: &LClass) -> LClass {
        self.normalize(
            a.pic.add(&b.pic),
            a.frac
                .iter()
                .zip(&b.frac)
                .map(|(&x, &y)| x as i64 + y as i64)
                .collect(),
        )
    }

    pub fn sub(&self, a: &LClass, b: &LClass) -> LClass {
        self.normalize(
            a.pic.sub(&b.pic),
            a.frac
                .iter()
                .zip(&b.frac)
                .map(|(&x, &y)| x as i64 - y as i64)
                .collect(),
        )
    }

    pub fn neg(&self, a: &LClass) -> LClass {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &LClass, k: i64) -> LClass {
        self.normalize(
            a.pic.scale(k),
            a.frac.iter().map(|&x| x as i64 * k).collect(),
        )
    }

    /// The canonical class of the order: K_X + sum (p_i - 1)/p_i D_i.
    pub fn k_a(&self) -> LClass {
        LClass {
            pic: self.base.canonical.clone(),
            frac: self.weighted.iter().map(|w| w.weight - 1).collect(),
        }
    }

    /// Delta = sum (1 - 1/p_i) D_i as a Q-class.
    pub fn delta(&self) -> QDivClass {
        let mut d = QDivClass::zero(self.base.rank());
        for w in &self.weighted {
            let coef = q(w.weight as i64 - 1, w.weight as i64);
            d = d.add(&w.class.to_q().scale(&coef));
        }
        d
    }

    pub fn k_plus_delta(&self) -> QDivClass {
        self.base.canonical.to_q().add(&self.delta())
    }

    /// Q-divisor underlying an L-class.
    pub fn lclass_to_q(&self, a: &LClass) -> QDivClass {
        let mut d = a.pic.to_q();
        for (i, &l) in a.frac.iter().enumerate() {
            if l != 0 {
                let coef = q(l as i64, self.weighted[i].weight as i64);
                d = d.add(&self.weighted[i].class.to_q().scale(&coef));
            }
        }
        d
    }

    pub fn ample_degree(&self, a: &LClass) -> Q {
        self.base
            .pair_q(&self.lclass_to_q(a), &self.base.ample_ref.to_q())
    }

    /// Picard part of beta - alpha: the class of the sheaf Hom, whose
    /// cohomology computes the Ext groups.
    pub fn hom_sheaf(&self, alpha: &LClass, beta: &LClass) -> DivClass {
        self.sub(beta, alpha).pic
    }

    pub fn ext_dims(&self, alpha: &LClass, beta: &LClass) -> Result<CohomologyVector> {
        self.ext_dims_cached(alpha, beta, None)
    }

    pub fn ext_dims_cached(
        &self,
        alpha: &LClass,
        beta: &LClass,
        cache: Option<&CohomCache>,
    ) -> Result<CohomologyVector> {
        let h = self.hom_sheaf(alpha, beta);
        cohomology_cached(&self.base, &h, cache)
    }

    pub fn classify(&self) -> Classification {
        let mkd = self.k_plus_delta().neg();
        let base = &self.base;
        if base.is_ample(&mkd) {
            return Classification {
                verdict: FanoClass::Fano,
                witness: PositivityWitness::Square {
                    value: show_q(&base.selfint_q(&mkd)),
                },
            };
        }
        if base.is_big_nef(&mkd) {
            let w = base
                .negative_witness(&mkd, true)
                .map(|c| PositivityWitness::Curve {
                    class: c.cls.clone(),
                    pairing: show_q(&base.pair_q(&mkd, &c.cls.to_q())),
                })
                .unwrap_or(PositivityWitness::Square {
                    value: show_q(&base.selfint_q(&mkd)),
                });
            return Classification {
                verdict: FanoClass::AlmostFano,
                witness: w,
            };
        }
        if base.is_nef(&mkd) {
            return Classification {
                verdict: FanoClass::NefNotBig,
                witness: PositivityWitness::Square {
                    value: show_q(&base.selfint_q(&mkd)),
                },
            };
        }
        let w = base
            .negative_witness(&mkd, false)
            .map(|c| PositivityWitness::Curve {
                class: c.cls.clone(),
                pairing: show_q(&base.pair_q(&mkd, &c.cls.to_q())),
            })
            .unwrap_or(PositivityWitness::Square {
                value: show_q(&base.selfint_q(&mkd)),
            });
        Classification {
            verdict: FanoClass::NotNef,
            witness: w,
        }
    }

    /// Negative Kodaira dimension test: a positivity certificate when
    /// -(K+Delta) is big and nef, otherwise a section search over
    /// anticanonical-period multiples up to the cap.
    pub fn kodaira_negative(&self) -> Result<bool> {
        if self.base.is_big_nef(&self.k_plus_delta().neg()) {
            return Ok(true);
        }
        let p = self.period() as i64;
        let ka = self.k_a();
        for mult in 1..=12 {
            let r = mult * p;
            let cls = self.scale(&ka, r);
            debug_assert!(cls.frac.iter().all(|&l| l == 0));
            let v = cohomology_cached(&self.base, &cls.pic, None)?;
            if v.h0 > 0 {
                return Ok(false);
            }
        }
        Err(Error::Inconclusive(
            "no section up to 12 periods and no positivity certificate".into(),
        ))
    }

    pub fn weight_sanity(&self) -> Vec<SanityWarning> {
        let mut out = Vec::new();
        for (i, w) in self.weighted.iter().enumerate() {
            let self_int = self.base.pair(&w.class, &w.class);
            if w.rational && self_int <= -3 {
                let s = -self_int;
                if 2 * w.weight as i64 >= s {
                    out.push(SanityWarning::WeightBoundFails {
                        index: i,
                        weight: w.weight,
                        s,
                    });
                }
            }
        }
        let mk = self.base.canonical.neg();
        for c in &self.base.curves {
            if self.weighted.iter().any(|w| w.class == c.cls) {
                continue;
            }
            let p = self.base.pair(&mk, &c.cls);
            if p < 0 {
                out.push(SanityWarning::CanonicalNotNef {
                    curve: c.cls.clone(),
                    pairing: p,
                });
            }
        }
        out
    }
}

/// Display an L-class as its Q-divisor coefficients.
pub fn show_lclass(w: &WeightedSurface, a: &LClass) -> String {
    let qd = w.lclass_to_q(a);
    let coords: Vec<String> = qd.0.iter().map(show_q).collect();
    let frac: Vec<String> = a.frac.iter().map(|l| l.to_string()).collect();
    if a.frac.is_empty() {
        format!("({})", coords.join(","))
    } else {
        format!("({}; l={})", coords.join(","), frac.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{build_surface, PointConfiguration, SurfaceKind};

    fn p1xp1_half_diag(p: u32) -> WeightedSurface {
        let base = build_surface(SurfaceKind::P1xP1).unwrap();
        WeightedSurface::new(base, vec![(DivClass(vec![1, 1]), p)]).unwrap()
    }

    fn p2_four_lines() -> WeightedSurface {
        let base = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        WeightedSurface::new(
            base,
            vec![
                (DivClass(vec![1]), 2),
                (DivClass(vec![1]), 2),
                (DivClass(vec![1]), 2),
                (DivClass(vec![1]), 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn normalize_carries() {
        let w = p1xp1_half_diag(2);
        let a = w.normalize(DivClass(vec![0, 0]), vec![3]);
        assert_eq!(a.pic, DivClass(vec![1, 1]));
        assert_eq!(a.frac, vec![1]);

        let b = w.normalize(DivClass(vec![2, 0]), vec![0]);
        assert_eq!(b.pic, DivClass(vec![2, 0]));

        let w4 = p2_four_lines();
        let c = w4.normalize(DivClass(vec![0]), vec![2, 0, 0, 0]);
        assert_eq!(c.pic, DivClass(vec![1]));
        assert_eq!(c.frac, vec![0, 0, 0, 0]);
    }

    #[test]
    fn normalize_idempotent_and_negative() {
        let w = p2_four_lines();
        let a = w.normalize(DivClass(vec![3]), vec![-1, 5, 0, -3]);
        let b = w.normalize(a.pic.clone(), a.frac.iter().map(|&x| x as i64).collect());
        assert_eq!(a, b);
        assert!(a.frac.iter().all(|&l| l < 2));
    }

    #[test]
    fn canonical_class_of_order() {
        let w4 = p2_four_lines();
        let ka = w4.k_a();
        assert_eq!(ka.pic, DivClass(vec![-3]));
        assert_eq!(ka.frac, vec![1, 1, 1, 1]);
        // -2 K_A ~ 2H
        let m2 = w4.scale(&ka, -2);
        assert_eq!(m2.pic, DivClass(vec![2]));
        assert!(m2.frac.iter().all(|&l| l == 0));

        // unweighted: K_A = K_X
        let f2 = WeightedSurface::unweighted(build_surface(SurfaceKind::Hirzebruch(2)).unwrap());
        assert_eq!(f2.k_a().pic, f2.base.canonical);

        // half-diagonal: -K_A = (3/2, 3/2) as a Q-class
        let w = p1xp1_half_diag(2);
        let mka = w.neg(&w.k_a());
        let qd = w.lclass_to_q(&mka);
        assert_eq!(qd.0, vec![q(3, 2), q(3, 2)]);
    }

    #[test]
    fn hom_sheaf_floors() {
        let w = p1xp1_half_diag(2);
        // O_A -> O_A(3/2, 5/2): floor (1, 2)
        let beta = w.normalize(DivClass(vec![1, 2]), vec![1]);
        assert_eq!(w.hom_sheaf(&w.zero(), &beta), DivClass(vec![1, 2]));
        assert_eq!(w.hom_sheaf(&beta, &beta), DivClass(vec![0, 0]));

        let w4 = p2_four_lines();
        let two_h = LClass::integral(DivClass(vec![2]), 4);
        let mka = w4.neg(&w4.k_a());
        assert_eq!(w4.hom_sheaf(&two_h, &mka), DivClass(vec![-3]));
    }

    #[test]
    fn ext_examples() {
        let w4 = p2_four_lines();
        let two_h = LClass::integral(DivClass(vec![2]), 4);
        let mka = w4.neg(&w4.k_a());
        let v = w4.ext_dims(&two_h, &mka).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (0, 0, 1));
        let v = w4.ext_dims(&two_h, &two_h).unwrap();
        assert_eq!((v.h0, v.h1, v.h2), (1, 0, 0));
    }

    #[test]
    fn classify_examples() {
        // conic-weighted plane is Fano
        let p2 = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        let conic = WeightedSurface::new(p2, vec![(DivClass(vec![2]), 2)]).unwrap();
        assert_eq!(conic.classify().verdict, FanoClass::Fano);

        assert_eq!(p1xp1_half_diag(2).classify().verdict, FanoClass::Fano);

        let f2 = WeightedSurface::unweighted(build_surface(SurfaceKind::Hirzebruch(2)).unwrap());
        assert_eq!(f2.classify().verdict, FanoClass::AlmostFano);

        // nine general points: nef but K^2 = 0
        let nine = WeightedSurface::unweighted(
            build_surface(SurfaceKind::BlowupP2(PointConfiguration::general(9))).unwrap(),
        );
        assert_eq!(nine.classify().verdict, FanoClass::NefNotBig);
    }

    #[test]
    fn kodaira_negative_examples() {
        assert!(p1xp1_half_diag(2).kodaira_negative().unwrap());
        let p2 =
            WeightedSurface::unweighted(build_surface(SurfaceKind::ProjectivePlane).unwrap());
        assert!(p2.kodaira_negative().unwrap());

        // three (1,1)-divisors with weight 4: K_A = (1/4)(1,1), and 4 K_A is
        // effective, so the Kodaira dimension is not negative.
        let base = build_surface(SurfaceKind::P1xP1).unwrap();
        let heavy = WeightedSurface::new(
            base,
            vec![
                (DivClass(vec![1, 1]), 4),
                (DivClass(vec![1, 1]), 4),
                (DivClass(vec![1, 1]), 4),
            ],
        )
        .unwrap();
        assert!(!heavy.kodaira_negative().unwrap());
    }

    #[test]
    fn weight_sanity_examples() {
        let f3 = build_surface(SurfaceKind::Hirzebruch(3)).unwrap();
        let unweighted = WeightedSurface::unweighted(f3.clone());
        let warns = unweighted.weight_sanity();
        assert!(warns.iter().any(|w| matches!(
            w,
            SanityWarning::CanonicalNotNef { pairing: -1, .. }
        )));

        let weighted = WeightedSurface::new(f3, vec![(DivClass(vec![1, 0]), 2)]).unwrap();
        let warns = weighted.weight_sanity();
        assert!(warns
            .iter()
            .any(|w| matches!(w, SanityWarning::WeightBoundFails { weight: 2, s: 3, .. })));
        assert!(!warns
            .iter()
            .any(|w| matches!(w, SanityWarning::CanonicalNotNef { .. })));

        // del Pezzo weighted on a (-1)-curve: nothing to report
        let dp =
            build_surface(SurfaceKind::BlowupP2(PointConfiguration::general(3))).unwrap();
        let mut e1 = vec![0i64; 4];
        e1[1] = 1;
        let w = WeightedSurface::new(dp, vec![(DivClass(e1), 2)]).unwrap();
        assert!(w.weight_sanity().is_empty());
    }

    #[test]
    fn twist_invariance_and_serre_duality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        let w4 = p2_four_lines();
        let w11 = p1xp1_half_diag(3);
        for _ in 0..200 {
            for w in [&w4, &w11] {
                let rank = w.base.rank();
                let rnd = |rng: &mut rand::rngs::StdRng, w: &WeightedSurface| {
                    let pic = DivClass((0..rank).map(|_| rng.gen_range(-3..=3)).collect());
                    let frac = (0..w.r()).map(|_| rng.gen_range(-4..=4)).collect();
                    w.normalize(pic, frac)
                };
                let a = rnd(&mut rng, w);
                let b = rnd(&mut rng, w);
                let g = rnd(&mut rng, w);
                let lhs = w.ext_dims(&a, &b).unwrap();
                let rhs = w
                    .ext_dims(&w.add(&a, &g), &w.add(&b, &g))
                    .unwrap();
                assert_eq!(lhs, rhs, "twist invariance");
                let ser = w.ext_dims(&b, &w.add(&a, &w.k_a())).unwrap();
                assert_eq!(
                    (lhs.h0, lhs.h1, lhs.h2),
                    (ser.h2, ser.h1, ser.h0),
                    "Serre duality"
                );
            }
        }
    }
}
