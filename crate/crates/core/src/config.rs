//! Input file schemas: surfaces, bundles, generation scripts, nine-point
//! data and covers. Inputs are TOML with exact integers and rationals as
//! "p/q" strings.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::anticanon::CubicGroupModel;
use crate::cox::{builtin_cox, CoxRing, Generator, Poly, Reduction};
use crate::error::{Error, Result};
use crate::genscript::{GenerationScript, Move};
use crate::picard::{build_surface, DivClass, PointConfiguration, SurfaceKind, SurfaceModel};
use crate::presented::{builtin_omega, builtin_xi, PresentedBundle};
use crate::quiver::ArrowNames;
use crate::rat::{parse_q, Q};
use crate::skewgroup::{
    CoverModel, FiniteAbelianGroup, GenAction, Ramification, SingularPoint,
};
use crate::tilting::{Summand, TiltingCandidate};
use crate::wps::{LClass, WeightedSurface};

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub kind: String,
    #[serde(default)]
    pub s: Option<u32>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub collinear: Vec<Vec<usize>>,
    #[serde(default)]
    pub conics: Vec<Vec<usize>>,
    #[serde(default)]
    pub general_on_cubic: Option<bool>,
    #[serde(default)]
    pub weights: Vec<WeightEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub class: Vec<i64>,
    pub weight: u32,
}

impl SurfaceConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("surface config: {e}")))
    }

    pub fn build_base(&self) -> Result<SurfaceModel> {
        let kind = match self.kind.as_str() {
            "p2" => SurfaceKind::ProjectivePlane,
            "p1xp1" => SurfaceKind::P1xP1,
            "hirzebruch" => {
                let s = self.s.ok_or(Error::Input("hirzebruch needs s".into()))?;
                SurfaceKind::Hirzebruch(s)
            }
            "blowup-p2" => {
                let count = self
                    .points
                    .ok_or(Error::Input("blowup-p2 needs points".into()))?;
                let mut config = PointConfiguration::general(count);
                config.collinear_triples = self
                    .collinear
                    .iter()
                    .map(|t| t.iter().copied().collect::<BTreeSet<_>>())
                    .collect();
                config.conic_sextuples = self
                    .conics
                    .iter()
                    .map(|t| t.iter().copied().collect::<BTreeSet<_>>())
                    .collect();
                config.points_general_on_cubic = self.general_on_cubic.unwrap_or(true);
                SurfaceKind::BlowupP2(config)
            }
            other => return bad(format!("unknown surface kind {other:?}")),
        };
        build_surface(kind)
    }

    pub fn build(&self) -> Result<WeightedSurface> {
        let base = self.build_base()?;
        let weights: Vec<(DivClass, u32)> = self
            .weights
            .iter()
            .map(|w| (DivClass(w.class.clone()), w.weight))
            .collect();
        WeightedSurface::new(base, weights)
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct LClassConfig {
    pub pic: Vec<i64>,
    #[serde(default)]
    pub frac: Vec<i64>,
}

impl LClassConfig {
    pub fn build(&self, w: &WeightedSurface) -> Result<LClass> {
        if self.pic.len() != w.base.rank() {
            return bad("class has the wrong Picard rank");
        }
        let mut frac = self.frac.clone();
        if frac.len() > w.r() {
            return bad("class has too many fractional exponents");
        }
        frac.resize(w.r(), 0);
        Ok(w.normalize(DivClass(self.pic.clone()), frac))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleConfig {
    #[serde(default)]
    pub summand: Vec<SummandConfig>,
    #[serde(default)]
    pub arrow_names: Vec<ArrowNameConfig>,
    #[serde(default)]
    pub ring: Option<RingConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandConfig {
    #[serde(default)]
    pub pic: Option<Vec<i64>>,
    #[serde(default)]
    pub frac: Vec<i64>,
    #[serde(default)]
    pub presented: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowNameConfig {
    pub from: usize,
    pub to: usize,
    pub element: String,
    pub name: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub generator: Vec<RingGeneratorConfig>,
    #[serde(default)]
    pub relation: Vec<RelationConfig>,
    #[serde(default)]
    pub reduction: Option<String>,
    #[serde(default)]
    pub distinguished: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingGeneratorConfig {
    pub name: String,
    pub degree: LClassConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationConfig {
    pub terms: Vec<TermConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

impl RingConfig {
    pub fn build(&self, w: &WeightedSurface) -> Result<CoxRing> {
        let generators: Vec<Generator> = self
            .generator
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    degree: g.degree.build(w)?,
                })
            })
            .collect::<Result<_>>()?;
        let relations: Vec<Poly> = self
            .relation
            .iter()
            .map(|r| {
                let terms: Vec<(Q, Vec<u32>)> = r
                    .terms
                    .iter()
                    .map(|t| Ok((parse_q(&t.coeff)?, t.exponents.clone())))
                    .collect::<Result<_>>()?;
                Ok(Poly::from_terms(terms))
            })
            .collect::<Result<_>>()?;
        let reduction = match self.reduction.as_deref() {
            None | Some("free") => Reduction::Free,
            Some("linear-algebra") => Reduction::LinearAlgebra,
            Some("hypersurface") => {
                let dist = self
                    .distinguished
                    .clone()
                    .ok_or(Error::Input("hypersurface needs distinguished".into()))?;
                let rel = relations
                    .first()
                    .ok_or(Error::Input("hypersurface needs a relation".into()))?;
                // replacement = distinguished - relation
                let dist_poly = Poly::monomial(dist.clone());
                let replacement = dist_poly.sub(rel);
                Reduction::Hypersurface {
                    distinguished: dist,
                    replacement,
                }
            }
            Some(other) => return bad(format!("unknown reduction {other:?}")),
        };
        CoxRing::new(w.clone(), generators, relations, reduction)
    }
}

/// Resolved bundle input: candidate plus Cox ring and presented table when
/// needed.
pub struct ResolvedBundle {
    pub candidate: TiltingCandidate,
    pub ring: Option<CoxRing>,
    pub presented: BTreeMap<String, PresentedBundle>,
    pub arrow_names: ArrowNames,
}

impl BundleConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("bundle file: {e}")))
    }

    pub fn resolve(&self, w: &WeightedSurface) -> Result<ResolvedBundle> {
        let mut summands = Vec::new();
        let mut needs_ring = false;
        for s in &self.summand {
            match (&s.pic, &s.presented) {
                (Some(pic), None) => {
                    let cls = LClassConfig {
                        pic: pic.clone(),
                        frac: s.frac.clone(),
                    }
                    .build(w)?;
                    summands.push(Summand::Line(cls));
                }
                (None, Some(name)) => {
                    needs_ring = true;
                    summands.push(Summand::Presented(name.clone()));
                }
                _ => return bad("summand needs either pic or presented"),
            }
        }
        let ring = if needs_ring || self.ring.is_some() || !self.arrow_names.is_empty() {
            Some(match &self.ring {
                Some(rc) => rc.build(w)?,
                None => builtin_cox(w)?,
            })
        } else {
            None
        };
        let mut presented = BTreeMap::new();
        if let Some(ring) = &ring {
            for s in &summands {
                if let Summand::Presented(name) = s {
                    let b = match name.as_str() {
                        "omega" => builtin_omega(ring),
                        "xi" => builtin_xi(ring),
                        other => {
                            return bad(format!("unknown presented bundle {other:?}"))
                        }
                    };
                    presented.insert(name.clone(), b);
                }
            }
        }
        let mut arrow_names = ArrowNames::new();
        for a in &self.arrow_names {
            arrow_names.insert((a.from, a.to, a.element.clone()), a.name.clone());
        }
        Ok(ResolvedBundle {
            candidate: TiltingCandidate { summands },
            ring,
            presented,
            arrow_names,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptConfig {
    #[serde(default, rename = "move")]
    pub moves: Vec<MoveConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveConfig {
    pub op: String,
    #[serde(default)]
    pub strata: Option<Vec<usize>>,
    #[serde(default)]
    pub twist: Option<LClassConfig>,
    #[serde(default)]
    pub target: Option<LClassConfig>,
    #[serde(default)]
    pub index: Option<usize>,
    #[serde(default)]
    pub source: Option<LClassConfig>,
    #[serde(default)]
    pub curve: Option<Vec<i64>>,
    #[serde(default)]
    pub from: Option<LClassConfig>,
    #[serde(default)]
    pub to: Option<LClassConfig>,
    #[serde(default)]
    pub of: Option<usize>,
    #[serde(default)]
    pub name: Option<String>,
}

impl ScriptConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("script file: {e}")))
    }

    pub fn build(&self, w: &WeightedSurface) -> Result<GenerationScript> {
        let mut moves = Vec::new();
        for m in &self.moves {
            let mv = match m.op.as_str() {
                "koszul" => Move::Koszul {
                    strata: m
                        .strata
                        .clone()
                        .ok_or(Error::MalformedScript("koszul needs strata".into()))?,
                    twist: m
                        .twist
                        .as_ref()
                        .ok_or(Error::MalformedScript("koszul needs twist".into()))?
                        .build(w)?,
                },
                "unit-twist-cokernel" => Move::UnitTwistCokernel {
                    target: m
                        .target
                        .as_ref()
                        .ok_or(Error::MalformedScript("needs target".into()))?
                        .build(w)?,
                    index: m
                        .index
                        .ok_or(Error::MalformedScript("needs index".into()))?,
                },
                "restriction-kernel" => Move::RestrictionKernel {
                    source: m
                        .source
                        .as_ref()
                        .ok_or(Error::MalformedScript("needs source".into()))?
                        .build(w)?,
                    curve: DivClass(
                        m.curve
                            .clone()
                            .ok_or(Error::MalformedScript("needs curve".into()))?,
                    ),
                },
                "cone" => Move::Cone {
                    from: m
                        .from
                        .as_ref()
                        .ok_or(Error::MalformedScript("needs from".into()))?
                        .build(w)?,
                    to: m
                        .to
                        .as_ref()
                        .ok_or(Error::MalformedScript("needs to".into()))?
                        .build(w)?,
                },
                "summand" => Move::Summand {
                    of: m.of.ok_or(Error::MalformedScript("needs of".into()))?,
                },
                "shift" => Move::Shift {
                    of: m.of.ok_or(Error::MalformedScript("needs of".into()))?,
                },
                "close-presentation" => Move::ClosePresentation {
                    name: m
                        .name
                        .clone()
                        .ok_or(Error::MalformedScript("needs name".into()))?,
                },
                other => {
                    return Err(Error::MalformedScript(format!("unknown op {other:?}")))
                }
            };
            moves.push(mv);
        }
        Ok(GenerationScript { moves })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NinePointConfig {
    pub model: String,
    pub params: Vec<String>,
    #[serde(default)]
    pub collinear: Vec<Vec<usize>>,
    #[serde(default)]
    pub conics: Vec<Vec<usize>>,
}

impl NinePointConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("nine-point file: {e}")))
    }

    pub fn model(&self) -> Result<CubicGroupModel> {
        match self.model.as_str() {
            "gm" => Ok(CubicGroupModel::Gm),
            "ga" => Ok(CubicGroupModel::Ga),
            other => bad(format!("unknown cubic model {other:?}")),
        }
    }

    pub fn params(&self) -> Result<Vec<Q>> {
        self.params.iter().map(|s| parse_q(s)).collect()
    }

    pub fn point_config(&self) -> PointConfiguration {
        let mut c = PointConfiguration::general(9);
        c.collinear_triples = self
            .collinear
            .iter()
            .map(|t| t.iter().copied().collect())
            .collect();
        c.conic_sextuples = self
            .conics
            .iter()
            .map(|t| t.iter().copied().collect())
            .collect();
        c
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub p: Option<u32>,
    #[serde(default)]
    pub i: Option<usize>,
    #[serde(default)]
    pub group: Option<GroupConfig>,
    #[serde(default)]
    pub upstairs: Option<SurfaceConfig>,
    #[serde(default)]
    pub pic_action: Vec<MatrixConfig>,
    #[serde(default)]
    pub cox_action: Vec<CoxActionConfig>,
    #[serde(default)]
    pub ramification: Vec<RamificationConfig>,
    #[serde(default)]
    pub singular_point: Vec<SingularPointConfig>,
    #[serde(default)]
    pub assert_equivariant: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub orders: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxActionConfig {
    pub perm: Vec<usize>,
    pub scalars: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamificationConfig {
    pub downstairs_class: Vec<i64>,
    pub index: u32,
    pub upstairs_class: Vec<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPointConfig {
    pub label: String,
    pub stabilizer: Vec<Vec<u32>>,
    pub chars: Vec<Vec<u32>>,
}

impl CoverConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("cover file: {e}")))
    }

    pub fn build(&self) -> Result<CoverModel> {
        if let Some(name) = &self.builtin {
            return match name.as_str() {
                "p1xp1-swap" => crate::skewcovers::swap_cover(),
                "p1xp1-swap-blown" => crate::skewcovers::swap_cover_blown(),
                "polygon" => {
                    let p = self.p.ok_or(Error::Input("polygon needs p".into()))?;
                    let i = self.i.ok_or(Error::Input("polygon needs i".into()))?;
                    crate::skewcovers::polygon_cover(p, i)
                }
                other => bad(format!("unknown builtin cover {other:?}")),
            };
        }
        let group = FiniteAbelianGroup::new(
            self.group
                .as_ref()
                .ok_or(Error::MissingData("cover needs a group".into()))?
                .orders
                .clone(),
        )?;
        let upstairs = self
            .upstairs
            .as_ref()
            .ok_or(Error::MissingData("cover needs an upstairs surface".into()))?
            .build_base()?;
        let ring = builtin_cox(&WeightedSurface::unweighted(upstairs.clone()))?;
        let cover = CoverModel {
            group,
            upstairs,
            ring,
            pic_action: self.pic_action.iter().map(|m| m.matrix.clone()).collect(),
            cox_action: self
                .cox_action
                .iter()
                .map(|a| GenAction {
                    perm: a.perm.clone(),
                    scalars: a.scalars.clone(),
                })
                .collect(),
            ramification: self
                .ramification
                .iter()
                .map(|r| Ramification {
                    downstairs_class: DivClass(r.downstairs_class.clone()),
                    index: r.index,
                    upstairs_class: DivClass(r.upstairs_class.clone()),
                })
                .collect(),
            singular_points: self
                .singular_point
                .iter()
                .map(|s| SingularPoint {
                    label: s.label.clone(),
                    stabilizer_gens: s.stabilizer.clone(),
                    chars: s.chars.clone(),
                })
                .collect(),
            assert_equivariant: self.assert_equivariant,
        };
        cover.validate()?;
        Ok(cover)
    }
}
