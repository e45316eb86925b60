//! Batch interface: parse configs, run checks and searches, emit reports.
//!
//! Exit codes: 0 pass, 1 check failure, 2 uncertified or inconclusive,
//! 3 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use glsurf::anticanon::{almost_general_9, nine_point_class, is_torsion, NineVerdict};
use glsurf::config::{
    BundleConfig, CoverConfig, NinePointConfig, ScriptConfig, SurfaceConfig,
};
use glsurf::error::Error;
use glsurf::exec::Workers;
use glsurf::genscript::check_generation_script;
use glsurf::memo::CohomCache;
use glsurf::picard::DivClass;
use glsurf::quiver::{quiver, to_dot};
use glsurf::rat::parse_q;
use glsurf::report::{
    to_json, CheckDoc, ClassifyDoc, CohomDoc, NinePointDoc, RunManifest, SearchDoc, SkewDoc,
};
use glsurf::search::{search, DegreeBox, SearchParams};
use glsurf::tilting::{
    expected_rank, Checker, HereditaryVerdict, PairRoute, PartialVerdict,
};
use glsurf::wps::WeightedSurface;

#[derive(Parser)]
#[command(name = "glsurf", version, about = "tilting bundles on weighted rational surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fano-type classification of a (weighted) surface config.
    Classify {
        #[arg(long)]
        surface: PathBuf,
        /// Nine-point group data for K^2 = 0 blowups.
        #[arg(long)]
        ninepoints: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cohomology of one integral class, optionally cross-checked against
    /// the point-conditions oracle.
    Cohom {
        #[arg(long)]
        surface: PathBuf,
        /// Comma-separated coefficients in the Picard basis.
        #[arg(long)]
        class: String,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Full candidate check: partial tilting, hereditary window, Euler
    /// matrix, optional generation script.
    Check {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        r_cap: i64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Quiver-with-relations extraction.
    Quiver {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        /// Exact rational bound on the ample degree of computed Hom pairs.
        #[arg(long)]
        degree_bound: Option<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        relations: Option<PathBuf>,
    },
    /// Bounded search for quasi-canonical candidates.
    Search {
        #[arg(long)]
        surface: PathBuf,
        /// Picard box as "lo:hi,lo:hi,..." per basis coordinate.
        #[arg(long = "box")]
        degree_box: String,
        #[arg(long)]
        max_summands: Option<usize>,
        /// 1 forces the sequential path; 0 uses the default pool.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Keep candidates that only pass partial tilting.
        #[arg(long)]
        partial_only: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Nine-point almost-general-position verdict via the cubic group law.
    Ninepoints {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Galois-cover induction: condition (*), upstairs checks, induced
    /// basic candidate with its Hom table.
    Skew {
        #[arg(long)]
        cover: PathBuf,
        /// Upstairs bundle file (unweighted line classes).
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Input(_)
        | Error::MalformedScript(_)
        | Error::UnsupportedConfiguration(_)
        | Error::OutOfRange(_)
        | Error::PointAtSingularity
        | Error::DuplicatePoint
        | Error::BoxTooLarge(_, _) => 3,
        Error::NotGStable(_) => 1,
        _ => 2,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(doc_json: String, report: &Option<PathBuf>) -> Result<(), Error> {
    println!("{doc_json}");
    if let Some(path) = report {
        std::fs::write(path, doc_json + "\n")
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Classify {
            surface,
            ninepoints,
            report,
        } => {
            let cfg = SurfaceConfig::parse(&read(&surface)?)?;
            let mut w = cfg.build()?;
            let mut nine_point = None;
            if let Some(np) = &ninepoints {
                let ncfg = NinePointConfig::parse(&read(np)?)?;
                let verdict = almost_general_9(
                    ncfg.model()?,
                    &ncfg.params()?,
                    &ncfg.point_config(),
                )?;
                w.base
                    .set_nine_point_verdict(verdict == NineVerdict::AlmostGeneral);
                nine_point = Some(match verdict {
                    NineVerdict::AlmostGeneral => {
                        "blowup of the plane at 9 points in almost general position".to_string()
                    }
                    NineVerdict::NotAlmostGeneral => {
                        "9 points not in almost general position".to_string()
                    }
                });
            }
            let classification = w.classify();
            let kodaira = match w.kodaira_negative() {
                Ok(b) => Some(b),
                Err(Error::Inconclusive(_)) => None,
                Err(e) => return Err(e),
            };
            let doc = ClassifyDoc {
                manifest: RunManifest::new("classify")
                    .with_input(&surface.display().to_string()),
                classification,
                kodaira_negative: kodaira,
                warnings: w.weight_sanity(),
                nine_point,
            };
            emit(to_json(&doc), &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cohom {
            surface,
            class,
            oracle,
            seed,
            report,
        } => {
            let cfg = SurfaceConfig::parse(&read(&surface)?)?;
            let w = cfg.build()?;
            let coeffs: Vec<i64> = class
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Input(format!("bad coefficient {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            if coeffs.len() != w.base.rank() {
                return Err(Error::Input("class has the wrong rank".into()));
            }
            let d = DivClass(coeffs.clone());
            let engine = glsurf::cohom::cohomology(&w.base, &d)?;
            let oracle_v = if oracle {
                Some(glsurf::oracle::cohomology_oracle(
                    &w.base,
                    &d,
                    seed.unwrap_or(0),
                )?)
            } else {
                None
            };
            let agree = oracle_v.as_ref().map(|o| o == &engine);
            let doc = CohomDoc {
                manifest: RunManifest::new("cohom")
                    .with_input(&surface.display().to_string())
                    .with_seed(seed),
                class: coeffs,
                engine,
                oracle: oracle_v,
                agree,
            };
            let failed = agree == Some(false);
            emit(to_json(&doc), &report)?;
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Check {
            surface,
            bundle,
            script,
            r_cap,
            report,
        } => {
            let cfg = SurfaceConfig::parse(&read(&surface)?)?;
            let w = cfg.build()?;
            let bcfg = BundleConfig::parse(&read(&bundle)?)?;
            let rb = bcfg.resolve(&w)?;
            let cache = CohomCache::new();
            let checker = Checker {
                surface: &w,
                ring: rb.ring.as_ref(),
                presented: rb.presented.clone(),
                cache: Some(&cache),
            };
            let partial = checker.partial_tilting(&rb.candidate)?;
            let hereditary = checker.two_hereditary_capped(&rb.candidate, r_cap)?;
            let euler = checker.euler_matrix(&rb.candidate)?;
            let quasi_canonical = if w.r() == 0
                && rb
                    .candidate
                    .summands
                    .iter()
                    .all(|s| matches!(s, glsurf::tilting::Summand::Line(_)))
            {
                checker.dp_criterion(&rb.candidate).ok()
            } else {
                None
            };
            let generation = match &script {
                Some(path) => {
                    let scfg = ScriptConfig::parse(&read(path)?)?;
                    Some(check_generation_script(
                        &w,
                        &rb.candidate,
                        &rb.presented,
                        &scfg.build(&w)?,
                    )?)
                }
                None => None,
            };
            let mut manifest = RunManifest::new("check")
                .with_input(&surface.display().to_string())
                .with_input(&bundle.display().to_string())
                .with_cap("r-cap", r_cap);
            if let Some(s) = &script {
                manifest = manifest.with_input(&s.display().to_string());
            }
            let failed = matches!(partial, PartialVerdict::Fail(_))
                || matches!(hereditary.verdict, HereditaryVerdict::Fail(_))
                || !euler.unimodular
                || euler.expected_rank.is_some_and(|r| r as usize != euler.size)
                || generation.as_ref().is_some_and(|g| !g.verified)
                || quasi_canonical
                    .as_ref()
                    .is_some_and(|d| d.verdict == PairRoute::Fail);
            let uncertified = matches!(hereditary.verdict, HereditaryVerdict::Uncertified(_))
                || quasi_canonical
                    .as_ref()
                    .is_some_and(|d| d.verdict == PairRoute::Inconclusive);
            let doc = CheckDoc {
                manifest,
                partial_tilting: partial,
                hereditary: Some(hereditary),
                euler: Some(euler),
                quasi_canonical,
                generation,
            };
            emit(to_json(&doc), &report)?;
            Ok(if failed {
                ExitCode::from(1)
            } else if uncertified {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Quiver {
            surface,
            bundle,
            degree_bound,
            dot,
            relations,
        } => {
            let cfg = SurfaceConfig::parse(&read(&surface)?)?;
            let w = cfg.build()?;
            let bcfg = BundleConfig::parse(&read(&bundle)?)?;
            let rb = bcfg.resolve(&w)?;
            let ring = match &rb.ring {
                Some(r) => r,
                None => &glsurf::cox::builtin_cox(&w)?,
            };
            let bound = degree_bound.as_deref().map(parse_q).transpose()?;
            let q = quiver(ring, &rb.candidate, bound, &rb.arrow_names)?;
            let dot_text = to_dot(&q);
            let mut rel_text = String::new();
            for r in &q.relations {
                rel_text.push_str(&format!(
                    "{} -> {}: {}\n",
                    q.vertex_labels[r.from], q.vertex_labels[r.to], r.text
                ));
            }
            match &dot {
                Some(p) => std::fs::write(p, &dot_text)
                    .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
                None => print!("{dot_text}"),
            }
            match &relations {
                Some(p) => std::fs::write(p, &rel_text)
                    .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
                None => print!("{rel_text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Search {
            surface,
            degree_box,
            max_summands,
            workers,
            partial_only,
            report,
        } => {
            let cfg = SurfaceConfig::parse(&read(&surface)?)?;
            let w = cfg.build()?;
            let ranges: Vec<(i64, i64)> = degree_box
                .split(',')
                .map(|r| {
                    let (lo, hi) = r
                        .split_once(':')
                        .ok_or_else(|| Error::Input(format!("bad range {r:?}")))?;
                    Ok((
                        lo.trim()
                            .parse()
                            .map_err(|_| Error::Input(format!("bad bound {lo:?}")))?,
                        hi.trim()
                            .parse()
                            .map_err(|_| Error::Input(format!("bad bound {hi:?}")))?,
                    ))
                })
                .collect::<Result<_, Error>>()?;
            let db = DegreeBox {
                pic_min: ranges.iter().map(|&(a, _)| a).collect(),
                pic_max: ranges.iter().map(|&(_, b)| b).collect(),
            };
            let n = expected_rank(&w)
                .ok_or_else(|| Error::Input("weighted divisors must be rational".into()))?;
            let cache = CohomCache::new();
            let checker = Checker::lines_only(&w).with_cache(&cache);
            let params = SearchParams {
                degree_box: db.clone(),
                max_summands: max_summands.unwrap_or(n as usize),
                require_two_hereditary: !partial_only,
                workers: if workers == 1 {
                    Workers::Seq
                } else {
                    Workers::Par(workers)
                },
            };
            let classes = glsurf::search::enumerate_box(&checker, &db)?.len();
            let hits = search(&checker, &params)?;
            let doc = SearchDoc {
                manifest: RunManifest::new("search")
                    .with_input(&surface.display().to_string())
                    .with_cap("box", &degree_box)
                    .with_cap("max-summands", params.max_summands),
                expected_rank: n,
                classes_enumerated: classes,
                hits,
            };
            emit(to_json(&doc), &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ninepoints { input, report } => {
            let ncfg = NinePointConfig::parse(&read(&input)?)?;
            let model = ncfg.model()?;
            let params = ncfg.params()?;
            let class = nine_point_class(model, &params)?;
            let verdict = almost_general_9(model, &params, &ncfg.point_config())?;
            let doc = NinePointDoc {
                manifest: RunManifest::new("ninepoints")
                    .with_input(&input.display().to_string()),
                class: glsurf::rat::show_q(&class),
                torsion: is_torsion(model, &class),
                verdict: match verdict {
                    NineVerdict::AlmostGeneral => "almost-general".into(),
                    NineVerdict::NotAlmostGeneral => "not-almost-general".into(),
                },
            };
            emit(to_json(&doc), &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Skew {
            cover,
            bundle,
            report,
        } => {
            let ccfg = CoverConfig::parse(&read(&cover)?)?;
            let cm = ccfg.build()?;
            let upstairs_w = WeightedSurface::unweighted(cm.upstairs.clone());
            let bcfg = BundleConfig::parse(&read(&bundle)?)?;
            let rb = bcfg.resolve(&upstairs_w)?;
            let (star, star_witnesses) = cm.star_condition()?;
            let cache = CohomCache::new();
            let checker = Checker::lines_only(&upstairs_w).with_cache(&cache);
            let partial = checker.partial_tilting(&rb.candidate)?;
            let hereditary = checker.two_hereditary(&rb.candidate)?;
            let induced = cm.induced_tilting(&rb.candidate)?;
            // the downstairs expected rank is known for the builtin covers
            let expected = builtin_downstairs_rank(&ccfg)?;
            let failed = !star
                || matches!(partial, PartialVerdict::Fail(_))
                || matches!(hereditary.verdict, HereditaryVerdict::Fail(_))
                || !induced.unimodular
                || expected.is_some_and(|r| r as usize != induced.summands.len());
            let uncertified =
                matches!(hereditary.verdict, HereditaryVerdict::Uncertified(_));
            let doc = SkewDoc {
                manifest: RunManifest::new("skew")
                    .with_input(&cover.display().to_string())
                    .with_input(&bundle.display().to_string()),
                star_condition: star,
                star_witnesses,
                upstairs_partial: partial,
                upstairs_hereditary: hereditary,
                induced,
                expected_rank: expected,
            };
            emit(to_json(&doc), &report)?;
            Ok(if failed {
                ExitCode::from(1)
            } else if uncertified {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn builtin_downstairs_rank(cfg: &CoverConfig) -> Result<Option<u64>, Error> {
    let w = match cfg.builtin.as_deref() {
        Some("p1xp1-swap") => Some(glsurf::skewcovers::swap_downstairs()?),
        Some("p1xp1-swap-blown") => Some(glsurf::skewcovers::swap_blown_downstairs()?),
        Some("polygon") => {
            let p = cfg.p.ok_or(Error::Input("polygon needs p".into()))?;
            let i = cfg.i.ok_or(Error::Input("polygon needs i".into()))?;
            Some(glsurf::skewcovers::polygon_downstairs(p, i)?)
        }
        _ => None,
    };
    Ok(w.as_ref().and_then(expected_rank))
}
