use std::path::Path;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Serialize;

use growtight::embedding::{
    check_phi_injective, check_phi_nonexpanding, find_kernel_element, net_words, random_net_words, tightness_report,
    EmbeddingConfig, EmbeddingError, InjectivityReport, InjectivityStatus, NonexpansionReport, TightnessOptions,
};
use growtight::growth::{ball_table, build_rho_net, growth_rate, GrowthError, GrowthEstimate, NetCertificate};
use growtight::metric::{four_point_delta, lemma_suite, tripod_map, DeltaMode, FiniteMetricSpace, MetricError};
use growtight::orbit::{
    check_cells, check_equivariance, kappa_insertion_sweep, separation_sweep, symmetric_sweep, twisted_sweep,
    CellReport, ConstantOverrides, ConstantsBundle, EquivarianceReport, OrbitContext, OrbitError, SweepReport,
};
use growtight::presentation::DEFAULT_COMPLETION_CAP;
use growtight::word::reduced_words_up_to;
use growtight::{builtin_model, resolve_model, FreeGroup, Presentation, PresentationError, SharedModel, Word};

use crate::args::{
    ConstantsArgs, DeltaArgs, EmbedArgs, GrowthArgs, ModeArg, NetArgs, OrbitArgs, OrbitCheck, QuotientArgs,
    TightnessArgs, TripodArgs,
};
use crate::output::{CliError, Report};

/// Completed run: the report and whether every check in it held.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

impl Outcome {
    fn json(value: impl Serialize, passed: bool) -> Result<Self, CliError> {
        let value = serde_json::to_value(value).map_err(|e| CliError::Compute(e.to_string()))?;
        Ok(Outcome {
            report: Report::Json(value),
            passed,
        })
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn from_presentation(e: PresentationError) -> CliError {
    match e {
        PresentationError::Completion(c) => CliError::Compute(c.to_string()),
        other => input(other),
    }
}

fn from_metric(e: MetricError) -> CliError {
    match e {
        MetricError::EdgeList { .. }
        | MetricError::UnknownPoint(_)
        | MetricError::Disconnected
        | MetricError::NotAMetric(_)
        | MetricError::SampleSizeZero => input(e),
        other => CliError::Compute(other.to_string()),
    }
}

fn from_growth(e: GrowthError) -> CliError {
    CliError::Compute(e.to_string())
}

fn from_orbit(e: OrbitError) -> CliError {
    match e {
        OrbitError::NotHyperbolic | OrbitError::KappaTooSmall { .. } => input(e),
        other => CliError::Compute(other.to_string()),
    }
}

fn from_embedding(e: EmbeddingError) -> CliError {
    match e {
        EmbeddingError::XiNotInKernel(_) | EmbeddingError::BlockNotInNet(_) => input(e),
        EmbeddingError::Orbit(o) => from_orbit(o),
        other => CliError::Compute(other.to_string()),
    }
}

fn parse_word(s: &str) -> Result<Word, CliError> {
    s.parse::<Word>().map_err(|e| input(format!("{s:?}: {e}")))
}

/// A builtin model or a presentation file.
fn load_model(source: &str) -> Result<SharedModel, CliError> {
    if source.starts_with("builtin:") {
        return builtin_model(source).map_err(from_presentation);
    }
    let p = Presentation::parse(&read(Path::new(source))?).map_err(from_presentation)?;
    resolve_model(&p, DEFAULT_COMPLETION_CAP).map_err(from_presentation)
}

fn load_space(source: &str) -> Result<FiniteMetricSpace, CliError> {
    let bad = || input(format!("unknown builtin space {source:?}"));
    if let Some(rest) = source.strip_prefix("builtin:") {
        let (kind, arg) = rest.split_once(':').ok_or_else(bad)?;
        let n: usize = arg.parse().map_err(|_| bad())?;
        return match kind {
            "tree" => Ok(FiniteMetricSpace::cayley_ball(&FreeGroup::new(2), n)),
            "cycle" if n >= 1 => Ok(FiniteMetricSpace::cycle(n)),
            _ => Err(bad()),
        };
    }
    FiniteMetricSpace::parse_edge_list(&read(Path::new(source))?).map_err(from_metric)
}

fn rational_str(q: &BigRational) -> String {
    q.to_string()
}

fn small(q: &BigRational) -> Option<Rational64> {
    use num_traits::ToPrimitive;
    Some(Rational64::new(q.numer().to_i64()?, q.denom().to_i64()?))
}

fn big(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

#[derive(Serialize)]
struct GrowthOutput {
    model: String,
    radius: usize,
    counts: Vec<String>,
    estimate: Option<GrowthEstimate>,
}

pub fn growth(args: &GrowthArgs) -> Result<Outcome, CliError> {
    let model = load_model(&args.model)?;
    let table = ball_table(model.as_ref(), args.radius).map_err(from_growth)?;
    let estimate = match args.window {
        Some(window) => Some(growth_rate(&table, Some(window)).map_err(input)?),
        // Too few radii for a fit: report the counts alone.
        None => growth_rate(&table, None).ok(),
    };
    let counts: Vec<String> = table.counts().iter().map(ToString::to_string).collect();
    let out = GrowthOutput {
        model: model.name(),
        radius: args.radius,
        counts: counts.clone(),
        estimate,
    };
    let rows = counts
        .into_iter()
        .enumerate()
        .map(|(r, c)| vec![r.to_string(), c])
        .collect();
    Ok(Outcome {
        report: Report::json_or_table(&out, &["radius", "count"], rows)?,
        passed: true,
    })
}

#[derive(Serialize)]
struct DeltaOutput {
    space: String,
    points: usize,
    mode: DeltaMode,
    seed: Option<u64>,
    delta: String,
    witness: Option<Vec<String>>,
    quadruples: u64,
}

pub fn delta(args: &DeltaArgs) -> Result<Outcome, CliError> {
    let space = load_space(&args.space)?;
    let mode = match args.mode {
        ModeArg::Exhaustive => DeltaMode::Exhaustive,
        ModeArg::Sample(samples) => DeltaMode::Sampled {
            samples,
            seed: args.seed,
        },
    };
    let est = four_point_delta(&space, mode).map_err(from_metric)?;
    let out = DeltaOutput {
        space: args.space.clone(),
        points: space.len(),
        mode,
        seed: matches!(mode, DeltaMode::Sampled { .. }).then_some(args.seed),
        delta: est.delta.to_string(),
        witness: est
            .witness
            .map(|q| q.iter().map(|&i| space.label(i).to_owned()).collect()),
        quadruples: est.quadruples,
    };
    let rows = vec![vec![out.delta.clone(), out.quadruples.to_string()]];
    Ok(Outcome {
        report: Report::json_or_table(&out, &["delta", "quadruples"], rows)?,
        passed: true,
    })
}

#[derive(Serialize)]
struct TripodOutput<T: Serialize> {
    space: String,
    delta: String,
    report: T,
}

#[derive(Serialize)]
struct SingleTripod {
    points: [String; 3],
    arms: [String; 3],
    band: growtight::metric::BandReport,
}

pub fn tripod(args: &TripodArgs) -> Result<Outcome, CliError> {
    let space = load_space(&args.space)?;
    let delta = match args.delta {
        Some(d) => d,
        None => {
            four_point_delta(&space, DeltaMode::Exhaustive)
                .map_err(from_metric)?
                .delta
        }
    };
    if let Some(points) = &args.points {
        let idx: Vec<usize> = points
            .iter()
            .map(|p| space.point(p).map_err(from_metric))
            .collect::<Result<_, _>>()?;
        let map = tripod_map(&space, idx[0], idx[1], idx[2]).map_err(from_metric)?;
        let band = map.check_band(&space, delta);
        let passed = band.violations == 0;
        let result = SingleTripod {
            points: [points[0].clone(), points[1].clone(), points[2].clone()],
            arms: map.tripod.arms.map(|a| a.to_string()),
            band,
        };
        return Outcome::json(
            TripodOutput {
                space: args.space.clone(),
                delta: delta.to_string(),
                report: result,
            },
            passed,
        );
    }
    let suite = lemma_suite(&space, delta).map_err(from_metric)?;
    let passed = suite.total_violations() == 0;
    Outcome::json(
        TripodOutput {
            space: args.space.clone(),
            delta: delta.to_string(),
            report: suite,
        },
        passed,
    )
}

#[derive(Serialize)]
struct NetOutput {
    model: String,
    rho: String,
    radius: usize,
    whole_group: bool,
    theta: Option<Word>,
    size: usize,
    members: Vec<Word>,
    certificate: Option<NetCertificate>,
}

pub fn net(args: &NetArgs) -> Result<Outcome, CliError> {
    if args.rho < Rational64::from_integer(0) {
        return Err(input("ρ must be nonnegative"));
    }
    let model = load_model(&args.model)?;
    let net = build_rho_net(model.as_ref(), args.rho, args.radius).map_err(from_growth)?;
    let certificate = if args.certify {
        Some(net.certify(model.as_ref()).map_err(from_growth)?)
    } else {
        None
    };
    let passed = certificate.as_ref().is_none_or(|c| c.separated && c.covering);
    let rows = net
        .members()
        .iter()
        .map(|m| vec![m.to_string(), model.geodesic_length(m).to_string()])
        .collect();
    let out = NetOutput {
        model: model.name(),
        rho: args.rho.to_string(),
        radius: args.radius,
        whole_group: net.whole_group,
        theta: net.theta.clone(),
        size: net.members().len(),
        members: net.members().to_vec(),
        certificate,
    };
    Ok(Outcome {
        report: Report::json_or_table(&out, &["member", "norm"], rows)?,
        passed,
    })
}

#[derive(Serialize)]
struct OrbitOutput<T: Serialize> {
    xi: Word,
    axis_element: Word,
    displacement: usize,
    check: &'static str,
    report: T,
}

#[derive(Serialize)]
struct CellsOutput {
    max_len: usize,
    cells: CellReport,
    equivariance: EquivarianceReport,
}

pub fn orbit(args: &OrbitArgs) -> Result<Outcome, CliError> {
    let xi = parse_word(&args.xi)?;
    let rank = xi.rank_hint().max(2);
    let ctx = OrbitContext::new(rank, &xi).map_err(from_orbit)?;
    let ambient = FreeGroup::new(rank);
    let constants = ConstantsBundle::for_tree(ctx.displacement(), &ConstantOverrides::default(), &ambient, rank);
    let wrap = |check: &'static str, report: SweepReport| {
        let passed = report.holds();
        Outcome::json(
            OrbitOutput {
                xi: xi.clone(),
                axis_element: ctx.xi().clone(),
                displacement: ctx.displacement(),
                check,
                report,
            },
            passed,
        )
    };
    match args.check {
        OrbitCheck::Cells => {
            let vertices = reduced_words_up_to(rank, args.max_len);
            let cells = check_cells(&ctx, &vertices);
            let equivariance = check_equivariance(&ctx, &vertices);
            let passed = cells.holds() && equivariance.holds();
            Outcome::json(
                OrbitOutput {
                    xi: xi.clone(),
                    axis_element: ctx.xi().clone(),
                    displacement: ctx.displacement(),
                    check: "cells",
                    report: CellsOutput {
                        max_len: args.max_len,
                        cells,
                        equivariance,
                    },
                },
                passed,
            )
        }
        OrbitCheck::Symmetric => wrap(
            "symmetric",
            symmetric_sweep(&ctx, &constants, args.samples, args.max_len, args.seed),
        ),
        OrbitCheck::Twisted => wrap(
            "twisted",
            twisted_sweep(&ctx, &constants, args.samples, args.max_len, args.seed),
        ),
        OrbitCheck::Separation => wrap(
            "separation",
            separation_sweep(&ctx, &constants, args.samples, args.max_len, args.seed),
        ),
        OrbitCheck::Insert => {
            let (lo, hi) = args.kappas;
            let report =
                kappa_insertion_sweep(&ctx, args.max_len, args.max_alpha, lo as i64..=hi as i64).map_err(from_orbit)?;
            wrap("insert", report)
        }
    }
}

/// Quotient of a free ambient group by the normal closure of the given
/// words, with the kernel element to embed along.
struct QuotientSetup {
    quotient: SharedModel,
    xi: Word,
}

fn setup_quotient(args: &QuotientArgs) -> Result<QuotientSetup, CliError> {
    let ambient = Presentation::parse(&read(&args.presentation)?).map_err(from_presentation)?;
    if !ambient.is_free() {
        return Err(input("the ambient presentation must be free (no nontrivial relators)"));
    }
    let closure: Vec<Word> = args
        .normal_closure
        .iter()
        .flat_map(|s| s.split_whitespace())
        .map(parse_word)
        .collect::<Result<_, _>>()?;
    ambient.check_words(&closure).map_err(from_presentation)?;
    let quotient = resolve_model(
        &ambient.with_relators(&closure).map_err(from_presentation)?,
        DEFAULT_COMPLETION_CAP,
    )
    .map_err(from_presentation)?;
    let xi = match &args.xi {
        Some(s) => {
            let xi = parse_word(s)?;
            ambient
                .check_words(std::slice::from_ref(&xi))
                .map_err(from_presentation)?;
            if !quotient.is_identity(&xi) {
                return Err(input(format!("ξ = {xi} is not in the normal closure")));
            }
            xi
        }
        None => find_kernel_element(&quotient, 8).map_err(from_embedding)?,
    };
    Ok(QuotientSetup { quotient, xi })
}

fn overrides(args: &ConstantsArgs) -> ConstantOverrides {
    ConstantOverrides {
        kappa: args.kappa,
        lambda: args.lambda,
        rho: args.rho,
    }
}

/// Constants for the setup; overrides breaking a hypothesis need `--scaled`.
fn constants(setup: &QuotientSetup, ctx: &OrbitContext, args: &ConstantsArgs) -> Result<ConstantsBundle, CliError> {
    if args.kappa.is_some_and(|k| k < 4) {
        return Err(input("κ must be at least 4"));
    }
    let zero = Rational64::from_integer(0);
    if args.lambda.is_some_and(|l| l <= zero) || args.rho.is_some_and(|r| r < zero) {
        return Err(input("λ must be positive and ρ nonnegative"));
    }
    let bundle = ConstantsBundle::for_tree(
        ctx.displacement(),
        &overrides(args),
        setup.quotient.as_ref(),
        ctx.rank(),
    );
    if !bundle.guaranteed() && !args.scaled {
        let failed: Vec<&str> = bundle
            .hypotheses()
            .iter()
            .filter(|h| !h.holds)
            .map(|h| h.name)
            .collect();
        return Err(input(format!(
            "constants fail {}; pass --scaled to run anyway",
            failed.join(", ")
        )));
    }
    Ok(bundle)
}

#[derive(Serialize)]
struct EmbedOutput {
    quotient: String,
    xi: Word,
    constants: ConstantsBundle,
    net_radius: usize,
    net_size: usize,
    sample: &'static str,
    seed: Option<u64>,
    max_norm: Option<String>,
    words: usize,
    nonexpansion: NonexpansionReport,
    injectivity: InjectivityReport,
    guaranteed: bool,
}

pub fn embed(args: &EmbedArgs) -> Result<Outcome, CliError> {
    let setup = setup_quotient(&args.quotient)?;
    let ctx = OrbitContext::new(setup.quotient.rank(), &setup.xi).map_err(from_orbit)?;
    let bundle = constants(&setup, &ctx, &args.constants)?;
    let rho = small(&bundle.rho).ok_or_else(|| input("ρ out of range"))?;
    let net = build_rho_net(setup.quotient.as_ref(), rho, args.net_radius).map_err(from_growth)?;
    let net_size = net.members().len();
    let cfg = EmbeddingConfig::new(setup.quotient.clone(), ctx, bundle, net).map_err(from_embedding)?;
    let (words, max_norm) = match args.samples {
        Some(n) => (random_net_words(&cfg, args.seed, n, args.max_blocks), None),
        None => {
            let max_norm = args
                .max_norm
                .map(big)
                .unwrap_or_else(|| &cfg.constants.lambda * BigInt::from(2) + &cfg.constants.rho * BigInt::from(3));
            let words = net_words(&cfg, args.max_blocks, &max_norm, args.max_words);
            (words, Some(rational_str(&max_norm)))
        }
    };
    let nonexpansion = check_phi_nonexpanding(&cfg, &words).map_err(from_embedding)?;
    let injectivity = check_phi_injective(&cfg, &words, 10).map_err(from_embedding)?;
    let guaranteed = cfg.constants.guaranteed();
    let passed = !(guaranteed && !nonexpansion.holds()) && injectivity.status != InjectivityStatus::Violated;
    Outcome::json(
        EmbedOutput {
            quotient: setup.quotient.name(),
            xi: setup.xi,
            constants: cfg.constants.clone(),
            net_radius: args.net_radius,
            net_size,
            sample: if args.samples.is_some() { "random" } else { "exhaustive" },
            seed: args.samples.map(|_| args.seed),
            max_norm,
            words: words.len(),
            nonexpansion,
            injectivity,
            guaranteed,
        },
        passed,
    )
}

pub fn tightness(args: &TightnessArgs) -> Result<Outcome, CliError> {
    let setup = setup_quotient(&args.quotient)?;
    let ctx = OrbitContext::new(setup.quotient.rank(), &setup.xi).map_err(from_orbit)?;
    constants(&setup, &ctx, &args.constants)?;
    let options = TightnessOptions {
        radius_ambient: args.radius_g,
        radius_quotient: args.radius_q,
        xi: Some(setup.xi.clone()),
        overrides: overrides(&args.constants),
        phi_max_words: args.max_words,
        ..TightnessOptions::default()
    };
    let report = tightness_report(setup.quotient, &options).map_err(from_embedding)?;
    let passed = !report.guaranteed || (report.phi_injective_on_sample && report.phi_nonexpanding_on_sample);
    Outcome::json(report, passed)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn spaces_and_models_resolve() {
        assert_eq!(load_space("builtin:tree:1").unwrap().len(), 5);
        assert_eq!(load_space("builtin:cycle:6").unwrap().len(), 6);
        assert!(matches!(load_space("builtin:torus:3"), Err(CliError::Usage(_))));
        assert!(matches!(load_space("/nonexistent/edges.txt"), Err(CliError::Io { .. })));
        assert_eq!(load_model("builtin:abelian:2").unwrap().rank(), 2);
        assert!(matches!(load_model("builtin:nope:2"), Err(CliError::Usage(_))));
    }

    #[test]
    fn unscaled_overrides_are_refused() {
        let setup = QuotientSetup {
            quotient: Arc::new(growtight::CyclicFreeProduct::new(vec![0, 1])),
            xi: growtight::w("b"),
        };
        let ctx = OrbitContext::new(2, &setup.xi).unwrap();
        let small = ConstantsArgs {
            kappa: Some(4),
            lambda: Some(Rational64::from_integer(2)),
            rho: Some(Rational64::from_integer(3)),
            scaled: false,
        };
        assert!(matches!(constants(&setup, &ctx, &small), Err(CliError::Usage(_))));
        let scaled = ConstantsArgs { scaled: true, ..small };
        assert!(!constants(&setup, &ctx, &scaled).unwrap().guaranteed());
    }
}
