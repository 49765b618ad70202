use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spanpath_core::harness::ScenarioRouting;
use spanpath_core::{
    align_coordinates, anchor_impact_study, assign_vcs, build_topology, calibrate_radio_range, select_anchors,
    setup_ospvcs, setup_spvcs, write_csv, AnchorStrategy, Area, CoordinateView, Deployment, ExperimentConfig,
    ExperimentOutcome, NodeId, Protocol, Topology,
};

#[derive(Parser)]
#[command(name = "spanpath", version, about = "Spanning-path virtual coordinates and geometric routing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a scenario file (positions, range and edges).
    Generate {
        #[command(flatten)]
        deploy: DeployArgs,
        #[arg(long, default_value_t = 12.0)]
        range: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump a coordinate system or labeling for a scenario.
    Label {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long, value_enum)]
        kind: LabelKind,
        /// Anchor placement: center, corner, random or explicit ids `3,17`.
        #[arg(long, default_value = "corner")]
        anchor_strategy: AnchorStrategy,
        /// Number of anchors for vcs/avcs.
        #[arg(long, default_value_t = 4)]
        anchors: usize,
        #[arg(long, default_value_t = 1)]
        align_iterations: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Route one packet.
    Route(RouteArgs),
    /// Run a seeded sweep and write the metrics CSV.
    Experiment {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Anchor of the spanning-path labeling.
        #[arg(long, default_value = "center")]
        anchor_strategy: AnchorStrategy,
    },
    /// Compare spanning-path anchor placements over the same scenarios.
    Anchors {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Placements to compare, separated by `;`.
        #[arg(long, default_value = "center;corner;random")]
        anchor_strategy: String,
    },
}

#[derive(Args)]
struct RouteArgs {
    #[command(flatten)]
    source: ScenarioSource,
    #[arg(long)]
    protocol: Protocol,
    #[arg(long)]
    src: NodeId,
    #[arg(long)]
    dst: NodeId,
    /// Anchor of the spanning-path labeling.
    #[arg(long, default_value = "center")]
    anchor_strategy: AnchorStrategy,
    #[arg(long)]
    reenter_greedy: bool,
    /// Print one line per hop: `seq node mode dist_to_dst`.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelKind {
    Vcs,
    Avcs,
    Spvcs,
    Ospvcs,
}

#[derive(Args)]
struct DeployArgs {
    #[arg(long, default_value_t = 200)]
    nodes: usize,
    #[arg(long, default_value = "100x100")]
    area: Area,
    #[arg(long, default_value = "uniform")]
    deployment: Deployment,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ScenarioSource {
    /// Read the topology from a scenario file instead of generating one.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    deploy: DeployArgs,
    #[arg(long, default_value_t = 12.0)]
    range: f64,
}

impl ScenarioSource {
    fn load(&self) -> Result<Topology> {
        match &self.scenario {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(Topology::from_scenario(&text).with_context(|| format!("parsing {}", path.display()))?)
            }
            None => {
                let d = &self.deploy;
                let pts = d.deployment.generate(d.nodes, d.area, d.seed)?;
                Ok(build_topology(pts, self.range))
            }
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    deploy: DeployArgs,
    /// Radio ranges, one sweep point each.
    #[arg(long, value_delimiter = ',')]
    ranges: Vec<f64>,
    /// Target mean degrees; each is converted to a calibrated radio range.
    #[arg(long, value_delimiter = ',', conflicts_with = "ranges")]
    degrees: Vec<f64>,
    #[arg(long, default_value_t = 30)]
    trials: usize,
    #[arg(long, default_value = "sp,gf-geo,gpsr-gg,gpsr-rng,gf-vcs,gf-avcs,lcr,bvr,spr,ospr,agsp")]
    protocols: String,
    #[arg(long)]
    reenter_greedy: bool,
    #[arg(long, default_value_t = 10)]
    bvr_anchors: usize,
    #[arg(long, default_value_t = 4)]
    ttl_factor: usize,
    #[arg(long, default_value_t = 100)]
    max_attempts: usize,
    /// CSV destination; metadata goes to `<output>.meta`. Stdout if absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SweepArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let d = &self.deploy;
        let radio_ranges = if !self.degrees.is_empty() {
            self.degrees
                .iter()
                .map(|&k| calibrate_radio_range(d.deployment, d.nodes, d.area, k))
                .collect::<Result<Vec<_>, _>>()?
        } else if !self.ranges.is_empty() {
            self.ranges.clone()
        } else {
            bail!("give --ranges or --degrees");
        };
        let mut cfg = ExperimentConfig {
            node_count: d.nodes,
            area: d.area,
            deployment: d.deployment,
            radio_ranges,
            trials: self.trials,
            base_seed: d.seed,
            protocols: Protocol::parse_list(&self.protocols)?,
            ttl_factor: self.ttl_factor,
            reenter_greedy: self.reenter_greedy,
            max_attempts: self.max_attempts,
            ..ExperimentConfig::default()
        };
        cfg.anchors.bvr_count = self.bvr_anchors;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn emit_rows(outcomes: &[(ExperimentConfig, &ExperimentOutcome)], output: Option<&Path>) -> Result<()> {
    let rows: Vec<_> = outcomes.iter().flat_map(|(_, o)| o.rows()).collect();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(std::str::from_utf8(&buf)?, output)?;
    if let Some(p) = output {
        let meta = outcomes.iter().map(|(c, o)| o.metadata(c)).collect::<Vec<_>>().join("\n");
        let mut meta_path = p.as_os_str().to_owned();
        meta_path.push(".meta");
        fs::write(&meta_path, meta).context("writing metadata")?;
    }
    Ok(())
}

fn label(t: &Topology, kind: LabelKind, strategy: &AnchorStrategy, k: usize, seed: u64, iterations: usize) -> Result<String> {
    Ok(match kind {
        LabelKind::Vcs | LabelKind::Avcs => {
            let anchors = select_anchors(t, strategy, k, seed)?;
            let vcs = assign_vcs(t, &anchors)?;
            if matches!(kind, LabelKind::Vcs) {
                vcs.dump()
            } else {
                align_coordinates(&vcs, t, iterations).dump()
            }
        }
        LabelKind::Spvcs | LabelKind::Ospvcs => {
            let anchor = select_anchors(t, strategy, 1, seed)?[0];
            if matches!(kind, LabelKind::Spvcs) {
                setup_spvcs(t, anchor)?.dump()
            } else {
                setup_ospvcs(t, anchor)?.dump()
            }
        }
    })
}

fn route(args: &RouteArgs) -> Result<String> {
    let t = &args.source.load()?;
    let (protocol, src, dst) = (args.protocol, args.src, args.dst);
    let n = t.node_count();
    if src >= n || dst >= n {
        bail!("src and dst must be below the node count {n}");
    }
    let mut cfg = ExperimentConfig {
        node_count: n,
        protocols: vec![protocol],
        reenter_greedy: args.reenter_greedy,
        ..ExperimentConfig::default()
    };
    cfg.anchors.span = args.anchor_strategy.clone();
    cfg.anchors.bvr_count = cfg.anchors.bvr_count.min(n);
    let ctx = ScenarioRouting::new(&cfg, t, args.source.deploy.seed)?;
    let r = ctx.route(protocol, src, dst);

    let view: Option<&CoordinateView> = match protocol {
        Protocol::GfGeo | Protocol::GpsrGg | Protocol::GpsrRng => Some(&ctx.geo),
        Protocol::GfVcs | Protocol::Lcr => ctx.vcs_view.as_ref(),
        Protocol::GfAvcs | Protocol::Agsp => ctx.aligned_view.as_ref(),
        Protocol::Bvr => ctx.bvr.as_ref().map(|(_, v)| v),
        Protocol::Sp | Protocol::Spr | Protocol::Ospr => None,
    };
    let mut out = String::new();
    if args.trace {
        out += &r.trace(|v| match view {
            Some(view) => view.distance(v, dst),
            None => ctx.hops.get(v, dst).map_or(f64::INFINITY, f64::from),
        });
    }
    let outcome = match r.outcome {
        spanpath_core::Outcome::Delivered => "delivered".to_string(),
        spanpath_core::Outcome::Failed(reason) => format!("failed ({reason})"),
    };
    let sp = ctx.hops.get(src, dst).map_or("unreachable".to_string(), |h| h.to_string());
    out += &format!(
        "{protocol} {src} -> {dst}: {outcome}, {} hops (shortest {sp}), flood_tx {}\n",
        r.hop_count(),
        r.flood_tx
    );
    Ok(out)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { deploy, range, output } => {
            if !(range > 0.0 && range.is_finite()) {
                bail!("radio range must be positive, got {range}");
            }
            let pts = deploy.deployment.generate(deploy.nodes, deploy.area, deploy.seed)?;
            emit(&build_topology(pts, range).to_scenario(), output.as_deref())
        }
        Command::Label {
            source,
            kind,
            anchor_strategy,
            anchors,
            align_iterations,
            output,
        } => {
            let t = source.load()?;
            let text = label(&t, kind, &anchor_strategy, anchors, source.deploy.seed, align_iterations)?;
            emit(&text, output.as_deref())
        }
        Command::Route(args) => emit(&route(&args)?, None),
        Command::Experiment { sweep, anchor_strategy } => {
            let mut cfg = sweep.config()?;
            cfg.anchors.span = anchor_strategy;
            let out = spanpath_core::run_experiment(&cfg)?;
            emit_rows(&[(cfg, &out)], sweep.output.as_deref())
        }
        Command::Anchors { sweep, anchor_strategy } => {
            let cfg = sweep.config()?;
            let placements = anchor_strategy
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::parse)
                .collect::<Result<Vec<AnchorStrategy>, _>>()?;
            if placements.is_empty() {
                bail!("no anchor placements given");
            }
            let study = anchor_impact_study(&cfg, &placements)?;
            let outcomes: Vec<_> = study
                .iter()
                .map(|(placement, o)| {
                    let mut c = cfg.clone();
                    c.protocols.retain(|p| p.uses_span_anchor());
                    c.anchors.span = placement.clone();
                    (c, o)
                })
                .collect();
            emit_rows(&outcomes, sweep.output.as_deref())
        }
    }
}
