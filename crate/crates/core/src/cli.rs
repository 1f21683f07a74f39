//! Command-line front end: presets, config resolution and file emission.
//!
//! A run writes five files into the output directory:
//!
//! | file             | contents                                                    |
//! |------------------|-------------------------------------------------------------|
//! | `beams.csv`      | `id,q,r,u,v,color,role`                                     |
//! | `ues.csv`        | `ue_id,beam_id,u,v,x_km,y_km,z_km,slant_km,elev_deg,zod_deg,aod_deg` |
//! | `footprints.csv` | `beam_id,vertex_idx,x_km,y_km,z_km`                         |
//! | `stats.json`     | per-beam slant-range statistics and footprint areas         |
//! | `manifest.json`  | config echo, derived constants, RNG, version, file list     |
//!
//! CSV numbers carry 9 significant digits; JSON numbers are full precision.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    beam_stats, global_slant_range, project_footprints, scenario_summary, BeamStats, Footprint, ScenarioSummary,
    DEFAULT_BINS, DEFAULT_EDGE_SAMPLES,
};
use crate::deployment::{drop_ues, UeRecord, RNG_NAME};
use crate::error::{Error, Result};
use crate::layout::{build_layout, BeamLayout, Frf, ScenarioConfig, DEFAULT_EARTH_RADIUS_KM};

pub const BEAMS_HEADER: [&str; 7] = ["id", "q", "r", "u", "v", "color", "role"];
pub const UES_HEADER: [&str; 11] = [
    "ue_id", "beam_id", "u", "v", "x_km", "y_km", "z_km", "slant_km", "elev_deg", "zod_deg", "aod_deg",
];
pub const FOOTPRINTS_HEADER: [&str; 5] = ["beam_id", "vertex_idx", "x_km", "y_km", "z_km"];

const GEO_ALTITUDE_KM: f64 = 35786.0;
const LEO_ALTITUDE_KM: f64 = 1200.0;
const DEFAULT_ELEVATION_DEG: f64 = 70.0;
const DEFAULT_UES_PER_BEAM: usize = 10;

// ============================================================================
// Presets
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterSet {
    Set1,
    Set2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    GeoS,
    GeoKa,
    LeoS,
    LeoKa,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::GeoS, Scenario::GeoKa, Scenario::LeoS, Scenario::LeoKa];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::GeoS => "geo_s",
            Scenario::GeoKa => "geo_ka",
            Scenario::LeoS => "leo_s",
            Scenario::LeoKa => "leo_ka",
        }
    }

    fn altitude_km(&self) -> f64 {
        match self {
            Scenario::GeoS | Scenario::GeoKa => GEO_ALTITUDE_KM,
            Scenario::LeoS | Scenario::LeoKa => LEO_ALTITUDE_KM,
        }
    }
}

impl ParameterSet {
    pub const ALL: [ParameterSet; 2] = [ParameterSet::Set1, ParameterSet::Set2];

    pub fn name(&self) -> &'static str {
        match self {
            ParameterSet::Set1 => "set1",
            ParameterSet::Set2 => "set2",
        }
    }

    /// 3dB beamwidth in degrees for a TR 38.821 parameter set.
    pub fn beamwidth_deg(&self, scenario: Scenario) -> f64 {
        match (self, scenario) {
            (ParameterSet::Set1, Scenario::GeoS) => 0.4011,
            (ParameterSet::Set1, Scenario::GeoKa) => 0.1765,
            (ParameterSet::Set1, Scenario::LeoS) => 4.4127,
            (ParameterSet::Set1, Scenario::LeoKa) => 1.7647,
            (ParameterSet::Set2, Scenario::GeoS) => 0.7353,
            (ParameterSet::Set2, Scenario::GeoKa) => 0.4412,
            (ParameterSet::Set2, Scenario::LeoS) => 8.832,
            (ParameterSet::Set2, Scenario::LeoKa) => 4.4127,
        }
    }
}

pub fn preset(set: ParameterSet, scenario: Scenario) -> ScenarioConfig {
    ScenarioConfig {
        earth_radius_km: DEFAULT_EARTH_RADIUS_KM,
        altitude_km: scenario.altitude_km(),
        beamwidth_3db_deg: set.beamwidth_deg(scenario),
        frf: Frf::One,
        rings: Frf::One.default_rings(),
        center_elevation_deg: DEFAULT_ELEVATION_DEG,
        ues_per_beam: DEFAULT_UES_PER_BEAM,
        seed: 0,
    }
}

/// Parses `SET:SCENARIO`, e.g. `set1:leo_s`.
pub fn parse_preset(name: &str) -> Result<ScenarioConfig> {
    let unknown = || Error::UnknownPreset(name.to_string());
    let (set, scenario) = name.split_once(':').ok_or_else(unknown)?;
    let set = ParameterSet::ALL
        .into_iter()
        .find(|s| s.name().eq_ignore_ascii_case(set.trim()))
        .ok_or_else(unknown)?;
    let scenario = Scenario::ALL
        .into_iter()
        .find(|s| s.name().eq_ignore_ascii_case(scenario.trim()))
        .ok_or_else(unknown)?;
    Ok(preset(set, scenario))
}

// ============================================================================
// Arguments
// ============================================================================

#[derive(Debug, Parser)]
#[command(name = "ntn-uvmap", version, about = "UV-plane beam mapping for NTN system-level simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the layout, drop UEs, project to the Earth and write the output files.
    Run(RunArgs),
    /// Print the derived constants of a scenario as JSON.
    Summary(ScenarioArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Parameter-set preset, SET:SCENARIO (set1|set2 : geo_s|geo_ka|leo_s|leo_ka).
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON scenario config, or a manifest.json from an earlier run.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub beamwidth_deg: Option<f64>,
    #[arg(long)]
    pub altitude_km: Option<f64>,
    #[arg(long)]
    pub earth_radius_km: Option<f64>,
    /// Center-beam elevation [default: 70].
    #[arg(long)]
    pub elevation_deg: Option<f64>,
    /// Frequency reuse factor, 1 or 3.
    #[arg(long)]
    pub frf: Option<u32>,
    /// Hex rings around the center beam [default: 4 for FRF 1, 6 for FRF 3].
    #[arg(long)]
    pub rings: Option<u32>,
    #[arg(long)]
    pub ues_per_beam: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Histogram bins for the slant-range statistics.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Points per hexagon edge in the projected footprints.
    #[arg(long, default_value_t = DEFAULT_EDGE_SAMPLES)]
    pub edge_samples: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn load_config_file(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    let value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(value).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

impl ScenarioArgs {
    /// Resolves flags into a validated config. Explicit flags override the
    /// preset or config file.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let mut config = if let Some(path) = &self.config {
            load_config_file(path)?
        } else if let Some(name) = &self.preset {
            parse_preset(name)?
        } else {
            let beamwidth = self
                .beamwidth_deg
                .ok_or_else(|| Error::InvalidConfig("either --preset or --beamwidth-deg is required".into()))?;
            let altitude = self
                .altitude_km
                .ok_or_else(|| Error::InvalidConfig("--altitude-km is required without --preset".into()))?;
            ScenarioConfig {
                beamwidth_3db_deg: beamwidth,
                altitude_km: altitude,
                ..preset(ParameterSet::Set1, Scenario::LeoS)
            }
        };

        if let Some(x) = self.beamwidth_deg {
            config.beamwidth_3db_deg = x;
        }
        if let Some(x) = self.altitude_km {
            config.altitude_km = x;
        }
        if let Some(x) = self.earth_radius_km {
            config.earth_radius_km = x;
        }
        if let Some(x) = self.elevation_deg {
            config.center_elevation_deg = x;
        }
        if let Some(x) = self.frf {
            config.frf = Frf::try_from(x)?;
            if self.rings.is_none() {
                config.rings = config.frf.default_rings();
            }
        }
        if let Some(x) = self.rings {
            config.rings = x;
        }
        if let Some(x) = self.ues_per_beam {
            config.ues_per_beam = x;
        }
        if let Some(x) = self.seed {
            config.seed = x;
        }
        config.validate()?;
        Ok(config)
    }
}

// ============================================================================
// Run
// ============================================================================

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ScenarioConfig,
    pub derived: ScenarioSummary,
    pub bins: usize,
    pub edge_samples: usize,
    pub rng: String,
    pub seed: u64,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub bins: usize,
    pub edge_samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { bins: DEFAULT_BINS, edge_samples: DEFAULT_EDGE_SAMPLES }
    }
}

/// In-memory result of the layout -> drop -> project -> analyze pipeline.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub summary: ScenarioSummary,
    pub layout: BeamLayout,
    pub ues: Vec<UeRecord>,
    pub stats: Vec<BeamStats>,
    pub footprints: Vec<Footprint>,
}

pub fn run_pipeline(config: &ScenarioConfig, opts: &RunOptions) -> Result<PipelineOutput> {
    let summary = scenario_summary(config)?;
    let sat = config.satellite();
    let layout = build_layout(config)?;
    let ues = drop_ues(&layout, &sat, config.ues_per_beam, config.seed)?;
    let stats = beam_stats(&ues, opts.bins)?;
    let footprints = project_footprints(&layout, &sat, opts.edge_samples)?;
    Ok(PipelineOutput { summary, layout, ues, stats, footprints })
}

/// Formats with 9 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent of the rounded scientific form accounts for carries (9.99.. -> 10.0)
    let sci = format!("{x:.8e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..9).contains(&exp) {
        format!("{x:.prec$}", prec = (8 - exp) as usize)
    } else {
        sci
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Serialize(format!("{other:?}")),
    }
}

fn write_beams(path: &Path, layout: &BeamLayout) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(BEAMS_HEADER).map_err(&err)?;
    for b in &layout.beams {
        w.write_record([
            b.id.to_string(),
            b.index.q.to_string(),
            b.index.r.to_string(),
            fmt_sig(b.center_uv.u),
            fmt_sig(b.center_uv.v),
            b.color.to_string(),
            b.role.as_str().to_string(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_ues(path: &Path, ues: &[UeRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(UES_HEADER).map_err(&err)?;
    for ue in ues {
        w.write_record([
            ue.ue_id.to_string(),
            ue.beam_id.to_string(),
            fmt_sig(ue.uv.u),
            fmt_sig(ue.uv.v),
            fmt_sig(ue.ground.x),
            fmt_sig(ue.ground.y),
            fmt_sig(ue.ground.z),
            fmt_sig(ue.slant_range_km),
            fmt_sig(ue.elevation_deg),
            fmt_sig(ue.zod_deg),
            fmt_sig(ue.aod_deg),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_footprints(path: &Path, footprints: &[Footprint]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(FOOTPRINTS_HEADER).map_err(&err)?;
    for fp in footprints {
        for (i, p) in fp.boundary.iter().enumerate() {
            w.write_record([fp.beam_id.to_string(), i.to_string(), fmt_sig(p.x), fmt_sig(p.y), fmt_sig(p.z)])
                .map_err(&err)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct FootprintArea {
    beam_id: usize,
    tangent_plane_area_km2: f64,
}

#[derive(Serialize)]
struct StatsFile<'a> {
    summary: &'a ScenarioSummary,
    ue_count: usize,
    bins: usize,
    global_min_slant_km: f64,
    global_max_slant_km: f64,
    beams: &'a [BeamStats],
    footprint_areas: Vec<FootprintArea>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs the pipeline and writes every output file into `out_dir`.
pub fn run(config: &ScenarioConfig, opts: &RunOptions, out_dir: &Path) -> Result<RunManifest> {
    let output = run_pipeline(config, opts)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    write_beams(&out_dir.join("beams.csv"), &output.layout)?;
    write_ues(&out_dir.join("ues.csv"), &output.ues)?;
    write_footprints(&out_dir.join("footprints.csv"), &output.footprints)?;

    let (global_min, global_max) = global_slant_range(&output.stats).ok_or(Error::EmptyInput)?;
    let stats = StatsFile {
        summary: &output.summary,
        ue_count: output.ues.len(),
        bins: opts.bins,
        global_min_slant_km: global_min,
        global_max_slant_km: global_max,
        beams: &output.stats,
        footprint_areas: output
            .footprints
            .iter()
            .map(|fp| FootprintArea { beam_id: fp.beam_id, tangent_plane_area_km2: fp.tangent_plane_area_km2() })
            .collect(),
    };
    write_json(&out_dir.join("stats.json"), &stats)?;

    let manifest = RunManifest {
        config: config.clone(),
        derived: output.summary,
        bins: opts.bins,
        edge_samples: opts.edge_samples,
        rng: RNG_NAME.to_string(),
        seed: config.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: ["beams.csv", "ues.csv", "footprints.csv", "stats.json", "manifest.json"]
            .map(String::from)
            .to_vec(),
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Dispatches a parsed command line. Returns text for stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Run(args) => {
            let config = args.scenario.resolve()?;
            let opts = RunOptions { bins: args.bins, edge_samples: args.edge_samples };
            let manifest = run(&config, &opts, &args.out)?;
            Ok(format!(
                "wrote {} beams, {} UEs to {}",
                manifest.derived.beam_count,
                manifest.derived.beam_count * config.ues_per_beam,
                args.out.display()
            ))
        }
        Command::Summary(args) => {
            let summary = scenario_summary(&args.resolve()?)?;
            serde_json::to_string_pretty(&summary).map_err(|e| Error::Serialize(e.to_string()))
        }
        Command::Presets => {
            let mut lines = Vec::new();
            for set in ParameterSet::ALL {
                for scenario in Scenario::ALL {
                    let cfg = preset(set, scenario);
                    lines.push(format!(
                        "{}:{:<7} beamwidth {:>7} deg  altitude {:>6} km",
                        set.name(),
                        scenario.name(),
                        cfg.beamwidth_3db_deg,
                        cfg.altitude_km
                    ));
                }
            }
            Ok(lines.join("\n"))
        }
    }
}
