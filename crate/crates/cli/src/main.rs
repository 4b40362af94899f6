use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use confbc::channels::{example_channel, Channel, DmBroadcastChannel, ExampleParams, GaussianBc};
use confbc::dm_bounds::{
    degraded_message_envelope, more_capable_envelope, outer_envelope, substitution_envelope, AuxFactorization,
    InnerTerms, OuterGrid,
};
use confbc::export::{
    boundary_2d, boundary_csv, boundary_svg, envelope_csv, format_number, parse_boundary_csv,
    parse_envelope_csv, BOUNDARY_HEADER,
};
use confbc::gaussian::{
    beta_envelope, correlated_degraded_capacity, correlated_one_sided_capacity, decode_forward_region,
    half_bit_degraded_region, half_bit_one_sided_region, outer_envelope_g,
};
use confbc::regions::{fm_eliminate_all, polytope_supports, DirectionSet, LinearSystem, RegionEnvelope};
use confbc::suites::{run_suite, SuiteConfig};
use confbc::Error;

/// Most points a sweep may evaluate.
const MAX_SWEEP_POINTS: usize = 10_000;

#[derive(Parser)]
#[command(name = "confbc", version, about = "Rate regions of broadcast channels with conferencing receivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a region and export its support function.
    Region(RegionArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Vary one channel parameter and record a metric.
    Sweep(SweepArgs),
    /// Eliminate variables from a linear system.
    Fm(FmArgs),
    /// Draw 2-D region CSVs as one SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct ChannelArgs {
    /// Channel description (JSON).
    #[arg(long, conflicts_with = "example", required_unless_present = "example")]
    channel: Option<PathBuf>,
    /// A built-in example channel: dm-ex1, dm-ex2, g-mirror, g-noise-at-2, g-noise-at-1.
    #[arg(long)]
    example: Option<String>,
    /// P(Z = 0) of the binary examples.
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    /// Input power of the Gaussian examples.
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// Link capacity from receiver 1 to 2; overrides the channel file.
    #[arg(long)]
    c12: Option<f64>,
    /// Link capacity from receiver 2 to 1; overrides the channel file.
    #[arg(long)]
    c21: Option<f64>,
}

impl ChannelArgs {
    fn load(&self) -> anyhow::Result<Channel> {
        let ch = match (&self.channel, &self.example) {
            (Some(path), _) => Channel::from_json(&read(path)?)?,
            (None, Some(name)) => example_channel(
                name,
                ExampleParams { p: self.p, power: self.power, c12: self.c12.unwrap_or(0.0), c21: self.c21.unwrap_or(0.0) },
            )?,
            (None, None) => bail!("give --channel or --example"),
        };
        Ok(match ch {
            Channel::Dm(d) => {
                let (c12, c21) = (self.c12.unwrap_or(d.c12), self.c21.unwrap_or(d.c21));
                Channel::Dm(d.with_links(c12, c21)?)
            }
            Channel::Gaussian(g) => {
                let g = GaussianBc { c12: self.c12.unwrap_or(g.c12), c21: self.c21.unwrap_or(g.c21), ..g };
                g.validate()?;
                Channel::Gaussian(g)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Bound {
    /// Outer bound (both channel kinds).
    Outer,
    /// Inner bound, receiver 2 quantizes first.
    Inner1,
    /// Inner bound, receiver 1 quantizes first.
    Inner2,
    /// Degraded-message capacity of a semi-deterministic channel, (R0, R1).
    DegradedMsg,
    /// Capacity with only the 2 -> 1 link, semi-deterministic more-capable channels.
    MoreCapable,
    /// Gaussian degraded-message capacity, perfectly correlated noises, (R0, R1).
    CorrDegraded,
    /// Gaussian capacity with only the 2 -> 1 link, perfectly correlated noises.
    CorrOneSided,
    /// Gaussian half-bit region with degraded message sets, (R0, R1).
    HalfBitDegraded,
    /// Gaussian half-bit region with only the 2 -> 1 link.
    HalfBitOneSided,
    /// Gaussian decode-and-forward inner region.
    Df,
    /// Degraded-message region without the joint-observation row, (R0, R1).
    Cutset,
}

impl Bound {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    /// Regions stated over `(R0, R1)` only.
    fn is_planar(self) -> bool {
        matches!(self, Bound::DegradedMsg | Bound::CorrDegraded | Bound::HalfBitDegraded | Bound::Cutset)
    }
}

#[derive(Args)]
struct GridArgs {
    /// Grid step over distributions (discrete) or power splits (Gaussian).
    #[arg(long)]
    grid: Option<f64>,
    /// Number of directions; defaults to 181 (2-D) or 512 (3-D).
    #[arg(long)]
    dirs: Option<usize>,
    /// Alphabet size of the auxiliary V for grid searches; defaults to |X| + 2.
    #[arg(long)]
    v_card: Option<usize>,
    /// Alphabet size of the auxiliary U for the outer bound; defaults to |X| + 2.
    #[arg(long)]
    u_card: Option<usize>,
    /// Explicit auxiliary factorization (JSON) for inner1/inner2.
    #[arg(long)]
    factorization: Option<PathBuf>,
    /// Restrict a 3-D region to R2 = 0 (the only accepted value is 0).
    #[arg(long)]
    r2: Option<f64>,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, value_enum)]
    bound: Bound,
    #[command(flatten)]
    grid: GridArgs,
    /// Envelope CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG of the 2-D boundary.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Boundary vertices as CSV.
    #[arg(long)]
    boundary: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    seed: u64,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Vary {
    Lambda,
    Power,
    C12,
    C21,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Metric {
    /// Outer minus decode-and-forward support along (1,1,1), Gaussian only.
    SumrateGap,
    /// Support of --bound along --dir.
    DirSupport,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, value_enum)]
    vary: Vary,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    /// Number of evenly spaced values, endpoints included.
    #[arg(long)]
    points: usize,
    #[arg(long, value_enum)]
    metric: Metric,
    #[arg(long, value_enum, default_value = "outer")]
    bound: Bound,
    /// Direction for dir-support, comma separated.
    #[arg(long, default_value = "1,0,0")]
    dir: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FmArgs {
    /// Linear system (JSON).
    system: PathBuf,
    /// Variables to eliminate, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    eliminate: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Envelope or boundary CSVs of 2-D regions.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    svg: PathBuf,
    /// One label per input; file stems by default.
    #[arg(long, value_delimiter = ',')]
    labels: Vec<String>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn direction_set(dim: usize, n: Option<usize>) -> anyhow::Result<DirectionSet> {
    Ok(match (dim, n) {
        (2, None) => DirectionSet::default_2d(),
        (2, Some(n)) => DirectionSet::fan_2d(n)?,
        (_, None) => DirectionSet::default_3d(),
        (_, Some(n)) => DirectionSet::fibonacci_3d(n)?,
    })
}

fn output_dim(bound: Bound, grid: &GridArgs) -> anyhow::Result<usize> {
    match grid.r2 {
        Some(v) if v != 0.0 => bail!("--r2 only accepts 0"),
        Some(_) => Ok(2),
        None if bound.is_planar() => Ok(2),
        None => Ok(3),
    }
}

fn dm_only(ch: &Channel, bound: Bound) -> Result<&DmBroadcastChannel, Error> {
    match ch {
        Channel::Dm(d) => Ok(d),
        Channel::Gaussian(_) => Err(Error::NotApplicable(format!("{} needs a discrete channel", bound.name()))),
    }
}

fn gaussian_only(ch: &Channel, bound: Bound) -> Result<&GaussianBc, Error> {
    match ch {
        Channel::Gaussian(g) => Ok(g),
        Channel::Dm(_) => Err(Error::NotApplicable(format!("{} needs a Gaussian channel", bound.name()))),
    }
}

/// The envelope of `bound` on `ch` over `dirs`.
fn compute(ch: &Channel, bound: Bound, grid: &GridArgs, dirs: &DirectionSet) -> anyhow::Result<RegionEnvelope> {
    let dm_step = grid.grid.unwrap_or(0.05);
    let g_step = grid.grid.unwrap_or(1e-2);
    let beta_step = grid.grid.unwrap_or(1e-3);
    let env = match bound {
        Bound::Outer => match ch {
            Channel::Dm(d) => outer_envelope(
                d,
                grid.grid.unwrap_or(0.25),
                dirs,
                OuterGrid { u_card: grid.u_card, v_card: grid.v_card },
            )?,
            Channel::Gaussian(g) => outer_envelope_g(g, g_step, dirs)?,
        },
        Bound::Inner1 | Bound::Inner2 => {
            let d = dm_only(ch, bound)?;
            match &grid.factorization {
                Some(path) => {
                    let f = AuxFactorization::from_json(&read(path)?)?;
                    let t = InnerTerms::evaluate(d, &f)?;
                    let poly = if bound == Bound::Inner1 { t.inner1()? } else { t.inner2()? };
                    let poly = if dirs.dim() == 2 { poly.project_r2_zero()? } else { poly };
                    RegionEnvelope::from_parts(dirs.clone(), polytope_supports(&poly, dirs)?)?
                }
                None if bound == Bound::Inner1 => {
                    substitution_envelope(d, dm_step, grid.v_card.unwrap_or(d.x_card() + 2), dirs)?
                }
                None => bail!(Error::NotApplicable("inner2 needs --factorization".into())),
            }
        }
        Bound::DegradedMsg | Bound::Cutset => {
            let d = dm_only(ch, bound)?;
            let v = grid.v_card.unwrap_or(d.x_card() + 2);
            degraded_message_envelope(d, dm_step, v, dirs, bound == Bound::DegradedMsg)?
        }
        Bound::MoreCapable => {
            let d = dm_only(ch, bound)?;
            let v = grid.v_card.unwrap_or(d.x_card() + 2);
            let dirs3 = if dirs.dim() == 3 { dirs.clone() } else { DirectionSet::default_3d() };
            let (env, report) = more_capable_envelope(d, dm_step, v, &dirs3)?;
            if report.min_gap < 0.0 {
                eprintln!(
                    "warning: channel is not more capable (I(X;Y1) - I(X;Y2) = {} at P(x) = {:?}); the region is not the capacity",
                    format_number(report.min_gap),
                    report.worst_input
                );
            }
            if dirs.dim() == 2 {
                bail!(Error::NotApplicable("more-capable region is reported in 3-D only".into()));
            }
            env
        }
        Bound::CorrDegraded => {
            let g = *gaussian_only(ch, bound)?;
            beta_envelope(beta_step, dirs, |b| correlated_degraded_capacity(&g, b))?
        }
        Bound::CorrOneSided => {
            let g = *gaussian_only(ch, bound)?;
            beta_envelope(beta_step, dirs, |b| correlated_one_sided_capacity(&g, b))?
        }
        Bound::HalfBitDegraded => {
            let g = *gaussian_only(ch, bound)?;
            beta_envelope(beta_step, dirs, |b| half_bit_degraded_region(&g, b))?
        }
        Bound::HalfBitOneSided => {
            let g = *gaussian_only(ch, bound)?;
            beta_envelope(beta_step, dirs, |b| half_bit_one_sided_region(&g, b))?
        }
        Bound::Df => {
            let g = *gaussian_only(ch, bound)?;
            beta_envelope(beta_step, dirs, |b| decode_forward_region(&g, b))?
        }
    };
    Ok(env)
}

fn region(args: &RegionArgs) -> anyhow::Result<()> {
    let ch = args.channel.load()?;
    let dim = output_dim(args.bound, &args.grid)?;
    let dirs = direction_set(dim, args.grid.dirs)?;
    let env = compute(&ch, args.bound, &args.grid, &dirs)?;
    write_or_print(args.out.as_deref(), &envelope_csv(&env))?;
    if args.svg.is_some() || args.boundary.is_some() {
        if dim != 2 {
            bail!("boundaries are drawn for 2-D regions; add --r2 0");
        }
        let pts = boundary_2d(&env)?;
        if let Some(p) = &args.svg {
            fs::write(p, boundary_svg(&[(args.bound.name(), pts.clone())]))?;
        }
        if let Some(p) = &args.boundary {
            fs::write(p, boundary_csv(&pts))?;
        }
    }
    // Canonical supports go to stderr when the CSV itself is on stdout.
    let mut summary = String::new();
    for d in DirectionSet::canonical_normals(dim) {
        let s = env.support_along(&d[..dim])?;
        let label: Vec<String> = d[..dim].iter().map(|x| format_number(*x)).collect();
        summary.push_str(&format!("support ({}) = {}\n", label.join(","), format_number(s)));
    }
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let report = run_suite(&args.suite, &SuiteConfig { seed: args.seed })?;
    for c in &report.checks {
        println!(
            "{} {} (measured {}, threshold {})",
            if c.pass { "pass" } else { "FAIL" },
            c.description,
            format_number(c.measured),
            format_number(c.threshold)
        );
    }
    println!("{}: {} in {:.2?}", report.suite, if report.pass { "pass" } else { "FAIL" }, report.wall_time);
    if let Some(p) = &args.json {
        fs::write(p, report.to_json()?)?;
    }
    Ok(report.pass)
}

fn parse_dir(text: &str, dim: usize) -> anyhow::Result<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!(Error::Parse(format!("direction `{text}`: {e}")))))
        .collect::<anyhow::Result<_>>()?;
    if v.len() != dim && !(v.len() == 3 && dim == 2 && v[2] == 0.0) {
        bail!(Error::InvalidDirection(format!("`{text}` is not a {dim}-D direction")));
    }
    Ok(v[..dim].to_vec())
}

fn vary_channel(ch: &Channel, vary: Vary, value: f64) -> anyhow::Result<Channel> {
    Ok(match (ch, vary) {
        (Channel::Gaussian(g), Vary::Lambda) => Channel::Gaussian(GaussianBc::new(g.a, g.b, value, g.power, g.c12, g.c21)?),
        (Channel::Gaussian(g), Vary::Power) => Channel::Gaussian(GaussianBc::new(g.a, g.b, g.lambda, value, g.c12, g.c21)?),
        (Channel::Gaussian(g), Vary::C12) => Channel::Gaussian(GaussianBc::new(g.a, g.b, g.lambda, g.power, value, g.c21)?),
        (Channel::Gaussian(g), Vary::C21) => Channel::Gaussian(GaussianBc::new(g.a, g.b, g.lambda, g.power, g.c12, value)?),
        (Channel::Dm(d), Vary::C12) => Channel::Dm(d.clone().with_links(value, d.c21)?),
        (Channel::Dm(d), Vary::C21) => Channel::Dm(d.clone().with_links(d.c12, value)?),
        (Channel::Dm(_), _) => bail!(Error::NotApplicable("discrete channels can only vary c12 or c21".into())),
    })
}

fn sweep(args: &SweepArgs) -> anyhow::Result<()> {
    if !(args.from.is_finite() && args.to.is_finite()) {
        bail!(Error::InvalidParameter("sweep range must be finite".into()));
    }
    if args.points == 0 || args.from > args.to {
        bail!(Error::InvalidParameter("empty sweep range".into()));
    }
    if args.points > MAX_SWEEP_POINTS {
        bail!(Error::GridTooLarge { points: args.points as u128, limit: MAX_SWEEP_POINTS as u128 });
    }
    let base = args.channel.load()?;
    let vary = args.vary.to_possible_value().expect("named").get_name().to_string();
    let metric = match args.metric {
        Metric::SumrateGap => "sumrate_gap_bits",
        Metric::DirSupport => "support_bits",
    };
    let mut out = format!("{vary},{metric}\n");
    for k in 0..args.points {
        let value = if args.points == 1 {
            args.from
        } else {
            args.from + (args.to - args.from) * k as f64 / (args.points - 1) as f64
        };
        let ch = vary_channel(&base, args.vary, value)?;
        let y = match args.metric {
            Metric::SumrateGap => {
                let g = gaussian_only(&ch, Bound::Df)?;
                let dirs = DirectionSet::new(3, [[1.0, 1.0, 1.0]])?;
                let step = args.grid.grid.unwrap_or(1e-2);
                let outer = outer_envelope_g(g, step, &dirs)?;
                let df = beta_envelope(step, &dirs, |b| decode_forward_region(g, b))?;
                outer.support_along(&[1.0, 1.0, 1.0])? - df.support_along(&[1.0, 1.0, 1.0])?
            }
            Metric::DirSupport => {
                let dim = output_dim(args.bound, &args.grid)?;
                let dir = parse_dir(&args.dir, dim)?;
                let mut d3 = [0.0; 3];
                d3[..dim].copy_from_slice(&dir);
                let dirs = DirectionSet::new(dim, [d3])?;
                compute(&ch, args.bound, &args.grid, &dirs)?.support_along(&dir)?
            }
        };
        out.push_str(&format!("{},{}\n", format_number(value), format_number(y)));
    }
    write_or_print(args.out.as_deref(), &out)
}

fn fm(args: &FmArgs) -> anyhow::Result<()> {
    let sys = LinearSystem::from_json(&read(&args.system)?)?;
    let names: Vec<&str> = args.eliminate.iter().map(|s| s.trim()).collect();
    let reduced = fm_eliminate_all(&sys, &names)?;
    let mut text = reduced.to_json()?;
    text.push('\n');
    write_or_print(args.out.as_deref(), &text)
}

fn plot(args: &PlotArgs) -> anyhow::Result<()> {
    if !args.labels.is_empty() && args.labels.len() != args.inputs.len() {
        bail!("give one label per input");
    }
    let mut regions = Vec::new();
    for (i, path) in args.inputs.iter().enumerate() {
        let text = read(path)?;
        let pts = if text.trim_start().starts_with(BOUNDARY_HEADER) {
            parse_boundary_csv(&text)?
        } else {
            boundary_2d(&parse_envelope_csv(&text)?)?
        };
        let label = match args.labels.get(i) {
            Some(l) => l.clone(),
            None => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        };
        regions.push((label, pts));
    }
    fs::write(&args.svg, boundary_svg(&regions)).with_context(|| format!("writing {}", args.svg.display()))
}

/// Exit codes: 2 for a bound that does not apply, 3 for malformed input
/// (including bad arguments), 4 for an oversized grid, 1 for anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NotApplicable(_)) => 2,
        Some(Error::Json(_) | Error::Parse(_)) => 3,
        Some(Error::GridTooLarge { .. }) => 4,
        _ => 1,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("CONFBC_THREADS") {
        let n: usize = v.parse().with_context(|| format!("CONFBC_THREADS = `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Region(a) => region(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Fm(a) => fm(a).map(|_| true),
        Command::Plot(a) => plot(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage mistakes count as malformed input; help and version are not errors.
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
