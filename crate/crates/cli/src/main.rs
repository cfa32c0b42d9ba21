use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use tpe_core::algebra::PrimeField;
use tpe_core::curve::count_points_of_reduction;
use tpe_core::families::{
    generate_cd, generate_dd, generate_xpx, sweep_cd, Census, FamilyOutcome, GeneratedDocument, RankFixture,
};
use tpe_core::jacobian::{torsion_decide, TorsionVerdict, DEFAULT_HEIGHT_CEILING_DIGITS};
use tpe_core::tpe::wire::{CurveWire, DocumentWire, PointWire, TowerWire};
use tpe_core::tpe::{theorem_conclusion, verify_tpe, Conclusion, RankAssertion, TpeDocument, VerificationReport, VerifyOptions};

const VERIFIED: u8 = 0;
const FAILED: u8 = 1;
const INAPPLICABLE: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "tpe", version, about = "Verify torsion packet envelopes for hyperelliptic curves over Q")]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Use the split place with this index (canonical order) instead of the document's.
    #[arg(long, global = true)]
    place: Option<usize>,
    /// Abort exact Jacobian arithmetic once a coefficient exceeds this many decimal digits.
    #[arg(long, global = true, env = "TPE_HEIGHT_CEILING")]
    height_ceiling: Option<u64>,
    /// Reserved for randomized test harnesses; the verifier itself is deterministic.
    #[arg(long, global = true, hide = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a TPE document and state what it proves.
    Verify { doc: PathBuf },
    /// Generate and verify the document for a curve family.
    #[command(subcommand)]
    Family(Family),
    /// Count points of the reduction of y^2 = f(x) at p.
    Count {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Decide whether P - P_inf is torsion over a tower.
    Torsion {
        #[arg(long)]
        curve: PathBuf,
        /// `x,y` with tower expressions, or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        tower: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Run a family over a parameter range.
    #[command(subcommand)]
    Sweep(Sweep),
}

#[derive(Subcommand)]
enum Family {
    /// y^2 = x^5 + d at p = 11.
    Cd {
        #[arg(long, allow_hyphen_values = true)]
        d: BigInt,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// y^2 = x^(p-1) + d x^((p-1)/2) - 1 at p.
    Dd {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: BigInt,
        #[command(flatten)]
        rank: RankArgs,
    },
    /// y^2 = x^p - x at p.
    Xpx {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        rank: RankArgs,
    },
}

#[derive(clap::Args)]
struct RankArgs {
    /// Assert rank J(Q) = 0 on the caller's authority.
    #[arg(long, conflicts_with = "rank_fixture")]
    rank0: bool,
    /// Take the rank assertion from a fixture file, when it lists the parameter.
    #[arg(long)]
    rank_fixture: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sweep {
    /// Every d in A..B (inclusive) with d = 1, 7, 9 mod 11.
    Cd {
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Defaults to the shipped table.
        #[arg(long)]
        rank_fixture: Option<PathBuf>,
    },
}

struct Output {
    code: u8,
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for inapplicable families here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(INPUT_ERROR);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("report serializes"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let opts = VerifyOptions {
        place_index: cli.place,
        height_ceiling_digits: cli.height_ceiling.unwrap_or(DEFAULT_HEIGHT_CEILING_DIGITS),
    };
    match &cli.command {
        Command::Verify { doc } => {
            let doc = TpeDocument::from_json(&read(doc)?).with_context(|| format!("reading {}", doc.display()))?;
            Ok(verify_output(&doc, &opts, Vec::new(), None))
        }
        Command::Family(f) => family(f, &opts),
        Command::Count { curve, p } => count(curve, *p),
        Command::Torsion { curve, point, tower, p } => torsion(curve, point, tower, *p, &opts),
        Command::Sweep(Sweep::Cd { range, rank_fixture }) => {
            let (lo, hi) = parse_range(range)?;
            let fixture = match rank_fixture {
                Some(path) => load_fixture(path)?,
                None => RankFixture::table1(),
            };
            let census = sweep_cd(lo, hi, &fixture, &opts)?;
            Ok(census_output(&census))
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_fixture(path: &Path) -> anyhow::Result<RankFixture> {
    RankFixture::from_json(&read(path)?).with_context(|| format!("reading {}", path.display()))
}

/// Values too large for a fixture never match one.
fn rank_assertion(args: &RankArgs, family: &str, p: Option<u64>, value: &BigInt) -> anyhow::Result<Option<RankAssertion>> {
    if args.rank0 {
        return Ok(Some(RankAssertion::rank_zero("asserted on the command line (--rank0)")));
    }
    let Some(path) = &args.rank_fixture else { return Ok(None) };
    let fixture = load_fixture(path)?;
    let Ok(v) = i64::try_from(value) else { return Ok(None) };
    Ok(fixture.lookup(family, p, v).map(|e| RankAssertion::rank_zero(e.source.clone())))
}

fn family(f: &Family, opts: &VerifyOptions) -> anyhow::Result<Output> {
    let (gen, rank) = match f {
        Family::Cd { d, rank } => {
            let gen = match generate_cd(d)? {
                FamilyOutcome::Document(g) => g,
                FamilyOutcome::Inapplicable(i) => {
                    let text = format!("inapplicable: {}\n", i.reason);
                    return Ok(Output { code: INAPPLICABLE, json: json!({ "inapplicable": i }), text });
                }
            };
            (gen, rank_assertion(rank, "cd", None, d)?)
        }
        Family::Dd { p, d, rank } => {
            (generate_dd(*p, d)?, rank_assertion(rank, "dd", Some(*p), d)?)
        }
        Family::Xpx { p, rank } => {
            (generate_xpx(*p)?, rank_assertion(rank, "xpx", None, &BigInt::from(*p))?)
        }
    };
    let GeneratedDocument { mut doc, warnings } = gen;
    if let Some(r) = rank {
        doc = doc.with_rank_assertion(r);
    }
    Ok(verify_output(&doc, opts, warnings, Some(DocumentWire::from_document(&doc))))
}

fn verify_output(doc: &TpeDocument, opts: &VerifyOptions, warnings: Vec<String>, generated: Option<DocumentWire>) -> Output {
    let report = verify_tpe(doc, opts);
    let conclusion = report.passed.then(|| theorem_conclusion(&report, doc).expect("passing report concludes"));
    let mut text = String::new();
    for w in &warnings {
        writeln!(text, "warning: {w}").unwrap();
    }
    text.push_str(&report_text(&report));
    match &conclusion {
        Some(c) => text.push_str(&conclusion_text(c)),
        None => text.push_str("no conclusion: verification failed\n"),
    }
    let mut json = json!({ "report": report, "conclusion": conclusion, "warnings": warnings });
    if let Some(d) = generated {
        json["document"] = serde_json::to_value(d).expect("document serializes");
    }
    Output { code: if report.passed { VERIFIED } else { FAILED }, json, text }
}

fn mark(ok: bool) -> &'static str {
    if ok { "PASS" } else { "FAIL" }
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "p = {}, place {}", r.p, r.place.as_deref().unwrap_or("(none)")).unwrap();
    let count = r.reduced_point_count.map_or("?".to_string(), |n| n.to_string());
    writeln!(s, "#T = {}, #C~(F_w) = {count}", r.torsion_set_size).unwrap();
    for c in &r.conditions {
        writeln!(s, "[{}] {}: {}", mark(c.passed), c.condition, c.evidence).unwrap();
    }
    for e in &r.entries {
        let order = e.order.map(|o| format!(", {o}")).unwrap_or_default();
        writeln!(s, "  [{}] #{} {} {}{order}: {}", mark(e.passed), e.index, e.certificate, e.points.join(" "), e.detail)
            .unwrap();
    }
    writeln!(s, "verification {}", if r.passed { "passed" } else { "FAILED" }).unwrap();
    s
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn conclusion_text(c: &Conclusion) -> String {
    let mut s = String::new();
    writeln!(s, "{}, T = {{{}}}", c.statement, c.torsion_set.join(", ")).unwrap();
    writeln!(s, "rational members of T: {{{}}}", join(&c.rational_members)).unwrap();
    if let Some(r) = &c.rank_zero {
        writeln!(s, "C(Q) = {{{}}} [{}]", join(&r.points), r.provenance).unwrap();
    }
    s
}

fn count(curve: &Path, p: u64) -> anyhow::Result<Output> {
    let wire: CurveWire = serde_json::from_str(&read(curve)?).with_context(|| format!("parsing {}", curve.display()))?;
    let curve = wire.to_curve()?;
    let field = PrimeField::new(p)?;
    let good = curve.has_good_reduction(p)?;
    let n = count_points_of_reduction(&field, &curve.reduce_f(&field)?, curve.model());
    let text = if good {
        format!("#C~(F_{p}) = {n}\n")
    } else {
        format!("#C~(F_{p}) = {n} (bad reduction: the reduction is singular)\n")
    };
    Ok(Output { code: VERIFIED, json: json!({ "p": p, "count": n, "good_reduction": good }), text })
}

fn torsion(curve: &Path, point: &str, tower: &Path, p: u64, opts: &VerifyOptions) -> anyhow::Result<Output> {
    let wire: CurveWire = serde_json::from_str(&read(curve)?).with_context(|| format!("parsing {}", curve.display()))?;
    let curve = wire.to_curve()?;
    let tw: TowerWire = serde_json::from_str(&read(tower)?).with_context(|| format!("parsing {}", tower.display()))?;
    let tower = tw.to_tower()?;
    let point = PointWire::parse_spec(point)?.to_point(&tower)?;
    let places = tower.split_places(p)?;
    let index = opts.place_index.unwrap_or(0);
    let Some(w) = places.get(index) else {
        bail!("p = {p} has {} split places, index {index} requested", places.len());
    };
    let verdict = torsion_decide(&point, &curve, &tower, w, Some(opts.height_ceiling_digits))?;
    let (code, kind, summary) = match &verdict {
        TorsionVerdict::CertifiedTorsion(n) => (VERIFIED, "certified_torsion", format!("torsion of order {n}")),
        TorsionVerdict::NotTorsion { reduced_order } => (
            FAILED,
            "not_torsion",
            format!("not torsion: the reduction has order {reduced_order} but the exact multiple is nonzero"),
        ),
        TorsionVerdict::Undecidable(why) => (FAILED, "undecidable", format!("undecidable: {why}")),
    };
    let place = tower.describe_place(w);
    let order = match verdict {
        TorsionVerdict::CertifiedTorsion(n) | TorsionVerdict::NotTorsion { reduced_order: n } => Some(n),
        TorsionVerdict::Undecidable(_) => None,
    };
    let json = json!({ "point": point.display(&tower), "place": place, "verdict": kind, "order": order });
    Ok(Output { code, json, text: format!("{} at {place}: {summary}\n", point.display(&tower)) })
}

fn parse_range(s: &str) -> anyhow::Result<(i64, i64)> {
    let (a, b) = s.split_once("..").with_context(|| format!("range `{s}` is not A..B"))?;
    let lo: i64 = a.trim().parse().with_context(|| format!("bad range start `{a}`"))?;
    let hi: i64 = b.trim().parse().with_context(|| format!("bad range end `{b}`"))?;
    if lo > hi {
        bail!("empty range {lo}..{hi}");
    }
    Ok((lo, hi))
}

fn census_output(c: &Census) -> Output {
    let mut text = String::new();
    writeln!(text, "d in {}..{}, d = 1, 7, 9 mod 11: {} curves", c.range[0], c.range[1], c.rows.len()).unwrap();
    for r in c.rows.iter().filter(|r| !r.verified || !r.agrees) {
        writeln!(text, "  d = {}: verified {}, agrees {} {}", r.d, r.verified, r.agrees, r.warnings.join("; ")).unwrap();
    }
    writeln!(text, "rank J(Q) = 0 with a verified envelope:").unwrap();
    for (label, values) in &c.table {
        writeln!(text, "  d = {label:>2} mod 11 ({:>2}): {}", values.len(), join(values)).unwrap();
    }
    writeln!(text, "rank source: {}", c.provenance.join("; ")).unwrap();
    let ok = c.rows.iter().all(|r| r.verified && r.agrees);
    Output { code: if ok { VERIFIED } else { FAILED }, json: serde_json::to_value(c).expect("census serializes"), text }
}
