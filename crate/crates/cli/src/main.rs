//! `geoclass`: generate classifiers of finite relational theories, list and
//! decode their points, and run the verification suites.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input (unparsable theory,
//! unknown layer, malformed point), 3 generation failure or unreadable bundle.

mod suites;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geoclass_core::classifier::{read_bundle, write_bundle, ClassifierBundle, ParameterSet};
use geoclass_core::forcing::ZetaCheck;
use geoclass_core::oracle::decode::{decode_point, DecodedDisplay, Layer};
use geoclass_core::presentation::json::presentation_to_json;
use geoclass_core::presentation::{check_frame_hom, GenId, Point, Presentation};
use geoclass_core::theory::{parse_theory, TheoryOrientation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "geoclass", version, about = "Finite classifiers of relational geometric theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Lh,
    Ps,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Bijections,
    Descent,
    Zeta,
    Presentations,
}

#[derive(clap::Args)]
struct Source {
    /// A `.gth` theory, or a directory written by `classify --out`.
    input: PathBuf,
    /// Number of parameters. Ignored for bundle directories.
    #[arg(long = "p", default_value_t = 2)]
    p: usize,
    /// Overrides the theory's declared orientation.
    #[arg(long, value_enum)]
    orientation: Option<OrientationArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the classifier and print per-layer counts.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Write the bundle as a JSON tree into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// List the points of a layer with their decoded readings.
    Points {
        #[command(flatten)]
        source: Source,
        /// `objects`, `arrows`, `core` or `E:<sort>`.
        #[arg(long, default_value = "objects")]
        layer: String,
        #[arg(long)]
        json: bool,
    },
    /// Decode one point, given as a bitmask over the layer's generators.
    Decode {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "objects")]
        layer: String,
        /// Decimal, or hexadecimal with a `0x` prefix. Bit i is generator i.
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// First seed of the randomised suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of seeded instances per randomised suite.
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long)]
        json: bool,
        /// Also write `report.json` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise a `report.json` written by `verify`.
    Report {
        report: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// A generated bundle, plus the loaded copy when it came from disk.
struct Input {
    bundle: ClassifierBundle,
    loaded: Option<geoclass_core::classifier::LoadedBundle>,
}

fn load(source: &Source) -> Result<Input, Failure> {
    let path = &source.input;
    if path.is_dir() {
        let loaded = read_bundle(path).map_err(|e| fail(3, e.to_string()))?;
        let orientation = match loaded.manifest.orientation.as_str() {
            "open" => TheoryOrientation::LH,
            "closed" => TheoryOrientation::PS,
            other => return Err(fail(3, format!("manifest.json: unknown orientation `{other}`"))),
        };
        let params = ParameterSet::new(loaded.manifest.parameters, orientation);
        let bundle = ClassifierBundle::generate(&loaded.theory, params).map_err(|e| fail(3, e.to_string()))?;
        return Ok(Input { bundle, loaded: Some(loaded) });
    }
    let text = fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let theory = parse_theory(&text).map_err(|e| {
        let sep = if e.line == 0 { ": " } else { ":" };
        fail(2, format!("{}{sep}{e}", path.display()))
    })?;
    let orientation = match source.orientation {
        Some(OrientationArg::Lh) => TheoryOrientation::LH,
        Some(OrientationArg::Ps) => TheoryOrientation::PS,
        None => theory.orientation,
    };
    let bundle = ClassifierBundle::generate(&theory, ParameterSet::new(source.p, orientation))
        .map_err(|e| fail(3, e.to_string()))?;
    Ok(Input { bundle, loaded: None })
}

fn layer_of<'a>(bundle: &'a ClassifierBundle, name: &str) -> Result<(Layer, &'a Presentation), Failure> {
    let layer = Layer::parse(name).map_err(|e| fail(2, e.to_string()))?;
    let pres = bundle.layer(&layer.name()).ok_or_else(|| fail(2, format!("unknown layer `{name}`")))?;
    Ok((layer, pres))
}

fn plural(n: usize, word: &str) -> String {
    format!("{n} {word}{}", if n == 1 { "" } else { "s" })
}

fn mask_hex(pt: &Point) -> String {
    let mut digits = vec![0u8; pt.len().div_ceil(4).max(1)];
    for g in pt.true_gens() {
        digits[g.index() / 4] |= 1 << (g.index() % 4);
    }
    let mut s: String = digits.iter().rev().map(|d| char::from_digit(u32::from(*d), 16).unwrap()).collect();
    let trimmed = s.trim_start_matches('0').len().max(1);
    s.replace_range(..s.len() - trimmed, "");
    format!("0x{s}")
}

fn parse_mask(text: &str, len: usize) -> Result<Point, Failure> {
    let bad = || fail(2, format!("`{text}` is not a bitmask"));
    let bits: Vec<usize> = if let Some(hex) = text.strip_prefix("0x") {
        let mut bits = Vec::new();
        for (i, c) in hex.chars().rev().enumerate() {
            let d = c.to_digit(16).ok_or_else(bad)? as usize;
            bits.extend((0..4).filter(|b| d >> b & 1 == 1).map(|b| 4 * i + b));
        }
        bits
    } else {
        let v: u128 = text.parse().map_err(|_| bad())?;
        (0..128).filter(|b| v >> b & 1 == 1).collect()
    };
    if let Some(&b) = bits.iter().find(|&&b| b >= len) {
        return Err(fail(2, format!("bit {b} is out of range: the layer has {}", plural(len, "generator"))));
    }
    Ok(Point::from_ids(len, bits.into_iter().map(|b| GenId(b as u32))))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialise"));
}

fn layers(bundle: &ClassifierBundle) -> Vec<(String, &Presentation)> {
    let mut out = vec![("g0".to_string(), &*bundle.g0), ("g1".into(), &*bundle.g1), ("core".into(), &*bundle.g1_core)];
    for (sort, b) in &bundle.per_sort {
        out.push((format!("E:{sort}"), &*b.e));
    }
    for (r, sub) in &bundle.rel_subs {
        out.push((format!("R:{r}"), &*sub.presentation));
    }
    out
}

fn classify(source: &Source, out: Option<&Path>, as_json: bool) -> Result<(), Failure> {
    let Input { bundle, .. } = load(source)?;
    if let Some(dir) = out {
        write_bundle(&bundle, dir).map_err(|e| fail(3, e.to_string()))?;
    }
    let rows: Vec<(String, usize, usize, usize)> = layers(&bundle)
        .into_iter()
        .map(|(name, p)| (name, p.gen_count(), p.relations().len(), p.enumerate_points().len()))
        .collect();
    if as_json {
        let layers: Vec<Value> = rows
            .iter()
            .map(|(name, g, r, p)| json!({"layer": name, "generators": g, "relations": r, "points": p}))
            .collect();
        print_json(&json!({"theory": bundle.theory.name, "parameters": bundle.params.size, "layers": layers}));
    } else {
        for (name, g, r, p) in rows {
            println!("{name}: {}, {}, {}", plural(g, "generator"), plural(p, "point"), plural(r, "relation"));
        }
    }
    Ok(())
}

fn points(source: &Source, layer: &str, as_json: bool) -> Result<(), Failure> {
    let Input { bundle, .. } = load(source)?;
    let (layer, pres) = layer_of(&bundle, layer)?;
    let mut rows = Vec::new();
    for pt in pres.enumerate_points() {
        let d = decode_point(&bundle, &pt, &layer).map_err(|e| fail(1, e.to_string()))?;
        let reading = DecodedDisplay { theory: &bundle.theory, decoded: &d }.to_string();
        rows.push((mask_hex(&pt), pt.true_ids(pres).map(str::to_string).collect::<Vec<_>>(), reading));
    }
    if as_json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(mask, ids, reading)| json!({"mask": mask, "generators": ids, "reading": reading}))
            .collect();
        print_json(&json!({"layer": layer.name(), "points": rows}));
    } else {
        for (mask, _, reading) in rows {
            println!("{mask}\t{reading}");
        }
    }
    Ok(())
}

fn decode(source: &Source, layer: &str, mask: &str, as_json: bool) -> Result<(), Failure> {
    let Input { bundle, .. } = load(source)?;
    let (layer, pres) = layer_of(&bundle, layer)?;
    let pt = parse_mask(mask, pres.gen_count())?;
    if !pres.is_point(&pt) {
        return Err(fail(2, format!("{mask} is not a point of {}", layer.name())));
    }
    let d = decode_point(&bundle, &pt, &layer).map_err(|e| fail(2, e.to_string()))?;
    let reading = DecodedDisplay { theory: &bundle.theory, decoded: &d }.to_string();
    if as_json {
        print_json(&json!({"layer": layer.name(), "mask": mask_hex(&pt), "reading": reading}));
    } else {
        println!("{reading}");
    }
    Ok(())
}

/// Checks a bundle read from disk against a fresh generation.
fn loaded_checks(input: &Input) -> Vec<ZetaCheck> {
    let Some(loaded) = &input.loaded else { return Vec::new() };
    let instance = format!("{} |P|={} (stored)", loaded.theory.name, loaded.manifest.parameters);
    let fresh: Vec<(String, String)> = {
        let b = &input.bundle;
        let mut v = vec![
            ("g0".to_string(), &b.g0),
            ("g1".into(), &b.g1),
            ("g1_core".into(), &b.g1_core),
            ("g1_pair".into(), &b.g1_pair),
            ("core_pair".into(), &b.core_pair),
        ];
        for (sort, s) in &b.per_sort {
            v.push((format!("E_{sort}"), &s.e));
            v.push((format!("EG1_{sort}"), &s.pullback));
        }
        for (r, sub) in &b.rel_subs {
            v.push((format!("R_{r}"), &sub.presentation));
        }
        v.into_iter().map(|(n, p)| (n, presentation_to_json(p))).collect()
    };
    let mismatch = fresh
        .iter()
        .find(|(name, text)| loaded.presentations.get(name).is_none_or(|p| presentation_to_json(p) != *text));
    let presentations = ZetaCheck {
        instance: instance.clone(),
        check: "stored presentations match regeneration".into(),
        pass: mismatch.is_none(),
        witness: mismatch.map_or(format!("{} presentations", fresh.len()), |(n, _)| format!("{n} differs")),
    };
    let bad_hom = loaded.homs.iter().find(|h| check_frame_hom((*h).clone()).is_err());
    let homs = ZetaCheck {
        instance,
        check: "stored structure maps are frame homomorphisms".into(),
        pass: bad_hom.is_none(),
        witness: bad_hom.map_or(format!("{} maps", loaded.homs.len()), |h| format!("{} fails", h.name)),
    };
    vec![presentations, homs]
}

fn render(checks: &[ZetaCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{status}  {}: {} ({})", c.instance, c.check, c.witness).unwrap();
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    writeln!(out, "{passed}/{} checks passed", checks.len()).unwrap();
    out
}

fn verify(
    source: &Source,
    suite: Suite,
    seed: u64,
    count: u64,
    as_json: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let input = load(source)?;
    let mut checks = loaded_checks(&input);
    let mut runner = suites::Runner { bundle: &input.bundle, seed, count, checks: Vec::new() };
    let selected: Vec<&str> = match suite {
        Suite::All => suites::SUITES.to_vec(),
        Suite::Presentations => vec!["presentations"],
        Suite::Bijections => vec!["bijections"],
        Suite::Descent => vec!["descent"],
        Suite::Zeta => vec!["zeta"],
    };
    for s in selected {
        runner.run(s);
    }
    checks.extend(runner.checks);
    let value = serde_json::to_value(&checks).expect("checks serialise");
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| fail(3, format!("{}: {e}", dir.display())))?;
        let path = dir.join("report.json");
        let text = serde_json::to_string_pretty(&value).expect("checks serialise") + "\n";
        fs::write(&path, text).map_err(|e| fail(3, format!("{}: {e}", path.display())))?;
    }
    if as_json {
        print_json(&value);
    } else {
        print!("{}", render(&checks));
    }
    match checks.iter().find(|c| !c.pass) {
        Some(c) => Err(fail(1, format!("{}: {} failed: {}", c.instance, c.check, c.witness))),
        None => Ok(()),
    }
}

fn report(path: &Path, as_json: bool) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(3, format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| fail(3, format!("{}: {e}", path.display())))?;
    let parse = |v: &Value| -> Option<ZetaCheck> {
        Some(ZetaCheck {
            instance: v.get("instance")?.as_str()?.into(),
            check: v.get("check")?.as_str()?.into(),
            pass: v.get("pass")?.as_bool()?,
            witness: v.get("witness")?.as_str()?.into(),
        })
    };
    let checks: Vec<ZetaCheck> = value
        .as_array()
        .and_then(|a| a.iter().map(parse).collect())
        .ok_or_else(|| fail(3, format!("{}: not a verify report", path.display())))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if as_json {
        print_json(&json!({"checks": checks.len(), "passed": checks.len() - failed, "failed": failed}));
    } else {
        print!("{}", render(&checks));
    }
    if failed > 0 {
        return Err(fail(1, format!("{} failed", plural(failed, "check"))));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { source, out, json } => classify(source, out.as_deref(), *json),
        Command::Points { source, layer, json } => points(source, layer, *json),
        Command::Decode { source, layer, point, json } => decode(source, layer, point, *json),
        Command::Verify { source, suite, seed, count, json, out } => {
            verify(source, *suite, *seed, *count, *json, out.as_deref())
        }
        Command::Report { report: path, json } => report(path, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("geoclass: {message}");
            ExitCode::from(code)
        }
    }
}
