use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pwiso_core::billiard::{f2_direct, f3_direct, BilliardParams, TriangleConstruction};
use pwiso_core::certify::{certify_nonperiodic, hecke_relations_check, Verdict};
use pwiso_core::engine::{first_return, orbit};

use pwiso::json::{self, CertificateDoc, HeckeDoc, MapDoc, OrbitDoc};
use pwiso::presets::{construct, Preset};
use pwiso::svg::{self, Scene};

#[derive(Parser)]
#[command(name = "pwiso", version, about = "Exact piecewise isometries from dual billiards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Triangle {
    F2,
    F3,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named map and write it as JSON.
    Construct {
        #[arg(long = "map", value_enum)]
        preset: Preset,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=1024))]
        n: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Iterate a map exactly from a seed.
    Orbit {
        #[arg(long)]
        map: PathBuf,
        /// `x,y` with rational parts, or `cyc:n:c0,c1,...`.
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// First return of a map to one of its named regions.
    ReturnMap {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        cell: String,
        /// Longest return time searched for.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether the boundary return map rules out periodicity.
    /// Exit status 0 = NOT-PERIODIC, 2 = INCONCLUSIVE, 3 = INAPPLICABLE.
    Certify {
        #[arg(long, value_enum)]
        map: Triangle,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=1024))]
        n: u32,
        /// Print the certificate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Draw a map and optionally an orbit as SVG.
    Render {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        orbit: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = svg::DEFAULT_DIGITS as u64, value_parser = clap::value_parser!(u64).range(1..=40))]
        digits: u64,
    },
    /// Check the relations of the periodic case.
    Hecke {
        #[arg(long, value_enum)]
        map: Triangle,
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=1024))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        period: u64,
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn triangle(t: Triangle, n: u32) -> Result<(&'static str, TriangleConstruction)> {
    let p = BilliardParams::new(n)?;
    Ok(match t {
        Triangle::F2 => ("f2", f2_direct(p)?),
        Triangle::F3 => ("f3", f3_direct(p)?),
    })
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Construct { preset, n, out } => {
            let doc = construct(preset, n)?;
            write(&out, &json::to_string(&doc)?)?;
            println!("{} N={n}: {} atoms -> {}", doc.name, doc.map.atoms.len(), out.display());
        }
        Command::Orbit { map, seed, budget, out } => {
            let doc: MapDoc = json::from_str(&read(&map)?, "map")?;
            let f = doc.map.to_core()?;
            let conductor = f.atoms().first().map_or(1, |a| a.iso.spectral().conductor());
            let z = json::parse_seed(&seed, conductor)?;
            let budget = budget as usize;
            let r = orbit(&f, &z, budget)?;
            let o = OrbitDoc::new(&doc, budget, &r);
            write(&out, &json::to_string(&o)?)?;
            println!("{}: {} iterates, {} distinct -> {}", o.status, o.iterates.len(), o.distinct, out.display());
        }
        Command::ReturnMap { map, cell, budget, out } => {
            let doc: MapDoc = json::from_str(&read(&map)?, "map")?;
            let region = doc.region(&cell)?;
            let r = first_return(&doc.map.to_core()?, &region, budget as usize)?;
            let name = format!("{}|{cell}", doc.name);
            let ret = MapDoc::new(&name, doc.n, &r.map, Some(&r.times), None).with_region(&cell, &region);
            write(&out, &json::to_string(&ret)?)?;
            println!("{name}: {} atoms, return times {:?} -> {}", r.map.atoms().len(), r.times, out.display());
        }
        Command::Certify { map, n, json: as_json } => {
            let (name, t) = triangle(map, n)?;
            let c = certify_nonperiodic(&t.map, &t.pair)?;
            let doc = CertificateDoc::new(name, n, &c);
            if as_json {
                print!("{}", json::to_string(&doc)?);
            } else {
                print_certificate(&doc);
            }
            return Ok(ExitCode::from(match c.verdict {
                Verdict::NotPeriodic => 0,
                Verdict::Inconclusive => 2,
                Verdict::Inapplicable => 3,
            }));
        }
        Command::Render { map, orbit, out, digits } => {
            let doc: MapDoc = json::from_str(&read(&map)?, "map")?;
            let pts = match orbit {
                Some(p) => json::from_str::<OrbitDoc>(&read(&p)?, "orbit")?.points()?,
                None => Vec::new(),
            };
            let scene = Scene::from_map(&doc, &pts)?;
            write(&out, &svg::render(&scene, digits as usize))?;
            println!(
                "{} cells, {} axes, {} orbit points -> {}",
                scene.cells.len(),
                scene.axes.len(),
                scene.orbit.len(),
                out.display()
            );
        }
        Command::Hecke { map, n, period, json: as_json } => {
            let (name, t) = triangle(map, n)?;
            let r = hecke_relations_check(&t.map, &t.pair, period as usize)?;
            let doc = HeckeDoc::new(name, n, &r);
            if as_json {
                print!("{}", json::to_string(&doc)?);
            } else {
                println!("{name} N={n}, period {}: {} periodic cell(s)", doc.period, doc.cells);
                for rel in &doc.relations {
                    println!("  {:<12} {}", rel.relation, if rel.holds { "holds" } else { "FAILS" });
                }
                println!("  Inv(wv) = 0  {}", if doc.inv_wv_zero { "holds" } else { "FAILS" });
            }
            return Ok(if doc.all_hold { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_certificate(doc: &CertificateDoc) {
    println!("{} N={}: {}", doc.map, doc.n, doc.verdict);
    println!("double jump condition: {}", if doc.double_jump { "holds" } else { "fails" });
    if let Some(a) = doc.witness_arc {
        println!("violating arc: {a}");
    }
    if let Some(p) = &doc.perimeter {
        println!("boundary length: {}", p.closed_form.as_deref().unwrap_or(&p.decimal));
    }
    if let Some(a) = &doc.alpha {
        match &a.closed_form {
            Some(f) => println!("rotation number: α = {f} ≈ {}", a.decimal),
            None => println!("rotation number: α ≈ {}", a.decimal),
        }
    }
    if let Some(s) = &doc.saf {
        let zero = s.matrix.iter().flatten().all(|x| x.starts_with("0/"));
        println!(
            "SAF invariant: {} (basis of dimension {} over conductor {})",
            if zero { "zero" } else { "nonzero" },
            s.matrix.len(),
            s.basis_conductor
        );
    }
    for r in &doc.reasons {
        println!("  - {r}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
