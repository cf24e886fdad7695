use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use gsdraw::augment::triangulate_adapted;
use gsdraw::bend::min_bend_drawing;
use gsdraw::corpus::generate_corpus;
use gsdraw::drawing::GridDrawing;
use gsdraw::dual::{derive_dual_structure, dualize_labels, DualStructure, RootedMap};
use gsdraw::geometry::validate_straightline;
use gsdraw::io::{map_to_json, parse_labeling, parse_map, render_svg, DrawingFile, LabelingFile};
use gsdraw::labeling::{enumerate_labelings, solve_labeling, verify_labeling, CornerLabeling, SolveOptions};
use gsdraw::map::{check_dual_adapted, classify_34_square, PlanarMap};
use gsdraw::ortho::{
    bend_bounds, check_orthogonal, draw_dual, draw_with_degree2, dual_counts, dual_grid_bound, rotate_labels,
    validate_spo, DualMethod,
};
use gsdraw::primal::{draw_primal, grid_bound, FaceCountMode, PrimalMethod};
use gsdraw::structure::derive_structure;
use gsdraw::Error;

#[derive(Parser)]
#[command(name = "gsdraw", version, about = "Grid drawings of 3,4-angulations of the square and their duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrimalArg {
    FaceCount,
    Increasing,
    Optimized,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualArg {
    FaceCount,
    Increasing,
    Relaxed,
    WeakDiag,
}

#[derive(clap::Args)]
struct Output {
    /// coordinates file
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a map is an adapted 3,4-angulation of the square (or, for
    /// a rooted map, dual-adapted).
    Validate { map: PathBuf },
    /// Compute a 4-GS labeling.
    Label {
        map: PathBuf,
        #[arg(long)]
        even: bool,
        #[arg(long)]
        no_uncolored: bool,
        /// every labeling, by exhaustive search
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    DrawPrimal {
        map: PathBuf,
        #[arg(long, value_enum, default_value = "increasing")]
        method: PrimalArg,
        /// count faces of B'_o and B'_e
        #[arg(long)]
        classic: bool,
        /// JSON array of weights per face id
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        labeling: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    DrawDual {
        /// a 3,4-angulation of the square (its dual is drawn) or a rooted map
        map: PathBuf,
        #[arg(long, value_enum, default_value = "increasing")]
        method: DualArg,
        #[arg(long)]
        min_bends: bool,
        /// rooted maps only: draw degree-2 vertices along their chains
        #[arg(long)]
        allow_degree2: bool,
        /// apply the label rotation before drawing
        #[arg(long)]
        rotate: bool,
        /// primal labeling file
        #[arg(long)]
        labeling: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Add one diagonal per quadrangular inner face, keeping the labeling.
    Triangulate {
        map: PathBuf,
        #[arg(long)]
        labeling: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        labeling_out: Option<PathBuf>,
    },
    /// Grid sizes, bend counts and bound slack; maps are processed in
    /// parallel (GSDRAW_THREADS sets the pool size).
    Stats { maps: Vec<PathBuf> },
    /// Render a coordinates file as SVG.
    Render {
        coords: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Write the generated corpus as map files.
    Corpus {
        #[arg(long, default_value_t = 5)]
        max_faces: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// keep this many maps, chosen with `--seed`
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_map(p: &Path) -> Result<PlanarMap> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    parse_map(&text).with_context(|| format!("parsing {}", p.display()))
}

fn labeling_for(m: &PlanarMap, file: Option<&PathBuf>) -> Result<CornerLabeling> {
    let l = match file {
        Some(p) => parse_labeling(m, &fs::read_to_string(p)?)?,
        None => solve_labeling(m, SolveOptions::default())?,
    };
    if let Some(v) = verify_labeling(m, &l).violations.first() {
        bail!("labeling is invalid: {v:?}");
    }
    Ok(l)
}

fn write_drawing(m: &PlanarMap, g: &GridDrawing, output: &Output) -> Result<()> {
    let file = DrawingFile::new(m, g);
    if let Some(p) = &output.out {
        fs::write(p, file.to_json())?;
    }
    if let Some(p) = &output.svg {
        fs::write(p, render_svg(&file)?)?;
    }
    Ok(())
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn report(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { map } => {
            let m = read_map(&map)?;
            if m.root_vertex().is_some() {
                let ok = check_dual_adapted(&m)?;
                println!("{}", if ok { "dual-adapted rooted 3,4-map" } else { "rooted map is not dual-adapted" });
                return Ok(report(ok));
            }
            let rep = classify_34_square(&m);
            match &rep.witness {
                None => println!("adapted 3,4-angulation of the square: {} vertices, {} inner faces", m.vertex_count(), m.face_count() - 1),
                Some(w) => println!("not adapted: {w}"),
            }
            Ok(report(rep.accepts()))
        }
        Command::Label { map, even, no_uncolored, all, out } => {
            let m = read_map(&map)?;
            let text = if all {
                let ls: Vec<LabelingFile> = enumerate_labelings(&m)?.iter().map(|l| LabelingFile::new(&m, l)).collect();
                eprintln!("{} labelings", ls.len());
                serde_json::to_string_pretty(&ls)?
            } else {
                let opts = SolveOptions { require_no_uncolored_edge: no_uncolored, require_even: even };
                serde_json::to_string_pretty(&LabelingFile::new(&m, &solve_labeling(&m, opts)?))?
            };
            match out {
                Some(p) => fs::write(p, text)?,
                None => emit(&text),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DrawPrimal { map, method, classic, weights, labeling, output } => {
            let m = read_map(&map)?;
            let l = labeling_for(&m, labeling.as_ref())?;
            let s = derive_structure(&m, &l)?;
            let mode = match (weights, classic) {
                (Some(p), _) => FaceCountMode::Weighted(serde_json::from_str(&fs::read_to_string(p)?)?),
                (None, true) => FaceCountMode::Classic,
                (None, false) => FaceCountMode::Submap,
            };
            let method = match method {
                PrimalArg::FaceCount => PrimalMethod::FaceCount,
                PrimalArg::Increasing => PrimalMethod::Increasing,
                PrimalArg::Optimized => PrimalMethod::Optimized,
            };
            let g = draw_primal(&m, &l, &s, method, &mode)?;
            let check = (method == PrimalMethod::Increasing).then_some(&l);
            let cert = validate_straightline(&m, check, &g);
            write_drawing(&m, &g, &output)?;
            println!("method {} grid {}x{} certified {}", g.method, g.width, g.height, cert.is_certified());
            for f in &cert.failures {
                eprintln!("  {f:?}");
            }
            Ok(report(cert.is_certified()))
        }
        Command::DrawDual { map, method, min_bends, allow_degree2, rotate, labeling, output } => {
            let m = read_map(&map)?;
            if m.root_vertex().is_some() && allow_degree2 && (0..m.vertex_count()).any(|v| m.degree(v) == 2) {
                let g = draw_with_degree2(&m)?;
                let root = m.root_vertex().unwrap();
                let faces: Vec<usize> = (0..m.face_count())
                    .filter(|&f| m.face_contour(f).iter().all(|&d| m.tail(d) != root))
                    .collect();
                let failures = check_orthogonal(&m, &g, &faces);
                write_drawing(&m, &g, &output)?;
                println!("method {} grid {}x{} bends {} certified {}", g.method, g.width, g.height, g.bend_count(), failures.is_empty());
                return Ok(report(failures.is_empty()));
            }
            let (p, r) = match m.root_vertex() {
                Some(_) => RootedMap::from_rooted(&m)?,
                None => {
                    let r = RootedMap::of_primal(&m)?;
                    (m.clone(), r)
                }
            };
            let (ds, g) = if min_bends {
                min_bend_drawing(&r)?
            } else {
                let l = labeling_for(&p, labeling.as_ref())?;
                let mut ds: DualStructure = derive_dual_structure(&r, &dualize_labels(&p, &l))?;
                if rotate {
                    ds = rotate_labels(&r, &ds)?;
                }
                let method = match method {
                    DualArg::FaceCount => DualMethod::FaceCount,
                    DualArg::Increasing => DualMethod::Increasing,
                    DualArg::Relaxed => DualMethod::Relaxed,
                    DualArg::WeakDiag => DualMethod::Weakened,
                };
                let g = draw_dual(&r, &ds, method)?;
                (ds, g)
            };
            let cert = validate_spo(&r, &ds, &g);
            write_drawing(&r.map, &g, &output)?;
            println!("method {} grid {}x{} bends {} certified {}", g.method, g.width, g.height, g.bend_count(), cert.is_certified());
            for f in cert.failures.iter().chain(&cert.shape) {
                eprintln!("  {f:?}");
            }
            Ok(report(cert.is_certified()))
        }
        Command::Triangulate { map, labeling, out, labeling_out } => {
            let m = read_map(&map)?;
            let l = labeling_for(&m, labeling.as_ref())?;
            let (t, lt) = triangulate_adapted(&m, &l)?;
            let adapted = classify_34_square(&t).accepts();
            let text = map_to_json(&t);
            match out {
                Some(p) => fs::write(p, text)?,
                None => emit(&text),
            }
            if let Some(p) = labeling_out {
                fs::write(p, serde_json::to_string_pretty(&LabelingFile::new(&t, &lt))?)?;
            }
            eprintln!("added {} diagonals, adapted {adapted}", t.edge_count() - m.edge_count());
            Ok(report(adapted))
        }
        Command::Stats { maps } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(std::env::var("GSDRAW_THREADS").ok().and_then(|s| s.parse().ok()).unwrap_or(0))
                .build()?;
            let rows: Vec<Result<serde_json::Value>> = pool.install(|| maps.par_iter().map(|p| stats(p)).collect());
            let mut ok = true;
            for row in rows {
                match row {
                    Ok(v) => {
                        ok &= v["certified"].as_bool().unwrap_or(false);
                        emit(&v.to_string());
                    }
                    Err(e) => {
                        ok = false;
                        eprintln!("error: {e:#}");
                    }
                }
            }
            Ok(report(ok))
        }
        Command::Render { coords, svg } => {
            let file = DrawingFile::parse(&fs::read_to_string(&coords)?)?;
            fs::write(svg, render_svg(&file)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { max_faces, out_dir, sample, seed } => {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut maps: Vec<(usize, usize, PlanarMap)> = generate_corpus(max_faces)
                .into_iter()
                .flat_map(|(k, ms)| ms.into_iter().enumerate().map(move |(i, m)| (k, i, m)))
                .collect();
            if let Some(n) = sample {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                maps.shuffle(&mut rng);
                maps.truncate(n);
                maps.sort_by_key(|&(k, i, _)| (k, i));
            }
            fs::create_dir_all(&out_dir)?;
            for (k, i, m) in &maps {
                fs::write(out_dir.join(format!("f{k:02}_{i:05}.json")), map_to_json(m))?;
            }
            println!("wrote {} maps", maps.len());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn stats(path: &Path) -> Result<serde_json::Value> {
    let m = read_map(path)?;
    let l = solve_labeling(&m, SolveOptions::default())?;
    let s = derive_structure(&m, &l)?;
    let (bo, be, bsum) = grid_bound(&m, &s);
    let mut certified = true;
    let mut primal = serde_json::Map::new();
    for method in [PrimalMethod::FaceCount, PrimalMethod::Increasing, PrimalMethod::Optimized] {
        let g = draw_primal(&m, &l, &s, method, &FaceCountMode::Submap)?;
        let ok = validate_straightline(&m, None, &g).is_certified();
        certified &= ok;
        primal.insert(
            method.name().into(),
            json!({ "grid": [g.width, g.height], "slack": [bo as i64 - g.width, be as i64 - g.height], "certified": ok }),
        );
    }
    let r = RootedMap::of_primal(&m)?;
    let ds = derive_dual_structure(&r, &dualize_labels(&m, &l))?;
    let counts = dual_counts(&r, &ds);
    let (mo, me) = dual_grid_bound(&counts);
    let bb = bend_bounds(&counts);
    let mut dual = serde_json::Map::new();
    for method in DualMethod::ALL {
        match draw_dual(&r, &ds, method) {
            Ok(g) => {
                let ok = validate_spo(&r, &ds, &g).is_certified();
                certified &= ok;
                dual.insert(
                    method.name().into(),
                    json!({ "grid": [g.width, g.height], "slack": [mo - g.width, me - g.height], "bends": g.bend_count(), "certified": ok }),
                );
            }
            Err(Error::FullyColoredEdgePresent { .. }) => {
                dual.insert(method.name().into(), json!("undefined"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let (_, best) = min_bend_drawing(&r)?;
    Ok(json!({
        "map": path.display().to_string(),
        "vertices": m.vertex_count(),
        "inner_faces": m.face_count() - 1,
        "primal": primal,
        "primal_bound": [bo, be],
        "primal_sum_bound": bsum,
        "dual": dual,
        "dual_bound": [mo, me],
        "bend_bound": bb.max_bends,
        "min_bends": best.bend_count(),
        "certified": certified,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::NotAdapted(_)) | Some(Error::NotDualAdapted) => 3,
                Some(Error::Format(_)) => 4,
                Some(Error::InternalInvariantViolated(_)) => 5,
                Some(_) => 6,
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}
