use std::fmt;
use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use g2lab::acceptance;
use g2lab::classify::{classify, is_prime, missing_facets, prime_decomposition};
use g2lab::complex::{parse_complex_json, to_canonical_json, Face, SimplicialComplex};
use g2lab::constructions::{self, connected_sum, connected_sum_default, edge_contract, stellar_subdivide_ridge};
use g2lab::homology::homology;
use g2lab::rigidity::{analyze, edge_removal_experiment, float_rank_check};
use serde_json::{json, Value};

use crate::{Cli, Command, Generator, Input};

#[derive(Debug)]
pub enum Failure {
    /// Unreadable input or bad arguments.
    Input(String),
    Core(g2lab::Error),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) if e.is_theorem_violation() => 3,
            Failure::Core(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<g2lab::Error> for Failure {
    fn from(e: g2lab::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

/// `println!` that ignores a closed stdout, so piping into `head` is quiet.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn read_complex(input: &Input) -> Result<(SimplicialComplex, Option<String>), Failure> {
    Ok(parse_complex_json(&read_text(input.input.as_deref())?)?)
}

fn read_path(path: &Path) -> Result<SimplicialComplex, Failure> {
    Ok(parse_complex_json(&read_text(Some(path))?)?.0)
}

fn print_json(value: &impl serde::Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    out!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn emit(k: &SimplicialComplex, name: Option<&str>) -> Outcome {
    out!("{}", to_canonical_json(k, name));
    Ok(ExitCode::SUCCESS)
}

fn face(vertices: &[u32]) -> Result<Face, Failure> {
    Ok(Face::new(vertices.iter().copied())?)
}

pub fn run(cli: &Cli) -> Outcome {
    let note = |msg: String| {
        if !cli.quiet {
            eprintln!("{msg}");
        }
    };
    match &cli.command {
        Command::Info(input) => info(input, cli.json),
        Command::G2(input) => {
            let (k, _) = read_complex(input)?;
            out!("{}", k.g2()?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Homology(input) => print_json(&homology(&read_complex(input)?.0)),
        Command::Rigidity { input, dim, trials, edge_experiment, float_check } => {
            let (k, _) = read_complex(input)?;
            let d = dim.unwrap_or_else(|| k.max_face_size());
            let g = k.skeleton_graph();
            let report = analyze(&g, d, *trials, cli.seed).report;
            let mut value = serde_json::to_value(&report).map_err(|e| Failure::Internal(e.to_string()))?;
            if *edge_experiment {
                value["edge_removal"] = json!(edge_removal_experiment(&g, d, *trials, cli.seed));
            }
            if *float_check {
                value["float_check"] = json!(float_rank_check(&g, d, cli.seed));
            }
            print_json(&value)
        }
        Command::Classify { input, check_sphere } => {
            let (k, _) = read_complex(input)?;
            let c = classify(&k, *check_sphere)?;
            if cli.json {
                print_json(&c)
            } else {
                out!("{}", c.verdict);
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Gen(g) => generate(g, cli.seed),
        Command::Contract { input, edge } => {
            let (k, name) = read_complex(input)?;
            let [u, v] = edge[..] else {
                return Err(Failure::Input("--edge takes two vertices u,v".into()));
            };
            let r = edge_contract(&k, u, v)?;
            note(format!(
                "contracted {u} onto {v}: link condition {}, delta f0 {}, delta f1 {}, delta g2 {}{}",
                r.link_condition,
                r.delta_f0,
                r.delta_f1,
                r.delta_g2,
                if r.no_sphere_guarantee { " (no sphere guarantee)" } else { "" }
            ));
            emit(&r.complex, name.as_deref())
        }
        Command::Subdivide { input, ridge } => {
            let (k, name) = read_complex(input)?;
            let (s, w) = stellar_subdivide_ridge(&k, &face(ridge)?)?;
            note(format!("new vertex {w}"));
            emit(&s, name.as_deref())
        }
        Command::Sum { first, second, facet_k, facet_l } => {
            let (k, l) = (read_path(first)?, read_path(second)?);
            let s = match (facet_k, facet_l) {
                (None, None) => connected_sum_default(&k, &l)?,
                (Some(fk), Some(fl)) => {
                    let pairs: Vec<(u32, u32)> = face(fl)?.vertices().iter().copied().zip(face(fk)?.vertices().iter().copied()).collect();
                    connected_sum(&k, &l, &face(fk)?, &face(fl)?, &pairs)?
                }
                _ => return Err(Failure::Input("--facet-k and --facet-l go together".into())),
            };
            emit(&s, None)
        }
        Command::Decompose(input) => decompose(input, cli.json),
        Command::Selftest => selftest(cli.json),
    }
}

fn info(input: &Input, as_json: bool) -> Outcome {
    let (k, name) = read_complex(input)?;
    let stats = k.g_stats().ok();
    let pure = k.is_pure();
    let prime = pure && k.max_face_size() >= 2 && is_prime(&k);
    let missing = missing_facets(&k).len();
    if as_json {
        return print_json(&json!({
            "name": name,
            "vertices": k.num_vertices(),
            "facets": k.facets().len(),
            "dim": k.dim(),
            "f_vector": k.f_vector().counts,
            "pure": pure,
            "g1": stats.map(|s| s.g1),
            "g2": stats.map(|s| s.g2),
            "missing_facets": missing,
            "prime": prime,
        }));
    }
    let show = |v: Option<i64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
    let f: Vec<String> = k.f_vector().counts.iter().map(ToString::to_string).collect();
    if let Some(n) = &name {
        out!("name            {n}");
    }
    out!("vertices        {}", k.num_vertices());
    out!("facets          {}", k.facets().len());
    out!("dimension       {}", k.dim());
    out!("f-vector        ({})", f.join(", "));
    out!("pure            {}", if pure { "yes" } else { "no" });
    out!("g1              {}", show(stats.map(|s| s.g1)));
    out!("g2              {}", show(stats.map(|s| s.g2)));
    out!("missing facets  {missing}");
    out!("prime           {}", if prime { "yes" } else { "no" });
    Ok(ExitCode::SUCCESS)
}

fn generate(g: &Generator, seed: u64) -> Outcome {
    let (k, name) = match *g {
        Generator::Stacked { dim, stacks } => (
            constructions::stacked_sphere(dim, stacks, seed)?.0,
            format!("stacked_sphere(dim={dim},stacks={stacks},seed={seed})"),
        ),
        Generator::Join2 { a, b } => (constructions::family_two_simplices(a, b)?, format!("two_simplices(a={a},b={b})")),
        Generator::Polyjoin { n, d } => (constructions::family_polygon_simplex(n, d)?, format!("polygon_simplex(n={n},d={d})")),
        Generator::Crosspoly { d } => (constructions::cross_polytope(d)?, format!("cross_polytope(d={d})")),
        Generator::Simplex { m } => (constructions::boundary_simplex(m)?, format!("simplex_boundary(m={m})")),
        Generator::Polygon { n } => (constructions::polygon(n)?, format!("polygon(n={n})")),
    };
    emit(&k, Some(&name))
}

fn decompose(input: &Input, as_json: bool) -> Outcome {
    let (k, _) = read_complex(input)?;
    let dec = prime_decomposition(&k)?;
    if as_json {
        return print_json(&json!({
            "components": dec.components,
            "gluing_tree": dec.gluing_tree,
            "simplex_count": dec.simplex_count,
        }));
    }
    out!("components {} (simplex boundaries {})", dec.components.len(), dec.simplex_count);
    for (i, c) in dec.components.iter().enumerate() {
        let kind = if c.is_simplex_boundary() { "simplex boundary" } else { "prime" };
        let g2 = c.g2().map_or_else(|_| "-".to_string(), |g| g.to_string());
        out!("{i:>3}  vertices {:>4}  g2 {g2:>3}  {kind}", c.num_vertices());
    }
    for e in &dec.gluing_tree {
        out!("glue {}-{} along {}", e.a, e.b, e.facet);
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest(as_json: bool) -> Outcome {
    let outcomes = acceptance::run_all();
    if as_json {
        let rows: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id,
                    "name": o.name,
                    "passed": o.passed,
                    "detail": o.detail,
                    "seconds": o.elapsed.as_secs_f64(),
                })
            })
            .collect();
        print_json(&rows)?;
    } else {
        for o in &outcomes {
            out!("{o}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("g2lab: {failed} acceptance criteria failed");
        Ok(ExitCode::from(1))
    }
}
