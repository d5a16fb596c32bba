mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use freesep::experiments::{run_criterion, suite_criteria, SUITES};
use freesep::geometry::{
    flat_certificate, norm_bounds, quotient_dist_lower, quotient_dist_upper, standard_defect, BfsOracle, FlatSpec,
};
use freesep::quasimorphism::{defect_sample, defect_search, make_pk, CountingQuasimorphism};
use freesep::splitting::{
    axis_entry_exit, basis_rewrite, es_common_neighbor, es_vertex, project_r, verify_section, SplittingTHw,
};
use freesep::whitehead::{
    is_primitive, is_separable_capped, omega, omega_prime, primitive_pair_factorization, whitehead_minimize,
};
use freesep::word::{infer_rank, random_reduced_word};
use freesep::{Error, Result, Word};

use output::{emit, to_value, Output};

#[derive(Parser)]
#[command(name = "freesep", version, about = "Free groups with the separable generating set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Arithmetic on reduced words.
    #[command(subcommand)]
    Word(WordCmd),
    /// Whitehead graphs, minimization, separability and primitivity.
    #[command(subcommand)]
    Whitehead(WhiteheadCmd),
    /// Counting quasimorphisms.
    #[command(subcommand)]
    Qm(QmCmd),
    /// Bounds on the separable word norm.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Quasi-flat certificates.
    #[command(subcommand)]
    Flat(FlatCmd),
    /// Distances in the quotient by inner automorphisms.
    #[command(subcommand)]
    Whc(WhcCmd),
    /// One-edge splittings and the projection r.
    #[command(subcommand)]
    Split(SplitCmd),
    /// Vertices and edges of the edge-splitting graph.
    #[command(subcommand)]
    Es(EsCmd),
    /// Run an acceptance experiment by name, or `all`.
    Suite(SuiteArgs),
}

#[derive(Args, Serialize)]
struct Rank {
    /// Rank of the free group; inferred from the words when omitted.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Serialize)]
struct OneWord {
    #[arg(long)]
    word: String,
    #[command(flatten)]
    #[serde(flatten)]
    rank: Rank,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WordCmd {
    Reduce(OneWord),
    Mul {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        #[serde(flatten)]
        rank: Rank,
    },
    Inv(OneWord),
    Pow {
        #[command(flatten)]
        #[serde(flatten)]
        word: OneWord,
        #[arg(long, allow_negative_numbers = true)]
        exp: i64,
    },
    Cycred(OneWord),
    Conjclass(OneWord),
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WhiteheadCmd {
    Graph {
        #[command(flatten)]
        #[serde(flatten)]
        word: OneWord,
        /// Use the graph of the word as written, without the wrap-around edge.
        #[arg(long)]
        prime: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    Cut {
        #[command(flatten)]
        #[serde(flatten)]
        word: OneWord,
        #[arg(long)]
        prime: bool,
    },
    Minimize(OneWord),
    Separable {
        #[command(flatten)]
        #[serde(flatten)]
        word: OneWord,
        #[arg(long, default_value_t = freesep::whitehead::decide::DEFAULT_NODE_CAP)]
        node_cap: usize,
    },
    Primitive(OneWord),
    Primpair(OneWord),
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum QmCmd {
    Eval {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        #[serde(flatten)]
        rank: Rank,
    },
    Homog {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        #[serde(flatten)]
        rank: Rank,
    },
    Pk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Defect {
        #[arg(long)]
        pattern: String,
        /// Exhaustive search over pairs of words of at most this length, or
        /// the length cap of sampled pairs.
        #[arg(long)]
        len: usize,
        /// Sample this many random pairs instead of searching exhaustively.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        #[serde(flatten)]
        rank: Rank,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NormCmd {
    Bounds {
        #[command(flatten)]
        #[serde(flatten)]
        word: OneWord,
        /// Indices k of the quasimorphisms q_{p_k} used for the lower bound.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        ks: Vec<usize>,
        #[arg(long)]
        bfs_genlen: Option<usize>,
        #[arg(long)]
        bfs_radius: Option<u32>,
    },
    Bfs {
        #[command(flatten)]
        #[serde(flatten)]
        word: OneWord,
        #[arg(long)]
        gen_len: usize,
        #[arg(long)]
        radius: u32,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FlatCmd {
    Certify {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        range: i64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Custom basepoints instead of p_1, ..., p_m.
        #[arg(long, value_delimiter = ',')]
        basepoints: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WhcCmd {
    Dist {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        conj_len: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        ks: Vec<usize>,
        #[command(flatten)]
        #[serde(flatten)]
        rank: Rank,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SplitCmd {
    Project {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: String,
    },
    VerifySection {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        maxlen: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum EsCmd {
    Vertex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: String,
    },
    Neighbor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: String,
        #[arg(long)]
        u: String,
    },
}

#[derive(Args, Serialize)]
struct SuiteArgs {
    /// Experiment name, or `all`.
    name: String,
}

fn resolve_rank(rank: &Rank, texts: &[&str]) -> Result<usize> {
    match rank.n {
        Some(n) => Ok(n),
        None => texts.iter().try_fold(2, |acc, t| Ok(acc.max(infer_rank(t)?))),
    }
}

fn parse(text: &str, rank: usize) -> Result<Word> {
    Word::parse(text, rank)
}

fn one(w: &OneWord) -> Result<Word> {
    parse(&w.word, resolve_rank(&w.rank, &[&w.word])?)
}

fn word_json(w: &Word) -> Value {
    json!({ "word": w, "length": w.len(), "rank": w.rank() })
}

fn run_word(cmd: &WordCmd) -> Result<Output> {
    let v = match cmd {
        WordCmd::Reduce(w) => word_json(&one(w)?),
        WordCmd::Mul { left, right, rank } => {
            let n = resolve_rank(rank, &[left, right])?;
            word_json(&parse(left, n)?.multiply(&parse(right, n)?)?)
        }
        WordCmd::Inv(w) => word_json(&one(w)?.invert()),
        WordCmd::Pow { word, exp } => word_json(&one(word)?.power(*exp)),
        WordCmd::Cycred(w) => {
            let (conj, core) = one(w)?.cyclic_reduce();
            json!({ "conjugator": conj, "core": core })
        }
        WordCmd::Conjclass(w) => json!({ "class": one(w)?.canonical_conjugacy_rep() }),
    };
    Ok(Output::Json(v))
}

fn run_whitehead(cmd: &WhiteheadCmd) -> Result<Output> {
    let v = match cmd {
        WhiteheadCmd::Graph { word, prime, format } => {
            let w = one(word)?;
            let g = if *prime { omega_prime(&w) } else { omega(&w) };
            match format {
                Format::Dot => return Ok(Output::Text(g.to_dot(if *prime { "omega_prime" } else { "omega" }))),
                Format::Csv => return Err(Error::InvalidInput("graphs are available as json or dot".into())),
                Format::Json => {
                    let token = |l: freesep::Letter| l.token();
                    json!({
                        "vertices": (0..g.vertex_count()).map(|i| token(freesep::Letter::from_index(i))).collect::<Vec<_>>(),
                        "edges": g.edges().into_iter().map(|(u, v)| [token(u), token(v)]).collect::<Vec<_>>(),
                        "connected": g.is_connected(),
                        "cut_vertices": g.cut_vertices().into_iter().map(token).collect::<Vec<_>>(),
                    })
                }
            }
        }
        WhiteheadCmd::Cut { word, prime } => {
            let w = one(word)?;
            let g = if *prime { omega_prime(&w) } else { omega(&w) };
            json!({ "in_cut": g.has_cut_vertex(), "prime": prime })
        }
        WhiteheadCmd::Minimize(w) => to_value(&whitehead_minimize(&one(w)?)?),
        WhiteheadCmd::Separable { word, node_cap } => {
            let (sep, cert) = is_separable_capped(&one(word)?, *node_cap)?;
            json!({ "separable": sep, "certificate": cert })
        }
        WhiteheadCmd::Primitive(w) => json!({ "primitive": is_primitive(&one(w)?)? }),
        WhiteheadCmd::Primpair(w) => {
            let (p, q) = primitive_pair_factorization(&one(w)?)?;
            json!({ "p": p, "q": q })
        }
    };
    Ok(Output::Json(v))
}

fn run_qm(cmd: &QmCmd) -> Result<Output> {
    let v = match cmd {
        QmCmd::Eval { pattern, word, rank } => {
            let n = resolve_rank(rank, &[pattern, word])?;
            let q = CountingQuasimorphism::new(parse(pattern, n)?)?;
            json!({ "value": q.eval(&parse(word, n)?)?, "method": "brooks-count",
                    "parameters": { "pattern": pattern, "word": word, "n": n } })
        }
        QmCmd::Homog { pattern, word, rank } => {
            let n = resolve_rank(rank, &[pattern, word])?;
            let q = CountingQuasimorphism::new(parse(pattern, n)?)?;
            json!({ "value": q.homogenized(&parse(word, n)?)?, "method": "cyclic-count",
                    "parameters": { "pattern": pattern, "word": word, "n": n } })
        }
        QmCmd::Pk { n, k } => {
            let p = make_pk(*n, *k)?;
            json!({ "value": p, "method": "construction", "parameters": { "n": n, "k": k }, "length": p.len() })
        }
        QmCmd::Defect { pattern, len, samples, seed, rank } => {
            let n = resolve_rank(rank, &[pattern])?;
            let q = CountingQuasimorphism::new(parse(pattern, n)?)?;
            let d = match samples {
                Some(s) => defect_sample(&q, *len, *s, *seed),
                None => defect_search(&q, *len)?,
            };
            json!({ "value": d, "method": d.method,
                    "parameters": { "pattern": pattern, "len": len, "samples": samples, "seed": seed, "n": n } })
        }
    };
    Ok(Output::Json(v))
}

fn run_norm(cmd: &NormCmd) -> Result<Output> {
    let v = match cmd {
        NormCmd::Bounds { word, ks, bfs_genlen, bfs_radius } => {
            let g = one(word)?;
            let defect = standard_defect(g.rank(), ks)?;
            let bounds = norm_bounds(&g, ks, &defect)?;
            let bfs = match (bfs_genlen, bfs_radius) {
                (None, None) => None,
                (gl, r) => Some(BfsOracle::new(g.rank(), gl.unwrap_or(5), r.unwrap_or(4))?.distance(&g)?),
            };
            json!({ "word": g, "bounds": bounds, "bfs": bfs })
        }
        NormCmd::Bfs { word, gen_len, radius } => {
            let g = one(word)?;
            to_value(&BfsOracle::new(g.rank(), *gen_len, *radius)?.distance(&g)?)
        }
    };
    Ok(Output::Json(v))
}

fn run_flat(cmd: &FlatCmd) -> Result<Output> {
    let FlatCmd::Certify { m, n, range, samples, seed, basepoints, format } = cmd;
    let spec = if basepoints.is_empty() {
        FlatSpec::standard(*n, *m)?
    } else {
        if basepoints.len() != *m {
            return Err(Error::InvalidInput(format!("{} basepoints given for m = {m}", basepoints.len())));
        }
        FlatSpec::with_basepoints(*n, basepoints.iter().map(|b| parse(b, *n)).collect::<Result<_>>()?)?
    };
    let cert = flat_certificate(&spec, *range, *samples, *seed)?;
    match format {
        Format::Csv => Ok(Output::Text(cert.to_csv())),
        Format::Dot => Err(Error::InvalidInput("certificates are available as json or csv".into())),
        Format::Json => Ok(Output::Json(to_value(&cert))),
    }
}

fn run_whc(cmd: &WhcCmd) -> Result<Output> {
    let WhcCmd::Dist { g, h, conj_len, ks, rank } = cmd;
    let n = resolve_rank(rank, &[g, h])?;
    let (g, h) = (parse(g, n)?, parse(h, n)?);
    let defect = standard_defect(n, ks)?;
    let lower = quotient_dist_lower(&g, &h, ks, &defect)?;
    let upper = quotient_dist_upper(&g, &h, *conj_len)?;
    Ok(Output::Json(json!({ "lower": lower, "upper": upper })))
}

fn run_split(cmd: &SplitCmd) -> Result<Output> {
    let v = match cmd {
        SplitCmd::Project { n, w } => {
            let t = SplittingTHw::new(*n, &parse(w, *n)?)?;
            let a_n = t.a_n();
            json!({
                "r": project_r(&t)?,
                "w": t.w(),
                "b": t.b(),
                "axis": axis_entry_exit(&t)?,
                "syllable_forms": {
                    "a_n": basis_rewrite(&a_n, &t)?,
                    "a_n_inverse": basis_rewrite(&a_n.invert(), &t)?,
                },
            })
        }
        SplitCmd::VerifySection { n, count, maxlen, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut failures = Vec::new();
            for _ in 0..*count {
                let len = rng.gen_range(0..=*maxlen);
                let w = random_reduced_word(&mut rng, n.saturating_sub(1).max(2), len);
                let w = w.with_rank(*n)?;
                if !verify_section(&w, *n)? {
                    failures.push(w);
                }
            }
            json!({ "checked": count, "all_true": failures.is_empty(), "failures": failures })
        }
    };
    Ok(Output::Json(v))
}

fn run_es(cmd: &EsCmd) -> Result<Output> {
    let v = match cmd {
        EsCmd::Vertex { n, w } => to_value(&es_vertex(&parse(w, *n)?, *n)?),
        EsCmd::Neighbor { n, w, u } => to_value(&es_common_neighbor(&parse(w, *n)?, &parse(u, *n)?, *n)?),
    };
    Ok(Output::Json(v))
}

fn run_suite(args: &SuiteArgs) -> (Result<Output>, bool) {
    let Some(ids) = suite_criteria(&args.name) else {
        let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
        return (Err(Error::InvalidInput(format!("unknown suite {:?}; known: all, {}", args.name, names.join(", ")))), false);
    };
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    for id in ids {
        match run_criterion(id) {
            Ok(r) => {
                timings.push(json!({ "id": r.id, "elapsed_ms": r.elapsed_ms, "time_limit_ms": r.time_limit_ms }));
                reports.push(r);
            }
            Err(e) => return (Err(e), false),
        }
    }
    let failed = reports.iter().any(|r| !r.passed);
    let result = json!({
        "suite": args.name,
        "passed": !failed,
        "criteria": reports.iter().map(|r| json!({
            "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail
        })).collect::<Vec<_>>(),
    });
    (Ok(Output::JsonWithExtra(result, Value::Array(timings))), failed)
}

fn command_name(c: &Command) -> String {
    let v = serde_json::to_value(c).expect("commands serialize");
    match &v {
        Value::Object(outer) => {
            let (group, inner) = outer.iter().next().expect("one variant");
            match inner {
                Value::Object(o) if o.len() == 1 && o.values().all(Value::is_object) => {
                    format!("{group} {}", o.keys().next().expect("one key"))
                }
                _ => group.clone(),
            }
        }
        Value::String(s) => s.clone(),
        _ => String::new(),
    }
}

fn parameters(c: &Command) -> Value {
    let v = serde_json::to_value(c).expect("commands serialize");
    let mut cur = &v;
    while let Value::Object(o) = cur {
        match o.iter().next() {
            Some((_, inner @ Value::Object(_))) if o.len() == 1 => cur = inner,
            _ => break,
        }
    }
    cur.clone()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let params = parameters(&cli.command);
    let seed = params.get("seed").and_then(Value::as_u64).unwrap_or(0);
    let (outcome, failed) = match &cli.command {
        Command::Word(c) => (run_word(c), false),
        Command::Whitehead(c) => (run_whitehead(c), false),
        Command::Qm(c) => (run_qm(c), false),
        Command::Norm(c) => (run_norm(c), false),
        Command::Flat(c) => (run_flat(c), false),
        Command::Whc(c) => (run_whc(c), false),
        Command::Split(c) => (run_split(c), false),
        Command::Es(c) => (run_es(c), false),
        Command::Suite(a) => run_suite(a),
    };
    emit(&name, params, seed, outcome, failed)
}
