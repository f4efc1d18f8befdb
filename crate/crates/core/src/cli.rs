//! Command-line surface: argument parsing, file IO and run reports.

use crate::arith::Q;
use crate::checks::{run_suite, SuiteReport, SUITES};
use crate::discform::isotropic_subgroups;
use crate::discriminant::form_invariants;
use crate::eichler::{eichler_move, EichlerSetting};
use crate::error::{Error, Result};
use crate::hecke::hecke_t;
use crate::heegner::{dim_cusp, obstruction_span_steps, rank_formula_terms, AdmissibleDecomposition};
use crate::lattice::{eichler_lattice, from_blocks, parse_lattice_file, split_predicates, EvenLattice};
use crate::mp::{parse_word, word_product};
use crate::qexp::{parse_q, FourierExpansion};
use crate::theta::{theta_coeffs, theta_coeffs_negative};
use crate::weil::WeilRep;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "vvmf", version, about = "Even lattices, Weil representations and vector-valued modular forms")]
pub struct Cli {
    /// seed for randomized suites
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// worker threads (results do not depend on it)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// output path for q-expansion files, or for the report
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, signature, discriminant form invariants and isotropic subgroups
    LatticeInfo {
        /// lattice file, or a block expression such as "U(1) + E8(-1)"
        #[arg(long)]
        lattice: String,
    },
    /// Exact matrix of ρ(word) on the discriminant form of a lattice
    WeilMatrix {
        #[arg(long)]
        lattice: String,
        /// word in S, T and t = T⁻¹
        #[arg(long, default_value = "S")]
        element: String,
    },
    /// Theta series of a definite lattice as a q-expansion file
    Theta {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value = "5")]
        prec: String,
    },
    /// Applies T_{α²} to a q-expansion file
    HeckeApply {
        #[arg(long)]
        alpha2: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        prec: String,
    },
    /// Span of the obstruction space from admissible decompositions
    Obstruction {
        #[arg(long)]
        lattice: String,
        /// JSON file with decompositions, or "auto" for the first two hyperbolic blocks
        #[arg(long, default_value = "auto")]
        decomp: String,
        #[arg(long, default_value = "1")]
        prec: String,
        /// precision increments used for the stabilization check
        #[arg(long, default_value_t = 2)]
        steps: u32,
    },
    /// r_g with the term breakdown
    RankFormula {
        #[arg(long)]
        g: i64,
    },
    /// Isometry of U ⊕ U(2) ⊕ A1(−1)^m sending u to v
    EichlerMove {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Runs a named property suite, or "all"
    Checks { suite: String },
}

/// Outcome class of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Done,
    Undecided,
    ChecksFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Done => 0,
            Status::ChecksFailed => 1,
            Status::Undecided => 3,
        }
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Undecided(_) => 3,
        _ => 2,
    }
}

/// Human text plus a deterministic machine-readable section (everything except timing and free text).
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub params: Vec<(String, String)>,
    pub text: Vec<String>,
    pub results: Vec<(String, Value)>,
    pub flags: Vec<(String, bool)>,
    pub wall_clock: f64,
}

impl RunReport {
    fn new(command: String) -> RunReport {
        RunReport { command, inputs: vec![], params: vec![], text: vec![], results: vec![], flags: vec![], wall_clock: 0.0 }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.into(), v.to_string()));
    }

    fn result(&mut self, k: &str, v: Value) {
        self.results.push((k.into(), v));
    }

    fn flag(&mut self, k: &str, v: bool) {
        self.flags.push((k.into(), v));
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn machine(&self) -> Value {
        let obj = |v: Vec<(String, Value)>| Value::Object(v.into_iter().collect::<Map<_, _>>());
        json!({
            "command": self.command,
            "inputs": obj(self.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect()),
            "params": obj(self.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect()),
            "results": obj(self.results.clone()),
            "flags": obj(self.flags.iter().map(|(k, v)| (k.clone(), json!(v))).collect()),
        })
    }

    pub fn render(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            s += &format!("input {}: sha256 {}\n", k, v);
        }
        for (k, v) in &self.params {
            s += &format!("param {}: {}\n", k, v);
        }
        for l in &self.text {
            s += l;
            s.push('\n');
        }
        for (k, v) in &self.results {
            s += &format!("result {}: {}\n", k, v);
        }
        for (k, v) in &self.flags {
            s += &format!("flag {}: {}\n", k, v);
        }
        s += &format!("wall-clock: {:.3}s\n", self.wall_clock);
        s += "--- machine-readable ---\n";
        s += &serde_json::to_string_pretty(&self.machine()).expect("json values serialize");
        s.push('\n');
        s
    }
}

fn show(q: Q) -> String {
    q.to_string()
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{:02x}", b)).collect()
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

/// A path to a lattice file, or a block expression.
fn load_lattice(arg: &str, rep: &mut RunReport) -> Result<EvenLattice> {
    let p = std::path::Path::new(arg);
    if p.is_file() {
        let text = read(p)?;
        rep.inputs.push((arg.into(), digest(text.as_bytes())));
        parse_lattice_file(&text)
    } else {
        rep.inputs.push(("blocks".into(), digest(arg.as_bytes())));
        let mut l = from_blocks(arg)?;
        l.blocks = Some(arg.trim().to_string());
        Ok(l)
    }
}

fn parse_vec(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad coordinate '{}'", t))))
        .collect()
}

fn int_matrix(v: &Value) -> Result<Vec<Vec<i64>>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("change_of_basis must be an array of rows".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("matrix entries must be integers".into())))
                .collect()
        })
        .collect()
}

/// `{"n1": 1, "n2": 1, "change_of_basis": [[...]]}`, or `{"decompositions": [...]}` with several of those.
pub fn parse_decompositions(text: &str, m: &EvenLattice) -> Result<Vec<AdmissibleDecomposition>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("decomposition file: {}", e)))?;
    let items = match v.get("decompositions") {
        Some(Value::Array(a)) => a.clone(),
        Some(_) => return Err(Error::Parse("decompositions must be an array".into())),
        None => vec![v],
    };
    items
        .iter()
        .map(|d| {
            let n = |k: &str| d.get(k).and_then(Value::as_i64).ok_or_else(|| Error::Parse(format!("missing integer '{}'", k)));
            let c = d.get("change_of_basis").ok_or_else(|| Error::Parse("missing change_of_basis".into()))?;
            AdmissibleDecomposition::new(m, int_matrix(c)?, n("n1")?, n("n2")?)
        })
        .collect()
}

fn write_out(path: &Option<PathBuf>, text: &str, rep: &mut RunReport) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::Precondition(format!("{}: {}", p.display(), e)))?;
            rep.line(format!("wrote {}", p.display()));
        }
        None => rep.text.extend(text.lines().map(String::from)),
    }
    Ok(())
}

fn suite_value(r: &SuiteReport) -> Value {
    json!({ "cases": r.cases, "failures": r.failures, "passed": r.passed() })
}

/// Executes one command; the report is complete even when the status is not `Done`.
pub fn run(cli: &Cli, command_echo: String) -> Result<(RunReport, Status)> {
    let start = Instant::now();
    let mut rep = RunReport::new(command_echo);
    let mut status = Status::Done;
    rep.param("seed", cli.seed);
    match &cli.command {
        Command::LatticeInfo { lattice } => {
            let l = load_lattice(lattice, &mut rep)?;
            let g = l.discriminant();
            let inv = form_invariants(&g);
            rep.result("rank", json!(l.rank()));
            rep.result("signature", json!([l.signature.0, l.signature.1]));
            rep.result("det", json!(l.det().to_string()));
            rep.result("group_divisors", json!(g.divisors));
            rep.result("order", json!(inv.order));
            rep.result("level", json!(inv.level));
            rep.result("signature_mod8", json!(inv.signature_mod8));
            rep.result("p_ranks", json!(inv.p_ranks));
            rep.result("coparity", json!(inv.coparity));
            rep.result("characteristic_element", json!(inv.characteristic_element));
            if g.order() <= 4096 {
                let subs = isotropic_subgroups(&g);
                let mut by_order = std::collections::BTreeMap::new();
                for h in &subs {
                    *by_order.entry(h.order().to_string()).or_insert(0usize) += 1;
                }
                rep.result("isotropic_subgroups", json!(by_order));
            } else {
                rep.line("isotropic subgroups: skipped (|G| > 4096)");
            }
            for (p, _) in &inv.p_ranks {
                let s = split_predicates(&l, *p);
                rep.result(
                    &format!("split_p{}", p),
                    json!({
                        "local_hyperbolic_sufficient": s.local_hyperbolic_sufficient,
                        "two_global_u_sufficient": s.two_global_u_sufficient,
                        "p_elementary": s.p_elementary,
                        "p_elementary_splits_u": s.p_elementary_splits_u,
                    }),
                );
            }
        }
        Command::WeilMatrix { lattice, element } => {
            let l = load_lattice(lattice, &mut rep)?;
            rep.param("element", element);
            let w = WeilRep::new(&l.discriminant());
            let m = w.rho(&word_product(&parse_word(element)?))?;
            rep.line(format!("conductor {}, dimension {}", w.cond, w.dim()));
            for row in &m {
                let fl: Vec<String> = row
                    .iter()
                    .map(|x| {
                        let z = x.to_complex();
                        format!("{:+.6}{:+.6}i", z.re, z.im)
                    })
                    .collect();
                rep.line(format!("  [{}]", fl.join(", ")));
            }
            rep.result("conductor", json!(w.cond));
            rep.result("matrix", json!(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()));
        }
        Command::Theta { lattice, prec } => {
            let l = load_lattice(lattice, &mut rep)?;
            let p = parse_q(prec)?;
            rep.param("prec", show(p));
            let f = if l.is_positive_definite() {
                theta_coeffs(&l, None, p)?
            } else if l.is_negative_definite() {
                theta_coeffs_negative(&l, None, p)?
            } else {
                return Err(Error::Precondition("theta needs a definite lattice".into()));
            };
            let c0: Vec<String> = (0..=p.to_integer()).map(|n| f.get(0, Q::from_integer(n)).to_string()).collect();
            rep.result("weight", json!(show(f.weight)));
            rep.result("nonzero_slots", json!(f.slots().len()));
            rep.result("c0", json!(c0));
            write_out(&cli.out, &f.to_text(), &mut rep)?;
        }
        Command::HeckeApply { alpha2, input, prec } => {
            let text = read(input)?;
            rep.inputs.push((input.display().to_string(), digest(text.as_bytes())));
            let p = parse_q(prec)?;
            rep.param("alpha2", alpha2);
            rep.param("prec", show(p));
            let alpha = (*alpha2 as f64).sqrt().round() as u64;
            if alpha * alpha != *alpha2 || alpha == 0 {
                return Err(Error::Precondition(format!("{} is not a positive square", alpha2)));
            }
            let f = FourierExpansion::from_text(&text)?;
            let need = p * *alpha2 as i64;
            rep.line(format!("input precision {} ; required α²·P = {}", show(f.prec), show(need)));
            rep.result("required_input_prec", json!(show(need)));
            let g = hecke_t(alpha, &f, p)?;
            rep.result("nonzero_slots", json!(g.slots().len()));
            write_out(&cli.out, &g.to_text(), &mut rep)?;
        }
        Command::Obstruction { lattice, decomp, prec, steps } => {
            let m = load_lattice(lattice, &mut rep)?;
            let p = parse_q(prec)?;
            rep.param("prec", show(p));
            rep.param("steps", steps);
            let decomps = if decomp == "auto" {
                rep.param("decomp", "auto");
                vec![AdmissibleDecomposition::block_split(&m)?]
            } else {
                let text = read(std::path::Path::new(decomp))?;
                rep.inputs.push((decomp.clone(), digest(text.as_bytes())));
                parse_decompositions(&text, &m)?
            };
            let span = obstruction_span_steps(&m, &decomps, p, *steps)?;
            let k = Q::new(m.rank() as i64, 2);
            let dim = dim_cusp(k, &m.discriminant(), true)?;
            for (q, r) in &span.ranks {
                rep.line(format!("P = {}: rank {}", show(*q), r));
            }
            rep.result("decompositions", json!(decomps.len()));
            rep.result("weight", json!(show(k)));
            rep.result("ranks", json!(span.ranks.iter().map(|(q, r)| json!([show(*q), r])).collect::<Vec<_>>()));
            rep.result("obstruction_rank", json!(span.rank));
            rep.result("dim_cusp", json!(dim));
            rep.flag("stabilized", span.stabilized);
            let full = span.rank == dim;
            rep.flag("spans_cusp_space", full);
            if span.stabilized && full {
                rep.result("verdict", json!("obstruction space equals the cusp space: Heegner combinations extending over the boundary are multiples of the Hodge class"));
            } else {
                status = Status::Undecided;
                rep.result("verdict", json!("undecided"));
            }
        }
        Command::RankFormula { g } => {
            rep.param("g", g);
            let t = rank_formula_terms(*g)?;
            rep.line(format!("leading  {}", show(t.leading)));
            rep.line(format!("second   {}", show(t.second)));
            rep.line(format!("third    {}", show(t.third)));
            rep.line(format!("fourth   {}", show(t.fourth)));
            rep.line(format!("frac sum {}", show(t.frac_sum)));
            rep.line(format!("count    {}", t.integral_count));
            rep.result("terms", json!({
                "leading": show(t.leading),
                "second": show(t.second),
                "third": show(t.third),
                "fourth": show(t.fourth),
                "frac_sum": show(t.frac_sum),
                "integral_count": t.integral_count,
            }));
            rep.result("r_g", json!(t.total));
            if *g <= 12 {
                let gm = crate::lattice::lambda_g(*g)?.discriminant();
                let d = dim_cusp(Q::new(21, 2), &gm, true)?;
                rep.result("one_plus_dim_cusp", json!(1 + d));
                rep.flag("oracle_agrees", t.total == 1 + d as i64);
            }
        }
        Command::EichlerMove { lattice, u, v } => {
            let l = load_lattice(lattice, &mut rep)?;
            if l.rank() < 5 {
                return Err(Error::Precondition("expected U + U(2) + A1(-1)^m with m >= 1".into()));
            }
            let m = l.rank() - 4;
            if l.gram != eichler_lattice(m)?.gram {
                return Err(Error::Precondition("Gram matrix is not U + U(2) + A1(-1)^m in the basis e1, f1, e2, f2, r_i".into()));
            }
            let (u, v) = (parse_vec(u)?, parse_vec(v)?);
            rep.param("u", format!("{:?}", u));
            rep.param("v", format!("{:?}", v));
            let set = EichlerSetting::new(m)?;
            let mv = eichler_move(&set, &u, &v)?;
            let verified = mv.isometry.preserves(&l.gram) && mv.isometry.apply(&u) == v;
            for row in &mv.isometry.matrix {
                rep.line(format!("  {:?}", row));
            }
            rep.result("subcase", json!(format!("{:?}", mv.subcase)));
            rep.result("matrix", json!(mv.isometry.matrix));
            rep.result("search_nodes", json!(mv.search_nodes));
            rep.flag("verified", verified);
        }
        Command::Checks { suite } => {
            rep.param("suite", suite);
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            for name in names {
                let r = run_suite(name, cli.seed)?;
                rep.line(format!("{:<16} {} ({} cases)", name, if r.passed() { "pass" } else { "FAIL" }, r.cases));
                for f in &r.failures {
                    rep.line(format!("  {}", f));
                }
                if !r.passed() {
                    status = Status::ChecksFailed;
                }
                rep.result(name, suite_value(&r));
            }
        }
    }
    rep.wall_clock = start.elapsed().as_secs_f64();
    Ok((rep, status))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("workers: {}", e);
        }
    }
    let echo = std::iter::once("vvmf".to_string()).chain(args.iter().skip(1).cloned()).collect::<Vec<_>>().join(" ");
    match run(&cli, echo) {
        Ok((rep, status)) => {
            print!("{}", rep.render());
            status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {}", e);
            error_exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(a: &[&str]) -> (RunReport, Status) {
        let args: Vec<String> = a.iter().map(|s| s.to_string()).collect();
        let cli = Cli::try_parse_from(&args).unwrap();
        run(&cli, args.join(" ")).unwrap()
    }

    #[test]
    fn rank_formula_command() {
        let (rep, st) = run_args(&["vvmf", "rank-formula", "--g", "2"]);
        assert_eq!(st, Status::Done);
        assert_eq!(rep.machine()["results"]["r_g"], json!(2));
        assert_eq!(rep.machine()["flags"]["oracle_agrees"], json!(true));
    }

    #[test]
    fn theta_e8() {
        let (rep, _) = run_args(&["vvmf", "theta", "--lattice", "E8(1)", "--prec", "3"]);
        assert_eq!(rep.machine()["results"]["c0"], json!(["1", "240", "2160", "6720"]));
    }

    #[test]
    fn machine_section_is_deterministic() {
        let a = run_args(&["vvmf", "weil-matrix", "--lattice", "<2>", "--element", "ST"]).0;
        let b = run_args(&["vvmf", "weil-matrix", "--lattice", "<2>", "--element", "ST"]).0;
        assert_eq!(a.machine(), b.machine());
        let text = a.render();
        let (human, _) = text.split_once("--- machine-readable ---").unwrap();
        for (k, _) in &a.results {
            assert!(human.contains(&format!("result {}:", k)));
        }
    }

    #[test]
    fn exit_codes() {
        let args = |a: &[&str]| a.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(main_with_args(args(&["vvmf", "rank-formula", "--g", "1"])), 2);
        assert_eq!(main_with_args(args(&["vvmf", "rank-formula", "--bogus"])), 2);
        assert_eq!(main_with_args(args(&["vvmf", "theta", "--lattice", "U(1)"])), 2);
        assert_eq!(main_with_args(args(&["vvmf", "eichler-move", "--lattice", "U(1) + U(2) + A1(-1)", "--u", "1,0,0,0,0", "--v", "0,0,1,0,0"])), 2);
    }

    #[test]
    fn decomposition_file() {
        let m = crate::lattice::lambda_g(2).unwrap();
        let auto = AdmissibleDecomposition::block_split(&m).unwrap();
        let text = json!({ "n1": auto.n1, "n2": auto.n2, "change_of_basis": auto.change_of_basis }).to_string();
        let d = parse_decompositions(&text, &m).unwrap();
        assert_eq!(d[0].change_of_basis, auto.change_of_basis);
        assert!(parse_decompositions("{\"n1\": 1}", &m).is_err());
    }
}
