//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::antisym::{linear_poly_matrix, pfaffian, pfaffian_poly, AntisymMatrix, AntisymNet};
use crate::autgroup::{check_range, general_section, quasihomogeneity_report, AutReport, Verdict};
use crate::error::{Error, Result};
use crate::grassmann::{center_curve, ProjPoint, SectionJson, SectionSpec};
use crate::matrix::RatMatrix;
use crate::nets::{apolarity_data, net_from_projection, net_normal_form_g15, net_section, veronese_center_map};
use crate::normal_forms::{
    even_pencil_normal, hyperplane_even_normal, net_g15_normal, normal_net_cubic, odd_pencil_normal, symplectic_form,
};
use crate::pencils::{donagi_normal_form, even_pencil_normal_form};
use crate::polar::{is_polar_triangle, non_polar_witness, Conic, Triangle};
use crate::poly::HomogPoly;
use crate::random::{random_int, random_invertible, seeded, RETRY_CAP};
use crate::rational::{format_rat, parse_rat, rat, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OPERATIONAL: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

const CONJUGATOR_BOUND: i64 = 3;

#[derive(Parser, Debug)]
#[command(name = "linsec", version, about = "Automorphisms of linear sections of G(1,N)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long = "entry-bound", default_value_t = 20)]
    pub entry_bound: i64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Automorphism dimensions of seeded general sections for all 4 ≤ N ≤ max-N, 1 ≤ l ≤ 2N−5.
    Scan {
        #[arg(long = "max-N", default_value_t = 10)]
        max_n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// AutReport of one section.
    AutDim(Cell),
    /// AutReport checked against the quasihomogeneity census.
    Quasihomog(Cell),
    /// Normal forms of pencils and nets
    #[command(subcommand)]
    NormalForm(NormalFormCmd),
    /// Center curve of a pencil of odd size.
    CenterCurve(InputOnly),
    /// Center map of a net of 5×5 matrices and its projection center.
    Veronese(InputOnly),
    /// Polar triangles of conics
    #[command(subcommand)]
    Polar(PolarCmd),
    /// Section built from a normal form, conjugated by a seeded matrix.
    Generate(GenerateArgs),
    /// Pfaffian of a matrix or Pfaffian form of a pencil or net.
    Pfaffian(InputOnly),
}

#[derive(Args, Debug)]
pub struct Cell {
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct InputOnly {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum NormalFormCmd {
    /// Pencil normal form (odd N: roots and conjugator; even N: block form)
    Pencil(InputOnly),
    /// Normal form (α,β,γ,δ) of a net of 6×6 matrices
    Net(InputOnly),
}

#[derive(Subcommand, Debug)]
pub enum PolarCmd {
    /// Is the triangle polar for the conic; a counterexample conic if not.
    Check {
        #[arg(long)]
        conic: PathBuf,
        #[arg(long)]
        triangle: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    OddPencil,
    EvenPencil,
    NetG15,
    NetG14,
    Hyperplane,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Comma separated parameters: the roots λᵢ (odd-pencil), α,β,γ,δ (net-g15)
    /// or the upper triangle of P (net-g14, random when absent).
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// n of the even pencil (size 2n+1).
    #[arg(long)]
    pub n: Option<usize>,
    /// N of the hyperplane section.
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Ground truth file; defaults to the output path with extension .truth.json.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

/// Table value of dim Aut for a general section.
pub fn expected_aut_dim(n: usize, l: usize) -> usize {
    match (n, l) {
        (_, 1) => (n * n + 3 * n + 2) / 2,
        (_, 2) if n.is_multiple_of(2) => n + 4,
        (_, 2) => 3 * (n + 1) / 2,
        (4, 3) => 3,
        (5, 3) => 1,
        _ => 0,
    }
}

/// Census verdict for a general section.
pub fn expected_verdict(n: usize, l: usize) -> Verdict {
    match (n, l) {
        (_, 1) | (4..=6, 2) | (4, 3) => Verdict::Quasihomogeneous,
        _ => Verdict::NotQuasihomogeneous,
    }
}

/// Seed of the k-th section of cell (N, l).
pub fn cell_seed(seed: u64, n: usize, l: usize, k: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((n as u64) << 40 | (l as u64) << 20 | k as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    pub reports: Vec<AutReport>,
    pub mismatches: Vec<String>,
}

/// Every cell of the scan, in (N, l, k) order.
pub fn scan(max_n: usize, samples: usize, seed: u64, entry_bound: i64) -> Result<ScanOutcome> {
    if !(4..=10).contains(&max_n) {
        return Err(Error::Invalid(format!("max-N must lie in 4..=10, got {max_n}")));
    }
    let cells: Vec<(usize, usize, usize)> =
        (4..=max_n).flat_map(|n| (1..=2 * n - 5).flat_map(move |l| (0..samples).map(move |k| (n, l, k)))).collect();
    let reports = cells
        .par_iter()
        .map(|&(n, l, k)| {
            let cs = cell_seed(seed, n, l, k);
            let s = general_section(&mut seeded(cs), n, l, entry_bound)?;
            quasihomogeneity_report(&s, cs, samples.max(1))
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatches = reports
        .iter()
        .filter(|r| r.aut_dim != expected_aut_dim(r.n, r.l))
        .map(|r| format!("N={} l={} seed={}: aut_dim {} expected {}", r.n, r.l, r.seed, r.aut_dim, expected_aut_dim(r.n, r.l)))
        .collect();
    Ok(ScanOutcome { reports, mismatches })
}

pub fn reports_csv(reports: &[AutReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "N",
        "l",
        "aut_dim",
        "expected_aut_dim",
        "section_dim",
        "sample_line_stab_dim",
        "orbit_dim",
        "verdict",
        "seed",
        "samples",
    ])
    .map_err(io_err)?;
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Quasihomogeneous => "quasihomogeneous",
            Verdict::NotQuasihomogeneous => "not_quasihomogeneous",
        };
        w.write_record([
            r.n.to_string(),
            r.l.to_string(),
            r.aut_dim.to_string(),
            expected_aut_dim(r.n, r.l).to_string(),
            r.section_dim.to_string(),
            r.sample_line_stab_dim.to_string(),
            r.orbit_dim.to_string(),
            verdict.to_string(),
            r.seed.to_string(),
            r.samples.to_string(),
        ])
        .map_err(io_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?).map_err(|e| Error::Invalid(e.to_string()))
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("i/o: {e}"))
}

fn render_reports(reports: &[AutReport], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(pretty(&serde_json::to_value(reports).map_err(io_err)?)),
        Format::Csv => reports_csv(reports),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| io_err(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_section(path: &Path) -> Result<SectionSpec> {
    SectionSpec::from_json(&read_json::<SectionJson>(path)?)
}

fn cell_section(cell: &Cell) -> Result<SectionSpec> {
    if let Some(p) = &cell.input {
        let s = read_section(p)?;
        if cell.n.is_some_and(|n| n != s.n()) || cell.l.is_some_and(|l| l != s.l()) {
            return Err(Error::Invalid("--N/--l disagree with the input section".into()));
        }
        return Ok(s);
    }
    let (Some(n), Some(l)) = (cell.n, cell.l) else {
        return Err(Error::Invalid("need --input or both --N and --l".into()));
    };
    check_range(n, l)?;
    general_section(&mut seeded(cell.common.seed), n, l, cell.common.entry_bound)
}

fn aut_report(cell: &Cell) -> Result<AutReport> {
    let s = cell_section(cell)?;
    quasihomogeneity_report(&s, cell.common.seed, cell.common.samples.max(1))
}

fn pencil_normal_form(s: &SectionSpec) -> Result<Value> {
    let pencil = s.pencil()?;
    if pencil.size() % 2 == 0 {
        let nf = donagi_normal_form(&pencil)?;
        Ok(json!({
            "kind": "odd",
            "lambdas": nf.lambdas.iter().map(format_rat).collect::<Vec<_>>(),
            "shift": format_rat(&nf.shift),
            "T": nf.t,
        }))
    } else {
        let nf = even_pencil_normal_form(&pencil)?;
        Ok(json!({ "kind": "even", "lambdas": Vec::<String>::new(), "T": nf.t }))
    }
}

fn section_net(s: &SectionSpec) -> Result<AntisymNet> {
    if s.l() != 3 {
        return Err(Error::Invalid(format!("expected a net, got l = {}", s.l())));
    }
    let m = s.matrices();
    AntisymNet::new(m[0].clone(), m[1].clone(), m[2].clone())
}

fn net_normal_form(s: &SectionSpec) -> Result<Value> {
    let nf = net_normal_form_g15(&section_net(s)?)?;
    Ok(json!({
        "alpha": format_rat(&nf.alpha),
        "beta": format_rat(&nf.beta),
        "gamma": format_rat(&nf.gamma),
        "delta": format_rat(&nf.delta),
        "cubic": normal_net_cubic(&nf.alpha, &nf.beta, &nf.gamma, &nf.delta).to_json(),
        "T": nf.t,
        "recombination": nf.recombination,
    }))
}

fn center_curve_json(s: &SectionSpec) -> Result<Value> {
    let pencil = s.pencil()?;
    if pencil.size() % 2 == 0 {
        return Err(Error::Dimension("center curves need matrices of odd size".into()));
    }
    let c = center_curve(&pencil)?;
    Ok(json!({ "components": c.iter().map(HomogPoly::to_json).collect::<Vec<_>>() }))
}

fn veronese_json(s: &SectionSpec) -> Result<Value> {
    let net = section_net(s)?;
    let map = veronese_center_map(&net)?;
    let apol = apolarity_data(&map)?;
    Ok(json!({
        "quadrics": map.components.iter().map(HomogPoly::to_json).collect::<Vec<_>>(),
        "P_matrix": apol.p_matrix,
        "C_P_matrix": apol.c_p_matrix,
    }))
}

fn pfaffian_json(s: &SectionSpec) -> Result<Value> {
    let ms = s.matrices();
    if ms[0].size() % 2 == 1 {
        return Err(Error::Dimension("Pfaffians need matrices of even size".into()));
    }
    match ms.len() {
        1 => Ok(json!({ "pfaffian": format_rat(&pfaffian(&ms[0])) })),
        l @ (2 | 3) => {
            let vars: Vec<HomogPoly> = (0..l).map(|i| HomogPoly::var(l, i)).collect();
            let refs: Vec<&AntisymMatrix> = ms.iter().collect();
            Ok(json!({ "pfaffian": pfaffian_poly(&linear_poly_matrix(&vars, &refs)).to_json() }))
        }
        l => Err(Error::Invalid(format!("Pfaffian forms are supported for l ≤ 3, got {l}"))),
    }
}

fn parse_point(v: &[String]) -> Result<ProjPoint> {
    ProjPoint::new(v.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>()?)
}

/// Reads a conic (3×3 matrix of rational strings) and a triangle (three points).
pub fn polar_check(conic: &Path, triangle: &Path) -> Result<Value> {
    let c = Conic::new(read_json::<RatMatrix>(conic)?)?;
    let pts: Vec<Vec<String>> = read_json(triangle)?;
    if pts.len() != 3 {
        return Err(Error::Invalid("a triangle has three vertices".into()));
    }
    let t = Triangle::new(parse_point(&pts[0])?, parse_point(&pts[1])?, parse_point(&pts[2])?)?;
    if is_polar_triangle(&c, &t)? {
        Ok(json!({ "polar_triangle": true, "witness": Value::Null }))
    } else {
        Ok(json!({ "polar_triangle": false, "witness": non_polar_witness(&c, &t)?.matrix() }))
    }
}

/// Hidden data of a generated section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub kind: GenKind,
    /// λᵢ, (α,β,γ,δ) or the upper triangle of P.
    pub params: Vec<String>,
    pub n: Option<usize>,
    /// The section is the normal form moved by Aᵢ ↦ ᵗT⁻¹AᵢT⁻¹.
    pub conjugator: RatMatrix,
    /// Row k gives the k-th emitted matrix in the normal-form members.
    pub recombination: Option<RatMatrix>,
}

fn parse_params(p: &Option<String>) -> Result<Vec<Rational>> {
    match p {
        None => Ok(Vec::new()),
        Some(s) => s.split(',').map(|x| parse_rat(x.trim())).collect(),
    }
}

fn sym_from_upper(v: &[Rational]) -> RatMatrix {
    let idx = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    RatMatrix::from_fn(3, 3, |i, j| v[idx[i][j]].clone())
}

fn combine_rows(ms: &[AntisymMatrix], r: &RatMatrix) -> Vec<AntisymMatrix> {
    (0..r.rows())
        .map(|i| ms.iter().enumerate().fold(AntisymMatrix::zeros(ms[0].size()), |acc, (j, m)| acc.add(&m.scale(&r[(i, j)]))))
        .collect()
}

/// Recombination [[x,y,0],[z,w,0],[u,v,1]]: the sub-pencil of the first two members keeps its span.
fn random_recombination<R: rand::Rng>(rng: &mut R) -> Result<RatMatrix> {
    let block = random_invertible(rng, 2, CONJUGATOR_BOUND)?;
    let (u, v) = (rat(random_int(rng, CONJUGATOR_BOUND)), rat(random_int(rng, CONJUGATOR_BOUND)));
    Ok(RatMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (2, 0) => u.clone(),
        (2, 1) => v.clone(),
        (2, 2) => rat(1),
        (_, 2) => rat(0),
        _ => block[(i, j)].clone(),
    }))
}

/// Builds the section for `kind` and its ground truth.
pub fn generate(
    kind: GenKind,
    params: &Option<String>,
    n: Option<usize>,
    big_n: Option<usize>,
    seed: u64,
) -> Result<(SectionSpec, GroundTruth)> {
    let mut rng = seeded(seed);
    let ps = parse_params(params)?;
    let strs = |v: &[Rational]| v.iter().map(format_rat).collect::<Vec<_>>();
    let (normal, truth_params, size_n, recomb): (Vec<AntisymMatrix>, Vec<String>, Option<usize>, Option<RatMatrix>) = match kind {
        GenKind::OddPencil => {
            if ps.len() < 2 {
                return Err(Error::Invalid("odd-pencil needs at least two roots in --params".into()));
            }
            let p = odd_pencil_normal(&ps);
            (vec![p.a, p.b], strs(&ps), Some(ps.len()), None)
        }
        GenKind::EvenPencil => {
            let n = n.ok_or_else(|| Error::Invalid("even-pencil needs --n".into()))?;
            if n < 2 {
                return Err(Error::Invalid("even-pencil needs n ≥ 2".into()));
            }
            let p = even_pencil_normal(n);
            (vec![p.a, p.b], Vec::new(), Some(n), None)
        }
        GenKind::NetG15 => {
            if ps.len() != 4 {
                return Err(Error::Invalid("net-g15 needs --params alpha,beta,gamma,delta".into()));
            }
            let net = net_g15_normal(&ps[0], &ps[1], &ps[2], &ps[3])?;
            let r = random_recombination(&mut rng)?;
            let ms = combine_rows(&[net.a, net.b, net.c], &r);
            (ms, strs(&ps), None, Some(r))
        }
        GenKind::NetG14 => {
            let p = match ps.len() {
                6 => sym_from_upper(&ps),
                0 => random_projection_center(&mut rng)?,
                _ => return Err(Error::Invalid("net-g14 takes the six upper entries of P".into())),
            };
            let net = net_from_projection(&p)?;
            let upper = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)].map(|(i, j)| p[(i, j)].clone());
            (vec![net.a, net.b, net.c], strs(&upper), None, None)
        }
        GenKind::Hyperplane => {
            let big = big_n.ok_or_else(|| Error::Invalid("hyperplane needs --N".into()))?;
            check_range(big, 1)?;
            let a = if big % 2 == 0 { hyperplane_even_normal(big / 2) } else { symplectic_form(big.div_ceil(2)) };
            (vec![a], Vec::new(), Some(big), None)
        }
    };
    let size = normal[0].size();
    let t = random_invertible(&mut rng, size, CONJUGATOR_BOUND)?;
    let s = SectionSpec::new(size - 1, normal)?.act(&t)?;
    Ok((s, GroundTruth { kind, params: truth_params, n: size_n, conjugator: t, recombination: recomb }))
}

fn random_projection_center<R: rand::Rng>(rng: &mut R) -> Result<RatMatrix> {
    for _ in 0..RETRY_CAP {
        let v: Vec<Rational> = (0..6).map(|_| rat(random_int(rng, CONJUGATOR_BOUND))).collect();
        let p = sym_from_upper(&v);
        if p.det().is_zero() {
            continue;
        }
        if let Ok(net) = net_from_projection(&p) {
            if net_section(&net).is_ok() && veronese_center_map(&net).is_ok() {
                return Ok(p);
            }
        }
    }
    Err(Error::RetryCap(RETRY_CAP))
}

fn truth_path(args: &GenerateArgs) -> Option<PathBuf> {
    args.truth.clone().or_else(|| args.output.as_ref().map(|p| p.with_extension("truth.json")))
}

fn single(report: &AutReport, common: &Common) -> Result<String> {
    match common.format {
        Format::Json => Ok(pretty(&serde_json::to_value(report).map_err(io_err)?)),
        Format::Csv => reports_csv(std::slice::from_ref(report)),
    }
}

fn json_only(v: Value, output: Option<&Path>) -> Result<i32> {
    emit(&pretty(&v), output)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Scan { max_n, common } => {
            let out = scan(max_n, common.samples, common.seed, common.entry_bound)?;
            emit(&render_reports(&out.reports, common.format)?, common.output.as_deref())?;
            for m in &out.mismatches {
                eprintln!("mismatch: {m}");
            }
            Ok(if out.mismatches.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::AutDim(cell) => {
            let r = aut_report(&cell)?;
            emit(&single(&r, &cell.common)?, cell.common.output.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Quasihomog(cell) => {
            let r = aut_report(&cell)?;
            emit(&single(&r, &cell.common)?, cell.common.output.as_deref())?;
            // Census claims concern general sections only.
            if cell.input.is_none() && r.verdict != expected_verdict(r.n, r.l) {
                eprintln!("mismatch: N={} l={} verdict {:?}, expected {:?}", r.n, r.l, r.verdict, expected_verdict(r.n, r.l));
                return Ok(EXIT_MISMATCH);
            }
            Ok(EXIT_OK)
        }
        Command::NormalForm(NormalFormCmd::Pencil(a)) => json_only(pencil_normal_form(&read_section(&a.input)?)?, a.output.as_deref()),
        Command::NormalForm(NormalFormCmd::Net(a)) => json_only(net_normal_form(&read_section(&a.input)?)?, a.output.as_deref()),
        Command::CenterCurve(a) => json_only(center_curve_json(&read_section(&a.input)?)?, a.output.as_deref()),
        Command::Veronese(a) => json_only(veronese_json(&read_section(&a.input)?)?, a.output.as_deref()),
        Command::Pfaffian(a) => json_only(pfaffian_json(&read_section(&a.input)?)?, a.output.as_deref()),
        Command::Polar(PolarCmd::Check { conic, triangle, output }) => json_only(polar_check(&conic, &triangle)?, output.as_deref()),
        Command::Generate(args) => {
            let (s, truth) = generate(args.kind, &args.params, args.n, args.big_n, args.seed)?;
            emit(&pretty(&serde_json::to_value(s.to_json()).map_err(io_err)?), args.output.as_deref())?;
            if let Some(p) = truth_path(&args) {
                emit(&pretty(&serde_json::to_value(&truth).map_err(io_err)?), Some(&p))?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_OPERATIONAL
        }
    }
}
