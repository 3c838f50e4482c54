use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cuspfol::first_integral::{homographic_case_first_integrals, homography_of, no_first_integral_witness};
use cuspfol::forms::reduce::{reduce_cusp, Verdict, ORDER_LOSS};
use cuspfol::germs::moduli::{homographic_symmetries, normal_pair_equivalent, NormalPair};
use cuspfol::germs::{schwarzian, GermDiff1};
use cuspfol::gluing::cohomology::{coboundary_solve_cocycle, kodaira_spencer_target, CoboundaryOutcome, CoboundarySystem};
use cuspfol::gluing::{build_cocycle, globality_check, Model};
use cuspfol::normal_form::normalize;
use cuspfol::parse::{parse_form, parse_germ, parse_input, parse_pair, parse_series, FormInput, ParseError};
use cuspfol::transversal::{transversal_structure, CornerGerm};
use cuspfol::{Coeff, Error, Jet2};

#[derive(Parser, Debug)]
#[command(name = "cuspfol", version, about = "Exact jet analysis of cusp-type dicritical foliation germs")]
struct Cli {
    /// Print one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Working jet order
    #[arg(long, global = true, default_value_t = 16)]
    order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the two blow-up reduction of a 1-form or `mero:` function
    Reduce { input: String },
    /// Formal normal form of a cusp-type form
    NormalForm { input: String },
    /// Transversal structure at the corner and its Schwarzian
    Sigma { input: String },
    /// Schwarzian derivative of a germ in z
    Schwarzian { germ: String },
    /// Analytic equivalence of two inputs (forms or `pair: <σ> ; <α>`)
    Equiv { first: String, second: String },
    /// Homographic symmetries of a series f in z
    Symmetries {
        series: String,
        /// Read the argument as a germ σ and use its Schwarzian
        #[arg(long)]
        from_sigma: bool,
    },
    /// Search for a rational relation R₁∘σ = R₂
    FirstIntegral {
        germ: String,
        /// Degree bound on R₁ and R₂
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Solve the cohomological equation for a gluing pair
    Cohomology {
        pair: String,
        /// Target function in (x, y); defaults to the Kodaira-Spencer image of ∂/∂α
        #[arg(long)]
        target: Option<String>,
    },
    /// Gluing cocycle of a pair with globality and corner round trip
    Glue { pair: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reduce { .. } => "reduce",
            Command::NormalForm { .. } => "normal-form",
            Command::Sigma { .. } => "sigma",
            Command::Schwarzian { .. } => "schwarzian",
            Command::Equiv { .. } => "equiv",
            Command::Symmetries { .. } => "symmetries",
            Command::FirstIntegral { .. } => "first-integral",
            Command::Cohomology { .. } => "cohomology",
            Command::Glue { .. } => "glue",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Positive,
    Negative,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

struct Report {
    verdict: String,
    outcome: Outcome,
    data: Value,
    certificates: Value,
    text: Vec<String>,
}

impl Report {
    fn new(verdict: impl Into<String>, outcome: Outcome) -> Self {
        Report {
            verdict: verdict.into(),
            outcome,
            data: json!({}),
            certificates: json!({}),
            text: Vec::new(),
        }
    }

    fn data(mut self, v: Value) -> Self {
        self.data = v;
        self
    }

    fn certificates(mut self, v: Value) -> Self {
        self.certificates = v;
        self
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.text.push(s.into());
        self
    }
}

enum Failure {
    Input(String),
    Negative(String, String),
    Inconclusive(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OrderTooSmall { .. } => Failure::Inconclusive(e.to_string()),
            Error::NotCuspType(_) => Failure::Negative("NotCuspType".into(), e.to_string()),
            Error::InvalidCornerGerm(_) => Failure::Negative("InvalidCornerGerm".into(), e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run = std::result::Result<Report, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn reduce(input: &str, order: usize) -> Run {
    let w = parse_form(input, order)?;
    let rep = reduce_cusp(&w);
    let outcome = match rep.verdict {
        Verdict::CuspTypeAbsolutelyDicritical => Outcome::Positive,
        Verdict::NotDicritical | Verdict::WrongReductionTree => Outcome::Negative,
        Verdict::Inconclusive(_) => Outcome::Inconclusive,
    };
    let mut r = Report::new(rep.verdict.name(), outcome)
        .line(format!("verdict: {}", rep.verdict.name()))
        .line(format!("reason: {}", rep.reason));
    if let Some(v) = rep.valuation {
        r = r.line(format!("valuation: {v}"));
    }
    for p in &rep.singular_points_on_d2 {
        r = r.line(format!("point on D2: {}", to_value(p)));
    }
    if let Some(c) = &rep.corner {
        r = r.line(format!("corner form: {}", c.form));
    }
    let certs = json!({
        "relations": rep.relations,
        "first_divisor": rep.first_divisor,
        "second_divisor": rep.second_divisor,
        "corner_regular": rep.corner_regular,
        "transverse_to_d1": rep.transverse_to_d1,
        "transverse_to_d2": rep.transverse_to_d2,
    });
    Ok(r.data(to_value(&rep)).certificates(certs))
}

fn normal_form(input: &str, order: usize) -> Run {
    let w = parse_form(input, order)?;
    let nf = normalize(&w, order)?;
    let mut r = Report::new("NormalForm", Outcome::Positive)
        .line(format!("cone coefficient: {}", nf.cone_coefficient))
        .line(format!("alpha: {}", nf.alpha))
        .line(format!("a: {}", nf.a))
        .line(format!("e5: {}", nf.e5));
    for (m, c) in &nf.tail {
        let cs: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        r = r.line(format!("degree {m}: [{}]", cs.join(", ")));
    }
    let certs = json!({
        "linear_change": nf.linear_change,
        "transform": nf.transform,
    });
    Ok(r.data(to_value(&nf)).certificates(certs))
}

/// σ from a form through the corner of its reduction.
fn sigma_of_input(input: &str, order: usize) -> std::result::Result<(GermDiff1, Value), Failure> {
    let w = parse_form(input, order + ORDER_LOSS)?;
    let rep = reduce_cusp(&w);
    match rep.verdict {
        Verdict::CuspTypeAbsolutelyDicritical => {}
        Verdict::Inconclusive(_) => return Err(Failure::Inconclusive(rep.reason)),
        ref v => return Err(Failure::Negative(v.name().into(), rep.reason)),
    }
    let corner = rep.corner.ok_or_else(|| Failure::Inconclusive("no corner germ".into()))?;
    let c = CornerGerm::new(corner.form.clone())?;
    let sigma = transversal_structure(&c, order)?;
    Ok((sigma, json!({ "corner_form": corner.form })))
}

fn sigma(input: &str, order: usize) -> Run {
    let (s, cert) = sigma_of_input(input, order)?;
    let sch = schwarzian(&s)?;
    let verdict = if s.is_identity() { "Identity" } else { "Computed" };
    let hom = homography_of(&s);
    let r = Report::new(verdict, Outcome::Positive)
        .line("sigma maps the D2 coordinate u to the D1 coordinate v")
        .line(format!("sigma(u) = {s}"))
        .line(format!("S(sigma) = {sch}"))
        .data(json!({
            "sigma": s,
            "schwarzian": sch,
            "is_identity": s.is_identity(),
            "homography": hom,
            "source_axis": "u (D2)",
            "target_axis": "v (D1)",
        }))
        .certificates(cert);
    Ok(r)
}

fn schwarzian_cmd(germ: &str, order: usize) -> Run {
    let s = parse_germ(germ, order + 3)?;
    let sch = schwarzian(&s)?;
    let verdict = if sch.is_zero() { "Homographic" } else { "NonHomographic" };
    Ok(Report::new(verdict, Outcome::Positive)
        .line(format!("S = {sch}"))
        .data(json!({ "schwarzian": sch })))
}

fn pair_of_input(input: &str, order: usize) -> std::result::Result<(NormalPair, Value), Failure> {
    if input.trim_start().starts_with("pair:") {
        let (s, a) = parse_pair(input, order + 3)?;
        return Ok((NormalPair::new(s, a), json!("pair")));
    }
    let (s, cert) = sigma_of_input(input, order + 3)?;
    let a = s.canonical_alpha();
    Ok((NormalPair::new(s, a), cert))
}

fn equiv(first: &str, second: &str, order: usize) -> Run {
    let (p0, c0) = pair_of_input(first, order)?;
    let (p1, c1) = pair_of_input(second, order)?;
    let v = normal_pair_equivalent(&p0, &p1)?;
    let (verdict, outcome) = if v.equivalent {
        ("Equivalent", Outcome::Positive)
    } else if !v.cstar.search_complete {
        ("Inconclusive", Outcome::Inconclusive)
    } else {
        ("NotEquivalent", Outcome::Negative)
    };
    Ok(Report::new(verdict, outcome)
        .line(format!("verdict: {verdict}"))
        .line(format!("reason: {}", v.cstar.reason))
        .line(format!("S0 = {}", v.classes.0.schwarzian))
        .line(format!("S1 = {}", v.classes.1.schwarzian))
        .data(to_value(&v))
        .certificates(json!({ "first": c0, "second": c1, "cstar": v.cstar })))
}

fn symmetries(series: &str, from_sigma: bool, order: usize) -> Run {
    let f = if from_sigma {
        schwarzian(&parse_germ(series, order + 3)?)?
    } else {
        parse_series(series, order)?
    };
    let rep = homographic_symmetries(&f);
    let verdict = if rep.infinite { "Infinite" } else { "Finite" };
    let mut r = Report::new(verdict, Outcome::Positive)
        .line(format!("group: {verdict}"))
        .line(format!("lambda constraint: {}", rep.constraint_text()));
    for h in &rep.candidates {
        r = r.line(format!("symmetry: {h}"));
    }
    Ok(r.data(to_value(&rep)))
}

fn first_integral(germ: &str, degree: usize, order: usize) -> Run {
    let s = parse_germ(germ, order)?;
    let search = no_first_integral_witness(&s, degree, order)?;
    let mut r = match &search.relation {
        Some((r1, r2)) => Report::new("RelationFound", Outcome::Positive).line(format!("R1 = {r1}, R2 = {r2}")),
        None => Report::new("NoRelationWithinBound", Outcome::Negative)
            .line(format!("no relation with R1 = z^k, k <= {degree}, at order {order}")),
    };
    let mut data = to_value(&search);
    if let Some(h) = homography_of(&s) {
        r = r.line(format!("sigma is the homography {h}"));
        let ints: Vec<Value> = homographic_case_first_integrals(order)
            .iter()
            .map(|(n, d)| json!({ "num": n, "den": d }))
            .collect();
        data["homographic_first_integrals"] = Value::Array(ints);
    }
    let hankel: Vec<String> = search.sigma_hankel.iter().map(Coeff::to_string).collect();
    Ok(r.data(data).certificates(json!({ "sigma_hankel": hankel })))
}

fn parse_target(text: &str, order: usize) -> std::result::Result<Jet2, Failure> {
    match parse_input(&format!("mero:{text}"), order)? {
        FormInput::Meromorphic { num, den } => Ok(num.with_order(order).div(&den.with_order(order))?),
        FormInput::Form(_) => Err(Failure::Input("target must be a function of x and y".into())),
    }
}

fn cohomology(pair: &str, target: Option<&str>, order: usize) -> Run {
    let (s, a) = parse_pair(pair, order)?;
    let c = build_cocycle(&s, &a);
    let t = match target {
        Some(text) => parse_target(text, order)?,
        None => kodaira_spencer_target(&c, order)?,
    };
    let out = coboundary_solve_cocycle(&c, &t, order)?;
    let corank = CoboundarySystem::new(&c, order)?.corank();
    let r = match &out {
        CoboundaryOutcome::Feasible { a2, a1, .. } => Report::new("Coboundary", Outcome::Positive)
            .line(format!("A2 = {a2}"))
            .line(format!("A1 = {a1}")),
        CoboundaryOutcome::Infeasible { .. } => {
            Report::new("NotCoboundary", Outcome::Negative).line("target is not a coboundary at this order")
        }
    };
    Ok(r.line(format!("corank: {corank}"))
        .data(json!({ "target": t, "corank": corank, "alpha": a, "sigma": s }))
        .certificates(to_value(&out)))
}

fn glue(pair: &str, order: usize) -> Run {
    let (s, a) = parse_pair(pair, order)?;
    let c = build_cocycle(&s, &a);
    let (first, second) = c.map();
    let corner = c.corner_germ()?;
    let back = transversal_structure(&corner, order)?;
    let round_trip = back == s.truncate(back.order());
    let glob = json!({
        "F2": globality_check(&c.a, Model::F2),
        "F1": globality_check(&c.a, Model::F1),
    });
    let (verdict, outcome) = if round_trip {
        ("RoundTrip", Outcome::Positive)
    } else {
        ("RoundTripMismatch", Outcome::Negative)
    };
    Ok(Report::new(verdict, outcome)
        .line(format!("x3 = {}", first.fmt_with(("x1", "y1"))))
        .line(format!("y3 = {}", second.fmt_with(("x1", "y1"))))
        .line(format!("alpha = {}", c.alpha()))
        .line(format!("recovered sigma = {back}"))
        .data(json!({
            "cocycle": c,
            "map": [first, second],
            "corner_form": corner.form(),
            "recovered_sigma": back,
        }))
        .certificates(json!({ "globality": glob, "round_trip": round_trip })))
}

fn run(cmd: &Command, order: usize) -> Run {
    match cmd {
        Command::Reduce { input } => reduce(input, order),
        Command::NormalForm { input } => normal_form(input, order),
        Command::Sigma { input } => sigma(input, order),
        Command::Schwarzian { germ } => schwarzian_cmd(germ, order),
        Command::Equiv { first, second } => equiv(first, second, order),
        Command::Symmetries { series, from_sigma } => symmetries(series, *from_sigma, order),
        Command::FirstIntegral { germ, degree } => first_integral(germ, *degree, order),
        Command::Cohomology { pair, target } => cohomology(pair, target.as_deref(), order),
        Command::Glue { pair } => glue(pair, order),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (verdict, code, data, certificates, text) = match run(&cli.command, cli.order) {
        Ok(r) => (r.verdict, r.outcome.code(), r.data, r.certificates, r.text),
        Err(Failure::Input(msg)) => ("InputError".to_string(), 3, json!({ "error": msg }), json!({}), vec![format!("error: {msg}")]),
        Err(Failure::Negative(v, msg)) => (v.clone(), 1, json!({ "reason": msg }), json!({}), vec![format!("verdict: {v}"), format!("reason: {msg}")]),
        Err(Failure::Inconclusive(msg)) => ("Inconclusive".to_string(), 2, json!({ "reason": msg }), json!({}), vec![format!("inconclusive: {msg}")]),
    };
    if cli.json {
        let out = json!({
            "command": name,
            "order": cli.order,
            "verdict": verdict,
            "data": data,
            "certificates": certificates,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        println!("{name} (order {}): {verdict}", cli.order);
        for l in text {
            println!("  {l}");
        }
    }
    ExitCode::from(code)
}
