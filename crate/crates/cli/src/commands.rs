use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};
use surfcover::cover2::affine_cover;
use surfcover::hypotheses::{check_all, random_change, CoordinateChange, HypothesisReport, STAR_MESSAGE};
use surfcover::srf::{parse_input, InputDoc, Writer};
use surfcover::verify::{verify_all, VerifyOptions};
use surfcover::{three_patch, AffineCover, BetaRule, CoverError, MPoly, Param, Scalar, ThreePatch, UPoly};

use crate::json;

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide conditions (*), (a) and (b)
    Check(Common),
    /// Build the three-patch cover F, G, H
    Cover3(Common),
    /// Build the two-patch cover of the affine part
    Cover2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Rule::Pointwise)]
        beta_rule: Rule,
    },
    /// Run all certificates on the covers
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Rule::Pointwise)]
        beta_rule: Rule,
        /// Random samples per patch
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// Input .srf file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Apply a random coordinate change when (a) or (b) fails
    #[arg(long)]
    pub change_coords: bool,
    /// Upper bound on coordinate changes tried
    #[arg(long, default_value_t = surfcover::hypotheses::DEFAULT_ATTEMPTS)]
    pub max_attempts: usize,
    #[arg(long)]
    pub json: bool,
    /// Write the .srf result here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Rule {
    Pointwise,
    GlobalFactor,
}

impl From<Rule> for BetaRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Pointwise => BetaRule::Pointwise,
            Rule::GlobalFactor => BetaRule::GlobalFactor,
        }
    }
}

/// Exit status and texts of one run.
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub enum Failure {
    Input(String),
    Hypotheses(String),
    Internal(String),
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        if e.is_hypothesis_failure() {
            Failure::Hypotheses(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl Failure {
    pub fn into_outcome(self) -> Outcome {
        let (code, msg) = match self {
            Failure::Input(m) => (1, m),
            Failure::Hypotheses(m) => (2, m),
            Failure::Internal(m) => (3, m),
        };
        Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn load(common: &Common) -> Result<(InputDoc, Param), Failure> {
    let path = common.input.display();
    let text = std::fs::read_to_string(&common.input).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    let doc = parse_input(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    let param = doc.param.clone().ok_or_else(|| Failure::Input(format!("{path}: no [parametrization] section")))?;
    Ok((doc, param))
}

/// The input itself when it satisfies (a) and (b), otherwise a coordinate
/// change if allowed.
fn prepare(common: &Common, f: &Param) -> Result<(Param, HypothesisReport, Option<CoordinateChange>), Failure> {
    let report = check_all(f);
    if report.pass() {
        return Ok((f.clone(), report, None));
    }
    if !report.star.pass {
        return Err(Failure::Hypotheses(format!("F {STAR_MESSAGE}")));
    }
    if !common.change_coords {
        return Err(Failure::Hypotheses(format!("F {}", surfcover::hypotheses::ab_message(&report.ab))));
    }
    let ch = random_change(f, common.seed, common.max_attempts)?;
    let report = check_all(&ch.param);
    Ok((ch.param.clone(), report, Some(ch)))
}

fn linear_form(row: &[Scalar; 3]) -> String {
    let p = MPoly::from_terms(row.iter().enumerate().map(|(j, c)| {
        let mut m = [0; 3];
        m[j] = 1;
        (m, c.clone())
    }));
    p.to_string()
}

fn change_section(w: &mut Writer, ch: &CoordinateChange) {
    let rows: Vec<String> = ch.matrix.iter().map(linear_form).collect();
    w.comment(&format!(
        "[parametrization] equals the input composed with (x0:x1:x2) -> ({} : {} : {})",
        rows[0], rows[1], rows[2]
    ));
    let items: Vec<(&str, String)> = ["x0", "x1", "x2"].into_iter().zip(rows).collect();
    w.keyed("change", &items);
}

fn change_line(ch: &CoordinateChange) -> String {
    let rows: Vec<String> = ch.matrix.iter().map(linear_form).collect();
    format!(
        "coordinate change after {} attempt(s): (x0:x1:x2) -> ({} : {} : {})",
        ch.attempts, rows[0], rows[1], rows[2]
    )
}

fn up(p: &UPoly) -> String {
    if p.degree() == Some(0) {
        p.coeff(0).to_string()
    } else {
        p.display("x0").to_string()
    }
}

fn three_patch_srf(w: &mut Writer, t: &ThreePatch) {
    w.param("G", &t.g).param("H", &t.h);
    w.keyed("shape", &[("p1", up(&t.p1)), ("q1", up(&t.q1)), ("p2", up(&t.p2)), ("q2", up(&t.q2))]);
    w.keyed("gcd", &[("ghat", t.ghat.to_string()), ("hhat", t.hhat.to_string())]);
}

/// Writes the .srf text to `--out` or returns it for stdout.
fn emit(common: &Common, srf: String, summary: String, json: Value) -> Result<Outcome, Failure> {
    let mut stdout = String::new();
    if let Some(path) = &common.out {
        std::fs::write(path, &srf).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if common.json {
        stdout = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
    } else if common.out.is_some() {
        stdout.push_str(&summary);
    } else {
        stdout.push_str(&srf);
    }
    Ok(Outcome { code: 0, stdout, stderr: String::new() })
}

pub fn check(common: &Common) -> Result<Outcome, Failure> {
    let (_, f) = load(common)?;
    let report = check_all(&f);
    let mut text = format!("{report}\n");
    for line in &report.ab.failures {
        let _ = writeln!(text, "  {line}");
    }
    let mut value = json!({ "command": "check", "hypotheses": json::hypotheses(&report) });
    let mut code = if report.pass() { 0 } else { 2 };
    if !report.pass() && report.star.pass && common.change_coords {
        let ch = random_change(&f, common.seed, common.max_attempts)?;
        let after = check_all(&ch.param);
        let _ = writeln!(text, "{}", change_line(&ch));
        let _ = writeln!(text, "{after}");
        value["change"] = json!({ "matrix": json::matrix(&ch.matrix), "attempts": ch.attempts });
        value["hypotheses_after_change"] = json::hypotheses(&after);
        if let Some(path) = &common.out {
            let mut w = Writer::new();
            w.field(ch.param.field()).param("parametrization", &ch.param);
            change_section(&mut w, &ch);
            std::fs::write(path, w.finish()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
        code = if after.pass() { 0 } else { 2 };
    }
    let stdout = if common.json { serde_json::to_string_pretty(&value).expect("serializable") + "\n" } else { text };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

pub fn cover3(common: &Common) -> Result<Outcome, Failure> {
    let (doc, f) = load(common)?;
    let (f, report, change) = prepare(common, &f)?;
    let t = three_patch(&f)?;
    let mut w = Writer::new();
    w.comment(&format!("three-patch cover, k = {}", t.k));
    w.field(f.field()).param("parametrization", &f);
    three_patch_srf(&mut w, &t);
    if let Some(ch) = &change {
        change_section(&mut w, ch);
    }
    w.implicit(&doc.implicit);
    let mut summary = format!("{report}\n");
    if let Some(ch) = &change {
        let _ = writeln!(summary, "{}", change_line(ch));
    }
    let _ = writeln!(summary, "G, H: degree {}, {}", t.g.degree(), t.h.degree());
    let _ = writeln!(summary, "Ghat = {}, Hhat = {}", t.ghat, t.hhat);
    let mut value = json!({ "command": "cover3", "hypotheses": json::hypotheses(&report), "cover": json::three_patch(&t) });
    if let Some(ch) = &change {
        value["change"] = json!({ "matrix": json::matrix(&ch.matrix), "attempts": ch.attempts });
    }
    emit(common, w.finish(), summary, value)
}

fn cover2_srf(w: &mut Writer, c: &AffineCover) {
    w.comment(&c.to_string());
    w.keyed("cover2", &[("r", up(&c.r)), ("s", up(&c.s)), ("u", up(&c.u)), ("v", up(&c.v))]);
}

pub fn cover2(common: &Common, rule: Rule) -> Result<Outcome, Failure> {
    let (doc, f) = load(common)?;
    let (f, report, change) = prepare(common, &f)?;
    let t = three_patch(&f)?;
    let c = affine_cover(&t, rule.into())?;
    let mut w = Writer::new();
    w.comment("two-patch cover of the affine part y0 != 0");
    w.field(&c.field).param("parametrization", &f).param("G", &c.g);
    cover2_srf(&mut w, &c);
    if let Some(ch) = &change {
        change_section(&mut w, ch);
    }
    w.implicit(&doc.implicit);
    let mut summary = format!("{report}\n");
    if let Some(ch) = &change {
        let _ = writeln!(summary, "{}", change_line(ch));
    }
    if let Some(e) = c.field.extension() {
        let m = UPoly::from_rationals(e.modulus().to_vec());
        let _ = writeln!(summary, "extension: {} = 0", m.display("gamma"));
    }
    let _ = writeln!(summary, "{c}");
    let _ = writeln!(summary, "r = {}\ns = {}\nu = {}\nv = {}", up(&c.r), up(&c.s), up(&c.u), up(&c.v));
    let value = json!({ "command": "cover2", "hypotheses": json::hypotheses(&report), "cover": json::affine(&c) });
    emit(common, w.finish(), summary, value)
}

pub fn verify(common: &Common, rule: Rule, trials: usize) -> Result<Outcome, Failure> {
    let (doc, f) = load(common)?;
    let (f, report, change) = prepare(common, &f)?;
    let t = three_patch(&f)?;
    let mut notes = String::new();
    let affine = match affine_cover(&t, rule.into()) {
        Ok(c) => Some(c),
        Err(e @ CoverError::NonLinearBeta { .. }) => {
            let _ = writeln!(notes, "two-patch: skipped ({e})");
            None
        }
        Err(e) => return Err(e.into()),
    };
    // Fixtures refer to the coordinates of the input.
    let fixtures = if change.is_some() { &[][..] } else { &doc.fixtures[..] };
    let opts = VerifyOptions { implicit: &doc.implicit, fixtures, trials, seed: common.seed };
    let v = verify_all(&t, affine.as_ref(), &opts).map_err(|e| Failure::Internal(format!("verification failed: {e}")))?;
    let mut text = format!("{report}\n");
    if let Some(ch) = &change {
        let _ = writeln!(text, "{}", change_line(ch));
    }
    let _ = writeln!(text, "{v}");
    text.push_str(&notes);
    let value = json!({
        "command": "verify",
        "hypotheses": json::hypotheses(&report),
        "composition": { "g_scale": json::scalar(&v.composition.g_scale), "h_scale": json::scalar(&v.composition.h_scale) },
        "affine_base_points_free": true,
        "resultant_pass": v.resultant.pass(),
        "two_patch_lines": v.affine_lines,
        "sampling": {
            "trials": v.coverage.trials,
            "checked": v.coverage.checked,
            "skipped": v.coverage.skipped,
            "fixtures_hit": v.coverage.fixtures_hit,
        },
    });
    let code = if v.resultant.pass() { 0 } else { 3 };
    let stdout = if common.json { serde_json::to_string_pretty(&value).expect("serializable") + "\n" } else { text };
    Ok(Outcome { code, stdout, stderr: String::new() })
}
