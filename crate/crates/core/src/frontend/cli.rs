//! Command-line driver.

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::engine::elementary::Outcome;
use crate::engine::{derive_expr, descend_exp, descend_prim, integrate_dilog, prep_ext, verify, Ctx, IntegralExpr};
use crate::engine::choose_place;
use crate::error::Error;
use crate::logsym::LogPoly;
use crate::tensor2::tenseq_residual;
use crate::tower::{MonomialKind, Tower};

use super::output::{integral_json, message_json, render_integral, render_place, tensor_json, SCHEMA};
use super::parse::{claim_generators, parse, parse_claim, parse_into};
use super::render::render_elem;

#[derive(Parser, Debug)]
#[command(name = "polyint", version, about = "Exact integration with dilogarithmic terms")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
    /// Name of the base variable.
    #[arg(long, global = true, default_value = "x")]
    var: String,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Integrate an expression.
    Integrate {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Differentiate an expression (Li and I allowed).
    Derive {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Check that a claimed antiderivative differentiates to the integrand.
    Verify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        claim: String,
    },
    /// Move dilogarithmic arguments below the top generator.
    Descend {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Antiderivative to descend; computed when absent.
        #[arg(long, allow_hyphen_values = true)]
        claim: Option<String>,
    },
    /// Dump the residual tensor for a single argument `h`.
    TensorCheck {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Integrated,
    NoIntegralFound,
    ParseError,
    DomainError,
    Derived,
    Verified,
    VerifyFailed,
    Descended,
    Checked,
    InternalError,
    /// Help or version text.
    Usage,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Integrated | Status::Derived | Status::Verified | Status::Descended | Status::Checked | Status::Usage => 0,
            Status::NoIntegralFound | Status::VerifyFailed => 1,
            Status::ParseError | Status::DomainError | Status::InternalError => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Integrated => "Integrated",
            Status::NoIntegralFound => "NoIntegralFound",
            Status::ParseError => "ParseError",
            Status::DomainError => "DomainError",
            Status::Derived => "Derived",
            Status::Verified => "Verified",
            Status::VerifyFailed => "VerifyFailed",
            Status::Descended => "Descended",
            Status::Checked => "Checked",
            Status::InternalError => "InternalError",
            Status::Usage => "Usage",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliResult {
    pub status: Status,
    /// Text or JSON, as requested.
    pub payload: String,
    pub exit_code: i32,
}

fn done(status: Status, payload: String) -> CliResult {
    CliResult { status, payload, exit_code: status.exit_code() }
}

fn failure(e: &Error, json: bool) -> CliResult {
    let status = match e {
        Error::Parse { .. } => Status::ParseError,
        Error::Internal(_) => Status::InternalError,
        _ => Status::DomainError,
    };
    let msg = e.to_string();
    let payload = if json { message_json(status.as_str(), &msg).to_string() } else { msg };
    done(status, payload)
}

fn expr_result(ctx: &Ctx, status: Status, e: &IntegralExpr, json: bool) -> CliResult {
    let payload =
        if json { integral_json(ctx, status.as_str(), e).to_string() } else { render_integral(ctx, e) };
    done(status, payload)
}

/// Integrates and re-verifies; `Ok(Err(reason))` when nothing was found.
fn integrate_checked(ctx: &mut Ctx, f: &LogPoly) -> crate::Result<Result<IntegralExpr, String>> {
    match integrate_dilog(ctx, f)? {
        Outcome::Integrated(e) => {
            if !verify(ctx, &e, f)? {
                return Err(Error::Internal("result failed verification".into()));
            }
            Ok(Ok(e))
        }
        Outcome::NotFound(why) => Ok(Err(why)),
    }
}

fn run(args: Args) -> crate::Result<CliResult> {
    let (var, json) = (args.var.as_str(), args.json);
    match args.cmd {
        Cmd::Integrate { expr } => {
            let (t, e) = parse(&expr, var)?;
            let mut ctx = Ctx::new(t);
            let f = LogPoly::constant(e);
            Ok(match integrate_checked(&mut ctx, &f)? {
                Ok(r) => expr_result(&ctx, Status::Integrated, &r, json),
                Err(why) => {
                    let s = Status::NoIntegralFound;
                    done(s, if json { message_json(s.as_str(), &why).to_string() } else { why })
                }
            })
        }
        Cmd::Derive { expr } => {
            // plain elements print as a single fraction
            if let Ok((t, e)) = parse(&expr, var) {
                let d = t.derive(&e);
                let payload = if json {
                    let ctx = Ctx::new(t);
                    integral_json(&ctx, Status::Derived.as_str(), &IntegralExpr::elementary(LogPoly::constant(d))).to_string()
                } else {
                    render_elem(&t, &d)
                };
                return Ok(done(Status::Derived, payload));
            }
            let mut t = Tower::new(var);
            claim_generators(&mut t, &expr, var)?;
            let mut ctx = Ctx::new(t);
            let e = parse_claim(&mut ctx, &expr, var)?;
            let d = derive_expr(&mut ctx, &e)?;
            let d = ctx.normalize(&d)?;
            Ok(expr_result(&ctx, Status::Derived, &IntegralExpr::elementary(d), json))
        }
        Cmd::Verify { expr, claim } => {
            let (mut t, e) = parse(&expr, var)?;
            claim_generators(&mut t, &claim, var)?;
            let mut ctx = Ctx::new(t);
            let c = parse_claim(&mut ctx, &claim, var)?;
            let ok = verify(&mut ctx, &c, &LogPoly::constant(e))?;
            Ok(expr_result(&ctx, if ok { Status::Verified } else { Status::VerifyFailed }, &c, json))
        }
        Cmd::Descend { expr, claim } => {
            let mut t = Tower::new(var);
            let e = parse_into(&mut t, &expr, var)?;
            if let Some(c) = &claim {
                claim_generators(&mut t, c, var)?;
            }
            let mut ctx = Ctx::new(t);
            let f = LogPoly::constant(e);
            let start = match &claim {
                Some(c) => parse_claim(&mut ctx, c, var)?,
                None => match integrate_checked(&mut ctx, &f)? {
                    Ok(r) => r,
                    Err(why) => {
                        let s = Status::NoIntegralFound;
                        return Ok(done(s, if json { message_json(s.as_str(), &why).to_string() } else { why }));
                    }
                },
            };
            let top = ctx.tower.top();
            let out = match ctx.tower.gen(top).kind {
                MonomialKind::Exp(_) => descend_exp(&mut ctx, &start, &f)?,
                MonomialKind::Log(_) | MonomialKind::Primitive if top > 0 => descend_prim(&mut ctx, &start, &f, None)?,
                _ => {
                    if !verify(&mut ctx, &start, &f)? {
                        return Err(Error::Precondition("expression does not differentiate to the integrand".into()));
                    }
                    start
                }
            };
            Ok(expr_result(&ctx, Status::Descended, &out, json))
        }
        Cmd::TensorCheck { expr } => {
            let (t, h) = parse(&expr, var)?;
            let ctx = Ctx::new(t);
            let hs = [h.clone()];
            let p = choose_place(&hs)?;
            let data = prep_ext(&hs, &p)?;
            let r = tenseq_residual(&data.tenseq_data(0)?, &|x| data.v_is_zero(x))?;
            let anti = r.antisymmetric_part();
            let report = data.condition_report()?;
            let place = render_place(&ctx.tower, &data.place);
            let args: Vec<String> = data.log_args.iter().map(|a| render_elem(&ctx.tower, a)).collect();
            let status = Status::Checked;
            let payload = if json {
                json!({
                    "schema": SCHEMA,
                    "status": status.as_str(),
                    "h": render_elem(&ctx.tower, &h),
                    "place": place,
                    "tag": format!("{:?}", data.tags[0]),
                    "log_args": args,
                    "residual": tensor_json(&ctx, &r),
                    "antisymmetric": tensor_json(&ctx, &anti),
                    "symmetric": data.is_symmetric_mod(&r),
                    "symmetric_in_symbols": r.is_symmetric(),
                    "conditions": report.holds,
                    "tags_ok": report.tags_ok,
                })
                .to_string()
            } else {
                let mut s = format!(
                    "h = {}\nplace = {place}\ntag = {:?}\nresidual terms = {}\nsymmetric = {}\nconditions = {:?}, tags_ok = {}",
                    render_elem(&ctx.tower, &h),
                    data.tags[0],
                    r.terms().len(),
                    data.is_symmetric_mod(&r),
                    report.holds,
                    report.tags_ok
                );
                for (k, a) in args.iter().enumerate() {
                    s.push_str(&format!("\nlog[{k}] = log({a})"));
                }
                s
            };
            Ok(done(status, payload))
        }
    }
}

/// Runs the command line `args` (program name first).
pub fn cli_run<I, T>(args: I) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = e.exit_code();
            let status = if code == 0 { Status::Usage } else { Status::ParseError };
            return CliResult { status, payload: e.render().to_string(), exit_code: code };
        }
    };
    let json = parsed.json;
    match run(parsed) {
        Ok(r) => r,
        Err(e) => failure(&e, json),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> CliResult {
        cli_run(std::iter::once("polyint").chain(args.iter().copied()))
    }

    #[test]
    fn examples() {
        let r = run_cli(&["integrate", "log(x)/(x-1)"]);
        assert_eq!((r.status, r.exit_code), (Status::Integrated, 0));
        assert!(r.payload.contains("dilog_term(d=1, h=x, k=1)"), "{}", r.payload);
        let r = run_cli(&["derive", "log(x)^2"]);
        assert_eq!(r.payload, "2*log(x)/x");
        let r = run_cli(&["integrate", "exp(x^2)"]);
        assert_eq!((r.status, r.exit_code), (Status::NoIntegralFound, 1));
    }

    #[test]
    fn errors_and_flags() {
        let r = run_cli(&["integrate", "log("]);
        assert_eq!((r.status, r.exit_code), (Status::ParseError, 2));
        let r = run_cli(&["integrate", "x", "--bogus"]);
        assert_eq!((r.status, r.exit_code), (Status::ParseError, 2));
        assert!(r.payload.contains("Usage"));
        let r = run_cli(&["integrate", "1/t", "--var", "t", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&r.payload).unwrap();
        assert_eq!(v["logs"][0]["arg"], "t");
        let r = run_cli(&["verify", "log(1-x)/x", "--claim", "-Li(2, x)"]);
        assert_eq!(r.status, Status::Verified);
        let r = run_cli(&["verify", "log(1-x)/x", "--claim", "Li(2, x)"]);
        assert_eq!((r.status, r.exit_code), (Status::VerifyFailed, 1));
    }

    #[test]
    fn descend_and_tensor_check() {
        let r = run_cli(&["descend", "log(x)/(x-1)"]);
        assert_eq!(r.status, Status::Descended, "{}", r.payload);
        // T(θx) + T(1 − θx) − log(θx)·log(1 − θx) vanishes, θ = log(x)
        let claim = "-Li(1, x) + I(2, x*log(x)) + I(2, 1 - x*log(x)) + log(x*log(x))*log(1 - x*log(x))";
        let r = run_cli(&["descend", "1/(x-1)", "--claim", claim, "--json"]);
        assert_eq!(r.status, Status::Descended, "{}", r.payload);
        let v: serde_json::Value = serde_json::from_str(&r.payload).unwrap();
        let hs: Vec<&str> = v["dilog_terms"].as_array().unwrap().iter().map(|t| t["h"].as_str().unwrap()).collect();
        assert_eq!(hs.len(), 2);
        assert!(hs.iter().all(|h| !h.contains("log")), "{hs:?}");
        let r = run_cli(&["tensor-check", "x^2/(x+3)", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&r.payload).unwrap();
        assert_eq!(v["symmetric"], true);
        assert_eq!(v["conditions"], serde_json::json!([true, true, true, true, true]));
    }
}
