use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cuntz_core::classify::{classify_table, endo_record, Context, Levels, Table};
use cuntz_core::fermions::{car_closed_form, car_generator, mixture, parse_half, vacuum_check, FermionRep};
use cuntz_core::morphisms::{resolve, Morphism, PermEndo};
use cuntz_core::parse::parse_poly;
use cuntz_core::reps::{compose_with_endo, gp_branch, restrict_to_uhf, PermRep, UhfRestriction};
use cuntz_core::CuntzPoly;

#[derive(Parser)]
#[command(name = "cuntz", version, about = "Exact computation in the Cuntz algebra O_N, its UHF core and the CAR algebra")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Number of generators.
    #[arg(long, global = true, default_value_t = 2)]
    n: u8,
    /// Certification depth for UHF equality and commutant search.
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Seed bound B for orbit search.
    #[arg(long, global = true)]
    seed_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a polynomial.
    Normal { expr: String },
    /// Equality of two polynomials (exit 1 when they differ).
    Eq { lhs: String, rhs: String },
    /// Image of a polynomial under an endomorphism.
    Apply {
        #[arg(long)]
        endo: String,
        expr: String,
    },
    /// Branching law of a permutative representation under an endomorphism.
    Branch {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        endo: String,
    },
    /// Restriction of a permutative representation to the UHF core.
    Restrict {
        #[arg(long)]
        rep: String,
        /// Range of shifts listed for chain representations.
        #[arg(long, default_value_t = 4)]
        eta: i64,
    },
    /// GP(±) composed with an endomorphism.
    Gp {
        #[arg(long, default_value = "+")]
        sign: String,
        #[arg(long)]
        endo: String,
    },
    /// The fermion a_n inside O_2.
    Car { index: u32 },
    /// The mixture b_k for a half-integer k.
    Mixture { k: String },
    /// Vacuum identities of fock, fock*, iw or iw*.
    Vacuum {
        rep: String,
        #[arg(long, default_value_t = 4)]
        modes: u32,
        #[arg(long, default_value = "7/2")]
        cutoff: String,
    },
    /// Recompute a stored table: table1..table8, theorem14, nakanishi or all.
    Verify { table: String },
    /// Property record of ψ_σ.
    Classify {
        sigma: String,
        /// Restrict to the UHF core.
        #[arg(long)]
        uhf: bool,
    },
}

enum Outcome {
    Ok(Value, String),
    Mismatch(Value, String),
}

fn usage(msg: impl std::fmt::Display) -> Result<Outcome, String> {
    Err(msg.to_string())
}

fn endo(n: u8, text: &str) -> Result<Morphism, String> {
    resolve(n, text).map_err(|e| e.to_string())
}

fn poly(n: u8, text: &str) -> Result<CuntzPoly, String> {
    parse_poly(n, text).map_err(|e| format!("{e}\n  {text}\n  {}^", " ".repeat(e.position)))
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let n = cli.n;
    let mut levels = Levels::default();
    if let Some(l) = cli.level {
        levels.restriction = l;
        levels.commutant = l;
    }
    match &cli.command {
        Command::Normal { expr } => {
            let p = poly(n, expr)?;
            Ok(Outcome::Ok(json!({ "normal": p.to_string(), "terms": p.dump() }), p.to_string()))
        }
        Command::Eq { lhs, rhs } => {
            let equal = poly(n, lhs)?.equals(&poly(n, rhs)?).map_err(|e| e.to_string())?;
            let v = json!({ "equal": equal });
            Ok(if equal {
                Outcome::Ok(v, "true".into())
            } else {
                Outcome::Mismatch(v, "false".into())
            })
        }
        Command::Apply { endo: e, expr } => {
            let m = endo(n, e)?;
            let y = m.apply(&poly(n, expr)?);
            Ok(Outcome::Ok(json!({ "image": y.to_string() }), y.to_string()))
        }
        Command::Branch { rep, endo: e } => {
            let r = PermRep::parse(n, rep).map_err(|e| e.to_string())?;
            let m = endo(n, e)?;
            let sys = compose_with_endo(&r, &m).map_err(|e| e.to_string())?;
            let res = match cli.seed_bound {
                Some(b) => sys.branch_with_bound(b),
                None => sys.branch(),
            }
            .map_err(|e| e.to_string())?;
            let fp = res.fingerprint();
            let comps: Vec<Value> = fp
                .items()
                .map(|(c, m)| json!({ "label": c.to_string(), "multiplicity": m }))
                .collect();
            let v = json!({
                "rep": r.to_string(),
                "endo": e,
                "components": comps,
                "irreducible": fp.irreducible().to_string(),
                "seed_bound": res.seed_bound,
                "certified": res.certified(),
                "detail": res,
            });
            let text = format!(
                "{fp}\nirreducible: {}\nseed bound: {}\ncertificates: {}",
                fp.irreducible(),
                res.seed_bound,
                if res.certified() { "all hold" } else { "FAILED" }
            );
            Ok(if res.certified() {
                Outcome::Ok(v, text)
            } else {
                Outcome::Mismatch(v, text)
            })
        }
        Command::Restrict { rep, eta } => {
            let r = PermRep::parse(n, rep).map_err(|e| e.to_string())?;
            match restrict_to_uhf(&r) {
                UhfRestriction::Finite(fp) => Ok(Outcome::Ok(json!({ "components": fp.to_string() }), fp.to_string())),
                UhfRestriction::Family(fam) => {
                    let members: Vec<Value> = (-eta..=*eta)
                        .map(|k| json!({ "eta": k, "word": fam.member(k).to_string() }))
                        .collect();
                    let classes: Vec<String> = fam.classes().iter().map(|c| c.to_string()).collect();
                    let mut text = format!("⊕_η P[η{}], classes {}", fam.base, classes.join(", "));
                    for k in -eta..=*eta {
                        text.push_str(&format!("\n  η={k}: P[{}]", fam.member(k)));
                    }
                    Ok(Outcome::Ok(json!({ "family": fam.base.to_string(), "members": members, "classes": classes }), text))
                }
            }
        }
        Command::Gp { sign, endo: e } => {
            let plus = match sign.as_str() {
                "+" => true,
                "-" => false,
                _ => return usage("sign must be + or -"),
            };
            let m = endo(n, e)?;
            match gp_branch(plus, &m) {
                Ok(fp) => Ok(Outcome::Ok(json!({ "components": fp.to_string() }), fp.to_string())),
                Err(e) => Ok(Outcome::Mismatch(json!({ "not_derivable": e.to_string() }), format!("---: {e}"))),
            }
        }
        Command::Car { index } => {
            let a = car_generator(*index).map_err(|e| e.to_string())?;
            let closed = car_closed_form(*index).map_err(|e| e.to_string())?;
            let agree = a.equals(&closed).map_err(|e| e.to_string())?;
            let v = json!({ "index": index, "image": a.to_string(), "closed_form_agrees": agree });
            Ok(Outcome::Ok(v, a.to_string()))
        }
        Command::Mixture { k } => {
            let k = parse_half(k).map_err(|e| e.to_string())?;
            let b = mixture(k).map_err(|e| e.to_string())?;
            let c = b.to_cuntz();
            Ok(Outcome::Ok(
                json!({ "k": k.to_string(), "car": b.to_string(), "cuntz": c.to_string() }),
                format!("{b}\n= {c}"),
            ))
        }
        Command::Vacuum { rep, modes, cutoff } => {
            let r: FermionRep = rep.parse().map_err(|e: cuntz_core::error::FermionError| e.to_string())?;
            let cut = parse_half(cutoff).map_err(|e| e.to_string())?;
            let report = vacuum_check(r, *modes, cut);
            let mut text = String::new();
            for c in &report.checks {
                text.push_str(&format!("{} {}\n", if c.holds { "ok  " } else { "FAIL" }, c.statement));
            }
            for c in &report.errata {
                text.push_str(&format!("refuted as printed: {}\n", c.statement));
            }
            let v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            Ok(if report.passed() {
                Outcome::Ok(v, text.trim_end().to_string())
            } else {
                Outcome::Mismatch(v, text.trim_end().to_string())
            })
        }
        Command::Verify { table } => {
            let tables: Vec<Table> = if table == "all" {
                Table::ALL.to_vec()
            } else {
                vec![table.parse().map_err(|e: cuntz_core::error::ClassifyError| e.to_string())?]
            };
            let mut reports = Vec::new();
            let mut text = String::new();
            let mut ok = true;
            for t in tables {
                let r = classify_table(t, levels).map_err(|e| e.to_string())?;
                let pass = r.passed();
                ok &= pass;
                let bad = r.mismatches().count();
                let fixed = r.errata().count();
                text.push_str(&format!(
                    "{} {t}: {} cells, {bad} mismatches, {fixed} printed values replaced by errata\n",
                    if pass { "PASS" } else { "FAIL" },
                    r.cells.len()
                ));
                for c in r.mismatches() {
                    text.push_str(&format!(
                        "  {} / {}: expected {}, computed {}\n",
                        c.row, c.column, c.corrected.as_ref().unwrap_or(&c.expected), c.computed
                    ));
                }
                for c in r.errata() {
                    text.push_str(&format!(
                        "  erratum {} / {}: printed {}, corrected {}\n",
                        c.row,
                        c.column,
                        c.expected,
                        c.corrected.as_deref().unwrap_or_default()
                    ));
                }
                for note in &r.notes {
                    text.push_str(&format!("  note: {note}\n"));
                }
                reports.push(if pass {
                    json!({ "table": t, "passed": true, "cells": r.cells.len(), "errata": r.errata().collect::<Vec<_>>(), "notes": r.notes })
                } else {
                    json!({ "table": t, "passed": false, "diff": r.mismatches().collect::<Vec<_>>(), "errata": r.errata().collect::<Vec<_>>(), "notes": r.notes })
                });
            }
            let v = json!({ "passed": ok, "levels": levels, "reports": reports });
            let text = text.trim_end().to_string();
            Ok(if ok { Outcome::Ok(v, text) } else { Outcome::Mismatch(v, text) })
        }
        Command::Classify { sigma, uhf } => {
            let p = PermEndo::parse(n, 2, sigma).map_err(|e| e.to_string())?;
            let ctx = if *uhf { Context::Uhf } else { Context::Cuntz };
            let rec = endo_record(&p, ctx, levels).map_err(|e| e.to_string())?;
            let mut text = format!("ψ_{}\n", rec.sigma);
            for (k, v) in &rec.fingerprints {
                text.push_str(&format!("  {k}∘ψ = {v}\n"));
            }
            text.push_str(&format!("  {}", rec.verdict));
            if let Some(p) = &rec.proper {
                text.push_str(&format!("\n  proper: {p}"));
            }
            let v = serde_json::to_value(&rec).map_err(|e| e.to_string())?;
            Ok(Outcome::Ok(v, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let (v, text, code) = match out {
                Outcome::Ok(v, t) => (v, t, 0),
                Outcome::Mismatch(v, t) => (v, t, 1),
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            } else {
                println!("{text}");
            }
            ExitCode::from(code)
        }
        Err(msg) => {
            if cli.json {
                println!("{}", json!({ "error": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
