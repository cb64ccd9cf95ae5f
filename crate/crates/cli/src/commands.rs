use num_bigint::BigInt;
use parafree_core::coset::{todd_coxeter, CosetTable};
use parafree_core::freeprod::Context;
use parafree_core::gog::{enumerate_admissible, tree_pi1_presentation};
use parafree_core::intmat::{abelian_invariants, determinant};
use parafree_core::parafree::{compare_lcs, verify_weakly_para, Member, ParaFamily};
use parafree_core::parse::{parse_presentation, parse_word};
use parafree_core::rewriting::{relation_matrix, rs_presentation, simplify};
use parafree_core::{Alphabet, Error, IntMatrix, Presentation, SmithForm, Word};
use serde_json::{json, Value};

use crate::config::{Output, RunConfig};
use crate::report::{Check, Report, Status};
use crate::suite::{self, error_check, lcs_status, lcs_text};
use crate::{Cli, Command, FamilyArgs, Outcome};

pub const PLUMBING: &str = "artifact plumbing";

/// Errors caused by the input rather than by the computation.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownGenerator(_)
            | Error::DuplicateGenerator(_)
            | Error::InvalidGeneratorName(_)
            | Error::GeneratorOutOfRange { .. }
            | Error::Syntax { .. }
            | Error::EmptyRelator { .. }
            | Error::MissingImage(_)
            | Error::InvalidClass(_)
            | Error::NonSquare { .. }
            | Error::Ragged
            | Error::NotHomomorphism { .. }
            | Error::InvalidTree(_)
            | Error::InvalidArgument(_)
    )
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Nf { .. } => "nf",
            Command::Order { .. } => "order",
            Command::Tc { .. } => "tc",
            Command::Rs { .. } => "rs",
            Command::Abelianize { .. } => "abelianize",
            Command::Det { .. } => "det",
            Command::LcsCompare { .. } => "lcs-compare",
            Command::GogSearch { .. } => "gog-search",
            Command::MatrixA { .. } => "matrix-a",
            Command::VerifyPaper { .. } => "verify-paper",
        }
    }
}

pub fn run_config(cli: &Cli) -> RunConfig {
    let mut cfg = RunConfig {
        p: 3,
        l: 1,
        k: 1,
        max_class: 0,
        max_cosets: cli.max_cosets,
        max_k: 3,
        max_exponent: 2,
        output: if cli.json { Output::Json } else { Output::Text },
        seed: cli.seed,
    };
    let mut max_class = None;
    match &cli.command {
        Command::Nf { family: FamilyArgs { p, l, k }, .. } | Command::Order { family: FamilyArgs { p, l, k }, .. } => {
            (cfg.p, cfg.l, cfg.k) = (*p, *l, *k);
        }
        Command::LcsCompare { p, l, k, max_class: c, .. } => {
            (cfg.p, cfg.l, cfg.k) = (*p, *l, *k);
            max_class = *c;
        }
        Command::GogSearch { p, n, max_k, max_exp, .. } => {
            cfg.p = *p;
            cfg.max_k = max_k.unwrap_or(*n as usize + 2);
            cfg.max_exponent = max_exp.unwrap_or(n + 1);
        }
        Command::MatrixA { p } => cfg.p = *p,
        Command::VerifyPaper { p, max_class: c } => {
            cfg.p = *p;
            max_class = *c;
        }
        _ => {}
    }
    cfg.max_class = max_class.unwrap_or_else(|| suite::default_max_class(cfg.p));
    cfg
}

pub fn dispatch(cli: Cli) -> Outcome {
    let cfg = run_config(&cli);
    let warnings = match cfg.validate() {
        Ok(w) => w,
        Err(msg) => return Outcome::usage(format!("error: {msg}")),
    };
    let mut stderr: String = warnings.iter().map(|w| format!("{w}\n")).collect();
    let name = cli.command.name();
    let report = match execute(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) if is_usage_error(&e) => {
            stderr.push_str(&format!("error: {e}\n"));
            return Outcome { code: crate::EXIT_USAGE, stdout: String::new(), stderr };
        }
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            Report::new(name, config_value(&cfg), vec![error_check(name, PLUMBING, &e)])
        }
    };
    let stdout = match cfg.output {
        Output::Json => report.to_json() + "\n",
        Output::Text => report.to_text(),
    };
    Outcome { code: report.status.exit_code(), stdout, stderr }
}

fn config_value(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn single(cfg: &RunConfig, name: &str, check: Check) -> Report {
    Report::new(name, config_value(cfg), vec![check])
}

/// Splits at commas outside brackets and parentheses.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts.retain(|s| !s.is_empty());
    parts
}

fn parse_words(text: &str, alphabet: &Alphabet) -> parafree_core::Result<Vec<Word>> {
    split_top_level(text).into_iter().map(|w| parse_word(w, alphabet)).collect()
}

/// Torsion factors followed by one zero per infinite cyclic summand.
pub fn invariants_list(snf: &SmithForm) -> Vec<String> {
    let mut out: Vec<String> = snf.torsion().iter().map(BigInt::to_string).collect();
    out.extend(std::iter::repeat_n("0".to_string(), snf.free_rank()));
    out
}

fn invariants_json(snf: &SmithForm) -> Value {
    Value::Array(
        invariants_list(snf).into_iter().map(|s| s.parse::<u64>().map_or(Value::String(s), Value::from)).collect(),
    )
}

fn int_json(x: &BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

fn execute(cmd: &Command, cfg: &RunConfig) -> parafree_core::Result<Report> {
    let name = cmd.name();
    let options = cfg.options();
    match cmd {
        Command::Nf { word, .. } => {
            let ctx = Context::new(cfg.p, cfg.l, cfg.k)?;
            let w = parse_word(word, ctx.alphabet())?;
            let nf = ctx.nf_reduce(&w)?;
            let shown = nf.display();
            let check = Check::new(
                "nf",
                "NormalFfpForm",
                Status::Pass,
                json!({ "input": word, "normal_form": shown, "syllables": nf.len() }),
            )
            .with_text(vec![shown]);
            Ok(single(cfg, name, check))
        }
        Command::Order { word, .. } => {
            let ctx = Context::new(cfg.p, cfg.l, cfg.k)?;
            let w = parse_word(word, ctx.alphabet())?;
            let order = ctx.element_order(&w)?.to_string();
            let check = Check::new("order", "NormalFfpForm", Status::Pass, json!({ "input": word, "order": order }))
                .with_text(vec![order]);
            Ok(single(cfg, name, check))
        }
        Command::Tc { pres, subgroup, table } => {
            let pres = parse_presentation(pres)?;
            let subs = match subgroup {
                Some(s) => parse_words(s, pres.alphabet())?,
                None => Vec::new(),
            };
            let t = todd_coxeter(&pres, &subs, options)?;
            let csv = t.to_csv(pres.alphabet());
            let mut text = vec![t.len().to_string()];
            if *table {
                text.extend(csv.lines().map(str::to_string));
            }
            let data = json!({ "index": t.len(), "table": table.then_some(csv) });
            Ok(single(cfg, name, Check::new("tc", PLUMBING, Status::Pass, data).with_text(text)))
        }
        Command::Rs { pres, map, modulus, raw } => {
            let pres = parse_presentation(pres)?;
            let table = cyclic_table(&pres, map, *modulus)?;
            let mut data = rs_presentation(&pres, &table)?;
            if !raw {
                data = simplify(&data)?;
            }
            let sub = &data.presentation;
            let value = json!({
                "index": data.index,
                "presentation": sub.to_string(),
                "generators": data.generators.iter().map(|g| json!({
                    "name": g.name,
                    "word": g.word.display(pres.alphabet()).to_string(),
                })).collect::<Vec<_>>(),
                "relation_matrix": matrix_json(&relation_matrix(sub)),
                "abelian_invariants": invariants_json(&abelian_invariants(sub)),
            });
            let text = vec![serde_json::to_string_pretty(&value).expect("serializes")];
            Ok(single(cfg, name, Check::new("rs", PLUMBING, Status::Pass, value).with_text(text)))
        }
        Command::Abelianize { pres } => {
            let pres = parse_presentation(pres)?;
            let inv = invariants_json(&abelian_invariants(&pres));
            let text = vec![serde_json::to_string(&inv).expect("serializes")];
            let check = Check::new("abelianize", PLUMBING, Status::Pass, json!({ "invariant_factors": inv }));
            Ok(single(cfg, name, check.with_text(text)))
        }
        Command::Det { matrix, file } => {
            let text = match (matrix, file) {
                (Some(m), None) => m.replace(';', "\n"),
                (None, Some(path)) => std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?,
                _ => return Err(Error::InvalidArgument("give the matrix either inline or with --file".into())),
            };
            let m = IntMatrix::from_csv(&text)?;
            let d = determinant(&m)?;
            let check = Check::new("det", PLUMBING, Status::Pass, json!({ "matrix": matrix_json(&m), "determinant": d.to_string() }))
                .with_text(vec![d.to_string()]);
            Ok(single(cfg, name, check))
        }
        Command::LcsCompare { family, reference, target, images, .. } => {
            let (report, anchor, id) = match (target, images) {
                (Some(t), Some(imgs)) => {
                    let reference = match reference {
                        Some(r) => parse_presentation(r)?,
                        None => ParaFamily::new(cfg.p, cfg.l, cfg.k)?.gamma,
                    };
                    let target = parse_presentation(t)?;
                    let images = parse_words(imgs, target.alphabet())?;
                    (compare_lcs(&reference, &target, &images, cfg.max_class, options)?, "generatorlemma", "lcs-custom".to_string())
                }
                _ => {
                    if reference.is_some() {
                        return Err(Error::InvalidArgument("--reference needs --target and --images".into()));
                    }
                    let which = family.unwrap_or(Member::G1);
                    let fam = ParaFamily::new(cfg.p, cfg.l, cfg.k)?;
                    let anchor = if which == Member::G1 { "paraffpclaim" } else { "claim1" };
                    (verify_weakly_para(&fam, which, cfg.max_class, options)?, anchor, format!("weakly-para-{which:?}"))
                }
            };
            let data = serde_json::to_value(&report).expect("serializes");
            let check = Check::new(id, anchor, lcs_status(&report), data).with_text(lcs_text(&report));
            Ok(single(cfg, name, check))
        }
        Command::GogSearch { n, cap, .. } => {
            let r = enumerate_admissible(cfg.p, *n, cfg.max_k, cfg.max_exponent, *cap)?;
            let mut text = Vec::new();
            let mut trees = Vec::new();
            let mut cp_n = true;
            for t in &r.trees {
                let inv = abelian_invariants(&tree_pi1_presentation(&t.tree)?);
                let expected = vec![cfg.p.to_string(); *n as usize];
                cp_n &= invariants_list(&inv) == expected;
                text.push(t.tree.describe());
                text.push(format!("    product {} = {}", t.constraints.product_lhs, t.constraints.product_rhs));
                text.push(format!("    euler   {} = {}", t.constraints.euler_lhs, t.constraints.euler_rhs));
                text.push(format!("    abelianization {}", serde_json::to_string(&invariants_json(&inv)).expect("serializes")));
                let mut v = serde_json::to_value(t).expect("serializes");
                v["abelian_invariants"] = invariants_json(&inv);
                trees.push(v);
            }
            let in_range = u64::from(*n) <= cfg.p;
            text.push(format!(
                "{} admissible of {} candidates (p = {}, n = {}, max-k = {}, max-exp = {})",
                r.trees.len(),
                r.candidates_examined,
                cfg.p,
                n,
                cfg.max_k,
                cfg.max_exponent
            ));
            if !in_range {
                text.push("n > p: reported only, uniqueness is not asserted".to_string());
            }
            let ok = !in_range || (r.unique_free_product() && cp_n);
            let mut data = serde_json::to_value(&r).expect("serializes");
            data["trees"] = Value::Array(trees);
            data["uniqueness_asserted"] = json!(in_range);
            Ok(single(cfg, name, Check::new("gog-search", "LEM EQNS", Status::from_bool(ok), data).with_text(text)))
        }
        Command::MatrixA { p } => Ok(single(cfg, name, suite::matrix_a_check(*p, options))),
        Command::VerifyPaper { .. } => Ok(Report::new(name, config_value(cfg), suite::verify_paper(cfg))),
    }
}

/// Coset table of the kernel of `g -> shift(g) mod modulus`.
fn cyclic_table(pres: &Presentation, map: &str, modulus: i64) -> parafree_core::Result<CosetTable> {
    if modulus < 1 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let mut shifts: Vec<Option<i64>> = vec![None; pres.num_generators()];
    for pair in map.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (g, s) = pair
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("map entry `{pair}` is not `gen:shift`")))?;
        let g = pres.gen(g.trim())?;
        let s: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("shift `{}` is not an integer", s.trim())))?;
        shifts[g.index()] = Some(s);
    }
    let shifts = shifts
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| Error::MissingImage(pres.alphabet().names()[i].clone())))
        .collect::<parafree_core::Result<Vec<_>>>()?;
    for (i, r) in pres.relators().iter().enumerate() {
        let image: i64 = pres.alphabet().gens().map(|g| shifts[g.index()] * r.exponent_sum(g)).sum();
        if image.rem_euclid(modulus) != 0 {
            return Err(Error::NotHomomorphism { relator: i, image: image.rem_euclid(modulus), modulus });
        }
    }
    let g = shifts.iter().fold(modulus, |acc, &s| num_integer::gcd(acc, s));
    if g != 1 {
        return Err(Error::InvalidArgument(format!("the map onto C_{modulus} is not surjective")));
    }
    let table = CosetTable::from_cyclic_map(&shifts, modulus)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_level_split_respects_brackets() {
        assert_eq!(split_top_level("a*[b,a], b"), vec!["a*[b,a]", "b"]);
        assert_eq!(split_top_level("(a*[a^3,b])^2"), vec!["(a*[a^3,b])^2"]);
        assert!(split_top_level("").is_empty());
    }

    #[test]
    fn usage_errors_are_classified() {
        assert!(is_usage_error(&Error::Syntax { pos: 0, msg: "x".into() }));
        assert!(!is_usage_error(&Error::CosetLimit { limit: 1 }));
        assert!(!is_usage_error(&Error::ClaimViolation("x".into())));
    }
}
