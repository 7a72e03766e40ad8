use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};
use superorbit_core::deform::{
    casimir_element, centrality_check, star_axiom_check, star_product, symmetrize,
    unsymmetrize, EnvElement, HPoly, IdealSpec, NormalWord, QuotientBasis,
};
use superorbit_core::json::{
    constants_from_json, constants_to_json, env_from_json, env_to_json, matrix_entry_texts,
    matrix_from_json, matrix_to_json, orbit_spec_to_json, poly_to_json,
};
use superorbit_core::lie::{check_axioms, killing_form, LieSuperAlgebra, PoissonRing};
use superorbit_core::matrix::{BlockShape, SuperMatrix};
use superorbit_core::orbit::{
    ad_invariance_check, all_distinct, superdiagonalize, syzygy_verify, vandermonde_criterion,
    AlgebraKind, OrbitSpec,
};
use superorbit_core::scalar::{format_scalar, parse_scalar};
use superorbit_core::text::{infer_signature, parse_poly, print_poly};
use superorbit_core::{Parity, RingSignature, Scalar, SuperPolynomial};

use crate::error::{precondition, usage, CliError};
use crate::{Cli, Command};

/// Result of a subcommand: a JSON document, a text report and whether every checked
/// property held.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, ok: true }
    }

    fn checked(json: Value, text: String, ok: bool) -> Self {
        Output { json, text, ok }
    }

    /// Always JSON, whatever `--json` says.
    fn json_only(json: Value, ok: bool) -> Self {
        let text = serde_json::to_string_pretty(&json).expect("plain data");
        Output { json, text, ok }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("plain data")
        } else {
            self.text.clone()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Eval { exprs } => eval(cli, exprs),
        Command::Ber { input } => ber(cli, input),
        Command::Strpow {
            kmax,
            even_only,
            input,
        } => strpow(cli, input, *kmax, *even_only),
        Command::Inv { input } => inv(cli, input),
        Command::BracketTable { input } => bracket_table(cli, input),
        Command::CheckAxioms { input } => axioms(cli, input),
        Command::Killing { expect, input } => killing(cli, input, expect.as_deref()),
        Command::Poisson { f, g } => poisson(cli, f, g),
        Command::Diagonalize { input } => diagonalize(cli, input),
        Command::Vandermonde => vandermonde(cli),
        Command::AdInvariance { kmax, thetas } => ad_invariance(cli, *kmax, *thetas),
        Command::SyzygyVerify { input } => syzygy(cli, input),
        Command::Symmetrize { expr, inverse } => symmetrize_cmd(cli, expr.as_deref(), *inverse),
        Command::Star { f, g } => star(cli, f, g),
        Command::Casimir { k } => casimir(cli, *k),
        Command::Central { kmax } => central(cli, *kmax),
        Command::QuotientBasis { exprs } => quotient_basis(cli, exprs),
        Command::StarAxioms { samples } => star_axioms(cli, *samples),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_json(path: &Option<PathBuf>) -> Result<Value, CliError> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// `--ring` when given, otherwise the smallest ring containing every generator named in
/// `texts`.
fn ring_for<'a>(cli: &Cli, texts: impl IntoIterator<Item = &'a str>) -> Result<Arc<RingSignature>, CliError> {
    let (m, n) = match cli.ring {
        Some(r) => r,
        None => infer_signature(texts),
    };
    Ok(Arc::new(RingSignature::new(m, n)?))
}

fn shape(cli: &Cli) -> Result<BlockShape, CliError> {
    let (m, n) = cli.shape.ok_or_else(|| usage("--shape m,n is required"))?;
    Ok(BlockShape::new(m, n)?)
}

fn kind(cli: &Cli) -> Result<AlgebraKind, CliError> {
    cli.algebra.ok_or_else(|| usage("--algebra gl|sl|osp is required"))
}

fn algebra_name(kind: AlgebraKind, shape: BlockShape) -> String {
    format!("{kind}({}|{})", shape.m, shape.n)
}

fn builtin_algebra(cli: &Cli) -> Result<Arc<LieSuperAlgebra>, CliError> {
    let (kind, shape) = (kind(cli)?, shape(cli)?);
    Ok(Arc::new(kind.build(shape.m, shape.n)?))
}

/// Built-in algebra when `--algebra` is set, else a structure-constant table.
fn algebra_or_table(cli: &Cli, input: &Option<PathBuf>) -> Result<Arc<LieSuperAlgebra>, CliError> {
    if cli.algebra.is_some() {
        builtin_algebra(cli)
    } else {
        Ok(Arc::new(constants_from_json("table", &read_json(input)?)?))
    }
}

fn lambda(cli: &Cli) -> Result<Vec<Scalar>, CliError> {
    let raw = cli
        .lambda
        .as_ref()
        .ok_or_else(|| usage("--lambda is required"))?;
    raw.iter()
        .map(|s| parse_scalar(s).map_err(|_| usage(format!("bad eigenvalue `{s}`"))))
        .collect()
}

fn orbit_spec(cli: &Cli) -> Result<OrbitSpec, CliError> {
    Ok(OrbitSpec::new(kind(cli)?, shape(cli)?, lambda(cli)?)?)
}

fn poly_report(p: &SuperPolynomial) -> Value {
    json!({"text": print_poly(p), "terms": poly_to_json(p)})
}

fn read_matrix(cli: &Cli, input: &Option<PathBuf>) -> Result<SuperMatrix, CliError> {
    let v = read_json(input)?;
    let texts = matrix_entry_texts(&v)?;
    let sig = ring_for(cli, texts.iter().map(String::as_str))?;
    let a = matrix_from_json(&v, &sig)?;
    if let Some((m, n)) = cli.shape {
        if (a.shape().m, a.shape().n) != (m, n) {
            return Err(usage(format!(
                "matrix has shape {}|{}, --shape says {m}|{n}",
                a.shape().m,
                a.shape().n
            )));
        }
    }
    Ok(a)
}

fn eval(cli: &Cli, exprs: &[String]) -> Result<Output, CliError> {
    if exprs.is_empty() {
        return Err(usage("no expressions given"));
    }
    let sig = ring_for(cli, exprs.iter().map(String::as_str))?;
    let polys = exprs
        .iter()
        .map(|e| parse_poly(e, &sig))
        .collect::<Result<Vec<_>, _>>()?;
    let text = polys.iter().map(print_poly).collect::<Vec<_>>().join("\n");
    let json = Value::Array(polys.iter().map(poly_report).collect());
    Ok(Output::new(json, text))
}

fn ber(cli: &Cli, input: &Option<PathBuf>) -> Result<Output, CliError> {
    let b = read_matrix(cli, input)?.berezinian()?;
    Ok(Output::new(poly_report(&b), print_poly(&b)))
}

fn strpow(cli: &Cli, input: &Option<PathBuf>, kmax: u32, even_only: bool) -> Result<Output, CliError> {
    let sums = read_matrix(cli, input)?.power_sums(kmax, even_only)?;
    let ks: Vec<u32> = (1..=kmax).filter(|k| !even_only || k % 2 == 0).collect();
    let text = ks
        .iter()
        .zip(&sums)
        .map(|(k, s)| format!("str A^{k} = {}", print_poly(s)))
        .collect::<Vec<_>>()
        .join("\n");
    let json = Value::Array(
        ks.iter()
            .zip(&sums)
            .map(|(k, s)| json!({"k": k, "value": poly_report(s)}))
            .collect(),
    );
    Ok(Output::new(json, text))
}

fn matrix_text(a: &SuperMatrix) -> String {
    a.rows()
        .iter()
        .map(|r| r.iter().map(print_poly).collect::<Vec<_>>().join(" | "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn inv(cli: &Cli, input: &Option<PathBuf>) -> Result<Output, CliError> {
    let a = read_matrix(cli, input)?.inverse()?;
    Ok(Output::new(matrix_to_json(&a), matrix_text(&a)))
}

fn bracket_table(cli: &Cli, input: &Option<PathBuf>) -> Result<Output, CliError> {
    let l = algebra_or_table(cli, input)?;
    let mut lines = Vec::new();
    for (i, j, k, v) in l.constants() {
        lines.push(format!("[X{}, X{}] : X{} coefficient {}", i + 1, j + 1, k + 1, format_scalar(&v)));
    }
    Ok(Output::new(constants_to_json(&l), lines.join("\n")))
}

fn axioms(cli: &Cli, input: &Option<PathBuf>) -> Result<Output, CliError> {
    let l = algebra_or_table(cli, input)?;
    let r = check_axioms(&l);
    let triples = |v: &[(usize, usize, usize)]| -> Vec<[usize; 3]> {
        v.iter().map(|(i, j, k)| [i + 1, j + 1, k + 1]).collect()
    };
    let json = json!({
        "grading": triples(&r.grading),
        "antisymmetry": triples(&r.antisymmetry),
        "jacobi": triples(&r.jacobi),
        "passed": r.passed(),
    });
    let text = format!(
        "grading: {}\nantisymmetry: {}\njacobi: {}",
        violations(r.grading.len()),
        violations(r.antisymmetry.len()),
        violations(r.jacobi.len())
    );
    Ok(Output::checked(json, text, r.passed()))
}

fn violations(n: usize) -> String {
    if n == 0 {
        "pass".to_string()
    } else {
        format!("FAIL ({n} violations)")
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn killing(cli: &Cli, input: &Option<PathBuf>, expect: Option<&str>) -> Result<Output, CliError> {
    let l = algebra_or_table(cli, input)?;
    let k = killing_form(&l);
    let nondegenerate = k.nondegenerate();
    let ok = match expect {
        Some("degenerate") => !nondegenerate,
        Some("nondegenerate") => nondegenerate,
        _ => true,
    };
    let matrix: Vec<Vec<String>> = k
        .matrix
        .iter()
        .map(|r| r.iter().map(format_scalar).collect())
        .collect();
    let json = json!({
        "matrix": matrix,
        "evenDet": format_scalar(&k.even_det),
        "oddDet": format_scalar(&k.odd_det),
        "nondegenerate": nondegenerate,
    });
    let text = format!(
        "even block det: {}\nodd block det: {}\n{}",
        format_scalar(&k.even_det),
        format_scalar(&k.odd_det),
        if nondegenerate { "nondegenerate" } else { "degenerate" }
    );
    Ok(Output::checked(json, text, ok))
}

fn poisson_ring(cli: &Cli) -> Result<PoissonRing, CliError> {
    Ok(PoissonRing::new(builtin_algebra(cli)?)?)
}

fn poisson(cli: &Cli, f: &str, g: &str) -> Result<Output, CliError> {
    let ring = poisson_ring(cli)?;
    let f = parse_poly(f, ring.signature())?;
    let g = parse_poly(g, ring.signature())?;
    let b = ring.bracket(&f, &g)?;
    Ok(Output::new(poly_report(&b), print_poly(&b)))
}

fn diagonalize(cli: &Cli, input: &Option<PathBuf>) -> Result<Output, CliError> {
    let spec = orbit_spec(cli)?;
    let w = read_matrix(cli, input)?;
    let r = superdiagonalize(&w, &spec)?;
    let ok = r.residual_free() && r.rigid && r.matches_x0;
    let json = json!({
        "spec": orbit_spec_to_json(&spec),
        "g": matrix_to_json(&r.g),
        "D": matrix_to_json(&r.d),
        "perOrderResiduals": r.residuals,
        "rigid": r.rigid,
        "matchesX0": r.matches_x0,
        "membership": r.membership,
    });
    Ok(Output::json_only(json, ok))
}

fn vandermonde(cli: &Cli) -> Result<Output, CliError> {
    let shape = shape(cli)?;
    let lambda = lambda(cli)?;
    if lambda.len() != shape.size() {
        return Err(usage(format!("expected {} eigenvalues, got {}", shape.size(), lambda.len())));
    }
    if !all_distinct(&lambda) {
        return Err(precondition("eigenvalues collide; the Vandermonde determinant vanishes"));
    }
    let v = vandermonde_criterion(&lambda, shape.m, shape.n)?;
    let json = json!({
        "det": format_scalar(&v.det),
        "product": format_scalar(&v.product),
        "sign": v.sign,
        "matchesMnSign": v.matches_mn_sign,
    });
    let text = format!(
        "det = {}\nproduct = {}\nsign = {}",
        format_scalar(&v.det),
        format_scalar(&v.product),
        v.sign
    );
    Ok(Output::new(json, text))
}

fn ad_invariance(cli: &Cli, kmax: u32, thetas: usize) -> Result<Output, CliError> {
    let r = ad_invariance_check(kind(cli)?, shape(cli)?, kmax, thetas, cli.seed)?;
    let json = json!({
        "results": r.results.iter().map(|(k, h)| json!({"k": k, "holds": h})).collect::<Vec<_>>(),
        "groupElement": matrix_to_json(&r.group_element),
        "holds": r.holds(),
    });
    let text = r
        .results
        .iter()
        .map(|(k, h)| format!("str M^{k}: {}", verdict(*h)))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::checked(json, text, r.holds()))
}

fn syzygy(cli: &Cli, input: &Option<PathBuf>) -> Result<Output, CliError> {
    let v = read_json(input)?;
    let strings = |key: &str| -> Result<Vec<String>, CliError> {
        serde_json::from_value(v.get(key).cloned().ok_or_else(|| usage(format!("missing `{key}`")))?)
            .map_err(usage)
    };
    let q = strings("q")?;
    let f = strings("f")?;
    let cert: Vec<Vec<String>> = serde_json::from_value(
        v.get("F").cloned().ok_or_else(|| usage("missing `F`"))?,
    )?;
    let all = q.iter().chain(&f).chain(cert.iter().flatten());
    let sig = ring_for(cli, all.map(String::as_str))?;
    let parse = |xs: &[String]| -> Result<Vec<SuperPolynomial>, CliError> {
        xs.iter().map(|s| Ok(parse_poly(s, &sig)?)).collect()
    };
    let q = parse(&q)?;
    let f = parse(&f)?;
    let cert = cert.iter().map(|r| parse(r)).collect::<Result<Vec<_>, _>>()?;
    let r = syzygy_verify(&q, &f, &cert)?;
    let json = json!({
        "relation": r.relation,
        "antisymmetric": r.antisymmetric,
        "represented": r.represented,
        "passed": r.passed(),
    });
    let text = format!(
        "sum f_i q_i = 0: {}\nF antisymmetric: {}\nf = F q: {}",
        verdict(r.relation),
        verdict(r.antisymmetric),
        verdict(r.represented)
    );
    Ok(Output::checked(json, text, r.passed()))
}

fn hpoly_report(p: &HPoly) -> Value {
    json!({
        "text": p.to_string(),
        "parts": p.parts().iter().map(poly_to_json).collect::<Vec<_>>(),
    })
}

fn env_report(e: &EnvElement) -> Value {
    json!({"text": e.to_string(), "terms": env_to_json(e)})
}

fn symmetrize_cmd(cli: &Cli, expr: Option<&str>, inverse: bool) -> Result<Output, CliError> {
    let ring = poisson_ring(cli)?;
    if inverse {
        let text = match expr {
            Some(e) => e.to_string(),
            None => read_input(&None)?,
        };
        let v: Value = serde_json::from_str(&text)?;
        let a = env_from_json(&v, ring.algebra(), cli.h_order)?;
        let p = unsymmetrize(&ring, &a)?;
        return Ok(Output::new(hpoly_report(&p), p.to_string()));
    }
    let expr = expr.ok_or_else(|| usage("an expression is required"))?;
    let f = parse_poly(expr, ring.signature())?;
    let t = symmetrize(&ring, &f, cli.h_order)?;
    Ok(Output::new(env_report(&t), t.to_string()))
}

fn star(cli: &Cli, f: &str, g: &str) -> Result<Output, CliError> {
    let ring = poisson_ring(cli)?;
    let f = parse_poly(f, ring.signature())?;
    let g = parse_poly(g, ring.signature())?;
    let fg = star_product(&ring, &f, &g, cli.h_order)?;
    let commutator = match (f.parity().homogeneous(), g.parity().homogeneous()) {
        (Some(pf), Some(pg)) => {
            let gf = star_product(&ring, &g, &f, cli.h_order)?;
            Some(if pf == Parity::Odd && pg == Parity::Odd {
                fg.add(&gf)
            } else {
                fg.sub(&gf)
            })
        }
        _ => None,
    };
    let mut text = format!("f*g = {fg}");
    if let Some(c) = &commutator {
        text.push_str(&format!("\n[f,g]* = {c}"));
    }
    let json = json!({
        "product": hpoly_report(&fg),
        "commutator": commutator.as_ref().map(hpoly_report),
    });
    Ok(Output::new(json, text))
}

fn casimir(cli: &Cli, k: u32) -> Result<Output, CliError> {
    let ring = poisson_ring(cli)?;
    let (p, big_p) = casimir_element(&ring, k, cli.h_order)?;
    let json = json!({"k": k, "symbol": poly_report(&p), "element": env_report(&big_p)});
    let text = format!("p{k} = {}\nP{k} = {big_p}", print_poly(&p));
    Ok(Output::new(json, text))
}

fn central(cli: &Cli, kmax: u32) -> Result<Output, CliError> {
    let ring = poisson_ring(cli)?;
    let mut results = Vec::new();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in 1..=kmax {
        let (_, big_p) = casimir_element(&ring, k, cli.h_order)?;
        let failures = centrality_check(&big_p)?;
        ok &= failures.is_empty();
        lines.push(if failures.is_empty() {
            format!("P{k}: central")
        } else {
            let idx: Vec<String> = failures.iter().map(|i| format!("X{}", i + 1)).collect();
            format!("P{k}: FAIL, does not commute with {}", idx.join(", "))
        });
        results.push(json!({
            "k": k,
            "central": failures.is_empty(),
            "failures": failures.iter().map(|i| i + 1).collect::<Vec<_>>(),
        }));
    }
    Ok(Output::checked(Value::Array(results), lines.join("\n"), ok))
}

fn word_text(w: &NormalWord) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|i| format!("X{}", i + 1)).collect::<Vec<_>>().join("*")
    }
}

fn one_based(w: &NormalWord) -> Vec<usize> {
    w.iter().map(|i| i + 1).collect()
}

fn quotient_for(cli: &Cli) -> Result<(PoissonRing, OrbitSpec, QuotientBasis), CliError> {
    let spec = orbit_spec(cli)?;
    let ring = PoissonRing::new(Arc::new(spec.algebra()?))?;
    let ideal = IdealSpec::from_orbit(&ring, &spec, cli.h_order, cli.deg_cutoff)?;
    let q = QuotientBasis::compute(&ring, &ideal, cli.h_order)?;
    Ok((ring, spec, q))
}

fn quotient_basis(cli: &Cli, exprs: &[String]) -> Result<Output, CliError> {
    let (ring, spec, q) = quotient_for(cli)?;
    let mut basis = q.basis().to_vec();
    basis.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut reductions = Vec::new();
    let mut lines = vec![
        format!("algebra: {}", algebra_name(spec.kind, spec.shape)),
        format!("rank: {}", q.rank()),
        format!("free: {}", q.is_free()),
        format!("basis: {}", basis.iter().map(word_text).collect::<Vec<_>>().join(", ")),
        format!(
            "slice dimensions: {}",
            q.slice_dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
        ),
    ];
    for e in exprs {
        let f = parse_poly(e, ring.signature())?;
        let r = q.reduce(&symmetrize(&ring, &f, cli.h_order)?)?;
        let symbol = unsymmetrize(&ring, &r)?;
        lines.push(format!("{e} = {r}  (symbol {symbol})"));
        reductions.push(json!({
            "input": e,
            "reduced": env_report(&r),
            "symbol": hpoly_report(&symbol),
        }));
    }
    let json = json!({
        "spec": orbit_spec_to_json(&spec),
        "rank": q.rank(),
        "free": q.is_free(),
        "basis": basis.iter().map(one_based).collect::<Vec<_>>(),
        "basisText": basis.iter().map(word_text).collect::<Vec<_>>(),
        "sliceDims": q.slice_dims(),
        "standardCountsByOrder": q.standard_by_order().iter().map(Vec::len).collect::<Vec<_>>(),
        "reductions": reductions,
    });
    Ok(Output::checked(json, lines.join("\n"), q.is_free()))
}

fn star_axioms(cli: &Cli, samples: usize) -> Result<Output, CliError> {
    let (ring, quotient) = if cli.lambda.is_some() {
        let (ring, _, q) = quotient_for(cli)?;
        (ring, Some(q))
    } else {
        (poisson_ring(cli)?, None)
    };
    let r = star_axiom_check(&ring, quotient.as_ref(), samples, cli.h_order, cli.seed)?;
    let json = json!({
        "pairs": r.pairs,
        "failures": r.failures,
        "passed": r.passed(),
    });
    let mut text = format!("{} pairs checked, {} failures", r.pairs, r.failures.len());
    for f in &r.failures {
        text.push_str(&format!("\n  {f}"));
    }
    Ok(Output::checked(json, text, r.passed()))
}
