mod config;

use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde::Serialize;
use serde_json::json;

use realforms::forms::{make_mu, make_mu0, make_n12, make_phi12, make_tau12, verify_form, verify_o2_trivialization};
use realforms::oracle::search_conjugator;
use realforms::quotient::{induced_images, make_invariants, verify_relation};
use realforms::selftest::{criterion, CriterionResult};
use realforms::symmap::o2_relation_check;
use realforms::{classify, decide_equiv, Certificate, FormSpec, LaurentPoly, Weights};

use config::{Cli, RunConfig, UsageError};

/// Exit statuses. `Inconclusive` is the oracle's "nothing found within the
/// bound", deliberately distinct from a proven negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Success,
    Negative,
    Usage,
    Inconclusive,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> ExitCode {
        ExitCode::from(match o {
            Outcome::Success => 0,
            Outcome::Negative => 1,
            Outcome::Usage => 2,
            Outcome::Inconclusive => 3,
        })
    }
}

fn positive(ok: bool) -> Outcome {
    if ok {
        Outcome::Success
    } else {
        Outcome::Negative
    }
}

struct Output {
    json: bool,
    verbose: bool,
}

impl Output {
    fn emit(&self, value: &impl Serialize, human: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("serialisable"));
        } else {
            println!("{}", human());
        }
    }

    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn cmd_verify_form(out: &Output, spec: &FormSpec) -> anyhow::Result<Outcome> {
    let report = verify_form(spec);
    let passed = report.all_pass();
    let doc = json!({ "m": spec.m(), "h": spec.h(), "checks": report, "passed": passed });
    out.emit(&doc, || {
        let r = &report;
        let rows = [
            ("det M_h = 1", r.det_is_one),
            ("M_h·γM_h = I", r.cocycle),
            ("M_h ∈ Λ", r.in_lambda),
            ("φ_h is ℂ*-equivariant", r.phi_equivariant),
            ("μ_h ∘ μ_h = id", r.involution),
            ("μ_h(t·v) = σ(t)·μ_h(v)", r.sigma_compatible),
        ];
        let mut s = format!("h = {}, m = {}\n", spec.h(), spec.m());
        for (label, ok) in rows {
            s += &format!("  {:<26} {}\n", label, if ok { "ok" } else { "FAILED" });
        }
        s + if passed { "verdict: real circle form" } else { "verdict: not a real circle form" }
    });
    Ok(positive(passed))
}

fn cmd_equiv(
    out: &Output,
    m: u32,
    h: &LaurentPoly,
    hp: &LaurentPoly,
    cert_path: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let d = decide_equiv(h, hp, m)?;
    let note = match (&d.equivalent, &d.rational_witness) {
        (false, _) => "inequivalent".to_string(),
        (true, Some(r)) => format!("equivalent with rational witness r = {r}"),
        (true, None) => "equivalent over ℝ, no rational witness".to_string(),
    };
    if let (Some(path), Some(cert)) = (cert_path, &d.certificate) {
        write_json(path, cert)?;
        out.note(format!("certificate written to {}", path.display()));
    }
    let mut doc = serde_json::to_value(&d)?;
    doc["note"] = json!(note);
    out.emit(&doc, || {
        let mut s = format!("h = {h}, h′ = {hp}, m = {m}\n{note}");
        if let Some(c) = &d.certificate {
            s += &format!("\ncertificate N: {}", c.n);
        }
        s
    });
    Ok(positive(d.equivalent))
}

fn cmd_verify_certificate(
    out: &Output,
    m: u32,
    h: &LaurentPoly,
    hp: &LaurentPoly,
    file: &Path,
) -> anyhow::Result<Outcome> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return usage_failure(&format!("--file {}: {e}", file.display())),
    };
    let cert: Certificate = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return usage_failure(&format!("--file: not a certificate: {e}")),
    };
    if cert.r.is_zero() {
        return usage_failure("--file: witness r must be nonzero");
    }
    let ok = cert.verify(h, hp, m)?;
    out.emit(&json!({ "verified": ok, "r": cert.r }), || {
        if ok {
            format!("certificate verified (r = {})", cert.r)
        } else {
            "certificate rejected".to_string()
        }
    });
    Ok(positive(ok))
}

fn cmd_classify(out: &Output, m: u32, forms: &[LaurentPoly], path: Option<&Path>) -> anyhow::Result<Outcome> {
    let partition = classify(forms, m)?;
    let doc = json!({ "m": m, "count": partition.len(), "classes": partition.classes });
    if let Some(path) = path {
        write_json(path, &doc)?;
    }
    out.emit(&doc, || {
        let mut s = format!("{} forms, {} classes at m = {m}", forms.len(), partition.len());
        for (i, class) in partition.classes.iter().enumerate() {
            let members: Vec<String> = class.iter().map(|&j| format!("#{j} ({})", forms[j])).collect();
            s += &format!("\n  class {i}: {}", members.join(", "));
        }
        s
    });
    Ok(Outcome::Success)
}

const NOT_FOUND: &str = "no conjugator found at this bound";

fn cmd_oracle(
    out: &Output,
    m: u32,
    h: &LaurentPoly,
    hp: &LaurentPoly,
    deg: u32,
    grid: &[realforms::Rational],
    path: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let found = search_conjugator(h, hp, m, deg, grid)?;
    let status = if found.is_empty() { NOT_FOUND } else { "found" };
    let conjugators: Vec<Certificate> = found.into_iter().map(|(r, n)| Certificate { r, n }).collect();
    let doc = json!({ "status": status, "deg_bound": deg, "r_grid": grid, "found": conjugators });
    if let Some(path) = path {
        write_json(path, &doc)?;
    }
    out.emit(&doc, || {
        if conjugators.is_empty() {
            return format!("{NOT_FOUND} (deg ≤ {deg}, {} grid values); this is not a proof of inequivalence", grid.len());
        }
        let mut s = format!("{} conjugators found", conjugators.len());
        for c in &conjugators {
            s += &format!("\n  r = {}: {}", c.r, c.n);
        }
        s
    });
    Ok(if conjugators.is_empty() { Outcome::Inconclusive } else { Outcome::Success })
}

fn cmd_case12(out: &Output) -> anyhow::Result<Outcome> {
    let phi = make_phi12();
    let conjugation = verify_o2_trivialization();
    let bundle = phi.mul(&phi.s_twist())?.is_identity();
    let o2 = o2_relation_check(&make_tau12(), &Weights::new(1, 2));
    let passed = conjugation && bundle && o2;
    let doc = json!({
        "Phi": phi,
        "N": make_n12(),
        "conjugation": conjugation,
        "phi_s_twist_identity": bundle,
        "o2_relations": o2,
        "passed": passed,
    });
    out.emit(&doc, || {
        format!(
            "Φ: {phi}\nN: {}\nN·(γN)⁻¹ = Φ, det N constant, N ∈ Λ: {conjugation}\nΦ·ŝΦ = I: {bundle}\nO₂ relations for τ: {o2}\nverdict: {}",
            make_n12(),
            if passed { "the nontrivial O₂-bundle carries a trivial circle form" } else { "FAILED" }
        )
    });
    Ok(positive(passed))
}

fn cmd_quotient(out: &Output, m: u32, h: Option<&LaurentPoly>) -> anyhow::Result<Outcome> {
    let inv = make_invariants(m)?;
    let relation = verify_relation(m)?;
    let mut maps = vec![("mu0".to_string(), make_mu0())];
    if let Some(h) = h {
        maps.push((format!("mu_h (h = {h})"), make_mu(&FormSpec::new(m, h.clone())?)));
    }
    let mut images = Vec::new();
    for (name, mu) in &maps {
        images.push(json!({ "map": name, "images": induced_images(mu, m)?.report() }));
    }
    let doc = json!({
        "m": m,
        "generators": { "T": inv.t.to_string(), "W": inv.w.to_string(), "U": inv.u.to_string(), "V": inv.v.to_string() },
        "relation_holds": relation,
        "induced": images,
    });
    out.emit(&doc, || {
        let mut s = format!(
            "T = {}, W = {}, U = {}, V = {}\nUV − T^{}W² = 0: {relation}",
            inv.t, inv.w, inv.u, inv.v, inv.n
        );
        for (name, mu) in &maps {
            let report = induced_images(mu, m).expect("validated above").report();
            s += &format!("\npullbacks along {name}:");
            for row in &report.rows {
                let expr = row.in_invariants.as_deref().unwrap_or("not in the invariant subring");
                s += &format!("\n  {} ↦ {}   [= {expr}]", row.generator, row.image);
            }
        }
        s
    });
    Ok(positive(relation))
}

fn cmd_selftest(out: &Output, only: &[u32]) -> anyhow::Result<Outcome> {
    let ids: Vec<u32> = if only.is_empty() { (1..=10).collect() } else { only.to_vec() };
    let mut results: Vec<CriterionResult> = Vec::new();
    for id in ids {
        let r = criterion(id).expect("validated id");
        if !out.json {
            println!("{}", r.line());
        }
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    if out.json {
        println!("{}", serde_json::to_string_pretty(&json!({ "criteria": results, "passed": passed }))?);
    } else {
        println!("selftest: {}", if passed { "all criteria passed" } else { "FAILED" });
    }
    Ok(positive(passed))
}

fn usage_failure(msg: &str) -> anyhow::Result<Outcome> {
    eprintln!("error: {msg}");
    Ok(Outcome::Usage)
}

fn run(cfg: RunConfig, out: &Output) -> anyhow::Result<Outcome> {
    match cfg {
        RunConfig::VerifyForm(form) => cmd_verify_form(out, &FormSpec::new(form.m, form.h)?),
        RunConfig::Equiv { m, h, hp, out: path } => cmd_equiv(out, m, &h, &hp, path.as_deref()),
        RunConfig::VerifyCertificate { m, h, hp, file } => cmd_verify_certificate(out, m, &h, &hp, &file),
        RunConfig::Classify { m, forms, out: path } => cmd_classify(out, m, &forms, path.as_deref()),
        RunConfig::Oracle { m, h, hp, deg, r_grid, out: path } => {
            cmd_oracle(out, m, &h, &hp, deg, &r_grid, path.as_deref())
        }
        RunConfig::Case12 => cmd_case12(out),
        RunConfig::Quotient { m, h } => cmd_quotient(out, m, h.as_ref()),
        RunConfig::Selftest { only } => cmd_selftest(out, &only),
    }
}

fn setup_threads() -> Result<(), UsageError> {
    if let Some(n) = config::thread_count(std::env::var("REALFORMS_THREADS").ok())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| UsageError(format!("REALFORMS_THREADS: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output { json: cli.json, verbose: cli.verbose };
    let cfg = match setup_threads().and_then(|()| RunConfig::from_cli(&cli)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return Outcome::Usage.into();
        }
    };
    out.note(format!("{cfg:?}"));
    match run(cfg, &out) {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            Outcome::Negative.into()
        }
    }
}
