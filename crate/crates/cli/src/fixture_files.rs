//! The on-disk fixture tree.
//!
//! ```text
//! derivations/<name>.deriv   accepted by the checker
//! invalid/<name>.deriv       rejected; first line `; expect: <Reason>`
//! terms/<name>.lc            lambda-C terms
//! mu/<name>.mu               lambda-mu terms
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use mixlogic::derivation::{check, library};
use mixlogic::term::builtin;
use mixlogic::term::mu::{builtin_mu, church_mu};
use mixlogic::{church, parse_mu_term, parse_term, Term};

use crate::acceptance::lazy_term;
use crate::corrupt::corruptions;
use crate::deriv_file::{read_derivation, write_derivation};

fn control_integer(n: usize) -> Term {
    Term::app(Term::Control, Term::lam("k", Term::app(Term::var("k"), church(n))))
}

/// Every generated file with its path relative to the fixture root.
pub fn render() -> Vec<(PathBuf, String)> {
    let mut out = Vec::new();
    for (name, d) in library::all() {
        out.push((PathBuf::from(format!("derivations/{name}.deriv")), write_derivation(&d)));
    }
    for (name, d, reason) in corruptions() {
        let text = format!("; expect: {reason}\n{}", write_derivation(&d));
        out.push((PathBuf::from(format!("invalid/{name}.deriv")), text));
    }
    let mut terms: Vec<(&str, Term)> = ["T1", "T2", "abort", "Cprime", "Cwrap"]
        .into_iter()
        .map(|n| (n, builtin(n).expect("builtin")))
        .collect();
    terms.push(("church3", church(3)));
    terms.push(("control3", control_integer(3)));
    terms.push(("lazy", lazy_term()));
    for (name, t) in terms {
        out.push((PathBuf::from(format!("terms/{name}.lc")), format!("{t}\n")));
    }
    let mus = [("muC", builtin_mu("muC").expect("builtin")), ("church3", church_mu(3))];
    for (name, t) in mus {
        out.push((PathBuf::from(format!("mu/{name}.mu")), format!("{t}\n")));
    }
    out
}

pub fn write(dir: &Path) -> io::Result<usize> {
    let files = render();
    for (rel, text) in &files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, text)?;
    }
    Ok(files.len())
}

fn files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .map(|rd| rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == ext)).collect())
        .unwrap_or_default();
    v.sort();
    v
}

fn expected_reason(text: &str) -> Option<&str> {
    text.lines().next()?.strip_prefix("; expect:").map(str::trim)
}

/// One `PASS`/`FAIL` line per fixture file.
pub fn run(dir: &Path) -> Vec<String> {
    let mut lines = Vec::new();
    let mut report = |ok: bool, path: &Path, detail: String| {
        let tag = if ok { "PASS" } else { "FAIL" };
        lines.push(format!("{tag} {}{detail}", path.display()));
    };
    let valid = files(&dir.join("derivations"), "deriv");
    if valid.is_empty() {
        report(false, dir, ": no derivation fixtures".into());
    }
    for p in valid {
        let res = fs::read_to_string(&p).map_err(|e| e.to_string()).and_then(|t| read_derivation(&t).map_err(|e| e.to_string()));
        match res {
            Ok(d) => match check(&d) {
                Ok(()) => report(true, &p, String::new()),
                Err(e) => report(false, &p, format!(": {e}")),
            },
            Err(e) => report(false, &p, format!(": {e}")),
        }
    }
    for p in files(&dir.join("invalid"), "deriv") {
        let text = fs::read_to_string(&p).unwrap_or_default();
        let Some(want) = expected_reason(&text) else {
            report(false, &p, ": missing `; expect:` line".into());
            continue;
        };
        match read_derivation(&text).map(|d| check(&d)) {
            Ok(Err(e)) if e.reason.tag() == want => report(true, &p, format!(": {e}")),
            Ok(Err(e)) => report(false, &p, format!(": expected {want}, got {e}")),
            Ok(Ok(())) => report(false, &p, ": accepted".into()),
            Err(e) => report(false, &p, format!(": {e}")),
        }
    }
    for p in files(&dir.join("terms"), "lc") {
        match fs::read_to_string(&p).map(|t| parse_term(&t).map(|_| ())) {
            Ok(Ok(())) => report(true, &p, String::new()),
            Ok(Err(e)) => report(false, &p, format!(":{e}")),
            Err(e) => report(false, &p, format!(": {e}")),
        }
    }
    for p in files(&dir.join("mu"), "mu") {
        match fs::read_to_string(&p).map(|t| parse_mu_term(&t).map(|_| ())) {
            Ok(Ok(())) => report(true, &p, String::new()),
            Ok(Err(e)) => report(false, &p, format!(":{e}")),
            Err(e) => report(false, &p, format!(": {e}")),
        }
    }
    lines
}
