//! Result lines, structured records and certificate dumps.

use fibre_core::{ConjugacyTrace, PairElement, PowerDecision};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
    /// A computed value, such as an area or a root.
    Value,
}

impl Verdict {
    fn key(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
            Verdict::Value => "value",
        }
    }
}

pub struct Report {
    command: &'static str,
    verdict: Verdict,
    line: String,
    fields: Vec<(&'static str, String)>,
    certificate: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, verdict: Verdict, line: impl Into<String>) -> Self {
        Report { command, verdict, line: line.into(), fields: Vec::new(), certificate: Vec::new() }
    }

    pub fn unknown(command: &'static str, reason: &str) -> Self {
        Report::new(command, Verdict::Unknown, "UNKNOWN").field("reason", reason.to_string())
    }

    pub fn field(mut self, key: &'static str, value: String) -> Self {
        self.fields.push((key, value));
        self
    }

    pub fn certificate(mut self, text: String) -> Self {
        self.certificate.push(text);
        self
    }

    /// Depends on the verdict only.
    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Verdict::Yes | Verdict::Value => 0,
            Verdict::No => 1,
            Verdict::Unknown => 2,
        }
    }

    pub fn print(&self, structured: bool, show_certificate: bool) {
        if structured {
            let mut parts = vec![format!("command={}", self.command), format!("verdict={}", self.verdict.key())];
            parts.extend(self.fields.iter().map(|(k, v)| format!("{k}={}", quote(v))));
            println!("{}", parts.join(" "));
        } else {
            println!("{}", self.line);
        }
        if show_certificate {
            for c in &self.certificate {
                let c = c.trim_end();
                if !c.is_empty() {
                    println!("{c}");
                }
            }
        }
    }
}

fn quote(v: &str) -> String {
    if v.is_empty() || v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

/// `(u,v)` with no space, so that a pair is a single shell token.
pub fn pair_text(p: &PairElement) -> String {
    format!("({},{})", p.first, p.second)
}

pub fn trace_text(t: &ConjugacyTrace) -> String {
    let mut out = vec![format!("branch: {:?}", t.branch)];
    if let Some((w1, w2)) = &t.factor_conjugators {
        out.push(format!("factor conjugators: w1 = {w1}, w2 = {w2}"));
    }
    if let Some(n) = &t.normalization {
        out.push(format!("normalization: {n}"));
    }
    if let Some(r) = &t.roots {
        out.push(format!("roots: z1 = {} ^ {}, z2 = {} ^ {}", r.z1, r.e1, r.z2, r.e2));
    }
    if let Some(w) = &t.w {
        out.push(format!("w = w1·w2⁻¹ = {w}"));
    }
    for q in &t.queries {
        let answer = match &q.answer {
            PowerDecision::Yes { p, .. } => format!("yes, p = {p}"),
            PowerDecision::No(o) => format!("no ({o})"),
            PowerDecision::Unknown(e) => format!("unknown ({})", e.reason),
        };
        out.push(format!("query j = {}: {} in <z1>? {answer}", q.j, q.target));
    }
    if let Some(fibre_core::Decision::Yes(cert)) = &t.membership {
        if cert.factors.is_empty() {
            out.push("membership certificate: empty product".into());
        } else {
            out.push("membership certificate:".into());
            out.push(cert.to_string());
        }
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_with_spaces_are_quoted() {
        assert_eq!(quote("abAB"), "abAB");
        assert_eq!(quote("budget exhausted"), "\"budget exhausted\"");
        assert_eq!(quote(""), "\"\"");
    }

    #[test]
    fn exit_codes_follow_the_verdict() {
        assert_eq!(Report::new("wp", Verdict::Yes, "YES").exit_code(), 0);
        assert_eq!(Report::new("dehn", Verdict::Value, "DELTA 4 = 1").exit_code(), 0);
        assert_eq!(Report::new("wp", Verdict::No, "NO").exit_code(), 1);
        assert_eq!(Report::unknown("wp", "budget").exit_code(), 2);
    }

    #[test]
    fn pairs_are_single_tokens() {
        let p = PairElement::new("abA".parse().unwrap(), fibre_core::Word::empty());
        assert_eq!(pair_text(&p), "(abA,1)");
    }
}
