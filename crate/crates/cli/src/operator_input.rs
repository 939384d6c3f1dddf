//! Error-operator input: a full per-site token string, or `P at (coords)`
//! clauses with 1-based coordinates.

use std::sync::LazyLock;

use regex::Regex;
use subsyscode::pauli::parse_with_len;
use subsyscode::{CodeLayout, Pauli, PauliOperator};

pub const SYNTAX_HELP: &str = "\
Error operators (--error) take one of two forms:
  token string   one of I X Y Z per site in site order, optional leading
                 phase (+1 -1 +i -i), e.g. \"IIIIZIIII\" for 2D n=3
  clauses        P at (r,c) in 2D or P at (x,y,z) in 3D, 1-based, separated
                 by commas, semicolons or spaces, e.g. \"Z at (2,2), X at (1,3)\"
                 Clauses on the same site multiply.";

static CLAUSE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"([IXYZ])\s*at\s*\(([^)]*)\)").unwrap());
static SEPARATOR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[\s,;*]*$").unwrap());

pub fn parse_operator(layout: &CodeLayout, text: &str) -> Result<PauliOperator, String> {
    if !text.contains("at") {
        return parse_with_len(text, layout.num_sites()).map_err(|e| e.to_string());
    }
    let mut op = PauliOperator::identity(layout.num_sites());
    let mut last = 0;
    for cap in CLAUSE.captures_iter(text) {
        let whole = cap.get(0).unwrap();
        check_gap(&text[last..whole.start()])?;
        last = whole.end();
        let pauli = Pauli::from_symbol(cap[1].chars().next().unwrap()).unwrap();
        let coords = cap[2]
            .split(',')
            .map(|c| {
                let c = c.trim();
                match c.parse::<usize>() {
                    Ok(v) if v >= 1 && v <= layout.n() => Ok(v - 1),
                    _ => Err(format!(
                        "coordinate {c:?} is not in 1..={} in {:?}",
                        layout.n(),
                        whole.as_str()
                    )),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let site = layout.site_index(&coords).map_err(|e| e.to_string())?;
        op.apply_site(site, pauli);
    }
    if last == 0 {
        return Err(format!("no \"P at (coords)\" clause in {text:?}"));
    }
    check_gap(&text[last..])?;
    Ok(op)
}

fn check_gap(gap: &str) -> Result<(), String> {
    if SEPARATOR.is_match(gap) {
        Ok(())
    } else {
        Err(format!("unexpected text {:?} between clauses", gap.trim()))
    }
}

/// Non-identity sites as `P(coords)` with 1-based coordinates, or `I`.
pub fn format_operator(layout: &CodeLayout, op: &PauliOperator) -> String {
    let parts: Vec<String> = op
        .support()
        .map(|s| {
            let coords: Vec<String> = layout
                .coords(s)
                .iter()
                .map(|c| (c + 1).to_string())
                .collect();
            format!("{}({})", op.site(s).symbol(), coords.join(","))
        })
        .collect();
    if parts.is_empty() {
        "I".into()
    } else {
        parts.join(" ")
    }
}
