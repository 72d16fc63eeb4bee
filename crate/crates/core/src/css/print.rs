use crate::dsl::{Head, Literal, Term};

use super::*;

/// Renders a term of sort `n` as a selector list.
///
/// Filters print in the order they were applied, so a type selector that is
/// not the innermost filter is introduced by a leading `:is(...)` holding the
/// filters beneath it. `.c` and `#x` are used whenever the value is an
/// identifier; general siblings print as `~`.
pub fn print_selector(t: &Term) -> String {
    let mut out = String::new();
    list(t, &mut out);
    out
}

fn list(t: &Term, out: &mut String) {
    if t.op() == Some(ops::UNION) {
        list(t.child(0), out);
        out.push_str(", ");
        complex(t.child(1), out);
    } else {
        complex(t, out);
    }
}

fn complex(t: &Term, out: &mut String) {
    let comb = match t.op() {
        Some(ops::DESCENDANTS) => " ",
        Some(ops::CHILDREN) => " > ",
        Some(ops::RIGHT_SIBLING) => " ~ ",
        _ => return compound(t, out),
    };
    complex(t.child(0), out);
    out.push_str(comb);
    compound(t.child(1), out);
}

fn is_filter(t: &Term) -> bool {
    matches!(
        t.op(),
        Some(
            ops::NOT
                | ops::NTH_CHILD
                | ops::NTH_LAST_CHILD
                | ops::ATTRIBUTE_EQUALS
                | ops::ATTRIBUTE_CONTAINS
                | ops::ATTRIBUTE_STARTS_WITH
                | ops::ATTRIBUTE_ENDS_WITH
        )
    )
}

fn compound(t: &Term, out: &mut String) {
    let mut filters = Vec::new();
    let mut cur = t;
    while is_filter(cur) {
        filters.push(cur);
        cur = cur.child(0);
    }
    let base = match cur.op() {
        Some(ops::TAG_EQUALS) => {
            is_base(cur.child(0), out);
            let tag = text(cur.child(1));
            if is_ident(&tag) {
                out.push_str(&tag);
            } else {
                // no selector syntax names this tag; no loaded node carries it
                out.push_str(":not(*)");
            }
            true
        }
        _ => is_base(cur, out),
    };
    if !base && filters.is_empty() {
        out.push('*');
    }
    for f in filters.iter().rev() {
        filter(f, out);
    }
}

/// Prints the `:is(...)` prefix for a non-trivial base; false if the base is `Any()`.
fn is_base(t: &Term, out: &mut String) -> bool {
    if t.op() == Some(ops::ANY) {
        return false;
    }
    out.push_str(":is(");
    list(t, out);
    out.push(')');
    true
}

fn text(t: &Term) -> String {
    t.literal()
        .and_then(Literal::text)
        .unwrap_or_default()
        .to_string()
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '-' || c == '_')
        && !s.starts_with(|c: char| c.is_ascii_digit())
}

fn quoted(s: &str) -> String {
    let mut q = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

fn filter(f: &Term, out: &mut String) {
    let Head::Op(op) = f.head() else { return };
    match *op {
        ops::NOT => {
            out.push_str(":not(");
            list(f.child(1), out);
            out.push(')');
        }
        ops::NTH_CHILD | ops::NTH_LAST_CHILD => {
            let first = *op == ops::NTH_CHILD;
            if f.child(1).literal() == Some(&Literal::Int(1)) {
                out.push_str(if first { ":first-child" } else { ":last-child" });
            } else {
                out.push_str(if first {
                    ":nth-child("
                } else {
                    ":nth-last-child("
                });
                out.push_str(&nth(f.child(1)));
                out.push(')');
            }
        }
        _ => {
            let name = text(f.child(1));
            let value = f.child(2).literal().cloned().unwrap_or(Literal::str(""));
            let v = value.text().unwrap_or_default();
            let token = matches!(value, Literal::Token(_));
            if !is_ident(&name) {
                out.push_str(":not(*)");
                return;
            }
            match *op {
                ops::ATTRIBUTE_CONTAINS if token && name == "class" && is_ident(v) => {
                    out.push('.');
                    out.push_str(v);
                }
                ops::ATTRIBUTE_EQUALS if name == "id" && is_ident(v) && !token => {
                    out.push('#');
                    out.push_str(v);
                }
                ops::ATTRIBUTE_CONTAINS if !token && v.is_empty() => {
                    out.push_str(&format!("[{name}]"));
                }
                _ => {
                    let sym = match *op {
                        ops::ATTRIBUTE_EQUALS => "=",
                        ops::ATTRIBUTE_CONTAINS if token => "~=",
                        ops::ATTRIBUTE_CONTAINS => "*=",
                        ops::ATTRIBUTE_STARTS_WITH => "^=",
                        _ => "$=",
                    };
                    out.push_str(&format!("[{name}{sym}{}]", quoted(v)));
                }
            }
        }
    }
}

fn nth(i: &Term) -> String {
    if let Some(Literal::Int(k)) = i.literal() {
        return k.to_string();
    }
    let lit = |t: &Term| match t.literal() {
        Some(Literal::Int(k)) => *k,
        _ => 0,
    };
    let (a, b) = (lit(i.child(0)), lit(i.child(1)));
    let an = match a {
        1 => "n".to_string(),
        -1 => "-n".to_string(),
        a => format!("{a}n"),
    };
    match b {
        0 => an,
        b if b > 0 => format!("{an}+{b}"),
        b => format!("{an}{b}"),
    }
}
