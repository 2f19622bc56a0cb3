//! Pretty-printer producing text that parses back to the same theory.

use std::fmt::Write;

use super::{Formula, Theory, TheoryOrientation};

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, false);
    s
}

/// `nested` marks a position inside a conjunction or disjunction, where
/// compound formulas need parentheses.
fn write_formula(out: &mut String, f: &Formula, nested: bool) {
    match f {
        Formula::Rel { name, args } => {
            let _ = write!(out, "{name}({})", args.join(", "));
        }
        Formula::Eq { lhs, rhs, .. } => {
            let _ = write!(out, "{lhs} = {rhs}");
        }
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::And(fs) | Formula::Or(fs) => {
            let sep = if matches!(f, Formula::And(_)) { " & " } else { " | " };
            if nested {
                out.push('(');
            }
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_formula(out, g, true);
            }
            if nested {
                out.push(')');
            }
        }
        Formula::Exists { var, sort, body } => {
            if nested {
                out.push('(');
            }
            let _ = write!(out, "exists {var}:{sort}. ");
            write_formula(out, body, false);
            if nested {
                out.push(')');
            }
        }
    }
}

pub fn print_theory(t: &Theory) -> String {
    let mut out = format!("theory {} {{\n", t.name);
    for s in &t.signature.sorts {
        let _ = writeln!(out, "  sort {s};");
    }
    for r in &t.signature.relations {
        let _ = writeln!(out, "  rel {}({});", r.name, r.arity.join(", "));
    }
    for ax in &t.axioms {
        let ctx: Vec<String> = ax.context.iter().map(|(v, s)| format!("{v}:{s}")).collect();
        let _ =
            writeln!(out, "  axiom [{}]: {} |- {};", ctx.join(", "), print_formula(&ax.lhs), print_formula(&ax.rhs));
    }
    let o = match t.orientation {
        TheoryOrientation::LH => "LH",
        TheoryOrientation::PS => "PS",
    };
    let _ = writeln!(out, "  orientation {o};");
    out.push_str("}\n");
    out
}
