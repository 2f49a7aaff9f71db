use super::Formula;

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => PREC_IFF,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) | Formula::Knows(..) | Formula::Assign(..) => PREC_UNARY,
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Pred(..) => PREC_ATOM,
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree, except
/// that an equation directly under a unary operator is always parenthesised.
/// `~K{t}~φ` and `~[?x := t]~φ` are printed in their dual forms.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Eq(l, r) => {
            out.push_str(&l.to_string());
            out.push_str(" = ");
            out.push_str(&r.to_string());
        }
        Formula::Pred(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&a.to_string());
                }
                out.push(')');
            }
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Knows(t, body) if matches!(body.as_ref(), Formula::Not(_)) => {
                let Formula::Not(phi) = body.as_ref() else {
                    unreachable!()
                };
                out.push_str(&format!("Kh{{{t}}} "));
                write_operand(out, phi);
            }
            Formula::Assign(x, t, body) if matches!(body.as_ref(), Formula::Not(_)) => {
                let Formula::Not(phi) = body.as_ref() else {
                    unreachable!()
                };
                out.push_str(&format!("<?{x} := {t}> "));
                write_operand(out, phi);
            }
            _ => {
                out.push('~');
                write_operand(out, inner);
            }
        },
        Formula::Knows(t, body) => {
            out.push_str(&format!("K{{{t}}} "));
            write_operand(out, body);
        }
        Formula::Assign(x, t, body) => {
            out.push_str(&format!("[?{x} := {t}] "));
            write_operand(out, body);
        }
        Formula::And(l, r) => write_binary(out, l, " & ", r, PREC_AND, false),
        Formula::Or(l, r) => write_binary(out, l, " | ", r, PREC_OR, false),
        Formula::Implies(l, r) => write_binary(out, l, " -> ", r, PREC_IMPLIES, true),
        Formula::Iff(l, r) => write_binary(out, l, " <-> ", r, PREC_IFF, false),
    }
}

/// Operand of a unary operator.
fn write_operand(out: &mut String, f: &Formula) {
    if precedence(f) < PREC_UNARY || matches!(f, Formula::Eq(..)) {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_binary(out: &mut String, l: &Formula, op: &str, r: &Formula, prec: u8, right_assoc: bool) {
    let lp = precedence(l);
    let rp = precedence(r);
    let paren_l = lp < prec || (lp == prec && right_assoc);
    let paren_r = rp < prec || (rp == prec && !right_assoc);
    write_side(out, l, paren_l);
    out.push_str(op);
    write_side(out, r, paren_r);
}

fn write_side(out: &mut String, f: &Formula, paren: bool) {
    if paren {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}
