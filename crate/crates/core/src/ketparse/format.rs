use crate::numlin::C64;
use crate::schmidt::BipartitePureState;

/// Significant digits used for non-integer coefficients.
const SIG_DIGITS: usize = 12;

/// Canonical `ket-v1` text of a state: one term per Greek basis ket, in basis
/// order, with the Latin combination parenthesized when it has several kets.
///
/// Zero columns are kept as `0|a>(x)|g>` so every label survives a round trip.
pub fn format_state(state: &BipartitePureState) -> String {
    let latin = state.latin_labels();
    let greek = state.greek_labels();
    let amps = state.amplitudes();

    let columns: Vec<Vec<(usize, C64)>> = (0..greek.len())
        .map(|nu| {
            let col: Vec<(usize, C64)> = (0..latin.len())
                .map(|n| (n, amps[(n, nu)]))
                .filter(|(_, z)| !is_zero(*z))
                .collect();
            if col.is_empty() {
                vec![(0, C64::default())]
            } else {
                col
            }
        })
        .collect();

    // Latin labels are numbered by first appearance, so the first term lists
    // all of them when the natural output would reorder or drop one.
    let mut seen = Vec::new();
    for (n, _) in columns.iter().flatten() {
        if !seen.contains(n) {
            seen.push(*n);
        }
    }
    let in_order = seen.len() == latin.len() && seen.iter().enumerate().all(|(i, &n)| i == n);

    let mut out = String::new();
    for (nu, col) in columns.iter().enumerate() {
        let full;
        let col = if nu == 0 && !in_order {
            full = (0..latin.len()).map(|n| (n, amps[(n, 0)])).collect::<Vec<_>>();
            &full
        } else {
            col
        };

        if let [(n, z)] = col.as_slice() {
            let (negative, text) = coefficient(*z);
            push_sign(&mut out, negative, nu == 0);
            out.push_str(&format!("{text}|{}>", latin[*n]));
        } else {
            push_sign(&mut out, false, nu == 0);
            out.push('(');
            for (k, (n, z)) in col.iter().enumerate() {
                let (negative, text) = coefficient(*z);
                push_sign(&mut out, negative, k == 0);
                out.push_str(&format!("{text}|{}>", latin[*n]));
            }
            out.push(')');
        }
        out.push_str(&format!("(x)|{}>", greek[nu]));
    }
    out
}

fn push_sign(out: &mut String, negative: bool, first: bool) {
    match (first, negative) {
        (true, false) => {}
        (true, true) => out.push('-'),
        (false, false) => out.push_str(" + "),
        (false, true) => out.push_str(" - "),
    }
}

fn is_zero(z: C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// Splits a coefficient into a sign and the text written before the ket.
/// A unit coefficient is written as nothing.
fn coefficient(z: C64) -> (bool, String) {
    if is_zero(z) {
        (false, "0".into())
    } else if z.im == 0.0 {
        let mag = z.re.abs();
        let text = if mag == 1.0 { String::new() } else { format_real(mag) };
        (z.re < 0.0, text)
    } else if z.re == 0.0 {
        let mag = z.im.abs();
        let text = if mag == 1.0 { "i".into() } else { format!("{}i", format_real(mag)) };
        (z.im < 0.0, text)
    } else {
        (false, format_scalar(z))
    }
}

/// Text of an arbitrary scalar in the grammar's coefficient syntax.
pub fn format_scalar(z: C64) -> String {
    if z.im == 0.0 {
        let text = format_real(z.re.abs());
        return if z.re < 0.0 { format!("(-{text}+0i)") } else { text };
    }
    let sign_re = if z.re < 0.0 { "-" } else { "" };
    let sign_im = if z.im < 0.0 { '-' } else { '+' };
    format!(
        "({sign_re}{}{sign_im}{}i)",
        format_real(z.re.abs()),
        format_real(z.im.abs())
    )
}

/// Integers print as integers; everything else with 12 significant digits.
pub(crate) fn format_real(x: f64) -> String {
    debug_assert!(x >= 0.0 && x.is_finite());
    if x == x.trunc() && x < 1e15 {
        return format!("{x:.0}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ketparse::parse_state;

    #[test]
    fn psi0_canonical_text() {
        assert_eq!(format_state(&fixtures::psi0()), fixtures::PSI0_EXPR);
    }

    #[test]
    fn psi_fixtures_round_trip() {
        for name in fixtures::STATE_NAMES {
            let s = fixtures::by_name(name).unwrap();
            let back = parse_state(&format_state(&s)).unwrap();
            assert_eq!(back.amplitudes(), s.amplitudes(), "{name}");
            assert_eq!(back.latin_labels(), s.latin_labels());
            assert_eq!(back.greek_labels(), s.greek_labels());
        }
        assert_eq!(format_state(&fixtures::psi3()), fixtures::PSI3_EXPR);
    }

    #[test]
    fn single_ket() {
        let s = BipartitePureState::from_real(&["a"], &["alpha"], &[[1.0]]).unwrap();
        assert_eq!(format_state(&s), "|a>(x)|alpha>");
    }

    #[test]
    fn zero_rows_and_reordering_survive() {
        let s = BipartitePureState::from_real(&["a", "b", "c"], &["x1", "x2"], &[[0.0, 1.0], [-2.0, 0.0], [0.0, 0.0]])
            .unwrap();
        let text = format_state(&s);
        assert_eq!(text, "(0|a> - 2|b> + 0|c>)(x)|x1> + |a>(x)|x2>");
        let back = parse_state(&text).unwrap();
        assert_eq!(back.amplitudes(), s.amplitudes());
        assert_eq!(back.latin_labels(), s.latin_labels());
    }

    #[test]
    fn zero_column_is_kept() {
        let s = BipartitePureState::from_real(&["a"], &["x1", "x2"], &[[1.0, 0.0]]).unwrap();
        assert_eq!(format_state(&s), "|a>(x)|x1> + 0|a>(x)|x2>");
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(2.0), "2");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(2f64.sqrt()), "1.41421356237");
        assert_eq!(format_real(1.5e-7), "1.5e-7");
        assert_eq!(format_real(1e20), "1e20");
        assert_eq!(format_real(123456.789), "123456.789");
    }

    #[test]
    fn complex_scalars() {
        assert_eq!(format_scalar(C64::new(0.5, -0.25)), "(0.5-0.25i)");
        assert_eq!(format_scalar(C64::new(-1.0, 2.0)), "(-1+2i)");
        assert_eq!(coefficient(C64::new(0.0, -1.0)), (true, "i".into()));
        assert_eq!(coefficient(C64::new(-3.0, 0.0)), (true, "3".into()));
    }
}
