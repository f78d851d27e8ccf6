//! Human-readable tables. Numbers are printed like C's `%g`: six significant
//! digits, trailing zeros dropped.

use std::fmt::Write;

use schmidt_core::report::{AnalysisReport, DensityReport, LabeledMatrix, Mode};

pub fn g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // rounding first settles the exponent, e.g. 9.999996 -> 1.00000e1
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        trim_zeros(format!("{:.*}", (5 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_owned()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

// Parts below this are roundoff from the eigensolver; the JSON keeps them.
const CHOP: f64 = 1e-12;

fn complex([re, im]: [f64; 2]) -> String {
    let re = if re.abs() < CHOP { 0.0 } else { re };
    let im = if im.abs() < CHOP { 0.0 } else { im };
    match (re == 0.0, im == 0.0) {
        (_, true) => g6(re),
        (true, false) => format!("{}i", g6(im)),
        (false, false) if im < 0.0 => format!("{}-{}i", g6(re), g6(-im)),
        _ => format!("{}+{}i", g6(re), g6(im)),
    }
}

fn list(values: &[f64]) -> String {
    values.iter().map(|&v| g6(v)).collect::<Vec<_>>().join("  ")
}

fn field(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key:<14}{value}").unwrap();
}

fn components(m: &Mode) -> String {
    let parts: Vec<String> = m
        .components
        .iter()
        .map(|c| format!("{}: {}", c.label, complex([c.re, c.im])))
        .collect();
    parts.join("   ")
}

pub fn analysis_table(r: &AnalysisReport) -> String {
    let mut out = String::new();
    field(&mut out, "state", &r.input.expression);
    field(&mut out, "grammar", &r.input.grammar);
    field(&mut out, "norm", g6(r.normalization_factor));
    field(&mut out, "lambdas", list(&r.lambdas));
    field(&mut out, "K", g6(r.schmidt_number));
    field(&mut out, "entropy", format!("{} bits", g6(r.entropy_bits)));
    field(&mut out, "rank", r.rank);
    field(&mut out, "entangled", if r.entangled { "yes" } else { "no" });
    let side = format!("{:?}", r.diagonalized).to_lowercase();
    field(&mut out, "diagonalized", side);
    field(&mut out, "threshold", g6(r.rank_threshold));
    field(&mut out, "residual", g6(r.reconstruction_residual));
    if let (Some(latin), Some(greek)) = (&r.latin_modes, &r.greek_modes) {
        for (k, (f, phi)) in latin.iter().zip(greek).enumerate() {
            writeln!(out, "\nmode {}  lambda {}", k + 1, g6(f.lambda)).unwrap();
            writeln!(out, "  F    {}", components(f)).unwrap();
            writeln!(out, "  Phi  {}", components(phi)).unwrap();
        }
    }
    out.trim_end().to_owned()
}

fn grid(out: &mut String, m: &LabeledMatrix, indent: &str) {
    let cells: Vec<Vec<String>> = m.entries.iter().map(|row| row.iter().map(|&z| complex(z)).collect()).collect();
    let width = cells
        .iter()
        .flatten()
        .chain(m.labels.iter())
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let label_width = m.labels.iter().map(|s| s.chars().count()).max().unwrap_or(1);
    write!(out, "{indent}{:label_width$}", "").unwrap();
    for l in &m.labels {
        write!(out, "  {l:>width$}").unwrap();
    }
    out.push('\n');
    for (l, row) in m.labels.iter().zip(&cells) {
        write!(out, "{indent}{l:label_width$}").unwrap();
        for c in row {
            write!(out, "  {c:>width$}").unwrap();
        }
        out.push('\n');
    }
}

pub fn density_table(r: &DensityReport) -> String {
    let mut out = String::new();
    writeln!(out, "{}: density matrix", r.name).unwrap();
    grid(&mut out, &r.matrix, "  ");
    field(&mut out, "eigenvalues", list(&r.eigenvalues));
    field(&mut out, "purity", g6(r.purity));
    for red in &r.reduced {
        writeln!(out, "\nreduced {}  (purity {})", red.subsystem, g6(red.purity)).unwrap();
        grid(&mut out, &red.matrix, "  ");
    }
    for c in &r.conditionals {
        writeln!(out, "\nB given A = {}  (probability {})", c.outcome, g6(c.probability)).unwrap();
        grid(&mut out, &c.state, "  ");
    }
    let at: Vec<String> = r
        .differs_at
        .iter()
        .map(|&[i, j]| format!("({},{})", r.matrix.labels[i], r.matrix.labels[j]))
        .collect();
    let at = if at.is_empty() { "nowhere".to_owned() } else { at.join(" ") };
    writeln!(out, "\ndiffers from {} at {at}", r.compared_with).unwrap();
    out.trim_end().to_owned()
}
