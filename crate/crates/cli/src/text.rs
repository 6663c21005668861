//! Text rendering. Numbers carry 6 significant digits.

use coaxial::SymMatrix;

/// `%g`-style formatting with 6 significant digits.
pub fn g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding can carry into the next decade, e.g. 999999.5
    let sci = format!("{x:.5e}");
    let exp = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let (mant, e) = sci.split_once('e').expect("scientific format");
        format!("{}e{e}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn vector(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| g6(*x)).collect();
    format!("({})", items.join(", "))
}

/// Rows of a symmetric matrix, columns right-aligned.
pub fn matrix(m: &SymMatrix, indent: &str) -> String {
    let n = m.dim();
    let cells: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| g6(m.get(i, j))).collect()).collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let r: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
            format!("{indent}[{}]", r.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::g6;

    #[test]
    fn six_significant_digits() {
        assert_eq!(g6(1.0), "1");
        assert_eq!(g6(-7.0 / 3.0), "-2.33333");
        assert_eq!(g6(123456.7), "123457");
        assert_eq!(g6(999999.7), "1e6");
        assert_eq!(g6(1.5e-7), "1.5e-7");
        assert_eq!(g6(0.000123), "0.000123");
        assert_eq!(g6(0.0), "0");
    }
}
