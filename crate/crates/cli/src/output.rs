use std::io::IsTerminal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Table on a terminal, JSON lines otherwise.
    Auto,
    Json,
    Table,
}

impl Format {
    pub fn table(self) -> bool {
        match self {
            Format::Auto => std::io::stdout().is_terminal(),
            Format::Json => false,
            Format::Table => true,
        }
    }
}

/// `x` with `digits` significant digits, fixed notation for moderate
/// magnitudes and scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// Left-aligned first column, right-aligned others.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.zip(&width).enumerate() {
            if i == 0 {
                s.push_str(&format!("{cell:<w$}"));
            } else {
                s.push_str(&format!("  {cell:>w$}"));
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(&mut header.iter().copied());
    out.push('\n');
    let total: usize = width.iter().sum::<usize>() + 2 * (width.len() - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.155625, 12), "0.155625000000");
        assert_eq!(sig(11.0 / 144.0, 12), "0.0763888888889");
        assert_eq!(sig(2.893518518518e-5, 12), "2.89351851852e-5");
        assert_eq!(sig(0.0, 12), "0");
    }

    #[test]
    fn columns_align() {
        let t = table(
            &["name", "value"],
            &[
                vec!["I1".into(), "1.5".into()],
                vec!["I10".into(), "12.25".into()],
            ],
        );
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "name  value");
        assert_eq!(lines[2], "I1      1.5");
        assert_eq!(lines[3], "I10   12.25");
    }
}
