//! Numeric text output. CSV and SVG use '.' decimal separators regardless of
//! locale; CSV values carry 17 significant digits so doubles round-trip
//! exactly.

pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shorter fixed formatting for SVG coordinates.
pub fn svg_coord(x: f64) -> String {
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips() {
        for x in [0.1, -3.7224194364083982, 1.0 / 3.0, 6.02e23, 5e-324, 0.0] {
            let s = g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
