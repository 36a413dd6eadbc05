//! Neighbourhood stencils and their cut weights.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Pixel neighbourhood used for the perimeter term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connectivity {
    /// Shared pixel edges with weight 1: the exact unit-metric perimeter.
    Four,
    /// Cauchy–Crofton weights on the 8-neighbourhood.
    Eight,
    /// Cauchy–Crofton weights on the 16-neighbourhood.
    Sixteen,
}

impl Connectivity {
    pub fn neighbours(self) -> usize {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
            Connectivity::Sixteen => 16,
        }
    }

    /// One offset per undirected neighbour pair, with its cut weight.
    pub fn stencil(self) -> Vec<((i64, i64), f64)> {
        match self {
            Connectivity::Four => vec![((1, 0), 1.0), ((0, 1), 1.0)],
            Connectivity::Eight => crofton(&[(1, 0), (1, 1), (0, 1), (-1, 1)]),
            Connectivity::Sixteen => crofton(&[
                (1, 0),
                (2, 1),
                (1, 1),
                (1, 2),
                (0, 1),
                (-1, 2),
                (-1, 1),
                (-2, 1),
            ]),
        }
    }
}

/// Weights `dtheta / (2 |e|)` for unit grid spacing, where `dtheta` is the
/// half-gap to each angular neighbour on the half circle `[0, pi)`.
fn crofton(offsets: &[(i64, i64)]) -> Vec<((i64, i64), f64)> {
    let angles: Vec<f64> = offsets
        .iter()
        .map(|&(x, y)| (y as f64).atan2(x as f64))
        .collect();
    let n = angles.len();
    (0..n)
        .map(|k| {
            let prev = if k == 0 { angles[n - 1] - PI } else { angles[k - 1] };
            let next = if k + 1 == n { angles[0] + PI } else { angles[k + 1] };
            let dtheta = (next - prev) / 2.0;
            let (x, y) = offsets[k];
            let len = ((x * x + y * y) as f64).sqrt();
            (offsets[k], dtheta / (2.0 * len))
        })
        .collect()
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.neighbours())
    }
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "4" => Ok(Connectivity::Four),
            "8" => Ok(Connectivity::Eight),
            "16" => Ok(Connectivity::Sixteen),
            _ => Err(Error::InvalidParameter(format!(
                "connectivity must be 4, 8 or 16, got `{s}`"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_partition_covers_half_circle() {
        for conn in [Connectivity::Eight, Connectivity::Sixteen] {
            let total: f64 = conn
                .stencil()
                .iter()
                .map(|&((x, y), w)| w * 2.0 * ((x * x + y * y) as f64).sqrt())
                .sum();
            assert!((total - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn eight_neighbourhood_weights() {
        let s = Connectivity::Eight.stencil();
        assert!((s[0].1 - PI / 8.0).abs() < 1e-15);
        assert!((s[1].1 - PI / (8.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn parses_and_prints() {
        for c in [Connectivity::Four, Connectivity::Eight, Connectivity::Sixteen] {
            assert_eq!(c.to_string().parse::<Connectivity>().unwrap(), c);
        }
        assert!("6".parse::<Connectivity>().is_err());
    }
}
