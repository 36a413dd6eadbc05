//! The `FLATCHAIN 1` text format.
//!
//! ```text
//! FLATCHAIN 1
//! dim 2 extent 4 4 periodic 0 0
//! degree 1
//! E 0 0 X 1
//! E 1 0 Y -1
//! ```
//!
//! Planar edges are `E x y X|Y c` and faces `F x y c`; in 3D edges are
//! `E x y z X|Y|Z c`, faces `F x y z XY|YZ|XZ c` and cubes `C x y z c`.
//! Coefficients are nonzero decimal numbers. Writers emit cells in id order.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{mask_label, parse_mask_label, Cell, Chain, CubicalComplex};
use crate::error::{Error, Result};
use crate::numfmt;

const MAGIC: &str = "FLATCHAIN 1";

/// Serializes a chain. Degree-0 chains have no representation.
pub fn write_chain(chain: &Chain) -> Result<String> {
    let cx = chain.complex();
    if chain.degree() == 0 {
        return Err(Error::Unsupported(
            "the chain format has no vertex records".into(),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "{}", cx.describe());
    let _ = writeln!(out, "degree {}", chain.degree());
    for (cell, c) in chain.cells() {
        out.push_str(&cell_record(cx, &cell));
        out.push(' ');
        out.push_str(&numfmt::coefficient(c));
        out.push('\n');
    }
    Ok(out)
}

fn cell_record(cx: &CubicalComplex, cell: &Cell) -> String {
    let [x, y, z] = cell.coords;
    let tag = match cell.degree() {
        1 => 'E',
        2 => 'F',
        _ => 'C',
    };
    match (cx.dimension(), cell.degree()) {
        (2, 1) => format!("E {x} {y} {}", mask_label(cell.axes)),
        (2, _) => format!("F {x} {y}"),
        (_, 3) => format!("C {x} {y} {z}"),
        _ => format!("{tag} {x} {y} {z} {}", mask_label(cell.axes)),
    }
}

/// Parses a chain, building its complex from the header.
pub fn read_chain(text: &str) -> Result<Chain> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (n, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if magic != MAGIC {
        return Err(Error::parse(n, format!("expected `{MAGIC}`")));
    }

    let (n, header) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing complex header"))?;
    let complex = parse_header(n, header)?;

    let (n, deg_line) = lines
        .next()
        .ok_or_else(|| Error::parse(3, "missing degree line"))?;
    let degree = match deg_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["degree", k] => k
            .parse::<usize>()
            .map_err(|_| Error::parse(n, "degree must be a non-negative integer"))?,
        _ => return Err(Error::parse(n, "expected `degree <k>`")),
    };
    if degree == 0 || degree > complex.dimension() {
        return Err(Error::parse(
            n,
            format!(
                "degree {degree} not representable in a {}-dimensional complex",
                complex.dimension()
            ),
        ));
    }

    let mut chain = Chain::zero(&complex, degree)?;
    let mut seen = BTreeSet::new();
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let (cell, c) = parse_record(&complex, n, line)?;
        if cell.degree() != degree {
            return Err(Error::parse(
                n,
                format!("cell of degree {} in a degree-{degree} chain", cell.degree()),
            ));
        }
        let id = complex
            .cell_id(&cell)
            .ok_or_else(|| Error::parse(n, format!("{cell} is outside the complex")))?;
        if !seen.insert(id) {
            return Err(Error::parse(n, format!("duplicate cell {cell}")));
        }
        chain.add_term(id, c);
    }
    Ok(chain)
}

fn parse_header(n: usize, line: &str) -> Result<Arc<CubicalComplex>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let bad = || Error::parse(n, "expected `dim <D> extent <n>... periodic <0|1>...`");
    if tokens.len() < 2 || tokens[0] != "dim" {
        return Err(bad());
    }
    let dim: usize = tokens[1].parse().map_err(|_| bad())?;
    if dim != 2 && dim != 3 {
        return Err(Error::parse(n, format!("unsupported dimension {dim}")));
    }
    if tokens.len() != 4 + 2 * dim || tokens[2] != "extent" || tokens[3 + dim] != "periodic" {
        return Err(bad());
    }
    let extent = tokens[3..3 + dim]
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    let periodic = tokens[4 + dim..]
        .iter()
        .map(|t| match *t {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        })
        .collect::<Result<Vec<_>>>()?;
    CubicalComplex::build(dim, &extent, &periodic).map_err(|e| Error::parse(n, e.to_string()))
}

fn parse_record(cx: &CubicalComplex, n: usize, line: &str) -> Result<(Cell, f64)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let dim = cx.dimension();
    let coord = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::parse(n, format!("bad coordinate `{t}`")))
    };
    let (cell, coeff_tok) = match (dim, tokens.as_slice()) {
        (2, ["E", x, y, axis, c]) => {
            let mask = edge_mask(n, axis, 2)?;
            (Cell::new([coord(x)?, coord(y)?, 0], mask), *c)
        }
        (2, ["F", x, y, c]) => (Cell::face2(coord(x)?, coord(y)?), *c),
        (3, ["E", x, y, z, axis, c]) => {
            let mask = edge_mask(n, axis, 3)?;
            (Cell::new([coord(x)?, coord(y)?, coord(z)?], mask), *c)
        }
        (3, ["F", x, y, z, plane, c]) => {
            let mask = match *plane {
                "XY" | "YZ" | "XZ" => parse_mask_label(plane).expect("valid plane"),
                _ => return Err(Error::parse(n, format!("bad face plane `{plane}`"))),
            };
            (Cell::new([coord(x)?, coord(y)?, coord(z)?], mask), *c)
        }
        (3, ["C", x, y, z, c]) => (Cell::new([coord(x)?, coord(y)?, coord(z)?], 0b111), *c),
        _ => return Err(Error::parse(n, format!("malformed cell record `{line}`"))),
    };
    Ok((cell, parse_coefficient(n, coeff_tok)?))
}

fn edge_mask(n: usize, axis: &str, dim: usize) -> Result<u8> {
    match (axis, dim) {
        ("X", _) => Ok(1),
        ("Y", _) => Ok(2),
        ("Z", 3) => Ok(4),
        _ => Err(Error::parse(n, format!("bad edge axis `{axis}`"))),
    }
}

fn parse_coefficient(n: usize, tok: &str) -> Result<f64> {
    let digits = tok.strip_prefix(['-', '+']).unwrap_or(tok);
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let well_formed = !digits.is_empty()
        && !(int.is_empty() && frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
        && !(digits.contains('.') && frac.is_empty());
    if !well_formed {
        return Err(Error::parse(n, format!("bad coefficient `{tok}`")));
    }
    let value: f64 = tok
        .parse()
        .map_err(|_| Error::parse(n, format!("bad coefficient `{tok}`")))?;
    if value == 0.0 {
        return Err(Error::parse(n, "zero coefficients are not allowed"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Axis;

    #[test]
    fn writes_planar_chain() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let c = Chain::from_cells(
            &cx,
            1,
            [
                (Cell::edge2(1, 0, Axis::Y), -1.0),
                (Cell::edge2(0, 0, Axis::X), 0.5),
            ],
        )
        .unwrap();
        let text = write_chain(&c).unwrap();
        assert_eq!(
            text,
            "FLATCHAIN 1\ndim 2 extent 2 2 periodic 0 0\ndegree 1\nE 0 0 X 0.5\nE 1 0 Y -1\n"
        );
        assert_eq!(read_chain(&text).unwrap(), c);
    }

    #[test]
    fn reads_three_dimensional_records() {
        let text = "FLATCHAIN 1\ndim 3 extent 2 2 3 periodic 0 0 1\ndegree 2\n\
                    F 0 0 0 XY 1\nF 1 0 1 YZ -2\nF 0 1 0 XZ 3.25\n";
        let c = read_chain(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.coefficient(&Cell::new([1, 0, 1], 0b110)), -2.0);
        assert_eq!(c.complex().periodic(), &[false, false, true]);
        assert_eq!(read_chain(&write_chain(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn rejects_malformed_input() {
        let head = "FLATCHAIN 1\ndim 2 extent 2 2 periodic 0 0\ndegree 1\n";
        for body in [
            "E 0 0 X 0\n",
            "E 0 0 Z 1\n",
            "E 5 0 X 1\n",
            "F 0 0 1\n",
            "E 0 0 X 1e3\n",
            "E 0 0 X nan\n",
            "E 0 0 X 1.\n",
            "E 0 0 X 1\nE 0 0 X 1\n",
            "E 0 0 X\n",
        ] {
            assert!(read_chain(&format!("{head}{body}")).is_err(), "{body}");
        }
        assert!(read_chain("FLATCHAIN 2\n").is_err());
        assert!(read_chain("FLATCHAIN 1\ndim 4 extent 1 1 1 1 periodic 0 0 0 0\ndegree 1\n").is_err());
        assert!(read_chain("FLATCHAIN 1\ndim 2 extent 2 2 periodic 0 0\ndegree 0\n").is_err());
        assert!(read_chain("FLATCHAIN 1\ndim 2 extent 2 2 periodic 1 0\ndegree 1\n").is_err());
    }

    #[test]
    fn accepts_signed_decimals() {
        let text = "FLATCHAIN 1\ndim 2 extent 2 2 periodic 0 0\ndegree 2\nF 1 1 -.5\nF 0 1 +2\n";
        let c = read_chain(text).unwrap();
        assert_eq!(c.coefficient(&Cell::face2(1, 1)), -0.5);
        assert_eq!(c.coefficient(&Cell::face2(0, 1)), 2.0);
    }
}
